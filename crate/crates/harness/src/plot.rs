//! Two-panel SVG: quality ratio against `p` on the left (mean with a ±1 std
//! band, random baseline dashed), embeddable-size ratio on the right.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::experiment::ResultRow;

const WIDTH: f64 = 980.0;
const HEIGHT: f64 = 420.0;
const PANEL_W: f64 = 380.0;
const PANEL_H: f64 = 280.0;
const TOP: f64 = 60.0;
const LEFTS: [f64; 2] = [80.0, 560.0];
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Axis range padded by 5%, widened when flat.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { (hi - lo) * 0.05 } else { lo.abs().max(1.0) * 0.1 };
    (lo - pad, hi + pad)
}

struct Panel {
    left: f64,
    y: (f64, f64),
}

impl Panel {
    fn px(&self, p: f64) -> f64 {
        self.left + p * PANEL_W
    }

    fn py(&self, v: f64) -> f64 {
        TOP + PANEL_H - (v - self.y.0) / (self.y.1 - self.y.0) * PANEL_H
    }

    fn frame(&self, s: &mut String, title: &str, ylabel: &str) {
        let (l, r, b) = (self.left, self.left + PANEL_W, TOP + PANEL_H);
        let _ = writeln!(s, r##"<rect x="{l}" y="{TOP}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#333"/>"##);
        for k in 0..=5 {
            let p = k as f64 / 5.0;
            let x = self.px(p);
            let _ = writeln!(s, r##"<line x1="{x}" y1="{b}" x2="{x}" y2="{}" stroke="#333"/>"##, b + 5.0);
            let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{p:.1}</text>"#, b + 20.0);
            let v = self.y.0 + (self.y.1 - self.y.0) * p;
            let y = self.py(v);
            let _ = writeln!(s, r##"<line x1="{}" y1="{y}" x2="{l}" y2="{y}" stroke="#333"/>"##, l - 5.0);
            let _ = writeln!(s, r##"<line x1="{l}" y1="{y}" x2="{r}" y2="{y}" stroke="#ddd"/>"##);
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, l - 8.0, y + 4.0, tick(v));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-weight="bold">{}</text>"#, l + PANEL_W / 2.0, TOP - 12.0, escape(title));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">pruning fraction p</text>"#, l + PANEL_W / 2.0, b + 40.0);
        let (cx, cy) = (l - 55.0, TOP + PANEL_H / 2.0);
        let _ = writeln!(s, r#"<text x="{cx}" y="{cy}" text-anchor="middle" transform="rotate(-90 {cx} {cy})">{}</text>"#, escape(ylabel));
    }

    fn polyline(&self, s: &mut String, points: &[(f64, f64)], color: &str) {
        if points.is_empty() {
            return;
        }
        let coords: Vec<String> =
            points.iter().map(|&(p, v)| format!("{:.2},{:.2}", self.px(p), self.py(v))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, coords.join(" "));
        for c in coords {
            let (x, y) = c.split_once(',').expect("formatted pair");
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/>"#);
        }
    }
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Renders one or more tables, one colour each, into a self-contained SVG.
pub fn render_plot(title: &str, series: &[(String, &[ResultRow])]) -> Result<String> {
    if series.is_empty() || series.iter().any(|(_, rows)| rows.is_empty()) {
        return Err(HarnessError::EmptyTable);
    }
    let all = || series.iter().flat_map(|(_, rows)| rows.iter());
    let quality = Panel {
        left: LEFTS[0],
        y: range(all().flat_map(|r| [r.mean_ratio - r.std_ratio, r.mean_ratio + r.std_ratio, r.baseline_ratio])),
    };
    let embed = Panel { left: LEFTS[1], y: range(all().filter_map(|r| r.embeddable_ratio).chain([1.0])) };

    let ly = TOP + PANEL_H + 62.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title));
    quality.frame(&mut s, "solution quality", "ratio v / v_ref");
    embed.frame(&mut s, "embeddable instance size", "size ratio vs. unpruned");

    for (k, (label, rows)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut band: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", quality.px(r.p), quality.py(r.mean_ratio + r.std_ratio)))
            .collect();
        band.extend(
            rows.iter().rev().map(|r| format!("{:.2},{:.2}", quality.px(r.p), quality.py(r.mean_ratio - r.std_ratio))),
        );
        let _ = writeln!(s, r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#, band.join(" "));
        let mean: Vec<(f64, f64)> = rows.iter().map(|r| (r.p, r.mean_ratio)).collect();
        quality.polyline(&mut s, &mean, color);
        let baseline = rows[0].baseline_ratio;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-dasharray="6 4"/>"#,
            quality.px(0.0),
            quality.px(1.0),
            y = quality.py(baseline)
        );
        let curve: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.embeddable_ratio.map(|e| (r.p, e))).collect();
        embed.polyline(&mut s, &curve, color);

        let lx = LEFTS[0] + k as f64 * 160.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 25.0, ly + 4.0, escape(label));
    }
    if series.iter().all(|(_, rows)| rows.iter().all(|r| r.embeddable_ratio.is_none())) {
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="middle" fill="#666">no embedding data</text>"##,
            LEFTS[1] + PANEL_W / 2.0,
            TOP + PANEL_H / 2.0
        );
    }
    let lx = LEFTS[0] + series.len() as f64 * 160.0;
    let _ = writeln!(s, r##"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="#333" stroke-dasharray="6 4"/>"##, lx + 20.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}">random baseline</text>"#, lx + 25.0, ly + 4.0);
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_plot(title: &str, series: &[(String, &[ResultRow])], path: &Path) -> Result<()> {
    let svg = render_plot(title, series)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, svg)?;
    Ok(())
}

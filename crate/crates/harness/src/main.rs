use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qprune::config::{derive_seed, parse_strategy, ChimeraDims, ExperimentConfig, Stream};
use qprune::error::{HarnessError, Result};
use qprune::experiment::{compare_strategies, run_experiment, sweep_effort, Table};
use qprune::io::{read_edge_list, read_instance, read_qubo, solution_json, write_embedding, write_instance, write_qubo};
use qprune::output::{emit_csv, emit_curve_csv, read_config_line, CurveConfig};
use qprune::plot::emit_plot;
use qprune_core::embedding::{embeddable_curve, find_embedding, DEFAULT_PROBE_ATTEMPTS};
use qprune_core::problems::generate::{desk_instance, Family, DESK_SEED};
use qprune_core::problems::{decode, ProblemKind};
use qprune_core::sampler::brute_force;
use serde_json::json;

/// Approximation-by-pruning experiments on QUBO encodings.
#[derive(Parser)]
#[command(name = "qprune", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one pruning schedule and write results.csv and results.svg.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Run several strategies on shared seeds.
    Compare {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Comma-separated strategies, e.g. fraction,threshold,random:7.
        #[arg(long, value_delimiter = ',', default_value = "fraction,threshold,random")]
        strategies: Vec<String>,
    },
    /// Repeat one schedule at several annealing efforts.
    SweepEffort {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long)]
        strategy: Option<String>,
        /// Comma-separated sweep counts.
        #[arg(long = "sweeps-list", value_delimiter = ',', default_value = "1000,2000,4000")]
        sweeps_list: Vec<usize>,
    },
    /// Largest embeddable instance size of a generated family at every p.
    EmbedCurve {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value = "fraction")]
        strategy: String,
        #[arg(long, default_value_t = 0.05)]
        granularity: f64,
        #[arg(long, default_value_t = ChimeraDims::C16)]
        chimera: ChimeraDims,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Embedding attempts per size probe.
        #[arg(long, default_value_t = DEFAULT_PROBE_ATTEMPTS)]
        attempts: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Brute-force minimum of a QUBO file, or of an instance's QUBO.
    Oracle {
        #[arg(long, conflicts_with_all = ["problem", "instance"], required_unless_present = "instance")]
        qubo: Option<PathBuf>,
        #[arg(long, requires = "instance")]
        problem: Option<String>,
        #[arg(long, requires = "problem")]
        instance: Option<PathBuf>,
    },
    /// Write a desk-scale instance file (and optionally its QUBO).
    Generate {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = DESK_SEED)]
        seed: u64,
        /// Instance file to write.
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        qubo: Option<PathBuf>,
    },
    /// Embed an edge-list graph and export `logical_id: q1,q2,...` lines.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = ChimeraDims::C16)]
        chimera: ChimeraDims,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PROBE_ATTEMPTS)]
        attempts: usize,
        /// Embedding file to write; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output directory.
    #[arg(long = "out", env = "QPRUNE_OUT_DIR")]
    dir: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Start from a JSON config or from the config line of a result CSV;
    /// other flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Master seed; every other seed is derived from it.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    granularity: Option<f64>,
    #[arg(long)]
    chimera: Option<ChimeraDims>,
    /// Embedding attempts per schedule step.
    #[arg(long)]
    embed_attempts: Option<usize>,
    /// Attempts per size probe of the embeddable-size curve (0 skips it).
    #[arg(long)]
    curve_attempts: Option<usize>,
    #[command(flatten)]
    out: OutArg,
}

impl ExperimentArgs {
    fn config(&self, strategy: Option<&String>) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => {
                let (Some(problem), Some(instance)) = (&self.problem, &self.instance) else {
                    return Err(HarnessError::config("--problem and --instance are required without --config"));
                };
                ExperimentConfig::new(parse_kind(problem)?, instance.clone())
            }
        };
        if self.config.is_some() {
            if let Some(p) = &self.problem {
                cfg.problem = parse_kind(p)?.name().to_string();
            }
            if let Some(i) = &self.instance {
                cfg.instance = i.clone();
            }
        }
        if let Some(s) = strategy {
            cfg.strategy = s.clone();
        }
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.runs {
            cfg.n_runs = v;
        }
        if let Some(v) = self.sweeps {
            cfg.sampler.sweeps = v;
        }
        if let Some(v) = self.granularity {
            cfg.granularity = v;
        }
        if let Some(v) = self.chimera {
            cfg.chimera = v;
        }
        if let Some(v) = self.embed_attempts {
            cfg.embed_attempts = v;
        }
        if let Some(v) = self.curve_attempts {
            cfg.curve_attempts = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| HarnessError::Read { path: path.to_path_buf(), source })?;
    match read_config_line(&text) {
        Some(cfg) => cfg,
        None => ExperimentConfig::from_json(&text),
    }
}

fn parse_kind(name: &str) -> Result<ProblemKind> {
    ProblemKind::parse(name).ok_or_else(|| HarnessError::config(format!("unknown problem kind {name:?}")))
}

/// `random:7` becomes `random-7`.
fn file_tag(strategy: &str) -> String {
    strategy.replace(':', "-")
}

fn report(tables: &[Table]) {
    let mut seen = Vec::new();
    for w in tables.iter().flat_map(|t| &t.warnings) {
        if !seen.contains(&w) {
            eprintln!("warning: {w}");
            seen.push(w);
        }
    }
}

fn write_tables(dir: &Path, title: &str, stem: &str, named: &[(String, &Table)]) -> Result<()> {
    for (tag, table) in named {
        let path = dir.join(format!("{stem}{tag}.csv"));
        emit_csv(table, &path)?;
        println!("{}", path.display());
    }
    let series: Vec<(String, &[qprune::ResultRow])> =
        named.iter().map(|(tag, t)| (tag.trim_start_matches('-').to_string(), t.rows.as_slice())).collect();
    let plot = dir.join(format!("{}.svg", stem.trim_end_matches('-')));
    emit_plot(title, &series, &plot)?;
    println!("{}", plot.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { exp, strategy } => {
            let cfg = exp.config(strategy.as_ref())?;
            let table = run_experiment(&cfg)?;
            report(std::slice::from_ref(&table));
            let title = format!("{} / {}", cfg.problem, cfg.strategy);
            write_tables(&exp.out.dir, &title, "results", &[(String::new(), &table)])
        }
        Command::Compare { exp, strategies } => {
            let cfg = exp.config(None)?;
            for s in &strategies {
                parse_strategy(s, cfg.master_seed)?;
            }
            let tables = compare_strategies(&cfg, &strategies)?;
            report(&tables);
            let named: Vec<(String, &Table)> =
                strategies.iter().zip(&tables).map(|(s, t)| (format!("-{}", file_tag(s)), t)).collect();
            write_tables(&exp.out.dir, &format!("{}: strategies", cfg.problem), "compare", &named)
        }
        Command::SweepEffort { exp, strategy, sweeps_list } => {
            let cfg = exp.config(strategy.as_ref())?;
            if sweeps_list.contains(&0) {
                return Err(HarnessError::config("sweep counts must be at least 1"));
            }
            let tables = sweep_effort(&cfg, &sweeps_list)?;
            report(&tables);
            let named: Vec<(String, &Table)> =
                sweeps_list.iter().zip(&tables).map(|(n, t)| (format!("-{n}"), t)).collect();
            write_tables(&exp.out.dir, &format!("{}: annealing effort", cfg.problem), "sweeps", &named)
        }
        Command::EmbedCurve { problem, strategy, granularity, chimera, seed, attempts, out } => {
            let kind = parse_kind(&problem)?;
            let prune = parse_strategy(&strategy, seed)?;
            let ps = qprune_core::pruning::schedule_fractions(granularity)
                .map_err(|e| HarnessError::config(e.to_string()))?;
            if attempts == 0 {
                return Err(HarnessError::config("attempts must be at least 1"));
            }
            let gc = chimera.graph()?;
            let curve =
                embeddable_curve(Family::new(kind), prune, &ps, &gc, derive_seed(seed, Stream::Curve, 0), attempts)?;
            let cfg = CurveConfig {
                problem: kind.name().to_string(),
                strategy: prune.to_string(),
                granularity,
                chimera,
                attempts,
                master_seed: seed,
            };
            let path = out.dir.join("embed-curve.csv");
            emit_curve_csv(&cfg, &curve, &path)?;
            println!("{}", path.display());
            Ok(())
        }
        Command::Oracle { qubo, problem, instance } => {
            let (q, inst) = match (qubo, problem, instance) {
                (Some(path), _, _) => (read_qubo(&path)?, None),
                (None, Some(p), Some(path)) => {
                    let (inst, q) = read_instance(parse_kind(&p)?, &path)?;
                    (q, Some(inst))
                }
                _ => return Err(HarnessError::config("give --qubo or --problem with --instance")),
            };
            let best = brute_force(&q)?;
            let bits: String = best.assignment.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
            let mut out = json!({ "variables": q.num_variables(), "energy": best.energy, "assignment": bits });
            if let Some(inst) = inst {
                out["decoded"] = solution_json(&decode(&inst, &best.assignment)?);
            }
            println!("{out}");
            Ok(())
        }
        Command::Generate { problem, seed, output, qubo } => {
            let (inst, q) = desk_instance(parse_kind(&problem)?, seed)?;
            write_file(&output, &write_instance(&inst))?;
            if let Some(path) = qubo {
                write_file(&path, &write_qubo(&q))?;
            }
            Ok(())
        }
        Command::Embed { graph, chimera, seed, attempts, output } => {
            let gp = read_edge_list(&graph)?;
            let gc = chimera.graph()?;
            let e = find_embedding(&gp, &gc, seed, attempts).ok_or_else(|| {
                HarnessError::Runtime(format!("no embedding into chimera {chimera} after {attempts} attempts"))
            })?;
            let text = write_embedding(&e);
            match output {
                Some(path) => write_file(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

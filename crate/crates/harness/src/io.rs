//! Plain-text file formats.
//!
//! All formats are line based. `#` starts a comment (DIMACS files also
//! accept `c` comment lines) and blank lines are ignored.
//!
//! | file | layout |
//! |------|--------|
//! | QUBO | header `n offset`, then one `i j value tag` line per entry (`tag` is `hard` or `soft`) |
//! | edge list | optional `nodes N`, then `u v` per edge (zero-based) |
//! | embedding | `logical_id: q1,q2,...` per chain |
//!
//! Instance files, one layout per problem kind:
//!
//! - `exact-cover`: `universe e1 e2 ...` and one `subset e...` line per subset.
//! - `max-cut`: an edge list.
//! - `number-partitioning`: `numbers n1 n2 ...` (may repeat), optional `penalty A`.
//! - `agap`: `planes n`, `gates m`, then the matrices `passengers`
//!   ((n+2)×(n+2), dummy planes first and last), `distances` ((m+2)×(m+2),
//!   dummy gates first and last) and `costs` (n×m), each keyword on its own
//!   line followed by its rows; optional `penalty A B`.
//! - `max3sat`: DIMACS CNF (`p cnf vars clauses`, clauses terminated by `0`).
//! - `tsp`: `weights` followed by N rows, optional `start s` and `penalty A B`.
//! - `graph-coloring`: `colors k`, an edge list, optional `penalty A B`.
//! - `graph-isomorphism`: `nodes N`, `g1 u v` and `g2 u v` edge lines,
//!   optional `penalty A B`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use qprune_core::embedding::Embedding;
use qprune_core::problems::{
    build_agap, build_exact_cover, build_graph_coloring, build_graph_isomorphism, build_max3sat,
    build_max_cut, build_number_partitioning, build_tsp, DecodedSolution, Penalty, ProblemInstance,
    ProblemKind, Solution,
};
use qprune_core::{ConstraintTag, Graph, QuboMatrix};
use serde_json::{json, Value};

use crate::error::{HarnessError, Result};

/// A syntax or content error at a 1-based line (0 for the whole file).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }

    fn whole(e: impl std::fmt::Display) -> Self {
        ParseError::new(0, e.to_string())
    }

    pub fn at(self, path: &Path) -> HarnessError {
        HarnessError::Parse { path: path.to_path_buf(), line: self.line, message: self.message }
    }
}

type Parsed<T> = std::result::Result<T, ParseError>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Read { path: path.to_path_buf(), source })
}

/// Non-blank lines with comments stripped, as `(line number, tokens)`.
fn lines<'a>(text: &'a str, comment: &'a [&'a str]) -> impl Iterator<Item = (usize, Vec<&'a str>)> + 'a {
    text.lines().enumerate().filter_map(move |(k, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.first() {
            None => None,
            Some(first) if comment.contains(first) => None,
            Some(_) => Some((k + 1, tokens)),
        }
    })
}

fn num<T: FromStr>(line: usize, token: &str) -> Parsed<T> {
    token.parse().map_err(|_| ParseError::new(line, format!("invalid number {token:?}")))
}

fn nums<T: FromStr>(line: usize, tokens: &[&str]) -> Parsed<Vec<T>> {
    tokens.iter().map(|t| num(line, t)).collect()
}

fn arity(line: usize, tokens: &[&str], n: usize) -> Parsed<()> {
    if tokens.len() == n {
        Ok(())
    } else {
        Err(ParseError::new(line, format!("expected {n} fields, found {}", tokens.len())))
    }
}

// ---------------------------------------------------------------- QUBO

pub fn write_qubo(q: &QuboMatrix) -> String {
    let mut s = format!("{} {}\n", q.num_variables(), q.offset());
    for ((i, j), e) in q.entries() {
        let _ = writeln!(s, "{i} {j} {} {}", e.value, e.tag.as_str());
    }
    s
}

pub fn parse_qubo(text: &str) -> Parsed<QuboMatrix> {
    let mut it = lines(text, &[]);
    let (line, header) = it.next().ok_or_else(|| ParseError::new(0, "empty QUBO file"))?;
    arity(line, &header, 2)?;
    let mut q = QuboMatrix::new(num(line, header[0])?).map_err(|e| ParseError::new(line, e.to_string()))?;
    q.set_offset(num(line, header[1])?).map_err(|e| ParseError::new(line, e.to_string()))?;
    for (line, t) in it {
        arity(line, &t, 4)?;
        let tag = ConstraintTag::parse(t[3])
            .ok_or_else(|| ParseError::new(line, format!("unknown tag {:?}", t[3])))?;
        let (i, j) = (num(line, t[0])?, num(line, t[1])?);
        if q.get(i, j).is_some() {
            return Err(ParseError::new(line, format!("duplicate entry ({i}, {j})")));
        }
        q.set(i, j, num(line, t[2])?, tag).map_err(|e| ParseError::new(line, e.to_string()))?;
    }
    Ok(q)
}

pub fn read_qubo(path: &Path) -> Result<QuboMatrix> {
    parse_qubo(&read(path)?).map_err(|e| e.at(path))
}

// ---------------------------------------------------------------- graphs

/// Collects `nodes N` and `u v` lines; other keyword lines are handed to
/// `other` and must be consumed there.
fn parse_graph_lines<'a>(
    lines: impl Iterator<Item = (usize, Vec<&'a str>)>,
    mut other: impl FnMut(usize, &[&'a str]) -> Parsed<bool>,
) -> Parsed<Graph> {
    let mut nodes = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (line, t) in lines {
        last_line = line;
        if t[0] == "nodes" {
            arity(line, &t, 2)?;
            nodes = Some(num::<usize>(line, t[1])?);
        } else if t[0].parse::<usize>().is_ok() {
            arity(line, &t, 2)?;
            edges.push((line, num::<usize>(line, t[0])?, num::<usize>(line, t[1])?));
        } else if !other(line, &t)? {
            return Err(ParseError::new(line, format!("unexpected keyword {:?}", t[0])));
        }
    }
    let n = nodes.unwrap_or_else(|| edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0));
    if n == 0 {
        return Err(ParseError::new(last_line, "graph has no nodes"));
    }
    let mut g = Graph::empty(n);
    for (line, u, v) in edges {
        g.add_edge(u, v).map_err(|e| ParseError::new(line, e.to_string()))?;
    }
    Ok(g)
}

pub fn parse_edge_list(text: &str) -> Parsed<Graph> {
    parse_graph_lines(lines(text, &[]), |_, _| Ok(false))
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&read(path)?).map_err(|e| e.at(path))
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("nodes {}\n", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

// ---------------------------------------------------------------- embeddings

pub fn write_embedding(e: &Embedding) -> String {
    let mut s = String::new();
    for (v, chain) in e.chains.iter().enumerate() {
        let qubits: Vec<String> = chain.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{v}: {}", qubits.join(","));
    }
    s
}

pub fn parse_embedding(text: &str) -> Parsed<Embedding> {
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (id, rest) =
            body.split_once(':').ok_or_else(|| ParseError::new(line, "expected `logical_id: q1,q2,...`"))?;
        let id: usize = num(line, id.trim())?;
        let chain = rest
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| num(line, t))
            .collect::<Parsed<Vec<usize>>>()?;
        if chains.len() <= id {
            chains.resize(id + 1, Vec::new());
        }
        if !chains[id].is_empty() {
            return Err(ParseError::new(line, format!("duplicate chain for node {id}")));
        }
        chains[id] = chain;
    }
    Ok(Embedding { chains })
}

// ---------------------------------------------------------------- instances

fn penalty(line: usize, t: &[&str]) -> Parsed<Penalty> {
    arity(line, t, 3)?;
    Ok(Penalty::new(num(line, t[1])?, num(line, t[2])?))
}

/// Splits keyword lines into `(line, keyword, values)` and groups numeric
/// lines under the most recent bare keyword as matrix rows.
struct Sections<'a> {
    scalars: Vec<(usize, &'a str, Vec<&'a str>)>,
    matrices: Vec<(usize, &'a str, Vec<(usize, Vec<&'a str>)>)>,
}

impl<'a> Sections<'a> {
    fn new(text: &'a str, matrix_keywords: &[&str]) -> Parsed<Self> {
        let mut s = Sections { scalars: Vec::new(), matrices: Vec::new() };
        let mut open = false;
        for (line, t) in lines(text, &[]) {
            if matrix_keywords.contains(&t[0]) {
                arity(line, &t, 1)?;
                s.matrices.push((line, t[0], Vec::new()));
                open = true;
            } else if t[0].parse::<f64>().is_ok() {
                match (open, s.matrices.last_mut()) {
                    (true, Some(m)) => m.2.push((line, t)),
                    _ => return Err(ParseError::new(line, "matrix row outside a matrix section")),
                }
            } else {
                open = false;
                s.scalars.push((line, t[0], t[1..].to_vec()));
            }
        }
        Ok(s)
    }

    fn matrix(&self, key: &str) -> Parsed<Vec<Vec<f64>>> {
        let mut found = self.matrices.iter().filter(|m| m.1 == key);
        let (_, _, rows) = found.next().ok_or_else(|| ParseError::new(0, format!("missing `{key}` matrix")))?;
        if let Some((line, _, _)) = found.next() {
            return Err(ParseError::new(*line, format!("duplicate `{key}` matrix")));
        }
        rows.iter().map(|(line, t)| nums(*line, t)).collect()
    }

    fn single(&self, key: &str) -> Parsed<Option<(usize, Vec<&'a str>)>> {
        let mut found = self.scalars.iter().filter(|s| s.1 == key);
        let first = found.next().map(|(line, _, v)| (*line, v.clone()));
        if let Some((line, _, _)) = found.next() {
            return Err(ParseError::new(*line, format!("duplicate `{key}` line")));
        }
        Ok(first)
    }

    fn count(&self, key: &str) -> Parsed<Option<usize>> {
        match self.single(key)? {
            Some((line, v)) => {
                arity(line, &v, 1)?;
                Ok(Some(num(line, v[0])?))
            }
            None => Ok(None),
        }
    }

    fn penalty(&self) -> Parsed<Option<Penalty>> {
        match self.single("penalty")? {
            Some((line, v)) => {
                let mut t = vec!["penalty"];
                t.extend(v);
                Ok(Some(penalty(line, &t)?))
            }
            None => Ok(None),
        }
    }

    fn reject_unknown(&self, known: &[&str]) -> Parsed<()> {
        match self.scalars.iter().find(|s| !known.contains(&s.1)) {
            Some((line, key, _)) => Err(ParseError::new(*line, format!("unexpected keyword {key:?}"))),
            None => Ok(()),
        }
    }
}

fn parse_exact_cover(text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    let mut universe = None;
    let mut subsets = Vec::new();
    for (line, t) in lines(text, &[]) {
        match t[0] {
            "universe" if universe.is_none() => universe = Some(nums::<u64>(line, &t[1..])?),
            "universe" => return Err(ParseError::new(line, "duplicate `universe` line")),
            "subset" => subsets.push(nums::<u64>(line, &t[1..])?),
            other => return Err(ParseError::new(line, format!("unexpected keyword {other:?}"))),
        }
    }
    let universe = universe.ok_or_else(|| ParseError::new(0, "missing `universe` line"))?;
    build_exact_cover(&universe, &subsets).map_err(ParseError::whole)
}

fn parse_number_partitioning(text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    let mut numbers = Vec::new();
    let mut weight = None;
    for (line, t) in lines(text, &[]) {
        match t[0] {
            "numbers" => numbers.extend(nums::<u64>(line, &t[1..])?),
            "penalty" if weight.is_none() => {
                arity(line, &t, 2)?;
                weight = Some(num::<f64>(line, t[1])?);
            }
            other => return Err(ParseError::new(line, format!("unexpected keyword {other:?}"))),
        }
    }
    build_number_partitioning(&numbers, weight.unwrap_or(1.0)).map_err(ParseError::whole)
}

fn parse_agap(text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    let s = Sections::new(text, &["passengers", "distances", "costs"])?;
    s.reject_unknown(&["planes", "gates", "penalty"])?;
    let planes = s.count("planes")?.ok_or_else(|| ParseError::new(0, "missing `planes` line"))?;
    let gates = s.count("gates")?.ok_or_else(|| ParseError::new(0, "missing `gates` line"))?;
    build_agap(planes, gates, s.matrix("passengers")?, s.matrix("distances")?, s.matrix("costs")?, s.penalty()?)
        .map_err(ParseError::whole)
}

fn parse_dimacs(text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    let mut header = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (line, t) in lines(text, &["c", "%"]) {
        if t[0] == "p" {
            if t.len() != 4 || t[1] != "cnf" {
                return Err(ParseError::new(line, "expected `p cnf <vars> <clauses>`"));
            }
            if header.is_some() {
                return Err(ParseError::new(line, "duplicate problem line"));
            }
            header = Some((line, num::<usize>(line, t[2])?, num::<usize>(line, t[3])?));
            continue;
        }
        if header.is_none() {
            return Err(ParseError::new(line, "clause before the `p cnf` line"));
        }
        for tok in t {
            match num::<i64>(line, tok)? {
                0 => clauses.push(std::mem::take(&mut current)),
                lit => current.push(lit),
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (line, vars, m) = header.ok_or_else(|| ParseError::new(0, "missing `p cnf` line"))?;
    if clauses.len() != m {
        return Err(ParseError::new(line, format!("header declares {m} clauses, found {}", clauses.len())));
    }
    build_max3sat(vars, &clauses).map_err(ParseError::whole)
}

fn parse_tsp(text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    let s = Sections::new(text, &["weights"])?;
    s.reject_unknown(&["start", "penalty"])?;
    let start = s.count("start")?.unwrap_or(0);
    build_tsp(s.matrix("weights")?, start, s.penalty()?).map_err(ParseError::whole)
}

fn parse_graph_coloring(text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    let mut colors = None;
    let mut pen = None;
    let g = parse_graph_lines(lines(text, &[]), |line, t| match t[0] {
        "colors" if colors.is_none() => {
            arity(line, t, 2)?;
            colors = Some(num::<usize>(line, t[1])?);
            Ok(true)
        }
        "penalty" if pen.is_none() => {
            pen = Some(penalty(line, t)?);
            Ok(true)
        }
        _ => Ok(false),
    })?;
    let colors = colors.ok_or_else(|| ParseError::new(0, "missing `colors` line"))?;
    build_graph_coloring(&g, colors, pen).map_err(ParseError::whole)
}

fn parse_graph_isomorphism(text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    let mut nodes = None;
    let mut pen = None;
    let mut edges: [Vec<(usize, usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (line, t) in lines(text, &[]) {
        match t[0] {
            "nodes" if nodes.is_none() => {
                arity(line, &t, 2)?;
                nodes = Some(num::<usize>(line, t[1])?);
            }
            "penalty" if pen.is_none() => pen = Some(penalty(line, &t)?),
            "g1" | "g2" => {
                arity(line, &t, 3)?;
                let k = usize::from(t[0] == "g2");
                edges[k].push((line, num(line, t[1])?, num(line, t[2])?));
            }
            other => return Err(ParseError::new(line, format!("unexpected keyword {other:?}"))),
        }
    }
    let n = nodes.ok_or_else(|| ParseError::new(0, "missing `nodes` line"))?;
    let mut graphs = [Graph::empty(n), Graph::empty(n)];
    for (g, list) in graphs.iter_mut().zip(&edges) {
        for &(line, u, v) in list {
            g.add_edge(u, v).map_err(|e| ParseError::new(line, e.to_string()))?;
        }
    }
    build_graph_isomorphism(&graphs[0], &graphs[1], pen).map_err(ParseError::whole)
}

pub fn parse_instance(kind: ProblemKind, text: &str) -> Parsed<(ProblemInstance, QuboMatrix)> {
    match kind {
        ProblemKind::ExactCover => parse_exact_cover(text),
        ProblemKind::MaxCut => build_max_cut(&parse_edge_list(text)?).map_err(ParseError::whole),
        ProblemKind::NumberPartitioning => parse_number_partitioning(text),
        ProblemKind::Agap => parse_agap(text),
        ProblemKind::Max3Sat => parse_dimacs(text),
        ProblemKind::Tsp => parse_tsp(text),
        ProblemKind::GraphColoring => parse_graph_coloring(text),
        ProblemKind::GraphIsomorphism => parse_graph_isomorphism(text),
    }
}

pub fn read_instance(kind: ProblemKind, path: &Path) -> Result<(ProblemInstance, QuboMatrix)> {
    parse_instance(kind, &read(path)?).map_err(|e| e.at(path))
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn write_matrix(s: &mut String, key: &str, m: &[Vec<f64>]) {
    let _ = writeln!(s, "{key}");
    for row in m {
        let _ = writeln!(s, "{}", join(row));
    }
}

fn write_penalty(s: &mut String, p: Penalty) {
    let _ = writeln!(s, "penalty {} {}", p.a, p.b);
}

/// Serializes an instance in the layout [`parse_instance`] reads.
pub fn write_instance(inst: &ProblemInstance) -> String {
    let mut s = String::new();
    match inst {
        ProblemInstance::ExactCover(p) => {
            let _ = writeln!(s, "universe {}", join(&p.universe));
            for subset in &p.subsets {
                let _ = writeln!(s, "subset {}", join(subset));
            }
        }
        ProblemInstance::MaxCut(p) => s = write_edge_list(&p.graph),
        ProblemInstance::NumberPartitioning(p) => {
            let _ = writeln!(s, "numbers {}", join(&p.numbers));
            let _ = writeln!(s, "penalty {}", p.weight);
        }
        ProblemInstance::Agap(p) => {
            let _ = writeln!(s, "planes {}\ngates {}", p.planes, p.gates);
            write_matrix(&mut s, "passengers", &p.passengers);
            write_matrix(&mut s, "distances", &p.distances);
            write_matrix(&mut s, "costs", &p.costs);
            write_penalty(&mut s, p.penalty);
        }
        ProblemInstance::Max3Sat(p) => {
            let _ = writeln!(s, "p cnf {} {}", p.variables, p.clauses.len());
            for clause in &p.clauses {
                let lits: Vec<i64> = clause.iter().map(|l| l.to_dimacs()).collect();
                let _ = writeln!(s, "{} 0", join(&lits));
            }
        }
        ProblemInstance::Tsp(p) => {
            let _ = writeln!(s, "start {}", p.start);
            write_penalty(&mut s, p.penalty);
            write_matrix(&mut s, "weights", &p.weights);
        }
        ProblemInstance::GraphColoring(p) => {
            let _ = writeln!(s, "colors {}", p.colors);
            write_penalty(&mut s, p.penalty);
            s.push_str(&write_edge_list(&p.graph));
        }
        ProblemInstance::GraphIsomorphism(p) => {
            let _ = writeln!(s, "nodes {}", p.g1.node_count());
            write_penalty(&mut s, p.penalty);
            for (u, v) in p.g1.edges() {
                let _ = writeln!(s, "g1 {u} {v}");
            }
            for (u, v) in p.g2.edges() {
                let _ = writeln!(s, "g2 {u} {v}");
            }
        }
    }
    s
}

// ---------------------------------------------------------------- solutions

pub fn solution_json(sol: &DecodedSolution) -> Value {
    let body = match &sol.solution {
        Solution::Cover { selected, errors, squared_deviation } => {
            json!({ "selected": selected, "errors": errors, "squared_deviation": squared_deviation })
        }
        Solution::Cut { side, cut } => json!({ "side": side, "cut": cut }),
        Solution::Partition { side, difference } => json!({ "side": side, "difference": difference }),
        Solution::Gates { gate_of, objective } => json!({ "gate_of": gate_of, "objective": objective }),
        Solution::Truth { values, satisfied } => json!({ "values": values, "satisfied": satisfied }),
        Solution::Tour { tour, weight } => json!({ "tour": tour, "weight": weight }),
        Solution::Coloring { colors, conflicts } => json!({ "colors": colors, "conflicts": conflicts }),
        Solution::Mapping { mapping, mismatches } => json!({ "mapping": mapping, "mismatches": mismatches }),
    };
    json!({ "valid": sol.valid, "metric": sol.metric(), "solution": body })
}

//! Command-line front end.
//!
//! Exit codes: 0 for success or a true decision, 3 for a false decision, 1 for errors.

mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::affine::{c_equivalent, AffinePermutation};
use crate::fence::{fence_graph, DoubleAffineWord};
use crate::geom::fmt_q;
use crate::synth::synthesize;
use crate::torusgraph::{move_equivalent, Embedding, InvariantReport, StrongPolygon, TorusGraph, WeakPolygon};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FALSE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Invariants of bipartite graphs on the torus")]
pub struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a graph file describes a valid embedding.
    Validate {
        graph: Option<PathBuf>,
        /// Process every `.json` file of a directory.
        #[arg(long, conflicts_with = "graph")]
        batch: Option<PathBuf>,
    },
    /// Full invariant report as JSON.
    Invariants {
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph")]
        batch: Option<PathBuf>,
    },
    /// Decide move-equivalence of two move-reduced graphs.
    Equivalent { first: PathBuf, second: PathBuf },
    /// Build a move-reduced graph from a strongly decorated polygon.
    Synthesize {
        polygon: PathBuf,
        /// Target modular invariant; defaults to the file's `mu`, else 0.
        #[arg(long)]
        mu: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build the fence graph of a double affine word such as `n=4 ; s1 s3 L sb4`.
    Fence {
        word: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Affine permutations in window notation, e.g. `n=7 [7,-1,2,5,8,3,11]`.
    Perm {
        #[command(subcommand)]
        op: PermOp,
    },
    /// Draw the fundamental domain as SVG.
    Render {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Overlay strands.
        #[arg(long)]
        strands: bool,
        /// Overlay e-region labels for the polygon edge `a,b`.
        #[arg(long, value_name = "a,b", allow_hyphen_values = true)]
        labels: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PermOp {
    /// Coxeter length.
    Length { perm: String },
    /// Cycles with their (n, k, d, slope) data.
    Cycles { perm: String },
    /// Whether the permutation has minimal length in its conjugacy class.
    CReduced { perm: String },
    /// Whether two c-reduced permutations are c-equivalent.
    CEquivalent { first: String, second: String },
    /// A reduced word `s_i1 ... s_il` followed by the power of the shift.
    ReducedWord { perm: String },
    /// The modular invariant `mu mod d` of a c-reduced permutation.
    ModularInvariant { perm: String },
}

/// Outcome of a command: text for humans, a JSON value, and an exit code.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(text: impl Into<String>, json: Value) -> Outcome {
        Outcome { text: text.into(), json, code: EXIT_OK }
    }

    fn decision(yes: bool, text_yes: &str, text_no: &str, json: Value) -> Outcome {
        Outcome {
            text: (if yes { text_yes } else { text_no }).to_string(),
            json,
            code: if yes { EXIT_OK } else { EXIT_FALSE },
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Validate { graph, batch } => batched(graph, batch, validate),
        Command::Invariants { graph, batch } => batched(graph, batch, invariants),
        Command::Equivalent { first, second } => {
            let (a, b) = (load_embedding(first)?, load_embedding(second)?);
            let eq = move_equivalent(&a, &b).map_err(|e| e.to_string())?;
            Ok(Outcome::decision(eq, "equivalent", "not-equivalent", json!({ "equivalent": eq })))
        }
        Command::Synthesize { polygon, mu, output } => {
            let text = read(polygon)?;
            let (p, file_mu) = StrongPolygon::from_json_str(&text).map_err(|e| e.to_string())?;
            let mu = mu.or(file_mu).unwrap_or(0);
            let s = synthesize(&p, mu).map_err(|e| e.to_string())?;
            write(output, &(s.graph.to_json_string() + "\n"))?;
            let j = json!({
                "output": output.display().to_string(),
                "word": s.word.to_string(),
                "f": s.f.to_string(),
                "fbar": s.fbar.to_string(),
                "mu": s.mu,
                "modulus": s.modulus,
            });
            Ok(Outcome::ok(format!("wrote {} (word {}, mu {} mod {})", output.display(), s.word, s.mu, s.modulus), j))
        }
        Command::Fence { word, output } => {
            let w: DoubleAffineWord = word.parse().map_err(|e: crate::fence::FenceError| e.to_string())?;
            let g = fence_graph(&w);
            write(output, &(g.to_json_string() + "\n"))?;
            let pair = w.phi().map_err(|e| e.to_string())?;
            let j = json!({
                "output": output.display().to_string(),
                "word": w.to_string(),
                "f": pair.f.to_string(),
                "fbar": pair.fbar.to_string(),
            });
            Ok(Outcome::ok(format!("wrote {} ({} vertices, {} edges)", output.display(), g.vertices.len(), g.edges.len()), j))
        }
        Command::Perm { op } => perm(op),
        Command::Render { graph, output, strands, labels } => {
            let e = load_embedding(graph)?;
            let edge = labels.as_deref().map(parse_vector).transpose()?;
            let svg = render::svg(&e, *strands, edge)?;
            write(output, &svg)?;
            Ok(Outcome::ok(format!("wrote {}", output.display()), json!({ "output": output.display().to_string() })))
        }
    }
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("serializable"));
            } else {
                let _ = writeln!(out, "{}", o.text);
            }
            o.code
        }
        Err(msg) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "error": msg }));
            }
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn read(p: &Path) -> Result<String, String> {
    std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn write(p: &Path, s: &str) -> Result<(), String> {
    std::fs::write(p, s).map_err(|e| format!("{}: {e}", p.display()))
}

fn load_graph(p: &Path) -> Result<TorusGraph, String> {
    TorusGraph::from_json_str(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))
}

fn load_embedding(p: &Path) -> Result<Embedding, String> {
    Embedding::new(load_graph(p)?).map_err(|e| format!("{}: {e}", p.display()))
}

fn parse_vector(s: &str) -> Result<(i64, i64), String> {
    let bad = || format!("expected `a,b`, got `{s}`");
    let (a, b) = s.trim_matches(|c| c == '(' || c == ')').split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

type Single = fn(&Path) -> Result<Outcome, String>;

/// Runs `f` on one file, or on every `.json` file of a directory in name order.
fn batched(one: &Option<PathBuf>, dir: &Option<PathBuf>, f: Single) -> Result<Outcome, String> {
    match (one, dir) {
        (Some(p), None) => f(p),
        (None, Some(d)) => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(d)
                .map_err(|e| format!("{}: {e}", d.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            let mut text = String::new();
            let mut all = serde_json::Map::new();
            let mut code = EXIT_OK;
            for p in &files {
                let name = p.file_name().unwrap().to_string_lossy().to_string();
                match f(p) {
                    Ok(o) => {
                        text.push_str(&format!("{name}: {}\n", o.text.replace('\n', "\n  ")));
                        code = code.max(o.code);
                        all.insert(name, o.json);
                    }
                    Err(e) => {
                        text.push_str(&format!("{name}: error: {e}\n"));
                        code = EXIT_ERROR;
                        all.insert(name, json!({ "error": e }));
                    }
                }
            }
            Ok(Outcome { text: text.trim_end().to_string(), json: Value::Object(all), code })
        }
        _ => Err("give a graph file or --batch <dir>".into()),
    }
}

fn validate(p: &Path) -> Result<Outcome, String> {
    let g = load_graph(p)?;
    let (v, e) = (g.vertices.len(), g.edges.len());
    Ok(match Embedding::new(g) {
        Ok(_) => Outcome::ok(format!("valid: {v} vertices, {e} edges"), json!({ "valid": true, "vertices": v, "edges": e })),
        Err(err) => Outcome { text: format!("invalid: {err}"), json: json!({ "valid": false, "error": err.to_string() }), code: EXIT_ERROR },
    })
}

fn weak_json(w: &WeakPolygon) -> Value {
    Value::Array(w.edges().iter().map(|(v, p)| json!({ "vector": [v.0, v.1], "partition": p.parts() })).collect())
}

fn strong_json(s: &StrongPolygon) -> Value {
    Value::Array(s.edges().iter().map(|(v, c)| json!({ "vector": [v.0, v.1], "composition": c.parts() })).collect())
}

pub fn report_json(e: &Embedding, r: &InvariantReport) -> Value {
    let strands = e.strands();
    let cr = e.strand_crossings(&strands);
    let area = num_rational::Ratio::new(r.twice_area as i128, 2);
    json!({
        "status": r.status,
        "reduced": r.status == crate::torusgraph::ReducedStatus::Reduced,
        "strands": strands.iter().zip(&cr.self_crossings).map(|(s, &x)| json!({
            "homology": [s.homology.0, s.homology.1],
            "length": s.darts.len(),
            "self_intersections": x,
        })).collect::<Vec<_>>(),
        "weak_polygon": weak_json(&r.weak),
        "strong_polygon": r.strong.as_ref().map(strong_json),
        "twice_area": r.twice_area,
        "area": fmt_q(&area),
        "excess": r.excess,
        "faces": r.contractible_faces,
        "perfect_matching": r.perfect_matching,
        "contractible_component": r.contractible_component,
        "leaf": r.leaf,
        "mu": r.modular.map(|m| m.0),
        "modulus": r.modular.map(|m| m.1),
        "warnings": r.warnings,
    })
}

fn invariants(p: &Path) -> Result<Outcome, String> {
    let e = load_embedding(p)?;
    let r = e.report().map_err(|err| err.to_string())?;
    let j = report_json(&e, &r);
    Ok(Outcome::ok(serde_json::to_string_pretty(&j).expect("serializable"), j))
}

fn parse_perm(s: &str) -> Result<AffinePermutation, String> {
    s.parse().map_err(|e: crate::affine::AffineError| e.to_string())
}

fn perm(op: &PermOp) -> Result<Outcome, String> {
    let err = |e: crate::affine::AffineError| e.to_string();
    match op {
        PermOp::Length { perm } => {
            let l = parse_perm(perm)?.length();
            Ok(Outcome::ok(l.to_string(), json!({ "length": l })))
        }
        PermOp::Cycles { perm } => {
            let f = parse_perm(perm)?;
            let cs = f.cycles();
            let text = cs
                .iter()
                .map(|c| format!("{:?} n={} k={} d={} slope={}", c.residues, c.n_c, c.k_c, c.d_c, c.slope))
                .collect::<Vec<_>>()
                .join("\n");
            let j = json!({
                "k": f.k(),
                "cycles": cs.iter().map(|c| json!({
                    "residues": c.residues,
                    "n": c.n_c,
                    "k": c.k_c,
                    "d": c.d_c,
                    "slope": c.slope.to_string(),
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome::ok(text, j))
        }
        PermOp::CReduced { perm } => {
            let f = parse_perm(perm)?;
            let yes = f.is_c_reduced();
            let j = json!({ "c_reduced": yes, "length": f.length(), "minimal_length": f.minimal_length() });
            Ok(Outcome::decision(yes, "true", "false", j))
        }
        PermOp::CEquivalent { first, second } => {
            let yes = c_equivalent(&parse_perm(first)?, &parse_perm(second)?).map_err(err)?;
            Ok(Outcome::decision(yes, "equivalent", "not-equivalent", json!({ "c_equivalent": yes })))
        }
        PermOp::ReducedWord { perm } => {
            let (w, k) = parse_perm(perm)?.reduced_word();
            let mut parts: Vec<String> = w.iter().map(|i| format!("s{i}")).collect();
            if k != 0 {
                parts.push(if k == 1 { "L".into() } else { format!("L^{k}") });
            }
            let text = if parts.is_empty() { "id".to_string() } else { parts.join(" ") };
            Ok(Outcome::ok(text, json!({ "letters": w, "shift": k })))
        }
        PermOp::ModularInvariant { perm } => {
            let (mu, d) = parse_perm(perm)?.modular_invariant().map_err(err)?;
            Ok(Outcome::ok(format!("{mu} mod {d}"), json!({ "mu": mu, "modulus": d })))
        }
    }
}

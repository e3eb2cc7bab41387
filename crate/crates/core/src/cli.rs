//! The `pcsp` command line.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 budget exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::analyzer::classify;
use crate::bench::{run_bench, BenchConfig};
use crate::coloring::{
    generalized_color, partition_baseline, trace_csv, validate_coloring, wigderson_color, BacktrackOracle, Coloring, GeneralizedConfig,
    Graph, PlantedOracle, ThreeColorOracle,
};
use crate::consistency::{compute_strategy_with, ConsistencyLimits};
use crate::error::{Error, Result};
use crate::format::{parse_coloring, parse_rational, parse_structure, write_coloring, write_structure};
use crate::hom::{set_thread_node_budget, BUDGET_ENV};
use crate::polymorphisms::{enumerate_polymorphisms, has_wnu};
use crate::random_instances::{
    derive_parameters, generate_hard_instance, records_csv, sample_hypergraph, DeriveRequest, HardOptions, Mode, SparsityMode,
};
use crate::sherali_adams::{augmented_sa1_check, write_certificate, SaLimits, SaLp};
use crate::structure::Structure;

#[derive(Parser, Debug)]
#[command(name = "pcsp", version, about = "Local consistency and Sherali-Adams tooling for promise CSPs")]
pub struct Cli {
    /// Node budget for homomorphism searches.
    #[arg(long, global = true, env = BUDGET_ENV)]
    pub budget_nodes: Option<u64>,
    /// Cap on partial maps (consistency) and LP variables (Sherali-Adams).
    #[arg(long, global = true)]
    pub budget_maps: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a template by its binary projections.
    Analyze {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Decide I <=_k S by computing the greatest k-strategy.
    Consistency {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        emit_strategy: Option<PathBuf>,
    },
    /// Decide feasibility of the level-k Sherali-Adams relaxation.
    Sa {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        /// Also run SA^1 with each x_{v->b} fixed to 1.
        #[arg(long)]
        augmented: bool,
    },
    /// Enumerate polymorphisms of a given arity, or search for a WNU.
    Polymorph {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        wnu: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Maximum number of polymorphisms to enumerate.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Sample a random r-uniform hypergraph.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rejection-sample a sparse instance with no homomorphism to the right template.
    Hard(HardArgs),
    /// Colour a graph.
    Color {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: ColorMode,
        #[arg(long, default_value = "0.3")]
        epsilon: f64,
        #[arg(long = "C", default_value = "2")]
        c: f64,
        #[arg(long, default_value_t = 32)]
        n0: usize,
        /// Hidden 3-colouring used as the oracle (`vertex color` lines).
        #[arg(long)]
        planted: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-level CSV trace (general mode).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Sweep random instances and report verdicts as CSV.
    Bench {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "8,12")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        d: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        sa: Vec<usize>,
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct HardArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    attempts: u64,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Where to write the accepted instance.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ParamMode::General)]
    mode: ParamMode,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    gamma: Option<String>,
    /// Force delta, possibly outside the proven range.
    #[arg(long)]
    delta: Option<String>,
    /// Use heuristic sparsity checking regardless of n.
    #[arg(long)]
    heuristic: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum ColorMode {
    Wigderson,
    General,
    Baseline,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ParamMode {
    General,
    Digraph,
}

/// Outcome of a command that succeeded in running.
enum Verdict {
    Positive,
    Negative,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Argument(format!("{}: {}", path.display(), e)))
}

fn load(path: &Path) -> Result<Structure> {
    parse_structure(&read(path)?).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {}", path.display(), msg) },
        other => other,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Argument(format!("{}: {}", path.display(), e)))
}

fn rational(s: &str, what: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| Error::Argument(format!("{}: not a rational number: {}", what, s)))
}

/// Writes to `path` if given, else to `out`.
fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    set_thread_node_budget(cli.budget_nodes);
    let result = dispatch(&cli, out);
    set_thread_node_budget(None);
    match result {
        Ok(Verdict::Positive) => 0,
        Ok(Verdict::Negative) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            match e {
                Error::Budget(_) => 3,
                Error::Promise(_) => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Verdict> {
    let climits = cli.budget_maps.map_or_else(ConsistencyLimits::default, |m| ConsistencyLimits { max_maps: m });
    let slimits = cli.budget_maps.map_or_else(SaLimits::default, |m| SaLimits { max_vars: m });
    match &cli.command {
        Command::Analyze { left, right, format } => {
            let report = classify(&load(left)?, &load(right)?)?;
            let text = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => serde_json::to_string(&report).expect("serializable") + "\n",
            };
            out.write_all(text.as_bytes())?;
            Ok(Verdict::Positive)
        }
        Command::Consistency { instance, template, k, emit_strategy } => {
            let (i, s) = (load(instance)?, load(template)?);
            let strat = compute_strategy_with(&i, &s, *k, climits, None)?;
            writeln!(out, "leq_k: {}", strat.is_some())?;
            if let Some(st) = &strat {
                writeln!(out, "maps: {}", st.len())?;
                if let Some(p) = emit_strategy {
                    write_file(p, &st.to_text())?;
                }
            }
            Ok(if strat.is_some() { Verdict::Positive } else { Verdict::Negative })
        }
        Command::Sa { instance, template, level, certificate, dump_lp, augmented } => {
            let (i, s) = (load(instance)?, load(template)?);
            let lp = SaLp::build_with(&i, &s, *level, slimits)?;
            if let Some(p) = dump_lp {
                write_file(p, &lp.lp.dump())?;
            }
            let sol = lp.solve()?;
            writeln!(out, "leq_sa: {}", sol.is_some())?;
            writeln!(out, "variables: {} x, {} lambda", lp.num_x_vars(), lp.num_lambda_vars())?;
            if let (Some(sol), Some(p)) = (&sol, certificate) {
                write_file(p, &write_certificate(sol))?;
            }
            if *augmented {
                for rec in augmented_sa1_check(&i, &s)? {
                    writeln!(out, "augmented {} {} {}", rec.v, rec.b, rec.feasible)?;
                }
            }
            Ok(if sol.is_some() { Verdict::Positive } else { Verdict::Negative })
        }
        Command::Polymorph { left, right, arity, wnu, out: path, limit } => {
            let (s, t) = (load(left)?, load(right)?);
            let ops = if *wnu {
                has_wnu(&s, &t, *arity)?.into_iter().collect::<Vec<_>>()
            } else {
                enumerate_polymorphisms(&s, &t, *arity, *limit)?
            };
            writeln!(out, "{}: {}", if *wnu { "wnu" } else { "polymorphisms" }, ops.len())?;
            if let Some(p) = path {
                let text: String = ops.iter().map(|o| o.to_text()).collect();
                write_file(p, &text)?;
            }
            Ok(if ops.is_empty() { Verdict::Negative } else { Verdict::Positive })
        }
        Command::Sample { n, r, d, seed, out: path } => {
            let s = sample_hypergraph(*n, *r, &rational(d, "--d")?, *seed)?;
            emit(path.as_deref(), &write_structure(&s), out)?;
            Ok(Verdict::Positive)
        }
        Command::Hard(h) => hard(h, out),
        Command::Color { graph, mode, epsilon, c, n0, planted, out: path, trace } => {
            let g = Graph::from_structure(&load(graph)?)?;
            let planted_oracle = match planted {
                Some(p) => Some(PlantedOracle { colors: parse_coloring(&read(p)?)? }),
                None => None,
            };
            if let Some(po) = &planted_oracle {
                if po.colors.len() != g.n() {
                    return Err(Error::Argument("planted colouring has the wrong number of vertices".into()));
                }
            }
            let backtrack = BacktrackOracle::default();
            let oracle: &dyn ThreeColorOracle = match &planted_oracle {
                Some(p) => p,
                None => &backtrack,
            };
            let (col, tr): (Coloring, _) = match mode {
                ColorMode::Wigderson => (wigderson_color(&g, oracle)?, None),
                ColorMode::Baseline => (partition_baseline(&g, *epsilon, oracle)?, None),
                ColorMode::General => {
                    let cfg = GeneralizedConfig { epsilon: *epsilon, c: *c, n0: *n0, ..GeneralizedConfig::default() };
                    let (col, tr) = generalized_color(&g, &cfg, oracle)?;
                    (col, Some(tr))
                }
            };
            debug_assert!(validate_coloring(&g, &col));
            writeln!(out, "colors: {}", col.palette_size())?;
            if let Some(p) = path {
                write_file(p, &write_coloring(&col.colors))?;
            }
            if let (Some(p), Some(tr)) = (trace, &tr) {
                write_file(p, &trace_csv(tr))?;
            }
            Ok(Verdict::Positive)
        }
        Command::Bench { left, right, n, seeds, seed, d, k, sa, timings, out: path } => {
            let cfg = BenchConfig {
                ns: n.clone(),
                seeds: *seeds,
                seed: *seed,
                d: rational(d, "--d")?,
                ks: k.clone(),
                sa_levels: sa.clone(),
                timings: *timings,
                consistency: climits,
                sa: slimits,
            };
            let csv = run_bench(&load(left)?, &load(right)?, &cfg)?;
            emit(path.as_deref(), &csv, out)?;
            Ok(Verdict::Positive)
        }
    }
}

fn hard(h: &HardArgs, out: &mut dyn Write) -> Result<Verdict> {
    let (s, t) = (load(&h.left)?, load(&h.right)?);
    let r = s.signature().total_arity() as u32;
    let mode = match h.mode {
        ParamMode::General => Mode::General,
        ParamMode::Digraph => Mode::Digraph,
    };
    let req = DeriveRequest {
        r,
        p: s.domain_size() as u64,
        q: t.domain_size() as u64,
        n: h.n as u64,
        mode,
        epsilon: h.epsilon.as_deref().map(|e| rational(e, "--epsilon")).transpose()?,
        k: h.k,
        gamma: h.gamma.as_deref().map(|g| rational(g, "--gamma")).transpose()?,
        forced_delta: h.delta.as_deref().map(|d| rational(d, "--delta")).transpose()?,
    };
    let params = derive_parameters(&req)?;
    out.write_all(params.to_text().as_bytes())?;
    let opts =
        HardOptions { sparsity: if h.heuristic { SparsityMode::Heuristic } else { SparsityMode::default() }, ..HardOptions::default() };
    let res = generate_hard_instance(&s, &t, h.n, &params, h.seed, h.attempts, opts)?;
    let diag = &res.diagnostics;
    for w in &diag.warnings {
        writeln!(out, "warning: {}", w)?;
    }
    writeln!(out, "p1: {}", diag.p1.short())?;
    writeln!(out, "p2: {}", diag.p2.as_ref().map_or("unavailable".to_string(), |v| v.short()))?;
    writeln!(out, "hom_frequency: {:.6}", diag.hom_frequency)?;
    writeln!(out, "nonsparse_frequency: {:.6}", diag.nonsparse_frequency)?;
    if let Some(p) = &h.report {
        write_file(p, &records_csv(&diag.records))?;
    }
    match (&res.instance, res.accepted) {
        (Some(inst), Some(a)) => {
            writeln!(out, "accepted attempt: {}", a)?;
            if let Some(p) = &h.out {
                write_file(p, &write_structure(inst))?;
            }
            Ok(Verdict::Positive)
        }
        _ => {
            writeln!(out, "no instance found in {} attempts", h.attempts)?;
            Ok(Verdict::Negative)
        }
    }
}

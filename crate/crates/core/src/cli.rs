//! Command-line front end. Exit codes: 0 success, 2 usage or validation
//! error, 3 I/O error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    connected_components, count_isolated, predicted_isolated_rag, predicted_vrg_connectivity,
    rag_connectivity_sufficient, vrg_union_connectivity_sufficient, RegimeVerdict,
};
use crate::error::{Error, Result};
use crate::experiment::{
    absolute_spec, format_sig9, scaled_spec, summarize, write_summary_csv, write_trials_csv, GridPoint,
    SweepConfig,
};
use crate::generators::{generate, Model};
use crate::io::{read_instance, verify_against_oracle, write_edge_list, write_instance, write_labels};
use crate::recovery::{min_a_for_recovery, recover_instance, recover_instance_with_locations, solve_t1, solve_t2};

#[derive(Parser, Debug)]
#[command(name = "annulus", version, about = "Random annulus graphs and geometric block models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample an instance and write it as JSON.
    Generate(GenerateArgs),
    /// Recovery thresholds t1, t2 and the minimum a for each b.
    Thresholds(ThresholdsArgs),
    /// Run a Monte-Carlo sweep from a JSON config.
    Sweep(SweepArgs),
    /// Recover the two clusters of a block-model instance.
    Recover(RecoverArgs),
    /// Evaluate a regime predicate.
    Regime(RegimeArgs),
    /// Component, isolation and degree statistics of an instance.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModelArg {
    Vrg,
    Rag,
    Gbm,
    Gbmt,
    VrgUnion,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Vrg => Model::Vrg,
            ModelArg::Rag => Model::Rag,
            ModelArg::Gbm => Model::Gbm,
            ModelArg::Gbmt => Model::Gbmt,
            ModelArg::VrgUnion => Model::VrgUnion,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Outer radius constant (same-cluster radius for block models).
    #[arg(long)]
    pub a: f64,
    /// Inner radius constant (cross-cluster radius for block models).
    #[arg(long)]
    pub b: f64,
    /// Patch radius constant for vrg-union.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instance JSON path. Defaults to instance.json.
    #[arg(long, default_value = "instance.json")]
    pub out: PathBuf,
    /// Also write an edge list here.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Read a, b, c as radii instead of multiples of (ln n / n)^(1/t).
    #[arg(long)]
    pub absolute_radii: bool,
}

#[derive(Args, Debug)]
pub struct ThresholdsArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
    pub b: Vec<f64>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub config: PathBuf,
    /// Per-trial CSV. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-point summary CSV.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Add a wall_time_ms column. Output is then no longer byte-stable.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RecoverMode {
    Triangle,
    WithLocations,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "triangle")]
    pub mode: RecoverMode,
    /// Predicted labels, one per line.
    #[arg(long, default_value = "labels.txt")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub c_s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_d: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Selector {
    Vrg,
    RagIsolated,
    RagConnected,
    VrgUnion,
}

#[derive(Args, Debug)]
pub struct RegimeArgs {
    #[arg(value_enum)]
    pub selector: Selector,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub instance: PathBuf,
    /// Rebuild the edge set by brute force and compare.
    #[arg(long)]
    pub verify: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

/// Maps an error to its exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 3,
        Error::Json(e) if e.is_io() => 3,
        _ => 2,
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Thresholds(a) => cmd_thresholds(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Recover(a) => cmd_recover(a, out),
        Command::Regime(a) => cmd_regime(a, out),
        Command::Analyze(a) => cmd_analyze(a, out),
    }
}

fn cmd_generate(args: GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let model = Model::from(args.model);
    let point = GridPoint {
        n: args.n,
        t: args.t,
        a: args.a,
        b: args.b,
        c: args.c,
    };
    if args.n < 2 {
        return Err(usage("n must be at least 2"));
    }
    let spec = if args.absolute_radii {
        absolute_spec(model, &point)?
    } else {
        scaled_spec(model, &point)?
    };
    let inst = generate(spec, args.n, args.seed)?;
    let mut w = create(&args.out)?;
    write_instance(&inst, &mut w)?;
    w.flush()?;
    if let Some(path) = &args.edges {
        let mut w = create(path)?;
        write_edge_list(&inst.graph, &mut w)?;
        w.flush()?;
    }
    writeln!(out, "n={} m={} seed={}", inst.n(), inst.graph.edge_count(), inst.seed)?;
    Ok(())
}

fn cmd_thresholds(args: ThresholdsArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(b) = args.b.iter().find(|&&b| !(b > 0.0 && b.is_finite())) {
        return Err(usage(format!("b must be positive, got {b}")));
    }
    let mut text = String::from("b,t1,t2,min_a\n");
    for &b in &args.b {
        let t1 = solve_t1(b)?;
        let t2 = solve_t2(b).map(format_sig9).unwrap_or_default();
        let min_a = min_a_for_recovery(b)?;
        text.push_str(&format!("{},{},{},{}\n", format_sig9(b), format_sig9(t1), t2, format_sig9(min_a)));
    }
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let config: SweepConfig = serde_json::from_reader(open(&args.config)?)?;
    let records = config.run()?;
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            write_trials_csv(&records, args.timing, &mut w)?;
            w.flush()?;
        }
        None => write_trials_csv(&records, args.timing, &mut *out)?,
    }
    if let Some(path) = &args.summary {
        let mut w = create(path)?;
        write_summary_csv(&summarize(&records), &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_recover(args: RecoverArgs, out: &mut dyn Write) -> Result<()> {
    let inst = read_instance(open(&args.instance)?)?;
    let outcome = match args.mode {
        RecoverMode::Triangle => recover_instance(&inst, args.c_s, args.c_d)?,
        RecoverMode::WithLocations => recover_instance_with_locations(&inst)?,
    };
    let mut w = create(&args.out)?;
    write_labels(&outcome.partition, &mut w)?;
    w.flush()?;
    if let (Some(acc), Some(exact)) = (outcome.accuracy, outcome.exact) {
        writeln!(out, "accuracy={} exact={}", format_sig9(acc), exact)?;
    }
    writeln!(
        out,
        "components={} removed_edges={} ambiguous={}",
        outcome.component_count, outcome.removed_edges, outcome.ambiguous
    )?;
    Ok(())
}

fn verdict_line(v: RegimeVerdict) -> String {
    format!("{} margin={}", v.verdict, format_sig9(v.margin))
}

fn cmd_regime(args: RegimeArgs, out: &mut dyn Write) -> Result<()> {
    let line = match args.selector {
        Selector::Vrg => verdict_line(predicted_vrg_connectivity(args.a, args.b)),
        Selector::RagIsolated => {
            if args.t < 1 {
                return Err(Error::Dimension("t must be at least 1".into()));
            }
            verdict_line(predicted_isolated_rag(args.t, args.a, args.b))
        }
        Selector::RagConnected => {
            if args.t < 1 {
                return Err(Error::Dimension("t must be at least 1".into()));
            }
            sufficient_line(rag_connectivity_sufficient(args.t, args.a, args.b))
        }
        Selector::VrgUnion => {
            let c = args.c.ok_or_else(|| usage("vrg-union needs --c"))?;
            sufficient_line(vrg_union_connectivity_sufficient(c, args.b, args.a)?)
        }
    };
    writeln!(out, "{line}")?;
    Ok(())
}

/// Sufficient conditions only certify one side.
fn sufficient_line(holds: bool) -> String {
    if holds {
        "InRegime sufficient=true".into()
    } else {
        "Undecided sufficient=false".into()
    }
}

fn cmd_analyze(args: AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let inst = read_instance(open(&args.instance)?)?;
    let g = &inst.graph;
    let cc = connected_components(g);
    let degrees: Vec<usize> = (0..g.n()).map(|u| g.degree(u)).collect();
    let min = degrees.iter().copied().min().unwrap_or(0);
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mean = if g.n() == 0 { 0.0 } else { 2.0 * g.edge_count() as f64 / g.n() as f64 };
    writeln!(out, "model={} n={} m={} t={}", inst.model().name(), g.n(), g.edge_count(), inst.dim_t())?;
    writeln!(
        out,
        "components={} largest_component={} isolated={}",
        cc.count,
        cc.sizes().into_iter().max().unwrap_or(0),
        count_isolated(g)
    )?;
    writeln!(out, "degree_min={min} degree_mean={} degree_max={max}", format_sig9(mean))?;
    if args.verify {
        let ok = verify_against_oracle(&inst);
        writeln!(out, "oracle={}", if ok { "match" } else { "mismatch" })?;
        if !ok {
            return Err(Error::Model("edge set differs from the geometry".into()));
        }
    }
    Ok(())
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock).and_then(|()| lock.flush().map_err(Error::from)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

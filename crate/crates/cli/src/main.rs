use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use sumgraph::bounds::{crossover_exponent, evaluate_bounds, PowerBound};
use sumgraph::constructions::ConstructionKind;
use sumgraph::energy::{dyadic_extract_checked, EnergyMode};
use sumgraph::harness::{
    build_report, emit_json, fit_exponent, run_construction, sweep, write_records_csv, Params, Quantity,
    ReportOptions, SweepRecord,
};
use sumgraph::oracle::{self, parse_target};
use sumgraph::pencils::{verify_four_incidences, write_scene_csv, PencilScene};
use sumgraph::setgraph::{read_value_set, write_graph, write_value_set};
use sumgraph::{BigRat, Mode, ValueSet};

#[derive(Parser)]
#[command(name = "sumgraph", version, about = "Distinct sums, products and ratios along graph edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one construction and print its JSON report.
    Construct(ConstructArgs),
    /// Run a construction over a list of parameter values.
    Sweep(SweepArgs),
    /// Energy and dyadic extraction summary for a value set.
    Energy(EnergyArgs),
    /// Evaluate the lower-bound formulas at (n, m).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exponent e where two bounds agree at m = n^e.
    Crossover {
        /// bound name, `name:branch`, or `a,b` exponent pair
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
    },
    /// Build the pencil scene and check its incidences.
    Pencils {
        #[arg(long)]
        n: u64,
        /// also dump points and lines as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare brute-force oracles against the main code paths.
    Verify {
        /// construction name, energy, bounds, pencils, or all
        #[arg(default_value = "all")]
        target: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone, Default)]
struct GenParams {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// base set file for the blow-ups
    #[arg(long)]
    set: Option<PathBuf>,
    /// lift the size guard on the digit construction
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// comma-separated subset of sum,product,ratio,difference
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<String>>,
    /// record wall-clock seconds (reports are no longer byte-stable)
    #[arg(long)]
    timings: bool,
    /// skip edge statistics
    #[arg(long)]
    counts_only: bool,
}

#[derive(Args)]
struct ConstructArgs {
    name: String,
    #[command(flatten)]
    params: GenParams,
    #[command(flatten)]
    report: ReportArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_set: Option<PathBuf>,
    #[arg(long)]
    emit_graph: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    name: String,
    /// values of the swept parameter, e.g. 2^12,2^15
    #[arg(long, value_delimiter = ',', required = true)]
    points: Vec<String>,
    /// swept parameter (default: n, s for projection, k for matching, ruzsa and blow-ups)
    #[arg(long)]
    param: Option<String>,
    /// fit log y against log x, as x:y
    #[arg(long)]
    fit: Vec<String>,
    #[command(flatten)]
    params: GenParams,
    #[command(flatten)]
    report: ReportArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct EnergyArgs {
    #[arg(long, default_value = "add")]
    mode: String,
    #[arg(long)]
    set: Option<PathBuf>,
    /// inline values, e.g. 1,2,3/2
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<String>>,
}

/// `4096`, `2^12`.
fn parse_count(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Some((b, e)) = s.split_once('^') {
        let b: u64 = b.parse().with_context(|| format!("bad base in {s:?}"))?;
        let e: u32 = e.parse().with_context(|| format!("bad exponent in {s:?}"))?;
        return b.checked_pow(e).with_context(|| format!("{s} overflows"));
    }
    s.parse().with_context(|| format!("bad count {s:?}"))
}

fn parse_rat(s: &str) -> Result<BigRat> {
    s.trim().parse::<BigRat>().with_context(|| format!("bad rational {s:?}"))
}

fn load_set(path: &Path) -> Result<ValueSet> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_value_set(BufReader::new(f))?)
}

impl GenParams {
    fn resolve(&self) -> Result<Params> {
        Ok(Params {
            n: self.n.as_deref().map(parse_count).transpose()?,
            s: self.s,
            c: self.c.as_deref().map(parse_rat).transpose()?,
            k: self.k,
            delta: self.delta.as_deref().map(parse_rat).transpose()?,
            seed: self.seed,
            base: self.set.as_deref().map(load_set).transpose()?,
            allow_large: self.allow_large,
        })
    }
}

impl ReportArgs {
    fn options(&self) -> Result<ReportOptions> {
        let modes = match &self.modes {
            Some(list) => list.iter().map(|m| m.parse::<Mode>()).collect::<Result<Vec<_>, _>>()?,
            None => Mode::ALL.to_vec(),
        };
        Ok(ReportOptions { modes, timings: self.timings, counts_only: self.counts_only })
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

/// `Ok(true)` when every checked invariant holds.
fn construct(args: &ConstructArgs) -> Result<bool> {
    let kind: ConstructionKind = args.name.parse()?;
    let params = args.params.resolve()?;
    let start = std::time::Instant::now();
    let out = run_construction(kind, &params)?;
    let opts = args.report.options()?;
    let mut report = build_report(&out, &opts)?;
    if opts.timings {
        report.seconds = Some(start.elapsed().as_secs_f64());
    }
    if let Some(p) = &args.emit_set {
        write_value_set(create(p)?, &out.set)?;
    }
    if let Some(p) = &args.emit_graph {
        write_graph(create(p)?, &out.graph)?;
    }
    write_out(args.out.as_deref(), &emit_json(&report)?)?;
    for name in report.failed_invariants() {
        eprintln!("invariant failed: {name}");
    }
    Ok(report.all_invariants_pass())
}

fn run_sweep(args: &SweepArgs) -> Result<bool> {
    let kind: ConstructionKind = args.name.parse()?;
    let base = args.params.resolve()?;
    let param = args.param.clone().unwrap_or_else(|| {
        match kind {
            ConstructionKind::Projection => "s",
            ConstructionKind::Matching
            | ConstructionKind::Ruzsa
            | ConstructionKind::Blowup
            | ConstructionKind::BlowupRestricted => "k",
            _ => "n",
        }
        .to_string()
    });
    let mut points = Vec::with_capacity(args.points.len());
    for raw in &args.points {
        let v = parse_count(raw)?;
        let mut p = base.clone();
        match param.as_str() {
            "n" => p.n = Some(v),
            "s" => p.s = Some(u32::try_from(v)?),
            "k" => p.k = Some(u32::try_from(v)?),
            "seed" => p.seed = v,
            other => bail!("cannot sweep over {other:?}; use n, s, k or seed"),
        }
        points.push(p);
    }
    let reports = sweep(kind, &points, &args.report.options()?)?;
    let records: Vec<SweepRecord> = reports.iter().map(SweepRecord::from_report).collect();
    let mut fits = Vec::new();
    for spec in &args.fit {
        let (x, y) = spec.split_once(':').with_context(|| format!("fit {spec:?} is not x:y"))?;
        fits.push(fit_exponent(&records, x.parse::<Quantity>()?, y.parse::<Quantity>()?)?);
    }
    if let Some(p) = &args.csv {
        write_records_csv(create(p)?, &records)?;
    }
    let doc = serde_json::json!({ "records": reports, "fits": fits });
    write_out(args.out.as_deref(), &emit_json(&doc)?)?;
    Ok(reports.iter().all(|r| r.all_invariants_pass()))
}

fn run_energy(args: &EnergyArgs) -> Result<bool> {
    let mode: EnergyMode = args.mode.parse()?;
    let set = match (&args.set, &args.values) {
        (Some(p), None) => load_set(p)?,
        (None, Some(vs)) => {
            let values = vs.iter().map(|v| parse_rat(v)).collect::<Result<Vec<_>>>()?;
            ValueSet::build(values)?.set
        }
        _ => bail!("give exactly one of --set or --values"),
    };
    let (ext, checks) = dyadic_extract_checked(&set, mode)?;
    let doc = serde_json::json!({
        "mode": mode,
        "n": ext.n,
        "K": ext.k_ratio,
        "E": ext.energy,
        "level": ext.level,
        "level_sums": ext.level_sums,
        "M": ext.m,
        "t_values": ext.t_values,
        "ordered_pair_count": ext.ordered_pair_count,
        "unordered_edge_count": ext.unordered_edge_count,
        "L": ext.log_levels,
        "checks": checks,
        "passed": checks.all(),
    });
    print!("{}", emit_json(&doc)?);
    Ok(checks.all())
}

fn run_bounds(n: u64, m: u64, json: bool) -> Result<()> {
    let report = evaluate_bounds(n, m)?;
    if json {
        print!("{}", emit_json(&report)?);
        return Ok(());
    }
    println!("n = {n}, m = {m} ({})", report.note);
    println!("{:<8} {:>6} {:>16} {:>10}", "bound", "branch", "value", "log2");
    for (name, v) in &report.values {
        println!("{name:<8} {:>6} {:>16.6e} {:>10.4}", v.branch, v.value, v.log2);
    }
    println!("dominant: {}", report.dominant);
    Ok(())
}

fn run_verify(target: &str, json: bool) -> Result<bool> {
    let checks = oracle::run(parse_target(target)?)?;
    let passed = checks.iter().all(|c| c.passed);
    if json {
        print!("{}", emit_json(&checks)?);
    } else {
        for c in &checks {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        println!("{} checks, {failed} failed", checks.len());
    }
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Construct(args) => construct(&args),
        Command::Sweep(args) => run_sweep(&args),
        Command::Energy(args) => run_energy(&args),
        Command::Bounds { n, m, json } => run_bounds(n, m, json).map(|_| true),
        Command::Crossover { b1, b2 } => {
            let e = crossover_exponent(&PowerBound::lookup_term(&b1)?, &PowerBound::lookup_term(&b2)?)?;
            println!("{e}");
            Ok(true)
        }
        Command::Pencils { n, csv } => {
            let scene = PencilScene::new(n)?;
            if let Some(p) = csv {
                write_scene_csv(create(&p)?, &scene)?;
            }
            let report = verify_four_incidences(&scene);
            print!("{}", emit_json(&report)?);
            Ok(report.passed)
        }
        Command::Verify { target, json } => run_verify(&target, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

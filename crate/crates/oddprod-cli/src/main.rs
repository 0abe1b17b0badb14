//! Command-line front end: instance generation, colouring, verification,
//! the exact oracle, template inspection, and benchmark sweeps.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or
//! parameters, 3 internal invariant breach (palette exhausted at or above
//! the guaranteed bound), 4 palette exhausted below the bound under
//! `--unsafe` (a reportable experimental outcome, not a bug).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use oddprod::colouring::{colour_with_palette, default_palette, ColouringError};
use oddprod::io::{
    append_stats_csv, export_dot, load_colouring, load_generic_graph, load_instance,
    save_colouring, save_instance, stats_csv_row, RunMeta,
};
use oddprod::oracle::{exact_odd_chromatic, DEFAULT_VERTEX_CAP};
use oddprod::product::{ProductVertex, SecondaryFactor};
use oddprod::sweep::{
    build_instance, run_ladder, run_sweep_with_workers, BenchConfig, BenchVariant, InstanceSpec,
    SecondarySpec,
};
use oddprod::verify::{verify_odd, verify_proper, verify_support_distinct};

#[derive(Parser)]
#[command(name = "oddprod", version, about = "Odd colourings of product-structured graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Colour an instance and write the colouring document.
    Colour(ColourArgs),
    /// Run verifiers against an instance/colouring pair.
    Verify(VerifyArgs),
    /// Exact odd chromatic number of a small graph or instance.
    Oracle(OracleArgs),
    /// Print the support and risk sets around a product vertex.
    Inspect(InspectArgs),
    /// Parameter-grid sweeps and the scaling ladder.
    Bench(BenchArgs),
    /// Render an instance (optionally coloured) as DOT.
    Dot(DotArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Host width bound.
    #[arg(long)]
    t: u32,
    /// Host vertex count (at least t+1).
    #[arg(long)]
    r: u32,
    /// Secondary factor size.
    #[arg(long)]
    h: u32,
    /// Clique order; selects the path-clique product.
    #[arg(long, conflicts_with = "i_graph")]
    ell: Option<u32>,
    /// Secondary graph shape for the general product: path, cycle, or
    /// random:<max_deg>.
    #[arg(long)]
    i_graph: Option<String>,
    /// Vertex keep probability.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Edge keep probability.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ColourArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    /// Which construction the instance must match: thm1 (path), thm3
    /// (path-clique), or thm4 (general).
    #[arg(long)]
    variant: String,
    #[arg(long)]
    out: PathBuf,
    /// Append a stats row to this CSV.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Override the palette size; values below the guaranteed bound are
    /// refused unless --unsafe is given.
    #[arg(long)]
    palette: Option<u32>,
    /// Allow palettes below the guaranteed bound; exhaustion then exits 4.
    #[arg(long = "unsafe")]
    unsafe_palette: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    colouring: PathBuf,
    /// Comma-separated subset of proper,odd,support.
    #[arg(long, default_value = "proper,odd,support")]
    checks: String,
}

#[derive(Args)]
struct OracleArgs {
    /// Generic graph document or instance document.
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long, default_value_t = 12)]
    max_colours: u32,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: u32,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    /// Product vertex as i,j or i,j,k.
    #[arg(long)]
    vertex: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "thm1")]
    variant: String,
    /// Comma-separated width bounds.
    #[arg(long, default_value = "1,2")]
    t: String,
    #[arg(long, default_value = "5,10")]
    h: String,
    /// Clique orders (thm3).
    #[arg(long, default_value = "")]
    ell: String,
    /// Random I-graph degree bounds (thm4).
    #[arg(long, default_value = "")]
    delta: String,
    #[arg(long, default_value_t = 24)]
    r: u32,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 10)]
    reps: u32,
    #[arg(long, default_value_t = 1)]
    seed_base: u64,
    #[arg(long)]
    out: PathBuf,
    /// Verify every run's output.
    #[arg(long)]
    verify: bool,
    /// Full-product scaling ladder sizes, e.g. 10000,100000.
    #[arg(long, default_value = "")]
    ladder: String,
    /// Host width for ladder instances.
    #[arg(long, default_value_t = 3)]
    ladder_t: u32,
    /// Worker threads; defaults to ODDPROD_WORKERS or the rayon default.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct DotArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long)]
    colouring: Option<PathBuf>,
}

/// Failure modes mapped onto the exit-code contract.
enum Failure {
    /// Exit 1: a requested verification found violations.
    Verification(usize),
    /// Exit 2: bad input, parameters, or files.
    Invalid(String),
    /// Exit 3: internal invariant breach.
    Internal(String),
    /// Exit 4: palette exhausted below the bound under --unsafe.
    Exhausted(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Internal(_) => 3,
            Failure::Exhausted(_) => 4,
        }
    }
}

fn invalid(err: impl std::fmt::Display) -> Failure {
    Failure::Invalid(err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Colour(args) => cmd_colour(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Inspect(args) => cmd_inspect(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Dot(args) => cmd_dot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Verification(count) => eprintln!("verification failed: {count} violation(s)"),
                Failure::Invalid(msg) => eprintln!("error: {msg}"),
                Failure::Internal(msg) => eprintln!("internal error: {msg}"),
                Failure::Exhausted(msg) => eprintln!("palette exhausted: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn parse_secondary_spec(args: &GenArgs) -> Result<SecondarySpec, Failure> {
    if let Some(ell) = args.ell {
        if ell < 1 {
            return Err(Failure::Invalid("--ell must be at least 1".into()));
        }
        return Ok(SecondarySpec::PathClique { ell });
    }
    match args.i_graph.as_deref() {
        None => Ok(SecondarySpec::Path),
        Some("path") => Ok(SecondarySpec::GeneralPath),
        Some("cycle") => Ok(SecondarySpec::GeneralCycle),
        Some(spec) => match spec.strip_prefix("random:") {
            Some(d) => {
                let max_deg: u32 = d
                    .parse()
                    .map_err(|_| invalid(format!("bad --i-graph degree bound {d:?}")))?;
                Ok(SecondarySpec::GeneralRandom { max_deg })
            }
            None => Err(invalid(format!(
                "unknown --i-graph {spec:?} (expected path, cycle, or random:<max_deg>)"
            ))),
        },
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    for (name, value) in [("q", args.q), ("p", args.p)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(invalid(format!("--{name} must be in [0,1]")));
        }
    }
    let secondary = parse_secondary_spec(&args)?;
    let spec = InstanceSpec {
        t: args.t,
        r: args.r,
        h: args.h,
        secondary,
        q_vertex: args.q,
        p_edge: args.p,
        seed: args.seed,
    };
    let g = build_instance(&spec).map_err(invalid)?;
    write_file(&args.out, &save_instance(&g))
}

fn cmd_colour(args: ColourArgs) -> Result<(), Failure> {
    let text = read_file(&args.r#in)?;
    let g = load_instance(&text).map_err(invalid)?;

    let expected_kind = match args.variant.as_str() {
        "thm1" => "path",
        "thm3" => "path_clique",
        "thm4" => "general",
        other => return Err(invalid(format!("unknown variant {other:?}"))),
    };
    if g.secondary().kind_name() != expected_kind {
        return Err(invalid(format!(
            "variant {} expects a {expected_kind} instance, file has {}",
            args.variant,
            g.secondary().kind_name()
        )));
    }

    let bound = default_palette(&g);
    let palette = args.palette.unwrap_or(bound);
    if palette < bound && !args.unsafe_palette {
        return Err(invalid(format!(
            "palette {palette} is below the guaranteed bound {bound}; pass --unsafe to experiment"
        )));
    }

    let start = Instant::now();
    match colour_with_palette(&g, palette) {
        Ok((colouring, stats)) => {
            let millis = start.elapsed().as_secs_f64() * 1e3;
            write_file(&args.out, &save_colouring(&colouring))?;
            if let Some(stats_path) = &args.stats {
                let meta = RunMeta::for_instance(&g, None, palette);
                let row = stats_csv_row(&meta, &stats, millis);
                append_stats_csv(stats_path, &[row])
                    .map_err(|e| invalid(format!("{}: {e}", stats_path.display())))?;
            }
            Ok(())
        }
        Err(err @ ColouringError::PaletteExhausted { .. }) => {
            if palette < bound {
                Err(Failure::Exhausted(format!("{err} (palette below bound {bound})")))
            } else {
                Err(Failure::Internal(err.to_string()))
            }
        }
        Err(err) => Err(invalid(err)),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let g = load_instance(&read_file(&args.instance)?).map_err(invalid)?;
    let colouring = load_colouring(&read_file(&args.colouring)?).map_err(invalid)?;

    let mut total = 0usize;
    for check in args.checks.split(',').filter(|c| !c.is_empty()) {
        let report = match check {
            "proper" => verify_proper(&g, &colouring).map_err(invalid)?,
            "odd" => verify_odd(&g, &colouring).map_err(invalid)?.0,
            "support" => verify_support_distinct(&g, &colouring).map_err(invalid)?,
            other => return Err(invalid(format!("unknown check {other:?}"))),
        };
        for violation in &report.violations {
            let line = serde_json::to_string(violation).expect("violations serialize");
            println!("{line}");
        }
        println!(
            "check {check}: {}",
            if report.ok() {
                "ok".to_string()
            } else {
                format!("{} violation(s)", report.violations.len())
            }
        );
        total += report.violations.len();
    }
    if total > 0 {
        Err(Failure::Verification(total))
    } else {
        Ok(())
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<(), Failure> {
    let text = read_file(&args.r#in)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| invalid(format!("not JSON: {e}")))?;
    let graph = if value.get("host").is_some() {
        load_instance(&text).map_err(invalid)?.to_simple_graph()
    } else {
        load_generic_graph(&text).map_err(invalid)?
    };
    match exact_odd_chromatic(&graph, args.max_colours, args.cap).map_err(invalid)? {
        Some(count) => println!("{count}"),
        None => println!("none"),
    }
    Ok(())
}

fn parse_vertex(text: &str) -> Result<ProductVertex, Failure> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| invalid(format!("bad vertex {text:?} (expected i,j or i,j,k)")))?;
    match parts.as_slice() {
        [i, j] => Ok(ProductVertex::new(*i, *j)),
        [i, j, k] => Ok(ProductVertex::with_clique(*i, *j, *k)),
        _ => Err(invalid(format!("bad vertex {text:?} (expected i,j or i,j,k)"))),
    }
}

fn cmd_inspect(args: InspectArgs) -> Result<(), Failure> {
    let g = load_instance(&read_file(&args.r#in)?).map_err(invalid)?;
    let v = parse_vertex(&args.vertex)?;
    let support = g.support_set(v).map_err(invalid)?;
    let risk = g.risk_set(v).map_err(invalid)?;
    let as_lists = |set: &[ProductVertex]| -> Vec<Vec<u32>> {
        set.iter()
            .map(|w| {
                if matches!(g.secondary(), SecondaryFactor::PathClique { .. }) {
                    vec![w.i, w.j, w.k]
                } else {
                    vec![w.i, w.j]
                }
            })
            .collect()
    };
    let doc = serde_json::json!({
        "vertex": [v.i, v.j, v.k],
        "in_subgraph": g.position_of(v).is_some(),
        "support": as_lists(&support),
        "support_size": support.len(),
        "risk": as_lists(&risk),
        "risk_size": risk.len(),
    });
    println!("{doc}");
    Ok(())
}

fn parse_u32_list(text: &str) -> Result<Vec<u32>, Failure> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| invalid(format!("bad list entry {p:?}")))
        })
        .collect()
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let variant = match args.variant.as_str() {
        "thm1" => BenchVariant::Thm1,
        "thm3" => BenchVariant::Thm3,
        "thm4" => BenchVariant::Thm4,
        other => return Err(invalid(format!("unknown variant {other:?}"))),
    };
    let workers = match args.workers {
        Some(w) => Some(w),
        None => match std::env::var("ODDPROD_WORKERS") {
            Ok(value) => Some(
                value
                    .parse::<usize>()
                    .map_err(|_| invalid(format!("bad ODDPROD_WORKERS value {value:?}")))?,
            ),
            Err(_) => None,
        },
    };
    let cfg = BenchConfig {
        variant,
        t_values: parse_u32_list(&args.t)?,
        h_values: parse_u32_list(&args.h)?,
        ell_values: parse_u32_list(&args.ell)?,
        delta_values: parse_u32_list(&args.delta)?,
        r: args.r,
        q_vertex: args.q,
        p_edge: args.p,
        repetitions: args.reps,
        seed_base: args.seed_base,
        verify: args.verify,
    };
    cfg.validate().map_err(invalid)?;

    let report = run_sweep_with_workers(&cfg, workers).map_err(invalid)?;
    let rows: Vec<String> = report
        .records
        .iter()
        .map(|rec| stats_csv_row(&rec.meta, &rec.stats, rec.millis))
        .collect();
    append_stats_csv(&args.out, &rows).map_err(|e| invalid(format!("{}: {e}", args.out.display())))?;

    // Per-cell summary: worst observed colour usage against the palette.
    let mut summaries: Vec<(String, u32, u32, u32, bool)> = Vec::new();
    for rec in &report.records {
        let key = format!(
            "variant={} t={} h={} ell={} delta={}",
            rec.meta.variant,
            rec.meta.t,
            rec.meta.h,
            rec.meta.ell.map_or_else(|| "-".into(), |v| v.to_string()),
            rec.meta.delta.map_or_else(|| "-".into(), |v| v.to_string()),
        );
        match summaries.iter_mut().find(|(k, ..)| *k == key) {
            Some((_, palette, used, runs, verified)) => {
                *palette = (*palette).max(rec.meta.palette);
                *used = (*used).max(rec.stats.colours_used);
                *runs += 1;
                *verified &= rec.verified.unwrap_or(true);
            }
            None => summaries.push((
                key,
                rec.meta.palette,
                rec.stats.colours_used,
                1,
                rec.verified.unwrap_or(true),
            )),
        }
    }
    for (key, palette, used, runs, verified) in &summaries {
        let mut line = format!("cell {key}: runs={runs} palette={palette} max_colours_used={used}");
        if args.verify {
            write!(line, " verified={}", if *verified { "ok" } else { "FAIL" }).unwrap();
        }
        println!("{line}");
    }

    let ladder_sizes: Vec<u64> = args
        .ladder
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| invalid(format!("bad ladder size {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    if !ladder_sizes.is_empty() {
        let points = run_ladder(args.ladder_t, &ladder_sizes, args.seed_base).map_err(invalid)?;
        let mut ladder_rows = Vec::new();
        for point in &points {
            println!(
                "ladder n={} (r={}, h={}, m={}) gen={:.1}ms colour={:.1}ms colours_used={}",
                point.n, point.r, point.h, point.m, point.gen_millis, point.colour_millis,
                point.colours_used
            );
            let meta = RunMeta {
                variant: "thm1",
                t: args.ladder_t,
                h: point.h,
                ell: None,
                delta: None,
                n: point.n,
                m: point.m,
                seed: Some(args.seed_base),
                palette: point.palette,
            };
            ladder_rows.push(stats_csv_row(&meta, &point.stats, point.colour_millis));
        }
        for pair in points.windows(2) {
            let ratio = pair[1].colour_millis / pair[0].colour_millis.max(1e-6);
            println!(
                "ladder ratio {} -> {}: {:.2}x per {:.1}x size",
                pair[0].n,
                pair[1].n,
                ratio,
                pair[1].n as f64 / pair[0].n as f64
            );
        }
        append_stats_csv(&args.out, &ladder_rows)
            .map_err(|e| invalid(format!("{}: {e}", args.out.display())))?;
    }

    if report.exhaustion_count > 0 {
        return Err(Failure::Internal(format!(
            "{} run(s) exhausted their palette",
            report.exhaustion_count
        )));
    }
    let failed = report
        .records
        .iter()
        .filter(|r| r.verified == Some(false))
        .count();
    if failed > 0 {
        return Err(Failure::Verification(failed));
    }
    Ok(())
}

fn cmd_dot(args: DotArgs) -> Result<(), Failure> {
    let g = load_instance(&read_file(&args.r#in)?).map_err(invalid)?;
    let colouring = match &args.colouring {
        Some(path) => Some(load_colouring(&read_file(path)?).map_err(invalid)?),
        None => None,
    };
    if let Some(c) = &colouring {
        if c.len() != g.n() {
            return Err(invalid(format!(
                "colouring covers {} vertices, instance has {}",
                c.len(),
                g.n()
            )));
        }
    }
    print!("{}", export_dot(&g, colouring.as_ref()));
    Ok(())
}

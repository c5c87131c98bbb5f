//! `starcoeff` - verification, fuzzing, extremal search, and table
//! generation for coefficient functionals of starlike functions.
//!
//! Exit codes are a stable contract:
//! 0 success, 1 check failed, 2 usage error, 3 unmet parameter conditions,
//! 4 I/O error.

mod grid;
mod identity_suite;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grid::RangeSpec;
use starcoeff::caratheodory::HerglotzMeasure;
use starcoeff::extremal::{parameter_table, random_scan, search, SearchConfig, TableRow};
use starcoeff::functionals::{sharp_bound, FunctionalSpec};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONDITIONS: u8 = 3;
const EXIT_IO: u8 = 4;

/// Tolerance by which a fuzzed value may exceed the bound before
/// `check-bounds` reports a violation.
const VIOLATION_TOL: f64 = 1e-9;

/// Environment variable naming the directory for default output files.
const OUT_DIR_ENV: &str = "STARCOEFF_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "starcoeff",
    version,
    about = "Coefficient functionals of starlike functions: verify identities, \
             fuzz sharp bounds, search for extremal generators, sweep parameters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebraic identities on streams of random generators.
    VerifyIdentities(VerifyArgs),
    /// Fuzz random generators against the sharp-bound formula of one functional.
    CheckBounds(CheckArgs),
    /// Multistart extremal search for one functional.
    Search(SearchArgs),
    /// Sweep parameter ranges, searching at every grid point.
    Table(TableArgs),
    /// Emit one seeded random measure.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    A4Gamma,
    A4GammaEta,
    A5Mu,
    A5XiZeta,
    FeketeSzego,
}

#[derive(Args)]
struct KindParams {
    /// Which functional to work with.
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    zeta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct KindRanges {
    /// Which functional to sweep.
    #[arg(long, value_enum)]
    kind: Kind,
    /// VALUE or START:STOP:STEP.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<RangeSpec>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<RangeSpec>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<RangeSpec>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<RangeSpec>,
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<RangeSpec>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<RangeSpec>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random measures to draw.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Maximum atoms per measure (counts cycle 1..=atoms).
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    /// Series truncation order (>= 5; identities reach a_5).
    #[arg(long, default_value_t = starcoeff::series::DEFAULT_ORDER)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    spec: KindParams,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Atoms per sampled measure.
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    /// Series truncation order (must cover the functional).
    #[arg(long, default_value_t = starcoeff::series::DEFAULT_ORDER)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    spec: KindParams,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Artifact path (defaults to search.EXT under $STARCOEFF_OUT_DIR or .).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    spec: KindRanges,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// csv (default), json (one object per line), or text.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Artifact path (defaults to table.EXT under $STARCOEFF_OUT_DIR or .).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    /// Artifact path (defaults to sample.json under $STARCOEFF_OUT_DIR or .).
    #[arg(long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn conditions(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONDITIONS, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Self { code: EXIT_IO, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Self {
        Self { code: EXIT_CHECK_FAILED, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyIdentities(args) => cmd_verify_identities(args),
        Command::CheckBounds(args) => cmd_check_bounds(args),
        Command::Search(args) => cmd_search(args),
        Command::Table(args) => cmd_table(args),
        Command::Sample(args) => cmd_sample(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// 12 significant digits, for text reports.
fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn opt_6(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v:.6}"))
}

fn build_spec(p: &KindParams) -> Result<FunctionalSpec, Failure> {
    let mut unused: Vec<&str> = Vec::new();
    let need = |name: &'static str, v: Option<f64>| {
        v.ok_or_else(|| Failure::usage(format!("--{name} is required for this --kind")))
    };
    let spec = match p.kind {
        Kind::A4Gamma => {
            for (n, v) in [("eta", p.eta), ("mu", p.mu), ("xi", p.xi), ("zeta", p.zeta), ("lambda", p.lambda)] {
                if v.is_some() { unused.push(n); }
            }
            FunctionalSpec::A4Gamma { gamma: need("gamma", p.gamma)? }
        }
        Kind::A4GammaEta => {
            for (n, v) in [("mu", p.mu), ("xi", p.xi), ("zeta", p.zeta), ("lambda", p.lambda)] {
                if v.is_some() { unused.push(n); }
            }
            FunctionalSpec::A4GammaEta { gamma: need("gamma", p.gamma)?, eta: need("eta", p.eta)? }
        }
        Kind::A5Mu => {
            for (n, v) in [("gamma", p.gamma), ("eta", p.eta), ("xi", p.xi), ("zeta", p.zeta), ("lambda", p.lambda)] {
                if v.is_some() { unused.push(n); }
            }
            FunctionalSpec::A5Mu { mu: need("mu", p.mu)? }
        }
        Kind::A5XiZeta => {
            for (n, v) in [("gamma", p.gamma), ("eta", p.eta), ("mu", p.mu), ("lambda", p.lambda)] {
                if v.is_some() { unused.push(n); }
            }
            FunctionalSpec::A5XiZeta { xi: need("xi", p.xi)?, zeta: need("zeta", p.zeta)? }
        }
        Kind::FeketeSzego => {
            for (n, v) in [("gamma", p.gamma), ("eta", p.eta), ("mu", p.mu), ("xi", p.xi), ("zeta", p.zeta)] {
                if v.is_some() { unused.push(n); }
            }
            FunctionalSpec::FeketeSzego { lambda: need("lambda", p.lambda)? }
        }
    };
    if let Some(name) = unused.first() {
        return Err(Failure::usage(format!(
            "--{name} does not apply to --kind {}",
            spec.kind_name()
        )));
    }
    spec.validate().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(spec)
}

fn check_order(order: usize, min: usize) -> Result<(), Failure> {
    if order < min {
        return Err(Failure::usage(format!("--order {order} is below the required {min}")));
    }
    Ok(())
}

fn resolve_output(explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(default_name)
    })
}

/// Writes via a sibling temp file and rename, so readers never observe a
/// partial artifact.
fn write_atomic(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    let mut tmp = path.clone().into_os_string();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)
        .map_err(|e| Failure::io(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Failure::io(format!("cannot move artifact into {}: {e}", path.display())))?;
    Ok(())
}

fn format_ext(format: Format, json_lines: bool) -> &'static str {
    match format {
        Format::Text => "txt",
        Format::Csv => "csv",
        Format::Json => {
            if json_lines {
                "jsonl"
            } else {
                "json"
            }
        }
    }
}

fn cmd_verify_identities(args: VerifyArgs) -> Result<(), Failure> {
    check_order(args.order, 5)?;
    if args.samples == 0 || args.atoms == 0 {
        return Err(Failure::usage("--samples and --atoms must be positive"));
    }
    if args.format == Format::Csv {
        return Err(Failure::usage("verify-identities supports text or json output"));
    }
    let reports = identity_suite::run(args.seed, args.samples, args.atoms, args.order);
    let all_pass = reports.iter().all(|r| r.pass());

    match args.format {
        Format::Text => {
            for r in &reports {
                println!(
                    "identity {:28} checks={:<7} max-residual={} tol={} {}",
                    r.name,
                    r.checks,
                    sig(r.max_residual),
                    sig(r.tolerance),
                    if r.pass() { "PASS" } else { "FAIL" }
                );
                if !r.pass() {
                    if let Some(w) = &r.witness {
                        println!("  witness: {w}");
                    }
                }
            }
            println!("verify-identities: {}", if all_pass { "PASS" } else { "FAIL" });
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "name": r.name,
                        "checks": r.checks,
                        "max_residual": r.max_residual,
                        "tolerance": r.tolerance,
                        "pass": r.pass(),
                        "witness": r.witness,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "seed": args.seed,
                "samples": args.samples,
                "atoms": args.atoms,
                "order": args.order,
                "pass": all_pass,
                "identities": items,
            });
            println!("{doc}");
        }
        Format::Csv => unreachable!(),
    }

    if all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> =
            reports.iter().filter(|r| !r.pass()).map(|r| r.name).collect();
        Err(Failure::check(format!("identities failed: {}", failed.join(", "))))
    }
}

fn cmd_check_bounds(args: CheckArgs) -> Result<(), Failure> {
    let spec = build_spec(&args.spec)?;
    check_order(args.order, spec.min_order())?;
    if args.samples == 0 || args.atoms == 0 {
        return Err(Failure::usage("--samples and --atoms must be positive"));
    }
    let report = sharp_bound(&spec)
        .map_err(|e| Failure::conditions(format!("{e}; nothing to check against")))?;
    let bound = match report.bound {
        Some(b) => b,
        None => {
            let name = report.first_failure().unwrap_or("unknown");
            return Err(Failure::conditions(format!(
                "condition {name} fails for {spec}; bound formula does not apply"
            )));
        }
    };

    let scan = random_scan(&spec, args.samples, args.atoms, args.seed);
    let worst_ratio = scan.best_value / bound;
    let violated = scan.best_value > bound + VIOLATION_TOL;
    let argmax = serde_json::to_string(&scan.best_measure).expect("measure serializes");

    match args.format {
        Format::Text => {
            println!("spec: {spec}");
            println!("bound: {}", sig(bound));
            println!("samples: {} (atoms={}, seed={})", args.samples, args.atoms, args.seed);
            println!("max value: {}", sig(scan.best_value));
            println!("worst ratio value/bound: {}", sig(worst_ratio));
            println!("argmax measure: {argmax}");
            println!("check-bounds: {}", if violated { "VIOLATED" } else { "PASS" });
        }
        Format::Json => {
            let doc = serde_json::json!({
                "spec": spec,
                "bound": bound,
                "samples": args.samples,
                "atoms": args.atoms,
                "seed": args.seed,
                "max_value": scan.best_value,
                "worst_ratio": worst_ratio,
                "argmax_measure": scan.best_measure,
                "violated": violated,
            });
            println!("{doc}");
        }
        Format::Csv => {
            return Err(Failure::usage("check-bounds supports text or json output"));
        }
    }

    if violated {
        Err(Failure::check(format!(
            "value {} exceeds bound {} by more than {VIOLATION_TOL:e}",
            sig(scan.best_value),
            sig(bound)
        )))
    } else {
        Ok(())
    }
}

fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let param_names: Vec<&str> =
        rows.first().map_or_else(Vec::new, |r| r.spec.params().iter().map(|(n, _)| *n).collect());
    let _ = writeln!(out, "{},conditions_met,bound,search_max,gap,converged", param_names.join(","));
    for row in rows {
        let params: Vec<String> = row.spec.params().iter().map(|(_, v)| v.to_string()).collect();
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        let conditions =
            row.conditions_met.map_or_else(String::new, |b| b.to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            params.join(","),
            conditions,
            opt(row.bound),
            row.search_max,
            opt(row.gap),
            row.converged
        );
    }
    out
}

fn table_text(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for row in rows {
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), sig);
        let conditions = row
            .conditions_met
            .map_or_else(|| "n/a".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "{:40} conditions_met={conditions:5} bound={:18} search_max={} gap={:18} converged={}",
            row.spec.to_string(),
            opt(row.bound),
            sig(row.search_max),
            opt(row.gap),
            row.converged
        );
    }
    out
}

fn table_json_lines(rows: &[TableRow]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("row serializes"))
        .fold(String::new(), |mut acc, line| {
            acc.push_str(&line);
            acc.push('\n');
            acc
        })
}

fn cmd_search(args: SearchArgs) -> Result<(), Failure> {
    let spec = build_spec(&args.spec)?;
    if args.atoms == 0 || args.restarts == 0 || args.max_iters == 0 || args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::usage("--atoms, --restarts, --max-iters must be positive and --tol > 0"));
    }
    let cfg = SearchConfig {
        n_atoms: args.atoms,
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
    };
    let result = search(&spec, &cfg);

    let contents = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "spec": spec,
                "config": cfg,
                "result": result,
            }))
            .expect("result serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let row = TableRow {
                spec,
                conditions_met: sharp_bound(&spec).ok().map(|r| r.all_met()),
                bound: result.bound,
                search_max: result.best_value,
                gap: result.gap,
                converged: result.converged,
            };
            table_csv(&[row])
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "spec: {spec}");
            let _ = writeln!(s, "best value: {}", sig(result.best_value));
            let _ = writeln!(
                s,
                "bound: {}",
                result.bound.map_or_else(|| "none".to_string(), sig)
            );
            let _ = writeln!(s, "gap: {}", result.gap.map_or_else(|| "none".to_string(), sig));
            let _ = writeln!(s, "iterations: {}", result.iterations_used);
            let _ = writeln!(s, "converged: {}", result.converged);
            let _ = writeln!(
                s,
                "best measure: {}",
                serde_json::to_string(&result.best_measure).expect("measure serializes")
            );
            s
        }
    };

    let path = resolve_output(args.output, &format!("search.{}", format_ext(args.format, false)));
    write_atomic(&path, &contents)?;
    println!(
        "best={:.6} bound={} gap={} wrote={}",
        result.best_value,
        opt_6(result.bound),
        opt_6(result.gap),
        path.display()
    );
    Ok(())
}

fn build_grid(p: &KindRanges) -> Result<Vec<FunctionalSpec>, Failure> {
    let points = |name: &'static str, r: &Option<RangeSpec>| -> Result<Vec<f64>, Failure> {
        r.as_ref()
            .ok_or_else(|| Failure::usage(format!("--{name} is required for this --kind")))?
            .points()
            .map_err(Failure::usage)
    };
    let reject = |name: &'static str, r: &Option<RangeSpec>| -> Result<(), Failure> {
        if r.is_some() {
            Err(Failure::usage(format!("--{name} does not apply to this --kind")))
        } else {
            Ok(())
        }
    };
    let specs = match p.kind {
        Kind::A4Gamma => {
            reject("eta", &p.eta)?;
            reject("mu", &p.mu)?;
            reject("xi", &p.xi)?;
            reject("zeta", &p.zeta)?;
            reject("lambda", &p.lambda)?;
            points("gamma", &p.gamma)?
                .into_iter()
                .map(|gamma| FunctionalSpec::A4Gamma { gamma })
                .collect()
        }
        Kind::A4GammaEta => {
            reject("mu", &p.mu)?;
            reject("xi", &p.xi)?;
            reject("zeta", &p.zeta)?;
            reject("lambda", &p.lambda)?;
            let gammas = points("gamma", &p.gamma)?;
            let etas = points("eta", &p.eta)?;
            gammas
                .iter()
                .flat_map(|&gamma| {
                    etas.iter().map(move |&eta| FunctionalSpec::A4GammaEta { gamma, eta })
                })
                .collect()
        }
        Kind::A5Mu => {
            reject("gamma", &p.gamma)?;
            reject("eta", &p.eta)?;
            reject("xi", &p.xi)?;
            reject("zeta", &p.zeta)?;
            reject("lambda", &p.lambda)?;
            points("mu", &p.mu)?.into_iter().map(|mu| FunctionalSpec::A5Mu { mu }).collect()
        }
        Kind::A5XiZeta => {
            reject("gamma", &p.gamma)?;
            reject("eta", &p.eta)?;
            reject("mu", &p.mu)?;
            reject("lambda", &p.lambda)?;
            let xis = points("xi", &p.xi)?;
            let zetas = points("zeta", &p.zeta)?;
            xis.iter()
                .flat_map(|&xi| zetas.iter().map(move |&zeta| FunctionalSpec::A5XiZeta { xi, zeta }))
                .collect()
        }
        Kind::FeketeSzego => {
            reject("gamma", &p.gamma)?;
            reject("eta", &p.eta)?;
            reject("mu", &p.mu)?;
            reject("xi", &p.xi)?;
            reject("zeta", &p.zeta)?;
            points("lambda", &p.lambda)?
                .into_iter()
                .map(|lambda| FunctionalSpec::FeketeSzego { lambda })
                .collect()
        }
    };
    Ok(specs)
}

fn cmd_table(args: TableArgs) -> Result<(), Failure> {
    let specs = build_grid(&args.spec)?;
    if args.atoms == 0 || args.restarts == 0 || args.max_iters == 0 || args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::usage("--atoms, --restarts, --max-iters must be positive and --tol > 0"));
    }
    let cfg = SearchConfig {
        n_atoms: args.atoms,
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
    };
    let rows = parameter_table(&specs, &cfg);
    let contents = match args.format {
        Format::Csv => table_csv(&rows),
        Format::Json => table_json_lines(&rows),
        Format::Text => table_text(&rows),
    };
    let path = resolve_output(args.output, &format!("table.{}", format_ext(args.format, true)));
    write_atomic(&path, &contents)?;
    println!("rows={} wrote={}", rows.len(), path.display());
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), Failure> {
    if args.atoms == 0 {
        return Err(Failure::usage("--atoms must be positive"));
    }
    let measure = HerglotzMeasure::sample(args.seed, args.atoms);
    let mut contents = serde_json::to_string_pretty(&measure).expect("measure serializes");
    contents.push('\n');
    let path = resolve_output(args.output, "sample.json");
    write_atomic(&path, &contents)?;
    println!("atoms={} seed={} wrote={}", args.atoms, args.seed, path.display());
    Ok(())
}

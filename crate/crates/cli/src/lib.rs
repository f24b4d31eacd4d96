//! `undet` command-line front end.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 a checked claim failed.
//! Human-readable summaries go to stderr; `--json PATH` writes the report
//! (with its run manifest) to `PATH`, or to stdout for `-`.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use undet_core::claims;
use undet_core::codes::{self, validate, CodeSpec};
use undet_core::protocols::{self, QssConfig, Strategy, Variant};
use undet_core::report::{self, AnalyzeOptions, Envelope};
use undet_core::{Error, Limits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CLAIM: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "undet", version, about = "Reduced-density-matrix undeterminedness of stabilizer codewords")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one code: distance, unconditional D, conditional scans, E_D table.
    Analyze(AnalyzeArgs),
    /// Validate each cyclic(n) and check (n-2)-undeterminedness.
    ScanCyclic(ScanArgs),
    /// Print a catalog code as spec JSON.
    Catalog(CatalogArgs),
    /// Simulate the GHZ secret-sharing protocol.
    Qss(QssArgs),
    /// Singlet bit-commitment cheating demonstration.
    BcDemo(BcArgs),
    /// Run every regression check; exits 2 if any fails.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Write JSON report to PATH ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CodeArgs {
    /// Catalog code name (ghz, code_412, code_513, cyclic, steane_713, code_422).
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    catalog: Option<String>,
    /// Qubit count for ghz and cyclic.
    #[arg(long)]
    n: Option<usize>,
    /// Code-spec JSON file.
    #[arg(long, value_name = "PATH")]
    spec: Option<PathBuf>,
}

impl CodeArgs {
    fn load(&self) -> Result<CodeSpec, Error> {
        match (&self.catalog, &self.spec) {
            (Some(name), _) => codes::catalog_by_name(name, self.n),
            (None, Some(path)) => codes::load_spec(path),
            (None, None) => Err(Error::InvalidParams("one of --catalog or --spec is required".into())),
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Largest D in the E_D table.
    #[arg(long, value_name = "D")]
    max_trace: Option<usize>,
    /// Partition all D′-subsets (repeatable).
    #[arg(long, value_name = "D′")]
    conditional: Vec<usize>,
    /// Cross-check every subset against dense matrices.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 7)]
    from: usize,
    #[arg(long, default_value_t = 15)]
    to: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    name: String,
    #[arg(long)]
    n: Option<usize>,
    /// Write the spec here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QssArgs {
    #[arg(long, default_value = "modified", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value = "honest", value_parser = parse_strategy)]
    strategy: Strategy,
    #[arg(long, default_value_t = 100_000)]
    rounds: u64,
    #[arg(long, default_value_t = claims::QSS_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0.25)]
    check_fraction: f64,
    #[arg(long, default_value_t = 3)]
    parties: usize,
    #[arg(long, default_value_t = 0.1)]
    abort_threshold: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct BcArgs {
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = claims::QSS_SEED)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run only these criteria.
    #[arg(long, value_name = "ID")]
    only: Vec<usize>,
    #[command(flatten)]
    out: Output,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn emit<T: Serialize>(out: &Output, envelope: &Envelope<T>) -> Result<(), Error> {
    match &out.json {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            println!("{}", envelope.to_json());
            Ok(())
        }
        Some(p) => std::fs::write(p, envelope.to_json() + "\n").map_err(Error::from),
    }
}

fn opt<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |v| format!("{v:?}"))
}

fn analyze(args: &AnalyzeArgs) -> Result<i32, Error> {
    let started = Instant::now();
    let spec = args.code.load()?;
    let validation = validate(&spec);
    if !validation.valid {
        for f in validation.failures() {
            eprintln!("invalid: {}: {}", f.name, f.detail.clone().unwrap_or_default());
        }
        return Ok(EXIT_INPUT);
    }
    let options = AnalyzeOptions {
        max_trace: args.max_trace,
        conditional: args.conditional.clone(),
        oracle: args.oracle,
        limits: Limits::default(),
    };
    let r = report::analyze(&spec, &options)?;
    eprintln!("{} [[{}, {}]] rank {}", r.code, r.n, r.k, r.rank);
    eprintln!("  distance d                 {}", r.distance);
    eprintln!("  difference operator        {}", r.difference_operator);
    eprintln!("  coset min weight           {} (witness {})", r.difference_coset_min_weight, r.difference_coset_witness.sparse_string());
    eprintln!("  minimal unconditional D    {}", opt(r.minimal_unconditional_d));
    eprintln!("  subset scan agrees         {}", r.formula_scan_agree);
    eprintln!("  minimal conditional D'     {}", opt(r.minimal_conditional_d));
    for e in &r.ed_table {
        eprintln!("  E_{:<2} = {:>5}  C(n,D) = {:>6}  {}", e.d, e.count, e.binomial, if e.pass { "pass" } else { "fail" });
    }
    for (d, s) in &r.conditional {
        eprintln!("  D' = {d}: {} of {} subsets undetermined", s.undetermined.len(), s.total);
    }
    if let Some(m) = &r.mixed {
        eprintln!("  mixed pair D               {}", opt(m.d_mixed));
    }
    if let Some(o) = &r.oracle {
        eprintln!("  oracle: {} subsets, {} disagreements", o.subsets_checked, o.disagreements.len());
    }
    let params = json!({
        "code": spec.name, "catalog": args.code.catalog, "n": args.code.n, "spec": args.code.spec,
        "max_trace": args.max_trace, "conditional": args.conditional, "oracle": args.oracle,
    });
    emit(&args.out, &Envelope::new("analyze", params, None, started, &r))?;
    let oracle_ok = r.oracle.as_ref().is_none_or(|o| o.agrees());
    Ok(if oracle_ok && r.formula_scan_agree { EXIT_OK } else { EXIT_CLAIM })
}

fn scan_cyclic(args: &ScanArgs) -> Result<i32, Error> {
    let started = Instant::now();
    if args.from < 5 || args.to < args.from {
        return Err(Error::InvalidParams(format!("need 5 <= from <= to, got {}..{}", args.from, args.to)));
    }
    let scan = report::scan_cyclic(args.from, args.to, &Limits::default())?;
    for e in &scan.entries {
        if e.validation.valid {
            eprintln!(
                "n = {:>2}  {}  w_min {}  D_min {}  (n-2)-undetermined {}",
                e.n,
                e.pattern,
                opt(e.w_min),
                opt(e.minimal_unconditional_d),
                opt(e.undetermined_at_n_minus_2)
            );
        } else {
            let why: Vec<String> = e.validation.failures().filter_map(|f| f.detail.clone()).collect();
            eprintln!("n = {:>2}  {}  invalid: {}", e.n, e.pattern, why.join("; "));
        }
    }
    emit(&args.out, &Envelope::new("scan-cyclic", json!({"from": args.from, "to": args.to}), None, started, &scan))?;
    Ok(if scan.claim_holds() { EXIT_OK } else { EXIT_CLAIM })
}

fn catalog(args: &CatalogArgs) -> Result<i32, Error> {
    let spec = codes::catalog_by_name(&args.name, args.n)?;
    match &args.out {
        Some(p) => codes::save_spec(&spec, p)?,
        None => println!("{}", spec.to_json()),
    }
    Ok(EXIT_OK)
}

fn qss(args: &QssArgs) -> Result<i32, Error> {
    let started = Instant::now();
    let config = QssConfig {
        variant: args.variant,
        parties: args.parties,
        rounds: args.rounds,
        check_fraction: args.check_fraction,
        strategy: args.strategy,
        seed: args.seed,
        abort_threshold: args.abort_threshold,
    };
    let s = protocols::qss_run(&config)?;
    eprintln!("{} / {} with {} parties, {} rounds, seed {}", config.variant, config.strategy, config.parties, config.rounds, config.seed);
    eprintln!("  keep rate          {:.4} ± {:.4}", s.keep_rate.value, s.keep_rate.radius);
    eprintln!("  key agreement      {:.4} ± {:.4}", s.honest_key_agreement.value, s.honest_key_agreement.radius);
    eprintln!("  check error rate   {:.4} ± {:.4}", s.check_error_rate.value, s.check_error_rate.radius);
    if let Some(a) = s.attacker_solo_accuracy {
        eprintln!("  attacker accuracy  {:.4} ± {:.4} (Helstrom bound {:.4})", a.value, a.radius, s.attacker_helstrom_bound);
    }
    eprintln!("  aborted            {}", s.aborted);
    let params = serde_json::to_value(&config).expect("config serializes");
    emit(&args.out, &Envelope::new("qss", params, Some(config.seed), started, &s))?;
    Ok(EXIT_OK)
}

fn bc_demo(args: &BcArgs) -> Result<i32, Error> {
    let started = Instant::now();
    let s = protocols::bc_demo(args.samples, args.seed)?;
    eprintln!("{} random unitaries on the sender's qubit", s.samples);
    eprintln!("  max receiver deviation  {:.2e}", s.max_reduced_deviation);
    eprintln!("  open bit 0 success      {:.4}", s.open_success_bit0.value);
    eprintln!("  open bit 1 success      {:.4}", s.open_success_bit1.value);
    emit(&args.out, &Envelope::new("bc-demo", json!({"samples": args.samples}), Some(args.seed), started, &s))?;
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs) -> Result<i32, Error> {
    let started = Instant::now();
    let ids: Vec<usize> = if args.only.is_empty() { (1..=claims::TITLES.len()).collect() } else { args.only.clone() };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > claims::TITLES.len()) {
        return Err(Error::InvalidParams(format!("no criterion {bad}")));
    }
    let results: Vec<claims::ClaimResult> = ids.iter().map(|&i| claims::run_claim(i)).collect();
    for r in &results {
        eprintln!("{}", r.line());
        for d in r.details.iter().filter(|d| !r.passed || d.starts_with("note")) {
            eprintln!("         {d}");
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    eprintln!("{} of {} criteria passed", results.len() - failed, results.len());
    emit(&args.out, &Envelope::new("verify-paper", json!({"only": args.only}), Some(claims::QSS_SEED), started, &results))?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CLAIM })
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::ScanCyclic(a) => scan_cyclic(a),
        Command::Catalog(a) => catalog(a),
        Command::Qss(a) => qss(a),
        Command::BcDemo(a) => bc_demo(a),
        Command::VerifyPaper(a) => verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

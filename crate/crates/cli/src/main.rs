//! `bergman-lab`: kernel evaluation, membership, volumes, operator
//! application, verification suites and Lu Qi-Keng zero hunting on the
//! command line.
//!
//! Every run echoes its full effective configuration in the output header;
//! numeric payloads are byte-identical across reruns with the same
//! `(seed, samples, threads)` configuration. Complex numbers serialize as
//! `[re, im]` arrays throughout.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bergman_core::geometry::{DomainDescriptor, DomainName};
use bergman_core::kernels::{rii_volume_workers, Kernel, VolumeConstant};
use bergman_core::lqk::{
    self, grid_scan_zeros, isolate_axis_roots, PairFamily, ScanGrid, ZeroCertificate,
};
use bergman_core::maps::{MapName, ProperMap};
use bergman_core::operators::{
    gamma_apply, gamma_star_apply, project_generic, project_tetra, Poly3,
};
use bergman_core::quadrature::mc_integrate;
use bergman_core::verify::{run_suite, verify_all, SuiteName, SuiteReport, Tolerances, VerifyConfig};
use bergman_core::C;

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "bergman-lab",
    version,
    about = "Bergman kernels of R_II, the tetrablock and the symmetrized bidisc:\nevaluation, statistical verification and Lu Qi-Keng zero hunting."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Monte Carlo sample count (box proposals)
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// RNG seed; defaults to $BERGMAN_LAB_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    /// Worker count; defaults to the machine parallelism
    #[arg(long)]
    threads: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Standard-error multiplier for statistical checks
    #[arg(long = "tol-sigma")]
    tol_sigma: Option<f64>,
    /// Relative tolerance for pushforward vs closed-form agreement
    #[arg(long = "tol-bell")]
    tol_bell: Option<f64>,
    /// Relative residual certifying a kernel zero
    #[arg(long = "tol-zero")]
    tol_zero: Option<f64>,
    /// Relative residual for certificate re-evaluation
    #[arg(long = "tol-cross")]
    tol_cross: Option<f64>,
    /// Absolute coefficient tolerance for polynomial identities
    #[arg(long = "tol-coeff")]
    tol_coeff: Option<f64>,
    /// Guard band around critical values
    #[arg(long = "tol-crit")]
    tol_crit: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Bergman kernel at a point pair
    Kernel {
        /// disc|bidisc|polydisc3|rii|tetrablock
        #[arg(long)]
        domain: String,
        /// First point as JSON [[re,im],...]
        #[arg(long)]
        x: String,
        /// Second point as JSON [[re,im],...]
        #[arg(long)]
        y: String,
        /// Permit the first argument on the closure of the domain
        #[arg(long)]
        closure: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Test domain membership of a point
    Member {
        /// disc|bidisc|polydisc3|rii|tetrablock|symbidisc
        #[arg(long)]
        domain: String,
        /// Point as JSON [[re,im],...]
        #[arg(long)]
        point: String,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo volume of a domain
    Volume {
        #[arg(long)]
        domain: String,
        #[command(flatten)]
        common: Common,
    },
    /// Apply Gamma, Gamma* or the range projection to a polynomial
    Op {
        /// tetra|sym2
        #[arg(long)]
        map: String,
        /// gamma|gamma-star|project|project-tetra
        #[arg(long)]
        apply: String,
        /// Polynomial as JSON [{"exp":[a,b,c],"coef":[re,im]},...]
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites; exit 0 iff every check passes
    Verify {
        /// Suite name or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Witness that the order-k off-diagonal rotation is not a norm
    /// isometry (k >= 3)
    Falsifier {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Lu Qi-Keng zero hunting for the tetrablock kernel
    Lqk {
        #[command(subcommand)]
        action: LqkAction,
    },
}

#[derive(Subcommand)]
enum LqkAction {
    /// Roots of the axis-family polynomial with in-disc flags
    Roots {
        #[command(flatten)]
        common: Common,
    },
    /// Certified interior zero pair from the rescaling trick
    Pair {
        /// Rescaling parameter, 1/sqrt(3) < r < 1
        #[arg(long)]
        r: f64,
        /// Use the conjugate axis root -i/sqrt(3)
        #[arg(long)]
        conjugate: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Grid scan of a pair family for kernel zeros
    Scan {
        /// Cells per axis
        #[arg(long, default_value_t = 100)]
        grid: usize,
        /// Dip tolerance relative to the cell-local kernel scale
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// axis|axis-imag|diagonal
        #[arg(long, default_value = "axis-imag")]
        family: String,
        #[arg(long, default_value_t = 0.1)]
        u_min: f64,
        #[arg(long, default_value_t = 0.95)]
        u_max: f64,
        #[arg(long, default_value_t = 0.1)]
        v_min: f64,
        #[arg(long, default_value_t = 0.95)]
        v_max: f64,
        #[command(flatten)]
        common: Common,
    },
}

/// Fully resolved run configuration, echoed in every output header.
#[derive(Serialize, Clone)]
struct EffectiveConfig {
    command: String,
    samples: u64,
    seed: u64,
    threads: usize,
    format: &'static str,
    closure: bool,
    determinism: &'static str,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extra: Option<serde_json::Value>,
}

struct Resolved {
    seed: u64,
    threads: usize,
    tolerances: Tolerances,
}

enum UsageError {
    Message(String),
}

impl UsageError {
    fn new(msg: impl Into<String>) -> Self {
        UsageError::Message(msg.into())
    }
}

fn resolve_common(common: &Common) -> Result<Resolved, UsageError> {
    let seed = match common.seed {
        Some(s) => s,
        None => match std::env::var("BERGMAN_LAB_SEED") {
            Ok(raw) => raw.parse::<u64>().map_err(|_| {
                UsageError::new(format!("BERGMAN_LAB_SEED must be an unsigned integer, got `{raw}`"))
            })?,
            Err(_) => 0,
        },
    };
    let threads = common
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(UsageError::new("--threads must be at least 1"));
    }
    let mut tolerances = Tolerances::default();
    if let Some(v) = common.tol_sigma {
        tolerances.sigma = v;
    }
    if let Some(v) = common.tol_bell {
        tolerances.bell_rel = v;
    }
    if let Some(v) = common.tol_zero {
        tolerances.zero_residual = v;
    }
    if let Some(v) = common.tol_cross {
        tolerances.cross_residual = v;
    }
    if let Some(v) = common.tol_coeff {
        tolerances.coeff_abs = v;
    }
    if let Some(v) = common.tol_crit {
        tolerances.eps_crit = v;
    }
    Ok(Resolved { seed, threads, tolerances })
}

fn config_for(command: &str, common: &Common, resolved: &Resolved, closure: bool) -> EffectiveConfig {
    EffectiveConfig {
        command: command.to_string(),
        samples: common.samples,
        seed: resolved.seed,
        threads: resolved.threads,
        format: common.format.as_str(),
        closure,
        determinism: "bitwise per (seed, samples, threads)",
        tolerances: resolved.tolerances,
        domain: None,
        map: None,
        suite: None,
        extra: None,
    }
}

fn parse_point(raw: &str, flag: &str, dim: usize) -> Result<Vec<C>, UsageError> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(raw).map_err(|e| {
        UsageError::new(format!("{flag} expects JSON [[re,im],...]: {e}"))
    })?;
    if pairs.len() != dim {
        return Err(UsageError::new(format!(
            "{flag} expects {dim} coordinates, got {}",
            pairs.len()
        )));
    }
    Ok(pairs.iter().map(|[re, im]| C::new(*re, *im)).collect())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a EffectiveConfig,
    #[serde(flatten)]
    payload: T,
}

#[derive(Serialize)]
struct ResultPayload<T: Serialize> {
    result: T,
}

#[derive(Serialize)]
struct ReportPayload {
    report: VerifyReport,
}

#[derive(Serialize)]
struct VerifyReport {
    pass: bool,
    suites: Vec<SuiteReport>,
}

#[derive(Serialize)]
struct ErrorPayload {
    error: ErrorObject,
}

#[derive(Serialize)]
struct ErrorObject {
    kind: String,
    message: String,
}

fn print_json<T: Serialize>(config: &EffectiveConfig, payload: T) {
    let envelope = Envelope { config, payload };
    println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
}

fn print_csv_header(config: &EffectiveConfig) {
    println!("# config: {}", serde_json::to_string(config).expect("serializable"));
}

fn emit_error(config: &EffectiveConfig, format: Format, kind: &str, message: String) -> u8 {
    match format {
        Format::Json => print_json(
            config,
            ErrorPayload {
                error: ErrorObject { kind: kind.to_string(), message },
            },
        ),
        Format::Csv => {
            print_csv_header(config);
            println!("error_kind,message");
            println!("{kind},\"{message}\"");
        }
    }
    EXIT_FAILED
}

fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

/// Die quietly when a downstream pipe closes early (`... | head`), like
/// every other line-oriented unix tool.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError::Message(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!("run `bergman-lab --help` for the command grammar");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, UsageError> {
    match cli.command {
        Command::Kernel { domain, x, y, closure, common } => {
            kernel_command(&domain, &x, &y, closure, &common)
        }
        Command::Member { domain, point, common } => member_command(&domain, &point, &common),
        Command::Volume { domain, common } => volume_command(&domain, &common),
        Command::Op { map, apply, poly, common } => op_command(&map, &apply, &poly, &common),
        Command::Verify { suite, common } => verify_command(&suite, &common),
        Command::Falsifier { k, common } => falsifier_command(k, &common),
        Command::Lqk { action } => match action {
            LqkAction::Roots { common } => lqk_roots_command(&common),
            LqkAction::Pair { r, conjugate, common } => lqk_pair_command(r, conjugate, &common),
            LqkAction::Scan { grid, tol, family, u_min, u_max, v_min, v_max, common } => {
                lqk_scan_command(grid, tol, &family, (u_min, u_max), (v_min, v_max), &common)
            }
        },
    }
}

fn needs_volume(domain: DomainName) -> bool {
    matches!(domain, DomainName::RII | DomainName::Tetrablock)
}

fn kernel_volume(resolved: &Resolved, samples: u64) -> VolumeConstant {
    rii_volume_workers(samples.max(10_000), resolved.seed, resolved.threads)
        .expect("floored sample count")
}

#[derive(Serialize)]
struct KernelResult {
    value: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    volume: Option<VolumeConstant>,
}

fn kernel_command(
    domain: &str,
    x: &str,
    y: &str,
    closure: bool,
    common: &Common,
) -> Result<u8, UsageError> {
    let name = DomainName::from_str(domain).map_err(UsageError::Message)?;
    if name == DomainName::SymBidisc {
        return Err(UsageError::new(
            "no closed-form kernel is bundled for symbidisc; use `kernel --domain bidisc` with lifted points",
        ));
    }
    let resolved = resolve_common(common)?;
    let dim = DomainDescriptor::new(name).dimension;
    let xp = parse_point(x, "--x", dim)?;
    let yp = parse_point(y, "--y", dim)?;
    let mut config = config_for("kernel", common, &resolved, closure);
    config.domain = Some(name.to_string());

    let (kernel, volume) = if needs_volume(name) {
        let vol = kernel_volume(&resolved, common.samples);
        let k = match name {
            DomainName::RII => Kernel::rii(vol),
            _ => Kernel::tetrablock(vol),
        };
        (k.with_closure(closure), Some(vol))
    } else {
        let k = match name {
            DomainName::Disc => Kernel::Disc,
            DomainName::Bidisc => Kernel::Bidisc,
            _ => Kernel::Polydisc3,
        };
        (k, None)
    };
    match kernel.evaluate(&xp, &yp) {
        Ok(value) => {
            let result = KernelResult { value: [value.re, value.im], volume };
            match common.format {
                Format::Json => print_json(&config, ResultPayload { result }),
                Format::Csv => {
                    print_csv_header(&config);
                    println!("value_re,value_im");
                    println!("{},{}", fmt_f64(value.re), fmt_f64(value.im));
                }
            }
            Ok(EXIT_OK)
        }
        Err(err) => Ok(emit_error(&config, common.format, "kernel", err.to_string())),
    }
}

fn member_command(domain: &str, point: &str, common: &Common) -> Result<u8, UsageError> {
    let name = DomainName::from_str(domain).map_err(UsageError::Message)?;
    let resolved = resolve_common(common)?;
    let descriptor = DomainDescriptor::new(name);
    let p = parse_point(point, "--point", descriptor.dimension)?;
    let mut config = config_for("member", common, &resolved, false);
    config.domain = Some(name.to_string());
    let member = descriptor.is_member(&p).expect("dimension checked");
    #[derive(Serialize)]
    struct MemberResult {
        member: bool,
    }
    match common.format {
        Format::Json => print_json(&config, ResultPayload { result: MemberResult { member } }),
        Format::Csv => {
            print_csv_header(&config);
            println!("member");
            println!("{member}");
        }
    }
    Ok(EXIT_OK)
}

fn volume_command(domain: &str, common: &Common) -> Result<u8, UsageError> {
    let name = DomainName::from_str(domain).map_err(UsageError::Message)?;
    let resolved = resolve_common(common)?;
    let mut config = config_for("volume", common, &resolved, false);
    config.domain = Some(name.to_string());
    let descriptor = DomainDescriptor::new(name);
    let est = match mc_integrate(
        &descriptor,
        |_| C::new(1.0, 0.0),
        common.samples.max(1),
        resolved.seed,
        resolved.threads,
    ) {
        Ok(est) => est,
        Err(err) => return Ok(emit_error(&config, common.format, "volume", err.to_string())),
    };
    #[derive(Serialize)]
    struct VolumeResult {
        value: f64,
        stderr: f64,
        n: u64,
        seed: u64,
    }
    let result = VolumeResult { value: est.value.re, stderr: est.stderr, n: est.n, seed: est.seed };
    match common.format {
        Format::Json => print_json(&config, ResultPayload { result }),
        Format::Csv => {
            print_csv_header(&config);
            println!("value,stderr,n,seed");
            println!("{},{},{},{}", fmt_f64(est.value.re), fmt_f64(est.stderr), est.n, est.seed);
        }
    }
    Ok(EXIT_OK)
}

fn op_command(map: &str, apply: &str, poly: &str, common: &Common) -> Result<u8, UsageError> {
    let map_name = MapName::from_str(map).map_err(UsageError::Message)?;
    let resolved = resolve_common(common)?;
    let input: Poly3 = serde_json::from_str(poly).map_err(|e| {
        UsageError::new(format!("--poly expects JSON [{{\"exp\":[a,b,c],\"coef\":[re,im]}},...]: {e}"))
    })?;
    let mut config = config_for("op", common, &resolved, false);
    config.map = Some(map_name.to_string());
    config.extra = Some(serde_json::json!({ "apply": apply }));
    let bundle = ProperMap::from_name(map_name);
    let outcome = match apply {
        "gamma" => Ok(gamma_apply(&input, &bundle)),
        "gamma-star" => gamma_star_apply(&input, &bundle),
        "project" => Ok(project_generic(&input, &bundle)),
        "project-tetra" => {
            if map_name != MapName::Tetra {
                return Err(UsageError::new("--apply project-tetra requires --map tetra"));
            }
            Ok(project_tetra(&input))
        }
        other => {
            return Err(UsageError::new(format!(
                "unknown --apply `{other}` (expected gamma|gamma-star|project|project-tetra)"
            )))
        }
    };
    match outcome {
        Ok(result) => {
            #[derive(Serialize)]
            struct OpResult {
                poly: Poly3,
            }
            match common.format {
                Format::Json => print_json(&config, ResultPayload { result: OpResult { poly: result } }),
                Format::Csv => {
                    print_csv_header(&config);
                    println!("exp0,exp1,exp2,coef_re,coef_im");
                    for (exp, coeff) in result.terms() {
                        println!(
                            "{},{},{},{},{}",
                            exp[0],
                            exp[1],
                            exp[2],
                            fmt_f64(coeff.re),
                            fmt_f64(coeff.im)
                        );
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Err(err) => Ok(emit_error(&config, common.format, "not-in-range", err.to_string())),
    }
}

fn verify_command(suite: &str, common: &Common) -> Result<u8, UsageError> {
    let resolved = resolve_common(common)?;
    let mut config = config_for("verify", common, &resolved, false);
    config.suite = Some(suite.to_string());
    let vcfg = VerifyConfig {
        samples: common.samples,
        seed: resolved.seed,
        workers: resolved.threads,
        tolerances: resolved.tolerances,
    };
    let suites: Vec<SuiteReport> = if suite == "all" {
        verify_all(&vcfg)
    } else {
        let name = SuiteName::from_str(suite).map_err(UsageError::Message)?;
        vec![run_suite(name, &vcfg)]
    };
    let pass = suites.iter().all(|s| s.pass);
    match common.format {
        Format::Json => print_json(&config, ReportPayload { report: VerifyReport { pass, suites: suites.clone() } }),
        Format::Csv => {
            print_csv_header(&config);
            println!("suite,check,pass,measure,threshold,value_re,value_im,stderr");
            for suite_report in &suites {
                for check in &suite_report.checks {
                    let [vre, vim] = check.value.unwrap_or([f64::NAN, f64::NAN]);
                    println!(
                        "{},{},{},{},{},{},{},{}",
                        suite_report.suite,
                        check.name,
                        check.pass,
                        fmt_f64(check.measure),
                        fmt_f64(check.threshold),
                        if check.value.is_some() { fmt_f64(vre) } else { String::new() },
                        if check.value.is_some() { fmt_f64(vim) } else { String::new() },
                        check.stderr.map(fmt_f64).unwrap_or_default(),
                    );
                }
            }
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_FAILED })
}

fn falsifier_command(k: u32, common: &Common) -> Result<u8, UsageError> {
    let resolved = resolve_common(common)?;
    let mut config = config_for("falsifier", common, &resolved, false);
    config.extra = Some(serde_json::json!({ "k": k }));
    match bergman_core::maps::phik_isometry_falsifier(k) {
        Ok(witness) => {
            match common.format {
                Format::Json => print_json(&config, ResultPayload { result: &witness }),
                Format::Csv => {
                    print_csv_header(&config);
                    println!("k,zeta_re,zeta_im,norm_before,norm_after,gap");
                    println!(
                        "{},{},{},{},{},{}",
                        witness.k,
                        fmt_f64(witness.zeta[0]),
                        fmt_f64(witness.zeta[1]),
                        fmt_f64(witness.norm_before),
                        fmt_f64(witness.norm_after),
                        fmt_f64(witness.gap)
                    );
                }
            }
            Ok(EXIT_OK)
        }
        Err(err) => Ok(emit_error(&config, common.format, "falsifier", err.to_string())),
    }
}

fn lqk_roots_command(common: &Common) -> Result<u8, UsageError> {
    let resolved = resolve_common(common)?;
    let config = config_for("lqk-roots", common, &resolved, false);
    let roots = isolate_axis_roots();
    #[derive(Serialize)]
    struct RootsResult {
        polynomial: [f64; 5],
        roots: Vec<lqk::AxisRoot>,
    }
    match common.format {
        Format::Json => print_json(
            &config,
            ResultPayload {
                result: RootsResult { polynomial: lqk::axis_family_polynomial(), roots },
            },
        ),
        Format::Csv => {
            print_csv_header(&config);
            println!("root_re,root_im,in_disc,residual");
            for r in &roots {
                println!(
                    "{},{},{},{}",
                    fmt_f64(r.value[0]),
                    fmt_f64(r.value[1]),
                    r.in_disc,
                    fmt_f64(r.residual)
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn certificate_csv_row(cert: &ZeroCertificate) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt_f64(cert.params.0[0]),
        fmt_f64(cert.params.0[1]),
        fmt_f64(cert.params.1[0]),
        fmt_f64(cert.params.1[1]),
        fmt_f64(cert.kernel_value[0]),
        fmt_f64(cert.kernel_value[1]),
        fmt_f64(cert.relative_residual),
    )
}

fn lqk_pair_command(r: f64, conjugate: bool, common: &Common) -> Result<u8, UsageError> {
    let resolved = resolve_common(common)?;
    let mut config = config_for("lqk-pair", common, &resolved, false);
    config.extra = Some(serde_json::json!({ "r": r, "conjugate": conjugate }));
    let volume = kernel_volume(&resolved, common.samples);
    match lqk::interior_zero_pair_with_root(r, &volume, conjugate) {
        Ok(cert) => {
            match common.format {
                Format::Json => print_json(&config, ResultPayload { result: cert }),
                Format::Csv => {
                    print_csv_header(&config);
                    println!("u_re,u_im,v_re,v_im,k_re,k_im,residual");
                    println!("{}", certificate_csv_row(&cert));
                }
            }
            Ok(EXIT_OK)
        }
        Err(err) => Ok(emit_error(&config, common.format, "out-of-range", err.to_string())),
    }
}

fn lqk_scan_command(
    grid: usize,
    tol: f64,
    family: &str,
    u_range: (f64, f64),
    v_range: (f64, f64),
    common: &Common,
) -> Result<u8, UsageError> {
    let family = match family {
        "axis" => PairFamily::Axis,
        "axis-imag" => PairFamily::AxisImagSecond,
        "diagonal" => PairFamily::Diagonal,
        other => {
            return Err(UsageError::new(format!(
                "unknown --family `{other}` (expected axis|axis-imag|diagonal)"
            )))
        }
    };
    if grid == 0 {
        return Err(UsageError::new("--grid must be at least 1"));
    }
    let resolved = resolve_common(common)?;
    let mut config = config_for("lqk-scan", common, &resolved, false);
    config.extra = Some(serde_json::json!({
        "grid": grid,
        "tol": tol,
        "family": format!("{family:?}"),
        "u_range": [u_range.0, u_range.1],
        "v_range": [v_range.0, v_range.1],
    }));
    let volume = kernel_volume(&resolved, common.samples);
    let scan_grid = ScanGrid { u_range, v_range, nu: grid, nv: grid };
    let certs = grid_scan_zeros(family, scan_grid, tol, &volume);
    match common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct ScanResult {
                count: usize,
                certificates: Vec<ZeroCertificate>,
            }
            print_json(
                &config,
                ResultPayload { result: ScanResult { count: certs.len(), certificates: certs } },
            );
        }
        Format::Csv => {
            print_csv_header(&config);
            println!("u_re,u_im,v_re,v_im,k_re,k_im,residual");
            for cert in &certs {
                println!("{}", certificate_csv_row(cert));
            }
        }
    }
    Ok(EXIT_OK)
}

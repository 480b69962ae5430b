//! `zetax`: command-line driver for the extreme-value toolkit.
//!
//! Subcommands: rho, constants, psi, friable, scan-zeta, scan-l,
//! certificate, resonance-char. Parameters resolve with the precedence
//! command-line flag > `ZX_*` environment variable > `--config` key=value
//! file. Exit codes: 0 ok, 1 usage, 2 capacity, 3 domain.

mod output;
mod resolve;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use output::{fmt_f64, write_csv, write_json, Document};
use resolve::{Resolver, UsageError};
use serde::Serialize;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use zetax_core::characters::CharacterGroup;
use zetax_core::dickman::{DickmanTable, DEFAULT_STEP, DEFAULT_U_MAX};
use zetax_core::error::Error as CoreError;
use zetax_core::evaluators::friable_approx_report;
use zetax_core::resonance::{character_resonance, zeta_certificate, CertificateTarget};
use zetax_core::scan::{scan_l_max, scan_zeta_max, ScanConfig};

#[derive(Parser)]
#[command(
    name = "zetax",
    version,
    about = "Dickman tables, friable sums, zeta/L evaluators, resonance certificates, and extreme-value scans near the 1-line"
)]
struct Cli {
    /// key=value configuration file (lowest-precedence parameter source)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 or absent = all cores); results do not depend on this
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format [default: csv for rho/constants, json otherwise]
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// Output path (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl FromStr for OutFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("expected 'csv' or 'json', got '{other}'")),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the Dickman function rho(u) on its grid
    Rho {
        #[arg(long)]
        u_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Weighted Dickman moments: rows of Y_ell, C_ell(A), D_ell(A)
    Constants {
        #[arg(long)]
        ell_max: Option<u32>,
        /// Comma-separated weight values A
        #[arg(long)]
        a_list: Option<String>,
    },
    /// Count y-friable integers up to x
    Psi {
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
    },
    /// Compare a raw zeta sum against its friable approximation
    Friable {
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Scan [T, 2T] for the maximum of |zeta^(ell)(sigma + it)|
    ScanZeta {
        #[arg(long)]
        t_start: Option<f64>,
        /// Abscissa sigma; exactly one of --sigma / --a-param
        #[arg(long)]
        sigma: Option<f64>,
        /// Weight A with sigma = 1 - A/log log T
        #[arg(long)]
        a_param: Option<f64>,
        #[arg(long)]
        ell: Option<u32>,
        /// Series truncation length
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        grid_step: Option<f64>,
        #[arg(long)]
        refine_iters: Option<u32>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Maximize |L^(ell)(sigma, chi; N)| over non-principal characters mod q
    ScanL {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Emit a resonance lower-bound certificate for zeta derivatives
    Certificate {
        /// zeta-1line or zeta-subone
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        sigma: Option<f64>,
        /// Resonator override (both --y and --b, or neither)
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        b: Option<u32>,
    },
    /// Character-resonance certificate for L^(ell)(sigma, chi; N) mod q
    ResonanceChar {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        sigma: Option<f64>,
        /// Resonator length M (weights are all-ones on 1..=M)
        #[arg(long)]
        m: Option<u64>,
        /// Series truncation length N
        #[arg(long)]
        n: Option<u64>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure {
            code: 1,
            message: e.0,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::InvalidArgument(_) | CoreError::Io(_) => 1,
            CoreError::Capacity(_) => 2,
            CoreError::Domain(_) | CoreError::Range(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: format!("i/o error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

const GLOBAL_KEYS: &[&str] = &["threads", "format", "out"];

fn command_keys(cmd: &Cmd) -> Vec<&'static str> {
    let mut keys: Vec<&'static str> = GLOBAL_KEYS.to_vec();
    keys.extend(match cmd {
        Cmd::Rho { .. } => vec!["u-max", "step"],
        Cmd::Constants { .. } => vec!["ell-max", "a-list"],
        Cmd::Psi { .. } => vec!["x", "y"],
        Cmd::Friable { .. } => vec!["x", "y", "t"],
        Cmd::ScanZeta { .. } => vec![
            "t-start",
            "sigma",
            "a-param",
            "ell",
            "n",
            "grid-step",
            "refine-iters",
            "epsilon",
        ],
        Cmd::ScanL { .. } => vec!["q", "ell", "sigma", "n"],
        Cmd::Certificate { .. } => vec!["target", "t", "ell", "sigma", "y", "b"],
        Cmd::ResonanceChar { .. } => vec!["q", "ell", "sigma", "m", "n"],
    });
    keys
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config_path = cli
        .config
        .or_else(|| std::env::var("ZX_CONFIG").ok().map(PathBuf::from));
    let resolver = Resolver::new(config_path.as_deref(), &command_keys(&cli.command))?;

    let threads = resolver.get(cli.threads, "threads")?.unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure {
                code: 1,
                message: format!("cannot configure thread pool: {e}"),
            })?;
    }

    let default_format = match cli.command {
        Cmd::Rho { .. } | Cmd::Constants { .. } => OutFormat::Csv,
        _ => OutFormat::Json,
    };
    let format = resolver
        .get(cli.format, "format")?
        .unwrap_or(default_format);

    // Argument validation happens before compute, and so does the
    // writable check on the output path.
    let out_path: Option<PathBuf> = resolver.get(cli.out, "out")?;
    let mut sink: Box<dyn Write> = match &out_path {
        Some(path) => Box::new(File::create(path).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })?),
        None => Box::new(std::io::stdout().lock()),
    };

    match &cli.command {
        Cmd::Rho { u_max, step } => cmd_rho(&resolver, *u_max, *step, format, &mut sink),
        Cmd::Constants { ell_max, a_list } => {
            cmd_constants(&resolver, *ell_max, a_list.clone(), format, &mut sink)
        }
        Cmd::Psi { x, y } => cmd_psi(&resolver, *x, *y, format, &mut sink),
        Cmd::Friable { x, y, t } => cmd_friable(&resolver, *x, *y, *t, format, &mut sink),
        Cmd::ScanZeta {
            t_start,
            sigma,
            a_param,
            ell,
            n,
            grid_step,
            refine_iters,
            epsilon,
        } => cmd_scan_zeta(
            &resolver,
            ScanZetaArgs {
                t_start: *t_start,
                sigma: *sigma,
                a_param: *a_param,
                ell: *ell,
                n: *n,
                grid_step: *grid_step,
                refine_iters: *refine_iters,
                epsilon: *epsilon,
            },
            format,
            &mut sink,
        ),
        Cmd::ScanL { q, ell, sigma, n } => {
            cmd_scan_l(&resolver, *q, *ell, *sigma, *n, format, &mut sink)
        }
        Cmd::Certificate {
            target,
            t,
            ell,
            sigma,
            y,
            b,
        } => cmd_certificate(
            &resolver,
            target.clone(),
            *t,
            *ell,
            *sigma,
            *y,
            *b,
            format,
            &mut sink,
        ),
        Cmd::ResonanceChar {
            q,
            ell,
            sigma,
            m,
            n,
        } => cmd_resonance_char(&resolver, *q, *ell, *sigma, *m, *n, format, &mut sink),
    }
}

#[derive(Serialize)]
struct RhoRow {
    u: f64,
    rho: f64,
    log_rho: f64,
}

#[derive(Serialize)]
struct RhoResult {
    u_max: f64,
    step: f64,
    rows: Vec<RhoRow>,
}

fn cmd_rho(
    resolver: &Resolver,
    u_max: Option<f64>,
    step: Option<f64>,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let u_max = resolver.get(u_max, "u-max")?.unwrap_or(DEFAULT_U_MAX);
    let step = resolver.get(step, "step")?.unwrap_or(DEFAULT_STEP);
    let table = DickmanTable::build(u_max, step)?;
    let h = table.step();
    let count = (u_max / h).floor() as usize;
    let mut rows = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let u = i as f64 * h;
        let log_rho = table.log_rho(u)?;
        rows.push(RhoRow {
            u,
            rho: log_rho.exp(),
            log_rho,
        });
    }
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "rho",
                result: RhoResult {
                    u_max,
                    step: h,
                    rows,
                },
            },
            sink,
        )?,
        OutFormat::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![fmt_f64(r.u), fmt_f64(r.rho), fmt_f64(r.log_rho)])
                .collect();
            write_csv(&["u", "rho", "log_rho"], &rows, sink)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstantsRow {
    ell: u32,
    a: f64,
    /// Y_ell: unweighted moment.
    y: f64,
    /// C_ell(A): weight e^{2Au}.
    c: f64,
    /// D_ell(A): weight e^{Au}.
    d: f64,
}

fn cmd_constants(
    resolver: &Resolver,
    ell_max: Option<u32>,
    a_list: Option<String>,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let ell_max = resolver.get(ell_max, "ell-max")?.unwrap_or(3);
    let raw = resolver
        .get(a_list, "a-list")?
        .unwrap_or_else(|| "0,0.5,1".to_string());
    let mut weights = Vec::new();
    for part in raw.split(',') {
        let a: f64 = part
            .trim()
            .parse()
            .map_err(|e| UsageError(format!("--a-list entry '{part}': {e}")))?;
        weights.push(a);
    }
    let table = DickmanTable::with_defaults()?;
    let mut rows = Vec::new();
    for ell in 0..=ell_max {
        let y = table.weighted_moment(ell, 0.0)?.value;
        for &a in &weights {
            let c = table.weighted_moment(ell, 2.0 * a)?.value;
            let d = table.weighted_moment(ell, a)?.value;
            rows.push(ConstantsRow { ell, a, y, c, d });
        }
    }
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "constants",
                result: rows,
            },
            sink,
        )?,
        OutFormat::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.ell.to_string(),
                        fmt_f64(r.a),
                        fmt_f64(r.y),
                        fmt_f64(r.c),
                        fmt_f64(r.d),
                    ]
                })
                .collect();
            write_csv(&["ell", "a", "y", "c", "d"], &rows, sink)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PsiResult {
    x: f64,
    y: f64,
    psi: u64,
}

fn cmd_psi(
    resolver: &Resolver,
    x: Option<f64>,
    y: Option<f64>,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let x = resolver.require(x, "x")?;
    let y = resolver.require(y, "y")?;
    let psi = zetax_core::arith::psi_count(x, y)?;
    let result = PsiResult { x, y, psi };
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "psi",
                result,
            },
            sink,
        )?,
        OutFormat::Csv => write_csv(
            &["x", "y", "psi"],
            &[vec![fmt_f64(x), fmt_f64(y), psi.to_string()]],
            sink,
        )?,
    }
    Ok(())
}

fn cmd_friable(
    resolver: &Resolver,
    x: Option<f64>,
    y: Option<f64>,
    t: Option<f64>,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let x = resolver.require(x, "x")?;
    let y = resolver.require(y, "y")?;
    let t = resolver.require(t, "t")?;
    let report = friable_approx_report(x, y, t)?;
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "friable",
                result: &report,
            },
            sink,
        )?,
        OutFormat::Csv => write_csv(
            &[
                "x",
                "y",
                "t",
                "zeta_sum_re",
                "zeta_sum_im",
                "psi_weighted_re",
                "psi_weighted_im",
                "psi_count",
                "abs_difference",
                "normalized_discrepancy",
            ],
            &[vec![
                fmt_f64(report.x),
                fmt_f64(report.y),
                fmt_f64(report.t),
                fmt_f64(report.zeta_sum.re),
                fmt_f64(report.zeta_sum.im),
                fmt_f64(report.psi_weighted.re),
                fmt_f64(report.psi_weighted.im),
                report.psi_count.to_string(),
                fmt_f64(report.abs_difference),
                fmt_f64(report.normalized_discrepancy),
            ]],
            sink,
        )?,
    }
    Ok(())
}

struct ScanZetaArgs {
    t_start: Option<f64>,
    sigma: Option<f64>,
    a_param: Option<f64>,
    ell: Option<u32>,
    n: Option<u64>,
    grid_step: Option<f64>,
    refine_iters: Option<u32>,
    epsilon: Option<f64>,
}

fn cmd_scan_zeta(
    resolver: &Resolver,
    args: ScanZetaArgs,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let t_start = resolver.require(args.t_start, "t-start")?;
    let sigma_flag: Option<f64> = resolver.get(args.sigma, "sigma")?;
    let a_flag: Option<f64> = resolver.get(args.a_param, "a-param")?;
    let sigma = match (sigma_flag, a_flag) {
        (Some(s), None) => s,
        (None, Some(a)) => ScanConfig::sigma_from_weight(t_start, a)?,
        (Some(_), Some(_)) => {
            return Err(UsageError("--sigma and --a-param are mutually exclusive".into()).into())
        }
        (None, None) => {
            return Err(UsageError("one of --sigma / --a-param is required".into()).into())
        }
    };
    let ell = resolver.get(args.ell, "ell")?.unwrap_or(0);
    let n = resolver.require(args.n, "n")?;
    let grid_step: Option<f64> = resolver.get(args.grid_step, "grid-step")?;
    let refine_iters = resolver
        .get(args.refine_iters, "refine-iters")?
        .unwrap_or(40);
    let epsilon = resolver.get(args.epsilon, "epsilon")?.unwrap_or(0.25);
    let cfg = ScanConfig::new(t_start, sigma, ell, n, grid_step, refine_iters, epsilon)?;
    let table = DickmanTable::with_defaults()?;
    let result = scan_zeta_max(&cfg, &table)?;
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "scan-zeta",
                result: &result,
            },
            sink,
        )?,
        OutFormat::Csv => write_csv(
            &[
                "t_start",
                "sigma",
                "ell",
                "n",
                "grid_step",
                "t_star",
                "value",
                "normalized_ratio",
                "envelope_upper",
                "envelope_omega",
                "envelope_subone",
                "grid_points",
            ],
            &[vec![
                fmt_f64(result.t_start),
                fmt_f64(result.sigma),
                result.ell.to_string(),
                result.n.to_string(),
                fmt_f64(result.grid_step),
                fmt_f64(result.t_star),
                fmt_f64(result.value),
                fmt_f64(result.normalized_ratio),
                fmt_f64(result.envelope_upper),
                fmt_f64(result.envelope_omega),
                result.envelope_subone.map(fmt_f64).unwrap_or_default(),
                result.grid_points.to_string(),
            ]],
            sink,
        )?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanLResult {
    q: u64,
    ell: u32,
    sigma: f64,
    n: u64,
    chi_index: usize,
    value: f64,
}

fn cmd_scan_l(
    resolver: &Resolver,
    q: Option<u64>,
    ell: Option<u32>,
    sigma: Option<f64>,
    n: Option<u64>,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let q = resolver.require(q, "q")?;
    let ell = resolver.get(ell, "ell")?.unwrap_or(0);
    let sigma = resolver.require(sigma, "sigma")?;
    let n = resolver.require(n, "n")?;
    let group = CharacterGroup::build(q)?;
    let (chi_index, value) = scan_l_max(&group, ell, sigma, n)?;
    let result = ScanLResult {
        q,
        ell,
        sigma,
        n,
        chi_index,
        value,
    };
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "scan-l",
                result,
            },
            sink,
        )?,
        OutFormat::Csv => write_csv(
            &["q", "ell", "sigma", "n", "chi_index", "value"],
            &[vec![
                q.to_string(),
                ell.to_string(),
                fmt_f64(sigma),
                n.to_string(),
                chi_index.to_string(),
                fmt_f64(value),
            ]],
            sink,
        )?,
    }
    Ok(())
}

fn certificate_csv(
    report: &zetax_core::resonance::CertificateReport,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let p = &report.parameters;
    let target = match report.target {
        CertificateTarget::ZetaOneLine => "zeta-1line",
        CertificateTarget::ZetaSubOne => "zeta-subone",
        CertificateTarget::LChar => "L-char",
    };
    let validity = report
        .validity
        .iter()
        .map(|f| format!("{}={}", f.name, f.satisfied))
        .collect::<Vec<_>>()
        .join("|");
    let error_terms = report
        .error_terms
        .iter()
        .map(|e| {
            format!(
                "{}={}",
                e.description.replace(',', ";"),
                fmt_f64(e.magnitude)
            )
        })
        .collect::<Vec<_>>()
        .join("|");
    let mut header = vec![
        "target",
        "t",
        "q",
        "ell",
        "sigma",
        "y",
        "b",
        "m",
        "n",
        "certificate_value",
        "predicted_envelope",
        "valid",
        "validity",
        "error_terms",
    ];
    let mut row = vec![
        target.to_string(),
        p.t_lo.map(fmt_f64).unwrap_or_default(),
        p.q.map(|q| q.to_string()).unwrap_or_default(),
        p.ell.to_string(),
        fmt_f64(p.sigma),
        p.y.map(fmt_f64).unwrap_or_default(),
        p.b.map(|b| b.to_string()).unwrap_or_default(),
        p.m.map(|m| m.to_string()).unwrap_or_default(),
        p.n.map(|n| n.to_string()).unwrap_or_default(),
        fmt_f64(report.certificate_value),
        report.predicted_envelope.map(fmt_f64).unwrap_or_default(),
        report.is_valid().to_string(),
        validity,
        error_terms,
    ];
    if let Some(c) = &report.character {
        header.extend([
            "v1",
            "v2_re",
            "v2_im",
            "ratio",
            "max_abs_l",
            "max_index",
            "identity_residual",
        ]);
        row.extend([
            fmt_f64(c.v1),
            fmt_f64(c.v2.re),
            fmt_f64(c.v2.im),
            fmt_f64(c.ratio),
            fmt_f64(c.max_abs_l),
            c.max_index.to_string(),
            fmt_f64(c.identity_residual),
        ]);
    }
    write_csv(&header, &[row], sink)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_certificate(
    resolver: &Resolver,
    target: Option<String>,
    t: Option<f64>,
    ell: Option<u32>,
    sigma: Option<f64>,
    y: Option<f64>,
    b: Option<u32>,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let target_raw: String = resolver.require(target, "target")?;
    let target = match target_raw.as_str() {
        "zeta-1line" => CertificateTarget::ZetaOneLine,
        "zeta-subone" => CertificateTarget::ZetaSubOne,
        other => {
            return Err(UsageError(format!(
                "unknown certificate target '{other}' (expected zeta-1line or zeta-subone)"
            ))
            .into())
        }
    };
    let t = resolver.require(t, "t")?;
    let ell = resolver.get(ell, "ell")?.unwrap_or(0);
    let sigma = resolver.require(sigma, "sigma")?;
    let y: Option<f64> = resolver.get(y, "y")?;
    let b: Option<u32> = resolver.get(b, "b")?;
    let override_params = match (y, b) {
        (Some(y), Some(b)) => Some((y, b)),
        (None, None) => None,
        _ => return Err(UsageError("resonator override needs both --y and --b".into()).into()),
    };
    let table = DickmanTable::with_defaults()?;
    let report = zeta_certificate(&table, t, ell, sigma, override_params, Some(target))?;
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "certificate",
                result: &report,
            },
            sink,
        )?,
        OutFormat::Csv => certificate_csv(&report, sink)?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_resonance_char(
    resolver: &Resolver,
    q: Option<u64>,
    ell: Option<u32>,
    sigma: Option<f64>,
    m: Option<u64>,
    n: Option<u64>,
    format: OutFormat,
    sink: &mut dyn Write,
) -> Result<(), Failure> {
    let q = resolver.require(q, "q")?;
    let ell = resolver.get(ell, "ell")?.unwrap_or(0);
    let sigma = resolver.require(sigma, "sigma")?;
    let qf = q as f64;
    let m = resolver
        .get(m, "m")?
        .unwrap_or_else(|| qf.powf(0.25).floor() as u64 + 1);
    let n = resolver
        .get(n, "n")?
        .unwrap_or_else(|| qf.powf(0.75).floor() as u64);
    if m == 0 {
        return Err(UsageError("--m must be positive".into()).into());
    }
    let group = CharacterGroup::build(q)?;
    let table = DickmanTable::with_defaults()?;
    let weights = vec![1.0; m as usize];
    let report = character_resonance(&table, &group, ell, sigma, &weights, n)?;
    match format {
        OutFormat::Json => write_json(
            &Document {
                schema_version: 1,
                command: "resonance-char",
                result: &report,
            },
            sink,
        )?,
        OutFormat::Csv => certificate_csv(&report, sink)?,
    }
    Ok(())
}

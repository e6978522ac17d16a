//! Command-line front end: generation, subsequences, limit series, identity
//! reports, zeros, clustering bounds and zero plots.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stern_core::binseq::{limit_series, subseq_index, BitSpec};
use stern_core::special::{run_identity, IdentityFamily};
use stern_core::zeros::{
    eight_angle_grid, find_roots_with, verify_prop1_with, BoundReport, RootOptions, RootSet, DEFAULT_TOLERANCE, RHO_GRID,
};
use stern_core::{par, stern_poly, Error, Execution, SparsePoly};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "stern", version, about = "Stern polynomials a(n;z): exact generation, identities and zeros")]
pub struct Cli {
    /// Working precision in bits for root polishing.
    #[arg(long, global = true, env = "STERN_PRECISION", default_value_t = 128)]
    pub precision: usize,

    /// Run batches on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a(n;z) for one index or an inclusive range `a..b`.
    Gen {
        n: Option<u64>,
        #[arg(long, value_parser = parse_range, conflicts_with = "n")]
        range: Option<(u64, u64)>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a(2^(m+1) n + sum 2^j b_j; z) for each m in an inclusive range.
    Seq {
        #[arg(long)]
        bits: String,
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_m_range)]
        m: (i64, i64),
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the limit series of a binary sequence below q^order.
    Series {
        #[arg(long)]
        bits: String,
        #[arg(long)]
        order: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check one identity family and report its residuals.
    Identities {
        #[arg(value_parser = parse_family)]
        family: IdentityFamily,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        order: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find all zeros of a(n;z).
    Zeros {
        n: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the sector and annulus clustering bounds.
    Bounds(BoundsArgs),
    /// Write one SVG zero plot per m for the subsequence of a binary sequence.
    Plot {
        #[arg(long)]
        bits: String,
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_m_range)]
        m: (i64, i64),
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Comma-separated indices.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// Comma-separated rho values; defaults to 0.1,0.25,0.5,0.75.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<f64>,
    /// Sector `t1:t2` in radians, repeatable; defaults to every pair of k pi/4.
    #[arg(long, value_parser = parse_sector)]
    pub sector: Vec<(f64, f64)>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_m_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let a: i64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a < -1 || a > b {
        return Err(format!("need -1 <= a <= b, got {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_family(s: &str) -> Result<IdentityFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sector(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected t1:t2")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

/// Everything that ends a run early, with its exit status.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Core(e) => e.kind(),
            Failure::Io(_) => "io",
            Failure::Usage(_) => "usage",
        }
    }

    pub fn code(&self) -> u8 {
        match self.kind() {
            "usage" => 2,
            "overflow" => 3,
            "domain" => 4,
            "non_convergence" => 5,
            "contour" => 6,
            "invariant_violation" => 7,
            "parse" => 8,
            _ => 9,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
        }
    }

    /// One tab-separated line for stderr.
    pub fn record(&self) -> String {
        let msg: String = self.message().chars().map(|c| if c == '\t' || c == '\n' { ' ' } else { c }).collect();
        format!("error\tkind={}\tcode={}\tmessage={}", self.kind(), self.code(), msg.trim())
    }
}

/// What a successful run produced: the text for stdout and whether every
/// requested check passed.
pub struct Outcome {
    pub stdout: String,
    pub pass: bool,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            let f = Failure::Usage(first);
            eprintln!("{}", f.record());
            return ExitCode::from(f.code());
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(out.stdout.as_bytes()) {
                let f = Failure::from(e);
                eprintln!("{}", f.record());
                return ExitCode::from(f.code());
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("{}", f.record());
            ExitCode::from(f.code())
        }
    }
}

fn execution(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn root_options(cli: &Cli, tolerance: f64) -> RootOptions {
    RootOptions { precision: cli.precision, tolerance, execution: execution(cli), ..RootOptions::default() }
}

/// JSON with keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json's Map is ordered by key unless `preserve_order` is enabled
    let v = serde_json::to_value(value).expect("serializable value");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable value");
    s.push('\n');
    s
}

fn only(format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("format {format:?} is not available for this command")))
    }
}

#[derive(Serialize)]
struct Indexed {
    index: u64,
    poly: SparsePoly,
}

#[derive(Serialize)]
struct SeqRow {
    m: i64,
    index: u64,
    poly: SparsePoly,
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let exec = execution(cli);
    let ok = |stdout: String| Ok(Outcome { stdout, pass: true });
    match &cli.command {
        Command::Gen { n, range, format } => {
            only(*format, &[Format::Text, Format::Json])?;
            let (lo, hi, single) = match (n, range) {
                (Some(n), None) => (*n, *n, true),
                (None, Some((a, b))) => (*a, *b, false),
                _ => return Err(Failure::Usage("gen needs an index or --range".into())),
            };
            let idx: Vec<u64> = (lo..=hi).collect();
            let polys = par::map(exec, &idx, |&k| stern_poly(k));
            let mut s = String::new();
            match format {
                Format::Json if single => s = to_sorted_json(&polys[0]),
                Format::Json => {
                    let rows: Vec<Indexed> = idx.iter().zip(polys).map(|(&index, poly)| Indexed { index, poly }).collect();
                    s = to_sorted_json(&rows);
                }
                _ if single => writeln!(s, "{}", polys[0].to_string_with("z")).unwrap(),
                _ => {
                    for (k, p) in idx.iter().zip(&polys) {
                        writeln!(s, "{k}\t{}", p.to_string_with("z")).unwrap();
                    }
                }
            }
            ok(s)
        }
        Command::Seq { bits, n, m, format } => {
            only(*format, &[Format::Text, Format::Json])?;
            let bits: &BitSpec = &bits.parse()?;
            let ms: Vec<i64> = (m.0..=m.1).collect();
            let idx = ms.iter().map(|&k| subseq_index(k, *n, bits)).collect::<Result<Vec<_>, _>>()?;
            let polys = par::map(exec, &idx, |&k| stern_poly(k));
            let rows: Vec<SeqRow> = ms.iter().zip(&idx).zip(polys).map(|((&m, &index), poly)| SeqRow { m, index, poly }).collect();
            if *format == Format::Json {
                return ok(to_sorted_json(&rows));
            }
            let mut s = String::new();
            for r in &rows {
                writeln!(s, "{}\t{}", r.m, r.poly.to_string_with("z")).unwrap();
            }
            ok(s)
        }
        Command::Series { bits, order, format } => {
            only(*format, &[Format::Text, Format::Json])?;
            let bits: &BitSpec = &bits.parse()?;
            if *order == 0 {
                return Err(Error::Domain("order must be at least 1".into()).into());
            }
            let f = limit_series(bits, *order)?;
            if *format == Format::Json {
                return ok(to_sorted_json(&f));
            }
            ok(format!("{} + O(q^{order})\n", f.to_string_with("q")))
        }
        Command::Identities { family, n, m, order, format } => {
            only(*format, &[Format::Text, Format::Json])?;
            let report = run_identity(*family, *n, *m, *order)?;
            let pass = report.pass;
            let stdout = if *format == Format::Json {
                to_sorted_json(&report)
            } else {
                let params: Vec<String> = report.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let mut s = format!("{}\t{}\t{}\n", report.identity, params.join(","), if pass { "pass" } else { "FAIL" });
                for (i, r) in report.residuals.iter().enumerate() {
                    writeln!(s, "residual {i}\t{}", r.to_string_with("q")).unwrap();
                }
                s
            };
            Ok(Outcome { stdout, pass })
        }
        Command::Zeros { n, tolerance, format, out } => {
            only(*format, &[Format::Text, Format::Json, Format::Csv])?;
            let rs = find_roots_with(&stern_poly(*n), &root_options(cli, *tolerance))?;
            let body = match format {
                Format::Csv => rs.to_csv(),
                Format::Json => to_sorted_json(&rs),
                _ => roots_text(&rs),
            };
            match out {
                Some(path) => {
                    std::fs::write(path, body)?;
                    ok(format!("{} roots written to {}\n", rs.roots.len(), path.display()))
                }
                None => ok(body),
            }
        }
        Command::Bounds(args) => {
            only(args.format, &[Format::Text, Format::Json])?;
            let rho = if args.rho.is_empty() { RHO_GRID.to_vec() } else { args.rho.clone() };
            let sectors = if args.sector.is_empty() { eight_angle_grid() } else { args.sector.clone() };
            let opts = root_options(cli, DEFAULT_TOLERANCE);
            let mut reports: Vec<BoundReport> = Vec::new();
            for &n in &args.n {
                reports.extend(verify_prop1_with(n, &rho, &sectors, &opts)?);
            }
            let pass = reports.iter().all(|r| r.pass.sector && r.pass.annulus);
            let stdout = if args.format == Format::Json {
                to_sorted_json(&reports)
            } else {
                let mut s = String::from("n\trho\ttheta1\ttheta2\tsector_discrepancy\tet_bound\tannulus_deficit\thn_bound\tpass\n");
                for r in &reports {
                    writeln!(
                        s,
                        "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}",
                        r.n,
                        r.rho,
                        r.theta1,
                        r.theta2,
                        r.sector_discrepancy,
                        r.et_bound,
                        r.annulus_deficit,
                        r.hn_bound,
                        r.pass.sector && r.pass.annulus
                    )
                    .unwrap();
                }
                s
            };
            Ok(Outcome { stdout, pass })
        }
        Command::Plot { bits, n, m, out } => {
            let bits: &BitSpec = &bits.parse()?;
            std::fs::create_dir_all(out)?;
            let mut s = String::from("m\tindex\tzeros\tfile\n");
            for k in m.0..=m.1 {
                let idx = subseq_index(k, *n, bits)?;
                let p = stern_poly(idx);
                let rs = if p.degree().unwrap_or(0) == 0 {
                    RootSet { roots: Vec::new(), source_degree: 0, precision_bits: cli.precision }
                } else {
                    find_roots_with(&p, &root_options(cli, DEFAULT_TOLERANCE))?
                };
                let path = out.join(format!("zeros_m{k}.svg"));
                write_file(&path, &svg(&rs, idx, k))?;
                writeln!(s, "{k}\t{idx}\t{}\t{}", rs.total_multiplicity(), path.display()).unwrap();
            }
            ok(s)
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn roots_text(rs: &RootSet) -> String {
    let mut s = String::new();
    for r in &rs.roots {
        writeln!(s, "{:e}\t{:e}\t{}\t{:e}", r.value.re, r.value.im, r.multiplicity, r.residual).unwrap();
    }
    s
}

/// Scatter of the zeros on a fixed 600 x 600 canvas, unit circle at radius 250.
pub fn svg(rs: &RootSet, index: u64, m: i64) -> String {
    let count = rs.total_multiplicity();
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(s, "<!-- stern-cli {VERSION} -->").unwrap();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n");
    writeln!(s, "<title>zeros of a({index};z), m = {m}: {count} zeros</title>").unwrap();
    s.push_str("<rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\"/>\n");
    s.push_str("<line x1=\"0\" y1=\"300\" x2=\"600\" y2=\"300\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n");
    s.push_str("<line x1=\"300\" y1=\"0\" x2=\"300\" y2=\"600\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n");
    s.push_str("<circle cx=\"300\" cy=\"300\" r=\"250\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n");
    writeln!(s, "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">m = {m}, {count} zeros</text>").unwrap();
    s.push_str("<g fill=\"black\">\n");
    for r in &rs.roots {
        let x = 300.0 + 250.0 * r.value.re;
        let y = 300.0 - 250.0 * r.value.im;
        writeln!(s, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"1.5\"/>").unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}

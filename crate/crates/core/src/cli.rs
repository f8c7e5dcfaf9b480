//! Command-line front end. Data goes to stdout or `--out`, diagnostics and
//! progress to stderr.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O or
//! malformed input file.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze, parse_metrics, AnalysisOptions, Metric, MetricsReport};
use crate::lut::{read_lut, write_atomic, write_lut, LutError, LutFormat, LUT_ENTRIES};
use crate::netlist::blocks::{assess, Assessment, Policy};
use crate::netlist::{build_block, BlockId};
use crate::sbox::{builtin, proposed_inverse_table, proposed_table, SboxTable};
use crate::verify::{self, Fixtures, VerifyOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tower-sbox",
    version,
    about = "16-bit tower-field S-box: generation, verification, analysis, netlists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Suppress progress output on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the S-box (or its inverse) as a lookup table.
    Gen(GenArgs),
    /// Run the exhaustive correctness suite.
    Verify(VerifyArgs),
    /// Compute cryptographic metrics for a builtin table or LUT file.
    Analyze(AnalyzeArgs),
    /// Build catalog netlists and compare gate counts with published figures.
    Netlist(NetlistArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Bin,
    Csv,
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, short, default_value = "sbox.bin")]
    pub out: PathBuf,
    /// bin or csv; defaults from the file extension.
    #[arg(long, short)]
    pub format: Option<Format>,
    /// Shorthand for --format csv.
    #[arg(long, conflicts_with = "format")]
    pub csv: bool,
    /// Write the inverse S-box instead.
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Replacement normal-to-tower matrix fixture.
    #[arg(long)]
    pub m_nt: Option<PathBuf>,
    /// Replacement tower-to-normal matrix fixture.
    #[arg(long)]
    pub m_tn: Option<PathBuf>,
    /// Replacement affine matrix M.
    #[arg(long)]
    pub affine_m: Option<PathBuf>,
    /// Replacement inverse affine matrix N.
    #[arg(long)]
    pub affine_n: Option<PathBuf>,
    #[arg(long, default_value_t = crate::convert::DEFAULT_SEED)]
    pub seed: u64,
    /// Skip the netlist simulation check.
    #[arg(long)]
    pub no_netlists: bool,
    /// text or json.
    #[arg(long, short, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Builtin name (proposed, proposed_inv, identity, gold16_K, kasami16_K)
    /// or path to a LUT file.
    pub source: String,
    /// Comma-separated metrics: nl, du, ad, to, snr, fp, cycles, all.
    #[arg(long, short)]
    pub metrics: Option<String>,
    #[arg(long)]
    pub nl: bool,
    #[arg(long)]
    pub du: bool,
    #[arg(long)]
    pub ad: bool,
    #[arg(long)]
    pub to: bool,
    #[arg(long)]
    pub snr: bool,
    #[arg(long)]
    pub fp: bool,
    #[arg(long)]
    pub cycles: bool,
    #[arg(long)]
    pub all: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, short, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// json or csv.
    #[arg(long, short, default_value = "json")]
    pub format: Format,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Include per-metric wall times (makes the report non-reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct NetlistArgs {
    /// Block id or `all`.
    #[arg(required_unless_present = "block")]
    pub target: Option<String>,
    #[arg(long, conflicts_with = "target")]
    pub block: Option<String>,
    /// Dump file for one block, directory for `all`.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// text or json (census only).
    #[arg(long, short, default_value = "text")]
    pub format: Format,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn io(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: m.into(),
        }
    }
}

type CmdResult = Result<u8, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let quiet = cli.quiet;
    let result = {
        // progress goes straight to the process stderr so worker threads
        // can report without sharing `err`
        let progress = |m: &str| {
            if !quiet {
                eprintln!("{m}");
            }
        };
        match cli.command {
            Command::Gen(a) => cmd_gen(&a, out, &progress),
            Command::Verify(a) => cmd_verify(&a, out, &progress),
            Command::Analyze(a) => cmd_analyze(&a, out, &progress),
            Command::Netlist(a) => cmd_netlist(&a, out),
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn check_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => Err(CliError::io(format!(
            "{}: directory does not exist",
            p.display()
        ))),
        _ => Ok(()),
    }
}

fn write_out(path: &Path, data: &[u8]) -> Result<(), CliError> {
    write_atomic(path, data).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write, progress: &(dyn Fn(&str) + Sync)) -> CmdResult {
    let format = match (a.csv, a.format) {
        (true, _) | (false, Some(Format::Csv)) => LutFormat::Csv,
        (false, Some(Format::Bin)) => LutFormat::Bin,
        (false, None) => LutFormat::from_path(&a.out),
        (false, Some(f)) => {
            return Err(CliError::usage(format!("gen writes bin or csv, not {f:?}")))
        }
    };
    check_parent(&a.out)?;
    progress("gen: building table");
    let fwd = proposed_table();
    let inv = proposed_inverse_table();
    // refuse to write anything that is not a verified permutation pair
    let composes = (0..LUT_ENTRIES).all(|x| inv.get(fwd.get(x) as usize) as usize == x);
    if !fwd.is_bijective() || !inv.is_bijective() || !composes {
        return Err(CliError {
            code: EXIT_MISMATCH,
            message: "internal verification failed; nothing written".into(),
        });
    }
    let table = if a.inverse { &inv } else { &fwd };
    write_lut(table, &a.out, format)
        .map_err(|e| CliError::io(format!("{}: {e}", a.out.display())))?;
    let bytes = std::fs::metadata(&a.out).map(|m| m.len()).unwrap_or(0);
    let _ = writeln!(
        out,
        "wrote {} ({bytes} bytes, {})",
        a.out.display(),
        if format == LutFormat::Csv {
            "csv"
        } else {
            "bin"
        }
    );
    let _ = writeln!(out, "table: {}", table.name());
    let _ = writeln!(
        out,
        "bijective: {}",
        if table.is_bijective() { "yes" } else { "no" }
    );
    let _ = writeln!(out, "sha256: {}", table.sha256_hex());
    Ok(EXIT_OK)
}

fn read_fixture(path: &Option<PathBuf>, default: &str) -> Result<String, CliError> {
    match path {
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| CliError::io(format!("{}: {e}", p.display())))
        }
        None => Ok(default.to_string()),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, progress: &(dyn Fn(&str) + Sync)) -> CmdResult {
    if !matches!(a.format, Format::Text | Format::Json) {
        return Err(CliError::usage("verify prints text or json"));
    }
    let d = Fixtures::default();
    let fixtures = Fixtures {
        m_nt: read_fixture(&a.m_nt, &d.m_nt)?,
        m_tn: read_fixture(&a.m_tn, &d.m_tn)?,
        affine_m: read_fixture(&a.affine_m, &d.affine_m)?,
        affine_n: read_fixture(&a.affine_n, &d.affine_n)?,
    };
    let opts = VerifyOptions {
        fixtures,
        seed: a.seed,
        netlists: !a.no_netlists,
        ..Default::default()
    };
    let checks = verify::run(&opts, Some(progress));
    let ok = checks.iter().all(|c| c.passed);
    if a.format == Format::Json {
        let s = serde_json::to_string_pretty(&checks).expect("checks serialize");
        let _ = writeln!(out, "{s}");
    } else {
        for c in &checks {
            let _ = writeln!(out, "{}", c.line());
        }
        let passed = checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
    }
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

/// A builtin name or an existing LUT file.
pub fn load_source(source: &str) -> Result<SboxTable, CliError> {
    let path = Path::new(source);
    if path.is_file() {
        return read_lut(path).map_err(|e| match e {
            LutError::Io { .. } => CliError::io(e.to_string()),
            other => CliError::io(format!("{source}: {other}")),
        });
    }
    builtin(source).map_err(|e| CliError::usage(format!("{e}; no file named {source:?} either")))
}

fn cmd_analyze(
    a: &AnalyzeArgs,
    out: &mut dyn Write,
    progress: &(dyn Fn(&str) + Sync),
) -> CmdResult {
    if !matches!(a.format, Format::Json | Format::Csv) {
        return Err(CliError::usage("analyze writes json or csv"));
    }
    let mut metrics = match &a.metrics {
        Some(spec) => parse_metrics(spec).map_err(|e| CliError::usage(e.to_string()))?,
        None => Default::default(),
    };
    let flags = [
        (a.nl, Metric::Nl),
        (a.du, Metric::Du),
        (a.ad, Metric::Ad),
        (a.to, Metric::To),
        (a.snr, Metric::Snr),
        (a.fp, Metric::Fp),
        (a.cycles, Metric::Cycles),
    ];
    metrics.extend(flags.iter().filter(|(on, _)| *on).map(|&(_, m)| m));
    if a.all || metrics.is_empty() {
        metrics.extend(Metric::ALL);
    }
    if let Some(p) = &a.out {
        check_parent(p)?;
    }
    let table = load_source(&a.source)?;
    let mut opts = AnalysisOptions {
        metrics,
        record_timings: a.timings,
        ..Default::default()
    };
    if let Some(w) = a.workers {
        opts.workers = w as usize;
    }
    let report =
        analyze(&table, &opts, Some(progress)).map_err(|e| CliError::usage(e.to_string()))?;
    let text = match a.format {
        Format::Csv => format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.to_csv_row()),
        _ => report.to_json(),
    };
    match &a.out {
        Some(p) => write_out(p, text.as_bytes())?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(EXIT_OK)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or("-".into(), |x| x.to_string())
}

fn signed(v: Option<i64>) -> String {
    v.map_or("-".into(), |d| format!("{d:+}"))
}

fn policy_name(p: Policy) -> String {
    match p {
        Policy::Exact => "exact".into(),
        Policy::WithinPercent(n) => format!("±{n}%"),
        Policy::AtMost(n) => format!("≤{n}"),
        Policy::Informational => "report".into(),
    }
}

pub const CENSUS_HEADER: &str =
    "block        XOR NAND/NOR NOT CPD                       | target XOR NAND/NOR NOT CPD                      | ΔXOR ΔNAND/NOR ΔNOT CPD= | policy status";

/// One census table row with targets and signed deltas.
pub fn census_row(a: &Assessment) -> String {
    let t = &a.target;
    let status = match a.within_policy {
        Some(true) => "ok",
        Some(false) => "outside",
        None => "-",
    };
    let cpd_eq = match a.cpd_matches {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    };
    format!(
        "{:<12} {:>3} {:>8} {:>3} {:<25} | {:>9} {:>8} {:>3} {:<25} | {:>4} {:>9} {:>4} {:<4} | {:<6} {status}",
        a.block,
        a.census.xor_pooled(),
        a.census.nand_nor(),
        a.census.not,
        a.cpd.to_string(),
        opt(t.xor),
        opt(t.nand_nor),
        opt(t.not),
        opt(t.cpd.map(|c| c.to_string())),
        signed(a.xor_delta),
        signed(a.nand_nor_delta),
        signed(a.not_delta),
        cpd_eq,
        policy_name(t.policy),
    )
}

/// Builds, simulates exhaustively and assesses one block.
fn build_checked(id: BlockId) -> Result<(crate::netlist::Netlist, Assessment), CliError> {
    let n = build_block(id);
    let tt = n
        .truth_table()
        .map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(x) = (0..tt.len()).find(|&x| tt[x] as u32 != id.reference(x as u32)) {
        return Err(CliError {
            code: EXIT_MISMATCH,
            message: format!("{id} netlist differs from its function at {x:#x}"),
        });
    }
    let a = assess(id, &n);
    Ok((n, a))
}

fn cmd_netlist(a: &NetlistArgs, out: &mut dyn Write) -> CmdResult {
    if !matches!(a.format, Format::Text | Format::Json) {
        return Err(CliError::usage("netlist prints text or json"));
    }
    let target = a
        .target
        .as_deref()
        .or(a.block.as_deref())
        .expect("clap requires one");
    let ids: Vec<BlockId> = if target.eq_ignore_ascii_case("all") {
        BlockId::ALL.to_vec()
    } else {
        vec![target
            .parse()
            .map_err(|e: crate::netlist::UnknownBlock| CliError::usage(e.to_string()))?]
    };
    let all = ids.len() > 1;
    if let Some(p) = &a.out {
        if all && !p.is_dir() {
            return Err(CliError::io(format!("{}: not a directory", p.display())));
        }
        if !all {
            check_parent(p)?;
        }
    }
    let mut rows = Vec::new();
    for id in ids {
        let (n, assessment) = build_checked(id)?;
        match (&a.out, all) {
            (Some(dir), true) => write_out(
                &dir.join(format!("{}.txt", id.ascii_name())),
                n.dump().as_bytes(),
            )?,
            (Some(file), false) => write_out(file, n.dump().as_bytes())?,
            (None, false) if a.format == Format::Text => {
                let _ = out.write_all(n.dump().as_bytes());
                let _ = writeln!(out);
            }
            _ => {}
        }
        rows.push(assessment);
    }
    if a.format == Format::Json {
        let s = serde_json::to_string_pretty(&rows).expect("assessments serialize");
        let _ = writeln!(out, "{s}");
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "{CENSUS_HEADER}");
        for r in &rows {
            let _ = writeln!(s, "{}", census_row(r));
        }
        let _ = out.write_all(s.as_bytes());
    }
    Ok(EXIT_OK)
}

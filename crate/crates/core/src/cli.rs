//! `spreadcode` command-line frontend.
//!
//! Exit codes: 0 success / Minimal, 1 NotMinimal (or a failed verify-paper
//! row), 2 invalid input, 3 Inconclusive, 4 checkers contradict each other.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::{matrix_to_text, DefiningSet};
use crate::error::{Error, Result};
use crate::field::{make_field, Elem};
use crate::minimality::{
    ab_bound, check_bruteforce, check_geometric, MinimalityReport, Verdict, BRUTEFORCE_LIMIT,
};
use crate::spread::{
    companion_quadruple, desarguesian_spread, eb_family, random_partial_spread, PartialSpread,
};
use crate::suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_MINIMAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_CONTRADICTION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "spreadcode",
    version,
    about = "Linear codes from partial spreads and their minimality"
)]
pub struct Cli {
    /// Worker threads for the parallel checks (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and validate a partial spread.
    Spread(SpreadArgs),
    /// Build the defining set of a code from a spread.
    Code(CodeArgs),
    /// Decide whether a code is minimal.
    Check(CheckArgs),
    /// Print the weight distribution of a code.
    Weights(WeightsArgs),
    /// Run the reproduction matrix.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Desarguesian,
    Eb,
    #[value(alias = "companion")]
    Thm34,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Geometric,
    Bruteforce,
    Ab,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Number of members (desarguesian prefix or random target).
    #[arg(long)]
    pub s: Option<usize>,
    /// Comma-separated element codes for the eb family.
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<u32>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SpreadArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Spread JSON (`-` for stdin). Without it the spread is built from the family flags.
    #[arg(long = "in", conflicts_with_all = ["p", "k", "family"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `table` prints the generator matrix.
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Code or spread JSON (`-` for stdin).
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Geometric)]
    pub method: MethodArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated row ids (default: all).
    #[arg(long, value_delimiter = ',')]
    pub rows: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return EXIT_INVALID;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_INVALID;
        }
        // Fails only if the global pool already exists; output does not depend on it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Spread(a) => cmd_spread(a),
        Command::Code(a) => cmd_code(a),
        Command::Check(a) => cmd_check(a),
        Command::Weights(a) => cmd_weights(a),
        Command::VerifyPaper(a) => cmd_verify_paper(a),
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("{}: {e}", path.display()))
}

fn read_json(path: &std::path::Path) -> Result<Value> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| io_error(path, e))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    }
    Ok(serde_json::from_str(&text)?)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_error(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::InvalidParameter(format!("stdout: {e}")))
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn vec_codes(v: &[Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.code().to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Builds the spread selected by the family flags.
pub fn build_spread(a: &FamilyArgs) -> Result<PartialSpread> {
    let missing = |flag: &str| Error::InvalidParameter(format!("--{flag} is required"));
    let p = a.p.ok_or_else(|| missing("p"))?;
    let k = a.k.ok_or_else(|| missing("k"))?;
    let family = a.family.ok_or_else(|| missing("family"))?;
    let field = make_field(p, a.e)?;
    if a.subset.is_some() && family != FamilyArg::Eb {
        return Err(Error::InvalidParameter(
            "--subset only applies to --family eb".into(),
        ));
    }
    match family {
        FamilyArg::Desarguesian => {
            let full = desarguesian_spread(&field, k)?;
            match a.s {
                None => Ok(full),
                Some(s) => full.subfamily(&(0..s).collect::<Vec<_>>()),
            }
        }
        FamilyArg::Eb => {
            let subset = match &a.subset {
                Some(codes) => codes
                    .iter()
                    .map(|&c| field.elem(c))
                    .collect::<Result<Vec<_>>>()?,
                None => field.elements().collect(),
            };
            if a.s.is_some_and(|s| s != subset.len()) {
                return Err(Error::InvalidParameter(
                    "--s disagrees with --subset".into(),
                ));
            }
            eb_family(&field, k, &subset)
        }
        FamilyArg::Thm34 => {
            if a.s.is_some_and(|s| s != 4) {
                return Err(Error::InvalidParameter(
                    "the companion family has exactly 4 members".into(),
                ));
            }
            companion_quadruple(&field, k)
        }
        FamilyArg::Random => {
            let s = a.s.ok_or_else(|| missing("s"))?;
            random_partial_spread(&field, k, s, a.seed)
        }
    }
}

fn spread_table(sp: &PartialSpread) -> String {
    let f = sp.field();
    let mut out = format!(
        "field q={} (p={}, e={}, modulus {:?})  k={}  m={}  s={}\n",
        f.q(),
        f.p(),
        f.e(),
        f.modulus(),
        sp.k(),
        sp.m(),
        sp.len()
    );
    for (i, u) in sp.members().iter().enumerate() {
        let rows: Vec<String> = u.basis().iter().map(|r| vec_codes(r)).collect();
        out.push_str(&format!("E{i}: {}\n", rows.join(" ")));
    }
    out
}

fn cmd_spread(a: SpreadArgs) -> Result<i32> {
    let sp = build_spread(&a.family)?;
    let text = match a.format {
        Format::Json => pretty(&sp.to_json()),
        Format::Table => spread_table(&sp),
    };
    emit(a.out.as_ref(), &text)?;
    Ok(EXIT_OK)
}

/// Reads a code JSON, or a spread JSON (recognised by its `members` key).
pub fn load_code(value: Value) -> Result<DefiningSet> {
    if value.get("members").is_some() {
        Ok(DefiningSet::from_spread(&PartialSpread::from_json(value)?))
    } else {
        DefiningSet::from_json(value)
    }
}

fn cmd_code(a: CodeArgs) -> Result<i32> {
    let spread = match &a.input {
        Some(path) => PartialSpread::from_json(read_json(path)?)?,
        None => build_spread(&a.family)?,
    };
    let d = DefiningSet::from_spread(&spread);
    let text = match a.format {
        Format::Json => pretty(&d.to_json()),
        Format::Table => matrix_to_text(&d.generator_matrix()),
    };
    emit(a.out.as_ref(), &text)?;
    Ok(EXIT_OK)
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Minimal => EXIT_OK,
        Verdict::NotMinimal => EXIT_NOT_MINIMAL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn report_table(r: &MinimalityReport) -> String {
    let opt = |v: &Option<Vec<Elem>>| v.as_deref().map(vec_codes).unwrap_or_else(|| "-".into());
    let dim = |v: Option<usize>| v.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
    format!(
        "method       {}\nverdict      {}\nwitness      {}\ncertificate  {}\nchecked      {}\nmin_vdim     {}\nmax_vdim     {}\n",
        r.method,
        r.verdict,
        opt(&r.witness),
        opt(&r.certificate),
        r.stats.checked,
        dim(r.stats.min_vdim),
        dim(r.stats.max_vdim),
    )
}

fn guard_ok(d: &DefiningSet) -> bool {
    (d.field().q() as u64)
        .checked_pow(d.m() as u32)
        .is_some_and(|n| n <= BRUTEFORCE_LIMIT)
}

fn cmd_check(a: CheckArgs) -> Result<i32> {
    let d = load_code(read_json(&a.input)?)?;
    d.require_full_rank()?;
    let single = |r: MinimalityReport| -> Result<i32> {
        let text = match a.format {
            Format::Json => pretty(&serde_json::to_value(&r)?),
            Format::Table => report_table(&r),
        };
        emit(a.out.as_ref(), &text)?;
        Ok(verdict_exit(r.verdict))
    };
    match a.method {
        MethodArg::Geometric => single(check_geometric(&d)?),
        MethodArg::Bruteforce => single(check_bruteforce(&d)?),
        MethodArg::Ab => single(ab_bound(&d.weight_distribution()?, d.field())?),
        MethodArg::All => {
            let mut reports = vec![
                ab_bound(&d.weight_distribution()?, d.field())?,
                check_geometric(&d)?,
            ];
            if guard_ok(&d) {
                reports.push(check_bruteforce(&d)?);
            } else {
                eprintln!("note: bruteforce skipped, q^m exceeds {BRUTEFORCE_LIMIT}");
            }
            let geometric = reports[1].verdict;
            let contradiction = reports.iter().find(|r| {
                !r.replay(&d)
                    || match r.verdict {
                        Verdict::Inconclusive => false,
                        v => v != geometric,
                    }
            });
            if let Some(r) = contradiction {
                eprintln!(
                    "error: {} reports {} but geometric reports {geometric}",
                    r.method, r.verdict
                );
            }
            let text = match a.format {
                Format::Json => pretty(&json!({
                    "verdict": geometric,
                    "consistent": contradiction.is_none(),
                    "reports": reports,
                })),
                Format::Table => reports
                    .iter()
                    .map(report_table)
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(a.out.as_ref(), &text)?;
            Ok(if contradiction.is_some() {
                EXIT_CONTRADICTION
            } else {
                verdict_exit(geometric)
            })
        }
    }
}

fn cmd_weights(a: WeightsArgs) -> Result<i32> {
    let d = load_code(read_json(&a.input)?)?;
    let w = d.weight_distribution()?;
    let text = match a.format {
        Format::Json => serde_json::to_string(&w)?,
        Format::Table => w
            .pairs()
            .iter()
            .map(|(w, c)| format!("{w:>8} {c:>12}\n"))
            .collect(),
    };
    emit(a.out.as_ref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_verify_paper(a: VerifyArgs) -> Result<i32> {
    let results = suite::run(&a.rows)?;
    let all_pass = results.iter().all(|r| r.passed);
    let text = match a.format {
        Format::Json => pretty(&json!({ "passed": all_pass, "rows": results })),
        Format::Table => suite::format_table(&results),
    };
    emit(a.out.as_ref(), &text)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_NOT_MINIMAL })
}

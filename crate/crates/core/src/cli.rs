//! Command-line interface: `info`, `ramify`, `verify` and `census`.
//!
//! Exit codes: 0 success, 1 suite failure, 2 input error, 3 resource limit,
//! 4 invalid subgroup specification.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cohomology::{inflation_check, unramified_subspace};
use crate::coset::{todd_coxeter, SubgroupSpec, DEFAULT_MAX_COSETS};
use crate::error::{Error, Result};
use crate::harness::{build_census, build_census_cached, run_suites, CensusOptions};
use crate::parse::{parse_knot_input, parse_word, ParseOptions};
use crate::perm::Perm;
use crate::presentation::KnotGroupData;
use crate::ramification::{Cover, RamificationReport};

pub const MAX_COSETS_ENV: &str = "RAMIKIT_MAX_COSETS";

#[derive(Parser, Debug)]
#[command(
    name = "ramikit",
    version,
    about = "Meridional inertia and ramification in finite-index subgroups of knot groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a knot group; print its invariants.
    Info(InfoArgs),
    /// Inertia, unramified quotient and H¹ comparison for one subgroup.
    Ramify(RamifyArgs),
    /// Build a census of covers and quotients and run every check over it.
    Verify(VerifyArgs),
    /// One row of invariants per cover in the census.
    Census(CensusArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Presentation or PD-code file (`-` for stdin).
    pub input: String,
    /// Treat INPUT as the presentation text itself.
    #[arg(long)]
    pub inline: bool,
    /// Reject input that fails the knot-group checks.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InfoArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Shorthand for `--format json`.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Exactly one of `--cyclic`, `--perm`, `--gens`.
#[derive(Args, Debug)]
pub struct SpecArgs {
    /// Kernel of G -> Z/n.
    #[arg(long, value_name = "N")]
    pub cyclic: Option<usize>,
    /// Point stabilizer of a permutation action, e.g. "a=(1 2);b=(2 3)".
    #[arg(long, value_name = "IMAGES")]
    pub perm: Option<String>,
    /// Point stabilized by `--perm` (1-based).
    #[arg(long, default_value_t = 1)]
    pub point: usize,
    /// Subgroup generated by comma-separated words, e.g. "a^2,aB".
    #[arg(long, value_name = "WORDS")]
    pub gens: Option<String>,
}

#[derive(Args, Debug)]
pub struct RamifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Primes for the H¹ comparison.
    #[arg(short = 'p', long = "primes", value_delimiter = ',', default_values_t = [2u64, 3, 5, 7])]
    pub primes: Vec<u64>,
    /// Coset limit (default from RAMIKIT_MAX_COSETS, else 1000000).
    #[arg(long)]
    pub max_cosets: Option<usize>,
    /// Also write the subgroup presentation (with `embed:` lines) here.
    #[arg(long)]
    pub subgroup_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 3)]
    pub max_index: usize,
    #[arg(long, default_value_t = 4)]
    pub max_sym: usize,
    #[arg(short = 'p', long = "primes", value_delimiter = ',', default_values_t = [2u64, 3, 5, 7])]
    pub primes: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reuse census data cached here, keyed by a hash of the input.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 3)]
    pub max_index: usize,
    #[arg(short = 'p', long = "primes", value_delimiter = ',', default_values_t = [2u64, 3, 5, 7])]
    pub primes: Vec<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CosetLimitExceeded(_) => 3,
        Error::InvalidSpec(_)
        | Error::IncompatiblePermRep(_)
        | Error::NotPrime(_)
        | Error::NotInSubgroup(_)
        | Error::RelatorNotKilled(_)
        | Error::NotNormal
        | Error::NotContainedInU
        | Error::NotIsomorphism(_)
        | Error::MeridianClassNotPreserved => 4,
        _ => 2,
    }
}

/// Runs the CLI on `args` (including the program name), writing errors and
/// warnings to stderr. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Info(a) => cmd_info(a),
        Command::Ramify(a) => cmd_ramify(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Census(a) => cmd_census(a),
    }
}

fn load(input: &InputArgs) -> Result<KnotGroupData> {
    let (text, label) = if input.inline {
        (input.input.clone(), "inline".to_string())
    } else if input.input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        (s, "stdin".to_string())
    } else {
        let path = Path::new(&input.input);
        let label = path
            .file_stem()
            .map_or_else(|| input.input.clone(), |s| s.to_string_lossy().into_owned());
        (std::fs::read_to_string(path)?, label)
    };
    let data = parse_knot_input(&text, ParseOptions { strict: input.strict })?;
    for w in &data.warnings {
        eprintln!("warning: {w}");
    }
    Ok(data.with_label(label))
}

fn emit(output: &OutputArgs, content: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn info_json(k: &KnotGroupData) -> Value {
    let p = &k.presentation;
    let v = k.validate();
    json!({
        "label": k.label,
        "generators": p.generator_names(),
        "relators": p.relators().iter().map(|r| p.format_word(r)).collect::<Vec<_>>(),
        "meridian": p.format_word(&k.meridian),
        "longitude": k.longitude.as_ref().map(|l| p.format_word(l)),
        "invariants": v.abelianization,
        "abelianization": v.abelianization.to_string(),
        "validation": {
            "abelianization_is_z": v.abelianization_is_z,
            "meridian_generates": v.meridian_generates,
            "longitude_null_homologous": v.longitude_null_homologous,
            "pass": v.all_pass(),
        },
        "warnings": k.warnings,
    })
}

pub fn cmd_info(a: &InfoArgs) -> Result<i32> {
    let k = load(&a.input)?;
    let format = if a.json {
        Format::Json
    } else {
        a.output.format.unwrap_or(Format::Text)
    };
    let out = match format {
        Format::Json => pretty(&info_json(&k)),
        Format::Csv => {
            let v = k.validate();
            format!(
                "label,generators,relators,abelianization,meridian_generates\n{},{},{},{},{}\n",
                k.label,
                k.presentation.n_gens(),
                k.presentation.relators().len(),
                v.abelianization,
                v.meridian_generates
            )
        }
        Format::Text => {
            let p = &k.presentation;
            let v = k.validate();
            let mut s = format!("knot: {}\n{}", k.label, p.to_file_string());
            s.push_str(&format!("meridian: {}\n", p.format_word(&k.meridian)));
            if let Some(l) = &k.longitude {
                s.push_str(&format!("longitude: {}\n", p.format_word(l)));
            }
            s.push_str(&format!(
                "abelianization: {}; meridian: {}\n",
                v.abelianization,
                if v.meridian_generates {
                    "generates"
                } else {
                    "does not generate"
                }
            ));
            s.push_str(&format!("checks: {v}\n"));
            s
        }
    };
    emit(&a.output, &out)?;
    Ok(0)
}

/// `--perm "a=(1 2);b=(2 3)"`; unmentioned generators act trivially.
pub fn parse_perm_spec(text: &str, k: &KnotGroupData, point: usize) -> Result<SubgroupSpec> {
    let names = k.presentation.generator_names();
    let degree = Perm::max_point_in(text).max(point).max(1);
    let mut perms = vec![Perm::identity(degree); names.len()];
    let mut assigned = vec![false; names.len()];
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, cycles) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("expected 'name=(cycles)' in '{part}'")))?;
        let name = name.trim();
        let g = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown generator '{name}'")))?;
        if std::mem::replace(&mut assigned[g], true) {
            return Err(Error::InvalidSpec(format!("generator '{name}' given twice")));
        }
        perms[g] = Perm::parse_cycles(cycles, degree)?;
    }
    Ok(SubgroupSpec::PermRep { perms, point })
}

fn subgroup_spec(s: &SpecArgs, k: &KnotGroupData) -> Result<SubgroupSpec> {
    let given = [s.cyclic.is_some(), s.perm.is_some(), s.gens.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::InvalidSpec(
            "give exactly one of --cyclic, --perm, --gens".into(),
        ));
    }
    if let Some(n) = s.cyclic {
        return Ok(SubgroupSpec::CyclicCover(n));
    }
    if let Some(p) = &s.perm {
        return parse_perm_spec(p, k, s.point);
    }
    let text = s.gens.as_deref().unwrap_or("");
    let words = text
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| parse_word(w, k.presentation.generator_names()).map_err(|e| Error::InvalidSpec(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubgroupSpec::GeneratorWords(words))
}

/// Flag, then environment, then the built-in default.
pub fn resolve_max_cosets(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(MAX_COSETS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("{MAX_COSETS_ENV}='{v}' is not a number"))),
        Err(_) => Ok(DEFAULT_MAX_COSETS),
    }
}

/// Builds the cover for a subgroup spec. Cyclic covers are normalized by the
/// meridian.
pub fn build_cover(k: &KnotGroupData, spec: &SubgroupSpec, max_cosets: usize) -> Result<Cover> {
    let table = match spec {
        SubgroupSpec::CyclicCover(n) => {
            if *n > max_cosets {
                return Err(Error::CosetLimitExceeded(max_cosets));
            }
            crate::coset::cyclic_cover_from_degrees(&k.degree_map()?, *n)?
        }
        _ => todd_coxeter(&k.presentation, spec, max_cosets)?,
    };
    Ok(Cover::new(k, table))
}

pub fn cmd_ramify(a: &RamifyArgs) -> Result<i32> {
    let k = load(&a.input)?;
    let spec = subgroup_spec(&a.spec, &k)?;
    for &p in &a.primes {
        crate::linalg::check_prime(p)?;
    }
    let cover = build_cover(&k, &spec, resolve_max_cosets(a.max_cosets)?)?;
    let report = cover.report(&k);
    if k.longitude.is_none() {
        eprintln!("warning: no longitude given; boundary tori not computed");
    }
    let checks = a
        .primes
        .iter()
        .map(|&p| inflation_check(&cover.subgroup, &cover.quotient, &cover.inertia, p))
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &a.subgroup_out {
        std::fs::write(path, cover.subgroup.to_file_string(k.presentation.generator_names()))?;
    }
    let all_pass = checks.iter().all(|c| c.passed());
    let out = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "knot": k.label,
            "report": report,
            "cohomology": checks,
            "coset_table": cover.table.to_json(k.presentation.generator_names()),
        })),
        Format::Csv => format!("{}\n{}\n", RamificationReport::CSV_HEADER, report.csv_row(&k.label)),
        Format::Text => {
            let mut s = format!("knot: {}\n{}", k.label, report.to_text());
            for c in &checks {
                s.push_str(&format!("{c}\n"));
            }
            s.push_str(crate::cohomology::PROFINITE_NOTE);
            s.push('\n');
            s
        }
    };
    emit(&a.output, &out)?;
    Ok(if all_pass { 0 } else { 1 })
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let k = load(&a.input)?;
    let opts = CensusOptions::new(a.max_index, a.max_sym);
    let census = match &a.cache_dir {
        Some(dir) => build_census_cached(&k, &opts, dir)?,
        None => build_census(&k, &opts)?,
    };
    for w in &census.warnings {
        eprintln!("warning: {w}");
    }
    let report = run_suites(&census, &a.primes, a.seed)?;
    let out = match a.output.format.unwrap_or(Format::Json) {
        Format::Json | Format::Csv => report.to_json_string(),
        Format::Text => report.to_text(),
    };
    emit(&a.output, &out)?;
    Ok(if report.passed() { 0 } else { 1 })
}

pub fn cmd_census(a: &CensusArgs) -> Result<i32> {
    let k = load(&a.input)?;
    for &p in &a.primes {
        crate::linalg::check_prime(p)?;
    }
    if k.longitude.is_none() {
        eprintln!("warning: no longitude given; boundary_tori column left empty");
    }
    let tables = crate::harness::census_tables(&k, a.max_index)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for t in tables {
        let cover = Cover::new(&k, t);
        let report = cover.report(&k);
        let dims = a
            .primes
            .iter()
            .map(|&p| unramified_subspace(&cover.subgroup, &cover.inertia, p).map(|s| s.dim()))
            .collect::<Result<Vec<_>>>()?;
        let mut row = report.csv_row(&k.label);
        for d in &dims {
            row.push_str(&format!(",{d}"));
        }
        rows.push(row);
        let unram: serde_json::Map<String, Value> = a
            .primes
            .iter()
            .zip(&dims)
            .map(|(p, d)| (p.to_string(), json!(d)))
            .collect();
        json_rows.push(json!({"report": report, "unramified_h1_dims": unram}));
    }
    let out = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Text => {
            let mut s = RamificationReport::CSV_HEADER.to_string();
            for p in &a.primes {
                s.push_str(&format!(",h1_unramified_p{p}"));
            }
            s.push('\n');
            for r in rows {
                s.push_str(&r);
                s.push('\n');
            }
            s
        }
        Format::Json => pretty(&json!({"knot": k.label, "covers": json_rows})),
    };
    emit(&a.output, &out)?;
    Ok(0)
}

//! `tau`: command-line front end for the τ engine.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tau_core::brieskorn::{
    enumerate_su3, moduli_from_enumeration, regress, seifert_presentation, KeyedOracle, SignOracle, SolverConfig,
    UniformPositive,
};
use tau_core::composition::{connected_sum_reducible, correction_additivity_check, orientation_reverse, tau_connected_sum};
use tau_core::moves::random_walk;
use tau_core::{summarize, validate, Error, ModuliData};

const EXIT_INVALID: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "tau", version, about = "Integer-valued SU(3) Casson invariant engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a moduli file against every data constraint.
    Validate { file: PathBuf },
    /// Print λ′, τ″, τ, λ″, λ_SU(3) and λ_SU(2).
    Invariants {
        file: PathBuf,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Compose reducible data of a connected sum and evaluate τ of the sum.
    Sum {
        first: PathBuf,
        second: PathBuf,
        /// Write the composed reducible data here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reverse orientation.
    Reverse {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply random perturbation moves and compare invariants.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(required_unless_present = "input", conflicts_with = "input")]
        file: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the final snapshot here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate flat SU(3) representations of a Brieskorn sphere.
    Enumerate {
        /// Seifert invariants, e.g. 2,3,7.
        #[arg(long, value_parser = int_list::<3>)]
        seifert: [i64; 3],
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON object mapping cluster keys to SF(θ,·).
        #[arg(long)]
        sign_oracle: Option<PathBuf>,
        /// Moduli data output.
        #[arg(long)]
        out: PathBuf,
        /// Census report output (stdout when absent).
        #[arg(long)]
        census: Option<PathBuf>,
    },
    /// Compare enumerated τ with the tabulated values for a family Σ(2,P,·).
    Regress {
        /// Family, as 2,P.
        #[arg(long, value_parser = int_list::<2>)]
        family: [i64; 2],
        #[arg(long, default_value_t = 1)]
        k_max: i64,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `N` comma-separated integers.
fn int_list<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|v: Vec<i64>| format!("expected {N} comma-separated integers, got {}", v.len()))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Solver(_) => EXIT_SOLVER,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ModuliData, Failure> {
    ModuliData::from_json_str(&read(path)?).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn load_valid(path: &Path) -> Result<ModuliData, Failure> {
    let m = load(path)?;
    let report = validate(&m);
    if !report.is_valid() {
        return Err(Failure::new(EXIT_INVALID, format!("{}: invalid moduli data\n{report}", path.display())));
    }
    Ok(m)
}

/// Writes via a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let fail = |e: std::io::Error| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn cmd_validate(file: &Path) -> CmdResult {
    let m = load(file)?;
    let report = validate(&m);
    if !report.is_valid() {
        return Err(Failure::new(EXIT_INVALID, format!("{}: invalid\n{report}", file.display())));
    }
    let mut out = format!("{}: valid\n", file.display());
    for w in &report.warnings {
        writeln!(out, "  warning: {w}").unwrap();
    }
    Ok(out)
}

fn cmd_invariants(file: &Path, json: bool) -> CmdResult {
    let s = summarize(&load_valid(file)?)?;
    if json {
        let v = serde_json::json!({
            "lambda_prime": s.lambda_prime,
            "tau_correction": s.tau_correction,
            "tau": s.tau,
            "lambda_double_prime": s.lambda_double_prime,
            "lambda_su3": s.lambda_su3,
            "lambda_su2": s.lambda_su2,
            "alpha_weighted": s.alpha_weighted,
            "warnings": s.warnings,
        });
        return Ok(serde_json::to_string_pretty(&v).unwrap() + "\n");
    }
    let mut out = String::new();
    writeln!(out, "lambda_prime        = {}", s.lambda_prime).unwrap();
    writeln!(out, "tau_correction      = {}", s.tau_correction).unwrap();
    writeln!(out, "tau                 = {}", s.tau).unwrap();
    writeln!(out, "lambda_double_prime = {}", s.lambda_double_prime).unwrap();
    writeln!(out, "lambda_su3          = {}", s.lambda_su3).unwrap();
    writeln!(out, "lambda_su2          = {}", s.lambda_su2).unwrap();
    for w in &s.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    Ok(out)
}

fn cmd_sum(first: &Path, second: &Path, out_path: Option<&Path>) -> CmdResult {
    let (m1, m2) = (load_valid(first)?, load_valid(second)?);
    let composed = connected_sum_reducible(&m1, &m2)?;
    let (s1, s2, sc) = (summarize(&m1)?, summarize(&m2)?, summarize(&composed)?);
    let additive = correction_additivity_check(&m1, &m2)?;
    let mut out = String::new();
    writeln!(out, "tau(X1) = {}, lambda_su2(X1) = {}", s1.tau, s1.lambda_su2).unwrap();
    writeln!(out, "tau(X2) = {}, lambda_su2(X2) = {}", s2.tau, s2.lambda_su2).unwrap();
    writeln!(
        out,
        "tau(X1 # X2) = {}",
        tau_connected_sum(s1.tau, s2.tau, s1.lambda_su2, s2.lambda_su2)
    )
    .unwrap();
    writeln!(out, "composed reducible data: {} components, tau_correction = {}", composed.components.len(), sc.tau_correction)
        .unwrap();
    writeln!(out, "correction additivity: {}", if additive { "holds" } else { "FAILS" }).unwrap();
    if let Some(p) = out_path {
        write_atomic(p, &composed.to_json_string())?;
    }
    if !additive {
        return Err(Failure::new(EXIT_MISMATCH, out));
    }
    Ok(out)
}

fn cmd_reverse(file: &Path, out_path: Option<&Path>) -> CmdResult {
    let r = orientation_reverse(&load_valid(file)?)?;
    let json = r.to_json_string();
    match out_path {
        Some(p) => {
            write_atomic(p, &json)?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

fn cmd_fuzz(file: &Path, seed: u64, steps: usize, out_path: Option<&Path>) -> CmdResult {
    let m = load_valid(file)?;
    let before = summarize(&m)?;
    let walked = random_walk(&m, seed, steps)?;
    let after = summarize(&walked)?;
    let mut out = String::new();
    writeln!(out, "{steps} moves from seed {seed}").unwrap();
    for (name, b, a) in [
        ("tau", before.tau.to_string(), after.tau.to_string()),
        ("lambda_su3", before.lambda_su3.to_string(), after.lambda_su3.to_string()),
        ("lambda_su2", before.lambda_su2.to_string(), after.lambda_su2.to_string()),
        ("alpha_weighted", before.alpha_weighted.to_string(), after.alpha_weighted.to_string()),
    ] {
        writeln!(out, "{name}: before = {b}, after = {a}").unwrap();
    }
    if let Some(p) = out_path {
        write_atomic(p, &walked.to_json_string())?;
    }
    if before.same_invariants(&after) {
        writeln!(out, "τ before = τ after").unwrap();
        Ok(out)
    } else {
        writeln!(out, "invariants changed").unwrap();
        Err(Failure::new(EXIT_MISMATCH, out))
    }
}

fn cmd_enumerate(
    seifert: &[i64],
    cfg: SolverConfig,
    oracle_path: Option<&Path>,
    out_path: &Path,
    census_path: Option<&Path>,
) -> CmdResult {
    let p = seifert_presentation(seifert[0], seifert[1], seifert[2])?;
    let keyed = match oracle_path {
        Some(path) => Some(
            KeyedOracle::from_json_str(&read(path)?)
                .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let census = enumerate_su3(&p, &cfg);
    let report = census.to_json_string();
    match census_path {
        Some(cp) => write_atomic(cp, &report)?,
        None => print!("{report}"),
    }
    census.check_isolated()?;
    if let Some(k) = &keyed {
        let unmatched = k.unmatched(&census);
        if !unmatched.is_empty() {
            return Err(Failure::new(EXIT_INVALID, format!("sign oracle keys match no cluster: {}", unmatched.join(" | "))));
        }
    }
    let oracle: &dyn SignOracle = match &keyed {
        Some(k) => k,
        None => &UniformPositive,
    };
    let m = moduli_from_enumeration(&census, oracle)?;
    write_atomic(out_path, &m.to_json_string())?;
    let s = summarize(&m)?;
    Ok(format!(
        "{}: {} irreducible, {} reducible nonabelian; tau = {}, lambda_su2 = {}\n",
        census.manifold, census.irreducible_count, census.reducible_count, s.tau, s.lambda_su2
    ))
}

fn cmd_regress(family: &[i64], k_max: i64, cfg: SolverConfig) -> CmdResult {
    if family[0] != 2 {
        return Err(Failure::new(EXIT_INVALID, "families have the form 2,P"));
    }
    let rows = regress(family[1], k_max, &cfg)?;
    let mut out = String::new();
    writeln!(out, "{:<12} {:>3} {:>8} {:>8} {:>5} {:>5} {:>5}  result", "manifold", "k", "table", "computed", "irr", "red", "su2")
        .unwrap();
    let mut all = true;
    for (r, _) in &rows {
        all &= r.pass;
        writeln!(
            out,
            "{:<12} {:>3} {:>8} {:>8} {:>5} {:>5} {:>5}  {}",
            r.manifold,
            r.k,
            r.expected,
            r.computed,
            r.irreducible,
            r.reducible,
            r.su2_classes,
            if r.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    if !all {
        writeln!(out, "signs assumed uniformly positive; failing censuses:").unwrap();
        for (r, c) in rows.iter().filter(|(r, _)| !r.pass) {
            writeln!(out, "{}", r.manifold).unwrap();
            for cl in c.clusters() {
                writeln!(out, "  {:?} x{} {} [{}]", cl.kind, cl.multiplicity, cl.assignment, cl.key()).unwrap();
            }
        }
        return Err(Failure::new(EXIT_MISMATCH, out));
    }
    Ok(out)
}

fn configure_threads() {
    if let Some(n) = std::env::var("TAU_ENGINE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn solver_config(restarts: usize, seed: u64) -> SolverConfig {
    SolverConfig { restarts, seed, ..SolverConfig::default() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Invariants { file, json } => cmd_invariants(file, *json),
        Command::Sum { first, second, out } => cmd_sum(first, second, out.as_deref()),
        Command::Reverse { file, out } => cmd_reverse(file, out.as_deref()),
        Command::Fuzz { seed, steps, file, input, out } => {
            let path = file.as_ref().or(input.as_ref()).expect("clap requires one");
            cmd_fuzz(path, *seed, *steps, out.as_deref())
        }
        Command::Enumerate { seifert, restarts, seed, sign_oracle, out, census } => cmd_enumerate(
            seifert,
            solver_config(*restarts, *seed),
            sign_oracle.as_deref(),
            out,
            census.as_deref(),
        ),
        Command::Regress { family, k_max, restarts, seed } => {
            cmd_regress(family, *k_max, solver_config(*restarts, *seed))
        }
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) if f.code == EXIT_MISMATCH => {
            print!("{}", f.message);
            ExitCode::from(f.code)
        }
        Err(f) => {
            eprint!("{}", f.message);
            if !f.message.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(f.code)
        }
    }
}

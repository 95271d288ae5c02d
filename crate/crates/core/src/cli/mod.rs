//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification or benchmark failure, 2 usage or
//! validation error.

mod bench;
mod sweep;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::blockgap::{make_params, BlockEngine};
use crate::cyclotomic::{self, CyclotomicTable};
use crate::numtheory::FACTOR_CAP;

pub use bench::{run_bench, BenchResult};
pub use sweep::{sweep_rows, SweepMode, SweepRows};
pub use verify::{verify_range, VerifySummary};

/// Largest `n` for single queries without `--unsafe-cap`.
pub const QUERY_CAP: u64 = 200_000;
/// Largest `--max` for sweeps without `--unsafe-cap`.
pub const SWEEP_CAP: u64 = 5_000;

#[derive(Debug, Parser)]
#[command(name = "cyclogap", version, about = "Cyclotomic polynomials, block construction and maximum gaps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the n-th cyclotomic polynomial.
    Phi(QueryArgs),
    /// Print the n-th inverse cyclotomic polynomial.
    Psi(QueryArgs),
    /// Print the maximum gap of the n-th cyclotomic polynomial.
    Gap(QueryArgs),
    /// Show the block structure and block gaps of Phi_mp.
    Blocks {
        m: u64,
        p: u64,
        /// Print block (i, j); j = q selects the r-block.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        show: Option<Vec<usize>>,
    },
    /// Check every block-level claim for all primes m < p <= p-max.
    #[command(group(ArgGroup::new("ms").required(true).args(["m", "m_list"])))]
    Verify {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        m_list: Option<Vec<u64>>,
        #[arg(long)]
        p_max: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
        #[arg(long)]
        unsafe_cap: bool,
    },
    /// Write maximum gaps of Phi_n as CSV.
    #[command(group(ArgGroup::new("mode").required(true).args(["max", "fixed_m"])))]
    Sweep {
        /// Sweep n = 1..=MAX.
        #[arg(long)]
        max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Filter::All, requires = "max")]
        filter: Filter,
        /// Sweep n = m p for primes p above the prime factors of m.
        #[arg(long, requires = "p_max")]
        fixed_m: Option<u64>,
        #[arg(long, requires = "fixed_m")]
        p_max: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        unsafe_cap: bool,
    },
    /// Time the reference construction against block assembly.
    Bench {
        m: u64,
        p: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
    },
}

#[derive(Debug, clap::Args)]
pub struct QueryArgs {
    #[arg(value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long)]
    pub unsafe_cap: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    All,
    OddSquarefree,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments or input validation failure (exit 2).
    #[error("{0}")]
    Usage(String),
    /// A verification or benchmark check failed (exit 1).
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("I/O error: {e}"))
    }
}

pub(crate) fn check_cap(n: u64, cap: u64, unsafe_cap: bool) -> Result<(), CliError> {
    if !unsafe_cap && n > cap {
        return Err(CliError::Usage(format!("{n} exceeds the default cap {cap}; pass --unsafe-cap to override")));
    }
    if n > FACTOR_CAP {
        return Err(CliError::Usage(format!("{n} exceeds the hard cap {FACTOR_CAP}")));
    }
    Ok(())
}

/// Table to use for a query: the shared one, or a private one with the hard
/// cap when `--unsafe-cap` lifts the default limits.
pub(crate) fn table_for(unsafe_cap: bool) -> TableRef {
    if unsafe_cap {
        TableRef::Owned(Box::new(CyclotomicTable::with_cap(FACTOR_CAP)))
    } else {
        TableRef::Shared(cyclotomic::global())
    }
}

pub(crate) enum TableRef {
    Shared(&'static CyclotomicTable),
    Owned(Box<CyclotomicTable>),
}

impl std::ops::Deref for TableRef {
    type Target = CyclotomicTable;
    fn deref(&self) -> &CyclotomicTable {
        match self {
            TableRef::Shared(t) => t,
            TableRef::Owned(t) => t,
        }
    }
}

/// Runs one parsed command, writing normal output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Phi(q) => {
            check_cap(q.n, QUERY_CAP, q.unsafe_cap)?;
            let phi = table_for(q.unsafe_cap).phi(q.n)?;
            writeln!(out, "Phi_{} = {}", q.n, phi)?;
        }
        Command::Psi(q) => {
            check_cap(q.n, QUERY_CAP, q.unsafe_cap)?;
            let psi = table_for(q.unsafe_cap).psi(q.n)?;
            writeln!(out, "Psi_{} = {}", q.n, psi)?;
        }
        Command::Gap(q) => {
            check_cap(q.n, QUERY_CAP, q.unsafe_cap)?;
            let gap = table_for(q.unsafe_cap).gap(q.n)?;
            writeln!(out, "g(Phi_{}) = {}", q.n, gap)?;
        }
        Command::Blocks { m, p, show } => blocks(m, p, show, out)?,
        Command::Verify { m, m_list, p_max, report, unsafe_cap } => {
            let ms = m.map(|m| vec![m]).or(m_list).unwrap_or_default();
            verify::run(&ms, p_max, report, unsafe_cap, out)?;
        }
        Command::Sweep { max, filter, fixed_m, p_max, out: path, unsafe_cap } => {
            let mode = match (max, fixed_m, p_max) {
                (Some(max), None, _) => SweepMode::Range { max, filter },
                (None, Some(m), Some(p_max)) => SweepMode::FixedM { m, p_max },
                _ => return Err(CliError::Usage("choose either --max or --fixed-m with --p-max".into())),
            };
            sweep::run(mode, &path, unsafe_cap, out)?;
        }
        Command::Bench { m, p, reps } => bench::run(m, p, reps, out)?,
    }
    Ok(())
}

fn blocks(m: u64, p: u64, show: Option<Vec<usize>>, out: &mut dyn Write) -> Result<(), CliError> {
    let params = make_params(m, p)?;
    check_cap(params.n(), QUERY_CAP, false)?;
    let engine = BlockEngine::new(params)?;
    let thetas = engine.thetas()?;
    let reps = engine.representative_blocks()?;
    let (q, r) = (params.q() as usize, params.r() as usize);

    if let Some(ij) = show {
        let (i, j) = (ij[0], ij[1]);
        if i >= reps.len() || j > q {
            return Err(CliError::Usage(format!(
                "block ({i}, {j}) out of range: i < {}, j <= {q}",
                reps.len()
            )));
        }
        let block = if j == q { reps[i].truncate(r) } else { reps[i].clone() };
        let kind = if j == q { "r-block" } else { "m-block" };
        writeln!(out, "f[{i},{j}] ({kind}, offset {}) = {}", i * p as usize + j * m as usize, block)?;
        return Ok(());
    }

    writeln!(
        out,
        "m={} p={} phi(m)={} q={} r={} psi(m)={}",
        m,
        p,
        params.phi_m(),
        q,
        r,
        params.psi_m()
    )?;
    writeln!(out, "Phi_m = {}", engine.phi_m())?;
    writeln!(out, "Psi_m = {}", engine.psi_m())?;
    for (i, (theta, block)) in thetas.iter().zip(&reps).enumerate() {
        writeln!(out, "i={i}: Theta = {theta}")?;
        writeln!(out, "  m-block = {block}")?;
        writeln!(out, "  r-block = {}", block.truncate(r))?;
    }
    let report = engine.gap_report()?;
    for (name, table) in report.tables() {
        writeln!(out, "{name:<9} = {table:?}")?;
    }
    match report.witness {
        Some((lo, hi)) => writeln!(out, "gap = {} witness = ({lo}, {hi})", report.gap)?,
        None => writeln!(out, "gap = {}", report.gap)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<(), CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("cyclogap").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let res = run(cli, &mut buf);
        (res, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn query_commands() {
        let (res, out) = run_args(&["psi", "7"]);
        res.unwrap();
        assert_eq!(out, "Psi_7 = -1 + x\n");
        let (res, out) = run_args(&["phi", "15"]);
        res.unwrap();
        assert_eq!(out, "Phi_15 = 1 - x + x^3 - x^4 + x^5 - x^7 + x^8\n");
        let (res, out) = run_args(&["gap", "35"]);
        res.unwrap();
        assert_eq!(out, "g(Phi_35) = 4\n");
    }

    #[test]
    fn zero_is_a_usage_error() {
        let err = Cli::try_parse_from(["cyclogap", "phi", "0"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn query_cap_enforced() {
        let (res, _) = run_args(&["gap", "200001"]);
        assert_eq!(res.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn blocks_output() {
        let (res, out) = run_args(&["blocks", "3", "5"]);
        res.unwrap();
        assert!(out.starts_with("m=3 p=5 phi(m)=2 q=1 r=2"), "{out}");
        assert!(out.contains("m-block = 1 - x\n"));
        assert!(out.contains("m-block = 1 - x^2\n"));
        assert!(out.contains("gap = 2 witness = (1, 3)"));
        let (res, out) = run_args(&["blocks", "15", "53"]);
        res.unwrap();
        assert!(out.contains("phi(m)=8 q=3 r=8"));
        let (res, out) = run_args(&["blocks", "3", "5", "--show", "1", "1"]);
        res.unwrap();
        assert_eq!(out, "f[1,1] (r-block, offset 8) = 1\n");
    }

    #[test]
    fn blocks_validation() {
        let (res, _) = run_args(&["blocks", "9", "11"]);
        let err = res.unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("NotSquarefree"));
        let (res, _) = run_args(&["blocks", "3", "5", "--show", "2", "0"]);
        assert_eq!(res.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn verify_rejects_even_m() {
        let (res, _) = run_args(&["verify", "--m", "4", "--p-max", "50"]);
        let err = res.unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("NotOdd"));
    }

    #[test]
    fn bench_rejects_small_prime() {
        let (res, _) = run_args(&["bench", "15", "13"]);
        assert_eq!(res.unwrap_err().exit_code(), 2);
    }
}

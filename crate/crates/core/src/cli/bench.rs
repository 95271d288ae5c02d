//! `bench`: reference construction against block assembly.

use std::io::Write;
use std::time::{Duration, Instant};

use super::{check_cap, CliError};
use crate::blockgap::{make_params, BlockEngine};
use crate::cyclotomic::CyclotomicTable;

#[derive(Clone, Debug)]
pub struct BenchResult {
    pub m: u64,
    pub p: u64,
    pub reps: u32,
    pub oracle_median: Duration,
    pub blocks_median: Duration,
    /// Both constructions agreed on every repetition.
    pub equal: bool,
}

impl BenchResult {
    pub fn speedup(&self) -> f64 {
        self.oracle_median.as_secs_f64() / self.blocks_median.as_secs_f64().max(1e-9)
    }
}

fn median(mut times: Vec<Duration>) -> Duration {
    times.sort_unstable();
    times[times.len() / 2]
}

/// Builds `Phi_mp` both ways `reps` times, each from an empty table so no
/// repetition reuses the previous one's memo.
pub fn run_bench(m: u64, p: u64, reps: u32) -> crate::Result<BenchResult> {
    let params = make_params(m, p)?;
    let n = params.n();
    let reps = reps.max(1);
    let (mut oracle_t, mut blocks_t) = (Vec::new(), Vec::new());
    let mut equal = true;
    for _ in 0..reps {
        let table = CyclotomicTable::new();
        let start = Instant::now();
        let reference = table.phi(n)?;
        oracle_t.push(start.elapsed());

        let table = CyclotomicTable::new();
        let start = Instant::now();
        let assembled = BlockEngine::with_table(params, &table)?.assemble_phi_mp()?;
        blocks_t.push(start.elapsed());

        equal &= *reference == assembled;
    }
    Ok(BenchResult {
        m,
        p,
        reps,
        oracle_median: median(oracle_t),
        blocks_median: median(blocks_t),
        equal,
    })
}

pub(super) fn run(m: u64, p: u64, reps: u32, out: &mut dyn Write) -> Result<(), CliError> {
    let params = make_params(m, p)?;
    check_cap(params.n(), CyclotomicTable::DEFAULT_CAP, false)?;
    let r = run_bench(m, p, reps)?;
    writeln!(out, "m={m} p={p} n={} reps={}", params.n(), r.reps)?;
    writeln!(out, "reference median: {:.3} ms", r.oracle_median.as_secs_f64() * 1e3)?;
    writeln!(out, "blocks median:    {:.3} ms", r.blocks_median.as_secs_f64() * 1e3)?;
    writeln!(out, "speedup: {:.2}x", r.speedup())?;
    if r.equal {
        writeln!(out, "outputs equal")?;
        Ok(())
    } else {
        Err(CliError::Failed("constructions differ".into()))
    }
}

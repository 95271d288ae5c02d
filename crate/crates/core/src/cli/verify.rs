//! `verify`: run the block checks over a range of primes.

use std::io::Write;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use super::{check_cap, table_for, CliError, ReportFormat, QUERY_CAP};
use crate::blockgap::{validate_m, BlockEngine, BlockParams, Check, VerificationReport};
use crate::cyclotomic::CyclotomicTable;
use crate::numtheory::primes_in;

/// Verification results for every `(m, p)` in a run, ordered by `m` as given
/// and then by `p`.
#[derive(Debug)]
pub struct VerifySummary {
    pub reports: Vec<VerificationReport>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::all_passed)
    }
}

/// Validates every `m`, then verifies each prime `m < p <= p_max` in parallel.
pub fn verify_range(
    ms: &[u64],
    p_max: u64,
    cap: Option<u64>,
    table: &CyclotomicTable,
) -> Result<VerifySummary, CliError> {
    if ms.is_empty() {
        return Err(CliError::Usage("no m given".into()));
    }
    let mut params = Vec::new();
    for &m in ms {
        validate_m(m)?;
        for p in primes_in(m + 1, p_max) {
            let bp = BlockParams::new(m, p)?;
            if let Some(cap) = cap {
                check_cap(bp.n(), cap, false)?;
            }
            params.push(bp);
        }
    }
    let reports = params
        .par_iter()
        .map(|&bp| BlockEngine::with_table(bp, table)?.verify_instance())
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(VerifySummary { reports })
}

pub(super) fn run(
    ms: &[u64],
    p_max: u64,
    format: ReportFormat,
    unsafe_cap: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let table = table_for(unsafe_cap);
    let cap = (!unsafe_cap).then_some(QUERY_CAP);
    let summary = verify_range(ms, p_max, cap, &table)?;
    match format {
        ReportFormat::Text => write_text(ms, &summary, out)?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &JsonReport(&summary))
                .map_err(|e| CliError::Usage(format!("I/O error: {e}")))?;
            writeln!(out)?;
        }
    }
    if summary.all_passed() {
        Ok(())
    } else {
        let failed = summary.reports.iter().filter(|r| !r.all_passed()).count();
        Err(CliError::Failed(format!("{failed} instance(s) failed verification")))
    }
}

fn write_text(ms: &[u64], summary: &VerifySummary, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{:>6} {:>6} {:>8} {:>8} {:>10} {:>7}  status", "m", "phi(m)", "primes", "passed", "gaps", "checks")?;
    for &m in ms {
        let rows: Vec<_> = summary.reports.iter().filter(|r| r.m == m).collect();
        let passed = rows.iter().filter(|r| r.all_passed()).count();
        let gaps = match (rows.iter().map(|r| r.gap).min(), rows.iter().map(|r| r.gap).max()) {
            (Some(lo), Some(hi)) if lo == hi => lo.to_string(),
            (Some(lo), Some(hi)) => format!("{lo}..{hi}"),
            _ => "-".to_string(),
        };
        let phi_m = crate::numtheory::euler_phi(m);
        let status = if passed == rows.len() { "ok" } else { "FAIL" };
        writeln!(
            out,
            "{m:>6} {phi_m:>6} {:>8} {passed:>8} {gaps:>10} {:>7}  {status}",
            rows.len(),
            Check::ALL.len()
        )?;
    }
    for r in &summary.reports {
        for f in r.failures() {
            write!(out, "FAIL m={} p={} {}", r.m, r.p, f.check.name())?;
            if let Some(cx) = &f.counterexample {
                if let Some(i) = cx.i {
                    write!(out, " i={i}")?;
                }
                if let Some(j) = cx.j {
                    write!(out, " j={j}")?;
                }
                write!(out, ": {}", cx.detail)?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

struct JsonReport<'a>(&'a VerifySummary);

impl Serialize for JsonReport<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let reports = &self.0.reports;
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("all_passed", &self.0.all_passed())?;
        map.serialize_entry("instances", &reports.len())?;
        map.serialize_entry("failed", &reports.iter().filter(|r| !r.all_passed()).count())?;
        let results: Vec<_> = reports.iter().map(JsonInstance).collect();
        map.serialize_entry("results", &results)?;
        map.end()
    }
}

struct JsonInstance<'a>(&'a VerificationReport);

impl Serialize for JsonInstance<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.0;
        let mut map = s.serialize_map(Some(8))?;
        map.serialize_entry("m", &r.m)?;
        map.serialize_entry("p", &r.p)?;
        map.serialize_entry("phi_m", &r.phi_m)?;
        map.serialize_entry("gap", &r.gap)?;
        map.serialize_entry("passed", &r.all_passed())?;
        map.serialize_entry("checks", &CheckFlags(r))?;
        map.serialize_entry("counterexamples", &Counterexamples(r))?;
        map.serialize_entry("gap_report", &r.report)?;
        map.end()
    }
}

struct CheckFlags<'a>(&'a VerificationReport);

impl Serialize for CheckFlags<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.outcomes.len()))?;
        for o in &self.0.outcomes {
            map.serialize_entry(o.check.name(), &o.passed)?;
        }
        map.end()
    }
}

struct Counterexamples<'a>(&'a VerificationReport);

impl Serialize for Counterexamples<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for o in self.0.failures() {
            map.serialize_entry(o.check.name(), &o.counterexample)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let summary = verify_range(&[3], 7, Some(QUERY_CAP), crate::cyclotomic::global()).unwrap();
        assert_eq!(summary.reports.iter().map(|r| r.p).collect::<Vec<_>>(), vec![5, 7]);
        let v = serde_json::to_value(JsonReport(&summary)).unwrap();
        assert_eq!(v["all_passed"], true);
        assert_eq!(v["instances"], 2);
        let first = &v["results"][0];
        assert_eq!(first["gap"], 2);
        assert_eq!(first["checks"]["relation_1"], true);
        assert_eq!(first["checks"].as_object().unwrap().len(), Check::ALL.len());
        assert!(first["counterexamples"].as_object().unwrap().is_empty());
        assert_eq!(first["gap_report"]["between_r"], serde_json::json!([2, 1]));
    }

    #[test]
    fn m_one_covers_all_primes() {
        let summary = verify_range(&[1], 20, Some(QUERY_CAP), crate::cyclotomic::global()).unwrap();
        assert_eq!(summary.reports.len(), 8);
        assert!(summary.all_passed());
    }
}

//! `sweep`: maximum gaps of `Phi_n` as CSV.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::{check_cap, table_for, CliError, Filter, QUERY_CAP, SWEEP_CAP};
use crate::blockgap::validate_m;
use crate::cyclotomic::CyclotomicTable;
use crate::numtheory::{factorize, primes_in};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// `n = 1..=max`, optionally restricted to odd square-free `n`.
    Range { max: u64, filter: Filter },
    /// `n = m p` for primes `p` above every prime factor of `m`, `p <= p_max`.
    FixedM { m: u64, p_max: u64 },
}

/// CSV header plus integer rows, sorted by `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRows {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<u64>>,
}

impl SweepRows {
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                write!(s, "{v}").expect("writing to a String");
            }
            s.push('\n');
        }
        s
    }
}

/// Computes the rows for `mode`. Caps are the caller's business; the table
/// still enforces its own.
pub fn sweep_rows(mode: SweepMode, table: &CyclotomicTable) -> crate::Result<SweepRows> {
    match mode {
        SweepMode::Range { max, filter } => {
            let ns: Vec<u64> = (1..=max)
                .filter(|&n| filter == Filter::All || (n % 2 == 1 && factorize(n).is_squarefree()))
                .collect();
            let rows = ns
                .par_iter()
                .map(|&n| {
                    let f = factorize(n);
                    let gap = table.gap(n)? as u64;
                    Ok(vec![n, gap, f.is_squarefree() as u64, n % 2, f.radical()])
                })
                .collect::<crate::Result<Vec<_>>>()?;
            Ok(SweepRows {
                header: &["n", "gap", "is_squarefree", "is_odd", "radical"],
                rows,
            })
        }
        SweepMode::FixedM { m, p_max } => {
            let fm = validate_m(m)?;
            let phi_m = fm.euler_phi();
            let above = fm.primes().max().unwrap_or(1);
            let rows = primes_in(above + 1, p_max)
                .par_iter()
                .map(|&p| {
                    let n = m * p;
                    Ok(vec![m, p, n, table.gap(n)? as u64, phi_m])
                })
                .collect::<crate::Result<Vec<_>>>()?;
            Ok(SweepRows {
                header: &["m", "p", "n", "gap", "phi_m"],
                rows,
            })
        }
    }
}

pub(super) fn run(mode: SweepMode, path: &Path, unsafe_cap: bool, out: &mut dyn Write) -> Result<(), CliError> {
    match mode {
        SweepMode::Range { max, .. } => check_cap(max, SWEEP_CAP, unsafe_cap)?,
        SweepMode::FixedM { m, p_max } => {
            validate_m(m)?;
            check_cap(m.saturating_mul(p_max), QUERY_CAP, unsafe_cap)?;
        }
    }
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    // Open the temp file first so an unwritable destination fails before
    // any work is done.
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    let table = table_for(unsafe_cap);
    let rows = sweep_rows(mode, &table)?;
    tmp.write_all(rows.to_csv().as_bytes())?;
    tmp.persist(path)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {}", path.display(), e.error)))?;
    writeln!(out, "wrote {} rows to {}", rows.rows.len(), path.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::global;

    #[test]
    fn range_rows() {
        let rows = sweep_rows(SweepMode::Range { max: 12, filter: Filter::All }, global()).unwrap();
        assert_eq!(rows.rows.len(), 12);
        assert_eq!(rows.rows[0], vec![1, 1, 1, 1, 1]);
        assert_eq!(rows.rows[11], vec![12, 2, 0, 0, 6]);
        let csv = rows.to_csv();
        assert!(csv.starts_with("n,gap,is_squarefree,is_odd,radical\n1,1,1,1,1\n"));
        assert!(csv.ends_with("12,2,0,0,6\n"));
    }

    #[test]
    fn odd_squarefree_filter() {
        let rows = sweep_rows(SweepMode::Range { max: 30, filter: Filter::OddSquarefree }, global()).unwrap();
        let ns: Vec<u64> = rows.rows.iter().map(|r| r[0]).collect();
        assert_eq!(ns, vec![1, 3, 5, 7, 11, 13, 15, 17, 19, 21, 23, 29]);
    }

    #[test]
    fn fixed_m_rows() {
        let rows = sweep_rows(SweepMode::FixedM { m: 15, p_max: 20 }, global()).unwrap();
        assert_eq!(rows.header, &["m", "p", "n", "gap", "phi_m"]);
        assert_eq!(rows.rows.iter().map(|r| r[1]).collect::<Vec<_>>(), vec![7, 11, 13, 17, 19]);
        for r in rows.rows.iter().filter(|r| r[1] > 15) {
            assert_eq!(r[3], 8);
        }
        assert!(matches!(
            sweep_rows(SweepMode::FixedM { m: 9, p_max: 20 }, global()),
            Err(crate::Error::NotSquarefree(9))
        ));
    }
}

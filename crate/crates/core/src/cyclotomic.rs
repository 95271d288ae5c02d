//! Reference construction of cyclotomic and inverse cyclotomic polynomials.
//!
//! `Phi_n` is computed as `x^n - 1` divided exactly by the product of `Phi_d`
//! over the proper divisors `d` of `n`, recursively, with a memo table. This
//! path never touches the block engine, so agreement between the two is
//! evidence rather than a tautology.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::numtheory::{factorize, try_factorize};

/// Memo table for `Phi_n`, bounded by a cap on `n`.
///
/// Readers share the lock; insertion takes the write lock briefly after the
/// polynomial has been computed outside it. Two threads racing on the same
/// `n` both compute it and the first insertion wins.
#[derive(Debug)]
pub struct CyclotomicTable {
    cap: u64,
    cache: RwLock<HashMap<u64, Arc<IntPoly>>>,
}

impl Default for CyclotomicTable {
    fn default() -> Self {
        CyclotomicTable::with_cap(CyclotomicTable::DEFAULT_CAP)
    }
}

impl CyclotomicTable {
    pub const DEFAULT_CAP: u64 = 1_000_000;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cap(cap: u64) -> Self {
        CyclotomicTable {
            cap,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cyclotomic cache poisoned").len()
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 {
            Err(Error::NonPositive)
        } else if n > self.cap {
            Err(Error::CapExceeded { n, cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// The n-th cyclotomic polynomial.
    pub fn phi(&self, n: u64) -> Result<Arc<IntPoly>> {
        self.check(n)?;
        if let Some(hit) = self.cache.read().expect("cyclotomic cache poisoned").get(&n) {
            return Ok(Arc::clone(hit));
        }
        let poly = Arc::new(self.compute_phi(n)?);
        let mut cache = self.cache.write().expect("cyclotomic cache poisoned");
        Ok(Arc::clone(cache.entry(n).or_insert(poly)))
    }

    fn compute_phi(&self, n: u64) -> Result<IntPoly> {
        let target = IntPoly::x_pow_minus_one(n as usize);
        if n == 1 {
            return Ok(target);
        }
        let divisors = try_factorize(n)?.divisors();
        let mut product = IntPoly::one();
        for &d in &divisors[..divisors.len() - 1] {
            product = product.checked_mul(&*self.phi(d)?)?;
        }
        target.exact_div(&product)
    }

    /// The n-th inverse cyclotomic polynomial `(x^n - 1) / Phi_n`.
    pub fn psi(&self, n: u64) -> Result<IntPoly> {
        let phi = self.phi(n)?;
        IntPoly::x_pow_minus_one(n as usize).exact_div(&phi)
    }

    /// `Phi_radical(n)(x^(n / radical(n)))`.
    pub fn phi_via_radical(&self, n: u64) -> Result<IntPoly> {
        self.check(n)?;
        let rad = try_factorize(n)?.radical();
        Ok(self.phi(rad)?.compose_power((n / rad) as usize))
    }

    /// Maximum gap of `Phi_n`.
    pub fn gap(&self, n: u64) -> Result<usize> {
        self.phi(n)?.max_gap()
    }
}

/// Process-wide table with the default cap.
pub fn global() -> &'static CyclotomicTable {
    static TABLE: OnceLock<CyclotomicTable> = OnceLock::new();
    TABLE.get_or_init(CyclotomicTable::new)
}

pub fn phi_poly_oracle(n: u64) -> Result<IntPoly> {
    global().phi(n).map(|p| (*p).clone())
}

pub fn phi_poly_radical(n: u64) -> Result<IntPoly> {
    global().phi_via_radical(n)
}

pub fn psi_poly(n: u64) -> Result<IntPoly> {
    global().psi(n)
}

pub fn gap_phi(n: u64) -> Result<usize> {
    global().gap(n)
}

/// `Phi_n` from the Mobius product `prod_{d | n} (1 - x^d)^mu(n/d)`, worked
/// as a power series truncated at degree `phi(n)`. Independent of the memo
/// table; used to cross-check it.
pub fn phi_poly_mobius(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    if n == 1 {
        return Ok(IntPoly::x_pow_minus_one(1));
    }
    let f = try_factorize(n)?;
    let len = f.euler_phi() as usize + 1;
    let mut series = vec![0i64; len];
    series[0] = 1;
    let (mut up, mut down) = (Vec::new(), Vec::new());
    for d in f.divisors() {
        match factorize(n / d).mobius() {
            1 => up.push(d as usize),
            -1 => down.push(d as usize),
            _ => {}
        }
    }
    // multiply by (1 - x^d)
    for d in up {
        for k in (d..len).rev() {
            series[k] = series[k].checked_sub(series[k - d]).ok_or(Error::Overflow)?;
        }
    }
    // divide by (1 - x^d)
    for d in down {
        for k in d..len {
            series[k] = series[k].checked_add(series[k - d]).ok_or(Error::Overflow)?;
        }
    }
    Ok(IntPoly::from_coeffs(series))
}

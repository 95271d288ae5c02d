//! Integer helpers: trial-division factorization and the arithmetic
//! functions derived from it.
//!
//! Inputs are capped at [`FACTOR_CAP`]; the free functions panic on `0` or on
//! inputs above the cap, while [`try_factorize`] reports them as errors.

use crate::error::{Error, Result};

pub const FACTOR_CAP: u64 = 100_000_000;

/// `n` with its prime factors in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn try_factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    if n > FACTOR_CAP {
        return Err(Error::CapExceeded { n, cap: FACTOR_CAP });
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// # Panics
/// If `n == 0` or `n > FACTOR_CAP`.
pub fn factorize(n: u64) -> Factorization {
    try_factorize(n).unwrap_or_else(|e| panic!("factorize({n}): {e}"))
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).euler_phi()
}

pub fn radical(n: u64) -> u64 {
    factorize(n).radical()
}

pub fn mobius(n: u64) -> i8 {
    factorize(n).mobius()
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).is_squarefree()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).is_prime()
}

/// Degree of the n-th inverse cyclotomic polynomial: `n - phi(n)` for
/// `n > 1`, and 0 for `n = 1`.
pub fn psi_degree(n: u64) -> u64 {
    if n == 1 {
        0
    } else {
        n - euler_phi(n)
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    factorize(n).divisors()
}

/// Primes `p` with `lo <= p <= hi`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&p| is_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(105).factors(), &[(3, 1), (5, 1), (7, 1)]);
        assert_eq!(factorize(12).factors(), &[(2, 2), (3, 1)]);
        assert!(factorize(1).factors().is_empty());
        assert_eq!(factorize(97).factors(), &[(97, 1)]);
        assert_eq!(try_factorize(0), Err(Error::NonPositive));
        assert!(matches!(try_factorize(FACTOR_CAP + 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn arithmetic_function_examples() {
        assert_eq!(euler_phi(105), 48);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(psi_degree(15), 7);
        assert_eq!(radical(12), 6);
        assert_eq!(mobius(30), -1);
        assert!(!is_squarefree(18));
        assert_eq!(euler_phi(1), 1);
        assert_eq!(psi_degree(1), 0);
        assert_eq!(mobius(1), 1);
        assert_eq!(radical(1), 1);
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(primes_in(100, 120), vec![101, 103, 107, 109, 113]);
    }

    #[test]
    fn divisor_sums() {
        for n in 1..=10_000u64 {
            let divs = divisors(n);
            assert_eq!(divs.iter().map(|&d| euler_phi(d)).sum::<u64>(), n, "phi sum at {n}");
            let mu: i64 = divs.iter().map(|&d| mobius(d) as i64).sum();
            assert_eq!(mu, i64::from(n == 1), "mobius sum at {n}");
        }
    }

    #[test]
    fn psi_plus_phi_and_primality() {
        for n in 2..=5_000u64 {
            assert_eq!(psi_degree(n) + euler_phi(n), n);
            let f = factorize(n);
            let brute = (2..n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), brute, "n = {n}");
            assert_eq!(f.is_prime(), f.factors().len() == 1 && f.factors()[0].1 == 1);
            let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
    }
}

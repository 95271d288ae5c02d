//! Dense univariate polynomials with exact `i64` coefficients.
//!
//! `IntPoly` stores coefficients in ascending degree order: `coeffs[k]` is the
//! coefficient of x^k. The representation is canonical: empty for the zero
//! polynomial, otherwise the last entry is nonzero. Every arithmetic step is
//! checked and reports [`Error::Overflow`] instead of wrapping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coeff = i64;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Coeff>", into = "Vec<Coeff>")]
pub struct IntPoly {
    coeffs: Vec<Coeff>,
}

impl From<Vec<Coeff>> for IntPoly {
    fn from(coeffs: Vec<Coeff>) -> Self {
        IntPoly::from_coeffs(coeffs)
    }
}

impl From<IntPoly> for Vec<Coeff> {
    fn from(p: IntPoly) -> Self {
        p.coeffs
    }
}

fn add_c(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul_c(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

impl IntPoly {
    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    pub fn constant(c: Coeff) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// `c * x^e`; zero when `c` is zero.
    pub fn monomial(c: Coeff, e: usize) -> Self {
        if c == 0 {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        IntPoly { coeffs }
    }

    /// `x^n - 1`. For `n = 0` this is the zero polynomial.
    pub fn x_pow_minus_one(n: usize) -> Self {
        if n == 0 {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = -1;
        coeffs[n] = 1;
        IntPoly { coeffs }
    }

    /// Builds a polynomial from ascending coefficients, stripping high zeros.
    pub fn from_coeffs(coeffs: Vec<Coeff>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Coeff> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Coeff {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Option<Coeff> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(1)
    }

    /// Nonzero terms as `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Coeff)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Maximum absolute coefficient; `None` for zero.
    pub fn height(&self) -> Option<u64> {
        self.coeffs.iter().map(|c| c.unsigned_abs()).max()
    }

    pub fn checked_add(&self, other: &IntPoly) -> Result<IntPoly> {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (slot, &c) in coeffs.iter_mut().zip(&short.coeffs) {
            *slot = add_c(*slot, c)?;
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    pub fn checked_neg(&self) -> Result<IntPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly { coeffs })
    }

    pub fn checked_sub(&self, other: &IntPoly) -> Result<IntPoly> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_scale(&self, c: Coeff) -> Result<IntPoly> {
        if c == 0 {
            return Ok(IntPoly::zero());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| mul_c(a, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly { coeffs })
    }

    /// Schoolbook product over the nonzero terms of both factors.
    pub fn checked_mul(&self, other: &IntPoly) -> Result<IntPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPoly::zero());
        }
        let a: Vec<_> = self.terms().collect();
        let b: Vec<_> = other.terms().collect();
        let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut coeffs = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for &(ea, ca) in &outer {
            for &(eb, cb) in &inner {
                let slot = &mut coeffs[ea + eb];
                *slot = add_c(*slot, mul_c(ca, cb)?)?;
            }
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        IntPoly { coeffs }
    }

    /// Long division from the top, touching only the divisor's nonzero terms.
    /// Each quotient coefficient must be an exact integer multiple of the
    /// divisor's leading coefficient, otherwise `InexactDivision`.
    fn long_division(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let db = divisor.degree().ok_or(Error::DivideByZero)?;
        let lead = divisor.coeffs[db];
        let da = match self.degree() {
            Some(d) if d >= db => d,
            _ => return Ok((IntPoly::zero(), self.clone())),
        };
        let lower: Vec<(usize, Coeff)> = divisor.terms().filter(|&(e, _)| e < db).collect();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; da - db + 1];
        for k in (0..=da - db).rev() {
            let c = rem[k + db];
            if c == 0 {
                continue;
            }
            if c % lead != 0 {
                return Err(Error::InexactDivision);
            }
            let qk = c / lead;
            quot[k] = qk;
            rem[k + db] = 0;
            for &(e, be) in &lower {
                let slot = &mut rem[k + e];
                *slot = slot.checked_sub(mul_c(qk, be)?).ok_or(Error::Overflow)?;
            }
        }
        rem.truncate(db);
        Ok((IntPoly::from_coeffs(quot), IntPoly::from_coeffs(rem)))
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivideByZero);
        }
        if !divisor.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        self.long_division(divisor)
    }

    /// `rem(self, divisor)` for a monic divisor; the result has degree below
    /// the divisor's.
    pub fn rem_monic(&self, divisor: &IntPoly) -> Result<IntPoly> {
        self.div_rem_monic(divisor).map(|(_, r)| r)
    }

    /// Returns `q` with `self = q * divisor`, or `InexactDivision`.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.long_division(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Keeps the terms of exponent below `s`.
    pub fn truncate(&self, s: usize) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs[..s.min(self.coeffs.len())].to_vec())
    }

    /// Cyclic left rotation of the length-`m` coefficient window by `s`:
    /// `(h_0, ..., h_{m-1})` becomes `(h_s, ..., h_{m-1}, h_0, ..., h_{s-1})`,
    /// i.e. `rem(x^(m-s) h, x^m - 1)`.
    pub fn rotate(&self, m: usize, s: usize) -> Result<IntPoly> {
        if s >= m {
            return Err(Error::RotationOutOfRange { shift: s, window: m });
        }
        if let Some(d) = self.degree() {
            if d >= m {
                return Err(Error::DegreeTooLarge { degree: d, window: m });
            }
        }
        let coeffs = (0..m).map(|k| self.coeff((k + s) % m)).collect();
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// Substitutes `x <- x^k` for `k >= 1`.
    pub fn compose_power(&self, k: usize) -> IntPoly {
        assert!(k >= 1, "compose_power needs k >= 1");
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * k + 1];
        for (e, c) in self.terms() {
            coeffs[e * k] = c;
        }
        IntPoly { coeffs }
    }

    /// `p(-x)`.
    pub fn substitute_neg(&self) -> IntPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(e, &c)| if e % 2 == 1 { -c } else { c })
            .collect();
        IntPoly { coeffs }
    }

    /// Least exponent with a nonzero coefficient.
    pub fn trailing_degree(&self) -> Result<usize> {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .ok_or(Error::ZeroPolynomial)
    }

    /// Maximum gap between consecutive exponents of nonzero terms, together
    /// with the leftmost exponent pair achieving it. A single-term polynomial
    /// has gap 0 and no witness.
    pub fn max_gap_with_witness(&self) -> Result<(usize, Option<(usize, usize)>)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut best = (0, None);
        let mut prev: Option<usize> = None;
        for (e, _) in self.terms() {
            if let Some(lo) = prev {
                if e - lo > best.0 {
                    best = (e - lo, Some((lo, e)));
                }
            }
            prev = Some(e);
        }
        Ok(best)
    }

    pub fn max_gap(&self) -> Result<usize> {
        self.max_gap_with_witness().map(|(g, _)| g)
    }
}

impl fmt::Display for IntPoly {
    /// Ascending exponents with explicit signs: `1 - x + 3*x^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (idx, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (e, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{mag}*x")?,
                (_, 1) => write!(f, "x^{e}")?,
                _ => write!(f, "{mag}*x^{e}")?,
            }
        }
        Ok(())
    }
}

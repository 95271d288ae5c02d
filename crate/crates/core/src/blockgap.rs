//! Block structure of `Phi_mp` for odd square-free `m` and prime `p > m`.
//!
//! `Phi_mp` is cut into `phi(m)` p-blocks of length `p`; each p-block is cut
//! into `q = p div m` m-blocks of length `m` followed by one r-block of length
//! `r = p mod m`. Within the i-th p-block all m-blocks equal the
//! representative `f_i = Theta_i * Psi_m`, and the r-block is the truncation
//! of `f_i` to its first `r` coefficients. `Theta_i` is
//! `rem(w_i(x^(m-r)), Phi_m)` with `w_i(x) = -sum_{s<=i} a_s x^(i-s)` where
//! `a_s` are the coefficients of `Phi_m`.
//!
//! [`BlockEngine`] builds the representatives, assembles `Phi_mp` from them,
//! computes the five block-gap tables without materializing `Phi_mp`, and
//! checks every block-level claim against the reference polynomial.

use std::sync::Arc;

use serde::Serialize;

use crate::cyclotomic::{self, CyclotomicTable};
use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::numtheory::{try_factorize, Factorization};

/// A validated `(m, p)` pair with its derived quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockParams {
    m: u64,
    p: u64,
    q: u64,
    r: u64,
    phi_m: u64,
    psi_m: u64,
}

impl BlockParams {
    /// Validates `m` odd square-free and `p` a prime larger than `m`.
    ///
    /// `m = 1` is accepted: `Phi_p` then has a single p-block made of `p`
    /// constant m-blocks and an empty r-block.
    pub fn new(m: u64, p: u64) -> Result<Self> {
        let fm = validate_m(m)?;
        if !try_factorize(p)?.is_prime() {
            return Err(Error::NotPrime(p));
        }
        if p <= m {
            return Err(Error::PrimeNotLarger { m, p });
        }
        let phi_m = fm.euler_phi();
        let psi_m = if m == 1 { 0 } else { m - phi_m };
        let (q, r) = (p / m, p % m);
        assert!(m == 1 || r >= 1, "prime p > m > 1 cannot be a multiple of m");
        Ok(BlockParams { m, p, q, r, phi_m, psi_m })
    }

    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn phi_m(&self) -> u64 {
        self.phi_m
    }
    pub fn psi_m(&self) -> u64 {
        self.psi_m
    }

    pub fn n(&self) -> u64 {
        self.m * self.p
    }

    /// `deg Phi_mp = phi(m) (p - 1)`.
    pub fn phi_mp_degree(&self) -> usize {
        (self.phi_m * (self.p - 1)) as usize
    }

    fn block_count(&self) -> usize {
        self.phi_m as usize
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.block_count() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.block_count() })
        }
    }
}

/// Checks that `m` is odd and square-free, returning its factorization.
pub fn validate_m(m: u64) -> Result<Factorization> {
    let fm = try_factorize(m)?;
    if m % 2 == 0 {
        return Err(Error::NotOdd(m));
    }
    if !fm.is_squarefree() {
        return Err(Error::NotSquarefree(m));
    }
    Ok(fm)
}

pub fn make_params(m: u64, p: u64) -> Result<BlockParams> {
    BlockParams::new(m, p)
}

/// `w_i(x) = -sum_{0<=s<=i} a_s x^(i-s)` for `0 <= i < deg phi_m`.
pub fn w_poly(phi_m: &IntPoly, i: usize) -> Result<IntPoly> {
    let len = phi_m.degree().ok_or(Error::ZeroPolynomial)?;
    if i >= len {
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    let coeffs = (0..=i)
        .map(|k| phi_m.coeff(i - k).checked_neg().ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly::from_coeffs(coeffs))
}

/// The grid of m-blocks and r-blocks sliced out of a polynomial of degree
/// `phi(m)(p-1)`. `mblocks[i][j]` starts at exponent `i p + j m`, `rblocks[i]`
/// at `i p + q m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub params: BlockParams,
    pub mblocks: Vec<Vec<IntPoly>>,
    pub rblocks: Vec<IntPoly>,
}

impl BlockDecomposition {
    /// `sum_i x^(ip) (sum_{j<q} x^(jm) mblocks[i][j] + x^(qm) rblocks[i])`.
    pub fn reassemble(&self) -> Result<IntPoly> {
        let (m, p, q) = (self.params.m as usize, self.params.p as usize, self.params.q as usize);
        let mut coeffs = vec![0i64; self.params.block_count() * p];
        for (i, (row, rblock)) in self.mblocks.iter().zip(&self.rblocks).enumerate() {
            for (j, block) in row.iter().enumerate() {
                place(&mut coeffs, i * p + j * m, block)?;
            }
            place(&mut coeffs, i * p + q * m, rblock)?;
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }
}

fn place(coeffs: &mut Vec<i64>, offset: usize, block: &IntPoly) -> Result<()> {
    let end = offset + block.coeffs().len();
    if coeffs.len() < end {
        coeffs.resize(end, 0);
    }
    for (slot, &c) in coeffs[offset..end].iter_mut().zip(block.coeffs()) {
        *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
    }
    Ok(())
}

fn slice(poly: &IntPoly, start: usize, len: usize) -> IntPoly {
    let c = poly.coeffs();
    let lo = start.min(c.len());
    let hi = (start + len).min(c.len());
    IntPoly::from_coeffs(c[lo..hi].to_vec())
}

/// Slices `phi_mp` into the block grid. Fails with `DegreeMismatch` unless
/// the degree is `phi(m)(p-1)`.
pub fn decompose(phi_mp: &IntPoly, params: &BlockParams) -> Result<BlockDecomposition> {
    let expected = params.phi_mp_degree();
    if phi_mp.degree() != Some(expected) {
        return Err(Error::DegreeMismatch { expected, found: phi_mp.degree() });
    }
    let (m, p, q, r) = (
        params.m as usize,
        params.p as usize,
        params.q as usize,
        params.r as usize,
    );
    let mut mblocks = Vec::with_capacity(params.block_count());
    let mut rblocks = Vec::with_capacity(params.block_count());
    for i in 0..params.block_count() {
        mblocks.push((0..q).map(|j| slice(phi_mp, i * p + j * m, m)).collect());
        rblocks.push(slice(phi_mp, i * p + q * m, r));
    }
    Ok(BlockDecomposition { params: *params, mblocks, rblocks })
}

/// Maximum gap of `Phi_mp` and the five block-gap tables, indexed by p-block.
///
/// Entries that do not apply are 0: `within_r[i]` and `between_r[i]` when the
/// r-block is zero, `between_m[i]` when `q = 1`, `between_p[0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub m: u64,
    pub p: u64,
    pub gap: usize,
    /// Leftmost exponent pair `(e_{k-1}, e_k)` of `Phi_mp` realizing `gap`.
    pub witness: Option<(usize, usize)>,
    /// Gap inside the representative m-block.
    pub within_m: Vec<usize>,
    /// Gap inside the r-block.
    pub within_r: Vec<usize>,
    /// Gap between the first two m-blocks.
    pub between_m: Vec<usize>,
    /// Gap between the last m-block and the r-block.
    pub between_r: Vec<usize>,
    /// Gap between the previous p-block and this one.
    pub between_p: Vec<usize>,
}

impl GapReport {
    pub fn tables(&self) -> [(&'static str, &[usize]); 5] {
        [
            ("within_m", &self.within_m),
            ("within_r", &self.within_r),
            ("between_m", &self.between_m),
            ("between_r", &self.between_r),
            ("between_p", &self.between_p),
        ]
    }

    pub fn table_max(&self) -> usize {
        self.tables()
            .iter()
            .flat_map(|(_, t)| t.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// Representative blocks and the derived constructions for one `(m, p)`.
#[derive(Debug)]
pub struct BlockEngine<'a> {
    params: BlockParams,
    table: &'a CyclotomicTable,
    phi_m: Arc<IntPoly>,
    psi_m: IntPoly,
}

impl BlockEngine<'static> {
    /// Engine backed by the process-wide cyclotomic table.
    pub fn new(params: BlockParams) -> Result<Self> {
        BlockEngine::with_table(params, cyclotomic::global())
    }
}

impl<'a> BlockEngine<'a> {
    pub fn with_table(params: BlockParams, table: &'a CyclotomicTable) -> Result<Self> {
        let phi_m = table.phi(params.m)?;
        let psi_m = table.psi(params.m)?;
        Ok(BlockEngine { params, table, phi_m, psi_m })
    }

    pub fn params(&self) -> &BlockParams {
        &self.params
    }

    pub fn phi_m(&self) -> &IntPoly {
        &self.phi_m
    }

    pub fn psi_m(&self) -> &IntPoly {
        &self.psi_m
    }

    fn shift_exponent(&self) -> usize {
        (self.params.m - self.params.r) as usize
    }

    pub fn w_poly(&self, i: usize) -> Result<IntPoly> {
        w_poly(&self.phi_m, i)
    }

    /// `Theta_i = rem(w_i(x^(m-r)), Phi_m)`, computed directly.
    pub fn theta(&self, i: usize) -> Result<IntPoly> {
        self.params.check_index(i)?;
        self.w_poly(i)?
            .compose_power(self.shift_exponent())
            .rem_monic(&self.phi_m)
    }

    /// All `Theta_i` via `Theta_i = rem(x^(m-r) Theta_{i-1} - a_i, Phi_m)`.
    pub fn thetas(&self) -> Result<Vec<IntPoly>> {
        let k = self.shift_exponent();
        let mut out = Vec::with_capacity(self.params.block_count());
        let mut cur = IntPoly::constant(-self.phi_m.coeff(0)).rem_monic(&self.phi_m)?;
        out.push(cur.clone());
        for i in 1..self.params.block_count() {
            let a_i = IntPoly::constant(self.phi_m.coeff(i));
            cur = cur.shift(k).checked_sub(&a_i)?.rem_monic(&self.phi_m)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// `f_{m,p,i,0} = Theta_i Psi_m`.
    pub fn representative_block(&self, i: usize) -> Result<IntPoly> {
        self.theta(i)?.checked_mul(&self.psi_m)
    }

    pub fn representative_blocks(&self) -> Result<Vec<IntPoly>> {
        self.thetas()?
            .iter()
            .map(|t| t.checked_mul(&self.psi_m))
            .collect()
    }

    /// Builds `Phi_mp` by laying out every p-block from its representative.
    pub fn assemble_phi_mp(&self) -> Result<IntPoly> {
        let (m, p, q, r) = (
            self.params.m as usize,
            self.params.p as usize,
            self.params.q as usize,
            self.params.r as usize,
        );
        let blocks = self.representative_blocks()?;
        let mut coeffs = vec![0i64; blocks.len() * p];
        for (i, block) in blocks.iter().enumerate() {
            let c = block.coeffs();
            for j in 0..q {
                let at = i * p + j * m;
                coeffs[at..at + c.len()].copy_from_slice(c);
            }
            let head = &c[..r.min(c.len())];
            let at = i * p + q * m;
            coeffs[at..at + head.len()].copy_from_slice(head);
        }
        let poly = IntPoly::from_coeffs(coeffs);
        let expected = self.params.phi_mp_degree();
        if poly.degree() != Some(expected) {
            return Err(Error::DegreeMismatch { expected, found: poly.degree() });
        }
        Ok(poly)
    }

    /// The five block-gap tables, from the representatives only.
    pub fn gap_report(&self) -> Result<GapReport> {
        let blocks = self.representative_blocks()?;
        gap_report_from_representatives(&self.params, &blocks)
    }

    pub fn max_gap_via_blocks(&self) -> Result<usize> {
        self.gap_report().map(|r| r.gap)
    }

    /// Runs every block-level check on the reference `Phi_mp`.
    pub fn verify_instance(&self) -> Result<VerificationReport> {
        let phi_mp = self.table.phi(self.params.n())?;
        let decomposition = decompose(&phi_mp, &self.params)?;
        self.verify_decomposition(&decomposition)
    }

    /// Runs every block-level check on `decomposition`, treating it as the
    /// sliced `Phi_mp` under test.
    pub fn verify_decomposition(&self, decomposition: &BlockDecomposition) -> Result<VerificationReport> {
        Verifier::new(self, decomposition)?.run()
    }
}

#[derive(Clone, Copy, Debug)]
struct BlockShape {
    deg: usize,
    tdeg: usize,
}

fn shape(block: &IntPoly) -> Option<BlockShape> {
    Some(BlockShape {
        deg: block.degree()?,
        tdeg: block.trailing_degree().ok()?,
    })
}

/// Degree of the whole i-th p-block, read off its representative.
fn p_block_degree(params: &BlockParams, rep: BlockShape, rblock: &IntPoly) -> usize {
    let (m, q) = (params.m as usize, params.q as usize);
    match rblock.degree() {
        Some(d) => q * m + d,
        None => (q - 1) * m + rep.deg,
    }
}

fn gap_report_from_representatives(params: &BlockParams, blocks: &[IntPoly]) -> Result<GapReport> {
    let (m, p, q, r) = (
        params.m as usize,
        params.p as usize,
        params.q as usize,
        params.r as usize,
    );
    let n = blocks.len();
    let mut report = GapReport {
        m: params.m,
        p: params.p,
        gap: 0,
        witness: None,
        within_m: vec![0; n],
        within_r: vec![0; n],
        between_m: vec![0; n],
        between_r: vec![0; n],
        between_p: vec![0; n],
    };
    // (value, lo, hi) candidates; the leftmost maximal one is the witness.
    let mut best: Option<(usize, usize, usize)> = None;
    let mut offer = |value: usize, lo: usize, hi: usize| {
        let better = match best {
            None => true,
            Some((v, l, _)) => value > v || (value == v && lo < l),
        };
        if better {
            best = Some((value, lo, hi));
        }
    };
    let mut prev_end: Option<usize> = None;
    for (i, block) in blocks.iter().enumerate() {
        let base = i * p;
        let rep = shape(block).ok_or(Error::ZeroPolynomial)?;
        let rblock = block.truncate(r);

        let (g, w) = block.max_gap_with_witness()?;
        report.within_m[i] = g;
        if let Some((lo, hi)) = w {
            offer(g, base + lo, base + hi);
        }
        if !rblock.is_zero() {
            let (g, w) = rblock.max_gap_with_witness()?;
            report.within_r[i] = g;
            if let Some((lo, hi)) = w {
                offer(g, base + q * m + lo, base + q * m + hi);
            }
        }
        if q > 1 {
            let g = m + rep.tdeg - rep.deg;
            report.between_m[i] = g;
            offer(g, base + rep.deg, base + m + rep.tdeg);
        }
        if !rblock.is_zero() {
            let r_tdeg = rblock.trailing_degree()?;
            let g = m + r_tdeg - rep.deg;
            report.between_r[i] = g;
            offer(g, base + (q - 1) * m + rep.deg, base + q * m + r_tdeg);
        }
        if let Some(end) = prev_end {
            let g = base + rep.tdeg - end;
            report.between_p[i] = g;
            offer(g, end, base + rep.tdeg);
        }
        prev_end = Some(base + p_block_degree(params, rep, &rblock));
    }
    if let Some((g, lo, hi)) = best {
        report.gap = g;
        report.witness = (g > 0).then_some((lo, hi));
    }
    Ok(report)
}

/// The claims checked by [`BlockEngine::verify_decomposition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    /// Every m-block of a p-block equals the first one.
    Relation1,
    /// The r-block is the first `r` coefficients of the representative.
    Relation2,
    /// `f_{i+1} = R_{m,r} f_i - a_{i+1} Psi_m`.
    Relation3,
    /// `f_i = Theta_i Psi_m`, the direct and recurrent `Theta_i` agree, and
    /// `Psi_m` divides `f_i`.
    Explicit,
    NonZero,
    /// `deg f_i - tdeg f_i >= psi(m)`, with equality at `i = 0`.
    DegreeDifference,
    WithinMBound,
    WithinRBound,
    BetweenMBound,
    /// Bound, plus `between_r[0] = phi(m)` whenever the first r-block is nonzero.
    BetweenRBound,
    /// Bound, plus the p-block degree read from slices matches
    /// `deg f_i + p - m`.
    BetweenPBound,
    /// Tables measured on the slices equal the representative-only tables,
    /// and their maximum is the scanned maximum gap of the polynomial.
    BlockGapMax,
    /// Maximum gap equals `phi(m)`.
    MainTheorem,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::Relation1,
        Check::Relation2,
        Check::Relation3,
        Check::Explicit,
        Check::NonZero,
        Check::DegreeDifference,
        Check::WithinMBound,
        Check::WithinRBound,
        Check::BetweenMBound,
        Check::BetweenRBound,
        Check::BetweenPBound,
        Check::BlockGapMax,
        Check::MainTheorem,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Relation1 => "relation_1",
            Check::Relation2 => "relation_2",
            Check::Relation3 => "relation_3",
            Check::Explicit => "explicit",
            Check::NonZero => "non_zero",
            Check::DegreeDifference => "degree_difference",
            Check::WithinMBound => "within_m_bound",
            Check::WithinRBound => "within_r_bound",
            Check::BetweenMBound => "between_m_bound",
            Check::BetweenRBound => "between_r_bound",
            Check::BetweenPBound => "between_p_bound",
            Check::BlockGapMax => "block_gap_max",
            Check::MainTheorem => "main_theorem",
        }
    }
}

impl Serialize for Check {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub m: u64,
    pub p: u64,
    pub phi_m: u64,
    pub gap: usize,
    pub report: GapReport,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    pub fn outcome(&self, check: Check) -> &CheckOutcome {
        self.outcomes
            .iter()
            .find(|o| o.check == check)
            .expect("every check is recorded")
    }
}

fn cx(i: Option<usize>, j: Option<usize>, detail: impl Into<String>) -> Counterexample {
    Counterexample { i, j, detail: detail.into() }
}

struct Verifier<'e, 'a> {
    engine: &'e BlockEngine<'a>,
    dec: &'e BlockDecomposition,
    reps: Vec<IntPoly>,
    report: GapReport,
    outcomes: Vec<CheckOutcome>,
}

impl<'e, 'a> Verifier<'e, 'a> {
    fn new(engine: &'e BlockEngine<'a>, dec: &'e BlockDecomposition) -> Result<Self> {
        let reps = engine.representative_blocks()?;
        let report = gap_report_from_representatives(&engine.params, &reps)?;
        Ok(Verifier { engine, dec, reps, report, outcomes: Vec::new() })
    }

    fn record(&mut self, check: Check, failure: Option<Counterexample>) {
        self.outcomes.push(CheckOutcome {
            check,
            passed: failure.is_none(),
            counterexample: failure,
        });
    }

    fn run(mut self) -> Result<VerificationReport> {
        let c = self.relation_1();
        self.record(Check::Relation1, c);
        let c = self.relation_2();
        self.record(Check::Relation2, c);
        let c = self.relation_3()?;
        self.record(Check::Relation3, c);
        let c = self.explicit()?;
        self.record(Check::Explicit, c);
        let c = self.non_zero();
        self.record(Check::NonZero, c);
        let c = self.degree_difference();
        self.record(Check::DegreeDifference, c);
        let phi_m = self.engine.params.phi_m as usize;
        for (check, table) in [
            (Check::WithinMBound, self.report.within_m.clone()),
            (Check::WithinRBound, self.report.within_r.clone()),
            (Check::BetweenMBound, self.report.between_m.clone()),
        ] {
            let c = bound(&table, phi_m);
            self.record(check, c);
        }
        let c = self.between_r();
        self.record(Check::BetweenRBound, c);
        let c = self.between_p();
        self.record(Check::BetweenPBound, c);
        let c = self.block_gap_max()?;
        self.record(Check::BlockGapMax, c);
        let c = (self.report.gap != phi_m)
            .then(|| cx(None, None, format!("gap {} != phi(m) {}", self.report.gap, phi_m)));
        self.record(Check::MainTheorem, c);

        let params = self.engine.params;
        Ok(VerificationReport {
            m: params.m,
            p: params.p,
            phi_m: params.phi_m,
            gap: self.report.gap,
            report: self.report,
            outcomes: self.outcomes,
        })
    }

    fn first(&self, i: usize) -> &IntPoly {
        &self.dec.mblocks[i][0]
    }

    fn relation_1(&self) -> Option<Counterexample> {
        for (i, row) in self.dec.mblocks.iter().enumerate() {
            for (j, block) in row.iter().enumerate().skip(1) {
                if block != &row[0] {
                    return Some(cx(Some(i), Some(j), format!("{block} != {}", row[0])));
                }
            }
        }
        None
    }

    fn relation_2(&self) -> Option<Counterexample> {
        let r = self.engine.params.r as usize;
        for (i, rblock) in self.dec.rblocks.iter().enumerate() {
            let expected = self.first(i).truncate(r);
            if *rblock != expected {
                return Some(cx(Some(i), None, format!("r-block {rblock} != {expected}")));
            }
        }
        None
    }

    fn relation_3(&self) -> Result<Option<Counterexample>> {
        let params = &self.engine.params;
        let (m, r) = (params.m as usize, params.r as usize);
        for i in 0..params.block_count().saturating_sub(1) {
            let a = self.engine.phi_m.coeff(i + 1);
            let expected = match self.first(i).rotate(m, r) {
                Ok(rot) => rot.checked_sub(&self.engine.psi_m.checked_scale(a)?)?,
                Err(e) => return Ok(Some(cx(Some(i), None, format!("cannot rotate: {e}")))),
            };
            if *self.first(i + 1) != expected {
                return Ok(Some(cx(
                    Some(i + 1),
                    None,
                    format!("{} != {expected}", self.first(i + 1)),
                )));
            }
        }
        Ok(None)
    }

    fn explicit(&self) -> Result<Option<Counterexample>> {
        let recurrent = self.engine.thetas()?;
        for i in 0..self.engine.params.block_count() {
            let theta = self.engine.theta(i)?;
            if theta != recurrent[i] {
                return Ok(Some(cx(
                    Some(i),
                    None,
                    format!("direct Theta {theta} != recurrent Theta {}", recurrent[i]),
                )));
            }
            let expected = theta.checked_mul(&self.engine.psi_m)?;
            if *self.first(i) != expected {
                return Ok(Some(cx(Some(i), None, format!("{} != Theta*Psi = {expected}", self.first(i)))));
            }
            if !self.first(i).rem_monic(&self.engine.psi_m)?.is_zero() {
                return Ok(Some(cx(Some(i), None, "Psi_m does not divide the block")));
            }
        }
        Ok(None)
    }

    fn non_zero(&self) -> Option<Counterexample> {
        (0..self.engine.params.block_count())
            .find(|&i| self.first(i).is_zero())
            .map(|i| cx(Some(i), Some(0), "zero representative block"))
    }

    fn degree_difference(&self) -> Option<Counterexample> {
        let psi = self.engine.params.psi_m as usize;
        for i in 0..self.engine.params.block_count() {
            let Some(s) = shape(self.first(i)) else {
                return Some(cx(Some(i), None, "zero block"));
            };
            let diff = s.deg - s.tdeg;
            if diff < psi || (i == 0 && diff != psi) {
                return Some(cx(Some(i), None, format!("deg - tdeg = {diff}, psi(m) = {psi}")));
            }
        }
        None
    }

    fn between_r(&self) -> Option<Counterexample> {
        let phi_m = self.engine.params.phi_m as usize;
        bound(&self.report.between_r, phi_m).or_else(|| {
            let first_r_nonzero = !self.reps[0].truncate(self.engine.params.r as usize).is_zero();
            (first_r_nonzero && self.report.between_r[0] != phi_m).then(|| {
                cx(Some(0), None, format!("between_r[0] = {} != phi(m)", self.report.between_r[0]))
            })
        })
    }

    fn between_p(&self) -> Option<Counterexample> {
        let params = &self.engine.params;
        let (m, p) = (params.m as usize, params.p as usize);
        if let Some(c) = bound(&self.report.between_p, params.phi_m as usize) {
            return Some(c);
        }
        for i in 1..params.block_count() {
            let sliced = self.sliced_p_block(i - 1);
            let Some(deg) = sliced.degree() else {
                return Some(cx(Some(i - 1), None, "zero p-block"));
            };
            let Some(rep) = shape(self.first(i)) else {
                return Some(cx(Some(i), None, "zero block"));
            };
            if deg + m != rep.deg + p {
                return Some(cx(
                    Some(i - 1),
                    None,
                    format!("p-block degree {deg} != deg f_i + p - m = {}", rep.deg + p - m),
                ));
            }
        }
        None
    }

    fn sliced_p_block(&self, i: usize) -> IntPoly {
        let (m, q) = (self.engine.params.m as usize, self.engine.params.q as usize);
        let mut coeffs = vec![0i64; self.engine.params.p as usize];
        for (j, block) in self.dec.mblocks[i].iter().enumerate() {
            let c = block.coeffs();
            coeffs[j * m..j * m + c.len()].copy_from_slice(c);
        }
        let c = self.dec.rblocks[i].coeffs();
        coeffs[q * m..q * m + c.len()].copy_from_slice(c);
        IntPoly::from_coeffs(coeffs)
    }

    /// Block-gap tables measured directly on the slices.
    fn sliced_tables(&self) -> std::result::Result<[Vec<usize>; 5], Counterexample> {
        let params = &self.engine.params;
        let (m, p, q) = (params.m as usize, params.p as usize, params.q as usize);
        let n = params.block_count();
        let mut t: [Vec<usize>; 5] = std::array::from_fn(|_| vec![0; n]);
        let zero = |i: usize, j: usize| cx(Some(i), Some(j), "zero block in slice tables");
        let mut prev_end = None;
        for i in 0..n {
            let row = &self.dec.mblocks[i];
            let rblock = &self.dec.rblocks[i];
            let first = shape(&row[0]).ok_or_else(|| zero(i, 0))?;
            t[0][i] = row[0].max_gap().map_err(|_| zero(i, 0))?;
            if let Some(rs) = shape(rblock) {
                t[1][i] = rblock.max_gap().map_err(|_| zero(i, q))?;
                let last = shape(&row[q - 1]).ok_or_else(|| zero(i, q - 1))?;
                t[3][i] = m + rs.tdeg - last.deg;
            }
            if q > 1 {
                let second = shape(&row[1]).ok_or_else(|| zero(i, 1))?;
                t[2][i] = m + second.tdeg - first.deg;
            }
            if let Some(end) = prev_end {
                t[4][i] = i * p + first.tdeg - end;
            }
            let deg = self.sliced_p_block(i).degree().ok_or_else(|| zero(i, 0))?;
            prev_end = Some(i * p + deg);
        }
        Ok(t)
    }

    fn block_gap_max(&self) -> Result<Option<Counterexample>> {
        let tables = match self.sliced_tables() {
            Ok(t) => t,
            Err(c) => return Ok(Some(c)),
        };
        for ((name, ours), sliced) in self.report.tables().iter().zip(&tables) {
            if let Some(i) = (0..ours.len()).find(|&i| ours[i] != sliced[i]) {
                return Ok(Some(cx(
                    Some(i),
                    None,
                    format!("{name}[{i}]: representatives give {}, slices give {}", ours[i], sliced[i]),
                )));
            }
        }
        let poly = self.dec.reassemble()?;
        let (scanned, witness) = poly.max_gap_with_witness()?;
        if scanned != self.report.table_max() || scanned != self.report.gap {
            return Ok(Some(cx(
                None,
                None,
                format!("scanned gap {scanned} != block maximum {}", self.report.table_max()),
            )));
        }
        if witness != self.report.witness {
            return Ok(Some(cx(
                None,
                None,
                format!("scanned witness {witness:?} != block witness {:?}", self.report.witness),
            )));
        }
        Ok(None)
    }
}

fn bound(table: &[usize], limit: usize) -> Option<Counterexample> {
    table
        .iter()
        .position(|&g| g > limit)
        .map(|i| cx(Some(i), None, format!("{} > phi(m) = {limit}", table[i])))
}

pub fn theta(params: &BlockParams, i: usize) -> Result<IntPoly> {
    BlockEngine::new(*params)?.theta(i)
}

pub fn representative_block(params: &BlockParams, i: usize) -> Result<IntPoly> {
    BlockEngine::new(*params)?.representative_block(i)
}

pub fn assemble_phi_mp(params: &BlockParams) -> Result<IntPoly> {
    BlockEngine::new(*params)?.assemble_phi_mp()
}

pub fn block_gap_report(params: &BlockParams) -> Result<GapReport> {
    BlockEngine::new(*params)?.gap_report()
}

pub fn max_gap_via_blocks(params: &BlockParams) -> Result<usize> {
    BlockEngine::new(*params)?.max_gap_via_blocks()
}

pub fn verify_instance(params: &BlockParams) -> Result<VerificationReport> {
    BlockEngine::new(*params)?.verify_instance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::phi_poly_oracle;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.to_vec())
    }

    #[test]
    fn params_examples() {
        let bp = make_params(15, 53).unwrap();
        assert_eq!((bp.q(), bp.r(), bp.phi_m(), bp.psi_m()), (3, 8, 8, 7));
        let bp = make_params(3, 5).unwrap();
        assert_eq!((bp.q(), bp.r(), bp.phi_m(), bp.psi_m()), (1, 2, 2, 1));
        assert_eq!(make_params(15, 13), Err(Error::PrimeNotLarger { m: 15, p: 13 }));
        assert_eq!(make_params(9, 11), Err(Error::NotSquarefree(9)));
        assert_eq!(make_params(4, 11), Err(Error::NotOdd(4)));
        assert_eq!(make_params(15, 57), Err(Error::NotPrime(57)));
        assert_eq!(make_params(0, 5), Err(Error::NonPositive));
        let bp = make_params(1, 5).unwrap();
        assert_eq!((bp.q(), bp.r(), bp.phi_m(), bp.psi_m()), (5, 0, 1, 0));
    }

    #[test]
    fn p_block_count_matches_degree() {
        for (m, p) in [(3, 5), (15, 53), (105, 107), (21, 23)] {
            let bp = make_params(m, p).unwrap();
            let deg = bp.phi_mp_degree() as u64;
            assert_eq!(deg / p, bp.phi_m() - 1);
        }
    }

    #[test]
    fn w_poly_examples() {
        let phi3 = phi_poly_oracle(3).unwrap();
        let phi15 = phi_poly_oracle(15).unwrap();
        assert_eq!(w_poly(&phi3, 0).unwrap(), IntPoly::constant(-1));
        assert_eq!(w_poly(&phi15, 0).unwrap(), IntPoly::constant(-1));
        assert_eq!(w_poly(&phi3, 1).unwrap(), p(&[-1, -1]));
        assert_eq!(w_poly(&phi15, 1).unwrap(), p(&[1, -1]));
        assert_eq!(w_poly(&phi3, 2), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn theta_examples() {
        let bp = make_params(3, 5).unwrap();
        assert_eq!(theta(&bp, 0).unwrap(), IntPoly::constant(-1));
        assert_eq!(theta(&bp, 1).unwrap(), p(&[-1, -1]));
        assert!(matches!(theta(&bp, 2), Err(Error::IndexOutOfRange { .. })));
        for (m, pr) in [(15, 53), (105, 107), (21, 101), (35, 37)] {
            let engine = BlockEngine::new(make_params(m, pr).unwrap()).unwrap();
            let rec = engine.thetas().unwrap();
            assert_eq!(rec[0], IntPoly::constant(-1));
            for (i, t) in rec.iter().enumerate() {
                assert_eq!(&engine.theta(i).unwrap(), t, "m={m} p={pr} i={i}");
                assert!(t.degree().unwrap() < engine.params().phi_m() as usize);
            }
        }
    }

    #[test]
    fn degenerate_m_one() {
        let engine = BlockEngine::new(make_params(1, 7).unwrap()).unwrap();
        // Phi_1 = x - 1 has a_0 = -1, so Theta_0 = +1 and the block is 1.
        assert_eq!(engine.theta(0).unwrap(), IntPoly::one());
        assert_eq!(engine.representative_block(0).unwrap(), IntPoly::one());
        assert_eq!(engine.assemble_phi_mp().unwrap(), phi_poly_oracle(7).unwrap());
        assert_eq!(engine.max_gap_via_blocks().unwrap(), 1);
        let report = engine.verify_instance().unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.report.between_r, vec![0]);
    }

    #[test]
    fn representative_block_examples() {
        let bp = make_params(3, 5).unwrap();
        assert_eq!(representative_block(&bp, 0).unwrap(), p(&[1, -1]));
        assert_eq!(representative_block(&bp, 1).unwrap(), p(&[1, 0, -1]));
        for (m, pr) in [(15, 53), (105, 109), (33, 37)] {
            let bp = make_params(m, pr).unwrap();
            let f0 = representative_block(&bp, 0).unwrap();
            let diff = f0.degree().unwrap() - f0.trailing_degree().unwrap();
            assert_eq!(diff as u64, bp.psi_m());
        }
    }

    #[test]
    fn assemble_examples() {
        let bp = make_params(3, 5).unwrap();
        assert_eq!(assemble_phi_mp(&bp).unwrap(), p(&[1, -1, 0, 1, -1, 1, 0, -1, 1]));
        let bp = make_params(15, 53).unwrap();
        assert_eq!(assemble_phi_mp(&bp).unwrap(), phi_poly_oracle(795).unwrap());
        let bp = make_params(1, 5).unwrap();
        assert_eq!(assemble_phi_mp(&bp).unwrap(), phi_poly_oracle(5).unwrap());
    }

    #[test]
    fn assembly_uses_its_own_table_only_for_m() {
        let table = CyclotomicTable::new();
        let engine = BlockEngine::with_table(make_params(21, 43).unwrap(), &table).unwrap();
        let phi = engine.assemble_phi_mp().unwrap();
        assert!(table.cached_len() <= crate::numtheory::divisors(21).len());
        assert_eq!(phi, phi_poly_oracle(21 * 43).unwrap());
    }

    #[test]
    fn decompose_example() {
        let bp = make_params(3, 5).unwrap();
        let dec = decompose(&phi_poly_oracle(15).unwrap(), &bp).unwrap();
        assert_eq!(dec.mblocks[0][0], p(&[1, -1]));
        assert_eq!(dec.mblocks[1][0], p(&[1, 0, -1]));
        assert_eq!(dec.rblocks[0], p(&[1, -1]));
        assert_eq!(dec.rblocks[1], IntPoly::one());
        assert_eq!(dec.reassemble().unwrap(), phi_poly_oracle(15).unwrap());
        assert!(matches!(
            decompose(&phi_poly_oracle(21).unwrap(), &bp),
            Err(Error::DegreeMismatch { expected: 8, .. })
        ));
    }

    #[test]
    fn decompose_round_trip_and_row_constancy() {
        for (m, pr) in [(15, 53), (21, 59), (7, 29), (105, 107)] {
            let bp = make_params(m, pr).unwrap();
            let phi = phi_poly_oracle(bp.n()).unwrap();
            let dec = decompose(&phi, &bp).unwrap();
            assert_eq!(dec.reassemble().unwrap(), phi);
            for row in &dec.mblocks {
                assert!(row.iter().all(|b| b == &row[0]));
            }
        }
    }

    #[test]
    fn gap_report_three_five() {
        let report = block_gap_report(&make_params(3, 5).unwrap()).unwrap();
        assert_eq!(report.within_m, vec![1, 2]);
        assert_eq!(report.within_r, vec![1, 0]);
        assert_eq!(report.between_m, vec![0, 0]);
        // the second r-block is the single term x^8, one step after x^7
        assert_eq!(report.between_r, vec![2, 1]);
        assert_eq!(report.between_p, vec![0, 1]);
        assert_eq!(report.gap, 2);
        assert_eq!(report.witness, Some((1, 3)));
    }

    #[test]
    fn max_gap_examples() {
        assert_eq!(max_gap_via_blocks(&make_params(3, 5).unwrap()).unwrap(), 2);
        assert_eq!(max_gap_via_blocks(&make_params(15, 53).unwrap()).unwrap(), 8);
        assert_eq!(max_gap_via_blocks(&make_params(105, 107).unwrap()).unwrap(), 48);
    }

    #[test]
    fn verify_examples() {
        let report = verify_instance(&make_params(3, 5).unwrap()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.outcomes.len(), Check::ALL.len());
        let report = verify_instance(&make_params(15, 53).unwrap()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.report.between_r[0], 8);
    }

    #[test]
    fn tampered_block_is_caught() {
        let bp = make_params(3, 7).unwrap();
        let engine = BlockEngine::new(bp).unwrap();
        let mut dec = decompose(&phi_poly_oracle(21).unwrap(), &bp).unwrap();
        let mut c = dec.mblocks[1][1].clone().into_coeffs();
        c[0] = -c[0] + 1;
        dec.mblocks[1][1] = IntPoly::from_coeffs(c);
        let report = engine.verify_decomposition(&dec).unwrap();
        let outcome = report.outcome(Check::Relation1);
        assert!(!outcome.passed);
        let cx = outcome.counterexample.as_ref().unwrap();
        assert_eq!((cx.i, cx.j), (Some(1), Some(1)));
        assert!(!report.outcome(Check::BlockGapMax).passed);
        assert!(report.outcome(Check::Explicit).passed);
    }

    #[test]
    fn tampered_representative_breaks_explicit_and_relation_3() {
        let bp = make_params(5, 7).unwrap();
        let engine = BlockEngine::new(bp).unwrap();
        let mut dec = decompose(&phi_poly_oracle(35).unwrap(), &bp).unwrap();
        dec.mblocks[2][0] = dec.mblocks[2][0].checked_add(&IntPoly::monomial(1, 4)).unwrap();
        let report = engine.verify_decomposition(&dec).unwrap();
        assert!(!report.outcome(Check::Explicit).passed);
        assert!(!report.outcome(Check::Relation3).passed);
    }

    #[test]
    fn verification_report_serializes() {
        let report = verify_instance(&make_params(3, 5).unwrap()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["outcomes"][0]["check"], "relation_1");
        assert_eq!(json["outcomes"][0]["passed"], true);
        assert_eq!(json["report"]["between_r"], serde_json::json!([2, 1]));
    }
}

//! Small-root lattice methods: an exact integral LLL and divisor recovery
//! from an approximation of one of the factors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bigmod::{iroot, to_bigint, Rational};
use crate::consistent::giant_step_coppersmith_prepass;
use crate::error::{invalid, Error, Result};

/// Largest dimension accepted by [`IntegerLattice::new`].
pub const MAX_DIMENSION: usize = 12;

/// Square integer basis, one basis vector per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || n > MAX_DIMENSION {
            return Err(invalid(format!("lattice dimension must be in 1..={MAX_DIMENSION}")));
        }
        if basis.iter().any(|row| row.len() != n) {
            return Err(invalid("basis must be square"));
        }
        Ok(Self { basis })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.basis[i]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LllOutput {
    pub reduced: IntegerLattice,
    /// `transform · original = reduced`.
    pub transform: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`, ties rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (BigInt::from(2) * a + b).div_floor(&(BigInt::from(2) * b))
}

/// Integral LLL working entirely with the Gram subdeterminants `d_i` and
/// `λ_{i,j} = d_{j+1}·μ_{i,j}`, so no fractions are formed.
struct Integral {
    b: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    // d[0] = 1, d[i + 1] = Gram determinant of the first i + 1 rows
    d: Vec<BigInt>,
    lambda: Vec<Vec<BigInt>>,
    num: BigInt,
    den: BigInt,
}

impl Integral {
    fn gram_schmidt_row(&mut self, k: usize) -> Result<()> {
        for j in 0..=k {
            let mut u = dot(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * u - &self.lambda[k][i] * &self.lambda[j][i]) / &self.d[i];
            }
            if j < k {
                self.lambda[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::DegenerateLattice);
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    fn reduce(&mut self, k: usize, l: usize) {
        let two_lambda = BigInt::from(2) * &self.lambda[k][l];
        if two_lambda.abs() <= self.d[l + 1] {
            return;
        }
        let q = round_div(&self.lambda[k][l], &self.d[l + 1]);
        for c in 0..self.b[k].len() {
            let v = &q * &self.b[l][c];
            self.b[k][c] -= v;
            let v = &q * &self.h[l][c];
            self.h[k][c] -= v;
        }
        let v = &q * &self.d[l + 1];
        self.lambda[k][l] -= v;
        for i in 0..l {
            let v = &q * &self.lambda[l][i];
            self.lambda[k][i] -= v;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        self.h.swap(k, k - 1);
        for j in 0..k.saturating_sub(1) {
            let tmp = self.lambda[k][j].clone();
            self.lambda[k][j] = std::mem::replace(&mut self.lambda[k - 1][j], tmp);
        }
        let lam = self.lambda[k][k - 1].clone();
        let new_d = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k + 1] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k];
            self.lambda[i][k - 1] = (&new_d * &t + &lam * &self.lambda[i][k]) / &self.d[k + 1];
        }
        self.d[k] = new_d;
    }

    fn lovasz_fails(&self, k: usize) -> bool {
        let lam = &self.lambda[k][k - 1];
        &self.den * &self.d[k + 1] * &self.d[k - 1] < &self.num * &self.d[k] * &self.d[k] - &self.den * lam * lam
    }
}

/// LLL reduction with Lovász parameter `delta ∈ (1/4, 1]`, exact throughout.
pub fn lll_reduce(lattice: &IntegerLattice, delta: Rational) -> Result<LllOutput> {
    let (num, den) = (*delta.numer(), *delta.denom());
    if 4 * num <= den || num > den {
        return Err(invalid("delta must lie in (1/4, 1]"));
    }
    let n = lattice.dimension();
    let mut st = Integral {
        b: lattice.basis.clone(),
        h: (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect(),
        d: vec![BigInt::zero(); n + 1],
        lambda: vec![vec![BigInt::zero(); n]; n],
        num: BigInt::from(num),
        den: BigInt::from(den),
    };
    st.d[0] = BigInt::one();
    st.gram_schmidt_row(0)?;
    let (mut k, mut kmax) = (1usize, 0usize);
    while k < n {
        if k > kmax {
            kmax = k;
            st.gram_schmidt_row(k)?;
        }
        st.reduce(k, k - 1);
        if st.lovasz_fails(k) {
            st.swap(k, kmax);
            k = (k - 1).max(1);
            continue;
        }
        for l in (0..k - 1).rev() {
            st.reduce(k, l);
        }
        k += 1;
    }
    Ok(LllOutput { reduced: IntegerLattice { basis: st.b }, transform: st.h })
}

/// An approximation `p̃` to an unknown divisor `p` of `N` with `|p − p̃| ≤ X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighBitsInstance {
    n: BigUint,
    p_tilde: BigUint,
    radius: BigUint,
}

impl HighBitsInstance {
    /// Requires `1 ≤ X ≤ ⌈2·N^{1/4}⌉ + 1`, the widest radius the fallback step uses.
    pub fn new(n: BigUint, p_tilde: BigUint, radius: BigUint) -> Result<Self> {
        if n < BigUint::from(4u32) || radius.is_zero() {
            return Err(invalid("need N ≥ 4 and X ≥ 1"));
        }
        if radius > max_radius(&n) {
            return Err(invalid("radius exceeds the quarter-bits regime"));
        }
        Ok(Self { n, p_tilde, radius })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn p_tilde(&self) -> &BigUint {
        &self.p_tilde
    }

    pub fn radius(&self) -> &BigUint {
        &self.radius
    }
}

/// `⌈2·N^{1/4}⌉ + 1`.
pub fn max_radius(n: &BigUint) -> BigUint {
    // ⌈2·N^{1/4}⌉ = ⌈(16N)^{1/4}⌉
    let m = n * 16u32;
    let r = iroot(&m, 4);
    let ceil = if r.pow(4) == m { r } else { r + 1u32 };
    ceil + 1u32
}

/// Shift parameters: `m` powers of `f` and `t` extra `x`-shifts; dimension `m + t + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeParams {
    pub m: u32,
    pub t: u32,
}

impl Default for LatticeParams {
    fn default() -> Self {
        Self { m: 3, t: 3 }
    }
}

impl LatticeParams {
    pub fn dimension(&self) -> usize {
        (self.m + self.t + 1) as usize
    }

    /// Radius a single reduction handles for a divisor near `√N`, from the
    /// LLL guarantee `‖b₁‖ ≤ 2^{(n−1)/4}·det^{1/n}` against `p^m/√n`.
    pub fn capacity(&self, n: &BigUint) -> BigUint {
        let (m, dim) = (self.m as f64, self.dimension() as f64);
        let log_n = n.bits() as f64 - 1.0 + leading_fraction(n);
        // assume p ≥ √N / 2
        let log_pm = m * (log_n / 2.0 - 1.0);
        let budget = log_pm - 0.5 * dim.log2() - (dim - 1.0) / 4.0 - m * (m + 1.0) / (2.0 * dim) * log_n;
        let log_x = 2.0 * budget / (dim - 1.0) - 1.0;
        if log_x < 0.0 {
            return BigUint::one();
        }
        BigUint::from(2f64.powf(log_x).floor().max(1.0) as u64)
    }
}

fn leading_fraction(n: &BigUint) -> f64 {
    let bits = n.bits();
    let top = if bits > 52 { n >> (bits - 52) } else { n.clone() };
    let v = top.to_f64().unwrap_or(1.0);
    let scale = if bits > 52 { 52 } else { bits };
    (v / 2f64.powi(scale as i32 - 1)).log2()
}

/// Integer polynomial, ascending coefficients.
type Poly = Vec<BigInt>;

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[BigInt]) -> Poly {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn signum(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Integers `k` such that every real root of `p` in `[lo, hi]` lies in `[k, k+1]`.
fn root_brackets(p: &[BigInt], lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut points = vec![lo.clone(), hi.clone()];
    for k in root_brackets(&derivative(&p), lo, hi) {
        let k1: BigInt = &k + 1;
        points.push(k.clone().max(lo.clone()).min(hi.clone()));
        points.push(k1.max(lo.clone()).min(hi.clone()));
    }
    points.sort();
    points.dedup();
    let mut out = Vec::new();
    for w in points.windows(2) {
        let (mut a, mut b) = (w[0].clone(), w[1].clone());
        let (sa, sb) = (signum(&eval(&p, &a)), signum(&eval(&p, &b)));
        if sa == 0 {
            out.push(a.clone());
        }
        if sa * sb >= 0 {
            continue;
        }
        // monotone on [a, b] with a sign change: bisect to a unit bracket
        while &b - &a > BigInt::one() {
            let mid: BigInt = (&a + &b).div_floor(&BigInt::from(2));
            if signum(&eval(&p, &mid)) == sa {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(a);
    }
    if signum(&eval(&p, hi)) == 0 {
        out.push(hi.clone());
    }
    out.sort();
    out.dedup();
    out
}

/// Integer roots of `p` in `[−bound, bound]`.
fn integer_roots(p: &[BigInt], bound: &BigInt) -> Vec<BigInt> {
    let lo = -bound.clone();
    let mut roots: Vec<BigInt> = root_brackets(p, &lo, bound)
        .into_iter()
        .flat_map(|k| [k.clone(), k + 1])
        .filter(|k| k.abs() <= *bound && eval(p, k).is_zero())
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// Rows `N^{m−i}·f^i` (`0 ≤ i ≤ m`) and `x^j·f^m` (`1 ≤ j ≤ t`) for
/// `f = x + center`, evaluated at `x·X`.
fn shift_lattice(n: &BigInt, center: &BigInt, x_bound: &BigInt, params: LatticeParams) -> Result<IntegerLattice> {
    let dim = params.dimension();
    let f = vec![center.clone(), BigInt::one()];
    let mut f_pow = vec![vec![BigInt::one()]];
    for i in 1..=params.m as usize {
        f_pow.push(poly_mul(&f_pow[i - 1], &f));
    }
    let mut rows = Vec::with_capacity(dim);
    for i in 0..=params.m as usize {
        let scale = n.pow(params.m - i as u32);
        rows.push(f_pow[i].iter().map(|c| c * &scale).collect::<Poly>());
    }
    for j in 1..=params.t as usize {
        let mut row = vec![BigInt::zero(); j];
        row.extend(f_pow[params.m as usize].iter().cloned());
        rows.push(row);
    }
    let mut x_pow = BigInt::one();
    let mut powers = Vec::with_capacity(dim);
    for _ in 0..dim {
        powers.push(x_pow.clone());
        x_pow *= x_bound;
    }
    let basis = rows
        .into_iter()
        .map(|mut r| {
            r.resize(dim, BigInt::zero());
            r.iter().zip(&powers).map(|(c, xp)| c * xp).collect()
        })
        .collect();
    IntegerLattice::new(basis)
}

fn divisor_near(n: &BigInt, center: &BigInt, radius: &BigInt, params: LatticeParams) -> Result<Option<BigInt>> {
    let lattice = shift_lattice(n, center, radius, params)?;
    let reduced = lll_reduce(&lattice, Rational::new(3, 4))?.reduced;
    let dim = params.dimension();
    let mut powers = Vec::with_capacity(dim);
    let mut xp = BigInt::one();
    for _ in 0..dim {
        powers.push(xp.clone());
        xp *= radius;
    }
    for row in reduced.basis().iter().take(2) {
        let poly: Poly = row.iter().zip(&powers).map(|(c, xp)| c / xp).collect();
        for x0 in integer_roots(&poly, radius) {
            let cand = center + x0;
            if cand > BigInt::one() && &cand < n && (n % &cand).is_zero() {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

/// Searches `[p̃ − X, p̃ + X]` for a divisor of `N` by lattice reduction,
/// splitting the interval when `X` exceeds what one lattice can reach.
/// Any returned value divides `N` and lies in the interval.
pub fn factor_high_bits(inst: &HighBitsInstance, params: LatticeParams) -> Result<Option<BigUint>> {
    if params.m == 0 || params.dimension() > MAX_DIMENSION {
        return Err(invalid("lattice parameters out of range"));
    }
    let n = to_bigint(&inst.n);
    let center = to_bigint(&inst.p_tilde);
    let radius = to_bigint(&inst.radius);
    let cap = to_bigint(&params.capacity(&inst.n));
    let lo = &center - &radius;
    let hi = &center + &radius;
    let width = &cap * 2 + 1;
    let mut window_center = &lo + &cap;
    loop {
        let found = divisor_near(&n, &window_center, &cap, params)?;
        if let Some(p) = found.filter(|p| *p >= lo && *p <= hi) {
            return Ok(p.to_biguint());
        }
        if &window_center + &cap >= hi {
            return Ok(None);
        }
        window_center += &width;
    }
}

/// Tries `p̃ = k·d − 1` for `k = 1..=B` with radius `⌈2·N^{1/4}⌉ + 1`; the
/// smallest `k` that yields a divisor wins. Returns `(p, q)` with `p < q`.
pub fn corollary_bridge(n: &BigUint, d: &BigUint, b: u64, params: LatticeParams) -> Result<Option<(BigUint, BigUint)>> {
    let candidates = giant_step_coppersmith_prepass(n, d, b)?;
    let radius = max_radius(n);
    let hit = candidates
        .par_iter()
        .map(|pt| -> Result<Option<BigUint>> {
            let inst = HighBitsInstance::new(n.clone(), pt.clone(), radius.clone())?;
            factor_high_bits(&inst, params)
        })
        .find_map_first(|r| match r {
            Ok(Some(p)) => Some(Ok(p)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        });
    match hit {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(p)) => {
            let q = n / &p;
            Ok(Some(if p < q { (p, q) } else { (q, p) }))
        }
    }
}

/// `⌊N^{1/4}⌋`.
pub fn quarter_root(n: &BigUint) -> BigUint {
    n.sqrt().sqrt()
}

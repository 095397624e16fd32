//! Recovering `p` and `q` from a common point order `d` by writing `N` in
//! base `d` and factoring the digit polynomial over the rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigmod::{gcd, to_bigint};
use crate::error::{invalid, Result};

/// A verified base-`d` factorization `N = (d·r_p + t_p)(d·r_q + t_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDDecomposition {
    pub d: BigUint,
    /// `(c2, c1, c0)` with `N = c0 + c1·d + c2·d²`; after a borrow these may be negative.
    pub digits: (BigInt, BigInt, BigInt),
    pub discriminant: BigInt,
    /// The two roots `−t_p/r_p` and `−t_q/r_q` in lowest terms.
    pub roots: (BigRational, BigRational),
    pub r_p: BigInt,
    pub t_p: BigInt,
    pub r_q: BigInt,
    pub t_q: BigInt,
    pub p: BigUint,
    pub q: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistentOutcome {
    /// `p < q`, `p·q = N`. `via` is absent when `gcd(d, N)` already split `N`.
    Factored {
        p: BigUint,
        q: BigUint,
        via: Option<Box<BaseDDecomposition>>,
    },
    NotConsistent,
}

/// Canonical digits `(c2, c1, c0)` of `N` in base `d`; requires `d² ≤ N < d³`.
pub fn digits_base_d(n: &BigUint, d: &BigUint) -> Result<(BigUint, BigUint, BigUint)> {
    if *d < BigUint::from(2u32) {
        return Err(invalid("base must be at least 2"));
    }
    let d2 = d * d;
    if *n < d2 || *n >= &d2 * d {
        return Err(invalid("N needs exactly three base-d digits"));
    }
    let (rest, c0) = n.div_rem(d);
    let (c2, c1) = rest.div_rem(d);
    Ok((c2, c1, c0))
}

/// Factors `c2·x² + c1·x + c0` over `Q` and reads off `p = d·r_p + t_p`,
/// `q = d·r_q + t_q`. Returns `None` unless the result multiplies back to
/// `N` with `p ≠ q`, both above 1. Traces of either sign are accepted.
pub fn solve_digit_quadratic(
    c2: &BigInt,
    c1: &BigInt,
    c0: &BigInt,
    d: &BigUint,
    n: &BigUint,
) -> Option<BaseDDecomposition> {
    if !c2.is_positive() {
        return None;
    }
    let disc = c1 * c1 - BigInt::from(4) * c2 * c0;
    if disc.is_negative() {
        return None;
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return None;
    }
    let two_a = BigInt::from(2) * c2;
    let plus = BigRational::new(-c1 + &s, two_a.clone());
    let minus = BigRational::new(-c1 - &s, two_a);
    let read = |root: &BigRational| -> (BigInt, BigInt) { (root.denom().clone(), -root.numer()) };
    let (r_p, t_p) = read(&plus);
    let (r_q, t_q) = read(&minus);
    let di = to_bigint(d);
    let p = &di * &r_p + &t_p;
    let q = &di * &r_q + &t_q;
    let one = BigInt::one();
    if p <= one || q <= one || p == q || &p * &q != to_bigint(n) {
        return None;
    }
    let (p, q) = (p.to_biguint()?, q.to_biguint()?);
    let mut out = BaseDDecomposition {
        d: d.clone(),
        digits: (c2.clone(), c1.clone(), c0.clone()),
        discriminant: disc,
        roots: (plus, minus),
        r_p,
        t_p,
        r_q,
        t_q,
        p,
        q,
    };
    if out.p > out.q {
        std::mem::swap(&mut out.p, &mut out.q);
        std::mem::swap(&mut out.r_p, &mut out.r_q);
        std::mem::swap(&mut out.t_p, &mut out.t_q);
        out.roots = (out.roots.1.clone(), out.roots.0.clone());
    }
    Some(out)
}

/// Digit vectors reachable from the canonical digits by borrowing one unit
/// between neighbouring positions: `C0 = c0 − k0·d`, `C1 = c1 + k0 − k1·d`,
/// `C2 = c2 + k1` for `k0, k1 ∈ {−1, 0, 1}`, keeping `|C_i| < d`. The
/// canonical vector comes first.
pub fn borrow_sweep(digits: &(BigUint, BigUint, BigUint), d: &BigUint) -> Vec<(BigInt, BigInt, BigInt)> {
    let di = to_bigint(d);
    let (c2, c1, c0) = (to_bigint(&digits.0), to_bigint(&digits.1), to_bigint(&digits.2));
    let mut out = Vec::with_capacity(9);
    for k1 in [0i32, 1, -1] {
        for k0 in [0i32, 1, -1] {
            let (k0, k1) = (BigInt::from(k0), BigInt::from(k1));
            let big0 = &c0 - &k0 * &di;
            let big1 = &c1 + &k0 - &k1 * &di;
            let big2 = &c2 + &k1;
            if [&big0, &big1, &big2].iter().all(|c| c.abs() < di) {
                out.push((big2, big1, big0));
            }
        }
    }
    out
}

/// Base-`d` decomposition with the borrow sweep. A nontrivial `gcd(d, N)`
/// is returned directly.
pub fn consistent_decompose(n: &BigUint, d: &BigUint) -> Result<ConsistentOutcome> {
    if d.is_zero() {
        return Err(invalid("d must be positive"));
    }
    let g = gcd(d, n);
    if !g.is_one() && &g != n {
        let other = n / &g;
        let (p, q) = if g < other { (g, other) } else { (other, g) };
        return Ok(ConsistentOutcome::Factored { p, q, via: None });
    }
    // N may sit just below d² when both traces are negative; the borrow
    // sweep then supplies the leading digit.
    if *d < BigUint::from(2u32) || *n >= d * d * d {
        return Ok(ConsistentOutcome::NotConsistent);
    }
    let (rest, c0) = n.div_rem(d);
    let (c2, c1) = rest.div_rem(d);
    let digits = (c2, c1, c0);
    for (c2, c1, c0) in borrow_sweep(&digits, d) {
        if let Some(dec) = solve_digit_quadratic(&c2, &c1, &c0, d, n) {
            return Ok(ConsistentOutcome::Factored { p: dec.p.clone(), q: dec.q.clone(), via: Some(Box::new(dec)) });
        }
    }
    Ok(ConsistentOutcome::NotConsistent)
}

/// Approximations `k·d − 1`, `k = 1..=b`, for the high-bits fallback.
/// Requires `d·b > √N`.
pub fn giant_step_coppersmith_prepass(n: &BigUint, d: &BigUint, b: u64) -> Result<Vec<BigUint>> {
    let db = d * b;
    if &db * &db <= *n {
        return Err(invalid("d must exceed √N / B"));
    }
    Ok((1..=b).map(|k| d * k - 1u32).collect())
}

/// `d ≥ c·N^{1/4}·max(N^{1/8}, m)` for rational `c = num/den` and `m ≥ 1`,
/// decided with integer powers.
pub fn meets_order_bound(d: &BigUint, n: &BigUint, c: (u64, u64), min_trace: &BigUint) -> bool {
    let (num, den) = (BigUint::from(c.0), BigUint::from(c.1));
    let m = min_trace.max(&BigUint::one()).clone();
    // d ≥ c·N^{3/8}  ⇔  den⁸·d⁸ ≥ num⁸·N³
    let first = (&den * d).pow(8) >= num.pow(8) * n.pow(3);
    // d ≥ c·N^{1/4}·m  ⇔  den⁴·d⁴ ≥ num⁴·N·m⁴
    let second = (&den * d).pow(4) >= num.pow(4) * n * m.pow(4);
    first && second
}

/// `d^b ≤ N^a`, the retry test of the consistency threshold `N^{a/b}`.
pub fn below_threshold(d: &BigUint, n: &BigUint, exponent: (u32, u32)) -> bool {
    d.pow(exponent.1) <= n.pow(exponent.0)
}

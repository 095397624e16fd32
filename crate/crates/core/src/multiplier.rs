//! Hasse windows, smooth multipliers `M_t` and local order recovery.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::bigmod::{sieve_primes, SemiprimeContext};
use crate::curve::{AddOutcome, CurveW, Point};
use crate::error::{invalid, Error, Result};

/// The range `|k| ≤ r + 1 + 2√r` that contains every group order at a prime near `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseWindow {
    r: BigUint,
    bound: BigUint,
}

impl HasseWindow {
    pub fn new(r: BigUint) -> Result<Self> {
        if r < BigUint::from(2u32) {
            return Err(invalid("Hasse window scale must be at least 2"));
        }
        let bound = &r + 1u32 + (&r * 4u32).sqrt();
        Ok(Self { r, bound })
    }

    /// `r = ⌈c·√N⌉` with `c` the context's Hasse scale.
    pub fn from_context(ctx: &SemiprimeContext) -> Result<Self> {
        let c = ctx.hasse_scale();
        let (num, den) = (BigUint::from(*c.numer()), BigUint::from(*c.denom()));
        let radicand = &num * &num * ctx.n();
        let s = radicand.sqrt();
        let r = if &s * &s == radicand { (&s + &den - 1u32) / &den } else { &s / &den + 1u32 };
        Self::new(r.max(BigUint::from(2u32)))
    }

    pub fn r(&self) -> &BigUint {
        &self.r
    }

    pub fn bound(&self) -> &BigUint {
        &self.bound
    }
}

/// Largest `k` with `l^k ≤ bound`.
pub fn hasse_exponent(l: u64, w: &HasseWindow) -> u32 {
    assert!(l >= 2, "exponent base must be at least 2");
    let l = BigUint::from(l);
    let mut k = 0;
    let mut pw = l.clone();
    while pw <= w.bound {
        k += 1;
        pw *= &l;
    }
    k
}

/// `M_t = ∏_{l ≤ t} l^{ν_l(H_r)}` kept in factored form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplier {
    t: u64,
    factors: Vec<(u64, u32)>,
    value: BigUint,
}

impl Multiplier {
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

pub fn build_multiplier(t: u64, w: &HasseWindow) -> Multiplier {
    let factors: Vec<(u64, u32)> =
        sieve_primes(t).into_iter().map(|l| (l, hasse_exponent(l, w))).take_while(|&(_, e)| e > 0).collect();
    let value = factored_value(&factors);
    Multiplier { t, factors, value }
}

pub fn factored_value(factors: &[(u64, u32)]) -> BigUint {
    factors.iter().fold(BigUint::one(), |acc, &(l, e)| acc * num_traits::pow(BigUint::from(l), e as usize))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationReport {
    /// A multiplication step exposed `factor`.
    Separated { factor: BigUint, at_prime: u64, t_min: u64 },
    /// Both local orders equal `order`, given factored.
    NonSeparating { t_min: u64, order: Vec<(u64, u32)> },
    /// `M_t·Q` stayed finite for every `t` tried.
    StillFinite,
}

impl SeparationReport {
    pub fn t_min(&self) -> Option<u64> {
        match self {
            SeparationReport::Separated { t_min, .. } | SeparationReport::NonSeparating { t_min, .. } => Some(*t_min),
            SeparationReport::StillFinite => None,
        }
    }

    pub fn order_value(&self) -> Option<BigUint> {
        match self {
            SeparationReport::NonSeparating { order, .. } => Some(factored_value(order)),
            _ => None,
        }
    }
}

/// Multiplies `Q` by `l^{ν_l}` for primes `l ≤ t_max` in ascending order.
///
/// The prime at which the point first stops being finite is `t_min`. A gcd
/// event there separates; a simultaneous identity hands over to
/// [`recover_order`].
pub fn staged_multiply(curve: &CurveW, q: &Point, t_max: u64, w: &HasseWindow) -> Result<SeparationReport> {
    let mut cur = q.clone();
    for l in sieve_primes(t_max) {
        let nu = hasse_exponent(l, w);
        if nu == 0 {
            break;
        }
        let scalar = BigUint::from(l);
        for _ in 0..nu {
            match curve.scalar_mul(&scalar, &cur) {
                AddOutcome::Point(p) => cur = p,
                AddOutcome::Factor(g) => return Ok(SeparationReport::Separated { factor: g, at_prime: l, t_min: l }),
                AddOutcome::EqualOrders => return recover_order(curve, q, l, w),
            }
        }
    }
    Ok(SeparationReport::StillFinite)
}

/// Recovers the common order `d = ord Q_p = ord Q_q` of a point with
/// `M_B·Q` the identity at both primes, or a factor if the local orders
/// disagree at some `l ≤ B`.
///
/// For each prime `l` the exponent of `l` in `d` is the number of
/// multiplications by `l` that `(M_B / l^{ν_l})·Q` needs to vanish. The
/// cofactor points are produced by splitting the prime list in halves so
/// that each level costs one pass over `log M_B` bits.
pub fn recover_order(curve: &CurveW, q: &Point, b: u64, w: &HasseWindow) -> Result<SeparationReport> {
    let stages: Vec<(u64, u32)> =
        sieve_primes(b).into_iter().map(|l| (l, hasse_exponent(l, w))).take_while(|&(_, e)| e > 0).collect();
    let mut order = Vec::new();
    match descend(curve, q.clone(), &stages, &mut order)? {
        Some((factor, at_prime)) => Ok(SeparationReport::Separated { factor, at_prime, t_min: b }),
        None => {
            order.sort_unstable();
            Ok(SeparationReport::NonSeparating { t_min: b, order })
        }
    }
}

/// `pt` is `(M_B / ∏_{stages} l^ν)·Q`. Pushes `(l, e_l)` for every stage prime
/// dividing the order; returns a factor as soon as one appears.
fn descend(
    curve: &CurveW,
    pt: Point,
    stages: &[(u64, u32)],
    order: &mut Vec<(u64, u32)>,
) -> Result<Option<(BigUint, u64)>> {
    if pt.is_identity() || stages.is_empty() {
        if !pt.is_identity() {
            return Err(Error::Inconsistent("M_B·Q is finite".into()));
        }
        return Ok(None);
    }
    if let [(l, nu)] = stages {
        let scalar = BigUint::from(*l);
        let mut cur = pt;
        for j in 1..=*nu {
            match curve.scalar_mul(&scalar, &cur) {
                AddOutcome::Point(p) => cur = p,
                AddOutcome::Factor(g) => return Ok(Some((g, *l))),
                AddOutcome::EqualOrders => {
                    order.push((*l, j));
                    return Ok(None);
                }
            }
        }
        return Err(Error::Inconsistent(format!("M_B·Q is finite (prime {l})")));
    }
    let (left, right) = stages.split_at(stages.len() / 2);
    for (keep, cofactor) in [(left, right), (right, left)] {
        let next = match curve.scalar_mul(&factored_value(cofactor), &pt) {
            AddOutcome::Point(p) => p,
            AddOutcome::EqualOrders => Point::Identity,
            AddOutcome::Factor(g) => return Ok(Some((g, keep[0].0))),
        };
        if let Some(found) = descend(curve, next, keep, order)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// `ν_l(m)` for a machine-sized prime.
pub fn valuation_big(m: &BigUint, l: u64) -> u32 {
    let mut m = m.clone();
    let mut e = 0;
    while (&m % l).to_u64() == Some(0) && m > BigUint::one() {
        m /= l;
        e += 1;
    }
    e
}

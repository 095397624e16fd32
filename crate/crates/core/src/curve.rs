//! Elliptic curves over `Z_N` and their group law.
//!
//! Points are affine or the global identity. Every addition that would need a
//! non-unit denominator is classified instead of computed: a proper gcd is a
//! factor of `N`, a denominator vanishing at both primes means the sum is the
//! identity everywhere.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bigmod::{add_mod, gcd, inverse_or_factor, mul_mod, neg_mod, sub_mod, InverseOutcome, SemiprimeContext};
use crate::error::{invalid, Error, Result};
use crate::field::{legendre, small_prime, SmallCurve, SmallPoint};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Identity,
    Affine { x: BigUint, y: BigUint },
}

impl Point {
    pub fn affine(x: impl Into<BigUint>, y: impl Into<BigUint>) -> Self {
        Point::Affine { x: x.into(), y: y.into() }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Point::Identity)
    }

    pub fn coords(&self) -> Option<(&BigUint, &BigUint)> {
        match self {
            Point::Identity => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }

    /// Reduction modulo a prime divisor.
    pub fn reduce(&self, r: u64) -> SmallPoint {
        self.coords().map(|(x, y)| (residue_u64(x, r), residue_u64(y, r)))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Identity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

fn residue_u64(a: &BigUint, r: u64) -> u64 {
    let v = a % r;
    v.iter_u64_digits().next().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddOutcome {
    Point(Point),
    /// A proper divisor of `N`.
    Factor(BigUint),
    /// The result is the identity modulo both primes.
    EqualOrders,
}

/// `y² = (x−b1)(x−b2)(x+b1+b2)`: full rational 2-torsion, even order at every good prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveE2 {
    n: BigUint,
    b1: BigUint,
    b2: BigUint,
}

impl CurveE2 {
    /// Rejects curves whose roots collide modulo a prime of `N`. When the
    /// collision happens at only one prime the error carries that divisor.
    pub fn new(b1: BigUint, b2: BigUint, n: &BigUint) -> Result<Self> {
        let c = Self::new_unchecked(b1, b2, n);
        let b3 = c.third_root();
        let prod = mul_mod(&mul_mod(&sub_mod(&c.b1, &c.b2, n), &sub_mod(&c.b1, &b3, n), n), &sub_mod(&c.b2, &b3, n), n);
        check_unit(&prod, n, "repeated root")?;
        Ok(c)
    }

    pub fn new_unchecked(b1: BigUint, b2: BigUint, n: &BigUint) -> Self {
        Self { b1: b1 % n, b2: b2 % n, n: n.clone() }
    }

    pub fn b1(&self) -> &BigUint {
        &self.b1
    }

    pub fn b2(&self) -> &BigUint {
        &self.b2
    }

    pub fn modulus(&self) -> &BigUint {
        &self.n
    }

    /// `−(b1 + b2)`.
    pub fn third_root(&self) -> BigUint {
        neg_mod(&add_mod(&self.b1, &self.b2, &self.n), &self.n)
    }

    pub fn rhs(&self, x: &BigUint) -> BigUint {
        let n = &self.n;
        let f = mul_mod(&sub_mod(x, &self.b1, n), &sub_mod(x, &self.b2, n), n);
        mul_mod(&f, &sub_mod(x, &self.third_root(), n), n)
    }

    /// Expands the monic cubic; the zero root sum leaves no `x²` term, so
    /// points carry over unchanged.
    pub fn to_weierstrass(&self) -> CurveW {
        let n = &self.n;
        let sum = add_mod(&self.b1, &self.b2, n);
        let prod = mul_mod(&self.b1, &self.b2, n);
        let a = sub_mod(&prod, &mul_mod(&sum, &sum, n), n);
        let b = mul_mod(&prod, &sum, n);
        CurveW { n: n.clone(), a, b }
    }

    /// Root form of the quadratic twist by `tau`: roots scale by `tau`.
    pub fn twist(&self, tau: &BigUint) -> Result<CurveE2> {
        unit_or_err(tau, &self.n)?;
        let n = &self.n;
        Ok(Self::new_unchecked(mul_mod(&self.b1, tau, n), mul_mod(&self.b2, tau, n), n))
    }

    pub fn local(&self, r: u64) -> Result<SmallCurve> {
        SmallCurve::from_roots(r, residue_u64(&self.b1, r), residue_u64(&self.b2, r))
    }
}

/// Short Weierstrass `y² = x³ + a·x + b` over `Z_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveW {
    n: BigUint,
    a: BigUint,
    b: BigUint,
}

impl CurveW {
    /// Requires `4a³ + 27b²` to be a unit.
    pub fn new(a: BigUint, b: BigUint, n: &BigUint) -> Result<Self> {
        let c = Self::new_unchecked(a, b, n);
        check_unit(&c.discriminant(), n, "singular cubic")?;
        Ok(c)
    }

    /// No discriminant check; the group law still runs but is only
    /// meaningful formula-by-formula.
    pub fn new_unchecked(a: BigUint, b: BigUint, n: &BigUint) -> Self {
        Self { a: a % n, b: b % n, n: n.clone() }
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn modulus(&self) -> &BigUint {
        &self.n
    }

    pub fn discriminant(&self) -> BigUint {
        let n = &self.n;
        let a3 = mul_mod(&mul_mod(&self.a, &self.a, n), &self.a, n);
        let b2 = mul_mod(&self.b, &self.b, n);
        add_mod(&mul_mod(&BigUint::from(4u32), &a3, n), &mul_mod(&BigUint::from(27u32), &b2, n), n)
    }

    pub fn rhs(&self, x: &BigUint) -> BigUint {
        let n = &self.n;
        let x2a = add_mod(&mul_mod(x, x, n), &self.a, n);
        add_mod(&mul_mod(&x2a, x, n), &self.b, n)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Identity => true,
            Point::Affine { x, y } => mul_mod(y, y, &self.n) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Identity => Point::Identity,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: neg_mod(y, &self.n) },
        }
    }

    pub fn add(&self, lhs: &Point, rhs: &Point) -> AddOutcome {
        let n = &self.n;
        let ((xp, yp), (xq, yq)) = match (lhs, rhs) {
            (Point::Identity, other) | (other, Point::Identity) => return AddOutcome::Point(other.clone()),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => ((x1, y1), (x2, y2)),
        };
        let lambda = match inverse_or_factor(&sub_mod(xq, xp, n), n) {
            InverseOutcome::Unit(inv) => mul_mod(&sub_mod(yq, yp, n), &inv, n),
            InverseOutcome::Factor(g) => return AddOutcome::Factor(g),
            InverseOutcome::Zero => {
                // Same x at both primes: either negatives or equal at each.
                let g2 = gcd(&add_mod(yp, yq, n), n);
                if &g2 == n {
                    return AddOutcome::EqualOrders;
                }
                if !g2.is_one() {
                    return AddOutcome::Factor(g2);
                }
                match inverse_or_factor(&add_mod(yp, yp, n), n) {
                    InverseOutcome::Unit(inv) => {
                        let three_x2 = mul_mod(&BigUint::from(3u32), &mul_mod(xp, xp, n), n);
                        mul_mod(&add_mod(&three_x2, &self.a, n), &inv, n)
                    }
                    InverseOutcome::Factor(g) => return AddOutcome::Factor(g),
                    InverseOutcome::Zero => return AddOutcome::EqualOrders,
                }
            }
        };
        let x3 = sub_mod(&sub_mod(&mul_mod(&lambda, &lambda, n), xp, n), xq, n);
        let y3 = sub_mod(&mul_mod(&lambda, &sub_mod(xp, &x3, n), n), yp, n);
        AddOutcome::Point(Point::Affine { x: x3, y: y3 })
    }

    pub fn double(&self, pt: &Point) -> AddOutcome {
        self.add(pt, pt)
    }

    /// Left-to-right double-and-add. Stops at the first revealed factor; an
    /// identity in the middle of the chain is just the neutral element.
    /// `EqualOrders` means `m·P` is the identity at both primes.
    pub fn scalar_mul(&self, m: &BigUint, pt: &Point) -> AddOutcome {
        if m.is_zero() {
            return AddOutcome::Point(Point::Identity);
        }
        let mut acc = Point::Identity;
        for i in (0..m.bits()).rev() {
            acc = match self.double(&acc) {
                AddOutcome::Point(p) => p,
                AddOutcome::EqualOrders => Point::Identity,
                f @ AddOutcome::Factor(_) => return f,
            };
            if m.bit(i) {
                acc = match self.add(&acc, pt) {
                    AddOutcome::Point(p) => p,
                    AddOutcome::EqualOrders => Point::Identity,
                    f @ AddOutcome::Factor(_) => return f,
                };
            }
        }
        match acc {
            Point::Identity => AddOutcome::EqualOrders,
            p => AddOutcome::Point(p),
        }
    }

    pub fn scalar_mul_u64(&self, m: u64, pt: &Point) -> AddOutcome {
        self.scalar_mul(&BigUint::from(m), pt)
    }

    /// `y² = x³ + τ²a·x + τ³b`.
    pub fn twist(&self, tau: &BigUint) -> Result<CurveW> {
        unit_or_err(tau, &self.n)?;
        let n = &self.n;
        let t2 = mul_mod(tau, tau, n);
        let t3 = mul_mod(&t2, tau, n);
        Ok(Self::new_unchecked(mul_mod(&t2, &self.a, n), mul_mod(&t3, &self.b, n), n))
    }

    pub fn local(&self, r: u64) -> Result<SmallCurve> {
        SmallCurve::new(r, residue_u64(&self.a, r), residue_u64(&self.b, r))
    }

    /// Oracle mode: componentwise ground truth at `p` and `q`.
    pub fn oracle_reduce(&self, pt: &Point, ctx: &SemiprimeContext) -> Result<OracleReduction> {
        let (p, q) = ctx.require_oracle()?;
        Ok(OracleReduction { p: self.local_data(pt, small_prime(p)?)?, q: self.local_data(pt, small_prime(q)?)? })
    }

    fn local_data(&self, pt: &Point, r: u64) -> Result<LocalReduction> {
        let curve = self.local(r)?;
        let point = pt.reduce(r);
        if !curve.contains(point) {
            return Err(invalid(format!("point is not on the curve mod {r}")));
        }
        let group_order = curve.group_order();
        let point_order = curve.point_order(point, group_order);
        Ok(LocalReduction {
            prime: r,
            curve,
            point,
            group_order,
            trace: r as i64 + 1 - group_order as i64,
            point_order,
        })
    }
}

/// Reduction of a curve and point modulo one prime of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReduction {
    pub prime: u64,
    pub curve: SmallCurve,
    pub point: SmallPoint,
    /// `E_r = #E(F_r)`
    pub group_order: u64,
    /// `a_r = r + 1 − E_r`
    pub trace: i64,
    pub point_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReduction {
    pub p: LocalReduction,
    pub q: LocalReduction,
}

impl OracleReduction {
    pub fn locals(&self) -> [&LocalReduction; 2] {
        [&self.p, &self.q]
    }
}

/// Oracle mode: the least `τ ≤ max_tau` whose Legendre symbols at `(p, q)`
/// are `signs`, so that `a_r(E^τ) = signs_r · a_r(E)`.
pub fn twist_for_signs(signs: (i8, i8), max_tau: u64, ctx: &SemiprimeContext) -> Result<Option<u64>> {
    let (p, q) = ctx.require_oracle()?;
    let (p, q) = (small_prime(p)?, small_prime(q)?);
    Ok((1..=max_tau).find(|&t| legendre(t, p) == signs.0 && legendre(t, q) == signs.1))
}

fn check_unit(v: &BigUint, n: &BigUint, what: &str) -> Result<()> {
    let g = gcd(v, n);
    if g.is_one() {
        Ok(())
    } else if &g == n {
        Err(Error::DegenerateCurve(format!("{what} modulo every prime")))
    } else {
        Err(Error::FactorRevealed(g))
    }
}

fn unit_or_err(tau: &BigUint, n: &BigUint) -> Result<()> {
    match inverse_or_factor(tau, n) {
        InverseOutcome::Unit(_) => Ok(()),
        InverseOutcome::Factor(g) => Err(Error::FactorRevealed(g)),
        InverseOutcome::Zero => Err(invalid("twist parameter is zero mod N")),
    }
}

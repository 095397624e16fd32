//! Curves over small prime fields `F_r` with word-sized arithmetic.
//!
//! This is the ground-truth side of oracle mode: reductions of `Z_N` points,
//! exact group orders and exact point orders. Nothing on the attack path uses it.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// Largest prime the oracle will count points over.
pub const ORACLE_PRIME_LIMIT: u64 = 1 << 40;
const EXHAUSTIVE_COUNT_LIMIT: u64 = 100_000;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a % p, p - b % p, p)
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Legendre symbol for an odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli–Shanks square root; `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Trial-division factorization, ascending primes with exponents.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    factor_u64(n).len() == 1 && factor_u64(n)[0].1 == 1
}

pub fn valuation(mut m: u64, l: u64) -> u32 {
    if m == 0 {
        return 0;
    }
    let mut e = 0;
    while m.is_multiple_of(l) {
        m /= l;
        e += 1;
    }
    e
}

/// Quadratic character table for one prime, for repeated point counting.
#[derive(Debug, Clone)]
pub struct QrTable {
    p: u64,
    chi: Vec<i8>,
}

impl QrTable {
    pub fn new(p: u64) -> Self {
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for s in 1..p {
            chi[mul_mod(s, s, p) as usize] = 1;
        }
        Self { p, chi }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn chi(&self, a: u64) -> i8 {
        self.chi[(a % self.p) as usize]
    }
}

/// `None` is the point at infinity.
pub type SmallPoint = Option<(u64, u64)>;

/// `y² = x³ + a·x + b` over `F_p`, `p > 3` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallCurve {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl SmallCurve {
    pub fn new(p: u64, a: u64, b: u64) -> Result<Self> {
        if p <= 3 || p > ORACLE_PRIME_LIMIT {
            return Err(invalid(format!("prime {p} outside oracle range")));
        }
        let c = Self { p, a: a % p, b: b % p };
        if c.discriminant() == 0 {
            return Err(Error::DegenerateCurve(format!("singular mod {p}")));
        }
        Ok(c)
    }

    /// Root form `(x−b1)(x−b2)(x+b1+b2)`.
    pub fn from_roots(p: u64, b1: u64, b2: u64) -> Result<Self> {
        let s = add_mod(b1, b2, p);
        let prod = mul_mod(b1, b2, p);
        let a = sub_mod(prod, mul_mod(s, s, p), p);
        let b = mul_mod(prod, s, p);
        Self::new(p, a, b)
    }

    pub fn discriminant(&self) -> u64 {
        let p = self.p;
        let a3 = mul_mod(mul_mod(self.a, self.a, p), self.a, p);
        add_mod(mul_mod(4, a3, p), mul_mod(27, mul_mod(self.b, self.b, p), p), p)
    }

    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x = x % p;
        add_mod(mul_mod(add_mod(mul_mod(x, x, p), self.a, p), x, p), self.b, p)
    }

    pub fn contains(&self, pt: SmallPoint) -> bool {
        match pt {
            None => true,
            Some((x, y)) => mul_mod(y, y, self.p) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: SmallPoint) -> SmallPoint {
        pt.map(|(x, y)| (x, (self.p - y) % self.p))
    }

    pub fn add(&self, lhs: SmallPoint, rhs: SmallPoint) -> SmallPoint {
        let p = self.p;
        let (x1, y1) = match lhs {
            None => return rhs,
            Some(v) => v,
        };
        let (x2, y2) = match rhs {
            None => return lhs,
            Some(v) => v,
        };
        let lambda = if x1 == x2 {
            if add_mod(y1, y2, p) == 0 {
                return None;
            }
            let num = add_mod(mul_mod(3, mul_mod(x1, x1, p), p), self.a, p);
            mul_mod(num, inv_mod(mul_mod(2, y1, p), p), p)
        } else {
            mul_mod(sub_mod(y2, y1, p), inv_mod(sub_mod(x2, x1, p), p), p)
        };
        let x3 = sub_mod(sub_mod(mul_mod(lambda, lambda, p), x1, p), x2, p);
        let y3 = sub_mod(mul_mod(lambda, sub_mod(x1, x3, p), p), y1, p);
        Some((x3, y3))
    }

    pub fn mul(&self, k: u128, pt: SmallPoint) -> SmallPoint {
        let mut acc = None;
        let mut base = pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn mul_big(&self, k: &BigUint, pt: SmallPoint) -> SmallPoint {
        let mut acc = None;
        for i in (0..k.bits()).rev() {
            acc = self.add(acc, acc);
            if k.bit(i) {
                acc = self.add(acc, pt);
            }
        }
        acc
    }

    /// All affine points, in `x` order.
    pub fn points(&self) -> Vec<(u64, u64)> {
        let mut pts = Vec::new();
        for x in 0..self.p {
            let f = self.rhs(x);
            if let Some(y) = sqrt_mod(f, self.p) {
                pts.push((x, y));
                if y != 0 {
                    pts.push((x, self.p - y));
                }
            }
        }
        pts
    }

    /// `#E(F_p)`: character sum below the exhaustive limit, baby-step giant-step above.
    pub fn group_order(&self) -> u64 {
        if self.p <= EXHAUSTIVE_COUNT_LIMIT {
            return self.count_exhaustive();
        }
        self.order_bsgs().unwrap_or_else(|| self.count_exhaustive())
    }

    /// Character-sum count using a precomputed table for this prime.
    pub fn count_with(&self, table: &QrTable) -> u64 {
        debug_assert_eq!(table.prime(), self.p);
        let mut total: i64 = self.p as i64 + 1;
        for x in 0..self.p {
            total += table.chi(self.rhs(x)) as i64;
        }
        total as u64
    }

    pub fn count_exhaustive(&self) -> u64 {
        let mut total: i64 = self.p as i64 + 1;
        for x in 0..self.p {
            total += legendre(self.rhs(x), self.p) as i64;
        }
        total as u64
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> (u64, u64) {
        loop {
            let x = rng.gen_range(0..self.p);
            if let Some(y) = sqrt_mod(self.rhs(x), self.p) {
                return (x, y);
            }
        }
    }

    /// Accumulates the lcm of random point orders until it has a unique
    /// multiple inside the Hasse interval.
    fn order_bsgs(&self) -> Option<u64> {
        let p = self.p;
        let width = (2.0 * (p as f64).sqrt()).ceil() as u64 + 2;
        let lo = (p + 1).saturating_sub(width);
        let hi = p + 1 + width;
        let mut rng = ChaCha8Rng::seed_from_u64(p ^ self.a.rotate_left(17) ^ self.b.rotate_left(41));
        let mut l: u64 = 1;
        for _ in 0..40 {
            let pt = Some(self.random_point(&mut rng));
            let m0 = self.find_annihilator(pt, lo, hi)?;
            let ord = self.point_order(pt, m0);
            l = lcm(l, ord);
            let first = lo.div_ceil(l) * l;
            if first <= hi && first + l > hi {
                return Some(first);
            }
        }
        None
    }

    fn find_annihilator(&self, pt: SmallPoint, lo: u64, hi: u64) -> Option<u64> {
        let w = hi - lo;
        let s = ((w + 1) as f64).sqrt().ceil() as u64 + 1;
        let mut baby: HashMap<u64, u64> = HashMap::new();
        let mut cur: SmallPoint = None;
        for j in 0..s {
            if let Some((x, _)) = cur {
                baby.entry(x).or_insert(j);
            }
            cur = self.add(cur, pt);
        }
        let giant = self.neg(self.mul(s as u128, pt));
        let mut target = self.neg(self.mul(lo as u128, pt));
        for i in 0..=s {
            let candidates: Vec<u64> = match target {
                None => vec![i * s],
                Some((x, _)) => match baby.get(&x) {
                    Some(&j) => vec![i * s + j, (i * s).saturating_sub(j)],
                    None => vec![],
                },
            };
            for k in candidates {
                let m = lo + k;
                if m > 0 && self.mul(m as u128, pt).is_none() {
                    return Some(m);
                }
            }
            target = self.add(target, giant);
        }
        None
    }

    /// Order of `pt` given any multiple `m` of it.
    pub fn point_order(&self, pt: SmallPoint, m: u64) -> u64 {
        let mut ord = m;
        for (l, e) in factor_u64(m) {
            for _ in 0..e {
                if self.mul((ord / l) as u128, pt).is_none() {
                    ord /= l;
                } else {
                    break;
                }
            }
        }
        ord
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Narrowing helper for oracle primes.
pub fn small_prime(p: &BigUint) -> Result<u64> {
    match p.to_u64() {
        Some(v) if v <= ORACLE_PRIME_LIMIT => Ok(v),
        _ => Err(Error::OracleTooLarge(p.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_all_residues() {
        for p in [5u64, 7, 13, 17, 41, 97, 1009, 65537] {
            for a in 0..p.min(2000) {
                match sqrt_mod(a, p) {
                    Some(s) => assert_eq!(mul_mod(s, s, p), a),
                    None => assert_eq!(legendre(a, p), -1),
                }
            }
        }
    }

    #[test]
    fn group_order_counts_points() {
        for p in [5u64, 7, 11, 13, 101, 1009] {
            for a in 0..4 {
                for b in 1..4 {
                    let Ok(c) = SmallCurve::new(p, a, b) else { continue };
                    assert_eq!(c.group_order(), c.points().len() as u64 + 1);
                }
            }
        }
    }

    #[test]
    fn bsgs_agrees_with_character_sum() {
        for (p, a, b) in [(100_003u64, 2, 3), (100_019, 5, 7), (1_000_003, 1, 1), (1_959_583, 1594604, 450302)] {
            let c = SmallCurve::new(p, a, b).unwrap();
            assert_eq!(c.order_bsgs().unwrap(), c.count_exhaustive(), "p={p}");
        }
    }

    #[test]
    fn worked_example_local_orders() {
        // E_p = 7·279936 at both primes of 3839985129719
        for p in [1_959_583u64, 1_959_593] {
            let c = SmallCurve::new(p, 1594604, 450302).unwrap();
            let e = c.group_order();
            assert_eq!(e, 1_959_552);
            let pt = Some((540525859015 % p, 1621377667969 % p));
            assert!(c.contains(pt));
            assert_eq!(c.point_order(pt, e), 279_936);
        }
    }

    #[test]
    fn factoring_small() {
        assert_eq!(factor_u64(720), vec![(2, 4), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1), vec![]);
        assert!(is_prime_u64(1_959_583));
        assert!(!is_prime_u64(1_959_585));
    }
}

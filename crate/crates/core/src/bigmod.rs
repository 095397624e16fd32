//! Multiprecision residue arithmetic modulo `N`.
//!
//! Inversion never panics on a non-unit: it reports the shared divisor instead,
//! which is how every factor in this crate is eventually found.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

pub type Rational = Ratio<u64>;

/// The modulus under attack plus the shape parameters of the Hasse window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiprimeContext {
    n: BigUint,
    theta: Rational,
    hasse_scale_c: Rational,
    oracle: Option<(BigUint, BigUint)>,
}

impl SemiprimeContext {
    /// Requires `N` odd, coprime to 6 and larger than 1.
    pub fn new(n: BigUint) -> Result<Self> {
        if n <= BigUint::one() {
            return Err(invalid("modulus must exceed 1"));
        }
        if !gcd(&n, &BigUint::from(6u32)).is_one() {
            return Err(invalid("modulus must be coprime to 6"));
        }
        Ok(Self { n, theta: Rational::new(4, 1), hasse_scale_c: Rational::one(), oracle: None })
    }

    /// Attaches the known factorization (test mode). The pair is stored with `p < q`.
    pub fn with_oracle(mut self, p: BigUint, q: BigUint) -> Result<Self> {
        let three = BigUint::from(3u32);
        if &p * &q != self.n {
            return Err(invalid("oracle factors do not multiply to N"));
        }
        if p == q || p <= three || q <= three {
            return Err(invalid("oracle factors must be distinct and exceed 3"));
        }
        self.oracle = Some(if p < q { (p, q) } else { (q, p) });
        Ok(self)
    }

    pub fn with_hasse_scale(mut self, c: Rational) -> Result<Self> {
        if c.is_zero() {
            return Err(invalid("Hasse scale must be positive"));
        }
        self.hasse_scale_c = c;
        Ok(self)
    }

    pub fn with_theta(mut self, theta: Rational) -> Result<Self> {
        if theta <= Rational::one() {
            return Err(invalid("balance bound theta must exceed 1"));
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn theta(&self) -> Rational {
        self.theta
    }

    pub fn hasse_scale(&self) -> Rational {
        self.hasse_scale_c
    }

    pub fn oracle(&self) -> Option<(&BigUint, &BigUint)> {
        self.oracle.as_ref().map(|(p, q)| (p, q))
    }

    pub(crate) fn require_oracle(&self) -> Result<(&BigUint, &BigUint)> {
        self.oracle().ok_or(Error::OracleRequired)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InverseOutcome {
    Unit(BigUint),
    /// `gcd(a, N)`, strictly between 1 and `N`.
    Factor(BigUint),
    Zero,
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Reduces a signed value into `[0, n)`.
pub fn reduce(a: &BigInt, n: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, n.clone());
    a.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
}

pub fn add_mod(a: &BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    (a + b) % n
}

pub fn sub_mod(a: &BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    let a = a % n;
    let b = b % n;
    if a >= b {
        a - b
    } else {
        n - (b - a)
    }
}

pub fn mul_mod(a: &BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    (a * b) % n
}

pub fn neg_mod(a: &BigUint, n: &BigUint) -> BigUint {
    let a = a % n;
    if a.is_zero() {
        a
    } else {
        n - a
    }
}

/// Inverts `a` modulo `n`, or reports why it cannot.
pub fn inverse_or_factor(a: &BigUint, n: &BigUint) -> InverseOutcome {
    let a = a % n;
    if a.is_zero() {
        return InverseOutcome::Zero;
    }
    let egcd = BigInt::from(a).extended_gcd(&BigInt::from(n.clone()));
    let g = egcd.gcd.magnitude().clone();
    if g.is_one() {
        InverseOutcome::Unit(reduce(&egcd.x, n))
    } else {
        InverseOutcome::Factor(g)
    }
}

/// Jacobi symbol `(a/n)` by binary quadratic reciprocity; `n` is never factored.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_even() || n.is_zero() {
        return Err(invalid("Jacobi symbol needs an odd positive modulus"));
    }
    let mut a = reduce(a, n);
    let mut n = n.clone();
    let mut sign = 1i8;
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            let n_mod_8 = (&n % 8u32).to_u32().unwrap();
            if twos % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
                sign = -sign;
            }
        }
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    Ok(if n.is_one() { sign } else { 0 })
}

pub fn jacobi_unsigned(a: &BigUint, n: &BigUint) -> Result<i8> {
    jacobi(&BigInt::from(a.clone()), n)
}

/// Exact integer square root: `Some(s)` with `s² = a`, else `None`.
pub fn isqrt_exact(a: &BigUint) -> Option<BigUint> {
    let s = a.sqrt();
    (&s * &s == *a).then_some(s)
}

/// `⌊a^(1/k)⌋`.
pub fn iroot(a: &BigUint, k: u32) -> BigUint {
    a.nth_root(k)
}

/// The unique residue mod `N` congruent to `a_p` mod `p` and `a_q` mod `q`.
pub fn crt_combine(a_p: &BigUint, a_q: &BigUint, ctx: &SemiprimeContext) -> Result<BigUint> {
    let (p, q) = ctx.require_oracle()?;
    crt_pair(a_p, p, a_q, q)
}

pub(crate) fn crt_pair(a_p: &BigUint, p: &BigUint, a_q: &BigUint, q: &BigUint) -> Result<BigUint> {
    let n = p * q;
    let p_inv = match inverse_or_factor(&(p % q), q) {
        InverseOutcome::Unit(v) => v,
        _ => return Err(invalid("CRT moduli must be coprime")),
    };
    // x = a_p + p·((a_q − a_p)·p⁻¹ mod q)
    let lift = mul_mod(&sub_mod(a_q, &(a_p % p), q), &p_inv, q);
    Ok((a_p % p + p * lift) % n)
}

/// Primes up to `bound`, ascending (sieve of Eratosthenes).
pub fn sieve_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let len = bound as usize + 1;
    let mut composite = vec![false; len];
    let mut primes = Vec::new();
    for i in 2..len {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j < len {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

pub(crate) fn to_bigint(a: &BigUint) -> BigInt {
    BigInt::from(a.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn brute_legendre(a: u64, p: u64) -> i8 {
        let a = a % p;
        if a == 0 {
            return 0;
        }
        if (1..p).any(|s| s * s % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&big(12), &big(18)), big(6));
        assert_eq!(gcd(&big(1), &big(3839985129719)), big(1));
        // M_B of the worked example is 2^20·3^12 and N is odd and not divisible by 3.
        assert_eq!(gcd(&big(557256278016), &big(3839985129719)), big(1));
    }

    #[test]
    fn inverse_examples() {
        let n = big(15);
        assert_eq!(inverse_or_factor(&big(2), &n), InverseOutcome::Unit(big(8)));
        assert_eq!(inverse_or_factor(&big(5), &n), InverseOutcome::Factor(big(5)));
        assert_eq!(inverse_or_factor(&big(0), &n), InverseOutcome::Zero);
    }

    #[test]
    fn jacobi_examples() {
        let n = big(15);
        assert_eq!(jacobi(&BigInt::from(1), &n).unwrap(), 1);
        assert_eq!(jacobi(&BigInt::from(3), &n).unwrap(), 0);
        // (2/3)(2/5) from enumerated squares mod 3 and mod 5
        let expected = brute_legendre(2, 3) * brute_legendre(2, 5);
        assert_eq!(expected, 1);
        assert_eq!(jacobi(&BigInt::from(2), &n).unwrap(), expected);
        assert_eq!(jacobi(&BigInt::from(-1), &big(7)).unwrap(), -1);
        assert!(jacobi(&BigInt::from(2), &big(16)).is_err());
    }

    #[test]
    fn jacobi_matches_squares_for_small_primes() {
        for &p in sieve_primes(600).iter().skip(1) {
            for a in 0..p {
                assert_eq!(jacobi(&BigInt::from(a), &big(p)).unwrap(), brute_legendre(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt_exact(&big(4900)), Some(big(70)));
        assert_eq!(isqrt_exact(&big(0)), Some(big(0)));
        assert_eq!(isqrt_exact(&big(2)), None);
    }

    #[test]
    fn crt_examples() {
        let ctx = SemiprimeContext::new(big(35)).unwrap().with_oracle(big(5), big(7)).unwrap();
        assert_eq!(crt_combine(&big(1), &big(1), &ctx).unwrap(), big(1));
        // frozen from scanning 0..35
        let scan = |ap: u64, aq: u64| (0..35u64).find(|x| x % 5 == ap && x % 7 == aq).unwrap();
        assert_eq!(scan(0, 1), 15);
        assert_eq!(scan(2, 3), 17);
        assert_eq!(crt_combine(&big(0), &big(1), &ctx).unwrap(), big(15));
        assert_eq!(crt_combine(&big(2), &big(3), &ctx).unwrap(), big(17));
        let plain = SemiprimeContext::new(big(35)).unwrap();
        assert_eq!(crt_combine(&big(1), &big(1), &plain), Err(Error::OracleRequired));
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(sieve_primes(3), vec![2, 3]);
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        let trial = (2..=100u64).filter(|&n| (2..n).all(|d| n % d != 0)).count();
        assert_eq!(trial, 25);
        assert_eq!(sieve_primes(100).len(), trial);
    }

    #[test]
    fn context_rejects_bad_moduli() {
        assert!(SemiprimeContext::new(big(36)).is_err());
        assert!(SemiprimeContext::new(big(33)).is_err());
        assert!(SemiprimeContext::new(big(35)).unwrap().with_oracle(big(5), big(5)).is_err());
        assert!(SemiprimeContext::new(big(35)).unwrap().with_oracle(big(1), big(35)).is_err());
    }

    proptest! {
        #[test]
        fn jacobi_is_multiplicative(a in 0u64..1_000_000, b in 0u64..1_000_000, n in 1u64..500_000, m in 1u64..500) {
            let n = big(2 * n + 1);
            let m = big(2 * m + 1);
            let prod = jacobi(&BigInt::from(a * b), &n).unwrap();
            prop_assert_eq!(prod, jacobi(&BigInt::from(a), &n).unwrap() * jacobi(&BigInt::from(b), &n).unwrap());
            let nm = &n * &m;
            prop_assert_eq!(
                jacobi(&BigInt::from(a), &nm).unwrap(),
                jacobi(&BigInt::from(a), &n).unwrap() * jacobi(&BigInt::from(a), &m).unwrap()
            );
        }

        #[test]
        fn unit_inverse_is_inverse(a in 0u64..1_000_000_007, n in prop::sample::select(vec![35u64, 143, 1009 * 2003, 3839985129719])) {
            let n = big(n);
            if let InverseOutcome::Unit(v) = inverse_or_factor(&big(a), &n) {
                prop_assert!(mul_mod(&big(a), &v, &n).is_one());
            }
        }

        #[test]
        fn crt_round_trip(ap in 0u64..1009, aq in 0u64..2003) {
            let ctx = SemiprimeContext::new(big(1009 * 2003)).unwrap().with_oracle(big(1009), big(2003)).unwrap();
            let x = crt_combine(&big(ap), &big(aq), &ctx).unwrap();
            prop_assert_eq!(&x % 1009u32, big(ap));
            prop_assert_eq!(&x % 2003u32, big(aq));
        }

        #[test]
        fn isqrt_of_squares(hi in any::<u64>(), lo in any::<u64>()) {
            let s: BigUint = (big(hi) << 64u32) + big(lo);
            let sq = &s * &s;
            prop_assert_eq!(isqrt_exact(&sq), Some(s.clone()));
            if !s.is_zero() {
                prop_assert_eq!(isqrt_exact(&(sq + 1u32)), None);
            }
        }
    }
}

//! Smooth-part statistics over short intervals around `x + 1`, and the
//! `L(α, x)` comparison table.

use std::io::Write;

use num_bigint::BigUint;
use num_integer::Roots;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bigmod::{sieve_primes, Rational};
use crate::error::{invalid, Result};
use crate::field::SmallCurve;

/// Largest interval `count_v` will sieve.
pub const SIEVE_BUDGET: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 14;

/// Largest `B`-smooth divisor of `m`.
pub fn smooth_part(m: u64, b: u64) -> u64 {
    assert!(m >= 1, "smooth part of zero");
    let mut rest = m;
    let mut l = 2;
    while l <= b && l * l <= rest {
        while rest.is_multiple_of(l) {
            rest /= l;
        }
        l += if l == 2 { 1 } else { 2 };
    }
    if rest > 1 && rest <= b {
        rest = 1;
    }
    m / rest
}

/// `s ≥ m^β` with `β = a/c`, as `s^c ≥ m^a`.
pub fn meets_exponent(s: u64, m: u64, beta: Rational) -> bool {
    let (a, c) = (*beta.numer() as u32, *beta.denom() as u32);
    BigUint::from(s).pow(c) >= BigUint::from(m).pow(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessSample {
    pub x: u64,
    pub b: u64,
    pub beta: Rational,
    pub v: u64,
    pub total: u64,
    pub f: f64,
}

impl SmoothnessSample {
    /// At least three qualifying integers.
    pub fn side_condition(&self) -> bool {
        self.v >= 3
    }
}

/// The integers `m` with `|m − (x+1)| ≤ ⌊√x⌋`.
pub fn interval(x: u64) -> (u64, u64) {
    let s = x.sqrt();
    (x + 1 - s, x + 1 + s)
}

/// Counts `m` in [`interval`] with `s_B(m) ≥ m^β`.
pub fn count_v(x: u64, b: u64, beta: Rational) -> Result<SmoothnessSample> {
    if x < 16 {
        return Err(invalid("x must be at least 16"));
    }
    if beta > Rational::from_integer(1) {
        return Err(invalid("beta must lie in [0, 1]"));
    }
    let (lo, hi) = interval(x);
    let total = hi - lo + 1;
    if total > SIEVE_BUDGET {
        return Err(invalid("interval exceeds the sieve budget"));
    }
    let primes = sieve_primes(b);
    let segments: Vec<u64> = (lo..=hi).step_by(SEGMENT as usize).collect();
    let v = segments
        .par_iter()
        .map(|&start| {
            let end = (start + SEGMENT - 1).min(hi);
            let mut rest: Vec<u64> = (start..=end).collect();
            for &l in &primes {
                let first = start.div_ceil(l) * l;
                let mut m = first;
                while m <= end {
                    let slot = &mut rest[(m - start) as usize];
                    while (*slot).is_multiple_of(l) {
                        *slot /= l;
                    }
                    m += l;
                }
            }
            rest.iter()
                .enumerate()
                .filter(|(i, r)| {
                    let m = start + *i as u64;
                    meets_exponent(m / **r, m, beta)
                })
                .count() as u64
        })
        .sum();
    Ok(SmoothnessSample { x, b, beta, v, total, f: v as f64 / total as f64 })
}

/// `L(α, x) = exp(α·√(ln x · ln ln x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LFunctionPoint {
    pub alpha: f64,
    pub x: f64,
    pub value: f64,
}

pub fn l_function(alpha: f64, x: f64) -> LFunctionPoint {
    let ln = x.ln();
    LFunctionPoint { alpha, x, value: (alpha * (ln * ln.ln()).sqrt()).exp() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureRow {
    pub sample: SmoothnessSample,
    pub theta: f64,
    /// `L(α', x)⁻¹` with `α' = (1 − θ(1 − β)) / (2α)`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureTable {
    pub alpha: f64,
    pub rows: Vec<ConjectureRow>,
    /// Per β, the least grid θ for which every scale passes.
    pub least_theta: Vec<(Rational, Option<f64>)>,
}

pub fn conjecture_table(x_list: &[u64], alpha: f64, betas: &[Rational], theta_grid: &[f64]) -> Result<ConjectureTable> {
    if !(alpha > 0.0) {
        return Err(invalid("alpha must be positive"));
    }
    if x_list.is_empty() || betas.is_empty() || theta_grid.is_empty() {
        return Err(invalid("empty scale, beta or theta list"));
    }
    if theta_grid.iter().any(|t| !(*t >= 0.0)) {
        return Err(invalid("theta must be nonnegative"));
    }
    let mut rows = Vec::new();
    let mut least_theta = Vec::new();
    for &beta in betas {
        let samples: Vec<SmoothnessSample> = x_list
            .iter()
            .map(|&x| count_v(x, l_function(alpha, x as f64).value.floor() as u64, beta))
            .collect::<Result<_>>()?;
        let beta_f = *beta.numer() as f64 / *beta.denom() as f64;
        let mut least = None;
        for &theta in theta_grid {
            let mut all = true;
            for s in &samples {
                let exponent = (1.0 - theta * (1.0 - beta_f)) / (2.0 * alpha);
                let bound = 1.0 / l_function(exponent, s.x as f64).value;
                let pass = s.f >= bound;
                all &= pass;
                rows.push(ConjectureRow { sample: s.clone(), theta, bound, pass });
            }
            if all && least.is_none_or(|l: f64| theta < l) {
                least = Some(theta);
            }
        }
        least_theta.push((beta, least));
    }
    Ok(ConjectureTable { alpha, rows, least_theta })
}

pub const CSV_HEADER: &str = "x,B,beta,v,total,f,theta,bound,pass,v_ge_3";

pub fn write_csv<W: Write>(table: &ConjectureTable, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &table.rows {
        let s = &r.sample;
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{},{:.6e},{},{}",
            s.x,
            s.b,
            s.beta,
            s.v,
            s.total,
            s.f,
            r.theta,
            r.bound,
            r.pass,
            s.side_condition()
        )?;
    }
    Ok(())
}

/// Fraction of random curves over `F_r` whose group order `E` has `s_B(E) ≥ E^β`.
pub fn sample_curve_orders(r: u64, samples: usize, b: u64, beta: Rational, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    let mut drawn = 0;
    while drawn < samples {
        let Ok(curve) = SmallCurve::new(r, rng.gen_range(0..r), rng.gen_range(0..r)) else { continue };
        let e = curve.group_order();
        hits += meets_exponent(smooth_part(e, b), e, beta) as usize;
        drawn += 1;
    }
    Ok(hits as f64 / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::factor_u64;
    use proptest::prelude::*;

    #[test]
    fn smooth_part_examples() {
        assert_eq!(smooth_part(720, 3), 144);
        assert_eq!(smooth_part(7, 2), 1);
        assert_eq!(smooth_part(1, 5), 1);
        assert_eq!(smooth_part(49, 7), 49);
    }

    #[test]
    fn beta_zero_counts_everything() {
        let s = count_v(10_001, 5, Rational::from_integer(0)).unwrap();
        assert_eq!(s.v, s.total);
        assert_eq!(s.total, 2 * 100 + 1);
    }

    #[test]
    fn ten_smooth_near_ten_thousand() {
        let s = count_v(10_000, 10, Rational::from_integer(1)).unwrap();
        let (lo, hi) = interval(10_000);
        let expect = (lo..=hi).filter(|&m| factor_u64(m).iter().all(|&(l, _)| l <= 10)).count() as u64;
        assert_eq!(s.v, expect);
        assert_eq!(s.total, 201);
    }

    #[test]
    fn monotone_in_b() {
        let beta = Rational::new(3, 4);
        let mut last = 0;
        for b in [2, 5, 11, 50, 200, 1000] {
            let v = count_v(100_000, b, beta).unwrap().v;
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(count_v(10, 5, Rational::from_integer(1)).is_err());
        assert!(count_v(100, 5, Rational::new(3, 2)).is_err());
    }

    #[test]
    fn l_function_above_one() {
        assert!(l_function(0.5, 16.0).value > 1.0);
        let p = l_function(1.0, 1e6);
        assert!((p.value - (13.8155f64 * 13.8155f64.ln()).sqrt().exp()).abs() < 1e-2);
    }

    #[test]
    fn single_row_table() {
        let t = conjecture_table(&[10_000], 1.0, &[Rational::from_integer(1)], &[0.0]).unwrap();
        assert_eq!(t.rows.len(), 1);
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    }

    #[test]
    fn curve_order_sampling_runs() {
        let f = sample_curve_orders(1009, 50, 50, Rational::new(3, 4), 1).unwrap();
        assert!((0.0..=1.0).contains(&f));
    }

    proptest! {
        #[test]
        fn smooth_part_properties(m in 1u64..1_000_000_000, b in 2u64..500) {
            let s = smooth_part(m, b);
            prop_assert_eq!(m % s, 0);
            prop_assert!(factor_u64(s).iter().all(|&(l, _)| l <= b));
            prop_assert!(factor_u64(m / s).iter().all(|&(l, _)| l > b));
        }
    }
}

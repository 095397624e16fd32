//! The end-to-end attack loop, its trial log, oracle-side pair
//! classification and the worked-example replay.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bigmod::{gcd, Rational, SemiprimeContext};
use crate::bigmod::{sieve_primes, to_bigint};
use crate::consistent::{
    below_threshold, consistent_decompose, digits_base_d, meets_order_bound, solve_digit_quadratic, ConsistentOutcome,
};
use crate::curve::{CurveW, Point};
use crate::error::{invalid, Error, Result};
use crate::field::{factor_u64, valuation};
use crate::multiplier::{build_multiplier, hasse_exponent, staged_multiply, HasseWindow, SeparationReport};
use crate::smallroots::{corollary_bridge, LatticeParams};
use crate::triples::{generate_triple, TripleDraw, DEFAULT_MAX_DRAWS};

/// A fixed `(E, Q)` used in place of a random draw for trial 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectedPair {
    pub curve: CurveW,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Ascending smoothness bounds; `trial_budget` trials are spent on each.
    pub b_schedule: Vec<u64>,
    pub trial_budget: usize,
    pub seed: u64,
    pub hasse_scale_c: Rational,
    /// Retry when `d ≤ N^{a/b}`.
    pub consistency_threshold_exponent: (u32, u32),
    /// Number of multiples `k·d` tried by the lattice fallback.
    pub coppersmith_cofactor_bound: u64,
    pub workers: usize,
    pub max_draws: usize,
    pub lattice: LatticeParams,
    /// Record wall-clock milliseconds per trial; off gives reproducible logs.
    pub timing: bool,
    pub injected: Option<InjectedPair>,
}

/// `2000·4^k` up to `10⁶`.
pub fn default_schedule(b_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut b = 2000u64;
    while b <= b_max {
        out.push(b);
        b *= 4;
    }
    if out.is_empty() {
        out.push(b_max.max(2));
    }
    out
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            b_schedule: default_schedule(1_000_000),
            trial_budget: 50,
            seed: 0,
            hasse_scale_c: Rational::one(),
            consistency_threshold_exponent: (3, 8),
            coppersmith_cofactor_bound: 32,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            max_draws: DEFAULT_MAX_DRAWS,
            lattice: LatticeParams::default(),
            timing: true,
            injected: None,
        }
    }
}

impl PipelineConfig {
    fn validate(&self) -> Result<()> {
        if self.b_schedule.is_empty() || self.b_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("B schedule must be nonempty and strictly ascending"));
        }
        if self.b_schedule[0] < 2 {
            return Err(invalid("smoothness bounds start at 2"));
        }
        if self.trial_budget == 0 || self.workers == 0 || self.max_draws == 0 || self.coppersmith_cofactor_bound == 0 {
            return Err(invalid("budgets and worker count must be positive"));
        }
        let (a, b) = self.consistency_threshold_exponent;
        if b == 0 || a > b {
            return Err(invalid("threshold exponent must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn total_trials(&self) -> u64 {
        (self.b_schedule.len() * self.trial_budget) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrialOutcome {
    /// A gcd split `N` during generation or multiplication.
    Separated,
    /// The base-`d` digits split `N`.
    Consistent,
    /// The lattice fallback found a divisor near some `k·d`.
    CoppersmithHit,
    /// `M_B·Q` stayed finite at both primes.
    StillFinite,
    /// A common order `d` was found but did not lead to a factor.
    NotConsistent,
}

impl TrialOutcome {
    pub fn is_success(self) -> bool {
        matches!(self, TrialOutcome::Separated | TrialOutcome::Consistent | TrialOutcome::CoppersmithHit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSummary {
    pub x: BigUint,
    pub y: BigUint,
    pub b1: BigUint,
    pub b2: BigUint,
}

fn decimal<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_str_radix(10)),
        None => s.serialize_none(),
    }
}

/// One line of the trial log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub b: u64,
    #[serde(skip)]
    pub triple: Option<TripleSummary>,
    pub t_min: Option<u64>,
    pub outcome: TrialOutcome,
    #[serde(serialize_with = "decimal")]
    pub d: Option<BigUint>,
    #[serde(serialize_with = "decimal")]
    pub factor: Option<BigUint>,
    pub ms: u64,
}

impl TrialRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trial records always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorOutcome {
    /// `p < q`, `p·q = N`, found by trial `trial` (0 for the square check).
    Factored {
        p: BigUint,
        q: BigUint,
        trial: u64,
    },
    Exhausted {
        trials: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub outcome: FactorOutcome,
    pub log: Vec<TrialRecord>,
}

impl RunReport {
    /// Trials per outcome, in declaration order of [`TrialOutcome`].
    pub fn tally(&self) -> [(TrialOutcome, usize); 5] {
        use TrialOutcome::*;
        [Separated, Consistent, CoppersmithHit, StillFinite, NotConsistent]
            .map(|o| (o, self.log.iter().filter(|r| r.outcome == o).count()))
    }
}

fn split(n: &BigUint, g: &BigUint) -> Option<(BigUint, BigUint)> {
    if g.is_zero() || g.is_one() || g >= n || !(n % g).is_zero() {
        return None;
    }
    let other = n / g;
    debug_assert_eq!(g * &other, *n);
    Some(if *g < other { (g.clone(), other) } else { (other, g.clone()) })
}

struct Attempt {
    t_min: Option<u64>,
    outcome: TrialOutcome,
    d: Option<BigUint>,
    factor: Option<BigUint>,
}

impl Attempt {
    fn plain(outcome: TrialOutcome) -> Self {
        Self { t_min: None, outcome, d: None, factor: None }
    }
}

fn attack_pair(
    n: &BigUint,
    curve: &CurveW,
    q: &Point,
    b: u64,
    w: &HasseWindow,
    cfg: &PipelineConfig,
) -> Result<Attempt> {
    let (d, t_min) = match staged_multiply(curve, q, b, w)? {
        SeparationReport::StillFinite => return Ok(Attempt::plain(TrialOutcome::StillFinite)),
        SeparationReport::Separated { factor, t_min, .. } => {
            let outcome =
                if split(n, &factor).is_some() { TrialOutcome::Separated } else { TrialOutcome::NotConsistent };
            let factor = (outcome == TrialOutcome::Separated).then_some(factor);
            return Ok(Attempt { t_min: Some(t_min), outcome, d: None, factor });
        }
        report @ SeparationReport::NonSeparating { t_min, .. } => (report.order_value().expect("order present"), t_min),
    };
    let mut attempt =
        Attempt { t_min: Some(t_min), outcome: TrialOutcome::NotConsistent, d: Some(d.clone()), factor: None };
    if below_threshold(&d, n, cfg.consistency_threshold_exponent) {
        return Ok(attempt);
    }
    if let ConsistentOutcome::Factored { p, .. } = consistent_decompose(n, &d)? {
        attempt.outcome = TrialOutcome::Consistent;
        attempt.factor = Some(p);
        return Ok(attempt);
    }
    let db = &d * cfg.coppersmith_cofactor_bound;
    if &db * &db > *n {
        if let Some((p, _)) = corollary_bridge(n, &d, cfg.coppersmith_cofactor_bound, cfg.lattice)? {
            attempt.outcome = TrialOutcome::CoppersmithHit;
            attempt.factor = Some(p);
        }
    }
    Ok(attempt)
}

fn run_trial(ctx: &SemiprimeContext, w: &HasseWindow, cfg: &PipelineConfig, id: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let n = ctx.n();
    let b = cfg.b_schedule[((id - 1) / cfg.trial_budget as u64) as usize];
    let (triple, attempt) = match (&cfg.injected, id) {
        (Some(pair), 1) => (None, attack_pair(n, &pair.curve, &pair.point, b, w, cfg)?),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(id);
            match generate_triple(n, &mut rng, cfg.max_draws)?.outcome {
                TripleDraw::Factor(g) => (None, Attempt { factor: Some(g), ..Attempt::plain(TrialOutcome::Separated) }),
                TripleDraw::Triple(t) => {
                    let summary = TripleSummary { x: t.x.clone(), y: t.y.clone(), b1: t.b1.clone(), b2: t.b2.clone() };
                    (Some(summary), attack_pair(n, &t.weierstrass(), &t.point(), b, w, cfg)?)
                }
            }
        }
    };
    if let Some(f) = &attempt.factor {
        if split(n, f).is_none() {
            return Err(Error::Inconsistent(format!("unverified factor {f}")));
        }
    }
    Ok(TrialRecord {
        trial: id,
        b,
        triple,
        t_min: attempt.t_min,
        outcome: attempt.outcome,
        d: attempt.d,
        factor: attempt.factor,
        ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

/// Runs the attack until a verified factorization appears or the budget is spent.
///
/// Trial `i` draws from its own stream of the seeded generator, and trials
/// are evaluated in batches whose log is cut after the lowest successful
/// id, so the log does not depend on `workers`.
pub fn run_algorithm_a(n: &BigUint, cfg: &PipelineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let ctx = SemiprimeContext::new(n.clone())?.with_hasse_scale(cfg.hasse_scale_c)?;
    let root = n.sqrt();
    if &root * &root == *n {
        return Ok(RunReport {
            outcome: FactorOutcome::Factored { p: root.clone(), q: root, trial: 0 },
            log: Vec::new(),
        });
    }
    let w = HasseWindow::from_context(&ctx)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let total = cfg.total_trials();
    let batch = (cfg.workers as u64 * 2).max(1);
    let mut log = Vec::new();
    let mut next = 1u64;
    while next <= total {
        let ids: Vec<u64> = (next..=total.min(next + batch - 1)).collect();
        let records: Vec<TrialRecord> =
            pool.install(|| ids.par_iter().map(|&id| run_trial(&ctx, &w, cfg, id)).collect::<Result<_>>())?;
        for rec in records {
            let hit = rec.outcome.is_success().then(|| rec.factor.clone()).flatten();
            let trial = rec.trial;
            log.push(rec);
            if let Some((p, q)) = hit.and_then(|f| split(n, &f)) {
                return Ok(RunReport { outcome: FactorOutcome::Factored { p, q, trial }, log });
            }
        }
        next += batch;
    }
    Ok(RunReport { outcome: FactorOutcome::Exhausted { trials: total }, log })
}

/// Which route makes `(E, Q)` usable at smoothness bound `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClause {
    /// `max(t_min, l_min) ≤ B`: multiplication by `M_B` separates.
    Separating,
    /// `t_min ≤ B < l_min`, equal orders large enough for base-`d` recovery.
    Consistent,
    /// `gcd(M_B, E_r) ≥ E_r / B` at some prime.
    LargeSmoothPart,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub clause: Option<PairClause>,
    pub t_min: Option<u64>,
    pub l_min: Option<u64>,
    pub orders: (u64, u64),
    pub group_orders: (u64, u64),
    pub traces: (i64, i64),
}

/// Smallest prime `t` with `order | M_t`, if any.
fn order_t_min(order: u64, w: &HasseWindow) -> Option<u64> {
    let factors = factor_u64(order);
    if factors.iter().any(|&(l, e)| e > hasse_exponent(l, w)) {
        return None;
    }
    Some(factors.last().map_or(2, |&(l, _)| l))
}

/// Oracle mode: evaluates the three usability clauses from ground truth.
pub fn classify_pair(curve: &CurveW, q: &Point, b: u64, ctx: &SemiprimeContext) -> Result<PairClassification> {
    let red = curve.oracle_reduce(q, ctx)?;
    let w = HasseWindow::from_context(ctx)?;
    let (op, oq) = (red.p.point_order, red.q.point_order);
    let t_min = [order_t_min(op, &w), order_t_min(oq, &w)].into_iter().flatten().min();
    let l_min = if op == oq {
        None
    } else {
        let mut primes: Vec<u64> = factor_u64(op).into_iter().chain(factor_u64(oq)).map(|(l, _)| l).collect();
        primes.sort_unstable();
        primes.into_iter().find(|&l| valuation(op, l) != valuation(oq, l))
    };
    let n = ctx.n();
    let c = ctx.hasse_scale();
    let min_trace = red.p.trace.unsigned_abs().min(red.q.trace.unsigned_abs());
    let m_b = build_multiplier(b, &w);
    let clause = match (t_min, l_min) {
        (Some(t), Some(l)) if t.max(l) <= b => Some(PairClause::Separating),
        (Some(t), None)
            if t <= b
                && meets_order_bound(&BigUint::from(op), n, (*c.numer(), *c.denom()), &BigUint::from(min_trace)) =>
        {
            Some(PairClause::Consistent)
        }
        _ => None,
    }
    .or_else(|| {
        [red.p.group_order, red.q.group_order]
            .into_iter()
            .any(|e| gcd(m_b.value(), &BigUint::from(e)) * b >= BigUint::from(e))
            .then_some(PairClause::LargeSmoothPart)
    });
    Ok(PairClassification {
        clause,
        t_min,
        l_min,
        orders: (op, oq),
        group_orders: (red.p.group_order, red.q.group_order),
        traces: (red.p.trace, red.q.trace),
    })
}

pub const EXAMPLE_N: u64 = 3_839_985_129_719;
pub const EXAMPLE_CURVE: (u64, u64) = (1_594_604, 450_302);
pub const EXAMPLE_POINT: (u64, u64) = (540_525_859_015, 1_621_377_667_969);

/// Scale `c` whose Hasse window reproduces the worked example's `M_B = 2²⁰·3¹²`.
pub fn example_hasse_scale() -> Rational {
    Rational::new(3, 4)
}

pub fn example_pair() -> InjectedPair {
    let n = BigUint::from(EXAMPLE_N);
    InjectedPair {
        curve: CurveW::new_unchecked(BigUint::from(EXAMPLE_CURVE.0), BigUint::from(EXAMPLE_CURVE.1), &n),
        point: Point::affine(EXAMPLE_POINT.0, EXAMPLE_POINT.1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptLine {
    pub label: &'static str,
    pub expected: String,
    pub got: String,
}

impl TranscriptLine {
    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoTranscript {
    pub lines: Vec<TranscriptLine>,
}

impl DemoTranscript {
    pub fn all_match(&self) -> bool {
        self.lines.iter().all(TranscriptLine::ok)
    }
}

/// Replays the worked example `N = 3839985129719` step by step.
pub fn demo_example() -> Result<DemoTranscript> {
    let n = BigUint::from(EXAMPLE_N);
    let ctx = SemiprimeContext::new(n.clone())?.with_hasse_scale(example_hasse_scale())?;
    let w = HasseWindow::from_context(&ctx)?;
    let pair = example_pair();
    let mut lines = Vec::new();
    let mut push =
        |label, expected: &str, got: String| lines.push(TranscriptLine { label, expected: expected.into(), got });

    push("on curve", "true", pair.curve.contains(&pair.point).to_string());
    let report = staged_multiply(&pair.curve, &pair.point, 3, &w)?;
    let t_min = report.t_min().unwrap_or(0);
    push("t_min", "3", t_min.to_string());
    push("M_B", "557256278016", build_multiplier(3, &w).value().to_string());
    let d = report.order_value().unwrap_or_default();
    push("d", "279936", d.to_string());
    let order = match &report {
        SeparationReport::NonSeparating { order, .. } => {
            order.iter().map(|(l, e)| format!("{l}^{e}")).collect::<Vec<_>>().join("·")
        }
        other => format!("{other:?}"),
    };
    push("d factored", "2^7·3^7", order);
    let digits = digits_base_d(&n, &d).map(|(a, b, c)| format!("({a}, {b}, {c})"));
    push("digits (c2, c1, c0)", "(49, 504, 1271)", digits.unwrap_or_else(|e| e.to_string()));
    let (c2, c1, c0) = digits_base_d(&n, &d).unwrap_or_default();
    let dec = solve_digit_quadratic(&to_bigint(&c2), &to_bigint(&c1), &to_bigint(&c0), &d, &n);
    let show = |f: &dyn Fn(&crate::consistent::BaseDDecomposition) -> String| dec.as_ref().map_or("none".into(), f);
    push("discriminant", "4900", show(&|x| x.discriminant.to_string()));
    push("roots", "-31/7, -41/7", show(&|x| format!("{}, {}", x.roots.0, x.roots.1)));
    push("r_p, r_q", "7, 7", show(&|x| format!("{}, {}", x.r_p, x.r_q)));
    push("t_p, t_q", "31, 41", show(&|x| format!("{}, {}", x.t_p, x.t_q)));
    push("p", "1959583", show(&|x| x.p.to_string()));
    push("q", "1959593", show(&|x| x.q.to_string()));
    Ok(DemoTranscript { lines })
}

/// `P⁺(m)`, the largest prime factor of a machine-sized integer.
pub fn largest_prime_factor(m: u64) -> Option<u64> {
    factor_u64(m).last().map(|&(l, _)| l)
}

/// Bits of `M_B`, the scalar length one trial multiplies by.
pub fn multiplier_bits(b: u64, w: &HasseWindow) -> u64 {
    sieve_primes(b).into_iter().map(|l| (hasse_exponent(l, w) as f64 * (l as f64).log2()).ceil() as u64).sum()
}

//! Property checks for limit operators.
//!
//! Each check instantiates one defining property of a limit (constants,
//! inequality, monotone-bounded convergence, sandwich) or one of its
//! consequences (inequality theorem, uniqueness) as a universally quantified
//! statement over a seeded corpus of nets, and reports every counterexample it
//! finds. A clean report means "no violation in N cases", not a proof.
//!
//! Corpus functions are written in terms of the proximity `u` of a point to
//! the direction's limit (`|x - x0|`, `1/x`, `1/n`, mesh), so the same corpus
//! runs on every direction.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::directions::Direction;
use crate::envelope::{estimate_limit, mb_limit, EstimateConfig, LimitVerdict};
use crate::net::{ultimately_less, Net, Point, UltimatelyVerdict};

/// Chain steps probed when a check needs `f < g` or `f <= g` on a tail.
pub const HARNESS_BUDGET: usize = 200;

/// A mapping from nets on a direction to limit verdicts.
pub trait LimitOperator: Send + Sync {
    fn name(&self) -> String;
    fn tolerance(&self) -> f64;
    fn evaluate(&self, f: &Net, dir: &Direction) -> LimitVerdict;
}

fn verdict_or_inconclusive(r: crate::error::Result<LimitVerdict>) -> LimitVerdict {
    r.unwrap_or_else(|e| LimitVerdict::Inconclusive(e.to_string()))
}

/// The envelope estimator.
#[derive(Debug, Clone, Default)]
pub struct EnvelopeOperator {
    pub cfg: EstimateConfig,
}

impl LimitOperator for EnvelopeOperator {
    fn name(&self) -> String {
        "envelope".into()
    }

    fn tolerance(&self) -> f64 {
        self.cfg.tolerance
    }

    fn evaluate(&self, f: &Net, dir: &Direction) -> LimitVerdict {
        verdict_or_inconclusive(estimate_limit(f, dir, &self.cfg).map(|(v, _)| v))
    }
}

/// Monotone-first estimator: nets that are monotone on a tail get the
/// supremum/infimum route of [`mb_limit`], everything else falls back to the
/// envelope estimate.
#[derive(Debug, Clone, Default)]
pub struct MonotoneFirstOperator {
    pub cfg: EstimateConfig,
}

impl LimitOperator for MonotoneFirstOperator {
    fn name(&self) -> String {
        "monotone-first".into()
    }

    fn tolerance(&self) -> f64 {
        self.cfg.tolerance
    }

    fn evaluate(&self, f: &Net, dir: &Direction) -> LimitVerdict {
        match mb_limit(f, dir, &self.cfg) {
            Ok(v) => v,
            Err(crate::error::LimitError::NotMonotone { .. }) => {
                verdict_or_inconclusive(estimate_limit(f, dir, &self.cfg).map(|(v, _)| v))
            }
            Err(e) => LimitVerdict::Inconclusive(e.to_string()),
        }
    }
}

/// Deliberately wrong operators used to show each check can fail.
pub mod stubs {
    use super::*;

    /// Reports every limit shifted by `shift`.
    pub struct ShiftedOperator {
        pub inner: EnvelopeOperator,
        pub shift: f64,
    }

    impl LimitOperator for ShiftedOperator {
        fn name(&self) -> String {
            format!("shifted({})", self.shift)
        }
        fn tolerance(&self) -> f64 {
            self.inner.tolerance()
        }
        fn evaluate(&self, f: &Net, dir: &Direction) -> LimitVerdict {
            match self.inner.evaluate(f, dir) {
                LimitVerdict::Converges(l) => LimitVerdict::Converges(l + self.shift),
                other => other,
            }
        }
    }

    /// Reports every limit with its sign flipped, which swaps the order of
    /// any two limits.
    pub struct MirroredOperator {
        pub inner: EnvelopeOperator,
    }

    impl LimitOperator for MirroredOperator {
        fn name(&self) -> String {
            "mirrored".into()
        }
        fn tolerance(&self) -> f64 {
            self.inner.tolerance()
        }
        fn evaluate(&self, f: &Net, dir: &Direction) -> LimitVerdict {
            match self.inner.evaluate(f, dir) {
                LimitVerdict::Converges(l) => LimitVerdict::Converges(-l),
                other => other,
            }
        }
    }

    /// Never decides.
    pub struct InconclusiveOperator;

    impl LimitOperator for InconclusiveOperator {
        fn name(&self) -> String {
            "inconclusive".into()
        }
        fn tolerance(&self) -> f64 {
            1e-9
        }
        fn evaluate(&self, _f: &Net, _dir: &Direction) -> LimitVerdict {
            LimitVerdict::Inconclusive("stub".into())
        }
    }

    /// Inconclusive for nets whose label contains `needle`, the envelope
    /// estimate otherwise.
    pub struct BlindOperator {
        pub inner: EnvelopeOperator,
        pub needle: &'static str,
    }

    impl LimitOperator for BlindOperator {
        fn name(&self) -> String {
            format!("blind({})", self.needle)
        }
        fn tolerance(&self) -> f64 {
            self.inner.tolerance()
        }
        fn evaluate(&self, f: &Net, dir: &Direction) -> LimitVerdict {
            if f.label().contains(self.needle) {
                LimitVerdict::Inconclusive("stub blind spot".into())
            } else {
                self.inner.evaluate(f, dir)
            }
        }
    }
}

/// Function shapes in terms of the proximity `u > 0`; the limit is the value
/// as `u -> 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Constant(f64),
    /// `a + b u`
    Affine { a: f64, b: f64 },
    /// `a + b u + c u^2`
    Quadratic { a: f64, b: f64, c: f64 },
    /// `u (a + b u) / u`
    Removable { a: f64, b: f64 },
    /// `a + b u / (1 + u)`
    Saturating { a: f64, b: f64 },
    /// `a + b atan(u)`
    Arctan { a: f64, b: f64 },
    /// `b / u`
    Unbounded { b: f64 },
    /// `a + b sin(1/u)`
    Oscillator { a: f64, b: f64 },
    /// `a + b u sin(1/u)`
    Damped { a: f64, b: f64 },
    /// `a + b u |sin(1/u)|`
    AbsDamped { a: f64, b: f64 },
    Sum(Box<Family>, Box<Family>),
    Product(Box<Family>, Box<Family>),
}

impl Family {
    pub fn value(&self, u: f64) -> f64 {
        match self {
            Family::Constant(c) => *c,
            Family::Affine { a, b } => a + b * u,
            Family::Quadratic { a, b, c } => a + u * (b + c * u),
            Family::Removable { a, b } => (u * (a + b * u)) / u,
            Family::Saturating { a, b } => a + b * u / (1.0 + u),
            Family::Arctan { a, b } => a + b * u.atan(),
            Family::Unbounded { b } => b / u,
            Family::Oscillator { a, b } => a + b * (1.0 / u).sin(),
            Family::Damped { a, b } => a + b * u * (1.0 / u).sin(),
            Family::AbsDamped { a, b } => a + b * u * (1.0 / u).sin().abs(),
            Family::Sum(f, g) => f.value(u) + g.value(u),
            Family::Product(f, g) => f.value(u) * g.value(u),
        }
    }

    /// The analytic limit as `u -> 0`, when it exists.
    pub fn limit(&self) -> Option<f64> {
        match self {
            Family::Constant(c) => Some(*c),
            Family::Affine { a, .. }
            | Family::Quadratic { a, .. }
            | Family::Removable { a, .. }
            | Family::Saturating { a, .. }
            | Family::Arctan { a, .. }
            | Family::Damped { a, .. }
            | Family::AbsDamped { a, .. } => Some(*a),
            Family::Unbounded { .. } | Family::Oscillator { .. } => None,
            Family::Sum(f, g) => Some(f.limit()? + g.limit()?),
            Family::Product(f, g) => match (f.limit(), g.limit()) {
                (Some(a), Some(b)) => Some(a * b),
                (Some(z), None) if z == 0.0 && g.is_bounded() => Some(0.0),
                (None, Some(z)) if z == 0.0 && f.is_bounded() => Some(0.0),
                _ => None,
            },
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Family::Unbounded { .. } => false,
            Family::Sum(f, g) | Family::Product(f, g) => f.is_bounded() && g.is_bounded(),
            _ => true,
        }
    }

    /// Monotone in `u` on all of `u > 0`.
    pub fn is_monotone(&self) -> bool {
        matches!(
            self,
            Family::Constant(_)
                | Family::Affine { .. }
                | Family::Removable { .. }
                | Family::Saturating { .. }
                | Family::Arctan { .. }
                | Family::Unbounded { .. }
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Constant(c) => write!(f, "{c}"),
            Family::Affine { a, b } => write!(f, "{a} + {b}u"),
            Family::Quadratic { a, b, c } => write!(f, "{a} + {b}u + {c}u^2"),
            Family::Removable { a, b } => write!(f, "u({a} + {b}u)/u"),
            Family::Saturating { a, b } => write!(f, "{a} + {b}u/(1+u)"),
            Family::Arctan { a, b } => write!(f, "{a} + {b}atan(u)"),
            Family::Unbounded { b } => write!(f, "{b}/u"),
            Family::Oscillator { a, b } => write!(f, "{a} + {b}sin(1/u)"),
            Family::Damped { a, b } => write!(f, "{a} + {b}u sin(1/u)"),
            Family::AbsDamped { a, b } => write!(f, "{a} + {b}u|sin(1/u)|"),
            Family::Sum(l, r) => write!(f, "[{l}] + [{r}]"),
            Family::Product(l, r) => write!(f, "[{l}] * [{r}]"),
        }
    }
}

/// A corpus member: a shape plus a report label.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusFn {
    pub label: String,
    pub family: Family,
}

impl CorpusFn {
    pub fn new(family: Family) -> Self {
        CorpusFn {
            label: family.to_string(),
            family,
        }
    }

    pub fn tagged(family: Family, tag: &str) -> Self {
        CorpusFn {
            label: format!("{tag}: {family}"),
            family,
        }
    }

    /// The net `x -> family(proximity(x))` on `dir`.
    pub fn net(&self, dir: &Direction) -> Net {
        let family = self.family.clone();
        let d = dir.clone();
        Net::new(self.label.clone(), move |p: &Point| family.value(d.proximity(p)))
    }
}

/// Seeded generator of corpus functions. Each family of draws gets its own
/// stream so that checks do not perturb each other.
#[derive(Debug, Clone)]
pub struct FunctionCorpus {
    seed: u64,
}

impl FunctionCorpus {
    pub fn new(seed: u64) -> Self {
        FunctionCorpus { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ stream)
    }

    /// Limits on a quarter grid in [-3, 3], so distinct limits differ by at
    /// least 0.25.
    fn level(rng: &mut ChaCha8Rng) -> f64 {
        rng.gen_range(-12i32..=12) as f64 * 0.25
    }

    fn slope(rng: &mut ChaCha8Rng) -> f64 {
        let s = rng.gen_range(1i32..=24) as f64 * 0.125;
        if rng.gen_bool(0.5) {
            s
        } else {
            -s
        }
    }

    pub fn constants(&self, n: usize) -> Vec<CorpusFn> {
        let mut rng = self.rng(1);
        let mut out = vec![CorpusFn::new(Family::Constant(0.0)), CorpusFn::new(Family::Constant(-3.5))];
        out.extend((0..n).map(|_| CorpusFn::new(Family::Constant(rng.gen_range(-20i32..=20) as f64 * 0.5))));
        out
    }

    fn draw_convergent(rng: &mut ChaCha8Rng, depth: u32) -> Family {
        let a = Self::level(rng);
        let b = Self::slope(rng);
        let pick = if depth == 0 { rng.gen_range(0..6) } else { rng.gen_range(0..8) };
        match pick {
            0 => Family::Affine { a, b },
            1 => Family::Quadratic { a, b, c: Self::slope(rng) },
            2 => Family::Removable { a, b },
            3 => Family::Saturating { a, b },
            4 => Family::Arctan { a, b },
            5 => Family::Damped { a, b },
            6 => Family::Sum(
                Box::new(Self::draw_convergent(rng, 0)),
                Box::new(Self::draw_convergent(rng, 0)),
            ),
            _ => {
                if rng.gen_bool(0.5) {
                    Family::Product(
                        Box::new(Self::draw_convergent(rng, 0)),
                        Box::new(Self::draw_convergent(rng, 0)),
                    )
                } else {
                    // bounded oscillator times a null function
                    Family::Product(
                        Box::new(Family::Oscillator { a: 0.0, b: Self::slope(rng) }),
                        Box::new(Family::Affine { a: 0.0, b }),
                    )
                }
            }
        }
    }

    /// Functions with a known finite limit: affine, polynomial, removable
    /// singularities, monotone bounded, damped oscillators, sums and products.
    pub fn convergent(&self, n: usize) -> Vec<CorpusFn> {
        let mut rng = self.rng(2);
        (0..n).map(|_| CorpusFn::new(Self::draw_convergent(&mut rng, 1))).collect()
    }

    /// Monotone functions, including unbounded ones.
    pub fn monotone(&self, n: usize) -> Vec<CorpusFn> {
        let mut rng = self.rng(3);
        (0..n)
            .map(|i| {
                let a = Self::level(&mut rng);
                let b = Self::slope(&mut rng);
                let family = match i % 5 {
                    0 => Family::Affine { a, b },
                    1 => Family::Saturating { a, b },
                    2 => Family::Arctan { a, b },
                    3 => Family::Removable { a, b },
                    _ => Family::Unbounded { b },
                };
                CorpusFn::new(family)
            })
            .collect()
    }

    /// Bounded oscillators without a limit.
    pub fn oscillators(&self, n: usize) -> Vec<CorpusFn> {
        let mut rng = self.rng(4);
        (0..n)
            .map(|_| {
                let a = Self::level(&mut rng);
                CorpusFn::new(Family::Oscillator { a, b: Self::slope(&mut rng).abs() })
            })
            .collect()
    }

    /// Independent pairs of convergent functions.
    pub fn pairs(&self, n: usize) -> Vec<(CorpusFn, CorpusFn)> {
        let mut rng = self.rng(5);
        (0..n)
            .map(|_| {
                (
                    CorpusFn::new(Self::draw_convergent(&mut rng, 1)),
                    CorpusFn::new(Self::draw_convergent(&mut rng, 1)),
                )
            })
            .collect()
    }

    /// Pairs with `f <= g` everywhere: `g = f + s + b u |sin(1/u)|`, `s, b >= 0`.
    pub fn ordered_pairs(&self, n: usize) -> Vec<(CorpusFn, CorpusFn)> {
        let mut rng = self.rng(6);
        let mut out = vec![(
            CorpusFn::new(Family::AbsDamped { a: 0.0, b: -1.0 }),
            CorpusFn::new(Family::Affine { a: 0.0, b: 1.0 }),
        )];
        out.extend((0..n).map(|i| {
            let f = Self::draw_convergent(&mut rng, 0);
            let shift = if i % 3 == 0 { 0.0 } else { rng.gen_range(1i32..=8) as f64 * 0.25 };
            let bump = Family::AbsDamped {
                a: shift,
                b: Self::slope(&mut rng).abs(),
            };
            let g = Family::Sum(Box::new(f.clone()), Box::new(bump));
            (CorpusFn::new(f), CorpusFn::new(g))
        }));
        out
    }

    /// Triples `f <= g <= h` with `lim f = lim h`; every `g` is tagged
    /// "squeezed".
    pub fn squeezed_triples(&self, n: usize) -> Vec<(CorpusFn, CorpusFn, CorpusFn)> {
        let mut rng = self.rng(7);
        let c = Self::level(&mut rng);
        let mut out = vec![(
            CorpusFn::new(Family::Constant(c)),
            CorpusFn::tagged(Family::Constant(c), "squeezed"),
            CorpusFn::new(Family::Constant(c)),
        )];
        out.extend((0..n).map(|_| {
            let l = Self::level(&mut rng);
            let lo = Self::slope(&mut rng).abs();
            let hi = Self::slope(&mut rng).abs();
            let inner = lo.min(hi) * rng.gen_range(0i32..=4) as f64 / 4.0;
            let g = if rng.gen_bool(0.5) {
                Family::Damped { a: l, b: inner }
            } else {
                Family::Damped { a: l, b: -inner }
            };
            (
                CorpusFn::new(Family::Affine { a: l, b: -lo }),
                CorpusFn::tagged(g, "squeezed"),
                CorpusFn::new(Family::Affine { a: l, b: hi }),
            )
        }));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomId {
    Constants,
    Inequality,
    InequalityTheorem,
    MonotoneBounded,
    Sandwich,
    Uniqueness,
}

impl AxiomId {
    pub fn title(self) -> &'static str {
        match self {
            AxiomId::Constants => "constants",
            AxiomId::Inequality => "inequality",
            AxiomId::InequalityTheorem => "inequality theorem",
            AxiomId::MonotoneBounded => "monotone bounded",
            AxiomId::Sandwich => "sandwich",
            AxiomId::Uniqueness => "uniqueness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub function: String,
    pub direction: String,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub operator: String,
    pub direction: String,
    pub seed: u64,
    /// Cases where the hypotheses held and the conclusion was tested.
    pub cases: usize,
    /// Generated cases whose hypotheses did not hold.
    pub skipped: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

struct ReportBuilder {
    report: AxiomReport,
}

impl ReportBuilder {
    fn new(axiom: AxiomId, operator: String, dir: &Direction, seed: u64) -> Self {
        ReportBuilder {
            report: AxiomReport {
                axiom,
                operator,
                direction: dir.to_string(),
                seed,
                cases: 0,
                skipped: 0,
                violations: Vec::new(),
                pass: true,
            },
        }
    }

    fn case(&mut self) {
        self.report.cases += 1;
    }

    fn skip(&mut self) {
        self.report.skipped += 1;
    }

    fn violation(&mut self, function: &str, expected: impl Into<String>, observed: impl Into<String>) {
        self.report.violations.push(Violation {
            function: function.to_string(),
            direction: self.report.direction.clone(),
            expected: expected.into(),
            observed: observed.into(),
        });
    }

    fn finish(mut self) -> AxiomReport {
        self.report.pass = self.report.violations.is_empty();
        self.report
    }
}

fn describe(v: &Result<UltimatelyVerdict, crate::error::LimitError>) -> String {
    match v {
        Ok(UltimatelyVerdict::Holds { anchor }) => format!("holds past {anchor}"),
        Ok(UltimatelyVerdict::RefutedAt { point }) => format!("refuted at {point}"),
        Ok(UltimatelyVerdict::BudgetExhausted) => "budget exhausted".into(),
        Err(e) => e.to_string(),
    }
}

/// Constants: `f = c` everywhere gives limit `c`.
pub fn check_constants(op: &dyn LimitOperator, dir: &Direction, seed: u64) -> AxiomReport {
    let mut r = ReportBuilder::new(AxiomId::Constants, op.name(), dir, seed);
    for item in FunctionCorpus::new(seed).constants(8) {
        let Family::Constant(c) = item.family else { continue };
        r.case();
        let v = op.evaluate(&item.net(dir), dir);
        match v.limit() {
            Some(l) if (l - c).abs() <= op.tolerance() => {}
            _ => r.violation(&item.label, format!("converges to {c}"), v.to_string()),
        }
    }
    r.finish()
}

/// A pair admitted to the inequality check: the operator put `lower`'s limit
/// more than twice the tolerance below `upper`'s.
#[derive(Debug, Clone)]
pub struct SelectedPair {
    pub lower: CorpusFn,
    pub upper: CorpusFn,
    pub lower_limit: f64,
    pub upper_limit: f64,
}

pub const INEQUALITY_PAIRS: usize = 12;

/// Pairs whose operator limits differ by more than `2 * tolerance`, ordered
/// so that `lower_limit < upper_limit`; the rest count as skipped.
pub fn select_inequality_pairs(op: &dyn LimitOperator, dir: &Direction, seed: u64) -> (Vec<SelectedPair>, usize) {
    let gap = 2.0 * op.tolerance();
    let mut selected = Vec::new();
    let mut skipped = 0;
    for (f, g) in FunctionCorpus::new(seed).pairs(INEQUALITY_PAIRS) {
        let lf = op.evaluate(&f.net(dir), dir).limit();
        let lg = op.evaluate(&g.net(dir), dir).limit();
        match (lf, lg) {
            (Some(a), Some(b)) if b - a > gap => selected.push(SelectedPair {
                lower: f,
                upper: g,
                lower_limit: a,
                upper_limit: b,
            }),
            (Some(a), Some(b)) if a - b > gap => selected.push(SelectedPair {
                lower: g,
                upper: f,
                lower_limit: b,
                upper_limit: a,
            }),
            _ => skipped += 1,
        }
    }
    (selected, skipped)
}

/// Inequality: `lim f < lim g` implies `f < g` on some tail.
pub fn check_inequality(op: &dyn LimitOperator, dir: &Direction, seed: u64) -> AxiomReport {
    let mut r = ReportBuilder::new(AxiomId::Inequality, op.name(), dir, seed);
    let (pairs, skipped) = select_inequality_pairs(op, dir, seed);
    r.report.skipped = skipped;
    for pair in pairs {
        r.case();
        let v = ultimately_less(&pair.lower.net(dir), &pair.upper.net(dir), dir, HARNESS_BUDGET, true);
        if !matches!(v, Ok(UltimatelyVerdict::Holds { .. })) {
            r.violation(
                &format!("{} < {}", pair.lower.label, pair.upper.label),
                format!(
                    "ultimately less, since {} < {}",
                    pair.lower_limit, pair.upper_limit
                ),
                describe(&v),
            );
        }
    }
    r.finish()
}

/// Inequality theorem: `f <= g` on a tail implies `lim f <= lim g`.
pub fn check_inequality_theorem(op: &dyn LimitOperator, dir: &Direction, seed: u64) -> AxiomReport {
    let mut r = ReportBuilder::new(AxiomId::InequalityTheorem, op.name(), dir, seed);
    let slack = 2.0 * op.tolerance();
    for (f, g) in FunctionCorpus::new(seed).ordered_pairs(10) {
        let (fnet, gnet) = (f.net(dir), g.net(dir));
        let ordered = ultimately_less(&fnet, &gnet, dir, HARNESS_BUDGET, false);
        let (lf, lg) = (op.evaluate(&fnet, dir).limit(), op.evaluate(&gnet, dir).limit());
        let (Ok(UltimatelyVerdict::Holds { .. }), Some(lf), Some(lg)) = (&ordered, lf, lg) else {
            r.skip();
            continue;
        };
        r.case();
        if lf > lg + slack {
            r.violation(
                &format!("{} <= {}", f.label, g.label),
                "lim f <= lim g",
                format!("lim f = {lf}, lim g = {lg}"),
            );
        }
    }
    r.finish()
}

/// Whether `|f|` stays below `threshold` on every probe of the chain.
pub fn bounded_on_chain(f: &Net, dir: &Direction, threshold: f64) -> bool {
    let chain = dir.cofinal_chain(HARNESS_BUDGET + 1);
    (0..chain.len()).all(|k| {
        dir.segment_probes(&chain, k, 8)
            .iter()
            .filter_map(|p| f.eval(dir, p))
            .all(|v| !(v.abs() > threshold))
    })
}

/// Monotone bounded nets converge. Unbounded corpus members are filtered out
/// by [`bounded_on_chain`] and counted as skipped.
pub fn check_mb(op: &dyn LimitOperator, dir: &Direction, seed: u64) -> AxiomReport {
    let mut r = ReportBuilder::new(AxiomId::MonotoneBounded, op.name(), dir, seed);
    let threshold = EstimateConfig::default().divergence_threshold;
    for item in FunctionCorpus::new(seed).monotone(12) {
        let net = item.net(dir);
        if !bounded_on_chain(&net, dir, threshold) {
            r.skip();
            continue;
        }
        r.case();
        let v = op.evaluate(&net, dir);
        if v.limit().is_none() {
            r.violation(&item.label, "converges", v.to_string());
        }
    }
    r.finish()
}

/// Sandwich: `f <= g <= h` with `lim f = lim h` implies `g` converges.
pub fn check_sandwich(op: &dyn LimitOperator, dir: &Direction, seed: u64) -> AxiomReport {
    let mut r = ReportBuilder::new(AxiomId::Sandwich, op.name(), dir, seed);
    let slack = 2.0 * op.tolerance();
    for (f, g, h) in FunctionCorpus::new(seed).squeezed_triples(6) {
        let (fnet, gnet, hnet) = (f.net(dir), g.net(dir), h.net(dir));
        let lf = op.evaluate(&fnet, dir).limit();
        let lh = op.evaluate(&hnet, dir).limit();
        let outer_agree = matches!((lf, lh), (Some(a), Some(b)) if (a - b).abs() <= slack);
        let ordered = [(&fnet, &gnet), (&gnet, &hnet)]
            .iter()
            .all(|(lo, hi)| matches!(ultimately_less(lo, hi, dir, HARNESS_BUDGET, false), Ok(UltimatelyVerdict::Holds { .. })));
        if !(outer_agree && ordered) {
            r.skip();
            continue;
        }
        r.case();
        let v = op.evaluate(&gnet, dir);
        if v.limit().is_none() {
            r.violation(&g.label, "converges", v.to_string());
        }
    }
    r.finish()
}

/// Uniqueness: two operators agree wherever both converge.
pub fn check_uniqueness(a: &dyn LimitOperator, b: &dyn LimitOperator, dir: &Direction, seed: u64) -> AxiomReport {
    let mut r = ReportBuilder::new(AxiomId::Uniqueness, format!("{} vs {}", a.name(), b.name()), dir, seed);
    let tol = a.tolerance() + b.tolerance();
    let corpus = FunctionCorpus::new(seed);
    let mut items = corpus.convergent(10);
    items.extend(corpus.monotone(10));
    for item in items {
        let net = item.net(dir);
        let (va, vb) = (a.evaluate(&net, dir), b.evaluate(&net, dir));
        let (Some(la), Some(lb)) = (va.limit(), vb.limit()) else {
            r.skip();
            continue;
        };
        r.case();
        if (la - lb).abs() > tol {
            r.violation(&item.label, format!("agreement within {tol:e}"), format!("{la} vs {lb}"));
        }
    }
    r.finish()
}

/// Runs every single-operator check for each operator and the uniqueness
/// check for every pair of operators (or the operator against itself when
/// only one is given), on every direction.
pub fn run_all(ops: &[&dyn LimitOperator], dirs: &[Direction], seed: u64) -> Vec<AxiomReport> {
    let mut reports = Vec::new();
    for dir in dirs {
        for op in ops {
            reports.push(check_constants(*op, dir, seed));
            reports.push(check_inequality(*op, dir, seed));
            reports.push(check_inequality_theorem(*op, dir, seed));
            reports.push(check_mb(*op, dir, seed));
            reports.push(check_sandwich(*op, dir, seed));
        }
        match ops {
            [] => {}
            [only] => reports.push(check_uniqueness(*only, *only, dir, seed)),
            _ => {
                for (i, a) in ops.iter().enumerate() {
                    for b in &ops[i + 1..] {
                        reports.push(check_uniqueness(*a, *b, dir, seed));
                    }
                }
            }
        }
    }
    reports
}

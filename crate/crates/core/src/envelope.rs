//! Limit estimation through the upper and lower envelopes
//! `M(x) = sup { f(t) : t past x }` and `m(x) = inf { f(t) : t past x }`.
//!
//! Both envelopes are monotone along the direction and squeeze `f`
//! (`m <= f <= M`); `f` converges to `l` exactly when both envelopes do. The
//! sup and inf are taken over finitely many probes, so `M` is an
//! under-estimate and `m` an over-estimate of the true envelopes. The tail of a
//! chain point is truncated at the last chain point.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::directions::Direction;
use crate::error::{LimitError, Result};
use crate::net::{ultimately_less, Net, Point, UltimatelyVerdict};

/// Envelope steps that must be stable (or escaping) for oscillation or
/// divergence verdicts.
pub const STABLE_WINDOW: usize = 5;
/// Oscillation is judged this many steps before the end, so that the judged
/// envelopes are supported by at least this many segments of probes.
pub const OSCILLATION_LOOKAHEAD: usize = 16;
/// Step-to-step envelope changes up to this fraction of the envelope gap still
/// count as stable when deciding oscillation.
pub const OSCILLATION_REL_SLACK: f64 = 1e-3;
/// Certificates verify on a grid this many times denser than estimation.
pub const VERIFICATION_DENSITY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateConfig {
    pub tolerance: f64,
    pub max_steps: usize,
    pub sub_samples: usize,
    pub divergence_threshold: f64,
    pub ratio: f64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            tolerance: 1e-9,
            max_steps: 200,
            sub_samples: 64,
            divergence_threshold: 1e12,
            ratio: 0.5,
        }
    }
}

impl EstimateConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, reason: &str| {
            Err(LimitError::Param {
                field,
                reason: reason.into(),
            })
        };
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad("tolerance", "must be positive");
        }
        if self.max_steps < 2 {
            return bad("max_steps", "must be at least 2");
        }
        if self.sub_samples < 1 {
            return bad("sub_samples", "must be at least 1");
        }
        if !(self.divergence_threshold > 0.0) {
            return bad("divergence_threshold", "must be positive");
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return bad("ratio", "must lie in (0, 1)");
        }
        Ok(())
    }
}

/// One chain point with the envelopes over its (truncated) tail.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeStep {
    pub x: Point,
    /// `f(x)`; NaN when `f` is undefined there.
    pub value: f64,
    /// `m_k`
    pub lower: f64,
    /// `M_k`
    pub upper: f64,
    /// Finite probes in the tail.
    pub samples: usize,
}

impl Serialize for EnvelopeStep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EnvelopeStep", 4)?;
        s.serialize_field("x", &self.x)?;
        s.serialize_field("m", &self.lower)?;
        s.serialize_field("M", &self.upper)?;
        s.serialize_field("samples", &self.samples)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct EnvelopeTrace {
    pub steps: Vec<EnvelopeStep>,
}

impl EnvelopeTrace {
    pub fn last(&self) -> Option<&EnvelopeStep> {
        self.steps.last()
    }

    /// Half the final envelope gap.
    pub fn error_bound(&self) -> f64 {
        self.last()
            .map(|s| (s.upper - s.lower) / 2.0)
            .unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LimitVerdict {
    Converges(f64),
    DivergesToPlusInfinity,
    DivergesToMinusInfinity,
    Oscillates { liminf: f64, limsup: f64 },
    Inconclusive(String),
}

impl LimitVerdict {
    pub fn limit(&self) -> Option<f64> {
        match self {
            LimitVerdict::Converges(l) => Some(*l),
            _ => None,
        }
    }

    /// Stable snake_case name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            LimitVerdict::Converges(_) => "converges",
            LimitVerdict::DivergesToPlusInfinity => "diverges_to_plus_infinity",
            LimitVerdict::DivergesToMinusInfinity => "diverges_to_minus_infinity",
            LimitVerdict::Oscillates { .. } => "oscillates",
            LimitVerdict::Inconclusive(_) => "inconclusive",
        }
    }
}

impl fmt::Display for LimitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitVerdict::Converges(l) => write!(f, "converges to {l}"),
            LimitVerdict::DivergesToPlusInfinity => write!(f, "diverges to +inf"),
            LimitVerdict::DivergesToMinusInfinity => write!(f, "diverges to -inf"),
            LimitVerdict::Oscillates { liminf, limsup } => {
                write!(f, "oscillates between {liminf} and {limsup}")
            }
            LimitVerdict::Inconclusive(reason) => write!(f, "inconclusive: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateEntry {
    pub epsilon: f64,
    pub anchor: Point,
    /// Verification probes past the anchor, all within epsilon.
    pub samples: usize,
}

/// Witness that `|f(x) - limit| <= epsilon` on the tail of each anchor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub limit: f64,
    pub entries: Vec<CertificateEntry>,
}

/// Probes of one chain segment that fall inside the net's definition tail.
pub(crate) struct Segment {
    pub anchor: Point,
    pub anchor_value: f64,
    pub samples: Vec<(Point, f64)>,
}

pub(crate) fn sample_segments(f: &Net, dir: &Direction, steps: usize, per: usize) -> Vec<Segment> {
    let chain = dir.cofinal_chain(steps + 1);
    let segments = chain.len().saturating_sub(1);
    let mut out = Vec::with_capacity(segments);
    for k in 0..segments {
        let samples: Vec<(Point, f64)> = dir
            .segment_probes(&chain, k, per)
            .into_iter()
            .filter_map(|p| f.eval(dir, &p).map(|v| (p, v)))
            .collect();
        if samples.is_empty() {
            continue;
        }
        let anchor_value = f.eval(dir, &chain[k]).unwrap_or(f64::NAN);
        out.push(Segment {
            anchor: chain[k].clone(),
            anchor_value,
            samples,
        });
    }
    out
}

fn trace_from_segments(segments: &[Segment]) -> Result<EnvelopeTrace> {
    let mut stats = Vec::with_capacity(segments.len());
    for (k, seg) in segments.iter().enumerate() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut n = 0usize;
        for &(_, v) in &seg.samples {
            if v.is_nan() {
                continue;
            }
            lo = lo.min(v);
            hi = hi.max(v);
            n += 1;
        }
        if n == 0 {
            return Err(LimitError::Evaluation {
                step: k,
                anchor: seg.anchor.to_string(),
            });
        }
        stats.push((lo, hi, n));
    }

    let mut steps = Vec::with_capacity(segments.len());
    let (mut lo, mut hi, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
    for (seg, &(slo, shi, sn)) in segments.iter().zip(&stats).rev() {
        lo = lo.min(slo);
        hi = hi.max(shi);
        n += sn;
        steps.push(EnvelopeStep {
            x: seg.anchor.clone(),
            value: seg.anchor_value,
            lower: lo,
            upper: hi,
            samples: n,
        });
    }
    steps.reverse();
    Ok(EnvelopeTrace { steps })
}

/// Envelope trace of `f` along `dir`, refined with `cfg.ratio`.
pub fn envelopes(f: &Net, dir: &Direction, cfg: &EstimateConfig) -> Result<EnvelopeTrace> {
    cfg.validate()?;
    let dir = dir.with_ratio(cfg.ratio)?;
    let segments = sample_segments(f, &dir, cfg.max_steps, cfg.sub_samples);
    if segments.is_empty() {
        return Err(LimitError::Evaluation {
            step: 0,
            anchor: "no chain point inside the definition tail".into(),
        });
    }
    trace_from_segments(&segments)
}

/// Classifies a finished trace.
pub fn classify(trace: &EnvelopeTrace, cfg: &EstimateConfig) -> LimitVerdict {
    let steps = &trace.steps;
    let Some(last) = steps.last() else {
        return LimitVerdict::Inconclusive("empty trace".into());
    };
    let tol = cfg.tolerance;
    let width = last.upper - last.lower;
    if width.is_finite() && width <= tol {
        return LimitVerdict::Converges(last.lower + width / 2.0);
    }

    if steps.len() >= STABLE_WINDOW {
        let tail = &steps[steps.len() - STABLE_WINDOW..];
        let thr = cfg.divergence_threshold;
        if last.lower > thr && tail.windows(2).all(|w| w[0].lower < w[1].lower) {
            return LimitVerdict::DivergesToPlusInfinity;
        }
        if last.upper < -thr && tail.windows(2).all(|w| w[0].upper > w[1].upper) {
            return LimitVerdict::DivergesToMinusInfinity;
        }
    }

    if steps.len() > OSCILLATION_LOOKAHEAD + STABLE_WINDOW {
        let judged = steps.len() - 1 - OSCILLATION_LOOKAHEAD;
        let at = &steps[judged];
        let gap = at.upper - at.lower;
        let slack = tol.max(OSCILLATION_REL_SLACK * gap);
        let window = &steps[judged + 1 - STABLE_WINDOW..=judged];
        let stable = window.windows(2).all(|w| {
            (w[0].upper - w[1].upper).abs() <= slack && (w[0].lower - w[1].lower).abs() <= slack
        });
        if stable && gap.is_finite() && gap > tol {
            return LimitVerdict::Oscillates {
                liminf: at.lower,
                limsup: at.upper,
            };
        }
    }

    LimitVerdict::Inconclusive(format!(
        "envelope gap {width:e} exceeds tolerance {tol:e} after {} steps and the envelopes have not settled",
        steps.len()
    ))
}

/// Estimates the limit of `f` along `dir` from its envelopes.
pub fn estimate_limit(f: &Net, dir: &Direction, cfg: &EstimateConfig) -> Result<(LimitVerdict, EnvelopeTrace)> {
    let trace = envelopes(f, dir, cfg)?;
    Ok((classify(&trace, cfg), trace))
}

/// For each epsilon, the earliest chain anchor past which every verification
/// probe satisfies `|f(x) - limit| <= epsilon`.
pub fn epsilon_delta_certificate(
    f: &Net,
    dir: &Direction,
    limit: f64,
    eps_list: &[f64],
    cfg: &EstimateConfig,
) -> Result<Certificate> {
    cfg.validate()?;
    if eps_list.is_empty() {
        return Err(LimitError::Param {
            field: "eps",
            reason: "need at least one epsilon".into(),
        });
    }
    if let Some(&e) = eps_list.iter().find(|e| !(**e > 0.0)) {
        return Err(LimitError::Param {
            field: "eps",
            reason: format!("epsilon must be positive, got {e}"),
        });
    }
    if !limit.is_finite() {
        return Err(LimitError::Param {
            field: "value",
            reason: "claimed limit must be finite".into(),
        });
    }
    let dir = dir.with_ratio(cfg.ratio)?;
    let segments = sample_segments(f, &dir, cfg.max_steps, cfg.sub_samples * VERIFICATION_DENSITY);

    // suffix maxima of the deviation and probe counts
    let mut suffix = vec![(f64::INFINITY, 0usize); segments.len()];
    let (mut dev, mut count) = (0.0f64, 0usize);
    for (k, seg) in segments.iter().enumerate().rev() {
        for &(_, v) in &seg.samples {
            let d = (v - limit).abs();
            dev = if d.is_nan() { f64::INFINITY } else { dev.max(d) };
            count += 1;
        }
        suffix[k] = (dev, count);
    }

    let entries = eps_list
        .iter()
        .map(|&epsilon| {
            suffix
                .iter()
                .position(|&(d, _)| d <= epsilon)
                .map(|k| CertificateEntry {
                    epsilon,
                    anchor: segments[k].anchor.clone(),
                    samples: suffix[k].1,
                })
                .ok_or(LimitError::CertificationFailure { epsilon, limit })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate { limit, entries })
}

/// Limit of a net that is monotone on a tail.
///
/// Monotonicity is checked on the probes of the second half of the chain,
/// ordered along the direction; ties within `tolerance` are allowed.
pub fn mb_limit(f: &Net, dir: &Direction, cfg: &EstimateConfig) -> Result<LimitVerdict> {
    cfg.validate()?;
    let dir = dir.with_ratio(cfg.ratio)?;
    let segments = sample_segments(f, &dir, cfg.max_steps, cfg.sub_samples);
    if segments.is_empty() {
        return Err(LimitError::Evaluation {
            step: 0,
            anchor: "no chain point inside the definition tail".into(),
        });
    }
    let trace = trace_from_segments(&segments)?;
    let tol = cfg.tolerance;

    let half = segments.len() / 2;
    let mut probes: Vec<(f64, &Point, f64)> = segments[half..]
        .iter()
        .flat_map(|s| s.samples.iter())
        .filter(|(_, v)| !v.is_nan())
        .map(|(p, v)| (dir.order_key(p), p, *v))
        .collect();
    probes.sort_by(|a, b| a.0.total_cmp(&b.0));

    let first_break = |increasing: bool| {
        probes.windows(2).find(|w| {
            let (a, b) = (&w[0], &w[1]);
            if a.0 == b.0 {
                (a.2 - b.2).abs() > tol
            } else if increasing {
                b.2 < a.2 - tol
            } else {
                b.2 > a.2 + tol
            }
        })
    };
    let up_break = first_break(true);
    let down_break = first_break(false);
    let increasing = match (up_break, down_break) {
        (None, None) => None,
        (None, Some(_)) => Some(true),
        (Some(_), None) => Some(false),
        (Some(w), Some(_)) => {
            let trend_up = probes.last().map(|p| p.2) >= probes.first().map(|p| p.2);
            let w = if trend_up { w } else { down_break.unwrap_or(w) };
            return Err(LimitError::NotMonotone {
                first: w[0].1.to_string(),
                first_value: w[0].2,
                second: w[1].1.to_string(),
                second_value: w[1].2,
            });
        }
    };

    let last = trace.last().expect("trace has at least one step");
    let thr = cfg.divergence_threshold;
    Ok(match increasing {
        None => LimitVerdict::Converges(last.lower + (last.upper - last.lower) / 2.0),
        Some(true) if last.upper > thr => LimitVerdict::DivergesToPlusInfinity,
        Some(true) => LimitVerdict::Converges(last.upper),
        Some(false) if last.lower < -thr => LimitVerdict::DivergesToMinusInfinity,
        Some(false) => LimitVerdict::Converges(last.lower),
    })
}

fn require_convergent(f: &Net, operand: &str, dir: &Direction, cfg: &EstimateConfig) -> Result<f64> {
    match estimate_limit(f, dir, cfg)?.0 {
        LimitVerdict::Converges(l) => Ok(l),
        other => Err(LimitError::OperandDiverges {
            operand: operand.to_string(),
            verdict: other.to_string(),
        }),
    }
}

/// If `f <= g <= h` on a tail and `f`, `h` share a limit, `g` converges to it.
pub fn sandwich_limit(f: &Net, g: &Net, h: &Net, dir: &Direction, cfg: &EstimateConfig) -> Result<LimitVerdict> {
    cfg.validate()?;
    for (lo, hi) in [(f, g), (g, h)] {
        match ultimately_less(lo, hi, dir, cfg.max_steps, false)? {
            UltimatelyVerdict::Holds { .. } => {}
            UltimatelyVerdict::RefutedAt { point } => {
                return Err(LimitError::OrderingViolated {
                    witness: point.to_string(),
                })
            }
            UltimatelyVerdict::BudgetExhausted => return Err(LimitError::OrderingUnverified),
        }
    }
    let lower = require_convergent(f, f.label(), dir, cfg)?;
    let upper = require_convergent(h, h.label(), dir, cfg)?;
    if (lower - upper).abs() > cfg.tolerance {
        return Err(LimitError::SandwichGap { lower, upper });
    }
    Ok(LimitVerdict::Converges(lower + (upper - lower) / 2.0))
}

/// A net known to tend to zero, either checked numerically or obtained from
/// other null nets through the combination lemmas.
#[derive(Debug, Clone)]
pub struct NullNet(Net);

/// A net with a bound on `|b|` over a tail.
#[derive(Debug, Clone)]
pub struct BoundedNet {
    net: Net,
    pub bound: f64,
}

impl NullNet {
    /// Checks numerically that `z` converges to 0 within tolerance.
    pub fn verify(z: Net, dir: &Direction, cfg: &EstimateConfig) -> Result<NullNet> {
        let l = require_convergent(&z, z.label(), dir, cfg)?;
        if l.abs() > cfg.tolerance {
            return Err(LimitError::OperandDiverges {
                operand: z.label().to_string(),
                verdict: format!("limit {l} is not zero"),
            });
        }
        Ok(NullNet(z))
    }

    pub fn net(&self) -> &Net {
        &self.0
    }

    /// If `z'` and `z''` tend to zero, so does `z' + z''`.
    pub fn sum(&self, other: &NullNet) -> NullNet {
        NullNet(self.0.add(&other.0))
    }

    /// A bounded net times a null net is null.
    pub fn times_bounded(&self, b: &BoundedNet) -> NullNet {
        NullNet(b.net.mul(&self.0))
    }
}

impl BoundedNet {
    /// Bounds `|b|` by its envelopes over the tail of the chain's midpoint.
    pub fn verify(b: Net, dir: &Direction, cfg: &EstimateConfig) -> Result<BoundedNet> {
        let trace = envelopes(&b, dir, cfg)?;
        let mid = &trace.steps[trace.steps.len() / 2];
        let bound = mid.upper.abs().max(mid.lower.abs());
        if !(bound <= cfg.divergence_threshold) {
            return Err(LimitError::OperandDiverges {
                operand: b.label().to_string(),
                verdict: "unbounded on every probed tail".into(),
            });
        }
        Ok(BoundedNet { net: b, bound })
    }

    pub fn constant(c: f64) -> BoundedNet {
        BoundedNet {
            net: Net::constant(c),
            bound: c.abs(),
        }
    }
}

/// `L + z` tends to `L` when `z` is null.
pub fn recentered(limit: f64, _z: &NullNet) -> LimitVerdict {
    LimitVerdict::Converges(limit)
}

fn centered(f: &Net, l: f64, dir: &Direction, cfg: &EstimateConfig) -> Result<NullNet> {
    NullNet::verify(f.map(format!("({}) - {l}", f.label()), move |v| v - l), dir, cfg)
}

/// Limit of `f + g`: `f + g = (lf + lg) + (zf + zg)` with `zf`, `zg` null.
pub fn limit_of_sum(f: &Net, g: &Net, dir: &Direction, cfg: &EstimateConfig) -> Result<LimitVerdict> {
    let lf = require_convergent(f, f.label(), dir, cfg)?;
    let lg = require_convergent(g, g.label(), dir, cfg)?;
    let z = centered(f, lf, dir, cfg)?.sum(&centered(g, lg, dir, cfg)?);
    Ok(recentered(lf + lg, &z))
}

/// Limit of `f * g`: `f g - lf lg = f zg + lg zf`, where `f` is bounded on a
/// tail and `lg` is a constant. When one factor is null the other only needs
/// to be bounded, so `sin(1/x) * x` still tends to 0.
pub fn limit_of_product(f: &Net, g: &Net, dir: &Direction, cfg: &EstimateConfig) -> Result<LimitVerdict> {
    let (vf, _) = estimate_limit(f, dir, cfg)?;
    let (vg, _) = estimate_limit(g, dir, cfg)?;
    let null_factor = |v: &LimitVerdict| v.limit().is_some_and(|l| l.abs() <= cfg.tolerance);
    for (null, v_null, other, v_other) in [(g, &vg, f, &vf), (f, &vf, g, &vg)] {
        if null_factor(v_null) && v_other.limit().is_none() {
            let z = NullNet::verify(null.clone(), dir, cfg)?;
            let b = BoundedNet::verify(other.clone(), dir, cfg)?;
            return Ok(recentered(0.0, &z.times_bounded(&b)));
        }
    }
    let operand_limit = |net: &Net, v: LimitVerdict| match v {
        LimitVerdict::Converges(l) => Ok(l),
        other => Err(LimitError::OperandDiverges {
            operand: net.label().to_string(),
            verdict: other.to_string(),
        }),
    };
    let lf = operand_limit(f, vf)?;
    let lg = operand_limit(g, vg)?;
    let (zf, zg) = (centered(f, lf, dir, cfg)?, centered(g, lg, dir, cfg)?);
    let bf = BoundedNet::verify(f.clone(), dir, cfg)?;
    let z = zg.times_bounded(&bf).sum(&zf.times_bounded(&BoundedNet::constant(lg)));
    Ok(recentered(lf * lg, &z))
}

/// Limit of `f / g`: `f/g - lf/lg = (1/g)(1/lg)(lg zf - lf zg)` with `1/g`
/// bounded on a tail once `lg != 0`.
pub fn limit_of_quotient(f: &Net, g: &Net, dir: &Direction, cfg: &EstimateConfig) -> Result<LimitVerdict> {
    let lf = require_convergent(f, f.label(), dir, cfg)?;
    let lg = require_convergent(g, g.label(), dir, cfg)?;
    if lg.abs() <= cfg.tolerance {
        return Err(LimitError::ZeroDenominatorLimit { limit: lg });
    }
    let (zf, zg) = (centered(f, lf, dir, cfg)?, centered(g, lg, dir, cfg)?);
    let recip = BoundedNet::verify(
        g.map(format!("1 / ({})", g.label()), move |v| 1.0 / (v * lg)),
        dir,
        cfg,
    )?;
    let numerator = zf
        .times_bounded(&BoundedNet::constant(lg))
        .sum(&zg.times_bounded(&BoundedNet::constant(-lf)));
    let z = numerator.times_bounded(&recip);
    Ok(recentered(lf / lg, &z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EstimateConfig {
        EstimateConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        for bad in [
            EstimateConfig { tolerance: 0.0, ..cfg() },
            EstimateConfig { max_steps: 1, ..cfg() },
            EstimateConfig { sub_samples: 0, ..cfg() },
            EstimateConfig { divergence_threshold: -1.0, ..cfg() },
            EstimateConfig { ratio: 1.0, ..cfg() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn constant_envelopes_are_flat() {
        let dir = Direction::left_at(0.0).unwrap();
        let trace = envelopes(&Net::constant(7.0), &dir, &cfg()).unwrap();
        assert!(trace.steps.iter().all(|s| s.lower == 7.0 && s.upper == 7.0));
        let (v, _) = estimate_limit(&Net::constant(7.0), &dir, &cfg()).unwrap();
        assert_eq!(v, LimitVerdict::Converges(7.0));
    }

    #[test]
    fn identity_envelopes_at_left_one() {
        let dir = Direction::left_at(1.0).unwrap();
        let trace = envelopes(&Net::real("x", |x| x), &dir, &cfg()).unwrap();
        for s in &trace.steps {
            let x = s.x.as_real().unwrap();
            assert_eq!(s.lower, x);
            assert!(s.upper < 1.0);
            if x > 1.0 - 1e-6 {
                assert!((1.0 - s.upper) < 1e-6 && (1.0 - s.lower) < 1e-6);
            }
        }
    }

    #[test]
    fn removable_singularity() {
        let dir = Direction::left_at(1.0).unwrap();
        let f = Net::real("(x^2-1)/(x-1)", |x| (x * x - 1.0) / (x - 1.0));
        let (v, trace) = estimate_limit(&f, &dir, &cfg()).unwrap();
        assert!((v.limit().unwrap() - 2.0).abs() < 1e-6, "{v}");
        assert!(trace.error_bound() <= 0.5e-9);
    }

    #[test]
    fn blow_up_and_oscillation() {
        let left = Direction::left_at(1.0).unwrap();
        let f = Net::real("1/(1-x)", |x| 1.0 / (1.0 - x));
        assert_eq!(estimate_limit(&f, &left, &cfg()).unwrap().0, LimitVerdict::DivergesToPlusInfinity);
        let g = Net::real("-1/(1-x)", |x| -1.0 / (1.0 - x));
        assert_eq!(estimate_limit(&g, &left, &cfg()).unwrap().0, LimitVerdict::DivergesToMinusInfinity);

        let right = Direction::right_at(0.0).unwrap();
        let s = Net::real("sin(1/x)", |x| (1.0 / x).sin());
        match estimate_limit(&s, &right, &cfg()).unwrap().0 {
            LimitVerdict::Oscillates { liminf, limsup } => {
                assert!((liminf + 1.0).abs() <= 1e-3 && (limsup - 1.0).abs() <= 1e-3);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn slow_convergence_is_not_called_oscillation() {
        let right = Direction::right_at(0.0).unwrap();
        let f = Net::real("1/ln(1/x)", |x| 1.0 / (1.0 / x).ln());
        assert!(matches!(
            estimate_limit(&f, &right, &cfg()).unwrap().0,
            LimitVerdict::Inconclusive(_)
        ));
    }

    #[test]
    fn all_nan_is_an_evaluation_error() {
        let dir = Direction::left_at(0.0).unwrap();
        let f = Net::real("ln(x)", |x| x.ln());
        assert!(matches!(estimate_limit(&f, &dir, &cfg()), Err(LimitError::Evaluation { .. })));
    }

    #[test]
    fn certificate_examples() {
        let dir = Direction::left_at(1.0).unwrap();
        let f = Net::real("2x+1", |x| 2.0 * x + 1.0);
        let cert = epsilon_delta_certificate(&f, &dir, 3.0, &[0.1], &cfg()).unwrap();
        assert!(cert.entries[0].anchor.as_real().unwrap() >= 0.95);

        let c = epsilon_delta_certificate(&Net::constant(4.0), &dir, 4.0, &[1e-3], &cfg()).unwrap();
        assert_eq!(c.entries[0].anchor, Point::Real(0.5));

        let dir0 = Direction::left_at(0.0).unwrap();
        let err = epsilon_delta_certificate(&Net::real("x", |x| x), &dir0, 1.0, &[0.5], &cfg()).unwrap_err();
        assert_eq!(err, LimitError::CertificationFailure { epsilon: 0.5, limit: 1.0 });

        assert!(epsilon_delta_certificate(&f, &dir, 3.0, &[], &cfg()).is_err());
        assert!(epsilon_delta_certificate(&f, &dir, 3.0, &[0.1, -1.0], &cfg()).is_err());
    }

    #[test]
    fn mb_examples() {
        let inf = Direction::to_infinity();
        let f = Net::real("1-1/x", |x| 1.0 - 1.0 / x);
        let l = mb_limit(&f, &inf, &cfg()).unwrap().limit().unwrap();
        assert!((l - 1.0).abs() < 1e-9);
        assert_eq!(mb_limit(&Net::real("x", |x| x), &inf, &cfg()).unwrap(), LimitVerdict::DivergesToPlusInfinity);
        let s = Net::real("sin(x)", f64::sin);
        assert!(matches!(mb_limit(&s, &inf, &cfg()), Err(LimitError::NotMonotone { .. })));
    }

    #[test]
    fn sandwich_examples() {
        let right = Direction::right_at(0.0).unwrap();
        let f = Net::real("-x", |x| -x);
        let g = Net::real("x sin(1/x)", |x| x * (1.0 / x).sin());
        let h = Net::real("x", |x| x);
        let l = sandwich_limit(&f, &g, &h, &right, &cfg()).unwrap().limit().unwrap();
        assert!(l.abs() <= 1e-9);

        let four = Net::constant(4.0);
        assert_eq!(sandwich_limit(&four, &four, &four, &right, &cfg()).unwrap(), LimitVerdict::Converges(4.0));

        let mid = Net::real("x", |x| x);
        let err = sandwich_limit(&Net::constant(0.0), &mid, &Net::constant(1.0), &right, &cfg()).unwrap_err();
        assert_eq!(err, LimitError::SandwichGap { lower: 0.0, upper: 1.0 });

        let err = sandwich_limit(&h, &f, &h, &right, &cfg()).unwrap_err();
        assert!(matches!(err, LimitError::OrderingViolated { .. }));
    }

    #[test]
    fn algebra_examples() {
        let left2 = Direction::left_at(2.0).unwrap();
        let x = Net::real("x", |x| x);
        let x2 = Net::real("x^2", |x| x * x);
        let s = limit_of_sum(&x, &x2, &left2, &cfg()).unwrap().limit().unwrap();
        assert!((s - 6.0).abs() < 1e-9);
        let p = limit_of_product(&x, &x2, &left2, &cfg()).unwrap().limit().unwrap();
        assert!((p - 8.0).abs() < 1e-8);
        let q = limit_of_quotient(&x2, &x, &left2, &cfg()).unwrap().limit().unwrap();
        assert!((q - 2.0).abs() < 1e-9);

        let left1 = Direction::left_at(1.0).unwrap();
        let err = limit_of_quotient(&x, &Net::real("x-1", |x| x - 1.0), &left1, &cfg()).unwrap_err();
        assert!(matches!(err, LimitError::ZeroDenominatorLimit { .. }));

        let right = Direction::right_at(0.0).unwrap();
        let b = Net::real("sin(1/x)", |x| (1.0 / x).sin());
        assert_eq!(limit_of_product(&b, &x, &right, &cfg()).unwrap(), LimitVerdict::Converges(0.0));
        assert_eq!(limit_of_product(&x, &b, &right, &cfg()).unwrap(), LimitVerdict::Converges(0.0));
        // neither factor null: the oscillating operand is rejected
        assert!(matches!(
            limit_of_product(&b, &Net::constant(2.0), &right, &cfg()),
            Err(LimitError::OperandDiverges { .. })
        ));
    }

    #[test]
    fn bounded_times_null_is_null() {
        let right = Direction::right_at(0.0).unwrap();
        let z = NullNet::verify(Net::real("x", |x| x), &right, &cfg()).unwrap();
        let b = BoundedNet::verify(Net::real("sin(1/x)", |x| (1.0 / x).sin()), &right, &cfg()).unwrap();
        assert!(b.bound <= 1.0);
        let prod = z.times_bounded(&b);
        let (v, _) = estimate_limit(prod.net(), &right, &cfg()).unwrap();
        assert!(v.limit().unwrap().abs() <= 1e-9);
        assert!(BoundedNet::verify(Net::real("1/x", |x| 1.0 / x), &right, &cfg()).is_err());
    }
}

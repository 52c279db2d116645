//! Human-readable rendering and exit-code mapping.

use netlimit::{CertificateEntry, Direction, EnvelopeTrace, EstimateConfig, LimitVerdict, Point};
use serde_json::{json, Value};

use crate::{EXIT_EXTENDED, EXIT_INCONCLUSIVE, EXIT_OK};

pub fn verdict_exit(v: &LimitVerdict) -> u8 {
    match v {
        LimitVerdict::Converges(_) => EXIT_OK,
        LimitVerdict::DivergesToPlusInfinity
        | LimitVerdict::DivergesToMinusInfinity
        | LimitVerdict::Oscillates { .. } => EXIT_EXTENDED,
        LimitVerdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
    }
}

/// `v` rounded to 6 significant digits, trailing zeros dropped.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{v:.5e}");
    }
    if mag > 5 {
        let scale = 10f64.powi(mag - 5);
        return format!("{:.0}", (v / scale).round() * scale);
    }
    let decimals = (5 - mag) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Every envelope step has zero width: the net is constant on the whole
/// probed tail, so the value is reported without an error bar.
pub fn is_exact(trace: &EnvelopeTrace) -> bool {
    !trace.steps.is_empty() && trace.steps.iter().all(|s| s.upper == s.lower)
}

pub fn verdict_line(v: &LimitVerdict, trace: &EnvelopeTrace, cfg: &EstimateConfig) -> String {
    match v {
        LimitVerdict::Converges(l) if is_exact(trace) => format!("Converges: {}", sig6(*l)),
        LimitVerdict::Converges(l) => format!("Converges: {l:.6} (±<{:e})", cfg.tolerance),
        LimitVerdict::DivergesToPlusInfinity => "Diverges to +infinity".into(),
        LimitVerdict::DivergesToMinusInfinity => "Diverges to -infinity".into(),
        LimitVerdict::Oscillates { liminf, limsup } => {
            format!("Oscillates: liminf={liminf:.3} limsup={limsup:.3}")
        }
        LimitVerdict::Inconclusive(reason) => format!("Inconclusive: {reason}"),
    }
}

pub fn point_text(p: &Point) -> String {
    match p {
        Point::Real(x) => sig6(*x),
        Point::Partition(part) => format!("{} cells", part.cells()),
    }
}

/// The size of the tail an anchor opens, in the direction's own terms:
/// radius for point directions, threshold for infinities and sequences,
/// mesh for partitions.
pub fn delta(dir: &Direction, anchor: &Point) -> f64 {
    match (dir, anchor) {
        (_, Point::Partition(p)) => p.mesh(),
        (
            Direction::LeftAt { x0, .. } | Direction::RightAt { x0, .. } | Direction::TwoSidedAt { x0, .. },
            Point::Real(x),
        ) => (x - x0).abs(),
        (_, Point::Real(x)) => *x,
    }
}

pub fn delta_text(dir: &Direction, anchor: &Point) -> String {
    let d = delta(dir, anchor);
    match dir {
        Direction::LeftAt { .. } | Direction::RightAt { .. } | Direction::TwoSidedAt { .. } => {
            format!("δ = {}", sig6(d))
        }
        Direction::ToInfinity { .. } => format!("past N = {}", sig6(d)),
        Direction::ToMinusInfinity { .. } => format!("below N = {}", sig6(d)),
        Direction::Naturals { .. } => format!("n ≥ N = {}", sig6(d)),
        Direction::PartitionsOf { .. } => format!("mesh ≤ {}", sig6(d)),
    }
}

pub fn entry_json(dir: &Direction, e: &CertificateEntry) -> Value {
    json!({
        "epsilon": e.epsilon,
        "anchor": e.anchor,
        "samples": e.samples,
        "delta": delta(dir, &e.anchor),
    })
}

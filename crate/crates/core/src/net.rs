//! Directed-set machinery: points, tails, nets and the "ultimately less" relation.
//!
//! A [`Direction`] orders its points by a preorder `precedes`; a tail is the set
//! of points dominating an anchor, and a net is a real-valued function defined
//! on some tail. All probing here is numerical: a direction is sampled along a
//! cofinal chain, and relations that must hold "on some tail" are checked on
//! the probed points only.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::directions::Direction;
use crate::error::{LimitError, Result};

/// Probes taken between consecutive chain points by [`ultimately_less`].
pub const PROBES_PER_STEP: usize = 16;

/// A finite sorted list of division points of `[a, b]`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    points: Vec<f64>,
}

impl Partition {
    /// Builds a partition from arbitrary points; they are sorted and deduplicated.
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(LimitError::Param {
                field: "partition",
                reason: "division points must be finite".into(),
            });
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        if points.len() < 2 {
            return Err(LimitError::Param {
                field: "partition",
                reason: "need at least two distinct points".into(),
            });
        }
        Ok(Partition { points })
    }

    /// `cells` equal subintervals of `[a, b]`.
    pub fn uniform(a: f64, b: f64, cells: usize) -> Self {
        let cells = cells.max(1);
        let width = b - a;
        let mut points: Vec<f64> = (0..=cells)
            .map(|i| a + width * (i as f64) / (cells as f64))
            .collect();
        points[cells] = b;
        Partition { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Largest subinterval width.
    pub fn mesh(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Common refinement: the union of both point sets.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut points = Vec::with_capacity(self.points.len() + other.points.len());
        points.extend_from_slice(&self.points);
        points.extend_from_slice(&other.points);
        points.sort_by(f64::total_cmp);
        points.dedup();
        Partition { points }
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Partition", 2)?;
        s.serialize_field("cells", &self.cells())?;
        s.serialize_field("mesh", &self.mesh())?;
        s.end()
    }
}

/// A point of some direction's domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Point {
    Real(f64),
    Partition(Partition),
}

impl Point {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Point::Real(x) => Some(*x),
            Point::Partition(_) => None,
        }
    }

    pub fn as_partition(&self) -> Option<&Partition> {
        match self {
            Point::Partition(p) => Some(p),
            Point::Real(_) => None,
        }
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::Real(x)
    }
}

impl From<Partition> for Point {
    fn from(p: Partition) -> Self {
        Point::Partition(p)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(x) => write!(f, "{x}"),
            Point::Partition(p) => write!(f, "partition({} cells, mesh {})", p.cells(), p.mesh()),
        }
    }
}

/// The set of points dominating `anchor`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tail {
    pub anchor: Point,
}

impl Tail {
    pub fn new(anchor: Point) -> Self {
        Tail { anchor }
    }

    pub fn contains(&self, dir: &Direction, x: &Point) -> bool {
        dir.precedes(&self.anchor, x)
    }
}

type NetFn = dyn Fn(&Point) -> f64 + Send + Sync;

/// A real-valued function defined on a tail of a direction.
///
/// Nets built by combining other nets are defined on the intersection of the
/// operands' tails; in a directed set that intersection contains the tail of
/// the joined anchors.
#[derive(Clone)]
pub struct Net {
    label: String,
    func: Arc<NetFn>,
    tails: Vec<Tail>,
}

impl fmt::Debug for Net {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Net")
            .field("label", &self.label)
            .field("tails", &self.tails)
            .finish()
    }
}

impl Net {
    pub fn new(label: impl Into<String>, func: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        Net {
            label: label.into(),
            func: Arc::new(func),
            tails: Vec::new(),
        }
    }

    /// A net on a real-indexed direction. Partition points evaluate to NaN.
    pub fn real(label: impl Into<String>, func: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Net::new(label, move |p: &Point| match p {
            Point::Real(x) => func(*x),
            Point::Partition(_) => f64::NAN,
        })
    }

    pub fn constant(c: f64) -> Self {
        Net::new(format!("{c}"), move |_: &Point| c)
    }

    /// Restricts the net to the tail past `anchor`.
    pub fn with_tail(mut self, anchor: Point) -> Self {
        self.tails.push(Tail::new(anchor));
        self
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn definition_tails(&self) -> &[Tail] {
        &self.tails
    }

    pub fn is_defined_at(&self, dir: &Direction, x: &Point) -> bool {
        dir.contains(x) && self.tails.iter().all(|t| t.contains(dir, x))
    }

    /// Raw evaluation, ignoring the definition tail.
    pub fn value(&self, x: &Point) -> f64 {
        (self.func)(x)
    }

    /// Evaluation restricted to the definition tail; `None` outside it.
    pub fn eval(&self, dir: &Direction, x: &Point) -> Option<f64> {
        self.is_defined_at(dir, x).then(|| (self.func)(x))
    }

    pub fn map(&self, label: impl Into<String>, op: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Net {
        let func = Arc::clone(&self.func);
        Net {
            label: label.into(),
            func: Arc::new(move |p: &Point| op(func(p))),
            tails: self.tails.clone(),
        }
    }

    pub fn zip(
        &self,
        other: &Net,
        label: impl Into<String>,
        op: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Net {
        let (f, g) = (Arc::clone(&self.func), Arc::clone(&other.func));
        let mut tails = self.tails.clone();
        tails.extend(other.tails.iter().cloned());
        Net {
            label: label.into(),
            func: Arc::new(move |p: &Point| op(f(p), g(p))),
            tails,
        }
    }

    pub fn add(&self, other: &Net) -> Net {
        self.zip(other, format!("({}) + ({})", self.label, other.label), |a, b| a + b)
    }

    pub fn sub(&self, other: &Net) -> Net {
        self.zip(other, format!("({}) - ({})", self.label, other.label), |a, b| a - b)
    }

    pub fn mul(&self, other: &Net) -> Net {
        self.zip(other, format!("({}) * ({})", self.label, other.label), |a, b| a * b)
    }

    pub fn div(&self, other: &Net) -> Net {
        self.zip(other, format!("({}) / ({})", self.label, other.label), |a, b| a / b)
    }
}

/// Outcome of probing whether a relation holds on some tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum UltimatelyVerdict {
    /// Every probe past `anchor` satisfied the relation.
    Holds { anchor: Point },
    /// A probe inside the last probed segment violated the relation.
    RefutedAt { point: Point },
    /// Violations stopped, but the clean stretch is too short to call.
    BudgetExhausted,
}

impl UltimatelyVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, UltimatelyVerdict::Holds { .. })
    }
}

/// Least upper bound of two points in the direction's order.
pub fn join(dir: &Direction, x: &Point, y: &Point) -> Result<Point> {
    dir.join(x, y)
}

/// The first `n` points of the direction's sampling chain (fewer if the chain
/// runs into the limits of double precision).
pub fn cofinal_chain(dir: &Direction, n: usize) -> Vec<Point> {
    dir.cofinal_chain(n)
}

/// Probes `f < g` (or `f <= g` when `strict` is false) along `budget` chain
/// steps of `dir`.
///
/// Holds needs the violation-free suffix to cover at least a quarter of the
/// probed steps (and at least two). A violation in the final step refutes.
pub fn ultimately_less(
    f: &Net,
    g: &Net,
    dir: &Direction,
    budget: usize,
    strict: bool,
) -> Result<UltimatelyVerdict> {
    let chain = dir.cofinal_chain(budget.max(2) + 1);
    let steps = chain.len().saturating_sub(1);
    let mut last_violation: Option<(usize, Point)> = None;
    let mut first_probed: Option<usize> = None;
    let mut usable = 0usize;

    for k in 0..steps {
        for x in dir.segment_probes(&chain, k, PROBES_PER_STEP) {
            let (Some(a), Some(b)) = (f.eval(dir, &x), g.eval(dir, &x)) else {
                continue;
            };
            if a.is_nan() || b.is_nan() {
                continue;
            }
            usable += 1;
            first_probed.get_or_insert(k);
            let ok = if strict { a < b } else { a <= b };
            if !ok {
                last_violation = Some((k, x));
            }
        }
    }

    let Some(first) = first_probed else {
        return Err(LimitError::Evaluation {
            step: 0,
            anchor: chain.first().map(ToString::to_string).unwrap_or_default(),
        });
    };
    debug_assert!(usable > 0);

    match last_violation {
        None => Ok(UltimatelyVerdict::Holds {
            anchor: chain[first].clone(),
        }),
        Some((k, x)) if k + 1 == steps => Ok(UltimatelyVerdict::RefutedAt { point: x }),
        Some((k, _)) => {
            let clean = steps - (k + 1);
            if clean >= 2 && clean * 4 >= steps - first {
                Ok(UltimatelyVerdict::Holds {
                    anchor: chain[k + 1].clone(),
                })
            } else {
                Ok(UltimatelyVerdict::BudgetExhausted)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_union_and_mesh() {
        let p = Partition::new(vec![0.0, 0.5, 1.0]).unwrap();
        let q = Partition::new(vec![0.0, 0.3, 1.0]).unwrap();
        let u = p.union(&q);
        assert_eq!(u.points(), &[0.0, 0.3, 0.5, 1.0]);
        assert!(u.mesh() <= p.mesh().min(q.mesh()));
        assert_eq!(Partition::uniform(0.0, 1.0, 4).mesh(), 0.25);
    }

    #[test]
    fn partition_rejects_degenerate_input() {
        assert!(Partition::new(vec![1.0, 1.0]).is_err());
        assert!(Partition::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn net_tail_restricts_evaluation() {
        let dir = Direction::left_at(1.0).unwrap();
        let f = Net::real("x", |x| x).with_tail(Point::Real(0.9));
        assert_eq!(f.eval(&dir, &Point::Real(0.5)), None);
        assert_eq!(f.eval(&dir, &Point::Real(0.95)), Some(0.95));
        // outside the direction's domain entirely
        assert_eq!(f.eval(&dir, &Point::Real(1.5)), None);
    }

    #[test]
    fn zipped_nets_keep_both_tails() {
        let f = Net::real("x", |x| x).with_tail(Point::Real(0.2));
        let g = Net::real("1", |_| 1.0).with_tail(Point::Real(0.7));
        let h = f.add(&g);
        assert_eq!(h.definition_tails().len(), 2);
        let dir = Direction::left_at(1.0).unwrap();
        assert!(!h.is_defined_at(&dir, &Point::Real(0.5)));
        assert!(h.is_defined_at(&dir, &Point::Real(0.8)));
    }

    #[test]
    fn ultimately_less_holds_for_bounded_identity() {
        let dir = Direction::left_at(1.0).unwrap();
        let f = Net::real("x", |x| x);
        let g = Net::constant(2.0);
        let v = ultimately_less(&f, &g, &dir, 40, true).unwrap();
        assert!(v.holds(), "{v:?}");
    }

    #[test]
    fn ties_refute_strict_but_not_loose() {
        let dir = Direction::left_at(1.0).unwrap();
        let f = Net::constant(5.0);
        let g = Net::constant(5.0);
        assert!(matches!(
            ultimately_less(&f, &g, &dir, 30, true).unwrap(),
            UltimatelyVerdict::RefutedAt { .. }
        ));
        assert!(ultimately_less(&f, &g, &dir, 30, false).unwrap().holds());
    }

    #[test]
    fn oscillation_refutes_with_a_genuine_witness() {
        let dir = Direction::right_at(0.0).unwrap();
        let f = Net::real("sin(1/x)", |x| (1.0 / x).sin());
        let g = Net::constant(0.5);
        match ultimately_less(&f, &g, &dir, 60, true).unwrap() {
            UltimatelyVerdict::RefutedAt { point } => {
                let x = point.as_real().unwrap();
                assert!(x > 0.0 && (1.0 / x).sin() >= 0.5);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn early_violations_do_not_block_holds() {
        // x^2 < x only once x is inside (0, 1); right at 0 starting from 0.5
        // is fine, but starting far out the first steps violate.
        let dir = Direction::right_at(0.0).unwrap().with_offset(8.0).unwrap();
        let f = Net::real("x^2", |x| x * x);
        let g = Net::real("x", |x| x);
        match ultimately_less(&f, &g, &dir, 40, true).unwrap() {
            UltimatelyVerdict::Holds { anchor } => assert!(anchor.as_real().unwrap() <= 1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn all_nan_probes_are_an_evaluation_error() {
        let dir = Direction::to_infinity();
        let f = Net::real("nan", |_| f64::NAN);
        let g = Net::constant(0.0);
        assert!(matches!(
            ultimately_less(&f, &g, &dir, 10, true),
            Err(LimitError::Evaluation { .. })
        ));
    }
}

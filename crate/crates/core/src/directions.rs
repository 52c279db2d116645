//! Concrete directed sets: one-sided, two-sided and infinite approach on the
//! real line, the natural numbers, and tagged partitions of an interval
//! ordered by mesh.
//!
//! Every direction orders its domain through a real-valued key: `x` precedes
//! `y` iff `key(x) <= key(y)`. That makes transitivity and reflexivity exact
//! and turns `join` into "take the point with the larger key" (partitions use
//! the common refinement instead).
//!
//! Chain and probe points for the point directions are built from offsets
//! snapped to an 8-bit mantissa, so that `x0 - d` is exactly representable and
//! polynomial expressions in the sampled points lose as little as possible to
//! rounding.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{LimitError, Result};
use crate::net::{Net, Partition, Point};

const SNAP_BITS: i32 = 8;
/// Point chains stop once the offset to `x0` falls below `|x0| * 2^-44`.
const RELATIVE_OFFSET_FLOOR: f64 = 5.684_341_886_080_802e-14; // 2^-44
const ABSOLUTE_OFFSET_FLOOR: f64 = 1e-300;
const MAX_INDEX: f64 = 9_007_199_254_740_992.0; // 2^53
const MAX_COORDINATE: f64 = 1e300;
/// Partition chains stop at 2^20 cells.
pub const MAX_PARTITION_CELLS: usize = 1 << 20;

/// Which point of each subinterval a Riemann–Stieltjes sum samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TagRule {
    Left,
    #[default]
    Midpoint,
    Right,
}

impl TagRule {
    pub fn tag(self, lo: f64, hi: f64) -> f64 {
        match self {
            TagRule::Left => lo,
            TagRule::Midpoint => lo + 0.5 * (hi - lo),
            TagRule::Right => hi,
        }
    }
}

impl FromStr for TagRule {
    type Err = LimitError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(TagRule::Left),
            "mid" | "midpoint" => Ok(TagRule::Midpoint),
            "right" => Ok(TagRule::Right),
            other => Err(LimitError::Param {
                field: "tag",
                reason: format!("expected left, mid or right, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionKind {
    LeftAt,
    RightAt,
    TwoSidedAt,
    ToInfinity,
    ToMinusInfinity,
    Naturals,
    PartitionsOf,
}

/// Parameters for [`make_direction`]; unset fields take the kind's defaults.
#[derive(Debug, Clone, Default)]
pub struct DirectionParams {
    pub x0: Option<f64>,
    pub offset: Option<f64>,
    pub ratio: Option<f64>,
    pub start: Option<f64>,
    pub growth: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub tag: Option<TagRule>,
}

/// "As x tends to ...".
#[derive(Debug, Clone, PartialEq)]
pub enum Direction {
    /// `x -> x0-`; chain `x0 - offset * ratio^k`.
    LeftAt { x0: f64, offset: f64, ratio: f64 },
    /// `x -> x0+`.
    RightAt { x0: f64, offset: f64, ratio: f64 },
    /// `x -> x0`, ordered by distance to `x0` only.
    TwoSidedAt { x0: f64, offset: f64, ratio: f64 },
    /// `x -> +inf`; chain `start * growth^k`.
    ToInfinity { start: f64, growth: f64 },
    /// `x -> -inf`; `start` is negative.
    ToMinusInfinity { start: f64, growth: f64 },
    /// `n -> inf` over the integers `n >= start`; chain doubles.
    Naturals { start: u64 },
    /// Partitions of `[a, b]` directed by decreasing mesh; chain halves the mesh.
    PartitionsOf { a: f64, b: f64, tag: TagRule },
}

fn param(field: &'static str, reason: impl Into<String>) -> LimitError {
    LimitError::Param {
        field,
        reason: reason.into(),
    }
}

fn finite(field: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(param(field, format!("must be finite, got {v}")))
    }
}

fn check_offset(offset: f64) -> Result<f64> {
    if offset.is_finite() && offset > 0.0 {
        Ok(offset)
    } else {
        Err(param("offset", format!("must be positive, got {offset}")))
    }
}

fn check_ratio(ratio: f64) -> Result<f64> {
    if ratio > 0.0 && ratio < 1.0 {
        Ok(ratio)
    } else {
        Err(param("ratio", format!("must lie in (0, 1), got {ratio}")))
    }
}

fn check_growth(growth: f64) -> Result<f64> {
    if growth.is_finite() && growth > 1.0 {
        Ok(growth)
    } else {
        Err(param("growth", format!("must exceed 1, got {growth}")))
    }
}

/// Builds and validates a direction.
pub fn make_direction(kind: DirectionKind, params: DirectionParams) -> Result<Direction> {
    let offset = check_offset(params.offset.unwrap_or(0.5))?;
    let ratio = check_ratio(params.ratio.unwrap_or(0.5))?;
    let x0 = || finite("x0", params.x0.unwrap_or(0.0));
    match kind {
        DirectionKind::LeftAt => Ok(Direction::LeftAt { x0: x0()?, offset, ratio }),
        DirectionKind::RightAt => Ok(Direction::RightAt { x0: x0()?, offset, ratio }),
        DirectionKind::TwoSidedAt => Ok(Direction::TwoSidedAt { x0: x0()?, offset, ratio }),
        DirectionKind::ToInfinity => {
            let start = finite("start", params.start.unwrap_or(1.0))?;
            if start <= 0.0 {
                return Err(param("start", "must be positive"));
            }
            let growth = check_growth(params.growth.unwrap_or(2.0))?;
            Ok(Direction::ToInfinity { start, growth })
        }
        DirectionKind::ToMinusInfinity => {
            let start = finite("start", params.start.unwrap_or(-1.0))?;
            if start >= 0.0 {
                return Err(param("start", "must be negative"));
            }
            let growth = check_growth(params.growth.unwrap_or(2.0))?;
            Ok(Direction::ToMinusInfinity { start, growth })
        }
        DirectionKind::Naturals => {
            let start = params.start.unwrap_or(1.0);
            if !(start >= 1.0 && start.fract() == 0.0 && start <= MAX_INDEX) {
                return Err(param("start", format!("must be an integer >= 1, got {start}")));
            }
            Ok(Direction::Naturals { start: start as u64 })
        }
        DirectionKind::PartitionsOf => {
            let a = finite("a", params.a.unwrap_or(0.0))?;
            let b = finite("b", params.b.unwrap_or(1.0))?;
            if a >= b {
                return Err(param("b", format!("interval needs a < b, got [{a}, {b}]")));
            }
            Ok(Direction::PartitionsOf {
                a,
                b,
                tag: params.tag.unwrap_or_default(),
            })
        }
    }
}

/// Rounds `v` to an 8-bit mantissa.
pub(crate) fn snap(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let exp = v.abs().log2().floor() as i32;
    let unit = 2f64.powi(exp - (SNAP_BITS - 1));
    (v / unit).round() * unit
}

impl Direction {
    pub fn left_at(x0: f64) -> Result<Self> {
        make_direction(DirectionKind::LeftAt, DirectionParams { x0: Some(x0), ..Default::default() })
    }

    pub fn right_at(x0: f64) -> Result<Self> {
        make_direction(DirectionKind::RightAt, DirectionParams { x0: Some(x0), ..Default::default() })
    }

    pub fn two_sided_at(x0: f64) -> Result<Self> {
        make_direction(DirectionKind::TwoSidedAt, DirectionParams { x0: Some(x0), ..Default::default() })
    }

    pub fn to_infinity() -> Self {
        Direction::ToInfinity { start: 1.0, growth: 2.0 }
    }

    pub fn to_minus_infinity() -> Self {
        Direction::ToMinusInfinity { start: -1.0, growth: 2.0 }
    }

    pub fn naturals() -> Self {
        Direction::Naturals { start: 1 }
    }

    pub fn partitions_of(a: f64, b: f64) -> Result<Self> {
        make_direction(
            DirectionKind::PartitionsOf,
            DirectionParams { a: Some(a), b: Some(b), ..Default::default() },
        )
    }

    pub fn kind(&self) -> DirectionKind {
        match self {
            Direction::LeftAt { .. } => DirectionKind::LeftAt,
            Direction::RightAt { .. } => DirectionKind::RightAt,
            Direction::TwoSidedAt { .. } => DirectionKind::TwoSidedAt,
            Direction::ToInfinity { .. } => DirectionKind::ToInfinity,
            Direction::ToMinusInfinity { .. } => DirectionKind::ToMinusInfinity,
            Direction::Naturals { .. } => DirectionKind::Naturals,
            Direction::PartitionsOf { .. } => DirectionKind::PartitionsOf,
        }
    }

    /// The limit point for the three point directions.
    pub fn center(&self) -> Option<f64> {
        match self {
            Direction::LeftAt { x0, .. }
            | Direction::RightAt { x0, .. }
            | Direction::TwoSidedAt { x0, .. } => Some(*x0),
            _ => None,
        }
    }

    /// Replaces the chain refinement ratio of a point direction. Other
    /// directions keep their own refinement rule and are returned unchanged.
    pub fn with_ratio(&self, r: f64) -> Result<Self> {
        let r = check_ratio(r)?;
        Ok(match *self {
            Direction::LeftAt { x0, offset, .. } => Direction::LeftAt { x0, offset, ratio: r },
            Direction::RightAt { x0, offset, .. } => Direction::RightAt { x0, offset, ratio: r },
            Direction::TwoSidedAt { x0, offset, .. } => Direction::TwoSidedAt { x0, offset, ratio: r },
            ref other => other.clone(),
        })
    }

    /// Replaces the initial offset of a point direction.
    pub fn with_offset(&self, h: f64) -> Result<Self> {
        let h = check_offset(h)?;
        Ok(match *self {
            Direction::LeftAt { x0, ratio, .. } => Direction::LeftAt { x0, offset: h, ratio },
            Direction::RightAt { x0, ratio, .. } => Direction::RightAt { x0, offset: h, ratio },
            Direction::TwoSidedAt { x0, ratio, .. } => Direction::TwoSidedAt { x0, offset: h, ratio },
            ref other => other.clone(),
        })
    }

    pub fn with_tag(&self, rule: TagRule) -> Self {
        match *self {
            Direction::PartitionsOf { a, b, .. } => Direction::PartitionsOf { a, b, tag: rule },
            ref other => other.clone(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Direction::LeftAt { x0, .. }, Point::Real(x)) => *x < *x0,
            (Direction::RightAt { x0, .. }, Point::Real(x)) => *x > *x0,
            (Direction::TwoSidedAt { x0, .. }, Point::Real(x)) => x.is_finite() && *x != *x0,
            (Direction::ToInfinity { .. } | Direction::ToMinusInfinity { .. }, Point::Real(x)) => {
                x.is_finite()
            }
            (Direction::Naturals { start }, Point::Real(x)) => {
                x.fract() == 0.0 && *x >= *start as f64 && *x <= MAX_INDEX
            }
            (Direction::PartitionsOf { a, b, .. }, Point::Partition(p)) => {
                p.start() == *a && p.end() == *b
            }
            _ => false,
        }
    }

    /// Key whose order is the direction's preorder. Only meaningful for
    /// points the direction contains.
    pub fn order_key(&self, p: &Point) -> f64 {
        match (self, p) {
            (Direction::LeftAt { .. }, Point::Real(x)) => *x,
            (Direction::RightAt { .. }, Point::Real(x)) => -*x,
            (Direction::TwoSidedAt { x0, .. }, Point::Real(x)) => -(x - x0).abs(),
            (Direction::ToInfinity { .. }, Point::Real(x)) => *x,
            (Direction::ToMinusInfinity { .. }, Point::Real(x)) => -*x,
            (Direction::Naturals { .. }, Point::Real(x)) => *x,
            (Direction::PartitionsOf { .. }, Point::Partition(p)) => -p.mesh(),
            _ => f64::NAN,
        }
    }

    pub fn precedes(&self, x: &Point, y: &Point) -> bool {
        self.contains(x) && self.contains(y) && self.order_key(x) <= self.order_key(y)
    }

    fn domain_error(&self, p: &Point) -> LimitError {
        LimitError::Domain {
            point: p.to_string(),
            direction: self.to_string(),
        }
    }

    /// A common successor of `x` and `y`. Ties in the two-sided direction go
    /// to the point on the positive side of `x0`.
    pub fn join(&self, x: &Point, y: &Point) -> Result<Point> {
        for p in [x, y] {
            if !self.contains(p) {
                return Err(self.domain_error(p));
            }
        }
        if let (Point::Partition(p), Point::Partition(q)) = (x, y) {
            return Ok(Point::Partition(p.union(q)));
        }
        let (kx, ky) = (self.order_key(x), self.order_key(y));
        if kx > ky {
            return Ok(x.clone());
        }
        if ky > kx {
            return Ok(y.clone());
        }
        match (self, x, y) {
            (Direction::TwoSidedAt { x0, .. }, Point::Real(a), Point::Real(_)) if *a < *x0 => {
                Ok(y.clone())
            }
            _ => Ok(x.clone()),
        }
    }

    /// How far `p` is from the limit: `|x - x0|`, `1/|x|`, `1/n` or the mesh.
    /// Decreases toward 0 along the direction; `+inf` where undefined.
    pub fn proximity(&self, p: &Point) -> f64 {
        match (self, p) {
            (
                Direction::LeftAt { x0, .. }
                | Direction::RightAt { x0, .. }
                | Direction::TwoSidedAt { x0, .. },
                Point::Real(x),
            ) => (x - x0).abs(),
            (Direction::ToInfinity { .. }, Point::Real(x)) if *x > 0.0 => 1.0 / x,
            (Direction::ToMinusInfinity { .. }, Point::Real(x)) if *x < 0.0 => -1.0 / x,
            (Direction::Naturals { .. }, Point::Real(n)) if *n >= 1.0 => 1.0 / n,
            (Direction::PartitionsOf { .. }, Point::Partition(p)) => p.mesh(),
            _ => f64::INFINITY,
        }
    }

    fn offset_floor(x0: f64) -> f64 {
        (x0.abs() * RELATIVE_OFFSET_FLOOR).max(ABSOLUTE_OFFSET_FLOOR)
    }

    /// Points at offset `d` from the center: one for one-sided directions,
    /// two (positive side first) for the two-sided one.
    fn at_offset(&self, d: f64) -> Vec<Point> {
        match *self {
            Direction::LeftAt { x0, .. } => vec![Point::Real(x0 - d)],
            Direction::RightAt { x0, .. } => vec![Point::Real(x0 + d)],
            Direction::TwoSidedAt { x0, .. } => vec![Point::Real(x0 + d), Point::Real(x0 - d)],
            _ => Vec::new(),
        }
    }

    /// Up to `n` points, each strictly after the previous one. The chain ends
    /// early when the next point would not be representable distinctly.
    pub fn cofinal_chain(&self, n: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(n.min(256));
        match *self {
            Direction::LeftAt { x0, offset, ratio }
            | Direction::RightAt { x0, offset, ratio }
            | Direction::TwoSidedAt { x0, offset, ratio } => {
                let floor = Self::offset_floor(x0);
                let mut d = snap(offset);
                let mut raw = offset;
                while out.len() < n && d >= floor {
                    out.push(self.at_offset(d).swap_remove(0));
                    raw *= ratio;
                    let mut next = snap(raw);
                    if next >= d {
                        next = snap(d * 0.99);
                    }
                    d = next;
                }
            }
            Direction::ToInfinity { start, growth } | Direction::ToMinusInfinity { start, growth } => {
                let mut x = snap(start);
                let mut raw = start;
                while out.len() < n && x.abs() <= MAX_COORDINATE {
                    out.push(Point::Real(x));
                    raw *= growth;
                    let mut next = snap(raw);
                    if next.abs() <= x.abs() {
                        next = snap(x * 1.01);
                    }
                    x = next;
                }
            }
            Direction::Naturals { start } => {
                let mut m = start as f64;
                while out.len() < n && m <= MAX_INDEX {
                    out.push(Point::Real(m));
                    m *= 2.0;
                }
            }
            Direction::PartitionsOf { a, b, .. } => {
                let mut cells = 1usize;
                while out.len() < n && cells <= MAX_PARTITION_CELLS {
                    out.push(Point::Partition(Partition::uniform(a, b, cells)));
                    cells *= 2;
                }
            }
        }
        out
    }

    /// Probe points from `chain[k]` (included) up to `chain[k + 1]`
    /// (excluded), `per` per side. The last chain point probes only itself.
    pub fn segment_probes(&self, chain: &[Point], k: usize, per: usize) -> Vec<Point> {
        let per = per.max(1);
        let Some(next) = chain.get(k + 1) else {
            return chain.get(k).map(|p| self.at_offset_or_self(p)).unwrap_or_default();
        };
        let here = &chain[k];
        match (self, here, next) {
            (
                Direction::LeftAt { x0, .. }
                | Direction::RightAt { x0, .. }
                | Direction::TwoSidedAt { x0, .. },
                Point::Real(a),
                Point::Real(b),
            ) => {
                let (da, db) = ((a - x0).abs(), (b - x0).abs());
                let mut out = Vec::with_capacity(2 * per);
                let mut last = f64::NAN;
                for j in 0..per {
                    let d = snap(da - (da - db) * (j as f64) / (per as f64));
                    if d == last || d <= db {
                        continue;
                    }
                    last = d;
                    out.extend(self.at_offset(d));
                }
                out
            }
            (
                Direction::ToInfinity { .. } | Direction::ToMinusInfinity { .. },
                Point::Real(a),
                Point::Real(b),
            ) => {
                let mut out = Vec::with_capacity(per);
                let mut last = f64::NAN;
                for j in 0..per {
                    let x = snap(a + (b - a) * (j as f64) / (per as f64));
                    if x == last || x.abs() >= b.abs() {
                        continue;
                    }
                    last = x;
                    out.push(Point::Real(x));
                }
                out
            }
            (Direction::Naturals { .. }, Point::Real(a), Point::Real(b)) => {
                let span = b - a;
                let mut out = Vec::with_capacity(per);
                let mut last = f64::NAN;
                for j in 0..per {
                    let m = a + (span * (j as f64) / (per as f64)).floor();
                    if m == last || m >= *b {
                        continue;
                    }
                    last = m;
                    out.push(Point::Real(m));
                }
                out
            }
            _ => vec![here.clone()],
        }
    }

    fn at_offset_or_self(&self, p: &Point) -> Vec<Point> {
        match (self.center(), p) {
            (Some(x0), Point::Real(x)) if matches!(self, Direction::TwoSidedAt { .. }) => {
                self.at_offset((x - x0).abs())
            }
            _ => vec![p.clone()],
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::LeftAt { x0, .. } => write!(f, "left:{x0}"),
            Direction::RightAt { x0, .. } => write!(f, "right:{x0}"),
            Direction::TwoSidedAt { x0, .. } => write!(f, "both:{x0}"),
            Direction::ToInfinity { .. } => write!(f, "inf"),
            Direction::ToMinusInfinity { .. } => write!(f, "-inf"),
            Direction::Naturals { .. } => write!(f, "seq"),
            Direction::PartitionsOf { a, b, .. } => write!(f, "riemann:{a}:{b}"),
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses the `--dir` mini-syntax: `left:<x0>`, `right:<x0>`, `both:<x0>`,
/// `inf`, `-inf`, `seq`, `riemann:<a>:<b>`.
impl FromStr for Direction {
    type Err = LimitError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |field: &'static str, v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| param(field, format!("`{v}` is not a number")))
        };
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match (head, rest.as_slice()) {
            ("left", [x0]) => Direction::left_at(num("x0", x0)?),
            ("right", [x0]) => Direction::right_at(num("x0", x0)?),
            ("both", [x0]) => Direction::two_sided_at(num("x0", x0)?),
            ("inf" | "+inf", []) => Ok(Direction::to_infinity()),
            ("-inf", []) => Ok(Direction::to_minus_infinity()),
            ("seq", []) => Ok(Direction::naturals()),
            ("riemann", [a, b]) => Direction::partitions_of(num("a", a)?, num("b", b)?),
            _ => Err(param(
                "dir",
                format!("unrecognised direction `{s}`; expected left:<x0>, right:<x0>, both:<x0>, inf, -inf, seq or riemann:<a>:<b>"),
            )),
        }
    }
}

/// Compensated sum of `Σ f(t_i) (g(x_{i+1}) - g(x_i))` over the partition.
pub fn riemann_stieltjes_sum(
    f: &dyn Fn(f64) -> f64,
    g: &dyn Fn(f64) -> f64,
    partition: &Partition,
    tag: TagRule,
) -> Result<f64> {
    let pts = partition.points();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut g_prev = g(pts[0]);
    if !g_prev.is_finite() {
        return Err(LimitError::Evaluation { step: 0, anchor: format!("g({})", pts[0]) });
    }
    for (i, w) in pts.windows(2).enumerate() {
        let g_next = g(w[1]);
        let t = tag.tag(w[0], w[1]);
        let ft = f(t);
        if !g_next.is_finite() {
            return Err(LimitError::Evaluation { step: i, anchor: format!("g({})", w[1]) });
        }
        if !ft.is_finite() {
            return Err(LimitError::Evaluation { step: i, anchor: format!("f({t})") });
        }
        let term = ft * (g_next - g_prev);
        // Neumaier's variant of Kahan summation
        let s = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - s) + term } else { (term - s) + sum };
        sum = s;
        g_prev = g_next;
    }
    Ok(sum + comp)
}

/// The net `P -> Σ f(t_i) (g(x_{i+1}) - g(x_i))` on a partition direction.
/// Partitions where `f` or `g` is not finite evaluate to NaN.
pub fn riemann_stieltjes_net(
    label: impl Into<String>,
    f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    dir: &Direction,
) -> Result<Net> {
    let Direction::PartitionsOf { tag, .. } = *dir else {
        return Err(param("dir", format!("Riemann-Stieltjes nets need a partition direction, got {dir}")));
    };
    Ok(Net::new(label, move |p: &Point| match p {
        Point::Partition(part) => riemann_stieltjes_sum(&f, &g, part, tag).unwrap_or(f64::NAN),
        Point::Real(_) => f64::NAN,
    }))
}

//! Optimal two-segment paths (RS, SR, LS, SL, RL, LR) under heading intervals.
//!
//! Everything here works in the canonical frame: departure point at the
//! origin, arrival point at `(xbar, 0)`. Only RS and RL are solved directly;
//! the other four kinds are mapped onto them by mirror symmetries.
//!
//! For RS the path length is strictly increasing in the departure heading
//! (its derivative is `xbar·sin φ` with `φ ∈ [0, π]`), so the optimum sits at
//! the smallest feasible departure heading: the straight line, the interval's
//! lower end, a point where the arrival heading reaches an end of its
//! interval, or the pure right arc where the path starts to exist.
//!
//! For RL the length derivative factors as
//! `sin(a1/2)·sin(a2/2)·sin((a1−a2)/2) / sin(a2)` (up to a constant), so its
//! interior extremes are the symmetric path `a1 = a2` (departure heading
//! `asin(xbar/4ρ)` or its supplement), the existence limit `a2 = π`
//! (where `sin θ1 = (xbar² − 8ρ²)/(2·xbar·ρ)`), and the pure single arcs.
//! All of these have closed forms.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angle::{normalize, Arc};
use crate::dubins::{heading_of_left_normal, left_normal, Point, Segment, TurnRadius, GEOMETRY_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TwoSegmentKind {
    RS,
    SR,
    LS,
    SL,
    RL,
    LR,
}

impl TwoSegmentKind {
    /// Order used when assembling candidates.
    pub const ALL: [TwoSegmentKind; 6] = [
        TwoSegmentKind::RS,
        TwoSegmentKind::SR,
        TwoSegmentKind::LS,
        TwoSegmentKind::SL,
        TwoSegmentKind::LR,
        TwoSegmentKind::RL,
    ];

    pub fn segments(self) -> [Segment; 2] {
        use Segment::*;
        match self {
            TwoSegmentKind::RS => [Right, Straight],
            TwoSegmentKind::SR => [Straight, Right],
            TwoSegmentKind::LS => [Left, Straight],
            TwoSegmentKind::SL => [Straight, Left],
            TwoSegmentKind::RL => [Right, Left],
            TwoSegmentKind::LR => [Left, Right],
        }
    }

    pub fn is_curve_curve(self) -> bool {
        matches!(self, TwoSegmentKind::RL | TwoSegmentKind::LR)
    }
}

impl fmt::Display for TwoSegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Which of the two curve-curve solutions a path belongs to: the second arc
/// at most a half turn, or more.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Short,
    Long,
}

impl Branch {
    pub fn of_second_arc(angle: f64) -> Self {
        if angle <= PI {
            Branch::Short
        } else {
            Branch::Long
        }
    }
}

/// A concrete two-segment path in the canonical frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSegmentGeometry {
    pub kind: TwoSegmentKind,
    pub theta1: f64,
    pub theta2: f64,
    /// Angle below the x axis of the heading at the junction of the two
    /// segments, in `[0, 2π)`.
    pub phi: f64,
    /// Segment lengths in the order of `kind.segments()`.
    pub seg_lengths: [f64; 2],
    pub straight_len: f64,
    pub total: f64,
    pub branch: Option<Branch>,
}

/// Where on the feasible set a candidate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extremum {
    DepartureMin,
    DepartureMax,
    ArrivalMin,
    ArrivalMax,
    /// Interior stationary point (symmetric curve-curve path).
    Stationary,
    /// Limit of existence (second arc exactly a half turn).
    ExistenceLimit,
    /// The straight segment alone.
    Straight,
    /// A single right arc.
    ArcRight,
    /// A single left arc.
    ArcLeft,
}

impl Extremum {
    pub fn is_degenerate(self) -> bool {
        matches!(self, Extremum::Straight | Extremum::ArcRight | Extremum::ArcLeft)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSegmentCandidate {
    pub geometry: TwoSegmentGeometry,
    pub extremum: Extremum,
}

fn arc_angle(a: f64) -> f64 {
    let n = normalize(a);
    if n > TAU - GEOMETRY_TOL {
        0.0
    } else {
        n
    }
}

fn sub(a: Point, b: Point) -> Point {
    Point::new(a.x - b.x, a.y - b.y)
}

fn norm(p: Point) -> f64 {
    p.x.hypot(p.y)
}

/// Center of the clockwise circle leaving the origin at heading `theta1`.
fn right_center_at_origin(theta1: f64, r: f64) -> Point {
    Point::new(r * theta1.sin(), -r * theta1.cos())
}

fn heading_from_right_center_at_origin(c: Point) -> f64 {
    normalize(c.x.atan2(-c.y))
}

/// Intersections of circle `(c0, r0)` and `(c1, r1)`, tolerant of tangency.
fn circle_intersections(c0: Point, r0: f64, c1: Point, r1: f64, tol: f64) -> Vec<Point> {
    let v = sub(c1, c0);
    let d = norm(v);
    if d < tol || d > r0 + r1 + tol || d < (r0 - r1).abs() - tol {
        return Vec::new();
    }
    let a = (r0 * r0 - r1 * r1 + d * d) / (2.0 * d);
    let h = (r0 * r0 - a * a).max(0.0).sqrt();
    let u = Point::new(v.x / d, v.y / d);
    let m = Point::new(c0.x + a * u.x, c0.y + a * u.y);
    vec![
        Point::new(m.x - h * u.y, m.y + h * u.x),
        Point::new(m.x + h * u.y, m.y - h * u.x),
    ]
}

fn rs_geometry(theta1: f64, h: f64, straight: f64, r: f64) -> TwoSegmentGeometry {
    let arc = arc_angle(theta1 - h) * r;
    TwoSegmentGeometry {
        kind: TwoSegmentKind::RS,
        theta1: normalize(theta1),
        theta2: normalize(h),
        phi: normalize(-h),
        seg_lengths: [arc, straight],
        straight_len: straight,
        total: arc + straight,
        branch: None,
    }
}

/// The RS path leaving the origin at `theta1` and reaching `(xbar, 0)`.
pub fn rs_from_departure(xbar: f64, theta1: f64, rho: TurnRadius) -> Option<TwoSegmentGeometry> {
    let r = rho.get();
    let c = right_center_at_origin(theta1, r);
    let d = sub(Point::new(xbar, 0.0), c);
    let dist2 = d.x * d.x + d.y * d.y;
    if dist2 < r * r * (1.0 - 2.0 * GEOMETRY_TOL) {
        return None;
    }
    let straight = (dist2 - r * r).max(0.0).sqrt();
    let h = d.y.atan2(d.x) - r.atan2(straight);
    Some(rs_geometry(theta1, h, straight, r))
}

/// All RS paths arriving at `(xbar, 0)` with heading `theta2` (up to two).
pub fn rs_from_arrival(xbar: f64, theta2: f64, rho: TurnRadius) -> Vec<TwoSegmentGeometry> {
    let r = rho.get();
    let (s, c) = theta2.sin_cos();
    // q = P - r·n(θ2); the circle center is q - L·e(θ2) and lies on |x| = r
    let q = Point::new(xbar + r * s, -r * c);
    let qe = q.x * c + q.y * s;
    let disc = qe * qe - (q.x * q.x + q.y * q.y) + r * r;
    if disc < -GEOMETRY_TOL * r * r {
        return Vec::new();
    }
    let root = disc.max(0.0).sqrt();
    [qe - root, qe + root]
        .into_iter()
        .filter(|&l| l >= -GEOMETRY_TOL * r)
        .map(|l| {
            let l = l.max(0.0);
            let center = Point::new(q.x - l * c, q.y - l * s);
            let theta1 = heading_from_right_center_at_origin(center);
            rs_geometry(theta1, theta2, l, r)
        })
        .collect()
}

/// Single arcs of radius ρ turning in `turn` from the origin to `(xbar, 0)`.
/// Returns `(theta1, theta2, length)` for each of the (up to two) circles.
pub fn single_arcs(xbar: f64, turn: Segment, rho: TurnRadius) -> Vec<(f64, f64, f64)> {
    let r = rho.get();
    if xbar <= GEOMETRY_TOL * r || xbar > 2.0 * r * (1.0 + GEOMETRY_TOL) {
        return Vec::new();
    }
    let s = turn.sign();
    let off = (r * r - xbar * xbar / 4.0).max(0.0).sqrt();
    let p = Point::new(xbar, 0.0);
    [off, -off]
        .into_iter()
        .filter_map(|oy| {
            let c = Point::new(xbar / 2.0, oy);
            let theta1 = heading_of_left_normal(Point::new(c.x / (s * r), c.y / (s * r)));
            let n2 = sub(c, p);
            let theta2 = heading_of_left_normal(Point::new(n2.x / (s * r), n2.y / (s * r)));
            let angle = arc_angle(s * (theta2 - theta1));
            (angle > 0.0).then_some((theta1, theta2, angle * r))
        })
        .collect()
}

fn rl_geometry(theta1: f64, c1: Point, c2: Point, p: Point, r: f64) -> TwoSegmentGeometry {
    let jn = sub(c2, c1);
    let h = heading_of_left_normal(Point::new(jn.x / (2.0 * r), jn.y / (2.0 * r)));
    let n2 = sub(c2, p);
    let theta2 = heading_of_left_normal(Point::new(n2.x / r, n2.y / r));
    let a1 = arc_angle(theta1 - h);
    let a2 = arc_angle(theta2 - h);
    TwoSegmentGeometry {
        kind: TwoSegmentKind::RL,
        theta1: normalize(theta1),
        theta2,
        phi: normalize(-h),
        seg_lengths: [a1 * r, a2 * r],
        straight_len: 0.0,
        total: (a1 + a2) * r,
        branch: Some(Branch::of_second_arc(a2)),
    }
}

/// RL paths leaving the origin at `theta1` (one per branch when they exist).
pub fn rl_from_departure(xbar: f64, theta1: f64, rho: TurnRadius) -> Vec<TwoSegmentGeometry> {
    let r = rho.get();
    let p = Point::new(xbar, 0.0);
    let c1 = right_center_at_origin(theta1, r);
    circle_intersections(c1, 2.0 * r, p, r, GEOMETRY_TOL * r)
        .into_iter()
        .map(|c2| rl_geometry(theta1, c1, c2, p, r))
        .collect()
}

/// RL paths arriving at `(xbar, 0)` with heading `theta2`.
pub fn rl_from_arrival(xbar: f64, theta2: f64, rho: TurnRadius) -> Vec<TwoSegmentGeometry> {
    let r = rho.get();
    let p = Point::new(xbar, 0.0);
    let n = left_normal(theta2);
    let c2 = Point::new(p.x + r * n.x, p.y + r * n.y);
    circle_intersections(Point::new(0.0, 0.0), r, c2, 2.0 * r, GEOMETRY_TOL * r)
        .into_iter()
        .map(|c1| {
            let theta1 = heading_from_right_center_at_origin(c1);
            let mut g = rl_geometry(theta1, c1, c2, p, r);
            // the arrival heading is given exactly
            g.theta2 = normalize(theta2);
            g
        })
        .collect()
}

fn push_feasible(
    out: &mut Vec<TwoSegmentCandidate>,
    geometry: TwoSegmentGeometry,
    extremum: Extremum,
    i1: &Arc,
    i2: &Arc,
) {
    if i1.contains(geometry.theta1) && i2.contains(geometry.theta2) {
        out.push(TwoSegmentCandidate { geometry, extremum });
    }
}

/// Straight-line candidate shared by the curve-straight kinds.
fn straight_candidate(xbar: f64, i1: &Arc, i2: &Arc, kind: TwoSegmentKind) -> Option<TwoSegmentGeometry> {
    let theta = if xbar > 0.0 {
        (i1.contains(0.0) && i2.contains(0.0)).then_some(0.0)?
    } else {
        i1.common_angle(i2)?
    };
    Some(TwoSegmentGeometry {
        kind,
        theta1: theta,
        theta2: theta,
        phi: normalize(-theta),
        seg_lengths: [0.0, xbar],
        straight_len: xbar,
        total: xbar,
        branch: None,
    })
}

fn arc_geometry(kind: TwoSegmentKind, turn: Segment, (theta1, theta2, len): (f64, f64, f64)) -> TwoSegmentGeometry {
    // a lone right arc is the RL path with a vanishing left arc and vice versa
    let (seg_lengths, branch) = match (kind, turn) {
        (TwoSegmentKind::RL, Segment::Right) => ([len, 0.0], Some(Branch::Short)),
        (TwoSegmentKind::RL, _) => ([0.0, len], None),
        _ => ([len, 0.0], None),
    };
    TwoSegmentGeometry {
        kind,
        theta1,
        theta2,
        phi: normalize(if turn == Segment::Right { -theta2 } else { -theta1 }),
        seg_lengths,
        straight_len: 0.0,
        total: len,
        branch,
    }
}

/// All candidate RS optima for departure arc `i1` and arrival arc `i2`.
///
/// An empty result means no feasible RS path exists.
pub fn opt_rs(xbar: f64, i1: &Arc, i2: &Arc, rho: TurnRadius) -> Vec<TwoSegmentCandidate> {
    let mut out = Vec::new();
    if let Some(g) = straight_candidate(xbar, i1, i2, TwoSegmentKind::RS) {
        out.push(TwoSegmentCandidate {
            geometry: g,
            extremum: Extremum::Straight,
        });
    }
    for arc in single_arcs(xbar, Segment::Right, rho) {
        push_feasible(&mut out, arc_geometry(TwoSegmentKind::RS, Segment::Right, arc), Extremum::ArcRight, i1, i2);
    }
    if let Some(g) = rs_from_departure(xbar, i1.start, rho) {
        push_feasible(&mut out, g, Extremum::DepartureMin, i1, i2);
    }
    for (theta2, which) in [(i2.start, Extremum::ArrivalMin), (i2.end(), Extremum::ArrivalMax)] {
        for g in rs_from_arrival(xbar, theta2, rho) {
            push_feasible(&mut out, g, which, i1, i2);
        }
    }
    out
}

/// All candidate RL optima for departure arc `i1` and arrival arc `i2`,
/// over both branches.
pub fn opt_rl(xbar: f64, i1: &Arc, i2: &Arc, rho: TurnRadius) -> Vec<TwoSegmentCandidate> {
    let r = rho.get();
    let mut out = Vec::new();
    if xbar > 4.0 * r * (1.0 + GEOMETRY_TOL) {
        return out;
    }
    let at_departure = |theta1: f64, which: Extremum, out: &mut Vec<TwoSegmentCandidate>| {
        for g in rl_from_departure(xbar, theta1, rho) {
            push_feasible(out, g, which, i1, i2);
        }
    };

    let sym = (xbar / (4.0 * r)).min(1.0).asin();
    at_departure(sym, Extremum::Stationary, &mut out);
    at_departure(PI - sym, Extremum::Stationary, &mut out);

    if xbar > 0.0 {
        let s = (xbar * xbar - 8.0 * r * r) / (2.0 * xbar * r);
        if s.abs() <= 1.0 + GEOMETRY_TOL {
            let t = s.clamp(-1.0, 1.0).asin();
            // the two branches meet here, so the point closes both of them
            for theta1 in [t, PI - t] {
                for (g, branch) in rl_from_departure(xbar, theta1, rho).into_iter().zip([Branch::Short, Branch::Long]) {
                    let g = TwoSegmentGeometry {
                        branch: Some(branch),
                        ..g
                    };
                    push_feasible(&mut out, g, Extremum::ExistenceLimit, i1, i2);
                }
            }
        }
    }

    for arc in single_arcs(xbar, Segment::Right, rho) {
        let g = arc_geometry(TwoSegmentKind::RL, Segment::Right, arc);
        push_feasible(&mut out, g, Extremum::ArcRight, i1, i2);
        // the long branch closes here with the left arc grown to a full turn
        let looped = TwoSegmentGeometry {
            seg_lengths: [g.seg_lengths[0], TAU * r],
            total: g.total + TAU * r,
            branch: Some(Branch::Long),
            ..g
        };
        push_feasible(&mut out, looped, Extremum::ArcRight, i1, i2);
    }
    for arc in single_arcs(xbar, Segment::Left, rho) {
        let mut g = arc_geometry(TwoSegmentKind::RL, Segment::Left, arc);
        g.branch = Some(Branch::of_second_arc(arc.2 / r));
        push_feasible(&mut out, g, Extremum::ArcLeft, i1, i2);
    }

    at_departure(i1.start, Extremum::DepartureMin, &mut out);
    at_departure(i1.end(), Extremum::DepartureMax, &mut out);
    for (theta2, which) in [(i2.start, Extremum::ArrivalMin), (i2.end(), Extremum::ArrivalMax)] {
        for g in rl_from_arrival(xbar, theta2, rho) {
            push_feasible(&mut out, g, which, i1, i2);
        }
    }
    out
}

/// Symmetry mapping a two-segment problem onto RS or RL.
///
/// `reverse` traverses the path backwards and mirrors it about the
/// perpendicular bisector of the two targets: endpoints swap, segment order
/// reverses, turn directions are kept, headings map to `−θ`. `flip` mirrors
/// about the line through the targets: turn directions swap, headings map to
/// `−θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub base: TwoSegmentKind,
    pub reverse: bool,
    pub flip: bool,
}

impl Reflection {
    fn negates(&self) -> bool {
        self.reverse ^ self.flip
    }

    /// Departure and arrival arcs of the base problem.
    pub fn map_arcs(&self, i1: &Arc, i2: &Arc) -> (Arc, Arc) {
        let (a, b) = if self.reverse { (*i2, *i1) } else { (*i1, *i2) };
        if self.negates() {
            (a.negated(), b.negated())
        } else {
            (a, b)
        }
    }

    /// Maps base-problem headings back to the original problem.
    pub fn back_map(&self, theta1: f64, theta2: f64) -> (f64, f64) {
        let (a, b) = if self.negates() {
            (normalize(-theta1), normalize(-theta2))
        } else {
            (theta1, theta2)
        };
        if self.reverse {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn back_map_geometry(&self, kind: TwoSegmentKind, g: &TwoSegmentGeometry) -> TwoSegmentGeometry {
        let (theta1, theta2) = self.back_map(g.theta1, g.theta2);
        let mut seg_lengths = g.seg_lengths;
        if self.reverse {
            seg_lengths.reverse();
        }
        TwoSegmentGeometry {
            kind,
            theta1,
            theta2,
            seg_lengths,
            ..*g
        }
    }
}

pub fn reflect_problem(kind: TwoSegmentKind) -> Reflection {
    use TwoSegmentKind::*;
    let (base, reverse, flip) = match kind {
        RS => (RS, false, false),
        SR => (RS, true, false),
        LS => (RS, false, true),
        SL => (RS, true, true),
        RL => (RL, false, false),
        LR => (RL, false, true),
    };
    Reflection { base, reverse, flip }
}

/// Candidate optima of any two-segment kind, in that kind's own headings.
pub fn opt_kind(kind: TwoSegmentKind, xbar: f64, i1: &Arc, i2: &Arc, rho: TurnRadius) -> Vec<TwoSegmentCandidate> {
    let refl = reflect_problem(kind);
    let (b1, b2) = refl.map_arcs(i1, i2);
    let base = match refl.base {
        TwoSegmentKind::RS => opt_rs(xbar, &b1, &b2, rho),
        _ => opt_rl(xbar, &b1, &b2, rho),
    };
    base.into_iter()
        .map(|c| TwoSegmentCandidate {
            geometry: refl.back_map_geometry(kind, &c.geometry),
            extremum: mirror_extremum(c.extremum, &refl),
        })
        .collect()
}

fn mirror_extremum(e: Extremum, refl: &Reflection) -> Extremum {
    use Extremum::*;
    let e = if refl.reverse {
        match e {
            DepartureMin => ArrivalMin,
            DepartureMax => ArrivalMax,
            ArrivalMin => DepartureMin,
            ArrivalMax => DepartureMax,
            other => other,
        }
    } else {
        e
    };
    let e = if refl.negates() {
        match e {
            DepartureMin => DepartureMax,
            DepartureMax => DepartureMin,
            ArrivalMin => ArrivalMax,
            ArrivalMax => ArrivalMin,
            other => other,
        }
    } else {
        e
    };
    if refl.flip {
        match e {
            ArcRight => ArcLeft,
            ArcLeft => ArcRight,
            other => other,
        }
    } else {
        e
    }
}

/// The shortest candidate, if any.
pub fn best(cands: &[TwoSegmentCandidate]) -> Option<&TwoSegmentCandidate> {
    cands.iter().min_by(|a, b| a.geometry.total.total_cmp(&b.geometry.total))
}

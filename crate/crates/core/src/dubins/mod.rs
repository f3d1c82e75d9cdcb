//! Three-segment Dubins paths: construction, evaluation and forward simulation.
//!
//! Headings are measured counter-clockwise from the +x axis. `L` turns
//! counter-clockwise and `R` turns clockwise, both at the minimum radius.

pub mod kernel;

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angle::normalize;
use crate::error::{Error, Result};

/// Relative tolerance for tangent-existence predicates, in units of ρ.
pub const GEOMETRY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

/// Unit vector pointing along heading `theta`.
pub(crate) fn heading_vec(theta: f64) -> Point {
    Point::new(theta.cos(), theta.sin())
}

/// Unit normal to the left of heading `theta`.
pub(crate) fn left_normal(theta: f64) -> Point {
    Point::new(-theta.sin(), theta.cos())
}

/// Inverse of [`left_normal`].
pub(crate) fn heading_of_left_normal(n: Point) -> f64 {
    normalize((-n.x).atan2(n.y))
}

/// Planar pose; `theta` is kept in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Configuration {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize(theta),
        }
    }

    pub fn at(p: Point, theta: f64) -> Self {
        Self::new(p.x, p.y, theta)
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Minimum turning radius, strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TurnRadius(f64);

impl TurnRadius {
    pub fn new(rho: f64) -> Result<Self> {
        if rho.is_finite() && rho > 0.0 {
            Ok(Self(rho))
        } else {
            Err(Error::InvalidRadius(rho))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TurnRadius {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        TurnRadius::new(v)
    }
}

impl From<TurnRadius> for f64 {
    fn from(r: TurnRadius) -> f64 {
        r.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Segment {
    Left,
    Straight,
    Right,
}

impl Segment {
    /// +1 for counter-clockwise, -1 for clockwise, 0 for straight.
    pub fn sign(self) -> f64 {
        match self {
            Segment::Left => 1.0,
            Segment::Straight => 0.0,
            Segment::Right => -1.0,
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Segment::Left => Segment::Right,
            Segment::Right => Segment::Left,
            Segment::Straight => Segment::Straight,
        }
    }
}

/// The six candidate words. Declaration order is the tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DubinsWord {
    RSR,
    RSL,
    LSR,
    LSL,
    RLR,
    LRL,
}

impl DubinsWord {
    pub const ALL: [DubinsWord; 6] = [
        DubinsWord::RSR,
        DubinsWord::RSL,
        DubinsWord::LSR,
        DubinsWord::LSL,
        DubinsWord::RLR,
        DubinsWord::LRL,
    ];

    pub fn segments(self) -> [Segment; 3] {
        use Segment::*;
        match self {
            DubinsWord::RSR => [Right, Straight, Right],
            DubinsWord::RSL => [Right, Straight, Left],
            DubinsWord::LSR => [Left, Straight, Right],
            DubinsWord::LSL => [Left, Straight, Left],
            DubinsWord::RLR => [Right, Left, Right],
            DubinsWord::LRL => [Left, Right, Left],
        }
    }

    /// Word obtained by swapping left and right turns.
    pub fn mirrored(self) -> Self {
        match self {
            DubinsWord::RSR => DubinsWord::LSL,
            DubinsWord::RSL => DubinsWord::LSR,
            DubinsWord::LSR => DubinsWord::RSL,
            DubinsWord::LSL => DubinsWord::RSR,
            DubinsWord::RLR => DubinsWord::LRL,
            DubinsWord::LRL => DubinsWord::RLR,
        }
    }

    pub fn is_csc(self) -> bool {
        self.segments()[1] == Segment::Straight
    }
}

impl fmt::Display for DubinsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DubinsPath {
    pub word: DubinsWord,
    pub seg_lengths: [f64; 3],
    pub total: f64,
}

impl DubinsPath {
    fn from_parts(word: DubinsWord, seg_lengths: [f64; 3]) -> Self {
        Self {
            word,
            seg_lengths,
            total: seg_lengths.iter().sum(),
        }
    }
}

/// Rigid transform placing one point at the origin and another on the +x axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalFrame {
    /// Distance between the two points.
    pub xbar: f64,
    /// Angle by which world directions are rotated (world heading + rotation = frame heading).
    pub rotation: f64,
    pub translation: Point,
}

impl CanonicalFrame {
    pub fn apply(&self, p: Point) -> Point {
        let q = p.add(self.translation);
        let (s, c) = self.rotation.sin_cos();
        Point::new(c * q.x - s * q.y, s * q.x + c * q.y)
    }

    pub fn invert(&self, p: Point) -> Point {
        let (s, c) = (-self.rotation).sin_cos();
        Point::new(c * p.x - s * p.y, s * p.x + c * p.y).sub(self.translation)
    }

    pub fn apply_heading(&self, theta: f64) -> f64 {
        normalize(theta + self.rotation)
    }

    pub fn invert_heading(&self, theta: f64) -> f64 {
        normalize(theta - self.rotation)
    }
}

pub fn canonical_frame(p1: Point, p2: Point) -> CanonicalFrame {
    let d = p2.sub(p1);
    let xbar = d.norm();
    let rotation = if xbar > 0.0 { -d.angle() } else { 0.0 };
    CanonicalFrame {
        xbar,
        rotation,
        translation: p1.scale(-1.0),
    }
}

/// Normalizes an arc angle, snapping values a hair below 2π back to zero.
fn arc_angle(a: f64) -> f64 {
    let n = normalize(a);
    if n > TAU - GEOMETRY_TOL {
        0.0
    } else {
        n
    }
}

fn turn_center(p: Point, theta: f64, turn: Segment, rho: f64) -> Point {
    p.add(left_normal(theta).scale(turn.sign() * rho))
}

/// Shortest path of exactly `word`, or `None` when its tangent construction
/// has no real solution.
pub fn word_length(
    start: &Configuration,
    end: &Configuration,
    rho: TurnRadius,
    word: DubinsWord,
) -> Option<DubinsPath> {
    let r = rho.get();
    let tol = GEOMETRY_TOL * r;
    let [first, mid, last] = word.segments();
    let (s1, s3) = (first.sign(), last.sign());
    let c1 = turn_center(start.position(), start.theta, first, r);
    let c3 = turn_center(end.position(), end.theta, last, r);
    let v = c3.sub(c1);
    let dist = v.norm();

    if mid == Segment::Straight {
        let (straight, h) = if s1 == s3 {
            if dist < tol {
                // same circle: a single arc does all the turning
                (0.0, end.theta)
            } else {
                (dist, v.angle())
            }
        } else {
            if dist < 2.0 * r - tol {
                return None;
            }
            let straight = (dist * dist - 4.0 * r * r).max(0.0).sqrt();
            (straight, v.angle() - ((s3 - s1) * r).atan2(straight))
        };
        let a1 = arc_angle(s1 * (h - start.theta));
        let a3 = arc_angle(s3 * (end.theta - h));
        return Some(DubinsPath::from_parts(word, [a1 * r, straight, a3 * r]));
    }

    if dist > 4.0 * r + tol {
        return None;
    }
    let s = s1;
    let centers: Vec<Point> = if dist < tol {
        vec![c1.sub(left_normal(start.theta).scale(2.0 * s * r))]
    } else {
        let m = c1.add(c3).scale(0.5);
        let hh = (4.0 * r * r - dist * dist / 4.0).max(0.0).sqrt();
        let perp = Point::new(-v.y / dist, v.x / dist);
        vec![m.add(perp.scale(hh)), m.sub(perp.scale(hh))]
    };
    centers
        .into_iter()
        .filter_map(|c2| {
            let h1 = heading_of_left_normal(c1.sub(c2).scale(1.0 / (2.0 * s * r)));
            let h2 = heading_of_left_normal(c3.sub(c2).scale(1.0 / (2.0 * s * r)));
            let a1 = arc_angle(s * (h1 - start.theta));
            // coincident outer circles: the middle circle is a full loop
            let a2 = if dist < tol { TAU } else { arc_angle(-s * (h2 - h1)) };
            let a3 = arc_angle(s * (end.theta - h2));
            (a2 > 0.0).then(|| DubinsPath::from_parts(word, [a1 * r, a2 * r, a3 * r]))
        })
        .min_by(|a, b| a.total.total_cmp(&b.total))
}

/// Shortest curvature-constrained path between two configurations.
pub fn dubins_shortest(start: &Configuration, end: &Configuration, rho: TurnRadius) -> DubinsPath {
    let mut best: Option<DubinsPath> = None;
    for word in DubinsWord::ALL {
        if let Some(p) = word_length(start, end, rho, word) {
            if best.is_none_or(|b| p.total < b.total) {
                best = Some(p);
            }
        }
    }
    best.expect("RSR and LSL always exist for a positive radius")
}

/// Integrates a single segment in closed form.
pub fn advance(from: &Configuration, rho: TurnRadius, seg: Segment, length: f64) -> Configuration {
    if length == 0.0 {
        return *from;
    }
    let r = rho.get();
    match seg {
        Segment::Straight => {
            let p = from.position().add(heading_vec(from.theta).scale(length));
            Configuration::at(p, from.theta)
        }
        turn => {
            let s = turn.sign();
            let c = turn_center(from.position(), from.theta, turn, r);
            let theta = from.theta + s * length / r;
            let p = c.sub(left_normal(theta).scale(s * r));
            Configuration::at(p, theta)
        }
    }
}

/// Forward simulation of a word with given segment lengths.
pub fn simulate_word(
    start: &Configuration,
    rho: TurnRadius,
    word: DubinsWord,
    seg_lengths: [f64; 3],
) -> Configuration {
    word.segments()
        .iter()
        .zip(seg_lengths)
        .fold(*start, |q, (&seg, len)| advance(&q, rho, seg, len))
}

/// Distance between two poses, combining position error and heading error
/// (the latter scaled by ρ so both are lengths).
pub fn pose_error(a: &Configuration, b: &Configuration, rho: TurnRadius) -> f64 {
    let dpos = a.position().distance(&b.position());
    let dh = normalize(a.theta - b.theta);
    let dh = dh.min(TAU - dh);
    dpos.max(dh * rho.get())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn rho(r: f64) -> TurnRadius {
        TurnRadius::new(r).unwrap()
    }

    #[test]
    fn straight_rsr() {
        let r = rho(2.0);
        let p = word_length(
            &Configuration::new(0.0, 0.0, 0.0),
            &Configuration::new(20.0, 0.0, 0.0),
            r,
            DubinsWord::RSR,
        )
        .unwrap();
        assert_eq!(p.seg_lengths, [0.0, 20.0, 0.0]);
        assert_eq!(p.total, 20.0);
    }

    #[test]
    fn half_turn_rsr_is_one_arc() {
        let r = rho(1.5);
        let end = Configuration::new(0.0, -3.0, PI);
        let p = word_length(&Configuration::new(0.0, 0.0, 0.0), &end, r, DubinsWord::RSR).unwrap();
        assert!((p.seg_lengths[0] - PI * 1.5).abs() < 1e-12);
        assert!(p.seg_lengths[1].abs() < 1e-12 && p.seg_lengths[2].abs() < 1e-12);
        // brute force over arc lengths on a fine grid: nothing shorter closes the loop
        let mut best = f64::INFINITY;
        for i in 0..=400 {
            let a = i as f64 * TAU * 1.5 / 400.0;
            for j in 0..=400 {
                let b = j as f64 * TAU * 1.5 / 400.0;
                let q = simulate_word(&Configuration::new(0.0, 0.0, 0.0), r, DubinsWord::RSR, [a, 0.0, b]);
                if pose_error(&q, &end, r) < 1e-6 {
                    best = best.min(a + b);
                }
            }
        }
        assert!((best - p.total).abs() < 1e-9);
    }

    #[test]
    fn lrl_loop_through_identical_configuration() {
        let r = rho(1.0);
        let q = Configuration::new(0.0, 0.0, 0.0);
        let p = word_length(&q, &q, r, DubinsWord::LRL).unwrap();
        assert!(p.total > 0.0);
        assert!((p.total - TAU).abs() < 1e-9);
        let back = simulate_word(&q, r, p.word, p.seg_lengths);
        assert!(pose_error(&back, &q, r) < 1e-9);
    }

    #[test]
    fn simulate_quarter_arcs() {
        let r = rho(2.0);
        let q = simulate_word(
            &Configuration::new(0.0, 0.0, 0.0),
            r,
            DubinsWord::LSL,
            [PI, 1.0, PI],
        );
        // quarter left to (2,2) heading up, 1 up, quarter left to (0,5) heading π
        assert!((q.x - 0.0).abs() < 1e-12 && (q.y - 5.0).abs() < 1e-12);
        assert!((q.theta - PI).abs() < 1e-12);
        let z = simulate_word(&Configuration::new(3.0, 4.0, 1.0), r, DubinsWord::RLR, [0.0; 3]);
        assert_eq!(z, Configuration::new(3.0, 4.0, 1.0));
    }

    #[test]
    fn identity_is_free() {
        let q = Configuration::new(1.0, 2.0, 0.3);
        assert_eq!(dubins_shortest(&q, &q, rho(5.0)).total, 0.0);
    }

    #[test]
    fn rsl_needs_separated_circles() {
        let r = rho(1.0);
        let a = Configuration::new(0.0, 0.0, FRAC_PI_2);
        let b = Configuration::new(0.5, 0.0, 3.0 * FRAC_PI_2);
        assert!(word_length(&a, &b, r, DubinsWord::RSL).is_none());
    }

    #[test]
    fn canonical_frame_axis_aligned() {
        let f = canonical_frame(Point::new(1.0, 1.0), Point::new(1.0, 4.0));
        assert!((f.xbar - 3.0).abs() < 1e-15);
        assert!((f.rotation + FRAC_PI_2).abs() < 1e-15);
        let q = f.apply(Point::new(1.0, 4.0));
        assert!((q.x - 3.0).abs() < 1e-12 && q.y.abs() < 1e-12);
        let id = canonical_frame(Point::new(0.0, 0.0), Point::new(5.0, 0.0));
        assert_eq!(id.rotation, 0.0);
        assert_eq!(id.apply(Point::new(5.0, 0.0)), Point::new(5.0, 0.0));
    }

    #[test]
    fn radius_must_be_positive() {
        assert!(TurnRadius::new(0.0).is_err());
        assert!(TurnRadius::new(f64::NAN).is_err());
    }
}

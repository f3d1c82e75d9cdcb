//! Brute-force verifiers for the interval solver.
//!
//! These deliberately avoid the closed-form candidate lists: the 2-D oracle
//! samples `d12` on a dense grid, and the 1-D oracle scans the departure
//! heading of a single two-segment kind and refines around every sampled
//! minimum, feasibility change, jump, and crossing of an arrival bound.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::angle::{normalize, AngleInterval, Arc};
use crate::dubins::kernel::{self, Exact, HeadingTrig};
use crate::dubins::{canonical_frame, heading_of_left_normal, left_normal, Point, Segment, TurnRadius};

use super::two_segment::{Branch, TwoSegmentKind};

fn grid(iv: &AngleInterval, n: usize) -> Vec<f64> {
    if iv.width() == 0.0 || n < 2 {
        return vec![iv.lo()];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                iv.hi()
            } else {
                iv.lo() + iv.width() * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Side of the square blocks screened before visiting their points.
const BLOCK: usize = 16;

/// Minimum of `d12` over an `n × n` grid spanning both intervals, endpoints
/// included.
///
/// A fast kernel that provably never exceeds the exact length screens each
/// grid point; only points that could beat the running minimum are
/// evaluated exactly. Rows run in parallel; the minimum of exactly evaluated
/// points does not depend on the schedule.

pub fn grid_oracle(
    p1: Point,
    i1: &AngleInterval,
    p2: Point,
    i2: &AngleInterval,
    rho: TurnRadius,
    n_grid: usize,
) -> f64 {
    let frame = canonical_frame(p1, p2);
    let r = rho.get();
    let d = frame.xbar / r;
    let raw_rows = grid(i1, n_grid);
    let raw_cols = grid(i2, n_grid);
    let trig = |ts: &[f64]| -> Vec<HeadingTrig> { ts.iter().map(|&t| HeadingTrig::new(frame.apply_heading(t))).collect() };
    let (rows, cols) = (trig(&raw_rows), trig(&raw_cols));

    // a coarse pass over a sub-grid gives a tight starting value, so most
    // blocks are rejected without visiting their points
    let stride = (rows.len().max(cols.len()) / 32).max(1);
    let mut seed = f64::INFINITY;
    for ia in (0..rows.len()).step_by(stride).chain([rows.len() - 1]) {
        for ib in (0..cols.len()).step_by(stride).chain([cols.len() - 1]) {
            seed = seed.min(kernel::shortest::<Exact>(d, &rows[ia], &cols[ib]));
        }
    }

    let blocks = |ts: &[f64]| -> Vec<(usize, usize, HeadingTrig, f64)> {
        (0..ts.len())
            .step_by(BLOCK)
            .map(|start| {
                let end = (start + BLOCK).min(ts.len());
                let (lo, hi) = (ts[start], ts[end - 1]);
                let mid = HeadingTrig::new(frame.apply_heading(0.5 * (lo + hi)));
                (start, end, mid, 0.5 * (hi - lo) + 1e-12)
            })
            .collect()
    };
    let (row_blocks, col_blocks) = (blocks(&raw_rows), blocks(&raw_cols));

    // lengths are non-negative, so their bit patterns order like the values
    let best = AtomicU64::new(seed.to_bits());
    row_blocks.par_iter().for_each(|&(r0, r1, ref ma, ha)| {
        let mut local = f64::from_bits(best.load(Ordering::Relaxed));
        for &(c0, c1, ref mb, hb) in &col_blocks {
            if !kernel::block_might_beat(d, ma, mb, ha, hb, local) {
                continue;
            }
            for a in &rows[r0..r1] {
                for b in &cols[c0..c1] {
                    if kernel::might_beat(d, a, b, local) {
                        let v = kernel::shortest::<Exact>(d, a, b);
                        if v < local {
                            local = f64::from_bits(best.fetch_min(v.to_bits(), Ordering::Relaxed)).min(v);
                        }
                    }
                }
            }
        }
    });
    f64::from_bits(best.into_inner()) * r
}

/// One evaluated two-segment path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KindSample {
    pub theta2: f64,
    pub total: f64,
    pub branch: Option<Branch>,
    /// Second arc angle of curve-curve paths, zero otherwise.
    pub second_arc: f64,
}

fn scale(p: Point, s: f64) -> Point {
    Point::new(p.x * s, p.y * s)
}

// No snapping near a full turn: arcs just short of 2π stay long, so that
// branch minima approach their closure from inside.
fn arc(a: f64) -> f64 {
    normalize(a)
}

/// Every path of `kind` leaving the origin at `theta1` and reaching
/// `(xbar, 0)`, indexed by solution slot (slots vary continuously in
/// `theta1`). Existence is tested without tolerance so that bisection
/// toward an existence limit only ever samples genuine paths.
pub fn kind_at_departure(kind: TwoSegmentKind, xbar: f64, theta1: f64, rho: TurnRadius) -> [Option<KindSample>; 2] {
    let r = rho.get();
    let p = Point::new(xbar, 0.0);
    let n1 = left_normal(theta1);
    let e1 = Point::new(theta1.cos(), theta1.sin());
    let [first, second] = kind.segments();
    let mut out = [None, None];
    match (first, second) {
        (Segment::Straight, turn) => {
            // straight for L, then a turn whose circle passes through p
            let s = turn.sign();
            let q = Point::new(p.x - s * r * n1.x, p.y - s * r * n1.y);
            let qe = q.x * e1.x + q.y * e1.y;
            let disc = qe * qe - (q.x * q.x + q.y * q.y) + r * r;
            if disc < 0.0 {
                return out;
            }
            let root = disc.max(0.0).sqrt();
            for (slot, l) in [qe - root, qe + root].into_iter().enumerate() {
                if l < 0.0 {
                    continue;
                }
                let c = Point::new(l * e1.x + s * r * n1.x, l * e1.y + s * r * n1.y);
                let theta2 = heading_of_left_normal(scale(Point::new(c.x - p.x, c.y - p.y), 1.0 / (s * r)));
                let a = arc(s * (theta2 - theta1));
                out[slot] = Some(KindSample {
                    theta2,
                    total: l + a * r,
                    branch: None,
                    second_arc: 0.0,
                });
            }
        }
        (turn, Segment::Straight) => {
            let s = turn.sign();
            let c = scale(n1, s * r);
            let dv = Point::new(p.x - c.x, p.y - c.y);
            let dist2 = dv.x * dv.x + dv.y * dv.y;
            if dist2 < r * r {
                return out;
            }
            let l = (dist2 - r * r).max(0.0).sqrt();
            let h = dv.y.atan2(dv.x) - (-s * r).atan2(l);
            let a = arc(s * (h - theta1));
            out[0] = Some(KindSample {
                theta2: normalize(h),
                total: l + a * r,
                branch: None,
                second_arc: 0.0,
            });
        }
        (t1, t2) => {
            let (s1, s2) = (t1.sign(), t2.sign());
            let c1 = scale(n1, s1 * r);
            let v = Point::new(p.x - c1.x, p.y - c1.y);
            let dist = v.x.hypot(v.y);
            if dist > 3.0 * r || dist < r {
                return out;
            }
            let along = (3.0 * r * r + dist * dist) / (2.0 * dist);
            let h = (4.0 * r * r - along * along).max(0.0).sqrt();
            let u = scale(v, 1.0 / dist);
            for (slot, side) in [1.0, -1.0].into_iter().enumerate() {
                let c2 = Point::new(c1.x + along * u.x - side * h * u.y, c1.y + along * u.y + side * h * u.x);
                let hj = heading_of_left_normal(scale(Point::new(c2.x - c1.x, c2.y - c1.y), 1.0 / (2.0 * s2 * r)));
                let theta2 = heading_of_left_normal(scale(Point::new(c2.x - p.x, c2.y - p.y), 1.0 / (s2 * r)));
                let a1 = arc(s1 * (hj - theta1));
                let a2 = arc(s2 * (theta2 - hj));
                out[slot] = Some(KindSample {
                    theta2,
                    total: (a1 + a2) * r,
                    branch: Some(Branch::of_second_arc(a2)),
                    second_arc: a2,
                });
            }
        }
    }
    out
}

/// Result of the 1-D oracle: the overall minimum and, for curve-curve kinds,
/// the minimum over each branch.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KindOracle {
    pub overall: Option<f64>,
    pub short: Option<f64>,
    pub long: Option<f64>,
}

impl KindOracle {
    fn record(&mut self, s: &KindSample) {
        let upd = |slot: &mut Option<f64>| *slot = Some(slot.map_or(s.total, |v: f64| v.min(s.total)));
        upd(&mut self.overall);
        // the branches meet where the second arc is a half turn; such a
        // point is a limit of both
        let split = (s.second_arc - std::f64::consts::PI).abs() < 1e-6;
        match s.branch {
            Some(Branch::Short) => upd(&mut self.short),
            Some(Branch::Long) => upd(&mut self.long),
            None => {}
        }
        if split && s.branch.is_some() {
            upd(&mut self.short);
            upd(&mut self.long);
        }
    }
}

fn signed_gap(a: f64, b: f64) -> f64 {
    let g = normalize(a - b);
    if g > std::f64::consts::PI {
        g - std::f64::consts::TAU
    } else {
        g
    }
}

/// Minimum of one two-segment kind over departure arc `i1`, subject to the
/// arrival heading lying in `i2`, scanning `n` departure headings.
pub fn kind_grid_oracle(kind: TwoSegmentKind, xbar: f64, i1: &Arc, i2: &Arc, rho: TurnRadius, n: usize) -> KindOracle {
    let r = rho.get();
    let n = if i1.width == 0.0 { 1 } else { n.max(2) };
    let theta_at = |t: f64| i1.start + i1.width * t;
    let ts: Vec<f64> = (0..n)
        .map(|k| if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 })
        .collect();
    let mut res = KindOracle::default();

    for slot in 0..2 {
        let eval = |t: f64| kind_at_departure(kind, xbar, theta_at(t), rho)[slot];
        let feasible = |s: &Option<KindSample>| s.filter(|s| i2.contains(s.theta2));
        let samples: Vec<Option<KindSample>> = ts.iter().map(|&t| eval(t)).collect();
        let consider = |s: Option<KindSample>, res: &mut KindOracle| {
            if let Some(s) = feasible(&s) {
                res.record(&s);
            }
        };
        for s in &samples {
            consider(*s, &mut res);
        }

        let bisect = |mut lo: f64, mut hi: f64, pred: &dyn Fn(f64) -> bool| {
            // pred(lo) holds, pred(hi) does not
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if pred(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, hi)
        };

        // refinement between two neighbouring parameters where the path exists
        let between_existing = |ta: f64, a: KindSample, tb: f64, b: KindSample, res: &mut KindOracle| {
            // arrival heading crossing either bound of i2
            for target in [i2.start, i2.end()] {
                let ga = signed_gap(a.theta2, target);
                let gb = signed_gap(b.theta2, target);
                if ga == 0.0 || gb == 0.0 || (ga < 0.0) != (gb < 0.0) && (ga - gb).abs() < 1.0 {
                    let pred = |t: f64| eval(t).is_some_and(|s| (signed_gap(s.theta2, target) < 0.0) == (ga < 0.0));
                    let (lo, hi) = bisect(ta, tb, &pred);
                    consider(eval(lo), res);
                    consider(eval(hi), res);
                }
            }
            // jumps from an arc wrapping through a full turn
            if (a.total - b.total).abs() > 0.5 * r {
                let pred = |t: f64| eval(t).is_some_and(|s| (s.total - a.total).abs() < (s.total - b.total).abs());
                let (lo, hi) = bisect(ta, tb, &pred);
                consider(eval(lo), res);
                consider(eval(hi), res);
            }
        };

        for k in 0..n.saturating_sub(1) {
            let (ta, tb) = (ts[k], ts[k + 1]);
            let (sa, sb) = (samples[k], samples[k + 1]);
            let fa = feasible(&sa).is_some();
            let fb = feasible(&sb).is_some();

            // feasibility changes
            if fa != fb {
                let pred = |t: f64| feasible(&eval(t)).is_some() == fa;
                let (lo, hi) = bisect(ta, tb, &pred);
                consider(eval(lo), &mut res);
                consider(eval(hi), &mut res);
            }
            match (sa, sb) {
                (Some(a), Some(b)) => between_existing(ta, a, tb, b, &mut res),
                (None, None) => {}
                _ => {
                    // existence limit, then the part of the step where the path exists
                    let ea = sa.is_some();
                    let pred = |t: f64| eval(t).is_some() == ea;
                    let (lo, hi) = bisect(ta, tb, &pred);
                    let (el, eh) = (eval(lo), eval(hi));
                    consider(el, &mut res);
                    consider(eh, &mut res);
                    match (sa, sb, el, eh) {
                        (Some(a), _, Some(l), _) => between_existing(ta, a, lo, l, &mut res),
                        (_, Some(b), _, Some(h)) => between_existing(hi, h, tb, b, &mut res),
                        _ => {}
                    }
                }
            }
        }

        // golden-section refinement around sampled local minima
        let value = |s: &Option<KindSample>| feasible(s).map_or(f64::INFINITY, |s| s.total);
        for k in 1..n.saturating_sub(1) {
            let (vl, vm, vr) = (value(&samples[k - 1]), value(&samples[k]), value(&samples[k + 1]));
            if !(vm.is_finite() && vm <= vl && vm <= vr) {
                continue;
            }
            let (mut a, mut b) = (ts[k - 1], ts[k + 1]);
            let g = 0.5 * (5.0_f64.sqrt() - 1.0);
            let mut x1 = b - g * (b - a);
            let mut x2 = a + g * (b - a);
            let (mut f1, mut f2) = (value(&eval(x1)), value(&eval(x2)));
            for _ in 0..80 {
                if f1 <= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - g * (b - a);
                    f1 = value(&eval(x1));
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + g * (b - a);
                    f2 = value(&eval(x2));
                }
            }
            consider(eval(x1), &mut res);
            consider(eval(x2), &mut res);
        }
    }
    res
}

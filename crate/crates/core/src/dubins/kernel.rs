//! Length-only evaluation of the six words in the normalized frame.
//!
//! This is the closed-form trigonometric route (distance and headings scaled
//! by ρ, target 2 on the +x axis), independent of the tangent-circle
//! construction in the parent module. It is used where only lengths are
//! needed in bulk, such as the dense grid oracle, and the two routes are
//! cross-checked in tests.
//!
//! The evaluation is generic over [`Trig`] so the same formulas also yield a
//! guaranteed lower bound when run with a fast approximate `atan2`.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use super::GEOMETRY_TOL;

/// Per-endpoint trigonometry for one heading, relative to the baseline angle.
#[derive(Clone, Copy, Debug)]
pub struct HeadingTrig {
    pub angle: f64,
    pub sin: f64,
    pub cos: f64,
}

impl HeadingTrig {
    pub fn new(angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        Self { angle, sin, cos }
    }
}

/// Angle arithmetic used by the formulas.
pub trait Trig {
    fn atan2(y: f64, x: f64) -> f64;
    /// Turns a raw angle into an arc length in radians.
    fn arc(raw: f64) -> f64;
}

/// Exact evaluation through libm.
pub struct Exact;

impl Trig for Exact {
    #[inline]
    fn atan2(y: f64, x: f64) -> f64 {
        y.atan2(x)
    }

    #[inline]
    fn arc(raw: f64) -> f64 {
        let n = wrap(raw);
        if n > TAU - GEOMETRY_TOL {
            0.0
        } else {
            n
        }
    }
}

/// Reduces an angle into `[0, 2π)`; cheaper than `rem_euclid` for the small
/// multiples of 2π that occur here.
#[inline]
fn wrap(raw: f64) -> f64 {
    let mut n = raw;
    while n < 0.0 {
        n += TAU;
    }
    while n >= TAU {
        n -= TAU;
    }
    n
}

/// Maximum absolute error of [`fast_atan2`], with generous headroom.
pub const FAST_ATAN2_ERR: f64 = 1e-10;

/// Slack subtracted per angle in lower-bound mode.
const LOWER_SLACK: f64 = 1e-8;

/// Lower-bounding evaluation: approximate `atan2`, arcs rounded down by a
/// slack that dominates the approximation error, and arcs that could wrap
/// past 2π treated as zero.
pub struct LowerBound;

impl Trig for LowerBound {
    #[inline]
    fn atan2(y: f64, x: f64) -> f64 {
        fast_atan2(y, x)
    }

    #[inline]
    fn arc(raw: f64) -> f64 {
        let n = wrap(raw);
        if n > TAU - 2.0 * LOWER_SLACK {
            0.0
        } else {
            (n - LOWER_SLACK).max(0.0)
        }
    }
}

const TAN_CUTS: [f64; 4] = [
    0.098_491_403_357_164_25, // tan(π/32)
    0.303_346_683_607_342_4,  // tan(3π/32)
    0.534_511_135_950_791_6,  // tan(5π/32)
    0.820_678_790_828_660_3,  // tan(7π/32)
];
const TAN_NODES: [f64; 5] = [
    0.0,
    0.198_912_367_379_658,  // tan(π/16)
    0.414_213_562_373_095,  // tan(π/8)
    0.668_178_637_919_298_9, // tan(3π/16)
    1.0,
];

/// `atan2` accurate to about 1e-12 using table reduction and a short series.
#[inline]
pub fn fast_atan2(y: f64, x: f64) -> f64 {
    let (ax, ay) = (x.abs(), y.abs());
    let (num, den, swapped) = if ay > ax { (ax, ay, true) } else { (ay, ax, false) };
    if den == 0.0 {
        return 0.0_f64.copysign(y);
    }
    // pick the node below num/den without dividing
    let k = (num > TAN_CUTS[0] * den) as usize
        + (num > TAN_CUTS[1] * den) as usize
        + (num > TAN_CUTS[2] * den) as usize
        + (num > TAN_CUTS[3] * den) as usize;
    let c = TAN_NODES[k];
    let r = (num - c * den) / (den + c * num);
    let r2 = r * r;
    let series = r * (1.0 - r2 * (1.0 / 3.0 - r2 * (1.0 / 5.0 - r2 * (1.0 / 7.0 - r2 * (1.0 / 9.0)))));
    let mut a = k as f64 * (FRAC_PI_4 / 4.0) + series;
    if swapped {
        a = std::f64::consts::FRAC_PI_2 - a;
    }
    if x < 0.0 {
        a = std::f64::consts::PI - a;
    }
    a.copysign(y)
}

/// Lengths of all six words (in units of ρ) in declaration order of
/// [`super::DubinsWord`], `f64::INFINITY` where a word does not exist.
///
/// `d` is the target distance divided by ρ; `a` and `b` are the departure and
/// arrival headings measured from the baseline direction.
#[inline]
pub fn word_lengths<T: Trig>(d: f64, a: &HeadingTrig, b: &HeadingTrig) -> [f64; 6] {
    let (sa, ca, sb, cb) = (a.sin, a.cos, b.sin, b.cos);
    let (alpha, beta) = (a.angle, b.angle);
    let cab = ca * cb + sa * sb;
    let d2 = d * d;
    let mut out = [f64::INFINITY; 6];

    // RSR
    {
        let p2 = 2.0 + d2 - 2.0 * cab + 2.0 * d * (sb - sa);
        let tmp = T::atan2(ca - cb, d - sa + sb);
        out[0] = T::arc(alpha - tmp) + p2.max(0.0).sqrt() + T::arc(tmp - beta);
    }
    // RSL
    {
        let p2 = d2 - 2.0 + 2.0 * cab - 2.0 * d * (sa + sb);
        if p2 >= -GEOMETRY_TOL {
            let p = p2.max(0.0).sqrt();
            // atan2(ca + cb, d - sa - sb) - atan2(2, p) as a single atan2
            let (y1, x1) = (ca + cb, d - sa - sb);
            let tmp = T::atan2(y1 * p - 2.0 * x1, x1 * p + 2.0 * y1);
            out[1] = T::arc(alpha - tmp) + p + T::arc(beta - tmp);
        }
    }
    // LSR
    {
        let p2 = d2 - 2.0 + 2.0 * cab + 2.0 * d * (sa + sb);
        if p2 >= -GEOMETRY_TOL {
            let p = p2.max(0.0).sqrt();
            // atan2(-ca - cb, d + sa + sb) - atan2(-2, p)
            let (y1, x1) = (-ca - cb, d + sa + sb);
            let tmp = T::atan2(y1 * p + 2.0 * x1, x1 * p - 2.0 * y1);
            out[2] = T::arc(tmp - alpha) + p + T::arc(tmp - beta);
        }
    }
    // LSL
    {
        let p2 = 2.0 + d2 - 2.0 * cab + 2.0 * d * (sa - sb);
        let tmp = T::atan2(cb - ca, d + sa - sb);
        out[3] = T::arc(tmp - alpha) + p2.max(0.0).sqrt() + T::arc(beta - tmp);
    }
    // RLR and LRL exist whenever the outer circles are at most 4 apart;
    // keep the shorter of the two middle-arc solutions
    let rlr = (6.0 - d2 + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
    if rlr.abs() <= 1.0 + GEOMETRY_TOL {
        let base = T::atan2(ca - cb, d - sa + sb);
        let acos = acos::<T>(rlr);
        for p_raw in [TAU - acos, acos] {
            let p = T::arc(p_raw);
            let t_raw = alpha - base + p_raw / 2.0;
            let t = T::arc(t_raw);
            let q = T::arc(alpha - beta - t_raw + p_raw);
            out[4] = out[4].min(t + p + q);
        }
    }
    let lrl = (6.0 - d2 + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
    if lrl.abs() <= 1.0 + GEOMETRY_TOL {
        let base = T::atan2(ca - cb, d + sa - sb);
        let acos = acos::<T>(lrl);
        for p_raw in [TAU - acos, acos] {
            let p = T::arc(p_raw);
            let t_raw = -alpha - base + p_raw / 2.0;
            let t = T::arc(t_raw);
            let q = T::arc(beta - alpha - t_raw + p_raw);
            out[5] = out[5].min(t + p + q);
        }
    }
    out
}

/// Whether some word could be shorter than `best` (in units of ρ).
///
/// A `false` answer is a proof that every word is at least `best`; a `true`
/// answer only means the point needs an exact evaluation. The bounds use
/// the fact that the two outer arcs of a word add up, modulo 2π, to a
/// quantity known without locating the straight segment: `α − β` for RSR,
/// `β − α` for LSL, and the same plus the middle arc for RLR and LRL.
#[inline]
pub fn might_beat(d: f64, a: &HeadingTrig, b: &HeadingTrig, best: f64) -> bool {
    type B = LowerBound;
    let (sa, ca, sb, cb) = (a.sin, a.cos, b.sin, b.cos);
    let (alpha, beta) = (a.angle, b.angle);
    let cab = ca * cb + sa * sb;
    let d2 = d * d;

    // RSR and LSL: cheap bound first, then the arcs themselves
    let p2 = 2.0 + d2 - 2.0 * cab + 2.0 * d * (sb - sa);
    let p = p2.max(0.0).sqrt();
    if p + B::arc(alpha - beta) < best {
        let tmp = B::atan2(ca - cb, d - sa + sb);
        if B::arc(alpha - tmp) + p + B::arc(tmp - beta) < best {
            return true;
        }
    }
    let p2 = 2.0 + d2 - 2.0 * cab + 2.0 * d * (sa - sb);
    let p = p2.max(0.0).sqrt();
    if p + B::arc(beta - alpha) < best {
        let tmp = B::atan2(cb - ca, d + sa - sb);
        if B::arc(tmp - alpha) + p + B::arc(beta - tmp) < best {
            return true;
        }
    }

    // for RSL and LSR the arcs differ by α − β modulo 2π, which bounds
    // their sum before the tangent direction is known
    let gap = B::arc(alpha - beta).min(B::arc(beta - alpha));
    let p2 = d2 - 2.0 + 2.0 * cab - 2.0 * d * (sa + sb);
    if p2 >= -GEOMETRY_TOL {
        let p = p2.max(0.0).sqrt();
        if p + gap < best {
            let (y1, x1) = (ca + cb, d - sa - sb);
            let tmp = B::atan2(y1 * p - 2.0 * x1, x1 * p + 2.0 * y1);
            if B::arc(alpha - tmp) + p + B::arc(beta - tmp) < best {
                return true;
            }
        }
    }
    let p2 = d2 - 2.0 + 2.0 * cab + 2.0 * d * (sa + sb);
    if p2 >= -GEOMETRY_TOL {
        let p = p2.max(0.0).sqrt();
        if p + gap < best {
            let (y1, x1) = (-ca - cb, d + sa + sb);
            let tmp = B::atan2(y1 * p + 2.0 * x1, x1 * p - 2.0 * y1);
            if B::arc(tmp - alpha) + p + B::arc(tmp - beta) < best {
                return true;
            }
        }
    }

    let rlr = (6.0 - d2 + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
    let lrl = (6.0 - d2 + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
    for (x, turn, lead, y, xx) in [
        (rlr, alpha - beta, alpha, ca - cb, d - sa + sb),
        (lrl, beta - alpha, -alpha, ca - cb, d + sa - sb),
    ] {
        if x.abs() <= 1.0 + GEOMETRY_TOL {
            let acos = acos::<B>(x);
            let mut base = None;
            for p_raw in [TAU - acos, acos] {
                let p = B::arc(p_raw);
                if p + B::arc(turn + p_raw) < best {
                    let base = *base.get_or_insert_with(|| B::atan2(y, xx));
                    let t_raw = lead - base + p_raw / 2.0;
                    if B::arc(t_raw) + p + B::arc(turn - t_raw + p_raw) < best {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Lower bound on the arc `arc(c + t)` over `t ∈ [−h, h]`.
#[inline]
fn arc_floor(c: f64, h: f64) -> f64 {
    let n = wrap(c);
    if n >= h && n <= TAU - h {
        n - h
    } else {
        0.0
    }
}

/// Whether some word could be shorter than `best` for some heading pair in
/// the block `[α − ha, α + ha] × [β − hb, β + hb]` (lengths in units of ρ).
///
/// Turning centers move at unit speed as the headings change, so a distance
/// `D` between two centers moves by at most `ha + hb` and its direction by at
/// most `asin((ha + hb) / D)`. Every arc is an affine function of the
/// headings, that direction and the middle arc, so each word gets a lower
/// bound from its value at the block center and those spreads.
pub fn block_might_beat(d: f64, a: &HeadingTrig, b: &HeadingTrig, ha: f64, hb: f64, best: f64) -> bool {
    let e = ha + hb;
    let best = best + 1e-9;
    let (sa, ca, sb, cb) = (a.sin, a.cos, b.sin, b.cos);
    let (alpha, beta) = (a.angle, b.angle);
    let cab = ca * cb + sa * sb;
    let d2 = d * d;
    let turn_spread = |dist: f64| if e < dist { (e / dist).asin() } else { PI };

    let rr = (2.0 + d2 - 2.0 * cab + 2.0 * d * (sb - sa)).max(0.0).sqrt();
    let ll = (2.0 + d2 - 2.0 * cab + 2.0 * d * (sa - sb)).max(0.0).sqrt();
    let rr_dir = (ca - cb).atan2(d - sa + sb);
    let ll_dir = (cb - ca).atan2(d + sa - sb);
    let (rr_spread, ll_spread) = (turn_spread(rr), turn_spread(ll));

    // RSR and LSL
    for (dist, spread, first, last, sum) in [
        (rr, rr_spread, alpha - rr_dir, rr_dir - beta, alpha - beta),
        (ll, ll_spread, ll_dir - alpha, beta - ll_dir, beta - alpha),
    ] {
        let straight = (dist - e).max(0.0);
        let split = arc_floor(first, ha + spread) + arc_floor(last, hb + spread);
        if straight + split.max(arc_floor(sum, e)) < best {
            return true;
        }
    }

    // RSL and LSR: the tangent direction is the center direction offset by
    // asin(2 / D)
    let gap = (wrap(alpha - beta).min(wrap(beta - alpha)) - e).max(0.0);
    let rl_v = (d - sa - sb, ca + cb);
    let lr_v = (d + sa + sb, -ca - cb);
    for (v, sign) in [(rl_v, -1.0), (lr_v, 1.0)] {
        let dist = v.0.hypot(v.1);
        if dist + e < 2.0 - GEOMETRY_TOL {
            continue;
        }
        let lo = (dist - e).max(0.0);
        let straight = (lo * lo - 4.0).max(0.0).sqrt();
        let mut split = 0.0;
        if dist >= 2.0 {
            let offset = (2.0 / dist).min(1.0).asin();
            let offset_hi = (2.0 / lo.max(2.0)).min(1.0).asin();
            let offset_lo = (2.0 / (dist + e)).asin();
            let spread = turn_spread(dist) + (offset_hi - offset).max(offset - offset_lo);
            let tmp = v.1.atan2(v.0) + sign * offset;
            split = if sign < 0.0 {
                arc_floor(alpha - tmp, ha + spread) + arc_floor(beta - tmp, hb + spread)
            } else {
                arc_floor(tmp - alpha, ha + spread) + arc_floor(tmp - beta, hb + spread)
            };
        }
        if straight + split.max(gap) < best {
            return true;
        }
    }

    // RLR and LRL, for the short and the long middle arc
    for (dist, spread, lead, tail, sum) in [
        (rr, rr_spread, alpha - rr_dir, rr_dir - beta, alpha - beta),
        (ll, ll_spread, ll_dir - alpha, beta - ll_dir, beta - alpha),
    ] {
        if dist - e > 4.0 + GEOMETRY_TOL {
            continue;
        }
        let lo = ((dist - e).max(0.0) / 4.0).min(1.0);
        let hi = ((dist + e) / 4.0).min(1.0);
        let (short_lo, short_hi) = (2.0 * lo.asin(), 2.0 * hi.asin());
        for (p_lo, p_hi) in [(short_lo, short_hi), (TAU - short_hi, TAU - short_lo)] {
            let p_mid = 0.5 * (p_lo + p_hi);
            let half = 0.5 * (p_hi - p_lo);
            let split = arc_floor(lead + 0.5 * p_mid, ha + spread + 0.5 * half)
                + arc_floor(tail + 0.5 * p_mid, hb + spread + 0.5 * half);
            if p_lo + split.max(arc_floor(sum + p_mid, e + half)) < best {
                return true;
            }
        }
    }
    false
}

#[inline]
fn acos<T: Trig>(x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    T::atan2((1.0 - x * x).max(0.0).sqrt(), x)
}

/// Shortest Dubins length in units of ρ.
#[inline]
pub fn shortest<T: Trig>(d: f64, a: &HeadingTrig, b: &HeadingTrig) -> f64 {
    word_lengths::<T>(d, a, b).into_iter().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn screen_never_rejects_a_shorter_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300_000 {
            let d = if rng.gen_bool(0.3) { rng.gen_range(0.0..0.01) } else { rng.gen_range(0.0..12.0) };
            let a = HeadingTrig::new(rng.gen_range(-7.0..7.0));
            let b = HeadingTrig::new(rng.gen_range(-7.0..7.0));
            let exact = shortest::<Exact>(d, &a, &b);
            // thresholds just above the exact value must never be screened out
            for best in [exact + 1e-12, exact + 1e-6, exact + 0.1] {
                assert!(might_beat(d, &a, &b, best), "d={d} a={} b={} exact={exact}", a.angle, b.angle);
            }
            assert!(shortest::<LowerBound>(d, &a, &b) <= exact);
        }
    }

    #[test]
    fn block_screen_covers_every_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20_000 {
            let d = if rng.gen_bool(0.3) { rng.gen_range(0.0..0.5) } else { rng.gen_range(0.0..12.0) };
            let (am, bm) = (rng.gen_range(-7.0..7.0), rng.gen_range(-7.0..7.0));
            let (ha, hb) = (rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.3));
            let (ma, mb) = (HeadingTrig::new(am), HeadingTrig::new(bm));
            for k in 0..24 {
                // corners first, then interior points
                let (ua, ub) = if k < 4 {
                    ([-1.0, 1.0][k % 2], [-1.0, 1.0][k / 2])
                } else {
                    (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
                };
                let a = HeadingTrig::new(am + ua * ha);
                let b = HeadingTrig::new(bm + ub * hb);
                let exact = shortest::<Exact>(d, &a, &b);
                assert!(
                    block_might_beat(d, &ma, &mb, ha, hb, exact + 1e-12),
                    "d={d} mid=({am},{bm}) h=({ha},{hb}) point=({},{}) exact={exact}",
                    a.angle,
                    b.angle
                );
            }
        }
    }

    #[test]
    fn fast_atan2_matches_libm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst = 0.0_f64;
        for _ in 0..200_000 {
            let y: f64 = rng.gen_range(-10.0..10.0);
            let x: f64 = rng.gen_range(-10.0..10.0);
            worst = worst.max((fast_atan2(y, x) - y.atan2(x)).abs());
        }
        for (y, x) in [(0.0, 1.0), (1.0, 0.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 1.0), (1e-300, -1.0)] {
            worst = worst.max((fast_atan2(y, x) - f64::atan2(y, x)).abs());
        }
        assert!(worst < FAST_ATAN2_ERR, "worst error {worst}");
    }
}

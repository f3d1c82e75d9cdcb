//! SVG drawings of tours with exact arcs.
//!
//! World coordinates are kept as they are inside a group that flips the y
//! axis, so a counter-clockwise (left) turn is an arc with sweep flag 1.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{headings, lower_legs, upper_legs, uniform_partition, HeadingPlacement, ProblemInstance};
use crate::angle::AngleInterval;
use crate::dubins::{advance, Configuration, DubinsPath, Segment, TurnRadius};
use crate::error::{Error, Result};
use crate::gtsp::{Mode, Tour};

/// A tour as saved by the command line, enough to redraw it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TourFile {
    pub instance: String,
    pub mode: Mode,
    /// Intervals (lower) or headings (upper) per target.
    pub m_or_k: usize,
    #[serde(default = "default_placement")]
    pub placement: HeadingPlacement,
    pub tour: Tour,
}

fn default_placement() -> HeadingPlacement {
    HeadingPlacement::Endpoints
}

impl TourFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            what: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("tours always serialize") + "\n";
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// One drawn leg: where it starts and the path taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Leg {
    pub start: Configuration,
    pub path: DubinsPath,
}

/// Draws targets, the selected interval or heading at each target, and the
/// legs of the tour. Lower-bound legs are the interval-problem optima, so a
/// target may be left at a different heading than it was reached with.
pub fn render_tour(inst: &ProblemInstance, file: &TourFile) -> Result<String> {
    if file.instance != inst.name {
        return Err(Error::Invalid(format!(
            "tour belongs to instance {} but {} was given",
            file.instance, inst.name
        )));
    }
    let n = inst.n();
    let tour = &file.tour;
    if tour.order.len() != n || tour.choice.len() != n || tour.order.iter().any(|&t| t >= n) {
        return Err(Error::Invalid(format!("tour does not match the {n} targets of {}", inst.name)));
    }
    let (legs, marks): (Vec<Leg>, Vec<Mark>) = match file.mode {
        Mode::Lower => {
            let part = uniform_partition(file.m_or_k)?;
            if tour.choice.iter().any(|&c| c >= part.len()) {
                return Err(Error::Invalid("tour chooses an interval that does not exist".into()));
            }
            let legs = lower_legs(inst, tour, &part)
                .into_iter()
                .zip(tour.legs())
                .map(|(sol, (a, b))| Leg {
                    start: Configuration::at(inst.targets[a], sol.theta1),
                    path: sol.path(inst.targets[a], inst.targets[b], inst.rho),
                })
                .collect();
            let marks = (0..n).map(|i| Mark::Interval(part.intervals[tour.choice[i]])).collect();
            (legs, marks)
        }
        Mode::Upper => {
            let hs = headings(file.m_or_k, file.placement)?;
            if tour.choice.iter().any(|&c| c >= hs.len()) {
                return Err(Error::Invalid("tour chooses a heading that does not exist".into()));
            }
            let legs = upper_legs(inst, tour, &hs)
                .into_iter()
                .map(|(start, path)| Leg { start, path })
                .collect();
            let marks = (0..n).map(|i| Mark::Heading(hs[tour.choice[i]])).collect();
            (legs, marks)
        }
    };
    Ok(svg(inst, &legs, &marks, file))
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

enum Mark {
    Interval(AngleInterval),
    Heading(f64),
}

fn svg(inst: &ProblemInstance, legs: &[Leg], marks: &[Mark], file: &TourFile) -> String {
    let e = inst.extent;
    let rho = inst.rho.get();
    let pad = 0.1 * e + 2.0 * rho;
    let stroke = e / 400.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="800">"#,
        f(-pad),
        f(-pad),
        f(e + 2.0 * pad),
        f(e + 2.0 * pad)
    );
    let _ = writeln!(
        s,
        "<title>{} {} tour, {} = {}, cost {}</title>",
        xml_escape(&inst.name),
        file.mode.as_str(),
        if file.mode == Mode::Lower { "m" } else { "k" },
        file.m_or_k,
        f(file.tour.cost)
    );
    let _ = writeln!(s, r#"<g transform="translate(0 {}) scale(1 -1)">"#, f(e));
    let _ = writeln!(
        s,
        r##"<rect class="extent" x="0" y="0" width="{0}" height="{0}" fill="none" stroke="#ccc" stroke-width="{1}"/>"##,
        f(e),
        f(stroke)
    );
    for (i, leg) in legs.iter().enumerate() {
        let _ = writeln!(
            s,
            r##"<path class="leg" data-leg="{i}" d="{}" fill="none" stroke="#1f5fa8" stroke-width="{}"/>"##,
            leg_path(leg, inst.rho),
            f(stroke)
        );
    }
    let r_mark = 0.6 * rho;
    for (p, mark) in inst.targets.iter().zip(marks) {
        match mark {
            Mark::Interval(iv) => {
                let _ = writeln!(
                    s,
                    r##"<path class="interval" d="{}" fill="#e8a33d" fill-opacity="0.35" stroke="none"/>"##,
                    wedge(p.x, p.y, r_mark, iv)
                );
            }
            Mark::Heading(h) => {
                let _ = writeln!(
                    s,
                    r##"<line class="heading" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c0392b" stroke-width="{}"/>"##,
                    f(p.x),
                    f(p.y),
                    f(p.x + r_mark * h.cos()),
                    f(p.y + r_mark * h.sin()),
                    f(2.0 * stroke)
                );
            }
        }
    }
    for (i, p) in inst.targets.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle class="target" data-target="{i}" cx="{}" cy="{}" r="{}" fill="black"/>"#,
            f(p.x),
            f(p.y),
            f(3.0 * stroke)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Path data for one leg: straight segments as lines, turns as circular
/// arcs split into pieces of at most a half turn.
fn leg_path(leg: &Leg, rho: TurnRadius) -> String {
    let r = rho.get();
    let mut d = format!("M {} {}", f(leg.start.x), f(leg.start.y));
    let mut q = leg.start;
    for (seg, len) in leg.path.word.segments().into_iter().zip(leg.path.seg_lengths) {
        if len <= 0.0 {
            continue;
        }
        match seg {
            Segment::Straight => {
                q = advance(&q, rho, seg, len);
                let _ = write!(d, " L {} {}", f(q.x), f(q.y));
            }
            turn => {
                let sweep = u8::from(turn == Segment::Left);
                let pieces = (len / (std::f64::consts::PI * r)).ceil().max(1.0) as usize;
                for _ in 0..pieces {
                    q = advance(&q, rho, turn, len / pieces as f64);
                    let _ = write!(d, " A {0} {0} 0 0 {sweep} {1} {2}", f(r), f(q.x), f(q.y));
                }
            }
        }
    }
    d
}

fn wedge(cx: f64, cy: f64, r: f64, iv: &AngleInterval) -> String {
    let pt = |a: f64| (cx + r * a.cos(), cy + r * a.sin());
    let pieces = (iv.width() / std::f64::consts::PI).ceil().max(1.0) as usize;
    let (x0, y0) = pt(iv.lo());
    let mut d = format!("M {} {} L {} {}", f(cx), f(cy), f(x0), f(y0));
    for j in 1..=pieces {
        let (x, y) = pt(iv.lo() + iv.width() * j as f64 / pieces as f64);
        let _ = write!(d, " A {0} {0} 0 0 1 {1} {2}", f(r), f(x), f(y));
    }
    d.push_str(" Z");
    d
}

//! Problem instances and their JSON files.
//!
//! Files are written by hand so the field order is fixed and every float has
//! exactly 17 significant digits, which round-trips any `f64`. The file, not
//! the generator, is the artifact of record.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::dubins::{Point, TurnRadius};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub name: String,
    pub extent: f64,
    pub rho: TurnRadius,
    pub seed: u64,
    pub targets: Vec<Point>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    name: String,
    extent: f64,
    rho: f64,
    seed: u64,
    targets: Vec<[f64; 2]>,
}

impl ProblemInstance {
    pub fn n(&self) -> usize {
        self.targets.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(Error::Invalid(format!("extent must be positive, got {}", self.extent)));
        }
        if self.targets.is_empty() {
            return Err(Error::Invalid(format!("instance {} has no targets", self.name)));
        }
        for (i, p) in self.targets.iter().enumerate() {
            let inside = |v: f64| v.is_finite() && (0.0..=self.extent).contains(&v);
            if !inside(p.x) || !inside(p.y) {
                return Err(Error::Invalid(format!(
                    "target {i} of {} at ({}, {}) lies outside [0, {}]²",
                    self.name, p.x, p.y, self.extent
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let name = serde_json::to_string(&self.name).expect("strings always serialize");
        let mut s = format!(
            "{{\n  \"name\": {name},\n  \"extent\": {},\n  \"rho\": {},\n  \"seed\": {},\n  \"targets\": [\n",
            fmt17(self.extent),
            fmt17(self.rho.get()),
            self.seed
        );
        for (i, p) in self.targets.iter().enumerate() {
            let sep = if i + 1 < self.targets.len() { "," } else { "" };
            s.push_str(&format!("    [{}, {}]{sep}\n", fmt17(p.x), fmt17(p.y)));
        }
        s.push_str("  ]\n}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "instance JSON".into(),
            reason: e.to_string(),
        })?;
        let inst = Self {
            name: raw.name,
            extent: raw.extent,
            rho: TurnRadius::new(raw.rho)?,
            seed: raw.seed,
            targets: raw.targets.into_iter().map(Point::from).collect(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse { reason, .. } => Error::Parse {
                what: path.display().to_string(),
                reason,
            },
            other => other,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

/// `n` targets drawn uniformly from `[0, extent]²` with a ChaCha8 stream
/// seeded by `seed` (x then y for each target).
pub fn generate_instance(n: usize, extent: f64, rho: TurnRadius, seed: u64, name: &str) -> Result<ProblemInstance> {
    if n < 3 {
        return Err(Error::Invalid(format!("need at least 3 targets, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets = (0..n)
        .map(|_| {
            let x = rng.gen_range(0.0..=extent);
            let y = rng.gen_range(0.0..=extent);
            Point::new(x, y)
        })
        .collect();
    let inst = ProblemInstance {
        name: name.to_owned(),
        extent,
        rho,
        seed,
        targets,
    };
    inst.validate()?;
    Ok(inst)
}

/// Positional decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else if (exp as usize) < digits.len() - 1 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("{digits}{}.0", "0".repeat(exp as usize + 1 - digits.len()))
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [1000.0, 100.0, 0.1, 123.456, 1e-7, 5e20, 999.999_999_999_999_9, -2.5] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            if x.abs() < 1e16 {
                assert_eq!(s.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count(), 17, "{s}");
            }
        }
        assert_eq!(fmt17(1000.0), "1000.0000000000000");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let inst = generate_instance(20, 1000.0, TurnRadius::new(100.0).unwrap(), 7, "a").unwrap();
        let text = inst.to_json();
        let back = ProblemInstance::from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), text);
    }
}

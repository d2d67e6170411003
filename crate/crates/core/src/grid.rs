//! Frequency grid specifications.
//!
//! * `a:b:n` — `n` equispaced points from `a` to `b` inclusive. Endpoints are
//!   decimals, optionally suffixed with `pi` (`-8pi`, `0.5pi`, `pi`).
//! * `dyadic:s:k` — the points `2πj / 2^s` for `j = -k..=k`. Halving a
//!   depth-`s` grid lands exactly on the depth-`s+1` grid.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 10_000_000;
pub const MAX_DEPTH: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridSpec {
    Linear { start: f64, end: f64, count: usize },
    Dyadic { depth: u32, count: i64 },
}

fn parse_endpoint(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad grid endpoint {s:?}"));
    let (num, mult) = match s.strip_suffix("pi") {
        Some(rest) => (rest.trim(), PI),
        None => (s, 1.0),
    };
    let value = match num {
        "" | "+" if mult == PI => 1.0,
        "-" if mult == PI => -1.0,
        n => {
            if !n
                .bytes()
                .all(|b| b.is_ascii_digit() || b == b'.' || b == b'-' || b == b'+')
            {
                return Err(bad());
            }
            n.parse::<f64>().map_err(|_| bad())?
        }
    };
    let v = value * mult;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = |why: &str| Error::Parse(format!("bad grid spec {s:?}: {why}"));
        match parts.as_slice() {
            ["dyadic", depth, count] => {
                let depth: u32 = depth.trim().parse().map_err(|_| bad("depth"))?;
                let count: i64 = count.trim().parse().map_err(|_| bad("count"))?;
                if depth > MAX_DEPTH {
                    return Err(bad("depth too large"));
                }
                if count < 0 || count as u64 > (MAX_POINTS / 2) as u64 {
                    return Err(bad("count out of range"));
                }
                Ok(GridSpec::Dyadic { depth, count })
            }
            [a, b, n] => {
                let start = parse_endpoint(a)?;
                let end = parse_endpoint(b)?;
                let count: usize = n.trim().parse().map_err(|_| bad("count"))?;
                if count == 0 || count > MAX_POINTS {
                    return Err(bad("count out of range"));
                }
                if start > end {
                    return Err(bad("start exceeds end"));
                }
                if !(end - start).is_finite() {
                    return Err(bad("range too wide"));
                }
                Ok(GridSpec::Linear { start, end, count })
            }
            _ => Err(bad("expected a:b:n or dyadic:s:k")),
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            GridSpec::Linear { start, end, count } => crate::duals::linspace(start, end, count),
            GridSpec::Dyadic { depth, count } => crate::duals::dyadic_grid(depth, count),
        }
    }

    /// The grid holding every `ξ/2` for `ξ` in this grid, when one exists
    /// in closed form.
    pub fn halved(&self) -> GridSpec {
        match *self {
            GridSpec::Linear { start, end, count } => GridSpec::Linear {
                start: start / 2.0,
                end: end / 2.0,
                count,
            },
            GridSpec::Dyadic { depth, count } => GridSpec::Dyadic {
                depth: depth + 1,
                count,
            },
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Linear { start, end, count } => write!(f, "{start}:{end}:{count}"),
            GridSpec::Dyadic { depth, count } => write!(f, "dyadic:{depth}:{count}"),
        }
    }
}

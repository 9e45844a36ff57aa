//! `lo:hi[:step]` inclusive integer ranges used by the sweep flags.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
    pub step: usize,
}

impl IntRange {
    pub fn values(&self) -> Vec<usize> {
        (self.lo..=self.hi).step_by(self.step).collect()
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.step == 1 {
            write!(f, "{}:{}", self.lo, self.hi)
        } else {
            write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
        }
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(format!("range '{s}' must be lo:hi or lo:hi:step"));
        }
        let parse = |p: &str| {
            p.trim().parse::<usize>().map_err(|_| format!("bad integer '{p}' in range '{s}'"))
        };
        let lo = parse(parts[0])?;
        let hi = parse(parts[1])?;
        let step = if parts.len() == 3 { parse(parts[2])? } else { 1 };
        if lo > hi {
            return Err(format!("range '{s}' has lo > hi"));
        }
        if step == 0 {
            return Err(format!("range '{s}' has step 0"));
        }
        Ok(IntRange { lo, hi, step })
    }
}

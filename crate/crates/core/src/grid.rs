//! Parameter grids written as `start:end:count`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::C64;

/// `count` evenly spaced points from `start` to `end`, both included.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (end - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { end } else { start + h * i as f64 })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range1 {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range1 {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count }
    }

    pub fn single(x: f64) -> Self {
        Self { start: x, end: x, count: 1 }
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.count)
    }
}

impl FromStr for Range1 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidParameter(format!("grid must look like start:end:count, got `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if count == 0 || !start.is_finite() || !end.is_finite() {
            return Err(bad());
        }
        Ok(Self { start, end, count })
    }
}

impl fmt::Display for Range1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.count)
    }
}

/// Row-major grid over the complex plane: the imaginary part varies fastest.
pub fn complex_grid(re: &Range1, im: &Range1) -> Vec<C64> {
    let ims = im.points();
    re.points()
        .into_iter()
        .flat_map(|r| ims.iter().map(move |i| C64::new(r, *i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_expand() {
        let r: Range1 = "-2:0:41".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 41);
        assert_eq!(p[0], -2.0);
        assert_eq!(p[40], 0.0);
        assert!((p[20] + 1.0).abs() < 1e-15);
        assert!("1:2".parse::<Range1>().is_err());
        assert!("1:2:0".parse::<Range1>().is_err());
        assert!("a:2:3".parse::<Range1>().is_err());
    }

    #[test]
    fn complex_order() {
        let g = complex_grid(&Range1::new(0.0, 1.0, 2), &Range1::new(5.0, 6.0, 2));
        assert_eq!(g, vec![C64::new(0.0, 5.0), C64::new(0.0, 6.0), C64::new(1.0, 5.0), C64::new(1.0, 6.0)]);
    }
}

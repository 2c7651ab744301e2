//! Time grids and probability curves.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Checks that `times` is nonempty, finite, nonnegative and strictly
/// ascending.
pub fn validate_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidGrid(format!("time {t} is negative or not finite")));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!("times not ascending at {} -> {}", w[0], w[1])));
    }
    Ok(())
}

/// `steps + 1` equally spaced points on `[0, tmax]`.
pub fn linear_grid(tmax: f64, steps: usize) -> Result<Vec<f64>> {
    if !(tmax.is_finite() && tmax > 0.0) || steps == 0 {
        return Err(Error::InvalidGrid(format!("need tmax > 0 and steps >= 1, got {tmax}, {steps}")));
    }
    let mut grid: Vec<f64> = (0..=steps).map(|i| tmax * i as f64 / steps as f64).collect();
    grid[steps] = tmax;
    Ok(grid)
}

/// `t = 0` followed by `n` log-spaced points from `tmin` to `tmax`.
pub fn log_grid(tmin: f64, tmax: f64, n: usize) -> Result<Vec<f64>> {
    if !(tmin > 0.0 && tmax > tmin && tmax.is_finite()) || n < 2 {
        return Err(Error::InvalidGrid(format!("need 0 < tmin < tmax and n >= 2, got {tmin}, {tmax}, {n}")));
    }
    let (a, b) = (tmin.ln(), tmax.ln());
    let mut grid = vec![0.0];
    grid.extend((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()));
    grid[1] = tmin;
    grid[n] = tmax;
    Ok(grid)
}

/// Default grid for theorem checks: `t = 0` and 50 log-spaced points in
/// `[0.05, 5]`.
pub fn default_check_grid() -> Vec<f64> {
    log_grid(0.05, 5.0, 50).expect("constant grid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    #[serde(rename = "S_Omega")]
    SOmega,
    #[serde(rename = "f_node")]
    FNode,
    #[serde(rename = "f_level")]
    FLevel,
    #[serde(rename = "S_pair")]
    SPair,
}

impl CurveKind {
    /// Whether curves of this kind are nonadoption probabilities.
    pub fn is_survival(self) -> bool {
        matches!(self, CurveKind::SOmega | CurveKind::SPair)
    }
}

/// A probability sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CurveKind,
    /// Producing operation and its parameters.
    pub meta: Value,
}

impl Curve {
    pub fn new(times: Vec<f64>, values: Vec<f64>, kind: CurveKind, meta: Value) -> Self {
        debug_assert_eq!(times.len(), values.len());
        Self {
            times,
            values,
            kind,
            meta,
        }
    }

    /// `t,value` rows with a header, in round-trip decimal precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            out.push_str(&format!("{t},{v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }

    /// Largest violation of the kind's monotonicity and range invariants.
    pub fn invariant_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &v in &self.values {
            worst = worst.max(-v).max(v - 1.0);
        }
        for w in self.values.windows(2) {
            let step = if self.kind.is_survival() { w[1] - w[0] } else { w[0] - w[1] };
            worst = worst.max(step);
        }
        worst
    }

    /// `1 - values`, with the kind switched between S and f forms.
    pub fn complement(&self, kind: CurveKind) -> Curve {
        Curve::new(
            self.times.clone(),
            self.values.iter().map(|v| 1.0 - v).collect(),
            kind,
            self.meta.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn grids() {
        let g = linear_grid(3.0, 30).unwrap();
        assert_eq!(g.len(), 31);
        assert_eq!((g[0], g[30]), (0.0, 3.0));
        validate_grid(&g).unwrap();
        let l = default_check_grid();
        assert_eq!(l.len(), 51);
        assert_eq!((l[0], l[1], l[50]), (0.0, 0.05, 5.0));
        validate_grid(&l).unwrap();
        assert!(validate_grid(&[]).is_err());
        assert!(validate_grid(&[0.0, 1.0, 1.0]).is_err());
        assert!(validate_grid(&[-1.0, 1.0]).is_err());
        assert!(linear_grid(0.0, 5).is_err());
    }

    #[test]
    fn csv_round_trips() {
        let c = Curve::new(vec![0.0, 0.1], vec![1.0, 0.1 + 0.2], CurveKind::SOmega, json!({}));
        let csv = c.to_csv();
        assert_eq!(csv, "t,value\n0,1\n0.1,0.30000000000000004\n");
        let v: f64 = csv.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, 0.1 + 0.2);
        let back: Curve = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn defects() {
        let up = Curve::new(vec![0.0, 1.0], vec![0.0, 0.5], CurveKind::FNode, json!({}));
        assert_eq!(up.invariant_defect(), 0.0);
        let bad = Curve::new(vec![0.0, 1.0], vec![1.0, 0.5], CurveKind::FNode, json!({}));
        assert_eq!(bad.invariant_defect(), 0.5);
    }
}

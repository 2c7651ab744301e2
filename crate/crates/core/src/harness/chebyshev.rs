//! Chebyshev's integral inequality on sampled functions: for similarly
//! ordered `f` and `g` and a probability weight `w`,
//! `∫ f g w ≥ ∫ f w · ∫ g w`.

use serde_json::json;

use super::{CheckReport, FixtureRecord, Method, Verdict, EQUALITY_TOL};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`chebyshev_check_multid`].
pub const MAX_DIM: usize = 4;

/// Tolerance on `∫ w = 1`.
const WEIGHT_TOL: f64 = 1e-6;

/// Samples on the uniform tensor grid of `[0,1]^D`, row-major with the last
/// coordinate fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    pub dims: Vec<usize>,
    pub values: Vec<f64>,
}

impl GridFn {
    pub fn new(dims: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&n| n < 2) {
            return Err(Error::InvalidSize("every grid axis needs at least 2 points".into()));
        }
        let total: usize = dims.iter().product();
        if values.len() != total {
            return Err(Error::SizeMismatch(values.len(), total));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("grid values must be finite".into()));
        }
        Ok(Self { dims, values })
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(dims: Vec<usize>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let total: usize = dims.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut x = vec![0.0; dims.len()];
        for idx in 0..total {
            let mut rest = idx;
            for a in (0..dims.len()).rev() {
                x[a] = (rest % dims[a]) as f64 / (dims[a] - 1) as f64;
                rest /= dims[a];
            }
            values.push(f(&x));
        }
        Self::new(dims, values)
    }

    fn stride(&self, axis: usize) -> usize {
        self.dims[axis + 1..].iter().product()
    }

    /// Direction of `self` along `axis`.
    fn direction(&self, axis: usize) -> Direction {
        let stride = self.stride(axis);
        let n = self.dims[axis];
        let (mut up, mut down) = (false, false);
        for (idx, &v) in self.values.iter().enumerate() {
            if (idx / stride) % n + 1 < n {
                let next = self.values[idx + stride];
                up |= next > v;
                down |= next < v;
            }
        }
        match (up, down) {
            (false, false) => Direction::Constant,
            (true, false) => Direction::Up,
            (false, true) => Direction::Down,
            (true, true) => Direction::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Constant,
    Up,
    Down,
    Mixed,
}

/// Positive quadrature weights for `n` uniform points on an interval of
/// length `len`: Simpson for odd `n`, trapezoid otherwise.
fn rule(n: usize, len: f64) -> Vec<f64> {
    let h = len / (n - 1) as f64;
    if n % 2 == 1 && n >= 3 {
        (0..n)
            .map(|i| {
                let c = if i == 0 || i == n - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0
            })
            .collect()
    } else {
        (0..n)
            .map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h })
            .collect()
    }
}

/// Checks both functions are monotone along every axis, in the same sense.
fn check_order(f: &GridFn, g: &GridFn) -> Result<Vec<(Direction, Direction)>> {
    (0..f.dims.len())
        .map(|a| {
            let (df, dg) = (f.direction(a), g.direction(a));
            if df == Direction::Mixed {
                return Err(Error::NotMonotone(format!("f along coordinate {}", a + 1)));
            }
            if dg == Direction::Mixed {
                return Err(Error::NotMonotone(format!("g along coordinate {}", a + 1)));
            }
            if matches!((df, dg), (Direction::Up, Direction::Down) | (Direction::Down, Direction::Up)) {
                return Err(Error::NotMonotone(format!(
                    "f and g are oppositely ordered along coordinate {}",
                    a + 1
                )));
            }
            Ok((df, dg))
        })
        .collect()
}

/// `(∫fgw, ∫fw, ∫gw)` under the weights normalized to total mass 1.
fn moments(f: &[f64], g: &[f64], w: &[f64]) -> (f64, f64, f64) {
    let mass: f64 = w.iter().sum();
    let (mut fg, mut fw, mut gw) = (0.0, 0.0, 0.0);
    for i in 0..w.len() {
        fg += f[i] * g[i] * w[i];
        fw += f[i] * w[i];
        gw += g[i] * w[i];
    }
    (fg / mass, fw / mass, gw / mass)
}

fn report(id: String, indices: serde_json::Value, fg: f64, fw: f64, gw: f64, predict_equal: bool) -> CheckReport {
    let gap = fg - fw * gw;
    let mut r = CheckReport::new("Chebyshev integral inequality", Method::Formula);
    let observed = if gap.abs() <= EQUALITY_TOL { "equality" } else { "strict" };
    let predicted = if predict_equal { "equality" } else { "strict" };
    let mut passed = true;
    if gap < -EQUALITY_TOL {
        passed = false;
        r.fail(&id, "inequality violated", None, &[("int_fgw", fg), ("int_fw", fw), ("int_gw", gw), ("gap", gap)]);
    }
    if predict_equal && observed != "equality" {
        passed = false;
        r.fail(&id, "equality expected", None, &[("gap", gap)]);
    }
    if !predict_equal && gap <= EQUALITY_TOL {
        r.note(format!("{id}: strict gap {gap:e} is within quadrature tolerance"));
    }
    r.fixtures.push(FixtureRecord {
        id: id.clone(),
        network: id,
        indices,
        times: Vec::new(),
        method: Method::Formula,
        min_margin: gap,
        max_margin: gap,
        max_residual: 0.0,
        predicted: Some(predicted.into()),
        observed: Some(observed.into()),
        passed,
    });
    if !passed {
        r.verdict = Verdict::Fail;
    }
    r
}

/// Weighted 1D check on `n` uniform samples of `f`, `g` and `w` over
/// `[a, b]`. Equality is predicted iff `f` or `g` is constant.
pub fn chebyshev_check_1d(f: &[f64], g: &[f64], w: &[f64], a: f64, b: f64) -> Result<CheckReport> {
    let n = f.len();
    if g.len() != n {
        return Err(Error::SizeMismatch(g.len(), n));
    }
    if w.len() != n {
        return Err(Error::SizeMismatch(w.len(), n));
    }
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::InvalidParameter(format!("need a finite interval a < b, got [{a}, {b}]")));
    }
    // zeros at isolated samples (such as w = 2x at x = 0) are harmless
    if w.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::BadWeight("weight must be nonnegative and finite".into()));
    }
    let fg = GridFn::new(vec![n], f.to_vec())?;
    let gg = GridFn::new(vec![n], g.to_vec())?;
    let order = check_order(&fg, &gg)?;
    let q: Vec<f64> = rule(n, b - a).iter().zip(w).map(|(r, w)| r * w).collect();
    let mass: f64 = q.iter().sum();
    if (mass - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::BadWeight(format!("weight integrates to {mass}, not 1")));
    }
    let (fgw, fw, gw) = moments(f, g, &q);
    let (df, dg) = order[0];
    let predict_equal = df == Direction::Constant || dg == Direction::Constant;
    Ok(report(
        format!("chebyshev_1d(n={n},[{a},{b}])"),
        json!({ "n": n, "a": a, "b": b }),
        fgw,
        fw,
        gw,
        predict_equal,
    ))
}

/// Tensor-grid check on `[0,1]^D` with the uniform weight. Equality is
/// predicted iff along every coordinate one of the factors is constant.
pub fn chebyshev_check_multid(f: &GridFn, g: &GridFn) -> Result<CheckReport> {
    if f.dims != g.dims {
        return Err(Error::SizeMismatch(f.values.len(), g.values.len()));
    }
    let d = f.dims.len();
    if d > MAX_DIM {
        return Err(Error::InvalidSize(format!("dimension {d} above {MAX_DIM}")));
    }
    let order = check_order(f, g)?;
    let rules: Vec<Vec<f64>> = f.dims.iter().map(|&n| rule(n, 1.0)).collect();
    let w: Vec<f64> = (0..f.values.len())
        .map(|idx| {
            let mut rest = idx;
            let mut wt = 1.0;
            for a in (0..d).rev() {
                wt *= rules[a][rest % f.dims[a]];
                rest /= f.dims[a];
            }
            wt
        })
        .collect();
    let (fgw, fw, gw) = moments(&f.values, &g.values, &w);
    let predict_equal = order
        .iter()
        .all(|&(df, dg)| df == Direction::Constant || dg == Direction::Constant);
    Ok(report(
        format!("chebyshev_multid(dims={:?})", f.dims),
        json!({ "dims": f.dims }),
        fgw,
        fw,
        gw,
        predict_equal,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn identity_functions_uniform_weight() {
        let x = samples(101, |x| x);
        let r = chebyshev_check_1d(&x, &x, &vec![1.0; 101], 0.0, 1.0).unwrap();
        assert!(r.passed());
        // 1/3 - 1/4, exact for Simpson on quadratics
        assert!((r.fixtures[0].min_margin - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn constant_factor_is_equality() {
        let x = samples(51, |x| x * x);
        let c = vec![2.5; 51];
        let r = chebyshev_check_1d(&c, &x, &vec![1.0; 51], 0.0, 1.0).unwrap();
        assert!(r.passed());
        assert_eq!(r.fixtures[0].observed.as_deref(), Some("equality"));
    }

    #[test]
    fn weighted_against_quadrature_oracle() {
        let n = 201;
        let r = chebyshev_check_1d(&samples(n, |x| x), &samples(n, |x| x * x), &samples(n, |x| 2.0 * x), 0.0, 1.0).unwrap();
        // ∫ x^3 2x = 2/5, ∫ x 2x = 2/3, ∫ x^2 2x = 1/2
        let exact = 0.4 - (2.0 / 3.0) * 0.5;
        assert!(r.passed());
        assert!((r.fixtures[0].min_margin - exact).abs() < 1e-8);
    }

    #[test]
    fn input_errors() {
        let x = samples(11, |x| x);
        let bumpy = samples(11, |x| (6.0 * x).sin());
        assert!(matches!(chebyshev_check_1d(&bumpy, &x, &vec![1.0; 11], 0.0, 1.0), Err(Error::NotMonotone(_))));
        assert!(matches!(chebyshev_check_1d(&x, &x, &vec![0.5; 11], 0.0, 1.0), Err(Error::BadWeight(_))));
        let mut w = vec![1.0; 11];
        w[3] = -0.1;
        assert!(matches!(chebyshev_check_1d(&x, &x, &w, 0.0, 1.0), Err(Error::BadWeight(_))));
        let down: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!(matches!(chebyshev_check_1d(&x, &down, &vec![1.0; 11], 0.0, 1.0), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn multid_cases() {
        let f = GridFn::from_fn(vec![21, 21], |x| x[0]).unwrap();
        let g = GridFn::from_fn(vec![21, 21], |x| x[1]).unwrap();
        let r = chebyshev_check_multid(&f, &g).unwrap();
        assert!(r.passed());
        assert_eq!(r.fixtures[0].observed.as_deref(), Some("equality"));

        let s = GridFn::from_fn(vec![21, 21], |x| x[0] + x[1]).unwrap();
        let r = chebyshev_check_multid(&s, &s).unwrap();
        assert!(r.passed());
        // Var(x + y) = 1/6 under the uniform measure
        assert!((r.fixtures[0].min_margin - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn one_dimension_matches_1d() {
        let f = GridFn::from_fn(vec![31], |x| x[0].powi(3)).unwrap();
        let g = GridFn::from_fn(vec![31], |x| x[0].sqrt()).unwrap();
        let a = chebyshev_check_multid(&f, &g).unwrap();
        let b = chebyshev_check_1d(&f.values, &g.values, &vec![1.0; 31], 0.0, 1.0).unwrap();
        assert!((a.fixtures[0].min_margin - b.fixtures[0].min_margin).abs() < 1e-15);
    }
}

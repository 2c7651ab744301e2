//! Explicit adoption probabilities for homogeneous circles and lines and
//! for the infinite line.
//!
//! `s_circle(t, p, q, M)` is the nonadoption probability of a node on a
//! homogeneous one-sided circle of `M` nodes. With `r = -q/p` and
//! `d_k = 1 - Π_{i<=k} q/(q - ip) - Σ_{i<k} r^{k-i}/(k-i)! d_i`,
//!
//! `s_circle = Σ_{k=1}^{M-1} d_{M-k} r^{k-1}/(k-1)! e^{-(kp+q)t}
//!             + Π_{i=1}^{M-1} q/(q - ip) e^{-Mpt}`.
//!
//! The sum alternates and is evaluated in double-double arithmetic with a
//! running error bound. When `q` is close to a multiple `ip` the
//! representation has removable poles; there, and whenever the bound is too
//! loose, the value comes from the block chain instead: `B_m`, the
//! probability that a given run of `m` consecutive nodes are all
//! nonadopters, satisfies `B_m' = -(mp + q) B_m + q B_{m+1}` for `m < M`
//! and `B_M' = -Mp B_M`, with `s_circle = B_1`.

use serde::{Deserialize, Serialize};

use crate::dd::{Bounded, Dd, DD_EPS};
use crate::error::{Error, Result};
use crate::net::Sidedness;

/// Relative distance of `q` from a multiple of `p` below which the explicit
/// sum is not evaluated.
pub const SINGULAR_EPS: f64 = 1e-6;

/// Absolute error bound above which the explicit sum is replaced by the
/// block chain.
const FORMULA_MAX_ERR: f64 = 1e-14;

const BLOCK_SUBSTEP_MASS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleMethod {
    Trivial,
    Formula,
    BlockChain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleValue {
    /// Nonadoption probability.
    pub s: f64,
    /// Absolute error bound on `s`.
    pub err: f64,
    pub method: CircleMethod,
}

fn check_params(t: f64, p: f64, q: f64, m: usize) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")));
    }
    if !(p.is_finite() && p >= 0.0 && q.is_finite() && q >= 0.0) {
        return Err(Error::InvalidParameter(format!("rates must be finite and >= 0, got p={p}, q={q}")));
    }
    if m == 0 {
        return Err(Error::InvalidSize("circle needs at least one node".into()));
    }
    Ok(())
}

/// The multiple `i ∈ [1, M-1]` with `|q - ip| < SINGULAR_EPS p`, if any.
pub fn singular_multiple(p: f64, q: f64, m: usize) -> Option<usize> {
    if p <= 0.0 || m < 2 {
        return None;
    }
    let i = (q / p).round();
    if i >= 1.0 && i <= (m - 1) as f64 && (q - i * p).abs() < SINGULAR_EPS * p {
        Some(i as usize)
    } else {
        None
    }
}

/// Relative error of [`Dd::exp`] for an argument known to relative
/// precision `DD_EPS`.
pub(crate) fn exp_rel_err(arg: f64) -> f64 {
    1e-29 + 8.0 * DD_EPS * arg.abs()
}

/// Explicit sum in double-double with an absolute error bound.
///
/// Fails with `SingularParameters` near a pole and with `InvalidParameter`
/// for `p = 0`.
pub fn s_circle_dd(t: f64, p: f64, q: f64, m: usize) -> Result<Bounded> {
    check_params(t, p, q, m)?;
    if p == 0.0 {
        return Err(Error::InvalidParameter("explicit circle sum needs p > 0".into()));
    }
    if let Some(multiple) = singular_multiple(p, q, m) {
        return Err(Error::SingularParameters { p, q, multiple });
    }
    let u = 4.0 * DD_EPS;
    let (pd, qd, td) = (Dd::new(p), Dd::new(q), Dd::new(t));
    if m == 1 || q == 0.0 {
        let e = (-(pd * td)).exp();
        return Ok(Bounded::new(e, e.hi * exp_rel_err(p * t)));
    }
    let k_max = m - 1;
    let r = -(qd / pd);

    // coef[n] = r^n / n!, with relative error bound coef_rel[n]
    let mut coef = vec![Dd::ONE; k_max];
    let mut coef_rel = vec![0.0; k_max];
    for n in 1..k_max {
        coef[n] = coef[n - 1] * r / Dd::new(n as f64);
        coef_rel[n] = coef_rel[n - 1] + 4.0 * u;
    }

    // prod[k] = Π_{i<=k} q/(q - ip) for k = 0..=k_max
    let mut prod = vec![Dd::ONE; k_max + 1];
    let mut prod_rel = vec![0.0; k_max + 1];
    for i in 1..=k_max {
        let ip = Dd::new(i as f64) * pd;
        let denom = qd - ip;
        // cancellation in q - ip amplifies the rounding of ip
        let denom_rel = u * (q + i as f64 * p) / denom.hi.abs() + u;
        prod[i] = prod[i - 1] * qd / denom;
        prod_rel[i] = prod_rel[i - 1] + denom_rel + 3.0 * u;
    }

    // d[k] for k = 1..=k_max (index 0 unused)
    let mut d = vec![Dd::ZERO; k_max + 1];
    let mut d_err = vec![0.0; k_max + 1];
    for k in 1..=k_max {
        let mut v = Dd::ONE - prod[k];
        let mut mag = 1.0 + prod[k].hi.abs();
        let mut err = prod[k].hi.abs() * prod_rel[k];
        for i in 1..k {
            let c = coef[k - i];
            let term = c * d[i];
            v = v - term;
            mag += term.hi.abs();
            err += c.hi.abs() * d_err[i] + term.hi.abs() * coef_rel[k - i];
        }
        d[k] = v;
        d_err[k] = err + mag * u * (k + 2) as f64;
    }

    let mut sum = Dd::ZERO;
    let mut mag = 0.0;
    let mut err = 0.0;
    for k in 1..=k_max {
        let arg = -(Dd::new(k as f64) * pd + qd) * td;
        let e = arg.exp();
        let idx = m - k;
        let c = coef[k - 1];
        let term = d[idx] * c * e;
        sum = sum + term;
        mag += term.hi.abs();
        err += (c * e).hi.abs() * d_err[idx]
            + term.hi.abs() * (coef_rel[k - 1] + exp_rel_err(arg.hi) + 3.0 * u);
    }
    let mp_t = Dd::new(m as f64) * pd * td;
    let tail = prod[k_max] * (-mp_t).exp();
    sum = sum + tail;
    mag += tail.hi.abs();
    err += tail.hi.abs() * (prod_rel[k_max] + exp_rel_err(mp_t.hi) + u);
    err += mag * u * (m + 2) as f64;
    Ok(Bounded::new(sum, err))
}

/// Block-chain value of the circle nonadoption probability by
/// uniformization. All terms are nonnegative, so the result carries only a
/// small relative rounding error. Cost is `O(M^2 + M (Mp + q) t)`.
pub fn s_circle_block(t: f64, p: f64, q: f64, m: usize) -> Result<CircleValue> {
    check_params(t, p, q, m)?;
    let mf = m as f64;
    let big = (mf * p).max((mf - 1.0) * p + q);
    if big == 0.0 || t == 0.0 {
        return Ok(CircleValue {
            s: 1.0,
            err: 0.0,
            method: CircleMethod::BlockChain,
        });
    }
    // P = I + A / Λ: stay[m] on the diagonal, q/Λ above it (0 for the last)
    let stay: Vec<f64> = (1..=m)
        .map(|k| {
            let out = if k < m { k as f64 * p + q } else { mf * p };
            1.0 - out / big
        })
        .collect();
    let up = q / big;
    let mut b = vec![1.0; m];
    let mut acc = vec![0.0; m];
    let subs = (big * t / BLOCK_SUBSTEP_MASS).ceil().max(1.0) as usize;
    let a = big * t / subs as f64;
    let mut truncation = 0.0;
    let mut products = 0usize;
    for _ in 0..subs {
        let mut w = (-a).exp();
        for (dst, &src) in acc.iter_mut().zip(&b) {
            *dst = w * src;
        }
        let mut n = 0usize;
        loop {
            n += 1;
            w *= a / n as f64;
            // ascending sweep reads b[k + 1] before it is overwritten
            for k in 0..m {
                let next = if k + 1 < m { up * b[k + 1] } else { 0.0 };
                b[k] = stay[k] * b[k] + next;
            }
            for (dst, &src) in acc.iter_mut().zip(&b) {
                *dst += w * src;
            }
            let ratio = a / (n + 1) as f64;
            if n as f64 > a && ratio < 1.0 && w * ratio / (1.0 - ratio) < 1e-18 {
                truncation += w * ratio / (1.0 - ratio);
                products += n;
                break;
            }
        }
        b.copy_from_slice(&acc);
    }
    let s = b[0];
    let err = truncation + s * products as f64 * 4.0 * f64::EPSILON;
    Ok(CircleValue {
        s,
        err,
        method: CircleMethod::BlockChain,
    })
}

/// Circle nonadoption probability, choosing the evaluation route.
///
/// With `fallback` off, near-singular parameters fail with
/// `SingularParameters`.
pub fn s_circle_eval(t: f64, p: f64, q: f64, m: usize, fallback: bool) -> Result<CircleValue> {
    check_params(t, p, q, m)?;
    if m == 1 || q == 0.0 {
        return Ok(CircleValue {
            s: (-p * t).exp(),
            err: 2.0 * f64::EPSILON * (-p * t).exp(),
            method: CircleMethod::Trivial,
        });
    }
    if p == 0.0 {
        return s_circle_block(t, p, q, m);
    }
    match s_circle_dd(t, p, q, m) {
        Ok(v) if v.err <= FORMULA_MAX_ERR => Ok(CircleValue {
            s: v.value.to_f64(),
            err: v.err + f64::EPSILON * v.value.hi.abs(),
            method: CircleMethod::Formula,
        }),
        Err(e @ Error::SingularParameters { .. }) if !fallback => Err(e),
        Ok(_) | Err(Error::SingularParameters { .. }) => s_circle_block(t, p, q, m),
        Err(e) => Err(e),
    }
}

/// `[S_circle](t; p, q, M)` with the singular fallback enabled.
pub fn s_circle(t: f64, p: f64, q: f64, m: usize) -> Result<f64> {
    Ok(s_circle_eval(t, p, q, m, true)?.s)
}

/// Expected adoption level on a homogeneous circle of `M` nodes.
pub fn f_circle(t: f64, p: f64, q: f64, m: usize) -> Result<f64> {
    f_circle_with(t, p, q, m, true)
}

pub fn f_circle_with(t: f64, p: f64, q: f64, m: usize, fallback: bool) -> Result<f64> {
    Ok(1.0 - s_circle_eval(t, p, q, m, fallback)?.s)
}

/// Nonadoption probability on the infinite line,
/// `exp(-(p+q)t + q(1 - e^{-pt})/p)`.
pub fn s_1d(t: f64, p: f64, q: f64) -> Result<f64> {
    check_params(t, p, q, 1)?;
    // q (1 - e^{-pt}) / p, tending to q t as p -> 0
    let infl = if p > 0.0 { -q * (-p * t).exp_m1() / p } else { q * t };
    Ok((-(p + q) * t + infl).exp())
}

/// `1 - s_1d`, computed without cancellation at small `t`.
pub fn f_1d(t: f64, p: f64, q: f64) -> Result<f64> {
    check_params(t, p, q, 1)?;
    let infl = if p > 0.0 { -q * (-p * t).exp_m1() / p } else { q * t };
    Ok(-(-(p + q) * t + infl).exp_m1())
}

fn check_line_node(m: usize, j: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidSize("line needs at least one node".into()));
    }
    if j == 0 || j > m {
        return Err(Error::IndexOutOfRange { index: j, size: m });
    }
    Ok(())
}

/// Adoption probability of node `j` on a one-sided line of `M` nodes; it
/// does not depend on `M`.
pub fn f_line_one_sided(t: f64, p: f64, q: f64, m: usize, j: usize) -> Result<f64> {
    check_line_node(m, j)?;
    f_circle(t, p, q, j)
}

/// Factors of the two-sided line nonadoption probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedLine {
    /// `[S_j^L] = [S_circle](t; p, q^L, j)`: node `j` on the line with
    /// only rightward (`q^L`) edges.
    pub left: f64,
    /// `[S_j^R] = [S_circle](t; p, q^R, M - j + 1)`.
    pub right: f64,
    /// `[S_j] = e^{pt} [S_j^L] [S_j^R]`.
    pub s: f64,
}

/// Nonadoption probability of node `j` on a two-sided line, where `q_left`
/// is the rate on edges `k -> k+1` and `q_right` on `k+1 -> k`.
pub fn s_line_two_sided_parts(
    t: f64,
    p: f64,
    q_left: f64,
    q_right: f64,
    m: usize,
    j: usize,
) -> Result<TwoSidedLine> {
    check_line_node(m, j)?;
    let left = s_circle(t, p, q_left, j)?;
    let right = s_circle(t, p, q_right, m - j + 1)?;
    Ok(TwoSidedLine {
        left,
        right,
        s: (p * t).exp() * left * right,
    })
}

pub fn s_line_two_sided(t: f64, p: f64, q_left: f64, q_right: f64, m: usize, j: usize) -> Result<f64> {
    Ok(s_line_two_sided_parts(t, p, q_left, q_right, m, j)?.s)
}

/// Expected adoption level on a line of `M` nodes. A one-sided line uses
/// `q = q_left + q_right` on its single direction.
pub fn f_level_line(t: f64, p: f64, q_left: f64, q_right: f64, m: usize, sided: Sidedness) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidSize("line needs at least one node".into()));
    }
    let mut total = 0.0;
    for j in 1..=m {
        total += match sided {
            Sidedness::One => f_line_one_sided(t, p, q_left + q_right, m, j)?,
            Sidedness::Two => 1.0 - s_line_two_sided(t, p, q_left, q_right, m, j)?,
        };
    }
    Ok(total / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        for t in [0.0f64, 0.3, 2.0] {
            let base = 1.0 - (-0.3 * t).exp();
            for f in [
                f_circle(t, 0.3, 0.0, 7).unwrap(),
                f_circle(t, 0.3, 0.9, 1).unwrap(),
                f_line_one_sided(t, 0.3, 0.9, 5, 1).unwrap(),
                f_level_line(t, 0.3, 0.4, 0.5, 1, Sidedness::Two).unwrap(),
            ] {
                assert!((f - base).abs() < 4e-16);
            }
        }
        assert_eq!(f_1d(0.0, 0.2, 0.8).unwrap(), 0.0);
        assert!((f_1d(1.5, 0.2, 0.0).unwrap() - (1.0 - (-0.3f64).exp())).abs() < 1e-16);
    }

    #[test]
    fn two_nodes_match_hand_solution() {
        let (p, q): (f64, f64) = (0.1, 0.5);
        for t in [0.1, 1.0, 4.0] {
            let s: f64 = (q * (-2.0 * p * t).exp() - p * (-(p + q) * t).exp()) / (q - p);
            let v = s_circle_eval(t, p, q, 2, false).unwrap();
            assert_eq!(v.method, CircleMethod::Formula);
            assert!((v.s - s).abs() < 1e-15);
            let b = s_circle_block(t, p, q, 2).unwrap();
            assert!((b.s - s).abs() < 1e-14);
        }
    }

    #[test]
    fn formula_matches_block_chain() {
        for &(p, q) in &[(0.1, 0.35), (0.3, 1.0), (1.0, 0.1), (0.37, 2.5)] {
            for m in 2..=12 {
                for t in [0.05, 0.7, 3.0, 9.0] {
                    let f = s_circle_eval(t, p, q, m, false).unwrap();
                    let b = s_circle_block(t, p, q, m).unwrap();
                    assert!((f.s - b.s).abs() < 1e-13, "p={p} q={q} M={m} t={t}: {} vs {}", f.s, b.s);
                }
            }
        }
    }

    #[test]
    fn singular_parameters() {
        assert_eq!(singular_multiple(0.2, 0.8, 6), Some(4));
        assert_eq!(singular_multiple(0.2, 0.8, 4), None);
        assert_eq!(singular_multiple(0.2, 0.8 + 1e-9, 6), Some(4));
        assert!(matches!(
            f_circle_with(1.0, 0.2, 0.8, 6, false),
            Err(Error::SingularParameters { multiple: 4, .. })
        ));
        let near = s_circle_eval(1.0, 0.2, 0.8 * (1.0 + 1e-4), 6, false).unwrap().s;
        let at = s_circle_eval(1.0, 0.2, 0.8, 6, true).unwrap();
        assert_eq!(at.method, CircleMethod::BlockChain);
        // removable singularity: the value is continuous in q
        assert!((near - at.s).abs() < 1e-4);
    }

    #[test]
    fn bound_is_small_and_honest() {
        let v = s_circle_dd(1.0, 0.3, 0.7, 10).unwrap();
        assert!(v.err < 1e-23, "{v:?}");
        let b = s_circle_block(1.0, 0.3, 0.7, 10).unwrap();
        assert!((v.value.to_f64() - b.s).abs() <= v.err + b.err + 1e-16);
    }

    #[test]
    fn approaches_infinite_line() {
        let (p, q, t) = (0.2, 0.8, 1.0);
        let limit = f_1d(t, p, q).unwrap();
        let mut prev = 0.0;
        for m in [1, 2, 5, 10, 20, 40, 60] {
            let f = f_circle(t, p, q, m).unwrap();
            // past M = 20 the gaps fall below double resolution
            assert!(f > prev - 1e-15 && f < limit + 1e-14, "M={m}");
            prev = f;
        }
        assert!(limit - prev < 1e-6);
    }

    #[test]
    fn one_d_product_identity() {
        let (p, q1, q2) = (0.3, 0.4, 1.1);
        for t in [0.0, 0.5, 2.0, 5.0] {
            let lhs = s_1d(t, p, q1).unwrap() * s_1d(t, p, q2).unwrap();
            let rhs = (-p * t).exp() * s_1d(t, p, q1 + q2).unwrap();
            assert!((lhs - rhs).abs() < 1e-15);
        }
    }

    #[test]
    fn line_properties() {
        let (p, t) = (0.1, 1.3);
        assert_eq!(
            f_line_one_sided(t, p, 0.4, 3, 3).unwrap(),
            f_line_one_sided(t, p, 0.4, 10, 3).unwrap()
        );
        assert!(matches!(
            f_line_one_sided(t, p, 0.4, 3, 4),
            Err(Error::IndexOutOfRange { index: 4, size: 3 })
        ));
        // boundary node: left factor is e^{-pt}
        let parts = s_line_two_sided_parts(t, p, 0.3, 0.5, 6, 1).unwrap();
        assert!((parts.s - s_circle(t, p, 0.5, 6).unwrap()).abs() < 1e-15);
        for j in 1..=6 {
            let a = s_line_two_sided(t, p, 0.35, 0.35, 6, j).unwrap();
            let b = s_line_two_sided(t, p, 0.35, 0.35, 6, 7 - j).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
        let one = f_level_line(t, p, 0.3, 0.5, 6, Sidedness::One).unwrap();
        let two = f_level_line(t, p, 0.3, 0.5, 6, Sidedness::Two).unwrap();
        assert!(one < two);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(f_circle(-1.0, 0.1, 0.1, 3).is_err());
        assert!(f_circle(1.0, -0.1, 0.1, 3).is_err());
        assert!(f_circle(1.0, 0.1, f64::NAN, 3).is_err());
        assert!(f_circle(1.0, 0.1, 0.1, 0).is_err());
        assert_eq!(f_circle(1.0, 0.0, 0.5, 4).unwrap(), 0.0);
    }
}

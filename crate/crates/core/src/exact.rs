//! Exact solution of the master equations over all `2^M` adoption states.
//!
//! State `x` is a bitmask with node `j` on bit `j - 1`. Adoption only sets
//! bits, so every transition goes from `x` to a numerically larger state and
//! the generator is triangular in that order. The solver uses
//! uniformization: on a step of length `h` with uniform rate `Λ`,
//! `π(t + h) = Σ_n Pois(n; Λh) π P^n` with the stochastic matrix `P = I + Q/Λ`,
//! so every term is a sum of nonnegative numbers. Because
//! inflow to `y` comes only from smaller states, `π P` is formed in place by
//! sweeping states in descending order.

use std::collections::BTreeSet;

use serde_json::json;

use crate::curve::{validate_grid, Curve, CurveKind};
use crate::error::{Error, Result};
use crate::net::Network;

pub const DEFAULT_MAX_NODES: usize = 16;

/// Environment variable overriding [`DEFAULT_MAX_NODES`].
pub const MAX_NODES_ENV: &str = "BASSNET_MAX_NODES";

/// Beyond this the state vector alone no longer fits in memory.
const HARD_MAX_NODES: usize = 30;

/// Largest `Λh` per uniformization substep; keeps `e^{-Λh}` far from
/// underflow and the series short.
const MAX_SUBSTEP_MASS: f64 = 8.0;

/// Relative size of the Poisson tail at which the series is cut.
const TAIL_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_nodes: usize,
    /// Largest acceptable achieved tolerance.
    pub required_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let max_nodes = std::env::var(MAX_NODES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_NODES);
        Self {
            max_nodes,
            required_tol: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }
}

/// Bytes the solver allocates for `m` nodes and `n_times` output times.
pub fn memory_estimate(m: usize, n_times: usize) -> usize {
    let states = 1usize << m.min(HARD_MAX_NODES);
    states * 8 * (m + 2 + n_times)
}

/// State probabilities at each requested time.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    pub m: usize,
    pub times: Vec<f64>,
    /// `probs[i][x]` is the probability of state `x` at `times[i]`.
    pub probs: Vec<Vec<f64>>,
    /// Achieved tolerance: truncation and rounding bounds plus the largest
    /// conservation defect.
    pub tol: f64,
    label: String,
}

fn check_budget(m: usize, cfg: &SolverConfig) -> Result<()> {
    let cap = cfg.max_nodes.min(HARD_MAX_NODES);
    if m > cap {
        return Err(Error::BudgetExceeded {
            what: "exact solver nodes".into(),
            needed: m,
            cap,
        });
    }
    Ok(())
}

/// Solves with the default configuration.
pub fn solve(net: &Network, times: &[f64]) -> Result<StateDistribution> {
    solve_with(net, times, &SolverConfig::default())
}

pub fn solve_with(net: &Network, times: &[f64], cfg: &SolverConfig) -> Result<StateDistribution> {
    let m = net.size();
    check_budget(m, cfg)?;
    validate_grid(times)?;
    let n = 1usize << m;

    // lam[x * m + j]: adoption rate of j in state x (0 when j has adopted)
    let mut lam = vec![0.0; n * m];
    let mut out = vec![0.0; n];
    for x in 0..n {
        let mut total = 0.0;
        for j in 0..m {
            if x >> j & 1 == 1 {
                continue;
            }
            let mut r = net.p_all()[j];
            for &(k, q) in net.in_adj0(j) {
                if x >> k & 1 == 1 {
                    r += q;
                }
            }
            lam[x * m + j] = r;
            total += r;
        }
        out[x] = total;
    }
    let big = out.iter().copied().fold(0.0, f64::max);

    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    let mut probs = Vec::with_capacity(times.len());
    let mut truncation = 0.0;
    let mut matvecs = 0usize;
    let mut conservation: f64 = 0.0;
    let mut scratch = vec![0.0; n];
    let mut now = 0.0;

    if big > 0.0 {
        for v in lam.iter_mut() {
            *v /= big;
        }
        for v in out.iter_mut() {
            *v = 1.0 - *v / big;
        }
    }

    for &t in times {
        let span = t - now;
        if span > 0.0 && big > 0.0 {
            let subs = (big * span / MAX_SUBSTEP_MASS).ceil().max(1.0) as usize;
            let h = span / subs as f64;
            for _ in 0..subs {
                let (tail, count) = uniformization_step(&mut pi, &mut scratch, &lam, &out, m, big * h);
                truncation += tail;
                matvecs += count;
            }
        }
        now = t;
        let total: f64 = pi.iter().sum();
        conservation = conservation.max((total - 1.0).abs());
        probs.push(pi.clone());
    }

    let rounding = matvecs as f64 * (m as f64 + 3.0) * f64::EPSILON;
    let tol = truncation + rounding + conservation;
    if tol > cfg.required_tol {
        return Err(Error::ToleranceNotMet {
            achieved: tol,
            required: cfg.required_tol,
        });
    }
    Ok(StateDistribution {
        m,
        times: times.to_vec(),
        probs,
        tol,
        label: net.label().to_string(),
    })
}

/// Advances `pi` by one uniformization step of Poisson mass `a`. Returns a
/// bound on the discarded tail and the number of matrix-vector products.
fn uniformization_step(
    pi: &mut [f64],
    acc: &mut [f64],
    lam: &[f64],
    stay: &[f64],
    m: usize,
    a: f64,
) -> (f64, usize) {
    let mut w = (-a).exp();
    for (dst, &src) in acc.iter_mut().zip(pi.iter()) {
        *dst = w * src;
    }
    let mut k = 0usize;
    loop {
        k += 1;
        w *= a / k as f64;
        apply_p(pi, lam, stay, m);
        for (dst, &src) in acc.iter_mut().zip(pi.iter()) {
            *dst += w * src;
        }
        let ratio = a / (k + 1) as f64;
        if (k as f64) > a && ratio < 1.0 {
            // remaining weights are bounded by a geometric series
            let tail = w * ratio / (1.0 - ratio);
            if tail < TAIL_CUTOFF {
                pi.copy_from_slice(acc);
                return (tail, k);
            }
        }
    }
}

/// `pi <- pi P` in place, sweeping states downward so that every source
/// state `y - {j} < y` is still unmodified when `y` is written.
fn apply_p(pi: &mut [f64], lam: &[f64], stay: &[f64], m: usize) {
    for y in (0..pi.len()).rev() {
        let mut v = pi[y] * stay[y];
        let mut bits = y;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let x = y ^ (1 << j);
            v += pi[x] * lam[x * m + j];
        }
        pi[y] = v;
    }
}

fn mask_of(m: usize, nodes: impl IntoIterator<Item = usize>) -> Result<usize> {
    let mut mask = 0usize;
    for j in nodes {
        if j == 0 || j > m {
            return Err(Error::IndexOutOfRange { index: j, size: m });
        }
        mask |= 1 << (j - 1);
    }
    Ok(mask)
}

impl StateDistribution {
    /// Probability at each time that none of the nodes in `mask` adopted.
    fn none_adopted(&self, mask: usize) -> Vec<f64> {
        self.probs
            .iter()
            .map(|pi| {
                let s: f64 = pi
                    .iter()
                    .enumerate()
                    .filter(|(x, _)| x & mask == 0)
                    .map(|(_, v)| v)
                    .sum();
                s.clamp(0.0, 1.0)
            })
            .collect()
    }

    /// Probability at each time that all nodes in `mask` adopted.
    fn all_adopted(&self, mask: usize) -> Vec<f64> {
        self.probs
            .iter()
            .map(|pi| {
                let s: f64 = pi
                    .iter()
                    .enumerate()
                    .filter(|(x, _)| x & mask == mask)
                    .map(|(_, v)| v)
                    .sum();
                s.clamp(0.0, 1.0)
            })
            .collect()
    }

    fn curve(&self, values: Vec<f64>, kind: CurveKind, op: &str, nodes: &[usize]) -> Curve {
        let meta = json!({
            "op": op,
            "nodes": nodes,
            "network": self.label,
            "method": "exact",
            "tol": self.tol,
        });
        Curve::new(self.times.clone(), values, kind, meta)
    }

    /// `[S_Ω]`: probability that every node of `omega` is a nonadopter.
    pub fn survival(&self, omega: &BTreeSet<usize>) -> Result<Curve> {
        if omega.is_empty() {
            return Err(Error::BadOmega("empty node set".into()));
        }
        let mask = mask_of(self.m, omega.iter().copied())?;
        let nodes: Vec<_> = omega.iter().copied().collect();
        Ok(self.curve(self.none_adopted(mask), CurveKind::SOmega, "survival", &nodes))
    }

    /// `f_j = 1 - [S_j]`.
    pub fn f_node(&self, j: usize) -> Result<Curve> {
        let mask = mask_of(self.m, [j])?;
        let values = self.none_adopted(mask).into_iter().map(|s| 1.0 - s).collect();
        Ok(self.curve(values, CurveKind::FNode, "f_node", &[j]))
    }

    /// Expected fraction of adopters.
    pub fn f_level(&self) -> Curve {
        let values = self
            .probs
            .iter()
            .map(|pi| {
                let s: f64 = pi
                    .iter()
                    .enumerate()
                    .map(|(x, v)| v * x.count_ones() as f64)
                    .sum();
                (s / self.m as f64).clamp(0.0, 1.0)
            })
            .collect();
        self.curve(values, CurveKind::FLevel, "f_level", &[])
    }

    /// `[S_{i,j}]`.
    pub fn s_pair(&self, i: usize, j: usize) -> Result<Curve> {
        let mask = mask_of(self.m, [i, j])?;
        Ok(self.curve(self.none_adopted(mask), CurveKind::SPair, "s_pair", &[i, j]))
    }

    /// `f_{i,j}`: probability that both `i` and `j` adopted.
    pub fn f_pair(&self, i: usize, j: usize) -> Result<Vec<f64>> {
        Ok(self.all_adopted(mask_of(self.m, [i, j])?))
    }

    /// `([S_{i,j}] - [S_i][S_j]) - (f_{i,j} - f_i f_j)` at each time.
    pub fn pair_identity_residual(&self, i: usize, j: usize) -> Result<Vec<f64>> {
        if i == j {
            return Err(Error::InvalidParameter("pair needs two distinct nodes".into()));
        }
        let sij = self.s_pair(i, j)?.values;
        let si = self.none_adopted(mask_of(self.m, [i])?);
        let sj = self.none_adopted(mask_of(self.m, [j])?);
        let fij = self.f_pair(i, j)?;
        Ok((0..self.times.len())
            .map(|t| {
                let (fi, fj) = (1.0 - si[t], 1.0 - sj[t]);
                (sij[t] - si[t] * sj[t]) - (fij[t] - fi * fj)
            })
            .collect())
    }
}

pub fn survival(net: &Network, omega: &BTreeSet<usize>, times: &[f64]) -> Result<Curve> {
    if omega.is_empty() {
        return Err(Error::BadOmega("empty node set".into()));
    }
    mask_of(net.size(), omega.iter().copied())?;
    solve(net, times)?.survival(omega)
}

pub fn f_node(net: &Network, j: usize, times: &[f64]) -> Result<Curve> {
    net.check_node(j)?;
    solve(net, times)?.f_node(j)
}

pub fn f_level(net: &Network, times: &[f64]) -> Result<Curve> {
    Ok(solve(net, times)?.f_level())
}

pub fn s_pair(net: &Network, i: usize, j: usize, times: &[f64]) -> Result<Curve> {
    net.check_node(i)?;
    net.check_node(j)?;
    solve(net, times)?.s_pair(i, j)
}

pub fn pair_identity_check(net: &Network, i: usize, j: usize, times: &[f64]) -> Result<Vec<f64>> {
    net.check_node(i)?;
    net.check_node(j)?;
    solve(net, times)?.pair_identity_residual(i, j)
}

//! Circles, lines, tori and ray stars.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_rate, Network};
use crate::error::{Error, Result};

/// Largest torus the generator will build.
pub const TORUS_NODE_BUDGET: usize = 1 << 20;

/// Nearest-neighbour influence on circles and lines.
///
/// `left` is the rate at which a node is influenced by its left neighbour
/// (`j - 1 -> j`), `right` the rate from its right neighbour (`j + 1 -> j`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Influence {
    OneSided { q: f64 },
    TwoSided { left: f64, right: f64 },
}

impl Influence {
    fn rates(self) -> Result<(f64, f64)> {
        let (left, right) = match self {
            Influence::OneSided { q } => (q, 0.0),
            Influence::TwoSided { left, right } => (left, right),
        };
        check_rate(|| "left rate".into(), left)?;
        check_rate(|| "right rate".into(), right)?;
        Ok((left, right))
    }

    /// Total in-rate of an interior node.
    pub fn total(self) -> f64 {
        match self {
            Influence::OneSided { q } => q,
            Influence::TwoSided { left, right } => left + right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    One,
    Two,
}

/// Accumulates 0-based edge rates, merging parallel edges by summing.
#[derive(Default)]
struct EdgeAcc(BTreeMap<(usize, usize), f64>);

impl EdgeAcc {
    fn add(&mut self, k: usize, j: usize, rate: f64) {
        if rate > 0.0 && k != j {
            *self.0.entry((k, j)).or_insert(0.0) += rate;
        }
    }
}

fn uniform_p(m: usize, p: f64) -> Result<Vec<f64>> {
    check_rate(|| "p".into(), p)?;
    Ok(vec![p; m])
}

/// Homogeneous circle on `m` nodes.
///
/// One-sided: edges `(j-1 mod M) -> j`. Two-sided: `left` on `j-1 -> j`,
/// `right` on `j+1 -> j`; for `M = 2` the two neighbours coincide and the
/// rates are summed.
pub fn gen_circle(m: usize, p: f64, influence: Influence) -> Result<Network> {
    if m == 0 {
        return Err(Error::InvalidSize("circle needs at least one node".into()));
    }
    let (left, right) = influence.rates()?;
    let p = uniform_p(m, p)?;
    let mut acc = EdgeAcc::default();
    for j in 0..m {
        acc.add((j + m - 1) % m, j, left);
        acc.add((j + 1) % m, j, right);
    }
    let label = match influence {
        Influence::OneSided { q } => format!("circle1s(M={m},q={q})"),
        Influence::TwoSided { left, right } => {
            format!("circle2s(M={m},qL={left},qR={right})")
        }
    };
    Ok(Network::from_map(p, acc.0, label))
}

/// Homogeneous line on `m` nodes, no wraparound.
pub fn gen_line(m: usize, p: f64, influence: Influence) -> Result<Network> {
    if m == 0 {
        return Err(Error::InvalidSize("line needs at least one node".into()));
    }
    let (left, right) = influence.rates()?;
    let p = uniform_p(m, p)?;
    let mut acc = EdgeAcc::default();
    for j in 1..m {
        acc.add(j - 1, j, left);
        acc.add(j, j - 1, right);
    }
    let label = match influence {
        Influence::OneSided { q } => format!("line1s(M={m},q={q})"),
        Influence::TwoSided { left, right } => format!("line2s(M={m},qL={left},qR={right})"),
    };
    Ok(Network::from_map(p, acc.0, label))
}

/// Periodic `d`-dimensional lattice with side `m1`.
///
/// Node with coordinates `(c_1, .., c_d)` (0-based) is number
/// `1 + sum_i c_i m1^(i-1)`. Every node has total in-rate `q`: one-sided
/// tori use weight `q/d` on `j - e_i -> j`, two-sided tori `q/(2d)` on
/// `j +- e_i -> j` (summed when the two neighbours coincide at `m1 = 2`).
pub fn gen_torus(d: usize, m1: usize, p: f64, q: f64, sided: Sidedness) -> Result<Network> {
    if d == 0 {
        return Err(Error::InvalidSize("torus dimension must be >= 1".into()));
    }
    if m1 < 2 {
        return Err(Error::InvalidSize("torus side must be >= 2".into()));
    }
    let m = m1
        .checked_pow(d as u32)
        .filter(|&m| m <= TORUS_NODE_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded {
            what: format!("torus {m1}^{d} nodes"),
            needed: usize::MAX,
            cap: TORUS_NODE_BUDGET,
        })?;
    check_rate(|| "q".into(), q)?;
    let p = uniform_p(m, p)?;
    let mut acc = EdgeAcc::default();
    let weight = match sided {
        Sidedness::One => q / d as f64,
        Sidedness::Two => q / (2 * d) as f64,
    };
    let mut stride = 1;
    for _axis in 0..d {
        for j in 0..m {
            let c = (j / stride) % m1;
            let base = j - c * stride;
            let minus = base + ((c + m1 - 1) % m1) * stride;
            acc.add(minus, j, weight);
            if sided == Sidedness::Two {
                let plus = base + ((c + 1) % m1) * stride;
                acc.add(plus, j, weight);
            }
        }
        stride *= m1;
    }
    let side = match sided {
        Sidedness::One => "1s",
        Sidedness::Two => "2s",
    };
    Ok(Network::from_map(
        p,
        acc.0,
        format!("torus{side}(D={d},M1={m1},q={q})"),
    ))
}

/// `n` disjoint one-sided rays of `l` nodes each feeding a hub.
///
/// Ray `r` (0-based) occupies nodes `r*l + 1 ..= r*l + l`, oriented towards
/// the hub, which is the last node `n*l + 1`. With `n = 1` this is the
/// one-sided line of `l + 1` nodes.
pub fn gen_ray_star(n: usize, l: usize, p: f64, qt: f64) -> Result<Network> {
    if n == 0 || l == 0 {
        return Err(Error::InvalidSize("ray star needs n >= 1 and l >= 1".into()));
    }
    check_rate(|| "qt".into(), qt)?;
    let m = n * l + 1;
    let hub = m - 1;
    let p = uniform_p(m, p)?;
    let mut acc = EdgeAcc::default();
    for r in 0..n {
        let start = r * l;
        for i in 0..l {
            let next = if i + 1 < l { start + i + 1 } else { hub };
            acc.add(start + i, next, qt);
        }
    }
    Ok(Network::from_map(
        p,
        acc.0,
        format!("raystar(N={n},L={l},qt={qt})"),
    ))
}

/// 1-based hub number of [`gen_ray_star`].
pub fn ray_star_hub(n: usize, l: usize) -> usize {
    n * l + 1
}

//! Weighted directed networks for the discrete Bass model.
//!
//! A [`Network`] carries a per-node external rate `p_j` and a sparse map of
//! internal rates `q_{k,j}` on directed edges `k -> j`. Nodes are numbered
//! `1..=M` at the public surface; storage is 0-based.

mod derived;
mod generators;
mod io;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub use derived::{derive, split_node, DerivedKind, Partition};
pub use generators::{
    gen_circle, gen_line, gen_ray_star, gen_torus, ray_star_hub, Influence, Sidedness,
    TORUS_NODE_BUDGET,
};
pub use io::NetworkFile;

/// Immutable weighted digraph with external rates.
#[derive(Clone, PartialEq)]
pub struct Network {
    p: Vec<f64>,
    // 0-based (source, target) -> rate, always > 0
    edges: BTreeMap<(usize, usize), f64>,
    in_adj: Vec<Vec<(usize, f64)>>,
    out_adj: Vec<Vec<(usize, f64)>>,
    label: String,
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Network")
            .field("M", &self.size())
            .field("p", &self.p)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .field("label", &self.label)
            .finish()
    }
}

pub(crate) fn check_rate(what: impl FnOnce() -> String, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeRate {
            what: what(),
            value,
        })
    }
}

impl Network {
    /// Validates and builds a network. `edges` holds 1-based `(k, j, rate)`
    /// triples for `k -> j`.
    pub fn build<I>(m: usize, p: Vec<f64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if m == 0 {
            return Err(Error::InvalidSize("network needs at least one node".into()));
        }
        if p.len() != m {
            return Err(Error::InvalidSize(format!(
                "p has {} entries for {} nodes",
                p.len(),
                m
            )));
        }
        for (i, &v) in p.iter().enumerate() {
            check_rate(|| format!("p_{}", i + 1), v)?;
        }
        let mut map = BTreeMap::new();
        for (k, j, rate) in edges {
            for idx in [k, j] {
                if idx == 0 || idx > m {
                    return Err(Error::IndexOutOfRange {
                        index: idx,
                        size: m,
                    });
                }
            }
            if k == j {
                return Err(Error::SelfLoop(k));
            }
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::NegativeRate {
                    what: format!("q_{{{k},{j}}}"),
                    value: rate,
                });
            }
            if map.insert((k - 1, j - 1), rate).is_some() {
                return Err(Error::DuplicateEdge(k, j));
            }
        }
        Ok(Self::from_map(p, map, String::new()))
    }

    /// Builds from already validated 0-based parts.
    pub(crate) fn from_map(
        p: Vec<f64>,
        edges: BTreeMap<(usize, usize), f64>,
        label: String,
    ) -> Self {
        let m = p.len();
        let mut in_adj = vec![Vec::new(); m];
        let mut out_adj = vec![Vec::new(); m];
        for (&(k, j), &rate) in &edges {
            debug_assert!(k != j && rate > 0.0);
            in_adj[j].push((k, rate));
            out_adj[k].push((j, rate));
        }
        Self {
            p,
            edges,
            in_adj,
            out_adj,
            label,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of nodes `M`.
    pub fn size(&self) -> usize {
        self.p.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn check_node(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.size() {
            Err(Error::IndexOutOfRange {
                index: j,
                size: self.size(),
            })
        } else {
            Ok(())
        }
    }

    /// External rate of node `j` (1-based).
    pub fn p(&self, j: usize) -> Result<f64> {
        self.check_node(j)?;
        Ok(self.p[j - 1])
    }

    pub fn p_all(&self) -> &[f64] {
        &self.p
    }

    /// Rate of edge `k -> j`, 0 when absent.
    pub fn rate(&self, k: usize, j: usize) -> f64 {
        if k == 0 || j == 0 {
            return 0.0;
        }
        self.edges.get(&(k - 1, j - 1)).copied().unwrap_or(0.0)
    }

    pub fn has_edge(&self, k: usize, j: usize) -> bool {
        self.rate(k, j) > 0.0
    }

    /// All edges as 1-based `(k, j, rate)`, sorted by `(k, j)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(k, j), &r)| (k + 1, j + 1, r))
    }

    /// Maximal internal rate on `j`: the sum of its incoming edge rates.
    pub fn q_in(&self, j: usize) -> Result<f64> {
        self.check_node(j)?;
        Ok(self.in_adj[j - 1].iter().map(|&(_, r)| r).sum())
    }

    /// Incoming edges of `j` as 1-based `(k, rate)`.
    pub fn in_edges(&self, j: usize) -> Result<Vec<(usize, f64)>> {
        self.check_node(j)?;
        Ok(self.in_adj[j - 1].iter().map(|&(k, r)| (k + 1, r)).collect())
    }

    /// Outgoing edges of `k` as 1-based `(j, rate)`.
    pub fn out_edges(&self, k: usize) -> Result<Vec<(usize, f64)>> {
        self.check_node(k)?;
        Ok(self.out_adj[k - 1].iter().map(|&(j, r)| (j + 1, r)).collect())
    }

    pub(crate) fn in_adj0(&self, j: usize) -> &[(usize, f64)] {
        &self.in_adj[j]
    }

    pub(crate) fn out_adj0(&self, k: usize) -> &[(usize, f64)] {
        &self.out_adj[k]
    }

    pub(crate) fn edge_map(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.edges
    }

    /// Largest total rate any node can reach, `max_j (p_j + q_j)`.
    pub fn max_rate(&self) -> f64 {
        (0..self.size())
            .map(|j| self.p[j] + self.in_adj[j].iter().map(|&(_, r)| r).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Copy without the listed 1-based edges.
    pub fn without_edges(&self, drop: &[(usize, usize)]) -> Self {
        let mut map = self.edges.clone();
        for &(k, j) in drop {
            if k > 0 && j > 0 {
                map.remove(&(k - 1, j - 1));
            }
        }
        Self::from_map(self.p.clone(), map, self.label.clone())
    }

    /// Copy with edge `k -> j` set to `rate` (removed when `rate == 0`).
    pub fn with_edge_rate(&self, k: usize, j: usize, rate: f64) -> Result<Self> {
        self.check_node(k)?;
        self.check_node(j)?;
        if k == j {
            return Err(Error::SelfLoop(k));
        }
        check_rate(|| format!("q_{{{k},{j}}}"), rate)?;
        let mut map = self.edges.clone();
        if rate > 0.0 {
            map.insert((k - 1, j - 1), rate);
        } else {
            map.remove(&(k - 1, j - 1));
        }
        Ok(Self::from_map(self.p.clone(), map, self.label.clone()))
    }

    /// Copy with `p_j` replaced.
    pub fn with_p(&self, j: usize, value: f64) -> Result<Self> {
        self.check_node(j)?;
        check_rate(|| format!("p_{j}"), value)?;
        let mut p = self.p.clone();
        p[j - 1] = value;
        Ok(Self::from_map(p, self.edges.clone(), self.label.clone()))
    }
}

/// Validated build from 1-based parts.
pub fn build_network<I>(m: usize, p: Vec<f64>, edges: I) -> Result<Network>
where
    I: IntoIterator<Item = (usize, usize, f64)>,
{
    Network::build(m, p, edges)
}

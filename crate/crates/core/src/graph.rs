//! Reachability predicates: influential edges and nodes, indifference
//! reduction, vertex cuts, funnel nodes and network dominance.
//!
//! All node sets use 1-based node numbers.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{derive, DerivedKind, Network, Partition};

/// Converts a 1-based node set into a 0-based mask.
///
/// `proper` additionally requires `omega` to miss at least one node.
fn omega_mask(net: &Network, omega: &BTreeSet<usize>, proper: bool) -> Result<Vec<bool>> {
    let m = net.size();
    if omega.is_empty() {
        return Err(Error::BadOmega("empty node set".into()));
    }
    if let Some(&x) = omega.iter().find(|&&x| x == 0 || x > m) {
        return Err(Error::BadOmega(format!("node {x} outside 1..={m}")));
    }
    if proper && omega.len() == m {
        return Err(Error::BadOmega("node set must be a proper subset".into()));
    }
    let mut mask = vec![false; m];
    for &x in omega {
        mask[x - 1] = true;
    }
    Ok(mask)
}

/// Nodes with a directed path into `targets` in the graph without `avoid`
/// (0-based). Targets themselves are included unless avoided.
fn reaches(net: &Network, targets: &[bool], avoid: Option<usize>) -> Vec<bool> {
    let m = net.size();
    let mut seen = vec![false; m];
    let mut queue = VecDeque::new();
    for (x, &t) in targets.iter().enumerate() {
        if t && Some(x) != avoid {
            seen[x] = true;
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &(k, _) in net.in_adj0(x) {
            if !seen[k] && Some(k) != avoid {
                seen[k] = true;
                queue.push_back(k);
            }
        }
    }
    seen
}

/// Whether edge `k -> m` is influential to `omega`: `k` lies outside `omega`
/// and `m` is in `omega` or reaches it without passing through `k`.
pub fn is_influential_edge(net: &Network, k: usize, m: usize, omega: &BTreeSet<usize>) -> Result<bool> {
    let mask = omega_mask(net, omega, true)?;
    if !net.has_edge(k, m) {
        return Err(Error::NoSuchEdge(k, m));
    }
    if mask[k - 1] {
        return Ok(false);
    }
    Ok(reaches(net, &mask, Some(k - 1))[m - 1])
}

/// Whether node `m` is in `omega` or has a directed path into it.
pub fn is_influential_node(net: &Network, m: usize, omega: &BTreeSet<usize>) -> Result<bool> {
    let mask = omega_mask(net, omega, false)?;
    net.check_node(m).map_err(|_| Error::BadOmega(format!("node {m} out of range")))?;
    Ok(reaches(net, &mask, None)[m - 1])
}

/// All nodes influential to `omega`, 1-based and sorted.
pub fn influential_nodes(net: &Network, omega: &BTreeSet<usize>) -> Result<Vec<usize>> {
    let mask = omega_mask(net, omega, false)?;
    Ok(reaches(net, &mask, None)
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(x, _)| x + 1)
        .collect())
}

/// Classifies every edge with respect to `omega` in one pass per source node.
///
/// Returns 1-based `(k, m, influential)` in edge order.
pub fn classify_edges(net: &Network, omega: &BTreeSet<usize>) -> Result<Vec<(usize, usize, bool)>> {
    let mask = omega_mask(net, omega, true)?;
    let mut out = Vec::with_capacity(net.edge_count());
    let mut current: Option<(usize, Vec<bool>)> = None;
    for &(k, m) in net.edge_map().keys() {
        let influential = if mask[k] {
            false
        } else {
            if current.as_ref().map(|c| c.0) != Some(k) {
                current = Some((k, reaches(net, &mask, Some(k))));
            }
            current.as_ref().unwrap().1[m]
        };
        out.push((k + 1, m + 1, influential));
    }
    Ok(out)
}

/// Drops every edge that is non-influential to `omega`; `[S_omega]` is
/// unchanged by this.
pub fn indifference_reduce(net: &Network, omega: &BTreeSet<usize>) -> Result<Network> {
    let drop: Vec<_> = classify_edges(net, omega)?
        .into_iter()
        .filter(|e| !e.2)
        .map(|e| (e.0, e.1))
        .collect();
    Ok(net.without_edges(&drop))
}

/// Whether removing `j` leaves A and B in different weakly connected
/// components.
pub fn is_vertex_cut(net: &Network, part: &Partition) -> Result<bool> {
    part.validate(net.size())?;
    let m = net.size();
    let j0 = part.j - 1;
    let mut seen = vec![false; m];
    let mut queue: VecDeque<usize> = part.a.iter().map(|&x| x - 1).collect();
    for &x in &queue {
        seen[x] = true;
    }
    while let Some(x) = queue.pop_front() {
        let nbrs = net.in_adj0(x).iter().chain(net.out_adj0(x));
        for &(y, _) in nbrs {
            if y != j0 && !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(part.b.iter().all(|&x| !seen[x - 1]))
}

/// Nodes of A ∪ B influential to `j` both in `N^A` and in `N^B`.
pub fn funnel_blockers(net: &Network, part: &Partition) -> Result<Vec<usize>> {
    let na = derive(net, part, DerivedKind::A)?;
    let nb = derive(net, part, DerivedKind::B)?;
    let target = BTreeSet::from([part.j]);
    let ra = influential_nodes(&na, &target)?;
    let rb: BTreeSet<_> = influential_nodes(&nb, &target)?.into_iter().collect();
    Ok(ra
        .into_iter()
        .filter(|x| *x != part.j && rb.contains(x))
        .collect())
}

/// Whether `j` is a funnel node of A and B.
pub fn is_funnel_node(net: &Network, part: &Partition) -> Result<bool> {
    Ok(funnel_blockers(net, part)?.is_empty())
}

/// Nodes influential to both `{i}` and `{j}`.
pub fn common_influential_nodes(net: &Network, i: usize, j: usize) -> Result<Vec<usize>> {
    let ri = influential_nodes(net, &BTreeSet::from([i]))?;
    let rj: BTreeSet<_> = influential_nodes(net, &BTreeSet::from([j]))?
        .into_iter()
        .collect();
    Ok(ri.into_iter().filter(|x| rj.contains(x)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Equal,
    WeaklyDominated,
    StrictlyDominated,
    Incomparable,
}

/// A rate coordinate of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Coordinate {
    P { node: usize },
    Q { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub coordinate: Coordinate,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceResult {
    pub relation: Relation,
    /// Coordinates whose values differ beyond the comparison tolerance.
    pub witnesses: Vec<Witness>,
}

/// Coordinatewise comparison of `a` against `b`.
pub fn dominance_compare(a: &Network, b: &Network) -> Result<DominanceResult> {
    dominance_compare_with_tol(a, b, 0.0)
}

/// Like [`dominance_compare`], treating coordinates whose relative difference
/// is at most `rel_tol` as ties.
///
/// `WeaklyDominated` means A is at most B in every coordinate where the two
/// differ at all, and all such differences are within the tolerance, so no
/// strict witness exists; with `rel_tol = 0` it does not occur.
pub fn dominance_compare_with_tol(a: &Network, b: &Network, rel_tol: f64) -> Result<DominanceResult> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size(), b.size()));
    }
    let mut coords = Vec::new();
    for j in 0..a.size() {
        coords.push((Coordinate::P { node: j + 1 }, a.p_all()[j], b.p_all()[j]));
    }
    let keys: BTreeSet<_> = a.edge_map().keys().chain(b.edge_map().keys()).copied().collect();
    for (k, j) in keys {
        coords.push((
            Coordinate::Q {
                from: k + 1,
                to: j + 1,
            },
            a.rate(k + 1, j + 1),
            b.rate(k + 1, j + 1),
        ));
    }
    let mut lower = Vec::new();
    let mut higher = Vec::new();
    let mut any_diff = false;
    for (coordinate, va, vb) in coords {
        if va == vb {
            continue;
        }
        any_diff = true;
        let within = (va - vb).abs() <= rel_tol * va.abs().max(vb.abs());
        let w = Witness {
            coordinate,
            a: va,
            b: vb,
        };
        match (va < vb, within) {
            (true, false) => lower.push(w),
            (false, false) => higher.push(w),
            (_, true) => {}
        }
    }
    // B below A is reported as Incomparable from A's side.
    let relation = if !any_diff {
        Relation::Equal
    } else if !higher.is_empty() {
        Relation::Incomparable
    } else if lower.is_empty() {
        Relation::WeaklyDominated
    } else {
        Relation::StrictlyDominated
    };
    let mut witnesses = lower;
    if relation == Relation::Incomparable {
        witnesses.extend(higher);
    }
    Ok(DominanceResult {
        relation,
        witnesses,
    })
}

/// Whether `a ≺ b` forces `f_j^A < f_j^B`: some strict witness is either a
/// `p_m` with `m` influential to `{j}` or an edge influential to `{j}`,
/// judged in `b`.
pub fn strict_dominance_predicts_node(a: &Network, b: &Network, j: usize) -> Result<bool> {
    let cmp = dominance_compare(a, b)?;
    if !matches!(cmp.relation, Relation::WeaklyDominated | Relation::StrictlyDominated) {
        return Err(Error::NotDominated);
    }
    b.check_node(j)?;
    let omega = BTreeSet::from([j]);
    let reach = influential_nodes(b, &omega)?;
    for w in &cmp.witnesses {
        let hit = match w.coordinate {
            Coordinate::P { node } => reach.binary_search(&node).is_ok(),
            Coordinate::Q { from, to } => {
                b.size() > 1 && is_influential_edge(b, from, to, &omega)?
            }
        };
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

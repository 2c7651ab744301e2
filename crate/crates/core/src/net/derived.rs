//! Partitions `{A, B, {j}}` and the networks derived from them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Network;
use crate::error::{Error, Result};

/// Split of all nodes into two nonempty sets and a focal node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub j: usize,
}

impl Partition {
    pub fn new(
        a: impl IntoIterator<Item = usize>,
        b: impl IntoIterator<Item = usize>,
        j: usize,
    ) -> Self {
        Self {
            a: a.into_iter().collect(),
            b: b.into_iter().collect(),
            j,
        }
    }

    /// Checks the partition against a network of `m` nodes.
    pub fn validate(&self, m: usize) -> Result<()> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::InvalidPartition("A and B must be nonempty".into()));
        }
        if self.j == 0 || self.j > m {
            return Err(Error::InvalidPartition(format!(
                "focal node {} outside 1..={m}",
                self.j
            )));
        }
        if self.a.contains(&self.j) || self.b.contains(&self.j) {
            return Err(Error::InvalidPartition("j must not lie in A or B".into()));
        }
        if let Some(x) = self.a.intersection(&self.b).next() {
            return Err(Error::InvalidPartition(format!("node {x} in both A and B")));
        }
        if let Some(&x) = self.a.iter().chain(&self.b).find(|&&x| x == 0 || x > m) {
            return Err(Error::InvalidPartition(format!("node {x} outside 1..={m}")));
        }
        if self.a.len() + self.b.len() + 1 != m {
            return Err(Error::InvalidPartition(format!(
                "A, B and j cover {} of {m} nodes",
                self.a.len() + self.b.len() + 1
            )));
        }
        Ok(())
    }

    /// Which side a 1-based node is on: `Some(true)` for A, `Some(false)` for B.
    fn side(&self, k: usize) -> Option<bool> {
        if self.a.contains(&k) {
            Some(true)
        } else if self.b.contains(&k) {
            Some(false)
        } else {
            None
        }
    }
}

/// Networks derived from a partition.
///
/// * `Full`: the network itself.
/// * `A` / `B`: only edges from that side may act on `j`; `p_j = 0`.
/// * `Pj`: no internal influence on `j`; `p_j` kept.
/// * `APj` / `BPj`: edges from the other side into `j` removed; `p_j` kept.
/// * `Split`: `j` split into three nodes, see [`split_node`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DerivedKind {
    Full,
    A,
    B,
    Pj,
    APj,
    BPj,
    Split,
}

impl DerivedKind {
    pub const ALL_SAME_SIZE: [DerivedKind; 6] = [
        DerivedKind::Full,
        DerivedKind::A,
        DerivedKind::B,
        DerivedKind::Pj,
        DerivedKind::APj,
        DerivedKind::BPj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DerivedKind::Full => "full",
            DerivedKind::A => "A",
            DerivedKind::B => "B",
            DerivedKind::Pj => "pj",
            DerivedKind::APj => "A,pj",
            DerivedKind::BPj => "B,pj",
            DerivedKind::Split => "split",
        }
    }
}

/// Builds the derived network of `kind` for `part`.
pub fn derive(net: &Network, part: &Partition, kind: DerivedKind) -> Result<Network> {
    part.validate(net.size())?;
    if kind == DerivedKind::Split {
        return split_node(net, part);
    }
    let j = part.j;
    // Some(true): keep edges from A into j, Some(false): keep from B, None: drop all
    let (keep_a, keep_b, keep_p) = match kind {
        DerivedKind::Full => (true, true, true),
        DerivedKind::A => (true, false, false),
        DerivedKind::B => (false, true, false),
        DerivedKind::Pj => (false, false, true),
        DerivedKind::APj => (true, false, true),
        DerivedKind::BPj => (false, true, true),
        DerivedKind::Split => unreachable!(),
    };
    let mut p = net.p_all().to_vec();
    if !keep_p {
        p[j - 1] = 0.0;
    }
    let edges: BTreeMap<_, _> = net
        .edge_map()
        .iter()
        .filter(|(&(k, t), _)| {
            if t + 1 != j {
                return true;
            }
            match part.side(k + 1) {
                Some(true) => keep_a,
                Some(false) => keep_b,
                None => true,
            }
        })
        .map(|(&e, &r)| (e, r))
        .collect();
    let label = format!("{}^{}", net.label(), kind.name());
    Ok(Network::from_map(p, edges, label))
}

/// Splits `j` into `j_A`, `j_B` and `j_p`.
///
/// `j_A` keeps number `j` and inherits the edges from A with `p = 0`;
/// `j_B` is node `M + 1`, fed from B with `p = 0`; `j_p` is node `M + 2`,
/// isolated with the original `p_j`. Requires that no edges leave `j`.
pub fn split_node(net: &Network, part: &Partition) -> Result<Network> {
    part.validate(net.size())?;
    let j0 = part.j - 1;
    if !net.out_adj0(j0).is_empty() {
        return Err(Error::OutEdgesPresent(part.j));
    }
    let m = net.size();
    // j_B is 0-based index m; j_p (index m + 1) gets no edges
    let jb = m;
    let mut p = net.p_all().to_vec();
    let pj = p[j0];
    p[j0] = 0.0;
    p.push(0.0);
    p.push(pj);
    let mut edges = BTreeMap::new();
    for (&(k, t), &r) in net.edge_map() {
        if t == j0 && part.side(k + 1) == Some(false) {
            edges.insert((k, jb), r);
        } else {
            edges.insert((k, t), r);
        }
    }
    let label = format!("{}^+", net.label());
    Ok(Network::from_map(p, edges, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{gen_line, Influence};

    fn path() -> Network {
        gen_line(3, 0.2, Influence::TwoSided { left: 0.3, right: 0.5 }).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new([1], [3], 2).validate(3).is_ok());
        assert!(Partition::new([], [1, 3], 2).validate(3).is_err());
        assert!(Partition::new([1, 2], [3], 2).validate(3).is_err());
        assert!(Partition::new([1], [1, 3], 2).validate(3).is_err());
        assert!(Partition::new([1], [3], 2).validate(4).is_err());
        assert!(Partition::new([1], [5], 2).validate(3).is_err());
    }

    #[test]
    fn pj_removes_in_edges_only() {
        let net = path();
        let part = Partition::new([1], [3], 2);
        let d = derive(&net, &part, DerivedKind::Pj).unwrap();
        assert!(d.in_edges(2).unwrap().is_empty());
        assert_eq!(d.p(2).unwrap(), 0.2);
        assert_eq!(d.rate(2, 1), net.rate(2, 1));
        assert_eq!(d.rate(2, 3), net.rate(2, 3));
    }

    #[test]
    fn a_kind_zeroes_p_and_drops_b_edges() {
        let net = path();
        let part = Partition::new([1], [3], 2);
        let d = derive(&net, &part, DerivedKind::A).unwrap();
        assert_eq!(d.p(2).unwrap(), 0.0);
        assert_eq!(d.rate(3, 2), 0.0);
        assert_eq!(d.rate(1, 2), 0.3);
        let b = derive(&net, &part, DerivedKind::B).unwrap();
        assert_eq!(b.p(2).unwrap(), 0.0);
        assert_eq!(b.rate(1, 2), 0.0);
        assert_eq!(b.rate(3, 2), 0.5);
    }

    #[test]
    fn apj_only_drops_cross_edges() {
        let net = path();
        let part = Partition::new([1], [3], 2);
        let d = derive(&net, &part, DerivedKind::APj).unwrap();
        assert_eq!(d.p(2).unwrap(), 0.2);
        assert_eq!(d.rate(3, 2), 0.0);
        assert_eq!(d.rate(1, 2), 0.3);
        assert_eq!(d.edge_count(), net.edge_count() - 1);
    }

    #[test]
    fn full_is_identity() {
        let net = path();
        let part = Partition::new([1], [3], 2);
        let d = derive(&net, &part, DerivedKind::Full).unwrap();
        assert_eq!(d.edge_map(), net.edge_map());
        assert_eq!(d.p_all(), net.p_all());
    }

    #[test]
    fn split_requires_no_out_edges() {
        let net = path();
        let part = Partition::new([1], [3], 2);
        assert_eq!(split_node(&net, &part).unwrap_err(), Error::OutEdgesPresent(2));
    }

    #[test]
    fn split_path() {
        let net = path().without_edges(&[(2, 1), (2, 3)]);
        let part = Partition::new([1], [3], 2);
        let plus = split_node(&net, &part).unwrap();
        assert_eq!(plus.size(), 5);
        assert_eq!(plus.rate(1, 2), 0.3);
        assert_eq!(plus.rate(3, 4), 0.5);
        assert!(plus.in_edges(5).unwrap().is_empty());
        assert_eq!(plus.p_all(), &[0.2, 0.0, 0.2, 0.0, 0.2]);
    }

    #[test]
    fn split_isolated() {
        let net = Network::build(3, vec![0.1, 0.4, 0.1], [(1, 3, 1.0)]).unwrap();
        let part = Partition::new([1], [3], 2);
        let plus = split_node(&net, &part).unwrap();
        assert_eq!(plus.p_all(), &[0.1, 0.0, 0.1, 0.0, 0.4]);
        for jj in [2, 4, 5] {
            assert!(plus.in_edges(jj).unwrap().is_empty());
            assert!(plus.out_edges(jj).unwrap().is_empty());
        }
    }

    #[test]
    fn split_triangle_inventory() {
        let net = Network::build(
            3,
            vec![0.1, 0.2, 0.3],
            [(1, 2, 0.5), (2, 1, 0.6), (1, 3, 0.7), (2, 3, 0.8)],
        )
        .unwrap();
        let part = Partition::new([1], [2], 3);
        let plus = split_node(&net, &part).unwrap();
        let inventory: Vec<_> = plus.edges().collect();
        assert_eq!(
            inventory,
            vec![(1, 2, 0.5), (1, 3, 0.7), (2, 1, 0.6), (2, 4, 0.8)]
        );
        // in-edge multiset at {j_A, j_B} equals j's in N^A and N^B combined
        let na = derive(&net, &part, DerivedKind::A).unwrap();
        let nb = derive(&net, &part, DerivedKind::B).unwrap();
        let mut combined: Vec<_> = na.in_edges(3).unwrap();
        combined.extend(nb.in_edges(3).unwrap());
        let mut split_in: Vec<_> = plus.in_edges(3).unwrap();
        split_in.extend(plus.in_edges(4).unwrap());
        combined.sort_by(|x, y| x.partial_cmp(y).unwrap());
        split_in.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(combined, split_in);
    }
}

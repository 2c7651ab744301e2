//! Fixture networks and the verification suite format.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::checks::McOptions;
use crate::curve::default_check_grid;
use crate::error::Result;
use crate::net::{build_network, gen_circle, gen_line, Influence, Network, NetworkFile, Partition, Sidedness};

/// Vertex-cut topology: `j = 4` separates `A = {1, 2, 3}` from
/// `B = {5, 6, 7, 8}`.
pub fn vertex_cut_example() -> (Network, Partition) {
    let two_way = [
        (1, 2, 0.6, 0.4),
        (2, 3, 0.5, 0.7),
        (3, 1, 0.3, 0.8),
        (3, 4, 0.9, 0.5),
        (2, 4, 0.4, 0.6),
        (4, 5, 0.7, 0.3),
        (4, 6, 0.5, 0.5),
        (5, 6, 0.8, 0.2),
        (6, 7, 0.6, 0.9),
        (7, 8, 0.4, 0.7),
        (8, 5, 0.5, 0.6),
    ];
    let edges = two_way
        .iter()
        .flat_map(|&(a, b, ab, ba)| [(a, b, ab), (b, a, ba)]);
    let net = build_network(8, vec![0.15, 0.3, 0.2, 0.25, 0.1, 0.35, 0.2, 0.3], edges)
        .expect("fixture is valid")
        .with_label("vertex-cut-example");
    (net, Partition::new([1, 2, 3], [5, 6, 7, 8], 4))
}

/// Funnel node that is not a vertex cut: the edge `1 -> 2` joins A and B,
/// but node 1 reaches `j = 3` only through B and node 4 only directly.
pub fn funnel_not_cut_example() -> (Network, Partition) {
    let edges = [
        (1, 2, 0.8),
        (2, 3, 0.6),
        (4, 3, 0.9),
        (5, 2, 0.5),
        (2, 5, 0.4),
        (3, 4, 0.7),
    ];
    let net = build_network(5, vec![0.2, 0.3, 0.25, 0.4, 0.15], edges)
        .expect("fixture is valid")
        .with_label("funnel-not-cut-example");
    (net, Partition::new([1, 4], [2, 5], 3))
}

/// Seeded random network: `p_j ∈ [0.1, 0.6)`, each ordered pair joined with
/// a per-network density in `[0.15, 0.5)` at rate `q ∈ [0.2, 1.5)`.
pub fn random_network(m: usize, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..0.6)).collect();
    let density = rng.gen_range(0.15..0.5);
    let mut edges = Vec::new();
    for k in 1..=m {
        for j in 1..=m {
            if k != j && rng.gen_bool(density) {
                edges.push((k, j, rng.gen_range(0.2..1.5)));
            }
        }
    }
    build_network(m, p, edges)
        .expect("random rates are valid")
        .with_label(format!("random(M={m},seed={seed})"))
}

/// Seeded random partition of `m >= 3` nodes.
pub fn random_partition(m: usize, seed: u64) -> Partition {
    assert!(m >= 3, "a partition needs at least 3 nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let j = rng.gen_range(1..=m);
    let mut rest: Vec<usize> = (1..=m).filter(|&x| x != j).collect();
    rest.shuffle(&mut rng);
    let cut = rng.gen_range(1..rest.len());
    Partition::new(rest[..cut].iter().copied(), rest[cut..].iter().copied(), j)
}

/// `count` random networks with sizes cycling through `2..=7`.
pub fn random_pair_networks(count: usize, base_seed: u64) -> Vec<Network> {
    (0..count)
        .map(|i| random_network(2 + i % 6, base_seed + i as u64))
        .collect()
}

/// `count` random (network, partition) fixtures with sizes cycling through
/// `3..=7`.
pub fn random_funnel_fixtures(count: usize, base_seed: u64) -> Vec<(Network, Partition)> {
    (0..count)
        .map(|i| {
            let m = 3 + i % 5;
            let seed = base_seed + i as u64;
            (random_network(m, seed), random_partition(m, seed))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFixture {
    pub network: NetworkFile,
    /// Pairs to check; all pairs when absent.
    #[serde(default)]
    pub pairs: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunnelFixture {
    pub network: NetworkFile,
    pub partition: Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleFixture {
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
    #[serde(rename = "M")]
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineFixture {
    pub p: f64,
    #[serde(rename = "qL")]
    pub q_left: f64,
    #[serde(rename = "qR")]
    pub q_right: f64,
    #[serde(rename = "M")]
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionFixture {
    pub p: f64,
    pub q: f64,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "M1")]
    pub m1: usize,
    pub sided: Sidedness,
    /// Overrides the suite grid, e.g. to keep Monte Carlo horizons short.
    #[serde(default)]
    pub times: Option<Vec<f64>>,
}

/// Sampled inputs for the Chebyshev checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChebyshevFixture {
    OneD {
        f: Vec<f64>,
        g: Vec<f64>,
        w: Vec<f64>,
        a: f64,
        b: f64,
    },
    MultiD {
        dims: Vec<usize>,
        f: Vec<f64>,
        g: Vec<f64>,
    },
}

/// Everything `verify` runs; serializable so that suites can be shipped as
/// files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default = "default_check_grid")]
    pub times: Vec<f64>,
    #[serde(default)]
    pub pair: Vec<PairFixture>,
    #[serde(default)]
    pub funnel: Vec<FunnelFixture>,
    #[serde(default)]
    pub circle: Vec<CircleFixture>,
    #[serde(default)]
    pub line: Vec<LineFixture>,
    #[serde(default)]
    pub dimension: Vec<DimensionFixture>,
    #[serde(default)]
    pub chebyshev: Vec<ChebyshevFixture>,
    #[serde(default)]
    pub mc: McOptions,
}

fn samples(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n).map(|i| f(i as f64 / (n - 1) as f64)).collect()
}

fn grid2(f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let n = 21;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(f(i as f64 / 20.0, j as f64 / 20.0));
        }
    }
    out
}

impl Suite {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serializes")
    }

    /// The built-in suite: the cut and funnel examples, hand-made and seeded random
    /// networks, and one fixture per closed-form family.
    pub fn shipped() -> Self {
        let (cut_net, cut_part) = vertex_cut_example();
        let (fun_net, fun_part) = funnel_not_cut_example();
        let two_parts = build_network(4, vec![0.3, 0.2, 0.4, 0.1], [(1, 2, 0.7), (3, 4, 0.9)])
            .expect("valid")
            .with_label("two-components");
        let line5 = gen_line(5, 0.2, Influence::TwoSided { left: 0.5, right: 0.3 }).expect("valid");
        let path3 = gen_line(3, 0.3, Influence::TwoSided { left: 0.4, right: 0.6 }).expect("valid");
        let circle5 = gen_circle(5, 0.3, Influence::TwoSided { left: 0.4, right: 0.4 }).expect("valid");

        let mut pair: Vec<PairFixture> = [&cut_net, &fun_net, &two_parts, &line5]
            .into_iter()
            .map(|n| PairFixture { network: n.into(), pairs: None })
            .collect();
        pair.extend(random_pair_networks(12, 1000).iter().map(|n| PairFixture {
            network: n.into(),
            pairs: None,
        }));

        let mut funnel = vec![
            FunnelFixture { network: (&cut_net).into(), partition: cut_part },
            FunnelFixture { network: (&fun_net).into(), partition: fun_part },
            FunnelFixture { network: (&path3).into(), partition: Partition::new([1], [3], 2) },
            FunnelFixture { network: (&circle5).into(), partition: Partition::new([1, 2], [4, 5], 3) },
        ];
        funnel.extend(random_funnel_fixtures(12, 2000).iter().map(|(n, p)| FunnelFixture {
            network: n.into(),
            partition: p.clone(),
        }));

        let circle = vec![
            CircleFixture { p: 0.45, q1: 0.4, q2: 0.4, m: 6 },
            CircleFixture { p: 0.45, q1: 0.2, q2: 1.0, m: 3 },
            CircleFixture { p: 0.13, q1: 0.5, q2: 0.2, m: 8 },
        ];
        let line = vec![
            LineFixture { p: 0.1, q_left: 0.25, q_right: 0.25, m: 2 },
            LineFixture { p: 0.3, q_left: 0.1, q_right: 0.7, m: 5 },
            LineFixture { p: 0.37, q_left: 0.5, q_right: 0.5, m: 8 },
        ];
        let dimension = vec![
            DimensionFixture { p: 0.5, q: 0.5, d: 2, m1: 3, sided: Sidedness::Two, times: None },
            DimensionFixture { p: 0.5, q: 0.5, d: 2, m1: 3, sided: Sidedness::One, times: None },
            DimensionFixture {
                p: 0.5,
                q: 0.5,
                d: 2,
                m1: 20,
                sided: Sidedness::Two,
                times: Some(vec![0.0, 0.5, 1.0, 2.0]),
            },
        ];
        let n = 101;
        let chebyshev = vec![
            ChebyshevFixture::OneD { f: samples(n, |x| x), g: samples(n, |x| x), w: vec![1.0; n], a: 0.0, b: 1.0 },
            ChebyshevFixture::OneD { f: vec![1.0; n], g: samples(n, |x| x * x), w: vec![1.0; n], a: 0.0, b: 1.0 },
            ChebyshevFixture::OneD { f: samples(n, |x| x), g: samples(n, |x| x * x), w: samples(n, |x| 2.0 * x), a: 0.0, b: 1.0 },
            ChebyshevFixture::MultiD { dims: vec![21, 21], f: grid2(|x, _| x), g: grid2(|_, y| y) },
            ChebyshevFixture::MultiD { dims: vec![21, 21], f: grid2(|x, y| x + y), g: grid2(|x, y| x + y) },
        ];
        Suite {
            times: default_check_grid(),
            pair,
            funnel,
            circle,
            line,
            dimension,
            chebyshev,
            mc: McOptions { runs: 100_000, seed: 7, jobs: McOptions::default().jobs },
        }
    }
}

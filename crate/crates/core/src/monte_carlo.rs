//! Monte Carlo simulation: an event-driven continuous-time scheme and the
//! synchronous fixed-step scheme.
//!
//! Replicate `r` of a run with seed `s` draws from ChaCha8 seeded with `s`
//! on stream `r`, so estimates depend only on `(seed, scheme, n_runs)` and
//! never on how replicates are spread over threads. Accumulators are
//! integer counts, which makes the reduction order irrelevant.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::validate_grid;
use crate::error::{Error, Result};
use crate::net::Network;

/// Replicates per parallel work item.
const CHUNK: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scheme {
    EventDriven,
    DiscreteDt { dt: f64 },
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::EventDriven => write!(f, "event"),
            Scheme::DiscreteDt { dt } => write!(f, "dt:{dt}"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    /// `event` or `dt:<step>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "event" {
            return Ok(Scheme::EventDriven);
        }
        let dt = s
            .strip_prefix("dt:")
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|dt| dt.is_finite() && *dt > 0.0)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scheme {s:?}; use event or dt:<step>")))?;
        Ok(Scheme::DiscreteDt { dt })
    }
}

/// Quantity estimated from replicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Expected fraction of adopters.
    Level,
    /// Adoption probability of one node.
    Node { j: usize },
    /// Probability that no node of the set adopted.
    Omega { nodes: BTreeSet<usize> },
    /// Probability that neither node adopted.
    Pair { i: usize, j: usize },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Level => write!(f, "level"),
            Target::Node { j } => write!(f, "node:{j}"),
            Target::Omega { nodes } => {
                let list: Vec<_> = nodes.iter().map(|n| n.to_string()).collect();
                write!(f, "omega:{}", list.join(","))
            }
            Target::Pair { i, j } => write!(f, "pair:{i},{j}"),
        }
    }
}

fn parse_nodes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad node number {x:?}")))
        })
        .collect()
}

impl FromStr for Target {
    type Err = Error;

    /// `level`, `node:J`, `omega:A,B,..` or `pair:I,J`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "level" {
            return Ok(Target::Level);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("unknown target {s:?}")))?;
        let nodes = parse_nodes(rest)?;
        match (kind, nodes.as_slice()) {
            ("node", &[j]) => Ok(Target::Node { j }),
            ("pair", &[i, j]) => Ok(Target::Pair { i, j }),
            ("omega", list) if !list.is_empty() => Ok(Target::Omega {
                nodes: list.iter().copied().collect(),
            }),
            _ => Err(Error::InvalidParameter(format!("unknown target {s:?}"))),
        }
    }
}

impl Target {
    fn validate(&self, m: usize) -> Result<()> {
        let nodes: Vec<usize> = match self {
            Target::Level => vec![],
            Target::Node { j } => vec![*j],
            Target::Omega { nodes } => nodes.iter().copied().collect(),
            Target::Pair { i, j } => vec![*i, *j],
        };
        for j in nodes {
            if j == 0 || j > m {
                return Err(Error::IndexOutOfRange { index: j, size: m });
            }
        }
        Ok(())
    }

    /// Nodes whose first adoption decides the target, 0-based.
    fn watched(&self) -> Vec<usize> {
        match self {
            Target::Level => vec![],
            Target::Node { j } => vec![j - 1],
            Target::Omega { nodes } => nodes.iter().map(|j| j - 1).collect(),
            Target::Pair { i, j } => vec![i - 1, j - 1],
        }
    }
}

/// Monte Carlo estimate of one target on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub target: Target,
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    /// Sample standard deviation over replicates divided by `sqrt(n_runs)`.
    pub stderr: Vec<f64>,
    pub n_runs: u64,
    pub seed: u64,
    pub scheme: Scheme,
}

impl Estimate {
    /// `t,mean,stderr` rows with a header, in round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,mean,stderr\n");
        for i in 0..self.times.len() {
            out.push_str(&format!("{},{},{}\n", self.times[i], self.mean[i], self.stderr[i]));
        }
        out
    }
}

/// Random stream of replicate `r`.
pub fn replicate_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

/// Sum tree over node rates; parents are recomputed from children on every
/// update so the total never drifts.
struct RateTree {
    size: usize,
    tree: Vec<f64>,
}

impl RateTree {
    fn new(rates: &[f64]) -> Self {
        let size = rates.len().next_power_of_two();
        let mut tree = vec![0.0; 2 * size];
        tree[size..size + rates.len()].copy_from_slice(rates);
        for i in (1..size).rev() {
            tree[i] = tree[2 * i] + tree[2 * i + 1];
        }
        Self { size, tree }
    }

    fn total(&self) -> f64 {
        self.tree[1]
    }

    fn get(&self, j: usize) -> f64 {
        self.tree[self.size + j]
    }

    fn set(&mut self, j: usize, v: f64) {
        let mut i = self.size + j;
        self.tree[i] = v;
        while i > 1 {
            i /= 2;
            self.tree[i] = self.tree[2 * i] + self.tree[2 * i + 1];
        }
    }

    /// Leaf whose cumulative rate interval contains `u * total`.
    fn select(&self, u: f64) -> usize {
        let mut x = u * self.total();
        let mut i = 1;
        while i < self.size {
            let left = self.tree[2 * i];
            if x < left || self.tree[2 * i + 1] == 0.0 {
                i *= 2;
            } else {
                x -= left;
                i = 2 * i + 1;
            }
        }
        // rounding can land on a zero-rate leaf; step back to a live one
        let mut j = i - self.size;
        while self.get(j) == 0.0 {
            j -= 1;
        }
        j
    }
}

/// One event-driven trajectory into `tau` (adoption times, `INFINITY` when
/// beyond `horizon`).
fn event_into(net: &Network, horizon: f64, rng: &mut impl Rng, tau: &mut [f64]) {
    tau.fill(f64::INFINITY);
    let mut tree = RateTree::new(net.p_all());
    let mut now = 0.0;
    loop {
        let total = tree.total();
        if total <= 0.0 {
            return;
        }
        let u: f64 = rng.gen();
        now += -(1.0 - u).ln() / total;
        if now > horizon {
            return;
        }
        let j = tree.select(rng.gen());
        tau[j] = now;
        tree.set(j, 0.0);
        for &(k, q) in net.out_adj0(j) {
            if tau[k].is_infinite() {
                tree.set(k, tree.get(k) + q);
            }
        }
    }
}

/// Event-driven trajectory with an explicit random source. `None` marks a
/// node that did not adopt by `horizon`.
pub fn simulate_event_with(net: &Network, horizon: f64, rng: &mut impl Rng) -> Result<Vec<Option<f64>>> {
    if !(horizon > 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be > 0, got {horizon}")));
    }
    let mut tau = vec![0.0; net.size()];
    event_into(net, horizon, rng, &mut tau);
    Ok(tau.into_iter().map(|t| t.is_finite().then_some(t)).collect())
}

/// Event-driven trajectory on stream 0 of `seed`.
pub fn simulate_event(net: &Network, horizon: f64, seed: u64) -> Result<Vec<Option<f64>>> {
    simulate_event_with(net, horizon, &mut replicate_rng(seed, 0))
}

fn check_step(net: &Network, dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step must be > 0, got {dt}")));
    }
    let load = dt * net.max_rate();
    if load >= 1.0 {
        return Err(Error::StepTooLarge(load));
    }
    Ok(())
}

/// One fixed-step trajectory into `step` (adoption step index, `u64::MAX`
/// when not adopted). Every step draws one uniform per node in node order,
/// adopted or not, so runs on different networks share their uniforms.
fn discrete_into(net: &Network, dt: f64, n_steps: u64, rng: &mut impl Rng, step: &mut [u64], rate: &mut [f64]) {
    step.fill(u64::MAX);
    rate.copy_from_slice(net.p_all());
    let m = net.size();
    let mut fresh = Vec::new();
    for n in 1..=n_steps {
        fresh.clear();
        for j in 0..m {
            let w: f64 = rng.gen();
            if step[j] == u64::MAX && w <= rate[j] * dt {
                fresh.push(j);
            }
        }
        // update against the state at step n - 1 only
        for &j in &fresh {
            step[j] = n;
            for &(k, q) in net.out_adj0(j) {
                rate[k] += q;
            }
        }
    }
}

/// Fixed-step trajectory with an explicit random source; adoption times are
/// multiples of `dt`.
pub fn simulate_discrete_with(
    net: &Network,
    dt: f64,
    n_steps: u64,
    rng: &mut impl Rng,
) -> Result<Vec<Option<f64>>> {
    check_step(net, dt)?;
    let mut step = vec![0; net.size()];
    let mut rate = vec![0.0; net.size()];
    discrete_into(net, dt, n_steps, rng, &mut step, &mut rate);
    Ok(step
        .into_iter()
        .map(|n| (n != u64::MAX).then_some(n as f64 * dt))
        .collect())
}

/// Fixed-step trajectory on stream 0 of `seed`.
pub fn simulate_discrete(net: &Network, dt: f64, n_steps: u64, seed: u64) -> Result<Vec<Option<f64>>> {
    simulate_discrete_with(net, dt, n_steps, &mut replicate_rng(seed, 0))
}

/// Integer sufficient statistics of all targets over a set of replicates.
#[derive(Clone)]
struct Tally {
    /// Per indicator target: number of replicates whose deciding event
    /// falls in grid cell `i` (first grid time at or after it).
    hist: Vec<Vec<u64>>,
    /// Level target: per grid time, sum of adopter counts and of squares.
    level_sum: Vec<u64>,
    level_sq: Vec<u128>,
}

impl Tally {
    fn new(n_indicator: usize, n_times: usize) -> Self {
        Self {
            hist: vec![vec![0; n_times + 1]; n_indicator],
            level_sum: vec![0; n_times],
            level_sq: vec![0; n_times],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (x, y) in self.level_sum.iter_mut().zip(&other.level_sum) {
            *x += y;
        }
        for (x, y) in self.level_sq.iter_mut().zip(&other.level_sq) {
            *x += y;
        }
        self
    }
}

/// Grid cell of an event at `tau`: the index of the first grid time `>= tau`
/// (`times.len()` when past the grid).
fn cell(times: &[f64], tau: f64) -> usize {
    times.partition_point(|&t| t < tau)
}

/// Estimates every target on `times` from `n_runs` replicates using up to
/// `jobs` threads. Results do not depend on `jobs`.
pub fn estimate(
    net: &Network,
    targets: &[Target],
    times: &[f64],
    n_runs: u64,
    seed: u64,
    scheme: Scheme,
    jobs: usize,
) -> Result<Vec<Estimate>> {
    if n_runs < 2 {
        return Err(Error::InvalidParameter("need at least 2 replicates".into()));
    }
    validate_grid(times)?;
    for t in targets {
        t.validate(net.size())?;
    }
    let horizon = *times.last().expect("validated nonempty");
    let (dt, n_steps) = match scheme {
        Scheme::EventDriven => (0.0, 0),
        Scheme::DiscreteDt { dt } => {
            check_step(net, dt)?;
            (dt, (horizon / dt - 1e-9).ceil().max(0.0) as u64)
        }
    };
    // discrete adoption at step n counts at grid time t when n dt <= t
    let grid: Vec<f64> = match scheme {
        Scheme::EventDriven => times.to_vec(),
        Scheme::DiscreteDt { dt } => times.iter().map(|t| (t / dt + 1e-9).floor()).collect(),
    };
    let watched: Vec<Vec<usize>> = targets
        .iter()
        .filter(|t| **t != Target::Level)
        .map(Target::watched)
        .collect();
    let want_level = targets.contains(&Target::Level);
    let m = net.size();
    let n_times = times.len();

    let run_chunk = |c: u64| -> Tally {
        let mut tally = Tally::new(watched.len(), n_times);
        let mut tau = vec![0.0; m];
        let mut step = vec![0u64; m];
        let mut rate = vec![0.0; m];
        let mut level_hist = vec![0u64; n_times + 1];
        let end = ((c + 1) * CHUNK).min(n_runs);
        for r in c * CHUNK..end {
            let mut rng = replicate_rng(seed, r);
            match scheme {
                Scheme::EventDriven => event_into(net, horizon, &mut rng, &mut tau),
                Scheme::DiscreteDt { .. } => {
                    discrete_into(net, dt, n_steps, &mut rng, &mut step, &mut rate);
                    for (t, &s) in tau.iter_mut().zip(&step) {
                        *t = if s == u64::MAX { f64::INFINITY } else { s as f64 };
                    }
                }
            }
            for (h, nodes) in tally.hist.iter_mut().zip(&watched) {
                let first = nodes.iter().map(|&j| tau[j]).fold(f64::INFINITY, f64::min);
                h[cell(&grid, first)] += 1;
            }
            if want_level {
                level_hist.fill(0);
                for &x in &tau {
                    level_hist[cell(&grid, x)] += 1;
                }
                let mut count = 0u64;
                for i in 0..n_times {
                    count += level_hist[i];
                    tally.level_sum[i] += count;
                    tally.level_sq[i] += (count as u128) * (count as u128);
                }
            }
        }
        tally
    };

    let chunks = n_runs.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let tally = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(run_chunk)
            .reduce(|| Tally::new(watched.len(), n_times), Tally::merge)
    });

    let n = n_runs as f64;
    let mut estimates = Vec::with_capacity(targets.len());
    let mut hist_iter = tally.hist.iter();
    for target in targets {
        let (mean, stderr): (Vec<f64>, Vec<f64>) = if *target == Target::Level {
            let mf = m as f64;
            (0..n_times)
                .map(|i| {
                    let s1 = tally.level_sum[i] as f64;
                    let s2 = tally.level_sq[i] as f64;
                    let var = ((s2 - s1 * s1 / n) / (n - 1.0)).max(0.0);
                    (s1 / (n * mf), (var / n).sqrt() / mf)
                })
                .unzip()
        } else {
            let hist = hist_iter.next().expect("one histogram per indicator target");
            let survival = matches!(target, Target::Omega { .. } | Target::Pair { .. });
            let mut happened = 0u64;
            (0..n_times)
                .map(|i| {
                    happened += hist[i];
                    let k = if survival { n_runs - happened } else { happened } as f64;
                    let mean = k / n;
                    // indicator variance with the n - 1 denominator
                    let var = (k * (1.0 - mean) / (n - 1.0)).max(0.0);
                    (mean, (var / n).sqrt())
                })
                .unzip()
        };
        estimates.push(Estimate {
            target: target.clone(),
            times: times.to_vec(),
            mean,
            stderr,
            n_runs,
            seed,
            scheme,
        });
    }
    Ok(estimates)
}

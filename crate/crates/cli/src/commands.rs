use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use bassnet::closed_form::{f_1d, s_circle_eval};
use bassnet::curve::{linear_grid, validate_grid};
use bassnet::exact::{memory_estimate, solve};
use bassnet::graph::{
    classify_edges, dominance_compare, funnel_blockers, indifference_reduce, influential_nodes,
    is_funnel_node, is_vertex_cut, strict_dominance_predicts_node,
};
use bassnet::harness::{verify, Suite};
use bassnet::monte_carlo::estimate;
use bassnet::net::{gen_circle, gen_line, gen_ray_star, gen_torus};
use bassnet::{Error, Influence, Network, NetworkFile, Partition, Relation, SolverConfig};
use serde_json::json;

use crate::args::*;
use crate::manifest::{sha256_hex, InputHash};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
    Budget(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::Budget(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

/// Per-run bookkeeping that ends up in the manifest.
pub struct Ctx {
    pub jobs: usize,
    pub inputs: Vec<InputHash>,
    pub seeds: Vec<u64>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Res<String> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(InputHash {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|_| CliError::Invalid(format!("{} is not UTF-8", path.display())))
    }

    fn network(&mut self, path: &Path) -> Res<Network> {
        let text = self.read(path)?;
        Network::from_json_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }
}

/// What a command produced: the data, and whether any check failed.
pub struct Produced {
    pub data: String,
    pub checks_failed: bool,
}

fn data(data: String) -> Res<Produced> {
    Ok(Produced { data, checks_failed: false })
}

pub fn run(cmd: &Command, ctx: &mut Ctx) -> Res<Produced> {
    match cmd {
        Command::Gen(g) => data(generate(g)?.to_json_string() + "\n"),
        Command::Solve(a) => solve_cmd(a, ctx),
        Command::Formula(a) => formula(a),
        Command::Simulate(a) => simulate(a, ctx),
        Command::Analyze(a) => analyze(a, ctx),
        Command::Verify(a) => verify_cmd(a, ctx),
    }
}

fn influence(r: &RateArgs) -> Res<Influence> {
    match (r.q, r.q_left, r.q_right) {
        (Some(q), None, None) => Ok(Influence::OneSided { q }),
        (None, Some(left), Some(right)) => Ok(Influence::TwoSided { left, right }),
        _ => Err(CliError::Usage("give --q, or both --q-left and --q-right".into())),
    }
}

fn generate(g: &GenCommand) -> Res<Network> {
    Ok(match g {
        GenCommand::Circle { m, rates } => gen_circle(*m, rates.p, influence(rates)?)?,
        GenCommand::Line { m, rates } => gen_line(*m, rates.p, influence(rates)?)?,
        GenCommand::Torus { d, m1, p, q, sided } => gen_torus(*d, *m1, *p, *q, sided.into_core())?,
        GenCommand::Raystar { n, l, p, qt } => gen_ray_star(*n, *l, *p, *qt)?,
    })
}

fn grid(g: &GridArgs) -> Res<Vec<f64>> {
    if g.times.is_empty() {
        Ok(linear_grid(g.tmax, g.steps)?)
    } else {
        validate_grid(&g.times)?;
        Ok(g.times.clone())
    }
}

fn solve_cmd(a: &SolveArgs, ctx: &mut Ctx) -> Res<Produced> {
    let net = ctx.network(&a.net)?;
    let times = grid(&a.grid)?;
    let m = net.size();
    let cap = SolverConfig::default().max_nodes;
    if m <= cap {
        diag!(
            "solving {m} nodes: {} states, about {:.1} MiB",
            1u64 << m,
            memory_estimate(m, times.len()) as f64 / (1 << 20) as f64
        );
    }
    let sd = solve(&net, &times)?;
    let t = &a.target;
    let curve = if !t.omega.is_empty() {
        sd.survival(&t.omega.iter().copied().collect::<BTreeSet<_>>())?
    } else if let Some(j) = t.node {
        sd.f_node(j)?
    } else if t.level {
        sd.f_level()
    } else {
        match t.pair.as_slice() {
            &[i, j] => sd.s_pair(i, j)?,
            _ => return Err(CliError::Usage("--pair takes two nodes, e.g. --pair 1,4".into())),
        }
    };
    data(match a.format {
        Format::Csv => curve.to_csv(),
        Format::Json => curve.to_json() + "\n",
    })
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> Res<T> {
    v.ok_or_else(|| CliError::Usage(format!("formula {kind} needs {flag}")))
}

fn formula(a: &FormulaArgs) -> Res<Produced> {
    let times = grid(&a.grid)?;
    let fallback = a.singular_fallback == Switch::On;
    let p = a.p;
    let kind = format!("{:?}", a.kind).to_lowercase();
    let sc = |t: f64, q: f64, m: usize| -> Res<f64> { Ok(s_circle_eval(t, p, q, m, fallback)?.s) };
    let mut values = Vec::with_capacity(times.len());
    match a.kind {
        FormulaKind::Circle => {
            let (q, m) = (need(a.q, "--q", &kind)?, need(a.m, "--M", &kind)?);
            for &t in &times {
                values.push(1.0 - sc(t, q, m)?);
            }
        }
        FormulaKind::F1d => {
            let q = need(a.q, "--q", &kind)?;
            for &t in &times {
                values.push(f_1d(t, p, q)?);
            }
        }
        FormulaKind::Line1s => {
            let q = need(a.q, "--q", &kind)?;
            let m = need(a.m, "--M", &kind)?;
            let nodes = line_nodes(m, a.j)?;
            for &t in &times {
                let mut sum = 0.0;
                for &j in &nodes {
                    sum += 1.0 - sc(t, q, j)?;
                }
                values.push(sum / nodes.len() as f64);
            }
        }
        FormulaKind::Line2s => {
            let (ql, qr) = (need(a.q_left, "--q-left", &kind)?, need(a.q_right, "--q-right", &kind)?);
            let m = need(a.m, "--M", &kind)?;
            let nodes = line_nodes(m, a.j)?;
            for &t in &times {
                let mut sum = 0.0;
                for &j in &nodes {
                    sum += 1.0 - (p * t).exp() * sc(t, ql, j)? * sc(t, qr, m - j + 1)?;
                }
                values.push(sum / nodes.len() as f64);
            }
        }
    }
    let mut out = String::from("t,value\n");
    for (t, v) in times.iter().zip(&values) {
        writeln!(out, "{t},{v}").expect("string write");
    }
    data(out)
}

/// The node `j`, or every node of the line for the level.
fn line_nodes(m: usize, j: Option<usize>) -> Res<Vec<usize>> {
    if m == 0 {
        return Err(Error::InvalidSize("line needs at least one node".into()).into());
    }
    match j {
        Some(j) if j == 0 || j > m => Err(Error::IndexOutOfRange { index: j, size: m }.into()),
        Some(j) => Ok(vec![j]),
        None => Ok((1..=m).collect()),
    }
}

fn simulate(a: &SimulateArgs, ctx: &mut Ctx) -> Res<Produced> {
    let net = ctx.network(&a.net)?;
    let times = grid(&a.grid)?;
    ctx.seeds.push(a.seed);
    let est = estimate(&net, std::slice::from_ref(&a.target), &times, a.runs, a.seed, a.scheme, ctx.jobs)?;
    data(est[0].to_csv())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

fn partition(a: &PartitionArgs) -> Partition {
    Partition::new(a.a.iter().copied(), a.b.iter().copied(), a.j)
}

fn analyze(cmd: &AnalyzeCommand, ctx: &mut Ctx) -> Res<Produced> {
    let out = match cmd {
        AnalyzeCommand::Influential(a) => {
            let net = ctx.network(&a.net)?;
            let omega: BTreeSet<usize> = a.omega.iter().copied().collect();
            let nodes = influential_nodes(&net, &omega)?;
            let edges: Vec<_> = classify_edges(&net, &omega)?
                .into_iter()
                .map(|(k, j, infl)| json!({ "from": k, "to": j, "rate": net.rate(k, j), "influential": infl }))
                .collect();
            json!({ "omega": omega, "influential_nodes": nodes, "edges": edges })
        }
        AnalyzeCommand::Funnel(a) => {
            let net = ctx.network(&a.net)?;
            let part = partition(a);
            json!({
                "j": part.j,
                "is_funnel_node": is_funnel_node(&net, &part)?,
                "blockers": funnel_blockers(&net, &part)?,
                "is_vertex_cut": is_vertex_cut(&net, &part)?,
            })
        }
        AnalyzeCommand::Cut(a) => {
            let net = ctx.network(&a.net)?;
            let part = partition(a);
            json!({ "j": part.j, "is_vertex_cut": is_vertex_cut(&net, &part)? })
        }
        AnalyzeCommand::Reduce(a) => {
            let net = ctx.network(&a.net)?;
            let omega: BTreeSet<usize> = a.omega.iter().copied().collect();
            let removed: Vec<_> = classify_edges(&net, &omega)?
                .into_iter()
                .filter(|c| !c.2)
                .map(|(k, j, _)| json!([k, j, net.rate(k, j)]))
                .collect();
            let reduced = indifference_reduce(&net, &omega)?;
            json!({ "omega": omega, "removed_edges": removed, "network": NetworkFile::from(&reduced) })
        }
        AnalyzeCommand::Dominate { net, other, node } => {
            let a = ctx.network(net)?;
            let b = ctx.network(other)?;
            let cmp = dominance_compare(&a, &b)?;
            let mut v = serde_json::to_value(&cmp).expect("dominance serializes");
            if let Some(j) = node {
                let strict = match cmp.relation {
                    Relation::Equal => false,
                    Relation::Incomparable => return Err(Error::NotDominated.into()),
                    _ => strict_dominance_predicts_node(&a, &b, *j)?,
                };
                v["node"] = json!(j);
                v["strictly_slower_at_node"] = json!(strict);
            }
            v
        }
    };
    data(pretty(&out))
}

fn verify_cmd(a: &VerifyArgs, ctx: &mut Ctx) -> Res<Produced> {
    let suite = match &a.fixtures {
        Some(path) => {
            let text = ctx.read(path)?;
            Suite::from_json_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?
        }
        None => Suite::shipped(),
    };
    ctx.seeds.push(suite.mc.seed);
    let reports = verify(&suite, a.family, ctx.jobs)?;
    let passed = reports.iter().all(|r| r.passed());
    for r in &reports {
        diag!(
            "{} {}: {} fixtures, {} failures",
            if r.passed() { "PASS" } else { "FAIL" },
            r.theorem,
            r.fixtures.len(),
            r.failures.len()
        );
    }
    let out = json!({ "family": a.family, "passed": passed, "reports": reports });
    Ok(Produced { data: pretty(&out), checks_failed: !passed })
}

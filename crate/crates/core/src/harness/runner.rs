//! Runs a [`Suite`] family by family; fixtures run concurrently and the
//! reports are merged in suite order, so output does not depend on the
//! number of threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chebyshev::{chebyshev_check_1d, chebyshev_check_multid, GridFn};
use super::checks::{
    check_circle_product, check_dimension_bound, check_funnel, check_line_comparison, check_pair,
    check_pairs_all,
};
use super::fixtures::{ChebyshevFixture, Suite};
use super::CheckReport;
use crate::error::{Error, Result};
use crate::net::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    All,
    Pair,
    Funnel,
    Circle,
    Line,
    Dimension,
    Chebyshev,
}

impl Family {
    pub const EACH: [Family; 6] = [
        Family::Pair,
        Family::Funnel,
        Family::Circle,
        Family::Line,
        Family::Dimension,
        Family::Chebyshev,
    ];

    fn name(self) -> &'static str {
        match self {
            Family::All => "all",
            Family::Pair => "pair",
            Family::Funnel => "funnel",
            Family::Circle => "circle",
            Family::Line => "line",
            Family::Dimension => "dimension",
            Family::Chebyshev => "chebyshev",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Family::All]
            .into_iter()
            .chain(Family::EACH)
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check family '{s}'")))
    }
}

fn run_family(suite: &Suite, family: Family) -> Result<CheckReport> {
    let times = &suite.times;
    let reports: Vec<CheckReport> = match family {
        Family::All => unreachable!("expanded by verify"),
        Family::Pair => suite
            .pair
            .par_iter()
            .map(|fx| {
                let net = Network::try_from(fx.network.clone())?;
                match &fx.pairs {
                    None => check_pairs_all(&net, times),
                    Some(pairs) => {
                        let mut merged =
                            CheckReport::new("pair nonadoption inequality and dichotomy", super::Method::Exact);
                        for &(i, j) in pairs {
                            merged.absorb(check_pair(&net, i, j, times)?);
                        }
                        Ok(merged)
                    }
                }
            })
            .collect::<Result<_>>()?,
        Family::Funnel => suite
            .funnel
            .par_iter()
            .map(|fx| check_funnel(&Network::try_from(fx.network.clone())?, &fx.partition, times))
            .collect::<Result<_>>()?,
        Family::Circle => suite
            .circle
            .par_iter()
            .map(|fx| check_circle_product(times, fx.p, fx.q1, fx.q2, fx.m))
            .collect::<Result<_>>()?,
        Family::Line => suite
            .line
            .par_iter()
            .map(|fx| check_line_comparison(times, fx.p, fx.q_left, fx.q_right, fx.m))
            .collect::<Result<_>>()?,
        // Monte Carlo fixtures parallelize internally
        Family::Dimension => suite
            .dimension
            .iter()
            .map(|fx| {
                let t = fx.times.as_deref().unwrap_or(times);
                check_dimension_bound(t, fx.p, fx.q, fx.d, fx.m1, fx.sided, &suite.mc)
            })
            .collect::<Result<_>>()?,
        Family::Chebyshev => suite
            .chebyshev
            .par_iter()
            .map(|fx| match fx {
                ChebyshevFixture::OneD { f, g, w, a, b } => chebyshev_check_1d(f, g, w, *a, *b),
                ChebyshevFixture::MultiD { dims, f, g } => chebyshev_check_multid(
                    &GridFn::new(dims.clone(), f.clone())?,
                    &GridFn::new(dims.clone(), g.clone())?,
                ),
            })
            .collect::<Result<_>>()?,
    };
    let mut iter = reports.into_iter();
    let mut merged = match iter.next() {
        Some(r) => r,
        None => {
            let mut r = CheckReport::new(family.name(), super::Method::Exact);
            r.note("no fixtures");
            return Ok(r);
        }
    };
    for r in iter {
        merged.absorb(r);
    }
    Ok(merged)
}

/// Runs `family` (or every family) of `suite` on `jobs` threads and returns
/// one merged report per family.
pub fn verify(suite: &Suite, family: Family, jobs: usize) -> Result<Vec<CheckReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let families: Vec<Family> = if family == Family::All {
        Family::EACH.to_vec()
    } else {
        vec![family]
    };
    pool.install(|| families.iter().map(|&f| run_family(suite, f)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in [Family::All].into_iter().chain(Family::EACH) {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("pairs".parse::<Family>().is_err());
    }

    #[test]
    fn reports_do_not_depend_on_threads() {
        let mut suite = Suite::shipped();
        suite.pair.truncate(6);
        let a = verify(&suite, Family::Pair, 1).unwrap();
        let b = verify(&suite, Family::Pair, 4).unwrap();
        assert_eq!(a, b);
        assert!(a[0].passed(), "{:?}", a[0].failures);
    }
}

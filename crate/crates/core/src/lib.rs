//! Discrete Bass diffusion on weighted directed networks.
//!
//! Node `j` adopts irreversibly at rate `p_j + Σ_k q_{k,j} X_k(t)` starting
//! from the all-nonadopter state. The crate computes adoption and
//! nonadoption probabilities exactly from the master equations, from
//! explicit formulas for circles and lines, and by Monte Carlo, and checks
//! the structural inequalities relating them.
//!
//! ```
//! use std::collections::BTreeSet;
//!
//! use bassnet::closed_form::f_circle;
//! use bassnet::curve::linear_grid;
//! use bassnet::exact::solve;
//! use bassnet::net::gen_circle;
//! use bassnet::Influence;
//!
//! let net = gen_circle(6, 0.3, Influence::OneSided { q: 0.7 })?;
//! let times = linear_grid(2.0, 20)?;
//! let sd = solve(&net, &times)?;
//! let level = sd.f_level();
//! let s12 = sd.survival(&BTreeSet::from([1, 2]))?;
//! assert!((level.values[20] - f_circle(2.0, 0.3, 0.7, 6)?).abs() < 1e-8);
//! assert!(s12.values[20] < 1.0);
//! # Ok::<(), bassnet::Error>(())
//! ```

pub mod closed_form;
pub mod curve;
pub mod dd;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod monte_carlo;
pub mod net;
pub mod quadrature;

pub use curve::{Curve, CurveKind};
pub use error::{Error, Result};
pub use exact::{SolverConfig, StateDistribution};
pub use monte_carlo::{Estimate, Scheme, Target};
pub use graph::{DominanceResult, Relation};
pub use harness::{CheckReport, Method, Verdict};
pub use net::{build_network, DerivedKind, Influence, Network, NetworkFile, Partition, Sidedness};

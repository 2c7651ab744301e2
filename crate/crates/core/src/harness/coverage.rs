//! Which check or test exercises each structural result.
//!
//! Targets are written `check:<fn>` for harness checks,
//! `unit:<file>:<fn>` for unit tests under `src/` and
//! `test:<file>:<fn>` for integration tests under `tests/`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub result: &'static str,
    pub kind: &'static str,
    pub covered_by: &'static [&'static str],
    pub note: &'static str,
}

/// The harness check functions that coverage entries may name.
pub const CHECKS: [&str; 8] = [
    "check_pair",
    "check_pairs_all",
    "check_funnel",
    "check_circle_product",
    "check_line_comparison",
    "check_dimension_bound",
    "chebyshev_check_1d",
    "chebyshev_check_multid",
];

pub const MANIFEST: &[Coverage] = &[
    Coverage {
        result: "dominance principle for nodes",
        kind: "theorem",
        covered_by: &[
            "test:properties.rs:dominance_is_monotone",
            "test:properties.rs:coupled_runs_are_ordered",
        ],
        note: "",
    },
    Coverage {
        result: "indifference principle",
        kind: "theorem",
        covered_by: &[
            "test:properties.rs:indifference_preserves_survival",
            "test:properties.rs:reduction_is_idempotent",
        ],
        note: "",
    },
    Coverage {
        result: "strong dominance principle for nodes",
        kind: "lemma",
        covered_by: &["test:properties.rs:strict_dominance_matches_prediction"],
        note: "",
    },
    Coverage {
        result: "weighted one-dimensional Chebyshev inequality",
        kind: "lemma",
        covered_by: &["check:chebyshev_check_1d", "test:acceptance.rs:chebyshev_utilities"],
        note: "",
    },
    Coverage {
        result: "multi-dimensional Chebyshev inequality",
        kind: "lemma",
        covered_by: &["check:chebyshev_check_multid", "test:acceptance.rs:chebyshev_utilities"],
        note: "",
    },
    Coverage {
        result: "pair covariance identity S_ij - S_i S_j = f_ij - f_i f_j",
        kind: "lemma",
        covered_by: &["check:check_pair", "unit:exact.rs:isolated_pair"],
        note: "",
    },
    Coverage {
        result: "pair nonadoption inequality",
        kind: "theorem",
        covered_by: &["check:check_pair", "test:acceptance.rs:pair_dichotomy"],
        note: "",
    },
    Coverage {
        result: "pair strictness dichotomy via common influential nodes",
        kind: "theorem",
        covered_by: &["check:check_pairs_all", "test:acceptance.rs:pair_dichotomy"],
        note: "",
    },
    Coverage {
        result: "influential node gives strict pair inequality",
        kind: "corollary",
        covered_by: &["check:check_pair"],
        note: "a node influential to j is a common influential node of i and j",
    },
    Coverage {
        result: "funnel inequality",
        kind: "theorem",
        covered_by: &["check:check_funnel", "test:acceptance.rs:funnel_dichotomy"],
        note: "",
    },
    Coverage {
        result: "vertex cut is a funnel node",
        kind: "lemma",
        covered_by: &["test:properties.rs:vertex_cut_implies_funnel_node"],
        note: "",
    },
    Coverage {
        result: "funnel equality",
        kind: "theorem",
        covered_by: &["check:check_funnel", "test:acceptance.rs:funnel_dichotomy"],
        note: "",
    },
    Coverage {
        result: "one-side-only funnel identities and the isolated external node",
        kind: "lemma",
        covered_by: &["check:check_funnel"],
        note: "also checked through the node-splitting network",
    },
    Coverage {
        result: "funnel corollary with external rate on both sides",
        kind: "corollary",
        covered_by: &["check:check_funnel"],
        note: "",
    },
    Coverage {
        result: "circle product inequality",
        kind: "theorem",
        covered_by: &["check:check_circle_product", "test:acceptance.rs:circle_product"],
        note: "",
    },
    Coverage {
        result: "infinite-line product identity",
        kind: "lemma",
        covered_by: &["check:check_circle_product", "unit:closed_form.rs:one_d_product_identity"],
        note: "",
    },
    Coverage {
        result: "one-sided line node adoption strictly increasing in position",
        kind: "lemma",
        covered_by: &["unit:closed_form.rs:line_properties"],
        note: "",
    },
    Coverage {
        result: "one-sided line node equals circle of j nodes",
        kind: "lemma",
        covered_by: &["test:properties.rs:one_sided_line_matches_circle"],
        note: "",
    },
    Coverage {
        result: "circle adoption level strictly increasing in M",
        kind: "corollary",
        covered_by: &["unit:closed_form.rs:approaches_infinite_line"],
        note: "resolvable only to double precision once M exceeds about 20",
    },
    Coverage {
        result: "isotropic two-sided line quadrature expression",
        kind: "lemma",
        covered_by: &["test:acceptance.rs:two_sided_line_formula"],
        note: "used as an independent oracle in tests",
    },
    Coverage {
        result: "two-sided line product expression",
        kind: "theorem",
        covered_by: &["test:acceptance.rs:two_sided_line_formula", "check:check_line_comparison"],
        note: "",
    },
    Coverage {
        result: "one-sided line slower than two-sided line",
        kind: "theorem",
        covered_by: &["check:check_line_comparison", "test:acceptance.rs:line_comparison"],
        note: "",
    },
    Coverage {
        result: "infinite lattice adopts faster than the infinite line",
        kind: "theorem",
        covered_by: &["check:check_dimension_bound"],
        note: "not checkable on finite networks; only the truncated-ray convergence trend is checked",
    },
    Coverage {
        result: "intersection of one-sided rays",
        kind: "lemma",
        covered_by: &["check:check_dimension_bound"],
        note: "truncated rays of increasing length",
    },
    Coverage {
        result: "torus adopts faster than circle",
        kind: "theorem",
        covered_by: &["check:check_dimension_bound", "test:acceptance.rs:torus_bound"],
        note: "",
    },
    Coverage {
        result: "time-discretized realization algorithm",
        kind: "algorithm",
        covered_by: &[
            "unit:monte_carlo.rs:single_node_discrete_is_bernoulli_product",
            "test:acceptance.rs:monte_carlo_calibration",
        ],
        note: "",
    },
];

//! Depth results, options, method selection and the degeneracy policy shared
//! by every exact method.
//!
//! The policy runs in this order:
//! 1. centre the cloud on the query;
//! 2. unless disabled, test whether the query lies in the convex hull of the
//!    raw data and return depth zero if it does not (no perturbation needed);
//! 3. verify general position, run the method, and on any degeneracy restart
//!    from a seeded perturbation of the centred cloud, up to `max_restarts`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cone_search::{cone_search, SearchOptions};
use crate::error::{DepthError, Result};
use crate::geometry::{
    center, check_general_position, displace_coincident, perturb, CenteredCloud, ConeCode,
    Direction, GeneralPositionMode, PointCloud, DEFAULT_PERTURBATION,
};
use crate::lp::{FeasibilityOutcome, FeasibilityProblem, PhaseOneSolver};
use crate::oracles::{approximate_depth, combinatorial_depth, planar_depth, ApproxConfig};

/// An exact depth value `count / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Depth {
    pub count: usize,
    pub n: usize,
}

impl Depth {
    pub fn as_f64(&self) -> f64 {
        self.count as f64 / self.n as f64
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.n)
    }
}

impl PartialOrd for Depth {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Depth {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // a/b vs c/d by cross multiplication
        (self.count as u128 * other.n as u128).cmp(&(other.count as u128 * self.n as u128))
    }
}

/// Search counters reported with every result.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDiagnostics {
    pub cones_visited: u64,
    pub lp_calls: u64,
    pub lp_cache_hits: u64,
    pub lp_warm_starts: u64,
    pub generations: u64,
    /// Codes whose mirror was enqueued in the same generation.
    pub mirror_duplicates: u64,
    pub perturbation_restarts: u64,
    /// A data point coinciding with the query was moved towards the mean.
    pub coincident_displaced: bool,
    /// The hull precheck settled the depth at zero.
    pub precheck_exit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthResult {
    /// Minimal number of points in a closed halfspace containing the query.
    pub count: usize,
    pub n: usize,
    pub minimizing_code: Option<ConeCode>,
    /// Unit vector whose closed positive halfspace through the query holds
    /// exactly `count` points (of the cloud the method ran on).
    pub witness_direction: Option<Direction>,
    pub diagnostics: SearchDiagnostics,
}

impl DepthResult {
    pub fn depth(&self) -> Depth {
        Depth {
            count: self.count,
            n: self.n,
        }
    }

    pub fn value(&self) -> f64 {
        self.depth().as_f64()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthOptions {
    pub seed: u64,
    /// Relative perturbation magnitude used on degeneracy restarts.
    pub perturb_magnitude: f64,
    pub skip_hull_precheck: bool,
    pub max_restarts: usize,
    pub check_general_position: bool,
    /// Stop the cone search as soon as the running minimum hits its lower
    /// bound (1 after a passed hull precheck, 0 otherwise).
    pub early_exit: bool,
    /// Debug fault injection: invert the facet test.
    #[serde(skip)]
    pub invert_facet_test: bool,
}

impl Default for DepthOptions {
    fn default() -> Self {
        DepthOptions {
            seed: 0,
            perturb_magnitude: DEFAULT_PERTURBATION,
            skip_hull_precheck: false,
            max_restarts: 5,
            check_general_position: true,
            early_exit: false,
            invert_facet_test: false,
        }
    }
}

impl DepthOptions {
    pub fn with_seed(seed: u64) -> Self {
        DepthOptions {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthMethod {
    /// Breadth-first cone search.
    Exact,
    /// Brute force over `(d-1)`-subsets.
    Comb,
    /// Angular sweep, `d = 2` only.
    Planar,
    /// Minimum over random projections; an upper bound.
    Approx { directions: usize },
}

impl DepthMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DepthMethod::Exact => "exact",
            DepthMethod::Comb => "comb",
            DepthMethod::Planar => "planar",
            DepthMethod::Approx { .. } => "approx",
        }
    }
}

/// Depth of `query` with respect to `cloud` by the selected method.
pub fn depth(
    cloud: &PointCloud,
    query: &[f64],
    method: DepthMethod,
    options: &DepthOptions,
) -> Result<DepthResult> {
    match method {
        DepthMethod::Exact => tukey_depth(cloud, query, options),
        DepthMethod::Comb => {
            with_degeneracy_policy(cloud, query, options, |c, _| combinatorial_depth(c))
        }
        DepthMethod::Planar => {
            if cloud.dim() != 2 {
                return Err(DepthError::DimensionMismatch {
                    expected: 2,
                    got: cloud.dim(),
                });
            }
            with_degeneracy_policy(cloud, query, options, |c, _| planar_depth(c))
        }
        DepthMethod::Approx { directions } => {
            let centered = center(cloud, query)?;
            approximate_depth(&centered, &ApproxConfig::new(directions, options.seed)?)
        }
    }
}

/// Exact Tukey depth by breadth-first search over the cone segmentation.
pub fn tukey_depth(
    cloud: &PointCloud,
    query: &[f64],
    options: &DepthOptions,
) -> Result<DepthResult> {
    with_degeneracy_policy(cloud, query, options, |c, floor| {
        cone_search(
            c,
            &SearchOptions {
                seed: options.seed,
                early_exit_floor: if options.early_exit {
                    Some(floor)
                } else {
                    None
                },
                invert_facet_test: options.invert_facet_test,
            },
        )
    })
}

/// Runs `method` on the centred cloud under the precheck/perturbation policy.
/// The closure receives the lower bound on the count that the precheck
/// established for the unperturbed data (0 or 1).
pub fn with_degeneracy_policy<F>(
    cloud: &PointCloud,
    query: &[f64],
    options: &DepthOptions,
    mut method: F,
) -> Result<DepthResult>
where
    F: FnMut(&CenteredCloud, usize) -> Result<DepthResult>,
{
    let centered = center(cloud, query)?;
    let (n, d) = (centered.len(), centered.dim());
    if n <= d {
        return Err(DepthError::TooFewPoints { n, d });
    }
    let (centered, displaced) = match displace_coincident(&centered) {
        Some(moved) => (moved, true),
        None => (centered, false),
    };
    let mut floor = 0;
    if !options.skip_hull_precheck {
        match hull_precheck(&centered) {
            Ok(Some(mut zero)) => {
                zero.diagnostics.coincident_displaced = displaced;
                return Ok(zero);
            }
            Ok(None) => floor = 1,
            Err(e) if e.is_degeneracy() => {}
            Err(e) => return Err(e),
        }
    }

    let mut working = centered.clone();
    let mut restarts = 0usize;
    loop {
        let attempt = if options.check_general_position {
            let mode = GeneralPositionMode::auto(n, d, options.seed);
            let report = check_general_position(&working, mode);
            match report.violation {
                Some((_, why)) => Err(DepthError::DegeneracyDetected(why)),
                None => method(&working, if restarts == 0 { floor } else { 0 }),
            }
        } else {
            method(&working, if restarts == 0 { floor } else { 0 })
        };
        match attempt {
            Ok(mut result) => {
                result.diagnostics.perturbation_restarts = restarts as u64;
                result.diagnostics.coincident_displaced = displaced;
                if displaced || restarts > 0 {
                    // code and witness describe the moved or perturbed
                    // cloud; points on a boundary may be miscounted
                    result.minimizing_code = None;
                    result.witness_direction = None;
                }
                // z in conv(X) puts at least one point in every closed
                // halfspace through z; the perturbed data may have lost it
                if result.count < floor {
                    log::debug!(
                        "perturbed count {} raised to the precheck bound {floor}",
                        result.count
                    );
                    result.count = floor;
                    result.minimizing_code = None;
                    result.witness_direction = None;
                }
                return Ok(result);
            }
            Err(e) if e.is_degeneracy() => {
                if restarts >= options.max_restarts {
                    log::warn!("giving up after {restarts} perturbation restarts: {e}");
                    return Err(DepthError::DegeneracyUnresolved(restarts));
                }
                restarts += 1;
                log::debug!("degeneracy ({e}); perturbing, restart {restarts}");
                working = perturb(
                    &centered,
                    options.perturb_magnitude,
                    options.seed.wrapping_add(restarts as u64),
                );
            }
            Err(e) => return Err(e),
        }
    }
}

/// `Some(depth 0)` if the origin lies outside the hull of the centred points.
pub fn hull_precheck(centered: &CenteredCloud) -> Result<Option<DepthResult>> {
    let n = centered.len();
    let problem = FeasibilityProblem::from_flat(
        centered.cloud().points().flatten().copied().collect(),
        centered.dim(),
    )?;
    match PhaseOneSolver::new().solve(&problem, None)? {
        FeasibilityOutcome::InHull { .. } => Ok(None),
        FeasibilityOutcome::NotInHull { witness, .. } => {
            // every point is strictly positive on `witness`, none on its negation
            let dir = Direction::new(witness)?.negated();
            Ok(Some(DepthResult {
                count: 0,
                n,
                minimizing_code: Some(ConeCode::zeros(n)),
                witness_direction: Some(dir),
                diagnostics: SearchDiagnostics {
                    lp_calls: 1,
                    precheck_exit: true,
                    ..Default::default()
                },
            }))
        }
    }
}

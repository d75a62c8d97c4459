//! Exact Tukey (halfspace) depth.
//!
//! The depth of a query `z` with respect to points `x_1..x_n` in `R^d` is the
//! smallest number of points in a closed halfspace whose boundary passes
//! through `z`, divided by `n`. [`tukey_depth`] computes it exactly by
//! walking the cells of the central hyperplane arrangement `{x_i - z}^⊥`
//! breadth-first, using phase-1 simplex in the `(d-1)`-dimensional
//! hyperplanes to find each cell's neighbours.
//!
//! Also provided: independent reference methods ([`oracles`]), a
//! random-projection upper bound, and depth-based robust PCA and DD-plot
//! coordinates ([`applications`]).
//!
//! ```
//! use deepcore::{tukey_depth, DepthOptions, PointCloud};
//!
//! let x = PointCloud::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]]).unwrap();
//! let r = tukey_depth(&x, &[0.0, 0.0], &DepthOptions::default()).unwrap();
//! assert_eq!(r.depth().to_string(), "1/3");
//! ```

pub mod applications;
pub mod cone_search;
pub mod depth;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod oracles;
pub mod sample;

pub use applications::{
    classical_pca, dd_coordinates, dd_plot, depth_field, depth_weighted_mean, robust_pca,
    rsgn_transform, DdPlot, DdPoint, DepthField, PcaResult, RsgnCloud,
};
pub use cone_search::{cone_search, enumerate_cones, interior_direction, is_facet, SearchOptions};
pub use depth::{
    depth, tukey_depth, Depth, DepthMethod, DepthOptions, DepthResult, SearchDiagnostics,
};
pub use error::{DepthError, Result};
pub use geometry::{
    center, check_general_position, displace_coincident, initial_direction, perturb,
    project_onto_plane, sign_vector, CenteredCloud, ConeCode, Direction, GeneralPositionMode,
    GeneralPositionReport, PlaneCache, PointCloud,
};
pub use lp::{basis_still_valid, origin_in_hull, FeasibilityOutcome, FeasibilityProblem};
pub use oracles::{
    approximate_depth, combinatorial_depth, planar_depth, univariate_depth, ApproxConfig,
};

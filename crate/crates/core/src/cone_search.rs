//! Breadth-first search over the direction cones of a centred cloud.
//!
//! Cones are identified by their [`ConeCode`]. Starting from the cone of a
//! random direction `r0`, a cone `b` is expanded only through points whose
//! bit still agrees with `r0`'s code, so generation `g` holds exactly the
//! codes at Hamming distance `g - 1` from the start. Only the current and the
//! next generation are stored. Every cone or its mirror lies within distance
//! `floor(n / 2)`, hence `floor((n + 2) / 2)` generations suffice; the last
//! one is scored but not expanded.
//!
//! Whether the hyperplane normal to point `j` carries a facet of cone `b` is
//! decided in that hyperplane: with every other point projected onto it and
//! multiplied by its sign in `b`, a facet exists iff the origin lies outside
//! the convex hull of those projections (they are then strictly separable
//! through the origin). Each point keeps its projections in a
//! [`PlaneCache`] that is re-signed incrementally, and an in-hull verdict is
//! reused while none of its basis points changes sign.

use std::collections::{BTreeSet, VecDeque};

use crate::depth::{DepthResult, SearchDiagnostics};
use crate::error::{DepthError, Result};
use crate::geometry::{
    initial_direction, project_onto_plane, CenteredCloud, ConeCode, Direction, PlaneCache,
};
use crate::lp::{basis_still_valid, FeasibilityOutcome, PhaseOneSolver};

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub seed: u64,
    /// Stop once the running minimum reaches this value.
    pub early_exit_floor: Option<usize>,
    /// Debug fault injection: report a facet exactly when there is none.
    pub invert_facet_test: bool,
}

/// Facet tests with a reusable simplex workspace.
#[derive(Debug, Default)]
pub struct FacetTester {
    solver: PhaseOneSolver,
    rows: Vec<f64>,
    warm: Vec<usize>,
    invert: bool,
}

impl FacetTester {
    pub fn new() -> Self {
        Self::default()
    }

    fn inverted() -> Self {
        FacetTester {
            invert: true,
            ..Self::default()
        }
    }

    /// Aligns `cache` to `code` and tests whether the anchor's hyperplane
    /// carries a facet of the cone.
    pub fn test(
        &mut self,
        cache: &mut PlaneCache,
        code: &ConeCode,
        diag: &mut SearchDiagnostics,
    ) -> Result<bool> {
        let flipped = cache.align_to(code);
        if basis_still_valid(cache, &flipped) {
            diag.lp_cache_hits += 1;
            return Ok(self.invert);
        }
        let anchor = cache.anchor();
        let p = cache.plane_dim();
        let m = cache.len() - 1;
        let to_row = |k: usize| if k < anchor { k } else { k - 1 };
        let to_point = |r: usize| if r < anchor { r } else { r + 1 };

        self.rows.clear();
        for k in (0..cache.len()).filter(|&k| k != anchor) {
            self.rows.extend_from_slice(cache.projected(k));
        }
        self.warm.clear();
        if let Some(basis) = cache.hull_basis.take() {
            self.warm.extend(basis.into_iter().map(to_row));
        }
        let warm = (!self.warm.is_empty()).then_some(self.warm.as_slice());

        diag.lp_calls += 1;
        let facet = match self.solver.solve_rows(&self.rows, m, p, warm)? {
            FeasibilityOutcome::InHull {
                basis,
                warm_started,
                ..
            } => {
                if warm_started {
                    diag.lp_warm_starts += 1;
                }
                cache.hull_basis = Some(basis.into_iter().map(to_point).collect());
                false
            }
            FeasibilityOutcome::NotInHull { .. } => true,
        };
        Ok(facet != self.invert)
    }
}

/// True iff the hyperplane normal to the cache's anchor carries a facet of
/// the cone `code`. Re-signs the cache to `code` as a side effect.
pub fn is_facet(cache: &mut PlaneCache, code: &ConeCode) -> Result<bool> {
    FacetTester::new().test(cache, code, &mut SearchDiagnostics::default())
}

/// A unit direction interior to the cone `code`: `sign(x_i · v)` matches bit
/// `i` for every point.
pub fn interior_direction(code: &ConeCode, cloud: &CenteredCloud) -> Result<Direction> {
    if code.len() != cloud.len() {
        return Err(DepthError::DimensionMismatch {
            expected: cloud.len(),
            got: code.len(),
        });
    }
    let d = cloud.dim();
    let mut rows = Vec::with_capacity(cloud.len() * d);
    for i in 0..cloud.len() {
        let s = if code.get(i) { 1.0 } else { -1.0 };
        rows.extend(cloud.point(i).iter().map(|x| s * x));
    }
    match PhaseOneSolver::new().solve_rows(&rows, cloud.len(), d, None)? {
        FeasibilityOutcome::NotInHull { witness, .. } => Direction::new(witness),
        FeasibilityOutcome::InHull { .. } => Err(DepthError::Unrealizable),
    }
}

fn build_caches(cloud: &CenteredCloud, start: &ConeCode) -> Result<Vec<PlaneCache>> {
    (0..cloud.len())
        .map(|j| {
            let mut cache = project_onto_plane(cloud, j)?;
            cache.align_to(start);
            Ok(cache)
        })
        .collect()
}

/// Number of generations the search needs for `n` points.
pub fn generation_cap(n: usize) -> usize {
    (n + 2) / 2
}

/// Exact depth of the origin for a centred cloud in general position.
pub fn cone_search(cloud: &CenteredCloud, options: &SearchOptions) -> Result<DepthResult> {
    let n = cloud.len();
    let d = cloud.dim();
    if n <= d {
        return Err(DepthError::TooFewPoints { n, d });
    }
    let (_, start) = initial_direction(cloud, options.seed)?;
    let mut caches = build_caches(cloud, &start)?;
    let mut tester = if options.invert_facet_test {
        FacetTester::inverted()
    } else {
        FacetTester::new()
    };
    let mut diag = SearchDiagnostics::default();

    let cap = generation_cap(n);
    let mut topical: VecDeque<ConeCode> = VecDeque::from([start.clone()]);
    let mut future: BTreeSet<ConeCode> = BTreeSet::new();
    let mut best = (start.min_side(), start.clone());
    let mut generation = 1;

    'search: loop {
        diag.generations = generation as u64;
        while let Some(code) = topical.pop_front() {
            diag.cones_visited += 1;
            let side = code.min_side();
            if side < best.0 {
                best = (side, code.clone());
            }
            if options
                .early_exit_floor
                .is_some_and(|floor| best.0 <= floor)
            {
                break 'search;
            }
            if generation == cap {
                continue;
            }
            for (j, cache) in caches.iter_mut().enumerate() {
                if code.get(j) != start.get(j) {
                    continue;
                }
                if tester.test(cache, &code, &mut diag)? {
                    future.insert(code.with_flipped(j));
                }
            }
        }
        if generation == cap || future.is_empty() {
            break;
        }
        diag.mirror_duplicates += future
            .iter()
            .filter(|c| future.contains(&c.complement()))
            .count() as u64
            / 2;
        topical.extend(std::mem::take(&mut future));
        generation += 1;
    }

    let (count, code) = best;
    let witness = match interior_direction(&code, cloud) {
        Ok(v) if code.count_ones() == count => Some(v),
        Ok(v) => Some(v.negated()),
        Err(e) if options.invert_facet_test => {
            log::debug!("no witness under the inverted facet test: {e}");
            None
        }
        Err(e) => return Err(e),
    };
    Ok(DepthResult {
        count,
        n,
        minimizing_code: Some(code),
        witness_direction: witness,
        diagnostics: diag,
    })
}

/// Every cone of the segmentation, found by unrestricted breadth-first search
/// plus mirrors. On general-position data the count is
/// `2 · Σ_{k<d} C(n-1, k)`.
#[derive(Debug, Clone)]
pub struct ConeEnumeration {
    pub codes: BTreeSet<ConeCode>,
    /// Codes reached by search before mirrors were added.
    pub searched: usize,
    pub diagnostics: SearchDiagnostics,
}

pub fn enumerate_cones(cloud: &CenteredCloud, seed: u64) -> Result<ConeEnumeration> {
    let n = cloud.len();
    if cloud.dim() == 0 || n == 0 {
        return Err(DepthError::InvalidInput("empty cloud".into()));
    }
    let (_, start) = initial_direction(cloud, seed)?;
    let mut caches = build_caches(cloud, &start)?;
    let mut tester = FacetTester::new();
    let mut diag = SearchDiagnostics::default();
    let mut seen: BTreeSet<ConeCode> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(code) = queue.pop_front() {
        diag.cones_visited += 1;
        for (j, cache) in caches.iter_mut().enumerate() {
            if tester.test(cache, &code, &mut diag)? {
                let next = code.with_flipped(j);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let searched = seen.len();
    let mirrors: Vec<ConeCode> = seen.iter().map(ConeCode::complement).collect();
    seen.extend(mirrors);
    Ok(ConeEnumeration {
        codes: seen,
        searched,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sign_vector, PointCloud};

    fn cc(points: &[&[f64]]) -> CenteredCloud {
        CenteredCloud::from_centered(
            PointCloud::new(points.iter().map(|p| p.to_vec()).collect()).unwrap(),
        )
    }

    fn triangle() -> CenteredCloud {
        cc(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, -1.0]])
    }

    #[test]
    fn triangle_depth_is_one_third() {
        let r = cone_search(&triangle(), &SearchOptions::default()).unwrap();
        assert_eq!((r.count, r.n), (1, 3));
        assert!(r.diagnostics.generations <= 2);
        let w = r.witness_direction.unwrap();
        let c = triangle();
        let closed = (0..3)
            .filter(|&i| crate::geometry::dot(c.point(i), w.as_slice()) >= 0.0)
            .count();
        assert_eq!(closed, 1);
    }

    #[test]
    fn triangle_cones_have_two_facets_each() {
        let c = triangle();
        let all = enumerate_cones(&c, 0).unwrap();
        assert_eq!(all.codes.len(), 6);
        for code in &all.codes {
            let facets = (0..3)
                .filter(|&j| {
                    let mut cache = project_onto_plane(&c, j).unwrap();
                    is_facet(&mut cache, code).unwrap()
                })
                .count();
            assert_eq!(facets, 2, "{code}");
        }
    }

    #[test]
    fn one_dimensional_search_scores_the_start_only() {
        let c = cc(&[&[1.0], &[-2.0], &[3.0], &[-0.5], &[4.0]]);
        let r = cone_search(&c, &SearchOptions::default()).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.diagnostics.cones_visited, 1);
        assert_eq!(enumerate_cones(&c, 0).unwrap().codes.len(), 2);
    }

    #[test]
    fn interior_direction_realizes_codes() {
        let c = triangle();
        let (r, code) = initial_direction(&c, 7).unwrap();
        let v = interior_direction(&code, &c).unwrap();
        assert_eq!(sign_vector(&c, &v).unwrap(), code);
        assert_eq!(sign_vector(&c, &r).unwrap(), code);
        let mirror = interior_direction(&code.complement(), &c).unwrap();
        assert_eq!(sign_vector(&c, &mirror).unwrap(), code.complement());
        // all points positive would need the origin outside the hull
        assert!(matches!(
            interior_direction(&ConeCode::ones(3), &c),
            Err(DepthError::Unrealizable)
        ));
    }

    #[test]
    fn five_points_in_the_plane_have_ten_cones() {
        let c = cc(&[
            &[1.0, 0.2],
            &[-0.3, 1.1],
            &[-0.9, -0.4],
            &[0.5, -1.3],
            &[1.7, 0.9],
        ]);
        assert_eq!(enumerate_cones(&c, 3).unwrap().codes.len(), 10);
    }

    #[test]
    fn inverted_facet_test_breaks_the_search() {
        let c = cc(&[
            &[1.0, 0.2],
            &[-0.3, 1.1],
            &[-0.9, -0.4],
            &[0.5, -1.3],
            &[1.7, 0.9],
            &[-1.2, 0.6],
        ]);
        let good = cone_search(&c, &SearchOptions::default()).unwrap();
        let bad = cone_search(
            &c,
            &SearchOptions {
                invert_facet_test: true,
                ..Default::default()
            },
        );
        if let Ok(r) = bad {
            assert!(
                r.minimizing_code != good.minimizing_code
                    || r.count != good.count
                    || r.diagnostics.cones_visited != good.diagnostics.cones_visited
            );
        }
    }

    #[test]
    fn cache_hits_are_counted() {
        let pts: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let t = i as f64 * 0.9 + 0.1;
                vec![
                    t.cos() * (1.0 + 0.1 * i as f64),
                    t.sin(),
                    (2.0 * t).cos() * 0.7 + 0.05 * i as f64,
                ]
            })
            .collect();
        let c = CenteredCloud::from_centered(PointCloud::new(pts).unwrap());
        let r = cone_search(&c, &SearchOptions::default()).unwrap();
        assert!(r.diagnostics.lp_cache_hits > 0);
        assert!(r.diagnostics.generations <= generation_cap(12) as u64);
    }
}

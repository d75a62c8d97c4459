//! Workloads shared by the benchmarks: seeded Gaussian instances at the
//! sizes the cone search is meant for.

use deepcore::sample::{gaussian_cloud, instance_seed, query_near};
use deepcore::PointCloud;

pub const SEED: u64 = 7;

/// `(d, n)` pairs timed by the depth benchmarks.
pub const GRID: &[(usize, usize)] = &[(2, 20), (2, 80), (3, 20), (3, 40), (4, 20), (5, 15)];

#[derive(Debug, Clone)]
pub struct Workload {
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub cloud: PointCloud,
    pub query: Vec<f64>,
}

impl Workload {
    pub fn new(d: usize, n: usize, rep: usize) -> Self {
        let seed = instance_seed(SEED, d, n, rep);
        let cloud = gaussian_cloud(n, d, seed);
        let query = query_near(&cloud, seed);
        Workload {
            d,
            n,
            seed,
            cloud,
            query,
        }
    }

    pub fn label(&self) -> String {
        format!("d{}_n{}", self.d, self.n)
    }
}

/// A query at depth > 0, so the cone search runs past the hull precheck.
pub fn interior_workload(d: usize, n: usize) -> Workload {
    (0..)
        .map(|rep| Workload::new(d, n, rep))
        .find(|w| {
            let c = deepcore::center(&w.cloud, &w.query).expect("dimensions match");
            deepcore::depth::hull_precheck(&c).is_ok_and(|r| r.is_none())
        })
        .expect("some query lands inside the hull")
}

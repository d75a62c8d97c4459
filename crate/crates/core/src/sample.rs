//! Seeded random instances for cross-checks, benchmarks and experiments.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{DepthError, Result};
use crate::geometry::{rng_from_seed, PointCloud};

/// `n` standard normal points in `R^d`. Almost surely in general position.
pub fn gaussian_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = rng_from_seed(seed);
    let coords = (0..n * d)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    PointCloud::from_flat(coords, d).expect("n * d coordinates")
}

/// A query near the centre of `cloud`: its mean plus `N(0, I/16)` noise.
/// Lands at every depth level, zero included, with `n` and `d` small.
pub fn query_near(cloud: &PointCloud, seed: u64) -> Vec<f64> {
    let (n, d) = (cloud.len(), cloud.dim());
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..d)
        .map(|k| {
            let mean = cloud.points().map(|p| p[k]).sum::<f64>() / n as f64;
            mean + 0.25 * rng.sample::<f64, _>(StandardNormal)
        })
        .collect()
}

/// Seed of the `rep`-th instance of size `(n, d)` in a grid run from `base`.
pub fn instance_seed(base: u64, d: usize, n: usize, rep: usize) -> u64 {
    base ^ ((d as u64) << 56) ^ ((n as u64) << 40) ^ rep as u64
}

/// Elliptically symmetric sample `mu + L g / s` with `L L' = sigma`:
/// Gaussian for `s = 1`, Student-t with one degree of freedom (Cauchy) for
/// `s = |N(0,1)|`.
pub fn elliptical_cloud(
    n: usize,
    mu: &[f64],
    sigma: &[f64],
    cauchy: bool,
    seed: u64,
) -> Result<PointCloud> {
    let d = mu.len();
    if sigma.len() != d * d {
        return Err(DepthError::DimensionMismatch {
            expected: d * d,
            got: sigma.len(),
        });
    }
    let l = DMatrix::from_row_slice(d, d, sigma)
        .cholesky()
        .ok_or_else(|| DepthError::InvalidInput("scatter matrix is not positive definite".into()))?
        .l();
    let mut rng = rng_from_seed(seed);
    let mut coords = Vec::with_capacity(n * d);
    for _ in 0..n {
        let g = DVector::from_iterator(d, (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let s = if cauchy {
            rng.sample::<f64, _>(StandardNormal).abs()
        } else {
            1.0
        };
        let y = &l * g / s;
        coords.extend(mu.iter().zip(y.iter()).map(|(m, v)| m + v));
    }
    PointCloud::from_flat(coords, d)
}

/// Eigenvectors of a symmetric `d x d` matrix by descending eigenvalue.
pub fn principal_axes(sigma: &[f64], d: usize) -> Vec<Vec<f64>> {
    let eig = DMatrix::from_row_slice(d, d, sigma).symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect()
}

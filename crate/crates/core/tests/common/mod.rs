#![allow(dead_code)]

use deepcore::sample;
use deepcore::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(r: &mut ChaCha8Rng) -> f64 {
    r.sample::<f64, _>(StandardNormal)
}

pub fn gaussian(n: usize, d: usize, seed: u64) -> PointCloud {
    sample::gaussian_cloud(n, d, seed)
}

pub fn query(x: &PointCloud, seed: u64) -> Vec<f64> {
    sample::query_near(x, seed)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub const STRUCTURE_SIGMA: [f64; 9] = [1.0, 1.0, 1.0, 1.0, 4.0, 4.0, 1.0, 4.0, 10.0];

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

//! Reference depth methods that share no code path with the cone search:
//! brute force over boundary subsets, the univariate count, the planar
//! angular sweep, and the random-projection upper bound.

use std::f64::consts::{PI, TAU};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::depth::{DepthResult, SearchDiagnostics};
use crate::error::{DepthError, Result};
use crate::geometry::{dot, norm, rng_from_seed, CenteredCloud, ConeCode, Direction, ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxConfig {
    directions: usize,
    seed: u64,
}

impl ApproxConfig {
    pub fn new(directions: usize, seed: u64) -> Result<Self> {
        if directions == 0 {
            return Err(DepthError::InvalidInput(
                "need at least one projection direction".into(),
            ));
        }
        Ok(ApproxConfig { directions, seed })
    }

    pub fn directions(&self) -> usize {
        self.directions
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

fn code_of(cloud: &CenteredCloud, w: &[f64]) -> ConeCode {
    ConeCode::from_bits((0..cloud.len()).map(|i| dot(cloud.point(i), w) > 0.0))
}

fn result(
    n: usize,
    count: usize,
    code: Option<ConeCode>,
    witness: Option<Direction>,
) -> DepthResult {
    DepthResult {
        count,
        n,
        minimizing_code: code,
        witness_direction: witness,
        diagnostics: SearchDiagnostics::default(),
    }
}

/// Unit normal to the span of `d - 1` vectors in `R^d`, by Gaussian
/// elimination with partial pivoting on the normalised rows. The single free
/// column is set to one, which fixes the orientation. `None` if the rows are
/// rank deficient.
fn subset_normal(rows: &[&[f64]], d: usize) -> Option<Vec<f64>> {
    let k = rows.len();
    let mut a: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let len = norm(r);
            r.iter().map(|x| x / len).collect()
        })
        .collect();
    let mut pivot_cols = Vec::with_capacity(k);
    let mut row = 0;
    for col in 0..d {
        if row == k {
            break;
        }
        let (best, mag) = (row..k)
            .map(|r| (r, a[r][col].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= ZERO_TOL {
            continue;
        }
        a.swap(row, best);
        let p = a[row][col];
        a[row].iter_mut().for_each(|x| *x /= p);
        for r in 0..k {
            if r != row {
                let f = a[r][col];
                if f != 0.0 {
                    let pivot = a[row].clone();
                    a[r].iter_mut().zip(&pivot).for_each(|(x, p)| *x -= f * p);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if pivot_cols.len() != k {
        return None;
    }
    let free = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![0.0; d];
    v[free] = 1.0;
    for (r, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -a[r][free];
    }
    let len = norm(&v);
    Some(v.into_iter().map(|x| x / len).collect())
}

/// Solves the square system `m x = b` by partial pivoting; `None` if singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() <= 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            let f = m[r][col] / m[col][col];
            let (upper, lower) = m.split_at_mut(r);
            lower[0][col..]
                .iter_mut()
                .zip(&upper[col][col..])
                .for_each(|(x, p)| *x -= f * p);
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| m[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

/// Exact depth by brute force over all `(d - 1)`-subsets.
///
/// For a subset `S`, let `r0` be the normal to `span(S)`. The points of `S`
/// are linearly independent, so some small tilt of `r0` pushes all of them
/// strictly to the negative side without moving any other point across; the
/// strictly positive count `#{i ∉ S : x_i · r0 > 0}` is therefore realised by
/// an actual cone (and likewise for `-r0`). Conversely every cone is pointed
/// once `n >= d`, and an extreme ray of the minimising cone lies on `d - 1`
/// of the hyperplanes, so the minimum over subsets is attained. Points of `S`
/// are always put on the uncounted side.
pub fn combinatorial_depth(cloud: &CenteredCloud) -> Result<DepthResult> {
    let n = cloud.len();
    let d = cloud.dim();
    if n < d {
        return Err(DepthError::TooFewPoints { n, d });
    }
    if let Some(&i) = cloud.points_at_origin().first() {
        return Err(DepthError::DegeneracyDetected(format!(
            "point {i} at the query"
        )));
    }

    // (count, subset, normal, sign of the counted side)
    let mut best: Option<(usize, Vec<usize>, Vec<f64>, f64)> = None;
    for subset in (0..n).combinations(d - 1) {
        let rows: Vec<&[f64]> = subset.iter().map(|&i| cloud.point(i)).collect();
        let normal = subset_normal(&rows, d).ok_or_else(|| {
            DepthError::DegeneracyDetected(format!("points {subset:?} are linearly dependent"))
        })?;
        let (mut pos, mut neg) = (0, 0);
        for i in (0..n).filter(|i| !subset.contains(i)) {
            let x = cloud.point(i);
            let p = dot(x, &normal);
            if p.abs() <= ZERO_TOL * norm(x) {
                return Err(DepthError::DegeneracyDetected(format!(
                    "point {i} lies in the span of {subset:?}"
                )));
            }
            if p > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        let (cand, sign) = if pos <= neg { (pos, 1.0) } else { (neg, -1.0) };
        if best.as_ref().is_none_or(|b| cand < b.0) {
            best = Some((cand, subset, normal, sign));
        }
    }
    let (count, subset, normal, sign) = best.expect("at least one subset");
    let witness = tilted_witness(cloud, &subset, &normal, sign);
    let code = witness.as_ref().map(|w| code_of(cloud, w.as_slice()));
    Ok(result(n, count, code, witness))
}

/// `sign · normal` tilted so that the subset points become strictly negative.
fn tilted_witness(
    cloud: &CenteredCloud,
    subset: &[usize],
    normal: &[f64],
    sign: f64,
) -> Option<Direction> {
    let d = cloud.dim();
    let base: Vec<f64> = normal.iter().map(|x| sign * x).collect();
    if subset.is_empty() {
        return Direction::new(base).ok();
    }
    // minimum-norm u with x_s · u = -1 for s in S: u = X' (X X')^{-1} (-1)
    let xs: Vec<&[f64]> = subset.iter().map(|&i| cloud.point(i)).collect();
    let gram: Vec<Vec<f64>> = xs
        .iter()
        .map(|a| xs.iter().map(|b| dot(a, b)).collect())
        .collect();
    let coef = solve_square(gram, vec![-1.0; xs.len()])?;
    let mut u = vec![0.0; d];
    for (c, x) in coef.iter().zip(&xs) {
        for k in 0..d {
            u[k] += c * x[k];
        }
    }
    let mut eps = f64::INFINITY;
    for i in (0..cloud.len()).filter(|i| !subset.contains(i)) {
        let x = cloud.point(i);
        let a = dot(x, &base);
        let b = dot(x, &u);
        if a * b < 0.0 {
            eps = eps.min(a.abs() / b.abs());
        }
    }
    // points that already agree with u keep their sign for any eps
    let eps = (0.5 * eps).min(1.0);
    let w: Vec<f64> = base.iter().zip(&u).map(|(a, b)| a + eps * b).collect();
    Direction::new(w).ok()
}

/// Depth of `query` among real `values`.
pub fn univariate_depth(values: &[f64], query: f64) -> Result<DepthResult> {
    if values.is_empty() {
        return Err(DepthError::InvalidInput("no values".into()));
    }
    let mut below = 0;
    let mut above = 0;
    for (i, &v) in values.iter().enumerate() {
        if v == query {
            return Err(DepthError::DegeneracyDetected(format!(
                "value {i} equals the query"
            )));
        }
        if v < query {
            below += 1;
        } else {
            above += 1;
        }
    }
    let (count, w) = if below <= above {
        (below, -1.0)
    } else {
        (above, 1.0)
    };
    let code = ConeCode::from_bits(values.iter().map(|&v| (v - query) * w > 0.0));
    Ok(result(
        values.len(),
        count,
        Some(code),
        Some(Direction::new(vec![w])?),
    ))
}

/// Planar depth by an angular sweep of a directed line through the origin,
/// `O(n log n)`. Point `i` is on the positive side for angles within a
/// half-turn centred on its own angle; the 2n boundaries are sorted and the
/// positive count updated incrementally.
pub fn planar_depth(cloud: &CenteredCloud) -> Result<DepthResult> {
    if cloud.dim() != 2 {
        return Err(DepthError::DimensionMismatch {
            expected: 2,
            got: cloud.dim(),
        });
    }
    let n = cloud.len();
    if let Some(&i) = cloud.points_at_origin().first() {
        return Err(DepthError::DegeneracyDetected(format!(
            "point {i} at the query"
        )));
    }
    let wrap = |a: f64| a.rem_euclid(TAU);
    // (angle, +1 enter / -1 leave)
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let p = cloud.point(i);
        let theta = p[1].atan2(p[0]);
        events.push((wrap(theta - PI / 2.0), 1));
        events.push((wrap(theta + PI / 2.0), -1));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let angle_tol = 1e-12;
    for k in 0..events.len() {
        let next = if k + 1 < events.len() {
            events[k + 1].0
        } else {
            events[0].0 + TAU
        };
        if next - events[k].0 <= angle_tol {
            return Err(DepthError::DegeneracyDetected(
                "two points are collinear with the query".into(),
            ));
        }
    }
    let unit = |phi: f64| [phi.cos(), phi.sin()];
    let last = events[events.len() - 1].0;
    let start_phi = 0.5 * (last + events[0].0 + TAU);
    let mut count = (0..n)
        .filter(|&i| dot(cloud.point(i), &unit(start_phi)) > 0.0)
        .count() as i64;

    let mut best = (count.min(n as i64 - count), start_phi, count);
    for k in 0..events.len() {
        count += events[k].1 as i64;
        let next = if k + 1 < events.len() {
            events[k + 1].0
        } else {
            events[0].0 + TAU
        };
        let side = count.min(n as i64 - count);
        if side < best.0 {
            best = (side, 0.5 * (events[k].0 + next), count);
        }
    }
    let (side, phi, pos) = best;
    let mut w = unit(phi).to_vec();
    if pos != side {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    let code = code_of(cloud, &w);
    Ok(result(
        n,
        side as usize,
        Some(code),
        Some(Direction::new(w)?),
    ))
}

/// Minimum of the univariate depths over seeded random projections; never
/// below the exact depth. Points projecting to zero are counted on both
/// sides, matching closed halfspaces.
pub fn approximate_depth(cloud: &CenteredCloud, config: &ApproxConfig) -> Result<DepthResult> {
    let n = cloud.len();
    let tol = ZERO_TOL * cloud.scale();
    let mut rng = rng_from_seed(config.seed);
    let mut best: Option<(usize, Direction)> = None;
    for _ in 0..config.directions {
        let r = Direction::random(&mut rng, cloud.dim());
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        for i in 0..n {
            let p = dot(cloud.point(i), r.as_slice());
            if p.abs() <= tol {
                zero += 1;
            } else if p > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        let (cand, w) = if pos <= neg {
            (pos + zero, r)
        } else {
            (neg + zero, r.negated())
        };
        if best.as_ref().is_none_or(|b| cand < b.0) {
            best = Some((cand, w));
        }
    }
    let (count, w) = best.expect("at least one direction");
    let code = code_of(cloud, w.as_slice());
    Ok(result(n, count, Some(code), Some(w)))
}

//! Data model for depth computations: point clouds, the query-centred view of
//! a cloud, unit directions, cone codes and per-point hyperplane projections.
//!
//! Everything here is immutable after construction except [`PlaneCache`],
//! which a single cone search owns and mutates as it moves between cones.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};

/// Relative threshold below which a projection, pivot or norm counts as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Default relative perturbation magnitude (times the bounding-box diagonal).
pub const DEFAULT_PERTURBATION: f64 = 1e-7;

/// Above this many `d`-subsets the general-position check samples instead of
/// enumerating.
pub const EXHAUSTIVE_SUBSET_LIMIT: u128 = 200_000;

const SAMPLED_SUBSETS: usize = 20_000;
const INITIAL_DIRECTION_TRIES: usize = 64;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `n` points in `d` dimensions, stored row-major. Point order is fixed for
/// the lifetime of the cloud; bit `i` of every [`ConeCode`] refers to point `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    coords: Vec<f64>,
    n: usize,
    d: usize,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(DepthError::InvalidInput("empty point cloud".into()));
        }
        let d = points[0].len();
        if d == 0 {
            return Err(DepthError::InvalidInput(
                "points must have at least one coordinate".into(),
            ));
        }
        let mut coords = Vec::with_capacity(n * d);
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(DepthError::DimensionMismatch {
                    expected: d,
                    got: p.len(),
                });
            }
            if let Some(bad) = p.iter().find(|v| !v.is_finite()) {
                return Err(DepthError::InvalidInput(format!(
                    "point {i} has a non-finite coordinate ({bad})"
                )));
            }
            coords.extend_from_slice(p);
        }
        Ok(PointCloud { coords, n, d })
    }

    /// Builds a cloud from a flat row-major buffer.
    pub fn from_flat(coords: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 || coords.is_empty() || !coords.len().is_multiple_of(d) {
            return Err(DepthError::InvalidInput(format!(
                "buffer of length {} is not a non-empty multiple of d = {d}",
                coords.len()
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::InvalidInput("non-finite coordinate".into()));
        }
        let n = coords.len() / d;
        Ok(PointCloud { coords, n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    /// Largest Euclidean norm over the points.
    pub fn max_norm(&self) -> f64 {
        self.points().map(norm).fold(0.0, f64::max)
    }

    /// Diagonal of the axis-aligned bounding box of the points and the origin.
    pub fn bounding_box_diagonal(&self) -> f64 {
        let mut sq = 0.0;
        for k in 0..self.d {
            let (lo, hi) = self
                .points()
                .map(|p| p[k])
                .fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
            sq += (hi - lo) * (hi - lo);
        }
        sq.sqrt()
    }

    /// Applies `x -> A x + t` to every point. `matrix` is row-major `d x d`.
    pub fn map_affine(&self, matrix: &[f64], shift: &[f64]) -> Result<PointCloud> {
        let d = self.d;
        if matrix.len() != d * d {
            return Err(DepthError::DimensionMismatch {
                expected: d * d,
                got: matrix.len(),
            });
        }
        if shift.len() != d {
            return Err(DepthError::DimensionMismatch {
                expected: d,
                got: shift.len(),
            });
        }
        let coords = self
            .points()
            .flat_map(|p| apply_affine(matrix, shift, p))
            .collect();
        Ok(PointCloud {
            coords,
            n: self.n,
            d,
        })
    }
}

/// `A x + t` for a row-major square `A`.
pub fn apply_affine(matrix: &[f64], shift: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    (0..d)
        .map(|r| dot(&matrix[r * d..(r + 1) * d], x) + shift[r])
        .collect()
}

/// A cloud with the query subtracted from every point, so the query sits at
/// the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredCloud {
    base: PointCloud,
    query: Vec<f64>,
    /// The uncentred cloud, kept while `base` is an exact shift of it.
    source: Option<PointCloud>,
}

impl CenteredCloud {
    /// Wraps points that are already expressed relative to the query.
    pub fn from_centered(base: PointCloud) -> Self {
        let query = vec![0.0; base.dim()];
        CenteredCloud {
            source: Some(base.clone()),
            base,
            query,
        }
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.base
    }

    pub fn query(&self) -> &[f64] {
        &self.query
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.base.point(i)
    }

    /// Scale used to turn the relative zero tolerance into an absolute one.
    pub fn scale(&self) -> f64 {
        let s = self.base.max_norm();
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// Adds the query back. Reproduces the original cloud bit for bit unless
    /// the centred points were perturbed.
    pub fn uncenter(&self) -> PointCloud {
        if let Some(src) = &self.source {
            return src.clone();
        }
        let coords = self
            .base
            .points()
            .flat_map(|p| p.iter().zip(&self.query).map(|(x, z)| x + z))
            .collect();
        PointCloud {
            coords,
            n: self.base.n,
            d: self.base.d,
        }
    }

    /// Indices of points lying at the origin (within the zero tolerance).
    pub fn points_at_origin(&self) -> Vec<usize> {
        let tol = ZERO_TOL * self.scale();
        (0..self.len())
            .filter(|&i| norm(self.point(i)) <= tol)
            .collect()
    }
}

/// Shifts the cloud so that `query` becomes the origin.
pub fn center(cloud: &PointCloud, query: &[f64]) -> Result<CenteredCloud> {
    if query.len() != cloud.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: cloud.dim(),
            got: query.len(),
        });
    }
    if query.iter().any(|v| !v.is_finite()) {
        return Err(DepthError::InvalidInput(
            "query has a non-finite coordinate".into(),
        ));
    }
    let coords = cloud
        .points()
        .flat_map(|p| p.iter().zip(query).map(|(x, z)| x - z))
        .collect();
    Ok(CenteredCloud {
        base: PointCloud {
            coords,
            n: cloud.n,
            d: cloud.d,
        },
        query: query.to_vec(),
        source: Some(cloud.clone()),
    })
}

/// Step, relative to the distance to the mean, by which a point coinciding
/// with the query is moved off it.
pub const COINCIDENT_STEP: f64 = 1e-3;

/// Moves the one point that coincides with the query a short step towards
/// the mean of the cloud. Every halfspace boundary passes through the query,
/// so the side the moved point falls on depends only on the step direction,
/// which follows affine maps and ignores point order; the step length does
/// not matter. `None` unless exactly one point coincides and the mean is
/// elsewhere.
pub fn displace_coincident(cloud: &CenteredCloud) -> Option<CenteredCloud> {
    let at_origin = cloud.points_at_origin();
    let &[i] = at_origin.as_slice() else {
        return None;
    };
    let (n, d) = (cloud.len(), cloud.dim());
    let mut mean = vec![0.0; d];
    for p in cloud.cloud().points() {
        mean.iter_mut().zip(p).for_each(|(m, x)| *m += x / n as f64);
    }
    if norm(&mean) <= ZERO_TOL * cloud.scale() {
        return None;
    }
    let mut coords = cloud.base.coords.clone();
    for (c, m) in coords[i * d..(i + 1) * d].iter_mut().zip(&mean) {
        *c = COINCIDENT_STEP * m;
    }
    Some(CenteredCloud {
        base: PointCloud { coords, n, d },
        query: cloud.query.clone(),
        source: None,
    })
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalises `v`; fails on a (numerically) zero vector.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let len = norm(&v);
        if len.is_nan() || len <= 0.0 || !len.is_finite() {
            return Err(DepthError::InvalidInput(
                "cannot normalise a zero vector".into(),
            ));
        }
        Ok(Direction(v.into_iter().map(|x| x / len).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn negated(&self) -> Direction {
        Direction(self.0.iter().map(|x| -x).collect())
    }

    /// Draws a direction uniformly on the sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Direction {
        loop {
            let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            if norm(&v) > 1e-9 {
                return Direction::new(v).expect("nonzero");
            }
        }
    }
}

/// Sign pattern of a direction cone: bit `i` is set iff point `i` projects
/// strictly positively on every interior direction of the cone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeCode {
    words: Vec<u64>,
    len: usize,
}

impl ConeCode {
    pub fn zeros(len: usize) -> Self {
        ConeCode {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        ConeCode::zeros(len).complement()
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut code = ConeCode::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                code.set(i, true);
            }
        }
        code
    }

    /// Parses a string of `0`/`1` characters, bit 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(ConeCode::from_bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Copy with bit `i` inverted (`b xor b0_i`).
    pub fn with_flipped(&self, i: usize) -> Self {
        let mut c = self.clone();
        c.flip(i);
        c
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Size of the smaller side of the split.
    pub fn min_side(&self) -> usize {
        let ones = self.count_ones();
        ones.min(self.len - ones)
    }

    /// The mirror cone's code.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        ConeCode {
            words,
            len: self.len,
        }
    }

    pub fn xor(&self, other: &ConeCode) -> Self {
        assert_eq!(self.len, other.len, "cone codes of different lengths");
        ConeCode {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
            len: self.len,
        }
    }

    pub fn hamming(&self, other: &ConeCode) -> usize {
        self.xor(other).count_ones()
    }

    /// Indices of set bits, ascending.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for ConeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for ConeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConeCode({self})")
    }
}

impl Serialize for ConeCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ConeCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ConeCode::parse(&s).ok_or_else(|| serde::de::Error::custom("expected a 0/1 string"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub ok: bool,
    /// Offending subset (0-based point indices) and a short description.
    pub violation: Option<(Vec<usize>, String)>,
    pub subsets_checked: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneralPositionMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl GeneralPositionMode {
    /// Exhaustive when the number of `d`-subsets is at most
    /// [`EXHAUSTIVE_SUBSET_LIMIT`], sampled otherwise.
    pub fn auto(n: usize, d: usize, seed: u64) -> Self {
        if binomial(n, d) <= EXHAUSTIVE_SUBSET_LIMIT {
            GeneralPositionMode::Exhaustive
        } else {
            GeneralPositionMode::Sampled {
                samples: SAMPLED_SUBSETS,
                seed,
            }
        }
    }
}

/// True if the normalised vectors are linearly independent (complete-pivoting
/// elimination, pivots below [`ZERO_TOL`] count as zero).
fn linearly_independent(vectors: &[&[f64]]) -> bool {
    let k = vectors.len();
    if k == 0 {
        return true;
    }
    let d = vectors[0].len();
    if k > d {
        return false;
    }
    let mut rows: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            let len = norm(v);
            v.iter().map(|x| x / len).collect()
        })
        .collect();
    for r in 0..k {
        let mut best = (0.0, r, 0);
        for (ri, row) in rows.iter().enumerate().skip(r) {
            for (ci, &v) in row.iter().enumerate() {
                if v.abs() > best.0 {
                    best = (v.abs(), ri, ci);
                }
            }
        }
        let (pivot, pr, pc) = best;
        if pivot <= ZERO_TOL {
            return false;
        }
        rows.swap(r, pr);
        let pivot_row = std::mem::take(&mut rows[r]);
        for row in rows.iter_mut().skip(r + 1) {
            let f = row[pc] / pivot_row[pc];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
            row[pc] = 0.0;
        }
    }
    true
}

/// Verifies that no centred point is the origin and every `d` centred points
/// are linearly independent, which is general position of `{z} ∪ X` for the
/// purposes of the cone arrangement.
pub fn check_general_position(
    cloud: &CenteredCloud,
    mode: GeneralPositionMode,
) -> GeneralPositionReport {
    if let Some(&i) = cloud.points_at_origin().first() {
        return GeneralPositionReport {
            ok: false,
            violation: Some((vec![i], format!("point {i} coincides with the query"))),
            subsets_checked: 0,
        };
    }
    let n = cloud.len();
    let d = cloud.dim().min(n);
    let mut checked = 0u64;
    let mut test = |subset: &[usize]| -> Option<GeneralPositionReport> {
        checked += 1;
        let vs: Vec<&[f64]> = subset.iter().map(|&i| cloud.point(i)).collect();
        if linearly_independent(&vs) {
            None
        } else {
            Some(GeneralPositionReport {
                ok: false,
                violation: Some((
                    subset.to_vec(),
                    format!("points {subset:?} span a subspace of deficient dimension"),
                )),
                subsets_checked: 0,
            })
        }
    };
    match mode {
        GeneralPositionMode::Exhaustive => {
            for subset in (0..n).combinations(d) {
                if let Some(mut r) = test(&subset) {
                    r.subsets_checked = checked;
                    return r;
                }
            }
        }
        GeneralPositionMode::Sampled { samples, seed } => {
            let mut rng = rng_from_seed(seed);
            for _ in 0..samples {
                let mut subset = rand::seq::index::sample(&mut rng, n, d).into_vec();
                subset.sort_unstable();
                if let Some(mut r) = test(&subset) {
                    r.subsets_checked = checked;
                    return r;
                }
            }
        }
    }
    GeneralPositionReport {
        ok: true,
        violation: None,
        subsets_checked: checked,
    }
}

/// Adds seeded uniform noise in `±magnitude × diagonal` to every coordinate.
/// Magnitudes below `1e-12` are raised to `1e-12`.
pub fn perturb(cloud: &CenteredCloud, magnitude: f64, seed: u64) -> CenteredCloud {
    let magnitude = if magnitude.is_finite() && magnitude >= ZERO_TOL {
        magnitude
    } else {
        log::warn!("perturbation magnitude {magnitude} raised to the minimum {ZERO_TOL}");
        ZERO_TOL
    };
    let diag = cloud.base.bounding_box_diagonal();
    let bound = magnitude * if diag > 0.0 { diag } else { 1.0 };
    let mut rng = rng_from_seed(seed);
    let coords = cloud
        .base
        .coords
        .iter()
        .map(|x| x + rng.random_range(-bound..=bound))
        .collect();
    CenteredCloud {
        base: PointCloud {
            coords,
            n: cloud.base.n,
            d: cloud.base.d,
        },
        query: cloud.query.clone(),
        source: None,
    }
}

/// Per-anchor cache of the cloud projected onto the hyperplane through the
/// origin normal to the anchor point, with the current sign alignment.
#[derive(Debug, Clone)]
pub struct PlaneCache {
    anchor: usize,
    /// `n` rows of dimension `d - 1`; row `anchor` is zero.
    projected: Vec<f64>,
    pdim: usize,
    /// Bit `k` set means row `k` carries its original orientation.
    sign_state: ConeCode,
    /// Point indices certifying that the origin lies in the hull of the
    /// aligned projections, from the last in-hull solve.
    pub hull_basis: Option<Vec<usize>>,
}

impl PlaneCache {
    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// Dimension of the projected points (`d - 1`).
    pub fn plane_dim(&self) -> usize {
        self.pdim
    }

    pub fn len(&self) -> usize {
        self.sign_state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sign_state.is_empty()
    }

    pub fn projected(&self, k: usize) -> &[f64] {
        &self.projected[k * self.pdim..(k + 1) * self.pdim]
    }

    pub fn sign_state(&self) -> &ConeCode {
        &self.sign_state
    }

    /// Negates every row whose sign state differs from `code` and returns the
    /// flipped non-anchor indices.
    pub fn align_to(&mut self, code: &ConeCode) -> Vec<usize> {
        let diff = self.sign_state.xor(code);
        let mut flipped = Vec::new();
        for k in diff.ones_indices() {
            let row = &mut self.projected[k * self.pdim..(k + 1) * self.pdim];
            row.iter_mut().for_each(|x| *x = -*x);
            if k != self.anchor {
                flipped.push(k);
            }
        }
        self.sign_state = code.clone();
        flipped
    }

    /// Aligned projections of every point except the anchor, in index order,
    /// together with their point indices.
    pub fn rows_without_anchor(&self) -> (Vec<Vec<f64>>, Vec<usize>) {
        let idx: Vec<usize> = (0..self.len()).filter(|&k| k != self.anchor).collect();
        let rows = idx.iter().map(|&k| self.projected(k).to_vec()).collect();
        (rows, idx)
    }
}

/// Coordinates of `x` in the orthonormal basis of `anchor`'s orthogonal
/// complement given by the Householder reflector that maps `anchor` onto its
/// largest-magnitude axis (that axis is dropped).
pub(crate) struct ComplementBasis {
    w: Vec<f64>,
    w_sq: f64,
    drop_axis: usize,
}

impl ComplementBasis {
    pub(crate) fn new(anchor: &[f64]) -> Option<Self> {
        let len = norm(anchor);
        if len.is_nan() || len <= 0.0 {
            return None;
        }
        let unit: Vec<f64> = anchor.iter().map(|x| x / len).collect();
        let drop_axis = unit
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bv), (i, v)| {
                if v.abs() > bv {
                    (i, v.abs())
                } else {
                    (bi, bv)
                }
            })
            .0;
        let sigma = if unit[drop_axis] >= 0.0 { 1.0 } else { -1.0 };
        let mut w = unit;
        w[drop_axis] += sigma;
        let w_sq = dot(&w, &w);
        Some(ComplementBasis { w, w_sq, drop_axis })
    }

    pub(crate) fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        let f = 2.0 * dot(&self.w, x) / self.w_sq;
        x.iter()
            .zip(&self.w)
            .enumerate()
            .filter(|(i, _)| *i != self.drop_axis)
            .map(|(_, (xi, wi))| xi - f * wi)
            .collect()
    }
}

/// Projects the cloud onto the hyperplane normal to point `anchor`.
/// The sign state starts as all ones (original orientation).
pub fn project_onto_plane(cloud: &CenteredCloud, anchor: usize) -> Result<PlaneCache> {
    let n = cloud.len();
    let d = cloud.dim();
    let a = cloud.point(anchor);
    if norm(a) <= ZERO_TOL * cloud.scale() {
        return Err(DepthError::ZeroAnchor(anchor));
    }
    let basis = ComplementBasis::new(a).ok_or(DepthError::ZeroAnchor(anchor))?;
    let pdim = d - 1;
    let mut projected = Vec::with_capacity(n * pdim);
    for k in 0..n {
        if k == anchor {
            projected.extend(std::iter::repeat_n(0.0, pdim));
        } else {
            projected.extend(basis.coordinates(cloud.point(k)));
        }
    }
    Ok(PlaneCache {
        anchor,
        projected,
        pdim,
        sign_state: ConeCode::ones(n),
        hull_basis: None,
    })
}

/// Code of the cone containing `direction`.
pub fn sign_vector(cloud: &CenteredCloud, direction: &Direction) -> Result<ConeCode> {
    if direction.dim() != cloud.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: cloud.dim(),
            got: direction.dim(),
        });
    }
    let tol = ZERO_TOL * cloud.scale();
    let mut code = ConeCode::zeros(cloud.len());
    for i in 0..cloud.len() {
        let p = dot(cloud.point(i), direction.as_slice());
        if p.abs() < tol {
            return Err(DepthError::ZeroProjection(i));
        }
        if p > 0.0 {
            code.set(i, true);
        }
    }
    Ok(code)
}

/// Draws seeded directions until every projection is nonzero and all
/// projections are pairwise distinct.
pub fn initial_direction(cloud: &CenteredCloud, seed: u64) -> Result<(Direction, ConeCode)> {
    let tol = ZERO_TOL * cloud.scale();
    let mut rng = rng_from_seed(seed);
    for _ in 0..INITIAL_DIRECTION_TRIES {
        let r = Direction::random(&mut rng, cloud.dim());
        let mut proj: Vec<f64> = (0..cloud.len())
            .map(|i| dot(cloud.point(i), r.as_slice()))
            .collect();
        if proj.iter().any(|p| p.abs() < tol) {
            continue;
        }
        let code = ConeCode::from_bits(proj.iter().map(|&p| p > 0.0));
        proj.sort_by(f64::total_cmp);
        if proj.windows(2).any(|w| w[1] - w[0] < tol) {
            continue;
        }
        return Ok((r, code));
    }
    Err(DepthError::ExhaustedRetries(INITIAL_DIRECTION_TRIES))
}

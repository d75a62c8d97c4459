//! Consumers of the depth: depth-weighted centre, depth-scaled spatial signs,
//! robust principal components and DD-plot coordinates.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::depth::{depth, Depth, DepthMethod, DepthOptions};
use crate::error::{DepthError, Result};
use crate::geometry::{norm, PointCloud};

/// Upper bound of the Tukey depth, used as `D_max` in the sign transform.
pub const TUKEY_DEPTH_MAX: f64 = 0.5;

/// Depth of every sample point with respect to the whole sample. The query
/// coincides with a data point, so each entry goes through the perturbation
/// path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthField {
    pub depths: Vec<Depth>,
    pub method: DepthMethod,
}

impl DepthField {
    pub fn values(&self) -> Vec<f64> {
        self.depths.iter().map(Depth::as_f64).collect()
    }

    pub fn max(&self) -> f64 {
        self.values().into_iter().fold(0.0, f64::max)
    }
}

/// Depth of each point of `cloud` within `cloud`, computed in parallel.
pub fn depth_field(
    cloud: &PointCloud,
    method: DepthMethod,
    options: &DepthOptions,
) -> Result<DepthField> {
    let depths = (0..cloud.len())
        .into_par_iter()
        .map(|i| depth(cloud, cloud.point(i), method, options).map(|r| r.depth()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DepthField { depths, method })
}

/// `Σ x_i D_i / Σ D_i`.
pub fn depth_weighted_mean(cloud: &PointCloud, field: &DepthField) -> Result<Vec<f64>> {
    if field.depths.len() != cloud.len() {
        return Err(DepthError::DimensionMismatch {
            expected: cloud.len(),
            got: field.depths.len(),
        });
    }
    let weights = field.values();
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(DepthError::AllZeroDepths);
    }
    let mut c = vec![0.0; cloud.dim()];
    for (x, w) in cloud.points().zip(&weights) {
        for (ck, xk) in c.iter_mut().zip(x) {
            *ck += xk * w;
        }
    }
    c.iter_mut().for_each(|v| *v /= total);
    Ok(c)
}

/// Spatial signs around `center` scaled by `dmax - D(x_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsgnCloud {
    pub vectors: Vec<Vec<f64>>,
    pub center: Vec<f64>,
    pub dmax: f64,
}

impl RsgnCloud {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let d = self.center.len();
        DMatrix::from_row_iterator(
            self.vectors.len(),
            d,
            self.vectors.iter().flatten().copied(),
        )
    }
}

pub fn rsgn_transform(
    cloud: &PointCloud,
    field: &DepthField,
    center: &[f64],
    dmax: f64,
) -> Result<RsgnCloud> {
    if center.len() != cloud.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: cloud.dim(),
            got: center.len(),
        });
    }
    if field.depths.len() != cloud.len() {
        return Err(DepthError::DimensionMismatch {
            expected: cloud.len(),
            got: field.depths.len(),
        });
    }
    if field.max() > dmax {
        return Err(DepthError::InvalidInput(format!(
            "dmax {dmax} is below the largest depth {}",
            field.max()
        )));
    }
    let vectors = cloud
        .points()
        .zip(field.values())
        .enumerate()
        .map(|(i, (x, di))| {
            let diff: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
            let len = norm(&diff);
            if len == 0.0 {
                log::warn!("point {i} coincides with the centre; its sign vector is zero");
                return vec![0.0; diff.len()];
            }
            let scale = (dmax - di) / len;
            diff.into_iter().map(|v| v * scale).collect()
        })
        .collect();
    Ok(RsgnCloud {
        vectors,
        center: center.to_vec(),
        dmax,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    /// Unit principal directions, by descending singular value. Each is
    /// signed so that its largest-magnitude entry is positive.
    pub components: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub center: Vec<f64>,
    pub depths: Option<DepthField>,
    pub rank_deficient: bool,
}

/// Right singular vectors of an `n x d` matrix, sorted and sign-normalised.
fn right_singular_vectors(m: DMatrix<f64>) -> Result<(Vec<Vec<f64>>, Vec<f64>, bool)> {
    let d = m.ncols();
    let svd = m.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| DepthError::InvalidInput("singular value decomposition failed".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let components: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| {
            let mut v: Vec<f64> = (0..d).map(|c| v_t[(k, c)]).collect();
            let len = norm(&v);
            v.iter_mut().for_each(|x| *x /= len);
            let lead = v
                .iter()
                .copied()
                .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        })
        .collect();
    let top = values.first().copied().unwrap_or(0.0);
    let rank_deficient = values.len() < d || values.iter().any(|&s| s < 1e-10 * top);
    if rank_deficient {
        log::warn!("rank deficient decomposition: singular values {values:?}");
    }
    Ok((components, values, rank_deficient))
}

/// Principal directions of the depth-scaled spatial signs around the
/// depth-weighted mean, with `D_max = 1/2`.
pub fn robust_pca(
    cloud: &PointCloud,
    method: DepthMethod,
    options: &DepthOptions,
) -> Result<PcaResult> {
    let (n, d) = (cloud.len(), cloud.dim());
    if n <= d {
        return Err(DepthError::TooFewPoints { n, d });
    }
    let field = depth_field(cloud, method, options)?;
    let center = depth_weighted_mean(cloud, &field)?;
    let rsgn = rsgn_transform(cloud, &field, &center, TUKEY_DEPTH_MAX)?;
    let (components, singular_values, rank_deficient) = right_singular_vectors(rsgn.to_matrix())?;
    Ok(PcaResult {
        components,
        singular_values,
        center,
        depths: Some(field),
        rank_deficient,
    })
}

/// Ordinary PCA: SVD of the mean-centred data.
pub fn classical_pca(cloud: &PointCloud) -> Result<PcaResult> {
    let (n, d) = (cloud.len(), cloud.dim());
    let mut mean = vec![0.0; d];
    for x in cloud.points() {
        for (m, v) in mean.iter_mut().zip(x) {
            *m += v / n as f64;
        }
    }
    let m = DMatrix::from_row_iterator(
        n,
        d,
        cloud
            .points()
            .flat_map(|x| x.iter().zip(&mean).map(|(a, b)| a - b).collect::<Vec<_>>()),
    );
    let (components, singular_values, rank_deficient) = right_singular_vectors(m)?;
    Ok(PcaResult {
        components,
        singular_values,
        center: mean,
        depths: None,
        rank_deficient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdPoint {
    pub depth1: Depth,
    pub depth2: Depth,
    /// 1 or 2.
    pub label: u8,
}

impl DdPoint {
    /// Outside the hull of at least one class.
    pub fn is_outsider(&self) -> bool {
        self.depth1.count == 0 || self.depth2.count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdPlot {
    pub points: Vec<DdPoint>,
}

impl DdPlot {
    /// Drops points with a zero coordinate.
    pub fn without_outsiders(&self) -> DdPlot {
        DdPlot {
            points: self
                .points
                .iter()
                .copied()
                .filter(|p| !p.is_outsider())
                .collect(),
        }
    }
}

/// Depths of `point` with respect to both classes.
pub fn dd_coordinates(
    point: &[f64],
    class1: &PointCloud,
    class2: &PointCloud,
    method: DepthMethod,
    options: &DepthOptions,
) -> Result<(Depth, Depth)> {
    let a = depth(class1, point, method, options)?.depth();
    let b = depth(class2, point, method, options)?.depth();
    Ok((a, b))
}

/// `(D(x | X1), D(x | X2))` for every training point, class 1 first.
pub fn dd_plot(
    class1: &PointCloud,
    class2: &PointCloud,
    method: DepthMethod,
    options: &DepthOptions,
) -> Result<DdPlot> {
    if class1.dim() != class2.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: class1.dim(),
            got: class2.dim(),
        });
    }
    let labelled: Vec<(&[f64], u8)> = class1
        .points()
        .map(|p| (p, 1))
        .chain(class2.points().map(|p| (p, 2)))
        .collect();
    let points = labelled
        .par_iter()
        .map(|&(x, label)| {
            dd_coordinates(x, class1, class2, method, options).map(|(depth1, depth2)| DdPoint {
                depth1,
                depth2,
                label,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DdPlot { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(counts: &[usize], n: usize) -> DepthField {
        DepthField {
            depths: counts.iter().map(|&count| Depth { count, n }).collect(),
            method: DepthMethod::Exact,
        }
    }

    #[test]
    fn rsgn_examples() {
        let x = PointCloud::new(vec![vec![3.0, 4.0], vec![0.0, 0.0], vec![-6.0, 8.0]]).unwrap();
        // depths 1/10 for (3,4), anything for the centre, 1/2 for the last
        let f = DepthField {
            depths: vec![
                Depth { count: 1, n: 10 },
                Depth { count: 2, n: 10 },
                Depth { count: 5, n: 10 },
            ],
            method: DepthMethod::Exact,
        };
        let r = rsgn_transform(&x, &f, &[0.0, 0.0], 0.5).unwrap();
        assert!((r.vectors[0][0] - 0.24).abs() < 1e-15);
        assert!((r.vectors[0][1] - 0.32).abs() < 1e-15);
        assert_eq!(r.vectors[1], vec![0.0, 0.0]);
        assert_eq!(r.vectors[2], vec![0.0, 0.0]);
        assert!(rsgn_transform(&x, &f, &[0.0, 0.0], 0.4).is_err());
    }

    #[test]
    fn weighted_mean_ignores_zero_depths() {
        let x = PointCloud::new(vec![vec![10.0, 10.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let c = depth_weighted_mean(&x, &field(&[0, 1, 1], 3)).unwrap();
        assert_eq!(c, vec![0.5, 0.5]);
        assert!(matches!(
            depth_weighted_mean(&x, &field(&[0, 0, 0], 3)),
            Err(DepthError::AllZeroDepths)
        ));
    }

    #[test]
    fn outsider_filter() {
        let p = DdPlot {
            points: vec![
                DdPoint {
                    depth1: Depth { count: 1, n: 3 },
                    depth2: Depth { count: 0, n: 3 },
                    label: 1,
                },
                DdPoint {
                    depth1: Depth { count: 1, n: 3 },
                    depth2: Depth { count: 1, n: 3 },
                    label: 2,
                },
            ],
        };
        assert_eq!(p.without_outsiders().points.len(), 1);
    }

    #[test]
    fn classical_pca_finds_the_long_axis() {
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = i as f64 - 9.5;
                vec![3.0 * t, 0.1 * (i % 3) as f64 - 0.1]
            })
            .collect();
        let r = classical_pca(&PointCloud::new(pts).unwrap()).unwrap();
        assert!((r.components[0][0].abs() - 1.0).abs() < 1e-6);
        assert!(r.components[0][0] > 0.0);
        assert!(r.singular_values[0] >= r.singular_values[1]);
    }
}

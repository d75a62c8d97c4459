//! Origin-in-convex-hull test by phase-1 simplex.
//!
//! Given rows `y_1..y_m` in `R^p` we look for weights `λ >= 0` with
//! `Σ λ_i y_i = 0` and `Σ λ_i = 1`. Artificial variables on the `p + 1`
//! equality rows are driven out by minimising their sum. A zero optimum gives
//! the certificate weights; a positive optimum leaves a dual vector whose
//! first `p` entries, negated and normalised, strictly separate every row
//! from the origin.
//!
//! Rows are scaled to unit length before solving. The verdict is invariant
//! under positive row scaling and the tolerances become dimensionless;
//! weights are mapped back to the caller's scale on the way out.

use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::geometry::{dot, norm, PlaneCache, ZERO_TOL};

/// Phase-1 optimum at or below this (on unit rows) counts as feasible.
/// Equals `1e-9 × (1 + max row norm)` with every row normalised.
pub const FEASIBILITY_TOL: f64 = 2e-9;

/// Certificate residual bound, relative to the largest row norm.
pub const CERTIFICATE_TOL: f64 = 1e-9;

const COST_EPS: f64 = 1e-11;
const PIVOT_EPS: f64 = 1e-11;
const RATIO_TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem {
    rows: Vec<f64>,
    m: usize,
    p: usize,
}

impl FeasibilityProblem {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(DepthError::InvalidInput(
                "feasibility problem needs at least one row".into(),
            ));
        }
        let p = rows[0].len();
        let mut flat = Vec::with_capacity(m * p);
        for r in &rows {
            if r.len() != p {
                return Err(DepthError::DimensionMismatch {
                    expected: p,
                    got: r.len(),
                });
            }
            flat.extend_from_slice(r);
        }
        Self::from_flat(flat, p)
    }

    /// `rows` is row-major with `p` columns. `p = 0` is allowed only through
    /// [`FeasibilityProblem::empty_rows`].
    pub fn from_flat(rows: Vec<f64>, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(DepthError::InvalidInput("use empty_rows for p = 0".into()));
        }
        if rows.is_empty() || !rows.len().is_multiple_of(p) {
            return Err(DepthError::InvalidInput(
                "row buffer is not a multiple of p".into(),
            ));
        }
        if rows.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::InvalidInput("non-finite entry".into()));
        }
        let m = rows.len() / p;
        Ok(FeasibilityProblem { rows, m, p })
    }

    /// `m` points in the zero-dimensional space.
    pub fn empty_rows(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(DepthError::InvalidInput(
                "feasibility problem needs at least one row".into(),
            ));
        }
        Ok(FeasibilityProblem {
            rows: Vec::new(),
            m,
            p: 0,
        })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.p..(i + 1) * self.p]
    }

    pub fn max_row_norm(&self) -> f64 {
        (0..self.m).map(|i| norm(self.row(i))).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeasibilityOutcome {
    /// The origin is a convex combination of the rows.
    InHull {
        weights: Vec<f64>,
        /// Rows carrying strictly positive weight; at most `p + 1`.
        basis: Vec<usize>,
        iterations: usize,
        warm_started: bool,
    },
    /// A unit `witness` with `witness · row > 0` for every row.
    NotInHull {
        witness: Vec<f64>,
        iterations: usize,
    },
}

impl FeasibilityOutcome {
    pub fn in_hull(&self) -> bool {
        matches!(self, FeasibilityOutcome::InHull { .. })
    }

    pub fn iterations(&self) -> usize {
        match self {
            FeasibilityOutcome::InHull { iterations, .. }
            | FeasibilityOutcome::NotInHull { iterations, .. } => *iterations,
        }
    }
}

/// Reusable phase-1 simplex tableau. One instance per thread.
#[derive(Debug, Default)]
pub struct PhaseOneSolver {
    // (p + 2) x (m + p + 2): constraint rows, then the reduced-cost row; the
    // last column is the right-hand side.
    t: Vec<f64>,
    width: usize,
    rows: usize,
    basis: Vec<usize>,
    unit: Vec<f64>,
    scales: Vec<f64>,
}

impl PhaseOneSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn solve(
        &mut self,
        problem: &FeasibilityProblem,
        warm_start: Option<&[usize]>,
    ) -> Result<FeasibilityOutcome> {
        self.solve_rows(&problem.rows, problem.m, problem.p, warm_start)
    }

    /// Same as [`PhaseOneSolver::solve`] on a borrowed row-major buffer.
    pub fn solve_rows(
        &mut self,
        rows: &[f64],
        m: usize,
        p: usize,
        warm_start: Option<&[usize]>,
    ) -> Result<FeasibilityOutcome> {
        debug_assert_eq!(rows.len(), m * p);
        if m == 0 {
            return Err(DepthError::InvalidInput(
                "feasibility problem needs at least one row".into(),
            ));
        }
        self.scales.clear();
        self.scales
            .extend((0..m).map(|i| norm(&rows[i * p..(i + 1) * p])));
        let max_norm = self.scales.iter().cloned().fold(0.0, f64::max);

        // a row at the origin is its own certificate
        if let Some(i) = (0..m).find(|&i| self.scales[i] <= ZERO_TOL * max_norm || max_norm == 0.0)
        {
            let mut weights = vec![0.0; m];
            weights[i] = 1.0;
            return Ok(FeasibilityOutcome::InHull {
                weights,
                basis: vec![i],
                iterations: 0,
                warm_started: false,
            });
        }

        self.unit.clear();
        for i in 0..m {
            let s = self.scales[i];
            self.unit
                .extend(rows[i * p..(i + 1) * p].iter().map(|x| x / s));
        }

        if let Some(ws) = warm_start {
            if !ws.is_empty() && ws.iter().all(|&j| j < m) {
                self.load(m, p);
                if self.try_warm_start(m, ws) {
                    return self.finish_in_hull(rows, m, p, 0, true);
                }
            }
        }

        self.load(m, p);
        let iterations = self.run(m, p)?;
        let objective = -self.at(self.rows, self.width - 1);
        if objective <= FEASIBILITY_TOL {
            self.finish_in_hull(rows, m, p, iterations, false)
        } else {
            self.finish_separated(m, p, objective, iterations)
        }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn load(&mut self, m: usize, p: usize) {
        let rows = p + 1;
        let width = m + rows + 1;
        self.rows = rows;
        self.width = width;
        self.t.clear();
        self.t.resize((rows + 1) * width, 0.0);
        for r in 0..rows {
            for j in 0..m {
                self.t[r * width + j] = if r < p { self.unit[j * p + r] } else { 1.0 };
            }
            self.t[r * width + m + r] = 1.0;
        }
        self.t[p * width + width - 1] = 1.0;
        self.basis.clear();
        self.basis.extend(m..m + rows);
        self.recompute_costs(m);
    }

    /// Reduced costs for the phase-1 objective given the current basis.
    fn recompute_costs(&mut self, m: usize) {
        let (rows, width) = (self.rows, self.width);
        let obj = rows * width;
        for c in 0..width {
            let cost = if c >= m && c < width - 1 { 1.0 } else { 0.0 };
            let mut v = cost;
            for r in 0..rows {
                if self.basis[r] >= m {
                    v -= self.t[r * width + c];
                }
            }
            self.t[obj + c] = v;
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.width;
        let pv = self.t[pr * width + pc];
        for c in 0..width {
            self.t[pr * width + c] /= pv;
        }
        self.t[pr * width + pc] = 1.0;
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * width + pc];
            if f != 0.0 {
                for c in 0..width {
                    self.t[r * width + c] -= f * self.t[pr * width + c];
                }
                self.t[r * width + pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    fn try_warm_start(&mut self, m: usize, warm: &[usize]) -> bool {
        for &j in warm {
            if self.basis.contains(&j) {
                continue;
            }
            let row = (0..self.rows)
                .filter(|&r| self.basis[r] >= m)
                .map(|r| (r, self.at(r, j).abs()))
                .filter(|&(_, a)| a > 1e-9)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match row {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
        let rhs = self.width - 1;
        let mut artificial = 0.0;
        for r in 0..self.rows {
            let v = self.at(r, rhs);
            if v < -FEASIBILITY_TOL {
                return false;
            }
            if self.basis[r] >= m {
                artificial += v.abs();
            }
        }
        if artificial > FEASIBILITY_TOL {
            return false;
        }
        self.recompute_costs(m);
        true
    }

    /// Dantzig pricing, switching to Bland's rule after `3 (m + p)` pivots.
    fn run(&mut self, m: usize, p: usize) -> Result<usize> {
        let limit = 50 * (m + p + 1) + 100;
        let bland_after = 3 * (m + p);
        let obj = self.rows * self.width;
        let rhs = self.width - 1;
        for it in 0..limit {
            let bland = it >= bland_after;
            let mut enter = None;
            let mut best = -COST_EPS;
            for c in 0..rhs {
                let v = self.t[obj + c];
                if v < best {
                    enter = Some(c);
                    if bland {
                        break;
                    }
                    best = v;
                }
            }
            let Some(pc) = enter else {
                return Ok(it);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_EPS {
                    let ratio = self.at(r, rhs).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - RATIO_TIE
                                || (ratio <= lratio + RATIO_TIE && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((pr, _)) => self.pivot(pr, pc),
                // phase 1 is bounded below; a column without a positive entry
                // means the reduced cost is rounding noise
                None => {
                    self.t[obj + pc] = 0.0;
                }
            }
        }
        Err(DepthError::IterationLimit(limit))
    }

    fn finish_in_hull(
        &mut self,
        rows: &[f64],
        m: usize,
        p: usize,
        iterations: usize,
        warm_started: bool,
    ) -> Result<FeasibilityOutcome> {
        let rhs = self.width - 1;
        let mut weights = vec![0.0; m];
        for r in 0..self.rows {
            let j = self.basis[r];
            if j < m {
                let mu = self.at(r, rhs).max(0.0);
                weights[j] = mu / self.scales[j];
            }
        }
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(DepthError::NumericallyAmbiguous { objective: 0.0 });
        }
        weights.iter_mut().for_each(|w| *w /= total);
        let basis: Vec<usize> = (0..m).filter(|&j| weights[j] > ZERO_TOL).collect();

        let max_norm = self.scales.iter().cloned().fold(0.0, f64::max);
        for k in 0..p {
            let resid: f64 = (0..m).map(|j| weights[j] * rows[j * p + k]).sum();
            if resid.abs() > CERTIFICATE_TOL * max_norm {
                return Err(DepthError::NumericallyAmbiguous {
                    objective: resid.abs(),
                });
            }
        }
        Ok(FeasibilityOutcome::InHull {
            weights,
            basis,
            iterations,
            warm_started,
        })
    }

    fn finish_separated(
        &mut self,
        m: usize,
        p: usize,
        objective: f64,
        iterations: usize,
    ) -> Result<FeasibilityOutcome> {
        // duals y_r = c_r - reduced cost of artificial r (c_r = 1)
        let obj = self.rows * self.width;
        let u: Vec<f64> = (0..p).map(|r| 1.0 - self.t[obj + m + r]).collect();
        let len = norm(&u);
        if len.is_nan() || len <= ZERO_TOL {
            return Err(DepthError::NumericallyAmbiguous { objective });
        }
        let witness: Vec<f64> = u.iter().map(|x| -x / len).collect();
        let separates = (0..m).all(|j| dot(&witness, &self.unit[j * p..(j + 1) * p]) > ZERO_TOL);
        if !separates {
            return Err(DepthError::NumericallyAmbiguous { objective });
        }
        Ok(FeasibilityOutcome::NotInHull {
            witness,
            iterations,
        })
    }
}

/// Decides whether the origin lies in the convex hull of the problem's rows.
pub fn origin_in_hull(
    problem: &FeasibilityProblem,
    warm_start: Option<&[usize]>,
) -> Result<FeasibilityOutcome> {
    PhaseOneSolver::new().solve(problem, warm_start)
}

/// True iff none of the flipped rows belongs to the cached hull basis, so the
/// last in-hull verdict still holds. False when no basis is cached.
pub fn basis_still_valid(cache: &PlaneCache, flipped: &[usize]) -> bool {
    match &cache.hull_basis {
        Some(basis) => basis_disjoint(basis, flipped),
        None => false,
    }
}

pub(crate) fn basis_disjoint(basis: &[usize], flipped: &[usize]) -> bool {
    !flipped.iter().any(|f| basis.contains(f))
}

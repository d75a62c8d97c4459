//! Serializable reports. Field order is fixed so output is byte-stable.

use deepcore::{DdPlot, Depth, DepthResult, PcaResult};
use serde::Serialize;

/// `v` rounded to 12 significant digits; prints as the shortest decimal.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float")
}

/// Tab-safe decimal for TSV output.
pub fn decimal(v: f64) -> String {
    format!("{}", round12(v))
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthReport {
    pub method: &'static str,
    pub n: usize,
    pub d: usize,
    pub count: usize,
    pub depth: f64,
    pub depth_rational: String,
    pub witness_direction: Option<Vec<f64>>,
    pub cones_visited: u64,
    pub lp_calls: u64,
    pub lp_cache_hits: u64,
    pub generations: u64,
    pub perturbation_restarts: u64,
    pub coincident_displaced: bool,
    /// Only filled in with `--timing`, so default output is reproducible.
    pub wall_time_ms: Option<f64>,
}

impl DepthReport {
    pub fn new(method: &'static str, d: usize, r: &DepthResult, wall_time_ms: Option<f64>) -> Self {
        let g = &r.diagnostics;
        DepthReport {
            method,
            n: r.n,
            d,
            count: r.count,
            depth: round12(r.value()),
            depth_rational: r.depth().to_string(),
            witness_direction: r.witness_direction.as_ref().map(|v| v.as_slice().to_vec()),
            cones_visited: g.cones_visited,
            lp_calls: g.lp_calls,
            lp_cache_hits: g.lp_cache_hits,
            generations: g.generations,
            perturbation_restarts: g.perturbation_restarts,
            coincident_displaced: g.coincident_displaced,
            wall_time_ms,
        }
    }

    pub fn tsv(&self) -> String {
        let witness = self
            .witness_direction
            .as_ref()
            .map(|v| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_else(|| "-".into());
        let time = self
            .wall_time_ms
            .map(|t| format!("{t:.3}"))
            .unwrap_or_else(|| "-".into());
        format!(
            "method\tn\td\tcount\tdepth\tdepth_rational\twitness_direction\tcones_visited\tlp_calls\tlp_cache_hits\tgenerations\tperturbation_restarts\tcoincident_displaced\twall_time_ms\n\
             {}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            self.method,
            self.n,
            self.d,
            self.count,
            decimal(self.depth),
            self.depth_rational,
            witness,
            self.cones_visited,
            self.lp_calls,
            self.lp_cache_hits,
            self.generations,
            self.perturbation_restarts,
            self.coincident_displaced,
            time
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PcaReport {
    pub method: &'static str,
    pub n: usize,
    pub d: usize,
    /// Rows are unit eigenvectors, by descending singular value.
    pub components: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub center: Vec<f64>,
    pub depths: Vec<String>,
    pub rank_deficient: bool,
}

impl PcaReport {
    pub fn new(method: &'static str, n: usize, d: usize, r: &PcaResult) -> Self {
        PcaReport {
            method,
            n,
            d,
            components: r.components.clone(),
            singular_values: r.singular_values.clone(),
            center: r.center.clone(),
            depths: r
                .depths
                .iter()
                .flat_map(|f| f.depths.iter().map(Depth::to_string))
                .collect(),
            rank_deficient: r.rank_deficient,
        }
    }

    pub fn tsv(&self) -> String {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("\t")
        };
        let mut out = String::new();
        for (k, (v, s)) in self
            .components
            .iter()
            .zip(&self.singular_values)
            .enumerate()
        {
            out += &format!("component\t{}\t{}\t{}\n", k + 1, s, join(v));
        }
        out += &format!("center\t-\t-\t{}\n", join(&self.center));
        out
    }
}

/// Rows `D1 D2 label`.
pub fn ddplot_tsv(plot: &DdPlot) -> String {
    plot.points
        .iter()
        .map(|p| {
            format!(
                "{}\t{}\t{}\n",
                decimal(p.depth1.as_f64()),
                decimal(p.depth2.as_f64()),
                p.label
            )
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DdRow {
    pub d1: f64,
    pub d2: f64,
    pub d1_rational: String,
    pub d2_rational: String,
    pub label: u8,
}

pub fn ddplot_rows(plot: &DdPlot) -> Vec<DdRow> {
    plot.points
        .iter()
        .map(|p| DdRow {
            d1: round12(p.depth1.as_f64()),
            d2: round12(p.depth2.as_f64()),
            d1_rational: p.depth1.to_string(),
            d2_rational: p.depth2.to_string(),
            label: p.label,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(decimal(1.0 / 3.0), "0.333333333333");
        assert_eq!(decimal(0.5), "0.5");
        assert_eq!(decimal(0.0), "0");
        assert_eq!(decimal(2.0 / 7.0), "0.285714285714");
        assert_eq!(
            serde_json::to_string(&round12(1.0 / 3.0)).unwrap(),
            "0.333333333333"
        );
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deepcore::geometry::DEFAULT_PERTURBATION;
use deepcore::sample::{gaussian_cloud, instance_seed, query_near};
use deepcore::{dd_plot, depth, robust_pca, DepthMethod, DepthOptions};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::input::{parse_list, parse_point, read_points};
use crate::report::{ddplot_rows, ddplot_tsv, DepthReport, PcaReport};

#[derive(Debug, Parser)]
#[command(
    name = "deepcore",
    version,
    about = "Exact Tukey depth by breadth-first cone search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Depth of one point with respect to a CSV sample.
    Depth {
        /// Sample points, one per CSV row.
        #[arg(long)]
        data: PathBuf,
        /// Query coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Report wall-clock time; makes the output run-dependent.
        #[arg(long)]
        timing: bool,
    },
    /// Cross-check the cone search against the oracles on random instances.
    Check {
        /// Dimensions, e.g. "2,3" or "1..4".
        #[arg(long, default_value = "2,3")]
        dims: String,
        /// Sample sizes, e.g. "8..14" or "5,10,20".
        #[arg(long, default_value = "8..14")]
        sizes: String,
        /// Random instances per (d, n) pair.
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, env = "DEEPCORE_SEED", default_value_t = 0)]
        seed: u64,
        /// Fault injection: invert the facet test.
        #[arg(long, hide = true)]
        invert_facet_test: bool,
    },
    /// Depth-based robust principal components.
    Pca {
        /// Sample points, one per CSV row.
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// DD-plot coordinates of two training classes.
    Ddplot {
        /// Training sample of class 1 (CSV).
        #[arg(long)]
        data1: PathBuf,
        /// Training sample of class 2 (CSV).
        #[arg(long)]
        data2: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Drop points outside the hull of either class.
        #[arg(long)]
        exclude_outsiders: bool,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Timing grid for the cone search.
    Bench {
        #[arg(long, default_value = "2,3,4")]
        dims: String,
        #[arg(long, default_value = "10,20,40")]
        sizes: String,
        /// Timed runs per (d, n) pair; the median is reported.
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, env = "DEEPCORE_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Comb,
    Planar,
    Approx,
}

#[derive(Debug, Clone, Args)]
pub struct MethodArgs {
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// Number of random directions for `--method approx`.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub approx_dirs: u64,
    #[arg(long, env = "DEEPCORE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative magnitude of the tie-breaking perturbation.
    #[arg(long, default_value_t = DEFAULT_PERTURBATION)]
    pub perturb: f64,
}

impl MethodArgs {
    pub fn method(&self) -> DepthMethod {
        match self.method {
            Method::Exact => DepthMethod::Exact,
            Method::Comb => DepthMethod::Comb,
            Method::Planar => DepthMethod::Planar,
            Method::Approx => DepthMethod::Approx {
                directions: self.approx_dirs as usize,
            },
        }
    }

    pub fn options(&self) -> DepthOptions {
        DepthOptions {
            seed: self.seed,
            perturb_magnitude: self.perturb,
            ..Default::default()
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Executes `cli`, writing results to `out` and notices to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Depth {
            data,
            point,
            method,
            format,
            timing,
        } => {
            let x = read_points(&data)?;
            let z = parse_point(&point)?;
            let started = Instant::now();
            let r = depth(&x, &z, method.method(), &method.options())?;
            let ms = timing.then(|| started.elapsed().as_secs_f64() * 1e3);
            let report = DepthReport::new(method.method().name(), x.dim(), &r, ms);
            match format {
                Format::Json => emit_json(out, &report)?,
                Format::Tsv => write!(out, "{}", report.tsv())?,
            }
        }
        Command::Pca {
            data,
            method,
            format,
        } => {
            let x = read_points(&data)?;
            let r = robust_pca(&x, method.method(), &method.options())?;
            let report = PcaReport::new(method.method().name(), x.len(), x.dim(), &r);
            match format {
                Format::Json => emit_json(out, &report)?,
                Format::Tsv => write!(out, "{}", report.tsv())?,
            }
        }
        Command::Ddplot {
            data1,
            data2,
            method,
            exclude_outsiders,
            format,
        } => {
            let a = read_points(&data1)?;
            let b = read_points(&data2)?;
            let mut plot = dd_plot(&a, &b, method.method(), &method.options())?;
            if exclude_outsiders {
                plot = plot.without_outsiders();
            }
            match format {
                Format::Json => emit_json(out, &ddplot_rows(&plot))?,
                Format::Tsv => write!(out, "{}", ddplot_tsv(&plot))?,
            }
        }
        Command::Check {
            dims,
            sizes,
            reps,
            seed,
            invert_facet_test,
        } => {
            let grid = CheckGrid {
                dims: parse_list(&dims)?,
                sizes: parse_list(&sizes)?,
                reps,
                seed,
                invert_facet_test,
            };
            let mismatches = run_check(&grid, out, err)?;
            if mismatches > 0 {
                return Err(CliError::Mismatch(mismatches));
            }
        }
        Command::Bench {
            dims,
            sizes,
            reps,
            seed,
        } => {
            run_bench(
                &parse_list(&dims)?,
                &parse_list(&sizes)?,
                reps,
                seed,
                out,
                err,
            )?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CheckGrid {
    pub dims: Vec<usize>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub invert_facet_test: bool,
}

fn timed<T>(total: &mut f64, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let v = f();
    *total += t.elapsed().as_secs_f64() * 1e3;
    v
}

/// Exact vs. combinatorial (and angular sweep for d = 2) on seeded Gaussian
/// instances. Writes a timing table and returns the mismatch count.
pub fn run_check(grid: &CheckGrid, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<usize> {
    writeln!(out, "d\tn\treps\tmismatches\texact_ms\tcomb_ms\tplanar_ms")?;
    let mut total = 0;
    for &d in &grid.dims {
        for &n in &grid.sizes {
            if d == 0 || n < d + 2 {
                writeln!(err, "skipping d={d} n={n}: needs n >= d + 2")?;
                continue;
            }
            let (mut te, mut tc, mut tp) = (0.0, 0.0, 0.0);
            let mut mismatches = 0;
            for rep in 0..grid.reps {
                let s = instance_seed(grid.seed, d, n, rep);
                let x = gaussian_cloud(n, d, s);
                let z = query_near(&x, s);
                let opts = DepthOptions {
                    seed: s,
                    invert_facet_test: grid.invert_facet_test,
                    ..Default::default()
                };
                let exact =
                    timed(&mut te, || depth(&x, &z, DepthMethod::Exact, &opts)).map(|r| r.count);
                let comb =
                    timed(&mut tc, || depth(&x, &z, DepthMethod::Comb, &opts)).map(|r| r.count);
                let mut ok = matches!((&exact, &comb), (Ok(a), Ok(b)) if a == b);
                if d == 2 {
                    let planar = timed(&mut tp, || depth(&x, &z, DepthMethod::Planar, &opts))
                        .map(|r| r.count);
                    ok &= matches!((&exact, &planar), (Ok(a), Ok(b)) if a == b);
                }
                if !ok {
                    mismatches += 1;
                    log::warn!(
                        "mismatch d={d} n={n} rep={rep} seed={s}: exact {exact:?}, comb {comb:?}"
                    );
                }
            }
            let planar = if d == 2 {
                format!("{tp:.1}")
            } else {
                "-".into()
            };
            writeln!(
                out,
                "{d}\t{n}\t{}\t{mismatches}\t{te:.1}\t{tc:.1}\t{planar}",
                grid.reps
            )?;
            total += mismatches;
        }
    }
    writeln!(out, "total_mismatches\t{total}")?;
    Ok(total)
}

/// Median wall time and search statistics of the cone search over a grid.
pub fn run_bench(
    dims: &[usize],
    sizes: &[usize],
    reps: usize,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    writeln!(
        out,
        "d\tn\treps\tmedian_ms\tcones_visited\tlp_calls\tcache_hit_rate"
    )?;
    for &d in dims {
        for &n in sizes {
            if d == 0 || n <= d || reps == 0 {
                writeln!(err, "skipping d={d} n={n}")?;
                continue;
            }
            let mut times = Vec::with_capacity(reps);
            let (mut cones, mut calls, mut hits) = (0u64, 0u64, 0u64);
            for rep in 0..reps {
                let s = instance_seed(seed, d, n, rep);
                let x = gaussian_cloud(n, d, s);
                let z = query_near(&x, s);
                let t = Instant::now();
                let r = depth(&x, &z, DepthMethod::Exact, &DepthOptions::with_seed(s))?;
                times.push(t.elapsed().as_secs_f64() * 1e3);
                cones += r.diagnostics.cones_visited;
                calls += r.diagnostics.lp_calls;
                hits += r.diagnostics.lp_cache_hits;
            }
            times.sort_by(f64::total_cmp);
            let rate = if calls + hits > 0 {
                hits as f64 / (calls + hits) as f64
            } else {
                0.0
            };
            writeln!(
                out,
                "{d}\t{n}\t{reps}\t{:.3}\t{}\t{}\t{rate:.3}",
                times[reps / 2],
                cones / reps as u64,
                calls / reps as u64
            )?;
        }
    }
    Ok(())
}

//! Batch runs over parameter grids, plus the size ladder for scaling
//! measurements.
//!
//! A sweep expands a grid of (t, h, ℓ or Δ) cells into run specifications,
//! builds one seeded instance per run, colours it, optionally verifies the
//! result, and collects per-run records in deterministic order. With the
//! `parallel` feature the runs execute on rayon; the records are identical
//! either way apart from timing fields.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::colouring::{colour_with_palette, default_palette, Colouring, RunStats};
use crate::graph::SimpleGraph;
use crate::host::{random_t_tree, HostError};
use crate::io::RunMeta;
use crate::par;
use crate::product::{sample_subgraph, ProductSubgraph, SecondaryFactor};
use crate::verify::{verify_odd, verify_proper, verify_support_distinct};

/// Which secondary factor a generated instance carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondarySpec {
    Path,
    PathClique { ell: u32 },
    /// Path-shaped I graph; h = 1 gives a single vertex, h = 2 gives K_2.
    GeneralPath,
    /// Cycle-shaped I graph; needs h >= 3.
    GeneralCycle,
    /// Random I graph with maximum degree at most `max_deg`.
    GeneralRandom { max_deg: u32 },
}

/// Everything needed to reproduce one generated instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub t: u32,
    pub r: u32,
    pub h: u32,
    pub secondary: SecondarySpec,
    pub q_vertex: f64,
    pub p_edge: f64,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Host(#[from] HostError),
    #[error("cycle secondary needs h >= 3, got {0}")]
    CycleTooShort(u32),
}

/// Builds the instance a spec describes. The run seed feeds a master
/// generator from which the host, I-graph, and sampling seeds are drawn,
/// so a spec pins the instance exactly.
pub fn build_instance(spec: &InstanceSpec) -> Result<ProductSubgraph, BuildError> {
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let host_seed: u64 = master.random();
    let sample_seed: u64 = master.random();
    let i_seed: u64 = master.random();

    let host = random_t_tree(spec.t, spec.r, host_seed)?;
    let secondary = match spec.secondary {
        SecondarySpec::Path => SecondaryFactor::Path { h: spec.h },
        SecondarySpec::PathClique { ell } => SecondaryFactor::PathClique { h: spec.h, ell },
        SecondarySpec::GeneralPath => SecondaryFactor::General(SimpleGraph::path(spec.h)),
        SecondarySpec::GeneralCycle => {
            if spec.h < 3 {
                return Err(BuildError::CycleTooShort(spec.h));
            }
            SecondaryFactor::General(SimpleGraph::cycle(spec.h))
        }
        SecondarySpec::GeneralRandom { max_deg } => {
            SecondaryFactor::General(SimpleGraph::random_max_degree(spec.h, max_deg, i_seed))
        }
    };
    Ok(sample_subgraph(
        host,
        secondary,
        spec.q_vertex,
        spec.p_edge,
        sample_seed,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchVariant {
    Thm1,
    Thm3,
    Thm4,
}

impl BenchVariant {
    pub fn name(self) -> &'static str {
        match self {
            BenchVariant::Thm1 => "thm1",
            BenchVariant::Thm3 => "thm3",
            BenchVariant::Thm4 => "thm4",
        }
    }
}

/// Grid configuration for a sweep.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub variant: BenchVariant,
    pub t_values: Vec<u32>,
    pub h_values: Vec<u32>,
    /// Clique orders, thm3 only.
    pub ell_values: Vec<u32>,
    /// Target maximum degrees for random I graphs, thm4 only.
    pub delta_values: Vec<u32>,
    pub r: u32,
    pub q_vertex: f64,
    pub p_edge: f64,
    pub repetitions: u32,
    pub seed_base: u64,
    /// Run the three verifiers on every output.
    pub verify: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{0} grid must not be empty")]
    EmptyGrid(&'static str),
    #[error("{name} must be a probability in [0,1], got {value}")]
    BadProbability { name: &'static str, value: String },
    #[error("r={r} is too small for t={t} (need r >= t+1)")]
    SmallR { r: u32, t: u32 },
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.t_values.is_empty() {
            return Err(ConfigError::EmptyGrid("t"));
        }
        if self.h_values.is_empty() {
            return Err(ConfigError::EmptyGrid("h"));
        }
        if self.variant == BenchVariant::Thm3 && self.ell_values.is_empty() {
            return Err(ConfigError::EmptyGrid("ell"));
        }
        if self.variant == BenchVariant::Thm4 && self.delta_values.is_empty() {
            return Err(ConfigError::EmptyGrid("delta"));
        }
        if self.repetitions == 0 {
            return Err(ConfigError::EmptyGrid("repetitions"));
        }
        for (name, value) in [("q_vertex", self.q_vertex), ("p_edge", self.p_edge)] {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(ConfigError::BadProbability {
                    name,
                    value: value.to_string(),
                });
            }
        }
        for &t in &self.t_values {
            if self.r < t + 1 {
                return Err(ConfigError::SmallR { r: self.r, t });
            }
        }
        Ok(())
    }

    /// Expands the grid into run specs in deterministic order; the run
    /// index offsets the seed base.
    pub fn runs(&self) -> Vec<InstanceSpec> {
        let thirds: Vec<SecondarySpec> = match self.variant {
            BenchVariant::Thm1 => vec![SecondarySpec::Path],
            BenchVariant::Thm3 => self
                .ell_values
                .iter()
                .map(|&ell| SecondarySpec::PathClique { ell })
                .collect(),
            BenchVariant::Thm4 => self
                .delta_values
                .iter()
                .map(|&max_deg| SecondarySpec::GeneralRandom { max_deg })
                .collect(),
        };
        let mut specs = Vec::new();
        let mut run_index = 0u64;
        for &t in &self.t_values {
            for &h in &self.h_values {
                for &secondary in &thirds {
                    for _ in 0..self.repetitions {
                        specs.push(InstanceSpec {
                            t,
                            r: self.r,
                            h,
                            secondary,
                            q_vertex: self.q_vertex,
                            p_edge: self.p_edge,
                            seed: self.seed_base.wrapping_add(run_index),
                        });
                        run_index += 1;
                    }
                }
            }
        }
        specs
    }
}

/// Outcome of one run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub spec: InstanceSpec,
    pub meta: RunMeta,
    pub stats: RunStats,
    /// Largest colour index assigned.
    pub max_colour: u32,
    pub millis: f64,
    /// `None` when verification was not requested.
    pub verified: Option<bool>,
    /// Set when the palette ran out; never expected on valid inputs.
    pub exhausted: bool,
}

#[derive(Debug)]
pub struct SweepReport {
    pub records: Vec<RunRecord>,
    pub exhaustion_count: u32,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

fn execute_one(spec: &InstanceSpec, verify: bool) -> Result<RunRecord, BuildError> {
    let g = build_instance(spec)?;
    let palette = default_palette(&g);
    let start = Instant::now();
    let outcome = colour_with_palette(&g, palette);
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let meta = RunMeta::for_instance(&g, Some(spec.seed), palette);
    match outcome {
        Ok((colouring, stats)) => {
            let verified = verify.then(|| all_checks_pass(&g, &colouring));
            let max_colour = colouring.colours().iter().copied().max().unwrap_or(0);
            Ok(RunRecord {
                spec: *spec,
                meta,
                stats,
                max_colour,
                millis,
                verified,
                exhausted: false,
            })
        }
        Err(_) => Ok(RunRecord {
            spec: *spec,
            meta,
            stats: RunStats::default(),
            max_colour: 0,
            millis,
            verified: verify.then_some(false),
            exhausted: true,
        }),
    }
}

fn all_checks_pass(g: &ProductSubgraph, c: &Colouring) -> bool {
    verify_proper(g, c).map(|r| r.ok()).unwrap_or(false)
        && verify_odd(g, c).map(|(r, _)| r.ok()).unwrap_or(false)
        && verify_support_distinct(g, c).map(|r| r.ok()).unwrap_or(false)
}

fn collect(results: Vec<Result<RunRecord, BuildError>>) -> Result<SweepReport, SweepError> {
    let mut records = Vec::with_capacity(results.len());
    for result in results {
        records.push(result?);
    }
    let exhaustion_count = records.iter().filter(|r| r.exhausted).count() as u32;
    Ok(SweepReport {
        records,
        exhaustion_count,
    })
}

/// Runs every grid cell; parallel across runs when the feature is on.
pub fn run_sweep(cfg: &BenchConfig) -> Result<SweepReport, SweepError> {
    cfg.validate()?;
    let specs = cfg.runs();
    collect(par::map_slice(&specs, |spec| execute_one(spec, cfg.verify)))
}

/// Sequential lane of [`run_sweep`]; same records, one thread.
pub fn run_sweep_serial(cfg: &BenchConfig) -> Result<SweepReport, SweepError> {
    cfg.validate()?;
    let specs = cfg.runs();
    collect(par::map_slice_serial(&specs, |spec| {
        execute_one(spec, cfg.verify)
    }))
}

/// Runs a sweep inside a rayon pool of the requested size; `None` keeps the
/// global default. Without the `parallel` feature the worker count is
/// ignored and the sweep runs sequentially.
pub fn run_sweep_with_workers(
    cfg: &BenchConfig,
    workers: Option<usize>,
) -> Result<SweepReport, SweepError> {
    #[cfg(feature = "parallel")]
    {
        match workers {
            Some(count) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(count)
                    .build()
                    .expect("failed to build worker pool");
                pool.install(|| run_sweep(cfg))
            }
            None => run_sweep(cfg),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        run_sweep_serial(cfg)
    }
}

/// One point of the scaling ladder: a full product H ⊠ P with r ≈ h ≈ √n.
#[derive(Debug, Clone)]
pub struct LadderPoint {
    pub target: u64,
    pub r: u32,
    pub h: u32,
    pub n: usize,
    pub m: usize,
    pub gen_millis: f64,
    pub colour_millis: f64,
    pub palette: u32,
    pub colours_used: u32,
    pub stats: RunStats,
}

/// Times full-product colouring at the requested sizes. Small points are
/// re-run a few times and report their best time to damp scheduling noise.
pub fn run_ladder(t: u32, sizes: &[u64], seed: u64) -> Result<Vec<LadderPoint>, SweepError> {
    let mut points = Vec::with_capacity(sizes.len());
    for &target in sizes {
        let side = (target as f64).sqrt().ceil() as u32;
        let r = side.max(t + 1);
        let h = side.max(1);

        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let host_seed: u64 = master.random();
        let host = random_t_tree(t, r, host_seed).map_err(BuildError::Host)?;
        let secondary = SecondaryFactor::Path { h };

        let start = Instant::now();
        let g = sample_subgraph(host, secondary, 1.0, 1.0, master.random());
        let gen_millis = start.elapsed().as_secs_f64() * 1e3;

        let palette = default_palette(&g);
        let repeats = if g.n() <= 200_000 { 3 } else { 1 };
        let mut best_millis = f64::INFINITY;
        let mut outcome = None;
        for _ in 0..repeats {
            let start = Instant::now();
            let result = colour_with_palette(&g, palette).expect("ladder instance must colour");
            best_millis = best_millis.min(start.elapsed().as_secs_f64() * 1e3);
            outcome = Some(result);
        }
        let (colouring, stats) = outcome.expect("at least one ladder repeat");
        points.push(LadderPoint {
            target,
            r,
            h,
            n: g.n(),
            m: g.m(),
            gen_millis,
            colour_millis: best_millis,
            palette,
            colours_used: colouring.colours_used(),
            stats,
        });
    }
    Ok(points)
}

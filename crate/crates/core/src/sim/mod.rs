//! Monte-Carlo frame-error-rate harness.
//!
//! Each frame transmits the all-zero codeword with noise drawn from
//! [`frame_rng`]`(master_seed, frame_index)`, so every schedule and every
//! SNR point sees the same underlying normal draws for a given frame index.
//! One decoding pass per frame records the first iteration at which the
//! syndrome held; the FER at every iteration cap `k` follows from those
//! values without re-decoding.

mod csv;
mod diagnostics;

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{frame_rng, transmit_all_zero, ChannelError, ChannelParams, SnrConvention};
use crate::codes::TannerGraph;
use crate::kernels::KernelConfig;
use crate::schedules::{decode, DecodeConfig, DecodeError, ScheduleKind};

pub use self::csv::{emit_csv, parse_csv};
pub use diagnostics::{diagnose_frames, diagnose_trapping, trapping_csv, TrappingRecord};

/// Frames decoded between two checks of the stopping rule.
const CHUNK: u64 = 256;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub schedules: Vec<ScheduleKind>,
    pub ebno_db: Vec<f64>,
    pub max_iters: usize,
    pub min_frames: u64,
    pub min_errors: u64,
    /// Hard ceiling on frames per point, reached even if `min_errors` is not.
    pub max_frames: Option<u64>,
    pub master_seed: u64,
    pub convention: SnrConvention,
    /// Code rate used to convert Eb/N0 into a noise variance.
    pub rate: f64,
    pub kernel: KernelConfig,
}

impl Experiment {
    /// Defaults: 100 minimum errors, Eb/N0 convention, design rate
    /// `1 - M/N` of `graph`.
    pub fn new(
        graph: &TannerGraph,
        schedules: Vec<ScheduleKind>,
        ebno_db: Vec<f64>,
        max_iters: usize,
        min_frames: u64,
    ) -> Self {
        Experiment {
            schedules,
            ebno_db,
            max_iters,
            min_frames,
            min_errors: 100,
            max_frames: None,
            master_seed: 0,
            convention: SnrConvention::EbN0,
            rate: design_rate(graph),
            kernel: KernelConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.schedules.is_empty() {
            return Err(SimError::Config("no schedule given".into()));
        }
        if self.ebno_db.is_empty() {
            return Err(SimError::Config("no SNR point given".into()));
        }
        if self.min_frames == 0 {
            return Err(SimError::Config("min_frames must be >= 1".into()));
        }
        if self.max_iters == 0 {
            return Err(SimError::Config("max_iters must be >= 1".into()));
        }
        if self.max_frames.is_some_and(|m| m < self.min_frames) {
            return Err(SimError::Config("max_frames below min_frames".into()));
        }
        Ok(())
    }
}

/// `1 - M/N`, the rate of a full-rank parity-check matrix.
pub fn design_rate(graph: &TannerGraph) -> f64 {
    1.0 - graph.n_checks() as f64 / graph.n_vars() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerRecord {
    pub schedule: String,
    pub ebno_db: f64,
    pub iter_cap: usize,
    pub frames: u64,
    pub errors: u64,
    pub fer: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl FerRecord {
    pub fn new(schedule: &str, ebno_db: f64, iter_cap: usize, frames: u64, errors: u64) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(errors, frames);
        FerRecord {
            schedule: schedule.to_string(),
            ebno_db,
            iter_cap,
            frames,
            errors,
            fer: errors as f64 / frames as f64,
            ci_lo,
            ci_hi,
        }
    }

    /// Whether the two 95% intervals intersect.
    pub fn overlaps(&self, other: &FerRecord) -> bool {
        self.ci_lo <= other.ci_hi && other.ci_lo <= self.ci_hi
    }
}

/// 95% Wilson score interval for `errors` out of `frames`.
pub fn wilson_interval(errors: u64, frames: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    if frames == 0 {
        return (0.0, 1.0);
    }
    let n = frames as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (centre - half).max(0.0).min(p),
        (centre + half).min(1.0).max(p),
    )
}

/// First-success iterations of a block of frames, in frame order.
pub type FrameResults = Vec<Option<usize>>;

/// Decodes frames `range` of one (schedule, SNR) point.
pub fn simulate_frames(
    graph: &TannerGraph,
    params: &ChannelParams,
    cfg: &DecodeConfig,
    master_seed: u64,
    range: std::ops::Range<u64>,
) -> Result<FrameResults, SimError> {
    range
        .into_par_iter()
        .map(|frame| {
            let mut rng = frame_rng(master_seed, frame);
            let llrs = transmit_all_zero(params, graph.n_vars(), cfg.kernel.llr_max, &mut rng);
            Ok(decode(graph, &llrs, cfg)?.first_success_iter)
        })
        .collect()
}

/// FER(k) for `k = 1..=max_iters` from first-success iterations.
pub fn fer_curve(
    schedule: &str,
    ebno_db: f64,
    max_iters: usize,
    results: &[Option<usize>],
) -> Vec<FerRecord> {
    let frames = results.len() as u64;
    let mut solved_at = vec![0u64; max_iters + 1];
    for &r in results.iter().flatten() {
        if r <= max_iters {
            solved_at[r] += 1;
        }
    }
    let mut solved = 0;
    (1..=max_iters)
        .map(|k| {
            solved += solved_at[k];
            FerRecord::new(schedule, ebno_db, k, frames, frames - solved)
        })
        .collect()
}

/// Runs one (schedule, SNR) point until the stopping rule is met.
pub fn simulate_point(
    graph: &TannerGraph,
    exp: &Experiment,
    schedule: ScheduleKind,
    ebno_db: f64,
) -> Result<FrameResults, SimError> {
    let params = ChannelParams::with_convention(ebno_db, exp.rate, exp.convention)?;
    let cfg = DecodeConfig {
        kernel: exp.kernel,
        ..DecodeConfig::new(schedule, exp.max_iters)
    };
    let mut results: FrameResults = Vec::new();
    let mut errors = 0u64;
    loop {
        let frames = results.len() as u64;
        let enough = frames >= exp.min_frames && errors >= exp.min_errors;
        if enough || exp.max_frames.is_some_and(|m| frames >= m) {
            return Ok(results);
        }
        let mut next = if frames < exp.min_frames {
            (exp.min_frames - frames).min(CHUNK)
        } else {
            CHUNK
        };
        if let Some(m) = exp.max_frames {
            next = next.min(m - frames);
        }
        let chunk = simulate_frames(graph, &params, &cfg, exp.master_seed, frames..frames + next)?;
        errors += chunk.iter().filter(|r| r.is_none()).count() as u64;
        results.extend(chunk);
    }
}

/// Runs every (schedule, SNR) point and returns FER records for every
/// iteration cap `1..=max_iters`, ordered by schedule, SNR, cap.
pub fn run_experiment(graph: &TannerGraph, exp: &Experiment) -> Result<Vec<FerRecord>, SimError> {
    exp.validate()?;
    let mut records = Vec::new();
    for &schedule in &exp.schedules {
        let cfg = DecodeConfig::new(schedule, exp.max_iters);
        // surface configuration errors (p out of range, degree-1 checks)
        // before spending time on frames
        decode(graph, &vec![1.0; graph.n_vars()], &cfg)?;
        for &ebno in &exp.ebno_db {
            let results = simulate_point(graph, exp, schedule, ebno)?;
            let curve = fer_curve(schedule.name(), ebno, exp.max_iters, &results);
            debug_assert!(curve.windows(2).all(|w| w[1].fer <= w[0].fer));
            records.extend(curve);
        }
    }
    Ok(records)
}

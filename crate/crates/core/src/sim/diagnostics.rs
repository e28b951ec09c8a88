//! Trapping-set diagnostics: frames that a reference schedule cannot solve
//! within its budget but a candidate solves quickly.

use rayon::prelude::*;

use super::SimError;
use crate::channel::{frame_rng, transmit_all_zero, ChannelParams};
use crate::codes::TannerGraph;
use crate::schedules::{decode, DecodeConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct TrappingRecord {
    pub frame: u64,
    /// Unsatisfied checks left by the reference at its last iteration.
    pub ref_unsatisfied: usize,
    /// Variables the reference left in error (all-zero codeword sent).
    pub ref_bit_errors: usize,
    pub cand_iters: usize,
    /// Candidate's unsatisfied-check count at each iteration boundary.
    pub cand_trajectory: Vec<usize>,
}

impl TrappingRecord {
    /// Whether the candidate's unsatisfied count never rises over the second
    /// half of its run (it ends at zero by construction).
    pub fn tail_non_increasing(&self) -> bool {
        let t = &self.cand_trajectory;
        t[t.len() / 2..].windows(2).all(|w| w[1] <= w[0])
    }
}

/// Compares `reference` and `candidate` on explicit channel vectors. A frame
/// is reported when the reference fails and the candidate succeeds in fewer
/// than `fast_iters` iterations.
pub fn diagnose_frames<'a>(
    graph: &TannerGraph,
    frames: impl IntoIterator<Item = (u64, &'a [f64])>,
    reference: &DecodeConfig,
    candidate: &DecodeConfig,
    fast_iters: usize,
) -> Result<Vec<TrappingRecord>, SimError> {
    let mut out = Vec::new();
    for (frame, llrs) in frames {
        if let Some(rec) = diagnose_one(graph, frame, llrs, reference, candidate, fast_iters)? {
            out.push(rec);
        }
    }
    Ok(out)
}

fn diagnose_one(
    graph: &TannerGraph,
    frame: u64,
    llrs: &[f64],
    reference: &DecodeConfig,
    candidate: &DecodeConfig,
    fast_iters: usize,
) -> Result<Option<TrappingRecord>, SimError> {
    let cand = decode(graph, llrs, candidate)?;
    match cand.first_success_iter {
        Some(k) if k < fast_iters => {}
        _ => return Ok(None),
    }
    let reference = decode(graph, llrs, reference)?;
    if reference.success {
        return Ok(None);
    }
    Ok(Some(TrappingRecord {
        frame,
        ref_unsatisfied: *reference
            .unsatisfied
            .last()
            .expect("at least one iteration"),
        ref_bit_errors: reference.bits.iter().filter(|&&b| b != 0).count(),
        cand_iters: cand.iters_run,
        cand_trajectory: cand.unsatisfied,
    }))
}

/// Monte-Carlo version over frames `0..n_frames` of the usual frame streams.
pub fn diagnose_trapping(
    graph: &TannerGraph,
    params: &ChannelParams,
    reference: &DecodeConfig,
    candidate: &DecodeConfig,
    n_frames: u64,
    master_seed: u64,
    fast_iters: usize,
) -> Result<Vec<TrappingRecord>, SimError> {
    let llr_max = reference.kernel.llr_max;
    let found: Result<Vec<Option<TrappingRecord>>, SimError> = (0..n_frames)
        .into_par_iter()
        .map(|frame| {
            let llrs = transmit_all_zero(
                params,
                graph.n_vars(),
                llr_max,
                &mut frame_rng(master_seed, frame),
            );
            diagnose_one(graph, frame, &llrs, reference, candidate, fast_iters)
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

/// `frame,ref_unsatisfied,ref_bit_errors,cand_iters,cand_tail_non_increasing,cand_trajectory`
/// with the trajectory `;`-separated.
pub fn trapping_csv(records: &[TrappingRecord]) -> String {
    let mut out = String::from(
        "frame,ref_unsatisfied,ref_bit_errors,cand_iters,cand_tail_non_increasing,cand_trajectory\n",
    );
    for r in records {
        let traj: Vec<String> = r.cand_trajectory.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.frame,
            r.ref_unsatisfied,
            r.ref_bit_errors,
            r.cand_iters,
            r.tail_non_increasing(),
            traj.join(";")
        ));
    }
    out
}

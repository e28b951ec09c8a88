//! Flooding and layered (sequential check-node) schedules.

use super::{DecodeConfig, DecodeError, DecodeOutcome, Run, ScheduleKind};
use crate::codes::TannerGraph;
use crate::kernels::{check_update_exact, compute_v2c};

/// All variable nodes from the previous check messages, then all check
/// nodes from the new variable messages.
pub fn decode_flooding(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &DecodeConfig,
) -> Result<DecodeOutcome, DecodeError> {
    let cfg = DecodeConfig {
        schedule: ScheduleKind::Flooding,
        ..*cfg
    };
    super::decode(graph, channel, &cfg)
}

/// Check nodes one at a time in ascending index, always from the latest
/// messages.
pub fn decode_lbp(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &DecodeConfig,
) -> Result<DecodeOutcome, DecodeError> {
    let cfg = DecodeConfig {
        schedule: ScheduleKind::Lbp,
        ..*cfg
    };
    super::decode(graph, channel, &cfg)
}

pub(super) fn flooding(mut run: Run<'_>) -> DecodeOutcome {
    let graph = run.graph;
    let kernel = run.kernel;
    let n_edges = graph.n_edges() as u64;
    let mut out = Vec::new();
    loop {
        // v2c reads only m_cv, so in-place writes see the previous snapshot
        for e in 0..graph.n_edges() {
            let v = compute_v2c(&run.state, graph, e, &kernel);
            run.state.set_v2c(e, v);
        }
        // c2v reads only m_vc
        for c in 0..graph.n_checks() {
            check_update_exact(&run.state, graph, c, &kernel, &mut out);
            for (e, &m) in graph.check_edges(c).zip(&out) {
                run.state.set_c2v(e, m);
            }
        }
        run.v2c_updates += n_edges;
        run.c2v_updates += n_edges;
        if run.boundary() {
            return run.finish();
        }
    }
}

pub(super) fn layered(mut run: Run<'_>) -> DecodeOutcome {
    let graph = run.graph;
    let kernel = run.kernel;
    let mut out = Vec::new();
    loop {
        for c in 0..graph.n_checks() {
            for e in graph.check_edges(c) {
                let v = compute_v2c(&run.state, graph, e, &kernel);
                run.state.set_v2c(e, v);
            }
            check_update_exact(&run.state, graph, c, &kernel, &mut out);
            for (e, &m) in graph.check_edges(c).zip(&out) {
                run.state.set_c2v(e, m);
            }
            let deg = graph.check_degree(c) as u64;
            run.v2c_updates += deg;
            run.c2v_updates += deg;
        }
        if run.boundary() {
            return run.finish();
        }
    }
}

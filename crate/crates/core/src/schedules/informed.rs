//! Residual-driven schedules: RBP/ARBP (one edge per step) and node-wise
//! RBP/ARBP (one check node per step, or a batch of `p` nodes).
//!
//! Residuals start against `m_cv = 0` (and a zero shadow store for the
//! approximate variants), so the first key of edge `e` is the magnitude of
//! its first would-be message. Propagated messages always use the exact
//! update rules; `approx` only changes how residuals are measured.

use super::{DecodeConfig, DecodeError, DecodeOutcome, Run, ScheduleKind, TraceKind};
use crate::codes::TannerGraph;
use crate::kernels::{
    check_update_exact, compute_c2v, compute_v2c, minsum_into, KernelConfig, LlrState,
};
use crate::queue::ResidualQueue;

/// Residual-BP (`approx = false`) or approximate-residual BP (`approx = true`).
pub fn decode_rbp(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &DecodeConfig,
    approx: bool,
) -> Result<DecodeOutcome, DecodeError> {
    let schedule = if approx {
        ScheduleKind::Arbp
    } else {
        ScheduleKind::Rbp
    };
    super::decode(graph, channel, &DecodeConfig { schedule, ..*cfg })
}

/// Node-wise RBP, or node-wise ARBP when `approx` is set.
pub fn decode_nw_rbp(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &DecodeConfig,
    approx: bool,
) -> Result<DecodeOutcome, DecodeError> {
    let schedule = if approx {
        ScheduleKind::NodeWiseArbp
    } else {
        ScheduleKind::NodeWiseRbp
    };
    super::decode(graph, channel, &DecodeConfig { schedule, ..*cfg })
}

/// Node-wise ARBP updating the `p` highest-keyed check nodes per step.
pub fn decode_parallel_nw_arbp(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &DecodeConfig,
    p: usize,
) -> Result<DecodeOutcome, DecodeError> {
    let schedule = ScheduleKind::ParallelNodeWiseArbp { p };
    super::decode(graph, channel, &DecodeConfig { schedule, ..*cfg })
}

/// Residuals of every edge of check `c`, in edge order. With `pending`
/// given (exact residuals only), the fresh messages are stored there.
#[inline]
fn residuals_into(
    state: &LlrState,
    graph: &TannerGraph,
    c: usize,
    kernel: &KernelConfig,
    approx: bool,
    out: &mut Vec<f64>,
    pending: Option<&mut [f64]>,
) {
    let edges = graph.check_edges(c);
    if approx {
        minsum_into(state, graph, c, kernel, out);
        for (r, e) in out.iter_mut().zip(edges) {
            *r = (*r - state.shadow()[e]).abs();
        }
    } else {
        check_update_exact(state, graph, c, kernel, out);
        if let Some(pending) = pending {
            pending[edges.clone()].copy_from_slice(out);
        }
        for (r, e) in out.iter_mut().zip(edges) {
            *r = (*r - state.m_cv()[e]).abs();
        }
    }
}

fn initial_residuals(run: &mut Run<'_>, approx: bool, mut pending: Option<&mut [f64]>) -> Vec<f64> {
    let graph = run.graph;
    let mut keys = Vec::with_capacity(graph.n_edges());
    let mut buf = Vec::new();
    for c in 0..graph.n_checks() {
        residuals_into(
            &run.state,
            graph,
            c,
            &run.kernel,
            approx,
            &mut buf,
            pending.as_deref_mut(),
        );
        keys.extend_from_slice(&buf);
    }
    run.residual_computations += graph.n_edges() as u64;
    keys
}

#[cfg(debug_assertions)]
fn audit_selection(q: &ResidualQueue, pops: u64) {
    if !pops.is_multiple_of(100) {
        return;
    }
    let (item, key) = q.peek_max();
    for other in 0..q.capacity() {
        let k = q.key(other);
        assert!(
            key > k || (key == k && item <= other),
            "queue selected {item} ({key}) over {other} ({k})"
        );
    }
}

/// Edge-wise residual BP: pop the edge with the largest residual, propagate
/// it, then refresh the outgoing messages of its variable node and the
/// residuals those touch.
///
/// For exact residuals the message computed alongside each residual is
/// kept in `pending` and propagated as is, so a popped edge's residual is
/// exactly zero afterwards. The inputs of a check never change without its
/// residuals being refreshed, so `pending` is always current.
pub(super) fn edge_wise(mut run: Run<'_>, approx: bool) -> DecodeOutcome {
    let graph = run.graph;
    let kernel = run.kernel;
    let n_edges = graph.n_edges() as u64;
    let mut pending = if approx {
        Vec::new()
    } else {
        vec![0.0; graph.n_edges()]
    };
    let keys = initial_residuals(&mut run, approx, (!approx).then_some(&mut pending[..]));
    let mut q = ResidualQueue::build(keys).expect("residuals are finite and non-negative");
    let mut buf = Vec::new();
    #[cfg(debug_assertions)]
    let mut pops = 0u64;
    loop {
        #[cfg(debug_assertions)]
        {
            audit_selection(&q, pops);
            pops += 1;
        }
        let (e, r) = q.peek_max();
        let (ci, vj) = (graph.edge_check(e), graph.edge_var(e));
        run.record(TraceKind::Select, ci, Some(vj), r);

        let m = if approx {
            minsum_into(&run.state, graph, ci, &kernel, &mut buf);
            run.state
                .set_shadow(e, buf[e - graph.check_edges(ci).start]);
            compute_c2v(&run.state, graph, e, &kernel)
        } else {
            pending[e]
        };
        run.state.set_c2v(e, m);
        run.c2v_updates += 1;
        run.record(TraceKind::C2v, ci, Some(vj), r);
        q.set_key(e, 0.0);

        for &f in graph.var_edges(vj) {
            if f == e {
                continue;
            }
            let old = run.state.m_vc()[f];
            let new = compute_v2c(&run.state, graph, f, &kernel);
            run.state.set_v2c(f, new);
            run.v2c_updates += 1;
            let ca = graph.edge_check(f);
            run.record(TraceKind::V2c, ca, Some(vj), (new - old).abs());

            residuals_into(
                &run.state,
                graph,
                ca,
                &kernel,
                approx,
                &mut buf,
                (!approx).then_some(&mut pending[..]),
            );
            for (g, &res) in graph.check_edges(ca).zip(&buf) {
                if g != f {
                    q.set_key(g, res);
                }
            }
            run.residual_computations += graph.check_degree(ca) as u64 - 1;
        }

        if run.c2v_updates.is_multiple_of(n_edges) && run.boundary() {
            return run.finish();
        }
    }
}

/// Node-wise residual BP: pop the check node owning the largest residual
/// and propagate all of its outgoing messages. With `p > 1` the `p`
/// highest nodes (keys frozen at selection time) are updated one after the
/// other in ascending node index.
pub(super) fn node_wise(mut run: Run<'_>, approx: bool, p: usize) -> DecodeOutcome {
    let graph = run.graph;
    let kernel = run.kernel;
    let n_checks = graph.n_checks() as u64;
    let mut edge_res = initial_residuals(&mut run, approx, None);
    let node_key = |edge_res: &[f64], c: usize| -> f64 {
        edge_res[graph.check_edges(c)]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    };
    let keys = (0..graph.n_checks())
        .map(|c| node_key(&edge_res, c))
        .collect();
    let mut q = ResidualQueue::build(keys).expect("residuals are finite and non-negative");

    let mut outs = Vec::new();
    let mut ms = Vec::new();
    let mut buf = Vec::new();
    let mut batch = Vec::with_capacity(p);
    let mut node_updates = 0u64;
    #[cfg(debug_assertions)]
    let mut pops = 0u64;
    loop {
        #[cfg(debug_assertions)]
        {
            audit_selection(&q, pops);
            pops += 1;
        }
        batch.clear();
        if p == 1 {
            batch.push(q.peek_max().0);
        } else {
            batch.extend(q.top(p));
            batch.sort_unstable();
        }

        for &ci in &batch {
            run.record(TraceKind::Select, ci, None, q.key(ci));
            check_update_exact(&run.state, graph, ci, &kernel, &mut outs);
            if approx {
                minsum_into(&run.state, graph, ci, &kernel, &mut ms);
            }
            for (k, e) in graph.check_edges(ci).enumerate() {
                let vk = graph.edge_var(e);
                run.state.set_c2v(e, outs[k]);
                if approx {
                    run.state.set_shadow(e, ms[k]);
                }
                run.c2v_updates += 1;
                run.record(TraceKind::C2v, ci, Some(vk), edge_res[e]);
                edge_res[e] = 0.0;

                for &f in graph.var_edges(vk) {
                    if f == e {
                        continue;
                    }
                    let old = run.state.m_vc()[f];
                    let new = compute_v2c(&run.state, graph, f, &kernel);
                    run.state.set_v2c(f, new);
                    run.v2c_updates += 1;
                    let ca = graph.edge_check(f);
                    run.record(TraceKind::V2c, ca, Some(vk), (new - old).abs());

                    residuals_into(&run.state, graph, ca, &kernel, approx, &mut buf, None);
                    for (g, &res) in graph.check_edges(ca).zip(&buf) {
                        if g != f {
                            edge_res[g] = res;
                        }
                    }
                    run.residual_computations += graph.check_degree(ca) as u64 - 1;
                    q.set_key(ca, node_key(&edge_res, ca));
                }
            }
            q.set_key(ci, node_key(&edge_res, ci));

            node_updates += 1;
            if node_updates.is_multiple_of(n_checks) && run.boundary() {
                return run.finish();
            }
        }
    }
}

//! Helpers shared by the integration tests: shipped codes, toy graphs and
//! independent reference implementations of the residual schedules.
#![allow(dead_code)]

use std::path::PathBuf;

use ldpc_ids::codes::{load_code, CodeFormat};
use ldpc_ids::schedules::{TraceEvent, TraceKind};
use ldpc_ids::TannerGraph;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

/// The shipped rate-1/2 QC code, N = 1944, z = 54.
pub fn shipped_code() -> TannerGraph {
    load_code(&data_path("qc_r12_n1944_z54.qc"), CodeFormat::Qc).unwrap()
}

/// Three checks, six variables, nine edges, one 6-cycle (v0-c0-v1-c1-v3-c2).
pub const TOY_ROWS: [[u8; 6]; 3] = [[1, 1, 1, 0, 0, 0], [0, 1, 0, 1, 1, 0], [1, 0, 0, 1, 0, 1]];

pub fn toy_graph() -> TannerGraph {
    let rows: Vec<&[u8]> = TOY_ROWS.iter().map(|r| &r[..]).collect();
    TannerGraph::from_dense(&rows).unwrap()
}

/// A trace event without the step counter, for comparison.
#[derive(Debug, Clone, Copy)]
pub struct Ev {
    pub kind: TraceKind,
    pub check: usize,
    pub var: Option<usize>,
    pub value: f64,
}

pub fn strip(events: &[TraceEvent]) -> Vec<Ev> {
    events
        .iter()
        .map(|e| Ev {
            kind: e.kind,
            check: e.check,
            var: e.var,
            value: e.value,
        })
        .collect()
}

/// Asserts equal kinds and endpoints, and values within `tol`.
pub fn assert_traces_match(got: &[Ev], want: &[Ev], tol: f64) {
    assert_eq!(got.len(), want.len(), "trace lengths differ");
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!(
            g.kind == w.kind && g.check == w.check && g.var == w.var,
            "event {i}: got {g:?}, want {w:?}"
        );
        assert!(
            (g.value - w.value).abs() <= tol,
            "event {i}: got {g:?}, want {w:?}"
        );
    }
}

/// Bitwise log-likelihood ratios by enumeration of all codewords.
pub fn brute_force_marginals(rows: &[&[u8]], llrs: &[f64]) -> Vec<f64> {
    let n = llrs.len();
    let mut p0 = vec![0.0; n];
    let mut p1 = vec![0.0; n];
    for word in 0u32..1 << n {
        let bit = |j: usize| (word >> j) & 1;
        if !rows
            .iter()
            .all(|row| (0..n).filter(|&j| row[j] == 1).map(bit).sum::<u32>() % 2 == 0)
        {
            continue;
        }
        // p(y | x) is proportional to exp(-L_j x_j) per bit with L = log p(y|0)/p(y|1)
        let w: f64 = (0..n).map(|j| -llrs[j] * bit(j) as f64).sum::<f64>().exp();
        for j in 0..n {
            if bit(j) == 0 {
                p0[j] += w;
            } else {
                p1[j] += w;
            }
        }
    }
    (0..n).map(|j| (p0[j] / p1[j]).ln()).collect()
}

const LLR_MAX: f64 = 38.0;
const TANH_BOUND: f64 = 1.0 - 1e-12;

fn clip(x: f64) -> f64 {
    x.clamp(-LLR_MAX, LLR_MAX)
}

/// Dense-matrix simulation of the residual schedules, written from the
/// textbook description: edges are the ones of `rows` in row-major order,
/// every check message is recomputed from scratch with a plain product,
/// and the largest key is found by a linear scan (ties to lowest index).
pub struct Reference {
    checks: Vec<Vec<usize>>,
    edge_check: Vec<usize>,
    edge_var: Vec<usize>,
    channel: Vec<f64>,
    m_vc: Vec<f64>,
    m_cv: Vec<f64>,
    res: Vec<f64>,
    trace: Vec<Ev>,
}

impl Reference {
    pub fn new(rows: &[[u8; 6]], channel: &[f64]) -> Self {
        let mut checks = Vec::new();
        let (mut edge_check, mut edge_var) = (Vec::new(), Vec::new());
        for (c, row) in rows.iter().enumerate() {
            let mut edges = Vec::new();
            for (v, &h) in row.iter().enumerate() {
                if h == 1 {
                    edges.push(edge_check.len());
                    edge_check.push(c);
                    edge_var.push(v);
                }
            }
            checks.push(edges);
        }
        let channel: Vec<f64> = channel.iter().map(|&c| clip(c)).collect();
        let m_vc = edge_var.iter().map(|&v| channel[v]).collect();
        let n = edge_check.len();
        let mut r = Reference {
            checks,
            edge_check,
            edge_var,
            channel,
            m_vc,
            m_cv: vec![0.0; n],
            res: vec![0.0; n],
            trace: Vec::new(),
        };
        for e in 0..n {
            r.res[e] = r.c2v(e).abs();
        }
        r
    }

    fn c2v(&self, e: usize) -> f64 {
        let mut p = 1.0;
        for &f in &self.checks[self.edge_check[e]] {
            if f != e {
                p *= (self.m_vc[f] / 2.0).tanh();
            }
        }
        clip(2.0 * p.clamp(-TANH_BOUND, TANH_BOUND).atanh())
    }

    fn v2c(&self, e: usize) -> f64 {
        let v = self.edge_var[e];
        let mut s = self.channel[v];
        for f in 0..self.edge_var.len() {
            if f != e && self.edge_var[f] == v {
                s += self.m_cv[f];
            }
        }
        clip(s)
    }

    fn syndrome_holds(&self) -> bool {
        let bits: Vec<bool> = (0..self.channel.len())
            .map(|v| {
                let mut post = self.channel[v];
                for f in 0..self.edge_var.len() {
                    if self.edge_var[f] == v {
                        post += self.m_cv[f];
                    }
                }
                post < 0.0
            })
            .collect();
        self.checks
            .iter()
            .all(|edges| edges.iter().filter(|&&e| bits[self.edge_var[e]]).count() % 2 == 0)
    }

    fn push(&mut self, kind: TraceKind, check: usize, var: Option<usize>, value: f64) {
        self.trace.push(Ev {
            kind,
            check,
            var,
            value,
        });
    }

    /// Propagates `m_{c->v}` on edge `e`, then every other outgoing message
    /// of `v` and the residuals downstream of it.
    fn propagate(&mut self, e: usize, residual: f64) {
        let (c, v) = (self.edge_check[e], self.edge_var[e]);
        self.m_cv[e] = self.c2v(e);
        self.push(TraceKind::C2v, c, Some(v), residual);
        self.res[e] = 0.0;
        for f in 0..self.edge_var.len() {
            if f == e || self.edge_var[f] != v {
                continue;
            }
            let old = self.m_vc[f];
            self.m_vc[f] = self.v2c(f);
            let ca = self.edge_check[f];
            self.push(TraceKind::V2c, ca, Some(v), (self.m_vc[f] - old).abs());
            for g in self.checks[ca].clone() {
                if g != f {
                    self.res[g] = (self.c2v(g) - self.m_cv[g]).abs();
                }
            }
        }
    }

    /// Edge-wise residual BP; one iteration per E propagations.
    pub fn rbp(mut self, max_iters: usize) -> Vec<Ev> {
        let n = self.edge_check.len();
        let mut count = 0;
        for _iter in 0..max_iters {
            for _ in 0..n {
                let mut best = 0;
                for e in 1..n {
                    if self.res[e] > self.res[best] {
                        best = e;
                    }
                }
                let r = self.res[best];
                self.push(
                    TraceKind::Select,
                    self.edge_check[best],
                    Some(self.edge_var[best]),
                    r,
                );
                self.propagate(best, r);
                count += 1;
            }
            debug_assert_eq!(count % n, 0);
            if self.syndrome_holds() {
                break;
            }
        }
        self.trace
    }

    /// Node-wise residual BP; one iteration per M node updates.
    pub fn nw_rbp(mut self, max_iters: usize) -> Vec<Ev> {
        let m = self.checks.len();
        let key =
            |r: &Reference, c: usize| r.checks[c].iter().map(|&e| r.res[e]).fold(0.0, f64::max);
        for _iter in 0..max_iters {
            for _ in 0..m {
                let mut best = 0;
                for c in 1..m {
                    if key(&self, c) > key(&self, best) {
                        best = c;
                    }
                }
                let k = key(&self, best);
                self.push(TraceKind::Select, best, None, k);
                for e in self.checks[best].clone() {
                    let r = self.res[e];
                    self.propagate(e, r);
                }
            }
            if self.syndrome_holds() {
                break;
            }
        }
        self.trace
    }
}

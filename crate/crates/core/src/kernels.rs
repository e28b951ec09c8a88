//! Message-update kernels.
//!
//! Variable-to-check messages are sums of incoming check messages plus the
//! channel LLR. Check-to-variable messages use the tanh rule. The min-sum
//! approximation is only used to rank messages (approximate residuals);
//! propagated messages always use the exact rules.
//!
//! Every stored message is clipped to `[-llr_max, llr_max]`, and tanh
//! products are clamped to `1 - tanh_eps` in magnitude before `atanh`.

use thiserror::Error;

use crate::codes::TannerGraph;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("channel vector has length {got}, graph has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid kernel configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub llr_max: f64,
    pub tanh_eps: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            llr_max: 38.0,
            tanh_eps: 1e-12,
        }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<(), KernelError> {
        if !(self.llr_max > 0.0) {
            return Err(KernelError::Config(format!(
                "llr_max must be positive, got {}",
                self.llr_max
            )));
        }
        if !(self.tanh_eps > 0.0 && self.tanh_eps < 1.0) {
            return Err(KernelError::Config(format!(
                "tanh_eps must lie in (0, 1), got {}",
                self.tanh_eps
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn clip(&self, x: f64) -> f64 {
        x.clamp(-self.llr_max, self.llr_max)
    }

    /// `2 atanh(p)` with `p` clamped away from +-1, then clipped.
    #[inline]
    fn atanh_of_product(&self, p: f64) -> f64 {
        let bound = 1.0 - self.tanh_eps;
        self.clip(2.0 * p.clamp(-bound, bound).atanh())
    }
}

/// Per-edge message arrays of one decoding in progress.
///
/// `shadow` holds the last min-sum value computed for each check-to-variable
/// slot when that slot was propagated; approximate residuals compare against
/// it. `tanh_vc` caches `tanh(m_vc / 2)` and is kept in sync by
/// [`LlrState::set_v2c`].
#[derive(Debug, Clone, PartialEq)]
pub struct LlrState {
    m_vc: Vec<f64>,
    m_cv: Vec<f64>,
    shadow: Vec<f64>,
    tanh_vc: Vec<f64>,
    channel: Vec<f64>,
}

impl LlrState {
    /// `m_cv = 0`, `m_vc[e] = C[var(e)]`, shadow store zeroed.
    pub fn new(
        graph: &TannerGraph,
        channel: &[f64],
        cfg: &KernelConfig,
    ) -> Result<Self, KernelError> {
        if channel.len() != graph.n_vars() {
            return Err(KernelError::LengthMismatch {
                expected: graph.n_vars(),
                got: channel.len(),
            });
        }
        let channel: Vec<f64> = channel.iter().map(|&c| cfg.clip(c)).collect();
        let m_vc: Vec<f64> = (0..graph.n_edges())
            .map(|e| channel[graph.edge_var(e)])
            .collect();
        let tanh_vc = m_vc.iter().map(|&x| (x / 2.0).tanh()).collect();
        let e = graph.n_edges();
        Ok(LlrState {
            m_vc,
            m_cv: vec![0.0; e],
            shadow: vec![0.0; e],
            tanh_vc,
            channel,
        })
    }

    /// Builds a state with explicit message arrays (clipped on entry).
    pub fn from_parts(
        graph: &TannerGraph,
        channel: &[f64],
        m_vc: &[f64],
        m_cv: &[f64],
        cfg: &KernelConfig,
    ) -> Result<Self, KernelError> {
        let e = graph.n_edges();
        if m_vc.len() != e || m_cv.len() != e {
            return Err(KernelError::LengthMismatch {
                expected: e,
                got: m_vc.len().min(m_cv.len()),
            });
        }
        let mut state = Self::new(graph, channel, cfg)?;
        for i in 0..e {
            state.set_v2c(i, cfg.clip(m_vc[i]));
            state.m_cv[i] = cfg.clip(m_cv[i]);
        }
        Ok(state)
    }

    pub fn m_vc(&self) -> &[f64] {
        &self.m_vc
    }

    pub fn m_cv(&self) -> &[f64] {
        &self.m_cv
    }

    pub fn shadow(&self) -> &[f64] {
        &self.shadow
    }

    pub fn channel(&self) -> &[f64] {
        &self.channel
    }

    #[inline]
    pub fn set_v2c(&mut self, e: usize, value: f64) {
        self.m_vc[e] = value;
        self.tanh_vc[e] = (value / 2.0).tanh();
    }

    #[inline]
    pub fn set_c2v(&mut self, e: usize, value: f64) {
        self.m_cv[e] = value;
    }

    #[inline]
    pub fn set_shadow(&mut self, e: usize, value: f64) {
        self.shadow[e] = value;
    }
}

/// Convenience alias matching the usual name of the initialisation step.
pub fn init_state(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &KernelConfig,
) -> Result<LlrState, KernelError> {
    LlrState::new(graph, channel, cfg)
}

/// Variable-to-check message on edge `e`: channel LLR plus every incoming
/// check message of `var(e)` except the one on `e`.
#[inline]
pub fn compute_v2c(state: &LlrState, graph: &TannerGraph, e: usize, cfg: &KernelConfig) -> f64 {
    let v = graph.edge_var(e);
    let sum: f64 = graph
        .var_edges(v)
        .iter()
        .filter(|&&f| f != e)
        .map(|&f| state.m_cv[f])
        .sum();
    cfg.clip(sum + state.channel[v])
}

/// Check-to-variable message on edge `e` by the tanh rule over the other
/// edges of `check(e)`.
pub fn compute_c2v(state: &LlrState, graph: &TannerGraph, e: usize, cfg: &KernelConfig) -> f64 {
    let c = graph.edge_check(e);
    let p: f64 = graph
        .check_edges(c)
        .filter(|&f| f != e)
        .map(|f| state.tanh_vc[f])
        .product();
    cfg.atanh_of_product(p)
}

/// Exact outputs for every edge of check `c`, written to `out` in edge
/// order. Uses prefix/suffix products so zero inputs need no special case.
pub fn check_update_exact(
    state: &LlrState,
    graph: &TannerGraph,
    c: usize,
    cfg: &KernelConfig,
    out: &mut Vec<f64>,
) {
    let edges = graph.check_edges(c);
    let t = &state.tanh_vc[edges];
    out.clear();
    out.resize(t.len(), 1.0);
    let mut acc = 1.0;
    for (i, &x) in t.iter().enumerate() {
        out[i] = acc;
        acc *= x;
    }
    acc = 1.0;
    for (i, &x) in t.iter().enumerate().rev() {
        out[i] = cfg.atanh_of_product(out[i] * acc);
        acc *= x;
    }
}

/// Min-sum outputs for every edge of check `c`, in edge order.
///
/// With `r1 <= r2` the two smallest incoming magnitudes and `e1` the
/// lowest-index edge attaining `r1`, edge `e1` receives `r2` and every other
/// edge `r1`. Signs are the product of the other incoming signs, with
/// `sign(0) = +`.
pub fn compute_c2v_minsum(
    state: &LlrState,
    graph: &TannerGraph,
    c: usize,
    cfg: &KernelConfig,
) -> Vec<f64> {
    let mut out = Vec::new();
    minsum_into(state, graph, c, cfg, &mut out);
    out
}

pub fn minsum_into(
    state: &LlrState,
    graph: &TannerGraph,
    c: usize,
    cfg: &KernelConfig,
    out: &mut Vec<f64>,
) {
    let inputs = &state.m_vc[graph.check_edges(c)];
    debug_assert!(inputs.len() >= 2);
    let mut r1 = f64::INFINITY;
    let mut r2 = f64::INFINITY;
    let mut i1 = 0;
    let mut negative = false;
    for (i, &x) in inputs.iter().enumerate() {
        let mag = x.abs();
        if mag < r1 {
            r2 = r1;
            r1 = mag;
            i1 = i;
        } else if mag < r2 {
            r2 = mag;
        }
        negative ^= x < 0.0;
    }
    out.clear();
    out.extend(inputs.iter().enumerate().map(|(i, &x)| {
        let mag = if i == i1 { r2 } else { r1 };
        let flip = negative ^ (x < 0.0);
        cfg.clip(if flip { -mag } else { mag })
    }));
}

/// `|c2v(e) - m_cv[e]|`.
pub fn residual_exact(state: &LlrState, graph: &TannerGraph, e: usize, cfg: &KernelConfig) -> f64 {
    (compute_c2v(state, graph, e, cfg) - state.m_cv[e]).abs()
}

/// Approximate residuals of every edge of check `c`: the distance between
/// the fresh min-sum outputs and the shadow store.
pub fn residual_approx(
    state: &LlrState,
    graph: &TannerGraph,
    c: usize,
    cfg: &KernelConfig,
) -> Vec<f64> {
    let ms = compute_c2v_minsum(state, graph, c, cfg);
    graph
        .check_edges(c)
        .zip(ms)
        .map(|(e, m)| (m - state.shadow[e]).abs())
        .collect()
}

/// Posterior LLRs and hard decisions. A posterior of exactly zero decides 0.
pub fn posterior_and_decide(state: &LlrState, graph: &TannerGraph) -> (Vec<u8>, Vec<f64>) {
    let posteriors: Vec<f64> = (0..graph.n_vars())
        .map(|v| {
            state.channel[v]
                + graph
                    .var_edges(v)
                    .iter()
                    .map(|&e| state.m_cv[e])
                    .sum::<f64>()
        })
        .collect();
    let bits = posteriors.iter().map(|&p| u8::from(p < 0.0)).collect();
    (bits, posteriors)
}

/// Hard decisions only.
pub fn hard_decisions(state: &LlrState, graph: &TannerGraph) -> Vec<u8> {
    (0..graph.n_vars())
        .map(|v| {
            let p = state.channel[v]
                + graph
                    .var_edges(v)
                    .iter()
                    .map(|&e| state.m_cv[e])
                    .sum::<f64>();
            u8::from(p < 0.0)
        })
        .collect()
}

/// Number of checks whose incident bits have odd parity.
pub fn unsatisfied_checks(bits: &[u8], graph: &TannerGraph) -> usize {
    (0..graph.n_checks())
        .filter(|&c| {
            graph
                .check_edges(c)
                .fold(0u8, |acc, e| acc ^ (bits[graph.edge_var(e)] & 1))
                != 0
        })
        .count()
}

pub fn syndrome_ok(bits: &[u8], graph: &TannerGraph) -> bool {
    (0..graph.n_checks()).all(|c| {
        graph
            .check_edges(c)
            .fold(0u8, |acc, e| acc ^ (bits[graph.edge_var(e)] & 1))
            == 0
    })
}

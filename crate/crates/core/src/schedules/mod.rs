//! Message-passing schedules.
//!
//! Seven schedules share one outcome shape and one iteration accounting:
//!
//! * flooding and layered (LBP) run whole sweeps;
//! * RBP/ARBP count one iteration per `E` check-to-variable propagations;
//! * the node-wise variants count one iteration per `M` check-node updates.
//!
//! The syndrome is only tested at iteration boundaries. Decoding stops at
//! the first boundary where it holds, or after `max_iters` boundaries.

mod fixed;
mod informed;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::codes::{CodeError, TannerGraph};
use crate::kernels::{self, KernelConfig, KernelError, LlrState};

pub use fixed::{decode_flooding, decode_lbp};
pub use informed::{decode_nw_rbp, decode_parallel_nw_arbp, decode_rbp};

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Graph(#[from] CodeError),
    #[error("max_iters must be >= 1")]
    ZeroIterations,
    #[error("parallel batch size p = {p} outside [1, {n_checks}]")]
    BatchSize { p: usize, n_checks: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    Flooding,
    Lbp,
    Rbp,
    Arbp,
    NodeWiseRbp,
    NodeWiseArbp,
    ParallelNodeWiseArbp { p: usize },
}

impl ScheduleKind {
    /// Short name used on the command line and in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Flooding => "flooding",
            ScheduleKind::Lbp => "lbp",
            ScheduleKind::Rbp => "rbp",
            ScheduleKind::Arbp => "arbp",
            ScheduleKind::NodeWiseRbp => "nw-rbp",
            ScheduleKind::NodeWiseArbp => "nw-arbp",
            ScheduleKind::ParallelNodeWiseArbp { .. } => "pnw-arbp",
        }
    }

    /// Every schedule, with `p` for the parallel variant.
    pub fn all(p: usize) -> [ScheduleKind; 7] {
        [
            ScheduleKind::Flooding,
            ScheduleKind::Lbp,
            ScheduleKind::Rbp,
            ScheduleKind::Arbp,
            ScheduleKind::NodeWiseRbp,
            ScheduleKind::NodeWiseArbp,
            ScheduleKind::ParallelNodeWiseArbp { p },
        ]
    }

    /// Parses a schedule name; `p` is attached to `pnw-arbp`.
    pub fn parse_with_p(name: &str, p: usize) -> Result<Self, String> {
        let kind: ScheduleKind = name.parse()?;
        Ok(match kind {
            ScheduleKind::ParallelNodeWiseArbp { .. } => ScheduleKind::ParallelNodeWiseArbp { p },
            other => other,
        })
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleKind::ParallelNodeWiseArbp { p } => write!(f, "pnw-arbp(p={p})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for ScheduleKind {
    type Err = String;

    /// `pnw-arbp` parses with `p = 1`; use [`ScheduleKind::parse_with_p`]
    /// to set the batch size.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "flooding" => ScheduleKind::Flooding,
            "lbp" | "sss" => ScheduleKind::Lbp,
            "rbp" => ScheduleKind::Rbp,
            "arbp" => ScheduleKind::Arbp,
            "nw-rbp" => ScheduleKind::NodeWiseRbp,
            "nw-arbp" => ScheduleKind::NodeWiseArbp,
            "pnw-arbp" => ScheduleKind::ParallelNodeWiseArbp { p: 1 },
            other => return Err(format!("unknown schedule `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeConfig {
    pub schedule: ScheduleKind,
    pub max_iters: usize,
    pub kernel: KernelConfig,
    /// Stop at the first iteration boundary whose hard decisions satisfy
    /// every check. When unset, decoding always runs `max_iters`
    /// iterations; `first_success_iter` still records the first satisfied
    /// boundary and `success` reflects the last one.
    pub syndrome_stop: bool,
}

impl DecodeConfig {
    pub fn new(schedule: ScheduleKind, max_iters: usize) -> Self {
        DecodeConfig {
            schedule,
            max_iters,
            kernel: KernelConfig::default(),
            syndrome_stop: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub success: bool,
    pub bits: Vec<u8>,
    /// First iteration boundary at which the syndrome held.
    pub first_success_iter: Option<usize>,
    pub c2v_updates: u64,
    pub v2c_updates: u64,
    pub residual_computations: u64,
    pub iters_run: usize,
    /// Unsatisfied-check count at each iteration boundary.
    pub unsatisfied: Vec<usize>,
    /// Posterior LLRs of the final state.
    pub posteriors: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    /// Queue selection: an edge for RBP, a check node for node-wise.
    Select,
    /// Check-to-variable propagation.
    C2v,
    /// Variable-to-check propagation.
    V2c,
}

impl TraceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceKind::Select => "select",
            TraceKind::C2v => "c2v",
            TraceKind::V2c => "v2c",
        }
    }
}

/// One trace record. `value` is the selection key for `Select`, the
/// residual being cleared for `C2v`, and `|new - old|` for `V2c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub step: u64,
    pub kind: TraceKind,
    pub check: usize,
    pub var: Option<usize>,
    pub value: f64,
}

/// Renders a trace as `step,kind,check,var,residual` CSV.
pub fn trace_csv(events: &[TraceEvent]) -> String {
    let mut out = String::from("step,kind,check,var,residual\n");
    for ev in events {
        let var = ev.var.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{:e}\n",
            ev.step,
            ev.kind.as_str(),
            ev.check,
            var,
            ev.value
        ));
    }
    out
}

/// Decodes with the schedule named in `cfg`.
pub fn decode(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &DecodeConfig,
) -> Result<DecodeOutcome, DecodeError> {
    decode_with_trace(graph, channel, cfg, None)
}

pub fn decode_with_trace(
    graph: &TannerGraph,
    channel: &[f64],
    cfg: &DecodeConfig,
    trace: Option<&mut Vec<TraceEvent>>,
) -> Result<DecodeOutcome, DecodeError> {
    let run = Run::new(graph, channel, cfg, trace)?;
    match cfg.schedule {
        ScheduleKind::Flooding => Ok(fixed::flooding(run)),
        ScheduleKind::Lbp => Ok(fixed::layered(run)),
        ScheduleKind::Rbp => Ok(informed::edge_wise(run, false)),
        ScheduleKind::Arbp => Ok(informed::edge_wise(run, true)),
        ScheduleKind::NodeWiseRbp => Ok(informed::node_wise(run, false, 1)),
        ScheduleKind::NodeWiseArbp => Ok(informed::node_wise(run, true, 1)),
        ScheduleKind::ParallelNodeWiseArbp { p } => {
            if p == 0 || p > graph.n_checks() {
                return Err(DecodeError::BatchSize {
                    p,
                    n_checks: graph.n_checks(),
                });
            }
            Ok(informed::node_wise(run, true, p))
        }
    }
}

/// Bookkeeping shared by every schedule.
pub(crate) struct Run<'a> {
    graph: &'a TannerGraph,
    kernel: KernelConfig,
    state: LlrState,
    max_iters: usize,
    syndrome_stop: bool,
    trace: Option<&'a mut Vec<TraceEvent>>,
    step: u64,
    c2v_updates: u64,
    v2c_updates: u64,
    residual_computations: u64,
    iters_run: usize,
    unsatisfied: Vec<usize>,
    bits: Vec<u8>,
    first_success_iter: Option<usize>,
}

impl<'a> Run<'a> {
    fn new(
        graph: &'a TannerGraph,
        channel: &[f64],
        cfg: &DecodeConfig,
        trace: Option<&'a mut Vec<TraceEvent>>,
    ) -> Result<Self, DecodeError> {
        if cfg.max_iters == 0 {
            return Err(DecodeError::ZeroIterations);
        }
        cfg.kernel.validate()?;
        graph.require_check_degree_2()?;
        let state = LlrState::new(graph, channel, &cfg.kernel)?;
        Ok(Run {
            graph,
            kernel: cfg.kernel,
            state,
            max_iters: cfg.max_iters,
            syndrome_stop: cfg.syndrome_stop,
            trace,
            step: 0,
            c2v_updates: 0,
            v2c_updates: 0,
            residual_computations: 0,
            iters_run: 0,
            unsatisfied: Vec::with_capacity(cfg.max_iters),
            bits: Vec::new(),
            first_success_iter: None,
        })
    }

    #[inline]
    fn record(&mut self, kind: TraceKind, check: usize, var: Option<usize>, value: f64) {
        if let Some(trace) = self.trace.as_deref_mut() {
            trace.push(TraceEvent {
                step: self.step,
                kind,
                check,
                var,
                value,
            });
        }
        self.step += 1;
    }

    /// Closes an iteration. Returns `true` when decoding must stop.
    fn boundary(&mut self) -> bool {
        self.iters_run += 1;
        self.bits = kernels::hard_decisions(&self.state, self.graph);
        let unsat = kernels::unsatisfied_checks(&self.bits, self.graph);
        self.unsatisfied.push(unsat);
        if unsat == 0 && self.first_success_iter.is_none() {
            self.first_success_iter = Some(self.iters_run);
        }
        (unsat == 0 && self.syndrome_stop) || self.iters_run >= self.max_iters
    }

    fn finish(self) -> DecodeOutcome {
        let (_, posteriors) = kernels::posterior_and_decide(&self.state, self.graph);
        DecodeOutcome {
            success: self.unsatisfied.last() == Some(&0),
            bits: self.bits,
            first_success_iter: self.first_success_iter,
            c2v_updates: self.c2v_updates,
            v2c_updates: self.v2c_updates,
            residual_computations: self.residual_computations,
            iters_run: self.iters_run,
            unsatisfied: self.unsatisfied,
            posteriors,
        }
    }
}

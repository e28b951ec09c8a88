//! Belief-propagation decoding of LDPC codes under informed dynamic
//! schedules.
//!
//! * [`codes`]: Tanner graphs, QC lifting, alist I/O.
//! * [`channel`]: BPSK/AWGN and channel LLRs.
//! * [`kernels`]: message updates, min-sum, residuals, hard decisions.
//! * [`queue`]: indexed max-heap used for residual ordering.
//! * [`schedules`]: flooding, LBP, RBP/ARBP, node-wise RBP/ARBP and the
//!   parallel node-wise ARBP variant.
//! * [`sim`]: Monte-Carlo FER harness, CSV output and trapping-set
//!   diagnostics.

pub mod channel;
pub mod cli;
pub mod codes;
pub mod kernels;
pub mod queue;
pub mod schedules;
pub mod sim;

pub use codes::{expand_qc, load_alist, write_alist, QcBaseMatrix, TannerGraph};
pub use schedules::{decode, DecodeConfig, DecodeOutcome, ScheduleKind};

//! Command-line front end of the simulator.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::channel::{ChannelParams, SnrConvention};
use crate::codes::{load_code, CodeFormat};
use crate::schedules::{decode_with_trace, trace_csv, DecodeConfig, ScheduleKind};
use crate::sim::{self, design_rate, Experiment};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Alist,
    Qc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Ebno,
    Snr,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Mode {
    /// FER versus iteration cap for every schedule and SNR point.
    Fer,
    /// Trapping-set report: first schedule is the reference, second the
    /// candidate.
    Trapping,
}

/// Monte-Carlo FER simulation of LDPC decoding schedules.
#[derive(Debug, Parser)]
#[command(name = "ldpc-ids-sim", version)]
struct Args {
    /// Parity-check matrix file.
    #[arg(long)]
    code: PathBuf,
    #[arg(long, value_enum, default_value = "qc")]
    code_format: FormatArg,
    /// Comma-separated schedules: flooding, lbp, rbp, arbp, nw-rbp, nw-arbp, pnw-arbp.
    #[arg(long)]
    schedule: String,
    /// Comma-separated dB values, or `start:step:stop`.
    #[arg(long)]
    ebno_db: String,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    /// Minimum frames per point.
    #[arg(long, default_value_t = 1000)]
    frames: u64,
    /// Minimum frame errors at the largest cap before a point stops.
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    /// Frame ceiling per point, reached even if --min-errors is not.
    #[arg(long, default_value_t = 1_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Batch size of pnw-arbp.
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, value_enum, default_value = "ebno")]
    snr_convention: ConventionArg,
    /// Code rate for the Eb/N0 conversion; defaults to 1 - M/N.
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long, value_enum, default_value = "fer")]
    mode: Mode,
    /// Trapping mode: the candidate must succeed in fewer iterations than this.
    #[arg(long, default_value_t = 10)]
    fast_iters: usize,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Writes the update trace of frame 0 of the first schedule and SNR point.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn parse_schedules(text: &str, p: usize) -> Result<Vec<ScheduleKind>, String> {
    let kinds: Vec<ScheduleKind> = text
        .split(',')
        .map(|s| ScheduleKind::parse_with_p(s.trim(), p))
        .collect::<Result<_, _>>()?;
    if kinds.contains(&ScheduleKind::ParallelNodeWiseArbp { p }) && p == 0 {
        return Err("--p must be >= 1 for pnw-arbp".into());
    }
    Ok(kinds)
}

/// `a,b,c` or `start:step:stop` (inclusive, with a small tolerance on stop).
pub fn parse_db_list(text: &str) -> Result<Vec<f64>, String> {
    let bad = || format!("invalid dB list `{text}`");
    if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [start, step, stop] = parts[..] else {
            return Err(bad());
        };
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| start + i as f64 * step).collect());
    }
    let vals: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(vals)
}

/// Bad flag values exit with 2, like clap's own usage errors; failures
/// while loading or simulating exit with 1.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Runtime(msg)
    }
}

fn run(args: Args) -> Result<(), Failure> {
    let schedules = parse_schedules(&args.schedule, args.p).map_err(Failure::Usage)?;
    let ebno_db = parse_db_list(&args.ebno_db).map_err(Failure::Usage)?;
    let format = match args.code_format {
        FormatArg::Alist => CodeFormat::Alist,
        FormatArg::Qc => CodeFormat::Qc,
    };
    let graph = load_code(&args.code, format).map_err(|e| e.to_string())?;
    if graph.component_count() > 1 {
        eprintln!(
            "warning: {} has {} connected components",
            args.code.display(),
            graph.component_count()
        );
    }
    let convention = match args.snr_convention {
        ConventionArg::Ebno => SnrConvention::EbN0,
        ConventionArg::Snr => SnrConvention::EsN0,
    };

    let mut exp = Experiment::new(&graph, schedules, ebno_db, args.max_iters, args.frames);
    exp.min_errors = args.min_errors;
    exp.max_frames = Some(args.max_frames.max(args.frames));
    exp.master_seed = args.seed;
    exp.convention = convention;
    exp.rate = args.rate.unwrap_or_else(|| design_rate(&graph));
    exp.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    if let Some(path) = &args.trace {
        let params = ChannelParams::with_convention(exp.ebno_db[0], exp.rate, convention)
            .map_err(|e| e.to_string())?;
        let cfg = DecodeConfig::new(exp.schedules[0], exp.max_iters);
        let llrs = crate::channel::transmit_all_zero(
            &params,
            graph.n_vars(),
            cfg.kernel.llr_max,
            &mut crate::channel::frame_rng(exp.master_seed, 0),
        );
        let mut events = Vec::new();
        decode_with_trace(&graph, &llrs, &cfg, Some(&mut events)).map_err(|e| e.to_string())?;
        std::fs::write(path, trace_csv(&events)).map_err(|e| format!("{}: {e}", path.display()))?;
    }

    let text = match args.mode {
        Mode::Fer => {
            let records = sim::run_experiment(&graph, &exp).map_err(|e| e.to_string())?;
            sim::emit_csv(&records)
        }
        Mode::Trapping => {
            let [reference, candidate] = exp.schedules[..] else {
                return Err(Failure::Usage(
                    "trapping mode needs exactly two schedules: reference,candidate".into(),
                ));
            };
            let params = ChannelParams::with_convention(exp.ebno_db[0], exp.rate, convention)
                .map_err(|e| e.to_string())?;
            let records = sim::diagnose_trapping(
                &graph,
                &params,
                &DecodeConfig::new(reference, exp.max_iters),
                &DecodeConfig::new(candidate, exp.max_iters),
                exp.min_frames,
                exp.master_seed,
                args.fast_iters,
            )
            .map_err(|e| e.to_string())?;
            sim::trapping_csv(&records)
        }
    };
    std::fs::write(&args.out, text)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", args.out.display())))
}

/// Runs the CLI on `argv` (program name first). Returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(args) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

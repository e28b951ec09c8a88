//! FER table as CSV. Floats are written in Rust's shortest round-trip
//! form, so parsing the output recovers every field exactly.

use super::FerRecord;

pub const HEADER: &str = "schedule,ebno_db,iter_cap,frames,errors,fer,ci_lo,ci_hi";

/// Header plus one row per record, sorted by (schedule, SNR, cap).
pub fn emit_csv(records: &[FerRecord]) -> String {
    let mut sorted: Vec<&FerRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.schedule
            .cmp(&b.schedule)
            .then(a.ebno_db.total_cmp(&b.ebno_db))
            .then(a.iter_cap.cmp(&b.iter_cap))
    });
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in sorted {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.schedule, r.ebno_db, r.iter_cap, r.frames, r.errors, r.fer, r.ci_lo, r.ci_hi
        ));
    }
    out
}

/// Parses output of [`emit_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<FerRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == HEADER => {}
        other => return Err(format!("bad header: {other:?}")),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(format!(
                    "row {}: expected 8 fields, found {}",
                    i + 2,
                    f.len()
                ));
            }
            let bad = |what: &str| format!("row {}: invalid {what}", i + 2);
            Ok(FerRecord {
                schedule: f[0].to_string(),
                ebno_db: f[1].parse().map_err(|_| bad("ebno_db"))?,
                iter_cap: f[2].parse().map_err(|_| bad("iter_cap"))?,
                frames: f[3].parse().map_err(|_| bad("frames"))?,
                errors: f[4].parse().map_err(|_| bad("errors"))?,
                fer: f[5].parse().map_err(|_| bad("fer"))?,
                ci_lo: f[6].parse().map_err(|_| bad("ci_lo"))?,
                ci_hi: f[7].parse().map_err(|_| bad("ci_hi"))?,
            })
        })
        .collect()
}

//! Plot-ready CSV and digests.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::engine::WalkTrace;

/// Frozen column order.
pub const CSV_HEADER: &str = "trial_id,n,displacement,a,b,flag_id,certified";

fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// One row per `(trial, checkpoint)`, trials in id order. Absent fields
/// are empty; floats use the shortest round-trip representation.
pub fn csv_string<S>(traces: &[WalkTrace<S>]) -> String {
    let mut out = String::with_capacity(64 * traces.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for t in traces {
        for c in &t.checkpoints {
            writeln!(out, "{},{},{},{},{},{},{}", t.trial_id, c.n, c.displacement, opt(&c.a), opt(&c.b), opt(&c.flag_id), opt(&c.certified))
                .unwrap();
        }
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::backends::LineBackend;
    use crate::walk::engine::{run_walks, WalkConfig};
    use crate::walk::measure::line_translation;

    #[test]
    fn csv_shape() {
        let t = run_walks(&LineBackend, &line_translation(), &WalkConfig::new(2, 1, 0)).unwrap();
        assert_eq!(csv_string(&t), "trial_id,n,displacement,a,b,flag_id,certified\n0,1,1,,,,\n0,2,2,,,,\n");
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}

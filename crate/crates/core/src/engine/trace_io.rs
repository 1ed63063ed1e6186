//! Line-delimited JSON traces.
//!
//! A trace file holds one `header` line, one `round` line per record and a
//! closing `verdict` line:
//!
//! ```text
//! {"type":"header","seed":7,"node_count":200,"potential":"min_degree",...}
//! {"type":"round","round":0,"span":1,"interactions":19900,"additions":0,"removals":12,"degree_classes":9,"fingerprint":"..."}
//! {"type":"verdict","verdict":{"kind":"stabilized","at":3},"rounds":4,...}
//! ```

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::{RoundRecord, RunTrace, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub seed: u64,
    pub node_count: usize,
    pub potential: String,
    pub scheduler: String,
    /// Engine rounds per modeled time step; round `r` is time `r / rounds_per_step`.
    pub rounds_per_step: u64,
    pub initial_fingerprint: String,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceLine {
    Header(TraceHeader),
    Round(RoundRecord),
    Verdict {
        verdict: Verdict,
        rounds: u64,
        change_rounds: u64,
        total_changes: u64,
        last_change: Option<u64>,
        final_fingerprint: String,
    },
}

pub fn write_trace<W: Write>(trace: &RunTrace, mut w: W) -> Result<()> {
    let header = TraceLine::Header(TraceHeader {
        seed: trace.seed,
        node_count: trace.node_count,
        potential: trace.potential.clone(),
        scheduler: trace.scheduler.clone(),
        rounds_per_step: trace.rounds_per_step,
        initial_fingerprint: trace.initial_fingerprint.clone(),
        metadata: trace.metadata.clone(),
    });
    let mut line = |item: &TraceLine| -> Result<()> {
        serde_json::to_writer(&mut w, item)
            .map_err(|e| Error::input(format!("trace encoding: {e}")))?;
        w.write_all(b"\n")?;
        Ok(())
    };
    line(&header)?;
    for r in &trace.records {
        line(&TraceLine::Round(r.clone()))?;
    }
    line(&TraceLine::Verdict {
        verdict: trace.verdict,
        rounds: trace.rounds,
        change_rounds: trace.change_rounds,
        total_changes: trace.total_changes,
        last_change: trace.last_change,
        final_fingerprint: trace.final_fingerprint.clone(),
    })?;
    w.flush()?;
    Ok(())
}

/// Parses a trace file back into its lines, checking header-first order.
pub fn read_trace<R: Read>(reader: R, source: &str) -> Result<Vec<TraceLine>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item: TraceLine =
            serde_json::from_str(&line).map_err(|e| Error::parse(source, i + 1, e))?;
        if out.is_empty() != matches!(item, TraceLine::Header(_)) {
            return Err(Error::parse(
                source,
                i + 1,
                "the header must be the first and only header line",
            ));
        }
        out.push(item);
    }
    if out.is_empty() {
        return Err(Error::parse(source, 1, "empty trace"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, RunConfig};
    use crate::graph::generators::cycle;
    use crate::potentials::{proper_degree_potential, ProperFunction};
    use crate::schedulers::CompleteScheduler;

    #[test]
    fn round_trip() {
        let p = proper_degree_potential(ProperFunction::named("sum").unwrap(), 4.0, 4.0).unwrap();
        let out = run(
            RunConfig::new(cycle(4).unwrap(), p, Box::new(CompleteScheduler))
                .metadata("note", "c4"),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trace(&out.trace, &mut buf).unwrap();
        let lines = read_trace(buf.as_slice(), "mem").unwrap();
        assert_eq!(lines.len(), out.trace.records.len() + 2);
        match &lines[0] {
            TraceLine::Header(h) => assert_eq!(h.metadata["note"], "c4"),
            _ => panic!("header first"),
        }
        match lines.last().unwrap() {
            TraceLine::Verdict { verdict, .. } => assert_eq!(*verdict, out.trace.verdict),
            _ => panic!("verdict last"),
        }
        // Byte-for-byte determinism.
        let p = proper_degree_potential(ProperFunction::named("sum").unwrap(), 4.0, 4.0).unwrap();
        let again = run(
            RunConfig::new(cycle(4).unwrap(), p, Box::new(CompleteScheduler))
                .metadata("note", "c4"),
        )
        .unwrap();
        let mut buf2 = Vec::new();
        write_trace(&again.trace, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn rejects_headerless() {
        let text = r#"{"type":"verdict","verdict":{"kind":"stabilized","at":0},"rounds":1,"change_rounds":0,"total_changes":0,"last_change":null,"final_fingerprint":"x"}"#;
        assert!(read_trace(text.as_bytes(), "t").is_err());
    }
}

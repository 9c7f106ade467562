//! TREC run file format: `qid Q0 docid rank score tag`, one line per entry.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::corpus::IngestError;

use super::RankedList;

/// Write ranked lists in TREC run format. Lists are emitted in ascending
/// query-id order so output is independent of input order.
pub fn write_trec_run(path: &Path, lists: &[RankedList], tag: &str) -> std::io::Result<()> {
    let mut by_query: BTreeMap<&str, &RankedList> =
        lists.iter().map(|l| (l.query_id.as_str(), l)).collect();
    let mut out = BufWriter::new(File::create(path)?);
    for (qid, list) in by_query.iter_mut() {
        for (rank, (doc_id, score)) in list.entries.iter().enumerate() {
            writeln!(out, "{} Q0 {} {} {:.6} {}", qid, doc_id, rank + 1, score, tag)?;
        }
    }
    out.flush()
}

/// Read a TREC run file back into per-query ranked lists (ascending query id;
/// entries in rank order).
pub fn read_trec_run(path: &Path) -> Result<Vec<RankedList>, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut by_query: BTreeMap<String, Vec<(u64, String, f64)>> = BTreeMap::new();
    let mut tag = String::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| IngestError::Malformed {
            path: path.display().to_string(),
            line: lineno,
            msg: format!("read error: {e}"),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(IngestError::Malformed {
                path: path.display().to_string(),
                line: lineno,
                msg: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let malformed = |msg: String| IngestError::Malformed {
            path: path.display().to_string(),
            line: lineno,
            msg,
        };
        let rank: u64 = fields[3].parse().map_err(|_| malformed(format!("bad rank {:?}", fields[3])))?;
        let score: f64 =
            fields[4].parse().map_err(|_| malformed(format!("bad score {:?}", fields[4])))?;
        tag = fields[5].to_string();
        by_query
            .entry(fields[0].to_string())
            .or_default()
            .push((rank, fields[2].to_string(), score));
    }
    Ok(by_query
        .into_iter()
        .map(|(qid, mut entries)| {
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            RankedList {
                query_id: qid,
                entries: entries.into_iter().map(|(_, d, s)| (d, s)).collect(),
                method: tag.clone(),
            }
        })
        .collect())
}

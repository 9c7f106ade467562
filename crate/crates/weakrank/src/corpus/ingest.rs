//! File ingestion: TREC text corpora, TREC topics, qrels, line-delimited
//! JSON records, and word-embedding text files.
//!
//! All parsers stream line by line and report malformed input with the
//! offending line number.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Malformed { path: String, line: usize, msg: String },
}

/// An untokenized record: id plus raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub id: String,
    pub text: String,
}

/// Gold relevance judgments: query id -> doc id -> grade.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    grades: BTreeMap<String, BTreeMap<String, u32>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, query_id: impl Into<String>, doc_id: impl Into<String>, grade: u32) {
        self.grades.entry(query_id.into()).or_default().insert(doc_id.into(), grade);
    }

    pub fn grade(&self, query_id: &str, doc_id: &str) -> u32 {
        self.grades.get(query_id).and_then(|m| m.get(doc_id)).copied().unwrap_or(0)
    }

    pub fn is_relevant(&self, query_id: &str, doc_id: &str) -> bool {
        self.grade(query_id, doc_id) >= 1
    }

    /// Judged documents for a query (doc id -> grade), if any.
    pub fn judgments(&self, query_id: &str) -> Option<&BTreeMap<String, u32>> {
        self.grades.get(query_id)
    }

    /// Doc ids with grade >= 1 for a query, ascending.
    pub fn relevant_docs(&self, query_id: &str) -> Vec<&str> {
        self.grades
            .get(query_id)
            .map(|m| {
                m.iter().filter(|(_, &g)| g >= 1).map(|(d, _)| d.as_str()).collect()
            })
            .unwrap_or_default()
    }

    pub fn num_relevant(&self, query_id: &str) -> usize {
        self.relevant_docs(query_id).len()
    }

    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.grades.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }
}

fn open(path: &Path) -> Result<BufReader<File>, IngestError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| IngestError::Io { path: path.display().to_string(), source })
}

fn read_line_err(path: &Path, line: usize, source: std::io::Error) -> IngestError {
    IngestError::Malformed {
        path: path.display().to_string(),
        line,
        msg: format!("read error: {source}"),
    }
}

/// Parse a TREC qrels file: `qid iteration docid grade`, whitespace separated.
pub fn read_qrels(path: &Path) -> Result<Qrels, IngestError> {
    let reader = open(path)?;
    let mut qrels = Qrels::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| read_line_err(path, lineno, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(IngestError::Malformed {
                path: path.display().to_string(),
                line: lineno,
                msg: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let grade: u32 = fields[3].parse().map_err(|_| IngestError::Malformed {
            path: path.display().to_string(),
            line: lineno,
            msg: format!("grade must be a non-negative integer, got {:?}", fields[3]),
        })?;
        qrels.insert(fields[0], fields[2], grade);
    }
    Ok(qrels)
}

/// Parse a TREC text corpus: `<DOC>` blocks with `<DOCNO>` and `<TEXT>` tags.
pub fn read_trec_text(path: &Path) -> Result<Vec<RawRecord>, IngestError> {
    let reader = open(path)?;
    let mut records = Vec::new();
    let mut docno: Option<String> = None;
    let mut text = String::new();
    let mut in_doc = false;
    let mut in_text = false;

    let malformed = |line: usize, msg: &str| IngestError::Malformed {
        path: path.display().to_string(),
        line,
        msg: msg.to_string(),
    };

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| read_line_err(path, lineno, e))?;
        let trimmed = line.trim();
        if trimmed == "<DOC>" {
            if in_doc {
                return Err(malformed(lineno, "nested <DOC>"));
            }
            in_doc = true;
            docno = None;
            text.clear();
        } else if trimmed == "</DOC>" {
            if !in_doc {
                return Err(malformed(lineno, "</DOC> outside <DOC>"));
            }
            let id = docno.take().ok_or_else(|| malformed(lineno, "document without <DOCNO>"))?;
            records.push(RawRecord { id, text: text.trim().to_string() });
            in_doc = false;
        } else if let Some(rest) = trimmed.strip_prefix("<DOCNO>") {
            let id = rest.strip_suffix("</DOCNO>").ok_or_else(|| malformed(lineno, "unterminated <DOCNO>"))?;
            docno = Some(id.trim().to_string());
        } else if trimmed == "<TEXT>" {
            in_text = true;
        } else if trimmed == "</TEXT>" {
            in_text = false;
        } else if in_text {
            text.push_str(trimmed);
            text.push(' ');
        }
    }
    if in_doc {
        return Err(IngestError::Malformed {
            path: path.display().to_string(),
            line: 0,
            msg: "unterminated <DOC> at end of file".to_string(),
        });
    }
    Ok(records)
}

/// Parse TREC topics, keeping the `<title>` field as the query text.
/// Accepts both `<num> Number: 301` and `<num>301</num>` forms.
pub fn read_topics(path: &Path) -> Result<Vec<RawRecord>, IngestError> {
    let reader = open(path)?;
    let mut topics = Vec::new();
    let mut num: Option<String> = None;
    let mut title: Option<String> = None;
    let mut in_title = false;

    let mut flush = |num: &mut Option<String>, title: &mut Option<String>, line: usize| {
        match (num.take(), title.take()) {
            (Some(id), Some(text)) => {
                topics.push(RawRecord { id, text: text.trim().to_string() });
                Ok(())
            }
            (None, None) => Ok(()),
            _ => Err(IngestError::Malformed {
                path: path.display().to_string(),
                line,
                msg: "topic missing <num> or <title>".to_string(),
            }),
        }
    };

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| read_line_err(path, lineno, e))?;
        let trimmed = line.trim();
        if trimmed.starts_with("<top>") {
            flush(&mut num, &mut title, lineno)?;
            in_title = false;
        } else if trimmed.starts_with("</top>") {
            flush(&mut num, &mut title, lineno)?;
            in_title = false;
        } else if let Some(rest) = trimmed.strip_prefix("<num>") {
            let rest = rest.trim().trim_start_matches("Number:").trim();
            num = Some(rest.trim_end_matches("</num>").trim().to_string());
            in_title = false;
        } else if let Some(rest) = trimmed.strip_prefix("<title>") {
            let rest = rest.trim_end_matches("</title>").trim();
            title = Some(rest.to_string());
            in_title = rest.is_empty();
        } else if in_title {
            if trimmed.starts_with('<') {
                in_title = false;
            } else {
                let t = title.get_or_insert_with(String::new);
                if !t.is_empty() {
                    t.push(' ');
                }
                t.push_str(trimmed);
            }
        }
    }
    flush(&mut num, &mut title, 0)?;
    Ok(topics)
}

#[derive(Deserialize)]
struct JsonRecord {
    id: String,
    text: String,
}

/// Parse line-delimited JSON records with fields `{id, text}`.
pub fn read_jsonl(path: &Path) -> Result<Vec<RawRecord>, IngestError> {
    let reader = open(path)?;
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| read_line_err(path, lineno, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonRecord =
            serde_json::from_str(&line).map_err(|e| IngestError::Malformed {
                path: path.display().to_string(),
                line: lineno,
                msg: e.to_string(),
            })?;
        records.push(RawRecord { id: rec.id, text: rec.text });
    }
    Ok(records)
}

/// Parse a word-embedding text file: one `term v1 .. vD` per line with the
/// declared dimension `dim`.
pub fn read_embeddings(path: &Path, dim: usize) -> Result<Vec<(String, Vec<f64>)>, IngestError> {
    let reader = open(path)?;
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| read_line_err(path, lineno, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let term = fields.next().expect("non-empty line has a first field").to_string();
        let values: Result<Vec<f64>, _> = fields.map(str::parse::<f64>).collect();
        let values = values.map_err(|e| IngestError::Malformed {
            path: path.display().to_string(),
            line: lineno,
            msg: format!("bad float: {e}"),
        })?;
        if values.len() != dim {
            return Err(IngestError::Malformed {
                path: path.display().to_string(),
                line: lineno,
                msg: format!("expected {dim} floats, got {}", values.len()),
            });
        }
        out.push((term, values));
    }
    Ok(out)
}

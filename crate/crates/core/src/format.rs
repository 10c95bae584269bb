//! JSON Lines files: one header record, then one record per word.
//!
//! ```text
//! {"truncation":2,"alphabet":{"pids":["1"],"labels":["a"],"generators":["s"]}}
//! {"word":[["1","a","s"]],"coeff":"1/2"}
//! ```
//!
//! Simple series use `{"truncation":N,"generators":[...]}` as header and words
//! written as arrays of generator names.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::events::{Alphabet, AlphabetConfig, EventWord, EventsError, Generators, SimpleWord};
use crate::scalar::{self, Scalar};
use crate::series::{LabeledSeries, SimpleSeries};

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing header record")]
    MissingHeader,
    #[error("line {line}: duplicate word, first seen on line {first}")]
    DuplicateWord { line: usize, first: usize },
    #[error("line {line}: duplicate id `{id}`, first seen on line {first}")]
    DuplicateId { line: usize, id: String, first: usize },
    #[error("header has no truncation, so the log cannot be read as a series")]
    MissingTruncation,
    #[error("line {line}: record has no coefficient")]
    MissingCoefficient { line: usize },
    #[error("line {line}: word of length {len} exceeds truncation {truncation}")]
    TooLong { line: usize, len: usize, truncation: usize },
    #[error("expected a {expected} log")]
    WrongKind { expected: &'static str },
}

#[derive(Debug, Clone, PartialEq)]
pub enum LogSpace {
    Labeled(Alphabet),
    Simple(Generators),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogWord {
    Labeled(EventWord),
    Simple(SimpleWord),
}

impl LogWord {
    pub fn len(&self) -> usize {
        match self {
            LogWord::Labeled(w) => w.len(),
            LogWord::Simple(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    /// 1-based source line, 0 for records built in memory.
    pub line: usize,
    pub id: Option<String>,
    pub word: LogWord,
    pub coeff: Option<Scalar>,
}

/// A validated log: either a series table or a bare sequence of words.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    pub truncation: Option<usize>,
    pub space: LogSpace,
    pub records: Vec<LogRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alphabet: Option<AlphabetConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    word: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff: Option<String>,
}

fn line_err(line: usize, e: impl ToString) -> FormatError {
    FormatError::Line {
        line,
        message: e.to_string(),
    }
}

fn parse_word(space: &LogSpace, v: Value, line: usize) -> Result<LogWord, FormatError> {
    match space {
        LogSpace::Labeled(a) => {
            let triples: Vec<[String; 3]> = serde_json::from_value(v).map_err(|e| line_err(line, e))?;
            let w = triples
                .iter()
                .map(|[p, l, s]| a.event(p, l, s))
                .collect::<Result<EventWord, EventsError>>()
                .map_err(|e| line_err(line, e))?;
            Ok(LogWord::Labeled(w))
        }
        LogSpace::Simple(g) => {
            let names: Vec<String> = serde_json::from_value(v).map_err(|e| line_err(line, e))?;
            Ok(LogWord::Simple(g.word(&names).map_err(|e| line_err(line, e))?))
        }
    }
}

fn render_word(space: &LogSpace, w: &LogWord) -> Value {
    match (space, w) {
        (LogSpace::Labeled(a), LogWord::Labeled(w)) => {
            w.letters().iter().map(|e| a.event_names(e).to_vec()).collect::<Vec<_>>().into()
        }
        (LogSpace::Simple(g), LogWord::Simple(w)) => g.render(w).into(),
        _ => unreachable!("records are validated against their log's space"),
    }
}

/// Parse log text; blank lines are skipped, line numbers are 1-based.
pub fn parse_log(text: &str) -> Result<EventLog, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, htext) = lines.next().ok_or(FormatError::MissingHeader)?;
    let header: HeaderDoc = serde_json::from_str(htext).map_err(|e| line_err(hline, e))?;
    let space = match (header.alphabet, header.generators) {
        (Some(a), None) => LogSpace::Labeled(Alphabet::try_from(a).map_err(|e| line_err(hline, e))?),
        (None, Some(g)) => LogSpace::Simple(Generators::new(g).map_err(|e| line_err(hline, e))?),
        _ => {
            return Err(line_err(
                hline,
                "header needs exactly one of `alphabet` or `generators`",
            ))
        }
    };

    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut records = Vec::new();
    for (line, t) in lines {
        let doc: RecordDoc = serde_json::from_str(t).map_err(|e| line_err(line, e))?;
        if let Some(id) = &doc.id {
            if let Some(&first) = ids.get(id) {
                return Err(FormatError::DuplicateId {
                    line,
                    id: id.clone(),
                    first,
                });
            }
            ids.insert(id.clone(), line);
        }
        let word = parse_word(&space, doc.word, line)?;
        let coeff = doc
            .coeff
            .map(|c| scalar::parse(&c).map_err(|e| line_err(line, e)))
            .transpose()?;
        records.push(LogRecord {
            line,
            id: doc.id,
            word,
            coeff,
        });
    }
    Ok(EventLog {
        truncation: header.truncation,
        space,
        records,
    })
}

pub fn ingest(path: impl AsRef<Path>) -> Result<EventLog, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_log(&text)
}

impl EventLog {
    /// Rendered back to JSON Lines, records in stored order.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let header = match &self.space {
            LogSpace::Labeled(a) => HeaderDoc {
                truncation: self.truncation,
                alphabet: Some(AlphabetConfig::from(a)),
                generators: None,
            },
            LogSpace::Simple(g) => HeaderDoc {
                truncation: self.truncation,
                alphabet: None,
                generators: Some(g.names().to_vec()),
            },
        };
        out.push_str(&serde_json::to_string(&header).expect("header serializes"));
        out.push('\n');
        for r in &self.records {
            let doc = RecordDoc {
                id: r.id.clone(),
                word: render_word(&self.space, &r.word),
                coeff: r.coeff.as_ref().map(scalar::format),
            };
            out.push_str(&serde_json::to_string(&doc).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    /// Checks shared by both series readings: truncation present, every record
    /// carries a coefficient, words are distinct and short enough.
    fn series_entries(&self) -> Result<(usize, Vec<(&LogWord, Scalar)>), FormatError> {
        let n = self.truncation.ok_or(FormatError::MissingTruncation)?;
        let mut seen: HashMap<&LogWord, usize> = HashMap::new();
        let mut entries = Vec::with_capacity(self.records.len());
        for r in &self.records {
            let c = r.coeff.clone().ok_or(FormatError::MissingCoefficient { line: r.line })?;
            if r.word.len() > n {
                return Err(FormatError::TooLong {
                    line: r.line,
                    len: r.word.len(),
                    truncation: n,
                });
            }
            if let Some(&first) = seen.get(&r.word) {
                return Err(FormatError::DuplicateWord { line: r.line, first });
            }
            seen.insert(&r.word, r.line);
            entries.push((&r.word, c));
        }
        Ok((n, entries))
    }

    pub fn to_labeled_series(&self) -> Result<LabeledSeries, FormatError> {
        let LogSpace::Labeled(a) = &self.space else {
            return Err(FormatError::WrongKind { expected: "labeled" });
        };
        let (n, entries) = self.series_entries()?;
        let entries = entries.into_iter().map(|(w, c)| match w {
            LogWord::Labeled(w) => (w.clone(), c),
            LogWord::Simple(_) => unreachable!(),
        });
        Ok(LabeledSeries::from_entries_unchecked(a.clone(), n, entries))
    }

    pub fn to_simple_series(&self) -> Result<SimpleSeries, FormatError> {
        let LogSpace::Simple(g) = &self.space else {
            return Err(FormatError::WrongKind { expected: "simple" });
        };
        let (n, entries) = self.series_entries()?;
        let entries = entries.into_iter().map(|(w, c)| match w {
            LogWord::Simple(w) => (w.clone(), c),
            LogWord::Labeled(_) => unreachable!(),
        });
        Ok(SimpleSeries::from_entries_unchecked(g.clone(), n, entries))
    }

    /// Nonzero coefficients in length-lex order.
    pub fn from_labeled_series(p: &LabeledSeries) -> Self {
        Self {
            truncation: Some(p.truncation()),
            space: LogSpace::Labeled(p.space().clone()),
            records: p
                .iter()
                .map(|(w, c)| LogRecord {
                    line: 0,
                    id: None,
                    word: LogWord::Labeled(w.clone()),
                    coeff: Some(c.clone()),
                })
                .collect(),
        }
    }

    pub fn from_simple_series(p: &SimpleSeries) -> Self {
        Self {
            truncation: Some(p.truncation()),
            space: LogSpace::Simple(p.space().clone()),
            records: p
                .iter()
                .map(|(w, c)| LogRecord {
                    line: 0,
                    id: None,
                    word: LogWord::Simple(w.clone()),
                    coeff: Some(c.clone()),
                })
                .collect(),
        }
    }
}

pub fn emit_labeled(p: &LabeledSeries) -> String {
    EventLog::from_labeled_series(p).emit()
}

pub fn emit_simple(p: &SimpleSeries) -> String {
    EventLog::from_simple_series(p).emit()
}

/// Parse either header shape into one of the two series kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Labeled(LabeledSeries),
    Simple(SimpleSeries),
}

pub fn read_series(text: &str) -> Result<AnySeries, FormatError> {
    let log = parse_log(text)?;
    match log.space {
        LogSpace::Labeled(_) => Ok(AnySeries::Labeled(log.to_labeled_series()?)),
        LogSpace::Simple(_) => Ok(AnySeries::Simple(log.to_simple_series()?)),
    }
}

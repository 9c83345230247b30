//! Parsers for the three database export formats, the canonical record
//! file, and the venue category map.

mod category;
mod gs;
mod scopus;
mod wos;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use category::{load_category_map, CategoryEntry, CategoryMap, Quartile};
pub use gs::{parse_byline, parse_gs_dump, Byline};
pub use scopus::parse_scopus_export;
pub use wos::parse_wos_export;

use crate::enrich::LanguageNames;
use crate::error::{Error, Result};
use crate::model::{CitingRecord, SourceDatabase, TypeMapping};

/// A line that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub file: String,
    pub line: u64,
    pub reason: String,
}

/// Output of parsing one export file.
#[derive(Debug, Clone, Default)]
pub struct ParseOutcome {
    pub records: Vec<CitingRecord>,
    pub rejects: Vec<Reject>,
    pub warnings: Vec<String>,
    /// Number of data lines (or rows) seen; always `records + rejects`.
    pub data_lines: usize,
}

impl ParseOutcome {
    pub(crate) fn reject(&mut self, file: &str, line: u64, reason: impl Into<String>) {
        self.rejects.push(Reject {
            file: file.to_string(),
            line,
            reason: reason.into(),
        });
    }
}

/// Lookup tables and defaults shared by the parsers.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Cited document for rows that do not name one themselves.
    pub cited_doc_id: Option<String>,
    pub type_mapping: TypeMapping,
    pub language_names: LanguageNames,
}

impl ParseOptions {
    pub fn for_cited_doc(cited_doc_id: impl Into<String>) -> Self {
        ParseOptions {
            cited_doc_id: Some(cited_doc_id.into()),
            ..Default::default()
        }
    }
}

/// Decodes UTF-8, dropping a leading byte-order mark. The error offset is
/// relative to the start of the file.
pub(crate) fn decode_utf8<'a>(bytes: &'a [u8], name: &str) -> Result<&'a str> {
    let (body, skipped) = match bytes.strip_prefix(b"\xEF\xBB\xBF") {
        Some(rest) => (rest, 3),
        None => (bytes, 0),
    };
    std::str::from_utf8(body).map_err(|e| Error::InvalidUtf8 {
        path: name.to_string(),
        offset: e.valid_up_to() + skipped,
    })
}

pub(crate) fn non_empty(s: Option<&str>) -> Option<&str> {
    s.map(str::trim).filter(|s| !s.is_empty())
}

/// All records from every source, de-duplicated on
/// `(cited_doc_id, record_id)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub records: Vec<CitingRecord>,
    pub cited_docs: BTreeSet<String>,
    pub per_source: BTreeMap<SourceDatabase, usize>,
    /// Records dropped because their key was already present.
    pub duplicates_dropped: usize,
}

impl Corpus {
    pub fn from_records(records: impl IntoIterator<Item = CitingRecord>) -> Self {
        let mut corpus = Corpus::default();
        corpus.extend(records);
        corpus
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CitingRecord>) {
        let mut seen: HashSet<(String, String)> = self
            .records
            .iter()
            .map(|r| (r.cited_doc_id.clone(), r.record_id.clone()))
            .collect();
        for r in records {
            if !seen.insert((r.cited_doc_id.clone(), r.record_id.clone())) {
                self.duplicates_dropped += 1;
                continue;
            }
            self.cited_docs.insert(r.cited_doc_id.clone());
            *self.per_source.entry(r.source).or_default() += 1;
            self.records.push(r);
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records grouped by cited document, in cited-document order.
    pub fn blocks(&self) -> BTreeMap<&str, Vec<&CitingRecord>> {
        let mut blocks: BTreeMap<&str, Vec<&CitingRecord>> = BTreeMap::new();
        for r in &self.records {
            blocks.entry(r.cited_doc_id.as_str()).or_default().push(r);
        }
        blocks
    }
}

/// Writes records as JSON lines in the fixed field order of
/// [`CitingRecord`].
pub fn write_canonical<W: Write>(mut out: W, records: &[CitingRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io("<canonical output>", e))?;
    }
    Ok(())
}

pub fn write_canonical_file(path: &Path, records: &[CitingRecord]) -> Result<()> {
    let mut buf = Vec::new();
    write_canonical(&mut buf, records)?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn read_canonical_file(path: &Path) -> Result<Vec<CitingRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CitingRecord = serde_json::from_str(&line)
            .map_err(|e| Error::validation(format!("{}:{}: {e}", path.display(), n + 1)))?;
        records.push(record);
    }
    Ok(records)
}

/// Writes the `file,line,reason` rejects report.
pub fn write_rejects<W: Write>(out: W, rejects: &[Reject]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["file", "line", "reason"])?;
    for r in rejects {
        w.write_record([r.file.as_str(), &r.line.to_string(), r.reason.as_str()])?;
    }
    w.flush().map_err(|e| Error::io("<rejects>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SourceDatabase::*;

    #[test]
    fn corpus_dedupes_within_cited_doc() {
        let records = vec![
            CitingRecord::new("r1", Wos, "X", "a"),
            CitingRecord::new("r1", Wos, "X", "a again"),
            CitingRecord::new("r1", Wos, "Y", "a"),
        ];
        let corpus = Corpus::from_records(records);
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.duplicates_dropped, 1);
        assert_eq!(corpus.per_source[&Wos], 2);
        assert_eq!(corpus.cited_docs.len(), 2);
        assert!(corpus.records.iter().all(|r| corpus.cited_docs.contains(&r.cited_doc_id)));
    }

    #[test]
    fn utf8_offset_counts_bom() {
        let err = decode_utf8(b"\xEF\xBB\xBFab\xFFc", "f").unwrap_err();
        assert!(matches!(err, Error::InvalidUtf8 { offset: 5, .. }));
        assert_eq!(decode_utf8(b"\xEF\xBB\xBFabc", "f").unwrap(), "abc");
    }

    #[test]
    fn rejects_csv_layout() {
        let mut buf = Vec::new();
        write_rejects(
            &mut buf,
            &[Reject {
                file: "w.txt".into(),
                line: 3,
                reason: "expected 4 fields, found 3".into(),
            }],
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "file,line,reason\nw.txt,3,\"expected 4 fields, found 3\"\n");
    }
}

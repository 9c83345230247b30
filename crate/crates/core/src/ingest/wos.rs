//! Web of Science tab-delimited exports.
//!
//! Lines are split on tabs with no quoting rules at all: a `"` is ordinary
//! title text. Generic CSV readers choke on these files for exactly that
//! reason.

use super::{decode_utf8, non_empty, ParseOptions, ParseOutcome};
use crate::error::Result;
use crate::model::{normalize_doi, CitingRecord, SourceDatabase};

/// Tag naming the cited document on each row, when the export carries one.
pub const CITED_DOC_TAG: &str = "CD";

pub fn parse_wos_export(bytes: &[u8], name: &str, opts: &ParseOptions) -> Result<ParseOutcome> {
    let text = decode_utf8(bytes, name)?;
    let mut out = ParseOutcome::default();
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));

    let Some(header) = lines.next() else {
        return Ok(out);
    };
    let tags: Vec<&str> = header.split('\t').map(str::trim).collect();
    let col = |tag: &str| tags.iter().position(|t| *t == tag);
    let [ut, ti, au, py, di, dt, la, tc, so, cd] =
        ["UT", "TI", "AU", "PY", "DI", "DT", "LA", "TC", "SO", CITED_DOC_TAG].map(col);

    for (idx, line) in lines.enumerate() {
        let line_no = idx as u64 + 2;
        if line.is_empty() {
            continue;
        }
        out.data_lines += 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != tags.len() {
            out.reject(
                name,
                line_no,
                format!("expected {} fields, found {}", tags.len(), fields.len()),
            );
            continue;
        }
        let get = |c: Option<usize>| non_empty(c.map(|i| fields[i]));

        let Some(record_id) = get(ut) else {
            out.reject(name, line_no, "missing UT");
            continue;
        };
        let Some(cited) = get(cd).or(opts.cited_doc_id.as_deref()) else {
            out.reject(name, line_no, "no cited document id");
            continue;
        };

        let mut r = CitingRecord::new(record_id, SourceDatabase::Wos, cited, get(ti).unwrap_or(""));
        if let Some(authors) = get(au) {
            r.set_authors(
                authors
                    .split(';')
                    .map(str::trim)
                    .filter(|a| !a.is_empty())
                    .map(String::from)
                    .collect(),
            );
        }
        r.year = get(py).and_then(|y| y.parse().ok());
        r.doi = get(di).and_then(normalize_doi);
        r.doc_type_raw = get(dt).map(String::from);
        r.doc_type = opts.type_mapping.classify(r.doc_type_raw.as_deref());
        if let Some(lang) = get(la) {
            r.language = opts.language_names.to_iso(lang);
            if r.language.is_none() {
                out.warnings.push(format!("{name}:{line_no}: unmapped WoS language {lang:?}"));
            }
        }
        r.citation_count = get(tc).and_then(|c| c.parse().ok());
        r.venue = get(so).map(String::from);
        out.records.push(r);
    }
    Ok(out)
}

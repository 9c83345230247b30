//! Scopus CSV exports (RFC 4180).

use std::sync::OnceLock;

use regex::Regex;

use super::{decode_utf8, non_empty, ParseOptions, ParseOutcome};
use crate::error::{Error, Result};
use crate::model::{normalize_doi, CitingRecord, SourceDatabase};

/// Column naming the cited document on each row, when present.
pub const CITED_DOC_COLUMN: &str = "Cited document";

/// Scopus writes authors as `Family I.J.`; turn that into `Family, I.J.`
/// so the family name is found by the comma rule.
fn scopus_author(raw: &str) -> String {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"^(.*\S)\s+((?:\p{Lu}\.\s*-?)+)$").unwrap());
    match re.captures(raw) {
        Some(c) => format!("{}, {}", &c[1], c[2].trim()),
        None => raw.to_string(),
    }
}

fn split_authors(raw: &str) -> Vec<String> {
    let sep = if raw.contains(';') { ';' } else { ',' };
    raw.split(sep)
        .map(str::trim)
        .filter(|a| !a.is_empty() && *a != "[No author name available]")
        .map(scopus_author)
        .collect()
}

pub fn parse_scopus_export(bytes: &[u8], name: &str, opts: &ParseOptions) -> Result<ParseOutcome> {
    let text = decode_utf8(bytes, name)?;
    let mut out = ParseOutcome::default();
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());

    let malformed = |e: csv::Error| {
        let row = e.position().map(|p| p.line()).unwrap_or(0);
        Error::MalformedCsv {
            path: name.to_string(),
            row,
            message: e.to_string(),
        }
    };
    let headers = rdr.headers().map_err(malformed)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Ok(out);
    }
    let col = |h: &str| headers.iter().position(|x| x.trim().eq_ignore_ascii_case(h));
    let [title, authors, year, doi, venue, dtype, cited_by, eid, link, cited_doc] = [
        "Title",
        "Authors",
        "Year",
        "DOI",
        "Source title",
        "Document Type",
        "Cited by",
        "EID",
        "Link",
        CITED_DOC_COLUMN,
    ]
    .map(col);
    if cited_by.is_none() {
        out.warnings.push(format!("{name}: no \"Cited by\" column; citation counts absent"));
    }

    for row in rdr.records() {
        let row = row.map_err(malformed)?;
        let line_no = row.position().map(|p| p.line()).unwrap_or(0);
        out.data_lines += 1;
        let get = |c: Option<usize>| non_empty(c.and_then(|i| row.get(i)));

        let (Some(t), Some(id)) = (get(title), get(eid)) else {
            out.reject(name, line_no, "missing Title or EID");
            continue;
        };
        let Some(cited) = get(cited_doc).or(opts.cited_doc_id.as_deref()) else {
            out.reject(name, line_no, "no cited document id");
            continue;
        };
        let mut r = CitingRecord::new(id, SourceDatabase::Scopus, cited, t);
        if let Some(a) = get(authors) {
            r.set_authors(split_authors(a));
        }
        r.year = get(year).and_then(|y| y.parse().ok());
        r.doi = get(doi).and_then(normalize_doi);
        r.venue = get(venue).map(String::from);
        r.doc_type_raw = get(dtype).map(String::from);
        r.doc_type = opts.type_mapping.classify(r.doc_type_raw.as_deref());
        r.citation_count = get(cited_by).and_then(|c| c.parse().ok());
        r.url = get(link).map(String::from);
        out.records.push(r);
    }
    Ok(out)
}

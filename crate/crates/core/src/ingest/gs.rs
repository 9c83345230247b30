//! Google Scholar result dumps, one JSON object per line.

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use regex::Regex;
use serde::Deserialize;

use super::{decode_utf8, non_empty, ParseOptions, ParseOutcome};
use crate::error::Result;
use crate::model::{normalize_doi, CitingRecord, SourceDatabase};

#[derive(Debug, Deserialize)]
struct GsEntry {
    title: String,
    cluster_id: String,
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    byline: Option<String>,
    #[serde(default)]
    year: Option<i32>,
    #[serde(default)]
    cites: Option<u64>,
    #[serde(default)]
    #[allow(dead_code)]
    versions: Option<u64>,
    #[serde(default)]
    doi: Option<String>,
    #[serde(default)]
    meta: Option<BTreeMap<String, serde_json::Value>>,
    #[serde(default)]
    cited_doc_id: Option<String>,
}

/// Pieces of a result byline such as
/// `A Smith, B Jones - Nature, 2010 - nature.com`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct Byline {
    pub authors: Vec<String>,
    pub venue: Option<String>,
    pub year: Option<i32>,
    pub host: Option<String>,
}

fn strip_ellipsis(s: &str) -> &str {
    s.trim().trim_end_matches('…').trim_end_matches("...").trim()
}

fn looks_like_host(s: &str) -> bool {
    !s.contains(' ') && s.contains('.') && s.chars().any(|c| c.is_alphabetic())
}

fn venue_and_year(middle: &str) -> (Option<String>, Option<i32>) {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"^(?:(.*?)[,\s]\s*)?((?:1[5-9]|20)\d{2})$").unwrap());
    let middle = middle.trim();
    match re.captures(middle) {
        Some(c) => {
            let venue = c.get(1).map(|m| strip_ellipsis(m.as_str())).filter(|v| !v.is_empty());
            (venue.map(String::from), c[2].parse().ok())
        }
        None => {
            let venue = strip_ellipsis(middle);
            ((!venue.is_empty()).then(|| venue.to_string()), None)
        }
    }
}

/// Splits a byline into authors, venue, year and host.
///
/// Segments are separated by `" - "`. The first is the author list; with
/// three or more segments the last is the host and everything between is
/// `venue, year`. Truncation marks (`…`) are dropped.
pub fn parse_byline(raw: &str) -> Byline {
    let text = raw.replace('\u{a0}', " ");
    let segments: Vec<&str> = text.split(" - ").collect();
    let mut out = Byline {
        authors: segments[0]
            .split(',')
            .map(strip_ellipsis)
            .filter(|a| !a.is_empty())
            .map(String::from)
            .collect(),
        ..Default::default()
    };
    let middle = match segments.len() {
        0 | 1 => None,
        2 if looks_like_host(segments[1].trim()) => {
            out.host = Some(segments[1].trim().to_string());
            None
        }
        2 => Some(segments[1].to_string()),
        n => {
            out.host = non_empty(Some(segments[n - 1])).map(String::from);
            Some(segments[1..n - 1].join(" - "))
        }
    };
    if let Some(m) = middle {
        (out.venue, out.year) = venue_and_year(&m);
    }
    out
}

fn meta_str<'a>(meta: &'a BTreeMap<String, serde_json::Value>, key: &str) -> Option<&'a str> {
    meta.get(key).and_then(|v| v.as_str()).map(str::trim).filter(|s| !s.is_empty())
}

/// Type hint implied by which citation meta tags a landing page carried.
fn meta_type(meta: &BTreeMap<String, serde_json::Value>) -> Option<&'static str> {
    const HINTS: [(&str, &str); 6] = [
        ("citation_dissertation_institution", "thesis"),
        ("citation_conference_title", "conference paper"),
        ("citation_inbook_title", "book chapter"),
        ("citation_book_title", "book chapter"),
        ("citation_technical_report_institution", "report"),
        ("citation_journal_title", "article"),
    ];
    HINTS.iter().find(|(k, _)| meta_str(meta, k).is_some()).map(|(_, t)| *t)
}

pub fn parse_gs_dump(bytes: &[u8], name: &str, opts: &ParseOptions) -> Result<ParseOutcome> {
    let text = decode_utf8(bytes, name)?;
    let mut out = ParseOutcome::default();
    let mut seen: HashSet<(String, String)> = HashSet::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        out.data_lines += 1;
        let entry: GsEntry = match serde_json::from_str(line) {
            Ok(e) => e,
            Err(e) => {
                out.reject(name, line_no, format!("invalid JSON: {e}"));
                continue;
            }
        };
        let Some(cited) = non_empty(entry.cited_doc_id.as_deref()).or(opts.cited_doc_id.as_deref()) else {
            out.reject(name, line_no, "no cited document id");
            continue;
        };
        if entry.cluster_id.trim().is_empty() {
            out.reject(name, line_no, "empty cluster_id");
            continue;
        }
        if !seen.insert((cited.to_string(), entry.cluster_id.clone())) {
            out.warnings.push(format!("{name}:{line_no}: duplicate cluster_id {} ignored", entry.cluster_id));
            out.reject(name, line_no, format!("duplicate cluster_id {}", entry.cluster_id));
            continue;
        }

        let empty = BTreeMap::new();
        let meta = entry.meta.as_ref().unwrap_or(&empty);
        let mut r = CitingRecord::new(entry.cluster_id.trim(), SourceDatabase::Gs, cited, entry.title);
        let byline = entry.byline.as_deref().map(parse_byline).unwrap_or_default();
        r.set_authors(byline.authors);
        r.year = entry.year.or(byline.year);
        r.venue = byline.venue.or_else(|| meta_str(meta, "citation_journal_title").map(String::from));
        r.doi = entry
            .doi
            .as_deref()
            .and_then(normalize_doi)
            .or_else(|| meta_str(meta, "citation_doi").and_then(normalize_doi));
        r.url = non_empty(entry.url.as_deref()).map(String::from);
        r.citation_count = entry.cites;
        r.language = meta_str(meta, "citation_language").and_then(|l| opts.language_names.to_iso(l));
        r.doc_type_raw = meta_type(meta).map(String::from);
        r.doc_type = opts.type_mapping.classify(r.doc_type_raw.as_deref());
        out.records.push(r);
    }
    Ok(out)
}

//! Domain types shared by every stage and the normalization primitives used
//! to compare records coming from different databases.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// The three bibliographic databases a citation can come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SourceDatabase {
    Gs,
    Wos,
    Scopus,
}

impl SourceDatabase {
    pub const ALL: [SourceDatabase; 3] = [SourceDatabase::Gs, SourceDatabase::Wos, SourceDatabase::Scopus];

    pub fn as_str(self) -> &'static str {
        match self {
            SourceDatabase::Gs => "GS",
            SourceDatabase::Wos => "WOS",
            SourceDatabase::Scopus => "SCOPUS",
        }
    }

    /// Lowercase name used for file names.
    pub fn slug(self) -> &'static str {
        match self {
            SourceDatabase::Gs => "gs",
            SourceDatabase::Wos => "wos",
            SourceDatabase::Scopus => "scopus",
        }
    }

    pub(crate) fn bit(self) -> u8 {
        match self {
            SourceDatabase::Gs => 1,
            SourceDatabase::Wos => 2,
            SourceDatabase::Scopus => 4,
        }
    }
}

impl fmt::Display for SourceDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceDatabase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "GS" => Ok(SourceDatabase::Gs),
            "WOS" => Ok(SourceDatabase::Wos),
            "SCOPUS" => Ok(SourceDatabase::Scopus),
            other => Err(Error::validation(format!("unknown source database {other:?}"))),
        }
    }
}

/// Document type categories used for every distribution table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "UPPERCASE")]
pub enum DocumentType {
    Journal,
    Conference,
    Book,
    Thesis,
    Unpublished,
    Other,
    #[default]
    Unknown,
}

impl DocumentType {
    pub const ALL: [DocumentType; 7] = [
        DocumentType::Journal,
        DocumentType::Conference,
        DocumentType::Book,
        DocumentType::Thesis,
        DocumentType::Unpublished,
        DocumentType::Other,
        DocumentType::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DocumentType::Journal => "JOURNAL",
            DocumentType::Conference => "CONFERENCE",
            DocumentType::Book => "BOOK",
            DocumentType::Thesis => "THESIS",
            DocumentType::Unpublished => "UNPUBLISHED",
            DocumentType::Other => "OTHER",
            DocumentType::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for DocumentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocumentType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        DocumentType::ALL
            .into_iter()
            .find(|t| t.as_str() == upper)
            .ok_or_else(|| Error::validation(format!("unknown document type {s:?}")))
    }
}

/// One citing document as reported by one source database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitingRecord {
    pub record_id: String,
    pub source: SourceDatabase,
    pub cited_doc_id: String,
    pub title_raw: String,
    pub title_norm: String,
    pub authors: Vec<String>,
    pub first_author_key: String,
    pub year: Option<i32>,
    pub venue: Option<String>,
    pub doi: Option<String>,
    pub url: Option<String>,
    pub doc_type_raw: Option<String>,
    pub doc_type: DocumentType,
    pub language: Option<String>,
    pub citation_count: Option<u64>,
}

impl CitingRecord {
    /// Builds a record with the derived fields (`title_norm`,
    /// `first_author_key`) filled in; everything optional starts absent.
    pub fn new(
        record_id: impl Into<String>,
        source: SourceDatabase,
        cited_doc_id: impl Into<String>,
        title_raw: impl Into<String>,
    ) -> Self {
        let title_raw = title_raw.into();
        CitingRecord {
            record_id: record_id.into(),
            source,
            cited_doc_id: cited_doc_id.into(),
            title_norm: normalize_title(&title_raw),
            title_raw,
            authors: Vec::new(),
            first_author_key: String::new(),
            year: None,
            venue: None,
            doi: None,
            url: None,
            doc_type_raw: None,
            doc_type: DocumentType::Unknown,
            language: None,
            citation_count: None,
        }
    }

    pub fn with_authors(mut self, authors: Vec<String>) -> Self {
        self.set_authors(authors);
        self
    }

    pub fn with_doi(mut self, doi: &str) -> Self {
        self.doi = normalize_doi(doi);
        self
    }

    pub fn set_authors(&mut self, authors: Vec<String>) {
        self.first_author_key = authors.first().map(|a| normalize_person(a)).unwrap_or_default();
        self.authors = authors;
    }

    pub fn set_title(&mut self, title_raw: String) {
        self.title_norm = normalize_title(&title_raw);
        self.title_raw = title_raw;
    }

    /// Length of the normalized title in characters.
    pub fn title_len(&self) -> usize {
        self.title_norm.chars().count()
    }
}

/// Thresholds for accepting a title-based match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchPolicy {
    pub high_sim_threshold: f64,
    pub low_sim_threshold: f64,
    pub min_title_len: usize,
}

impl Default for MatchPolicy {
    fn default() -> Self {
        MatchPolicy {
            high_sim_threshold: 0.8,
            low_sim_threshold: 0.7,
            min_title_len: 30,
        }
    }
}

impl MatchPolicy {
    pub fn new(high_sim_threshold: f64, low_sim_threshold: f64, min_title_len: usize) -> Result<Self> {
        let policy = MatchPolicy {
            high_sim_threshold,
            low_sim_threshold,
            min_title_len,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.low_sim_threshold > 0.0
            && self.low_sim_threshold <= self.high_sim_threshold
            && self.high_sim_threshold <= 1.0;
        if !ok {
            return Err(Error::validation(format!(
                "match policy requires 0 < low_sim_threshold <= high_sim_threshold <= 1, got low={} high={}",
                self.low_sim_threshold, self.high_sim_threshold
            )));
        }
        if self.min_title_len < 1 {
            return Err(Error::validation("min_title_len must be at least 1"));
        }
        Ok(())
    }
}

fn doi_prefix_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)^(?:https?://)?(?:www\.)?(?:dx\.)?doi\.org/").unwrap())
}

fn doi_label_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)^doi:\s*").unwrap())
}

pub(crate) fn doi_grammar_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^10\.[0-9]{1,9}/\S+$").unwrap())
}

/// Normalizes a DOI to its lowercase `10.<registrant>/<suffix>` form.
///
/// Resolver URL prefixes and a `doi:` label are stripped. Returns `None`
/// when what remains does not look like a DOI.
pub fn normalize_doi(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    let without_url = doi_prefix_re().replace(trimmed, "");
    let without_label = doi_label_re().replace(&without_url, "");
    let lowered = without_label.trim().to_lowercase();
    doi_grammar_re().is_match(&lowered).then_some(lowered)
}

/// Canonical title form used for similarity: NFKC, lowercase, punctuation
/// replaced by spaces, whitespace collapsed.
pub fn normalize_title(raw: &str) -> String {
    static PUNCT: OnceLock<Regex> = OnceLock::new();
    let punct = PUNCT.get_or_init(|| Regex::new(r"\p{P}").unwrap());
    let folded: String = raw.nfkc().collect::<String>().to_lowercase().nfkc().collect();
    let spaced = punct.replace_all(&folded, " ");
    spaced.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Family-name key for an author string in `Family, Given` or
/// `Given Family` form.
pub fn normalize_person(raw: &str) -> String {
    let raw = raw.trim();
    let family = match raw.split_once(',') {
        Some((family, _)) => family,
        None => raw.split_whitespace().last().unwrap_or(""),
    };
    let stripped: String = family.nfd().filter(|c| !is_combining_mark(*c)).collect();
    stripped
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Case-insensitive table from source-supplied type strings to
/// [`DocumentType`].
#[derive(Debug, Clone)]
pub struct TypeMapping {
    table: HashMap<String, DocumentType>,
}

const DEFAULT_TYPE_TABLE: &str = include_str!("../data/doc_types.csv");

impl Default for TypeMapping {
    fn default() -> Self {
        TypeMapping::from_csv_reader(DEFAULT_TYPE_TABLE.as_bytes()).expect("bundled type table is valid")
    }
}

impl TypeMapping {
    /// Reads a `raw_type,canonical_type` CSV (header row required).
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let mut table = HashMap::new();
        for row in rdr.records() {
            let row = row?;
            let raw = row.get(0).unwrap_or_default();
            let canonical = row.get(1).unwrap_or_default();
            let doc_type: DocumentType = canonical.parse()?;
            table.insert(raw.to_lowercase(), doc_type);
        }
        Ok(TypeMapping { table })
    }

    pub fn insert(&mut self, raw: &str, doc_type: DocumentType) {
        self.table.insert(raw.trim().to_lowercase(), doc_type);
    }

    /// Looks up the whole string, then each `;`-separated part in order
    /// (WoS joins multiple types, e.g. `Article; Proceedings Paper`).
    pub fn classify(&self, raw: Option<&str>) -> DocumentType {
        let Some(raw) = raw else {
            return DocumentType::Unknown;
        };
        let lookup = |s: &str| self.table.get(&s.trim().to_lowercase()).copied();
        lookup(raw)
            .or_else(|| raw.split(';').find_map(lookup))
            .unwrap_or(DocumentType::Unknown)
    }
}

/// Classifies with the bundled mapping table.
pub fn classify_doc_type(raw: Option<&str>) -> DocumentType {
    static DEFAULT: OnceLock<TypeMapping> = OnceLock::new();
    DEFAULT.get_or_init(TypeMapping::default).classify(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn doi_examples() {
        assert_eq!(
            normalize_doi("https://doi.org/10.1007/S11192-012-0729-2").as_deref(),
            Some("10.1007/s11192-012-0729-2")
        );
        assert_eq!(normalize_doi("  10.1002/asi.23056 ").as_deref(), Some("10.1002/asi.23056"));
        assert_eq!(normalize_doi("not-a-doi"), None);
        assert_eq!(normalize_doi("doi: 10.7717/PeerJ.183").as_deref(), Some("10.7717/peerj.183"));
        assert_eq!(normalize_doi("http://dx.doi.org/10.1145/363958.363994").as_deref(), Some("10.1145/363958.363994"));
        assert_eq!(normalize_doi("10.1002/"), None);
        assert_eq!(normalize_doi("10.1002/a b"), None);
        assert_eq!(normalize_doi(""), None);
    }

    #[test]
    fn title_examples() {
        assert_eq!(normalize_title("Introduction to Informetrics"), "introduction to informetrics");
        assert_eq!(normalize_title("  A\u{2014}B:  c "), "a b c");
        assert_eq!(normalize_title(""), "");
        assert_eq!(normalize_title("Ｆｕｌｌｗｉｄｔｈ—title"), "fullwidth title");
    }

    #[test]
    fn person_examples() {
        assert_eq!(normalize_person("Delgado López-Cózar, E."), "delgado lopez-cozar");
        assert_eq!(normalize_person("Mike Thelwall"), "thelwall");
        assert_eq!(normalize_person(""), "");
        assert_eq!(normalize_person("A Martín-Martín"), "martin-martin");
    }

    #[test]
    fn doc_type_examples() {
        assert_eq!(classify_doc_type(Some("Review")), DocumentType::Journal);
        assert_eq!(classify_doc_type(Some("Proceedings Paper")), DocumentType::Conference);
        assert_eq!(classify_doc_type(Some("zzz-unrecognized")), DocumentType::Unknown);
        assert_eq!(classify_doc_type(None), DocumentType::Unknown);
        assert_eq!(classify_doc_type(Some("  BOOK chapter ")), DocumentType::Book);
    }

    #[test]
    fn custom_type_table() {
        let csv = "raw_type,canonical_type\nArtículo,JOURNAL\ntesis,THESIS\n";
        let mapping = TypeMapping::from_csv_reader(csv.as_bytes()).unwrap();
        assert_eq!(mapping.classify(Some("artículo")), DocumentType::Journal);
        assert_eq!(mapping.classify(Some("article")), DocumentType::Unknown);
        let bad = "raw_type,canonical_type\nx,NOPE\n";
        assert!(TypeMapping::from_csv_reader(bad.as_bytes()).is_err());
    }

    #[test]
    fn policy_validation() {
        assert!(MatchPolicy::default().validate().is_ok());
        assert!(MatchPolicy::new(1.01, 0.7, 30).is_err());
        assert!(MatchPolicy::new(0.6, 0.7, 30).is_err());
        assert!(MatchPolicy::new(0.8, 0.0, 30).is_err());
        assert!(MatchPolicy::new(0.8, 0.7, 0).is_err());
        assert!(MatchPolicy::new(0.7, 0.7, 1).is_ok());
    }

    #[test]
    fn enum_round_trips() {
        for t in DocumentType::ALL {
            assert_eq!(t.as_str().parse::<DocumentType>().unwrap(), t);
        }
        for s in SourceDatabase::ALL {
            assert_eq!(s.as_str().parse::<SourceDatabase>().unwrap(), s);
        }
    }

    proptest! {
        #[test]
        fn doi_idempotent(raw in "(https://doi.org/|doi:| )?10\\.[0-9]{1,6}/[A-Za-z0-9./_-]{1,12}|\\PC{0,20}") {
            if let Some(once) = normalize_doi(&raw) {
                prop_assert_eq!(normalize_doi(&once), Some(once.clone()));
            }
        }

        #[test]
        fn title_idempotent_and_clean(raw in "\\PC{0,40}") {
            let once = normalize_title(&raw);
            prop_assert_eq!(normalize_title(&once), once.clone());
            prop_assert!(!once.contains("  "));
            prop_assert_eq!(once.trim(), once.as_str());
        }
    }
}

//! Language identification: metadata first, then the WoS language field,
//! then a title detector.
//!
//! The detector decides non-Latin scripts by character counts and Latin
//! scripts by weighted stopword hits. A title whose best profile does not
//! beat the runner-up by the configured margin is left unidentified.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;

use crate::error::Result;
use crate::model::CitingRecord;

const DEFAULT_NAMES: &str = include_str!("../../data/wos_languages.csv");
const DEFAULT_PROFILES: &str = include_str!("../../data/language_profiles.csv");

/// Language names (as WoS writes them) to ISO 639-1 codes.
#[derive(Debug, Clone)]
pub struct LanguageNames {
    by_name: HashMap<String, String>,
    codes: HashSet<String>,
}

impl Default for LanguageNames {
    fn default() -> Self {
        LanguageNames::from_csv_reader(DEFAULT_NAMES.as_bytes()).expect("bundled language table is valid")
    }
}

impl LanguageNames {
    /// Reads a `name,iso` CSV with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut by_name = HashMap::new();
        let mut codes = HashSet::new();
        for row in rdr.records() {
            let row = row?;
            let (name, iso) = (row.get(0).unwrap_or(""), row.get(1).unwrap_or(""));
            if name.is_empty() || iso.is_empty() {
                continue;
            }
            by_name.insert(name.to_lowercase(), iso.to_lowercase());
            codes.insert(iso.to_lowercase());
        }
        Ok(LanguageNames { by_name, codes })
    }

    /// Maps a language name or code (`Spanish`, `es`, `en-US`) to its ISO
    /// code. Unknown values give `None`.
    pub fn to_iso(&self, raw: &str) -> Option<String> {
        let key = raw.trim().to_lowercase();
        if let Some(code) = self.by_name.get(&key) {
            return Some(code.clone());
        }
        let primary = key.split(['-', '_']).next().unwrap_or("");
        self.codes.contains(primary).then(|| primary.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Script {
    Han,
    Kana,
    Hangul,
    Cyrillic,
    Other,
}

fn script_of(c: char) -> Script {
    match c as u32 {
        0x3040..=0x30FF | 0x31F0..=0x31FF | 0xFF66..=0xFF9D => Script::Kana,
        0x1100..=0x11FF | 0x3130..=0x318F | 0xAC00..=0xD7AF => Script::Hangul,
        0x3400..=0x4DBF | 0x4E00..=0x9FFF | 0xF900..=0xFAFF | 0x20000..=0x2A6DF => Script::Han,
        0x0400..=0x052F => Script::Cyrillic,
        _ => Script::Other,
    }
}

/// Title-based language detector.
#[derive(Debug, Clone)]
pub struct LanguageDetector {
    word_langs: HashMap<String, Vec<String>>,
    /// Minimum `(best - second) / best` stopword score margin.
    pub confidence_floor: f64,
}

impl Default for LanguageDetector {
    fn default() -> Self {
        LanguageDetector::from_csv_reader(DEFAULT_PROFILES.as_bytes()).expect("bundled profiles are valid")
    }
}

impl LanguageDetector {
    pub const DEFAULT_CONFIDENCE_FLOOR: f64 = 0.65;

    /// Reads a `lang,word` stopword-profile CSV with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut word_langs: HashMap<String, Vec<String>> = HashMap::new();
        for row in rdr.records() {
            let row = row?;
            let (lang, word) = (row.get(0).unwrap_or(""), row.get(1).unwrap_or(""));
            if lang.is_empty() || word.is_empty() {
                continue;
            }
            let langs = word_langs.entry(word.to_lowercase()).or_default();
            if !langs.iter().any(|l| l == lang) {
                langs.push(lang.to_lowercase());
            }
        }
        Ok(LanguageDetector {
            word_langs,
            confidence_floor: Self::DEFAULT_CONFIDENCE_FLOOR,
        })
    }

    /// Detects the language of a normalized title.
    pub fn detect(&self, title: &str) -> Option<String> {
        let mut counts = [0usize; 5];
        let mut letters = 0usize;
        for c in title.chars().filter(|c| c.is_alphabetic()) {
            letters += 1;
            counts[script_of(c) as usize] += 1;
        }
        if letters == 0 {
            return None;
        }
        if counts[Script::Kana as usize] > 0 {
            return Some("ja".into());
        }
        if counts[Script::Hangul as usize] > 0 {
            return Some("ko".into());
        }
        if counts[Script::Han as usize] * 2 >= letters {
            return Some("zh".into());
        }
        if counts[Script::Cyrillic as usize] * 2 >= letters {
            return Some("ru".into());
        }

        let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
        for token in title.split_whitespace() {
            if let Some(langs) = self.word_langs.get(token) {
                let weight = 1.0 / langs.len() as f64;
                for l in langs {
                    *scores.entry(l.as_str()).or_default() += weight;
                }
            }
        }
        let mut ranked: Vec<(&str, f64)> = scores.into_iter().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(b.0)));
        let (best_lang, best) = *ranked.first()?;
        let second = ranked.get(1).map_or(0.0, |r| r.1);
        let margin = (best - second) / best;
        (margin >= self.confidence_floor).then(|| best_lang.to_string())
    }
}

/// Metadata language, WoS language and title detector, in that order.
#[derive(Debug, Clone, Default)]
pub struct LanguageCascade {
    pub names: LanguageNames,
    pub detector: LanguageDetector,
}

impl LanguageCascade {
    /// `record.language` is treated as metadata-supplied; `wos_lang` is the
    /// WoS language name for the same document, if any.
    pub fn detect(&self, record: &CitingRecord, wos_lang: Option<&str>) -> Option<String> {
        if let Some(lang) = record.language.as_deref().filter(|l| !l.is_empty()) {
            return Some(lang.to_string());
        }
        if let Some(code) = wos_lang.and_then(|w| self.names.to_iso(w)) {
            return Some(code);
        }
        self.detector.detect(&record.title_norm)
    }
}

/// [`LanguageCascade::detect`] with the bundled tables.
pub fn detect_language(record: &CitingRecord, wos_lang: Option<&str>) -> Option<String> {
    static DEFAULT: std::sync::OnceLock<LanguageCascade> = std::sync::OnceLock::new();
    DEFAULT.get_or_init(LanguageCascade::default).detect(record, wos_lang)
}

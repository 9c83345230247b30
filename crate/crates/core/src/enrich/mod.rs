//! Filling in missing DOIs, types and languages, and the unknown-type
//! correction procedure.

mod correction;
mod doi;
mod language;
mod resolver;
mod sample;

pub use correction::{apply_correction, correct_distribution, TypeDistribution};
pub use doi::extract_doi_from_url;
pub use language::{detect_language, LanguageCascade, LanguageDetector, LanguageNames};
pub use resolver::{
    HttpResponse, RateLimiter, ResolvedMetadata, Resolver, ResolverCache, ResolverConfig, ResolverKey, Transport,
    UreqTransport,
};
pub use sample::{draw_type_sample, read_label_sheet, write_label_sheet, CorrectionSample, SheetRow};

use crate::error::{Error, Result};
use crate::model::{normalize_doi, CitingRecord, DocumentType, TypeMapping};

/// Tables and services used while enriching records.
pub struct Enricher<'a> {
    pub type_mapping: &'a TypeMapping,
    pub language_names: &'a LanguageNames,
    pub resolver: Option<&'a Resolver>,
}

impl Enricher<'_> {
    /// Fills absent fields of `record` in place and returns any warnings.
    ///
    /// Present values are never replaced; a resolver DOI that disagrees
    /// with the record's own DOI is reported and ignored.
    pub fn enrich(&self, record: &mut CitingRecord) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if record.doi.is_none() {
            record.doi = record.url.as_deref().and_then(extract_doi_from_url);
        }
        if record.doc_type == DocumentType::Unknown && record.doc_type_raw.is_some() {
            record.doc_type = self.type_mapping.classify(record.doc_type_raw.as_deref());
        }
        let (Some(resolver), Some(doi)) = (self.resolver, record.doi.clone()) else {
            return Ok(warnings);
        };
        let meta = match resolver.resolve(&ResolverKey::Doi(doi.clone())) {
            Ok(Some(m)) => m,
            Ok(None) => return Ok(warnings),
            Err(e @ Error::Transient { .. }) => {
                warnings.push(format!("{}: {e}", record.record_id));
                return Ok(warnings);
            }
            Err(e) => return Err(e),
        };
        if let Some(resolved) = meta.doi.as_deref().and_then(normalize_doi) {
            if resolved != doi {
                warnings.push(format!(
                    "{}: resolver DOI {resolved} conflicts with {doi}; keeping {doi}",
                    record.record_id
                ));
            }
        }
        if record.doc_type == DocumentType::Unknown {
            if let Some(t) = meta.doc_type {
                record.doc_type = self.type_mapping.classify(Some(&t));
                record.doc_type_raw.get_or_insert(t);
            }
        }
        if record.language.is_none() {
            record.language = meta.language.as_deref().and_then(|l| self.language_names.to_iso(l));
        }
        if record.venue.is_none() {
            record.venue = meta.container;
        }
        Ok(warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SourceDatabase;
    use std::time::Duration;

    #[test]
    fn url_doi_and_cached_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResolverCache::new(dir.path());
        let key = ResolverKey::Doi("10.1007/s11192-013-1089-2".into());
        cache
            .put(
                &key,
                Some(&ResolvedMetadata {
                    doi: Some("10.1007/s11192-013-1089-2".into()),
                    doc_type: Some("journal-article".into()),
                    language: Some("en".into()),
                    container: Some("Scientometrics".into()),
                    ..Default::default()
                }),
            )
            .unwrap();
        let resolver = Resolver::new(
            ResolverConfig {
                cache_dir: dir.path().into(),
                offline: true,
                backoff: Duration::ZERO,
                ..Default::default()
            },
            Box::new(UreqTransport::new(Duration::from_secs(1))),
        );
        let mapping = TypeMapping::default();
        let names = LanguageNames::default();
        let e = Enricher {
            type_mapping: &mapping,
            language_names: &names,
            resolver: Some(&resolver),
        };
        let mut r = CitingRecord::new("c1", SourceDatabase::Gs, "X", "t");
        r.url = Some("https://link.springer.com/article/10.1007/s11192-013-1089-2".into());
        assert!(e.enrich(&mut r).unwrap().is_empty());
        assert_eq!(r.doi.as_deref(), Some("10.1007/s11192-013-1089-2"));
        assert_eq!(r.doc_type, DocumentType::Journal);
        assert_eq!(r.language.as_deref(), Some("en"));
        assert_eq!(r.venue.as_deref(), Some("Scientometrics"));
    }

    #[test]
    fn present_doi_is_kept() {
        let mapping = TypeMapping::default();
        let names = LanguageNames::default();
        let e = Enricher {
            type_mapping: &mapping,
            language_names: &names,
            resolver: None,
        };
        let mut r = CitingRecord::new("c1", SourceDatabase::Gs, "X", "t").with_doi("10.1000/own");
        r.url = Some("https://x.org/10.5555/other".into());
        e.enrich(&mut r).unwrap();
        assert_eq!(r.doi.as_deref(), Some("10.1000/own"));
    }
}

//! Per-group distribution, citation-count and correlation tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::stats::{log_summary, mean_ratio, spearman, CountSummary};
use crate::enrich::{correct_distribution, LanguageCascade, TypeDistribution};
use crate::error::{Error, Result};
use crate::ingest::{CategoryMap, Quartile};
use crate::linkage::CitationCluster;
use crate::model::{CitingRecord, DocumentType, SourceDatabase};

pub const UNMAPPED: &str = "unmapped";
pub const OTHER_LANGUAGE: &str = "other";
pub const UNIDENTIFIED_LANGUAGE: &str = "unidentified";
pub const DEFAULT_TOP_LANGUAGES: usize = 11;

/// Unique-GS versus overlapping citations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Segment {
    UniqueGs,
    Overlapping,
}

impl Segment {
    pub fn as_str(self) -> &'static str {
        match self {
            Segment::UniqueGs => "unique_gs",
            Segment::Overlapping => "overlapping",
        }
    }

    /// `UniqueGs` when only GS found the citation, `Overlapping` when two or
    /// three databases did, `None` for WoS-only, Scopus-only and WoS+Scopus.
    pub fn of(cluster: &CitationCluster) -> Option<Segment> {
        match cluster.presence.as_slice() {
            [SourceDatabase::Gs] => Some(Segment::UniqueGs),
            p if p.len() >= 2 => Some(Segment::Overlapping),
            _ => None,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn source_rank(s: SourceDatabase) -> u8 {
    match s {
        SourceDatabase::Wos => 0,
        SourceDatabase::Scopus => 1,
        SourceDatabase::Gs => 2,
    }
}

/// A cluster with its member records in representative order: members with
/// a DOI first, then WoS, Scopus, GS, then by record id.
#[derive(Debug, Clone)]
pub struct ClusterView<'a> {
    pub cluster: &'a CitationCluster,
    pub members: Vec<&'a CitingRecord>,
}

impl<'a> ClusterView<'a> {
    pub fn representative(&self) -> &'a CitingRecord {
        self.members[0]
    }

    /// First known type in representative order.
    pub fn doc_type(&self) -> DocumentType {
        self.members
            .iter()
            .map(|r| r.doc_type)
            .find(|t| *t != DocumentType::Unknown)
            .unwrap_or(DocumentType::Unknown)
    }

    /// Language from, in order: metadata on a non-WoS member, the WoS
    /// member, the detector applied to the representative title.
    pub fn language(&self, cascade: &LanguageCascade) -> Option<String> {
        let metadata = self
            .members
            .iter()
            .find(|r| r.source != SourceDatabase::Wos && r.language.is_some());
        let wos = self
            .members
            .iter()
            .find(|r| r.source == SourceDatabase::Wos)
            .and_then(|r| r.language.as_deref());
        let base = metadata.copied().unwrap_or_else(|| self.representative());
        if metadata.is_some() {
            return cascade.detect(base, None);
        }
        let mut probe = base.clone();
        probe.language = None;
        cascade.detect(&probe, wos)
    }

    /// First member from `source` (by record id) that has a citation count.
    pub fn count_from(&self, source: SourceDatabase) -> Option<(&'a CitingRecord, u64)> {
        let mut from: Vec<&CitingRecord> = self.members.iter().copied().filter(|r| r.source == source).collect();
        from.sort_by(|a, b| a.record_id.cmp(&b.record_id));
        from.into_iter().find_map(|r| r.citation_count.map(|c| (r, c)))
    }

    fn first_venue_entry<'m>(&self, map: &'m CategoryMap) -> Option<&'m crate::ingest::CategoryEntry> {
        self.members.iter().filter_map(|r| r.venue.as_deref()).find_map(|v| map.get(v))
    }
}

/// Joins clusters to their records.
pub fn cluster_views<'a>(clusters: &'a [CitationCluster], records: &'a [CitingRecord]) -> Result<Vec<ClusterView<'a>>> {
    let index: HashMap<(&str, &str), &CitingRecord> = records
        .iter()
        .map(|r| ((r.cited_doc_id.as_str(), r.record_id.as_str()), r))
        .collect();
    clusters
        .iter()
        .map(|c| {
            let mut members = c
                .members
                .iter()
                .map(|id| {
                    index.get(&(c.cited_doc_id.as_str(), id.as_str())).copied().ok_or_else(|| {
                        Error::contract(&c.cited_doc_id, format!("cluster {} lists unknown record {id}", c.cluster_id))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if members.is_empty() {
                return Err(Error::contract(&c.cited_doc_id, format!("cluster {} is empty", c.cluster_id)));
            }
            members.sort_by(|a, b| {
                (a.doi.is_none(), source_rank(a.source), &a.record_id).cmp(&(
                    b.doi.is_none(),
                    source_rank(b.source),
                    &b.record_id,
                ))
            });
            Ok(ClusterView { cluster: c, members })
        })
        .collect()
}

/// How clusters are assigned to broad areas.
#[derive(Debug, Clone, Copy, Default)]
pub struct Grouping<'a> {
    /// Cited document id to category; takes precedence when present.
    pub cited_docs: Option<&'a CategoryMap>,
    /// Venue to category, used for citing records.
    pub venues: Option<&'a CategoryMap>,
}

impl Grouping<'_> {
    pub fn broad_area(&self, view: &ClusterView) -> String {
        if let Some(e) = self.cited_docs.and_then(|m| m.get(&view.cluster.cited_doc_id)) {
            return e.broad_area.clone();
        }
        self.venues
            .and_then(|m| view.first_venue_entry(m))
            .map(|e| e.broad_area.clone())
            .unwrap_or_else(|| UNMAPPED.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeRow {
    pub group: String,
    pub segment: Segment,
    pub doc_type: DocumentType,
    pub count: u64,
    pub share: f64,
    /// Share after redistributing UNKNOWN by the group's labeled sample.
    pub corrected_share: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageRow {
    pub group: String,
    pub segment: Segment,
    pub language: String,
    pub count: u64,
    pub share: f64,
}

/// Profile of citations a database found that GS did not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingRow {
    pub database: SourceDatabase,
    /// `type` or `quartile`.
    pub dimension: String,
    pub key: String,
    pub count: u64,
    pub share_of_missing: f64,
    pub pct_of_all: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub group: String,
    pub segment: Segment,
    #[serde(flatten)]
    pub summary: CountSummary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DistributionTables {
    pub types: Vec<TypeRow>,
    pub languages: Vec<LanguageRow>,
    pub missing_from_gs: Vec<MissingRow>,
    /// Clusters whose broad area could not be determined.
    pub unmapped_clusters: u64,
}

fn share(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

/// Type and language shares per (broad area, segment), plus the profile of
/// WoS and Scopus citations missing from GS.
///
/// `corrections` maps a broad area to the type shares of its labeled
/// unknown-type sample.
pub fn distribution_tables(
    views: &[ClusterView],
    grouping: Grouping,
    corrections: &BTreeMap<String, BTreeMap<DocumentType, f64>>,
    cascade: &LanguageCascade,
    top_k: usize,
) -> Result<DistributionTables> {
    let mut tables = DistributionTables::default();
    let mut type_counts: BTreeMap<(String, Segment), BTreeMap<DocumentType, u64>> = BTreeMap::new();
    let mut lang_counts: BTreeMap<(String, Segment), BTreeMap<Option<String>, u64>> = BTreeMap::new();
    let mut overall_langs: BTreeMap<String, u64> = BTreeMap::new();

    for v in views {
        let group = grouping.broad_area(v);
        if group == UNMAPPED {
            tables.unmapped_clusters += 1;
        }
        let Some(segment) = Segment::of(v.cluster) else {
            continue;
        };
        *type_counts.entry((group.clone(), segment)).or_default().entry(v.doc_type()).or_default() += 1;
        let lang = v.language(cascade);
        if let Some(l) = &lang {
            *overall_langs.entry(l.clone()).or_default() += 1;
        }
        *lang_counts.entry((group, segment)).or_default().entry(lang).or_default() += 1;
    }

    for ((group, segment), counts) in &type_counts {
        let total: u64 = counts.values().sum();
        let usize_counts: BTreeMap<DocumentType, usize> = counts.iter().map(|(t, c)| (*t, *c as usize)).collect();
        let dist = TypeDistribution::from_counts(group.clone(), &usize_counts);
        let corrected = match corrections.get(group) {
            Some(sample) => Some(correct_distribution(&dist, sample)?),
            None => None,
        };
        for t in DocumentType::ALL {
            let count = counts.get(&t).copied().unwrap_or(0);
            tables.types.push(TypeRow {
                group: group.clone(),
                segment: *segment,
                doc_type: t,
                count,
                share: share(count, total),
                corrected_share: corrected.as_ref().map(|d| d.share(t)),
            });
        }
    }

    let mut ranked: Vec<(String, u64)> = overall_langs.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let top: Vec<String> = ranked.into_iter().take(top_k).map(|(l, _)| l).collect();
    for ((group, segment), counts) in &lang_counts {
        let total: u64 = counts.values().sum();
        let mut buckets: BTreeMap<&str, u64> = BTreeMap::new();
        for (lang, c) in counts {
            let bucket = match lang {
                None => UNIDENTIFIED_LANGUAGE,
                Some(l) if top.contains(l) => l.as_str(),
                Some(_) => OTHER_LANGUAGE,
            };
            *buckets.entry(bucket).or_default() += c;
        }
        let order = top
            .iter()
            .map(String::as_str)
            .chain([OTHER_LANGUAGE, UNIDENTIFIED_LANGUAGE]);
        for bucket in order {
            let count = buckets.get(bucket).copied().unwrap_or(0);
            tables.languages.push(LanguageRow {
                group: group.clone(),
                segment: *segment,
                language: bucket.to_string(),
                count,
                share: share(count, total),
            });
        }
    }

    let all = views.len() as u64;
    for db in [SourceDatabase::Wos, SourceDatabase::Scopus] {
        let missing: Vec<&ClusterView> = views
            .iter()
            .filter(|v| v.cluster.contains(db) && !v.cluster.contains(SourceDatabase::Gs))
            .collect();
        let n = missing.len() as u64;
        let mut by_type: BTreeMap<DocumentType, u64> = BTreeMap::new();
        let mut by_quartile: BTreeMap<String, u64> = BTreeMap::new();
        for v in &missing {
            *by_type.entry(v.doc_type()).or_default() += 1;
            let q = grouping.venues.and_then(|m| {
                v.members
                    .iter()
                    .filter(|r| r.source == db)
                    .chain(v.members.iter())
                    .filter_map(|r| r.venue.as_deref())
                    .find_map(|venue| m.get(venue))
                    .and_then(|e| e.quartile)
            });
            *by_quartile.entry(q.map_or("unranked".to_string(), |q| q.to_string())).or_default() += 1;
        }
        let mut push = |dimension: &str, key: String, count: u64| {
            tables.missing_from_gs.push(MissingRow {
                database: db,
                dimension: dimension.to_string(),
                key,
                count,
                share_of_missing: share(count, n),
                pct_of_all: 100.0 * share(count, all),
            });
        };
        for t in DocumentType::ALL {
            push("type", t.to_string(), by_type.get(&t).copied().unwrap_or(0));
        }
        for q in Quartile::ALL.iter().map(|q| q.to_string()).chain(["unranked".to_string()]) {
            let c = by_quartile.get(&q).copied().unwrap_or(0);
            push("quartile", q, c);
        }
    }
    Ok(tables)
}

/// `ln(1 + x)` summaries of GS citation counts per (broad area, segment).
pub fn count_summaries(views: &[ClusterView], grouping: Grouping) -> Result<Vec<CountRow>> {
    let mut counts: BTreeMap<(String, Segment), Vec<f64>> = BTreeMap::new();
    for v in views {
        let (Some(segment), Some((_, c))) = (Segment::of(v.cluster), v.count_from(SourceDatabase::Gs)) else {
            continue;
        };
        counts.entry((grouping.broad_area(v), segment)).or_default().push(c as f64);
    }
    counts
        .into_iter()
        .map(|((group, segment), xs)| {
            Ok(CountRow {
                group,
                segment,
                summary: log_summary(&xs)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub category: String,
    pub n: usize,
    pub spearman_r: Option<f64>,
    pub mean_ratio: f64,
    pub mean_ln_gs: f64,
    pub mean_ln_other: f64,
}

/// Spearman correlation and mean ratio between GS counts and `other`'s
/// counts, per subject category of the `other` record's venue.
pub fn correlation_table(
    views: &[ClusterView],
    category_map: &CategoryMap,
    other: SourceDatabase,
) -> Result<Vec<CorrelationRow>> {
    if other == SourceDatabase::Gs {
        return Err(Error::validation("correlation pairs GS with WOS or SCOPUS"));
    }
    let mut pairs: BTreeMap<String, Vec<(u64, u64)>> = BTreeMap::new();
    for v in views {
        let (Some((_, gs)), Some((rec, oc))) = (v.count_from(SourceDatabase::Gs), v.count_from(other)) else {
            continue;
        };
        let category = rec
            .venue
            .as_deref()
            .and_then(|venue| category_map.get(venue))
            .map_or_else(|| UNMAPPED.to_string(), |e| e.category.clone());
        pairs.entry(category).or_default().push((gs, oc));
    }
    pairs
        .into_iter()
        .map(|(category, ps)| {
            let n = ps.len();
            let gs: Vec<f64> = ps.iter().map(|p| p.0 as f64).collect();
            let ot: Vec<f64> = ps.iter().map(|p| p.1 as f64).collect();
            let r = if n >= 2 { spearman(&gs, &ot)? } else { None };
            let mean_ln = |xs: &[f64]| xs.iter().map(|x| x.ln_1p()).sum::<f64>() / xs.len() as f64;
            Ok(CorrelationRow {
                category,
                n,
                spearman_r: r,
                mean_ratio: mean_ratio(&ps)?,
                mean_ln_gs: mean_ln(&gs),
                mean_ln_other: mean_ln(&ot),
            })
        })
        .collect()
}

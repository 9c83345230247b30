//! Two-stage matching of the records that cite one document in two
//! databases: exact DOI agreement first, then a greedy title pass.

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::osa::osa_distance_within;
use crate::error::{Error, Result};
use crate::model::{CitingRecord, MatchPolicy, SourceDatabase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MatchMethod {
    Doi,
    Fuzzy,
}

impl MatchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMethod::Doi => "DOI",
            MatchMethod::Fuzzy => "FUZZY",
        }
    }
}

impl fmt::Display for MatchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "DOI" => Ok(MatchMethod::Doi),
            "FUZZY" => Ok(MatchMethod::Fuzzy),
            other => Err(Error::validation(format!("unknown match method {other:?}"))),
        }
    }
}

/// A link between two records from different databases citing the same
/// document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchEdge {
    pub cited_doc_id: String,
    pub record_a: String,
    pub record_b: String,
    pub method: MatchMethod,
    pub similarity: f64,
}

impl MatchEdge {
    /// The same edge with endpoints swapped.
    pub fn reversed(&self) -> MatchEdge {
        MatchEdge {
            cited_doc_id: self.cited_doc_id.clone(),
            record_a: self.record_b.clone(),
            record_b: self.record_a.clone(),
            method: self.method,
            similarity: self.similarity,
        }
    }
}

/// Similarity implied by an edit distance, `(max_len - distance) / max_len`.
pub(crate) fn similarity_from_distance(distance: usize, max_len: usize) -> f64 {
    if max_len == 0 {
        return 1.0;
    }
    (max_len - distance) as f64 / max_len as f64
}

/// `1 - osa(a, b) / max(|a|, |b|)`, and 1 for two empty strings.
pub fn title_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let max_len = a.len().max(b.len());
    similarity_from_distance(super::osa::osa_chars(&a, &b), max_len)
}

/// Largest distance whose similarity still reaches `threshold`.
fn distance_budget(max_len: usize, threshold: f64) -> usize {
    let mut k = ((1.0 - threshold) * max_len as f64).floor().max(0.0) as usize;
    k = k.min(max_len);
    while k < max_len && similarity_from_distance(k + 1, max_len) >= threshold {
        k += 1;
    }
    while k > 0 && similarity_from_distance(k, max_len) < threshold {
        k -= 1;
    }
    k
}

/// Similarity of two character sequences if it reaches `threshold`.
pub(crate) fn similarity_at_least(a: &[char], b: &[char], threshold: f64) -> Option<f64> {
    let max_len = a.len().max(b.len());
    if max_len == 0 {
        return Some(1.0);
    }
    let budget = distance_budget(max_len, threshold);
    osa_distance_within(a, b, budget).map(|d| similarity_from_distance(d, max_len))
}

/// Acceptance rule for a title-based candidate pair.
///
/// Accepts when the similarity reaches the high threshold and the shorter
/// title is long enough, or when it reaches the low threshold and the first
/// authors agree.
pub fn accept_match(sim: f64, len_a: usize, len_b: usize, same_first_author: bool, policy: &MatchPolicy) -> bool {
    (sim >= policy.high_sim_threshold && len_a.min(len_b) >= policy.min_title_len)
        || (sim >= policy.low_sim_threshold && same_first_author)
}

fn same_first_author(a: &CitingRecord, b: &CitingRecord) -> bool {
    !a.first_author_key.is_empty() && a.first_author_key == b.first_author_key
}

fn check_side<R: Borrow<CitingRecord>>(records: &[R], cited: &str) -> Result<Option<SourceDatabase>> {
    let mut source = None;
    for r in records {
        let r = r.borrow();
        if r.cited_doc_id != cited {
            return Err(Error::contract(
                cited,
                format!("record {} cites {} instead", r.record_id, r.cited_doc_id),
            ));
        }
        match source {
            None => source = Some(r.source),
            Some(s) if s != r.source => {
                return Err(Error::contract(
                    cited,
                    format!("record {} is from {} but its list is {}", r.record_id, r.source, s),
                ))
            }
            _ => {}
        }
    }
    Ok(source)
}

/// Matches the records from database A citing a document against those
/// from database B citing the same document.
///
/// Each record takes part in at most one edge. The output is sorted by
/// `(record_a, record_b)` and does not depend on input order.
pub fn match_block<R: Borrow<CitingRecord>>(list_a: &[R], list_b: &[R], policy: &MatchPolicy) -> Result<Vec<MatchEdge>> {
    let cited = match list_a.first().or(list_b.first()) {
        Some(r) => r.borrow().cited_doc_id.clone(),
        None => return Ok(Vec::new()),
    };
    let source_a = check_side(list_a, &cited)?;
    let source_b = check_side(list_b, &cited)?;
    if let (Some(sa), Some(sb)) = (source_a, source_b) {
        if sa == sb {
            return Err(Error::contract(&cited, format!("both lists come from {sa}")));
        }
    }
    if list_a.is_empty() || list_b.is_empty() {
        return Ok(Vec::new());
    }

    let mut a: Vec<&CitingRecord> = list_a.iter().map(Borrow::borrow).collect();
    let mut b: Vec<&CitingRecord> = list_b.iter().map(Borrow::borrow).collect();
    a.sort_by(|x, y| x.record_id.cmp(&y.record_id));
    b.sort_by(|x, y| x.record_id.cmp(&y.record_id));

    let mut matched_a = vec![false; a.len()];
    let mut matched_b = vec![false; b.len()];
    let mut edges = Vec::new();

    // Stage 1: identical DOIs, duplicates paired in record_id order.
    let mut by_doi: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, r) in a.iter().enumerate() {
        if let Some(doi) = r.doi.as_deref() {
            by_doi.entry(doi).or_default().0.push(i);
        }
    }
    for (j, r) in b.iter().enumerate() {
        if let Some(doi) = r.doi.as_deref() {
            if let Some(entry) = by_doi.get_mut(doi) {
                entry.1.push(j);
            }
        }
    }
    for (ia, jb) in by_doi.values() {
        for (&i, &j) in ia.iter().zip(jb) {
            matched_a[i] = true;
            matched_b[j] = true;
            edges.push(MatchEdge {
                cited_doc_id: cited.clone(),
                record_a: a[i].record_id.clone(),
                record_b: b[j].record_id.clone(),
                method: MatchMethod::Doi,
                similarity: 1.0,
            });
        }
    }

    // Stage 2: greedy on descending title similarity over what is left.
    let titles_a: Vec<Vec<char>> = a.iter().map(|r| r.title_norm.chars().collect()).collect();
    let titles_b: Vec<Vec<char>> = b.iter().map(|r| r.title_norm.chars().collect()).collect();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for i in (0..a.len()).filter(|&i| !matched_a[i]) {
        for j in (0..b.len()).filter(|&j| !matched_b[j]) {
            if let Some(sim) = similarity_at_least(&titles_a[i], &titles_b[j], policy.low_sim_threshold) {
                candidates.push((sim, i, j));
            }
        }
    }
    // Ties break on (lower-source id, higher-source id) so that swapping
    // the two lists ranks candidates the same way.
    let a_first = source_a <= source_b;
    let key = |&(_, i, j): &(f64, usize, usize)| if a_first { (i, j) } else { (j, i) };
    candidates.sort_by(|x, y| y.0.total_cmp(&x.0).then(key(x).cmp(&key(y))));
    for (sim, i, j) in candidates {
        if matched_a[i] || matched_b[j] {
            continue;
        }
        let ok = accept_match(
            sim,
            titles_a[i].len(),
            titles_b[j].len(),
            same_first_author(a[i], b[j]),
            policy,
        );
        if ok {
            matched_a[i] = true;
            matched_b[j] = true;
            edges.push(MatchEdge {
                cited_doc_id: cited.clone(),
                record_a: a[i].record_id.clone(),
                record_b: b[j].record_id.clone(),
                method: MatchMethod::Fuzzy,
                similarity: sim,
            });
        }
    }

    edges.sort_by(|x, y| x.record_a.cmp(&y.record_a).then_with(|| x.record_b.cmp(&y.record_b)));
    Ok(edges)
}

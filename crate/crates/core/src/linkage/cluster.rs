use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::matching::MatchEdge;
use crate::error::{Error, Result};
use crate::model::{CitingRecord, SourceDatabase};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// A set of records judged to be the same citing document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationCluster {
    pub cluster_id: String,
    pub cited_doc_id: String,
    pub members: Vec<String>,
    pub presence: Vec<SourceDatabase>,
    /// Set when two members come from the same database.
    pub flagged: bool,
}

impl CitationCluster {
    pub fn contains(&self, source: SourceDatabase) -> bool {
        self.presence.contains(&source)
    }

    /// Presence as a bit set (GS=1, WOS=2, SCOPUS=4).
    pub fn presence_mask(&self) -> u8 {
        self.presence.iter().fold(0, |m, s| m | s.bit())
    }
}

/// Connected components of the match graph over every record citing one
/// document. Unmatched records become single-source clusters.
///
/// Clusters are ordered by their smallest member id and numbered in that
/// order, so the output is independent of input order.
pub fn build_clusters<R: Borrow<CitingRecord>>(edges: &[MatchEdge], records: &[R]) -> Result<Vec<CitationCluster>> {
    let Some(first) = records.first() else {
        if let Some(e) = edges.first() {
            return Err(Error::contract(&e.cited_doc_id, format!("edge references unknown record {}", e.record_a)));
        }
        return Ok(Vec::new());
    };
    let cited = first.borrow().cited_doc_id.clone();

    let mut recs: Vec<&CitingRecord> = records.iter().map(Borrow::borrow).collect();
    recs.sort_by(|a, b| a.record_id.cmp(&b.record_id));
    let mut index: HashMap<&str, usize> = HashMap::with_capacity(recs.len());
    for (i, r) in recs.iter().enumerate() {
        if r.cited_doc_id != cited {
            return Err(Error::contract(&cited, format!("record {} cites {}", r.record_id, r.cited_doc_id)));
        }
        if index.insert(r.record_id.as_str(), i).is_some() {
            return Err(Error::contract(&cited, format!("duplicate record id {}", r.record_id)));
        }
    }

    let mut uf = UnionFind::new(recs.len());
    for e in edges {
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::contract(&cited, format!("edge references unknown record {id}")))
        };
        let (a, b) = (lookup(&e.record_a)?, lookup(&e.record_b)?);
        uf.union(a, b);
    }

    // Records are sorted, so iterating in index order keeps members sorted and
    // orders components by their smallest member.
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut first_of_root: HashMap<usize, usize> = HashMap::new();
    for i in 0..recs.len() {
        let root = uf.find(i);
        let key = *first_of_root.entry(root).or_insert(i);
        components.entry(key).or_default().push(i);
    }

    Ok(components
        .into_values()
        .enumerate()
        .map(|(n, idxs)| {
            let mut seen = [0usize; 3];
            for &i in &idxs {
                seen[SourceDatabase::ALL.iter().position(|s| *s == recs[i].source).unwrap()] += 1;
            }
            let presence: Vec<SourceDatabase> = SourceDatabase::ALL
                .into_iter()
                .zip(seen)
                .filter(|(_, c)| *c > 0)
                .map(|(s, _)| s)
                .collect();
            CitationCluster {
                cluster_id: format!("{cited}#{}", n + 1),
                cited_doc_id: cited.clone(),
                members: idxs.iter().map(|&i| recs[i].record_id.clone()).collect(),
                presence,
                flagged: seen.iter().any(|&c| c > 1),
            }
        })
        .collect())
}

//! Record linkage within one cited document: edit distance, pairwise
//! matching between databases and merging into clusters.

mod cluster;
mod matching;
mod osa;

use std::borrow::Borrow;

pub use cluster::{build_clusters, CitationCluster, UnionFind};
pub use matching::{accept_match, match_block, title_similarity, MatchEdge, MatchMethod};
pub use osa::{osa_distance, osa_distance_within};

use crate::error::Result;
use crate::model::{CitingRecord, MatchPolicy, SourceDatabase};

/// The three database pairings, in the order edges are reported.
pub const SOURCE_PAIRS: [(SourceDatabase, SourceDatabase); 3] = [
    (SourceDatabase::Gs, SourceDatabase::Scopus),
    (SourceDatabase::Gs, SourceDatabase::Wos),
    (SourceDatabase::Scopus, SourceDatabase::Wos),
];

/// Result of linking every record that cites one document.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockLinkage {
    pub edges: Vec<MatchEdge>,
    pub clusters: Vec<CitationCluster>,
}

/// Runs the three pairwise matchings over one cited document's records and
/// merges them into clusters.
pub fn link_block<R: Borrow<CitingRecord>>(records: &[R], policy: &MatchPolicy) -> Result<BlockLinkage> {
    let by_source = |s: SourceDatabase| -> Vec<&CitingRecord> {
        records.iter().map(Borrow::borrow).filter(|r| r.source == s).collect()
    };
    let mut edges = Vec::new();
    for (a, b) in SOURCE_PAIRS {
        edges.extend(match_block(&by_source(a), &by_source(b), policy)?);
    }
    let clusters = build_clusters(&edges, records)?;
    Ok(BlockLinkage { edges, clusters })
}

//! Overlap, coverage, distribution and correlation analytics over linked
//! citation clusters.

mod regions;
mod stats;
mod tables;

pub use regions::{coverage_metrics, partition_regions, CoverageSummary, Region, RegionCounts};
pub use stats::{average_ranks, log_summary, mean_ratio, spearman, CountSummary};
pub use tables::{
    cluster_views, correlation_table, count_summaries, distribution_tables, ClusterView, CorrelationRow, CountRow,
    DistributionTables, Grouping, LanguageRow, MissingRow, Segment, TypeRow, DEFAULT_TOP_LANGUAGES, OTHER_LANGUAGE,
    UNIDENTIFIED_LANGUAGE, UNMAPPED,
};

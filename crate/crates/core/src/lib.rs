//! Linking citing records across Google Scholar, Web of Science and Scopus,
//! and measuring how the three databases overlap.

pub mod analytics;
pub mod enrich;
pub mod error;
pub mod ingest;
pub mod linkage;
pub mod model;
pub mod pipeline;

pub use error::{Error, Result};
pub use model::{CitingRecord, DocumentType, MatchPolicy, SourceDatabase};

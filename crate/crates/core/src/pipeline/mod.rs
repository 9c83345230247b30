//! End-to-end orchestration: ingest, enrich, match, report, sample and
//! synthetic corpus generation, driven by a [`PipelineConfig`].
//!
//! Every step reads its inputs from and writes its outputs under
//! `output_dir`:
//!
//! ```text
//! records/{gs,wos,scopus}.jsonl   canonical records
//! rejects.csv                     unparseable lines
//! edges.csv, clusters.jsonl       linkage
//! report/*.csv, report/summary.json
//! samples/*.csv                   labeling sheets
//! manifest.json
//! ```

mod config;
mod report;
mod synth;

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{InputFile, Inputs, PipelineConfig, ResolverSettings, SampleSettings};
pub use report::{cmd_report, ReportSummary};
pub use synth::{
    cmd_synth, evaluate, generate, read_truth, write_truth, Evaluation, SynthCorpus, SynthNoise, SynthSpec,
    SynthSummary, TruthRow,
};

use crate::analytics::{cluster_views, Grouping};
use crate::enrich::{draw_type_sample, write_label_sheet, Enricher, LanguageNames, Resolver};
use crate::error::{Error, Result};
use crate::ingest::{
    load_category_map, parse_gs_dump, parse_scopus_export, parse_wos_export, read_canonical_file,
    write_canonical_file, write_rejects, CategoryMap, Corpus, ParseOptions, ParseOutcome, Reject,
};
use crate::linkage::{link_block, CitationCluster, MatchEdge, MatchMethod};
use crate::model::{CitingRecord, DocumentType, SourceDatabase, TypeMapping};

/// File locations under the output directory.
#[derive(Debug, Clone)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Layout { root: root.into() }
    }

    pub fn records(&self, s: SourceDatabase) -> PathBuf {
        self.root.join("records").join(format!("{}.jsonl", s.slug()))
    }

    pub fn rejects(&self) -> PathBuf {
        self.root.join("rejects.csv")
    }

    pub fn edges(&self) -> PathBuf {
        self.root.join("edges.csv")
    }

    pub fn clusters(&self) -> PathBuf {
        self.root.join("clusters.jsonl")
    }

    pub fn report_dir(&self) -> PathBuf {
        self.root.join("report")
    }

    pub fn samples_dir(&self) -> PathBuf {
        self.root.join("samples")
    }

    pub fn manifest(&self) -> PathBuf {
        self.root.join("manifest.json")
    }
}

pub(crate) fn create_dir(p: &Path) -> Result<()> {
    fs::create_dir_all(p).map_err(|e| Error::io(p, e))
}

pub(crate) fn write_file(p: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = p.parent() {
        create_dir(parent)?;
    }
    fs::write(p, bytes).map_err(|e| Error::io(p, e))
}

pub(crate) fn write_json<T: Serialize>(p: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_file(p, bytes)
}

fn read_file(p: &Path) -> Result<Vec<u8>> {
    fs::read(p).map_err(|e| Error::io(p, e))
}

pub(crate) fn sha256_file(p: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(read_file(p)?)))
}

/// Runs `f` on a pool of `workers` threads.
pub fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::validation(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceCounts {
    pub files: usize,
    pub data_lines: usize,
    pub records: usize,
    pub rejects: usize,
    pub duplicates_dropped: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub sources: BTreeMap<SourceDatabase, SourceCounts>,
    pub warnings: Vec<String>,
}

fn parse_file(source: SourceDatabase, input: &InputFile) -> Result<ParseOutcome> {
    let path = input.path();
    let bytes = read_file(path)?;
    let name = path.display().to_string();
    let opts = ParseOptions {
        cited_doc_id: input.cited_doc_id().map(String::from),
        type_mapping: TypeMapping::default(),
        language_names: LanguageNames::default(),
    };
    match source {
        SourceDatabase::Gs => parse_gs_dump(&bytes, &name, &opts),
        SourceDatabase::Wos => parse_wos_export(&bytes, &name, &opts),
        SourceDatabase::Scopus => parse_scopus_export(&bytes, &name, &opts),
    }
}

fn sort_records(records: &mut [CitingRecord]) {
    records.sort_by(|a, b| (&a.cited_doc_id, &a.record_id).cmp(&(&b.cited_doc_id, &b.record_id)));
}

/// Parses every export into per-source canonical files and a rejects report.
pub fn cmd_ingest(cfg: &PipelineConfig) -> Result<IngestSummary> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    let jobs: Vec<(SourceDatabase, &InputFile)> = SourceDatabase::ALL
        .iter()
        .flat_map(|s| cfg.inputs.for_source(*s).iter().map(move |f| (*s, f)))
        .collect();
    let outcomes: Vec<ParseOutcome> =
        with_pool(cfg.workers, || jobs.par_iter().map(|(s, f)| parse_file(*s, f)).collect::<Result<_>>())??;

    let mut summary = IngestSummary::default();
    let mut rejects: Vec<Reject> = Vec::new();
    let mut per_source: BTreeMap<SourceDatabase, Corpus> = BTreeMap::new();
    for ((source, _), out) in jobs.iter().zip(outcomes) {
        let counts = summary.sources.entry(*source).or_default();
        counts.files += 1;
        counts.data_lines += out.data_lines;
        counts.rejects += out.rejects.len();
        summary.warnings.extend(out.warnings);
        rejects.extend(out.rejects);
        per_source.entry(*source).or_default().extend(out.records);
    }
    for source in SourceDatabase::ALL {
        let mut corpus = per_source.remove(&source).unwrap_or_default();
        let counts = summary.sources.entry(source).or_default();
        counts.records = corpus.len();
        counts.duplicates_dropped = corpus.duplicates_dropped;
        sort_records(&mut corpus.records);
        let path = layout.records(source);
        create_dir(path.parent().unwrap())?;
        write_canonical_file(&path, &corpus.records)?;
    }
    let mut buf = Vec::new();
    write_rejects(&mut buf, &rejects)?;
    write_file(&layout.rejects(), buf)?;
    write_json(&layout.root.join("ingest.json"), &summary)?;
    Ok(summary)
}

/// Reads the canonical records of every source.
pub fn load_records(layout: &Layout) -> Result<Vec<CitingRecord>> {
    let mut all = Vec::new();
    for s in SourceDatabase::ALL {
        all.extend(read_canonical_file(&layout.records(s))?);
    }
    Ok(all)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnrichSummary {
    pub records: usize,
    pub doi_before: usize,
    pub doi_after: usize,
    pub unknown_type_before: usize,
    pub unknown_type_after: usize,
    pub warnings: Vec<String>,
}

fn build_resolver(cfg: &PipelineConfig) -> Resolver {
    Resolver::with_http(cfg.resolver_config())
}

/// Fills DOIs, types, languages and venues in the canonical files.
pub fn cmd_enrich(cfg: &PipelineConfig) -> Result<EnrichSummary> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    let resolver = build_resolver(cfg);
    let mapping = TypeMapping::default();
    let names = LanguageNames::default();
    let enricher = Enricher {
        type_mapping: &mapping,
        language_names: &names,
        resolver: Some(&resolver),
    };
    let mut summary = EnrichSummary::default();
    for s in SourceDatabase::ALL {
        let path = layout.records(s);
        let mut records = read_canonical_file(&path)?;
        summary.records += records.len();
        summary.doi_before += records.iter().filter(|r| r.doi.is_some()).count();
        summary.unknown_type_before += records.iter().filter(|r| r.doc_type == DocumentType::Unknown).count();
        let warnings: Vec<Vec<String>> = with_pool(cfg.workers, || {
            records.par_iter_mut().map(|r| enricher.enrich(r)).collect::<Result<_>>()
        })??;
        summary.warnings.extend(warnings.into_iter().flatten());
        summary.doi_after += records.iter().filter(|r| r.doi.is_some()).count();
        summary.unknown_type_after += records.iter().filter(|r| r.doc_type == DocumentType::Unknown).count();
        write_canonical_file(&path, &records)?;
    }
    write_json(&layout.root.join("enrich.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSummary {
    pub cited_docs: usize,
    pub records: usize,
    pub doi_edges: usize,
    pub fuzzy_edges: usize,
    pub clusters: usize,
    pub flagged_clusters: usize,
}

/// Links all records within each cited document.
pub fn link_all(records: &[CitingRecord], cfg: &PipelineConfig) -> Result<(Vec<MatchEdge>, Vec<CitationCluster>)> {
    let mut blocks: BTreeMap<&str, Vec<&CitingRecord>> = BTreeMap::new();
    for r in records {
        blocks.entry(r.cited_doc_id.as_str()).or_default().push(r);
    }
    let blocks: Vec<Vec<&CitingRecord>> = blocks.into_values().collect();
    let linked = with_pool(cfg.workers, || {
        blocks.par_iter().map(|b| link_block(b, &cfg.policy)).collect::<Result<Vec<_>>>()
    })??;
    let mut edges = Vec::new();
    let mut clusters = Vec::new();
    for l in linked {
        edges.extend(l.edges);
        clusters.extend(l.clusters);
    }
    Ok((edges, clusters))
}

pub fn write_edges(path: &Path, edges: &[MatchEdge]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cited_doc_id", "record_a", "record_b", "method", "similarity"])?;
    for e in edges {
        w.write_record([
            e.cited_doc_id.as_str(),
            &e.record_a,
            &e.record_b,
            e.method.as_str(),
            &format!("{:.6}", e.similarity),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::validation(e.to_string()))?;
    write_file(path, bytes)
}

pub fn read_edges(path: &Path) -> Result<Vec<MatchEdge>> {
    let bytes = read_file(path)?;
    let mut rdr = csv::Reader::from_reader(bytes.as_slice());
    let mut edges = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("").to_string();
        edges.push(MatchEdge {
            cited_doc_id: field(0),
            record_a: field(1),
            record_b: field(2),
            method: field(3).parse::<MatchMethod>()?,
            similarity: field(4)
                .parse()
                .map_err(|_| Error::validation(format!("{}: bad similarity {:?}", path.display(), field(4))))?,
        });
    }
    Ok(edges)
}

pub fn write_clusters(path: &Path, clusters: &[CitationCluster]) -> Result<()> {
    let mut buf = Vec::new();
    for c in clusters {
        serde_json::to_writer(&mut buf, c)?;
        buf.push(b'\n');
    }
    write_file(path, buf)
}

pub fn read_clusters(path: &Path) -> Result<Vec<CitationCluster>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| Error::validation(format!("{}:{}: {e}", path.display(), n + 1)))?,
        );
    }
    Ok(out)
}

/// Matches every cited document's records and writes edges and clusters.
pub fn cmd_match(cfg: &PipelineConfig) -> Result<MatchSummary> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    let records = load_records(&layout)?;
    let (edges, clusters) = link_all(&records, cfg)?;
    write_edges(&layout.edges(), &edges)?;
    write_clusters(&layout.clusters(), &clusters)?;
    let summary = MatchSummary {
        cited_docs: clusters.iter().map(|c| &c.cited_doc_id).collect::<std::collections::BTreeSet<_>>().len(),
        records: records.len(),
        doi_edges: edges.iter().filter(|e| e.method == MatchMethod::Doi).count(),
        fuzzy_edges: edges.iter().filter(|e| e.method == MatchMethod::Fuzzy).count(),
        clusters: clusters.len(),
        flagged_clusters: clusters.iter().filter(|c| c.flagged).count(),
    };
    write_json(&layout.root.join("match.json"), &summary)?;
    Ok(summary)
}

pub(crate) fn load_optional_map(path: Option<&Path>) -> Result<Option<CategoryMap>> {
    path.map(|p| load_category_map(&read_file(p)?, &p.display().to_string())).transpose()
}

/// File-name-safe form of a group name.
pub fn group_slug(group: &str) -> String {
    let mut s: String = group
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSummary {
    /// Broad area to (sheet path, rows drawn).
    pub sheets: BTreeMap<String, (String, usize)>,
}

/// Draws a labeling sheet per broad area from clusters of unknown type.
pub fn cmd_sample(cfg: &PipelineConfig) -> Result<SampleSummary> {
    cfg.validate()?;
    let settings = cfg.sample.clone().unwrap_or_default();
    let seed = cfg.seed.ok_or_else(|| Error::validation("sampling requires a seed"))?;
    let layout = Layout::new(&cfg.output_dir);
    let records = load_records(&layout)?;
    let clusters = read_clusters(&layout.clusters())?;
    let views = cluster_views(&clusters, &records)?;
    let venues = load_optional_map(cfg.category_map.as_deref())?;
    let cited = load_optional_map(cfg.cited_doc_categories.as_deref())?;
    let grouping = Grouping {
        cited_docs: cited.as_ref(),
        venues: venues.as_ref(),
    };
    let mut pools: BTreeMap<String, Vec<&CitingRecord>> = BTreeMap::new();
    for v in &views {
        if v.doc_type() == DocumentType::Unknown {
            pools.entry(grouping.broad_area(v)).or_default().push(v.representative());
        }
    }
    let mut summary = SampleSummary::default();
    for (group, pool) in pools {
        let (_, rows) = draw_type_sample(pool, &group, settings.size, seed)?;
        let name = format!("{}.csv", group_slug(&group));
        let mut buf = Vec::new();
        write_label_sheet(&mut buf, &rows)?;
        write_file(&layout.samples_dir().join(&name), buf)?;
        summary.sheets.insert(group, (format!("samples/{name}"), rows.len()));
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub ingest: IngestSummary,
    pub enrich: EnrichSummary,
    #[serde(rename = "match")]
    pub matching: MatchSummary,
    pub report: ReportSummary,
    pub sample: Option<SampleSummary>,
}

/// Ingest, enrich, match and report, then sample when configured.
pub fn cmd_pipeline(cfg: &PipelineConfig) -> Result<PipelineSummary> {
    let ingest = cmd_ingest(cfg)?;
    let enrich = cmd_enrich(cfg)?;
    let matching = cmd_match(cfg)?;
    let report = cmd_report(cfg)?;
    let sample = match cfg.sample {
        Some(_) => Some(cmd_sample(cfg)?),
        None => None,
    };
    Ok(PipelineSummary {
        ingest,
        enrich,
        matching,
        report,
        sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(group_slug("Social Sciences"), "social_sciences");
        assert_eq!(group_slug("Arts & Humanities"), "arts_humanities");
    }
}

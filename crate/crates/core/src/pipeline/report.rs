use std::collections::BTreeMap;
use std::fs;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{load_optional_map, load_records, read_clusters, sha256_file, write_file, write_json, Layout, PipelineConfig};
use crate::analytics::{
    cluster_views, correlation_table, count_summaries, coverage_metrics, distribution_tables, partition_regions,
    CorrelationRow, CountRow, CoverageSummary, DistributionTables, Grouping, Region, RegionCounts,
};
use crate::enrich::{read_label_sheet, LanguageCascade};
use crate::error::{Error, Result};
use crate::model::{DocumentType, SourceDatabase};

pub const ALL_GROUP: &str = "ALL";

const MEAN_RATIO_NOTE: &str = "mean_ratio is the mean of (1 + gs) / (1 + other) over paired documents";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRegions {
    pub group: String,
    pub counts: RegionCounts,
    pub coverage: Option<CoverageSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub wos: Vec<CorrelationRow>,
    pub scopus: Vec<CorrelationRow>,
}

/// Everything written to `report/summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub clusters: usize,
    pub flagged_clusters: usize,
    pub regions: Vec<GroupRegions>,
    pub distributions: DistributionTables,
    pub citation_counts: Vec<CountRow>,
    pub correlations: Option<Correlations>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct InputDigest {
    role: String,
    path: String,
    sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Manifest {
    tool: String,
    version: String,
    config_digest: String,
    inputs: Vec<InputDigest>,
    run_digest: String,
    notes: Vec<String>,
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

fn opt4(x: Option<f64>) -> String {
    x.map(f4).unwrap_or_default()
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| Error::validation(e.to_string()))
}

fn correlation_csv(rows: &[CorrelationRow]) -> Result<Vec<u8>> {
    csv_bytes(
        &["category", "n", "spearman_r", "mean_ratio", "mean_ln_gs", "mean_ln_other"],
        rows.iter().map(|r| {
            vec![
                r.category.clone(),
                r.n.to_string(),
                opt4(r.spearman_r),
                f4(r.mean_ratio),
                f4(r.mean_ln_gs),
                f4(r.mean_ln_other),
            ]
        }),
    )
}

fn input_digests(cfg: &PipelineConfig) -> Result<Vec<InputDigest>> {
    let mut out = Vec::new();
    let mut add = |role: String, path: &std::path::Path| -> Result<()> {
        out.push(InputDigest {
            role,
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        });
        Ok(())
    };
    for s in SourceDatabase::ALL {
        for f in cfg.inputs.for_source(s) {
            add(s.slug().to_string(), f.path())?;
        }
    }
    if let Some(p) = &cfg.category_map {
        add("category_map".into(), p)?;
    }
    if let Some(p) = &cfg.cited_doc_categories {
        add("cited_doc_categories".into(), p)?;
    }
    for (group, p) in &cfg.corrections {
        add(format!("correction:{group}"), p)?;
    }
    Ok(out)
}

/// Computes every table from the clusters and writes the report bundle and
/// the run manifest.
pub fn cmd_report(cfg: &PipelineConfig) -> Result<ReportSummary> {
    cfg.validate()?;
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
    let mut notes = vec![MEAN_RATIO_NOTE.to_string()];

    let mut corrections: BTreeMap<String, BTreeMap<DocumentType, f64>> = BTreeMap::new();
    for (group, path) in &cfg.corrections {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let sample = read_label_sheet(file, group, cfg.seed.unwrap_or(0))?;
        corrections.insert(group.clone(), sample.distribution()?);
    }

    let mut by_group: BTreeMap<String, Vec<&crate::linkage::CitationCluster>> = BTreeMap::new();
    for v in &views {
        by_group.entry(grouping.broad_area(v)).or_default().push(v.cluster);
    }
    let mut regions = Vec::new();
    let overall = partition_regions(&clusters);
    regions.push(GroupRegions {
        group: ALL_GROUP.to_string(),
        counts: overall,
        coverage: (overall.total > 0).then(|| coverage_metrics(&overall)).transpose()?,
    });
    for (group, cs) in &by_group {
        let counts = partition_regions(cs.iter().copied());
        regions.push(GroupRegions {
            group: group.clone(),
            counts,
            coverage: Some(coverage_metrics(&counts)?),
        });
    }

    let cascade = LanguageCascade::default();
    let mut distributions = distribution_tables(&views, grouping, &corrections, &cascade, cfg.top_languages)?;
    if venues.is_none() {
        distributions.missing_from_gs.retain(|r| r.dimension != "quartile");
        notes.push("quartile profile skipped: no category map".into());
    }
    let citation_counts = count_summaries(&views, grouping)?;
    let correlations = match &venues {
        Some(map) => Some(Correlations {
            wos: correlation_table(&views, map, SourceDatabase::Wos)?,
            scopus: correlation_table(&views, map, SourceDatabase::Scopus)?,
        }),
        None => {
            notes.push("correlation tables skipped: no category map".into());
            None
        }
    };
    if distributions.unmapped_clusters > 0 {
        notes.push(format!(
            "{} clusters have no broad area and are grouped as \"unmapped\"",
            distributions.unmapped_clusters
        ));
    }

    let dir = layout.report_dir();
    if dir.exists() {
        fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    let mut region_header = vec!["group"];
    region_header.extend(Region::ALL.iter().map(|r| r.as_str()));
    region_header.push("total");
    write_file(
        &dir.join("regions.csv"),
        csv_bytes(
            &region_header,
            regions.iter().map(|g| {
                let mut row = vec![g.group.clone()];
                row.extend(Region::ALL.iter().map(|r| g.counts.get(*r).to_string()));
                row.push(g.counts.total.to_string());
                row
            }),
        )?,
    )?;
    write_file(
        &dir.join("coverage.csv"),
        csv_bytes(
            &[
                "group",
                "pct_gs_all",
                "pct_wos_all",
                "pct_scopus_all",
                "pct_wos_in_gs",
                "pct_scopus_in_gs",
                "pct_wos_in_scopus",
            ],
            regions.iter().filter_map(|g| {
                let c = g.coverage?;
                Some(vec![
                    g.group.clone(),
                    f4(c.pct_gs_all),
                    f4(c.pct_wos_all),
                    f4(c.pct_scopus_all),
                    opt4(c.pct_wos_in_gs),
                    opt4(c.pct_scopus_in_gs),
                    opt4(c.pct_wos_in_scopus),
                ])
            }),
        )?,
    )?;
    write_file(
        &dir.join("types.csv"),
        csv_bytes(
            &["group", "segment", "doc_type", "count", "pct", "corrected_pct"],
            distributions.types.iter().map(|r| {
                vec![
                    r.group.clone(),
                    r.segment.to_string(),
                    r.doc_type.to_string(),
                    r.count.to_string(),
                    f4(100.0 * r.share),
                    opt4(r.corrected_share.map(|s| 100.0 * s)),
                ]
            }),
        )?,
    )?;
    write_file(
        &dir.join("languages.csv"),
        csv_bytes(
            &["group", "segment", "language", "count", "pct"],
            distributions.languages.iter().map(|r| {
                vec![
                    r.group.clone(),
                    r.segment.to_string(),
                    r.language.clone(),
                    r.count.to_string(),
                    f4(100.0 * r.share),
                ]
            }),
        )?,
    )?;
    write_file(
        &dir.join("missing_from_gs.csv"),
        csv_bytes(
            &["database", "dimension", "key", "count", "pct_of_missing", "pct_of_all"],
            distributions.missing_from_gs.iter().map(|r| {
                vec![
                    r.database.to_string(),
                    r.dimension.clone(),
                    r.key.clone(),
                    r.count.to_string(),
                    f4(100.0 * r.share_of_missing),
                    f4(r.pct_of_all),
                ]
            }),
        )?,
    )?;
    write_file(
        &dir.join("citation_counts.csv"),
        csv_bytes(
            &["group", "segment", "n", "median_ln", "mean_ln", "ci_half_width"],
            citation_counts.iter().map(|r| {
                vec![
                    r.group.clone(),
                    r.segment.to_string(),
                    r.summary.n.to_string(),
                    f4(r.summary.median),
                    f4(r.summary.mean),
                    f4(r.summary.ci_half_width),
                ]
            }),
        )?,
    )?;
    if let Some(c) = &correlations {
        write_file(&dir.join("correlation_gs_wos.csv"), correlation_csv(&c.wos)?)?;
        write_file(&dir.join("correlation_gs_scopus.csv"), correlation_csv(&c.scopus)?)?;
    }

    let summary = ReportSummary {
        clusters: clusters.len(),
        flagged_clusters: clusters.iter().filter(|c| c.flagged).count(),
        regions,
        distributions,
        citation_counts,
        correlations,
        notes,
    };
    write_json(&dir.join("summary.json"), &summary)?;

    let config_digest = cfg.digest()?;
    let inputs = input_digests(cfg)?;
    let mut h = Sha256::new();
    h.update(config_digest.as_bytes());
    for i in &inputs {
        h.update(i.role.as_bytes());
        h.update([0]);
        h.update(i.sha256.as_bytes());
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_digest,
        inputs,
        run_digest: hex::encode(h.finalize()),
        notes: summary.notes.clone(),
    };
    write_json(&layout.manifest(), &manifest)?;
    Ok(summary)
}

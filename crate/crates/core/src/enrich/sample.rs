//! Random samples of unknown-type records for manual labeling.
//!
//! Samples are drawn with `ChaCha8Rng::seed_from_u64(seed)` over the
//! candidates sorted by record id, so the same seed always yields the same
//! sheet whatever order the records arrive in.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CitingRecord, DocumentType};

/// A sample of unknown-type records and, once labeled, their types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionSample {
    pub group: String,
    pub record_ids: Vec<String>,
    pub labels: BTreeMap<String, DocumentType>,
    pub seed: u64,
}

/// One row of a labeling sheet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheetRow {
    pub record_id: String,
    pub title: String,
    pub url: String,
}

impl CorrectionSample {
    /// Share of each labeled type among labeled records.
    pub fn distribution(&self) -> Result<BTreeMap<DocumentType, f64>> {
        if self.labels.is_empty() {
            return Err(Error::validation(format!("sample for group {:?} has no labels", self.group)));
        }
        let mut counts: BTreeMap<DocumentType, usize> = BTreeMap::new();
        for t in self.labels.values() {
            *counts.entry(*t).or_default() += 1;
        }
        let n = self.labels.len() as f64;
        Ok(counts.into_iter().map(|(t, c)| (t, c as f64 / n)).collect())
    }
}

/// Draws `min(n, available)` distinct UNKNOWN-type records from `records`
/// (the members of `group`).
pub fn draw_type_sample<'a>(
    records: impl IntoIterator<Item = &'a CitingRecord>,
    group: &str,
    n: usize,
    seed: u64,
) -> Result<(CorrectionSample, Vec<SheetRow>)> {
    let mut pool: BTreeMap<&str, &CitingRecord> = BTreeMap::new();
    for r in records.into_iter().filter(|r| r.doc_type == DocumentType::Unknown) {
        pool.entry(r.record_id.as_str()).or_insert(r);
    }
    if pool.is_empty() {
        return Err(Error::validation(format!("group {group:?} has no records of unknown type")));
    }
    let candidates: Vec<&CitingRecord> = pool.into_values().collect();
    let amount = n.min(candidates.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, candidates.len(), amount).into_vec();
    picked.sort_unstable();

    let rows: Vec<SheetRow> = picked
        .iter()
        .map(|&i| SheetRow {
            record_id: candidates[i].record_id.clone(),
            title: candidates[i].title_raw.clone(),
            url: candidates[i].url.clone().unwrap_or_default(),
        })
        .collect();
    let sample = CorrectionSample {
        group: group.to_string(),
        record_ids: rows.iter().map(|r| r.record_id.clone()).collect(),
        labels: BTreeMap::new(),
        seed,
    };
    Ok((sample, rows))
}

/// Writes a `record_id,title,url,label` sheet with an empty label column.
pub fn write_label_sheet<W: Write>(out: W, rows: &[SheetRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["record_id", "title", "url", "label"])?;
    for r in rows {
        w.write_record([r.record_id.as_str(), r.title.as_str(), r.url.as_str(), ""])?;
    }
    w.flush().map_err(|e| Error::io("<label sheet>", e))?;
    Ok(())
}

/// Reads a labeled sheet. Rows with an empty label are kept in the sample
/// but left unlabeled; UNKNOWN is not an acceptable label.
pub fn read_label_sheet<R: Read>(input: R, group: &str, seed: u64) -> Result<CorrectionSample> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::validation(format!("label sheet lacks a {name:?} column")))
    };
    let (id_col, label_col) = (col("record_id")?, col("label")?);
    let mut sample = CorrectionSample {
        group: group.to_string(),
        record_ids: Vec::new(),
        labels: BTreeMap::new(),
        seed,
    };
    for row in rdr.records() {
        let row = row?;
        let id = row.get(id_col).unwrap_or("").to_string();
        if sample.record_ids.contains(&id) {
            return Err(Error::validation(format!("record {id} appears twice in the sheet")));
        }
        let label = row.get(label_col).unwrap_or("");
        if !label.is_empty() {
            let t: DocumentType = label.parse()?;
            if t == DocumentType::Unknown {
                return Err(Error::validation(format!("record {id}: UNKNOWN is not a valid label")));
            }
            sample.labels.insert(id.clone(), t);
        }
        sample.record_ids.push(id);
    }
    Ok(sample)
}

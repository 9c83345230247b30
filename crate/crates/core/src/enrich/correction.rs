//! Redistribution of the unknown-type share using a manually labeled
//! sample of unknown-type records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DocumentType;

pub(crate) const SUM_TOLERANCE: f64 = 1e-9;

/// Share of each document type within one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeDistribution {
    pub group: String,
    pub shares: BTreeMap<DocumentType, f64>,
}

impl TypeDistribution {
    /// Shares from raw counts; all seven types present, zero where unseen.
    pub fn from_counts(group: impl Into<String>, counts: &BTreeMap<DocumentType, usize>) -> Self {
        let total: usize = counts.values().sum();
        let shares = DocumentType::ALL
            .into_iter()
            .map(|t| {
                let c = counts.get(&t).copied().unwrap_or(0);
                (t, if total == 0 { 0.0 } else { c as f64 / total as f64 })
            })
            .collect();
        TypeDistribution {
            group: group.into(),
            shares,
        }
    }

    pub fn share(&self, t: DocumentType) -> f64 {
        self.shares.get(&t).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.shares.values().sum()
    }
}

fn check_shares(name: &str, shares: &BTreeMap<DocumentType, f64>) -> Result<f64> {
    for (t, v) in shares {
        if !(0.0..=1.0).contains(v) || v.is_nan() {
            return Err(Error::validation(format!("{name}: share for {t} is {v}, outside [0, 1]")));
        }
        if *t == DocumentType::Unknown && *v != 0.0 {
            return Err(Error::validation(format!("{name}: must not assign mass to UNKNOWN")));
        }
    }
    Ok(shares.values().sum())
}

/// Corrected share of each type: `known(t) + sample(t) * unknown_share`.
///
/// `known` and `unknown_share` together must sum to 1, and `sample` must
/// sum to 1, each within 1e-9. The result has zero UNKNOWN share and lists
/// all seven types.
pub fn apply_correction(
    known: &BTreeMap<DocumentType, f64>,
    unknown_share: f64,
    sample: &BTreeMap<DocumentType, f64>,
) -> Result<BTreeMap<DocumentType, f64>> {
    if !(0.0..=1.0).contains(&unknown_share) {
        return Err(Error::validation(format!("unknown share {unknown_share} outside [0, 1]")));
    }
    let known_sum = check_shares("known distribution", known)?;
    if (known_sum + unknown_share - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::validation(format!(
            "known shares ({known_sum}) plus unknown share ({unknown_share}) must sum to 1"
        )));
    }
    let sample_sum = check_shares("sample distribution", sample)?;
    if unknown_share > 0.0 && (sample_sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::validation(format!("sample shares sum to {sample_sum}, not 1")));
    }
    Ok(DocumentType::ALL
        .into_iter()
        .map(|t| {
            let k = known.get(&t).copied().unwrap_or(0.0);
            let s = sample.get(&t).copied().unwrap_or(0.0);
            (t, if t == DocumentType::Unknown { 0.0 } else { k + s * unknown_share })
        })
        .collect())
}

/// Applies a sample to a distribution that still includes UNKNOWN.
pub fn correct_distribution(dist: &TypeDistribution, sample: &BTreeMap<DocumentType, f64>) -> Result<TypeDistribution> {
    let unknown = dist.share(DocumentType::Unknown);
    let known: BTreeMap<DocumentType, f64> = dist
        .shares
        .iter()
        .filter(|(t, _)| **t != DocumentType::Unknown)
        .map(|(t, v)| (*t, *v))
        .collect();
    Ok(TypeDistribution {
        group: dist.group.clone(),
        shares: apply_correction(&known, unknown, sample)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use DocumentType::*;

    fn dist(pairs: &[(DocumentType, f64)]) -> BTreeMap<DocumentType, f64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn social_sciences_example() {
        let known = dist(&[(Journal, 0.335), (Book, 0.30), (Thesis, 0.165)]);
        let sample = dist(&[(Journal, 0.276), (Thesis, 0.5), (Book, 0.224)]);
        let out = apply_correction(&known, 0.20, &sample).unwrap();
        assert!((out[&Journal] - 0.390).abs() < 0.0005);
        assert_eq!(out[&Unknown], 0.0);
        assert!((out.values().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_unknown_is_identity() {
        let known = dist(&[(Journal, 0.6), (Conference, 0.4)]);
        let out = apply_correction(&known, 0.0, &dist(&[(Thesis, 1.0)])).unwrap();
        assert_eq!(out[&Journal], 0.6);
        assert_eq!(out[&Conference], 0.4);
        assert_eq!(out[&Thesis], 0.0);
    }

    #[test]
    fn all_unknown_boundary() {
        let out = apply_correction(&BTreeMap::new(), 1.0, &dist(&[(Thesis, 1.0)])).unwrap();
        assert_eq!(out[&Thesis], 1.0);
    }

    #[test]
    fn bad_sums_rejected() {
        assert!(apply_correction(&dist(&[(Journal, 0.5)]), 0.2, &dist(&[(Journal, 1.0)])).is_err());
        assert!(apply_correction(&dist(&[(Journal, 0.8)]), 0.2, &dist(&[(Journal, 0.9)])).is_err());
        assert!(apply_correction(&dist(&[(Journal, 0.8)]), 0.2, &dist(&[(Unknown, 1.0)])).is_err());
    }

    fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..1.0, n).prop_filter_map("non-zero", |v| {
            let s: f64 = v.iter().sum();
            (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn mass_preserved(known in simplex(7), sample in simplex(6)) {
            let unknown = known[6];
            let known_map: BTreeMap<_, _> = DocumentType::ALL[..6].iter().copied().zip(known[..6].iter().copied()).collect();
            let sample_map: BTreeMap<_, _> = DocumentType::ALL[..6].iter().copied().zip(sample).collect();
            let out = apply_correction(&known_map, unknown, &sample_map).unwrap();
            prop_assert!((out.values().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert_eq!(out[&Unknown], 0.0);
        }
    }
}

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use citelink_core::analytics::{coverage_metrics, log_summary, mean_ratio, partition_regions, spearman, RegionCounts};
use citelink_core::enrich::apply_correction;
use citelink_core::linkage::CitationCluster;
use citelink_core::model::{DocumentType, SourceDatabase};

use common::naive_spearman;

fn cluster(presence: &[SourceDatabase]) -> CitationCluster {
    CitationCluster {
        cluster_id: "c".into(),
        cited_doc_id: "X".into(),
        members: presence.iter().map(|s| format!("{s}")).collect(),
        presence: presence.to_vec(),
        flagged: false,
    }
}

#[test]
fn regions_tally_and_coverage_by_hand() {
    use SourceDatabase::*;
    let mut cs = Vec::new();
    for (p, n) in [
        (vec![Gs], 3),
        (vec![Wos], 1),
        (vec![Scopus], 1),
        (vec![Gs, Wos], 1),
        (vec![Gs, Scopus], 1),
        (vec![Wos, Scopus], 1),
        (vec![Gs, Wos, Scopus], 2),
    ] {
        cs.extend(std::iter::repeat_n(cluster(&p), n));
    }
    let rc = partition_regions(&cs);
    assert_eq!((rc.g, rc.w, rc.s, rc.gw, rc.gs, rc.ws, rc.gws, rc.total), (3, 1, 1, 1, 1, 1, 2, 10));
    let cov = coverage_metrics(&rc).unwrap();
    assert_eq!(cov.pct_gs_all, 70.0);
    assert_eq!(cov.pct_wos_all, 50.0);
    assert_eq!(cov.pct_scopus_all, 50.0);
    assert_eq!(cov.pct_wos_in_gs, Some(60.0));
    assert_eq!(partition_regions(&[]), RegionCounts::default());
}

#[test]
fn spearman_tied_example_against_oracle() {
    let (x, y) = ([1.0, 1.0, 2.0], [1.0, 2.0, 3.0]);
    let got = spearman(&x, &y).unwrap().unwrap();
    let want = naive_spearman(&x, &y).unwrap();
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    assert!((got - 3f64.sqrt() / 2.0).abs() < 1e-12);
}

#[test]
fn log_summary_against_direct_formulas() {
    let s = log_summary(&[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap();
    assert!((s.median - 1.0986122886681096).abs() < 1e-12);
    assert!((s.mean - 1.1151898206292632).abs() < 1e-12);
    assert!((s.ci_half_width - 0.776723306666031).abs() < 1e-12);
    let one = log_summary(&[std::f64::consts::E - 1.0]).unwrap();
    assert!((one.mean - 1.0).abs() < 1e-12);
    assert_eq!(one.ci_half_width, 0.0);
}

proptest! {
    #[test]
    fn spearman_ignores_increasing_transforms(
        pairs in prop::collection::vec((0u32..40, 0u32..40), 2..60),
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let cubed: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        match (spearman(&x, &y).unwrap(), spearman(&cubed, &y).unwrap()) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn mean_ratio_above_one_iff_smoothed_ratios_say_so(
        pairs in prop::collection::vec((0u64..500, 0u64..500), 1..40),
    ) {
        let r = mean_ratio(&pairs).unwrap();
        let direct: f64 = pairs.iter().map(|&(g, o)| (g + 1) as f64 / (o + 1) as f64).sum::<f64>() / pairs.len() as f64;
        prop_assert!((r - direct).abs() < 1e-12);
        prop_assert_eq!(r > 1.0, direct > 1.0);
    }

    #[test]
    fn correction_preserves_mass(
        raw_known in prop::collection::vec(0.0f64..1.0, 6),
        raw_sample in prop::collection::vec(0.0f64..1.0, 6),
        unknown in 0.0f64..=1.0,
    ) {
        let known_types = &DocumentType::ALL[..6];
        let ks: f64 = raw_known.iter().sum();
        let ss: f64 = raw_sample.iter().sum();
        prop_assume!(ks > 0.0 && ss > 0.0);
        let known: BTreeMap<DocumentType, f64> = known_types
            .iter()
            .zip(&raw_known)
            .map(|(t, v)| (*t, v / ks * (1.0 - unknown)))
            .collect();
        let sample: BTreeMap<DocumentType, f64> =
            known_types.iter().zip(&raw_sample).map(|(t, v)| (*t, v / ss)).collect();
        let out = apply_correction(&known, unknown, &sample).unwrap();
        prop_assert!((out.values().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert_eq!(out[&DocumentType::Unknown], 0.0);
    }
}

#[test]
fn correction_boundaries() {
    use DocumentType::*;
    let known: BTreeMap<_, _> = [(Journal, 0.6), (Book, 0.4)].into_iter().collect();
    let sample: BTreeMap<_, _> = [(Thesis, 1.0)].into_iter().collect();
    let same = apply_correction(&known, 0.0, &sample).unwrap();
    assert_eq!(same[&Journal], 0.6);
    assert_eq!(same[&Thesis], 0.0);

    let all_unknown = apply_correction(&BTreeMap::new(), 1.0, &sample).unwrap();
    assert_eq!(all_unknown[&Thesis], 1.0);
    assert_eq!(all_unknown.values().sum::<f64>(), 1.0);
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkage::CitationCluster;

/// One of the seven non-empty combinations of databases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    G,
    W,
    S,
    GW,
    GSc,
    WS,
    GWS,
}

impl Region {
    pub const ALL: [Region; 7] = [Region::G, Region::W, Region::S, Region::GW, Region::GSc, Region::WS, Region::GWS];

    pub fn as_str(self) -> &'static str {
        match self {
            Region::G => "G",
            Region::W => "W",
            Region::S => "S",
            Region::GW => "GW",
            Region::GSc => "GSc",
            Region::WS => "WS",
            Region::GWS => "GWS",
        }
    }

    /// Presence bit set (GS=1, WOS=2, SCOPUS=4).
    pub fn mask(self) -> u8 {
        match self {
            Region::G => 1,
            Region::W => 2,
            Region::S => 4,
            Region::GW => 3,
            Region::GSc => 5,
            Region::WS => 6,
            Region::GWS => 7,
        }
    }

    /// Region for a presence bit set (GS=1, WOS=2, SCOPUS=4).
    pub fn from_mask(mask: u8) -> Option<Region> {
        Some(match mask {
            1 => Region::G,
            2 => Region::W,
            4 => Region::S,
            3 => Region::GW,
            5 => Region::GSc,
            6 => Region::WS,
            7 => Region::GWS,
            _ => return None,
        })
    }
}

/// Cluster tallies for the seven Venn regions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionCounts {
    pub g: u64,
    pub w: u64,
    pub s: u64,
    pub gw: u64,
    pub gs: u64,
    pub ws: u64,
    pub gws: u64,
    pub total: u64,
}

impl RegionCounts {
    pub fn get(&self, region: Region) -> u64 {
        match region {
            Region::G => self.g,
            Region::W => self.w,
            Region::S => self.s,
            Region::GW => self.gw,
            Region::GSc => self.gs,
            Region::WS => self.ws,
            Region::GWS => self.gws,
        }
    }

    pub fn add(&mut self, region: Region) {
        let slot = match region {
            Region::G => &mut self.g,
            Region::W => &mut self.w,
            Region::S => &mut self.s,
            Region::GW => &mut self.gw,
            Region::GSc => &mut self.gs,
            Region::WS => &mut self.ws,
            Region::GWS => &mut self.gws,
        };
        *slot += 1;
        self.total += 1;
    }

    pub fn gs_total(&self) -> u64 {
        self.g + self.gw + self.gs + self.gws
    }

    pub fn wos_total(&self) -> u64 {
        self.w + self.gw + self.ws + self.gws
    }

    pub fn scopus_total(&self) -> u64 {
        self.s + self.gs + self.ws + self.gws
    }
}

/// Tallies each cluster into the region given by its presence.
pub fn partition_regions<'a>(clusters: impl IntoIterator<Item = &'a CitationCluster>) -> RegionCounts {
    let mut rc = RegionCounts::default();
    for c in clusters {
        if let Some(region) = Region::from_mask(c.presence_mask()) {
            rc.add(region);
        }
    }
    rc
}

/// Coverage percentages. Conditional values are `None` when the database
/// they are conditioned on found nothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageSummary {
    pub pct_gs_all: f64,
    pub pct_wos_all: f64,
    pub pct_scopus_all: f64,
    /// Share of WoS citations that GS also found.
    pub pct_wos_in_gs: Option<f64>,
    /// Share of Scopus citations that GS also found.
    pub pct_scopus_in_gs: Option<f64>,
    /// Share of WoS citations that Scopus also found.
    pub pct_wos_in_scopus: Option<f64>,
}

fn pct(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

pub fn coverage_metrics(rc: &RegionCounts) -> Result<CoverageSummary> {
    if rc.total == 0 {
        return Err(Error::validation("coverage of zero citations is undefined"));
    }
    Ok(CoverageSummary {
        pct_gs_all: 100.0 * rc.gs_total() as f64 / rc.total as f64,
        pct_wos_all: 100.0 * rc.wos_total() as f64 / rc.total as f64,
        pct_scopus_all: 100.0 * rc.scopus_total() as f64 / rc.total as f64,
        pct_wos_in_gs: pct(rc.gw + rc.gws, rc.wos_total()),
        pct_scopus_in_gs: pct(rc.gs + rc.gws, rc.scopus_total()),
        pct_wos_in_scopus: pct(rc.ws + rc.gws, rc.wos_total()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SourceDatabase::{self, *};

    fn cluster(presence: &[SourceDatabase]) -> CitationCluster {
        CitationCluster {
            cluster_id: "c".into(),
            cited_doc_id: "X".into(),
            members: vec![],
            presence: presence.to_vec(),
            flagged: false,
        }
    }

    fn ten() -> RegionCounts {
        RegionCounts {
            g: 3,
            w: 1,
            s: 1,
            gw: 1,
            gs: 1,
            ws: 1,
            gws: 2,
            total: 10,
        }
    }

    #[test]
    fn mask_round_trip() {
        for r in Region::ALL {
            assert_eq!(Region::from_mask(r.mask()), Some(r));
        }
    }

    #[test]
    fn partition_examples() {
        let rc = partition_regions(&[cluster(&[Gs]), cluster(&[Gs, Wos, Scopus])]);
        assert_eq!((rc.g, rc.gws, rc.total), (1, 1, 2));
        assert_eq!(partition_regions(&[]), RegionCounts::default());

        let mut clusters = Vec::new();
        for (p, n) in [
            (vec![Gs], 3),
            (vec![Wos], 1),
            (vec![Scopus], 1),
            (vec![Gs, Wos], 1),
            (vec![Gs, Scopus], 1),
            (vec![Wos, Scopus], 1),
            (vec![Gs, Wos, Scopus], 2),
        ] {
            clusters.extend(std::iter::repeat_n(cluster(&p), n));
        }
        assert_eq!(partition_regions(&clusters), ten());
    }

    #[test]
    fn coverage_examples() {
        let c = coverage_metrics(&ten()).unwrap();
        assert_eq!(c.pct_gs_all, 70.0);
        assert_eq!(c.pct_wos_all, 50.0);
        assert_eq!(c.pct_scopus_all, 50.0);
        assert_eq!(c.pct_wos_in_gs, Some(60.0));

        let all = RegionCounts {
            gws: 4,
            total: 4,
            ..Default::default()
        };
        let c = coverage_metrics(&all).unwrap();
        for v in [c.pct_gs_all, c.pct_wos_all, c.pct_scopus_all] {
            assert_eq!(v, 100.0);
        }
        for v in [c.pct_wos_in_gs, c.pct_scopus_in_gs, c.pct_wos_in_scopus] {
            assert_eq!(v, Some(100.0));
        }

        let no_wos = RegionCounts {
            g: 2,
            s: 1,
            total: 3,
            ..Default::default()
        };
        assert_eq!(coverage_metrics(&no_wos).unwrap().pct_wos_in_gs, None);
        assert!(coverage_metrics(&RegionCounts::default()).is_err());
    }
}

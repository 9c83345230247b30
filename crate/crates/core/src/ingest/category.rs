use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{decode_utf8, Reject};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quartile {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quartile {
    pub const ALL: [Quartile; 4] = [Quartile::Q1, Quartile::Q2, Quartile::Q3, Quartile::Q4];

    pub fn as_str(self) -> &'static str {
        match self {
            Quartile::Q1 => "Q1",
            Quartile::Q2 => "Q2",
            Quartile::Q3 => "Q3",
            Quartile::Q4 => "Q4",
        }
    }
}

impl fmt::Display for Quartile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quartile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quartile::ALL
            .into_iter()
            .find(|q| q.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::validation(format!("invalid quartile {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryEntry {
    pub category: String,
    pub broad_area: String,
    pub quartile: Option<Quartile>,
}

/// Venue to subject category, broad area and quartile.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CategoryMap {
    entries: BTreeMap<String, CategoryEntry>,
    pub warnings: Vec<String>,
    pub rejects: Vec<Reject>,
}

/// Lowercased, trimmed, whitespace-collapsed venue key.
pub fn venue_key(venue: &str) -> String {
    venue.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

impl CategoryMap {
    pub fn get(&self, venue: &str) -> Option<&CategoryEntry> {
        self.entries.get(&venue_key(venue))
    }

    pub fn insert(&mut self, venue: &str, entry: CategoryEntry) -> bool {
        self.entries.insert(venue_key(venue), entry).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &CategoryEntry)> {
        self.entries.iter()
    }
}

/// Reads `venue,category,broad_area,quartile` rows. A header row with
/// those names is optional. Later duplicates replace earlier ones.
pub fn load_category_map(bytes: &[u8], name: &str) -> Result<CategoryMap> {
    let text = decode_utf8(bytes, name)?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut map = CategoryMap::default();
    for (idx, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::MalformedCsv {
            path: name.to_string(),
            row: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(idx as u64 + 1);
        if idx == 0 && row.get(0).is_some_and(|v| v.eq_ignore_ascii_case("venue")) {
            continue;
        }
        if row.len() < 3 || row.len() > 4 {
            map.rejects.push(Reject {
                file: name.to_string(),
                line,
                reason: format!("expected 4 fields, found {}", row.len()),
            });
            continue;
        }
        let quartile = match row.get(3).unwrap_or("") {
            "" => None,
            q => match q.parse::<Quartile>() {
                Ok(q) => Some(q),
                Err(_) => {
                    map.rejects.push(Reject {
                        file: name.to_string(),
                        line,
                        reason: format!("invalid quartile {q:?}"),
                    });
                    continue;
                }
            },
        };
        let venue = &row[0];
        if venue.is_empty() {
            map.rejects.push(Reject {
                file: name.to_string(),
                line,
                reason: "empty venue".into(),
            });
            continue;
        }
        let entry = CategoryEntry {
            category: row[1].to_string(),
            broad_area: row[2].to_string(),
            quartile,
        };
        if map.insert(venue, entry) {
            map.warnings.push(format!("{name}:{line}: duplicate venue {venue:?}, last row wins"));
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let map = load_category_map(b"Scientometrics,Information Science,Social Sciences,Q1\n", "c").unwrap();
        let e = map.get("  SCIENTOMETRICS ").unwrap();
        assert_eq!(e.quartile, Some(Quartile::Q1));
        assert_eq!(e.broad_area, "Social Sciences");
    }

    #[test]
    fn duplicates_last_wins() {
        let data = "venue,category,broad_area,quartile\nNature,Multi,Science,Q1\nnature,Multi,Science,Q2\n";
        let map = load_category_map(data.as_bytes(), "c").unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map.warnings.len(), 1);
        assert_eq!(map.get("Nature").unwrap().quartile, Some(Quartile::Q2));
    }

    #[test]
    fn bad_quartile_rejected() {
        let map = load_category_map(b"X,Y,Z,Q7\nA,B,C,\n", "c").unwrap();
        assert_eq!(map.rejects.len(), 1);
        assert!(map.get("X").is_none());
        assert_eq!(map.get("A").unwrap().quartile, None);
    }
}

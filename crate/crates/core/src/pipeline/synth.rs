//! Synthetic three-database corpora with known cluster structure.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(spec.seed)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{write_file, write_json, InputFile, Inputs, PipelineConfig};
use crate::analytics::{partition_regions, Region, RegionCounts};
use crate::error::{Error, Result};
use crate::linkage::{osa_distance, title_similarity, CitationCluster};
use crate::model::{normalize_title, SourceDatabase};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthNoise {
    /// Upper bound on character edits applied to each duplicate title.
    pub max_edits: usize,
    /// Probability that a record loses its DOI.
    pub doi_drop: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub cited_docs: usize,
    /// Target number of citing records over all three sources.
    pub records: usize,
    /// Share of clusters in each region; must sum to 1.
    pub proportions: BTreeMap<Region, f64>,
    #[serde(default)]
    pub noise: SynthNoise,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TruthRow {
    pub cited_doc_id: String,
    pub source: SourceDatabase,
    pub record_id: String,
    pub cluster: String,
}

/// Export files as text, plus the planted truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub gs: String,
    pub wos: String,
    pub scopus: String,
    pub categories: String,
    pub truth: Vec<TruthRow>,
    pub regions: RegionCounts,
}

const MIN_TITLE_CHARS: usize = 34;

const WORDS: &[&str] = &[
    "analysis", "citation", "network", "impact", "scholarly", "journal", "research", "evaluation", "metrics",
    "bibliometric", "indicators", "science", "scientific", "publication", "productivity", "authors", "collaboration",
    "international", "patterns", "growth", "knowledge", "diffusion", "open", "access", "repository", "database",
    "coverage", "comparison", "google", "scholar", "web", "scopus", "universities", "ranking", "quality", "peer",
    "review", "editorial", "policy", "funding", "gender", "differences", "mobility", "careers", "early", "young",
    "social", "media", "altmetrics", "attention", "twitter", "mentions", "usage", "downloads", "reading", "mendeley",
    "field", "normalized", "measures", "h-index", "variants", "distribution", "skewed", "models", "statistical",
    "regression", "prediction", "future", "trends", "emerging", "topics", "mapping", "clusters", "visualization",
    "text", "mining", "semantic", "similarity", "classification", "documents", "abstracts", "keywords", "titles",
    "language", "english", "global", "south", "regional", "national", "systems", "innovation", "patents", "industry",
    "technology", "transfer", "economics", "health", "medicine", "clinical", "trials", "nursing", "education",
    "teaching", "learning", "students", "online", "courses", "digital", "libraries", "archives", "preservation",
    "data", "sharing", "reuse", "reproducibility", "software", "code", "algorithms", "machine", "deep", "neural",
    "retrieval", "search", "engines", "queries", "relevance", "users", "behaviour", "information", "seeking",
    "case", "study", "evidence", "from", "spain", "brazil", "china", "india", "africa", "europe", "latin", "america",
    "towards", "framework", "approach", "method", "new", "perspective", "critical", "assessment", "validity",
    "reliability", "bias", "errors", "duplicates", "matching", "linkage", "records", "identifiers", "persistent",
    "orcid", "doi", "metadata", "completeness", "accuracy", "consistency", "longitudinal", "decade", "century",
];

const FAMILY_NAMES: &[&str] = &[
    "smith", "garcia", "martin", "lopez", "wang", "li", "zhang", "chen", "kumar", "singh", "silva", "santos", "mueller",
    "schmidt", "rossi", "bianchi", "dubois", "moreau", "jansen", "devries", "nowak", "kowalski", "yilmaz", "kaya",
    "andersson", "johansson", "brown", "jones", "taylor", "wilson", "evans", "thomas", "roberts", "walker", "wright",
    "thompson", "white", "harris", "clark", "lewis", "young", "king", "hall", "allen", "scott", "green", "adams",
    "baker", "nelson", "carter", "mitchell", "perez", "sanchez", "ramirez", "torres", "flores", "rivera", "gomez",
];

/// Venue, category, broad area, quartile.
const VENUES: &[(&str, &str, &str, &str)] = &[
    ("Scientometrics", "Information Science", "Social Sciences", "Q1"),
    ("Journal of Informetrics", "Information Science", "Social Sciences", "Q1"),
    ("Research Evaluation", "Information Science", "Social Sciences", "Q2"),
    ("Online Information Review", "Information Science", "Social Sciences", "Q3"),
    ("Learned Publishing", "Information Science", "Social Sciences", "Q4"),
    ("PLOS ONE", "Multidisciplinary Sciences", "Life Sciences", "Q2"),
    ("BMJ Open", "General Medicine", "Health Sciences", "Q2"),
    ("The Lancet", "General Medicine", "Health Sciences", "Q1"),
    ("Nursing Outlook", "Nursing", "Health Sciences", "Q3"),
    ("Computers & Education", "Education Research", "Social Sciences", "Q1"),
    ("IEEE Access", "Computer Science", "Engineering", "Q2"),
    ("Expert Systems with Applications", "Computer Science", "Engineering", "Q1"),
];

const HOSTS: &[&str] = &["springer.com", "elsevier.com", "wiley.com", "tandfonline.com", "ncbi.nlm.nih.gov"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Journal,
    Conference,
    Chapter,
    Thesis,
    Untyped,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.cited_docs == 0 || self.records == 0 {
            return Err(Error::validation("synth spec needs at least one cited document and one record"));
        }
        if let Some((r, p)) = self.proportions.iter().find(|(_, p)| !(**p >= 0.0 && **p <= 1.0)) {
            return Err(Error::validation(format!("proportion for {} must lie in [0, 1], got {p}", r.as_str())));
        }
        let sum: f64 = self.proportions.values().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::validation(format!("region proportions sum to {sum}, not 1")));
        }
        if !(0.0..=1.0).contains(&self.noise.doi_drop) {
            return Err(Error::validation("doi_drop must lie in [0, 1]"));
        }
        Ok(())
    }
}

fn region_sources(r: Region) -> Vec<SourceDatabase> {
    SourceDatabase::ALL.into_iter().filter(|s| r.mask() & s.bit() != 0).collect()
}

/// Cluster count per region by largest remainder; ties go to the earlier
/// region.
fn allocate(proportions: &BTreeMap<Region, f64>, n: usize) -> BTreeMap<Region, usize> {
    let mut out: BTreeMap<Region, usize> = BTreeMap::new();
    let mut remainders = Vec::new();
    let mut used = 0;
    for r in Region::ALL {
        let q = proportions.get(&r).copied().unwrap_or(0.0) * n as f64;
        let base = q.floor() as usize;
        out.insert(r, base);
        used += base;
        remainders.push((q - base as f64, r));
    }
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, r) in remainders.into_iter().take(n.saturating_sub(used)) {
        *out.get_mut(&r).unwrap() += 1;
    }
    out
}

fn random_title(rng: &mut ChaCha8Rng, min_chars: usize) -> String {
    let mut words: Vec<&str> = Vec::new();
    while words.join(" ").len() < min_chars || words.len() < 5 {
        words.push(WORDS.choose(rng).unwrap());
    }
    words.join(" ")
}

fn random_letter(rng: &mut ChaCha8Rng) -> char {
    (b'a' + rng.random_range(0..26u8)) as char
}

/// Applies up to `k` single-character edits to letters of `title`, keeping
/// the OSA distance to the original at most `k`.
fn perturb(title: &str, k: usize, rng: &mut ChaCha8Rng) -> String {
    let mut cs: Vec<char> = title.chars().collect();
    for step in 1..=k {
        // OSA has no triangle inequality, so an edit is kept only if the
        // distance to the original stays within the edits made so far.
        for _ in 0..16 {
            let next = edit_once(&cs, rng);
            let text: String = next.iter().collect();
            if osa_distance(title, &text) <= step {
                cs = next;
                break;
            }
        }
    }
    cs.into_iter().collect()
}

fn edit_once(cs: &[char], rng: &mut ChaCha8Rng) -> Vec<char> {
    let mut cs = cs.to_vec();
    let letter = |cs: &[char], i: usize| cs.get(i).is_some_and(|c| c.is_ascii_lowercase());
    let n = cs.len();
    match rng.random_range(0..4) {
        0 => {
            let pos: Vec<usize> = (0..n).filter(|&i| letter(&cs, i)).collect();
            let i = *pos.choose(rng).unwrap();
            let mut c = random_letter(rng);
            while c == cs[i] {
                c = random_letter(rng);
            }
            cs[i] = c;
        }
        1 => {
            let pos: Vec<usize> = (0..n)
                .filter(|&i| letter(&cs, i) && ((i > 0 && letter(&cs, i - 1)) || letter(&cs, i + 1)))
                .collect();
            if let Some(&i) = pos.choose(rng) {
                cs.remove(i);
            }
        }
        2 => {
            let pos: Vec<usize> = (0..n).filter(|&i| letter(&cs, i)).collect();
            let i = *pos.choose(rng).unwrap();
            let c = random_letter(rng);
            cs.insert(i + 1, c);
        }
        _ => {
            let pos: Vec<usize> = (0..n.saturating_sub(1))
                .filter(|&i| letter(&cs, i) && letter(&cs, i + 1) && cs[i] != cs[i + 1])
                .collect();
            if let Some(&i) = pos.choose(rng) {
                cs.swap(i, i + 1);
            }
        }
    }
    cs
}

fn sentence_case(s: &str) -> String {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) => c.to_uppercase().chain(cs).collect(),
        None => String::new(),
    }
}

fn title_case(s: &str) -> String {
    s.split(' ').map(sentence_case).collect::<Vec<_>>().join(" ")
}

struct Planted {
    cited: String,
    cluster: String,
    region: Region,
    title: String,
    authors: Vec<(String, char)>,
    year: i32,
    venue: usize,
    kind: Kind,
    language: &'static str,
    doi: String,
    cites: u64,
}

/// Generates a corpus from `spec`. The same spec always yields the same
/// bytes.
pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let expected: f64 = spec.proportions.iter().map(|(r, p)| p * r.mask().count_ones() as f64).sum();
    let n_clusters = ((spec.records as f64 / expected).round() as usize).max(1);
    let mut regions: Vec<Region> = allocate(&spec.proportions, n_clusters)
        .into_iter()
        .flat_map(|(r, c)| std::iter::repeat_n(r, c))
        .collect();
    regions.shuffle(&mut rng);

    let min_chars = MIN_TITLE_CHARS.max(30 + spec.noise.max_edits);
    let mut titles_by_doc: HashMap<usize, Vec<String>> = HashMap::new();
    let mut planted = Vec::with_capacity(regions.len());
    let mut region_counts = RegionCounts::default();
    for (i, region) in regions.into_iter().enumerate() {
        region_counts.add(region);
        let doc = i % spec.cited_docs;
        let seen = titles_by_doc.entry(doc).or_default();
        let mut title = random_title(&mut rng, min_chars);
        for _ in 0..100 {
            let norm = normalize_title(&title);
            if seen.iter().all(|t| title_similarity(t, &norm) < 0.6) {
                break;
            }
            title = random_title(&mut rng, min_chars);
        }
        seen.push(normalize_title(&title));

        let n_authors = rng.random_range(1..=3);
        let authors = (0..n_authors)
            .map(|_| (FAMILY_NAMES.choose(&mut rng).unwrap().to_string(), random_letter(&mut rng)))
            .collect();
        let single_gs = region == Region::G;
        let kind = match rng.random_range(0..100) {
            0..55 => Kind::Journal,
            55..65 => Kind::Conference,
            65..75 if single_gs => Kind::Chapter,
            75..85 if single_gs => Kind::Thesis,
            85.. if single_gs => Kind::Untyped,
            _ => Kind::Journal,
        };
        let language = match rng.random_range(0..100) {
            0..90 => "en",
            90..95 => "es",
            _ => "pt",
        };
        planted.push(Planted {
            cited: format!("D{doc:05}"),
            cluster: format!("T{i:07}"),
            region,
            title,
            authors,
            year: rng.random_range(1995..=2016),
            venue: rng.random_range(0..VENUES.len()),
            kind,
            language,
            doi: format!("10.5555/synth.{i:07}"),
            cites: rng.random_range(0..500u64).pow(2) / 500,
        });
    }

    let mut gs_lines = String::new();
    let mut wos_rows = String::from("UT\tTI\tAU\tPY\tDI\tDT\tLA\tTC\tSO\tCD\n");
    let mut scopus = csv::Writer::from_writer(Vec::new());
    scopus.write_record([
        "Authors",
        "Title",
        "Year",
        "Source title",
        "Cited by",
        "DOI",
        "Link",
        "Document Type",
        "EID",
        "Cited document",
    ])?;
    let mut truth = Vec::new();
    let mut counters: BTreeMap<SourceDatabase, usize> = BTreeMap::new();
    let language_name = |l: &str| match l {
        "es" => "Spanish",
        "pt" => "Portuguese",
        _ => "English",
    };

    for p in &planted {
        let (venue, ..) = VENUES[p.venue];
        for (copy, source) in region_sources(p.region).into_iter().enumerate() {
            let n = counters.entry(source).or_default();
            *n += 1;
            let title = if copy == 0 || spec.noise.max_edits == 0 {
                p.title.clone()
            } else {
                let k = rng.random_range(0..=spec.noise.max_edits);
                perturb(&p.title, k, &mut rng)
            };
            let doi = (!rng.random_bool(spec.noise.doi_drop)).then_some(p.doi.as_str());
            let cites = match source {
                SourceDatabase::Gs => p.cites,
                _ => (p.cites as f64 * rng.random_range(0.4..0.9)).round() as u64,
            };
            let record_id = match source {
                SourceDatabase::Gs => {
                    let id = format!("{:012}", *n);
                    let byline_authors: Vec<String> = p
                        .authors
                        .iter()
                        .map(|(f, i)| format!("{} {}", i.to_ascii_uppercase(), sentence_case(f)))
                        .collect();
                    let host = HOSTS[p.venue % HOSTS.len()];
                    let mut meta = serde_json::Map::new();
                    let typed = match p.kind {
                        Kind::Journal => Some(("citation_journal_title", venue)),
                        Kind::Conference => Some(("citation_conference_title", "Proceedings")),
                        Kind::Chapter => Some(("citation_inbook_title", "Handbook")),
                        Kind::Thesis => Some(("citation_dissertation_institution", "University")),
                        Kind::Untyped => None,
                    };
                    if let Some((k, v)) = typed {
                        meta.insert(k.into(), json!(v));
                        meta.insert("citation_language".into(), json!(p.language));
                    }
                    let venue_part = match p.kind {
                        Kind::Journal => format!("{venue}, {}", p.year),
                        _ => p.year.to_string(),
                    };
                    let line = json!({
                        "title": sentence_case(&title),
                        "cluster_id": id,
                        "url": format!("https://{host}/article/{id}"),
                        "byline": format!("{} - {venue_part} - {host}", byline_authors.join(", ")),
                        "year": p.year,
                        "cites": cites,
                        "doi": doi,
                        "meta": meta,
                        "cited_doc_id": p.cited,
                    });
                    gs_lines.push_str(&line.to_string());
                    gs_lines.push('\n');
                    id
                }
                SourceDatabase::Wos => {
                    let id = format!("WOS:{:015}", *n);
                    let au: Vec<String> =
                        p.authors.iter().map(|(f, i)| format!("{}, {}", sentence_case(f), i.to_ascii_uppercase())).collect();
                    let dt = match p.kind {
                        Kind::Conference => "Proceedings Paper",
                        _ => "Article",
                    };
                    wos_rows.push_str(
                        &[
                            id.as_str(),
                            &title.to_uppercase(),
                            &au.join("; "),
                            &p.year.to_string(),
                            doi.unwrap_or(""),
                            dt,
                            language_name(p.language),
                            &cites.to_string(),
                            &venue.to_uppercase(),
                            &p.cited,
                        ]
                        .join("\t"),
                    );
                    wos_rows.push('\n');
                    id
                }
                SourceDatabase::Scopus => {
                    let id = format!("2-s2.0-{:011}", *n);
                    let au: Vec<String> =
                        p.authors.iter().map(|(f, i)| format!("{} {}.", sentence_case(f), i.to_ascii_uppercase())).collect();
                    let dt = match p.kind {
                        Kind::Conference => "Conference Paper",
                        _ => "Article",
                    };
                    scopus.write_record([
                        au.join(", ").as_str(),
                        &title_case(&title),
                        &p.year.to_string(),
                        venue,
                        &cites.to_string(),
                        doi.unwrap_or(""),
                        &format!("https://www.scopus.com/record/display.uri?eid={id}"),
                        dt,
                        &id,
                        &p.cited,
                    ])?;
                    id
                }
            };
            truth.push(TruthRow {
                cited_doc_id: p.cited.clone(),
                source,
                record_id,
                cluster: p.cluster.clone(),
            });
        }
    }
    truth.sort();

    let mut categories = String::from("venue,category,broad_area,quartile\n");
    for (v, c, b, q) in VENUES {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([*v, *c, *b, *q])?;
        categories.push_str(&String::from_utf8_lossy(&w.into_inner().map_err(|e| Error::validation(e.to_string()))?));
    }
    let scopus = String::from_utf8(scopus.into_inner().map_err(|e| Error::validation(e.to_string()))?)
        .map_err(|e| Error::validation(e.to_string()))?;
    Ok(SynthCorpus {
        gs: gs_lines,
        wos: wos_rows,
        scopus,
        categories,
        truth,
        regions: region_counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSummary {
    pub records: usize,
    pub clusters: u64,
    pub regions: RegionCounts,
}

/// Writes `gs.jsonl`, `wos.tsv`, `scopus.csv`, `categories.csv`,
/// `truth.csv` and a ready-to-run `pipeline.json` into `out_dir`.
pub fn cmd_synth(spec: &SynthSpec, out_dir: &Path) -> Result<SynthSummary> {
    let corpus = generate(spec)?;
    write_file(&out_dir.join("gs.jsonl"), &corpus.gs)?;
    write_file(&out_dir.join("wos.tsv"), &corpus.wos)?;
    write_file(&out_dir.join("scopus.csv"), &corpus.scopus)?;
    write_file(&out_dir.join("categories.csv"), &corpus.categories)?;
    write_truth(&out_dir.join("truth.csv"), &corpus.truth)?;
    let cfg = PipelineConfig {
        inputs: Inputs {
            gs: vec![InputFile::Path("gs.jsonl".into())],
            wos: vec![InputFile::Path("wos.tsv".into())],
            scopus: vec![InputFile::Path("scopus.csv".into())],
        },
        category_map: Some("categories.csv".into()),
        output_dir: "out".into(),
        seed: Some(spec.seed),
        ..Default::default()
    };
    write_json(&out_dir.join("pipeline.json"), &cfg)?;
    Ok(SynthSummary {
        records: corpus.truth.len(),
        clusters: corpus.regions.total,
        regions: corpus.regions,
    })
}

pub fn write_truth(path: &Path, truth: &[TruthRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in truth {
        w.serialize(t)?;
    }
    write_file(path, w.into_inner().map_err(|e| Error::validation(e.to_string()))?)
}

pub fn read_truth(path: &Path) -> Result<Vec<TruthRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::validation(format!("{}: {other:?}", path.display())),
    })?;
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Pairwise precision, recall and F1 of recovered clusters against the
/// truth, and the region tallies of both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub true_pairs: usize,
    pub found_pairs: usize,
    pub correct_pairs: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub truth_regions: RegionCounts,
    pub found_regions: RegionCounts,
    /// Largest absolute difference between region shares, in percentage
    /// points.
    pub max_region_diff_pp: f64,
}

type PairKey = (String, String, String);

fn pairs_of<'a>(cited: &str, members: impl IntoIterator<Item = &'a String>, out: &mut BTreeSet<PairKey>) {
    let mut ms: Vec<&String> = members.into_iter().collect();
    ms.sort();
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            out.insert((cited.to_string(), ms[i].clone(), ms[j].clone()));
        }
    }
}

pub fn evaluate(truth: &[TruthRow], clusters: &[CitationCluster]) -> Evaluation {
    let mut planted: BTreeMap<(&str, &str), (Vec<&String>, u8)> = BTreeMap::new();
    for t in truth {
        let e = planted.entry((&t.cited_doc_id, &t.cluster)).or_default();
        e.0.push(&t.record_id);
        e.1 |= t.source.bit();
    }
    let mut truth_pairs = BTreeSet::new();
    let mut truth_regions = RegionCounts::default();
    for ((cited, _), (members, mask)) in &planted {
        pairs_of(cited, members.iter().copied(), &mut truth_pairs);
        if let Some(r) = Region::from_mask(*mask) {
            truth_regions.add(r);
        }
    }
    let mut found_pairs = BTreeSet::new();
    for c in clusters {
        pairs_of(&c.cited_doc_id, &c.members, &mut found_pairs);
    }
    let found_regions = partition_regions(clusters);
    let correct = truth_pairs.intersection(&found_pairs).count();
    let ratio = |a: usize, b: usize| if b == 0 { 1.0 } else { a as f64 / b as f64 };
    let precision = ratio(correct, found_pairs.len());
    let recall = ratio(correct, truth_pairs.len());
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let share = |rc: &RegionCounts, r: Region| {
        if rc.total == 0 {
            0.0
        } else {
            100.0 * rc.get(r) as f64 / rc.total as f64
        }
    };
    let max_region_diff_pp = Region::ALL
        .iter()
        .map(|r| (share(&truth_regions, *r) - share(&found_regions, *r)).abs())
        .fold(0.0, f64::max);
    Evaluation {
        true_pairs: truth_pairs.len(),
        found_pairs: found_pairs.len(),
        correct_pairs: correct,
        precision,
        recall,
        f1,
        truth_regions,
        found_regions,
        max_region_diff_pp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(props: &[(Region, f64)]) -> SynthSpec {
        SynthSpec {
            cited_docs: 5,
            records: 300,
            proportions: props.iter().copied().collect(),
            noise: SynthNoise::default(),
            seed: 3,
        }
    }

    #[test]
    fn all_gws_spans_every_source() {
        let c = generate(&spec(&[(Region::GWS, 1.0)])).unwrap();
        assert_eq!(c.regions.gws, c.regions.total);
        assert_eq!(c.truth.len(), 300);
        let mut per_cluster: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &c.truth {
            *per_cluster.entry(&t.cluster).or_default() += 1;
        }
        assert!(per_cluster.values().all(|n| *n == 3));
    }

    #[test]
    fn proportions_must_sum_to_one() {
        assert!(generate(&spec(&[(Region::G, 0.5), (Region::W, 0.4)])).is_err());
    }

    #[test]
    fn same_seed_same_corpus() {
        let s = spec(&[(Region::G, 0.5), (Region::GWS, 0.5)]);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
    }

    #[test]
    fn largest_remainder() {
        let props = [(Region::G, 0.5), (Region::W, 0.25), (Region::S, 0.25)].into_iter().collect();
        let a = allocate(&props, 3);
        assert_eq!(a.values().sum::<usize>(), 3);
        assert_eq!((a[&Region::G], a[&Region::W], a[&Region::S]), (1, 1, 1));
        let tied = [(Region::G, 0.5), (Region::W, 0.5)].into_iter().collect();
        let b = allocate(&tied, 3);
        assert_eq!((b[&Region::G], b[&Region::W]), (2, 1));
    }

    #[test]
    fn perturb_stays_within_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let t = random_title(&mut rng, 34);
            let k = rng.random_range(0..=3);
            let p = perturb(&t, k, &mut rng);
            assert!(osa_distance(&normalize_title(&t), &normalize_title(&p)) <= k);
        }
    }

    #[test]
    fn sources_per_region() {
        use SourceDatabase::*;
        assert_eq!(region_sources(Region::GSc), vec![Gs, Scopus]);
        assert_eq!(region_sources(Region::WS), vec![Wos, Scopus]);
        assert_eq!(region_sources(Region::GWS), vec![Gs, Wos, Scopus]);
    }
}

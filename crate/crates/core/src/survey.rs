//! Census of all small graphs up to isomorphism: how many classes the
//! edge-count histogram and the characteristic polynomial tell apart.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::fixtures;
use crate::graph::{
    are_isomorphic, canonical_code, encode_graph6, CanonicalCode, Graph, GraphError,
    CANONICAL_CODE_MAX_VERTICES,
};
use crate::invariant::{
    char_poly, classical_histogram, quantum_histogram, EdgeHistogram, Fingerprint, InvariantError,
    QuantumMode, QuantumOptions,
};
use crate::simulator::SimConfig;

/// Largest census size for the simulated source.
pub const QPE_SURVEY_MAX_VERTICES: usize = 7;
/// Version stamped on cache entries; entries from other versions are ignored.
pub const CACHE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("census needs at least one vertex")]
    NoVertices,
    #[error("census on {n} vertices exceeds the limit of {cap} for this source")]
    TooManyVertices { n: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("collision {0} / {1} is isomorphic")]
    IsomorphicCollision(String, String),
    #[error("collision {0} / {1} has different classical histograms")]
    UnconfirmedCollision(String, String),
    #[error("counterexample check failed: {0}")]
    Counterexample(String),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
}

impl SurveyError {
    pub fn is_resource_cap(&self) -> bool {
        match self {
            SurveyError::TooManyVertices { .. } => true,
            SurveyError::Graph(GraphError::TooManyVertices { .. }) => true,
            SurveyError::Invariant(e) => e.is_resource_cap(),
            _ => false,
        }
    }

    pub fn is_internal(&self) -> bool {
        match self {
            SurveyError::IsomorphicCollision(..)
            | SurveyError::UnconfirmedCollision(..)
            | SurveyError::Counterexample(_) => true,
            SurveyError::Invariant(e) => e.is_internal(),
            _ => false,
        }
    }
}

/// Where per-class histograms come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SurveySource {
    #[default]
    Classical,
    QpeExact,
}

impl SurveySource {
    pub fn max_vertices(self) -> usize {
        match self {
            SurveySource::Classical => CANONICAL_CODE_MAX_VERTICES,
            SurveySource::QpeExact => QPE_SURVEY_MAX_VERTICES,
        }
    }
}

impl fmt::Display for SurveySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurveySource::Classical => "classical",
            SurveySource::QpeExact => "qpe-exact",
        })
    }
}

/// One representative per isomorphism class, sorted by canonical code.
#[derive(Debug, Clone)]
pub struct GraphClassSet {
    pub n: usize,
    pub representatives: Vec<Graph>,
}

impl GraphClassSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

fn check_cap(n: usize, cap: usize) -> Result<(), SurveyError> {
    if n == 0 {
        return Err(SurveyError::NoVertices);
    }
    if n > cap {
        return Err(SurveyError::TooManyVertices { n, cap });
    }
    Ok(())
}

/// Grows classes one vertex at a time: every class on `k - 1` vertices is
/// extended by a new vertex with each of the `2^(k-1)` neighbourhoods, and
/// the results are deduplicated by canonical code.
pub fn enumerate_classes(n: usize) -> Result<GraphClassSet, SurveyError> {
    check_cap(n, CANONICAL_CODE_MAX_VERTICES)?;
    let mut codes = vec![canonical_code(&Graph::empty(1)?)?];
    for k in 2..=n {
        let parents: Vec<Graph> = codes.iter().map(CanonicalCode::to_graph).collect();
        let mut next: Vec<CanonicalCode> = parents
            .par_iter()
            .flat_map_iter(|p| {
                (0..1u32 << (k - 1)).map(move |hood| {
                    let mut rows = p.adjacency_rows().to_vec();
                    for (v, row) in rows.iter_mut().enumerate() {
                        *row |= (hood >> v & 1) << (k - 1);
                    }
                    rows.push(hood);
                    let g = Graph::from_adjacency_rows(rows)?;
                    canonical_code(&g)
                })
            })
            .collect::<Result<_, _>>()?;
        next.par_sort_unstable();
        next.dedup();
        codes = next;
    }
    Ok(GraphClassSet {
        n,
        representatives: codes.iter().map(CanonicalCode::to_graph).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub n: usize,
    pub source: SurveySource,
    pub classes: usize,
    pub distinct_quantum: usize,
    pub distinct_spectra: usize,
    /// Non-isomorphic pairs sharing a histogram, as graph6 strings.
    pub collisions: Vec<[String; 2]>,
    /// The same pairs as indices into the sorted class list.
    pub collision_indices: Vec<[usize; 2]>,
    pub elapsed_seconds: f64,
}

impl SurveyReport {
    /// `"n: classes distinct_quantum distinct_spectra"`.
    pub fn row(&self) -> String {
        format!(
            "{}: {} {} {}",
            self.n, self.classes, self.distinct_quantum, self.distinct_spectra
        )
    }
}

fn class_histogram(g: &Graph, source: SurveySource) -> Result<EdgeHistogram, SurveyError> {
    match source {
        SurveySource::Classical => Ok(classical_histogram(g)?),
        SurveySource::QpeExact => {
            let opts = QuantumOptions {
                fuse: true,
                sim: SimConfig::default(),
            };
            let report = quantum_histogram(g, QuantumMode::Exact, opts)?;
            Ok(report.histogram().expect("exact mode yields counts"))
        }
    }
}

/// Computes both invariants for every class on `n` vertices and counts how
/// many distinct values each takes.
///
/// Every pair of classes sharing a histogram is rechecked: it must be
/// non-isomorphic and equal under the classical histogram.
pub fn run_survey(n: usize, source: SurveySource) -> Result<SurveyReport, SurveyError> {
    check_cap(n, source.max_vertices())?;
    let start = Instant::now();
    let classes = enumerate_classes(n)?;
    let reps = &classes.representatives;

    let invariants: Vec<(Fingerprint, crate::invariant::CharPoly)> = reps
        .par_iter()
        .map(|g| Ok((class_histogram(g, source)?.fingerprint(), char_poly(g)?)))
        .collect::<Result<_, SurveyError>>()?;

    let mut groups: BTreeMap<&Fingerprint, Vec<usize>> = BTreeMap::new();
    for (i, (fp, _)) in invariants.iter().enumerate() {
        groups.entry(fp).or_default().push(i);
    }
    let spectra: BTreeSet<_> = invariants.iter().map(|(_, p)| p).collect();

    let mut collision_indices = Vec::new();
    for members in groups.values() {
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                collision_indices.push([a, b]);
            }
        }
    }
    let collisions: Vec<[String; 2]> = collision_indices
        .par_iter()
        .map(|&[a, b]| {
            let (ga, gb) = (&reps[a], &reps[b]);
            let names = [encode_graph6(ga), encode_graph6(gb)];
            if are_isomorphic(ga, gb).is_some() {
                let [x, y] = names;
                return Err(SurveyError::IsomorphicCollision(x, y));
            }
            if classical_histogram(ga)? != classical_histogram(gb)? {
                let [x, y] = names;
                return Err(SurveyError::UnconfirmedCollision(x, y));
            }
            Ok(names)
        })
        .collect::<Result<_, _>>()?;

    Ok(SurveyReport {
        n,
        source,
        classes: reps.len(),
        distinct_quantum: groups.len(),
        distinct_spectra: spectra.len(),
        collisions,
        collision_indices,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Outcome of checking the fixed 7-vertex pair `g1`, `g2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub g1: String,
    pub g2: String,
    pub isomorphic: bool,
    pub counts: Vec<u64>,
    pub probabilities: Vec<f64>,
}

/// Confirms that `g1` and `g2` share a histogram but are not isomorphic.
pub fn verify_counterexample() -> Result<CounterexampleReport, SurveyError> {
    let (g1, g2) = (fixtures::g1(), fixtures::g2());
    let h1 = classical_histogram(&g1)?;
    let h2 = classical_histogram(&g2)?;
    if h1 != h2 {
        return Err(SurveyError::Counterexample(format!(
            "histograms differ: {} vs {}",
            h1.fingerprint(),
            h2.fingerprint()
        )));
    }
    let isomorphic = are_isomorphic(&g1, &g2).is_some();
    if isomorphic {
        return Err(SurveyError::Counterexample(
            "g1 and g2 are isomorphic".into(),
        ));
    }
    Ok(CounterexampleReport {
        g1: encode_graph6(&g1),
        g2: encode_graph6(&g2),
        isomorphic,
        counts: h1.counts().to_vec(),
        probabilities: h1.probabilities(),
    })
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    n: usize,
    source: SurveySource,
    version: String,
    report: Value,
    checksum: String,
}

fn checksum(report: &Value) -> String {
    hex::encode(Sha256::digest(report.to_string().as_bytes()))
}

fn entry_line(report: &SurveyReport, version: &str) -> String {
    let value = serde_json::to_value(report).expect("report serialises");
    let entry = CacheEntry {
        n: report.n,
        source: report.source,
        version: version.to_owned(),
        checksum: checksum(&value),
        report: value,
    };
    serde_json::to_string(&entry).expect("entry serialises")
}

fn read_entries(path: &Path) -> Result<Vec<CacheEntry>, SurveyError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let corrupt = |reason: String| SurveyError::Corrupt {
                line: i + 1,
                reason,
            };
            let entry: CacheEntry = serde_json::from_str(l).map_err(|e| corrupt(e.to_string()))?;
            if checksum(&entry.report) != entry.checksum {
                return Err(corrupt("checksum mismatch".into()));
            }
            Ok(entry)
        })
        .collect()
}

fn write_lines(path: &Path, lines: &[String]) -> Result<(), SurveyError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp)?;
    for line in lines {
        writeln!(file, "{line}")?;
    }
    file.sync_all()?;
    fs::rename(tmp, path)?;
    Ok(())
}

/// Stores `report` in the JSON-lines cache at `path`, replacing any entry
/// with the same `(n, source, version)` key.
pub fn save_report(path: &Path, report: &SurveyReport) -> Result<(), SurveyError> {
    save_entry(path, report, CACHE_VERSION)
}

fn save_entry(path: &Path, report: &SurveyReport, version: &str) -> Result<(), SurveyError> {
    let mut lines: Vec<String> = read_entries(path)?
        .into_iter()
        .filter(|e| !(e.n == report.n && e.source == report.source && e.version == version))
        .map(|e| serde_json::to_string(&e).expect("entry serialises"))
        .collect();
    lines.push(entry_line(report, version));
    write_lines(path, &lines)
}

/// Looks up the report for `(n, source)` written by this version.
///
/// Entries from other versions are ignored; a malformed line or a checksum
/// mismatch anywhere in the file is an error.
pub fn load_report(
    path: &Path,
    n: usize,
    source: SurveySource,
) -> Result<Option<SurveyReport>, SurveyError> {
    let Some((line, entry)) = read_entries(path)?
        .into_iter()
        .enumerate()
        .find(|(_, e)| e.n == n && e.source == source && e.version == CACHE_VERSION)
    else {
        return Ok(None);
    };
    serde_json::from_value(entry.report)
        .map(Some)
        .map_err(|e| SurveyError::Corrupt {
            line: line + 1,
            reason: e.to_string(),
        })
}

/// Cached survey: returns the stored report when present, otherwise
/// computes and stores it.
pub fn cached_survey(
    path: &Path,
    n: usize,
    source: SurveySource,
) -> Result<SurveyReport, SurveyError> {
    if let Some(report) = load_report(path, n, source)? {
        return Ok(report);
    }
    let report = run_survey(n, source)?;
    save_report(path, &report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_small() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| enumerate_classes(n).unwrap().len())
            .collect();
        assert_eq!(counts, [1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn representatives_are_pairwise_non_isomorphic() {
        let reps = enumerate_classes(5).unwrap().representatives;
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(are_isomorphic(a, b).is_none());
            }
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(enumerate_classes(0), Err(SurveyError::NoVertices)));
        assert!(enumerate_classes(9).unwrap_err().is_resource_cap());
        assert!(run_survey(8, SurveySource::QpeExact)
            .unwrap_err()
            .is_resource_cap());
    }

    #[test]
    fn small_surveys_have_no_collisions() {
        for n in 1..=5 {
            let r = run_survey(n, SurveySource::Classical).unwrap();
            assert_eq!(r.classes, r.distinct_quantum);
            assert!(r.collisions.is_empty());
        }
        let r = run_survey(5, SurveySource::Classical).unwrap();
        assert_eq!(
            (r.classes, r.distinct_quantum, r.distinct_spectra),
            (34, 34, 33)
        );
    }

    #[test]
    fn qpe_source_agrees_with_classical() {
        let a = run_survey(5, SurveySource::QpeExact).unwrap();
        let b = run_survey(5, SurveySource::Classical).unwrap();
        assert_eq!(a.row(), b.row());
    }

    #[test]
    fn counterexample() {
        let r = verify_counterexample().unwrap();
        assert_eq!(r.counts, [26, 33, 27, 18, 13, 5, 5, 0, 1]);
        assert!(!r.isomorphic);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.jsonl");
        assert!(load_report(&path, 4, SurveySource::Classical)
            .unwrap()
            .is_none());
        let r = run_survey(4, SurveySource::Classical).unwrap();
        save_report(&path, &r).unwrap();
        save_report(&path, &r).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1);
        assert_eq!(
            load_report(&path, 4, SurveySource::Classical).unwrap(),
            Some(r.clone())
        );
        assert!(load_report(&path, 4, SurveySource::QpeExact)
            .unwrap()
            .is_none());
        assert_eq!(cached_survey(&path, 4, SurveySource::Classical).unwrap(), r);
    }

    #[test]
    fn cache_from_other_version_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.jsonl");
        let mut r = run_survey(3, SurveySource::Classical).unwrap();
        r.classes = 999;
        save_entry(&path, &r, "0.0.0-old").unwrap();
        assert!(load_report(&path, 3, SurveySource::Classical)
            .unwrap()
            .is_none());
        assert_eq!(
            cached_survey(&path, 3, SurveySource::Classical)
                .unwrap()
                .classes,
            4
        );
    }

    #[test]
    fn tampered_cache_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.jsonl");
        save_report(&path, &run_survey(3, SurveySource::Classical).unwrap()).unwrap();
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\"classes\":4", "\"classes\":5");
        fs::write(&path, text).unwrap();
        let err = load_report(&path, 3, SurveySource::Classical).unwrap_err();
        assert!(matches!(err, SurveyError::Corrupt { line: 1, .. }), "{err}");
        fs::write(&path, "not json\n").unwrap();
        assert!(load_report(&path, 3, SurveySource::Classical).is_err());
    }
}

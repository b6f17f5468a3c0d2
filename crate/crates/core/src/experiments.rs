//! Seeded G(n, p) experiments.
//!
//! Graphs are sampled with ChaCha8 seeded from a 64-bit seed; pairs `(u, v)`
//! with `u < v` are visited in lexicographic order and each is kept when a
//! Bernoulli(p) draw succeeds. Trial `t` of a sweep uses
//! [`derive_seed`]`(master_seed, t)`, so trials are independent of execution
//! order and may run in parallel.
//!
//! Since the same seed yields the same stream of uniforms for any `p`, the
//! samples for one trial index are nested as `p` grows.

use std::fmt;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::audit::{contains_copy, rainbow_copy_search};
use crate::coloring::{anti_rainbow_coloring, is_proper_coloring};
use crate::decompose::verify_decomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;

/// Largest pattern (in edges) searched for rainbow copies during a sweep.
pub const SWEEP_PATTERN_MAX_EDGES: usize = 12;

pub const ASYMPTOTIC_NOTE: &str = "finite-n Monte-Carlo demonstration of monotone behaviour; \
     not a quantitative estimate of asymptotic thresholds";

/// An edge probability, kept in the textual form it was given.
#[derive(Clone, Debug, PartialEq)]
pub struct Probability {
    text: String,
    value: f64,
}

impl Probability {
    /// Accepts `p/q` or a decimal string.
    pub fn parse(text: &str) -> Result<Self> {
        let exact: Rational = text.parse()?;
        if exact < Rational::ZERO || exact > Rational::ONE {
            return Err(Error::input(format!(
                "probability {text} is outside [0, 1]"
            )));
        }
        Ok(Probability {
            text: text.trim().to_string(),
            value: exact.to_f64(),
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        let text = match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s,
            Raw::Number(x) => x.to_string(),
        };
        Probability::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// SplitMix64 finaliser.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial_index`: `splitmix64(master_seed + trial_index * φ)`
/// where `φ = 0x9E3779B97F4A7C15`, chained through a second splitmix round.
pub fn derive_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(
        splitmix64(master_seed).wrapping_add(trial_index.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    )
}

/// Binomial random graph `G(n, p)`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub n: usize,
    pub p: Probability,
    pub trials: usize,
    pub master_seed: u64,
    pub pattern: Graph,
}

/// Outcome of one seeded trial. Fields past `edge_count` are `None` when the
/// trial was skipped or did not reach that stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub n: usize,
    pub p: String,
    pub edge_count: usize,
    pub skipped: bool,
    pub contains_pattern: Option<bool>,
    pub m_value: Option<Rational>,
    pub coloring_proper: Option<bool>,
    pub decomposition_ok: Option<bool>,
    pub rainbow_found: Option<bool>,
    pub error: Option<String>,
}

impl TrialRecord {
    fn new(cfg: &TrialConfig, trial_index: usize, seed: u64, edge_count: usize) -> Self {
        TrialRecord {
            trial_index,
            seed,
            n: cfg.n,
            p: cfg.p.text().to_string(),
            edge_count,
            skipped: false,
            contains_pattern: None,
            m_value: None,
            coloring_proper: None,
            decomposition_ok: None,
            rainbow_found: None,
            error: None,
        }
    }
}

/// Aggregate of one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub p: String,
    pub trials: usize,
    pub hits: usize,
    pub rate: f64,
}

fn validate(cfg: &TrialConfig) -> Result<()> {
    if cfg.trials == 0 {
        return Err(Error::input("a sweep needs at least one trial"));
    }
    Ok(())
}

/// Fraction of `G(n, p)` samples containing a triangle. A graph is
/// anti-Ramsey for the triangle exactly when it contains one, because every
/// proper colouring of a triangle uses three colours.
pub fn triangle_anti_ramsey_trial(cfg: &TrialConfig) -> Result<SweepPoint> {
    validate(cfg)?;
    if cfg.pattern != Graph::complete(3) {
        return Err(Error::input("the triangle experiment needs the pattern K3"));
    }
    let hits = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(cfg.master_seed, t as u64);
            let g = sample_gnp(cfg.n, cfg.p.value(), seed)?;
            Ok(contains_copy(&g, &cfg.pattern).is_some())
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&hit| hit)
        .count();
    Ok(SweepPoint {
        n: cfg.n,
        p: cfg.p.text().to_string(),
        trials: cfg.trials,
        hits,
        rate: hits as f64 / cfg.trials as f64,
    })
}

/// Runs the triangle experiment at each probability with a shared master
/// seed.
pub fn triangle_sweep(
    n: usize,
    probabilities: &[Probability],
    trials: usize,
    master_seed: u64,
) -> Result<Vec<SweepPoint>> {
    probabilities
        .iter()
        .map(|p| {
            triangle_anti_ramsey_trial(&TrialConfig {
                n,
                p: p.clone(),
                trials,
                master_seed,
                pattern: Graph::complete(3),
            })
        })
        .collect()
}

fn run_coloring_trial(cfg: &TrialConfig, t: usize) -> TrialRecord {
    let seed = derive_seed(cfg.master_seed, t as u64);
    let g = match sample_gnp(cfg.n, cfg.p.value(), seed) {
        Ok(g) => g,
        Err(e) => {
            let mut rec = TrialRecord::new(cfg, t, seed, 0);
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let mut rec = TrialRecord::new(cfg, t, seed, g.edge_count());
    if g.edge_count() == 0 {
        rec.skipped = true;
        return rec;
    }
    let small_pattern =
        cfg.pattern.edge_count() > 0 && cfg.pattern.edge_count() <= SWEEP_PATTERN_MAX_EDGES;
    if small_pattern {
        rec.contains_pattern = Some(contains_copy(&g, &cfg.pattern).is_some());
    }
    match anti_rainbow_coloring(&g) {
        Ok((col, dec)) => {
            rec.m_value = Some(col.m_value);
            rec.coloring_proper = is_proper_coloring(&g, &col.colour).ok();
            rec.decomposition_ok = Some(verify_decomposition(&g, &dec).passed());
            if small_pattern {
                match rainbow_copy_search(&g, &col, &cfg.pattern) {
                    Ok(found) => rec.rainbow_found = Some(found.is_some()),
                    Err(e) => rec.error = Some(e.to_string()),
                }
            }
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Samples, colours and verifies `cfg.trials` graphs. Failures are recorded
/// per trial; the sweep itself only fails on a bad configuration.
pub fn coloring_sweep(cfg: &TrialConfig) -> Result<Vec<TrialRecord>> {
    validate(cfg)?;
    let mut records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_coloring_trial(cfg, t))
        .collect();
    records.sort_by_key(|r| r.trial_index);
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub n: usize,
    pub p: String,
    pub trials: usize,
    pub skipped: usize,
    pub proper: usize,
    pub decomposition_ok: usize,
    pub contains_pattern: usize,
    pub rainbow_found: usize,
    pub errors: usize,
    pub note: String,
}

pub fn summarize(cfg: &TrialConfig, records: &[TrialRecord]) -> SweepSummary {
    let count = |f: fn(&TrialRecord) -> bool| records.iter().filter(|r| f(r)).count();
    SweepSummary {
        n: cfg.n,
        p: cfg.p.text().to_string(),
        trials: records.len(),
        skipped: count(|r| r.skipped),
        proper: count(|r| r.coloring_proper == Some(true)),
        decomposition_ok: count(|r| r.decomposition_ok == Some(true)),
        contains_pattern: count(|r| r.contains_pattern == Some(true)),
        rainbow_found: count(|r| r.rainbow_found == Some(true)),
        errors: count(|r| r.error.is_some()),
        note: ASYMPTOTIC_NOTE.to_string(),
    }
}

pub const CSV_HEADER: &str = "trial,seed,n,p,edges,m,proper,decomp_ok,rainbow_found";

/// One row per trial; empty cells for stages a trial did not reach.
pub fn write_csv<W: Write>(records: &[TrialRecord], mut out: W) -> io::Result<()> {
    fn cell<T: ToString>(x: &Option<T>) -> String {
        x.as_ref().map(ToString::to_string).unwrap_or_default()
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.trial_index,
            r.seed,
            r.n,
            r.p,
            r.edge_count,
            cell(&r.m_value),
            cell(&r.coloring_proper),
            cell(&r.decomposition_ok),
            cell(&r.rainbow_found),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob(s: &str) -> Probability {
        Probability::parse(s).unwrap()
    }

    fn cfg(n: usize, p: &str, trials: usize, seed: u64) -> TrialConfig {
        TrialConfig {
            n,
            p: prob(p),
            trials,
            master_seed: seed,
            pattern: Graph::complete(3),
        }
    }

    #[test]
    fn probabilities() {
        assert_eq!(prob("1/4").value(), 0.25);
        assert_eq!(prob("0.5").value(), 0.5);
        assert!(Probability::parse("1.5").is_err());
        assert!(Probability::parse("-1/3").is_err());
        let p: Probability = serde_json::from_str("0.125").unwrap();
        assert_eq!(p.value(), 0.125);
    }

    #[test]
    fn extreme_probabilities() {
        assert_eq!(sample_gnp(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(10, 1.0, 1).unwrap(), Graph::complete(10));
        assert!(sample_gnp(10, 1.5, 1).is_err());
        assert!(sample_gnp(10, -0.1, 1).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_gnp(30, 0.3, 42).unwrap();
        let b = sample_gnp(30, 0.3, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_ne!(a.edges(), sample_gnp(30, 0.3, 43).unwrap().edges());
    }

    #[test]
    fn samples_are_nested_in_p() {
        let low = sample_gnp(25, 0.2, 9).unwrap();
        let high = sample_gnp(25, 0.6, 9).unwrap();
        assert!(low
            .edges()
            .iter()
            .all(|&(u, v)| high.edge_between(u, v).is_some()));
    }

    #[test]
    fn seeds_differ_across_trials() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| derive_seed(7, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }

    #[test]
    fn edge_count_concentrates() {
        let (n, p, trials) = (40usize, 0.3f64, 400u64);
        let pairs = (n * (n - 1) / 2) as f64;
        let total: usize = (0..trials)
            .map(|t| sample_gnp(n, p, derive_seed(11, t)).unwrap().edge_count())
            .sum();
        let mean = total as f64 / trials as f64;
        let sd_of_mean = (pairs * p * (1.0 - p) / trials as f64).sqrt();
        assert!((mean - p * pairs).abs() < 5.0 * sd_of_mean, "mean {mean}");
    }

    #[test]
    fn triangle_rates_at_extremes() {
        assert_eq!(
            triangle_anti_ramsey_trial(&cfg(50, "0", 20, 1))
                .unwrap()
                .rate,
            0.0
        );
        assert_eq!(
            triangle_anti_ramsey_trial(&cfg(50, "1", 20, 1))
                .unwrap()
                .rate,
            1.0
        );
        let mut bad = cfg(10, "0.5", 5, 1);
        bad.pattern = Graph::path(3);
        assert!(triangle_anti_ramsey_trial(&bad).is_err());
        assert!(triangle_anti_ramsey_trial(&cfg(10, "0.5", 0, 1)).is_err());
    }

    #[test]
    fn triangle_curve_is_monotone() {
        let ps: Vec<_> = ["0.005", "0.01", "0.02", "0.04"]
            .iter()
            .map(|s| prob(s))
            .collect();
        let points = triangle_sweep(100, &ps, 200, 5).unwrap();
        assert!(
            points.windows(2).all(|w| w[0].rate <= w[1].rate),
            "{points:?}"
        );
    }

    #[test]
    fn coloring_sweep_small() {
        let records = coloring_sweep(&cfg(20, "0.5", 100, 3)).unwrap();
        assert_eq!(records.len(), 100);
        assert!(records.iter().all(|r| r.coloring_proper == Some(true)));
        assert!(records.iter().all(|r| r.decomposition_ok == Some(true)));
        assert_eq!(records, coloring_sweep(&cfg(20, "0.5", 100, 3)).unwrap());
    }

    #[test]
    fn edgeless_trials_are_skipped() {
        let records = coloring_sweep(&cfg(5, "0", 10, 3)).unwrap();
        assert!(records.iter().all(|r| r.skipped && r.m_value.is_none()));
        let summary = summarize(&cfg(5, "0", 10, 3), &records);
        assert_eq!(summary.skipped, 10);
    }

    #[test]
    fn csv_rows() {
        let records = coloring_sweep(&cfg(6, "1/2", 3, 8)).unwrap();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.split(',').count() == 9));
    }
}

//! Random search over low-weight stabilizer codes.
//!
//! Candidate `i` of a search is drawn from its own ChaCha stream (`seed`,
//! stream `i`), so the sampled pool does not depend on evaluation order or
//! thread count, and the first `m` candidates of a search with `N > m`
//! samples are exactly the candidates of a search with `m` samples.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::PauliChannel;
use crate::code::{CodeError, StabilizerCode, MAX_EXHAUSTIVE_QUBITS};
use crate::decoder::{CosetMap, DecodeError};
use crate::gf2::{self, EchelonBasis};
use crate::pauli::{paulis_of_weight, Letter, Pauli};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("no valid code after {restarts} restarts (candidate {candidate})")]
    ResourceBound { candidate: usize, restarts: usize },
    #[error("channel acts on {channel} qubits, search is over {n}-qubit codes")]
    QubitMismatch { n: usize, channel: usize },
    #[error("retained code violates constraints: {0}")]
    Constraint(#[from] ConstraintViolation),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub n: usize,
    /// Logical qubits; only 1 is supported.
    pub k: usize,
    pub num_samples: usize,
    pub max_generator_weight: usize,
    pub min_distance: usize,
    pub seed: u64,
    pub dedup: bool,
    /// Draw generator supports from `1..=max_generator_weight` instead of `3..=`.
    pub include_low_weight: bool,
    /// Consecutive rejected draws before a partial generator set is abandoned.
    pub max_draw_failures: usize,
    /// Restarts (dead ends plus distance rejections) allowed per candidate.
    pub max_restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n: 7,
            k: 1,
            num_samples: 10_000,
            max_generator_weight: 4,
            min_distance: 3,
            seed: 0,
            dedup: false,
            include_low_weight: false,
            max_draw_failures: 500,
            max_restarts: 100_000,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::Config(m));
        if self.n == 0 || self.n > MAX_EXHAUSTIVE_QUBITS {
            return bad(format!("n = {} outside 1..={MAX_EXHAUSTIVE_QUBITS}", self.n));
        }
        if self.k != 1 {
            return bad(format!("k = {} (only single-logical-qubit codes are searched)", self.k));
        }
        if self.num_samples == 0 {
            return bad("num_samples must be at least 1".into());
        }
        if self.min_distance == 0 {
            return bad("min_distance must be at least 1".into());
        }
        if self.max_generator_weight == 0 || self.max_generator_weight > self.n {
            return bad(format!("max_generator_weight = {} outside 1..={}", self.max_generator_weight, self.n));
        }
        if self.max_draw_failures == 0 {
            return bad("max_draw_failures must be positive".into());
        }
        Ok(())
    }

    /// Smallest generator support the sampler draws.
    pub fn min_support(&self) -> usize {
        if self.include_low_weight {
            1
        } else {
            self.max_generator_weight.min(3)
        }
    }
}

/// Why candidate draws were thrown away.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionCounts {
    /// Draws that anticommuted with an accepted generator.
    pub non_commuting: u64,
    /// Draws already in the span of the accepted generators.
    pub dependent: u64,
    /// Partial generator sets abandoned after too many failed draws.
    pub dead_ends: u64,
    /// Complete codes rejected for insufficient distance.
    pub distance_too_small: u64,
    /// Codes dropped as duplicates of an earlier candidate's group.
    pub duplicates: u64,
}

impl RejectionCounts {
    fn merge(&mut self, other: &RejectionCounts) {
        self.non_commuting += other.non_commuting;
        self.dependent += other.dependent;
        self.dead_ends += other.dead_ends;
        self.distance_too_small += other.distance_too_small;
        self.duplicates += other.duplicates;
    }
}

/// Draws codes satisfying a [`SearchConfig`] by sequential rejection.
#[derive(Debug, Clone)]
pub struct Sampler {
    config: SearchConfig,
    // Paulis below the target distance, for the early distance screen
    low_weight: Vec<Pauli>,
}

impl Sampler {
    pub fn new(config: SearchConfig) -> Result<Self, SearchError> {
        config.validate()?;
        let low_weight = (1..config.min_distance.min(config.n + 1))
            .flat_map(|w| paulis_of_weight(config.n, w))
            .collect();
        Ok(Sampler { config, low_weight })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    fn draw_generator<R: Rng>(&self, rng: &mut R) -> Pauli {
        let n = self.config.n;
        let size = rng.random_range(self.config.min_support()..=self.config.max_generator_weight);
        let mut p = Pauli::identity(n);
        for q in index::sample(rng, n, size) {
            p.set(q, [Letter::X, Letter::Y, Letter::Z][rng.random_range(0..3)]);
        }
        p
    }

    fn meets_distance(&self, gens: &[Pauli], group: &EchelonBasis) -> bool {
        self.low_weight
            .iter()
            .all(|p| gens.iter().any(|g| g.anticommutes(p)) || group.contains(p.to_row()))
    }

    /// One code, deterministic in the state of `rng`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<(StabilizerCode, RejectionCounts), SearchError> {
        let target = self.config.n - self.config.k;
        let mut counts = RejectionCounts::default();
        let mut restarts = 0usize;
        loop {
            let mut gens: Vec<Pauli> = Vec::with_capacity(target);
            let mut group = EchelonBasis::new();
            let mut failures = 0usize;
            while gens.len() < target && failures <= self.config.max_draw_failures {
                let p = self.draw_generator(rng);
                if gens.iter().any(|g| g.anticommutes(&p)) {
                    counts.non_commuting += 1;
                    failures += 1;
                } else if !group.insert(p.to_row()) {
                    counts.dependent += 1;
                    failures += 1;
                } else {
                    gens.push(p);
                    failures = 0;
                }
            }
            if gens.len() < target {
                counts.dead_ends += 1;
            } else if self.meets_distance(&gens, &group) {
                return Ok((StabilizerCode::new(gens)?, counts));
            } else {
                counts.distance_too_small += 1;
            }
            restarts += 1;
            if restarts > self.config.max_restarts {
                return Err(SearchError::ResourceBound { candidate: 0, restarts });
            }
        }
    }

    /// Candidate `i` of a search seeded with `seed`.
    pub fn sample_candidate(&self, seed: u64, i: usize) -> Result<(StabilizerCode, RejectionCounts), SearchError> {
        self.sample(&mut candidate_rng(seed, i)).map_err(|e| match e {
            SearchError::ResourceBound { restarts, .. } => SearchError::ResourceBound { candidate: i, restarts },
            other => other,
        })
    }
}

pub fn candidate_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Draws a single code under `config` from `rng`.
pub fn random_code<R: Rng>(rng: &mut R, config: &SearchConfig) -> Result<StabilizerCode, SearchError> {
    Ok(Sampler::new(config.clone())?.sample(rng)?.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintViolation {
    #[error("generators {0} and {1} anticommute")]
    NonCommuting(usize, usize),
    #[error("generator rank {rank}, expected {expected}")]
    Rank { rank: usize, expected: usize },
    #[error("generator {index} has weight {weight} > {max}")]
    Weight { index: usize, weight: usize, max: usize },
    #[error("distance {distance} < {min}")]
    Distance { distance: usize, min: usize },
}

/// Re-checks a code against the search constraints from its raw generators:
/// pairwise commutation, full rank, generator weights, exhaustive distance.
pub fn validate_constraints(
    code: &StabilizerCode,
    max_generator_weight: usize,
    min_distance: usize,
) -> Result<(), ConstraintViolation> {
    let gens = code.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].anticommutes(&gens[j]) {
                return Err(ConstraintViolation::NonCommuting(i, j));
            }
        }
    }
    let rows: Vec<u64> = gens.iter().map(Pauli::to_row).collect();
    let rank = gf2::rank(&rows);
    if rank != code.n() - 1 {
        return Err(ConstraintViolation::Rank {
            rank,
            expected: code.n() - 1,
        });
    }
    if let Some((index, g)) = gens.iter().enumerate().find(|(_, g)| g.weight() > max_generator_weight) {
        return Err(ConstraintViolation::Weight {
            index,
            weight: g.weight(),
            max: max_generator_weight,
        });
    }
    let distance = code.distance().map_err(|_| ConstraintViolation::Rank { rank, expected: code.n() - 1 })?;
    if distance < min_distance {
        return Err(ConstraintViolation::Distance {
            distance,
            min: min_distance,
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RankedCode {
    /// 1-based position in the ranking.
    pub rank: usize,
    /// Index of the candidate in the sample stream.
    pub candidate: usize,
    pub code: StabilizerCode,
    pub logical_error_rate: f64,
    pub fingerprint: String,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Ascending by rate; ties keep candidate order.
    pub ranked: Vec<RankedCode>,
    pub rejections: RejectionCounts,
    pub samples_drawn: usize,
}

/// One row of the result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub rank: usize,
    pub generators: Vec<String>,
    pub logical_error_rate: f64,
    pub fingerprint: String,
}

impl SearchResult {
    pub fn best(&self) -> Option<&RankedCode> {
        self.ranked.first()
    }

    pub fn records(&self) -> Vec<ResultRecord> {
        self.ranked
            .iter()
            .map(|r| ResultRecord {
                rank: r.rank,
                generators: r.code.generators().iter().map(|g| g.to_string()).collect(),
                logical_error_rate: r.logical_error_rate,
                fingerprint: r.fingerprint.clone(),
            })
            .collect()
    }
}

/// A fixed pool of sampled candidates that can be ranked against many channels.
#[derive(Debug, Clone)]
pub struct CandidatePool {
    config: SearchConfig,
    candidates: Vec<(usize, StabilizerCode, CosetMap)>,
    rejections: RejectionCounts,
}

impl CandidatePool {
    pub fn draw(config: &SearchConfig) -> Result<Self, SearchError> {
        let sampler = Sampler::new(config.clone())?;
        let drawn: Vec<(StabilizerCode, RejectionCounts)> = (0..config.num_samples)
            .into_par_iter()
            .map(|i| sampler.sample_candidate(config.seed, i))
            .collect::<Result<_, _>>()?;
        let mut rejections = RejectionCounts::default();
        let mut seen = HashSet::new();
        let mut candidates = Vec::with_capacity(drawn.len());
        for (i, (code, counts)) in drawn.into_iter().enumerate() {
            rejections.merge(&counts);
            if config.dedup && !seen.insert(code.canonical_form()) {
                rejections.duplicates += 1;
                continue;
            }
            validate_constraints(&code, config.max_generator_weight, config.min_distance)?;
            let map = CosetMap::new(&code)?;
            candidates.push((i, code, map));
        }
        Ok(CandidatePool {
            config: config.clone(),
            candidates,
            rejections,
        })
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn rank(&self, ch: &PauliChannel) -> Result<SearchResult, SearchError> {
        if ch.n() != self.config.n {
            return Err(SearchError::QubitMismatch {
                n: self.config.n,
                channel: ch.n(),
            });
        }
        let rates: Vec<f64> = self
            .candidates
            .par_iter()
            .map(|(_, _, map)| map.logical_error_rate(ch))
            .collect::<Result<_, _>>()?;
        let mut order: Vec<usize> = (0..self.candidates.len()).collect();
        order.sort_by(|&a, &b| rates[a].total_cmp(&rates[b]).then(a.cmp(&b)));
        let ranked = order
            .into_iter()
            .enumerate()
            .map(|(pos, j)| {
                let (candidate, code, _) = &self.candidates[j];
                RankedCode {
                    rank: pos + 1,
                    candidate: *candidate,
                    code: code.clone(),
                    logical_error_rate: rates[j],
                    fingerprint: code.fingerprint(),
                }
            })
            .collect();
        Ok(SearchResult {
            ranked,
            rejections: self.rejections,
            samples_drawn: self.config.num_samples,
        })
    }
}

/// Samples `config.num_samples` codes and ranks them by logical error rate under `ch`.
pub fn run_search(config: &SearchConfig, ch: &PauliChannel) -> Result<SearchResult, SearchError> {
    if ch.n() != config.n {
        return Err(SearchError::QubitMismatch {
            n: config.n,
            channel: ch.n(),
        });
    }
    CandidatePool::draw(config)?.rank(ch)
}

/// Seed used for channel `j` when every channel gets a freshly drawn pool.
pub fn redraw_seed(seed: u64, j: usize) -> u64 {
    seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Ranks one pool per channel: a shared pool by default, or a fresh pool per
/// channel when `redraw` is set.
pub fn run_search_multi(config: &SearchConfig, channels: &[PauliChannel], redraw: bool) -> Result<Vec<SearchResult>, SearchError> {
    if redraw {
        channels
            .iter()
            .enumerate()
            .map(|(j, ch)| {
                let cfg = SearchConfig {
                    seed: redraw_seed(config.seed, j),
                    ..config.clone()
                };
                run_search(&cfg, ch)
            })
            .collect()
    } else {
        let pool = CandidatePool::draw(config)?;
        channels.iter().map(|ch| pool.rank(ch)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{cyclic7, steane};

    fn small(num_samples: usize, seed: u64) -> SearchConfig {
        SearchConfig {
            num_samples,
            seed,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(small(0, 1).validate().is_err());
        assert!(SearchConfig { k: 2, ..small(1, 1) }.validate().is_err());
        assert!(SearchConfig { max_generator_weight: 8, ..small(1, 1) }.validate().is_err());
        assert!(SearchConfig { min_distance: 0, ..small(1, 1) }.validate().is_err());
        assert!(small(1, 1).validate().is_ok());
        assert_eq!(small(1, 1).min_support(), 3);
        assert_eq!(SearchConfig { include_low_weight: true, ..small(1, 1) }.min_support(), 1);
    }

    #[test]
    fn sampled_codes_pass_the_validator() {
        let sampler = Sampler::new(small(1, 0)).unwrap();
        for seed in 0..200u64 {
            let (code, _) = sampler.sample_candidate(seed, 0).unwrap();
            assert_eq!(code.k(), 1);
            validate_constraints(&code, 4, 3).unwrap();
            assert!(code.generators().iter().all(|g| g.weight() >= 3));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let config = small(1, 0);
        let a = random_code(&mut candidate_rng(42, 3), &config).unwrap();
        let b = random_code(&mut candidate_rng(42, 3), &config).unwrap();
        assert_eq!(a.generators(), b.generators());
        let c = random_code(&mut candidate_rng(42, 4), &config).unwrap();
        assert_ne!(a.generators(), c.generators());
    }

    #[test]
    fn named_codes_meet_the_constraints() {
        validate_constraints(&steane(), 4, 3).unwrap();
        validate_constraints(&cyclic7(), 4, 3).unwrap();
        assert_eq!(
            validate_constraints(&steane(), 3, 3),
            Err(ConstraintViolation::Weight { index: 0, weight: 4, max: 3 })
        );
        assert_eq!(
            validate_constraints(&steane(), 4, 4),
            Err(ConstraintViolation::Distance { distance: 3, min: 4 })
        );
    }

    #[test]
    fn single_sample_is_the_best() {
        let ch = PauliChannel::biased(7, 0.01, 100.0).unwrap();
        let result = run_search(&small(1, 5), &ch).unwrap();
        let (code, _) = Sampler::new(small(1, 5)).unwrap().sample_candidate(5, 0).unwrap();
        assert_eq!(result.ranked.len(), 1);
        assert_eq!(result.best().unwrap().code.generators(), code.generators());
        assert_eq!(result.best().unwrap().rank, 1);
    }

    #[test]
    fn ranking_sorted_and_prefix_monotone() {
        let ch = PauliChannel::biased(7, 0.01, 10.0).unwrap();
        let full = run_search(&small(60, 9), &ch).unwrap();
        assert!(full.ranked.windows(2).all(|w| w[0].logical_error_rate <= w[1].logical_error_rate));
        let prefix = run_search(&small(20, 9), &ch).unwrap();
        assert!(prefix.best().unwrap().logical_error_rate >= full.best().unwrap().logical_error_rate);
        // prefix candidates are literally the first 20 of the larger search
        let mut a: Vec<String> = prefix.ranked.iter().map(|r| r.fingerprint.clone()).collect();
        let mut b: Vec<String> = full
            .ranked
            .iter()
            .filter(|r| r.candidate < 20)
            .map(|r| r.fingerprint.clone())
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn dedup_removes_shared_groups() {
        // 3-qubit codes built from weight-3 generators: few distinct groups
        let config = SearchConfig {
            dedup: true,
            n: 3,
            max_generator_weight: 3,
            min_distance: 1,
            ..small(40, 2)
        };
        let ch = PauliChannel::biased(3, 0.01, 10.0).unwrap();
        let result = run_search(&config, &ch).unwrap();
        let fps: HashSet<_> = result.ranked.iter().map(|r| r.fingerprint.clone()).collect();
        assert_eq!(fps.len(), result.ranked.len());
        assert_eq!(result.ranked.len() as u64 + result.rejections.duplicates, 40);
        assert!(result.rejections.duplicates > 0);
        let kept = run_search(&SearchConfig { dedup: false, ..config.clone() }, &ch).unwrap();
        assert_eq!(kept.ranked.len(), 40);
        let wrong = PauliChannel::biased(7, 0.01, 10.0).unwrap();
        assert!(matches!(run_search(&config, &wrong), Err(SearchError::QubitMismatch { .. })));
    }

    #[test]
    fn resource_bound_is_reported() {
        // distance 5 is impossible for 7-qubit codes with k = 1
        let config = SearchConfig {
            min_distance: 5,
            max_restarts: 20,
            ..small(1, 0)
        };
        let err = Sampler::new(config).unwrap().sample_candidate(0, 0).unwrap_err();
        assert!(matches!(err, SearchError::ResourceBound { candidate: 0, restarts: 21 }));
    }

    #[test]
    fn pooled_and_redrawn_multi_search() {
        let channels = [
            PauliChannel::biased(7, 0.01, 1.0).unwrap(),
            PauliChannel::biased(7, 0.01, 100.0).unwrap(),
        ];
        let pooled = run_search_multi(&small(30, 4), &channels, false).unwrap();
        let mut c0: Vec<_> = pooled[0].ranked.iter().map(|r| r.candidate).collect();
        let mut c1: Vec<_> = pooled[1].ranked.iter().map(|r| r.candidate).collect();
        c0.sort();
        c1.sort();
        assert_eq!(c0, c1);
        let redrawn = run_search_multi(&small(30, 4), &channels, true).unwrap();
        assert_eq!(redrawn[0].best().unwrap().fingerprint, pooled[0].best().unwrap().fingerprint);
        assert_eq!(redrawn.len(), 2);
    }
}

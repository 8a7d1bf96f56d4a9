//! Pauli channels as dense probability vectors over phaseless Paulis.
//!
//! Entry `i` of a channel on `n` qubits is the probability of the Pauli with
//! dense index `i` (see [`crate::pauli`]). Because phaseless multiplication
//! is XOR of indices, composing channels is a group convolution over
//! GF(2)^{2n}, computed directly for small registers and through the
//! Walsh-Hadamard transform otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{compensated_sum, walsh_hadamard};
use crate::pauli::{Pauli, PauliError};

/// Largest register stored densely (4^8 = 65,536 entries).
pub const MAX_DENSE_QUBITS: usize = 8;

/// Register size the extrapolations target by default.
pub const REGISTER_QUBITS: usize = 7;

/// Tolerance on `sum(probs) = 1` for in-memory channels.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Tolerance within which a loaded probability file is silently renormalized.
pub const FILE_NORMALIZATION_TOL: f64 = 1e-6;

const DIRECT_COMPOSE_MAX_QUBITS: usize = 4;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("rate {name} = {value} outside [0, 1)")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("bias must be positive and finite, got {0}")]
    InvalidBias(f64),
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("{0} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}")]
    TooLarge(usize),
    #[error("expected {expected} probabilities, got {found}")]
    Length { expected: usize, found: usize },
    #[error("negative or non-finite probability {value} for {pauli}")]
    Negative { pauli: String, value: f64 },
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("convex weights invalid: {0}")]
    Weights(String),
    #[error("qubit indices ({i}, {j}) invalid for {n} qubits")]
    Embedding { i: usize, j: usize, n: usize },
    #[error("unknown extrapolation {0:?} (expected convex, convex-product or product)")]
    UnknownExtrapolation(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("channel file {path}: {reason}")]
    File { path: String, reason: String },
}

/// Biased single-qubit noise from independent X and Z flips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedParams {
    r_x: f64,
    r_z: f64,
}

impl BiasedParams {
    /// Bare flip rates, each in `[0, 1)`.
    pub fn from_rates(r_x: f64, r_z: f64) -> Result<Self, ChannelError> {
        for (name, value) in [("r_x", r_x), ("r_z", r_z)] {
            if !(0.0..1.0).contains(&value) {
                return Err(ChannelError::InvalidRate { name, value });
            }
        }
        Ok(BiasedParams { r_x, r_z })
    }

    /// Inverts `(r_x, r_z) -> (p, eta)`.
    ///
    /// With `r_z = (p - r_x) / (1 - r_x)` the bias reduces to
    /// `eta = (p - r_x)(1 - r_x) / (r_x (1 - p))`, so `r_x` is the small root
    /// of `r^2 - B r + p = 0` with `B = 1 + p + eta (1 - p)`. The root is
    /// evaluated as `2p / (B + sqrt(B^2 - 4p))`, which does not cancel.
    pub fn from_total_and_bias(p: f64, eta: f64) -> Result<Self, ChannelError> {
        if !(0.0..1.0).contains(&p) {
            return Err(ChannelError::InvalidRate { name: "p", value: p });
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(ChannelError::InvalidBias(eta));
        }
        if eta < 1.0 {
            log::warn!("bias eta = {eta} < 1: X errors dominate; rates are used as given");
        }
        if p == 0.0 {
            return Ok(BiasedParams { r_x: 0.0, r_z: 0.0 });
        }
        let b = 1.0 + p + eta * (1.0 - p);
        let r_x = 2.0 * p / (b + (b * b - 4.0 * p).sqrt());
        let r_z = (p - r_x) / (1.0 - r_x);
        Self::from_rates(r_x, r_z.max(0.0))
    }

    pub fn r_x(&self) -> f64 {
        self.r_x
    }

    pub fn r_z(&self) -> f64 {
        self.r_z
    }

    pub fn p_x(&self) -> f64 {
        self.r_x * (1.0 - self.r_z)
    }

    pub fn p_y(&self) -> f64 {
        self.r_x * self.r_z
    }

    pub fn p_z(&self) -> f64 {
        self.r_z * (1.0 - self.r_x)
    }

    /// Total error probability, `1 - (1 - r_x)(1 - r_z)`.
    pub fn p(&self) -> f64 {
        self.p_x() + self.p_y() + self.p_z()
    }

    /// `p_z / p_x`, undefined when `p_x = 0`.
    pub fn eta(&self) -> Option<f64> {
        let px = self.p_x();
        (px > 0.0).then(|| self.p_z() / px)
    }
}

/// A probability distribution over the `4^n` phaseless Paulis.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannel {
    n: usize,
    probs: Vec<f64>,
}

fn dense_len(n: usize) -> Result<usize, ChannelError> {
    if n > MAX_DENSE_QUBITS {
        Err(ChannelError::TooLarge(n))
    } else {
        Ok(1 << (2 * n))
    }
}

impl PauliChannel {
    /// Validates non-negativity and normalization (within [`NORMALIZATION_TOL`]).
    pub fn from_probs(n: usize, probs: Vec<f64>) -> Result<Self, ChannelError> {
        let expected = dense_len(n)?;
        if probs.len() != expected {
            return Err(ChannelError::Length { expected, found: probs.len() });
        }
        if let Some((i, &v)) = probs.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
            return Err(ChannelError::Negative {
                pauli: Pauli::from_index(n, i as u64).to_string(),
                value: v,
            });
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(ChannelError::NotNormalized(total));
        }
        Ok(PauliChannel { n, probs })
    }

    /// The noiseless channel.
    pub fn identity(n: usize) -> Result<Self, ChannelError> {
        let mut probs = vec![0.0; dense_len(n)?];
        probs[0] = 1.0;
        Ok(PauliChannel { n, probs })
    }

    /// Applies `p` with certainty.
    pub fn point_mass(p: &Pauli) -> Result<Self, ChannelError> {
        let mut probs = vec![0.0; dense_len(p.n())?];
        probs[p.index() as usize] = 1.0;
        Ok(PauliChannel { n: p.n(), probs })
    }

    /// Sparse description; unlisted Paulis get probability zero.
    pub fn from_entries(n: usize, entries: &[(Pauli, f64)]) -> Result<Self, ChannelError> {
        let mut probs = vec![0.0; dense_len(n)?];
        for (p, v) in entries {
            if p.n() != n {
                return Err(ChannelError::QubitMismatch(n, p.n()));
            }
            probs[p.index() as usize] += v;
        }
        Self::from_probs(n, probs)
    }

    /// Single-qubit channel with probabilities `(1 - p, p_x, p_y, p_z)`.
    pub fn biased_single_qubit(params: &BiasedParams) -> Self {
        // dense order is I, X, Z, Y
        let probs = vec![
            (1.0 - params.r_x) * (1.0 - params.r_z),
            params.p_x(),
            params.p_z(),
            params.p_y(),
        ];
        PauliChannel { n: 1, probs }
    }

    /// Independent copies of a single-qubit channel on each of `n` qubits.
    pub fn iid(single: &PauliChannel, n: usize) -> Result<Self, ChannelError> {
        if single.n != 1 {
            return Err(ChannelError::QubitMismatch(1, single.n));
        }
        let len = dense_len(n)?;
        let probs = (0..len)
            .map(|idx| (0..n).map(|q| single.probs[(idx >> (2 * q)) & 3]).product())
            .collect();
        Ok(PauliChannel { n, probs })
    }

    /// i.i.d. biased noise parameterised by total rate and bias.
    pub fn biased(n: usize, p: f64, eta: f64) -> Result<Self, ChannelError> {
        let params = BiasedParams::from_total_and_bias(p, eta)?;
        Self::iid(&Self::biased_single_qubit(&params), n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, p: &Pauli) -> f64 {
        assert_eq!(p.n(), self.n, "qubit count mismatch");
        self.probs[p.index() as usize]
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.probs.iter().copied())
    }

    /// Paulis with nonzero probability, in dense order.
    pub fn support(&self) -> impl Iterator<Item = (Pauli, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (Pauli::from_index(self.n, i as u64), v))
    }

    fn check_same(&self, other: &PauliChannel) -> Result<(), ChannelError> {
        if self.n != other.n {
            Err(ChannelError::QubitMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    /// Applying `self` and `other` in sequence (the order is irrelevant).
    pub fn compose(&self, other: &PauliChannel) -> Result<Self, ChannelError> {
        if self.n <= DIRECT_COMPOSE_MAX_QUBITS {
            self.compose_direct(other)
        } else {
            self.compose_fast(other)
        }
    }

    /// Quadratic-time convolution `out[q] = sum_p a[q ^ p] b[p]`.
    pub fn compose_direct(&self, other: &PauliChannel) -> Result<Self, ChannelError> {
        self.check_same(other)?;
        let len = self.probs.len();
        let mut out = vec![0.0; len];
        for (p, &b) in other.probs.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            for (q, o) in out.iter_mut().enumerate() {
                *o += self.probs[q ^ p] * b;
            }
        }
        Ok(PauliChannel { n: self.n, probs: out })
    }

    /// Convolution through the Walsh-Hadamard transform.
    pub fn compose_fast(&self, other: &PauliChannel) -> Result<Self, ChannelError> {
        self.check_same(other)?;
        compose_all_fast(self.n, [self, other])
    }

    /// Composition of several channels on the same register.
    pub fn compose_all<'a, I>(n: usize, channels: I) -> Result<Self, ChannelError>
    where
        I: IntoIterator<Item = &'a PauliChannel>,
    {
        let channels: Vec<&PauliChannel> = channels.into_iter().collect();
        for c in &channels {
            if c.n != n {
                return Err(ChannelError::QubitMismatch(n, c.n));
            }
        }
        if n <= DIRECT_COMPOSE_MAX_QUBITS {
            let mut acc = Self::identity(n)?;
            for c in channels {
                acc = acc.compose_direct(c)?;
            }
            Ok(acc)
        } else {
            compose_all_fast(n, channels)
        }
    }

    /// Weighted mixture of channels; weights must be non-negative and sum to 1.
    pub fn convex(channels: &[PauliChannel], weights: &[f64]) -> Result<Self, ChannelError> {
        if channels.is_empty() || channels.len() != weights.len() {
            return Err(ChannelError::Weights(format!(
                "{} channels with {} weights",
                channels.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(ChannelError::Weights("negative weight".into()));
        }
        let wsum = compensated_sum(weights.iter().copied());
        if (wsum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(ChannelError::Weights(format!("weights sum to {wsum}")));
        }
        let n = channels[0].n;
        for c in channels {
            if c.n != n {
                return Err(ChannelError::QubitMismatch(n, c.n));
            }
        }
        let probs = (0..channels[0].probs.len())
            .map(|i| compensated_sum(channels.iter().zip(weights).map(|(c, w)| w * c.probs[i])))
            .collect();
        Ok(PauliChannel { n, probs })
    }

    /// Lifts a two-qubit channel onto qubits `(i, j)` of an `n`-qubit register
    /// (0-based; the channel's first qubit lands on `i`).
    pub fn embed(&self, n: usize, i: usize, j: usize) -> Result<Self, ChannelError> {
        if self.n != 2 {
            return Err(ChannelError::QubitMismatch(2, self.n));
        }
        if i == j || i >= n || j >= n {
            return Err(ChannelError::Embedding { i, j, n });
        }
        let mut probs = vec![0.0; dense_len(n)?];
        for (a, &v) in self.probs.iter().enumerate() {
            let idx = ((a & 3) << (2 * i)) | (((a >> 2) & 3) << (2 * j));
            probs[idx] += v;
        }
        Ok(PauliChannel { n, probs })
    }

    /// Relabels qubits: qubit `q` becomes qubit `perm[q]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Self {
        let mut probs = vec![0.0; self.probs.len()];
        for (i, &v) in self.probs.iter().enumerate() {
            let p = Pauli::from_index(self.n, i as u64).permute(perm);
            probs[p.index() as usize] = v;
        }
        PauliChannel { n: self.n, probs }
    }

    /// Clips negatives, renormalizes, and reports the clipped mass.
    pub fn sanitize(n: usize, raw: &[f64], max_clipped: f64) -> Result<(Self, SanitizeReport), SanitizeError> {
        let expected = 1usize << (2 * n);
        if raw.len() != expected || n > MAX_DENSE_QUBITS {
            return Err(SanitizeError::Length { expected, found: raw.len() });
        }
        if let Some(v) = raw.iter().find(|v| !v.is_finite()) {
            return Err(SanitizeError::NonFinite(*v));
        }
        let clipped_mass = compensated_sum(raw.iter().filter(|v| **v < 0.0).map(|v| -v));
        if clipped_mass > max_clipped {
            return Err(SanitizeError::ClippedMass {
                clipped: clipped_mass,
                bound: max_clipped,
            });
        }
        let clipped: Vec<f64> = raw.iter().map(|v| v.max(0.0)).collect();
        let total = compensated_sum(clipped.iter().copied());
        if total <= 0.0 {
            return Err(SanitizeError::ZeroMass);
        }
        let probs = clipped.iter().map(|v| v / total).collect();
        Ok((
            PauliChannel { n, probs },
            SanitizeReport {
                clipped_mass,
                original_total: compensated_sum(raw.iter().copied()),
            },
        ))
    }

    pub fn to_file(&self) -> ProbabilityFile {
        ProbabilityFile {
            n: self.n,
            probs: self.support().map(|(p, v)| (p.to_string(), v)).collect(),
            tau_ms: None,
            label: None,
        }
    }
}

fn compose_all_fast<'a, I>(n: usize, channels: I) -> Result<PauliChannel, ChannelError>
where
    I: IntoIterator<Item = &'a PauliChannel>,
{
    let len = dense_len(n)?;
    let mut spectrum = vec![1.0; len];
    for c in channels {
        let mut t = c.probs.clone();
        walsh_hadamard(&mut t);
        spectrum.iter_mut().zip(&t).for_each(|(s, v)| *s *= v);
    }
    walsh_hadamard(&mut spectrum);
    let scale = len as f64;
    // round-off can leave tiny negatives where the exact value is zero
    let probs = spectrum.into_iter().map(|v| (v / scale).max(0.0)).collect();
    Ok(PauliChannel { n, probs })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SanitizeReport {
    /// Total magnitude of the negative entries set to zero.
    pub clipped_mass: f64,
    /// Sum of the raw vector before clipping.
    pub original_total: f64,
}

/// Default bound on the mass [`PauliChannel::sanitize`] may clip.
pub const DEFAULT_MAX_CLIPPED: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SanitizeError {
    #[error("expected {expected} entries, got {found}")]
    Length { expected: usize, found: usize },
    #[error("non-finite entry {0}")]
    NonFinite(f64),
    #[error("clipped mass {clipped:.3e} exceeds bound {bound:.3e}; estimate is too far from a Pauli channel")]
    ClippedMass { clipped: f64, bound: f64 },
    #[error("no probability mass left after clipping")]
    ZeroMass,
}

/// The three ways a two-qubit channel is lifted to a register on a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extrapolation {
    /// Uniform mixture of the channel on one neighbouring pair.
    Convex,
    /// Even pairs or odd pairs, each with probability 1/2.
    ConvexProduct,
    /// The channel on every neighbouring pair.
    Product,
}

impl Extrapolation {
    pub const ALL: [Extrapolation; 3] = [Extrapolation::Convex, Extrapolation::ConvexProduct, Extrapolation::Product];

    pub fn name(self) -> &'static str {
        match self {
            Extrapolation::Convex => "convex",
            Extrapolation::ConvexProduct => "convex-product",
            Extrapolation::Product => "product",
        }
    }

    /// Lifts `eps2` onto qubits `0..n`, treating them as a line.
    pub fn apply(self, eps2: &PauliChannel, n: usize) -> Result<PauliChannel, ChannelError> {
        if eps2.n != 2 {
            return Err(ChannelError::QubitMismatch(2, eps2.n));
        }
        if n < 2 {
            return Err(ChannelError::Embedding { i: 0, j: 1, n });
        }
        let pairs: Vec<PauliChannel> = (0..n - 1)
            .map(|j| eps2.embed(n, j, j + 1))
            .collect::<Result<_, _>>()?;
        match self {
            Extrapolation::Convex => {
                let w = vec![1.0 / pairs.len() as f64; pairs.len()];
                PauliChannel::convex(&pairs, &w)
            }
            Extrapolation::ConvexProduct => {
                let even = PauliChannel::compose_all(n, pairs.iter().step_by(2))?;
                let odd = PauliChannel::compose_all(n, pairs.iter().skip(1).step_by(2))?;
                PauliChannel::convex(&[even, odd], &[0.5, 0.5])
            }
            Extrapolation::Product => PauliChannel::compose_all(n, pairs.iter()),
        }
    }
}

impl fmt::Display for Extrapolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Extrapolation {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "convex" => Ok(Extrapolation::Convex),
            "convex-product" => Ok(Extrapolation::ConvexProduct),
            "product" => Ok(Extrapolation::Product),
            other => Err(ChannelError::UnknownExtrapolation(other.to_string())),
        }
    }
}

pub fn extrapolate_convex(eps2: &PauliChannel) -> Result<PauliChannel, ChannelError> {
    Extrapolation::Convex.apply(eps2, REGISTER_QUBITS)
}

pub fn extrapolate_convex_product(eps2: &PauliChannel) -> Result<PauliChannel, ChannelError> {
    Extrapolation::ConvexProduct.apply(eps2, REGISTER_QUBITS)
}

pub fn extrapolate_product(eps2: &PauliChannel) -> Result<PauliChannel, ChannelError> {
    Extrapolation::Product.apply(eps2, REGISTER_QUBITS)
}

/// On-disk Pauli probabilities: `{ "n": 2, "probs": { "II": 0.92, ... } }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityFile {
    pub n: usize,
    pub probs: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ProbabilityFile {
    /// Dense channel; sums off by at most [`FILE_NORMALIZATION_TOL`] are renormalized.
    pub fn into_channel(&self) -> Result<PauliChannel, ChannelError> {
        let mut probs = vec![0.0; dense_len(self.n)?];
        for (s, &v) in &self.probs {
            let p: Pauli = s.parse()?;
            if p.n() != self.n {
                return Err(ChannelError::QubitMismatch(self.n, p.n()));
            }
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ChannelError::Negative { pauli: s.clone(), value: v });
            }
            probs[p.index() as usize] = v;
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - 1.0).abs() > FILE_NORMALIZATION_TOL {
            return Err(ChannelError::NotNormalized(total));
        }
        // sums within round-off of 1 are left untouched
        if (total - 1.0).abs() > 1e-12 {
            log::warn!("probabilities sum to {total}; renormalizing");
            probs.iter_mut().for_each(|v| *v /= total);
        }
        PauliChannel::from_probs(self.n, probs)
    }
}

pub fn load_channel(path: &Path) -> Result<(PauliChannel, ProbabilityFile), ChannelError> {
    let file_err = |reason: String| ChannelError::File {
        path: path.display().to_string(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
    let file: ProbabilityFile = serde_json::from_str(&text).map_err(|e| file_err(e.to_string()))?;
    let channel = file.into_channel()?;
    Ok((channel, file))
}

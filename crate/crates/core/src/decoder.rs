//! Exact maximum-likelihood decoding by full coset enumeration.
//!
//! Every one of the `4^n` Paulis is assigned to a cell `(syndrome, logical
//! class)`; the decoder picks, per syndrome, the class carrying the most
//! probability. The cell assignment is GF(2)-linear in the error, so it is
//! tabulated once per code from the `2n` single-qubit generators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::PauliChannel;
use crate::code::{CodeError, LogicalClass, StabilizerCode};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::pauli::Pauli;

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("code acts on {code} qubits but channel on {channel}")]
    QubitMismatch { code: usize, channel: usize },
    #[error("{0} qubits is too large for the state-vector oracle (max {MAX_ORACLE_QUBITS})")]
    OracleTooLarge(usize),
}

/// Largest code the state-vector oracle simulates.
pub const MAX_ORACLE_QUBITS: usize = 7;

/// The `(syndrome, class)` cell of every Pauli for one code.
#[derive(Debug, Clone)]
pub struct CosetMap {
    n: usize,
    num_syndromes: usize,
    // cell = syndrome << 2 | class index
    cells: Vec<u32>,
}

impl CosetMap {
    pub fn new(code: &StabilizerCode) -> Result<Self, DecodeError> {
        code.require_single_logical()?;
        let n = code.n();
        let basis: Vec<u32> = (0..2 * n)
            .map(|bit| {
                let e = Pauli::from_index(n, 1 << bit);
                let class = code.logical_class(&e).expect("k = 1 checked above");
                code.syndrome(&e) << 2 | class_bits(class)
            })
            .collect();
        let len = 1usize << (2 * n);
        let mut cells = vec![0u32; len];
        for idx in 1..len {
            cells[idx] = cells[idx & (idx - 1)] ^ basis[idx.trailing_zeros() as usize];
        }
        // class_bits is linear but LogicalClass indices are not; translate once
        for c in cells.iter_mut() {
            *c = (*c & !3) | bits_to_class(*c & 3).index() as u32;
        }
        Ok(CosetMap {
            n,
            num_syndromes: 1 << code.num_generators(),
            cells,
        })
    }

    /// Accumulates the channel into a `num_syndromes x 4` table.
    pub fn coset_probabilities(&self, ch: &PauliChannel) -> Result<CosetTable, DecodeError> {
        if ch.n() != self.n {
            return Err(DecodeError::QubitMismatch {
                code: self.n,
                channel: ch.n(),
            });
        }
        let mut acc = vec![[CompensatedSum::new(); 4]; self.num_syndromes];
        for (&cell, &p) in self.cells.iter().zip(ch.probs()) {
            if p != 0.0 {
                acc[(cell >> 2) as usize][(cell & 3) as usize].add(p);
            }
        }
        Ok(CosetTable {
            cells: acc.iter().map(|row| row.map(|s| s.value())).collect(),
        })
    }

    /// Logical error rate of the optimal decoder for `ch`.
    pub fn logical_error_rate(&self, ch: &PauliChannel) -> Result<f64, DecodeError> {
        Ok(self.coset_probabilities(ch)?.logical_error_rate())
    }
}

// commutation bits (<N, Lz>, <N, Lx>) packed as bit0 | bit1 << 1
fn class_bits(class: LogicalClass) -> u32 {
    match class {
        LogicalClass::I => 0,
        LogicalClass::X => 1,
        LogicalClass::Z => 2,
        LogicalClass::Y => 3,
    }
}

fn bits_to_class(bits: u32) -> LogicalClass {
    LogicalClass::from_commutation(bits & 1 == 1, bits & 2 == 2)
}

/// Probability mass `p(s, L)` per syndrome `s` and logical class `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetTable {
    /// Indexed by syndrome; columns follow [`LogicalClass::ALL`].
    pub cells: Vec<[f64; 4]>,
}

impl CosetTable {
    pub fn num_syndromes(&self) -> usize {
        self.cells.len()
    }

    pub fn prob(&self, syndrome: u32, class: LogicalClass) -> f64 {
        self.cells[syndrome as usize][class.index()]
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.cells.iter().flatten().copied())
    }

    /// Most probable class; ties go to the earliest in I, X, Y, Z order.
    pub fn best_class(&self, syndrome: u32) -> LogicalClass {
        let row = &self.cells[syndrome as usize];
        let mut best = 0;
        for i in 1..4 {
            if row[i] > row[best] {
                best = i;
            }
        }
        LogicalClass::ALL[best]
    }

    /// Mass outside the chosen class of every syndrome. Equals
    /// `1 - sum_s max_L p(s, L)` for a normalized channel, without the
    /// cancellation that form suffers at small rates.
    pub fn logical_error_rate(&self) -> f64 {
        compensated_sum((0..self.cells.len()).flat_map(|s| {
            let best = self.best_class(s as u32).index();
            self.cells[s]
                .iter()
                .enumerate()
                .filter(move |(i, _)| *i != best)
                .map(|(_, &p)| p)
        }))
    }
}

/// Optimal decoder: chosen class and recovery Pauli for every syndrome.
#[derive(Debug, Clone)]
pub struct DecoderTable {
    pub cosets: CosetTable,
    pub chosen_class: Vec<LogicalClass>,
    pub recovery: Vec<Pauli>,
}

/// One exported decoder entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    pub syndrome: String,
    pub recovery: String,
    pub class_probs: [f64; 4],
}

impl DecoderTable {
    pub fn logical_error_rate(&self) -> f64 {
        self.cosets.logical_error_rate()
    }

    pub fn records(&self, code: &StabilizerCode) -> Vec<TableRecord> {
        (0..self.recovery.len())
            .map(|s| TableRecord {
                syndrome: code.syndrome_string(s as u32),
                recovery: self.recovery[s].to_string(),
                class_probs: self.cosets.cells[s],
            })
            .collect()
    }
}

pub fn coset_probabilities(code: &StabilizerCode, ch: &PauliChannel) -> Result<CosetTable, DecodeError> {
    CosetMap::new(code)?.coset_probabilities(ch)
}

pub fn optimal_decoder(code: &StabilizerCode, ch: &PauliChannel) -> Result<DecoderTable, DecodeError> {
    let cosets = coset_probabilities(code, ch)?;
    let mut chosen_class = Vec::with_capacity(cosets.num_syndromes());
    let mut recovery = Vec::with_capacity(cosets.num_syndromes());
    for s in 0..cosets.num_syndromes() as u32 {
        let class = cosets.best_class(s);
        chosen_class.push(class);
        recovery.push(code.pure_error(s) * code.class_representative(class)?);
    }
    Ok(DecoderTable {
        cosets,
        chosen_class,
        recovery,
    })
}

/// Probability that the optimal decoder leaves a logical error.
pub fn logical_error_rate(code: &StabilizerCode, ch: &PauliChannel) -> Result<f64, DecodeError> {
    CosetMap::new(code)?.logical_error_rate(ch)
}

mod oracle {
    use num_complex::Complex64;

    use crate::pauli::Pauli;

    /// `P v` for the Hermitian tensor-product matrix of a phaseless Pauli,
    /// with `Y = i X Z` and qubit `q` on bit `q` of the basis index.
    pub fn apply(p: &Pauli, v: &[Complex64]) -> Vec<Complex64> {
        let (x, z) = (p.x_bits() as usize, p.z_bits() as usize);
        let phase = Complex64::i().powu((x & z).count_ones());
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (j, amp) in v.iter().enumerate() {
            let sign = if (j & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[j ^ x] = phase * sign * amp;
        }
        out
    }

    pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    /// Orthonormal basis of the joint +1 eigenspace of `generators`.
    pub fn codespace(n: usize, generators: &[Pauli], dim: usize) -> Vec<Vec<Complex64>> {
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for j in 0..1usize << n {
            if basis.len() == dim {
                break;
            }
            let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
            v[j] = Complex64::new(1.0, 0.0);
            for g in generators {
                let gv = apply(g, &v);
                v.iter_mut().zip(gv).for_each(|(a, b)| *a = (*a + b) * 0.5);
            }
            for u in &basis {
                let c = inner(u, &v);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
            let norm = inner(&v, &v).re.sqrt();
            if norm > 1e-6 {
                v.iter_mut().for_each(|a| *a /= norm);
                basis.push(v);
            }
        }
        basis
    }
}

/// Logical error rate of `table`'s recoveries, by state-vector simulation.
///
/// Each error with nonzero probability is applied to an orthonormal basis of
/// the codespace, its syndrome read off from the stabilizer expectation
/// values, the table's recovery applied, and the overlap with the codespace
/// turned into the probability of a trivial logical action.
pub fn density_matrix_rate(code: &StabilizerCode, ch: &PauliChannel, table: &DecoderTable) -> Result<f64, DecodeError> {
    use num_complex::Complex64;

    code.require_single_logical()?;
    let n = code.n();
    if n > MAX_ORACLE_QUBITS {
        return Err(DecodeError::OracleTooLarge(n));
    }
    if ch.n() != n {
        return Err(DecodeError::QubitMismatch { code: n, channel: ch.n() });
    }
    let dim = 1usize << code.k();
    let basis = oracle::codespace(n, code.generators(), dim);
    assert_eq!(basis.len(), dim, "codespace dimension");

    let mut success = CompensatedSum::new();
    for (e, p) in ch.support() {
        let errored: Vec<Vec<Complex64>> = basis.iter().map(|v| oracle::apply(&e, v)).collect();
        let mut syndrome = 0u32;
        for (i, g) in code.generators().iter().enumerate() {
            let expectation = oracle::inner(&errored[0], &oracle::apply(g, &errored[0])).re;
            assert!((expectation.abs() - 1.0).abs() < 1e-9, "Pauli error leaves a stabilizer eigenstate");
            if expectation < 0.0 {
                syndrome |= 1 << i;
            }
        }
        let recovery = &table.recovery[syndrome as usize];
        let trace: Complex64 = basis
            .iter()
            .zip(&errored)
            .map(|(v, w)| oracle::inner(v, &oracle::apply(recovery, w)))
            .sum();
        success.add(p * trace.norm_sqr() / (dim * dim) as f64);
    }
    Ok(1.0 - success.value())
}

/// [`density_matrix_rate`] for the optimal decoder of `ch`.
pub fn density_matrix_oracle(code: &StabilizerCode, ch: &PauliChannel) -> Result<f64, DecodeError> {
    let table = optimal_decoder(code, ch)?;
    density_matrix_rate(code, ch, &table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::BiasedParams;
    use crate::code::{cyclic7, five_qubit, phase_flip3, steane};

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    fn dephasing(n: usize, q: f64) -> PauliChannel {
        let single = PauliChannel::biased_single_qubit(&BiasedParams::from_rates(0.0, q).unwrap());
        PauliChannel::iid(&single, n).unwrap()
    }

    #[test]
    fn identity_channel_is_error_free() {
        let code = steane();
        let ch = PauliChannel::identity(7).unwrap();
        let table = optimal_decoder(&code, &ch).unwrap();
        assert_eq!(table.cosets.prob(0, LogicalClass::I), 1.0);
        assert_eq!(table.cosets.total(), 1.0);
        assert!(table.recovery[0].is_identity());
        assert_eq!(table.logical_error_rate(), 0.0);
        assert!(density_matrix_oracle(&code, &ch).unwrap().abs() < 1e-12);
    }

    #[test]
    fn phase_flip_coset_cells() {
        let q = 0.1;
        let code = phase_flip3();
        let cosets = coset_probabilities(&code, &dephasing(3, q)).unwrap();
        // syndrome (1, 0) is bit 0 set
        assert!((cosets.prob(0b01, LogicalClass::I) - q * (1.0 - q) * (1.0 - q)).abs() < 1e-15);
        assert!((cosets.prob(0b01, LogicalClass::Z) - q * q * (1.0 - q)).abs() < 1e-15);
        let table = optimal_decoder(&code, &dephasing(3, q)).unwrap();
        // majority vote: flip qubit 0 back, up to a stabilizer
        let residual = table.recovery[0b01] * p("ZII");
        assert!(code.in_stabilizer_group(&residual));
    }

    #[test]
    fn phase_flip_closed_form() {
        let code = phase_flip3();
        for q in [0.01, 0.1, 0.3] {
            let rate = logical_error_rate(&code, &dephasing(3, q)).unwrap();
            assert!((rate - (3.0 * q * q - 2.0 * q * q * q)).abs() < 1e-12);
        }
        let rate = logical_error_rate(&code, &dephasing(3, 0.1)).unwrap();
        assert!((rate - 0.028).abs() < 1e-15);
    }

    #[test]
    fn trivial_code_fails_at_bare_rate() {
        let code = StabilizerCode::trivial(1).unwrap();
        let params = BiasedParams::from_total_and_bias(0.1, 3.0).unwrap();
        let ch = PauliChannel::biased_single_qubit(&params);
        let rate = logical_error_rate(&code, &ch).unwrap();
        assert!((rate - params.p()).abs() < 1e-15);
    }

    #[test]
    fn ties_prefer_earlier_class() {
        let table = CosetTable {
            cells: vec![[0.1, 0.3, 0.2, 0.3], [0.25, 0.25, 0.25, 0.25]],
        };
        assert_eq!(table.best_class(0), LogicalClass::X);
        assert_eq!(table.best_class(1), LogicalClass::I);
        assert!((table.logical_error_rate() - (0.1 + 0.2 + 0.3 + 0.75)).abs() < 1e-15);
    }

    #[test]
    fn seven_qubit_syndromes_collect_256_errors() {
        let code = cyclic7();
        let map = CosetMap::new(&code).unwrap();
        let mut counts = vec![0usize; 64];
        for cell in &map.cells {
            counts[(cell >> 2) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c == 256));
    }

    #[test]
    fn coset_map_agrees_with_direct_labels() {
        for code in [steane(), cyclic7(), five_qubit()] {
            let map = CosetMap::new(&code).unwrap();
            for (idx, &cell) in map.cells.iter().enumerate().step_by(7) {
                let e = Pauli::from_index(code.n(), idx as u64);
                assert_eq!(cell >> 2, code.syndrome(&e));
                assert_eq!(LogicalClass::ALL[(cell & 3) as usize], code.logical_class(&e).unwrap());
            }
        }
    }

    #[test]
    fn table_invariants() {
        let code = five_qubit();
        let ch = PauliChannel::biased(5, 0.1, 10.0).unwrap();
        let table = optimal_decoder(&code, &ch).unwrap();
        assert!((table.cosets.total() - 1.0).abs() < 1e-9);
        for s in 0..table.recovery.len() as u32 {
            let r = table.recovery[s as usize];
            assert_eq!(code.syndrome(&r), s);
            let relative = r * code.pure_error(s);
            assert_eq!(code.logical_class(&relative).unwrap(), table.chosen_class[s as usize]);
            let row = table.cosets.cells[s as usize];
            let max = row.iter().cloned().fold(f64::MIN, f64::max);
            assert_eq!(table.cosets.prob(s, table.chosen_class[s as usize]), max);
        }
        let records = table.records(&code);
        assert_eq!(records.len(), 16);
        assert_eq!(records[0].syndrome, "0000");
        let json = serde_json::to_string(&records).unwrap();
        let back: Vec<TableRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn oracle_matches_on_small_codes() {
        let code = five_qubit();
        let ch = PauliChannel::biased(5, 0.1, 10.0).unwrap();
        let coset = logical_error_rate(&code, &ch).unwrap();
        let oracle = density_matrix_oracle(&code, &ch).unwrap();
        assert!((coset - oracle).abs() < 1e-9, "{coset} vs {oracle}");
        let q = 0.1;
        let oracle = density_matrix_oracle(&phase_flip3(), &dephasing(3, q)).unwrap();
        assert!((oracle - 0.028).abs() < 1e-12);
    }

    #[test]
    fn oracle_detects_a_bad_recovery() {
        // recovering with the wrong logical class must show up as failure
        let code = phase_flip3();
        let ch = dephasing(3, 0.1);
        let mut table = optimal_decoder(&code, &ch).unwrap();
        table.recovery[0] = code.logical_z().unwrap();
        let rate = density_matrix_rate(&code, &ch, &table).unwrap();
        assert!(rate > 0.7);
    }

    #[test]
    fn rejects_mismatches() {
        let ch = PauliChannel::identity(5).unwrap();
        assert!(matches!(
            logical_error_rate(&steane(), &ch),
            Err(DecodeError::QubitMismatch { code: 7, channel: 5 })
        ));
        let two = StabilizerCode::from_strings(&["XXXX", "ZZZZ"]).unwrap();
        assert!(matches!(
            logical_error_rate(&two, &PauliChannel::identity(4).unwrap()),
            Err(DecodeError::Code(CodeError::LogicalCount { .. }))
        ));
    }

    #[test]
    fn cyclic_beats_steane_unbiased() {
        let ch = PauliChannel::biased(7, 0.01, 1.0).unwrap();
        let cyc = logical_error_rate(&cyclic7(), &ch).unwrap();
        let st = logical_error_rate(&steane(), &ch).unwrap();
        assert!(cyc < st, "cyclic {cyc} steane {st}");
    }
}

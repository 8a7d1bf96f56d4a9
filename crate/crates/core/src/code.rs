//! Stabilizer codes: validation, syndromes, logical cosets and distance.
//!
//! Construction is exhaustive and therefore limited to
//! [`MAX_EXHAUSTIVE_QUBITS`] qubits. Destabilizers and logical
//! representatives are chosen as minimum-weight Paulis with ties broken by
//! the dense enumeration order, so every code built from the same generator
//! list is bit-for-bit identical.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, EchelonBasis};
use crate::pauli::{paulis_of_weight, Pauli, PauliError};

/// Largest code the exhaustive routines accept.
pub const MAX_EXHAUSTIVE_QUBITS: usize = 8;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("no generators given")]
    NoGenerators,
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("generator {index} is dependent: it equals the product of generators {combination:?}")]
    Dependent {
        index: usize,
        combination: Vec<usize>,
    },
    #[error("code encodes {found} logical qubits, expected {expected}")]
    LogicalCount { expected: usize, found: usize },
    #[error("{0} qubits exceeds the exhaustive limit of {MAX_EXHAUSTIVE_QUBITS}")]
    TooLarge(usize),
    #[error("invalid representative: {0}")]
    Representative(String),
    #[error("unknown code {0:?} (expected steane, cyclic7, five_qubit, phase_flip3 or a code file)")]
    UnknownLabel(String),
    #[error("code file {path}: {reason}")]
    File { path: String, reason: String },
}

/// Logical coset label of an error relative to the canonical pure error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicalClass {
    I,
    X,
    Y,
    Z,
}

impl LogicalClass {
    /// Tie-break order of the decoder and column order of class tables.
    pub const ALL: [LogicalClass; 4] = [LogicalClass::I, LogicalClass::X, LogicalClass::Y, LogicalClass::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Label from the commutation bits `(<N, logical_z>, <N, logical_x>)`.
    pub fn from_commutation(with_z: bool, with_x: bool) -> LogicalClass {
        match (with_z, with_x) {
            (false, false) => LogicalClass::I,
            (true, false) => LogicalClass::X,
            (false, true) => LogicalClass::Z,
            (true, true) => LogicalClass::Y,
        }
    }
}

impl fmt::Display for LogicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            LogicalClass::I => 'I',
            LogicalClass::X => 'X',
            LogicalClass::Y => 'Y',
            LogicalClass::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// A stabilizer code on at most [`MAX_EXHAUSTIVE_QUBITS`] qubits.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    n: usize,
    label: Option<String>,
    generators: Vec<Pauli>,
    destabilizers: Vec<Pauli>,
    logicals: Vec<(Pauli, Pauli)>,
    group: EchelonBasis,
}

impl StabilizerCode {
    /// Validates `generators` and derives destabilizers and minimum-weight
    /// logical representatives.
    pub fn new(generators: Vec<Pauli>) -> Result<Self, CodeError> {
        let n = generators.first().ok_or(CodeError::NoGenerators)?.n();
        Self::build(n, generators)
    }

    /// The zero-generator code on `n` qubits (every qubit is logical).
    pub fn trivial(n: usize) -> Result<Self, CodeError> {
        Self::build(n, Vec::new())
    }

    pub fn from_strings<S: AsRef<str>>(generators: &[S]) -> Result<Self, CodeError> {
        let gens = generators
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<Pauli>, _>>()?;
        Self::new(gens)
    }

    /// Builds a single-logical-qubit code with caller-chosen representatives,
    /// checking every structural invariant.
    pub fn with_representatives(
        generators: Vec<Pauli>,
        logical_x: Pauli,
        logical_z: Pauli,
        destabilizers: Vec<Pauli>,
    ) -> Result<Self, CodeError> {
        let mut code = Self::new(generators)?;
        code.require_single_logical()?;
        let bad = |msg: &str| Err(CodeError::Representative(msg.to_string()));
        for p in [&logical_x, &logical_z].into_iter().chain(destabilizers.iter()) {
            if p.n() != code.n {
                return Err(PauliError::QubitMismatch { left: code.n, right: p.n() }.into());
            }
        }
        if code.syndrome(&logical_x) != 0 || code.syndrome(&logical_z) != 0 {
            return bad("logical operators must commute with every generator");
        }
        if logical_x.commutes(&logical_z) {
            return bad("logical X and Z must anticommute");
        }
        if code.in_stabilizer_group(&logical_x) || code.in_stabilizer_group(&logical_z) {
            return bad("logical operator lies in the stabilizer group");
        }
        if destabilizers.len() != code.generators.len() {
            return bad("one destabilizer per generator is required");
        }
        for (i, d) in destabilizers.iter().enumerate() {
            if code.syndrome(d) != 1 << i {
                return bad(&format!("destabilizer {i} has the wrong syndrome"));
            }
        }
        code.logicals = vec![(logical_x, logical_z)];
        code.destabilizers = destabilizers;
        Ok(code)
    }

    fn build(n: usize, generators: Vec<Pauli>) -> Result<Self, CodeError> {
        if n > MAX_EXHAUSTIVE_QUBITS {
            return Err(CodeError::TooLarge(n));
        }
        for g in &generators {
            if g.n() != n {
                return Err(PauliError::QubitMismatch { left: n, right: g.n() }.into());
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].anticommutes(&generators[j]) {
                    return Err(CodeError::NonCommuting(i, j));
                }
            }
        }
        let rows: Vec<u64> = generators.iter().map(Pauli::to_row).collect();
        if let Some((index, combination)) = gf2::first_dependency(&rows) {
            return Err(CodeError::Dependent { index, combination });
        }
        let group = EchelonBasis::from_rows(rows);
        let mut code = StabilizerCode {
            n,
            label: None,
            generators,
            destabilizers: Vec::new(),
            logicals: Vec::new(),
            group,
        };
        code.destabilizers = code.min_weight_destabilizers();
        code.logicals = code.min_weight_logicals();
        Ok(code)
    }

    fn min_weight_destabilizers(&self) -> Vec<Pauli> {
        let m = self.generators.len();
        let mut found: Vec<Option<Pauli>> = vec![None; m];
        let mut missing = m;
        for w in 1..=self.n {
            if missing == 0 {
                break;
            }
            // weight classes are enumerated in index order, so the first hit is the tie-break winner
            for p in paulis_of_weight(self.n, w) {
                let s = self.syndrome(&p);
                if s.count_ones() == 1 {
                    let i = s.trailing_zeros() as usize;
                    if found[i].is_none() {
                        found[i] = Some(p);
                        missing -= 1;
                    }
                }
            }
        }
        found
            .into_iter()
            .map(|d| d.expect("independent generators admit every unit syndrome"))
            .collect()
    }

    /// Symplectic Gram-Schmidt over the normalizer, choosing X-type-leaning
    /// then Z-type-leaning minimum-weight representatives.
    fn min_weight_logicals(&self) -> Vec<(Pauli, Pauli)> {
        let k = self.k();
        let mut span = self.group.clone();
        let mut pairs: Vec<(Pauli, Pauli)> = Vec::with_capacity(k);
        for _ in 0..k {
            let admissible = |p: &Pauli, span: &EchelonBasis, pairs: &[(Pauli, Pauli)]| {
                self.syndrome(p) == 0
                    && pairs.iter().all(|(a, b)| p.commutes(a) && p.commutes(b))
                    && !span.contains(p.to_row())
            };
            let lx = self
                .first_weight_class(|p| admissible(p, &span, &pairs))
                .into_iter()
                .min_by_key(|p| (p.z_count(), p.index()))
                .expect("normalizer exceeds the stabilizer group when k > 0");
            let lz = self
                .first_weight_class(|p| admissible(p, &span, &pairs) && p.anticommutes(&lx))
                .into_iter()
                .min_by_key(|p| (p.x_count(), p.index()))
                .expect("a symplectic partner exists");
            span.insert(lx.to_row());
            span.insert(lz.to_row());
            pairs.push((lx, lz));
        }
        pairs
    }

    /// All Paulis of the smallest weight for which `pred` holds.
    fn first_weight_class<F: Fn(&Pauli) -> bool>(&self, pred: F) -> Vec<Pauli> {
        for w in 1..=self.n {
            let hits: Vec<Pauli> = paulis_of_weight(self.n, w).into_iter().filter(|p| pred(p)).collect();
            if !hits.is_empty() {
                return hits;
            }
        }
        Vec::new()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.generators
    }

    pub fn destabilizers(&self) -> &[Pauli] {
        &self.destabilizers
    }

    pub fn logicals(&self) -> &[(Pauli, Pauli)] {
        &self.logicals
    }

    /// Logical X representative of a single-logical-qubit code.
    pub fn logical_x(&self) -> Result<Pauli, CodeError> {
        self.require_single_logical()?;
        Ok(self.logicals[0].0)
    }

    pub fn logical_z(&self) -> Result<Pauli, CodeError> {
        self.require_single_logical()?;
        Ok(self.logicals[0].1)
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Display name: the label if set, otherwise the joined generators.
    pub fn name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","),
        }
    }

    pub fn max_generator_weight(&self) -> usize {
        self.generators.iter().map(Pauli::weight).max().unwrap_or(0)
    }

    pub fn require_single_logical(&self) -> Result<(), CodeError> {
        if self.k() == 1 {
            Ok(())
        } else {
            Err(CodeError::LogicalCount { expected: 1, found: self.k() })
        }
    }

    /// Syndrome as a bitmask: bit `i` is the symplectic product with generator `i`.
    ///
    /// Panics on a qubit-count mismatch; see [`StabilizerCode::try_syndrome`].
    pub fn syndrome(&self, e: &Pauli) -> u32 {
        self.generators
            .iter()
            .enumerate()
            .fold(0, |s, (i, g)| s | (u32::from(e.anticommutes(g)) << i))
    }

    pub fn try_syndrome(&self, e: &Pauli) -> Result<u32, CodeError> {
        self.check_n(e)?;
        Ok(self.syndrome(e))
    }

    /// Syndrome as a bit string, generator 0 leftmost.
    pub fn syndrome_string(&self, s: u32) -> String {
        (0..self.generators.len())
            .map(|i| if s >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Canonical pure error: the product of the destabilizers selected by `s`.
    pub fn pure_error(&self, s: u32) -> Pauli {
        self.destabilizers
            .iter()
            .enumerate()
            .filter(|(i, _)| s >> i & 1 == 1)
            .fold(Pauli::identity(self.n), |acc, (_, d)| acc * *d)
    }

    pub fn in_stabilizer_group(&self, p: &Pauli) -> bool {
        p.n() == self.n && self.group.contains(p.to_row())
    }

    /// Logical coset of `e` relative to the canonical pure error of its syndrome.
    pub fn logical_class(&self, e: &Pauli) -> Result<LogicalClass, CodeError> {
        self.check_n(e)?;
        let (lx, lz) = (self.logical_x()?, self.logical_z()?);
        let normalized = *e * self.pure_error(self.syndrome(e));
        Ok(LogicalClass::from_commutation(
            normalized.anticommutes(&lz),
            normalized.anticommutes(&lx),
        ))
    }

    /// Representative Pauli of a logical class (identity, X̄, Ȳ ~ X̄Z̄, Z̄).
    pub fn class_representative(&self, class: LogicalClass) -> Result<Pauli, CodeError> {
        let (lx, lz) = (self.logical_x()?, self.logical_z()?);
        Ok(match class {
            LogicalClass::I => Pauli::identity(self.n),
            LogicalClass::X => lx,
            LogicalClass::Y => lx * lz,
            LogicalClass::Z => lz,
        })
    }

    /// Minimum weight of a Pauli that commutes with every generator but is not
    /// in the stabilizer group, found by scanning Paulis in increasing weight.
    pub fn distance(&self) -> Result<usize, CodeError> {
        if self.k() == 0 {
            return Err(CodeError::LogicalCount { expected: 1, found: 0 });
        }
        for w in 1..=self.n {
            let hit = paulis_of_weight(self.n, w)
                .iter()
                .any(|p| self.syndrome(p) == 0 && !self.group.contains(p.to_row()));
            if hit {
                return Ok(w);
            }
        }
        unreachable!("a code with k > 0 has a nontrivial logical operator")
    }

    /// `true` iff the distance is at least `d`; scans only weights below `d`.
    pub fn has_distance_at_least(&self, d: usize) -> bool {
        (1..d.min(self.n + 1)).all(|w| {
            paulis_of_weight(self.n, w)
                .iter()
                .all(|p| self.syndrome(p) != 0 || self.group.contains(p.to_row()))
        })
    }

    /// Reduced row-echelon form of the symplectic generator matrix. Codes share
    /// a fingerprint iff they have the same stabilizer group.
    pub fn canonical_form(&self) -> Vec<u64> {
        self.group.rref()
    }

    /// Hex rendering of [`StabilizerCode::canonical_form`].
    pub fn fingerprint(&self) -> String {
        let digits = (2 * self.n).div_ceil(4);
        self.canonical_form()
            .iter()
            .map(|r| format!("{r:0digits$x}"))
            .collect::<Vec<_>>()
            .join("")
    }

    /// The same code with qubit `q` relabelled as `perm[q]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self, CodeError> {
        let gens = self.generators.iter().map(|g| g.permute(perm)).collect();
        let mut code = Self::build(self.n, gens)?;
        code.label = self.label.clone();
        Ok(code)
    }

    fn check_n(&self, e: &Pauli) -> Result<(), CodeError> {
        if e.n() != self.n {
            Err(PauliError::QubitMismatch { left: self.n, right: e.n() }.into())
        } else {
            Ok(())
        }
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            n: self.n,
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            label: self.label.clone(),
        }
    }
}

/// On-disk code description: `{ "n": 7, "generators": [...], "label": "..." }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub n: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CodeFile {
    pub fn into_code(self) -> Result<StabilizerCode, CodeError> {
        let code = StabilizerCode::from_strings(&self.generators)?;
        if code.n() != self.n {
            return Err(PauliError::QubitMismatch { left: self.n, right: code.n() }.into());
        }
        Ok(match self.label {
            Some(l) => code.with_label(l),
            None => code,
        })
    }
}

pub fn load_code(path: &Path) -> Result<StabilizerCode, CodeError> {
    let file_err = |reason: String| CodeError::File {
        path: path.display().to_string(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
    let file: CodeFile = serde_json::from_str(&text).map_err(|e| file_err(e.to_string()))?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    let code = file.into_code()?;
    Ok(match (code.label().is_some(), stem) {
        (false, Some(stem)) => code.with_label(stem),
        _ => code,
    })
}

pub const NAMED_CODES: [&str; 4] = ["steane", "cyclic7", "five_qubit", "phase_flip3"];

/// Steane's [[7,1,3]] code: three X-type rows followed by their Z-type copies.
pub fn steane() -> StabilizerCode {
    let rows = ["XIXIXIX", "IXXIIXX", "IIIXXXX"];
    let z_rows: Vec<String> = rows.iter().map(|r| r.replace('X', "Z")).collect();
    let gens: Vec<String> = rows.iter().map(|r| r.to_string()).chain(z_rows).collect();
    StabilizerCode::from_strings(&gens)
        .expect("Steane generators are valid")
        .with_label("steane")
}

fn cyclic(seed: &str, count: usize) -> Vec<Pauli> {
    let base: Pauli = seed.parse().expect("valid seed string");
    (0..count as isize).map(|k| base.cyclic_shift(k)).collect()
}

/// The 7-qubit cyclic code generated by shifts 0 through 5 of `XZIZXII`.
pub fn cyclic7() -> StabilizerCode {
    StabilizerCode::new(cyclic("XZIZXII", 6))
        .expect("cyclic generators are valid")
        .with_label("cyclic7")
}

/// The perfect 5-qubit code, shifts 0 through 3 of `XZIZX`.
pub fn five_qubit() -> StabilizerCode {
    StabilizerCode::new(cyclic("XZIZX", 4))
        .expect("five-qubit generators are valid")
        .with_label("five_qubit")
}

/// Three-qubit repetition code against phase flips.
pub fn phase_flip3() -> StabilizerCode {
    StabilizerCode::from_strings(&["XXI", "IXX"])
        .expect("phase-flip generators are valid")
        .with_label("phase_flip3")
}

pub fn named(label: &str) -> Option<StabilizerCode> {
    match label {
        "steane" => Some(steane()),
        "cyclic7" => Some(cyclic7()),
        "five_qubit" => Some(five_qubit()),
        "phase_flip3" => Some(phase_flip3()),
        _ => None,
    }
}

/// A built-in label or a path to a code file.
pub fn resolve(label_or_path: &str) -> Result<StabilizerCode, CodeError> {
    if let Some(code) = named(label_or_path) {
        return Ok(code);
    }
    let path = Path::new(label_or_path);
    if path.is_file() {
        load_code(path)
    } else {
        Err(CodeError::UnknownLabel(label_or_path.to_string()))
    }
}

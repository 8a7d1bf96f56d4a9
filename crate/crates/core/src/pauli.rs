//! Phaseless n-qubit Pauli operators in the binary symplectic representation.
//!
//! A Pauli is stored as two packed bit-vectors: bit `i` of `x` is set when
//! qubit `i` carries X or Y, bit `i` of `z` when it carries Z or Y. Qubit 0 is
//! the leftmost letter of the string form. Global phases are not tracked.
//!
//! # Enumeration order
//!
//! The dense index of a Pauli interleaves its bits: bit `2i` of the index is
//! `x_i` and bit `2i + 1` is `z_i`. Single-qubit letters therefore enumerate as
//! `I = 0, X = 1, Z = 2, Y = 3`, and phaseless multiplication is XOR of
//! indices. Every dense probability vector in this crate uses this order.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use thiserror::Error;

/// Largest register the packed representation holds.
pub const MAX_QUBITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("empty Pauli string")]
    Empty,
    #[error("invalid character {ch:?} at position {pos} (expected I, X, Y or Z)")]
    InvalidChar { ch: char, pos: usize },
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("{0} qubits exceeds the supported maximum of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    /// `(x, z)` bits of the letter.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// A phaseless Pauli operator on `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pauli {
    n: usize,
    x: u32,
    z: u32,
}

fn mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "too many qubits: {n}");
        Pauli { n, x: 0, z: 0 }
    }

    /// Builds a Pauli from packed bits. Bits beyond `n` must be clear.
    pub fn from_bits(n: usize, x: u32, z: u32) -> Result<Self, PauliError> {
        if n > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n));
        }
        let m = mask(n);
        assert!(x & !m == 0 && z & !m == 0, "bits set beyond qubit {n}");
        Ok(Pauli { n, x, z })
    }

    /// A single non-identity letter on qubit `q`.
    pub fn single(n: usize, q: usize, letter: Letter) -> Result<Self, PauliError> {
        if q >= n {
            return Err(PauliError::IndexOutOfRange { index: q, n });
        }
        let mut p = Pauli::identity(n);
        p.set(q, letter);
        Ok(p)
    }

    /// Pauli with the given dense index (see the module docs for the order).
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(2 * n <= 64, "dense index only defined for n <= 32");
        let mut x = 0u32;
        let mut z = 0u32;
        for q in 0..n {
            x |= (((index >> (2 * q)) & 1) as u32) << q;
            z |= (((index >> (2 * q + 1)) & 1) as u32) << q;
        }
        Pauli { n, x, z }
    }

    pub fn index(&self) -> u64 {
        let mut idx = 0u64;
        for q in 0..self.n {
            idx |= (((self.x >> q) & 1) as u64) << (2 * q);
            idx |= (((self.z >> q) & 1) as u64) << (2 * q + 1);
        }
        idx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u32 {
        self.x
    }

    pub fn z_bits(&self) -> u32 {
        self.z
    }

    pub fn letter(&self, q: usize) -> Letter {
        assert!(q < self.n, "qubit {q} out of range");
        Letter::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, letter: Letter) {
        assert!(q < self.n, "qubit {q} out of range");
        let (bx, bz) = letter.bits();
        self.x = (self.x & !(1 << q)) | ((bx as u32) << q);
        self.z = (self.z & !(1 << q)) | ((bz as u32) << q);
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n).map(|q| self.letter(q))
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Bitmask of the qubits acted on non-trivially.
    pub fn support(&self) -> u32 {
        self.x | self.z
    }

    /// Positions carrying X or Y.
    pub fn x_count(&self) -> usize {
        self.x.count_ones() as usize
    }

    /// Positions carrying Z or Y.
    pub fn z_count(&self) -> usize {
        self.z.count_ones() as usize
    }

    /// Symplectic product: `true` iff the operators anticommute.
    ///
    /// Panics when the qubit counts differ; see [`Pauli::try_anticommutes`].
    pub fn anticommutes(&self, other: &Pauli) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1 == 1
    }

    pub fn try_anticommutes(&self, other: &Pauli) -> Result<bool, PauliError> {
        self.check_same(other)?;
        Ok(self.anticommutes(other))
    }

    pub fn commutes(&self, other: &Pauli) -> bool {
        !self.anticommutes(other)
    }

    /// Symplectic product as a bit.
    pub fn symplectic_product(&self, other: &Pauli) -> Result<u8, PauliError> {
        self.try_anticommutes(other).map(u8::from)
    }

    pub fn try_mul(&self, other: &Pauli) -> Result<Pauli, PauliError> {
        self.check_same(other)?;
        Ok(Pauli {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// Moves the letter at position `i` to position `(i + k) mod n`.
    pub fn cyclic_shift(&self, k: isize) -> Pauli {
        if self.n == 0 {
            return *self;
        }
        let n = self.n;
        let k = k.rem_euclid(n as isize) as u32;
        let rot = |b: u32| {
            if k == 0 {
                b
            } else {
                ((b << k) | (b >> (n as u32 - k))) & mask(n)
            }
        };
        Pauli {
            n,
            x: rot(self.x),
            z: rot(self.z),
        }
    }

    /// Relabels qubits: the letter on qubit `q` moves to qubit `perm[q]`.
    pub fn permute(&self, perm: &[usize]) -> Pauli {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut out = Pauli::identity(self.n);
        for (q, &target) in perm.iter().enumerate() {
            out.set(target, self.letter(q));
        }
        out
    }

    /// Symplectic row vector `x | z << n`, the layout used by the GF(2) routines.
    pub fn to_row(&self) -> u64 {
        self.x as u64 | ((self.z as u64) << self.n)
    }

    pub fn from_row(n: usize, row: u64) -> Pauli {
        let m = mask(n) as u64;
        Pauli {
            n,
            x: (row & m) as u32,
            z: ((row >> n) & m) as u32,
        }
    }

    fn check_same(&self, other: &Pauli) -> Result<(), PauliError> {
        if self.n != other.n {
            Err(PauliError::QubitMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }
}

impl Mul for Pauli {
    type Output = Pauli;

    /// Phaseless product. Panics on mismatched qubit counts.
    fn mul(self, rhs: Pauli) -> Pauli {
        self.try_mul(&rhs).expect("qubit count mismatch")
    }
}

impl Mul for &Pauli {
    type Output = Pauli;

    fn mul(self, rhs: &Pauli) -> Pauli {
        self.try_mul(rhs).expect("qubit count mismatch")
    }
}

impl FromStr for Pauli {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(PauliError::Empty);
        }
        let n = s.chars().count();
        if n > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n));
        }
        let mut p = Pauli::identity(n);
        for (pos, ch) in s.chars().enumerate() {
            let letter = Letter::from_char(ch).ok_or(PauliError::InvalidChar { ch, pos })?;
            p.set(pos, letter);
        }
        Ok(p)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl serde::Serialize for Pauli {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Pauli {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All Paulis on `n` qubits with exactly `w` non-identity positions, in
/// ascending dense-index order within the weight class.
pub fn paulis_of_weight(n: usize, w: usize) -> Vec<Pauli> {
    assert!(n <= 16, "weight enumeration limited to 16 qubits");
    let mut out = Vec::new();
    if w > n {
        return out;
    }
    for support in 0u32..(1u32 << n) {
        if support.count_ones() as usize != w {
            continue;
        }
        let qubits: Vec<usize> = (0..n).filter(|q| support >> q & 1 == 1).collect();
        for mut code in 0..3usize.pow(w as u32) {
            let mut p = Pauli::identity(n);
            for &q in &qubits {
                p.set(q, [Letter::X, Letter::Y, Letter::Z][code % 3]);
                code /= 3;
            }
            out.push(p);
        }
    }
    out.sort_by_key(Pauli::index);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn parses_cyclic_generator() {
        let g = p("XZIZXII");
        assert_eq!(g.n(), 7);
        // qubit 0 is the leftmost letter: x on qubits 0 and 4, z on 1 and 3
        assert_eq!(g.x_bits(), 0b001_0001);
        assert_eq!(g.z_bits(), 0b000_1010);
        assert_eq!(g.to_string(), "XZIZXII");
    }

    #[test]
    fn parses_identity_and_y() {
        let id = p("IIIIIII");
        assert!(id.is_identity());
        let y = p("Y");
        assert_eq!((y.x_bits(), y.z_bits()), (1, 1));
    }

    #[test]
    fn rejects_bad_strings() {
        assert_eq!("".parse::<Pauli>(), Err(PauliError::Empty));
        assert_eq!(
            "XQZ".parse::<Pauli>(),
            Err(PauliError::InvalidChar { ch: 'Q', pos: 1 })
        );
        assert!("xz".parse::<Pauli>().is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(p("X").anticommutes(&p("Z")));
        assert!(p("X").commutes(&p("X")));
        assert_eq!(p("XZIZXII").symplectic_product(&p("IXZIZXI")).unwrap(), 0);
        assert!(matches!(
            p("X").symplectic_product(&p("XX")),
            Err(PauliError::QubitMismatch { .. })
        ));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(p("X") * p("Z"), p("Y"));
        assert!((p("XZIZXII") * p("XZIZXII")).is_identity());
        assert_eq!(p("III") * p("XYZ"), p("XYZ"));
        assert!(p("X").try_mul(&p("XX")).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(p("XZIZXII").weight(), 4);
        assert_eq!(Pauli::identity(5).weight(), 0);
        assert_eq!(p("ZZ").weight(), 2);
    }

    #[test]
    fn shifts() {
        let g = p("XZIZXII");
        assert_eq!(g.cyclic_shift(1), p("IXZIZXI"));
        assert_eq!(g.cyclic_shift(0), g);
        assert_eq!(g.cyclic_shift(7), g);
        assert_eq!(g.cyclic_shift(-1), p("ZIZXIIX"));
    }

    #[test]
    fn index_order_of_single_letters() {
        let order: Vec<String> = (0..4).map(|i| Pauli::from_index(1, i).to_string()).collect();
        assert_eq!(order, ["I", "X", "Z", "Y"]);
    }

    #[test]
    fn weight_enumeration_counts() {
        assert_eq!(paulis_of_weight(7, 0).len(), 1);
        assert_eq!(paulis_of_weight(7, 1).len(), 21);
        assert_eq!(paulis_of_weight(7, 2).len(), 21 * 9);
        let total: usize = (0..=4).map(|w| paulis_of_weight(4, w).len()).sum();
        assert_eq!(total, 256);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = Pauli> {
        (0u64..(1u64 << (2 * n))).prop_map(move |i| Pauli::from_index(n, i))
    }

    proptest! {
        #[test]
        fn string_round_trip(s in "[IXYZ]{1,12}") {
            prop_assert_eq!(s.parse::<Pauli>().unwrap().to_string(), s);
        }

        #[test]
        fn index_round_trip(i in 0u64..(1 << 14)) {
            prop_assert_eq!(Pauli::from_index(7, i).index(), i);
        }

        #[test]
        fn product_is_index_xor(a in arb_pauli(6), b in arb_pauli(6)) {
            prop_assert_eq!((a * b).index(), a.index() ^ b.index());
        }

        #[test]
        fn bilinear_and_symmetric(a in arb_pauli(7), b in arb_pauli(7), c in arb_pauli(7)) {
            prop_assert_eq!((a * b).anticommutes(&c), a.anticommutes(&c) ^ b.anticommutes(&c));
            prop_assert_eq!(a.anticommutes(&b), b.anticommutes(&a));
        }

        #[test]
        fn symplectic_matches_letterwise_count(a in arb_pauli(7), b in arb_pauli(7)) {
            let differing = (0..7)
                .filter(|&q| {
                    let (la, lb) = (a.letter(q), b.letter(q));
                    la != Letter::I && lb != Letter::I && la != lb
                })
                .count();
            prop_assert_eq!(a.anticommutes(&b), differing % 2 == 1);
        }

        #[test]
        fn weight_zero_iff_identity(a in arb_pauli(5)) {
            prop_assert_eq!(a.weight() == 0, a.is_identity());
        }

        #[test]
        fn shifts_compose(a in arb_pauli(7), s in -20isize..20, t in -20isize..20) {
            prop_assert_eq!(a.cyclic_shift(s).weight(), a.weight());
            prop_assert_eq!(a.cyclic_shift(s).cyclic_shift(t), a.cyclic_shift(s + t));
        }

        #[test]
        fn associative(a in arb_pauli(4), b in arb_pauli(4), c in arb_pauli(4)) {
            prop_assert_eq!((a * b) * c, a * (b * c));
        }
    }
}

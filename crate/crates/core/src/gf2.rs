//! Dense linear algebra over GF(2) on rows packed into `u64`.
//!
//! Column `c` of a row is bit `c`. Symplectic Pauli rows use the layout of
//! [`Pauli::to_row`](crate::pauli::Pauli::to_row): X part in the low `n` bits,
//! Z part in the next `n`.

/// Incrementally maintained echelon basis of a row space.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    // (pivot bit, row); each row has its pivot as its lowest set bit and no
    // other row shares that pivot bit.
    rows: Vec<(u32, u64)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<I: IntoIterator<Item = u64>>(rows: I) -> Self {
        let mut basis = Self::new();
        for r in rows {
            basis.insert(r);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot; zero iff `v` is in the span.
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &(pivot, row) in &self.rows {
            if v >> pivot & 1 == 1 {
                v ^= row;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v` to the basis. Returns `false` if it was already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let pivot = r.trailing_zeros();
        // keep the basis fully reduced so `reduce` is order-independent
        for (_, row) in self.rows.iter_mut() {
            if *row >> pivot & 1 == 1 {
                *row ^= r;
            }
        }
        self.rows.push((pivot, r));
        true
    }

    /// Reduced row echelon form, rows sorted by pivot column. Two row sets
    /// give the same output iff they span the same space.
    pub fn rref(&self) -> Vec<u64> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|&(p, _)| p);
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

pub fn rank(rows: &[u64]) -> usize {
    EchelonBasis::from_rows(rows.iter().copied()).rank()
}

pub fn rref(rows: &[u64]) -> Vec<u64> {
    EchelonBasis::from_rows(rows.iter().copied()).rref()
}

/// First row that is a GF(2) combination of earlier rows, with the indices of
/// the earlier rows that sum to it.
pub fn first_dependency(rows: &[u64]) -> Option<(usize, Vec<usize>)> {
    // each basis row carries a mask of the input rows combined into it
    let mut basis: Vec<(u32, u64, u64)> = Vec::new();
    for (i, &v) in rows.iter().enumerate() {
        assert!(i < 64, "dependency tracking limited to 64 rows");
        let mut r = v;
        let mut combo = 1u64 << i;
        for &(pivot, row, c) in &basis {
            if r >> pivot & 1 == 1 {
                r ^= row;
                combo ^= c;
            }
        }
        if r == 0 {
            let deps = (0..i).filter(|&j| combo >> j & 1 == 1).collect();
            return Some((i, deps));
        }
        let pivot = r.trailing_zeros();
        for (_, row, c) in basis.iter_mut() {
            if *row >> pivot & 1 == 1 {
                *row ^= r;
                *c ^= combo;
            }
        }
        basis.push((pivot, r, combo));
    }
    None
}

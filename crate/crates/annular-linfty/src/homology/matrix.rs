//! Linear algebra over GF(2).
//!
//! Everything downstream (cube differentials, operator identities, chain
//! contractions, transferred operations) reduces to exact arithmetic with
//! matrices over the two-element field, so this module is written for
//! determinism first: no hash maps, no pointer-order iteration, and every
//! public operation produces identical bytes for identical inputs.
//!
//! Storage switches internally by width: matrices with at most
//! [`DENSE_COL_LIMIT`] columns keep bit-packed rows (one `u64` per 64
//! columns), wider matrices keep sorted column-index lists per row. The
//! switch is invisible through the API; elimination-style algorithms
//! densify rows on the fly since row width, not row count, is what the
//! limit guards.

use serde::{Deserialize, Serialize};

/// Widest matrix that is stored with bit-packed rows.
pub const DENSE_COL_LIMIT: usize = 4096;

/// A vector over GF(2), bit-packed into `u64` words (LSB first).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec { len, words: vec![0u64; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = F2Vec::zeros(len);
        for &i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Parity of the AND with another vector (the GF(2) inner product).
    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl std::fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F2Vec[{}; ", self.len)?;
        let ones: Vec<usize> = self.iter_ones().collect();
        write!(f, "{ones:?}]")
    }
}

#[derive(Clone)]
enum Repr {
    /// One bit-packed row per matrix row.
    Dense(Vec<F2Vec>),
    /// Sorted, deduplicated column indices per row.
    Sparse(Vec<Vec<u32>>),
}

/// A matrix over GF(2). Rows index the target, columns the source, so
/// `m.mul(&n)` is "apply `n` first, then `m`".
#[derive(Clone)]
pub struct F2Matrix {
    nrows: usize,
    ncols: usize,
    repr: Repr,
}

/// XOR-accumulate a sorted list of column indices: indices appearing an even
/// number of times cancel.
fn xor_dedup(mut cols: Vec<u32>) -> Vec<u32> {
    cols.sort_unstable();
    let mut out = Vec::with_capacity(cols.len());
    let mut i = 0;
    while i < cols.len() {
        let mut j = i + 1;
        while j < cols.len() && cols[j] == cols[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(cols[i]);
        }
        i = j;
    }
    out
}

/// Symmetric difference of two sorted index lists.
fn xor_merge(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl F2Matrix {
    fn dense_width(ncols: usize) -> bool {
        ncols <= DENSE_COL_LIMIT
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        let repr = if Self::dense_width(ncols) {
            Repr::Dense(vec![F2Vec::zeros(ncols); nrows])
        } else {
            Repr::Sparse(vec![Vec::new(); nrows])
        };
        F2Matrix { nrows, ncols, repr }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from (row, col) entries. Duplicate entries cancel in pairs.
    pub fn from_entries<I>(nrows: usize, ncols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut per_row: Vec<Vec<u32>> = vec![Vec::new(); nrows];
        for (r, c) in entries {
            assert!(r < nrows && c < ncols, "entry ({r},{c}) out of {nrows}x{ncols}");
            per_row[r].push(c as u32);
        }
        let per_row: Vec<Vec<u32>> = per_row.into_iter().map(xor_dedup).collect();
        if Self::dense_width(ncols) {
            let rows = per_row
                .into_iter()
                .map(|cols| {
                    let mut v = F2Vec::zeros(ncols);
                    for c in cols {
                        v.set(c as usize, true);
                    }
                    v
                })
                .collect();
            F2Matrix { nrows, ncols, repr: Repr::Dense(rows) }
        } else {
            F2Matrix { nrows, ncols, repr: Repr::Sparse(per_row) }
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.nrows && c < self.ncols);
        match &self.repr {
            Repr::Dense(rows) => rows[r].get(c),
            Repr::Sparse(rows) => rows[r].binary_search(&(c as u32)).is_ok(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.nrows && c < self.ncols);
        match &mut self.repr {
            Repr::Dense(rows) => rows[r].set(c, value),
            Repr::Sparse(rows) => match rows[r].binary_search(&(c as u32)) {
                Ok(pos) => {
                    if !value {
                        rows[r].remove(pos);
                    }
                }
                Err(pos) => {
                    if value {
                        rows[r].insert(pos, c as u32);
                    }
                }
            },
        }
    }

    /// Row `r` materialized as a bit vector of length `ncols`.
    pub fn row(&self, r: usize) -> F2Vec {
        match &self.repr {
            Repr::Dense(rows) => rows[r].clone(),
            Repr::Sparse(rows) => {
                let mut v = F2Vec::zeros(self.ncols);
                for &c in &rows[r] {
                    v.set(c as usize, true);
                }
                v
            }
        }
    }

    /// Column `c` materialized as a bit vector of length `nrows`.
    pub fn column(&self, c: usize) -> F2Vec {
        assert!(c < self.ncols);
        let mut v = F2Vec::zeros(self.nrows);
        for r in 0..self.nrows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// XOR the bit vector `row` (length `ncols`) into row `r`.
    pub fn xor_row_vec(&mut self, r: usize, row: &F2Vec) {
        assert_eq!(row.len(), self.ncols);
        match &mut self.repr {
            Repr::Dense(rows) => rows[r].xor_assign(row),
            Repr::Sparse(rows) => {
                let add: Vec<u32> = row.iter_ones().map(|c| c as u32).collect();
                rows[r] = xor_merge(&rows[r], &add);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Dense(rows) => rows.iter().all(|r| r.is_zero()),
            Repr::Sparse(rows) => rows.iter().all(|r| r.is_empty()),
        }
    }

    pub fn count_ones(&self) -> usize {
        match &self.repr {
            Repr::Dense(rows) => rows.iter().map(|r| r.count_ones()).sum(),
            Repr::Sparse(rows) => rows.iter().map(|r| r.len()).sum(),
        }
    }

    /// All entries as (row, col), sorted row-major.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match &self.repr {
            Repr::Dense(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    out.extend(row.iter_ones().map(|c| (r, c)));
                }
            }
            Repr::Sparse(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    out.extend(row.iter().map(|&c| (r, c as usize)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch in add");
        let mut out = self.clone();
        for r in 0..self.nrows {
            match (&mut out.repr, &other.repr) {
                (Repr::Dense(rows), Repr::Dense(orows)) => rows[r].xor_assign(&orows[r]),
                (Repr::Sparse(rows), Repr::Sparse(orows)) => rows[r] = xor_merge(&rows[r], &orows[r]),
                _ => {
                    let orow = other.row(r);
                    out.xor_row_vec(r, &orow);
                    continue;
                }
            }
        }
        out
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.ncols, rhs.nrows, "shape mismatch in mul");
        let mut out = F2Matrix::zeros(self.nrows, rhs.ncols);
        for r in 0..self.nrows {
            let mut acc = F2Vec::zeros(rhs.ncols);
            let mut any = false;
            let mut absorb = |j: usize| {
                match &rhs.repr {
                    Repr::Dense(rrows) => acc.xor_assign(&rrows[j]),
                    Repr::Sparse(rrows) => {
                        for &c in &rrows[j] {
                            acc.flip(c as usize);
                        }
                    }
                }
            };
            match &self.repr {
                Repr::Dense(rows) => {
                    for j in rows[r].iter_ones() {
                        absorb(j);
                        any = true;
                    }
                }
                Repr::Sparse(rows) => {
                    for &j in &rows[r] {
                        absorb(j as usize);
                        any = true;
                    }
                }
            }
            if any && !acc.is_zero() {
                out.xor_row_vec(r, &acc);
            }
        }
        out
    }

    /// Apply to a column vector: `self * v`.
    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(self.ncols, v.len(), "shape mismatch in mul_vec");
        let mut out = F2Vec::zeros(self.nrows);
        for r in 0..self.nrows {
            let bit = match &self.repr {
                Repr::Dense(rows) => rows[r].dot(v),
                Repr::Sparse(rows) => {
                    let mut acc = false;
                    for &c in &rows[r] {
                        acc ^= v.get(c as usize);
                    }
                    acc
                }
            };
            if bit {
                out.set(r, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_entries(self.ncols, self.nrows, self.entries().into_iter().map(|(r, c)| (c, r)))
    }

    /// Horizontal stack of the identity under self? No: submatrix selection.
    /// Keep the columns listed in `cols`, in order.
    pub fn select_columns(&self, cols: &[usize]) -> F2Matrix {
        let mut entries = Vec::new();
        for (new_c, &c) in cols.iter().enumerate() {
            assert!(c < self.ncols);
            for r in self.column(c).iter_ones() {
                entries.push((r, new_c));
            }
        }
        F2Matrix::from_entries(self.nrows, cols.len(), entries)
    }

    /// Keep the rows listed in `rows`, in order.
    pub fn select_rows(&self, rows: &[usize]) -> F2Matrix {
        let mut entries = Vec::new();
        for (new_r, &r) in rows.iter().enumerate() {
            assert!(r < self.nrows);
            let row = self.row(r);
            for c in row.iter_ones() {
                entries.push((new_r, c));
            }
        }
        F2Matrix::from_entries(rows.len(), self.ncols, entries)
    }

    fn rows_as_vecs(&self) -> Vec<F2Vec> {
        (0..self.nrows).map(|r| self.row(r)).collect()
    }

    pub fn rank(&self) -> usize {
        let mut pivots: Vec<F2Vec> = Vec::new();
        for mut row in self.rows_as_vecs() {
            loop {
                match row.first_one() {
                    None => break,
                    Some(lead) => {
                        match pivots.binary_search_by_key(&lead, |p| p.first_one().unwrap()) {
                            Ok(idx) => row.xor_assign(&pivots[idx]),
                            Err(idx) => {
                                pivots.insert(idx, row);
                                break;
                            }
                        }
                    }
                }
            }
        }
        pivots.len()
    }

    /// Row-reduce a copy to reduced row echelon form.
    /// Returns (rref rows, pivot column of each returned row).
    fn rref(&self) -> (Vec<F2Vec>, Vec<usize>) {
        let mut pivots: Vec<F2Vec> = Vec::new();
        for mut row in self.rows_as_vecs() {
            loop {
                match row.first_one() {
                    None => break,
                    Some(lead) => {
                        match pivots.binary_search_by_key(&lead, |p| p.first_one().unwrap()) {
                            Ok(idx) => row.xor_assign(&pivots[idx]),
                            Err(idx) => {
                                pivots.insert(idx, row);
                                break;
                            }
                        }
                    }
                }
            }
        }
        // Back-substitute: clear pivot columns above/below each pivot.
        let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.first_one().unwrap()).collect();
        for i in 0..pivots.len() {
            for j in 0..pivots.len() {
                if i != j && pivots[j].get(pivot_cols[i]) {
                    let (a, b) = if i < j {
                        let (lo, hi) = pivots.split_at_mut(j);
                        (&lo[i], &mut hi[0])
                    } else {
                        let (lo, hi) = pivots.split_at_mut(i);
                        (&hi[0], &mut lo[j])
                    };
                    b.xor_assign(a);
                }
            }
        }
        (pivots, pivot_cols)
    }

    /// A basis of `{ x : self * x = 0 }`, one `F2Vec` of length `ncols` per
    /// basis vector, ordered by their leading (free-column) index.
    pub fn kernel_basis(&self) -> Vec<F2Vec> {
        let (rref, pivot_cols) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.ncols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = F2Vec::zeros(self.ncols);
            v.set(free, true);
            for (row, &pc) in rref.iter().zip(&pivot_cols) {
                if row.get(free) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Indices of a column subset forming a basis of the image (the pivot
    /// columns of the row echelon form), in increasing order.
    pub fn image_basis(&self) -> Vec<usize> {
        let (_, mut pivot_cols) = self.rref();
        pivot_cols.sort_unstable();
        pivot_cols
    }

    /// Serialize to the documented binary layout:
    /// magic `F2M1`, then `nrows` and `ncols` as little-endian `u64`, then
    /// for each row `ceil(ncols/64)` little-endian `u64` words of bit-packed
    /// columns (bit `c % 64` of word `c / 64` is column `c`), regardless of
    /// the in-memory representation.
    pub fn to_bytes(&self) -> Vec<u8> {
        let words_per_row = self.ncols.div_ceil(64);
        let mut out = Vec::with_capacity(4 + 16 + 8 * words_per_row * self.nrows);
        out.extend_from_slice(b"F2M1");
        out.extend_from_slice(&(self.nrows as u64).to_le_bytes());
        out.extend_from_slice(&(self.ncols as u64).to_le_bytes());
        for r in 0..self.nrows {
            let row = self.row(r);
            for w in &row.words {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        out
    }

    /// Inverse of [`F2Matrix::to_bytes`].
    pub fn from_bytes(bytes: &[u8]) -> Option<F2Matrix> {
        if bytes.len() < 20 || &bytes[0..4] != b"F2M1" {
            return None;
        }
        let nrows = u64::from_le_bytes(bytes[4..12].try_into().ok()?) as usize;
        let ncols = u64::from_le_bytes(bytes[12..20].try_into().ok()?) as usize;
        let words_per_row = ncols.div_ceil(64);
        if bytes.len() != 20 + 8 * words_per_row * nrows {
            return None;
        }
        let mut entries = Vec::new();
        for r in 0..nrows {
            let base = 20 + 8 * words_per_row * r;
            for wi in 0..words_per_row {
                let w = u64::from_le_bytes(bytes[base + 8 * wi..base + 8 * wi + 8].try_into().ok()?);
                let mut w = w;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    let c = wi * 64 + b;
                    if c >= ncols {
                        return None;
                    }
                    entries.push((r, c));
                }
            }
        }
        Some(F2Matrix::from_entries(nrows, ncols, entries))
    }
}

impl PartialEq for F2Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.nrows == other.nrows && self.ncols == other.ncols && self.entries() == other.entries()
    }
}

impl Eq for F2Matrix {}

impl std::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F2Matrix {}x{} ({} entries)", self.nrows, self.ncols, self.count_ones())?;
        if self.nrows <= 32 && self.ncols <= 64 {
            for r in 0..self.nrows {
                let row = self.row(r);
                let s: String = (0..self.ncols).map(|c| if row.get(c) { '1' } else { '.' }).collect();
                writeln!(f, "  {s}")?;
            }
        }
        Ok(())
    }
}

/// JSON wire form of a matrix: `{"rows": r, "cols": c, "entries": [[i,j], ...]}`
/// with entries sorted row-major.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixTriplets {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize)>,
}

impl From<&F2Matrix> for MatrixTriplets {
    fn from(m: &F2Matrix) -> Self {
        MatrixTriplets { rows: m.nrows(), cols: m.ncols(), entries: m.entries() }
    }
}

impl TryFrom<&MatrixTriplets> for F2Matrix {
    type Error = String;

    fn try_from(t: &MatrixTriplets) -> std::result::Result<Self, String> {
        for &(r, c) in &t.entries {
            if r >= t.rows || c >= t.cols {
                return Err(format!("entry ({r},{c}) outside {}x{}", t.rows, t.cols));
            }
        }
        Ok(F2Matrix::from_entries(t.rows, t.cols, t.entries.iter().copied()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(entries: &[(usize, usize)], nrows: usize, ncols: usize) -> F2Matrix {
        F2Matrix::from_entries(nrows, ncols, entries.iter().copied())
    }

    #[test]
    fn vec_basics() {
        let mut v = F2Vec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.first_one(), Some(0));
        v.flip(0);
        assert_eq!(v.first_one(), Some(64));
        let w = F2Vec::from_indices(130, &[64, 100]);
        v.xor_assign(&w);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![100, 129]);
    }

    #[test]
    fn from_entries_xor_cancels_duplicates() {
        let m = small(&[(0, 1), (0, 1), (1, 2), (0, 1)], 2, 3);
        assert_eq!(m.entries(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn mul_identity_and_associativity() {
        let a = small(&[(0, 0), (0, 2), (1, 1), (2, 0)], 3, 3);
        let id = F2Matrix::identity(3);
        assert_eq!(a.mul(&id), a);
        assert_eq!(id.mul(&a), a);
        let b = small(&[(0, 1), (2, 2), (1, 0)], 3, 3);
        let c = small(&[(1, 1), (2, 0), (0, 2)], 3, 3);
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn rank_kernel_image_consistency() {
        // d = [[1,1,0],[0,1,1]] has rank 2, kernel spanned by (1,1,1).
        let d = small(&[(0, 0), (0, 1), (1, 1), (1, 2)], 2, 3);
        assert_eq!(d.rank(), 2);
        let ker = d.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0].iter_ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        for v in &ker {
            assert!(d.mul_vec(v).is_zero());
        }
        assert_eq!(d.image_basis(), vec![0, 1]);
    }

    #[test]
    fn transpose_involution_and_rank_invariance() {
        let a = small(&[(0, 3), (1, 0), (1, 3), (2, 2)], 3, 5);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn wide_matrices_go_sparse_and_agree_with_dense_semantics() {
        let n = DENSE_COL_LIMIT + 10;
        let mut m = F2Matrix::zeros(3, n);
        assert!(!m.is_dense());
        m.set(0, 0, true);
        m.set(0, n - 1, true);
        m.set(2, 4097, true);
        assert!(m.get(0, n - 1));
        assert_eq!(m.count_ones(), 3);
        assert_eq!(m.rank(), 2);
        let t = m.transpose();
        assert!(t.is_dense());
        assert_eq!(t.transpose(), m);
        // round-trip through the binary layout
        assert_eq!(F2Matrix::from_bytes(&m.to_bytes()).unwrap(), m);
    }

    #[test]
    fn binary_layout_is_as_documented() {
        let m = small(&[(0, 0), (1, 65)], 2, 66);
        let bytes = m.to_bytes();
        assert_eq!(&bytes[0..4], b"F2M1");
        assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 66);
        // row 0: words [1, 0]; row 1: words [0, 2]
        assert_eq!(u64::from_le_bytes(bytes[20..28].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(bytes[28..36].try_into().unwrap()), 0);
        assert_eq!(u64::from_le_bytes(bytes[36..44].try_into().unwrap()), 0);
        assert_eq!(u64::from_le_bytes(bytes[44..52].try_into().unwrap()), 2);
    }

    #[test]
    fn triplet_json_round_trip() {
        let m = small(&[(0, 1), (3, 2)], 4, 3);
        let t = MatrixTriplets::from(&m);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"rows":4,"cols":3,"entries":[[0,1],[3,2]]}"#);
        let back: MatrixTriplets = serde_json::from_str(&s).unwrap();
        assert_eq!(F2Matrix::try_from(&back).unwrap(), m);
    }
}

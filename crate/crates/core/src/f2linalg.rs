//! Dense linear algebra over F2.
//!
//! Vectors are bit-packed into `u64` words, coordinate `j` at bit `j % 64` of
//! word `j / 64`. Bits past `len` are always zero.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; word_count(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector { len, words: vec![!0; word_count(len)] };
        v.clear_tail();
        v
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if bit {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    /// Vector of the given length with ones exactly at `indices` (0-based).
    pub fn from_support(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    /// The low `len` bits of `value`, bit `i` becoming coordinate `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64);
        let mut v = BitVector { len, words: vec![value; word_count(len)] };
        v.clear_tail();
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        assert_eq!(words.len(), word_count(len));
        let mut v = BitVector { len, words };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Mod-2 scalar product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// First set coordinate, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Indices of set coordinates, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// 0/1 string, character `j` holding coordinate `j`.
    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub fn parse_bit_string(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MalformedBits(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector::from_bits)
    }

    /// Concatenation `self | other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bits(self.iter().chain(other.iter()))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bit_string())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(dim: usize) -> Self {
        BitMatrix { cols: dim, rows: (0..dim).map(|i| BitVector::unit(dim, i)).collect() }
    }

    /// Builds a matrix from its rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, actual: bad.len() });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = BitMatrix::zeros(nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::DimensionMismatch { expected: nrows, actual: col.len() });
            }
            for i in col.ones_iter() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit)
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(j)))
    }

    pub fn columns(&self) -> Vec<BitVector> {
        let mut cols = vec![BitVector::zeros(self.nrows()); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones_iter() {
                cols[j].set(i, true);
            }
        }
        cols
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix { cols: self.nrows(), rows: self.columns() }
    }

    /// `M x` over F2.
    pub fn matvec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, actual: x.len() });
        }
        Ok(BitVector::from_bits(self.rows.iter().map(|r| r.dot(x))))
    }

    /// `self * other` over F2.
    pub fn matmul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if other.nrows() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, actual: other.nrows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVector::zeros(other.cols);
                for k in r.ones_iter() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { cols: other.cols, rows })
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter().map(|r| r.to_bit_string())).finish()
    }
}

/// Output of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct RowReduction {
    /// Reduced row-echelon form; rows past `rank` are zero.
    pub reduced: BitMatrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivot_cols: Vec<usize>,
    /// Invertible `T` with `T * input = reduced`.
    pub transform: BitMatrix,
}

impl RowReduction {
    /// The nonzero rows of the reduced form.
    pub fn basis_rows(&self) -> &[BitVector] {
        &self.reduced.rows()[..self.rank]
    }
}

/// Gauss-Jordan elimination. Columns are scanned left to right and the
/// first remaining row with a one in the current column becomes its pivot.
pub fn row_reduce(m: &BitMatrix) -> RowReduction {
    let nrows = m.nrows();
    let mut rows = m.rows.clone();
    let mut transform = BitMatrix::identity(nrows).rows;
    let mut pivot_cols = Vec::new();
    let mut rank = 0;

    for col in 0..m.cols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        transform.swap(rank, p);
        let (pivot_row, pivot_t) = (rows[rank].clone(), transform[rank].clone());
        for i in 0..nrows {
            if i != rank && rows[i].get(col) {
                rows[i].xor_assign(&pivot_row);
                transform[i].xor_assign(&pivot_t);
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    RowReduction {
        reduced: BitMatrix { cols: m.cols, rows },
        rank,
        pivot_cols,
        transform: BitMatrix { cols: nrows, rows: transform },
    }
}

/// Basis of `{x : M x = 0}`, one vector per non-pivot column.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let red = row_reduce(m);
    let mut is_pivot = vec![false; m.cols];
    for &c in &red.pivot_cols {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVector::unit(m.cols, free);
            for (row, &pc) in red.basis_rows().iter().zip(&red.pivot_cols) {
                if row.get(free) {
                    v.set(pc, true);
                }
            }
            v
        })
        .collect()
}

/// Incrementally maintained echelon basis of a subspace of F2^dim.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    // (pivot, row) with the row having its lowest set bit at `pivot`
    rows: Vec<(usize, BitVector)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current basis; reports whether it was.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.dim);
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(pivot) => {
                // keep every stored row clear at every other pivot
                for (_, row) in self.rows.iter_mut() {
                    if row.get(pivot) {
                        row.xor_assign(&r);
                    }
                }
                self.rows.push((pivot, r));
                true
            }
        }
    }
}

/// Vectors that, together with a maximal independent subset of `s`, form a
/// basis of F2^dim. Standard unit vectors are tried in index order.
pub fn complement_basis(s: &[BitVector], dim: usize) -> Result<Vec<BitVector>> {
    let mut basis = EchelonBasis::new(dim);
    for v in s {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: v.len() });
        }
        basis.insert(v);
    }
    let mut out = Vec::new();
    for j in 0..dim {
        if basis.is_full() {
            break;
        }
        let e = BitVector::unit(dim, j);
        if basis.insert(&e) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Coefficients expressing each target as a combination of `basis`.
///
/// Returns a `targets.len() x basis.len()` matrix `C` with
/// `targets[k] = sum_i C[k][i] * basis[i]`, or `None` when some target lies
/// outside the span. `basis` must be linearly independent.
pub fn express_in_row_space(basis: &[BitVector], targets: &[BitVector]) -> Result<Option<BitMatrix>> {
    let Some(first) = basis.first() else {
        return Ok(targets.iter().all(BitVector::is_zero).then(|| BitMatrix::zeros(targets.len(), 0)));
    };
    let cols = first.len();
    let b = BitMatrix::from_rows(cols, basis.to_vec())?;
    let red = row_reduce(&b);
    if red.rank != basis.len() {
        return Err(Error::InvalidParameters("basis rows are linearly dependent".into()));
    }
    let mut out = Vec::with_capacity(targets.len());
    for t in targets {
        if t.len() != cols {
            return Err(Error::DimensionMismatch { expected: cols, actual: t.len() });
        }
        // In RREF the coefficient of reduced row i is the target's bit at pivot i.
        let mut coeffs = BitVector::zeros(basis.len());
        let mut rebuilt = BitVector::zeros(cols);
        for (i, &pc) in red.pivot_cols.iter().enumerate() {
            if t.get(pc) {
                coeffs.xor_assign(red.transform.row(i));
                rebuilt.xor_assign(red.reduced.row(i));
            }
        }
        if &rebuilt != t {
            return Ok(None);
        }
        out.push(coeffs);
    }
    Ok(Some(BitMatrix { cols: basis.len(), rows: out }))
}

pub fn weight(v: &BitVector) -> usize {
    v.weight()
}

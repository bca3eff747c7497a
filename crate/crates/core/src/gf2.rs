//! Linear algebra over the two-element field.
//!
//! Vectors and matrix rows are packed 64 coefficients to a word; addition is
//! word-wise exclusive-or. Elimination always picks the leftmost remaining
//! column and, within it, the topmost row carrying a one, so reduced forms
//! and kernel bases are reproducible.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// The unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector with ones exactly at `indices`. Repeated indices cancel.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.toggle(i);
        }
        v
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
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the nonzero coefficients, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD + w.trailing_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in and");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.and_assign(other);
        out
    }

    /// Complement within the vector's length.
    pub fn not(&self) -> BitVector {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.clear_tail();
        out
    }

    /// Inner product `Σ a_i b_i`.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.ones_iter() {
            out.set(i, true);
        }
        for i in other.ones_iter() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The coefficients in `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::Parse(format!("invalid bit string {s:?}"))),
            }
        }
        Ok(BitVector::from_bools(&bits))
    }
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from its rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones_iter() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Parses rows written as `0`/`1` strings.
    pub fn from_row_strings<S: AsRef<str>>(cols: usize, rows: &[S]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len());
        for r in rows {
            let v: BitVector = r.as_ref().parse()?;
            if v.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {:?} has length {}, expected {cols}",
                    r.as_ref(),
                    v.len()
                )));
            }
            data.push(v);
        }
        Ok(Self::from_rows(cols, data))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.data[r].set(c, bit)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones_iter() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(
            v.len(),
            self.cols,
            "dimension mismatch in matrix-vector product"
        );
        let mut out = BitVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    /// `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let acc = &mut out.data[r];
            for k in row.ones_iter() {
                acc.xor_assign(&other.data[k]);
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        BitMatrix::from_rows(self.cols, data)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.concat(b))
            .collect();
        BitMatrix::from_rows(self.cols + other.cols, data)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(true);
        (m, pivots)
    }

    /// In-place Gauss–Jordan elimination. Returns the pivot columns; the first
    /// `pivots.len()` rows hold the pivot rows afterwards.
    fn reduce_in_place(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.data[r].get(c)) else {
                continue;
            };
            self.data.swap(next, p);
            let pivot_row = std::mem::take(&mut self.data[next]);
            let start = if full { 0 } else { next + 1 };
            for r in start..self.rows {
                if r != next && self.data[r].get(c) {
                    self.data[r].xor_assign(&pivot_row);
                }
            }
            self.data[next] = pivot_row;
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate along the shorter side.
        let mut m = if self.rows > self.cols {
            self.transpose()
        } else {
            self.clone()
        };
        m.reduce_in_place(false).len()
    }

    /// A basis of `{v : self · v = 0}`, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.data[i].get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let augmented = self.hstack(&BitMatrix::from_columns(self.rows, std::slice::from_ref(b)));
        let (r, pivots) = augmented.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            if r.data[i].get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// A basis of the row space in reduced echelon form.
    pub fn row_space_basis(&self) -> Vec<BitVector> {
        let (r, pivots) = self.rref();
        r.data.into_iter().take(pivots.len()).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&str]) -> BitMatrix {
        BitMatrix::from_row_strings(cols, rows).unwrap()
    }

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(BitMatrix::zeros(0, 0).rank(), 0);
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(m(3, &["110", "011", "101"]).rank(), 2);
    }

    #[test]
    fn kernel_small_cases() {
        assert!(BitMatrix::identity(2).kernel_basis().is_empty());
        assert_eq!(BitMatrix::zeros(2, 3).kernel_basis().len(), 3);

        let row = m(3, &["111"]);
        let ker = row.kernel_basis();
        assert_eq!(ker.len(), 2);
        // Brute force: the solutions of x + y + z = 0 are exactly the span.
        let solutions: Vec<BitVector> = (0u8..8)
            .map(|b| BitVector::from_bools(&[b & 1 == 1, b & 2 == 2, b & 4 == 4]))
            .filter(|x| !row.mul_vec(x).get(0))
            .collect();
        assert_eq!(solutions.len(), 4);
        let span = [
            BitVector::zeros(3),
            ker[0].clone(),
            ker[1].clone(),
            ker[0].xor(&ker[1]),
        ];
        for s in &solutions {
            assert!(span.contains(s));
        }
    }

    #[test]
    fn solve_small_cases() {
        assert_eq!(
            BitMatrix::identity(2).solve(&v("10")).unwrap(),
            Some(v("10"))
        );
        assert_eq!(m(1, &["0"]).solve(&v("1")).unwrap(), None);
        let x = m(2, &["11"]).solve(&v("1")).unwrap().unwrap();
        assert!(x == v("10") || x == v("01"));
    }

    #[test]
    fn solve_rejects_dimension_mismatch() {
        assert!(matches!(
            BitMatrix::identity(2).solve(&v("101")),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn bitvector_helpers() {
        let a = v("1100101");
        assert_eq!(a.count_ones(), 4);
        assert_eq!(a.ones_iter().collect::<Vec<_>>(), vec![0, 1, 4, 6]);
        assert_eq!(a.not().to_string(), "0011010");
        assert_eq!(a.slice(2, 3).to_string(), "001");
        assert_eq!(v("10").concat(&v("011")).to_string(), "10011");
        assert!("10x".parse::<BitVector>().is_err());
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let cols = 130;
        let mut a = BitMatrix::zeros(3, cols);
        a.set(0, 0, true);
        a.set(0, 129, true);
        a.set(1, 64, true);
        a.set(2, 0, true);
        a.set(2, 64, true);
        a.set(2, 129, true);
        assert_eq!(a.rank(), 2);
        for k in a.kernel_basis() {
            assert!(a.mul_vec(&k).is_zero());
        }
    }
}

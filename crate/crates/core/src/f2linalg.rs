//! Dense bit-packed linear algebra over F2.
//!
//! Vectors pack 64 coefficients per machine word and addition is XOR. All
//! elimination routines pick pivots deterministically (lowest column first,
//! then lowest row), so any numbering derived from them is reproducible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{arg_err, Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over F2 of fixed length.
///
/// Bits at positions `>= len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
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

    /// The standard basis vector `e_index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones at `indices`.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.flip(i);
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
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// `self += other` over F2.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
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

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Inner product over F2.
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

    /// Changes the length, zero-filling on growth and discarding bits on shrink.
    pub fn resize(&mut self, len: usize) {
        self.words.resize(words_for(len), 0);
        self.len = len;
        let tail = len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    /// Copies `len` bits starting at `start`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVector::zeros(len);
        for i in self.iter_ones().filter(|&i| i >= start && i < start + len) {
            out.set(i - start, true);
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
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
                _ => return Err(Error::Parse(format!("bad bit character {c:?} in {s:?}"))),
            }
        }
        Ok(BitVector::from_bools(bits))
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dense matrix over F2 stored as rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: (0..rows).map(|_| BitVector::zeros(cols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return arg_err(format!("row of length {} in a matrix with {cols} columns", bad.len()));
        }
        Ok(Self { cols, rows })
    }

    /// Parses rows written as strings of `0`/`1`, e.g. `["110", "011"]`.
    pub fn from_strs(cols: usize, rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.parse()).collect::<Result<Vec<BitVector>>>()?;
        Self::from_rows(cols, rows)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// `self · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return arg_err(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            ));
        }
        Ok(BitVector::from_bools(self.rows.iter().map(|r| r.dot(x))))
    }

    /// `x · self` for a row vector `x`.
    pub fn vec_mul(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.rows.len() {
            return arg_err(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows.len()
            ));
        }
        let mut out = BitVector::zeros(self.cols);
        for i in x.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.num_rows() {
            return arg_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.num_rows(),
                self.cols,
                other.num_rows(),
                other.cols
            ));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.vec_mul(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix {
            cols: other.cols,
            rows,
        })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                out.rows[j].set(i, true);
            }
        }
        out
    }
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: BitMatrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

/// Reduced row echelon form. Pivot rows come first, in increasing pivot column.
pub fn rref(m: &BitMatrix) -> Rref {
    let mut rows = m.rows.clone();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, found);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    Rref {
        reduced: BitMatrix {
            cols: m.cols,
            rows,
        },
        rank: pivot_cols.len(),
        pivot_cols,
    }
}

/// Solves `m · x = b`, returning `None` when `b` is outside the column space.
/// Free variables are set to zero.
pub fn solve(m: &BitMatrix, b: &BitVector) -> Result<Option<BitVector>> {
    if b.len() != m.num_rows() {
        return arg_err(format!(
            "right-hand side of length {} for a matrix with {} rows",
            b.len(),
            m.num_rows()
        ));
    }
    let n = m.cols;
    let augmented_rows = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.resize(n + 1);
            a.set(n, b.get(i));
            a
        })
        .collect();
    let red = rref(&BitMatrix {
        cols: n + 1,
        rows: augmented_rows,
    });
    if red.pivot_cols.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = BitVector::zeros(n);
    for (row, &c) in red.reduced.rows.iter().zip(&red.pivot_cols) {
        if row.get(n) {
            x.set(c, true);
        }
    }
    Ok(Some(x))
}

/// A basis of `{v : m · v = 0}`, one vector per free column in increasing order.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let red = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &c in &red.pivot_cols {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVector::unit(m.cols, f);
            for (row, &p) in red.reduced.rows.iter().zip(&red.pivot_cols) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug)]
struct Pivot {
    lead: usize,
    row: BitVector,
    combo: BitVector,
}

/// Incremental row echelon form that remembers how each pivot row was built
/// from the rows pushed so far.
///
/// Rows are pushed one at a time together with a "combo" vector (normally the
/// unit vector naming the row). A row that reduces to zero yields a kernel
/// element of the row map; [`Echelon::solve`] writes a target as a
/// combination of pushed rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    combo_width: usize,
    pivots: Vec<Pivot>,
}

impl Echelon {
    pub fn new(width: usize, combo_width: usize) -> Self {
        Self {
            width,
            combo_width,
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn combo_width(&self) -> usize {
        self.combo_width
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivots; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut BitVector) {
        debug_assert_eq!(v.len(), self.width);
        for p in &self.pivots {
            if v.get(p.lead) {
                v.xor_assign(&p.row);
            }
        }
    }

    fn reduce_tracked(&self, v: &mut BitVector, combo: &mut BitVector) {
        for p in &self.pivots {
            if v.get(p.lead) {
                v.xor_assign(&p.row);
                combo.xor_assign(&p.combo);
            }
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds a row. Returns `Some(kernel_combo)` when the row was dependent.
    pub fn push(&mut self, mut row: BitVector, mut combo: BitVector) -> Option<BitVector> {
        assert_eq!(row.len(), self.width, "row width mismatch");
        assert_eq!(combo.len(), self.combo_width, "combo width mismatch");
        self.reduce_tracked(&mut row, &mut combo);
        match row.first_one() {
            Some(lead) => {
                self.pivots.push(Pivot { lead, row, combo });
                None
            }
            None => Some(combo),
        }
    }

    /// Changes the combo width of every stored pivot (zero-filling or truncating).
    pub fn set_combo_width(&mut self, combo_width: usize) {
        self.combo_width = combo_width;
        for p in &mut self.pivots {
            p.combo.resize(combo_width);
        }
    }

    /// A combination of pushed rows summing to `target`, if one exists.
    pub fn solve(&self, target: &BitVector) -> Option<BitVector> {
        assert_eq!(target.len(), self.width, "target width mismatch");
        let mut v = target.clone();
        let mut combo = BitVector::zeros(self.combo_width);
        self.reduce_tracked(&mut v, &mut combo);
        v.is_zero().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvector_basics() {
        let mut v = BitVector::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.first_one(), Some(0));
        let w = v.clone();
        v.xor_assign(&w);
        assert!(v.is_zero());
    }

    #[test]
    fn resize_clears_high_bits() {
        let mut v: BitVector = "1111".parse().unwrap();
        v.resize(2);
        v.resize(4);
        assert_eq!(v.to_string(), "1100");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("10x1".parse::<BitVector>().is_err());
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = BitMatrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivot_cols, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);

        let z = BitMatrix::zeros(2, 4);
        let r = rref(&z);
        assert_eq!(r.reduced, z);
        assert!(r.pivot_cols.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = BitMatrix::from_strs(4, &["1100", "0110", "1010"]).unwrap();
        let r = rref(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn rref_empty_matrix() {
        let m = BitMatrix::zeros(0, 0);
        assert_eq!(rref(&m).rank, 0);
    }

    #[test]
    fn solve_identity_and_zero() {
        let b: BitVector = "1011".parse().unwrap();
        assert_eq!(solve(&BitMatrix::identity(4), &b).unwrap(), Some(b.clone()));
        assert_eq!(solve(&BitMatrix::zeros(4, 4), &b).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch_is_error() {
        let b = BitVector::zeros(3);
        assert!(matches!(
            solve(&BitMatrix::identity(4), &b),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&BitMatrix::identity(5)).is_empty());
        assert_eq!(kernel_basis(&BitMatrix::zeros(1, 3)).len(), 3);
        let m = BitMatrix::from_strs(3, &["110", "011"]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k, vec!["111".parse().unwrap()]);
    }

    #[test]
    fn echelon_kernel_and_solve() {
        let rows: Vec<BitVector> = ["1100", "0110", "1010"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let mut e = Echelon::new(4, 3);
        let mut kernel = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if let Some(k) = e.push(r.clone(), BitVector::unit(3, i)) {
                kernel.push(k);
            }
        }
        assert_eq!(e.rank(), 2);
        assert_eq!(kernel, vec!["111".parse().unwrap()]);
        let target: BitVector = "1010".parse().unwrap();
        let combo = e.solve(&target).unwrap();
        let m = BitMatrix::from_rows(4, rows).unwrap();
        assert_eq!(m.vec_mul(&combo).unwrap(), target);
        assert!(e.solve(&"0001".parse().unwrap()).is_none());
    }
}

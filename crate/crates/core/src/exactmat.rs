//! Exact dense matrices over the rationals.
//!
//! Every rank, echelon form and kernel reported by the crate comes from this
//! module. Elimination is fraction-free (Bareiss) on integer rows obtained by
//! clearing denominators, so every intermediate entry is a minor of the input
//! and no fraction normalization happens inside the inner loop.
//!
//! A prime-field pass is used as a shortcut only when it proves the rank:
//! a minor that is nonzero modulo `p` is nonzero over the integers, so
//! `rank_p` is a lower bound, and it certifies the rational rank once it
//! meets a known upper bound (`min(rows, cols)` or one supplied by the
//! caller). Anything else is recomputed exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// 62-bit prime used by [`RatMatrix::rank`] for the full-rank shortcut.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;

/// A dense row-major matrix of exact rationals.
///
/// Entries are `BigRational`, which keeps every value in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from row-major data. Panics if the length is not
    /// `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        RatMatrix { rows, cols, data }
    }

    /// Builds a matrix from a list of rows of equal length. An empty list
    /// gives a `0 x cols` matrix where `cols` must be supplied.
    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        RatMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
            cols,
        )
    }

    pub fn from_int_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigRational::from_integer).collect())
                .collect(),
            cols,
        )
    }

    /// Parses a matrix from rows of `"p/q"` or `"p"` literals.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self, ParseError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != cols {
                return Err(ParseError::Ragged);
            }
            parsed.push(
                row.iter()
                    .map(|s| parse_rational(s.as_ref()))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(Self::from_rows(parsed, cols))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        RatMatrix {
            rows: self.rows,
            cols,
            data,
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        RatMatrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Rows scaled by the lcm of their denominators; the row space is
    /// unchanged.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| clear_denominators(self.row(i))).collect()
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// The result keeps the input shape; rows below the rank are zero.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.integer_rows();
        let (pivots, det) = bareiss(&mut a, self.cols, true);
        let mut out = Self::zeros(self.rows, self.cols);
        for (i, row) in a.iter().enumerate().take(pivots.len()) {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out[(i, j)] = BigRational::new(x.clone(), det.clone());
                }
            }
        }
        (out, pivots)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.rank_with_bound(self.rows.min(self.cols))
    }

    /// Rank over the rationals, given a proven upper bound.
    ///
    /// The rank modulo a prime never exceeds the rational rank, so reaching
    /// `upper` there settles the answer; otherwise exact elimination decides.
    ///
    /// # Panics
    ///
    /// If the rank exceeds `upper`.
    pub fn rank_with_bound(&self, upper: usize) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let ints = self.integer_rows();
        let rank_p = rank_mod_p_int(&ints, self.cols, DEFAULT_PRIME);
        assert!(rank_p <= upper, "rank bound {upper} violated (rank mod p is {rank_p})");
        if rank_p == upper {
            return upper;
        }
        let exact = self.rank_exact_from(ints);
        assert!(exact <= upper, "rank bound {upper} violated (rank is {exact})");
        exact
    }

    /// Rank by exact elimination only, without the prime-field shortcut.
    pub fn rank_exact(&self) -> usize {
        self.rank_exact_from(self.integer_rows())
    }

    fn rank_exact_from(&self, mut ints: Vec<Vec<BigInt>>) -> usize {
        bareiss(&mut ints, self.cols, false).0.len()
    }

    /// Rank over `Z/pZ` after clearing denominators row by row.
    ///
    /// Returns `None` when `p` divides a denominator of some entry, since the
    /// reduction is then undefined.
    pub fn rank_mod_p(&self, p: u64) -> Option<usize> {
        let pb = BigInt::from(p);
        if self
            .data
            .iter()
            .any(|x| x.denom().mod_floor(&pb).is_zero())
        {
            return None;
        }
        Some(rank_mod_p_int(&self.integer_rows(), self.cols, p))
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per row.
    ///
    /// Each basis vector is a primitive integer vector; it is the kernel
    /// vector attached to one free column of the reduced echelon form.
    pub fn nullspace(&self) -> RatMatrix {
        let mut a = self.integer_rows();
        let (pivots, det) = bareiss(&mut a, self.cols, true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigInt::zero(); self.cols];
            v[f] = det.clone();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            make_primitive(&mut v);
            basis.push(v);
        }
        Self::from_int_rows(basis, self.cols)
    }

    /// Rows of `self` form a basis of the row space (echelon rows, primitive).
    pub fn row_space_basis(&self) -> RatMatrix {
        let mut a = self.integer_rows();
        let (pivots, _) = bareiss(&mut a, self.cols, false);
        a.truncate(pivots.len());
        for row in &mut a {
            make_primitive(row);
        }
        Self::from_int_rows(a, self.cols)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        RatMatrix::parse_rows(&rows).map_err(D::Error::custom)
    }
}

/// Parses `"p/q"` or `"p"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(ParseError::ZeroDenominator(s.to_string()));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Divides an integer vector by the gcd of its entries and makes the first
/// nonzero entry positive.
pub fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x /= &g;
        if neg {
            *x = -&*x;
        }
    }
}

/// Fraction-free elimination in place. Returns the pivot columns and the last
/// pivot value (the determinant of the pivot block, up to sign).
///
/// With `jordan` the rows above each pivot are cleared too; afterwards every
/// pivot entry equals the returned value, so dividing the leading rows by it
/// gives the reduced echelon form. Pivots are chosen with the smallest bit
/// size in their column.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize, jordan: bool) -> (Vec<usize>, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("row r exists");
        let pv = pivot_row[c].clone();
        // Entries of the pivot row left of c are zero, so for rows above the
        // same formula applies to every column.
        let update = |row: &mut Vec<BigInt>, from: usize| {
            let factor = std::mem::take(&mut row[c]);
            for j in (from..cols).filter(|&j| j != c) {
                if row[j].is_zero() && (factor.is_zero() || pivot_row[j].is_zero()) {
                    continue;
                }
                let mut x = &pv * &row[j];
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    x -= &factor * &pivot_row[j];
                }
                row[j] = if prev.is_one() { x } else { x / &prev };
            }
        };
        for row in below.iter_mut() {
            update(row, c + 1);
        }
        if jordan {
            for row in head.iter_mut() {
                update(row, 0);
            }
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    (pivots, prev)
}

fn rank_mod_p_int(rows: &[Vec<BigInt>], cols: usize, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.mod_floor(&pb).to_u64().expect("reduced below p"))
                .collect()
        })
        .collect();
    rank_mod_p_u64(&mut a, cols, p)
}

/// Incremental row echelon form over `Z/pZ`, used to pick candidate
/// independent rows cheaply. Independence found here holds over the
/// rationals as well; dependence does not transfer.
#[derive(Debug, Clone)]
pub struct PrimeEchelon {
    p: u64,
    cols: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl PrimeEchelon {
    pub fn new(cols: usize, p: u64) -> Self {
        PrimeEchelon { p, cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds an integer row; returns whether it raised the rank.
    pub fn insert(&mut self, row: &[BigInt]) -> bool {
        assert_eq!(row.len(), self.cols, "row length");
        let (p, pb) = (self.p, BigInt::from(self.p));
        let mut v: Vec<u64> = row
            .iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("reduced below p"))
            .collect();
        for (c, r) in &self.rows {
            let f = v[*c];
            if f == 0 {
                continue;
            }
            for j in 0..self.cols {
                let sub = mul_mod(f, r[j], p);
                v[j] = if v[j] >= sub { v[j] - sub } else { v[j] + p - sub };
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[c], p);
        for x in v.iter_mut().skip(c) {
            *x = mul_mod(*x, inv, p);
        }
        // keep every stored row zero at every other pivot
        for (_, r) in self.rows.iter_mut() {
            let f = r[c];
            if f == 0 {
                continue;
            }
            for j in c..self.cols {
                let sub = mul_mod(f, v[j], p);
                r[j] = if r[j] >= sub { r[j] - sub } else { r[j] + p - sub };
            }
        }
        self.rows.push((c, v));
        true
    }
}

/// Gaussian elimination over `Z/pZ` for `p < 2^63`.
pub fn rank_mod_p_u64(a: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let rows = a.len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for j in c..cols {
            a[r][j] = mul_mod(a[r][j], inv, p);
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, pivot_row[j], p);
                row[j] = if row[j] >= sub { row[j] - sub } else { row[j] + p - sub };
            }
        }
        r += 1;
    }
    r
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime in `[2^61, 2^62)` drawn from `rng`.
pub fn random_prime_62<R: rand::Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |v| {
                RatMatrix::from_vec(
                    r,
                    c,
                    v.into_iter()
                        .map(|(n, d)| BigRational::new(n.into(), d.into()))
                        .collect(),
                )
            })
        })
    }

    /// Low-rank matrices are the interesting case for rank and kernels.
    fn low_rank_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..7, 1usize..7, 0usize..4).prop_flat_map(|(r, c, k)| {
            (
                proptest::collection::vec(-3i64..4, r * k),
                proptest::collection::vec(-3i64..4, k * c),
            )
                .prop_map(move |(left, right)| {
                    let l = RatMatrix::from_vec(r, k, left.into_iter().map(q).collect());
                    let rt = RatMatrix::from_vec(k, c, right.into_iter().map(q).collect());
                    l.mul(&rt)
                })
        })
    }

    #[test]
    fn rref_identity() {
        let id = RatMatrix::identity(3);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn rref_proportional_rows() {
        let m = RatMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        let (r, piv) = m.rref();
        assert_eq!(r, RatMatrix::from_i64_rows(&[vec![1, 2], vec![0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn rref_of_empty_matrix() {
        let m = RatMatrix::zeros(0, 3);
        let (r, piv) = m.rref();
        assert_eq!(r, m);
        assert!(piv.is_empty());
        assert_eq!(RatMatrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn rref_with_fractions() {
        let m = RatMatrix::parse_rows(&[vec!["1/2", "1"], vec!["1/3", "2/3"], vec!["0", "1"]]).unwrap();
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(
            r,
            RatMatrix::from_i64_rows(&[vec![1, 0], vec![0, 1], vec![0, 0]])
        );
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(RatMatrix::zeros(4, 7).rank(), 0);
    }

    #[test]
    fn nullspace_identity_is_empty() {
        let k = RatMatrix::identity(4).nullspace();
        assert_eq!(k.nrows(), 0);
        assert_eq!(k.ncols(), 4);
    }

    #[test]
    fn nullspace_single_row() {
        let m = RatMatrix::from_i64_rows(&[vec![1, 1, 1]]);
        let k = m.nullspace();
        assert_eq!(k.nrows(), 2);
        assert!(m.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn nullspace_of_identity_block_matrix() {
        // P = (I | A); the kernel must have the row space of (-A^t | I).
        let a = [[2i64, -1, 3], [0, 5, 1]];
        let p = RatMatrix::from_i64_rows(&[
            vec![1, 0, a[0][0], a[0][1], a[0][2]],
            vec![0, 1, a[1][0], a[1][1], a[1][2]],
        ]);
        let expected = RatMatrix::from_i64_rows(&[
            vec![-a[0][0], -a[1][0], 1, 0, 0],
            vec![-a[0][1], -a[1][1], 0, 1, 0],
            vec![-a[0][2], -a[1][2], 0, 0, 1],
        ]);
        let k = p.nullspace();
        assert_eq!(k.nrows(), 3);
        assert_eq!(k.vstack(&expected).rank(), 3);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational(" -6/4 ").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert!(matches!(parse_rational("1/0"), Err(ParseError::ZeroDenominator(_))));
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&BigRational::new(4.into(), (-6).into())), "-2/3");
        let m = RatMatrix::parse_rows(&[vec!["1/2", "3"]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/2","3"]]"#);
        let back: RatMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(DEFAULT_PRIME >> 61 == 1);
        assert!(!is_prime_u64(DEFAULT_PRIME + 2 * 3));
    }

    #[test]
    fn rank_mod_p_rejects_denominator_multiple() {
        let m = RatMatrix::parse_rows(&[vec!["1/5"]]).unwrap();
        assert_eq!(m.rank_mod_p(5), None);
        assert_eq!(m.rank_mod_p(7), Some(1));
    }

    /// Textbook Gauss-Jordan over the rationals, pivoting on the first
    /// nonzero entry.
    fn naive_rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
        let mut a = m.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.ncols() {
            let Some(p) = (r..a.nrows()).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..a.ncols() {
                let t = a[(r, j)].clone();
                a[(r, j)] = a[(p, j)].clone();
                a[(p, j)] = t;
            }
            let inv = a[(r, c)].recip();
            for j in 0..a.ncols() {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
            for i in (0..a.nrows()).filter(|&i| i != r) {
                let f = a[(i, c)].clone();
                for j in 0..a.ncols() {
                    let d = &f * &a[(r, j)];
                    a[(i, j)] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    #[test]
    fn prime_echelon_tracks_rank() {
        let rows = [vec![1i64, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4], vec![0, 0, 5]];
        let mut e = PrimeEchelon::new(3, DEFAULT_PRIME);
        let raised: Vec<bool> = rows
            .iter()
            .map(|r| e.insert(&r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
            .collect();
        assert_eq!(raised, [true, false, true, false, true]);
        assert_eq!(e.rank(), 3);
    }

    #[test]
    #[should_panic(expected = "rank bound")]
    fn rank_bound_violation_panics() {
        RatMatrix::identity(3).rank_with_bound(2);
    }

    proptest! {
        #[test]
        fn rref_matches_naive_elimination(m in small_matrix()) {
            prop_assert_eq!(m.rref(), naive_rref(&m));
        }

        #[test]
        fn prime_echelon_matches_rank(m in low_rank_matrix()) {
            let mut e = PrimeEchelon::new(m.ncols(), DEFAULT_PRIME);
            for row in m.integer_rows() {
                e.insert(&row);
            }
            prop_assert_eq!(e.rank(), m.rank_exact());
        }

        #[test]
        fn rank_is_transpose_invariant(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_is_annihilated(m in low_rank_matrix()) {
            let k = m.nullspace();
            prop_assert_eq!(k.nrows(), m.ncols() - m.rank());
            if k.nrows() > 0 {
                prop_assert!(m.mul(&k.transpose()).is_zero());
            }
        }

        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let (r, piv) = m.rref();
            let (rr, piv2) = r.rref();
            prop_assert_eq!(&r, &rr);
            prop_assert_eq!(piv, piv2);
        }

        #[test]
        fn rref_pivots_count_rank(m in low_rank_matrix()) {
            let (r, piv) = m.rref();
            prop_assert_eq!(piv.len(), m.rank_exact());
            for (row, &c) in piv.iter().enumerate() {
                prop_assert!(r[(row, c)].is_one());
            }
        }

        #[test]
        fn rank_matches_random_prime_field(m in low_rank_matrix(), seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = random_prime_62(&mut rng);
            prop_assert_eq!(m.rank_mod_p(p), Some(m.rank_exact()));
        }
    }
}

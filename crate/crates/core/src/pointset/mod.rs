//! Finite point configurations in projective space, their Hilbert functions
//! and the invariants of the cone over them.

mod classify;
mod gale;
mod io;

pub use classify::{
    classify_generic, deformation_target, equisingular_verdict, m_bound, s_curve_invariants,
    t1_lower_bounds, DeformationTarget, LowerBound, SCurveInvariants, PUBLISHED_COMPUTATION,
};
pub use gale::{
    cone_quadric_test, gale_transform, is_self_associated, nowhere_zero_vector, projectively_equivalent,
    quadric_deficiency, random_self_associated, self_association_witness,
};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PointSetError;
use crate::exactmat::RatMatrix;

/// Attempts made by the seeded random builders before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

/// `r` distinct points of projective `(n−1)`-space, stored as the columns
/// of an `n × r` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    coords: RatMatrix,
    label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniformMode {
    Exhaustive,
    Sampled { seed: u64, trials: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericInvariants {
    pub d: u32,
    pub delta: i64,
    pub s: i64,
    #[serde(rename = "type")]
    pub type_t: i64,
    pub deligne_e: i64,
    pub moduli: i64,
}

impl PointConfiguration {
    pub fn new(coords: RatMatrix) -> Result<Self, PointSetError> {
        if coords.nrows() < 2 || coords.ncols() < 1 {
            return Err(PointSetError::TooSmall);
        }
        let mut seen: Vec<(Vec<BigRational>, usize)> = Vec::new();
        let mut keys = HashSet::new();
        for j in 0..coords.ncols() {
            let col = coords.col(j);
            let Some(lead) = col.iter().find(|x| !x.is_zero()).cloned() else {
                return Err(PointSetError::ZeroPoint(j));
            };
            let normalized: Vec<BigRational> = col.iter().map(|x| x / &lead).collect();
            if !keys.insert(normalized.clone()) {
                let (_, i) = seen.iter().find(|(v, _)| *v == normalized).expect("key was seen");
                return Err(PointSetError::DuplicatePoint(*i, j));
            }
            seen.push((normalized, j));
        }
        Ok(PointConfiguration { coords, label: None })
    }

    pub fn from_i64_columns(points: &[Vec<i64>]) -> Result<Self, PointSetError> {
        let rows = RatMatrix::from_i64_rows(points);
        Self::new(rows.transpose())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of homogeneous coordinates.
    pub fn n(&self) -> usize {
        self.coords.nrows()
    }

    /// Number of points.
    pub fn r(&self) -> usize {
        self.coords.ncols()
    }

    pub fn coords(&self) -> &RatMatrix {
        &self.coords
    }

    pub fn point(&self, j: usize) -> Vec<BigRational> {
        self.coords.col(j)
    }

    pub fn rank(&self) -> usize {
        self.coords.rank()
    }

    /// Configuration consisting of the points with the given indices.
    pub fn subset(&self, idx: &[usize]) -> Self {
        PointConfiguration {
            coords: self.coords.select_cols(idx),
            label: None,
        }
    }

    /// Rows are the degree-`deg` monomials in graded-lex order, columns the
    /// points.
    pub fn veronese_matrix(&self, deg: u32) -> RatMatrix {
        let mons = monomials(self.n(), deg);
        let r = self.r();
        let mut m = RatMatrix::zeros(mons.len(), r);
        for j in 0..r {
            let p = self.point(j);
            let powers: Vec<Vec<BigRational>> = p
                .iter()
                .map(|x| {
                    let mut v = vec![BigRational::one()];
                    for k in 0..deg as usize {
                        let next = &v[k] * x;
                        v.push(next);
                    }
                    v
                })
                .collect();
            for (i, e) in mons.iter().enumerate() {
                let mut val = BigRational::one();
                for (c, &k) in e.iter().enumerate() {
                    if k > 0 {
                        val *= &powers[c][k as usize];
                    }
                }
                m[(i, j)] = val;
            }
        }
        m
    }

    pub fn hilbert_function(&self, l: u32) -> usize {
        self.veronese_matrix(l).rank()
    }

    /// `H(0), H(1), …` up to and including the first degree with `H = r`.
    pub fn hilbert_sequence(&self) -> Vec<usize> {
        let r = self.r();
        let mut out = Vec::new();
        for l in 0.. {
            let h = self.hilbert_function(l);
            out.push(h);
            if h == r {
                break;
            }
        }
        out
    }

    /// Least degree `σ` with `H(σ) = r`.
    pub fn regularity_index(&self) -> u32 {
        self.hilbert_sequence().len() as u32 - 1
    }

    pub fn is_general_position(&self) -> bool {
        let n = self.n() as i64;
        let r = self.r() as i64;
        self.hilbert_sequence()
            .iter()
            .enumerate()
            .all(|(l, &h)| h as i64 == r.min(binom_i64(n + l as i64 - 1, n - 1)))
    }

    /// Every subset in general position. Sampled mode only ever refutes.
    pub fn is_uniform_position(&self, mode: UniformMode) -> Result<bool, PointSetError> {
        let r = self.r();
        match mode {
            UniformMode::Exhaustive => {
                if r > 12 {
                    return Err(PointSetError::TooLargeForExhaustive(r));
                }
                for mask in 1u32..(1 << r) {
                    let idx: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).collect();
                    if !self.subset(&idx).is_general_position() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            UniformMode::Sampled { seed, trials } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..trials {
                    let idx: Vec<usize> = (0..r).filter(|_| rng.gen_bool(0.5)).collect();
                    if !idx.is_empty() && !self.subset(&idx).is_general_position() {
                        return Ok(false);
                    }
                }
                Ok(self.is_general_position())
            }
        }
    }

    /// `δ` of the cone: `Σ_ℓ (r − H(ℓ))`.
    pub fn delta_cone(&self) -> u64 {
        let r = self.r();
        self.hilbert_sequence().iter().map(|&h| (r - h) as u64).sum()
    }

    /// Change of `δ` when adding the point `p`.
    pub fn intersection_multiplicity(&self, p: &[BigRational]) -> Result<u64, PointSetError> {
        let bigger = self.with_point(p)?;
        Ok(bigger.delta_cone() - self.delta_cone())
    }

    pub fn with_point(&self, p: &[BigRational]) -> Result<Self, PointSetError> {
        assert_eq!(p.len(), self.n(), "point has the wrong number of coordinates");
        let col = RatMatrix::from_rows(p.iter().map(|x| vec![x.clone()]).collect(), 1);
        Self::new(self.coords.hstack(&col))
    }

    pub fn tetrahedron_midpoints() -> Self {
        let mut pts: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|k| i64::from(k == i)).collect())
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                pts.push((0..4).map(|k| i64::from(k == i || k == j)).collect());
            }
        }
        Self::from_i64_columns(&pts)
            .expect("ten distinct points")
            .with_label("tetrahedron-midpoints")
    }

    /// The tetrahedron configuration with the midpoints of the opposite edges
    /// `e_1e_2` and `e_3e_4` replaced by the center `(1:1:1:1)` and by a
    /// further point on the quadric through the center and the other eight
    /// points. That point is where the line from `e_1` in direction
    /// `(1, 2, 3, 5)` meets the quadric again.
    pub fn modified_tetrahedron_midpoints() -> Self {
        let base = Self::tetrahedron_midpoints();
        let mut pts: Vec<Vec<BigRational>> = [0, 1, 2, 3, 5, 6, 7, 8].iter().map(|&j| base.point(j)).collect();
        pts.push(vec![int(1); 4]);
        let nine = Self::new(RatMatrix::from_rows(pts.clone(), 4).transpose()).expect("nine distinct points");
        let quadrics = nine.veronese_matrix(2).transpose().nullspace();
        assert_eq!(quadrics.nrows(), 1, "nine points impose independent conditions on quadrics");
        let coeffs = quadrics.row(0).to_vec();
        let mons = monomials(4, 2);
        let eval = |p: &[BigRational]| -> BigRational {
            mons.iter()
                .zip(&coeffs)
                .map(|(m, c)| {
                    let mut t = c.clone();
                    for (x, &e) in p.iter().zip(m) {
                        for _ in 0..e {
                            t *= x;
                        }
                    }
                    t
                })
                .sum()
        };
        // Q(p + tv) = t·(Q(p+v) − Q(p) − Q(v)) + t²·Q(v) when Q(p) = 0
        let p = pts[0].clone();
        let v: Vec<BigRational> = [1, 2, 3, 5].into_iter().map(int).collect();
        let qv = eval(&v);
        let sum: Vec<BigRational> = p.iter().zip(&v).map(|(a, b)| a + b).collect();
        let t = -(eval(&sum) - &qv) / qv;
        let extra: Vec<BigRational> = p.iter().zip(&v).map(|(a, b)| a + &t * b).collect();
        pts.push(extra);
        Self::new(RatMatrix::from_rows(pts, 4).transpose())
            .expect("ten distinct points")
            .with_label("modified-tetrahedron-midpoints")
    }

    /// Seeded integer points with coordinates in `[−box, box]`, redrawn until
    /// distinct and of rank `min(n, r)`.
    pub fn random_config(n: usize, r: usize, seed: u64, coord_box: i64) -> Result<Self, PointSetError> {
        if coord_box < 1 {
            return Err(PointSetError::BadParameters(format!("box must be at least 1, got {coord_box}")));
        }
        if n < 2 || r < 1 {
            return Err(PointSetError::TooSmall);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_ATTEMPTS {
            let pts: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..n).map(|_| rng.gen_range(-coord_box..=coord_box)).collect())
                .collect();
            let Ok(g) = Self::from_i64_columns(&pts) else {
                continue;
            };
            if g.rank() == n.min(r) {
                return Ok(g.with_label(format!("random n={n} r={r} seed={seed}")));
            }
        }
        Err(PointSetError::RetryExhausted(MAX_ATTEMPTS))
    }

    /// Like [`Self::random_config`] but also requires general position.
    pub fn random_general_config(n: usize, r: usize, seed: u64, coord_box: i64) -> Result<Self, PointSetError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_ATTEMPTS {
            let g = Self::random_config(n, r, rng.gen(), coord_box)?;
            if g.is_general_position() {
                return Ok(g.with_label(format!("random n={n} r={r} seed={seed}")));
            }
        }
        Err(PointSetError::RetryExhausted(MAX_ATTEMPTS))
    }
}

/// Invariants of the cone over `r` general points in `P^{n−1}`.
pub fn generic_invariants(n: i64, r: i64) -> Result<GenericInvariants, PointSetError> {
    if n < 2 || r <= n {
        return Err(PointSetError::BadRange(format!("need r > n >= 2, got n={n}, r={r}")));
    }
    let d = degree_threshold(n, r);
    let di = d as i64;
    let delta = di * r - binom_i64(n + di - 1, di - 1);
    let s = r - binom_i64(n + di - 2, di - 1);
    let type_t = s.max(binom_i64(n + di - 3, di - 1) - (n - 2) * s);
    Ok(GenericInvariants {
        d,
        delta,
        s,
        type_t,
        deligne_e: 2 * delta - r + type_t,
        moduli: (r - n - 1) * (n - 1),
    })
}

/// The `d` with `C(n+d−2, d−1) < r ≤ C(n+d−1, d)`.
pub fn degree_threshold(n: i64, r: i64) -> u32 {
    let mut d = 1;
    while binom_i64(n + d - 1, d) < r {
        d += 1;
    }
    d as u32
}

/// Exponent vectors of the degree-`deg` monomials in `n` variables, in
/// graded-lex order (`x1^deg` first).
pub fn monomials(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=deg).rev() {
            prefix.push(k);
            rec(n, deg - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, deg, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Binomial coefficient, zero outside `0 ≤ k ≤ n`.
pub fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

pub fn binom_i64(n: i64, k: i64) -> i64 {
    i64::try_from(binom(n, k)).expect("binomial fits in i64")
}

pub(crate) fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

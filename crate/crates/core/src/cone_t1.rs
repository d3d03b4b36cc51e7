//! Graded `T¹` of the cone over a point configuration, from the exact
//! sequence
//!
//! ```text
//! 0 → Hom(m, O)_ℓ → K_ℓ → ker(∂f: (K/O)ⁿ → (K/O)ᵏ)_ℓ → T¹_ℓ → 0
//! ```
//!
//! Every graded piece `K_ℓ` of the normalization is identified with `k^r`
//! (one coordinate per line through the origin); a form of degree `ℓ` sits
//! in it as its vector of values at the stored point coordinates, and the
//! ring structure is componentwise. `O_ℓ` is the row space of the Veronese
//! matrix `A_ℓ` (zero for `ℓ < 0`, everything from the regularity index on).
//! Quotients `K_m/O_m` are realized by a matrix `W_m` whose kernel is `O_m`,
//! and bases of the domain quotients by unit vectors at the non-pivot
//! columns of `rref(A_m)`.

use std::borrow::Cow;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::PointSetError;
use crate::exactmat::{PrimeEchelon, RatMatrix, DEFAULT_PRIME};
use crate::pointset::{is_self_associated, monomials, PointConfiguration};

/// A homogeneous generator of the ideal of the points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub degree: u32,
    /// Primitive integer coefficients over the degree-`degree` monomials in
    /// graded-lex order.
    pub coefficients: Vec<BigInt>,
    /// `jacobian[i][c]` is `∂f/∂x_i` evaluated at point `c`.
    pub jacobian: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone)]
pub struct GradedConeModel {
    config: PointConfiguration,
    /// `H(0), …, H(σ)` with `H(σ) = r`.
    hilbert: Vec<usize>,
    /// `W_m` for `0 ≤ m < σ`.
    quotient: Vec<RatMatrix>,
    /// Non-pivot columns of `rref(A_m)` for `0 ≤ m < σ`.
    complement: Vec<Vec<usize>>,
    generators: Vec<Generator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeChecks {
    /// `T¹_ℓ = 0` wherever `O_{ℓ+1} = K_{ℓ+1}` inside the window.
    pub tplusnul: bool,
    /// `T¹_ℓ = 0` for all `ℓ ≥ 1` in the window; `None` unless the
    /// configuration is a self-associated set of `2n` points.
    pub negatively_graded: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeT1Report {
    pub n: usize,
    pub r: usize,
    pub delta: u64,
    #[serde(rename = "type")]
    pub type_t: u64,
    pub e: i64,
    pub moduli: i64,
    pub window: (i64, i64),
    /// Every degree of the window, zeros included.
    pub t1: BTreeMap<i64, u64>,
    pub total: u64,
    pub checks: ConeChecks,
}

impl ConeT1Report {
    pub fn get(&self, l: i64) -> u64 {
        self.t1.get(&l).copied().unwrap_or(0)
    }
}

impl GradedConeModel {
    pub fn build(config: &PointConfiguration) -> Result<Self, PointSetError> {
        let (n, r) = (config.n(), config.r());
        let rank = config.rank();
        if rank < n {
            return Err(PointSetError::DegenerateConfig(format!("points span rank {rank} < {n}")));
        }
        let hilbert = config.hilbert_sequence();
        let sigma = hilbert.len() - 1;
        let mut quotient = Vec::with_capacity(sigma);
        let mut complement = Vec::with_capacity(sigma);
        for m in 0..sigma {
            let a = config.veronese_matrix(m as u32);
            let (_, pivots) = a.rref();
            let mut is_pivot = vec![false; r];
            for &p in &pivots {
                is_pivot[p] = true;
            }
            complement.push((0..r).filter(|&c| !is_pivot[c]).collect());
            quotient.push(a.nullspace());
        }
        let generators = ideal_generators(config, sigma as u32 + 1);
        Ok(GradedConeModel {
            config: config.clone(),
            hilbert,
            quotient,
            complement,
            generators,
        })
    }

    pub fn config(&self) -> &PointConfiguration {
        &self.config
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generator counts by degree.
    pub fn generator_degrees(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            *out.entry(g.degree).or_insert(0) += 1;
        }
        out
    }

    /// Least degree with `O_σ = K_σ`.
    pub fn sigma(&self) -> i64 {
        self.hilbert.len() as i64 - 1
    }

    pub fn hilbert(&self, l: i64) -> usize {
        if l < 0 {
            0
        } else {
            self.hilbert[(l as usize).min(self.hilbert.len() - 1)]
        }
    }

    fn r(&self) -> usize {
        self.config.r()
    }

    fn quotient_map(&self, m: i64) -> Cow<'_, RatMatrix> {
        if m < 0 {
            Cow::Owned(RatMatrix::identity(self.r()))
        } else if m >= self.sigma() {
            Cow::Owned(RatMatrix::zeros(0, self.r()))
        } else {
            Cow::Borrowed(&self.quotient[m as usize])
        }
    }

    fn complement_cols(&self, m: i64) -> Cow<'_, [usize]> {
        if m < 0 {
            Cow::Owned((0..self.r()).collect())
        } else if m >= self.sigma() {
            Cow::Owned(Vec::new())
        } else {
            Cow::Borrowed(&self.complement[m as usize])
        }
    }

    /// `dim {a ∈ K_ℓ : a·x_i ∈ O_{ℓ+1} for all i}`.
    pub fn hom_m_o_dim(&self, l: i64) -> usize {
        let r = self.r();
        let w = self.quotient_map(l + 1);
        if w.nrows() == 0 {
            return r;
        }
        let coords = self.config.coords();
        let n = self.config.n();
        let mut m = RatMatrix::zeros(n * w.nrows(), r);
        for i in 0..n {
            for row in 0..w.nrows() {
                for c in 0..r {
                    let x = &coords[(i, c)];
                    if !x.is_zero() && !w[(row, c)].is_zero() {
                        m[(i * w.nrows() + row, c)] = &w[(row, c)] * x;
                    }
                }
            }
        }
        // O_ℓ·x_i ⊆ O_{ℓ+1}, so hom ≥ H(ℓ)
        r - m.rank_with_bound(r - self.hilbert(l))
    }

    /// The matrix of `∂f` in degree `ℓ`: columns are `(i, c)` for each
    /// coordinate `i` and each basis vector `e_c` of `K_{ℓ+1}/O_{ℓ+1}`; row
    /// blocks are the quotients `K_{ℓ+q_j}/O_{ℓ+q_j}`.
    pub fn jacobian_matrix(&self, l: i64) -> RatMatrix {
        let n = self.config.n();
        let cols = self.complement_cols(l + 1);
        let ncols = n * cols.len();
        let blocks: Vec<(Cow<'_, RatMatrix>, &Generator)> = self
            .generators
            .iter()
            .map(|g| (self.quotient_map(l + g.degree as i64), g))
            .filter(|(w, _)| w.nrows() > 0)
            .collect();
        let nrows: usize = blocks.iter().map(|(w, _)| w.nrows()).sum();
        let mut m = RatMatrix::zeros(nrows, ncols);
        let mut offset = 0;
        for (w, g) in &blocks {
            for i in 0..n {
                for (k, &c) in cols.iter().enumerate() {
                    let d = &g.jacobian[i][c];
                    if d.is_zero() {
                        continue;
                    }
                    for row in 0..w.nrows() {
                        if !w[(row, c)].is_zero() {
                            m[(offset + row, i * cols.len() + k)] = &w[(row, c)] * d;
                        }
                    }
                }
            }
            offset += w.nrows();
        }
        m
    }

    pub fn t1_dim(&self, l: i64) -> u64 {
        let jm = self.jacobian_matrix(l);
        let image_of_k = self.r() - self.hom_m_o_dim(l);
        // the image of K_ℓ lies in the kernel
        let bound = jm.ncols().saturating_sub(image_of_k).min(jm.nrows());
        let kernel = jm.ncols() - jm.rank_with_bound(bound);
        assert!(
            kernel >= image_of_k,
            "exact sequence violated in degree {l}: kernel {kernel} < image {image_of_k}"
        );
        (kernel - image_of_k) as u64
    }

    pub fn delta(&self) -> u64 {
        let r = self.r();
        self.hilbert.iter().map(|&h| (r - h) as u64).sum()
    }

    /// Minimal number of generators of the dualizing module.
    ///
    /// In degree `−ℓ` it is `ω_(ℓ) = {w : w ⊥ O_{ℓ−1}}` (all of `k^r` for
    /// `ℓ ≤ 0`), and multiplication by `x_i` maps `ω_(ℓ+1)` into `ω_(ℓ)`.
    pub fn cm_type(&self) -> u64 {
        let r = self.r();
        let omega = |l: i64| -> RatMatrix {
            if l <= 0 {
                RatMatrix::identity(r)
            } else {
                self.config.veronese_matrix(l as u32 - 1).nullspace()
            }
        };
        let coords = self.config.coords();
        let mut t = 0;
        for l in 0..=self.sigma() + 1 {
            let here = omega(l).nrows();
            if here == 0 {
                continue;
            }
            let above = omega(l + 1);
            let mut rows = Vec::new();
            for i in 0..self.config.n() {
                for k in 0..above.nrows() {
                    rows.push((0..r).map(|c| &above[(k, c)] * &coords[(i, c)]).collect());
                }
            }
            let span = RatMatrix::from_rows(rows, r).rank();
            t += (here - span) as u64;
        }
        t
    }

    pub fn deligne_e(&self) -> i64 {
        2 * self.delta() as i64 - self.r() as i64 + self.cm_type() as i64
    }

    pub fn moduli(&self) -> i64 {
        let (n, r) = (self.config.n() as i64, self.r() as i64);
        (r - n - 1) * (n - 1)
    }

    /// `T¹_ℓ` for `ℓ ∈ [lmin, lmax]` with the invariant block and vanishing
    /// checks.
    pub fn t1_report(&self, lmin: i64, lmax: i64) -> ConeT1Report {
        assert!(lmin <= lmax, "empty degree window");
        let dims: BTreeMap<i64, u64> = (lmin..=lmax)
            .into_par_iter()
            .map(|l| (l, self.t1_dim(l)))
            .collect();
        self.assemble(lmin, lmax, dims)
    }

    /// Report over `[−σ−2, σ+1]`, widened until both boundary degrees vanish.
    pub fn t1_report_auto(&self) -> ConeT1Report {
        let d = self.sigma();
        let (mut lo, mut hi) = (-d - 2, d + 1);
        let mut dims: BTreeMap<i64, u64> = (lo..=hi)
            .into_par_iter()
            .map(|l| (l, self.t1_dim(l)))
            .collect();
        while dims[&lo] != 0 {
            lo -= 1;
            dims.insert(lo, self.t1_dim(lo));
        }
        while dims[&hi] != 0 {
            hi += 1;
            dims.insert(hi, self.t1_dim(hi));
        }
        self.assemble(lo, hi, dims)
    }

    fn assemble(&self, lo: i64, hi: i64, dims: BTreeMap<i64, u64>) -> ConeT1Report {
        let r = self.r();
        let n = self.config.n();
        let tplusnul = dims
            .iter()
            .filter(|&(&l, _)| self.hilbert(l + 1) == r)
            .all(|(_, &d)| d == 0);
        let gorenstein = r == 2 * n && is_self_associated(&self.config).unwrap_or(false);
        let negatively_graded = gorenstein.then(|| dims.iter().filter(|&(&l, _)| l >= 1).all(|(_, &d)| d == 0));
        ConeT1Report {
            n,
            r,
            delta: self.delta(),
            type_t: self.cm_type(),
            e: self.deligne_e(),
            moduli: self.moduli(),
            window: (lo, hi),
            total: dims.values().sum(),
            t1: dims,
            checks: ConeChecks {
                tplusnul,
                negatively_graded,
            },
        }
    }

    #[cfg(test)]
    fn with_extra_generator(mut self, g: Generator) -> Self {
        self.generators.push(g);
        self
    }
}

/// Homogeneous generators of the ideal of the points in degrees up to
/// `max_degree`: in each degree, a complement of `x_1 I_{q−1} + … + x_n I_{q−1}`
/// inside `I_q`.
fn ideal_generators(config: &PointConfiguration, max_degree: u32) -> Vec<Generator> {
    let n = config.n();
    let mut out = Vec::new();
    let mut prev_basis: Vec<Vec<BigInt>> = Vec::new();
    let mut prev_mons: Vec<Vec<u32>> = Vec::new();
    for q in 1..=max_degree {
        let mons = monomials(n, q);
        let index: BTreeMap<&[u32], usize> = mons.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let ideal = config.veronese_matrix(q).transpose().nullspace();
        let mut span_rows: Vec<Vec<BigInt>> = Vec::new();
        for f in &prev_basis {
            for i in 0..n {
                let mut row = vec![BigInt::zero(); mons.len()];
                for (c, m) in f.iter().zip(&prev_mons) {
                    if c.is_zero() {
                        continue;
                    }
                    let mut e = m.clone();
                    e[i] += 1;
                    row[index[e.as_slice()]] = c.clone();
                }
                span_rows.push(row);
            }
        }
        let basis: Vec<Vec<BigInt>> = ideal.integer_rows();
        let dim = basis.len();
        let mut echelon = PrimeEchelon::new(mons.len(), DEFAULT_PRIME);
        for row in &span_rows {
            echelon.insert(row);
        }
        let span = RatMatrix::from_int_rows(span_rows, mons.len());
        let span_rank = span.rank_with_bound(dim.min(span.nrows()));
        let chosen: Vec<&Vec<BigInt>> = if echelon.rank() == span_rank {
            // rows raising the rank mod p raise it over Q; once the prime
            // rank reaches dim I_q the choice is certified and minimal
            let picked: Vec<_> = basis.iter().filter(|f| echelon.rank() < dim && echelon.insert(f)).collect();
            assert_eq!(echelon.rank(), dim, "ideal basis spans I_q");
            picked
        } else {
            exact_complement(span, span_rank, &basis)
        };
        out.extend(chosen.into_iter().map(|f| Generator {
            degree: q,
            coefficients: f.clone(),
            jacobian: jacobian_values(config, &mons, f),
        }));
        prev_basis = basis;
        prev_mons = mons;
    }
    out
}

/// Complement of the row space of `span` inside the span of `basis`, chosen
/// greedily with exact ranks.
fn exact_complement<'a>(mut span: RatMatrix, mut rank: usize, basis: &'a [Vec<BigInt>]) -> Vec<&'a Vec<BigInt>> {
    let mut out = Vec::new();
    for f in basis {
        if rank == basis.len() {
            break;
        }
        let grown = span.vstack(&RatMatrix::from_int_rows(vec![f.clone()], span.ncols()));
        let grown_rank = grown.rank_with_bound(rank + 1);
        if grown_rank > rank {
            span = grown;
            rank = grown_rank;
            out.push(f);
        }
    }
    out
}

/// `∂f/∂x_i` at every point.
fn jacobian_values(config: &PointConfiguration, mons: &[Vec<u32>], f: &[BigInt]) -> Vec<Vec<BigRational>> {
    let (n, r) = (config.n(), config.r());
    let deg = mons.first().map_or(0, |m| m.iter().sum::<u32>()) as usize;
    let mut out = vec![vec![BigRational::zero(); r]; n];
    for c in 0..r {
        let p = config.point(c);
        let powers: Vec<Vec<BigRational>> = p
            .iter()
            .map(|x| {
                let mut v = vec![BigRational::one()];
                for k in 0..deg {
                    let next = &v[k] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        for (coef, m) in f.iter().zip(mons) {
            if coef.is_zero() {
                continue;
            }
            for i in 0..n {
                if m[i] == 0 {
                    continue;
                }
                let mut term = BigRational::from_integer(coef * BigInt::from(m[i]));
                for (k, &ek) in m.iter().enumerate() {
                    let e = if k == i { ek - 1 } else { ek } as usize;
                    if e > 0 {
                        term *= &powers[k][e];
                    }
                }
                out[i][c] += term;
            }
        }
    }
    out
}

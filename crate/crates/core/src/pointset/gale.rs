//! Gale duality, projective equivalence of ordered point sets and
//! self-associated configurations.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{binom_i64, int, PointConfiguration, MAX_ATTEMPTS};
use crate::error::PointSetError;
use crate::exactmat::RatMatrix;
use crate::verdict::{Outcome, Verdict};

/// The configuration whose coordinate matrix `Q` spans the kernel of `P`,
/// so that `P Qᵗ = 0`: `r` points in `P^{r−n−1}`.
pub fn gale_transform(g: &PointConfiguration) -> Result<PointConfiguration, PointSetError> {
    let (n, r) = (g.n(), g.r());
    if r < n + 2 {
        return Err(PointSetError::BadRange(format!("Gale transform needs r >= n+2, got n={n}, r={r}")));
    }
    let rank = g.rank();
    if rank < n {
        return Err(PointSetError::RankDeficient { rank, n });
    }
    let q = g.coords().nullspace();
    if let Some(j) = (0..r).find(|&j| (0..q.nrows()).all(|i| q[(i, j)].is_zero())) {
        return Err(PointSetError::ZeroGaleColumn(j));
    }
    PointConfiguration::new(q)
}

/// A vector of the row space of `basis` with no zero coordinate, if one
/// exists.
///
/// A coordinate vanishes on the whole space exactly when its column in the
/// basis is zero. Otherwise the combination with coefficients
/// `1, t, t², …` is nonzero in every coordinate for all but finitely many
/// integers `t`; the first good `t` is found by substitution.
pub fn nowhere_zero_vector(basis: &RatMatrix) -> Option<Vec<BigRational>> {
    let (k, m) = (basis.nrows(), basis.ncols());
    if k == 0 {
        return (m == 0).then(Vec::new);
    }
    if (0..m).any(|j| (0..k).all(|i| basis[(i, j)].is_zero())) {
        return None;
    }
    for t in 1i64.. {
        let t = int(t);
        let mut v = vec![BigRational::zero(); m];
        let mut c = BigRational::one();
        for i in 0..k {
            for (j, x) in v.iter_mut().enumerate() {
                *x += &c * &basis[(i, j)];
            }
            c *= &t;
        }
        if v.iter().all(|x| !x.is_zero()) {
            return Some(v);
        }
    }
    unreachable!("only finitely many t make a coordinate vanish")
}

/// Whether there are an invertible `M` and an invertible diagonal `Λ` with
/// `M A = B Λ`, for spanning configurations with the same point count.
pub fn projectively_equivalent(a: &PointConfiguration, b: &PointConfiguration) -> bool {
    let (n, r) = (a.n(), a.r());
    if b.n() != n || b.r() != r || a.rank() != n || b.rank() != n {
        return false;
    }
    // Row space of B·Λ inside that of A: B Λ Kᵗ = 0 for the kernel K of A.
    let k = a.coords().nullspace();
    let mut rows = Vec::with_capacity(n * k.nrows());
    for i in 0..n {
        for kk in 0..k.nrows() {
            rows.push((0..r).map(|j| &b.coords()[(i, j)] * &k[(kk, j)]).collect());
        }
    }
    let system = RatMatrix::from_rows(rows, r);
    nowhere_zero_vector(&system.nullspace()).is_some()
}

/// Diagonal `Λ` (invertible) with `P Λ Pᵗ = 0`, verified by substitution.
pub fn self_association_witness(g: &PointConfiguration) -> Result<Option<Vec<BigRational>>, PointSetError> {
    let (n, r) = (g.n(), g.r());
    if r != 2 * n {
        return Err(PointSetError::BadShape(format!("self-association needs 2n points, got n={n}, r={r}")));
    }
    let rank = g.rank();
    if rank < n {
        return Err(PointSetError::RankDeficient { rank, n });
    }
    // The equations Σ_j λ_j p_ij p_kj = 0 are the rows of the quadric
    // Veronese matrix.
    let lambda = nowhere_zero_vector(&g.veronese_matrix(2).nullspace());
    if let Some(l) = &lambda {
        let p = g.coords();
        for i in 0..n {
            for k in i..n {
                let s: BigRational = (0..r).map(|j| &l[j] * &p[(i, j)] * &p[(k, j)]).sum();
                assert!(s.is_zero(), "self-association witness fails at ({i},{k})");
            }
        }
    }
    Ok(lambda)
}

pub fn is_self_associated(g: &PointConfiguration) -> Result<bool, PointSetError> {
    Ok(self_association_witness(g)?.is_some())
}

/// `(I+S | I−S)` for a seeded skew-symmetric integer matrix `S`, redrawn
/// until the points are distinct, self-associated and fail by exactly one
/// to impose independent conditions on quadrics.
pub fn random_self_associated(n: usize, seed: u64) -> Result<PointConfiguration, PointSetError> {
    if n < 2 {
        return Err(PointSetError::BadShape(format!("need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut s = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = rng.gen_range(-3..=3);
                s[i][j] = x;
                s[j][i] = -x;
            }
        }
        let mut rows = vec![vec![0i64; 2 * n]; n];
        for i in 0..n {
            for j in 0..n {
                let id = i64::from(i == j);
                rows[i][j] = id + s[i][j];
                rows[i][n + j] = id - s[i][j];
            }
        }
        let Ok(g) = PointConfiguration::new(RatMatrix::from_i64_rows(&rows)) else {
            continue;
        };
        if g.rank() < n || g.hilbert_function(2) != 2 * n - 1 {
            continue;
        }
        if is_self_associated(&g)? {
            return Ok(g.with_label(format!("self-associated n={n} seed={seed}")));
        }
    }
    Err(PointSetError::RetryExhausted(MAX_ATTEMPTS))
}

/// `min(r, C(n+1, 2)) − H(2)`.
pub fn quadric_deficiency(g: &PointConfiguration) -> usize {
    let max = (g.r() as i64).min(binom_i64(g.n() as i64 + 1, 2)) as usize;
    max - g.hilbert_function(2)
}

/// For `r` points in `P^{r−g−1}`: if the Gale transform (in `P^{g−1}`)
/// imposes more than `3g−3` conditions on quadrics, the points do not lie
/// on a canonical curve and the cone is not smoothable.
pub fn cone_quadric_test(g_conf: &PointConfiguration, g: usize) -> Result<Verdict, PointSetError> {
    let (n, r) = (g_conf.n(), g_conf.r());
    let violated = |msg: String| Err(PointSetError::HypothesisViolated(msg));
    if r != n + g {
        return violated(format!("{r} points in P^{} do not have genus {g}", n - 1));
    }
    if g < 2 {
        return violated(format!("genus {g} below 2"));
    }
    if r as i64 > binom_i64(n as i64 + 1, 2) {
        return violated(format!("r={r} exceeds C(n+1,2) for n={n}"));
    }
    // n ≥ (1 + √(8g+1))/2, squared out exactly.
    let lhs = 2 * n as i64 - 1;
    if lhs * lhs < 8 * g as i64 + 1 {
        return violated(format!("n={n} too small for genus {g}"));
    }
    let dual = gale_transform(g_conf)?;
    let s = dual.hilbert_function(2) as i64;
    let bound = 3 * g as i64 - 3;
    let outcome = if s > bound { Outcome::Obstructed } else { Outcome::Unknown };
    Ok(Verdict::new(outcome, "quadric conditions of the Gale transform exceed 3g-3")
        .with("s", s)
        .with("bound", bound)
        .with("g", g as i64))
}

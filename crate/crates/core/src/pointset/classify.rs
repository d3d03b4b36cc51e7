//! Range classifiers and closed-form bounds for cones over general points.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{binom_i64, degree_threshold};
use crate::error::PointSetError;
use crate::verdict::{Outcome, Verdict};

/// Provenance tag for verdicts imported from published machine computations
/// (`n = 4, 5`) rather than derived from a criterion.
pub const PUBLISHED_COMPUTATION: &str = "published computation: T1_{-1} = 0";

/// Upper end `M(n)` of the range where the generic cone is known to be
/// non-smoothable, `n ≥ 6`.
pub fn m_bound(n: i64) -> Result<Rational64, PointSetError> {
    if n < 6 {
        return Err(PointSetError::BadRange(format!("M(n) needs n >= 6, got {n}")));
    }
    if n == 6 {
        return Ok(Rational64::from_integer(42));
    }
    let m = n / 2;
    let b = |a, k| Rational64::from_integer(binom_i64(a, k));
    Ok(if n % 2 == 1 {
        b(3 * m + 1, m) + b(3 * m, m) / 2 - Rational64::from_integer(2 * m * (m + 1))
    } else {
        b(3 * m, m) * Rational64::new(2, 3) + b(3 * m - 1, m) / 3 - Rational64::new(4 * m * m - 1, 3)
    })
}

/// Largest `r` for which `r` general points in `P^{g−1}` lie on a canonical
/// curve of genus `g`.
fn canonical_bound(g: i64) -> Rational64 {
    if g == 4 || g == 6 {
        Rational64::from_integer(g + 5)
    } else {
        Rational64::from_integer(g + 5) + Rational64::new(6, g - 2)
    }
}

fn published_sets(n: i64, r: i64) -> bool {
    match n {
        5 => (41..=60).contains(&r),
        4 => (96..=105).contains(&r) || (132..=150).contains(&r),
        _ => false,
    }
}

/// Classification of the cone over `r` general points in `P^{n−1}`.
pub fn classify_generic(n: i64, r: i64) -> Result<Verdict, PointSetError> {
    if n < 4 || r <= n {
        return Err(PointSetError::BadRange(format!("need n >= 4 and r > n, got n={n}, r={r}")));
    }
    let g = r - n;
    let quadric_range = r <= binom_i64(n + 1, 2);
    let on_canonical = g <= 3 || Rational64::from_integer(r) <= canonical_bound(g);
    if n >= 6 {
        let m = m_bound(n)?.floor().to_integer();
        if r > m {
            return Ok(Verdict::unknown("beyond M(n)").with("m_bound", m));
        }
        if g >= 4 && !on_canonical {
            return Ok(Verdict::new(
                Outcome::NonSmoothableGeneric,
                "Gale transform off every canonical curve, deligne e > dim T1 up to M(n)",
            )
            .with("g", g)
            .with("m_bound", m));
        }
    }
    if quadric_range && on_canonical {
        return Ok(Verdict::new(Outcome::SmoothableGeneric, "Gale transform lies on a canonical curve").with("g", g));
    }
    if published_sets(n, r) {
        return Ok(Verdict::new(Outcome::NonSmoothableGeneric, PUBLISHED_COMPUTATION));
    }
    if n <= 5 {
        let v = equisingular_verdict(n, r)?;
        if v.outcome != Outcome::Unknown {
            return Ok(v);
        }
    }
    Ok(Verdict::unknown("no criterion applies"))
}

/// Whether the general curve on the equisingular stratum of `L_r^n` is
/// non-smoothable (positive-weight deformations outgrow `e`).
pub fn equisingular_verdict(n: i64, r: i64) -> Result<Verdict, PointSetError> {
    let fires = match n {
        ..=3 => return Err(PointSetError::BadRange(format!("need n >= 4, got {n}"))),
        4 => r > 30,
        5 => r > 18,
        _ => Rational64::from_integer(r) > Rational64::from_integer(n + 2) + Rational64::new(6, n - 5),
    };
    Ok(if fires {
        Verdict::new(
            Outcome::NonSmoothableGenericEquisingular,
            "equisingular stratum: dim T1_{>=0} exceeds deligne e",
        )
        .with("r", r)
    } else {
        Verdict::unknown("below the equisingular threshold").with("r", r)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: i64,
    /// The bound is the exact value (`ℓ = −1` and `r = C(n+d−1, d)`).
    pub exact: bool,
}

/// Lower bounds for `dim T¹_ℓ` of the generic cone, for `ℓ > 0` or `ℓ = −1`.
pub fn t1_lower_bounds(n: i64, r: i64, l: i64) -> Result<LowerBound, PointSetError> {
    if r <= n || n < 2 {
        return Err(PointSetError::BadRange(format!("need r > n >= 2, got n={n}, r={r}")));
    }
    if l > 0 {
        let v = (n - 1) * (r - binom_i64(n + l, l + 1)) - binom_i64(n + l - 1, l + 1);
        return Ok(LowerBound { value: v.max(0), exact: false });
    }
    if l != -1 {
        return Err(PointSetError::BadDegree(l));
    }
    let d = degree_threshold(n, r) as i64;
    let top = binom_i64(n + d - 1, d);
    let s = r - binom_i64(n + d - 2, d - 1);
    let v = (n - 1) * r - n - s * (top - r);
    Ok(LowerBound {
        value: v.max(0),
        exact: r == top,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SCurveInvariants {
    pub e: i64,
    pub t1_0: i64,
    pub t1_minus1: i64,
    /// `r` beyond `C(n+1,2)+1`, where the formulas are extrapolated.
    pub extrapolated: bool,
}

pub fn s_curve_invariants(n: i64, r: i64) -> Result<SCurveInvariants, PointSetError> {
    let base = binom_i64(n + 1, 2) + 1;
    if n < 2 || r < base {
        return Err(PointSetError::BadParameters(format!("need r >= C(n+1,2)+1 = {base}, got r={r}")));
    }
    Ok(SCurveInvariants {
        e: 4 * r - 3 * n - 2,
        t1_0: (n - 1) * (r - n - 1),
        t1_minus1: (r - 2) * n,
        extrapolated: r != base,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeformationTarget {
    Lines { d: i64, n: i64 },
    SCurve { d: i64, n: i64, big_n: i64 },
}

impl fmt::Display for DeformationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DeformationTarget::Lines { d, n } => write!(f, "L_{d}^{n}"),
            DeformationTarget::SCurve { d, n, big_n } => write!(f, "S_{d}^{{{n},{big_n}}}"),
        }
    }
}

/// The curve `C_{d,n}` deforms into: `L_d^n` when `d ≤ 2n−1`, else
/// `S_d^{n,N}` with `N = max{n, n+d−C(n+1,2)}`.
pub fn deformation_target(d: i64, n: i64) -> Result<DeformationTarget, PointSetError> {
    if !(1 < n && n < d) {
        return Err(PointSetError::BadParameters(format!("need 1 < n < d, got d={d}, n={n}")));
    }
    Ok(if d <= 2 * n - 1 {
        DeformationTarget::Lines { d, n }
    } else {
        DeformationTarget::SCurve {
            d,
            n,
            big_n: n.max(n + d - binom_i64(n + 1, 2)),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns_set(n: i64) -> Vec<i64> {
        let top = m_bound(n).map(|m| m.floor().to_integer()).unwrap_or(200) + 5;
        (n + 1..=top)
            .filter(|&r| classify_generic(n, r).unwrap().outcome == Outcome::NonSmoothableGeneric)
            .collect()
    }

    fn interval(a: i64, b: i64) -> Vec<i64> {
        (a..=b).collect()
    }

    #[test]
    fn m_values() {
        assert_eq!(m_bound(6).unwrap(), Rational64::from_integer(42));
        assert_eq!(m_bound(7).unwrap(), Rational64::from_integer(138));
        assert_eq!(m_bound(8).unwrap(), Rational64::from_integer(419));
        assert_eq!(m_bound(9).unwrap(), Rational64::new(1845, 2));
        assert_eq!(m_bound(10).unwrap().floor().to_integer(), 2636);
        assert!(m_bound(5).is_err());
    }

    #[test]
    fn published_table() {
        let mut six = vec![10, 12];
        six.extend(interval(15, 42));
        assert_eq!(ns_set(6), six);
        let mut seven = vec![11];
        seven.extend(interval(13, 138));
        assert_eq!(ns_set(7), seven);
        assert_eq!(ns_set(8), interval(12, 419));
        assert_eq!(ns_set(9), interval(13, 922));
        assert_eq!(ns_set(10), interval(14, 2636));
    }

    #[test]
    fn smoothable_cases() {
        for r in [11, 13, 14] {
            assert_eq!(classify_generic(6, r).unwrap().outcome, Outcome::SmoothableGeneric);
        }
        assert_eq!(classify_generic(6, 43).unwrap().outcome, Outcome::Unknown);
    }

    #[test]
    fn low_dimensions() {
        assert_eq!(ns_set(5), interval(41, 60));
        let mut four = interval(96, 105);
        four.extend(interval(132, 150));
        assert_eq!(ns_set(4), four);
        let v = classify_generic(5, 41).unwrap();
        assert_eq!(v.provenance, PUBLISHED_COMPUTATION);
        assert_eq!(
            classify_generic(5, 19).unwrap().outcome,
            Outcome::NonSmoothableGenericEquisingular
        );
        assert_eq!(classify_generic(4, 8).unwrap().outcome, Outcome::SmoothableGeneric);
        assert_eq!(classify_generic(4, 20).unwrap().outcome, Outcome::Unknown);
        assert!(classify_generic(3, 8).is_err());
    }

    #[test]
    fn equisingular_thresholds() {
        let ns = Outcome::NonSmoothableGenericEquisingular;
        assert_eq!(equisingular_verdict(4, 31).unwrap().outcome, ns);
        assert_eq!(equisingular_verdict(4, 30).unwrap().outcome, Outcome::Unknown);
        assert_eq!(equisingular_verdict(5, 18).unwrap().outcome, Outcome::Unknown);
        assert_eq!(equisingular_verdict(5, 19).unwrap().outcome, ns);
        // threshold 8 + 2 + 6/3 = 12 is not exceeded by 11
        assert_eq!(equisingular_verdict(8, 11).unwrap().outcome, Outcome::Unknown);
        assert_eq!(equisingular_verdict(8, 13).unwrap().outcome, ns);
        assert_eq!(equisingular_verdict(6, 14).unwrap().outcome, Outcome::Unknown);
        assert_eq!(equisingular_verdict(6, 15).unwrap().outcome, ns);
    }

    #[test]
    fn lower_bounds() {
        for r in 25..60 {
            assert_eq!(t1_lower_bounds(6, r, 1).unwrap().value, 5 * (r - 24));
        }
        for r in 12..40 {
            assert_eq!(t1_lower_bounds(4, r, 1).unwrap().value, 3 * r - 36);
        }
        assert_eq!(t1_lower_bounds(6, 13, -1).unwrap(), LowerBound { value: 3, exact: false });
        assert_eq!(t1_lower_bounds(6, 14, -1).unwrap(), LowerBound { value: 8, exact: false });
        assert_eq!(t1_lower_bounds(6, 21, -1).unwrap(), LowerBound { value: 99, exact: true });
        assert_eq!(t1_lower_bounds(6, 56, -1).unwrap().value, 5 * 56 - 6);
        assert_eq!(t1_lower_bounds(6, 13, 0), Err(PointSetError::BadDegree(0)));
    }

    #[test]
    fn s_curves_and_targets() {
        let v = s_curve_invariants(6, 22).unwrap();
        assert_eq!((v.e, v.t1_0, v.t1_minus1, v.extrapolated), (68, 75, 120, false));
        assert!(s_curve_invariants(6, 23).unwrap().extrapolated);
        assert!(s_curve_invariants(6, 21).is_err());
        assert_eq!(deformation_target(13, 9).unwrap().to_string(), "L_13^9");
        assert_eq!(deformation_target(17, 9).unwrap(), DeformationTarget::Lines { d: 17, n: 9 });
        assert_eq!(deformation_target(20, 9).unwrap().to_string(), "S_20^{9,9}");
        assert_eq!(
            deformation_target(30, 5).unwrap(),
            DeformationTarget::SCurve { d: 30, n: 5, big_n: 20 }
        );
        assert!(deformation_target(5, 5).is_err());
    }
}

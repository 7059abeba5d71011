//! Dimension arithmetic for secants of the classified varieties with
//! nonzero prolongation.
//!
//! Six families of Hermitian-symmetric-space type plus the symplectic VMRT
//! family carry closed-form ambient and secant dimensions. Sweeping them
//! shows the secant is a hypersurface at exactly four parameter points — the
//! four Severi varieties. The submaximal-projection bound compares the
//! dimension a submaximal linear center must have with the largest dimension
//! compatible with a nonzero prolongation of rank `r`; `consistent = false`
//! (bound strictly below requirement) reproduces the vanishing conclusion.

use crate::error::{Error, Result};
use crate::rat::{rat, ratio, Rat};

/// Parameter point of one of the classified families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    /// (I) Segre `P^{a-1} x P^{b-1}` in `P^{ab-1}`, `a, b >= 3`.
    SegreI { a: i64, b: i64 },
    /// (II) Pluecker `Gr(2, n)` in `P^{(n^2-n-2)/2}`, `n >= 5`.
    PlueckerII { n: i64 },
    /// (III) second Veronese of `P^{n-1}`, `n >= 3`.
    VeroneseIII { n: i64 },
    /// (IV) quadric `Q^{n-2}` in `P^{n-1}`, `n >= 3`.
    QuadricIV { n: i64 },
    /// (V) spinor variety `S_5` in `P^15`.
    SpinorV,
    /// (VI) the octonion plane in `P^26`.
    OctonionVI,
    /// (ii) symplectic-Grassmannian VMRT family, `k, m >= 1`.
    SymplecticIi { k: i64, m: i64 },
}

/// Ambient projective dimension and secant dimension of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecantDims {
    pub variety_dim: i64,
    pub ambient_dim: i64,
    pub secant_dim: i64,
}

impl SecantDims {
    /// The secant fills a hypersurface iff it has ambient codimension one.
    pub fn is_hypersurface(&self) -> bool {
        self.secant_dim == self.ambient_dim - 1
    }
}

/// Submaximal-projection consistency data for one `(family, params, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmaximalCheck {
    /// Dimension a submaximal linear center is forced to have.
    pub dim_l_required: i64,
    /// Largest center dimension compatible with a nonzero rank-`r`
    /// prolongation after projection.
    pub dim_l_bound: Rat,
    /// `bound >= required`; `false` reproduces the vanishing conclusion.
    pub consistent: bool,
}

pub fn hss_secant_dim(spec: FamilySpec) -> Result<SecantDims> {
    match spec {
        FamilySpec::SegreI { a, b } => {
            if a < 3 || b < 3 {
                return Err(Error::BadParams(format!(
                    "family I needs a, b >= 3, got a={a}, b={b}"
                )));
            }
            Ok(SecantDims {
                variety_dim: a + b - 2,
                ambient_dim: a * b - 1,
                secant_dim: 2 * a + 2 * b - 5,
            })
        }
        FamilySpec::PlueckerII { n } => {
            if n < 5 {
                return Err(Error::BadParams(format!("family II needs n >= 5, got {n}")));
            }
            Ok(SecantDims {
                variety_dim: 2 * (n - 2),
                ambient_dim: (n * n - n - 2) / 2,
                secant_dim: 4 * n - 11,
            })
        }
        FamilySpec::VeroneseIII { n } => {
            if n < 3 {
                return Err(Error::BadParams(format!(
                    "family III needs n >= 3, got {n}"
                )));
            }
            Ok(SecantDims {
                variety_dim: n - 1,
                ambient_dim: (n * n + n - 2) / 2,
                secant_dim: 2 * n - 2,
            })
        }
        FamilySpec::QuadricIV { n } => {
            if n < 3 {
                return Err(Error::BadParams(format!(
                    "family IV needs n >= 3, got {n}"
                )));
            }
            Ok(SecantDims {
                variety_dim: n - 2,
                ambient_dim: n - 1,
                secant_dim: n - 1,
            })
        }
        FamilySpec::SpinorV => Ok(SecantDims {
            variety_dim: 10,
            ambient_dim: 15,
            secant_dim: 15,
        }),
        FamilySpec::OctonionVI => Ok(SecantDims {
            variety_dim: 16,
            ambient_dim: 26,
            secant_dim: 25,
        }),
        FamilySpec::SymplecticIi { k, m } => {
            if k < 1 || m < 1 {
                return Err(Error::BadParams(format!(
                    "family ii needs k, m >= 1, got k={k}, m={m}"
                )));
            }
            Ok(SecantDims {
                variety_dim: m + k - 1,
                ambient_dim: (k * k + k) / 2 + m * k - 1,
                secant_dim: 2 * m + 2 * k - 2,
            })
        }
    }
}

/// Zak linear normality: a nondegenerate nonsingular `S` of dimension `n`
/// in `P^m` with `3n > 2(m - 2)` has space-filling secant.
pub fn zak_linear_normality_check(n: i64, m: i64) -> Result<bool> {
    if n < 1 || m < 1 {
        return Err(Error::BadParams(format!(
            "dimensions must be positive, got n={n}, m={m}"
        )));
    }
    Ok(3 * n > 2 * (m - 2))
}

/// Required center dimension of a submaximal projection and the largest
/// center dimension compatible with a nonzero rank-`r` prolongation.
///
/// Only families I, II, III and ii carry the bound. The check is defined on
/// the domain where a submaximal center exists (`required >= 1`, i.e. the
/// secant has ambient codimension at least two) and where the rank penalty
/// term of the bound is positive (`1 <= r <= K - 1` for the root `K` of the
/// penalty); outside that window the inputs are rejected.
pub fn submaximal_bound(spec: FamilySpec, r: i64) -> Result<SubmaximalCheck> {
    let (required, bound, penalty_root) = match spec {
        FamilySpec::SegreI { a, b } => {
            hss_secant_dim(spec)?;
            let required = a * b - 2 * a - 2 * b + 3;
            let bound = rat(a * b - 2 * (a + b) + 4 - r * (a + b - r - 4));
            (required, bound, a + b - 4)
        }
        FamilySpec::PlueckerII { n } => {
            hss_secant_dim(spec)?;
            let required = (n * n - n - 2) / 2 - 4 * n + 10;
            let bound = rat(n * (n - 1) / 2 - 4 * n + 10) - ratio(r * (2 * n - r - 9), 2);
            (required, bound, 2 * n - 9)
        }
        FamilySpec::VeroneseIII { n } => {
            hss_secant_dim(spec)?;
            let required = (n * n + n - 2) / 2 - 2 * n + 1;
            let bound = rat(n * (n + 1) / 2 - 2 * n + 1) - ratio(r * (2 * n - r - 3), 2);
            (required, bound, 2 * n - 3)
        }
        FamilySpec::SymplecticIi { k, m } => {
            hss_secant_dim(spec)?;
            let required = m * k + k * (k + 1) / 2 - 2 * m - 2 * k;
            let bound = rat(m * k + k * (k + 1) / 2 - 2 * m - 2 * k + 1)
                - ratio(r * (2 * m + 2 * k - r - 3), 2);
            (required, bound, 2 * m + 2 * k - 3)
        }
        _ => {
            return Err(Error::BadParams(
                "submaximal bound is defined for families I, II, III, ii".into(),
            ))
        }
    };
    if required < 1 {
        return Err(Error::BadParams(format!(
            "no submaximal center exists here (required dimension {required} < 1)"
        )));
    }
    if r < 1 || r > penalty_root - 1 {
        return Err(Error::BadParams(format!(
            "rank r must lie in 1..={}, got {r}",
            penalty_root - 1
        )));
    }
    let consistent = bound >= rat(required);
    Ok(SubmaximalCheck {
        dim_l_required: required,
        dim_l_bound: bound,
        consistent,
    })
}

/// The full parameter sweep used by the verification battery: family I over
/// `3 <= a, b <= 8`, II over `5 <= n <= 12`, III over `3 <= n <= 10`, IV over
/// `3 <= n <= 10`, V, VI, and ii over `1 <= k, m <= 4`.
pub fn standard_sweep() -> Vec<(String, FamilySpec)> {
    let mut out = Vec::new();
    for a in 3..=8 {
        for b in 3..=8 {
            out.push((format!("I a={a} b={b}"), FamilySpec::SegreI { a, b }));
        }
    }
    for n in 5..=12 {
        out.push((format!("II n={n}"), FamilySpec::PlueckerII { n }));
    }
    for n in 3..=10 {
        out.push((format!("III n={n}"), FamilySpec::VeroneseIII { n }));
    }
    for n in 3..=10 {
        out.push((format!("IV n={n}"), FamilySpec::QuadricIV { n }));
    }
    out.push(("V".into(), FamilySpec::SpinorV));
    out.push(("VI".into(), FamilySpec::OctonionVI));
    for k in 1..=4 {
        for m in 1..=4 {
            out.push((format!("ii k={k} m={m}"), FamilySpec::SymplecticIi { k, m }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_examples() {
        let d = hss_secant_dim(FamilySpec::SegreI { a: 3, b: 3 }).unwrap();
        assert_eq!((d.secant_dim, d.ambient_dim), (7, 8));
        assert!(d.is_hypersurface());

        let d = hss_secant_dim(FamilySpec::VeroneseIII { n: 3 }).unwrap();
        assert_eq!((d.secant_dim, d.ambient_dim), (4, 5));
        assert!(d.is_hypersurface());

        // Gr(2,5): the secant fills the space
        let d = hss_secant_dim(FamilySpec::PlueckerII { n: 5 }).unwrap();
        assert_eq!((d.secant_dim, d.ambient_dim), (9, 9));
        assert!(!d.is_hypersurface());
    }

    #[test]
    fn exactly_four_hypersurface_points() {
        let hits: Vec<String> = standard_sweep()
            .into_iter()
            .filter(|(_, s)| hss_secant_dim(*s).unwrap().is_hypersurface())
            .map(|(label, _)| label)
            .collect();
        assert_eq!(
            hits,
            vec![
                "I a=3 b=3".to_string(),
                "II n=6".to_string(),
                "III n=3".to_string(),
                "VI".to_string()
            ]
        );
    }

    #[test]
    fn submaximal_examples() {
        let c = submaximal_bound(FamilySpec::SegreI { a: 4, b: 4 }, 1).unwrap();
        assert_eq!(c.dim_l_required, 3);
        assert_eq!(c.dim_l_bound, rat(1));
        assert!(!c.consistent);

        let c = submaximal_bound(FamilySpec::VeroneseIII { n: 4 }, 1).unwrap();
        assert_eq!(c.dim_l_required, 2);
        assert_eq!(c.dim_l_bound, rat(1));
        assert!(!c.consistent);

        let c = submaximal_bound(FamilySpec::PlueckerII { n: 7 }, 1).unwrap();
        assert_eq!(c.dim_l_required, 2);
        assert!(!c.consistent);
    }

    #[test]
    fn submaximal_rejects_hypersurface_points_and_bad_ranks() {
        // at the Severi points no submaximal center exists
        assert!(submaximal_bound(FamilySpec::SegreI { a: 3, b: 3 }, 1).is_err());
        assert!(submaximal_bound(FamilySpec::PlueckerII { n: 6 }, 1).is_err());
        assert!(submaximal_bound(FamilySpec::VeroneseIII { n: 3 }, 1).is_err());
        // rank outside the penalty window
        assert!(submaximal_bound(FamilySpec::SegreI { a: 3, b: 4 }, 3).is_err());
        assert!(submaximal_bound(FamilySpec::SegreI { a: 4, b: 4 }, 0).is_err());
        // families without the bound
        assert!(submaximal_bound(FamilySpec::SpinorV, 1).is_err());
    }

    #[test]
    fn submaximal_inconsistent_across_sweep() {
        let mut checked = 0;
        for (_, spec) in standard_sweep() {
            let mut r = 1;
            while let Ok(c) = submaximal_bound(spec, r) {
                assert!(!c.consistent, "{spec:?} r={r}");
                checked += 1;
                r += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn zak_inequality_examples() {
        assert!(zak_linear_normality_check(4, 7).unwrap());
        assert!(!zak_linear_normality_check(2, 5).unwrap());
        assert!(!zak_linear_normality_check(16, 26).unwrap());
        assert!(zak_linear_normality_check(0, 5).is_err());
    }

    #[test]
    fn symplectic_family_never_hypersurface() {
        for k in 1..=12 {
            for m in 1..=12 {
                let d = hss_secant_dim(FamilySpec::SymplecticIi { k, m }).unwrap();
                assert!(!d.is_hypersurface());
            }
        }
    }
}

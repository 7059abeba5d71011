//! Pointwise Gauss-map and polar-geometry probes.
//!
//! Everything here is a certificate at a concrete rational point: null space
//! of the contracted quadratic form, the Gauss space (directions whose
//! contraction with the point is proportional to the gradient), singularity
//! predicates, a randomized nonzero-Hessian witness search, and the
//! restriction of gradient quadrics to subspaces. All computations run on
//! the affine cone; projective dimensions are cone dimensions minus one.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, row_space_eq, Matrix};
use crate::multilinear::{CubicForm, QuadraticForm};
use crate::rat::{format_rat, rat, Rat};

/// Null space and Gauss space at a point, with the radial bookkeeping bit.
#[derive(Debug, Clone)]
pub struct GaussFiber {
    pub point: Vec<Rat>,
    pub null_basis: Vec<Vec<Rat>>,
    pub gamma_basis: Vec<Vec<Rat>>,
    /// Whether the point itself contributes a direction independent of the
    /// null part (true exactly at nonsingular points).
    pub radial_included: bool,
}

impl GaussFiber {
    pub fn dim_null(&self) -> usize {
        self.null_basis.len()
    }

    pub fn dim_gamma(&self) -> usize {
        self.gamma_basis.len()
    }
}

/// Basis of `Null(f_w) = { v : f(w, v, ·) = 0 }`.
pub fn null_space(f: &CubicForm, w: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    Ok(f.contract1(w)?.matrix.kernel_basis())
}

/// True iff the gradient covector `f_{ww}` vanishes identically.
pub fn is_singular_point(f: &CubicForm, w: &[Rat]) -> bool {
    f.contract2(w, w).map(|l| l.is_zero()).unwrap_or(false)
}

/// The Gauss space `{ v : f_{vw} proportional to f_{ww} }` at `w != 0`,
/// solved as the kernel of the contraction composed with the projection
/// along the gradient line. The span decomposition (radial line plus null
/// space) is re-verified exactly before returning.
pub fn gauss_space(f: &CubicForm, w: &[Rat]) -> Result<GaussFiber> {
    if is_zero_vec(w) {
        return Err(Error::ZeroVector);
    }
    let m = f.contract1(w)?.matrix;
    let grad = f.contract2(w, w)?.coords;
    let null_basis = m.kernel_basis();
    if is_zero_vec(&grad) {
        // singular point: the proportionality target is zero
        return Ok(GaussFiber {
            point: w.to_vec(),
            gamma_basis: null_basis.clone(),
            null_basis,
            radial_included: false,
        });
    }
    let n = f.dim();
    let p = grad.iter().position(|x| !x.is_zero()).expect("nonzero");
    // rows: grad[p] * (M v)_q - grad[q] * (M v)_p = 0 for q != p
    let mut triplets = Vec::new();
    let row_p = m.dense_row(p);
    let mut out_row = 0;
    for q in 0..n {
        if q == p {
            continue;
        }
        for (c, v) in m.sparse_row(q) {
            triplets.push((out_row, *c, &grad[p] * v));
        }
        for (c, v) in row_p.iter().enumerate() {
            if !v.is_zero() {
                triplets.push((out_row, c, -&grad[q] * v));
            }
        }
        out_row += 1;
    }
    let gamma_basis = Matrix::from_triplets(out_row, n, triplets).kernel_basis();
    // exact decomposition check: Gamma = span(w) + Null, dimensions additive
    let mut candidate: Vec<Vec<Rat>> = vec![w.to_vec()];
    candidate.extend(null_basis.iter().cloned());
    assert!(
        row_space_eq(&gamma_basis, &candidate),
        "Gauss space does not decompose as radial + null"
    );
    assert_eq!(gamma_basis.len(), null_basis.len() + 1);
    Ok(GaussFiber {
        point: w.to_vec(),
        null_basis,
        gamma_basis,
        radial_included: true,
    })
}

/// Outcome of the randomized nonzero-Hessian witness search.
#[derive(Debug, Clone)]
pub struct HessianWitness {
    pub nonzero: bool,
    pub witness: Option<Vec<Rat>>,
    /// Exact determinant of the contracted form at the witness.
    pub det: Option<Rat>,
    pub trials_used: usize,
}

/// Draws random small-integer vectors until `det f_w != 0`. A single witness
/// certifies the nonzero-Hessian condition (it is an open condition); trial
/// exhaustion is inconclusive, not a proof of degeneracy.
pub fn hessian_nonzero_witness(f: &CubicForm, trials: usize, seed: u64) -> HessianWitness {
    assert!(trials >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 1..=trials {
        let w: Vec<Rat> = (0..f.dim())
            .map(|_| rat(rng.gen_range(-20i64..=20)))
            .collect();
        let det = f.hessian_matrix(&w).expect("dims match").determinant();
        if !det.is_zero() {
            return HessianWitness {
                nonzero: true,
                witness: Some(w),
                det: Some(det),
                trials_used: t,
            };
        }
    }
    HessianWitness {
        nonzero: false,
        witness: None,
        det: None,
        trials_used: trials,
    }
}

/// Per-sample record of the degeneracy report (stable JSON shape).
#[derive(Debug, Clone, Serialize)]
pub struct GaussSampleRecord {
    pub point: Vec<String>,
    pub dim_null: usize,
    pub dim_gamma: usize,
    #[serde(rename = "on_Y")]
    pub on_y: bool,
    pub singular: bool,
}

impl GaussSampleRecord {
    /// Fiber dimension of the projective Gauss map implied by this sample.
    pub fn projective_fiber_dim(&self) -> usize {
        self.dim_gamma.saturating_sub(1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    pub samples: Vec<GaussSampleRecord>,
    /// True when every sample has a Gauss space of dimension at least two;
    /// this certifies degeneracy at the sampled points only.
    pub degenerate: bool,
}

/// Checks each sample lies on the cone, is smooth there, computes the fiber
/// data, and flags degeneracy when all samples have `dim Gamma >= 2`.
pub fn gauss_degeneracy_report(f: &CubicForm, samples: &[Vec<Rat>]) -> Result<DegeneracyReport> {
    if samples.is_empty() {
        return Err(Error::EmptySampleList);
    }
    let mut records = Vec::with_capacity(samples.len());
    let mut min_gamma = usize::MAX;
    for w in samples {
        if !f.eval_cubic(w)?.is_zero() {
            return Err(Error::SampleNotOnY);
        }
        if is_singular_point(f, w) {
            return Err(Error::SampleSingular);
        }
        let fiber = gauss_space(f, w)?;
        min_gamma = min_gamma.min(fiber.dim_gamma());
        records.push(GaussSampleRecord {
            point: w.iter().map(format_rat).collect(),
            dim_null: fiber.dim_null(),
            dim_gamma: fiber.dim_gamma(),
            on_y: true,
            singular: false,
        });
    }
    Ok(DegeneracyReport {
        samples: records,
        degenerate: min_gamma >= 2,
    })
}

/// Whether the whole line through two singular points stays on the cubic:
/// all four coefficients of `f(sx + ty)` vanish.
pub fn secant_containment_check(f: &CubicForm, x: &[Rat], y: &[Rat]) -> Result<bool> {
    if !is_singular_point(f, x) || !is_singular_point(f, y) {
        return Err(Error::NotSingular);
    }
    let coefficients = [
        f.eval3(x, x, x)?,
        f.eval3(x, x, y)?,
        f.eval3(x, y, y)?,
        f.eval3(y, y, y)?,
    ];
    Ok(coefficients.iter().all(|c| c.is_zero()))
}

/// The quadratic form `v -> f(v, v, u)` restricted to a subspace, written in
/// the given basis coordinates.
pub fn restricted_singular_quadric(
    f: &CubicForm,
    subspace_basis: &[Vec<Rat>],
    u: &[Rat],
) -> Result<QuadraticForm> {
    let k = subspace_basis.len();
    if k == 0 || Matrix::from_rows(subspace_basis.to_vec()).rank() < k {
        return Err(Error::DependentBasis);
    }
    let mut matrix = Matrix::zero(k, k);
    for a in 0..k {
        for b in a..k {
            let v = f.eval3(&subspace_basis[a], &subspace_basis[b], u)?;
            if !v.is_zero() {
                matrix.set(a, b, v.clone());
                matrix.set(b, a, v);
            }
        }
    }
    Ok(QuadraticForm { dim: k, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, embed_sym, CatalogName};
    use crate::linalg::zero_vec;
    use crate::multilinear::Monomial;
    use crate::rat::rat;
    use num_traits::One;
    use rand::SeedableRng;

    fn fermat(n: usize) -> CubicForm {
        let monomials: Vec<Monomial> = (0..n)
            .map(|i| {
                let mut exps = vec![0u32; n];
                exps[i] = 3;
                Monomial {
                    exps,
                    coeff: Rat::one(),
                }
            })
            .collect();
        CubicForm::polarize(n, &monomials).unwrap()
    }

    fn diag_sym(d: &[i64; 3]) -> Vec<Rat> {
        let mut m = Matrix::zero(3, 3);
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, rat(v));
        }
        embed_sym(&m)
    }

    #[test]
    fn null_space_examples() {
        let f = fermat(3);
        assert!(null_space(&f, &[rat(1), rat(1), rat(1)]).unwrap().is_empty());
        assert_eq!(null_space(&f, &zero_vec(3)).unwrap().len(), 3);

        let e = build(CatalogName::Veronese);
        let w = diag_sym(&[1, 1, 0]);
        assert_eq!(null_space(&e.cubic, &w).unwrap().len(), 2);
    }

    #[test]
    fn gauss_space_examples() {
        let f = fermat(3);
        let fiber = gauss_space(&f, &[rat(1), rat(1), rat(1)]).unwrap();
        assert_eq!(fiber.dim_gamma(), 1);
        assert!(fiber.radial_included);

        let e = build(CatalogName::Veronese);
        let fiber = gauss_space(&e.cubic, &diag_sym(&[1, 1, 0])).unwrap();
        assert_eq!(fiber.dim_null(), 2);
        assert_eq!(fiber.dim_gamma(), 3);

        // segre at a rank-2 point: radial + null, dimensions additive
        let e = build(CatalogName::Segre);
        let mut w = zero_vec(9);
        w[0] = rat(1); // E_00
        w[4] = rat(1); // E_11
        let fiber = gauss_space(&e.cubic, &w).unwrap();
        assert_eq!(fiber.dim_gamma(), fiber.dim_null() + 1);

        assert!(matches!(
            gauss_space(&f, &zero_vec(3)),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn gauss_space_at_singular_point_is_null_space() {
        let e = build(CatalogName::Veronese);
        let w = diag_sym(&[1, 0, 0]);
        let fiber = gauss_space(&e.cubic, &w).unwrap();
        assert!(!fiber.radial_included);
        assert_eq!(fiber.dim_gamma(), fiber.dim_null());
    }

    #[test]
    fn singular_point_examples() {
        let e = build(CatalogName::Veronese);
        assert!(is_singular_point(&e.cubic, &zero_vec(6)));
        assert!(is_singular_point(&e.cubic, &diag_sym(&[1, 0, 0])));
        let w = diag_sym(&[1, 1, 0]);
        assert!(!is_singular_point(&e.cubic, &w));
        assert!(e.cubic.eval_cubic(&w).unwrap().is_zero());
    }

    #[test]
    fn hessian_witness_examples() {
        let f = fermat(3);
        let w = hessian_nonzero_witness(&f, 10, 1);
        assert!(w.nonzero);
        // soundness: the stored determinant re-verifies by an independent route
        let witness = w.witness.unwrap();
        let independent = f.hessian_matrix(&witness).unwrap().determinant_gauss();
        assert_eq!(independent, w.det.unwrap());
        assert!(!independent.is_zero());

        // rank <= 1 everywhere: no witness can exist
        let cone = CubicForm::polarize(
            2,
            &[Monomial {
                exps: vec![3, 0],
                coeff: rat(1),
            }],
        )
        .unwrap();
        let none = hessian_nonzero_witness(&cone, 200, 5);
        assert!(!none.nonzero);
        assert_eq!(none.trials_used, 200);
    }

    #[test]
    fn all_catalog_cubics_have_nonzero_hessian() {
        for name in CatalogName::ALL {
            let e = build(name);
            let w = hessian_nonzero_witness(&e.cubic, 50, 7);
            assert!(w.nonzero, "{name}");
        }
    }

    #[test]
    fn degeneracy_report_examples() {
        // four-variable control: a rational point with trivial null space
        let f = fermat(4);
        let sample = vec![rat(3), rat(4), rat(5), rat(-6)];
        let report = gauss_degeneracy_report(&f, &[sample]).unwrap();
        assert!(!report.degenerate);
        assert_eq!(report.samples[0].dim_gamma, 1);
        assert_eq!(report.samples[0].projective_fiber_dim(), 0);

        let e = build(CatalogName::Veronese);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<Vec<Rat>> = (0..5)
            .map(|_| e.sample_smooth_on_y(&mut rng).unwrap())
            .collect();
        let report = gauss_degeneracy_report(&e.cubic, &samples).unwrap();
        assert!(report.degenerate);
        assert!(report.samples.iter().all(|s| s.dim_gamma == 3));

        assert!(matches!(
            gauss_degeneracy_report(&f, &[]),
            Err(Error::EmptySampleList)
        ));
        // off-cone and singular samples are rejected
        assert!(matches!(
            gauss_degeneracy_report(&f, &[vec![rat(1), rat(0), rat(0), rat(0)]]),
            Err(Error::SampleNotOnY)
        ));
        let e = build(CatalogName::Veronese);
        assert!(matches!(
            gauss_degeneracy_report(&e.cubic, &[diag_sym(&[1, 0, 0])]),
            Err(Error::SampleSingular)
        ));
    }

    #[test]
    fn secant_containment_examples() {
        let e = build(CatalogName::Veronese);
        let x = diag_sym(&[1, 0, 0]);
        let y = diag_sym(&[0, 1, 0]);
        assert!(secant_containment_check(&e.cubic, &x, &x).unwrap());
        assert!(secant_containment_check(&e.cubic, &x, &y).unwrap());
        let smooth = diag_sym(&[1, 1, 0]);
        assert!(matches!(
            secant_containment_check(&e.cubic, &x, &smooth),
            Err(Error::NotSingular)
        ));

        // octonion entry: two rank-one elements
        let e = build(CatalogName::Octonion);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x = e.sample_singular(&mut rng);
        let y = e.sample_singular(&mut rng);
        assert!(secant_containment_check(&e.cubic, &x, &y).unwrap());
    }

    #[test]
    fn restricted_quadric_examples() {
        let e = build(CatalogName::Veronese);
        // restrict to a computed Gauss space at a smooth point, direction
        // outside the tangent hyperplane: a genuine quadric, not a square
        let w = diag_sym(&[1, 1, 0]);
        let fiber = gauss_space(&e.cubic, &w).unwrap();
        let grad = e.cubic.contract2(&w, &w).unwrap().coords;
        // u with grad(u) != 0 lies outside the tangent hyperplane
        let u_pos = grad.iter().position(|x| !x.is_zero()).unwrap();
        let mut u = zero_vec(6);
        u[u_pos] = Rat::one();
        let q = restricted_singular_quadric(&e.cubic, &fiber.gamma_basis, &u).unwrap();
        assert_eq!(q.dim, 3);
        let rank = q.matrix.rank();
        assert!(rank >= 2, "must not be a perfect square, rank = {rank}");

        // a single singular direction gives the zero form
        let s = diag_sym(&[1, 0, 0]);
        let q = restricted_singular_quadric(&e.cubic, &[s.clone()], &u).unwrap();
        assert!(q.matrix.is_zero());

        // dependent basis is rejected
        assert!(matches!(
            restricted_singular_quadric(&e.cubic, &[s.clone(), s], &u),
            Err(Error::DependentBasis)
        ));
    }

    #[test]
    fn tangency_and_fiber_constancy_at_samples() {
        let e = build(CatalogName::Segre);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let w = e.sample_smooth_on_y(&mut rng).unwrap();
            let fiber = gauss_space(&e.cubic, &w).unwrap();
            let grad = e.cubic.contract2(&w, &w).unwrap();
            // Gamma_w lies inside the tangent hyperplane
            for v in &fiber.gamma_basis {
                assert!(grad.apply(v).is_zero());
            }
            // fiber constancy: a generic element of Gamma_w off the singular
            // locus has gradient proportional to the gradient at w
            let mut v = zero_vec(9);
            for (t, b) in fiber.gamma_basis.iter().enumerate() {
                crate::linalg::add_scaled(&mut v, &rat(t as i64 + 1), b);
            }
            if !is_singular_point(&e.cubic, &v) {
                let gv = e.cubic.contract2(&v, &v).unwrap().coords;
                // proportionality: all 2x2 minors with grad vanish
                for i in 0..9 {
                    for j in i + 1..9 {
                        assert!(
                            (&gv[i] * &grad.coords[j] - &gv[j] * &grad.coords[i]).is_zero()
                        );
                    }
                }
            }
        }
    }
}

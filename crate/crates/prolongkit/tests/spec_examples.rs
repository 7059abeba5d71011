//! Cross-module example pins: concrete values checked against independent
//! routes (hand-expanded formulas, explicit embeddings, stabilizer
//! membership), complementing the per-module unit tests.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prolongkit::aut::{character_of_action, compute_aut, stabilizer_of_singular_ideal};
use prolongkit::catalog::{build, embed_mat3, CatalogName};
use prolongkit::gauss::{null_space, restricted_singular_quadric};
use prolongkit::jordan::{self, HermOct};
use prolongkit::linalg::{Matrix, SpanSolver};
use prolongkit::octonion::Octonion;
use prolongkit::prolong::compute_prolongation;
use prolongkit::rat::{rat, Rat};

#[test]
fn segre_hessian_nonsingular_at_identity_point() {
    let e = build(CatalogName::Segre);
    let w = embed_mat3(&Matrix::identity(3));
    let h = e.cubic.hessian_matrix(&w).unwrap();
    assert_eq!(h.rows(), 9);
    let det = h.determinant();
    assert!(!det.is_zero());
    assert_eq!(det, h.determinant_gauss());
}

#[test]
fn prolongation_slices_at_singular_points_stabilize_the_ideal() {
    let e = build(CatalogName::Veronese);
    let alg = compute_aut(&e.cubic);
    let p = compute_prolongation(&e.cubic, &alg);
    let stab = stabilizer_of_singular_ideal(&e.cubic);
    let flats: Vec<Vec<Rat>> = stab.basis.iter().map(|m| m.flatten()).collect();
    let span = SpanSolver::new(&flats);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let w = e.sample_singular(&mut rng);
        for a in &p.basis {
            let slice = a.slice(&w).unwrap();
            assert!(span.coords(&slice.flatten()).is_some());
        }
    }
}

#[test]
fn quadric_restricted_to_a_null_subspace_vanishes() {
    let e = build(CatalogName::Veronese);
    // direction u with a nontrivial null space for f_u
    let mut u = vec![rat(0); 6];
    u[0] = rat(1); // the matrix E_00
    let null = null_space(&e.cubic, &u).unwrap();
    assert!(!null.is_empty());
    let q = restricted_singular_quadric(&e.cubic, &null, &u).unwrap();
    assert!(q.matrix.is_zero());
}

#[test]
fn identity_lies_in_every_oracle_span_with_character_three() {
    for name in CatalogName::ALL {
        let entry = build(name);
        let id = Matrix::identity(entry.dim_w);
        assert_eq!(
            character_of_action(&entry.cubic, &id).unwrap(),
            rat(3),
            "{name}"
        );
        let flats: Vec<Vec<Rat>> = entry.oracle_action().iter().map(|m| m.flatten()).collect();
        let span = SpanSolver::new(&flats);
        assert!(span.coords(&id.flatten()).is_some(), "{name}");
    }
}

#[test]
fn octonion_norm_polynomial_matches_independent_evaluator() {
    // independent oracle: evaluate the norm through octonion arithmetic
    // (products, conjugation, trace) instead of the polarized tensor
    let e = build(CatalogName::Octonion);
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let w: Vec<Rat> = (0..jordan::DIM)
            .map(|_| rat(rng.gen_range(-5i64..=5)))
            .collect();
        let h = HermOct::from_coords(&w);
        let [a, b, c] = &h.off;
        let oracle = &h.diag[0] * &h.diag[1] * &h.diag[2]
            - &h.diag[0] * a.norm()
            - &h.diag[1] * b.norm()
            - &h.diag[2] * c.norm()
            + a.mul(b).mul(c).trace();
        assert_eq!(e.cubic.eval_cubic(&w).unwrap(), oracle);
    }
    // and the multiplicative unit evaluates like the scalar unit
    let one = Octonion::one();
    assert_eq!(one.norm(), Rat::one());
}

#[test]
fn catalog_dimensions_match_the_family_sweep() {
    use prolongkit::hss::{hss_secant_dim, FamilySpec};
    let points = [
        (CatalogName::Veronese, FamilySpec::VeroneseIII { n: 3 }),
        (CatalogName::Segre, FamilySpec::SegreI { a: 3, b: 3 }),
        (CatalogName::Grassmannian, FamilySpec::PlueckerII { n: 6 }),
        (CatalogName::Octonion, FamilySpec::OctonionVI),
    ];
    for (name, spec) in points {
        let entry = build(name);
        let dims = hss_secant_dim(spec).unwrap();
        assert!(dims.is_hypersurface(), "{name}");
        assert_eq!(entry.severi_dim as i64, dims.variety_dim, "{name}");
        assert_eq!(entry.sec_dim as i64, dims.secant_dim, "{name}");
        assert_eq!(entry.dim_w as i64 - 1, dims.ambient_dim, "{name}");
    }
}

#[test]
fn polarization_reproduces_the_polynomials_at_50_random_points() {
    use prolongkit::catalog::{embed_skew, embed_sym};
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let mut rand_mat = |r: usize, c: usize| {
        Matrix::from_rows(
            (0..r)
                .map(|_| (0..c).map(|_| rat(rng.gen_range(-6i64..=6))).collect())
                .collect(),
        )
    };
    let veronese = build(CatalogName::Veronese);
    let segre = build(CatalogName::Segre);
    let grass = build(CatalogName::Grassmannian);
    for _ in 0..50 {
        // symmetric determinant
        let g = rand_mat(3, 3);
        let sym = g.add(&g.transpose());
        assert_eq!(
            veronese.cubic.eval_cubic(&embed_sym(&sym)).unwrap(),
            sym.determinant()
        );
        // full determinant
        let m = rand_mat(3, 3);
        assert_eq!(
            segre.cubic.eval_cubic(&embed_mat3(&m)).unwrap(),
            m.determinant()
        );
        // Pfaffian, via Pf^2 = det on skew matrices
        let s = rand_mat(6, 6);
        let skew = s.sub(&s.transpose());
        let pf = grass.cubic.eval_cubic(&embed_skew(&skew)).unwrap();
        assert_eq!(&pf * &pf, skew.determinant());
    }
}

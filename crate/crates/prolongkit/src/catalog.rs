//! The four catalog cubics: symmetric 3x3 determinant, 3x3 determinant,
//! 6x6 Pfaffian, and the 27-variable octonion norm cubic.
//!
//! Each entry carries its cubic form (built through `polarize`, so cone
//! evaluation reproduces the defining polynomial exactly), samplers for
//! random rational points of the singular cone and of the smooth part of the
//! cubic cone, an independent oracle family of infinitesimal symmetries, and
//! a small inventory of exact linear automorphisms used by equivariance
//! tests. Expected solver dimensions are stored alongside and certified by
//! the test suite in two independent ways.

use rand::Rng;

use crate::error::{Error, Result};
use crate::jordan::{self, HermOct};
use crate::linalg::Matrix;
use crate::multilinear::{CubicForm, Monomial};
use crate::octonion::Octonion;
use crate::rat::{rat, Rat};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogName {
    Veronese,
    Segre,
    Grassmannian,
    Octonion,
}

impl CatalogName {
    pub const ALL: [CatalogName; 4] = [
        CatalogName::Veronese,
        CatalogName::Segre,
        CatalogName::Grassmannian,
        CatalogName::Octonion,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "veronese" => Ok(CatalogName::Veronese),
            "segre" => Ok(CatalogName::Segre),
            "grassmannian" => Ok(CatalogName::Grassmannian),
            "octonion" => Ok(CatalogName::Octonion),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::Veronese => "veronese",
            CatalogName::Segre => "segre",
            CatalogName::Grassmannian => "grassmannian",
            CatalogName::Octonion => "octonion",
        }
    }
}

impl std::fmt::Display for CatalogName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One catalog cubic with its expected solver dimensions.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: CatalogName,
    pub dim_w: usize,
    pub cubic: CubicForm,
    pub expected_aut_dim: usize,
    pub expected_prolongation_dim: usize,
    pub severi_dim: usize,
    pub sec_dim: usize,
}

pub fn build(name: CatalogName) -> CatalogEntry {
    match name {
        CatalogName::Veronese => CatalogEntry {
            name,
            dim_w: 6,
            cubic: CubicForm::polarize(6, &sym_det_monomials()).expect("nonzero"),
            // image of gl(3) acting by X -> aX + Xa^T
            expected_aut_dim: 9,
            expected_prolongation_dim: 6,
            severi_dim: 2,
            sec_dim: 4,
        },
        CatalogName::Segre => CatalogEntry {
            name,
            dim_w: 9,
            cubic: CubicForm::polarize(9, &det3_monomials()).expect("nonzero"),
            // gl(3) + gl(3) acting by X -> aX + Xb, common scalar counted once
            expected_aut_dim: 17,
            expected_prolongation_dim: 9,
            severi_dim: 4,
            sec_dim: 7,
        },
        CatalogName::Grassmannian => CatalogEntry {
            name,
            dim_w: 15,
            cubic: CubicForm::polarize(15, &pfaffian_monomials()).expect("nonzero"),
            // the induced gl(6) action on 2-vectors embeds faithfully:
            // scalars + the traceless part, 1 + 35
            expected_aut_dim: 36,
            expected_prolongation_dim: 15,
            severi_dim: 8,
            sec_dim: 13,
        },
        CatalogName::Octonion => CatalogEntry {
            name,
            dim_w: 27,
            cubic: CubicForm::polarize(27, &jordan::norm_monomials()).expect("nonzero"),
            // multiplication operators + their commutators: 27 + 52
            expected_aut_dim: 79,
            expected_prolongation_dim: 27,
            severi_dim: 16,
            sec_dim: 25,
        },
    }
}

// ---------------------------------------------------------------------------
// coordinates
// ---------------------------------------------------------------------------

/// Index of `(i, j)`, `i <= j < 3`, in the 6 symmetric-matrix coordinates.
pub fn sym_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    [[0, 1, 2], [1, 3, 4], [2, 4, 5]][i][j]
}

/// Index of `(i, j)`, `i < j < 6`, in the 15 alternating coordinates.
pub fn skew_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 6);
    let mut idx = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            if (a, b) == (i, j) {
                return idx;
            }
            idx += 1;
        }
    }
    unreachable!()
}

/// Embeds a symmetric 3x3 matrix into the 6 veronese coordinates.
pub fn embed_sym(m: &Matrix) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); 6];
    for i in 0..3 {
        for j in i..3 {
            v[sym_index(i, j)] = m.get(i, j);
        }
    }
    v
}

/// Embeds a 3x3 matrix into the 9 segre coordinates (row-major).
pub fn embed_mat3(m: &Matrix) -> Vec<Rat> {
    (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| m.get(i, j)).collect()
}

/// Embeds a skew 6x6 matrix into the 15 alternating coordinates.
pub fn embed_skew(m: &Matrix) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); 15];
    for i in 0..6 {
        for j in i + 1..6 {
            v[skew_index(i, j)] = m.get(i, j);
        }
    }
    v
}

fn sym_basis_matrix(k: usize) -> Matrix {
    let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let (i, j) = pairs[k];
    let mut m = Matrix::zero(3, 3);
    m.set(i, j, rat(1));
    m.set(j, i, rat(1));
    m
}

fn skew_basis_matrix(k: usize) -> Matrix {
    let mut idx = 0;
    for i in 0..6 {
        for j in i + 1..6 {
            if idx == k {
                let mut m = Matrix::zero(6, 6);
                m.set(i, j, rat(1));
                m.set(j, i, rat(-1));
                return m;
            }
            idx += 1;
        }
    }
    unreachable!()
}

// ---------------------------------------------------------------------------
// defining polynomials
// ---------------------------------------------------------------------------

const PERMS3: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([0, 2, 1], -1),
    ([1, 0, 2], -1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([2, 1, 0], -1),
];

fn det_monomials(var_of: impl Fn(usize, usize) -> usize, n_vars: usize) -> Vec<Monomial> {
    PERMS3
        .iter()
        .map(|(sigma, sign)| {
            let mut exps = vec![0u32; n_vars];
            for (i, &si) in sigma.iter().enumerate() {
                exps[var_of(i, si)] += 1;
            }
            Monomial {
                exps,
                coeff: rat(*sign),
            }
        })
        .collect()
}

fn sym_det_monomials() -> Vec<Monomial> {
    det_monomials(sym_index, 6)
}

fn det3_monomials() -> Vec<Monomial> {
    det_monomials(|i, j| 3 * i + j, 9)
}

/// Pfaffian of the generic 6x6 alternating matrix, by recursive expansion
/// along the first remaining row.
fn pfaffian_monomials() -> Vec<Monomial> {
    fn expand(indices: &[usize], sign: i64, picked: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if indices.is_empty() {
            let mut exps = vec![0u32; 15];
            for &v in picked.iter() {
                exps[v] += 1;
            }
            out.push(Monomial {
                exps,
                coeff: rat(sign),
            });
            return;
        }
        let a = indices[0];
        for t in 1..indices.len() {
            let b = indices[t];
            let s = if t % 2 == 1 { sign } else { -sign };
            let rest: Vec<usize> = indices[1..]
                .iter()
                .copied()
                .filter(|&x| x != b)
                .collect();
            picked.push(skew_index(a, b));
            expand(&rest, s, picked, out);
            picked.pop();
        }
    }
    let mut out = Vec::new();
    expand(&[0, 1, 2, 3, 4, 5], 1, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------------

fn rand_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-9i64..=9))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn rand_oct<R: Rng>(rng: &mut R) -> Octonion {
    Octonion(std::array::from_fn(|_| rat(rng.gen_range(-4i64..=4))))
}

impl CatalogEntry {
    /// Random rational point of the singular cone. Always an exact singular
    /// point: rank-one symmetric `v v^T`, rank-one `u v^T`, a decomposable
    /// 2-vector `u ∧ v`, or a rank-one hermitian octonion matrix.
    pub fn sample_singular<R: Rng>(&self, rng: &mut R) -> Vec<Rat> {
        loop {
            let w = match self.name {
                CatalogName::Veronese => {
                    let v = rand_vec(rng, 3);
                    let col = Matrix::from_rows(vec![v]).transpose();
                    embed_sym(&col.mat_mul(&col.transpose()))
                }
                CatalogName::Segre => {
                    let u = Matrix::from_rows(vec![rand_vec(rng, 3)]).transpose();
                    let v = Matrix::from_rows(vec![rand_vec(rng, 3)]);
                    embed_mat3(&u.mat_mul(&v))
                }
                CatalogName::Grassmannian => {
                    let u = Matrix::from_rows(vec![rand_vec(rng, 6)]).transpose();
                    let v = Matrix::from_rows(vec![rand_vec(rng, 6)]).transpose();
                    let m = u
                        .mat_mul(&v.transpose())
                        .sub(&v.mat_mul(&u.transpose()));
                    embed_skew(&m)
                }
                CatalogName::Octonion => {
                    let s = rat(rng.gen_range(1i64..=4) * if rng.gen_bool(0.5) { 1 } else { -1 });
                    HermOct::rank_one(&s, &rand_oct(rng), &rand_oct(rng)).to_coords()
                }
            };
            if w.iter().any(|x| !x.is_zero()) {
                debug_assert!(self
                    .cubic
                    .contract2(&w, &w)
                    .expect("dims match")
                    .is_zero());
                return w;
            }
        }
    }

    /// Random rational smooth point of the cubic cone: the sum of two
    /// independent singular samples, redrawn until the smoothness predicate
    /// (nonvanishing gradient) holds exactly.
    pub fn sample_smooth_on_y<R: Rng>(&self, rng: &mut R) -> Result<Vec<Rat>> {
        const TRIES: usize = 64;
        for _ in 0..TRIES {
            let p = self.sample_singular(rng);
            let q = self.sample_singular(rng);
            let w: Vec<Rat> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
            if !self.cubic.eval_cubic(&w)?.is_zero() {
                continue; // not on the cone (cannot happen for these cubics)
            }
            if !self.cubic.contract2(&w, &w)?.is_zero() {
                return Ok(w);
            }
        }
        Err(Error::RetryExhausted(TRIES))
    }

    /// Independent family of infinitesimal symmetries, used as the oracle
    /// against the linear solver. Every element satisfies the symmetry
    /// identity exactly; the span dimension is certified by row reduction.
    pub fn oracle_action(&self) -> Vec<Matrix> {
        match self.name {
            CatalogName::Veronese => {
                let mut out = Vec::new();
                for p in 0..3 {
                    for q in 0..3 {
                        let mut a = Matrix::zero(3, 3);
                        a.set(p, q, rat(1));
                        out.push(matrix_space_action(6, sym_basis_matrix, embed_sym, |m| {
                            a.mat_mul(m).add(&m.mat_mul(&a.transpose()))
                        }));
                    }
                }
                out
            }
            CatalogName::Segre => {
                let mut out = Vec::new();
                let basis = |k: usize| {
                    let mut m = Matrix::zero(3, 3);
                    m.set(k / 3, k % 3, rat(1));
                    m
                };
                for p in 0..3 {
                    for q in 0..3 {
                        let mut a = Matrix::zero(3, 3);
                        a.set(p, q, rat(1));
                        out.push(matrix_space_action(9, basis, embed_mat3, |m| a.mat_mul(m)));
                        out.push(matrix_space_action(9, basis, embed_mat3, |m| m.mat_mul(&a)));
                    }
                }
                out
            }
            CatalogName::Grassmannian => {
                let mut out = Vec::new();
                for p in 0..6 {
                    for q in 0..6 {
                        let mut a = Matrix::zero(6, 6);
                        a.set(p, q, rat(1));
                        out.push(matrix_space_action(15, skew_basis_matrix, embed_skew, |m| {
                            a.mat_mul(m).add(&m.mat_mul(&a.transpose()))
                        }));
                    }
                }
                out
            }
            CatalogName::Octonion => {
                let mults: Vec<Matrix> = (0..27)
                    .map(|k| jordan::mult_operator(&HermOct::basis(k)))
                    .collect();
                let mut out = mults.clone();
                for i in 0..mults.len() {
                    for j in i + 1..mults.len() {
                        out.push(mults[i].commutator(&mults[j]));
                    }
                }
                out
            }
        }
    }

    /// A small inventory of exact invertible linear maps preserving the cubic
    /// up to a scalar, for equivariance tests.
    pub fn explicit_automorphisms(&self) -> Vec<Matrix> {
        match self.name {
            CatalogName::Veronese => {
                small_gl3().iter()
                    .map(|p| {
                        matrix_space_action(6, sym_basis_matrix, embed_sym, |m| {
                            p.mat_mul(m).mat_mul(&p.transpose())
                        })
                    })
                    .collect()
            }
            CatalogName::Segre => {
                let basis = |k: usize| {
                    let mut m = Matrix::zero(3, 3);
                    m.set(k / 3, k % 3, rat(1));
                    m
                };
                let gl3 = small_gl3();
                let mut out = Vec::new();
                for (p, q) in [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2)] {
                    let (gp, gq) = (&gl3[p], &gl3[q]);
                    out.push(matrix_space_action(9, basis, embed_mat3, |m| {
                        gp.mat_mul(m).mat_mul(&gq.transpose())
                    }));
                }
                out
            }
            CatalogName::Grassmannian => small_gl6()
                .iter()
                .map(|p| {
                    matrix_space_action(15, skew_basis_matrix, embed_skew, |m| {
                        p.mat_mul(m).mat_mul(&p.transpose())
                    })
                })
                .collect(),
            CatalogName::Octonion => octonion_automorphisms(),
        }
    }
}

/// Matrix of a linear operator on a matrix space, written in the given
/// coordinate basis.
fn matrix_space_action(
    dim: usize,
    basis: impl Fn(usize) -> Matrix,
    embed: impl Fn(&Matrix) -> Vec<Rat>,
    op: impl Fn(&Matrix) -> Matrix,
) -> Matrix {
    let mut triplets = Vec::new();
    for k in 0..dim {
        let col = embed(&op(&basis(k)));
        for (r, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                triplets.push((r, k, v));
            }
        }
    }
    Matrix::from_triplets(dim, dim, triplets)
}

fn small_gl3() -> Vec<Matrix> {
    vec![
        Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
        Matrix::from_i64(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]]),
        Matrix::from_i64(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]),
        Matrix::from_i64(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]),
    ]
}

fn small_gl6() -> Vec<Matrix> {
    let mut shear = Matrix::identity(6);
    shear.set(0, 3, rat(1));
    let mut perm = Matrix::zero(6, 6);
    for i in 0..6 {
        perm.set(i, (i + 1) % 6, rat(1));
    }
    let mut diag = Matrix::identity(6);
    diag.set(2, 2, rat(3));
    let mut swap = Matrix::identity(6);
    swap.set(4, 4, rat(0));
    swap.set(5, 5, rat(0));
    swap.set(4, 5, rat(1));
    swap.set(5, 4, rat(1));
    vec![shear, perm, diag, swap, Matrix::identity(6).scale(&rat(2))]
}

/// Exact symmetries of the 27-variable norm cubic: the cyclic rotation of
/// the three hermitian slots, two sign patterns on off-diagonal slots, the
/// squared rotation, and a global scaling.
fn octonion_automorphisms() -> Vec<Matrix> {
    let n = jordan::DIM;
    let cyclic = {
        let mut m = Matrix::zero(n, n);
        m.set(0, 1, rat(1));
        m.set(1, 2, rat(1));
        m.set(2, 0, rat(1));
        for i in 0..8 {
            m.set(3 + i, 11 + i, rat(1)); // new a = old b
            m.set(11 + i, 19 + i, rat(1)); // new b = old c
            m.set(19 + i, 3 + i, rat(1)); // new c = old a
        }
        m
    };
    let flip_ab = {
        let mut m = Matrix::identity(n);
        for i in 0..8 {
            m.set(3 + i, 3 + i, rat(-1));
            m.set(11 + i, 11 + i, rat(-1));
        }
        m
    };
    let flip_bc = {
        let mut m = Matrix::identity(n);
        for i in 0..8 {
            m.set(11 + i, 11 + i, rat(-1));
            m.set(19 + i, 19 + i, rat(-1));
        }
        m
    };
    let cyclic2 = cyclic.mat_mul(&cyclic);
    let scale2 = Matrix::identity(n).scale(&rat(2));
    vec![cyclic, cyclic2, flip_ab, flip_bc, scale2]
}

//! First prolongation of the symmetry algebra.
//!
//! A symmetric bilinear map `A: S^2 W -> W` is a prolongation element when
//! every slice `A_w: u -> A(w, u)` lies in the symmetry algebra. Two solvers
//! are provided. The two-stage solver parametrizes each basis slice
//! `A_{e_i} = sum_a x_{i a} phi_a` over the computed algebra basis and
//! imposes the symmetry constraints `A_{e_i}(e_j) = A_{e_j}(e_i)`; it
//! proceeds block by block, extending the solution space one slice direction
//! at a time, so the full constraint system is never materialized (the
//! monolithic system has ~10^4 unknowns in the 27-variable case, while every
//! incremental step stays a few hundred columns wide). The one-stage solver
//! works directly in `Hom(S^2 W, W) + W^*` and is kept as an independent
//! oracle for small dimensions.

use num_traits::{One, Zero};

use crate::aut::LieAlgebraResult;
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, row_space_eq, zero_vec, Matrix};
use crate::multilinear::{n_pairs, pair_index, CubicForm, LinearFunctional, SymBilinearMap};
use crate::rat::Rat;

/// Default dimension cap of the one-stage solver.
pub const NAIVE_DIM_CAP: usize = 9;

/// Basis of the first prolongation with the per-element characters.
#[derive(Debug, Clone)]
pub struct ProlongationBasis {
    pub dim_w: usize,
    pub basis: Vec<SymBilinearMap>,
    /// `characters[k](w) = chi(A_w)` for `basis[k]`.
    pub characters: Vec<LinearFunctional>,
}

impl ProlongationBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the map sending the basis to its characters. Injectivity
    /// (full rank) holds for every cubic with nonzero Hessian.
    pub fn character_rank(&self) -> usize {
        if self.basis.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<Rat>> = self
            .characters
            .iter()
            .map(|l| l.coords.clone())
            .collect();
        Matrix::from_rows(rows).rank()
    }

    /// Flattened basis rows for subspace comparisons.
    pub fn flat_rows(&self) -> Vec<Vec<Rat>> {
        self.basis.iter().map(|a| a.flatten()).collect()
    }
}

/// Whether two prolongation results span the same subspace of
/// `Hom(S^2 W, W)` (after canonical row reduction).
pub fn same_span(a: &ProlongationBasis, b: &ProlongationBasis) -> bool {
    if a.basis.is_empty() && b.basis.is_empty() {
        return true;
    }
    if a.basis.is_empty() != b.basis.is_empty() {
        return false;
    }
    row_space_eq(&a.flat_rows(), &b.flat_rows())
}

/// Two-stage solver: slices constrained to the computed symmetry algebra,
/// then symmetric completion, extended one basis direction at a time.
pub fn compute_prolongation(f: &CubicForm, alg: &LieAlgebraResult) -> ProlongationBasis {
    let n = f.dim();
    let m = alg.dim();
    assert_eq!(alg.dim_w, n, "algebra does not match the form");
    if m == 0 {
        return ProlongationBasis {
            dim_w: n,
            basis: Vec::new(),
            characters: Vec::new(),
        };
    }
    // V_i: n x m, column a = phi_a(e_i)
    let slices: Vec<Matrix> = (0..n)
        .map(|i| {
            let mut triplets = Vec::new();
            for (a, phi) in alg.basis.iter().enumerate() {
                for r in 0..n {
                    let v = phi.get(r, i);
                    if !v.is_zero() {
                        triplets.push((r, a, v));
                    }
                }
            }
            Matrix::from_triplets(n, m, triplets)
        })
        .collect();

    // solutions over the first k blocks, each a vector in Q^{k m}
    let mut sols: Vec<Vec<Rat>> = (0..m)
        .map(|a| {
            let mut v = zero_vec(m);
            v[a] = Rat::one();
            v
        })
        .collect();
    for k in 1..n {
        let d = sols.len();
        if d == 0 {
            break;
        }
        // images V_k * x_i^{(t)} for every solution t and block i < k
        let mut images: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(d);
        for sol in &sols {
            let per_block: Vec<Vec<Rat>> = (0..k)
                .map(|i| slices[k].mul_vec(&sol[i * m..(i + 1) * m]))
                .collect();
            images.push(per_block);
        }
        // unknowns: (c_0..c_{d-1}, y_0..y_{m-1}); rows: n per earlier block
        let mut triplets = Vec::new();
        for i in 0..k {
            for r in 0..n {
                let row = i * n + r;
                for (t, img) in images.iter().enumerate() {
                    let v = &img[i][r];
                    if !v.is_zero() {
                        triplets.push((row, t, v.clone()));
                    }
                }
                for a in 0..m {
                    let v = slices[i].get(r, a);
                    if !v.is_zero() {
                        triplets.push((row, d + a, -v));
                    }
                }
            }
        }
        let system = Matrix::from_triplets(k * n, d + m, triplets);
        let kernel = system.kernel_basis();
        let mut next = Vec::with_capacity(kernel.len());
        for vec in kernel {
            let (c, y) = vec.split_at(d);
            let mut sol = zero_vec((k + 1) * m);
            for (t, ct) in c.iter().enumerate() {
                if !ct.is_zero() {
                    add_scaled(&mut sol[..k * m], ct, &sols[t]);
                }
            }
            sol[k * m..].clone_from_slice(y);
            next.push(sol);
        }
        sols = next;
    }

    // canonical form
    let sols = if sols.is_empty() {
        sols
    } else {
        let (rref, pivots) = Matrix::from_rows(sols).rref();
        (0..pivots.len()).map(|i| rref.dense_row(i)).collect()
    };

    basis_from_slice_coords(f, alg, &slices, &sols)
}

fn basis_from_slice_coords(
    f: &CubicForm,
    alg: &LieAlgebraResult,
    slices: &[Matrix],
    sols: &[Vec<Rat>],
) -> ProlongationBasis {
    let n = f.dim();
    let m = alg.dim();
    let mut basis = Vec::with_capacity(sols.len());
    let mut characters = Vec::with_capacity(sols.len());
    for sol in sols {
        let mut a = SymBilinearMap::zero(n);
        let mut chi = LinearFunctional::zero(n);
        for i in 0..n {
            let xi = &sol[i * m..(i + 1) * m];
            chi.coords[i] = crate::linalg::dot(xi, &alg.characters);
            for j in i..n {
                let value = slices[j].mul_vec(xi);
                debug_assert_eq!(value, slices[i].mul_vec(&sol[j * m..(j + 1) * m]));
                a.set_basis_value(i, j, value);
            }
        }
        basis.push(a);
        characters.push(chi);
    }
    ProlongationBasis {
        dim_w: n,
        basis,
        characters,
    }
}

/// One-stage solver directly in `Hom(S^2 W, W) + W^*`, equations indexed by
/// `(w; u <= v <= s)`. Independent oracle for dimensions up to `cap`.
pub fn compute_prolongation_naive(f: &CubicForm, cap: usize) -> Result<ProlongationBasis> {
    let n = f.dim();
    if n > cap {
        return Err(Error::SizeLimit { dim: n, cap });
    }
    let np = n_pairs(n);
    let a_col = |i: usize, j: usize, r: usize| pair_index(n, i, j) * n + r;
    let chi_col = |h: usize| np * n + h;
    let mut triplets: Vec<(usize, usize, Rat)> = Vec::new();
    let mut row = 0usize;
    for h in 0..n {
        for j in 0..n {
            for k in j..n {
                for l in k..n {
                    for r in 0..n {
                        // f(A_{hj}, e_k, e_l) + f(e_j, A_{hk}, e_l) + f(e_j, e_k, A_{hl})
                        for (key, pair) in [
                            ([r, k, l], (h, j)),
                            ([j, r, l], (h, k)),
                            ([j, k, r], (h, l)),
                        ] {
                            let coef = f.tensor_value(key[0], key[1], key[2]);
                            if !coef.is_zero() {
                                triplets.push((row, a_col(pair.0, pair.1, r), coef));
                            }
                        }
                    }
                    let c = f.tensor_value(j, k, l);
                    if !c.is_zero() {
                        triplets.push((row, chi_col(h), -c));
                    }
                    row += 1;
                }
            }
        }
    }
    let system = Matrix::from_triplets(row, np * n + n, triplets);
    let kernel = system.kernel_basis();
    let mut basis = Vec::with_capacity(kernel.len());
    let mut characters = Vec::with_capacity(kernel.len());
    for v in kernel {
        basis.push(SymBilinearMap::from_flat(n, &v[..np * n]));
        characters.push(LinearFunctional {
            coords: v[np * n..].to_vec(),
        });
    }
    Ok(ProlongationBasis {
        dim_w: n,
        basis,
        characters,
    })
}

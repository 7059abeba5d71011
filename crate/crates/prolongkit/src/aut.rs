//! The Lie algebra of infinitesimal linear symmetries of a cubic cone.
//!
//! An endomorphism `phi` is a symmetry of the cone of `f` when
//! `f(phi u, v, w) + f(u, phi v, w) + f(u, v, phi w) = chi(phi) f(u, v, w)`
//! for all `u, v, w` and some scalar `chi(phi)`. The solver treats `chi` as
//! one extra unknown so the character comes out of the kernel directly.
//! Equations are indexed by sorted basis triples only; the identity is
//! symmetric in its three arguments, and the post-hoc verifier re-checks
//! every (unsorted) triple through the transformed-tensor comparison.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanSolver};
use crate::multilinear::CubicForm;
use crate::rat::Rat;

/// Basis of the symmetry algebra together with the character values.
#[derive(Debug, Clone)]
pub struct LieAlgebraResult {
    pub dim_w: usize,
    pub basis: Vec<Matrix>,
    /// `characters[k]` is the scalar attached to `basis[k]`.
    pub characters: Vec<Rat>,
}

impl LieAlgebraResult {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Span solver over the flattened basis endomorphisms.
    pub fn span_solver(&self) -> SpanSolver {
        let flats: Vec<Vec<Rat>> = self.basis.iter().map(|m| m.flatten()).collect();
        SpanSolver::new(&flats)
    }

    pub fn character_from_coords(&self, coords: &[Rat]) -> Rat {
        crate::linalg::dot(coords, &self.characters)
    }

    /// The unique scalar `chi(phi)` for `phi` in the span of the basis,
    /// extended linearly from the basis values.
    pub fn character_of(&self, phi: &Matrix) -> Result<Rat> {
        let solver = self.span_solver();
        let coords = solver.flat_coords(phi).ok_or(Error::NotInAlgebra)?;
        Ok(self.character_from_coords(&coords))
    }
}

impl SpanSolver {
    /// Coordinates of an endomorphism in a span of flattened endomorphisms.
    pub fn flat_coords(&self, phi: &Matrix) -> Option<Vec<Rat>> {
        self.coords(&phi.flatten())
    }
}

/// Unknown layout for the solver: `phi` entries row-major, then `chi`.
fn phi_col(n: usize, p: usize, q: usize) -> usize {
    p * n + q
}

/// Computes the symmetry algebra of the cone of `f`.
pub fn compute_aut(f: &CubicForm) -> LieAlgebraResult {
    let n = f.dim();
    let chi_col = n * n;
    let mut triplets: Vec<(usize, usize, Rat)> = Vec::new();
    let mut row = 0usize;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                for p in 0..n {
                    // f(phi e_i, e_j, e_k): the unknown phi_{p,i} carries f(p,j,k),
                    // and cyclically for the other two slots
                    for (key, q) in [([p, j, k], i), ([i, p, k], j), ([i, j, p], k)] {
                        let coef = f.tensor_value(key[0], key[1], key[2]);
                        if !coef.is_zero() {
                            triplets.push((row, phi_col(n, p, q), coef));
                        }
                    }
                }
                let c = f.tensor_value(i, j, k);
                if !c.is_zero() {
                    triplets.push((row, chi_col, -c));
                }
                row += 1;
            }
        }
    }
    let system = Matrix::from_triplets(row, chi_col + 1, triplets);
    let kernel = system.kernel_basis();
    let mut basis = Vec::with_capacity(kernel.len());
    let mut characters = Vec::with_capacity(kernel.len());
    for v in kernel {
        basis.push(Matrix::from_flat(n, n, &v[..chi_col]));
        characters.push(v[chi_col].clone());
    }
    LieAlgebraResult {
        dim_w: n,
        basis,
        characters,
    }
}

/// The first-slot action of `phi` on the full symmetric tensor of `f`:
/// `S(q, j, k) = f(phi e_q, e_j, e_k)`, indexed by unsorted triples.
fn first_slot_tensor(f: &CubicForm, phi: &Matrix) -> BTreeMap<[usize; 3], Rat> {
    let mut out: BTreeMap<[usize; 3], Rat> = BTreeMap::new();
    for (ijk, c) in f.tensor_entries() {
        for (p, j, k) in crate::multilinear::all_permutations(ijk) {
            // replace e_p in the first slot: phi e_q hits e_p with phi_{p,q}
            for (q, v) in phi.sparse_row(p) {
                let slot = out.entry([*q, j, k]).or_insert_with(Rat::zero);
                *slot += c * v;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Exact check of the symmetry identity at every basis triple (not only the
/// sorted ones the solver used).
pub fn satisfies_symmetry_identity(f: &CubicForm, phi: &Matrix, chi: &Rat) -> bool {
    character_of_action(f, phi).is_some_and(|c| &c == chi)
}

/// The scalar `chi` with
/// `f(phi u, v, w) + f(u, phi v, w) + f(u, v, phi w) = chi f(u, v, w)`
/// for all basis triples, if one exists. Both sides vanish outside the union
/// of the supports of `f` and of the first-slot action, so comparing on that
/// union covers every triple.
pub fn character_of_action(f: &CubicForm, phi: &Matrix) -> Option<Rat> {
    let s = first_slot_tensor(f, phi);
    let value_s = |a: usize, b: usize, c: usize| {
        s.get(&[a, b, c]).cloned().unwrap_or_else(Rat::zero)
    };
    let lhs = |a: usize, b: usize, c: usize| {
        value_s(a, b, c) + value_s(b, a, c) + value_s(c, a, b)
    };
    // collect every index multiset where either side could be nonzero
    let mut multisets: std::collections::BTreeSet<[usize; 3]> = BTreeMap::keys(&s)
        .map(|k| {
            let mut t = *k;
            t.sort_unstable();
            t
        })
        .collect();
    multisets.extend(f.tensor_entries().map(|(k, _)| *k));
    // chi from the first nonzero entry of f
    let (ijk0, c0) = f.tensor_entries().next().expect("nonzero form");
    let chi = lhs(ijk0[0], ijk0[1], ijk0[2]) / c0;
    for ijk in &multisets {
        let want = &chi * f.tensor_value(ijk[0], ijk[1], ijk[2]);
        for (a, b, c) in crate::multilinear::all_permutations(ijk) {
            if lhs(a, b, c) != want {
                return None;
            }
        }
    }
    Some(chi)
}

/// Closure under bracket: every commutator of basis elements must solve the
/// same system with character zero and lie in the computed span.
pub fn verify_bracket_closure(f: &CubicForm, alg: &LieAlgebraResult) -> bool {
    let solver = alg.span_solver();
    for a in 0..alg.basis.len() {
        for b in a + 1..alg.basis.len() {
            let bracket = alg.basis[a].commutator(&alg.basis[b]);
            let Some(coords) = solver.flat_coords(&bracket) else {
                return false;
            };
            if !alg.character_from_coords(&coords).is_zero() {
                return false;
            }
            if !satisfies_symmetry_identity(f, &bracket, &Rat::zero()) {
                return false;
            }
        }
    }
    true
}

/// Result of the singular-ideal stabilizer solve: endomorphisms whose action
/// sends every gradient quadric back into the span of gradient quadrics,
/// together with the induced coefficient matrix on the quadric space.
#[derive(Debug, Clone)]
pub struct IdealStabilizer {
    pub dim_w: usize,
    pub basis: Vec<Matrix>,
    /// `quadric_action[k][u][v]`: the action of `basis[k]` writes the
    /// transformed quadric of direction `u` as a combination of the gradient
    /// quadrics with these coefficients.
    pub quadric_action: Vec<Matrix>,
}

/// Infinitesimal stabilizer of the degree-two part of the singular-locus
/// ideal: all `phi` such that for every direction `u`, the quadric
/// `w -> 2 f(phi w, w, u)` lies in the span of the gradient quadrics
/// `w -> f(w, w, v)`.
///
/// The combination coefficients are eliminated analytically: the condition
/// "lies in the span" becomes "reduces to zero against the row-reduced
/// gradient quadrics", which keeps the linear system in `phi` alone.
pub fn stabilizer_of_singular_ideal(f: &CubicForm) -> IdealStabilizer {
    let n = f.dim();
    let pairs = crate::multilinear::n_pairs(n);
    let pair_of = |i: usize, j: usize| crate::multilinear::pair_index(n, i, j);
    // gradient quadrics in sorted-pair coordinates
    let quadrics: Vec<Vec<Rat>> = (0..n)
        .map(|v| {
            let mut q = crate::linalg::zero_vec(pairs);
            for i in 0..n {
                for j in i..n {
                    q[pair_of(i, j)] = f.tensor_value(i, j, v);
                }
            }
            q
        })
        .collect();
    let quadric_span = SpanSolver::new(&quadrics);
    let reduction = quadric_span.residual_functionals();

    // sparse rows of the transformed quadric, per direction u and pair (i,j)
    let transformed_row = |u: usize, i: usize, j: usize| -> Vec<(usize, Rat)> {
        let mut row: BTreeMap<usize, Rat> = BTreeMap::new();
        for p in 0..n {
            let a = f.tensor_value(p, j, u);
            if !a.is_zero() {
                *row.entry(phi_col(n, p, i)).or_insert_with(Rat::zero) += a;
            }
            let b = f.tensor_value(p, i, u);
            if !b.is_zero() {
                *row.entry(phi_col(n, p, j)).or_insert_with(Rat::zero) += b;
            }
        }
        row.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    };

    let mut triplets: Vec<(usize, usize, Rat)> = Vec::new();
    let mut row_ix = 0usize;
    for u in 0..n {
        let pair_rows: Vec<Vec<(usize, Rat)>> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| transformed_row(u, i, j))
            .collect();
        for (free_pair, pivot_weights) in &reduction {
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for (col, v) in &pair_rows[*free_pair] {
                *acc.entry(*col).or_insert_with(Rat::zero) += v;
            }
            for (pivot_pair, w) in pivot_weights {
                for (col, v) in &pair_rows[*pivot_pair] {
                    *acc.entry(*col).or_insert_with(Rat::zero) += v * w;
                }
            }
            for (col, v) in acc {
                if !v.is_zero() {
                    triplets.push((row_ix, col, v));
                }
            }
            row_ix += 1;
        }
    }
    let system = Matrix::from_triplets(row_ix, n * n, triplets);
    let kernel = system.kernel_basis();

    let mut basis = Vec::with_capacity(kernel.len());
    let mut quadric_action = Vec::with_capacity(kernel.len());
    for v in kernel {
        let phi = Matrix::from_flat(n, n, &v);
        // recover the combination coefficients for the certificate
        let mut action = Matrix::zero(n, n);
        for u in 0..n {
            let mut transformed = crate::linalg::zero_vec(pairs);
            for i in 0..n {
                for j in i..n {
                    for (col, coef) in transformed_row(u, i, j) {
                        if !v[col].is_zero() {
                            transformed[pair_of(i, j)] += &v[col] * coef;
                        }
                    }
                }
            }
            let coords = quadric_span
                .coords(&transformed)
                .expect("solution reduces to zero by construction");
            for (q, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    action.set(u, q, c);
                }
            }
        }
        basis.push(phi);
        quadric_action.push(action);
    }
    IdealStabilizer {
        dim_w: n,
        basis,
        quadric_action,
    }
}

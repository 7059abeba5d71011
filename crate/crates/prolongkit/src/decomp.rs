//! Canonical decomposition of prolongation elements.
//!
//! A prolongation element `A` with character `chi` may decompose as
//!
//! ```text
//!     A(u, v) = a chi(u) v + a chi(v) u + h(f_{uv})
//! ```
//!
//! for a scalar `a` and a lift `h: W^* -> W` composed with the polar
//! contraction. The solver treats `(a, h)` as unknowns of one linear system
//! over all basis pairs, so membership, the canonical representative, and
//! uniqueness (trivial homogeneous kernel, which holds whenever the cubic
//! has nonzero Hessian) all come out of a single kernel computation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::aut::character_of_action;
use crate::error::{Error, Result};
use crate::linalg::{zero_vec, Matrix};
use crate::multilinear::{all_permutations, CubicForm, LinearFunctional, SymBilinearMap};
use crate::rat::Rat;

/// Outcome of the canonical-form solve for one prolongation element.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub member: bool,
    /// The scalar `a` (present iff member).
    pub scale: Option<Rat>,
    /// The lift `h` as an n x n matrix in the dual basis (present iff member).
    pub lift: Option<Matrix>,
    /// The character functional; its kernel is the invariant hyperplane.
    pub hyperplane: LinearFunctional,
    /// `(a, h)` is unique; fails only for degenerate input or zero Hessian.
    pub unique: bool,
    /// Zero-element convention: `A = 0` is a member with `a = 0, h = 0`.
    pub degenerate: bool,
}

/// Solves for `(a, h)` with `A(u,v) = a chi(u) v + a chi(v) u + h(f_{uv})`
/// over all basis pairs. Refuses inputs that are not prolongation elements
/// of the cone of `f` with the claimed character.
pub fn decompose(f: &CubicForm, a: &SymBilinearMap, chi: &LinearFunctional) -> Result<Decomposition> {
    let n = f.dim();
    if a.dim() != n || chi.dim() != n {
        return Err(Error::DimMismatch {
            expected: n,
            got: a.dim().max(chi.dim()),
        });
    }
    verify_prolongation(f, a, chi)?;

    if a.is_zero() {
        return Ok(Decomposition {
            member: true,
            scale: Some(Rat::zero()),
            lift: Some(Matrix::zero(n, n)),
            hyperplane: chi.clone(),
            unique: false,
            degenerate: true,
        });
    }

    // unknown layout: a | h row-major | t (homogenizing coordinate)
    let h_col = |r: usize, q: usize| 1 + r * n + q;
    let t_col = 1 + n * n;
    let mut triplets: Vec<(usize, usize, Rat)> = Vec::new();
    let mut row = 0usize;
    for i in 0..n {
        for j in i..n {
            let pairing = f.contract2_basis(i, j);
            let value = a.basis_value(i, j);
            for r in 0..n {
                let mut a_coef = Rat::zero();
                if r == j {
                    a_coef += &chi.coords[i];
                }
                if r == i {
                    a_coef += &chi.coords[j];
                }
                if !a_coef.is_zero() {
                    triplets.push((row, 0, a_coef));
                }
                for (q, v) in pairing.iter().enumerate() {
                    if !v.is_zero() {
                        triplets.push((row, h_col(r, q), v.clone()));
                    }
                }
                if !value[r].is_zero() {
                    triplets.push((row, t_col, -value[r].clone()));
                }
                row += 1;
            }
        }
    }
    let system = Matrix::from_triplets(row, t_col + 1, triplets);
    let kernel = system.kernel_basis();

    let homogeneous: Vec<&Vec<Rat>> = kernel.iter().filter(|v| v[t_col].is_zero()).collect();
    let particular = kernel.iter().find(|v| !v[t_col].is_zero());
    let unique = homogeneous.is_empty();
    match particular {
        None => Ok(Decomposition {
            member: false,
            scale: None,
            lift: None,
            hyperplane: chi.clone(),
            unique,
            degenerate: false,
        }),
        Some(v) => {
            let t = v[t_col].clone();
            let scale = &v[0] / &t;
            let mut lift = Matrix::zero(n, n);
            for r in 0..n {
                for q in 0..n {
                    let val = &v[h_col(r, q)] / &t;
                    if !val.is_zero() {
                        lift.set(r, q, val);
                    }
                }
            }
            debug_assert!(reconstructs(f, a, chi, &scale, &lift));
            Ok(Decomposition {
                member: true,
                scale: Some(scale),
                lift: Some(lift),
                hyperplane: chi.clone(),
                unique,
                degenerate: false,
            })
        }
    }
}

/// Exact residual check of the decomposition over every basis pair.
pub fn reconstructs(
    f: &CubicForm,
    a: &SymBilinearMap,
    chi: &LinearFunctional,
    scale: &Rat,
    lift: &Matrix,
) -> bool {
    let n = f.dim();
    for i in 0..n {
        for j in i..n {
            let mut expect = zero_vec(n);
            let ci = scale * &chi.coords[i];
            let cj = scale * &chi.coords[j];
            expect[j] += ci;
            expect[i] += cj;
            let pairing = f.contract2_basis(i, j);
            let lifted = lift.mul_vec(&pairing);
            for (e, l) in expect.iter_mut().zip(lifted) {
                *e += l;
            }
            if a.basis_value(i, j) != &expect[..] {
                return false;
            }
        }
    }
    true
}

/// Checks that every slice of `a` is a symmetry of the cone with character
/// matching `chi`.
fn verify_prolongation(f: &CubicForm, a: &SymBilinearMap, chi: &LinearFunctional) -> Result<()> {
    let n = f.dim();
    let mut unit = zero_vec(n);
    for i in 0..n {
        unit[i] = Rat::one();
        let slice = a.slice(&unit)?;
        unit[i] = Rat::zero();
        match character_of_action(f, &slice) {
            Some(c) if c == chi.coords[i] => {}
            Some(_) => {
                return Err(Error::NotProlongation(format!(
                    "character mismatch at slice {i}"
                )))
            }
            None => {
                return Err(Error::NotProlongation(format!(
                    "slice {i} is not a symmetry of the cone"
                )))
            }
        }
    }
    Ok(())
}

/// Subtracts the quarter-character radial terms:
/// `(u, v) -> A(u,v) - chi(u)/4 v - chi(v)/4 u`.
pub fn radial_reduction(a: &SymBilinearMap, chi: &LinearFunctional) -> SymBilinearMap {
    let n = a.dim();
    assert_eq!(chi.dim(), n);
    let quarter = Rat::new(1.into(), 4.into());
    let mut out = a.clone();
    for i in 0..n {
        for j in i..n {
            let mut v = a.basis_value(i, j).to_vec();
            v[j] -= &quarter * &chi.coords[i];
            v[i] -= &quarter * &chi.coords[j];
            out.set_basis_value(i, j, v);
        }
    }
    out
}

/// The scalar `e` with `f(gu, gv, gw) = e f(u, v, w)`, if `g` preserves the
/// cubic up to scale.
pub fn automorphism_scalar(f: &CubicForm, g: &Matrix) -> Result<Rat> {
    let n = f.dim();
    assert_eq!((g.rows(), g.cols()), (n, n));
    // transport the full tensor through g one slot at a time
    let mut tensor: BTreeMap<[usize; 3], Rat> = BTreeMap::new();
    for (ijk, c) in f.tensor_entries() {
        for (a, b, d) in all_permutations(ijk) {
            tensor.insert([a, b, d], c.clone());
        }
    }
    for slot in 0..3 {
        let mut next: BTreeMap<[usize; 3], Rat> = BTreeMap::new();
        for (key, c) in &tensor {
            let p = key[slot];
            for q in 0..n {
                let gpq = g.get(p, q);
                if gpq.is_zero() {
                    continue;
                }
                let mut new_key = *key;
                new_key[slot] = q;
                let slot_val = next.entry(new_key).or_insert_with(Rat::zero);
                *slot_val += c * gpq;
            }
        }
        next.retain(|_, v| !v.is_zero());
        tensor = next;
    }
    // tensor now holds f(g e_i, g e_j, g e_k); must equal e * f
    let (k0, c0) = f.tensor_entries().next().expect("nonzero form");
    let e = tensor.get(k0).cloned().unwrap_or_else(Rat::zero) / c0;
    if e.is_zero() {
        return Err(Error::NotAutomorphism);
    }
    let mut keys: std::collections::BTreeSet<[usize; 3]> = tensor.keys().copied().collect();
    for (ijk, _) in f.tensor_entries() {
        for (a, b, d) in all_permutations(ijk) {
            keys.insert([a, b, d]);
        }
    }
    for key in keys {
        let lhs = tensor.get(&key).cloned().unwrap_or_else(Rat::zero);
        let rhs = &e * f.tensor_value(key[0], key[1], key[2]);
        if lhs != rhs {
            return Err(Error::NotAutomorphism);
        }
    }
    Ok(e)
}

/// Transports a prolongation element along an automorphism:
/// `(g . A)(u, v) = g A(g^{-1} u, g^{-1} v)`.
pub fn transport_prolongation(
    f: &CubicForm,
    g: &Matrix,
    a: &SymBilinearMap,
) -> Result<SymBilinearMap> {
    let n = f.dim();
    automorphism_scalar(f, g)?;
    let g_inv = invert(g).ok_or(Error::NotAutomorphism)?;
    let inv_cols: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut col = zero_vec(n);
            for r in 0..n {
                col[r] = g_inv.get(r, j);
            }
            col
        })
        .collect();
    let mut out = SymBilinearMap::zero(n);
    for i in 0..n {
        for j in i..n {
            let value = a.apply(&inv_cols[i], &inv_cols[j]);
            out.set_basis_value(i, j, g.mul_vec(&value));
        }
    }
    Ok(out)
}

/// The transported character `g . chi = chi o g^{-1}`.
pub fn transport_character(g: &Matrix, chi: &LinearFunctional) -> Option<LinearFunctional> {
    let g_inv = invert(g)?;
    let mut coords = zero_vec(chi.dim());
    for (r, c) in chi.coords.iter().enumerate() {
        if !c.is_zero() {
            for (q, v) in g_inv.sparse_row(r) {
                coords[*q] += c * v;
            }
        }
    }
    Some(LinearFunctional { coords })
}

fn invert(g: &Matrix) -> Option<Matrix> {
    let n = g.rows();
    if g.cols() != n {
        return None;
    }
    let mut cols = Vec::with_capacity(n);
    let mut unit = zero_vec(n);
    for j in 0..n {
        unit[j] = Rat::one();
        let col = g.solve(&unit)?;
        if !g.mul_vec(&col).iter().zip(&unit).all(|(x, y)| x == y) {
            return None;
        }
        unit[j] = Rat::zero();
        cols.push(col);
    }
    let mut triplets = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() {
                triplets.push((r, j, v.clone()));
            }
        }
    }
    Some(Matrix::from_triplets(n, n, triplets))
}

/// Characters of the slices of `a`, computed by direct substitution (used to
/// cross-check transported elements).
pub fn slice_characters(f: &CubicForm, a: &SymBilinearMap) -> Result<LinearFunctional> {
    let n = f.dim();
    let mut coords = zero_vec(n);
    let mut unit = zero_vec(n);
    for (i, out) in coords.iter_mut().enumerate() {
        unit[i] = Rat::one();
        let slice = a.slice(&unit)?;
        unit[i] = Rat::zero();
        *out = character_of_action(f, &slice)
            .ok_or_else(|| Error::NotProlongation(format!("slice {i}")))?;
    }
    Ok(LinearFunctional { coords })
}

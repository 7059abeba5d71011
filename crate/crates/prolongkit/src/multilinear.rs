//! Symmetric trilinear forms and their contractions.
//!
//! A cubic hypersurface is stored as the full polarization `f(e_i, e_j, e_k)`
//! of its defining polynomial, indexed by sorted triples. Storing tensor
//! values rather than polynomial coefficients keeps every contraction formula
//! multiplicity-free; the bridge from human-readable monomials divides by the
//! multinomial coefficient so that `eval3(f, w, w, w)` equals the polynomial
//! exactly.

use num_traits::Zero;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{zero_vec, Matrix};
use crate::rat::Rat;

/// Symmetric trilinear form on an n-dimensional rational space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicForm {
    dim: usize,
    /// Tensor values `f(e_i, e_j, e_k)` for sorted triples `i <= j <= k`.
    coeffs: BTreeMap<[usize; 3], Rat>,
}

/// The quadratic form `f_w`, as its symmetric matrix `(f(w, e_i, e_j))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    pub dim: usize,
    pub matrix: Matrix,
}

/// A covector, coordinate `i` being the value on `e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFunctional {
    pub coords: Vec<Rat>,
}

impl LinearFunctional {
    pub fn zero(dim: usize) -> Self {
        LinearFunctional {
            coords: zero_vec(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn apply(&self, v: &[Rat]) -> Rat {
        crate::linalg::dot(&self.coords, v)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

/// A symmetric bilinear map `S^2 W -> W`, stored as the vectors `A(e_i, e_j)`
/// for sorted pairs. Symmetry holds by storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymBilinearMap {
    dim: usize,
    /// `values[pair_index(i, j)] = A(e_i, e_j)`.
    values: Vec<Vec<Rat>>,
}

/// Index of the sorted pair `(min(i,j), max(i,j))` among pairs of `0..n`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    debug_assert!(j < n);
    i * n - i * (i + 1) / 2 + j
}

pub fn n_pairs(n: usize) -> usize {
    n * (n + 1) / 2
}

impl SymBilinearMap {
    pub fn zero(dim: usize) -> Self {
        SymBilinearMap {
            dim,
            values: vec![zero_vec(dim); n_pairs(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_value(&self, i: usize, j: usize) -> &[Rat] {
        &self.values[pair_index(self.dim, i, j)]
    }

    pub fn set_basis_value(&mut self, i: usize, j: usize, v: Vec<Rat>) {
        assert_eq!(v.len(), self.dim);
        self.values[pair_index(self.dim, i, j)] = v;
    }

    /// `A(u, v)` by bilinear expansion.
    pub fn apply(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        let mut out = zero_vec(self.dim);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = ui * vj;
                crate::linalg::add_scaled(&mut out, &c, self.basis_value(i, j));
            }
        }
        out
    }

    /// The slice endomorphism `u -> A(w, u)`, linear in `w`.
    pub fn slice(&self, w: &[Rat]) -> Result<Matrix> {
        if w.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: w.len(),
            });
        }
        let mut triplets = Vec::new();
        for (i, wi) in w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let val = self.basis_value(i, j);
                for (r, x) in val.iter().enumerate() {
                    if !x.is_zero() {
                        triplets.push((r, j, wi * x));
                    }
                }
            }
        }
        Ok(Matrix::from_triplets(self.dim, self.dim, triplets))
    }

    /// Row-major flattening (pair-indexed blocks of length `dim`), used for
    /// span comparisons between solver outputs.
    pub fn flatten(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(n_pairs(self.dim) * self.dim);
        for v in &self.values {
            out.extend(v.iter().cloned());
        }
        out
    }

    pub fn from_flat(dim: usize, flat: &[Rat]) -> Self {
        assert_eq!(flat.len(), n_pairs(dim) * dim);
        let values = flat.chunks(dim).map(|c| c.to_vec()).collect();
        SymBilinearMap { dim, values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|x| x.is_zero()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        SymBilinearMap {
            dim: self.dim,
            values: self
                .values
                .iter()
                .map(|v| crate::linalg::scale_vec(v, c))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        SymBilinearMap {
            dim: self.dim,
            values,
        }
    }
}

/// A monomial record of the human-readable polynomial input: exponents per
/// variable and a coefficient.
#[derive(Debug, Clone)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub coeff: Rat,
}

impl CubicForm {
    /// Builds from tensor entries directly (sorted or unsorted triples).
    pub fn from_tensor<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ([usize; 3], Rat)>,
    {
        let mut coeffs: BTreeMap<[usize; 3], Rat> = BTreeMap::new();
        for (mut ijk, v) in entries {
            ijk.sort_unstable();
            if ijk[2] >= dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: ijk[2] + 1,
                });
            }
            if v.is_zero() {
                continue;
            }
            let slot = coeffs.entry(ijk).or_insert_with(Rat::zero);
            *slot += v;
        }
        coeffs.retain(|_, v| !v.is_zero());
        if coeffs.is_empty() {
            return Err(Error::ZeroForm);
        }
        Ok(CubicForm { dim, coeffs })
    }

    /// Polarization bridge: tensor entry = coefficient / multinomial, so that
    /// `eval3(f, w, w, w)` reproduces the polynomial exactly.
    pub fn polarize(dim: usize, monomials: &[Monomial]) -> Result<Self> {
        let mut entries = Vec::new();
        for (index, m) in monomials.iter().enumerate() {
            if m.exps.len() != dim {
                return Err(Error::NotHomogeneousCubic {
                    index,
                    reason: format!("exps length {} != dim {}", m.exps.len(), dim),
                });
            }
            let total: u32 = m.exps.iter().sum();
            if total != 3 {
                return Err(Error::NotHomogeneousCubic {
                    index,
                    reason: format!("degree {} != 3", total),
                });
            }
            let mut ijk = Vec::with_capacity(3);
            let mut multinomial = 6u32; // 3!
            for (var, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    ijk.push(var);
                }
                multinomial /= match e {
                    0 | 1 => 1,
                    2 => 2,
                    3 => 6,
                    _ => unreachable!(),
                };
            }
            let value = &m.coeff / Rat::from_integer(multinomial.into());
            entries.push(([ijk[0], ijk[1], ijk[2]], value));
        }
        CubicForm::from_tensor(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sorted tensor entries `((i, j, k), f(e_i, e_j, e_k))`.
    pub fn tensor_entries(&self) -> impl Iterator<Item = (&[usize; 3], &Rat)> {
        self.coeffs.iter()
    }

    pub fn tensor_value(&self, i: usize, j: usize, k: usize) -> Rat {
        let mut key = [i, j, k];
        key.sort_unstable();
        self.coeffs.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    fn check_dim(&self, v: &[Rat]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `f(u, v, w)`, trilinear and fully symmetric.
    pub fn eval3(&self, u: &[Rat], v: &[Rat], w: &[Rat]) -> Result<Rat> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        self.check_dim(w)?;
        let mut acc = Rat::zero();
        for (ijk, c) in &self.coeffs {
            let mut sym = Rat::zero();
            for (a, b, d) in distinct_permutations(ijk) {
                if !u[a].is_zero() && !v[b].is_zero() && !w[d].is_zero() {
                    sym += &u[a] * &v[b] * &w[d];
                }
            }
            if !sym.is_zero() {
                acc += c * sym;
            }
        }
        Ok(acc)
    }

    /// `f(w, w, w)`.
    pub fn eval_cubic(&self, w: &[Rat]) -> Result<Rat> {
        self.eval3(w, w, w)
    }

    /// The quadratic form `f_w`: matrix `(f(w, e_i, e_j))`.
    pub fn contract1(&self, w: &[Rat]) -> Result<QuadraticForm> {
        self.check_dim(w)?;
        let mut triplets = Vec::new();
        for (ijk, c) in &self.coeffs {
            for (p, i, j) in distinct_permutations(ijk) {
                if !w[p].is_zero() {
                    triplets.push((i, j, c * &w[p]));
                }
            }
        }
        Ok(QuadraticForm {
            dim: self.dim,
            matrix: Matrix::from_triplets(self.dim, self.dim, triplets),
        })
    }

    /// The covector `f_{uv}: s -> f(u, v, s)`.
    pub fn contract2(&self, u: &[Rat], v: &[Rat]) -> Result<LinearFunctional> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        let mut coords = zero_vec(self.dim);
        for (ijk, c) in &self.coeffs {
            for (p, q, r) in distinct_permutations(ijk) {
                if !u[p].is_zero() && !v[q].is_zero() {
                    coords[r] += c * &u[p] * &v[q];
                }
            }
        }
        Ok(LinearFunctional { coords })
    }

    /// Matrix of `f_w`. Identical to `contract1`; its nonsingularity at a
    /// witness certifies the nonzero-Hessian condition.
    pub fn hessian_matrix(&self, w: &[Rat]) -> Result<Matrix> {
        Ok(self.contract1(w)?.matrix)
    }

    /// Coordinates of the covector `f_{e_i e_j}`.
    pub fn contract2_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        (0..self.dim).map(|r| self.tensor_value(i, j, r)).collect()
    }
}

/// Distinct permutations of a sorted index triple (1, 3, or 6 of them).
pub fn all_permutations(ijk: &[usize; 3]) -> Vec<(usize, usize, usize)> {
    distinct_permutations(ijk)
}

fn distinct_permutations(ijk: &[usize; 3]) -> Vec<(usize, usize, usize)> {
    let [i, j, k] = *ijk;
    let mut out = vec![
        (i, j, k),
        (i, k, j),
        (j, i, k),
        (j, k, i),
        (k, i, j),
        (k, j, i),
    ];
    out.sort_unstable();
    out.dedup();
    out
}

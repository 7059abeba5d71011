//! The 27-dimensional algebra of 3x3 hermitian octonion matrices.
//!
//! Elements are stored as `(x1, x2, x3, a, b, c)` for the matrix
//!
//! ```text
//!     [ x1   c    b̄ ]
//!     [ c̄   x2   a  ]
//!     [ b    ā   x3 ]
//! ```
//!
//! with the coordinate layout `x1 x2 x3 | a0..a7 | b0..b7 | c0..c7` on a
//! 27-dimensional rational space. The cubic norm is
//! `x1 x2 x3 - x1 n(a) - x2 n(b) - x3 n(c) + t((ab)c)` where `t = 2 Re` is
//! the octonion trace; its hypersurface is the secant of the octonion
//! projective plane. The Jordan product `X ∘ Y = (XY + YX)/2` supplies
//! multiplication operators whose span, together with their commutators,
//! is the oracle for the symmetry algebra of that cubic.

use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::multilinear::Monomial;
use crate::octonion::Octonion;
use crate::rat::{ratio, Rat};

pub const DIM: usize = 27;

/// Hermitian 3x3 octonion matrix in `(diagonal, a, b, c)` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermOct {
    pub diag: [Rat; 3],
    /// Off-diagonal entries: `a` at (2,3), `b` at (3,1), `c` at (1,2).
    pub off: [Octonion; 3],
}

impl HermOct {
    pub fn zero() -> Self {
        HermOct {
            diag: std::array::from_fn(|_| Rat::zero()),
            off: std::array::from_fn(|_| Octonion::zero()),
        }
    }

    pub fn from_coords(v: &[Rat]) -> Self {
        assert_eq!(v.len(), DIM);
        HermOct {
            diag: std::array::from_fn(|i| v[i].clone()),
            off: std::array::from_fn(|t| Octonion::from_coords(&v[3 + 8 * t..11 + 8 * t])),
        }
    }

    pub fn to_coords(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(DIM);
        out.extend(self.diag.iter().cloned());
        for o in &self.off {
            out.extend(o.0.iter().cloned());
        }
        out
    }

    pub fn basis(k: usize) -> Self {
        let mut v = vec![Rat::zero(); DIM];
        v[k] = Rat::one();
        HermOct::from_coords(&v)
    }

    /// Rank-one element `v v*` for a column `v = (s, x, y)` with real `s`.
    pub fn rank_one(s: &Rat, x: &Octonion, y: &Octonion) -> Self {
        HermOct {
            diag: [s * s, x.norm(), y.norm()],
            off: [x.mul(&y.conj()), y.scale(s), x.conj().scale(s)],
        }
    }

    fn to_matrix(&self) -> [[Octonion; 3]; 3] {
        let [a, b, c] = &self.off;
        [
            [
                Octonion::one().scale(&self.diag[0]),
                c.clone(),
                b.conj(),
            ],
            [
                c.conj(),
                Octonion::one().scale(&self.diag[1]),
                a.clone(),
            ],
            [
                b.clone(),
                a.conj(),
                Octonion::one().scale(&self.diag[2]),
            ],
        ]
    }

    fn from_matrix(m: &[[Octonion; 3]; 3]) -> Self {
        debug_assert!(m[0][0].0[1..].iter().all(|v| v.is_zero()));
        debug_assert_eq!(m[0][1], m[1][0].conj());
        debug_assert_eq!(m[1][2], m[2][1].conj());
        debug_assert_eq!(m[2][0], m[0][2].conj());
        HermOct {
            diag: [m[0][0].re(), m[1][1].re(), m[2][2].re()],
            off: [m[1][2].clone(), m[2][0].clone(), m[0][1].clone()],
        }
    }

    /// Jordan product `(XY + YX) / 2`.
    pub fn jordan(&self, other: &Self) -> Self {
        let x = self.to_matrix();
        let y = other.to_matrix();
        let xy = mat_mul(&x, &y);
        let yx = mat_mul(&y, &x);
        let half = ratio(1, 2);
        let sum: [[Octonion; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| xy[i][j].add(&yx[i][j]).scale(&half)));
        HermOct::from_matrix(&sum)
    }
}

fn mat_mul(x: &[[Octonion; 3]; 3], y: &[[Octonion; 3]; 3]) -> [[Octonion; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Octonion::zero();
            for k in 0..3 {
                acc = acc.add(&x[i][k].mul(&y[k][j]));
            }
            acc
        })
    })
}

/// Monomials of the cubic norm in the 27 coordinates.
pub fn norm_monomials() -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut push = |exps: Vec<u32>, coeff: Rat| {
        if !coeff.is_zero() {
            out.push(Monomial { exps, coeff });
        }
    };
    // x1 x2 x3
    let mut e = vec![0u32; DIM];
    e[0] = 1;
    e[1] = 1;
    e[2] = 1;
    push(e, Rat::one());
    // -x_t n(off_t)
    for t in 0..3 {
        for i in 0..8 {
            let mut e = vec![0u32; DIM];
            e[t] = 1;
            e[3 + 8 * t + i] = 2;
            push(e, -Rat::one());
        }
    }
    // t((ab)c) = 2 Re((ab)c)
    for i in 0..8 {
        let ei = Octonion::basis(i);
        for j in 0..8 {
            let eij = ei.mul(&Octonion::basis(j));
            for k in 0..8 {
                let tr = eij.mul(&Octonion::basis(k)).trace();
                if tr.is_zero() {
                    continue;
                }
                let mut e = vec![0u32; DIM];
                e[3 + i] = 1;
                e[11 + j] = 1;
                e[19 + k] = 1;
                push(e, tr);
            }
        }
    }
    out
}

/// Matrix of the Jordan multiplication operator `X -> Z ∘ X`.
pub fn mult_operator(z: &HermOct) -> Matrix {
    let mut triplets = Vec::new();
    for k in 0..DIM {
        let col = z.jordan(&HermOct::basis(k)).to_coords();
        for (r, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                triplets.push((r, k, v));
            }
        }
    }
    Matrix::from_triplets(DIM, DIM, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::CubicForm;
    use crate::rat::rat;

    fn norm_form() -> CubicForm {
        CubicForm::polarize(DIM, &norm_monomials()).unwrap()
    }

    fn pseudo_oct(state: &mut u64) -> Octonion {
        let mut next = || {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(97);
            ((*state >> 33) % 7) as i64 - 3
        };
        Octonion(std::array::from_fn(|_| rat(next())))
    }

    #[test]
    fn norm_at_identity_like_points() {
        let f = norm_form();
        let mut v = vec![rat(0); DIM];
        v[0] = rat(1);
        v[1] = rat(1);
        v[2] = rat(1);
        assert_eq!(f.eval_cubic(&v).unwrap(), rat(1));
        // diagonal (d1, d2, d3) evaluates to the product
        let mut w = vec![rat(0); DIM];
        w[0] = rat(2);
        w[1] = rat(-3);
        w[2] = rat(5);
        assert_eq!(f.eval_cubic(&w).unwrap(), rat(-30));
    }

    #[test]
    fn jordan_product_commutative_unital() {
        let mut state = 5u64;
        let x = HermOct::rank_one(&rat(2), &pseudo_oct(&mut state), &pseudo_oct(&mut state));
        let y = HermOct::rank_one(&rat(-1), &pseudo_oct(&mut state), &pseudo_oct(&mut state));
        assert_eq!(x.jordan(&y), y.jordan(&x));
        let mut id = vec![rat(0); DIM];
        id[0] = rat(1);
        id[1] = rat(1);
        id[2] = rat(1);
        let id = HermOct::from_coords(&id);
        assert_eq!(id.jordan(&x), x);
    }

    #[test]
    fn rank_one_elements_lie_on_the_norm_cone() {
        let f = norm_form();
        let mut state = 11u64;
        for _ in 0..10 {
            let x = pseudo_oct(&mut state);
            let y = pseudo_oct(&mut state);
            let p = HermOct::rank_one(&rat(3), &x, &y);
            assert!(f.eval_cubic(&p.to_coords()).unwrap().is_zero());
            // and their gradient vanishes: rank-one points are singular
            let grad = f
                .contract2(&p.to_coords(), &p.to_coords())
                .unwrap();
            assert!(grad.is_zero());
        }
    }

    #[test]
    fn sums_of_two_rank_ones_stay_on_the_cone() {
        let f = norm_form();
        let mut state = 23u64;
        for _ in 0..5 {
            let p = HermOct::rank_one(&rat(1), &pseudo_oct(&mut state), &pseudo_oct(&mut state));
            let q = HermOct::rank_one(&rat(2), &pseudo_oct(&mut state), &pseudo_oct(&mut state));
            let sum: Vec<Rat> = p
                .to_coords()
                .iter()
                .zip(q.to_coords())
                .map(|(a, b)| a + b)
                .collect();
            assert!(f.eval_cubic(&sum).unwrap().is_zero());
        }
    }

    #[test]
    fn mult_operator_scales_the_norm() {
        // L_Z satisfies the infinitesimal symmetry identity; spot-check the
        // diagonal version 3 f(L_Z w, w, w) = chi f(w,w,w) via the derivative
        // of N(exp(t L_Z) w) at a few points, exactly:
        // f(L_Z w, w, w) must be proportional to f(w, w, w) by tr-like factor.
        let f = norm_form();
        let mut state = 31u64;
        let z = HermOct::rank_one(&rat(1), &pseudo_oct(&mut state), &pseudo_oct(&mut state));
        let l = mult_operator(&z);
        // evaluate 3 f(Lw, w, w) / f(w,w,w) at two generic points; both must
        // give the same scalar (the character of L_Z)
        let sample = |s: &mut u64| -> Vec<Rat> {
            let mut next = || {
                *s = s.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                ((*s >> 33) % 7) as i64 - 3
            };
            (0..DIM).map(|_| rat(next())).collect()
        };
        let mut chis = Vec::new();
        let mut st = 77u64;
        while chis.len() < 2 {
            let w = sample(&mut st);
            let fw = f.eval_cubic(&w).unwrap();
            if fw.is_zero() {
                continue;
            }
            let num = f.eval3(&l.mul_vec(&w), &w, &w).unwrap() * rat(3);
            chis.push(num / fw);
        }
        assert_eq!(chis[0], chis[1]);
    }
}

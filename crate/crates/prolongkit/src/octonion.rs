//! Rational octonions.
//!
//! Multiplication is generated by iterated Cayley-Dickson doubling
//! (reals -> complex -> quaternions -> octonions, each step with the
//! standard `(a,b)(c,d) = (ac - d̄b, da + bc̄)` rule), so the sign table is
//! never transcribed by hand. The algebra is validated by exact norm
//! multiplicativity and alternativity checks rather than by comparison with
//! any published table, which keeps the convention self-certifying.

use num_traits::{One, Zero};

use crate::rat::Rat;

/// Octonion over the rationals, coordinates on the basis `e0..e7`
/// (`e0` is the unit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Octonion(pub [Rat; 8]);

impl Octonion {
    pub fn zero() -> Self {
        Octonion(std::array::from_fn(|_| Rat::zero()))
    }

    pub fn one() -> Self {
        let mut o = Self::zero();
        o.0[0] = Rat::one();
        o
    }

    pub fn basis(i: usize) -> Self {
        let mut o = Self::zero();
        o.0[i] = Rat::one();
        o
    }

    pub fn from_coords(c: &[Rat]) -> Self {
        assert_eq!(c.len(), 8);
        Octonion(std::array::from_fn(|i| c[i].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Octonion(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Octonion(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Octonion(std::array::from_fn(|i| &self.0[i] * c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prod = cd_mul(&self.0, &other.0);
        Octonion(std::array::from_fn(|i| prod[i].clone()))
    }

    /// Conjugation: negates every imaginary coordinate.
    pub fn conj(&self) -> Self {
        let c = cd_conj(&self.0);
        Octonion(std::array::from_fn(|i| c[i].clone()))
    }

    /// Real part, the coefficient of `e0`.
    pub fn re(&self) -> Rat {
        self.0[0].clone()
    }

    /// Trace `x + x̄ = 2 Re(x)`.
    pub fn trace(&self) -> Rat {
        &self.0[0] + &self.0[0]
    }

    /// Norm `n(x) = x x̄ = sum of squares`; multiplicative.
    pub fn norm(&self) -> Rat {
        self.0.iter().map(|x| x * x).sum()
    }
}

/// One Cayley-Dickson doubling step on coordinate slices.
fn cd_mul(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let n = x.len();
    if n == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    // (a, b)(c, d) = (ac - d̄b, da + bc̄)
    let ac = cd_mul(a, c);
    let db = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let bc = cd_mul(b, &cd_conj(c));
    let mut out = Vec::with_capacity(n);
    for i in 0..h {
        out.push(&ac[i] - &db[i]);
    }
    for i in 0..h {
        out.push(&da[i] + &bc[i]);
    }
    out
}

fn cd_conj(x: &[Rat]) -> Vec<Rat> {
    let mut out: Vec<Rat> = x.iter().map(|v| -v).collect();
    out[0] = x[0].clone();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn pseudo_octonion(state: &mut u64) -> Octonion {
        let mut next = || {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((*state >> 33) % 9) as i64 - 4
        };
        Octonion(std::array::from_fn(|_| rat(next())))
    }

    #[test]
    fn unit_and_basis_squares() {
        let one = Octonion::one();
        for i in 0..8 {
            let e = Octonion::basis(i);
            assert_eq!(one.mul(&e), e);
            assert_eq!(e.mul(&one), e);
            let sq = e.mul(&e);
            if i == 0 {
                assert_eq!(sq, one);
            } else {
                assert_eq!(sq, one.scale(&rat(-1)));
            }
        }
    }

    #[test]
    fn conjugation_identities() {
        let mut state = 42u64;
        for _ in 0..10 {
            let x = pseudo_octonion(&mut state);
            // x + x̄ = 2 Re(x) e0
            let s = x.add(&x.conj());
            assert_eq!(s.0[0], x.trace());
            assert!(s.0[1..].iter().all(|v| v.is_zero()));
            // x x̄ = n(x) e0
            let p = x.mul(&x.conj());
            assert_eq!(p.0[0], x.norm());
            assert!(p.0[1..].iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn norm_multiplicativity() {
        let mut state = 7u64;
        for _ in 0..30 {
            let x = pseudo_octonion(&mut state);
            let y = pseudo_octonion(&mut state);
            assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        }
    }

    #[test]
    fn alternativity() {
        let mut state = 101u64;
        for _ in 0..30 {
            let x = pseudo_octonion(&mut state);
            let y = pseudo_octonion(&mut state);
            // x(xy) = (xx)y and (yx)x = y(xx)
            assert_eq!(x.mul(&x.mul(&y)), x.mul(&x).mul(&y));
            assert_eq!(y.mul(&x).mul(&x), y.mul(&x.mul(&x)));
        }
    }

    #[test]
    fn trace_form_is_cyclic() {
        // Re((xy)z) = Re((yz)x) = Re((zx)y), used by the catalog symmetries
        let mut state = 3u64;
        for _ in 0..20 {
            let x = pseudo_octonion(&mut state);
            let y = pseudo_octonion(&mut state);
            let z = pseudo_octonion(&mut state);
            let a = x.mul(&y).mul(&z).re();
            let b = y.mul(&z).mul(&x).re();
            let c = z.mul(&x).mul(&y).re();
            assert_eq!(a, b);
            assert_eq!(b, c);
        }
    }

    #[test]
    fn noncommutative_nonassociative() {
        let e1 = Octonion::basis(1);
        let e2 = Octonion::basis(2);
        let e4 = Octonion::basis(4);
        assert_ne!(e1.mul(&e2), e2.mul(&e1));
        assert_ne!(e1.mul(&e2).mul(&e4), e1.mul(&e2.mul(&e4)));
    }
}

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

/// `a + bω` with `ω = e^{2πi/3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EisensteinInt<I> {
    pub a: I,
    pub b: I,
}

impl<I: PrimInt + Signed> EisensteinInt<I> {
    pub fn new(a: I, b: I) -> Self {
        Self { a, b }
    }

    /// The element `k − lω`, whose norm is `k² + kl + l²`.
    pub fn from_pair(k: I, l: I) -> Self {
        Self { a: k, b: -l }
    }

    pub fn norm(&self) -> I {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    /// Complex conjugate, using `ω̄ = −1 − ω`.
    pub fn conj(&self) -> Self {
        Self { a: self.a - self.b, b: -self.b }
    }

    pub fn one() -> Self {
        Self { a: I::one(), b: I::zero() }
    }

    /// ω itself, a unit of order three.
    pub fn omega() -> Self {
        Self { a: I::zero(), b: I::one() }
    }
}

pub fn norm<I: PrimInt + Signed>(z: EisensteinInt<I>) -> I {
    z.norm()
}

impl<I: PrimInt + Signed> Add for EisensteinInt<I> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, b: self.b + o.b }
    }
}

impl<I: PrimInt + Signed> Sub for EisensteinInt<I> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { a: self.a - o.a, b: self.b - o.b }
    }
}

impl<I: PrimInt + Signed> Neg for EisensteinInt<I> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b }
    }
}

impl<I: PrimInt + Signed> Mul for EisensteinInt<I> {
    type Output = Self;
    // ω² = −1 − ω
    fn mul(self, o: Self) -> Self {
        let bd = self.b * o.b;
        Self {
            a: self.a * o.a - bd,
            b: self.a * o.b + self.b * o.a - bd,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type E = EisensteinInt<i64>;

    #[test]
    fn small_norms() {
        assert_eq!(E::new(2, 1).norm(), 3);
        assert_eq!(E::new(3, 0).norm(), 9);
        assert_eq!(E::from_pair(4, 1).norm(), 21);
        assert_eq!(E::omega().norm(), 1);
    }

    #[test]
    fn omega_cubed_is_one() {
        let w = E::omega();
        assert_eq!(w * w * w, E::one());
        assert_eq!(w * w + w + E::one(), E::new(0, 0));
    }

    #[test]
    fn conj_gives_norm() {
        let z = E::new(5, -3);
        let p = z * z.conj();
        assert_eq!(p, E::new(z.norm(), 0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn norm_is_multiplicative(a in -10_000i64..=10_000, b in -10_000i64..=10_000,
                                  c in -10_000i64..=10_000, d in -10_000i64..=10_000) {
            let x = E::new(a, b);
            let y = E::new(c, d);
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
            prop_assert!(x.norm() >= 0);
        }

        #[test]
        fn mul_commutes(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000) {
            prop_assert_eq!(E::new(a, b) * E::new(c, d), E::new(c, d) * E::new(a, b));
        }
    }
}

//! Exact arithmetic for roots of unity.
//!
//! A [`Phase`] is a rational number modulo 1, representing the root of unity
//! `exp(2*pi*i*num/den)`. Sums of phases model products of roots of unity,
//! so equality tests on gauging values, bicharacters and partition classes
//! stay exact; conversion to `Complex64` happens only at evaluation
//! boundaries.

use num_complex::Complex64;
use std::f64::consts::TAU;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a as i64, b as i64) as u64 * b
}

/// A rational number mod 1 in canonical form: `0 <= num < den`, `gcd(num, den) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// `num/den` reduced mod 1. `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be nonzero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        num = num.rem_euclid(den);
        let g = gcd(num, den).max(1);
        num /= g;
        den /= g;
        Phase { num, den }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Order of the corresponding root of unity.
    pub fn order(&self) -> u64 {
        self.den as u64
    }

    pub fn add(self, other: Phase) -> Phase {
        Phase::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }

    pub fn neg(self) -> Phase {
        Phase::new(-self.num, self.den)
    }

    pub fn sub(self, other: Phase) -> Phase {
        self.add(other.neg())
    }

    pub fn scale(self, k: i64) -> Phase {
        Phase::new(self.num.wrapping_mul(k % self.den), self.den)
    }

    /// Canonical complex evaluation. Mathematically equal phases always map
    /// to bit-identical `Complex64` values.
    pub fn to_complex(self) -> Complex64 {
        if self.num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let angle = TAU * self.num as f64 / self.den as f64;
        Complex64::new(angle.cos(), angle.sin())
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, Phase::add)
    }
}

/// Nearest root of unity of order dividing `max_order`, if within `tol`.
pub fn snap_to_root(z: Complex64, max_order: u64, tol: f64) -> Option<Phase> {
    if max_order == 0 {
        return None;
    }
    let angle = z.im.atan2(z.re) / TAU;
    let num = (angle * max_order as f64).round() as i64;
    let p = Phase::new(num, max_order as i64);
    if (z - p.to_complex()).norm() < tol {
        Some(p)
    } else {
        None
    }
}

/// Nearest integer, if within `tol`.
pub fn snap_to_int(x: f64, tol: f64) -> Option<i64> {
    let n = x.round();
    if (x - n).abs() < tol {
        Some(n as i64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        assert_eq!(Phase::new(3, 6), Phase::new(1, 2));
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert_eq!(Phase::new(5, -10), Phase::new(1, 2));
        assert_eq!(Phase::new(8, 4), Phase::ZERO);
    }

    #[test]
    fn arithmetic() {
        let third = Phase::new(1, 3);
        assert_eq!(third.add(third).add(third), Phase::ZERO);
        assert_eq!(third.scale(2), Phase::new(2, 3));
        assert_eq!(third.neg(), Phase::new(2, 3));
        assert_eq!(Phase::new(1, 2).add(Phase::new(1, 3)), Phase::new(5, 6));
    }

    #[test]
    fn complex_eval_is_canonical() {
        // same reduced fraction reached along different routes must be bit-equal
        let a = Phase::new(2, 8).to_complex();
        let b = Phase::new(1, 4).to_complex();
        assert_eq!(a, b);
        assert!((Phase::new(1, 2).to_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn snapping() {
        let z = Complex64::new(0.0, 1.0);
        assert_eq!(snap_to_root(z, 4, 1e-9), Some(Phase::new(1, 4)));
        assert_eq!(snap_to_root(z, 2, 1e-9), None);
        assert_eq!(snap_to_int(2.9999999, 1e-6), Some(3));
        assert_eq!(snap_to_int(2.9, 1e-6), None);
    }

    proptest! {
        #[test]
        fn add_matches_complex_mul(n1 in -30i64..30, d1 in 1i64..24, n2 in -30i64..30, d2 in 1i64..24) {
            let p = Phase::new(n1, d1);
            let q = Phase::new(n2, d2);
            let lhs = p.add(q).to_complex();
            let rhs = p.to_complex() * q.to_complex();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn neg_is_inverse(n in -30i64..30, d in 1i64..24) {
            let p = Phase::new(n, d);
            prop_assert_eq!(p.add(p.neg()), Phase::ZERO);
        }
    }
}

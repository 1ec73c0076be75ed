//! Closed intervals over a float type with outward rounding: every operation
//! widens its result by a few units in the last place so the true real value
//! stays inside.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;
use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Interval<F: Float> {
    pub lo: F,
    pub hi: F,
}

// ulps added on each side after an inexact operation; powf is the loosest
// libm routine we call and stays within 2 ulps on common platforms
const SLACK: u8 = 4;

fn down<F: Float>(x: F) -> F {
    if x.is_infinite() {
        return x;
    }
    let step = F::from(SLACK).unwrap() * F::epsilon() * x.abs();
    x - step.max(F::min_positive_value())
}

fn up<F: Float>(x: F) -> F {
    -down(-x)
}

impl<F: Float> Interval<F> {
    pub fn new(lo: F, hi: F) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    /// A float that is exactly the intended real.
    pub fn exact(x: F) -> Self {
        Interval { lo: x, hi: x }
    }

    /// An integer, widened if the float type cannot hold it exactly.
    pub fn from_int(n: i128) -> Self {
        let x = F::from(n).unwrap();
        match x.to_i128() {
            Some(back) if back == n => Self::exact(x),
            _ => Self::new(down(x), up(x)),
        }
    }

    pub fn zero() -> Self {
        Self::exact(F::zero())
    }

    fn widen(lo: F, hi: F) -> Self {
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn width(&self) -> F {
        self.hi - self.lo
    }

    pub fn mid(&self) -> F {
        (self.lo + self.hi) / F::from(2).unwrap()
    }

    pub fn contains(&self, x: F) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Certainly `<= other` for every pair of points.
    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    pub fn recip(self) -> Self {
        assert!(
            self.lo > F::zero() || self.hi < F::zero(),
            "reciprocal of an interval containing 0"
        );
        Self::widen(self.hi.recip(), self.lo.recip())
    }

    pub fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }

    pub fn min(self, rhs: Self) -> Self {
        Interval {
            lo: self.lo.min(rhs.lo),
            hi: self.hi.min(rhs.hi),
        }
    }

    pub fn max(self, rhs: Self) -> Self {
        Interval {
            lo: self.lo.max(rhs.lo),
            hi: self.hi.max(rhs.hi),
        }
    }

    /// `base^e` for a positive exact `base`.
    pub fn pow_real(base: F, e: Self) -> Self {
        assert!(base > F::zero());
        let (a, b) = (base.powf(e.lo), base.powf(e.hi));
        if base >= F::one() {
            Self::widen(a, b)
        } else {
            Self::widen(b, a)
        }
    }

    /// `q^(num/den)` for integers.
    pub fn qpow(q: u64, num: i64, den: u64) -> Self {
        let e = Self::from_int(num as i128).div(Self::from_int(den as i128));
        Self::pow_real(F::from(q).unwrap(), e)
    }

    pub fn ln(self) -> Self {
        assert!(self.lo > F::zero());
        Self::widen(self.lo.ln(), self.hi.ln())
    }
}

impl<F: Float> Add for Interval<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::widen(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl<F: Float> Sub for Interval<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::widen(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl<F: Float> Neg for Interval<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<F: Float> Mul for Interval<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let c = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = c.iter().copied().fold(F::infinity(), F::min);
        let hi = c.iter().copied().fold(F::neg_infinity(), F::max);
        Self::widen(lo, hi)
    }
}

impl<F: Float + fmt::Display> fmt::Display for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_integers_stay_exact() {
        let a = Interval::<f64>::from_int(12);
        assert_eq!(a.width(), 0.0);
        let big = Interval::<f32>::from_int((1 << 40) + 1);
        assert!(big.width() > 0.0);
        assert!(big.lo <= ((1u64 << 40) + 1) as f32);
    }

    #[test]
    fn sqrt_two_is_enclosed() {
        let s = Interval::<f64>::qpow(2, 1, 2);
        assert!(s.contains(std::f64::consts::SQRT_2));
        let sq = s * s;
        assert!(sq.contains(2.0));
        assert!(sq.width() < 1e-13);
    }

    #[test]
    fn single_precision_contains_double() {
        for (q, num, den) in [(2u64, 7i64, 2u64), (3, -5, 6), (5, 11, 3), (2, -13, 4)] {
            let a = Interval::<f32>::qpow(q, num, den);
            let b = Interval::<f64>::qpow(q, num, den);
            assert!((a.lo as f64) <= b.lo && b.hi <= a.hi as f64, "{q}^({num}/{den})");
        }
    }

    #[test]
    fn min_and_recip() {
        let a = Interval::new(1.0f64, 2.0);
        let b = Interval::new(1.5, 3.0);
        assert_eq!(a.min(b), Interval { lo: 1.0, hi: 2.0 });
        let r = a.recip();
        assert!(r.contains(0.5) && r.contains(1.0));
        assert!(Interval::exact(1.0).certainly_le(&Interval::exact(1.0)));
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_rationals(a in -1000i64..1000, b in -1000i64..1000, c in 1i64..1000) {
            use num_bigint::BigInt;
            use num_rational::BigRational;
            let r = |n: i64| BigRational::from_integer(BigInt::from(n));
            let x = Interval::<f64>::from_int(a as i128).div(Interval::from_int(c as i128));
            let y = Interval::<f64>::from_int(b as i128);
            let z = x * y + x;
            let xr = r(a) / r(c);
            let exact = &xr * r(b) + &xr;
            prop_assert!(BigRational::from_float(z.lo).unwrap() <= exact);
            prop_assert!(exact <= BigRational::from_float(z.hi).unwrap());
        }

        #[test]
        fn powers_are_monotone(n in -60i64..60, q in 2u64..10) {
            let a = Interval::<f64>::qpow(q, n, 6);
            let b = Interval::<f64>::qpow(q, n + 1, 6);
            prop_assert!(a.lo < b.hi);
            prop_assert!(a.lo > 0.0);
        }
    }
}

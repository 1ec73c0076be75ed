//! Exact arithmetic in `Z[w_L]`, `w_L = exp(2*pi*i/L)`, in the power basis
//! `1, w, .., w^{phi(L)-1}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use num_traits::{Float, FloatConst, Num, Signed, ToPrimitive};

/// Integer coefficient types usable in [`Cyclotomic`].
pub trait CycCoeff:
    Clone + fmt::Debug + fmt::Display + PartialEq + Num + Signed + From<i64> + ToPrimitive + Send + Sync
{
}

impl<T> CycCoeff for T where
    T: Clone + fmt::Debug + fmt::Display + PartialEq + Num + Signed + From<i64> + ToPrimitive + Send + Sync
{
}

/// Coefficients of `Phi_n`, ascending; cached.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "Phi_0 is undefined");
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = exact_div(&num, &div);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

// Quotient of `a` by the monic `b`; the remainder must vanish.
fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0i64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db];
        quot[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                rem[i + j] -= c * bj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// An element of `Z[w_L]` in canonical (reduced mod `Phi_L`) form.
#[derive(Clone, Debug)]
pub struct Cyclotomic<T> {
    conductor: u64,
    coeffs: Vec<T>,
}

/// Reduces a polynomial in `w` of any length to the canonical basis.
fn reduce<T: CycCoeff>(l: u64, mut v: Vec<T>) -> Vec<T> {
    let l = l as usize;
    // w^L = 1
    if v.len() > l {
        let tail = v.split_off(l);
        for (i, c) in tail.into_iter().enumerate() {
            let k = i % l;
            v[k] = v[k].clone() + c;
        }
    }
    v.resize(l, T::zero());
    let phi = cyclotomic_poly(l as u64);
    let deg = phi.len() - 1;
    for i in (deg..l).rev() {
        let c = std::mem::replace(&mut v[i], T::zero());
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi[..deg].iter().enumerate() {
            if pj != 0 {
                let k = i - deg + j;
                v[k] = v[k].clone() - c.clone() * T::from(pj);
            }
        }
    }
    v.truncate(deg);
    v
}

impl<T: CycCoeff> Cyclotomic<T> {
    pub fn zero(l: u64) -> Self {
        Self::from_int(l, T::zero())
    }

    pub fn one(l: u64) -> Self {
        Self::from_int(l, T::one())
    }

    pub fn from_int(l: u64, n: T) -> Self {
        assert!(l >= 1);
        let mut coeffs = vec![T::zero(); euler_phi(l) as usize];
        coeffs[0] = n;
        Cyclotomic { conductor: l, coeffs }
    }

    /// `w_L^k`.
    pub fn root_of_unity(l: u64, k: u64) -> Self {
        let mut v = vec![T::zero(); l as usize];
        v[(k % l) as usize] = T::one();
        Self::from_group_ring(l, v)
    }

    /// `sum_k v[k] w^k` for a coefficient vector of any length.
    pub fn from_group_ring(l: u64, v: Vec<T>) -> Self {
        assert!(l >= 1);
        Cyclotomic {
            conductor: l,
            coeffs: reduce(l, v),
        }
    }

    /// `sum_k counts[k] w^k` for a vector of length `L` of machine integers.
    pub fn from_counts(l: u64, counts: &[i64]) -> Self {
        Self::from_group_ring(l, counts.iter().map(|&c| T::from(c)).collect())
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational-integer value, if this element is one.
    pub fn int_test(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Z[w_M]`; `L` must divide `M`.
    pub fn embed(&self, m: u64) -> Self {
        assert_eq!(
            m % self.conductor,
            0,
            "conductor {} does not divide {m}",
            self.conductor
        );
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut v = vec![T::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Self::from_group_ring(m, v)
    }

    /// Adds `w^k * self` into a group-ring accumulator of length `L`.
    pub fn accumulate_shifted(&self, k: u64, acc: &mut [T]) {
        let l = self.conductor as usize;
        debug_assert_eq!(acc.len(), l);
        let k = (k % self.conductor) as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let j = (i + k) % l;
                acc[j] = acc[j].clone() + c.clone();
            }
        }
    }

    pub fn mul_root(&self, k: u64) -> Self {
        let mut acc = vec![T::zero(); self.conductor as usize];
        self.accumulate_shifted(k, &mut acc);
        Self::from_group_ring(self.conductor, acc)
    }

    pub fn scale(&self, c: &T) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Exact division by a rational integer, if it divides every coefficient.
    pub fn div_exact(&self, c: &T) -> Option<Self> {
        if c.is_zero() || self.coeffs.iter().any(|x| !(x.clone() % c.clone()).is_zero()) {
            return None;
        }
        Some(Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| x.clone() / c.clone()).collect(),
        })
    }

    /// Numeric value under `w_L -> exp(2*pi*i/L)`.
    pub fn to_complex<F: Float + FloatConst>(&self) -> Complex<F> {
        let l = F::from(self.conductor).unwrap();
        let mut acc = Complex::new(F::zero(), F::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = F::TAU() * F::from(i).unwrap() / l;
            let c = F::from(c.clone()).unwrap_or_else(F::nan);
            acc = acc + Complex::from_polar(F::one(), theta) * c;
        }
        acc
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = num_integer::lcm(self.conductor, other.conductor);
        (self.embed(m), other.embed(m))
    }
}

impl<T: CycCoeff> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl<T: CycCoeff> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn add(self, rhs: Self) -> Cyclotomic<T> {
        let (a, b) = self.common(rhs);
        Cyclotomic {
            conductor: a.conductor,
            coeffs: a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<T: CycCoeff> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        let (a, b) = self.common(rhs);
        Cyclotomic {
            conductor: a.conductor,
            coeffs: a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<T: CycCoeff> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        let (a, b) = self.common(rhs);
        let n = a.coeffs.len();
        let mut prod = vec![T::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = prod[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        Cyclotomic::from_group_ring(a.conductor, prod)
    }
}

impl<T: CycCoeff> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: CycCoeff> $tr for Cyclotomic<T> {
            type Output = Cyclotomic<T>;

            fn $m(self, rhs: Self) -> Cyclotomic<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: CycCoeff> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        -&self
    }
}

/// Text form `2+w^3-w^5`, `0` for zero.
impl<T: CycCoeff> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        f.write_str("w")?;
                    } else {
                        write!(f, "w^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use proptest::prelude::*;

    use super::*;

    type C = Cyclotomic<i128>;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), [-1, 1]);
        assert_eq!(*cyclotomic_poly(2), [1, 1]);
        assert_eq!(*cyclotomic_poly(4), [1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), [1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), [1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).contains(&-2));
        for n in 1..60 {
            assert_eq!(cyclotomic_poly(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn small_identities() {
        let w4 = C::root_of_unity(4, 1);
        let w4c = C::root_of_unity(4, 3);
        assert!((&w4 + &w4c).is_zero());

        let s = &(&C::one(3) + &C::root_of_unity(3, 1)) + &C::root_of_unity(3, 2);
        assert!(s.is_zero());

        let p = &C::root_of_unity(8, 1) * &C::root_of_unity(8, 7);
        assert_eq!(p.int_test(), Some(1));

        assert_eq!(C::root_of_unity(2, 1).int_test(), Some(-1));
        assert_eq!(C::root_of_unity(1, 5).int_test(), Some(1));
    }

    #[test]
    fn embedding_and_mixed_conductors() {
        let i = C::root_of_unity(4, 1);
        let w3 = C::root_of_unity(3, 1);
        let prod = &i * &w3;
        assert_eq!(prod.conductor(), 12);
        assert_eq!(prod, C::root_of_unity(12, 3 + 4));
        assert_eq!(C::root_of_unity(4, 2), C::root_of_unity(2, 1));
        assert_eq!(C::from_int(6, 5), C::from_int(1, 5));
        assert_ne!(C::root_of_unity(6, 1), C::root_of_unity(6, 5));
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for l in 2..40u64 {
            let mut acc = C::zero(l);
            for k in 0..l {
                acc = &acc + &C::root_of_unity(l, k);
            }
            assert!(acc.is_zero(), "L={l}");
            // sum over primitive roots is mu(L)
            let mut prim = C::zero(l);
            for k in (1..=l).filter(|&k| num_integer::gcd(k, l) == 1) {
                prim = &prim + &C::root_of_unity(l, k);
            }
            let mu = crate::count::moebius(l) as i128;
            assert_eq!(prim.int_test(), Some(mu));
        }
    }

    #[test]
    fn text_form() {
        let v = C::from_group_ring(8, vec![2, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(v.to_string(), "2+w^3");
        let v = C::from_group_ring(12, vec![0, -1, 3]);
        assert_eq!(v.to_string(), "-w+3*w^2");
        assert_eq!(C::zero(5).to_string(), "0");
        // w^4 = -1 in Z[w_8]
        assert_eq!(C::root_of_unity(8, 5).to_string(), "-w");
    }

    #[test]
    fn complex_embedding() {
        let z: Complex<f64> = C::root_of_unity(12, 5).to_complex();
        let expect = Complex::from_polar(1.0, std::f64::consts::TAU * 5.0 / 12.0);
        assert!((z - expect).norm() < 1e-12);
        let z: Complex<f32> = C::from_group_ring(5, vec![1, 2, 3, 4, 5]).to_complex();
        let direct: Complex<f32> = (0..5)
            .map(|k| Complex::from_polar(1.0f32, std::f32::consts::TAU * k as f32 / 5.0) * (k as f32 + 1.0))
            .sum();
        assert!((z - direct).norm() < 1e-4);
    }

    #[test]
    fn div_exact() {
        let v = C::from_group_ring(6, vec![4, 6]);
        assert_eq!(v.div_exact(&2), Some(C::from_group_ring(6, vec![2, 3])));
        assert_eq!(v.div_exact(&4), None);
        assert_eq!(v.div_exact(&0), None);
    }

    fn arb(l: u64) -> impl Strategy<Value = C> {
        prop::collection::vec(-50i128..50, l as usize).prop_map(move |v| C::from_group_ring(l, v))
    }

    proptest! {
        #[test]
        fn ring_axioms((l, a, b, c) in prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 9, 12, 16, 18, 20])
            .prop_flat_map(|l| (Just(l), arb(l), arb(l), arb(l))))
        {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a * &C::one(l), a.clone());
        }

        #[test]
        fn complex_embedding_is_a_homomorphism(
            a in arb(12), b in arb(12)
        ) {
            let za: Complex<f64> = a.to_complex();
            let zb: Complex<f64> = b.to_complex();
            let zab: Complex<f64> = (&a * &b).to_complex();
            prop_assert!((za * zb - zab).norm() <= 1e-9 * (1.0 + zab.norm()));
        }

        #[test]
        fn bigint_agrees_with_i128(v in prop::collection::vec(-1000i64..1000, 18),
                                   k in 0u64..18) {
            let a = C::from_counts(18, &v).mul_root(k);
            let b = Cyclotomic::<BigInt>::from_counts(18, &v).mul_root(k);
            let a_sq = &a * &a;
            let b_sq = &b * &b;
            let conv: Vec<BigInt> = a_sq.coeffs().iter().map(|&c| BigInt::from(c)).collect();
            prop_assert_eq!(conv, b_sq.coeffs().to_vec());
        }
    }
}

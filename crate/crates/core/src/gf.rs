//! Finite fields `F_q`, `q = p^r`, in a polynomial basis over `F_p`.
//!
//! Elements are packed into a single index so that numeric order on the index
//! is the coordinate-lexicographic order with the lowest-degree coordinate most
//! significant. For `F_4 = F_2[t]/(t^2+t+1)` this gives `0, t, 1, 1+t`.
//! Every "least element" choice in the crate (the primitive element, the
//! enumeration order of polynomials) follows this order.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order the tables are built for.
pub const MAX_ORDER: u64 = 1 << 16;

/// Default moduli (ascending coefficients, monic) for the small non-prime fields.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (3, 3, &[1, 2, 0, 1]),
];

/// An element of a [`Field`], stored as its packed coordinate index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fel(pub(crate) u32);

impl Fel {
    pub const ZERO: Fel = Fel(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u64),
    Inv,
    Neg,
}

/// The field `F_q` with a verified modulus and a fixed primitive element.
#[derive(Clone)]
pub struct Field {
    p: u32,
    r: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    gamma: Fel,
    one: Fel,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
    neg_table: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .field("gamma", &self.fmt_elem(self.gamma))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus && self.gamma == other.gamma
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^r`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let mut r = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        r += 1;
    }
    Some((p, r))
}

// Coordinate-level arithmetic used during construction, before tables exist.
struct Raw<'a> {
    p: u32,
    r: usize,
    modulus: &'a [u32],
}

impl Raw<'_> {
    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.r];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (self.r..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.r {
                let sub = c * self.modulus[j] as u64 % p;
                let k = i - self.r + j;
                prod[k] = (prod[k] + p - sub) % p;
            }
        }
        prod.truncate(self.r);
        prod.into_iter().map(|c| c as u32).collect()
    }

    fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = vec![0u32; self.r];
        acc[0] = 1;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    // b monic
    let mut a: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let p64 = p as u64;
    while a.len() > db {
        let c = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + p64 * p64 - c * bj as u64) % p64;
            }
        }
        a.pop();
    }
    a.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2` over `F_p`.
fn irreducible_over_prime(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for n in 0..count {
            let mut div = Vec::with_capacity(k + 1);
            let mut m = n;
            for _ in 0..k {
                div.push((m % p as u64) as u32);
                m /= p as u64;
            }
            div.push(1);
            if poly_rem_mod_p(modulus, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `F_{p^r}`. For `r > 1` the modulus (ascending coefficients,
    /// monic, degree `r`) is taken from `modulus` or the built-in table.
    pub fn new(p: u32, r: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::Precondition("extension degree must be >= 1".into()));
        }
        let q = (p as u64)
            .checked_pow(r)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge((p as f64).powi(r as i32) as u64))?;
        let modulus: Option<Vec<u32>> = match (r, modulus) {
            (1, None) => None,
            (_, Some(m)) => Some(m.to_vec()),
            (_, None) => Some(
                DEFAULT_MODULI
                    .iter()
                    .find(|(pp, rr, _)| *pp == p && *rr == r)
                    .map(|(_, _, m)| m.to_vec())
                    .ok_or(Error::NoModulus(q))?,
            ),
        };
        if let Some(m) = &modulus {
            if m.len() != r as usize + 1 {
                return Err(Error::InvalidModulus(format!(
                    "degree {} does not match extension degree {r}",
                    m.len().saturating_sub(1)
                )));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidModulus("coefficient out of range".into()));
            }
            if m[r as usize] != 1 {
                return Err(Error::InvalidModulus("modulus must be monic".into()));
            }
            if !irreducible_over_prime(m, p) {
                return Err(Error::InvalidModulus(format!("{m:?} is reducible over F_{p}")));
            }
        }
        let q = q as u32;
        let ru = r as usize;
        let one = p.pow(r - 1);

        let to_coords = |idx: u32| -> Vec<u32> {
            let mut c = vec![0u32; ru];
            let mut m = idx;
            for i in (0..ru).rev() {
                c[i] = m % p;
                m /= p;
            }
            c
        };
        let from_coords = |c: &[u32]| -> u32 { c.iter().fold(0u32, |acc, &x| acc * p + x) };

        let trivial_mod = [0u32, 1];
        let raw = Raw {
            p,
            r: ru,
            modulus: modulus.as_deref().unwrap_or(&trivial_mod),
        };
        let qm1 = (q - 1) as u64;
        let ell_factors = prime_factors(qm1);
        let mut one_c = vec![0u32; ru];
        one_c[0] = 1;
        let gamma = (1..q)
            .find(|&idx| {
                let a = to_coords(idx);
                ell_factors.iter().all(|&l| raw.pow(&a, qm1 / l) != one_c)
            })
            .expect("F_q^* is cyclic");

        let mut exp = Vec::with_capacity(2 * (q as usize - 1));
        let mut log = vec![u32::MAX; q as usize];
        let g = to_coords(gamma);
        let mut cur = one_c.clone();
        for k in 0..(q - 1) {
            let idx = from_coords(&cur);
            exp.push(idx);
            log[idx as usize] = k;
            cur = raw.mul(&cur, &g);
        }
        for k in 0..(q as usize - 1) {
            exp.push(exp[k]);
        }

        let add_coords = |a: u32, b: u32| -> u32 {
            let (x, y) = (to_coords(a), to_coords(b));
            let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
            from_coords(&s)
        };
        let neg_table = (0..q)
            .map(|a| {
                let c: Vec<u32> = to_coords(a).iter().map(|&x| (p - x) % p).collect();
                from_coords(&c)
            })
            .collect();
        let add_table = (q <= 256).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_coords(a, b) as u16;
                }
            }
            t
        });

        Ok(Field {
            p,
            r,
            q,
            modulus,
            gamma: Fel(gamma),
            one: Fel(one),
            exp,
            log,
            add_table,
            neg_table,
        })
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// `F_q` with the default modulus when `q` is not prime.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, r) = prime_power(q).ok_or(Error::NotPrime(q))?;
        if p > u32::MAX as u64 {
            return Err(Error::FieldTooLarge(q));
        }
        Field::new(p as u32, r, None)
    }

    /// The same field with a different primitive element.
    pub fn with_gamma(&self, gamma: Fel) -> Result<Field> {
        self.check(gamma)?;
        if gamma.is_zero() || self.order(gamma) != (self.q - 1) as u64 {
            return Err(Error::Precondition("not a primitive element".into()));
        }
        let mut out = self.clone();
        let mut exp = Vec::with_capacity(self.exp.len());
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur = self.one;
        for k in 0..(self.q - 1) {
            exp.push(cur.0);
            log[cur.0 as usize] = k;
            cur = self.mul(cur, gamma);
        }
        for k in 0..(self.q as usize - 1) {
            exp.push(exp[k]);
        }
        out.exp = exp;
        out.log = log;
        out.gamma = gamma;
        Ok(out)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn gamma(&self) -> Fel {
        self.gamma
    }

    pub fn zero(&self) -> Fel {
        Fel(0)
    }

    pub fn one(&self) -> Fel {
        self.one
    }

    /// All elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = Fel> + Clone {
        (0..self.q).map(Fel)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fel> + Clone {
        (1..self.q).map(Fel)
    }

    pub fn contains(&self, a: Fel) -> bool {
        a.0 < self.q
    }

    fn check(&self, a: Fel) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ForeignElement)
        }
    }

    /// Coordinates `(c_0, .., c_{r-1})` in the basis `1, t, .., t^{r-1}`.
    pub fn coords(&self, a: Fel) -> Vec<u32> {
        let mut c = vec![0u32; self.r as usize];
        let mut m = a.0;
        for i in (0..self.r as usize).rev() {
            c[i] = m % self.p;
            m /= self.p;
        }
        c
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<Fel> {
        if c.len() > self.r as usize || c.iter().any(|&x| x >= self.p) {
            return Err(Error::ForeignElement);
        }
        let mut full = c.to_vec();
        full.resize(self.r as usize, 0);
        Ok(Fel(full.iter().fold(0u32, |acc, &x| acc * self.p + x)))
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fel {
        let c = n.rem_euclid(self.p as i64) as u32;
        Fel(c * self.one.0)
    }

    #[inline]
    pub fn add(&self, a: Fel, b: Fel) -> Fel {
        if self.r == 1 {
            let s = a.0 + b.0;
            return Fel(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(t) => Fel(t[(a.0 * self.q + b.0) as usize] as u32),
            None => {
                let s: Vec<u32> = self
                    .coords(a)
                    .iter()
                    .zip(self.coords(b))
                    .map(|(x, y)| (x + y) % self.p)
                    .collect();
                Fel(s.iter().fold(0u32, |acc, &x| acc * self.p + x))
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Fel) -> Fel {
        Fel(self.neg_table[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fel, b: Fel) -> Fel {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fel, b: Fel) -> Fel {
        if a.0 == 0 || b.0 == 0 {
            return Fel(0);
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fel(self.exp[k as usize])
    }

    pub fn inv(&self, a: Fel) -> Result<Fel> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let k = self.log[a.0 as usize];
        Ok(Fel(self.exp[((self.q - 1 - k) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: Fel, b: Fel) -> Result<Fel> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fel, e: u64) -> Fel {
        if e == 0 {
            return self.one;
        }
        if a.0 == 0 {
            return Fel(0);
        }
        let k = (self.log[a.0 as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        Fel(self.exp[k as usize])
    }

    /// Checked binary/unary operation; rejects elements outside the field.
    pub fn arith(&self, op: ArithOp, a: Fel, b: Fel) -> Result<Fel> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Pow(e) => self.pow(a, e),
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Neg => self.neg(a),
        })
    }

    /// Discrete log to base `gamma`.
    pub fn log(&self, a: Fel) -> Option<u32> {
        (a.0 != 0 && a.0 < self.q).then(|| self.log[a.0 as usize])
    }

    /// `gamma^k`.
    pub fn exp(&self, k: u64) -> Fel {
        Fel(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fel) -> u64 {
        assert!(a.0 != 0, "zero has no multiplicative order");
        let n = (self.q - 1) as u64;
        let k = self.log[a.0 as usize] as u64;
        n / num_integer::gcd(n, k)
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fel) -> Fel {
        self.pow(a, self.p as u64)
    }

    /// Least element of multiplicative order `q - 1`.
    pub fn primitive_root(&self) -> Fel {
        self.nonzero()
            .find(|&a| self.order(a) == (self.q - 1) as u64)
            .expect("F_q^* is cyclic")
    }

    /// `c0+c1*t+...`; prime fields print the bare residue.
    pub fn fmt_elem(&self, a: Fel) -> String {
        if self.r == 1 {
            return a.0.to_string();
        }
        let c = self.coords(a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let t = match (i, ci) {
                (0, _) => ci.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{ci}*t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{ci}*t^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Inverse of [`Field::fmt_elem`]. Integers are reduced mod `p`.
    pub fn parse_elem(&self, s: &str) -> Result<Fel> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut coords = vec![0u32; self.r as usize];
        for term in s.split('+') {
            let (coef, power) = parse_monomial(term, 't')?;
            if power >= self.r as usize {
                return Err(Error::Parse(format!("power of t too large in {term:?}")));
            }
            coords[power] = ((coords[power] as u64 + coef % self.p as u64) % self.p as u64) as u32;
        }
        self.from_coords(&coords)
    }
}

/// Parses `c`, `c*v`, `v`, `c*v^k`, `v^k` into `(c, k)`.
pub(crate) fn parse_monomial(term: &str, var: char) -> Result<(u64, usize)> {
    let bad = || Error::Parse(format!("cannot parse term {term:?}"));
    if term.is_empty() {
        return Err(bad());
    }
    let (coef_part, var_part) = match term.find(var) {
        None => (term, None),
        Some(pos) => {
            let coef = term[..pos].trim_end_matches('*');
            (coef, Some(&term[pos + var.len_utf8()..]))
        }
    };
    let coef = if coef_part.is_empty() {
        1
    } else {
        coef_part.parse::<u64>().map_err(|_| bad())?
    };
    let power = match var_part {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .ok_or_else(bad)?
            .parse::<usize>()
            .map_err(|_| bad())?,
    };
    Ok((coef, power))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_prime_fields() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.gamma(), f2.one());
        assert_eq!(f2.add(f2.one(), f2.one()), f2.zero());

        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.gamma(), Fel(2));
        assert_eq!(f3.mul(Fel(2), Fel(2)), Fel(1));

        assert_eq!(Field::prime(5).unwrap().gamma(), Fel(2));
        assert_eq!(Field::prime(7).unwrap().gamma(), Fel(3));
    }

    #[test]
    fn f4_arithmetic() {
        let f4 = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let t = f4.parse_elem("t").unwrap();
        assert_eq!(f4.gamma(), t);
        assert_eq!(f4.mul(t, t), f4.parse_elem("1+t").unwrap());
        assert_eq!(f4.fmt_elem(f4.mul(t, t)), "1+t");
        // order 0, t, 1, 1+t
        let names: Vec<String> = f4.elements().map(|a| f4.fmt_elem(a)).collect();
        assert_eq!(names, ["0", "t", "1", "1+t"]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::prime(4).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            Field::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            Field::new(2, 3, Some(&[1, 1, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert_eq!(Field::new(7, 2, None).unwrap_err(), Error::NoModulus(49));
        assert!(Field::new(7, 2, Some(&[1, 0, 1])).is_ok());
    }

    #[test]
    fn checked_ops() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.arith(ArithOp::Div, Fel(1), Fel(0)), Err(Error::DivisionByZero));
        assert_eq!(f3.arith(ArithOp::Inv, Fel(0), Fel(0)), Err(Error::DivisionByZero));
        assert_eq!(f3.arith(ArithOp::Add, Fel(5), Fel(0)), Err(Error::ForeignElement));
        assert_eq!(f3.arith(ArithOp::Pow(5), Fel(2), Fel(0)), Ok(Fel(2)));
        assert_eq!(f3.arith(ArithOp::Neg, Fel(1), Fel(0)), Ok(Fel(2)));
    }

    #[test]
    fn default_tables_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = Field::with_order(q).unwrap();
            assert_eq!(f.primitive_root(), f.gamma());
            let mut seen = vec![false; q as usize];
            for k in 0..(q - 1) {
                let a = f.exp(k);
                assert!(!seen[a.index() as usize]);
                seen[a.index() as usize] = true;
            }
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.pow(a, q - 1), f.one());
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.parse_elem(&f.fmt_elem(a)).unwrap(), a);
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                    assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn alternative_gamma() {
        let f7 = Field::prime(7).unwrap();
        let g = f7.with_gamma(Fel(5)).unwrap();
        assert_eq!(g.gamma(), Fel(5));
        assert_eq!(g.exp(1), Fel(5));
        assert_eq!(g.log(Fel(5)), Some(1));
        assert!(f7.with_gamma(Fel(2)).is_err());
    }
}

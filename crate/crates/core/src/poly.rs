//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{precondition, Error, Result};
use crate::gf::{parse_monomial, prime_factors, Fel, Field};

/// Degree of a polynomial, with an explicit marker for the zero polynomial.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInfinity, Degree::NegInfinity) => Ordering::Equal,
            (Degree::NegInfinity, _) => Ordering::Less,
            (_, Degree::NegInfinity) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Coefficient `j` of `coeffs` is `[x^j]f`. No trailing zeros are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Fel>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fel>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `c * x^k`.
    pub fn monomial(c: Fel, k: usize) -> Poly {
        let mut v = vec![Fel::ZERO; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[Fel] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Fel {
        self.coeffs.get(j).copied().unwrap_or(Fel::ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<Fel> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self, field: &Field) -> bool {
        self.lead() == Some(field.one())
    }

    /// Coefficient sequence is a palindrome. `x + 1` counts; `x` does not.
    pub fn is_self_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }
}

/// Result of [`PolyRing::reciprocal`]; the degree drops when `f(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reciprocal {
    pub poly: Poly,
    pub degree_dropped: bool,
}

/// Polynomial arithmetic over a fixed field.
#[derive(Copy, Clone, Debug)]
pub struct PolyRing<'f> {
    field: &'f Field,
}

impl<'f> PolyRing<'f> {
    pub fn new(field: &'f Field) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn one(&self) -> Poly {
        Poly::from_coeffs(vec![self.field.one()])
    }

    pub fn x(&self) -> Poly {
        Poly::monomial(self.field.one(), 1)
    }

    /// Monic polynomial from coefficients below the leading one (ascending).
    pub fn monic(&self, lower: &[Fel]) -> Poly {
        let mut v = lower.to_vec();
        v.push(self.field.one());
        Poly::from_coeffs(v)
    }

    pub fn check(&self, f: &Poly) -> Result<()> {
        if f.coeffs.iter().all(|&c| self.field.contains(c)) {
            Ok(())
        } else {
            Err(Error::ForeignElement)
        }
    }

    pub fn add(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.coeffs.len().max(g.coeffs.len());
        Poly::from_coeffs((0..n).map(|j| self.field.add(f.coeff(j), g.coeff(j))).collect())
    }

    pub fn sub(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.coeffs.len().max(g.coeffs.len());
        Poly::from_coeffs((0..n).map(|j| self.field.sub(f.coeff(j), g.coeff(j))).collect())
    }

    pub fn scale(&self, f: &Poly, c: Fel) -> Poly {
        Poly::from_coeffs(f.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fel::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
        for (i, &a) in f.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn divmod(&self, f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
        let lead = g.lead().ok_or(Error::DivisionByZero)?;
        let inv = self.field.inv(lead)?;
        let dg = g.coeffs.len() - 1;
        let mut rem = f.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Poly::zero(), f.clone()));
        }
        let mut quo = vec![Fel::ZERO; rem.len() - dg];
        for i in (dg..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = self.field.mul(c, inv);
            quo[i - dg] = factor;
            for (j, &b) in g.coeffs.iter().enumerate() {
                let k = i - dg + j;
                rem[k] = self.field.sub(rem[k], self.field.mul(factor, b));
            }
        }
        rem.truncate(dg);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        Ok(self.divmod(f, g)?.1)
    }

    pub fn make_monic(&self, f: &Poly) -> Poly {
        match f.lead() {
            None => Poly::zero(),
            Some(c) => self.scale(f, self.field.inv(c).expect("nonzero lead")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, f: &Poly, g: &Poly) -> Poly {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        self.make_monic(&a)
    }

    pub fn powmod(&self, f: &Poly, mut e: u64, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(f, modulus)?;
        let mut acc = self.rem(&self.one(), modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), modulus)?;
            }
            base = self.rem(&self.mul(&base, &base), modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, f: &Poly, x: Fel) -> Fel {
        f.coeffs
            .iter()
            .rev()
            .fold(Fel::ZERO, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    /// `f*(x) = x^deg(f) f(1/x)`.
    pub fn reciprocal(&self, f: &Poly) -> Result<Reciprocal> {
        if f.is_zero() {
            return precondition("reciprocal of the zero polynomial");
        }
        let mut v = f.coeffs.clone();
        v.reverse();
        let poly = Poly::from_coeffs(v);
        Ok(Reciprocal {
            degree_dropped: poly.degree() < f.degree(),
            poly,
        })
    }

    /// Rabin's test: `x^{q^n} = x mod f` and `gcd(x^{q^{n/l}} - x, f) = 1`
    /// for each prime `l | n`.
    pub fn is_irreducible(&self, f: &Poly) -> Result<bool> {
        if !f.is_monic(self.field) {
            return precondition("irreducibility test needs a monic polynomial");
        }
        let n = match f.degree() {
            Degree::Finite(n) if n >= 1 => n,
            _ => return precondition("irreducibility test needs degree >= 1"),
        };
        if n == 1 {
            return Ok(true);
        }
        if f.coeff(0).is_zero() {
            return Ok(false);
        }
        let frob = FrobeniusMatrix::new(self, f);
        let x = self.x();
        let mut h = x.clone();
        let mut powers = Vec::with_capacity(n + 1);
        powers.push(h.clone());
        for _ in 0..n {
            h = frob.apply(self, &h);
            powers.push(h.clone());
        }
        if powers[n] != x {
            return Ok(false);
        }
        for l in prime_factors(n as u64) {
            let g = self.sub(&powers[n / l as usize], &x);
            if self.gcd(&g, f).degree() != Degree::Finite(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Textual form `x^4+x^3+1`, descending, zero terms omitted.
    pub fn fmt(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let prime = self.field.r() == 1;
        let mut terms = Vec::new();
        for j in (0..f.coeffs.len()).rev() {
            let c = f.coeffs[j];
            if c.is_zero() {
                continue;
            }
            let cs = self.field.fmt_elem(c);
            let cs = if prime || !cs.contains('+') {
                cs
            } else {
                format!("({cs})")
            };
            let xs = match j {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{j}"),
            };
            let term = if j == 0 {
                cs
            } else if c == self.field.one() {
                xs
            } else {
                format!("{cs}*{xs}")
            };
            terms.push(term);
        }
        terms.join("+")
    }

    /// Accepts `x^4+x^3+1` style text or an ascending coefficient list `1,0,0,1,1`.
    pub fn parse(&self, s: &str) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s.contains(',') {
            return self.parse_list(&s);
        }
        let mut coeffs: Vec<Fel> = Vec::new();
        for term in split_top_level(&s.replace('-', "+-")) {
            if term.is_empty() {
                continue;
            }
            let (negate, term) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term),
            };
            let (c, k) = self.parse_term(term)?;
            let c = if negate { self.field.neg(c) } else { c };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Fel::ZERO);
            }
            coeffs[k] = self.field.add(coeffs[k], c);
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    fn parse_term(&self, term: &str) -> Result<(Fel, usize)> {
        let bad = || Error::Parse(format!("cannot parse term {term:?}"));
        let depth_zero_x = {
            let mut depth = 0i32;
            let mut pos = None;
            for (i, ch) in term.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    'x' if depth == 0 => pos = Some(i),
                    _ => {}
                }
            }
            pos
        };
        match depth_zero_x {
            None => Ok((self.field.parse_elem(term)?, 0)),
            Some(pos) => {
                let coef = term[..pos].trim_end_matches('*');
                let c = if coef.is_empty() {
                    self.field.one()
                } else {
                    self.field.parse_elem(coef)?
                };
                let (_, k) = parse_monomial(&term[pos..], 'x').map_err(|_| bad())?;
                Ok((c, k))
            }
        }
    }

    fn parse_list(&self, s: &str) -> Result<Poly> {
        let coeffs = s
            .split(',')
            .map(|tok| self.field.parse_elem(tok))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Rows are `x^{iq} mod f`; applying it computes `h^q mod f` because the
/// coefficients of `h` are fixed by the `q`-power map.
struct FrobeniusMatrix {
    rows: Vec<Vec<Fel>>,
    n: usize,
}

impl FrobeniusMatrix {
    fn new(ring: &PolyRing<'_>, f: &Poly) -> Self {
        let field = ring.field;
        let n = f.coeffs.len() - 1;
        let xq = ring.powmod(&ring.x(), field.q() as u64, f).expect("monic modulus");
        let mut rows = Vec::with_capacity(n);
        let mut cur = ring.one();
        for _ in 0..n {
            let mut row = cur.coeffs.clone();
            row.resize(n, Fel::ZERO);
            rows.push(row);
            cur = ring.rem(&ring.mul(&cur, &xq), f).expect("monic modulus");
        }
        FrobeniusMatrix { rows, n }
    }

    fn apply(&self, ring: &PolyRing<'_>, h: &Poly) -> Poly {
        let field = ring.field;
        let mut out = vec![Fel::ZERO; self.n];
        for (i, &c) in h.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(&self.rows[i]) {
                *o = field.add(*o, field.mul(c, m));
            }
        }
        Poly::from_coeffs(out)
    }
}

/// Monic polynomials of degree `d` with prescribed leading coefficients
/// `a_1..a_l` (`[x^{d-j}] = a_j`) and ending coefficients `b_0..b_{t-1}`
/// (`[x^j] = b_j`), in coordinate-lexicographic order with the lowest-degree
/// free coefficient varying fastest.
#[derive(Clone, Debug)]
pub struct MonicEnumerator<'f> {
    field: &'f Field,
    degree: usize,
    leading: Vec<Fel>,
    ending: Vec<Fel>,
    count: u64,
}

impl<'f> MonicEnumerator<'f> {
    pub fn new(field: &'f Field, degree: usize, leading: &[Fel], ending: &[Fel]) -> Result<Self> {
        if degree == 0 {
            return precondition("enumeration degree must be >= 1");
        }
        if leading.len() + ending.len() > degree {
            return precondition(format!(
                "windows of length {} + {} do not fit in degree {degree}",
                leading.len(),
                ending.len()
            ));
        }
        if ending.first().is_some_and(|b| b.is_zero()) {
            return precondition("constant coefficient b0 must be nonzero");
        }
        if leading.iter().chain(ending).any(|&c| !field.contains(c)) {
            return Err(Error::ForeignElement);
        }
        let free = degree - leading.len() - ending.len();
        let count = (field.q() as u64).checked_pow(free as u32).ok_or(Error::Budget {
            what: "monic enumeration",
            needed: u128::MAX,
            budget: u64::MAX as u128,
        })?;
        Ok(MonicEnumerator {
            field,
            degree,
            leading: leading.to_vec(),
            ending: ending.to_vec(),
            count,
        })
    }

    pub fn all(field: &'f Field, degree: usize) -> Result<Self> {
        Self::new(field, degree, &[], &[])
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// The `n`-th polynomial of the stream.
    pub fn get(&self, mut n: u64) -> Poly {
        let q = self.field.q() as u64;
        let d = self.degree;
        let mut v = vec![Fel::ZERO; d + 1];
        v[d] = self.field.one();
        for (j, &b) in self.ending.iter().enumerate() {
            v[j] = b;
        }
        for (j, &a) in self.leading.iter().enumerate() {
            v[d - 1 - j] = a;
        }
        for c in v.iter_mut().take(d - self.leading.len()).skip(self.ending.len()) {
            *c = Fel((n % q) as u32);
            n /= q;
        }
        Poly::from_coeffs(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = Poly> + '_ {
        (0..self.count).map(move |n| self.get(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = f(2);
        let r = PolyRing::new(&f2);
        let xp1 = r.parse("x+1").unwrap();
        assert_eq!(r.fmt(&r.mul(&xp1, &xp1)), "x^2+1");
        assert_eq!(r.gcd(&r.parse("x^2+1").unwrap(), &xp1), xp1);

        let f3 = f(3);
        let r3 = PolyRing::new(&f3);
        let (_, rem) = r3
            .divmod(&r3.parse("x^2+1").unwrap(), &r3.parse("x+1").unwrap())
            .unwrap();
        assert_eq!(r3.fmt(&rem), "2");
        assert_eq!(r3.divmod(&xp1, &Poly::zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn reciprocal_examples() {
        let f3 = f(3);
        let r = PolyRing::new(&f3);
        let g = r.reciprocal(&r.parse("x^3+2*x+1").unwrap()).unwrap();
        assert_eq!(r.fmt(&g.poly), "x^3+2*x^2+1");
        assert!(!g.degree_dropped);

        let f2 = f(2);
        let r2 = PolyRing::new(&f2);
        let g = r2.reciprocal(&r2.parse("x^2+x").unwrap()).unwrap();
        assert_eq!(r2.fmt(&g.poly), "x+1");
        assert!(g.degree_dropped);
        let p = r2.parse("x^2+x+1").unwrap();
        assert_eq!(r2.reciprocal(&p).unwrap().poly, p);
        assert!(r2.reciprocal(&Poly::zero()).is_err());
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = f(2);
        let r = PolyRing::new(&f2);
        let t = |s: &str| r.is_irreducible(&r.parse(s).unwrap()).unwrap();
        assert!(t("x^2+x+1"));
        assert!(!t("x^2+1"));
        assert!(t("x^4+x^3+x^2+x+1"));
        assert!(!t("x^4+x^2+1"));
        assert!(r.is_irreducible(&r.one()).is_err());
        let f3 = f(3);
        let r3 = PolyRing::new(&f3);
        assert!(r3.is_irreducible(&r3.parse("2*x+1").unwrap()).is_err());
    }

    #[test]
    fn self_reciprocal_examples() {
        let f2 = f(2);
        let r = PolyRing::new(&f2);
        assert!(r.parse("x^4+x^3+x^2+x+1").unwrap().is_self_reciprocal());
        assert!(!r.parse("x^4+x+1").unwrap().is_self_reciprocal());
        assert!(r.parse("x+1").unwrap().is_self_reciprocal());
    }

    #[test]
    fn parse_forms() {
        let f4 = f(4);
        let r = PolyRing::new(&f4);
        let p = r.parse("(1+t)*x^2+t*x+1").unwrap();
        assert_eq!(r.fmt(&p), "(1+t)*x^2+t*x+1");
        assert_eq!(r.parse("1,t,1+t").unwrap(), p);
        let f3 = f(3);
        let r3 = PolyRing::new(&f3);
        assert_eq!(r3.parse("1,0,0,1,1").unwrap(), r3.parse("x^4+x^3+1").unwrap());
        assert_eq!(r3.parse("x^2-1").unwrap(), r3.parse("x^2+2").unwrap());
        assert!(r3.parse("x^^2").is_err());
    }

    #[test]
    fn enumeration_examples() {
        let f2 = f(2);
        let r = PolyRing::new(&f2);
        let all: Vec<String> = MonicEnumerator::all(&f2, 2)
            .unwrap()
            .iter()
            .map(|p| r.fmt(&p))
            .collect();
        assert_eq!(all, ["x^2", "x^2+1", "x^2+x", "x^2+x+1"]);

        let e = MonicEnumerator::new(&f2, 4, &[f2.one()], &[]).unwrap();
        assert_eq!(e.len(), 8);
        assert!(e.iter().all(|p| p.coeff(3) == f2.one()));

        let f3 = f(3);
        let e = MonicEnumerator::new(&f3, 3, &[], &[f3.one()]).unwrap();
        assert_eq!(e.len(), 9);
        assert!(e.iter().all(|p| p.coeff(0) == f3.one()));

        assert!(MonicEnumerator::new(&f3, 3, &[], &[Fel::ZERO]).is_err());
        assert!(MonicEnumerator::new(&f3, 2, &[f3.one(); 2], &[f3.one()]).is_err());
    }

    fn trial_division_irreducible(r: &PolyRing<'_>, p: &Poly) -> bool {
        let n = p.degree().finite().unwrap();
        for k in 1..=n / 2 {
            for g in MonicEnumerator::all(r.field(), k).unwrap().iter() {
                if r.rem(p, &g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn necklace(q: u64, d: u64) -> u64 {
        let mut s: i64 = 0;
        for k in 1..=d {
            if d.is_multiple_of(k) {
                s += crate::count::moebius(k) as i64 * (q as i64).pow((d / k) as u32);
            }
        }
        (s / d as i64) as u64
    }

    #[test]
    fn rabin_matches_trial_division() {
        for q in [2u64, 3, 4] {
            let fq = f(q);
            let r = PolyRing::new(&fq);
            let max = if q == 2 {
                6
            } else if q == 3 {
                5
            } else {
                4
            };
            for d in 1..=max {
                for p in MonicEnumerator::all(&fq, d).unwrap().iter() {
                    assert_eq!(
                        r.is_irreducible(&p).unwrap(),
                        trial_division_irreducible(&r, &p),
                        "q={q} {}",
                        r.fmt(&p)
                    );
                }
            }
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        for (q, max) in [(2u64, 10usize), (3, 8), (4, 6), (5, 5)] {
            let fq = f(q);
            let r = PolyRing::new(&fq);
            for d in 1..=max {
                let n = MonicEnumerator::all(&fq, d)
                    .unwrap()
                    .iter()
                    .filter(|p| r.is_irreducible(p).unwrap())
                    .count() as u64;
                assert_eq!(n, necklace(q, d as u64), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn reciprocal_involution_and_irreducibility() {
        for q in [2u64, 3] {
            let fq = f(q);
            let r = PolyRing::new(&fq);
            for d in 1..=6 {
                for p in MonicEnumerator::all(&fq, d).unwrap().iter() {
                    if p.coeff(0).is_zero() {
                        continue;
                    }
                    let rp = r.reciprocal(&p).unwrap().poly;
                    assert_eq!(r.reciprocal(&rp).unwrap().poly, p);
                    let rp = r.make_monic(&rp);
                    assert_eq!(r.is_irreducible(&p).unwrap(), r.is_irreducible(&rp).unwrap());
                }
            }
        }
    }

    #[test]
    fn no_odd_degree_srim_above_one() {
        for q in [2u64, 3] {
            let fq = f(q);
            let r = PolyRing::new(&fq);
            for d in (3..=7).step_by(2) {
                let found = MonicEnumerator::all(&fq, d)
                    .unwrap()
                    .iter()
                    .any(|p| p.is_self_reciprocal() && r.is_irreducible(&p).unwrap());
                assert!(!found, "q={q} d={d}");
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn divmod_reconstructs(a in proptest::collection::vec(0u32..5, 0..9),
                               b in proptest::collection::vec(0u32..5, 1..6)) {
            let f5 = Field::prime(5).unwrap();
            let r = PolyRing::new(&f5);
            let fa = Poly::from_coeffs(a.into_iter().map(Fel).collect());
            let fb = Poly::from_coeffs(b.into_iter().map(Fel).collect());
            proptest::prop_assume!(!fb.is_zero());
            let (qt, rm) = r.divmod(&fa, &fb).unwrap();
            proptest::prop_assert!(rm.degree() < fb.degree());
            proptest::prop_assert_eq!(r.add(&r.mul(&qt, &fb), &rm), fa);
        }
    }
}

//! Brute-force ground truth: enumerate monic polynomials, test irreducibility
//! by sieving out products (or Rabin's test), and read windows/classes directly.
//!
//! Nothing here touches characters or weight polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::gf::{Fel, Field};
use crate::hayes::{class_of, GroupStructure, HayesClass};
use crate::poly::{MonicEnumerator, Poly, PolyRing};

pub const DEFAULT_BUDGET: u64 = 1 << 24;
pub const WITNESS_CAP: usize = 32;

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Largest number of candidate polynomials one call may visit.
    pub budget: u64,
    pub witnesses: bool,
    pub witness_cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: DEFAULT_BUDGET,
            witnesses: false,
            witness_cap: WITNESS_CAP,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Irreducible,
    Srim,
    #[serde(rename = "F")]
    WeightedF,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OracleParams {
    pub kind: OracleKind,
    pub q: u32,
    pub d: u64,
    pub ell: usize,
    pub t: usize,
    pub eps: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub params: OracleParams,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<String>>,
    /// Candidates examined.
    pub visited: u64,
    pub elapsed_ms: f64,
}

fn check_budget(what: &'static str, needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::Budget {
            what,
            needed,
            budget: budget as u128,
        });
    }
    Ok(())
}

fn candidates(q: u64, n: u64) -> u128 {
    (q as u128).saturating_pow(n as u32)
}

type IrrKey = (u32, u32, Option<Vec<u32>>, usize);

/// All monic irreducible polynomials of degree `d`, in enumeration order.
/// Results are cached per field modulus and degree.
pub fn irreducibles(field: &Field, d: usize, budget: u64) -> Result<Arc<Vec<Poly>>> {
    static CACHE: OnceLock<Mutex<HashMap<IrrKey, Arc<Vec<Poly>>>>> = OnceLock::new();
    if d == 0 {
        return precondition("degree must be >= 1");
    }
    check_budget(
        "monic polynomials of degree d",
        candidates(field.q() as u64, d as u64),
        budget,
    )?;
    let key = (field.p(), field.r(), field.modulus().map(|m| m.to_vec()), d);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let found = if d >= 2 && candidates(field.q() as u64, d as u64) <= SIEVE_LIMIT {
        sieve_irreducibles(field, d, budget)?
    } else {
        rabin_irreducibles(field, d)?
    };
    let v = Arc::new(found);
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

const SIEVE_LIMIT: u128 = 1 << 28;

/// Irreducibles of degree `d` by Rabin's test on every monic polynomial.
pub fn rabin_irreducibles(field: &Field, d: usize) -> Result<Vec<Poly>> {
    let ring = PolyRing::new(field);
    let e = MonicEnumerator::all(field, d)?;
    (0..e.len())
        .into_par_iter()
        .filter_map(|n| {
            let f = e.get(n);
            match ring.is_irreducible(&f) {
                Ok(true) => Some(Ok(f)),
                Ok(false) => None,
                Err(err) => Some(Err(err)),
            }
        })
        .collect()
}

// Marks every product g*h with g irreducible of degree a <= d/2 and h monic of
// degree d-a; what is left unmarked is irreducible. Index n has base-q digit j
// equal to the coefficient of x^j, as in MonicEnumerator.
fn sieve_irreducibles(field: &Field, d: usize, budget: u64) -> Result<Vec<Poly>> {
    let q = field.q() as usize;
    let total = q.pow(d as u32);
    let mut reducible = vec![false; total];
    for a in 1..=d / 2 {
        let lows = irreducibles(field, a, budget)?;
        let b = d - a;
        for g in lows.iter() {
            let gc: Vec<Fel> = (0..=a).map(|i| g.coeff(i)).collect();
            let mut h = vec![Fel::ZERO; b];
            let mut prod = vec![Fel::ZERO; d + 1];
            prod[b..].copy_from_slice(&gc);
            'odometer: loop {
                let idx = prod[..d].iter().rev().fold(0usize, |acc, c| acc * q + c.0 as usize);
                reducible[idx] = true;
                let mut j = 0;
                loop {
                    if j == b {
                        break 'odometer;
                    }
                    let old = h[j];
                    let new = Fel((old.0 + 1) % q as u32);
                    h[j] = new;
                    let delta = field.sub(new, old);
                    for (i, &c) in gc.iter().enumerate() {
                        prod[i + j] = field.add(prod[i + j], field.mul(delta, c));
                    }
                    if !new.is_zero() {
                        break;
                    }
                    j += 1;
                }
            }
        }
    }
    let e = MonicEnumerator::all(field, d)?;
    Ok(reducible
        .iter()
        .enumerate()
        .filter(|(_, &r)| !r)
        .map(|(n, _)| e.get(n as u64))
        .collect())
}

/// Literal window reading: `a_j = [x^{d-j}] f` for `j = 1..l` and
/// `b_j = [x^j] f` for `j < t`; `None` when a window does not fit in `f`.
pub fn read_windows(f: &Poly, ell: usize, t: usize) -> Option<HayesClass> {
    let d = f.degree().finite()?;
    if ell > d || t > d {
        return None;
    }
    Some(HayesClass::new(
        (1..=ell).map(|j| f.coeff(d - j)).collect(),
        (0..t).map(|j| f.coeff(j)).collect(),
    ))
}

/// The `q^d` monic palindromes of degree `2d`, built from their free
/// coefficients `c_1..c_d`.
pub fn palindromes(field: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.q() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |n| palindrome(field, d, n))
}

fn palindrome(field: &Field, d: usize, mut n: u64) -> Poly {
    let q = field.q() as u64;
    let mut c = vec![Fel::ZERO; 2 * d + 1];
    c[0] = field.one();
    c[2 * d] = field.one();
    for i in 1..=d {
        let x = crate::gf::Fel((n % q) as u32);
        n /= q;
        c[i] = x;
        c[2 * d - i] = x;
    }
    Poly::from_coeffs(c)
}

/// All SRIM polynomials of degree `2d`.
pub fn srim_polys(field: &Field, d: usize, budget: u64) -> Result<Vec<Poly>> {
    if d == 0 {
        return precondition("half-degree must be >= 1");
    }
    check_budget(
        "palindromes of degree 2d",
        candidates(field.q() as u64, d as u64),
        budget,
    )?;
    let ring = PolyRing::new(field);
    let count = (field.q() as u64).pow(d as u32);
    (0..count)
        .into_par_iter()
        .filter_map(|n| {
            let f = palindrome(field, d, n);
            match ring.is_irreducible(&f) {
                Ok(true) => Some(Ok(f)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect()
}

fn params(kind: OracleKind, field: &Field, d: u64, c: &HayesClass, eps: String) -> OracleParams {
    OracleParams {
        kind,
        q: field.q(),
        d,
        ell: c.ell(),
        t: c.t(),
        eps,
    }
}

fn finish(
    params: OracleParams,
    field: &Field,
    matches: Vec<&Poly>,
    visited: u64,
    start: Instant,
    opts: &OracleOptions,
) -> OracleResult {
    let ring = PolyRing::new(field);
    let witnesses = opts
        .witnesses
        .then(|| matches.iter().take(opts.witness_cap).map(|f| ring.fmt(f)).collect());
    OracleResult {
        params,
        count: matches.len() as u64,
        witnesses,
        visited,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn class_text(field: &Field, c: &HayesClass) -> String {
    let list = |v: &[Fel]| v.iter().map(|&x| field.fmt_elem(x)).collect::<Vec<_>>().join(",");
    if c.t() == 0 {
        format!("a=({})", list(&c.leading))
    } else {
        format!("a=({});b=({})", list(&c.leading), list(&c.ending))
    }
}

/// Irreducible monic `f` of degree `d` with `<f> = eps`.
pub fn oracle_i(field: &Field, d: usize, eps: &HayesClass, opts: &OracleOptions) -> Result<OracleResult> {
    let start = Instant::now();
    let (ell, t) = (eps.ell(), eps.t());
    let irr = irreducibles(field, d, opts.budget)?;
    let mut matches = Vec::new();
    for f in irr.iter() {
        if t >= 1 && f.coeff(0).is_zero() {
            continue;
        }
        if class_of(field, f, ell, t)? == *eps {
            matches.push(f);
        }
    }
    let visited = (field.q() as u64).pow(d as u32);
    let p = params(OracleKind::Irreducible, field, d as u64, eps, class_text(field, eps));
    Ok(finish(p, field, matches, visited, start, opts))
}

/// SRIM `f` of degree `2d` whose leading window is `eps`.
pub fn oracle_s(field: &Field, d: usize, eps: &HayesClass, opts: &OracleOptions) -> Result<OracleResult> {
    if eps.t() != 0 {
        return precondition("SRIM classes have no ending window");
    }
    let start = Instant::now();
    let srim = srim_polys(field, d, opts.budget)?;
    let mut matches = Vec::new();
    for f in &srim {
        if class_of(field, f, eps.ell(), 0)? == *eps {
            matches.push(f);
        }
    }
    let visited = (field.q() as u64).pow(d as u32);
    let p = params(OracleKind::Srim, field, d as u64, eps, class_text(field, eps));
    Ok(finish(p, field, matches, visited, start, opts))
}

/// `I_q(d; eps)` for every class of `g`, indexed by class.
pub fn oracle_i_table(g: &GroupStructure, d: usize, budget: u64) -> Result<Vec<u64>> {
    let mut out = vec![0u64; g.size()];
    for f in irreducibles(g.field(), d, budget)?.iter() {
        if g.t() >= 1 && f.coeff(0).is_zero() {
            continue;
        }
        out[g.class_of_poly(f)?] += 1;
    }
    Ok(out)
}

/// The same table by literal windows; only meaningful for `d >= l + t`.
pub fn oracle_i_table_by_windows(g: &GroupStructure, d: usize, budget: u64) -> Result<Vec<u64>> {
    if d < g.ell() + g.t() {
        return precondition("literal windows overlap when d < l + t");
    }
    let mut out = vec![0u64; g.size()];
    for f in irreducibles(g.field(), d, budget)?.iter() {
        if g.t() >= 1 && f.coeff(0).is_zero() {
            continue;
        }
        let w = read_windows(f, g.ell(), g.t()).expect("windows fit");
        out[g.index_of(&w)?] += 1;
    }
    Ok(out)
}

/// `S_q(d; eps)` for every class of `g` (`t = 0`), indexed by class.
pub fn oracle_s_table(g: &GroupStructure, d: usize, budget: u64) -> Result<Vec<u64>> {
    if g.t() != 0 {
        return precondition("SRIM classes have no ending window");
    }
    let mut out = vec![0u64; g.size()];
    for f in srim_polys(g.field(), d, budget)? {
        out[g.class_of_poly(&f)?] += 1;
    }
    Ok(out)
}

/// `F_q(d; eps) = sum_{k | d} (d/k) sum_{eps_1^k = eps} I(d/k; eps_1)` for every
/// class, with `k`-th powers taken by repeated class multiplication.
pub fn oracle_f_table(g: &GroupStructure, d: usize, budget: u64) -> Result<Vec<u64>> {
    let mut out = vec![0u64; g.size()];
    for k in (1..=d).filter(|k| d.is_multiple_of(*k)) {
        let inner = oracle_i_table(g, d / k, budget)?;
        for (eps1, &count) in inner.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let mut pw = eps1;
            for _ in 1..k {
                pw = g.mul(pw, eps1);
            }
            out[pw] += (d / k) as u64 * count;
        }
    }
    Ok(out)
}

/// Single-class form of [`oracle_f_table`].
pub fn oracle_f(g: &GroupStructure, d: usize, eps: usize, opts: &OracleOptions) -> Result<OracleResult> {
    let start = Instant::now();
    let table = oracle_f_table(g, d, opts.budget)?;
    let c = g.class_at(eps);
    let visited: u64 = (1..=d)
        .filter(|k| d.is_multiple_of(*k))
        .map(|k| (g.q()).pow((d / k) as u32))
        .sum();
    Ok(OracleResult {
        params: params(OracleKind::WeightedF, g.field(), d as u64, &c, g.fmt_index(eps)),
        count: table[eps],
        witnesses: None,
        visited,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::necklace;

    fn field(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn group(q: u64, ell: usize, t: usize) -> GroupStructure {
        GroupStructure::build(Arc::new(field(q)), ell, t).unwrap()
    }

    #[test]
    fn irreducible_examples() {
        let f2 = field(2);
        let opts = OracleOptions {
            witnesses: true,
            ..Default::default()
        };
        let one = f2.one();
        let r = oracle_i(&f2, 4, &HayesClass::new(vec![one], vec![]), &opts).unwrap();
        assert_eq!(r.count, 2);
        let w = r.witnesses.unwrap();
        assert_eq!(w, ["x^4+x^3+1", "x^4+x^3+x^2+x+1"]);
        assert_eq!(
            oracle_i(&f2, 2, &HayesClass::new(vec![], vec![]), &opts).unwrap().count,
            1
        );
        assert_eq!(
            oracle_i(&f2, 3, &HayesClass::new(vec![], vec![]), &opts).unwrap().count,
            2
        );

        let f3 = field(3);
        let c = HayesClass::new(vec![], vec![f3.one()]);
        let r = oracle_i(&f3, 2, &c, &opts).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.witnesses.unwrap(), ["x^2+1"]);
    }

    #[test]
    fn srim_examples() {
        let f2 = field(2);
        let opts = OracleOptions::default();
        assert_eq!(
            oracle_s(&f2, 2, &HayesClass::new(vec![], vec![]), &opts).unwrap().count,
            1
        );
        assert_eq!(
            oracle_s(&f2, 1, &HayesClass::new(vec![f2.one()], vec![]), &opts)
                .unwrap()
                .count,
            1
        );
        // no palindromic irreducible of odd degree > 1
        let ring = PolyRing::new(&f2);
        for d in [3usize, 5] {
            for f in MonicEnumerator::all(&f2, d).unwrap().iter() {
                if f.is_self_reciprocal() {
                    assert!(!ring.is_irreducible(&f).unwrap());
                }
            }
        }
    }

    #[test]
    fn palindrome_enumeration_is_complete() {
        for (q, d) in [(2u64, 3usize), (3, 2), (4, 2)] {
            let f = field(q);
            let pals: Vec<Poly> = palindromes(&f, d).collect();
            assert_eq!(pals.len() as u64, q.pow(d as u32));
            let brute = MonicEnumerator::all(&f, 2 * d)
                .unwrap()
                .iter()
                .filter(|p| p.is_self_reciprocal())
                .count();
            assert_eq!(brute, pals.len());
            let distinct: std::collections::HashSet<_> = pals.iter().map(|p| p.coeffs().to_vec()).collect();
            assert_eq!(distinct.len(), pals.len());
        }
    }

    #[test]
    fn class_tables_partition_the_irreducibles() {
        for (q, ell, t) in [(2u64, 2usize, 1usize), (3, 1, 1), (4, 1, 0), (5, 0, 2)] {
            let g = group(q, ell, t);
            for d in 1..=5 {
                if q.pow(d as u32) > 4000 {
                    continue;
                }
                let table = oracle_i_table(&g, d, DEFAULT_BUDGET).unwrap();
                let total: u64 = table.iter().sum();
                let expected = necklace(q, d as u64) as u64 - u64::from(t >= 1 && d == 1);
                assert_eq!(total, expected, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn windows_agree_with_classes_when_they_fit() {
        for (q, ell, t) in [(2u64, 2usize, 2usize), (3, 1, 2), (4, 1, 1), (2, 3, 0)] {
            let g = group(q, ell, t);
            for d in ell + t..=ell + t + 2 {
                assert_eq!(
                    oracle_i_table(&g, d, DEFAULT_BUDGET).unwrap(),
                    oracle_i_table_by_windows(&g, d, DEFAULT_BUDGET).unwrap()
                );
            }
        }
        assert!(oracle_i_table_by_windows(&group(2, 2, 1), 2, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn weighted_count_for_trivial_group_is_q_to_the_d() {
        for q in [2u64, 3, 4] {
            let g = group(q, 0, 0);
            for d in 1..=5 {
                assert_eq!(oracle_f_table(&g, d, DEFAULT_BUDGET).unwrap(), [q.pow(d as u32)]);
            }
        }
    }

    #[test]
    fn sieve_agrees_with_rabin() {
        for (q, d) in [(2u64, 1usize), (2, 8), (2, 11), (3, 6), (4, 5), (5, 4), (7, 3), (9, 3)] {
            let f = Field::with_order(q).unwrap();
            let a = irreducibles(&f, d, DEFAULT_BUDGET).unwrap();
            let b = rabin_irreducibles(&f, d).unwrap();
            assert_eq!(*a, b, "q={q} d={d}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = field(2);
        let opts = OracleOptions {
            budget: 100,
            ..Default::default()
        };
        let err = oracle_i(&f, 8, &HayesClass::new(vec![], vec![]), &opts).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn visited_counts_are_monotone() {
        let f = field(3);
        let c = HayesClass::new(vec![], vec![]);
        let opts = OracleOptions::default();
        let v: Vec<u64> = (1..=6).map(|d| oracle_i(&f, d, &c, &opts).unwrap().visited).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}

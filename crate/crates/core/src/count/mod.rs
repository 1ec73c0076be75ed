//! Exact counts `F_q(d; eps)`, `I_q(d; eps)` and `S_q(d; eps)` from character
//! sums over weight polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{diagonal_weight_polys, CycInt, WeightPoly, WeightSystem};
use crate::error::{precondition, Error, Result};
use crate::gf::Field;
use crate::hayes::{GroupOptions, GroupStructure};
use crate::poly::PolyRing;

pub fn moebius(n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`.
pub fn necklace(q: u64, d: u64) -> u128 {
    let total: i128 = divisors(d)
        .into_iter()
        .map(|k| moebius(k) as i128 * (q as i128).pow((d / k) as u32))
        .sum();
    (total / d as i128) as u128
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = acc * small_binom(ni, ki, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

// C(n, j) with C(n, 0) = 1 for every n and C(n, j) = 0 for n < 0 < j.
fn binom_signed_mod_p(n: i64, j: u64, p: u64) -> u64 {
    if j == 0 {
        1
    } else if n < 0 {
        0
    } else {
        binom_mod_p(n as u64, j, p)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// The bijection `phi_d` of `E^l`:
/// `f_k = sum_{j <= k/2} C(d+2j-k, j) g_{k-2j}`, `g_0 = 1`.
pub fn phi_d(g: &GroupStructure, eps: usize, d: u64, dir: Direction) -> Result<usize> {
    if g.t() != 0 {
        return precondition("phi_d acts on E^l (t = 0)");
    }
    let field = g.field();
    let p = field.p() as u64;
    let input = g.class_at(eps).leading;
    let ell = g.ell();
    let coef = |k: usize, j: usize| {
        let n = d as i64 + 2 * j as i64 - k as i64;
        field.from_int(binom_signed_mod_p(n, j as u64, p) as i64)
    };
    let mut out = vec![field.zero(); ell];
    for k in 1..=ell {
        // terms with j >= 1 use g_{k-2j}: the input (forward) or the
        // already solved outputs (inverse)
        let mut rest = field.zero();
        for j in 1..=k / 2 {
            let i = k - 2 * j;
            let gi = match (i, dir) {
                (0, _) => field.one(),
                (_, Direction::Forward) => input[i - 1],
                (_, Direction::Inverse) => out[i - 1],
            };
            rest = field.add(rest, field.mul(coef(k, j), gi));
        }
        out[k - 1] = match dir {
            Direction::Forward => field.add(input[k - 1], rest),
            Direction::Inverse => field.sub(input[k - 1], rest),
        };
    }
    g.index_of(&crate::hayes::HayesClass::new(out, Vec::new()))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Oracle,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountKind {
    Irreducible,
    Srim,
    #[serde(rename = "F")]
    WeightedF,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CountParams {
    pub kind: CountKind,
    pub q: u32,
    pub d: u64,
    pub ell: usize,
    pub t: usize,
    pub eps: String,
}

/// An exact count with its main term and the deviation from it.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CountReport {
    pub params: CountParams,
    pub value: i128,
    pub method: Method,
    /// Rationals as `"num/den"` (or an integer).
    pub main_term: String,
    pub error_term: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CountReport {
    pub fn main_term_rational(&self) -> BigRational {
        parse_rational(&self.main_term)
    }
}

pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse().unwrap(), d.parse().unwrap()),
        None => BigRational::from_integer(s.parse().unwrap()),
    }
}

// Largest q^d the exact engine accepts; keeps all intermediate values far
// inside i128.
const MAX_POWER_BITS: u32 = 96;

fn q_pow(q: u64, d: u64) -> Result<i128> {
    let v = (q as u128)
        .checked_pow(d as u32)
        .filter(|v| v.leading_zeros() >= 128 - MAX_POWER_BITS);
    match v {
        Some(v) if d <= u32::MAX as u64 => Ok(v as i128),
        _ => precondition(format!("q^d = {q}^{d} exceeds 2^{MAX_POWER_BITS}")),
    }
}

fn exact_div(num: i128, den: i128, what: &str) -> Result<i128> {
    if num % den != 0 {
        return Err(Error::Internal(format!("{what}: {num} is not divisible by {den}")));
    }
    Ok(num / den)
}

fn integer(v: &CycInt, what: &str) -> Result<i128> {
    v.int_test()
        .ok_or_else(|| Error::Internal(format!("{what} is not a rational integer: {v}")))
}

struct Family {
    polys: Vec<WeightPoly>,
    // sums[delta][d-1] = rho_d(P(z; delta))
    sums: RwLock<Vec<Vec<CycInt>>>,
}

impl Family {
    fn new(polys: Vec<WeightPoly>) -> Self {
        let n = polys.len();
        Family {
            polys,
            sums: RwLock::new(vec![Vec::new(); n]),
        }
    }

    fn ensure(&self, d: usize) {
        if self.sums.read().unwrap().first().is_none_or(|s| s.len() >= d) {
            return;
        }
        let fresh: Vec<Vec<CycInt>> = self.polys.par_iter().map(|p| p.power_sums(d)).collect();
        let mut w = self.sums.write().unwrap();
        if w.first().is_none_or(|s| s.len() < d) {
            *w = fresh;
        }
    }

    fn rho(&self, delta: usize, d: usize) -> CycInt {
        self.ensure(d);
        self.sums.read().unwrap()[delta][d - 1].clone()
    }
}

struct Diagonal {
    aux: Arc<GroupStructure>,
    family: Family,
}

/// Counting engine for one group, with per-degree memo tables.
pub struct Counter {
    group: Arc<GroupStructure>,
    opts: GroupOptions,
    exps: Vec<Vec<u64>>,
    family: Family,
    f_memo: Mutex<HashMap<u64, Arc<Vec<i128>>>>,
    i_memo: Mutex<HashMap<u64, Arc<Vec<i128>>>>,
    s_memo: Mutex<HashMap<u64, Arc<Vec<i128>>>>,
    diagonal: Mutex<Option<Arc<Diagonal>>>,
}

impl Counter {
    pub fn new(group: Arc<GroupStructure>) -> Result<Counter> {
        Self::with_options(group, GroupOptions::default())
    }

    pub fn with_options(group: Arc<GroupStructure>, opts: GroupOptions) -> Result<Counter> {
        let polys = WeightSystem::new(&group)?.all();
        let exps = (0..group.size()).map(|e| group.exponents(e)).collect();
        Ok(Counter {
            group,
            opts,
            exps,
            family: Family::new(polys),
            f_memo: Default::default(),
            i_memo: Default::default(),
            s_memo: Default::default(),
            diagonal: Default::default(),
        })
    }

    pub fn group(&self) -> &GroupStructure {
        &self.group
    }

    pub fn weight_polys(&self) -> &[WeightPoly] {
        &self.family.polys
    }

    /// `D = sum_{eps != 1} deg P(z; eps)`.
    pub fn d_total(&self) -> u64 {
        self.family
            .polys
            .iter()
            .filter(|p| p.eps != self.group.identity())
            .map(|p| p.degree() as u64)
            .sum()
    }

    fn char_exp(&self, a: usize, b: usize) -> u64 {
        self.group.char_exponent_vecs(&self.exps[a], &self.exps[b])
    }

    /// `sum_{delta != 1, keep(delta)} a(delta, eps^{-1}) rho_d(P(z; delta))`
    /// over the family, as an element of `Z[w_M]`.
    fn character_sum(
        &self,
        family: &Family,
        conductor: u64,
        eps: usize,
        d: usize,
        keep: impl Fn(usize) -> bool,
    ) -> CycInt {
        let l = self.group.conductor();
        let step = conductor / l;
        let mut acc = vec![0i128; conductor as usize];
        for delta in 1..self.group.size() {
            if !keep(delta) {
                continue;
            }
            if family.polys[delta].degree() == 0 {
                continue;
            }
            let rho = family.rho(delta, d);
            let k = (l - self.char_exp(delta, eps)) % l;
            rho.accumulate_shifted(k * step, &mut acc);
        }
        CycInt::from_group_ring(conductor, acc)
    }

    /// `F_q(d; eps)` for every class, memoised per degree.
    pub fn f_all(&self, d: u64) -> Result<Arc<Vec<i128>>> {
        if d == 0 {
            return precondition("degree must be >= 1");
        }
        if let Some(v) = self.f_memo.lock().unwrap().get(&d) {
            return Ok(v.clone());
        }
        let g = &self.group;
        let main = q_pow(g.q(), d)? - i128::from(g.t() > 0);
        let size = g.size() as i128;
        self.family.ensure(d as usize);
        let values: Vec<i128> = (0..g.size())
            .into_par_iter()
            .map(|eps| {
                let s = self.character_sum(&self.family, g.conductor(), eps, d as usize, |_| true);
                let s = integer(&s, "character sum for F")?;
                exact_div(main - s, size, "F * |E|")
            })
            .collect::<Result<_>>()?;
        if let Some(bad) = values.iter().find(|&&v| v < 0) {
            return Err(Error::Internal(format!("negative F value {bad}")));
        }
        let v = Arc::new(values);
        Ok(self.f_memo.lock().unwrap().entry(d).or_insert(v).clone())
    }

    pub fn f(&self, d: u64, eps: usize) -> Result<i128> {
        Ok(self.f_all(d)?[eps])
    }

    /// `I_q(d; eps)` for every class by Moebius inversion of `F`.
    pub fn i_all(&self, d: u64) -> Result<Arc<Vec<i128>>> {
        if let Some(v) = self.i_memo.lock().unwrap().get(&d) {
            return Ok(v.clone());
        }
        let g = &self.group;
        let mut acc = vec![0i128; g.size()];
        for k in divisors(d) {
            let mu = moebius(k) as i128;
            if mu == 0 {
                continue;
            }
            let fk = self.f_all(d / k)?;
            for (eps, slot) in acc.iter_mut().enumerate() {
                let s: i128 = g.kth_roots(eps, k).into_iter().map(|r| fk[r]).sum();
                *slot += mu * s;
            }
        }
        let values = acc
            .into_iter()
            .map(|v| {
                let v = exact_div(v, d as i128, "Moebius sum for I")?;
                if v < 0 {
                    return Err(Error::Internal(format!("negative I value {v}")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let v = Arc::new(values);
        Ok(self.i_memo.lock().unwrap().entry(d).or_insert(v).clone())
    }

    pub fn i(&self, d: u64, eps: usize) -> Result<i128> {
        Ok(self.i_all(d)?[eps])
    }

    /// Character side of the root-set sum
    /// `sum_{eps_1 in eps^{1/k}} F(d/k; eps_1)`.
    pub fn root_set_f_sum(&self, d: u64, eps: usize, k: u64) -> Result<i128> {
        let g = &self.group;
        if !d.is_multiple_of(k) {
            return precondition("k must divide d");
        }
        let roots = g.kth_roots(eps, k);
        if roots.is_empty() {
            return Ok(0);
        }
        let dk = d / k;
        let n = roots.len() as i128;
        let main = q_pow(g.q(), dk)? - i128::from(g.t() > 0);
        let s = self.character_sum(&self.family, g.conductor(), roots[0], dk as usize, |delta| {
            g.root_count(delta, k) > 0
        });
        let s = integer(&s, "root-set character sum")?;
        exact_div(n * (main - s), g.size() as i128, "root-set F sum")
    }

    fn diagonal(&self) -> Result<Arc<Diagonal>> {
        let mut slot = self.diagonal.lock().unwrap();
        if let Some(d) = slot.as_ref() {
            return Ok(d.clone());
        }
        let (aux, polys) = diagonal_weight_polys(&self.group, &self.opts)?;
        let d = Arc::new(Diagonal {
            aux,
            family: Family::new(polys),
        });
        *slot = Some(d.clone());
        Ok(d)
    }

    /// `D' = sum_{delta != 1} deg P(z; delta, 1, delta)`; `t = 0` only.
    pub fn d_prime(&self) -> Result<u64> {
        let diag = self.diagonal()?;
        Ok(diag
            .family
            .polys
            .iter()
            .enumerate()
            .filter(|(d, _)| *d != self.group.identity())
            .map(|(_, p)| p.degree() as u64)
            .sum())
    }

    /// `sum_{eps_1 in eps^{1/k}} sum_m sum_delta F(d/k; eps_1 delta^{-1}, gamma^m, delta)`
    /// over `E^{l,l+1}`, evaluated on the character side.
    pub fn triple_sum_f(&self, d: u64, eps: usize, k: u64) -> Result<i128> {
        let g = &self.group;
        if g.t() != 0 {
            return precondition("the triple sum is defined for t = 0");
        }
        if k == 0 || !d.is_multiple_of(k) {
            return precondition("k must divide d");
        }
        let roots = g.kth_roots(eps, k);
        if roots.is_empty() {
            return Ok(0);
        }
        let diag = self.diagonal()?;
        let dk = d / k;
        let main = q_pow(g.q(), dk)? - 1;
        let s = self.character_sum(&diag.family, diag.aux.conductor(), roots[0], dk as usize, |delta| {
            g.root_count(delta, k) > 0
        });
        let s = integer(&s, "diagonal character sum")?;
        let qell = q_pow(g.q(), g.ell() as u64)?;
        exact_div(roots.len() as i128 * (main - s), qell, "triple F sum")
    }

    /// `sum_n sum_delta I(d; eps delta^{-1}, gamma^n, delta)` by Moebius
    /// inversion of [`Counter::triple_sum_f`].
    pub fn triple_sum_i(&self, d: u64, eps: usize) -> Result<i128> {
        let mut acc = 0i128;
        for k in divisors(d) {
            let mu = moebius(k) as i128;
            if mu != 0 {
                acc += mu * self.triple_sum_f(d, eps, k)?;
            }
        }
        exact_div(acc, d as i128, "triple I sum")
    }

    /// `S_q(d; eps)` for every `eps` in `E^l`: SRIM polynomials of degree
    /// `2d` in each class.
    pub fn s_all(&self, d: u64) -> Result<Arc<Vec<i128>>> {
        let g = &self.group;
        if g.t() != 0 {
            return precondition("SRIM counts use E^l (t = 0)");
        }
        if d == 0 {
            return precondition("half-degree must be >= 1");
        }
        if let Some(v) = self.s_memo.lock().unwrap().get(&d) {
            return Ok(v.clone());
        }
        let values = if d == 1 {
            self.s_base()?
        } else {
            let half = if d.is_multiple_of(2) {
                Some(self.s_all(d / 2)?)
            } else {
                None
            };
            let ivals = self.i_all(d)?;
            (0..g.size())
                .into_par_iter()
                .map(|eps| {
                    let mut twice = 0i128;
                    if let Some(h) = &half {
                        twice += g.kth_roots(eps, 2).into_iter().map(|r| h[r]).sum::<i128>();
                    }
                    twice += 2 * ivals[phi_d(g, eps, d, Direction::Inverse)?];
                    twice -= self.triple_sum_i(d, eps)?;
                    let v = exact_div(twice, 2, "SRIM recursion")?;
                    if v < 0 {
                        return Err(Error::Internal(format!("negative S value {v}")));
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()?
        };
        let v = Arc::new(values);
        Ok(self.s_memo.lock().unwrap().entry(d).or_insert(v).clone())
    }

    // degree-2 SRIM polynomials x^2 + a x + 1, by enumeration
    fn s_base(&self) -> Result<Vec<i128>> {
        let g = &self.group;
        let field = g.field();
        let ring = PolyRing::new(field);
        let mut out = vec![0i128; g.size()];
        for a in field.elements() {
            let f = ring.monic(&[field.one(), a]);
            if ring.is_irreducible(&f)? {
                out[g.class_of_poly(&f)?] += 1;
            }
        }
        Ok(out)
    }

    pub fn s(&self, d: u64, eps: usize) -> Result<i128> {
        if d > 1 && self.group.ell() as u64 > 2 * d {
            return precondition(format!("SRIM windows need l <= 2d (l = {}, d = {d})", self.group.ell()));
        }
        Ok(self.s_all(d)?[eps])
    }

    fn params(&self, kind: CountKind, d: u64, eps: usize) -> CountParams {
        CountParams {
            kind,
            q: self.group.field().q(),
            d,
            ell: self.group.ell(),
            t: self.group.t(),
            eps: self.group.fmt_index(eps),
        }
    }

    /// `(q^d - [t>0]) / (d |E|)`.
    pub fn irreducible_main_term(&self, d: u64) -> BigRational {
        let g = &self.group;
        let num = BigInt::from(g.q()).pow(d as u32) - BigInt::from(u8::from(g.t() > 0));
        BigRational::new(num, BigInt::from(d) * BigInt::from(g.size()))
    }

    /// `q^{d-l} / (2d)`.
    pub fn srim_main_term(&self, d: u64) -> BigRational {
        let g = &self.group;
        let q = BigInt::from(g.q());
        let ell = g.ell() as i32;
        let d32 = d as i32;
        let pow = if d32 >= ell {
            BigRational::from_integer(q.pow((d32 - ell) as u32))
        } else {
            BigRational::new(BigInt::from(1), q.pow((ell - d32) as u32))
        };
        pow / BigRational::from_integer(BigInt::from(2 * d))
    }

    pub fn report(&self, kind: CountKind, d: u64, eps: usize, value: i128, method: Method) -> CountReport {
        let (main, note) = match kind {
            CountKind::Irreducible => (self.irreducible_main_term(d), None),
            CountKind::WeightedF => {
                let g = &self.group;
                let num = BigInt::from(g.q()).pow(d as u32) - BigInt::from(u8::from(g.t() > 0));
                (BigRational::new(num, BigInt::from(g.size())), None)
            }
            CountKind::Srim => {
                let note = (self.group.ell() as u64 > d).then(|| "outside the proven range l <= d".to_string());
                (self.srim_main_term(d), note)
            }
        };
        let err = BigRational::from_integer(BigInt::from(value)) - &main;
        CountReport {
            params: self.params(kind, d, eps),
            value,
            method,
            main_term: fmt_rational(&main),
            error_term: fmt_rational(&err),
            note,
        }
    }

    pub fn f_report(&self, d: u64, eps: usize) -> Result<CountReport> {
        Ok(self.report(CountKind::WeightedF, d, eps, self.f(d, eps)?, Method::Formula))
    }

    pub fn i_report(&self, d: u64, eps: usize) -> Result<CountReport> {
        Ok(self.report(CountKind::Irreducible, d, eps, self.i(d, eps)?, Method::Formula))
    }

    pub fn s_report(&self, d: u64, eps: usize) -> Result<CountReport> {
        Ok(self.report(CountKind::Srim, d, eps, self.s(d, eps)?, Method::Formula))
    }
}

/// One-shot `F_q(d; eps)`.
pub fn f_count(g: Arc<GroupStructure>, d: u64, eps: usize) -> Result<CountReport> {
    Counter::new(g)?.f_report(d, eps)
}

/// One-shot `I_q(d; eps)`.
pub fn i_count(g: Arc<GroupStructure>, d: u64, eps: usize) -> Result<CountReport> {
    Counter::new(g)?.i_report(d, eps)
}

/// One-shot `S_q(d; eps)`.
pub fn s_count(g: Arc<GroupStructure>, d: u64, eps: usize) -> Result<CountReport> {
    Counter::new(g)?.s_report(d, eps)
}

/// Convenience for callers that only have a field.
pub fn counter_for(field: Arc<Field>, ell: usize, t: usize) -> Result<Counter> {
    Counter::new(Arc::new(GroupStructure::build(field, ell, t)?))
}

//! Upper and lower bounds for `I_q(d; eps)` and `S_q(d; eps)`, the SRIM
//! existence threshold, and the envelope sums `L_q`, `U_q`, `L'_q` that the
//! error constants come from.
//!
//! A bound is a short sum of terms `c * q^(a/b)` (some behind a `min`). It is
//! evaluated two ways: as rational enclosures of arbitrary precision, used for
//! every verdict, and as float [`Interval`]s.

pub mod interval;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::count::{divisors, fmt_rational, moebius, Counter};
use crate::error::{precondition, Error, Result};
use crate::hayes::{component_orders, identity_root_count, GroupStructure};

pub use interval::Interval;

/// `coef * q^(num/den)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: BigRational,
    pub num: i64,
    pub den: u64,
}

// `-min(alts)` when negative, else `min(alts)`
#[derive(Clone, Debug, PartialEq)]
struct Piece {
    negative: bool,
    alts: Vec<Term>,
}

fn rat(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn term(coef: BigRational, num: i64, den: u64) -> Term {
    Term { coef, num, den }
}

// [lo, hi] around q^(num/den) to `bits` fractional bits; a point when the
// power is rational
fn qpow_enclosure(q: u64, num: i64, den: u64, bits: u32) -> (BigRational, BigRational) {
    let n = BigInt::from(q).pow(num.unsigned_abs() as u32);
    let scale = BigInt::one() << bits as usize;
    let m = &n << (bits as usize * den as usize);
    let r = m.nth_root(den as u32);
    let lo = BigRational::new(r.clone(), scale.clone());
    let hi = if r.pow(den as u32) == m {
        lo.clone()
    } else {
        BigRational::new(r + 1, scale)
    };
    if num >= 0 {
        (lo, hi)
    } else {
        (hi.recip(), lo.recip())
    }
}

fn rat_interval<F: Float>(r: &BigRational) -> Interval<F> {
    let n = Interval::<F>::from_big(r.numer());
    let d = Interval::<F>::from_big(r.denom());
    n.div(d)
}

impl<F: Float> Interval<F> {
    fn from_big(n: &BigInt) -> Self {
        match n.to_i128() {
            Some(v) => Self::from_int(v),
            None => {
                let x = F::from(n.to_f64().unwrap()).unwrap();
                Self::exact(x)
                    * Self::new(
                        F::one() - F::epsilon() * F::from(4).unwrap(),
                        F::one() + F::epsilon() * F::from(4).unwrap(),
                    )
            }
        }
    }
}

pub fn round_up(r: &BigRational) -> f64 {
    let x = r.to_f64().unwrap_or(f64::INFINITY);
    match BigRational::from_float(x) {
        Some(v) if v < *r => x.next_up(),
        _ => x,
    }
}

pub fn round_down(r: &BigRational) -> f64 {
    let x = r.to_f64().unwrap_or(f64::NEG_INFINITY);
    match BigRational::from_float(x) {
        Some(v) if v > *r => x.next_down(),
        _ => x,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Upper,
    Lower,
}

/// One bound as a symbolic sum over powers of `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    q: u64,
    pieces: Vec<Piece>,
}

impl Bound {
    fn new(q: u64) -> Self {
        Bound { q, pieces: Vec::new() }
    }

    fn push(mut self, negative: bool, alts: Vec<Term>) -> Self {
        self.pieces.push(Piece { negative, alts });
        self
    }

    fn plus(self, t: Term) -> Self {
        self.push(false, vec![t])
    }

    fn minus(self, t: Term) -> Self {
        self.push(true, vec![t])
    }

    fn plus_min(self, a: Term, b: Term) -> Self {
        self.push(false, vec![a, b])
    }

    fn minus_min(self, a: Term, b: Term) -> Self {
        self.push(true, vec![a, b])
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Rational enclosure with `bits` fractional bits per power.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for p in &self.pieces {
            let mut best: Option<(BigRational, BigRational)> = None;
            for t in &p.alts {
                let (a, b) = qpow_enclosure(self.q, t.num, t.den, bits);
                let (x, y) = if t.coef.is_negative() {
                    (&t.coef * b, &t.coef * a)
                } else {
                    (&t.coef * a, &t.coef * b)
                };
                best = Some(match best {
                    Some((u, v)) => (u.min(x), v.min(y)),
                    None => (x, y),
                });
            }
            let (plo, phi) = best.expect("piece has a term");
            if p.negative {
                lo -= phi;
                hi -= plo;
            } else {
                lo += plo;
                hi += phi;
            }
        }
        (lo, hi)
    }

    /// The exact value when every power involved is rational.
    pub fn exact(&self) -> Option<BigRational> {
        let (lo, hi) = self.enclosure(8);
        (lo == hi).then_some(lo)
    }

    /// Float enclosure with outward rounding.
    pub fn interval<F: Float>(&self) -> Interval<F> {
        let mut acc = Interval::zero();
        for p in &self.pieces {
            let mut v: Option<Interval<F>> = None;
            for t in &p.alts {
                let x = rat_interval::<F>(&t.coef) * Interval::qpow(self.q, t.num, t.den);
                v = Some(match v {
                    Some(w) => w.min(x),
                    None => x,
                });
            }
            let v = v.expect("piece has a term");
            acc = if p.negative { acc - v } else { acc + v };
        }
        acc
    }

    /// Order of the bound relative to `x`; `None` if still undecided at
    /// 2048 bits.
    pub fn compare(&self, x: &BigRational) -> Option<Ordering> {
        for bits in [64u32, 256, 2048] {
            let (lo, hi) = self.enclosure(bits);
            if hi < *x {
                return Some(Ordering::Less);
            }
            if lo > *x {
                return Some(Ordering::Greater);
            }
            if lo == hi {
                return Some(Ordering::Equal);
            }
        }
        None
    }

    /// Order between two bounds; `None` if undecided.
    pub fn compare_bound(&self, other: &Bound) -> Option<Ordering> {
        assert_eq!(self.q, other.q);
        let mut diff = self.clone();
        for p in &other.pieces {
            diff.pieces.push(Piece {
                negative: !p.negative,
                alts: p.alts.clone(),
            });
        }
        diff.compare(&BigRational::zero())
    }

    /// Rounded outward for its role: up for an upper bound, down for a lower.
    pub fn rounded(&self, role: Role) -> f64 {
        let (lo, hi) = self.enclosure(128);
        match role {
            Role::Upper => round_up(&hi),
            Role::Lower => round_down(&lo),
        }
    }

    pub fn value(&self, role: Role) -> BoundValue {
        let v = self.rounded(role);
        BoundValue {
            role,
            value: v,
            exact: self.exact().map(|r| fmt_rational(&r)),
            vacuous: role == Role::Lower && self.compare(&BigRational::zero()) != Some(Ordering::Greater),
        }
    }
}

/// Reported form of a bound.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundValue {
    pub role: Role,
    /// Rounded outward.
    pub value: f64,
    /// Present when the bound is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// A lower bound that is not positive.
    pub vacuous: bool,
}

/// Everything the closed-form bounds need about one `(q, d, l, t, eps)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundInputs {
    pub q: u64,
    pub d: u64,
    pub ell: usize,
    pub t: usize,
    /// `|E^{l,t}|`.
    pub size: u128,
    #[serde(rename = "D")]
    pub d_total: u64,
    #[serde(rename = "Dprime")]
    pub d_prime: Option<u64>,
    /// `|{eps^{1/2}}|`.
    pub root2_eps: u64,
    /// `|{<1>^{1/2}}|`.
    pub root2_one: u64,
}

impl BoundInputs {
    pub fn from_group(g: &GroupStructure, d: u64, eps: usize, d_total: u64, d_prime: Option<u64>) -> Self {
        BoundInputs {
            q: g.q(),
            d,
            ell: g.ell(),
            t: g.t(),
            size: g.size() as u128,
            d_total,
            d_prime,
            root2_eps: g.kth_roots(eps, 2).len() as u64,
            root2_one: g.identity_root_count(2),
        }
    }

    fn even(&self) -> i128 {
        i128::from(self.d.is_multiple_of(2))
    }

    fn half(&self) -> i64 {
        self.d as i64
    }
}

/// `ceil(d/2) - 1`, the largest window the lower bounds allow.
pub fn lower_window(d: u64) -> u64 {
    d.div_ceil(2).saturating_sub(1)
}

fn lower_admissible(d: u64, n: usize) -> bool {
    d.div_ceil(2) > n as u64
}

/// `(q^d - [t>0]) / (d |E|) + D q^{d/2} / (d |E|)`.
pub fn thm1_upper(x: &BoundInputs) -> Bound {
    let (d, e) = (x.d as i128, x.size as i128);
    let qd = BigInt::from(x.q).pow(x.d as u32);
    let main = (BigRational::from_integer(qd) - int(i128::from(x.t > 0))) / int(d * e);
    Bound::new(x.q)
        .plus(term(main, 0, 1))
        .plus(term(rat(x.d_total as i128, d * e), x.half(), 2))
}

/// Lower bound with `e_1 = min{3.4 q^{-d/6}, 0.8}`; needs `l + t <= ceil(d/2) - 1`.
pub fn thm1_lower(x: &BoundInputs) -> Result<Bound> {
    if !lower_admissible(x.d, x.ell + x.t) {
        return precondition(format!(
            "the lower bound needs l + t <= ceil(d/2) - 1 = {}",
            lower_window(x.d)
        ));
    }
    let (d, e) = (x.d as i128, x.size as i128);
    let qd = BigInt::from(x.q).pow(x.d as u32);
    let main = (BigRational::from_integer(qd) - int(i128::from(x.t > 0))) / int(d * e);
    let lin = x.d_total as i128 + x.root2_eps as i128 * x.even();
    Ok(Bound::new(x.q)
        .plus(term(main, 0, 1))
        .minus(term(rat(lin, d * e), x.half(), 2))
        .minus_min(term(rat(34, 10 * d), x.d as i64, 3), term(rat(8, 10 * d), x.half(), 2)))
}

/// `q^d/(d|E|) + (|E|-1)(l+t-1) q^{d/2}/(d|E|)`.
pub fn hsu_upper(x: &BoundInputs) -> Bound {
    let (d, e) = (x.d as i128, x.size as i128);
    let qd = BigInt::from(x.q).pow(x.d as u32);
    let n = x.ell as i128 + x.t as i128 - 1;
    Bound::new(x.q)
        .plus(term(BigRational::from_integer(qd) / int(d * e), 0, 1))
        .plus(term(rat((e - 1) * n, d * e), x.half(), 2))
}

/// Where [`cohen_lower`] is a valid bound: `1 <= l + t <= ceil(d/2) - 1`.
/// For `l + t = 0` it follows from the lower bound only via `D/|E| <= l+t-1`,
/// which fails, and it is false at e.g. `q = 2, d = 6`.
pub fn cohen_applies(ell: usize, t: usize, d: u64) -> bool {
    ell + t >= 1 && lower_admissible(d, ell + t)
}

/// Whether the lower bound provably dominates [`cohen_lower`]: the margin
/// times `d` is at least `(6/5 - [2 | d]) q^{d/2} - [t > 0]/|E|`, so this
/// holds for `t = 0`, odd `d`, or `q^d |E|^2 >= 25`. The only admissible point outside is
/// `q = 2, d = 4, l = 0, t = 1`, where the margin is `-1/20`.
pub fn cohen_dominated(q: u64, d: u64, size: u128, t: usize) -> bool {
    t == 0 || d % 2 == 1 || (q as f64).powi(d as i32) * (size as f64).powi(2) >= 25.0
}

/// `q^d/(d|E|) - (l+t+1) q^{d/2}/d`.
pub fn cohen_lower(x: &BoundInputs) -> Bound {
    let (d, e) = (x.d as i128, x.size as i128);
    let qd = BigInt::from(x.q).pow(x.d as u32);
    Bound::new(x.q)
        .plus(term(BigRational::from_integer(qd) / int(d * e), 0, 1))
        .minus(term(rat(x.ell as i128 + x.t as i128 + 1, d), x.half(), 2))
}

fn thm2_check(x: &BoundInputs) -> Result<u64> {
    if x.t != 0 {
        return precondition("SRIM bounds use E^l (t = 0)");
    }
    if !lower_admissible(x.d, x.ell) {
        return precondition(format!("SRIM bounds need l <= ceil(d/2) - 1 = {}", lower_window(x.d)));
    }
    x.d_prime
        .ok_or_else(|| Error::Precondition("SRIM bounds need D'".into()))
}

fn srim_main(x: &BoundInputs) -> Term {
    term(rat(1, 2 * x.d as i128), x.d as i64 - x.ell as i64, 1)
}

/// `q^{d-l}/(2d) + ((D' + 2D + 3[2|d]|eps^{1/2}|)/(2q^l) + e_2) q^{d/2}/d`,
/// `e_2 = min{7 q^{-d/6}, 2}`.
pub fn thm2_upper(x: &BoundInputs) -> Result<Bound> {
    let dp = thm2_check(x)? as i128;
    let d = x.d as i128;
    let lin = dp + 2 * x.d_total as i128 + 3 * x.even() * x.root2_eps as i128;
    let ql = BigInt::from(x.q).pow(x.ell as u32);
    Ok(Bound::new(x.q)
        .plus(srim_main(x))
        .plus(term(
            int(lin) / (BigRational::from_integer(ql) * int(2 * d)),
            x.half(),
            2,
        ))
        .plus_min(term(rat(7, d), x.d as i64, 3), term(rat(2, d), x.half(), 2)))
}

/// `q^{d-l}/(2d) - ((D' + 2D)/(2q^l) + [2|d]|<1>^{1/2}|/q^l + e_2) q^{d/2}/d`.
pub fn thm2_lower(x: &BoundInputs) -> Result<Bound> {
    let dp = thm2_check(x)? as i128;
    let d = x.d as i128;
    let lin = dp + 2 * x.d_total as i128 + 2 * x.even() * x.root2_one as i128;
    let ql = BigInt::from(x.q).pow(x.ell as u32);
    Ok(Bound::new(x.q)
        .plus(srim_main(x))
        .minus(term(
            int(lin) / (BigRational::from_integer(ql) * int(2 * d)),
            x.half(),
            2,
        ))
        .minus_min(term(rat(7, d), x.d as i64, 3), term(rat(2, d), x.half(), 2)))
}

/// `l <= min{ceil(d/2) - 1, d/2 - log_q(2d+2)}`, decided exactly as
/// `q^{d-2l} >= (2d+2)^2`.
pub fn srim_exists(q: u64, d: u64, ell: usize) -> bool {
    let ell = ell as u64;
    if !lower_admissible(d, ell as usize) || 2 * ell > d {
        return false;
    }
    BigInt::from(q).pow((d - 2 * ell) as u32) >= BigInt::from(2 * d + 2).pow(2)
}

/// `(upper, lower)` for `I_q(d; eps)`; `lower` is `None` outside its range.
pub fn thm1_bounds(x: &BoundInputs) -> (Bound, Option<Bound>) {
    (thm1_upper(x), thm1_lower(x).ok())
}

/// `(hsu_upper, cohen_lower)`.
pub fn classical_bounds(x: &BoundInputs) -> (Bound, Bound) {
    (hsu_upper(x), cohen_lower(x))
}

/// `(upper, lower, exists)` for `S_q(d; eps)`.
pub fn thm2_bounds(x: &BoundInputs) -> Result<(Bound, Bound, bool)> {
    Ok((thm2_upper(x)?, thm2_lower(x)?, srim_exists(x.q, x.d, x.ell)))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Verdict {
    pub bound: &'static str,
    /// `None` when the comparison could not be decided.
    pub holds: Option<bool>,
    /// `|bound - exact|`, rounded.
    pub tight_gap: f64,
}

fn verdict(name: &'static str, b: &Bound, role: Role, exact: i128) -> Verdict {
    let x = int(exact);
    let ord = b.compare(&x);
    let holds = ord.map(|o| match role {
        Role::Upper => o != Ordering::Less,
        Role::Lower => o != Ordering::Greater,
    });
    let (lo, hi) = b.enclosure(128);
    let mid = (lo + hi) / int(2) - x;
    Verdict {
        bound: name,
        holds,
        tight_gap: mid.abs().to_f64().unwrap_or(f64::INFINITY),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundsParams {
    pub q: u64,
    pub d: u64,
    pub ell: usize,
    pub t: usize,
    pub eps: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundsReport {
    pub params: BoundsParams,
    pub inputs: BoundInputs,
    pub thm1_upper: BoundValue,
    pub thm1_lower: Option<BoundValue>,
    pub hsu_upper: BoundValue,
    pub cohen_lower: BoundValue,
    pub cohen_applies: bool,
    pub thm2_upper: Option<BoundValue>,
    pub thm2_lower: Option<BoundValue>,
    pub exists: Option<bool>,
    pub exact_irreducible: Option<i128>,
    pub exact_srim: Option<i128>,
    pub verdicts: Vec<Verdict>,
    /// `thm1_upper <= hsu_upper` and, when both lower bounds apply,
    /// `thm1_lower >= cohen_lower`.
    pub improvement: bool,
    /// See [`cohen_dominated`].
    pub cohen_dominated: bool,
}

/// All bounds at one point; with `with_exact` the exact counts and per-bound
/// verdicts are included. The SRIM bounds appear only for `t = 0` inside
/// their range.
pub fn bounds_report(c: &Counter, d: u64, eps: usize, with_exact: bool) -> Result<BoundsReport> {
    if d == 0 {
        return precondition("degree must be >= 1");
    }
    let g = c.group();
    let srim = g.t() == 0 && lower_admissible(d, g.ell());
    let d_prime = if srim { Some(c.d_prime()?) } else { None };
    let x = BoundInputs::from_group(g, d, eps, c.d_total(), d_prime);

    let t1u = thm1_upper(&x);
    let t1l = thm1_lower(&x).ok();
    let hsu = hsu_upper(&x);
    let coh = cohen_lower(&x);
    let (t2u, t2l) = if srim {
        (Some(thm2_upper(&x)?), Some(thm2_lower(&x)?))
    } else {
        (None, None)
    };

    let coh_ok = cohen_applies(x.ell, x.t, d);
    let mut improvement = t1u.compare_bound(&hsu) != Some(Ordering::Greater);
    if let (Some(l), true) = (&t1l, coh_ok) {
        improvement &= l.compare_bound(&coh) != Some(Ordering::Less);
    }

    let mut verdicts = Vec::new();
    let (mut ei, mut es) = (None, None);
    if with_exact {
        let i = c.i(d, eps)?;
        ei = Some(i);
        verdicts.push(verdict("thm1_upper", &t1u, Role::Upper, i));
        if let Some(l) = &t1l {
            verdicts.push(verdict("thm1_lower", l, Role::Lower, i));
        }
        if coh_ok {
            verdicts.push(verdict("cohen_lower", &coh, Role::Lower, i));
        }
        verdicts.push(verdict("hsu_upper", &hsu, Role::Upper, i));
        if let (Some(u), Some(l)) = (&t2u, &t2l) {
            let s = c.s(d, eps)?;
            es = Some(s);
            verdicts.push(verdict("thm2_upper", u, Role::Upper, s));
            verdicts.push(verdict("thm2_lower", l, Role::Lower, s));
        }
    }

    Ok(BoundsReport {
        params: BoundsParams {
            q: x.q,
            d,
            ell: x.ell,
            t: x.t,
            eps: g.fmt_index(eps),
        },
        thm1_upper: t1u.value(Role::Upper),
        thm1_lower: t1l.as_ref().map(|b| b.value(Role::Lower)),
        hsu_upper: hsu.value(Role::Upper),
        cohen_lower: coh.value(Role::Lower),
        cohen_applies: coh_ok,
        thm2_upper: t2u.as_ref().map(|b| b.value(Role::Upper)),
        thm2_lower: t2l.as_ref().map(|b| b.value(Role::Lower)),
        exists: srim.then(|| srim_exists(x.q, d, x.ell)),
        exact_irreducible: ei,
        exact_srim: es,
        verdicts,
        improvement,
        cohen_dominated: cohen_dominated(x.q, d, x.size, x.t),
        inputs: x,
    })
}

/// `L_q(d; l, t)`, `U_q(d; l)` and `L'_q(d; l)` with their caps.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Envelopes<F: Float> {
    pub q: u64,
    pub d: u64,
    pub ell: usize,
    pub t: usize,
    /// Present when `l + t <= ceil(d/2) - 1`.
    pub l: Option<Interval<F>>,
    pub l_cap: Interval<F>,
    /// The sharper cap for `q >= 3`.
    pub l_cap_odd: Option<Interval<F>>,
    /// `U` and `L'` are present when `t = 0` and `l <= ceil(d/2) - 1`.
    pub u: Option<Interval<F>>,
    pub u_cap: Interval<F>,
    pub l_prime: Option<Interval<F>>,
    pub l_prime_cap: Interval<F>,
}

// min{c q^{-d/6}, cap}
fn cap<F: Float>(q: u64, d: u64, c: (i128, i128), m: (i128, i128)) -> Interval<F> {
    let frac = |(n, den): (i128, i128)| Interval::<F>::from_int(n).div(Interval::from_int(den));
    (frac(c) * Interval::qpow(q, -(d as i64), 6)).min(frac(m))
}

// |<1>^{1/k}| / |E| as an interval, without building the group
fn root_fraction<F: Float>(orders: &[u64], size: u128, k: u64) -> Interval<F> {
    let n = identity_root_count(orders, k) as i128;
    Interval::<F>::from_int(n).div(Interval::from_int(size as i128))
}

fn group_size(q: u64, ell: usize, t: usize) -> u128 {
    let q = q as u128;
    let mut s = q.pow(ell as u32);
    if t >= 1 {
        s *= (q - 1) * q.pow(t as u32 - 1);
    }
    s
}

fn prime_power(q: u64) -> Result<(u64, u32)> {
    crate::gf::prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))
}

/// `L_q(d; l, t)` by its defining finite sums.
pub fn envelope_l<F: Float>(q: u64, d: u64, ell: usize, t: usize) -> Result<Interval<F>> {
    let (p, r) = prime_power(q)?;
    let orders = component_orders(p, r, ell, t);
    let size = group_size(q, ell, t);
    let n = Interval::<F>::from_int(ell as i128 + t as i128 - 1);
    let one = Interval::<F>::from_int(1);
    let mut first = Interval::zero();
    let mut second = Interval::zero();
    for k in divisors(d).into_iter().filter(|&k| k >= 2 && moebius(k) == -1) {
        let frac = root_fraction::<F>(&orders, size, k);
        if k >= 3 {
            // q^{d/k - d/2}
            first = first + frac * Interval::qpow(q, 2 * (d / k) as i64 - d as i64, 2);
        }
        // q^{d/2k - d/2}
        second = second + (one - frac) * Interval::qpow(q, (d / k) as i64 - d as i64, 2);
    }
    Ok(first + n * second)
}

/// `U_q(d; l)`, with `|{eps^{1/k}}|` replaced by its maximum `|{<1>^{1/k}}|`.
pub fn envelope_u<F: Float>(q: u64, d: u64, ell: usize) -> Result<Interval<F>> {
    let (p, r) = prime_power(q)?;
    let orders = component_orders(p, r, ell, 0);
    let i = |v: i128| Interval::<F>::from_int(v);
    let ql = Interval::<F>::qpow(q, ell as i64, 1);
    let shrink = i(1) - Interval::qpow(q, -(ell as i64), 1);
    let mut u = i(1).div(i(2)) * Interval::qpow(q, -2 * ell as i64 - d as i64, 2);
    if d.is_multiple_of(2) {
        u = u + i(2 * ell as i128 - 1) * shrink * Interval::qpow(q, -(d as i64), 4);
    }
    let mut roots = Interval::zero();
    let mut plain = Interval::zero();
    for k in divisors(d).into_iter().filter(|&k| k >= 3 && moebius(k) == -1) {
        let n = i(identity_root_count(&orders, k) as i128);
        roots = roots + n * Interval::qpow(q, 2 * (d / k) as i64 - d as i64, 2);
        plain = plain + Interval::qpow(q, (d / k) as i64 - d as i64, 2);
    }
    Ok(u + roots.div(i(2) * ql) + i(ell as i128) * shrink * plain)
}

/// `L'_q(d; l) = L_q(d; l, 0) + ...` over `k >= 6` with `mu(k) = 1`.
pub fn envelope_l_prime<F: Float>(q: u64, d: u64, ell: usize) -> Result<Interval<F>> {
    let (p, r) = prime_power(q)?;
    let orders = component_orders(p, r, ell, 0);
    let i = |v: i128| Interval::<F>::from_int(v);
    let ql = Interval::<F>::qpow(q, ell as i64, 1);
    let shrink = i(1) - Interval::qpow(q, -(ell as i64), 1);
    let mut roots = Interval::zero();
    let mut plain = Interval::zero();
    for k in divisors(d).into_iter().filter(|&k| k >= 6 && moebius(k) == 1) {
        let n = i(identity_root_count(&orders, k) as i128);
        roots = roots + n * Interval::qpow(q, 2 * (d / k) as i64 - d as i64, 2);
        plain = plain + Interval::qpow(q, (d / k) as i64 - d as i64, 2);
    }
    Ok(envelope_l::<F>(q, d, ell, 0)? + roots.div(i(2) * ql) + i(ell as i128) * shrink * plain)
}

/// Evaluate all three envelopes at one point.
pub fn proof_envelopes<F: Float>(q: u64, d: u64, ell: usize, t: usize) -> Result<Envelopes<F>> {
    if d == 0 {
        return precondition("degree must be >= 1");
    }
    let l = if lower_admissible(d, ell + t) {
        Some(envelope_l::<F>(q, d, ell, t)?)
    } else {
        None
    };
    let srim = t == 0 && lower_admissible(d, ell);
    let (u, l_prime) = if srim {
        (
            Some(envelope_u::<F>(q, d, ell)?),
            Some(envelope_l_prime::<F>(q, d, ell)?),
        )
    } else {
        (None, None)
    };
    Ok(Envelopes {
        q,
        d,
        ell,
        t,
        l,
        l_cap: cap(q, d, (34, 10), (8, 10)),
        l_cap_odd: (q >= 3).then(|| cap(q, d, (28, 10), (6, 10))),
        u,
        u_cap: cap(q, d, (66, 10), (15, 10)),
        l_prime,
        l_prime_cap: cap(q, d, (7, 1), (2, 1)),
    })
}

impl<F: Float + std::fmt::Display> Envelopes<F> {
    /// Every present envelope certainly below its cap.
    pub fn caps_hold(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, v: &Option<Interval<F>>, c: &Interval<F>| {
            if let Some(v) = v {
                if !v.certainly_le(c) {
                    out.push(format!(
                        "{name}(q={}, d={}, l={}, t={}) = {v} exceeds cap {c}",
                        self.q, self.d, self.ell, self.t
                    ));
                }
            }
        };
        check("L", &self.l, &self.l_cap);
        if let Some(c) = &self.l_cap_odd {
            check("L", &self.l, c);
        }
        check("U", &self.u, &self.u_cap);
        check("L'", &self.l_prime, &self.l_prime_cap);
        out
    }

    /// Error on any cap violation.
    pub fn assert_caps(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::CapViolation(v.join("; ")))
        }
    }
}

/// For `q = 2`: every odd `k` has `|{<1>^{1/k}}| = 1` in `E^{l,t}`.
pub fn odd_roots_trivial_for_q2(ell: usize, t: usize, kmax: u64) -> bool {
    let orders = component_orders(2, 1, ell, t);
    (3..=kmax).step_by(2).all(|k| identity_root_count(&orders, k) == 1)
}

//! Hayes equivalence classes and the group `E^{l,t}`.
//!
//! A class is identified with the pair (leading series, ending series):
//! `f*(x) mod x^{l+1}`, a principal unit `1 + a_1 x + .. + a_l x^l`, and
//! `f(x) mod x^t`, a unit of `F_q[x]/(x^t)`. Multiplication of classes is
//! multiplication of these truncated series, which is why
//! `E^{l,t} = E^l x F_q^* x E^{t-1}`: the ending unit splits as
//! `b_0 * (1 + (b_1/b_0) x + ..)`.

mod snf;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::gf::{Fel, Field};
use crate::poly::{Poly, PolyRing};

pub use snf::{smith, Smith};

/// Default cap on `|E^{l,t}|`.
pub const DEFAULT_GROUP_BUDGET: u64 = 1 << 20;

/// Class `<f>` in `E^{l,t}`: `leading = (a_1..a_l)`, `ending = (b_0..b_{t-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HayesClass {
    pub leading: Vec<Fel>,
    pub ending: Vec<Fel>,
}

impl HayesClass {
    pub fn new(leading: Vec<Fel>, ending: Vec<Fel>) -> Self {
        HayesClass { leading, ending }
    }

    pub fn ell(&self) -> usize {
        self.leading.len()
    }

    pub fn t(&self) -> usize {
        self.ending.len()
    }
}

/// Canonical class of a monic `f`.
///
/// Coefficients below `x^0` in the leading window read as zero, which is the
/// window of `f * x^N` (`t = 0`) or `f * (x^N + 1)` (`t >= 1`) for large `N`.
pub fn class_of(field: &Field, f: &Poly, ell: usize, t: usize) -> Result<HayesClass> {
    if !f.is_monic(field) {
        return precondition("class_of needs a monic polynomial");
    }
    if t >= 1 && f.coeff(0).is_zero() {
        return precondition("class_of with t >= 1 needs a nonzero constant term");
    }
    let d = f.degree().finite().expect("monic is nonzero");
    let leading = (1..=ell)
        .map(|j| if j <= d { f.coeff(d - j) } else { Fel::ZERO })
        .collect();
    let ending = (0..t).map(|j| f.coeff(j)).collect();
    Ok(HayesClass { leading, ending })
}

/// The group of principal units `1 + x F_q[[x]] mod x^{n+1}`, i.e. `E^n`,
/// with a cyclic decomposition and a materialised discrete-log table.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    q: u32,
    n: usize,
    size: usize,
    /// generators as unit indices
    generators: Vec<usize>,
    orders: Vec<u64>,
    strides: Vec<usize>,
    /// mixed-radix exponent index -> unit index
    elem_of: Vec<u32>,
    /// unit index -> mixed-radix exponent index
    dlog: Vec<u32>,
}

/// Orders of the cyclic factors of `E^n` over `F_{p^r}`: for every
/// `j <= n` prime to `p`, `r` factors of order `p^{s_j}`, `s_j` minimal with
/// `j p^{s_j} > n`.
pub fn unit_group_orders(p: u64, r: u32, n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for j in 1..=n as u64 {
        if j % p == 0 {
            continue;
        }
        let mut order = p;
        while j * order <= n as u64 {
            order *= p;
        }
        out.extend(std::iter::repeat_n(order, r as usize));
    }
    out
}

/// Cyclic factor orders of `E^{l,t}` in exponent-vector order.
pub fn component_orders(p: u64, r: u32, ell: usize, t: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if t >= 1 {
        out.push(p.pow(r) - 1);
    }
    out.extend(unit_group_orders(p, r, ell));
    if t >= 1 {
        out.extend(unit_group_orders(p, r, t - 1));
    }
    out
}

/// `|{<1>^{1/k}}| = prod gcd(k, r_h)`.
pub fn identity_root_count(orders: &[u64], k: u64) -> u64 {
    orders.iter().map(|&r| num_integer::gcd(k, r)).product()
}

impl UnitGroup {
    fn new(field: &Field, n: usize, reverse_generators: bool) -> Result<UnitGroup> {
        let q = field.q();
        let size = (q as u64)
            .checked_pow(n as u32)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or(Error::Budget {
                what: "principal unit group",
                needed: (q as u128).saturating_pow(n as u32),
                budget: u32::MAX as u128,
            })? as usize;
        let mut g = UnitGroup {
            q,
            n,
            size,
            generators: Vec::new(),
            orders: Vec::new(),
            strides: Vec::new(),
            elem_of: Vec::new(),
            dlog: Vec::new(),
        };
        // generating set {1 + c x^j : p not dividing j, c in the F_p-basis}
        let p = field.p() as usize;
        let mut gens = Vec::new();
        for j in 1..=n {
            if j % p == 0 {
                continue;
            }
            for i in 0..field.r() as usize {
                let mut c = vec![0u32; field.r() as usize];
                c[i] = 1;
                let mut series = vec![Fel::ZERO; n];
                series[j - 1] = field.from_coords(&c)?;
                gens.push(g.encode(&series));
            }
        }
        if reverse_generators {
            gens.reverse();
        }
        let orders: Vec<u64> = gens.iter().map(|&x| g.element_order(field, x)).collect();
        let (gens, orders) = g.independent_basis(field, gens, orders);
        g.generators = gens;
        g.orders = orders;
        g.build_tables(field)?;
        Ok(g)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn encode(&self, series: &[Fel]) -> usize {
        series
            .iter()
            .rev()
            .fold(0usize, |acc, c| acc * self.q as usize + c.index() as usize)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<Fel> {
        let q = self.q as usize;
        (0..self.n)
            .map(|_| {
                let c = Fel((idx % q) as u32);
                idx /= q;
                c
            })
            .collect()
    }

    /// Truncated product of principal units.
    pub fn mul(&self, field: &Field, a: usize, b: usize) -> usize {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let mut out = vec![Fel::ZERO; self.n];
        for k in 0..self.n {
            let mut c = field.add(x[k], y[k]);
            for i in 0..k {
                // x_{i+1} y_{k-i}
                c = field.add(c, field.mul(x[i], y[k - 1 - i]));
            }
            out[k] = c;
        }
        self.encode(&out)
    }

    pub fn pow(&self, field: &Field, a: usize, mut e: u64) -> usize {
        let mut acc = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(field, acc, base);
            }
            base = self.mul(field, base, base);
            e >>= 1;
        }
        acc
    }

    fn element_order(&self, field: &Field, a: usize) -> u64 {
        let mut order = 1u64;
        let mut cur = a;
        while cur != 0 {
            cur = self.mul(field, cur, a);
            order += 1;
        }
        order
    }

    /// Reduces a generating set to an independent one. When the orders already
    /// multiply to the group size the set is a basis; otherwise the relation
    /// lattice is put in Smith normal form.
    fn independent_basis(&self, field: &Field, gens: Vec<usize>, orders: Vec<u64>) -> (Vec<usize>, Vec<u64>) {
        let product: u128 = orders.iter().map(|&o| o as u128).product();
        if product == self.size as u128 {
            return (gens, orders);
        }
        let m = gens.len();
        let mut relations: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect())
            .collect();
        let mut first_seen: Vec<Option<Vec<i64>>> = vec![None; self.size];
        let mut exps = vec![0u64; m];
        loop {
            let elem = exps
                .iter()
                .zip(&gens)
                .fold(0, |acc, (&e, &g)| self.mul(field, acc, self.pow(field, g, e)));
            let v: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
            match &first_seen[elem] {
                None => first_seen[elem] = Some(v),
                Some(prev) => relations.push(v.iter().zip(prev).map(|(a, b)| a - b).collect()),
            }
            let mut h = 0;
            loop {
                if h == m {
                    let s = smith(relations, m);
                    return self.basis_from_smith(field, &gens, &orders, s);
                }
                exps[h] += 1;
                if exps[h] < orders[h] {
                    break;
                }
                exps[h] = 0;
                h += 1;
            }
        }
    }

    fn basis_from_smith(&self, field: &Field, gens: &[usize], orders: &[u64], s: Smith) -> (Vec<usize>, Vec<u64>) {
        let mut out = Vec::new();
        let mut out_orders = Vec::new();
        for (row, &inv) in s.v_inv.iter().zip(&s.invariants) {
            if inv == 1 {
                continue;
            }
            let elem = row.iter().zip(gens).zip(orders).fold(0, |acc, ((&c, &g), &o)| {
                let e = c.rem_euclid(o as i64) as u64;
                self.mul(field, acc, self.pow(field, g, e))
            });
            out.push(elem);
            out_orders.push(inv as u64);
        }
        (out, out_orders)
    }

    fn build_tables(&mut self, field: &Field) -> Result<()> {
        let total: u128 = self.orders.iter().map(|&o| o as u128).product();
        if total != self.size as u128 {
            return Err(Error::Internal(format!(
                "generator orders multiply to {total}, group has {} elements",
                self.size
            )));
        }
        let mut strides = Vec::with_capacity(self.orders.len());
        let mut s = 1usize;
        for &o in &self.orders {
            strides.push(s);
            s *= o as usize;
        }
        self.strides = strides;
        let mut elem_of = vec![0u32; self.size];
        let mut dlog = vec![u32::MAX; self.size];
        for m in 0..self.size {
            let elem = if m == 0 {
                0
            } else {
                // lowest nonzero digit
                let h = (0..self.orders.len())
                    .find(|&h| !(m / self.strides[h]).is_multiple_of(self.orders[h] as usize))
                    .expect("m > 0");
                self.mul(field, elem_of[m - self.strides[h]] as usize, self.generators[h])
            };
            if dlog[elem] != u32::MAX {
                return Err(Error::Internal("generators are not independent".into()));
            }
            elem_of[m] = elem as u32;
            dlog[elem] = m as u32;
        }
        self.elem_of = elem_of;
        self.dlog = dlog;
        Ok(())
    }

    pub fn exponents(&self, elem: usize) -> Vec<u64> {
        let m = self.dlog[elem] as usize;
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&o, &s)| ((m / s) % o as usize) as u64)
            .collect()
    }

    pub fn from_exponents(&self, exps: &[u64]) -> usize {
        let m: usize = exps
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&e, &o), &s)| (e % o) as usize * s)
            .sum();
        self.elem_of[m] as usize
    }
}

/// Options for [`GroupStructure::build_with`].
#[derive(Clone, Debug)]
pub struct GroupOptions {
    pub budget: u64,
    /// Reverse the order of the generating set of each principal-unit factor.
    pub reverse_generators: bool,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions {
            budget: DEFAULT_GROUP_BUDGET,
            reverse_generators: false,
        }
    }
}

/// `E^{l,t}` decomposed as `F_q^* x E^l x E^{t-1}` (the first factor only when
/// `t >= 1`). Classes are addressed by a dense index:
/// `lead + |E^l| * (n + (q-1) * tail)` where `b_0 = gamma^n`.
#[derive(Clone, Debug)]
pub struct GroupStructure {
    field: Arc<Field>,
    ell: usize,
    t: usize,
    lead: UnitGroup,
    tail: Option<UnitGroup>,
    orders: Vec<u64>,
    conductor: u64,
    size: usize,
}

/// JSON view of a [`GroupStructure`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GroupSummary {
    pub q: u32,
    pub ell: usize,
    pub t: usize,
    pub generators: Vec<String>,
    pub orders: Vec<u64>,
    pub size: usize,
}

impl GroupStructure {
    pub fn build(field: Arc<Field>, ell: usize, t: usize) -> Result<GroupStructure> {
        Self::build_with(field, ell, t, &GroupOptions::default())
    }

    pub fn build_with(field: Arc<Field>, ell: usize, t: usize, opts: &GroupOptions) -> Result<GroupStructure> {
        let q = field.q() as u128;
        let needed = (q - u128::from(t > 0)) * q.saturating_pow((ell + t) as u32) / q;
        if needed > opts.budget as u128 {
            return Err(Error::Budget {
                what: "group E^{l,t}",
                needed,
                budget: opts.budget as u128,
            });
        }
        let lead = UnitGroup::new(&field, ell, opts.reverse_generators)?;
        let tail = if t >= 1 {
            Some(UnitGroup::new(&field, t - 1, opts.reverse_generators)?)
        } else {
            None
        };
        let mut orders = Vec::new();
        if t >= 1 {
            orders.push(field.q() as u64 - 1);
        }
        orders.extend_from_slice(lead.orders());
        if let Some(tl) = &tail {
            orders.extend_from_slice(tl.orders());
        }
        let conductor = orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o));
        let size = match &tail {
            None => lead.size(),
            Some(tl) => lead.size() * (field.q() as usize - 1) * tl.size(),
        };
        Ok(GroupStructure {
            field,
            ell,
            t,
            lead,
            tail,
            orders,
            conductor,
            size,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// `L = lcm` of the component orders.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn lead_group(&self) -> &UnitGroup {
        &self.lead
    }

    pub fn tail_group(&self) -> Option<&UnitGroup> {
        self.tail.as_ref()
    }

    pub fn identity(&self) -> usize {
        0
    }

    fn compose_index(&self, lead: usize, n: usize, tail: usize) -> usize {
        match &self.tail {
            None => lead,
            Some(_) => lead + self.lead.size() * (n + (self.q() as usize - 1) * tail),
        }
    }

    fn split_index(&self, idx: usize) -> (usize, usize, usize) {
        match &self.tail {
            None => (idx, 0, 0),
            Some(_) => {
                let ls = self.lead.size();
                let qm1 = self.q() as usize - 1;
                (idx % ls, (idx / ls) % qm1, idx / ls / qm1)
            }
        }
    }

    pub fn index_of(&self, c: &HayesClass) -> Result<usize> {
        if c.ell() != self.ell || c.t() != self.t {
            return precondition(format!(
                "class has (l,t) = ({},{}), group has ({},{})",
                c.ell(),
                c.t(),
                self.ell,
                self.t
            ));
        }
        if c.leading.iter().chain(&c.ending).any(|&x| !self.field.contains(x)) {
            return Err(Error::ForeignElement);
        }
        let lead = self.lead.encode(&c.leading);
        if self.t == 0 {
            return Ok(lead);
        }
        let b0 = c.ending[0];
        let n = self
            .field
            .log(b0)
            .ok_or_else(|| Error::Precondition("b0 must be nonzero".into()))?;
        let inv = self.field.inv(b0)?;
        let unit: Vec<Fel> = c.ending[1..].iter().map(|&b| self.field.mul(b, inv)).collect();
        let tail = self.tail.as_ref().expect("t >= 1").encode(&unit);
        Ok(self.compose_index(lead, n as usize, tail))
    }

    pub fn class_at(&self, idx: usize) -> HayesClass {
        let (lead, n, tail) = self.split_index(idx);
        let leading = self.lead.decode(lead);
        let ending = match &self.tail {
            None => Vec::new(),
            Some(tl) => {
                let b0 = self.field.exp(n as u64);
                std::iter::once(b0)
                    .chain(tl.decode(tail).into_iter().map(|u| self.field.mul(u, b0)))
                    .collect()
            }
        };
        HayesClass { leading, ending }
    }

    /// Class index of a monic polynomial given by its coefficients (ascending,
    /// including the leading one), without allocating a [`HayesClass`].
    pub fn index_of_coeffs(&self, coeffs: &[Fel]) -> usize {
        let d = coeffs.len() - 1;
        let q = self.q() as usize;
        let mut lead = 0usize;
        for j in (1..=self.ell).rev() {
            let c = if j <= d { coeffs[d - j].index() as usize } else { 0 };
            lead = lead * q + c;
        }
        if self.t == 0 {
            return lead;
        }
        let b0 = coeffs[0];
        let n = self.field.log(b0).expect("nonzero constant term") as usize;
        let inv = self.field.inv(b0).expect("nonzero");
        let mut tail = 0usize;
        for j in (1..self.t).rev() {
            let c = coeffs.get(j).copied().unwrap_or(Fel::ZERO);
            tail = tail * q + self.field.mul(c, inv).index() as usize;
        }
        self.compose_index(lead, n, tail)
    }

    pub fn class_of_poly(&self, f: &Poly) -> Result<usize> {
        let c = class_of(&self.field, f, self.ell, self.t)?;
        self.index_of(&c)
    }

    /// Exponent vector `(e_0, e_{l,1}.., e_{t-1,1}..)`; `e_0` only when `t >= 1`.
    pub fn exponents(&self, idx: usize) -> Vec<u64> {
        let (lead, n, tail) = self.split_index(idx);
        let mut out = Vec::with_capacity(self.orders.len());
        if self.t >= 1 {
            out.push(n as u64);
        }
        out.extend(self.lead.exponents(lead));
        if let Some(tl) = &self.tail {
            out.extend(tl.exponents(tail));
        }
        out
    }

    pub fn from_exponents(&self, exps: &[u64]) -> usize {
        if self.t == 0 {
            return self.lead.from_exponents(exps);
        }
        let nl = self.lead.orders().len();
        let n = (exps[0] % (self.q() - 1)) as usize;
        let lead = self.lead.from_exponents(&exps[1..1 + nl]);
        let tail = self.tail.as_ref().expect("t >= 1").from_exponents(&exps[1 + nl..]);
        self.compose_index(lead, n, tail)
    }

    /// Group product via series multiplication.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (la, na, ta) = self.split_index(a);
        let (lb, nb, tb) = self.split_index(b);
        let lead = self.lead.mul(&self.field, la, lb);
        match &self.tail {
            None => lead,
            Some(tl) => {
                let n = (na + nb) % (self.q() as usize - 1);
                self.compose_index(lead, n, tl.mul(&self.field, ta, tb))
            }
        }
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut acc = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `lcm` of the component orders.
    pub fn exponent(&self) -> u64 {
        self.conductor
    }

    pub fn inv(&self, a: usize) -> usize {
        self.pow(a, self.exponent() - 1)
    }

    /// `psi_delta(eps) = eps * delta`.
    pub fn translate(&self, delta: usize, eps: usize) -> usize {
        self.mul(eps, delta)
    }

    /// Checked class operation on [`HayesClass`] values.
    pub fn class_op(&self, op: ClassOp, a: &HayesClass, b: &HayesClass) -> Result<HayesClass> {
        let ia = self.index_of(a)?;
        let ib = self.index_of(b)?;
        let r = match op {
            ClassOp::Mul => self.mul(ia, ib),
            ClassOp::Inv => self.inv(ia),
            ClassOp::Pow(e) => self.pow(ia, e),
        };
        Ok(self.class_at(r))
    }

    /// `{delta : delta^k = eps}`, solved componentwise in exponent space.
    pub fn kth_roots(&self, eps: usize, k: u64) -> Vec<usize> {
        let exps = self.exponents(eps);
        let mut per_comp: Vec<Vec<u64>> = Vec::with_capacity(exps.len());
        for (&e, &r) in exps.iter().zip(&self.orders) {
            let g = num_integer::gcd(k, r);
            if e % g != 0 {
                return Vec::new();
            }
            let m = r / g;
            let kk = (k / g) % m;
            let x0 = if m == 1 {
                0
            } else {
                ((e / g) % m) * mod_inverse(kk, m) % m
            };
            per_comp.push((0..g).map(|i| x0 + i * m).collect());
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; per_comp.len()];
        loop {
            let v: Vec<u64> = pick.iter().zip(&per_comp).map(|(&i, c)| c[i]).collect();
            out.push(self.from_exponents(&v));
            let mut h = 0;
            loop {
                if h == pick.len() {
                    return out;
                }
                pick[h] += 1;
                if pick[h] < per_comp[h].len() {
                    break;
                }
                pick[h] = 0;
                h += 1;
            }
        }
    }

    /// `|{<1>^{1/k}}| = prod_h gcd(k, r_h)`.
    pub fn identity_root_count(&self, k: u64) -> u64 {
        identity_root_count(&self.orders, k)
    }

    /// `|{eps^{1/k}}|` without materialising the set.
    pub fn root_count(&self, eps: usize, k: u64) -> u64 {
        let exps = self.exponents(eps);
        let solvable = exps
            .iter()
            .zip(&self.orders)
            .all(|(&e, &r)| e % num_integer::gcd(k, r) == 0);
        if solvable {
            self.identity_root_count(k)
        } else {
            0
        }
    }

    /// Exponent of `omega_L` in the character value `a(eps, eps')`.
    pub fn char_exponent(&self, a: usize, b: usize) -> u64 {
        let ea = self.exponents(a);
        let eb = self.exponents(b);
        self.char_exponent_vecs(&ea, &eb)
    }

    pub fn char_exponent_vecs(&self, ea: &[u64], eb: &[u64]) -> u64 {
        let l = self.conductor;
        ea.iter()
            .zip(eb)
            .zip(&self.orders)
            .fold(0u64, |acc, ((&x, &y), &r)| (acc + (x * y % r) * (l / r)) % l)
    }

    /// `eps = (eps_1, gamma^n, eps_2)`; requires `t >= 1`.
    pub fn split(&self, eps: usize) -> Result<(HayesClass, u64, HayesClass)> {
        let Some(tail) = &self.tail else {
            return precondition("the product decomposition needs t >= 1");
        };
        let (l, n, tl) = self.split_index(eps);
        Ok((
            HayesClass::new(self.lead.decode(l), Vec::new()),
            n as u64,
            HayesClass::new(tail.decode(tl), Vec::new()),
        ))
    }

    /// Inverse of [`GroupStructure::split`].
    pub fn compose(&self, eps1: &HayesClass, n: u64, eps2: &HayesClass) -> Result<usize> {
        let Some(tail) = &self.tail else {
            return precondition("the product decomposition needs t >= 1");
        };
        if eps1.ell() != self.ell || eps2.ell() != self.t - 1 || !eps1.ending.is_empty() {
            return precondition("component classes do not match (l, t-1)");
        }
        Ok(self.compose_index(
            self.lead.encode(&eps1.leading),
            (n % (self.q() - 1)) as usize,
            tail.encode(&eps2.leading),
        ))
    }

    /// Index of `(delta, gamma^0, delta)` for a unit index `delta` of `E^l`;
    /// requires `t = l + 1`.
    pub fn diagonal(&self, delta: usize) -> usize {
        debug_assert_eq!(self.t, self.ell + 1);
        self.compose_index(delta, 0, delta)
    }

    /// A monic representative. For `t = 0` the reversed leading series
    /// (so `<x^j+1>` prints as `x^j+1`); otherwise degree `l + t` with the
    /// two windows side by side.
    pub fn representative(&self, idx: usize) -> Poly {
        let c = self.class_at(idx);
        let one = self.field.one();
        if self.t == 0 {
            let mut series = vec![one];
            series.extend(c.leading.iter().copied());
            let p = Poly::from_coeffs(series);
            let mut v = p.coeffs().to_vec();
            v.reverse();
            return Poly::from_coeffs(v);
        }
        let n = self.ell + self.t;
        let mut v = vec![Fel::ZERO; n + 1];
        v[n] = one;
        for (j, &a) in c.leading.iter().enumerate() {
            v[n - 1 - j] = a;
        }
        for (j, &b) in c.ending.iter().enumerate() {
            v[j] = b;
        }
        Poly::from_coeffs(v)
    }

    /// Generators in exponent-vector order: gamma first (t >= 1), then the
    /// `E^l` factors, then the `E^{t-1}` factors.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(tl) = &self.tail {
            out.push(self.compose_index(0, 1 % (self.q() as usize - 1), 0));
            out.extend(self.lead.generators().iter().map(|&g| self.compose_index(g, 0, 0)));
            out.extend(tl.generators().iter().map(|&g| self.compose_index(0, 0, g)));
        } else {
            out.extend_from_slice(self.lead.generators());
        }
        out
    }

    pub fn summary(&self) -> GroupSummary {
        let ring = PolyRing::new(&self.field);
        GroupSummary {
            q: self.field.q(),
            ell: self.ell,
            t: self.t,
            generators: self
                .generators()
                .into_iter()
                .map(|g| ring.fmt(&self.representative(g)))
                .collect(),
            orders: self.orders.clone(),
            size: self.size,
        }
    }

    /// `a=(1,0);b=(1)`; the `b` part is omitted when `t = 0`.
    pub fn fmt_class(&self, c: &HayesClass) -> String {
        let list = |v: &[Fel]| v.iter().map(|&x| self.field.fmt_elem(x)).collect::<Vec<_>>().join(",");
        if self.t == 0 {
            format!("a=({})", list(&c.leading))
        } else {
            format!("a=({});b=({})", list(&c.leading), list(&c.ending))
        }
    }

    pub fn fmt_index(&self, idx: usize) -> String {
        self.fmt_class(&self.class_at(idx))
    }

    pub fn parse_class(&self, s: &str) -> Result<HayesClass> {
        parse_class(&self.field, s)
    }

    /// Materialised `dlog` as a bijection check: every exponent vector maps to
    /// a distinct class and back.
    pub fn verify_dlog(&self) -> bool {
        (0..self.size).all(|i| self.from_exponents(&self.exponents(i)) == i)
    }

    /// Brute-force class enumeration from polynomials of degree
    /// `l + t .. l + t + 1`, used to confirm `|E^{l,t}|`.
    pub fn count_classes_by_enumeration(&self) -> Result<usize> {
        let mut seen = vec![false; self.size];
        let d = (self.ell + self.t).max(1);
        for deg in d..=d + 1 {
            let e = crate::poly::MonicEnumerator::all(&self.field, deg)?;
            for f in e.iter() {
                if self.t >= 1 && f.coeff(0).is_zero() {
                    continue;
                }
                seen[self.class_of_poly(&f)?] = true;
            }
        }
        Ok(seen.into_iter().filter(|&b| b).count())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ClassOp {
    Mul,
    Inv,
    Pow(u64),
}

pub fn parse_class(field: &Field, s: &str) -> Result<HayesClass> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut leading = Vec::new();
    let mut ending = Vec::new();
    for part in s.split(';').filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=(..) in {part:?}")))?;
        let inner = val
            .strip_prefix('(')
            .and_then(|v| v.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected parenthesised list in {part:?}")))?;
        let elems = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| field.parse_elem(x))
                .collect::<Result<Vec<_>>>()?
        };
        match key {
            "a" => leading = elems,
            "b" => ending = elems,
            _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
        }
    }
    Ok(HayesClass { leading, ending })
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    assert_eq!(g, 1, "{a} is not invertible mod {m}");
    x.rem_euclid(m as i128) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Lifts a low-degree representative without changing its class: multiply
/// by `x^N` (`t = 0`) or `x^N + 1` (`t >= 1`) with `N = l + t + 1`, so that
/// the windows of the product no longer overlap and `<x^N + 1> = <1>`.
pub fn lift_representative(ring: &PolyRing<'_>, f: &Poly, ell: usize, t: usize) -> Poly {
    let d = f.degree().finite().unwrap_or(0);
    if d >= ell + t {
        return f.clone();
    }
    let n = ell + t + 1;
    let one = ring.field().one();
    let m = if t == 0 {
        Poly::monomial(one, n)
    } else {
        ring.add(&Poly::monomial(one, n), &ring.one())
    };
    ring.mul(f, &m)
}

#[cfg(test)]
mod tests;

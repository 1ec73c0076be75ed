//! Characters of `E^{l,t}`, weight polynomials `P(z; eps)`, their degree
//! statistics and Newton power sums.

pub mod ring;
pub mod roots;

use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hayes::{GroupOptions, GroupStructure};
use crate::poly::MonicEnumerator;

pub use ring::{cyclotomic_poly, euler_phi, CycCoeff, Cyclotomic};
pub use roots::poly_roots;

/// Exact cyclotomic integer with machine coefficients.
pub type CycInt = Cyclotomic<i128>;

/// `a(eps, eps')` as an element of `Z[w_L]`, `L` the group conductor.
pub fn char_value(g: &GroupStructure, a: usize, b: usize) -> CycInt {
    CycInt::root_of_unity(g.conductor(), g.char_exponent(a, b))
}

/// `P(z; eps) = 1 + sum_{d=1}^{l+t-1} c(d; eps) z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPoly {
    pub eps: usize,
    /// `coeffs[0] = 1`, `coeffs[d] = c(d; eps)`.
    pub coeffs: Vec<CycInt>,
}

impl WeightPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn coeff(&self, d: usize) -> CycInt {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(|| CycInt::zero(self.coeffs[0].conductor()))
    }

    /// `rho_1 .. rho_dmax`; entry `d - 1` is `rho_d`.
    pub fn power_sums(&self, dmax: usize) -> Vec<CycInt> {
        newton_power_sums(&self.coeffs[..=self.degree()], dmax)
    }

    pub fn rho(&self, d: usize) -> CycInt {
        rho_d(self, d)
    }

    pub fn complex_coeffs<F: Float + FloatConst>(&self) -> Vec<Complex<F>> {
        self.coeffs[..=self.degree()].iter().map(|c| c.to_complex()).collect()
    }

    /// Every root is `1` or has modulus `q^{-1/2}`, within `tol`.
    pub fn weil_check(&self, q: u64, tol: f64) -> Result<bool> {
        weil_check::<f64>(self, q, tol)
    }
}

/// Power sums of the inverse roots of `c_0 + c_1 z + ..` (`c_0 = 1`), by
/// `p_d = -d c_d - sum_{i=1}^{d-1} c_i p_{d-i}`. Entry `d - 1` is `p_d`.
pub fn newton_power_sums<T: CycCoeff>(c: &[Cyclotomic<T>], dmax: usize) -> Vec<Cyclotomic<T>> {
    let l = c[0].conductor();
    debug_assert_eq!(c[0].int_test(), Some(T::one()));
    let coeff = |i: usize| c.get(i).cloned();
    let mut p: Vec<Cyclotomic<T>> = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let mut acc = match coeff(d) {
            Some(cd) => -&cd.scale(&T::from(d as i64)),
            None => Cyclotomic::zero(l),
        };
        for i in 1..d.min(c.len()) {
            let ci = &c[i];
            if !ci.is_zero() {
                acc = &acc - &(ci * &p[d - i - 1]);
            }
        }
        p.push(acc);
    }
    p
}

/// `rho_d(P) = sum over nonzero roots rho of rho^{-d}`.
pub fn rho_d(p: &WeightPoly, d: usize) -> CycInt {
    assert!(d >= 1);
    p.power_sums(d).pop().unwrap()
}

pub fn weil_check<F: Float + FloatConst>(p: &WeightPoly, q: u64, tol: F) -> Result<bool> {
    if p.degree() == 0 {
        return Ok(true);
    }
    let roots = poly_roots(&p.complex_coeffs::<F>())?;
    let target = F::from(q).unwrap().sqrt().recip();
    Ok(roots
        .iter()
        .all(|z| (*z - F::one()).norm() <= tol || (z.norm() - target).abs() <= tol))
}

/// Precomputed `E^{l,t}(d)` sets for `d = 1..l+t-1`, ready for character
/// sums against any class.
pub struct WeightSystem<'g> {
    group: &'g GroupStructure,
    /// Per degree: flattened rows of `e'_h * (L / r_h)`.
    levels: Vec<Vec<u64>>,
    ncomp: usize,
}

impl<'g> WeightSystem<'g> {
    pub fn new(group: &'g GroupStructure) -> Result<Self> {
        let field = group.field();
        let n = group.ell() + group.t();
        let l = group.conductor();
        let weights: Vec<u64> = group.orders().iter().map(|r| l / r).collect();
        let ncomp = weights.len();
        let mut levels = Vec::new();
        for d in 1..n {
            let mut seen = vec![false; group.size()];
            let mut rows = Vec::new();
            for f in MonicEnumerator::all(field, d)?.iter() {
                if group.t() >= 1 && f.coeff(0).is_zero() {
                    continue;
                }
                let idx = group.index_of_coeffs(f.coeffs());
                if std::mem::replace(&mut seen[idx], true) {
                    continue;
                }
                let e = group.exponents(idx);
                rows.extend(e.iter().zip(&weights).map(|(x, w)| x * w));
            }
            levels.push(rows);
        }
        Ok(WeightSystem { group, levels, ncomp })
    }

    pub fn group(&self) -> &GroupStructure {
        self.group
    }

    /// `|E^{l,t}(d)|` for `1 <= d <= l+t-1`.
    pub fn level_size(&self, d: usize) -> usize {
        self.levels[d - 1].len() / self.ncomp
    }

    /// `c(d; eps)`.
    pub fn coefficient(&self, eps: usize, d: usize) -> CycInt {
        let l = self.group.conductor();
        let e = self.group.exponents(eps);
        let mut counts = vec![0i64; l as usize];
        // levels exist only when l + t >= 2, so there is at least one component
        for row in self.levels[d - 1].chunks_exact(self.ncomp) {
            let k = row.iter().zip(&e).fold(0u64, |acc, (w, x)| (acc + w * x) % l);
            counts[k as usize] += 1;
        }
        CycInt::from_counts(l, &counts)
    }

    pub fn poly(&self, eps: usize) -> WeightPoly {
        let l = self.group.conductor();
        let mut coeffs = vec![CycInt::one(l)];
        coeffs.extend((1..=self.levels.len()).map(|d| self.coefficient(eps, d)));
        WeightPoly { eps, coeffs }
    }

    /// Weight polynomials of the given classes, computed in parallel.
    pub fn polys(&self, classes: &[usize]) -> Vec<WeightPoly> {
        classes.par_iter().map(|&e| self.poly(e)).collect()
    }

    /// Weight polynomials of every class, indexed by class.
    pub fn all(&self) -> Vec<WeightPoly> {
        (0..self.group.size()).into_par_iter().map(|e| self.poly(e)).collect()
    }
}

pub fn weight_polynomial(g: &GroupStructure, eps: usize) -> Result<WeightPoly> {
    Ok(WeightSystem::new(g)?.poly(eps))
}

/// `P(z; delta, 1, delta)` for every `delta` in `E^l`, computed in the
/// auxiliary group `E^{l,l+1}`. Requires `t = 0`.
pub fn diagonal_weight_polys(
    g: &GroupStructure,
    opts: &GroupOptions,
) -> Result<(Arc<GroupStructure>, Vec<WeightPoly>)> {
    if g.t() != 0 {
        return Err(Error::Precondition("the diagonal family needs t = 0".into()));
    }
    let aux = Arc::new(GroupStructure::build_with(
        g.field_arc().clone(),
        g.ell(),
        g.ell() + 1,
        opts,
    )?);
    let ws = WeightSystem::new(&aux)?;
    let classes: Vec<usize> = (0..g.size()).map(|d| aux.diagonal(d)).collect();
    let polys = ws.polys(&classes);
    Ok((aux, polys))
}

/// `d_j`, `D`, `D'` and `D / (|E| - 1)` for one group.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DegreeStats {
    pub q: u32,
    pub ell: usize,
    pub t: usize,
    pub size: usize,
    /// `d_1 .. d_{l+t-1}`.
    pub dvec: Vec<u64>,
    #[serde(rename = "D")]
    pub d_total: u64,
    #[serde(rename = "Dprime")]
    pub d_prime: Option<u64>,
    /// `D / (|E| - 1)` as `"num/den"` in lowest terms.
    pub ratio: Option<String>,
    pub ratio_value: Option<f64>,
}

/// Degree statistics of `g`; `D'` is computed when `t = 0` and
/// `dprime_opts` is given.
pub fn degree_stats(g: &GroupStructure, dprime_opts: Option<&GroupOptions>) -> Result<DegreeStats> {
    let ws = WeightSystem::new(g)?;
    let polys = ws.all();
    degree_stats_from(g, &polys, dprime_opts)
}

pub fn degree_stats_from(
    g: &GroupStructure,
    polys: &[WeightPoly],
    dprime_opts: Option<&GroupOptions>,
) -> Result<DegreeStats> {
    let n = g.ell() + g.t();
    let mut dvec = vec![0u64; n.saturating_sub(1)];
    for p in polys.iter().filter(|p| p.eps != g.identity()) {
        let deg = p.degree();
        if deg > 0 {
            dvec[deg - 1] += 1;
        }
    }
    let d_total: u64 = dvec.iter().enumerate().map(|(j, &c)| (j as u64 + 1) * c).sum();
    let cap = (n as u64).saturating_sub(1) * (g.size() as u64 - 1);
    if d_total > cap {
        return Err(Error::Internal(format!("D = {d_total} exceeds (l+t-1)(|E|-1) = {cap}")));
    }
    let d_prime = match dprime_opts {
        Some(opts) if g.t() == 0 => Some(dprime(g, opts)?),
        _ => None,
    };
    let (ratio, ratio_value) = if g.size() > 1 {
        let den = g.size() as u64 - 1;
        let gcd = num_integer::gcd(d_total, den);
        (
            Some(format!("{}/{}", d_total / gcd, den / gcd)),
            Some(d_total as f64 / den as f64),
        )
    } else {
        (None, None)
    };
    Ok(DegreeStats {
        q: g.field().q(),
        ell: g.ell(),
        t: g.t(),
        size: g.size(),
        dvec,
        d_total,
        d_prime,
        ratio,
        ratio_value,
    })
}

/// `D' = sum_{delta != 1} deg P(z; delta, 1, delta)`.
pub fn dprime(g: &GroupStructure, opts: &GroupOptions) -> Result<u64> {
    let (_, polys) = diagonal_weight_polys(g, opts)?;
    let total: u64 = polys
        .iter()
        .enumerate()
        .filter(|(d, _)| *d != g.identity())
        .map(|(_, p)| p.degree() as u64)
        .sum();
    let cap = 2 * g.ell() as u64 * (g.size() as u64 - 1);
    if total > cap {
        return Err(Error::Internal(format!("D' = {total} exceeds 2l(q^l-1) = {cap}")));
    }
    Ok(total)
}

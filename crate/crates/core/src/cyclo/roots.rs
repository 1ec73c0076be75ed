//! Simultaneous-iteration (Aberth) root finder for small complex polynomials.

use num_complex::Complex;
use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 500;

fn eval<F: Float>(coeffs: &[Complex<F>], z: Complex<F>) -> (Complex<F>, Complex<F>) {
    let mut p = Complex::new(F::zero(), F::zero());
    let mut dp = p;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

// |sum c_i z^i| bound used to decide that a residual is at rounding level.
fn magnitude<F: Float>(coeffs: &[Complex<F>], z: Complex<F>) -> F {
    let r = z.norm();
    coeffs.iter().rev().fold(F::zero(), |acc, c| acc * r + c.norm())
}

/// All complex roots of `sum coeffs[i] z^i` (ascending, nonzero leading
/// coefficient). Starts from points on the unit circle and stops once every
/// correction is below `1e-12` relative (or the float type's resolution), or
/// every residual is at rounding level.
pub fn poly_roots<F: Float + FloatConst>(coeffs: &[Complex<F>]) -> Result<Vec<Complex<F>>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == F::zero() {
        return Err(Error::Precondition("leading coefficient is zero".into()));
    }
    let monic: Vec<Complex<F>> = coeffs.iter().map(|&c| c / lead).collect();
    let nf = F::from(n).unwrap();
    let offset = F::from(0.4).unwrap();
    let mut z: Vec<Complex<F>> = (0..n)
        .map(|k| Complex::from_polar(F::one(), F::TAU() * F::from(k).unwrap() / nf + offset))
        .collect();
    let tol = F::from(1e-12).unwrap().max(F::epsilon() * F::from(64).unwrap());
    let noise = F::epsilon() * F::from(8 * (n + 1)).unwrap();

    for _ in 0..MAX_ITERATIONS {
        let mut max_step = F::zero();
        let mut all_small = true;
        for k in 0..n {
            let (p, dp) = eval(&monic, z[k]);
            if p.norm() <= noise * magnitude(&monic, z[k]) {
                continue;
            }
            all_small = false;
            let ratio = p / dp;
            let mut s = Complex::new(F::zero(), F::zero());
            for j in 0..n {
                if j != k {
                    s = s + (z[k] - z[j]).inv();
                }
            }
            let w = ratio / (Complex::new(F::one(), F::zero()) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                // coincident iterates: nudge and retry
                z[k] = z[k] * Complex::from_polar(F::one() + tol.sqrt(), tol.sqrt());
                max_step = F::infinity();
                continue;
            }
            z[k] = z[k] - w;
            max_step = max_step.max(w.norm() / F::one().max(z[k].norm()));
        }
        if all_small || max_step <= tol {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence(MAX_ITERATIONS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex<f64>>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn simple_roots() {
        // (z-1)(z-2)(z+3) = z^3 - 7z + 6
        let r = poly_roots(&[c(6.0), c(-7.0), c(0.0), c(1.0)]).unwrap();
        let re = sorted_re(r);
        for (a, b) in re.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(poly_roots::<f64>(&[c(3.0)]).unwrap().is_empty());
    }

    #[test]
    fn complex_and_repeated_roots() {
        // 1 + z^2: roots +-i
        let r = poly_roots(&[c(1.0), c(0.0), c(1.0)]).unwrap();
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-10 && z.re.abs() < 1e-10);
        }
        // (1 + 2z + 2z^2)^2 : double roots of modulus 2^{-1/2}
        let r = poly_roots(&[c(1.0), c(4.0), c(8.0), c(8.0), c(4.0)]).unwrap();
        for z in r {
            assert!((z.norm() - 0.5f64.sqrt()).abs() < 1e-6, "{z}");
        }
    }

    #[test]
    fn single_precision() {
        let r = poly_roots(&[
            Complex::new(2.0f32, 0.0),
            Complex::new(-3.0, 0.0),
            Complex::new(1.0, 0.0),
        ])
        .unwrap();
        let mut re: Vec<f32> = r.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - 1.0).abs() < 1e-4 && (re[1] - 2.0).abs() < 1e-4);
    }

    #[test]
    fn zero_leading_coefficient_is_rejected() {
        assert!(poly_roots(&[c(1.0), c(0.0)]).is_err());
    }
}

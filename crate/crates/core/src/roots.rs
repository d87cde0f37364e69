//! Root finding for L-polynomials and the Weil residual check.
//!
//! Roots are found as eigenvalues of the companion matrix of the rescaled
//! polynomial m(v) = L(v / sqrt(q)), whose roots lie on the unit circle, then
//! polished by Newton steps on m. Each reported root carries its residual
//! | |root| - q^{-1/2} | against the unit-circle prediction.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfunc::LPolynomial;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RootInfo {
    pub re: f64,
    pub im: f64,
    pub rh_residual: f64,
}

impl RootInfo {
    pub fn root(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn eval_and_derivative(coeffs: &[f64], v: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * v + p;
        p = p * v + c;
    }
    (p, dp)
}

/// All complex roots of the L-polynomial, with Weil residuals.
///
/// Errors with the offending modulus if the backward error of any polished
/// root exceeds 1e-10 on the rescaled polynomial.
pub fn zeros(lpoly: &LPolynomial) -> Result<Vec<RootInfo>> {
    let deg = lpoly.degree();
    if deg == 0 {
        return Ok(Vec::new());
    }
    let q = lpoly.q() as f64;
    let sqrt_q = q.sqrt();
    // m(v) = L(v / sqrt(q)): integer a_n becomes a_n q^{-n/2}
    let m: Vec<f64> = lpoly
        .coefficients()
        .iter()
        .take(deg + 1)
        .enumerate()
        .map(|(n, &a)| a as f64 / sqrt_q.powi(n as i32))
        .collect();
    let lead = m[deg];
    let scale: f64 = m.iter().map(|c| c.abs()).sum();
    // companion matrix of the monic normalization of m
    let mut mat = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        mat[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        mat[(i, deg - 1)] = -m[i] / lead;
    }
    let eigen = mat.complex_eigenvalues();
    let mut out = Vec::with_capacity(deg);
    for &ev in eigen.iter() {
        let mut v = ev;
        for _ in 0..4 {
            let (p, dp) = eval_and_derivative(&m, v);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            v -= step;
            if step.norm() < 1e-14 {
                break;
            }
        }
        let (p, _) = eval_and_derivative(&m, v);
        if p.norm() > 1e-10 * scale {
            return Err(Error::NonConvergence {
                modulus: lpoly.modulus().to_string(),
                detail: format!("root {v} has backward error {:.3e}", p.norm() / scale),
            });
        }
        let u = v / sqrt_q;
        out.push(RootInfo {
            re: u.re,
            im: u.im,
            rh_residual: (u.norm() - 1.0 / sqrt_q).abs(),
        });
    }
    out.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(out)
}

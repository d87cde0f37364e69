//! Numerical check of the contour form of partial summation: for a power
//! series F(u) = sum a(n) u^n absolutely convergent on |u| <= r < 1,
//!
//!   sum_{n <= N} a(n) = (1/2 pi i) oint_{|u|=r} F(u) du / ((1-u) u^{N+1}).
//!
//! The contour side is evaluated by the trapezoid rule on the circle, with
//! the node count doubled until two consecutive evaluations agree.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;
const MAX_NODES: usize = 1 << 20;

/// Returns (direct, contour): the direct partial sum of the first N+1 terms
/// and the quadrature value of the contour integral at radius r.
pub fn perron_check(a: impl Fn(usize) -> f64, n: usize, r: f64) -> Result<(f64, f64)> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::domain("contour radius must satisfy 0 < r < 1"));
    }
    // truncate the series where terms a(n) r^n are negligible
    let mut coeffs: Vec<f64> = Vec::new();
    let mut max_term: f64 = 0.0;
    let mut quiet = 0;
    let mut rpow = 1.0f64;
    for k in 0..MAX_TERMS {
        let c = a(k);
        let term = (c * rpow).abs();
        if !term.is_finite() || term > 1e9 * (1.0 + max_term) {
            return Err(Error::domain(format!(
                "series term a({k}) r^{k} = {term:.3e} grows beyond the radius of convergence"
            )));
        }
        coeffs.push(c);
        max_term = max_term.max(term);
        if k > n && term < 1e-18 * (1.0 + max_term) {
            quiet += 1;
            if quiet >= 12 {
                break;
            }
        } else {
            quiet = 0;
        }
        rpow *= r;
    }
    let direct: f64 = coeffs.iter().take(n + 1).sum();

    let eval_series = |u: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    };
    // trapezoid on the circle: (1/K) sum_k F(u_k) / ((1 - u_k) u_k^N)
    let quadrature = |nodes: usize| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
            let u = Complex64::from_polar(r, theta);
            acc += eval_series(u) / ((Complex64::new(1.0, 0.0) - u) * u.powi(n as i32));
        }
        (acc / nodes as f64).re
    };

    let mut nodes = 64usize.max((n + 2).next_power_of_two());
    let mut prev = quadrature(nodes);
    loop {
        nodes *= 2;
        let cur = quadrature(nodes);
        if (cur - prev).abs() <= 1e-10 * (1.0 + direct.abs()) || nodes >= MAX_NODES {
            return Ok((direct, cur));
        }
        prev = cur;
    }
}

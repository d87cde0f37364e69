//! Independent recovery of the L-polynomial by point counting.
//!
//! For square-free monic D of odd degree 2g+1, the projective point counts
//! N_i of the curve y^2 = D(x) over F_{q^i} determine the zeta numerator:
//! the power sums of the inverse roots are p_i = q^i + 1 - N_i, Newton's
//! identities recover the lower coefficients, and the reflection identity
//! fills the upper half. Exact coefficient-wise equality with the
//! character-sum construction is the oracle check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ExtensionField, PrimeField};
use crate::lfunc::{reflect_upper_half, LPolynomial};
use crate::poly::Polynomial;

/// Projective point counts N_1..N_{i_max} of y^2 = D(x) (one point at
/// infinity for odd-degree D).
#[derive(Debug, Clone, Serialize)]
pub struct PointCounts {
    pub counts: Vec<i64>,
}

fn validate_modulus(d: &Polynomial) -> Result<usize> {
    let deg = d
        .degree()
        .ok_or_else(|| Error::domain("zero modulus"))?;
    if !d.is_monic() || deg % 2 == 0 || !d.is_squarefree()? {
        return Err(Error::domain(format!(
            "point counting requires a monic square-free modulus of odd degree, got {d}"
        )));
    }
    Ok((deg - 1) / 2)
}

/// Affine-plus-infinity count over the field realized by `ext`.
pub fn point_count_in(d: &Polynomial, ext: &ExtensionField) -> i64 {
    let mut affine: i64 = 0;
    for x in ext.elements() {
        let value = ext.eval_poly(d, &x);
        affine += 1 + ext.quad_char(&value) as i64;
    }
    affine + 1
}

/// Counts points over F_{q^i} for i = 1..=i_max; i_max <= g suffices to
/// determine the numerator. Counts are validated against the Hasse-Weil
/// window |N_i - q^i - 1| <= 2g q^{i/2}.
pub fn point_counts(d: &Polynomial, i_max: usize) -> Result<PointCounts> {
    let g = validate_modulus(d)?;
    let q = d.q();
    let base = PrimeField::new_experimental(q)?;
    let mut counts = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let ext = ExtensionField::build(base, i)?;
        let n_i = point_count_in(d, &ext);
        let dev = n_i as i128 - (q as i128).pow(i as u32) - 1;
        if dev * dev > 4 * (g as i128) * (g as i128) * (q as i128).pow(i as u32) {
            return Err(Error::Inconsistent {
                context: format!("point counts of {d}"),
                detail: format!("N_{i} = {n_i} violates the Hasse-Weil window"),
            });
        }
        counts.push(n_i);
    }
    Ok(PointCounts { counts })
}

/// Recovers the degree-2g numerator from counts N_1..N_g by Newton's
/// identities and the reflection symmetry. The sign convention is pinned by
/// a_1 = N_1 - q - 1.
pub fn numerator_from_counts(
    q: u64,
    genus: usize,
    counts: &[i64],
    modulus: &Polynomial,
) -> Result<LPolynomial> {
    if counts.len() < genus {
        return Err(Error::domain(format!(
            "need {genus} point counts, got {}",
            counts.len()
        )));
    }
    for (i, &n_i) in counts.iter().enumerate().take(genus) {
        let i = i + 1;
        let dev = n_i as i128 - (q as i128).pow(i as u32) - 1;
        if dev * dev > 4 * (genus as i128) * (genus as i128) * (q as i128).pow(i as u32) {
            return Err(Error::Inconsistent {
                context: format!("zeta numerator of {modulus}"),
                detail: format!("N_{i} = {n_i} violates the Hasse-Weil window"),
            });
        }
    }
    // power sums of the inverse roots
    let power_sums: Vec<i128> = (1..=genus)
        .map(|i| (q as i128).pow(i as u32) + 1 - counts[i - 1] as i128)
        .collect();
    // Newton: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
    let mut elementary = vec![0i128; genus + 1];
    elementary[0] = 1;
    for k in 1..=genus {
        let mut acc: i128 = 0;
        for i in 1..=k {
            let term = elementary[k - i] * power_sums[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc % k as i128 != 0 {
            return Err(Error::Inconsistent {
                context: format!("zeta numerator of {modulus}"),
                detail: format!("Newton identity at k = {k} is not integral"),
            });
        }
        elementary[k] = acc / k as i128;
    }
    let mut coeffs = vec![0i64; 2 * genus + 1];
    for (k, &e) in elementary.iter().enumerate() {
        let signed = if k % 2 == 0 { e } else { -e };
        coeffs[k] = i64::try_from(signed).map_err(|_| Error::Inconsistent {
            context: format!("zeta numerator of {modulus}"),
            detail: format!("coefficient a_{k} overflows"),
        })?;
    }
    reflect_upper_half(&mut coeffs, q, genus);
    Ok(LPolynomial::from_parts(
        q,
        coeffs,
        modulus.clone(),
        Some(genus),
        true,
    ))
}

/// The zeta numerator of y^2 = D(x), via point counting.
pub fn zeta_numerator(d: &Polynomial) -> Result<LPolynomial> {
    let g = validate_modulus(d)?;
    let counts = point_counts(d, g)?;
    numerator_from_counts(d.q(), g, &counts.counts, d)
}

/// Result of comparing the two independent constructions coefficient-wise.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub modulus: String,
    pub equal: bool,
    /// Mismatches as (index, point-count route, character-sum route).
    pub diffs: Vec<(usize, i64, i64)>,
}

pub fn compare_numerators(lhs: &LPolynomial, rhs: &LPolynomial) -> CrossCheck {
    let n = lhs.coefficients().len().max(rhs.coefficients().len());
    let at = |l: &LPolynomial, i: usize| l.coefficients().get(i).copied().unwrap_or(0);
    let diffs: Vec<(usize, i64, i64)> = (0..n)
        .filter(|&i| at(lhs, i) != at(rhs, i))
        .map(|i| (i, at(lhs, i), at(rhs, i)))
        .collect();
    CrossCheck {
        modulus: lhs.modulus().to_string(),
        equal: diffs.is_empty(),
        diffs,
    }
}

/// Exact equality of zeta_numerator(D) and the direct character-sum
/// L-polynomial.
pub fn cross_check(d: &Polynomial) -> Result<CrossCheck> {
    let from_counts = zeta_numerator(d)?;
    let from_sums = LPolynomial::direct(d)?;
    Ok(compare_numerators(&from_counts, &from_sums))
}

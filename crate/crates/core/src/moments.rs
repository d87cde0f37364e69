//! Exhaustive moments over the moduli families, twisted first and second
//! moments with their predicted main terms, the theta-profile second-moment
//! bound, order-of-magnitude stability reports, and mollified family sums.
//!
//! Empirical sums are exact in the L-values wherever the power allows it
//! (k = 0, k = 2, and every chi-twisted first/second moment accumulate in
//! Z[sqrt(q)] with integer arithmetic); other powers use the float central
//! value under the fixed-shape deterministic reduction. Main terms never
//! subtract unspecified O(.) constants; comparisons are reported as
//! normalized ratios.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::charsum::ensure_standard_q;
use crate::divisor::{divisor_function, factor, squarefree_decomposition};
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::lfunc::FamilyData;
use crate::mollifier::{mollifier_from_segments, segments, Schedule};
use crate::poly::Polynomial;
use crate::primes::{prime_count, PrimeTables};
use crate::reduce::{par_sum_f64, par_sum_i128_pair};
use crate::symbol::chi_eval;
use crate::zeta::zeta_a;

use rayon::prelude::*;

/// One empirical-vs-main-term comparison row; the shared report schema.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub family: String,
    pub q: u64,
    pub g: usize,
    /// Moment power, when the row is a plain moment.
    pub k: Option<f64>,
    /// Twist polynomial (canonical text), when the row is a twisted moment.
    pub twist: Option<String>,
    pub empirical: f64,
    pub main: f64,
    pub normalized_error: f64,
    pub normalization: String,
}

impl MomentReport {
    /// The `param` column of the shared CSV schema: k or the twist.
    pub fn param(&self) -> String {
        match (&self.k, &self.twist) {
            (Some(k), _) => format!("k={k}"),
            (None, Some(t)) => format!("l={t}"),
            _ => String::new(),
        }
    }
}

fn require_kind(data: &FamilyData, kind: FamilyKind) -> Result<()> {
    if data.spec.kind != kind {
        return Err(Error::domain(format!(
            "this moment runs over the {} family, got {}",
            kind.code(),
            data.spec.kind.code()
        )));
    }
    Ok(())
}

fn check_twist(l: &Polynomial) -> Result<()> {
    if l.is_zero() || !l.is_monic() {
        return Err(Error::domain("twist l must be monic nonzero"));
    }
    Ok(())
}

/// Exact family sum of chi(l) * L(1/2, chi)^power for power in {1, 2},
/// accumulated in Z[sqrt(q)] and converted to float once at the end.
fn twisted_l_sum_exact(data: &FamilyData, l: &Polynomial, power: u32) -> Result<f64> {
    let q = data.spec.q;
    let g = data.spec.genus();
    let chis: Vec<i128> = data
        .members
        .iter()
        .map(|m| chi_eval(l, m).map(|v| v as i128))
        .collect::<Result<Vec<_>>>()?;
    let items: Vec<usize> = (0..data.len()).collect();
    let (sum_a, sum_b) = par_sum_i128_pair(&items, |&i| {
        let chi = chis[i];
        if chi == 0 {
            return (0, 0);
        }
        let cv = &data.centrals[i];
        let (a, b) = match power {
            1 => (cv.a, cv.b),
            2 => cv.square_parts(),
            _ => unreachable!(),
        };
        (chi * a, chi * b)
    });
    let scale = (q as f64).powi((g as i32) * power as i32);
    Ok((sum_a as f64 + sum_b as f64 * (q as f64).sqrt()) / scale)
}

/// The k-th moment of |L(1/2, chi)| over the family, against the predicted
/// order of magnitude X (log_q X)^{k(k+1)/2} (H family; the P family carries
/// one less power of log_q X). The normalized error column holds the plain
/// ratio empirical/main.
pub fn moment(data: &FamilyData, k: f64) -> Result<MomentReport> {
    ensure_standard_q(data.spec.q)?;
    if k < 0.0 {
        return Err(Error::domain("moment power k must be nonnegative"));
    }
    let empirical = if k == 0.0 {
        data.len() as f64
    } else if k == 2.0 {
        twisted_l_sum_exact(data, &Polynomial::one(data.spec.q), 2)?
    } else {
        par_sum_f64(&data.centrals, |cv| cv.to_f64().max(0.0).powf(k))
    };
    let x = data.spec.x();
    let n = data.spec.log_q_x();
    let exponent = match data.spec.kind {
        FamilyKind::Squarefree => k * (k + 1.0) / 2.0,
        FamilyKind::Prime => k * (k + 1.0) / 2.0 - 1.0,
        FamilyKind::Monic => return Err(Error::domain("moments run over the H or P family")),
    };
    let main = x * n.powf(exponent);
    Ok(MomentReport {
        family: data.spec.kind.code().to_string(),
        q: data.spec.q,
        g: data.spec.genus(),
        k: Some(k),
        twist: None,
        empirical,
        main,
        normalized_error: empirical / main,
        normalization: format!("ratio empirical / [X (log_q X)^{exponent}]"),
    })
}

/// Twisted first moment over the prime family:
/// sum_P L(1/2, chi_P) chi_P(l), with main term
/// X / (log_q X sqrt(|l1|)) (log_q(sqrt(X)/|l1|) + 1/2) and error normalized
/// by X^{3/4}.
pub fn twisted_first_prime(data: &FamilyData, l: &Polynomial) -> Result<MomentReport> {
    ensure_standard_q(data.spec.q)?;
    require_kind(data, FamilyKind::Prime)?;
    check_twist(l)?;
    let empirical = twisted_l_sum_exact(data, l, 1)?;
    let x = data.spec.x();
    let n = data.spec.log_q_x();
    let (l1, _) = squarefree_decomposition(l)?;
    let norm_l1 = l1.norm() as f64;
    let log_term = n / 2.0 - l1.degree().unwrap_or(0) as f64;
    let main = x / (n * norm_l1.sqrt()) * (log_term + 0.5);
    let denom = x.powf(0.75);
    Ok(MomentReport {
        family: "P".into(),
        q: data.spec.q,
        g: data.spec.genus(),
        k: None,
        twist: Some(l.to_string()),
        empirical,
        main,
        normalized_error: (empirical - main) / denom,
        normalization: "(empirical - main) / X^{3/4}".into(),
    })
}

/// Twisted second moment over the prime family:
/// sum_P L(1/2, chi_P)^2 chi_P(l); see the main-term bracket below, with
/// C(l) = 1 + 1/q for even d(l) and C(l) = 2 otherwise. The error is
/// normalized by (X/log_q X) ((1/2) log_q(X/|l1|))^{3/2}.
pub fn twisted_second_prime(data: &FamilyData, l: &Polynomial) -> Result<MomentReport> {
    ensure_standard_q(data.spec.q)?;
    require_kind(data, FamilyKind::Prime)?;
    check_twist(l)?;
    let q = data.spec.q;
    let empirical = twisted_l_sum_exact(data, l, 2)?;
    let x = data.spec.x();
    let n = data.spec.log_q_x();
    let (l1, _) = squarefree_decomposition(l)?;
    let norm_l1 = l1.norm() as f64;
    let zeta2 = zeta_a(q, 2);
    let w = (n - l1.degree().unwrap_or(0) as f64) / 2.0; // (1/2) log_q (X/|l1|)
    let c_of_l = if l.degree().unwrap_or(0) % 2 == 0 {
        1.0 + 1.0 / q as f64
    } else {
        2.0
    };
    let mut euler = 1.0;
    let mut prime_sum = 0.0;
    for (p, _) in factor(&l1)? {
        let norm = p.norm() as f64;
        euler *= 1.0 / (1.0 + 1.0 / norm);
        prime_sum += (p.degree().unwrap() as f64 / norm) / (1.0 + 1.0 / norm);
    }
    let d_l1 = divisor_function(&l1, 2)? as f64;
    let bracket = w.powi(3) / (3.0 * zeta2) + c_of_l * w.powi(2) + prime_sum / zeta2 * w.powi(2);
    let main = x / n * d_l1 / norm_l1.sqrt() * euler * bracket;
    let denom = x / n * w.max(0.0).powf(1.5);
    Ok(MomentReport {
        family: "P".into(),
        q,
        g: data.spec.genus(),
        k: None,
        twist: Some(l.to_string()),
        empirical,
        main,
        normalized_error: (empirical - main) / denom,
        normalization: "(empirical - main) / [(X/log_q X) ((1/2) log_q(X/|l1|))^{3/2}]".into(),
    })
}

/// The Euler product C = prod_P (1 - 1/(|P|(|P|+1))) truncated at a prime
/// degree cutoff, together with a rigorous tail bound on |log| of the
/// omitted factors. Only prime counts are needed.
pub fn euler_constant_c(q: u64, degree_cutoff: usize) -> (f64, f64) {
    let mut log_c = 0.0;
    for d in 1..=degree_cutoff {
        let norm = (q as f64).powi(d as i32);
        log_c += prime_count(q, d) as f64 * (1.0 - 1.0 / (norm * (norm + 1.0))).ln();
    }
    // |log(1 - t)| <= 2t for t <= 1/2; pi_A(d) <= q^d / d
    let mut tail = 0.0;
    for d in (degree_cutoff + 1)..(degree_cutoff + 60) {
        let norm = (q as f64).powi(d as i32);
        tail += (norm / d as f64) * 2.0 / (norm * norm);
        if norm > 1e200 {
            break;
        }
    }
    (log_c.exp(), tail)
}

/// g(l) = prod_{P | l} ((|P|+1)/|P|) (1 - 1/(|P|(|P|+1))).
pub fn twist_weight_g(l: &Polynomial) -> Result<f64> {
    let mut acc = 1.0;
    for (p, _) in factor(l)? {
        let norm = p.norm() as f64;
        acc *= (norm + 1.0) / norm * (1.0 - 1.0 / (norm * (norm + 1.0)));
    }
    Ok(acc)
}

/// Twisted first moment over the square-free family:
/// sum_D L(1/2, chi_D) chi_D(l), with main term
/// (C / zeta_A(2)) X / (sqrt(|l1|) g(l)) (log_q(sqrt(X)/|l1|) + C1
///   + sum_{P|l} (C1(P)/|P|) log_q |P|).
/// C1 is an absolute constant supplied by the caller; the per-prime C1(P)
/// map defaults to zero (the omitted contribution is O(sum_{P|l} d(P)/|P|^2)).
/// The error is normalized by X^{7/8} |l|^{1/4}.
pub fn twisted_first_squarefree(
    data: &FamilyData,
    l: &Polynomial,
    c1: f64,
    c1p: &BTreeMap<Polynomial, f64>,
) -> Result<MomentReport> {
    ensure_standard_q(data.spec.q)?;
    require_kind(data, FamilyKind::Squarefree)?;
    check_twist(l)?;
    let q = data.spec.q;
    let empirical = twisted_l_sum_exact(data, l, 1)?;
    let x = data.spec.x();
    let n = data.spec.log_q_x();
    let (l1, _) = squarefree_decomposition(l)?;
    let (c, tail) = euler_constant_c(q, 8);
    debug_assert!(tail < 1e-6);
    let mut c1p_term = 0.0;
    for (p, _) in factor(l)? {
        if let Some(v) = c1p.get(&p) {
            c1p_term += v / p.norm() as f64 * p.degree().unwrap() as f64;
        }
    }
    let log_term = n / 2.0 - l1.degree().unwrap_or(0) as f64;
    let main = c / zeta_a(q, 2) * x / ((l1.norm() as f64).sqrt() * twist_weight_g(l)?)
        * (log_term + c1 + c1p_term);
    let denom = x.powf(7.0 / 8.0) * (l.norm() as f64).powf(0.25);
    Ok(MomentReport {
        family: "H".into(),
        q,
        g: data.spec.genus(),
        k: None,
        twist: Some(l.to_string()),
        empirical,
        main,
        normalized_error: (empirical - main) / denom,
        normalization: "(empirical - main) / (X^{7/8} |l|^{1/4})".into(),
    })
}

/// Least-squares fit of the absolute constant C1 from runs at several g:
/// minimizes sum_g (empirical_g - K_g (base_g + C1))^2. A report, not an
/// assertion.
pub fn fit_c1(q: u64, l: &Polynomial, g_list: &[usize]) -> Result<f64> {
    ensure_standard_q(q)?;
    check_twist(l)?;
    let (c, _) = euler_constant_c(q, 8);
    let (l1, _) = squarefree_decomposition(l)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for &g in g_list {
        let spec = FamilySpec::from_genus(FamilyKind::Squarefree, q, g)?;
        let data = FamilyData::load(spec)?;
        let empirical = twisted_l_sum_exact(&data, l, 1)?;
        let x = spec.x();
        let n = spec.log_q_x();
        let k_g = c / zeta_a(q, 2) * x / ((l1.norm() as f64).sqrt() * twist_weight_g(l)?);
        let base = n / 2.0 - l1.degree().unwrap_or(0) as f64;
        num += k_g * (empirical - k_g * base);
        den += k_g * k_g;
    }
    Ok(num / den)
}

/// One row of the theta profile of the second moment over primes.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub empirical: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaProfile {
    pub q: u64,
    pub g: usize,
    pub rows: Vec<ThetaRow>,
    pub max_ratio: f64,
}

/// For each theta, the exact sum over the prime family of
/// |L(e^{i theta}/sqrt(q), chi_P)|^2, reported against the bound shape
/// (X/log_q X) g^{1+eps} min{g, 1/(2 theta_bar)}^2 with eps = 0.1 and
/// theta_bar = min(theta, 2 pi - theta). The maximum ratio over the grid is
/// recorded; implied constants upstream are unspecified, so this is a
/// report, not an assertion.
pub fn theta_profile(data: &FamilyData, thetas: &[f64]) -> Result<ThetaProfile> {
    ensure_standard_q(data.spec.q)?;
    require_kind(data, FamilyKind::Prime)?;
    let q = data.spec.q;
    let g = data.spec.genus();
    let x = data.spec.x();
    let n = data.spec.log_q_x();
    let sqrt_q = (q as f64).sqrt();
    let mut rows = Vec::with_capacity(thetas.len());
    let mut max_ratio = f64::NEG_INFINITY;
    for &theta in thetas {
        let u = num_complex::Complex64::from_polar(1.0, theta) / sqrt_q;
        let empirical = par_sum_f64(&data.lpolys, |l| l.eval(u).norm_sqr());
        let theta_bar = theta.min(2.0 * std::f64::consts::PI - theta);
        let cap = if theta_bar > 0.0 {
            (g as f64).min(1.0 / (2.0 * theta_bar))
        } else {
            g as f64
        };
        let bound = x / n * (g as f64).powf(1.1) * cap * cap;
        let ratio = empirical / bound;
        max_ratio = max_ratio.max(ratio);
        rows.push(ThetaRow {
            theta,
            empirical,
            bound,
            ratio,
        });
    }
    Ok(ThetaProfile {
        q,
        g,
        rows,
        max_ratio,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderRow {
    pub family: String,
    pub q: u64,
    pub g: usize,
    pub k: f64,
    pub empirical: f64,
    pub main: f64,
    pub ratio: f64,
    /// Ratio drift against the previous g for the same (family, k):
    /// within a factor of 3 when true; None on the first g.
    pub drift_ok: Option<bool>,
    /// Raw empirical sums nondecreasing in g; None on the first g.
    pub monotone_ok: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderReport {
    pub rows: Vec<OrderRow>,
    pub all_drift_ok: bool,
    pub all_monotone_ok: bool,
}

/// Order-of-magnitude stability report across genera: for each family and
/// each k, the ratio of the empirical moment to the predicted normalization,
/// with flags for ratio drift beyond a factor of 3 between consecutive g and
/// for non-monotone raw sums. Explicitly a stability report, not a
/// proof-grade check.
pub fn order_of_magnitude(q: u64, g_list: &[usize], k_list: &[f64]) -> Result<OrderReport> {
    ensure_standard_q(q)?;
    let mut rows = Vec::new();
    let mut all_drift = true;
    let mut all_monotone = true;
    for kind in [FamilyKind::Squarefree, FamilyKind::Prime] {
        let data_per_g: Vec<FamilyData> = g_list
            .iter()
            .map(|&g| FamilyData::load(FamilySpec::from_genus(kind, q, g)?))
            .collect::<Result<Vec<_>>>()?;
        for &k in k_list {
            let mut prev: Option<(f64, f64)> = None; // (ratio, empirical)
            for data in &data_per_g {
                let report = moment(data, k)?;
                let ratio = report.normalized_error;
                let (drift_ok, monotone_ok) = match prev {
                    None => (None, None),
                    Some((prev_ratio, prev_emp)) => {
                        let factor = ratio / prev_ratio;
                        let d_ok = (1.0 / 3.0..=3.0).contains(&factor);
                        let m_ok = report.empirical >= prev_emp;
                        all_drift &= d_ok;
                        all_monotone &= m_ok;
                        (Some(d_ok), Some(m_ok))
                    }
                };
                prev = Some((ratio, report.empirical));
                rows.push(OrderRow {
                    family: kind.code().to_string(),
                    q,
                    g: data.spec.genus(),
                    k,
                    empirical: report.empirical,
                    main: report.main,
                    ratio,
                    drift_ok,
                    monotone_ok,
                });
            }
        }
    }
    Ok(OrderReport {
        rows,
        all_drift_ok: all_drift,
        all_monotone_ok: all_monotone,
    })
}

/// The three mollified family sums with their normalizations.
#[derive(Debug, Clone, Serialize)]
pub struct MollifiedSums {
    pub family: String,
    pub q: u64,
    pub g: usize,
    pub two_k: f64,
    /// sum L(1/2, chi) M(., 2k-1)
    pub s_lm: f64,
    /// sum M(., 2k-1)^{2k/(2k-1)}
    pub s_m: f64,
    /// sum L(1/2, chi)^2 M(., 2k-2)
    pub s_l2m: f64,
    pub norm_lm: f64,
    pub norm_m: f64,
    pub norm_l2m: f64,
    pub ratio_lm: f64,
    pub ratio_m: f64,
    pub ratio_l2m: f64,
}

/// Computes the three mollified sums (exact in L, float in the mollifier),
/// normalized by X (log_q X)^{((2k)^2+1)/2}, X (log_q X)^{(2k)^2/2} and
/// X (log_q X)^{((2k)^2+2)/2} over the H family; the P family reduces each
/// exponent by one.
pub fn mollified_sums(
    data: &FamilyData,
    s: &Schedule,
    tables: &PrimeTables,
    k: f64,
) -> Result<MollifiedSums> {
    ensure_standard_q(data.spec.q)?;
    let two_k = 2.0 * k;
    if (two_k - 1.0).abs() < 1e-12 {
        return Err(Error::domain(
            "the mollified-sum exponent 2k/(2k-1) needs 2k != 1",
        ));
    }
    struct Row {
        l: f64,
        m_a: f64,
        m_b: f64,
    }
    let rows: Vec<Row> = data
        .members
        .par_chunks(crate::reduce::CHUNK)
        .enumerate()
        .flat_map_iter(|(ci, chunk)| {
            let base = ci * crate::reduce::CHUNK;
            chunk.iter().enumerate().map(move |(i, d)| {
                let segs = segments(d, s, tables).expect("validated inputs");
                Row {
                    l: data.centrals[base + i].to_f64().max(0.0),
                    m_a: mollifier_from_segments(&segs, two_k - 1.0, s),
                    m_b: mollifier_from_segments(&segs, two_k - 2.0, s),
                }
            })
        })
        .collect();
    let s_lm = par_sum_f64(&rows, |r| r.l * r.m_a);
    let s_m = par_sum_f64(&rows, |r| r.m_a.powf(two_k / (two_k - 1.0)));
    let s_l2m = par_sum_f64(&rows, |r| r.l * r.l * r.m_b);
    let x = data.spec.x();
    let n = data.spec.log_q_x();
    let shift = match data.spec.kind {
        FamilyKind::Squarefree => 0.0,
        FamilyKind::Prime => 1.0,
        FamilyKind::Monic => unreachable!("FamilyData excludes the monic family"),
    };
    let sq = two_k * two_k;
    let norm_lm = x * n.powf((sq + 1.0) / 2.0 - shift);
    let norm_m = x * n.powf(sq / 2.0 - shift);
    let norm_l2m = x * n.powf((sq + 2.0) / 2.0 - shift);
    Ok(MollifiedSums {
        family: data.spec.kind.code().to_string(),
        q: data.spec.q,
        g: data.spec.genus(),
        two_k,
        s_lm,
        s_m,
        s_l2m,
        norm_lm,
        norm_m,
        norm_l2m,
        ratio_lm: s_lm / norm_lm,
        ratio_m: s_m / norm_m,
        ratio_l2m: s_l2m / norm_l2m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(kind: FamilyKind, q: u64, g: usize) -> FamilyData {
        FamilyData::load(FamilySpec::from_genus(kind, q, g).unwrap()).unwrap()
    }

    #[test]
    fn zeroth_moments_count_families() {
        let p = load(FamilyKind::Prime, 5, 1);
        let r = moment(&p, 0.0).unwrap();
        assert_eq!(r.empirical, 40.0);
        let h = load(FamilyKind::Squarefree, 5, 1);
        let r = moment(&h, 0.0).unwrap();
        assert_eq!(r.empirical, 100.0);
        assert!(moment(&h, -1.0).is_err());
    }

    #[test]
    fn cauchy_schwarz_between_moments() {
        for kind in [FamilyKind::Squarefree, FamilyKind::Prime] {
            let data = load(kind, 5, 1);
            let m0 = moment(&data, 0.0).unwrap().empirical;
            let m1 = moment(&data, 1.0).unwrap().empirical;
            let m2 = moment(&data, 2.0).unwrap().empirical;
            assert!(m1 * m1 <= m0 * m2 * (1.0 + 1e-12), "{kind:?}");
        }
    }

    #[test]
    fn exact_and_float_second_moment_agree() {
        let data = load(FamilyKind::Squarefree, 5, 1);
        let exact = moment(&data, 2.0).unwrap().empirical;
        let float = par_sum_f64(&data.centrals, |cv| cv.to_f64().powi(2));
        assert!((exact - float).abs() < 1e-9 * (1.0 + exact.abs()));
    }

    #[test]
    fn twisted_first_prime_main_terms() {
        let data = load(FamilyKind::Prime, 5, 2);
        let r1 = twisted_first_prime(&data, &Polynomial::one(5)).unwrap();
        assert!((r1.main - 1875.0).abs() < 1e-9);
        let rt = twisted_first_prime(&data, &Polynomial::parse(5, "0,1").unwrap()).unwrap();
        assert!((rt.main - 250.0 * 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn twist_by_square_is_trivial() {
        // chi_P(T^2) = 1 for every P in the family, so the twisted sum
        // equals the untwisted one exactly
        let data = load(FamilyKind::Prime, 5, 1);
        let plain = twisted_first_prime(&data, &Polynomial::one(5)).unwrap();
        let sq = twisted_first_prime(&data, &Polynomial::parse(5, "0,0,1").unwrap()).unwrap();
        assert_eq!(plain.empirical.to_bits(), sq.empirical.to_bits());
    }

    #[test]
    fn twisted_second_prime_main_at_5_2() {
        let data = load(FamilyKind::Prime, 5, 2);
        let r = twisted_second_prime(&data, &Polynomial::one(5)).unwrap();
        // 625 * (4.1667 + 7.5)
        assert!((r.main - 625.0 * (2.5f64.powi(3) / 3.75 + 1.2 * 6.25)).abs() < 1e-9);
        assert!((r.main - 7291.666666666666).abs() < 1e-6);
    }

    #[test]
    fn c_of_l_parity() {
        let data = load(FamilyKind::Prime, 5, 1);
        // odd-degree twist: C(l) = 2; reconstruct from the main term with
        // l = T (single prime dividing l1)
        let l = Polynomial::parse(5, "0,1").unwrap();
        let r = twisted_second_prime(&data, &l).unwrap();
        let x = 125.0;
        let n = 3.0;
        let zeta2 = 1.25;
        let w = (n - 1.0) / 2.0;
        let euler = 1.0 / (1.0 + 0.2);
        let prime_sum = (1.0 / 5.0) / (1.0 + 0.2);
        let expect = x / n * 2.0 / 5f64.sqrt()
            * euler
            * (w.powi(3) / (3.0 * zeta2) + 2.0 * w * w + prime_sum / zeta2 * w * w);
        assert!((r.main - expect).abs() < 1e-9);
    }

    #[test]
    fn euler_constant_converges() {
        let (c8, tail8) = euler_constant_c(5, 8);
        let (c10, _) = euler_constant_c(5, 10);
        assert!(tail8 < 1e-6);
        assert!((c8 - c10).abs() < 1e-6);
        assert!(c8 > 0.0 && c8 < 1.0);
    }

    #[test]
    fn twist_weight_trivial() {
        assert_eq!(twist_weight_g(&Polynomial::one(5)).unwrap(), 1.0);
    }

    #[test]
    fn twisted_first_squarefree_runs() {
        let data = load(FamilyKind::Squarefree, 5, 1);
        let r =
            twisted_first_squarefree(&data, &Polynomial::one(5), 0.0, &BTreeMap::new()).unwrap();
        assert!(r.empirical > 0.0);
        assert!(r.main > 0.0);
        // the fitted constant should bring the prediction closer at l = 1
        let c1 = fit_c1(5, &Polynomial::one(5), &[1, 2]).unwrap();
        let r_fit =
            twisted_first_squarefree(&data, &Polynomial::one(5), c1, &BTreeMap::new()).unwrap();
        assert!(r_fit.normalized_error.abs() <= r.normalized_error.abs() + 1e-9);
    }

    #[test]
    fn theta_profile_shape() {
        let data = load(FamilyKind::Prime, 5, 1);
        let pi = std::f64::consts::PI;
        let profile = theta_profile(&data, &[0.0, pi / 2.0, pi]).unwrap();
        assert_eq!(profile.rows.len(), 3);
        // theta = 0: bound factor min{g, inf} = g
        let g = 1.0f64;
        let expect0 = 125.0 / 3.0 * g.powf(1.1) * g * g;
        assert!((profile.rows[0].bound - expect0).abs() < 1e-9);
        // theta = pi: theta_bar = pi
        let cap = g.min(1.0 / (2.0 * pi));
        let expect_pi = 125.0 / 3.0 * g.powf(1.1) * cap * cap;
        assert!((profile.rows[2].bound - expect_pi).abs() < 1e-9);
        assert!(profile.max_ratio >= profile.rows[0].ratio);
    }

    #[test]
    fn theta_profile_symmetric() {
        let data = load(FamilyKind::Prime, 5, 1);
        let t = 1.234f64;
        let profile = theta_profile(&data, &[t, 2.0 * std::f64::consts::PI - t]).unwrap();
        let a = profile.rows[0].empirical;
        let b = profile.rows[1].empirical;
        assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn order_report_k0_rows() {
        let report = order_of_magnitude(5, &[1, 2], &[0.0]).unwrap();
        // k = 0 H rows: ratio = (q^n - q^{n-1})/X = 1 - 1/q exactly
        for row in report.rows.iter().filter(|r| r.family == "H") {
            assert!((row.ratio - 0.8).abs() < 1e-12);
        }
        // k = 0 P rows: ratio = pi_A(n) / (X / n)
        for row in report.rows.iter().filter(|r| r.family == "P") {
            let n = 2 * row.g + 1;
            let expect = prime_count(5, n) as f64 / (5f64.powi(n as i32) / n as f64);
            assert!((row.ratio - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn mollified_sums_trivial_schedule() {
        let tables = PrimeTables::enumerate(5, 3).unwrap();
        let s0 = Schedule::desk(125.0, vec![0.2]).unwrap(); // J = 0, mollifier = 1
        let data = load(FamilyKind::Prime, 5, 1);
        let ms = mollified_sums(&data, &s0, &tables, 0.75).unwrap();
        let first = twisted_first_prime(&data, &Polynomial::one(5)).unwrap();
        let second = twisted_second_prime(&data, &Polynomial::one(5)).unwrap();
        assert!((ms.s_lm - first.empirical).abs() < 1e-9);
        assert_eq!(ms.s_m, 40.0);
        assert!((ms.s_l2m - second.empirical).abs() < 1e-9);
        assert!(mollified_sums(&data, &s0, &tables, 0.5).is_err()); // 2k = 1
    }

    #[test]
    fn mollified_sums_holder_consistency() {
        // S_LM <= (moment(2k))^{1/2k} (S_M)^{(2k-1)/2k} for 2k > 1
        let tables = PrimeTables::enumerate(5, 3).unwrap();
        let s = Schedule::desk(125.0, vec![0.2, 0.4, 0.7]).unwrap();
        let data = load(FamilyKind::Squarefree, 5, 1);
        let k = 0.75; // 2k = 1.5
        let ms = mollified_sums(&data, &s, &tables, k).unwrap();
        let m2k = moment(&data, 2.0 * k).unwrap().empirical;
        let rhs = m2k.powf(1.0 / 1.5) * ms.s_m.powf(0.5 / 1.5);
        assert!(ms.s_lm <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn refuses_non_standard_q() {
        assert!(order_of_magnitude(13, &[1], &[1.0]).is_ok());
        assert!(order_of_magnitude(7, &[1], &[1.0]).is_err()); // 7 = 3 mod 4
    }
}

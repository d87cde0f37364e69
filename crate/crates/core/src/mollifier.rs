//! Mollifier machinery: exponent schedules, truncated exponentials of
//! prime-segment Dirichlet polynomials, segment sums, the induced
//! family classification, and numeric verification of the Hoelder chains.
//!
//! A schedule fixes window exponents alpha_0 < alpha_1 < ... < alpha_J. In
//! paper mode they follow alpha_0 = log 2 / log X, alpha_j = 20^{j-1} /
//! (log log X)^2 with J = 1 + max{j : alpha_j <= 10^{-M}}; that recipe
//! degenerates for desk-scale X, so a desk mode accepts explicit exponent
//! lists and every report built from one says so.

use serde::{Deserialize, Serialize};

use crate::charsum::ensure_standard_q;
use crate::error::{Error, Result};
use crate::lfunc::FamilyData;
use crate::poly::Polynomial;
use crate::primes::PrimeTables;
use crate::reduce::par_sum_f64;
use crate::symbol::residue_symbol;

use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMode {
    Paper,
    Desk,
}

/// Default even cap on the truncated-exponential order; hand-crafted desk
/// schedules would otherwise demand absurd truncation degrees. Runs that hit
/// the cap are labeled non-paper-faithful.
pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Debug, Clone)]
pub struct Schedule {
    ln_x: f64,
    m: u32,
    mode: ScheduleMode,
    alphas: Vec<f64>, // alpha_0..alpha_J
    cap: usize,
}

/// On-disk schedule description: {q, g, M, mode, alphas[]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub q: u64,
    pub g: usize,
    #[serde(rename = "M")]
    pub m: u32,
    pub mode: ScheduleMode,
    pub alphas: Vec<f64>,
}

impl Schedule {
    /// Paper-mode schedule for size X. Fails with `DegenerateSchedule` when
    /// no index satisfies the threshold (the expected outcome for desk X).
    pub fn paper(x: f64, m: u32) -> Result<Self> {
        if !(x.is_finite() && x > 1.0) {
            return Err(Error::domain("schedule size X must exceed 1"));
        }
        Self::paper_from_ln_x(x.ln(), m)
    }

    /// Paper-mode schedule given log X directly (sizes like exp(exp(100))
    /// overflow f64 but their logarithm does not).
    pub fn paper_from_ln_x(ln_x: f64, m: u32) -> Result<Self> {
        if !(ln_x > std::f64::consts::E) {
            return Err(Error::domain(
                "paper-mode schedule requires log log X > 1",
            ));
        }
        let lll = ln_x.ln(); // log log X
        let threshold = 10f64.powi(-(m as i32));
        let alpha_at = |j: u32| 20f64.powi(j as i32 - 1) / (lll * lll);
        if alpha_at(1) > threshold {
            return Err(Error::DegenerateSchedule(format!(
                "alpha_1 = {:.6} exceeds 10^-{m}; no valid index at this X",
                alpha_at(1)
            )));
        }
        let mut j_max = 1u32;
        while alpha_at(j_max + 1) <= threshold {
            j_max += 1;
        }
        let j_count = j_max + 1;
        let mut alphas = vec![2f64.ln() / ln_x];
        for j in 1..=j_count {
            alphas.push(alpha_at(j));
        }
        let s = Schedule {
            ln_x,
            m,
            mode: ScheduleMode::Paper,
            alphas,
            cap: DEFAULT_ORDER_CAP,
        };
        s.validate()?;
        Ok(s)
    }

    /// Desk-mode schedule with an explicit exponent list alpha_0..alpha_J.
    pub fn desk(x: f64, alphas: Vec<f64>) -> Result<Self> {
        if !(x.is_finite() && x > 1.0) {
            return Err(Error::domain("schedule size X must exceed 1"));
        }
        let s = Schedule {
            ln_x: x.ln(),
            m: 0,
            mode: ScheduleMode::Desk,
            alphas,
            cap: DEFAULT_ORDER_CAP,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::domain("schedule needs at least alpha_0"));
        }
        if self.alphas.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::domain("schedule exponents must be positive and finite"));
        }
        if self.alphas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("schedule exponents must be strictly increasing"));
        }
        Ok(())
    }

    pub fn from_file(file: &ScheduleFile) -> Result<Self> {
        let q = file.q as f64;
        let ln_x = (2 * file.g + 1) as f64 * q.ln();
        match file.mode {
            ScheduleMode::Paper => {
                let s = Self::paper_from_ln_x(ln_x, file.m)?;
                if !file.alphas.is_empty() {
                    let close = file.alphas.len() == s.alphas.len()
                        && file
                            .alphas
                            .iter()
                            .zip(&s.alphas)
                            .all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + b.abs()));
                    if !close {
                        return Err(Error::domain(
                            "schedule file exponents disagree with the paper recipe at (q, g, M)",
                        ));
                    }
                }
                Ok(s)
            }
            ScheduleMode::Desk => {
                let s = Schedule {
                    ln_x,
                    m: file.m,
                    mode: ScheduleMode::Desk,
                    alphas: file.alphas.clone(),
                    cap: DEFAULT_ORDER_CAP,
                };
                s.validate()?;
                Ok(s)
            }
        }
    }

    pub fn to_file(&self, q: u64, g: usize) -> ScheduleFile {
        ScheduleFile {
            q,
            g,
            m: self.m,
            mode: self.mode,
            alphas: self.alphas.clone(),
        }
    }

    pub fn mode(&self) -> ScheduleMode {
        self.mode
    }

    pub fn ln_x(&self) -> f64 {
        self.ln_x
    }

    /// Number of windows J (the exponent list is alpha_0..alpha_J).
    pub fn j_count(&self) -> usize {
        self.alphas.len() - 1
    }

    pub fn alpha(&self, j: usize) -> f64 {
        self.alphas[j]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Truncation order for window j: min(2 ceil(e^5 alpha_j^{-3/4}), cap),
    /// forced even so positivity of the truncated exponential is preserved.
    pub fn truncation_order(&self, j: usize) -> usize {
        let y = (5f64).exp() * self.alphas[j].powf(-0.75);
        let raw = 2 * (y.ceil() as usize);
        let capped = raw.min(self.cap);
        capped & !1
    }

    /// True when any window's truncation order hits the cap; such runs are
    /// not paper-faithful.
    pub fn any_order_capped(&self) -> bool {
        (1..=self.j_count()).any(|j| {
            let y = (5f64).exp() * self.alphas[j].powf(-0.75);
            2 * (y.ceil() as usize) > self.cap
        })
    }

    /// Budget quantities of the schedule: the left side
    /// sum_j 2 alpha_j ceil(e^5 alpha_j^{-3/4}) and the right side
    /// 5 e^5 10^{-M/4}. The inequality holds asymptotically in X but can
    /// fail arithmetically for particular (X, M); it is recorded, not
    /// asserted at construction.
    pub fn budget(&self) -> (f64, f64) {
        let e5 = (5f64).exp();
        let lhs: f64 = (1..=self.j_count())
            .map(|j| {
                let a = self.alphas[j];
                2.0 * a * (e5 * a.powf(-0.75)).ceil()
            })
            .sum();
        let rhs = 5.0 * e5 * 10f64.powf(-(self.m as f64) / 4.0);
        (lhs, rhs)
    }

    pub fn budget_satisfied(&self) -> bool {
        let (lhs, rhs) = self.budget();
        lhs <= rhs
    }

    /// Degree window of segment j over F_q[T]: the degrees d with
    /// X^{alpha_{j-1}} < q^d <= X^{alpha_j}, i.e. the half-open norm window
    /// rounded to integer degrees. Values of alpha * log_q X within 1e-9 of
    /// an integer are snapped to it, so decimal exponents behave as written.
    pub fn window_degrees(&self, j: usize, q: u64) -> Option<(usize, usize)> {
        assert!(j >= 1 && j <= self.j_count());
        let n_eff = self.ln_x / (q as f64).ln(); // log_q X
        let snap = |v: f64| {
            let r = v.round();
            if (v - r).abs() < 1e-9 {
                r
            } else {
                v
            }
        };
        let lo = snap(self.alphas[j - 1] * n_eff).floor() as i64 + 1;
        let hi = snap(self.alphas[j] * n_eff).floor() as i64;
        let lo = lo.max(1);
        if lo > hi {
            None
        } else {
            Some((lo as usize, hi as usize))
        }
    }

    /// Largest prime degree any window can touch.
    pub fn max_window_degree(&self, q: u64) -> usize {
        (1..=self.j_count())
            .filter_map(|j| self.window_degrees(j, q))
            .map(|(_, hi)| hi)
            .max()
            .unwrap_or(0)
    }

    /// Actual Dirichlet-polynomial length of the mollifier over F_q[T]:
    /// sum over windows of top-degree x truncation order.
    pub fn polynomial_length(&self, q: u64) -> f64 {
        (1..=self.j_count())
            .filter_map(|j| self.window_degrees(j, q).map(|(_, hi)| (j, hi)))
            .map(|(j, hi)| {
                let y = (5f64).exp() * self.alphas[j].powf(-0.75);
                hi as f64 * 2.0 * y.ceil()
            })
            .sum()
    }

    /// Budgeted length sum_j 2 alpha_j ceil(e^5 alpha_j^{-3/4}) log_q X; the
    /// actual length never exceeds it because window degrees round downward.
    pub fn length_budget(&self, q: u64) -> f64 {
        let e5 = (5f64).exp();
        let n_eff = self.ln_x / (q as f64).ln();
        (1..=self.j_count())
            .map(|j| {
                let a = self.alphas[j];
                2.0 * a * (e5 * a.powf(-0.75)).ceil() * n_eff
            })
            .sum()
    }
}

/// Truncated exponential E_y(x) = sum_{j=0}^{2 ceil(y)} x^j / j!.
///
/// The truncation order is even, which keeps E_y strictly positive on all of
/// R (an even-order truncation of exp has no real root).
pub fn truncated_exp(y: f64, x: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::domain("truncated exponential needs y >= 0"));
    }
    Ok(truncated_exp_order(2 * (y.ceil() as usize), x))
}

pub(crate) fn truncated_exp_order(order: usize, x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut acc = 1.0f64;
    for j in 1..=order {
        term *= x / j as f64;
        acc += term;
    }
    acc
}

/// chi_D(Q) with its degree, for every prime Q in every window of the
/// schedule; shared by the segment sums below.
fn window_chars(
    d: &Polynomial,
    s: &Schedule,
    tables: &PrimeTables,
) -> Result<Vec<Vec<(i8, usize)>>> {
    let q = tables.q();
    let mut out = Vec::with_capacity(s.j_count());
    for j in 1..=s.j_count() {
        let mut row = Vec::new();
        if let Some((lo, hi)) = s.window_degrees(j, q) {
            for deg in lo..=hi {
                for p in tables.of_degree(deg) {
                    row.push((residue_symbol(d, p)?, deg));
                }
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// Prime-segment Dirichlet polynomial for window j:
/// P_j(D) = sum over primes Q with X^{alpha_{j-1}} < |Q| <= X^{alpha_j} of
/// chi_D(Q) / sqrt(|Q|). An empty window sums to zero.
pub fn prime_segment(
    d: &Polynomial,
    j: usize,
    s: &Schedule,
    tables: &PrimeTables,
) -> Result<f64> {
    if j < 1 || j > s.j_count() {
        return Err(Error::domain(format!(
            "segment index {j} outside 1..={}",
            s.j_count()
        )));
    }
    let q = tables.q();
    let mut acc = 0.0;
    if let Some((lo, hi)) = s.window_degrees(j, q) {
        for deg in lo..=hi {
            let w = (q as f64).powf(-(deg as f64) / 2.0);
            for p in tables.of_degree(deg) {
                acc += residue_symbol(d, p)? as f64 * w;
            }
        }
    }
    Ok(acc)
}

/// All segments P_1(D)..P_J(D) at once.
pub fn segments(d: &Polynomial, s: &Schedule, tables: &PrimeTables) -> Result<Vec<f64>> {
    let q = tables.q();
    let chars = window_chars(d, s, tables)?;
    Ok(chars
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(chi, deg)| chi as f64 * (q as f64).powf(-(deg as f64) / 2.0))
                .sum()
        })
        .collect())
}

/// The mollifier value M(D, alpha) = prod_j E_{e^5 alpha_j^{-3/4}}(alpha P_j(D));
/// strictly positive for every real alpha.
pub fn mollifier_value(
    d: &Polynomial,
    alpha: f64,
    s: &Schedule,
    tables: &PrimeTables,
) -> Result<f64> {
    let segs = segments(d, s, tables)?;
    Ok(mollifier_from_segments(&segs, alpha, s))
}

pub fn mollifier_from_segments(segs: &[f64], alpha: f64, s: &Schedule) -> f64 {
    segs.iter()
        .enumerate()
        .map(|(idx, &p)| truncated_exp_order(s.truncation_order(idx + 1), alpha * p))
        .product()
}

/// Weighted segment sum M_{i,j}(D): over primes Q of window i,
/// chi_D(Q) |Q|^{-1/2 - 1/(alpha_j log X)} log(X^{alpha_j}/|Q|) / log X^{alpha_j}.
pub fn segment_m(
    d: &Polynomial,
    i: usize,
    j: usize,
    s: &Schedule,
    tables: &PrimeTables,
) -> Result<f64> {
    if !(1 <= i && i <= j && j <= s.j_count()) {
        return Err(Error::domain(format!(
            "segment indices need 1 <= i <= j <= {}; got ({i}, {j})",
            s.j_count()
        )));
    }
    let chars = window_chars(d, s, tables)?;
    Ok(segment_m_from_chars(&chars[i - 1], j, s, tables.q()))
}

fn segment_m_from_chars(row: &[(i8, usize)], j: usize, s: &Schedule, q: u64) -> f64 {
    let ln_q = (q as f64).ln();
    let log_xj = s.alpha(j) * s.ln_x(); // log X^{alpha_j}
    row.iter()
        .map(|&(chi, deg)| {
            let ln_norm = deg as f64 * ln_q;
            let weight = (log_xj - ln_norm) / log_xj;
            let decay = (-(ln_norm) * (0.5 + 1.0 / log_xj)).exp();
            chi as f64 * decay * weight
        })
        .sum()
}

/// Classification index of a modulus: the largest j such that every row
/// i = 1..j satisfies |M_{i,l}(D)| <= alpha_i^{-3/4} for all l in i..=J,
/// with the first violation at row j+1; returns J when no row ever violates.
/// Total and single-valued by construction, so the classes partition the
/// family.
pub fn classify(d: &Polynomial, s: &Schedule, tables: &PrimeTables) -> Result<usize> {
    let chars = window_chars(d, s, tables)?;
    Ok(classify_from_chars(&chars, s, tables.q()))
}

fn classify_from_chars(chars: &[Vec<(i8, usize)>], s: &Schedule, q: u64) -> usize {
    let j_count = s.j_count();
    for i in 1..=j_count {
        let threshold = s.alpha(i).powf(-0.75);
        let row_ok = (i..=j_count).all(|l| {
            segment_m_from_chars(&chars[i - 1], l, s, q).abs() <= threshold
        });
        if !row_ok {
            return i - 1;
        }
    }
    j_count
}

/// Classifies a whole family; returns per-class counts (index 0..=J).
pub fn classify_family(
    data: &FamilyData,
    s: &Schedule,
    tables: &PrimeTables,
) -> Result<Vec<u64>> {
    ensure_standard_q(data.spec.q)?;
    let mut counts = vec![0u64; s.j_count() + 1];
    let classes: Vec<usize> = data
        .members
        .par_chunks(crate::reduce::CHUNK)
        .flat_map_iter(|chunk| {
            chunk.iter().map(|d| {
                let chars = window_chars(d, s, tables).expect("validated inputs");
                classify_from_chars(&chars, s, tables.q())
            })
        })
        .collect();
    for c in classes {
        counts[c] += 1;
    }
    Ok(counts)
}

/// Report of one Hoelder-chain verification.
#[derive(Debug, Clone, Serialize)]
pub struct HolderReport {
    pub family: String,
    pub q: u64,
    pub g: usize,
    pub two_k: f64,
    pub c: Option<f64>,
    pub form: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Verifies the Hoelder chain bounding sum L M(D, 2k-1).
///
/// For 2k > 1 the two-factor split is checked; for 0 < 2k < 1 the
/// three-factor split with parameter c in (0, 2k) is checked (the exponents
/// 2k/c, 2/(1-c), ((1+c)/2 - c/(2k))^{-1} must all be >= 1). Sums over the
/// family are exact in L and float in the mollifier; the check asserts
/// LHS <= RHS (1 + 1e-9).
pub fn holder_check(
    data: &FamilyData,
    two_k: f64,
    c: Option<f64>,
    s: &Schedule,
    tables: &PrimeTables,
) -> Result<HolderReport> {
    ensure_standard_q(data.spec.q)?;
    let k = two_k / 2.0;
    if !(two_k > 0.0) || (two_k - 1.0).abs() < 1e-12 {
        return Err(Error::domain("Hoelder check needs 2k > 0 and 2k != 1"));
    }
    struct Row {
        l: f64,
        m_a: f64, // M(D, 2k-1)
        m_b: f64, // M(D, 2k-2)
        m_c: f64, // M(D, 2-2k)
    }
    let rows: Vec<Row> = data
        .members
        .par_chunks(crate::reduce::CHUNK)
        .enumerate()
        .flat_map_iter(|(ci, chunk)| {
            let base = ci * crate::reduce::CHUNK;
            chunk.iter().enumerate().map(move |(i, d)| {
                let segs = segments(d, s, tables).expect("validated inputs");
                let l = data.centrals[base + i].to_f64().max(0.0);
                Row {
                    l,
                    m_a: mollifier_from_segments(&segs, two_k - 1.0, s),
                    m_b: mollifier_from_segments(&segs, two_k - 2.0, s),
                    m_c: mollifier_from_segments(&segs, 2.0 - two_k, s),
                }
            })
        })
        .collect();
    let lhs = par_sum_f64(&rows, |r| r.l * r.m_a);
    let (form, rhs) = if two_k > 1.0 {
        let s1 = par_sum_f64(&rows, |r| r.l.powf(two_k));
        let s2 = par_sum_f64(&rows, |r| r.m_a.powf(two_k / (two_k - 1.0)));
        (
            "two-factor".to_string(),
            s1.powf(1.0 / two_k) * s2.powf((two_k - 1.0) / two_k),
        )
    } else {
        let c = c.ok_or_else(|| {
            Error::domain("the 0 < 2k < 1 form needs the exponent parameter c")
        })?;
        if !(0.0 < c && c < two_k) {
            return Err(Error::domain(format!(
                "exponent parameter c = {c} outside (0, 2k) = (0, {two_k})"
            )));
        }
        let e3 = (1.0 + c) / 2.0 - c / two_k;
        if e3 <= 0.0 || e3 > 1.0 {
            return Err(Error::domain("exponent ((1+c)/2 - c/(2k))^{-1} must be >= 1"));
        }
        let s1 = par_sum_f64(&rows, |r| r.l.powf(two_k));
        let s2 = par_sum_f64(&rows, |r| r.l * r.l * r.m_b);
        let third_exp = 2.0 * (2.0 - 3.0 * k) / (1.0 - two_k);
        let s3 = par_sum_f64(&rows, |r| r.m_a.powf(third_exp) * r.m_c * r.m_c);
        (
            "three-factor".to_string(),
            s1.powf(c / two_k) * s2.powf((1.0 - c) / 2.0) * s3.powf(e3),
        )
    };
    Ok(HolderReport {
        family: data.spec.kind.code().to_string(),
        q: data.spec.q,
        g: data.spec.genus(),
        two_k,
        c,
        form,
        lhs,
        rhs,
        slack: rhs - lhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{FamilyKind, FamilySpec};

    fn desk_5_1() -> Schedule {
        // windows: degree 1 and degree 2 at X = 5^3
        Schedule::desk(125.0, vec![0.2, 0.4, 0.7]).unwrap()
    }

    fn tables_5() -> PrimeTables {
        PrimeTables::enumerate(5, 3).unwrap()
    }

    #[test]
    fn paper_mode_degenerates_at_desk_scale() {
        let err = Schedule::paper(5f64.powi(5), 3).unwrap_err();
        assert!(matches!(err, Error::DegenerateSchedule(_)));
    }

    #[test]
    fn paper_mode_index_count() {
        // log log X = 100 => alpha_j = 20^{j-1} / 10^4; with M = 1 the last
        // admissible j is 3, so J = 4
        let ln_x = (100f64).exp();
        let s = Schedule::paper_from_ln_x(ln_x, 1).unwrap();
        assert_eq!(s.j_count(), 4);
        assert!((s.alpha(1) - 1e-4).abs() < 1e-12);
        assert!((s.alpha(4) - 0.8).abs() < 1e-12);
        // this particular schedule lands above the budget line; recorded,
        // not asserted
        assert!(!s.budget_satisfied());
    }

    #[test]
    fn paper_mode_budget_holds_near_threshold() {
        // (log log X)^2 = 1e5, M = 4: J = 2 with alpha_2 = 2 * 10^{-M}
        let ln_x = (1e5f64).sqrt().exp();
        let s = Schedule::paper_from_ln_x(ln_x, 4).unwrap();
        assert_eq!(s.j_count(), 2);
        assert!(s.budget_satisfied());
    }

    #[test]
    fn desk_mode_validation() {
        assert!(Schedule::desk(125.0, vec![0.05, 0.1, 0.2]).is_ok());
        assert_eq!(Schedule::desk(125.0, vec![0.05, 0.1, 0.2]).unwrap().j_count(), 2);
        assert!(Schedule::desk(125.0, vec![0.2, 0.1]).is_err());
        assert!(Schedule::desk(125.0, vec![]).is_err());
        assert!(Schedule::desk(125.0, vec![-0.1, 0.2]).is_err());
    }

    #[test]
    fn schedule_file_roundtrip() {
        let s = desk_5_1();
        let file = s.to_file(5, 1);
        let back = Schedule::from_file(&file).unwrap();
        assert_eq!(back.alphas(), s.alphas());
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"M\":0"));
        let parsed: ScheduleFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.alphas, file.alphas);
    }

    #[test]
    fn window_degree_mapping() {
        let s = desk_5_1();
        // log_q X = 3: windows (0.6, 1.2] -> {1}, (1.2, 2.1] -> {2}
        assert_eq!(s.window_degrees(1, 5), Some((1, 1)));
        assert_eq!(s.window_degrees(2, 5), Some((2, 2)));
        // narrow window straddles no integer degree
        let empty = Schedule::desk(125.0, vec![0.4, 0.5, 0.6]).unwrap();
        assert_eq!(empty.window_degrees(1, 5), None);
        // exact boundaries are half-open: q^d = X^alpha excluded below,
        // included above
        let exact = Schedule::desk(125.0, vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert_eq!(exact.window_degrees(1, 5), Some((2, 2)));
    }

    #[test]
    fn truncated_exp_examples() {
        assert_eq!(truncated_exp(1.0, 0.0).unwrap(), 1.0);
        assert!((truncated_exp(1.0, 1.0).unwrap() - 2.5).abs() < 1e-15);
        assert!((truncated_exp(1.0, -3.0).unwrap() - 2.5).abs() < 1e-15);
        assert!(truncated_exp(-0.5, 1.0).is_err());
        assert_eq!(truncated_exp(0.0, 7.0).unwrap(), 1.0); // order 0: single term
    }

    #[test]
    fn truncated_exp_positivity_grid() {
        for y in [0.0, 1.0, 2.7, 10.0] {
            let mut x = -50.0;
            while x <= 50.0 {
                assert!(truncated_exp(y, x).unwrap() > 0.0, "y={y} x={x}");
                x += 0.5;
            }
        }
    }

    #[test]
    fn truncated_exp_product_at_least_one() {
        for order in [2usize, 6, 20, 64] {
            let mut x = -50.0;
            while x <= 50.0 {
                let prod = truncated_exp_order(order, x) * truncated_exp_order(order, -x);
                assert!(prod >= 1.0 - 1e-12, "order={order} x={x} prod={prod}");
                x += 0.5;
            }
        }
    }

    #[test]
    fn segment_example() {
        // window of exactly the 5 linear primes at (5,1): P_1(T^3+T) = a_1/sqrt(5)
        let s = desk_5_1();
        let tables = tables_5();
        let d = Polynomial::parse(5, "0,1,0,1").unwrap();
        let p1 = prime_segment(&d, 1, &s, &tables).unwrap();
        assert!((p1 - (-2.0 / 5f64.sqrt())).abs() < 1e-12);
        // empty window
        let narrow = Schedule::desk(125.0, vec![0.4, 0.5]).unwrap();
        assert_eq!(prime_segment(&d, 1, &narrow, &tables).unwrap(), 0.0);
        assert!(prime_segment(&d, 3, &s, &tables).is_err());
    }

    #[test]
    fn segment_envelope() {
        // if chi_D(Q) = +1 on all window primes the segment hits the upper
        // envelope sum 1/sqrt(|Q|)
        let s = desk_5_1();
        let tables = tables_5();
        let spec = FamilySpec::from_genus(FamilyKind::Squarefree, 5, 1).unwrap();
        let envelope: f64 = 5.0 / 5f64.sqrt();
        for d in spec.members() {
            let p1 = prime_segment(&d, 1, &s, &tables).unwrap();
            assert!(p1.abs() <= envelope + 1e-12);
        }
    }

    #[test]
    fn mollifier_trivial_cases() {
        let tables = tables_5();
        let d = Polynomial::parse(5, "0,1,0,1").unwrap();
        // J = 0: empty product
        let s0 = Schedule::desk(125.0, vec![0.2]).unwrap();
        assert_eq!(s0.j_count(), 0);
        assert_eq!(mollifier_value(&d, 1.5, &s0, &tables).unwrap(), 1.0);
        // alpha = 0: every factor E(0) = 1
        let s = desk_5_1();
        assert_eq!(mollifier_value(&d, 0.0, &s, &tables).unwrap(), 1.0);
    }

    #[test]
    fn mollifier_product_inequality_family_wide() {
        let s = desk_5_1();
        let tables = tables_5();
        let spec = FamilySpec::from_genus(FamilyKind::Squarefree, 5, 1).unwrap();
        for alpha in [0.5, 1.0] {
            for d in spec.members() {
                let m_plus = mollifier_value(&d, alpha, &s, &tables).unwrap();
                let m_minus = mollifier_value(&d, -alpha, &s, &tables).unwrap();
                assert!(m_plus > 0.0 && m_minus > 0.0);
                assert!(m_plus * m_minus >= 1.0 - 1e-12, "D={d} alpha={alpha}");
            }
        }
    }

    #[test]
    fn segment_m_bounds() {
        let s = desk_5_1();
        let tables = tables_5();
        let spec = FamilySpec::from_genus(FamilyKind::Squarefree, 5, 1).unwrap();
        for d in spec.members().iter().take(30) {
            for i in 1..=2usize {
                for j in i..=2usize {
                    let m = segment_m(d, i, j, &s, &tables).unwrap();
                    // triangle inequality against the unweighted envelope
                    let (lo, hi) = s.window_degrees(i, 5).unwrap();
                    let envelope: f64 = (lo..=hi)
                        .map(|deg| {
                            tables.of_degree(deg).len() as f64
                                * (5f64).powf(-(deg as f64) / 2.0)
                        })
                        .sum();
                    assert!(m.abs() <= envelope + 1e-12);
                }
            }
        }
        let d = Polynomial::parse(5, "0,1,0,1").unwrap();
        assert!(segment_m(&d, 2, 1, &s, &tables).is_err());
    }

    #[test]
    fn classify_partitions_family() {
        let s = desk_5_1();
        let tables = tables_5();
        let spec = FamilySpec::from_genus(FamilyKind::Squarefree, 5, 1).unwrap();
        let data = FamilyData::load(spec).unwrap();
        let counts = classify_family(&data, &s, &tables).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), 100);
    }

    #[test]
    fn classify_extremes() {
        let tables = tables_5();
        // thresholds alpha_i^{-3/4} > envelope: nothing violates, class = J
        let loose = Schedule::desk(125.0, vec![0.2, 0.4, 0.7]).unwrap();
        // envelope of window 1 is 5/sqrt(5) = 2.236; alpha_1^{-3/4} = 0.4^{-0.75} = 1.99
        // so violations are possible; build an all-zero-character modulus
        // instead: D = (T^3+T) has segment sums != 0; use a schedule with
        // empty windows so every M_{i,l} = 0
        let empty = Schedule::desk(125.0, vec![0.4, 0.5, 0.55]).unwrap();
        let d = Polynomial::parse(5, "0,1,0,1").unwrap();
        assert_eq!(classify(&d, &empty, &tables).unwrap(), 2);
        // immediate violation at row 1 gives class 0
        let tight = Schedule::desk(125.0, vec![1e-6, 1.0 / 3.0 + 1e-9, 2.0 / 3.0]).unwrap();
        // alpha_1 tiny: threshold alpha_1^{-3/4} huge, never violated; use
        // loose instead and find a modulus with a large first segment
        let spec = FamilySpec::from_genus(FamilyKind::Squarefree, 5, 1).unwrap();
        let threshold = 0.4f64.powf(-0.75);
        let mut found_zero_class = false;
        for d in spec.members() {
            let m11 = segment_m(&d, 1, 1, &loose, &tables).unwrap();
            let m12 = segment_m(&d, 1, 2, &loose, &tables).unwrap();
            if m11.abs() > threshold || m12.abs() > threshold {
                assert_eq!(classify(&d, &loose, &tables).unwrap(), 0);
                found_zero_class = true;
                break;
            }
        }
        let _ = (tight, found_zero_class);
    }

    #[test]
    fn holder_two_factor_reduces_to_plain_inequality_when_trivial() {
        let tables = tables_5();
        let s0 = Schedule::desk(125.0, vec![0.2]).unwrap(); // J = 0, M = 1
        let spec = FamilySpec::from_genus(FamilyKind::Squarefree, 5, 1).unwrap();
        let data = FamilyData::load(spec).unwrap();
        let r = holder_check(&data, 1.5, None, &s0, &tables).unwrap();
        assert!(r.holds, "lhs={} rhs={}", r.lhs, r.rhs);
        // with M = 1 the chain is sum L <= (sum L^{2k})^{1/2k} N^{1-1/2k}
        let n = 100f64;
        let sum_l: f64 = data.centrals.iter().map(|c| c.to_f64()).sum();
        assert!((r.lhs - sum_l).abs() < 1e-9);
        assert!(r.rhs <= r.rhs.max(sum_l.powf(1.0) * n));
    }

    #[test]
    fn holder_checks_hold_on_desk_schedule() {
        let tables = tables_5();
        let s = desk_5_1();
        for kind in [FamilyKind::Squarefree, FamilyKind::Prime] {
            let spec = FamilySpec::from_genus(kind, 5, 1).unwrap();
            let data = FamilyData::load(spec).unwrap();
            let two = holder_check(&data, 1.5, None, &s, &tables).unwrap();
            assert!(two.holds, "{kind:?} two-factor: {two:?}");
            let three = holder_check(&data, 0.6, Some(0.3), &s, &tables).unwrap();
            assert!(three.holds, "{kind:?} three-factor: {three:?}");
        }
    }

    #[test]
    fn holder_parameter_validation() {
        let tables = tables_5();
        let s = desk_5_1();
        let spec = FamilySpec::from_genus(FamilyKind::Prime, 5, 1).unwrap();
        let data = FamilyData::load(spec).unwrap();
        assert!(holder_check(&data, 1.0, None, &s, &tables).is_err());
        assert!(holder_check(&data, 0.6, None, &s, &tables).is_err());
        assert!(holder_check(&data, 0.6, Some(0.7), &s, &tables).is_err());
        assert!(holder_check(&data, -1.0, None, &s, &tables).is_err());
    }

    #[test]
    fn length_budget_dominates_actual_length() {
        let s = desk_5_1();
        assert!(s.polynomial_length(5) <= s.length_budget(5) + 1e-9);
        let ln_x = (1e5f64).sqrt().exp();
        let paper = Schedule::paper_from_ln_x(ln_x, 4).unwrap();
        assert!(paper.polynomial_length(5) <= paper.length_budget(5) + 1e-9);
    }

    #[test]
    fn order_cap_flags_non_faithful() {
        let s = desk_5_1();
        // e^5 * 0.4^{-0.75} is about 295, so desk orders hit the 64 cap
        assert!(s.any_order_capped());
        assert_eq!(s.truncation_order(1) % 2, 0);
        assert!(s.truncation_order(1) <= DEFAULT_ORDER_CAP);
    }
}

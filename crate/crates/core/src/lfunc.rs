//! L-polynomials of quadratic characters, exact central values, and the
//! finite functional-equation identities.
//!
//! For monic square-free D of degree 2g+1 the series sum_f chi_D(f) u^{d(f)}
//! is a polynomial of degree 2g with integer coefficients
//! a_n = sum_{f in M_n} chi_D(f), and its value at u = q^{-1/2} is the
//! central value. Central values are carried exactly as (A + B sqrt(q)) / q^g
//! with integer A, B so that nonnegativity and equality tests never touch
//! floating point.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::divisor::divisor_function;
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::poly::Polynomial;
use crate::primes::PrimeTables;
use crate::reduce::CHUNK;
use crate::symbol::{chi_eval, symbol_table};

/// Integer coefficient sequence of the L-polynomial of chi_D.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    q: u64,
    coeffs: Vec<i64>,
    modulus: Polynomial,
    /// Some(g) iff the modulus is square-free of odd degree 2g+1.
    genus: Option<usize>,
    /// False when the modulus is not square-free (imprimitive character);
    /// the coefficients are then only the truncation at degree d(D)-1.
    primitive: bool,
}

fn genus_of(d: &Polynomial) -> Result<Option<usize>> {
    let deg = d
        .degree()
        .ok_or_else(|| Error::domain("zero modulus has no L-polynomial"))?;
    if !d.is_monic() {
        return Err(Error::domain(format!("modulus {d} must be monic")));
    }
    if deg % 2 == 1 && d.is_squarefree()? {
        Ok(Some((deg - 1) / 2))
    } else {
        Ok(None)
    }
}

/// a_n = sum over monic f of degree n of chi_D(f), exactly.
fn coefficient_direct(d: &Polynomial, n: usize) -> i64 {
    if n == 0 {
        return 1;
    }
    let q = d.q();
    let mut acc: i64 = 0;
    for k in 0..q.pow(n as u32) {
        let f = Polynomial::monic_from_index(q, n, k);
        acc += chi_eval(d, &f).expect("monic f") as i64;
    }
    acc
}

impl LPolynomial {
    /// Direct construction: every coefficient up to the degree bound is an
    /// explicit character sum. Strict mode; non-square-free moduli are
    /// rejected (use `direct_lenient` for the flagged truncation).
    pub fn direct(d: &Polynomial) -> Result<Self> {
        let genus = genus_of(d)?;
        if genus.is_none() {
            return Err(Error::domain(format!(
                "modulus {d} is not square-free of odd degree; strict mode rejects it"
            )));
        }
        Self::direct_lenient(d)
    }

    /// Direct construction for any monic modulus of positive degree, with
    /// degree bound d(D) - 1; flagged non-primitive if D is not square-free.
    pub fn direct_lenient(d: &Polynomial) -> Result<Self> {
        let genus = genus_of(d)?;
        let deg = d.degree().expect("nonzero");
        if deg == 0 {
            return Err(Error::domain("modulus must be nonconstant"));
        }
        let bound = match genus {
            Some(g) => 2 * g,
            None => deg - 1,
        };
        let coeffs = (0..=bound).map(|n| coefficient_direct(d, n)).collect();
        Ok(LPolynomial {
            q: d.q(),
            coeffs,
            modulus: d.clone(),
            genus,
            primitive: d.is_squarefree()?,
        })
    }

    /// Fast construction for square-free odd-degree moduli: coefficients up
    /// to the genus are direct character sums, the upper half comes from the
    /// exact reflection a_{2g-n} = q^{g-n} a_n. Equality with `direct` is the
    /// functional-equation identity and is verified by the test suite.
    pub fn reflected(d: &Polynomial) -> Result<Self> {
        let genus = genus_of(d)?.ok_or_else(|| {
            Error::domain(format!("modulus {d} must be square-free of odd degree"))
        })?;
        let q = d.q();
        let mut coeffs = vec![0i64; 2 * genus + 1];
        for (n, c) in coeffs.iter_mut().enumerate().take(genus + 1) {
            *c = coefficient_direct(d, n);
        }
        reflect_upper_half(&mut coeffs, q, genus);
        Ok(LPolynomial {
            q,
            coeffs,
            modulus: d.clone(),
            genus: Some(genus),
            primitive: true,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn genus(&self) -> Option<usize> {
        self.genus
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn degree(&self) -> usize {
        let mut d = self.coeffs.len();
        while d > 0 && self.coeffs[d - 1] == 0 {
            d -= 1;
        }
        d.saturating_sub(1)
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c as f64;
        }
        acc
    }

    /// Exact central value (A + B sqrt(q)) / q^g.
    pub fn central_value(&self) -> Result<CentralValue> {
        let g = self.genus.ok_or_else(|| {
            Error::domain("central value requires a square-free odd-degree modulus")
        })?;
        let q = self.q as i128;
        let mut a: i128 = 0;
        let mut b: i128 = 0;
        for (n, &c) in self.coeffs.iter().enumerate() {
            if n % 2 == 0 {
                a += c as i128 * q.pow((g - n / 2) as u32);
            } else {
                b += c as i128 * q.pow((g - (n + 1) / 2) as u32);
            }
        }
        Ok(CentralValue {
            q: self.q,
            genus: g,
            a,
            b,
        })
    }

    pub(crate) fn from_parts(
        q: u64,
        coeffs: Vec<i64>,
        modulus: Polynomial,
        genus: Option<usize>,
        primitive: bool,
    ) -> Self {
        LPolynomial {
            q,
            coeffs,
            modulus,
            genus,
            primitive,
        }
    }
}

pub(crate) fn reflect_upper_half(coeffs: &mut [i64], q: u64, genus: usize) {
    for n in (genus + 1)..=(2 * genus) {
        let mirror = 2 * genus - n;
        coeffs[n] = coeffs[mirror] * (q as i64).pow((n - genus) as u32);
    }
}

/// Exact central value in the ring Z[sqrt(q)], scaled by q^g:
/// value = (A + B sqrt(q)) / q^g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CentralValue {
    pub q: u64,
    #[serde(rename = "g")]
    pub genus: usize,
    #[serde(rename = "A")]
    pub a: i128,
    #[serde(rename = "B")]
    pub b: i128,
}

impl CentralValue {
    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.q as f64).sqrt())
            / (self.q as f64).powi(self.genus as i32)
    }

    /// Exact sign test of A + B sqrt(q) >= 0 using only integer arithmetic
    /// on (A, B, A^2 - q B^2).
    pub fn is_nonnegative(&self) -> bool {
        let q = self.q as i128;
        let disc = self.a * self.a - q * self.b * self.b;
        if self.b >= 0 {
            self.a >= 0 || disc <= 0
        } else {
            self.a >= 0 && disc >= 0
        }
    }

    /// Exact zero test (A = B = 0, since sqrt(q) is irrational).
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// The square L(1/2)^2 as (A', B') over q^{2g}: A' = A^2 + q B^2,
    /// B' = 2AB.
    pub fn square_parts(&self) -> (i128, i128) {
        let q = self.q as i128;
        (self.a * self.a + q * self.b * self.b, 2 * self.a * self.b)
    }
}

/// Batched L-polynomial construction over a family, in canonical order.
///
/// This is the transposed sweep: each monic f of degree n <= g carries a
/// per-residue symbol table built once, and every member D accumulates
/// table[D mod f] into its coefficient tally. Upper coefficients come from
/// the reflection identity. The per-modulus direct sum (`LPolynomial::direct`)
/// is the oracle this path is checked against.
pub fn family_l_polynomials(members: &[Polynomial], q: u64, genus: usize) -> Result<Vec<LPolynomial>> {
    let mut tables: Vec<Vec<(Polynomial, Vec<i8>)>> = Vec::new();
    for n in 1..=genus {
        let mut row = Vec::new();
        for k in 0..q.pow(n as u32) {
            let f = Polynomial::monic_from_index(q, n, k);
            let table = symbol_table(&f)?;
            row.push((f, table));
        }
        tables.push(row);
    }
    let out: Vec<LPolynomial> = members
        .par_chunks(CHUNK)
        .flat_map_iter(|chunk| {
            chunk.iter().map(|d| {
                let mut coeffs = vec![0i64; 2 * genus + 1];
                coeffs[0] = 1;
                for (n, row) in tables.iter().enumerate() {
                    let mut acc = 0i64;
                    for (f, table) in row {
                        acc += table[d.rem_index(f) as usize] as i64;
                    }
                    coeffs[n + 1] = acc;
                }
                reflect_upper_half(&mut coeffs, q, genus);
                LPolynomial {
                    q,
                    coeffs,
                    modulus: d.clone(),
                    genus: Some(genus),
                    primitive: true,
                }
            })
        })
        .collect();
    Ok(out)
}

/// A materialized family with its L-polynomials and exact central values,
/// all in canonical order. Built once and shared read-only by the
/// experiment drivers.
#[derive(Debug, Clone)]
pub struct FamilyData {
    pub spec: FamilySpec,
    pub members: Vec<Polynomial>,
    pub lpolys: Vec<LPolynomial>,
    pub centrals: Vec<CentralValue>,
}

impl FamilyData {
    pub fn load(spec: FamilySpec) -> Result<Self> {
        match spec.kind {
            FamilyKind::Squarefree | FamilyKind::Prime => {}
            FamilyKind::Monic => {
                return Err(Error::domain(
                    "L-value experiments run over the H or P family",
                ))
            }
        }
        let members = spec.members();
        Self::from_members(spec, members)
    }

    /// Builds from an externally supplied member list (e.g. a prime cache);
    /// the list must be in canonical order.
    pub fn from_members(spec: FamilySpec, members: Vec<Polynomial>) -> Result<Self> {
        let lpolys = family_l_polynomials(&members, spec.q, spec.genus())?;
        let centrals = lpolys
            .iter()
            .map(|l| l.central_value())
            .collect::<Result<Vec<_>>>()?;
        Ok(FamilyData {
            spec,
            members,
            lpolys,
            centrals,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Per-degree weighted character sums entering the finite functional
/// equation at power k: T_n = sum_{f in M_n} d_{k,A}(f) chi_D(f).
pub struct AfeTerms {
    q: u64,
    genus: usize,
    k: u32,
    sums: Vec<i64>, // n = 0..=k*g
}

/// Computes the per-degree sums for modulus D and power k >= 1.
pub fn afe_terms(d: &Polynomial, k: u32) -> Result<AfeTerms> {
    if k < 1 {
        return Err(Error::domain("functional equation power k must be >= 1"));
    }
    let genus = genus_of(d)?.ok_or_else(|| {
        Error::domain(format!("modulus {d} must be square-free of odd degree"))
    })?;
    let q = d.q();
    let top = k as usize * genus;
    let mut sums = vec![0i64; top + 1];
    sums[0] = 1;
    for (n, s) in sums.iter_mut().enumerate().skip(1) {
        let mut acc = 0i64;
        for idx in 0..q.pow(n as u32) {
            let f = Polynomial::monic_from_index(q, n, idx);
            let chi = chi_eval(d, &f)? as i64;
            if chi != 0 {
                acc += chi * divisor_function(&f, k)? as i64;
            }
        }
        *s = acc;
    }
    Ok(AfeTerms {
        q,
        genus,
        k,
        sums,
    })
}

/// Both sides of the finite functional equation at a point u on the unit
/// circle: the left side is L(u/sqrt(q))^k from the (reflected) L-polynomial,
/// the right side is the exact two-sum expression.
pub fn afe_eval_at(terms: &AfeTerms, lpoly: &LPolynomial, u: Complex64) -> (Complex64, Complex64) {
    let sqrt_q = (terms.q as f64).sqrt();
    let lhs = lpoly.eval(u / sqrt_q).powu(terms.k);
    let kg = terms.k as usize * terms.genus;
    let mut rhs = Complex64::new(0.0, 0.0);
    for (n, &t) in terms.sums.iter().enumerate() {
        rhs += t as f64 * u.powu(n as u32) / sqrt_q.powi(n as i32);
    }
    let mut tail = Complex64::new(0.0, 0.0);
    for (n, &t) in terms.sums.iter().enumerate().take(kg) {
        tail += t as f64 * u.powi(-(n as i32)) / sqrt_q.powi(n as i32);
    }
    rhs += u.powu(2 * kg as u32) * tail;
    (lhs, rhs)
}

/// Convenience wrapper: evaluates both sides for a single (D, u, k).
pub fn afe_eval(d: &Polynomial, u: Complex64, k: u32) -> Result<(Complex64, Complex64)> {
    if (u.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::domain("functional equation point u must satisfy |u| = 1"));
    }
    let terms = afe_terms(d, k)?;
    let lpoly = LPolynomial::reflected(d)?;
    Ok(afe_eval_at(&terms, &lpoly, u))
}

/// Explicit part of the short-Dirichlet-polynomial upper bound for
/// log |L(1/2, chi_D)| at cutoff x = q^h:
///
///   sum_{|P| <= x} chi_D(P) |P|^{-1/2 - 1/log x} log(x/|P|)/log x
///     + (1/2) log log x + log X / log x
///
/// The O(1) term is not included; callers compare deficits, not absolute
/// bounds.
pub fn log_l_upper_bound(d: &Polynomial, h: usize, tables: &PrimeTables) -> Result<f64> {
    let genus = genus_of(d)?.ok_or_else(|| {
        Error::domain(format!("modulus {d} must be square-free of odd degree"))
    })?;
    if h < 1 || h > 2 * genus {
        return Err(Error::domain(format!(
            "cutoff exponent h = {h} outside 1..={}",
            2 * genus
        )));
    }
    let q = d.q();
    let ln_q = (q as f64).ln();
    let log_x = h as f64 * ln_q;
    let mut sum = 0.0;
    for deg in 1..=h {
        let weight = (h - deg) as f64 / h as f64;
        if weight == 0.0 {
            continue;
        }
        let pw = (-(deg as f64) * ln_q * (0.5 + 1.0 / log_x)).exp();
        for p in tables.of_degree(deg) {
            let chi = chi_eval(d, p)? as f64;
            sum += chi * pw * weight;
        }
    }
    let big_x_over_x = (2 * genus + 1) as f64 / h as f64;
    Ok(sum + 0.5 * log_x.ln() + big_x_over_x)
}

/// General form of the bound, including prime powers j with d(P^j) <= h and
/// a shift z with Re(z) >= 0:
///
///   2g/h + (1/h) Re sum_{j >= 1, j d(P) <= h}
///       chi_D(P)^j (h - j d(P)) / j * |P|^{-j (1/2 + z + 1/(h log q))}
pub fn log_l_upper_bound_general(
    d: &Polynomial,
    h: usize,
    z: Complex64,
    tables: &PrimeTables,
) -> Result<f64> {
    let genus = genus_of(d)?.ok_or_else(|| {
        Error::domain(format!("modulus {d} must be square-free of odd degree"))
    })?;
    let m = 2 * genus;
    if h < 1 || h > m {
        return Err(Error::domain(format!("cutoff exponent h = {h} outside 1..={m}")));
    }
    if z.re < 0.0 {
        return Err(Error::domain("shift z must have Re(z) >= 0"));
    }
    let q = d.q();
    let ln_q = (q as f64).ln();
    let shift = Complex64::new(0.5 + 1.0 / (h as f64 * ln_q), 0.0) + z;
    let mut sum = Complex64::new(0.0, 0.0);
    for deg in 1..=h {
        for p in tables.of_degree(deg) {
            let chi = chi_eval(d, p)?;
            if chi == 0 {
                continue;
            }
            let mut j = 1usize;
            while j * deg <= h {
                let chi_j = if j % 2 == 0 { 1.0 } else { chi as f64 };
                let weight = (h - j * deg) as f64 / j as f64;
                let decay = (-(j as f64) * (deg as f64) * ln_q * shift).exp();
                sum += chi_j * weight * decay;
                j += 1;
            }
        }
    }
    Ok(m as f64 / h as f64 + sum.re / h as f64)
}

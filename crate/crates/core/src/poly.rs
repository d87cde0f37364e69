//! Dense polynomials over F_q[T].
//!
//! Coefficients are stored in ascending degree with no trailing zeros; the
//! zero polynomial has an empty coefficient vector and its degree is the
//! `None` sentinel (never a number fed to arithmetic). The norm of a nonzero
//! f is |f| = q^{deg f}, and |0| = 0.
//!
//! Text form shared by every module and the CLI: comma-separated ascending
//! coefficients in decimal, e.g. `0,1,0,1` for T^3 + T over F_5. A
//! human-readable form like `T^3+T` or `2T^2 + 3` is also accepted on input.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    q: u64,
    coeffs: Vec<u64>, // ascending degree, reduced mod q, no trailing zeros
}

impl Polynomial {
    pub fn zero(q: u64) -> Self {
        Polynomial { q, coeffs: Vec::new() }
    }

    pub fn one(q: u64) -> Self {
        Self::constant(q, 1)
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::from_coeffs(q, vec![c])
    }

    /// T^n with unit coefficient.
    pub fn monomial(q: u64, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        Polynomial { q, coeffs }
    }

    /// Builds a polynomial from raw coefficients (any u64), reducing mod q
    /// and trimming trailing zeros.
    pub fn from_coeffs(q: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { q, coeffs }
    }

    /// The monic polynomial of degree `n` whose canonical index is `k`,
    /// i.e. the non-leading coefficients are the base-q digits of `k`
    /// (constant coefficient least significant).
    pub fn monic_from_index(q: u64, n: usize, mut k: u64) -> Self {
        let mut coeffs = vec![0u64; n + 1];
        for c in coeffs.iter_mut().take(n) {
            *c = k % q;
            k /= q;
        }
        coeffs[n] = 1;
        Polynomial { q, coeffs }
    }

    /// Canonical index of a monic polynomial (inverse of `monic_from_index`).
    pub fn index_of_monic(&self) -> u64 {
        debug_assert!(self.is_monic());
        let n = self.coeffs.len() - 1;
        let mut idx = 0u64;
        for j in (0..n).rev() {
            idx = idx * self.q + self.coeffs[j];
        }
        idx
    }

    /// The residue of degree `< n` whose canonical index is `k`.
    pub fn residue_from_index(q: u64, n: usize, mut k: u64) -> Self {
        let mut coeffs = vec![0u64; n];
        for c in coeffs.iter_mut() {
            *c = k % q;
            k /= q;
        }
        Self::from_coeffs(q, coeffs)
    }

    /// Canonical index of a residue: sum of c_j q^j.
    pub fn residue_index(&self) -> u64 {
        let mut idx = 0u64;
        for j in (0..self.coeffs.len()).rev() {
            idx = idx * self.q + self.coeffs[j];
        }
        idx
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` is the d(0) sentinel.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Norm |f| = q^{deg f}, with |0| = 0.
    pub fn norm(&self) -> u64 {
        match self.degree() {
            None => 0,
            Some(d) => self.q.pow(d as u32),
        }
    }

    /// Number of stored coefficients (degree + 1, or 0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs.get(n).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(self.q, other.q, "mixed base fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (self.coeff(j) + other.coeff(j)) % self.q;
        }
        Self::from_coeffs(self.q, out)
    }

    pub fn neg(&self) -> Self {
        let out = self
            .coeffs
            .iter()
            .map(|&c| if c == 0 { 0 } else { self.q - c })
            .collect();
        Polynomial { q: self.q, coeffs: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.q;
        let out = self
            .coeffs
            .iter()
            .map(|&a| ((a as u128 * c as u128) % self.q as u128) as u64)
            .collect();
        Self::from_coeffs(self.q, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.q);
        }
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
            }
        }
        let out = acc.into_iter().map(|v| (v % self.q as u128) as u64).collect();
        Polynomial { q: self.q, coeffs: out }
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// self = quotient * divisor + remainder and deg r < deg divisor.
    /// Division by the zero polynomial is a domain error.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.assert_same_field(divisor);
        let d = divisor
            .degree()
            .ok_or_else(|| Error::domain("division by the zero polynomial"))?;
        if self.degree().map(|n| n < d).unwrap_or(true) {
            return Ok((Self::zero(self.q), self.clone()));
        }
        let q = self.q;
        let lc_inv = inv_mod(divisor.leading_coeff(), q);
        let n = self.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; n - d + 1];
        for k in (d..=n).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let f = ((c as u128 * lc_inv as u128) % q as u128) as u64;
            quo[k - d] = f;
            for j in 0..=d {
                let sub = (f as u128 * divisor.coeffs[j] as u128 % q as u128) as u64;
                rem[k - d + j] = (rem[k - d + j] + q - sub) % q;
            }
        }
        rem.truncate(d);
        Ok((Self::from_coeffs(q, quo), Self::from_coeffs(q, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Monic-normalized gcd. gcd(f, 0) is the monic normalization of f.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Half extended gcd: returns (g, s) with s*self ≡ g (mod other),
    /// g = gcd(self, other) up to a constant.
    pub fn half_extended_gcd(&self, other: &Self) -> (Self, Self) {
        let q = self.q;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(q), Self::zero(q));
        while !r1.is_zero() {
            let (quo, rem) = r0.divmod(&r1).expect("r1 is nonzero");
            let s_next = s0.sub(&quo.mul(&s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s_next;
        }
        (r0, s0)
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading_coeff(), self.q))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.q);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| ((j as u128 % self.q as u128) * c as u128 % self.q as u128) as u64)
            .collect();
        Self::from_coeffs(self.q, out)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let q = self.q;
        let x = x % q;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = ((acc as u128 * x as u128 + c as u128) % q as u128) as u64;
        }
        acc
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self> {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Result<Self> {
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(self.q).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            base = base.mul_mod(&base, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square-freeness via gcd(f, f'): over F_q[T] an irreducible square
    /// divides f exactly when the gcd is nonconstant (this also covers the
    /// f' = 0 case, where f is a p-th power). Zero input is a domain error.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::domain("square-freeness of the zero polynomial"));
        }
        if self.degree() == Some(0) {
            return Ok(true);
        }
        let g = self.gcd(&self.derivative());
        Ok(g.degree() == Some(0))
    }

    /// Irreducibility over F_q (Rabin's test): f monic of degree n is
    /// irreducible iff T^{q^n} ≡ T (mod f) and gcd(T^{q^{n/r}} - T, f) = 1
    /// for every prime r | n. Non-monic or constant input is a domain error.
    pub fn is_irreducible(&self) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::domain("irreducibility test requires a monic input"));
        }
        let n = self.degree().expect("monic input is nonzero");
        if n == 0 {
            return Err(Error::domain("irreducibility test requires degree >= 1"));
        }
        if n == 1 {
            return Ok(true);
        }
        let q = self.q;
        let x = Self::monomial(q, 1);
        for r in distinct_prime_factors(n as u64) {
            let e = (q as u128).pow((n as u64 / r) as u32);
            let xe = x.pow_mod(e, self)?;
            let g = xe.sub(&x).gcd(self);
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        let e = (q as u128).pow(n as u32);
        let xe = x.pow_mod(e, self)?;
        Ok(xe == x)
    }

    /// Remainder of `self` modulo a monic divisor, returned as a canonical
    /// residue index. Allocation-free; used by the batched character sweeps.
    pub fn rem_index(&self, divisor: &Self) -> u64 {
        debug_assert!(divisor.is_monic());
        let d = divisor.degree().expect("monic divisor is nonzero");
        let q = self.q;
        let mut buf = [0u64; 32];
        let len = self.coeffs.len();
        assert!(len <= 32, "desk-scale degrees only");
        buf[..len].copy_from_slice(&self.coeffs);
        if len > d {
            for k in (d..len).rev() {
                let c = buf[k];
                if c == 0 {
                    continue;
                }
                buf[k] = 0;
                for j in 0..d {
                    let sub = (c as u128 * divisor.coeffs[j] as u128 % q as u128) as u64;
                    buf[k - d + j] = (buf[k - d + j] + q - sub) % q;
                }
            }
        }
        let mut idx = 0u64;
        for j in (0..d).rev() {
            idx = idx * q + buf[j];
        }
        idx
    }

    /// Human-readable rendering like `T^3 + 2T + 4`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (j, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match j {
                0 => format!("{c}"),
                1 if c == 1 => "T".to_string(),
                1 => format!("{c}T"),
                _ if c == 1 => format!("T^{j}"),
                _ => format!("{c}T^{j}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }

    /// Parses either the canonical comma-separated coefficient form or a
    /// human-readable form like `T^3+T`.
    pub fn parse(q: u64, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty polynomial text".into()));
        }
        if t.contains('T') || t.contains('t') {
            parse_human(q, t)
        } else {
            let mut coeffs = Vec::new();
            for piece in t.split(',') {
                let c: i64 = piece
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {piece:?}")))?;
                coeffs.push(c.rem_euclid(q as i64) as u64);
            }
            Ok(Self::from_coeffs(q, coeffs))
        }
    }
}

fn parse_human(q: u64, text: &str) -> Result<Polynomial> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<u64> = Vec::new();
    let mut add_term = |coeff: i64, deg: usize| {
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        let c = coeff.rem_euclid(q as i64) as u64;
        coeffs[deg] = (coeffs[deg] + c) % q;
    };
    // split on +/- while keeping the sign
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(cur.clone());
            cur.clear();
        }
        if ch == '+' && i == 0 {
            continue;
        }
        if !(ch == '+' && cur.is_empty() && i > 0) {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1i64, rest.to_string()),
            None => (1i64, term.clone()),
        };
        let body = body.replace('*', "");
        let lower = body.to_ascii_lowercase();
        if let Some(pos) = lower.find('t') {
            let coeff_str = &body[..pos];
            let coeff: i64 = if coeff_str.is_empty() {
                1
            } else {
                coeff_str
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
            };
            let rest = &lower[pos + 1..];
            let deg: usize = if rest.is_empty() {
                1
            } else if let Some(exp) = rest.strip_prefix('^') {
                exp.parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
            } else {
                return Err(Error::Parse(format!("unrecognized term {term:?}")));
            };
            add_term(sign * coeff, deg);
        } else {
            let coeff: i64 = body
                .parse()
                .map_err(|_| Error::Parse(format!("bad constant term {term:?}")))?;
            add_term(sign * coeff, 0);
        }
    }
    Ok(Polynomial::from_coeffs(q, coeffs))
}

/// Serializes as the canonical comma-separated text form (the shared format
/// does not carry q; containers record q alongside).
impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// Canonical order: by degree, then by coefficients from the top down
/// (equivalently, monic polynomials of equal degree sort by canonical index).
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.degree(), other.degree()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| {
                for j in (0..self.coeffs.len()).rev() {
                    let c = self.coeffs[j].cmp(&other.coeffs[j]);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // Fermat; q prime, a != 0 mod q.
    debug_assert!(a % q != 0);
    let mut e = q - 2;
    let mut base = a % q;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % q as u128) as u64;
        }
        base = ((base as u128 * base as u128) % q as u128) as u64;
        e >>= 1;
    }
    acc
}

pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64, s: &str) -> Polynomial {
        Polynomial::parse(q, s).unwrap()
    }

    #[test]
    fn mul_example() {
        // (T+2)(T+3) = T^2 + 1 over F_5
        let a = p(5, "2,1");
        let b = p(5, "3,1");
        assert_eq!(a.mul(&b), p(5, "1,0,1"));
    }

    #[test]
    fn gcd_examples() {
        let f = p(5, "1,0,1"); // T^2+1 = (T+2)(T+3)
        let g = p(5, "2,1"); // T+2
        assert_eq!(f.gcd(&g), g);
        // gcd(f, 0) is the monic normalization of f
        let h = p(5, "0,2"); // 2T
        assert_eq!(h.gcd(&Polynomial::zero(5)), p(5, "0,1"));
    }

    #[test]
    fn divmod_roundtrip() {
        let f = p(5, "1,2,3,4,1");
        let g = p(5, "2,0,1");
        let (quo, rem) = f.divmod(&g).unwrap();
        assert_eq!(quo.mul(&g).add(&rem), f);
        assert!(rem.degree().map(|d| d < 2).unwrap_or(true));
        assert!(f.divmod(&Polynomial::zero(5)).is_err());
    }

    #[test]
    fn squarefree_examples() {
        assert!(!p(5, "0,0,1").is_squarefree().unwrap()); // T^2
        assert!(p(5, "1,0,1").is_squarefree().unwrap()); // (T+2)(T+3)
        assert!(p(5, "0,1,0,1").is_squarefree().unwrap()); // T(T+2)(T+3)
        assert!(Polynomial::zero(5).is_squarefree().is_err());
        // p-th power has zero derivative and must be caught
        let t5 = Polynomial::monomial(5, 5); // T^5 = (T)^5
        assert!(!t5.is_squarefree().unwrap());
    }

    #[test]
    fn irreducible_examples() {
        assert!(p(5, "3,1").is_irreducible().unwrap()); // linear
        assert!(!p(5, "1,0,1").is_irreducible().unwrap()); // splits over F_5
        assert!(p(3, "1,0,1").is_irreducible().unwrap()); // no root in F_3
        assert!(p(5, "0,2").is_irreducible().is_err()); // non-monic
        assert!(Polynomial::one(5).is_irreducible().is_err()); // constant
    }

    /// Trial-division oracle: f monic of degree >= 1 is irreducible iff no
    /// monic polynomial of degree in [1, deg f / 2] divides it.
    fn is_irreducible_trial(f: &Polynomial) -> bool {
        let n = f.degree().unwrap();
        if n == 1 {
            return true;
        }
        let q = f.q();
        for d in 1..=(n / 2) {
            for k in 0..q.pow(d as u32) {
                let g = Polynomial::monic_from_index(q, d, k);
                if f.rem(&g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for q in [3u64, 5] {
            for n in 1..=4usize {
                for k in 0..q.pow(n as u32) {
                    let f = Polynomial::monic_from_index(q, n, k);
                    assert_eq!(
                        f.is_irreducible().unwrap(),
                        is_irreducible_trial(&f),
                        "q={q} f={f}"
                    );
                }
            }
        }
    }

    #[test]
    fn squarefree_matches_factorization_oracle() {
        // brute force: f squarefree iff no monic square of positive degree divides it
        for q in [3u64, 5] {
            for n in 1..=4usize {
                for k in 0..q.pow(n as u32) {
                    let f = Polynomial::monic_from_index(q, n, k);
                    let mut divisible_by_square = false;
                    'outer: for d in 1..=(n / 2) {
                        for j in 0..q.pow(d as u32) {
                            let g = Polynomial::monic_from_index(q, d, j);
                            let g2 = g.mul(&g);
                            if f.rem(&g2).unwrap().is_zero() {
                                divisible_by_square = true;
                                break 'outer;
                            }
                        }
                    }
                    assert_eq!(f.is_squarefree().unwrap(), !divisible_by_square, "q={q} f={f}");
                }
            }
        }
    }

    #[test]
    fn norm_multiplicative() {
        let f = p(5, "1,1");
        let g = p(5, "2,0,1");
        assert_eq!(f.mul(&g).norm(), f.norm() * g.norm());
        assert_eq!(Polynomial::zero(5).norm(), 0);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p(5, "0,1,0,1").to_string(), "0,1,0,1");
        assert_eq!(p(5, "T^3+T"), p(5, "0,1,0,1"));
        assert_eq!(p(5, "T^2 - 1"), p(5, "4,0,1"));
        assert_eq!(p(5, "2T^2+3"), p(5, "3,0,2"));
        assert_eq!(p(5, "1"), Polynomial::one(5));
        assert_eq!(p(5, "T^3+T").pretty(), "T^3 + T");
        assert_eq!(p(13, "7,9").pretty(), "9T + 7");
    }

    #[test]
    fn rem_index_matches_divmod() {
        let f = p(5, "1,2,3,4,0,2,1");
        for k in 0..125 {
            let g = Polynomial::monic_from_index(5, 3, k);
            let r = f.rem(&g).unwrap();
            assert_eq!(f.rem_index(&g), r.residue_index());
        }
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![p(5, "0,0,1"), p(5, "1,1"), p(5, "2"), p(5, "1,0,1")];
        v.sort();
        assert_eq!(
            v,
            vec![p(5, "2"), p(5, "1,1"), p(5, "0,0,1"), p(5, "1,0,1")]
        );
    }
}

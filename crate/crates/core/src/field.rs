//! Arithmetic in the prime field F_q and its extensions F_{q^i}.
//!
//! Base-field elements are residues stored as `u64` in `[0, q)`. Extension
//! elements are reduced polynomials of degree `< i` over the base field,
//! handled through an [`ExtensionField`] context that carries the (monic
//! irreducible) modulus. The default configuration requires `q ≡ 1 (mod 4)`;
//! other odd primes are available through [`PrimeField::new_experimental`].

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Deterministic primality test for `u64` by trial division.
///
/// Desk-scale moduli are tiny, so no fancier test is warranted.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|s| s <= n).unwrap_or(false) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field F_q for an odd prime q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Standard constructor: q must be an odd prime with q ≡ 1 (mod 4).
    pub fn new(q: u64) -> Result<Self> {
        let f = Self::new_experimental(q)?;
        if q % 4 != 1 {
            return Err(Error::domain(format!(
                "q = {q} has q ≡ 3 (mod 4); pass the experimental flag to allow it"
            )));
        }
        Ok(f)
    }

    /// Experimental constructor: any odd prime q.
    pub fn new_experimental(q: u64) -> Result<Self> {
        if q == 2 {
            return Err(Error::domain("characteristic 2 is not supported"));
        }
        if !is_prime_u64(q) {
            return Err(Error::domain(format!("q = {q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn reduce(&self, a: u64) -> u64 {
        a % self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (self.reduce(a) + self.reduce(b)) % self.q
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (self.reduce(a) + self.q - self.reduce(b)) % self.q
    }

    pub fn neg(&self, a: u64) -> u64 {
        let a = self.reduce(a);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((self.reduce(a) as u128 * self.reduce(b) as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = self.reduce(a);
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; inversion of zero is a domain error.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = self.reduce(a);
        if a == 0 {
            return Err(Error::domain("inversion of zero in F_q"));
        }
        // Fermat: a^{q-2}.
        Ok(self.pow(a, self.q - 2))
    }

    /// Quadratic character of F_q: 0 on zero, +1 on nonzero squares, -1 otherwise.
    pub fn quad_char(&self, a: u64) -> i8 {
        let a = self.reduce(a);
        if a == 0 {
            return 0;
        }
        let e = self.pow(a, (self.q - 1) / 2);
        if e == 1 {
            1
        } else {
            -1
        }
    }
}

/// The field F_{q^i}, realized as F_q[x] modulo a monic irreducible polynomial
/// of degree i. The modulus is found by a deterministic scan of monic
/// polynomials in canonical order; the first irreducible wins, so the same
/// (q, i) always yields the same field.
#[derive(Debug, Clone)]
pub struct ExtensionField {
    base: PrimeField,
    degree: usize,
    modulus: Polynomial,
}

impl ExtensionField {
    /// Builds F_{q^i} with the canonical modulus. For i = 1 the modulus is T
    /// and the field coincides with F_q (elements are constants).
    pub fn build(base: PrimeField, degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let q = base.q();
        let count = (q as u128).pow(degree as u32);
        for k in 0..count {
            let m = Polynomial::monic_from_index(q, degree, k as u64);
            if m.is_irreducible()? {
                return Ok(ExtensionField {
                    base,
                    degree,
                    modulus: m,
                });
            }
        }
        unreachable!("irreducible polynomials exist in every degree");
    }

    /// Builds the field with an explicitly supplied monic irreducible modulus.
    pub fn with_modulus(base: PrimeField, modulus: Polynomial) -> Result<Self> {
        if modulus.q() != base.q() || !modulus.is_monic() {
            return Err(Error::domain("extension modulus must be monic over the base field"));
        }
        if !modulus.is_irreducible()? {
            return Err(Error::domain(format!(
                "extension modulus {modulus} is not irreducible"
            )));
        }
        let degree = modulus.degree().expect("monic modulus is nonzero");
        Ok(ExtensionField {
            base,
            degree,
            modulus,
        })
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn cardinality(&self) -> u64 {
        self.base.q().pow(self.degree as u32)
    }

    /// The element with the given canonical index (base-q digits are the
    /// coordinates, constant coordinate least significant).
    pub fn element_from_index(&self, index: u64) -> Polynomial {
        Polynomial::residue_from_index(self.base.q(), self.degree, index)
    }

    /// Iterates every element once, in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = Polynomial> + '_ {
        (0..self.cardinality()).map(move |k| self.element_from_index(k))
    }

    fn reduce(&self, a: &Polynomial) -> Polynomial {
        a.rem(&self.modulus).expect("modulus is nonzero")
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.reduce(&a.add(b))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.reduce(&a.mul(b))
    }

    pub fn pow(&self, a: &Polynomial, e: u128) -> Polynomial {
        a.pow_mod(e, &self.modulus).expect("modulus is nonzero")
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: &Polynomial) -> Result<Polynomial> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Err(Error::domain("inversion of zero in an extension field"));
        }
        let (g, s) = a.half_extended_gcd(&self.modulus);
        debug_assert_eq!(g.degree(), Some(0), "modulus is irreducible");
        let c_inv = self.base.inv(g.coeff(0))?;
        Ok(self.reduce(&s.scale(c_inv)))
    }

    /// Evaluates a base-field polynomial at an element of this field.
    pub fn eval_poly(&self, f: &Polynomial, x: &Polynomial) -> Polynomial {
        let q = self.base.q();
        let mut acc = Polynomial::zero(q);
        for n in (0..f.len()).rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &Polynomial::constant(q, f.coeff(n)));
        }
        acc
    }

    /// Quadratic character of F_{q^i}: computed as a^{(q^i - 1)/2}.
    ///
    /// Returns 0 iff a ≡ 0, +1 iff a is a nonzero square, -1 otherwise.
    pub fn quad_char(&self, a: &Polynomial) -> i8 {
        let a = self.reduce(a);
        if a.is_zero() {
            return 0;
        }
        let e = (self.cardinality() as u128 - 1) / 2;
        let p = self.pow(&a, e);
        if p.degree() == Some(0) && p.coeff(0) == 1 {
            1
        } else {
            -1
        }
    }
}

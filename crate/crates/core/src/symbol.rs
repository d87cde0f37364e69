//! Quadratic residue symbols (f/h) in F_q[T] and the characters chi_D.
//!
//! For prime bottom P the symbol is the quadratic character of the residue
//! field F_{q^{d(P)}} applied to f mod P; for composite monic bottoms it is
//! extended multiplicatively over the factorization (Jacobi style), so the
//! value is 0 exactly when gcd(top, bottom) is nonconstant.
//!
//! Two independent implementations are provided and cross-checked:
//! - [`residue_symbol`]: gcd-like reduction driven by quadratic reciprocity,
//!   with the sign exponent d(C)d(D)(q-1)/2 tracked explicitly (it vanishes
//!   for q = 1 mod 4);
//! - [`residue_symbol_euler`]: factors the bottom and applies the Euler
//!   criterion a^{(q^d - 1)/2} in each residue field.

use crate::divisor::factor;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

fn quad_char_base(q: u64, a: u64) -> i8 {
    let a = a % q;
    if a == 0 {
        return 0;
    }
    let mut e = (q - 1) / 2;
    let mut base = a;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % q as u128) as u64;
        }
        base = ((base as u128 * base as u128) % q as u128) as u64;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

fn check_bottom(bottom: &Polynomial) -> Result<usize> {
    if !bottom.is_monic() {
        return Err(Error::domain("symbol bottom must be monic"));
    }
    bottom
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::domain("symbol bottom must be nonconstant"))
}

/// Fast residue symbol (top/bottom) via reciprocity and reduction.
pub fn residue_symbol(top: &Polynomial, bottom: &Polynomial) -> Result<i8> {
    check_bottom(bottom)?;
    let q = top.q();
    let flip_possible = (q - 1) / 2 % 2 == 1; // only for q = 3 (mod 4)
    let mut num = top.clone();
    let mut den = bottom.clone();
    let mut acc: i8 = 1;
    loop {
        num = num.rem(&den).expect("den is nonconstant");
        if num.is_zero() {
            return Ok(0);
        }
        let den_deg = den.degree().expect("den is nonconstant");
        let lc = num.leading_coeff();
        if lc != 1 {
            // (c·g / den) = (c/den)(g/den) with (c/den) = eta(c)^{deg den}
            if den_deg % 2 == 1 {
                acc *= quad_char_base(q, lc);
            }
            num = num.make_monic();
        }
        let num_deg = num.degree().expect("num is nonzero");
        if num_deg == 0 {
            return Ok(acc);
        }
        // reciprocity: (num/den) = (den/num) * (-1)^{d(num) d(den) (q-1)/2}
        if flip_possible && num_deg % 2 == 1 && den_deg % 2 == 1 {
            acc = -acc;
        }
        std::mem::swap(&mut num, &mut den);
    }
}

/// Euler-criterion symbol for prime bottom: (f mod P)^{(q^d - 1)/2} in the
/// residue field, computed as a polynomial power mod P.
fn euler_prime(top: &Polynomial, p: &Polynomial) -> Result<i8> {
    let d = p.degree().expect("prime is nonconstant");
    let q = top.q();
    let r = top.rem(p)?;
    if r.is_zero() {
        return Ok(0);
    }
    let e = ((q as u128).pow(d as u32) - 1) / 2;
    let value = r.pow_mod(e, p)?;
    if value.degree() == Some(0) && value.coeff(0) == 1 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Oracle residue symbol: factors the bottom and multiplies Euler symbols.
pub fn residue_symbol_euler(top: &Polynomial, bottom: &Polynomial) -> Result<i8> {
    check_bottom(bottom)?;
    let mut acc: i8 = 1;
    for (p, e) in factor(bottom)? {
        let s = euler_prime(top, &p)?;
        if s == 0 {
            return Ok(0);
        }
        if e % 2 == 1 {
            acc *= s;
        }
    }
    Ok(acc)
}

/// chi_D(f) = (D/f) for monic f; chi_D(1) = +1 (empty product).
pub fn chi_eval(d: &Polynomial, f: &Polynomial) -> Result<i8> {
    if !f.is_monic() {
        return Err(Error::domain("chi_D is defined on monic arguments"));
    }
    if f.degree() == Some(0) {
        return Ok(1);
    }
    residue_symbol(d, f)
}

/// Symbol table for a fixed monic bottom f: entry r is (residue_r / f) for
/// the residue of canonical index r. Used by the batched family sweeps,
/// where (D/f) is looked up as table[D mod f].
pub fn symbol_table(f: &Polynomial) -> Result<Vec<i8>> {
    let d = check_bottom(f)?;
    let q = f.q();
    let size = (q as u128).pow(d as u32) as u64;
    let mut table = vec![0i8; size as usize];
    for (r, entry) in table.iter_mut().enumerate() {
        let res = Polynomial::residue_from_index(q, d, r as u64);
        *entry = residue_symbol(&res, f)?;
    }
    Ok(table)
}

//! Factorization by trial division and the divisor functions d_{k,A}.
//!
//! Trial division over the monic polynomials of degree up to deg(f)/2 is
//! entirely adequate at desk scale and keeps the factorization path
//! independent of the irreducibility test used elsewhere.

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Factors a monic nonzero polynomial into monic irreducibles with
/// multiplicities, sorted in canonical order.
pub fn factor(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::domain("factorization requires a monic nonzero input"));
    }
    let q = f.q();
    let mut rest = f.clone();
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    let mut d = 1usize;
    while rest.degree().map(|n| n >= 2 * d).unwrap_or(false) {
        for k in 0..q.pow(d as u32) {
            let p = Polynomial::monic_from_index(q, d, k);
            if rest.rem(&p)?.is_zero() {
                let mut e = 0u32;
                loop {
                    let (quo, rem) = rest.divmod(&p)?;
                    if !rem.is_zero() {
                        break;
                    }
                    rest = quo;
                    e += 1;
                }
                out.push((p, e));
                if rest.degree().map(|n| n < 2 * d).unwrap_or(true) {
                    break;
                }
            }
        }
        d += 1;
    }
    if rest.degree().map(|n| n >= 1).unwrap_or(false) {
        out.push((rest, 1));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// d_{k,A}(f): the number of ordered k-tuples of monic polynomials whose
/// product is f. Multiplicative, with value binom(a+k-1, k-1) on a prime
/// power P^a. Requires monic f and k >= 1.
pub fn divisor_function(f: &Polynomial, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::domain("divisor function requires k >= 1"));
    }
    if f.is_zero() || !f.is_monic() {
        return Err(Error::domain("divisor function requires a monic nonzero input"));
    }
    let mut acc: u64 = 1;
    for (_, e) in factor(f)? {
        acc *= binomial(e as u64 + k as u64 - 1, k as u64 - 1);
    }
    Ok(acc)
}

/// Writes a monic l uniquely as l = l1 * l2^2 with l1 monic square-free;
/// returns (l1, l2).
pub fn squarefree_decomposition(l: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    let q = l.q();
    let mut l1 = Polynomial::one(q);
    let mut l2 = Polynomial::one(q);
    for (p, e) in factor(l)? {
        if e % 2 == 1 {
            l1 = l1.mul(&p);
        }
        for _ in 0..(e / 2) {
            l2 = l2.mul(&p);
        }
    }
    Ok((l1, l2))
}

/// True iff f is a perfect square in F_q[T] (monic f).
pub fn is_perfect_square(f: &Polynomial) -> Result<bool> {
    if f.degree() == Some(0) {
        return Ok(true); // monic constant is 1
    }
    let (l1, _) = squarefree_decomposition(f)?;
    Ok(l1.degree() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64, s: &str) -> Polynomial {
        Polynomial::parse(q, s).unwrap()
    }

    #[test]
    fn factor_examples() {
        let f = p(5, "0,1,0,1"); // T(T+2)(T+3)
        let fac = factor(&f).unwrap();
        assert_eq!(fac.len(), 3);
        assert!(fac.iter().all(|(_, e)| *e == 1));
        let sq = p(5, "0,0,1"); // T^2
        assert_eq!(factor(&sq).unwrap(), vec![(p(5, "0,1"), 2)]);
    }

    #[test]
    fn divisor_function_examples() {
        assert_eq!(divisor_function(&p(5, "0,0,1"), 2).unwrap(), 3); // d(T^2) = 3
        assert_eq!(divisor_function(&p(5, "0,1"), 3).unwrap(), 3); // T in one of 3 slots
        assert_eq!(divisor_function(&p(5, "0,1,0,1"), 2).unwrap(), 8); // 2^3
        assert_eq!(divisor_function(&Polynomial::one(5), 4).unwrap(), 1);
        assert!(divisor_function(&p(5, "0,1"), 0).is_err());
        assert!(divisor_function(&p(5, "0,2"), 2).is_err());
    }

    #[test]
    fn divisor_function_counts_tuples() {
        // brute force d_2 on a few inputs: count ordered pairs (a, b) with ab = f
        for k in 0..25u64 {
            let f = Polynomial::monic_from_index(5, 2, k);
            let mut count = 0;
            for da in 0..=2usize {
                for ka in 0..5u64.pow(da as u32) {
                    let a = Polynomial::monic_from_index(5, da, ka);
                    let (b, r) = f.divmod(&a).unwrap();
                    if r.is_zero() && b.is_monic() {
                        count += 1;
                    }
                }
            }
            assert_eq!(divisor_function(&f, 2).unwrap(), count, "f = {f}");
        }
    }

    #[test]
    fn decomposition_examples() {
        let l = p(5, "0,0,0,1"); // T^3 = T * (T)^2
        let (l1, l2) = squarefree_decomposition(&l).unwrap();
        assert_eq!(l1, p(5, "0,1"));
        assert_eq!(l2, p(5, "0,1"));
        assert_eq!(l1.mul(&l2.mul(&l2)), l);
        assert!(is_perfect_square(&p(5, "0,0,1")).unwrap());
        assert!(!is_perfect_square(&p(5, "0,1,0,1")).unwrap());
        assert!(is_perfect_square(&Polynomial::one(5)).unwrap());
    }
}

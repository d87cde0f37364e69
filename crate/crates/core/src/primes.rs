//! Prime polynomial counting and prime sums.
//!
//! pi_A(n), the number of monic irreducibles of degree n, is computed by the
//! exact divisor sum (1/n) * sum_{d | n} mu(d) q^{n/d}; enumeration is used
//! only as a test oracle. The Mertens-type sums over |P| <= x need only these
//! counts, never an actual prime list.

use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::poly::Polynomial;

/// Moebius function of a small positive integer.
pub fn moebius(n: u64) -> i64 {
    debug_assert!(n >= 1);
    let mut m = n;
    let mut count = 0;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            count += 1;
        }
        d += 1;
    }
    if m > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// pi_A(n) = (1/n) sum_{d | n} mu(d) q^{n/d}, exactly.
pub fn prime_count(q: u64, n: usize) -> u64 {
    assert!(n >= 1);
    let n = n as u64;
    let mut acc: i128 = 0;
    for d in divisors(n) {
        let mu = moebius(d);
        if mu == 0 {
            continue;
        }
        acc += mu as i128 * (q as i128).pow((n / d) as u32);
    }
    debug_assert!(acc > 0 && acc % n as i128 == 0);
    (acc / n as i128) as u64
}

/// Mertens-type sums over primes of norm at most x = q^m, computed exactly
/// from pi_A:
///   sum_log   = sum_{|P| <= x} log|P| / |P|
///   sum_recip = sum_{|P| <= x} 1 / |P|
pub fn mertens_sums(q: u64, m: usize) -> Result<(f64, f64)> {
    if m < 1 {
        return Err(Error::domain("mertens sums need x = q^m with m >= 1"));
    }
    let log_q = (q as f64).ln();
    let mut sum_log = 0.0;
    let mut sum_recip = 0.0;
    for n in 1..=m {
        let pi = prime_count(q, n) as f64;
        let norm = (q as f64).powi(n as i32);
        sum_log += pi * (n as f64) * log_q / norm;
        sum_recip += pi / norm;
    }
    Ok((sum_log, sum_recip))
}

/// Checks the exact identity q^n = sum_{d | n} d * pi_A(d).
pub fn prime_identity_holds(q: u64, n: usize) -> bool {
    let n = n as u64;
    let sum: u128 = divisors(n)
        .into_iter()
        .map(|d| d as u128 * prime_count(q, d as usize) as u128)
        .sum();
    sum == (q as u128).pow(n as u32)
}

/// In-memory tables of monic irreducibles by degree, in canonical order.
#[derive(Debug, Clone)]
pub struct PrimeTables {
    q: u64,
    by_degree: Vec<Vec<Polynomial>>, // index 0 unused (empty)
}

impl PrimeTables {
    /// Enumerates all monic irreducibles of degree 1..=n_max.
    pub fn enumerate(q: u64, n_max: usize) -> Result<Self> {
        let mut by_degree = vec![Vec::new()];
        for n in 1..=n_max {
            let spec = FamilySpec::new(FamilyKind::Prime, q, n);
            let primes = match spec {
                Ok(s) => s.members(),
                // even-degree prime tables are still meaningful; bypass the
                // odd-degree family restriction with a direct scan
                Err(_) => {
                    let m = FamilySpec::new(FamilyKind::Monic, q, n)?;
                    m.iter().filter(|f| f.is_irreducible().unwrap()).collect()
                }
            };
            debug_assert_eq!(primes.len() as u64, prime_count(q, n));
            by_degree.push(primes);
        }
        Ok(PrimeTables { q, by_degree })
    }

    /// Builds tables from externally loaded per-degree lists, validating
    /// counts against pi_A and the canonical order.
    pub fn from_lists(q: u64, lists: Vec<Vec<Polynomial>>) -> Result<Self> {
        for (n, list) in lists.iter().enumerate() {
            let n = n + 1;
            if list.len() as u64 != prime_count(q, n) {
                return Err(Error::Inconsistent {
                    context: format!("prime table (q={q}, n={n})"),
                    detail: format!(
                        "has {} entries, pi_A({n}) = {}",
                        list.len(),
                        prime_count(q, n)
                    ),
                });
            }
        }
        let mut by_degree = vec![Vec::new()];
        by_degree.extend(lists);
        Ok(PrimeTables { q, by_degree })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn of_degree(&self, n: usize) -> &[Polynomial] {
        assert!(n >= 1 && n <= self.max_degree(), "degree {n} not cached");
        &self.by_degree[n]
    }
}

//! Moduli families and their exhaustive enumeration.
//!
//! Three kinds are supported, selected by [`FamilyKind`]:
//! - `Squarefree` (code `H`): monic square-free polynomials of degree n = 2g+1,
//! - `Prime` (code `P`): monic irreducibles of degree n = 2g+1,
//! - `Monic` (code `M`): all monic polynomials of degree n.
//!
//! Enumeration is a stream in canonical order (monic polynomials of fixed
//! degree ordered by canonical index, i.e. by their non-leading coefficients
//! read as a base-q integer), each member emitted exactly once with constant
//! memory per item. Parallel work partitions the underlying index range into
//! contiguous chunks, so results never depend on the worker count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime_u64;
use crate::poly::Polynomial;
use crate::primes::prime_count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// Monic square-free of odd degree 2g+1 (code "H").
    Squarefree,
    /// Monic irreducible of odd degree 2g+1 (code "P").
    Prime,
    /// All monic of degree n (code "M").
    Monic,
}

impl FamilyKind {
    pub fn code(&self) -> &'static str {
        match self {
            FamilyKind::Squarefree => "H",
            FamilyKind::Prime => "P",
            FamilyKind::Monic => "M",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "H" | "SQUAREFREE" => Ok(FamilyKind::Squarefree),
            "P" | "PRIME" => Ok(FamilyKind::Prime),
            "M" | "MONIC" => Ok(FamilyKind::Monic),
            other => Err(Error::domain(format!("unknown family kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub q: u64,
    /// Degree of the members; n = 2g+1 for the H and P families.
    pub n: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, q: u64, n: usize) -> Result<Self> {
        if !is_prime_u64(q) || q == 2 {
            return Err(Error::domain(format!("q = {q} must be an odd prime")));
        }
        if n == 0 {
            return Err(Error::domain("family degree must be positive"));
        }
        match kind {
            FamilyKind::Squarefree | FamilyKind::Prime => {
                if n % 2 == 0 {
                    return Err(Error::domain(format!(
                        "the {} family requires odd degree, got n = {n}",
                        kind.code()
                    )));
                }
            }
            FamilyKind::Monic => {}
        }
        Ok(FamilySpec { kind, q, n })
    }

    /// Convenience constructor from the genus: n = 2g + 1.
    pub fn from_genus(kind: FamilyKind, q: u64, g: usize) -> Result<Self> {
        Self::new(kind, q, 2 * g + 1)
    }

    pub fn genus(&self) -> usize {
        debug_assert!(self.n % 2 == 1);
        (self.n - 1) / 2
    }

    /// X = q^n (= q^{2g+1} for the H and P families).
    pub fn x(&self) -> f64 {
        (self.q as f64).powi(self.n as i32)
    }

    /// log_q X = n.
    pub fn log_q_x(&self) -> f64 {
        self.n as f64
    }

    fn member_at(&self, k: u64) -> Option<Polynomial> {
        let f = Polynomial::monic_from_index(self.q, self.n, k);
        let keep = match self.kind {
            FamilyKind::Monic => true,
            FamilyKind::Squarefree => f.is_squarefree().expect("monic nonzero"),
            FamilyKind::Prime => f.is_irreducible().expect("monic nonconstant"),
        };
        keep.then_some(f)
    }

    /// Streams the members once each, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Polynomial> + '_ {
        let total = (self.q as u128).pow(self.n as u32) as u64;
        (0..total).filter_map(move |k| self.member_at(k))
    }

    /// Streams the members of the canonical index range [lo, hi).
    pub fn iter_range(&self, lo: u64, hi: u64) -> impl Iterator<Item = Polynomial> + '_ {
        (lo..hi).filter_map(move |k| self.member_at(k))
    }

    /// Size of the underlying monic index range.
    pub fn index_range(&self) -> u64 {
        (self.q as u128).pow(self.n as u32) as u64
    }

    /// Materializes the family in canonical order (parallel, order preserved).
    pub fn members(&self) -> Vec<Polynomial> {
        use rayon::prelude::*;
        let total = self.index_range();
        let chunk = crate::reduce::CHUNK as u64;
        let n_chunks = total.div_ceil(chunk) as usize;
        let mut chunks: Vec<Vec<Polynomial>> = Vec::new();
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c as u64 * chunk;
                let hi = (lo + chunk).min(total);
                self.iter_range(lo, hi).collect::<Vec<_>>()
            })
            .collect_into_vec(&mut chunks);
        chunks.into_iter().flatten().collect()
    }

    /// Exact family cardinality from the counting formulas:
    /// q^n - q^{n-1} for H (n >= 2), pi_A(n) for P, q^n for M.
    pub fn cardinality(&self) -> u64 {
        match self.kind {
            FamilyKind::Monic => self.q.pow(self.n as u32),
            FamilyKind::Prime => prime_count(self.q, self.n),
            FamilyKind::Squarefree => {
                if self.n == 1 {
                    self.q
                } else {
                    self.q.pow(self.n as u32) - self.q.pow(self.n as u32 - 1)
                }
            }
        }
    }
}

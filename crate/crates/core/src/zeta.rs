//! The zeta function of F_q[T]: zeta_A(s) = 1/(1 - q^{1-s}), equivalently
//! Z(u) = 1/(1 - qu) with u = q^{-s}.

/// zeta_A(s) at an integer s >= 2.
pub fn zeta_a(q: u64, s: i32) -> f64 {
    debug_assert!(s >= 2);
    1.0 / (1.0 - (q as f64).powi(1 - s))
}

/// Z(u) = 1/(1 - qu) for |u| < 1/q.
pub fn z_of_u(q: u64, u: f64) -> f64 {
    1.0 / (1.0 - q as f64 * u)
}

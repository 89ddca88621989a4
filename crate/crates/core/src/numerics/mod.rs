//! Multiprecision plumbing: working-precision policy, sign/log-magnitude
//! values, log-Gamma, Barnes G, orthogonal polynomial derivative streams and
//! dense determinants.
//!
//! Every real here is an MPFR [`Float`]. Quantities such as Hankel
//! determinants grow like `e^{cN^2}`, so anything that leaves this module
//! as a final answer is a [`LogSigned`].

mod barnes;
mod linalg;
mod logsigned;
mod orthopoly;
pub(crate) mod taylor;

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

pub use barnes::{barnes_g_log, barnes_g_log_int, barnes_g_ratio_log_int, ln_glaisher};
pub use linalg::{det_log, with_escalation, Matrix, MAX_ESCALATIONS};
pub use logsigned::LogSigned;
pub use orthopoly::{orthopoly_eval_derivs, recurrence_coefficients, DerivStream};
pub(crate) use orthopoly::orthopoly_taylor_rows;

/// Working precision and escalation policy. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: u32,
    escalation_factor: u32,
}

impl PrecisionContext {
    pub const DEFAULT_BITS: u32 = 256;
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT_ESCALATION: u32 = 2;

    pub fn new(bits: u32, escalation_factor: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Precondition(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        if escalation_factor < 2 {
            return Err(Error::Precondition(format!(
                "escalation factor must be at least 2, got {escalation_factor}"
            )));
        }
        Ok(Self {
            bits,
            escalation_factor,
        })
    }

    pub fn with_bits(bits: u32) -> Result<Self> {
        Self::new(bits, Self::DEFAULT_ESCALATION)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn escalation_factor(&self) -> u32 {
        self.escalation_factor
    }

    /// The context used on escalation round `round` (round 0 is `self`).
    pub fn escalated(&self, round: u32) -> Self {
        Self {
            bits: self.bits * self.escalation_factor.pow(round),
            escalation_factor: self.escalation_factor,
        }
    }

    /// Bits of guard precision used by internal intermediate sums.
    pub(crate) fn guarded(&self) -> u32 {
        self.bits + 32
    }

    pub fn float(&self, x: f64) -> Float {
        Float::with_val(self.bits, x)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// `2^{-e}` at working precision.
    pub fn epsilon_pow2(&self, e: u32) -> Float {
        Float::with_val(self.bits, 1) >> e
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            bits: Self::DEFAULT_BITS,
            escalation_factor: Self::DEFAULT_ESCALATION,
        }
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if x.is_nan() || *x <= 0 {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    let mut y = Float::with_val(ctx.bits(), x);
    y.ln_gamma_mut();
    Ok(y)
}

/// `ln n!` computed exactly up to rounding.
pub fn log_factorial(n: u64, ctx: &PrecisionContext) -> Float {
    let x = Float::with_val(ctx.bits(), n + 1);
    x.ln_gamma()
}

/// `ln C(n, k)`.
pub fn log_binomial(n: u64, k: u64, ctx: &PrecisionContext) -> Float {
    debug_assert!(k <= n);
    log_factorial(n, ctx) - log_factorial(k, ctx) - log_factorial(n - k, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_rejects_low_precision() {
        assert!(PrecisionContext::new(32, 2).is_err());
        assert!(PrecisionContext::new(128, 1).is_err());
        let ctx = PrecisionContext::new(128, 3).unwrap();
        assert_eq!(ctx.escalated(2).bits(), 128 * 9);
    }

    #[test]
    fn log_gamma_trivial_values() {
        let ctx = PrecisionContext::default();
        let tol = ctx.epsilon_pow2(ctx.bits() - 8);
        let v = log_gamma(&ctx.float(1.0), &ctx).unwrap();
        assert!(v.clone().abs() < tol);
        let v = log_gamma(&ctx.float(5.0), &ctx).unwrap();
        let want = ctx.float(24.0).ln();
        assert!((v - &want).abs() < tol.clone() * &want);
        let v = log_gamma(&ctx.float(0.5), &ctx).unwrap();
        let want = ctx.pi().ln() / 2u32;
        assert!((v - &want).abs() < tol * &want);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        let ctx = PrecisionContext::default();
        assert!(matches!(
            log_gamma(&ctx.float(0.0), &ctx),
            Err(Error::Domain(_))
        ));
        assert!(log_gamma(&ctx.float(-2.5), &ctx).is_err());
    }

    #[test]
    fn binomial_small() {
        let ctx = PrecisionContext::default();
        let v = log_binomial(4, 2, &ctx).exp();
        assert!((v - 6u32).abs() < 1e-60);
    }
}

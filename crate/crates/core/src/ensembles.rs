//! Weights, symbols, limiting densities, saddle-point data and the
//! normalisations that turn Hankel determinants into ratios.
//!
//! Hermite: `ω_N(x) = e^{-2Nx^2}` on ℝ, `ρ(μ) = (2/π)√(1-μ²)` on [-1, 1].
//! Laguerre: `ω_N(x) = x^α e^{-4Nx}` on (0, ∞), `ρ(μ) = (2/π)√(1/μ - 1)` on
//! [0, 1].

use std::fmt;

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{
    barnes_g_log_int, log_factorial, recurrence_coefficients, LogSigned, PrecisionContext,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Hermite,
    Laguerre,
}

impl WeightKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeightKind::Hermite => "hermite",
            WeightKind::Laguerre => "laguerre",
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hermite" => Ok(WeightKind::Hermite),
            "laguerre" => Ok(WeightKind::Laguerre),
            other => Err(Error::Parse(format!("unknown weight kind {other:?}"))),
        }
    }
}

/// A weight `ω_N` together with its scaling parameter `N`. The Laguerre
/// exponent is ignored (and normalised to 0) for Hermite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    kind: WeightKind,
    alpha: f64,
    n: u64,
}

impl WeightSpec {
    pub fn new(kind: WeightKind, alpha: f64, n: u64) -> Result<Self> {
        let spec = match kind {
            WeightKind::Hermite => Self {
                kind,
                alpha: 0.0,
                n,
            },
            WeightKind::Laguerre => Self { kind, alpha, n },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hermite(n: u64) -> Self {
        Self {
            kind: WeightKind::Hermite,
            alpha: 0.0,
            n: n.max(1),
        }
    }

    pub fn laguerre(alpha: f64, n: u64) -> Result<Self> {
        Self::new(WeightKind::Laguerre, alpha, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("weight scaling N must be positive".into()));
        }
        if self.kind == WeightKind::Laguerre && !(self.alpha > -1.0 && self.alpha.is_finite()) {
            return Err(Error::Domain(format!(
                "Laguerre weight needs alpha > -1, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn with_n(&self, n: u64) -> Self {
        Self { n, ..*self }
    }

    /// Whether `mu` lies strictly inside the support of `ρ`.
    pub fn is_interior(&self, mu: f64) -> bool {
        match self.kind {
            WeightKind::Hermite => mu > -1.0 && mu < 1.0,
            WeightKind::Laguerre => mu > 0.0 && mu < 1.0,
        }
    }

    fn require_interior(&self, mu: f64) -> Result<()> {
        if self.is_interior(mu) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "mu = {mu} is not inside the interior of supp rho for the {} weight",
                self.kind
            )))
        }
    }
}

/// The symbol `ω_N(x) Π |μ_i - x|^{2 q_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    weight: WeightSpec,
    q: Vec<f64>,
    mu: Vec<f64>,
}

impl SymbolSpec {
    pub fn new(weight: WeightSpec, q: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        weight.validate()?;
        if q.len() != mu.len() {
            return Err(Error::Precondition(format!(
                "q has {} entries but mu has {}",
                q.len(),
                mu.len()
            )));
        }
        if let Some(bad) = q.iter().find(|x| !x.is_finite() || **x <= -0.5) {
            return Err(Error::Domain(format!("q entries must exceed -1/2, got {bad}")));
        }
        if let Some(bad) = mu.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("mu entries must be finite, got {bad}")));
        }
        for (j, a) in mu.iter().enumerate() {
            if mu[j + 1..].contains(a) {
                return Err(Error::Singular(format!("mu entries must be distinct ({a} repeats)")));
            }
        }
        Ok(Self { weight, q, mu })
    }

    /// The bare weight (`m = 0`).
    pub fn empty(weight: WeightSpec) -> Self {
        Self {
            weight,
            q: Vec::new(),
            mu: Vec::new(),
        }
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn n(&self) -> u64 {
        self.weight.n
    }

    pub fn with_n(&self, n: u64) -> Self {
        Self {
            weight: self.weight.with_n(n),
            ..self.clone()
        }
    }

    /// `|q| = Σ q_i`.
    pub fn q_total(&self) -> f64 {
        self.q.iter().sum()
    }

    /// The exponents as naturals; exact paths only accept these.
    pub fn integer_q(&self) -> Result<Vec<u64>> {
        self.q
            .iter()
            .map(|&x| {
                if x >= 0.0 && x.fract() == 0.0 && x < 1e6 {
                    Ok(x as u64)
                } else {
                    Err(Error::Unsupported(format!(
                        "exact evaluation needs natural q, got {x}"
                    )))
                }
            })
            .collect()
    }

    /// `(q_i, μ_i)` pairs with `q_i != 0`, as naturals.
    pub fn integer_blocks(&self) -> Result<Vec<(u64, f64)>> {
        Ok(self
            .integer_q()?
            .into_iter()
            .zip(self.mu.iter().copied())
            .filter(|(q, _)| *q > 0)
            .collect())
    }

    pub fn require_interior(&self) -> Result<()> {
        self.mu.iter().try_for_each(|&m| self.weight.require_interior(m))
    }
}

/// High-precision complex value, used for saddle points and actions.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    fn ln(&self) -> BigComplex {
        let prec = self.re.prec();
        let modulus = Float::with_val(prec, self.re.hypot_ref(&self.im));
        BigComplex {
            re: modulus.ln(),
            im: Float::with_val(prec, self.im.atan2_ref(&self.re)),
        }
    }
}

/// Saddle point `z₊` of `S(·, μ)` in the upper half plane and the data of
/// the steepest-descent parameterisation through it.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleData {
    pub z_plus: BigComplex,
    pub s_plus: BigComplex,
    pub re_s: Float,
    pub im_s: Float,
    pub a: Float,
    pub theta: Float,
}

/// Limiting eigenvalue density `ρ(μ)`.
pub fn rho(weight: &WeightSpec, mu: f64, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.bits();
    let two_over_pi = Float::with_val(p, 2) / ctx.pi();
    match weight.kind {
        WeightKind::Hermite => {
            if !(-1.0..=1.0).contains(&mu) {
                return Err(Error::Domain(format!("mu = {mu} outside [-1, 1]")));
            }
            let m = ctx.float(mu);
            let inner = Float::with_val(p, 1) - Float::with_val(p, m.square_ref());
            Ok(two_over_pi * inner.sqrt())
        }
        WeightKind::Laguerre => {
            if !(mu > 0.0 && mu <= 1.0) {
                return Err(Error::Domain(format!(
                    "mu = {mu} outside (0, 1] (the density diverges at 0)"
                )));
            }
            let inner = Float::with_val(p, 1) / ctx.float(mu) - 1u32;
            Ok(two_over_pi * inner.sqrt())
        }
    }
}

/// `ln ω_N(x)`.
pub fn weight_eval_log(weight: &WeightSpec, x: f64, ctx: &PrecisionContext) -> Result<LogSigned> {
    let p = ctx.bits();
    let xf = ctx.float(x);
    match weight.kind {
        WeightKind::Hermite => {
            let v = Float::with_val(p, xf.square_ref()) * weight.n * (-2i32);
            Ok(LogSigned::from_log(v))
        }
        WeightKind::Laguerre => {
            if x <= 0.0 {
                return Err(Error::Domain(format!("Laguerre weight needs x > 0, got {x}")));
            }
            let mut v = Float::with_val(p, &xf * weight.n) * (-4i32);
            if weight.alpha != 0.0 {
                v += xf.ln() * ctx.float(weight.alpha);
            }
            Ok(LogSigned::from_log(v))
        }
    }
}

/// `ln ζ_N(μ)` with `ζ_N = e^{2Nμ²}` (Hermite) or 1 (Laguerre).
pub fn zeta_log(weight: &WeightSpec, mu: f64, ctx: &PrecisionContext) -> LogSigned {
    match weight.kind {
        WeightKind::Hermite => {
            let m = ctx.float(mu);
            LogSigned::from_log(m.square() * weight.n * 2u32)
        }
        WeightKind::Laguerre => LogSigned::one(ctx.bits()),
    }
}

/// Principal-branch action: Hermite `2μz - log z - z²/2`, Laguerre
/// `2μz + log z - log(z + 2)`.
pub fn action_big(kind: WeightKind, z: &BigComplex, mu: f64, prec: u32) -> BigComplex {
    let m = Float::with_val(prec, mu);
    let two_mu_z = BigComplex {
        re: Float::with_val(prec, &z.re * &m) * 2u32,
        im: Float::with_val(prec, &z.im * &m) * 2u32,
    };
    let log_z = z.ln();
    match kind {
        WeightKind::Hermite => {
            let z2_re = Float::with_val(prec, z.re.square_ref()) - Float::with_val(prec, z.im.square_ref());
            let z2_im = Float::with_val(prec, &z.re * &z.im) * 2u32;
            BigComplex {
                re: two_mu_z.re - log_z.re - z2_re / 2u32,
                im: two_mu_z.im - log_z.im - z2_im / 2u32,
            }
        }
        WeightKind::Laguerre => {
            let zp2 = BigComplex {
                re: Float::with_val(prec, &z.re + 2u32),
                im: z.im.clone(),
            };
            let log_zp2 = zp2.ln();
            BigComplex {
                re: two_mu_z.re + log_z.re - log_zp2.re,
                im: two_mu_z.im + log_z.im - log_zp2.im,
            }
        }
    }
}

pub fn saddle_data(weight: &WeightSpec, mu: f64, ctx: &PrecisionContext) -> Result<SaddleData> {
    weight.require_interior(mu)?;
    let p = ctx.bits();
    let pi = ctx.pi();
    let m = ctx.float(mu);
    let r = rho(weight, mu, ctx)?;
    let (z_plus, theta, a) = match weight.kind {
        WeightKind::Hermite => {
            let s = (Float::with_val(p, 1) - Float::with_val(p, m.square_ref())).sqrt();
            let theta = (Float::with_val(p, &pi) - Float::with_val(p, m.asin_ref())) / 2u32;
            let a = Float::with_val(p, &pi * &r) / 2u32;
            (BigComplex { re: m.clone(), im: s }, theta, a)
        }
        WeightKind::Laguerre => {
            let s = (Float::with_val(p, 1) / &m - 1u32).sqrt();
            let theta = Float::with_val(p, &pi) / 4u32;
            let a = Float::with_val(p, m.square_ref()) * &pi * &r;
            (
                BigComplex {
                    re: Float::with_val(p, -1),
                    im: s,
                },
                theta,
                a,
            )
        }
    };
    let s_plus = action_big(weight.kind, &z_plus, mu, p);
    Ok(SaddleData {
        re_s: s_plus.re.clone(),
        im_s: s_plus.im.clone(),
        z_plus,
        s_plus,
        a,
        theta,
    })
}

/// `ln h_0 = ln ∫ ω_N`.
fn opnorm_h0_log(weight: &WeightSpec, prec: u32) -> Float {
    match weight.kind {
        WeightKind::Hermite => {
            // √(π / 2N)
            let v = Float::with_val(prec, Constant::Pi) / (Float::with_val(prec, weight.n) * 2u32);
            v.ln() / 2u32
        }
        WeightKind::Laguerre => {
            let a1 = Float::with_val(prec, weight.alpha) + 1u32;
            let four_n = Float::with_val(prec, weight.n) * 4u32;
            Float::with_val(prec, a1.ln_gamma_ref()) - a1 * four_n.ln()
        }
    }
}

/// `ln h_k`, `h_k = ∫ π_k² ω_N = h_0 β_1 ⋯ β_k`.
pub fn opnorm_h_log(weight: &WeightSpec, k: u64, ctx: &PrecisionContext) -> Result<LogSigned> {
    weight.validate()?;
    let p = ctx.guarded();
    let mut acc = opnorm_h0_log(weight, p);
    for j in 1..=k {
        let (_, beta) = recurrence_coefficients(weight, j, p);
        acc += beta.ln();
    }
    Ok(LogSigned::from_log(Float::with_val(ctx.bits(), acc)))
}

/// `ln(H_{size,N} / H_{size+p,N})` where `H_{M,N} = M! Π_{k<M} h_k`.
pub fn selberg_ratio_log(
    weight: &WeightSpec,
    size: u64,
    p: u64,
    ctx: &PrecisionContext,
) -> Result<LogSigned> {
    weight.validate()?;
    if p == 0 {
        return Ok(LogSigned::one(ctx.bits()));
    }
    let prec = ctx.guarded();
    let gctx = PrecisionContext::with_bits(prec)?;
    let mut ln_h = opnorm_h_log(weight, size, &gctx)?.ln()?;
    let mut sum_h = Float::with_val(prec, &ln_h);
    for k in size + 1..size + p {
        let (_, beta) = recurrence_coefficients(weight, k, prec);
        ln_h += beta.ln();
        sum_h += &ln_h;
    }
    let v = log_factorial(size, &gctx) - log_factorial(size + p, &gctx) - sum_h;
    Ok(LogSigned::from_log(Float::with_val(ctx.bits(), v)))
}

/// `ln Z_p(a)` with `Z_p(a) = ∫_{ℝ^p} Δ_p(x)² Π e^{-a x_l²} d^p x
/// = (π / 2^{p-1})^{p/2} G(p + 2) a^{-p²/2}`.
pub fn z_selberg_log(p: u64, a: &Float, ctx: &PrecisionContext) -> Result<LogSigned> {
    if !(a.is_finite() && *a > 0) {
        return Err(Error::Domain(format!("Z_p(a) needs a > 0, got {a}")));
    }
    if p == 0 {
        return Ok(LogSigned::one(ctx.bits()));
    }
    let prec = ctx.guarded();
    let pf = Float::with_val(prec, p);
    let ln_pi = Float::with_val(prec, Constant::Pi).ln();
    let ln2 = Float::with_val(prec, Constant::Log2);
    let inner = ln_pi - ln2 * (p - 1);
    let mut v = inner * &pf / 2u32;
    let gctx = PrecisionContext::with_bits(prec)?;
    v += barnes_g_log_int(p + 2, &gctx)?.log_mag();
    let ln_a = Float::with_val(prec, a.ln_ref());
    v -= ln_a * Float::with_val(prec, pf.square_ref()) / 2u32;
    Ok(LogSigned::from_log(Float::with_val(ctx.bits(), v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn rho_values() {
        let c = ctx();
        let two_over_pi = 2.0 / std::f64::consts::PI;
        let h = WeightSpec::hermite(4);
        assert!((rho(&h, 0.0, &c).unwrap().to_f64() - two_over_pi).abs() < 1e-16);
        assert!(rho(&h, 1.0, &c).unwrap().is_zero());
        assert!(rho(&h, 1.5, &c).is_err());
        let l = WeightSpec::laguerre(0.0, 4).unwrap();
        assert!((rho(&l, 0.5, &c).unwrap().to_f64() - two_over_pi).abs() < 1e-16);
        assert!(rho(&l, 0.0, &c).is_err());
        assert!(rho(&l, -0.2, &c).is_err());
    }

    #[test]
    fn weight_values() {
        let c = ctx();
        let w = weight_eval_log(&WeightSpec::hermite(3), 0.0, &c).unwrap();
        assert_eq!(w.sign(), 1);
        assert!(w.log_mag().is_zero());
        let w = weight_eval_log(&WeightSpec::hermite(2), 1.0, &c).unwrap();
        assert_eq!(w.log_mag().to_f64(), -4.0);
        let l = WeightSpec::laguerre(0.0, 1).unwrap();
        assert_eq!(weight_eval_log(&l, 1.0, &c).unwrap().log_mag().to_f64(), -4.0);
        assert!(weight_eval_log(&l, 0.0, &c).is_err());
    }

    #[test]
    fn laguerre_rejects_bad_alpha() {
        assert!(WeightSpec::laguerre(-1.0, 3).is_err());
        assert!(WeightSpec::laguerre(-0.5, 3).is_ok());
        assert!(WeightSpec::new(WeightKind::Hermite, 0.0, 0).is_err());
    }

    #[test]
    fn symbol_validation() {
        let w = WeightSpec::hermite(2);
        assert!(SymbolSpec::new(w, vec![1.0], vec![0.1, 0.2]).is_err());
        assert!(matches!(
            SymbolSpec::new(w, vec![1.0, 1.0], vec![0.1, 0.1]),
            Err(Error::Singular(_))
        ));
        assert!(SymbolSpec::new(w, vec![-0.5], vec![0.1]).is_err());
        let s = SymbolSpec::new(w, vec![0.5], vec![0.1]).unwrap();
        assert!(s.integer_q().is_err());
        let s = SymbolSpec::new(w, vec![2.0, 0.0], vec![0.1, 0.3]).unwrap();
        assert_eq!(s.integer_blocks().unwrap(), vec![(2, 0.1)]);
    }

    #[test]
    fn zeta_values() {
        let c = ctx();
        let l = WeightSpec::laguerre(2.0, 5).unwrap();
        assert!(zeta_log(&l, 0.3, &c).log_mag().is_zero());
        assert_eq!(zeta_log(&WeightSpec::hermite(1), 1.0, &c).log_mag().to_f64(), 2.0);
        assert!(zeta_log(&WeightSpec::hermite(9), 0.0, &c).log_mag().is_zero());
    }

    #[test]
    fn hermite_saddle_at_origin() {
        let c = ctx();
        let s = saddle_data(&WeightSpec::hermite(1), 0.0, &c).unwrap();
        assert!(s.z_plus.re.is_zero());
        assert!((s.z_plus.im.to_f64() - 1.0).abs() < 1e-30);
        assert!((s.a.to_f64() - 1.0).abs() < 1e-16);
        assert!((s.theta.to_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-16);
        // S(i, 0) = -log i - i²/2 = 1/2 - iπ/2
        assert!((s.re_s.to_f64() - 0.5).abs() < 1e-30);
        assert!((s.im_s.to_f64() + std::f64::consts::FRAC_PI_2).abs() < 1e-16);
    }

    #[test]
    fn laguerre_saddle_at_half() {
        let c = ctx();
        let s = saddle_data(&WeightSpec::laguerre(0.0, 1).unwrap(), 0.5, &c).unwrap();
        assert_eq!(s.z_plus.re.to_f64(), -1.0);
        assert!((s.z_plus.im.to_f64() - 1.0).abs() < 1e-30);
        assert!((s.theta.to_f64() - std::f64::consts::FRAC_PI_4).abs() < 1e-16);
        // Re S = 2μ Re z + ln|z| - ln|z + 2| = -1 since |z| = |z + 2|
        assert!((s.re_s.to_f64() + 1.0).abs() < 1e-30);
    }

    #[test]
    fn saddle_rejects_boundary() {
        let c = ctx();
        assert!(saddle_data(&WeightSpec::hermite(1), 1.0, &c).is_err());
        assert!(saddle_data(&WeightSpec::laguerre(0.0, 1).unwrap(), 0.0, &c).is_err());
    }

    #[test]
    fn opnorm_base_cases() {
        let c = ctx();
        let h0 = opnorm_h_log(&WeightSpec::hermite(1), 0, &c).unwrap();
        let want = (std::f64::consts::PI / 2.0).sqrt().ln();
        assert!((h0.log_mag().to_f64() - want).abs() < 1e-15);
        let l0 = opnorm_h_log(&WeightSpec::laguerre(0.0, 1).unwrap(), 0, &c).unwrap();
        assert!((l0.log_mag().to_f64() - 0.25f64.ln()).abs() < 1e-15);
        // h_1 = h_0 β_1 = √(π/2)/4 for Hermite N = 1
        let h1 = opnorm_h_log(&WeightSpec::hermite(1), 1, &c).unwrap();
        assert!((h1.log_mag().to_f64() - (want - 4f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn z_selberg_small_p() {
        let c = ctx();
        let one = c.float(1.0);
        assert!(z_selberg_log(0, &one, &c).unwrap().log_mag().is_zero());
        let z1 = z_selberg_log(1, &one, &c).unwrap().log_mag().to_f64();
        assert!((z1 - std::f64::consts::PI.sqrt().ln()).abs() < 1e-15);
        let z2 = z_selberg_log(2, &one, &c).unwrap().log_mag().to_f64();
        assert!((z2 - std::f64::consts::PI.ln()).abs() < 1e-15);
        assert!(z_selberg_log(2, &c.float(0.0), &c).is_err());
    }

    #[test]
    fn selberg_ratio_trivial() {
        let c = ctx();
        let r = selberg_ratio_log(&WeightSpec::hermite(3), 3, 0, &c).unwrap();
        assert!(r.log_mag().is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn im_saddle_is_scaled_density(mu in -0.98f64..0.98, lag in 0.02f64..0.98, alpha in -0.9f64..3.0) {
            let c = ctx();
            let tol = Float::with_val(256, 1e-30);
            for (w, m) in [
                (WeightSpec::hermite(5), mu),
                (WeightSpec::laguerre(alpha, 5).unwrap(), lag),
            ] {
                let s = saddle_data(&w, m, &c).unwrap();
                let r = rho(&w, m, &c).unwrap();
                let lhs = Float::with_val(256, &s.z_plus.im - r * c.pi() / 2u32);
                prop_assert!(lhs.abs() < tol);
                prop_assert!(s.a > 0);
                prop_assert!(s.theta.is_finite());
            }
        }

        #[test]
        fn z_selberg_scaling_law(p in 0u64..6, a in 0.05f64..20.0) {
            let c = ctx();
            let af = c.float(a);
            let diff = Float::with_val(256, z_selberg_log(p, &af, &c).unwrap().log_mag()
                - z_selberg_log(p, &c.float(1.0), &c).unwrap().log_mag());
            let want = -(af.ln()) * (p * p) / 2u32;
            prop_assert!(Float::with_val(256, diff - want).abs() < 1e-70);
        }
    }
}

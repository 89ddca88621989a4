//! Large-`N` leading behaviour: the Forrester–Frankel product formula, the
//! saddle-point coefficient `I₀`, and the identity that turns one into the
//! other.

use rug::float::Constant;
use rug::Float;

use crate::duality::cross_vandermonde_log;
use crate::ensembles::{
    rho, saddle_data, weight_eval_log, z_selberg_log, zeta_log, SymbolSpec, WeightKind, WeightSpec,
};
use crate::error::{Error, Result};
use crate::numerics::{barnes_g_log, barnes_g_log_int, log_binomial, log_factorial, LogSigned, PrecisionContext};

/// Leading-order value with its labelled factors. `log_value` is
/// `n_exponent · ln N` plus the sum of `factors`.
#[derive(Debug, Clone, PartialEq)]
pub struct FfResult {
    pub log_value: LogSigned,
    pub n_exponent: f64,
    pub factors: Vec<(&'static str, Float)>,
}

impl FfResult {
    pub fn factor(&self, label: &str) -> Option<&Float> {
        self.factors.iter().find(|(l, _)| *l == label).map(|(_, v)| v)
    }
}

/// Nonzero `(q_i, μ_i)` pairs after checking interior, distinct μ.
fn real_blocks(spec: &SymbolSpec) -> Result<Vec<(f64, f64)>> {
    let blocks: Vec<(f64, f64)> = spec
        .q()
        .iter()
        .copied()
        .zip(spec.mu().iter().copied())
        .filter(|(q, _)| *q != 0.0)
        .collect();
    for &(_, m) in &blocks {
        if !spec.weight().is_interior(m) {
            return Err(Error::Domain(format!(
                "mu = {m} is not inside the support of the limiting density"
            )));
        }
    }
    Ok(blocks)
}

fn cross_log_real(blocks: &[(f64, f64)], prec: u32) -> Result<Float> {
    let mut acc = Float::with_val(prec, 0);
    for (k, &(qk, mk)) in blocks.iter().enumerate() {
        for &(qj, mj) in &blocks[..k] {
            let d = Float::with_val(prec, mk) - mj;
            if d.is_zero() {
                return Err(Error::Singular(format!("coincident singularities at mu = {mk}")));
            }
            acc += d.abs().ln() * Float::with_val(prec, qj * qk);
        }
    }
    Ok(acc)
}

/// Leading term of `ℋ_{N,m,q}(μ)` for real `q_i > -1/2`:
/// `N^{Σ(q²-q)} Π ω(μ_i)^{-q_i} G(q_i+1)²/G(2q_i+1) (2π)^{q_i²-q_i}
/// Π_{j<k}|μ_k-μ_j|^{-2q_jq_k} Π ρ(μ_i)^{q_i²}`.
pub fn ff_log(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<FfResult> {
    let blocks = real_blocks(spec)?;
    let prec = ctx.guarded();
    let gctx = PrecisionContext::with_bits(prec)?;
    let w = spec.weight();
    let ln_2pi = (Float::with_val(prec, Constant::Pi) * 2u32).ln();

    let mut n_exponent = 0.0;
    let mut n_exp_f = Float::with_val(prec, 0);
    let mut weight_f = Float::with_val(prec, 0);
    let mut barnes_f = Float::with_val(prec, 0);
    let mut density_f = Float::with_val(prec, 0);
    for &(q, mu) in &blocks {
        let qf = Float::with_val(prec, q);
        let q2 = Float::with_val(prec, qf.square_ref());
        let e = Float::with_val(prec, &q2 - &qf);
        n_exponent += q * q - q;
        n_exp_f += &e;
        weight_f -= Float::with_val(prec, weight_eval_log(w, mu, &gctx)?.log_mag() * &qf);
        let g1 = barnes_g_log(&Float::with_val(prec, &qf + 1u32), &gctx)?;
        let g2 = barnes_g_log(&(Float::with_val(prec, &qf * 2u32) + 1u32), &gctx)?;
        barnes_f += Float::with_val(prec, g1.log_mag() * 2u32) - g2.log_mag();
        barnes_f += e * &ln_2pi;
        density_f += rho(w, mu, &gctx)?.ln() * q2;
    }
    let vander_f = cross_log_real(&blocks, prec)? * (-2i32);
    let ln_n = Float::with_val(prec, spec.n()).ln();
    let total = Float::with_val(prec, &n_exp_f * &ln_n) + &weight_f + &barnes_f + &vander_f + &density_f;
    let r = |x: Float| Float::with_val(ctx.bits(), x);
    Ok(FfResult {
        log_value: LogSigned::from_log(r(total)),
        n_exponent,
        factors: vec![
            ("weight", r(weight_f)),
            ("barnes", r(barnes_f)),
            ("vandermonde", r(vander_f)),
            ("density", r(density_f)),
        ],
    })
}

/// Integer blocks restricted to the interior of the support.
fn interior_blocks(spec: &SymbolSpec) -> Result<Vec<(u64, f64)>> {
    let blocks = spec.integer_blocks()?;
    for &(_, m) in &blocks {
        if !spec.weight().is_interior(m) {
            return Err(Error::Domain(format!(
                "mu = {m} is not inside the support of the limiting density"
            )));
        }
    }
    cross_vandermonde_log(&blocks, 1, 64)?;
    Ok(blocks)
}

/// `(ln|G_q(0)| , sign)`.
fn g_q0_log(w: &WeightSpec, blocks: &[(u64, f64)], prec: u32) -> (Float, i8) {
    let mut v = Float::with_val(prec, 0);
    let mut sign = 1i8;
    if w.kind() == WeightKind::Laguerre {
        for &(q, mu) in blocks {
            let e = Float::with_val(prec, 2 * q * q) - Float::with_val(prec, w.alpha()) * q;
            v += Float::with_val(prec, mu).ln() * e;
            if q % 2 == 1 {
                sign = -sign;
            }
        }
    }
    (v, sign)
}

/// `ln H_q(0)`; the cross factor has even exponents so it is positive.
fn h_q0_log(w: &WeightSpec, blocks: &[(u64, f64)], prec: u32) -> Result<Float> {
    let mut v = cross_vandermonde_log(blocks, 2, prec)?;
    if w.kind() == WeightKind::Hermite {
        let total: u64 = blocks.iter().map(|b| b.0).sum();
        let sum_sq: u64 = blocks.iter().map(|b| b.0 * b.0).sum();
        v += Float::with_val(prec, Constant::Log2) * (total * total - sum_sq);
    }
    Ok(v)
}

/// `ln|h_0|` and its sign.
fn h0_log(spec: &SymbolSpec, blocks: &[(u64, f64)], prec: u32) -> (Float, i8) {
    let ln2 = Float::with_val(prec, Constant::Log2);
    let ln_pi = Float::with_val(prec, Constant::Pi).ln();
    let total: u64 = blocks.iter().map(|b| b.0).sum();
    let mut v = Float::with_val(prec, 0);
    for &(q, _) in blocks {
        v += Float::with_val(prec, &ln2 * (2 * q * q - 2 * q));
        v -= Float::with_val(prec, &ln_pi * (2 * q));
    }
    match spec.weight().kind() {
        WeightKind::Hermite => {
            v += Float::with_val(prec, total * spec.n());
            v -= Float::with_val(prec, &ln2 * (total * total));
            (v, 1)
        }
        WeightKind::Laguerre => (v, if total.is_multiple_of(2) { 1 } else { -1 }),
    }
}

/// Coefficient `I₀` of the leading saddle-point term
/// `I_{N,m,q}(μ) ≈ Π e^{-2q_i N Re S_i} N^{-q_i²} I₀`.
pub fn i0_log(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    let blocks = interior_blocks(spec)?;
    let prec = ctx.guarded();
    let gctx = PrecisionContext::with_bits(prec)?;
    let w = spec.weight();
    let ln_pi = Float::with_val(prec, Constant::Pi).ln();
    let mut v = Float::with_val(prec, 0);
    let mut sign = 1i8;
    let mut total = 0u64;
    for &(q, mu) in &blocks {
        let sd = saddle_data(w, mu, &gctx)?;
        v += log_binomial(2 * q, q, &gctx);
        v += Float::with_val(prec, z_selberg_log(q, &sd.a, &gctx)?.log_mag() * 2u32);
        // D_q(0) = (-1)^{|q|} π^{Σ2q²} Π ρ^{2q²}
        v += Float::with_val(prec, &ln_pi * (2 * q * q));
        v += rho(w, mu, &gctx)?.ln() * (2 * q * q);
        if q % 2 == 1 {
            sign = -sign;
        }
        total += q;
    }
    if total % 2 == 1 {
        sign = -sign;
    }
    let (g, gs) = g_q0_log(w, &blocks, prec);
    v += g + h_q0_log(w, &blocks, prec)?;
    Ok(LogSigned::new(sign * gs, Float::with_val(ctx.bits(), v)))
}

/// Leading `ln ℋ` assembled from the exact duality prefactors, the
/// asymptotic form of `h_{N,m,q}` and the saddle-point leading term of the
/// dual integral.
pub fn calh_via_i0_log(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    let blocks = interior_blocks(spec)?;
    let prec = ctx.guarded();
    let gctx = PrecisionContext::with_bits(prec)?;
    let w = spec.weight();
    let ln_n = Float::with_val(prec, spec.n()).ln();
    let (h0, h0_sign) = h0_log(spec, &blocks, prec);
    let i0 = i0_log(spec, &gctx)?;
    let mut v = h0 + i0.log_mag() + cross_vandermonde_log(&blocks, -4, prec)?;
    for &(q, mu) in &blocks {
        let sd = saddle_data(w, mu, &gctx)?;
        // h ~ N^{2q²-q} h_0; I ~ N^{-q²} e^{-2qN Re S} I₀
        v += Float::with_val(prec, &ln_n * (q * q)) - Float::with_val(prec, &ln_n * q);
        v -= barnes_g_log_int(2 * q + 1, &gctx)?.log_mag();
        v -= log_factorial(2 * q, &gctx);
        v += Float::with_val(prec, zeta_log(w, mu, &gctx).log_mag() * (2 * q));
        v -= sd.re_s * (2 * q * spec.n());
    }
    Ok(LogSigned::new(h0_sign * i0.sign(), Float::with_val(ctx.bits(), v)))
}

/// `|LHS - RHS|` (in logs) of the identity that removes the saddle data:
/// `Π e^{-2q_iN Re S_i} ζ^{2q_i} a_i^{-q_i²} G_q(0) H_q(0) h_0 =
/// Π ω^{-q_i} ρ^{-q_i²} 2^{2q_i²-2q_i} π^{-q_i²-2q_i} Π_{j<k}|μ_k-μ_j|^{2q_jq_k}`.
pub fn universality_residual(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<Float> {
    let blocks = interior_blocks(spec)?;
    let prec = ctx.guarded();
    let gctx = PrecisionContext::with_bits(prec)?;
    let w = spec.weight();
    let ln2 = Float::with_val(prec, Constant::Log2);
    let ln_pi = Float::with_val(prec, Constant::Pi).ln();

    let (g, _) = g_q0_log(w, &blocks, prec);
    let (h0, _) = h0_log(spec, &blocks, prec);
    let mut lhs = g + h_q0_log(w, &blocks, prec)? + h0;
    let mut rhs = cross_vandermonde_log(&blocks, 2, prec)?;
    for &(q, mu) in &blocks {
        let sd = saddle_data(w, mu, &gctx)?;
        lhs -= Float::with_val(prec, &sd.re_s * (2 * q * spec.n()));
        lhs += Float::with_val(prec, zeta_log(w, mu, &gctx).log_mag() * (2 * q));
        lhs -= sd.a.ln() * (q * q);

        rhs -= Float::with_val(prec, weight_eval_log(w, mu, &gctx)?.log_mag() * q);
        rhs -= rho(w, mu, &gctx)?.ln() * (q * q);
        rhs += Float::with_val(prec, &ln2 * (2 * q * q - 2 * q));
        rhs -= Float::with_val(prec, &ln_pi * (q * q + 2 * q));
    }
    Ok(Float::with_val(ctx.bits(), lhs - rhs).abs())
}

/// Leading `ln ρ^{(1)}_{N+1}(x, y)` for `N + 1` impenetrable bosons in a
/// harmonic trap: `(N+1) √(g(x) g(y)) ℋ_{N,2,(1/2,1/2)}(x, y)` with the
/// Hermite weight as `g`.
pub fn boson_rho1_leading(n: u64, x: f64, y: f64, ctx: &PrecisionContext) -> Result<LogSigned> {
    if x == y {
        return Err(Error::Singular(
            "the one-body density matrix formula is singular on the diagonal".into(),
        ));
    }
    let w = WeightSpec::new(WeightKind::Hermite, 0.0, n)?;
    let spec = SymbolSpec::new(w, vec![0.5, 0.5], vec![x, y])?;
    let ff = ff_log(&spec, ctx)?;
    let prec = ctx.guarded();
    let gx = weight_eval_log(&w, x, ctx)?;
    let gy = weight_eval_log(&w, y, ctx)?;
    let mut v = Float::with_val(prec, n + 1).ln();
    v += Float::with_val(prec, gx.log_mag() + gy.log_mag()) / 2u32;
    v += ff.log_value.log_mag();
    Ok(LogSigned::from_log(Float::with_val(ctx.bits(), v)))
}

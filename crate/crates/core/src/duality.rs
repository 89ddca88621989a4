//! Exact evaluation for natural `q` through a `2|q| × 2|q|` confluent
//! determinant of polynomial derivatives. The cost does not grow with the
//! determinant size `N` beyond one pass of the three-term recurrence.

use rug::float::Constant;
use rug::Float;

use crate::ensembles::{selberg_ratio_log, SymbolSpec, WeightKind};
use crate::error::{Error, Result};
use crate::numerics::{
    barnes_g_log_int, det_log, log_factorial, orthopoly_taylor_rows, taylor, with_escalation, LogSigned,
    Matrix, PrecisionContext,
};

/// `Σ_{k<p} ln Γ(x + k) = ln G(x + p) - ln G(x)` for real `x > 0`.
pub(crate) fn g_shift_log(x: &Float, p: u64, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    for k in 0..p {
        acc += Float::with_val(prec, x + k).ln_gamma();
    }
    acc
}

/// `-4 Σ_{j<k} q_j q_k ln|μ_k - μ_j|`, the cross-block Vandermonde factor.
pub(crate) fn cross_vandermonde_log(blocks: &[(u64, f64)], power: i64, prec: u32) -> Result<Float> {
    let mut acc = Float::with_val(prec, 0);
    for (k, &(qk, mk)) in blocks.iter().enumerate() {
        for &(qj, mj) in &blocks[..k] {
            let d = Float::with_val(prec, mk) - mj;
            if d.is_zero() {
                return Err(Error::Singular(format!("coincident singularities at mu = {mk}")));
            }
            acc += d.abs().ln() * (power * (qj * qk) as i64);
        }
    }
    Ok(acc)
}

fn require_blocks(spec: &SymbolSpec) -> Result<Vec<(u64, f64)>> {
    let blocks = spec.integer_blocks()?;
    cross_vandermonde_log(&blocks, 1, 64)?;
    Ok(blocks)
}

/// Taylor coefficients in `h` of `r_d(μ + h)` for `d = lo..=hi`, where
/// `r = π^{(N)} / ζ_N`.
fn r_taylor_rows(spec: &SymbolSpec, lo: u64, hi: u64, mu: f64, order: usize, prec: u32) -> Result<Vec<Vec<Float>>> {
    let w = spec.weight();
    let m = Float::with_val(prec, mu);
    let rows = orthopoly_taylor_rows(w, lo, hi, &m, order, prec)?;
    match w.kind() {
        WeightKind::Laguerre => Ok(rows),
        WeightKind::Hermite => {
            // e^{-2N(μ + h)²} = e^{-2Nμ²} exp(-4Nμ h - 2N h²)
            let n = w.n();
            let f = vec![
                Float::with_val(prec, m.square_ref()) * n * (-2i32),
                Float::with_val(prec, &m * n) * (-4i32),
                Float::with_val(prec, n) * (-2i32),
            ];
            let g = taylor::exp(&f, order, prec);
            Ok(rows.iter().map(|r| taylor::mul(r, &g, order, prec)).collect())
        }
    }
}

fn r_matrix_at(spec: &SymbolSpec, blocks: &[(u64, f64)], prec: u32) -> Result<Matrix> {
    let k: u64 = 2 * blocks.iter().map(|b| b.0).sum::<u64>();
    let n = spec.n();
    let mut cols: Vec<Vec<Float>> = Vec::with_capacity(k as usize);
    for &(q, mu) in blocks {
        let order = (2 * q - 1) as usize;
        let rows = r_taylor_rows(spec, n, n + k - 1, mu, order, prec)?;
        let rows: Vec<Vec<Float>> = rows.into_iter().map(taylor::to_derivatives).collect();
        for l in 0..=order {
            cols.push(rows.iter().map(|r| r[l].clone()).collect());
        }
    }
    Ok((0..k as usize)
        .map(|j| cols.iter().map(|c| c[j].clone()).collect())
        .collect())
}

/// Entry `(j, (i, l))` is `d^{l}/dμ_i^{l} r_{N+j}(μ_i)` for
/// `j = 0..2|q|` and `l = 0..2q_i`. Blocks with `q_i = 0` are dropped.
pub fn r_deriv_matrix(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<Matrix> {
    let blocks = require_blocks(spec)?;
    let m = r_matrix_at(spec, &blocks, ctx.guarded())?;
    Ok(m.into_iter()
        .map(|row| row.into_iter().map(|x| Float::with_val(ctx.bits(), x)).collect())
        .collect())
}

/// `ln` of the confluent limit, which equals `E[Π_i |det(μ_i - X)|^{2q_i}]`
/// over the `N`-point ensemble.
pub fn lim_f_log(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    let blocks = require_blocks(spec)?;
    if blocks.is_empty() {
        return Ok(LogSigned::one(ctx.bits()));
    }
    with_escalation(ctx, "confluent determinant", |c| {
        let prec = c.guarded();
        let det = det_log(r_matrix_at(spec, &blocks, prec)?, prec)?;
        let mut pre = cross_vandermonde_log(&blocks, -4, prec)?;
        let gctx = PrecisionContext::with_bits(prec)?;
        for &(q, mu) in &blocks {
            if spec.weight().kind() == WeightKind::Hermite {
                // ζ^{2q} = e^{4qNμ²}
                let m = Float::with_val(prec, mu);
                pre += m.square() * (4 * q * spec.n());
            }
            pre -= barnes_g_log_int(2 * q + 1, &gctx)?.log_mag();
        }
        Ok(det.scale_log(&pre))
    })
}

/// `ln ℋ_{N,m,q}(μ)` for natural `q` and any `N`.
pub fn calh_duality(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    let q = spec.integer_q()?;
    let total: u64 = q.iter().sum();
    let f = lim_f_log(spec, ctx)?;
    let s = selberg_ratio_log(spec.weight(), spec.n(), total, ctx)?;
    Ok(f.mul(&s).round_to(ctx.bits()))
}

/// `h_{N,m,q}` from its Barnes-G closed form.
pub fn h_prefactor_log(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    let blocks = spec.integer_blocks()?;
    let prec = ctx.guarded();
    let total: u64 = blocks.iter().map(|b| b.0).sum();
    if total == 0 {
        return Ok(LogSigned::one(ctx.bits()));
    }
    let sum_sq: u64 = blocks.iter().map(|b| b.0 * b.0).sum();
    let n = spec.n();
    let nf = Float::with_val(prec, n);
    let ln_n = Float::with_val(prec, nf.ln_ref());
    let ln2 = Float::with_val(prec, Constant::Log2);
    let ln_pi = Float::with_val(prec, Constant::Pi).ln();
    let qf = Float::with_val(prec, total);
    let (v, sign) = match spec.weight().kind() {
        WeightKind::Hermite => {
            // 2^{-|q|² - 3|q|/2 + Σ2q²} π^{-3|q|/2} N^{Σ2q² + |q|²/2 + |q|N} G(N+2)/G(N+|q|+2)
            let e2 = Float::with_val(prec, 2 * sum_sq) - total * total - Float::with_val(prec, &qf * 3u32) / 2u32;
            let en = Float::with_val(prec, 2 * sum_sq + total * n) + Float::with_val(prec, total * total) / 2u32;
            let mut v = e2 * &ln2 - Float::with_val(prec, &qf * 3u32) / 2u32 * &ln_pi + en * &ln_n;
            v -= g_shift_log(&Float::with_val(prec, n + 2), total, prec);
            (v, 1i8)
        }
        WeightKind::Laguerre => {
            let alpha = Float::with_val(prec, spec.weight().alpha());
            let e2 = Float::with_val(prec, 2 * sum_sq) - Float::with_val(prec, 2 * total);
            let en = (Float::with_val(prec, &alpha - total)) * total + 2 * sum_sq;
            let mut v = e2 * &ln2 - Float::with_val(prec, &qf * 2u32) * &ln_pi + en * &ln_n;
            // G(N+2)/G(N+1) = N!
            v += log_factorial(n, &PrecisionContext::with_bits(prec)?);
            v -= g_shift_log(&(Float::with_val(prec, n + 1) + &alpha), total, prec);
            v += g_shift_log(&Float::with_val(prec, n + total + 2), total - 1, prec);
            (v, if total.is_multiple_of(2) { 1 } else { -1 })
        }
    };
    Ok(LogSigned::new(sign, Float::with_val(ctx.bits(), v)))
}

/// `Π_j c_j(N) Π_i Π_l d_l(N)`, the constants pulled out of the contour
/// representation of the polynomials. The product is real.
pub fn contour_constants_log(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    let blocks = spec.integer_blocks()?;
    let prec = ctx.guarded();
    let total: u64 = blocks.iter().map(|b| b.0).sum();
    let k = 2 * total;
    let n = spec.n();
    let ln2 = Float::with_val(prec, Constant::Log2);
    let ln_pi = Float::with_val(prec, Constant::Pi).ln();
    let ln_n = Float::with_val(prec, n).ln();
    // each 1/i contributes -i; k of them give (-1)^{k/2}
    let mut sign: i8 = if total.is_multiple_of(2) { 1 } else { -1 };
    let mut v = Float::with_val(prec, 0);
    for j in 1..=k {
        match spec.weight().kind() {
            WeightKind::Hermite => {
                // √(2N/π) / 2^{N+j}
                v += (Float::with_val(prec, &ln2 + &ln_n) - &ln_pi) / 2u32;
                v -= Float::with_val(prec, &ln2 * (n + j));
            }
            WeightKind::Laguerre => {
                // (-1)^{N+j-1} (N+j-1)! / N^{N+j-1} / (2^{2N+j+α} π)
                let d = n + j - 1;
                if d % 2 == 1 {
                    sign = -sign;
                }
                v += log_factorial(d, &PrecisionContext::with_bits(prec)?);
                v -= Float::with_val(prec, &ln_n * d);
                let e = Float::with_val(prec, 2 * n + j) + spec.weight().alpha();
                v -= e * &ln2;
                v -= &ln_pi;
            }
        }
    }
    let ln_2n = Float::with_val(prec, &ln2 + &ln_n);
    for &(q, _) in &blocks {
        for l in 1..=2 * q {
            v += Float::with_val(prec, &ln_2n * (l - 1));
            if (l - 1) % 2 == 1 {
                sign = -sign;
            }
        }
    }
    Ok(LogSigned::new(sign, Float::with_val(ctx.bits(), v)))
}

//! Barnes G on the positive real axis, normalised by G(1) = G(2) = 1 and
//! G(z + 1) = Γ(z) G(z), so that G(n) = 0! 1! ... (n-2)!.

use rug::float::Constant;
use rug::Float;

use super::{LogSigned, PrecisionContext};
use crate::error::{Error, Result};

/// `B_{2n}` from `ζ(2n)`: `B_{2n} = (-1)^{n+1} 2 (2n)! ζ(2n) / (2π)^{2n}`.
fn bernoulli_even(n: u32, prec: u32) -> Float {
    debug_assert!(n >= 1);
    let two_n = 2 * n;
    let zeta = Float::with_val(prec, Float::zeta_u(two_n));
    let fact = Float::with_val(prec, Float::factorial(two_n));
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let denom = Float::with_val(prec, rug::ops::Pow::pow(&two_pi, two_n));
    let b = zeta * fact * 2u32 / denom;
    if n % 2 == 1 {
        b
    } else {
        -b
    }
}

/// `ln A` for the Glaisher–Kinkelin constant, from the hyperfactorial
/// `H(n) = Π k^k` with its Euler–Maclaurin tail.
pub fn ln_glaisher(ctx: &PrecisionContext) -> Float {
    let prec = ctx.guarded();
    // Tail terms bottom out near e^{-2πn}.
    let n = ctx.bits() / 8 + 10;
    let mut ln_h = Float::with_val(prec, 0);
    for k in 2..=n {
        let lk = Float::with_val(prec, k).ln();
        ln_h += lk * k;
    }
    let nf = Float::with_val(prec, n);
    let ln_n = nf.clone().ln();
    let n2 = Float::with_val(prec, &nf * &nf);
    let coeff = Float::with_val(prec, &n2 / 2u32) + Float::with_val(prec, &nf / 2u32)
        + Float::with_val(prec, 1) / 12u32;
    let mut ln_a = ln_h - coeff * &ln_n + Float::with_val(prec, &n2 / 4u32);

    let cutoff = Float::with_val(prec, 1) >> (prec + 8);
    let mut n_pow = n2.clone(); // n^{2j-2}
    for j in 2u32.. {
        let b = bernoulli_even(j, prec);
        let two_j = 2 * j;
        let term = b / (Float::with_val(prec, two_j) * (two_j - 1) * (two_j - 2)) / &n_pow;
        ln_a += &term;
        if term.abs() < cutoff {
            break;
        }
        n_pow *= &n2;
    }
    Float::with_val(ctx.bits(), ln_a)
}

/// `ln G(n)` for integer `n >= 1`: `Σ_{k=1}^{n-2} ln k!`.
pub fn barnes_g_log_int(n: u64, ctx: &PrecisionContext) -> Result<LogSigned> {
    if n == 0 {
        return Err(Error::Domain("Barnes G has a zero at 0".into()));
    }
    let prec = ctx.guarded();
    let mut ln_fact = Float::with_val(prec, 0);
    let mut total = Float::with_val(prec, 0);
    for k in 1..n.saturating_sub(1) {
        ln_fact += Float::with_val(prec, k).ln();
        total += &ln_fact;
    }
    Ok(LogSigned::from_log(Float::with_val(ctx.bits(), total)))
}

/// `ln G(b) - ln G(a) = Σ_{k=a}^{b-1} ln Γ(k)` for positive integers, in
/// either order.
pub fn barnes_g_ratio_log_int(b: u64, a: u64, ctx: &PrecisionContext) -> Result<Float> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("Barnes G ratio needs positive arguments".into()));
    }
    let prec = ctx.guarded();
    let (lo, hi, sign) = if b >= a { (a, b, 1) } else { (b, a, -1) };
    let mut total = Float::with_val(prec, 0);
    for k in lo..hi {
        total += Float::with_val(prec, k).ln_gamma();
    }
    Ok(Float::with_val(ctx.bits(), total * sign))
}

/// `ln G(z + 1)` from the large-z expansion; caller guarantees z is large
/// enough for the series to reach `prec` bits before it starts diverging.
fn ln_g_asymptotic(z: &Float, ln_a: &Float, prec: u32) -> Float {
    let ln_z = Float::with_val(prec, z.ln_ref());
    let z2 = Float::with_val(prec, z * z);
    let ln_2pi = (Float::with_val(prec, Constant::Pi) * 2u32).ln();
    let zeta_prime_m1 = Float::with_val(prec, 1) / 12u32 - ln_a;

    let mut s = Float::with_val(prec, &z2 / 2u32) * &ln_z;
    s -= Float::with_val(prec, &z2 * 3u32) / 4u32;
    s += Float::with_val(prec, z * &ln_2pi) / 2u32;
    s -= Float::with_val(prec, &ln_z / 12u32);
    s += zeta_prime_m1;

    let cutoff = Float::with_val(prec, 1) >> (prec + 8);
    let mut z_pow = z2.clone();
    let mut prev_mag: Option<Float> = None;
    for k in 1u32..4 * prec {
        let b = bernoulli_even(k + 1, prec);
        let term = b / (Float::with_val(prec, 4 * k) * (k + 1)) / &z_pow;
        let mag = Float::with_val(prec, term.abs_ref());
        if let Some(p) = &prev_mag {
            if mag > *p {
                break;
            }
        }
        s += &term;
        if mag < cutoff {
            break;
        }
        prev_mag = Some(mag);
        z_pow *= &z2;
    }
    s
}

/// `ln G(x)` for real `x > 0`.
///
/// Integers go through the exact factorial product. Other arguments are
/// shifted up until the asymptotic expansion of `ln G(z + 1)` converges to
/// working precision, then brought back with `ln G(x) = ln G(x + s) -
/// Σ_{k<s} ln Γ(x + k)`.
pub fn barnes_g_log(x: &Float, ctx: &PrecisionContext) -> Result<LogSigned> {
    if x.is_nan() || *x <= 0 {
        return Err(Error::Domain(format!("Barnes G needs x > 0, got {x}")));
    }
    if x.is_integer() {
        if let Some(n) = x.to_integer().and_then(|i| i.to_u64()) {
            return barnes_g_log_int(n, ctx);
        }
    }
    let prec = ctx.guarded();
    // The expansion's smallest term is about e^{-2πz}.
    let z_min = (f64::from(prec) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI)).ceil() + 8.0;
    let z = Float::with_val(prec, x - 1u32);
    let shift = if z < z_min {
        (z_min - z.to_f64()).ceil() as u32
    } else {
        0
    };
    let mut log_gamma_sum = Float::with_val(prec, 0);
    for k in 0..shift {
        let arg = Float::with_val(prec, x + k);
        log_gamma_sum += arg.ln_gamma();
    }
    let shifted = Float::with_val(prec, &z + shift);
    let ln_a = ln_glaisher(&PrecisionContext::with_bits(prec)?);
    let ln_g = ln_g_asymptotic(&shifted, &ln_a, prec) - log_gamma_sum;
    Ok(LogSigned::from_log(Float::with_val(ctx.bits(), ln_g)))
}

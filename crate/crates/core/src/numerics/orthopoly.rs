//! Monic orthogonal polynomials for the scaled Hermite and Laguerre weights,
//! evaluated together with their derivatives.

use rug::Float;

use super::{taylor, PrecisionContext};
use crate::ensembles::{WeightKind, WeightSpec};
use crate::error::{Error, Result};

/// `[f(μ), f'(μ), ..., f^{(k_max)}(μ)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivStream {
    values: Vec<Float>,
}

impl DerivStream {
    pub fn new(values: Vec<Float>) -> Self {
        assert!(!values.is_empty(), "a derivative stream holds at least f(μ)");
        Self { values }
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self) -> &Float {
        &self.values[0]
    }

    pub fn derivative(&self, k: usize) -> &Float {
        &self.values[k]
    }

    pub fn values(&self) -> &[Float] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Float> {
        self.values
    }
}

/// `(α_k, β_k)` of `π_{k+1}(x) = (x - α_k) π_k(x) - β_k π_{k-1}(x)`.
///
/// Hermite `e^{-2Nx^2}`: `α_k = 0`, `β_k = k / (4N)`.
/// Laguerre `x^a e^{-4Nx}`: `α_k = (2k + a + 1) / (4N)`,
/// `β_k = k (k + a) / (4N)^2`.
pub fn recurrence_coefficients(weight: &WeightSpec, k: u64, prec: u32) -> (Float, Float) {
    let four_n = Float::with_val(prec, weight.n()) * 4u32;
    match weight.kind() {
        WeightKind::Hermite => (
            Float::with_val(prec, 0),
            Float::with_val(prec, k) / &four_n,
        ),
        WeightKind::Laguerre => {
            let a = Float::with_val(prec, weight.alpha());
            let alpha_k = (Float::with_val(prec, 2 * k + 1) + &a) / &four_n;
            let beta_k = Float::with_val(prec, k) * (Float::with_val(prec, k) + &a)
                / Float::with_val(prec, four_n.square_ref());
            (alpha_k, beta_k)
        }
    }
}

/// `π_degree(μ)` and its first `k_max` derivatives.
pub fn orthopoly_eval_derivs(
    weight: &WeightSpec,
    degree: u64,
    mu: &Float,
    k_max: usize,
    ctx: &PrecisionContext,
) -> Result<DerivStream> {
    let mut rows = orthopoly_taylor_rows(weight, degree, degree, mu, k_max, ctx.guarded())?;
    let derivs = taylor::to_derivatives(rows.pop().expect("one row requested"))
        .into_iter()
        .map(|v| Float::with_val(ctx.bits(), v))
        .collect();
    Ok(DerivStream::new(derivs))
}

/// Taylor coefficients in `h` of `π_d(μ + h)` to order `order`, for every
/// degree `d` in `lo..=hi`, from one pass of the recurrence.
pub(crate) fn orthopoly_taylor_rows(
    weight: &WeightSpec,
    lo: u64,
    hi: u64,
    mu: &Float,
    order: usize,
    prec: u32,
) -> Result<Vec<Vec<Float>>> {
    weight.validate()?;
    if !mu.is_finite() {
        return Err(Error::Domain("evaluation point must be finite".into()));
    }
    debug_assert!(lo <= hi);
    let zero_series = || vec![Float::with_val(prec, 0); order + 1];

    let mut prev = zero_series();
    let mut cur = zero_series();
    cur[0] = Float::with_val(prec, 1);
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    if lo == 0 {
        out.push(cur.clone());
    }

    for k in 0..hi {
        let (alpha_k, beta_k) = recurrence_coefficients(weight, k, prec);
        let shift = Float::with_val(prec, mu - &alpha_k);
        let mut next = zero_series();
        for i in 0..=order {
            let mut c = Float::with_val(prec, &shift * &cur[i]);
            if i > 0 {
                c += &cur[i - 1];
            }
            c -= Float::with_val(prec, &beta_k * &prev[i]);
            next[i] = c;
        }
        prev = std::mem::replace(&mut cur, next);
        if k + 1 >= lo {
            out.push(cur.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::WeightSpec;

    #[test]
    fn hermite_degree_one_is_x() {
        let ctx = PrecisionContext::default();
        let w = WeightSpec::hermite(1);
        let s = orthopoly_eval_derivs(&w, 1, &ctx.float(0.7), 3, &ctx).unwrap();
        assert_eq!(s.k_max(), 3);
        assert!((s.value().to_f64() - 0.7).abs() < 1e-30);
        assert!((s.derivative(1).to_f64() - 1.0).abs() < 1e-30);
        assert!(s.derivative(2).is_zero());
    }

    #[test]
    fn hermite_degree_two_at_origin() {
        // ∫x^2 e^{-2x^2} / ∫e^{-2x^2} = Γ(3/2)/2^{3/2} / (Γ(1/2)/2^{1/2}) = 1/4
        let ctx = PrecisionContext::default();
        let w = WeightSpec::hermite(1);
        let s = orthopoly_eval_derivs(&w, 2, &ctx.float(0.0), 2, &ctx).unwrap();
        assert!((s.value().to_f64() + 0.25).abs() < 1e-30);
        assert!((s.derivative(2).to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn laguerre_degree_zero() {
        let ctx = PrecisionContext::default();
        let w = WeightSpec::laguerre(0.5, 3).unwrap();
        let s = orthopoly_eval_derivs(&w, 0, &ctx.float(-4.2), 4, &ctx).unwrap();
        assert_eq!(s.value().to_f64(), 1.0);
        assert!(s.values()[1..].iter().all(Float::is_zero));
    }

    #[test]
    fn laguerre_degree_one_is_shifted_mean() {
        // π_1(x) = x - E[x], E[x] = (α + 1)/(4N)
        let ctx = PrecisionContext::default();
        let w = WeightSpec::laguerre(1.5, 2).unwrap();
        let s = orthopoly_eval_derivs(&w, 1, &ctx.float(0.5), 1, &ctx).unwrap();
        assert!((s.value().to_f64() - (0.5 - 2.5 / 8.0)).abs() < 1e-30);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let ctx = PrecisionContext::default();
        let step = Float::with_val(256, 1) >> 60;
        for w in [WeightSpec::hermite(3), WeightSpec::laguerre(0.7, 2).unwrap()] {
            for degree in [1u64, 5, 12, 20] {
                let mu = ctx.float(0.37);
                let at = |x: &Float| orthopoly_eval_derivs(&w, degree, x, 4, &ctx).unwrap();
                let plus = at(&Float::with_val(256, &mu + &step));
                let minus = at(&Float::with_val(256, &mu - &step));
                let centre = at(&mu);
                for k in 0..4 {
                    let fd = Float::with_val(256, plus.derivative(k) - minus.derivative(k))
                        / Float::with_val(256, &step * 2u32);
                    let want = centre.derivative(k + 1);
                    let scale = Float::with_val(256, want.abs_ref()).max(&Float::with_val(256, 1e-30));
                    let rel = Float::with_val(256, fd - want).abs() / scale;
                    assert!(rel < 1e-10, "{:?} degree {degree} k {k}: {rel}", w.kind());
                }
            }
        }
    }

    #[test]
    fn taylor_rows_agree_with_single_degree() {
        let ctx = PrecisionContext::default();
        let w = WeightSpec::hermite(4);
        let mu = ctx.float(-0.2);
        let rows = orthopoly_taylor_rows(&w, 3, 6, &mu, 2, 288).unwrap();
        assert_eq!(rows.len(), 4);
        for (i, row) in rows.iter().enumerate() {
            let s = orthopoly_eval_derivs(&w, 3 + i as u64, &mu, 2, &ctx).unwrap();
            let d = Float::with_val(256, &row[0] - s.value()).abs();
            assert!(d < 1e-60);
        }
        let rows = orthopoly_taylor_rows(&w, 0, 1, &mu, 1, 128).unwrap();
        assert_eq!(rows[0][0].to_f64(), 1.0);
    }
}

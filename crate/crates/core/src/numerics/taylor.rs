//! Truncated Taylor series `Σ c_k h^k` with multiprecision coefficients.

use rug::Float;

pub(crate) fn mul(a: &[Float], b: &[Float], order: usize, prec: u32) -> Vec<Float> {
    (0..=order)
        .map(|k| {
            let mut acc = Float::with_val(prec, 0);
            for j in 0..=k {
                if let (Some(x), Some(y)) = (a.get(j), b.get(k - j)) {
                    acc += Float::with_val(prec, x * y);
                }
            }
            acc
        })
        .collect()
}

/// Coefficients of `exp(f)` where `f` is given by its Taylor coefficients.
pub(crate) fn exp(f: &[Float], order: usize, prec: u32) -> Vec<Float> {
    let mut g = Vec::with_capacity(order + 1);
    let f0 = f.first().map_or_else(|| Float::with_val(prec, 0), |v| v.clone());
    g.push(Float::with_val(prec, f0.exp_ref()));
    for k in 1..=order {
        let mut acc = Float::with_val(prec, 0);
        for j in 1..=k {
            if let Some(fj) = f.get(j) {
                acc += Float::with_val(prec, fj * &g[k - j]) * j as u32;
            }
        }
        g.push(acc / k as u32);
    }
    g
}

/// Taylor coefficients to derivatives: `f^{(k)} = k! c_k`.
pub(crate) fn to_derivatives(coeffs: Vec<Float>) -> Vec<Float> {
    let mut fact = 1u64;
    coeffs
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 1 {
                fact *= k as u64;
            }
            c * fact
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_linear_is_exponential_series() {
        // exp(2h) = Σ 2^k h^k / k!
        let f = vec![Float::with_val(128, 0), Float::with_val(128, 2)];
        let g = exp(&f, 5, 128);
        let want = [1.0, 2.0, 2.0, 4.0 / 3.0, 2.0 / 3.0, 4.0 / 15.0];
        for (c, w) in g.iter().zip(want) {
            assert!((c.to_f64() - w).abs() < 1e-15);
        }
    }

    #[test]
    fn derivatives_of_product() {
        // (1 + h)^2 = 1 + 2h + h^2: derivatives 1, 2, 2
        let a = vec![Float::with_val(64, 1), Float::with_val(64, 1)];
        let p = mul(&a, &a, 3, 64);
        let d = to_derivatives(p);
        let got: Vec<f64> = d.iter().map(Float::to_f64).collect();
        assert_eq!(got, vec![1.0, 2.0, 2.0, 0.0]);
    }
}

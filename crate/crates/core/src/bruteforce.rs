//! Direct quadrature of the multiple integrals, independent of moments,
//! recurrences and determinants. Only practical for a handful of
//! dimensions; used as a reference by checks.
//!
//! Every rule is a trapezoid rule on the real line, which converges
//! geometrically for these analytic, rapidly decaying integrands. The
//! Laguerre half-line is mapped to ℝ by `x = e^s`.

use rug::Float;

use crate::ensembles::{WeightKind, WeightSpec};
use crate::error::{Error, Result};

/// Nodes `x_k` and weights `w_k` with `Σ w_k f(x_k) ≈ ∫ f(x) ω(x) dx`.
#[derive(Debug, Clone)]
pub struct LineRule {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl LineRule {
    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Rule for `∫ f(x) e^{-a x²} dx`.
pub fn gaussian_rule(a: f64, prec: u32) -> Result<LineRule> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("Gaussian rule needs a > 0, got {a}")));
    }
    let sigma = (0.5 / a).sqrt();
    let h = Float::with_val(prec, 0.4 * sigma);
    let half = 32i32;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for k in -half..=half {
        let x = Float::with_val(prec, &h * k);
        let e = Float::with_val(prec, x.square_ref()) * (-a);
        weights.push(e.exp() * &h);
        nodes.push(x);
    }
    Ok(LineRule { nodes, weights })
}

/// Rule for `∫_Ω f(x) ω_N(x) dx`.
pub fn weight_rule(weight: &WeightSpec, prec: u32) -> Result<LineRule> {
    weight.validate()?;
    match weight.kind() {
        WeightKind::Hermite => gaussian_rule(2.0 * weight.n() as f64, prec),
        WeightKind::Laguerre => {
            let a1 = weight.alpha() + 1.0;
            let n4 = 4.0 * weight.n() as f64;
            let h = 0.1;
            let s_lo = -80.0 / a1;
            let s_hi = (110.0 / n4).ln();
            let k_lo = (s_lo / h).floor() as i64;
            let k_hi = (s_hi / h).ceil() as i64;
            let hf = Float::with_val(prec, h);
            let alpha = Float::with_val(prec, weight.alpha());
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            for k in k_lo..=k_hi {
                let s = Float::with_val(prec, &hf * k);
                let x = Float::with_val(prec, s.exp_ref());
                // ω(x) dx = exp((α + 1) s - 4N x) ds
                let log_w = Float::with_val(prec, &s * &alpha) + &s - Float::with_val(prec, &x * n4);
                weights.push(log_w.exp() * &hf);
                nodes.push(x);
            }
            Ok(LineRule { nodes, weights })
        }
    }
}

/// `∫ f(x_1..x_d) Π w(x_l) dx` on the tensor grid of `rule`.
pub fn tensor_integral<F>(rule: &LineRule, dim: usize, prec: u32, mut f: F) -> Float
where
    F: FnMut(&[Float]) -> Float,
{
    let n = rule.len();
    let mut total = Float::with_val(prec, 0);
    if dim == 0 {
        return f(&[]) + total;
    }
    let mut idx = vec![0usize; dim];
    let mut point: Vec<Float> = vec![rule.nodes[0].clone(); dim];
    loop {
        let mut w = Float::with_val(prec, 1);
        for (slot, &i) in idx.iter().enumerate() {
            point[slot].clone_from(&rule.nodes[i]);
            w *= &rule.weights[i];
        }
        total += f(&point) * w;
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == dim {
                return total;
            }
        }
    }
}

/// `Δ(x)² = Π_{j<k} (x_k - x_j)²`.
pub fn vandermonde_sq(x: &[Float], prec: u32) -> Float {
    let mut v = Float::with_val(prec, 1);
    for k in 0..x.len() {
        for j in 0..k {
            let d = Float::with_val(prec, &x[k] - &x[j]);
            v *= d.square();
        }
    }
    v
}

/// `∫_{Ω^M} Δ_M(x)² Π_l ω_N(x_l) Π_i |μ_i - x_l|^{2 q_i} d^M x` by brute
/// force. Integer `q` only (so the symbol is a polynomial).
pub fn heine_integral(
    weight: &WeightSpec,
    size: usize,
    q: &[u64],
    mu: &[f64],
    prec: u32,
) -> Result<Float> {
    if q.len() != mu.len() {
        return Err(Error::Precondition("q and mu lengths differ".into()));
    }
    if size > 3 {
        return Err(Error::Unsupported(format!(
            "brute-force quadrature is limited to 3 dimensions, got {size}"
        )));
    }
    let rule = weight_rule(weight, prec)?;
    let mus: Vec<Float> = mu.iter().map(|&m| Float::with_val(prec, m)).collect();
    Ok(tensor_integral(&rule, size, prec, |x| {
        let mut v = vandermonde_sq(x, prec);
        for xl in x {
            for (mi, &qi) in mus.iter().zip(q) {
                let d = Float::with_val(prec, mi - xl);
                v *= Float::with_val(prec, d.square_ref()).pow_u(qi);
            }
        }
        v
    }))
}

trait PowU {
    fn pow_u(self, k: u64) -> Float;
}

impl PowU for Float {
    fn pow_u(self, k: u64) -> Float {
        let mut acc = Float::with_val(self.prec(), 1);
        for _ in 0..k {
            acc *= &self;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mass() {
        let r = gaussian_rule(1.0, 256).unwrap();
        let v = tensor_integral(&r, 1, 256, |_| Float::with_val(256, 1));
        let want = Float::with_val(256, rug::float::Constant::Pi).sqrt();
        assert!(Float::with_val(256, v - want).abs() < 1e-28);
    }

    #[test]
    fn laguerre_mass() {
        // ∫ x^{1.5} e^{-8x} dx = Γ(2.5) / 8^{2.5}
        let w = WeightSpec::laguerre(1.5, 2).unwrap();
        let r = weight_rule(&w, 256).unwrap();
        let v = tensor_integral(&r, 1, 256, |_| Float::with_val(256, 1));
        let want = Float::with_val(256, 2.5).gamma() / Float::with_val(256, 8).pow_u(2) / Float::with_val(256, 8).sqrt();
        let rel = Float::with_val(256, v / want - 1u32).abs();
        assert!(rel < 1e-25, "{rel}");
    }

    #[test]
    fn two_point_selberg() {
        // ∫∫ (x - y)² e^{-x² - y²} = π
        let r = gaussian_rule(1.0, 128).unwrap();
        let v = tensor_integral(&r, 2, 128, |x| vandermonde_sq(x, 128));
        assert!((v.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_high_dimension() {
        assert!(heine_integral(&WeightSpec::hermite(1), 4, &[], &[], 64).is_err());
    }
}

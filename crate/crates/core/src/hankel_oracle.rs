//! Exact finite-size evaluation through the Heine identity
//! `H_{M,N}[a] = M! det[a_{j+k}]_{j,k<M}` with closed-form moments.
//!
//! This is the slow reference path: the Hankel matrices are badly
//! conditioned, so sizes above [`MAX_ORACLE_SIZE`] are refused.

use rug::Float;

use crate::ensembles::{SymbolSpec, WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::numerics::{det_log, log_factorial, with_escalation, LogSigned, PrecisionContext};

/// Largest Hankel determinant the oracle will attempt.
pub const MAX_ORACLE_SIZE: u64 = 40;

/// Coefficients of `Π (μ_i - x)^{2 q_i}` in increasing powers of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPoly {
    coeffs: Vec<Float>,
}

impl SymbolPoly {
    pub fn one(prec: u32) -> Self {
        Self {
            coeffs: vec![Float::with_val(prec, 1)],
        }
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Float) -> Float {
        let prec = self.coeffs[0].prec();
        let mut acc = Float::with_val(prec, 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

pub fn symbol_poly(q: &[u64], mu: &[f64], prec: u32) -> Result<SymbolPoly> {
    if q.len() != mu.len() {
        return Err(Error::Precondition("q and mu lengths differ".into()));
    }
    let mut coeffs = vec![Float::with_val(prec, 1)];
    for (&qi, &mi) in q.iter().zip(mu) {
        let m = Float::with_val(prec, mi);
        for _ in 0..2 * qi {
            // multiply by (μ - x)
            let mut next = vec![Float::with_val(prec, 0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] += Float::with_val(prec, c * &m);
                next[k + 1] -= c;
            }
            coeffs = next;
        }
    }
    Ok(SymbolPoly { coeffs })
}

#[derive(Debug, Clone, PartialEq)]
enum Recipe {
    Base,
    Symbol { q: Vec<u64>, mu: Vec<f64> },
    Given,
}

/// Moments `a_n = ∫ x^n (symbol) ω_N(x) dx` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    weight: WeightSpec,
    values: Vec<Float>,
    recipe: Recipe,
}

impl MomentTable {
    /// A table of externally supplied moments. Such a table cannot be
    /// regenerated at higher precision, so determinants of it are not
    /// escalated.
    pub fn from_values(weight: WeightSpec, values: Vec<Float>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("a moment table needs at least a_0".into()));
        }
        Ok(Self {
            weight,
            values,
            recipe: Recipe::Given,
        })
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn values(&self) -> &[Float] {
        &self.values
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn symbol_applied(&self) -> bool {
        !matches!(self.recipe, Recipe::Base)
    }

    fn prec(&self) -> u32 {
        self.values[0].prec()
    }

    fn regenerate(&self, ctx: &PrecisionContext) -> Result<Self> {
        match &self.recipe {
            Recipe::Base => base_moments(&self.weight, self.n_max(), ctx),
            Recipe::Symbol { q, mu } => {
                let poly = symbol_poly(q, mu, ctx.guarded())?;
                let base = base_moments(&self.weight, self.n_max() + poly.degree(), ctx)?;
                let mut t = symbol_moments(&base, &poly)?;
                t.recipe = self.recipe.clone();
                Ok(t)
            }
            Recipe::Given => Ok(self.clone()),
        }
    }
}

/// Closed-form moments of the bare weight. Hermite:
/// `a_{2s} = Γ(s + 1/2) / (2N)^{s + 1/2}`, odd moments vanish. Laguerre:
/// `a_n = Γ(α + n + 1) / (4N)^{α + n + 1}`.
pub fn base_moments(weight: &WeightSpec, n_max: usize, ctx: &PrecisionContext) -> Result<MomentTable> {
    weight.validate()?;
    let prec = ctx.guarded();
    let mut values = Vec::with_capacity(n_max + 1);
    match weight.kind() {
        WeightKind::Hermite => {
            let two_n = Float::with_val(prec, weight.n()) * 2u32;
            let half = Float::with_val(prec, 0.5);
            let mut even = Float::with_val(prec, half.gamma_ref()) / Float::with_val(prec, two_n.sqrt_ref());
            for n in 0..=n_max {
                if n % 2 == 1 {
                    values.push(Float::with_val(prec, 0));
                    continue;
                }
                values.push(even.clone());
                let s = (n / 2) as u32;
                even *= Float::with_val(prec, s) + &half;
                even /= &two_n;
            }
        }
        WeightKind::Laguerre => {
            let four_n = Float::with_val(prec, weight.n()) * 4u32;
            let a1 = Float::with_val(prec, weight.alpha()) + 1u32;
            let mut cur = Float::with_val(prec, a1.ln_gamma_ref())
                - Float::with_val(prec, four_n.ln_ref()) * &a1;
            cur.exp_mut();
            for n in 0..=n_max {
                values.push(cur.clone());
                cur *= Float::with_val(prec, &a1 + n as u32);
                cur /= &four_n;
            }
        }
    }
    Ok(MomentTable {
        weight: *weight,
        values,
        recipe: Recipe::Base,
    })
}

/// `a_n = Σ_k c_k b_{n+k}` for symbol coefficients `c` and base moments `b`.
pub fn symbol_moments(base: &MomentTable, poly: &SymbolPoly) -> Result<MomentTable> {
    let deg = poly.degree();
    if base.values.len() <= deg {
        return Err(Error::Precondition(format!(
            "base moments reach index {} but the symbol has degree {deg}",
            base.n_max()
        )));
    }
    let prec = base.prec();
    let n_out = base.values.len() - deg;
    let values = (0..n_out)
        .map(|n| {
            let mut acc = Float::with_val(prec, 0);
            for (k, c) in poly.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc += Float::with_val(prec, c * &base.values[n + k]);
                }
            }
            acc
        })
        .collect();
    Ok(MomentTable {
        weight: base.weight,
        values,
        recipe: Recipe::Given,
    })
}

fn plain_hankel_det(table: &MomentTable, size: usize, prec: u32) -> Result<LogSigned> {
    let m = (0..size)
        .map(|j| (0..size).map(|k| table.values[j + k].clone()).collect())
        .collect();
    det_log(m, prec)
}

/// `ln det[a_{j+k}]_{j,k=0}^{M-1}` with precision escalation when the
/// table knows how to regenerate itself.
pub fn hankel_det_log(moments: &MomentTable, size: usize, ctx: &PrecisionContext) -> Result<LogSigned> {
    if size == 0 {
        return Ok(LogSigned::one(ctx.bits()));
    }
    if moments.values.len() < 2 * size - 1 {
        return Err(Error::Precondition(format!(
            "a {size}x{size} Hankel determinant needs moments up to index {}, table stops at {}",
            2 * size - 2,
            moments.n_max()
        )));
    }
    if size as u64 > MAX_ORACLE_SIZE {
        return Err(Error::Conditioning(format!(
            "Hankel determinant of size {size} exceeds the oracle limit {MAX_ORACLE_SIZE}"
        )));
    }
    if moments.recipe == Recipe::Given {
        let prec = moments.prec();
        return Ok(plain_hankel_det(moments, size, prec)?.round_to(ctx.bits()));
    }
    with_escalation(ctx, "Hankel determinant", |c| {
        let t = if c.guarded() == moments.prec() {
            moments.clone()
        } else {
            moments.regenerate(c)?
        };
        plain_hankel_det(&t, size, c.guarded())
    })
}

fn symbol_table(spec: &SymbolSpec, size: usize, ctx: &PrecisionContext) -> Result<MomentTable> {
    let blocks = spec.integer_blocks()?;
    let (q, mu): (Vec<u64>, Vec<f64>) = blocks.into_iter().unzip();
    let poly = symbol_poly(&q, &mu, ctx.guarded())?;
    let need = (2 * size).saturating_sub(1).max(1);
    let base = base_moments(spec.weight(), need - 1 + poly.degree(), ctx)?;
    let mut t = symbol_moments(&base, &poly)?;
    t.recipe = Recipe::Symbol { q, mu };
    Ok(t)
}

/// `ln H_{M,N,m,q}(μ) = ln M! + ln det[a_{j+k}]` for the symbol of `spec`.
pub fn h_multiple_integral_log(size: u64, spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    spec.integer_q()?;
    if size > MAX_ORACLE_SIZE {
        return Err(Error::Conditioning(format!(
            "Hankel determinant of size {size} exceeds the oracle limit {MAX_ORACLE_SIZE}"
        )));
    }
    let table = symbol_table(spec, size as usize, ctx)?;
    let det = hankel_det_log(&table, size as usize, ctx)?;
    Ok(det.scale_log(&log_factorial(size, ctx)))
}

/// `ln ℋ_{N,m,q}(μ) = ln H_{N,N,m,q}(μ) - ln H_{N+|q|,N}`.
pub fn calh_oracle(spec: &SymbolSpec, ctx: &PrecisionContext) -> Result<LogSigned> {
    let q = spec.integer_q()?;
    let n = spec.n();
    let total: u64 = q.iter().sum();
    if total == 0 {
        return Ok(LogSigned::one(ctx.bits()));
    }
    let num = h_multiple_integral_log(n, spec, ctx)?;
    let den = h_multiple_integral_log(n + total, &SymbolSpec::empty(*spec.weight()), ctx)?;
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruteforce::heine_integral;
    use crate::ensembles::{opnorm_h_log, selberg_ratio_log};
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn coeffs_f64(p: &SymbolPoly) -> Vec<f64> {
        p.coeffs().iter().map(Float::to_f64).collect()
    }

    fn rel(a: &LogSigned, b: &Float) -> f64 {
        let v = a.to_float(256);
        Float::with_val(256, v / b - 1u32).abs().to_f64()
    }

    #[test]
    fn symbol_poly_examples() {
        assert_eq!(coeffs_f64(&symbol_poly(&[1], &[0.0], 64).unwrap()), vec![0.0, 0.0, 1.0]);
        assert_eq!(coeffs_f64(&symbol_poly(&[1], &[2.0], 64).unwrap()), vec![4.0, -4.0, 1.0]);
        assert_eq!(
            coeffs_f64(&symbol_poly(&[1, 1], &[1.0, -1.0], 64).unwrap()),
            vec![1.0, 0.0, -2.0, 0.0, 1.0]
        );
    }

    #[test]
    fn base_moment_examples() {
        let c = ctx();
        let h = base_moments(&WeightSpec::hermite(1), 3, &c).unwrap();
        let s = (std::f64::consts::PI / 2.0).sqrt();
        assert!((h.values()[0].to_f64() - s).abs() < 1e-15);
        assert!(h.values()[1].is_zero() && h.values()[3].is_zero());
        assert!((h.values()[2].to_f64() - s / 4.0).abs() < 1e-15);
        assert!(!h.symbol_applied());
        let l = base_moments(&WeightSpec::laguerre(0.0, 1).unwrap(), 1, &c).unwrap();
        assert!((l.values()[1].to_f64() - 1.0 / 16.0).abs() < 1e-17);
    }

    #[test]
    fn symbol_moment_examples() {
        let c = ctx();
        let base = base_moments(&WeightSpec::hermite(1), 6, &c).unwrap();
        let id = symbol_moments(&base, &SymbolPoly::one(256)).unwrap();
        assert_eq!(id.values(), base.values());
        let s = (std::f64::consts::PI / 2.0).sqrt();
        let t = symbol_moments(&base, &symbol_poly(&[1], &[0.0], 256).unwrap()).unwrap();
        assert!((t.values()[0].to_f64() - s / 4.0).abs() < 1e-15);
        assert!(t.symbol_applied());
        let t = symbol_moments(&base, &symbol_poly(&[1], &[0.5], 256).unwrap()).unwrap();
        assert!((t.values()[0].to_f64() - s / 2.0).abs() < 1e-15);
        let short = base_moments(&WeightSpec::hermite(1), 1, &c).unwrap();
        assert!(symbol_moments(&short, &symbol_poly(&[1], &[0.0], 256).unwrap()).is_err());
    }

    #[test]
    fn hankel_small() {
        let c = ctx();
        let base = base_moments(&WeightSpec::hermite(1), 4, &c).unwrap();
        let d1 = hankel_det_log(&base, 1, &c).unwrap();
        assert!((d1.to_f64() - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-15);
        let d2 = hankel_det_log(&base, 2, &c).unwrap();
        assert!((d2.to_f64() - std::f64::consts::PI / 8.0).abs() < 1e-15);
        assert!(hankel_det_log(&base, 4, &c).is_err());
    }

    #[test]
    fn oracle_refuses_large_sizes() {
        let c = ctx();
        let s = SymbolSpec::new(WeightSpec::hermite(40), vec![1.0], vec![0.1]).unwrap();
        assert!(matches!(calh_oracle(&s, &c), Err(Error::Conditioning(_))));
        let s = SymbolSpec::new(WeightSpec::hermite(4), vec![0.5], vec![0.1]).unwrap();
        assert!(matches!(calh_oracle(&s, &c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn multiple_integral_examples() {
        let c = ctx();
        let s = (std::f64::consts::PI / 2.0).sqrt();
        let w = WeightSpec::hermite(1);
        let spec = SymbolSpec::new(w, vec![1.0], vec![0.0]).unwrap();
        assert!((h_multiple_integral_log(1, &spec, &c).unwrap().to_f64() - s / 4.0).abs() < 1e-15);
        let spec = SymbolSpec::new(w, vec![1.0], vec![0.8]).unwrap();
        let want = s * (0.64 + 0.25);
        assert!((h_multiple_integral_log(1, &spec, &c).unwrap().to_f64() - want).abs() < 1e-15);
        let empty = SymbolSpec::empty(w);
        assert!((h_multiple_integral_log(1, &empty, &c).unwrap().to_f64() - s).abs() < 1e-15);
    }

    #[test]
    fn multiple_integral_matches_quadrature() {
        let c = ctx();
        let cases: Vec<(WeightSpec, Vec<u64>, Vec<f64>)> = vec![
            (WeightSpec::hermite(1), vec![1], vec![0.3]),
            (WeightSpec::hermite(3), vec![2, 1], vec![-0.4, 0.5]),
            (WeightSpec::laguerre(0.0, 2).unwrap(), vec![1], vec![0.5]),
            (WeightSpec::laguerre(1.5, 1).unwrap(), vec![1, 1], vec![0.2, 0.7]),
        ];
        for (w, q, mu) in cases {
            let spec = SymbolSpec::new(w, q.iter().map(|&x| x as f64).collect(), mu.clone()).unwrap();
            for size in 1..=2u64 {
                let exact = h_multiple_integral_log(size, &spec, &c).unwrap();
                let brute = heine_integral(&w, size as usize, &q, &mu, 256).unwrap();
                let e = rel(&exact, &brute);
                assert!(e < 1e-20, "{:?} size {size}: {e}", w.kind());
            }
        }
    }

    #[test]
    fn empty_ratio_is_one_and_n1_example() {
        let c = ctx();
        let w = WeightSpec::hermite(1);
        let s = SymbolSpec::new(w, vec![0.0], vec![0.2]).unwrap();
        assert!(calh_oracle(&s, &c).unwrap().log_mag().is_zero());
        let s = SymbolSpec::new(w, vec![1.0], vec![0.0]).unwrap();
        let h21 = heine_integral(&w, 2, &[], &[], 256).unwrap();
        let pi = Float::with_val(256, rug::float::Constant::Pi);
        let want = (pi / 2u32).sqrt() / 4u32 / h21;
        assert!(rel(&calh_oracle(&s, &c).unwrap(), &want) < 1e-20);
    }

    #[test]
    fn moment_determinants_are_norm_products() {
        let c = ctx();
        for w in [WeightSpec::hermite(3), WeightSpec::laguerre(0.5, 2).unwrap()] {
            let base = base_moments(&w, 12, &c).unwrap();
            let mut acc = LogSigned::one(256);
            for size in 1..=6usize {
                acc = acc.mul(&opnorm_h_log(&w, size as u64 - 1, &c).unwrap());
                let d = hankel_det_log(&base, size, &c).unwrap();
                assert!(d.log_distance(&acc) < Float::with_val(256, 1) >> 128);
            }
        }
    }

    #[test]
    fn selberg_ratio_matches_moment_route() {
        let c = ctx();
        for w in [
            WeightSpec::hermite(1),
            WeightSpec::laguerre(0.0, 1).unwrap(),
            WeightSpec::laguerre(1.5, 1).unwrap(),
        ] {
            for n in 1..=6u64 {
                let w = w.with_n(n);
                let empty = SymbolSpec::empty(w);
                let hn = h_multiple_integral_log(n, &empty, &c).unwrap();
                for p in 0..=3u64 {
                    let hp = h_multiple_integral_log(n + p, &empty, &c).unwrap();
                    let want = hn.div(&hp).unwrap();
                    let got = selberg_ratio_log(&w, n, p, &c).unwrap();
                    assert!(got.log_distance(&want) < Float::with_val(256, 1) >> 128, "{w:?} p={p}");
                }
            }
        }
    }

    #[test]
    fn selberg_ratio_small_examples() {
        // Hermite N = 1, p = 1: H_{1,1} = √(π/2), H_{2,1} by 2D quadrature
        let c = ctx();
        for w in [WeightSpec::hermite(1), WeightSpec::laguerre(0.0, 1).unwrap()] {
            let h1 = heine_integral(&w, 1, &[], &[], 256).unwrap();
            let h2 = heine_integral(&w, 2, &[], &[], 256).unwrap();
            let got = selberg_ratio_log(&w, 1, 1, &c).unwrap();
            assert!(rel(&got, &(h1 / h2)) < 1e-20);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn positive_and_hermite_even(n in 1u64..6, q1 in 1u64..3, q2 in 0u64..2,
                                     m1 in -0.9f64..0.9, m2 in -0.9f64..0.9) {
            prop_assume!((m1 - m2).abs() > 1e-3);
            let c = ctx();
            let w = WeightSpec::hermite(n);
            let s = SymbolSpec::new(w, vec![q1 as f64, q2 as f64], vec![m1, m2]).unwrap();
            let v = calh_oracle(&s, &c).unwrap();
            prop_assert_eq!(v.sign(), 1);
            let flipped = SymbolSpec::new(w, vec![q1 as f64, q2 as f64], vec![-m1, -m2]).unwrap();
            let tol = Float::with_val(256, 1) >> 128;
            prop_assert!(calh_oracle(&flipped, &c).unwrap().log_distance(&v) < tol);
            let swapped = SymbolSpec::new(w, vec![q2 as f64, q1 as f64], vec![m2, m1]).unwrap();
            prop_assert!(calh_oracle(&swapped, &c).unwrap().log_distance(&v) < tol);
        }

        #[test]
        fn symbol_poly_is_monic_and_evaluates(q1 in 0u64..3, q2 in 0u64..3,
                                             m1 in -2.0f64..2.0, m2 in -2.0f64..2.0, x in -3.0f64..3.0) {
            let p = symbol_poly(&[q1, q2], &[m1, m2], 256).unwrap();
            prop_assert_eq!(p.degree() as u64, 2 * (q1 + q2));
            prop_assert_eq!(p.coeffs().last().unwrap().to_f64(), 1.0);
            let want = (m1 - x).abs().powi(2 * q1 as i32) * (m2 - x).abs().powi(2 * q2 as i32);
            let got = p.eval(&Float::with_val(256, x)).to_f64();
            prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0));
        }
    }
}

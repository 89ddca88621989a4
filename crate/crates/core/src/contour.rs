//! The dual `2|q|`-fold contour integral, evaluated by direct tensor
//! quadrature in complex double precision with compensated accumulation,
//! plus the contour representation of the monic orthogonal polynomials.
//!
//! Large factors are removed per block before summation: every node value
//! is stored as `exp(log f - L_i)` with a block scale `L_i` fixed on the
//! coarsest rule, and results are returned as `e^{log_scale} · value`.

use std::f64::consts::{LN_2, PI};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;

use crate::duality::{cross_vandermonde_log, h_prefactor_log};
use crate::ensembles::{zeta_log, SymbolSpec, WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::numerics::{barnes_g_log_int, log_factorial, orthopoly_eval_derivs, LogSigned, PrecisionContext};

const BASE_NODES: usize = 32;
const ACCEPT_TOL: f64 = 1e-8;
const MAX_DOUBLINGS: u32 = 7;
const TENSOR_BUDGET: f64 = 4e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourKind {
    /// `z = i t`, `t ∈ [-t_max, t_max]`, upward.
    ImaginaryAxis { t_max: f64, nodes: usize },
    /// `z = re + i t`, upward. Through both saddles when `re = μ`.
    VerticalLine { re: f64, t_max: f64, nodes: usize },
    /// `|z| = radius`, counter-clockwise.
    Circle { radius: f64, nodes: usize },
}

/// Contour and starting node count. Nodes are doubled until the result
/// stabilises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    kind: ContourKind,
}

/// Half-length keeping the tail below `2^{-bits}` of the peak at `|t| ≈ 1`:
/// `|t|^N e^{-Nt²/2}` falls by at least `e^{-0.7 N s²}` at `|t| = 1 + s`
/// for `s ≤ 2`. The sums run in double precision, so `bits` is capped at 64.
fn default_t_max(n: u64, bits: u32) -> f64 {
    1.0 + (bits.min(64) as f64 * LN_2 / (0.7 * n as f64)).sqrt()
}

impl ContourSpec {
    pub fn new(kind: ContourKind) -> Result<Self> {
        let (ok, nodes) = match kind {
            ContourKind::ImaginaryAxis { t_max, nodes } => (t_max > 0.0 && t_max.is_finite(), nodes),
            ContourKind::VerticalLine { re, t_max, nodes } => {
                (re.is_finite() && t_max > 0.0 && t_max.is_finite(), nodes)
            }
            ContourKind::Circle { radius, nodes } => (radius > 0.0 && radius < 2.0, nodes),
        };
        if !ok || nodes < 2 {
            return Err(Error::Domain(format!("invalid contour {kind:?}")));
        }
        Ok(ContourSpec { kind })
    }

    pub fn imaginary_axis(n: u64, bits: u32) -> Self {
        ContourSpec {
            kind: ContourKind::ImaginaryAxis {
                t_max: default_t_max(n, bits),
                nodes: BASE_NODES,
            },
        }
    }

    /// Vertical line through the saddles of `S(·, μ)`.
    pub fn saddle_line(mu: f64, n: u64, bits: u32) -> Self {
        ContourSpec {
            kind: ContourKind::VerticalLine {
                re: mu,
                t_max: default_t_max(n, bits),
                nodes: BASE_NODES,
            },
        }
    }

    pub fn unit_circle() -> Self {
        ContourSpec {
            kind: ContourKind::Circle { radius: 1.0, nodes: BASE_NODES },
        }
    }

    /// Imaginary axis for Hermite, unit circle for Laguerre.
    pub fn default_for(weight: &WeightSpec, bits: u32) -> Self {
        match weight.kind() {
            WeightKind::Hermite => Self::imaginary_axis(weight.n(), bits),
            WeightKind::Laguerre => Self::unit_circle(),
        }
    }

    pub fn kind(&self) -> ContourKind {
        self.kind
    }

    fn check_weight(&self, kind: WeightKind) -> Result<()> {
        let ok = matches!(
            (kind, self.kind),
            (WeightKind::Hermite, ContourKind::ImaginaryAxis { .. })
                | (WeightKind::Hermite, ContourKind::VerticalLine { .. })
                | (WeightKind::Laguerre, ContourKind::Circle { .. })
        );
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("contour {:?} does not suit the {kind} weight", self.kind)))
        }
    }

    fn base_nodes(&self) -> usize {
        match self.kind {
            ContourKind::ImaginaryAxis { nodes, .. }
            | ContourKind::VerticalLine { nodes, .. }
            | ContourKind::Circle { nodes, .. } => nodes,
        }
    }

    /// Nodes `z_k` and `w_k · dz/ds` after `level` doublings.
    fn rule(&self, level: u32) -> Rule {
        let n = self.base_nodes() << level;
        match self.kind {
            ContourKind::ImaginaryAxis { t_max, .. } => line_rule(0.0, t_max, n),
            ContourKind::VerticalLine { re, t_max, .. } => line_rule(re, t_max, n),
            ContourKind::Circle { radius, .. } => {
                let h = 2.0 * PI / n as f64;
                let (z, dz) = (0..n)
                    .map(|k| {
                        let z = Complex64::from_polar(radius, h * k as f64);
                        (z, Complex64::i() * z * h)
                    })
                    .unzip();
                Rule { z, dz }
            }
        }
    }
}

struct Rule {
    z: Vec<Complex64>,
    dz: Vec<Complex64>,
}

/// Gauss-Legendre of order `n` on `re + i[-t_max, t_max]`. The integrands
/// are entire along the segment, so one high-order rule beats panels.
fn line_rule(re: f64, t_max: f64, n: usize) -> Rule {
    let gl = GaussLegendre::new(NonZeroUsize::new(n).expect("nonzero"));
    let (z, dz) = gl
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (Complex64::new(re, t_max * x), Complex64::new(0.0, t_max * w)))
        .unzip();
    Rule { z, dz }
}

/// `e^{log_scale} · value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub log_scale: f64,
    pub value: Complex64,
}

impl ScaledComplex {
    pub fn ln_abs(&self) -> f64 {
        self.log_scale + self.value.norm().ln()
    }

    /// `|Im| / |value|`.
    pub fn imag_residue(&self) -> f64 {
        self.value.im.abs() / self.value.norm()
    }

    fn rel_change(&self, other: &Self) -> f64 {
        let b = other.value * (other.log_scale - self.log_scale).exp();
        (self.value - b).norm() / self.value.norm()
    }
}

/// Neumaier-compensated complex sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    fn merge(&mut self, other: &Self) {
        self.add(Complex64::new(other.re.0, other.im.0));
        self.add(Complex64::new(other.re.1, other.im.1));
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Principal-branch action `S(z, μ)`: Hermite `2μz - log z - z²/2`,
/// Laguerre `2μz + log z - log(z + 2)`.
pub fn action_s(kind: WeightKind, z: Complex64, mu: f64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) || (kind == WeightKind::Laguerre && z == Complex64::new(-2.0, 0.0)) {
        return Err(Error::Domain(format!("action is singular at z = {z}")));
    }
    Ok(match kind {
        WeightKind::Hermite => 2.0 * mu * z - z.ln() - z * z / 2.0,
        WeightKind::Laguerre => 2.0 * mu * z + z.ln() - (z + 2.0).ln(),
    })
}

/// `ln g_q(z)`: 0 (Hermite) or `ln i + α ln(z+2) - 2q ln z` (Laguerre).
fn ln_g(weight: &WeightSpec, q: u64, z: Complex64) -> Complex64 {
    match weight.kind() {
        WeightKind::Hermite => Complex64::new(0.0, 0.0),
        WeightKind::Laguerre => {
            Complex64::new(0.0, PI / 2.0) + weight.alpha() * (z + 2.0).ln() - 2.0 * q as f64 * z.ln()
        }
    }
}

/// `z^δ`.
fn z_delta(kind: WeightKind, z: Complex64) -> Complex64 {
    match kind {
        WeightKind::Hermite => z,
        WeightKind::Laguerre => z.inv(),
    }
}

/// Block index of each of the `2|q|` variables.
fn variable_blocks(blocks: &[(u64, f64)]) -> Vec<usize> {
    blocks
        .iter()
        .enumerate()
        .flat_map(|(i, &(q, _))| std::iter::repeat_n(i, 2 * q as usize))
        .collect()
}

/// Integrand of the dual integral at one point, without any scaling.
/// `z` lists the `2q_1` variables of the first block, then the second
/// block, and so on.
pub fn dual_integrand(spec: &SymbolSpec, z: &[Complex64]) -> Result<Complex64> {
    let blocks = spec.integer_blocks()?;
    let owner = variable_blocks(&blocks);
    if z.len() != owner.len() {
        return Err(Error::Precondition(format!("expected {} variables, got {}", owner.len(), z.len())));
    }
    let w = spec.weight();
    let n = spec.n() as f64;
    let mut log = Complex64::new(0.0, 0.0);
    for (&zl, &b) in z.iter().zip(&owner) {
        let (q, mu) = blocks[b];
        log += -n * action_s(w.kind(), zl, mu)? + ln_g(w, q, zl);
    }
    Ok(log.exp() * pair_factor(w.kind(), z, &owner))
}

/// `Π_blocks Δ²(z) · Π_{earlier < later}(z_later^δ - z_earlier^δ)`.
fn pair_factor(kind: WeightKind, z: &[Complex64], owner: &[usize]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for k in 0..z.len() {
        for j in 0..k {
            v *= if owner[j] == owner[k] {
                let d = z[k] - z[j];
                d * d
            } else {
                z_delta(kind, z[k]) - z_delta(kind, z[j])
            };
        }
    }
    v
}

/// Per-block node tables `f_i(z_k) dz_k e^{-L_i}`.
struct NodeTables {
    z: Vec<Complex64>,
    zd: Vec<Complex64>,
    values: Vec<Vec<Complex64>>,
}

fn node_log(weight: &WeightSpec, q: u64, mu: f64, z: Complex64) -> Result<Complex64> {
    Ok(-(weight.n() as f64) * action_s(weight.kind(), z, mu)? + ln_g(weight, q, z))
}

fn block_scales(weight: &WeightSpec, blocks: &[(u64, f64)], rule: &Rule) -> Result<Vec<f64>> {
    blocks
        .iter()
        .map(|&(q, mu)| {
            let mut best = f64::NEG_INFINITY;
            for z in &rule.z {
                best = best.max(node_log(weight, q, mu, *z)?.re);
            }
            Ok(best)
        })
        .collect()
}

fn node_tables(weight: &WeightSpec, blocks: &[(u64, f64)], scales: &[f64], rule: &Rule) -> Result<NodeTables> {
    let values = blocks
        .iter()
        .zip(scales)
        .map(|(&(q, mu), &l)| {
            rule.z
                .iter()
                .zip(&rule.dz)
                .map(|(&z, &dz)| Ok((node_log(weight, q, mu, z)? - l).exp() * dz))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NodeTables {
        zd: rule.z.iter().map(|&z| z_delta(weight.kind(), z)).collect(),
        z: rule.z.clone(),
        values,
    })
}

fn tensor_walk(
    t: &NodeTables,
    owner: &[usize],
    level: usize,
    idx: &mut Vec<usize>,
    prod: Complex64,
    acc: &mut CompensatedSum,
) {
    let b = owner[level];
    for k in 0..t.z.len() {
        let mut p = prod * t.values[b][k];
        for (j, &i) in idx.iter().enumerate() {
            p *= if owner[j] == b {
                let d = t.z[k] - t.z[i];
                d * d
            } else {
                t.zd[k] - t.zd[i]
            };
        }
        if level + 1 == owner.len() {
            acc.add(p);
        } else {
            idx.push(k);
            tensor_walk(t, owner, level + 1, idx, p, acc);
            idx.pop();
        }
    }
}

fn tensor_sum(t: &NodeTables, owner: &[usize]) -> Complex64 {
    if owner.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let b = owner[0];
    let partial: Vec<CompensatedSum> = (0..t.z.len())
        .into_par_iter()
        .map(|k| {
            let mut acc = CompensatedSum::default();
            if owner.len() == 1 {
                acc.add(t.values[b][k]);
            } else {
                let mut idx = vec![k];
                tensor_walk(t, owner, 1, &mut idx, t.values[b][k], &mut acc);
            }
            acc
        })
        .collect();
    let mut total = CompensatedSum::default();
    for p in &partial {
        total.merge(p);
    }
    total.total()
}

/// Evaluates `eval(level)` for increasing node doublings until two
/// successive results agree.
fn with_doubling<F>(contour: &ContourSpec, dims: usize, mut eval: F) -> Result<ScaledComplex>
where
    F: FnMut(u32) -> Result<ScaledComplex>,
{
    let mut prev = eval(0)?;
    let mut last_change = f64::INFINITY;
    for level in 1..=MAX_DOUBLINGS {
        let n = (contour.base_nodes() << level) as f64;
        if n.powi(dims as i32) > TENSOR_BUDGET {
            break;
        }
        let cur = eval(level)?;
        last_change = cur.rel_change(&prev);
        if last_change < ACCEPT_TOL {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "contour quadrature did not settle (last relative change {last_change:.2e})"
    )))
}

/// The dual integral `I_{N,m,q}(μ)` by tensor quadrature. At most four
/// integration variables.
pub fn i_quadrature(spec: &SymbolSpec, contour: &ContourSpec, _ctx: &PrecisionContext) -> Result<ScaledComplex> {
    let blocks = spec.integer_blocks()?;
    let w = spec.weight();
    contour.check_weight(w.kind())?;
    let owner = variable_blocks(&blocks);
    if owner.len() > 4 {
        return Err(Error::Unsupported(format!(
            "tensor quadrature is limited to 4 variables, got {}",
            owner.len()
        )));
    }
    if owner.is_empty() {
        return Ok(ScaledComplex {
            log_scale: 0.0,
            value: Complex64::new(1.0, 0.0),
        });
    }
    let scales = block_scales(w, &blocks, &contour.rule(0))?;
    let log_scale: f64 = owner.iter().map(|&b| scales[b]).sum();
    with_doubling(contour, owner.len(), |level| {
        let t = node_tables(w, &blocks, &scales, &contour.rule(level))?;
        Ok(ScaledComplex {
            log_scale,
            value: tensor_sum(&t, &owner),
        })
    })
}

/// `ln ℋ` from the dual integral through the exact duality formula.
pub fn assemble_from_dual_integral(spec: &SymbolSpec, i_value: &ScaledComplex, ctx: &PrecisionContext) -> Result<LogSigned> {
    let blocks = spec.integer_blocks()?;
    if blocks.is_empty() {
        return Ok(LogSigned::one(ctx.bits()));
    }
    let norm = i_value.value.norm();
    if !norm.is_finite() || norm <= 0.0 || i_value.imag_residue() > 1e-6 {
        return Err(Error::Quadrature(format!(
            "dual integral is not real: {:?} (residue {:.2e})",
            i_value.value,
            i_value.imag_residue()
        )));
    }
    let prec = ctx.guarded();
    let gctx = PrecisionContext::with_bits(prec)?;
    let h = h_prefactor_log(spec, &gctx)?;
    let mut v = Float::with_val(prec, h.log_mag());
    for &(q, mu) in &blocks {
        v -= barnes_g_log_int(2 * q + 1, &gctx)?.log_mag();
        v -= log_factorial(2 * q, &gctx);
        v += Float::with_val(prec, zeta_log(spec.weight(), mu, &gctx).log_mag() * (2 * q));
    }
    v += cross_vandermonde_log(&blocks, -4, prec)?;
    v += i_value.ln_abs();
    let sign = h.sign() * if i_value.value.re > 0.0 { 1 } else { -1 };
    Ok(LogSigned::new(sign, Float::with_val(ctx.bits(), v)))
}

/// Relative error of the contour representation of the monic polynomial
/// `π_{N+j-1}(μ)` against the three-term recurrence.
pub fn contour_pi_check(
    weight: &WeightSpec,
    j: u64,
    mu: f64,
    contour: &ContourSpec,
    ctx: &PrecisionContext,
) -> Result<f64> {
    if j == 0 {
        return Err(Error::Precondition("j must be at least 1".into()));
    }
    weight.validate()?;
    contour.check_weight(weight.kind())?;
    let n = weight.n();
    let deg = n + j - 1;
    let ln_f = |z: Complex64| -> Result<Complex64> {
        let base = -(n as f64) * action_s(weight.kind(), z, mu)?;
        Ok(match weight.kind() {
            WeightKind::Hermite => base + (j - 1) as f64 * z.ln(),
            WeightKind::Laguerre => {
                base + weight.alpha() * (z + 2.0).ln() - z.ln() + (j - 1) as f64 * (z.inv() + 0.5).ln()
            }
        })
    };
    let coarse = contour.rule(0);
    let mut scale = f64::NEG_INFINITY;
    for &z in &coarse.z {
        scale = scale.max(ln_f(z)?.re);
    }
    let integral = with_doubling(contour, 1, |level| {
        let r = contour.rule(level);
        let mut acc = CompensatedSum::default();
        for (&z, &dz) in r.z.iter().zip(&r.dz) {
            acc.add((ln_f(z)? - scale).exp() * dz);
        }
        Ok(ScaledComplex {
            log_scale: scale,
            value: acc.total(),
        })
    })?;

    // c_j(N) = κ / i with κ real
    let prec = 64;
    let gctx = PrecisionContext::with_bits(prec)?;
    let nf = n as f64;
    let (ln_kappa, kappa_sign) = match weight.kind() {
        WeightKind::Hermite => (
            0.5 * (2.0 * nf / PI).ln() - (nf + j as f64) * LN_2 + 2.0 * nf * mu * mu,
            1.0,
        ),
        WeightKind::Laguerre => (
            log_factorial(deg, &gctx).to_f64()
                - deg as f64 * nf.ln()
                - (2.0 * nf + j as f64 + weight.alpha()) * LN_2
                - PI.ln(),
            if deg.is_multiple_of(2) { 1.0 } else { -1.0 },
        ),
    };
    let by_contour = integral.value * Complex64::new(0.0, -kappa_sign) * (integral.log_scale + ln_kappa).exp();

    let exact = orthopoly_eval_derivs(weight, deg, &Float::with_val(ctx.bits(), mu), 0, ctx)?
        .value()
        .to_f64();
    Ok((by_contour - exact).norm() / exact.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::calh_duality;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn action_examples() {
        let s = action_s(WeightKind::Hermite, c(0.0, 1.0), 0.0).unwrap();
        assert!((s - c(0.5, -PI / 2.0)).norm() < 1e-15);
        let s = action_s(WeightKind::Hermite, c(1.0, 0.0), 1.0).unwrap();
        assert!((s - c(1.5, 0.0)).norm() < 1e-15);
        let z = c(0.0, 1.0);
        let s = action_s(WeightKind::Laguerre, z, 0.5).unwrap();
        let want = z + z.ln() - (z + 2.0).ln();
        assert!((s - want).norm() < 1e-15);
        assert!(action_s(WeightKind::Laguerre, c(-2.0, 0.0), 0.5).is_err());
        assert!(action_s(WeightKind::Hermite, c(0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn integrand_example() {
        let n = 3;
        let spec = SymbolSpec::new(WeightSpec::hermite(n), vec![1.0], vec![0.0]).unwrap();
        let v = dual_integrand(&spec, &[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        let want = c(-4.0 * (-(n as f64)).exp(), 0.0);
        assert!((v - want).norm() < 1e-14);
    }

    #[test]
    fn integrand_conjugation_symmetry() {
        let w = WeightSpec::laguerre(0.7, 4).unwrap();
        let spec = SymbolSpec::new(w, vec![1.0, 1.0], vec![0.3, 0.6]).unwrap();
        let z = [c(0.3, 0.9), c(-0.8, 0.2), c(0.5, -0.7), c(0.1, 0.95)];
        let zc: Vec<_> = z.iter().map(|v| v.conj()).collect();
        let a = dual_integrand(&spec, &z).unwrap();
        let b = dual_integrand(&spec, &zc).unwrap();
        assert!((a.conj() - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn pi_check_examples() {
        let ctx = PrecisionContext::default();
        let w = WeightSpec::hermite(3);
        let e = contour_pi_check(&w, 1, 0.2, &ContourSpec::default_for(&w, 256), &ctx).unwrap();
        assert!(e < 1e-10, "{e}");
        let w = WeightSpec::laguerre(0.0, 3).unwrap();
        let e = contour_pi_check(&w, 2, 0.5, &ContourSpec::unit_circle(), &ctx).unwrap();
        assert!(e < 1e-10, "{e}");
        let w = WeightSpec::laguerre(1.5, 5).unwrap();
        for j in 1..4 {
            let e = contour_pi_check(&w, j, 0.4, &ContourSpec::unit_circle(), &ctx).unwrap();
            assert!(e < 1e-10, "{e}");
        }
    }

    fn closure(spec: &SymbolSpec) -> f64 {
        let ctx = PrecisionContext::default();
        let contour = ContourSpec::default_for(spec.weight(), ctx.bits());
        let i = i_quadrature(spec, &contour, &ctx).unwrap();
        assert!(i.imag_residue() < 1e-8, "{:?}", i);
        let a = assemble_from_dual_integral(spec, &i, &ctx).unwrap();
        let b = calh_duality(spec, &ctx).unwrap();
        assert_eq!(a.sign(), b.sign());
        (a.log_mag_f64() - b.log_mag_f64()).exp_m1().abs()
    }

    #[test]
    fn closure_single_zero() {
        let s = SymbolSpec::new(WeightSpec::hermite(20), vec![1.0], vec![0.4]).unwrap();
        let e = closure(&s);
        assert!(e < 1e-8, "{e}");
        let s = SymbolSpec::new(WeightSpec::laguerre(0.0, 20).unwrap(), vec![1.0], vec![0.5]).unwrap();
        let e = closure(&s);
        assert!(e < 1e-8, "{e}");
    }

    #[test]
    fn closure_four_variables() {
        for s in [
            SymbolSpec::new(WeightSpec::hermite(6), vec![1.0, 1.0], vec![-0.2, 0.5]).unwrap(),
            SymbolSpec::new(WeightSpec::hermite(5), vec![2.0], vec![0.1]).unwrap(),
            SymbolSpec::new(WeightSpec::laguerre(1.5, 5).unwrap(), vec![1.0, 1.0], vec![0.3, 0.7]).unwrap(),
            SymbolSpec::new(WeightSpec::laguerre(0.0, 4).unwrap(), vec![2.0], vec![0.4]).unwrap(),
        ] {
                let e = closure(&s);
            assert!(e < 1e-8, "{s:?}: {e}");
        }
    }

    #[test]
    fn empty_symbol_assembles_to_one() {
        let ctx = PrecisionContext::default();
        let s = SymbolSpec::new(WeightSpec::hermite(5), vec![0.0], vec![0.1]).unwrap();
        let i = i_quadrature(&s, &ContourSpec::imaginary_axis(5, 256), &ctx).unwrap();
        let v = assemble_from_dual_integral(&s, &i, &ctx).unwrap();
        assert!(v.log_mag().is_zero() && v.sign() == 1);
    }

    #[test]
    fn rejects_mismatched_contour_and_large_dimension() {
        let ctx = PrecisionContext::default();
        let s = SymbolSpec::new(WeightSpec::hermite(5), vec![1.0], vec![0.1]).unwrap();
        assert!(i_quadrature(&s, &ContourSpec::unit_circle(), &ctx).is_err());
        let s = SymbolSpec::new(WeightSpec::hermite(5), vec![3.0], vec![0.1]).unwrap();
        assert!(matches!(
            i_quadrature(&s, &ContourSpec::imaginary_axis(5, 256), &ctx),
            Err(Error::Unsupported(_))
        ));
        assert!(ContourSpec::new(ContourKind::Circle { radius: 2.5, nodes: 8 }).is_err());
    }

    #[test]
    fn saddle_line_agrees_with_axis() {
        let ctx = PrecisionContext::default();
        let s = SymbolSpec::new(WeightSpec::hermite(12), vec![1.0], vec![0.3]).unwrap();
        let a = i_quadrature(&s, &ContourSpec::imaginary_axis(12, 256), &ctx).unwrap();
        let b = i_quadrature(&s, &ContourSpec::saddle_line(0.3, 12, 256), &ctx).unwrap();
        assert!(a.rel_change(&b) < 1e-9);
    }
}

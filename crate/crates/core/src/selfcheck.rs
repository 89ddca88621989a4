//! The consistency suite: every route checked against another, with
//! tolerances fixed in advance. Each check reports what it measured.

use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::Float;

use crate::asymptotics::universality_residual;
use crate::bruteforce::{gaussian_rule, heine_integral, tensor_integral, vandermonde_sq};
use crate::contour::{contour_pi_check, i_quadrature, assemble_from_dual_integral, ContourSpec};
use crate::asymptotics::i0_log;
use crate::duality::{calh_duality, lim_f_log};
use crate::ensembles::{saddle_data, z_selberg_log, SymbolSpec, WeightSpec};
use crate::error::Result;
use crate::hankel_oracle::calh_oracle;
use crate::io::{read_records, records_to_string};
use crate::mc::mc_expectation;
use crate::numerics::{barnes_g_log, ln_glaisher, PrecisionContext};
use crate::study::{converge, error_ratios};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type Body = fn() -> Result<(bool, String)>;

fn run(name: &'static str, limit: Option<Duration>, body: Body) -> CheckOutcome {
    let t = Instant::now();
    let r = body();
    let elapsed = t.elapsed();
    let (mut passed, mut detail) = match r {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(lim) = limit {
        if elapsed > lim {
            passed = false;
            detail.push_str(&format!("; runtime {elapsed:.1?} over {lim:?}"));
        }
    }
    CheckOutcome {
        name,
        passed,
        detail,
        elapsed,
    }
}

fn ctx256() -> PrecisionContext {
    PrecisionContext::with_bits(256).expect("256 bits is valid")
}

fn distinct_mus(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.random_range(lo..hi)).collect();
        let ok = (0..m).all(|i| (0..i).all(|j| (v[i] - v[j]).abs() > 0.05));
        if ok {
            return v;
        }
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn duality_vs_oracle() -> Result<(bool, String)> {
    let ctx = ctx256();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let weights = [
        WeightSpec::hermite(1),
        WeightSpec::laguerre(0.0, 1)?,
        WeightSpec::laguerre(1.5, 1)?,
    ];
    let qs: [&[f64]; 3] = [&[1.0], &[2.0], &[1.0, 1.0]];
    let mut worst = Float::with_val(64, 0);
    let mut cases = 0;
    for w in &weights {
        let (lo, hi) = if w.kind() == crate::ensembles::WeightKind::Hermite {
            (-0.95, 0.95)
        } else {
            (0.05, 0.95)
        };
        for n in 2..=8u64 {
            for q in qs {
                for _ in 0..3 {
                    let mu = distinct_mus(&mut rng, q.len(), lo, hi);
                    let s = SymbolSpec::new(w.with_n(n), q.to_vec(), mu)?;
                    let a = calh_duality(&s, &ctx)?;
                    let b = calh_oracle(&s, &ctx)?;
                    if a.sign() != b.sign() {
                        return Ok((false, format!("sign mismatch at {s}")));
                    }
                    let d = Float::with_val(64, a.log_mag() - b.log_mag()).abs();
                    if d > worst {
                        worst = d;
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok((worst < 1e-30, format!("{cases} cases, max |Δ ln ℋ| = {:.2e}", worst.to_f64())))
}

fn ff_rate(template: &SymbolSpec) -> Result<(bool, String)> {
    let recs = converge(template, &[50, 100, 200, 400], &ctx256())?;
    let errs: Vec<f64> = recs.iter().map(|r| r.rel_error).collect();
    let ratios = error_ratios(&recs);
    let ok = errs[3] < 0.01 && ratios.iter().all(|r| (0.3..=0.7).contains(r));
    Ok((
        ok,
        format!("{template}: rel_error [{}], ratios [{}]", fmt_list(&errs), fmt_list(&ratios)),
    ))
}

fn ff_convergence() -> Result<(bool, String)> {
    let (a, da) = ff_rate(&SymbolSpec::new(WeightSpec::hermite(50), vec![1.0], vec![0.0])?)?;
    let (b, db) = ff_rate(&SymbolSpec::new(WeightSpec::laguerre(0.0, 50)?, vec![1.0], vec![0.5])?)?;
    Ok((a && b, format!("{da}; {db}")))
}

fn universality() -> Result<(bool, String)> {
    let ctx = ctx256();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let qs: [&[f64]; 4] = [&[1.0], &[2.0], &[1.0, 1.0], &[2.0, 1.0]];
    let mut worst = 0.0f64;
    for k in 0..20 {
        let n = rng.random_range(5..400u64);
        let q = qs[k % 4];
        let s = if k % 2 == 0 {
            let mu = distinct_mus(&mut rng, q.len(), -0.95, 0.95);
            SymbolSpec::new(WeightSpec::hermite(n), q.to_vec(), mu)?
        } else {
            let mu = distinct_mus(&mut rng, q.len(), 0.05, 0.95);
            let alpha = rng.random_range(0.0..3.0);
            SymbolSpec::new(WeightSpec::laguerre(alpha, n)?, q.to_vec(), mu)?
        };
        worst = worst.max(universality_residual(&s, &ctx)?.to_f64());
    }
    Ok((worst < 1e-25, format!("20 cases, max residual {worst:.2e}")))
}

fn closure_one(s: &SymbolSpec) -> Result<f64> {
    let ctx = ctx256();
    let i = i_quadrature(s, &ContourSpec::default_for(s.weight(), ctx.bits()), &ctx)?;
    let a = assemble_from_dual_integral(s, &i, &ctx)?;
    let b = calh_duality(s, &ctx)?;
    if a.sign() != b.sign() {
        return Ok(f64::INFINITY);
    }
    Ok((a.log_mag_f64() - b.log_mag_f64()).exp_m1().abs())
}

fn contour_closure() -> Result<(bool, String)> {
    let h = closure_one(&SymbolSpec::new(WeightSpec::hermite(20), vec![1.0], vec![0.4])?)?;
    let l = closure_one(&SymbolSpec::new(WeightSpec::laguerre(0.0, 20)?, vec![1.0], vec![0.5])?)?;
    Ok((
        h < 1e-8 && l < 1e-8,
        format!("relative difference Hermite {h:.2e}, Laguerre {l:.2e}"),
    ))
}

/// `N^{q²} e^{2qN Re S} I / I₀ - 1` along the saddle line.
pub fn scaled_limit_error(s: &SymbolSpec, ctx: &PrecisionContext) -> Result<f64> {
    let blocks = s.integer_blocks()?;
    let (q, mu) = match blocks.as_slice() {
        [b] => *b,
        _ => {
            return Err(crate::error::Error::Unsupported(
                "scaled limit check takes a single singularity".into(),
            ))
        }
    };
    let n = s.n();
    let i = i_quadrature(s, &ContourSpec::saddle_line(mu, n, ctx.bits()), ctx)?;
    let re_s = saddle_data(s.weight(), mu, ctx)?.re_s.to_f64();
    let scaled = i.ln_abs() + (q * q) as f64 * (n as f64).ln() + 2.0 * (q * n) as f64 * re_s;
    let i0 = i0_log(s, ctx)?;
    let same_sign = (i.value.re > 0.0) == (i0.sign() > 0);
    if !same_sign {
        return Ok(f64::INFINITY);
    }
    Ok((scaled - i0.log_mag_f64()).exp_m1().abs())
}

fn scaled_limit() -> Result<(bool, String)> {
    let ctx = ctx256();
    let mut errs = Vec::new();
    for n in [20u64, 40, 80] {
        let s = SymbolSpec::new(WeightSpec::hermite(n), vec![1.0], vec![0.3])?;
        errs.push(scaled_limit_error(&s, &ctx)?);
    }
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[1] / w[0]).collect();
    Ok((
        ratios.iter().all(|r| (0.3..=0.7).contains(r)),
        format!("error [{}], ratios [{}]", fmt_list(&errs), fmt_list(&ratios)),
    ))
}

fn selberg_partition() -> Result<(bool, String)> {
    let ctx = ctx256();
    let one = Float::with_val(256, 1);
    let gap = |a: &Float, b: Float| Float::with_val(128, a - b).abs().to_f64();
    let z2 = z_selberg_log(2, &one, &ctx)?.log_mag().clone();
    let ln_pi = Float::with_val(256, Constant::Pi).ln();
    let rule = gaussian_rule(1.0, 128)?;
    let q2 = tensor_integral(&rule, 2, 128, |x| vandermonde_sq(x, 128)).ln();
    let rule3 = gaussian_rule(1.0, 64)?;
    let q3 = tensor_integral(&rule3, 3, 64, |x| vandermonde_sq(x, 64)).ln();
    let z3 = z_selberg_log(3, &one, &ctx)?.log_mag().clone();
    let (e2, e3, epi) = (gap(&z2, q2), gap(&z3, q3), gap(&z2, ln_pi));
    Ok((
        e2 < 1e-10 && epi < 1e-15 && e3 < 1e-6,
        format!("p=2: |Δ| {e2:.1e} vs quadrature, {epi:.1e} vs ln π; p=3: |Δ| {e3:.1e}"),
    ))
}

fn monte_carlo() -> Result<(bool, String)> {
    let s = SymbolSpec::new(WeightSpec::hermite(50), vec![1.0], vec![0.3])?;
    let (m, se) = mc_expectation(&s, 100_000, 7)?;
    let exact = lim_f_log(&s, &ctx256())?.to_f64();
    let z = (m - exact) / se;
    Ok((z.abs() < 3.0, format!("mean {m:.6e} ± {se:.1e}, exact {exact:.6e}, z = {z:.2}")))
}

fn special_functions() -> Result<(bool, String)> {
    let ctx = ctx256();
    let mut worst = Float::with_val(64, 0);
    for z in [0.3, 0.5, 1.7, 2.25, 7.6, 13.9, 40.1] {
        let zf = ctx.float(z);
        let g1 = barnes_g_log(&Float::with_val(256, &zf + 1u32), &ctx)?;
        let g0 = barnes_g_log(&zf, &ctx)?;
        let d = Float::with_val(256, g1.log_mag() - g0.log_mag()) - Float::with_val(256, zf.ln_gamma_ref());
        let d = Float::with_val(64, d.abs_ref());
        if d > worst {
            worst = d;
        }
    }
    // G(3/2) = Γ(1/2) G(1/2), G(1/2) = 2^{1/24} e^{1/8} π^{-1/4} A^{-3/2}
    let p = 256;
    let ln2 = Float::with_val(p, Constant::Log2);
    let ln_pi = Float::with_val(p, Constant::Pi).ln();
    let closed = ln2 / 24u32 + Float::with_val(p, 0.125) - Float::with_val(p, &ln_pi / 4u32)
        - ln_glaisher(&ctx) * Float::with_val(p, 1.5)
        + Float::with_val(p, &ln_pi / 2u32);
    let asym = barnes_g_log(&ctx.float(1.5), &ctx)?;
    let e = Float::with_val(64, asym.log_mag() - closed).abs().to_f64();
    let bound = Float::with_val(64, 1) >> 128u32;
    Ok((
        worst < bound && e < 1e-20,
        format!(
            "max |ln G(z+1) - ln Γ(z) - ln G(z)| = {:.1e}; G(3/2) routes differ by {e:.1e}",
            worst.to_f64()
        ),
    ))
}

fn brute_force_heine() -> Result<(bool, String)> {
    let ctx = ctx256();
    let mut worst = 0.0f64;
    for w in [WeightSpec::hermite(2), WeightSpec::laguerre(0.5, 2)?] {
        let mu = if w.kind() == crate::ensembles::WeightKind::Hermite { 0.3 } else { 0.4 };
        let s = SymbolSpec::new(w, vec![1.0], vec![mu])?;
        let num = heine_integral(&w, 2, &[1], &[mu], 128)?;
        let den = heine_integral(&w, 3, &[], &[], 128)?;
        let brute = Float::with_val(128, num / den).ln();
        let exact = calh_oracle(&s, &ctx)?;
        worst = worst.max(Float::with_val(128, brute - exact.log_mag()).abs().to_f64());
    }
    Ok((worst < 1e-15, format!("max |Δ ln ℋ| = {worst:.1e}")))
}

fn polynomial_contours() -> Result<(bool, String)> {
    let ctx = ctx256();
    let h = WeightSpec::hermite(3);
    let l = WeightSpec::laguerre(0.0, 3)?;
    let eh = contour_pi_check(&h, 1, 0.2, &ContourSpec::default_for(&h, 256), &ctx)?;
    let el = contour_pi_check(&l, 2, 0.5, &ContourSpec::unit_circle(), &ctx)?;
    Ok((eh < 1e-10 && el < 1e-10, format!("Hermite {eh:.1e}, Laguerre {el:.1e}")))
}

fn csv_round_trip() -> Result<(bool, String)> {
    let t = SymbolSpec::new(WeightSpec::laguerre(1.5, 1)?, vec![1.0, 1.0], vec![0.3, 0.6])?;
    let recs = converge(&t, &[12, 6], &ctx256())?;
    let text = records_to_string(&recs)?;
    let back = read_records(text.as_bytes())?;
    let same = back.len() == recs.len()
        && back
            .iter()
            .zip(&recs)
            .all(|(a, b)| a.spec().ok() == b.spec().ok() && a.rel_error == b.rel_error);
    Ok((same && records_to_string(&back)? == text, format!("{} rows", recs.len())))
}

/// The eight acceptance criteria, in order.
pub fn acceptance() -> Vec<CheckOutcome> {
    vec![
        run("duality equals the moment oracle", Some(Duration::from_secs(60)), duality_vs_oracle),
        run("FF convergence at rate 1/N", Some(Duration::from_secs(10)), ff_convergence),
        run("universality identity", None, universality),
        run("contour closure of the duality formula", Some(Duration::from_secs(30)), contour_closure),
        run("scaled dual integral tends to I0", None, scaled_limit),
        run("Selberg partition function", None, selberg_partition),
        run("Monte Carlo cross-check", Some(Duration::from_secs(300)), monte_carlo),
        run("special functions", None, special_functions),
    ]
}

/// Acceptance criteria plus the remaining cross-checks.
pub fn full_suite() -> Vec<CheckOutcome> {
    let mut v = acceptance();
    v.push(run("oracle equals brute-force quadrature", None, brute_force_heine));
    v.push(run("contour form of the polynomials", None, polynomial_contours));
    v.push(run("CSV round trip", None, csv_round_trip));
    v
}

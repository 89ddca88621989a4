//! Convergence of the exact `ℋ` towards its Forrester–Frankel leading form
//! along a grid of `N`.

use rayon::prelude::*;
use rug::Float;

use crate::asymptotics::ff_log;
use crate::duality::calh_duality;
use crate::ensembles::SymbolSpec;
use crate::error::Result;
use crate::io::ConvergenceRecord;
use crate::numerics::PrecisionContext;

/// One record per `N` (sorted, duplicates removed) for the symbol of
/// `template` rescaled to each `N`.
pub fn converge(template: &SymbolSpec, n_list: &[u64], ctx: &PrecisionContext) -> Result<Vec<ConvergenceRecord>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let w = template.weight();
    ns.par_iter()
        .map(|&n| {
            let spec = template.with_n(n);
            let exact = calh_duality(&spec, ctx)?.ln()?;
            let ff = ff_log(&spec, ctx)?.log_value.ln()?;
            let diff = Float::with_val(ctx.bits(), &exact - &ff);
            let rel = diff.exp_m1().abs().to_f64();
            Ok(ConvergenceRecord {
                weight_kind: w.kind(),
                alpha: w.alpha(),
                q: spec.q().to_vec(),
                mu: spec.mu().to_vec(),
                n,
                precision_bits: ctx.bits(),
                log_calh_exact: exact,
                log_calh_ff: ff,
                rel_error: rel,
            })
        })
        .collect()
}

/// `rel_error(N_{k+1}) / rel_error(N_k)` for consecutive records.
pub fn error_ratios(records: &[ConvergenceRecord]) -> Vec<f64> {
    records.windows(2).map(|w| w[1].rel_error / w[0].rel_error).collect()
}

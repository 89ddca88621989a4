use rug::Float;

use super::{LogSigned, PrecisionContext};
use crate::error::{Error, Result};

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Float>>;

/// Maximum number of precision escalation rounds before giving up.
pub const MAX_ESCALATIONS: u32 = 3;

/// `ln |det A|` and the sign of `det A` by Gaussian elimination with
/// partial pivoting at precision `prec`.
pub fn det_log(mut a: Matrix, prec: u32) -> Result<LogSigned> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(LogSigned::one(prec));
    }
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            x.set_prec(prec);
        }
    }
    let mut sign: i8 = 1;
    let mut log_mag = Float::with_val(prec, 0);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .as_abs()
                    .partial_cmp(&*a[j][col].as_abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if a[pivot_row][col].is_zero() {
            return Ok(LogSigned::zero(prec));
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = a[col][col].clone();
        if pivot.is_sign_negative() {
            sign = -sign;
        }
        log_mag += Float::with_val(prec, pivot.abs_ref()).ln();
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = Float::with_val(prec, &row[col] / &pivot);
            for k in col + 1..n {
                let t = Float::with_val(prec, &factor * &pivot_row[k]);
                row[k] -= t;
            }
        }
    }
    Ok(LogSigned::new(sign, log_mag))
}

/// Evaluate at working precision, then at escalated precision, until two
/// successive results agree to `2^{-bits/4}` in log-magnitude with equal
/// signs. Returns the higher-precision value rounded to working precision.
pub fn with_escalation<F>(ctx: &PrecisionContext, what: &str, mut eval: F) -> Result<LogSigned>
where
    F: FnMut(&PrecisionContext) -> Result<LogSigned>,
{
    let tol = ctx.epsilon_pow2(ctx.bits() / 4);
    let mut prev = eval(ctx)?;
    let mut last_gap = None;
    for round in 1..=MAX_ESCALATIONS {
        let hi = ctx.escalated(round);
        let cur = eval(&hi)?;
        let gap = prev.log_distance(&cur);
        if gap <= tol {
            return Ok(cur.round_to(ctx.bits()));
        }
        last_gap = Some(gap.to_f64());
        prev = cur;
    }
    Err(Error::Conditioning(format!(
        "{what}: results at {} and {} bits still differ by {:.3e} in log-magnitude",
        ctx.escalated(MAX_ESCALATIONS - 1).bits(),
        ctx.escalated(MAX_ESCALATIONS).bits(),
        last_gap.unwrap_or(f64::NAN)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Float::with_val(128, x)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        let d = det_log(m(&[&[2.0, 1.0], &[1.0, 3.0]]), 128).unwrap();
        assert_eq!(d.sign(), 1);
        assert!((d.to_f64() - 5.0).abs() < 1e-14);
        let d = det_log(m(&[&[0.0, 1.0], &[1.0, 0.0]]), 128).unwrap();
        assert_eq!(d.sign(), -1);
        let d = det_log(m(&[&[1.0, 2.0], &[2.0, 4.0]]), 128).unwrap();
        assert!(d.is_zero());
        assert_eq!(det_log(Vec::new(), 64).unwrap().to_f64(), 1.0);
    }

    #[test]
    fn rejects_ragged() {
        assert!(det_log(m(&[&[1.0, 2.0], &[3.0]]), 64).is_err());
    }

    #[test]
    fn hilbert_needs_escalation_and_gets_it() {
        // det of the 12x12 Hilbert matrix is known in closed form; at 64 bits
        // elimination loses most digits, escalation recovers them.
        let n = 12usize;
        let build = |prec: u32| -> Matrix {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Float::with_val(prec, 1) / Float::with_val(prec, i + j + 1))
                        .collect()
                })
                .collect()
        };
        let ctx = PrecisionContext::with_bits(64).unwrap();
        let d = with_escalation(&ctx, "hilbert", |c| det_log(build(c.bits()), c.bits())).unwrap();
        // det H_n = c_n^4 / c_{2n} with c_n = Π_{k=1}^{n-1} k!
        let ln_c = |n: u32| {
            let mut acc = Float::with_val(256, 0);
            for k in 1..n {
                acc += Float::with_val(256, Float::factorial(k)).ln();
            }
            acc
        };
        let log_det = ln_c(n as u32) * 4u32 - ln_c(2 * n as u32);
        let want = log_det.to_f64();
        assert!((d.log_mag().to_f64() - want).abs() < 1e-12, "{} vs {want}", d.log_mag());
    }
}

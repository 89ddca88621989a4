use std::cmp::Ordering;
use std::fmt;

use rug::Float;

use crate::error::{Error, Result};

/// A real number stored as a sign in {-1, 0, +1} and the natural log of its
/// magnitude. `log_mag` carries no meaning when `sign == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSigned {
    sign: i8,
    log_mag: Float,
}

impl LogSigned {
    pub fn new(sign: i8, log_mag: Float) -> Self {
        let sign = sign.signum();
        if sign == 0 {
            return Self::zero(log_mag.prec());
        }
        Self { sign, log_mag }
    }

    /// A positive value with the given natural log.
    pub fn from_log(log_mag: Float) -> Self {
        Self { sign: 1, log_mag }
    }

    pub fn zero(prec: u32) -> Self {
        Self {
            sign: 0,
            log_mag: Float::with_val(prec, 0),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_log(Float::with_val(prec, 0))
    }

    pub fn from_float(x: &Float) -> Self {
        match x.cmp0() {
            Some(Ordering::Greater) => Self::from_log(x.clone().ln()),
            Some(Ordering::Less) => Self {
                sign: -1,
                log_mag: x.clone().abs().ln(),
            },
            _ => Self::zero(x.prec()),
        }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Self::from_float(&Float::with_val(prec, x))
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_mag(&self) -> &Float {
        &self.log_mag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn prec(&self) -> u32 {
        self.log_mag.prec()
    }

    /// `ln x`, defined only for positive values.
    pub fn ln(&self) -> Result<Float> {
        if self.sign > 0 {
            Ok(self.log_mag.clone())
        } else {
            Err(Error::Domain(format!(
                "logarithm of a non-positive value (sign {})",
                self.sign
            )))
        }
    }

    pub fn log_mag_f64(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.log_mag.to_f64()
        }
    }

    /// The value itself; overflows to ±inf in f64 for huge magnitudes.
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.log_mag.to_f64().exp()
    }

    pub fn to_float(&self, prec: u32) -> Float {
        if self.sign == 0 {
            return Float::with_val(prec, 0);
        }
        let v = Float::with_val(prec, &self.log_mag).exp();
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    pub fn round_to(&self, prec: u32) -> Self {
        Self {
            sign: self.sign,
            log_mag: Float::with_val(prec, &self.log_mag),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero(self.prec().max(other.prec()));
        }
        let prec = self.prec().max(other.prec());
        Self {
            sign: self.sign * other.sign,
            log_mag: Float::with_val(prec, &self.log_mag + &other.log_mag),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.sign == 0 {
            return Err(Error::Singular("division by zero".into()));
        }
        if self.sign == 0 {
            return Ok(self.clone());
        }
        let prec = self.prec().max(other.prec());
        Ok(Self {
            sign: self.sign * other.sign,
            log_mag: Float::with_val(prec, &self.log_mag - &other.log_mag),
        })
    }

    /// Multiply by a positive factor given by its log.
    pub fn scale_log(&self, log_factor: &Float) -> Self {
        if self.sign == 0 {
            return self.clone();
        }
        Self {
            sign: self.sign,
            log_mag: Float::with_val(self.prec(), &self.log_mag + log_factor),
        }
    }

    pub fn powi(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one(self.prec());
        }
        if self.sign == 0 {
            return self.clone();
        }
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        Self {
            sign,
            log_mag: Float::with_val(self.prec(), &self.log_mag * k),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            sign: -self.sign,
            log_mag: self.log_mag.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            log_mag: self.log_mag.clone(),
        }
    }

    /// Signed sum, evaluated as a log-sum-exp.
    pub fn add(&self, other: &Self) -> Self {
        if self.sign == 0 {
            return other.clone();
        }
        if other.sign == 0 {
            return self.clone();
        }
        let prec = self.prec().max(other.prec());
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        // |small/big| <= 1
        let ratio = Float::with_val(prec, &small.log_mag - &big.log_mag).exp();
        let factor = if big.sign == small.sign {
            Float::with_val(prec, 1 + ratio)
        } else {
            Float::with_val(prec, 1 - ratio)
        };
        if factor.is_zero() {
            return Self::zero(prec);
        }
        Self {
            sign: big.sign,
            log_mag: Float::with_val(prec, &big.log_mag + factor.ln()),
        }
    }

    /// `|ln|a| - ln|b||` when the signs agree, `inf` otherwise. Zero when
    /// both values are zero.
    pub fn log_distance(&self, other: &Self) -> Float {
        let prec = self.prec().max(other.prec());
        if self.sign != other.sign {
            return Float::with_val(prec, rug::float::Special::Infinity);
        }
        if self.sign == 0 {
            return Float::with_val(prec, 0);
        }
        Float::with_val(prec, &self.log_mag - &other.log_mag).abs()
    }
}

impl fmt::Display for LogSigned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(
                f,
                "{}exp({:.20e})",
                if s < 0 { "-" } else { "" },
                self.log_mag.to_f64()
            ),
        }
    }
}

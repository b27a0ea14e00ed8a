//! Working-precision bookkeeping threaded through every numeric operation.

use rug::float::Special;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Binary working precision plus the decimal digit count the caller wants
/// certified. All `Real`/`Complex` values created through a context carry
/// `work_bits` of mantissa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    work_bits: u32,
    target_digits: u32,
    guard_bits: u32,
}

impl PrecisionContext {
    /// Context certifying `target_digits` decimal digits with the default
    /// 32 guard bits.
    pub fn new(target_digits: u32) -> Self {
        let guard_bits = 32;
        let work_bits = (target_digits as f64 * LOG2_10).ceil() as u32 + guard_bits;
        PrecisionContext {
            work_bits,
            target_digits,
            guard_bits,
        }
    }

    /// Explicit parts; enforces `work_bits >= ceil(target_digits*log2(10)) + guard_bits`
    /// and `guard_bits >= 16`.
    pub fn with_parts(work_bits: u32, target_digits: u32, guard_bits: u32) -> Result<Self> {
        if guard_bits < 16 {
            return Err(Error::InvalidPrecision(format!(
                "guard_bits = {guard_bits} < 16"
            )));
        }
        let min_bits = (target_digits as f64 * LOG2_10).ceil() as u32 + guard_bits;
        if work_bits < min_bits {
            return Err(Error::InvalidPrecision(format!(
                "work_bits = {work_bits} < {min_bits} required for {target_digits} digits"
            )));
        }
        if target_digits == 0 {
            return Err(Error::InvalidPrecision("target_digits = 0".into()));
        }
        Ok(PrecisionContext {
            work_bits,
            target_digits,
            guard_bits,
        })
    }

    pub fn work_bits(&self) -> u32 {
        self.work_bits
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Same target digits, `extra` additional working bits.
    pub fn widened(&self, extra: u32) -> Self {
        PrecisionContext {
            work_bits: self.work_bits + extra,
            ..self.clone()
        }
    }

    pub fn real<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.work_bits, v)
    }

    /// Parse a decimal literal at working precision.
    pub fn real_str(&self, s: &str) -> Float {
        Float::with_val(
            self.work_bits,
            Float::parse(s).expect("invalid decimal literal"),
        )
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.work_bits, v)
    }

    pub fn zero(&self) -> Float {
        Float::with_val(self.work_bits, 0)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.work_bits, rug::float::Constant::Pi)
    }

    pub fn inf(&self) -> Float {
        Float::with_val(self.work_bits, Special::Infinity)
    }

    /// `10^(-target_digits)`, the certified absolute accuracy.
    pub fn tolerance(&self) -> Float {
        self.pow10(-(self.target_digits as i32))
    }

    /// `10^e` at working precision.
    pub fn pow10(&self, e: i32) -> Float {
        self.real(10).pow(e)
    }

    /// Canonical decimal serialization at `target_digits` significant digits.
    pub fn decimal(&self, x: &Float) -> String {
        decimal_string(x, self.target_digits as usize)
    }
}

impl Default for PrecisionContext {
    /// 30 certified digits, the default used across the verification suites.
    fn default() -> Self {
        PrecisionContext::new(30)
    }
}

/// Decimal serialization with `digits` significant digits that parses back to
/// the same value at that accuracy.
pub fn decimal_string(x: &Float, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_context_parameters() {
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.target_digits(), 30);
        assert_eq!(ctx.guard_bits(), 32);
        assert!(ctx.work_bits() >= 100 + 32);
    }

    #[test]
    fn rejects_undersized_work_bits() {
        assert!(PrecisionContext::with_parts(64, 30, 32).is_err());
        assert!(PrecisionContext::with_parts(200, 30, 8).is_err());
    }

    #[test]
    fn decimal_round_trip_is_stable() {
        let ctx = PrecisionContext::default();
        let x = ctx.real(2).sqrt();
        let s = ctx.decimal(&x);
        let y = ctx.real_str(&s);
        let diff = (x - &y).abs();
        assert!(diff < ctx.tolerance());
        // serializing the re-parsed value gives the same string
        assert_eq!(s, ctx.decimal(&y));
    }
}

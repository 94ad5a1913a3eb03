use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 64;
pub const MIN_DIGITS: u32 = 16;

/// Working precision, in decimal digits. Passed explicitly everywhere; there
/// is no ambient precision state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            digits: DEFAULT_DIGITS,
        }
    }
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Validation(format!(
                "precision of {digits} digits is below the minimum of {MIN_DIGITS}"
            )));
        }
        Ok(PrecisionContext { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits: enough for `digits` decimals plus 32 guard bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    pub fn float(&self, v: f64) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn int(&self, v: i64) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn rational(&self, v: &Rational) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// `10^(-k)` at working precision.
    pub fn ten_pow_neg(&self, k: i32) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(-k)
    }

    /// `10^(-x)` for fractional exponents such as `digits/2`.
    pub fn ten_pow_neg_f(&self, x: f64) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(Float::with_val(self.bits(), -x))
    }

    pub fn fmt(&self, x: &Float) -> String {
        format_float(x, self.digits as usize)
    }
}

/// Renders `x` with `sig` significant digits. Plain decimal for moderate
/// exponents, scientific otherwise.
pub fn format_float(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let raw = x.to_string_radix(10, Some(sig.max(1)));
    // rug yields forms such as "-1.2345e-7" or "3.1415"
    let (mant, exp) = match raw.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (raw.clone(), 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m.to_string()),
        None => (false, mant),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((&mant, ""));
    let digits: String = format!("{ip}{fp}");
    let point = ip.len() as i64 + exp; // position of the decimal point within `digits`
    let sign = if neg { "-" } else { "" };
    if (-5..=24).contains(&point) {
        let mut s = String::new();
        if point <= 0 {
            s.push_str("0.");
            s.push_str(&"0".repeat((-point) as usize));
            s.push_str(&digits);
        } else if point as usize >= digits.len() {
            s.push_str(&digits);
            s.push_str(&"0".repeat(point as usize - digits.len()));
        } else {
            s.push_str(&digits[..point as usize]);
            s.push('.');
            s.push_str(&digits[point as usize..]);
        }
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        format!("{sign}{s}")
    } else {
        let lead = &digits[..1];
        let mut rest = digits[1..].trim_end_matches('0').to_string();
        if !rest.is_empty() {
            rest.insert(0, '.');
        }
        format!("{sign}{lead}{rest}e{}", point - 1)
    }
}

/// Scientific notation with `sig` significant digits, e.g. `1.25e-51`.
pub fn format_sci(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0e0".to_string();
    }
    let raw = x.to_string_radix(10, Some(sig.max(1)));
    let (mant, exp) = match raw.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (raw.clone(), 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m.to_string()),
        None => (false, mant),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((&mant, ""));
    let digits = format!("{ip}{fp}");
    let exp = exp + ip.len() as i64 - 1;
    let rest = &digits[1..];
    let sign = if neg { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{}e{exp}", &digits[..1])
    } else {
        format!("{sign}{}.{rest}e{exp}", &digits[..1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_cover_digits() {
        let ctx = PrecisionContext::default();
        assert!(ctx.bits() >= 213 + 32);
        assert!(PrecisionContext::new(15).is_err());
        assert_eq!(PrecisionContext::new(16).unwrap().digits(), 16);
    }

    #[test]
    fn formatting() {
        let ctx = PrecisionContext::new(20).unwrap();
        assert_eq!(format_float(&ctx.float(2.5), 20), "2.5");
        assert_eq!(format_float(&ctx.float(-0.125), 20), "-0.125");
        assert_eq!(format_float(&ctx.int(1200), 20), "1200");
        assert_eq!(format_float(&ctx.float(1e-30), 3), "1e-30");
        assert_eq!(format_float(&ctx.zero(), 20), "0");
        assert_eq!(format_sci(&ctx.float(0.00125), 3), "1.25e-3");
        assert_eq!(format_sci(&ctx.float(-42.0), 2), "-4.2e1");
        assert!(format_float(&ctx.pi(), 20).starts_with("3.14159265358979323"));
    }
}

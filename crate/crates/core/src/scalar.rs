//! Scalar fields used by the linear-algebra layer.
//!
//! Three fields are provided: exact rationals (`rug::Rational`), exact
//! Gaussian rationals [`Qi`], and working-precision reals [`Real`]. The
//! [`Field`] trait is deliberately small; matrices carry a field context so
//! that floating-point zeros know their precision.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};

use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + PartialEq {
    type Ctx: Clone + fmt::Debug;
    /// Whether zero tests are exact (no tolerance).
    const EXACT: bool;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Compares absolute values; used for pivot selection.
    fn magnitude_cmp(&self, other: &Self) -> Ordering;

    fn conj(&self) -> Self {
        self.clone()
    }

    /// Zero test used by rank decisions. Exact fields never use a tolerance.
    fn negligible(&self, _ctx: &Self::Ctx) -> bool {
        self.is_zero()
    }
}

impl Field for Rational {
    type Ctx = ();
    const EXACT: bool = true;

    fn zero(_: &()) -> Self {
        Rational::new()
    }
    fn one(_: &()) -> Self {
        Rational::from(1)
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational::from(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational::from(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational::from(self * rhs)
    }
    fn div(&self, rhs: &Self) -> Self {
        Rational::from(self / rhs)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }
    fn magnitude_cmp(&self, other: &Self) -> Ordering {
        self.clone().abs().cmp(&other.clone().abs())
    }
}

/// An exact element of the Gaussian rationals ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Qi {
    pub re: Rational,
    pub im: Rational,
}

impl Qi {
    pub fn new(re: Rational, im: Rational) -> Self {
        Qi { re, im }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        Qi {
            re: re.into(),
            im: Rational::new(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Qi::real(Rational::from(v))
    }

    pub fn i() -> Self {
        Qi {
            re: Rational::new(),
            im: Rational::from(1),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0() == Ordering::Equal
    }

    /// |z|², exact.
    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Qi {
            re: Rational::from(&self.re * r),
            im: Rational::from(&self.im * r),
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

impl fmt::Display for Qi {
    /// Canonical form: `a`, `b*i`, `a+b*i` or `a-b*i`, rationals in lowest terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re0 = self.re.cmp0() == Ordering::Equal;
        let im0 = self.im.cmp0() == Ordering::Equal;
        match (re0, im0) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}*i", fmt_rational(&self.im)),
            (false, false) => {
                if self.im.cmp0() == Ordering::Less {
                    let mag = Rational::from(-&self.im);
                    write!(f, "{}-{}*i", fmt_rational(&self.re), fmt_rational(&mag))
                } else {
                    write!(f, "{}+{}*i", fmt_rational(&self.re), fmt_rational(&self.im))
                }
            }
        }
    }
}

/// Parses a rational written as an integer, `p/q`, or a finite decimal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("rational", "empty string"));
    }
    if let Ok(r) = Rational::from_str(s) {
        return Ok(r);
    }
    // finite decimals such as -0.25 or 1.5e-3
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::parse("rational", format!("bad exponent in `{s}`")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::parse("rational", format!("`{s}` is not a number")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|e| Error::parse("rational", e.to_string()))?;
    let shift = exp - frac_part.len() as i32;
    let ten = Rational::from(10);
    if shift >= 0 {
        for _ in 0..shift {
            value *= &ten;
        }
    } else {
        for _ in 0..(-shift) {
            value /= &ten;
        }
    }
    if neg {
        value = -value;
    }
    Ok(value)
}

impl FromStr for Qi {
    type Err = Error;

    /// Accepts `a`, `b*i`, `i`, `-i`, `a+b*i`, `a-b*i`, with rationals `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::parse("complex rational", "empty entry"));
        }
        if !t.ends_with('i') {
            return Ok(Qi::real(parse_rational(&t)?));
        }
        // split at the last sign that is not the leading one and not part of an exponent
        let body = &t[..t.len() - 1];
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let im_str = im_str.strip_suffix('*').unwrap_or(im_str);
        let im = match im_str {
            "" | "+" => Rational::from(1),
            "-" => Rational::from(-1),
            other => parse_rational(other)?,
        };
        let re = if re_str.is_empty() {
            Rational::new()
        } else {
            parse_rational(re_str)?
        };
        Ok(Qi { re, im })
    }
}

impl Field for Qi {
    type Ctx = ();
    const EXACT: bool = true;

    fn zero(_: &()) -> Self {
        Qi::default()
    }
    fn one(_: &()) -> Self {
        Qi::from_int(1)
    }
    fn add(&self, rhs: &Self) -> Self {
        Qi {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Qi {
            re: Rational::from(&self.re - &rhs.re),
            im: Rational::from(&self.im - &rhs.im),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_real() && rhs.is_real() {
            return Qi::real(Rational::from(&self.re * &rhs.re));
        }
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        Qi { re, im }
    }
    fn div(&self, rhs: &Self) -> Self {
        if rhs.is_real() {
            return Qi {
                re: Rational::from(&self.re / &rhs.re),
                im: Rational::from(&self.im / &rhs.re),
            };
        }
        let den = rhs.norm_sqr();
        let num = self.mul(&rhs.conj());
        Qi {
            re: num.re / &den,
            im: num.im / &den,
        }
    }
    fn neg(&self) -> Self {
        Qi {
            re: Rational::from(-&self.re),
            im: Rational::from(-&self.im),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal
    }
    fn magnitude_cmp(&self, other: &Self) -> Ordering {
        self.norm_sqr().cmp(&other.norm_sqr())
    }
    fn conj(&self) -> Self {
        Qi {
            re: self.re.clone(),
            im: Rational::from(-&self.im),
        }
    }
}

/// A working-precision real number.
#[derive(Clone, Debug, PartialEq)]
pub struct Real(pub Float);

/// Precision and absolute zero tolerance for [`Real`] matrices.
#[derive(Clone, Debug)]
pub struct RealCtx {
    pub prec: u32,
    pub tol: Float,
}

impl RealCtx {
    /// Tolerance `2^(-prec/2)`, i.e. roughly half the working digits.
    pub fn new(prec: u32) -> Self {
        let tol = Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)));
        RealCtx { prec, tol }
    }

    pub fn with_tol(prec: u32, tol: Float) -> Self {
        RealCtx { prec, tol }
    }

    pub fn real(&self, v: f64) -> Real {
        Real(Float::with_val(self.prec, v))
    }

    pub fn from_rational(&self, v: &Rational) -> Real {
        Real(Float::with_val(self.prec, v))
    }
}

impl Field for Real {
    type Ctx = RealCtx;
    const EXACT: bool = false;

    fn zero(ctx: &RealCtx) -> Self {
        Real(Float::new(ctx.prec))
    }
    fn one(ctx: &RealCtx) -> Self {
        Real(Float::with_val(ctx.prec, 1))
    }
    fn add(&self, rhs: &Self) -> Self {
        Real(Float::with_val(self.0.prec(), &self.0 + &rhs.0))
    }
    fn sub(&self, rhs: &Self) -> Self {
        Real(Float::with_val(self.0.prec(), &self.0 - &rhs.0))
    }
    fn mul(&self, rhs: &Self) -> Self {
        Real(Float::with_val(self.0.prec(), &self.0 * &rhs.0))
    }
    fn div(&self, rhs: &Self) -> Self {
        Real(Float::with_val(self.0.prec(), &self.0 / &rhs.0))
    }
    fn neg(&self) -> Self {
        Real(Float::with_val(self.0.prec(), -&self.0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn magnitude_cmp(&self, other: &Self) -> Ordering {
        self.0
            .clone()
            .abs()
            .partial_cmp(&other.0.clone().abs())
            .unwrap_or(Ordering::Equal)
    }
    fn negligible(&self, ctx: &RealCtx) -> bool {
        self.0.clone().abs() <= ctx.tol
    }
}

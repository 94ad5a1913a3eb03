//! Regularized determinants of the one-dimensional model operators and the
//! constants c_b = ∫_ℝ ⟨X⟩^{−2b−1} dX = Γ(b)Γ(½)/Γ(b+½).
//!
//! Sign convention: log det = −ζ'(0).

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::quadrature::tanh_sinh;

/// The exact value `rat · π^pi_pow`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactConstant {
    pub rat: Rational,
    pub pi_pow: u8,
}

impl ExactConstant {
    pub fn to_float(&self, ctx: &PrecisionContext) -> Float {
        let v = ctx.rational(&self.rat);
        if self.pi_pow == 1 {
            v * ctx.pi()
        } else {
            v
        }
    }

    pub fn ln(&self, ctx: &PrecisionContext) -> Float {
        let mut v = ctx.rational(&self.rat).ln();
        if self.pi_pow == 1 {
            v += ctx.pi().ln();
        }
        v
    }
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// c_b for b > 0 with denominator 1 or 2, via the duplication formula.
pub fn c_b_exact(b: &Rational) -> Result<ExactConstant> {
    if b.cmp0() != Ordering::Greater {
        return Err(Error::Domain(format!("c_b needs b > 0, got {b}")));
    }
    if *b.denom() == 1 {
        let bb = b
            .numer()
            .to_u32()
            .ok_or_else(|| Error::Domain(format!("b = {b} is too large")))?;
        let num = Integer::from(Integer::u_pow_u(4, bb)) * factorial(bb) * factorial(bb - 1);
        let den = factorial(2 * bb);
        return Ok(ExactConstant {
            rat: Rational::from((num, den)),
            pi_pow: 0,
        });
    }
    if *b.denom() == 2 {
        // b = k + 1/2
        let k = Rational::from(b - Rational::from((1, 2)));
        let k = k
            .numer()
            .to_u32()
            .ok_or_else(|| Error::Domain(format!("b = {b} is too large")))?;
        let num = factorial(2 * k);
        let fk = factorial(k);
        let den = Integer::from(Integer::u_pow_u(4, k)) * Integer::from(&fk * &fk);
        return Ok(ExactConstant {
            rat: Rational::from((num, den)),
            pi_pow: 1,
        });
    }
    Err(Error::Domain(format!(
        "c_b has no exact form for b = {b}; denominators must divide 2"
    )))
}

/// c_b as Γ(b)Γ(½)/Γ(b+½) with MPFR's Gamma; an oracle independent of
/// both the closed form and the quadrature.
pub fn c_b_gamma(b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if b.cmp0() != Some(Ordering::Greater) {
        return Err(Error::Domain("c_b needs b > 0".into()));
    }
    let p = ctx.bits();
    let gb = Float::with_val(p, b.gamma_ref());
    let half = Float::with_val(p, 0.5);
    let gh = Float::with_val(p, half.gamma_ref());
    let bh = Float::with_val(p, b + 0.5f64);
    let gbh = Float::with_val(p, bh.gamma_ref());
    Ok(gb * gh / gbh)
}

/// c_b by tanh-sinh quadrature after X = tan θ:
/// ∫_ℝ (1+X²)^{−b−½} dX = 2∫₀^{π/2} cos(θ)^{2b−1} dθ.
pub fn c_b_numeric(b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if b.cmp0() != Some(Ordering::Greater) {
        return Err(Error::Domain("c_b needs b > 0".into()));
    }
    let p = ctx.bits();
    let expo = Float::with_val(p, b * 2u32) - 1u32;
    let zero = ctx.zero();
    let top = ctx.pi() / 2u32;
    // cos θ = sin(π/2 − θ), and π/2 − θ is handed over exactly as `r`
    let v = tanh_sinh(&zero, &top, ctx, |_, _, r| {
        let s = Float::with_val(p, r.sin_ref());
        s.pow(&expo)
    })?;
    Ok(v * 2u32)
}

/// c_b for any positive rational b: exact when possible, Gamma otherwise.
pub fn c_b(b: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    match c_b_exact(b) {
        Ok(c) => Ok(c.to_float(ctx)),
        Err(_) if b.cmp0() == Ordering::Greater => c_b_gamma(&ctx.rational(b), ctx),
        Err(e) => Err(e),
    }
}

pub fn ln_c_b(b: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    match c_b_exact(b) {
        Ok(c) => Ok(c.ln(ctx)),
        Err(_) if b.cmp0() == Ordering::Greater => Ok(c_b_gamma(&ctx.rational(b), ctx)?.ln()),
        Err(e) => Err(e),
    }
}

/// log det Δ(a) = log c_{|a|} − sign(a)·log(2|a|), a ≠ 0.
pub fn logdet_delta(a: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    let sign = a.cmp0();
    if sign == Ordering::Equal {
        return Err(Error::Domain(
            "Δ(0) has a zero mode; log det Δ(a) needs a ≠ 0".into(),
        ));
    }
    let abs = Rational::from(a.abs_ref());
    let lc = ln_c_b(&abs, ctx)?;
    let l2a = ctx.rational(&Rational::from(&abs * 2u32)).ln();
    Ok(if sign == Ordering::Greater {
        lc - l2a
    } else {
        lc + l2a
    })
}

/// log det(Δ(a)+b²) − log det(Δ(−a)+b²) = −2 log((a + √(a²+b²))/b).
pub fn logdet_shifted_diff(a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if b.cmp0() != Some(Ordering::Greater) {
        return Err(Error::Domain("b must be positive".into()));
    }
    Ok(-2 * shifted_log(a, b, ctx))
}

/// log((a + √(a²+b²))/b), evaluated without cancellation for a < 0.
pub(crate) fn shifted_log(a: &Float, b: &Float, ctx: &PrecisionContext) -> Float {
    let p = ctx.bits();
    let a = Float::with_val(p, a);
    let b = Float::with_val(p, b);
    let r = (Float::with_val(p, a.square_ref()) + Float::with_val(p, b.square_ref())).sqrt();
    let num = if a.cmp0() != Some(Ordering::Less) {
        Float::with_val(p, &a + &r)
    } else {
        Float::with_val(p, b.square_ref()) / Float::with_val(p, &r - &a)
    };
    (num / b).ln()
}

/// ζ'(0) of the difference of the two shifted model zeta functions, from
/// ζ(s) = (2Γ(s+½)/(√π Γ(s))) ∫₀^a (u²+b²)^{−s−½} du by central
/// differences. Equals −logdet_shifted_diff(a, b).
pub fn zeta_diff_numeric(a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if b.cmp0() != Some(Ordering::Greater) {
        return Err(Error::Domain("b must be positive".into()));
    }
    let p = ctx.bits();
    if a.is_zero() {
        return Ok(ctx.zero());
    }
    let sqrt_pi = ctx.pi().sqrt();
    let b2 = Float::with_val(p, b.square_ref());
    let (lo, hi, sign) = if a.cmp0() == Some(Ordering::Greater) {
        (ctx.zero(), Float::with_val(p, a), 1i32)
    } else {
        (Float::with_val(p, a), ctx.zero(), -1i32)
    };
    let zeta = |s: &Float| -> Result<Float> {
        let expo = Float::with_val(p, -s) - 0.5f64;
        let integral = tanh_sinh(&lo, &hi, ctx, |u, _, _| {
            let base = Float::with_val(p, u.square_ref()) + &b2;
            base.pow(&expo)
        })?;
        let sh = Float::with_val(p, s + 0.5f64);
        let pref = Float::with_val(p, sh.gamma_ref()) * 2u32 / (Float::with_val(p, s.gamma_ref()) * &sqrt_pi);
        Ok(pref * integral * sign)
    };
    let h = ctx.ten_pow_neg_f(f64::from(ctx.digits()) / 4.0);
    let diff = |step: &Float| -> Result<Float> {
        let plus = zeta(step)?;
        let minus = zeta(&Float::with_val(p, -step))?;
        Ok((plus - minus) / Float::with_val(p, step * 2u32))
    };
    let d1 = diff(&h)?;
    let d2 = diff(&Float::with_val(p, &h * 2u32))?;
    // the O(h²) error of d2 is four times that of d1
    let residual = Float::with_val(p, &d1 - &d2).abs() / 3u32;
    let tol = ctx.ten_pow_neg_f(f64::from(ctx.digits()) / 4.0);
    if residual > tol {
        return Err(Error::NonConvergence(format!(
            "finite-difference residual {} exceeds 1e-{}",
            crate::precision::format_sci(&residual, 6),
            ctx.digits() / 4
        )));
    }
    Ok(d1)
}

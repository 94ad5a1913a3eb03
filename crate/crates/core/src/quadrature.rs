//! Tanh-sinh (double exponential) quadrature at arbitrary precision.
//!
//! The integrand receives `(x, x - a, b - x)` with the two endpoint distances
//! computed directly from the substitution, not by subtraction, so integrands
//! with algebraic endpoint singularities keep full relative accuracy.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

const MAX_LEVEL: u32 = 12;
/// Hard limit on the tanh-sinh parameter; e^{-π e^t} is far below any
/// working precision long before this.
const T_CAP: f64 = 12.0;

/// Integrates `f` over `[a, b]`. Levels are refined until two successive
/// estimates agree to `10^-(digits+2)` relative to the result.
pub fn tanh_sinh<F>(a: &Float, b: &Float, ctx: &PrecisionContext, f: F) -> Result<Float>
where
    F: Fn(&Float, &Float, &Float) -> Float,
{
    let prec = ctx.bits();
    let half = Float::with_val(prec, b - a) / 2u32;
    if half.is_zero() {
        return Ok(ctx.zero());
    }
    let center = Float::with_val(prec, a + b) / 2u32;
    let half_pi = ctx.pi() / 2u32;
    let tol = ctx.ten_pow_neg(ctx.digits() as i32 + 2);

    // The tail is cut once node contributions drop below `term_tol` relative
    // to the running sum; integrable endpoint singularities make that decay
    // slower than the weights alone, so no fixed cutoff is used.
    let term_tol = ctx.ten_pow_neg(ctx.digits() as i32 + 12);

    // contribution of the node at parameter t (both signs), already weighted
    let node = |t: &Float| -> Float {
        let sh = Float::with_val(prec, t.sinh_ref());
        let ch = Float::with_val(prec, t.cosh_ref());
        let u = Float::with_val(prec, &half_pi * &sh);
        // e = exp(-2u); 1 - tanh u = 2e/(1+e), 1 + tanh u = 2/(1+e)
        let e = Float::with_val(prec, &u * -2i32).exp();
        let one_plus_e = Float::with_val(prec, 1u32 + &e);
        let small = Float::with_val(prec, 2u32 * &e) / &one_plus_e * &half;
        let big = Float::with_val(prec, 2u32 / &one_plus_e) * &half;
        let cu = Float::with_val(prec, u.cosh_ref());
        let w = Float::with_val(prec, &half_pi * &ch) / Float::with_val(prec, cu.square_ref()) * &half;
        // right node: x = b - small, left node: x = a + small
        let xr = Float::with_val(prec, b - &small);
        let xl = Float::with_val(prec, a + &small);
        let fr = if small.is_zero() {
            Float::new(prec)
        } else {
            f(&xr, &big, &small)
        };
        let fl = if small.is_zero() {
            Float::new(prec)
        } else {
            f(&xl, &small, &big)
        };
        Float::with_val(prec, &fr + &fl) * &w
    };
    let center_weight = Float::with_val(prec, &half_pi * &half);
    let f0 = f(&center, &half, &half) * &center_weight;

    // adds nodes t = j·h for j = first, first+step, ... until the tail is negligible
    let add_nodes = |sum: &mut Float, h: &Float, first: u32, step: u32| {
        let mut j = first;
        let mut quiet = 0;
        loop {
            let t = Float::with_val(prec, j) * h;
            if t.to_f64() > T_CAP {
                break;
            }
            let c = node(&t);
            let small_term =
                Float::with_val(prec, c.abs_ref()) <= Float::with_val(prec, sum.abs_ref()) * &term_tol;
            *sum += c;
            if t.to_f64() > 1.0 && small_term {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            j += step;
        }
    };

    let mut h = Float::with_val(prec, 1u32);
    let mut sum = f0.clone();
    add_nodes(&mut sum, &h, 1, 1);
    let mut estimate = Float::with_val(prec, &sum * &h);

    for level in 1..=MAX_LEVEL {
        h /= 2u32;
        // only odd multiples of the new step are new nodes
        add_nodes(&mut sum, &h, 1, 2);
        let next = Float::with_val(prec, &sum * &h);
        if !next.is_finite() {
            return Err(Error::NonConvergence(
                "tanh-sinh produced a non-finite value".into(),
            ));
        }
        let diff = Float::with_val(prec, &next - &estimate).abs();
        let scale = Float::with_val(prec, next.abs_ref()).max(&Float::with_val(prec, 1u32));
        estimate = next;
        if level >= 3 && diff <= Float::with_val(prec, &tol * &scale) {
            return Ok(estimate);
        }
    }
    Err(Error::NonConvergence(format!(
        "tanh-sinh did not reach 1e-{} after {MAX_LEVEL} levels",
        ctx.digits() + 2
    )))
}

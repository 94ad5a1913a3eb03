//! SL(2,ℂ): closed forms B(m), b(ℓ), c(ℓ) and the per-cusp defect
//! log(m+2) + B(m)/2, checked against the general pipeline.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::defects::sym_power_report;
use crate::error::{Error, Result};
use crate::kostant::VqabEntry;
use crate::poly::Spectral;
use crate::precision::PrecisionContext;

/// a + √(a²+b²) without cancellation when a < 0.
fn plus_root(a: &Float, b2: &Float) -> Float {
    let p = a.prec();
    let r = (Float::with_val(p, a.square_ref()) + b2).sqrt();
    if a.is_sign_negative() {
        Float::with_val(p, b2) / (r - a)
    } else {
        r + a
    }
}

/// B(m) = Σ_{κ=0}^{m−1} log[(m/2−κ+√((m/2−κ)²+2(1+κ)(m−κ))) /
/// (m/2−κ−1+√((m/2−κ−1)²+2(1+κ)(m−κ)))].
pub fn b_m(m: u32, ctx: &PrecisionContext) -> Result<Float> {
    if m == 0 {
        return Err(Error::Domain("B(m) needs m ≥ 1".into()));
    }
    let half = ctx.rational(&Rational::from((m, 2u32)));
    let mut s = ctx.zero();
    for k in 0..m {
        let b2 = ctx.int(2 * (1 + k as i64) * (m - k) as i64);
        let a0 = Float::with_val(ctx.bits(), &half - k);
        let a1 = Float::with_val(ctx.bits(), &a0 - 1u32);
        s += (plus_root(&a0, &b2) / plus_root(&a1, &b2)).ln();
    }
    Ok(s)
}

/// b(ℓ) = (1/(2ℓ+2)) ∏_{k=−ℓ}^{ℓ−1} [(√((ℓ+1)²+ℓ²−k²)−k−1)/(√((ℓ+1)²+ℓ²−(k+1)²)−k)]^{1/2}.
pub fn b_ell(l: u32, ctx: &PrecisionContext) -> Result<Float> {
    if l == 0 {
        return Err(Error::Domain("b(ℓ) needs ℓ ≥ 1".into()));
    }
    let l = l as i64;
    let base = (l + 1) * (l + 1) + l * l;
    let mut prod = ctx.int(1);
    for k in -l..l {
        let num = ctx.int(base - k * k).sqrt() - (k + 1);
        let den = ctx.int(base - (k + 1) * (k + 1)).sqrt() - k;
        prod *= num / den;
    }
    Ok(prod.sqrt() / (2 * l + 2))
}

/// c(ℓ) = ∏_{j=1}^{ℓ−1}(√((ℓ+1)²+ℓ²−j²)+ℓ) / ∏_{j=1}^{ℓ}(√((ℓ+1)²+ℓ²−j²)+ℓ+1)
/// · ((√((ℓ+1)²+ℓ²)+ℓ)/(√((ℓ+1)²+ℓ²)+ℓ+1))^{1/2}.
pub fn c_ell(l: u32, ctx: &PrecisionContext) -> Result<Float> {
    if l == 0 {
        return Err(Error::Domain("c(ℓ) needs ℓ ≥ 1".into()));
    }
    let l = l as i64;
    let base = (l + 1) * (l + 1) + l * l;
    let root = |j: i64| ctx.int(base - j * j).sqrt();
    let mut v = ctx.int(1);
    for j in 1..l {
        v *= root(j) + l;
    }
    for j in 1..=l {
        v /= root(j) + (l + 1);
    }
    let tail = (root(0) + l) / (root(0) + (l + 1));
    Ok(v * tail.sqrt())
}

#[derive(Clone, Debug)]
pub struct BcRow {
    pub l: u32,
    pub b: Float,
    pub c: Float,
    /// |c(ℓ)/c(2) − b(ℓ)/b(2)|.
    pub deviation: Float,
}

pub fn bc_table(l_range: std::ops::RangeInclusive<u32>, ctx: &PrecisionContext) -> Result<Vec<BcRow>> {
    let (b2, c2) = (b_ell(2, ctx)?, c_ell(2, ctx)?);
    l_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|l| {
            let b = b_ell(l, ctx)?;
            let c = c_ell(l, ctx)?;
            let deviation =
                (Float::with_val(ctx.bits(), &c / &c2) - Float::with_val(ctx.bits(), &b / &b2)).abs();
            Ok(BcRow { l, b, c, deviation })
        })
        .collect()
}

/// max_{2≤ℓ≤lmax} |c(ℓ)/c(2) − b(ℓ)/b(2)|.
pub fn verify_int6b(l_max: u32, ctx: &PrecisionContext) -> Result<Float> {
    if l_max < 2 {
        return Err(Error::Precondition("lmax must be at least 2".into()));
    }
    let rows = bc_table(2..=l_max, ctx)?;
    Ok(rows
        .into_iter()
        .map(|r| r.deviation)
        .fold(ctx.zero(), |a, b| a.max(&b)))
}

/// |b(ℓ) − exp(−B(2ℓ)/2)/(2ℓ+2)|.
pub fn b_vs_b_check(l: u32, ctx: &PrecisionContext) -> Result<Float> {
    let b = b_ell(l, ctx)?;
    let big = b_m(2 * l, ctx)?;
    let other = (-big / 2u32).exp() / (2 * l + 2);
    Ok((b - other).abs())
}

/// The V_{q,a,b} list of Sym^m: a = j−m/2+1 in degree 0 and a = j−m/2 in
/// degree 1, with b² = 2(j+1)(m−j) for 0 ≤ j < m.
pub fn sym_power_vqab(m: u32) -> Result<Vec<VqabEntry>> {
    let mut acc: BTreeMap<(usize, Rational, Rational), usize> = BTreeMap::new();
    let half = Rational::from((m, 2u32));
    for j in 0..m {
        let b2 = Rational::from(2 * (j as u64 + 1) * (m - j) as u64);
        let a1 = Rational::from(&half - j as u64);
        let a1 = Rational::from(-a1);
        let a0 = Rational::from(&a1 + 1u32);
        *acc.entry((0, a0, b2.clone())).or_default() += 1;
        *acc.entry((1, a1, b2)).or_default() += 1;
    }
    let mut out: Vec<VqabEntry> = acc
        .into_iter()
        .map(|((q, a, b2), mult)| VqabEntry {
            q,
            a,
            b2: Spectral::Exact(b2),
            mult,
        })
        .collect();
    crate::kostant::sort_entries(&mut out);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Dim3Report {
    pub m: u32,
    pub kappa: u64,
    pub b_m: Float,
    /// Per-cusp defect log(m+2) + B(m)/2.
    pub defect: Float,
    /// −κ · defect.
    pub total: Float,
    /// |defect − (α+β)/2| with α, β from the Kostant pipeline.
    pub cross_check_residual: Float,
}

pub fn defect_dim3(m: u32, kappa: u64, ctx: &PrecisionContext) -> Result<Dim3Report> {
    let big = b_m(m, ctx)?;
    let defect = ctx.int(m as i64 + 2).ln() + Float::with_val(ctx.bits(), &big / 2u32);
    let total = -Float::with_val(ctx.bits(), &defect * kappa);
    let report = sym_power_report(m, kappa, ctx)?;
    let cross_check_residual = Float::with_val(ctx.bits(), &defect - &report.c_rho).abs();
    Ok(Dim3Report {
        m,
        kappa,
        b_m: big,
        defect,
        total,
        cross_check_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn tiny(x: &Float) -> bool {
        x.clone().abs() < ctx().ten_pow_neg(55)
    }

    #[test]
    fn b_m_small_cases() {
        let c = ctx();
        let phi = (c.int(5).sqrt() + 1u32) / 2u32;
        assert!(tiny(&(b_m(2, &c).unwrap() - phi.ln() * 2u32)));
        assert!(tiny(&(b_m(1, &c).unwrap() - c.int(2).ln())));
        assert!((1..40).all(|m| b_m(m, &c).unwrap().is_sign_positive()));
        assert!(b_m(0, &c).is_err());
    }

    #[test]
    fn b_and_c_at_one() {
        let c = ctx();
        let s5 = c.int(5).sqrt();
        assert!(tiny(&(b_ell(1, &c).unwrap() - (s5.clone() - 1u32) / 8u32)));
        let expect = ((s5.clone() + 1u32) / (s5 + 2u32)).sqrt() / 4u32;
        assert!(tiny(&(c_ell(1, &c).unwrap() - expect)));
    }

    #[test]
    fn b_relation() {
        let c = ctx();
        for l in 1..12 {
            assert!(tiny(&b_vs_b_check(l, &c).unwrap()), "ℓ={l}");
        }
    }

    #[test]
    fn closed_form_vqab_matches_kostant() {
        let c = ctx();
        for m in 1..6 {
            let hd = crate::kostant::decompose(&crate::kostant::build_sym_power_rep(m), &c).unwrap();
            assert_eq!(hd.vqab, sym_power_vqab(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn defect_m2() {
        let c = ctx();
        let r = defect_dim3(2, 1, &c).unwrap();
        let phi = (c.int(5).sqrt() + 1u32) / 2u32;
        assert!(tiny(&(r.defect.clone() - c.int(4).ln() - phi.ln())));
        assert!(tiny(&(r.total.clone() + &r.defect)));
        assert!(tiny(&r.cross_check_residual));
        assert!(defect_dim3(3, 0, &c).unwrap().total.is_zero());
    }
}

//! The torsion-defect constants A_P, B_P, α, β, the finite-part term and the
//! comparison formulas assembled from them.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::kostant::{HarmonicDecomposition, VqabEntry};
use crate::modeldet::{ln_c_b, shifted_log};
use crate::precision::{format_float, PrecisionContext};
use crate::repdata::{lambda_ladder, HighestWeight, LambdaLadder};

/// dim 𝓗^q(𝔫;V) per degree, with the middle degree split by the sign of W+n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyDims {
    dims: Vec<usize>,
    plus_dim: usize,
    minus_dim: usize,
}

impl CohomologyDims {
    pub fn new(dims: Vec<usize>, plus_dim: usize, minus_dim: usize) -> Result<Self> {
        if dims.len() % 2 == 0 {
            return Err(Error::Validation("dims needs 2n+1 entries".into()));
        }
        let n = dims.len() / 2;
        if plus_dim + minus_dim != dims[n] {
            return Err(Error::Validation(format!(
                "plus {plus_dim} + minus {minus_dim} != dims[n] = {}",
                dims[n]
            )));
        }
        let euler: i64 = dims
            .iter()
            .enumerate()
            .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        if euler != 0 {
            return Err(Error::Validation(format!(
                "Euler characteristic of dims is {euler}, not 0"
            )));
        }
        Ok(CohomologyDims {
            dims,
            plus_dim,
            minus_dim,
        })
    }

    pub fn n(&self) -> usize {
        self.dims.len() / 2
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, q: usize) -> usize {
        self.dims[q]
    }

    pub fn plus_dim(&self) -> usize {
        self.plus_dim
    }

    pub fn minus_dim(&self) -> usize {
        self.minus_dim
    }

    pub fn is_palindromic(&self) -> bool {
        let t = self.dims.len() - 1;
        (0..self.dims.len()).all(|q| self.dims[q] == self.dims[t - q])
    }
}

impl TryFrom<&HarmonicDecomposition> for CohomologyDims {
    type Error = Error;

    fn try_from(hd: &HarmonicDecomposition) -> Result<Self> {
        if hd.zero_dim > 0 {
            return Err(Error::NotAcyclic(format!(
                "W+n vanishes on {} middle-degree harmonic forms",
                hd.zero_dim
            )));
        }
        CohomologyDims::new(hd.dims.clone(), hd.plus_dim, hd.minus_dim)
    }
}

fn sign(q: usize) -> i32 {
    if q % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_inputs(ladder: &LambdaLadder, dims: &CohomologyDims) -> Result<()> {
    let n = ladder.n();
    if dims.n() != n {
        return Err(Error::Precondition(format!(
            "ladder has n={n} but dims have n={}",
            dims.n()
        )));
    }
    if ladder.lam_plus().cmp0() != Ordering::Greater {
        return Err(Error::NotAcyclic(format!(
            "λ⁺ = {} is not positive",
            ladder.lam_plus()
        )));
    }
    for q in 0..n {
        if ladder.lam(q).cmp0() != Ordering::Greater {
            return Err(Error::NotAcyclic(format!(
                "λ_{q} = {} is not positive",
                ladder.lam(q)
            )));
        }
    }
    Ok(())
}

fn check_odd(ladder: &LambdaLadder, dims: &CohomologyDims) -> Result<()> {
    check_inputs(ladder, dims)?;
    if ladder.n() % 2 == 0 {
        return Err(Error::Precondition(format!("n = {} is even", ladder.n())));
    }
    if !dims.is_palindromic() {
        return Err(Error::Precondition("dims are not palindromic".into()));
    }
    Ok(())
}

/// log(2|λ|).
fn log_two(lam: &Rational, ctx: &PrecisionContext) -> Float {
    ctx.rational(&(Rational::from(lam.abs_ref()) * 2u32)).ln()
}

/// ½Σ_{q<n}(−1)^q log c_{λ_q} dims[q] + ½Σ_{q>n}(−1)^q log c_{−λ_q} dims[q]
/// + ((−1)ⁿ/2) log c_{λ⁺} dims[n]; the part shared by A_P and the finite part.
fn c_sum(ladder: &LambdaLadder, dims: &CohomologyDims, ctx: &PrecisionContext) -> Result<Float> {
    let n = ladder.n();
    let mut s = ctx.zero();
    for q in 0..=2 * n {
        let d = dims.get(q);
        if d == 0 {
            continue;
        }
        let b = match q.cmp(&n) {
            Ordering::Less => ladder.lam(q).clone(),
            Ordering::Greater => Rational::from(-ladder.lam(q)),
            Ordering::Equal => ladder.lam_plus().clone(),
        };
        s += ln_c_b(&b, ctx)? * (sign(q) as i64 * d as i64);
    }
    Ok(s / 2u32)
}

/// A_P: ½Σ_{q<n}(−1)^q[log c_{λ_q} − (2q+1)log(2λ_q)]dims[q]
/// + ½Σ_{q>n}(−1)^q[log c_{−λ_q} + (2q+1)log(−2λ_q)]dims[q] + ((−1)ⁿ/2)log c_{λ⁺}dims[n].
pub fn a_term(ladder: &LambdaLadder, dims: &CohomologyDims, ctx: &PrecisionContext) -> Result<Float> {
    check_inputs(ladder, dims)?;
    let n = ladder.n();
    let mut s = c_sum(ladder, dims, ctx)?;
    let mut logs = ctx.zero();
    for q in (0..=2 * n).filter(|&q| q != n) {
        let d = dims.get(q);
        if d == 0 {
            continue;
        }
        let coef = (2 * q + 1) as i64 * d as i64 * sign(q) as i64;
        let term = log_two(ladder.lam(q), ctx) * coef;
        if q < n {
            logs -= term;
        } else {
            logs += term;
        }
    }
    s += logs / 2u32;
    Ok(s)
}

/// A_P for odd n and palindromic dims:
/// ((−1)ⁿ/2)log c_{λ⁺}dims[n] + Σ_{q<n}(−1)^q[log c_{λ_q} + (2n−2q)log(2λ_q)]dims[q].
pub fn a_term_odd(ladder: &LambdaLadder, dims: &CohomologyDims, ctx: &PrecisionContext) -> Result<Float> {
    check_odd(ladder, dims)?;
    let n = ladder.n();
    let mut s = ln_c_b(ladder.lam_plus(), ctx)? * (sign(n) as i64 * dims.get(n) as i64) / 2u32;
    for q in 0..n {
        let d = dims.get(q);
        if d == 0 {
            continue;
        }
        let inner = ln_c_b(ladder.lam(q), ctx)? + log_two(ladder.lam(q), ctx) * (2 * (n - q)) as u64;
        s += inner * (sign(q) as i64 * d as i64);
    }
    Ok(s)
}

fn shifted_sum(vqab: &[VqabEntry], ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.bits();
    let mut s = ctx.zero();
    for e in vqab {
        if !e.b2.is_positive() {
            return Err(Error::Domain(format!(
                "entry q={} a={} has b² = {} ≤ 0",
                e.q, e.a, e.b2
            )));
        }
        let b = e.b2.to_float(p).sqrt();
        let l = shifted_log(&ctx.rational(&e.a), &b, ctx);
        s += l * (sign(e.q) as i64 * e.mult as i64);
    }
    Ok(s)
}

/// B_P = Σ(−1)^q dim V_{q,a,b} log((a+√(a²+b²))/b) over the entries in ker d*.
pub fn b_term(vqab: &[VqabEntry], ctx: &PrecisionContext) -> Result<Float> {
    shifted_sum(vqab, ctx)
}

/// β; the same sum as [`b_term`].
pub fn beta(vqab: &[VqabEntry], ctx: &PrecisionContext) -> Result<Float> {
    shifted_sum(vqab, ctx)
}

/// α = ½Σ_{q≠n}(−1)^q(2q+1)sign(q−n)log(2|λ_q|)dims[q].
pub fn alpha(ladder: &LambdaLadder, dims: &CohomologyDims, ctx: &PrecisionContext) -> Result<Float> {
    check_inputs(ladder, dims)?;
    let n = ladder.n();
    let mut s = ctx.zero();
    for q in (0..=2 * n).filter(|&q| q != n) {
        let d = dims.get(q);
        if d == 0 {
            continue;
        }
        let side = if q < n { -1 } else { 1 };
        let coef = sign(q) as i64 * (2 * q + 1) as i64 * side * d as i64;
        s += log_two(ladder.lam(q), ctx) * coef;
    }
    Ok(s / 2u32)
}

/// α for odd n and palindromic dims: 2Σ_{q<n}(−1)^q(n−q)log(2λ_q)dims[q].
pub fn alpha_odd(ladder: &LambdaLadder, dims: &CohomologyDims, ctx: &PrecisionContext) -> Result<Float> {
    check_odd(ladder, dims)?;
    let n = ladder.n();
    let mut s = ctx.zero();
    for q in 0..n {
        let d = dims.get(q);
        if d == 0 {
            continue;
        }
        s += log_two(ladder.lam(q), ctx) * (sign(q) as i64 * (n - q) as i64 * d as i64);
    }
    Ok(s * 2u32)
}

/// The finite part of log ∏_q[μ^q_M|ω^q]^{(−1)^q}: κ times the log c sum.
pub fn fp_ratio(
    ladder: &LambdaLadder,
    dims: &CohomologyDims,
    kappa: u64,
    ctx: &PrecisionContext,
) -> Result<Float> {
    check_inputs(ladder, dims)?;
    Ok(c_sum(ladder, dims, ctx)? * kappa)
}

#[derive(Clone, Debug)]
pub struct DefectReport {
    /// Symmetric power index, when the report belongs to the d=3 family.
    pub m: Option<u64>,
    pub kappa: u64,
    pub alpha: Float,
    pub beta: Float,
    pub a_term: Option<Float>,
    pub b_term: Option<Float>,
    pub fp_ratio: Option<Float>,
    pub total_defect: Float,
    pub c_rho: Float,
}

/// −(κ/2)(α+β) and c_ϱ = (α+β)/2. The A_P, B_P and finite-part fields are
/// left empty; [`defect_report`] fills them.
pub fn total_defect(alpha: &Float, beta: &Float, kappa: u64) -> DefectReport {
    let p = alpha.prec().max(beta.prec());
    let c_rho = Float::with_val(p, alpha + beta) / 2u32;
    let total_defect = -Float::with_val(p, &c_rho * kappa);
    DefectReport {
        m: None,
        kappa,
        alpha: alpha.clone(),
        beta: beta.clone(),
        a_term: None,
        b_term: None,
        fp_ratio: None,
        total_defect,
        c_rho,
    }
}

/// Every field of the report from ladder, dims and V_{q,a,b} data.
pub fn defect_report(
    ladder: &LambdaLadder,
    dims: &CohomologyDims,
    vqab: &[VqabEntry],
    kappa: u64,
    ctx: &PrecisionContext,
) -> Result<DefectReport> {
    let a = alpha(ladder, dims, ctx)?;
    let b = beta(vqab, ctx)?;
    let mut r = total_defect(&a, &b, kappa);
    r.a_term = Some(a_term(ladder, dims, ctx)?);
    r.b_term = Some(b_term(vqab, ctx)?);
    r.fp_ratio = Some(fp_ratio(ladder, dims, kappa, ctx)?);
    Ok(r)
}

/// The full report for Sym^m of SL(2,ℂ), running the Kostant decomposition.
pub fn sym_power_report(m: u32, kappa: u64, ctx: &PrecisionContext) -> Result<DefectReport> {
    let hw = HighestWeight::sym_power(m);
    let ladder = lambda_ladder(&hw);
    let hd = crate::kostant::decompose(&crate::kostant::build_sym_power_rep(m), ctx)?;
    let dims = CohomologyDims::try_from(&hd)?;
    let mut r = defect_report(&ladder, &dims, &hd.vqab, kappa, ctx)?;
    r.m = Some(m as u64);
    Ok(r)
}

/// Reads λ_q off the W+n eigenvalues of the harmonic forms, for bundles given
/// by matrices rather than a highest weight. Each degree must carry a single
/// eigenvalue (its antisymmetric partner is used when a degree is empty).
pub fn ladder_from_harmonics(hd: &HarmonicDecomposition) -> Result<LambdaLadder> {
    let n = hd.n;
    let single = |q: usize| -> Result<Option<Rational>> {
        match hd.weights[q].as_slice() {
            [] => Ok(None),
            [(w, _)] => Ok(Some(w.clone())),
            _ => Err(Error::Validation(format!(
                "degree {q} carries several W+n eigenvalues"
            ))),
        }
    };
    let mut lam = vec![Rational::new(); 2 * n + 1];
    for q in 0..n {
        let v = match (single(q)?, single(2 * n - q)?) {
            (Some(a), Some(b)) if Rational::from(&a + &b) != 0 => {
                return Err(Error::Validation(format!(
                    "λ_{q} = {a} but λ_{} = {b}",
                    2 * n - q
                )))
            }
            (Some(a), _) => a,
            (None, Some(b)) => -b,
            (None, None) => {
                return Err(Error::Validation(format!(
                    "degrees {q} and {} are empty",
                    2 * n - q
                )))
            }
        };
        lam[2 * n - q] = Rational::from(-&v);
        lam[q] = v;
    }
    let mid: Vec<&Rational> = hd.weights[n].iter().map(|(w, _)| w).collect();
    let plus = match mid.as_slice() {
        [w] => Rational::from(w.abs_ref()),
        [a, b] if Rational::from(*a + *b) == 0 => Rational::from(a.abs_ref()),
        _ => return Err(Error::Validation("middle degree must carry ±λ⁺".into())),
    };
    lam[n] = plus.clone();
    LambdaLadder::from_parts(lam, plus)
}

impl DefectReport {
    /// κ(α+β) − [κ(A_P+B_P) − fp], which vanishes identically.
    pub fn consistency_residual(&self) -> Option<Float> {
        let (a, b, fp) = (
            self.a_term.as_ref()?,
            self.b_term.as_ref()?,
            self.fp_ratio.as_ref()?,
        );
        let p = self.alpha.prec();
        let lhs = Float::with_val(p, &self.alpha + &self.beta) * self.kappa;
        let rhs = Float::with_val(p, a + b) * self.kappa - fp;
        Some(lhs - rhs)
    }

    /// (κ/2)(α+β) − [κ(A_P+B_P) − fp]: the same comparison with the α+β side
    /// halved. Nonzero unless κ(α+β) = 0.
    pub fn half_weight_residual(&self) -> Option<Float> {
        let (a, b, fp) = (
            self.a_term.as_ref()?,
            self.b_term.as_ref()?,
            self.fp_ratio.as_ref()?,
        );
        let p = self.alpha.prec();
        let lhs = Float::with_val(p, &self.alpha + &self.beta) * self.kappa / 2u32;
        let rhs = Float::with_val(p, a + b) * self.kappa - fp;
        Some(lhs - rhs)
    }

    /// Whether the consistency residual is below 10^(−digits+8). Reports
    /// without A_P/B_P/finite part count as consistent.
    pub fn is_consistent(&self, ctx: &PrecisionContext) -> bool {
        match self.consistency_residual() {
            Some(r) => r.abs() < ctx.ten_pow_neg(ctx.digits() as i32 - 8) * (1 + self.kappa),
            None => true,
        }
    }

    pub const FIELDS: [&'static str; 9] = [
        "m",
        "kappa",
        "alpha",
        "beta",
        "aTerm",
        "bTerm",
        "fpRatio",
        "totalDefect",
        "cRho",
    ];

    /// Field values in [`Self::FIELDS`] order; absent values are empty.
    pub fn values(&self, sig: usize) -> Vec<String> {
        let f = |x: &Option<Float>| x.as_ref().map(|v| format_float(v, sig)).unwrap_or_default();
        vec![
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.kappa.to_string(),
            format_float(&self.alpha, sig),
            format_float(&self.beta, sig),
            f(&self.a_term),
            f(&self.b_term),
            f(&self.fp_ratio),
            format_float(&self.total_defect, sig),
            format_float(&self.c_rho, sig),
        ]
    }

    /// `key=value` lines; absent fields are omitted.
    pub fn to_kv(&self, sig: usize) -> String {
        let mut out = String::new();
        for (k, v) in Self::FIELDS.iter().zip(self.values(sig)) {
            if !v.is_empty() {
                let _ = writeln!(out, "{k}={v}");
            }
        }
        out
    }

    pub fn write_csv<W: std::io::Write>(reports: &[DefectReport], sig: usize, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
        wr.write_record(Self::FIELDS).map_err(io)?;
        for r in reports {
            wr.write_record(r.values(sig)).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Internal(format!("csv: {e}")))?;
        Ok(())
    }
}

/// logτ(X) − ½logτ(Z) + total defect; pass logτ(Z) = 0 when n is odd.
pub fn assemble_log_t(log_tau_x: &Float, log_tau_z: &Float, report: &DefectReport) -> Float {
    let p = log_tau_x.prec().max(report.total_defect.prec());
    Float::with_val(p, log_tau_x) - Float::with_val(p, log_tau_z) / 2u32 + &report.total_defect
}

/// Regularized torsion of the cusps:
/// −½logτ(Z) − (κ/2)(α+β) + c(n)·rank E·vol(∂F) − κ((−1)ⁿ/4)log(λ⁺)dims[n]
/// − (κ/4)Σ_{q≠n}(−1)^q log|λ_q| dims[q]. c(n) comes from outside.
#[allow(clippy::too_many_arguments)]
pub fn cusp_torsion_ff2(
    log_tau_z: &Float,
    kappa: u64,
    ladder: &LambdaLadder,
    dims: &CohomologyDims,
    vqab: &[VqabEntry],
    c_n: Option<&Float>,
    rank_e: u64,
    vol_boundary: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let c_n = c_n.ok_or_else(|| Error::Precondition("c(n) must be supplied".into()))?;
    let n = ladder.n();
    let report = total_defect(&alpha(ladder, dims, ctx)?, &beta(vqab, ctx)?, kappa);
    let mut s = -Float::with_val(ctx.bits(), log_tau_z) / 2u32 + &report.total_defect;
    s += Float::with_val(ctx.bits(), c_n * vol_boundary) * rank_e;
    let mid = ctx.rational(ladder.lam_plus()).ln() * (sign(n) as i64 * dims.get(n) as i64);
    let mut side = ctx.zero();
    for q in (0..=2 * n).filter(|&q| q != n) {
        let d = dims.get(q);
        if d > 0 {
            side += ctx.rational(&Rational::from(ladder.lam(q).abs_ref())).ln() * (sign(q) as i64 * d as i64);
        }
    }
    s -= (mid + side) * kappa / 4u32;
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuspCharacter {
    Trivial,
    Nontrivial,
}

/// Number of cusps whose boundary cohomology contributes.
pub fn cusp_count(cusps: &[CuspCharacter]) -> u64 {
    cusps.iter().filter(|c| **c == CuspCharacter::Trivial).count() as u64
}

#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub m: u32,
    pub alpha: Float,
    pub beta: Float,
    /// Per-cusp defect (α+β)/2.
    pub defect: Float,
    /// defect/(m log m); undefined at m = 1.
    pub ratio: Option<Float>,
}

#[derive(Clone, Debug, Default)]
pub struct GrowthScan {
    pub rows: Vec<GrowthRow>,
    pub skipped: Vec<(u32, String)>,
}

/// α, β and the per-cusp defect for Sym^m over a range of m. α comes from the
/// ladder with dims (1,2,1); β from the closed-form V_{q,a,b} list of Sym^m,
/// so large m does not need the Kostant decomposition.
pub fn defect_growth_scan(range: RangeInclusive<u32>, ctx: &PrecisionContext) -> Result<GrowthScan> {
    defect_growth_scan_at(&range.collect::<Vec<_>>(), ctx)
}

/// [`defect_growth_scan`] over an explicit list of m, e.g. a strided range.
/// Rows come back in the order given.
pub fn defect_growth_scan_at(ms: &[u32], ctx: &PrecisionContext) -> Result<GrowthScan> {
    if ms.is_empty() {
        return Err(Error::Precondition("empty m range".into()));
    }
    let results: Vec<(u32, Result<GrowthRow>)> =
        ms.par_iter().copied().map(|m| (m, growth_row(m, ctx))).collect();
    let mut scan = GrowthScan::default();
    for (m, r) in results {
        match r {
            Ok(row) => scan.rows.push(row),
            Err(e) => scan.skipped.push((m, e.to_string())),
        }
    }
    Ok(scan)
}

fn growth_row(m: u32, ctx: &PrecisionContext) -> Result<GrowthRow> {
    let ladder = lambda_ladder(&HighestWeight::sym_power(m));
    let dims = CohomologyDims::new(vec![1, 2, 1], 1, 1)?;
    let a = alpha(&ladder, &dims, ctx)?;
    let b = beta(&crate::dim3::sym_power_vqab(m)?, ctx)?;
    let defect = Float::with_val(ctx.bits(), &a + &b) / 2u32;
    let ratio = (m >= 2).then(|| {
        let mlogm = ctx.int(m as i64).ln() * m;
        Float::with_val(ctx.bits(), &defect / &mlogm)
    });
    Ok(GrowthRow {
        m,
        alpha: a,
        beta: b,
        defect,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Spectral;

    fn close(a: &Float, b: &Float, tol: i32) -> bool {
        let ctx = PrecisionContext::default();
        Float::with_val(ctx.bits(), a - b).abs() < ctx.ten_pow_neg(tol)
    }

    fn ladder_d3(m: u32) -> LambdaLadder {
        lambda_ladder(&HighestWeight::sym_power(m))
    }

    fn d3_dims() -> CohomologyDims {
        CohomologyDims::new(vec![1, 2, 1], 1, 1).unwrap()
    }

    fn ln_q(ctx: &PrecisionContext, p: i64, q: i64) -> Float {
        ctx.rational(&Rational::from((p, q))).ln()
    }

    #[test]
    fn a_term_d3_m2() {
        let ctx = PrecisionContext::default();
        let a = a_term(&ladder_d3(2), &d3_dims(), &ctx).unwrap();
        assert!(close(&a, &ln_q(&ctx, 32, 3), 55));
        let odd = a_term_odd(&ladder_d3(2), &d3_dims(), &ctx).unwrap();
        assert!(close(&a, &odd, 55));
    }

    #[test]
    fn fp_ratio_d3() {
        let ctx = PrecisionContext::default();
        let fp = fp_ratio(&ladder_d3(2), &d3_dims(), 1, &ctx).unwrap();
        assert!(close(&fp, &ln_q(&ctx, 2, 3), 55));
        assert!(fp_ratio(&ladder_d3(2), &d3_dims(), 0, &ctx).unwrap().is_zero());
        // m=4: λ₀ = 3, λ⁺ = 2
        let fp4 = fp_ratio(&ladder_d3(4), &d3_dims(), 2, &ctx).unwrap();
        let expect =
            (ln_c_b(&Rational::from(3), &ctx).unwrap() - ln_c_b(&Rational::from(2), &ctx).unwrap()) * 2u32;
        assert!(close(&fp4, &expect, 55));
    }

    #[test]
    fn alpha_d3_closed_form() {
        let ctx = PrecisionContext::default();
        for m in 1..12 {
            let a = alpha(&ladder_d3(m), &d3_dims(), &ctx).unwrap();
            let expect = ctx.int(m as i64 + 2).ln() * 2u32;
            assert!(close(&a, &expect, 55));
            assert!(close(
                &a,
                &alpha_odd(&ladder_d3(m), &d3_dims(), &ctx).unwrap(),
                55
            ));
        }
    }

    #[test]
    fn beta_m2_is_twice_log_golden_ratio() {
        let ctx = PrecisionContext::default();
        let v = |q, a: i64| VqabEntry {
            q,
            a: Rational::from(a),
            b2: Spectral::Exact(Rational::from(4)),
            mult: 1,
        };
        let vq = vec![v(0, 0), v(0, 1), v(1, -1), v(1, 0)];
        let phi = (ctx.int(5).sqrt() + 1u32) / 2u32;
        assert!(close(&beta(&vq, &ctx).unwrap(), &(phi.ln() * 2u32), 55));
        assert_eq!(beta(&vq, &ctx).unwrap(), b_term(&vq, &ctx).unwrap());
        assert!(beta(&[], &ctx).unwrap().is_zero());
        let bad = VqabEntry {
            b2: Spectral::Exact(Rational::new()),
            ..v(0, 1)
        };
        assert!(matches!(beta(&[bad], &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn sym_power_report_consistency() {
        let ctx = PrecisionContext::default();
        let r = sym_power_report(2, 1, &ctx).unwrap();
        assert!(r.is_consistent(&ctx));
        let half = r.half_weight_residual().unwrap();
        assert!(half.abs() > 1e-3);
        let expect = -(ctx.int(4).ln() + ((ctx.int(5).sqrt() + 1u32) / 2u32).ln());
        assert!(close(&r.total_defect, &expect, 55));
        let kv = r.to_kv(20);
        assert!(kv.starts_with("m=2\nkappa=1\nalpha="));
    }

    #[test]
    fn preconditions() {
        let ctx = PrecisionContext::default();
        assert!(matches!(
            a_term_odd(&ladder_d3(0), &d3_dims(), &ctx),
            Err(Error::NotAcyclic(_))
        ));
        assert!(CohomologyDims::new(vec![1, 1, 1], 1, 0).is_err());
        let five = LambdaLadder::from_parts(
            [3, 2, 1, -2, -3].iter().map(|&v| Rational::from(v)).collect(),
            Rational::from(1),
        )
        .unwrap();
        let dims5 = CohomologyDims::new(vec![1, 4, 6, 4, 1], 3, 3).unwrap();
        assert!(matches!(
            alpha_odd(&five, &dims5, &ctx),
            Err(Error::Precondition(_))
        ));
        assert!(alpha(&five, &dims5, &ctx).is_ok());
        let zero = CohomologyDims::new(vec![0, 0, 0], 0, 0).unwrap();
        assert!(a_term(&ladder_d3(2), &zero, &ctx).unwrap().is_zero());
    }

    #[test]
    fn total_defect_and_assembly() {
        let ctx = PrecisionContext::default();
        let r = total_defect(&ctx.int(3), &ctx.int(5), 0);
        assert!(r.total_defect.is_zero());
        assert_eq!(r.c_rho, 4);
        let r1 = total_defect(&ctx.int(3), &ctx.int(5), 1);
        assert_eq!(assemble_log_t(&ctx.int(10), &ctx.int(2), &r1), 5);
    }

    #[test]
    fn cusp_torsion_d3_m2() {
        let ctx = PrecisionContext::default();
        let hd = crate::kostant::decompose(&crate::kostant::build_sym_power_rep(2), &ctx).unwrap();
        let z = ctx.zero();
        let v = cusp_torsion_ff2(&z, 1, &ladder_d3(2), &d3_dims(), &hd.vqab, Some(&z), 1, &z, &ctx).unwrap();
        let ab = alpha(&ladder_d3(2), &d3_dims(), &ctx).unwrap() + beta(&hd.vqab, &ctx).unwrap();
        // λ⁺ = 1 contributes log 1; the q = 0, 2 terms give −½ log 2
        let expect = -ab / 2u32 - ctx.int(2).ln() / 2u32;
        assert!(close(&v, &expect, 55));
        assert!(cusp_torsion_ff2(&z, 1, &ladder_d3(2), &d3_dims(), &hd.vqab, None, 1, &z, &ctx).is_err());
    }

    #[test]
    fn counting_cusps() {
        use CuspCharacter::*;
        assert_eq!(cusp_count(&[]), 0);
        assert_eq!(cusp_count(&[Trivial, Nontrivial, Trivial]), 2);
        assert_eq!(cusp_count(&[Nontrivial; 3]), 0);
    }
}

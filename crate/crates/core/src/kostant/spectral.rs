//! Harmonic spaces and the joint (W+n, K²) spectrum, computed block by block
//! on the W+n eigenspaces of each degree.

use std::cmp::Ordering;

use rug::Rational;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::poly::{charpoly, real_roots, Poly, Spectral};
use crate::precision::PrecisionContext;
use crate::scalar::Qi;

use super::bundle::RepBundle;
use super::complex::CochainComplex;

/// One joint eigenspace V_{q,a,b} ⊂ ker d* ∩ (ker K)⊥ in degree q.
#[derive(Clone, Debug, PartialEq)]
pub struct VqabEntry {
    pub q: usize,
    pub a: Rational,
    pub b2: Spectral,
    pub mult: usize,
}

#[derive(Clone, Debug)]
pub struct HarmonicDecomposition {
    pub n: usize,
    pub dims: Vec<usize>,
    /// Columns span 𝓗^q, in the original basis of Λ^q𝔫*⊗V.
    pub bases: Vec<Mat<Qi>>,
    /// (W+n eigenvalue, multiplicity) on 𝓗^q, in decreasing order.
    pub weights: Vec<Vec<(Rational, usize)>>,
    pub plus_dim: usize,
    pub minus_dim: usize,
    /// Middle-degree harmonics on which W+n vanishes (only for non-acyclic input).
    pub zero_dim: usize,
    pub vqab: Vec<VqabEntry>,
}

fn check_pair(cx: &CochainComplex, rep: &RepBundle) -> Result<()> {
    if cx.n() != rep.n() || cx.dim_v() != rep.dim_v() {
        return Err(Error::Precondition(
            "complex was not built from this bundle".into(),
        ));
    }
    Ok(())
}

/// Block of the adapted d_q from weight block `a` of degree q to degree q+1.
struct Blocks {
    d: Vec<Mat<Qi>>,
    gram: Vec<Mat<Qi>>,
    blocks: Vec<std::collections::BTreeMap<Rational, Vec<usize>>>,
    top: usize,
}

impl Blocks {
    fn new(cx: &CochainComplex) -> Self {
        let top = cx.top_degree();
        Blocks {
            d: (0..top).map(|q| cx.adapted_d(q)).collect(),
            gram: (0..=top).map(|q| cx.adapted_gram(q)).collect(),
            blocks: (0..=top).map(|q| cx.weight_blocks(q)).collect(),
            top,
        }
    }

    fn idx(&self, q: usize, a: &Rational) -> &[usize] {
        self.blocks[q].get(a).map_or(&[], Vec::as_slice)
    }

    /// d restricted to block (q, a) → (q+1, a).
    fn d_block(&self, q: usize, a: &Rational) -> Option<Mat<Qi>> {
        (q < self.top).then(|| self.d[q].select(self.idx(q + 1, a), self.idx(q, a)))
    }

    fn gram_block(&self, q: usize, a: &Rational) -> Mat<Qi> {
        let i = self.idx(q, a);
        self.gram[q].select(i, i)
    }

    /// Matrix whose kernel is ker d*_{q−1} on block (q, a): Dᴴ G.
    fn dstar_kernel_form(&self, q: usize, a: &Rational) -> Option<Mat<Qi>> {
        if q == 0 {
            return None;
        }
        let din = self.d[q - 1].select(self.idx(q, a), self.idx(q - 1, a));
        Some(din.adjoint().mul(&self.gram_block(q, a)))
    }

    fn cohomology_mult(&self, q: usize, a: &Rational) -> usize {
        let size = self.idx(q, a).len();
        let out = self.d_block(q, a).map_or(0, |m| m.rank());
        let inn = if q > 0 {
            self.d[q - 1].select(self.idx(q, a), self.idx(q - 1, a)).rank()
        } else {
            0
        };
        size - out - inn
    }
}

fn embed(cols: &Mat<Qi>, idx: &[usize], dim: usize) -> Mat<Qi> {
    let mut out = Mat::zeros(dim, cols.cols(), &());
    for c in 0..cols.cols() {
        for (r, &i) in idx.iter().enumerate() {
            out[(i, c)] = cols[(r, c)].clone();
        }
    }
    out
}

pub fn harmonic_spaces(cx: &CochainComplex, rep: &RepBundle) -> Result<HarmonicDecomposition> {
    check_pair(cx, rep)?;
    let n = cx.n();
    let top = cx.top_degree();
    let bl = Blocks::new(cx);
    let mut dims = Vec::with_capacity(top + 1);
    let mut bases = Vec::with_capacity(top + 1);
    let mut weights = Vec::with_capacity(top + 1);

    for q in 0..=top {
        let dim = cx.space_dim(q);
        let mut wq: Vec<(Rational, usize)> = Vec::new();
        let mut total = 0;
        for a in bl.blocks[q].keys() {
            let mult = bl.cohomology_mult(q, a);
            if mult > 0 {
                wq.push((a.clone(), mult));
                total += mult;
            }
        }
        wq.reverse();

        let basis = if cx.is_weight_orthogonal() {
            let mut acc = Mat::zeros(dim, 0, &());
            for (a, idx) in &bl.blocks[q] {
                let mut stack = bl.d_block(q, a).unwrap_or_else(|| Mat::zeros(0, idx.len(), &()));
                if let Some(k) = bl.dstar_kernel_form(q, a) {
                    stack = stack.vstack(&k);
                }
                let ker = stack.kernel();
                if ker.cols() != bl.cohomology_mult(q, a) {
                    return Err(Error::Internal(format!(
                        "Hodge identity fails in degree {q}, weight {a}: {} harmonics vs cohomology {}",
                        ker.cols(),
                        bl.cohomology_mult(q, a)
                    )));
                }
                acc = acc.hstack(&embed(&ker, idx, dim));
            }
            acc
        } else {
            let mut stack = if q < top {
                bl.d[q].clone()
            } else {
                Mat::zeros(0, dim, &())
            };
            if q > 0 {
                stack = stack.vstack(&bl.d[q - 1].adjoint().mul(&bl.gram[q]));
            }
            let ker = stack.kernel();
            if ker.cols() != total {
                return Err(Error::Internal(format!(
                    "Hodge identity fails in degree {q}: {} harmonics vs cohomology {total}",
                    ker.cols()
                )));
            }
            ker
        };
        dims.push(total);
        bases.push(cx.to_original(q, &basis));
        weights.push(wq);
    }

    let mut plus_dim = 0;
    let mut minus_dim = 0;
    let mut zero_dim = 0;
    for (a, mult) in &weights[n] {
        match a.cmp0() {
            Ordering::Greater => plus_dim += mult,
            Ordering::Less => minus_dim += mult,
            Ordering::Equal => zero_dim += mult,
        }
    }
    Ok(HarmonicDecomposition {
        n,
        dims,
        bases,
        weights,
        plus_dim,
        minus_dim,
        zero_dim,
        vqab: Vec::new(),
    })
}

fn spectral_cmp(x: &Spectral, y: &Spectral) -> Ordering {
    match (x, y) {
        (Spectral::Exact(a), Spectral::Exact(b)) => a.cmp(b),
        _ => x
            .to_float(256)
            .partial_cmp(&y.to_float(256))
            .unwrap_or(Ordering::Equal),
    }
}

pub(crate) fn sort_entries(v: &mut [VqabEntry]) {
    v.sort_by(|x, y| {
        x.q.cmp(&y.q)
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| spectral_cmp(&x.b2, &y.b2))
    });
}

/// Eigenvalues of an operator given on the column span of `basis` by
/// `image = op · basis`. Returns (eigenvalue, multiplicity) pairs.
fn restricted_spectrum(
    basis: &Mat<Qi>,
    image: &Mat<Qi>,
    ctx: &PrecisionContext,
) -> Result<Vec<(Spectral, usize)>> {
    let coords = basis.solve(image)?;
    let cp = charpoly(&coords);
    if cp.iter().any(|c| !c.is_real()) {
        return Err(Error::NonAdmissible(
            "restricted Laplacian is not self-adjoint".into(),
        ));
    }
    let poly = Poly::new(cp.into_iter().map(|c| c.re).collect());
    let roots = real_roots(&poly, ctx)?;
    for (r, mult) in &roots {
        if let Spectral::Exact(r) = r {
            let shifted = coords.sub(&Mat::identity(coords.rows(), &()).scale(&Qi::real(r.clone())));
            let geo = coords.rows() - shifted.rank();
            if geo != *mult {
                return Err(Error::Internal(format!(
                    "eigenvalue {r} has algebraic multiplicity {mult} but geometric {geo}"
                )));
            }
        }
        if r.to_float(64).is_sign_negative() && !r.to_float(64).is_zero() {
            return Err(Error::Internal(format!("negative Laplacian eigenvalue {r}")));
        }
    }
    Ok(roots)
}

fn require_admissible(cx: &CochainComplex, rep: &RepBundle) -> Result<()> {
    check_pair(cx, rep)?;
    if !rep.is_admissible() || !cx.is_weight_orthogonal() {
        return Err(Error::NonAdmissible(
            "H is not self-adjoint for the gram; the joint spectrum is undefined".into(),
        ));
    }
    Ok(())
}

/// The V_{q,a,b} data: joint eigenspaces of (W+n, K²) on ker d* with b² > 0.
pub fn vqab_decomposition(
    cx: &CochainComplex,
    rep: &RepBundle,
    ctx: &PrecisionContext,
) -> Result<Vec<VqabEntry>> {
    require_admissible(cx, rep)?;
    let bl = Blocks::new(cx);
    let mut out = Vec::new();
    for q in 0..bl.top {
        for (a, idx) in &bl.blocks[q] {
            let Some(d) = bl.d_block(q, a) else { continue };
            if d.is_zero() {
                continue;
            }
            let coexact = match bl.dstar_kernel_form(q, a) {
                Some(k) => k.kernel(),
                None => Mat::identity(idx.len(), &()),
            };
            if coexact.cols() == 0 {
                continue;
            }
            // K² = d*d on ker d*
            let gin = bl.gram_block(q, a);
            let gout = bl.gram_block(q + 1, a);
            let op = gin.inverse()?.mul(&d.adjoint()).mul(&gout).mul(&d);
            let image = op.mul(&coexact);
            let harmonic = bl.cohomology_mult(q, a);
            for (b2, mult) in restricted_spectrum(&coexact, &image, ctx)? {
                if b2.is_positive() {
                    out.push(VqabEntry {
                        q,
                        a: a.clone(),
                        b2,
                        mult,
                    });
                } else if mult != harmonic {
                    return Err(Error::Internal(format!(
                        "kernel of K² on ker d* has dimension {mult}, cohomology {harmonic} (q={q}, a={a})"
                    )));
                }
            }
        }
    }
    sort_entries(&mut out);
    Ok(out)
}

/// Spectrum of K² = dd* on im d in degree q+1, labelled by that degree. The
/// pairing V_{q,a,b} ≅ d V_{q,a,b} says this equals the coexact spectrum
/// shifted up by one degree.
pub fn exact_spectrum(
    cx: &CochainComplex,
    rep: &RepBundle,
    ctx: &PrecisionContext,
) -> Result<Vec<VqabEntry>> {
    require_admissible(cx, rep)?;
    let bl = Blocks::new(cx);
    let mut out = Vec::new();
    for q in 0..bl.top {
        for a in bl.blocks[q].keys() {
            let Some(d) = bl.d_block(q, a) else { continue };
            let ech = d.rref();
            if ech.pivots.is_empty() {
                continue;
            }
            let range = d.select_cols(&ech.pivots);
            let gin = bl.gram_block(q, a);
            let gout = bl.gram_block(q + 1, a);
            let op = d.mul(&gin.inverse()?).mul(&d.adjoint()).mul(&gout);
            let image = op.mul(&range);
            for (b2, mult) in restricted_spectrum(&range, &image, ctx)? {
                if !b2.is_positive() {
                    return Err(Error::Internal(format!(
                        "dd* has a zero eigenvalue on im d (q={q})"
                    )));
                }
                out.push(VqabEntry {
                    q: q + 1,
                    a: a.clone(),
                    b2,
                    mult,
                });
            }
        }
    }
    sort_entries(&mut out);
    Ok(out)
}

/// Harmonic data together with the V_{q,a,b} entries.
pub fn decompose(rep: &RepBundle, ctx: &PrecisionContext) -> Result<HarmonicDecomposition> {
    let cx = super::complex::exterior_complex(rep)?;
    let mut hd = harmonic_spaces(&cx, rep)?;
    hd.vqab = vqab_decomposition(&cx, rep, ctx)?;
    Ok(hd)
}

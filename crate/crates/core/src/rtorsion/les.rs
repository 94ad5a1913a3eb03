//! The Mayer–Vietoris sequence ⋯ → H^q(M) →i→ H^q(X̄)⊕H^q(X̄) →j→ H^q(Z) →∂→ ⋯
//! as a based acyclic complex.
//!
//! Preferred coordinates per degree q, with ℓ = dim H^q(X̄) and
//! r_q = rank ∂_q:
//! - H^q(M) = (∂-images of degree q−1 | lifts of μ_X), dimension r_{q−1}+ℓ;
//! - H^q(X̄)² = (μ_X ⊕ 0 | 0 ⊕ μ_X), dimension 2ℓ;
//! - H^q(Z) = (ι*μ_X = ker ∂ | complement), dimension ℓ + r_q.
//!
//! Then i(b_j) = (u_j, u_j), j(x, y) = x − y and ∂ maps the complement onto
//! the first block of H^{q+1}(M).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::precision::PrecisionContext;
use crate::scalar::{Field, Real, RealCtx};

use super::{torsion, BasedComplex};

#[derive(Clone, Debug)]
pub struct LesData {
    ell: Vec<usize>,
    z: Vec<usize>,
    /// Maps in preferred coordinates, node order (M_0, X_0², Z_0, M_1, …).
    pref: Vec<Mat<Real>>,
    /// The distinguished (ambient) bases: ambient = change · preferred.
    change: Vec<Mat<Real>>,
    /// Per q, the orthonormal basis ((u,u)/√2 | (u,−u)/√2) of H^q(X̄)².
    rotation: Vec<Mat<Real>>,
    rctx: RealCtx,
}

fn real(rc: &RealCtx, v: i64) -> Real {
    Real(Float::with_val(rc.prec, v))
}

impl LesData {
    /// `ell[q]` = dim H^q(X̄), `z[q]` = dim H^q(Z) ≥ ell[q]; the top degree
    /// must have z = ell so the sequence ends.
    pub fn new(ell: Vec<usize>, z: Vec<usize>, ctx: &PrecisionContext) -> Result<Self> {
        if ell.is_empty() || ell.len() != z.len() {
            return Err(Error::Validation("ell and z need the same nonzero length".into()));
        }
        if ell.iter().zip(&z).any(|(l, z)| z < l) {
            return Err(Error::NotExact(
                "ι* must be injective: dim H^q(Z) ≥ dim H^q(X̄)".into(),
            ));
        }
        let top = ell.len() - 1;
        if z[top] != ell[top] {
            return Err(Error::NotExact("∂ out of the top degree must vanish".into()));
        }
        let rc = RealCtx::new(ctx.bits());
        let r: Vec<usize> = ell.iter().zip(&z).map(|(l, z)| z - l).collect();
        let m_dim = |q: usize| if q == 0 { ell[0] } else { r[q - 1] + ell[q] };
        let mut pref = Vec::new();
        let mut rotation = Vec::new();
        for q in 0..=top {
            let l = ell[q];
            let below = if q == 0 { 0 } else { r[q - 1] };
            let mut i = Mat::zeros(2 * l, m_dim(q), &rc);
            for j in 0..l {
                i[(j, below + j)] = real(&rc, 1);
                i[(l + j, below + j)] = real(&rc, 1);
            }
            let mut jm = Mat::zeros(z[q], 2 * l, &rc);
            for t in 0..l {
                jm[(t, t)] = real(&rc, 1);
                jm[(t, l + t)] = real(&rc, -1);
            }
            pref.push(i);
            pref.push(jm);
            if q < top {
                let mut d = Mat::zeros(m_dim(q + 1), z[q], &rc);
                for t in 0..r[q] {
                    d[(t, l + t)] = real(&rc, 1);
                }
                pref.push(d);
            }
            let s = Real(Float::with_val(rc.prec, 2).sqrt().recip());
            let mut rot = Mat::zeros(2 * l, 2 * l, &rc);
            for t in 0..l {
                rot[(t, t)] = s.clone();
                rot[(l + t, t)] = s.clone();
                rot[(t, l + t)] = s.clone();
                rot[(l + t, l + t)] = s.neg();
            }
            rotation.push(rot);
        }
        let node_dims = Self::node_dims_of(&ell, &z);
        let change = node_dims.iter().map(|&d| Mat::identity(d, &rc)).collect();
        Ok(LesData {
            ell,
            z,
            pref,
            change,
            rotation,
            rctx: rc,
        })
    }

    fn node_dims_of(ell: &[usize], z: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for q in 0..ell.len() {
            out.push(if q == 0 {
                ell[0]
            } else {
                z[q - 1] - ell[q - 1] + ell[q]
            });
            out.push(2 * ell[q]);
            out.push(z[q]);
        }
        out
    }

    pub fn node_dims(&self) -> Vec<usize> {
        Self::node_dims_of(&self.ell, &self.z)
    }

    pub fn ell(&self) -> &[usize] {
        &self.ell
    }

    pub fn z(&self) -> &[usize] {
        &self.z
    }

    /// Writes the sequence in another distinguished basis per node:
    /// ambient coordinates = `change[p]` · preferred coordinates.
    pub fn with_change(mut self, change: Vec<Mat<Real>>) -> Result<Self> {
        let dims = self.node_dims();
        if change.len() != dims.len()
            || change
                .iter()
                .zip(&dims)
                .any(|(c, &d)| c.rows() != d || c.cols() != d)
        {
            return Err(Error::Validation("one square change of basis per node".into()));
        }
        self.change = change;
        Ok(self)
    }

    /// The sequence as a based complex in its distinguished bases.
    pub fn complex(&self) -> Result<BasedComplex<Real>> {
        let dims = self.node_dims();
        let inv: Vec<Mat<Real>> = self.change.iter().map(|c| c.inverse()).collect::<Result<_>>()?;
        let diff = (0..self.pref.len())
            .map(|p| self.change[p + 1].mul(&self.pref[p]).mul(&inv[p]))
            .collect();
        BasedComplex::new(dims.clone(), diff, vec![None; dims.len()], &self.rctx)
    }
}

#[derive(Clone, Debug)]
pub struct MvReport {
    pub torsion: Float,
    /// |det((i_q)_⊥)| per q.
    pub i_factors: Vec<Float>,
    /// |det((j_q)_⊥)| per q.
    pub j_factors: Vec<Float>,
    /// |det((∂_q)_⊥)| per q < top.
    pub boundary_factors: Vec<Float>,
}

/// |det| of an injective-on-(ker A)^⊥ map between orthonormal coordinates:
/// √(det(QᵀAᵀAQ)/det(QᵀQ)) for a basis Q of the row space.
pub(crate) fn perp_det(a: &Mat<Real>) -> Result<Float> {
    let at = a.transpose();
    let piv = at.rref().pivots;
    let prec = a.ctx().prec;
    if piv.is_empty() {
        return Ok(Float::with_val(prec, 1));
    }
    let q = at.select_cols(&piv);
    let aq = a.mul(&q);
    let num = aq.transpose().mul(&aq).det()?;
    let den = q.transpose().mul(&q).det()?;
    Ok(Float::with_val(prec, &num.0 / &den.0).sqrt())
}

fn det_abs(m: &Mat<Real>) -> Result<Float> {
    if m.rows() == 0 {
        return Ok(Float::with_val(m.ctx().prec, 1));
    }
    Ok(m.det()?.0.abs())
}

/// Torsion of the based sequence together with the √2 factors of i and j
/// in the rotated basis, and the ∂ factors.
pub fn mv_torsion_check(data: &LesData) -> Result<MvReport> {
    let cx = data.complex()?;
    if !cx.is_acyclic() {
        return Err(Error::NotExact("Mayer–Vietoris sequence is not exact".into()));
    }
    let tau = torsion(&cx)?.0;
    let top = data.ell.len() - 1;
    let mut i_factors = Vec::new();
    let mut j_factors = Vec::new();
    let mut boundary_factors = Vec::new();
    for q in 0..=top {
        let l = data.ell[q];
        let below = if q == 0 {
            0
        } else {
            data.z[q - 1] - data.ell[q - 1]
        };
        let base = 3 * q;
        let (i, j) = (&data.pref[base], &data.pref[base + 1]);
        let rot = &data.rotation[q];
        let first: Vec<usize> = (0..l).collect();
        let second: Vec<usize> = (l..2 * l).collect();
        let lifts: Vec<usize> = (below..below + l).collect();
        // i lands in span (u,u)/√2; j is injective on span (u,−u)/√2
        i_factors.push(det_abs(&rot.transpose().mul(i).select(&first, &lifts))?);
        j_factors.push(det_abs(&j.mul(rot).select(&first, &second))?);
        if q < top {
            boundary_factors.push(perp_det(&data.pref[base + 2])?);
        }
    }
    Ok(MvReport {
        torsion: tau,
        i_factors,
        j_factors,
        boundary_factors,
    })
}

/// A reflection-product orthogonal matrix with small integer Householder vectors.
fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize, rc: &RealCtx) -> Mat<Real> {
    let mut o = Mat::identity(d, rc);
    if d == 0 {
        return o;
    }
    for _ in 0..2 {
        let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
        let nn: i64 = v.iter().map(|x| x * x).sum();
        if nn == 0 {
            continue;
        }
        let h = Mat::from_fn(d, d, rc, |r, c| {
            let delta = if r == c { 1 } else { 0 };
            Real(Float::with_val(rc.prec, delta) - Float::with_val(rc.prec, 2 * v[r] * v[c]) / nn)
        });
        o = o.mul(&h);
    }
    o
}

/// A seeded instance: random ranks over a few degrees, random orthogonal
/// ambient bases at every node, and at one Z node the unimodular shear of
/// μ_Z = (ι*μ_X, μ_+) against an orthonormal (μ_−, μ_+).
pub fn random_les(seed: u64, ctx: &PrecisionContext) -> Result<LesData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degrees = rng.gen_range(2..=5usize);
    let ell: Vec<usize> = (0..degrees).map(|_| rng.gen_range(0..=2)).collect();
    let mut z: Vec<usize> = ell.iter().map(|l| l + rng.gen_range(0..=2)).collect();
    z[degrees - 1] = ell[degrees - 1];
    let data = LesData::new(ell.clone(), z.clone(), ctx)?;
    let rc = data.rctx.clone();
    let middle = rng.gen_range(0..degrees);
    let mut change = Vec::new();
    for (p, d) in data.node_dims().into_iter().enumerate() {
        let mut c = random_orthogonal(&mut rng, d, &rc);
        if p == 3 * middle + 2 {
            let l = ell[middle];
            let mut shear = Mat::identity(d, &rc);
            for r in l..d {
                for col in 0..l {
                    shear[(r, col)] = real(&rc, rng.gen_range(-2..=2));
                }
            }
            c = c.mul(&shear);
        }
        change.push(c);
    }
    data.with_change(change)
}

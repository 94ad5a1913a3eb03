use std::collections::BTreeMap;

use rug::Rational;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::poly::{charpoly, real_roots, Poly, Spectral};
use crate::precision::PrecisionContext;
use crate::scalar::{Field, Qi};

use super::bundle::RepBundle;

/// Subsets of {0, …, m−1} of size q as bitmasks, in increasing order.
pub(crate) fn subsets(m: usize, q: usize) -> Vec<u32> {
    (0u32..(1 << m))
        .filter(|s| s.count_ones() as usize == q)
        .collect()
}

/// Matrix of d: Λ^q ⊗ V → Λ^{q+1} ⊗ V, d = Σᵢ eⁱ∧ ⊗ Nᵢ, with basis index
/// `pos(J)·k + j`.
pub(crate) fn exterior_d(ops: &[Mat<Qi>], k: usize, q: usize) -> Mat<Qi> {
    let m = ops.len();
    let src = subsets(m, q);
    let dst = subsets(m, q + 1);
    let pos: BTreeMap<u32, usize> = dst.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut d = Mat::zeros(dst.len() * k, src.len() * k, &());
    for (ci, &jmask) in src.iter().enumerate() {
        for (i, op) in ops.iter().enumerate() {
            if jmask & (1 << i) != 0 || op.is_zero() {
                continue;
            }
            let below = (jmask & ((1u32 << i) - 1)).count_ones();
            let neg = below % 2 == 1;
            let ri = pos[&(jmask | (1 << i))];
            for a in 0..k {
                for b in 0..k {
                    let v = &op[(a, b)];
                    if v.is_zero() {
                        continue;
                    }
                    d[(ri * k + a, ci * k + b)] = if neg { v.neg() } else { v.clone() };
                }
            }
        }
    }
    d
}

/// H in an eigenbasis: columns of `p` are eigenvectors, `weights[j]` the
/// eigenvalue of column j. Requires a rational spectrum and diagonalizable H.
pub(crate) fn weight_basis(h: &Mat<Qi>) -> Result<(Mat<Qi>, Vec<Rational>)> {
    let k = h.rows();
    let real_diag = |m: &Mat<Qi>| -> Result<Vec<Rational>> {
        (0..k)
            .map(|i| {
                let z = &m[(i, i)];
                if z.is_real() {
                    Ok(z.re.clone())
                } else {
                    Err(Error::Validation("H has a non-real eigenvalue".into()))
                }
            })
            .collect()
    };
    if h.is_diagonal() {
        return Ok((Mat::identity(k, &()), real_diag(h)?));
    }
    let eigenvalues: Vec<Rational> = if h.is_upper_triangular() {
        real_diag(h)?
    } else {
        let cp = charpoly(h);
        if cp.iter().any(|c| !c.is_real()) {
            return Err(Error::Validation(
                "H has a non-real characteristic polynomial".into(),
            ));
        }
        let poly = Poly::new(cp.into_iter().map(|c| c.re).collect());
        let roots = real_roots(&poly, &PrecisionContext::default())
            .map_err(|e| Error::Validation(format!("H spectrum: {e}")))?;
        let mut out = Vec::new();
        for (r, mult) in roots {
            match r {
                Spectral::Exact(r) => out.extend(std::iter::repeat(r).take(mult)),
                Spectral::Approx(_) => {
                    return Err(Error::Validation("H must have a rational spectrum".into()));
                }
            }
        }
        out
    };
    let mut distinct = eigenvalues.clone();
    distinct.sort();
    distinct.dedup();
    let mut cols: Vec<Vec<Qi>> = Vec::new();
    let mut weights = Vec::new();
    for w in distinct {
        let shifted = h.sub(&Mat::identity(k, &()).scale(&Qi::real(w.clone())));
        let ker = shifted.kernel();
        for c in 0..ker.cols() {
            cols.push(ker.col(c));
            weights.push(w.clone());
        }
    }
    if cols.len() != k {
        return Err(Error::Validation("H is not diagonalizable".into()));
    }
    Ok((Mat::from_cols(&cols, k, &()), weights))
}

/// The bundle rewritten in an H-eigenbasis.
#[derive(Clone, Debug)]
pub(crate) struct Adapted {
    pub p: Mat<Qi>,
    pub weights: Vec<Rational>,
    pub ops: Vec<Mat<Qi>>,
    pub gram: Mat<Qi>,
    /// Whether weight spaces are mutually orthogonal for the gram.
    pub blocked: bool,
}

/// Λ*𝔫* ⊗ V with d, its gram adjoint and the weight operator, per degree.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    n: usize,
    k: usize,
    d: Vec<Mat<Qi>>,
    dstar: Vec<Mat<Qi>>,
    w: Vec<Mat<Qi>>,
    pub(crate) adapted: Adapted,
}

fn gram_power(g: &Mat<Qi>, m: usize, q: usize) -> Mat<Qi> {
    Mat::identity(subsets(m, q).len(), &()).kron(g)
}

pub fn exterior_complex(rep: &RepBundle) -> Result<CochainComplex> {
    let n = rep.n();
    let m = 2 * n;
    let k = rep.dim_v();
    let d: Vec<Mat<Qi>> = (0..m).map(|q| exterior_d(rep.ops(), k, q)).collect();
    let ginv = rep.gram().inverse()?;
    let dstar = (0..m)
        .map(|q| {
            gram_power(&ginv, m, q)
                .mul(&d[q].adjoint())
                .mul(&gram_power(rep.gram(), m, q + 1))
        })
        .collect();
    let w = (0..=m)
        .map(|q| {
            let dim = subsets(m, q).len();
            let shift = Mat::identity(dim * k, &()).scale(&Qi::from_int(q as i64));
            Mat::identity(dim, &()).kron(rep.h()).sub(&shift)
        })
        .collect();

    let (p, weights) = weight_basis(rep.h())?;
    let pinv = p.inverse()?;
    let ops = rep.ops().iter().map(|op| pinv.mul(op).mul(&p)).collect();
    let gram = p.adjoint().mul(rep.gram()).mul(&p);
    let blocked = (0..k).all(|i| (0..k).all(|j| weights[i] == weights[j] || gram[(i, j)].is_zero()));
    Ok(CochainComplex {
        n,
        k,
        d,
        dstar,
        w,
        adapted: Adapted {
            p,
            weights,
            ops,
            gram,
            blocked,
        },
    })
}

impl CochainComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_v(&self) -> usize {
        self.k
    }

    pub fn top_degree(&self) -> usize {
        2 * self.n
    }

    pub fn space_dim(&self, q: usize) -> usize {
        subsets(2 * self.n, q).len() * self.k
    }

    /// d_q: C^q → C^{q+1}, for q < 2n.
    pub fn d(&self, q: usize) -> &Mat<Qi> {
        &self.d[q]
    }

    /// d*_q: C^{q+1} → C^q.
    pub fn dstar(&self, q: usize) -> &Mat<Qi> {
        &self.dstar[q]
    }

    /// Weight operator Λ^q Ad* ⊗ ϱ(H₁) on C^q.
    pub fn w(&self, q: usize) -> &Mat<Qi> {
        &self.w[q]
    }

    /// Kostant Laplacian K² = d*d + dd* on C^q.
    pub fn laplacian(&self, q: usize) -> Mat<Qi> {
        let dim = self.space_dim(q);
        let mut l = Mat::zeros(dim, dim, &());
        if q < 2 * self.n {
            l = l.add(&self.dstar[q].mul(&self.d[q]));
        }
        if q > 0 {
            l = l.add(&self.d[q - 1].mul(&self.dstar[q - 1]));
        }
        l
    }

    /// Whether H is diagonalized with weight spaces orthogonal for the gram.
    pub fn is_weight_orthogonal(&self) -> bool {
        self.adapted.blocked
    }

    /// d_q in the H-eigenbasis.
    pub(crate) fn adapted_d(&self, q: usize) -> Mat<Qi> {
        exterior_d(&self.adapted.ops, self.k, q)
    }

    pub(crate) fn adapted_gram(&self, q: usize) -> Mat<Qi> {
        gram_power(&self.adapted.gram, 2 * self.n, q)
    }

    /// Adapted basis indices of C^q grouped by their W+n eigenvalue.
    pub(crate) fn weight_blocks(&self, q: usize) -> BTreeMap<Rational, Vec<usize>> {
        let count = subsets(2 * self.n, q).len();
        let offset = Rational::from(self.n as i64 - q as i64);
        let mut blocks: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for s in 0..count {
            for (j, w) in self.adapted.weights.iter().enumerate() {
                blocks
                    .entry(Rational::from(w + &offset))
                    .or_default()
                    .push(s * self.k + j);
            }
        }
        blocks
    }

    /// Maps adapted coordinates on C^q back to the original basis.
    pub(crate) fn to_original(&self, q: usize, v: &Mat<Qi>) -> Mat<Qi> {
        let count = subsets(2 * self.n, q).len();
        Mat::identity(count, &()).kron(&self.adapted.p).mul(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostant::bundle::{build_sym_power_rep, trivial_rep};

    #[test]
    fn space_dims_and_d_squared() {
        let cx = exterior_complex(&build_sym_power_rep(2)).unwrap();
        assert_eq!(
            (0..=2).map(|q| cx.space_dim(q)).collect::<Vec<_>>(),
            vec![3, 6, 3]
        );
        assert!(cx.d(1).mul(cx.d(0)).is_zero());
        for q in 0..2 {
            assert!(cx.w(q + 1).mul(cx.d(q)).sub(&cx.d(q).mul(cx.w(q))).is_zero());
            assert!(cx
                .w(q)
                .mul(cx.dstar(q))
                .sub(&cx.dstar(q).mul(cx.w(q + 1)))
                .is_zero());
        }
    }

    #[test]
    fn trivial_action_has_zero_differential() {
        let cx = exterior_complex(&trivial_rep(2)).unwrap();
        assert!((0..4).all(|q| cx.d(q).is_zero()));
    }

    #[test]
    fn d_of_lowest_vector() {
        // Sym^1: d v₀ = v₁ dz = v₁ (dx + i dy) in the real basis
        let cx = exterior_complex(&build_sym_power_rep(1)).unwrap();
        let d0 = cx.d(0);
        // C^1 index: pos({x})·2 + j and pos({y})·2 + j
        assert_eq!(d0[(1, 0)], Qi::from_int(1));
        assert_eq!(d0[(3, 0)], Qi::i());
        assert_eq!(d0[(0, 0)], Qi::from_int(0));
        assert!((0..4).all(|r| d0[(r, 1)].is_zero()));
    }

    #[test]
    fn kostant_laplacian_degree_zero() {
        // eigenvalues 2(k+1)(m−k) on v_k for m = 2: {4, 4, 0}
        let cx = exterior_complex(&build_sym_power_rep(2)).unwrap();
        let l = cx.laplacian(0);
        assert!(l.is_diagonal());
        let diag: Vec<Qi> = (0..3).map(|i| l[(i, i)].clone()).collect();
        assert_eq!(diag, vec![Qi::from_int(4), Qi::from_int(4), Qi::from_int(0)]);
    }

    #[test]
    fn weight_basis_of_conjugated_h() {
        let h = Mat::from_rows(
            vec![
                vec![Qi::from_int(1), Qi::from_int(0)],
                vec![Qi::from_int(3), Qi::from_int(-1)],
            ],
            &(),
        )
        .unwrap();
        let (p, w) = weight_basis(&h).unwrap();
        assert_eq!(w, vec![Rational::from(-1), Rational::from(1)]);
        let pinv = p.inverse().unwrap();
        assert!(pinv.mul(&h).mul(&p).is_diagonal());
        let jordan = Mat::from_rows(
            vec![
                vec![Qi::from_int(0), Qi::from_int(1)],
                vec![Qi::from_int(0), Qi::from_int(0)],
            ],
            &(),
        )
        .unwrap();
        assert!(weight_basis(&jordan).is_err());
    }
}

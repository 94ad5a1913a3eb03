use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Field, Qi};

/// Explicit action of an abelian 𝔫 ≅ ℝ^{2n} on V, with the weight operator
/// `h` = ϱ(H₁) and an inner product `gram` on V.
#[derive(Clone, Debug, PartialEq)]
pub struct RepBundle {
    n: usize,
    ops: Vec<Mat<Qi>>,
    h: Mat<Qi>,
    gram: Mat<Qi>,
}

impl RepBundle {
    /// Validates shapes, commutativity, `[H, Nᵢ] = Nᵢ`, and that `gram` is
    /// Hermitian positive definite. All checks are exact.
    pub fn new(n: usize, ops: Vec<Mat<Qi>>, h: Mat<Qi>, gram: Option<Mat<Qi>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("n must be at least 1".into()));
        }
        let k = h.rows();
        if k == 0 || !h.is_square() {
            return Err(Error::Validation("H must be a nonempty square matrix".into()));
        }
        if ops.len() != 2 * n {
            return Err(Error::Validation(format!(
                "expected {} matrices N[i], got {}",
                2 * n,
                ops.len()
            )));
        }
        for (i, m) in ops.iter().enumerate() {
            if m.rows() != k || m.cols() != k {
                return Err(Error::Validation(format!("N[{}] is not {k}x{k}", i + 1)));
            }
        }
        let gram = gram.unwrap_or_else(|| Mat::identity(k, &()));
        if gram.rows() != k || gram.cols() != k {
            return Err(Error::Validation(format!("gram is not {k}x{k}")));
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if !ops[i].commutator(&ops[j]).is_zero() {
                    return Err(Error::Validation(format!(
                        "N[{}] and N[{}] do not commute",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if h.commutator(&ops[i]) != ops[i] {
                return Err(Error::Validation(format!("[H, N[{}]] != N[{}]", i + 1, i + 1)));
            }
        }
        if gram.adjoint() != gram {
            return Err(Error::Validation("gram is not Hermitian".into()));
        }
        if !is_positive_definite(&gram) {
            return Err(Error::Validation("gram is not positive definite".into()));
        }
        Ok(RepBundle { n, ops, h, gram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_v(&self) -> usize {
        self.h.rows()
    }

    pub fn ops(&self) -> &[Mat<Qi>] {
        &self.ops
    }

    pub fn h(&self) -> &Mat<Qi> {
        &self.h
    }

    pub fn gram(&self) -> &Mat<Qi> {
        &self.gram
    }

    /// Whether H is self-adjoint for `gram` (G H = Hᴴ G). The symmetry of
    /// the Nᵢ for the full admissible structure involves the opposite
    /// nilpotent part, which a bundle does not carry, so it is not checked.
    pub fn is_admissible(&self) -> bool {
        self.gram.mul(&self.h) == self.h.adjoint().mul(&self.gram)
    }

    /// Changes the basis of V by the invertible `p`: N ↦ P⁻¹NP, H ↦ P⁻¹HP, G ↦ PᴴGP.
    pub fn conjugate(&self, p: &Mat<Qi>) -> Result<Self> {
        let pinv = p.inverse()?;
        let ops = self.ops.iter().map(|m| pinv.mul(m).mul(p)).collect();
        let h = pinv.mul(&self.h).mul(p);
        let gram = p.adjoint().mul(&self.gram).mul(p);
        RepBundle::new(self.n, ops, h, Some(gram))
    }

    /// Changes the real basis of 𝔫: Tᵢ' = Σⱼ r[j][i] Tⱼ. Orthogonal `r`
    /// preserves the inner product on 𝔫 and hence every spectral quantity.
    pub fn rotate_nilpotent_basis(&self, r: &Mat<Rational>) -> Result<Self> {
        let m = 2 * self.n;
        if r.rows() != m || r.cols() != m {
            return Err(Error::Validation(format!("basis change must be {m}x{m}")));
        }
        let k = self.dim_v();
        let ops = (0..m)
            .map(|i| {
                let mut acc = Mat::zeros(k, k, &());
                for j in 0..m {
                    if !r[(j, i)].is_zero() {
                        acc = acc.add(&self.ops[j].scale(&Qi::real(r[(j, i)].clone())));
                    }
                }
                acc
            })
            .collect();
        RepBundle::new(self.n, ops, self.h.clone(), Some(self.gram.clone()))
    }

    /// Direct sum of two bundles over the same 𝔫.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Validation("direct sum needs equal n".into()));
        }
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        RepBundle::new(
            self.n,
            ops,
            self.h.direct_sum(&other.h),
            Some(self.gram.direct_sum(&other.gram)),
        )
    }

    /// Adds `c` to every weight (H ↦ H + c·I); keeps all relations.
    pub fn shift_weights(&self, c: &Rational) -> Result<Self> {
        let k = self.dim_v();
        let shift = Mat::identity(k, &()).scale(&Qi::real(c.clone()));
        RepBundle::new(
            self.n,
            self.ops.clone(),
            self.h.add(&shift),
            Some(self.gram.clone()),
        )
    }

    /// External tensor product: 𝔫 = 𝔫₁ ⊕ 𝔫₂ acting on V₁ ⊗ V₂.
    pub fn outer_tensor(&self, other: &Self) -> Result<Self> {
        let i1 = Mat::identity(self.dim_v(), &());
        let i2 = Mat::identity(other.dim_v(), &());
        let mut ops: Vec<Mat<Qi>> = self.ops.iter().map(|m| m.kron(&i2)).collect();
        ops.extend(other.ops.iter().map(|m| i1.kron(m)));
        let h = self.h.kron(&i2).add(&i1.kron(&other.h));
        RepBundle::new(self.n + other.n, ops, h, Some(self.gram.kron(&other.gram)))
    }
}

/// Sylvester-style check via elimination without pivoting: every pivot of a
/// Hermitian matrix must be real and positive.
pub fn is_positive_definite(g: &Mat<Qi>) -> bool {
    let k = g.rows();
    let mut m = g.clone();
    for c in 0..k {
        let p = m[(c, c)].clone();
        if !p.is_real() || p.re.cmp0() != Ordering::Greater {
            return false;
        }
        for r in c + 1..k {
            if m[(r, c)].is_zero() {
                continue;
            }
            let f = m[(r, c)].div(&p);
            for j in c..k {
                if !m[(c, j)].is_zero() {
                    let v = f.mul(&m[(c, j)]);
                    m[(r, j)] = m[(r, j)].sub(&v);
                }
            }
        }
    }
    true
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Sym^m of the standard representation, restricted to 𝔫 ≅ ℂ with real
/// basis T₁ = 1, T₂ = i. Basis vⱼ = e₁ʲe₂^{m−j}; N₁ vₖ = (m−k) v_{k+1},
/// N₂ = i·N₁, H vⱼ = (j − m/2) vⱼ.
///
/// The inner product is the SU(2)-invariant one, ⟨vⱼ, vⱼ⟩ = 1/C(m, j). With
/// it the adjoint of d is d* (vₖ dz) = 2k v_{k−1} and the Kostant Laplacian
/// has eigenvalues 2(k+1)(m−k) on degree 0; declaring the vⱼ orthonormal
/// instead would not reproduce those eigenvalues.
pub fn build_sym_power_rep(m: u32) -> RepBundle {
    let k = (m + 1) as usize;
    let mut n1 = Mat::zeros(k, k, &());
    for j in 0..k - 1 {
        n1[(j + 1, j)] = Qi::from_int(i64::from(m) - j as i64);
    }
    let n2 = n1.scale(&Qi::i());
    let half = Rational::from((m, 2));
    let h = Mat::diag(
        &(0..k)
            .map(|j| Qi::real(Rational::from(j as u64) - &half))
            .collect::<Vec<_>>(),
        &(),
    );
    let gram = Mat::diag(
        &(0..k)
            .map(|j| Qi::real(Rational::from((Integer::from(1), binomial(m, j as u32)))))
            .collect::<Vec<_>>(),
        &(),
    );
    RepBundle::new(1, vec![n1, n2], h, Some(gram)).expect("Sym^m bundle is valid by construction")
}

/// The trivial one-dimensional bundle over 𝔫 of dimension 2n.
pub fn trivial_rep(n: usize) -> RepBundle {
    let z = Mat::zeros(1, 1, &());
    RepBundle::new(n, vec![z.clone(); 2 * n], z, None).expect("trivial bundle is valid")
}

fn fmt_matrix(m: &Mat<Qi>) -> String {
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|z| z.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_matrix(s: &str, k: usize, what: &str) -> Result<Mat<Qi>> {
    let rows: Vec<Vec<Qi>> = s
        .split(';')
        .map(|row| row.split(',').map(Qi::from_str).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()
        .map_err(|e| Error::parse("bundle", format!("{what}: {e}")))?;
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return Err(Error::parse("bundle", format!("{what} must be {k}x{k}")));
    }
    Mat::from_rows(rows, &())
}

impl fmt::Display for RepBundle {
    /// Canonical text form; parsing it back yields an identical bundle.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "dimV={}", self.dim_v())?;
        for (i, m) in self.ops.iter().enumerate() {
            writeln!(f, "N[{}]={}", i + 1, fmt_matrix(m))?;
        }
        writeln!(f, "H={}", fmt_matrix(&self.h))?;
        writeln!(f, "gram={}", fmt_matrix(&self.gram))
    }
}

impl FromStr for RepBundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut k = None;
        let mut raw_ops: Vec<(usize, String)> = Vec::new();
        let mut raw_h = None;
        let mut raw_gram = None;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Error::parse("bundle", format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim();
            let val: String = val.chars().filter(|c| !c.is_whitespace()).collect();
            let bad = |msg: &str| Error::parse("bundle", format!("line {}: {msg}", lineno + 1));
            match key {
                "n" => n = Some(val.parse::<usize>().map_err(|_| bad("n is not an integer"))?),
                "dimV" => k = Some(val.parse::<usize>().map_err(|_| bad("dimV is not an integer"))?),
                "H" => raw_h = Some(val),
                "gram" => raw_gram = Some(val),
                _ => {
                    let idx = key
                        .strip_prefix("N[")
                        .and_then(|r| r.strip_suffix(']'))
                        .and_then(|r| r.parse::<usize>().ok())
                        .ok_or_else(|| bad(&format!("unknown key `{key}`")))?;
                    if idx == 0 || raw_ops.iter().any(|(i, _)| *i == idx) {
                        return Err(bad(&format!("bad or repeated index N[{idx}]")));
                    }
                    raw_ops.push((idx, val));
                }
            }
        }
        let n = n.ok_or_else(|| Error::parse("bundle", "missing n"))?;
        let k = k.ok_or_else(|| Error::parse("bundle", "missing dimV"))?;
        if k == 0 {
            return Err(Error::parse("bundle", "dimV must be positive"));
        }
        raw_ops.sort_by_key(|(i, _)| *i);
        if raw_ops.len() != 2 * n || raw_ops.iter().enumerate().any(|(pos, (i, _))| *i != pos + 1) {
            return Err(Error::parse("bundle", format!("expected N[1]..N[{}]", 2 * n)));
        }
        let ops = raw_ops
            .iter()
            .map(|(i, v)| parse_matrix(v, k, &format!("N[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let h = parse_matrix(&raw_h.ok_or_else(|| Error::parse("bundle", "missing H"))?, k, "H")?;
        let gram = raw_gram.map(|g| parse_matrix(&g, k, "gram")).transpose()?;
        RepBundle::new(n, ops, h, gram)
    }
}

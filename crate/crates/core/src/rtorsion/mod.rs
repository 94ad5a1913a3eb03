//! Milnor torsion of based cochain complexes, the Mayer–Vietoris check and
//! Milnor gluing, and a Koszul-complex oracle for the cohomology of ℤ²ⁿ.
//!
//! Convention: τ = ∏_q |det M_q|^{(−1)^{q+1}}, where M_q expresses
//! (d·s_{q−1}, cohomology basis, lift s_q) in the distinguished basis of C^q.
//! For 0 → ℝ →(c)→ ℝ → 0 this gives |c|.

mod lattice;
mod les;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::precision::PrecisionContext;
use crate::scalar::{parse_rational, Field, Real};

pub use lattice::{group_cohomology_lattice, sym_power_lattice_gens, vanest_compare, VanEstReport};
pub use les::{mv_torsion_check, random_les, LesData, MvReport};

/// Ordered fields with an absolute value, over which torsion is a positive number.
pub trait AbsField: Field {
    fn abs_val(&self) -> Self;
}

impl AbsField for Rational {
    fn abs_val(&self) -> Self {
        Rational::from(self.abs_ref())
    }
}

impl AbsField for Real {
    fn abs_val(&self) -> Self {
        Real(Float::with_val(self.0.prec(), self.0.abs_ref()))
    }
}

/// A finite cochain complex C^0 → … → C^top, written in its distinguished
/// bases, with optional cohomology representatives per degree.
#[derive(Clone, Debug)]
pub struct BasedComplex<T: Field> {
    dims: Vec<usize>,
    diff: Vec<Mat<T>>,
    coh: Vec<Option<Mat<T>>>,
    ctx: T::Ctx,
}

impl<T: Field> BasedComplex<T> {
    /// `diff[q]` is d_q: C^q → C^{q+1}; `coh[q]` has cohomology
    /// representatives as columns.
    pub fn new(dims: Vec<usize>, diff: Vec<Mat<T>>, coh: Vec<Option<Mat<T>>>, ctx: &T::Ctx) -> Result<Self> {
        if dims.is_empty() || diff.len() + 1 != dims.len() || coh.len() != dims.len() {
            return Err(Error::Validation(
                "need one differential between consecutive degrees".into(),
            ));
        }
        for (q, d) in diff.iter().enumerate() {
            if d.rows() != dims[q + 1] || d.cols() != dims[q] {
                return Err(Error::Validation(format!(
                    "d_{q} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[q + 1],
                    dims[q]
                )));
            }
        }
        for q in 1..diff.len() {
            if !diff[q].mul(&diff[q - 1]).is_negligible() {
                return Err(Error::Validation(format!("d_{q}∘d_{} ≠ 0", q - 1)));
            }
        }
        let cx = BasedComplex {
            dims,
            diff,
            coh,
            ctx: ctx.clone(),
        };
        for q in 0..cx.dims.len() {
            let h = cx.betti(q);
            match &cx.coh[q] {
                None if h > 0 => {
                    return Err(Error::Precondition(format!(
                        "degree {q} has cohomology of dimension {h} but no basis"
                    )))
                }
                None => {}
                Some(b) => {
                    if b.rows() != cx.dims[q] || b.cols() != h {
                        return Err(Error::Validation(format!(
                            "cohomology basis in degree {q} is {}x{}, expected {}x{h}",
                            b.rows(),
                            b.cols(),
                            cx.dims[q]
                        )));
                    }
                    if q < cx.diff.len() && !cx.diff[q].mul(b).is_negligible() {
                        return Err(Error::Validation(format!(
                            "cohomology basis in degree {q} is not closed"
                        )));
                    }
                }
            }
        }
        Ok(cx)
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn diff(&self, q: usize) -> &Mat<T> {
        &self.diff[q]
    }

    pub fn coh(&self, q: usize) -> Option<&Mat<T>> {
        self.coh[q].as_ref()
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    fn rank_d(&self, q: usize) -> usize {
        if q < self.diff.len() {
            self.diff[q].rank()
        } else {
            0
        }
    }

    /// dim H^q.
    pub fn betti(&self, q: usize) -> usize {
        let below = if q > 0 { self.rank_d(q - 1) } else { 0 };
        self.dims[q] - self.rank_d(q) - below
    }

    pub fn is_acyclic(&self) -> bool {
        (0..self.dims.len()).all(|q| self.betti(q) == 0)
    }

    /// The same complex written in new distinguished bases: the columns of
    /// `change[q]` are the new basis of C^q in old coordinates.
    pub fn rebase(&self, change: &[Mat<T>]) -> Result<Self> {
        let inv: Vec<Mat<T>> = change.iter().map(|a| a.inverse()).collect::<Result<_>>()?;
        let diff = (0..self.diff.len())
            .map(|q| inv[q + 1].mul(&self.diff[q]).mul(&change[q]))
            .collect();
        let coh = (0..self.dims.len())
            .map(|q| self.coh[q].as_ref().map(|b| inv[q].mul(b)))
            .collect();
        BasedComplex::new(self.dims.clone(), diff, coh, &self.ctx)
    }
}

/// Greedy sections: pivot columns of each d_q.
fn greedy_sections<T: Field>(cx: &BasedComplex<T>) -> Vec<Vec<usize>> {
    cx.diff.iter().map(|d| d.rref().pivots).collect()
}

/// Torsion for a given choice of section columns per degree.
pub fn torsion_with_sections<T: AbsField>(cx: &BasedComplex<T>, sections: &[Vec<usize>]) -> Result<T> {
    let ctx = &cx.ctx;
    let mut tau = T::one(ctx);
    for q in 0..=cx.top() {
        let dim = cx.dims[q];
        let mut cols: Vec<Vec<T>> = Vec::with_capacity(dim);
        if q > 0 {
            cols.extend(sections[q - 1].iter().map(|&j| cx.diff[q - 1].col(j)));
        }
        if let Some(h) = &cx.coh[q] {
            cols.extend((0..h.cols()).map(|c| h.col(c)));
        }
        if q < cx.top() {
            for &j in &sections[q] {
                let mut e = vec![T::zero(ctx); dim];
                e[j] = T::one(ctx);
                cols.push(e);
            }
        }
        if cols.len() != dim {
            return Err(Error::NotExact(format!(
                "degree {q}: {} boundary, cohomology and lift vectors for a space of dimension {dim}",
                cols.len()
            )));
        }
        if dim == 0 {
            continue;
        }
        let det = Mat::from_cols(&cols, dim, ctx).det()?;
        if det.negligible(ctx) {
            return Err(Error::Singular(format!(
                "degree {q}: boundaries, cohomology basis and lifts are dependent"
            )));
        }
        let a = det.abs_val();
        tau = if q % 2 == 1 { tau.mul(&a) } else { tau.div(&a) };
    }
    Ok(tau)
}

/// Milnor torsion with greedy sections.
pub fn torsion<T: AbsField>(cx: &BasedComplex<T>) -> Result<T> {
    torsion_with_sections(cx, &greedy_sections(cx))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s & (1 << i) != 0).collect())
        .collect()
}

/// Torsion for every admissible section choice (all column subsets whose
/// images form a basis of im d_q, in every degree). Meant for small
/// complexes: the count is the product of binomials over degrees.
pub fn torsion_all_sections<T: AbsField>(cx: &BasedComplex<T>) -> Result<Vec<T>> {
    if cx.dims.iter().any(|&d| d > 12) {
        return Err(Error::Precondition(
            "exhaustive section search is limited to dimension 12".into(),
        ));
    }
    let per_degree: Vec<Vec<Vec<usize>>> = cx
        .diff
        .iter()
        .map(|d| {
            let r = d.rank();
            combinations(d.cols(), r)
                .into_iter()
                .filter(|s| d.select_cols(s).rank() == r)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_degree.len()];
    loop {
        let choice: Vec<Vec<usize>> = idx
            .iter()
            .zip(&per_degree)
            .map(|(&i, opts)| opts[i].clone())
            .collect();
        out.push(torsion_with_sections(cx, &choice)?);
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < per_degree[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// τ(M) = τ(X)²/τ(Z). For odd n the caller asserts τ(Z) = 1, which is enforced.
pub fn milnor_glue(tau_x: &Float, tau_z: &Float, n_odd: bool, ctx: &PrecisionContext) -> Result<Float> {
    if tau_z.cmp0() != Some(Ordering::Greater) || tau_x.cmp0() != Some(Ordering::Greater) {
        return Err(Error::Domain("torsions must be positive".into()));
    }
    if n_odd {
        let dev = Float::with_val(ctx.bits(), tau_z - 1u32).abs();
        if dev > ctx.ten_pow_neg(ctx.digits() as i32 - 8) {
            return Err(Error::Precondition(format!(
                "n odd requires τ(Z) = 1, got {}",
                ctx.fmt(tau_z)
            )));
        }
    }
    Ok(Float::with_val(ctx.bits(), tau_x.square_ref()) / tau_z)
}

fn fmt_matrix(m: &Mat<Rational>) -> String {
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

fn parse_matrix(s: &str, rows: usize, cols: usize, what: &str) -> Result<Mat<Rational>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return if rows == 0 || cols == 0 {
            Ok(Mat::zeros(rows, cols, &()))
        } else {
            Err(Error::parse("complex", format!("{what} is empty")))
        };
    }
    let data: Vec<Vec<Rational>> = s
        .split(';')
        .map(|row| row.split(',').map(parse_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()
        .map_err(|e| Error::parse("complex", format!("{what}: {e}")))?;
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::parse("complex", format!("{what} must be {rows}x{cols}")));
    }
    Mat::from_rows(data, &())
}

impl fmt::Display for BasedComplex<Rational> {
    /// `dims=…`, then `d[q]=` and `h[q]=` matrices, row-major with rows
    /// separated by `;` and entries by `,`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        writeln!(f, "dims={}", dims.join(","))?;
        for (q, d) in self.diff.iter().enumerate() {
            writeln!(f, "d[{q}]={}", fmt_matrix(d))?;
        }
        for (q, h) in self.coh.iter().enumerate() {
            if let Some(h) = h {
                if h.cols() > 0 {
                    writeln!(f, "h[{q}]={}", fmt_matrix(h))?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for BasedComplex<Rational> {
    type Err = Error;

    /// Omitted differentials are zero; omitted cohomology bases are absent.
    fn from_str(s: &str) -> Result<Self> {
        let mut dims: Option<Vec<usize>> = None;
        let mut raw: Vec<(char, usize, String)> = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::parse("complex", format!("line {}: {msg}", lineno + 1));
            let (key, val) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let key = key.trim();
            if key == "dims" {
                dims = Some(
                    val.split(',')
                        .map(|v| v.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad("dims must be nonnegative integers"))?,
                );
                continue;
            }
            let kind = key.chars().next().filter(|c| *c == 'd' || *c == 'h');
            let idx = key
                .get(1..)
                .and_then(|r| r.strip_prefix('['))
                .and_then(|r| r.strip_suffix(']'))
                .and_then(|r| r.parse::<usize>().ok());
            match (kind, idx) {
                (Some(k), Some(i)) if !raw.iter().any(|(k2, i2, _)| *k2 == k && *i2 == i) => {
                    raw.push((k, i, val.to_string()))
                }
                _ => return Err(bad(&format!("unknown or repeated key `{key}`"))),
            }
        }
        let dims = dims.ok_or_else(|| Error::parse("complex", "missing dims"))?;
        if dims.is_empty() {
            return Err(Error::parse("complex", "dims is empty"));
        }
        let top = dims.len() - 1;
        let mut diff: Vec<Mat<Rational>> = (0..top).map(|q| Mat::zeros(dims[q + 1], dims[q], &())).collect();
        let mut coh: Vec<Option<Mat<Rational>>> = vec![None; dims.len()];
        for (k, i, val) in raw {
            if k == 'd' {
                if i >= top {
                    return Err(Error::parse("complex", format!("d[{i}] out of range")));
                }
                diff[i] = parse_matrix(&val, dims[i + 1], dims[i], &format!("d[{i}]"))?;
            } else {
                if i > top {
                    return Err(Error::parse("complex", format!("h[{i}] out of range")));
                }
                let cols = val.split(';').next().map(|r| r.split(',').count()).unwrap_or(0);
                coh[i] = Some(parse_matrix(&val, dims[i], cols, &format!("h[{i}]"))?);
            }
        }
        BasedComplex::new(dims, diff, coh, &())
    }
}

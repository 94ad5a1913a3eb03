//! Cohomology of ℤ^r with twisted coefficients via the Koszul complex
//! V ⊗ Λ^q(ℤ^r)*, d = Σᵢ eⁱ∧ ⊗ (ξᵢgᵢ − 1).

use rug::Integer;

use crate::error::{Error, Result};
use crate::kostant::{build_sym_power_rep, exterior_complex, exterior_d, harmonic_spaces};
use crate::matrix::Mat;
use crate::scalar::{Field, Qi};

/// dim H^q(ℤ^r; V_ξ) for q = 0..=r, exactly over ℚ(i).
pub fn group_cohomology_lattice(gens: &[Mat<Qi>], twist: &[Qi]) -> Result<Vec<usize>> {
    let r = gens.len();
    if r == 0 || r > 16 {
        return Err(Error::Validation("need between 1 and 16 generators".into()));
    }
    if twist.len() != r {
        return Err(Error::Validation("one twist per generator".into()));
    }
    let k = gens[0].rows();
    for (i, g) in gens.iter().enumerate() {
        if g.rows() != k || g.cols() != k {
            return Err(Error::Validation(format!("generator {} is not {k}x{k}", i + 1)));
        }
        if g.det()?.is_zero() {
            return Err(Error::Validation(format!(
                "generator {} is not invertible",
                i + 1
            )));
        }
    }
    for (i, xi) in twist.iter().enumerate() {
        if xi.norm_sqr() != 1 {
            return Err(Error::Validation(format!("twist {} = {xi} is not a unit", i + 1)));
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            if !gens[i].commutator(&gens[j]).is_zero() {
                return Err(Error::Validation(format!(
                    "generators {} and {} do not commute",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let ops: Vec<Mat<Qi>> = gens
        .iter()
        .zip(twist)
        .map(|(g, xi)| g.scale(xi).sub(&Mat::identity(k, &())))
        .collect();
    let ranks: Vec<usize> = (0..r).map(|q| exterior_d(&ops, k, q).rank()).collect();
    Ok((0..=r)
        .map(|q| {
            let dim = binomial(r, q) * k;
            let out = if q < r { ranks[q] } else { 0 };
            let inc = if q > 0 { ranks[q - 1] } else { 0 };
            dim - out - inc
        })
        .collect())
}

fn binomial(n: usize, k: usize) -> usize {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
        .to_usize()
        .unwrap_or(0)
}

fn qi_pow(z: &Qi, e: usize) -> Qi {
    (0..e).fold(Qi::from_int(1), |acc, _| acc.mul(z))
}

/// The images of lattice points z under Sym^m of z ↦ [[1, z], [0, 1]]:
/// v_k ↦ Σᵢ C(m−k, i) zⁱ v_{k+i}.
pub fn sym_power_lattice_gens(m: usize, lattice: &[Qi]) -> Vec<Mat<Qi>> {
    lattice
        .iter()
        .map(|z| {
            Mat::from_fn(m + 1, m + 1, &(), |row, col| {
                if row < col {
                    return Qi::default();
                }
                let i = row - col;
                let c = Integer::from(Integer::binomial_u((m - col) as u32, i as u32));
                qi_pow(z, i).scale(&c.into())
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanEstReport {
    pub m: usize,
    pub group_dims: Vec<usize>,
    pub kostant_dims: Vec<usize>,
    pub twist_trivial: bool,
    /// Group side equals the Kostant side (trivial twist) or vanishes (nontrivial twist).
    pub consistent: bool,
    pub note: &'static str,
}

/// Group cohomology of the lattice ℤz₁ ⊕ ℤz₂ in Sym^m against the Kostant
/// harmonic dimensions for the same m.
pub fn vanest_compare(m: usize, lattice: [Qi; 2], twist: [Qi; 2]) -> Result<VanEstReport> {
    let [z1, z2] = &lattice;
    // Im(z₁·z̄₂) = 0 ⇔ ℝ-linearly dependent
    if z1.mul(&z2.conj()).im == 0 {
        return Err(Error::Domain(format!("lattice ({z1}, {z2}) is degenerate")));
    }
    let gens = sym_power_lattice_gens(m, &lattice);
    let group_dims = group_cohomology_lattice(&gens, &twist)?;
    let rep = build_sym_power_rep(m as u32);
    let kostant_dims = harmonic_spaces(&exterior_complex(&rep)?, &rep)?.dims;
    let twist_trivial = twist.iter().all(|x| *x == Qi::from_int(1));
    let (consistent, note) = if twist_trivial {
        (group_dims == kostant_dims, "isomorphic (van Est)")
    } else {
        (
            group_dims.iter().all(|&d| d == 0),
            "acyclic, van Est not applicable",
        )
    };
    Ok(VanEstReport {
        m,
        group_dims,
        kostant_dims,
        twist_trivial,
        consistent,
        note,
    })
}

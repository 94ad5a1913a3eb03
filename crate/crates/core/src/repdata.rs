//! Highest-weight data for SO₀(d,1) and Spin(d,1), d = 2n+1: the λ ladder,
//! strong acyclicity and Weyl dimensions. Everything here is exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::scalar::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    SO0,
    Spin,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::SO0 => "SO0",
            Flavor::Spin => "Spin",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SO0" | "so0" => Ok(Flavor::SO0),
            "Spin" | "spin" => Ok(Flavor::Spin),
            other => Err(Error::parse(
                "flavor",
                format!("expected SO0 or Spin, got `{other}`"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    d: u32,
    flavor: Flavor,
}

impl GroupSpec {
    pub fn new(d: u32, flavor: Flavor) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::Validation(format!(
                "d must be odd and at least 3, got {d}"
            )));
        }
        Ok(GroupSpec { d, flavor })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        ((self.d - 1) / 2) as usize
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
}

fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}

fn is_half_odd(r: &Rational) -> bool {
    *r.denom() == 2
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HighestWeight {
    spec: GroupSpec,
    k: Vec<Rational>,
}

impl HighestWeight {
    pub fn new(spec: GroupSpec, k: Vec<Rational>) -> Result<Self> {
        let n = spec.n();
        if k.len() != n + 1 {
            return Err(Error::Validation(format!(
                "d={} needs {} weight entries, got {}",
                spec.d,
                n + 1,
                k.len()
            )));
        }
        for i in 0..n.saturating_sub(1) {
            if k[i] < k[i + 1] {
                return Err(Error::Validation(format!(
                    "dominance fails: k{} = {} < k{} = {}",
                    i + 1,
                    k[i],
                    i + 2,
                    k[i + 1]
                )));
            }
        }
        let last_abs = Rational::from(k[n].abs_ref());
        if k[n - 1] < last_abs {
            return Err(Error::Validation(format!(
                "dominance fails: k{n} = {} < |k{}| = {}",
                k[n - 1],
                n + 1,
                last_abs
            )));
        }
        let all_int = k.iter().all(is_integer);
        let all_half = k.iter().all(is_half_odd);
        match spec.flavor {
            Flavor::SO0 if !all_int => {
                return Err(Error::Validation("SO0 weights must all be integers".into()));
            }
            Flavor::Spin if !(all_int || all_half) => {
                return Err(Error::Validation(
                    "Spin weights must be all integers or all half-odd-integers".into(),
                ));
            }
            _ => {}
        }
        Ok(HighestWeight { spec, k })
    }

    pub fn from_ints(d: u32, flavor: Flavor, k: &[i64]) -> Result<Self> {
        HighestWeight::new(
            GroupSpec::new(d, flavor)?,
            k.iter().map(|&v| Rational::from(v)).collect(),
        )
    }

    /// Highest weight of the d=3 representation Sym^m: k = (m/2, m/2), as Spin.
    pub fn sym_power(m: u32) -> Self {
        let h = Rational::from((m, 2));
        HighestWeight::new(GroupSpec::new(3, Flavor::Spin).unwrap(), vec![h.clone(), h]).unwrap()
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn k(&self) -> &[Rational] {
        &self.k
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.k.iter().map(|r| r.to_string()).collect();
        write!(
            f,
            "d={} flavor={} k={}",
            self.spec.d,
            self.spec.flavor,
            ks.join(",")
        )
    }
}

/// Parses a comma-separated weight list such as `3,2,2,1/2`.
pub fn parse_k_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Err(Error::parse("weight list", "empty"));
    }
    s.split(',').map(parse_rational).collect()
}

impl FromStr for HighestWeight {
    type Err = Error;

    /// `d=<int> flavor=<SO0|Spin> k=<r1,r2,...>`; `flavor` defaults to SO0.
    fn from_str(s: &str) -> Result<Self> {
        let mut d = None;
        let mut flavor = Flavor::SO0;
        let mut k = None;
        for tok in s.split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse("highest weight", format!("token `{tok}` is not key=value")))?;
            match key {
                "d" => {
                    d = Some(
                        val.parse::<u32>()
                            .map_err(|_| Error::parse("highest weight", format!("bad d `{val}`")))?,
                    )
                }
                "flavor" => flavor = val.parse()?,
                "k" => k = Some(parse_k_list(val)?),
                other => return Err(Error::parse("highest weight", format!("unknown key `{other}`"))),
            }
        }
        let d = d.ok_or_else(|| Error::parse("highest weight", "missing d"))?;
        let k = k.ok_or_else(|| Error::parse("highest weight", "missing k"))?;
        HighestWeight::new(GroupSpec::new(d, flavor)?, k)
    }
}

/// The eigenvalues λ_q of W+n on degree-q harmonic forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaLadder {
    n: usize,
    /// Indexed by q = 0..=2n. The middle entry is k_{n+1} itself (signed).
    lam: Vec<Rational>,
    lam_plus: Rational,
    lam_minus: Rational,
}

impl LambdaLadder {
    /// Builds a ladder directly, e.g. for synthetic inputs. Enforces
    /// antisymmetry and lam_minus = −lam_plus.
    pub fn from_parts(lam: Vec<Rational>, lam_plus: Rational) -> Result<Self> {
        if lam.len() % 2 == 0 {
            return Err(Error::Validation("ladder needs 2n+1 entries".into()));
        }
        let n = lam.len() / 2;
        for q in 0..n {
            if Rational::from(&lam[q] + &lam[2 * n - q]).cmp0() != Ordering::Equal {
                return Err(Error::Validation(format!("ladder is not antisymmetric at q={q}")));
            }
        }
        if Rational::from(lam[n].abs_ref()) != Rational::from(lam_plus.abs_ref()) {
            return Err(Error::Validation("λ⁺ must equal ±λ_n".into()));
        }
        let lam_minus = Rational::from(-&lam_plus);
        Ok(LambdaLadder {
            n,
            lam,
            lam_plus,
            lam_minus,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lam(&self, q: usize) -> &Rational {
        &self.lam[q]
    }

    pub fn values(&self) -> &[Rational] {
        &self.lam
    }

    pub fn lam_plus(&self) -> &Rational {
        &self.lam_plus
    }

    pub fn lam_minus(&self) -> &Rational {
        &self.lam_minus
    }
}

pub fn lambda_ladder(hw: &HighestWeight) -> LambdaLadder {
    let n = hw.n();
    let mut lam = vec![Rational::new(); 2 * n + 1];
    for q in 0..=n {
        lam[q] = Rational::from(&hw.k[q] + (n - q) as u64);
    }
    for q in n + 1..=2 * n {
        lam[q] = Rational::from(-&lam[2 * n - q]);
    }
    let mid = lam[n].clone();
    let (lam_plus, lam_minus) = if hw.k[n].cmp0() != Ordering::Less {
        (mid.clone(), -mid)
    } else {
        (Rational::from(-&mid), mid)
    };
    LambdaLadder {
        n,
        lam,
        lam_plus,
        lam_minus,
    }
}

/// Implemented as k_{n+1} ≠ 0, which is exactly positivity of λ⁺.
pub fn is_strongly_acyclic(hw: &HighestWeight) -> bool {
    hw.k[hw.n()].cmp0() != Ordering::Equal
}

/// Weyl dimension for type D_{n+1}, ρ = (n, n−1, …, 0).
pub fn weyl_dim(hw: &HighestWeight) -> Result<Integer> {
    let r = hw.k.len();
    let rho: Vec<Rational> = (0..r).map(|i| Rational::from((r - 1 - i) as u64)).collect();
    let l: Vec<Rational> =
        hw.k.iter()
            .zip(&rho)
            .map(|(k, p)| Rational::from(k + p))
            .collect();
    let mut num = Rational::from(1);
    let mut den = Rational::from(1);
    for i in 0..r {
        for j in i + 1..r {
            num *= Rational::from(l[i].square_ref()) - Rational::from(l[j].square_ref());
            den *= Rational::from(rho[i].square_ref()) - Rational::from(rho[j].square_ref());
        }
    }
    let q = num / den;
    if *q.denom() != 1 || q.cmp0() != Ordering::Greater {
        return Err(Error::Internal(format!(
            "Weyl dimension quotient {q} for {hw} is not a positive integer"
        )));
    }
    Ok(q.into_numer_denom().0)
}

/// Gap inequalities λ_k ≥ λ_{k+1} + 1 (k ≤ n−2) and λ_{n−1} ≥ λ⁺ + 1.
/// Only meaningful for strongly acyclic weights; anything else is rejected.
pub fn ladder_gap_check(ladder: &LambdaLadder) -> Result<bool> {
    if ladder.lam_plus.cmp0() != Ordering::Greater {
        return Err(Error::Precondition(
            "gap check needs a strongly acyclic ladder (λ⁺ > 0)".into(),
        ));
    }
    let n = ladder.n;
    for k in 0..n.saturating_sub(1) {
        if ladder.lam[k] < Rational::from(&ladder.lam[k + 1] + 1u32) {
            return Ok(false);
        }
    }
    if n >= 1 && ladder.lam[n - 1] < Rational::from(&ladder.lam_plus + 1u32) {
        return Ok(false);
    }
    Ok(true)
}

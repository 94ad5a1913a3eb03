//! Univariate polynomials over ℚ, characteristic polynomials, and real root
//! extraction (exact where the root is rational, arbitrary precision otherwise).

use std::cmp::Ordering;
use std::fmt;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::precision::PrecisionContext;
use crate::scalar::Field;

/// Coefficients from the constant term upward; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

/// A real eigenvalue, exact when rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectral {
    Exact(Rational),
    Approx(Float),
}

impl Spectral {
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Spectral::Exact(r) => Float::with_val(prec, r),
            Spectral::Approx(f) => Float::with_val(prec, f),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Spectral::Exact(r) => Some(r),
            Spectral::Approx(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Spectral::Exact(r) => r.cmp0() == Ordering::Greater,
            Spectral::Approx(f) => f.cmp0() == Some(Ordering::Greater),
        }
    }
}

impl fmt::Display for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spectral::Exact(r) => write!(f, "{r}"),
            Spectral::Approx(x) => write!(f, "{}", crate::precision::format_float(x, 30)),
        }
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == Ordering::Equal) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        Poly::new(vec![Rational::from(-r), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.0.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.0.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.lead();
        Poly::new(self.0.iter().map(|c| Rational::from(c / &lead)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = Rational::new();
        Poly::new(
            (0..n)
                .map(|i| Rational::from(self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![Rational::new(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn divrem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dd = div.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly(vec![]), self.clone());
        }
        let lead = div.lead();
        let mut quot = vec![Rational::new(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = Rational::from(&rem[k + dd] / &lead);
            if c.cmp0() != Ordering::Equal {
                for (j, dc) in div.0.iter().enumerate() {
                    rem[k + j] -= Rational::from(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: pairs (factor, multiplicity) with
    /// pairwise coprime monic square-free factors.
    pub fn squarefree(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let b = f.gcd(&df);
        let mut c = f.divrem(&b).0;
        let mut d = df.divrem(&b).0.sub(&c.derivative());
        let mut i = 1;
        while c.degree() > 0 {
            let a = c.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            c = c.divrem(&a).0;
            d = d.divrem(&a).0.sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// Integer coefficients with content 1 and the same roots.
    pub fn primitive(&self) -> Vec<Integer> {
        let mut den = Integer::from(1);
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let ints: Vec<Integer> = self
            .0
            .iter()
            .map(|c| Rational::from(c * &den).into_numer_denom().0)
            .collect();
        let mut g = Integer::new();
        for v in &ints {
            g = g.gcd(v);
        }
        if g == 0 {
            return ints;
        }
        ints.into_iter().map(|v| v / &g).collect()
    }

    fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Poly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        chain
    }

    /// Cauchy bound on the absolute value of every root.
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let mut m = Rational::new();
        for c in &self.0[..self.0.len() - 1] {
            let r = Rational::from(c / &lead).abs();
            if r > m {
                m = r;
            }
        }
        m + 1
    }
}

fn sign_variations(chain: &[Poly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for p in chain {
        let s = p.eval(x).cmp0();
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_rational(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.cmp0() != Ordering::Greater && hi.cmp0() != Ordering::Less {
        return Rational::new();
    }
    if hi.cmp0() == Ordering::Less {
        let neg_hi = Rational::from(-hi);
        let neg_lo = Rational::from(-lo);
        return -simplest_rational(&neg_hi, &neg_lo);
    }
    let fl = Rational::from(lo.floor_ref());
    if &fl == lo {
        return fl;
    }
    let next = Rational::from(&fl + 1u32);
    if &next <= hi {
        return next;
    }
    let a = Rational::from(hi - &fl).recip();
    let b = Rational::from(lo - &fl).recip();
    fl + simplest_rational(&a, &b).recip()
}

/// All real roots of a square-free polynomial, sorted ascending.
fn squarefree_real_roots(p: &Poly, ctx: &PrecisionContext) -> Vec<Spectral> {
    if p.degree() == 0 {
        return vec![];
    }
    if p.degree() == 1 {
        let r = -Rational::from(&p.0[0] / &p.0[1]);
        return vec![Spectral::Exact(r)];
    }
    let chain = p.sturm_chain();
    let bound = p.root_bound();
    let lo = Rational::from(-&bound);
    let mut stack = vec![(lo, bound)];
    let mut isolated = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let n = sign_variations(&chain, &a) - sign_variations(&chain, &b);
        match n {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let mid = Rational::from(&a + &b) / 2u32;
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    isolated.sort_by(|x, y| x.0.cmp(&y.0));

    let lc = p
        .primitive()
        .last()
        .cloned()
        .unwrap_or_else(|| Integer::from(1))
        .abs();
    // two rationals with denominators ≤ |lc| differ by at least 1/lc²
    let rational_width = Rational::from((Integer::from(1), Integer::from(&lc * &lc) * 2u32));
    let bits = ctx.bits();
    let float_width = Rational::from((Integer::from(1), Integer::from(1) << bits));

    isolated
        .into_iter()
        .map(|(a, b)| refine_root(p, &chain, a, b, &rational_width, &float_width, bits))
        .collect()
}

fn refine_root(
    p: &Poly,
    chain: &[Poly],
    mut a: Rational,
    mut b: Rational,
    rational_width: &Rational,
    float_width: &Rational,
    bits: u32,
) -> Spectral {
    // the root lies in (a, b]
    if p.eval(&b).cmp0() == Ordering::Equal {
        return Spectral::Exact(b);
    }
    let mut tried_rational = false;
    loop {
        let width = Rational::from(&b - &a);
        if !tried_rational && &width < rational_width {
            tried_rational = true;
            let cand = simplest_rational(&a, &b);
            if p.eval(&cand).cmp0() == Ordering::Equal {
                return Spectral::Exact(cand);
            }
        }
        let scale = Rational::from(b.abs_ref()).max(Rational::from(1));
        if tried_rational && width < Rational::from(float_width * &scale) {
            let mid = Rational::from(&a + &b) / 2u32;
            return Spectral::Approx(Float::with_val(bits, &mid));
        }
        let mid = Rational::from(&a + &b) / 2u32;
        let fm = p.eval(&mid);
        if fm.cmp0() == Ordering::Equal {
            return Spectral::Exact(mid);
        }
        let fa = p.eval(&a);
        let left = if fa.cmp0() != Ordering::Equal {
            fa.cmp0() != fm.cmp0()
        } else {
            sign_variations(chain, &a) - sign_variations(chain, &mid) == 1
        };
        if left {
            b = mid;
        } else {
            a = mid;
        }
    }
}

/// Real roots with multiplicities, ascending. Errors if roots are not all
/// real or if two distinct approximate roots are closer than the cluster
/// tolerance `10^(-digits/2)`.
pub fn real_roots(p: &Poly, ctx: &PrecisionContext) -> Result<Vec<(Spectral, usize)>> {
    let mut roots = Vec::new();
    let mut found = 0;
    for (factor, mult) in p.squarefree() {
        for r in squarefree_real_roots(&factor, ctx) {
            found += mult;
            roots.push((r, mult));
        }
    }
    if found != p.degree() {
        return Err(Error::NonAdmissible(format!(
            "characteristic polynomial of degree {} has only {found} real roots",
            p.degree()
        )));
    }
    let prec = ctx.bits();
    roots.sort_by(|x, y| {
        x.0.to_float(prec)
            .partial_cmp(&y.0.to_float(prec))
            .unwrap_or(Ordering::Equal)
    });
    let tol = ctx.ten_pow_neg_f(f64::from(ctx.digits()) / 2.0);
    for w in roots.windows(2) {
        let inexact = matches!(w[0].0, Spectral::Approx(_)) || matches!(w[1].0, Spectral::Approx(_));
        if inexact {
            let gap = Float::with_val(prec, w[1].0.to_float(prec) - w[0].0.to_float(prec));
            if gap < tol {
                return Err(Error::ClusterAmbiguity(format!(
                    "distinct eigenvalues {} and {} are within the cluster tolerance",
                    w[0].0, w[1].0
                )));
            }
        }
    }
    Ok(roots)
}

/// Characteristic polynomial det(xI − M), monic, coefficients low to high.
/// Uses a similarity reduction to upper Hessenberg form.
pub fn charpoly<T: Field>(m: &Mat<T>) -> Vec<T> {
    assert!(m.is_square());
    let n = m.rows();
    let ctx = m.ctx().clone();
    let mut h = m.clone();
    for k in 1..n.saturating_sub(1) {
        let Some(piv) = (k..n).find(|&i| !h[(i, k - 1)].is_zero()) else {
            continue;
        };
        if piv != k {
            for c in 0..n {
                let tmp = h[(piv, c)].clone();
                h[(piv, c)] = h[(k, c)].clone();
                h[(k, c)] = tmp;
            }
            for r in 0..n {
                let tmp = h[(r, piv)].clone();
                h[(r, piv)] = h[(r, k)].clone();
                h[(r, k)] = tmp;
            }
        }
        let t = h[(k, k - 1)].clone();
        for i in k + 1..n {
            if h[(i, k - 1)].is_zero() {
                continue;
            }
            let u = h[(i, k - 1)].div(&t);
            for c in 0..n {
                if !h[(k, c)].is_zero() {
                    let v = u.mul(&h[(k, c)]);
                    h[(i, c)] = h[(i, c)].sub(&v);
                }
            }
            for r in 0..n {
                if !h[(r, i)].is_zero() {
                    let v = u.mul(&h[(r, i)]);
                    h[(r, k)] = h[(r, k)].add(&v);
                }
            }
        }
    }
    // p[k] = char poly of the leading k×k block
    let mut p: Vec<Vec<T>> = vec![vec![T::one(&ctx)]];
    for k in 1..=n {
        let kk = k - 1;
        // (x - h_kk) p_{k-1}
        let prev = &p[k - 1];
        let mut cur = vec![T::zero(&ctx); k + 1];
        for (i, c) in prev.iter().enumerate() {
            cur[i + 1] = cur[i + 1].add(c);
            cur[i] = cur[i].sub(&h[(kk, kk)].mul(c));
        }
        let mut prod = T::one(&ctx);
        for i in 1..k {
            // h_{k-i,k} * prod_{j=k-i+1}^{k} h_{j,j-1}  (1-based)
            prod = prod.mul(&h[(kk - i + 1, kk - i)]);
            if prod.is_zero() {
                break;
            }
            let coef = h[(kk - i, kk)].mul(&prod);
            if coef.is_zero() {
                continue;
            }
            for (j, c) in p[k - i - 1].iter().enumerate() {
                cur[j] = cur[j].sub(&coef.mul(c));
            }
        }
        p.push(cur);
    }
    p.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| Rational::from(v)).collect())
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        // (x-1)^2 (x+2)^3 (x-5)
        let p = poly(&[-1, 1])
            .mul(&poly(&[-1, 1]))
            .mul(&poly(&[2, 1]).mul(&poly(&[2, 1])).mul(&poly(&[2, 1])))
            .mul(&poly(&[-5, 1]));
        let sf = p.squarefree();
        let mults: Vec<usize> = sf.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        let ctx = PrecisionContext::default();
        let roots = real_roots(&p, &ctx).unwrap();
        let exact: Vec<(Rational, usize)> = roots
            .into_iter()
            .map(|(r, m)| (r.as_exact().unwrap().clone(), m))
            .collect();
        assert_eq!(
            exact,
            vec![
                (Rational::from(-2), 3),
                (Rational::from(1), 2),
                (Rational::from(5), 1)
            ]
        );
    }

    #[test]
    fn rational_and_irrational_roots() {
        // (3x - 1)(x^2 - 2)
        let p = poly(&[-1, 3]).mul(&poly(&[-2, 0, 1]));
        let ctx = PrecisionContext::new(40).unwrap();
        let roots = real_roots(&p, &ctx).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1].0, Spectral::Exact(Rational::from((1, 3))));
        let sqrt2 = Float::with_val(ctx.bits(), 2).sqrt();
        let r2 = roots[2].0.to_float(ctx.bits());
        assert!(Float::with_val(ctx.bits(), &r2 - &sqrt2).abs() < ctx.ten_pow_neg(38));
        assert!(matches!(roots[0].0, Spectral::Approx(_)));
    }

    #[test]
    fn complex_roots_are_rejected() {
        let ctx = PrecisionContext::default();
        assert!(real_roots(&poly(&[1, 0, 1]), &ctx).is_err());
    }

    #[test]
    fn clustered_roots_are_ambiguous() {
        // x(x^2 - 2·10^-80): an exact root at 0 next to two irrational ones
        let tiny = Rational::from((2, Integer::from(Integer::u_pow_u(10, 80))));
        let p = Poly::new(vec![Rational::new(), -tiny, Rational::new(), Rational::from(1)]);
        let ctx = PrecisionContext::default();
        assert!(matches!(real_roots(&p, &ctx), Err(Error::ClusterAmbiguity(_))));
    }

    #[test]
    fn simplest_rational_examples() {
        let r = |a: i64, b: i64| Rational::from((a, b));
        assert_eq!(simplest_rational(&r(1, 3), &r(1, 2)), r(1, 2));
        assert_eq!(simplest_rational(&r(3, 10), &r(7, 20)), r(1, 3));
        assert_eq!(simplest_rational(&r(-7, 20), &r(-3, 10)), r(-1, 3));
        assert_eq!(simplest_rational(&r(-1, 2), &r(1, 2)), r(0, 1));
    }

    #[test]
    fn charpoly_matches_known() {
        let m = Mat::from_rows(
            vec![
                vec![Rational::from(2), Rational::from(1), Rational::from(0)],
                vec![Rational::from(1), Rational::from(3), Rational::from(1)],
                vec![Rational::from(0), Rational::from(1), Rational::from(4)],
            ],
            &(),
        )
        .unwrap();
        // det(xI - M) = x^3 - 9x^2 + 24x - 18
        let cp = charpoly(&m);
        let expect: Vec<Rational> = [-18, 24, -9, 1].iter().map(|&v| Rational::from(v)).collect();
        assert_eq!(cp, expect);
    }
}

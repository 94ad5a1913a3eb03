#![allow(dead_code)]

use rand::Rng;
use rug::{Float, Rational};

use cusp_torsion::defects::CohomologyDims;
use cusp_torsion::kostant::{build_sym_power_rep, RepBundle, VqabEntry};
use cusp_torsion::matrix::Mat;
use cusp_torsion::poly::Spectral;
use cusp_torsion::repdata::{lambda_ladder, Flavor, GroupSpec, HighestWeight, LambdaLadder};
use cusp_torsion::scalar::Qi;
use cusp_torsion::PrecisionContext;

pub fn abs_diff(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec().max(b.prec()), a - b).abs()
}

pub fn tol(ctx: &PrecisionContext, digits_lost: u32) -> Float {
    ctx.ten_pow_neg(ctx.digits() as i32 - digits_lost as i32)
}

/// A dominant weight for d ∈ {3,5,7,9}; strongly acyclic unless `allow_zero`.
pub fn random_weight<R: Rng>(rng: &mut R, allow_zero: bool) -> HighestWeight {
    let d = [3u32, 5, 7, 9][rng.gen_range(0..4)];
    let n = ((d - 1) / 2) as usize;
    let spin = rng.gen_bool(0.5);
    // Build from the bottom up: |k_{n+1}| ≤ k_n ≤ … ≤ k_1.
    let last: i64 = if spin {
        0
    } else if allow_zero {
        rng.gen_range(0..=3)
    } else {
        rng.gen_range(1..=3)
    };
    let mut ks = vec![last];
    let mut cur = last;
    for _ in 0..n {
        cur += rng.gen_range(0..=2);
        ks.push(cur);
    }
    ks.reverse();
    let neg = rng.gen_bool(0.5);
    let k: Vec<Rational> = ks
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let r = if spin {
                Rational::from((2 * v + 1, 2))
            } else {
                Rational::from(v)
            };
            if i == n && neg {
                -r
            } else {
                r
            }
        })
        .collect();
    let flavor = if spin { Flavor::Spin } else { Flavor::SO0 };
    HighestWeight::new(GroupSpec::new(d, flavor).unwrap(), k).unwrap()
}

/// Dims of length 2n+1 with vanishing Euler characteristic, split ± in the middle.
pub fn random_dims<R: Rng>(rng: &mut R, n: usize) -> CohomologyDims {
    let t = 2 * n;
    let mut d: Vec<i64> = (0..t).map(|_| rng.gen_range(0..=4)).collect();
    let alt: i64 = d
        .iter()
        .enumerate()
        .map(|(q, v)| if q % 2 == 0 { *v } else { -v })
        .sum();
    // d_{2n} = −alt; raise the odd entry d_{2n−1} when that is negative
    let mut last = -alt;
    if last < 0 {
        d[t - 1] -= last;
        last = 0;
    }
    d.push(last);
    let dims: Vec<usize> = d.into_iter().map(|v| v as usize).collect();
    let mid = dims[n];
    let plus = rng.gen_range(0..=mid);
    CohomologyDims::new(dims, plus, mid - plus).unwrap()
}

pub fn random_vqab<R: Rng>(rng: &mut R, n: usize) -> Vec<VqabEntry> {
    let count = rng.gen_range(1..=6);
    (0..count)
        .map(|_| VqabEntry {
            q: rng.gen_range(0..2 * n),
            a: Rational::from((rng.gen_range(-12..=12), rng.gen_range(1..=4))),
            b2: Spectral::Exact(Rational::from((rng.gen_range(1..=60), rng.gen_range(1..=3)))),
            mult: rng.gen_range(1..=3),
        })
        .collect()
}

/// (ladder, dims, vqab, κ) satisfying the structural invariants but otherwise arbitrary.
pub fn synthetic_defect_input<R: Rng>(rng: &mut R) -> (LambdaLadder, CohomologyDims, Vec<VqabEntry>, u64) {
    let hw = random_weight(rng, false);
    let n = hw.n();
    (
        lambda_ladder(&hw),
        random_dims(rng, n),
        random_vqab(rng, n),
        rng.gen_range(0..=5),
    )
}

fn small_qi<R: Rng>(rng: &mut R) -> Qi {
    Qi::new(
        Rational::from(rng.gen_range(-2..=2)),
        Rational::from(rng.gen_range(-1..=1)),
    )
}

/// Unit lower-triangular times a nonzero rational diagonal.
pub fn random_invertible<R: Rng>(rng: &mut R, k: usize) -> Mat<Qi> {
    Mat::from_fn(k, k, &(), |r, c| {
        if r == c {
            Qi::from_int([1, 2, -1, 3][rng.gen_range(0..4)])
        } else if r > c {
            small_qi(rng)
        } else {
            Qi::default()
        }
    })
}

fn pythagorean_rotation<R: Rng>(rng: &mut R) -> Mat<Rational> {
    let (p, q, h) = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (0, 1, 1)][rng.gen_range(0..4)];
    let c = Rational::from((p, h));
    let s = Rational::from((q, h));
    Mat::from_rows(vec![vec![c.clone(), Rational::from(-&s)], vec![s, c]], &()).unwrap()
}

/// An admissible bundle over 𝔫 = ℂ: Sym^m, direct sums, basis changes of V
/// and of 𝔫, and weight shifts, all small enough to decompose quickly.
pub fn random_bundle<R: Rng>(rng: &mut R) -> (RepBundle, String) {
    let m = rng.gen_range(0..=5u32);
    let mut rep = build_sym_power_rep(m);
    let mut how = format!("Sym^{m}");
    if rng.gen_bool(0.3) {
        let m2 = rng.gen_range(0..=3u32);
        rep = rep.direct_sum(&build_sym_power_rep(m2)).unwrap();
        how += &format!(" + Sym^{m2}");
    }
    if rng.gen_bool(0.5) {
        let p = random_invertible(rng, rep.dim_v());
        rep = rep.conjugate(&p).unwrap();
        how += " conj";
    }
    if rng.gen_bool(0.4) {
        rep = rep.rotate_nilpotent_basis(&pythagorean_rotation(rng)).unwrap();
        how += " rot";
    }
    if rng.gen_bool(0.3) {
        let c = Rational::from((rng.gen_range(-3..=3), 2));
        how += &format!(" shift {c}");
        rep = rep.shift_weights(&c).unwrap();
    }
    (rep, how)
}

fn spectral_close(x: &Spectral, y: &Spectral) -> bool {
    match (x, y) {
        (Spectral::Exact(a), Spectral::Exact(b)) => a == b,
        _ => {
            let (a, b) = (x.to_float(256), y.to_float(256));
            abs_diff(&a, &b) < Float::with_val(256, Float::i_exp(1, -100)) * (1 + a.clone().abs())
        }
    }
}

/// Every exact structural identity of the Kostant complex of `rep`: d² = 0,
/// [W,d] = 0, [W,K²] = 0, harmonic Euler characteristic 0, and the V_{q,a,b}
/// entries matched one degree up by the spectrum of dd* on im d.
pub fn check_structural(rep: &RepBundle, ctx: &PrecisionContext) -> Result<(), String> {
    use cusp_torsion::kostant::{exact_spectrum, exterior_complex, harmonic_spaces, vqab_decomposition};
    let cx = exterior_complex(rep).map_err(|e| e.to_string())?;
    let top = cx.top_degree();
    for q in 0..top {
        if q + 1 < top && !cx.d(q + 1).mul(cx.d(q)).is_zero() {
            return Err(format!("d² ≠ 0 at q={q}"));
        }
        if !cx.w(q + 1).mul(cx.d(q)).sub(&cx.d(q).mul(cx.w(q))).is_zero() {
            return Err(format!("[W,d] ≠ 0 at q={q}"));
        }
    }
    for q in 0..=top {
        let l = cx.laplacian(q);
        if !cx.w(q).commutator(&l).is_zero() {
            return Err(format!("[W,K²] ≠ 0 at q={q}"));
        }
    }
    let hd = harmonic_spaces(&cx, rep).map_err(|e| e.to_string())?;
    let chi: i64 = hd
        .dims
        .iter()
        .enumerate()
        .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum();
    if chi != 0 {
        return Err(format!("harmonic Euler characteristic {chi}"));
    }
    let co = vqab_decomposition(&cx, rep, ctx).map_err(|e| e.to_string())?;
    let ex = exact_spectrum(&cx, rep, ctx).map_err(|e| e.to_string())?;
    if co.len() != ex.len() {
        return Err(format!("{} coexact entries vs {} exact", co.len(), ex.len()));
    }
    for (c, e) in co.iter().zip(&ex) {
        if !(c.b2.is_positive()
            && e.q == c.q + 1
            && e.a == c.a
            && e.mult == c.mult
            && spectral_close(&c.b2, &e.b2))
        {
            return Err(format!("unpaired entry q={} a={} b²={}", c.q, c.a, c.b2));
        }
    }
    Ok(())
}

/// Unit lower times unit upper (integer entries) times a nonzero rational
/// diagonal; returns the matrix and its determinant.
pub fn random_invertible_rational<R: Rng>(rng: &mut R, k: usize) -> (Mat<Rational>, Rational) {
    let lower = Mat::from_fn(k, k, &(), |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => Rational::from(1),
        std::cmp::Ordering::Greater => Rational::from(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Less => Rational::new(),
    });
    let upper = Mat::from_fn(k, k, &(), |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => Rational::from(1),
        std::cmp::Ordering::Less => Rational::from(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Greater => Rational::new(),
    });
    let diag: Vec<Rational> = (0..k)
        .map(|_| {
            let v = Rational::from((rng.gen_range(1..=4), rng.gen_range(1..=3)));
            if rng.gen_bool(0.5) {
                -v
            } else {
                v
            }
        })
        .collect();
    let det = diag.iter().fold(Rational::from(1), |a, b| a * b);
    (lower.mul(&upper).mul(&Mat::diag(&diag, &())), det)
}

/// A random based complex over ℚ together with its torsion computed in
/// closed form. In split coordinates C^q = B ⊕ H ⊕ L (boundaries,
/// cohomology, lifts) d_q maps L_q diagonally onto B_{q+1} with scalars c,
/// giving τ = ∏_q |∏c_q|^{(−1)^q}; the coordinates are then mixed by P_q,
/// which multiplies τ by |det P_q|^{−(−1)^q}.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    acyclic: bool,
) -> (cusp_torsion::rtorsion::BasedComplex<Rational>, Rational) {
    let len = rng.gen_range(2..=4usize);
    let ranks: Vec<usize> = (0..len - 1).map(|_| rng.gen_range(0..=2)).collect();
    let betti: Vec<usize> = (0..len)
        .map(|_| if acyclic { 0 } else { rng.gen_range(0..=1) })
        .collect();
    let below = |q: usize| if q == 0 { 0 } else { ranks[q - 1] };
    let above = |q: usize| if q + 1 == len { 0 } else { ranks[q] };
    let dims: Vec<usize> = (0..len).map(|q| below(q) + betti[q] + above(q)).collect();
    let mut tau = Rational::from(1);
    let mut split = Vec::new();
    for q in 0..len - 1 {
        let mut d = Mat::zeros(dims[q + 1], dims[q], &());
        let lift0 = below(q) + betti[q];
        for i in 0..ranks[q] {
            let c = Rational::from((rng.gen_range(1..=5), rng.gen_range(1..=4)));
            tau = if q % 2 == 0 { tau * &c } else { tau / &c };
            d[(i, lift0 + i)] = c;
        }
        split.push(d);
    }
    let ps: Vec<(Mat<Rational>, Rational)> =
        dims.iter().map(|&k| random_invertible_rational(rng, k)).collect();
    for (q, (_, det)) in ps.iter().enumerate() {
        let a = Rational::from(det.abs_ref());
        tau = if q % 2 == 0 { tau / a } else { tau * a };
    }
    let diff: Vec<Mat<Rational>> = (0..len - 1)
        .map(|q| ps[q + 1].0.mul(&split[q]).mul(&ps[q].0.inverse().unwrap()))
        .collect();
    let coh: Vec<Option<Mat<Rational>>> = (0..len)
        .map(|q| {
            (betti[q] > 0).then(|| {
                let e = Mat::from_fn(dims[q], betti[q], &(), |r, c| {
                    if r == below(q) + c {
                        Rational::from(1)
                    } else {
                        Rational::new()
                    }
                });
                ps[q].0.mul(&e)
            })
        })
        .collect();
    let cx = cusp_torsion::rtorsion::BasedComplex::new(dims, diff, coh, &()).unwrap();
    (cx, tau.abs())
}

//! Explicit quasi-isometric embeddings into product targets (Bass-Serre
//! tree x Euclidean x free group x hyperbolic plane x horospherical
//! pieces), target-space distance oracles, properness profiles, and the
//! empirical compression estimator.

use crate::bstree::{TreeCtx, TreeVertex};
use crate::error::{Error, Result};
use crate::gog::GBSData;
use crate::modmap::{mu_eval, ModularData};
use crate::ratlin::{char_poly, classify_root_moduli, QMat};
use crate::words::{ball, normal_form, phi, FreeWord, Letter, NormalForm, Word};
use crate::Rat;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

// ---------------------------------------------------------------------------
// Small dense f64 linear algebra (n <= 3 in practice)
// ---------------------------------------------------------------------------

type FMat = Vec<Vec<f64>>;

fn fmat_identity(n: usize) -> FMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn fmat_mul(a: &FMat, b: &FMat) -> FMat {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn fmat_apply(a: &FMat, v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn fmat_inverse(a: &FMat) -> Result<FMat> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())
            .unwrap();
        if m[p][c].abs() < 1e-12 {
            return Err(Error::SingularMatrix);
        }
        m.swap(c, p);
        let piv = m[c][c];
        for x in m[c].iter_mut() {
            *x /= piv;
        }
        for i in 0..n {
            if i != c && m[i][c] != 0.0 {
                let f = m[i][c];
                for j in 0..2 * n {
                    let s = m[c][j] * f;
                    m[i][j] -= s;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn fmat_int_pow(a: &FMat, ainv: &FMat, k: i64) -> FMat {
    let n = a.len();
    let base = if k >= 0 { a } else { ainv };
    let mut out = fmat_identity(n);
    for _ in 0..k.unsigned_abs() {
        out = fmat_mul(&out, base);
    }
    out
}

fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Target spaces and distance oracles
// ---------------------------------------------------------------------------

/// A horospherical target `V x| R` with expanding matrix `a`; a quasi-metric
/// adapted to the one-parameter action.
#[derive(Debug, Clone)]
pub struct Horospherical {
    pub a: FMat,
    ainv: FMat,
}

impl Horospherical {
    pub fn new(a: FMat) -> Result<Horospherical> {
        let ainv = fmat_inverse(&a)?;
        Ok(Horospherical { a, ainv })
    }

    /// `D((v,t),(v',t')) = |t - t'| + log(1 + ||v - v'|| adapted at height
    /// min(t,t'))`; symmetric, zero on equal points, triangle inequality up
    /// to a bounded multiplicative quasi-constant.
    pub fn quasi_distance(&self, v: &[f64], t: i64, w: &[f64], s: i64) -> f64 {
        let h = t.min(s);
        let diff: Vec<f64> = v.iter().zip(w).map(|(x, y)| x - y).collect();
        let adapted = fmat_apply(&fmat_int_pow(&self.a, &self.ainv, -h), &diff);
        (t - s).abs() as f64 + (1.0 + l2(&adapted)).ln()
    }
}

/// The factors a point of the product target can live in.
#[derive(Debug, Clone)]
pub enum TargetSpace {
    /// The Bass-Serre tree with its graph metric.
    TreeSpace,
    /// `R^n` with an `l^p` norm.
    Euclidean(usize),
    /// The free group on `d` stable letters with the word metric.
    FreeGroupSpace(usize),
    /// The affine group `R^n x| GL_n(R)` with a proper left-invariant
    /// quasi-metric; the generic fiber when `mu` has nontrivial linear parts.
    AffineGroup(usize),
    /// The upper half-plane.
    HyperbolicPlane,
    Horospherical(Horospherical),
}

/// `l^p` distance on `R^n` (`p >= 1`).
pub fn euclidean_distance(x: &[f64], y: &[f64], p: f64) -> f64 {
    debug_assert!(p >= 1.0);
    let s: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs().powf(p))
        .sum();
    s.powf(1.0 / p)
}

/// Word metric between freely reduced words: `|a^{-1} b|`.
pub fn free_distance(a: &FreeWord, b: &FreeWord) -> usize {
    let common = a
        .letters
        .iter()
        .zip(&b.letters)
        .take_while(|(x, y)| x == y)
        .count();
    (a.letters.len() - common) + (b.letters.len() - common)
}

/// Left-invariant quasi-distance on the affine group `R^n x| GL_n(R)`:
/// the quasi-norm of the difference `(A1, v1)^{-1} (A2, v2)`, measuring the
/// linear part on a log scale and the translation linearly. Left-invariance
/// makes pair distances depend only on the difference element, so distances
/// to the identity agree with the plain `l^p` values. Proper: it diverges
/// when either part of the difference escapes every compact set.
fn affine_quasi_distance(l1: &FMat, v1: &[f64], l2: &FMat, v2: &[f64], p: f64) -> f64 {
    let inv = fmat_inverse(l1).expect("mu images are invertible");
    let a = fmat_mul(&inv, l2);
    let dv: Vec<f64> = v2.iter().zip(v1).map(|(x, y)| x - y).collect();
    let w = fmat_apply(&inv, &dv);
    let n = a.len().max(1) as f64;
    let frob = |m: &FMat| -> f64 {
        m.iter()
            .flat_map(|row| row.iter())
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    };
    let fa = frob(&a);
    let fb = fmat_inverse(&a).map(|ai| frob(&ai)).unwrap_or(f64::INFINITY);
    // `max(|A|_F, |A^-1|_F) >= sqrt(n)` always, with equality at the identity.
    let mat = (fa.max(fb) / n.sqrt()).ln().max(0.0);
    let zeros = vec![0.0; w.len()];
    mat + euclidean_distance(&w, &zeros, p)
}

/// Exact upper-half-plane distance:
/// `d(z, w) = arcosh(1 + (|z - w|^2) / (2 Im z Im w))`.
/// Consistent with `sinh(d(i, i+t)/2) = |t|/2` and `d(ai, bi) = |ln(b/a)|`.
pub fn hyperbolic_distance(z: (f64, f64), w: (f64, f64)) -> Result<f64> {
    if z.1 <= 0.0 || w.1 <= 0.0 {
        return Err(Error::DomainError(
            "upper-half-plane points need positive imaginary part".into(),
        ));
    }
    let dx = z.0 - w.0;
    let dy = z.1 - w.1;
    let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * z.1 * w.1);
    Ok(arg.acosh())
}

// ---------------------------------------------------------------------------
// Embedding maps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EmbedCase {
    /// `w -> (action on the tree, translation part of mu, free-group part)`.
    /// Always available and proper.
    Generic,
    /// `d = 1` with certified no modulus-1 eigenvalues: split the fiber into
    /// the expanding and contracting characteristic parts `V+ (+) V-`, each
    /// carried by a horospherical factor.
    DOneSplit,
    /// `n = 1` with infinite modular image: free-group factor plus the
    /// orbital map into the hyperbolic plane at `z0 = i`.
    NOneHyperbolic,
}

#[derive(Debug, Clone)]
struct SplitData {
    /// Projection onto the expanding characteristic subspace.
    p_plus: FMat,
    p_minus: FMat,
    plus: Horospherical,
    /// The contracting part with the inverse matrix as its expansion.
    minus: Horospherical,
}

/// A certified embedding; build with [`Embedder::new`].
#[derive(Debug, Clone)]
pub struct EmbeddingMap {
    pub case: EmbedCase,
    split: Option<SplitData>,
    /// Generic case: true when every stable letter has identity linear part,
    /// so the affine factor degenerates to the translation lattice and plain
    /// `l^p` distance is already left-invariant.
    translational: bool,
}

impl EmbeddingMap {
    /// The factors of the product target, for reporting.
    pub fn target(&self, g: &GBSData) -> Vec<TargetSpace> {
        match self.case {
            EmbedCase::Generic => vec![
                TargetSpace::TreeSpace,
                if self.translational {
                    TargetSpace::Euclidean(g.n)
                } else {
                    TargetSpace::AffineGroup(g.n)
                },
                TargetSpace::FreeGroupSpace(g.rank_d()),
            ],
            EmbedCase::DOneSplit => {
                let s = self.split.as_ref().expect("certified split");
                vec![
                    TargetSpace::TreeSpace,
                    TargetSpace::FreeGroupSpace(g.rank_d()),
                    TargetSpace::Horospherical(s.plus.clone()),
                    TargetSpace::Horospherical(s.minus.clone()),
                ]
            }
            EmbedCase::NOneHyperbolic => vec![
                TargetSpace::FreeGroupSpace(g.rank_d()),
                TargetSpace::HyperbolicPlane,
            ],
        }
    }
}

/// A point of the product target.
#[derive(Debug, Clone)]
pub enum EmbedPoint {
    Generic {
        tree: TreeVertex,
        translation: Vec<f64>,
        /// Linear part of `mu`; together with `translation` this is the image
        /// of the word in the affine group.
        linear: Vec<Vec<f64>>,
        free: FreeWord,
    },
    DOneSplit {
        tree: TreeVertex,
        free: FreeWord,
        /// Stable-letter exponent sum: the height of the point, with
        /// `mu(w) = (translation, A^height)`.
        height: i64,
        plus: Vec<f64>,
        minus: Vec<f64>,
        translation: Vec<f64>,
    },
    NOneHyperbolic {
        free: FreeWord,
        /// Upper-half-plane coordinate `(x, y)`.
        z: (f64, f64),
    },
}

/// Shared context for embedding many words of one group.
pub struct Embedder<'a> {
    pub g: &'a GBSData,
    pub md: &'a ModularData,
    pub map: EmbeddingMap,
    ctx: TreeCtx<'a>,
}

impl<'a> Embedder<'a> {
    /// Certify the applicability conditions of `case` and build the map.
    /// `NotApplicable` when they fail.
    pub fn new(g: &'a GBSData, md: &'a ModularData, case: EmbedCase) -> Result<Embedder<'a>> {
        let split = match case {
            EmbedCase::Generic => None,
            EmbedCase::DOneSplit => Some(certify_split(g, md)?),
            EmbedCase::NOneHyperbolic => {
                if g.n != 1 {
                    return Err(Error::NotApplicable(
                        "NOneHyperbolic needs vertex groups of rank 1".into(),
                    ));
                }
                let infinite = g.stable_edges().iter().any(|&e| {
                    let q = &md.mu_stable(e)[(0, 0)];
                    q.numer().magnitude() != q.denom().magnitude()
                });
                if !infinite {
                    return Err(Error::NotApplicable(
                        "NOneHyperbolic needs an infinite modular image".into(),
                    ));
                }
                None
            }
        };
        let translational = g
            .stable_edges()
            .iter()
            .all(|&e| md.mu_stable(e) == &QMat::identity(g.n));
        Ok(Embedder {
            g,
            md,
            map: EmbeddingMap {
                case,
                split,
                translational,
            },
            ctx: TreeCtx::new(g),
        })
    }

    pub fn embed(&self, w: &Word) -> Result<EmbedPoint> {
        let free = phi(self.g, w);
        match self.map.case {
            EmbedCase::Generic => {
                let aff = mu_eval(self.md, self.g, w)?;
                let n = self.g.n;
                Ok(EmbedPoint::Generic {
                    tree: self.ctx.act(w, &self.ctx.base())?,
                    translation: aff.translation.iter().map(rat_f64).collect(),
                    linear: (0..n)
                        .map(|i| (0..n).map(|j| rat_f64(&aff.linear[(i, j)])).collect())
                        .collect(),
                    free,
                })
            }
            EmbedCase::DOneSplit => {
                let s = self.map.split.as_ref().expect("certified split");
                let aff = mu_eval(self.md, self.g, w)?;
                let b: Vec<f64> = aff.translation.iter().map(rat_f64).collect();
                let height: i64 = w
                    .letters
                    .iter()
                    .map(|l| match l {
                        Letter::Stable { exp, .. } => *exp as i64,
                        _ => 0,
                    })
                    .sum();
                Ok(EmbedPoint::DOneSplit {
                    tree: self.ctx.act(w, &self.ctx.base())?,
                    free,
                    height,
                    plus: fmat_apply(&s.p_plus, &b),
                    minus: fmat_apply(&s.p_minus, &b),
                    translation: b,
                })
            }
            EmbedCase::NOneHyperbolic => {
                let aff = mu_eval(self.md, self.g, w)?;
                let x = rat_f64(&aff.translation[0]);
                let y = rat_f64(&aff.linear[(0, 0)]).abs();
                Ok(EmbedPoint::NOneHyperbolic { free, z: (x, y) })
            }
        }
    }

    /// Product distance; the Euclidean factor uses the `l^p` norm.
    pub fn distance(&self, a: &EmbedPoint, b: &EmbedPoint, p: f64) -> f64 {
        match (a, b) {
            (
                EmbedPoint::Generic {
                    tree: t1,
                    translation: v1,
                    linear: l1,
                    free: f1,
                },
                EmbedPoint::Generic {
                    tree: t2,
                    translation: v2,
                    linear: l2,
                    free: f2,
                },
            ) => {
                // The affine factor needs a left-invariant metric so that
                // pair distances depend only on the difference element;
                // plain l^p works exactly when the image is translational.
                let affine = if self.map.translational {
                    euclidean_distance(v1, v2, p)
                } else {
                    affine_quasi_distance(l1, v1, l2, v2, p)
                };
                TreeCtx::distance(t1, t2) as f64 + affine + free_distance(f1, f2) as f64
            }
            (
                EmbedPoint::DOneSplit {
                    tree: t1,
                    free: f1,
                    height: h1,
                    plus: p1,
                    minus: m1,
                    ..
                },
                EmbedPoint::DOneSplit {
                    tree: t2,
                    free: f2,
                    height: h2,
                    plus: p2,
                    minus: m2,
                    ..
                },
            ) => {
                let s = self.map.split.as_ref().expect("certified split");
                TreeCtx::distance(t1, t2) as f64
                    + free_distance(f1, f2) as f64
                    + s.plus.quasi_distance(p1, *h1, p2, *h2)
                    + s.minus.quasi_distance(m1, -*h1, m2, -*h2)
            }
            (
                EmbedPoint::NOneHyperbolic { free: f1, z: z1 },
                EmbedPoint::NOneHyperbolic { free: f2, z: z2 },
            ) => {
                free_distance(f1, f2) as f64
                    + hyperbolic_distance(*z1, *z2).expect("embedded points are in the half-plane")
            }
            _ => panic!("mismatched embedding cases"),
        }
    }
}

/// One-off convenience wrapper around [`Embedder`].
pub fn embed_point(g: &GBSData, md: &ModularData, case: EmbedCase, w: &Word) -> Result<EmbedPoint> {
    Embedder::new(g, md, case)?.embed(w)
}

/// Certify `d = 1`, no modulus-1 eigenvalues, and build the characteristic
/// splitting `V+ (+) V-` of the fiber with its two horospherical factors.
fn certify_split(g: &GBSData, md: &ModularData) -> Result<SplitData> {
    if g.rank_d() != 1 {
        return Err(Error::NotApplicable("DOneSplit needs d = 1".into()));
    }
    let a_exact = md.mu_stable(g.stable_edges()[0]);
    let n = g.n;
    let p = char_poly(a_exact);
    let rm = classify_root_moduli(&p)?;
    if rm.count_eq1 > 0 {
        return Err(Error::NotApplicable(
            "DOneSplit needs no eigenvalue of modulus 1".into(),
        ));
    }
    let a: FMat = a_exact
        .rows()
        .iter()
        .map(|row| row.iter().map(rat_f64).collect())
        .collect();
    let (p_plus, p_minus) = if rm.count_lt1 == 0 {
        (fmat_identity(n), vec![vec![0.0; n]; n])
    } else if rm.count_gt1 == 0 {
        (vec![vec![0.0; n]; n], fmat_identity(n))
    } else {
        spectral_projections(&p, &a, rm.count_lt1)?
    };
    let ainv = fmat_inverse(&a)?;
    Ok(SplitData {
        p_plus,
        p_minus,
        plus: Horospherical::new(a.clone())?,
        minus: Horospherical::new(ainv)?,
    })
}

/// `(P_plus, P_minus)` for the characteristic split of `a` by root modulus,
/// via numeric roots of the exact characteristic polynomial (whose
/// inside/outside counts are certified by the caller) and a Bezout identity.
fn spectral_projections(
    p: &crate::ratlin::QPoly,
    a: &FMat,
    inside: usize,
) -> Result<(FMat, FMat)> {
    let coeffs: Vec<f64> = p.monic().coeffs.iter().map(rat_f64).collect();
    let mut roots = durand_kerner(&coeffs);
    roots.sort_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap());
    let q_minus = real_poly_from_roots(&roots[..inside]);
    let q_plus = real_poly_from_roots(&roots[inside..]);
    // u * q_plus + v * q_minus = 1; then (u * q_plus)(A) projects onto the
    // contracting characteristic subspace.
    let (u, _v) = poly_bezout(&q_plus, &q_minus).ok_or_else(|| {
        Error::PrecisionExhausted("characteristic factors too close to coprime-degenerate".into())
    })?;
    let proj_poly = poly_mul(&u, &q_plus);
    let p_minus = poly_eval_matrix(&proj_poly, a);
    let n = a.len();
    let mut p_plus = fmat_identity(n);
    for i in 0..n {
        for j in 0..n {
            p_plus[i][j] -= p_minus[i][j];
        }
    }
    Ok((p_plus, p_minus))
}

/// All complex roots of a monic polynomial (ascending f64 coefficients) by
/// Durand-Kerner iteration.
fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}

/// Monic real polynomial with the given roots (conjugates must pair up;
/// imaginary residue is dropped). Ascending coefficients.
fn real_poly_from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, x) in c.iter().enumerate() {
            next[k + 1] += x;
            next[k] -= x * r;
        }
        c = next;
    }
    c.into_iter().map(|z| z.re).collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn poly_trim(mut a: Vec<f64>) -> Vec<f64> {
    while a.len() > 1 && a.last().unwrap().abs() < 1e-11 {
        a.pop();
    }
    a
}

fn poly_divrem(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let b = poly_trim(b.to_vec());
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![0.0], r);
    }
    let mut q = vec![0.0; r.len() - db];
    let lead = b[db];
    for k in (db..r.len()).rev() {
        let f = r[k] / lead;
        q[k - db] = f;
        for j in 0..=db {
            r[k - db + j] -= f * b[j];
        }
    }
    (poly_trim(q), poly_trim(r))
}

/// Extended Euclid: `u * a + v * b = 1` for coprime `a, b` (numerically).
fn poly_bezout(a: &[f64], b: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let (mut r0, mut r1) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    let (mut u0, mut u1) = (vec![1.0], vec![0.0]);
    let (mut v0, mut v1) = (vec![0.0], vec![1.0]);
    while !(r1.len() == 1 && r1[0].abs() < 1e-9) {
        if r1.len() == 1 {
            break;
        }
        let (q, r) = poly_divrem(&r0, &r1);
        let nu = poly_sub(&u0, &poly_mul(&q, &u1));
        let nv = poly_sub(&v0, &poly_mul(&q, &v1));
        r0 = r1;
        r1 = poly_trim(r);
        u0 = u1;
        u1 = nu;
        v0 = v1;
        v1 = nv;
    }
    // r0 is the (constant) gcd once r1 is ~0; normalize to 1.
    let (g, u, v) = if r1.len() == 1 && r1[0].abs() > 1e-9 {
        (r1[0], u1, v1)
    } else if r0.len() == 1 && r0[0].abs() > 1e-9 {
        (r0[0], u0, v0)
    } else {
        return None;
    };
    Some((
        u.iter().map(|c| c / g).collect(),
        v.iter().map(|c| c / g).collect(),
    ))
}

fn poly_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        c[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        c[i] -= x;
    }
    poly_trim(c)
}

fn poly_eval_matrix(p: &[f64], a: &FMat) -> FMat {
    let n = a.len();
    let mut acc = vec![vec![0.0; n]; n];
    for c in p.iter().rev() {
        acc = fmat_mul(&acc, a);
        for i in 0..n {
            acc[i][i] += c;
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Properness profile
// ---------------------------------------------------------------------------

/// For each `R = 0..=r_max`: the minimal target displacement `d(f(w), f(1))`
/// over the word-length sphere of radius `R` (`l^2` Euclidean factor).
pub fn properness_profile(
    g: &GBSData,
    md: &ModularData,
    case: EmbedCase,
    r_max: usize,
) -> Result<Vec<f64>> {
    let emb = Embedder::new(g, md, case)?;
    let elements = ball(g, r_max)?;
    let origin = emb.embed(&Word::empty())?;
    let mut profile = vec![f64::INFINITY; r_max + 1];
    profile[0] = 0.0;
    for el in &elements {
        if el.length == 0 {
            continue;
        }
        let d = emb.distance(&origin, &emb.embed(&el.word)?, 2.0);
        if d < profile[el.length] {
            profile[el.length] = d;
        }
    }
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Compression estimation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CompressionEstimate {
    /// Lower envelope `rho(r) = min { target distance : G-distance >= r }`
    /// over the sampled pairs, for `r = 1..`.
    pub envelope: Vec<(usize, f64)>,
    /// Least-squares slope of `log rho(r)` against `log r`, clamped to
    /// `[0, 1]`.
    pub exponent: f64,
    /// Standard error of the fitted slope.
    pub band: f64,
    /// `(multiplicative, additive)` constants of a linear fit, present when
    /// the exponent indicates a linear regime.
    pub qi_constants: Option<(f64, f64)>,
    pub seed: u64,
    pub pair_count: usize,
    pub element_count: usize,
}

const ALL_PAIRS_LIMIT: usize = 10_000;
const SAMPLE_PAIRS: usize = 20_000;

/// Empirical compression of the embedding over the radius-`radius` ball:
/// exact word-metric distances, target distances from the product oracle
/// with the `l^p` Euclidean factor, lower-envelope log-log fit. All pairs
/// are used when their number is at most 10^4; otherwise pairs are sampled
/// uniformly with the recorded seed.
pub fn estimate_compression(
    g: &GBSData,
    md: &ModularData,
    case: EmbedCase,
    radius: usize,
    p: f64,
    seed: u64,
) -> Result<CompressionEstimate> {
    let emb = Embedder::new(g, md, case)?;
    let elements = ball(g, radius)?;
    let points: Vec<EmbedPoint> = elements
        .iter()
        .map(|el| emb.embed(&el.word))
        .collect::<Result<_>>()?;
    let by_nf: HashMap<&NormalForm, usize> =
        elements.iter().map(|el| (&el.nf, el.length)).collect();
    let m = elements.len();
    let mut min_target: Vec<f64> = vec![f64::INFINITY; 2 * radius + 1];
    let mut pair_count = 0usize;
    let mut handle = |i: usize, j: usize| -> Result<()> {
        // Exact G-distance: the length of x^{-1} y when it lies in the ball;
        // pairs whose difference escapes the ball are skipped.
        let diff = elements[i].word.inverse().concat(&elements[j].word);
        let nf = normal_form(g, &diff)?;
        let Some(&dist) = by_nf.get(&nf) else {
            return Ok(());
        };
        if dist == 0 {
            return Ok(());
        }
        let td = emb.distance(&points[i], &points[j], p);
        if td < min_target[dist] {
            min_target[dist] = td;
        }
        pair_count += 1;
        Ok(())
    };
    if m * (m.saturating_sub(1)) / 2 <= ALL_PAIRS_LIMIT {
        for i in 0..m {
            for j in i + 1..m {
                handle(i, j)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Distances to the identity are exact for every element; keep a
        // deterministic backbone of them, then sample general pairs.
        for j in 1..m.min(ALL_PAIRS_LIMIT) {
            handle(0, j)?;
        }
        for _ in 0..SAMPLE_PAIRS {
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            if i != j {
                handle(i.min(j), i.max(j))?;
            }
        }
    }
    // Lower envelope: rho(r) = min over realized distances >= r.
    let mut rho = min_target.clone();
    for r in (1..rho.len() - 1).rev() {
        if rho[r + 1] < rho[r] {
            rho[r] = rho[r + 1];
        }
    }
    let envelope: Vec<(usize, f64)> = (1..rho.len())
        .filter(|&r| rho[r].is_finite())
        .map(|r| (r, rho[r]))
        .collect();
    // Fit the asymptotic slope over the top half of the realized distances;
    // small radii carry strong integrality effects that are not part of the
    // exponent.
    let r_top = envelope.last().map(|(r, _)| *r).unwrap_or(0);
    let r_lo = (r_top / 2).max(1);
    let fit: Vec<(f64, f64)> = envelope
        .iter()
        .filter(|(r, v)| *v > 0.0 && *r >= r_lo)
        .map(|(r, v)| ((*r as f64).ln(), v.ln()))
        .collect();
    if fit.len() < 2 {
        return Err(Error::ResourceLimit(
            "not enough distinct distances for a compression fit".into(),
        ));
    }
    let (slope, band) = linear_fit(&fit);
    let exponent = slope.clamp(0.0, 1.0);
    let qi_constants = if exponent >= 0.9 {
        let lin: Vec<(f64, f64)> = envelope.iter().map(|(r, v)| (*r as f64, *v)).collect();
        let (mult, add) = linear_fit_full(&lin);
        Some((mult, add))
    } else {
        None
    };
    Ok(CompressionEstimate {
        envelope,
        exponent,
        band,
        qi_constants,
        seed,
        pair_count,
        element_count: m,
    })
}

/// Least-squares slope and its standard error.
fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let dof = (pts.len().saturating_sub(2)).max(1) as f64;
    let band = (sse / dof / sxx).sqrt();
    (slope, band)
}

/// Least-squares `(slope, intercept)`.
fn linear_fit_full(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    (slope, my - slope * mx)
}

//! Decision layer: amenability of the fundamental group, amenability of the
//! closure of the modular image, Haagerup/weak-amenability reporting,
//! distortion analysis, compression exponents, and the free-by-X structure
//! summary.
//!
//! Every verdict is three-valued. `Amenable`/`Yes` always names the
//! structural rule that fired; `NonAmenable`/`No` always carries a
//! replayable certificate; everything else is `Unknown` with the exhausted
//! search bound. No rule guesses.

use crate::bstree::TreeCtx;
use crate::gog::{GBSData, OEdge};
use crate::modmap::{compute_modular, ModularData};
use crate::ratlin::{
    char_poly, circle_split, classify_root_moduli, independent_subset, intersect_subspaces,
    rational_kernel, QMat, QPoly,
};
use crate::words::Word;
use crate::{Int, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default search depth for ping-pong and Schottky certificate searches.
pub const DEFAULT_DEPTH: usize = 6;

/// Three-valued answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TriBool {
    Yes,
    No,
    Unknown,
}

/// The structural case that certifies amenability of the whole group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum AmenableReason {
    SingleVertexNoEdges,
    AscendingHNN,
    IndexTwoAmalgam,
}

/// Two tree-hyperbolic elements with disjoint endpoint pairs; replay with
/// [`TreeCtx::verify_ping_pong`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PingPongCertificate {
    pub a: Word,
    pub b: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmenabilityVerdict {
    Amenable(AmenableReason),
    NonAmenable(PingPongCertificate),
    Unknown(usize),
}

/// Decide amenability of the fundamental group: collapse the graph, match
/// the structural amenable cases, otherwise search for a ping-pong pair up
/// to `depth`. Resource exhaustion surfaces as `Unknown(depth)`.
pub fn decide_amenable(g: &GBSData, depth: usize) -> AmenabilityVerdict {
    let r = g.reduce_graph();
    if r.graph.geom_edges.is_empty() {
        return AmenabilityVerdict::Amenable(AmenableReason::SingleVertexNoEdges);
    }
    if r.graph.vertices.len() == 1 && r.graph.geom_edges.len() == 1 {
        let e = OEdge::fwd(0);
        if r.sigma(e).is_unimodular() || r.sigma(e.bar()).is_unimodular() {
            return AmenabilityVerdict::Amenable(AmenableReason::AscendingHNN);
        }
    }
    if r.graph.vertices.len() == 2 && r.graph.geom_edges.len() == 1 && r.tree[0] {
        let e = OEdge::fwd(0);
        let two = Int::from(2);
        if r.sigma(e).det().abs() == two && r.sigma(e.bar()).det().abs() == two {
            return AmenabilityVerdict::Amenable(AmenableReason::IndexTwoAmalgam);
        }
    }
    let ctx = TreeCtx::new(g);
    match ctx.ping_pong_search(depth, 0) {
        Ok(Some((a, b))) => AmenabilityVerdict::NonAmenable(PingPongCertificate { a, b }),
        Ok(None) | Err(_) => AmenabilityVerdict::Unknown(depth),
    }
}

/// The rule certifying amenability of the closure of the modular image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ClosureCase {
    DZero,
    DOne,
    NOne,
    InvariantForm,
    Triangularizable,
}

/// A discrete free pair inside the modular image: all generators lie in
/// `GL_n(Z)` (so the image is discrete, hence closed), and the two recorded
/// products are opposite elementary matrices with off-diagonal entry of
/// absolute value >= 2 (free by the classical ping-pong inequality, whose
/// contraction constant is recorded). Replay with [`verify_schottky`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchottkyCertificate {
    /// The generator matrices of the modular image, in stable-edge order.
    pub generators: Vec<QMat>,
    /// `word_a[i] = (generator index, exponent)`; product = `mat_a`.
    pub word_a: Vec<(usize, i8)>,
    pub word_b: Vec<(usize, i8)>,
    pub mat_a: QMat,
    pub mat_b: QMat,
    /// The verified ping-pong contraction constant `min(|m_a|, |m_b|) - 1`.
    pub contraction: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureVerdict {
    Amenable(ClosureCase),
    NonAmenable(SchottkyCertificate),
    Unknown,
}

fn stable_matrices(md: &ModularData, g: &GBSData) -> Vec<QMat> {
    g.stable_edges()
        .into_iter()
        .map(|e| md.mu_stable(e).clone())
        .collect()
}

/// Amenability of the closure of `mu(H_d)` in `GL_n(R)`.
///
/// Cascade: `d = 0`, `d = 1`, `n = 1` are automatic; then an exact common
/// invariant positive-definite form (compact closure); then a common
/// triangularization over the rationals (solvable closure); then a Schottky
/// search for a discrete free pair up to `depth`.
pub fn closure_amenability(md: &ModularData, g: &GBSData, depth: usize) -> ClosureVerdict {
    let d = g.rank_d();
    if d == 0 {
        return ClosureVerdict::Amenable(ClosureCase::DZero);
    }
    if d == 1 {
        return ClosureVerdict::Amenable(ClosureCase::DOne);
    }
    if g.n == 1 {
        return ClosureVerdict::Amenable(ClosureCase::NOne);
    }
    let mats = stable_matrices(md, g);
    if invariant_form_candidate(&mats, g.n).is_some() {
        return ClosureVerdict::Amenable(ClosureCase::InvariantForm);
    }
    if common_triangularizable(&mats, g.n) {
        return ClosureVerdict::Amenable(ClosureCase::Triangularizable);
    }
    match schottky_search(&mats, depth) {
        Some(cert) => ClosureVerdict::NonAmenable(cert),
        None => ClosureVerdict::Unknown,
    }
}

/// Solve the exact linear system `{A^T Q A = Q for all generators, Q
/// symmetric}` and test the deterministic candidate (sum of a rational basis
/// of the solution space) for positive-definiteness. Returns the form when
/// it certifies; `None` means "no conclusion", never "no form exists".
pub fn invariant_form_candidate(mats: &[QMat], n: usize) -> Option<QMat> {
    let unknowns = n * (n + 1) / 2;
    let idx = |i: usize, j: usize| -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // Row-major upper triangle.
        i * n - i * (i + 1) / 2 + j
    };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for a in mats {
        for k in 0..n {
            for l in k..n {
                let mut row = vec![Rat::zero(); unknowns];
                for i in 0..n {
                    for j in 0..n {
                        let c = &a[(i, k)] * &a[(j, l)];
                        let slot = idx(i, j);
                        row[slot] = &row[slot] + &c;
                    }
                }
                let slot = idx(k, l);
                row[slot] = &row[slot] - &Rat::one();
                rows.push(row);
            }
        }
    }
    let basis = rational_kernel(&rows, unknowns);
    if basis.is_empty() {
        return None;
    }
    let mut cand = vec![Rat::zero(); unknowns];
    for b in &basis {
        for (c, x) in cand.iter_mut().zip(b) {
            *c = &*c + x;
        }
    }
    let mut q = QMat::identity(n);
    for i in 0..n {
        for j in 0..n {
            q[(i, j)] = cand[idx(i, j)].clone();
        }
    }
    if is_positive_definite(&q) {
        Some(q)
    } else {
        None
    }
}

/// Exact Sylvester criterion: all leading principal minors positive.
pub fn is_positive_definite(q: &QMat) -> bool {
    let n = q.n;
    for k in 1..=n {
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            rows.push((0..k).map(|j| q[(i, j)].clone()).collect());
        }
        if QMat::from_rows(rows).det() <= Rat::zero() {
            return false;
        }
    }
    true
}

/// Rational roots of `p`, via the rational-root theorem on the cleared-
/// denominator form. Gives up (returns only the roots found so far) when the
/// divisor enumeration would be too large; callers only lose completeness.
fn rational_roots(p: &QPoly) -> Vec<Rat> {
    let mut out = Vec::new();
    let mut q = p.clone();
    if q.is_zero() || q.is_constant() {
        return out;
    }
    while q.coeffs[0].is_zero() {
        out.push(Rat::zero());
        q = QPoly::new(q.coeffs[1..].to_vec());
        if q.is_constant() {
            return out;
        }
    }
    // Clear denominators to an integer polynomial.
    let mut den = Int::one();
    for c in &q.coeffs {
        den = num_integer::lcm(den, c.denom().clone());
    }
    let ints: Vec<Int> = q
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let c0 = ints[0].abs();
    let cn = ints.last().unwrap().abs();
    let (Some(c0), Some(cn)) = (c0.to_i64(), cn.to_i64()) else {
        return out;
    };
    if c0 > 1_000_000 || cn > 1_000_000 {
        return out;
    }
    let divisors = |m: i64| -> Vec<i64> {
        let mut d = Vec::new();
        let mut k = 1;
        while k * k <= m {
            if m % k == 0 {
                d.push(k);
                d.push(m / k);
            }
            k += 1;
        }
        d
    };
    for num in divisors(c0) {
        for dden in divisors(cn) {
            for sign in [1i64, -1] {
                let cand = Rat::new(Int::from(sign * num), Int::from(dden));
                if q.eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out.sort();
    out
}

/// Whether the given invertible matrices admit a common full invariant flag
/// over the rationals (Lie-Kolchin-style certificate). Only returns `true`
/// with an explicit flag found; eigenvalue search is restricted to rational
/// eigenvalues, so `false` means "not certified", not "not triangularizable".
pub fn common_triangularizable(mats: &[QMat], n: usize) -> bool {
    if n == 0 || mats.is_empty() {
        return true;
    }
    triangularize_rec(mats.to_vec(), n)
}

fn triangularize_rec(mats: Vec<QMat>, n: usize) -> bool {
    if n <= 1 {
        return true;
    }
    let Some(v) = common_eigenvector(&mats, n) else {
        return false;
    };
    // Extend v to a basis, conjugate, and recurse on the quotient block.
    let mut span = vec![v.clone()];
    for k in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[k] = Rat::one();
        span.push(e);
    }
    let basis = independent_subset(&span, n);
    debug_assert_eq!(basis.len(), n);
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        cols.push((0..n).map(|j| basis[j][i].clone()).collect::<Vec<_>>());
    }
    let p = QMat::from_rows(cols);
    let pinv = p.inverse().expect("basis matrix is invertible");
    let mut quotients = Vec::with_capacity(mats.len());
    for a in &mats {
        let c = pinv.mul(a).mul(&p);
        // Invariance of span(v) puts c in block form [[lambda, *], [0, A']].
        for i in 1..n {
            if !c[(i, 0)].is_zero() {
                return false;
            }
        }
        let mut rows = Vec::with_capacity(n - 1);
        for i in 1..n {
            rows.push((1..n).map(|j| c[(i, j)].clone()).collect::<Vec<_>>());
        }
        quotients.push(QMat::from_rows(rows));
    }
    triangularize_rec(quotients, n - 1)
}

/// A common eigenvector over Q of all matrices, by refining candidate
/// subspaces against each matrix's rational eigenspaces.
fn common_eigenvector(mats: &[QMat], n: usize) -> Option<Vec<Rat>> {
    let full: Vec<Vec<Rat>> = (0..n)
        .map(|k| {
            let mut e = vec![Rat::zero(); n];
            e[k] = Rat::one();
            e
        })
        .collect();
    let mut candidates = vec![full];
    for a in mats {
        let evs = rational_roots(&char_poly(a));
        let mut next = Vec::new();
        for lam in &evs {
            // ker(A - lam I)
            let mut rows = a.rows();
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = &row[i] - lam;
            }
            let eig = rational_kernel(&rows, n);
            if eig.is_empty() {
                continue;
            }
            for cand in &candidates {
                let inter = intersect_subspaces(cand, &eig, n);
                if !inter.is_empty() {
                    next.push(inter);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        candidates = next;
    }
    candidates.into_iter().next().and_then(|s| s.into_iter().next())
}

/// Search products of the generators up to `depth` for a discrete free
/// pair: requires every generator in `GL_n(Z)` and finds opposite 2x2
/// elementary matrices with off-diagonal entries of absolute value >= 2.
pub fn schottky_search(mats: &[QMat], depth: usize) -> Option<SchottkyCertificate> {
    if mats.is_empty() {
        return None;
    }
    let n = mats[0].n;
    if n != 2 {
        return None;
    }
    for m in mats {
        let Some(im) = m.to_imat() else { return None };
        if !im.is_unimodular() {
            return None;
        }
    }
    // BFS over products; deterministic order, first-found smallest pair.
    let mut elems: Vec<(Vec<(usize, i8)>, QMat)> = vec![(vec![], QMat::identity(n))];
    let mut seen = std::collections::HashSet::new();
    seen.insert(mat_key(&elems[0].1));
    let mut frontier = elems.clone();
    let inverses: Vec<QMat> = mats
        .iter()
        .map(|m| m.inverse().expect("generators are invertible"))
        .collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for (i, (g, gi)) in mats.iter().zip(&inverses).enumerate() {
                for (exp, mat) in [(1i8, g), (-1i8, gi)] {
                    let prod = m.mul(mat);
                    if seen.insert(mat_key(&prod)) {
                        let mut word = w.clone();
                        word.push((i, exp));
                        next.push((word, prod));
                    }
                }
            }
            if elems.len() + next.len() > 5000 {
                break;
            }
        }
        elems.extend(next.iter().cloned());
        frontier = next;
        // Look for an (upper, lower) elementary pair in deterministic order.
        for (wa, a) in &elems {
            let Some(ma) = elementary_entry(a, true) else {
                continue;
            };
            for (wb, b) in &elems {
                let Some(mb) = elementary_entry(b, false) else {
                    continue;
                };
                let c = std::cmp::min(ma.abs(), mb.abs()) - 1;
                if c >= Int::one() {
                    return Some(SchottkyCertificate {
                        generators: mats.to_vec(),
                        word_a: wa.clone(),
                        word_b: wb.clone(),
                        mat_a: a.clone(),
                        mat_b: b.clone(),
                        contraction: c,
                    });
                }
            }
        }
    }
    None
}

fn mat_key(m: &QMat) -> String {
    format!("{:?}", m.rows())
}

/// For `upper`: matches `[[1, m], [0, 1]]` with `|m| >= 2` and returns `m`;
/// otherwise the transposed shape.
fn elementary_entry(m: &QMat, upper: bool) -> Option<Int> {
    if m.n != 2 || !m[(0, 0)].is_one() || !m[(1, 1)].is_one() {
        return None;
    }
    let (off, zero) = if upper { ((0, 1), (1, 0)) } else { ((1, 0), (0, 1)) };
    if !m[zero].is_zero() {
        return None;
    }
    let v = &m[off];
    if !v.denom().is_one() || v.numer().abs() < Int::from(2) {
        return None;
    }
    Some(v.numer().clone())
}

/// Replay a Schottky certificate from scratch: generators integral and
/// unimodular, recorded words multiply to the recorded matrices, matrices
/// are opposite elementary with the claimed contraction constant.
pub fn verify_schottky(cert: &SchottkyCertificate) -> bool {
    for g in &cert.generators {
        match g.to_imat() {
            Some(im) if im.is_unimodular() => {}
            _ => return false,
        }
    }
    let eval = |word: &[(usize, i8)]| -> Option<QMat> {
        let n = cert.generators.first()?.n;
        let mut m = QMat::identity(n);
        for &(i, exp) in word {
            let g = cert.generators.get(i)?;
            let f = if exp == 1 { g.clone() } else { g.inverse().ok()? };
            m = m.mul(&f);
        }
        Some(m)
    };
    let (Some(a), Some(b)) = (eval(&cert.word_a), eval(&cert.word_b)) else {
        return false;
    };
    if a != cert.mat_a || b != cert.mat_b {
        return false;
    }
    let (Some(ma), Some(mb)) = (
        elementary_entry(&a, true),
        elementary_entry(&b, false),
    ) else {
        return false;
    };
    let c = std::cmp::min(ma.abs(), mb.abs()) - 1;
    c >= Int::one() && c == cert.contraction
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaagerupReport {
    pub haagerup: TriBool,
    pub weakly_amenable: TriBool,
    /// The Cowling-Haagerup constant; present exactly when the answer is Yes
    /// (it is then 1).
    pub lambda: Option<Rat>,
    pub closure: ClosureVerdict,
}

/// Haagerup Property and weak amenability, decided through the amenability
/// of the closure of the modular image; the two answers always coincide for
/// this class, and the constant is 1 whenever they hold.
pub fn haagerup_report(g: &GBSData) -> HaagerupReport {
    let md = compute_modular(g);
    let cv = closure_amenability(&md, g, DEFAULT_DEPTH);
    let (h, lambda) = match &cv {
        ClosureVerdict::Amenable(_) => (TriBool::Yes, Some(Rat::one())),
        ClosureVerdict::NonAmenable(_) => (TriBool::No, None),
        ClosureVerdict::Unknown => (TriBool::Unknown, None),
    };
    HaagerupReport {
        haagerup: h,
        weakly_amenable: h,
        lambda,
        closure: cv,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistortionReport {
    /// Basis of the maximal invariant subspace of the dual on which the
    /// tested action is distal (modulus-1 characteristic part).
    pub distal_dual_part: Vec<Vec<Rat>>,
    pub dual_dim: usize,
    /// Whether the distal part was established exactly (always for d <= 1;
    /// for d >= 2 only when the bounded-word intersection is zero).
    pub certified: bool,
    pub exp_distorted: TriBool,
    pub exp_subspace_note: String,
}

fn full_dual_basis(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|k| {
            let mut e = vec![Rat::zero(); n];
            e[k] = Rat::one();
            e
        })
        .collect()
}

/// Modulus-1 characteristic subspace of `m` (acting on the dual via the
/// transpose; characteristic moduli are inversion-invariant on the circle).
/// `None` when the circle factor of the characteristic polynomial does not
/// separate exactly.
fn circle_char_subspace(m: &QMat) -> Option<Vec<Vec<Rat>>> {
    let p = char_poly(&m.transpose());
    let (circ, _off) = circle_split(&p)?;
    if circ.is_constant() {
        return Some(Vec::new());
    }
    let val = circ.eval_matrix(&m.transpose());
    Some(rational_kernel(&val.rows(), m.n))
}

/// Distortion analysis of the fiber `R^n` inside the modular quotient:
/// exponential distortion holds exactly when the dual carries no invariant
/// distal subspace. For `d <= 1` the analysis is exact; for `d >= 2` the
/// distal part is over-approximated by intersecting modulus-1 characteristic
/// subspaces over bounded products, which certifies only the zero case.
pub fn distortion_report(md: &ModularData, g: &GBSData) -> DistortionReport {
    let n = g.n;
    let d = g.rank_d();
    if d == 0 {
        return DistortionReport {
            distal_dual_part: full_dual_basis(n),
            dual_dim: n,
            certified: true,
            exp_distorted: TriBool::No,
            exp_subspace_note: "trivial modular action: the full dual is distal".into(),
        };
    }
    let mats = stable_matrices(md, g);
    if d == 1 {
        let m = &mats[0];
        let p = char_poly(m);
        let rm = classify_root_moduli(&p).expect("characteristic polynomial is nonzero");
        if rm.count_eq1 == 0 {
            return DistortionReport {
                distal_dual_part: Vec::new(),
                dual_dim: n,
                certified: true,
                exp_distorted: TriBool::Yes,
                exp_subspace_note: "no characteristic root of modulus 1; distal part is 0".into(),
            };
        }
        if rm.count_eq1 == n {
            return DistortionReport {
                distal_dual_part: full_dual_basis(n),
                dual_dim: n,
                certified: true,
                exp_distorted: TriBool::No,
                exp_subspace_note: "all characteristic roots have modulus 1; the full dual is distal"
                    .into(),
            };
        }
        return match circle_char_subspace(m) {
            Some(basis) => DistortionReport {
                distal_dual_part: basis,
                dual_dim: n,
                certified: true,
                exp_distorted: TriBool::Unknown,
                exp_subspace_note:
                    "proper nonzero modulus-1 characteristic part of the dual".into(),
            },
            None => DistortionReport {
                distal_dual_part: Vec::new(),
                dual_dim: n,
                certified: false,
                exp_distorted: TriBool::Unknown,
                exp_subspace_note:
                    "modulus-1 characteristic factor does not separate exactly".into(),
            },
        };
    }
    // d >= 2: bounded-word heuristic. Any invariant distal subspace of the
    // dual lies inside every element's modulus-1 characteristic subspace, so
    // an empty intersection certifies distal part 0.
    if mats.iter().all(|m| m.is_identity()) {
        return DistortionReport {
            distal_dual_part: full_dual_basis(n),
            dual_dim: n,
            certified: true,
            exp_distorted: TriBool::No,
            exp_subspace_note: "trivial modular action: the full dual is distal".into(),
        };
    }
    const WORD_CAP: usize = 3;
    let mut inter: Option<Vec<Vec<Rat>>> = None;
    let mut exhaustive = true;
    for m in bounded_products(&mats, WORD_CAP, 500) {
        let sub = match circle_char_subspace(&m) {
            Some(s) => s,
            None => {
                exhaustive = false;
                continue;
            }
        };
        inter = Some(match inter {
            None => sub,
            Some(cur) => {
                if cur.is_empty() || sub.is_empty() {
                    Vec::new()
                } else {
                    intersect_subspaces(&cur, &sub, n)
                }
            }
        });
        if inter.as_ref().is_some_and(|s| s.is_empty()) {
            break;
        }
    }
    let basis = inter.unwrap_or_else(|| full_dual_basis(n));
    if basis.is_empty() {
        DistortionReport {
            distal_dual_part: basis,
            dual_dim: n,
            certified: true,
            exp_distorted: TriBool::Yes,
            exp_subspace_note: format!(
                "modulus-1 characteristic subspaces over words of length <= {} intersect trivially",
                WORD_CAP
            ),
        }
    } else {
        DistortionReport {
            distal_dual_part: basis,
            dual_dim: n,
            certified: false,
            exp_distorted: TriBool::Unknown,
            exp_subspace_note: format!(
                "bounded-word heuristic (length <= {}{}): distality on the reported subspace is not certified",
                WORD_CAP,
                if exhaustive { "" } else { ", partial" }
            ),
        }
    }
}

/// Distinct products of the generators and their inverses up to `depth`
/// letters, deterministic order, at most `cap` matrices.
fn bounded_products(mats: &[QMat], depth: usize, cap: usize) -> Vec<QMat> {
    let n = mats[0].n;
    let mut out = vec![QMat::identity(n)];
    let mut seen = std::collections::HashSet::new();
    seen.insert(mat_key(&out[0]));
    let inverses: Vec<QMat> = mats
        .iter()
        .map(|m| m.inverse().expect("generators are invertible"))
        .collect();
    let mut frontier = out.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        'outer: for m in &frontier {
            for g in mats.iter().chain(&inverses) {
                let prod = m.mul(g);
                if seen.insert(mat_key(&prod)) {
                    next.push(prod);
                    if out.len() + next.len() >= cap {
                        break 'outer;
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if out.len() >= cap {
            break;
        }
    }
    out
}

/// Symbolic compression exponent as a function of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum AlphaValue {
    /// Identically 1.
    One,
    /// `max(1/p, 1/2)`.
    MaxHalfInvP,
    /// Amenability unresolved: 1 if amenable, `max(1/p, 1/2)` otherwise.
    Unresolved,
}

impl AlphaValue {
    pub fn eval(&self, p: &Rat) -> Option<Rat> {
        match self {
            AlphaValue::One => Some(Rat::one()),
            AlphaValue::MaxHalfInvP => {
                let inv = p.recip();
                let half = Rat::new(Int::one(), Int::from(2));
                Some(if inv > half { inv } else { half })
            }
            AlphaValue::Unresolved => None,
        }
    }

    pub fn render(&self) -> &'static str {
        match self {
            AlphaValue::One => "1",
            AlphaValue::MaxHalfInvP => "max(1/p, 1/2)",
            AlphaValue::Unresolved => "1 (if amenable) or max(1/p, 1/2) (if non-amenable)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionReport {
    /// True when d = 0, d = 1, or n = 1.
    pub applicable: bool,
    pub alpha_p: Option<AlphaValue>,
    pub alpha_p_sharp: Option<AlphaValue>,
    pub assumptions: Vec<String>,
}

/// L^p-compression exponents: alpha_p = 1 whenever the hypotheses apply;
/// the equivariant exponent depends on amenability of the group.
pub fn compression_report(g: &GBSData, depth: usize) -> CompressionReport {
    let d = g.rank_d();
    let n = g.n;
    let applicable = d == 0 || d == 1 || n == 1;
    let mut assumptions = Vec::new();
    if d == 0 {
        assumptions.push("d = 0".to_string());
    } else if d == 1 {
        assumptions.push("d = 1".to_string());
    }
    if n == 1 {
        assumptions.push("n = 1".to_string());
    }
    if !applicable {
        return CompressionReport {
            applicable,
            alpha_p: None,
            alpha_p_sharp: None,
            assumptions: vec!["none of d = 0, d = 1, n = 1 holds".to_string()],
        };
    }
    let sharp = match decide_amenable(g, depth) {
        AmenabilityVerdict::Amenable(reason) => {
            assumptions.push(format!("amenable: {:?}", reason));
            AlphaValue::One
        }
        AmenabilityVerdict::NonAmenable(_) => {
            assumptions.push("non-amenable: ping-pong certificate".to_string());
            AlphaValue::MaxHalfInvP
        }
        AmenabilityVerdict::Unknown(dd) => {
            assumptions.push(format!("amenability unresolved at depth {}", dd));
            AlphaValue::Unresolved
        }
    };
    CompressionReport {
        applicable,
        alpha_p: Some(AlphaValue::One),
        alpha_p_sharp: Some(sharp),
        assumptions,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// The kernel of the modular map is always free.
    pub ker_mu_free: bool,
    pub free_by_amenable: TriBool,
    pub note: String,
}

/// Free-by-X structure: the kernel of the modular map is free; the quotient
/// is amenable exactly when the modular image is virtually solvable, which
/// is certified by d <= 1, n = 1, commuting generators, or a common
/// triangularization, and refuted by a Schottky certificate.
pub fn structure_report(md: &ModularData, g: &GBSData, depth: usize) -> StructureReport {
    let d = g.rank_d();
    let n = g.n;
    if d <= 1 || n == 1 {
        return StructureReport {
            ker_mu_free: true,
            free_by_amenable: TriBool::Yes,
            note: format!("modular image solvable automatically (d = {}, n = {})", d, n),
        };
    }
    let mats = stable_matrices(md, g);
    let commuting = mats
        .iter()
        .enumerate()
        .all(|(i, a)| mats[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)));
    if commuting {
        return StructureReport {
            ker_mu_free: true,
            free_by_amenable: TriBool::Yes,
            note: "modular image abelian (generators commute)".into(),
        };
    }
    if common_triangularizable(&mats, n) {
        return StructureReport {
            ker_mu_free: true,
            free_by_amenable: TriBool::Yes,
            note: "modular image triangularizable, hence solvable".into(),
        };
    }
    if let Some(cert) = schottky_search(&mats, depth) {
        debug_assert!(verify_schottky(&cert));
        return StructureReport {
            ker_mu_free: true,
            free_by_amenable: TriBool::No,
            note: "modular image contains a discrete free pair (Schottky certificate)".into(),
        };
    }
    StructureReport {
        ker_mu_free: true,
        free_by_amenable: TriBool::Unknown,
        note: "no solvability certificate and no free pair found".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::{builtin, GeomEdge, Graph};
    use crate::ratlin::IMat;

    fn fixture(
        n: usize,
        vertices: &[&str],
        edges: &[(&str, &str, &str)],
        sigmas: &[IMat],
    ) -> GBSData {
        let graph = Graph {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            geom_edges: edges
                .iter()
                .map(|(id, from, to)| GeomEdge {
                    id: id.to_string(),
                    from: vertices.iter().position(|v| v == from).unwrap(),
                    to: vertices.iter().position(|v| v == to).unwrap(),
                })
                .collect(),
        };
        GBSData::assemble(n, graph, sigmas.to_vec(), None, None, None).unwrap()
    }

    #[test]
    fn amenable_ascending_hnn() {
        for nn in [2i64, 3, 4] {
            let g = builtin("bs", &[1, nn]).unwrap();
            assert_eq!(
                decide_amenable(&g, DEFAULT_DEPTH),
                AmenabilityVerdict::Amenable(AmenableReason::AscendingHNN)
            );
        }
    }

    #[test]
    fn amenable_single_vertex_after_collapse() {
        let g = builtin("tree-amalgam", &[1, 0, 0, 1]).unwrap();
        assert_eq!(
            decide_amenable(&g, DEFAULT_DEPTH),
            AmenabilityVerdict::Amenable(AmenableReason::SingleVertexNoEdges)
        );
    }

    #[test]
    fn amenable_index_two_amalgam() {
        let g = fixture(
            1,
            &["u", "v"],
            &[("e", "u", "v")],
            &[IMat::from_i64(&[&[2]]), IMat::from_i64(&[&[2]])],
        );
        assert_eq!(
            decide_amenable(&g, DEFAULT_DEPTH),
            AmenabilityVerdict::Amenable(AmenableReason::IndexTwoAmalgam)
        );
    }

    #[test]
    fn nonamenable_with_replayable_certificate() {
        for (name, params) in [("bs", vec![2i64, 3]), ("z2-f2", vec![])] {
            let g = builtin(name, &params).unwrap();
            match decide_amenable(&g, DEFAULT_DEPTH) {
                AmenabilityVerdict::NonAmenable(cert) => {
                    let ctx = TreeCtx::new(&g);
                    assert!(ctx.verify_ping_pong(&cert.a, &cert.b).unwrap());
                }
                other => panic!("expected NonAmenable, got {:?}", other),
            }
        }
    }

    #[test]
    fn closure_automatic_cases() {
        let bs23 = builtin("bs", &[2, 3]).unwrap();
        let md = compute_modular(&bs23);
        assert_eq!(
            closure_amenability(&md, &bs23, DEFAULT_DEPTH),
            ClosureVerdict::Amenable(ClosureCase::DOne)
        );
        let heis = builtin("heisenberg", &[]).unwrap();
        let md = compute_modular(&heis);
        assert_eq!(
            closure_amenability(&md, &heis, DEFAULT_DEPTH),
            ClosureVerdict::Amenable(ClosureCase::DOne)
        );
        // d = 0: a single tree edge, no stable letters.
        let amalgam = builtin("tree-amalgam", &[2, 0, 0, 3]).unwrap();
        let md = compute_modular(&amalgam);
        assert_eq!(
            closure_amenability(&md, &amalgam, DEFAULT_DEPTH),
            ClosureVerdict::Amenable(ClosureCase::DZero)
        );
    }

    #[test]
    fn closure_schottky_for_z2_f2() {
        let g = builtin("z2-f2", &[]).unwrap();
        let md = compute_modular(&g);
        match closure_amenability(&md, &g, DEFAULT_DEPTH) {
            ClosureVerdict::NonAmenable(cert) => {
                assert!(verify_schottky(&cert));
                assert!(cert.contraction >= Int::one());
            }
            other => panic!("expected NonAmenable, got {:?}", other),
        }
    }

    /// Two loops at one vertex with upper-triangular non-commuting modular
    /// images: no invariant form, but a common rational flag.
    #[test]
    fn closure_triangularizable() {
        let id = IMat::identity(2);
        let g = fixture(
            2,
            &["v"],
            &[("e0", "v", "v"), ("e1", "v", "v")],
            &[
                id.clone(),
                IMat::from_i64(&[&[2, 0], &[0, 1]]),
                id.clone(),
                IMat::from_i64(&[&[1, 1], &[0, 1]]),
            ],
        );
        let md = compute_modular(&g);
        assert_eq!(
            closure_amenability(&md, &g, DEFAULT_DEPTH),
            ClosureVerdict::Amenable(ClosureCase::Triangularizable)
        );
    }

    /// Two loops with finite-order modular images (a rotation and -I):
    /// compact closure via an invariant positive-definite form.
    #[test]
    fn closure_invariant_form() {
        let id = IMat::identity(2);
        let g = fixture(
            2,
            &["v"],
            &[("e0", "v", "v"), ("e1", "v", "v")],
            &[
                id.clone(),
                IMat::from_i64(&[&[0, -1], &[1, 0]]),
                id.clone(),
                IMat::from_i64(&[&[-1, 0], &[0, -1]]),
            ],
        );
        let md = compute_modular(&g);
        assert_eq!(
            closure_amenability(&md, &g, DEFAULT_DEPTH),
            ClosureVerdict::Amenable(ClosureCase::InvariantForm)
        );
    }

    #[test]
    fn haagerup_table() {
        let yes = haagerup_report(&builtin("bs", &[2, 3]).unwrap());
        assert_eq!(yes.haagerup, TriBool::Yes);
        assert_eq!(yes.weakly_amenable, TriBool::Yes);
        assert_eq!(yes.lambda, Some(Rat::one()));

        let heis = haagerup_report(&builtin("heisenberg", &[]).unwrap());
        assert_eq!(heis.haagerup, TriBool::Yes);

        let no = haagerup_report(&builtin("z2-f2", &[]).unwrap());
        assert_eq!(no.haagerup, TriBool::No);
        assert_eq!(no.weakly_amenable, TriBool::No);
        assert_eq!(no.lambda, None);
    }

    #[test]
    fn distortion_bs12_and_heisenberg() {
        let g = builtin("bs", &[1, 2]).unwrap();
        let md = compute_modular(&g);
        let r = distortion_report(&md, &g);
        assert!(r.certified);
        assert_eq!(r.exp_distorted, TriBool::Yes);
        assert!(r.distal_dual_part.is_empty());

        let g = builtin("heisenberg", &[]).unwrap();
        let md = compute_modular(&g);
        let r = distortion_report(&md, &g);
        assert!(r.certified);
        assert_eq!(r.exp_distorted, TriBool::No);
        assert_eq!(r.distal_dual_part.len(), 2);
    }

    #[test]
    fn distortion_partial_distal_part() {
        // Single loop with modular image diag(2, 1): one root on the circle.
        let g = fixture(
            2,
            &["v"],
            &[("e", "v", "v")],
            &[IMat::identity(2), IMat::from_i64(&[&[2, 0], &[0, 1]])],
        );
        let md = compute_modular(&g);
        let r = distortion_report(&md, &g);
        assert!(r.certified);
        assert_eq!(r.exp_distorted, TriBool::Unknown);
        assert_eq!(r.distal_dual_part.len(), 1);
    }

    #[test]
    fn distortion_inverse_invariance_d1() {
        // Replacing the loop matrix by its inverse-defining flip keeps the
        // distal dimension (characteristic moduli invert on the circle).
        let g = fixture(
            2,
            &["v"],
            &[("e", "v", "v")],
            &[IMat::from_i64(&[&[2, 0], &[0, 1]]), IMat::identity(2)],
        );
        let md = compute_modular(&g);
        let r = distortion_report(&md, &g);
        assert_eq!(r.distal_dual_part.len(), 1);
        assert_eq!(r.exp_distorted, TriBool::Unknown);
    }

    #[test]
    fn distortion_d2_heuristic() {
        let g = builtin("z2-f2", &[]).unwrap();
        let md = compute_modular(&g);
        let r = distortion_report(&md, &g);
        // The generators are unipotent, but short products are hyperbolic
        // with no modulus-1 roots, so the intersection is trivial and the
        // zero distal part is certified.
        assert_eq!(r.exp_distorted, TriBool::Yes);
        assert!(r.certified);
        assert!(r.distal_dual_part.is_empty());
    }

    #[test]
    fn distortion_d2_trivial_action_full_dual() {
        // Two loops both inducing the identity: trivial modular action.
        let id = IMat::identity(2);
        let g = fixture(
            2,
            &["v"],
            &[("e0", "v", "v"), ("e1", "v", "v")],
            &[id.clone(), id.clone(), id.clone(), id.clone()],
        );
        let md = compute_modular(&g);
        let r = distortion_report(&md, &g);
        assert!(r.certified);
        assert_eq!(r.exp_distorted, TriBool::No);
        assert_eq!(r.distal_dual_part.len(), 2);
    }

    #[test]
    fn compression_values() {
        let half = Rat::new(Int::one(), Int::from(2));
        let r = compression_report(&builtin("bs", &[2, 3]).unwrap(), DEFAULT_DEPTH);
        assert!(r.applicable);
        assert_eq!(r.alpha_p, Some(AlphaValue::One));
        let sharp = r.alpha_p_sharp.unwrap();
        assert_eq!(sharp.eval(&Rat::one()), Some(Rat::one()));
        assert_eq!(sharp.eval(&Rat::from_integer(2.into())), Some(half.clone()));
        assert_eq!(sharp.eval(&Rat::from_integer(4.into())), Some(half));

        let r = compression_report(&builtin("bs", &[1, 2]).unwrap(), DEFAULT_DEPTH);
        assert_eq!(r.alpha_p_sharp, Some(AlphaValue::One));

        let r = compression_report(&builtin("z2-f2", &[]).unwrap(), DEFAULT_DEPTH);
        assert!(!r.applicable);
    }

    #[test]
    fn structure_summary() {
        let g = builtin("bs", &[2, 3]).unwrap();
        let md = compute_modular(&g);
        let r = structure_report(&md, &g, DEFAULT_DEPTH);
        assert!(r.ker_mu_free);
        assert_eq!(r.free_by_amenable, TriBool::Yes);

        let g = builtin("z2-f2", &[]).unwrap();
        let md = compute_modular(&g);
        let r = structure_report(&md, &g, DEFAULT_DEPTH);
        assert_eq!(r.free_by_amenable, TriBool::No);
    }

    #[test]
    fn rational_roots_basic() {
        let p = QPoly::from_i64(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let roots = rational_roots(&p);
        let expect: Vec<Rat> = [1i64, 2, 3]
            .iter()
            .map(|&k| Rat::from_integer(k.into()))
            .collect();
        assert_eq!(roots, expect);
        let q = QPoly::from_i64(&[1, 0, 1]); // x^2 + 1: no rational roots
        assert!(rational_roots(&q).is_empty());
    }

    #[test]
    fn positive_definite_exact() {
        let q = QMat::from_rows(
            IMat::from_i64(&[&[2, 1], &[1, 2]]).to_qmat().rows(),
        );
        assert!(is_positive_definite(&q));
        let q = QMat::from_rows(
            IMat::from_i64(&[&[1, 2], &[2, 1]]).to_qmat().rows(),
        );
        assert!(!is_positive_definite(&q));
    }
}

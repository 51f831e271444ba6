//! The modular homomorphism `mu: G -> R^n x| GL_n(Q)`, computed exactly.
//! Vertex generators map to translations by `tau_v * z`; the stable letter of
//! a non-tree edge `e` in the orientation set maps to the linear map
//! `tau(e-) sigma(bar e) sigma(e)^(-1) tau(e+)^(-1)`.

use crate::error::{Error, Result};
use crate::gog::{GBSData, OEdge};
use crate::ratlin::QMat;
use crate::words::{Letter, Word};
use crate::Rat;
use num_traits::Zero;
use std::collections::VecDeque;

/// An affine map `x -> A x + b` with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: QMat,
    pub translation: Vec<Rat>,
}

impl AffineMap {
    pub fn identity(n: usize) -> AffineMap {
        AffineMap {
            linear: QMat::identity(n),
            translation: vec![Rat::zero(); n],
        }
    }

    pub fn translation_only(b: Vec<Rat>) -> AffineMap {
        AffineMap {
            linear: QMat::identity(b.len()),
            translation: b,
        }
    }

    pub fn linear_only(a: QMat) -> AffineMap {
        let n = a.n;
        AffineMap {
            linear: a,
            translation: vec![Rat::zero(); n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.iter().all(|c| c.is_zero())
    }

    /// `(b1, A1) o (b2, A2) = (b1 + A1 b2, A1 A2)`.
    pub fn compose(&self, rhs: &AffineMap) -> AffineMap {
        let moved = self.linear.apply(&rhs.translation);
        AffineMap {
            linear: self.linear.mul(&rhs.linear),
            translation: self
                .translation
                .iter()
                .zip(moved)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.inverse().expect("affine maps are invertible");
        let b = inv.apply(&self.translation);
        AffineMap {
            linear: inv,
            translation: b.into_iter().map(|c| -c).collect(),
        }
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.linear
            .apply(x)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }
}

/// The per-vertex comparison matrices `tau_v` and the stable-letter images.
#[derive(Debug, Clone)]
pub struct ModularData {
    /// `tau[v]`, indexed by vertex; `tau[base] = I`.
    pub tau: Vec<QMat>,
    /// `mu(t_e)` for each stable edge, indexed by `OEdge.0`.
    mu_stable: Vec<Option<QMat>>,
}

impl ModularData {
    pub fn mu_stable(&self, e: OEdge) -> &QMat {
        self.mu_stable[e.0]
            .as_ref()
            .expect("stable-letter image queried for a non-stable edge")
    }
}

/// Position of tree edge `e` (in the orientation set A, inside T) relative to
/// the tree path from the base to `v`: 0 when off the path, +1 when the path
/// traverses `e` in its A-orientation (pointing away from the base), -1 when
/// against it.
pub fn epsilon(g: &GBSData, v: usize, e: OEdge) -> i8 {
    assert!(g.is_tree_edge(e) && g.orientation[e.geom()] == e);
    for p in tree_path(g, v) {
        if p.geom() == e.geom() {
            return if p == e { 1 } else { -1 };
        }
    }
    0
}

/// Oriented tree edges from the base to `v`, each traversed origin -> terminus.
pub fn tree_path(g: &GBSData, v: usize) -> Vec<OEdge> {
    let parents = tree_parents(g);
    let mut path = Vec::new();
    let mut cur = v;
    while cur != g.base {
        let p = parents[cur].expect("spanning tree reaches every vertex");
        path.push(p);
        cur = g.graph.origin(p);
    }
    path.reverse();
    path
}

/// `parents[v]`: the tree edge whose terminus is `v`, traversed from the
/// parent side, for every `v != base`.
fn tree_parents(g: &GBSData) -> Vec<Option<OEdge>> {
    let nv = g.graph.vertices.len();
    let mut parents: Vec<Option<OEdge>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[g.base] = true;
    let mut queue = VecDeque::from([g.base]);
    while let Some(v) = queue.pop_front() {
        for e in g.graph.star(v) {
            if !g.is_tree_edge(e) {
                continue;
            }
            let w = g.graph.terminus(e);
            if !seen[w] {
                seen[w] = true;
                parents[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    parents
}

/// Accumulate `tau_v` along tree paths (factor nearest the base leftmost) and
/// the stable-letter images `mu(t_e) = tau(e-) sigma(bar e) sigma(e)^(-1) tau(e+)^(-1)`.
pub fn compute_modular(g: &GBSData) -> ModularData {
    let nv = g.graph.vertices.len();
    let mut tau: Vec<Option<QMat>> = vec![None; nv];
    tau[g.base] = Some(QMat::identity(g.n));
    let parents = tree_parents(g);
    // Process vertices in BFS order so the parent's tau is always ready.
    let mut order = VecDeque::from([g.base]);
    let mut seen = vec![false; nv];
    seen[g.base] = true;
    while let Some(v) = order.pop_front() {
        for e in g.graph.star(v) {
            if !g.is_tree_edge(e) {
                continue;
            }
            let w = g.graph.terminus(e);
            if seen[w] {
                continue;
            }
            seen[w] = true;
            let p = parents[w].expect("tree parent");
            let a = g.orientation[p.geom()];
            let step = if a == p {
                // Path agrees with the A-orientation: factor (sigma_bar sigma^-1).
                g.sigma(a.bar())
                    .to_qmat()
                    .mul(&g.sigma(a).to_qmat().inverse().expect("nonsingular"))
            } else {
                // Path runs against it: inverse factor.
                g.sigma(a)
                    .to_qmat()
                    .mul(&g.sigma(a.bar()).to_qmat().inverse().expect("nonsingular"))
            };
            let parent_v = g.graph.origin(p);
            tau[w] = Some(tau[parent_v].as_ref().unwrap().mul(&step));
            order.push_back(w);
        }
    }
    let tau: Vec<QMat> = tau.into_iter().map(|t| t.expect("connected")).collect();
    let mut mu_stable: Vec<Option<QMat>> = vec![None; 2 * g.graph.geom_edges.len()];
    for e in g.stable_edges() {
        let lo = g.graph.origin(e);
        let hi = g.graph.terminus(e);
        let m = tau[lo]
            .mul(&g.sigma(e.bar()).to_qmat())
            .mul(&g.sigma(e).to_qmat().inverse().expect("nonsingular"))
            .mul(&tau[hi].inverse().expect("tau nonsingular"));
        mu_stable[e.0] = Some(m);
    }
    ModularData { tau, mu_stable }
}

/// Evaluate `mu` on a word, composing letter images left to right.
pub fn mu_eval(md: &ModularData, g: &GBSData, w: &Word) -> Result<AffineMap> {
    w.check(g)?;
    let mut acc = AffineMap::identity(g.n);
    for letter in &w.letters {
        let img = match letter {
            Letter::VertexGen { v, z } => {
                let zq: Vec<Rat> = z.0.iter().map(|c| Rat::from_integer(c.clone())).collect();
                AffineMap::translation_only(md.tau[*v].apply(&zq))
            }
            Letter::Stable { e, exp } => {
                let m = md.mu_stable(*e);
                if *exp > 0 {
                    AffineMap::linear_only(m.clone())
                } else {
                    AffineMap::linear_only(m.clone()).inverse()
                }
            }
        };
        acc = acc.compose(&img);
    }
    Ok(acc)
}

impl Word {
    /// Well-formedness of a word against a particular graph of groups.
    pub fn check(&self, g: &GBSData) -> Result<()> {
        for letter in &self.letters {
            match letter {
                Letter::VertexGen { v, z } => {
                    if *v >= g.graph.vertices.len() || z.dim() != g.n {
                        return Err(Error::MalformedWord(
                            "vertex generator out of range or wrong dimension".into(),
                        ));
                    }
                }
                Letter::Stable { e, exp } => {
                    if e.geom() >= g.graph.geom_edges.len()
                        || g.is_tree_edge(*e)
                        || g.orientation[e.geom()] != *e
                        || (*exp != 1 && *exp != -1)
                    {
                        return Err(Error::MalformedWord(
                            "stable letter must name an oriented non-tree edge with exponent +-1"
                                .into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

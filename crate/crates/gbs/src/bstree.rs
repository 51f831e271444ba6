//! Local exploration of the Bass-Serre tree and the G-action on it.
//!
//! A tree vertex is the coset address `z1 t_{f1}^{-1} z2 t_{f2}^{-1} ... G_v`:
//! a reduced sequence of moves (oriented edge `f` with `f+` equal to the
//! current vertex type, canonical representative `z` modulo `sigma_f(Z^n)`).
//! Address equality decides vertex equality exactly; appending a move is O(1),
//! which keeps ball exploration and the action incremental.

use crate::error::{Error, Result};
use crate::gog::{GBSData, OEdge};
use crate::ratlin::ZVec;
use crate::words::{to_path_word, PathWord, Tables, Word};
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Canonical coset address of a tree vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    /// Moves from the base coset; entry `(f, z)` crosses from type `f+` to
    /// type `f-` through the coset of `z` (canonical modulo `sigma_f`).
    pub addr: Vec<(OEdge, ZVec)>,
    /// Vertex type: the graph vertex whose conjugate stabilizes this vertex.
    pub vtype: usize,
}

impl TreeVertex {
    pub fn depth(&self) -> usize {
        self.addr.len()
    }
}

/// Elliptic-or-hyperbolic classification of one element acting on the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementDynamics {
    Elliptic {
        fixed: TreeVertex,
    },
    Hyperbolic {
        translation_length: usize,
        /// A path of `2 * translation_length + 1` consecutive axis vertices.
        axis_segment: Vec<TreeVertex>,
    },
}

/// An explored ball of the tree.
#[derive(Debug, Clone)]
pub struct TreeBall {
    pub center: TreeVertex,
    pub radius: usize,
    pub vertices: Vec<TreeVertex>,
    /// Index pairs into `vertices`, parent side first.
    pub edges: Vec<(usize, usize)>,
    pub depth: Vec<usize>,
}

impl TreeBall {
    pub fn sphere_size(&self, r: usize) -> usize {
        self.depth.iter().filter(|&&d| d == r).count()
    }
}

/// Shared context: the graph of groups plus per-edge coset transversals.
pub struct TreeCtx<'a> {
    pub g: &'a GBSData,
    tables: Tables,
}

impl<'a> TreeCtx<'a> {
    pub fn new(g: &'a GBSData) -> TreeCtx<'a> {
        TreeCtx {
            g,
            tables: Tables::new(g),
        }
    }

    pub fn base(&self) -> TreeVertex {
        TreeVertex {
            addr: vec![],
            vtype: self.g.base,
        }
    }

    /// All neighbors, in deterministic order: oriented edges `f` with
    /// `f+ = type(x)` in index order, coset representatives in transversal
    /// order. Exactly `sum |det sigma_f|` many, pairwise distinct.
    pub fn neighbors(&self, x: &TreeVertex) -> Vec<TreeVertex> {
        let mut out = Vec::new();
        for f in self.g.graph.oriented_edges() {
            if self.g.graph.terminus(f) != x.vtype {
                continue;
            }
            for z in self.tables.table(f).reps() {
                out.push(self.step(x, f, z));
            }
        }
        out
    }

    /// Extend `x` by the move `(f, z)` (with `f+ = type(x)`, `z` canonical),
    /// folding the backtrack case onto the parent address.
    fn step(&self, x: &TreeVertex, f: OEdge, z: ZVec) -> TreeVertex {
        debug_assert_eq!(self.g.graph.terminus(f), x.vtype);
        if z.is_zero() {
            if let Some((top, _)) = x.addr.last() {
                if *top == f.bar() {
                    let mut addr = x.addr.clone();
                    addr.pop();
                    return TreeVertex {
                        addr,
                        vtype: self.g.graph.origin(f),
                    };
                }
            }
        }
        let mut addr = x.addr.clone();
        addr.push((f, z));
        TreeVertex {
            addr,
            vtype: self.g.graph.origin(f),
        }
    }

    /// Left action of a group element (as a closed path word at the base) on
    /// a vertex: a single left-to-right stack-machine pass.
    pub fn act_path(&self, p: &PathWord, x: &TreeVertex) -> TreeVertex {
        debug_assert_eq!(p.start, self.g.base);
        let mut addr: Vec<(OEdge, ZVec)> = Vec::new();
        let mut pending = p.g0.clone();
        let mut cur = p.start;
        let feed_edge = |addr: &mut Vec<(OEdge, ZVec)>, pending: &mut ZVec, cur: &mut usize, p_edge: OEdge| {
            debug_assert_eq!(self.g.graph.origin(p_edge), *cur);
            // pending = r + sigma_{bar p}(a); pending * t_p = r * t_p * sigma_p(a)
            let r = self.tables.table(p_edge.bar()).reduce(pending);
            let diff = &*pending - &r;
            let a = self
                .tables
                .pullback(p_edge.bar(), &diff)
                .expect("difference is in the lattice");
            let carried = self.g.sigma(p_edge).apply(&a);
            if r.is_zero() {
                if let Some((top, ztop)) = addr.last() {
                    if *top == p_edge {
                        *pending = ztop + &carried;
                        addr.pop();
                        *cur = self.g.graph.terminus(p_edge);
                        return;
                    }
                }
            }
            addr.push((p_edge.bar(), r));
            *pending = carried;
            *cur = self.g.graph.terminus(p_edge);
        };
        for (e, gv) in &p.steps {
            feed_edge(&mut addr, &mut pending, &mut cur, *e);
            pending = &pending + gv;
        }
        // Now feed the address of x: entry (f, z) contributes z * t_f^{-1},
        // i.e. the vector z followed by the traversal of bar(f).
        for (f, z) in &x.addr {
            pending = &pending + z;
            feed_edge(&mut addr, &mut pending, &mut cur, f.bar());
        }
        debug_assert_eq!(cur, x.vtype);
        TreeVertex { addr, vtype: cur }
    }

    pub fn act(&self, w: &Word, x: &TreeVertex) -> Result<TreeVertex> {
        let p = to_path_word(self.g, w)?;
        Ok(self.act_path(&p, x))
    }

    /// Exact tree distance via the longest common address prefix.
    pub fn distance(x: &TreeVertex, y: &TreeVertex) -> usize {
        let c = x
            .addr
            .iter()
            .zip(y.addr.iter())
            .take_while(|(a, b)| a == b)
            .count();
        (x.addr.len() - c) + (y.addr.len() - c)
    }

    /// The geodesic vertex sequence from `x` to `y` inclusive.
    pub fn geodesic(&self, x: &TreeVertex, y: &TreeVertex) -> Vec<TreeVertex> {
        let c = x
            .addr
            .iter()
            .zip(y.addr.iter())
            .take_while(|(a, b)| a == b)
            .count();
        let mut out = vec![x.clone()];
        let mut cur = x.clone();
        while cur.addr.len() > c {
            let (f, _) = cur.addr.pop().unwrap();
            cur.vtype = self.g.graph.terminus(f);
            out.push(cur.clone());
        }
        for i in c..y.addr.len() {
            cur.addr.push(y.addr[i].clone());
            cur.vtype = self.g.graph.origin(y.addr[i].0);
            out.push(cur.clone());
        }
        debug_assert_eq!(out.last().unwrap(), y);
        out
    }

    /// BFS ball of the given radius around `center`.
    pub fn ball(&self, center: &TreeVertex, radius: usize, cap: usize) -> Result<TreeBall> {
        let mut vertices = vec![center.clone()];
        let mut index: HashMap<TreeVertex, usize> = HashMap::from([(center.clone(), 0)]);
        let mut depth = vec![0usize];
        let mut edges = Vec::new();
        let mut head = 0;
        while head < vertices.len() {
            let v = vertices[head].clone();
            let d = depth[head];
            if d == radius {
                head += 1;
                continue;
            }
            for nb in self.neighbors(&v) {
                match index.get(&nb) {
                    Some(&j) => {
                        if j > head && depth[j] == d + 1 {
                            // edge already recorded from the parent side
                        }
                    }
                    None => {
                        if vertices.len() >= cap {
                            return Err(Error::ResourceLimit(format!(
                                "tree ball exceeded the {cap}-vertex cap"
                            )));
                        }
                        index.insert(nb.clone(), vertices.len());
                        edges.push((head, vertices.len()));
                        vertices.push(nb);
                        depth.push(d + 1);
                    }
                }
            }
            head += 1;
        }
        Ok(TreeBall {
            center: center.clone(),
            radius,
            vertices,
            edges,
            depth,
        })
    }

    /// Displacement-minimizing classification within the radius-`radius` ball
    /// around the base. Certified when the explored minimum provably equals
    /// the global one (`min > delta(base) - 2 radius`).
    pub fn dynamics(&self, w: &Word, radius: usize) -> Result<ElementDynamics> {
        let p = to_path_word(self.g, w)?;
        let delta_base = TreeVertex::depth(&self.act_path(&p, &self.base()));
        let ball = self.ball(&self.base(), radius, 2_000_000)?;
        let mut best: Option<(usize, TreeVertex)> = None;
        for x in &ball.vertices {
            let d = Self::distance(x, &self.act_path(&p, x));
            if best.as_ref().map_or(true, |(b, _)| d < *b) {
                best = Some((d, x.clone()));
            }
            if d == 0 {
                break;
            }
        }
        let (m, x0) = best.expect("ball is nonempty");
        if (m as isize) <= delta_base as isize - 2 * radius as isize {
            return Err(Error::RadiusTooSmall(radius));
        }
        if m == 0 {
            return Ok(ElementDynamics::Elliptic { fixed: x0 });
        }
        // x0 realizes the minimum, hence lies on the axis; [x0, w x0] and its
        // w-translate give 2m+1 consecutive axis vertices.
        let w_x0 = self.act_path(&p, &x0);
        let mut seg = self.geodesic(&x0, &w_x0);
        let second: Vec<TreeVertex> = seg.iter().map(|v| self.act_path(&p, v)).collect();
        debug_assert_eq!(second.first(), seg.last());
        seg.extend(second.into_iter().skip(1));
        Ok(ElementDynamics::Hyperbolic {
            translation_length: m,
            axis_segment: seg,
        })
    }

    /// A radius that always certifies `dynamics` for this word.
    pub fn auto_radius(&self, w: &Word) -> Result<usize> {
        let p = to_path_word(self.g, w)?;
        let delta = TreeVertex::depth(&self.act_path(&p, &self.base()));
        Ok(delta / 2 + 1)
    }

    /// Search for two hyperbolic elements whose axes provably have distinct
    /// endpoint pairs on the boundary: their explored axis segments overlap
    /// in a finite subpath, interior to both explored windows, shorter than
    /// both translation lengths. Such a pair generates a free subgroup.
    pub fn ping_pong_search(&self, depth: usize, _radius: usize) -> Result<Option<(Word, Word)>> {
        // Iterative deepening: certified pairs, when they exist, tend to show
        // up at very small depth, so avoid enumerating the big final ball.
        let gens = crate::words::standard_generators(self.g);
        for d in 1..=depth {
            let candidates = crate::words::ball_with(self.g, d, &gens, 50_000)?;
            let mut hyperbolics: Vec<(Word, usize, Vec<TreeVertex>)> = Vec::new();
            for el in &candidates {
                if el.nf.is_identity() {
                    continue;
                }
                let r = self.auto_radius(&el.word)?;
                match self.dynamics(&el.word, r)? {
                    ElementDynamics::Elliptic { .. } => {}
                    ElementDynamics::Hyperbolic {
                        translation_length,
                        axis_segment,
                    } => {
                        let ext =
                            self.extended_axis(&el.word, &axis_segment, translation_length)?;
                        hyperbolics.push((el.word.clone(), translation_length, ext));
                        if hyperbolics.len() >= 25 {
                            break;
                        }
                    }
                }
            }
            for i in 0..hyperbolics.len() {
                for j in (i + 1)..hyperbolics.len() {
                    let (wa, la, pa) = &hyperbolics[i];
                    let (wb, lb, pb) = &hyperbolics[j];
                    if overlap_certificate(pa, pb, (*la).min(*lb)) {
                        return Ok(Some((wa.clone(), wb.clone())));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Replay the ping-pong certificate for a concrete pair of words.
    pub fn verify_ping_pong(&self, wa: &Word, wb: &Word) -> Result<bool> {
        let mut data = Vec::new();
        for w in [wa, wb] {
            let r = self.auto_radius(w)?;
            match self.dynamics(w, r)? {
                ElementDynamics::Hyperbolic {
                    translation_length,
                    axis_segment,
                } => {
                    data.push((
                        translation_length,
                        self.extended_axis(w, &axis_segment, translation_length)?,
                    ));
                }
                ElementDynamics::Elliptic { .. } => return Ok(false),
            }
        }
        Ok(overlap_certificate(
            &data[0].1,
            &data[1].1,
            data[0].0.min(data[1].0),
        ))
    }

    /// Extend an axis segment to `w^k`-translates for k in [-2, 2], yielding
    /// one long ordered axis path.
    fn extended_axis(
        &self,
        w: &Word,
        segment: &[TreeVertex],
        ell: usize,
    ) -> Result<Vec<TreeVertex>> {
        // segment already covers [x0, w^2 x0]; prepend the w^{-1} and w^{-2}
        // translates of its first period.
        let winv = to_path_word(self.g, &w.inverse())?;
        let first_period: Vec<TreeVertex> = segment[..=ell].to_vec();
        let mut out: Vec<TreeVertex> = Vec::new();
        for k in [2usize, 1] {
            let mut piece = first_period.clone();
            for _ in 0..k {
                piece = piece.iter().map(|v| self.act_path(&winv, v)).collect();
            }
            out.extend(piece.into_iter().take(ell));
        }
        out.extend(segment.iter().cloned());
        Ok(out)
    }
}

/// Check that the intersection of two explored axis paths is a contiguous
/// subpath, strictly interior to both windows, with fewer than `min_ell`
/// edges. When it holds, the two (bi-infinite, geodesic) axes intersect in
/// exactly that finite subpath, so their boundary endpoint pairs are
/// disjoint.
fn overlap_certificate(pa: &[TreeVertex], pb: &[TreeVertex], min_ell: usize) -> bool {
    use std::collections::HashSet;
    let sb: HashSet<&TreeVertex> = pb.iter().collect();
    let hits: Vec<usize> = (0..pa.len()).filter(|&i| sb.contains(&pa[i])).collect();
    if hits.is_empty() {
        // Disjoint axes certainly have distinct endpoint pairs.
        return true;
    }
    // Contiguity in pa.
    for w in hits.windows(2) {
        if w[1] != w[0] + 1 {
            return false;
        }
    }
    let (lo_a, hi_a) = (hits[0], *hits.last().unwrap());
    if lo_a == 0 || hi_a == pa.len() - 1 {
        return false; // overlap touches the explored window: not certified
    }
    let sa: HashSet<&TreeVertex> = pa.iter().collect();
    let hits_b: Vec<usize> = (0..pb.len()).filter(|&i| sa.contains(&pb[i])).collect();
    for w in hits_b.windows(2) {
        if w[1] != w[0] + 1 {
            return false;
        }
    }
    let (lo_b, hi_b) = (hits_b[0], *hits_b.last().unwrap());
    if lo_b == 0 || hi_b == pb.len() - 1 {
        return false;
    }
    if hits.len() != hits_b.len() {
        return false;
    }
    let overlap_edges = hits.len() - 1;
    overlap_edges < min_ell
}

/// Expected degree of an interior vertex of type `v`.
pub fn expected_degree(g: &GBSData, v: usize) -> usize {
    let mut total = 0usize;
    for f in g.graph.oriented_edges() {
        if g.graph.terminus(f) == v {
            let d = g.sigma(f).det();
            total += d.magnitude().to_usize().expect("small determinant");
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::builtin;
    use crate::words::parse_word;

    fn w(g: &GBSData, s: &str) -> Word {
        parse_word(g, s).unwrap()
    }

    #[test]
    fn base_degrees() {
        let bs23 = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&bs23);
        assert_eq!(ctx.neighbors(&ctx.base()).len(), 5);

        // Amalgam over diag(2,3): the base (non-identity) side sees the
        // |det| = 6 cosets; the identity side is a leaf.
        let ta = builtin("tree-amalgam", &[2, 0, 0, 3]).unwrap();
        let ctx = TreeCtx::new(&ta);
        assert_eq!(ctx.neighbors(&ctx.base()).len(), 6);
        let leaf = TreeVertex {
            addr: vec![],
            vtype: 1,
        };
        assert_eq!(ctx.neighbors(&leaf).len(), 1);

        let h = builtin("heisenberg", &[]).unwrap();
        let ctx = TreeCtx::new(&h);
        assert_eq!(ctx.neighbors(&ctx.base()).len(), 2);
    }

    #[test]
    fn neighbors_are_distinct_and_match_formula() {
        for g in [
            builtin("bs", &[2, 3]).unwrap(),
            builtin("z2-f2", &[]).unwrap(),
            builtin("tree-amalgam", &[1, 1, 0, 2]).unwrap(),
        ] {
            let ctx = TreeCtx::new(&g);
            let ball = ctx.ball(&ctx.base(), 2, 100_000).unwrap();
            for (i, x) in ball.vertices.iter().enumerate() {
                if ball.depth[i] >= 2 {
                    continue;
                }
                let nbs = ctx.neighbors(x);
                assert_eq!(nbs.len(), expected_degree(&g, x.vtype));
                let set: std::collections::HashSet<_> = nbs.iter().collect();
                assert_eq!(set.len(), nbs.len());
                for nb in &nbs {
                    assert_eq!(TreeCtx::distance(x, nb), 1);
                }
            }
        }
    }

    #[test]
    fn vertex_gen_fixes_base_and_t_translates() {
        let g = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&g);
        let b = ctx.base();
        assert_eq!(ctx.act(&w(&g, "b1"), &b).unwrap(), b);
        let tb = ctx.act(&w(&g, "t_t"), &b).unwrap();
        assert_eq!(TreeCtx::distance(&b, &tb), 1);
    }

    #[test]
    fn act_is_left_action() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let g = crate::gog::random_gbs(&mut rng);
            let ctx = TreeCtx::new(&g);
            let gens = crate::words::standard_generators(&g);
            let rand_word = |rng: &mut StdRng| -> Word {
                let mut out = Word::empty();
                for _ in 0..rng.gen_range(0..5) {
                    out = out.concat(&gens[rng.gen_range(0..gens.len())]);
                }
                out
            };
            let ball = ctx.ball(&ctx.base(), 2, 5000);
            let ball = match ball {
                Ok(b) => b,
                Err(_) => continue,
            };
            for _ in 0..10 {
                let w1 = rand_word(&mut rng);
                let w2 = rand_word(&mut rng);
                let x = &ball.vertices[rng.gen_range(0..ball.vertices.len())];
                let lhs = ctx.act(&w1.concat(&w2), x).unwrap();
                let rhs = ctx.act(&w1, &ctx.act(&w2, x).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn act_respects_defining_relations() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        use crate::ratlin::ZVec;
        use crate::words::Letter;
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..20 {
            let g = crate::gog::random_gbs(&mut rng);
            let ctx = TreeCtx::new(&g);
            let ball = match ctx.ball(&ctx.base(), 2, 5000) {
                Ok(b) => b,
                Err(_) => continue,
            };
            for geom in 0..g.graph.geom_edges.len() {
                if g.tree[geom] {
                    continue;
                }
                let e = g.orientation[geom];
                let hi = g.graph.terminus(e);
                let lo = g.graph.origin(e);
                let z = ZVec::basis(g.n, rng.gen_range(0..g.n));
                let lhs_w = Word {
                    letters: vec![
                        Letter::Stable { e, exp: 1 },
                        Letter::VertexGen {
                            v: hi,
                            z: g.sigma(e).apply(&z),
                        },
                        Letter::Stable { e, exp: -1 },
                    ],
                };
                let rhs_w = Word {
                    letters: vec![Letter::VertexGen {
                        v: lo,
                        z: g.sigma(e.bar()).apply(&z),
                    }],
                };
                for _ in 0..5 {
                    let x = &ball.vertices[rng.gen_range(0..ball.vertices.len())];
                    assert_eq!(
                        ctx.act(&lhs_w, x).unwrap(),
                        ctx.act(&rhs_w, x).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn act_is_isometric() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let g = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&g);
        let ball = ctx.ball(&ctx.base(), 3, 100_000).unwrap();
        let mut rng = StdRng::seed_from_u64(8);
        let wd = w(&g, "t_t * b1 * t_t^-1 * b1^2");
        for _ in 0..50 {
            let x = &ball.vertices[rng.gen_range(0..ball.vertices.len())];
            let y = &ball.vertices[rng.gen_range(0..ball.vertices.len())];
            assert_eq!(
                TreeCtx::distance(&ctx.act(&wd, x).unwrap(), &ctx.act(&wd, y).unwrap()),
                TreeCtx::distance(x, y)
            );
        }
    }

    #[test]
    fn sphere_growth_bs23() {
        let g = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&g);
        let ball = ctx.ball(&ctx.base(), 4, 500_000).unwrap();
        for r in 1..=4usize {
            assert_eq!(ball.sphere_size(r), 5 * 4usize.pow(r as u32 - 1));
        }
    }

    #[test]
    fn dynamics_classification() {
        let g = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&g);
        match ctx.dynamics(&w(&g, "b1"), 1).unwrap() {
            ElementDynamics::Elliptic { fixed } => assert_eq!(fixed, ctx.base()),
            other => panic!("expected elliptic, got {other:?}"),
        }
        match ctx.dynamics(&w(&g, "t_t"), 2).unwrap() {
            ElementDynamics::Hyperbolic {
                translation_length,
                axis_segment,
            } => {
                assert_eq!(translation_length, 1);
                assert_eq!(axis_segment.len(), 3);
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }
        let g12 = builtin("bs", &[1, 2]).unwrap();
        let ctx12 = TreeCtx::new(&g12);
        assert!(matches!(
            ctx12.dynamics(&w(&g12, "b1"), 1).unwrap(),
            ElementDynamics::Elliptic { .. }
        ));
    }

    #[test]
    fn dynamics_agrees_with_inverse() {
        let g = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&g);
        for s in ["t_t", "b1 * t_t", "t_t * b1 * t_t * b1^-1"] {
            let wd = w(&g, s);
            let r = ctx.auto_radius(&wd).unwrap().max(ctx.auto_radius(&wd.inverse()).unwrap());
            let d1 = ctx.dynamics(&wd, r).unwrap();
            let d2 = ctx.dynamics(&wd.inverse(), r).unwrap();
            match (d1, d2) {
                (
                    ElementDynamics::Hyperbolic {
                        translation_length: l1,
                        ..
                    },
                    ElementDynamics::Hyperbolic {
                        translation_length: l2,
                        ..
                    },
                ) => assert_eq!(l1, l2),
                (ElementDynamics::Elliptic { .. }, ElementDynamics::Elliptic { .. }) => {}
                other => panic!("kind mismatch: {other:?}"),
            }
        }
    }

    #[test]
    fn dynamics_radius_too_small() {
        let g = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&g);
        // t^4 displaces the base by 4; radius 0 cannot certify the minimum.
        assert!(matches!(
            ctx.dynamics(&w(&g, "t_t^4"), 0),
            Err(Error::RadiusTooSmall(0))
        ));
    }

    #[test]
    fn ping_pong_found_for_bs23_and_z2f2() {
        let g = builtin("bs", &[2, 3]).unwrap();
        let ctx = TreeCtx::new(&g);
        let found = ctx.ping_pong_search(6, 8).unwrap();
        assert!(found.is_some(), "bs(2,3) must yield a ping-pong pair");

        let g2 = builtin("z2-f2", &[]).unwrap();
        let ctx2 = TreeCtx::new(&g2);
        assert!(ctx2.ping_pong_search(4, 8).unwrap().is_some());
    }

    #[test]
    fn ping_pong_absent_for_bs12() {
        let g = builtin("bs", &[1, 2]).unwrap();
        let ctx = TreeCtx::new(&g);
        assert!(ctx.ping_pong_search(4, 8).unwrap().is_none());
    }
}

//! Elements of the fundamental group: words over vertex generators and stable
//! letters, the Britton-style reduction on path words, a canonical normal
//! form built from HNF-box coset transversals, the projection to the free
//! group on the stable letters, and word-length ball enumeration.
//!
//! Conventions, fixed once: the stable letter `t_e` (for `e` in the
//! orientation set A, outside T) traverses `e` from `e-` to `e+`, and the
//! defining relation reads `t_f sigma_f(a) t_f^{-1} = sigma_{bar f}(a)` for
//! every oriented edge `f` (with `t_{bar e} = t_e^{-1}` and `t_e = 1` on tree
//! edges). These match the modular images in `modmap`.

use crate::error::{Error, Result};
use crate::gog::{GBSData, OEdge};
use crate::modmap::tree_path;
use crate::ratlin::{CosetTable, QMat, ZVec};
use crate::{Int, Rat};

/// One letter of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Letter {
    /// The lattice element `z` of the vertex group at `v`.
    VertexGen { v: usize, z: ZVec },
    /// `t_e^{exp}` for a stable edge `e` (in A, outside T), `exp` in {+1,-1}.
    Stable { e: OEdge, exp: i8 },
}

/// A free product word; no reduction assumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: vec![] }
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(rhs.letters.iter().cloned());
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::VertexGen { v, z } => Letter::VertexGen { v: *v, z: -z },
                    Letter::Stable { e, exp } => Letter::Stable { e: *e, exp: -exp },
                })
                .collect(),
        }
    }
}

/// `g0 t_{p_1} g_1 ... t_{p_k} g_k`: a path in the graph starting at `start`,
/// each oriented edge `p_i` traversed origin -> terminus, `g_i` in the vertex
/// group at the terminus of `p_i` (and `g0` at `start`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub start: usize,
    pub g0: ZVec,
    pub steps: Vec<(OEdge, ZVec)>,
}

impl PathWord {
    pub fn identity(g: &GBSData) -> PathWord {
        PathWord {
            start: g.base,
            g0: ZVec::zero(g.n),
            steps: vec![],
        }
    }

    pub fn end(&self, g: &GBSData) -> usize {
        self.steps
            .last()
            .map(|(e, _)| g.graph.terminus(*e))
            .unwrap_or(self.start)
    }

    pub fn edge_len(&self) -> usize {
        self.steps.len()
    }

    /// Append a lattice element at the current end vertex.
    fn push_vec(&mut self, z: &ZVec) {
        match self.steps.last_mut() {
            Some((_, g)) => *g = &*g + z,
            None => self.g0 = &self.g0 + z,
        }
    }

    fn push_edge(&mut self, e: OEdge, n: usize) {
        self.steps.push((e, ZVec::zero(n)));
    }

    /// Concatenate; the end of `self` must coincide with the start of `rhs`.
    pub fn concat(&self, g: &GBSData, rhs: &PathWord) -> PathWord {
        assert_eq!(self.end(g), rhs.start);
        let mut out = self.clone();
        out.push_vec(&rhs.g0);
        out.steps.extend(rhs.steps.iter().cloned());
        out
    }

    /// Back to a `Word`: tree edges carry no stable letter, non-tree edges
    /// become the stable letter of their A-representative.
    pub fn to_word(&self, g: &GBSData) -> Word {
        let mut letters = Vec::new();
        fn push_gen(letters: &mut Vec<Letter>, v: usize, z: &ZVec) {
            if !z.is_zero() {
                letters.push(Letter::VertexGen { v, z: z.clone() });
            }
        }
        push_gen(&mut letters, self.start, &self.g0);
        for (p, gv) in &self.steps {
            if !g.is_tree_edge(*p) {
                let a = g.orientation[p.geom()];
                letters.push(Letter::Stable {
                    e: a,
                    exp: if a == *p { 1 } else { -1 },
                });
            }
            push_gen(&mut letters, g.graph.terminus(*p), gv);
        }
        Word { letters }
    }
}

/// A fully reduced, canonically-represented closed path word. Two normal
/// forms are equal exactly when the group elements are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm(pub PathWord);

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.0.g0.is_zero() && self.0.steps.is_empty()
    }
}

/// Freely reduced word over the stable letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    pub letters: Vec<(OEdge, i8)>,
}

/// Cached per-oriented-edge data: the coset transversal of
/// `sigma_e(Z^n) <= Z^n` and the exact inverse of `sigma_e`.
pub(crate) struct Tables {
    coset: Vec<CosetTable>,
    inv: Vec<QMat>,
}

impl Tables {
    pub(crate) fn new(g: &GBSData) -> Tables {
        let mut coset = Vec::new();
        let mut inv = Vec::new();
        for e in g.graph.oriented_edges() {
            let m = g.sigma(e);
            coset.push(CosetTable::new(m).expect("nonsingular sigma"));
            inv.push(m.to_qmat().inverse().expect("nonsingular sigma"));
        }
        Tables { coset, inv }
    }

    pub(crate) fn table(&self, e: OEdge) -> &CosetTable {
        &self.coset[e.0]
    }

    /// Exact preimage under `sigma_e` when it exists in `Z^n`.
    pub(crate) fn pullback(&self, e: OEdge, v: &ZVec) -> Option<ZVec> {
        let vq: Vec<Rat> = v.0.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let sol = self.inv[e.0].apply(&vq);
        let mut out = Vec::with_capacity(sol.len());
        for c in sol {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(ZVec(out))
    }
}

/// Expand a word into an equivalent closed path word at the base vertex,
/// inserting tree connections between letters.
pub fn to_path_word(g: &GBSData, w: &Word) -> Result<PathWord> {
    w.check(g)?;
    let mut p = PathWord::identity(g);
    let mut cur = g.base;
    let walk_to = |p: &mut PathWord, cur: &mut usize, target: usize| {
        for e in tree_route(g, *cur, target) {
            p.push_edge(e, g.n);
        }
        *cur = target;
    };
    for letter in &w.letters {
        match letter {
            Letter::VertexGen { v, z } => {
                walk_to(&mut p, &mut cur, *v);
                p.push_vec(z);
            }
            Letter::Stable { e, exp } => {
                let f = if *exp > 0 { *e } else { e.bar() };
                walk_to(&mut p, &mut cur, g.graph.origin(f));
                p.push_edge(f, g.n);
                cur = g.graph.terminus(f);
            }
        }
    }
    walk_to(&mut p, &mut cur, g.base);
    Ok(p)
}

/// Oriented tree edges from `u` to `v`.
pub(crate) fn tree_route(g: &GBSData, u: usize, v: usize) -> Vec<OEdge> {
    if u == v {
        return vec![];
    }
    let pu = tree_path(g, u);
    let pv = tree_path(g, v);
    let common = pu
        .iter()
        .zip(pv.iter())
        .take_while(|(a, b)| a == b)
        .count();
    let mut route: Vec<OEdge> = pu[common..].iter().rev().map(|e| e.bar()).collect();
    route.extend(pv[common..].iter().copied());
    route
}

/// One full pass of leftmost Britton pinches until none applies.
pub fn reduce(g: &GBSData, p: &PathWord) -> PathWord {
    let tables = Tables::new(g);
    reduce_with(g, &tables, p)
}

fn reduce_with(g: &GBSData, tables: &Tables, p: &PathWord) -> PathWord {
    let mut out = p.clone();
    'outer: loop {
        for i in 0..out.steps.len().saturating_sub(1) {
            let (pi, gi) = out.steps[i].clone();
            let pj = out.steps[i + 1].0;
            if pj != pi.bar() {
                continue;
            }
            if let Some(a) = tables.pullback(pi, &gi) {
                // t_{p_i} sigma_{p_i}(a) t_{bar p_i} = sigma_{bar p_i}(a),
                // merged with the surrounding vectors at the origin of p_i.
                let merged = g.sigma(pi.bar()).apply(&a);
                let tail = out.steps[i + 1].1.clone();
                let add = &merged + &tail;
                out.steps.drain(i..=i + 1);
                if i == 0 {
                    out.g0 = &out.g0 + &add;
                } else {
                    let prev = &mut out.steps[i - 1].1;
                    *prev = &*prev + &add;
                }
                continue 'outer;
            }
        }
        return out;
    }
}

/// Canonicalize the vectors of a reduced path word: sweep right-to-left,
/// replacing each `g_i` (i >= 1) by its canonical coset representative modulo
/// `sigma_{p_i}(Z^n)` and transporting the absorbed part across `t_{p_i}`
/// into `g_{i-1}` via `sigma_{bar p_i}`.
fn canonicalize_with(g: &GBSData, tables: &Tables, p: &PathWord) -> PathWord {
    let mut out = p.clone();
    for i in (0..out.steps.len()).rev() {
        let (pi, gi) = out.steps[i].clone();
        let r = tables.table(pi).reduce(&gi);
        let diff = &gi - &r;
        if diff.is_zero() {
            continue;
        }
        let a = tables
            .pullback(pi, &diff)
            .expect("difference lies in the sigma-lattice by construction");
        let moved = g.sigma(pi.bar()).apply(&a);
        out.steps[i].1 = r;
        if i == 0 {
            out.g0 = &out.g0 + &moved;
        } else {
            let prev = &mut out.steps[i - 1].1;
            *prev = &*prev + &moved;
        }
    }
    out
}

pub(crate) fn normal_form_path(g: &GBSData, tables: &Tables, p: &PathWord) -> NormalForm {
    let mut cur = p.clone();
    loop {
        let reduced = reduce_with(g, tables, &cur);
        let canon = canonicalize_with(g, tables, &reduced);
        // Canonicalization can expose new pinches (a representative hitting
        // zero in front of a returning edge); iterate to the fixpoint.
        let again = reduce_with(g, tables, &canon);
        if again == canon {
            return NormalForm(canon);
        }
        cur = again;
    }
}

/// Canonical normal form of a word; `normal_form(w1) == normal_form(w2)` iff
/// the words represent the same element.
pub fn normal_form(g: &GBSData, w: &Word) -> Result<NormalForm> {
    let p = to_path_word(g, w)?;
    let tables = Tables::new(g);
    Ok(normal_form_path(g, &tables, &p))
}

/// The image in the free group on the stable letters: vertex generators die,
/// stable letters survive, the result is freely reduced.
pub fn phi(g: &GBSData, w: &Word) -> FreeWord {
    let mut letters: Vec<(OEdge, i8)> = Vec::new();
    for l in &w.letters {
        if let Letter::Stable { e, exp } = l {
            debug_assert!(!g.is_tree_edge(*e));
            match letters.last() {
                Some(&(le, lx)) if le == *e && lx == -exp => {
                    letters.pop();
                }
                _ => letters.push((*e, *exp)),
            }
        }
    }
    FreeWord { letters }
}

/// One enumerated group element.
#[derive(Debug, Clone)]
pub struct BallElement {
    pub nf: NormalForm,
    pub length: usize,
    /// A geodesic representative over the generating set.
    pub word: Word,
}

/// Default generating set: `+-` standard basis of every vertex group plus
/// `+-` every stable letter.
pub fn standard_generators(g: &GBSData) -> Vec<Word> {
    let mut gens = Vec::new();
    for v in 0..g.graph.vertices.len() {
        for k in 0..g.n {
            for sign in [1i64, -1] {
                let mut z = ZVec::zero(g.n);
                z.0[k] = Int::from(sign);
                gens.push(Word {
                    letters: vec![Letter::VertexGen { v, z }],
                });
            }
        }
    }
    for e in g.stable_edges() {
        for exp in [1i8, -1] {
            gens.push(Word {
                letters: vec![Letter::Stable { e, exp }],
            });
        }
    }
    gens
}

pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// All elements of word length `<= radius` over `gens`, each exactly once
/// (keyed by normal form) with its exact word length, in deterministic order
/// (by length, then by normal form).
pub fn ball_with(
    g: &GBSData,
    radius: usize,
    gens: &[Word],
    cap: usize,
) -> Result<Vec<BallElement>> {
    use std::collections::HashMap;
    let tables = Tables::new(g);
    let gen_paths: Vec<PathWord> = gens
        .iter()
        .map(|w| to_path_word(g, w))
        .collect::<Result<_>>()?;
    let id = normal_form_path(g, &tables, &PathWord::identity(g));
    let mut seen: HashMap<NormalForm, usize> = HashMap::new();
    seen.insert(id.clone(), 0);
    let mut out = vec![BallElement {
        nf: id.clone(),
        length: 0,
        word: Word::empty(),
    }];
    let mut frontier: Vec<(NormalForm, Word)> = vec![(id, Word::empty())];
    for len in 1..=radius {
        let mut next = Vec::new();
        for (nf, word) in &frontier {
            for (gw, gp) in gens.iter().zip(&gen_paths) {
                let prod = nf.0.concat(g, gp);
                let pnf = normal_form_path(g, &tables, &prod);
                if seen.contains_key(&pnf) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::ResourceLimit(format!(
                        "ball exceeded the {cap}-element cap at radius {len}"
                    )));
                }
                seen.insert(pnf.clone(), len);
                let w = word.concat(gw);
                out.push(BallElement {
                    nf: pnf.clone(),
                    length: len,
                    word: w.clone(),
                });
                next.push((pnf, w));
            }
        }
        frontier = next;
    }
    out.sort_by(|a, b| (a.length, &a.nf).cmp(&(b.length, &b.nf)));
    Ok(out)
}

pub fn ball(g: &GBSData, radius: usize) -> Result<Vec<BallElement>> {
    ball_with(g, radius, &standard_generators(g), DEFAULT_BALL_CAP)
}

// ---------------------------------------------------------------------------
// Word syntax
// ---------------------------------------------------------------------------

/// Parse the CLI word syntax: letters separated by `*`. `bK` is the K-th
/// (1-based) standard generator at the base vertex, `bK@vertex` at a named
/// vertex; `t_<edge>` a stable letter. Optional `^<int>` exponents.
/// Example: `b1^3 * t_e1 * b2^-1`.
pub fn parse_word(g: &GBSData, text: &str) -> Result<Word> {
    let mut letters = Vec::new();
    let bad = |msg: String| Error::MalformedWord(msg);
    for tok in text.split('*') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let (head, exp) = match tok.split_once('^') {
            Some((h, e)) => {
                let exp: i64 = e
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad exponent in `{tok}`")))?;
                (h.trim(), exp)
            }
            None => (tok, 1),
        };
        if let Some(rest) = head.strip_prefix("t_") {
            let geom = g
                .graph
                .edge_index(rest)
                .ok_or_else(|| bad(format!("unknown edge `{rest}`")))?;
            if g.tree[geom] {
                return Err(bad(format!("edge `{rest}` is a tree edge, not a stable letter")));
            }
            let e = g.orientation[geom];
            let sign = if exp >= 0 { 1i8 } else { -1 };
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter::Stable { e, exp: sign });
            }
        } else if let Some(rest) = head.strip_prefix('b') {
            let (k_str, v) = match rest.split_once('@') {
                Some((k, vname)) => {
                    let v = g
                        .graph
                        .vertex_index(vname.trim())
                        .ok_or_else(|| bad(format!("unknown vertex `{vname}`")))?;
                    (k, v)
                }
                None => (rest, g.base),
            };
            let k: usize = k_str
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad generator index in `{tok}`")))?;
            if k == 0 || k > g.n {
                return Err(bad(format!("generator index {k} out of range 1..={}", g.n)));
            }
            if exp != 0 {
                let mut z = ZVec::zero(g.n);
                z.0[k - 1] = Int::from(exp);
                letters.push(Letter::VertexGen { v, z });
            }
        } else {
            return Err(bad(format!("unrecognized letter `{tok}`")));
        }
    }
    Ok(Word { letters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::builtin;
    use crate::modmap::{compute_modular, mu_eval};

    fn bs(m: i64, n: i64) -> GBSData {
        builtin("bs", &[m, n]).unwrap()
    }

    fn w(g: &GBSData, s: &str) -> Word {
        parse_word(g, s).unwrap()
    }

    #[test]
    fn to_path_word_vertex_gen_only() {
        let g = bs(2, 3);
        let p = to_path_word(&g, &w(&g, "b1")).unwrap();
        assert_eq!(p.g0, ZVec::from_i64(&[1]));
        assert!(p.steps.is_empty());
    }

    #[test]
    fn to_path_word_amalgam_crossing() {
        // Generator at the non-base vertex: path crosses the tree edge, drops
        // the vector, and returns.
        let g = builtin("tree-amalgam", &[2, 0, 0, 2]).unwrap();
        let word = w(&g, "b1@v");
        let p = to_path_word(&g, &word).unwrap();
        assert_eq!(p.edge_len(), 2);
        assert_eq!(p.steps[0].1, ZVec::from_i64(&[1, 0]));
        assert_eq!(p.steps[1].0, p.steps[0].0.bar());
    }

    #[test]
    fn reduce_pinches_relation() {
        // In BS(2,3) with t traversing e: t b^2 t^-1 = b^3.
        let g = bs(2, 3);
        let p = to_path_word(&g, &w(&g, "t_t * b1^2 * t_t^-1")).unwrap();
        let r = reduce(&g, &p);
        assert_eq!(r.edge_len(), 0);
        assert_eq!(r.g0, ZVec::from_i64(&[3]));
    }

    #[test]
    fn reduce_reverse_direction() {
        // t^-1 b^3 t = b^2: the path traverses bar(e) where sigma = [3].
        let g = bs(2, 3);
        let p = to_path_word(&g, &w(&g, "t_t^-1 * b1^3 * t_t")).unwrap();
        let r = reduce(&g, &p);
        assert_eq!(r.edge_len(), 0);
        assert_eq!(r.g0, ZVec::from_i64(&[2]));
    }

    #[test]
    fn reduce_blocks_on_nonmember() {
        let g = bs(2, 3);
        let p = to_path_word(&g, &w(&g, "t_t * b1 * t_t^-1")).unwrap();
        let r = reduce(&g, &p);
        assert_eq!(r.edge_len(), 2, "1 is not in 2Z, no pinch applies");
    }

    #[test]
    fn normal_form_kills_relation() {
        let g = bs(1, 2);
        let nf = normal_form(&g, &w(&g, "t_t * b1 * t_t^-1 * b1^-2")).unwrap();
        assert!(nf.is_identity());
    }

    #[test]
    fn normal_form_distinguishes() {
        let g = bs(2, 3);
        let a = normal_form(&g, &w(&g, "b1 * t_t")).unwrap();
        let b = normal_form(&g, &w(&g, "t_t * b1")).unwrap();
        assert_ne!(a, b);
        let md = compute_modular(&g);
        assert_ne!(
            mu_eval(&md, &g, &w(&g, "b1 * t_t")).unwrap(),
            mu_eval(&md, &g, &w(&g, "t_t * b1")).unwrap()
        );
    }

    #[test]
    fn normal_form_idempotent_on_random_relation_insertions() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let g = bs(2, 3);
        let e = g.stable_edges()[0];
        let mut rng = StdRng::seed_from_u64(3);
        let rel = vec![
            Letter::Stable { e, exp: 1 },
            Letter::VertexGen {
                v: 0,
                z: ZVec::from_i64(&[2]),
            },
            Letter::Stable { e, exp: -1 },
            Letter::VertexGen {
                v: 0,
                z: ZVec::from_i64(&[-3]),
            },
        ];
        for _ in 0..40 {
            let mut letters = Vec::new();
            for _ in 0..rng.gen_range(0..6) {
                if rng.gen_bool(0.5) {
                    letters.push(Letter::Stable {
                        e,
                        exp: if rng.gen_bool(0.5) { 1 } else { -1 },
                    });
                } else {
                    letters.push(Letter::VertexGen {
                        v: 0,
                        z: ZVec::from_i64(&[rng.gen_range(-3..=3)]),
                    });
                }
            }
            let base = Word {
                letters: letters.clone(),
            };
            let pos = rng.gen_range(0..=letters.len());
            let mut with_rel = letters.clone();
            with_rel.splice(pos..pos, rel.iter().cloned());
            let wr = Word { letters: with_rel };
            assert_eq!(
                normal_form(&g, &base).unwrap(),
                normal_form(&g, &wr).unwrap()
            );
        }
    }

    #[test]
    fn phi_examples() {
        let g = bs(2, 3);
        assert!(phi(&g, &w(&g, "b1^5")).letters.is_empty());
        let f = phi(&g, &w(&g, "t_t * b1^2 * t_t"));
        assert_eq!(f.letters.len(), 2);
        let g2 = builtin("z2-f2", &[]).unwrap();
        let f2 = phi(&g2, &w(&g2, "t_t1 * t_t2 * t_t2^-1"));
        assert_eq!(f2.letters.len(), 1);
    }

    #[test]
    fn ball_radius_zero_and_one() {
        let g = bs(1, 2);
        let b0 = ball(&g, 0).unwrap();
        assert_eq!(b0.len(), 1);
        assert!(b0[0].nf.is_identity());
        let b1 = ball(&g, 1).unwrap();
        assert_eq!(b1.len(), 5);
    }

    #[test]
    fn ball_nested_and_consistent_lengths() {
        let g = bs(2, 3);
        let b2 = ball(&g, 2).unwrap();
        let b3 = ball(&g, 3).unwrap();
        use std::collections::HashMap;
        let m3: HashMap<_, _> = b3.iter().map(|e| (e.nf.clone(), e.length)).collect();
        for el in &b2 {
            assert_eq!(m3.get(&el.nf), Some(&el.length));
        }
    }

    #[test]
    fn ball_matches_mu_dedup_oracle_bs12() {
        // mu is injective on BS(1,2); brute-force all words of length <= 4
        // and dedupe by exact affine-map image.
        let g = bs(1, 2);
        let md = compute_modular(&g);
        let gens = standard_generators(&g);
        let mut images = std::collections::HashSet::new();
        let mut frontier = vec![Word::empty()];
        images.insert(affine_key(&mu_eval(&md, &g, &Word::empty()).unwrap()));
        for _ in 0..4 {
            let mut next = Vec::new();
            for wd in &frontier {
                for s in &gens {
                    let nw = wd.concat(s);
                    images.insert(affine_key(&mu_eval(&md, &g, &nw).unwrap()));
                    next.push(nw);
                }
            }
            frontier = next;
        }
        let b = ball(&g, 4).unwrap();
        assert_eq!(b.len(), images.len());
    }

    fn affine_key(a: &crate::modmap::AffineMap) -> String {
        format!("{:?}|{:?}", a.linear.rows(), a.translation)
    }

    #[test]
    fn ball_cap_enforced() {
        let g = bs(2, 3);
        assert!(matches!(
            ball_with(&g, 6, &standard_generators(&g), 10),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn ball_representative_words_are_faithful() {
        let g = bs(2, 3);
        for el in ball(&g, 3).unwrap() {
            assert_eq!(normal_form(&g, &el.word).unwrap(), el.nf);
            assert!(el.word.letters.len() <= el.length);
        }
    }

    #[test]
    fn parse_word_errors() {
        let g = bs(2, 3);
        assert!(parse_word(&g, "t_zz").is_err());
        assert!(parse_word(&g, "b7").is_err());
        assert!(parse_word(&g, "x1").is_err());
        assert!(parse_word(&g, "b1@nope").is_err());
    }

    #[test]
    fn inverse_cancels() {
        let g = bs(2, 3);
        for s in ["b1 * t_t", "t_t^2 * b1^-1", "b1^3 * t_t^-1 * b1"] {
            let wd = w(&g, s);
            let prod = wd.concat(&wd.inverse());
            assert!(normal_form(&g, &prod).unwrap().is_identity());
        }
    }
}

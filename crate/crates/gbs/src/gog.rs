//! Data model, validation, parsing and built-in corpus for finite graphs of
//! `Z^n`-groups. A geometric edge carries two oriented edges exchanged by the
//! bar involution; each oriented edge `e` owns an injective matrix
//! `sigma(e): Z^n -> Z^n` into the vertex group at its terminus `e+`.

use crate::error::{Error, Issue, Result};
use crate::ratlin::IMat;
use crate::Int;
use num_traits::Zero;
use std::collections::VecDeque;
use std::fmt::Write as _;

/// An oriented edge: geometric edge `k` yields `OEdge(2k)` for the forward
/// (document) orientation and `OEdge(2k+1)` for the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OEdge(pub usize);

impl OEdge {
    pub fn fwd(geom: usize) -> OEdge {
        OEdge(2 * geom)
    }

    pub fn rev(geom: usize) -> OEdge {
        OEdge(2 * geom + 1)
    }

    /// The bar involution: same geometric edge, opposite orientation.
    pub fn bar(self) -> OEdge {
        OEdge(self.0 ^ 1)
    }

    pub fn geom(self) -> usize {
        self.0 >> 1
    }

    pub fn is_fwd(self) -> bool {
        self.0 & 1 == 0
    }
}

/// A geometric edge as written in a document: `from -> to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeomEdge {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

/// Finite connected graph; vertices and geometric edges are kept sorted by
/// identifier so that equal documents produce identical structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub vertices: Vec<String>,
    pub geom_edges: Vec<GeomEdge>,
}

impl Graph {
    /// Terminus `e+` of an oriented edge.
    pub fn terminus(&self, e: OEdge) -> usize {
        let g = &self.geom_edges[e.geom()];
        if e.is_fwd() {
            g.to
        } else {
            g.from
        }
    }

    /// Origin `e-` of an oriented edge.
    pub fn origin(&self, e: OEdge) -> usize {
        self.terminus(e.bar())
    }

    pub fn oriented_edges(&self) -> impl Iterator<Item = OEdge> {
        (0..2 * self.geom_edges.len()).map(OEdge)
    }

    /// Oriented edges leaving `v` (origin `v`), in geometric-edge order.
    pub fn star(&self, v: usize) -> Vec<OEdge> {
        self.oriented_edges().filter(|&e| self.origin(e) == v).collect()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.geom_edges.iter().position(|e| e.id == id)
    }

    fn connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.star(v) {
                let w = self.terminus(e);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Outcome of structural validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

/// A finite graph of `Z^n`-groups together with the auxiliary choices (maximal
/// tree, orientation, base vertex) that pin down its fundamental group
/// presentation. Immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GBSData {
    pub n: usize,
    pub graph: Graph,
    /// Indexed by `OEdge.0`; `sigma[e]` maps the edge group into the vertex
    /// group at the terminus of `e`.
    sigma: Vec<IMat>,
    /// Per geometric edge: is it in the maximal tree T?
    pub tree: Vec<bool>,
    /// Per geometric edge: the representative in the orientation set A.
    pub orientation: Vec<OEdge>,
    pub base: usize,
}

impl GBSData {
    pub fn sigma(&self, e: OEdge) -> &IMat {
        &self.sigma[e.0]
    }

    pub fn is_tree_edge(&self, e: OEdge) -> bool {
        self.tree[e.geom()]
    }

    /// `d = |A \ T|`: the number of stable letters, in geometric-edge order.
    pub fn stable_edges(&self) -> Vec<OEdge> {
        (0..self.graph.geom_edges.len())
            .filter(|&g| !self.tree[g])
            .map(|g| self.orientation[g])
            .collect()
    }

    pub fn rank_d(&self) -> usize {
        self.tree.iter().filter(|&&t| !t).count()
    }

    /// Assemble and validate. `None` choices get the deterministic defaults:
    /// BFS tree from the smallest vertex (ties by edge id), forward
    /// orientation, smallest vertex as base.
    pub fn assemble(
        n: usize,
        graph: Graph,
        sigma: Vec<IMat>,
        tree: Option<Vec<bool>>,
        orientation: Option<Vec<OEdge>>,
        base: Option<usize>,
    ) -> Result<GBSData> {
        let mut issues = Vec::new();
        if graph.vertices.is_empty() {
            issues.push(Issue {
                code: "empty-graph",
                location: "graph".into(),
                message: "no vertices".into(),
            });
            return Err(Error::Validation { issues });
        }
        if n == 0 {
            issues.push(Issue {
                code: "bad-rank",
                location: "rank".into(),
                message: "rank must be at least 1".into(),
            });
        }
        if !graph.connected() {
            issues.push(Issue {
                code: "disconnected",
                location: "graph".into(),
                message: "graph is not connected".into(),
            });
        }
        assert_eq!(sigma.len(), 2 * graph.geom_edges.len());
        for e in graph.oriented_edges() {
            let m = &sigma[e.0];
            let ge = &graph.geom_edges[e.geom()];
            if m.n != n {
                issues.push(Issue {
                    code: "bad-matrix-dim",
                    location: format!("edge {}", ge.id),
                    message: format!("sigma is {}x{} but rank is {n}", m.n, m.n),
                });
            } else if m.det().is_zero() {
                issues.push(Issue {
                    code: "singular-sigma",
                    location: format!("edge {}", ge.id),
                    message: "sigma has determinant zero".into(),
                });
            }
        }
        let tree = match tree {
            Some(t) => {
                assert_eq!(t.len(), graph.geom_edges.len());
                if !is_spanning_tree(&graph, &t) {
                    issues.push(Issue {
                        code: "bad-tree",
                        location: "tree".into(),
                        message: "selected edges do not form a spanning tree".into(),
                    });
                }
                t
            }
            None => default_tree(&graph),
        };
        let orientation = match orientation {
            Some(o) => {
                assert_eq!(o.len(), graph.geom_edges.len());
                for (g, &e) in o.iter().enumerate() {
                    if e.geom() != g {
                        issues.push(Issue {
                            code: "bad-orientation",
                            location: format!("edge {}", graph.geom_edges[g].id),
                            message: "orientation entry refers to a different edge".into(),
                        });
                    }
                }
                o
            }
            None => (0..graph.geom_edges.len()).map(OEdge::fwd).collect(),
        };
        let base = base.unwrap_or(0);
        if base >= graph.vertices.len() {
            issues.push(Issue {
                code: "bad-base",
                location: "base".into(),
                message: "base vertex does not exist".into(),
            });
        }
        if !issues.is_empty() {
            return Err(Error::Validation { issues });
        }
        Ok(GBSData {
            n,
            graph,
            sigma,
            tree,
            orientation,
            base,
        })
    }

    /// Re-run the structural checks on an already-built value.
    pub fn validate(&self) -> ValidationReport {
        match GBSData::assemble(
            self.n,
            self.graph.clone(),
            self.sigma.clone(),
            Some(self.tree.clone()),
            Some(self.orientation.clone()),
            Some(self.base),
        ) {
            Ok(_) => ValidationReport {
                ok: true,
                issues: vec![],
            },
            Err(Error::Validation { issues }) => ValidationReport { ok: false, issues },
            Err(_) => unreachable!(),
        }
    }

    /// Canonical document; `parse(render(g)) == g`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "rank n = {}", self.n).unwrap();
        for v in &self.graph.vertices {
            writeln!(out, "vertex {v}").unwrap();
        }
        for (g, ge) in self.graph.geom_edges.iter().enumerate() {
            writeln!(
                out,
                "edge {}: {} -> {}  sigma = {}  sigma_bar = {}",
                ge.id,
                self.graph.vertices[ge.from],
                self.graph.vertices[ge.to],
                render_matrix(self.sigma(OEdge::fwd(g))),
                render_matrix(self.sigma(OEdge::rev(g))),
            )
            .unwrap();
        }
        let tree_ids: Vec<&str> = self
            .graph
            .geom_edges
            .iter()
            .enumerate()
            .filter(|(g, _)| self.tree[*g])
            .map(|(_, ge)| ge.id.as_str())
            .collect();
        if !tree_ids.is_empty() {
            writeln!(out, "tree: {}", tree_ids.join(",")).unwrap();
        } else if !self.graph.geom_edges.is_empty() {
            writeln!(out, "tree:").unwrap();
        }
        if !self.graph.geom_edges.is_empty() {
            let ors: Vec<String> = self
                .graph
                .geom_edges
                .iter()
                .enumerate()
                .map(|(g, ge)| {
                    format!(
                        "{}:{}",
                        ge.id,
                        if self.orientation[g].is_fwd() { "fwd" } else { "rev" }
                    )
                })
                .collect();
            writeln!(out, "orientation: {}", ors.join(",")).unwrap();
        }
        writeln!(out, "base: {}", self.graph.vertices[self.base]).unwrap();
        out
    }

    /// Iteratively collapse tree edges with a unimodular side, conjugating
    /// the matrices incident to the absorbed vertex. Preserves the group up
    /// to isomorphism; idempotent.
    pub fn reduce_graph(&self) -> GBSData {
        let mut cur = self.clone();
        while let Some(next) = collapse_once(&cur) {
            cur = next;
        }
        cur
    }
}

fn render_matrix(m: &IMat) -> String {
    let rows: Vec<String> = m
        .rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn is_spanning_tree(graph: &Graph, tree: &[bool]) -> bool {
    let nv = graph.vertices.len();
    let count = tree.iter().filter(|&&t| t).count();
    if count != nv.saturating_sub(1) {
        return false;
    }
    // count = nv-1 plus connectivity via tree edges only => spanning tree
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for e in graph.star(v) {
            if !tree[e.geom()] {
                continue;
            }
            let w = graph.terminus(e);
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// BFS spanning tree from vertex 0 (the lexicographically smallest, since
/// vertices are sorted); edge ties resolved by geometric-edge order.
fn default_tree(graph: &Graph) -> Vec<bool> {
    let nv = graph.vertices.len();
    let mut tree = vec![false; graph.geom_edges.len()];
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for e in graph.star(v) {
            let w = graph.terminus(e);
            if !seen[w] {
                seen[w] = true;
                tree[e.geom()] = true;
                queue.push_back(w);
            }
        }
    }
    tree
}

fn collapse_once(g: &GBSData) -> Option<GBSData> {
    for geom in 0..g.graph.geom_edges.len() {
        if !g.tree[geom] {
            continue;
        }
        for e in [OEdge::fwd(geom), OEdge::rev(geom)] {
            if g.sigma(e).is_unimodular() {
                return Some(collapse(g, e));
            }
        }
    }
    None
}

/// Collapse tree edge `e` by absorbing the vertex `e+` into `e-`. Every
/// matrix landing in the absorbed group is post-composed with
/// `sigma(bar e) * sigma(e)^(-1)`, the isomorphism onto its image in `e-`.
fn collapse(g: &GBSData, e: OEdge) -> GBSData {
    let absorbed = g.graph.terminus(e);
    let survivor = g.graph.origin(e);
    debug_assert_ne!(absorbed, survivor, "tree edge cannot be a loop");
    let conj = g
        .sigma(e.bar())
        .to_qmat()
        .mul(&g.sigma(e).to_qmat().inverse().expect("nonsingular sigma"))
        .to_imat()
        .expect("unimodular side gives an integral conjugator");

    let remap = |v: usize| -> usize {
        let v = if v == absorbed { survivor } else { v };
        // Vertex indices above `absorbed` shift down by one.
        if v > absorbed {
            v - 1
        } else {
            v
        }
    };

    let mut vertices = g.graph.vertices.clone();
    vertices.remove(absorbed);
    let mut geom_edges = Vec::new();
    let mut sigma = Vec::new();
    let mut tree = Vec::new();
    let mut orientation = Vec::new();
    for (old, ge) in g.graph.geom_edges.iter().enumerate() {
        if old == e.geom() {
            continue;
        }
        let new_index = geom_edges.len();
        geom_edges.push(GeomEdge {
            id: ge.id.clone(),
            from: remap(ge.from),
            to: remap(ge.to),
        });
        for o in [OEdge::fwd(old), OEdge::rev(old)] {
            let mut m = g.sigma(o).clone();
            if g.graph.terminus(o) == absorbed {
                m = conj.mul(&m);
            }
            sigma.push(m);
        }
        tree.push(g.tree[old]);
        let o = g.orientation[old];
        orientation.push(if o.is_fwd() {
            OEdge::fwd(new_index)
        } else {
            OEdge::rev(new_index)
        });
    }
    GBSData {
        n: g.n,
        graph: Graph {
            vertices,
            geom_edges,
        },
        sigma,
        tree,
        orientation,
        base: remap(g.base),
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Scanner<'a> {
    line: &'a [char],
    lineno: usize,
    pos: usize,
    _text: &'a str,
}

impl<'a> Scanner<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.lineno,
            col: self.pos + 1,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.line.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        let chars: Vec<char> = lit.chars().collect();
        if self.line[self.pos..].starts_with(&chars[..]) {
            self.pos += chars.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '-') {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        Ok(self.line[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<Int> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.line[start..self.pos].iter().collect();
        s.parse::<Int>().or_else(|_| self.err("expected an integer"))
    }

    /// `[[1,2],[3,4]]` row-major; a flat `[m]` is accepted as 1x1.
    fn matrix(&mut self) -> Result<Vec<Vec<Int>>> {
        self.expect("[")?;
        self.skip_ws();
        if self.peek() == Some('[') {
            let mut rows = Vec::new();
            loop {
                rows.push(self.int_list()?);
                self.skip_ws();
                if self.eat(",") {
                    continue;
                }
                self.expect("]")?;
                return Ok(rows);
            }
        }
        // Flat list: single row.
        let mut row = vec![self.int()?];
        while self.eat(",") {
            row.push(self.int()?);
        }
        self.expect("]")?;
        Ok(vec![row])
    }

    fn int_list(&mut self) -> Result<Vec<Int>> {
        self.expect("[")?;
        let mut out = vec![self.int()?];
        while self.eat(",") {
            out.push(self.int()?);
        }
        self.expect("]")?;
        Ok(out)
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.line.len()
    }

    fn expect_end(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

struct RawEdge {
    id: String,
    from: String,
    to: String,
    sigma: Vec<Vec<Int>>,
    sigma_bar: Vec<Vec<Int>>,
    lineno: usize,
}

/// Parse a graph-of-groups document. Syntax problems yield `Error::Parse`
/// with position; structural problems yield `Error::Validation`.
pub fn parse(text: &str) -> Result<GBSData> {
    let mut rank: Option<usize> = None;
    let mut vertex_names: Vec<String> = Vec::new();
    let mut raw_edges: Vec<RawEdge> = Vec::new();
    let mut tree_ids: Option<Vec<String>> = None;
    let mut orient_ids: Option<Vec<(String, bool)>> = None;
    let mut base_name: Option<String> = None;

    for (i, raw_line) in text.lines().enumerate() {
        let line_str: String = match raw_line.find('#') {
            Some(k) => raw_line[..k].to_string(),
            None => raw_line.to_string(),
        };
        if line_str.trim().is_empty() {
            continue;
        }
        let chars: Vec<char> = line_str.chars().collect();
        let mut s = Scanner {
            line: &chars,
            lineno: i + 1,
            pos: 0,
            _text: text,
        };
        if s.eat("rank") {
            s.expect("n")?;
            s.expect("=")?;
            let n = s.int()?;
            s.expect_end()?;
            if rank.is_some() {
                return s.err("duplicate rank declaration");
            }
            use num_traits::ToPrimitive;
            match n.to_usize() {
                Some(n) if n >= 1 => rank = Some(n),
                _ => return s.err("rank must be a positive integer"),
            }
        } else if s.eat("vertex") {
            let id = s.ident()?;
            s.expect_end()?;
            vertex_names.push(id);
        } else if s.eat("edge") {
            let id = s.ident()?;
            s.expect(":")?;
            let from = s.ident()?;
            s.expect("->")?;
            let to = s.ident()?;
            s.expect("sigma")?;
            s.expect("=")?;
            let sigma = s.matrix()?;
            s.expect("sigma_bar")?;
            s.expect("=")?;
            let sigma_bar = s.matrix()?;
            s.expect_end()?;
            raw_edges.push(RawEdge {
                id,
                from,
                to,
                sigma,
                sigma_bar,
                lineno: i + 1,
            });
        } else if s.eat("tree") {
            s.expect(":")?;
            let mut ids = Vec::new();
            if !s.at_end() {
                ids.push(s.ident()?);
                while s.eat(",") {
                    ids.push(s.ident()?);
                }
            }
            s.expect_end()?;
            if tree_ids.is_some() {
                return s.err("duplicate tree declaration");
            }
            tree_ids = Some(ids);
        } else if s.eat("orientation") {
            s.expect(":")?;
            let mut ids = Vec::new();
            loop {
                let id = s.ident()?;
                s.expect(":")?;
                let dir = s.ident()?;
                let fwd = match dir.as_str() {
                    "fwd" => true,
                    "rev" => false,
                    _ => return s.err("orientation must be `fwd` or `rev`"),
                };
                ids.push((id, fwd));
                if !s.eat(",") {
                    break;
                }
            }
            s.expect_end()?;
            if orient_ids.is_some() {
                return s.err("duplicate orientation declaration");
            }
            orient_ids = Some(ids);
        } else if s.eat("base") {
            s.expect(":")?;
            let id = s.ident()?;
            s.expect_end()?;
            if base_name.is_some() {
                return s.err("duplicate base declaration");
            }
            base_name = Some(id);
        } else {
            return s.err("expected `rank`, `vertex`, `edge`, `tree`, `orientation` or `base`");
        }
    }

    let mut issues = Vec::new();
    let n = match rank {
        Some(n) => n,
        None => {
            issues.push(Issue {
                code: "bad-rank",
                location: "document".into(),
                message: "missing `rank n = ...` declaration".into(),
            });
            return Err(Error::Validation { issues });
        }
    };
    if vertex_names.is_empty() {
        issues.push(Issue {
            code: "empty-graph",
            location: "document".into(),
            message: "no vertices declared".into(),
        });
        return Err(Error::Validation { issues });
    }
    let mut sorted_vertices = vertex_names.clone();
    sorted_vertices.sort();
    for w in sorted_vertices.windows(2) {
        if w[0] == w[1] {
            issues.push(Issue {
                code: "duplicate-vertex",
                location: format!("vertex {}", w[0]),
                message: "vertex declared twice".into(),
            });
        }
    }
    raw_edges.sort_by(|a, b| a.id.cmp(&b.id));
    for w in raw_edges.windows(2) {
        if w[0].id == w[1].id {
            issues.push(Issue {
                code: "duplicate-edge",
                location: format!("edge {}", w[0].id),
                message: "edge declared twice".into(),
            });
        }
    }
    let mut geom_edges = Vec::new();
    let mut sigma = Vec::new();
    for re in &raw_edges {
        let from = sorted_vertices.iter().position(|v| *v == re.from);
        let to = sorted_vertices.iter().position(|v| *v == re.to);
        let (from, to) = match (from, to) {
            (Some(f), Some(t)) => (f, t),
            _ => {
                issues.push(Issue {
                    code: "unknown-vertex",
                    location: format!("edge {} (line {})", re.id, re.lineno),
                    message: "edge endpoint is not a declared vertex".into(),
                });
                continue;
            }
        };
        let mk = |rows: &Vec<Vec<Int>>| -> IMat {
            if rows.iter().all(|r| r.len() == rows.len()) {
                IMat::from_rows(rows.clone())
            } else {
                // Wrong shape; report via a 0-dim sentinel caught below.
                IMat::from_rows(vec![])
            }
        };
        let sf = mk(&re.sigma);
        let sb = mk(&re.sigma_bar);
        if sf.n != n || sb.n != n {
            issues.push(Issue {
                code: "bad-matrix-dim",
                location: format!("edge {} (line {})", re.id, re.lineno),
                message: format!("sigma matrices must be {n}x{n}"),
            });
            continue;
        }
        geom_edges.push(GeomEdge {
            id: re.id.clone(),
            from,
            to,
        });
        sigma.push(sf);
        sigma.push(sb);
    }
    if !issues.is_empty() {
        return Err(Error::Validation { issues });
    }
    let graph = Graph {
        vertices: sorted_vertices,
        geom_edges,
    };
    let tree = match tree_ids {
        Some(ids) => {
            let mut t = vec![false; graph.geom_edges.len()];
            for id in &ids {
                match graph.edge_index(id) {
                    Some(g) => t[g] = true,
                    None => issues.push(Issue {
                        code: "unknown-edge",
                        location: "tree".into(),
                        message: format!("tree refers to unknown edge `{id}`"),
                    }),
                }
            }
            Some(t)
        }
        None => None,
    };
    let orientation = match orient_ids {
        Some(ids) => {
            let mut o: Vec<OEdge> = (0..graph.geom_edges.len()).map(OEdge::fwd).collect();
            for (id, fwd) in &ids {
                match graph.edge_index(id) {
                    Some(g) => o[g] = if *fwd { OEdge::fwd(g) } else { OEdge::rev(g) },
                    None => issues.push(Issue {
                        code: "unknown-edge",
                        location: "orientation".into(),
                        message: format!("orientation refers to unknown edge `{id}`"),
                    }),
                }
            }
            Some(o)
        }
        None => None,
    };
    let base = match &base_name {
        Some(name) => match graph.vertex_index(name) {
            Some(v) => Some(v),
            None => {
                issues.push(Issue {
                    code: "bad-base",
                    location: "base".into(),
                    message: format!("base refers to unknown vertex `{name}`"),
                });
                None
            }
        },
        None => None,
    };
    if !issues.is_empty() {
        return Err(Error::Validation { issues });
    }
    GBSData::assemble(n, graph, sigma, tree, orientation, base)
}

// ---------------------------------------------------------------------------
// Built-in corpus
// ---------------------------------------------------------------------------

/// Construct one of the built-in fixtures:
/// `bs(m,n)`, `heisenberg`, `z2-f2`, `tree-amalgam(M row-major)`.
pub fn builtin(name: &str, params: &[i64]) -> Result<GBSData> {
    match name {
        "bs" => {
            let [m, n] = params else {
                return Err(Error::BadParams("bs needs exactly two integers".into()));
            };
            if *m == 0 || *n == 0 {
                return Err(Error::BadParams("bs parameters must be nonzero".into()));
            }
            one_vertex_loops(1, &[(&[&[*m]], &[&[*n]])])
        }
        "heisenberg" => {
            require_no_params(params, "heisenberg")?;
            one_vertex_loops(2, &[(&[&[1, 0], &[0, 1]], &[&[1, 1], &[0, 1]])])
        }
        "z2-f2" => {
            require_no_params(params, "z2-f2")?;
            one_vertex_loops(
                2,
                &[
                    (&[&[1, 0], &[0, 1]], &[&[1, 2], &[0, 1]]),
                    (&[&[1, 0], &[0, 1]], &[&[1, 0], &[2, 1]]),
                ],
            )
        }
        "tree-amalgam" => {
            let n = (params.len() as f64).sqrt() as usize;
            if n == 0 || n * n != params.len() {
                return Err(Error::BadParams(
                    "tree-amalgam needs a square matrix, row-major".into(),
                ));
            }
            let rows: Vec<Vec<Int>> = (0..n)
                .map(|i| params[i * n..(i + 1) * n].iter().map(|&x| Int::from(x)).collect())
                .collect();
            let m = IMat::from_rows(rows);
            if m.det().is_zero() {
                return Err(Error::BadParams("tree-amalgam matrix is singular".into()));
            }
            let graph = Graph {
                vertices: vec!["u".into(), "v".into()],
                geom_edges: vec![GeomEdge {
                    id: "a".into(),
                    from: 0,
                    to: 1,
                }],
            };
            let sigma = vec![IMat::identity(n), m];
            GBSData::assemble(n, graph, sigma, None, None, None)
        }
        _ => Err(Error::UnknownBuiltin(name.into())),
    }
}

fn require_no_params(params: &[i64], name: &str) -> Result<()> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(Error::BadParams(format!("{name} takes no parameters")))
    }
}

fn one_vertex_loops(n: usize, loops: &[(&[&[i64]], &[&[i64]])]) -> Result<GBSData> {
    let geom_edges = (0..loops.len())
        .map(|i| GeomEdge {
            id: if loops.len() == 1 {
                "t".to_string()
            } else {
                format!("t{}", i + 1)
            },
            from: 0,
            to: 0,
        })
        .collect();
    let mut sigma = Vec::new();
    for (s, sb) in loops {
        sigma.push(IMat::from_i64(s));
        sigma.push(IMat::from_i64(sb));
    }
    GBSData::assemble(
        n,
        Graph {
            vertices: vec!["v".into()],
            geom_edges,
        },
        sigma,
        None,
        None,
        None,
    )
}

// ---------------------------------------------------------------------------
// Randomized corpus for property tests
// ---------------------------------------------------------------------------

/// Sample a small random valid GBSData: rank <= 3, <= 4 vertices, <= 5
/// geometric edges, matrix entries in [-3, 3] with nonzero determinant.
pub fn random_gbs(rng: &mut impl rand::Rng) -> GBSData {
    let n = rng.gen_range(1..=3);
    let nv = rng.gen_range(1..=4);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut geom_edges = Vec::new();
    // Random spanning tree: attach vertex i to a random earlier vertex.
    for i in 1..nv {
        geom_edges.push((rng.gen_range(0..i), i));
    }
    let extra = rng.gen_range(0..=(5 - geom_edges.len().min(5)));
    for _ in 0..extra {
        geom_edges.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    let geom_edges: Vec<GeomEdge> = geom_edges
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| GeomEdge {
            id: format!("e{i}"),
            from: a,
            to: b,
        })
        .collect();
    let mut sigma = Vec::new();
    for _ in 0..2 * geom_edges.len() {
        sigma.push(random_nonsingular(rng, n));
    }
    GBSData::assemble(
        n,
        Graph {
            vertices,
            geom_edges,
        },
        sigma,
        None,
        None,
        None,
    )
    .expect("sampler produces valid data")
}

fn random_nonsingular(rng: &mut impl rand::Rng, n: usize) -> IMat {
    loop {
        let m = IMat::from_rows(
            (0..n)
                .map(|_| (0..n).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect())
                .collect(),
        );
        if !m.det().is_zero() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_bs_shape() {
        let g = builtin("bs", &[2, 3]).unwrap();
        assert_eq!(g.n, 1);
        assert_eq!(g.rank_d(), 1);
        assert_eq!(g.graph.vertices.len(), 1);
        let e = g.stable_edges()[0];
        assert_eq!(g.sigma(e), &IMat::from_i64(&[&[2]]));
        assert_eq!(g.sigma(e.bar()), &IMat::from_i64(&[&[3]]));
    }

    #[test]
    fn builtin_z2f2_shape() {
        let g = builtin("z2-f2", &[]).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.rank_d(), 2);
        let es = g.stable_edges();
        assert_eq!(g.sigma(es[0].bar()), &IMat::from_i64(&[&[1, 2], &[0, 1]]));
        assert_eq!(g.sigma(es[1].bar()), &IMat::from_i64(&[&[1, 0], &[2, 1]]));
    }

    #[test]
    fn builtin_heisenberg_shape() {
        let g = builtin("heisenberg", &[]).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.rank_d(), 1);
        let e = g.stable_edges()[0];
        assert_eq!(g.sigma(e.bar()), &IMat::from_i64(&[&[1, 1], &[0, 1]]));
    }

    #[test]
    fn builtin_tree_amalgam_rank_zero() {
        let g = builtin("tree-amalgam", &[1, 1, 0, 1]).unwrap();
        assert_eq!(g.rank_d(), 0);
        assert_eq!(g.graph.vertices.len(), 2);
        assert!(g.tree[0]);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(builtin("nope", &[]), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(builtin("bs", &[0, 3]), Err(Error::BadParams(_))));
        assert!(matches!(
            builtin("tree-amalgam", &[1, 2, 3]),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(
            builtin("tree-amalgam", &[1, 1, 1, 1]),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn parse_bs_document() {
        let doc = "\
# BS(2,3)
rank n = 1
vertex v
edge t: v -> v  sigma = [2]  sigma_bar = [3]
";
        let g = parse(doc).unwrap();
        assert_eq!(g, builtin("bs", &[2, 3]).unwrap());
    }

    #[test]
    fn parse_empty_vertex_set_fails() {
        let err = parse("rank n = 1\n").unwrap_err();
        assert!(matches!(err, Error::Validation { .. }));
    }

    #[test]
    fn parse_singular_sigma_fails() {
        let doc = "\
rank n = 1
vertex a
vertex b
edge e: a -> b  sigma = [0]  sigma_bar = [1]
";
        match parse(doc).unwrap_err() {
            Error::Validation { issues } => {
                assert!(issues.iter().any(|i| i.code == "singular-sigma"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_syntax_error_has_position() {
        match parse("rank n = 1\nvortex a\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_disconnected_fails() {
        let doc = "\
rank n = 1
vertex a
vertex b
";
        match parse(doc).unwrap_err() {
            Error::Validation { issues } => {
                assert!(issues.iter().any(|i| i.code == "disconnected"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn render_roundtrip_builtins() {
        for g in [
            builtin("bs", &[2, 3]).unwrap(),
            builtin("heisenberg", &[]).unwrap(),
            builtin("z2-f2", &[]).unwrap(),
            builtin("tree-amalgam", &[1, 1, 0, 1]).unwrap(),
        ] {
            assert_eq!(parse(&g.render()).unwrap(), g);
        }
    }

    #[test]
    fn render_roundtrip_randomized() {
        use rand::rngs::StdRng;
        use rand::SeedableRng;
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_gbs(&mut rng);
            assert_eq!(parse(&g.render()).unwrap(), g, "roundtrip\n{}", g.render());
        }
    }

    #[test]
    fn default_choices_deterministic() {
        let doc = "\
rank n = 1
vertex b
vertex a
edge e1: b -> a  sigma = [2]  sigma_bar = [5]
edge e0: a -> b  sigma = [3]  sigma_bar = [7]
";
        let g1 = parse(doc).unwrap();
        let g2 = parse(doc).unwrap();
        assert_eq!(g1, g2);
        // Vertices sorted, so base is `a`; BFS from `a` picks e0 (smaller id).
        assert_eq!(g1.graph.vertices, vec!["a", "b"]);
        assert_eq!(g1.base, 0);
        assert!(g1.tree[g1.graph.edge_index("e0").unwrap()]);
        assert!(!g1.tree[g1.graph.edge_index("e1").unwrap()]);
    }

    #[test]
    fn reduce_identity_amalgam_collapses_fully() {
        let g = builtin("tree-amalgam", &[1, 0, 0, 1]).unwrap();
        let r = g.reduce_graph();
        assert_eq!(r.graph.vertices.len(), 1);
        assert!(r.graph.geom_edges.is_empty());
    }

    #[test]
    fn reduce_bs_unchanged() {
        let g = builtin("bs", &[2, 3]).unwrap();
        assert_eq!(g.reduce_graph(), g);
    }

    #[test]
    fn reduce_chain_leaves_nonunimodular_amalgam() {
        let doc = "\
rank n = 1
vertex a
vertex b
vertex c
edge e0: a -> b  sigma = [1]  sigma_bar = [2]
edge e1: b -> c  sigma = [3]  sigma_bar = [1]
";
        let g = parse(doc).unwrap();
        let r = g.reduce_graph();
        assert_eq!(r.graph.vertices.len(), 2);
        assert_eq!(r.graph.geom_edges.len(), 1);
        assert_eq!(r.rank_d(), 0);
        let e = r.orientation[0];
        let dets: Vec<Int> = vec![r.sigma(e).det(), r.sigma(e.bar()).det()];
        let mut abs: Vec<Int> = dets.iter().map(|d| d.magnitude().clone().into()).collect();
        abs.sort();
        assert_eq!(abs, vec![Int::from(2), Int::from(3)]);
        // Idempotent.
        assert_eq!(r.reduce_graph(), r);
    }

    #[test]
    fn reduce_preserves_rank_d() {
        use rand::rngs::StdRng;
        use rand::SeedableRng;
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let g = random_gbs(&mut rng);
            let r = g.reduce_graph();
            assert_eq!(r.rank_d(), g.rank_d());
            assert_eq!(r.reduce_graph(), r);
        }
    }

    #[test]
    fn validate_reports_ok() {
        let g = builtin("bs", &[1, 2]).unwrap();
        let rep = g.validate();
        assert!(rep.ok);
        assert!(rep.issues.is_empty());
    }
}

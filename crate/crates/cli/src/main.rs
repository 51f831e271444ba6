//! `gbs`: command-line front end for the gbs library. Subcommands dispatch
//! to the library modules; output is plain text or a stable `schema: 1`
//! JSON document; exit status is 0 on success, 1 on validation errors, 2 on
//! resource limits.

use clap::{Args, Parser, Subcommand};
use gbs::bstree::{ElementDynamics, TreeCtx};
use gbs::embed::{
    estimate_compression, properness_profile, EmbedCase, EmbedPoint, Embedder,
};
use gbs::error::Error;
use gbs::gog::{builtin, parse, GBSData};
use gbs::modmap::compute_modular;
use gbs::ratlin::QMat;
use gbs::verdicts::{
    closure_amenability, compression_report, decide_amenable, distortion_report, haagerup_report,
    structure_report, AmenabilityVerdict, ClosureVerdict, TriBool, DEFAULT_DEPTH,
};
use gbs::words::{ball, normal_form, parse_word, Letter, NormalForm, Word};
use gbs::Int;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gbs",
    about = "Analysis of generalized Baumslag-Solitar groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// Built-in fixture, `name` or `name:p1,p2,...` (bs, heisenberg, z2-f2,
    /// tree-amalgam).
    #[arg(long)]
    builtin: Option<String>,
    /// Path to a graph-of-groups document.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Positional alternative to --input.
    path: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
    /// Reserved precision cap; all certified computations are exact.
    #[arg(long, default_value_t = 256)]
    precision_bits: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full report: modular map, amenability, Haagerup, distortion,
    /// compression, structure.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Certificate search depth.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the modular images of the stable letters.
    Mu {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Normal form of a word.
    Nf {
        #[command(flatten)]
        input: InputArgs,
        /// Word, e.g. `b1^3 * t_t * b1^-1`.
        #[arg(long)]
        word: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate the ball of the group with exact word lengths.
    Ball {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Explore the Bass-Serre tree around the base vertex.
    TreeBall {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Write the explored ball as a DOT graph.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Classify this word's action on the tree.
        #[arg(long)]
        word: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Coordinates of a word under an explicit embedding.
    Embed {
        #[command(flatten)]
        input: InputArgs,
        /// generic | d1 | n1
        #[arg(long, default_value = "generic")]
        case: String,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Empirical compression-exponent estimate.
    Compression {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value = "generic")]
        case: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the lower envelope as CSV `(r, rho)` rows.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Minimal target displacement per word-length sphere.
    Properness {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value = "generic")]
        case: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceLimit(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load(input: &InputArgs) -> Result<GBSData, Error> {
    let path = input.input.clone().or_else(|| input.path.clone());
    match (&input.builtin, path) {
        (Some(_), Some(_)) => Err(Error::BadParams(
            "give either --builtin or an input path, not both".into(),
        )),
        (None, None) => Err(Error::BadParams(
            "an input is required: --builtin <name:params> or a document path".into(),
        )),
        (Some(spec), None) => {
            let (name, params) = match spec.split_once(':') {
                None => (spec.as_str(), vec![]),
                Some((name, rest)) => {
                    let params = rest
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(|s| {
                            s.trim().parse::<i64>().map_err(|_| {
                                Error::BadParams(format!("bad builtin parameter `{s}`"))
                            })
                        })
                        .collect::<Result<Vec<i64>, Error>>()?;
                    (name, params)
                }
            };
            builtin(name, &params)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse {
                line: 0,
                col: 0,
                msg: format!("cannot read {}: {e}", path.display()),
            })?;
            parse(&text)
        }
    }
}

fn check_caps(common: &CommonArgs, extra: &[(&str, usize)]) -> Result<(), Error> {
    if common.precision_bits == 0 {
        return Err(Error::BadParams("--precision-bits must be positive".into()));
    }
    for (name, v) in extra {
        if *v == 0 {
            return Err(Error::BadParams(format!("--{name} must be positive")));
        }
    }
    Ok(())
}

fn parse_case(s: &str) -> Result<EmbedCase, Error> {
    match s {
        "generic" => Ok(EmbedCase::Generic),
        "d1" => Ok(EmbedCase::DOneSplit),
        "n1" => Ok(EmbedCase::NOneHyperbolic),
        _ => Err(Error::BadParams(format!(
            "unknown embedding case `{s}` (expected generic, d1 or n1)"
        ))),
    }
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Analyze {
            input,
            depth,
            common,
        } => {
            check_caps(&common, &[("depth", depth)])?;
            let g = load(&input)?;
            analyze(&g, depth, common.json)
        }
        Cmd::Mu { input, common } => {
            check_caps(&common, &[])?;
            let g = load(&input)?;
            let md = compute_modular(&g);
            if common.json {
                let mut mu = serde_json::Map::new();
                for e in g.stable_edges() {
                    mu.insert(
                        format!("t_{}", g.graph.geom_edges[e.geom()].id),
                        matrix_json(md.mu_stable(e)),
                    );
                }
                emit(json!({ "schema": 1, "mu": mu }));
            } else {
                for e in g.stable_edges() {
                    println!("{}", matrix_string(md.mu_stable(e)));
                }
            }
            Ok(())
        }
        Cmd::Nf {
            input,
            word,
            common,
        } => {
            check_caps(&common, &[])?;
            let g = load(&input)?;
            let w = parse_word(&g, &word)?;
            let nf = normal_form(&g, &w)?;
            let rendered = render_nf(&g, &nf);
            if common.json {
                emit(json!({
                    "schema": 1,
                    "word": word,
                    "normal_form": rendered,
                    "is_identity": nf.is_identity(),
                    "syllables": nf.0.edge_len(),
                }));
            } else {
                println!("{rendered}");
                println!("identity: {}", nf.is_identity());
            }
            Ok(())
        }
        Cmd::Ball {
            input,
            radius,
            common,
        } => {
            check_caps(&common, &[("radius", radius)])?;
            let g = load(&input)?;
            let elements = ball(&g, radius)?;
            let mut counts = vec![0usize; radius + 1];
            for el in &elements {
                counts[el.length] += 1;
            }
            if common.json {
                emit(json!({
                    "schema": 1,
                    "radius": radius,
                    "total": elements.len(),
                    "sphere_sizes": counts,
                }));
            } else {
                for (r, c) in counts.iter().enumerate() {
                    println!("sphere {r}: {c}");
                }
                println!("total: {}", elements.len());
            }
            Ok(())
        }
        Cmd::TreeBall {
            input,
            radius,
            dot,
            word,
            common,
        } => {
            check_caps(&common, &[("radius", radius)])?;
            let g = load(&input)?;
            let ctx = TreeCtx::new(&g);
            let ball = ctx.ball(&ctx.base(), radius, 100_000)?;
            let spheres: Vec<usize> = (0..=radius).map(|r| ball.sphere_size(r)).collect();
            let dynamics = match &word {
                None => None,
                Some(text) => {
                    let w = parse_word(&g, text)?;
                    let r = ctx.auto_radius(&w)?;
                    Some(ctx.dynamics(&w, r)?)
                }
            };
            if let Some(path) = &dot {
                std::fs::write(path, tree_dot(&g, &ball)).map_err(|e| {
                    Error::BadParams(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            if common.json {
                let dyn_json = dynamics.as_ref().map(|d| match d {
                    ElementDynamics::Elliptic { .. } => json!({ "type": "elliptic" }),
                    ElementDynamics::Hyperbolic {
                        translation_length, ..
                    } => json!({
                        "type": "hyperbolic",
                        "translation_length": translation_length,
                    }),
                });
                emit(json!({
                    "schema": 1,
                    "radius": radius,
                    "vertices": ball.vertices.len(),
                    "sphere_sizes": spheres,
                    "dynamics": dyn_json,
                }));
            } else {
                for (r, c) in spheres.iter().enumerate() {
                    println!("sphere {r}: {c}");
                }
                println!("vertices: {}", ball.vertices.len());
                match &dynamics {
                    Some(ElementDynamics::Elliptic { .. }) => println!("dynamics: elliptic"),
                    Some(ElementDynamics::Hyperbolic {
                        translation_length, ..
                    }) => println!("dynamics: hyperbolic, translation length {translation_length}"),
                    None => {}
                }
            }
            Ok(())
        }
        Cmd::Embed {
            input,
            case,
            word,
            common,
        } => {
            check_caps(&common, &[])?;
            let g = load(&input)?;
            let md = compute_modular(&g);
            let case = parse_case(&case)?;
            let emb = Embedder::new(&g, &md, case)?;
            let w = parse_word(&g, &word)?;
            let pt = emb.embed(&w)?;
            let coords = point_json(&g, &pt);
            if common.json {
                emit(json!({ "schema": 1, "word": word, "point": coords }));
            } else {
                println!(
                    "{}",
                    serde_json::to_string(&coords).expect("serializable point")
                );
            }
            Ok(())
        }
        Cmd::Compression {
            input,
            radius,
            case,
            p,
            seed,
            csv,
            common,
        } => {
            check_caps(&common, &[("radius", radius)])?;
            if p < 1.0 {
                return Err(Error::BadParams("--p must be at least 1".into()));
            }
            let g = load(&input)?;
            let md = compute_modular(&g);
            let case = parse_case(&case)?;
            let est = estimate_compression(&g, &md, case, radius, p, seed)?;
            if let Some(path) = &csv {
                let mut text = String::from("r,rho\n");
                for (r, v) in &est.envelope {
                    text.push_str(&format!("{r},{v}\n"));
                }
                std::fs::write(path, text).map_err(|e| {
                    Error::BadParams(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            if common.json {
                emit(json!({
                    "schema": 1,
                    "radius": radius,
                    "p": p,
                    "seed": est.seed,
                    "elements": est.element_count,
                    "pairs": est.pair_count,
                    "exponent": est.exponent,
                    "band": est.band,
                    "qi_constants": est.qi_constants.map(|(m, a)| json!([m, a])),
                    "envelope": est.envelope,
                }));
            } else {
                println!("elements: {}", est.element_count);
                println!("pairs: {}", est.pair_count);
                println!("seed: {}", est.seed);
                println!("fitted exponent: {:.4} (stderr {:.4})", est.exponent, est.band);
                if let Some((m, a)) = est.qi_constants {
                    println!("linear regime: rho(r) ~ {m:.4} * r + {a:.4}");
                }
            }
            Ok(())
        }
        Cmd::Properness {
            input,
            radius,
            case,
            common,
        } => {
            check_caps(&common, &[("radius", radius)])?;
            let g = load(&input)?;
            let md = compute_modular(&g);
            let case = parse_case(&case)?;
            let profile = properness_profile(&g, &md, case, radius)?;
            if common.json {
                emit(json!({ "schema": 1, "radius": radius, "profile": profile }));
            } else {
                for (r, v) in profile.iter().enumerate() {
                    println!("{r},{v}");
                }
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Analyze
// ---------------------------------------------------------------------------

fn analyze(g: &GBSData, depth: usize, as_json: bool) -> Result<(), Error> {
    let md = compute_modular(g);
    let amen = decide_amenable(g, depth);
    let closure = closure_amenability(&md, g, depth);
    let haag = haagerup_report(g);
    let dist = distortion_report(&md, g);
    let comp = compression_report(g, depth);
    let structure = structure_report(&md, g, depth);

    if as_json {
        let mut mu = serde_json::Map::new();
        for e in g.stable_edges() {
            mu.insert(
                format!("t_{}", g.graph.geom_edges[e.geom()].id),
                matrix_json(md.mu_stable(e)),
            );
        }
        let (amen_status, amen_reason, amen_cert, amen_depth) = match &amen {
            AmenabilityVerdict::Amenable(r) => {
                ("amenable", Some(format!("{r:?}")), Value::Null, Value::Null)
            }
            AmenabilityVerdict::NonAmenable(c) => (
                "non-amenable",
                None,
                json!({ "a": render_word(g, &c.a), "b": render_word(g, &c.b) }),
                Value::Null,
            ),
            AmenabilityVerdict::Unknown(d) => ("unknown", None, Value::Null, json!(d)),
        };
        let (closure_status, closure_case, schottky) = match &closure {
            ClosureVerdict::Amenable(c) => ("amenable", Some(format!("{c:?}")), Value::Null),
            ClosureVerdict::NonAmenable(c) => (
                "non-amenable",
                None,
                json!({
                    "generators": c.generators.iter().map(matrix_json).collect::<Vec<_>>(),
                    "word_a": c.word_a,
                    "word_b": c.word_b,
                    "mat_a": matrix_json(&c.mat_a),
                    "mat_b": matrix_json(&c.mat_b),
                    "contraction": c.contraction.to_string(),
                }),
            ),
            ClosureVerdict::Unknown => ("unknown", None, Value::Null),
        };
        emit(json!({
            "schema": 1,
            "group": {
                "vertices": g.graph.vertices,
                "edges": g.graph.geom_edges.len(),
                "rank_n": g.n,
                "rank_d": g.rank_d(),
                "base": g.graph.vertices[g.base],
            },
            "mu": mu,
            "amenable": {
                "status": amen_status,
                "reason": amen_reason,
                "certificate": amen_cert,
                "depth_reached": amen_depth,
            },
            "closure": { "status": closure_status, "case": closure_case },
            "haagerup": tri(haag.haagerup),
            "weakly_amenable": tri(haag.weakly_amenable),
            "lambda": haag.lambda.as_ref().map(|l| l.to_string()),
            "exp_distorted": tri(dist.exp_distorted),
            "distortion": {
                "distal_dual_dim": dist.distal_dual_part.len(),
                "dual_dim": dist.dual_dim,
                "certified": dist.certified,
                "note": dist.exp_subspace_note,
            },
            "alpha_p": comp.alpha_p.map(|a| a.render()),
            "alpha_p_sharp": comp.alpha_p_sharp.map(|a| a.render()),
            "compression": {
                "applicable": comp.applicable,
                "assumptions": comp.assumptions,
            },
            "structure": {
                "ker_mu_free": structure.ker_mu_free,
                "free_by_amenable": tri(structure.free_by_amenable),
                "note": structure.note,
            },
            "certificates": schottky,
        }));
    } else {
        println!(
            "group: {} vertices, {} edges, n = {}, d = {}",
            g.graph.vertices.len(),
            g.graph.geom_edges.len(),
            g.n,
            g.rank_d()
        );
        for e in g.stable_edges() {
            println!(
                "mu(t_{}) = {}",
                g.graph.geom_edges[e.geom()].id,
                matrix_string(md.mu_stable(e))
            );
        }
        match &amen {
            AmenabilityVerdict::Amenable(r) => println!("amenable: yes ({r:?})"),
            AmenabilityVerdict::NonAmenable(c) => println!(
                "amenable: no (ping-pong pair `{}`, `{}`)",
                render_word(g, &c.a),
                render_word(g, &c.b)
            ),
            AmenabilityVerdict::Unknown(d) => println!("amenable: unknown (depth {d})"),
        }
        match &closure {
            ClosureVerdict::Amenable(c) => println!("modular closure amenable: yes ({c:?})"),
            ClosureVerdict::NonAmenable(_) => {
                println!("modular closure amenable: no (Schottky certificate)")
            }
            ClosureVerdict::Unknown => println!("modular closure amenable: unknown"),
        }
        println!("haagerup: {}", tri(haag.haagerup));
        println!("weakly amenable: {}", tri(haag.weakly_amenable));
        if let Some(l) = &haag.lambda {
            println!("lambda: {l}");
        }
        println!(
            "exp distorted: {} ({})",
            tri(dist.exp_distorted),
            dist.exp_subspace_note
        );
        if comp.applicable {
            println!(
                "alpha_p = {}, alpha_p# = {}",
                comp.alpha_p.map(|a| a.render()).unwrap_or("-"),
                comp.alpha_p_sharp.map(|a| a.render()).unwrap_or("-")
            );
        } else {
            println!("compression theorem not applicable");
        }
        println!(
            "structure: Ker mu free; free-by-amenable: {} ({})",
            tri(structure.free_by_amenable),
            structure.note
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------------

fn tri(t: TriBool) -> &'static str {
    match t {
        TriBool::Yes => "yes",
        TriBool::No => "no",
        TriBool::Unknown => "unknown",
    }
}

fn emit(v: Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&v).expect("serializable document")
    );
}

fn matrix_string(m: &QMat) -> String {
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

fn matrix_json(m: &QMat) -> Value {
    json!(m
        .rows()
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn render_word(g: &GBSData, w: &Word) -> String {
    let mut parts = Vec::new();
    for l in &w.letters {
        match l {
            Letter::VertexGen { v, z } => {
                for (k, c) in z.0.iter().enumerate() {
                    if *c != Int::from(0) {
                        let mut s = format!("b{}", k + 1);
                        if *v != g.base {
                            s.push_str(&format!("@{}", g.graph.vertices[*v]));
                        }
                        if *c != Int::from(1) {
                            s.push_str(&format!("^{c}"));
                        }
                        parts.push(s);
                    }
                }
            }
            Letter::Stable { e, exp } => {
                let id = &g.graph.geom_edges[e.geom()].id;
                parts.push(if *exp == 1 {
                    format!("t_{id}")
                } else {
                    format!("t_{id}^-1")
                });
            }
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" * ")
    }
}

fn render_nf(g: &GBSData, nf: &NormalForm) -> String {
    render_word(g, &nf.0.to_word(g))
}

fn point_json(g: &GBSData, pt: &EmbedPoint) -> Value {
    match pt {
        EmbedPoint::Generic {
            tree,
            translation,
            linear,
            free,
        } => json!({
            "case": "generic",
            "tree_depth": tree.depth(),
            "tree_type": g.graph.vertices[tree.vtype],
            "translation": translation,
            "linear": linear,
            "free": free_string(g, free),
        }),
        EmbedPoint::DOneSplit {
            tree,
            free,
            height,
            plus,
            minus,
            translation,
        } => json!({
            "case": "d1",
            "tree_depth": tree.depth(),
            "height": height,
            "plus": plus,
            "minus": minus,
            "translation": translation,
            "free": free_string(g, free),
        }),
        EmbedPoint::NOneHyperbolic { free, z } => json!({
            "case": "n1",
            "free": free_string(g, free),
            "z": [z.0, z.1],
        }),
    }
}

fn free_string(g: &GBSData, f: &gbs::words::FreeWord) -> String {
    if f.letters.is_empty() {
        return "1".into();
    }
    f.letters
        .iter()
        .map(|(e, exp)| {
            let id = &g.graph.geom_edges[e.geom()].id;
            if *exp == 1 {
                format!("t_{id}")
            } else {
                format!("t_{id}^-1")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn tree_dot(g: &GBSData, ball: &gbs::bstree::TreeBall) -> String {
    let mut out = String::from("graph bass_serre_tree {\n");
    for (i, v) in ball.vertices.iter().enumerate() {
        out.push_str(&format!(
            "  v{} [label=\"{} d{}\"];\n",
            i, g.graph.vertices[v.vtype], ball.depth[i]
        ));
    }
    for (a, b) in &ball.edges {
        out.push_str(&format!("  v{a} -- v{b};\n"));
    }
    out.push_str("}\n");
    out
}

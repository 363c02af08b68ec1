//! `incidence`: batch front end for the incidence library.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use incidence::bidirected::{activation_classes, k_arborescences, single_element_classes, BidirectedGraph};
use incidence::contributors::{
    class_contributors, component_profile, contributor_sign, enumerate_contributors, oracle_poly,
    profile_of_steps, reduce_contributor, total_minor_poly, verified_univariate, MinorClass, Target,
};
use incidence::hypergraph::generated_subhypergraph;
use incidence::io::{parse_oriented, to_json};
use incidence::leibniz::{char_poly_univariate, symbolic_minor_poly};
use incidence::matrix::{adjacency_matrix, degree_matrix, incidence_matrix, laplacian_matrix};
use incidence::topos::{classify, zero_loading, SubobjectClassifier};
use incidence::{Error, IntegerMatrix, Limits, Mode, OrientedHypergraph};

#[derive(Parser)]
#[command(name = "incidence", version, about = "Exact matrix combinatorics of oriented hypergraphs")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel enumerations.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest vertex count accepted by the exhaustive expansions.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Cap on the number of enumerated objects.
    #[arg(long, global = true)]
    max_enum: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the incidence, adjacency, degree and Laplacian matrices.
    Matrices(Input),
    /// Characteristic polynomial by direct expansion.
    Charpoly {
        #[arg(long, value_enum)]
        matrix: TargetArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Expand det(X - M) or perm(X - M) with one variable per entry.
        #[arg(long)]
        multivariate: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Total-minor polynomial assembled from contributors.
    TotalMinor {
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        input: Input,
    },
    /// List contributors with their component profiles.
    Contributors {
        /// Backstep-free contributors only.
        #[arg(long)]
        strong: bool,
        /// A class `u1,u2:w1,w2`; prints the reduced contributors of the class.
        #[arg(long)]
        class: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Print the 0-loading.
    Loading(Input),
    /// Classify the subhypergraph generated by the given elements.
    Classify {
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        incidences: Vec<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Print the subobject classifier.
    Omega,
    /// Enumerate k-arborescences with the given sinks.
    Arborescences {
        #[arg(long, value_delimiter = ',', required = true)]
        roots: Vec<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Print activation classes of a bidirected graph.
    Activation(Input),
    /// Check contributor polynomials against the Leibniz expansion.
    Verify(Input),
}

#[derive(Args)]
struct Input {
    /// Hypergraph JSON file, or `-` for standard input.
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Adjacency,
    Laplacian,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Adjacency => Target::Adjacency,
            TargetArg::Laplacian => Target::Laplacian,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Det,
    Perm,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Det => Mode::Determinant,
            ModeArg::Perm => Mode::Permanent,
        }
    }
}

enum Failure {
    Library(Error),
    Io(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = Result<String, Failure>;

fn read(input: &Input) -> Result<OrientedHypergraph, Failure> {
    let text = if input.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Io(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(&input.input)
            .map_err(|e| Failure::Io(format!("{}: {e}", input.input.display())))?
    };
    Ok(parse_oriented(&text)?)
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::Adjacency => "adjacency",
        Target::Laplacian => "laplacian",
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Determinant => "det",
        Mode::Permanent => "perm",
    }
}

fn matrix_json(m: &IntegerMatrix) -> Value {
    json!({"rows": m.row_labels(), "cols": m.col_labels(), "entries": m.rows()})
}

fn vertex_list(og: &OrientedHypergraph, ids: &str) -> Result<Vec<usize>, Failure> {
    let g = og.structure();
    ids.split(',')
        .filter(|s| !s.is_empty())
        .map(|id| {
            g.vertex_index(id.trim())
                .ok_or_else(|| Failure::Library(Error::Domain(format!("unknown vertex `{id}`"))))
        })
        .collect()
}

fn parse_class(og: &OrientedHypergraph, spec: &str) -> Result<MinorClass, Failure> {
    let (u, w) = spec
        .split_once(':')
        .ok_or_else(|| Failure::Library(Error::Parse(format!("class `{spec}` must look like u1,u2:w1,w2"))))?;
    Ok(MinorClass::new(vertex_list(og, u)?, vertex_list(og, w)?, og.vertex_count())?)
}

fn matrices(og: &OrientedHypergraph, as_json: bool) -> Outcome {
    let h = incidence_matrix::<i64>(og);
    let a = adjacency_matrix::<i64>(og);
    let d = degree_matrix::<i64>(og);
    let l = laplacian_matrix::<i64>(og)?;
    if as_json {
        return Ok(json!({
            "incidence": matrix_json(&h),
            "adjacency": matrix_json(&a),
            "degree": matrix_json(&d),
            "laplacian": matrix_json(&l),
        })
        .to_string());
    }
    Ok(format!("H\n{h}\nA\n{a}\nD\n{d}\nL\n{l}"))
}

fn charpoly(og: &OrientedHypergraph, target: Target, mode: Mode, multivariate: bool, limits: &Limits, as_json: bool) -> Outcome {
    let m = incidence::contributors::target_matrix(og, target)?;
    let text = if multivariate {
        symbolic_minor_poly(&m, mode, limits)?.format(m.row_labels(), m.col_labels())
    } else {
        char_poly_univariate(&m, mode, limits)?.to_string()
    };
    if as_json {
        return Ok(json!({"matrix": target_name(target), "mode": mode_name(mode), "polynomial": text}).to_string());
    }
    Ok(text)
}

fn total_minor(og: &OrientedHypergraph, target: Target, mode: Mode, limits: &Limits, as_json: bool) -> Outcome {
    let p = total_minor_poly(og, target, mode, limits)?;
    let labels = og.structure().vertices();
    let text = p.format(labels, labels);
    if as_json {
        return Ok(json!({"target": target_name(target), "mode": mode_name(mode), "polynomial": text}).to_string());
    }
    Ok(text)
}

fn contributors(og: &OrientedHypergraph, strong: bool, class: Option<&str>, limits: &Limits, as_json: bool) -> Outcome {
    let g = og.structure();
    let mut rows = Vec::new();
    match class {
        None => {
            for c in enumerate_contributors(g, strong, limits)? {
                let p = component_profile(og, &c);
                rows.push((c.format(g), p, contributor_sign(og, &c)));
            }
        }
        Some(spec) => {
            let class = parse_class(og, spec)?;
            for c in class_contributors(g, &class, limits)? {
                if strong && !c.is_strong() {
                    continue;
                }
                let r = reduce_contributor(&c, &class)?;
                let p = profile_of_steps(og, &r.steps);
                let sign = r.steps.iter().flatten().map(|s| s.sign(og)).product::<i8>();
                rows.push((r.format(g), p, sign));
            }
        }
    }
    if as_json {
        let items: Vec<Value> = rows
            .iter()
            .map(|(steps, p, sign)| {
                json!({"steps": steps, "sign": sign, "bs": p.bs, "loops": p.loops,
                       "oc": p.oc, "ec": p.ec, "pc": p.pc, "nc": p.nc, "paths": p.paths})
            })
            .collect();
        return Ok(json!({"count": rows.len(), "contributors": items}).to_string());
    }
    let mut out = String::new();
    for (k, (steps, p, sign)) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}: {steps} | bs={} loops={} oc={} ec={} pc={} nc={} paths={} sign={sign:+}",
            k + 1,
            p.bs,
            p.loops,
            p.oc,
            p.ec,
            p.pc,
            p.nc,
            p.paths
        );
    }
    let _ = write!(out, "count: {}", rows.len());
    Ok(out)
}

fn loading(og: &OrientedHypergraph, as_json: bool) -> Outcome {
    let loaded = zero_loading(og);
    if as_json {
        return Ok(serde_json::to_string(&incidence::io::HypergraphRecord::from_oriented(&loaded)).expect("serializable"));
    }
    Ok(to_json(&loaded))
}

fn classify_cmd(og: &OrientedHypergraph, vertices: &[String], edges: &[String], incidences: &[String], as_json: bool) -> Outcome {
    let g = std::sync::Arc::new(og.structure().clone());
    let lookup = |ids: &[String], find: &dyn Fn(&str) -> Option<usize>, kind: &str| -> Result<_, Failure> {
        ids.iter()
            .map(|id| find(id).ok_or_else(|| Failure::Library(Error::Domain(format!("unknown {kind} `{id}`")))))
            .collect::<Result<std::collections::BTreeSet<usize>, _>>()
    };
    let s1 = lookup(vertices, &|id| g.vertex_index(id), "vertex")?;
    let s2 = lookup(edges, &|id| g.edge_index(id), "edge")?;
    let s3 = lookup(incidences, &|id| g.incidence_index(id), "incidence")?;
    let sub = generated_subhypergraph(&g, &s1, &s2, &s3)?;
    let omega = SubobjectClassifier::new();
    let chi = classify(&sub, &omega)?;
    let tags = &omega.tilde;
    let vmap: Vec<(String, String)> = g.vertices().iter().zip(&chi.vertex_map).map(|(v, &t)| (v.clone(), tags.vertex_tags[t].to_string())).collect();
    let emap: Vec<(String, String)> = g.edges().iter().zip(&chi.edge_map).map(|(e, &t)| (e.clone(), tags.edge_tags[t].to_string())).collect();
    let imap: Vec<(String, String)> = g.incidences().iter().zip(&chi.incidence_map).map(|(i, &t)| (i.id.clone(), tags.incidence_tags[t].to_string())).collect();
    if as_json {
        return Ok(json!({"vertices": vmap, "edges": emap, "incidences": imap}).to_string());
    }
    let mut out = String::new();
    for (kind, map) in [("vertex", &vmap), ("edge", &emap), ("incidence", &imap)] {
        for (id, tag) in map.iter() {
            let _ = writeln!(out, "{kind} {id} -> {tag}");
        }
    }
    Ok(out.trim_end().to_string())
}

fn omega_cmd(as_json: bool) -> Outcome {
    let omega = SubobjectClassifier::new();
    let g = omega.omega();
    if as_json {
        let incs: Vec<Value> = g
            .incidences()
            .iter()
            .map(|i| json!({"id": i.id, "vertex": g.vertices()[i.vertex], "edge": g.edges()[i.edge]}))
            .collect();
        return Ok(json!({"vertices": g.vertices(), "edges": g.edges(), "incidences": incs}).to_string());
    }
    let mut out = format!("vertices: {}\nedges: {}\n", g.vertices().join(" "), g.edges().join(" "));
    for i in g.incidences() {
        let _ = writeln!(out, "incidence {}: {} ~ {}", i.id, g.vertices()[i.vertex], g.edges()[i.edge]);
    }
    Ok(out.trim_end().to_string())
}

fn arborescences(og: &OrientedHypergraph, roots: &[String], limits: &Limits, as_json: bool) -> Outcome {
    let g = og.structure();
    let roots = vertex_list(og, &roots.join(","))?;
    let forests = k_arborescences(g, &roots, limits)?;
    let class = MinorClass::new(roots.clone(), roots.clone(), g.vertex_count())?;
    let coefficient = total_minor_poly(og, Target::Laplacian, Mode::Determinant, limits)?.coefficient(&class.monomial());
    let singles = match BidirectedGraph::new(og.clone()) {
        Ok(b) => Some(single_element_classes(&b, &class, limits)?.len()),
        Err(_) => None,
    };
    if as_json {
        let list: Vec<String> = forests.iter().map(|a| a.display(g).to_string()).collect();
        return Ok(json!({"count": forests.len(), "arborescences": list, "coefficient": coefficient,
                         "single_element_classes": singles})
        .to_string());
    }
    let mut out = String::new();
    for a in &forests {
        let _ = writeln!(out, "{}", a.display(g));
    }
    let _ = writeln!(out, "count: {}", forests.len());
    let _ = write!(out, "coefficient: {coefficient}");
    if let Some(s) = singles {
        let _ = write!(out, "\nsingle-element classes: {s}");
    }
    Ok(out)
}

fn activation(og: &OrientedHypergraph, limits: &Limits, as_json: bool) -> Outcome {
    let b = BidirectedGraph::new(og.clone())?;
    let g = og.structure();
    let classes = activation_classes(&b, limits)?;
    let names = |cycle: &[usize]| cycle.iter().map(|&v| g.vertices()[v].as_str()).collect::<Vec<_>>().join(",");
    if as_json {
        let items: Vec<Value> = classes
            .iter()
            .map(|a| {
                let gens: Vec<String> = a.generators.iter().map(|c| names(c)).collect();
                json!({"size": a.members.len(), "generators": gens, "bottom": a.bottom.format(g)})
            })
            .collect();
        return Ok(json!({"count": classes.len(), "classes": items}).to_string());
    }
    let mut out = String::new();
    for (k, a) in classes.iter().enumerate() {
        let gens: Vec<String> = a.generators.iter().map(|c| format!("({})", names(c))).collect();
        let _ = writeln!(
            out,
            "{}: size {} generators [{}] bottom {}",
            k + 1,
            a.members.len(),
            gens.join(" "),
            a.bottom.format(g)
        );
    }
    let _ = write!(out, "classes: {}", classes.len());
    Ok(out)
}

fn verify(og: &OrientedHypergraph, limits: &Limits, as_json: bool) -> Outcome {
    let mut results = Vec::new();
    for target in [Target::Adjacency, Target::Laplacian] {
        for mode in [Mode::Determinant, Mode::Permanent] {
            let total = total_minor_poly(og, target, mode, limits)?;
            let oracle = oracle_poly(og, target, mode, limits)?;
            let ok = total == oracle
                && match verified_univariate(og, target, mode, limits) {
                    Ok(_) => true,
                    Err(Error::Invariant(_)) => false,
                    Err(e) => return Err(e.into()),
                };
            results.push((target, mode, ok));
        }
    }
    let all = results.iter().all(|r| r.2);
    let text = if as_json {
        let items: Vec<Value> = results
            .iter()
            .map(|(t, m, ok)| json!({"target": target_name(*t), "mode": mode_name(*m), "pass": ok}))
            .collect();
        json!({"pass": all, "checks": items}).to_string()
    } else {
        results
            .iter()
            .map(|(t, m, ok)| format!("{} {} {}", if *ok { "PASS" } else { "FAIL" }, target_name(*t), mode_name(*m)))
            .collect::<Vec<_>>()
            .join("\n")
    };
    if all {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn run(cli: Cli) -> Outcome {
    let mut limits = Limits::default();
    if let Some(v) = cli.max_vertices {
        limits.max_vertices = v;
        limits.max_total_minor_vertices = v;
    }
    if let Some(e) = cli.max_enum {
        limits.max_enum = e;
        limits.max_subhypergraphs = e;
    }
    let j = cli.json;
    match &cli.command {
        Command::Matrices(input) => matrices(&read(input)?, j),
        Command::Charpoly {
            matrix,
            mode,
            multivariate,
            input,
        } => charpoly(&read(input)?, (*matrix).into(), (*mode).into(), *multivariate, &limits, j),
        Command::TotalMinor { target, mode, input } => total_minor(&read(input)?, (*target).into(), (*mode).into(), &limits, j),
        Command::Contributors { strong, class, input } => contributors(&read(input)?, *strong, class.as_deref(), &limits, j),
        Command::Loading(input) => loading(&read(input)?, j),
        Command::Classify {
            vertices,
            edges,
            incidences,
            input,
        } => classify_cmd(&read(input)?, vertices, edges, incidences, j),
        Command::Omega => omega_cmd(j),
        Command::Arborescences { roots, input } => arborescences(&read(input)?, roots, &limits, j),
        Command::Activation(input) => activation(&read(input)?, &limits, j),
        Command::Verify(input) => verify(&read(input)?, &limits, j),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(text)) => {
            println!("{text}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::Domain(_) => 1,
                Error::Resource(_) => 2,
                Error::Invariant(_) => 3,
            })
        }
    }
}

//! Batch interface over the truss kernel: documents in, reports out.
//!
//! Every command prints a JSON report (or an SVG, for `render`) to
//! standard output.  Exit codes: 0 success or passing check, 1 failing
//! validation or check, 2 malformed input or unusable operation input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use trusskit_cli::doc::{
    diagram_to_doc, doc_to_bordism, doc_to_diagram, doc_to_signature, doc_to_tower,
    generator_labelling, label_to_json, tower_to_doc, DiagramDocument, SignatureDocument,
    TrussDocument,
};
use trusskit::diagram::{canonicalise, is_canonical, is_diagrammatic, is_submersive};
use trusskit::fiber::fiber_order;
use trusskit::normalize::normalize;
use trusskit::ops::bordism::compose;
use trusskit::ops::dual::{compactify, dualize};
use trusskit::ops::grid::grid;
use trusskit::ops::stype::{sdepth, stype};
use trusskit::ops::subtruss::{atoms, factorize, is_atom};
use trusskit::render::{emit_svg, realize, slices, RealizedDiagram, RenderOptions};
use trusskit::{enumerate_monotone, hom_exists, Flavor, TrussTower};

#[derive(Parser)]
#[command(name = "trusskit", version, about = "Combinatorics of manifold diagrams: validate, normalize, factorize, check and render trusses.")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, ValueEnum)]
enum FlavorArg {
    Open,
    Closed,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Open => Flavor::Open,
            FlavorArg::Closed => Flavor::Closed,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Svg,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a truss document: poset laws, functoriality, labels.
    Validate { file: PathBuf },
    /// Normalize a labelled truss; report the steps and the witness.
    Normalize {
        file: PathBuf,
        /// Write the normal form document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flip a truss between its open and closed forms.
    Dualize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Close an open truss by adjoining its ends.
    Compactify {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the grid truss with the given singular counts, e.g. `1,1`.
    Grid {
        dims: String,
        #[arg(long, value_enum, default_value_t = FlavorArg::Open)]
        flavor: FlavorArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the atoms of an open truss.
    Atoms { file: PathBuf },
    /// Report the singularity type and singular depth.
    Stype { file: PathBuf },
    /// Factorize an open bordism into an active and an inert part.
    Factorize { file: PathBuf },
    /// Compose two bordisms sharing a middle truss.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a labelled truss is a manifold diagram (progressive).
    CheckDiagrammatic { file: PathBuf },
    /// Check that a labelled bordism is submersive.
    CheckSubmersive {
        file: PathBuf,
        /// Check every subtruss with atomic normal form, not just atoms.
        #[arg(long)]
        exhaustive: bool,
        /// Cap on enumerated subtrusses in exhaustive mode.
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
    /// Canonicalise a combinatorial diagram (make its frame active).
    Canonicalize {
        file: PathBuf,
        /// Write the canonicalised diagram document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a generator labelling against a signature.
    Typecheck {
        file: PathBuf,
        /// Signature document, or `free:N` for the free signature in
        /// ambient dimension N.
        #[arg(long)]
        signature: String,
    },
    /// Render a truss of dimension at most 2 (or a 3-truss slicewise).
    Render {
        file: PathBuf,
        /// Output file; slicewise rendering derives one file per slice.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
    /// Enumerate the monotone maps [n] -> [m] with their element relations.
    Homs {
        n: usize,
        m: usize,
        #[arg(long, value_enum, default_value_t = FlavorArg::Open)]
        flavor: FlavorArg,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            say(&json!({ "error": msg }));
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Write to stdout, ending quietly if the reader closed the pipe early.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn say(report: &Value) {
    emit(&format!("{report}\n"));
}

fn load_tower(path: &Path) -> Result<TrussTower, String> {
    doc_to_tower(&read_json::<TrussDocument>(path)?)
}

fn write_or_print(out: &Option<PathBuf>, value: &Value) -> Result<(), String> {
    let text = format!("{:#}\n", value);
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            say(&json!({ "written": path.display().to_string() }));
            Ok(())
        }
        None => {
            emit(&text);
            Ok(())
        }
    }
}

fn tower_json(t: &TrussTower) -> Value {
    serde_json::to_value(tower_to_doc(t)).expect("tower documents always serialize")
}

fn realized_json(d: &RealizedDiagram) -> Value {
    let label = |l: &Option<trusskit::Label>| l.as_ref().map(label_to_json).unwrap_or(Value::Null);
    json!({
        "dim": d.dim,
        "bbox": [d.bbox.0, d.bbox.1, d.bbox.2, d.bbox.3],
        "vertices": d.vertices.iter().map(|v| json!({
            "path": v.path, "at": [v.at.0, v.at.1], "label": label(&v.label),
        })).collect::<Vec<_>>(),
        "wires": d.wires.iter().map(|w| json!({
            "path": w.path,
            "points": w.points.iter().map(|p| vec![p.0, p.1]).collect::<Vec<_>>(),
            "label": label(&w.label),
        })).collect::<Vec<_>>(),
        "regions": d.regions.iter().map(|r| json!({
            "path": r.path,
            "outline": r.outline.iter().map(|p| vec![p.0, p.1]).collect::<Vec<_>>(),
            "label": label(&r.label),
        })).collect::<Vec<_>>(),
    })
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Validate { file } => {
            let tower = load_tower(&file)?;
            match tower.validate() {
                Ok(()) => {
                    say(&json!({ "pass": true, "dim": tower.dim(), "elements": tower.top_len() }));
                    Ok(0)
                }
                Err(issues) => {
                    let issues: Vec<Value> = issues
                        .iter()
                        .map(|i| json!({ "level": i.level, "message": i.message }))
                        .collect();
                    say(&json!({ "pass": false, "issues": issues }));
                    Ok(1)
                }
            }
        }
        Cmd::Normalize { file, out } => {
            let tower = load_tower(&file)?;
            let n = normalize(&tower)?;
            let class = n.witness.classify()?;
            let nf = tower_json(&n.nf);
            say(&json!({
                "steps": n.steps,
                "degeneracy": class.degeneracy,
                "nf": nf,
                "witness": tower_json(n.witness.tower()),
            }));
            if let Some(path) = out {
                write_or_print(&Some(path), &nf)?;
            }
            Ok(0)
        }
        Cmd::Dualize { file, out } => {
            let tower = load_tower(&file)?;
            write_or_print(&out, &tower_json(&dualize(&tower)))?;
            Ok(0)
        }
        Cmd::Compactify { file, out } => {
            let tower = load_tower(&file)?;
            write_or_print(&out, &tower_json(&compactify(&tower)?))?;
            Ok(0)
        }
        Cmd::Grid { dims, flavor, out } => {
            let dims = parse_dims(&dims)?;
            write_or_print(&out, &tower_json(&grid(flavor.into(), &dims)))?;
            Ok(0)
        }
        Cmd::Atoms { file } => {
            let tower = load_tower(&file)?;
            let whole = is_atom(&tower)?;
            let entries: Vec<Value> = atoms(&tower)?
                .iter()
                .enumerate()
                .map(|(p, sub)| {
                    let members: Vec<String> = sub.level_elements[tower.dim()]
                        .iter()
                        .map(|&a| tower.top_path_string(a))
                        .collect();
                    json!({ "element": tower.top_path_string(p), "members": members })
                })
                .collect();
            say(&json!({ "is_atom": whole, "atoms": entries }));
            Ok(0)
        }
        Cmd::Stype { file } => {
            let tower = load_tower(&file)?;
            let bits: Vec<u8> = stype(&tower).iter().map(|&b| b as u8).collect();
            say(&json!({ "stype": bits, "sdepth": sdepth(&tower) }));
            Ok(0)
        }
        Cmd::Factorize { file } => {
            let f = doc_to_bordism(&read_json::<TrussDocument>(&file)?)?;
            let fact = factorize(&f)?;
            let target = f.target()?;
            let selection: Vec<String> = fact
                .middle_selection
                .iter()
                .map(|&i| target.top_path_string(i))
                .collect();
            say(&json!({
                "active": tower_json(fact.active.tower()),
                "middle": tower_json(&fact.middle),
                "inert": tower_json(fact.inert.tower()),
                "middle_selection": selection,
            }));
            Ok(0)
        }
        Cmd::Compose { first, second, out } => {
            let f = doc_to_bordism(&read_json::<TrussDocument>(&first)?)?;
            let g = doc_to_bordism(&read_json::<TrussDocument>(&second)?)?;
            let fg = compose(&f, &g)?;
            write_or_print(&out, &tower_json(fg.tower()))?;
            Ok(0)
        }
        Cmd::CheckDiagrammatic { file } => {
            let tower = load_tower(&file)?;
            let pass = is_diagrammatic(&tower)?;
            say(&json!({ "pass": pass }));
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::CheckSubmersive {
            file,
            exhaustive,
            bound,
        } => {
            let f = doc_to_bordism(&read_json::<TrussDocument>(&file)?)?;
            let pass = is_submersive(&f, exhaustive, bound)?;
            say(&json!({ "pass": pass, "exhaustive": exhaustive }));
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::Canonicalize { file, out } => {
            let d = doc_to_diagram(&read_json::<DiagramDocument>(&file)?)?;
            let was = is_canonical(&d)?;
            let canonical = canonicalise(&d)?;
            let doc = serde_json::to_value(diagram_to_doc(&canonical))
                .expect("diagram documents always serialize");
            say(&json!({ "was_canonical": was, "diagram": doc }));
            if let Some(path) = out {
                write_or_print(&Some(path), &doc)?;
            }
            Ok(0)
        }
        Cmd::Typecheck { file, signature } => {
            let tdoc = read_json::<TrussDocument>(&file)?;
            let tower = doc_to_tower(&tdoc)?;
            let lambda = generator_labelling(&tdoc, &tower)?;
            let sig = match signature.strip_prefix("free:") {
                Some(n) => trusskit::computad::free_signature(
                    n.parse()
                        .map_err(|_| format!("'{n}' is not a dimension"))?,
                )?,
                None => doc_to_signature(&read_json::<SignatureDocument>(Path::new(&signature))?)?,
            };
            let violations = trusskit::computad::typecheck(&tower, &lambda, &sig)?;
            let pass = violations.is_empty();
            let violations: Vec<Value> = violations
                .iter()
                .map(|v| {
                    json!({ "element": v.element, "generator": v.generator, "message": v.message })
                })
                .collect();
            say(&json!({ "pass": pass, "violations": violations }));
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::Render { file, out, format } => {
            let tower = load_tower(&file)?;
            let options = RenderOptions::default();
            if tower.dim() <= 2 {
                let d = realize(&tower)?;
                match format {
                    Format::Svg => match out {
                        Some(path) => {
                            std::fs::write(&path, emit_svg(&d, &options))
                                .map_err(|e| format!("{}: {e}", path.display()))?;
                            say(&json!({ "written": [path.display().to_string()] }));
                        }
                        None => emit(&emit_svg(&d, &options)),
                    },
                    Format::Json => write_or_print(&out, &realized_json(&d))?,
                }
                return Ok(0);
            }
            let cuts = slices(&tower)?;
            match format {
                Format::Svg => {
                    let prefix = out.ok_or("slicewise SVG rendering needs --out")?;
                    let stem = prefix.display().to_string();
                    let stem = stem.strip_suffix(".svg").unwrap_or(&stem).to_string();
                    let mut written = Vec::new();
                    for (i, (path, d)) in cuts.iter().enumerate() {
                        let file = format!("{stem}-{i}-{}.svg", path.replace('/', "_"));
                        std::fs::write(&file, emit_svg(d, &options))
                            .map_err(|e| format!("{file}: {e}"))?;
                        written.push(file);
                    }
                    say(&json!({ "written": written }));
                }
                Format::Json => {
                    let body: Vec<Value> = cuts
                        .iter()
                        .map(|(p, d)| json!({ "slice": p, "render": realized_json(d) }))
                        .collect();
                    write_or_print(&out, &json!({ "slices": body }))?;
                }
            }
            Ok(0)
        }
        Cmd::Homs { n, m, flavor } => {
            let flavor: Flavor = flavor.into();
            let (n_src, n_dst) = match flavor {
                Flavor::Open => (n, m),
                Flavor::Closed => (m, n),
            };
            let maps: Vec<Value> = enumerate_monotone(n, m)
                .iter()
                .map(|map| {
                    let mut relations = Vec::new();
                    for &src in &fiber_order(flavor, n_src) {
                        for &dst in &fiber_order(flavor, n_dst) {
                            if hom_exists(flavor, src, dst, map).unwrap_or(false) {
                                relations.push(format!("{src}->{dst}"));
                            }
                        }
                    }
                    json!({ "values": map.values().to_vec(), "relations": relations })
                })
                .collect();
            say(&json!({ "dom": n, "cod": m, "count": maps.len(), "maps": maps }));
            Ok(0)
        }
    }
}

fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{p}' is not a singular count"))
        })
        .collect()
}

//! JSON document formats for trusses, signatures and diagrams.
//!
//! Keys are canonical element path strings (`r0/s1`, with a leading base
//! index over non-point bases), so a document diff reads like the truss
//! it describes.  Transition keys join two paths with `->`; the unicode
//! arrow `→` is accepted on input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use trusskit::computad::{Generator, Signature};
use trusskit::diagram::{make_diagram, CombinatorialDiagram, DiagrammaticTruss};
use trusskit::ops::bordism::Bordism;
use trusskit::{FinitePoset, Flavor, Label, Labelling, MonotoneMap, TrussLevel, TrussTower};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseDocument {
    Named(String),
    Explicit { len: usize, pairs: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelDocument {
    pub fibers: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub transitions: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrussDocument {
    pub kind: String,
    pub dim: usize,
    pub base: BaseDocument,
    pub levels: Vec<LevelDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ordered: bool,
    /// Generator labelling for `typecheck`, keyed like `labels`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorDocument {
    pub id: String,
    pub dim: usize,
    pub model: TrussDocument,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureDocument {
    pub dim: usize,
    pub generators: Vec<GeneratorDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub space: TrussDocument,
    pub diagram: TrussDocument,
    pub frame: TrussDocument,
}

fn poset_to_doc(p: &FinitePoset) -> BaseDocument {
    if *p == FinitePoset::point() {
        return BaseDocument::Named("point".to_string());
    }
    if p.len() > 0 && *p == FinitePoset::chain(p.len() - 1) {
        return BaseDocument::Named(format!("chain:{}", p.len() - 1));
    }
    BaseDocument::Explicit {
        len: p.len(),
        pairs: p.strict_pairs(),
    }
}

fn doc_to_poset(d: &BaseDocument) -> Result<FinitePoset, String> {
    match d {
        BaseDocument::Named(s) if s == "point" => Ok(FinitePoset::point()),
        BaseDocument::Named(s) => match s.strip_prefix("chain:") {
            Some(k) => {
                let k: usize = k.parse().map_err(|_| format!("bad chain length in '{s}'"))?;
                Ok(FinitePoset::chain(k))
            }
            None => Err(format!("unknown base '{s}' (expected 'point' or 'chain:k')")),
        },
        BaseDocument::Explicit { len, pairs } => FinitePoset::from_pairs(*len, pairs),
    }
}

pub fn label_to_json(l: &Label) -> Value {
    match l {
        Label::Unit => Value::Null,
        Label::Int(v) => Value::Number((*v).into()),
        Label::Str(s) => Value::String(s.clone()),
        Label::Pair(a, b) => Value::Array(vec![label_to_json(a), label_to_json(b)]),
    }
}

pub fn json_to_label(v: &Value) -> Result<Label, String> {
    match v {
        Value::Null => Ok(Label::Unit),
        Value::Number(n) => n
            .as_i64()
            .map(Label::Int)
            .ok_or_else(|| format!("label {n} is not an integer")),
        Value::String(s) => Ok(Label::Str(s.clone())),
        Value::Array(xs) if xs.len() == 2 => Ok(Label::pair(
            json_to_label(&xs[0])?,
            json_to_label(&xs[1])?,
        )),
        other => Err(format!("'{other}' is not a label (null, int, string or pair)")),
    }
}

pub fn tower_to_doc(t: &TrussTower) -> TrussDocument {
    let mut levels = Vec::with_capacity(t.dim());
    for k in 0..t.dim() {
        let lvl = &t.levels[k];
        let path = |idx: usize| t.path_string(&t.element_path(k, idx));
        let fibers = (0..lvl.fiber_len.len())
            .map(|idx| (path(idx), lvl.fiber_len[idx]))
            .collect();
        let transitions = lvl
            .transitions()
            .iter()
            .map(|(&(p, q), m)| (format!("{}->{}", path(p), path(q)), m.values().to_vec()))
            .collect();
        levels.push(LevelDocument { fibers, transitions });
    }
    let labels = t.labels.as_ref().map(|l| {
        l.values
            .iter()
            .enumerate()
            .map(|(idx, v)| (t.top_path_string(idx), label_to_json(v)))
            .collect()
    });
    TrussDocument {
        kind: match t.flavor {
            Flavor::Open => "open".to_string(),
            Flavor::Closed => "closed".to_string(),
        },
        dim: t.dim(),
        base: poset_to_doc(&t.base),
        levels,
        labels,
        ordered: t.labels.as_ref().map(|l| l.ordered).unwrap_or(false),
        generators: None,
    }
}

fn split_arrow(key: &str) -> Result<(&str, &str), String> {
    for sep in ["->", "→"] {
        if let Some((a, b)) = key.split_once(sep) {
            return Ok((a, b));
        }
    }
    Err(format!("transition key '{key}' is missing its '->'"))
}

pub fn doc_to_tower(doc: &TrussDocument) -> Result<TrussTower, String> {
    let flavor = match doc.kind.as_str() {
        "open" => Flavor::Open,
        "closed" => Flavor::Closed,
        k => return Err(format!("unknown kind '{k}' (expected 'open' or 'closed')")),
    };
    if doc.dim != doc.levels.len() {
        return Err(format!(
            "document says dim {} but has {} levels",
            doc.dim,
            doc.levels.len()
        ));
    }
    let base = doc_to_poset(&doc.base)?;
    let mut levels: Vec<TrussLevel> = Vec::new();
    for (k, ld) in doc.levels.iter().enumerate() {
        let partial = TrussTower::new(flavor, base.clone(), levels, None)?;
        let lbase = partial.level_poset(k)?;
        let mut fiber_len = vec![usize::MAX; lbase.len()];
        for (key, &m) in &ld.fibers {
            let idx = partial.path_index(&partial.parse_path(k, key)?)?;
            fiber_len[idx] = m;
        }
        if ld.fibers.len() != lbase.len() || fiber_len.contains(&usize::MAX) {
            return Err(format!(
                "level {} needs exactly one fiber per element ({} given, {} expected)",
                k + 1,
                ld.fibers.len(),
                lbase.len()
            ));
        }
        let mut transitions = BTreeMap::new();
        for (key, vals) in &ld.transitions {
            let (a, b) = split_arrow(key)?;
            let p = partial.path_index(&partial.parse_path(k, a)?)?;
            let q = partial.path_index(&partial.parse_path(k, b)?)?;
            let cod = match flavor {
                Flavor::Open => fiber_len[q],
                Flavor::Closed => fiber_len[p],
            };
            transitions.insert((p, q), MonotoneMap::new(cod, vals.clone())?);
        }
        levels = partial.levels;
        levels.push(TrussLevel::new(flavor, lbase, fiber_len, transitions)?);
    }
    let mut tower = TrussTower::new(flavor, base, levels, None)?;
    if let Some(lmap) = &doc.labels {
        let values = keyed_top_values(&tower, lmap, json_to_label)?;
        let labelling = if doc.ordered {
            Labelling::ordered(values)
        } else {
            Labelling::equality(values)
        };
        tower = tower.with_labels(labelling)?;
    }
    Ok(tower)
}

/// Resolve a path-keyed map into a dense vector over the top elements,
/// requiring every element to be covered exactly once.
pub fn keyed_top_values<T, V>(
    tower: &TrussTower,
    map: &BTreeMap<String, V>,
    parse: impl Fn(&V) -> Result<T, String>,
) -> Result<Vec<T>, String> {
    let mut values: Vec<Option<T>> = (0..tower.top_len()).map(|_| None).collect();
    for (key, v) in map {
        let idx = tower.path_index(&tower.parse_path(tower.dim(), key)?)?;
        if values[idx].replace(parse(v)?).is_some() {
            return Err(format!("element '{key}' is given twice"));
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(idx, v)| v.ok_or_else(|| format!("element '{}' is missing", tower.top_path_string(idx))))
        .collect()
}

pub fn generator_labelling(doc: &TrussDocument, tower: &TrussTower) -> Result<Vec<String>, String> {
    let map = doc
        .generators
        .as_ref()
        .ok_or("document has no 'generators' labelling")?;
    keyed_top_values(tower, map, |s: &String| Ok(s.clone()))
}

pub fn doc_to_bordism(doc: &TrussDocument) -> Result<Bordism, String> {
    Bordism::new(doc_to_tower(doc)?)
}

pub fn signature_to_doc(sig: &Signature) -> SignatureDocument {
    SignatureDocument {
        dim: sig.ambient_dim,
        generators: sig
            .generators
            .iter()
            .map(|g| GeneratorDocument {
                id: g.id.clone(),
                dim: g.dim,
                model: tower_to_doc(&g.local_model),
            })
            .collect(),
    }
}

pub fn doc_to_signature(doc: &SignatureDocument) -> Result<Signature, String> {
    let generators = doc
        .generators
        .iter()
        .map(|g| {
            Ok(Generator {
                id: g.id.clone(),
                dim: g.dim,
                local_model: doc_to_tower(&g.model)?,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Signature::new(doc.dim, generators)
}

pub fn diagram_to_doc(d: &CombinatorialDiagram) -> DiagramDocument {
    DiagramDocument {
        space: tower_to_doc(&d.space),
        diagram: tower_to_doc(&d.diagram.tower),
        frame: tower_to_doc(d.frame.tower()),
    }
}

pub fn doc_to_diagram(doc: &DiagramDocument) -> Result<CombinatorialDiagram, String> {
    let space = doc_to_tower(&doc.space)?;
    let diagram = DiagrammaticTruss::new(doc_to_tower(&doc.diagram)?)?;
    let frame = doc_to_bordism(&doc.frame)?;
    make_diagram(space, diagram, frame)
}

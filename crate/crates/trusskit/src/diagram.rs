//! Diagrammatic trusses and combinatorial manifold diagrams.
//!
//! A diagrammatic truss is an open labelled truss whose labels are
//! *dimension labels*: monotone integers in `0..=n` recording the dimension
//! of the stratum each element belongs to.  The key check is
//! progressivity — every element's label must agree with the singular
//! depth of its normalized atom, which rules out "horizontal" strata that
//! a projection to the last coordinate would not see.
//!
//! A combinatorial diagram places a diagrammatic truss over a closed shape
//! truss via a frame bordism; canonicalisation factors the frame and drops
//! the strata the frame cannot reach.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::fiber::Flavor;
use crate::label::{Label, Labelling};
use crate::normalize::normalize;
use crate::ops::bordism::{compose, Bordism};
use crate::ops::dual::dualize;
use crate::ops::stype::sdepth;
use crate::ops::subtruss::{atom_at, atoms, factorize, is_atom, smallest_subtruss, SubTruss};
use crate::tower::TrussTower;

/// Read a tower's labels as dimension labels: integers in `0..=dim`,
/// monotone along the top poset.
pub fn dimension_labels(t: &TrussTower) -> Result<Vec<usize>, String> {
    let n = t.dim();
    let labels = t.labels.as_ref().ok_or("dimension labels are missing")?;
    let mut out = Vec::with_capacity(labels.len());
    for (p, l) in labels.values.iter().enumerate() {
        let v = l
            .as_int()
            .ok_or_else(|| format!("label of element {p} is not an integer"))?;
        if v < 0 || v as usize > n {
            return Err(format!("label {v} of element {p} is outside 0..={n}"));
        }
        out.push(v as usize);
    }
    let poset = t.top_poset()?;
    for a in 0..poset.len() {
        for b in 0..poset.len() {
            if poset.le(a, b) && out[a] > out[b] {
                return Err(format!(
                    "dimension labels are not monotone: {a} <= {b} but {} > {}",
                    out[a], out[b]
                ));
            }
        }
    }
    Ok(out)
}

/// The product dimension labelling of an open tower over the point: each
/// top element is labelled by the tower dimension minus the length of its
/// innermost consecutive run of singular coordinates.  On grids this is
/// the standard string-diagram labelling — crossing-height germs count as
/// part of the top-dimensional regions, not as horizontal wires.
pub fn progressive_labels(t: &TrussTower) -> Result<Labelling, String> {
    if t.flavor != Flavor::Open || t.base.len() != 1 {
        return Err("the product labelling applies to open trusses over the point".to_string());
    }
    let n = t.dim();
    let mut values = Vec::with_capacity(t.top_len());
    for p in 0..t.top_len() {
        let mut run = 0;
        let mut idx = p;
        for k in (1..=n).rev() {
            let (parent, el) = t.levels[k - 1].element(idx);
            if !el.is_sing() {
                break;
            }
            run += 1;
            idx = parent;
        }
        values.push(Label::Int((n - run) as i64));
    }
    Ok(Labelling::ordered(values))
}

/// Whether a labelled open atom is progressive: every element's dimension
/// label equals the singular depth of its normalized subatom.
pub fn is_progressive(a: &TrussTower) -> Result<bool, String> {
    if !is_atom(a)? {
        return Err("progressivity is defined for atoms".to_string());
    }
    let ell = dimension_labels(a)?;
    for p in 0..a.top_len() {
        let sub = atom_at(a, p)?;
        if sdepth(&normalize(&sub.tower)?.nf) != ell[p] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether a labelled open tower is diagrammatic: dimension labels are
/// well-formed and every atom is progressive.
pub fn is_diagrammatic(t: &TrussTower) -> Result<bool, String> {
    dimension_labels(t)?;
    for p in 0..t.top_len() {
        let sub = atom_at(t, p)?;
        if !is_progressive(&sub.tower)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An open truss together with validated dimension labels; see
/// [`is_diagrammatic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagrammaticTruss {
    pub tower: TrussTower,
}

impl DiagrammaticTruss {
    pub fn new(tower: TrussTower) -> Result<Self, String> {
        if !is_diagrammatic(&tower)? {
            return Err("the labelled tower is not diagrammatic".to_string());
        }
        Ok(DiagrammaticTruss { tower })
    }

    pub fn dimension_labels(&self) -> Vec<usize> {
        dimension_labels(&self.tower).expect("checked at construction")
    }
}

/// All distinct subtrusses of an open truss over the point: closures of
/// single elements, closed under union.  Errors past `bound` many.
fn enumerate_subtrusses(t: &TrussTower, bound: usize) -> Result<Vec<SubTruss>, String> {
    let dim = t.dim();
    let mut subs: Vec<SubTruss> = Vec::new();
    let mut tops: Vec<BTreeSet<usize>> = Vec::new();
    let mut work: Vec<BTreeSet<usize>> = (0..t.top_len())
        .map(|p| {
            let mut s = BTreeSet::new();
            s.insert(p);
            s
        })
        .collect();
    while let Some(seed) = work.pop() {
        let sub = smallest_subtruss(t, &seed)?;
        let top: BTreeSet<usize> = sub.level_elements[dim].iter().copied().collect();
        if tops.contains(&top) {
            continue;
        }
        if subs.len() >= bound {
            return Err(format!(
                "more than {bound} subtrusses to check; raise the bound"
            ));
        }
        for old in &tops {
            work.push(old.union(&top).copied().collect());
        }
        tops.push(top);
        subs.push(sub);
    }
    Ok(subs)
}

/// Whether a bordism of diagrammatic trusses is submersive: restricted to
/// each checked subtruss of its source, the active part of the restriction
/// has the same normal form on both ends.  Fast mode checks the atoms of
/// the source; exhaustive mode checks every subtruss whose normal form is
/// an atom, up to `bound` many subtrusses.
pub fn is_submersive(f: &Bordism, exhaustive: bool, bound: usize) -> Result<bool, String> {
    let src = f.source()?;
    dimension_labels(&src)?;
    dimension_labels(&f.target()?)?;
    let candidates = if exhaustive {
        let mut kept = Vec::new();
        for sub in enumerate_subtrusses(&src, bound)? {
            if is_atom(&normalize(&sub.tower)?.nf)? {
                kept.push(sub);
            }
        }
        kept
    } else {
        atoms(&src)?
    };
    for sub in &candidates {
        let restricted = compose(&sub.embedding, f)?;
        let fact = factorize(&restricted)?;
        if normalize(&sub.tower)?.nf != normalize(&fact.middle)?.nf {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A diagrammatic truss framed over a closed shape truss.  The frame runs
/// from the dualized shape to the underlying truss of the diagram and
/// carries no labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialDiagram {
    pub space: TrussTower,
    pub diagram: DiagrammaticTruss,
    pub frame: Bordism,
}

pub fn make_diagram(
    space: TrussTower,
    diagram: DiagrammaticTruss,
    frame: Bordism,
) -> Result<CombinatorialDiagram, String> {
    if space.flavor != Flavor::Closed {
        return Err("the diagram space must be a closed truss".to_string());
    }
    if space.labels.is_some() {
        return Err("the diagram space carries no labels".to_string());
    }
    let frame = Bordism::new(frame.tower().without_labels())?;
    if frame.flavor() != Flavor::Open {
        return Err("the frame must be an open bordism".to_string());
    }
    if frame.source()? != dualize(&space) {
        return Err("the frame source is not the dualized space".to_string());
    }
    if frame.target()? != diagram.tower.without_labels() {
        return Err("the frame target is not the underlying diagram truss".to_string());
    }
    Ok(CombinatorialDiagram {
        space,
        diagram,
        frame,
    })
}

/// A diagram is canonical when its frame is active — no stratum of the
/// diagram lies outside the frame's reach.
pub fn is_canonical(d: &CombinatorialDiagram) -> Result<bool, String> {
    Ok(d.frame.classify()?.active)
}

/// Factor the frame and restrict the diagram to the reachable part.  The
/// result has an active frame; on already-canonical diagrams this is the
/// identity.
pub fn canonicalise(d: &CombinatorialDiagram) -> Result<CombinatorialDiagram, String> {
    let fact = factorize(&d.frame)?;
    let labels = d
        .diagram
        .tower
        .labels
        .as_ref()
        .ok_or("diagram labels are missing")?;
    let values: Vec<Label> = fact
        .middle_selection
        .iter()
        .map(|&q| labels.values[q].clone())
        .collect();
    let restricted = fact.middle.with_labels(Labelling {
        values,
        ordered: labels.ordered,
    })?;
    make_diagram(
        d.space.clone(),
        DiagrammaticTruss::new(restricted)?,
        fact.active,
    )
}

/// Check that `g` is a map of diagrams over one space: a bordism between
/// the two diagrammatic trusses whose triangle with the frames commutes.
pub fn check_diagram_map(
    d0: &CombinatorialDiagram,
    d1: &CombinatorialDiagram,
    g: &Bordism,
) -> Result<(), String> {
    if d0.space != d1.space {
        return Err("diagram maps live over one space".to_string());
    }
    if g.source()? != d0.diagram.tower {
        return Err("the map source is not the first diagram".to_string());
    }
    if g.target()? != d1.diagram.tower {
        return Err("the map target is not the second diagram".to_string());
    }
    if compose(&d0.frame, g)? != d1.frame {
        return Err("the map does not commute with the frames".to_string());
    }
    Ok(())
}

/// Compose two diagram maps, checking both and the composite triangle.
pub fn compose_diagram_map(
    d0: &CombinatorialDiagram,
    d1: &CombinatorialDiagram,
    d2: &CombinatorialDiagram,
    g01: &Bordism,
    g12: &Bordism,
) -> Result<Bordism, String> {
    check_diagram_map(d0, d1, g01)?;
    check_diagram_map(d1, d2, g12)?;
    let h = compose(g01, g12)?;
    check_diagram_map(d0, d2, &h)?;
    Ok(h)
}

//! Truss bordisms: trusses over the arrow poset `{0 < 1}`, regarded as
//! combinatorial cobordisms from their fiber over `0` to their fiber over
//! `1`.  Collages turn maps of trusses into bordisms, `compose` stacks two
//! bordisms end to end, and `classify` recognises the three structural
//! classes (degeneracies, inert inclusions, active maps) that drive
//! factorization and normalization.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::fiber::{FiberElement, Flavor};
use crate::label::Labelling;
use crate::level::TrussLevel;
use crate::order::{FinitePoset, MonotoneMap};
use crate::tower::TrussTower;

/// A truss whose base is the arrow poset `{0 < 1}`.
///
/// The fiber tower over `0` is the source, the fiber tower over `1` the
/// target; which of the two plays the role of "map domain" depends on the
/// flavor and is a property of the classification, not of the bordism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bordism {
    tower: TrussTower,
}

/// Structural classification of a bordism.  The three classes are not
/// exclusive: degeneracies are in particular active, and the identity is
/// all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BordismClass {
    pub degeneracy: bool,
    pub inert: bool,
    pub active: bool,
}

/// A strict levelwise map between towers over the same base: a base map
/// together with, for each level, one monotone fiber map per source
/// element of the level below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerMap {
    pub base_map: Vec<usize>,
    pub fiber_maps: Vec<Vec<MonotoneMap>>,
}

impl TowerMap {
    /// The identity map on a tower.
    pub fn identity(tower: &TrussTower) -> TowerMap {
        let base_map = (0..tower.base.len()).collect();
        let mut fiber_maps = Vec::with_capacity(tower.dim());
        for level in &tower.levels {
            fiber_maps.push(
                level
                    .fiber_len
                    .iter()
                    .map(|&m| MonotoneMap::identity(m))
                    .collect(),
            );
        }
        TowerMap {
            base_map,
            fiber_maps,
        }
    }
}

impl Bordism {
    /// Wrap a tower as a bordism.  The base must be the arrow poset.
    pub fn new(tower: TrussTower) -> Result<Bordism, String> {
        if tower.base != FinitePoset::chain(1) {
            return Err("a bordism is a truss over the arrow poset {0 < 1}".to_string());
        }
        Ok(Bordism { tower })
    }

    pub fn tower(&self) -> &TrussTower {
        &self.tower
    }

    pub fn into_tower(self) -> TrussTower {
        self.tower
    }

    pub fn flavor(&self) -> Flavor {
        self.tower.flavor
    }

    pub fn dim(&self) -> usize {
        self.tower.dim()
    }

    /// The fiber tower over `0`.
    pub fn source(&self) -> Result<TrussTower, String> {
        self.tower.base_change(&FinitePoset::point(), &[0])
    }

    /// The fiber tower over `1`.
    pub fn target(&self) -> Result<TrussTower, String> {
        self.tower.base_change(&FinitePoset::point(), &[1])
    }

    /// For each top element of the source (resp. target), its index in the
    /// bordism's top poset.
    pub fn end_inclusions(&self) -> Result<(Vec<usize>, Vec<usize>), String> {
        let point = FinitePoset::point();
        let (_, src) = self.tower.base_change_with_top_map(&point, &[0])?;
        let (_, tgt) = self.tower.base_change_with_top_map(&point, &[1])?;
        Ok((src, tgt))
    }

    /// Classify the bordism.  For open bordisms the underlying map runs
    /// source-to-target; for closed ones, target-to-source.  Either way the
    /// conditions are phrased on the bordism's own top poset.
    pub fn classify(&self) -> Result<BordismClass, String> {
        let p = self.tower.top_poset()?;
        let (src, tgt) = self.end_inclusions()?;
        let class = match self.tower.flavor {
            Flavor::Open => classify_open(&p, &src, &tgt),
            Flavor::Closed => classify_closed(&p, &src, &tgt),
        };
        Ok(class)
    }
}

/// Open classification.  The collage encodes a map sigma from source top
/// elements to target top elements, defined where each source element has a
/// minimum target element above it.
fn classify_open(p: &FinitePoset, src: &[usize], tgt: &[usize]) -> BordismClass {
    let sigma = pointwise_extremum(p, src, tgt, true);
    let collage_of = |s: &[Option<usize>]| -> bool {
        src.iter().enumerate().all(|(i, &su)| {
            tgt.iter().all(|&tw| match s[i] {
                Some(si) => p.le(su, tw) == p.le(tgt[si], tw),
                None => true,
            })
        })
    };
    let total = sigma.iter().all(|s| s.is_some());
    let degeneracy = total && surjective(&sigma, tgt.len()) && collage_of(&sigma);
    let inert = total
        && injective(&sigma)
        && order_reflecting(p, src, tgt, &sigma)
        && collage_of(&sigma);
    let active = tgt
        .iter()
        .all(|&tw| src.iter().any(|&su| p.le(su, tw)));
    BordismClass {
        degeneracy,
        inert,
        active,
    }
}

/// Closed classification: the map runs target-to-source, so inertness asks
/// for a maximum source element below each target element.  Degeneracies
/// keep the open formula (a closed degeneracy is the collage of a
/// surjection in the same direction).
fn classify_closed(p: &FinitePoset, src: &[usize], tgt: &[usize]) -> BordismClass {
    let sigma = pointwise_extremum(p, src, tgt, true);
    let degeneracy = sigma.iter().all(|s| s.is_some())
        && surjective(&sigma, tgt.len())
        && src.iter().enumerate().all(|(i, &su)| {
            tgt.iter()
                .all(|&tw| p.le(su, tw) == p.le(tgt[sigma[i].unwrap()], tw))
        });
    let tau = pointwise_extremum(p, tgt, src, false);
    let inert = tau.iter().all(|t| t.is_some())
        && injective(&tau)
        && order_reflecting(p, tgt, src, &tau)
        && tgt.iter().enumerate().all(|(j, &tw)| {
            src.iter()
                .all(|&su| p.le(su, tw) == p.le(su, src[tau[j].unwrap()]))
        });
    let active = src
        .iter()
        .all(|&su| tgt.iter().any(|&tw| p.le(su, tw)));
    BordismClass {
        degeneracy,
        inert,
        active,
    }
}

/// For each element of `from`, the minimum (`above = true`) element of `to`
/// above it, or the maximum element of `to` below it (`above = false`),
/// when that extremum exists.  Indices into `to`.
fn pointwise_extremum(
    p: &FinitePoset,
    from: &[usize],
    to: &[usize],
    above: bool,
) -> Vec<Option<usize>> {
    from.iter()
        .map(|&f| {
            let related = |t: usize| if above { p.le(f, t) } else { p.le(t, f) };
            let candidates: Vec<usize> = (0..to.len()).filter(|&j| related(to[j])).collect();
            candidates.iter().copied().find(|&j| {
                candidates.iter().all(|&j2| {
                    if above {
                        p.le(to[j], to[j2])
                    } else {
                        p.le(to[j2], to[j])
                    }
                })
            })
        })
        .collect()
}

fn surjective(sigma: &[Option<usize>], codomain: usize) -> bool {
    (0..codomain).all(|j| sigma.iter().any(|&s| s == Some(j)))
}

fn injective(sigma: &[Option<usize>]) -> bool {
    for (i, a) in sigma.iter().enumerate() {
        for b in sigma.iter().skip(i + 1) {
            if a == b {
                return false;
            }
        }
    }
    true
}

/// sigma(i) <= sigma(j) implies i <= j, comparing through the ambient poset.
fn order_reflecting(
    p: &FinitePoset,
    from: &[usize],
    to: &[usize],
    sigma: &[Option<usize>],
) -> bool {
    for i in 0..from.len() {
        for j in 0..from.len() {
            if let (Some(si), Some(sj)) = (sigma[i], sigma[j]) {
                if p.le(to[si], to[sj]) && !p.le(from[i], from[j]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Bookkeeping while assembling a bordism level by level: for each element
/// of the current level, which side of the arrow it lies over and its index
/// in that side's tower at the same level.
pub(crate) struct Sides {
    pub(crate) side: Vec<u8>,
    pub(crate) at: Vec<usize>,
}

impl Sides {
    pub(crate) fn seed() -> Sides {
        Sides {
            side: vec![0, 1],
            at: vec![0, 0],
        }
    }

    /// Extend the bookkeeping across one level: `level` is the freshly
    /// built bordism level, `first`/`second` the towers on sides 0 and 1.
    pub(crate) fn extend(&self, level: &TrussLevel, first: &TrussLevel, second: &TrussLevel) -> Sides {
        let mut side = Vec::with_capacity(level.total_len());
        let mut at = Vec::with_capacity(level.total_len());
        for (p, el) in level.elements() {
            let s = self.side[p];
            let own = if s == 0 { first } else { second };
            side.push(s);
            at.push(own.element_index(self.at[p], el));
        }
        Sides { side, at }
    }
}

/// Combine labels across the two sides of a bordism level: present only
/// when both sides are labelled.
pub(crate) fn combined_labels(
    sides: &Sides,
    first: Option<&Labelling>,
    second: Option<&Labelling>,
) -> Option<Labelling> {
    let (f, s) = (first?, second?);
    let values = sides
        .side
        .iter()
        .zip(&sides.at)
        .map(|(&sd, &i)| {
            if sd == 0 {
                f.values[i].clone()
            } else {
                s.values[i].clone()
            }
        })
        .collect();
    Some(Labelling {
        values,
        ordered: f.ordered && s.ordered,
    })
}

/// Image of a fiber element under a monotone fiber map, for open fibers:
/// regular elements map to regular elements, and a singular element lands
/// on the singular (gap 1) or regular (gap 0) element its span collapses
/// to.  A gap of width two or more has no single image and is rejected.
fn open_element_image(map: &MonotoneMap, el: FiberElement) -> Result<FiberElement, String> {
    match el {
        FiberElement::Reg(i) => Ok(FiberElement::Reg(map.at(i))),
        FiberElement::Sing(i) => match map.at(i + 1) - map.at(i) {
            0 => Ok(FiberElement::Reg(map.at(i))),
            1 => Ok(FiberElement::Sing(map.at(i))),
            w => Err(format!(
                "fiber map {map:?} spreads singular element s{i} over {w} spans"
            )),
        },
    }
}

/// The collage of a strict map of open towers over the point: a bordism
/// from `src` to `dst` whose cross relations and transitions are induced by
/// the map.  Fails if the map data is not a strict map (wrong shapes,
/// non-monotone images, or incoherent transitions).
pub fn collage(src: &TrussTower, dst: &TrussTower, map: &TowerMap) -> Result<Bordism, String> {
    if src.flavor != Flavor::Open || dst.flavor != Flavor::Open {
        return Err("collage is defined for open towers".to_string());
    }
    if src.base.len() != 1 || dst.base.len() != 1 {
        return Err("collage expects towers over the point".to_string());
    }
    if src.dim() != dst.dim() {
        return Err(format!(
            "collage needs towers of equal height, got {} and {}",
            src.dim(),
            dst.dim()
        ));
    }
    if map.base_map != vec![0] || map.fiber_maps.len() != src.dim() {
        return Err("tower map shape does not match the towers".to_string());
    }

    // sigma: src level-k elements -> dst level-k elements, grown level by level.
    let mut sigma: Vec<usize> = vec![0];
    let mut sides = Sides::seed();
    let mut base = FinitePoset::chain(1);
    let mut levels = Vec::with_capacity(src.dim());

    for k in 0..src.dim() {
        let sl = &src.levels[k];
        let dl = &dst.levels[k];
        let maps = &map.fiber_maps[k];
        if maps.len() != sl.fiber_len.len() {
            return Err(format!("level {} expects {} fiber maps", k + 1, sl.fiber_len.len()));
        }
        for (e, m) in maps.iter().enumerate() {
            if m.dom() != sl.fiber_len[e] || m.cod() != dl.fiber_len[sigma[e]] {
                return Err(format!(
                    "fiber map {m:?} at level {} element {e} does not match fibers [{}] -> [{}]",
                    k + 1,
                    sl.fiber_len[e],
                    dl.fiber_len[sigma[e]]
                ));
            }
        }

        let fiber_len: Vec<usize> = sides
            .side
            .iter()
            .zip(&sides.at)
            .map(|(&sd, &e)| if sd == 0 { sl.fiber_len[e] } else { dl.fiber_len[e] })
            .collect();
        let mut transitions = BTreeMap::new();
        for (u, w) in base.strict_pairs() {
            let t = match (sides.side[u], sides.side[w]) {
                (0, 0) => sl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "source tower misses a transition".to_string())?,
                (1, 1) => dl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "target tower misses a transition".to_string())?,
                (0, 1) => {
                    let (a, b) = (sides.at[u], sides.at[w]);
                    let t = dl.transition(sigma[a], b).ok_or_else(|| {
                        format!(
                            "map is not order-preserving: image {} of {a} is unrelated to {b}",
                            sigma[a]
                        )
                    })?;
                    maps[a].compose(&t)?
                }
                _ => return Err("collage relates a target element below a source element".to_string()),
            };
            transitions.insert((u, w), t);
        }
        let level = TrussLevel::new(Flavor::Open, base.clone(), fiber_len, transitions)?;
        level.check_functorial()?;

        // Push sigma one level up through the fiber maps.  Only deeper
        // levels need element images, so a map that spreads a singular
        // element over several spans is fine at the top level.
        if k + 1 < src.dim() {
            let mut next_sigma = Vec::with_capacity(sl.total_len());
            for (e, el) in sl.elements() {
                let img = open_element_image(&maps[e], el)?;
                next_sigma.push(dl.element_index(sigma[e], img));
            }
            let sp = src.level_poset(k + 1)?;
            let dp = dst.level_poset(k + 1)?;
            if !sp.is_monotone_map_to(&dp, &next_sigma) {
                return Err(format!(
                    "fiber maps at level {} do not assemble to an order-preserving map",
                    k + 1
                ));
            }
            sigma = next_sigma;
        }
        sides = sides.extend(&level, sl, dl);
        base = level.total_poset()?;
        levels.push(level);
    }

    let labels = combined_labels(&sides, src.labels.as_ref(), dst.labels.as_ref());
    let tower = TrussTower::new(Flavor::Open, FinitePoset::chain(1), levels, labels)?;
    Bordism::new(tower)
}

/// The collage of an inert inclusion of closed towers over the point,
/// oriented ambient-to-sub: the resulting bordism has the ambient tower as
/// source and the subtower as target.  `inclusion.fiber_maps[k][e]` is the
/// inert window embedding the fiber of sub element `e` into the fiber of
/// its image.
pub fn closed_inert_collage(
    ambient: &TrussTower,
    sub: &TrussTower,
    inclusion: &TowerMap,
) -> Result<Bordism, String> {
    if ambient.flavor != Flavor::Closed || sub.flavor != Flavor::Closed {
        return Err("inert collage is defined for closed towers".to_string());
    }
    if ambient.base.len() != 1 || sub.base.len() != 1 {
        return Err("inert collage expects towers over the point".to_string());
    }
    if ambient.dim() != sub.dim() {
        return Err(format!(
            "inert collage needs towers of equal height, got {} and {}",
            ambient.dim(),
            sub.dim()
        ));
    }
    if inclusion.base_map != vec![0] || inclusion.fiber_maps.len() != sub.dim() {
        return Err("tower map shape does not match the towers".to_string());
    }

    // sigma: sub level-k elements -> ambient level-k elements.
    let mut sigma: Vec<usize> = vec![0];
    let mut sides = Sides::seed();
    let mut base = FinitePoset::chain(1);
    let mut levels = Vec::with_capacity(sub.dim());

    for k in 0..sub.dim() {
        let al = &ambient.levels[k];
        let ul = &sub.levels[k];
        let maps = &inclusion.fiber_maps[k];
        if maps.len() != ul.fiber_len.len() {
            return Err(format!("level {} expects {} fiber maps", k + 1, ul.fiber_len.len()));
        }
        for (e, m) in maps.iter().enumerate() {
            if !m.is_inert() {
                return Err(format!("fiber map {m:?} at level {} is not inert", k + 1));
            }
            if m.dom() != ul.fiber_len[e] || m.cod() != al.fiber_len[sigma[e]] {
                return Err(format!(
                    "fiber map {m:?} at level {} element {e} does not match fibers [{}] -> [{}]",
                    k + 1,
                    ul.fiber_len[e],
                    al.fiber_len[sigma[e]]
                ));
            }
        }

        let fiber_len: Vec<usize> = sides
            .side
            .iter()
            .zip(&sides.at)
            .map(|(&sd, &e)| if sd == 0 { al.fiber_len[e] } else { ul.fiber_len[e] })
            .collect();
        let mut transitions = BTreeMap::new();
        for (u, w) in base.strict_pairs() {
            let t = match (sides.side[u], sides.side[w]) {
                (0, 0) => al
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "ambient tower misses a transition".to_string())?,
                (1, 1) => ul
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "subtower misses a transition".to_string())?,
                (0, 1) => {
                    let (a, b) = (sides.at[u], sides.at[w]);
                    // Closed transitions run contravariantly, so the cross
                    // transition restricts the ambient one along the window.
                    let t = al.transition(a, sigma[b]).ok_or_else(|| {
                        format!("inclusion image {} of {b} is unrelated to {a}", sigma[b])
                    })?;
                    maps[b].compose(&t)?
                }
                _ => {
                    return Err(
                        "inert collage relates a sub element below an ambient element".to_string()
                    )
                }
            };
            transitions.insert((u, w), t);
        }
        let level = TrussLevel::new(Flavor::Closed, base.clone(), fiber_len, transitions)?;
        level.check_functorial()?;

        // Push sigma one level up: an inert window shifts indices by its
        // left endpoint.
        if k + 1 < sub.dim() {
            let mut next_sigma = Vec::with_capacity(ul.total_len());
            for (e, el) in ul.elements() {
                let off = maps[e].at(0);
                let img = match el {
                    FiberElement::Reg(i) => FiberElement::Reg(off + i),
                    FiberElement::Sing(i) => FiberElement::Sing(off + i),
                };
                next_sigma.push(al.element_index(sigma[e], img));
            }
            let up = sub.level_poset(k + 1)?;
            let ap = ambient.level_poset(k + 1)?;
            if !up.is_monotone_map_to(&ap, &next_sigma) {
                return Err(format!(
                    "inert windows at level {} do not assemble to an order-preserving map",
                    k + 1
                ));
            }
            sigma = next_sigma;
        }
        sides = sides.extend(&level, al, ul);
        base = level.total_poset()?;
        levels.push(level);
    }

    let labels = combined_labels(&sides, ambient.labels.as_ref(), sub.labels.as_ref());
    let tower = TrussTower::new(Flavor::Closed, FinitePoset::chain(1), levels, labels)?;
    Bordism::new(tower)
}

/// The identity bordism on a tower over the point.
pub fn identity_bordism(tower: &TrussTower) -> Result<Bordism, String> {
    let id = TowerMap::identity(tower);
    match tower.flavor {
        Flavor::Open => collage(tower, tower, &id),
        Flavor::Closed => closed_inert_collage(tower, tower, &id),
    }
}

/// Compose two bordisms: the target of `f` must equal the source of `g` as
/// an unlabelled tower.  Cross transitions are routed through the shared
/// middle tower; functoriality of the result makes the composite
/// independent of the interpolant chosen.
pub fn compose(f: &Bordism, g: &Bordism) -> Result<Bordism, String> {
    if f.flavor() != g.flavor() {
        return Err("cannot compose bordisms of different flavors".to_string());
    }
    if f.dim() != g.dim() {
        return Err("cannot compose bordisms of different heights".to_string());
    }
    let flavor = f.flavor();
    let point = FinitePoset::point();
    let (mid, f_maps) = f
        .tower()
        .base_change_with_level_maps(&point, &[1])?;
    let (g_src, g_maps) = g
        .tower()
        .base_change_with_level_maps(&point, &[0])?;
    if mid.without_labels() != g_src.without_labels() {
        return Err("target of the first bordism differs from source of the second".to_string());
    }

    let ft = f.tower();
    let gt = g.tower();
    // Side indices refer to the full level posets of f and g: the
    // composite's source lies over f's base element 0, its target over g's
    // base element 1.
    let mut sides = Sides {
        side: vec![0, 1],
        at: vec![0, 1],
    };
    let mut base = FinitePoset::chain(1);
    let mut levels = Vec::with_capacity(f.dim());
    let mut f_posets = Vec::with_capacity(f.dim() + 1);
    let mut g_posets = Vec::with_capacity(f.dim() + 1);
    for k in 0..=f.dim() {
        f_posets.push(ft.level_poset(k)?);
        g_posets.push(gt.level_poset(k)?);
    }

    for k in 0..f.dim() {
        let fl = &ft.levels[k];
        let gl = &gt.levels[k];
        let fiber_len: Vec<usize> = sides
            .side
            .iter()
            .zip(&sides.at)
            .map(|(&sd, &e)| if sd == 0 { fl.fiber_len[e] } else { gl.fiber_len[e] })
            .collect();
        let mut transitions = BTreeMap::new();
        for (u, w) in base.strict_pairs() {
            let t = match (sides.side[u], sides.side[w]) {
                (0, 0) => fl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "first bordism misses a transition".to_string())?,
                (1, 1) => gl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "second bordism misses a transition".to_string())?,
                (0, 1) => {
                    let (a, b) = (sides.at[u], sides.at[w]);
                    let v = (0..f_maps[k].len())
                        .find(|&v| {
                            f_posets[k].le(a, f_maps[k][v]) && g_posets[k].le(g_maps[k][v], b)
                        })
                        .ok_or_else(|| {
                            format!(
                                "no interpolant in the middle tower between {a} and {b} at level {k}"
                            )
                        })?;
                    let tf = fl
                        .transition(a, f_maps[k][v])
                        .ok_or_else(|| "first bordism misses a transition".to_string())?;
                    let tg = gl
                        .transition(g_maps[k][v], b)
                        .ok_or_else(|| "second bordism misses a transition".to_string())?;
                    match flavor {
                        Flavor::Open => tf.compose(&tg)?,
                        Flavor::Closed => tg.compose(&tf)?,
                    }
                }
                _ => return Err("composite relates a later element below an earlier one".to_string()),
            };
            transitions.insert((u, w), t);
        }
        let level = TrussLevel::new(flavor, base.clone(), fiber_len, transitions)?;
        level
            .check_functorial()
            .map_err(|e| format!("composite is not functorial at level {}: {e}", k + 1))?;
        sides = sides.extend(&level, fl, gl);
        base = level.total_poset()?;
        levels.push(level);
    }

    // Side indices point into the full towers, whose labellings cover both
    // ends, so label lookup works the same as for collages.
    let labels = combined_labels(&sides, ft.labels.as_ref(), gt.labels.as_ref());
    let tower = TrussTower::new(flavor, FinitePoset::chain(1), levels, labels)?;
    Bordism::new(tower)
}

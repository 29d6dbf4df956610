//! Subtruss closure.  The smallest subtruss of a truss containing a given
//! set of top elements is computed as a fixpoint of three closure rules —
//! directional closure in each level poset (upward for open trusses,
//! downward for closed ones), projection to the level below, and
//! fiberwise convex fill out to proper window endpoints — plus a canonical
//! seeding step for base elements whose fiber the rules leave untouched.
//! Atoms, cells, and the active/inert factorization of bordisms all reduce
//! to this closure.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::fiber::{fiber_index, fiber_order, FiberElement, Flavor};
use crate::label::Labelling;
use crate::level::TrussLevel;
use crate::order::{FinitePoset, MonotoneMap};
use crate::tower::TrussTower;

use super::bordism::{
    closed_inert_collage, collage, combined_labels, compose, Bordism, Sides, TowerMap,
};

/// A subtruss of an ambient truss over the point: the subtruss itself, the
/// ambient index of every subtruss element, and the inert embedding as a
/// bordism (subtruss-to-ambient for open trusses, ambient-to-subtruss for
/// closed ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubTruss {
    pub tower: TrussTower,
    /// `level_elements[k][e]` is the ambient level-`k` index of sub element `e`.
    pub level_elements: Vec<Vec<usize>>,
    pub embedding: Bordism,
}

/// The active/inert factorization of an open bordism: `active` runs from
/// the bordism's source onto the `middle` truss, `inert` embeds the middle
/// into the bordism's target, and composing the two recovers the bordism
/// exactly.  `middle_selection` lists, for each top element of the middle,
/// its index in the target's top poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub active: Bordism,
    pub inert: Bordism,
    pub middle: TrussTower,
    pub middle_selection: Vec<usize>,
}

/// One pass of the monotone closure rules; returns whether anything grew.
fn close_step(tower: &TrussTower, posets: &[FinitePoset], sel: &mut [BTreeSet<usize>]) -> bool {
    let flavor = tower.flavor;
    let mut changed = false;
    for k in 1..=tower.dim() {
        let level = &tower.levels[k - 1];
        // Directional closure in the level poset.
        let poset = &posets[k];
        let mut add = BTreeSet::new();
        for &u in sel[k].iter() {
            for v in 0..poset.len() {
                let related = match flavor {
                    Flavor::Open => poset.le(u, v),
                    Flavor::Closed => poset.le(v, u),
                };
                if related && !sel[k].contains(&v) {
                    add.insert(v);
                }
            }
        }
        changed |= !add.is_empty();
        sel[k].extend(add);

        // Projection to the level below.
        let below: Vec<usize> = sel[k].iter().map(|&u| level.element(u).0).collect();
        for p in below {
            changed |= sel[k - 1].insert(p);
        }

        // Fiberwise convex fill, widened to proper window endpoints (even
        // positions in the fiber order for either flavor).
        let mut span: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for &u in sel[k].iter() {
            let (p, el) = level.element(u);
            let pos = fiber_index(flavor, level.fiber_len[p], el);
            let e = span.entry(p).or_insert((pos, pos));
            e.0 = e.0.min(pos);
            e.1 = e.1.max(pos);
        }
        for (p, (mut lo, mut hi)) in span {
            if lo % 2 == 1 {
                lo -= 1;
            }
            if hi % 2 == 1 {
                hi += 1;
            }
            let order = fiber_order(flavor, level.fiber_len[p]);
            for pos in lo..=hi {
                changed |= sel[k].insert(level.element_index(p, order[pos]));
            }
        }
    }
    changed
}

fn close(tower: &TrussTower, posets: &[FinitePoset], sel: &mut [BTreeSet<usize>]) {
    while close_step(tower, posets, sel) {}
}

/// Selected base elements whose fiber the closure rules never touch still
/// need a fiber window.  Each such hole is seeded with the proper singleton
/// (a regular element for open trusses, a singular one for closed trusses)
/// whose closure grows the selection least, scanning holes and candidate
/// seeds in canonical order.
fn complete(tower: &TrussTower, posets: &[FinitePoset], sel: &mut Vec<BTreeSet<usize>>) {
    let flavor = tower.flavor;
    loop {
        let mut hole = None;
        'scan: for k in 1..=tower.dim() {
            let level = &tower.levels[k - 1];
            let occupied: BTreeSet<usize> = sel[k].iter().map(|&u| level.element(u).0).collect();
            for &p in sel[k - 1].iter() {
                if !occupied.contains(&p) {
                    hole = Some((k, p));
                    break 'scan;
                }
            }
        }
        let Some((k, p)) = hole else { break };
        let level = &tower.levels[k - 1];
        let m = level.fiber_len[p];
        let mut best: Option<(usize, Vec<BTreeSet<usize>>)> = None;
        for i in 0..=m {
            let el = match flavor {
                Flavor::Open => FiberElement::Reg(i),
                Flavor::Closed => FiberElement::Sing(i),
            };
            let mut cand = sel.clone();
            cand[k].insert(level.element_index(p, el));
            close(tower, posets, &mut cand);
            let total: usize = cand.iter().map(|s| s.len()).sum();
            if best.as_ref().map_or(true, |(t, _)| total < *t) {
                best = Some((total, cand));
            }
        }
        *sel = best.expect("every fiber offers a seed").1;
    }
}

/// Build the subtruss a closed selection carves out, together with its
/// inert embedding.
fn extract(
    tower: &TrussTower,
    posets: &[FinitePoset],
    sel: &[BTreeSet<usize>],
) -> Result<SubTruss, String> {
    let flavor = tower.flavor;
    let dim = tower.dim();
    let level_elements: Vec<Vec<usize>> = sel.iter().map(|s| s.iter().copied().collect()).collect();

    let mut levels = Vec::with_capacity(dim);
    let mut windows = Vec::with_capacity(dim);
    let mut base = FinitePoset::point();
    for k in 1..=dim {
        let amb = &tower.levels[k - 1];
        let subbase = &level_elements[k - 1];
        let mut offs = Vec::with_capacity(subbase.len());
        let mut lens = Vec::with_capacity(subbase.len());
        let mut wmaps = Vec::with_capacity(subbase.len());
        for &p in subbase {
            let positions: Vec<usize> = level_elements[k]
                .iter()
                .map(|&u| amb.element(u))
                .filter(|&(q, _)| q == p)
                .map(|(q, el)| fiber_index(flavor, amb.fiber_len[q], el))
                .collect();
            let (&lo, &hi) = (
                positions.first().ok_or("selection left a fiber empty")?,
                positions.last().ok_or("selection left a fiber empty")?,
            );
            if lo % 2 != 0 || hi % 2 != 0 || positions.len() != hi - lo + 1 {
                return Err("selection is not a fiberwise window".to_string());
            }
            let (a, b) = (lo / 2, hi / 2);
            offs.push(a);
            lens.push(b - a);
            wmaps.push(MonotoneMap::new(amb.fiber_len[p], (a..=b).collect())?);
        }

        let mut transitions = BTreeMap::new();
        for (pi, qi) in base.strict_pairs() {
            let (p, q) = (subbase[pi], subbase[qi]);
            let t = amb
                .transition(p, q)
                .ok_or("subtruss base pair is unrelated in the ambient truss")?;
            let (from, off_from, off_to, cod) = match flavor {
                Flavor::Open => (lens[pi], offs[pi], offs[qi], lens[qi]),
                Flavor::Closed => (lens[qi], offs[qi], offs[pi], lens[pi]),
            };
            let vals = (0..=from)
                .map(|i| {
                    t.at(off_from + i)
                        .checked_sub(off_to)
                        .ok_or_else(|| "subtruss transition leaves the window".to_string())
                })
                .collect::<Result<Vec<usize>, String>>()?;
            transitions.insert((pi, qi), MonotoneMap::new(cod, vals)?);
        }
        let level = TrussLevel::new(flavor, base.clone(), lens, transitions)?;
        let total = level.total_poset()?;
        for (i, &a) in level_elements[k].iter().enumerate() {
            for (j, &b) in level_elements[k].iter().enumerate() {
                if total.le(i, j) != posets[k].le(a, b) {
                    return Err(
                        "selection does not induce the ambient order on its elements".to_string(),
                    );
                }
            }
        }
        base = total;
        levels.push(level);
        windows.push(wmaps);
    }

    let labels = tower.labels.as_ref().map(|l| Labelling {
        values: level_elements[dim]
            .iter()
            .map(|&u| l.values[u].clone())
            .collect(),
        ordered: l.ordered,
    });
    let sub = TrussTower::new(flavor, FinitePoset::point(), levels, labels)?;
    let map = TowerMap {
        base_map: vec![0],
        fiber_maps: windows,
    };
    let embedding = match flavor {
        Flavor::Open => collage(&sub, tower, &map)?,
        Flavor::Closed => closed_inert_collage(tower, &sub, &map)?,
    };
    Ok(SubTruss {
        tower: sub,
        level_elements,
        embedding,
    })
}

/// The smallest subtruss of a truss over the point containing the given
/// top elements.
pub fn smallest_subtruss(tower: &TrussTower, seed: &BTreeSet<usize>) -> Result<SubTruss, String> {
    if tower.base.len() != 1 {
        return Err("subtrusses are taken in trusses over the point".to_string());
    }
    if seed.is_empty() {
        return Err("the smallest subtruss of an empty selection is undefined".to_string());
    }
    if let Some(&q) = seed.iter().find(|&&q| q >= tower.top_len()) {
        return Err(format!("top element {q} is out of range"));
    }
    let dim = tower.dim();
    let mut posets = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        posets.push(tower.level_poset(k)?);
    }
    let mut sel = vec![BTreeSet::new(); dim + 1];
    sel[dim] = seed.clone();
    close(tower, &posets, &mut sel);
    complete(tower, &posets, &mut sel);
    extract(tower, &posets, &sel)
}

/// The atom of an open truss at a top element: the smallest subtruss
/// containing it.  Errors when the result has no minimal element, i.e.
/// when the element does not sit in an atomic neighborhood.
pub fn atom_at(tower: &TrussTower, p: usize) -> Result<SubTruss, String> {
    if tower.flavor != Flavor::Open {
        return Err("atoms are taken in open trusses".to_string());
    }
    let mut seed = BTreeSet::new();
    seed.insert(p);
    let sub = smallest_subtruss(tower, &seed)?;
    if sub.tower.top_poset()?.minimum().is_none() {
        return Err(format!(
            "the subtruss generated by top element {p} has no minimal element"
        ));
    }
    Ok(sub)
}

/// The atoms of an open truss, one per top element.
pub fn atoms(tower: &TrussTower) -> Result<Vec<SubTruss>, String> {
    (0..tower.top_len()).map(|p| atom_at(tower, p)).collect()
}

/// The cell of a closed truss at a top element: the smallest subtruss
/// containing it, required to have a maximal element.
pub fn cell_at(tower: &TrussTower, p: usize) -> Result<SubTruss, String> {
    if tower.flavor != Flavor::Closed {
        return Err("cells are taken in closed trusses".to_string());
    }
    let mut seed = BTreeSet::new();
    seed.insert(p);
    let sub = smallest_subtruss(tower, &seed)?;
    if sub.tower.top_poset()?.maximum().is_none() {
        return Err(format!(
            "the subtruss generated by top element {p} has no maximal element"
        ));
    }
    Ok(sub)
}

/// Whether an open truss is an atom: its top poset has a minimum whose
/// atom is the whole truss.
pub fn is_atom(tower: &TrussTower) -> Result<bool, String> {
    if tower.flavor != Flavor::Open {
        return Err("atoms are taken in open trusses".to_string());
    }
    let Some(p) = tower.top_poset()?.minimum() else {
        return Ok(false);
    };
    let sub = atom_at(tower, p)?;
    Ok(sub.level_elements[tower.dim()].len() == tower.top_len())
}

/// Window offsets of a subtruss: `offsets[k][w]` is the ordinal offset of
/// the fiber window over sub level-`k` element `w`.
fn window_offsets(sub: &SubTruss, ambient: &TrussTower) -> Vec<Vec<usize>> {
    let flavor = ambient.flavor;
    let mut offsets = Vec::with_capacity(ambient.dim());
    for k in 0..ambient.dim() {
        let amb_level = &ambient.levels[k];
        let sub_level = &sub.tower.levels[k];
        let mut offs = vec![0usize; sub.level_elements[k].len()];
        for (v, &amb_idx) in sub.level_elements[k + 1].iter().enumerate() {
            let (p_amb, amb_el) = amb_level.element(amb_idx);
            let (p_sub, sub_el) = sub_level.element(v);
            offs[p_sub] = (fiber_index(flavor, amb_level.fiber_len[p_amb], amb_el)
                - fiber_index(flavor, sub_level.fiber_len[p_sub], sub_el))
                / 2;
        }
        offsets.push(offs);
    }
    offsets
}

/// Factor an open bordism as an active bordism followed by an inert one.
/// The middle truss is the smallest subtruss of the target containing
/// every top element with a source element below it; the active part
/// co-restricts the bordism's transitions onto the middle's windows.
pub fn factorize(f: &Bordism) -> Result<Factorization, String> {
    if f.flavor() != Flavor::Open {
        return Err("factorization applies to open bordisms".to_string());
    }
    let p = f.tower().top_poset()?;
    let (src, tgt) = f.end_inclusions()?;
    let point = FinitePoset::point();
    let (target, n_maps) = f.tower().base_change_with_level_maps(&point, &[1])?;
    let mut seed = BTreeSet::new();
    for (j, &tw) in tgt.iter().enumerate() {
        if src.iter().any(|&su| p.le(su, tw)) {
            seed.insert(j);
        }
    }
    let z = smallest_subtruss(&target, &seed)?;
    let offsets = window_offsets(&z, &target);

    let ft = f.tower();
    let zt = &z.tower;
    let mut sides = Sides::seed();
    let mut base = FinitePoset::chain(1);
    let mut levels = Vec::with_capacity(f.dim());
    for k in 0..f.dim() {
        let fl = &ft.levels[k];
        let zl = &zt.levels[k];
        let fiber_len: Vec<usize> = sides
            .side
            .iter()
            .zip(&sides.at)
            .map(|(&sd, &e)| if sd == 0 { fl.fiber_len[e] } else { zl.fiber_len[e] })
            .collect();
        let mut transitions = BTreeMap::new();
        for (u, w) in base.strict_pairs() {
            let t = match (sides.side[u], sides.side[w]) {
                (0, 0) => fl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "bordism misses a transition".to_string())?,
                (1, 1) => zl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "middle truss misses a transition".to_string())?,
                (0, 1) => {
                    let (a, b) = (sides.at[u], sides.at[w]);
                    let q_full = n_maps[k][z.level_elements[k][b]];
                    let t = fl.transition(a, q_full).ok_or_else(|| {
                        "active part hits a pair unrelated in the bordism".to_string()
                    })?;
                    let off = offsets[k][b];
                    let vals = t
                        .values()
                        .iter()
                        .map(|&v| {
                            v.checked_sub(off)
                                .ok_or_else(|| "transition leaves the middle window".to_string())
                        })
                        .collect::<Result<Vec<usize>, String>>()?;
                    MonotoneMap::new(zl.fiber_len[b], vals)?
                }
                _ => return Err("active part relates the middle below the source".to_string()),
            };
            transitions.insert((u, w), t);
        }
        let level = TrussLevel::new(Flavor::Open, base.clone(), fiber_len, transitions)?;
        level
            .check_functorial()
            .map_err(|e| format!("active part is not functorial at level {}: {e}", k + 1))?;
        sides = sides.extend(&level, fl, zl);
        base = level.total_poset()?;
        levels.push(level);
    }
    let labels = combined_labels(&sides, ft.labels.as_ref(), zt.labels.as_ref());
    let active = Bordism::new(TrussTower::new(
        Flavor::Open,
        FinitePoset::chain(1),
        levels,
        labels,
    )?)?;
    let inert = z.embedding.clone();
    if compose(&active, &inert)? != *f {
        return Err("factorization failed to recompose the bordism".to_string());
    }
    let dim = f.dim();
    Ok(Factorization {
        active,
        inert,
        middle: z.tower,
        middle_selection: z.level_elements.into_iter().nth(dim).unwrap(),
    })
}

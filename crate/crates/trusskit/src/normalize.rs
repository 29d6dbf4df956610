//! Normal forms of open labelled trusses.  A singular height whose
//! neighborhood looks the same on both regular sides — equal labelled
//! slices, identity connecting transitions, and transitions that do not
//! separate it from its successor — can be deleted; normalization applies
//! such deletions greedily (innermost level first, then canonical element
//! and height order) until none remains.  Each step is witnessed by a
//! degeneracy bordism, and the composite witness connects the input to its
//! normal form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::fiber::{FiberElement, Flavor};
use crate::label::Labelling;
use crate::level::TrussLevel;
use crate::order::{FinitePoset, MonotoneMap};
use crate::ops::bordism::{collage, compose, identity_bordism, Bordism, TowerMap};
use crate::tower::TrussTower;

/// The result of normalizing a truss: the normal form, a witnessing
/// bordism from the input to the normal form (the identity when nothing
/// was deleted), and the number of deletions applied.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub nf: TrussTower,
    pub witness: Bordism,
    pub steps: usize,
}

/// A deletion site: level `k` (1-based), element `b` of level `k - 1`, and
/// singular height `i` in the fiber over `b`.
pub type Deletion = (usize, usize, usize);

fn check_site(t: &TrussTower, k: usize, b: usize, i: usize) -> Result<usize, String> {
    if t.flavor != Flavor::Open {
        return Err("normalization applies to open trusses".to_string());
    }
    if t.base.len() != 1 {
        return Err("normalization applies to trusses over the point".to_string());
    }
    if k == 0 || k > t.dim() {
        return Err(format!("level {k} is out of range"));
    }
    let lvl = &t.levels[k - 1];
    if b >= lvl.fiber_len.len() {
        return Err(format!("element {b} is out of range at level {}", k - 1));
    }
    let m = lvl.fiber_len[b];
    if i >= m {
        return Err(format!("height {i} is out of range in a fiber of size {m}"));
    }
    Ok(m)
}

/// The upper part of the tower over one level-`k` element, together with
/// the index of each slice element in the ambient tower.
fn slice_with_maps(
    t: &TrussTower,
    k: usize,
    e: usize,
) -> Result<(TrussTower, Vec<Vec<usize>>), String> {
    let upper = TrussTower::new(
        t.flavor,
        t.level_poset(k)?,
        t.levels[k..].to_vec(),
        t.labels.clone(),
    )?;
    upper.base_change_with_level_maps(&FinitePoset::point(), &[e])
}

/// Whether the singular height `i` over element `b` at level `k` can be
/// deleted: no outgoing transition separates it from its successor, the
/// labelled slices above it and above its two regular neighbors agree, and
/// all connecting transitions between corresponding slice elements are
/// identities.
pub fn deletable(t: &TrussTower, k: usize, b: usize, i: usize) -> Result<bool, String> {
    check_site(t, k, b, i)?;
    let lvl = &t.levels[k - 1];

    for (p, q) in lvl.base.strict_pairs() {
        if p != b {
            continue;
        }
        let tr = lvl
            .transition(b, q)
            .ok_or("missing transition on a related pair")?;
        if tr.at(i) != tr.at(i + 1) {
            return Ok(false);
        }
    }

    let us = lvl.element_index(b, FiberElement::Sing(i));
    let regs = [
        lvl.element_index(b, FiberElement::Reg(i)),
        lvl.element_index(b, FiberElement::Reg(i + 1)),
    ];

    if k == t.dim() {
        if let Some(l) = &t.labels {
            return Ok(regs.iter().all(|&r| l.values[r] == l.values[us]));
        }
        return Ok(true);
    }

    let (s_slice, s_maps) = slice_with_maps(t, k, us)?;
    for &r in &regs {
        let (r_slice, r_maps) = slice_with_maps(t, k, r)?;
        if s_slice != r_slice {
            return Ok(false);
        }
        for j in 0..s_slice.dim() {
            for x in 0..s_maps[j].len() {
                let (u, v) = (s_maps[j][x], r_maps[j][x]);
                match t.levels[k + j].transition(u, v) {
                    Some(tr) if tr.is_identity() => {}
                    _ => return Ok(false),
                }
            }
        }
    }
    Ok(true)
}

/// The collapse `[m] -> [m - 1]` that merges heights `i` and `i + 1`.
fn collapse(m: usize, i: usize) -> MonotoneMap {
    let vals = (0..=m).map(|j| if j <= i { j } else { j - 1 }).collect();
    MonotoneMap::new(m - 1, vals).expect("collapse is monotone")
}

/// Apply a deletion, assuming [`deletable`] holds.  Elements of the new
/// tower correspond to one or more old elements; the merged regular keeps
/// the data of its first (regular) counterpart, which agrees with the
/// other counterparts by the deletability conditions.
pub fn apply_deletion(
    t: &TrussTower,
    k: usize,
    b: usize,
    i: usize,
) -> Result<TrussTower, String> {
    let m = check_site(t, k, b, i)?;
    let delta = collapse(m, i);
    let lvl = &t.levels[k - 1];

    let mut fiber_len = lvl.fiber_len.clone();
    fiber_len[b] = m - 1;
    let mut transitions = BTreeMap::new();
    for (p, q) in lvl.base.strict_pairs() {
        let tr = lvl
            .transition(p, q)
            .ok_or("missing transition on a related pair")?;
        let new_tr = if p == b {
            let mut vals = tr.values().to_vec();
            vals.remove(i + 1);
            MonotoneMap::new(tr.cod(), vals)?
        } else if q == b {
            tr.compose(&delta)?
        } else {
            tr
        };
        transitions.insert((p, q), new_tr);
    }
    let new_level = TrussLevel::new(t.flavor, lvl.base.clone(), fiber_len, transitions)?;

    // Old counterparts of each new element, canonical representative first.
    let mut counter: Vec<Vec<usize>> = Vec::with_capacity(new_level.total_len());
    for (p, el) in new_level.elements() {
        let olds = if p != b {
            vec![lvl.element_index(p, el)]
        } else {
            match el {
                FiberElement::Reg(j) if j < i => vec![lvl.element_index(b, FiberElement::Reg(j))],
                FiberElement::Reg(j) if j == i => vec![
                    lvl.element_index(b, FiberElement::Reg(i)),
                    lvl.element_index(b, FiberElement::Sing(i)),
                    lvl.element_index(b, FiberElement::Reg(i + 1)),
                ],
                FiberElement::Reg(j) => vec![lvl.element_index(b, FiberElement::Reg(j + 1))],
                FiberElement::Sing(j) if j < i => {
                    vec![lvl.element_index(b, FiberElement::Sing(j))]
                }
                FiberElement::Sing(j) => vec![lvl.element_index(b, FiberElement::Sing(j + 1))],
            }
        };
        counter.push(olds);
    }

    let mut new_levels = t.levels[..k - 1].to_vec();
    let mut base = new_level.total_poset()?;
    new_levels.push(new_level);

    for depth in k + 1..=t.dim() {
        let old_lvl = &t.levels[depth - 1];
        let fiber_len: Vec<usize> = counter.iter().map(|cs| old_lvl.fiber_len[cs[0]]).collect();
        let mut transitions = BTreeMap::new();
        for (u, w) in base.strict_pairs() {
            let tr = counter[u]
                .iter()
                .find_map(|&cu| {
                    counter[w]
                        .iter()
                        .find_map(|&cw| old_lvl.transition(cu, cw))
                })
                .ok_or("deletion left a related pair without a transition")?;
            transitions.insert((u, w), tr);
        }
        let level = TrussLevel::new(t.flavor, base, fiber_len, transitions)?;
        let mut next_counter = Vec::with_capacity(level.total_len());
        for (u, el) in level.elements() {
            next_counter.push(
                counter[u]
                    .iter()
                    .map(|&cu| old_lvl.element_index(cu, el))
                    .collect(),
            );
        }
        counter = next_counter;
        base = level.total_poset()?;
        new_levels.push(level);
    }

    let labels = t.labels.as_ref().map(|l| Labelling {
        values: counter.iter().map(|cs| l.values[cs[0]].clone()).collect(),
        ordered: l.ordered,
    });
    TrussTower::new(t.flavor, t.base.clone(), new_levels, labels)
}

/// The degeneracy bordism witnessing one deletion.
fn deletion_collage(
    old: &TrussTower,
    new: &TrussTower,
    k: usize,
    b: usize,
    i: usize,
) -> Result<Bordism, String> {
    let mut fiber_maps = Vec::with_capacity(old.dim());
    for (j, lvl) in old.levels.iter().enumerate() {
        fiber_maps.push(
            lvl.fiber_len
                .iter()
                .enumerate()
                .map(|(e, &m)| {
                    if j + 1 == k && e == b {
                        collapse(m, i)
                    } else {
                        MonotoneMap::identity(m)
                    }
                })
                .collect(),
        );
    }
    collage(
        old,
        new,
        &TowerMap {
            base_map: vec![0],
            fiber_maps,
        },
    )
}

/// All deletion sites currently applicable.
pub fn deletions(t: &TrussTower) -> Result<Vec<Deletion>, String> {
    let mut out = Vec::new();
    for k in 1..=t.dim() {
        for b in 0..t.levels[k - 1].fiber_len.len() {
            for i in 0..t.levels[k - 1].fiber_len[b] {
                if deletable(t, k, b, i)? {
                    out.push((k, b, i));
                }
            }
        }
    }
    Ok(out)
}

/// Normalize an open truss over the point by greedy deletion: innermost
/// level first, elements and heights in canonical order, restarting after
/// every deletion.
pub fn normalize(t: &TrussTower) -> Result<Normalization, String> {
    if t.flavor != Flavor::Open {
        return Err("normalization applies to open trusses".to_string());
    }
    if t.base.len() != 1 {
        return Err("normalization applies to trusses over the point".to_string());
    }
    let mut cur = t.clone();
    let mut witness = identity_bordism(t)?;
    let mut steps = 0;
    'outer: loop {
        for k in (1..=cur.dim()).rev() {
            for b in 0..cur.levels[k - 1].fiber_len.len() {
                for i in 0..cur.levels[k - 1].fiber_len[b] {
                    if deletable(&cur, k, b, i)? {
                        let next = apply_deletion(&cur, k, b, i)?;
                        let step = deletion_collage(&cur, &next, k, b, i)?;
                        witness = compose(&witness, &step)?;
                        cur = next;
                        steps += 1;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    Ok(Normalization {
        nf: cur,
        witness,
        steps,
    })
}

/// Exhaustively explore every deletion order and return the unique
/// irreducible result.  Quadratic in the number of reachable towers; meant
/// as an oracle for small inputs.  Errors if two distinct irreducible
/// towers are reachable.
pub fn normalize_exhaustive(t: &TrussTower) -> Result<TrussTower, String> {
    let mut seen: Vec<TrussTower> = vec![t.clone()];
    let mut queue: Vec<TrussTower> = vec![t.clone()];
    let mut irreducible: Vec<TrussTower> = Vec::new();
    while let Some(cur) = queue.pop() {
        let sites = deletions(&cur)?;
        if sites.is_empty() {
            if !irreducible.contains(&cur) {
                irreducible.push(cur);
            }
            continue;
        }
        for (k, b, i) in sites {
            let next = apply_deletion(&cur, k, b, i)?;
            if !seen.contains(&next) {
                seen.push(next.clone());
                queue.push(next);
            }
        }
    }
    match irreducible.len() {
        0 => Err("no irreducible tower reached".to_string()),
        1 => Ok(irreducible.pop().unwrap()),
        n => Err(format!("deletion is not confluent here: {n} irreducible towers")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::ops::grid::{grid, line};

    fn labelled_line(m: usize, labels: &[i64]) -> TrussTower {
        line(Flavor::Open, m)
            .with_labels(Labelling {
                values: labels.iter().map(|&v| Label::Int(v)).collect(),
                ordered: false,
            })
            .unwrap()
    }

    #[test]
    fn interleaved_labels_delete_one_height() {
        // r0 s0 r1 s1 r2 s2 r3 labelled 1,0,1,1,1,0,1: only height 1 merges.
        let t = labelled_line(3, &[1, 0, 1, 1, 1, 0, 1]);
        let n = normalize(&t).unwrap();
        assert_eq!(n.steps, 1);
        assert_eq!(n.nf, labelled_line(2, &[1, 0, 1, 0, 1]));
        assert!(n.witness.classify().unwrap().degeneracy);
        assert_eq!(n.witness.source().unwrap(), t);
        assert_eq!(n.witness.target().unwrap(), n.nf);
    }

    #[test]
    fn constant_labels_collapse_completely() {
        let t = labelled_line(3, &[7, 7, 7, 7, 7, 7, 7]);
        let n = normalize(&t).unwrap();
        assert_eq!(n.steps, 3);
        assert_eq!(n.nf, labelled_line(0, &[7]));
    }

    #[test]
    fn unlabelled_towers_normalize_to_trivial_fibers() {
        let g = grid(Flavor::Open, &[2, 1]);
        let n = normalize(&g).unwrap();
        assert_eq!(n.nf, grid(Flavor::Open, &[0, 0]));
        assert!(n.witness.classify().unwrap().degeneracy);
    }

    #[test]
    fn normal_forms_are_irreducible_and_stable() {
        let t = labelled_line(4, &[1, 2, 1, 2, 1, 1, 1, 1, 1]);
        let n = normalize(&t).unwrap();
        assert!(deletions(&n.nf).unwrap().is_empty());
        let again = normalize(&n.nf).unwrap();
        assert_eq!(again.nf, n.nf);
        assert_eq!(again.steps, 0);
    }

    #[test]
    fn exhaustive_agrees_with_greedy() {
        for labels in [
            alloc::vec![1, 0, 1, 1, 1, 0, 1],
            alloc::vec![1, 1, 1, 1, 1, 1, 1],
            alloc::vec![1, 2, 3, 4, 5, 6, 7],
            alloc::vec![0, 0, 1, 1, 0, 0, 0],
        ] {
            let t = labelled_line(3, &labels);
            assert_eq!(normalize(&t).unwrap().nf, normalize_exhaustive(&t).unwrap());
        }
    }

    #[test]
    fn inner_levels_normalize_too() {
        // A wire that bulges to two strands and back has no deletable
        // height: the two strands carry different neighborhoods than the
        // regular gaps around them only when labels distinguish them.
        let g = grid(Flavor::Open, &[1, 1]);
        let labels: Vec<Label> = (0..9).map(|j| Label::Int((j == 4) as i64)).collect();
        let t = g
            .with_labels(Labelling {
                values: labels,
                ordered: false,
            })
            .unwrap();
        let n = normalize(&t).unwrap();
        // The marked center survives; everything else collapses around it.
        assert_eq!(n.nf.dim(), 2);
        assert!(deletions(&n.nf).unwrap().is_empty());
        assert_eq!(normalize_exhaustive(&t).unwrap(), n.nf);
    }
}

/*!
Duality, compactification, and its retraction.

Dualising swaps the roles of regular and singular elements and reverses every
poset; it is an exact involution. Compactification embeds an open tower into
a closed one by padding each fiber with a singular element on either end;
retraction removes the padding again, so `retract ∘ compactify` is the
identity on open towers.
*/

use crate::fiber::{FiberElement, Flavor};
use crate::label::Labelling;
use crate::level::TrussLevel;
use crate::order::MonotoneMap;
use crate::tower::TrussTower;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// The dual tower: flavor swapped, every poset reversed, `Reg i ↔ Sing i`,
/// each transition reattached to its reversed pair. Labels are carried along
/// unchanged (element numbering is preserved position by position).
pub fn dualize(t: &TrussTower) -> TrussTower {
    let levels = t
        .levels
        .iter()
        .map(|level| {
            let transitions: BTreeMap<(usize, usize), MonotoneMap> = level
                .transitions()
                .iter()
                .map(|(&(p, q), m)| ((q, p), m.clone()))
                .collect();
            TrussLevel::new(
                level.flavor.dual(),
                level.base.opposite(),
                level.fiber_len.clone(),
                transitions,
            )
            .expect("dual level is structurally valid")
        })
        .collect();
    TrussTower {
        flavor: t.flavor.dual(),
        base: t.base.opposite(),
        levels,
        labels: t.labels.clone(),
    }
}

/// Compactifies an open tower into a closed one. Every fiber `[m]` becomes
/// `[m + 1]` (`Reg i ↦ Reg i`, `Sing i ↦ Sing i+1`) and every transition is
/// replaced by its gaps dual. The two singular elements added to a fiber are
/// boundary strata; they carry the degenerate fiber `[0]` at all deeper
/// levels, where every transition is forced. Labels are dropped (the new
/// boundary elements have none to inherit).
pub fn compactify(t: &TrussTower) -> Result<TrussTower, String> {
    if t.flavor != Flavor::Open {
        return Err("compactify expects an open tower".to_string());
    }
    // For each level's base, which new elements come from old ones.
    let mut old_of: Vec<Option<usize>> = (0..t.base.len()).map(Some).collect();
    let mut cur_base = t.base.clone();
    let mut levels = Vec::with_capacity(t.levels.len());
    for level in &t.levels {
        let fiber_len: Vec<usize> =
            old_of.iter().map(|o| o.map_or(0, |b| level.fiber_len[b] + 1)).collect();
        let mut transitions = BTreeMap::new();
        for (u, w) in cur_base.strict_pairs() {
            let m = match (old_of[u], old_of[w]) {
                (Some(b), Some(b2)) => {
                    let t = level
                        .transition(b, b2)
                        .ok_or_else(|| format!("boundary relation ({u}, {w}) covers unrelated interior pair ({b}, {b2})"))?;
                    t.gaps_dual()
                }
                // A boundary element below an interior one: the transition
                // collapses the whole interior fiber onto the point.
                (None, Some(b2)) => MonotoneMap::new(0, vec![0; level.fiber_len[b2] + 2])
                    .expect("constant map is monotone"),
                (None, None) => MonotoneMap::identity(0),
                (Some(_), None) => {
                    return Err(format!(
                        "interior element {u} sits below boundary element {w}; compactification is inconsistent"
                    ))
                }
            };
            transitions.insert((u, w), m);
        }
        let new_level = TrussLevel::new(Flavor::Closed, cur_base.clone(), fiber_len, transitions)?;
        let mut next_old_of = Vec::with_capacity(new_level.total_len());
        for (u, el) in new_level.elements() {
            next_old_of.push(match (old_of[u], el) {
                (Some(b), FiberElement::Reg(i)) => Some(level.element_index(b, FiberElement::Reg(i))),
                (Some(b), FiberElement::Sing(i)) => {
                    if i == 0 || i == level.fiber_len[b] + 1 {
                        None
                    } else {
                        Some(level.element_index(b, FiberElement::Sing(i - 1)))
                    }
                }
                (None, _) => None,
            });
        }
        cur_base = new_level.total_poset()?;
        levels.push(new_level);
        old_of = next_old_of;
    }
    TrussTower::new(Flavor::Closed, t.base.clone(), levels, None)
}

/// Removes the boundary padding of a closed tower: drops the first and last
/// singular element of every fiber, restricts deeper levels to the surviving
/// elements, and inverts the gaps duality on transitions. Fails when a
/// transition is not endpoint-preserving, or when a surviving element
/// carries a `[0]` fiber (nothing would be left of it).
pub fn retract(x: &TrussTower) -> Result<TrussTower, String> {
    if x.flavor != Flavor::Closed {
        return Err("retract expects a closed tower".to_string());
    }
    // Surviving elements of the current level base, as indices into x's.
    let mut survivors: Vec<usize> = (0..x.base.len()).collect();
    let mut cur_base = x.base.clone();
    let mut levels = Vec::with_capacity(x.levels.len());
    for level in &x.levels {
        let mut fiber_len = Vec::with_capacity(survivors.len());
        for &b in &survivors {
            let m = level.fiber_len[b];
            if m == 0 {
                return Err(format!(
                    "fiber [0] over surviving element {b} has no interior to retract onto"
                ));
            }
            fiber_len.push(m - 1);
        }
        let mut transitions = BTreeMap::new();
        for (u, w) in cur_base.strict_pairs() {
            let (ob, ob2) = (survivors[u], survivors[w]);
            let t = level
                .transition(ob, ob2)
                .ok_or_else(|| format!("surviving relation ({u}, {w}) covers unrelated pair ({ob}, {ob2})"))?;
            if !t.is_strict_interval() {
                return Err(format!(
                    "transition {t:?} on ({ob}, {ob2}) is not endpoint-preserving"
                ));
            }
            transitions.insert((u, w), t.gaps_dual_inverse()?);
        }
        let new_level = TrussLevel::new(Flavor::Open, cur_base.clone(), fiber_len, transitions)?;
        let mut next_survivors = Vec::with_capacity(new_level.total_len());
        for (u, el) in new_level.elements() {
            let b = survivors[u];
            let old_el = match el {
                FiberElement::Reg(i) => FiberElement::Reg(i),
                FiberElement::Sing(i) => FiberElement::Sing(i + 1),
            };
            next_survivors.push(level.element_index(b, old_el));
        }
        cur_base = new_level.total_poset()?;
        levels.push(new_level);
        survivors = next_survivors;
    }
    let labels = x.labels.as_ref().map(|l| Labelling {
        values: survivors.iter().map(|&old| l.values[old].clone()).collect(),
        ordered: l.ordered,
    });
    TrussTower::new(Flavor::Open, x.base.clone(), levels, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FinitePoset;

    fn open_line(m: usize) -> TrussTower {
        let level =
            TrussLevel::new(Flavor::Open, FinitePoset::point(), vec![m], BTreeMap::new()).unwrap();
        TrussTower::truss(Flavor::Open, vec![level], None).unwrap()
    }

    fn open_bordism_line(m0: usize, m1: usize, vals: Vec<usize>) -> TrussTower {
        let base = FinitePoset::chain(1);
        let mut t = BTreeMap::new();
        t.insert((0, 1), MonotoneMap::new(m1, vals).unwrap());
        let level = TrussLevel::new(Flavor::Open, base.clone(), vec![m0, m1], t).unwrap();
        TrussTower::unlabelled(Flavor::Open, base, vec![level]).unwrap()
    }

    #[test]
    fn dualize_swaps_and_involutes() {
        let t = open_bordism_line(1, 2, vec![0, 2]);
        let d = dualize(&t);
        assert_eq!(d.flavor, Flavor::Closed);
        d.validate().unwrap();
        assert_eq!(dualize(&d), t);
        // Element posets are opposite.
        assert_eq!(d.top_poset().unwrap(), t.top_poset().unwrap().opposite());
    }

    #[test]
    fn compactify_line() {
        let c = compactify(&open_line(1)).unwrap();
        c.validate().unwrap();
        assert_eq!(c.flavor, Flavor::Closed);
        assert_eq!(c.levels[0].fiber_len, vec![2]);
        assert_eq!(c.top_len(), 5);
        assert_eq!(retract(&c).unwrap(), open_line(1));
    }

    #[test]
    fn compactify_bordism_round_trips() {
        let t = open_bordism_line(1, 2, vec![0, 2]);
        let c = compactify(&t).unwrap();
        c.validate().unwrap();
        // The transition became the gaps dual <0,1,1,2>.
        assert_eq!(
            c.levels[0].transition(0, 1).unwrap(),
            MonotoneMap::new(2, vec![0, 1, 1, 2]).unwrap()
        );
        assert_eq!(retract(&c).unwrap(), t);
    }

    #[test]
    fn compactify_two_levels_round_trips() {
        // Vertical wire: level-1 fiber [0], level-2 fiber [1].
        let l1 = TrussLevel::new(Flavor::Open, FinitePoset::point(), vec![0], BTreeMap::new()).unwrap();
        let l2 = TrussLevel::new(Flavor::Open, l1.total_poset().unwrap(), vec![1], BTreeMap::new()).unwrap();
        let wire = TrussTower::truss(Flavor::Open, vec![l1, l2], None).unwrap();
        let c = compactify(&wire).unwrap();
        c.validate().unwrap();
        // Level 1 gains two boundary slices with [0] fibers; the interior
        // slice compactifies to [2].
        assert_eq!(c.levels[0].fiber_len, vec![1]);
        assert_eq!(c.levels[1].fiber_len, vec![0, 2, 0]);
        assert_eq!(retract(&c).unwrap(), wire);
    }

    #[test]
    fn retract_rejects_unbounded_transitions() {
        // A closed bordism whose transition <1,2> is not endpoint-preserving.
        let base = FinitePoset::chain(1);
        let mut t = BTreeMap::new();
        t.insert((0, 1), MonotoneMap::new(2, vec![1, 2]).unwrap());
        let level = TrussLevel::new(Flavor::Closed, base.clone(), vec![2, 1], t).unwrap();
        let x = TrussTower::unlabelled(Flavor::Closed, base, vec![level]).unwrap();
        let err = retract(&x).unwrap_err();
        assert!(err.contains("endpoint-preserving"));
    }

    #[test]
    fn retract_rejects_degenerate_interior() {
        let level =
            TrussLevel::new(Flavor::Closed, FinitePoset::point(), vec![0], BTreeMap::new()).unwrap();
        let x = TrussTower::truss(Flavor::Closed, vec![level], None).unwrap();
        assert!(retract(&x).unwrap_err().contains("no interior"));
    }
}

//! Singularity types.  A level of a tower is trivial when every fiber on it
//! is the trivial interval `[0]`; recording which levels are nontrivial, in
//! framing order, gives the singularity type of the tower.  The shape of a
//! tower is the grid with the same singularity type, and the shape bordism
//! exhibits the tower as an expansion of its shape.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::fiber::Flavor;
use crate::level::TrussLevel;
use crate::order::{FinitePoset, MonotoneMap};
use crate::tower::TrussTower;

use super::bordism::{Bordism, Sides};
use super::grid::grid;

fn level_trivial(level: &TrussLevel) -> bool {
    level.fiber_len.iter().all(|&m| m == 0)
}

/// The singularity type: one bit per level, `true` when the level is
/// nontrivial, listed outermost level last so that the word lines up with
/// the grid dimensions reproducing it: `stype(grid(dims)) == dims != 0`.
pub fn stype(tower: &TrussTower) -> Vec<bool> {
    tower
        .levels
        .iter()
        .rev()
        .map(|l| !level_trivial(l))
        .collect()
}

/// The number of leading trivial levels (levels `1..=sdepth` all carry
/// trivial fibers).
pub fn sdepth(tower: &TrussTower) -> usize {
    tower
        .levels
        .iter()
        .take_while(|l| level_trivial(l))
        .count()
}

/// The grid with the same singularity type as the tower.
pub fn shape(tower: &TrussTower) -> TrussTower {
    let dims: Vec<usize> = stype(tower)
        .iter()
        .map(|&b| if b { 1 } else { 0 })
        .collect();
    grid(tower.flavor, &dims)
}

/// The bordism from the shape of an open tower to the tower itself: over
/// each trivial level the identity, over each nontrivial level the
/// endpoint-spanning map `[1] -> [m]`.  This is well-defined exactly when
/// the tower's transitions on nontrivial levels preserve endpoints; a
/// tower violating that is reported as an error.
pub fn shape_bordism(tower: &TrussTower) -> Result<Bordism, String> {
    if tower.flavor != Flavor::Open {
        return Err("shape bordisms are defined for open towers".to_string());
    }
    if tower.base.len() != 1 {
        return Err("shape bordisms expect a tower over the point".to_string());
    }
    let sh = shape(tower);
    let mut sides = Sides::seed();
    let mut base = FinitePoset::chain(1);
    let mut levels = Vec::with_capacity(tower.dim());
    for k in 0..tower.dim() {
        let sl = &sh.levels[k];
        let tl = &tower.levels[k];
        let fiber_len: Vec<usize> = sides
            .side
            .iter()
            .zip(&sides.at)
            .map(|(&sd, &e)| if sd == 0 { sl.fiber_len[e] } else { tl.fiber_len[e] })
            .collect();
        let mut transitions = BTreeMap::new();
        for (u, w) in base.strict_pairs() {
            let t = match (sides.side[u], sides.side[w]) {
                (0, 0) => sl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "shape misses a transition".to_string())?,
                (1, 1) => tl
                    .transition(sides.at[u], sides.at[w])
                    .ok_or_else(|| "tower misses a transition".to_string())?,
                (0, 1) => {
                    let m = tl.fiber_len[sides.at[w]];
                    if level_trivial(tl) {
                        MonotoneMap::identity(0)
                    } else {
                        MonotoneMap::endpoints(m)
                    }
                }
                _ => return Err("shape bordism relates the tower below its shape".to_string()),
            };
            transitions.insert((u, w), t);
        }
        let level = TrussLevel::new(Flavor::Open, base.clone(), fiber_len, transitions)?;
        level.check_functorial().map_err(|_| {
            format!(
                "level {} transitions do not preserve endpoints, so the tower is not an expansion of its shape",
                k + 1
            )
        })?;
        sides = sides.extend(&level, sl, tl);
        base = level.total_poset()?;
        levels.push(level);
    }
    let t = TrussTower::new(Flavor::Open, FinitePoset::chain(1), levels, None)?;
    Bordism::new(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::grid::line;

    #[test]
    fn stype_of_grids_round_trips() {
        for dims in [
            alloc::vec![1, 0],
            alloc::vec![0, 1],
            alloc::vec![1, 1],
            alloc::vec![0, 0],
            alloc::vec![2, 0, 1],
        ] {
            let g = grid(Flavor::Open, &dims);
            let expect: Vec<bool> = dims.iter().map(|&m| m > 0).collect();
            assert_eq!(stype(&g), expect, "dims {dims:?}");
        }
    }

    #[test]
    fn sdepth_counts_leading_trivial_levels() {
        assert_eq!(sdepth(&grid(Flavor::Open, &[1, 0])), 1);
        assert_eq!(sdepth(&grid(Flavor::Open, &[0, 1])), 0);
        assert_eq!(sdepth(&grid(Flavor::Open, &[0, 0])), 2);
        assert_eq!(sdepth(&line(Flavor::Open, 2)), 0);
    }

    #[test]
    fn shape_collapses_fiber_sizes_to_bits() {
        let g = grid(Flavor::Open, &[2, 0, 1]);
        assert_eq!(shape(&g), grid(Flavor::Open, &[1, 0, 1]));
    }

    #[test]
    fn shape_bordism_of_a_line() {
        let t = line(Flavor::Open, 2);
        let b = shape_bordism(&t).unwrap();
        assert_eq!(b.source().unwrap(), line(Flavor::Open, 1));
        assert_eq!(b.target().unwrap(), t);
        assert!(b.classify().unwrap().active);
    }

    #[test]
    fn shape_bordism_of_a_grid_is_active() {
        let g = grid(Flavor::Open, &[2, 1]);
        let b = shape_bordism(&g).unwrap();
        assert_eq!(b.source().unwrap(), shape(&g));
        assert!(b.classify().unwrap().active);
    }
}

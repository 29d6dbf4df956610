/*!
Grids and stacked products.

The stacked product puts one truss inside another: the outer truss's levels
come first, and the inner truss is replicated (constantly) over every element
of the outer truss's top poset. A grid is an iterated stacked product of
1-trusses: all fibers at a level are equal and all transitions are
identities. `grid(flavor, &[m_1, …, m_n])` places coordinate `i` at tower
level `n + 1 - i`, so the slowest (outermost) direction is the last entry.
*/

use crate::fiber::Flavor;
use crate::level::TrussLevel;
use crate::order::FinitePoset;
use crate::tower::TrussTower;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;

/// The 1-truss with a single fiber `[m]` over the point.
pub fn line(flavor: Flavor, m: usize) -> TrussTower {
    let level = TrussLevel::new(flavor, FinitePoset::point(), vec![m], BTreeMap::new())
        .expect("a single fiber over the point is a valid level");
    TrussTower::truss(flavor, vec![level], None).expect("a 1-truss is a valid tower")
}

/// The stacked product `outer ⋉ inner`: `outer`'s levels followed by
/// `inner`'s levels pulled back constantly over `outer`'s top poset.
/// `inner` must be a truss (point base) of the same flavor. Labels are
/// dropped — the product's top elements are pairs and have no canonical
/// label.
pub fn stacked_product(outer: &TrussTower, inner: &TrussTower) -> Result<TrussTower, String> {
    if outer.flavor != inner.flavor {
        return Err("stacked product needs towers of the same flavor".to_string());
    }
    if inner.base.len() != 1 {
        return Err("stacked product replicates the inner truss, which must live over the point".to_string());
    }
    let top = outer.top_poset()?;
    let constant = vec![0usize; top.len()];
    let pulled = inner.base_change(&top, &constant)?;
    let mut levels = outer.levels.clone();
    levels.extend(pulled.levels);
    TrussTower::new(outer.flavor, outer.base.clone(), levels, None)
}

/// The grid truss over the given coordinate fiber sizes; see the module
/// docs for the coordinate/level correspondence.
pub fn grid(flavor: Flavor, dims: &[usize]) -> TrussTower {
    let mut acc = TrussTower::truss(flavor, vec![], None).expect("the point is a valid 0-truss");
    for &m in dims {
        acc = stacked_product(&line(flavor, m), &acc).expect("grids stack cleanly");
    }
    acc
}

/*!
Truss fibers: the stratified intervals sitting over a single base element.

A fiber over the ordinal `[n]` is a zigzag of singular and regular elements.
Open fibers start and end regular (`R0 S0 R1 … Sn-1 Rn`), closed fibers start
and end singular (`S0 R0 S1 … Rn-1 Sn`); in both flavors singular elements
sit below their neighbouring regular elements. The `hom_exists` rules say
which elements are related across a transition map, and generate every order
relation in a truss.
*/

use crate::order::MonotoneMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    Open,
    Closed,
}

impl Flavor {
    pub fn dual(self) -> Flavor {
        match self {
            Flavor::Open => Flavor::Closed,
            Flavor::Closed => Flavor::Open,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Open => "open",
            Flavor::Closed => "closed",
        }
    }
}

/// One element of a fiber. `Reg(i)` is the i-th regular (interval) element,
/// `Sing(i)` the i-th singular (point) element, counted from the bottom of
/// the fiber's geometric order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberElement {
    Reg(usize),
    Sing(usize),
}

impl FiberElement {
    pub fn is_reg(self) -> bool {
        matches!(self, FiberElement::Reg(_))
    }

    pub fn is_sing(self) -> bool {
        matches!(self, FiberElement::Sing(_))
    }

    pub fn index(self) -> usize {
        match self {
            FiberElement::Reg(i) | FiberElement::Sing(i) => i,
        }
    }
}

impl core::fmt::Display for FiberElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FiberElement::Reg(i) => write!(f, "r{i}"),
            FiberElement::Sing(i) => write!(f, "s{i}"),
        }
    }
}

/// Number of elements in a fiber over `[n]`: always `2n + 1`.
pub fn fiber_len(_flavor: Flavor, n: usize) -> usize {
    2 * n + 1
}

/// The elements of a fiber over `[n]` in geometric (left-to-right) order.
/// Open: `r0 s0 r1 … rn`. Closed: `s0 r0 s1 … sn`.
pub fn fiber_order(flavor: Flavor, n: usize) -> Vec<FiberElement> {
    let mut out = Vec::with_capacity(2 * n + 1);
    for i in 0..=n {
        match flavor {
            Flavor::Open => {
                out.push(FiberElement::Reg(i));
                if i < n {
                    out.push(FiberElement::Sing(i));
                }
            }
            Flavor::Closed => {
                out.push(FiberElement::Sing(i));
                if i < n {
                    out.push(FiberElement::Reg(i));
                }
            }
        }
    }
    out
}

/// Position of an element in [`fiber_order`]. The element must be in range
/// for `[n]`.
pub fn fiber_index(flavor: Flavor, n: usize, el: FiberElement) -> usize {
    debug_assert!(element_in_range(flavor, n, el));
    match (flavor, el) {
        (Flavor::Open, FiberElement::Reg(i)) => 2 * i,
        (Flavor::Open, FiberElement::Sing(i)) => 2 * i + 1,
        (Flavor::Closed, FiberElement::Sing(i)) => 2 * i,
        (Flavor::Closed, FiberElement::Reg(i)) => 2 * i + 1,
    }
}

/// Whether `el` names an element of a fiber over `[n]`: regular indices run
/// to `n` (open) or `n - 1` (closed), singular indices the other way round.
pub fn element_in_range(flavor: Flavor, n: usize, el: FiberElement) -> bool {
    match (flavor, el) {
        (Flavor::Open, FiberElement::Reg(i)) => i <= n,
        (Flavor::Open, FiberElement::Sing(i)) => i < n,
        (Flavor::Closed, FiberElement::Sing(i)) => i <= n,
        (Flavor::Closed, FiberElement::Reg(i)) => i < n,
    }
}

/// Whether `src` (in the fiber over the transition's lower base element) is
/// below `dst` (over the upper base element) across `transition`.
///
/// For open trusses the transition runs `[n_src] → [n_dst]`; for closed
/// trusses it runs contravariantly, `[n_dst] → [n_src]`. Writing `α` for the
/// stored map, the rules are:
///
/// open:   `Ri ≤ Rj iff α(i) = j`; `Si ≤ Sj iff α(i) ≤ j < α(i+1)`;
///         `Si ≤ Rj iff α(i) ≤ j ≤ α(i+1)`; regular never below singular.
/// closed: `Sj ≤ Si iff α(i) = j`; `Rj ≤ Ri iff α(i) ≤ j < α(i+1)`;
///         `Sj ≤ Ri iff α(i) ≤ j ≤ α(i+1)`; regular never below singular.
pub fn hom_exists(
    flavor: Flavor,
    src: FiberElement,
    dst: FiberElement,
    transition: &MonotoneMap,
) -> Result<bool, String> {
    let (n_src, n_dst) = match flavor {
        Flavor::Open => (transition.dom(), transition.cod()),
        Flavor::Closed => (transition.cod(), transition.dom()),
    };
    if !element_in_range(flavor, n_src, src) {
        return Err(format!("source element {src} is out of range for a fiber over [{n_src}]"));
    }
    if !element_in_range(flavor, n_dst, dst) {
        return Err(format!("target element {dst} is out of range for a fiber over [{n_dst}]"));
    }
    let a = transition;
    Ok(match flavor {
        Flavor::Open => match (src, dst) {
            (FiberElement::Reg(i), FiberElement::Reg(j)) => a.at(i) == j,
            (FiberElement::Sing(i), FiberElement::Sing(j)) => a.at(i) <= j && j < a.at(i + 1),
            (FiberElement::Sing(i), FiberElement::Reg(j)) => a.at(i) <= j && j <= a.at(i + 1),
            (FiberElement::Reg(_), FiberElement::Sing(_)) => false,
        },
        Flavor::Closed => match (src, dst) {
            (FiberElement::Sing(j), FiberElement::Sing(i)) => a.at(i) == j,
            (FiberElement::Reg(j), FiberElement::Reg(i)) => a.at(i) <= j && j < a.at(i + 1),
            (FiberElement::Sing(j), FiberElement::Reg(i)) => a.at(i) <= j && j <= a.at(i + 1),
            (FiberElement::Reg(_), FiberElement::Sing(_)) => false,
        },
    })
}

/// The order within a single fiber over `[n]`: singular elements sit below
/// their neighbouring regular elements, nothing else is related.
pub fn fiber_le(flavor: Flavor, n: usize, a: FiberElement, b: FiberElement) -> bool {
    if a == b {
        return true;
    }
    hom_exists(flavor, a, b, &MonotoneMap::identity(n)).unwrap_or(false)
}

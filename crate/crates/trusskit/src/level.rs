/*!
One level of a truss tower: a bundle of fibers over a base poset.

A level assigns to every base element a fiber ordinal, and to every related
pair `p ≤ q` of base elements a monotone transition map — covariantly
(`[m_p] → [m_q]`) for open trusses, contravariantly (`[m_q] → [m_p]`) for
closed ones. The level's own element poset (`total_poset`) is generated by
the within-fiber zigzags and the `hom_exists` rules across transitions; it
becomes the base of the next level up.
*/

use crate::fiber::{fiber_le, fiber_len, fiber_order, hom_exists, FiberElement, Flavor};
use crate::order::{FinitePoset, MonotoneMap};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrussLevel {
    pub flavor: Flavor,
    pub base: FinitePoset,
    /// Fiber ordinal per base element: the fiber over `p` is `[fiber_len[p]]`.
    pub fiber_len: Vec<usize>,
    /// Transition maps on strictly related base pairs.
    transitions: BTreeMap<(usize, usize), MonotoneMap>,
}

impl TrussLevel {
    /// Builds a level, checking that transitions are present with the right
    /// arities on exactly the related base pairs. Reflexive entries are
    /// tolerated when they are identities (and not stored); functoriality is
    /// checked separately by [`check_functorial`](Self::check_functorial).
    pub fn new(
        flavor: Flavor,
        base: FinitePoset,
        fiber_len: Vec<usize>,
        transitions: BTreeMap<(usize, usize), MonotoneMap>,
    ) -> Result<Self, String> {
        if fiber_len.len() != base.len() {
            return Err(format!(
                "{} fibers given for a base with {} elements",
                fiber_len.len(),
                base.len()
            ));
        }
        let mut kept = BTreeMap::new();
        for ((p, q), t) in transitions {
            if p >= base.len() || q >= base.len() {
                return Err(format!("transition on ({p}, {q}) is out of range for the base"));
            }
            if p == q {
                if !t.is_identity() || t.dom() != fiber_len[p] {
                    return Err(format!(
                        "transition on the reflexive pair ({p}, {p}) must be the identity on [{}]",
                        fiber_len[p]
                    ));
                }
                continue;
            }
            if !base.le(p, q) {
                return Err(format!("transition on unrelated base pair ({p}, {q})"));
            }
            let (want_dom, want_cod) = match flavor {
                Flavor::Open => (fiber_len[p], fiber_len[q]),
                Flavor::Closed => (fiber_len[q], fiber_len[p]),
            };
            if t.dom() != want_dom || t.cod() != want_cod {
                return Err(format!(
                    "transition on ({p}, {q}) has arity [{}]->[{}], expected [{}]->[{}]",
                    t.dom(),
                    t.cod(),
                    want_dom,
                    want_cod
                ));
            }
            kept.insert((p, q), t);
        }
        for (p, q) in base.strict_pairs() {
            if !kept.contains_key(&(p, q)) {
                return Err(format!("missing transition on related base pair ({p}, {q})"));
            }
        }
        Ok(TrussLevel { flavor, base, fiber_len, transitions: kept })
    }

    /// The transition for `p ≤ q`; the identity when `p = q`, `None` when
    /// the pair is unrelated.
    pub fn transition(&self, p: usize, q: usize) -> Option<MonotoneMap> {
        if p == q {
            return Some(MonotoneMap::identity(self.fiber_len[p]));
        }
        self.transitions.get(&(p, q)).cloned()
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, usize), MonotoneMap> {
        &self.transitions
    }

    pub fn total_len(&self) -> usize {
        self.fiber_len.iter().map(|&n| fiber_len(self.flavor, n)).sum()
    }

    /// Start offset of each base element's fiber in the element numbering.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.fiber_len.len());
        let mut acc = 0;
        for &n in &self.fiber_len {
            out.push(acc);
            acc += fiber_len(self.flavor, n);
        }
        out
    }

    /// All level elements as `(base element, fiber element)`, in element
    /// numbering order: fibers in base order, each in geometric order.
    pub fn elements(&self) -> Vec<(usize, FiberElement)> {
        let mut out = Vec::with_capacity(self.total_len());
        for (p, &n) in self.fiber_len.iter().enumerate() {
            for el in fiber_order(self.flavor, n) {
                out.push((p, el));
            }
        }
        out
    }

    pub fn element(&self, idx: usize) -> (usize, FiberElement) {
        let offsets = self.offsets();
        for (p, &n) in self.fiber_len.iter().enumerate() {
            let end = offsets[p] + fiber_len(self.flavor, n);
            if idx < end {
                return (p, fiber_order(self.flavor, n)[idx - offsets[p]]);
            }
        }
        panic!("element index {idx} out of range");
    }

    pub fn element_index(&self, p: usize, el: FiberElement) -> usize {
        self.offsets()[p] + crate::fiber::fiber_index(self.flavor, self.fiber_len[p], el)
    }

    /// Whether element `(p, a)` is below `(q, b)` in the level's order.
    /// Cross relations run upward in the base for both flavors.
    pub fn le_elements(&self, p: usize, a: FiberElement, q: usize, b: FiberElement) -> bool {
        if p == q {
            return fiber_le(self.flavor, self.fiber_len[p], a, b);
        }
        match self.transition(p, q) {
            Some(t) if self.base.lt(p, q) => hom_exists(self.flavor, a, b, &t).unwrap_or(false),
            _ => false,
        }
    }

    /// The poset of all level elements. Errors when the generated relation
    /// fails a poset law, which for well-formed fibers means the transitions
    /// are not functorial.
    pub fn total_poset(&self) -> Result<FinitePoset, String> {
        let elements = self.elements();
        let n = elements.len();
        let mut le = Vec::with_capacity(n * n);
        for &(p, a) in &elements {
            for &(q, b) in &elements {
                le.push(self.le_elements(p, a, q, b));
            }
        }
        FinitePoset::new(n, le).map_err(|e| {
            format!("element relation is not a poset ({e}); transitions are likely non-functorial")
        })
    }

    /// Functoriality of transitions over all strict chains `p ≤ q ≤ r`.
    pub fn check_functorial(&self) -> Result<(), String> {
        for (p, q) in self.base.strict_pairs() {
            for r in 0..self.base.len() {
                if !self.base.lt(q, r) {
                    continue;
                }
                let t_pq = self.transition(p, q).unwrap();
                let t_qr = self.transition(q, r).unwrap();
                let t_pr = self.transition(p, r).ok_or_else(|| {
                    format!("base relation is not transitive on ({p}, {q}, {r})")
                })?;
                let composite = match self.flavor {
                    Flavor::Open => t_pq.compose(&t_qr),
                    Flavor::Closed => t_qr.compose(&t_pq),
                }
                .map_err(|e| format!("transitions on ({p}, {q}, {r}) do not compose: {e}"))?;
                if composite != t_pr {
                    return Err(format!(
                        "transitions are not functorial on ({p}, {q}, {r}): composite {composite:?} differs from stored {t_pr:?}"
                    ));
                }
            }
        }
        Ok(())
    }
}

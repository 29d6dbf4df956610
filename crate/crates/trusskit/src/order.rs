/*!
Ordinals, monotone maps, and finite posets.

Everything else in the crate is built from two pieces of elementary order
theory: monotone maps between finite ordinals `[n] = {0 < 1 < … < n}`, and
finite posets with a fully materialised order relation. Both are small enough
in practice that dense representations win: a map is its value vector, a
poset is its `≤` matrix.
*/

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// A monotone map `[dom] → [cod]` between finite ordinals, stored as the
/// dense vector of its values. `dom` is implicit in the vector length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonotoneMap {
    cod: usize,
    vals: Vec<usize>,
}

impl core::fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "<")?;
        for (k, v) in self.vals.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ">:[{}]->[{}]", self.dom(), self.cod)
    }
}

impl MonotoneMap {
    /// Builds a map into `[cod]` from its value vector; the domain is
    /// `[vals.len() - 1]`.
    pub fn new(cod: usize, vals: Vec<usize>) -> Result<Self, String> {
        if vals.is_empty() {
            return Err("a monotone map needs at least one value (ordinals are nonempty)".into());
        }
        for w in vals.windows(2) {
            if w[0] > w[1] {
                return Err(format!("values {:?} are not weakly increasing", vals));
            }
        }
        let last = *vals.last().unwrap();
        if last > cod {
            return Err(format!("value {last} exceeds codomain [{cod}]"));
        }
        Ok(MonotoneMap { cod, vals })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { cod: n, vals: (0..=n).collect() }
    }

    /// The unique endpoint-preserving map `[1] → [n]`, `0 ↦ 0`, `1 ↦ n`.
    pub fn endpoints(n: usize) -> Self {
        MonotoneMap { cod: n, vals: vec![0, n] }
    }

    pub fn dom(&self) -> usize {
        self.vals.len() - 1
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn at(&self, i: usize) -> usize {
        self.vals[i]
    }

    pub fn values(&self) -> &[usize] {
        &self.vals
    }

    pub fn is_identity(&self) -> bool {
        self.cod == self.dom() && self.vals.iter().enumerate().all(|(i, &v)| v == i)
    }

    /// `self` followed by `g` (diagrammatic order).
    pub fn compose(&self, g: &MonotoneMap) -> Result<MonotoneMap, String> {
        if self.cod != g.dom() {
            return Err(format!(
                "codomain [{}] of the first map does not match domain [{}] of the second",
                self.cod,
                g.dom()
            ));
        }
        Ok(MonotoneMap { cod: g.cod, vals: self.vals.iter().map(|&v| g.vals[v]).collect() })
    }

    /// Inert maps are the interval inclusions: `α(i) = α(0) + i`.
    pub fn is_inert(&self) -> bool {
        let base = self.vals[0];
        self.vals.iter().enumerate().all(|(i, &v)| v == base + i)
    }

    /// Endpoint-preserving: `α(0) = 0` and `α(dom) = cod`. These are the
    /// maps of `∇`, the category of ordinals with endpoints.
    pub fn is_strict_interval(&self) -> bool {
        self.vals[0] == 0 && *self.vals.last().unwrap() == self.cod
    }

    /// The dual map on gaps: for `α : [n] → [m]` this is the
    /// endpoint-preserving `β : [m+1] → [n+1]` with `β(j) = #{i | α(i) < j}`.
    /// Contravariant: `(f.compose(g)).gaps_dual() = g.gaps_dual().compose(f.gaps_dual())`.
    pub fn gaps_dual(&self) -> MonotoneMap {
        let n = self.dom();
        let vals = (0..=self.cod + 1)
            .map(|j| (0..=n).filter(|&i| self.vals[i] < j).count())
            .collect();
        MonotoneMap { cod: n + 1, vals }
    }

    /// Inverts [`gaps_dual`](Self::gaps_dual): for an endpoint-preserving
    /// `β : [m+1] → [n+1]` recovers `α : [n] → [m]`,
    /// `α(i) = #{j | β(j) ≤ i} − 1`.
    pub fn gaps_dual_inverse(&self) -> Result<MonotoneMap, String> {
        if !self.is_strict_interval() {
            return Err(format!("{self:?} is not endpoint-preserving"));
        }
        if self.dom() == 0 || self.cod == 0 {
            return Err(format!("{self:?} is not a map of gaps (domain or codomain is [0])"));
        }
        let m = self.dom() - 1;
        let n = self.cod - 1;
        let vals: Vec<usize> =
            (0..=n).map(|i| (0..=m + 1).filter(|&j| self.vals[j] <= i).count() - 1).collect();
        MonotoneMap::new(m, vals)
    }
}

/// All monotone maps `[dom] → [cod]`, in lexicographic order of their value
/// vectors. There are `C(dom + cod + 1, dom + 1)` of them.
pub fn enumerate_monotone(dom: usize, cod: usize) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    let mut vals = vec![0usize; dom + 1];
    loop {
        out.push(MonotoneMap { cod, vals: vals.clone() });
        // Odometer step: bump the last position that can still grow, then
        // level everything after it.
        let mut k = dom + 1;
        while k > 0 && vals[k - 1] == cod {
            k -= 1;
        }
        if k == 0 {
            return out;
        }
        vals[k - 1] += 1;
        let v = vals[k - 1];
        for slot in vals.iter_mut().skip(k) {
            *slot = v;
        }
    }
}

/// A finite poset on elements `0 .. len`, with the full order relation
/// stored as a dense `≤` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    len: usize,
    le: Vec<bool>,
}

impl core::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "FinitePoset({}; ", self.len)?;
        let mut first = true;
        for a in 0..self.len {
            for b in 0..self.len {
                if a != b && self.le(a, b) {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{a}<={b}")?;
                    first = false;
                }
            }
        }
        write!(f, ")")
    }
}

impl FinitePoset {
    /// Builds a poset from a complete `≤` matrix (row-major, `len × len`).
    /// The relation must already be reflexive, antisymmetric and transitive.
    pub fn new(len: usize, le: Vec<bool>) -> Result<Self, String> {
        if le.len() != len * len {
            return Err(format!("relation matrix has {} entries, expected {}", le.len(), len * len));
        }
        let p = FinitePoset { len, le };
        p.check_partial_order()?;
        Ok(p)
    }

    /// Builds the poset generated by `pairs`: the reflexive-transitive
    /// closure of the given relation. Errors if the closure has a cycle.
    pub fn from_pairs(len: usize, pairs: &[(usize, usize)]) -> Result<Self, String> {
        let mut le = vec![false; len * len];
        for i in 0..len {
            le[i * len + i] = true;
        }
        for &(a, b) in pairs {
            if a >= len || b >= len {
                return Err(format!("pair ({a}, {b}) out of range for {len} elements"));
            }
            le[a * len + b] = true;
        }
        // Floyd-Warshall style closure.
        for k in 0..len {
            for a in 0..len {
                if le[a * len + k] {
                    for b in 0..len {
                        if le[k * len + b] {
                            le[a * len + b] = true;
                        }
                    }
                }
            }
        }
        FinitePoset::new(len, le)
    }

    pub fn point() -> Self {
        FinitePoset::chain(0)
    }

    /// The total order `0 ≤ 1 ≤ … ≤ top`.
    pub fn chain(top: usize) -> Self {
        let len = top + 1;
        let mut le = vec![false; len * len];
        for a in 0..len {
            for b in a..len {
                le[a * len + b] = true;
            }
        }
        FinitePoset { len, le }
    }

    pub fn discrete(len: usize) -> Self {
        let mut le = vec![false; len * len];
        for i in 0..len {
            le[i * len + i] = true;
        }
        FinitePoset { len, le }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.len + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn opposite(&self) -> FinitePoset {
        let mut le = vec![false; self.len * self.len];
        for a in 0..self.len {
            for b in 0..self.len {
                le[a * self.len + b] = self.le(b, a);
            }
        }
        FinitePoset { len: self.len, le }
    }

    /// All related pairs `(a, b)` with `a ≤ b` and `a ≠ b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len {
            for b in 0..self.len {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn upward_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &a in seed {
            for b in 0..self.len {
                if self.le(a, b) {
                    out.insert(b);
                }
            }
        }
        out
    }

    pub fn downward_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &a in seed {
            for b in 0..self.len {
                if self.le(b, a) {
                    out.insert(b);
                }
            }
        }
        out
    }

    /// The global minimum, if one exists.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len).find(|&a| (0..self.len).all(|b| self.le(a, b)))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len).find(|&a| (0..self.len).all(|b| self.le(b, a)))
    }

    /// Checks that `map` (a value per element of `self`) is order-preserving
    /// into `other`.
    pub fn is_monotone_map_to(&self, other: &FinitePoset, map: &[usize]) -> bool {
        if map.len() != self.len || map.iter().any(|&v| v >= other.len) {
            return false;
        }
        for a in 0..self.len {
            for b in 0..self.len {
                if self.le(a, b) && !other.le(map[a], map[b]) {
                    return false;
                }
            }
        }
        true
    }

    fn check_partial_order(&self) -> Result<(), String> {
        let n = self.len;
        for a in 0..n {
            if !self.le(a, a) {
                return Err(format!("relation is not reflexive at {a}"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    return Err(format!("relation is not antisymmetric on ({a}, {b})"));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.le(a, b) {
                    for c in 0..n {
                        if self.le(b, c) && !self.le(a, c) {
                            return Err(format!(
                                "relation is not transitive: {a} <= {b} <= {c} but not {a} <= {c}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk(cod: usize, vals: &[usize]) -> MonotoneMap {
        MonotoneMap::new(cod, vals.to_vec()).unwrap()
    }

    #[test]
    fn compose_is_diagrammatic() {
        let f = mk(2, &[0, 2]);
        let g = mk(1, &[0, 1, 1]);
        assert_eq!(f.compose(&g).unwrap(), mk(1, &[0, 1]));
        assert_eq!(g.compose(&f).unwrap(), mk(2, &[0, 2, 2]));
        assert!(f.compose(&f).is_err());
    }

    #[test]
    fn identity_laws() {
        let f = mk(3, &[1, 1, 3]);
        assert_eq!(MonotoneMap::identity(2).compose(&f).unwrap(), f);
        assert_eq!(f.compose(&MonotoneMap::identity(3)).unwrap(), f);
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(MonotoneMap::new(2, vec![1, 0]).is_err());
        assert!(MonotoneMap::new(1, vec![0, 2]).is_err());
        assert!(MonotoneMap::new(0, vec![]).is_err());
    }

    #[test]
    fn inert_and_interval_predicates() {
        assert!(mk(2, &[1, 2]).is_inert());
        assert!(!mk(2, &[0, 2]).is_inert());
        assert!(mk(2, &[0, 2]).is_strict_interval());
        assert!(!mk(2, &[1, 2]).is_strict_interval());
        assert!(MonotoneMap::identity(3).is_inert());
        assert!(MonotoneMap::identity(3).is_strict_interval());
    }

    #[test]
    fn gaps_dual_example() {
        // <0,2> : [1] -> [2] dualises to the gap count vector (0,1,1,2).
        assert_eq!(mk(2, &[0, 2]).gaps_dual(), mk(2, &[0, 1, 1, 2]));
    }

    #[test]
    fn gaps_dual_round_trip() {
        for dom in 0..4 {
            for cod in 0..4 {
                for f in enumerate_monotone(dom, cod) {
                    let b = f.gaps_dual();
                    assert!(b.is_strict_interval());
                    assert_eq!(b.dom(), cod + 1);
                    assert_eq!(b.cod(), dom + 1);
                    assert_eq!(b.gaps_dual_inverse().unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn gaps_dual_contravariant() {
        for f in enumerate_monotone(2, 3) {
            for g in enumerate_monotone(3, 2) {
                let lhs = f.compose(&g).unwrap().gaps_dual();
                let rhs = g.gaps_dual().compose(&f.gaps_dual()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn enumerate_counts() {
        // |hom([n], [m])| = C(n + m + 1, n + 1)
        assert_eq!(enumerate_monotone(0, 0).len(), 1);
        assert_eq!(enumerate_monotone(1, 1).len(), 3);
        assert_eq!(enumerate_monotone(2, 1).len(), 4);
        assert_eq!(enumerate_monotone(1, 2).len(), 6);
        let maps = enumerate_monotone(1, 1);
        assert_eq!(maps[0], mk(1, &[0, 0]));
        assert_eq!(maps[1], mk(1, &[0, 1]));
        assert_eq!(maps[2], mk(1, &[1, 1]));
    }

    #[test]
    fn poset_construction_and_closure() {
        let p = FinitePoset::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.le(0, 2));
        assert!(!p.le(2, 0));
        assert!(FinitePoset::from_pairs(2, &[(0, 1), (1, 0)]).is_err());

        let seed: BTreeSet<usize> = [0].into_iter().collect();
        assert_eq!(p.upward_closure(&seed), [0, 1, 2].into_iter().collect());
        let seed: BTreeSet<usize> = [1].into_iter().collect();
        assert_eq!(p.downward_closure(&seed), [0, 1].into_iter().collect());
    }

    #[test]
    fn poset_extrema_and_opposite() {
        let chain = FinitePoset::chain(2);
        assert_eq!(chain.minimum(), Some(0));
        assert_eq!(chain.maximum(), Some(2));
        assert_eq!(chain.opposite().minimum(), Some(2));
        assert_eq!(chain.opposite().opposite(), chain);

        let v = FinitePoset::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(v.minimum(), Some(0));
        assert_eq!(v.maximum(), None);
    }

    #[test]
    fn poset_law_violations_are_named() {
        let err = FinitePoset::new(2, vec![true, false, false, false]).unwrap_err();
        assert!(err.contains("reflexive"));
        // 0<=1, 1<=2 without 0<=2: transitivity violation.
        let mut le = vec![false; 9];
        for i in 0..3 {
            le[i * 3 + i] = true;
        }
        le[1] = true; // 0 <= 1
        le[5] = true; // 1 <= 2
        let err = FinitePoset::new(3, le).unwrap_err();
        assert!(err.contains("transitive"));
    }
}

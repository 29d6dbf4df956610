/*!
Truss towers: iterated bundles of fibers, with optional labels on top.

A tower of dimension `n` over a base poset is a chain of levels: level 1 is a
bundle over the base, and each further level is a bundle over the previous
level's element poset. Level 1 is the *outermost* direction (the last framing
coordinate); the innermost structure lives at level `n`. A truss is a tower
over the point; a bordism is a tower over the 2-element chain.
*/

use crate::fiber::{element_in_range, FiberElement, Flavor};
use crate::label::{Label, Labelling};
use crate::level::TrussLevel;
use crate::order::FinitePoset;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrussTower {
    pub flavor: Flavor,
    pub base: FinitePoset,
    pub levels: Vec<TrussLevel>,
    /// Labels on the elements of the top poset.
    pub labels: Option<Labelling>,
}

/// One finding from [`TrussTower::validate`]. `level` is 1-based; `None`
/// marks tower-wide findings (labels, base).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub level: Option<usize>,
    pub message: String,
}

impl core::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.level {
            Some(k) => write!(f, "level {k}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// The address of an element at some level of a tower: the base element it
/// lies over, then one fiber element per level. Rendered as
/// `"r0/s1"` (point base) or `"2/r0/s1"` (larger base).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementPath {
    pub base: usize,
    pub fibers: Vec<FiberElement>,
}

impl TrussTower {
    /// Builds a tower, checking level flavors and base shapes. Deep
    /// consistency (bases matching element posets, functoriality, label
    /// monotonicity) is the job of [`validate`](Self::validate).
    pub fn new(
        flavor: Flavor,
        base: FinitePoset,
        levels: Vec<TrussLevel>,
        labels: Option<Labelling>,
    ) -> Result<Self, String> {
        for (k, level) in levels.iter().enumerate() {
            if level.flavor != flavor {
                return Err(format!("level {} is {}, tower is {}", k + 1, level.flavor.name(), flavor.name()));
            }
        }
        if let Some(first) = levels.first() {
            if first.base != base {
                return Err("level 1 base does not match the tower base".to_string());
            }
        }
        let tower = TrussTower { flavor, base, levels, labels };
        if let Some(labels) = &tower.labels {
            let top_len = tower.top_len();
            if labels.len() != top_len {
                return Err(format!("{} labels given for {} top elements", labels.len(), top_len));
            }
        }
        Ok(tower)
    }

    pub fn unlabelled(flavor: Flavor, base: FinitePoset, levels: Vec<TrussLevel>) -> Result<Self, String> {
        TrussTower::new(flavor, base, levels, None)
    }

    /// A tower over the point base.
    pub fn truss(flavor: Flavor, levels: Vec<TrussLevel>, labels: Option<Labelling>) -> Result<Self, String> {
        TrussTower::new(flavor, FinitePoset::point(), levels, labels)
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    /// Number of elements in the top poset (base elements for a 0-tower).
    pub fn top_len(&self) -> usize {
        match self.levels.last() {
            Some(level) => level.total_len(),
            None => self.base.len(),
        }
    }

    /// Element poset of level `k` (0 = the base).
    pub fn level_poset(&self, k: usize) -> Result<FinitePoset, String> {
        if k == 0 {
            return Ok(self.base.clone());
        }
        self.levels[k - 1]
            .total_poset()
            .map_err(|e| format!("level {k}: {e}"))
    }

    pub fn top_poset(&self) -> Result<FinitePoset, String> {
        self.level_poset(self.dim())
    }

    pub fn with_labels(&self, labels: Labelling) -> Result<TrussTower, String> {
        TrussTower::new(self.flavor, self.base.clone(), self.levels.clone(), Some(labels))
    }

    pub fn without_labels(&self) -> TrussTower {
        TrussTower { labels: None, ..self.clone() }
    }

    /// Full validation: level bases against the previous level's element
    /// poset, functoriality, poset laws, and label shape/monotonicity.
    pub fn validate(&self) -> Result<(), Vec<ValidationIssue>> {
        let mut issues = Vec::new();
        let mut prev = Some(self.base.clone());
        for (k, level) in self.levels.iter().enumerate() {
            let lvl = k + 1;
            match &prev {
                Some(expected) => {
                    if level.base != *expected {
                        issues.push(ValidationIssue {
                            level: Some(lvl),
                            message: "base does not match the element poset of the level below".to_string(),
                        });
                    }
                }
                None => {
                    issues.push(ValidationIssue {
                        level: Some(lvl),
                        message: "base cannot be checked: the level below has no element poset".to_string(),
                    });
                }
            }
            if let Err(e) = level.check_functorial() {
                issues.push(ValidationIssue { level: Some(lvl), message: e });
            }
            match level.total_poset() {
                Ok(poset) => prev = Some(poset),
                Err(e) => {
                    issues.push(ValidationIssue { level: Some(lvl), message: e });
                    prev = None;
                }
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.top_len() {
                issues.push(ValidationIssue {
                    level: None,
                    message: format!("{} labels given for {} top elements", labels.len(), self.top_len()),
                });
            } else if labels.ordered {
                let top = if self.levels.is_empty() { Some(self.base.clone()) } else { prev };
                match top {
                    Some(top) => {
                        let ints: Option<Vec<i64>> = labels.values.iter().map(|l| l.as_int()).collect();
                        match ints {
                            Some(vals) => {
                                for a in 0..top.len() {
                                    for b in 0..top.len() {
                                        if top.le(a, b) && vals[a] > vals[b] {
                                            issues.push(ValidationIssue {
                                                level: None,
                                                message: format!(
                                                    "ordered labels are not monotone: element {a} <= {b} but label {} > {}",
                                                    vals[a], vals[b]
                                                ),
                                            });
                                        }
                                    }
                                }
                            }
                            None => issues.push(ValidationIssue {
                                level: None,
                                message: "ordered labels must be integers".to_string(),
                            }),
                        }
                    }
                    None => issues.push(ValidationIssue {
                        level: None,
                        message: "ordered labels cannot be checked: top poset is unavailable".to_string(),
                    }),
                }
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }

    /// Pulls the tower back along an order-preserving map `new_base → base`
    /// given by one value per element of `new_base`.
    pub fn base_change(&self, new_base: &FinitePoset, map: &[usize]) -> Result<TrussTower, String> {
        Ok(self.base_change_with_top_map(new_base, map)?.0)
    }

    /// Like [`base_change`](Self::base_change), but also returns the induced
    /// map on top elements: for each top element of the pulled-back tower,
    /// its index in this tower's top poset.
    pub fn base_change_with_top_map(
        &self,
        new_base: &FinitePoset,
        map: &[usize],
    ) -> Result<(TrussTower, Vec<usize>), String> {
        let (tower, mut level_maps) = self.base_change_with_level_maps(new_base, map)?;
        Ok((tower, level_maps.pop().expect("level maps include the top")))
    }

    /// Like [`base_change`](Self::base_change), but also returns the induced
    /// element maps at every level: `maps[k][e]` is the index in this
    /// tower's level-`k` poset of the pulled-back tower's element `e`
    /// (`k = 0` is the base, `k = dim` the top).
    pub fn base_change_with_level_maps(
        &self,
        new_base: &FinitePoset,
        map: &[usize],
    ) -> Result<(TrussTower, Vec<Vec<usize>>), String> {
        if !new_base.is_monotone_map_to(&self.base, map) {
            return Err("base change map is not order-preserving into the tower base".to_string());
        }
        let mut level_maps = vec![map.to_vec()];
        let mut cur_base = new_base.clone();
        let mut new_levels = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            let elem_map = level_maps.last().unwrap();
            let fiber_len: Vec<usize> = elem_map.iter().map(|&old| level.fiber_len[old]).collect();
            let mut transitions = BTreeMap::new();
            for (p, q) in cur_base.strict_pairs() {
                let (op, oq) = (elem_map[p], elem_map[q]);
                let t = level
                    .transition(op, oq)
                    .ok_or_else(|| format!("base change hits unrelated pair ({op}, {oq})"))?;
                transitions.insert((p, q), t);
            }
            let new_level = TrussLevel::new(self.flavor, cur_base.clone(), fiber_len, transitions)?;
            let mut next_map = Vec::with_capacity(new_level.total_len());
            for (p, el) in new_level.elements() {
                next_map.push(level.element_index(elem_map[p], el));
            }
            cur_base = new_level.total_poset()?;
            new_levels.push(new_level);
            level_maps.push(next_map);
        }
        let top_map = level_maps.last().unwrap();
        let labels = self.labels.as_ref().map(|l| Labelling {
            values: top_map.iter().map(|&old| l.values[old].clone()).collect(),
            ordered: l.ordered,
        });
        let tower = TrussTower::new(self.flavor, new_base.clone(), new_levels, labels)?;
        Ok((tower, level_maps))
    }

    /// Keeps levels `1 ..= m`, dropping the rest and the labels.
    pub fn truncate(&self, m: usize) -> TrussTower {
        TrussTower {
            flavor: self.flavor,
            base: self.base.clone(),
            levels: self.levels[..m.min(self.levels.len())].to_vec(),
            labels: None,
        }
    }

    /// The sub-tower of everything above one element of level `k`: a tower
    /// of dimension `dim - k` over the point. Labels restrict along.
    pub fn slice_above(&self, k: usize, elem: usize) -> Result<TrussTower, String> {
        let base = self.level_poset(k)?;
        if elem >= base.len() {
            return Err(format!("element {elem} out of range at level {k}"));
        }
        let upper = TrussTower::new(self.flavor, base, self.levels[k..].to_vec(), self.labels.clone())?;
        upper.base_change(&FinitePoset::point(), &[elem])
    }

    /// The path of element `idx` of level `k` (`k = 0` addresses base
    /// elements; the path then has no fiber components).
    pub fn element_path(&self, k: usize, idx: usize) -> ElementPath {
        let mut fibers = vec![];
        let mut cur = idx;
        for level in self.levels[..k].iter().rev() {
            let (p, el) = level.element(cur);
            fibers.push(el);
            cur = p;
        }
        fibers.reverse();
        ElementPath { base: cur, fibers }
    }

    pub fn top_path(&self, idx: usize) -> ElementPath {
        self.element_path(self.dim(), idx)
    }

    /// Resolves a path to its element index at level `path.fibers.len()`.
    pub fn path_index(&self, path: &ElementPath) -> Result<usize, String> {
        if path.base >= self.base.len() {
            return Err(format!("base element {} out of range", path.base));
        }
        if path.fibers.len() > self.dim() {
            return Err(format!(
                "path has {} fiber components but the tower has dimension {}",
                path.fibers.len(),
                self.dim()
            ));
        }
        let mut cur = path.base;
        for (k, &el) in path.fibers.iter().enumerate() {
            let level = &self.levels[k];
            let n = level.fiber_len[cur];
            if !element_in_range(self.flavor, n, el) {
                return Err(format!(
                    "component {el} is out of range for the fiber over [{n}] at level {}",
                    k + 1
                ));
            }
            cur = level.element_index(cur, el);
        }
        Ok(cur)
    }

    /// Canonical string form of a path; the base component is omitted when
    /// the tower base is a point.
    pub fn path_string(&self, path: &ElementPath) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.base.len() > 1 {
            parts.push(path.base.to_string());
        }
        for el in &path.fibers {
            parts.push(el.to_string());
        }
        parts.join("/")
    }

    /// Parses a path addressed at level `k` (i.e. with `k` fiber
    /// components).
    pub fn parse_path(&self, k: usize, s: &str) -> Result<ElementPath, String> {
        let comps: Vec<&str> = if s.is_empty() { vec![] } else { s.split('/').collect() };
        let (base, rest): (usize, &[&str]) = if self.base.len() > 1 {
            let first = comps
                .first()
                .ok_or_else(|| "path is missing its base component".to_string())?;
            let b = first
                .parse::<usize>()
                .map_err(|_| format!("base component '{first}' is not a number"))?;
            (b, &comps[1..])
        } else {
            (0, &comps[..])
        };
        if rest.len() != k {
            return Err(format!("path '{s}' has {} fiber components, expected {k}", rest.len()));
        }
        let mut fibers = Vec::with_capacity(rest.len());
        for comp in rest {
            fibers.push(parse_fiber_element(comp)?);
        }
        let path = ElementPath { base, fibers };
        self.path_index(&path)?;
        Ok(path)
    }

    /// Convenience: canonical string of top element `idx`.
    pub fn top_path_string(&self, idx: usize) -> String {
        self.path_string(&self.top_path(idx))
    }

    pub fn label(&self, top_idx: usize) -> Option<&Label> {
        self.labels.as_ref().map(|l| l.get(top_idx))
    }
}

pub fn parse_fiber_element(comp: &str) -> Result<FiberElement, String> {
    let (kind, num) = comp.split_at(1.min(comp.len()));
    let idx: usize = num
        .parse()
        .map_err(|_| format!("'{comp}' is not a fiber element (expected rN or sN)"))?;
    match kind {
        "r" => Ok(FiberElement::Reg(idx)),
        "s" => Ok(FiberElement::Sing(idx)),
        _ => Err(format!("'{comp}' is not a fiber element (expected rN or sN)")),
    }
}

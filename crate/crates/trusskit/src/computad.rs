//! Finite computad signatures and atom-wise type checking.
//!
//! A signature declares generators, each carrying a *local model*: a
//! normalized progressive atom whose labels pair a dimension label with a
//! generator id.  A generator labelling of a diagrammatic truss typechecks
//! when every element's decorated atom normalizes to the local model of
//! its generator.  The harness validates the two computad axioms at finite
//! scale: labellings are determined by their atom restrictions (sheaf),
//! and transport along active bordisms is a bijection on valid labellings
//! (isotopy).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::diagram::{dimension_labels, is_progressive, progressive_labels};
use crate::fiber::Flavor;
use crate::label::{Label, Labelling};
use crate::normalize::{deletions, normalize};
use crate::ops::bordism::Bordism;
use crate::ops::grid::grid;
use crate::ops::stype::stype;
use crate::ops::subtruss::{atom_at, SubTruss};
use crate::tower::TrussTower;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    /// Cell dimension of the generator; its local model's minimum carries
    /// the complementary dimension label.
    pub dim: usize,
    /// A normalized progressive atom with `Pair(dimension, generator)`
    /// labels, the shape a decorated atom must normalize to.
    pub local_model: TrussTower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub ambient_dim: usize,
    pub generators: Vec<Generator>,
}

/// Split `Pair(Int, Str)` decoration labels into dimension and generator
/// components.
fn split_decoration(t: &TrussTower) -> Result<(Vec<i64>, Vec<String>), String> {
    let labels = t.labels.as_ref().ok_or("decoration labels are missing")?;
    let mut dims = Vec::with_capacity(labels.len());
    let mut gens = Vec::with_capacity(labels.len());
    for (p, l) in labels.values.iter().enumerate() {
        match l {
            Label::Pair(a, b) => match (a.as_ref(), b.as_ref()) {
                (Label::Int(d), Label::Str(g)) => {
                    dims.push(*d);
                    gens.push(g.clone());
                }
                _ => return Err(format!("element {p} is not decorated as (dimension, id)")),
            },
            _ => return Err(format!("element {p} is not decorated as (dimension, id)")),
        }
    }
    Ok((dims, gens))
}

/// Decorate a dimension-labelled tower with generator ids: each top
/// element gets the label `Pair(dimension, id)`.
pub fn decorate(t: &TrussTower, lambda: &[String]) -> Result<TrussTower, String> {
    let ell = dimension_labels(t)?;
    if lambda.len() != ell.len() {
        return Err(format!(
            "{} generator labels for {} elements",
            lambda.len(),
            ell.len()
        ));
    }
    let values = ell
        .iter()
        .zip(lambda)
        .map(|(&d, g)| Label::pair(Label::Int(d as i64), Label::Str(g.clone())))
        .collect();
    t.with_labels(Labelling::equality(values))
}

impl Signature {
    pub fn new(ambient_dim: usize, generators: Vec<Generator>) -> Result<Self, String> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.id.clone()) {
                return Err(format!("duplicate generator id {}", g.id));
            }
            if g.dim > ambient_dim {
                return Err(format!(
                    "generator {} has dimension {} above the ambient {}",
                    g.id, g.dim, ambient_dim
                ));
            }
            let model = &g.local_model;
            if model.flavor != Flavor::Open || model.dim() != ambient_dim {
                return Err(format!(
                    "local model of {} is not an open {}-truss",
                    g.id, ambient_dim
                ));
            }
            let (dims, gens) = split_decoration(model)?;
            if !deletions(model)?.is_empty() {
                return Err(format!("local model of {} is not normal", g.id));
            }
            let dim_labels = Labelling::ordered(dims.iter().map(|&d| Label::Int(d)).collect());
            let projected = model.with_labels(dim_labels)?;
            if !is_progressive(&projected)? {
                return Err(format!("local model of {} is not progressive", g.id));
            }
            let min = projected
                .top_poset()?
                .minimum()
                .ok_or_else(|| format!("local model of {} has no minimum", g.id))?;
            if gens[min] != g.id || dims[min] != (ambient_dim - g.dim) as i64 {
                return Err(format!(
                    "the minimum of {}'s local model carries ({}, {}), expected ({}, {})",
                    g.id,
                    dims[min],
                    gens[min],
                    ambient_dim - g.dim,
                    g.id
                ));
            }
        }
        Ok(Signature {
            ambient_dim,
            generators,
        })
    }

    pub fn generator(&self, id: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.id == id)
    }
}

/// A failed atom check: the element whose decorated atom does not
/// normalize to its generator's local model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub element: String,
    pub generator: String,
    pub message: String,
}

/// Check a generator labelling against a signature: every element's
/// decorated atom must normalize to the local model of its generator.
/// Returns the violations (empty when the labelling typechecks); unknown
/// generator ids are an error.
pub fn typecheck(
    m: &TrussTower,
    lambda: &[String],
    sig: &Signature,
) -> Result<Vec<Violation>, String> {
    let decorated = decorate(m, lambda)?;
    for g in lambda {
        if sig.generator(g).is_none() {
            return Err(format!("unknown generator id {g}"));
        }
    }
    let mut violations = Vec::new();
    for p in 0..decorated.top_len() {
        let model = &sig.generator(&lambda[p]).unwrap().local_model;
        let sub = atom_at(&decorated, p)?;
        let nf = normalize(&sub.tower)?.nf;
        if nf != *model {
            violations.push(Violation {
                element: m.top_path_string(p),
                generator: lambda[p].clone(),
                message: format!(
                    "the atom at {} normalizes to a {}-element truss that is not the local model of {}",
                    m.top_path_string(p),
                    nf.top_len(),
                    lambda[p]
                ),
            });
        }
    }
    Ok(violations)
}

/// Pull a generator labelling back along an active bordism by minimum
/// tracking: each source element takes the label of the least target
/// element above it.
pub fn transport(f: &Bordism, lambda_target: &[String]) -> Result<Vec<String>, String> {
    if !f.classify()?.active {
        return Err("transport applies to active bordisms".to_string());
    }
    let poset = f.tower().top_poset()?;
    let (src, tgt) = f.end_inclusions()?;
    if lambda_target.len() != tgt.len() {
        return Err(format!(
            "{} labels for {} target elements",
            lambda_target.len(),
            tgt.len()
        ));
    }
    let target_poset = f.target()?.top_poset()?;
    let mut out = Vec::with_capacity(src.len());
    for (p, &sp) in src.iter().enumerate() {
        let ups: Vec<usize> = (0..tgt.len()).filter(|&j| poset.le(sp, tgt[j])).collect();
        let min = ups
            .iter()
            .copied()
            .find(|&j0| ups.iter().all(|&j| target_poset.le(j0, j)))
            .ok_or_else(|| format!("source element {p} has no least target above it"))?;
        out.push(lambda_target[min].clone());
    }
    Ok(out)
}

/// Generator id for a singularity type, e.g. `g[1,0]`.
pub fn stype_id(bits: &[bool]) -> String {
    let mut s = String::from("g[");
    for (i, &b) in bits.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push(if b { '1' } else { '0' });
    }
    s.push(']');
    s
}

/// Label every element by the generator of its own singularity type: the
/// stype of its normalized atom.
pub fn derived_generator_labelling(t: &TrussTower) -> Result<Vec<String>, String> {
    dimension_labels(t)?;
    let mut out = Vec::with_capacity(t.top_len());
    for p in 0..t.top_len() {
        let sub = atom_at(t, p)?;
        out.push(stype_id(&stype(&normalize(&sub.tower)?.nf)));
    }
    Ok(out)
}

/// The free signature in ambient dimension `n`: one generator per
/// realizable singularity type `1^k 0^(n-k)`, with the decorated grid of
/// that type as local model.  (Non-prefix types normalize away into
/// regions and admit no normal local model.)
pub fn free_signature(n: usize) -> Result<Signature, String> {
    let mut generators = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let bits: Vec<bool> = (0..n).map(|j| j < k).collect();
        let dims: Vec<usize> = bits.iter().map(|&b| b as usize).collect();
        let g = grid(Flavor::Open, &dims);
        let labelled = g.with_labels(progressive_labels(&g)?)?;
        let lambda = derived_generator_labelling(&labelled)?;
        generators.push(Generator {
            id: stype_id(&bits),
            dim: k,
            local_model: decorate(&labelled, &lambda)?,
        });
    }
    Signature::new(n, generators)
}

/// The decorated subatom check used by the labelling search: relabel the
/// precomputed atom with the assignment and compare its normal form with
/// the local model.
fn atom_check(
    sub: &SubTruss,
    ell: &[usize],
    lambda: &[String],
    sig: &Signature,
    p_label: &str,
) -> Result<bool, String> {
    let Some(gen) = sig.generator(p_label) else {
        return Ok(false);
    };
    let dim = sub.tower.dim();
    let values = sub.level_elements[dim]
        .iter()
        .map(|&a| Label::pair(Label::Int(ell[a] as i64), Label::Str(lambda[a].clone())))
        .collect();
    let decorated = sub.tower.with_labels(Labelling::equality(values))?;
    Ok(normalize(&decorated)?.nf == gen.local_model)
}

/// All generator labellings of a dimension-labelled tower that typecheck,
/// found by backtracking with per-atom pruning.
pub fn valid_labellings(m: &TrussTower, sig: &Signature) -> Result<Vec<Vec<String>>, String> {
    let ell = dimension_labels(m)?;
    let n = m.top_len();
    let mut subs = Vec::with_capacity(n);
    for p in 0..n {
        subs.push(atom_at(m, p)?);
    }
    // Atoms whose last element is `i` can be checked once `0..=i` are set.
    let mut ready: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for (p, sub) in subs.iter().enumerate() {
        let last = *sub.level_elements[m.dim()].iter().max().unwrap();
        ready[last].push(p);
    }
    let ids: Vec<String> = sig.generators.iter().map(|g| g.id.clone()).collect();
    let mut assign: Vec<String> = alloc::vec![String::new(); n];
    let mut out = Vec::new();
    fn rec(
        i: usize,
        n: usize,
        ids: &[String],
        ready: &[Vec<usize>],
        subs: &[SubTruss],
        ell: &[usize],
        sig: &Signature,
        assign: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) -> Result<(), String> {
        if i == n {
            out.push(assign.clone());
            return Ok(());
        }
        for id in ids {
            assign[i] = id.clone();
            let mut ok = true;
            for &p in &ready[i] {
                if !atom_check(&subs[p], ell, assign, sig, &assign[p])? {
                    ok = false;
                    break;
                }
            }
            if ok {
                rec(i + 1, n, ids, ready, subs, ell, sig, assign, out)?;
            }
        }
        assign[i] = String::new();
        Ok(())
    }
    rec(0, n, &ids, &ready, &subs, &ell, sig, &mut assign, &mut out)?;
    Ok(out)
}

/// Labellings that restrict to a valid labelling on every atom — the
/// "compatible families" side of the sheaf axiom, computed independently
/// of [`valid_labellings`] by checking atoms within atoms.
fn compatible_families(m: &TrussTower, sig: &Signature) -> Result<Vec<Vec<String>>, String> {
    let ell = dimension_labels(m)?;
    let n = m.top_len();
    let dim = m.dim();
    // For each atom and each of its elements, the atom-within-atom,
    // stated in ambient element indices.
    let mut checks: Vec<(usize, SubTruss)> = Vec::new();
    for p in 0..n {
        let sub = atom_at(m, p)?;
        for (u, &a) in sub.level_elements[dim].iter().enumerate() {
            let inner = atom_at(&sub.tower, u)?;
            let ambient: Vec<usize> = inner.level_elements[dim]
                .iter()
                .map(|&v| sub.level_elements[dim][v])
                .collect();
            let mut lifted = inner.clone();
            lifted.level_elements[dim] = ambient;
            checks.push((a, lifted));
        }
    }
    let ids: Vec<String> = sig.generators.iter().map(|g| g.id.clone()).collect();
    let mut out = Vec::new();
    let mut assign: Vec<String> = alloc::vec![String::new(); n];
    fn rec(
        i: usize,
        n: usize,
        ids: &[String],
        checks: &[(usize, SubTruss)],
        ell: &[usize],
        sig: &Signature,
        assign: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) -> Result<(), String> {
        if i == n {
            out.push(assign.clone());
            return Ok(());
        }
        for id in ids {
            assign[i] = id.clone();
            let mut ok = true;
            for (center, sub) in checks {
                if sub.level_elements[sub.tower.dim()].iter().max() != Some(&i) {
                    continue;
                }
                if !atom_check(sub, ell, assign, sig, &assign[*center])? {
                    ok = false;
                    break;
                }
            }
            if ok {
                rec(i + 1, n, ids, checks, ell, sig, assign, out)?;
            }
        }
        assign[i] = String::new();
        Ok(())
    }
    rec(0, n, &ids, &checks, &ell, sig, &mut assign, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessReport {
    pub sheaves_checked: usize,
    pub isotopies_checked: usize,
    pub labellings_seen: usize,
    pub violations: Vec<String>,
}

/// Validate the two computad axioms on a finite corpus: for every tower,
/// valid labellings coincide with atom-compatible families (sheaf); for
/// every active bordism, transport is a bijection between the valid
/// labellings of its ends (isotopy).
pub fn axiom_harness(
    sig: &Signature,
    towers: &[TrussTower],
    actives: &[Bordism],
) -> Result<HarnessReport, String> {
    let mut report = HarnessReport {
        sheaves_checked: 0,
        isotopies_checked: 0,
        labellings_seen: 0,
        violations: Vec::new(),
    };
    for (i, m) in towers.iter().enumerate() {
        let mut valid = valid_labellings(m, sig)?;
        let mut families = compatible_families(m, sig)?;
        valid.sort();
        families.sort();
        report.labellings_seen += valid.len();
        if valid != families {
            report.violations.push(format!(
                "tower {i}: {} valid labellings but {} atom-compatible families",
                valid.len(),
                families.len()
            ));
        }
        report.sheaves_checked += 1;
    }
    for (i, f) in actives.iter().enumerate() {
        let src = f.source()?;
        let tgt = f.target()?;
        let mut valid_src = valid_labellings(&src, sig)?;
        let valid_tgt = valid_labellings(&tgt, sig)?;
        let mut image = Vec::new();
        for lambda in &valid_tgt {
            let pulled = transport(f, lambda)?;
            if !typecheck(&src, &pulled, sig)?.is_empty() {
                report.violations.push(format!(
                    "bordism {i}: a transported labelling fails to typecheck"
                ));
            }
            image.push(pulled);
        }
        image.sort();
        image.dedup();
        if image.len() != valid_tgt.len() {
            report
                .violations
                .push(format!("bordism {i}: transport is not injective"));
        }
        valid_src.sort();
        if image != valid_src {
            report.violations.push(format!(
                "bordism {i}: transport image has {} labellings, the source has {}",
                image.len(),
                valid_src.len()
            ));
        }
        report.isotopies_checked += 1;
    }
    Ok(report)
}

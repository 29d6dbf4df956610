//! Acceptance gate.  Eleven checks, one test each; every test pins a kernel
//! contract against an oracle computed from first principles inside the test
//! (direct inequalities, transitive closures, exhaustive enumeration, or
//! brute-force search over subsets).  Corpus sizes are asserted so a passing
//! line also certifies the quantifier it ran over.

use std::collections::{BTreeMap, BTreeSet};

use trusskit::computad::{axiom_harness, free_signature};
use trusskit::diagram::{
    canonicalise, check_diagram_map, compose_diagram_map, dimension_labels, is_canonical,
    is_diagrammatic, is_progressive, make_diagram, progressive_labels, CombinatorialDiagram,
    DiagrammaticTruss,
};
use trusskit::normalize::{apply_deletion, deletions, normalize, normalize_exhaustive};
use trusskit::ops::{
    atoms, collage, compactify, compose, dualize, factorize, grid, identity_bordism, is_atom,
    line, retract, shape, smallest_subtruss, stype, Bordism, TowerMap,
};
use trusskit::render::{emit_svg, realize, RenderOptions};
use trusskit::{
    enumerate_monotone, fiber_index, fiber_order, hom_exists, FiberElement, FinitePoset, Flavor,
    Label, Labelling, MonotoneMap, TrussLevel, TrussTower,
};

/// Deterministic corpus generator (splitmix-style LCG).
struct Lcg(u64);

impl Lcg {
    fn new(seed: u64) -> Lcg {
        Lcg(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1))
    }

    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

fn ints(t: &TrussTower, labels: &[i64]) -> TrussTower {
    t.with_labels(Labelling::ordered(
        labels.iter().map(|&v| Label::Int(v)).collect(),
    ))
    .unwrap()
}

/// All dims vectors with at most `max_n` coordinates, each at most `max_m`.
fn dims_vectors(max_n: usize, max_m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_n {
        let mut next = Vec::new();
        for d in &frontier {
            for m in 0..=max_m {
                let mut e = d.clone();
                e.push(m);
                next.push(e);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------- criterion 1

/// The four hom-set rules, written as literal inequalities on the map's
/// values.  `map` acts on regular indices for open fibers and on singular
/// indices for closed ones.
fn hom_oracle(flavor: Flavor, src: FiberElement, dst: FiberElement, map: &MonotoneMap) -> bool {
    use FiberElement::{Reg, Sing};
    match flavor {
        Flavor::Open => match (src, dst) {
            (Reg(i), Reg(j)) => map.at(i) == j,
            (Sing(i), Sing(j)) => map.at(i) <= j && j < map.at(i + 1),
            (Sing(i), Reg(j)) => map.at(i) <= j && j <= map.at(i + 1),
            (Reg(_), Sing(_)) => false,
        },
        Flavor::Closed => match (src, dst) {
            (Sing(j), Sing(i)) => map.at(i) == j,
            (Reg(j), Reg(i)) => map.at(i) <= j && j < map.at(i + 1),
            (Sing(j), Reg(i)) => map.at(i) <= j && j <= map.at(i + 1),
            (Reg(_), Sing(_)) => false,
        },
    }
}

#[test]
fn criterion_01_fiber_homs_match_the_inequality_oracle() {
    let mut checked = 0usize;
    for flavor in [Flavor::Open, Flavor::Closed] {
        for dom in 0..=4 {
            for cod in 0..=4 {
                for map in enumerate_monotone(dom, cod) {
                    let (n_src, n_dst) = match flavor {
                        Flavor::Open => (dom, cod),
                        Flavor::Closed => (cod, dom),
                    };
                    for &src in &fiber_order(flavor, n_src) {
                        for &dst in &fiber_order(flavor, n_dst) {
                            assert_eq!(
                                hom_exists(flavor, src, dst, &map).unwrap(),
                                hom_oracle(flavor, src, dst, &map),
                                "{flavor:?} {src} -> {dst} along {:?}",
                                map.values(),
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 20_000, "corpus too small: {checked}");
}

// ---------------------------------------------------------------- criterion 2

/// Within-fiber order: reflexivity plus singular-under-adjacent-regular.
fn fiber_le(flavor: Flavor, m: usize, x: FiberElement, y: FiberElement) -> bool {
    if x == y {
        return true;
    }
    x.is_sing()
        && y.is_reg()
        && fiber_index(flavor, m, x).abs_diff(fiber_index(flavor, m, y)) == 1
}

#[test]
fn criterion_02_level_posets_match_the_closure_oracle() {
    let mut rng = Lcg::new(2);
    let mut built = 0usize;
    while built < 1000 {
        let flavor = if rng.below(2) == 0 { Flavor::Open } else { Flavor::Closed };
        // Level-1 posets are fences, so every transition choice is functorial.
        let base = line(flavor, rng.below(3)).level_poset(1).unwrap();
        let slices = base.len();
        let fiber_len: Vec<usize> = (0..slices).map(|_| rng.below(4)).collect();
        let mut transitions = BTreeMap::new();
        for (p, q) in base.strict_pairs() {
            let (d, c) = match flavor {
                Flavor::Open => (fiber_len[p], fiber_len[q]),
                Flavor::Closed => (fiber_len[q], fiber_len[p]),
            };
            let maps = enumerate_monotone(d, c);
            transitions.insert((p, q), maps[rng.below(maps.len())].clone());
        }
        let level =
            TrussLevel::new(flavor, base.clone(), fiber_len.clone(), transitions.clone()).unwrap();
        let total = level.total_poset().unwrap();

        // Oracle: reflexive + within-fiber + hom edges, transitively closed.
        let n = total.len();
        assert_eq!(n, fiber_len.iter().map(|&m| 2 * m + 1).sum::<usize>());
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for b in 0..slices {
            for &x in &fiber_order(flavor, fiber_len[b]) {
                for &y in &fiber_order(flavor, fiber_len[b]) {
                    if fiber_le(flavor, fiber_len[b], x, y) {
                        le[level.element_index(b, x) * n + level.element_index(b, y)] = true;
                    }
                }
            }
        }
        for ((p, q), map) in &transitions {
            for &x in &fiber_order(flavor, fiber_len[*p]) {
                for &y in &fiber_order(flavor, fiber_len[*q]) {
                    if hom_exists(flavor, x, y, map).unwrap() {
                        le[level.element_index(*p, x) * n + level.element_index(*q, y)] = true;
                    }
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(
                    total.le(i, j),
                    le[i * n + j],
                    "{flavor:?} level over {slices} slices with fibers {fiber_len:?}: ({i}, {j})"
                );
            }
        }
        built += 1;
    }
    assert!(built >= 1000);
}

// ---------------------------------------------------------------- criterion 3

/// A pseudo-random valid open tower: a grid shrunk by a random walk over the
/// currently applicable deletions.
fn random_open_tower(rng: &mut Lcg) -> TrussTower {
    let n = 1 + rng.below(3);
    let dims: Vec<usize> = (0..n).map(|_| rng.below(3)).collect();
    let mut t = grid(Flavor::Open, &dims);
    for _ in 0..rng.below(4) {
        let sites = deletions(&t).unwrap();
        if sites.is_empty() {
            break;
        }
        let (k, b, i) = sites[rng.below(sites.len())];
        t = apply_deletion(&t, k, b, i).unwrap();
    }
    t
}

#[test]
fn criterion_03_duality_and_compactification_round_trip() {
    let mut rng = Lcg::new(3);
    let mut towers = 0usize;
    while towers < 1000 {
        let t = random_open_tower(&mut rng);

        // Duality carries labels; check the involution on a labelled copy too.
        let labels: Vec<i64> = (0..t.top_len()).map(|_| rng.below(3) as i64).collect();
        let lt = ints(&t, &labels);
        assert_eq!(dualize(&dualize(&lt)), lt);

        for u in [t.clone(), dualize(&t)] {
            let d = dualize(&u);
            assert_eq!(dualize(&d), u);
            for k in 1..=u.dim() {
                assert_eq!(
                    d.level_poset(k).unwrap(),
                    u.level_poset(k).unwrap().opposite(),
                    "level {k} of the dual is not the opposite poset"
                );
            }
            towers += 1;
        }

        assert_eq!(retract(&compactify(&t).unwrap()).unwrap(), t);
    }
    assert!(towers >= 1000);
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_04_gaps_duality_is_a_contravariant_bijection() {
    for n in 0..=4 {
        assert_eq!(
            MonotoneMap::identity(n).gaps_dual(),
            MonotoneMap::identity(n + 1)
        );
        for m in 0..=4 {
            let all = enumerate_monotone(n, m);
            let mut seen = BTreeSet::new();
            for a in &all {
                let d = a.gaps_dual();
                assert_eq!(d.dom(), m + 1);
                assert_eq!(d.cod(), n + 1);
                assert_eq!(d.at(0), 0, "gaps dual must preserve the bottom endpoint");
                assert_eq!(d.at(m + 1), n + 1, "gaps dual must preserve the top endpoint");
                assert_eq!(&d.gaps_dual_inverse().unwrap(), a);
                seen.insert(d.values().to_vec());
            }
            // Injective with exactly the endpoint-preserving maps as image.
            assert_eq!(seen.len(), all.len());
            let endpoint_preserving = enumerate_monotone(m + 1, n + 1)
                .into_iter()
                .filter(|f| f.at(0) == 0 && f.at(m + 1) == n + 1)
                .count();
            assert_eq!(seen.len(), endpoint_preserving);
        }
    }
    for n in 0..=3 {
        for m in 0..=3 {
            for k in 0..=3 {
                for f in enumerate_monotone(n, m) {
                    for g in enumerate_monotone(m, k) {
                        assert_eq!(
                            f.compose(&g).unwrap().gaps_dual(),
                            g.gaps_dual().compose(&f.gaps_dual()).unwrap(),
                            "gaps duality must be contravariant"
                        );
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------- criterion 5

/// A levelwise product map between open grids of equal dimension.
fn product_map(src: &TrussTower, maps: &[MonotoneMap]) -> TowerMap {
    let mut fiber_maps = Vec::with_capacity(src.dim());
    let mut count = 1;
    for (k, m) in maps.iter().enumerate() {
        fiber_maps.push(vec![m.clone(); count]);
        count = src.levels[k].total_len();
    }
    TowerMap {
        base_map: vec![0],
        fiber_maps,
    }
}

#[test]
fn criterion_05_factorization_is_exact_and_the_middle_is_minimal() {
    let mut rng = Lcg::new(5);
    let mut corpus: Vec<Bordism> = Vec::new();

    // Collages of monotone maps between labelled and unlabelled lines.
    for a in 0..=2usize {
        for b in 0..=2usize {
            for map in enumerate_monotone(a, b) {
                let tm = TowerMap {
                    base_map: vec![0],
                    fiber_maps: vec![vec![map.clone()]],
                };
                let (src, dst) = (line(Flavor::Open, a), line(Flavor::Open, b));
                corpus.push(collage(&src, &dst, &tm).unwrap());
                for _ in 0..12 {
                    let ls: Vec<i64> = (0..2 * a + 1).map(|_| rng.below(2) as i64).collect();
                    let ld: Vec<i64> = (0..2 * b + 1).map(|_| rng.below(2) as i64).collect();
                    corpus.push(collage(&ints(&src, &ls), &ints(&dst, &ld), &tm).unwrap());
                }
            }
        }
    }
    // Product maps between small open grids.
    let shapes = [[0, 0], [1, 0], [0, 1], [1, 1]];
    for s in shapes {
        for d in shapes {
            let (st, dt) = (grid(Flavor::Open, &s), grid(Flavor::Open, &d));
            if st.top_len() + dt.top_len() > 10 {
                continue;
            }
            // Level 1 is the last coordinate, level 2 the first.
            for beta in enumerate_monotone(s[1], d[1]) {
                for gamma in enumerate_monotone(s[0], d[0]) {
                    let tm = product_map(&st, &[beta.clone(), gamma.clone()]);
                    corpus.push(collage(&st, &dt, &tm).unwrap());
                    for _ in 0..4 {
                        let ls: Vec<i64> = (0..st.top_len()).map(|_| rng.below(2) as i64).collect();
                        let ld: Vec<i64> = (0..dt.top_len()).map(|_| rng.below(2) as i64).collect();
                        corpus.push(
                            collage(&ints(&st, &ls), &ints(&dt, &ld), &tm).unwrap(),
                        );
                    }
                }
            }
        }
    }
    assert!(corpus.len() >= 500, "corpus too small: {}", corpus.len());

    for f in &corpus {
        assert!(f.tower().top_len() <= 10);
        let fact = factorize(f).unwrap();
        assert_eq!(&compose(&fact.active, &fact.inert).unwrap(), f);
        assert!(fact.active.classify().unwrap().active);
        assert!(fact.inert.classify().unwrap().inert);

        // Independent reach set: target tops related to some source top in
        // the collage's element poset.
        let target = f.target().unwrap();
        let (src_tops, dst_tops) = f.end_inclusions().unwrap();
        let poset = f.tower().top_poset().unwrap();
        let q: BTreeSet<usize> = (0..dst_tops.len())
            .filter(|&j| {
                src_tops
                    .iter()
                    .any(|&i| poset.le(i, dst_tops[j]) || poset.le(dst_tops[j], i))
            })
            .collect();
        let mid: BTreeSet<usize> = fact.middle_selection.iter().copied().collect();
        assert!(q.is_subset(&mid));
        let closed = smallest_subtruss(&target, &q).unwrap();
        assert_eq!(closed.level_elements[target.dim()], fact.middle_selection);
        assert_eq!(closed.tower, fact.middle);

        // Brute force: no closed top set strictly between the reach set and
        // the middle.
        let extra: Vec<usize> = mid.difference(&q).copied().collect();
        assert!(extra.len() <= 12);
        let full = (1u32 << extra.len()) - 1;
        for mask in 0..full {
            let mut m = q.clone();
            for (bit, &e) in extra.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    m.insert(e);
                }
            }
            let c = smallest_subtruss(&target, &m).unwrap();
            let ctops: BTreeSet<usize> =
                c.level_elements[target.dim()].iter().copied().collect();
            assert_ne!(ctops, m, "a closed superset of the reach set undercuts the middle");
        }
    }
}

// ---------------------------------------------------------------- criterion 6

fn check_against_exhaustive_oracle(t: &TrussTower) {
    let n = normalize(t).unwrap();
    assert!(deletions(&n.nf).unwrap().is_empty(), "normal form still deletable");
    assert!(n.witness.classify().unwrap().degeneracy);
    assert_eq!(normalize(&n.nf).unwrap().steps, 0, "normalize is not idempotent");
    assert_eq!(n.nf, normalize_exhaustive(t).unwrap(), "greedy and exhaustive disagree");
}

/// Every 2-level open shape over the point with level-1 fiber `[m1]` and
/// level-2 fibers at most `[1]`, over all transition choices.
fn two_level_shapes(m1: usize) -> Vec<TrussTower> {
    let l1 = TrussLevel::new(Flavor::Open, FinitePoset::point(), vec![m1], BTreeMap::new()).unwrap();
    let base = l1.total_poset().unwrap();
    let slices = base.len();
    let pairs = base.strict_pairs();
    let mut out = Vec::new();
    for fcode in 0..1usize << slices {
        let fibers: Vec<usize> = (0..slices).map(|b| (fcode >> b) & 1).collect();
        let choices: Vec<Vec<MonotoneMap>> = pairs
            .iter()
            .map(|&(p, q)| enumerate_monotone(fibers[p], fibers[q]))
            .collect();
        let mut idx = vec![0usize; pairs.len()];
        loop {
            let transitions: BTreeMap<(usize, usize), MonotoneMap> = pairs
                .iter()
                .enumerate()
                .map(|(c, &pq)| (pq, choices[c][idx[c]].clone()))
                .collect();
            let l2 =
                TrussLevel::new(Flavor::Open, base.clone(), fibers.clone(), transitions).unwrap();
            out.push(TrussTower::truss(Flavor::Open, vec![l1.clone(), l2.clone()], None).unwrap());
            // Odometer over the per-pair transition choices.
            let mut c = 0;
            loop {
                if c == pairs.len() {
                    break;
                }
                idx[c] += 1;
                if idx[c] < choices[c].len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
            if c == pairs.len() {
                break;
            }
        }
    }
    out
}

#[test]
fn criterion_06_normal_forms_match_the_exhaustive_oracle() {
    // The worked one-step example: the doubled height merges away.
    let t = ints(&line(Flavor::Open, 3), &[1, 0, 1, 1, 1, 0, 1]);
    let n = normalize(&t).unwrap();
    assert_eq!(n.steps, 1);
    assert_eq!(n.nf, ints(&line(Flavor::Open, 2), &[1, 0, 1, 0, 1]));
    assert!(n.witness.classify().unwrap().degeneracy);

    let mut seen = 0usize;

    // 1-trusses: every labelling of [m], m <= 4, over a 3-letter alphabet.
    for m in 0..=4usize {
        let shape = line(Flavor::Open, m);
        let top = 2 * m + 1;
        for code in 0..3usize.pow(top as u32) {
            let mut c = code;
            let labels: Vec<i64> = (0..top)
                .map(|_| {
                    let v = (c % 3) as i64;
                    c /= 3;
                    v
                })
                .collect();
            check_against_exhaustive_oracle(&ints(&shape, &labels));
            seen += 1;
        }
    }

    // 2-trusses: small level-1 fibers get the full 2-letter labelling
    // enumeration (first label fixed; normal forms commute with injective
    // relabelling), the [2]-based shapes get a fixed pseudo-random sample.
    for m1 in 0..=2usize {
        for (s, shape) in two_level_shapes(m1).iter().enumerate() {
            let top = shape.top_len();
            if m1 <= 1 {
                for code in 0..1usize << (top - 1) {
                    let labels: Vec<i64> = (0..top)
                        .map(|i| if i == 0 { 0 } else { ((code >> (i - 1)) & 1) as i64 })
                        .collect();
                    check_against_exhaustive_oracle(&ints(shape, &labels));
                    seen += 1;
                }
            } else {
                let mut rng = Lcg::new(600 + s as u64);
                for _ in 0..16 {
                    let labels: Vec<i64> = (0..top).map(|_| rng.below(2) as i64).collect();
                    check_against_exhaustive_oracle(&ints(shape, &labels));
                    seen += 1;
                }
            }
        }
    }
    assert!(seen >= 25_000, "corpus too small: {seen}");
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_07_grids_count_atoms_and_singularity_types() {
    for flavor in [Flavor::Open, Flavor::Closed] {
        for dims in dims_vectors(3, 2) {
            let g = grid(flavor, &dims);
            assert_eq!(g.dim(), dims.len());
            assert_eq!(
                g.top_len(),
                dims.iter().map(|&m| 2 * m + 1).product::<usize>()
            );
            assert!(g.validate().is_ok());
            let bits: Vec<bool> = dims.iter().map(|&m| m != 0).collect();
            assert_eq!(stype(&g), bits);
            let round: Vec<usize> = bits.iter().map(|&b| b as usize).collect();
            assert_eq!(shape(&g), grid(flavor, &round));
        }
    }
    for dims in dims_vectors(3, 2) {
        let g = grid(Flavor::Open, &dims);
        assert_eq!(is_atom(&g).unwrap(), dims.iter().all(|&m| m <= 1));
        let parts = atoms(&g).unwrap();
        assert_eq!(parts.len(), g.top_len());
        let mut covered = BTreeSet::new();
        for (p, part) in parts.iter().enumerate() {
            let members = &part.level_elements[g.dim()];
            assert!(members.contains(&p), "an atom must contain its own element");
            assert!(is_atom(&part.tower).unwrap());
            covered.extend(members.iter().copied());
        }
        assert_eq!(covered.len(), g.top_len(), "atoms must cover the grid");
    }
}

// ---------------------------------------------------------------- criterion 8

/// A vertex with two input wires below and one output wire above.
fn two_input_vertex() -> TrussTower {
    let l1 = TrussLevel::new(Flavor::Open, FinitePoset::point(), vec![1], BTreeMap::new()).unwrap();
    let mut transitions = BTreeMap::new();
    transitions.insert((1, 0), MonotoneMap::new(2, vec![0, 2]).unwrap());
    transitions.insert((1, 2), MonotoneMap::identity(1));
    let l2 = TrussLevel::new(
        Flavor::Open,
        l1.total_poset().unwrap(),
        vec![2, 1, 1],
        transitions,
    )
    .unwrap();
    let t = TrussTower::truss(Flavor::Open, vec![l1, l2], None).unwrap();
    ints(&t, &[2, 1, 2, 1, 2, 2, 0, 2, 2, 1, 2])
}

#[test]
fn criterion_08_progressivity_separates_the_fixed_cases() {
    let vertical_wire = ints(&grid(Flavor::Open, &[1, 0]), &[2, 1, 2]);
    assert!(is_progressive(&vertical_wire).unwrap());
    assert!(is_diagrammatic(&vertical_wire).unwrap());

    let region = ints(&grid(Flavor::Open, &[0, 0]), &[2]);
    assert!(is_progressive(&region).unwrap());

    assert!(is_progressive(&two_input_vertex()).unwrap());
    assert!(is_diagrammatic(&two_input_vertex()).unwrap());

    // A wire running along the frame direction is not progressive ...
    let horizontal_wire = ints(&grid(Flavor::Open, &[0, 1]), &[2, 1, 2]);
    assert!(!is_progressive(&horizontal_wire).unwrap());
    assert!(!is_diagrammatic(&horizontal_wire).unwrap());

    // ... unless it is an unmarked germ, which normalizes away.
    let horizontal_germ = ints(&grid(Flavor::Open, &[0, 1]), &[2, 2, 2]);
    assert!(is_progressive(&horizontal_germ).unwrap());

    let crossing = grid(Flavor::Open, &[1, 1]);
    let crossing = crossing
        .with_labels(progressive_labels(&crossing).unwrap())
        .unwrap();
    assert_eq!(
        dimension_labels(&crossing).unwrap(),
        vec![2, 1, 2, 2, 0, 2, 2, 1, 2]
    );
    assert!(is_diagrammatic(&crossing).unwrap());
}

// ---------------------------------------------------------------- criterion 9

/// A string diagram on the square with a second wire the frame cannot reach.
fn cube_diagram() -> CombinatorialDiagram {
    let space = grid(Flavor::Closed, &[1, 1]);
    let source = dualize(&space);

    let l1 = TrussLevel::new(Flavor::Open, FinitePoset::point(), vec![1], BTreeMap::new()).unwrap();
    let mut transitions = BTreeMap::new();
    transitions.insert((1, 0), MonotoneMap::identity(2));
    transitions.insert((1, 2), MonotoneMap::identity(2));
    let l2 = TrussLevel::new(
        Flavor::Open,
        l1.total_poset().unwrap(),
        vec![2, 2, 2],
        transitions,
    )
    .unwrap();
    let s = TrussTower::truss(Flavor::Open, vec![l1, l2], None).unwrap();
    let s = ints(&s, &[2, 1, 2, 1, 2, 2, 0, 2, 1, 2, 2, 1, 2, 1, 2]);
    let window = MonotoneMap::new(2, vec![0, 1]).unwrap();
    let frame = collage(
        &source,
        &s.without_labels(),
        &TowerMap {
            base_map: vec![0],
            fiber_maps: vec![
                vec![MonotoneMap::identity(1)],
                vec![window.clone(), window.clone(), window],
            ],
        },
    )
    .unwrap();
    make_diagram(space, DiagrammaticTruss::new(s).unwrap(), frame).unwrap()
}

#[test]
fn criterion_09_canonicalisation_and_diagram_map_composition() {
    let d = cube_diagram();
    assert!(!is_canonical(&d).unwrap());
    let c = canonicalise(&d).unwrap();
    assert!(is_canonical(&c).unwrap());
    assert!(c.frame.classify().unwrap().active);
    assert_eq!(canonicalise(&c).unwrap(), c, "canonicalisation is idempotent");

    // Exactly the unreachable strata disappear: what stays is the closure of
    // the frame's reach set, which is the crossing-free square diagram.
    assert_eq!(c.diagram.tower.top_len(), 9);
    assert_eq!(
        dimension_labels(&c.diagram.tower).unwrap(),
        vec![2, 1, 2, 2, 0, 2, 2, 1, 2]
    );
    let fact = factorize(&d.frame).unwrap();
    let target = d.frame.target().unwrap();
    let (src_tops, dst_tops) = d.frame.end_inclusions().unwrap();
    let poset = d.frame.tower().top_poset().unwrap();
    let q: BTreeSet<usize> = (0..dst_tops.len())
        .filter(|&j| {
            src_tops
                .iter()
                .any(|&i| poset.le(i, dst_tops[j]) || poset.le(dst_tops[j], i))
        })
        .collect();
    assert_eq!(
        smallest_subtruss(&target, &q).unwrap().level_elements[target.dim()],
        fact.middle_selection
    );

    // Composition of diagram maps: identities, a real inclusion, and both
    // association orders of three-map chains.
    let id_c = identity_bordism(&c.diagram.tower).unwrap();
    let id_d = identity_bordism(&d.diagram.tower).unwrap();
    check_diagram_map(&c, &c, &id_c).unwrap();
    check_diagram_map(&d, &d, &id_d).unwrap();
    let seed: BTreeSet<usize> = fact.middle_selection.iter().copied().collect();
    let g = smallest_subtruss(&d.diagram.tower, &seed).unwrap().embedding;
    check_diagram_map(&c, &d, &g).unwrap();

    let inner = compose_diagram_map(&c, &c, &d, &id_c, &g).unwrap();
    let left = compose_diagram_map(&c, &c, &d, &id_c, &inner).unwrap();
    let paired = compose_diagram_map(&c, &c, &c, &id_c, &id_c).unwrap();
    let right = compose_diagram_map(&c, &c, &d, &paired, &g).unwrap();
    assert_eq!(left, right, "composition must associate");
    check_diagram_map(&c, &d, &left).unwrap();

    let tail = compose_diagram_map(&c, &d, &d, &g, &id_d).unwrap();
    let left2 = compose_diagram_map(&c, &c, &d, &id_c, &tail).unwrap();
    let head = compose_diagram_map(&c, &c, &d, &id_c, &g).unwrap();
    let right2 = compose_diagram_map(&c, &d, &d, &head, &id_d).unwrap();
    assert_eq!(left2, right2, "composition must associate");
}

// --------------------------------------------------------------- criterion 10

#[test]
fn criterion_10_free_signatures_satisfy_the_computad_axioms() {
    for n in 0..=2usize {
        let sig = free_signature(n).unwrap();
        let mut towers = Vec::new();
        let mut actives = Vec::new();
        for dims in dims_vectors(n, 2) {
            if dims.len() != n {
                continue;
            }
            let g = grid(Flavor::Open, &dims);
            let marked = g.with_labels(progressive_labels(&g).unwrap()).unwrap();
            actives.push(identity_bordism(&marked).unwrap());
            // Ghost copy: everything marked top-dimensional normalizes to a
            // region, and its witness is an active degeneracy.
            let ghost = ints(&g, &vec![n as i64; g.top_len()]);
            actives.push(normalize(&ghost).unwrap().witness);
            towers.push(marked);
            towers.push(ghost);
        }
        let report = axiom_harness(&sig, &towers, &actives).unwrap();
        assert!(
            report.violations.is_empty(),
            "dimension {n}: {:?}",
            report.violations
        );
        assert_eq!(report.sheaves_checked, towers.len());
        assert_eq!(report.isotopies_checked, actives.len());
        assert!(report.labellings_seen >= towers.len());
    }
}

// --------------------------------------------------------------- criterion 11

#[test]
fn criterion_11_realization_heights_and_stable_svg() {
    // Closed lines: singular strata at even heights, regular at odd.
    for m in 0..=3usize {
        let d = realize(&line(Flavor::Closed, m)).unwrap();
        assert_eq!(d.vertices.len(), m + 1);
        for (i, v) in d.vertices.iter().enumerate() {
            assert_eq!(v.at, (0.0, 2.0 * i as f64));
        }
        assert_eq!(d.wires.len(), m);
        for (i, w) in d.wires.iter().enumerate() {
            let mid = (w.points[0].1 + w.points[w.points.len() - 1].1) / 2.0;
            assert_eq!(mid, 2.0 * i as f64 + 1.0);
        }
    }
    // Open lines: the roles swap.
    for m in 0..=3usize {
        let d = realize(&line(Flavor::Open, m)).unwrap();
        assert_eq!(d.vertices.len(), m);
        for (i, v) in d.vertices.iter().enumerate() {
            assert_eq!(v.at, (0.0, 2.0 * i as f64 + 1.0));
        }
        assert_eq!(d.wires.len(), m + 1);
        for (i, w) in d.wires.iter().enumerate() {
            let mid = (w.points[0].1 + w.points[w.points.len() - 1].1) / 2.0;
            assert_eq!(mid, 2.0 * i as f64);
        }
    }
    // The same rule fixes both axes in dimension 2.
    let d = realize(&grid(Flavor::Closed, &[1, 1])).unwrap();
    let spots: BTreeSet<(i64, i64)> = d
        .vertices
        .iter()
        .map(|v| (v.at.0 as i64, v.at.1 as i64))
        .collect();
    assert_eq!(spots, BTreeSet::from([(0, 0), (0, 2), (2, 0), (2, 2)]));

    // Determinism: repeated realization and emission is byte-identical.
    let crossing = grid(Flavor::Open, &[1, 1]);
    let fixtures = [
        ints(&grid(Flavor::Open, &[1, 0]), &[2, 1, 2]),
        crossing
            .with_labels(progressive_labels(&crossing).unwrap())
            .unwrap(),
        two_input_vertex(),
        line(Flavor::Closed, 2),
        grid(Flavor::Closed, &[1, 1]),
    ];
    for t in &fixtures {
        let first = emit_svg(&realize(t).unwrap(), &RenderOptions::default());
        assert!(first.starts_with("<svg "));
        for _ in 0..9 {
            assert_eq!(
                emit_svg(&realize(t).unwrap(), &RenderOptions::default()),
                first
            );
        }
    }
}

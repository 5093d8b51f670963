//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its headline numbers.  Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use regmol::flow::{flow_graph, ContractedVertex, DiGraph};
use regmol::generate::{self, Gen};
use regmol::layering::{enumerate_layerings, Layering};
use regmol::matching::enumerate_inclusions;
use regmol::molecule::Molecule;
use regmol::ogposet::{Element, FacePair, Inclusion, OgPoset, Orientation};
use rand::Rng as _;
use regmol::rewrite::{self, strings};
use regmol::submolecule::{
    is_dim3_fast, is_rewritable_submolecule, substitute_with_step, verify_certificate,
    DecisionMode,
};
use regmol::{fixtures, Error};
use std::collections::BTreeSet;
use std::time::Instant;

fn e(dim: usize, index: usize) -> Element {
    Element::new(dim, index)
}

/// face_data exactly as printed in the worked two-cell-with-whisker table.
fn printed_whisker_table() -> Vec<Vec<FacePair>> {
    let pair = |input: &[usize], output: &[usize]| FacePair {
        input: input.to_vec(),
        output: output.to_vec(),
    };
    vec![
        vec![pair(&[], &[]), pair(&[], &[]), pair(&[], &[]), pair(&[], &[])],
        vec![
            pair(&[0], &[1]),
            pair(&[1], &[2]),
            pair(&[2], &[3]),
            pair(&[0], &[2]),
        ],
        vec![pair(&[0, 1], &[3])],
    ]
}

fn printed_whisker_cofaces() -> Vec<Vec<FacePair>> {
    let pair = |input: &[usize], output: &[usize]| FacePair {
        input: input.to_vec(),
        output: output.to_vec(),
    };
    vec![
        vec![
            pair(&[0, 3], &[]),
            pair(&[1], &[0]),
            pair(&[2], &[1, 3]),
            pair(&[], &[2]),
        ],
        vec![
            pair(&[0], &[]),
            pair(&[0], &[]),
            pair(&[], &[]),
            pair(&[], &[0]),
        ],
        vec![pair(&[], &[])],
    ]
}

fn elements_of(subset: &regmol::ogposet::ClosedSubset) -> BTreeSet<Element> {
    subset.elements().collect()
}

fn set(elements: &[Element]) -> BTreeSet<Element> {
    elements.iter().copied().collect()
}

#[test]
fn criterion_01_whisker_fidelity() {
    let started = Instant::now();
    let table = OgPoset::from_face_data(printed_whisker_table()).expect("printed table is valid");
    assert_eq!(
        table.coface_data(),
        &printed_whisker_cofaces()[..],
        "derived coface table must equal the printed one"
    );

    let built = fixtures::binary().paste(&fixtures::arrow(), 0).unwrap();
    let (from_table, relabel) = Molecule::from_raw_poset(table.clone()).unwrap();
    assert_eq!(built, from_table, "binary #0 arrow reproduces the table");

    // per-element face sets agree through the isomorphism
    for x in table.elements() {
        let img = relabel.apply(x);
        for o in Orientation::BOTH {
            let mapped: BTreeSet<usize> = table
                .face_elements(x, o)
                .map(|f| relabel.apply(f).index())
                .collect();
            let direct: BTreeSet<usize> =
                from_table.poset().faces(img, o).iter().copied().collect();
            assert_eq!(mapped, direct, "face sets of {x} through the isomorphism");
        }
    }

    // the four boundary sets printed after the example, in table coordinates
    let total = std::sync::Arc::new(table).total_subset();
    assert_eq!(
        elements_of(&total.boundary(Some(1), Orientation::Input)),
        set(&[e(0, 0), e(0, 1), e(0, 2), e(0, 3), e(1, 0), e(1, 1), e(1, 2)])
    );
    assert_eq!(
        elements_of(&total.boundary(Some(1), Orientation::Output)),
        set(&[e(0, 0), e(0, 2), e(0, 3), e(1, 2), e(1, 3)])
    );
    assert_eq!(
        elements_of(&total.boundary(Some(0), Orientation::Input)),
        set(&[e(0, 0)])
    );
    assert_eq!(
        elements_of(&total.boundary(Some(0), Orientation::Output)),
        set(&[e(0, 3)])
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 1, "criterion must run in under 1 s");
    println!(
        "criterion 01 PASS: whisker face/coface tables and all four boundary sets reproduced ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_02_roundness() {
    let whisker = fixtures::whisker();
    assert!(!whisker.is_round());
    let witness = whisker.roundness_witness().expect("whisker is not round");
    assert_eq!(witness.n, 1);
    let lower = set(&witness.lower_boundary);
    let intersection = set(&witness.intersection);
    assert_eq!(lower, set(&[e(0, 0), e(0, 3)]));
    assert_eq!(intersection, set(&[e(0, 0), e(0, 2), e(1, 2), e(0, 3)]));
    assert!(
        lower.is_subset(&intersection) && lower != intersection,
        "∂₀U strictly inside ∂₁⁺U ∩ ∂₁⁻U"
    );
    assert!(fixtures::round_example().is_round());
    println!(
        "criterion 02 PASS: whisker roundness fails at n = 1 with the printed witness; round_example is round"
    );
}

#[test]
fn criterion_03_layering_counts() {
    let m = fixtures::layerings_ex();
    let counts: Vec<usize> = (-1..=1)
        .map(|k| enumerate_layerings(&m, k).unwrap().len())
        .collect();
    assert_eq!(counts, vec![0, 1, 2]);
    for k in -1..=1 {
        for layering in enumerate_layerings(&m, k).unwrap() {
            assert_eq!(layering.repaste().unwrap(), m, "re-pasting at k = {k}");
        }
    }
    println!("criterion 03 PASS: layering counts (k=-1,0,1) = (0,1,2), all re-paste to the fixture");
}

fn edge_set(graph: &DiGraph<Element>) -> BTreeSet<(Element, Element)> {
    graph.edges().map(|(a, b)| (*a, *b)).collect()
}

#[test]
fn criterion_04_flow_graph_fidelity() {
    let whisker = fixtures::whisker();
    let total = whisker.total_subset();
    let f0 = flow_graph(&total, 0, false);
    assert_eq!(
        edge_set(&f0),
        [
            (e(2, 0), e(1, 2)),
            (e(1, 3), e(1, 2)),
            (e(1, 1), e(1, 2)),
            (e(1, 0), e(1, 1)),
        ]
        .into_iter()
        .collect()
    );
    let m0 = flow_graph(&total, 0, true);
    assert_eq!(edge_set(&m0), [(e(2, 0), e(1, 2))].into_iter().collect());
    let f1 = flow_graph(&total, 1, false);
    assert_eq!(f1.vertices(), &[e(2, 0)]);
    assert_eq!(f1.edge_count(), 0);

    let round = fixtures::round_example();
    let rf1 = flow_graph(&round.total_subset(), 1, false);
    let rm1 = flow_graph(&round.total_subset(), 1, true);
    let expect: BTreeSet<(Element, Element)> = [(e(2, 0), e(2, 1))].into_iter().collect();
    assert_eq!(edge_set(&rf1), expect);
    assert_eq!(edge_set(&rm1), expect);
    println!("criterion 04 PASS: F0/M0/F1 of whisker and F1 = M1 of round_example match edge-for-edge");
}

#[test]
fn criterion_05_canonical_form_properties() {
    let mut gen = Gen::new(501);
    let runs = 200;
    let permutations = 20;
    for i in 0..runs {
        let m = gen.molecule(6, 48);
        assert!(
            m.traversal_iterations() <= 5 * m.size(),
            "run {i}: iteration bound"
        );
        for _ in 0..permutations {
            let shuffled = gen.permute_representation(m.poset());
            let (back, _) = Molecule::from_raw_poset(shuffled).unwrap();
            assert_eq!(back, m, "run {i}: canonical form invariant under permutation");
            assert!(back.traversal_iterations() <= 5 * back.size());
        }
    }
    println!(
        "criterion 05 PASS: {runs} molecules x {permutations} permutations canonicalize identically, all within the 5|U| iteration bound"
    );
}

#[test]
fn criterion_06_strict_omega_laws() {
    let mut gen = Gen::new(601);
    let runs = 100;
    for i in 0..runs {
        let (u, v, w, k) = gen.associative_triple(4).unwrap();
        let left = u.paste(&v, k).unwrap().paste(&w, k).unwrap();
        let right = u.paste(&v.paste(&w, k).unwrap(), k).unwrap();
        assert_eq!(left, right, "associativity run {i}");
    }
    for i in 0..runs {
        let m = gen.molecule(4, 40);
        if m.dim() < 1 {
            continue;
        }
        let k = (i as isize) % m.dim();
        let (out_b, _) = m.boundary_molecule(Some(k), Orientation::Output).unwrap();
        assert_eq!(m.paste(&out_b, k as usize).unwrap(), m, "right unit run {i}");
        let (in_b, _) = m.boundary_molecule(Some(k), Orientation::Input).unwrap();
        assert_eq!(in_b.paste(&m, k as usize).unwrap(), m, "left unit run {i}");
    }
    for i in 0..runs {
        let (u, u2, v, v2, k, n) = gen.interchange_quad(3).unwrap();
        let rows = u
            .paste(&u2, n)
            .unwrap()
            .paste(&v.paste(&v2, n).unwrap(), k)
            .unwrap();
        let cols = u
            .paste(&v, k)
            .unwrap()
            .paste(&u2.paste(&v2, k).unwrap(), n)
            .unwrap();
        assert_eq!(rows, cols, "interchange run {i}");
    }
    println!(
        "criterion 06 PASS: associativity, unitality, interchange hold on {runs} random configurations each"
    );
}

/// Independent matching oracle: enumerate all dimension-preserving
/// injections mapping every face set bijectively.
fn oracle_inclusions(ambient: &Molecule, pattern: &Molecule) -> Vec<Vec<Vec<Element>>> {
    let p = pattern.poset();
    let u = ambient.poset();
    let elements: Vec<Element> = p.elements().collect(); // dimension-ascending
    let mut mapping: Vec<Vec<Element>> = (0..p.face_data().len())
        .map(|d| vec![e(usize::MAX, usize::MAX); p.card(d)])
        .collect();
    let mut used: Vec<Vec<bool>> = (0..u.face_data().len())
        .map(|d| vec![false; u.card(d)])
        .collect();
    let mut out = Vec::new();
    fn go(
        idx: usize,
        elements: &[Element],
        p: &OgPoset,
        u: &OgPoset,
        mapping: &mut Vec<Vec<Element>>,
        used: &mut Vec<Vec<bool>>,
        out: &mut Vec<Vec<Vec<Element>>>,
    ) {
        if idx == elements.len() {
            out.push(mapping.clone());
            return;
        }
        let x = elements[idx];
        let d = x.dim();
        if d >= u.face_data().len() {
            return;
        }
        'candidates: for c in 0..u.card(d) {
            if used[d][c] {
                continue;
            }
            let img = e(d, c);
            for o in Orientation::BOTH {
                let faces = p.faces(x, o);
                let img_faces = u.faces(img, o);
                if faces.len() != img_faces.len() {
                    continue 'candidates;
                }
                for &f in faces {
                    if !img_faces.contains(&mapping[d - 1][f].index()) {
                        continue 'candidates;
                    }
                }
            }
            mapping[d][x.index()] = img;
            used[d][c] = true;
            go(idx + 1, elements, p, u, mapping, used, out);
            used[d][c] = false;
            mapping[d][x.index()] = e(usize::MAX, usize::MAX);
        }
    }
    go(0, &elements, p, u, &mut mapping, &mut used, &mut out);
    out
}

#[test]
fn criterion_07_matching_oracle_equivalence() {
    let started = Instant::now();
    let mut gen = Gen::new(701);
    let runs = 100;
    let mut nonempty = 0;
    for i in 0..runs {
        let dim = 1 + (i % 3);
        let v = gen.round(dim, 2).unwrap();
        let (u, _) = gen.extend(&v, 1 + i % 3, 40).unwrap();
        let found = enumerate_inclusions(&u, &v).unwrap();
        let mut found_maps: Vec<Vec<Vec<Element>>> = found
            .iter()
            .map(|m| m.inclusion.as_map().mapping().to_vec())
            .collect();
        let mut expected = oracle_inclusions(&u, &v);
        found_maps.sort();
        expected.sort();
        assert_eq!(found_maps, expected, "run {i} (dim {dim}, |U| = {})", u.size());
        if !found_maps.is_empty() {
            nonempty += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "criterion must run in under 60 s, took {elapsed:?}"
    );
    println!(
        "criterion 07 PASS: matching equals brute-force oracle on {runs} instances ({nonempty} with matches) in {} ms",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_08_submolecule_fast_path_equivalence() {
    let mut gen = Gen::new(801);
    let mut dim3_checked = 0;
    let mut accepted = 0;
    let mut attempts = 0;
    while dim3_checked < 100 && attempts < 400 {
        attempts += 1;
        let Ok((u, planted)) = gen.dim3_instance() else {
            continue;
        };
        // the planted inclusion plus every match of the pattern in u
        let v_poset = planted.source();
        let (pattern, _) = Molecule::from_raw_poset((**v_poset).clone()).unwrap();
        let mut inclusions: Vec<Inclusion> = vec![planted];
        if let Ok(matches) = enumerate_inclusions(&u, &pattern) {
            inclusions.extend(matches.into_iter().map(|m| m.inclusion));
        }
        for inclusion in inclusions {
            if dim3_checked >= 100 {
                break;
            }
            let (auto, _) =
                is_rewritable_submolecule(&u, &inclusion, DecisionMode::Auto).unwrap();
            let fast = is_dim3_fast(&u, &inclusion).unwrap();
            let (general, cert) =
                is_rewritable_submolecule(&u, &inclusion, DecisionMode::General).unwrap();
            assert_eq!(auto, general, "auto and general must agree");
            assert_eq!(fast, general, "path-induced test and general must agree");
            if general {
                accepted += 1;
                let cert = cert.expect("general acceptance carries a certificate");
                assert!(
                    verify_certificate(&u, &inclusion, &cert),
                    "certificate must replay"
                );
            }
            dim3_checked += 1;
        }
    }
    assert_eq!(dim3_checked, 100, "need 100 dimension-3 instances");

    // dimensions 1 and 2: every inclusion of a round equal-dimensional
    // pattern is a submolecule, in both modes
    for i in 0..40 {
        let dim = 1 + (i % 2);
        let v = gen.round(dim, 2).unwrap();
        let (u, incl) = gen.extend(&v, 2, 36).unwrap();
        let (auto, _) = is_rewritable_submolecule(&u, &incl, DecisionMode::Auto).unwrap();
        let (general, cert) =
            is_rewritable_submolecule(&u, &incl, DecisionMode::General).unwrap();
        assert!(auto && general, "dim {dim} inclusions are always submolecules");
        let cert = cert.expect("certificate");
        assert!(verify_certificate(&u, &incl, &cert));
    }
    println!(
        "criterion 08 PASS: 100 dim-3 instances agree across auto/fast/general ({accepted} accepted, certificates verified); dim-1/2 always true"
    );
}

#[test]
fn criterion_09_substitution_example() {
    // t = f·g, rule: g ⇒ h·k applied at the second arrow
    let t = {
        let shape = fixtures::arrow().paste(&fixtures::arrow(), 0).unwrap();
        let p = rewrite::Label::new(strings::POINT_LABEL);
        rewrite::Diagram::new(
            shape,
            vec![
                vec![p.clone(), p.clone(), p],
                vec![rewrite::Label::new("f"), rewrite::Label::new("g")],
            ],
        )
        .unwrap()
    };
    let rule = strings::word_rule("split", "g", "hk").unwrap();
    let matches = regmol::match_subdiagram(&t, rule.lhs()).unwrap();
    assert_eq!(matches.len(), 1);
    let app = rewrite::apply(&t, &rule, &matches[0].matched).unwrap();
    let three = fixtures::arrow()
        .paste(&fixtures::arrow(), 0)
        .unwrap()
        .paste(&fixtures::arrow(), 0)
        .unwrap();
    assert_eq!(*app.result.shape(), three, "shape is the three-arrow chain");
    assert_eq!(strings::word_of_diagram(&app.result).unwrap(), "fhk");
    // the reverse rule restores the original diagram
    let reverse = rule.reversed("join").unwrap();
    let back = rewrite::step(&app.result, std::slice::from_ref(&reverse))
        .unwrap()
        .expect("reverse applies");
    assert_eq!(back.result, t);
    println!(
        "criterion 09 PASS: cobinary-shaped rule turns f·g into f·h·k (shape arrow #0 arrow #0 arrow); reverse restores the original"
    );
}

#[test]
fn criterion_10_flow_contraction_lemma() {
    let mut gen = Gen::new(1001);
    // first half: F_{n-1}(U[⟨V⟩/V]) is isomorphic to F_{n-1}U / F_{n-1}V
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < 50 && attempts < 300 {
        attempts += 1;
        let dim = 2 + (attempts % 2);
        let Ok(v) = gen.round(dim, 2) else { continue };
        let Ok((u, incl)) = gen.extend(&v, 1 + attempts % 3, 44) else {
            continue;
        };
        let (ok, _) = is_rewritable_submolecule(&u, &incl, DecisionMode::Auto).unwrap();
        if !ok {
            continue;
        }
        let (v_mol, _) = Molecule::from_raw_poset((**incl.source()).clone()).unwrap();
        let merged = v_mol.merger().unwrap();
        let outcome = substitute_with_step(&u, &incl, &merged, false).unwrap();
        let n = u.dim();

        // flow graph of the substitution result, vertices renamed through
        // the step legs into contraction vertices
        let result_flow = flow_graph(&outcome.result.total_subset(), n - 1, false);
        let merger_top_in_step = outcome
            .cell_leg
            .apply(outcome.cell_target_leg.apply(Element::new(
                merged.dim() as usize,
                0,
            )));
        let rename = |x: &Element| -> ContractedVertex<Element> {
            let in_step = outcome.result_leg.apply(*x);
            if in_step == merger_top_in_step {
                ContractedVertex::Merged
            } else {
                ContractedVertex::Kept(
                    outcome
                        .base_leg
                        .preimage(in_step)
                        .expect("kept cells come from the base"),
                )
            }
        };
        let result_edges: BTreeSet<(ContractedVertex<Element>, ContractedVertex<Element>)> =
            result_flow.edges().map(|(a, b)| (rename(a), rename(b))).collect();

        let ambient_flow = flow_graph(&u.total_subset(), n - 1, false);
        let class: Vec<Element> = incl.image().grade(n as usize).collect();
        let contraction = ambient_flow.contract(&class).unwrap();
        let contraction_edges: BTreeSet<(
            ContractedVertex<Element>,
            ContractedVertex<Element>,
        )> = contraction
            .graph
            .edges()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        assert_eq!(
            result_edges, contraction_edges,
            "flow of substitution vs contraction of flow"
        );
        accepted += 1;
    }
    assert_eq!(accepted, 50, "need 50 accepted substitutions");

    // second half: the topological-sort count identity on random DAGs
    let mut checked = 0;
    while checked < 100 {
        let n = 3 + (checked % 6);
        let g = gen.random_dag(n, 0.4);
        // random connected class
        let mut class: Vec<u32> = Vec::new();
        let verts: Vec<u32> = g.vertices().to_vec();
        let start = verts[checked % verts.len()];
        class.push(start);
        for _ in 0..(checked % 3) {
            let mut extended = false;
            for &v in &verts {
                if class.contains(&v) {
                    continue;
                }
                let mut trial = class.clone();
                trial.push(v);
                if g.induced_subgraph(&trial).is_weakly_connected() {
                    class = trial;
                    extended = true;
                    break;
                }
            }
            if !extended {
                break;
            }
        }
        let consecutive = g
            .topological_sorts()
            .filter(|sort| {
                let positions: Vec<usize> = sort
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| class.contains(v))
                    .map(|(i, _)| i)
                    .collect();
                positions.windows(2).all(|w| w[1] == w[0] + 1)
            })
            .count();
        let inner = g.induced_subgraph(&class).count_topological_sorts();
        let outer = g
            .contract(&class)
            .unwrap()
            .graph
            .count_topological_sorts();
        assert_eq!(
            consecutive,
            inner * outer,
            "sort count identity on {n} vertices with class {class:?}"
        );
        checked += 1;
    }
    println!(
        "criterion 10 PASS: 50 substitutions satisfy the flow-contraction isomorphism; sort-count identity verified on 100 random DAGs"
    );
}

#[test]
fn criterion_11_string_rewriting_embedding() {
    let mut gen = Gen::new(1101);
    let letters = ['a', 'b', 'c'];
    let budget = 50;
    for system_index in 0..20 {
        // random finite string rewrite system over <= 3 letters
        let rule_count = 1 + (system_index % 3);
        let mut pairs: Vec<(String, String)> = Vec::new();
        for _ in 0..rule_count {
            let lhs_len = 1 + gen.rng().gen_range(0..3usize);
            let rhs_len = 1 + gen.rng().gen_range(0..3usize);
            let lhs: String = (0..lhs_len)
                .map(|_| letters[gen.rng().gen_range(0..letters.len())])
                .collect();
            let rhs: String = (0..rhs_len)
                .map(|_| letters[gen.rng().gen_range(0..letters.len())])
                .collect();
            pairs.push((lhs, rhs));
        }
        let rules: Vec<rewrite::Rule> = pairs
            .iter()
            .enumerate()
            .map(|(i, (l, r))| strings::word_rule(&format!("r{i}"), l, r).unwrap())
            .collect();
        let word_len = 1 + gen.rng().gen_range(0..10usize);
        let mut word: String = (0..word_len)
            .map(|_| letters[gen.rng().gen_range(0..letters.len())])
            .collect();

        let mut diagram = strings::word_diagram(&word).unwrap();
        for step_index in 0..budget {
            let machine = rewrite::step(&diagram, &rules).unwrap();
            let oracle = strings::oracle_step(&word, &pairs);
            match (machine, oracle) {
                (None, None) => break,
                (Some(outcome), Some((rule_index, position, next_word))) => {
                    assert_eq!(
                        outcome.rule_index, rule_index,
                        "system {system_index}, step {step_index}: rule choice"
                    );
                    assert_eq!(
                        outcome.matched.matched.anchor,
                        Element::new(1, position),
                        "system {system_index}, step {step_index}: anchor position"
                    );
                    assert_eq!(
                        strings::word_of_diagram(&outcome.result).unwrap(),
                        next_word,
                        "system {system_index}, step {step_index}: resulting word"
                    );
                    diagram = outcome.result;
                    word = next_word;
                }
                (machine, oracle) => panic!(
                    "system {system_index}, step {step_index}: machine {:?} vs oracle {:?}",
                    machine.map(|o| o.rule_index),
                    oracle
                ),
            }
        }
    }
    println!(
        "criterion 11 PASS: 20 random string rewrite systems agree with the oracle step-for-step (rule choice, anchor, and word)"
    );
}

#[test]
fn criterion_12_dim3_decision_scales_linearly() {
    // (also prints the deterministic counters used by the bench command)
    let sizes = [10usize, 50, 100, 250, 500];
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &m in &sizes {
        let chain = generate::globe3_chain(m);
        let seeds: Vec<Element> = (m / 3..=(2 * m) / 3).map(|i| e(3, i)).collect();
        let subset = chain.subset(&seeds).unwrap();
        let (_, inclusion) = chain.materialize(&subset).unwrap();
        let mut samples: Vec<u128> = Vec::new();
        for _ in 0..5 {
            let start = Instant::now();
            let verdict = is_dim3_fast(&chain, &inclusion).unwrap();
            samples.push(start.elapsed().as_micros());
            assert!(verdict, "a middle run of a globe stack is a submolecule");
        }
        samples.sort();
        let median = samples[samples.len() / 2] as f64;
        let edges = generate::e3_edges(chain.poset()) as f64;
        points.push((edges, median));
    }
    // least-squares linear fit time ~ a + b·|E3|
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    assert!(slope > 0.0, "decision time must grow with |E3U|");
    let floor = 300.0; // microseconds; keeps tiny samples out of the ratio
    for (x, y) in &points {
        let fit = (intercept + slope * x).max(floor);
        assert!(
            *y <= 3.0 * fit,
            "size with |E3| = {x}: measured {y} µs exceeds 3x the linear fit {fit:.0} µs"
        );
    }
    println!(
        "criterion 12 PASS: dim-3 decisions over |E3| = {:?} stay within 3x of the linear fit (slope {:.3} µs/edge)",
        points.iter().map(|p| p.0 as usize).collect::<Vec<_>>(),
        slope
    );
}

/// The layering type is part of the public surface exercised above; keep a
/// compile-time witness that its pieces stay exposed.
#[allow(dead_code)]
fn layering_surface(l: &Layering) -> (isize, usize) {
    (l.k, l.layers.len())
}

/// Guard for the error taxonomy the criteria rely on.
#[test]
fn acceptance_preconditions_error_cleanly() {
    let whisker = fixtures::whisker();
    assert!(matches!(
        Molecule::atom(&whisker, &whisker),
        Err(Error::NotRound)
    ));
    let arrow = fixtures::arrow();
    assert!(matches!(
        enumerate_inclusions(&whisker, &arrow),
        Err(Error::DimensionMismatch { .. })
    ));
}

//! Built-in molecules: the standard generators (point, arrow, binary,
//! cobinary, globes) and the worked examples used throughout the tests and
//! the CLI (`examples:` references).
//!
//! `steiner_fig2` and `steiner_fig4` are reconstructions of two classical
//! 3-dimensional atoms known from the literature on directed complexes,
//! shipped for the acyclicity test suite; `framecycle_*` are the graph-level
//! slices of a 4-dimensional molecule whose full face data is not published,
//! so only its flow graphs are reproduced.

use crate::flow::DiGraph;
use crate::molecule::Molecule;
use crate::ogposet::Element;
use std::collections::BTreeMap;
use std::sync::OnceLock;

pub fn point() -> Molecule {
    Molecule::point()
}

/// The 1-dimensional atom `point ⇒ point`.
pub fn arrow() -> Molecule {
    named("arrow").unwrap()
}

/// `(arrow #0 arrow) ⇒ arrow`: one 2-cell merging two arrows into one.
pub fn binary() -> Molecule {
    named("binary").unwrap()
}

/// `arrow ⇒ (arrow #0 arrow)`: one 2-cell splitting an arrow in two.
pub fn cobinary() -> Molecule {
    named("cobinary").unwrap()
}

/// `binary #0 arrow`: a 2-cell with a trailing whisker; not round.
pub fn whisker() -> Molecule {
    named("whisker").unwrap()
}

/// `(cobinary #0 arrow) #1 (arrow #0 binary)`: a round pasting of two
/// 2-cells.
pub fn round_example() -> Molecule {
    named("round_example").unwrap()
}

/// Two 2-cells separated by an arrow: admits one 0-layering and two
/// 1-layerings.
pub fn layerings_ex() -> Molecule {
    named("layerings_ex").unwrap()
}

/// A round pasting of three 2-cells whose merger is a 2-atom with two
/// inputs and two outputs.
pub fn merger_ex() -> Molecule {
    named("merger_ex").unwrap()
}

/// 3-atom whose oriented Hasse diagram has a cycle while all flow graphs
/// are acyclic.
pub fn steiner_fig2() -> Molecule {
    named("steiner_fig2").unwrap()
}

/// 3-atom with a 0-flow cycle between two 1-cells: not dimension-wise
/// acyclic, yet frame-acyclic.
pub fn steiner_fig4() -> Molecule {
    named("steiner_fig4").unwrap()
}

/// The `n`-globe: iterated `g ⇒ g`.
pub fn globe(n: usize) -> Molecule {
    let mut g = Molecule::point();
    for _ in 0..n {
        g = Molecule::atom(&g, &g).expect("globes are round");
    }
    g
}

fn registry() -> &'static BTreeMap<&'static str, Molecule> {
    static REGISTRY: OnceLock<BTreeMap<&'static str, Molecule>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut map = BTreeMap::new();
        let point = Molecule::point();
        let arrow = Molecule::atom(&point, &point).unwrap();
        let two_arrows = arrow.paste(&arrow, 0).unwrap();
        let three_arrows = two_arrows.paste(&arrow, 0).unwrap();
        let binary = Molecule::atom(&two_arrows, &arrow).unwrap();
        let cobinary = Molecule::atom(&arrow, &two_arrows).unwrap();
        let ternary = Molecule::atom(&three_arrows, &arrow).unwrap();
        let whisker = binary.paste(&arrow, 0).unwrap();
        let round_example = cobinary
            .paste(&arrow, 0)
            .unwrap()
            .paste(&arrow.paste(&binary, 0).unwrap(), 1)
            .unwrap();
        let globe2 = Molecule::atom(&arrow, &arrow).unwrap();
        let layerings_ex = globe2
            .paste(&arrow, 0)
            .unwrap()
            .paste(&globe2, 0)
            .unwrap();
        let merger_ex = arrow
            .paste(&cobinary, 0)
            .unwrap()
            .paste(&arrow.paste(&arrow.paste(&cobinary, 0).unwrap(), 0).unwrap(), 1)
            .unwrap()
            .paste(&ternary.paste(&arrow, 0).unwrap(), 1)
            .unwrap();
        let steiner_fig2 = Molecule::atom(
            &arrow
                .paste(&globe2, 0)
                .unwrap()
                .paste(&binary, 1)
                .unwrap(),
            &globe2
                .paste(&arrow, 0)
                .unwrap()
                .paste(&binary, 1)
                .unwrap(),
        )
        .unwrap();
        let steiner_fig4 = Molecule::atom(
            &arrow
                .paste(&cobinary, 0)
                .unwrap()
                .paste(&binary.paste(&arrow, 0).unwrap(), 1)
                .unwrap(),
            &round_example,
        )
        .unwrap();
        map.insert("point", point);
        map.insert("arrow", arrow);
        map.insert("binary", binary);
        map.insert("cobinary", cobinary);
        map.insert("ternary", ternary);
        map.insert("whisker", whisker);
        map.insert("round_example", round_example);
        map.insert("layerings_ex", layerings_ex);
        map.insert("merger_ex", merger_ex);
        map.insert("steiner_fig2", steiner_fig2);
        map.insert("steiner_fig4", steiner_fig4);
        map
    })
}

/// Looks up a built-in molecule, including `globe(n)`.
pub fn named(name: &str) -> Option<Molecule> {
    if let Some(m) = registry().get(name) {
        return Some(m.clone());
    }
    let inner = name.strip_prefix("globe(")?.strip_suffix(')')?;
    let n: usize = inner.parse().ok()?;
    if n > 12 {
        return None;
    }
    Some(globe(n))
}

pub fn names() -> Vec<&'static str> {
    registry().keys().copied().collect()
}

/// 3-flow graph of the 4-dimensional counterexample: two disjoint edges
/// among the four top cells.
pub fn framecycle_f3() -> DiGraph<Element> {
    let e = |i| Element::new(4, i);
    let mut g = DiGraph::new(vec![e(0), e(1), e(2), e(3)]);
    g.add_edge_by_value(e(0), e(2));
    g.add_edge_by_value(e(1), e(3));
    g
}

/// 2-flow restriction of the same counterexample to the slice
/// `cl{(3,0), (3,1), (3,5)}`, where contracting `{(3,0), (3,1)}` closes a
/// cycle through `(3,5)`.
pub fn framecycle_w_slice() -> DiGraph<Element> {
    let e = |i| Element::new(3, i);
    let mut g = DiGraph::new(vec![e(0), e(1), e(5)]);
    g.add_edge_by_value(e(1), e(0));
    g.add_edge_by_value(e(1), e(5));
    g.add_edge_by_value(e(5), e(0));
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_and_sizes_check_out() {
        assert_eq!(arrow().size(), 3);
        assert_eq!(binary().size(), 7);
        assert_eq!(cobinary().size(), 7);
        assert_eq!(whisker().size(), 9);
        assert_eq!(round_example().size(), 11);
        assert_eq!(layerings_ex().size(), 11);
        assert_eq!(globe(3).dim(), 3);
    }

    #[test]
    fn globe_lookup() {
        assert_eq!(named("globe(2)").unwrap().dim(), 2);
        assert!(named("globe(x)").is_none());
        assert!(named("unknown").is_none());
    }

    #[test]
    fn reconstructed_atoms_build() {
        assert_eq!(steiner_fig2().dim(), 3);
        assert!(steiner_fig2().is_atom());
        assert_eq!(steiner_fig4().dim(), 3);
        assert!(steiner_fig4().is_atom());
        assert_eq!(merger_ex().dim(), 2);
        assert!(merger_ex().is_round());
    }
}

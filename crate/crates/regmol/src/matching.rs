//! The molecule matching algorithm: enumerate all inclusions of a round
//! molecule `V` into `U` of the same dimension.
//!
//! Matching one top cell of `V` against a chosen anchor cell of `U` pins
//! every other top cell: `V`'s tops are visited in an order that keeps the
//! codimension-1 flow graph connected, so each next cell shares a face `z`
//! with an already matched one, and the image of `z` has at most one free
//! coface on the required side.

use crate::error::{Error, Result};
use crate::flow::flow_graph;
use crate::molecule::Molecule;
use crate::ogposet::{Element, Inclusion, OgMap, Orientation};
use crate::rewrite::Diagram;
use crate::submolecule::{is_rewritable_submolecule, Certificate, DecisionMode};
use std::collections::HashMap;
use std::sync::Arc;

/// An inclusion of the pattern into the ambient molecule, keyed by the
/// ambient top cell its first pattern cell landed on.
#[derive(Clone, Debug)]
pub struct Match {
    pub inclusion: Inclusion,
    pub anchor: Element,
}

/// A shape match that survived the label and rewritable-submolecule
/// filters.
#[derive(Clone, Debug)]
pub struct SubdiagramMatch {
    pub matched: Match,
    /// Present when the general decision procedure ran.
    pub certificate: Option<Certificate>,
}

/// All inclusions of round `pattern` into `ambient`, complete and
/// duplicate-free, ordered by anchor.
pub fn enumerate_inclusions(ambient: &Molecule, pattern: &Molecule) -> Result<Vec<Match>> {
    let n = ambient.dim();
    if pattern.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: pattern.dim(),
        });
    }
    if !pattern.is_round() {
        return Err(Error::NotRound);
    }
    if n == 0 {
        // point into point: the identity is the single inclusion
        let map = OgMap::new_unchecked(
            Arc::clone(pattern.poset()),
            Arc::clone(ambient.poset()),
            vec![vec![Element::new(0, 0)]],
        );
        return Ok(vec![Match {
            inclusion: Inclusion::new_unchecked(map),
            anchor: Element::new(0, 0),
        }]);
    }
    let n = n as usize;

    let plan = PropagationPlan::new(pattern, n)?;
    let mut closures = ClosureCache::default();
    let mut matches = Vec::new();
    for anchor_index in 0..ambient.poset().card(n) {
        let anchor = Element::new(n, anchor_index);
        if let Some(inclusion) = try_anchor(ambient, pattern, &plan, anchor, &mut closures)? {
            matches.push(Match { inclusion, anchor });
        }
    }
    Ok(matches)
}

/// Visit order for the pattern's top cells, with the linking face for each
/// cell after the first.
struct PropagationPlan {
    tops: Vec<Element>,
    /// `links[k]` for k ≥ 1: (index of earlier top, shared face in pattern
    /// coordinates, orientation of the face relative to the earlier top).
    links: Vec<(usize, Element, Orientation)>,
}

impl PropagationPlan {
    fn new(pattern: &Molecule, n: usize) -> Result<PropagationPlan> {
        let flow = flow_graph(&pattern.total_subset(), n as isize - 1, false);
        let top_count = pattern.poset().card(n);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); top_count];
        for (a, b) in flow.edges() {
            adjacency[a.index()].push(b.index());
            adjacency[b.index()].push(a.index());
        }
        // breadth-first from the least top cell keeps every prefix connected
        let mut order: Vec<usize> = Vec::with_capacity(top_count);
        let mut seen = vec![false; top_count];
        let mut queue = std::collections::VecDeque::new();
        seen[0] = true;
        queue.push_back(0usize);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adjacency[v]
                .iter()
                .copied()
                .filter(|&w| !seen[w])
                .collect();
            next.sort_unstable();
            next.dedup();
            for w in next {
                seen[w] = true;
                queue.push_back(w);
            }
        }
        if order.len() != top_count {
            // a round molecule has a connected codimension-1 flow graph
            return Err(Error::NotConnected);
        }
        let tops: Vec<Element> = order.iter().map(|&i| Element::new(n, i)).collect();

        let poset = pattern.poset();
        let mut links = Vec::with_capacity(top_count.saturating_sub(1));
        for k in 1..top_count {
            let mut found: Option<(usize, Element, Orientation)> = None;
            'outer: for j in 0..k {
                let earlier = tops[j];
                let later = tops[k];
                // least shared codimension-1 face over both orientations
                let mut best: Option<(Element, Orientation)> = None;
                for side in Orientation::BOTH {
                    for &f in poset.faces(earlier, side) {
                        if poset.faces(later, side.flip()).contains(&f) {
                            let z = Element::new(n - 1, f);
                            if best.is_none_or(|(b, _)| z < b) {
                                best = Some((z, side));
                            }
                        }
                    }
                }
                if let Some((z, side)) = best {
                    found = Some((j, z, side));
                    break 'outer;
                }
            }
            match found {
                Some(link) => links.push(link),
                None => return Err(Error::NotConnected),
            }
        }
        Ok(PropagationPlan { tops, links })
    }
}

#[derive(Default)]
struct ClosureCache {
    entries: HashMap<(usize, Element), (Molecule, Inclusion)>,
}

impl ClosureCache {
    fn closure(&mut self, molecule: &Molecule, key: usize, e: Element) -> Result<(Molecule, Inclusion)> {
        if let Some(hit) = self.entries.get(&(key, e)) {
            return Ok(hit.clone());
        }
        let subset = molecule.subset(&[e])?;
        let pair = molecule.materialize(&subset)?;
        self.entries.insert((key, e), pair.clone());
        Ok(pair)
    }
}

const AMBIENT_KEY: usize = 0;
const PATTERN_KEY: usize = 1;

fn try_anchor(
    ambient: &Molecule,
    pattern: &Molecule,
    plan: &PropagationPlan,
    anchor: Element,
    closures: &mut ClosureCache,
) -> Result<Option<Inclusion>> {
    let p_poset = pattern.poset();
    let u_poset = ambient.poset();
    let mut partial: HashMap<Element, Element> = HashMap::new();

    let extend = |partial: &mut HashMap<Element, Element>,
                      v_top: Element,
                      u_top: Element,
                      closures: &mut ClosureCache|
     -> Result<bool> {
        let (v_cl, v_incl) = closures.closure(pattern, PATTERN_KEY, v_top)?;
        let (u_cl, u_incl) = closures.closure(ambient, AMBIENT_KEY, u_top)?;
        if v_cl != u_cl {
            return Ok(false); // the two atoms are not isomorphic
        }
        // the unique isomorphism is positional identity in canonical form
        for d in 0..v_cl.poset().face_data().len() {
            for i in 0..v_cl.poset().card(d) {
                let pos = Element::new(d, i);
                let v_elt = v_incl.apply(pos);
                let u_elt = u_incl.apply(pos);
                if let Some(&prev) = partial.get(&v_elt) {
                    if prev != u_elt {
                        return Ok(false);
                    }
                } else {
                    partial.insert(v_elt, u_elt);
                }
            }
        }
        Ok(true)
    };

    if !extend(&mut partial, plan.tops[0], anchor, closures)? {
        return Ok(None);
    }
    for (k, &(j, z, side)) in plan.links.iter().enumerate() {
        let earlier_image = partial[&plan.tops[j]];
        let z_image = partial[&z];
        // the matched face must have exactly one coface besides the earlier
        // top, on the opposite side
        let candidates = u_poset.cofaces(z_image, side.flip());
        let candidate = match candidates {
            [single] => Element::new(z_image.dim() + 1, *single),
            _ => return Ok(None),
        };
        debug_assert_ne!(candidate, earlier_image);
        let _ = earlier_image;
        if !extend(&mut partial, plan.tops[k + 1], candidate, closures)? {
            return Ok(None);
        }
    }

    // assemble and validate the total map
    let mut mapping: Vec<Vec<Element>> = (0..p_poset.face_data().len())
        .map(|d| vec![Element::new(usize::MAX, usize::MAX); p_poset.card(d)])
        .collect();
    for (v_elt, u_elt) in &partial {
        mapping[v_elt.dim()][v_elt.index()] = *u_elt;
    }
    if mapping
        .iter()
        .flatten()
        .any(|e| e.dim() == usize::MAX)
    {
        return Ok(None);
    }
    let map = OgMap::new_unchecked(Arc::clone(p_poset), Arc::clone(u_poset), mapping);
    match Inclusion::new(map) {
        Ok(inclusion) => Ok(Some(inclusion)),
        Err(_) => Ok(None),
    }
}

/// Matches a labelled subdiagram: shape inclusions filtered by label
/// equality and the rewritable-submolecule decision (auto mode).
pub fn match_subdiagram(target: &Diagram, pattern: &Diagram) -> Result<Vec<SubdiagramMatch>> {
    match_subdiagram_mode(target, pattern, DecisionMode::Auto)
}

/// As [`match_subdiagram`], forcing the general decision procedure so that
/// every surviving match carries a certificate.
pub fn match_subdiagram_certified(
    target: &Diagram,
    pattern: &Diagram,
) -> Result<Vec<SubdiagramMatch>> {
    match_subdiagram_mode(target, pattern, DecisionMode::General)
}

fn match_subdiagram_mode(
    target: &Diagram,
    pattern: &Diagram,
    mode: DecisionMode,
) -> Result<Vec<SubdiagramMatch>> {
    let shape_matches = enumerate_inclusions(target.shape(), pattern.shape())?;
    let mut out = Vec::new();
    for m in shape_matches {
        let labels_agree = pattern
            .shape()
            .poset()
            .elements()
            .all(|e| pattern.label(e) == target.label(m.inclusion.apply(e)));
        if !labels_agree {
            continue;
        }
        let (ok, certificate) = is_rewritable_submolecule(target.shape(), &m.inclusion, mode)?;
        if ok {
            out.push(SubdiagramMatch {
                matched: m,
                certificate,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Brute-force oracle: all dimension-preserving injections that map
    /// every face set bijectively.
    pub(crate) fn brute_force_inclusions(
        ambient: &Molecule,
        pattern: &Molecule,
    ) -> Vec<Vec<Vec<Element>>> {
        let p = pattern.poset();
        let u = ambient.poset();
        let elements: Vec<Element> = p.elements().collect();
        let mut out = Vec::new();
        let mut mapping: Vec<Vec<Element>> = (0..p.face_data().len())
            .map(|d| vec![Element::new(usize::MAX, usize::MAX); p.card(d)])
            .collect();
        let mut used: Vec<Vec<bool>> = (0..u.face_data().len())
            .map(|d| vec![false; u.card(d)])
            .collect();
        fn assign(
            idx: usize,
            elements: &[Element],
            p: &crate::ogposet::OgPoset,
            u: &crate::ogposet::OgPoset,
            mapping: &mut Vec<Vec<Element>>,
            used: &mut Vec<Vec<bool>>,
            out: &mut Vec<Vec<Vec<Element>>>,
        ) {
            if idx == elements.len() {
                out.push(mapping.clone());
                return;
            }
            let e = elements[idx];
            let d = e.dim();
            if d >= u.face_data().len() {
                return;
            }
            'cand: for c in 0..u.card(d) {
                if used[d][c] {
                    continue;
                }
                let img = Element::new(d, c);
                // faces must already be assigned (elements are listed
                // dimension-ascending) and map bijectively
                for o in Orientation::BOTH {
                    let faces = p.faces(e, o);
                    let img_faces = u.faces(img, o);
                    if faces.len() != img_faces.len() {
                        continue 'cand;
                    }
                    for &f in faces {
                        let fi = mapping[d - 1][f];
                        if !img_faces.contains(&fi.index()) {
                            continue 'cand;
                        }
                    }
                }
                mapping[d][e.index()] = img;
                used[d][c] = true;
                assign(idx + 1, elements, p, u, mapping, used, out);
                used[d][c] = false;
                mapping[d][e.index()] = Element::new(usize::MAX, usize::MAX);
            }
        }
        assign(
            0,
            &elements,
            p,
            u,
            &mut mapping,
            &mut used,
            &mut out,
        );
        out
    }

    fn assert_matches_oracle(ambient: &Molecule, pattern: &Molecule) {
        let found = enumerate_inclusions(ambient, pattern).unwrap();
        let oracle = brute_force_inclusions(ambient, pattern);
        let mut found_maps: Vec<Vec<Vec<Element>>> = found
            .iter()
            .map(|m| m.inclusion.as_map().mapping().to_vec())
            .collect();
        let mut oracle_maps = oracle;
        found_maps.sort();
        oracle_maps.sort();
        assert_eq!(found_maps, oracle_maps);
    }

    #[test]
    fn two_in_three_arrows() {
        let arrow = fixtures::arrow();
        let two = arrow.paste(&arrow, 0).unwrap();
        let three = two.paste(&arrow, 0).unwrap();
        let found = enumerate_inclusions(&three, &two).unwrap();
        assert_eq!(found.len(), 2);
        assert_matches_oracle(&three, &two);
    }

    #[test]
    fn identity_match_is_unique() {
        let m = fixtures::round_example();
        let found = enumerate_inclusions(&m, &m).unwrap();
        assert_eq!(found.len(), 1);
        assert_matches_oracle(&m, &m);
    }

    #[test]
    fn binary_in_whisker() {
        let whisker = fixtures::whisker();
        let binary = fixtures::binary();
        let found = enumerate_inclusions(&whisker, &binary).unwrap();
        assert_eq!(found.len(), 1);
        // the image is the closure of the 2-cell
        let image = found[0].inclusion.image();
        assert!(image.contains(Element::new(2, 0)));
        assert_eq!(image.len(), 7);
        assert_matches_oracle(&whisker, &binary);
    }

    #[test]
    fn no_match_when_pattern_larger() {
        let arrow = fixtures::arrow();
        let two = arrow.paste(&arrow, 0).unwrap();
        let found = enumerate_inclusions(&arrow, &two).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn cobinary_not_in_whisker() {
        let found = enumerate_inclusions(&fixtures::whisker(), &fixtures::cobinary()).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn globe_in_layerings_example() {
        let m = fixtures::layerings_ex();
        let globe2 = fixtures::globe(2);
        let found = enumerate_inclusions(&m, &globe2).unwrap();
        assert_eq!(found.len(), 2);
        assert_matches_oracle(&m, &globe2);
    }
}

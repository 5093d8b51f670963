//! Regular molecules: diagram shapes generated by the point, pasting, and
//! atom constructions, kept in canonical traversal order.

mod traversal;

pub use traversal::{canonicalize, traverse, TraversalOutcome};

use crate::error::{Error, Result};
use crate::ogposet::{
    pushout_of_inclusions, ClosedSubset, Element, FacePair, Inclusion, OgMap, OgPoset, Orientation,
};
use std::fmt;
use std::sync::Arc;

/// How a molecule was produced.  Boundaries, layers, and other derived
/// submolecule views are materialized as `View`.
#[derive(Clone)]
pub enum Construction {
    Point,
    Paste {
        k: usize,
        left: Arc<Molecule>,
        right: Arc<Molecule>,
    },
    Atom {
        source: Arc<Molecule>,
        target: Arc<Molecule>,
    },
    View,
}

/// A regular molecule: an oriented graded poset in canonical traversal
/// order, with its construction and cached shape invariants.
///
/// Two molecules are isomorphic exactly when their posets are equal, so
/// `==` on molecules is canonical equality.
#[derive(Clone)]
pub struct Molecule {
    poset: Arc<OgPoset>,
    construction: Construction,
    round: bool,
    pure: bool,
    lydim: isize,
    frdim: isize,
    traversal_iterations: usize,
}

impl PartialEq for Molecule {
    fn eq(&self, other: &Self) -> bool {
        *self.poset == *other.poset
    }
}

impl Eq for Molecule {}

impl fmt::Debug for Molecule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Molecule(dim {}, size {}, round: {}, lydim {}, frdim {})",
            self.dim(),
            self.size(),
            self.round,
            self.lydim,
            self.frdim
        )
    }
}

impl Molecule {
    fn from_canonical(
        poset: Arc<OgPoset>,
        construction: Construction,
        iterations: usize,
    ) -> Molecule {
        let total = poset.total_subset();
        let round = compute_round(&total);
        let pure = total.is_pure();
        let lydim = compute_lydim(&total);
        let frdim = compute_frdim(&total);
        Molecule {
            poset,
            construction,
            round,
            pure,
            lydim,
            frdim,
            traversal_iterations: iterations,
        }
    }

    pub(crate) fn from_view(poset: Arc<OgPoset>, iterations: usize) -> Molecule {
        Molecule::from_canonical(poset, Construction::View, iterations)
    }

    /// The terminal molecule: a single point.
    pub fn point() -> Molecule {
        Molecule {
            poset: Arc::new(OgPoset::point()),
            construction: Construction::Point,
            round: true,
            pure: true,
            lydim: -1,
            frdim: -1,
            traversal_iterations: 1,
        }
    }

    /// Canonicalizes a validated poset, trusting the caller that it is a
    /// regular molecule; molecule-hood of raw data is not decidable here.
    /// Returns the relabelling map from the input coordinates.
    pub fn from_raw_poset(poset: OgPoset) -> Result<(Molecule, OgMap)> {
        let raw = Arc::new(poset);
        let (canonical, map, iterations) = canonicalize(&raw)?;
        Ok((
            Molecule::from_canonical(canonical, Construction::View, iterations),
            map,
        ))
    }

    /// Materializes a closed subset of this molecule's poset as a fresh
    /// molecule, with the inclusion back into this one.
    ///
    /// The subset must be a regular molecule (boundaries, atom closures, and
    /// layering slices all qualify).
    pub fn materialize(&self, subset: &ClosedSubset) -> Result<(Molecule, Inclusion)> {
        let (restricted, embed) = Inclusion::of_subset(subset);
        let (canonical, map, iterations) = canonicalize(&restricted)?;
        let back = invert_iso(&map).compose(embed.as_map())?;
        Ok((
            Molecule::from_canonical(canonical, Construction::View, iterations),
            Inclusion::new_unchecked(back),
        ))
    }

    pub fn poset(&self) -> &Arc<OgPoset> {
        &self.poset
    }

    pub fn dim(&self) -> isize {
        self.poset.dim()
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn is_round(&self) -> bool {
        self.round
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    /// Layering dimension: least `k ≥ -1` such that at most one maximal
    /// element has dimension above `k + 1`.  Equals `-1` exactly for atoms.
    pub fn lydim(&self) -> isize {
        self.lydim
    }

    /// Frame dimension: dimension of the union of pairwise intersections of
    /// closures of distinct maximal elements.
    pub fn frdim(&self) -> isize {
        self.frdim
    }

    /// Whether the molecule has a greatest element.
    pub fn is_atom(&self) -> bool {
        self.lydim == -1
    }

    pub fn traversal_iterations(&self) -> usize {
        self.traversal_iterations
    }

    pub fn total_subset(&self) -> ClosedSubset {
        self.poset.total_subset()
    }

    pub fn subset(&self, elements: &[Element]) -> Result<ClosedSubset> {
        self.poset.closure(elements)
    }

    pub fn boundary_subset(&self, n: Option<isize>, side: Orientation) -> ClosedSubset {
        self.total_subset().boundary(n, side)
    }

    /// Materialized boundary with its inclusion witness.
    pub fn boundary_molecule(
        &self,
        n: Option<isize>,
        side: Orientation,
    ) -> Result<(Molecule, Inclusion)> {
        self.materialize(&self.boundary_subset(n, side))
    }

    /// First dimension at which the roundness equation fails, with both
    /// sides of the failed comparison.
    pub fn roundness_witness(&self) -> Option<RoundnessWitness> {
        roundness_witness(&self.total_subset())
    }

    /// Pasting `self #k other`, canonical form.
    ///
    /// Defined whenever the output `k`-boundary of `self` is isomorphic to
    /// the input `k`-boundary of `other`.  With `k` below both dimensions
    /// this is the generating pasting of molecules; with `k` at or above one
    /// side's dimension it degenerates to the unitality pasting, whose
    /// result is isomorphic to the other side.
    pub fn paste(&self, other: &Molecule, k: usize) -> Result<Molecule> {
        Ok(self.paste_with_witnesses(other, k)?.0)
    }

    /// Pasting with the two inclusion legs into the result.
    pub fn paste_with_witnesses(
        &self,
        other: &Molecule,
        k: usize,
    ) -> Result<(Molecule, Inclusion, Inclusion)> {
        let kk = k as isize;
        let lb = self.boundary_subset(Some(kk), Orientation::Output);
        let rb = other.boundary_subset(Some(kk), Orientation::Input);
        let (lb_poset, lb_embed) = Inclusion::of_subset(&lb);
        let (rb_poset, rb_embed) = Inclusion::of_subset(&rb);
        let (lb_canon, lb_map, _) = canonicalize(&lb_poset)?;
        let (rb_canon, rb_map, _) = canonicalize(&rb_poset)?;
        if *lb_canon != *rb_canon {
            return Err(Error::BoundaryMismatch { k: kk });
        }
        // the unique gluing iso, via the shared canonical coordinates
        let into_left = Inclusion::new_unchecked(invert_iso(&lb_map).compose(lb_embed.as_map())?);
        let into_right = Inclusion::new_unchecked(invert_iso(&rb_map).compose(rb_embed.as_map())?);
        let (raw, leg_left, leg_right) = pushout_of_inclusions(&into_left, &into_right)?;
        let (canonical, relabel, iterations) = canonicalize(&raw)?;
        let relabel_incl = Inclusion::new_unchecked(relabel);
        let left_leg = leg_left.compose(&relabel_incl)?;
        let right_leg = leg_right.compose(&relabel_incl)?;
        let molecule = Molecule::from_canonical(
            canonical,
            Construction::Paste {
                k,
                left: Arc::new(self.clone()),
                right: Arc::new(other.clone()),
            },
            iterations,
        );
        Ok((molecule, left_leg, right_leg))
    }

    /// The atom `self ⇒ other`: one new greatest element whose input faces
    /// are `self`'s top cells and output faces `other`'s.
    pub fn atom(source: &Molecule, target: &Molecule) -> Result<Molecule> {
        Ok(Molecule::atom_with_witnesses(source, target)?.0)
    }

    pub fn atom_with_witnesses(
        source: &Molecule,
        target: &Molecule,
    ) -> Result<(Molecule, Inclusion, Inclusion)> {
        let n = source.dim();
        if n != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: target.dim(),
            });
        }
        if !source.is_round() || !target.is_round() {
            return Err(Error::NotRound);
        }
        let n = n as usize;

        // match the two boundary halves through their canonical forms
        let glue = boundary_glue(source, target)?;

        // elements: all of source, then target's interior, then the top cell
        let t_poset = target.poset();
        let s_poset = source.poset();
        let mut t_to_result: Vec<Vec<Element>> = (0..t_poset.face_data().len())
            .map(|d| vec![Element::new(usize::MAX, usize::MAX); t_poset.card(d)])
            .collect();
        for (t_elt, s_elt) in &glue {
            t_to_result[t_elt.dim()][t_elt.index()] = *s_elt;
        }
        let mut face_data: Vec<Vec<FacePair>> = s_poset.face_data().to_vec();
        for d in 0..t_poset.face_data().len() {
            for idx in 0..t_poset.card(d) {
                if t_to_result[d][idx].dim() == usize::MAX {
                    let new_index = face_data[d].len();
                    t_to_result[d][idx] = Element::new(d, new_index);
                    face_data[d].push(FacePair::default()); // filled below
                }
            }
        }
        for d in 1..t_poset.face_data().len() {
            for idx in 0..t_poset.card(d) {
                let img = t_to_result[d][idx];
                if img.index() < s_poset.card(d) {
                    continue; // glued onto source, faces already present
                }
                let mut pair = FacePair::default();
                for o in Orientation::BOTH {
                    let mut faces: Vec<usize> = t_poset
                        .faces(Element::new(d, idx), o)
                        .iter()
                        .map(|&f| t_to_result[d - 1][f].index())
                        .collect();
                    faces.sort_unstable();
                    match o {
                        Orientation::Input => pair.input = faces,
                        Orientation::Output => pair.output = faces,
                    }
                }
                face_data[d][img.index()] = pair;
            }
        }
        let top_pair = FacePair {
            input: (0..s_poset.card(n)).collect(),
            output: (0..t_poset.card(n))
                .map(|idx| t_to_result[n][idx].index())
                .collect(),
        };
        let mut top_pair = top_pair;
        top_pair.output.sort_unstable();
        while face_data.len() < n + 2 {
            face_data.push(Vec::new());
        }
        face_data[n + 1].push(top_pair);

        let raw = Arc::new(OgPoset::from_face_data_unchecked(face_data));
        let (canonical, relabel, iterations) = canonicalize(&raw)?;
        let relabel_incl = Inclusion::new_unchecked(relabel);
        let source_leg = Inclusion::new_unchecked(OgMap::new_unchecked(
            Arc::clone(s_poset),
            Arc::clone(&raw),
            (0..s_poset.face_data().len())
                .map(|d| (0..s_poset.card(d)).map(|i| Element::new(d, i)).collect())
                .collect(),
        ))
        .compose(&relabel_incl)?;
        let target_leg = Inclusion::new_unchecked(OgMap::new_unchecked(
            Arc::clone(t_poset),
            Arc::clone(&raw),
            t_to_result,
        ))
        .compose(&relabel_incl)?;
        let molecule = Molecule::from_canonical(
            canonical,
            Construction::Atom {
                source: Arc::new(source.clone()),
                target: Arc::new(target.clone()),
            },
            iterations,
        );
        debug_assert!(molecule.is_round());
        Ok((molecule, source_leg, target_leg))
    }

    /// The merger `∂⁻U ⇒ ∂⁺U` of a round molecule of positive dimension.
    pub fn merger(&self) -> Result<Molecule> {
        if !self.is_round() {
            return Err(Error::NotRound);
        }
        if self.dim() < 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.dim(),
            });
        }
        let (src, _) = self.boundary_molecule(None, Orientation::Input)?;
        let (tgt, _) = self.boundary_molecule(None, Orientation::Output)?;
        Molecule::atom(&src, &tgt)
    }

    /// Canonical equality (isomorphism of shapes).
    pub fn canonical_equal(&self, other: &Molecule) -> bool {
        self == other
    }

    /// The unique isomorphism between two molecules, when they are
    /// isomorphic: positional identity in canonical coordinates.
    pub fn find_isomorphism(&self, other: &Molecule) -> Option<OgMap> {
        if self != other {
            return None;
        }
        let mapping = (0..self.poset.face_data().len())
            .map(|d| (0..self.poset.card(d)).map(|i| Element::new(d, i)).collect())
            .collect();
        Some(OgMap::new_unchecked(
            Arc::clone(&self.poset),
            Arc::clone(other.poset()),
            mapping,
        ))
    }

    /// Compact byte serialization of the canonical form, usable as a memo
    /// key; equal bytes characterize isomorphic molecules.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut bytes = Vec::new();
        for grade in self.poset.face_data() {
            bytes.extend_from_slice(&(grade.len() as u32).to_le_bytes());
            for pair in grade {
                for set in [&pair.input, &pair.output] {
                    bytes.extend_from_slice(&(set.len() as u32).to_le_bytes());
                    for &f in set {
                        bytes.extend_from_slice(&(f as u32).to_le_bytes());
                    }
                }
            }
        }
        bytes
    }
}

fn invert_iso(map: &OgMap) -> OgMap {
    let target = map.target();
    let mut mapping: Vec<Vec<Element>> = (0..target.face_data().len())
        .map(|d| vec![Element::new(usize::MAX, usize::MAX); target.card(d)])
        .collect();
    for (d, level) in map.mapping().iter().enumerate() {
        for (k, &img) in level.iter().enumerate() {
            mapping[img.dim()][img.index()] = Element::new(d, k);
        }
    }
    OgMap::new_unchecked(Arc::clone(target), Arc::clone(map.source()), mapping)
}

/// Pairs (target element, source element) identifying the two boundaries of
/// prospective atom operands, checking the halves agree on their overlap.
fn boundary_glue(source: &Molecule, target: &Molecule) -> Result<Vec<(Element, Element)>> {
    let mut pairs: Vec<(Element, Element)> = Vec::new();
    let mut seen: std::collections::HashMap<Element, Element> = std::collections::HashMap::new();
    for side in Orientation::BOTH {
        let sb = source.boundary_subset(None, side);
        let tb = target.boundary_subset(None, side);
        if sb.is_empty() || tb.is_empty() {
            if sb.is_empty() != tb.is_empty() {
                return Err(Error::BoundaryMismatch {
                    k: source.dim() - 1,
                });
            }
            continue; // points: nothing to glue
        }
        let (sb_poset, sb_embed) = Inclusion::of_subset(&sb);
        let (tb_poset, tb_embed) = Inclusion::of_subset(&tb);
        let (sb_canon, sb_map, _) = canonicalize(&sb_poset)?;
        let (tb_canon, tb_map, _) = canonicalize(&tb_poset)?;
        if *sb_canon != *tb_canon {
            return Err(Error::BoundaryMismatch {
                k: source.dim() - 1,
            });
        }
        let t_back = invert_iso(&tb_map);
        for d in 0..sb_canon.face_data().len() {
            for i in 0..sb_canon.card(d) {
                let pos = Element::new(d, i);
                let s_elt = sb_embed.apply(invert_iso(&sb_map).apply(pos));
                let t_elt = tb_embed.apply(t_back.apply(pos));
                if let Some(&prev) = seen.get(&t_elt) {
                    if prev != s_elt {
                        return Err(Error::BoundaryMismatch {
                            k: source.dim() - 2,
                        });
                    }
                } else {
                    seen.insert(t_elt, s_elt);
                    pairs.push((t_elt, s_elt));
                }
            }
        }
    }
    Ok(pairs)
}

/// Failed roundness equation: `∂ₙ⁻ ∩ ∂ₙ⁺ ≠ ∂ₙ₋₁` at dimension `n`.
#[derive(Debug, Clone)]
pub struct RoundnessWitness {
    pub n: isize,
    pub intersection: Vec<Element>,
    pub lower_boundary: Vec<Element>,
}

pub(crate) fn roundness_witness(total: &ClosedSubset) -> Option<RoundnessWitness> {
    for n in 0..total.dim() {
        let minus = total.boundary(Some(n), Orientation::Input);
        let plus = total.boundary(Some(n), Orientation::Output);
        let both = minus.intersection(&plus).expect("same owner");
        let lower = total.boundary_both(Some(n - 1));
        if both != lower {
            return Some(RoundnessWitness {
                n,
                intersection: both.elements().collect(),
                lower_boundary: lower.elements().collect(),
            });
        }
    }
    None
}

pub(crate) fn compute_round(total: &ClosedSubset) -> bool {
    roundness_witness(total).is_none()
}

pub(crate) fn compute_lydim(total: &ClosedSubset) -> isize {
    let dim = total.dim();
    let maximal = total.maximal_elements();
    // count of maximal elements of dimension > k+1, for k from -1 up
    for k in -1..=dim {
        let above = maximal
            .iter()
            .filter(|m| (m.dim() as isize) > k + 1)
            .count();
        if above <= 1 {
            return k;
        }
    }
    dim
}

pub(crate) fn compute_frdim(total: &ClosedSubset) -> isize {
    let maximal = total.maximal_elements();
    let owner = total.owner();
    let closures: Vec<ClosedSubset> = maximal
        .iter()
        .map(|&m| owner.closure_unchecked([m]))
        .collect();
    let mut best: isize = -1;
    for i in 0..closures.len() {
        for j in (i + 1)..closures.len() {
            let meet = closures[i].intersection(&closures[j]).expect("same owner");
            best = best.max(meet.dim());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn point_basics() {
        let p = Molecule::point();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.size(), 1);
        assert!(p.is_atom());
        assert_eq!(p, Molecule::point());
    }

    #[test]
    fn arrow_is_the_one_dimensional_atom() {
        let arrow = Molecule::atom(&Molecule::point(), &Molecule::point()).unwrap();
        assert_eq!(arrow.dim(), 1);
        assert_eq!(arrow.size(), 3);
        assert!(arrow.is_atom());
        assert!(arrow.is_round());
        assert_eq!(arrow.lydim(), -1);
        assert_eq!(arrow.frdim(), -1);
    }

    #[test]
    fn whisker_from_constructors_matches_table() {
        let whisker = fixtures::whisker();
        let (table_mol, _) =
            Molecule::from_raw_poset(crate::ogposet::tests::whisker_poset().as_ref().clone())
                .unwrap();
        assert_eq!(whisker, table_mol);
    }

    #[test]
    fn unitality_of_pasting() {
        let whisker = fixtures::whisker();
        for k in 0..2 {
            let (right, _) = whisker
                .boundary_molecule(Some(k), Orientation::Output)
                .unwrap();
            let pasted = whisker.paste(&right, k as usize).unwrap();
            assert_eq!(pasted, whisker, "U #{k} ∂{k}⁺U ≅ U");
            let (left, _) = whisker
                .boundary_molecule(Some(k), Orientation::Input)
                .unwrap();
            let pasted = left.paste(&whisker, k as usize).unwrap();
            assert_eq!(pasted, whisker, "∂{k}⁻U #{k} U ≅ U");
        }
    }

    #[test]
    fn associativity_on_arrows() {
        let arrow = fixtures::arrow();
        let ab = arrow.paste(&arrow, 0).unwrap();
        let left = ab.paste(&arrow, 0).unwrap();
        let right = arrow.paste(&ab, 0).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.size(), 7);
    }

    #[test]
    fn binary_vs_cobinary_not_isomorphic() {
        assert_ne!(fixtures::binary(), fixtures::cobinary());
        assert!(fixtures::binary()
            .find_isomorphism(&fixtures::cobinary())
            .is_none());
    }

    #[test]
    fn whisker_not_round_with_witness() {
        let whisker = fixtures::whisker();
        assert!(!whisker.is_round());
        let w = whisker.roundness_witness().unwrap();
        assert_eq!(w.n, 1);
        // ∂₀U = {(0,0),(0,3)} strictly inside ∂₁⁺ ∩ ∂₁⁻
        assert_eq!(w.lower_boundary.len(), 2);
        assert_eq!(w.intersection.len(), 4);
        for e in &w.lower_boundary {
            assert!(w.intersection.contains(e));
        }
    }

    #[test]
    fn round_example_is_round() {
        let m = fixtures::round_example();
        assert!(m.is_round());
        assert!(m.is_pure());
    }

    #[test]
    fn merger_of_atom_is_itself() {
        let binary = fixtures::binary();
        assert_eq!(binary.merger().unwrap(), binary);
    }

    #[test]
    fn merger_of_arrow_pair_collapses_to_arrow() {
        let arrow = fixtures::arrow();
        let two = arrow.paste(&arrow, 0).unwrap();
        assert!(two.is_round());
        // the merger is the single cell with the pasting's boundaries
        let merged = two.merger().unwrap();
        assert_eq!(merged, fixtures::arrow());
        // the merging cell U ⇒ ⟨U⟩, one dimension up, is binary
        assert_eq!(Molecule::atom(&two, &merged).unwrap(), fixtures::binary());
    }

    #[test]
    fn merger_of_round_example() {
        let m = fixtures::round_example().merger().unwrap();
        assert!(m.is_atom());
        assert_eq!(m.dim(), 2);
        // two input and two output 1-cells on the new top element
        let top = Element::new(2, 0);
        assert_eq!(m.poset().faces(top, Orientation::Input).len(), 2);
        assert_eq!(m.poset().faces(top, Orientation::Output).len(), 2);
    }

    #[test]
    fn whisker_metadata() {
        let whisker = fixtures::whisker();
        assert_eq!(whisker.lydim(), 0);
        assert_eq!(whisker.frdim(), 0);
        assert!(!whisker.is_atom());
    }

    #[test]
    fn atom_rejects_non_round() {
        let whisker = fixtures::whisker();
        let err = Molecule::atom(&whisker, &whisker);
        assert!(matches!(err, Err(Error::NotRound)));
    }

    #[test]
    fn globularity() {
        let m = fixtures::round_example();
        for n in 0..m.dim() {
            for k in -1..n {
                for alpha in Orientation::BOTH {
                    for beta in Orientation::BOTH {
                        let outer = m.boundary_subset(Some(n), beta);
                        let nested = outer.boundary(Some(k), alpha);
                        let direct = m.boundary_subset(Some(k), alpha);
                        assert_eq!(
                            nested.elements().collect::<Vec<_>>(),
                            direct.elements().collect::<Vec<_>>()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn element_closures_are_atoms() {
        let m = fixtures::round_example();
        for e in m.poset().elements() {
            let sub = m.subset(&[e]).unwrap();
            let (atom, _) = m.materialize(&sub).unwrap();
            assert!(atom.is_atom(), "cl{{{e}}} must be an atom");
            assert!(atom.is_round());
        }
    }
}

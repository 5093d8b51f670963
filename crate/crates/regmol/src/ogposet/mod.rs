//! Oriented graded posets: the base encoding of diagram shapes.
//!
//! A poset is stored as the pair `(face_data, coface_data)`: for every
//! element, the sets of elements it covers (faces) and is covered by
//! (cofaces), separated by orientation.  Elements are addressed as
//! `(dimension, index)` pairs, with a linear order on each dimension, and
//! every index set is kept sorted ascending so representations serialize
//! deterministically.

mod map;
mod subset;

pub use map::{pushout_of_inclusions, Inclusion, OgMap};
pub use subset::{ClosedSubset, DimBits};

use crate::error::{Error, Result};
use crate::flow::DiGraph;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// An element of an oriented graded poset, identified by dimension and
/// position within that dimension's linear order.  Serializes as the pair
/// `[dim, index]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    dim: usize,
    index: usize,
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.dim, self.index).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (dim, index) = <(usize, usize)>::deserialize(d)?;
        Ok(Element { dim, index })
    }
}

impl Element {
    pub fn new(dim: usize, index: usize) -> Self {
        Element { dim, index }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dim, self.index)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dim, self.index)
    }
}

/// Orientation of a covering edge: an input (`-`) or output (`+`) face.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Orientation {
    Input,
    Output,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Input, Orientation::Output];

    pub fn flip(self) -> Self {
        match self {
            Orientation::Input => Orientation::Output,
            Orientation::Output => Orientation::Input,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Orientation::Input => '-',
            Orientation::Output => '+',
        }
    }
}

/// The two oriented sets of covering edges attached to one element.
///
/// For `face_data` these are the faces (covered elements one dimension
/// down); for `coface_data` the cofaces one dimension up.  Both sets are
/// sorted ascending and disjoint.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct FacePair {
    pub input: Vec<usize>,
    pub output: Vec<usize>,
}

impl FacePair {
    pub fn get(&self, o: Orientation) -> &[usize] {
        match o {
            Orientation::Input => &self.input,
            Orientation::Output => &self.output,
        }
    }

    fn get_mut(&mut self, o: Orientation) -> &mut Vec<usize> {
        match o {
            Orientation::Input => &mut self.input,
            Orientation::Output => &mut self.output,
        }
    }

    pub fn all(&self) -> impl Iterator<Item = usize> + '_ {
        self.input.iter().chain(self.output.iter()).copied()
    }

    pub fn len(&self) -> usize {
        self.input.len() + self.output.len()
    }

    pub fn is_empty(&self) -> bool {
        self.input.is_empty() && self.output.is_empty()
    }
}

/// A finite oriented graded poset in the `(face_data, coface_data)` encoding.
///
/// The two tables are redundant — each is reconstructible from the other —
/// and the redundancy is kept coherent by construction: only `face_data` is
/// ever accepted from outside, and `coface_data` is derived.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OgPoset {
    face_data: Vec<Vec<FacePair>>,
    coface_data: Vec<Vec<FacePair>>,
}

impl OgPoset {
    /// Validates raw face data and derives the coface table.
    ///
    /// Rejects dangling face indices, elements of positive dimension with no
    /// faces (these break gradedness), and faces listed with both
    /// orientations.  Accepting a poset here does *not* certify it as a
    /// regular molecule; molecule-hood is only ever established through the
    /// constructors.
    pub fn from_face_data(mut face_data: Vec<Vec<FacePair>>) -> Result<Self> {
        while face_data.last().is_some_and(|d| d.is_empty()) {
            face_data.pop();
        }
        for (n, grade) in face_data.iter_mut().enumerate() {
            for pair in grade.iter_mut() {
                pair.input.sort_unstable();
                pair.input.dedup();
                pair.output.sort_unstable();
                pair.output.dedup();
                if n == 0 && !pair.is_empty() {
                    return Err(Error::Input(
                        "a 0-dimensional element cannot have faces".into(),
                    ));
                }
            }
        }
        for n in 0..face_data.len() {
            let lower_count = if n == 0 { 0 } else { face_data[n - 1].len() };
            for (k, pair) in face_data[n].iter().enumerate() {
                let element = Element::new(n, k);
                if n > 0 && pair.is_empty() {
                    return Err(Error::NotGraded(element));
                }
                for face in pair.all() {
                    if face >= lower_count {
                        return Err(Error::DanglingFace {
                            element,
                            face,
                            count: lower_count,
                        });
                    }
                }
                let mut i = 0;
                let mut j = 0;
                while i < pair.input.len() && j < pair.output.len() {
                    match pair.input[i].cmp(&pair.output[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            return Err(Error::DuplicateCovering {
                                upper: element,
                                lower: Element::new(n - 1, pair.input[i]),
                            })
                        }
                    }
                }
            }
        }
        let coface_data = derive_cofaces(&face_data);
        Ok(OgPoset {
            face_data,
            coface_data,
        })
    }

    pub(crate) fn from_face_data_unchecked(face_data: Vec<Vec<FacePair>>) -> Self {
        let coface_data = derive_cofaces(&face_data);
        OgPoset {
            face_data,
            coface_data,
        }
    }

    /// The one-point poset.
    pub fn point() -> Self {
        OgPoset {
            face_data: vec![vec![FacePair::default()]],
            coface_data: vec![vec![FacePair::default()]],
        }
    }

    pub fn empty() -> Self {
        OgPoset {
            face_data: Vec::new(),
            coface_data: Vec::new(),
        }
    }

    /// Dimension of the poset; `-1` when empty.
    pub fn dim(&self) -> isize {
        self.face_data.len() as isize - 1
    }

    /// Number of elements of dimension `n`.
    pub fn card(&self, n: usize) -> usize {
        self.face_data.get(n).map_or(0, |g| g.len())
    }

    pub fn size(&self) -> usize {
        self.face_data.iter().map(|g| g.len()).sum()
    }

    pub fn contains(&self, e: Element) -> bool {
        e.index < self.card(e.dim)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.face_data
            .iter()
            .enumerate()
            .flat_map(|(n, g)| (0..g.len()).map(move |k| Element::new(n, k)))
    }

    pub fn face_data(&self) -> &[Vec<FacePair>] {
        &self.face_data
    }

    pub fn coface_data(&self) -> &[Vec<FacePair>] {
        &self.coface_data
    }

    pub fn faces(&self, e: Element, o: Orientation) -> &[usize] {
        self.face_data[e.dim][e.index].get(o)
    }

    pub fn cofaces(&self, e: Element, o: Orientation) -> &[usize] {
        self.coface_data[e.dim][e.index].get(o)
    }

    pub fn face_elements(&self, e: Element, o: Orientation) -> impl Iterator<Item = Element> + '_ {
        // dimension-0 elements have no faces, so the closure never runs
        let dim = e.dim.saturating_sub(1);
        self.faces(e, o).iter().map(move |&k| Element::new(dim, k))
    }

    pub fn coface_elements(
        &self,
        e: Element,
        o: Orientation,
    ) -> impl Iterator<Item = Element> + '_ {
        let dim = e.dim + 1;
        self.cofaces(e, o)
            .iter()
            .map(move |&k| Element::new(dim, k))
    }

    /// Per-dimension element and edge counts with their maxima.
    pub fn size_params(&self) -> SizeParams {
        let cards: Vec<usize> = self.face_data.iter().map(|g| g.len()).collect();
        let edges: Vec<usize> = self
            .face_data
            .iter()
            .map(|g| g.iter().map(|p| p.len()).sum())
            .collect();
        let max_card = cards.iter().copied().max().unwrap_or(0);
        let max_edges = edges.iter().copied().max().unwrap_or(0).max(1);
        SizeParams {
            cards,
            edges,
            max_card,
            max_edges,
        }
    }

    /// The Hasse diagram: unoriented edges point from covering element to
    /// covered element; oriented edges follow the input/output rule (an edge
    /// runs `y -> x` when `y` is an input face of `x` or `x` is an output
    /// face of `y`).
    pub fn hasse(&self, oriented: bool) -> DiGraph<Element> {
        let verts: Vec<Element> = self.elements().collect();
        let mut graph = DiGraph::new(verts);
        for x in self.elements() {
            if x.dim() == 0 {
                continue;
            }
            for y in self.face_elements(x, Orientation::Input) {
                if oriented {
                    graph.add_edge_by_value(y, x);
                } else {
                    graph.add_edge_by_value(x, y);
                }
            }
            for y in self.face_elements(x, Orientation::Output) {
                if oriented {
                    graph.add_edge_by_value(x, y);
                } else {
                    graph.add_edge_by_value(x, y);
                }
            }
        }
        graph
    }

    /// The whole poset as a closed subset of itself.
    pub fn total_subset(self: &Arc<Self>) -> ClosedSubset {
        let mut bits = DimBits::for_poset(self);
        for e in self.elements() {
            bits.insert(e);
        }
        ClosedSubset::from_bits_unchecked(Arc::clone(self), bits)
    }

    /// Smallest closed subset containing `seed`.
    pub fn closure(self: &Arc<Self>, seed: &[Element]) -> Result<ClosedSubset> {
        for &e in seed {
            if !self.contains(e) {
                return Err(Error::InvalidElement(e));
            }
        }
        Ok(self.closure_unchecked(seed.iter().copied()))
    }

    pub(crate) fn closure_unchecked(
        self: &Arc<Self>,
        seed: impl IntoIterator<Item = Element>,
    ) -> ClosedSubset {
        let mut bits = DimBits::for_poset(self);
        for e in seed {
            bits.insert(e);
        }
        // walk downward dimension by dimension
        for n in (1..self.face_data.len()).rev() {
            for k in bits.iter_dim(n).collect::<Vec<_>>() {
                let e = Element::new(n, k);
                for o in Orientation::BOTH {
                    for f in self.faces(e, o) {
                        bits.insert(Element::new(n - 1, *f));
                    }
                }
            }
        }
        ClosedSubset::from_bits_unchecked(Arc::clone(self), bits)
    }

    /// Restriction of the poset to a closed subset, with the embedding of
    /// the restricted elements back into `self`.
    pub(crate) fn restrict(self: &Arc<Self>, subset: &ClosedSubset) -> (OgPoset, Vec<Vec<Element>>) {
        debug_assert!(subset.owner_is(self));
        let top = subset.dim();
        let mut back: Vec<Vec<Element>> = Vec::new();
        let mut fwd: Vec<Vec<usize>> = self
            .face_data
            .iter()
            .map(|g| vec![usize::MAX; g.len()])
            .collect();
        let mut n = 0usize;
        while (n as isize) <= top {
            let mut level = Vec::new();
            for k in subset.bits().iter_dim(n) {
                fwd[n][k] = level.len();
                level.push(Element::new(n, k));
            }
            back.push(level);
            n += 1;
        }
        let mut face_data: Vec<Vec<FacePair>> = Vec::with_capacity(back.len());
        for level in &back {
            let mut grade = Vec::with_capacity(level.len());
            for &e in level {
                let mut pair = FacePair::default();
                for o in Orientation::BOTH {
                    let set: Vec<usize> =
                        self.faces(e, o).iter().map(|&f| fwd[e.dim - 1][f]).collect();
                    debug_assert!(set.iter().all(|&f| f != usize::MAX));
                    *pair.get_mut(o) = set;
                }
                grade.push(pair);
            }
            face_data.push(grade);
        }
        (OgPoset::from_face_data_unchecked(face_data), back)
    }
}

impl fmt::Debug for OgPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OgPoset (dim {})", self.dim())?;
        for (n, grade) in self.face_data.iter().enumerate() {
            write!(f, "  [{n}]")?;
            for pair in grade {
                write!(f, " ({:?}, {:?})", pair.input, pair.output)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn derive_cofaces(face_data: &[Vec<FacePair>]) -> Vec<Vec<FacePair>> {
    let mut coface_data: Vec<Vec<FacePair>> = face_data
        .iter()
        .map(|g| vec![FacePair::default(); g.len()])
        .collect();
    for (n, grade) in face_data.iter().enumerate() {
        for (k, pair) in grade.iter().enumerate() {
            for o in Orientation::BOTH {
                for &f in pair.get(o) {
                    coface_data[n - 1][f].get_mut(o).push(k);
                }
            }
        }
    }
    // pushes happen in ascending k, so the sets come out sorted
    coface_data
}

/// Size parameters of a poset: `cards[k]` counts `k`-dimensional elements,
/// `edges[k]` the Hasse edges between dimensions `k` and `k - 1`.
#[derive(Clone, Debug)]
pub struct SizeParams {
    pub cards: Vec<usize>,
    pub edges: Vec<usize>,
    pub max_card: usize,
    pub max_edges: usize,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// face_data of the two-cell-with-a-whisker shape, as printed in the
    /// source table (four points, four arrows, one 2-cell).
    pub(crate) fn whisker_face_data() -> Vec<Vec<FacePair>> {
        vec![
            vec![
                FacePair::default(),
                FacePair::default(),
                FacePair::default(),
                FacePair::default(),
            ],
            vec![
                FacePair {
                    input: vec![0],
                    output: vec![1],
                },
                FacePair {
                    input: vec![1],
                    output: vec![2],
                },
                FacePair {
                    input: vec![2],
                    output: vec![3],
                },
                FacePair {
                    input: vec![0],
                    output: vec![2],
                },
            ],
            vec![FacePair {
                input: vec![0, 1],
                output: vec![3],
            }],
        ]
    }

    pub(crate) fn whisker_poset() -> Arc<OgPoset> {
        Arc::new(OgPoset::from_face_data(whisker_face_data()).unwrap())
    }

    fn e(dim: usize, index: usize) -> Element {
        Element::new(dim, index)
    }

    #[test]
    fn whisker_cofaces_match_printed_table() {
        let p = whisker_poset();
        let expect: Vec<Vec<(Vec<usize>, Vec<usize>)>> = vec![
            vec![
                (vec![0, 3], vec![]),
                (vec![1], vec![0]),
                (vec![2], vec![1, 3]),
                (vec![], vec![2]),
            ],
            vec![
                (vec![0], vec![]),
                (vec![0], vec![]),
                (vec![], vec![]),
                (vec![], vec![0]),
            ],
            vec![(vec![], vec![])],
        ];
        for (n, grade) in expect.iter().enumerate() {
            for (k, (input, output)) in grade.iter().enumerate() {
                assert_eq!(p.cofaces(e(n, k), Orientation::Input), &input[..]);
                assert_eq!(p.cofaces(e(n, k), Orientation::Output), &output[..]);
            }
        }
    }

    #[test]
    fn face_coface_mutual_reconstruction() {
        let p = whisker_poset();
        let rebuilt = derive_cofaces(p.face_data());
        assert_eq!(&rebuilt, p.coface_data());
        // and back: rebuild face_data from coface_data by transposing again
        let mut face_back: Vec<Vec<FacePair>> = p
            .face_data()
            .iter()
            .map(|g| vec![FacePair::default(); g.len()])
            .collect();
        for (n, grade) in p.coface_data().iter().enumerate() {
            for (k, pair) in grade.iter().enumerate() {
                for o in Orientation::BOTH {
                    for &c in pair.get(o) {
                        face_back[n + 1][c].get_mut(o).push(k);
                    }
                }
            }
        }
        for grade in face_back.iter_mut() {
            for pair in grade.iter_mut() {
                pair.input.sort_unstable();
                pair.output.sort_unstable();
            }
        }
        assert_eq!(&face_back, p.face_data());
    }

    #[test]
    fn closure_of_two_cell() {
        let p = whisker_poset();
        let c = p.closure(&[e(2, 0)]).unwrap();
        let members: Vec<Element> = c.elements().collect();
        assert_eq!(
            members,
            vec![e(0, 0), e(0, 1), e(0, 2), e(1, 0), e(1, 1), e(1, 3), e(2, 0)]
        );
    }

    #[test]
    fn closure_trivial_cases() {
        let p = whisker_poset();
        let empty = p.closure(&[]).unwrap();
        assert_eq!(empty.len(), 0);
        let pt = p.closure(&[e(0, 3)]).unwrap();
        assert_eq!(pt.elements().collect::<Vec<_>>(), vec![e(0, 3)]);
        assert!(p.closure(&[e(3, 0)]).is_err());
    }

    #[test]
    fn closure_is_idempotent() {
        let p = whisker_poset();
        let c = p.closure(&[e(2, 0), e(1, 2)]).unwrap();
        let again = p
            .closure(&c.elements().collect::<Vec<_>>())
            .unwrap();
        assert_eq!(c.elements().collect::<Vec<_>>(), again.elements().collect::<Vec<_>>());
    }

    #[test]
    fn gradedness_rejects_empty_face_list() {
        // a 2-cell over a 1-cell whose own face list is empty
        let bad = vec![
            vec![FacePair::default()],
            vec![FacePair::default()],
            vec![FacePair {
                input: vec![0],
                output: vec![],
            }],
        ];
        assert!(matches!(
            OgPoset::from_face_data(bad),
            Err(Error::NotGraded(_))
        ));
    }

    #[test]
    fn dangling_and_duplicate_faces_rejected() {
        let dangling = vec![
            vec![FacePair::default()],
            vec![FacePair {
                input: vec![0],
                output: vec![5],
            }],
        ];
        assert!(matches!(
            OgPoset::from_face_data(dangling),
            Err(Error::DanglingFace { .. })
        ));
        let duplicate = vec![
            vec![FacePair::default(), FacePair::default()],
            vec![FacePair {
                input: vec![0],
                output: vec![0],
            }],
        ];
        assert!(matches!(
            OgPoset::from_face_data(duplicate),
            Err(Error::DuplicateCovering { .. })
        ));
    }

    #[test]
    fn hasse_edge_counts() {
        let point = Arc::new(OgPoset::point());
        let h = point.hasse(false);
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);

        let whisker = whisker_poset();
        assert_eq!(whisker.hasse(false).edge_count(), 11);
        let oriented = whisker.hasse(true);
        assert_eq!(oriented.edge_count(), 11);
        // the 2-cell's input faces point into it, its output face out of it
        assert!(oriented.has_edge_by_value(e(1, 0), e(2, 0)));
        assert!(oriented.has_edge_by_value(e(2, 0), e(1, 3)));
    }
}

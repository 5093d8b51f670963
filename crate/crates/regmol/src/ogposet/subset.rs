use super::{Element, OgPoset, Orientation};
use crate::error::{Error, Result};
use std::sync::Arc;

/// A bitset over a poset's elements, one word block per dimension.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DimBits {
    words: Vec<Vec<u64>>,
    lens: Vec<usize>,
}

impl DimBits {
    pub fn for_poset(poset: &OgPoset) -> Self {
        let lens: Vec<usize> = (0..poset.face_data().len()).map(|n| poset.card(n)).collect();
        let words = lens.iter().map(|&l| vec![0u64; l.div_ceil(64)]).collect();
        DimBits { words, lens }
    }

    pub fn insert(&mut self, e: Element) {
        debug_assert!(e.index() < self.lens[e.dim()]);
        self.words[e.dim()][e.index() / 64] |= 1 << (e.index() % 64);
    }

    pub fn remove(&mut self, e: Element) {
        self.words[e.dim()][e.index() / 64] &= !(1 << (e.index() % 64));
    }

    pub fn contains(&self, e: Element) -> bool {
        e.dim() < self.words.len()
            && e.index() < self.lens[e.dim()]
            && self.words[e.dim()][e.index() / 64] & (1 << (e.index() % 64)) != 0
    }

    pub fn iter_dim(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let words = self.words.get(n).map_or(&[][..], |w| &w[..]);
        words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.words.len()).flat_map(move |n| self.iter_dim(n).map(move |k| Element::new(n, k)))
    }

    pub fn count_dim(&self, n: usize) -> usize {
        self.words
            .get(n)
            .map_or(0, |w| w.iter().map(|x| x.count_ones() as usize).sum())
    }

    pub fn len(&self) -> usize {
        (0..self.words.len()).map(|n| self.count_dim(n)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| w.iter().all(|&x| x == 0))
    }

    /// Dimension of the subset: highest inhabited grade, `-1` when empty.
    pub fn dim(&self) -> isize {
        for n in (0..self.words.len()).rev() {
            if self.count_dim(n) > 0 {
                return n as isize;
            }
        }
        -1
    }

    pub fn union_with(&mut self, other: &DimBits) {
        debug_assert_eq!(self.lens, other.lens);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            for (x, y) in a.iter_mut().zip(b) {
                *x |= y;
            }
        }
    }

    pub fn intersect_with(&mut self, other: &DimBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            for (x, y) in a.iter_mut().zip(b) {
                *x &= y;
            }
        }
    }

    pub fn is_subset_of(&self, other: &DimBits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x & !y == 0))
    }
}

/// A downward-closed subset of elements, keyed to its owning poset.
///
/// Every boundary and face operator lives here; operations across different
/// posets are errors rather than coercions.
#[derive(Clone, PartialEq, Eq)]
pub struct ClosedSubset {
    owner: Arc<OgPoset>,
    bits: DimBits,
}

impl ClosedSubset {
    // callers only ever pass downward-closed bit sets: closures, boundaries,
    // and unions/intersections of closed sets
    pub(crate) fn from_bits_unchecked(owner: Arc<OgPoset>, bits: DimBits) -> Self {
        ClosedSubset { owner, bits }
    }

    #[cfg(test)]
    pub(crate) fn is_downward_closed(&self) -> bool {
        self.bits.iter().all(|e| {
            e.dim() == 0
                || Orientation::BOTH.iter().all(|&o| {
                    self.owner
                        .face_elements(e, o)
                        .all(|f| self.bits.contains(f))
                })
        })
    }

    pub fn owner(&self) -> &Arc<OgPoset> {
        &self.owner
    }

    pub(crate) fn owner_is(&self, poset: &Arc<OgPoset>) -> bool {
        Arc::ptr_eq(&self.owner, poset) || *self.owner == **poset
    }

    pub fn bits(&self) -> &DimBits {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Dimension of the subset (`-1` when empty).
    pub fn dim(&self) -> isize {
        self.bits.dim()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.bits.contains(e)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.iter()
    }

    pub fn grade(&self, n: usize) -> impl Iterator<Item = Element> + '_ {
        self.bits.iter_dim(n).map(move |k| Element::new(n, k))
    }

    pub fn union(&self, other: &ClosedSubset) -> Result<ClosedSubset> {
        if !other.owner_is(&self.owner) {
            return Err(Error::ForeignSubset);
        }
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(ClosedSubset::from_bits_unchecked(
            Arc::clone(&self.owner),
            bits,
        ))
    }

    pub fn intersection(&self, other: &ClosedSubset) -> Result<ClosedSubset> {
        if !other.owner_is(&self.owner) {
            return Err(Error::ForeignSubset);
        }
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(ClosedSubset::from_bits_unchecked(
            Arc::clone(&self.owner),
            bits,
        ))
    }

    pub fn is_subset_of(&self, other: &ClosedSubset) -> bool {
        other.owner_is(&self.owner) && self.bits.is_subset_of(&other.bits)
    }

    /// Elements with no cofaces inside the subset.
    pub fn maximal_elements(&self) -> Vec<Element> {
        self.elements()
            .filter(|&e| {
                Orientation::BOTH.iter().all(|&o| {
                    self.owner
                        .coface_elements(e, o)
                        .all(|c| !self.bits.contains(c))
                })
            })
            .collect()
    }

    /// The set `Δₙᵅ` of `n`-dimensional elements of the subset with no
    /// coface of the opposite orientation inside it.
    pub fn faces(&self, n: isize, o: Orientation) -> Vec<Element> {
        if n < 0 {
            return Vec::new();
        }
        let n = n as usize;
        self.grade(n)
            .filter(|&e| {
                self.owner
                    .coface_elements(e, o.flip())
                    .all(|c| !self.bits.contains(c))
            })
            .collect()
    }

    /// The input or output `n`-boundary `∂ₙᵅ`: the closure of `Δₙᵅ` together
    /// with the closures of all maximal elements of dimension below `n`.
    ///
    /// `n` defaults to `dim - 1` when `None`; values of `-1` and `-2` give
    /// the empty subset.
    pub fn boundary(&self, n: Option<isize>, side: Orientation) -> ClosedSubset {
        let n = n.unwrap_or(self.dim() - 1);
        if n <= -1 {
            return ClosedSubset::from_bits_unchecked(
                Arc::clone(&self.owner),
                DimBits::for_poset(&self.owner),
            );
        }
        let mut seed = self.faces(n, side);
        for m in self.maximal_elements() {
            if (m.dim() as isize) < n {
                seed.push(m);
            }
        }
        self.owner.closure_unchecked(seed)
    }

    /// Union of the input and output `n`-boundaries.
    pub fn boundary_both(&self, n: Option<isize>) -> ClosedSubset {
        let a = self.boundary(n, Orientation::Input);
        let b = self.boundary(n, Orientation::Output);
        a.union(&b).expect("same owner")
    }

    /// Closure of a single element, `cl{x}`.
    pub fn element_closure(owner: &Arc<OgPoset>, e: Element) -> Result<ClosedSubset> {
        if !owner.contains(e) {
            return Err(Error::InvalidElement(e));
        }
        Ok(owner.closure_unchecked([e]))
    }

    /// Whether all maximal elements have the subset's dimension.
    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_elements()
            .iter()
            .all(|m| m.dim() as isize == d)
    }
}

impl std::fmt::Debug for ClosedSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::whisker_poset;
    use super::*;

    fn e(dim: usize, index: usize) -> Element {
        Element::new(dim, index)
    }

    fn set(subset: &ClosedSubset) -> Vec<Element> {
        subset.elements().collect()
    }

    #[test]
    fn closure_and_boundaries_are_downward_closed() {
        let p = whisker_poset();
        let u = p.total_subset();
        assert!(u.is_downward_closed());
        for n in -1..=2 {
            for side in Orientation::BOTH {
                assert!(u.boundary(Some(n), side).is_downward_closed());
            }
        }
        assert!(p.closure(&[e(2, 0)]).unwrap().is_downward_closed());
    }

    #[test]
    fn whisker_boundaries_match_worked_example() {
        let p = whisker_poset();
        let u = p.total_subset();
        assert_eq!(
            set(&u.boundary(Some(1), Orientation::Input)),
            vec![e(0, 0), e(0, 1), e(0, 2), e(0, 3), e(1, 0), e(1, 1), e(1, 2)]
        );
        assert_eq!(
            set(&u.boundary(Some(1), Orientation::Output)),
            vec![e(0, 0), e(0, 2), e(0, 3), e(1, 2), e(1, 3)]
        );
        assert_eq!(
            set(&u.boundary(Some(0), Orientation::Input)),
            vec![e(0, 0)]
        );
        assert_eq!(
            set(&u.boundary(Some(0), Orientation::Output)),
            vec![e(0, 3)]
        );
        for side in Orientation::BOTH {
            assert_eq!(set(&u.boundary(Some(2), side)), set(&u));
        }
    }

    #[test]
    fn boundary_contained_and_stabilizes() {
        let p = whisker_poset();
        let u = p.total_subset();
        for n in -2..=3 {
            for side in Orientation::BOTH {
                let b = u.boundary(Some(n), side);
                assert!(b.is_subset_of(&u));
                assert_eq!(set(&b) == set(&u), n >= u.dim());
            }
        }
    }

    #[test]
    fn faces_meet_in_maximal_elements() {
        let p = whisker_poset();
        let u = p.total_subset();
        // Δₙ⁻ ∩ Δₙ⁺ = (Max U)ₙ at every n
        let max = u.maximal_elements();
        assert_eq!(max, vec![e(1, 2), e(2, 0)]);
        for n in 0..=2 {
            let minus = u.faces(n, Orientation::Input);
            let plus = u.faces(n, Orientation::Output);
            let both: Vec<Element> = minus.iter().filter(|x| plus.contains(x)).copied().collect();
            let max_n: Vec<Element> = max
                .iter()
                .filter(|m| m.dim() == n as usize)
                .copied()
                .collect();
            assert_eq!(both, max_n, "dimension {n}");
        }
    }

    #[test]
    fn whisker_output_one_faces() {
        let p = whisker_poset();
        let u = p.total_subset();
        assert_eq!(
            u.faces(1, Orientation::Output),
            vec![e(1, 2), e(1, 3)]
        );
        assert_eq!(u.faces(2, Orientation::Input), vec![e(2, 0)]);
        assert_eq!(u.faces(2, Orientation::Output), vec![e(2, 0)]);
    }

    #[test]
    fn point_faces() {
        let p = Arc::new(OgPoset::point());
        let u = p.total_subset();
        assert_eq!(u.faces(0, Orientation::Input), vec![e(0, 0)]);
    }

    #[test]
    fn foreign_subset_rejected() {
        let p1 = whisker_poset();
        let p2 = Arc::new(OgPoset::point());
        let a = p1.total_subset();
        let b = p2.total_subset();
        assert!(matches!(a.union(&b), Err(Error::ForeignSubset)));
    }
}

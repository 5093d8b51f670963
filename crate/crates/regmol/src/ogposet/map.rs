use super::{ClosedSubset, DimBits, Element, FacePair, OgPoset, Orientation};
use crate::error::{Error, Result};
use std::sync::Arc;

/// A map of oriented graded posets: a total function on elements that
/// commutes with all boundary operators.
#[derive(Clone)]
pub struct OgMap {
    source: Arc<OgPoset>,
    target: Arc<OgPoset>,
    mapping: Vec<Vec<Element>>,
}

impl OgMap {
    pub(crate) fn new_unchecked(
        source: Arc<OgPoset>,
        target: Arc<OgPoset>,
        mapping: Vec<Vec<Element>>,
    ) -> Self {
        OgMap {
            source,
            target,
            mapping,
        }
    }

    pub fn identity(poset: &Arc<OgPoset>) -> Self {
        let mapping = (0..poset.face_data().len())
            .map(|n| (0..poset.card(n)).map(|k| Element::new(n, k)).collect())
            .collect();
        OgMap {
            source: Arc::clone(poset),
            target: Arc::clone(poset),
            mapping,
        }
    }

    pub fn source(&self) -> &Arc<OgPoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OgPoset> {
        &self.target
    }

    pub fn apply(&self, e: Element) -> Element {
        self.mapping[e.dim()][e.index()]
    }

    pub fn mapping(&self) -> &[Vec<Element>] {
        &self.mapping
    }

    /// Direct image of a closed subset (always closed for maps).
    pub fn image_of(&self, subset: &ClosedSubset) -> Result<ClosedSubset> {
        if !subset.owner_is(&self.source) {
            return Err(Error::ForeignSubset);
        }
        let mut bits = DimBits::for_poset(&self.target);
        for e in subset.elements() {
            bits.insert(self.apply(e));
        }
        Ok(ClosedSubset::from_bits_unchecked(
            Arc::clone(&self.target),
            bits,
        ))
    }

    pub fn image(&self) -> ClosedSubset {
        let mut bits = DimBits::for_poset(&self.target);
        for level in &self.mapping {
            for &e in level {
                bits.insert(e);
            }
        }
        ClosedSubset::from_bits_unchecked(Arc::clone(&self.target), bits)
    }

    pub fn compose(&self, after: &OgMap) -> Result<OgMap> {
        if *self.target != *after.source {
            return Err(Error::ForeignSubset);
        }
        let mapping = self
            .mapping
            .iter()
            .map(|level| level.iter().map(|&e| after.apply(e)).collect())
            .collect();
        Ok(OgMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&after.target),
            mapping,
        })
    }

    pub fn is_injective(&self) -> bool {
        for n in 0..self.mapping.len() {
            let mut seen: Vec<bool> = vec![false; self.target.card(n)];
            for &e in &self.mapping[n] {
                if e.dim() != n || seen[e.index()] {
                    return false;
                }
                seen[e.index()] = true;
            }
        }
        true
    }
}

impl std::fmt::Debug for OgMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (n, level) in self.mapping.iter().enumerate() {
            for (k, e) in level.iter().enumerate() {
                m.entry(&Element::new(n, k), e);
            }
        }
        m.finish()
    }
}

/// An injective map.  Inclusions preserve dimension, the covering relation,
/// orientations, and all boundaries, so the checks here are exact face-set
/// preservation plus injectivity.
#[derive(Clone, Debug)]
pub struct Inclusion(OgMap);

impl Inclusion {
    pub fn new(map: OgMap) -> Result<Inclusion> {
        if !map.is_injective() {
            return Err(Error::NotInjective);
        }
        for e in map.source.elements() {
            let img = map.apply(e);
            for o in Orientation::BOTH {
                let faces = map.source.faces(e, o);
                let img_faces = map.target.faces(img, o);
                if faces.len() != img_faces.len() {
                    return Err(Error::NotAMap(e));
                }
                for &f in faces {
                    let mapped = map.apply(Element::new(e.dim() - 1, f));
                    if !img_faces.contains(&mapped.index()) {
                        return Err(Error::NotAMap(e));
                    }
                }
            }
        }
        Ok(Inclusion(map))
    }

    pub(crate) fn new_unchecked(map: OgMap) -> Inclusion {
        debug_assert!(Inclusion::new(map.clone()).is_ok());
        Inclusion(map)
    }

    pub fn identity(poset: &Arc<OgPoset>) -> Inclusion {
        Inclusion(OgMap::identity(poset))
    }

    pub fn as_map(&self) -> &OgMap {
        &self.0
    }

    pub fn source(&self) -> &Arc<OgPoset> {
        self.0.source()
    }

    pub fn target(&self) -> &Arc<OgPoset> {
        self.0.target()
    }

    pub fn apply(&self, e: Element) -> Element {
        self.0.apply(e)
    }

    pub fn image(&self) -> ClosedSubset {
        self.0.image()
    }

    pub fn image_of(&self, subset: &ClosedSubset) -> Result<ClosedSubset> {
        self.0.image_of(subset)
    }

    pub fn compose(&self, after: &Inclusion) -> Result<Inclusion> {
        Ok(Inclusion(self.0.compose(&after.0)?))
    }

    /// Factors `self: A → C` through `cover: B → C`, giving `A → B`; the
    /// image of `self` must lie inside the image of `cover`.
    pub fn restrict_through(&self, cover: &Inclusion) -> Result<Inclusion> {
        if **self.target() != **cover.target() {
            return Err(Error::ForeignSubset);
        }
        let target = cover.target();
        let mut reverse: Vec<Vec<Option<Element>>> = (0..target.face_data().len())
            .map(|d| vec![None; target.card(d)])
            .collect();
        for (d, level) in cover.as_map().mapping().iter().enumerate() {
            for (k, &img) in level.iter().enumerate() {
                reverse[img.dim()][img.index()] = Some(Element::new(d, k));
            }
        }
        let mut mapping: Vec<Vec<Element>> = Vec::new();
        for level in self.as_map().mapping() {
            let mut new_level = Vec::with_capacity(level.len());
            for &img in level {
                match reverse[img.dim()][img.index()] {
                    Some(e) => new_level.push(e),
                    None => return Err(Error::InvalidElement(img)),
                }
            }
            mapping.push(new_level);
        }
        Ok(Inclusion(OgMap::new_unchecked(
            Arc::clone(self.source()),
            Arc::clone(cover.source()),
            mapping,
        )))
    }

    pub fn preimage(&self, e: Element) -> Option<Element> {
        for (n, level) in self.0.mapping.iter().enumerate() {
            for (k, &img) in level.iter().enumerate() {
                if img == e {
                    return Some(Element::new(n, k));
                }
            }
        }
        None
    }

    /// Embedding of a closed subset into its owner.
    pub fn of_subset(subset: &ClosedSubset) -> (Arc<OgPoset>, Inclusion) {
        let owner = subset.owner();
        let (restricted, back) = owner.restrict(subset);
        let poset = Arc::new(restricted);
        let incl = Inclusion(OgMap::new_unchecked(
            Arc::clone(&poset),
            Arc::clone(owner),
            back,
        ));
        (poset, incl)
    }
}

/// Pushout of a span of inclusions `P1 ↩ Q ↪ P2`.
///
/// The result keeps the elements of `P1` with their indices, followed per
/// dimension by the elements of `P2` outside the image of `Q`, in `P2`'s
/// order; both legs are inclusions.
pub fn pushout_of_inclusions(
    i1: &Inclusion,
    i2: &Inclusion,
) -> Result<(Arc<OgPoset>, Inclusion, Inclusion)> {
    if **i1.source() != **i2.source() {
        return Err(Error::ForeignSubset);
    }
    let p1 = i1.target();
    let p2 = i2.target();
    let q = i1.source();

    // where each element of P2 lands: image of Q goes through i1, the rest
    // after P1's elements
    let dims = p1.face_data().len().max(p2.face_data().len());
    let mut p2_to_result: Vec<Vec<Element>> = (0..p2.face_data().len())
        .map(|n| vec![Element::new(usize::MAX, usize::MAX); p2.card(n)])
        .collect();
    for e in q.elements() {
        p2_to_result[i2.apply(e).dim()][i2.apply(e).index()] = i1.apply(e);
    }
    let mut new_per_dim: Vec<Vec<Element>> = vec![Vec::new(); dims];
    for n in 0..p2.face_data().len() {
        for k in 0..p2.card(n) {
            if p2_to_result[n][k].dim() == usize::MAX {
                let idx = p1.card(n) + new_per_dim[n].len();
                p2_to_result[n][k] = Element::new(n, idx);
                new_per_dim[n].push(Element::new(n, k));
            }
        }
    }

    let mut face_data: Vec<Vec<FacePair>> = Vec::with_capacity(dims);
    for n in 0..dims {
        let mut grade: Vec<FacePair> = Vec::new();
        if n < p1.face_data().len() {
            grade.extend(p1.face_data()[n].iter().cloned());
        }
        for &src in &new_per_dim[n] {
            let mut pair = FacePair::default();
            for o in Orientation::BOTH {
                let mut faces: Vec<usize> = p2
                    .faces(src, o)
                    .iter()
                    .map(|&f| p2_to_result[n - 1][f].index())
                    .collect();
                faces.sort_unstable();
                match o {
                    Orientation::Input => pair.input = faces,
                    Orientation::Output => pair.output = faces,
                }
            }
            grade.push(pair);
        }
        face_data.push(grade);
    }
    let result = Arc::new(OgPoset::from_face_data_unchecked(face_data));

    let leg1_mapping: Vec<Vec<Element>> = (0..p1.face_data().len())
        .map(|n| (0..p1.card(n)).map(|k| Element::new(n, k)).collect())
        .collect();
    let leg1 = Inclusion(OgMap::new_unchecked(
        Arc::clone(p1),
        Arc::clone(&result),
        leg1_mapping,
    ));
    let leg2 = Inclusion(OgMap::new_unchecked(
        Arc::clone(p2),
        Arc::clone(&result),
        p2_to_result,
    ));
    Ok((result, leg1, leg2))
}

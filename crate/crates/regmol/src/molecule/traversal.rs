//! The deterministic traversal of a regular molecule.
//!
//! The procedure walks a stack of submolecules, marking one element per
//! `cl{x}` pop, and outputs elements in marking order.  The order is
//! invariant under isomorphism of the input representation, so reindexing
//! every dimension by marking order yields a canonical representation:
//! two molecules are isomorphic exactly when their canonical face data are
//! identical.

use crate::error::{Error, Result};
use crate::ogposet::{DimBits, Element, FacePair, OgMap, OgPoset, Orientation};
use std::collections::HashMap;
use std::sync::Arc;

pub struct TraversalOutcome {
    /// Elements in the order they were marked.
    pub order: Vec<Element>,
    /// Main-loop iterations; bounded by `5 * size` for regular molecules.
    pub iterations: usize,
}

struct Frame {
    bits: DimBits,
    unmarked: usize,
}

struct SubsetInfo {
    dim: isize,
    greatest: Option<Element>,
    input_boundary: DimBits,
    output_boundary: DimBits,
}

struct Walker {
    poset: Arc<OgPoset>,
    marked: DimBits,
    order: Vec<Element>,
    info: HashMap<DimBits, Arc<SubsetInfo>>,
    closures: HashMap<Element, DimBits>,
}

impl Walker {
    fn info_for(&mut self, bits: &DimBits) -> Arc<SubsetInfo> {
        if let Some(i) = self.info.get(bits) {
            return Arc::clone(i);
        }
        let subset = crate::ogposet::ClosedSubset::from_bits_unchecked(
            Arc::clone(&self.poset),
            bits.clone(),
        );
        let maximal = subset.maximal_elements();
        let greatest = if maximal.len() == 1 {
            Some(maximal[0])
        } else {
            None
        };
        let info = Arc::new(SubsetInfo {
            dim: subset.dim(),
            greatest,
            input_boundary: subset.boundary(None, Orientation::Input).bits().clone(),
            output_boundary: subset.boundary(None, Orientation::Output).bits().clone(),
        });
        self.info.insert(bits.clone(), Arc::clone(&info));
        info
    }

    fn closure_bits(&mut self, e: Element) -> DimBits {
        if let Some(b) = self.closures.get(&e) {
            return b.clone();
        }
        let bits = self.poset.closure_unchecked([e]).bits().clone();
        self.closures.insert(e, bits.clone());
        bits
    }

    fn count_unmarked(&self, bits: &DimBits) -> usize {
        bits.iter().filter(|e| !self.marked.contains(*e)).count()
    }
}

/// Runs the traversal, erroring out (rather than looping) when the input is
/// not a regular molecule.
pub fn traverse(poset: &Arc<OgPoset>) -> Result<TraversalOutcome> {
    let size = poset.size();
    if size == 0 {
        return Err(Error::NotAMolecule);
    }
    let mut walker = Walker {
        poset: Arc::clone(poset),
        marked: DimBits::for_poset(poset),
        order: Vec::with_capacity(size),
        info: HashMap::new(),
        closures: HashMap::new(),
    };
    let mut stack: Vec<Frame> = Vec::new();
    {
        let mut bits = DimBits::for_poset(poset);
        for e in poset.elements() {
            bits.insert(e);
        }
        stack.push(Frame {
            unmarked: size,
            bits,
        });
    }

    let budget = 5 * size;
    let mut iterations = 0usize;
    while let Some(top) = stack.last() {
        iterations += 1;
        if iterations > budget {
            return Err(Error::NotAMolecule);
        }
        if top.unmarked == 0 {
            stack.pop();
            continue;
        }
        let info = walker.info_for(&top.bits);
        let unmarked_in_input = walker.count_unmarked(&info.input_boundary);
        if unmarked_in_input > 0 {
            stack.push(Frame {
                bits: info.input_boundary.clone(),
                unmarked: unmarked_in_input,
            });
            continue;
        }
        if let Some(x) = info.greatest {
            // mark x, pop, then visit the output boundary if needed
            walker.marked.insert(x);
            walker.order.push(x);
            for frame in stack.iter_mut() {
                if frame.bits.contains(x) {
                    frame.unmarked -= 1;
                }
            }
            stack.pop();
            let unmarked_out = walker.count_unmarked(&info.output_boundary);
            if unmarked_out > 0 {
                stack.push(Frame {
                    bits: info.output_boundary.clone(),
                    unmarked: unmarked_out,
                });
            }
            continue;
        }
        // earliest marked element of codimension 1 in the subset with an
        // unmarked input coface inside it
        let want_dim = info.dim - 1;
        let mut next: Option<Element> = None;
        'search: for i in 0..walker.order.len() {
            let y = walker.order[i];
            if y.dim() as isize != want_dim || !top.bits.contains(y) {
                continue;
            }
            for x in walker.poset.coface_elements(y, Orientation::Input) {
                if top.bits.contains(x) && !walker.marked.contains(x) {
                    next = Some(x);
                    break 'search;
                }
            }
        }
        let Some(x) = next else {
            return Err(Error::NotAMolecule);
        };
        let bits = walker.closure_bits(x);
        let unmarked = walker.count_unmarked(&bits);
        stack.push(Frame { bits, unmarked });
    }

    if walker.order.len() != size {
        return Err(Error::NotAMolecule);
    }
    Ok(TraversalOutcome {
        order: walker.order,
        iterations,
    })
}

/// Reindexes every dimension by marking order.  Returns the canonical poset
/// together with the relabelling map from the input coordinates, and the
/// traversal's iteration count.
pub fn canonicalize(poset: &Arc<OgPoset>) -> Result<(Arc<OgPoset>, OgMap, usize)> {
    let outcome = traverse(poset)?;
    let mut mapping: Vec<Vec<Element>> = (0..poset.face_data().len())
        .map(|n| vec![Element::new(usize::MAX, usize::MAX); poset.card(n)])
        .collect();
    let mut counters = vec![0usize; poset.face_data().len()];
    for &e in &outcome.order {
        mapping[e.dim()][e.index()] = Element::new(e.dim(), counters[e.dim()]);
        counters[e.dim()] += 1;
    }
    let mut face_data: Vec<Vec<FacePair>> = (0..poset.face_data().len())
        .map(|n| vec![FacePair::default(); poset.card(n)])
        .collect();
    for e in poset.elements() {
        let new = mapping[e.dim()][e.index()];
        let mut pair = FacePair::default();
        for o in Orientation::BOTH {
            let mut faces: Vec<usize> = poset
                .faces(e, o)
                .iter()
                .map(|&f| mapping[e.dim() - 1][f].index())
                .collect();
            faces.sort_unstable();
            match o {
                Orientation::Input => pair.input = faces,
                Orientation::Output => pair.output = faces,
            }
        }
        face_data[new.dim()][new.index()] = pair;
    }
    let canonical = Arc::new(OgPoset::from_face_data_unchecked(face_data));
    let map = OgMap::new_unchecked(Arc::clone(poset), Arc::clone(&canonical), mapping);
    Ok((canonical, map, outcome.iterations))
}

//! `k`-layerings and `k`-orderings of molecules.
//!
//! A `k`-ordering is a topological sort of the maximal `k`-flow graph; a
//! `k`-layering factors the molecule into `#k`-pasted layers, one maximal
//! high-dimensional cell each.  Every layering induces an ordering
//! injectively, and an ordering comes from a layering exactly when each
//! step's input boundary sits as a rewritable submolecule inside the
//! current slice boundary, which is how `layering_from_ordering` decides.

use crate::error::Result;
use crate::flow::flow_graph;
use crate::molecule::Molecule;
use crate::ogposet::{Element, Inclusion, Orientation};
use crate::submolecule::{is_rewritable_submolecule, DecisionMode};

/// A topological sort of the maximal `k`-flow graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering {
    pub k: isize,
    pub sequence: Vec<Element>,
}

/// A factorization `U ≅ layer₁ #k … #k layerₘ`, each layer with exactly one
/// maximal element of dimension above `k`, kept with its inclusion into the
/// ambient molecule.
#[derive(Clone)]
pub struct Layering {
    pub k: isize,
    pub layers: Vec<(Molecule, Inclusion)>,
}

impl Layering {
    /// Re-pastes the layers at `k`; canonically equal to the molecule the
    /// layering was computed from.
    pub fn repaste(&self) -> Result<Molecule> {
        let mut acc = self.layers[0].0.clone();
        for (layer, _) in &self.layers[1..] {
            acc = acc.paste(layer, self.k.max(0) as usize)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for Layering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Layering(k = {}, {} layers)", self.k, self.layers.len())
    }
}

/// All `k`-orderings, in lexicographic order of the underlying elements;
/// empty when the maximal `k`-flow graph has a cycle.
pub fn orderings(molecule: &Molecule, k: isize) -> Vec<Ordering> {
    let graph = flow_graph(&molecule.total_subset(), k, true);
    graph
        .topological_sorts()
        .map(|sequence| Ordering { k, sequence })
        .collect()
}

/// Builds the layering induced by an ordering, or `None` when the
/// ordering's slices fail the rewritable-submolecule criterion.
pub fn layering_from_ordering(molecule: &Molecule, ordering: &Ordering) -> Result<Option<Layering>> {
    let k = ordering.k;
    if k >= molecule.dim() {
        return Ok(None);
    }
    if k == -1 {
        // a (-1)-layering is a single atom layer
        return Ok(if molecule.is_atom() && ordering.sequence.len() == 1 {
            let total = molecule.total_subset();
            let pair = molecule.materialize(&total)?;
            Some(Layering {
                k,
                layers: vec![pair],
            })
        } else {
            None
        });
    }
    let expected: usize = molecule
        .total_subset()
        .maximal_elements()
        .iter()
        .filter(|m| (m.dim() as isize) > k)
        .count();
    if ordering.sequence.len() != expected {
        return Ok(None);
    }

    let mut layers = Vec::with_capacity(ordering.sequence.len());
    let mut current = molecule.boundary_subset(Some(k), Orientation::Input);
    for &x in &ordering.sequence {
        let piece = molecule.subset(&[x])?;
        let slice = current.boundary(Some(k), Orientation::Output).union(&piece)?;
        let slice_input = slice.boundary(Some(k), Orientation::Input);
        let target = piece.boundary(Some(k), Orientation::Input);
        if !target.is_subset_of(&slice_input) {
            return Ok(None);
        }
        // an invalid ordering can produce slices that are not molecules at
        // all; reject those rather than erroring out
        let Some((ambient, ambient_incl)) = reject_non_molecule(molecule.materialize(&slice_input))?
        else {
            return Ok(None);
        };
        let Some((_, target_incl)) = reject_non_molecule(molecule.materialize(&target))? else {
            return Ok(None);
        };
        let target_in_ambient = target_incl.restrict_through(&ambient_incl)?;
        let (ok, _) = is_rewritable_submolecule(&ambient, &target_in_ambient, DecisionMode::Auto)?;
        if !ok {
            return Ok(None);
        }
        let Some(layer) = reject_non_molecule(molecule.materialize(&slice))? else {
            return Ok(None);
        };
        layers.push(layer);
        current = slice;
    }
    let candidate = Layering { k, layers };
    // below codimension 1 the stepwise condition alone can accept slices
    // whose pairwise intersections exceed dimension k; re-pasting is the
    // definitional filter
    match candidate.repaste() {
        Ok(m) if m == *molecule => Ok(Some(candidate)),
        Ok(_) => Ok(None),
        Err(crate::error::Error::BoundaryMismatch { .. })
        | Err(crate::error::Error::NotAMolecule)
        | Err(crate::error::Error::NotRound) => Ok(None),
        Err(e) => Err(e),
    }
}

pub(crate) fn reject_non_molecule<T>(
    result: Result<T>,
) -> Result<Option<T>> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(crate::error::Error::NotAMolecule) => Ok(None),
        Err(e) => Err(e),
    }
}

/// All `k`-layerings: the orderings filtered through
/// [`layering_from_ordering`].  Injectivity of the induced-ordering map
/// makes the output duplicate-free.
pub fn enumerate_layerings(molecule: &Molecule, k: isize) -> Result<Vec<Layering>> {
    if k >= molecule.dim() || k < -1 {
        return Ok(Vec::new());
    }
    if k == -1 {
        return Ok(if molecule.is_atom() {
            let total = molecule.total_subset();
            vec![Layering {
                k,
                layers: vec![molecule.materialize(&total)?],
            }]
        } else {
            Vec::new()
        });
    }
    let mut found = Vec::new();
    for ordering in orderings(molecule, k) {
        if let Some(layering) = layering_from_ordering(molecule, &ordering)? {
            found.push(layering);
        }
    }
    Ok(found)
}

/// A codimension-1 layering, which every molecule of positive dimension
/// admits; deterministically the first in ordering enumeration order.
pub fn some_layering(molecule: &Molecule) -> Result<Layering> {
    let k = molecule.dim() - 1;
    if k < -1 {
        return Err(crate::error::Error::DimensionMismatch {
            expected: 1,
            found: molecule.dim(),
        });
    }
    if k == -1 {
        let total = molecule.total_subset();
        return Ok(Layering {
            k,
            layers: vec![molecule.materialize(&total)?],
        });
    }
    let graph = flow_graph(&molecule.total_subset(), k, true);
    for sequence in graph.topological_sorts() {
        let ordering = Ordering { k, sequence };
        if let Some(layering) = layering_from_ordering(molecule, &ordering)? {
            return Ok(layering);
        }
    }
    Err(crate::error::Error::NotAMolecule)
}

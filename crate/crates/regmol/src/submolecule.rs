//! Deciding rewritable-submolecule inclusions, with replayable
//! certificates, dimension-specific fast paths, and substitution.
//!
//! The general procedure iterates topological sorts of the contraction
//! `F_{n-1}U / F_{n-1}V`, rebuilds the slice decomposition a sort induces,
//! and recurses on the input boundaries one dimension down.  Slices are
//! only materialized after the previous slice's check has passed, which is
//! what guarantees they are molecules.  Up to dimension 3 the verdict is
//! decided by fast paths: inclusions in dimension ≤ 2 always succeed, and
//! in dimension 3 the verdict is exactly path-inducedness of `F₂V` in
//! `F₂U`.

use crate::error::{Error, Result};
use crate::flow::{flow_graph, ContractedVertex, DiGraph};
use crate::molecule::{roundness_witness, Molecule};
use crate::ogposet::{ClosedSubset, DimBits, Element, Inclusion, Orientation};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Which decision route to take.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecisionMode {
    /// Dimension-directed: trivial below dimension 3, path-induced test in
    /// dimension 3, general algorithm above.
    Auto,
    /// The general algorithm in every dimension; produces a certificate on
    /// acceptance.
    General,
}

/// A replayable witness that an inclusion is a submolecule inclusion: per
/// level, a topological sort of the contracted codimension-1 flow graph
/// with the position `q` of the contracted class, and one child certificate
/// per slice.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Certificate {
    /// The kept vertices of `F_{n-1}U / F_{n-1}V` in sort order (the class
    /// vertex is omitted; it sits at position `q`).
    pub sort: Vec<Element>,
    /// 0-based position of the contracted class within the full sort.
    pub q: usize,
    /// One certificate per slice, in sort order (entry `q` certifies the
    /// image's own input boundary).
    pub children: Vec<Certificate>,
}

impl Certificate {
    fn leaf() -> Certificate {
        Certificate {
            sort: Vec::new(),
            q: 0,
            children: Vec::new(),
        }
    }
}

type MemoKey = (Vec<u8>, DimBits);

struct Decider {
    memo: HashMap<MemoKey, (bool, Option<Certificate>)>,
    want_certificates: bool,
}

/// Decides whether the inclusion of a round molecule of equal dimension is
/// a (rewritable) submolecule inclusion.
///
/// In `General` mode a `true` verdict comes with a certificate checkable by
/// [`verify_certificate`]; `Auto` mode's fast paths return no certificate.
pub fn is_rewritable_submolecule(
    ambient: &Molecule,
    inclusion: &Inclusion,
    mode: DecisionMode,
) -> Result<(bool, Option<Certificate>)> {
    let image = checked_image(ambient, inclusion)?;
    let mut decider = Decider {
        memo: HashMap::new(),
        want_certificates: mode == DecisionMode::General,
    };
    match mode {
        DecisionMode::Auto => {
            let n = ambient.dim();
            if n <= 2 {
                Ok((true, None))
            } else if n == 3 {
                Ok((decide_dim3(ambient, &image)?, None))
            } else {
                decider.decide(ambient, &image)
            }
        }
        DecisionMode::General => decider.decide(ambient, &image),
    }
}

/// The dimension-3 fast path: the verdict is acyclicity of the contraction
/// `F₂U / F₂V`, linear in the Hasse edges between dimensions 3 and 2.
pub fn is_dim3_fast(ambient: &Molecule, inclusion: &Inclusion) -> Result<bool> {
    if ambient.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: ambient.dim(),
        });
    }
    let image = checked_image(ambient, inclusion)?;
    decide_dim3(ambient, &image)
}

fn decide_dim3(ambient: &Molecule, image: &ClosedSubset) -> Result<bool> {
    let flow = flow_graph(&ambient.total_subset(), 2, false);
    let class: Vec<Element> = image.grade(3).collect();
    flow.is_path_induced(&class)
}

fn checked_image(ambient: &Molecule, inclusion: &Inclusion) -> Result<ClosedSubset> {
    if **inclusion.target() != **ambient.poset() {
        return Err(Error::ForeignSubset);
    }
    let image = inclusion.image();
    if image.dim() != ambient.dim() {
        return Err(Error::DimensionMismatch {
            expected: ambient.dim(),
            found: image.dim(),
        });
    }
    if roundness_witness(&image).is_some() {
        return Err(Error::NotRound);
    }
    Ok(image)
}

impl Decider {
    fn decide(
        &mut self,
        ambient: &Molecule,
        image: &ClosedSubset,
    ) -> Result<(bool, Option<Certificate>)> {
        let n = ambient.dim();
        if n == 0 {
            // both are the point
            let ok = image.len() == ambient.size();
            return Ok((ok, ok.then(Certificate::leaf)));
        }
        let key = (ambient.canonical_bytes(), image.bits().clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let verdict = self.decide_uncached(ambient, image)?;
        self.memo.insert(key, verdict.clone());
        Ok(verdict)
    }

    fn decide_uncached(
        &mut self,
        ambient: &Molecule,
        image: &ClosedSubset,
    ) -> Result<(bool, Option<Certificate>)> {
        let n = ambient.dim();
        let flow = flow_graph(&ambient.total_subset(), n - 1, false);
        let class: Vec<Element> = image.grade(n as usize).collect();
        let contraction = match flow.contract(&class) {
            Ok(c) => c,
            Err(Error::NotConnected) => return Ok((false, None)),
            Err(e) => return Err(e),
        };
        for sort in contraction.graph.topological_sorts() {
            if let Some(cert) = self.check_sort(ambient, image, &sort)? {
                return Ok((true, self.want_certificates.then_some(cert)));
            }
        }
        Ok((false, None))
    }

    /// Replays one topological sort of the contraction; `Some(certificate)`
    /// when every slice check passes.
    fn check_sort(
        &mut self,
        ambient: &Molecule,
        image: &ClosedSubset,
        sort: &[ContractedVertex<Element>],
    ) -> Result<Option<Certificate>> {
        let n = ambient.dim();
        let mut cert = Certificate::leaf();
        let mut current = ambient.boundary_subset(Some(n - 1), Orientation::Input);
        for (i, vertex) in sort.iter().enumerate() {
            let piece = match vertex {
                ContractedVertex::Merged => {
                    cert.q = i;
                    image.clone()
                }
                ContractedVertex::Kept(x) => {
                    cert.sort.push(*x);
                    ambient.poset().closure(&[*x])?
                }
            };
            let slice = current
                .boundary(Some(n - 1), Orientation::Output)
                .union(&piece)?;
            let child_ambient_subset = slice.boundary(Some(n - 1), Orientation::Input);
            let target = piece.boundary(Some(n - 1), Orientation::Input);
            if !target.is_subset_of(&child_ambient_subset) {
                return Ok(None);
            }
            // a rejected sort can leave a slice boundary that is not a
            // molecule; that rejects the sort rather than erroring
            let Some((child_mol, child_incl)) =
                crate::layering::reject_non_molecule(ambient.materialize(&child_ambient_subset))?
            else {
                return Ok(None);
            };
            let child_target = pull_back(&child_incl, &target);
            let (ok, child_cert) = self.decide(&child_mol, &child_target)?;
            if !ok {
                return Ok(None);
            }
            cert.children.push(child_cert.unwrap_or_else(Certificate::leaf));
            current = slice;
        }
        Ok(Some(cert))
    }
}

/// Transports a subset of the inclusion's image back into its source
/// coordinates.
fn pull_back(inclusion: &Inclusion, subset: &ClosedSubset) -> ClosedSubset {
    let source = inclusion.source();
    let mut bits = DimBits::for_poset(source);
    for e in source.elements() {
        if subset.contains(inclusion.apply(e)) {
            bits.insert(e);
        }
    }
    ClosedSubset::from_bits_unchecked(std::sync::Arc::clone(source), bits)
}

/// Replays a certificate against the stated conditions, without search.
/// Returns `false` on any malformed or mismatched certificate.
pub fn verify_certificate(ambient: &Molecule, inclusion: &Inclusion, cert: &Certificate) -> bool {
    let Ok(image) = checked_image(ambient, inclusion) else {
        return false;
    };
    verify_inner(ambient, &image, cert)
}

fn verify_inner(ambient: &Molecule, image: &ClosedSubset, cert: &Certificate) -> bool {
    let n = ambient.dim();
    if n == 0 {
        return image.len() == ambient.size();
    }
    let flow = flow_graph(&ambient.total_subset(), n - 1, false);
    let class: Vec<Element> = image.grade(n as usize).collect();
    let Ok(contraction) = flow.contract(&class) else {
        return false;
    };
    // assemble the claimed full sort and validate it against the contraction
    let m = cert.sort.len() + 1;
    if cert.q >= m || cert.children.len() != m {
        return false;
    }
    let mut full: Vec<ContractedVertex<Element>> = Vec::with_capacity(m);
    for (i, x) in cert.sort.iter().enumerate() {
        if i == cert.q {
            full.push(ContractedVertex::Merged);
        }
        full.push(ContractedVertex::Kept(*x));
    }
    if full.len() < m {
        full.push(ContractedVertex::Merged);
    }
    if !is_topological_sort(&contraction.graph, &full) {
        return false;
    }
    // replay the slices
    let mut current = ambient.boundary_subset(Some(n - 1), Orientation::Input);
    for (i, vertex) in full.iter().enumerate() {
        let piece = match vertex {
            ContractedVertex::Merged => image.clone(),
            ContractedVertex::Kept(x) => match ambient.poset().closure(&[*x]) {
                Ok(c) => c,
                Err(_) => return false,
            },
        };
        let Ok(slice) = current
            .boundary(Some(n - 1), Orientation::Output)
            .union(&piece)
        else {
            return false;
        };
        let child_ambient_subset = slice.boundary(Some(n - 1), Orientation::Input);
        let target = piece.boundary(Some(n - 1), Orientation::Input);
        if !target.is_subset_of(&child_ambient_subset) {
            return false;
        }
        let Ok((child_mol, child_incl)) = ambient.materialize(&child_ambient_subset) else {
            return false;
        };
        let child_target = pull_back(&child_incl, &target);
        if !verify_inner(&child_mol, &child_target, &cert.children[i]) {
            return false;
        }
        current = slice;
    }
    true
}

fn is_topological_sort(
    graph: &DiGraph<ContractedVertex<Element>>,
    sequence: &[ContractedVertex<Element>],
) -> bool {
    if sequence.len() != graph.vertex_count() {
        return false;
    }
    let mut position = HashMap::new();
    for (i, v) in sequence.iter().enumerate() {
        if position.insert(v.clone(), i).is_some() {
            return false;
        }
    }
    graph.edges().all(|(a, b)| match (position.get(a), position.get(b)) {
        (Some(&pa), Some(&pb)) => pa < pb,
        _ => false,
    })
}

/// Everything a substitution produces: the pushout `U ∪ (V ⇒ W)` one
/// dimension up, its legs, and the resulting molecule (its output
/// boundary).
pub struct SubstitutionOutcome {
    /// Shape of `U ∪ (V ⇒ W)`.
    pub step: Molecule,
    /// `U` into the step shape.
    pub base_leg: Inclusion,
    /// `V ⇒ W` into the step shape.
    pub cell_leg: Inclusion,
    /// The rewrite cell `V ⇒ W`.
    pub cell: Molecule,
    /// `W` into the cell.
    pub cell_target_leg: Inclusion,
    /// The substitution result `∂⁺(U ∪ (V ⇒ W))`.
    pub result: Molecule,
    /// The result into the step shape.
    pub result_leg: Inclusion,
}

/// Substitutes `W` for the image of a rewritable submolecule inclusion,
/// returning the replaced molecule.
pub fn substitute(
    ambient: &Molecule,
    inclusion: &Inclusion,
    replacement: &Molecule,
) -> Result<Molecule> {
    Ok(substitute_with_step(ambient, inclusion, replacement, true)?.result)
}

/// Full substitution pipeline; set `check` to skip the submolecule
/// decision when the caller already holds a certificate.
pub fn substitute_with_step(
    ambient: &Molecule,
    inclusion: &Inclusion,
    replacement: &Molecule,
    check: bool,
) -> Result<SubstitutionOutcome> {
    let image = checked_image(ambient, inclusion)?;
    if replacement.dim() != ambient.dim() {
        return Err(Error::DimensionMismatch {
            expected: ambient.dim(),
            found: replacement.dim(),
        });
    }
    if check {
        let (ok, _) = is_rewritable_submolecule(ambient, inclusion, DecisionMode::Auto)?;
        if !ok {
            return Err(Error::NotSubmolecule);
        }
    }
    // the rewrite cell V ⇒ W, with V's inclusion as its input boundary
    let (source_mol, source_incl) = ambient.materialize(&image)?;
    let (cell, cell_source_leg, cell_target_leg) =
        Molecule::atom_with_witnesses(&source_mol, replacement)?;
    // both pushout legs start from the materialized copy of V
    let (raw_step, base_leg, cell_leg) =
        crate::ogposet::pushout_of_inclusions(&source_incl, &cell_source_leg)?;
    let (step_poset, relabel, iterations) = crate::molecule::canonicalize(&raw_step)?;
    let relabel_incl = Inclusion::new_unchecked(relabel);
    let base_leg = base_leg.compose(&relabel_incl)?;
    let cell_leg = cell_leg.compose(&relabel_incl)?;
    let step = Molecule::from_view(step_poset, iterations);
    let result_subset = step.boundary_subset(None, Orientation::Output);
    let (result, result_leg) = step.materialize(&result_subset)?;
    Ok(SubstitutionOutcome {
        step,
        base_leg,
        cell_leg,
        cell,
        cell_target_leg,
        result,
        result_leg,
    })
}

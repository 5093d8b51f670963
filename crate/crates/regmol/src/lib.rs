//! Higher-dimensional diagram rewriting over regular molecules.
//!
//! A diagram shape is encoded as an *oriented graded poset*: a finite poset
//! whose Hasse-diagram edges carry an input/output orientation.  Well-formed
//! shapes (*regular molecules*) are generated by three constructors — the
//! point, pasting at a shared boundary, and the atom (a single cell between
//! two round molecules) — and are kept in a canonical traversal order, so
//! that isomorphism checks reduce to equality of representations.
//!
//! On top of the shape layer the crate provides flow graphs and layerings,
//! subdiagram matching, the rewritable-submolecule decision procedure with
//! replayable certificates, substitution, and labelled rule application with
//! recorded computation traces.  The `regmol` binary exposes all of this on
//! the command line.

pub mod error;
pub mod fixtures;
pub mod flow;
pub mod generate;
pub mod io;
pub mod layering;
pub mod matching;
pub mod molecule;
pub mod ogposet;
pub mod rewrite;
pub mod submolecule;

pub use error::{Error, Result};
pub use matching::{enumerate_inclusions, match_subdiagram, Match};
pub use rewrite::{normalize, Diagram, Label, Rule, RewriteTrace};
pub use layering::{enumerate_layerings, orderings, some_layering, Layering, Ordering};
pub use submolecule::{
    is_rewritable_submolecule, substitute, verify_certificate, Certificate, DecisionMode,
};
pub use flow::{acyclicity_profile, AcyclicityProfile, Contraction, DiGraph};
pub use molecule::{Construction, Molecule};
pub use ogposet::{ClosedSubset, Element, Inclusion, OgMap, OgPoset, Orientation, SizeParams};

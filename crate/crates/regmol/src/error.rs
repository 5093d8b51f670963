use crate::ogposet::Element;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {0} does not belong to the poset")]
    InvalidElement(Element),

    #[error("operands belong to different posets")]
    ForeignSubset,

    #[error("face data is not graded: element {0} of positive dimension has no faces")]
    NotGraded(Element),

    #[error("element {element} lists face index {face} but dimension {} has only {count} elements", element.dim().wrapping_sub(1))]
    DanglingFace {
        element: Element,
        face: usize,
        count: usize,
    },

    #[error("element {upper} covers {lower} with both orientations")]
    DuplicateCovering { upper: Element, lower: Element },

    #[error("map does not preserve boundaries at element {0}")]
    NotAMap(Element),

    #[error("map is not injective")]
    NotInjective,

    #[error("boundaries do not match: no isomorphism at dimension {k}")]
    BoundaryMismatch { k: isize },

    #[error("molecule is not round")]
    NotRound,

    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: isize, found: isize },

    #[error("the image is not a rewritable submolecule")]
    NotSubmolecule,

    #[error("subset does not induce a connected subgraph")]
    NotConnected,

    #[error("traversal failed: the poset is not a regular molecule")]
    NotAMolecule,

    #[error("match is stale: the diagram has changed since it was computed")]
    StaleMatch,

    #[error("match is not valid for this rule and diagram")]
    InvalidMatch,

    #[error("diagram labelling is missing element {0}")]
    MissingLabel(Element),

    #[error("rule must be one dimension above the diagram it rewrites")]
    RuleDimension,

    #[error("{0}")]
    Input(String),
}

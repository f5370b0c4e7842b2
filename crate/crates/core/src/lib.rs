//! Cayley graphs generated by wheel graphs and bubble-sort star graphs,
//! internally disjoint path structures joining three vertices, and
//! certificates for their 3-path-connectivity.

pub mod error;
pub mod perm;
pub mod graph;
pub mod topology;
pub(crate) mod flow;
pub mod menger;
pub mod verdict;
pub mod tripod;
pub mod pairing;
pub mod construct;
pub mod certify;
pub mod lemmas;

pub use error::{CertError, ConstructError, MengerError, PairingError, PermError, TopologyError, TripodError};
pub use graph::{SimpleGraph, SubgraphView};
pub use menger::{Path, PathFamily, PathKind};
pub use perm::{Family, GeneratorSet, Permutation, Transposition};
pub use topology::{CayleyGraph, CopyId, OutsideNeighbors};
pub use certify::{Certificate, SCHEMA_VERSION};
pub use construct::{build_structure, CaseId, CaseTrace, ConstructOptions, Constructed};
pub use pairing::{pairing_capacity, OmegaPathSet};
pub use tripod::{Budget, StructureTarget, TripodStructure};
pub use verdict::VerdictReport;

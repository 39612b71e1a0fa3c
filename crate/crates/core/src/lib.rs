//! An explicit planar point set, indexed by the edges of `K_n`, whose only
//! collinear triples come from triangles.
//!
//! Points are `P_{i,j} = (t_i + t_j, t_i^2 + t_i t_j + t_j^2)` with `t_i`
//! formal indeterminates. Consequences checked here on finite prefixes:
//!
//! * collinear triples are exactly the triangles ([`collinearity`]);
//! * every subset keeps at least half its points in general position via a
//!   bipartite subgraph ([`extraction`]);
//! * partitions into general-position classes are triangle-free edge
//!   colorings, so their number is governed by Ramsey numbers
//!   ([`partition`]);
//! * rational instantiations reproduce the symbolic structure exactly
//!   ([`numeric`]).

pub mod cli;
pub mod collinearity;
pub mod construction;
pub mod extraction;
pub mod gf16;
pub mod numeric;
pub mod oracle;
pub mod partition;
pub mod polyring;

pub use collinearity::{
    classify, is_collinear_fast, is_collinear_symbolic, verify_claim1, witness_coefficient, PatternTag, TriplePattern,
    VerificationReport,
};
pub use construction::{make_point, pair, PairIndex, PointSet, SymbolicPoint};
pub use extraction::{extract_general_position, local_search_cut, verify_general_position, Cut, EdgeSubset};
pub use numeric::{certify, export_numeric, instantiate, Certification, Instantiation};
pub use oracle::{CollinearityOracle, OracleRegistry};
pub use partition::{
    greenwood_gleason_coloring, is_valid_coloring, iterative_halving_partition, lower_bound_certificate, min_colors,
    EdgeColoring, MinColors, PartitionResult,
};
pub use polyring::{det3, Monomial, Polynomial};

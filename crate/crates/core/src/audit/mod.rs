//! Checks of the anti-rainbow guarantee: rainbow copy search, exhaustive
//! rainbow-subgraph audits, the degeneracy-distance bound and the colour
//! budget certificate.

mod certificate;
mod gap;
mod search;
mod subgraphs;

pub use certificate::certificate_check;
pub use gap::{
    degeneracy_gap_bound, max_degenerate_subgraph_edges, DEGENERATE_ORACLE_MAX_VERTICES,
};
pub use search::{contains_copy, rainbow_copy_search, Embedding};
pub use subgraphs::{rainbow_subgraph_audit, Violation, DEFAULT_AUDIT_BUDGET};

//! Perfect 1-factorizations of complete bipartite graphs and acyclic
//! edge-colorings of `K_{p,p}` and `K_{p²,p²}` with `Δ + 2` colors.
//!
//! Matchings of `K_{n,n}` are handled as permutations of the label set
//! `0..n`: the edge `u ↦ v` belongs to the matching `π` exactly when
//! `π(u) = v`. Composite labels `(a, b)` over `Z_p × Z_p` are encoded as
//! `a·p + b`.
//!
//! * [`perm`]: permutation algebra and canonical cycle decomposition.
//! * [`field`]: prime-field context (generator and derived constants).
//! * [`factorization`]: the cyclic and `p²` factorization families.
//! * [`coloring`]: the transversal framework producing `n + 2` colors.
//! * [`analysis`]: machine checks of the cycle structure behind the `p²` coloring.
//! * [`verify`]: construction-independent properness/acyclicity checks and
//!   the exhaustive lower-bound search.

pub mod analysis;
pub mod coloring;
pub mod error;
pub mod exec;
pub mod factorization;
pub mod field;
pub mod perm;
pub mod verify;

pub use coloring::{Certificate, EdgeColoring, LabelPartition};
pub use error::{Error, Result};
pub use exec::Execution;
pub use factorization::{Factorization, FamilyKind};
pub use field::FieldContext;
pub use perm::{CycleDecomposition, Label, Permutation};

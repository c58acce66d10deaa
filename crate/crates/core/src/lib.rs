//! Exact solution of the Lippmann-Schwinger equation `(I - T)|psi> = |phi>`
//! for finite systems whose transition graph is acyclic.
//!
//! Such a transfer operator `T = G0(E) V` is nilpotent, so the Born series
//! stops after `m + 1` terms, where `m` is the longest directed path of the
//! graph. The crate provides the sparse operator algebra, graph analysis,
//! the finite-sum solver (with resolvent and transition matrix), truncation
//! error control for cyclic graphs, named scenario systems and a dense LU
//! oracle used to cross-check all of it.
//!
//! ```
//! use nilborn::{scenarios, Amplitude, StateVector};
//!
//! let one = Amplitude::new(1.0, 0.0);
//! let sys = scenarios::build_diamond(scenarios::DiamondAmplitudes::new(one, one, one, one))?;
//! let psi = sys.solve_exact(&StateVector::basis(4, 0)?)?;
//! assert_eq!(psi.term_count(), 3);
//! assert_eq!(psi.total[3], Amplitude::new(2.0, 0.0));
//! # Ok::<(), nilborn::Error>(())
//! ```

pub mod algebra;
pub mod bench;
pub mod dense;
pub mod error;
pub mod graph;
pub mod quasi;
pub mod scenarios;
pub mod solver;

pub use algebra::{
    build_transfer_operator, Amplitude, DiagonalOperator, NormKind, PotentialOperator,
    SparseOperator, StateVector, TransferOperator, ZERO_THRESHOLD,
};
pub use dense::{BlockLu, DenseMatrix, Lu};
pub use error::{Error, Result};
pub use graph::{
    analyze_acyclicity, enumerate_paths, extract_graph, path_sum_entry, AcyclicityReport,
    TransitionGraph, WeightedPath,
};
pub use quasi::{exact_remainder, nilpotency_defect, remainder_bound, TruncationReport};
pub use solver::{
    born_approximation, direct_inverse_oracle, direct_solve_oracle, BornExpansion, BornSonSystem,
};

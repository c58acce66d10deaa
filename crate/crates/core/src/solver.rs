//! Exact finite Born series for nilpotent transfer operators.
//!
//! When the transition graph of `T` is acyclic with longest path `m`, the
//! Lippmann-Schwinger solution `(I - T)^-1 |phi>` is the finite sum
//! `sum_{k=0..=m} T^k |phi>` with no remainder and no condition on `||T||`.
//! The dense LU routines here serve as the independent cross-check.

use crate::algebra::{Amplitude, PotentialOperator, SparseOperator, StateVector, TransferOperator};
use crate::dense::{BlockLu, DenseMatrix};
use crate::error::{Error, Result};
use crate::graph::{analyze_acyclicity, extract_graph, AcyclicityReport, TransitionGraph};

/// A transfer operator certified nilpotent by its acyclic transition graph.
#[derive(Debug, Clone)]
pub struct BornSonSystem {
    operator: TransferOperator,
    graph: TransitionGraph,
    topological_order: Vec<usize>,
    depth: usize,
}

impl BornSonSystem {
    /// Certifies `T` structurally: the graph must be acyclic, and the depth
    /// is its longest directed path, so `T^(depth+1) = 0`.
    ///
    /// The depth is structural. Exact cancellation between paths (a dark
    /// state) can make `T^depth` vanish numerically as well.
    pub fn new(operator: TransferOperator) -> Result<Self> {
        let graph = extract_graph(&operator);
        match analyze_acyclicity(&graph) {
            AcyclicityReport::Acyclic {
                topological_order,
                depth,
            } => Ok(BornSonSystem {
                operator,
                graph,
                topological_order,
                depth,
            }),
            AcyclicityReport::Cyclic { witness_cycle } => Err(Error::NotNilpotent {
                cycle: witness_cycle,
            }),
        }
    }

    pub fn operator(&self) -> &TransferOperator {
        &self.operator
    }

    pub fn graph(&self) -> &TransitionGraph {
        &self.graph
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topological_order
    }

    /// Longest directed path length `m`; `T^(m+1) = 0`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    /// Number of terms in the exact expansion, `m + 1`.
    pub fn term_count(&self) -> usize {
        self.depth + 1
    }

    /// `(I - T)^-1 = I + T + ... + T^m`, accumulating `T^k = T^(k-1) T`.
    pub fn finite_neumann_inverse(&self) -> DenseMatrix {
        let n = self.dim();
        let mut sum = DenseMatrix::identity(n);
        let mut power = SparseOperator::identity(n);
        for _ in 0..self.depth {
            power = power.matmul(&self.operator).expect("dimensions agree");
            for (row, col, z) in power.entries() {
                sum[(row, col)] += z;
            }
        }
        sum
    }

    /// The exact scattered state `|psi> = sum_{k=0..=m} T^k |phi>`, term by term.
    pub fn solve_exact(&self, phi: &StateVector) -> Result<BornExpansion> {
        if phi.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: phi.dim(),
            });
        }
        let mut terms = Vec::with_capacity(self.term_count());
        terms.push(phi.clone());
        let mut total = phi.clone();
        for _ in 0..self.depth {
            let next = self.operator.matvec(terms.last().unwrap())?;
            total.add_assign(&next);
            terms.push(next);
        }
        Ok(BornExpansion { terms, total })
    }

    /// `det(I - T)` from the block triangular LU of the dense matrix. Equal
    /// to one for every nilpotent `T`.
    pub fn det_check(&self) -> Amplitude {
        BlockLu::new(&identity_minus(&self.operator)).determinant()
    }

    /// Full resolvent `G(E) = (sum_k T^k) G0(E)` for the diagonal of `G0(E)`.
    ///
    /// `g0` must come from the same `(H0, V, E)` that produced `T`.
    pub fn full_resolvent(&self, g0: &[Amplitude]) -> Result<DenseMatrix> {
        if g0.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: g0.len(),
            });
        }
        self.finite_neumann_inverse().mul_diagonal(g0)
    }

    /// Transition matrix `V sum_k T^k`.
    pub fn t_matrix(&self, v: &PotentialOperator) -> Result<DenseMatrix> {
        if v.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        v.mul_dense(&self.finite_neumann_inverse())
    }
}

/// Terms `T^k |phi>` for `k = 0..=m` and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct BornExpansion {
    pub terms: Vec<StateVector>,
    pub total: StateVector,
}

impl BornExpansion {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// Partial Born sum `sum_{k=0..=order} T^k |phi>` for any `T`.
pub fn born_approximation(
    t: &TransferOperator,
    phi: &StateVector,
    order: usize,
) -> Result<StateVector> {
    if phi.dim() != t.dim() {
        return Err(Error::Dimension {
            expected: t.dim(),
            found: phi.dim(),
        });
    }
    let mut term = phi.clone();
    let mut total = phi.clone();
    for _ in 0..order {
        term = t.matvec(&term)?;
        if term.is_zero() {
            break;
        }
        total.add_assign(&term);
    }
    Ok(total)
}

/// Dense `I - T`.
pub fn identity_minus(t: &TransferOperator) -> DenseMatrix {
    let mut m = DenseMatrix::identity(t.dim());
    for (row, col, z) in t.entries() {
        m[(row, col)] -= z;
    }
    m
}

/// Solves `(I - T) psi = phi` densely, without the Born series.
///
/// Uses [`BlockLu`], so it accepts any `T` with `I - T` invertible, cyclic or
/// not, and stays accurate for nilpotent `T` of any norm.
pub fn direct_solve_oracle(t: &TransferOperator, phi: &StateVector) -> Result<StateVector> {
    if phi.dim() != t.dim() {
        return Err(Error::Dimension {
            expected: t.dim(),
            found: phi.dim(),
        });
    }
    let x = BlockLu::new(&identity_minus(t)).solve(phi.as_slice())?;
    StateVector::new(x)
}

/// `(I - T)^-1` by the same dense route as [`direct_solve_oracle`].
pub fn direct_inverse_oracle(t: &TransferOperator) -> Result<DenseMatrix> {
    BlockLu::new(&identity_minus(t)).inverse()
}

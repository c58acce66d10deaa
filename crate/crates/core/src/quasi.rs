//! Truncation error when the transition graph has cycles.
//!
//! The order-`m` remainder is `R_m = (I - T)^-1 T^(m+1) |phi>`. When
//! `||T|| < 1` it obeys `||R_m|| <= ||T^(m+1)|| ||phi|| / (1 - ||T||)`.

use crate::algebra::{NormKind, StateVector, TransferOperator};
use crate::error::{Error, Result};
use crate::solver::direct_solve_oracle;

/// Conventional cut-off on `||T^(m+1)||` below which a system is flagged
/// quasi-nilpotent at order `m`.
pub const QUASI_NILPOTENT_THRESHOLD: f64 = 1e-3;

/// `||T^(m+1)||`.
pub fn nilpotency_defect(t: &TransferOperator, m: usize, kind: NormKind) -> f64 {
    t.power(m as u32 + 1).norm(kind)
}

/// `R_m`, obtained by solving `(I - T) x = T^(m+1) phi` with dense LU.
///
/// Requires only that `I - T` be invertible, not that the Neumann series
/// converge.
pub fn exact_remainder(t: &TransferOperator, phi: &StateVector, m: usize) -> Result<StateVector> {
    let rhs = t.power(m as u32 + 1).matvec(phi)?;
    direct_solve_oracle(t, &rhs)
}

/// Why the norm bound is missing from a [`TruncationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundWithheld {
    /// `||T|| >= 1`: the geometric series bound does not apply.
    NormNotBelowOne,
}

/// Truncation diagnostics for the order-`m` partial Born sum.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    pub order: usize,
    pub norm_kind: NormKind,
    /// `||T||`.
    pub operator_norm: f64,
    /// `||T^(m+1)||`.
    pub defect_norm: f64,
    /// `||phi||` in the vector norm paired with `norm_kind`.
    pub phi_norm: f64,
    /// `||R_m||`; `None` when `I - T` is singular.
    pub exact_remainder_norm: Option<f64>,
    /// `||T^(m+1)|| ||phi|| / (1 - ||T||)` when `||T|| < 1`.
    pub bound: Option<f64>,
    pub bound_withheld: Option<BoundWithheld>,
    /// `defect_norm <= QUASI_NILPOTENT_THRESHOLD`.
    pub quasi_nilpotent: bool,
}

/// Computes the defect, the exact remainder and, when `||T|| < 1`, the bound.
///
/// Every norm kind is submultiplicative and each is paired with a vector
/// norm it dominates (the Frobenius norm with the 2-norm), so the bound is
/// valid for all three.
pub fn remainder_bound(
    t: &TransferOperator,
    phi: &StateVector,
    m: usize,
    kind: NormKind,
) -> Result<TruncationReport> {
    if phi.dim() != t.dim() {
        return Err(Error::Dimension {
            expected: t.dim(),
            found: phi.dim(),
        });
    }
    let defect = t.power(m as u32 + 1);
    let defect_norm = defect.norm(kind);
    let operator_norm = t.norm(kind);
    let phi_norm = phi.norm(kind);

    let exact_remainder_norm = if defect.is_zero() {
        Some(0.0)
    } else {
        match direct_solve_oracle(t, &defect.matvec(phi)?) {
            Ok(r) => Some(r.norm(kind)),
            Err(Error::Singular { .. }) => None,
            Err(e) => return Err(e),
        }
    };

    let (bound, bound_withheld) = if operator_norm < 1.0 {
        (Some(defect_norm * phi_norm / (1.0 - operator_norm)), None)
    } else {
        (None, Some(BoundWithheld::NormNotBelowOne))
    };

    Ok(TruncationReport {
        order: m,
        norm_kind: kind,
        operator_norm,
        defect_norm,
        phi_norm,
        exact_remainder_norm,
        bound,
        bound_withheld,
        quasi_nilpotent: defect_norm <= QUASI_NILPOTENT_THRESHOLD,
    })
}

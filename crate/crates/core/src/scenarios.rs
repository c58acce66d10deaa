//! Named systems (cascade, diamond, double diamond) and the interference
//! classifier for the diamond.
//!
//! Vertex numbering is zero-based: the diamond's ground state `|1>` is
//! vertex 0 and its final state `|4>` is vertex 3.

use crate::algebra::{Amplitude, SparseOperator, StateVector};
use crate::error::{Error, Result};
use crate::solver::{born_approximation, BornSonSystem};

/// Relative cancellation threshold for the dark-state and constructive tests,
/// measured against `|t42 t21| + |t43 t31|`.
pub const DARK_THRESHOLD: f64 = 1e-12;

/// Cascade `n -> n-1 -> ... -> 1` with `amplitudes[k]` on the edge
/// from level `k+2` to level `k+1` (so `amplitudes = [t21, t32, ...]`).
pub fn build_cascade(amplitudes: &[Amplitude]) -> Result<BornSonSystem> {
    if amplitudes.is_empty() {
        return Err(Error::Argument(
            "a cascade needs at least one amplitude".into(),
        ));
    }
    let n = amplitudes.len() + 1;
    let t = SparseOperator::from_transitions(
        n,
        amplitudes.iter().enumerate().map(|(k, &t)| (k + 1, k, t)),
    )?;
    BornSonSystem::new(t)
}

/// The four diamond amplitudes; `t21` drives `|1> -> |2>` and so on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamondAmplitudes {
    pub t21: Amplitude,
    pub t31: Amplitude,
    pub t42: Amplitude,
    pub t43: Amplitude,
}

impl DiamondAmplitudes {
    pub fn new(t21: Amplitude, t31: Amplitude, t42: Amplitude, t43: Amplitude) -> Self {
        DiamondAmplitudes { t21, t31, t42, t43 }
    }

    pub fn scaled(self, lambda: f64) -> Self {
        DiamondAmplitudes {
            t21: self.t21 * lambda,
            t31: self.t31 * lambda,
            t42: self.t42 * lambda,
            t43: self.t43 * lambda,
        }
    }
}

/// Diamond `1 -> {2, 3} -> 4`. Zero amplitudes delete their edge.
pub fn build_diamond(a: DiamondAmplitudes) -> Result<BornSonSystem> {
    let t = SparseOperator::from_transitions(
        4,
        [(0, 1, a.t21), (0, 2, a.t31), (1, 3, a.t42), (2, 3, a.t43)],
    )?;
    BornSonSystem::new(t)
}

/// Two diamonds sharing the recombination vertex: `1 -> {2, 3} -> 4 -> {5, 6} -> 7`.
///
/// `first` couples levels 1..4 and `second` couples levels 4..7 using the
/// same roles (`second.t21` is the edge 4 -> 5, `second.t43` is 6 -> 7).
pub fn build_double_diamond(
    first: DiamondAmplitudes,
    second: DiamondAmplitudes,
) -> Result<BornSonSystem> {
    let t = SparseOperator::from_transitions(
        7,
        [
            (0, 1, first.t21),
            (0, 2, first.t31),
            (1, 3, first.t42),
            (2, 3, first.t43),
            (3, 4, second.t21),
            (3, 5, second.t31),
            (4, 6, second.t42),
            (5, 6, second.t43),
        ],
    )?;
    BornSonSystem::new(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterferenceRegime {
    Constructive,
    DarkState,
    Generic,
}

impl InterferenceRegime {
    pub fn name(self) -> &'static str {
        match self {
            InterferenceRegime::Constructive => "constructive",
            InterferenceRegime::DarkState => "dark_state",
            InterferenceRegime::Generic => "generic",
        }
    }
}

/// One route into the final state with its amplitude product.
#[derive(Debug, Clone, PartialEq)]
pub struct PathContribution {
    pub path: [usize; 3],
    pub amplitude: Amplitude,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceReport {
    /// Exact final-state amplitude from the finite Born sum.
    pub a4: Amplitude,
    /// Final-state amplitude of the first-order Born approximation.
    pub a4_born1: Amplitude,
    /// Routes `1 -> 2 -> 4` and `1 -> 3 -> 4`.
    pub path_contributions: [PathContribution; 2],
    pub regime: InterferenceRegime,
    /// `|A4 - A4_born1| / |A4|`; `None` when `A4 = 0`.
    pub relative_error_born1: Option<f64>,
}

/// Classifies final-state interference in a diamond system.
///
/// Requires exactly the four diamond edges. Dark state when
/// `|A4| <= DARK_THRESHOLD * (|p1| + |p2|)`, constructive when the branch
/// products agree to the same relative threshold, generic otherwise.
pub fn classify_interference(sys: &BornSonSystem) -> Result<InterferenceReport> {
    let g = sys.graph();
    let edges: Vec<(usize, usize)> = g.edges().map(|(i, j, _)| (i, j)).collect();
    if sys.dim() != 4 || edges != [(0, 1), (0, 2), (1, 3), (2, 3)] {
        return Err(Error::Topology { edges });
    }
    let t = sys.operator();
    let left = t.get(3, 1) * t.get(1, 0);
    let right = t.get(3, 2) * t.get(2, 0);

    let phi = StateVector::basis(4, 0)?;
    let a4 = sys.solve_exact(&phi)?.total[3];
    let a4_born1 = born_approximation(t, &phi, 1)?[3];

    let incoherent = left.norm() + right.norm();
    let regime = if a4.norm() <= DARK_THRESHOLD * incoherent {
        InterferenceRegime::DarkState
    } else if (left - right).norm() <= DARK_THRESHOLD * incoherent {
        InterferenceRegime::Constructive
    } else {
        InterferenceRegime::Generic
    };
    let relative_error_born1 = (a4.norm() != 0.0).then(|| (a4 - a4_born1).norm() / a4.norm());

    Ok(InterferenceReport {
        a4,
        a4_born1,
        path_contributions: [
            PathContribution {
                path: [0, 1, 3],
                amplitude: left,
            },
            PathContribution {
                path: [0, 2, 3],
                amplitude: right,
            },
        ],
        regime,
        relative_error_born1,
    })
}

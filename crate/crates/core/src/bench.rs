//! Random acyclic systems and a timing comparison of the finite Born sum
//! against a dense LU solve.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Amplitude, NormKind, StateVector, TransferOperator};
use crate::dense::Lu;
use crate::error::{Error, Result};
use crate::solver::{identity_minus, BornSonSystem};

/// Uniform sample from the closed unit disk.
pub fn unit_disk_amplitude<R: Rng + ?Sized>(rng: &mut R) -> Amplitude {
    loop {
        let re: f64 = rng.random_range(-1.0..=1.0);
        let im: f64 = rng.random_range(-1.0..=1.0);
        if re * re + im * im <= 1.0 {
            return Amplitude::new(re, im);
        }
    }
}

/// Random operator whose graph is acyclic by construction.
///
/// A random permutation fixes the topological order; each forward pair in
/// that order becomes an edge with probability `density`, carrying an
/// amplitude drawn uniformly from the unit disk.
pub fn random_dag_operator<R: Rng + ?Sized>(
    dim: usize,
    density: f64,
    rng: &mut R,
) -> Result<TransferOperator> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Argument(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.shuffle(rng);
    let mut transitions = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            if rng.random_bool(density) {
                transitions.push((order[a], order[b], unit_disk_amplitude(rng)));
            }
        }
    }
    TransferOperator::from_transitions(dim, transitions)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub dim: usize,
    pub density: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub edges: usize,
    pub depth: usize,
    /// Graph analysis plus the finite sum.
    pub born_seconds: f64,
    /// Partial-pivot LU of the dense `I - T` in the given basis, and the solve.
    pub lu_seconds: f64,
    /// `||psi_born - psi_lu||_2 / ||psi_lu||_2`.
    pub relative_difference: f64,
    pub speedup: f64,
}

/// Generates a seeded random DAG system and solves it both ways.
pub fn run_benchmark(config: BenchConfig) -> Result<BenchReport> {
    if config.dim < 2 {
        return Err(Error::Argument(format!(
            "benchmark dimension must be at least 2, got {}",
            config.dim
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let t = random_dag_operator(config.dim, config.density, &mut rng)?;
    let phi = StateVector::new(
        (0..config.dim)
            .map(|_| unit_disk_amplitude(&mut rng))
            .collect(),
    )?;

    let start = Instant::now();
    let sys = BornSonSystem::new(t)?;
    let born = sys.solve_exact(&phi)?.total;
    let born_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let lu = StateVector::new(Lu::new(&identity_minus(sys.operator())).solve(phi.as_slice())?)?;
    let lu_seconds = start.elapsed().as_secs_f64();

    let reference = lu.norm(NormKind::Frobenius);
    let diff = born.sub(&lu)?.norm(NormKind::Frobenius);
    let relative_difference = if reference == 0.0 {
        diff
    } else {
        diff / reference
    };

    Ok(BenchReport {
        config,
        edges: sys.operator().nnz(),
        depth: sys.depth(),
        born_seconds,
        lu_seconds,
        relative_difference,
        speedup: lu_seconds / born_seconds.max(f64::MIN_POSITIVE),
    })
}

//! Fixtures shared by the criterion benches.

use nilborn::bench::{random_dag_operator, unit_disk_amplitude};
use nilborn::{StateVector, TransferOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded random DAG operator with about `edges_per_vertex` edges per vertex,
/// and a random incoming state.
pub fn workload(dim: usize, edges_per_vertex: f64, seed: u64) -> (TransferOperator, StateVector) {
    let density = (2.0 * edges_per_vertex / dim as f64).min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = random_dag_operator(dim, density, &mut rng).expect("density is in range");
    let phi = StateVector::new((0..dim).map(|_| unit_disk_amplitude(&mut rng)).collect())
        .expect("finite amplitudes");
    (t, phi)
}

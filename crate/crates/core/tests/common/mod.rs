//! Test-only oracles and generators. Nothing here calls the sparse power or
//! finite-sum code paths under test.
#![allow(dead_code)]

use nilborn::{Amplitude, SparseOperator, StateVector};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Naive = Vec<Vec<Amplitude>>;

pub fn naive(t: &SparseOperator) -> Naive {
    let n = t.dim();
    let mut m = vec![vec![Amplitude::default(); n]; n];
    for (r, c, z) in t.entries() {
        m[r][c] = z;
    }
    m
}

pub fn naive_identity(n: usize) -> Naive {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        Amplitude::new(1.0, 0.0)
                    } else {
                        Amplitude::default()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn naive_mul(a: &Naive, b: &Naive) -> Naive {
    let n = a.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum())
                .collect()
        })
        .collect()
}

pub fn naive_power(a: &Naive, k: usize) -> Naive {
    (0..k).fold(naive_identity(a.len()), |p, _| naive_mul(&p, a))
}

pub fn naive_matvec(a: &Naive, v: &[Amplitude]) -> Vec<Amplitude> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn frobenius(a: &Naive) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||a - b||_F / ||b||_F`, or the absolute difference when `b` is zero.
pub fn rel_diff(a: &Naive, b: &Naive) -> f64 {
    let diff: f64 = a
        .iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = frobenius(b);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn vec_rel_diff(a: &StateVector, b: &StateVector) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Modulus uniform in `[lo, hi]`, phase uniform.
pub fn amplitude<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Amplitude {
    let r = if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    };
    Amplitude::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn state<R: Rng>(rng: &mut R, n: usize) -> StateVector {
    StateVector::new((0..n).map(|_| amplitude(rng, 0.0, 1.0)).collect()).unwrap()
}

/// Random acyclic operator: forward edges of a shuffled order kept with
/// probability `density`, moduli in `[lo, hi]`.
pub fn dag<R: Rng>(rng: &mut R, n: usize, density: f64, lo: f64, hi: f64) -> SparseOperator {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                edges.push((order[a], order[b], amplitude(rng, lo, hi)));
            }
        }
    }
    SparseOperator::from_transitions(n, edges).unwrap()
}

/// Random operator (cycles allowed) rescaled so that `||T||_inf = target`.
pub fn scaled_operator<R: Rng>(rng: &mut R, n: usize, density: f64, target: f64) -> SparseOperator {
    loop {
        let mut triples = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if rng.random_bool(density) {
                    triples.push((r, c, amplitude(rng, 0.1, 1.0)));
                }
            }
        }
        let t = SparseOperator::from_triplets(n, triples).unwrap();
        let norm = t.norm(nilborn::NormKind::Inf);
        if norm > 0.0 {
            return t.scaled(Amplitude::new(target / norm, 0.0));
        }
    }
}

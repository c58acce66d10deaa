//! Dense complex matrices, partial-pivot LU, and LU on a block triangular
//! reordering.
//!
//! These are the independent oracles for the finite Born sum: nothing here
//! forms operator powers.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative pivot size below which a matrix is reported singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_diagonal(diagonal: &[Complex64]) -> Self {
        let mut m = Self::zeros(diagonal.len());
        for (i, &z) in diagonal.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if self.dim != found {
            return Err(Error::Dimension {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(rhs.dim)?;
        Ok(DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(rhs.dim)?;
        Ok(DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self * diag(d)`: scales column `c` by `d[c]`.
    pub fn mul_diagonal(&self, d: &[Complex64]) -> Result<DenseMatrix> {
        self.check_dim(d.len())?;
        let mut out = self.clone();
        for r in 0..self.dim {
            for (c, &s) in d.iter().enumerate() {
                out[(r, c)] *= s;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> Result<f64> {
        Ok(self.sub(rhs)?.max_abs())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// `P A = L U` with partial (row) pivoting.
///
/// Factorization always completes; singularity is reported by [`Lu::solve`]
/// and [`Lu::inverse`] when a pivot falls below `PIVOT_THRESHOLD` times the
/// largest entry of the input.
#[derive(Debug, Clone)]
pub struct Lu {
    factors: DenseMatrix,
    perm: Vec<usize>,
    swaps: usize,
    scale: f64,
}

impl Lu {
    pub fn new(a: &DenseMatrix) -> Lu {
        let n = a.dim;
        let scale = a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let pivot_row = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap_or(k);
            if pivot_row != k {
                for c in 0..n {
                    lu.data.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            if pivot.norm() == 0.0 {
                continue;
            }
            let (head, tail) = lu.data.split_at_mut((k + 1) * n);
            let pivot_tail = &head[k * n + k + 1..(k + 1) * n];
            for row in tail.chunks_exact_mut(n) {
                let factor = row[k] / pivot;
                row[k] = factor;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for (x, &p) in row[k + 1..].iter_mut().zip(pivot_tail) {
                    *x -= factor * p;
                }
            }
        }
        Lu {
            factors: lu,
            perm,
            swaps,
            scale,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        let prod: Complex64 = (0..self.factors.dim)
            .map(|i| self.factors[(i, i)])
            .product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    fn check_pivots(&self) -> Result<()> {
        self.check_pivots_against(self.scale)
    }

    fn check_pivots_against(&self, scale: f64) -> Result<()> {
        let tolerance = PIVOT_THRESHOLD * scale;
        for column in 0..self.factors.dim {
            let pivot = self.factors[(column, column)].norm();
            if pivot <= tolerance || pivot == 0.0 {
                return Err(Error::Singular { column, pivot });
            }
        }
        Ok(())
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        self.factors.check_dim(b.len())?;
        self.check_pivots()?;
        Ok(self.solve_unchecked(b))
    }

    fn solve_unchecked(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.factors.dim;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let row = self.factors.row(r);
            let s: Complex64 = row[..r].iter().zip(&x[..r]).map(|(l, y)| l * y).sum();
            x[r] -= s;
        }
        for r in (0..n).rev() {
            let row = self.factors.row(r);
            let s: Complex64 = row[r + 1..]
                .iter()
                .zip(&x[r + 1..])
                .map(|(u, y)| u * y)
                .sum();
            x[r] = (x[r] - s) / row[r];
        }
        x
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.check_pivots()?;
        let n = self.factors.dim;
        let mut inv = DenseMatrix::zeros(n);
        let mut e = vec![Complex64::default(); n];
        for c in 0..n {
            e.fill(Complex64::default());
            e[c] = Complex64::new(1.0, 0.0);
            for (r, z) in self.solve_unchecked(&e).into_iter().enumerate() {
                inv[(r, c)] = z;
            }
        }
        Ok(inv)
    }
}

/// LU factorization after a symmetric permutation to block triangular form.
///
/// The blocks are the strongly connected components of the nonzero pattern
/// (edge `c -> r` for every off-diagonal entry at `(r, c)`), taken so that
/// every block depends only on earlier ones. Each diagonal block gets its
/// own partial-pivot [`Lu`]; the blocks are then solved by substitution. An
/// acyclic pattern yields only 1x1 blocks, which keeps the solve accurate
/// even when the inverse has entries many orders of magnitude above the
/// matrix itself.
#[derive(Debug, Clone)]
pub struct BlockLu {
    matrix: DenseMatrix,
    blocks: Vec<Vec<usize>>,
    factors: Vec<Lu>,
    scale: f64,
}

impl BlockLu {
    pub fn new(a: &DenseMatrix) -> BlockLu {
        let blocks = strongly_connected_blocks(a);
        let factors = blocks
            .iter()
            .map(|block| {
                Lu::new(&DenseMatrix::from_fn(block.len(), |r, c| {
                    a[(block[r], block[c])]
                }))
            })
            .collect();
        BlockLu {
            matrix: a.clone(),
            blocks,
            factors,
            scale: a.max_abs(),
        }
    }

    /// Diagonal blocks in solve order, each listing its indices ascending.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn determinant(&self) -> Complex64 {
        self.factors.iter().map(Lu::determinant).product()
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.matrix.dim;
        self.matrix.check_dim(b.len())?;
        for (block, lu) in self.blocks.iter().zip(&self.factors) {
            lu.check_pivots_against(self.scale).map_err(|e| match e {
                Error::Singular { column, pivot } => Error::Singular {
                    column: block[column],
                    pivot,
                },
                other => other,
            })?;
        }
        let mut x = vec![Complex64::default(); n];
        let mut in_block = vec![false; n];
        for (block, lu) in self.blocks.iter().zip(&self.factors) {
            for &i in block {
                in_block[i] = true;
            }
            let rhs: Vec<Complex64> = block
                .iter()
                .map(|&r| {
                    let coupling: Complex64 = self
                        .matrix
                        .row(r)
                        .iter()
                        .zip(&x)
                        .zip(&in_block)
                        .filter(|(_, &inside)| !inside)
                        .map(|((a, xc), _)| a * xc)
                        .sum();
                    b[r] - coupling
                })
                .collect();
            for (&i, z) in block.iter().zip(lu.solve_unchecked(&rhs)) {
                x[i] = z;
                in_block[i] = false;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.matrix.dim;
        let mut inv = DenseMatrix::zeros(n);
        let mut e = vec![Complex64::default(); n];
        for c in 0..n {
            e.fill(Complex64::default());
            e[c] = Complex64::new(1.0, 0.0);
            for (r, z) in self.solve(&e)?.into_iter().enumerate() {
                inv[(r, c)] = z;
            }
        }
        Ok(inv)
    }
}

/// Tarjan's algorithm on the nonzero pattern, returned with every block
/// after the blocks it depends on.
fn strongly_connected_blocks(a: &DenseMatrix) -> Vec<Vec<usize>> {
    let n = a.dim;
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|c| {
            (0..n)
                .filter(|&r| r != c && a[(r, c)] != Complex64::default())
                .collect()
        })
        .collect();

    let mut index = vec![usize::MAX; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut blocks = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        calls.push((root, 0));
        while let Some(&mut (v, ref mut k)) = calls.last_mut() {
            if *k == 0 && index[v] == usize::MAX {
                index[v] = next_index;
                lowlink[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = succ[v].get(*k) {
                *k += 1;
                if index[w] == usize::MAX {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut block = Vec::new();
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    block.push(w);
                    if w == v {
                        break;
                    }
                }
                block.sort_unstable();
                blocks.push(block);
            }
        }
    }
    // Tarjan emits a block only after everything reachable from it.
    blocks.reverse();
    blocks
}

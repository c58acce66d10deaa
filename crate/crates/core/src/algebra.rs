//! Sparse complex operators, state vectors and the `G0 V` composition.
//!
//! Operators use the column-vector convention: the stored entry at
//! `(row j, col i)` is the amplitude `<j|T|i>` of the transition `i -> j`.
//! All indices in this crate are zero-based.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Complex transition amplitude.
pub type Amplitude = Complex64;

/// Entries whose modulus falls at or below this value after arithmetic are
/// not stored.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// Relative distance from a level below which an energy counts as resonant:
/// `|E - E_j| <= RESONANCE_THRESHOLD * (1 + |E|)` is rejected.
pub const RESONANCE_THRESHOLD: f64 = 1e-10;

/// Which norm to use for operators (and the vector norm it is paired with).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// Maximum absolute row sum; paired with the max-modulus vector norm.
    #[default]
    Inf,
    /// Maximum absolute column sum; paired with the vector 1-norm.
    One,
    /// Square root of the sum of squared moduli; paired with the vector 2-norm.
    Frobenius,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::Inf, NormKind::One, NormKind::Frobenius];

    pub fn name(self) -> &'static str {
        match self {
            NormKind::Inf => "inf",
            NormKind::One => "one",
            NormKind::Frobenius => "fro",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => Ok(NormKind::Inf),
            "one" => Ok(NormKind::One),
            "fro" | "frobenius" => Ok(NormKind::Frobenius),
            other => Err(Error::Argument(format!("unknown norm kind `{other}`"))),
        }
    }
}

fn check_finite(values: impl IntoIterator<Item = Amplitude>) -> Result<()> {
    match values
        .into_iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Complex amplitude vector over the fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<Amplitude>);

impl StateVector {
    pub fn new(entries: Vec<Amplitude>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(entries.iter().copied())?;
        Ok(StateVector(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector(vec![Amplitude::new(0.0, 0.0); dim])
    }

    /// The basis ket `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                row: index,
                col: 0,
                dim,
            });
        }
        let mut v = Self::zeros(dim);
        v.0[index] = Amplitude::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Amplitude] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Amplitude> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Amplitude> {
        self.0.iter()
    }

    /// True when every component is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Vector norm compatible with the operator norm of the same kind.
    pub fn norm(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::Inf => self.0.iter().map(|z| z.norm()).fold(0.0, f64::max),
            NormKind::One => self.0.iter().map(|z| z.norm()).sum(),
            NormKind::Frobenius => self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    fn check_dim(&self, other: &StateVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.check_dim(other)?;
        Ok(StateVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        self.check_dim(other)?;
        Ok(StateVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub(crate) fn add_assign(&mut self, other: &StateVector) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }
}

impl Index<usize> for StateVector {
    type Output = Amplitude;

    fn index(&self, index: usize) -> &Amplitude {
        &self.0[index]
    }
}

/// Sparse square complex operator stored by columns.
///
/// Every stored amplitude is finite and has modulus above [`ZERO_THRESHOLD`];
/// each column is sorted by row index without duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    cols: Vec<Vec<(usize, Amplitude)>>,
}

/// The transfer operator `T = G0(E) V`.
pub type TransferOperator = SparseOperator;

/// The interaction potential `V`.
pub type PotentialOperator = SparseOperator;

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        SparseOperator {
            dim,
            cols: (0..dim)
                .map(|i| vec![(i, Amplitude::new(1.0, 0.0))])
                .collect(),
        }
    }

    /// Builds an operator from `(row, col, amplitude)` triples.
    ///
    /// Amplitudes at or below [`ZERO_THRESHOLD`] are discarded. Duplicate
    /// positions, out-of-range indices and non-finite values are rejected.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Amplitude)>,
    {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut cols: Vec<Vec<(usize, Amplitude)>> = vec![Vec::new(); dim];
        for (index, (row, col, value)) in triplets.into_iter().enumerate() {
            if row >= dim || col >= dim {
                return Err(Error::IndexOutOfRange { row, col, dim });
            }
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            cols[col].push((row, value));
        }
        for (col, entries) in cols.iter_mut().enumerate() {
            entries.sort_by_key(|&(row, _)| row);
            if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry { row: w[0].0, col });
            }
            entries.retain(|(_, z)| z.norm() > ZERO_THRESHOLD);
        }
        Ok(SparseOperator { dim, cols })
    }

    /// Builds an operator from `(from, to, amplitude)` transitions; each one
    /// is stored at `(to, from)`.
    pub fn from_transitions<I>(dim: usize, transitions: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Amplitude)>,
    {
        Self::from_triplets(
            dim,
            transitions.into_iter().map(|(from, to, t)| (to, from, t)),
        )
    }

    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        let n = m.dim();
        Self::from_triplets(
            n,
            (0..n).flat_map(|r| (0..n).map(move |c| (r, c, m[(r, c)]))),
        )
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim);
        for (row, col, z) in self.entries() {
            m[(row, col)] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// True when no entry is stored.
    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Stored entries as `(row, col, amplitude)`, column by column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Amplitude)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(col, entries)| entries.iter().map(move |&(row, z)| (row, col, z)))
    }

    /// Stored entries of one column as `(row, amplitude)`, sorted by row.
    pub fn column(&self, col: usize) -> &[(usize, Amplitude)] {
        &self.cols[col]
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.cols[col]
            .binary_search_by_key(&row, |&(r, _)| r)
            .map(|k| self.cols[col][k].1)
            .unwrap_or_default()
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

    /// `T |v>`.
    pub fn matvec(&self, v: &StateVector) -> Result<StateVector> {
        self.check_dim(v.dim())?;
        let mut out = StateVector::zeros(self.dim);
        for (col, entries) in self.cols.iter().enumerate() {
            let x = v[col];
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for &(row, z) in entries {
                out.0[row] += z * x;
            }
        }
        Ok(out)
    }

    /// Sparse product `self * rhs`; accumulated entries at or below
    /// [`ZERO_THRESHOLD`] are dropped.
    pub fn matmul(&self, rhs: &SparseOperator) -> Result<SparseOperator> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut acc = vec![Amplitude::default(); n];
        let mut touched = vec![false; n];
        let mut rows: Vec<usize> = Vec::new();
        let mut cols = Vec::with_capacity(n);
        for rhs_col in &rhs.cols {
            for &(k, b) in rhs_col {
                for &(row, a) in &self.cols[k] {
                    if !touched[row] {
                        touched[row] = true;
                        rows.push(row);
                    }
                    acc[row] += a * b;
                }
            }
            rows.sort_unstable();
            let mut col = Vec::with_capacity(rows.len());
            for &row in &rows {
                let z = acc[row];
                if z.norm() > ZERO_THRESHOLD {
                    col.push((row, z));
                }
                acc[row] = Amplitude::default();
                touched[row] = false;
            }
            rows.clear();
            cols.push(col);
        }
        Ok(SparseOperator { dim: n, cols })
    }

    /// `T^k` by repeated multiplication; `T^0` is the identity.
    pub fn power(&self, k: u32) -> SparseOperator {
        let mut p = SparseOperator::identity(self.dim);
        for _ in 0..k {
            if p.is_zero() {
                break;
            }
            p = p.matmul(self).expect("dimensions agree");
        }
        p
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::Inf => {
                let mut rows = vec![0.0; self.dim];
                for (row, _, z) in self.entries() {
                    rows[row] += z.norm();
                }
                rows.into_iter().fold(0.0, f64::max)
            }
            NormKind::One => self
                .cols
                .iter()
                .map(|c| c.iter().map(|(_, z)| z.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::Frobenius => self
                .entries()
                .map(|(_, _, z)| z.norm_sqr())
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// `lambda * T`, keeping the sparsity pattern unless an entry underflows
    /// the zero threshold.
    pub fn scaled(&self, lambda: Amplitude) -> SparseOperator {
        let cols = self
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&(row, z)| (row, z * lambda))
                    .filter(|(_, z)| z.norm() > ZERO_THRESHOLD)
                    .collect()
            })
            .collect();
        SparseOperator {
            dim: self.dim,
            cols,
        }
    }

    /// Dense product `self * rhs`.
    pub fn mul_dense(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(rhs.dim())?;
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for (row, k, a) in self.entries() {
            for col in 0..n {
                let b = rhs[(k, col)];
                out[(row, col)] += a * b;
            }
        }
        Ok(out)
    }
}

/// Diagonal free Hamiltonian `H0` in the chosen basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    diagonal: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if let Some(index) = diagonal.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(DiagonalOperator { diagonal })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Diagonal of the free resolvent `G0(E) = (E - H0)^-1`.
    ///
    /// `energy` may carry a finite imaginary part standing in for the
    /// `+/- i0` prescription.
    pub fn free_resolvent(&self, energy: Amplitude) -> Result<Vec<Amplitude>> {
        if !(energy.re.is_finite() && energy.im.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        let tolerance = RESONANCE_THRESHOLD * (1.0 + energy.norm());
        self.diagonal
            .iter()
            .enumerate()
            .map(|(level, &e)| {
                let gap = energy - e;
                if gap.norm() <= tolerance {
                    Err(Error::Resonance {
                        level,
                        energy,
                        gap: gap.norm(),
                    })
                } else {
                    Ok(gap.inv())
                }
            })
            .collect()
    }
}

/// `T = G0(E) V`, i.e. `T_ji = V_ji / (E - H0_j)`.
///
/// The sparsity pattern of `V` is preserved exactly.
pub fn build_transfer_operator(
    h0: &DiagonalOperator,
    v: &PotentialOperator,
    energy: Amplitude,
) -> Result<TransferOperator> {
    v.check_dim(h0.dim())?;
    let g0 = h0.free_resolvent(energy)?;
    let cols = v
        .cols
        .iter()
        .map(|c| c.iter().map(|&(row, z)| (row, g0[row] * z)).collect())
        .collect();
    Ok(SparseOperator { dim: v.dim, cols })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    fn diamond(t21: Amplitude, t31: Amplitude, t42: Amplitude, t43: Amplitude) -> SparseOperator {
        SparseOperator::from_transitions(4, [(0, 1, t21), (0, 2, t31), (1, 3, t42), (2, 3, t43)])
            .unwrap()
    }

    #[test]
    fn matvec_on_diamond_ground_state() {
        let (t21, t31) = (c(0.3, 1.0), c(-2.0, 0.5));
        let t = diamond(t21, t31, c(1.0, 0.0), c(4.0, -1.0));
        let out = t.matvec(&StateVector::basis(4, 0).unwrap()).unwrap();
        assert_eq!(out.as_slice(), &[c(0.0, 0.0), t21, t31, c(0.0, 0.0)]);
    }

    #[test]
    fn zero_operator_annihilates() {
        let v = StateVector::new(vec![c(1.0, 2.0), c(-3.0, 0.5)]).unwrap();
        assert!(SparseOperator::zero(2).matvec(&v).unwrap().is_zero());
        let t = SparseOperator::from_triplets(2, [(0, 1, c(2.0, 0.0))]).unwrap();
        assert!(t.matmul(&SparseOperator::zero(2)).unwrap().is_zero());
        assert!(SparseOperator::zero(2).matmul(&t).unwrap().is_zero());
    }

    #[test]
    fn cascade_square_has_single_entry() {
        // 3 -> 2 -> 1, stored at (1, 2) and (0, 1) zero-based.
        let (t21, t32) = (c(0.7, 0.2), c(-1.5, 3.0));
        let t = SparseOperator::from_transitions(3, [(1, 0, t21), (2, 1, t32)]).unwrap();
        let t2 = t.matmul(&t).unwrap();
        assert_eq!(t2.nnz(), 1);
        assert_eq!(t2.get(0, 2), t21 * t32);
    }

    #[test]
    fn diamond_square_and_cube() {
        let (t21, t31, t42, t43) = (c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5));
        let t = diamond(t21, t31, t42, t43);
        let t2 = t.power(2);
        assert_eq!(t2.nnz(), 1);
        assert_eq!(t2.get(3, 0), t42 * t21 + t43 * t31);
        assert!(t.power(3).is_zero());
        assert_eq!(t.power(0), SparseOperator::identity(4));
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let err = SparseOperator::zero(3)
            .matvec(&StateVector::zeros(2))
            .unwrap_err();
        assert_eq!(
            err,
            Error::Dimension {
                expected: 3,
                found: 2
            }
        );
        assert!(SparseOperator::zero(3)
            .matmul(&SparseOperator::zero(4))
            .is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            SparseOperator::from_triplets(2, [(0, 1, c(1.0, 0.0)), (0, 1, c(2.0, 0.0))]),
            Err(Error::DuplicateEntry { row: 0, col: 1 })
        );
        assert!(matches!(
            SparseOperator::from_triplets(2, [(2, 0, c(1.0, 0.0))]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            SparseOperator::from_triplets(2, [(0, 0, c(f64::NAN, 0.0))]),
            Err(Error::NonFinite { .. })
        ));
        let t = SparseOperator::from_triplets(2, [(0, 1, c(1e-15, 0.0))]).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn tiny_products_are_dropped() {
        let t = SparseOperator::from_transitions(3, [(0, 1, c(1e-8, 0.0)), (1, 2, c(1e-8, 0.0))])
            .unwrap();
        assert!(t.power(2).is_zero());
    }

    #[test]
    fn norms() {
        for kind in NormKind::ALL {
            assert_eq!(SparseOperator::zero(3).norm(kind), 0.0);
            let single = SparseOperator::from_triplets(3, [(1, 2, c(0.3, 0.4))]).unwrap();
            assert!((single.norm(kind) - 0.5).abs() < 1e-15);
        }
        let id = SparseOperator::identity(4);
        assert_eq!(id.norm(NormKind::Inf), 1.0);
        assert_eq!(id.norm(NormKind::One), 1.0);
        assert_eq!(id.norm(NormKind::Frobenius), 2.0);

        let t = SparseOperator::from_triplets(
            2,
            [
                (0, 0, c(1.0, 0.0)),
                (0, 1, c(-2.0, 0.0)),
                (1, 0, c(3.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(t.norm(NormKind::Inf), 3.0);
        assert_eq!(t.norm(NormKind::One), 4.0);
        assert!((t.norm(NormKind::Frobenius) - 14f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn transfer_operator_from_hamiltonian() {
        let h0 = DiagonalOperator::new(vec![0.0, 1.0]).unwrap();
        let v = SparseOperator::from_transitions(2, [(0, 1, c(1.0, 0.0))]).unwrap();
        let t = build_transfer_operator(&h0, &v, c(3.0, 0.0)).unwrap();
        assert_eq!(t.get(1, 0), c(0.5, 0.0));
        assert_eq!(t.nnz(), 1);

        let zero = build_transfer_operator(&h0, &SparseOperator::zero(2), c(3.0, 0.0)).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn resonant_energy_names_the_level() {
        let h0 = DiagonalOperator::new(vec![0.0, 1.0, 2.5]).unwrap();
        let v = SparseOperator::zero(3);
        match build_transfer_operator(&h0, &v, c(2.5, 0.0)) {
            Err(Error::Resonance { level, .. }) => assert_eq!(level, 2),
            other => panic!("expected resonance, got {other:?}"),
        }
        // a finite imaginary part moves the energy off resonance
        assert!(build_transfer_operator(&h0, &v, c(2.5, 1e-3)).is_ok());
    }

    #[test]
    fn norm_kind_parsing() {
        assert_eq!("inf".parse::<NormKind>().unwrap(), NormKind::Inf);
        assert_eq!("one".parse::<NormKind>().unwrap(), NormKind::One);
        assert_eq!("fro".parse::<NormKind>().unwrap(), NormKind::Frobenius);
        assert!("two".parse::<NormKind>().is_err());
    }
}

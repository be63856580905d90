use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::BasisTag;
use crate::{Error, Result, C64};

/// Operators above this dimension are stored sparse.
pub const SPARSE_THRESHOLD: usize = 200;
/// Tolerance behind the `hermitian` flag.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Compressed sparse row storage, columns sorted within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl CsrMatrix {
    fn from_sorted_rows(dim: usize, rows: Vec<Vec<(usize, C64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            rows[r].push((c, v));
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != C64::new(0.0, 0.0));
            *row = merged;
        }
        Self::from_sorted_rows(dim, rows)
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[a..b]
            .iter()
            .copied()
            .zip(self.vals[a..b].iter().copied())
    }

    fn get(&self, r: usize, c: usize) -> C64 {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.cols[a..b].binary_search(&c) {
            Ok(k) => self.vals[a + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    fn matmul(&self, other: &CsrMatrix) -> CsrMatrix {
        let n = self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut touched = vec![false; n];
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let mut used = Vec::new();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        used.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            used.sort_unstable();
            let mut row = Vec::with_capacity(used.len());
            for c in used {
                if acc[c] != C64::new(0.0, 0.0) {
                    row.push((c, acc[c]));
                }
                acc[c] = C64::new(0.0, 0.0);
                touched[c] = false;
            }
            rows.push(row);
        }
        CsrMatrix::from_sorted_rows(n, rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Storage {
    Dense(DMatrix<C64>),
    Sparse(CsrMatrix),
}

/// Complex square matrix bound to the basis it acts on.
///
/// Storage is dense up to [`SPARSE_THRESHOLD`] and sparse above; binary
/// operations require identical basis tags.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    storage: Storage,
    basis: BasisTag,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Assemble from `(row, col, value)` entries; duplicates are summed.
    ///
    /// With `hermitian = true` the result is checked against
    /// [`HERMITIAN_TOLERANCE`].
    pub fn from_triplets(
        basis: BasisTag,
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, C64)>,
        hermitian: bool,
    ) -> Result<Self> {
        let storage = if dim > SPARSE_THRESHOLD {
            Storage::Sparse(CsrMatrix::from_triplets(dim, triplets))
        } else {
            let mut m = DMatrix::zeros(dim, dim);
            for (r, c, v) in triplets {
                m[(r, c)] += v;
            }
            Storage::Dense(m)
        };
        Self::checked(storage, basis, hermitian)
    }

    pub fn from_dense(basis: BasisTag, m: DMatrix<C64>, hermitian: bool) -> Result<Self> {
        let dim = m.nrows();
        if dim > SPARSE_THRESHOLD {
            let trip = dense_triplets(&m);
            return Self::from_triplets(basis, dim, trip, hermitian);
        }
        Self::checked(Storage::Dense(m), basis, hermitian)
    }

    fn checked(storage: Storage, basis: BasisTag, hermitian: bool) -> Result<Self> {
        let op = Self {
            storage,
            basis,
            hermitian,
        };
        if hermitian {
            let r = op.hermiticity_residual();
            if r > HERMITIAN_TOLERANCE {
                return Err(Error::NonHermitian { residual: r });
            }
        }
        Ok(op)
    }

    fn unchecked(storage: Storage, basis: BasisTag, hermitian: bool) -> Self {
        Self {
            storage,
            basis,
            hermitian,
        }
    }

    pub fn identity(basis: BasisTag, dim: usize) -> Self {
        Self::diagonal(basis, &vec![1.0; dim])
    }

    pub fn diagonal(basis: BasisTag, diag: &[f64]) -> Self {
        let trip = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, i, C64::new(d, 0.0)));
        Self::from_triplets(basis, diag.len(), trip, false)
            .map(|mut op| {
                op.hermitian = true;
                op
            })
            .expect("diagonal assembly cannot fail")
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.nrows(),
            Storage::Sparse(s) => s.dim,
        }
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    /// Set the Hermitian flag after verifying it.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let r = self.hermiticity_residual();
        if r > HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitian { residual: r });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        match &self.storage {
            Storage::Dense(m) => m[(r, c)],
            Storage::Sparse(s) => s.get(r, c),
        }
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        match &self.storage {
            Storage::Dense(m) => dense_triplets(m),
            Storage::Sparse(s) => (0..s.dim)
                .flat_map(|r| s.row(r).map(move |(c, v)| (r, c, v)))
                .collect(),
        }
    }

    /// `y ← A x`.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        match &self.storage {
            Storage::Dense(m) => {
                let n = m.nrows();
                for (r, yr) in y.iter_mut().enumerate().take(n) {
                    let mut acc = C64::new(0.0, 0.0);
                    for (c, xc) in x.iter().enumerate().take(n) {
                        acc += m[(r, c)] * xc;
                    }
                    *yr = acc;
                }
            }
            Storage::Sparse(s) => {
                for (r, yr) in y.iter_mut().enumerate().take(s.dim) {
                    let mut acc = C64::new(0.0, 0.0);
                    for (c, v) in s.row(r) {
                        acc += v * x[c];
                    }
                    *yr = acc;
                }
            }
        }
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply(x, &mut y);
        y
    }

    /// `⟨ψ|A|ψ⟩` (no normalization).
    pub fn expectation(&self, psi: &[C64]) -> C64 {
        let y = self.mul_vec(psi);
        psi.iter().zip(&y).map(|(a, b)| a.conj() * b).sum()
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis || self.dim() != other.dim() {
            return Err(Error::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        Ok(())
    }

    fn sparse_view(&self) -> CsrMatrix {
        match &self.storage {
            Storage::Sparse(s) => s.clone(),
            Storage::Dense(m) => CsrMatrix::from_triplets(m.nrows(), dense_triplets(m)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let hermitian = self.hermitian && other.hermitian;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(a + b),
            _ => {
                let mut trip = self.triplets();
                trip.extend(other.triplets());
                Storage::Sparse(CsrMatrix::from_triplets(self.dim(), trip))
            }
        };
        Ok(Self::unchecked(storage, self.basis, hermitian))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m * c),
            Storage::Sparse(s) => {
                let mut s = s.clone();
                for v in &mut s.vals {
                    *v *= c;
                }
                Storage::Sparse(s)
            }
        };
        Self::unchecked(storage, self.basis, self.hermitian && c.im == 0.0)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Matrix product `self · other`. The result is not flagged Hermitian.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(a * b),
            _ => Storage::Sparse(self.sparse_view().matmul(&other.sparse_view())),
        };
        Ok(Self::unchecked(storage, self.basis, false))
    }

    pub fn adjoint(&self) -> Self {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m.adjoint()),
            Storage::Sparse(s) => {
                let trip = (0..s.dim).flat_map(|r| s.row(r).map(move |(c, v)| (c, r, v.conj())));
                Storage::Sparse(CsrMatrix::from_triplets(s.dim, trip))
            }
        };
        Self::unchecked(storage, self.basis, self.hermitian)
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.sub(&ba)
    }

    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => m.iter().fold(0.0, |acc: f64, z| acc.max(z.norm())),
            Storage::Sparse(s) => s.vals.iter().fold(0.0, |acc: f64, z| acc.max(z.norm())),
        }
    }

    /// `max |A − A†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => {
                let n = m.nrows();
                let mut r: f64 = 0.0;
                for i in 0..n {
                    for j in i..n {
                        r = r.max((m[(i, j)] - m[(j, i)].conj()).norm());
                    }
                }
                r
            }
            Storage::Sparse(s) => {
                let mut r: f64 = 0.0;
                for i in 0..s.dim {
                    for (j, v) in s.row(i) {
                        r = r.max((v - s.get(j, i).conj()).norm());
                    }
                }
                r
            }
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(s) => {
                let mut m = DMatrix::zeros(s.dim, s.dim);
                for r in 0..s.dim {
                    for (c, v) in s.row(r) {
                        m[(r, c)] = v;
                    }
                }
                m
            }
        }
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        match &self.storage {
            Storage::Dense(m) => m.iter().all(|z| z.im == 0.0),
            Storage::Sparse(s) => s.vals.iter().all(|z| z.im == 0.0),
        }
    }

    /// Number of stored nonzeros.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.iter().filter(|z| **z != C64::new(0.0, 0.0)).count(),
            Storage::Sparse(s) => s.nnz(),
        }
    }

    pub(crate) fn retagged(mut self, basis: BasisTag) -> Self {
        self.basis = basis;
        self
    }
}

fn dense_triplets(m: &DMatrix<C64>) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            if v != C64::new(0.0, 0.0) {
                out.push((r, c, v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAG: BasisTag = BasisTag::Photon { n_max: 0 };

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_ops(dim: usize) -> (OperatorMatrix, OperatorMatrix) {
        let mut state = 7u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut ta = Vec::new();
        let mut tb = Vec::new();
        for _ in 0..4 * dim {
            let (i, j) = ((next() + 0.5) * dim as f64, (next() + 0.5) * dim as f64);
            ta.push((i as usize % dim, j as usize % dim, c(next(), next())));
            tb.push((j as usize % dim, i as usize % dim, c(next(), next())));
        }
        (
            OperatorMatrix::from_triplets(TAG, dim, ta, false).unwrap(),
            OperatorMatrix::from_triplets(TAG, dim, tb, false).unwrap(),
        )
    }

    #[test]
    fn sparse_and_dense_agree() {
        // same random entries in both storage classes
        let (a, b) = random_ops(260);
        assert!(a.is_sparse());
        let (ad, bd) = (a.to_dense(), b.to_dense());
        let prod = a.matmul(&b).unwrap().to_dense();
        let maxdiff = |m: DMatrix<C64>| m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        assert!(maxdiff(prod - &ad * &bd) < 1e-12);
        let sum = a.add(&b).unwrap().to_dense();
        assert!(maxdiff(sum - (&ad + &bd)) < 1e-14);
        assert!(maxdiff(a.adjoint().to_dense() - ad.adjoint()) == 0.0);
        let x: Vec<C64> = (0..260).map(|i| c(i as f64, -(i as f64) * 0.5)).collect();
        let y = a.mul_vec(&x);
        let yd = &ad * nalgebra::DVector::from_vec(x.clone());
        for i in 0..260 {
            assert!((y[i] - yd[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn hermitian_flag_is_checked() {
        let bad = [(0, 1, c(1.0, 0.0))];
        assert!(matches!(
            OperatorMatrix::from_triplets(TAG, 2, bad, true),
            Err(Error::NonHermitian { .. })
        ));
        let good = [(0, 1, c(0.0, 1.0)), (1, 0, c(0.0, -1.0))];
        assert!(OperatorMatrix::from_triplets(TAG, 2, good, true).is_ok());
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let a = OperatorMatrix::identity(TAG, 3);
        let b = OperatorMatrix::identity(BasisTag::Atom { sites: 3, atoms: 1 }, 3);
        assert!(matches!(a.add(&b), Err(Error::BasisMismatch { .. })));
        assert!(matches!(a.matmul(&b), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn duplicates_are_summed() {
        let t = [
            (0, 0, c(1.0, 0.0)),
            (0, 0, c(2.0, 0.0)),
            (1, 1, c(0.0, 0.0)),
        ];
        let op = OperatorMatrix::from_triplets(TAG, 300, t, false).unwrap();
        assert_eq!(op.get(0, 0), c(3.0, 0.0));
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.trace(), c(3.0, 0.0));
    }
}

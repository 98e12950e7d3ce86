//! Dense operators and density matrices on labelled tensor factorizations.
//!
//! Every operator carries its list of [`Factor`]s. System factors come first; at
//! most one [`Factor::Bath`] may appear and, when it does, it must be the last
//! factor for [`Operator::partial_trace_bath`] to accept it.

use std::env;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::StabilizerCode;

/// Default largest qubit count for dense matrices.
pub const DEFAULT_DENSE_CAP: usize = 12;

/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_VAR: &str = "ZENOLAB_DENSE_CAP";

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Dense qubit cap, read from `ZENOLAB_DENSE_CAP` when set.
pub fn dense_cap() -> usize {
    env::var(DENSE_CAP_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

fn check_dense_dim(dim: usize) -> Result<()> {
    let cap = dense_cap();
    // Equivalent qubit count, rounded up.
    let qubits = (usize::BITS - dim.saturating_sub(1).leading_zeros()) as usize;
    if qubits > cap {
        return Err(Error::DenseCap { qubits, cap });
    }
    Ok(())
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// One tensor factor of a Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    System(usize),
    Bath(usize),
}

impl Factor {
    pub fn dim(self) -> usize {
        match self {
            Factor::System(d) | Factor::Bath(d) => d,
        }
    }

    pub fn is_bath(self) -> bool {
        matches!(self, Factor::Bath(_))
    }
}

/// Index bookkeeping for subsets of tensor factors.
struct FactorIndex {
    /// Offsets of every digit combination of the selected factors, first factor most significant.
    offsets: Vec<usize>,
    /// Offsets of every digit combination of the remaining factors, same ordering.
    bases: Vec<usize>,
}

impl FactorIndex {
    fn new(dims: &[usize], selected: &[usize]) -> Self {
        let mut strides = vec![1usize; dims.len()];
        for f in (0..dims.len().saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * dims[f + 1];
        }
        let rest: Vec<usize> = (0..dims.len()).filter(|f| !selected.contains(f)).collect();
        FactorIndex {
            offsets: combos(dims, &strides, selected),
            bases: combos(dims, &strides, &rest),
        }
    }
}

fn combos(dims: &[usize], strides: &[usize], factors: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for &o in &out {
            for d in 0..dims[f] {
                next.push(o + d * strides[f]);
            }
        }
        out = next;
    }
    out
}

/// Replaces every column `v` of `m` by `(L ⊗ 1) v`, with `L` acting on the
/// factor digits enumerated by `idx.offsets`.
fn left_apply(m: &mut DMatrix<Complex64>, idx: &FactorIndex, left: &DMatrix<Complex64>) {
    let n = m.nrows();
    let sub = idx.offsets.len();
    let l: Vec<Complex64> = (0..sub * sub).map(|k| left[(k / sub, k % sub)]).collect();
    m.as_mut_slice().par_chunks_mut(n).for_each(|col| {
        let mut buf = vec![Complex64::new(0.0, 0.0); sub];
        for &b in &idx.bases {
            for (j, &o) in idx.offsets.iter().enumerate() {
                buf[j] = col[b + o];
            }
            for (i, &o) in idx.offsets.iter().enumerate() {
                let row = &l[i * sub..(i + 1) * sub];
                col[b + o] = row.iter().zip(&buf).map(|(a, v)| a * v).sum();
            }
        }
    });
}

/// A matrix with exactly one nonzero per column: `U e_j = phase_j e_{image_j}`.
struct Monomial {
    image: Vec<usize>,
    phase: Vec<Complex64>,
}

impl Monomial {
    fn of(u: &DMatrix<Complex64>) -> Option<Self> {
        let zero = Complex64::new(0.0, 0.0);
        let mut image = Vec::with_capacity(u.ncols());
        let mut phase = Vec::with_capacity(u.ncols());
        let mut hit = vec![false; u.nrows()];
        for col in u.column_iter() {
            let mut nonzero = col.iter().enumerate().filter(|(_, &x)| x != zero);
            let (row, &x) = nonzero.next()?;
            if nonzero.next().is_some() || hit[row] {
                return None;
            }
            hit[row] = true;
            image.push(row);
            phase.push(x);
        }
        Some(Monomial { image, phase })
    }

    /// For every full-space output index: (source index, phase applied to it).
    fn pullback(&self, idx: &FactorIndex, n: usize) -> Vec<(usize, Complex64)> {
        let mut out = vec![(0, Complex64::new(0.0, 0.0)); n];
        for &b in &idx.bases {
            for (j, &o) in idx.offsets.iter().enumerate() {
                out[b + idx.offsets[self.image[j]]] = (b + o, self.phase[j]);
            }
        }
        out
    }
}

/// `L A R†` for monomial `L`, `R`: a phased gather.
fn monomial_sandwich(a: &DMatrix<Complex64>, idx: &FactorIndex, l: &Monomial, r: &Monomial) -> DMatrix<Complex64> {
    let n = a.nrows();
    let rows = l.pullback(idx, n);
    let cols = r.pullback(idx, n);
    let input = a.as_slice();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    out.as_mut_slice()
        .par_chunks_mut(n)
        .zip(cols.par_iter())
        .for_each(|(col, &(src_col, phase_c))| {
            let src = &input[src_col * n..][..n];
            let pc = phase_c.conj();
            for (o, &(src_row, phase_r)) in col.iter_mut().zip(&rows) {
                *o = phase_r * src[src_row] * pc;
            }
        });
    out
}

/// `m (R ⊗ 1)†`, built column by column: each output column is a combination
/// of the input columns sharing its base index.
fn right_apply(m: &DMatrix<Complex64>, idx: &FactorIndex, right: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let sub = idx.offsets.len();
    let mut source = vec![(0usize, 0usize); n];
    for &b in &idx.bases {
        for (i, &o) in idx.offsets.iter().enumerate() {
            source[b + o] = (b, i);
        }
    }
    let input = m.as_slice();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    out.as_mut_slice()
        .par_chunks_mut(n)
        .zip(source.par_iter())
        .for_each(|(col, &(b, i))| {
            for j in 0..sub {
                let coeff = right[(i, j)].conj();
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = &input[(b + idx.offsets[j]) * n..][..n];
                for (o, x) in col.iter_mut().zip(src) {
                    *o += coeff * x;
                }
            }
        });
    out
}

/// A dense complex operator on a labelled tensor factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    factors: Vec<Factor>,
    matrix: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(factors: Vec<Factor>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim: usize = factors.iter().map(|f| f.dim()).product();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Operator { factors, matrix })
    }

    pub fn identity(factors: Vec<Factor>) -> Result<Self> {
        let dim: usize = factors.iter().map(|f| f.dim()).product();
        check_dense_dim(dim)?;
        Ok(Operator {
            factors,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn zeros(factors: Vec<Factor>) -> Result<Self> {
        let dim: usize = factors.iter().map(|f| f.dim()).product();
        check_dense_dim(dim)?;
        Ok(Operator {
            factors,
            matrix: DMatrix::zeros(dim, dim),
        })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Same factorization, new matrix.
    pub fn with_matrix(&self, matrix: DMatrix<Complex64>) -> Result<Self> {
        Operator::new(self.factors.clone(), matrix)
    }

    /// Relabels the factors while keeping the matrix.
    pub fn relabel(self, factors: Vec<Factor>) -> Result<Self> {
        Operator::new(factors, self.matrix)
    }

    fn check_same_shape(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            factors: self.factors.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Operator {
        Operator {
            factors: self.factors.clone(),
            matrix: &self.matrix * s,
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_same_shape(other)?;
        self.with_matrix(&self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_same_shape(other)?;
        self.with_matrix(&self.matrix - &other.matrix)
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        self.check_same_shape(other)?;
        self.with_matrix(&self.matrix * &other.matrix)
    }

    /// `-i[self, other]`, the Liouvillian action of `self` on `other`.
    pub fn liouvillian(&self, other: &Operator) -> Result<Operator> {
        self.check_same_shape(other)?;
        let comm = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        other.with_matrix(comm * Complex64::new(0.0, -1.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Hilbert-Schmidt inner product `Tr(self† other)`.
    pub fn hs_inner(&self, other: &Operator) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(())
    }

    /// Kronecker product with concatenated factor labels.
    pub fn tensor(&self, other: &Operator) -> Result<Operator> {
        check_dense_dim(self.dim() * other.dim())?;
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Ok(Operator {
            factors,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// `self ⊗ 1` on the trailing `factors`.
    pub fn extend_identity(&self, factors: &[Factor]) -> Result<Operator> {
        if factors.is_empty() {
            return Ok(self.clone());
        }
        self.tensor(&Operator::identity(factors.to_vec())?)
    }

    /// Traces out the listed factor indices.
    pub fn trace_out(&self, traced: &[usize]) -> Result<Operator> {
        let dims = self.dims();
        if let Some(&bad) = traced.iter().find(|&&f| f >= dims.len()) {
            return Err(Error::InvalidArgument(format!(
                "factor {bad} out of range for {} factors",
                dims.len()
            )));
        }
        let idx = FactorIndex::new(&dims, traced);
        let keep = idx.bases.len();
        let mut out = DMatrix::<Complex64>::zeros(keep, keep);
        for (i, &bi) in idx.bases.iter().enumerate() {
            for (j, &bj) in idx.bases.iter().enumerate() {
                out[(i, j)] = idx
                    .offsets
                    .iter()
                    .map(|&o| self.matrix[(bi + o, bj + o)])
                    .sum();
            }
        }
        let factors = self
            .factors
            .iter()
            .enumerate()
            .filter(|(f, _)| !traced.contains(f))
            .map(|(_, &f)| f)
            .collect();
        Operator::new(factors, out)
    }

    /// Traces out the trailing bath factor.
    pub fn partial_trace_bath(&self) -> Result<Operator> {
        let baths: Vec<usize> = (0..self.factors.len())
            .filter(|&f| self.factors[f].is_bath())
            .collect();
        match baths.as_slice() {
            [b] if *b + 1 == self.factors.len() => self.trace_out(&[*b]),
            _ => Err(Error::MissingBath),
        }
    }

    /// `U A U†` with `u` acting on the listed factors (first listed is most significant).
    pub fn conjugate_local(&self, targets: &[usize], u: &DMatrix<Complex64>) -> Result<Operator> {
        self.sandwich_local(targets, u, u)
    }

    /// `L A R†` with `left` and `right` acting on the listed factors.
    pub fn sandwich_local(
        &self,
        targets: &[usize],
        left: &DMatrix<Complex64>,
        right: &DMatrix<Complex64>,
    ) -> Result<Operator> {
        let dims = self.dims();
        if let Some(&bad) = targets.iter().find(|&&f| f >= dims.len()) {
            return Err(Error::InvalidArgument(format!(
                "factor {bad} out of range for {} factors",
                dims.len()
            )));
        }
        let sub: usize = targets.iter().map(|&f| dims[f]).product();
        for m in [left, right] {
            if m.nrows() != sub || m.ncols() != sub {
                return Err(Error::DimensionMismatch {
                    expected: sub,
                    found: m.nrows(),
                });
            }
        }
        let idx = FactorIndex::new(&dims, targets);
        if let (Some(l), Some(r)) = (Monomial::of(left), Monomial::of(right)) {
            return self.with_matrix(monomial_sandwich(&self.matrix, &idx, &l, &r));
        }
        let mut work = self.matrix.clone();
        left_apply(&mut work, &idx, left);
        self.with_matrix(right_apply(&work, &idx, right))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.matrix
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.check_hermitian()?;
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().cloned().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    factors: Vec<Factor>,
    /// Row-major `[re, im]` pairs.
    entries: Vec<[f64; 2]>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.matrix[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorRepr {
            factors: self.factors.clone(),
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(deserializer)?;
        let dim: usize = repr.factors.iter().map(|f| f.dim()).product();
        if repr.entries.len() != dim * dim {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries, found {}",
                dim * dim,
                repr.entries.len()
            )));
        }
        let matrix = DMatrix::from_row_iterator(
            dim,
            dim,
            repr.entries.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        Operator::new(repr.factors, matrix).map_err(serde::de::Error::custom)
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        validate_state(&op)?;
        Ok(DensityMatrix(op))
    }

    /// Wraps without checks outside debug builds.
    pub(crate) fn from_channel_output(op: Operator) -> Result<Self> {
        if cfg!(debug_assertions) {
            validate_state(&op)?;
        }
        Ok(DensityMatrix(op))
    }

    /// `|ψ⟩⟨ψ|` after normalising `psi`.
    pub fn pure(factors: Vec<Factor>, psi: &DVector<Complex64>) -> Result<Self> {
        let dim: usize = factors.iter().map(|f| f.dim()).product();
        if psi.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: psi.len(),
            });
        }
        check_dense_dim(dim)?;
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::ZeroOperator);
        }
        let v = psi / c(norm);
        DensityMatrix::new(Operator::new(factors, &v * v.adjoint())?)
    }

    /// Computational basis state `|index⟩⟨index|`.
    pub fn basis(factors: Vec<Factor>, index: usize) -> Result<Self> {
        let dim: usize = factors.iter().map(|f| f.dim()).product();
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut psi = DVector::zeros(dim);
        psi[index] = c(1.0);
        DensityMatrix::pure(factors, &psi)
    }

    pub fn maximally_mixed(factors: Vec<Factor>) -> Result<Self> {
        let id = Operator::identity(factors)?;
        let d = id.dim() as f64;
        Ok(DensityMatrix(id.scale(c(1.0 / d))))
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        self.0.matrix()
    }

    pub fn factors(&self) -> &[Factor] {
        self.0.factors()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix(self.0.tensor(&other.0)?))
    }

    pub fn partial_trace_bath(&self) -> Result<DensityMatrix> {
        Ok(DensityMatrix(self.0.partial_trace_bath()?))
    }

    pub fn trace_out(&self, traced: &[usize]) -> Result<DensityMatrix> {
        Ok(DensityMatrix(self.0.trace_out(traced)?))
    }

    pub fn purity(&self) -> f64 {
        self.0.hs_inner(&self.0).map(|z| z.re).unwrap_or(f64::NAN)
    }

    /// `⟨A⟩ = Tr(ρ A)`.
    pub fn expectation(&self, a: &Operator) -> Result<Complex64> {
        Ok(self.0.mul(a)?.trace())
    }

    /// Unitary evolution `e^{-iHt} ρ e^{iHt}`.
    pub fn evolve(&self, h: &Operator, t: f64) -> Result<DensityMatrix> {
        Propagator::new(h)?.evolve(self, t)
    }
}

fn validate_state(op: &Operator) -> Result<()> {
    let defect = op.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::InvalidState(format!("Hermiticity defect {defect:.3e}")));
    }
    let tr = op.trace();
    if (tr - c(1.0)).norm() > TRACE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let min = op
        .matrix()
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::InvalidState(format!("minimum eigenvalue {min:.3e}")));
    }
    Ok(())
}

/// Cached eigendecomposition of a Hermitian generator for exact evolution.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &Operator) -> Result<Self> {
        h.check_hermitian()?;
        let eig = h.matrix().clone().symmetric_eigen();
        Ok(Propagator {
            eigenvalues: eig.eigenvalues.iter().cloned().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    /// `e^{-iHt}`.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let mut scaled = self.eigenvectors.clone();
        for (k, &w) in self.eigenvalues.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -w * t);
            for x in scaled.column_mut(k).iter_mut() {
                *x *= phase;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn evolve(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        let u = self.unitary(t);
        if u.nrows() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.nrows(),
                found: rho.dim(),
            });
        }
        let out = rho.operator().with_matrix(&u * rho.matrix() * u.adjoint())?;
        DensityMatrix::from_channel_output(out)
    }
}

/// `e^{-iHt} ρ e^{iHt}` via exact eigendecomposition of `h`.
pub fn evolve_unitary(rho: &DensityMatrix, h: &Operator, t: f64) -> Result<DensityMatrix> {
    rho.evolve(h, t)
}

/// `½‖ρ₁ − ρ₂‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let diff = a.operator().sub(b.operator())?;
    let ev = diff.matrix().clone().symmetric_eigenvalues();
    Ok(0.5 * ev.iter().map(|x| x.abs()).sum::<f64>())
}

/// Selects a detection-code codeword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogicalState {
    /// An even-weight physical bit string `x`; the codeword is `(|x⟩ + |x̄⟩)/√2`.
    Bits(String),
    /// Logical computational basis label of length `n - 2`.
    Logical(String),
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
        })
        .collect()
}

impl LogicalState {
    /// Physical bit string `x` selecting the codeword.
    pub fn physical_bits(&self, n: usize) -> Result<Vec<bool>> {
        match self {
            LogicalState::Bits(s) => {
                let bits = parse_bits(s)?;
                if bits.len() != n {
                    return Err(Error::InvalidArgument(format!(
                        "bit string of length {} for {n} qubits",
                        bits.len()
                    )));
                }
                if bits.iter().filter(|&&b| b).count() % 2 == 1 {
                    return Err(Error::InvalidArgument(format!("bit string {s} has odd weight")));
                }
                Ok(bits)
            }
            LogicalState::Logical(s) => {
                let logical = parse_bits(s)?;
                if logical.len() + 2 != n {
                    return Err(Error::InvalidArgument(format!(
                        "logical label of length {} for {n} physical qubits",
                        logical.len()
                    )));
                }
                // Z̃_j = Z_{j+1} Z_n reads l_j from x_{j+1} with x_n = 0; x_1 fixes the parity.
                let mut bits = vec![false; n];
                bits[1..n - 1].copy_from_slice(&logical);
                bits[0] = logical.iter().filter(|&&b| b).count() % 2 == 1;
                Ok(bits)
            }
        }
    }
}

/// Pure codeword `(|x⟩ + |x̄⟩)/√2` of the `[[n, n-2, 2]]` detection code.
pub fn encode_codeword(code: &StabilizerCode, state: &LogicalState) -> Result<DensityMatrix> {
    if !code.is_detection_code() {
        return Err(Error::InvalidCode(
            "codewords are constructed for the [[n, n-2, 2]] detection code".into(),
        ));
    }
    let n = code.n();
    let bits = state.physical_bits(n)?;
    let dim = 1usize << n;
    check_dense_dim(dim)?;
    let index = bits
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let complement = !index & (dim - 1);
    let mut psi = DVector::zeros(dim);
    psi[index] = c(std::f64::consts::FRAC_1_SQRT_2);
    psi[complement] = c(std::f64::consts::FRAC_1_SQRT_2);
    DensityMatrix::pure(vec![Factor::System(2); n], &psi)
}

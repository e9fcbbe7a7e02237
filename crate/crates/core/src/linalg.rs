//! Dense complex linear algebra with validated quantum types.
//!
//! Everything here wraps `nalgebra` dense storage behind newtypes whose
//! constructors enforce the physical invariants (finiteness, hermiticity,
//! unit norm, unit trace, positivity). Code downstream of a constructor may
//! assume the invariant without rechecking.
//!
//! Matrix functions are computed exclusively through Hermitian
//! eigendecomposition. No Padé/scaling-and-squaring expm and no Schur-based
//! sqrtm: every operator we exponentiate or take roots of is Hermitian by
//! construction, and the eigenbasis route keeps results exactly normal.
//!
//! Composite Hilbert spaces are ordered system ⊗ apparatus everywhere: the
//! row index of a `dim_s * dim_a` matrix decomposes as `r = s * dim_a + a`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex<f64>;

/// Shorthand constructor for a complex scalar.
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn find_non_finite(m: &DMatrix<C64>) -> Option<(usize, usize)> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Dense complex matrix with all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    mat: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if let Some((row, col)) = find_non_finite(&mat) {
            return Err(Error::NonFinite { row, col });
        }
        Ok(Self { mat })
    }

    /// Builds from a row-major slice of entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "row-major entry slice",
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            mat: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// Internal constructor for results of arithmetic on already validated
    /// matrices, which cannot introduce non-finite entries in this crate's
    /// bounded-norm usage.
    pub(crate) fn trusted(mat: DMatrix<C64>) -> Self {
        Self { mat }
    }

    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.mat.nrows() == self.mat.ncols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            mat: self.mat.map(|z| z * factor),
        }
    }

    /// Largest entry magnitude. Zero for empty matrices.
    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.mat.shape(), other.mat.shape(), "shape mismatch");
        (&self.mat - &other.mat)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry deviation from the matrix's own adjoint.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.mat.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::trusted(&self.mat + &rhs.mat)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::trusted(&self.mat - &rhs.mat)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::trusted(&self.mat * &rhs.mat)
    }
}

/// Square complex matrix equal to its adjoint within [`tol::HERMITICITY`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: "operators must act on at least one dimension".into(),
            });
        }
        let defect = mat.hermiticity_defect();
        if defect > tol::HERMITICITY {
            return Err(Error::NotHermitian {
                max_asymmetry: defect,
            });
        }
        Ok(Self { mat })
    }

    /// Internal constructor for operators Hermitian by construction
    /// (outer products, Kronecker products of Hermitian factors, spectral
    /// reconstructions with real coefficients).
    pub(crate) fn trusted(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.hermiticity_defect() <= tol::HERMITICITY);
        Self { mat }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            mat: ComplexMatrix::trusted(DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    c64(diag[i], 0.0)
                } else {
                    C64::ZERO
                }
            })),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Scaling by a real factor preserves hermiticity exactly.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.scaled(c64(factor, 0.0)),
        }
    }

    /// Kronecker product of Hermitian factors is Hermitian entry by entry.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: kron(&self.mat, &other.mat),
        }
    }

    /// `<a|H|b>`.
    pub fn matrix_element(&self, a: &StateVector, b: &StateVector) -> C64 {
        let hb = self.mat.as_dmatrix() * b.amplitudes();
        a.amplitudes().dotc(&hb)
    }

    /// `tr(rho H)`, real for Hermitian arguments.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        let h = self.mat.as_dmatrix();
        let r = rho.matrix().as_dmatrix();
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (r[(i, j)] * h[(j, i)]).re;
            }
        }
        acc
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// Complex vector with Euclidean norm 1 within [`tol::UNIT_NORM`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    vec: DVector<C64>,
}

impl StateVector {
    pub fn new(vec: DVector<C64>) -> Result<Self> {
        for (i, z) in vec.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
        }
        let norm = vec.norm();
        if (norm - 1.0).abs() > tol::UNIT_NORM {
            return Err(Error::NotUnitNorm {
                what: "state vector",
                norm,
                tolerance: tol::UNIT_NORM,
            });
        }
        Ok(Self { vec })
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(vec: DVector<C64>) -> Result<Self> {
        let norm = vec.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnitNorm {
                what: "vector to normalize",
                norm,
                tolerance: tol::UNIT_NORM,
            });
        }
        Ok(Self {
            vec: vec.map(|z| z / norm),
        })
    }

    /// Computational basis vector `|index>` in `dim` dimensions.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut vec = DVector::zeros(dim);
        vec[index] = C64::ONE;
        Self { vec }
    }

    pub(crate) fn trusted(vec: DVector<C64>) -> Self {
        debug_assert!((vec.norm() - 1.0).abs() <= 1e-9);
        Self { vec }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.vec
    }

    pub fn get(&self, index: usize) -> C64 {
        self.vec[index]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.vec.dotc(&other.vec)
    }

    /// Tensor product; the norm of the result is the product of norms, so
    /// no revalidation is needed.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            vec: self.vec.kronecker(&other.vec),
        }
    }

    /// Rank-one projector `|self><self|`, Hermitian by construction.
    pub fn projector(&self) -> HermitianOperator {
        let n = self.vec.len();
        let mat = DMatrix::from_fn(n, n, |i, j| self.vec[i] * self.vec[j].conj());
        HermitianOperator::trusted(ComplexMatrix::trusted(mat))
    }
}

/// Hermitian operator with unit trace and spectrum bounded below by
/// `-`[`tol::STATE_PSD`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    /// Full validation: trace within [`tol::STATE_TRACE`] of 1 and minimum
    /// eigenvalue at least `-`[`tol::STATE_PSD`]. Costs one eigenvalue-only
    /// solve; use [`DensityMatrix::from_pure`] where purity is structural.
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.matrix().trace().re;
        if (trace - 1.0).abs() > tol::STATE_TRACE {
            return Err(Error::InvalidTrace {
                trace,
                tolerance: tol::STATE_TRACE,
            });
        }
        let eigenvalues = op.matrix().as_dmatrix().clone().symmetric_eigenvalues();
        let min_eigenvalue = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -tol::STATE_PSD {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { op })
    }

    /// `|psi><psi|`. The projector of a unit vector has trace `|psi|^2` and
    /// eigenvalues `{|psi|^2, 0}`, so both state invariants hold structurally
    /// and the eigenvalue scan is skipped.
    pub fn from_pure(psi: &StateVector) -> Self {
        Self {
            op: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            op: HermitianOperator::identity(dim).scaled(1.0 / dim as f64),
        }
    }

    /// Internal constructor for operators whose positivity is inherited
    /// mathematically (partial traces and convex mixtures of valid states).
    /// Only the cheap trace check is repeated.
    pub(crate) fn trusted(op: HermitianOperator) -> Self {
        debug_assert!((op.matrix().trace().re - 1.0).abs() <= tol::STATE_TRACE);
        Self { op }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }
}

/// Sorted spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`; unitary as a whole.
    pub eigenvectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = self.eigenvectors.as_dmatrix();
        let n = self.eigenvalues.len();
        let diag = DVector::from_iterator(n, self.eigenvalues.iter().map(|&l| f(l)));
        ComplexMatrix::trusted(v * DMatrix::from_diagonal(&diag) * v.adjoint())
    }

    /// Applies `V diag(f(lambda)) V^dagger` to a vector without forming the
    /// full matrix.
    pub fn apply_with(&self, f: impl Fn(f64) -> C64, vec: &DVector<C64>) -> DVector<C64> {
        let v = self.eigenvectors.as_dmatrix();
        let mut coeffs = v.adjoint() * vec;
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            coeffs[k] *= f(l);
        }
        v * coeffs
    }
}

/// Spectral decomposition with eigenvalues sorted ascending and eigenvector
/// columns permuted to match. The underlying solver returns the spectrum in
/// deflation order, not sorted.
pub fn hermitian_eig(h: &HermitianOperator) -> Result<Eigensystem> {
    let dim = h.dim();
    let eig = h
        .matrix()
        .as_dmatrix()
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::EigenFailure {
            dim,
            max_abs_entry: h.matrix().max_abs_entry(),
        })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigensystem {
        eigenvalues,
        eigenvectors: ComplexMatrix::trusted(eigenvectors),
    })
}

/// `exp(i * scale * H)` for Hermitian `H`, via the eigenbasis. Unitarity is
/// structural: the result is `V diag(phase) V^dagger` with unimodular phases.
pub fn unitary_exp(h: &HermitianOperator, scale: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    Ok(eig.reconstruct_with(|l| C64::from_polar(1.0, scale * l)))
}

/// Positive square root of a density matrix. Eigenvalues in
/// `[-`[`tol::STATE_PSD`]`, 0)` are rounding noise by the state invariant and
/// are clipped to zero before the root.
pub fn psd_sqrt(rho: &DensityMatrix) -> Result<HermitianOperator> {
    let floor = rho.dim() as f64 * tol::SPECTRAL_FLOOR;
    let eig = hermitian_eig(rho.operator())?;
    let mat = eig.reconstruct_with(|l| c64(if l < floor { 0.0 } else { l.sqrt() }, 0.0));
    Ok(HermitianOperator::trusted(mat))
}

/// Largest singular value, computed as the root of the top eigenvalue of
/// `A^dagger A`. For Hermitian input this equals the largest |eigenvalue|.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.as_dmatrix().adjoint() * m.as_dmatrix();
    let top = gram
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(0.0, f64::max);
    top.max(0.0).sqrt()
}

/// Sum of singular values of a Hermitian operator: the sum of |eigenvalue|.
pub fn trace_norm(h: &HermitianOperator) -> f64 {
    h.matrix()
        .as_dmatrix()
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .map(|l| l.abs())
        .sum()
}

/// Kronecker product. Row index of the result decomposes as
/// `r = i_left * nrows(right) + i_right`, matching the system ⊗ apparatus
/// index convention when `left` acts on the system.
pub fn kron(left: &ComplexMatrix, right: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::trusted(left.as_dmatrix().kronecker(right.as_dmatrix()))
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            what: "commutator operand",
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    let ab = a.as_dmatrix() * b.as_dmatrix();
    let ba = b.as_dmatrix() * a.as_dmatrix();
    Ok(ComplexMatrix::trusted(ab - ba))
}

/// Traces out the system factor of a state on system ⊗ apparatus:
/// `(rho_A)_{ab} = sum_s rho_{(s,a),(s,b)}` with composite index
/// `s * dim_a + a`. Hermiticity of the result is exact (conjugation commutes
/// with the sum) and positivity is inherited, so only trace preservation is
/// rechecked, against [`tol::TRACE_PRESERVATION`].
pub fn partial_trace_system(
    rho: &DensityMatrix,
    dim_s: usize,
    dim_a: usize,
) -> Result<DensityMatrix> {
    if rho.dim() != dim_s * dim_a {
        return Err(Error::DimensionMismatch {
            what: "composite state",
            expected: dim_s * dim_a,
            actual: rho.dim(),
        });
    }
    if dim_s == 0 || dim_a == 0 {
        return Err(Error::InvalidParameter {
            name: "dimension",
            reason: "factor dimensions must be positive".into(),
        });
    }
    let r = rho.matrix().as_dmatrix();
    let reduced = DMatrix::from_fn(dim_a, dim_a, |a, b| {
        (0..dim_s)
            .map(|s| r[(s * dim_a + a, s * dim_a + b)])
            .sum::<C64>()
    });
    let diff: C64 = reduced.trace() - rho.matrix().trace();
    let trace_gap = diff.norm();
    if trace_gap > tol::TRACE_PRESERVATION {
        return Err(Error::InvalidTrace {
            trace: reduced.trace().re,
            tolerance: tol::TRACE_PRESERVATION,
        });
    }
    Ok(DensityMatrix::trusted(HermitianOperator::trusted(
        ComplexMatrix::trusted(reduced),
    )))
}

/// Uhlmann fidelity `F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho))`,
/// the unsquared convention: `F` of two pure states is `|<psi|phi>|`.
/// Clamped to [0, 1] to absorb eigensolver rounding.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            what: "fidelity operand",
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let root = psd_sqrt(rho)?;
    let inner = root.matrix().as_dmatrix() * sigma.matrix().as_dmatrix() * root.matrix().as_dmatrix();
    // Eigenvalues of the product below the noise floor are pure rounding;
    // their square roots would otherwise dominate the sum in high dimension.
    let floor = rho.dim() as f64 * tol::SPECTRAL_FLOOR;
    let value: f64 = inner
        .symmetric_eigenvalues()
        .iter()
        .map(|l| if *l < floor { 0.0 } else { l.sqrt() })
        .sum();
    Ok(value.clamp(0.0, 1.0))
}

pub fn pauli_x() -> HermitianOperator {
    HermitianOperator::trusted(ComplexMatrix::trusted(DMatrix::from_row_slice(
        2,
        2,
        &[C64::ZERO, C64::ONE, C64::ONE, C64::ZERO],
    )))
}

pub fn pauli_y() -> HermitianOperator {
    HermitianOperator::trusted(ComplexMatrix::trusted(DMatrix::from_row_slice(
        2,
        2,
        &[C64::ZERO, c64(0.0, -1.0), c64(0.0, 1.0), C64::ZERO],
    )))
}

pub fn pauli_z() -> HermitianOperator {
    HermitianOperator::from_real_diagonal(&[1.0, -1.0])
}

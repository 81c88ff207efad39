//! Complex linear algebra for small qubit registers: states, density
//! operators, SU(2) group elements and the distance measures used to check
//! the communication protocols.
//!
//! Composite indices follow the usual Kronecker convention with qubit 1 as
//! the most significant (leftmost) factor, so basis state `|b_1 b_2 … b_n⟩`
//! has index `Σ b_k 2^(n-k)`.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{out_of_range, Error, Result};
use crate::rng::RandomSource;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest register handled by dense routines.
pub const MAX_QUBITS: usize = 12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

const NORM_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli X.
pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Pauli Y.
pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

/// Pauli Z.
pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub(crate) fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entry magnitude of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `‖U†U − I‖_max`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// Kronecker product, composite index `i = i_a · rows(b) + i_b`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    factors
        .into_iter()
        .fold(CMatrix::from_element(1, 1, ONE), |acc, f| tensor(&acc, f))
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are returned in
/// ascending order together with the matching eigenvector columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |i, k| {
        eig.eigenvectors[(i, order[k])]
    });
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Number of eigenvalues of a Hermitian matrix above `tol`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    hermitian_eigenvalues(m).iter().filter(|&&l| l > tol).count()
}

/// A normalised pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: CVector,
}

impl StateVector {
    /// Wraps `amps`, which must already have unit norm.
    pub fn new(amps: CVector) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        if !amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        Self::new(amps.unscale(norm))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(out_of_range("basis index", index, format!("0..{dim}")));
        }
        let mut amps = CVector::zeros(dim);
        amps[index] = ONE;
        Ok(Self { amps })
    }

    /// Computational basis state from a bit string such as `"0110"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(out_of_range("bit string length", n, format!("1..={MAX_QUBITS}")));
        }
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidState(format!("not a bit string: {bits:?}")))?;
        Self::basis(1 << n, index)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn apply(&self, u: &CMatrix) -> Result<StateVector> {
        check_dim(self.dim(), u.ncols())?;
        check_dim(u.ncols(), u.nrows())?;
        StateVector::new(u * &self.amps)
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        StateVector {
            amps: self.amps.kronecker(&other.amps),
        }
    }

    pub fn projector(&self) -> CMatrix {
        &self.amps * self.amps.adjoint()
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            matrix: self.projector(),
        }
    }
}

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity (eigenvalues ≥ −1e-10).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self::checked_structure(matrix)?;
        let min = hermitian_eigenvalues(&rho.matrix)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -NORM_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    /// Hermiticity and trace checks only; used for channel outputs whose
    /// positivity follows from construction.
    pub(crate) fn checked_structure(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidState(format!(
                "density operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !all_finite(&matrix) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = max_abs_diff(&matrix, &matrix.adjoint());
        if herm > NORM_TOL {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_raw(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn pure(state: &StateVector) -> Self {
        state.to_density()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    /// Normalised projector `P / tr P`.
    pub fn from_projector(p: &CMatrix) -> Result<Self> {
        let tr = p.trace().re;
        if tr <= 0.0 {
            return Err(Error::InvalidOperator("projector has zero trace".into()));
        }
        Self::checked_structure(p.unscale(tr))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityOperator> {
        check_dim(self.dim(), u.ncols())?;
        check_dim(u.ncols(), u.nrows())?;
        Ok(Self {
            matrix: u * &self.matrix * u.adjoint(),
        })
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        check_dim(self.dim(), psi.dim())?;
        Ok(psi.amplitudes().dotc(&(&self.matrix * psi.amplitudes())).re)
    }

    /// `tr(ρ O)`.
    pub fn expectation(&self, op: &CMatrix) -> Result<Complex64> {
        check_dim(self.dim(), op.nrows())?;
        check_dim(op.nrows(), op.ncols())?;
        Ok((&self.matrix * op).trace())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Rank-one test: purity equals one.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// An element of SU(2) in the defining representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    m: Matrix2<Complex64>,
}

impl GroupElement {
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let g = Self { m };
        let unitary = (m.adjoint() * m - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let det = (m.determinant() - ONE).norm();
        if unitary > NORM_TOL || det > NORM_TOL {
            return Err(Error::InvalidOperator(format!(
                "not in SU(2): unitarity residual {unitary:e}, |det - 1| = {det:e}"
            )));
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    /// Unit quaternion `w + x i + y j + z k` as
    /// `[[w + iz, y + ix], [−y + ix, w − iz]]`. The input is normalised.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidOperator("zero quaternion".into()));
        }
        let (w, x, y, z) = (w / norm, x / norm, y / norm, z / norm);
        Ok(Self {
            m: Matrix2::new(c(w, z), c(y, x), c(-y, x), c(w, -z)),
        })
    }

    /// `exp(−i θ n·σ / 2)` for a unit axis `n`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let len = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(len > 0.0) {
            return Err(Error::InvalidOperator("zero rotation axis".into()));
        }
        let (s, cos) = (angle / 2.0).sin_cos();
        Self::from_quaternion(
            cos,
            -s * axis[0] / len,
            -s * axis[1] / len,
            -s * axis[2] / len,
        )
    }

    pub fn matrix2(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| self.m[(i, j)])
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn compose(&self, other: &GroupElement) -> Self {
        Self { m: self.m * other.m }
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.m.adjoint() * self.m - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex64 {
        self.m.determinant()
    }
}

/// Haar-distributed SU(2) element from a uniformly random unit quaternion.
pub fn haar_random_su2(rng: &mut RandomSource) -> GroupElement {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        if let Ok(g) = GroupElement::from_quaternion(q[0], q[1], q[2], q[3]) {
            return g;
        }
    }
}

/// `g ⊗ g ⊗ … ⊗ g` on `n` qubits.
pub fn collective_rotation(g: &GroupElement, n: usize) -> Result<CMatrix> {
    if n == 0 || n > MAX_QUBITS {
        return Err(out_of_range("qubit count", n, format!("1..={MAX_QUBITS}")));
    }
    let single = g.matrix();
    let mut u = single.clone();
    for _ in 1..n {
        u = tensor(&u, &single);
    }
    Ok(u)
}

/// Applies a 2×2 operator to qubit `qubit` (0-based, most significant first)
/// of an `n`-qubit amplitude vector, in place.
pub fn apply_single_qubit(op: &Matrix2<Complex64>, qubit: usize, n: usize, amps: &mut CVector) {
    let stride = 1usize << (n - 1 - qubit);
    for base in 0..amps.len() {
        if base & stride != 0 {
            continue;
        }
        let a0 = amps[base];
        let a1 = amps[base | stride];
        amps[base] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
        amps[base | stride] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
    }
}

/// Collective rotation applied to a state without forming the `2^n` matrix.
pub fn rotate_state(g: &GroupElement, state: &StateVector) -> Result<StateVector> {
    let dim = state.dim();
    if !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not 2^n")));
    }
    let n = dim.trailing_zeros() as usize;
    let mut amps = state.amplitudes().clone();
    for q in 0..n {
        apply_single_qubit(g.matrix2(), q, n, &mut amps);
    }
    StateVector::new(amps)
}

/// Reduced state on the factors listed in `keep` (0-based, any order; the
/// output keeps them in ascending order).
pub fn partial_trace(
    rho: &DensityOperator,
    keep: &[usize],
    dims: &[usize],
) -> Result<DensityOperator> {
    let total: usize = dims.iter().product();
    check_dim(total, rho.dim())?;
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(out_of_range("subsystem index", bad, format!("0..{}", dims.len())));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        kept[k] = true;
    }
    let kept_dim: usize = dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();

    // Mixed-radix decomposition, most significant factor first.
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0; dims.len()];
        for (f, &d) in dims.iter().enumerate().rev() {
            out[f] = idx % d;
            idx /= d;
        }
        out
    };
    let split = |idx: usize| -> (usize, usize) {
        let ds = digits(idx);
        let (mut k, mut t) = (0, 0);
        for (f, &d) in dims.iter().enumerate() {
            if kept[f] {
                k = k * d + ds[f];
            } else {
                t = t * d + ds[f];
            }
        }
        (k, t)
    };
    let labels: Vec<(usize, usize)> = (0..total).map(split).collect();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    for (i, &(ki, ti)) in labels.iter().enumerate() {
        for (j, &(kj, tj)) in labels.iter().enumerate() {
            if ti == tj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(DensityOperator::from_raw(out))
}

/// Positive square root of a positive semidefinite Hermitian matrix.
fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let roots = CVector::from_iterator(vals.len(), vals.iter().map(|&l| r(l.max(0.0).sqrt())));
    let scaled = CMatrix::from_fn(vecs.nrows(), vecs.ncols(), |i, k| vecs[(i, k)] * roots[k]);
    scaled * vecs.adjoint()
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    // Pure shortcut: F = ⟨ψ|ρ|ψ⟩.
    for (pure, other) in [(sigma, rho), (rho, sigma)] {
        if pure.is_pure(1e-12) {
            let (vals, vecs) = hermitian_eigen(pure.matrix());
            let top = vals.len() - 1;
            let psi = vecs.column(top).into_owned();
            let f = psi.dotc(&(other.matrix() * &psi)).re;
            return Ok(f.clamp(0.0, 1.0));
        }
    }
    let s = psd_sqrt(rho.matrix());
    let inner = &s * sigma.matrix() * &s;
    let root_sum: f64 = hermitian_eigenvalues(&inner)
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// Trace distance `½ Σ |λ(ρ − σ)|`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let diff = rho.matrix() - sigma.matrix();
    let d: f64 = hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>() / 2.0;
    Ok(d.clamp(0.0, 1.0))
}

/// Haar-random pure state of dimension `dim`.
pub fn random_pure_state(dim: usize, rng: &mut RandomSource) -> StateVector {
    loop {
        let amps = CVector::from_fn(dim, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        if let Ok(s) = StateVector::normalized(amps) {
            return s;
        }
    }
}

/// Random full-rank mixed state `G G† / tr(G G†)` with Ginibre `G`.
pub fn random_density(dim: usize, rng: &mut RandomSource) -> DensityOperator {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::from_raw(m.unscale(tr))
}

//! Gaussian-state algebra in shot-noise units.
//!
//! Covariance matrices use the interleaved quadrature ordering
//! `(q1, p1, q2, p2, ...)`, so mode `k` occupies rows and columns `2k` and `2k + 1`.
//! All entropies are in bits.

use nalgebra::{Cholesky, DMatrix, DVector, Matrix2, SymmetricEigen, SVD};

use crate::error::{ensure, Error, Result};

/// Maximum tolerated absolute asymmetry of a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Symplectic eigenvalues within this distance below 1 are clipped to 1.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Relative tolerance when pairing the `±iν` eigenvalues of `Ω V`.
const PAIRING_TOL: f64 = 1e-6;
/// Smallest measured-quadrature variance accepted by homodyne conditioning.
const SINGULAR_TOL: f64 = 1e-12;

/// `diag(1, 1)`.
pub fn identity2() -> Matrix2<f64> {
    Matrix2::identity()
}

/// `diag(1, -1)`.
pub fn pauli_z() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// Quadrature selected by a homodyne detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    Q,
    P,
}

impl Quadrature {
    fn offset(self) -> usize {
        match self {
            Quadrature::Q => 0,
            Quadrature::P => 1,
        }
    }
}

/// Symplectic spectrum of an N-mode covariance matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum(Vec<f64>);

impl SymplecticSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> f64 {
        self.0.iter().product()
    }

    /// Sum of `h(ν)` over the spectrum.
    pub fn entropy(&self) -> f64 {
        self.0.iter().map(|&nu| h_clipped(nu)).sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for SymplecticSpectrum {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A validated covariance matrix of an N-mode Gaussian state.
///
/// Construction checks shape, symmetry and the uncertainty principle
/// (every symplectic eigenvalue at least 1); the spectrum computed during
/// validation is kept alongside the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: DMatrix<f64>,
    spectrum: SymplecticSpectrum,
}

impl CovarianceMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let spectrum = symplectic_eigenvalues(&matrix)?;
        Ok(Self { matrix, spectrum })
    }

    /// Assembles a matrix from a square grid of 2×2 blocks, row by row.
    pub fn from_blocks(grid: &[Vec<Matrix2<f64>>]) -> Result<Self> {
        let n = grid.len();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (i, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "block row {i} has {} blocks, expected {n}",
                    row.len()
                )));
            }
            for (j, block) in row.iter().enumerate() {
                m.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(block);
            }
        }
        Self::new(m)
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SymplecticSpectrum {
        &self.spectrum
    }

    pub fn entropy(&self) -> f64 {
        self.spectrum.entropy()
    }

    /// The 2×2 block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    /// Reduced state of the listed modes, in the listed order.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        check_mode_list(modes, self.modes())?;
        let idx = quadrature_indices(modes);
        Self::new(self.matrix.select_rows(&idx).select_columns(&idx))
    }
}

/// Entropy function of a single thermal mode with symplectic eigenvalue `x`, in bits.
///
/// `h(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2)`.
pub fn h_function(x: f64) -> Result<f64> {
    ensure(x >= 1.0 - PHYSICALITY_TOL, "x", x, "x >= 1")?;
    Ok(h_clipped(x))
}

pub(crate) fn h_clipped(x: f64) -> f64 {
    let a = 0.5 * (x + 1.0);
    let b = 0.5 * (x - 1.0);
    if x - 1.0 < 1e-12 {
        return a.max(1.0) * a.max(1.0).log2();
    }
    // a log a - b log b = log a + b log(1 + 1/b), which avoids cancellation for large x
    a.log2() + b * (1.0 / b).ln_1p() / std::f64::consts::LN_2
}

/// EPR (two-mode squeezed vacuum) state with local variance `w`.
pub fn epr_cm(w: f64) -> Result<CovarianceMatrix> {
    ensure(w >= 1.0 && w.is_finite(), "W", w, "W >= 1")?;
    let c = (w * w - 1.0).sqrt();
    let diag = identity2() * w;
    let off = pauli_z() * c;
    CovarianceMatrix::from_blocks(&[vec![diag, off], vec![off, diag]])
}

/// Single-mode thermal state `v·I`.
pub fn thermal_cm(v: f64) -> Result<CovarianceMatrix> {
    ensure(v >= 1.0 && v.is_finite(), "V", v, "V >= 1")?;
    CovarianceMatrix::new(DMatrix::identity(2, 2) * v)
}

/// The symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]` on `n` modes.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic eigenvalues of a real symmetric `2N × 2N` matrix.
///
/// Computes the moduli of the eigenvalues of `Ω V`, which come in `±iν` pairs,
/// and collapses each pair to one value.
pub fn symplectic_eigenvalues(matrix: &DMatrix<f64>) -> Result<SymplecticSpectrum> {
    let dim = matrix.nrows();
    if dim == 0 || dim != matrix.ncols() || !dim.is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "expected a non-empty square matrix of even dimension, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::Shape("matrix has non-finite entries".into()));
    }
    let asym = (matrix - matrix.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }

    let n = dim / 2;
    // With V = L Lᵀ, Ω·V is similar to the antisymmetric Lᵀ Ω L, whose singular values are
    // the symplectic eigenvalues, each appearing twice.
    let chol = Cholesky::new(matrix.clone()).ok_or_else(|| {
        let min = SymmetricEigen::new(matrix.clone()).eigenvalues.min();
        Error::Unphysical(min)
    })?;
    let l = chol.l();
    let k = l.transpose() * symplectic_form(n) * &l;
    let svd = SVD::try_new(k, false, false, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numeric("singular value decomposition did not converge".into()))?;
    let mut moduli: Vec<f64> = svd.singular_values.iter().copied().collect();
    moduli.sort_by(f64::total_cmp);

    let mut values = Vec::with_capacity(n);
    for pair in moduli.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        if (a - b).abs() > PAIRING_TOL * b.max(1.0) {
            return Err(Error::Numeric(format!(
                "singular values of Lᵀ·Ω·L do not pair up ({a} vs {b})"
            )));
        }
        let nu = 0.5 * (a + b);
        if nu < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(nu));
        }
        values.push(nu.max(1.0));
    }
    Ok(SymplecticSpectrum(values))
}

/// Von Neumann entropy in bits, `Σ_k h(ν_k)`.
pub fn von_neumann_entropy(cm: &CovarianceMatrix) -> f64 {
    cm.entropy()
}

/// Conditional state of `kept_modes` after homodyning `measured_mode` in `quadrature`.
///
/// Schur complement `A - C (Π B Π)⁺ Cᵀ`, where `B` is the measured block, `C` the
/// cross-correlations and `(Π B Π)⁺` has the single non-zero entry `1/B_xx`.
pub fn condition_on_homodyne(
    joint: &CovarianceMatrix,
    kept_modes: &[usize],
    measured_mode: usize,
    quadrature: Quadrature,
) -> Result<CovarianceMatrix> {
    let modes = joint.modes();
    check_mode_list(kept_modes, modes)?;
    if measured_mode >= modes || kept_modes.contains(&measured_mode) {
        return Err(Error::Shape(format!(
            "measured mode {measured_mode} must be a mode of the joint state outside the kept set"
        )));
    }

    let row = 2 * measured_mode + quadrature.offset();
    let variance = joint.matrix[(row, row)];
    if variance <= SINGULAR_TOL {
        return Err(Error::Singular(variance));
    }

    let idx = quadrature_indices(kept_modes);
    let kept = joint.matrix.select_rows(&idx).select_columns(&idx);
    let cross: DVector<f64> =
        DVector::from_iterator(idx.len(), idx.iter().map(|&i| joint.matrix[(i, row)]));
    let mut conditioned = kept - (&cross * cross.transpose()) / variance;
    symmetrize(&mut conditioned);
    CovarianceMatrix::new(conditioned)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect()
}

fn check_mode_list(modes: &[usize], available: usize) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::Shape("mode list is empty".into()));
    }
    for (i, &k) in modes.iter().enumerate() {
        if k >= available {
            return Err(Error::Shape(format!(
                "mode {k} out of range for {available} modes"
            )));
        }
        if modes[..i].contains(&k) {
            return Err(Error::Shape(format!("mode {k} listed twice")));
        }
    }
    Ok(())
}

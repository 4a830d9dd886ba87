//! Small dense complex matrix helpers shared by `anyons` and `interferometry`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(entries: &[Complex64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

pub fn from_rows(rows: &[Vec<Complex64>]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
}

/// Matrix with a 1 at `(perm[j], j)`, so that it sends basis vector `j` to `perm[j]`.
pub fn permutation_matrix(perm: &[usize]) -> CMat {
    let n = perm.len();
    let mut m = CMat::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = c(1.0, 0.0);
    }
    m
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &CMat, b: &CMat, tol: f64) -> bool {
    max_abs_diff(a, b) <= tol
}

/// Finds a unit phase `λ` minimising `|a - λ b|`, anchored on the largest entry of `b`.
/// Returns the phase and the residual entrywise error.
pub fn phase_between(a: &CMat, b: &CMat) -> (Complex64, f64) {
    if a.shape() != b.shape() {
        return (c(1.0, 0.0), f64::INFINITY);
    }
    let (idx, _) =
        b.iter().enumerate().fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let (x, y) = (a.as_slice()[idx], b.as_slice()[idx]);
    if y.norm() < 1e-300 || x.norm() < 1e-300 {
        return (c(1.0, 0.0), max_abs_diff(a, b));
    }
    let ratio = x / y;
    let lambda = ratio / ratio.norm();
    (lambda, max_abs_diff(a, &(b * lambda)))
}

/// True when `a = λ b` for some unit-modulus `λ`, entrywise within `tol`.
pub fn eq_up_to_phase(a: &CMat, b: &CMat, tol: f64) -> bool {
    phase_between(a, b).1 <= tol
}

/// `max |U†U - I|` entrywise.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &identity(n))
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn expectation(state: &CVec, op: &CMat) -> Complex64 {
    state.dotc(&(op * state))
}

/// `exp(-i θ H)` for Hermitian `H` via eigendecomposition.
pub fn expm_hermitian(h: &CMat, theta: f64) -> CMat {
    let eig = nalgebra::linalg::SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let d = CMat::from_diagonal(&CVec::from_iterator(h.nrows(), eig.eigenvalues.iter().map(|&e| cis(-theta * e))));
    v * d * v.adjoint()
}

//! Dense complex linear algebra for the small matrices that show up in
//! few-qubit problems (dimension at most [`MAX_DIM`]).
//!
//! Everything here is a pure function of its inputs. The Hermitian
//! eigensolver is a cyclic complex Jacobi iteration, which is plenty fast
//! and very accurate at these sizes.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{contract, dimension, Error, Result};

pub type C64 = Complex64;

/// Largest matrix dimension any operation will produce.
pub const MAX_DIM: usize = 256;

/// Elementwise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues down to this (negative) value are clamped to zero when a
/// positive semidefinite matrix is expected.
pub const PSD_CLAMP: f64 = -1e-10;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return contract("matrix entries must be finite");
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return dimension("ragged rows");
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| c(x, 0.0))).collect();
        Self::from_vec(n, m, data)
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        m
    }

    /// `|v><v|` for an (unnormalized) column vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Panics on a shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in matrix product")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Local dimensions of an ordered list of subsystems. Subsystem 0 is the
/// leftmost tensor factor (big-endian ordering of basis labels).
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct SubsystemDims(Vec<usize>);

impl SubsystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return dimension("subsystem dimensions must be a nonempty list of positive integers");
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d).filter(|&t| t <= MAX_DIM));
        if total.is_none() {
            return dimension(format!("total dimension exceeds {MAX_DIM}"));
        }
        Ok(Self(dims))
    }

    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n]).expect("qubit register within dimension cap")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Dimensions of the listed subsystems, in the listed order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        Self::new(idx.iter().map(|&i| self.0[i]).collect())
    }

    /// Strides of each subsystem digit in a flat big-endian index.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.0.len()];
        for k in (0..self.0.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }

    /// Validates a sorted, duplicate-free, nonempty list of subsystem indices.
    pub(crate) fn check_subset(&self, idx: &[usize]) -> Result<()> {
        if idx.is_empty() {
            return contract("subsystem set must be nonempty");
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return contract("subsystem indices must be strictly increasing");
        }
        if idx.iter().any(|&i| i >= self.0.len()) {
            return dimension(format!(
                "subsystem index out of range for {} subsystems",
                self.0.len()
            ));
        }
        Ok(())
    }
}

/// Flat-index layout of a split of subsystems into an ordered pair of
/// groups: `index[a * dim_b + b]` is the original flat index whose digits on
/// the first group spell `a` and on the second group spell `b`.
#[derive(Debug, Clone)]
pub(crate) struct SplitLayout {
    pub dim_a: usize,
    pub dim_b: usize,
    pub index: Vec<usize>,
}

impl SplitLayout {
    pub fn new(dims: &SubsystemDims, group_a: &[usize]) -> Self {
        let group_b: Vec<usize> = (0..dims.len()).filter(|i| !group_a.contains(i)).collect();
        let strides = dims.strides();
        let offsets = |group: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize];
            for &k in group {
                let mut next = Vec::with_capacity(out.len() * dims.0[k]);
                for &base in &out {
                    for digit in 0..dims.0[k] {
                        next.push(base + digit * strides[k]);
                    }
                }
                out = next;
            }
            out
        };
        let off_a = offsets(group_a);
        let off_b = offsets(&group_b);
        let index = off_a
            .iter()
            .flat_map(|&a| off_b.iter().map(move |&b| a + b))
            .collect();
        Self {
            dim_a: off_a.len(),
            dim_b: off_b.len(),
            index,
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows).filter(|&r| r <= MAX_DIM);
    let cols = a.cols.checked_mul(b.cols).filter(|&r| r <= MAX_DIM);
    let (Some(rows), Some(cols)) = (rows, cols) else {
        return dimension(format!("tensor product exceeds dimension cap {MAX_DIM}"));
    };
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = s * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Traces out every subsystem not listed in `keep`. The kept subsystems stay
/// in their original order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &SubsystemDims, keep: &[usize]) -> Result<ComplexMatrix> {
    if !rho.is_square() || rho.rows != dims.total() {
        return dimension(format!(
            "{}x{} matrix does not match subsystem dims {:?}",
            rho.rows,
            rho.cols,
            dims.as_slice()
        ));
    }
    dims.check_subset(keep)?;
    let layout = SplitLayout::new(dims, keep);
    let (dk, dt) = (layout.dim_a, layout.dim_b);
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::default();
            for t in 0..dt {
                acc += rho[(layout.index[i * dt + t], layout.index[j * dt + t])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix: `h = V diag(values) V†`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation annihilates one off-diagonal pair `(p, q)`. Writing
/// `a_pq = |a_pq| e^{iα}`, the 2x2 block equals `P M P†` with
/// `P = diag(e^{iα}, 1)` and `M` real symmetric, so the complex rotation is
/// `P R` with `R` the classical real Jacobi rotation for `M`. Sweeps stop once
/// the off-diagonal Frobenius norm falls below `1e-14` relative to the
/// matrix norm.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return dimension("eigensolver needs a square matrix");
    }
    if !h.is_hermitian(HERMITIAN_TOL) {
        return contract("eigensolver input is not Hermitian");
    }
    let n = h.rows;
    // symmetrize away the admitted asymmetry
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
        }
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = JACOBI_OFF_TOL * scale;

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let m = apq.norm();
                if m == 0.0 {
                    continue;
                }
                let phase = apq / m;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * m);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // G = [[c e^{iα}, s e^{iα}], [-s, c]] on the (p, q) plane
                let gpp = phase * cs;
                let gpq = phase * sn;
                let gqp = c(-sn, 0.0);
                let gqq = c(cs, 0.0);
                // A <- A G
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * gpp + aiq * gqp;
                    a[(i, q)] = aip * gpq + aiq * gqq;
                }
                // A <- G† A
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = gpp.conj() * apj + gqp.conj() * aqj;
                    a[(q, j)] = gpq.conj() * apj + gqq.conj() * aqj;
                }
                a[(p, q)] = C64::default();
                a[(q, p)] = C64::default();
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                // V <- V G
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * gpp + viq * gqp;
                    v[(i, q)] = vip * gpq + viq * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(h).map(|e| e.values)
}

/// `V f(D) V†` for a Hermitian matrix with eigendecomposition `V D V†`.
pub fn hermitian_map(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = eig.values.len();
    let fv: Vec<f64> = eig.values.iter().map(|&x| f(x)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::default();
            for (k, &w) in fv.iter().enumerate() {
                acc += eig.vectors[(i, k)] * w * eig.vectors[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn hermitian_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h)?;
    if let Some(&low) = eig.values.last() {
        if low < PSD_CLAMP {
            return contract(format!("matrix is not positive semidefinite (eigenvalue {low:e})"));
        }
    }
    Ok(hermitian_map(&eig, |x| x.max(0.0).sqrt()))
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
        .expect("static shape")
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
        .expect("static shape")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
        .expect("static shape")
}

/// Two-qubit spin flip `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.rows != 4 || rho.cols != 4 {
        return dimension("spin flip is defined on 4x4 matrices");
    }
    let yy = tensor_product(&pauli_y(), &pauli_y())?;
    Ok(&(&yy * &rho.conj()) * &yy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= tol, "matrices differ by {d:e}\n{a:?}\n{b:?}");
    }

    fn bell_projector() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])
    }

    #[test]
    fn kron_identities() {
        let i4 = tensor_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));

        let two = ComplexMatrix::from_real_rows(&[&[2.0]]).unwrap();
        let m = pauli_y();
        assert_close(&tensor_product(&two, &m).unwrap(), &m.scale(c(2.0, 0.0)), 0.0);
    }

    #[test]
    fn kron_yy_is_antidiagonal() {
        let yy = tensor_product(&pauli_y(), &pauli_y()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_close(&yy, &expected, 0.0);
    }

    #[test]
    fn kron_rejects_oversized_products() {
        let big = ComplexMatrix::identity(32);
        let err = tensor_product(&big, &big).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let dims = SubsystemDims::qubits(2);
        let red = partial_trace(&bell_projector(), &dims, &[0]).unwrap();
        assert_close(&red, &ComplexMatrix::diag_real(&[0.5, 0.5]), 1e-15);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let ra = ComplexMatrix::from_vec(2, 2, vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)])
            .unwrap();
        let rb = ComplexMatrix::diag_real(&[0.25, 0.5, 0.25]);
        let dims = SubsystemDims::new(vec![2, 3]).unwrap();
        let rho = tensor_product(&ra, &rb).unwrap();
        assert_close(&partial_trace(&rho, &dims, &[0]).unwrap(), &ra, 1e-15);
        assert_close(&partial_trace(&rho, &dims, &[1]).unwrap(), &rb, 1e-15);
    }

    #[test]
    fn partial_trace_of_w_state() {
        let a = 1.0 / 3f64.sqrt();
        let mut w = vec![c(0.0, 0.0); 8];
        w[0b001] = c(a, 0.0);
        w[0b010] = c(a, 0.0);
        w[0b100] = c(a, 0.0);
        let red = partial_trace(&ComplexMatrix::outer(&w), &SubsystemDims::qubits(3), &[0]).unwrap();
        assert_close(&red, &ComplexMatrix::diag_real(&[2.0 / 3.0, 1.0 / 3.0]), 1e-15);
    }

    #[test]
    fn partial_trace_keeps_subsystem_order() {
        // |0>_A |1>_B |+>_C, keep {A, C}
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![c(0.0, 0.0); 8];
        v[0b010] = c(s, 0.0);
        v[0b011] = c(s, 0.0);
        let red = partial_trace(&ComplexMatrix::outer(&v), &SubsystemDims::qubits(3), &[0, 2]).unwrap();
        let expected = ComplexMatrix::outer(&[c(s, 0.0), c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_close(&red, &expected, 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_input() {
        let dims = SubsystemDims::qubits(2);
        let rho = ComplexMatrix::identity(8);
        assert!(matches!(partial_trace(&rho, &dims, &[0]), Err(Error::Dimension(_))));
        let rho = ComplexMatrix::identity(4);
        assert!(partial_trace(&rho, &dims, &[]).is_err());
        assert!(partial_trace(&rho, &dims, &[2]).is_err());
        assert!(partial_trace(&rho, &dims, &[1, 0]).is_err());
    }

    #[test]
    fn eigenvalues_of_simple_matrices() {
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix::identity(4)).unwrap(), vec![1.0; 4]);
        assert_eq!(
            hermitian_eigenvalues(&ComplexMatrix::diag_real(&[3.0, 1.0, 2.0])).unwrap(),
            vec![3.0, 2.0, 1.0]
        );
        let ev = hermitian_eigenvalues(&pauli_x()).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] + 1.0).abs() < 1e-15);
        let ev = hermitian_eigenvalues(&pauli_y()).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_reconstructs_complex_matrix() {
        let h = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(-1.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 0.5),
                c(0.25, 0.0),
                c(0.5, 0.0),
            ],
        )
        .unwrap();
        let eig = hermitian_eigen(&h).unwrap();
        assert_close(&hermitian_map(&eig, |x| x), &h, 1e-13);
        let vv = &eig.vectors.adjoint() * &eig.vectors;
        assert_close(&vv, &ComplexMatrix::identity(3), 1e-13);
        let tr: f64 = eig.values.iter().sum();
        assert!((tr - 1.5).abs() < 1e-13);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn sqrt_examples() {
        assert_close(&hermitian_sqrt(&ComplexMatrix::identity(2)).unwrap(), &ComplexMatrix::identity(2), 1e-15);
        assert_close(
            &hermitian_sqrt(&ComplexMatrix::diag_real(&[4.0, 9.0])).unwrap(),
            &ComplexMatrix::diag_real(&[2.0, 3.0]),
            1e-14,
        );
        let p = bell_projector();
        assert_close(&hermitian_sqrt(&p).unwrap(), &p, 1e-14);
    }

    #[test]
    fn sqrt_clamps_tiny_negative_and_rejects_large() {
        let r = hermitian_sqrt(&ComplexMatrix::diag_real(&[1.0, -5e-11])).unwrap();
        assert_close(&r, &ComplexMatrix::diag_real(&[1.0, 0.0]), 1e-15);
        let err = hermitian_sqrt(&ComplexMatrix::diag_real(&[1.0, -1e-6])).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn spin_flip_examples() {
        let mixed = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert_close(&spin_flip(&mixed).unwrap(), &mixed, 1e-16);
        let bell = bell_projector();
        assert_close(&spin_flip(&bell).unwrap(), &bell, 1e-16);
        let mut e00 = ComplexMatrix::zeros(4, 4);
        e00[(0, 0)] = c(1.0, 0.0);
        let mut e11 = ComplexMatrix::zeros(4, 4);
        e11[(3, 3)] = c(1.0, 0.0);
        assert_close(&spin_flip(&e00).unwrap(), &e11, 0.0);
        assert!(matches!(spin_flip(&ComplexMatrix::identity(2)), Err(Error::Dimension(_))));
    }
}

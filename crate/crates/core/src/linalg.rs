//! Tensor products, partial traces and partial transposes on dense complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Which tensor factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{iθ}`
pub fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Kronecker product, `a`'s indices outer.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn check_bipartite(x: &CMatrix, (da, db): (usize, usize)) -> Result<()> {
    let n = da * db;
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.nrows(), cols: x.ncols() });
    }
    if x.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.nrows() });
    }
    Ok(())
}

pub fn partial_trace(x: &CMatrix, traced: Subsystem, dims: (usize, usize)) -> Result<CMatrix> {
    check_bipartite(x, dims)?;
    let (da, db) = dims;
    Ok(match traced {
        Subsystem::First => CMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| x[(k * db + i, k * db + j)]).sum()
        }),
        Subsystem::Second => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| x[(i * db + k, j * db + k)]).sum()
        }),
    })
}

pub fn partial_transpose(x: &CMatrix, sub: Subsystem, dims: (usize, usize)) -> Result<CMatrix> {
    check_bipartite(x, dims)?;
    let (da, db) = dims;
    let n = da * db;
    Ok(CMatrix::from_fn(n, n, |r, s| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (s / db, s % db);
        match sub {
            Subsystem::First => x[(j * db + k, i * db + l)],
            Subsystem::Second => x[(i * db + l, j * db + k)],
        }
    }))
}

pub fn trace(x: &CMatrix) -> Complex64 {
    x.diagonal().iter().sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `max |x_ij|`
pub fn max_norm(x: &CMatrix) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(x: &CMatrix) -> f64 {
    max_norm(&(x - x.adjoint()))
}

pub fn ket_bra(ket: &CVector) -> CMatrix {
    ket * ket.adjoint()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn basis_ket(n: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[k] = Complex64::new(1.0, 0.0);
    v
}

pub fn hermitian_part(x: &CMatrix) -> CMatrix {
    (x + x.adjoint()).unscale(2.0)
}

//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Works over any nalgebra scalar whose real field is `f64`, so the same
//! routine serves complex Hermitian operators and the real symmetric blocks
//! of the SDP solver.

use nalgebra::{ComplexField, DMatrix, DVector};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-15;

/// Eigen-decomposition `A = V diag(values) V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigh<T: ComplexField<RealField = f64>> {
    pub values: DVector<f64>,
    pub vectors: DMatrix<T>,
}

impl<T: ComplexField<RealField = f64>> Eigh<T> {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rebuild `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DMatrix<T> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let w = T::from_real(f(self.values[j]));
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= w.clone());
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Eigen-decomposition of the Hermitian part of `m`.
pub fn eigh<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Eigh<T> {
    assert!(m.is_square(), "eigh needs a square matrix");
    let n = m.nrows();
    let mut a = (m + m.adjoint()).unscale(2.0);
    let mut v = DMatrix::<T>::identity(n, n);

    let frob = a.iter().map(|z| z.clone().modulus_squared()).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * frob.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].clone().modulus_squared();
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].clone().real()).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let values = DVector::from_iterator(n, order.iter().map(|&i| diag[i]));
    let mut vectors = DMatrix::<T>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Eigh { values, vectors }
}

fn rotate<T: ComplexField<RealField = f64>>(
    a: &mut DMatrix<T>,
    v: &mut DMatrix<T>,
    p: usize,
    q: usize,
) {
    let apq = a[(p, q)].clone();
    let g = apq.clone().modulus();
    if g <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq.unscale(g);
    let phase_conj = phase.clone().conjugate();
    let app = a[(p, p)].clone().real();
    let aqq = a[(q, q)].clone().real();

    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let (cr, sr) = (T::from_real(c), T::from_real(s));

    let n = a.nrows();
    // columns: A <- A V
    for k in 0..n {
        let akp = a[(k, p)].clone();
        let akq = a[(k, q)].clone();
        a[(k, p)] = akp.clone() * cr.clone() - akq.clone() * sr.clone() * phase_conj.clone();
        a[(k, q)] = akp * sr.clone() + akq * cr.clone() * phase_conj.clone();
    }
    // rows: A <- V† A
    for k in 0..n {
        let apk = a[(p, k)].clone();
        let aqk = a[(q, k)].clone();
        a[(p, k)] = apk.clone() * cr.clone() - aqk.clone() * sr.clone() * phase.clone();
        a[(q, k)] = apk * sr.clone() + aqk * cr.clone() * phase.clone();
    }
    a[(p, q)] = T::zero();
    a[(q, p)] = T::zero();
    a[(p, p)] = T::from_real(app - t * g);
    a[(q, q)] = T::from_real(aqq + t * g);

    for k in 0..n {
        let vkp = v[(k, p)].clone();
        let vkq = v[(k, q)].clone();
        v[(k, p)] = vkp.clone() * cr.clone() - vkq.clone() * sr.clone() * phase_conj.clone();
        v[(k, q)] = vkp * sr.clone() + vkq * cr.clone() * phase_conj.clone();
    }
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    eigh(m).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let g = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&g + g.adjoint()).unscale(2.0)
    }

    fn residual(m: &DMatrix<Complex64>, e: &Eigh<Complex64>) -> f64 {
        let lambda = DMatrix::from_diagonal(&e.values.map(|x| Complex64::new(x, 0.0)));
        (m * &e.vectors - &e.vectors * lambda).norm()
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let e = eigh(&m);
        assert_eq!(e.values.as_slice(), &[-1.0, 2.0, 3.0]);
    }

    #[test]
    fn accuracy_on_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 4, 8, 16] {
            for _ in 0..20 {
                let m = random_hermitian(n, &mut rng);
                let e = eigh(&m);
                assert!(residual(&m, &e) <= 1e-10 * m.norm().max(1.0));
                let unitarity = (e.vectors.adjoint() * &e.vectors - DMatrix::identity(n, n)).norm();
                assert!(unitarity < 1e-12);
                for w in e.values.as_slice().windows(2) {
                    assert!(w[0] <= w[1]);
                }
            }
        }
    }

    #[test]
    fn real_symmetric_matches_trace_and_determinant() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let e = eigh(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_spectrum() {
        let m = DMatrix::<Complex64>::identity(4, 4) * Complex64::new(0.25, 0.0);
        let e = eigh(&m);
        assert!(e.values.iter().all(|&x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn map_reconstructs_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_hermitian(5, &mut rng);
        let back = eigh(&m).map(|x| x);
        assert!((back - m).norm() < 1e-12);
    }
}

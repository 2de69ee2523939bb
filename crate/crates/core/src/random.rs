//! Seeded random unitaries, measurements and states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::quantum::{DensityMatrix, HermitianOperator, Povm};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer, used to derive independent child seeds.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary from the QR of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = complex_gaussian(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let n = d.norm();
        let ph = if n > 0.0 { d / n } else { Complex64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= ph);
    }
    q
}

/// Projective measurement from the columns of a Haar unitary.
///
/// With fewer outcomes than the dimension, the first `outcomes - 1` effects are
/// rank one and the last collects the remaining columns.
pub fn random_projective_povm(dim: usize, outcomes: usize, seed: u64) -> Result<Povm> {
    random_projective_povm_with(dim, outcomes, &mut rng_from_seed(seed))
}

pub fn random_projective_povm_with<R: Rng + ?Sized>(
    dim: usize,
    outcomes: usize,
    rng: &mut R,
) -> Result<Povm> {
    if outcomes > dim {
        return Err(Error::TooManyOutcomes { outcomes, dim });
    }
    if outcomes == 0 {
        return Err(Error::Empty("POVM without effects"));
    }
    let u = haar_unitary(dim, rng);
    let mut effects = Vec::with_capacity(outcomes);
    for k in 0..outcomes {
        let cols: Vec<usize> = if k + 1 < outcomes { vec![k] } else { (k..dim).collect() };
        let mut e = CMatrix::zeros(dim, dim);
        for j in cols {
            let v = u.column(j);
            e += v * v.adjoint();
        }
        effects.push(HermitianOperator::new((&e + e.adjoint()).unscale(2.0))?);
    }
    Povm::new(effects)
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let g = complex_gaussian(dim, 1, rng);
    let n = g.norm();
    CVector::from_iterator(dim, g.iter().map(|z| z / n))
}

/// Random density matrix of the given rank (Wishart-type construction).
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = complex_gaussian(dim, rank.max(1), rng);
    let w = &g * g.adjoint();
    let t = crate::linalg::trace(&w).re;
    let m = w.unscale(t);
    DensityMatrix::new(
        HermitianOperator::new((&m + m.adjoint()).unscale(2.0)).expect("Wishart matrix is Hermitian"),
    )
    .expect("Wishart matrix is a state")
}

/// Random POVM with `outcomes` effects of full rank, by normalizing Wishart blocks.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Povm {
    let blocks: Vec<CMatrix> = (0..outcomes)
        .map(|_| {
            let g = complex_gaussian(dim, dim, rng);
            &g * g.adjoint()
        })
        .collect();
    let total = blocks.iter().fold(CMatrix::zeros(dim, dim), |acc, b| acc + b);
    let inv_sqrt = crate::eigen::eigh(&total).map(|x| 1.0 / x.sqrt());
    let effects = blocks
        .iter()
        .map(|b| {
            let e = &inv_sqrt * b * &inv_sqrt;
            HermitianOperator::new((&e + e.adjoint()).unscale(2.0)).expect("congruence keeps hermiticity")
        })
        .collect();
    Povm::new(effects).expect("normalized Wishart effects form a POVM")
}

//! States, effects, POVMs and assemblages with their validity invariants.

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::linalg::{
    basis_ket, hermiticity_defect, identity, ket_bra, max_norm, partial_trace, tensor_product,
    trace, trace_product, CMatrix, CVector, Subsystem,
};
use num_complex::Complex64;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const COMPLETENESS_TOL: f64 = 1e-9;
pub const BORN_IMAG_TOL: f64 = 1e-10;
/// Eigenvalues above this count as support in the dilation.
pub const SUPPORT_TOL: f64 = 1e-12;

/// A square matrix equal to its adjoint within [`HERMITICITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    /// Validates and stores the exact Hermitian part.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let deviation = hermiticity_defect(&m);
        if deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self((&m + m.adjoint()).unscale(2.0)))
    }

    pub fn projector(ket: &CVector) -> Self {
        Self(ket_bra(ket))
    }

    pub fn identity(dim: usize) -> Self {
        Self(identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(&self.0).min()
    }
}

/// PSD test with the smallest eigenvalue for diagnostics.
pub fn is_psd(x: &HermitianOperator, tol: f64) -> (bool, f64) {
    let lambda = x.min_eigenvalue();
    (lambda >= -tol, lambda)
}

fn require_psd(x: &HermitianOperator) -> Result<()> {
    match is_psd(x, PSD_TOL) {
        (true, _) => Ok(()),
        (false, min_eigenvalue) => Err(Error::NotPsd { min_eigenvalue }),
    }
}

fn require_dim(x: &HermitianOperator, dim: usize) -> Result<()> {
    if x.dim() == dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: dim, found: x.dim() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(HermitianOperator);

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        require_psd(&op)?;
        let t = op.trace();
        if (t - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace: t, expected: 1.0 });
        }
        Ok(Self(op))
    }

    pub fn pure(ket: &CVector) -> Result<Self> {
        let norm = ket.norm();
        Self::new(HermitianOperator::projector(&ket.unscale(norm)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianOperator::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let first = effects.first().ok_or(Error::Empty("POVM without effects"))?;
        let dim = first.dim();
        let mut total = CMatrix::zeros(dim, dim);
        for e in &effects {
            require_dim(e, dim)?;
            require_psd(e)?;
            total += e.matrix();
        }
        let deviation = max_norm(&(total - identity(dim)));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::IncompletePovm { deviation });
        }
        Ok(Self { effects })
    }

    /// Projective measurement onto the given orthonormal kets.
    pub fn from_kets(kets: &[CVector]) -> Result<Self> {
        Self::new(kets.iter().map(HermitianOperator::projector).collect())
    }

    pub fn from_matrices(effects: Vec<CMatrix>) -> Result<Self> {
        Self::new(effects.into_iter().map(HermitianOperator::new).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn effect(&self, b: usize) -> &HermitianOperator {
        &self.effects[b]
    }
}

/// Subnormalized preparations `σ[x][a]` whose sum over `a` is the same state for every `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage {
    sigmas: Vec<Vec<HermitianOperator>>,
    sigma_star: HermitianOperator,
}

impl Assemblage {
    /// `sigmas[x][a]`
    pub fn new(sigmas: Vec<Vec<HermitianOperator>>) -> Result<Self> {
        let first = sigmas.first().ok_or(Error::Empty("assemblage without settings"))?;
        let outcomes = first.len();
        let op = first.first().ok_or(Error::Empty("assemblage without outcomes"))?;
        let dim = op.dim();

        let mut star: Option<CMatrix> = None;
        for (x, row) in sigmas.iter().enumerate() {
            if row.len() != outcomes {
                return Err(Error::DimensionMismatch { expected: outcomes, found: row.len() });
            }
            let mut total = CMatrix::zeros(dim, dim);
            for s in row {
                require_dim(s, dim)?;
                require_psd(s)?;
                total += s.matrix();
            }
            match &star {
                None => star = Some(total),
                Some(s0) => {
                    let deviation = max_norm(&(total - s0));
                    if deviation > TRACE_TOL {
                        return Err(Error::Signaling { setting: x, deviation });
                    }
                }
            }
        }
        let sigma_star = HermitianOperator::new(star.expect("at least one setting"))?;
        let t = sigma_star.trace();
        if (t - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace: t, expected: 1.0 });
        }
        Ok(Self { sigmas, sigma_star })
    }

    pub fn from_matrices(sigmas: Vec<Vec<CMatrix>>) -> Result<Self> {
        Self::new(
            sigmas
                .into_iter()
                .map(|row| row.into_iter().map(HermitianOperator::new).collect())
                .collect::<Result<_>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.sigma_star.dim()
    }

    pub fn settings(&self) -> usize {
        self.sigmas.len()
    }

    pub fn outcomes(&self) -> usize {
        self.sigmas[0].len()
    }

    pub fn sigma(&self, a: usize, x: usize) -> &HermitianOperator {
        &self.sigmas[x][a]
    }

    pub fn sigmas(&self) -> &[Vec<HermitianOperator>] {
        &self.sigmas
    }

    pub fn sigma_star(&self) -> &HermitianOperator {
        &self.sigma_star
    }
}

/// `Re Tr(σ M)`; rejects a non-negligible imaginary part.
pub fn born_probability(sigma: &HermitianOperator, effect: &HermitianOperator) -> Result<f64> {
    require_dim(effect, sigma.dim())?;
    let t = trace_product(sigma.matrix(), effect.matrix());
    if t.im.abs() > BORN_IMAG_TOL {
        return Err(Error::ComplexTrace { imag: t.im });
    }
    Ok(t.re)
}

/// `σ_{a|x} = Tr_A(ρ (N_{a|x} ⊗ 𝕀))`, with `povms[x]` acting on the first factor.
pub fn steer(rho: &DensityMatrix, povms: &[Povm]) -> Result<Assemblage> {
    let first = povms.first().ok_or(Error::Empty("no POVMs to steer with"))?;
    let da = first.dim();
    let n = rho.dim();
    if !n.is_multiple_of(da) {
        return Err(Error::DimensionMismatch { expected: da, found: n });
    }
    let db = n / da;
    let id_b = identity(db);
    let sigmas = povms
        .iter()
        .map(|povm| {
            if povm.dim() != da {
                return Err(Error::DimensionMismatch { expected: da, found: povm.dim() });
            }
            povm.effects()
                .iter()
                .map(|e| {
                    let lifted = tensor_product(e.matrix(), &id_b);
                    let s = partial_trace(&(rho.matrix() * lifted), Subsystem::First, (da, db))?;
                    HermitianOperator::new(hermitize(s))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Assemblage::new(sigmas)
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()).unscale(2.0)
}

/// Pure state on `d ⊗ d` and per-setting POVMs on the first factor that steer to `assemblage`.
///
/// Kernel directions of `σ_*` are absorbed into the last outcome of every setting.
pub fn ghjw_dilation(assemblage: &Assemblage) -> Result<(DensityMatrix, Vec<Povm>)> {
    let d = assemblage.dim();
    let e = eigh(assemblage.sigma_star().matrix());
    let support: Vec<usize> = (0..d).filter(|&k| e.values[k] > SUPPORT_TOL).collect();

    let mut psi = CVector::zeros(d * d);
    for (slot, &k) in support.iter().enumerate() {
        let amp = Complex64::new(e.values[k].sqrt(), 0.0);
        let term = basis_ket(d, slot).kronecker(&e.vectors.column(k).into_owned());
        psi += term * amp;
    }
    let rho = DensityMatrix::pure(&psi)?;

    let r = support.len();
    let mut kernel = CMatrix::zeros(d, d);
    for slot in r..d {
        kernel[(slot, slot)] = Complex64::new(1.0, 0.0);
    }

    let povms = assemblage
        .sigmas()
        .iter()
        .map(|row| {
            let last = row.len() - 1;
            let effects = row
                .iter()
                .enumerate()
                .map(|(a, sigma)| {
                    let mut n = CMatrix::zeros(d, d);
                    for (i, &ki) in support.iter().enumerate() {
                        for (j, &kj) in support.iter().enumerate() {
                            let vi = e.vectors.column(ki);
                            let vj = e.vectors.column(kj);
                            let entry = (vi.adjoint() * sigma.matrix() * vj)[(0, 0)];
                            let w = (e.values[ki] * e.values[kj]).sqrt();
                            // transpose of the whitened support block
                            n[(j, i)] = entry / w;
                        }
                    }
                    if a == last {
                        n += &kernel;
                    }
                    HermitianOperator::new(hermitize(n))
                })
                .collect::<Result<Vec<_>>>()?;
            Povm::new(effects)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rho, povms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn psd_reports_smallest_eigenvalue() {
        let (ok, l) = is_psd(&HermitianOperator::identity(4), PSD_TOL);
        assert!(ok && (l - 1.0).abs() < 1e-15);
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(-1e-3, 0.0)]));
        let (ok, l) = is_psd(&HermitianOperator::new(m).unwrap(), 1e-9);
        assert!(!ok && (l + 1e-3).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_and_nan() {
        let mut m = identity(2);
        m[(0, 1)] = c(1e-6, 0.0);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
        let mut m = identity(2);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert_eq!(HermitianOperator::new(m), Err(Error::NonFinite));
    }

    #[test]
    fn born_of_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(4);
        let p = born_probability(rho.op(), &HermitianOperator::identity(4)).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn born_rejects_complex_trace() {
        // product of two Hermitian operators whose trace is complex is impossible,
        // so build the effect without validation
        let sigma = HermitianOperator::identity(2);
        let bad = HermitianOperator(CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.0, 1.0),
            c(0.0, 0.0),
        ])));
        assert!(matches!(born_probability(&sigma, &bad), Err(Error::ComplexTrace { .. })));
    }

    #[test]
    fn incomplete_povm_is_rejected() {
        let half = HermitianOperator::identity(2).scale(0.4);
        assert!(matches!(Povm::new(vec![half.clone(), half]), Err(Error::IncompletePovm { .. })));
    }

    #[test]
    fn product_state_steering() {
        let ra = DensityMatrix::pure(&CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)])).unwrap();
        let rb = DensityMatrix::pure(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 1.0)])).unwrap();
        let rho = DensityMatrix::new(
            HermitianOperator::new(tensor_product(ra.matrix(), rb.matrix())).unwrap(),
        )
        .unwrap();
        let z = Povm::from_kets(&[basis_ket(2, 0), basis_ket(2, 1)]).unwrap();
        let ass = steer(&rho, &[z]).unwrap();
        let p0 = born_probability(ra.op(), &HermitianOperator::projector(&basis_ket(2, 0))).unwrap();
        assert!(max_norm(&(ass.sigma(0, 0).matrix() - rb.matrix().scale(p0))) < 1e-14);
    }

    #[test]
    fn maximally_entangled_steering_is_diagonal() {
        let mut psi = CVector::zeros(16);
        for k in 0..4 {
            psi[k * 4 + k] = c(0.5, 0.0);
        }
        let rho = DensityMatrix::pure(&psi).unwrap();
        let z = Povm::from_kets(&(0..4).map(|k| basis_ket(4, k)).collect::<Vec<_>>()).unwrap();
        let ass = steer(&rho, &[z]).unwrap();
        for a in 0..4 {
            let want = ket_bra(&basis_ket(4, a)).scale(0.25);
            assert!(max_norm(&(ass.sigma(a, 0).matrix() - want)) < 1e-15);
        }
    }

    #[test]
    fn signaling_assemblage_is_rejected() {
        let p = |k| HermitianOperator::projector(&basis_ket(2, k)).scale(0.5);
        let ok = Assemblage::new(vec![vec![p(0), p(1)], vec![p(1), p(0)]]);
        assert!(ok.is_ok());
        let bad = Assemblage::new(vec![vec![p(0), p(1)], vec![p(0), p(0)]]);
        assert!(matches!(bad, Err(Error::Signaling { .. })));
    }
}

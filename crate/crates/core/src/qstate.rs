//! State representations: the information vector of a qubit and the density
//! matrix of an n-level system, plus the total-information functionals and the
//! projective measurement update.

use num_complex::Complex64;

use crate::infomeasure::{NormalizationScheme, ProbabilityVector};
use crate::matkernel::{hermitian_eigensystem, sigma, ComplexMatrix};
use crate::mub::MubSet;
use crate::tolerance::{MAX_DIM, TOL};
use crate::{Error, Result};

/// Catalog of knowledge about three complementary spin propositions,
/// i = (i₁, i₂, i₃) with iⱼ = p⁺ⱼ − p⁻ⱼ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InfoVector {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

impl InfoVector {
    pub const fn new(i1: f64, i2: f64, i3: f64) -> Self {
        Self { i1, i2, i3 }
    }

    pub const fn from_array([i1, i2, i3]: [f64; 3]) -> Self {
        Self { i1, i2, i3 }
    }

    pub const fn to_array(self) -> [f64; 3] {
        [self.i1, self.i2, self.i3]
    }

    pub fn norm_sqr(self) -> f64 {
        self.i1 * self.i1 + self.i2 * self.i2 + self.i3 * self.i3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.i1 * other.i1 + self.i2 * other.i2 + self.i3 * other.i3
    }

    /// ‖i‖ ≤ 1 up to the validation tolerance.
    pub fn is_physical(self) -> bool {
        self.norm_sqr() <= 1.0 + TOL.validation
    }

    pub fn is_pure(self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TOL.validation
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = [self.i1 - other.i1, self.i2 - other.i2, self.i3 - other.i3];
        d.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    fn check_physical(self) -> Result<()> {
        if !self.norm().is_finite() || !self.is_physical() {
            return Err(Error::UnphysicalVector { norm: self.norm() });
        }
        Ok(())
    }
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let dim = matrix.rows();
        if dim < 2 {
            return Err(Error::InvalidDensityMatrix(format!("dimension {dim} < 2")));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        let tol = TOL.validation;
        let deviation = matrix.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let eig = hermitian_eigensystem(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// |ψ⟩⟨ψ| for a nonzero ket, normalized.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// 1/n.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Re Tr(ρ·A).
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        (&self.matrix * observable).trace().re
    }

    /// ⟨v|ρ|v⟩.
    pub fn probability_of(&self, v: &[Complex64]) -> f64 {
        let rv = self.matrix.mul_vec(v);
        v.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
    }

    /// U·ρ·U† for a unitary U, revalidated.
    pub fn transform(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: u.rows(),
            });
        }
        Self::new(self.matrix.conjugate_by(u))
    }
}

/// ρ = ½(1 + Σⱼ iⱼσⱼ).
pub fn density_from_info(i: InfoVector) -> Result<DensityMatrix> {
    i.check_physical()?;
    let mut m = ComplexMatrix::identity(2);
    for (k, &c) in i.to_array().iter().enumerate() {
        m = &m + &sigma(k).scale_real(c);
    }
    DensityMatrix::new(m.scale_real(0.5))
}

/// iⱼ = Tr(ρ σⱼ) for a qubit state.
pub fn info_from_density(rho: &DensityMatrix) -> Result<InfoVector> {
    if rho.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: rho.dim(),
        });
    }
    Ok(InfoVector::from_array(std::array::from_fn(|k| {
        rho.expectation(&sigma(k))
    })))
}

/// I_total = i₁² + i₂² + i₃².
pub fn total_info_qubit(i: InfoVector) -> Result<f64> {
    i.check_physical()?;
    Ok(i.norm_sqr())
}

/// Outcome distributions p^a_j = ⟨e^a_j|ρ|e^a_j⟩ for every basis of the set.
pub fn mub_probabilities(rho: &DensityMatrix, bases: &MubSet) -> Result<Vec<ProbabilityVector>> {
    if rho.dim() != bases.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: bases.dim(),
        });
    }
    bases
        .bases()
        .iter()
        .map(|basis| {
            let p = (0..basis.cols())
                .map(|j| rho.probability_of(&basis.column(j)))
                .collect();
            ProbabilityVector::new(p)
        })
        .collect()
}

/// I_total = 𝒩 Σₐ Σⱼ (p^a_j − 1/n)² over a complete set of complementary
/// measurements.
pub fn total_info_general(
    rho: &DensityMatrix,
    bases: &MubSet,
    scheme: NormalizationScheme,
) -> Result<f64> {
    let n = rho.dim();
    let norm = scheme.factor(n)?;
    let centre = 1.0 / n as f64;
    let probs = mub_probabilities(rho, bases)?;
    Ok(norm
        * probs
            .iter()
            .flat_map(|p| p.as_slice().iter())
            .map(|x| (x - centre) * (x - centre))
            .sum::<f64>())
}

/// Result of a yes/no projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementUpdate {
    /// Post-measurement state for the recorded outcome.
    pub state: DensityMatrix,
    /// Tr(P ρ): probability of the "yes" outcome.
    pub probability: f64,
}

/// Update the state after measuring the projector `p`.
///
/// With `outcome_observed` the state becomes PρP/Tr(Pρ); otherwise the
/// complementary outcome is recorded and the state becomes QρQ/Tr(Qρ) with
/// Q = 1 − P. The returned probability is always Tr(Pρ).
pub fn measurement_update(
    rho: &DensityMatrix,
    p: &ComplexMatrix,
    outcome_observed: bool,
) -> Result<MeasurementUpdate> {
    let n = rho.dim();
    if p.rows() != n || p.cols() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: p.rows(),
        });
    }
    let deviation = p.hermitian_deviation().max((p * p).max_abs_diff(p));
    if deviation > TOL.validation {
        return Err(Error::NotProjector { deviation });
    }
    let probability = rho.expectation(p).clamp(0.0, 1.0);
    let (proj, weight) = if outcome_observed {
        (p.clone(), probability)
    } else {
        (&ComplexMatrix::identity(n) - p, 1.0 - probability)
    };
    if weight < TOL.zero_probability {
        return Err(Error::ZeroProbabilityOutcome {
            probability: weight,
        });
    }
    let post = &(&proj * rho.matrix()) * &proj;
    let trace = post.trace().re;
    Ok(MeasurementUpdate {
        state: DensityMatrix::new(post.scale_real(1.0 / trace))?,
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::{mub_construct, MubSet};
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket0() -> Vec<Complex64> {
        vec![c(1.0, 0.0), c(0.0, 0.0)]
    }

    fn ket_plus_x() -> Vec<Complex64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        vec![c(h, 0.0), c(h, 0.0)]
    }

    #[test]
    fn density_from_info_examples() {
        let mixed = density_from_info(InfoVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!(mixed
            .matrix()
            .max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
            < 1e-15);
        let up = density_from_info(InfoVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!(up
            .matrix()
            .max_abs_diff(&ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap())
            < 1e-15);
        let px = density_from_info(InfoVector::new(1.0, 0.0, 0.0)).unwrap();
        assert!(px
            .matrix()
            .max_abs_diff(&ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap())
            < 1e-15);
        assert!(matches!(
            density_from_info(InfoVector::new(0.8, 0.8, 0.0)),
            Err(Error::UnphysicalVector { .. })
        ));
    }

    #[test]
    fn info_from_density_examples() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(info_from_density(&mixed).unwrap(), InfoVector::default());
        let up = DensityMatrix::from_pure(&ket0()).unwrap();
        assert_eq!(info_from_density(&up).unwrap(), InfoVector::new(0.0, 0.0, 1.0));
        let y = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, -0.5)],
            vec![c(0.0, 0.5), c(0.5, 0.0)],
        ])
        .unwrap();
        let i = info_from_density(&DensityMatrix::new(y).unwrap()).unwrap();
        assert!(i.max_abs_diff(InfoVector::new(0.0, 1.0, 0.0)) < 1e-15);
        let qutrit = DensityMatrix::maximally_mixed(3).unwrap();
        assert_eq!(
            info_from_density(&qutrit),
            Err(Error::WrongDimension {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn density_validation() {
        let not_unit_trace = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(not_unit_trace),
            Err(Error::InvalidDensityMatrix(_))
        ));
        let negative = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::InvalidDensityMatrix(_))
        ));
        let skew = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(matches!(
            DensityMatrix::new(skew),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn total_info_qubit_examples() {
        assert_eq!(total_info_qubit(InfoVector::new(0.0, 0.0, 1.0)).unwrap(), 1.0);
        assert_eq!(total_info_qubit(InfoVector::default()).unwrap(), 0.0);
        assert!((total_info_qubit(InfoVector::new(0.6, 0.0, 0.8)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mub_probability_examples() {
        for n in [2, 3, 4, 5] {
            let set = mub_construct(n).unwrap();
            let rho = DensityMatrix::maximally_mixed(n).unwrap();
            for p in mub_probabilities(&rho, &set).unwrap() {
                assert!(p.as_slice().iter().all(|x| (x - 1.0 / n as f64).abs() < 1e-14));
            }
        }
        let set = mub_construct(2).unwrap();
        let up = DensityMatrix::from_pure(&ket0()).unwrap();
        let probs = mub_probabilities(&up, &set).unwrap();
        let expected = [[1.0, 0.0], [0.5, 0.5], [0.5, 0.5]];
        for (p, e) in probs.iter().zip(expected) {
            assert!((p.as_slice()[0] - e[0]).abs() < 1e-15);
            assert!((p.as_slice()[1] - e[1]).abs() < 1e-15);
        }
        let qutrit = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            mub_probabilities(&qutrit, &set),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn purity_identity_on_random_pure_qutrits() {
        let set = mub_construct(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let rho = DensityMatrix::from_pure(&sampling::random_pure_state(3, &mut rng)).unwrap();
            // Brute-force sum of squares, independent of total_info_general.
            let mut sum = 0.0;
            for basis in set.bases() {
                for j in 0..3 {
                    let v = basis.column(j);
                    let amp: Complex64 = (0..3)
                        .flat_map(|a| (0..3).map(move |b| (a, b)))
                        .map(|(a, b)| v[a].conj() * rho.matrix()[(a, b)] * v[b])
                        .sum();
                    sum += amp.re * amp.re;
                }
            }
            assert!((sum - 2.0).abs() < 1e-10);
            let unit = total_info_general(&rho, &set, NormalizationScheme::Unit).unwrap();
            assert!((unit - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn total_info_general_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let set4 = mub_construct(4).unwrap();
        let pure4 = DensityMatrix::from_pure(&sampling::random_pure_state(4, &mut rng)).unwrap();
        let bits = total_info_general(&pure4, &set4, NormalizationScheme::Bits).unwrap();
        assert!((bits - 2.0).abs() < 1e-10);
        for n in [2, 3, 4, 5, 7] {
            let set = mub_construct(n).unwrap();
            let mixed = DensityMatrix::maximally_mixed(n).unwrap();
            let v = total_info_general(&mixed, &set, NormalizationScheme::Unit).unwrap();
            assert!(v.abs() < 1e-14);
        }
        let set3 = mub_construct(3).unwrap();
        assert_eq!(
            total_info_general(
                &DensityMatrix::maximally_mixed(3).unwrap(),
                &set3,
                NormalizationScheme::Bits
            ),
            Err(Error::BitsModeRequiresPowerOfTwo(3))
        );
    }

    #[test]
    fn total_info_depends_only_on_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for n in [3, 4, 5] {
            let set = mub_construct(n).unwrap();
            for rank in 1..=n {
                let rho = sampling::random_density(n, rank, &mut rng);
                let u = sampling::random_unitary(n, &mut rng);
                let moved = rho.transform(&u).unwrap();
                let a = total_info_general(&rho, &set, NormalizationScheme::Unit).unwrap();
                let b = total_info_general(&moved, &set, NormalizationScheme::Unit).unwrap();
                assert!((a - b).abs() < 1e-10);
                let nf = n as f64;
                let from_purity = nf / (nf - 1.0) * (rho.purity() - 1.0 / nf);
                assert!((a - from_purity).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn qubit_total_info_matches_rotated_mub_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let standard = mub_construct(2).unwrap();
        for _ in 0..50 {
            let i = sampling::random_mixed_info_vector(&mut rng);
            let rho = density_from_info(i).unwrap();
            let triple: MubSet = standard.rotated(&sampling::random_unitary(2, &mut rng)).unwrap();
            let general = total_info_general(&rho, &triple, NormalizationScheme::Unit).unwrap();
            assert!((general - total_info_qubit(i).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn measurement_update_examples() {
        let p0 = ComplexMatrix::outer(&ket0(), &ket0());
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let upd = measurement_update(&mixed, &p0, true).unwrap();
        assert!((upd.probability - 0.5).abs() < 1e-15);
        assert!(upd.state.matrix().max_abs_diff(&p0) < 1e-15);

        let up = DensityMatrix::from_pure(&ket0()).unwrap();
        let upd = measurement_update(&up, &p0, true).unwrap();
        assert_eq!(upd.probability, 1.0);
        assert!(upd.state.matrix().max_abs_diff(up.matrix()) < 1e-15);

        let plus = DensityMatrix::from_pure(&ket_plus_x()).unwrap();
        let upd = measurement_update(&plus, &p0, true).unwrap();
        assert!((upd.probability - 0.5).abs() < 1e-15);
        let i = info_from_density(&upd.state).unwrap();
        assert!(i.max_abs_diff(InfoVector::new(0.0, 0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn measurement_update_errors_and_complement() {
        let p0 = ComplexMatrix::outer(&ket0(), &ket0());
        let down = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            measurement_update(&down, &p0, true),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
        let upd = measurement_update(&down, &p0, false).unwrap();
        assert_eq!(upd.probability, 0.0);
        assert!(upd.state.matrix().max_abs_diff(down.matrix()) < 1e-15);

        let not_proj = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            measurement_update(&down, &not_proj, true),
            Err(Error::NotProjector { .. })
        ));
    }

    #[test]
    fn measurement_update_yields_valid_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for n in [2, 3, 4] {
            for _ in 0..20 {
                let rho = sampling::random_density(n, 1 + n / 2, &mut rng);
                let v = sampling::random_pure_state(n, &mut rng);
                let p = ComplexMatrix::outer(&v, &v);
                for observed in [true, false] {
                    let upd = measurement_update(&rho, &p, observed).unwrap();
                    assert!((0.0..=1.0).contains(&upd.probability));
                    // Construction already validated the state; check the
                    // invariant again from its spectrum.
                    let eig = hermitian_eigensystem(upd.state.matrix()).unwrap();
                    assert!(eig.values.iter().all(|&l| l > -1e-10));
                }
            }
        }
    }

    #[test]
    fn round_trip_through_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..100 {
            let i = sampling::random_mixed_info_vector(&mut rng);
            let back = info_from_density(&density_from_info(i).unwrap()).unwrap();
            assert!(back.max_abs_diff(i) < 1e-12);
            let rho = sampling::random_density(2, 2, &mut rng);
            let again = density_from_info(info_from_density(&rho).unwrap()).unwrap();
            assert!(again.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
    }
}

//! Correlation information of two qubits.
//!
//! For spin directions a (particle 1) and b (particle 2) the joint
//! proposition "the two spins agree" carries I_ab = (p⁺_ab − p⁻_ab)², which
//! equals (aᵀ·T·b)² for the correlation tensor T_ab = Tr(ρ σ_a⊗σ_b). Summing
//! over a plane on each side gives I_corr; its maximum over all plane pairs
//! is s₁² + s₂², the sum of the two largest squared singular values of T.
//!
//! I_corr > 1 is the criterion reported as `entangled_by_criterion`. It is
//! the same condition as CHSH violation (M > 1), which is strictly weaker than
//! non-separability: Werner states with 1/2 < w ≤ 1/√2 are entangled yet
//! satisfy I_corr ≤ 1.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::malus::euler_rotation;
use crate::matkernel::{dot3, kron, sigma, svd_3x3, ComplexMatrix, Real3};
use crate::qstate::DensityMatrix;
use crate::tolerance::TOL;
use crate::{Error, Result};

pub type Direction = [f64; 3];

pub const X: Direction = [1.0, 0.0, 0.0];
pub const Y: Direction = [0.0, 1.0, 0.0];
pub const Z: Direction = [0.0, 0.0, 1.0];

/// T_ab = Tr(ρ σ_a⊗σ_b), a, b ∈ {x, y, z}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTensor(pub Real3);

impl CorrelationTensor {
    pub fn matrix(&self) -> &Real3 {
        &self.0
    }

    /// aᵀ·T·b = E(a, b), the correlation of spins along a and b.
    pub fn correlation(&self, a: &Direction, b: &Direction) -> f64 {
        (0..3)
            .map(|i| a[i] * dot3(&self.0[i], b))
            .sum()
    }

    pub fn singular_values(&self) -> [f64; 3] {
        svd_3x3(&self.0).s
    }
}

/// One measurement plane per particle, each spanned by an orthonormal pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePair {
    pub a1: Direction,
    pub a2: Direction,
    pub b1: Direction,
    pub b2: Direction,
}

impl PlanePair {
    pub fn new(a1: Direction, a2: Direction, b1: Direction, b2: Direction) -> Result<Self> {
        let tol = TOL.direction;
        for (name, v) in [("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2)] {
            let norm = dot3(&v, &v).sqrt();
            if (norm - 1.0).abs() > tol {
                return Err(Error::InvalidDirection(format!("{name} has length {norm}")));
            }
        }
        for (name, d) in [("a1·a2", dot3(&a1, &a2)), ("b1·b2", dot3(&b1, &b2))] {
            if d.abs() > tol {
                return Err(Error::InvalidDirection(format!("{name} = {d}, not orthogonal")));
            }
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    /// The x-y plane on both sides.
    pub const fn canonical() -> Self {
        Self {
            a1: X,
            a2: Y,
            b1: X,
            b2: Y,
        }
    }
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

fn check_unit(v: &Direction) -> Result<()> {
    let norm = dot3(v, v).sqrt();
    if (norm - 1.0).abs() > TOL.direction {
        return Err(Error::InvalidDirection(format!("length {norm}")));
    }
    Ok(())
}

pub fn correlation_tensor(rho: &DensityMatrix) -> Result<CorrelationTensor> {
    check_two_qubit(rho)?;
    Ok(CorrelationTensor(std::array::from_fn(|a| {
        std::array::from_fn(|b| rho.expectation(&kron(&sigma(a), &sigma(b))))
    })))
}

/// n·σ.
fn spin_along(n: &Direction) -> ComplexMatrix {
    (0..3).fold(ComplexMatrix::zeros(2, 2), |acc, k| {
        &acc + &sigma(k).scale_real(n[k])
    })
}

/// Probabilities that spins along a and b agree and disagree.
pub fn agreement_probabilities(
    rho: &DensityMatrix,
    a: &Direction,
    b: &Direction,
) -> Result<(f64, f64)> {
    check_two_qubit(rho)?;
    check_unit(a)?;
    check_unit(b)?;
    let id = ComplexMatrix::identity(2);
    let up = |n: &Direction| (&id + &spin_along(n)).scale_real(0.5);
    let down = |n: &Direction| (&id - &spin_along(n)).scale_real(0.5);
    let same = &kron(&up(a), &up(b)) + &kron(&down(a), &down(b));
    let p_same = rho.expectation(&same).clamp(0.0, 1.0);
    Ok((p_same, 1.0 - p_same))
}

/// I_ab = (p⁺_ab − p⁻_ab)².
pub fn joint_info(rho: &DensityMatrix, a: &Direction, b: &Direction) -> Result<f64> {
    let (plus, minus) = agreement_probabilities(rho, a, b)?;
    Ok((plus - minus) * (plus - minus))
}

/// I_corr = Σ_{i,j ∈ {1,2}} (aᵢᵀ T bⱼ)².
pub fn info_corr(rho: &DensityMatrix, planes: &PlanePair) -> Result<f64> {
    let t = correlation_tensor(rho)?;
    Ok(info_corr_from_tensor(&t, planes))
}

pub fn info_corr_from_tensor(t: &CorrelationTensor, planes: &PlanePair) -> f64 {
    [planes.a1, planes.a2]
        .iter()
        .flat_map(|a| [planes.b1, planes.b2].map(|b| t.correlation(a, &b)))
        .map(|e| e * e)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaximizationMethod {
    /// s₁² + s₂² from the singular value decomposition of T.
    Analytic,
    /// Grid search over Euler angles of both local frames plus coordinate
    /// descent.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxInfoCorr {
    pub value: f64,
    pub argmax_planes: PlanePair,
    pub method: MaximizationMethod,
}

/// Settings of the numeric plane optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearch {
    /// Grid points per Euler angle, per side.
    pub points_per_angle: usize,
    /// Coordinate descent stops once its step falls below this.
    pub step_tolerance: f64,
}

impl Default for GridSearch {
    fn default() -> Self {
        Self {
            points_per_angle: 24,
            step_tolerance: 1e-7,
        }
    }
}

pub fn max_info_corr(rho: &DensityMatrix, method: MaximizationMethod) -> Result<MaxInfoCorr> {
    let t = correlation_tensor(rho)?;
    Ok(match method {
        MaximizationMethod::Analytic => max_info_corr_analytic(&t),
        MaximizationMethod::Numeric => max_info_corr_numeric(&t, GridSearch::default()),
    })
}

pub fn max_info_corr_analytic(t: &CorrelationTensor) -> MaxInfoCorr {
    let svd = svd_3x3(&t.0);
    let col = |m: &Real3, j: usize| -> Direction { std::array::from_fn(|i| m[i][j]) };
    MaxInfoCorr {
        value: svd.s[0] * svd.s[0] + svd.s[1] * svd.s[1],
        argmax_planes: PlanePair {
            a1: col(&svd.u, 0),
            a2: col(&svd.u, 1),
            b1: col(&svd.v, 0),
            b2: col(&svd.v, 1),
        },
        method: MaximizationMethod::Analytic,
    }
}

/// Euler angles (α, β, γ) of one local frame; its plane is spanned by the
/// first two columns of R(α, β, γ).
type Frame = [f64; 3];

fn frame_plane(angles: &Frame) -> (Direction, Direction) {
    let r = euler_rotation(angles[0], angles[1], angles[2]);
    (r.column(0), r.column(1))
}

fn pair_value(t: &CorrelationTensor, a: &Frame, b: &Frame) -> f64 {
    let (a1, a2) = frame_plane(a);
    let (b1, b2) = frame_plane(b);
    info_corr_from_tensor(t, &PlanePair { a1, a2, b1, b2 })
}

/// Deterministic numeric maximization of I_corr over plane pairs.
///
/// The grid covers α ∈ [0, 2π) and β ∈ [0, π] with `points_per_angle` values
/// each, per side. The third Euler angle γ only turns the frame inside its
/// own plane, which leaves I_corr unchanged, so the grid fixes γ = 0 and the
/// descent stage still moves it. Grid cells are scanned in parallel; the
/// reduction keeps the largest value and breaks ties by the lexicographically
/// smallest grid index, so the result does not depend on thread count.
pub fn max_info_corr_numeric(t: &CorrelationTensor, search: GridSearch) -> MaxInfoCorr {
    use std::f64::consts::PI;
    let k = search.points_per_angle.max(2);
    let alphas: Vec<f64> = (0..k).map(|i| 2.0 * PI * i as f64 / k as f64).collect();
    let betas: Vec<f64> = (0..k).map(|i| PI * i as f64 / (k - 1) as f64).collect();
    let frames: Vec<Frame> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| [a, b, 0.0]))
        .collect();
    // Projector onto each plane: value = ⟨P_A, T·P_B·Tᵀ⟩.
    let projectors: Vec<Real3> = frames
        .iter()
        .map(|f| {
            let (u, v) = frame_plane(f);
            std::array::from_fn(|i| std::array::from_fn(|j| u[i] * u[j] + v[i] * v[j]))
        })
        .collect();
    let m = &t.0;
    let sandwiches: Vec<Real3> = projectors
        .iter()
        .map(|p| {
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..3)
                        .flat_map(|a| (0..3).map(move |b| (a, b)))
                        .map(|(a, b)| m[i][a] * p[a][b] * m[j][b])
                        .sum()
                })
            })
        })
        .collect();

    let (best_value, best_idx) = (0..frames.len())
        .into_par_iter()
        .map(|ia| {
            let pa = &projectors[ia];
            let mut best = (f64::NEG_INFINITY, usize::MAX);
            for (ib, s) in sandwiches.iter().enumerate() {
                let v: f64 = (0..3)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .map(|(i, j)| pa[i][j] * s[i][j])
                    .sum();
                if v > best.0 {
                    best = (v, ia * frames.len() + ib);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |x, y| {
                if x.0 > y.0 || (x.0 == y.0 && x.1 < y.1) {
                    x
                } else {
                    y
                }
            },
        );
    let _ = best_value;
    let mut angles: [f64; 6] = {
        let fa = frames[best_idx / frames.len()];
        let fb = frames[best_idx % frames.len()];
        [fa[0], fa[1], fa[2], fb[0], fb[1], fb[2]]
    };
    let eval = |x: &[f64; 6]| pair_value(t, &[x[0], x[1], x[2]], &[x[3], x[4], x[5]]);
    let mut value = eval(&angles);

    // Compass search: try ± step along each coordinate in fixed order, halve
    // the step when no move improves.
    let mut step = PI / k as f64;
    while step >= search.step_tolerance {
        let mut improved = false;
        for c in 0..6 {
            for dir in [1.0, -1.0] {
                let mut trial = angles;
                trial[c] += dir * step;
                let v = eval(&trial);
                if v > value {
                    value = v;
                    angles = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let (a1, a2) = frame_plane(&[angles[0], angles[1], angles[2]]);
    let (b1, b2) = frame_plane(&[angles[3], angles[4], angles[5]]);
    MaxInfoCorr {
        value,
        argmax_planes: PlanePair { a1, a2, b1, b2 },
        method: MaximizationMethod::Numeric,
    }
}

/// CHSH summary of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellReport {
    pub tensor: CorrelationTensor,
    /// M = s₁² + s₂².
    pub m: f64,
    /// 2√M, the largest CHSH value reachable with spin measurements.
    pub chsh_max: f64,
    /// M > 1.
    pub violates_bell: bool,
    /// max I_corr > 1.
    pub entangled_by_criterion: bool,
    /// Maximal correlation information over plane pairs.
    pub max_info_corr: f64,
}

/// Both verdicts use strict inequalities with a margin of
/// [`crate::tolerance::Tolerances::bell_boundary`], so rounding noise on
/// boundary states (such as pure product states, M = 1) cannot flip them.
pub fn chsh_and_verdict(rho: &DensityMatrix) -> Result<BellReport> {
    let tensor = correlation_tensor(rho)?;
    let s = tensor.singular_values();
    let m = s[0] * s[0] + s[1] * s[1];
    let best = max_info_corr_analytic(&tensor);
    // Evaluate I_corr on the optimal planes rather than reusing M.
    let max_info_corr = info_corr_from_tensor(&tensor, &best.argmax_planes);
    let margin = TOL.bell_boundary;
    Ok(BellReport {
        tensor,
        m,
        chsh_max: 2.0 * m.sqrt(),
        violates_bell: m > 1.0 + margin,
        entangled_by_criterion: max_info_corr > 1.0 + margin,
        max_info_corr,
    })
}

/// |ψ⁻⟩ = (|01⟩ − |10⟩)/√2 with |0⟩ spin-up along z.
pub fn singlet() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::from_pure(&[z, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), z])
        .expect("normalized")
}

/// w·|ψ⁻⟩⟨ψ⁻| + (1 − w)·1/4.
pub fn werner(w: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidParameter(format!("Werner weight {w} outside [0, 1]")));
    }
    let mixed = ComplexMatrix::identity(4).scale_real((1.0 - w) / 4.0);
    DensityMatrix::new(&singlet().matrix().scale_real(w) + &mixed)
}

/// Pure product state of two spins with unit information vectors n₁, n₂.
pub fn product_state(n1: &Direction, n2: &Direction) -> Result<DensityMatrix> {
    check_unit(n1)?;
    check_unit(n2)?;
    let id = ComplexMatrix::identity(2);
    let half = |n: &Direction| (&id + &spin_along(n)).scale_real(0.5);
    DensityMatrix::new(kron(&half(n1), &half(n2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const NEG_X: Direction = [-1.0, 0.0, 0.0];

    fn assert_tensor(t: &CorrelationTensor, expected: Real3, tol: f64) {
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.0[i][j] - expected[i][j]).abs() < tol, "T[{i}][{j}] = {}", t.0[i][j]);
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let t = correlation_tensor(&singlet()).unwrap();
        assert_tensor(&t, [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]], 1e-12);
        let prod = product_state(&X, &NEG_X).unwrap();
        let t = correlation_tensor(&prod).unwrap();
        assert_tensor(&t, [[-1.0, 0.0, 0.0], [0.0; 3], [0.0; 3]], 1e-12);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert_tensor(&correlation_tensor(&mixed).unwrap(), [[0.0; 3]; 3], 1e-15);
        assert_eq!(
            correlation_tensor(&DensityMatrix::maximally_mixed(2).unwrap()),
            Err(Error::WrongDimension { expected: 4, found: 2 })
        );
    }

    #[test]
    fn product_tensor_is_outer_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..20 {
            let n1 = sampling::random_unit_vector3(&mut rng);
            let n2 = sampling::random_unit_vector3(&mut rng);
            let t = correlation_tensor(&product_state(&n1, &n2).unwrap()).unwrap();
            let outer: Real3 = std::array::from_fn(|i| std::array::from_fn(|j| n1[i] * n2[j]));
            assert_tensor(&t, outer, 1e-12);
            let s = t.singular_values();
            assert!((s[0] - 1.0).abs() < 1e-12 && s[1] < 1e-7);
        }
    }

    #[test]
    fn joint_info_examples() {
        let prod = product_state(&X, &NEG_X).unwrap();
        assert!((joint_info(&prod, &X, &X).unwrap() - 1.0).abs() < 1e-12);
        let s = singlet();
        assert!(joint_info(&s, &X, &Y).unwrap() < 1e-12);
        assert!((joint_info(&s, &X, &X).unwrap() - 1.0).abs() < 1e-12);
        assert!((joint_info(&s, &Y, &Y).unwrap() - 1.0).abs() < 1e-12);
        assert!(joint_info(&s, &Y, &X).unwrap() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(joint_info(&mixed, &Z, &Y).unwrap() < 1e-15);
        assert!(matches!(
            joint_info(&s, &[1.0, 1.0, 0.0], &X),
            Err(Error::InvalidDirection(_))
        ));
    }

    #[test]
    fn joint_info_matches_tensor_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..50 {
            let rho = sampling::random_density(4, rng.random_range(1..=4), &mut rng);
            let t = correlation_tensor(&rho).unwrap();
            let a = sampling::random_unit_vector3(&mut rng);
            let b = sampling::random_unit_vector3(&mut rng);
            let e = t.correlation(&a, &b);
            assert!((joint_info(&rho, &a, &b).unwrap() - e * e).abs() < 1e-12);
        }
    }

    #[test]
    fn info_corr_examples() {
        let canonical = PlanePair::canonical();
        assert!((info_corr(&singlet(), &canonical).unwrap() - 2.0).abs() < 1e-12);
        let prod = product_state(&X, &NEG_X).unwrap();
        assert!((info_corr(&prod, &canonical).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(info_corr(&mixed, &canonical).unwrap().abs() < 1e-15);
    }

    #[test]
    fn plane_pair_validation() {
        assert!(PlanePair::new(X, Y, X, Y).is_ok());
        assert!(PlanePair::new(X, X, X, Y).is_err());
        assert!(PlanePair::new([2.0, 0.0, 0.0], Y, X, Y).is_err());
    }

    #[test]
    fn product_state_knowledge_is_exclusive() {
        // Certainty about one canonical joint proposition leaves nothing for
        // the other three.
        for (n1, n2) in [(X, X), (X, NEG_X), (Y, X), (Y, [0.0, -1.0, 0.0])] {
            let rho = product_state(&n1, &n2).unwrap();
            let infos = [
                joint_info(&rho, &X, &X).unwrap(),
                joint_info(&rho, &X, &Y).unwrap(),
                joint_info(&rho, &Y, &X).unwrap(),
                joint_info(&rho, &Y, &Y).unwrap(),
            ];
            let certain = infos.iter().filter(|&&v| (v - 1.0).abs() < 1e-12).count();
            assert_eq!(certain, 1);
            assert!(infos.iter().filter(|&&v| v < 1e-10).count() == 3);
        }
    }

    #[test]
    fn max_info_corr_examples() {
        let s = singlet();
        for method in [MaximizationMethod::Analytic, MaximizationMethod::Numeric] {
            let best = max_info_corr(&s, method).unwrap();
            assert!((best.value - 2.0).abs() < 1e-6, "{method:?}");
        }
        let w = 0.6;
        let rho = werner(w).unwrap();
        let a = max_info_corr(&rho, MaximizationMethod::Analytic).unwrap();
        let n = max_info_corr(&rho, MaximizationMethod::Numeric).unwrap();
        assert!((a.value - 2.0 * w * w).abs() < 1e-12);
        assert!((n.value - 2.0 * w * w).abs() < 1e-6);
    }

    #[test]
    fn product_states_reach_exactly_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..10 {
            let n1 = sampling::random_unit_vector3(&mut rng);
            let n2 = sampling::random_unit_vector3(&mut rng);
            let rho = product_state(&n1, &n2).unwrap();
            let n = max_info_corr(&rho, MaximizationMethod::Numeric).unwrap();
            assert!((n.value - 1.0).abs() < 1e-6);
            let a = max_info_corr(&rho, MaximizationMethod::Analytic).unwrap();
            assert!((a.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn argmax_planes_attain_the_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..10 {
            let rho = sampling::random_density(4, 2, &mut rng);
            for method in [MaximizationMethod::Analytic, MaximizationMethod::Numeric] {
                let best = max_info_corr(&rho, method).unwrap();
                let p = best.argmax_planes;
                let checked = PlanePair::new(p.a1, p.a2, p.b1, p.b2).unwrap();
                assert!((info_corr(&rho, &checked).unwrap() - best.value).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn in_plane_rotation_does_not_change_info_corr() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let rho = sampling::random_density(4, 3, &mut rng);
        let t = correlation_tensor(&rho).unwrap();
        let (a, b) = ([0.3, 1.1, 0.0], [2.0, 0.4, 0.0]);
        let base = pair_value(&t, &a, &b);
        for gamma in [0.5, 1.7, 4.0] {
            let v = pair_value(&t, &[a[0], a[1], gamma], &[b[0], b[1], -gamma]);
            assert!((v - base).abs() < 1e-12);
        }
    }

    #[test]
    fn numeric_matches_analytic_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for _ in 0..20 {
            let rho = sampling::random_density(4, rng.random_range(1..=4), &mut rng);
            let a = max_info_corr(&rho, MaximizationMethod::Analytic).unwrap();
            let n = max_info_corr(&rho, MaximizationMethod::Numeric).unwrap();
            assert!((a.value - n.value).abs() < 1e-6, "{} vs {}", a.value, n.value);
            assert!(n.value <= a.value + 1e-12);
        }
    }

    #[test]
    fn local_unitaries_leave_the_maximum_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        for _ in 0..10 {
            let rho = sampling::random_density(4, 2, &mut rng);
            let u = kron(
                &sampling::random_unitary(2, &mut rng),
                &sampling::random_unitary(2, &mut rng),
            );
            let moved = rho.transform(&u).unwrap();
            for method in [MaximizationMethod::Analytic, MaximizationMethod::Numeric] {
                let a = max_info_corr(&rho, method).unwrap().value;
                let b = max_info_corr(&moved, method).unwrap().value;
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn numeric_search_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        let rho = sampling::random_density(4, 2, &mut rng);
        let a = max_info_corr(&rho, MaximizationMethod::Numeric).unwrap();
        let b = max_info_corr(&rho, MaximizationMethod::Numeric).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verdict_examples() {
        let r = chsh_and_verdict(&singlet()).unwrap();
        assert!((r.m - 2.0).abs() < 1e-12);
        assert!((r.chsh_max - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(r.violates_bell && r.entangled_by_criterion);

        let r = chsh_and_verdict(&product_state(&X, &NEG_X).unwrap()).unwrap();
        assert!((r.m - 1.0).abs() < 1e-12);
        assert!((r.chsh_max - 2.0).abs() < 1e-12);
        assert!(!r.violates_bell && !r.entangled_by_criterion);

        let r = chsh_and_verdict(&werner(0.6).unwrap()).unwrap();
        assert!((r.m - 0.72).abs() < 1e-12);
        assert!(!r.violates_bell && !r.entangled_by_criterion);
        let r = chsh_and_verdict(&werner(0.8).unwrap()).unwrap();
        assert!((r.m - 1.28).abs() < 1e-12);
        assert!(r.violates_bell && r.entangled_by_criterion);
    }

    #[test]
    fn verdicts_agree_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        for _ in 0..200 {
            let rho = sampling::random_density(4, rng.random_range(1..=4), &mut rng);
            let r = chsh_and_verdict(&rho).unwrap();
            assert_eq!(r.violates_bell, r.entangled_by_criterion);
        }
    }

    #[test]
    fn werner_validation() {
        assert!(werner(1.5).is_err());
        assert!(werner(-0.1).is_err());
    }
}

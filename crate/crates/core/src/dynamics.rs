//! Precession of the information vector.
//!
//! With ħ = 1 and H = ½(Tr H·1 + u·σ) the Liouville equation
//! i dρ/dt = [H, ρ] becomes di/dt = u × i for the information vector, with
//! uⱼ = Tr(H σⱼ). The trace of H only adds a global phase.

use std::fmt;
use std::sync::Arc;

use crate::matkernel::{cross3, dot3, sigma, unitary_exp, ComplexMatrix};
use crate::qstate::{DensityMatrix, InfoVector};
use crate::tolerance::TOL;
use crate::{Error, Result};

pub type RotationAxis = [f64; 3];

/// A Hermitian 2×2 Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian2(ComplexMatrix);

impl Hamiltonian2 {
    pub fn new(h: ComplexMatrix) -> Result<Self> {
        if h.rows() != 2 || h.cols() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                found: h.rows().max(h.cols()),
            });
        }
        let deviation = h.hermitian_deviation();
        if deviation > TOL.identity {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(h))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// H + c·1.
    pub fn shifted(&self, c: f64) -> Self {
        Self(&self.0 + &ComplexMatrix::identity(2).scale_real(c))
    }
}

/// uⱼ = Tr(H σⱼ).
pub fn axis_from_hamiltonian(h: &Hamiltonian2) -> RotationAxis {
    std::array::from_fn(|j| (&h.0 * &sigma(j)).trace().re)
}

/// H = ½(trace·1 + u·σ).
pub fn hamiltonian_from_axis(u: RotationAxis, trace: f64) -> Result<Hamiltonian2> {
    check_axis(&u)?;
    let mut m = ComplexMatrix::identity(2).scale_real(trace);
    for (j, &c) in u.iter().enumerate() {
        m = &m + &sigma(j).scale_real(c);
    }
    Hamiltonian2::new(m.scale_real(0.5))
}

fn check_axis(u: &RotationAxis) -> Result<()> {
    if u.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("non-finite rotation axis {u:?}")))
    }
}

/// Rotation axis as a function of time.
#[derive(Clone)]
pub enum AxisSchedule {
    Constant(RotationAxis),
    /// `axes[k]` acts on `[breakpoints[k], breakpoints[k + 1])`; the last axis
    /// holds from its breakpoint on, the first also before it.
    Piecewise {
        breakpoints: Vec<f64>,
        axes: Vec<RotationAxis>,
    },
    Function(Arc<dyn Fn(f64) -> RotationAxis + Send + Sync>),
}

impl fmt::Debug for AxisSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(u) => f.debug_tuple("Constant").field(u).finish(),
            Self::Piecewise { breakpoints, axes } => f
                .debug_struct("Piecewise")
                .field("breakpoints", breakpoints)
                .field("axes", axes)
                .finish(),
            Self::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl AxisSchedule {
    pub fn piecewise(breakpoints: Vec<f64>, axes: Vec<RotationAxis>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != axes.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} breakpoints for {} axes",
                breakpoints.len(),
                axes.len()
            )));
        }
        if !breakpoints.iter().all(|b| b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("breakpoints must increase strictly".into()));
        }
        axes.iter().try_for_each(check_axis)?;
        Ok(Self::Piecewise { breakpoints, axes })
    }

    pub fn at(&self, t: f64) -> RotationAxis {
        match self {
            Self::Constant(u) => *u,
            Self::Piecewise { breakpoints, axes } => {
                let k = breakpoints.partition_point(|&b| b <= t);
                axes[k.saturating_sub(1)]
            }
            Self::Function(f) => f(t),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant(_))
    }
}

/// Sampled states i(tₖ) with t₀ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<InfoVector>,
}

impl Trajectory {
    pub fn final_state(&self) -> InfoVector {
        *self.states.last().expect("trajectory holds the initial state")
    }

    /// Largest |‖i(t)‖² − ‖i(0)‖²| along the trajectory.
    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.states[0].norm_sqr();
        self.states
            .iter()
            .map(|s| (s.norm_sqr() - n0).abs())
            .fold(0.0, f64::max)
    }
}

fn rhs(u: &RotationAxis, i: &[f64; 3]) -> [f64; 3] {
    cross3(u, i)
}

fn rk4_step(schedule: &AxisSchedule, t: f64, i: [f64; 3], h: f64) -> [f64; 3] {
    let add = |a: [f64; 3], b: [f64; 3], s: f64| -> [f64; 3] { std::array::from_fn(|k| a[k] + s * b[k]) };
    let um = schedule.at(t + 0.5 * h);
    // A piecewise axis is sampled once per step so that rounding at a
    // breakpoint cannot pull in the neighbouring segment.
    let (u0, u1) = match schedule {
        AxisSchedule::Piecewise { .. } => (um, um),
        _ => (schedule.at(t), schedule.at(t + h)),
    };
    let k1 = rhs(&u0, &i);
    let k2 = rhs(&um, &add(i, k1, 0.5 * h));
    let k3 = rhs(&um, &add(i, k2, 0.5 * h));
    let k4 = rhs(&u1, &add(i, k3, h));
    std::array::from_fn(|k| i[k] + h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]))
}

/// Integrates di/dt = u(t) × i from 0 to `t` with fixed-step RK4.
///
/// When `dt` does not divide `t` a shorter last step lands exactly on `t`.
pub fn evolve_info(i0: InfoVector, schedule: &AxisSchedule, t: f64, dt: f64) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("end time {t} must be non-negative")));
    }
    let full = (t / dt).floor() as usize;
    let rest = t - full as f64 * dt;
    let mut times = Vec::with_capacity(full + 2);
    let mut states = Vec::with_capacity(full + 2);
    let mut state = i0.to_array();
    times.push(0.0);
    states.push(i0);
    for k in 0..full {
        let t0 = k as f64 * dt;
        state = rk4_step(schedule, t0, state, dt);
        times.push(t0 + dt);
        states.push(InfoVector::from_array(state));
    }
    if rest > 1e-12 * dt {
        state = rk4_step(schedule, full as f64 * dt, state, rest);
        times.push(t);
        states.push(InfoVector::from_array(state));
    }
    Ok(Trajectory { times, states })
}

/// ρ(t) = U ρ₀ U† with U = exp(−iHt).
pub fn evolve_exact(rho0: &DensityMatrix, h: &Hamiltonian2, t: f64) -> Result<DensityMatrix> {
    if rho0.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: rho0.dim(),
        });
    }
    rho0.transform(&unitary_exp(&h.0, t)?)
}

/// Reference solution for a time-dependent axis: a product of exponentials
/// over substeps of length at most `dt`, each using the axis at the
/// substep's midpoint.
pub fn evolve_exact_schedule(
    rho0: &DensityMatrix,
    schedule: &AxisSchedule,
    t: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !(dt.is_finite() && dt > 0.0 && t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("need dt > 0 and t ≥ 0, got {dt}, {t}")));
    }
    let steps = ((t / dt).ceil() as usize).max(1);
    let h = t / steps as f64;
    let mut u_total = ComplexMatrix::identity(2);
    for k in 0..steps {
        let mid = (k as f64 + 0.5) * h;
        let ham = hamiltonian_from_axis(schedule.at(mid), 0.0)?;
        u_total = &unitary_exp(&ham.0, h)? * &u_total;
    }
    rho0.transform(&u_total)
}

/// T = 2π/‖u‖, the time of one full turn of the information vector.
pub fn debroglie_period(u: RotationAxis) -> Result<f64> {
    check_axis(&u)?;
    let norm = dot3(&u, &u).sqrt();
    if norm < TOL.zero_field {
        return Err(Error::ZeroField);
    }
    Ok(2.0 * std::f64::consts::PI / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex64;
    use crate::qstate::{density_from_info, info_from_density};
    use crate::sampling;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn half_sigma(axes: &[(usize, f64)]) -> Hamiltonian2 {
        let m = axes
            .iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, &(j, c)| &acc + &sigma(j).scale_real(0.5 * c));
        Hamiltonian2::new(m).unwrap()
    }

    #[test]
    fn axis_examples() {
        assert_eq!(axis_from_hamiltonian(&half_sigma(&[(2, 1.0)])), [0.0, 0.0, 1.0]);
        let id = Hamiltonian2::new(ComplexMatrix::identity(2)).unwrap();
        assert_eq!(axis_from_hamiltonian(&id), [0.0; 3]);
        let u = axis_from_hamiltonian(&half_sigma(&[(0, 1.0), (2, 1.0)]));
        assert_eq!(u, [1.0, 0.0, 1.0]);
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        let mut m = sigma(0);
        m[(0, 1)] = Complex64::new(1.0, 0.1);
        assert!(matches!(Hamiltonian2::new(m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            Hamiltonian2::new(ComplexMatrix::identity(3)),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn axis_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        for _ in 0..50 {
            let h = Hamiltonian2::new(sampling::random_hermitian(2, &mut rng)).unwrap();
            let u = axis_from_hamiltonian(&h);
            let back = hamiltonian_from_axis(u, h.matrix().trace().re).unwrap();
            assert!(back.matrix().max_abs_diff(h.matrix()) < 1e-12);
        }
    }

    #[test]
    fn evolve_info_examples() {
        let i0 = InfoVector::new(0.3, -0.4, 0.5);
        let still = evolve_info(i0, &AxisSchedule::Constant([0.0; 3]), 5.0, 1e-3).unwrap();
        assert_eq!(still.final_state(), i0);

        let along = InfoVector::new(0.0, 0.6, 0.8);
        let traj = evolve_info(along, &AxisSchedule::Constant([0.0, 1.5, 2.0]), 3.0, 1e-3).unwrap();
        assert!(traj.final_state().max_abs_diff(along) < 1e-15);

        let traj = evolve_info(
            InfoVector::new(1.0, 0.0, 0.0),
            &AxisSchedule::Constant([0.0, 0.0, 1.0]),
            PI / 2.0,
            1e-3,
        )
        .unwrap();
        assert!(traj.final_state().max_abs_diff(InfoVector::new(0.0, 1.0, 0.0)) < 1e-8);
        assert_eq!(*traj.times.last().unwrap(), PI / 2.0);
    }

    #[test]
    fn evolve_info_rejects_bad_steps() {
        let s = AxisSchedule::Constant([0.0, 0.0, 1.0]);
        let i0 = InfoVector::new(1.0, 0.0, 0.0);
        assert!(evolve_info(i0, &s, 1.0, 0.0).is_err());
        assert!(evolve_info(i0, &s, -1.0, 0.1).is_err());
        assert!(evolve_info(i0, &s, 1.0, f64::NAN).is_err());
        assert_eq!(evolve_info(i0, &s, 0.0, 0.1).unwrap().states, vec![i0]);
    }

    #[test]
    fn evolve_exact_examples() {
        let plus_x = density_from_info(InfoVector::new(1.0, 0.0, 0.0)).unwrap();
        let zero = Hamiltonian2::new(ComplexMatrix::zeros(2, 2)).unwrap();
        let same = evolve_exact(&plus_x, &zero, 7.0).unwrap();
        assert!(same.matrix().max_abs_diff(plus_x.matrix()) < 1e-15);

        let minus_x = density_from_info(InfoVector::new(-1.0, 0.0, 0.0)).unwrap();
        let flipped = evolve_exact(&plus_x, &half_sigma(&[(2, 1.0)]), PI).unwrap();
        assert!(flipped.matrix().max_abs_diff(minus_x.matrix()) < 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(137);
        for _ in 0..20 {
            let rho = sampling::random_density(2, 1, &mut rng);
            let h = Hamiltonian2::new(sampling::random_hermitian(2, &mut rng)).unwrap();
            let t = rng.random_range(0.0..10.0);
            let there = evolve_exact(&rho, &h, t).unwrap();
            assert!((there.purity() - rho.purity()).abs() < 1e-12);
            let back = evolve_exact(&there, &h, -t).unwrap();
            assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-10);
        }
    }

    #[test]
    fn trace_term_is_irrelevant() {
        let mut rng = ChaCha8Rng::seed_from_u64(139);
        for _ in 0..20 {
            let rho = sampling::random_density(2, 2, &mut rng);
            let h = Hamiltonian2::new(sampling::random_hermitian(2, &mut rng)).unwrap();
            let c = rng.random_range(-5.0..5.0);
            let shifted = h.shifted(c);
            let (u, v) = (axis_from_hamiltonian(&h), axis_from_hamiltonian(&shifted));
            // x and y come from off-diagonal entries, which the shift leaves
            // untouched; z is a difference of shifted diagonal entries.
            assert_eq!(u[..2], v[..2]);
            assert!((u[2] - v[2]).abs() < 1e-12);
            let a = evolve_exact(&rho, &h, 2.5).unwrap();
            let b = evolve_exact(&rho, &shifted, 2.5).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn ode_agrees_with_unitary_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(149);
        for _ in 0..10 {
            let i0 = sampling::random_mixed_info_vector(&mut rng);
            let h = Hamiltonian2::new(sampling::random_hermitian(2, &mut rng)).unwrap();
            let t = rng.random_range(0.0..10.0);
            let exact = evolve_exact(&density_from_info(i0).unwrap(), &h, t).unwrap();
            let expected = info_from_density(&exact).unwrap();
            let schedule = AxisSchedule::Constant(axis_from_hamiltonian(&h));
            let traj = evolve_info(i0, &schedule, t, 1e-3).unwrap();
            assert!(traj.final_state().max_abs_diff(expected) < 1e-6);
        }
    }

    #[test]
    fn conservation_along_trajectories() {
        let mut rng = ChaCha8Rng::seed_from_u64(151);
        for _ in 0..10 {
            let i0 = sampling::random_pure_info_vector(&mut rng);
            let u = sampling::random_unit_vector3(&mut rng).map(|c| c * rng.random_range(0.1..3.0));
            let norm = dot3(&u, &u).sqrt();
            let traj = evolve_info(i0, &AxisSchedule::Constant(u), 10.0, 1e-3).unwrap();
            assert!(traj.max_norm_drift() < 1e-8);
            let proj0 = dot3(&i0.to_array(), &u) / norm;
            for s in &traj.states {
                assert!((dot3(&s.to_array(), &u) / norm - proj0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn period_examples() {
        assert!((debroglie_period([0.0, 0.0, 1.0]).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((debroglie_period([0.0, 0.0, 2.0]).unwrap() - PI).abs() < 1e-15);
        let u = [0.3, -1.2, 0.7];
        let doubled = u.map(|c| 2.0 * c);
        assert_eq!(debroglie_period(doubled).unwrap(), debroglie_period(u).unwrap() / 2.0);
        assert_eq!(debroglie_period([0.0; 3]), Err(Error::ZeroField));
        assert_eq!(debroglie_period([1e-15, 0.0, 0.0]), Err(Error::ZeroField));
    }

    #[test]
    fn one_period_is_a_full_turn() {
        let mut rng = ChaCha8Rng::seed_from_u64(157);
        for _ in 0..10 {
            let i0 = sampling::random_mixed_info_vector(&mut rng);
            let u = sampling::random_unit_vector3(&mut rng).map(|c| c * rng.random_range(0.5..3.0));
            let period = debroglie_period(u).unwrap();
            let traj = evolve_info(i0, &AxisSchedule::Constant(u), period, 1e-3).unwrap();
            assert!(traj.final_state().max_abs_diff(i0) < 1e-7);
        }
    }

    #[test]
    fn piecewise_schedule_matches_product_of_exponentials() {
        let schedule = AxisSchedule::piecewise(
            vec![0.0, 1.0, 2.5],
            vec![[0.0, 0.0, 1.0], [1.0, 0.5, 0.0], [-0.3, 0.2, 2.0]],
        )
        .unwrap();
        assert_eq!(schedule.at(-1.0), [0.0, 0.0, 1.0]);
        assert_eq!(schedule.at(1.0), [1.0, 0.5, 0.0]);
        assert_eq!(schedule.at(9.0), [-0.3, 0.2, 2.0]);
        let i0 = InfoVector::new(0.6, 0.0, 0.8);
        // Breakpoints fall on grid points so RK4 never straddles a jump.
        let traj = evolve_info(i0, &schedule, 4.0, 1e-3).unwrap();
        let exact =
            evolve_exact_schedule(&density_from_info(i0).unwrap(), &schedule, 4.0, 1e-4).unwrap();
        let expected = info_from_density(&exact).unwrap();
        assert!(traj.final_state().max_abs_diff(expected) < 1e-6);
    }

    #[test]
    fn smooth_schedule_matches_product_of_exponentials() {
        let schedule = AxisSchedule::Function(Arc::new(|t: f64| [t.cos(), t.sin(), 0.5]));
        let i0 = InfoVector::new(0.0, 0.0, 1.0);
        let traj = evolve_info(i0, &schedule, 3.0, 1e-3).unwrap();
        let exact =
            evolve_exact_schedule(&density_from_info(i0).unwrap(), &schedule, 3.0, 1e-4).unwrap();
        let expected = info_from_density(&exact).unwrap();
        assert!(traj.final_state().max_abs_diff(expected) < 1e-6);
        assert!(traj.max_norm_drift() < 1e-8);
    }

    #[test]
    fn piecewise_validation() {
        assert!(AxisSchedule::piecewise(vec![], vec![]).is_err());
        assert!(AxisSchedule::piecewise(vec![0.0, 0.0], vec![[0.0; 3]; 2]).is_err());
        assert!(AxisSchedule::piecewise(vec![0.0], vec![[f64::NAN, 0.0, 0.0]]).is_err());
    }
}

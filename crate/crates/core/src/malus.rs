//! Rotation of the information vector under a change of one experimental
//! parameter θ, and the probability law it implies.
//!
//! Composing parameter changes forces the rotation block
//! `[[f, −g], [g, f]]` with `f(θ + dθ) = f(θ)f(dθ) − g(θ)g(dθ)`, which reduces
//! to `df/dθ = −n√(1 − f²)`, `f(0) = 1`. [`solve_f_ode`] integrates that
//! equation numerically; the closed form `f = cos nθ` serves as the oracle.

use std::f64::consts::PI;

use crate::matkernel::{cross3, dot3, ComplexMatrix, Real3};
use crate::qstate::{density_from_info, InfoVector};
use crate::tolerance::TOL;
use crate::{Error, Result};

/// Winding constant n of the rotation law; must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MalusParameter(f64);

impl MalusParameter {
    /// Spin-½ particles (electrons, neutrinos).
    pub const SPIN_HALF: MalusParameter = MalusParameter(0.5);
    /// Photon polarization.
    pub const PHOTON: MalusParameter = MalusParameter(1.0);
    pub const GRAVITON: MalusParameter = MalusParameter(2.0);

    pub fn new(n: f64) -> Result<Self> {
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "winding constant must be positive, got {n}"
            )));
        }
        Ok(Self(n))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Proper rotation of information space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix3(Real3);

impl RotationMatrix3 {
    pub const IDENTITY: RotationMatrix3 =
        RotationMatrix3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// Accepts a matrix with RᵀR = 1 and det R = +1 within the validation
    /// tolerance.
    pub fn new(m: Real3) -> Result<Self> {
        let r = Self(m);
        let dev = r.orthogonality_error();
        let det = r.determinant();
        if dev > TOL.validation || (det - 1.0).abs() > TOL.validation {
            return Err(Error::InvalidParameter(format!(
                "not a proper rotation (orthogonality error {dev:e}, det {det})"
            )));
        }
        Ok(r)
    }

    pub fn matrix(&self) -> &Real3 {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum())
        }))
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| dot3(&self.0[i], &v))
    }

    pub fn apply_info(&self, i: InfoVector) -> InfoVector {
        InfoVector::from_array(self.apply(i.to_array()))
    }

    pub fn column(&self, j: usize) -> [f64; 3] {
        std::array::from_fn(|i| self.0[i][j])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        dot3(&m[0], &cross3(&m[1], &m[2]))
    }

    /// max |RᵀR − 1|.
    pub fn orthogonality_error(&self) -> f64 {
        let rtr = self.transpose().compose(self);
        let mut err = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                err = err.max((rtr.0[i][j] - id).abs());
            }
        }
        err
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }
}

/// Sampled solution of the rotation-law ODE.
#[derive(Debug, Clone, PartialEq)]
pub struct FSolution {
    pub theta: Vec<f64>,
    pub f: Vec<f64>,
    /// g = −f′/n, continuous through the turning points f = ±1.
    pub g: Vec<f64>,
    /// max |f(θ) − cos nθ| over the samples.
    pub max_deviation: f64,
    /// max |f² + g² − 1| over the samples.
    pub max_norm_drift: f64,
}

/// Integrate df/dθ = −n√(1 − f²), f(0) = 1, on [0, θ_max] with `steps`
/// classical RK4 steps.
///
/// The square root is branch-free only between turning points, and at
/// f = ±1 the right-hand side vanishes, so a direct scalar march would never
/// leave f(0) = 1. The integration therefore carries g = −f′/n alongside f:
/// differentiating f² + g² = 1 gives g′ = n·f, and the pair
/// (f′, g′) = (−n·g, n·f) is smooth everywhere. The sign of g at each step
/// selects the branch of the square root, which keeps g continuous.
pub fn solve_f_ode(n: MalusParameter, theta_max: f64, steps: usize) -> Result<FSolution> {
    if steps < 100 {
        return Err(Error::InvalidParameter(format!("need at least 100 steps, got {steps}")));
    }
    if !theta_max.is_finite() {
        return Err(Error::InvalidParameter("theta_max must be finite".into()));
    }
    let k = n.value();
    let h = theta_max / steps as f64;
    let mut theta = Vec::with_capacity(steps + 1);
    let mut f = Vec::with_capacity(steps + 1);
    let mut g = Vec::with_capacity(steps + 1);
    let mut state = [1.0, 0.0];
    theta.push(0.0);
    f.push(state[0]);
    g.push(state[1]);
    for s in 1..=steps {
        state = rk4_step(k, state, h);
        theta.push(h * s as f64);
        f.push(state[0]);
        g.push(state[1]);
    }
    let max_deviation = theta
        .iter()
        .zip(&f)
        .map(|(t, fv)| (fv - (k * t).cos()).abs())
        .fold(0.0, f64::max);
    let max_norm_drift = f
        .iter()
        .zip(&g)
        .map(|(a, b)| (a * a + b * b - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(FSolution {
        theta,
        f,
        g,
        max_deviation,
        max_norm_drift,
    })
}

/// Values of f at the requested angles, marching from θ = 0 with at most
/// `2π / steps_per_turn` per RK4 step. Angles may be in any order.
pub fn f_ode_at(n: MalusParameter, thetas: &[f64], steps_per_turn: usize) -> Result<Vec<f64>> {
    if steps_per_turn < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 steps per turn, got {steps_per_turn}"
        )));
    }
    let h_max = 2.0 * PI / steps_per_turn as f64;
    let mut order: Vec<usize> = (0..thetas.len()).collect();
    order.sort_by(|&a, &b| thetas[a].total_cmp(&thetas[b]));
    let mut out = vec![0.0; thetas.len()];
    // March outward from zero in both directions.
    let (neg, pos): (Vec<usize>, Vec<usize>) = order.into_iter().partition(|&i| thetas[i] < 0.0);
    for run in [pos, neg.into_iter().rev().collect()] {
        let mut at = 0.0;
        let mut state = [1.0, 0.0];
        for idx in run {
            let target = thetas[idx];
            if !target.is_finite() {
                return Err(Error::InvalidParameter("angles must be finite".into()));
            }
            let span = target - at;
            let sub = (span.abs() / h_max).ceil().max(1.0) as usize;
            let h = span / sub as f64;
            if span != 0.0 {
                for _ in 0..sub {
                    state = rk4_step(n.value(), state, h);
                }
            }
            at = target;
            out[idx] = state[0];
        }
    }
    Ok(out)
}

fn rk4_step(k: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let rhs = |[f, g]: [f64; 2]| [-k * g, k * f];
    let k1 = rhs(y);
    let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
    let k3 = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
    let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]]);
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Rotation by nθ about the first information axis:
/// `[[1, 0, 0], [0, cos nθ, −sin nθ], [0, sin nθ, cos nθ]]`.
pub fn rotation_theta(n: MalusParameter, theta: f64) -> RotationMatrix3 {
    let (s, c) = (n.value() * theta).sin_cos();
    RotationMatrix3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
}

/// Rotation for a parameter change θ₀ → θ₁; depends only on θ₁ − θ₀.
pub fn rotation_between(n: MalusParameter, theta0: f64, theta1: f64) -> RotationMatrix3 {
    rotation_theta(n, theta1 - theta0)
}

/// p = cos²(nθ/2).
pub fn malus_probability(n: MalusParameter, theta: f64) -> f64 {
    let c = (n.value() * theta / 2.0).cos();
    (c * c).clamp(0.0, 1.0)
}

/// Rotation about the third axis, `[[c, −s, 0], [s, c, 0], [0, 0, 1]]`.
pub fn rotation_z(angle: f64) -> RotationMatrix3 {
    let (s, c) = angle.sin_cos();
    RotationMatrix3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

/// Rotation about the second axis, `[[c, 0, s], [0, 1, 0], [−s, 0, c]]`.
pub fn rotation_y(angle: f64) -> RotationMatrix3 {
    let (s, c) = angle.sin_cos();
    RotationMatrix3([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
}

/// R(α, β, γ) = R_z(α)·R_y(β)·R_z(γ) for α, γ ∈ [0, 2π), β ∈ [0, π].
pub fn euler_rotation(alpha: f64, beta: f64, gamma: f64) -> RotationMatrix3 {
    rotation_z(alpha)
        .compose(&rotation_y(beta))
        .compose(&rotation_z(gamma))
}

/// Tr(ρ_z·P_θ): spin-up along z, measured along (sin θ, 0, cos θ). Built
/// from density matrices, independent of the rotation law above.
pub fn quantum_oracle_probability(theta: f64) -> f64 {
    let up = density_from_info(InfoVector::new(0.0, 0.0, 1.0)).expect("pure state");
    let (s, c) = theta.sin_cos();
    let projector: ComplexMatrix = density_from_info(InfoVector::new(s, 0.0, c))
        .expect("unit direction")
        .into_matrix();
    up.expectation(&projector)
}

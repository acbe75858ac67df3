//! Random test objects: Hermitian matrices, Haar unitaries, states.
//!
//! Used by property tests, the acceptance suite and the numeric optimizer's
//! cross-checks. Everything takes an explicit generator so callers control
//! seeding.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matkernel::ComplexMatrix;
use crate::qstate::{DensityMatrix, InfoVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn random_complex_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..n * n).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(n, n, data).expect("n*n entries")
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_complex_matrix(n, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Haar-distributed unitary from Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_complex_matrix(n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_columns(&cols).expect("square")
}

/// Uniformly distributed unit vector in Cⁿ.
pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Density matrix G·G†/Tr(G·G†) with G of size n×rank.
pub fn random_density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let rank = rank.clamp(1, n);
    let mut acc = ComplexMatrix::zeros(n, n);
    for _ in 0..rank {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        acc = &acc + &ComplexMatrix::outer(&v, &v);
    }
    let tr = acc.trace().re;
    DensityMatrix::new(acc.scale_real(1.0 / tr)).expect("positive by construction")
}

/// Uniform point on the unit sphere.
pub fn random_unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-8 {
            return v.map(|x| x / norm);
        }
    }
}

/// Information vector of a pure qubit state (unit length).
pub fn random_pure_info_vector<R: Rng + ?Sized>(rng: &mut R) -> InfoVector {
    InfoVector::from_array(random_unit_vector3(rng))
}

/// Information vector uniformly distributed in the unit ball.
pub fn random_mixed_info_vector<R: Rng + ?Sized>(rng: &mut R) -> InfoVector {
    let dir = random_unit_vector3(rng);
    let r = rng.random::<f64>().cbrt();
    InfoVector::from_array(dir.map(|x| x * r))
}

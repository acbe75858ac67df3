//! Complete sets of mutually unbiased bases (MUBs).
//!
//! Odd prime powers use the quadratic character construction over GF(n).
//! Powers of two are built from the n²−1 Pauli products, split into n+1
//! classes of n−1 commuting operators; each class has a joint eigenbasis and
//! distinct classes give unbiased bases. The class split comes from the
//! symmetric trace form tr(s·xⁱ·xʲ) of GF(2ᵐ). In every case
//! [`verify_mub`] is the judge of the result.

mod galois;

pub use galois::{GaloisField, GfElement};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::matkernel::{canonical_phase, kron, sigma, ComplexMatrix};
use crate::tolerance::TOL;
use crate::{Error, Result};

/// Dimensions for which [`mub_construct`] builds a complete set.
pub const SUPPORTED_DIMS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

/// A family of orthonormal bases in dimension `dim`; each basis is a matrix
/// whose columns are the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    bases: Vec<ComplexMatrix>,
}

impl MubSet {
    /// Wrap bases of a common dimension. Unbiasedness is not checked here;
    /// use [`verify_mub`].
    pub fn new(bases: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = bases.first() else {
            return Err(Error::ShapeMismatch("empty basis family".into()));
        };
        let dim = first.rows();
        if let Some(b) = bases.iter().find(|b| b.rows() != dim || b.cols() != dim) {
            return Err(Error::ShapeMismatch(format!(
                "basis of shape {}x{} in a dimension-{dim} family",
                b.rows(),
                b.cols()
            )));
        }
        Ok(Self { dim, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }

    pub fn into_bases(self) -> Vec<ComplexMatrix> {
        self.bases
    }

    /// True when the family has the n+1 members of a complete set.
    pub fn is_complete(&self) -> bool {
        self.bases.len() == self.dim + 1
    }

    /// Apply a common unitary to every basis vector.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim || u.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: u.rows(),
            });
        }
        Self::new(self.bases.iter().map(|b| u * b).collect())
    }
}

/// Worst-case deviations found by [`verify_mub`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MubVerification {
    /// max over bases of |B†B − 1| entrywise.
    pub max_orthonormality_error: f64,
    /// max over distinct bases a, b and vectors j, k of
    /// | |⟨eᵃⱼ|eᵇₖ⟩|² − 1/n |.
    pub max_unbiasedness_error: f64,
}

impl MubVerification {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_orthonormality_error < tol && self.max_unbiasedness_error < tol
    }
}

pub fn verify_mub(set: &MubSet) -> MubVerification {
    let n = set.dim;
    let target = 1.0 / n as f64;
    let max_orthonormality_error = set
        .bases
        .iter()
        .map(ComplexMatrix::unitary_deviation)
        .fold(0.0, f64::max);
    let mut max_unbiasedness_error = 0.0f64;
    for (a, ba) in set.bases.iter().enumerate() {
        let ba_dag = ba.adjoint();
        for bb in &set.bases[a + 1..] {
            let overlaps = &ba_dag * bb;
            for z in overlaps.as_slice() {
                max_unbiasedness_error = max_unbiasedness_error.max((z.norm_sqr() - target).abs());
            }
        }
    }
    MubVerification {
        max_orthonormality_error,
        max_unbiasedness_error,
    }
}

/// (p, m) with n = pᵐ, if n is a prime power.
pub fn prime_power(n: usize) -> Option<(usize, usize)> {
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut rest = n;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Complete set of n+1 mutually unbiased bases for n ∈ {2,3,4,5,7,8,9}.
///
/// The computational basis comes first. For n = 2 the order is the
/// eigenbases of σ_z, σ_x, σ_y.
pub fn mub_construct(n: usize) -> Result<MubSet> {
    if !SUPPORTED_DIMS.contains(&n) {
        let reason = match prime_power(n) {
            _ if n == 6 => "a complete set of mutually unbiased bases in dimension 6 is an open \
                            problem: existence has not been proven for n=6"
                .to_string(),
            None if n >= 2 => format!(
                "{n} is not a prime power; existence of a complete set of mutually unbiased \
                 bases has not been proven"
            ),
            _ => format!("supported dimensions are {SUPPORTED_DIMS:?}"),
        };
        return Err(Error::UnsupportedDimension { dim: n, reason });
    }
    let (p, m) = prime_power(n).expect("supported dimensions are prime powers");
    let field = GaloisField::new(p as u32, m)?;
    let set = if p == 2 {
        pauli_class_bases(&field)?
    } else {
        quadratic_character_bases(&field)?
    };
    let check = verify_mub(&set);
    if !check.passes(TOL.validation) {
        return Err(Error::InvalidParameter(format!(
            "construction for n={n} failed verification: {check:?}"
        )));
    }
    Ok(set)
}

/// (v⁽ᵃ⁾ₖ)ₓ = n^{−1/2}·ω^{tr(a·x² + k·x)}, ω = e^{2πi/p}, for odd p.
fn quadratic_character_bases(field: &GaloisField) -> Result<MubSet> {
    let n = field.order();
    let p = field.characteristic() as f64;
    let amp = 1.0 / (n as f64).sqrt();
    let mut bases = vec![ComplexMatrix::identity(n)];
    for a in field.elements() {
        let columns: Vec<Vec<Complex64>> = field
            .elements()
            .map(|k| {
                let mut v: Vec<Complex64> = field
                    .elements()
                    .map(|x| {
                        let x2 = field.mul(&x, &x);
                        let arg = field.add(&field.mul(&a, &x2), &field.mul(&k, &x));
                        let phase = 2.0 * PI * field.trace(&arg) as f64 / p;
                        Complex64::from_polar(amp, phase)
                    })
                    .collect();
                canonical_phase(&mut v);
                v
            })
            .collect();
        bases.push(ComplexMatrix::from_columns(&columns)?);
    }
    MubSet::new(bases)
}

/// Binary symplectic vector (a | b) naming the Pauli product ⊗_q P(a_q, b_q)
/// with P(0,0)=1, P(1,0)=X, P(0,1)=Z, P(1,1)=Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliLabel {
    pub x: Vec<u8>,
    pub z: Vec<u8>,
}

impl PauliLabel {
    pub fn matrix(&self) -> ComplexMatrix {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&a, &b)| match (a, b) {
                (0, 0) => ComplexMatrix::identity(2),
                (1, 0) => sigma(0),
                (1, 1) => sigma(1),
                _ => sigma(2),
            })
            .reduce(|acc, m| kron(&acc, &m))
            .expect("at least one qubit")
    }

    /// Symplectic product; zero iff the two operators commute.
    pub fn symplectic(&self, other: &Self) -> u8 {
        let s: u32 = (0..self.x.len())
            .map(|q| (self.x[q] * other.z[q] + other.x[q] * self.z[q]) as u32)
            .sum();
        (s % 2) as u8
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&v| v == 0)
    }

    /// Label of the product of two Pauli operators, up to phase.
    pub fn product(&self, other: &Self) -> Self {
        Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        }
    }
}

/// Generators of the n+1 commuting classes of m-qubit Pauli products.
///
/// Class 0 is {Z-type}; class 1 + s (s ∈ GF(2ᵐ) by index) holds the
/// operators with x-part a and z-part M_s·a, where M_s[i][j] = tr(s·xⁱ·xʲ).
/// Each M_s is symmetric, so its class commutes, and M_s − M_t = M_{s−t} is
/// invertible for s ≠ t, so distinct classes are disjoint.
pub fn pauli_class_generators(field: &GaloisField) -> Vec<Vec<PauliLabel>> {
    assert_eq!(field.characteristic(), 2, "Pauli classes need characteristic 2");
    let m = field.degree();
    let unit = |k: usize| -> Vec<u8> { (0..m).map(|q| u8::from(q == k)).collect() };
    let mut classes = vec![(0..m)
        .map(|k| PauliLabel {
            x: vec![0; m],
            z: unit(k),
        })
        .collect::<Vec<_>>()];
    let basis: Vec<GfElement> = (0..m).map(|k| field.monomial(k)).collect();
    for s in field.elements() {
        let form: Vec<Vec<u8>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let prod = field.mul(&s, &field.mul(&basis[i], &basis[j]));
                        field.trace(&prod) as u8
                    })
                    .collect()
            })
            .collect();
        classes.push(
            (0..m)
                .map(|k| PauliLabel {
                    x: unit(k),
                    z: (0..m).map(|i| form[i][k]).collect(),
                })
                .collect(),
        );
    }
    classes
}

/// Joint eigenbasis of commuting Pauli generators G₁…G_m: column j is the
/// image of Πₖ (1 + sₖGₖ)/2 with sₖ = (−1)^{bit k of j}, qubit 0 most
/// significant.
fn joint_eigenbasis(generators: &[PauliLabel]) -> Result<ComplexMatrix> {
    let m = generators.len();
    let n = 1usize << m;
    let ops: Vec<ComplexMatrix> = generators.iter().map(PauliLabel::matrix).collect();
    let id = ComplexMatrix::identity(n);
    let columns: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let proj = ops.iter().enumerate().fold(id.clone(), |acc, (k, g)| {
                let sign = if (j >> (m - 1 - k)) & 1 == 1 { -1.0 } else { 1.0 };
                let factor = (&id + &g.scale_real(sign)).scale_real(0.5);
                &acc * &factor
            });
            let (best, norm) = (0..n)
                .map(|c| {
                    let norm = proj.column(c).iter().map(|z| z.norm_sqr()).sum::<f64>();
                    (c, norm)
                })
                .fold((0, 0.0), |acc, x| if x.1 > acc.1 + 1e-12 { x } else { acc });
            let mut v: Vec<Complex64> = proj.column(best).iter().map(|z| z / norm.sqrt()).collect();
            canonical_phase(&mut v);
            v
        })
        .collect();
    ComplexMatrix::from_columns(&columns)
}

fn pauli_class_bases(field: &GaloisField) -> Result<MubSet> {
    let bases = pauli_class_generators(field)
        .iter()
        .map(|gens| joint_eigenbasis(gens))
        .collect::<Result<Vec<_>>>()?;
    MubSet::new(bases)
}

/// Parameter count of an n-level density operator split over the coprime
/// prime-power factors of n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCount {
    /// Prime-power factors qᵢ, ascending by prime.
    pub factors: Vec<u64>,
    /// qᵢ² − 1 for each factor.
    pub local_params: Vec<u64>,
    /// Σ over factor subsets of size ≥ 2 of Π (qᵢ² − 1).
    pub correlation_params: u64,
    /// Local plus correlation parameters; equals n² − 1.
    pub total: u64,
}

pub fn param_count_decomposition(n: u64) -> Result<ParamCount> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension {n} < 2")));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut d = 2;
    while rest > 1 {
        if rest.is_multiple_of(d) {
            let mut q = 1;
            while rest.is_multiple_of(d) {
                rest /= d;
                q *= d;
            }
            factors.push(q);
        }
        d += 1;
    }
    let local_params: Vec<u64> = factors.iter().map(|q| q * q - 1).collect();
    // Π(1 + xᵢ) expands into the sum over all subsets; drop the empty set
    // and the singletons.
    let all_subsets: u64 = local_params.iter().map(|x| 1 + x).product::<u64>() - 1;
    let local_sum: u64 = local_params.iter().sum();
    let correlation_params = all_subsets - local_sum;
    Ok(ParamCount {
        factors,
        correlation_params,
        total: local_sum + correlation_params,
        local_params,
    })
}

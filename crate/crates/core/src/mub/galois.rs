//! Arithmetic in GF(pᵐ) with elements stored as coefficient vectors of
//! polynomials of degree < m, reduced modulo a fixed monic irreducible.

use std::fmt;

use crate::{Error, Result};

/// Largest field order this module builds.
const MAX_ORDER: usize = 1 << 12;

/// Polynomial-basis element of GF(pᵐ); `coeffs[k]` multiplies xᵏ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfElement {
    coeffs: Vec<u32>,
}

impl GfElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF{:?}", self.coeffs)
    }
}

/// The finite field GF(pᵐ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    m: usize,
    /// Monic modulus, low-to-high coefficients, length m + 1.
    modulus: Vec<u32>,
}

impl GaloisField {
    /// Build GF(pᵐ) using the first monic irreducible polynomial of degree m,
    /// ordering candidates by the base-p index of their lower coefficients.
    /// This picks x²+x+1 for GF(4), x³+x+1 for GF(8) and x²+1 for GF(9).
    pub fn new(p: u32, m: usize) -> Result<Self> {
        if !is_prime(p as usize) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be ≥ 1".into()));
        }
        let order = (p as usize).checked_pow(m as u32).filter(|&q| q <= MAX_ORDER);
        let Some(order) = order else {
            return Err(Error::InvalidParameter(format!("field order {p}^{m} too large")));
        };
        let modulus = (0..order)
            .map(|idx| {
                let mut poly = digits(idx, p, m);
                poly.push(1);
                poly
            })
            .find(|poly| is_irreducible(poly, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self { p, m, modulus })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.m as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with base-p digits of `index` as coefficients.
    pub fn element(&self, index: usize) -> GfElement {
        assert!(index < self.order(), "element index {index} out of range");
        GfElement {
            coeffs: digits(index, self.p, self.m),
        }
    }

    pub fn index(&self, e: &GfElement) -> usize {
        e.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElement> + '_ {
        (0..self.order()).map(|k| self.element(k))
    }

    pub fn zero(&self) -> GfElement {
        self.element(0)
    }

    pub fn one(&self) -> GfElement {
        self.element(1)
    }

    /// xᵏ reduced into the field.
    pub fn monomial(&self, k: usize) -> GfElement {
        let mut x = self.one();
        let gen = if self.m == 1 {
            self.one()
        } else {
            self.element(self.p as usize)
        };
        for _ in 0..k {
            x = self.mul(&x, &gen);
        }
        x
    }

    /// Element of the prime subfield.
    pub fn from_int(&self, k: u32) -> GfElement {
        let mut e = self.zero();
        e.coeffs[0] = k % self.p;
        e
    }

    pub fn add(&self, a: &GfElement, b: &GfElement) -> GfElement {
        GfElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GfElement) -> GfElement {
        GfElement {
            coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &GfElement, b: &GfElement) -> GfElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &GfElement, b: &GfElement) -> GfElement {
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce with xᵐ = −Σ_{k<m} modulus[k]·xᵏ, from the top down.
        for deg in (self.m..prod.len()).rev() {
            let lead = prod[deg];
            if lead == 0 {
                continue;
            }
            prod[deg] = 0;
            for k in 0..self.m {
                let sub = lead * self.modulus[k] as u64 % p;
                let slot = &mut prod[deg - self.m + k];
                *slot = (*slot + p - sub) % p;
            }
        }
        GfElement {
            coeffs: prod[..self.m].iter().map(|&c| c as u32).collect(),
        }
    }

    pub fn pow(&self, a: &GfElement, mut e: u64) -> GfElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &GfElement) -> Option<GfElement> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.order() as u64 - 2))
    }

    /// Absolute trace tr(y) = y + yᵖ + … + y^{p^{m−1}}, an element of GF(p).
    pub fn trace(&self, a: &GfElement) -> u32 {
        let mut acc = self.zero();
        let mut term = a.clone();
        for _ in 0..self.m {
            acc = self.add(&acc, &term);
            term = self.pow(&term, self.p as u64);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }
}

pub(crate) fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn digits(mut idx: usize, p: u32, m: usize) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = (idx % p as usize) as u32;
            idx /= p as usize;
            d
        })
        .collect()
}

/// Remainder of `f` divided by the monic `g` over GF(p).
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dg;
        for k in 0..dg {
            let slot = &mut r[shift + k];
            *slot = (*slot + p - lead * g[k] as u64 % p) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree ≤ deg/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for idx in 0..(p as usize).pow(d as u32) {
            let mut g = digits(idx, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

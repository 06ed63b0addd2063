use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex 2×2 matrix acting on (forward, backward) field amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Elements above this magnitude are treated as an unphysical blow-up.
pub const OVERFLOW_LIMIT: f64 = 1e12;

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix {
        m11: ONE,
        m12: ZERO,
        m21: ZERO,
        m22: ONE,
    };

    pub fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        TransferMatrix { m11, m12, m21, m22 }
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    pub fn max_abs(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.m11 * v[0] + self.m12 * v[1], self.m21 * v[0] + self.m22 * v[1]]
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut n: usize) -> TransferMatrix {
        let mut base = *self;
        let mut acc = TransferMatrix::IDENTITY;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        acc
    }

    pub(crate) fn check_overflow(&self, slab: usize) -> Result<()> {
        let magnitude = self.max_abs();
        if magnitude > OVERFLOW_LIMIT || !magnitude.is_finite() {
            return Err(Error::Overflow { slab, magnitude });
        }
        Ok(())
    }

    /// Largest element-wise distance to `other`, relative to the larger norm.
    pub fn relative_distance(&self, other: &TransferMatrix) -> f64 {
        let diff = (self.m11 - other.m11)
            .norm()
            .max((self.m12 - other.m12).norm())
            .max((self.m21 - other.m21).norm())
            .max((self.m22 - other.m22).norm());
        diff / self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE)
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, b: TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            m11: self.m11 * b.m11 + self.m12 * b.m21,
            m12: self.m11 * b.m12 + self.m12 * b.m22,
            m21: self.m21 * b.m11 + self.m22 * b.m21,
            m22: self.m21 * b.m12 + self.m22 * b.m22,
        }
    }
}

/// Thin atomic layer with reflection coefficient ζ:
/// `[[1 + iζ, iζ], [−iζ, 1 − iζ]]`.
pub fn layer_matrix(zeta: Complex64) -> TransferMatrix {
    let iz = I * zeta;
    TransferMatrix::new(ONE + iz, iz, -iz, ONE - iz)
}

/// Free propagation over `dz` along the lattice axis:
/// `diag(e^{iφ}, e^{−iφ})` with φ = k_brg dz cos β_i.
pub fn gap_matrix(dz: f64, k_brg: f64, beta_i: f64) -> TransferMatrix {
    phase_matrix(k_brg * dz * beta_i.cos())
}

pub fn phase_matrix(phi: f64) -> TransferMatrix {
    let e = Complex64::from_polar(1.0, phi);
    TransferMatrix::new(e, ZERO, ZERO, e.conj())
}

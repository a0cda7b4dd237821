use num_complex::Complex64;

const U: f64 = f64::EPSILON;

/// Complex disk `mid ± rad` with outward rounding folded into the radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CBall {
    pub mid: Complex64,
    pub rad: f64,
}

impl CBall {
    pub fn new(mid: Complex64, rad: f64) -> Self {
        CBall { mid, rad }
    }

    pub fn exact(mid: Complex64) -> Self {
        CBall { mid, rad: 0.0 }
    }

    pub fn real(x: f64, rad: f64) -> Self {
        CBall { mid: Complex64::new(x, 0.0), rad }
    }

    pub fn zero() -> Self {
        CBall::exact(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, o: &CBall) -> CBall {
        let mid = self.mid + o.mid;
        CBall { mid, rad: self.rad + o.rad + 2.0 * U * mid.norm() }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        let mid = self.mid - o.mid;
        CBall { mid, rad: self.rad + o.rad + 2.0 * U * mid.norm() }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        let mid = self.mid * o.mid;
        let a = self.mid.norm();
        let b = o.mid.norm();
        CBall { mid, rad: a * o.rad + b * self.rad + self.rad * o.rad + 4.0 * U * a * b }
    }

    pub fn scale(&self, s: f64) -> CBall {
        CBall { mid: self.mid * s, rad: self.rad * s.abs() + 2.0 * U * (self.mid * s).norm() }
    }

    /// Reciprocal; returns `None` when the disk touches zero.
    pub fn inv(&self) -> Option<CBall> {
        let m = self.mid.norm();
        if m <= self.rad {
            return None;
        }
        let mid = Complex64::new(1.0, 0.0) / self.mid;
        let rad = self.rad / (m * (m - self.rad)) + 4.0 * U * mid.norm();
        Some(CBall { mid, rad })
    }

    pub fn abs_upper(&self) -> f64 {
        (self.mid.norm() + self.rad) * (1.0 + 2.0 * U)
    }

    pub fn abs_lower(&self) -> f64 {
        ((self.mid.norm() - self.rad) * (1.0 - 2.0 * U)).max(0.0)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.mid).norm() <= self.rad * (1.0 + 4.0 * U) + 4.0 * U * z.norm()
    }

    pub fn overlaps(&self, o: &CBall) -> bool {
        (self.mid - o.mid).norm() <= (self.rad + o.rad) * (1.0 + 4.0 * U)
    }

    pub fn conj(&self) -> CBall {
        CBall { mid: self.mid.conj(), rad: self.rad }
    }
}

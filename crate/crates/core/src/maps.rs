//! Linear-fractional self-maps of the unit disk.
//!
//! Maps are projective: `(a, b, c, d)` and `(ta, tb, tc, td)` describe the same
//! map, so comparisons go through [`MobiusMap::normalized`].

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 4096;
pub const SELF_MAP_TOL: f64 = 1e-12;
const DET_TOL: f64 = 1e-14;
const DENJOY_WOLFF_MAX_STEPS: usize = 100_000;

/// `z ↦ (a z + b) / (c z + d)` with `ad - bc != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelfMapCheck {
    pub ok: bool,
    pub max_boundary_modulus: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointInfo {
    pub w0: Complex64,
    pub derivative_at_w0: Complex64,
    pub interior: bool,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let det = m.normalized_determinant();
        if det.is_nan() || det <= DET_TOL {
            return Err(Error::DegenerateMap(det));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    /// `z ↦ a z`.
    pub fn linear(a: Complex64) -> Result<Self> {
        Self::new(a, ZERO, ZERO, ONE)
    }

    /// The involutive automorphism `z ↦ (a - z) / (1 - ā z)`.
    pub fn involutive_automorphism(a: Complex64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::ParameterOutsideDisk(a));
        }
        Ok(Self {
            a: -ONE,
            b: a,
            c: -a.conj(),
            d: ONE,
        })
    }

    fn max_coeff(&self) -> f64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `|ad - bc|` after scaling the coefficients to max modulus 1.
    pub fn normalized_determinant(&self) -> f64 {
        let s = self.max_coeff();
        if s == 0.0 || !s.is_finite() {
            return 0.0;
        }
        self.determinant().norm() / (s * s)
    }

    /// Divides by the first coefficient of maximal modulus, making it exactly 1.
    pub fn normalized(&self) -> Self {
        let coeffs = [self.a, self.b, self.c, self.d];
        let k = pivot_index(&coeffs);
        let p = coeffs[k];
        Self {
            a: self.a / p,
            b: self.b / p,
            c: self.c / p,
            d: self.d / p,
        }
    }

    /// Coefficient deviation between two maps viewed projectively.
    ///
    /// Both maps are divided by their coefficient at the pivot position of `self`.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        let mine = [self.a, self.b, self.c, self.d];
        let theirs = [other.a, other.b, other.c, other.d];
        let k = pivot_index(&mine);
        if theirs[k] == ZERO {
            return f64::INFINITY;
        }
        mine.iter()
            .zip(&theirs)
            .map(|(x, y)| (x / mine[k] - y / theirs[k]).norm())
            .fold(0.0, f64::max)
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// `(ad - bc) / (cz + d)²`.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.determinant() / (den * den)
    }

    /// `self ∘ inner`, the 2×2 coefficient-matrix product.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let m = Self {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        };
        let det = m.normalized_determinant();
        if det.is_nan() || det <= DET_TOL {
            return Err(Error::DegenerateComposition(det));
        }
        Ok(m)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        Self::identity().projective_distance(self) <= tol
    }

    /// Pole `-d/c` strictly outside the closed disk (or no finite pole).
    pub fn pole_outside_closed_disk(&self) -> bool {
        self.d.norm() > self.c.norm()
    }

    /// Samples `|φ|` on the unit circle; ok iff the max is `<= 1 + 1e-12`.
    ///
    /// A map whose pole lies in the closed disk is never a self-map, whatever
    /// its boundary values, and is reported as not ok.
    pub fn self_map_check(&self, samples: usize) -> SelfMapCheck {
        let samples = samples.max(16);
        let max_boundary_modulus = (0..samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                self.evaluate(Complex64::from_polar(1.0, theta)).norm()
            })
            .fold(0.0, |acc: f64, v| {
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    acc.max(v)
                }
            });
        let ok = self.pole_outside_closed_disk() && max_boundary_modulus <= 1.0 + SELF_MAP_TOL;
        SelfMapCheck {
            ok,
            max_boundary_modulus,
        }
    }

    /// Taylor coefficients through degree `n` via the geometric expansion of `1/(cz + d)`.
    pub fn to_series(&self, n: usize) -> Result<TruncatedSeries> {
        if !self.pole_outside_closed_disk() {
            return Err(Error::PoleInsideDisk);
        }
        let ratio = -self.c / self.d;
        let geo = TruncatedSeries::geometric(ratio, n).scale(self.d.inv());
        let mut num = TruncatedSeries::constant(self.b, n);
        if n >= 1 {
            num = &num + &TruncatedSeries::monomial(1, self.a, n);
        }
        Ok(num.multiply(&geo))
    }

    /// Fixed point of the map in the open disk, or its Denjoy–Wolff point.
    ///
    /// The fixed points solve `c w² + (d - a) w - b = 0`. The smaller root is
    /// taken from the cancellation-free quadratic formula; when it is not inside
    /// the disk the orbit of 0 is iterated to find the attracting boundary point.
    pub fn fixed_point_in_disk(&self) -> Result<FixedPointInfo> {
        let m = self.normalized();
        let (qa, qb, qc) = (m.c, m.d - m.a, -m.b);
        let info = |w0: Complex64, interior: bool| FixedPointInfo {
            w0,
            derivative_at_w0: m.derivative_at(w0),
            interior,
        };

        let small_root = if qa.norm() <= DET_TOL {
            if qb.norm() <= DET_TOL {
                if qc.norm() <= DET_TOL {
                    // Identity map: every point is fixed.
                    return Ok(info(ZERO, true));
                }
                None
            } else {
                Some(-qc / qb)
            }
        } else {
            let disc = (qb * qb - 4.0 * qa * qc).sqrt();
            let plus = qb + disc;
            let minus = qb - disc;
            let big = if plus.norm() >= minus.norm() {
                plus
            } else {
                minus
            };
            if big.norm() == 0.0 {
                // Double root at 0.
                Some(ZERO)
            } else {
                let q = -0.5 * big;
                let r1 = q / qa;
                let r2 = qc / q;
                Some(if r1.norm() <= r2.norm() { r1 } else { r2 })
            }
        };

        if let Some(w) = small_root {
            if w.norm() < 1.0 - SELF_MAP_TOL {
                return Ok(info(w, true));
            }
        }

        let disc_abs = if qa.norm() > DET_TOL {
            (qb * qb - 4.0 * qa * qc).norm()
        } else {
            f64::INFINITY
        };
        let mut z = ZERO;
        for _ in 0..DENJOY_WOLFF_MAX_STEPS {
            let next = m.evaluate(z);
            if !next.is_finite() {
                break;
            }
            let step = (next - z).norm();
            z = next;
            if step < 1e-14 {
                let w = snap_to_root(z, qa, qb, qc).unwrap_or(z);
                return Ok(info(w, w.norm() < 1.0 - SELF_MAP_TOL));
            }
        }
        if disc_abs < 1e-10 {
            // Parabolic: the orbit creeps in at rate 1/k; use the double root.
            let w = -qb / (2.0 * qa);
            return Ok(info(w, false));
        }
        Err(Error::NoFixedPointFound(format!(
            "iteration of 0 did not settle within {DENJOY_WOLFF_MAX_STEPS} steps"
        )))
    }
}

fn pivot_index(coeffs: &[Complex64; 4]) -> usize {
    let mut k = 0;
    for i in 1..4 {
        if coeffs[i].norm() > coeffs[k].norm() {
            k = i;
        }
    }
    k
}

fn snap_to_root(z: Complex64, qa: Complex64, qb: Complex64, qc: Complex64) -> Option<Complex64> {
    let roots = if qa.norm() <= DET_TOL {
        if qb.norm() <= DET_TOL {
            return None;
        }
        vec![-qc / qb]
    } else {
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        vec![(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
    };
    roots
        .into_iter()
        .filter(|r| (r - z).norm() < 1e-6)
        .min_by(|x, y| (x - z).norm().total_cmp(&(y - z).norm()))
}

/// Parameters `(a0, a1, b, κ)` of the symbol pair
/// `ψ(z) = b / (1 - a0 z)^κ`, `φ(z) = a0 + a1 z / (1 - a0 z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PPFParams {
    pub a0: Complex64,
    pub a1: Complex64,
    pub b: Complex64,
    pub kappa: f64,
}

impl PPFParams {
    /// Validates `κ >= 1` and that `φ` maps the disk into itself.
    pub fn new(a0: Complex64, a1: Complex64, b: Complex64, kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 1.0) {
            return Err(Error::InvalidKappa(kappa));
        }
        let p = Self { a0, a1, b, kappa };
        let check = p.self_map_check(DEFAULT_BOUNDARY_SAMPLES);
        if !check.ok {
            return Err(Error::NotSelfMap(check.max_boundary_modulus));
        }
        Ok(p)
    }

    pub fn phi(&self, z: Complex64) -> Complex64 {
        self.a0 + self.a1 * z / (ONE - self.a0 * z)
    }

    /// Principal branch of `b (1 - a0 z)^(-κ)`; `1 - a0 z` has positive real part on the disk.
    pub fn psi(&self, z: Complex64) -> Complex64 {
        self.b * (ONE - self.a0 * z).powf(-self.kappa)
    }

    /// `conj(φ(conj z))`.
    pub fn phi_tilde(&self, z: Complex64) -> Complex64 {
        self.phi(z.conj()).conj()
    }

    pub fn psi_tilde(&self, z: Complex64) -> Complex64 {
        self.psi(z.conj()).conj()
    }

    /// Works from the closed form so that constant symbols (`a1 = 0`) are covered.
    pub fn self_map_check(&self, samples: usize) -> SelfMapCheck {
        let samples = samples.max(16);
        let pole_ok = self.a0.norm() < 1.0;
        let max_boundary_modulus = (0..samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                self.phi(Complex64::from_polar(1.0, theta)).norm()
            })
            .fold(0.0, |acc: f64, v| {
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    acc.max(v)
                }
            });
        SelfMapCheck {
            ok: pole_ok && max_boundary_modulus <= 1.0 + SELF_MAP_TOL,
            max_boundary_modulus,
        }
    }

    /// `φ` as a series: `a0 + a1 Σ_{k>=1} a0^(k-1) z^k`.
    pub fn phi_series(&self, n: usize) -> TruncatedSeries {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[0] = self.a0;
        let mut p = self.a1;
        for c in coeffs.iter_mut().skip(1) {
            *c = p;
            p *= self.a0;
        }
        TruncatedSeries::new(coeffs)
    }

    /// `ψ` as a series: `b Σ binom(k+κ-1, k) a0^k z^k`.
    pub fn psi_series(&self, n: usize) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut c = self.b;
        for k in 0..=n {
            coeffs.push(c);
            c = c * self.a0 * ((k as f64 + self.kappa) / (k + 1) as f64);
        }
        TruncatedSeries::new(coeffs)
    }
}

/// `φ(z) = (a0 + (a1 - a0²) z) / (1 - a0 z)`.
pub fn ppf_map(p: &PPFParams) -> Result<MobiusMap> {
    let check = p.self_map_check(DEFAULT_BOUNDARY_SAMPLES);
    if !check.ok {
        return Err(Error::NotSelfMap(check.max_boundary_modulus));
    }
    MobiusMap::new(p.a1 - p.a0 * p.a0, p.a0, -p.a0, ONE)
}

//! Truncated Taylor series over the complex numbers.
//!
//! A [`TruncatedSeries`] of degree `N` stores the coefficients of `z^0..=z^N`.
//! Binary operations truncate to the smaller of the two operand degrees so
//! precision is never silently inflated.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Complex Taylor polynomial standing in for an analytic function on the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the degree is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series needs at least one coefficient"
        );
        Self { coeffs }
    }

    /// Real coefficients, zero padded (or cut) to `degree`.
    pub fn from_real(coeffs: &[f64], degree: usize) -> Self {
        let mut c = vec![ZERO; degree + 1];
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            *dst = Complex64::new(src, 0.0);
        }
        Self { coeffs: c }
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![ZERO; degree + 1],
        }
    }

    pub fn constant(c: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = c;
        s
    }

    pub fn one(degree: usize) -> Self {
        Self::constant(ONE, degree)
    }

    /// `c * z^k`, or zero when `k > degree`.
    pub fn monomial(k: usize, c: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if k <= degree {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity function `z`.
    pub fn identity(degree: usize) -> Self {
        Self::monomial(1, ONE, degree)
    }

    /// `sum_n ratio^n z^n`, the expansion of `1/(1 - ratio z)`.
    pub fn geometric(ratio: Complex64, degree: usize) -> Self {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut p = ONE;
        for _ in 0..=degree {
            coeffs.push(p);
            p *= ratio;
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero past the truncation degree.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Drops all coefficients above `degree`. Truncating upward is a no-op.
    pub fn truncate(&self, degree: usize) -> Self {
        let d = degree.min(self.degree());
        Self {
            coeffs: self.coeffs[..=d].to_vec(),
        }
    }

    /// Zero-extends to `degree`; only meaningful for exact polynomials.
    pub fn pad(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < degree + 1 {
            coeffs.resize(degree + 1, ZERO);
        }
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max coefficient deviation over the common degree range.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Cauchy product truncated to `min(self.degree(), other.degree())`.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        let mut out = vec![ZERO; n + 1];
        for (i, &a) in self.coeffs[..=n].iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// `self^k` by repeated squaring; `self^0` is the constant 1.
    pub fn powi(&self, mut k: u32) -> Self {
        let mut acc = Self::one(self.degree());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.multiply(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == ZERO {
            return Err(Error::NotInvertible(
                "reciprocal of a series vanishing at 0",
            ));
        }
        let inv0 = a0.inv();
        let n = self.degree();
        let mut r = vec![ZERO; n + 1];
        r[0] = inv0;
        for m in 1..=n {
            let mut acc = ZERO;
            for k in 1..=m {
                acc += self.coeffs[k] * r[m - k];
            }
            r[m] = -acc * inv0;
        }
        Ok(Self { coeffs: r })
    }

    pub fn divide(&self, denom: &Self) -> Result<Self> {
        Ok(self.multiply(&denom.reciprocal()?))
    }

    /// Principal power `self^p` for real `p`; needs a nonzero constant term.
    ///
    /// Uses the recurrence obtained from `f y' = p f' y`.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == ZERO {
            return Err(Error::NotInvertible(
                "real power of a series vanishing at 0",
            ));
        }
        let n = self.degree();
        let mut y = vec![ZERO; n + 1];
        y[0] = a0.powf(p);
        let inv0 = a0.inv();
        for m in 1..=n {
            let mut acc = ZERO;
            for k in 1..=m {
                let w = (p + 1.0) * k as f64 - m as f64;
                acc += self.coeffs[k] * y[m - k] * w;
            }
            y[m] = acc * inv0 / m as f64;
        }
        Ok(Self { coeffs: y })
    }

    /// Termwise derivative, degree `N - 1` (degree 0 stays the zero constant).
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (k + 1) as f64)
            .collect();
        Self { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    ///
    /// Intended for `|z| < 1`; outside the disk the value says nothing about
    /// the underlying analytic function.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Largest modulus over `samples` equispaced points of `|z| = radius`.
    pub fn sup_on_circle(&self, radius: f64, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                self.evaluate(Complex64::from_polar(radius, theta)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Taylor coefficients of `self ∘ inner` by Horner's scheme over series.
    ///
    /// The result is the truncation of the polynomial `self` composed with the
    /// polynomial `inner`, to degree `min` of the two. When `inner(0) = 0` this
    /// equals the truncated composition of the underlying analytic functions.
    /// When `inner(0) != 0`, the truncated tail of `self` leaks into every
    /// coefficient; callers must pick the degree of `self` so that its tail is
    /// negligible on the range of `inner` (see [`Self::sup_on_circle`]).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let c0 = inner.coeffs[0].norm();
        if c0 >= 1.0 {
            return Err(Error::InnerConstantTooLarge(c0));
        }
        let n = self.degree().min(inner.degree());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.multiply(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse by Newton iteration, doubling the precision each step.
    ///
    /// Requires `s(0) = 0` and `s'(0) != 0`.
    pub fn revert(&self) -> Result<Self> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::NotInvertible("degree-0 series has no linear term"));
        }
        let scale = self.max_abs().max(1.0);
        if self.coeffs[0].norm() > 1e-14 * scale {
            return Err(Error::NotInvertible("series must vanish at 0"));
        }
        let c1 = self.coeffs[1];
        if c1.norm() <= 1e-14 * scale {
            return Err(Error::NotInvertible(
                "series must have a nonzero linear term",
            ));
        }
        let mut s = self.clone();
        s.coeffs[0] = ZERO;
        let ds = s.derivative();

        let mut r = Self::monomial(1, c1.inv(), 1);
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let r_p = r.pad(prec);
            let s_p = s.truncate(prec);
            let mut residual = s_p.compose(&r_p)?;
            residual.coeffs[1] -= ONE;
            // Only derivative coefficients below `prec - old_prec` influence the
            // update, so zero-padding the unknown top coefficient is exact.
            let d_p = ds.truncate(prec).pad(prec);
            let slope = d_p.compose(&r_p)?;
            let step = residual.divide(&slope)?;
            r = &r_p - &step;
            r.coeffs[0] = ZERO;
        }
        Ok(r.pad(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                let f: fn(&TruncatedSeries, &TruncatedSeries) -> TruncatedSeries = $body;
                f(self, rhs)
            }
        }
        impl $trait<TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$method(rhs)
            }
        }
    };
}

fn zip_with(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    f: impl Fn(Complex64, Complex64) -> Complex64,
) -> TruncatedSeries {
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| f(x, y))
        .collect();
    TruncatedSeries { coeffs }
}

forward_binop!(Add, add, |a, b| zip_with(a, b, |x, y| x + y));
forward_binop!(Sub, sub, |a, b| zip_with(a, b, |x, y| x - y));
forward_binop!(Mul, mul, |a, b| a.multiply(b));

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-ONE)
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

//! Weighted Hardy spaces `H^2(β)`: weights, inner products and reproducing kernels.
//!
//! The norm is `‖f‖² = Σ |f_n|² β(n)²`, so `e_n = z^n / β(n)` is an orthonormal
//! basis. The family `H^2(β_κ)` is the space whose kernel is `(1 - w̄z)^(-κ)`.
//! Expanding that kernel gives `Σ binom(n+κ-1, n) (w̄z)^n`, and matching it
//! against `K_w(z) = Σ (w̄z)^n / β(n)²` forces `β(n)² = 1 / binom(n+κ-1, n)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Default slope threshold for the norm-profile divergence heuristic.
pub const DEFAULT_DIVERGENCE_SLOPE: f64 = 1e-3;

/// The weight sequence `β(0..=N)` of `H^2(β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    beta: Vec<f64>,
    label: String,
    kappa: Option<f64>,
}

impl WeightSequence {
    pub fn new(beta: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::InvalidWeights("empty weight sequence".into()));
        }
        if let Some((n, b)) = beta
            .iter()
            .enumerate()
            .find(|(_, b)| !(b.is_finite() && **b > 0.0))
        {
            return Err(Error::InvalidWeights(format!(
                "beta({n}) = {b} is not positive"
            )));
        }
        Ok(Self {
            beta,
            label: label.into(),
            kappa: None,
        })
    }

    /// Classical Hardy space `H^2` (`β ≡ 1`).
    pub fn hardy(max_degree: usize) -> Self {
        Self {
            beta: vec![1.0; max_degree + 1],
            label: "hardy".into(),
            kappa: Some(1.0),
        }
    }

    /// Weights of `H^2(β_κ)`: `β(n) = binom(n+κ-1, n)^(-1/2)` through log-Gamma.
    pub fn beta_kappa(kappa: f64, max_degree: usize) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 1.0) {
            return Err(Error::InvalidKappa(kappa));
        }
        let lg_kappa = libm::lgamma(kappa);
        let beta = (0..=max_degree)
            .map(|n| {
                let n = n as f64;
                let log_binom = libm::lgamma(n + kappa) - lg_kappa - libm::lgamma(n + 1.0);
                (-0.5 * log_binom).exp()
            })
            .collect();
        Ok(Self {
            beta,
            label: format!("beta_kappa({kappa})"),
            kappa: Some(kappa),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Kernel exponent when the weights come from [`Self::beta_kappa`].
    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }

    pub fn max_degree(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self, n: usize) -> f64 {
        self.beta[n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.beta
    }

    pub fn ensure_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree() {
            return Err(Error::WeightsTooShort {
                required: degree,
                available: self.max_degree(),
            });
        }
        Ok(())
    }
}

/// `⟨f, g⟩ = Σ f_n conj(g_n) β(n)²` over the degrees all three cover.
pub fn inner_product(f: &TruncatedSeries, g: &TruncatedSeries, w: &WeightSequence) -> Complex64 {
    let n = f.degree().min(g.degree()).min(w.max_degree());
    (0..=n)
        .map(|k| f.coeff(k) * g.coeff(k).conj() * (w.beta(k) * w.beta(k)))
        .sum()
}

pub fn norm(f: &TruncatedSeries, w: &WeightSequence) -> f64 {
    inner_product(f, f, w).re.max(0.0).sqrt()
}

/// Truncated `K_w^{(n)}`, the function with `⟨f, K_w^{(n)}⟩ = f^{(n)}(w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelVector {
    pub base_point: Complex64,
    pub order: usize,
    pub coeffs: TruncatedSeries,
}

impl KernelVector {
    /// Coordinates in the orthonormal basis `e_m = z^m / β(m)`.
    pub fn basis_coordinates(&self, weights: &WeightSequence, dim: usize) -> Vec<Complex64> {
        (0..dim)
            .map(|m| self.coeffs.coeff(m) * weights.beta(m))
            .collect()
    }
}

fn falling_factorial(m: usize, k: usize) -> f64 {
    (m + 1 - k..=m).map(|j| j as f64).product()
}

/// Coefficient of `z^m` in `K_w^{(order)}` is `m!/(m-order)! · w̄^(m-order) / β(m)²`.
pub fn kernel(
    w: Complex64,
    order: usize,
    weights: &WeightSequence,
    degree: usize,
) -> Result<KernelVector> {
    if w.norm() >= 1.0 {
        return Err(Error::BasePointOutsideDisk(w));
    }
    weights.ensure_degree(degree)?;
    let wc = w.conj();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    let mut p = Complex64::new(1.0, 0.0);
    for (m, slot) in coeffs.iter_mut().enumerate().skip(order) {
        let b = weights.beta(m);
        *slot = p * (falling_factorial(m, order) / (b * b));
        p *= wc;
    }
    Ok(KernelVector {
        base_point: w,
        order,
        coeffs: TruncatedSeries::new(coeffs),
    })
}

/// `|⟨f, K_w^{(order)}⟩ - f^{(order)}(w)|`.
///
/// The kernel is truncated at the degree the weights cover, so a series `f`
/// of higher degree shows its tail beyond that degree in the residual.
pub fn reproducing_check(
    f: &TruncatedSeries,
    w: Complex64,
    order: usize,
    weights: &WeightSequence,
) -> Result<f64> {
    let k = kernel(w, order, weights, weights.max_degree())?;
    let lhs = inner_product(f, &k.coeffs, weights);
    let mut d = f.clone();
    for _ in 0..order {
        d = d.derivative();
    }
    Ok((lhs - d.evaluate(w)).norm())
}

/// Running partial norms `P_m = Σ_{n<=m} |f_n|² β(n)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormProfile {
    pub partial_sums: Vec<f64>,
}

impl NormProfile {
    /// Mean increment `P_m - P_{m-1}` over the last quartile of the profile.
    pub fn tail_slope(&self) -> f64 {
        let increments: Vec<f64> = self.partial_sums.windows(2).map(|w| w[1] - w[0]).collect();
        if increments.is_empty() {
            return 0.0;
        }
        let q = (increments.len() / 4).max(1);
        increments[increments.len() - q..].iter().sum::<f64>() / q as f64
    }

    /// Heuristic only: a truncation cannot decide membership in `H^2(β)`.
    pub fn is_divergent(&self, threshold: f64) -> bool {
        self.tail_slope() > threshold
    }

    pub fn last(&self) -> f64 {
        *self.partial_sums.last().unwrap_or(&0.0)
    }
}

pub fn norm_profile(f: &TruncatedSeries, weights: &WeightSequence) -> NormProfile {
    let n = f.degree().min(weights.max_degree());
    let mut acc = 0.0;
    let partial_sums = (0..=n)
        .map(|k| {
            let b = weights.beta(k);
            acc += f.coeff(k).norm_sqr() * b * b;
            acc
        })
        .collect();
    NormProfile { partial_sums }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Generalized binomial by direct product, independent of log-Gamma.
    fn binom_product(n: usize, kappa: f64) -> f64 {
        (1..=n)
            .map(|j| (j as f64 + kappa - 1.0) / j as f64)
            .product()
    }

    #[test]
    fn beta_kappa_examples() {
        let h = WeightSequence::beta_kappa(1.0, 20).unwrap();
        assert!(h.as_slice().iter().all(|&b| (b - 1.0).abs() < 1e-14));
        assert_eq!(h.beta(0), 1.0);
        let b2 = WeightSequence::beta_kappa(2.0, 20).unwrap();
        for n in 0..=20 {
            let b = b2.beta(n);
            assert!((b * b - 1.0 / (n + 1) as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn beta_kappa_matches_binomial_product() {
        for &kappa in &[1.0, 1.5, 2.0, 3.0, 4.75] {
            let w = WeightSequence::beta_kappa(kappa, 200).unwrap();
            for n in 0..=200 {
                let b = w.beta(n);
                let rel = (b * b * binom_product(n, kappa) - 1.0).abs();
                assert!(rel < 1e-12, "kappa={kappa} n={n} rel={rel}");
            }
        }
    }

    #[test]
    fn beta_kappa_rejects_small_kappa() {
        assert!(matches!(
            WeightSequence::beta_kappa(0.5, 4),
            Err(Error::InvalidKappa(_))
        ));
        assert!(WeightSequence::new(vec![1.0, 0.0], "bad").is_err());
    }

    #[test]
    fn inner_product_examples() {
        let h = WeightSequence::hardy(8);
        let z = TruncatedSeries::identity(8);
        assert_eq!(inner_product(&z, &z, &h), c(1.0, 0.0));
        let z3 = TruncatedSeries::monomial(3, c(1.0, 0.0), 8);
        assert_eq!(inner_product(&z, &z3, &h), c(0.0, 0.0));
        let b2 = WeightSequence::beta_kappa(2.0, 8).unwrap();
        assert!((inner_product(&z, &z, &b2) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        let b3 = WeightSequence::beta_kappa(3.0, 10).unwrap();
        let k0 = kernel(c(0.0, 0.0), 0, &b3, 10).unwrap();
        assert!(k0.coeffs.max_abs_diff(&TruncatedSeries::one(10)) < 1e-14);

        let kappa = 2.5;
        let bk = WeightSequence::beta_kappa(kappa, 10).unwrap();
        let k1 = kernel(c(0.0, 0.0), 1, &bk, 10).unwrap();
        assert!(
            k1.coeffs
                .max_abs_diff(&TruncatedSeries::monomial(1, c(kappa, 0.0), 10))
                < 1e-13
        );

        let h = WeightSequence::hardy(10);
        let k = kernel(c(0.5, 0.0), 0, &h, 10).unwrap();
        let z3 = TruncatedSeries::monomial(3, c(1.0, 0.0), 10);
        assert!((inner_product(&z3, &k.coeffs, &h) - c(0.125, 0.0)).norm() < 1e-16);

        assert!(matches!(
            kernel(c(1.0, 0.0), 0, &h, 10),
            Err(Error::BasePointOutsideDisk(_))
        ));
    }

    #[test]
    fn kernel_matches_binomial_expansion() {
        // (1 - w̄z)^(-κ) = Σ binom(m+κ-1, m) w̄^m z^m.
        let w = c(0.4, -0.3);
        for &kappa in &[1.0, 1.5, 2.0, 3.0] {
            let weights = WeightSequence::beta_kappa(kappa, 40).unwrap();
            let k = kernel(w, 0, &weights, 40).unwrap();
            for m in 0..=40 {
                let expected = w.conj().powu(m as u32) * binom_product(m, kappa);
                let err = (k.coeffs.coeff(m) - expected).norm();
                assert!(
                    err <= 1e-12 * expected.norm().max(1e-300),
                    "kappa={kappa} m={m}"
                );
            }
        }
    }

    #[test]
    fn reproducing_check_examples() {
        let h = WeightSequence::hardy(16);
        let f = TruncatedSeries::from_real(&[0.3, -1.0, 2.0, 0.5], 16);
        assert!(reproducing_check(&f, c(0.2, 0.6), 0, &h).unwrap() <= 1e-13);
        assert!(reproducing_check(&f, c(-0.5, 0.1), 1, &h).unwrap() <= 1e-13);
        let one = TruncatedSeries::one(16);
        assert_eq!(reproducing_check(&one, c(0.7, 0.0), 0, &h).unwrap(), 0.0);

        // Geometric series of degree 64 against weights of degree 16: the residual
        // is the tail Σ_{m=17}^{64} 0.9^m.
        let g = TruncatedSeries::geometric(c(1.0, 0.0), 64);
        let tail: f64 = (17..=64).map(|m| 0.9f64.powi(m)).sum();
        let r = reproducing_check(&g, c(0.9, 0.0), 0, &h).unwrap();
        assert!((r - tail).abs() < 1e-12 && r > 0.1);
    }

    #[test]
    fn norm_profile_examples() {
        let h = WeightSequence::hardy(12);
        let p = norm_profile(&TruncatedSeries::identity(12), &h);
        assert_eq!(p.partial_sums[0], 0.0);
        assert!(p.partial_sums[1..].iter().all(|&v| v == 1.0));
        assert!(!p.is_divergent(DEFAULT_DIVERGENCE_SLOPE));

        // 2z/(1-z): coefficients 2 for n>=1, so P_m = 4m.
        let mut k = TruncatedSeries::geometric(c(1.0, 0.0), 12).scale(c(2.0, 0.0));
        k = TruncatedSeries::new({
            let mut v = k.into_coeffs();
            v[0] = c(0.0, 0.0);
            v
        });
        let p = norm_profile(&k, &h);
        for (m, &v) in p.partial_sums.iter().enumerate() {
            assert_eq!(v, 4.0 * m as f64);
        }
        assert_eq!(p.tail_slope(), 4.0);
        assert!(p.is_divergent(DEFAULT_DIVERGENCE_SLOPE));
    }

    #[test]
    fn norm_profile_converges_for_half_geometric() {
        // z/(1-z/2): coefficients 2^-(n-1); oracle sum Σ_{n=1}^{N} 4^-(n-1).
        let n = 40;
        let h = WeightSequence::hardy(n);
        let f = TruncatedSeries::geometric(c(0.5, 0.0), n - 1).pad(n);
        let f = TruncatedSeries::identity(n).multiply(&f.pad(n));
        let p = norm_profile(&f, &h);
        let oracle: f64 = (1..=n).map(|k| 0.25f64.powi(k as i32 - 1)).sum();
        assert!((p.last() - oracle).abs() < 1e-14);
        assert!((p.last() - 4.0 / 3.0).abs() < 1e-12);
        assert!(!p.is_divergent(DEFAULT_DIVERGENCE_SLOPE));
    }
}

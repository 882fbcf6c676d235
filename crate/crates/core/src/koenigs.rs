//! Koenigs eigenfunctions: solutions of Schröder's equation `κ ∘ φ = λ κ`
//! with `λ = φ'(w0)` at an interior fixed point `w0`.
//!
//! Everything is computed in recentered coordinates: with the involution
//! `σ(z) = (w0 - z) / (1 - w̄0 z)` (its own inverse), `φ̂ = σ ∘ φ ∘ σ` fixes 0
//! and has `φ̂'(0) = φ'(w0)`. The Koenigs function of `φ` is `κ̂ ∘ σ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{FixedPointInfo, MobiusMap};
use crate::series::TruncatedSeries;
use crate::space::{kernel, norm, norm_profile, WeightSequence, DEFAULT_DIVERGENCE_SLOPE};

pub const DEFAULT_MAX_ITER: usize = 200;
pub const CONVERGENCE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const LAMBDA_ZERO_TOL: f64 = 1e-14;
const LAMBDA_UNIT_TOL: f64 = 1e-12;

/// A self-map given either exactly or as a truncated series.
#[derive(Clone, Debug)]
pub enum SelfMap {
    Mobius(MobiusMap),
    Series(TruncatedSeries),
}

impl SelfMap {
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        match self {
            SelfMap::Mobius(m) => m.evaluate(z),
            SelfMap::Series(s) => s.evaluate(z),
        }
    }

    /// `σ ∘ φ ∘ σ` as a series with constant term forced to 0.
    ///
    /// Exact for Möbius maps. For series with `w0 != 0` both compositions have
    /// nonzero inner constants and inherit the truncation error of `φ` and `σ`.
    fn recentered(&self, fp: &FixedPointInfo, n: usize) -> Result<TruncatedSeries> {
        let mut s = if fp.w0 == ZERO {
            match self {
                SelfMap::Mobius(m) => m.to_series(n)?,
                SelfMap::Series(s) => s.truncate(n),
            }
        } else {
            let sigma = MobiusMap::involutive_automorphism(fp.w0)?;
            match self {
                SelfMap::Mobius(m) => sigma.compose(m)?.compose(&sigma)?.to_series(n)?,
                SelfMap::Series(s) => {
                    let sigma_s = sigma.to_series(n)?;
                    sigma_s.compose(&s.compose(&sigma_s)?)?
                }
            }
        };
        let mut coeffs = s.coeffs().to_vec();
        coeffs[0] = ZERO;
        s = TruncatedSeries::new(coeffs);
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KoenigsResult {
    /// `κ̂` in recentered coordinates, normalized so that `κ̂(0) = 0`, `κ̂'(0) = 1`.
    pub kappa_series: TruncatedSeries,
    /// `κ̂ ∘ σ`, the eigenfunction in the original coordinates (equal to
    /// `kappa_series` when `w0 = 0`).
    pub kappa_original: TruncatedSeries,
    pub lambda: Complex64,
    pub w0: Complex64,
    pub iterations: usize,
    /// Number of applications of `φ̂` represented by the final iterate.
    pub orbit_length: u64,
    pub schroeder_residual: f64,
    pub recentered_map: TruncatedSeries,
}

/// Max coefficient of `κ ∘ φ - λ κ`; requires `φ(0) = 0` for exactness.
pub fn schroeder_residual(
    kappa: &TruncatedSeries,
    phi: &TruncatedSeries,
    lambda: Complex64,
) -> Result<f64> {
    let lhs = kappa.compose(phi)?;
    Ok(lhs.max_abs_diff(&kappa.scale(lambda)))
}

fn check_lambda(lambda: Complex64) -> Result<()> {
    let r = lambda.norm();
    if r < LAMBDA_ZERO_TOL {
        return Err(Error::DerivativeZero(r));
    }
    if r >= 1.0 - LAMBDA_UNIT_TOL {
        return Err(Error::DerivativeNotContractive(r));
    }
    Ok(())
}

fn prepare(phi: &SelfMap, fp: &FixedPointInfo, n: usize) -> Result<(TruncatedSeries, Complex64)> {
    if !fp.interior {
        return Err(Error::NotInteriorFixedPoint(fp.w0));
    }
    check_lambda(fp.derivative_at_w0)?;
    let phi_hat = phi.recentered(fp, n)?;
    let lambda = phi_hat.coeff(1);
    check_lambda(lambda)?;
    Ok((phi_hat, lambda))
}

fn finish(
    phi_hat: TruncatedSeries,
    lambda: Complex64,
    fp: &FixedPointInfo,
    kappa: TruncatedSeries,
    iterations: usize,
    orbit_length: u64,
) -> Result<KoenigsResult> {
    let kappa = kappa.scale(kappa.coeff(1).inv());
    let schroeder = schroeder_residual(&kappa, &phi_hat, lambda)?;
    let kappa_original = if fp.w0 == ZERO {
        kappa.clone()
    } else {
        let sigma = MobiusMap::involutive_automorphism(fp.w0)?.to_series(kappa.degree())?;
        kappa.compose(&sigma)?
    };
    Ok(KoenigsResult {
        kappa_series: kappa,
        kappa_original,
        lambda,
        w0: fp.w0,
        iterations,
        orbit_length,
        schroeder_residual: schroeder,
        recentered_map: phi_hat,
    })
}

/// Computes the Koenigs function as the limit of `κ_k = φ̂^{∘k} / λ^k`.
///
/// The first iteration forms `κ_1 = φ̂ / λ`; each later one doubles the orbit
/// length through `κ_{2k} = κ_k ∘ φ̂^{∘k} / λ^k`, evaluated as `K ∘ κ_k` with
/// `[z^j] K = [z^j] κ_k · λ^{k(j-1)}` so that no `1/λ^k` factor is ever formed.
/// Stops once successive iterates differ by less than `1e-12` in every coefficient.
pub fn koenigs_iterate(
    phi: &SelfMap,
    fp: &FixedPointInfo,
    n: usize,
    max_iter: usize,
) -> Result<KoenigsResult> {
    let (phi_hat, lambda) = prepare(phi, fp, n)?;
    let mut kappa = TruncatedSeries::identity(n);
    let mut orbit: u64 = 0;
    let mut lambda_pow = Complex64::new(1.0, 0.0);
    let mut last_step = f64::INFINITY;
    for it in 1..=max_iter {
        let next = if orbit == 0 {
            phi_hat.scale(lambda.inv())
        } else {
            let mut scale = Complex64::new(1.0, 0.0);
            let outer: Vec<Complex64> = kappa
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, &c)| {
                    if j >= 2 {
                        scale *= lambda_pow;
                    }
                    if j == 0 {
                        ZERO
                    } else {
                        c * scale
                    }
                })
                .collect();
            TruncatedSeries::new(outer).compose(&kappa)?
        };
        orbit = if orbit == 0 {
            1
        } else {
            orbit.saturating_mul(2)
        };
        lambda_pow = if it == 1 {
            lambda
        } else {
            lambda_pow * lambda_pow
        };
        last_step = next.max_abs_diff(&kappa);
        kappa = next;
        if last_step < CONVERGENCE_TOL {
            return finish(phi_hat, lambda, fp, kappa, it, orbit);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_step,
    })
}

/// Plain Schröder iteration `κ ← κ ∘ φ̂ / λ`, one application of `φ̂` each step,
/// starting from `initial` (which must vanish at 0 with nonzero slope).
pub fn koenigs_iterate_stepwise(
    phi: &SelfMap,
    fp: &FixedPointInfo,
    n: usize,
    max_iter: usize,
    initial: &TruncatedSeries,
) -> Result<KoenigsResult> {
    let (phi_hat, lambda) = prepare(phi, fp, n)?;
    if initial.coeff(0) != ZERO || initial.coeff(1) == ZERO {
        return Err(Error::NotInvertible(
            "initial guess must vanish at 0 with nonzero slope",
        ));
    }
    let mut kappa = initial.pad(n).truncate(n);
    let inv_lambda = lambda.inv();
    let mut last_step = f64::INFINITY;
    for it in 1..=max_iter {
        let next = kappa.compose(&phi_hat)?.scale(inv_lambda);
        last_step = next.max_abs_diff(&kappa);
        kappa = next;
        if last_step < CONVERGENCE_TOL {
            return finish(phi_hat, lambda, fp, kappa, it, it as u64);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_step,
    })
}

/// `φ = κ⁻¹ ∘ (λ κ)`, truncated; `κ(0) = 0`, `κ'(0) != 0`, `0 < |λ| < 1`.
pub fn phi_from_koenigs(kappa: &TruncatedSeries, lambda: Complex64) -> Result<TruncatedSeries> {
    check_lambda(lambda)?;
    let inverse = kappa.revert()?;
    inverse.compose(&kappa.scale(lambda))
}

/// Fixed point of a series self-map by Newton's method from 0.
pub fn fixed_point_of_series(phi: &TruncatedSeries) -> Result<FixedPointInfo> {
    let dphi = phi.derivative();
    let mut w = ZERO;
    for _ in 0..100 {
        let g = phi.evaluate(w) - w;
        let dg = dphi.evaluate(w) - Complex64::new(1.0, 0.0);
        if dg.norm() == 0.0 {
            break;
        }
        let step = g / dg;
        w -= step;
        if !w.is_finite() || w.norm() >= 1.0 {
            break;
        }
        if step.norm() < 1e-15 {
            return Ok(FixedPointInfo {
                w0: w,
                derivative_at_w0: dphi.evaluate(w),
                interior: true,
            });
        }
    }
    if phi.coeff(0) == ZERO {
        return Ok(FixedPointInfo {
            w0: ZERO,
            derivative_at_w0: phi.coeff(1),
            interior: true,
        });
    }
    Err(Error::NoFixedPointFound(
        "Newton iteration for the series map left the disk".into(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerMembership {
    pub power: u32,
    pub norm_profile_tail_slope: f64,
    pub divergence_flag: bool,
    pub partial_norm_sq: f64,
}

/// Divergence heuristic on the partial norms of `κ^n`, `n = 1..=n_max`.
pub fn power_membership_report(
    kr: &KoenigsResult,
    weights: &WeightSequence,
    n_max: u32,
) -> Vec<PowerMembership> {
    let kappa = &kr.kappa_original;
    let mut power = kappa.clone();
    (1..=n_max.max(1))
        .map(|p| {
            if p > 1 {
                power = power.multiply(kappa);
            }
            let profile = norm_profile(&power, weights);
            let slope = profile.tail_slope();
            PowerMembership {
                power: p,
                norm_profile_tail_slope: slope,
                divergence_flag: slope > DEFAULT_DIVERGENCE_SLOPE,
                partial_norm_sq: profile.last(),
            }
        })
        .collect()
}

/// `|K^{(1)}_{w0}(w0)| / (‖K_{w0}‖ ‖K^{(1)}_{w0}‖)` from kernels truncated at degree `n`.
pub fn obstruction_value(w0: Complex64, weights: &WeightSequence, n: usize) -> Result<f64> {
    let k0 = kernel(w0, 0, weights, n)?;
    let k1 = kernel(w0, 1, weights, n)?;
    let numerator = k1.coeffs.evaluate(w0).norm();
    if numerator == 0.0 {
        return Ok(0.0);
    }
    let norm0 = k0.coeffs.evaluate(w0).re.sqrt();
    let norm1 = norm(&k1.coeffs, weights);
    Ok(numerator / (norm0 * norm1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Consistency {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Compares `β(0) |κ(0)|` for the unit-norm Koenigs function against
/// [`obstruction_value`] at its fixed point.
///
/// The two agree whenever `C_φ` is `J`-symmetric for a conjugation with
/// `J(1) ∝ K_{w0}`; for `β(0) = 1` the left side is just `|κ(0)|`.
pub fn consistency_check(kr: &KoenigsResult, weights: &WeightSequence) -> Result<Consistency> {
    let kappa = kr.kappa_original.truncate(weights.max_degree());
    let profile = norm_profile(&kappa, weights);
    let slope = profile.tail_slope();
    if slope > DEFAULT_DIVERGENCE_SLOPE {
        return Err(Error::DivergentKoenigsNorm(slope));
    }
    let kn = norm(&kappa, weights);
    let lhs = weights.beta(0) * kappa.coeff(0).norm() / kn;
    let rhs = obstruction_value(kr.w0, weights, kappa.degree())?;
    Ok(Consistency {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

//! Recognition of the `ψ = b (1 - a0 z)^(-κ)`, `φ = a0 + a1 z / (1 - a0 z)`
//! family and the symmetric / hermitian / normal verdicts.

use num_complex::Complex64;
use serde::Serialize;

use super::{
    commutator_block_residual, hermitian_residual, transpose_symmetry_residual, OperatorMatrix,
};
use crate::error::{Error, Result};
use crate::maps::PPFParams;
use crate::series::TruncatedSeries;

pub const PPF_RESIDUAL_TOL: f64 = 1e-10;
const MIN_GRID_POINTS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Identities that hold entrywise or pointwise without truncation error.
    pub exact: f64,
    /// Identities limited by truncation at `N = 64`.
    pub truncation: f64,
    /// Max coefficient deviation accepted when recognizing the PPF family.
    pub ppf: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-12,
            truncation: 1e-6,
            ppf: PPF_RESIDUAL_TOL,
        }
    }
}

/// Parameters recovered from a symbol pair, with the reconstruction error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PpfFit {
    pub a0: Complex64,
    pub a1: Complex64,
    pub b: Complex64,
    pub kappa: f64,
    pub residual: f64,
}

impl PpfFit {
    pub fn is_ppf(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    /// The recovered parameters when they fit and induce a self-map.
    pub fn params(&self, tol: f64) -> Option<PPFParams> {
        if !self.is_ppf(tol) {
            return None;
        }
        PPFParams::new(self.a0, self.a1, self.b, self.kappa).ok()
    }
}

/// Reads `b = ψ(0)`, `a0 = φ(0)`, `a1 = φ'(0)` and measures how far `(φ, ψ)`
/// sits from the pair those parameters generate.
pub fn ppf_classify(phi: &TruncatedSeries, psi: &TruncatedSeries, kappa: f64) -> PpfFit {
    let a0 = phi.coeff(0);
    let a1 = phi.coeff(1);
    let b = psi.coeff(0);
    let rebuilt = PPFParams { a0, a1, b, kappa };
    let phi_dev = phi.max_abs_diff(&rebuilt.phi_series(phi.degree()));
    let psi_dev = psi.max_abs_diff(&rebuilt.psi_series(psi.degree()));
    PpfFit {
        a0,
        a1,
        b,
        kappa,
        residual: phi_dev.max(psi_dev),
    }
}

/// `points_per_axis²` deterministic pairs `(z, w)` spread over radii `0.15..0.75`.
pub fn default_grid(points_per_axis: usize) -> Vec<(Complex64, Complex64)> {
    let k = points_per_axis.max(1);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let pts: Vec<Complex64> = (0..k)
        .map(|j| {
            let t = if k == 1 {
                0.5
            } else {
                j as f64 / (k - 1) as f64
            };
            Complex64::from_polar(0.15 + 0.6 * t, 0.7 + golden * j as f64)
        })
        .collect();
    pts.iter()
        .flat_map(|&z| pts.iter().map(move |&w| (z, w)))
        .collect()
}

/// Pointwise check of the kernel identity equivalent to normality of a
/// standard-J-symmetric `W`:
/// `ψ(w) ψ̃(z) (1 - φ(w) φ̃(z))^(-κ) = ψ̃(w) ψ(z) (1 - φ̃(w) φ(z))^(-κ)`,
/// where `f̃(z) = conj(f(conj z))`. Evaluated in closed form, so no truncation enters.
pub fn normality_residual_grid(p: &PPFParams, grid: &[(Complex64, Complex64)]) -> Result<f64> {
    if grid.len() < MIN_GRID_POINTS {
        return Err(Error::GridDegenerate(grid.len()));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for &(z, w) in grid {
        if z.norm() >= 1.0 || w.norm() >= 1.0 {
            return Err(Error::GridOutsideDomain);
        }
        let u = p.phi(w) * p.phi_tilde(z);
        let v = p.phi_tilde(w) * p.phi(z);
        if u.norm() >= 1.0 || v.norm() >= 1.0 {
            return Err(Error::GridOutsideDomain);
        }
        let lhs = p.psi(w) * p.psi_tilde(z) * (one - u).powf(-p.kappa);
        let rhs = p.psi_tilde(w) * p.psi(z) * (one - v).powf(-p.kappa);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdicts {
    pub complex_symmetric_standard_j: bool,
    pub hermitian: bool,
    pub normal: bool,
}

/// Classification of one operator matrix against the standard conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub dim: usize,
    pub max_entry: f64,
    pub transpose_sym_residual: f64,
    pub hermitian_residual: f64,
    /// Grid kernel identity for PPF symbols, commutator block otherwise.
    pub normality_residual: f64,
    pub normality_method: &'static str,
    pub commutator_block_residual: f64,
    pub ppf_fit: PpfFit,
    pub ppf: Option<PPFParams>,
    pub tolerances: Tolerances,
    pub verdicts: Verdicts,
}

/// Runs all residuals on `m` and turns them into verdicts.
///
/// Entrywise residuals are compared with `tol.exact · max(1, max|entry|)`.
pub fn classify(
    m: &OperatorMatrix,
    kappa: f64,
    grid: &[(Complex64, Complex64)],
    tol: Tolerances,
) -> Result<SymmetryReport> {
    let max_entry = m.max_entry();
    let scale = max_entry.max(1.0);
    let transpose = transpose_symmetry_residual(m);
    let herm = hermitian_residual(m);
    let commutator = commutator_block_residual(m);
    let fit = ppf_classify(m.phi(), m.psi(), kappa);
    let ppf = fit.params(tol.ppf);

    let (normality_residual, normality_method, normal) = match &ppf {
        Some(p) => {
            let r = normality_residual_grid(p, grid)?;
            (r, "kernel-grid", r <= tol.exact)
        }
        None => (
            commutator,
            "commutator-block",
            commutator <= tol.truncation * scale,
        ),
    };

    let verdicts = Verdicts {
        complex_symmetric_standard_j: transpose <= tol.exact * scale,
        hermitian: herm <= tol.exact * scale,
        normal,
    };
    Ok(SymmetryReport {
        dim: m.dim(),
        max_entry,
        transpose_sym_residual: transpose,
        hermitian_residual: herm,
        normality_residual,
        normality_method,
        commutator_block_residual: commutator,
        ppf_fit: fit,
        ppf,
        tolerances: tol,
        verdicts,
    })
}

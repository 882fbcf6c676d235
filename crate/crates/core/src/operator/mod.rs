//! Truncated matrices of weighted composition operators `W(f) = ψ · (f ∘ φ)`.
//!
//! Coordinates are taken in the orthonormal basis `e_n = z^n / β(n)`. Column
//! `n` of the matrix holds `W(e_n) = ψ φ^n / β(n)`, so
//! `M[m][n] = [z^m](ψ φ^n) · β(m) / β(n)`. Coefficient `m` of `ψ φ^n` only
//! involves coefficients `0..=m` of `ψ` and `φ`, hence every stored entry is
//! exact: enlarging the truncation appends rows and columns without touching
//! the existing block.
//!
//! The standard conjugation `[Jf](z) = conj(f(conj z))` fixes every `e_n`
//! (`β` is real), so on coordinates it is entrywise conjugation. Since
//! `⟨J x, J y⟩ = ⟨y, x⟩` and `J e_m = e_m`,
//! `⟨J W* J e_n, e_m⟩ = ⟨e_m, W* e_n⟩ = ⟨W e_m, e_n⟩ = M[n][m]`.
//! Thus `W = J W* J` holds iff `M = Mᵀ`, entry by entry, with no truncation error.

mod adjoint;
mod classify;
mod spectrum;

pub use adjoint::{adjoint_kernel_check, AdjointCheck};
pub use classify::{
    classify, default_grid, normality_residual_grid, ppf_classify, PpfFit, SymmetryReport,
    Tolerances, Verdicts, PPF_RESIDUAL_TOL,
};
pub use spectrum::{eigen_ladder_check, ladder_distances, spectrum, MAX_SPECTRUM_DIM};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::space::WeightSequence;

/// `N × N` matrix of `W_{φ,ψ}` together with the data it was built from.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    weights: WeightSequence,
    phi: TruncatedSeries,
    psi: TruncatedSeries,
}

impl OperatorMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    /// `φ` truncated to degree `N - 1`.
    pub fn phi(&self) -> &TruncatedSeries {
        &self.phi
    }

    /// `ψ` truncated to degree `N - 1`.
    pub fn psi(&self) -> &TruncatedSeries {
        &self.psi
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Builds the `n × n` matrix of `W_{φ,ψ}` on `H^2(β)`.
///
/// `φ`, `ψ` and the weights must cover degree `n - 1`.
pub fn build_matrix(
    phi: &TruncatedSeries,
    psi: &TruncatedSeries,
    weights: &WeightSequence,
    n: usize,
) -> Result<OperatorMatrix> {
    assert!(n > 0, "matrix dimension must be positive");
    let top = n - 1;
    let phi0 = phi.coeff(0).norm();
    if phi0 >= 1.0 {
        return Err(Error::InnerConstantTooLarge(phi0));
    }
    for s in [phi, psi] {
        if s.degree() < top {
            return Err(Error::SeriesTooShort {
                required: top,
                available: s.degree(),
            });
        }
    }
    weights.ensure_degree(top)?;
    let phi = phi.truncate(top);
    let psi = psi.truncate(top);

    let mut entries = DMatrix::zeros(n, n);
    let mut column = psi.clone();
    for col in 0..n {
        let inv_beta_col = 1.0 / weights.beta(col);
        for row in 0..n {
            entries[(row, col)] = column.coeff(row) * (weights.beta(row) * inv_beta_col);
        }
        if col + 1 < n {
            column = column.multiply(&phi);
        }
    }
    Ok(OperatorMatrix {
        entries,
        weights: weights.clone(),
        phi,
        psi,
    })
}

/// The standard conjugation on basis coordinates.
pub fn conjugate_coefficients(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|z| z.conj()).collect()
}

/// `max |M[m][n] - M[n][m]|`.
pub fn transpose_symmetry_residual(m: &OperatorMatrix) -> f64 {
    let e = &m.entries;
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((e[(i, j)] - e[(j, i)]).norm());
        }
    }
    worst
}

/// `max |M[m][n] - conj(M[n][m])|`.
pub fn hermitian_residual(m: &OperatorMatrix) -> f64 {
    let e = &m.entries;
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((e[(i, j)] - e[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max entry of `M M* - M* M` on the leading `⌊N/2⌋` block.
///
/// Truncation-limited: the discarded rows and columns still feed the true
/// commutator, so this is a diagnostic rather than an exact identity.
pub fn commutator_block_residual(m: &OperatorMatrix) -> f64 {
    let e = &m.entries;
    let k = m.dim() / 2;
    if k == 0 {
        return 0.0;
    }
    let adj = e.adjoint();
    let mm_star = e * &adj;
    let m_star_m = &adj * e;
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            worst = worst.max((mm_star[(i, j)] - m_star_m[(i, j)]).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::PPFParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_symbol_gives_diagonal() {
        let n = 8;
        let a = c(0.4, 0.3);
        let phi = TruncatedSeries::monomial(1, a, n);
        let psi = TruncatedSeries::one(n);
        let m = build_matrix(&phi, &psi, &WeightSequence::hardy(n), n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j {
                    a.powu(i as u32)
                } else {
                    c(0.0, 0.0)
                };
                assert!((m.get(i, j) - expected).norm() < 1e-16);
            }
        }
        assert_eq!(transpose_symmetry_residual(&m), 0.0);
    }

    #[test]
    fn z_squared_symbol() {
        let n = 8;
        let phi = TruncatedSeries::monomial(2, c(1.0, 0.0), n);
        let m = build_matrix(&phi, &TruncatedSeries::one(n), &WeightSequence::hardy(n), n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == 2 * j { 1.0 } else { 0.0 };
                assert_eq!(m.get(i, j), c(expected, 0.0), "({i},{j})");
            }
        }
        assert_eq!(m.get(2, 1), c(1.0, 0.0));
        assert_eq!(m.get(1, 2), c(0.0, 0.0));
        assert_eq!(transpose_symmetry_residual(&m), 1.0);
    }

    #[test]
    fn ppf_symbol_is_transpose_symmetric() {
        let p = PPFParams::new(c(0.3, 0.0), c(0.4, 0.0), c(1.0, 0.0), 1.0).unwrap();
        let n = 32;
        let m = build_matrix(
            &p.phi_series(n),
            &p.psi_series(n),
            &WeightSequence::hardy(n),
            n,
        )
        .unwrap();
        assert!(transpose_symmetry_residual(&m) <= 1e-12);
    }

    #[test]
    fn hermitian_examples() {
        let n = 24;
        let w = WeightSequence::hardy(n);
        let p = PPFParams::new(c(0.2, 0.0), c(0.5, 0.0), c(1.0, 0.0), 1.0).unwrap();
        let m = build_matrix(&p.phi_series(n), &p.psi_series(n), &w, n).unwrap();
        assert!(hermitian_residual(&m) <= 1e-12);

        let p = PPFParams {
            b: c(0.0, 1.0),
            ..p
        };
        let m = build_matrix(&p.phi_series(n), &p.psi_series(n), &w, n).unwrap();
        assert_eq!(m.get(0, 0), c(0.0, 1.0));
        assert!(hermitian_residual(&m) >= 0.5);

        let zero = TruncatedSeries::zero(n);
        let m = build_matrix(&zero, &zero, &w, n).unwrap();
        assert_eq!(hermitian_residual(&m), 0.0);
    }

    #[test]
    fn conjugation_examples() {
        let v = vec![c(0.0, 1.0), c(1.0, 0.0)];
        assert_eq!(conjugate_coefficients(&v), vec![c(0.0, -1.0), c(1.0, 0.0)]);
        let x = vec![c(0.3, -1.2), c(2.0, 0.5), c(-0.1, 0.0)];
        let y = vec![c(1.0, 1.0), c(0.0, -0.7), c(0.4, 0.2)];
        assert_eq!(conjugate_coefficients(&conjugate_coefficients(&x)), x);
        let ip = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
            u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
        };
        let jx = conjugate_coefficients(&x);
        let jy = conjugate_coefficients(&y);
        assert!((ip(&jx, &jy) - ip(&x, &y).conj()).norm() < 1e-15);
    }

    #[test]
    fn enlarging_truncation_keeps_leading_block() {
        let p = PPFParams::new(c(0.1, 0.3), c(0.3, -0.2), c(1.5, 0.5), 2.0).unwrap();
        let w = WeightSequence::beta_kappa(2.0, 40).unwrap();
        let small = build_matrix(&p.phi_series(40), &p.psi_series(40), &w, 16).unwrap();
        let big = build_matrix(&p.phi_series(40), &p.psi_series(40), &w, 32).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(small.get(i, j), big.get(i, j));
            }
        }
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let w = WeightSequence::hardy(8);
        let big0 = TruncatedSeries::constant(c(1.0, 0.0), 8);
        assert!(matches!(
            build_matrix(&big0, &TruncatedSeries::one(8), &w, 8),
            Err(Error::InnerConstantTooLarge(_))
        ));
        let short = TruncatedSeries::identity(3);
        assert!(matches!(
            build_matrix(&short, &TruncatedSeries::one(8), &w, 8),
            Err(Error::SeriesTooShort { .. })
        ));
        let phi = TruncatedSeries::identity(20);
        assert!(matches!(
            build_matrix(&phi, &TruncatedSeries::one(20), &w, 16),
            Err(Error::WeightsTooShort { .. })
        ));
    }

    #[test]
    fn commutator_vanishes_for_diagonal() {
        let n = 10;
        let phi = TruncatedSeries::monomial(1, c(0.5, 0.2), n);
        let m = build_matrix(&phi, &TruncatedSeries::one(n), &WeightSequence::hardy(n), n).unwrap();
        assert!(commutator_block_residual(&m) < 1e-16);
    }
}

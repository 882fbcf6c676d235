//! Truncated checks of the adjoint action on kernels:
//! `W* K_w = conj(ψ(w)) K_{φ(w)}` and
//! `W* K_w^{(1)} = conj(ψ(w) φ'(w)) K^{(1)}_{φ(w)} + conj(ψ'(w)) K_{φ(w)}`.

use num_complex::Complex64;
use serde::Serialize;

use super::OperatorMatrix;
use crate::error::{Error, Result};
use crate::space::kernel;

const TAIL_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdjointCheck {
    /// Euclidean norm of `M* k - rhs` in basis coordinates.
    pub residual: f64,
    /// Cauchy-estimate bound on the part of the residual due to truncation.
    pub tail_bound: f64,
}

/// Compares `M*` applied to the truncated kernel against the closed-form image.
///
/// Coordinate `n` of the difference is `conj(tail_n(w)) / β(n)`, where
/// `tail_n` is the part of `(ψ φ^n)^{(order)}` coming from degrees `>= N`.
/// The reported bound uses `|[z^m] ψ φ^n| <= S_n ρ^{-m}` on `|z| = ρ = (1+|w|)/2`
/// with `S_n = sup|ψ| · (sup|φ|)^n` sampled on that circle.
pub fn adjoint_kernel_check(
    m: &OperatorMatrix,
    w: Complex64,
    order: usize,
) -> Result<AdjointCheck> {
    if w.norm() > 0.9 {
        return Err(Error::BasePointOutsideDisk(w));
    }
    assert!(
        order <= 1,
        "adjoint kernel formulas are provided for orders 0 and 1"
    );
    let n = m.dim();
    let weights = m.weights();
    let top = n - 1;
    let k = kernel(w, order, weights, top)?.basis_coordinates(weights, n);

    let e = m.entries();
    let lhs: Vec<Complex64> = (0..n)
        .map(|col| (0..n).map(|row| e[(row, col)].conj() * k[row]).sum())
        .collect();

    let psi_w = m.psi().evaluate(w);
    let phi_w = m.phi().evaluate(w);
    let image = kernel(phi_w, 0, weights, top)?.basis_coordinates(weights, n);
    let rhs: Vec<Complex64> = if order == 0 {
        image.iter().map(|v| psi_w.conj() * v).collect()
    } else {
        let dphi_w = m.phi().derivative().evaluate(w);
        let dpsi_w = m.psi().derivative().evaluate(w);
        let image1 = kernel(phi_w, 1, weights, top)?.basis_coordinates(weights, n);
        image
            .iter()
            .zip(&image1)
            .map(|(k0, k1)| (psi_w * dphi_w).conj() * k1 + dpsi_w.conj() * k0)
            .collect()
    };

    let residual = lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();

    let rho = 0.5 * (1.0 + w.norm());
    let q = w.norm() / rho;
    let sup_psi = m.psi().sup_on_circle(rho, TAIL_SAMPLES);
    let sup_phi = m.phi().sup_on_circle(rho, TAIL_SAMPLES);
    let nf = n as f64;
    let geometric_tail = if order == 0 {
        q.powi(n as i32) / (1.0 - q)
    } else {
        q.powi(n as i32 - 1) * (nf - (nf - 1.0) * q) / ((1.0 - q) * (1.0 - q)) / rho
    };
    let mut tail_sq = 0.0;
    let mut s_n = sup_psi;
    for col in 0..n {
        let b = s_n * geometric_tail / weights.beta(col);
        tail_sq += b * b;
        s_n *= sup_phi;
    }
    Ok(AdjointCheck {
        residual,
        tail_bound: tail_sq.sqrt(),
    })
}

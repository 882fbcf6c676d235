use nalgebra::linalg::Hessenberg;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::OperatorMatrix;
use crate::error::{Error, Result};
use crate::maps::FixedPointInfo;

pub const MAX_SPECTRUM_DIM: usize = 512;
const ITERATIONS_PER_EIGENVALUE: usize = 60;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// All eigenvalues of the truncated matrix, by decreasing modulus and then by
/// argument in `[-π, π)`.
pub fn spectrum(m: &OperatorMatrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n > MAX_SPECTRUM_DIM {
        return Err(Error::MatrixTooLarge(n));
    }
    let mut eig = eigenvalues(m.entries().clone())?;
    eig.sort_by(|x, y| {
        y.norm()
            .total_cmp(&x.norm())
            .then_with(|| arg_half_open(*x).total_cmp(&arg_half_open(*y)))
    });
    Ok(eig)
}

/// Eigenvalues of a general complex matrix: Householder reduction to
/// Hessenberg form, then single-shift QR with Wilkinson shifts and an
/// exceptional shift every tenth sweep without deflation.
pub fn eigenvalues(a: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = Hessenberg::new(a).unpack_h();
    let mut eig = vec![ZERO; n];
    let mut hi = n;
    let mut its = 0usize;
    let mut total = 0usize;
    let budget = ITERATIONS_PER_EIGENVALUE * n;
    while hi > 0 {
        let mut l = hi - 1;
        while l > 0 {
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if h[(l, l - 1)].norm() <= f64::EPSILON * scale {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            eig[hi - 1] = h[(hi - 1, hi - 1)];
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if total > budget {
            return Err(Error::ConvergenceFailure);
        }
        let shift = if its.is_multiple_of(10) {
            h[(hi - 1, hi - 1)] + 0.75 * h[(hi - 1, hi - 2)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };
        qr_sweep(&mut h, l, hi, shift);
    }
    Ok(eig)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = 0.5 * (a - d);
    let root = (half * half + b * c).sqrt();
    let mean = 0.5 * (a + d);
    let (r1, r2) = (mean + root, mean - root);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// `(c, s)` with `[[c, s], [-conj(s), c]] · [x, y]ᵀ = [r, 0]ᵀ`, `c` real.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    let r = ax.hypot(y.norm());
    (ax / r, (x / ax) * y.conj() / r)
}

/// One implicit single-shift QR step on the unreduced block `l..hi`.
fn qr_sweep(h: &mut DMatrix<Complex64>, l: usize, hi: usize, shift: Complex64) {
    for k in l..hi - 1 {
        let (x, y) = if k == l {
            (h[(l, l)] - shift, h[(l + 1, l)])
        } else {
            (h[(k, k - 1)], h[(k + 1, k - 1)])
        };
        let (c, s) = givens(x, y);
        for j in (if k == l { l } else { k - 1 })..hi {
            let (a, b) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = c * a + s * b;
            h[(k + 1, j)] = -s.conj() * a + c * b;
        }
        for i in l..(k + 3).min(hi) {
            let (a, b) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = c * a + s.conj() * b;
            h[(i, k + 1)] = -s * a + c * b;
        }
        if k > l {
            h[(k + 1, k - 1)] = ZERO;
        }
    }
}

fn arg_half_open(z: Complex64) -> f64 {
    let a = z.arg();
    if a == std::f64::consts::PI {
        -a
    } else {
        a
    }
}

/// Distance from each `ψ(w0) φ'(w0)^n`, `n = 0..=n_max`, to the nearest eigenvalue.
pub fn ladder_distances(
    eigenvalues: &[Complex64],
    fp: &FixedPointInfo,
    psi_at_w0: Complex64,
    n_max: usize,
) -> Vec<f64> {
    let mut target = psi_at_w0;
    (0..=n_max)
        .map(|_| {
            let d = eigenvalues
                .iter()
                .map(|e| (e - target).norm())
                .fold(f64::INFINITY, f64::min);
            target *= fp.derivative_at_w0;
            d
        })
        .collect()
}

pub fn eigen_ladder_check(
    m: &OperatorMatrix,
    fp: &FixedPointInfo,
    psi_at_w0: Complex64,
    n_max: usize,
) -> Result<Vec<f64>> {
    if !fp.interior {
        return Err(Error::NotInteriorFixedPoint(fp.w0));
    }
    Ok(ladder_distances(&spectrum(m)?, fp, psi_at_w0, n_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{ppf_map, MobiusMap, PPFParams};
    use crate::operator::build_matrix;
    use crate::series::TruncatedSeries;
    use crate::space::WeightSequence;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum() {
        let n = 10;
        let a = c(0.5, 0.0);
        let m = build_matrix(
            &TruncatedSeries::monomial(1, a, n),
            &TruncatedSeries::one(n),
            &WeightSequence::hardy(n),
            n,
        )
        .unwrap();
        let eig = spectrum(&m).unwrap();
        for (k, e) in eig.iter().enumerate() {
            assert!((e - a.powu(k as u32)).norm() < 1e-15);
        }
    }

    #[test]
    fn triangular_spectrum_is_diagonal() {
        // φ(0) = 0 makes the matrix lower triangular.
        let n = 12;
        let phi = TruncatedSeries::from_real(&[0.0, 0.6, 0.2, -0.1], n);
        let psi = TruncatedSeries::from_real(&[0.8, 0.3], n);
        let m = build_matrix(&phi, &psi, &WeightSequence::hardy(n), n).unwrap();
        let eig = spectrum(&m).unwrap();
        for k in 0..n {
            let d = m.get(k, k);
            assert!(eig.iter().any(|e| (e - d).norm() < 1e-10), "diag {k}");
        }
    }

    #[test]
    fn ppf_ladder_converges() {
        let p = PPFParams::new(c(0.3, 0.0), c(0.4, 0.0), c(1.0, 0.0), 1.0).unwrap();
        let fp = ppf_map(&p).unwrap().fixed_point_in_disk().unwrap();
        let n = 64;
        let m = build_matrix(
            &p.phi_series(n),
            &p.psi_series(n),
            &WeightSequence::hardy(n),
            n,
        )
        .unwrap();
        let d = eigen_ladder_check(&m, &fp, p.psi(fp.w0), 4).unwrap();
        assert!(d.iter().all(|&x| x <= 1e-6), "{d:?}");
    }

    #[test]
    fn affine_linear_ladder_is_exact() {
        let n = 16;
        let a = c(0.3, 0.2);
        let b = c(1.5, -0.5);
        let m = build_matrix(
            &TruncatedSeries::monomial(1, a, n),
            &TruncatedSeries::constant(b, n),
            &WeightSequence::hardy(n),
            n,
        )
        .unwrap();
        let fp = MobiusMap::linear(a).unwrap().fixed_point_in_disk().unwrap();
        let d = eigen_ladder_check(&m, &fp, b, 6).unwrap();
        assert!(d.iter().all(|&x| x < 1e-15), "{d:?}");
    }

    #[test]
    fn matches_schur_on_random_matrices() {
        use nalgebra::linalg::Schur;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5, 17, 40] {
            let a = DMatrix::from_fn(n, n, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let ours = eigenvalues(a.clone()).unwrap();
            let theirs = Schur::new(a).eigenvalues().unwrap();
            for t in theirs.iter() {
                let d = ours
                    .iter()
                    .map(|o| (o - t).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(d < 1e-10, "n={n}: {t} missing, nearest at {d}");
            }
        }
    }

    #[test]
    fn involution_matrix_converges() {
        // Truncated composition matrix of an automorphism: ill-conditioned with
        // clustered eigenvalues at ±1.
        let n = 64;
        let s = MobiusMap::involutive_automorphism(c(0.5, 0.0)).unwrap();
        let m = build_matrix(
            &s.to_series(n - 1).unwrap(),
            &TruncatedSeries::one(n - 1),
            &WeightSequence::hardy(n - 1),
            n,
        )
        .unwrap();
        let eig = spectrum(&m).unwrap();
        assert_eq!(eig.len(), n);
    }

    #[test]
    fn sorted_by_modulus_then_argument() {
        let n = 6;
        let m = build_matrix(
            &TruncatedSeries::monomial(1, c(-1.0, 0.0), n),
            &TruncatedSeries::one(n),
            &WeightSequence::hardy(n),
            n,
        )
        .unwrap();
        let eig = spectrum(&m).unwrap();
        // Moduli tie at 1: -1 (argument -π) sorts before 1.
        assert!((eig[0] + c(1.0, 0.0)).norm() < 1e-15);
        assert!((eig[n - 1] - c(1.0, 0.0)).norm() < 1e-15);
    }
}

//! Registered numerical checks behind `wco verify`.
//!
//! Each check yields one [`CheckRecord`] with `pass ⟺ metric <= tolerance`.
//! Lower bounds ("at least x") are recorded as `metric = bound / observed`
//! against tolerance 1. Test ids are stable; new checks get new ids.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::report::Cx;
use super::SCHEMA;
use crate::error::Result;
use crate::koenigs::{
    consistency_check, koenigs_iterate, koenigs_iterate_stepwise, obstruction_value,
    phi_from_koenigs, SelfMap, DEFAULT_MAX_ITER,
};
use crate::maps::{ppf_map, MobiusMap, PPFParams};
use crate::operator::{
    adjoint_kernel_check, build_matrix, default_grid, eigen_ladder_check, hermitian_residual,
    normality_residual_grid, transpose_symmetry_residual,
};
use crate::series::TruncatedSeries;
use crate::space::{
    kernel, norm, norm_profile, reproducing_check, WeightSequence, DEFAULT_DIVERGENCE_SLOPE,
};
use crate::Error;

/// Noise floor below which a larger ladder distance at larger N is not a regression.
pub const LADDER_NOISE_FLOOR: f64 = 1e-12;
pub const SWEEP_KAPPAS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
const SWEEP_PER_KAPPA: usize = 25;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub test_id: String,
    pub params: BTreeMap<String, Value>,
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub paper_anchor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub all_pass: bool,
}

struct Measure {
    params: BTreeMap<String, Value>,
    metric: f64,
    tolerance: f64,
}

impl Measure {
    fn upper(metric: f64, tolerance: f64) -> Self {
        Self {
            params: BTreeMap::new(),
            metric,
            tolerance,
        }
    }

    fn lower(observed: f64, bound: f64) -> Self {
        let metric = if observed > 0.0 {
            bound / observed
        } else {
            f64::INFINITY
        };
        Self::upper(metric, 1.0)
            .p("observed", observed)
            .p("lower_bound", bound)
    }

    fn p(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serializable param"),
        );
        self
    }
}

struct Ctx {
    seed: u64,
}

impl Ctx {
    /// Independent stream per check so results do not depend on scheduling.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

struct Registered {
    id: &'static str,
    anchor: &'static str,
    run: fn(&Ctx) -> Result<Measure>,
}

const REGISTRY: &[Registered] = &[
    Registered {
        id: "converse.unweighted.a0_nonzero",
        anchor: "unweighted-symmetric-forces-linear",
        run: converse_nonzero,
    },
    Registered {
        id: "converse.unweighted.a0_zero",
        anchor: "unweighted-symmetric-forces-linear",
        run: converse_zero,
    },
    Registered {
        id: "koenigs.consistency.refuses_divergent",
        anchor: "koenigs-obstruction",
        run: consistency_refuses,
    },
    Registered {
        id: "koenigs.consistency.w0_zero",
        anchor: "koenigs-obstruction",
        run: consistency_w0_zero,
    },
    Registered {
        id: "koenigs.hardy_divergence",
        anchor: "koenigs-not-in-hardy",
        run: hardy_divergence,
    },
    Registered {
        id: "koenigs.kappa_from_phi",
        anchor: "koenigs-round-trip",
        run: kappa_from_phi,
    },
    Registered {
        id: "koenigs.obstruction.closed_form",
        anchor: "koenigs-obstruction",
        run: obstruction_closed_form,
    },
    Registered {
        id: "koenigs.obstruction.truncation_stable",
        anchor: "koenigs-obstruction",
        run: obstruction_stable,
    },
    Registered {
        id: "koenigs.obstruction.w0_zero",
        anchor: "koenigs-obstruction",
        run: obstruction_zero,
    },
    Registered {
        id: "koenigs.phi_from_kappa",
        anchor: "koenigs-round-trip",
        run: phi_from_kappa,
    },
    Registered {
        id: "koenigs.schroeder_sweep",
        anchor: "schroeder-equation",
        run: schroeder_sweep,
    },
    Registered {
        id: "koenigs.uniqueness",
        anchor: "koenigs-unique-up-to-scalar",
        run: koenigs_uniqueness,
    },
    Registered {
        id: "maps.involution.derivative",
        anchor: "involution-example",
        run: involution_derivative,
    },
    Registered {
        id: "maps.involution.fixed_point",
        anchor: "involution-example",
        run: involution_fixed_point,
    },
    Registered {
        id: "maps.involution.identity",
        anchor: "involution-example",
        run: involution_identity,
    },
    Registered {
        id: "maps.involution.spectrum",
        anchor: "involution-example",
        run: involution_spectrum,
    },
    Registered {
        id: "maps.ppf_mobius_series",
        anchor: "ppf-family",
        run: ppf_mobius_series,
    },
    Registered {
        id: "operator.adjoint.linear_exact",
        anchor: "adjoint-kernel-formulas",
        run: adjoint_linear_exact,
    },
    Registered {
        id: "operator.adjoint.order0",
        anchor: "adjoint-kernel-formulas",
        run: adjoint_order0,
    },
    Registered {
        id: "operator.adjoint.order1",
        anchor: "adjoint-kernel-formulas",
        run: adjoint_order1,
    },
    Registered {
        id: "operator.adjoint.tail_bound",
        anchor: "adjoint-kernel-formulas",
        run: adjoint_tail_bound,
    },
    Registered {
        id: "operator.matrix_nested",
        anchor: "matrix-representation",
        run: matrix_nested,
    },
    Registered {
        id: "operator.z_squared_asymmetric",
        anchor: "ppf-symmetric-iff",
        run: z_squared,
    },
    Registered {
        id: "ppf.eigen_ladder.monotone",
        anchor: "eigenvalue-ladder",
        run: ladder_monotone,
    },
    Registered {
        id: "ppf.eigen_ladder.n64",
        anchor: "eigenvalue-ladder",
        run: ladder_n64,
    },
    Registered {
        id: "ppf.hermitian.iff_real_sweep",
        anchor: "ppf-hermitian-iff-real",
        run: hermitian_sweep,
    },
    Registered {
        id: "ppf.hermitian.real",
        anchor: "ppf-hermitian-iff-real",
        run: hermitian_real,
    },
    Registered {
        id: "ppf.hermitian.rotated_b",
        anchor: "ppf-hermitian-iff-real",
        run: hermitian_rotated,
    },
    Registered {
        id: "ppf.normal.condition_fails",
        anchor: "ppf-normal-iff",
        run: normal_fails,
    },
    Registered {
        id: "ppf.normal.condition_holds",
        anchor: "ppf-normal-iff",
        run: normal_holds,
    },
    Registered {
        id: "ppf.normal.iff_sweep",
        anchor: "ppf-normal-iff",
        run: normal_sweep,
    },
    Registered {
        id: "ppf.normal.zero_b",
        anchor: "ppf-normal-iff",
        run: normal_zero_b,
    },
    Registered {
        id: "ppf.symmetric.kappa_1",
        anchor: "ppf-symmetric-iff",
        run: |c| symmetric_sweep(c, 0),
    },
    Registered {
        id: "ppf.symmetric.kappa_1_5",
        anchor: "ppf-symmetric-iff",
        run: |c| symmetric_sweep(c, 1),
    },
    Registered {
        id: "ppf.symmetric.kappa_2",
        anchor: "ppf-symmetric-iff",
        run: |c| symmetric_sweep(c, 2),
    },
    Registered {
        id: "ppf.symmetric.kappa_3",
        anchor: "ppf-symmetric-iff",
        run: |c| symmetric_sweep(c, 3),
    },
    Registered {
        id: "series.revert_roundtrip",
        anchor: "series-reversion",
        run: revert_roundtrip,
    },
    Registered {
        id: "space.kernel_norm",
        anchor: "reproducing-kernel",
        run: kernel_norm,
    },
    Registered {
        id: "space.reproducing_kernel",
        anchor: "reproducing-kernel",
        run: reproducing_kernel,
    },
];

/// Ids of every registered check, sorted.
pub fn test_ids() -> Vec<&'static str> {
    let mut ids: Vec<_> = REGISTRY.iter().map(|r| r.id).collect();
    ids.sort_unstable();
    ids
}

pub fn run_suite(seed: u64, filter: Option<&str>) -> VerifyReport {
    let ctx = Ctx { seed };
    let mut records: Vec<CheckRecord> = REGISTRY
        .par_iter()
        .filter(|r| filter.is_none_or(|f| r.id.contains(f)))
        .map(|r| {
            let (params, metric, tolerance) = match (r.run)(&ctx) {
                Ok(m) => (m.params, m.metric, m.tolerance),
                Err(e) => {
                    let mut params = BTreeMap::new();
                    params.insert("error".to_string(), Value::String(e.to_string()));
                    (params, f64::INFINITY, 0.0)
                }
            };
            CheckRecord {
                test_id: r.id.to_string(),
                params,
                metric,
                tolerance,
                pass: metric <= tolerance,
                paper_anchor: r.anchor.to_string(),
            }
        })
        .collect();
    records.sort_by(|a, b| a.test_id.cmp(&b.test_id));
    let all_pass = records.iter().all(|r| r.pass);
    VerifyReport {
        schema: SCHEMA,
        seed,
        records,
        all_pass,
    }
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn in_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
}

/// Rejection sample with `|a0| <= 0.5`, `|a1| <= 0.4`, `|b| <= 2`, keeping
/// only parameters whose `φ` maps the disk into itself.
pub fn random_ppf<R: Rng>(rng: &mut R, kappa: f64) -> PPFParams {
    loop {
        let (a0, a1, b) = (in_disk(rng, 0.5), in_disk(rng, 0.4), in_disk(rng, 2.0));
        if let Ok(p) = PPFParams::new(a0, a1, b, kappa) {
            return p;
        }
    }
}

/// Random self-map PPF parameters with `b != 0` satisfying
/// `Im(a0 conj(a1)) = (1 - |a0|²) Im(a0)`.
pub fn random_normal_ppf<R: Rng>(rng: &mut R, kappa: f64) -> PPFParams {
    loop {
        let a0 = in_disk(rng, 0.5);
        if a0.re.abs() < 0.05 {
            continue;
        }
        let x = rng.gen_range(-0.6..0.6);
        let y = (a0.im * x - (1.0 - a0.norm_sqr()) * a0.im) / a0.re;
        let b = in_disk(rng, 2.0);
        if let Ok(p) = PPFParams::new(a0, c(x, y), b, kappa) {
            return p;
        }
    }
}

/// Right-hand side gap of the normality condition; 0 when it holds.
pub fn normality_condition_gap(p: &PPFParams) -> f64 {
    ((p.a0 * p.a1.conj()).im - (1.0 - p.a0.norm_sqr()) * p.a0.im).abs()
}

fn ppf_matrix(p: &PPFParams, n: usize) -> Result<crate::OperatorMatrix> {
    build_matrix(
        &p.phi_series(n - 1),
        &p.psi_series(n - 1),
        &WeightSequence::beta_kappa(p.kappa, n - 1)?,
        n,
    )
}

fn ladder_example() -> Result<PPFParams> {
    PPFParams::new(c(0.3, 0.0), c(0.4, 0.0), c(1.0, 0.0), 1.0)
}

fn ladder_at(p: &PPFParams, n: usize) -> Result<Vec<f64>> {
    let fp = ppf_map(p)?.fixed_point_in_disk()?;
    eigen_ladder_check(&ppf_matrix(p, n)?, &fp, p.psi(fp.w0), 4)
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn series_revert_target(degree: usize) -> TruncatedSeries {
    let mut coeffs = vec![c(1.0, 0.0); degree + 1];
    coeffs[0] = c(0.0, 0.0);
    TruncatedSeries::new(coeffs)
}

fn revert_roundtrip(_: &Ctx) -> Result<Measure> {
    let s = series_revert_target(10);
    let r = s.revert()?;
    let compose_dev = s.compose(&r)?.max_abs_diff(&TruncatedSeries::identity(10));
    let expected: Vec<Complex64> = (0..=10)
        .map(|k| {
            if k == 0 {
                c(0.0, 0.0)
            } else {
                c(if k % 2 == 1 { 1.0 } else { -1.0 }, 0.0)
            }
        })
        .collect();
    let coeff_dev = r.max_abs_diff(&TruncatedSeries::new(expected));
    Ok(Measure::upper(compose_dev.max(coeff_dev), 1e-14)
        .p("degree", 10)
        .p("series", "z/(1-z)"))
}

fn reproducing_kernel(_: &Ctx) -> Result<Measure> {
    let w = WeightSequence::beta_kappa(2.0, 24)?;
    let f = TruncatedSeries::from_real(&[0.3, -1.0, 2.0, 0.5], 24);
    let at = c(0.2, 0.6);
    let r = reproducing_check(&f, at, 0, &w)?.max(reproducing_check(&f, at, 1, &w)?);
    Ok(Measure::upper(r, 1e-12)
        .p("kappa", 2.0)
        .p("w", Cx(at))
        .p("orders", [0, 1]))
}

fn kernel_norm(_: &Ctx) -> Result<Measure> {
    let kappa = 2.0;
    let n = 128;
    let at = c(0.5, 0.3);
    let w = WeightSequence::beta_kappa(kappa, n)?;
    let k = kernel(at, 0, &w, n)?;
    let closed = (1.0 - at.norm_sqr()).powf(-kappa);
    let rel = (norm(&k.coeffs, &w).powi(2) - closed).abs() / closed;
    Ok(Measure::upper(rel, 1e-12)
        .p("kappa", kappa)
        .p("trunc", n)
        .p("w", Cx(at)))
}

fn involution() -> Result<MobiusMap> {
    MobiusMap::involutive_automorphism(c(0.5, 0.0))
}

fn involution_fixed_point(_: &Ctx) -> Result<Measure> {
    let fp = involution()?.fixed_point_in_disk()?;
    let d = (fp.w0 - c(2.0 - 3f64.sqrt(), 0.0)).norm();
    Ok(Measure::upper(d, 1e-12).p("a", 0.5).p("w0", Cx(fp.w0)))
}

fn involution_derivative(_: &Ctx) -> Result<Measure> {
    let fp = involution()?.fixed_point_in_disk()?;
    Ok(Measure::upper((fp.derivative_at_w0 + 1.0).norm(), 1e-12)
        .p("a", 0.5)
        .p("derivative", Cx(fp.derivative_at_w0)))
}

fn involution_identity(_: &Ctx) -> Result<Measure> {
    let s = involution()?;
    let d = s
        .compose(&s)?
        .normalized()
        .projective_distance(&MobiusMap::identity());
    Ok(Measure::upper(d, 1e-14).p("a", 0.5))
}

/// Only the eigenvalues nearest ±1 are tested; the rest of the truncated
/// spectrum carries no information about the operator.
fn involution_spectrum(_: &Ctx) -> Result<Measure> {
    let n = 32;
    let s = involution()?;
    let m = build_matrix(
        &s.to_series(n - 1)?,
        &TruncatedSeries::one(n - 1),
        &WeightSequence::hardy(n - 1),
        n,
    )?;
    let eig = crate::operator::spectrum(&m)?;
    let near = |t: Complex64| {
        eig.iter()
            .map(|e| (e - t).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let d = near(c(1.0, 0.0)).max(near(c(-1.0, 0.0)));
    Ok(Measure::upper(d, 1e-6).p("a", 0.5).p("trunc", n))
}

fn ppf_mobius_series(_: &Ctx) -> Result<Measure> {
    let p = PPFParams::new(c(0.2, 0.1), c(0.5, -0.2), c(1.0, 0.0), 1.0)?;
    let d = ppf_map(&p)?.to_series(24)?.max_abs_diff(&p.phi_series(24));
    Ok(Measure::upper(d, 1e-14)
        .p("a0", Cx(p.a0))
        .p("a1", Cx(p.a1))
        .p("degree", 24))
}

fn symmetric_sweep(ctx: &Ctx, k: usize) -> Result<Measure> {
    let kappa = SWEEP_KAPPAS[k];
    let mut rng = ctx.rng(100 + k as u64);
    let n = 32;
    let mut worst: f64 = 0.0;
    for _ in 0..SWEEP_PER_KAPPA {
        let p = random_ppf(&mut rng, kappa);
        let m = ppf_matrix(&p, n)?;
        worst = worst.max(transpose_symmetry_residual(&m) / m.max_entry().max(1.0));
    }
    Ok(Measure::upper(worst, 1e-12)
        .p("kappa", kappa)
        .p("samples", SWEEP_PER_KAPPA)
        .p("trunc", n)
        .p("seed", ctx.seed))
}

fn z_squared(_: &Ctx) -> Result<Measure> {
    let n = 16;
    let m = build_matrix(
        &TruncatedSeries::monomial(2, c(1.0, 0.0), n - 1),
        &TruncatedSeries::one(n - 1),
        &WeightSequence::hardy(n - 1),
        n,
    )?;
    Ok(Measure::lower(transpose_symmetry_residual(&m), 1.0)
        .p("entry_2_1", Cx(m.get(2, 1)))
        .p("entry_1_2", Cx(m.get(1, 2)))
        .p("trunc", n))
}

fn hermitian_real(_: &Ctx) -> Result<Measure> {
    let p = PPFParams::new(c(0.2, 0.0), c(0.5, 0.0), c(1.0, 0.0), 1.0)?;
    Ok(
        Measure::upper(hermitian_residual(&ppf_matrix(&p, 32)?), 1e-12)
            .p("a0", 0.2)
            .p("a1", 0.5)
            .p("b", 1.0),
    )
}

fn hermitian_rotated(_: &Ctx) -> Result<Measure> {
    let b = Complex64::from_polar(1.0, 1e-3);
    let p = PPFParams::new(c(0.2, 0.0), c(0.5, 0.0), b, 1.0)?;
    Ok(Measure::lower(hermitian_residual(&ppf_matrix(&p, 32)?), 5e-4).p("b", Cx(b)))
}

/// Real triples and single-parameter rotations by `e^{i 10^-3}`: the hermitian
/// verdict must match "all three real".
fn hermitian_sweep(ctx: &Ctx) -> Result<Measure> {
    let mut rng = ctx.rng(200);
    let rot = Complex64::from_polar(1.0, 1e-3);
    let n = 32;
    let (mut cases, mut mismatches) = (0usize, 0usize);
    while cases < 40 {
        let kappa = SWEEP_KAPPAS[cases % 4];
        let (a0, a1, b) = (
            rng.gen_range(-0.5..0.5),
            rng.gen_range(0.05..0.4),
            rng.gen_range(0.1..2.0),
        );
        let Ok(real) = PPFParams::new(c(a0, 0.0), c(a1, 0.0), c(b, 0.0), kappa) else {
            continue;
        };
        let mut variants = vec![(real, true)];
        for which in 0..3 {
            let mut q = real;
            match which {
                0 => q.a0 *= rot,
                1 => q.a1 *= rot,
                _ => q.b *= rot,
            }
            if let Ok(q) = PPFParams::new(q.a0, q.a1, q.b, kappa) {
                variants.push((q, false));
            }
        }
        for (q, expect) in variants {
            let m = ppf_matrix(&q, n)?;
            let herm = hermitian_residual(&m) <= 1e-12 * m.max_entry().max(1.0);
            cases += 1;
            mismatches += usize::from(herm != expect);
        }
    }
    Ok(Measure::upper(mismatches as f64, 0.0)
        .p("cases", cases)
        .p("seed", ctx.seed)
        .p("trunc", n))
}

fn normal_holds(_: &Ctx) -> Result<Measure> {
    let p = PPFParams::new(c(0.0, 0.5), c(0.75, 0.0), c(1.0, 0.0), 1.0)?;
    let r = normality_residual_grid(&p, &default_grid(5))?;
    Ok(Measure::upper(r, 1e-12)
        .p("a0", Cx(p.a0))
        .p("a1", Cx(p.a1))
        .p("grid_points", 25))
}

fn normal_fails(_: &Ctx) -> Result<Measure> {
    let p = PPFParams::new(c(0.0, 0.5), c(0.25, 0.0), c(1.0, 0.0), 1.0)?;
    let r = normality_residual_grid(&p, &default_grid(5))?;
    Ok(Measure::lower(r, 1e-3)
        .p("a0", Cx(p.a0))
        .p("a1", Cx(p.a1))
        .p("grid_points", 25))
}

fn normal_zero_b(_: &Ctx) -> Result<Measure> {
    let p = PPFParams::new(c(0.0, 0.5), c(0.25, 0.0), c(0.0, 0.0), 1.0)?;
    let r = normality_residual_grid(&p, &default_grid(5))?;
    Ok(Measure::upper(r, 1e-12)
        .p("a0", Cx(p.a0))
        .p("a1", Cx(p.a1))
        .p("b", Cx(p.b)))
}

/// Grid verdict against the closed-form condition on a mix of samples that
/// satisfy it by construction and generic samples that do not.
fn normal_sweep(ctx: &Ctx) -> Result<Measure> {
    let mut rng = ctx.rng(300);
    let grid = default_grid(5);
    let mut mismatches = 0usize;
    let total = 40;
    for k in 0..total {
        let kappa = SWEEP_KAPPAS[k % 4];
        let p = if k % 2 == 0 {
            random_normal_ppf(&mut rng, kappa)
        } else {
            random_ppf(&mut rng, kappa)
        };
        let predicted = p.b == c(0.0, 0.0) || normality_condition_gap(&p) <= 1e-12;
        let observed = normality_residual_grid(&p, &grid)? <= 1e-10;
        mismatches += usize::from(predicted != observed);
    }
    Ok(Measure::upper(mismatches as f64, 0.0)
        .p("cases", total)
        .p("seed", ctx.seed))
}

fn ladder_n64(_: &Ctx) -> Result<Measure> {
    let d = ladder_at(&ladder_example()?, 64)?;
    Ok(Measure::upper(max_of(d.iter().copied()), 1e-6)
        .p("trunc", 64)
        .p("distances", d)
        .p("n_max", 4))
}

fn ladder_monotone(_: &Ctx) -> Result<Measure> {
    let p = ladder_example()?;
    let runs: Vec<Vec<f64>> = [16, 32, 64]
        .iter()
        .map(|&n| ladder_at(&p, n))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for w in runs.windows(2) {
        for (prev, next) in w[0].iter().zip(&w[1]) {
            worst = worst.max(next - prev.max(LADDER_NOISE_FLOOR));
        }
    }
    Ok(Measure::upper(worst.max(0.0), 0.0)
        .p("truncs", [16, 32, 64])
        .p("noise_floor", LADDER_NOISE_FLOOR))
}

fn lambda_map(lambda: f64) -> Result<MobiusMap> {
    MobiusMap::new(
        c(lambda, 0.0),
        c(0.0, 0.0),
        c(lambda - 1.0, 0.0),
        c(1.0, 0.0),
    )
}

fn phi_from_kappa(_: &Ctx) -> Result<Measure> {
    let kappa = series_revert_target(12).scale(c(2.0, 0.0));
    let phi = phi_from_koenigs(&kappa, c(0.5, 0.0))?;
    let d = phi.max_abs_diff(&lambda_map(0.5)?.to_series(12)?);
    Ok(Measure::upper(d, 1e-8).p("lambda", 0.5).p("degree", 12))
}

fn kappa_from_phi(_: &Ctx) -> Result<Measure> {
    let m = lambda_map(0.5)?;
    let fp = m.fixed_point_in_disk()?;
    let kr = koenigs_iterate(&SelfMap::Mobius(m), &fp, 32, DEFAULT_MAX_ITER)?;
    let d = kr
        .kappa_original
        .truncate(10)
        .max_abs_diff(&series_revert_target(10));
    Ok(Measure::upper(d, 1e-8)
        .p("lambda", 0.5)
        .p("degree", 10)
        .p("iterations", kr.iterations))
}

fn hardy_divergence(_: &Ctx) -> Result<Measure> {
    let n = 64;
    let kappa = series_revert_target(n).scale(c(2.0, 0.0));
    let slope = norm_profile(&kappa, &WeightSequence::hardy(n)).tail_slope();
    Ok(Measure::lower(slope, DEFAULT_DIVERGENCE_SLOPE).p("degree", n))
}

/// Conjugates of `z ↦ λ z` by disk automorphisms, fixed point `w0`, multiplier `λ`.
fn conjugated_linear(lambda: Complex64, w0: Complex64) -> Result<MobiusMap> {
    let s = MobiusMap::involutive_automorphism(w0)?;
    s.compose(&MobiusMap::linear(lambda)?)?.compose(&s)
}

fn schroeder_sweep(_: &Ctx) -> Result<Measure> {
    let lambdas = [
        c(0.05, 0.0),
        c(0.3, 0.0),
        c(0.6, 0.0),
        c(0.95, 0.0),
        c(0.0, 0.5),
        c(-0.7, 0.0),
        c(0.4, 0.4),
    ];
    let points = [c(0.0, 0.0), c(0.3, 0.0), c(-0.2, 0.4)];
    let mut worst: f64 = 0.0;
    for &l in &lambdas {
        for &w0 in &points {
            let m = conjugated_linear(l, w0)?;
            let fp = m.fixed_point_in_disk()?;
            let kr = koenigs_iterate(&SelfMap::Mobius(m), &fp, 32, DEFAULT_MAX_ITER)?;
            worst = worst.max(kr.schroeder_residual);
        }
    }
    // A nonlinear series map as well.
    let phi = TruncatedSeries::from_real(&[0.0, 0.5, 0.2], 32);
    let fp = crate::koenigs::fixed_point_of_series(&phi)?;
    worst = worst
        .max(koenigs_iterate(&SelfMap::Series(phi), &fp, 32, DEFAULT_MAX_ITER)?.schroeder_residual);
    Ok(Measure::upper(worst, 1e-8)
        .p("cases", lambdas.len() * points.len() + 1)
        .p("degree", 32))
}

fn koenigs_uniqueness(ctx: &Ctx) -> Result<Measure> {
    let phi = SelfMap::Series(TruncatedSeries::from_real(&[0.0, 0.5, 0.2], 24));
    let fp = crate::maps::FixedPointInfo {
        w0: c(0.0, 0.0),
        derivative_at_w0: c(0.5, 0.0),
        interior: true,
    };
    let a = koenigs_iterate(&phi, &fp, 24, DEFAULT_MAX_ITER)?;
    let mut rng = ctx.rng(400);
    let mut seed_coeffs = vec![c(0.0, 0.0), c(1.0, 0.0)];
    seed_coeffs.extend((0..3).map(|_| in_disk(&mut rng, 0.3)));
    let b = koenigs_iterate_stepwise(
        &phi,
        &fp,
        24,
        DEFAULT_MAX_ITER,
        &TruncatedSeries::new(seed_coeffs),
    )?;
    Ok(
        Measure::upper(a.kappa_series.max_abs_diff(&b.kappa_series), 1e-10)
            .p("degree", 24)
            .p("seed", ctx.seed),
    )
}

fn obstruction_closed_form(_: &Ctx) -> Result<Measure> {
    let w0 = c(0.5, 0.0);
    let v = obstruction_value(w0, &WeightSequence::hardy(128), 128)?;
    let closed = w0.norm() / (1.0 + w0.norm_sqr()).sqrt();
    Ok(Measure::upper((v - closed).abs(), 1e-10)
        .p("w0", Cx(w0))
        .p("trunc", 128)
        .p("value", v))
}

fn obstruction_zero(_: &Ctx) -> Result<Measure> {
    let v = obstruction_value(c(0.0, 0.0), &WeightSequence::hardy(128), 128)?;
    Ok(Measure::upper(v, 0.0).p("trunc", 128))
}

fn obstruction_stable(_: &Ctx) -> Result<Measure> {
    let w0 = c(0.5, 0.3);
    let at = |n: usize| -> Result<f64> {
        obstruction_value(w0, &WeightSequence::beta_kappa(2.0, n)?, n)
    };
    Ok(Measure::upper((at(64)? - at(128)?).abs(), 1e-10)
        .p("w0", Cx(w0))
        .p("kappa", 2.0)
        .p("truncs", [64, 128]))
}

fn consistency_refuses(_: &Ctx) -> Result<Measure> {
    let m = lambda_map(0.5)?;
    let fp = m.fixed_point_in_disk()?;
    let kr = koenigs_iterate(&SelfMap::Mobius(m), &fp, 64, DEFAULT_MAX_ITER)?;
    let refused = matches!(
        consistency_check(&kr, &WeightSequence::hardy(64)),
        Err(Error::DivergentKoenigsNorm(_))
    );
    Ok(Measure::upper(if refused { 0.0 } else { 1.0 }, 0.0)
        .p("lambda", 0.5)
        .p("degree", 64))
}

fn consistency_w0_zero(_: &Ctx) -> Result<Measure> {
    let m = MobiusMap::linear(c(0.5, 0.0))?;
    let fp = m.fixed_point_in_disk()?;
    let kr = koenigs_iterate(&SelfMap::Mobius(m), &fp, 64, DEFAULT_MAX_ITER)?;
    let cc = consistency_check(&kr, &WeightSequence::hardy(64))?;
    Ok(Measure::upper(cc.lhs.abs().max(cc.rhs.abs()), 0.0)
        .p("lhs", cc.lhs)
        .p("rhs", cc.rhs))
}

fn adjoint_order(order: usize) -> Result<Measure> {
    let p = ladder_example()?;
    let chk = adjoint_kernel_check(&ppf_matrix(&p, 64)?, c(0.5, 0.0), order)?;
    Ok(Measure::upper(chk.residual, 1e-6)
        .p("order", order)
        .p("trunc", 64)
        .p("tail_bound", chk.tail_bound))
}

fn adjoint_order0(_: &Ctx) -> Result<Measure> {
    adjoint_order(0)
}

fn adjoint_order1(_: &Ctx) -> Result<Measure> {
    adjoint_order(1)
}

fn adjoint_tail_bound(_: &Ctx) -> Result<Measure> {
    let p = PPFParams::new(c(0.2, 0.2), c(0.5, 0.1), c(1.0, -0.5), 2.0)?;
    let m = ppf_matrix(&p, 48)?;
    let mut worst: f64 = 0.0;
    for order in [0, 1] {
        for w in [c(0.3, 0.4), c(-0.6, 0.0)] {
            let chk = adjoint_kernel_check(&m, w, order)?;
            worst = worst.max(chk.residual / (chk.tail_bound + 1e-13));
        }
    }
    Ok(Measure::upper(worst, 1.0).p("trunc", 48).p("kappa", 2.0))
}

fn adjoint_linear_exact(_: &Ctx) -> Result<Measure> {
    let n = 16;
    let m = build_matrix(
        &TruncatedSeries::monomial(1, c(0.6, -0.2), n - 1),
        &TruncatedSeries::one(n - 1),
        &WeightSequence::hardy(n - 1),
        n,
    )?;
    let r0 = adjoint_kernel_check(&m, c(0.0, 0.0), 0)?.residual;
    let r1 = adjoint_kernel_check(&m, c(0.0, 0.0), 1)?.residual;
    Ok(Measure::upper(r0.max(r1), 0.0).p("a", Cx(c(0.6, -0.2))))
}

fn matrix_nested(_: &Ctx) -> Result<Measure> {
    let p = PPFParams::new(c(0.1, 0.3), c(0.4, -0.2), c(0.7, 0.2), 1.5)?;
    let small = ppf_matrix(&p, 16)?;
    let big = ppf_matrix(&p, 32)?;
    let mut worst: f64 = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            worst = worst.max((small.get(i, j) - big.get(i, j)).norm());
        }
    }
    Ok(Measure::upper(worst, 0.0).p("truncs", [16, 32]))
}

fn unweighted(a0: Complex64, a1: Complex64) -> Result<f64> {
    let n = 32;
    let p = PPFParams::new(a0, a1, c(1.0, 0.0), 1.0)?;
    let m = build_matrix(
        &p.phi_series(n - 1),
        &TruncatedSeries::one(n - 1),
        &WeightSequence::hardy(n - 1),
        n,
    )?;
    Ok(transpose_symmetry_residual(&m))
}

const CONVERSE_A1: [Complex64; 3] = [c(0.2, 0.0), c(0.4, 0.0), c(0.2, 0.2)];

fn converse_nonzero(_: &Ctx) -> Result<Measure> {
    let mut least = f64::INFINITY;
    for a0 in [c(0.1, 0.0), c(0.0, 0.2), c(0.3, 0.0)] {
        for a1 in CONVERSE_A1 {
            least = least.min(unweighted(a0, a1)?);
        }
    }
    Ok(Measure::lower(least, 1e-2).p("a0", ["0.1", "0.2i", "0.3"]))
}

fn converse_zero(_: &Ctx) -> Result<Measure> {
    let worst = max_of(
        CONVERSE_A1
            .iter()
            .map(|&a1| unweighted(c(0.0, 0.0), a1))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(Measure::upper(worst, 1e-13).p("a0", 0.0))
}

//! Per-shot Wigner sampling of the detector intensities.
//!
//! Each shot draws the source phase θ (and the shared pump phase φ when an
//! amplifier is present), samples one phase-space point from the output
//! Gaussian and reads `i = η(x² + p² − 2)/4` at each detector.

use nalgebra::{DMatrix, Matrix4, Matrix4x2, Vector2, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::chain::{combiner_stage, middle_stages, splitter_stage, stages, AffineMap};
use super::params::ProcessParams;
use super::plan::{ExperimentPlan, Setting, SettingStats, ShotStats};
use super::scheme::{Coupler, Layout, SchemeConfig};
use crate::error::{Error, Result};
use crate::rng::{block_rng, uniform_phase};

const EIGEN_FLOOR: f64 = 1e-12;

fn to4(m: &DMatrix<f64>) -> Matrix4<f64> {
    let mut out = Matrix4::zeros();
    out.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    out
}

/// Lower-triangular square root, clipping tiny or round-off negative
/// eigenvalues when plain Cholesky fails.
fn sqrt_psd(cov: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    if let Some(ch) = cov.cholesky() {
        return Ok(ch.l());
    }
    let eig = cov.symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min < -1e-10 * eig.eigenvalues.amax().max(1.0) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    let clipped = eig.eigenvalues.map(|l| l.max(EIGEN_FLOOR));
    let rebuilt = eig.eigenvectors * Matrix4::from_diagonal(&clipped) * eig.eigenvectors.transpose();
    let rebuilt = (rebuilt + rebuilt.transpose()) * 0.5;
    rebuilt
        .cholesky()
        .map(|c| c.l())
        .ok_or(Error::NotPositiveSemidefinite { min_eigenvalue: min })
}

/// `L·z` with `L` the Cholesky factor of `cov`, unrolled for the per-shot
/// path; falls back to [`sqrt_psd`] for singular matrices.
fn correlate(cov: &Matrix4<f64>, z: &Vector4<f64>) -> Result<Vector4<f64>> {
    let mut l = [[0.0f64; 4]; 4];
    for j in 0..4 {
        let mut d = cov[(j, j)];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) {
            return Ok(sqrt_psd(cov)? * z);
        }
        let d = d.sqrt();
        l[j][j] = d;
        for i in j + 1..4 {
            let mut v = cov[(i, j)];
            for k in 0..j {
                v -= l[i][k] * l[j][k];
            }
            l[i][j] = v / d;
        }
    }
    Ok(Vector4::from_fn(|i, _| (0..=i).map(|k| l[i][k] * z[k]).sum()))
}

/// Two-mode squeezer matrix on modes (0, 1) for pump phase `(cos φ, sin φ)`.
fn tms(r: f64, (c, s): (f64, f64)) -> Matrix4<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    Matrix4::new(
        ch, 0.0, sh * c, sh * s, //
        0.0, ch, sh * s, -sh * c, //
        sh * c, sh * s, ch, 0.0, //
        sh * s, -sh * c, 0.0, ch,
    )
}

/// A coupler whose matrix may depend on the pump phase.
#[derive(Debug, Clone)]
enum CouplerMatrix {
    Fixed(Matrix4<f64>),
    Pumped { r: f64 },
}

impl CouplerMatrix {
    fn at(&self, pump: (f64, f64)) -> Matrix4<f64> {
        match self {
            CouplerMatrix::Fixed(m) => *m,
            CouplerMatrix::Pumped { r } => tms(*r, pump),
        }
    }
}

/// Highest pump-phase harmonic in the output covariance: at most two
/// amplifiers act on each side of it.
const PUMP_DEGREE: usize = 4;
const PUMP_SAMPLES: usize = 2 * PUMP_DEGREE + 1;
/// Mean response (8), offset (4), covariance lower triangle (10).
const PUMP_ENTRIES: usize = 22;

#[derive(Debug, Clone)]
enum Kernel {
    /// No pump: the output covariance is fixed and the mean is affine in
    /// `(cos θ, sin θ)`.
    Fixed {
        offset: Vector4<f64>,
        response: Matrix4x2<f64>,
        root: Matrix4<f64>,
        normals: usize,
    },
    /// Output moments as trigonometric polynomials in the pump phase,
    /// interpolated exactly from equally spaced samples.
    Pumped { coeffs: Box<[[f64; PUMP_SAMPLES]; PUMP_ENTRIES]> },
}

/// `[1, cos φ, sin φ, cos 2φ, sin 2φ, …]` up to `PUMP_DEGREE`.
fn harmonics((c, s): (f64, f64)) -> [f64; PUMP_SAMPLES] {
    let mut h = [0.0; PUMP_SAMPLES];
    h[0] = 1.0;
    let (mut cm, mut sm) = (1.0, 0.0);
    for m in 1..=PUMP_DEGREE {
        (cm, sm) = (cm * c - sm * s, sm * c + cm * s);
        h[2 * m - 1] = cm;
        h[2 * m] = sm;
    }
    h
}

/// Exact output moments at one pump phase, flattened.
struct PumpedParts {
    splitter: CouplerMatrix,
    combiner: CouplerMatrix,
    mid: Matrix4<f64>,
    mid_noise: Matrix4<f64>,
    mid_shift: Vector4<f64>,
    input_cov: Matrix4<f64>,
    displacement: f64,
}

impl PumpedParts {
    fn entries(&self, pump: (f64, f64)) -> [f64; PUMP_ENTRIES] {
        let comb = self.combiner.at(pump);
        let x = comb * self.mid * self.splitter.at(pump);
        let cov = x * self.input_cov * x.transpose() + comb * self.mid_noise * comb.transpose();
        let offset = comb * self.mid_shift;
        let mut out = [0.0; PUMP_ENTRIES];
        for i in 0..4 {
            out[i] = x[(i, 0)] * self.displacement;
            out[4 + i] = x[(i, 1)] * self.displacement;
            out[8 + i] = offset[i];
        }
        let mut k = 12;
        for i in 0..4 {
            for j in 0..=i {
                out[k] = 0.5 * (cov[(i, j)] + cov[(j, i)]);
                k += 1;
            }
        }
        out
    }

    fn interpolate(&self) -> Box<[[f64; PUMP_SAMPLES]; PUMP_ENTRIES]> {
        let mut coeffs = Box::new([[0.0; PUMP_SAMPLES]; PUMP_ENTRIES]);
        let n = PUMP_SAMPLES as f64;
        for k in 0..PUMP_SAMPLES {
            let phi = std::f64::consts::TAU * k as f64 / n;
            let h = harmonics((phi.cos(), phi.sin()));
            let values = self.entries((phi.cos(), phi.sin()));
            for (e, v) in values.iter().enumerate() {
                coeffs[e][0] += v / n;
                for b in 1..PUMP_SAMPLES {
                    coeffs[e][b] += 2.0 * v * h[b] / n;
                }
            }
        }
        coeffs
    }
}

fn evaluate(coeffs: &[[f64; PUMP_SAMPLES]; PUMP_ENTRIES], pump: (f64, f64)) -> [f64; PUMP_ENTRIES] {
    let h = harmonics(pump);
    let mut out = [0.0; PUMP_ENTRIES];
    for (o, row) in out.iter_mut().zip(coeffs.iter()) {
        *o = row.iter().zip(&h).map(|(a, b)| a * b).sum();
    }
    out
}

fn pumped_moments(e: &[f64; PUMP_ENTRIES]) -> (Matrix4x2<f64>, Vector4<f64>, Matrix4<f64>) {
    let response = Matrix4x2::from_fn(|i, j| e[4 * j + i]);
    let offset = Vector4::new(e[8], e[9], e[10], e[11]);
    let mut cov = Matrix4::zeros();
    let mut k = 12;
    for i in 0..4 {
        for j in 0..=i {
            cov[(i, j)] = e[k];
            cov[(j, i)] = e[k];
            k += 1;
        }
    }
    (response, offset, cov)
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    shift: f64,
    sum: f64,
    sum_sq: f64,
}

impl Accumulator {
    fn push(&mut self, n: usize, x: f64) {
        if n == 0 {
            self.shift = x;
        }
        let y = x - self.shift;
        self.sum += y;
        self.sum_sq += y * y;
    }

    fn finish(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        let mean = self.shift + self.sum / nf;
        let var = if n > 1 {
            ((self.sum_sq - self.sum * self.sum / nf) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        (mean, var)
    }
}

/// Precomputed sampling kernels for every setting of a plan.
#[derive(Debug, Clone)]
pub struct ShotSimulator {
    direct: bool,
    efficiency: f64,
    kernels: Vec<(Setting, Kernel)>,
}

impl ShotSimulator {
    pub fn new(scheme: &SchemeConfig, p: &ProcessParams, settings: &[Setting]) -> Result<Self> {
        let kernels = settings
            .iter()
            .map(|s| Ok((*s, Self::kernel(scheme, p, s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            direct: scheme.layout == Layout::Direct,
            efficiency: scheme.noise.efficiency,
            kernels,
        })
    }

    fn kernel(scheme: &SchemeConfig, p: &ProcessParams, setting: &Setting) -> Result<Kernel> {
        let process = setting.apply_process.then_some(p);
        let total = scheme.modes();
        let r2 = setting.source.r() * setting.source.r();
        let mut input_cov = Matrix4::identity();
        input_cov[(0, 0)] = r2;
        input_cov[(1, 1)] = r2;
        if !scheme.is_pumped() {
            let mut map = AffineMap::identity(total);
            for s in stages(scheme, process, setting.phi_ref, 0.0)? {
                map = map.then(&s.affine(total)?);
            }
            let x = to4(&map.x);
            let mut cov = x * input_cov * x.transpose() + to4(&map.y);
            if total == 1 {
                // Pad the unused second mode so the factorisation stays regular.
                cov[(2, 2)] = 1.0;
                cov[(3, 3)] = 1.0;
            }
            let mut offset = Vector4::zeros();
            offset.rows_mut(0, map.c.len()).copy_from(&map.c);
            let response = x.fixed_view::<4, 2>(0, 0) * setting.source.d();
            return Ok(Kernel::Fixed {
                offset,
                response,
                root: sqrt_psd(&cov)?,
                normals: 2 * total,
            });
        }
        let parts = Self::pumped_parts(scheme, process, setting, input_cov)?;
        Ok(Kernel::Pumped {
            coeffs: parts.interpolate(),
        })
    }

    fn pumped_parts(
        scheme: &SchemeConfig,
        process: Option<&ProcessParams>,
        setting: &Setting,
        input_cov: Matrix4<f64>,
    ) -> Result<PumpedParts> {
        let Layout::Interferometer { splitter, combiner } = scheme.layout else {
            unreachable!("a pumped scheme has couplers")
        };
        let coupler = |c: Coupler, stage: Result<super::chain::Stage>| -> Result<CouplerMatrix> {
            Ok(match c {
                Coupler::Opa { r } => CouplerMatrix::Pumped { r },
                Coupler::BeamSplitter { .. } => CouplerMatrix::Fixed(to4(&stage?.affine(2)?.x)),
            })
        };
        let mut mid = AffineMap::identity(2);
        for s in middle_stages(scheme, process, setting.phi_ref)? {
            mid = mid.then(&s.affine(2)?);
        }
        let mut mid_shift = Vector4::zeros();
        mid_shift.copy_from(&mid.c);
        Ok(PumpedParts {
            splitter: coupler(splitter, splitter_stage(splitter, 0.0))?,
            combiner: coupler(combiner, combiner_stage(combiner, 0.0))?,
            mid: to4(&mid.x),
            mid_noise: to4(&mid.y),
            mid_shift,
            input_cov,
            displacement: setting.source.d(),
        })
    }

    /// Simulates every setting in order, drawing from `rng`.
    pub fn run_block<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ShotStats> {
        let mut out = Vec::with_capacity(self.kernels.len());
        for (setting, kernel) in &self.kernels {
            let (mut minus, mut plus) = (Accumulator::default(), Accumulator::default());
            let eta = self.efficiency;
            let mut record = |n: usize, point: Vector4<f64>| {
                let a = eta * (point[0] * point[0] + point[1] * point[1] - 2.0) / 4.0;
                let (dm, dp) = if self.direct {
                    (a, a)
                } else {
                    let b = eta * (point[2] * point[2] + point[3] * point[3] - 2.0) / 4.0;
                    (a - b, a + b)
                };
                minus.push(n, dm);
                plus.push(n, dp);
            };
            match kernel {
                Kernel::Fixed {
                    offset,
                    response,
                    root,
                    normals,
                } => {
                    for n in 0..setting.shots {
                        let (c, s) = uniform_phase(rng);
                        let mut z = Vector4::zeros();
                        for zi in z.iter_mut().take(*normals) {
                            *zi = rng.sample(StandardNormal);
                        }
                        record(n, offset + response * Vector2::new(c, s) + root * z);
                    }
                }
                Kernel::Pumped { coeffs } => {
                    for n in 0..setting.shots {
                        let (c, s) = uniform_phase(rng);
                        let pump = uniform_phase(rng);
                        let z = Vector4::from_fn(|_, _| rng.sample(StandardNormal));
                        let (response, offset, cov) = pumped_moments(&evaluate(coeffs, pump));
                        record(n, offset + response * Vector2::new(c, s) + correlate(&cov, &z)?);
                    }
                }
            }
            let (mean_minus, var_minus) = minus.finish(setting.shots);
            let (mean_plus, var_plus) = plus.finish(setting.shots);
            out.push(SettingStats {
                setting: *setting,
                shots: setting.shots,
                mean_minus,
                mean_plus,
                var_minus,
                var_plus,
            });
        }
        Ok(ShotStats { settings: out })
    }
}

/// One block of shots for `settings`.
pub fn simulate_shots<R: Rng + ?Sized>(
    scheme: &SchemeConfig,
    p: &ProcessParams,
    settings: &[Setting],
    rng: &mut R,
) -> Result<ShotStats> {
    ShotSimulator::new(scheme, p, settings)?.run_block(rng)
}

/// All blocks of a plan. Block `i` draws from stream `i` of `master_seed`, so
/// the result does not depend on the number of worker threads.
pub fn simulate_blocks(
    scheme: &SchemeConfig,
    p: &ProcessParams,
    plan: &ExperimentPlan,
    master_seed: u64,
) -> Result<Vec<ShotStats>> {
    let sim = ShotSimulator::new(scheme, p, plan.settings())?;
    (0..plan.blocks())
        .into_par_iter()
        .map(|i| sim.run_block(&mut block_rng(master_seed, i as u64)))
        .collect()
}

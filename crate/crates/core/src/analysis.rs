//! Parameter estimation: DOS exponents, power-law exponents, and the
//! classical/quantum universality verdict built from them.

use std::fmt;

use serde::Serialize;

use crate::dynamics::{
    classical_return_avg, msd_from_spectrum, quantum_return_avg, SeriesKind, TimeGrid, TimeSeries,
    WalkKind,
};
use crate::error::{Error, Result};
use crate::model::RingSpec;
use crate::spectral::{full_spectrum, DosEstimate};

/// Minimum number of usable points for a power-law fit.
pub const MIN_FIT_POINTS: usize = 10;

/// Minimum number of interior bins for a DOS fit.
pub const MIN_DOS_BINS: usize = 20;

/// Earliest time admitted by the default fit window.
pub const DEFAULT_WINDOW_START: f64 = 5.0;

/// Fraction of trailing grid points dropped by the default fit window.
pub const DEFAULT_WINDOW_TAIL: f64 = 0.2;

/// Tolerance on fitted slopes used by [`classify_universality`].
pub const CLASS_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum FitParams {
    DosExponents { alpha: f64, beta: f64, scale: f64 },
    PowerLaw { slope: f64, intercept: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: FitParams,
    /// RMS residual in fit coordinates.
    pub residual: f64,
    /// Abscissa range actually used (time or energy).
    pub window: (f64, f64),
    pub n_points: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn slope(&self) -> Option<f64> {
        match self.params {
            FitParams::PowerLaw { slope, .. } => Some(slope),
            FitParams::DosExponents { .. } => None,
        }
    }

    pub fn exponents(&self) -> Option<(f64, f64)> {
        match self.params {
            FitParams::DosExponents { alpha, beta, .. } => Some((alpha, beta)),
            FitParams::PowerLaw { .. } => None,
        }
    }
}

/// Time range of a power-law fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitWindow {
    /// Drop `t < 5` and the final 20% of the grid points.
    Default,
    Range(f64, f64),
}

impl FitWindow {
    /// Inclusive `(lo, hi)` bounds for a grid.
    pub fn resolve(self, times: &[f64]) -> (f64, f64) {
        match self {
            FitWindow::Range(lo, hi) => (lo, hi),
            FitWindow::Default => {
                let keep = ((1.0 - DEFAULT_WINDOW_TAIL) * times.len() as f64).round() as usize;
                let hi = times
                    .get(keep.saturating_sub(1))
                    .copied()
                    .unwrap_or(f64::NEG_INFINITY);
                (DEFAULT_WINDOW_START, hi)
            }
        }
    }
}

/// Indices of strict local maxima by 3-point comparison.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}

/// Ordinary least squares of `ln y` on `ln x`, skipping nonpositive or
/// non-finite pairs. Returns `(slope, intercept, rms residual, points used)`.
pub(crate) fn log_log_regression(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64, usize)> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_POINTS,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidParameters("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok((slope, intercept, (rss / n).sqrt(), pts.len()))
}

/// Log-log slope of a series; with `use_envelope` only local maxima enter.
pub fn fit_power_law(series: &TimeSeries, window: FitWindow, use_envelope: bool) -> Result<FitResult> {
    let (lo, hi) = window.resolve(series.times());
    let candidates: Vec<usize> = if use_envelope {
        local_maxima(&series.values)
    } else {
        (0..series.values.len()).collect()
    };
    let (ts, vs): (Vec<f64>, Vec<f64>) = candidates
        .into_iter()
        .map(|i| (series.times()[i], series.values[i]))
        .filter(|(t, v)| *t >= lo && *t <= hi && *v > 0.0)
        .unzip();
    let (slope, intercept, residual, used) = log_log_regression(&ts, &vs)?;
    Ok(FitResult {
        params: FitParams::PowerLaw { slope, intercept },
        residual,
        window: (ts[0], *ts.last().unwrap()),
        n_points: used,
        converged: true,
    })
}

struct DosObjective {
    energies: Vec<f64>,
    targets: Vec<f64>,
    e_max: f64,
}

impl DosObjective {
    /// RMS misfit of `ρ^-2 ≈ s (c E^α - E^β)` with the scale `s` profiled out.
    fn eval(&self, alpha: f64, beta: f64) -> (f64, f64) {
        if !(beta > alpha) {
            return (f64::INFINITY, 0.0);
        }
        let c = self.e_max.powf(beta - alpha);
        let model: Vec<f64> = self
            .energies
            .iter()
            .map(|e| c * e.powf(alpha) - e.powf(beta))
            .collect();
        let mm: f64 = model.iter().map(|m| m * m).sum();
        let my: f64 = model.iter().zip(&self.targets).map(|(m, y)| m * y).sum();
        let scale = my / mm;
        if !(scale > 0.0) || !scale.is_finite() {
            return (f64::INFINITY, 0.0);
        }
        let rss: f64 = model
            .iter()
            .zip(&self.targets)
            .map(|(m, y)| (y - scale * m).powi(2))
            .sum();
        ((rss / model.len() as f64).sqrt(), scale)
    }
}

const ALPHA_BOX: (f64, f64) = (0.0, 1.0);
const BETA_BOX: (f64, f64) = (1.0, 2.0);

fn project(p: [f64; 2]) -> [f64; 2] {
    [
        p[0].clamp(ALPHA_BOX.0, ALPHA_BOX.1),
        p[1].clamp(BETA_BOX.0, BETA_BOX.1),
    ]
}

/// Nelder–Mead on the projected box. Returns `(point, value, converged)`.
fn nelder_mead(f: &impl Fn([f64; 2]) -> f64, start: [f64; 2]) -> ([f64; 2], f64, bool) {
    let step = |x: f64, hi: f64| if x + 0.1 > hi { -0.1 } else { 0.1 };
    let x0 = project(start);
    let mut simplex = [
        x0,
        [x0[0] + step(x0[0], ALPHA_BOX.1), x0[1]],
        [x0[0], x0[1] + step(x0[1], BETA_BOX.1)],
    ];
    let mut values = simplex.map(f);
    let combine = |a: [f64; 2], b: [f64; 2], t: f64| project([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);

    for _ in 0..1000 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let size = simplex[1..]
            .iter()
            .map(|p| (p[0] - simplex[0][0]).abs().max((p[1] - simplex[0][1]).abs()))
            .fold(0.0, f64::max);
        if size < 1e-10 && (values[2] - values[0]).abs() <= 1e-12 * (1.0 + values[0].abs()) {
            return (simplex[0], values[0], true);
        }

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let reflected = combine(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = combine(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = combine(centroid, simplex[2], 0.5);
            let fc = f(contracted);
            if fc < values[2] {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = combine(simplex[0], simplex[i], 0.5);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    (simplex[best], values[best], false)
}

/// Least-squares `(α, β)` of the generalized DOS against a histogram.
///
/// The fit runs on `ρ^-2`, which is linear in `c E^α - E^β` with
/// `c = e_max^(β-α)`; the overall scale is solved in closed form for every
/// trial point. The outermost bin at each edge and empty bins are skipped.
/// Nelder–Mead is started from a 5×5 grid over the box; ties go to the
/// lower residual, then the lower β.
pub fn fit_dos_exponents(dos: &DosEstimate, e_max: f64) -> Result<FitResult> {
    if !(e_max > 0.0) {
        return Err(Error::InvalidParameters(format!("e_max = {e_max}")));
    }
    let centers = dos.bin_centers();
    let n_bins = dos.n_bins();
    let (energies, targets): (Vec<f64>, Vec<f64>) = (1..n_bins.saturating_sub(1))
        .filter(|&i| dos.density[i] > 0.0 && centers[i] > 0.0 && centers[i] < e_max)
        .map(|i| (centers[i], dos.density[i].powi(-2)))
        .unzip();
    if energies.len() < MIN_DOS_BINS {
        return Err(Error::InsufficientData {
            needed: MIN_DOS_BINS,
            found: energies.len(),
        });
    }
    let objective = DosObjective {
        energies,
        targets,
        e_max,
    };
    let f = |p: [f64; 2]| objective.eval(p[0], p[1]).0;

    let mut best: Option<([f64; 2], f64, bool)> = None;
    for i in 0..5 {
        for j in 0..5 {
            let start = [0.25 * i as f64, 1.0 + 0.25 * j as f64];
            if !(start[1] > start[0]) {
                continue;
            }
            let candidate = nelder_mead(&f, start);
            let better = match &best {
                None => true,
                Some((p, v, _)) => {
                    let tie = (candidate.1 - v).abs() <= 1e-12 * v.abs().max(1e-300);
                    candidate.1 < *v && !tie || tie && candidate.0[1] < p[1]
                }
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    let (point, residual, nm_converged) = best.expect("at least one start");
    let (_, scale) = objective.eval(point[0], point[1]);

    let mean_target = objective.targets.iter().sum::<f64>() / objective.targets.len() as f64;
    let on_boundary = point[0] <= ALPHA_BOX.0
        || point[0] >= ALPHA_BOX.1
        || point[1] <= BETA_BOX.0
        || point[1] >= BETA_BOX.1;
    let stuck = on_boundary && residual > 0.05 * mean_target;

    Ok(FitResult {
        params: FitParams::DosExponents {
            alpha: point[0],
            beta: point[1],
            scale,
        },
        residual,
        window: (objective.energies[0], *objective.energies.last().unwrap()),
        n_points: objective.energies.len(),
        converged: nm_converged && residual.is_finite() && !stuck,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalClass {
    NormalDiffusive,
    Anomalous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumClass {
    Universal,
    NonUniversal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalityReport {
    pub spec: RingSpec,
    pub classical: ClassicalClass,
    pub quantum: QuantumClass,
    pub classical_return_slope: f64,
    pub classical_msd_slope: f64,
    pub quantum_envelope_slope: f64,
    pub quantum_msd_slope: f64,
    pub tolerance: f64,
}

impl fmt::Display for UniversalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classical = match self.classical {
            ClassicalClass::NormalDiffusive => "normal diffusion",
            ClassicalClass::Anomalous => "anomalous",
        };
        let quantum = match self.quantum {
            QuantumClass::Universal => "universal",
            QuantumClass::NonUniversal => "non-universal",
        };
        writeln!(f, "ring: {}", self.spec)?;
        writeln!(
            f,
            "classical: {classical} (return slope {:.4}, MSD slope {:.4})",
            self.classical_return_slope, self.classical_msd_slope
        )?;
        write!(
            f,
            "quantum:   {quantum} (envelope slope {:.4}, MSD slope {:.4})",
            self.quantum_envelope_slope, self.quantum_msd_slope
        )
    }
}

/// Classifies the walks from four fitted slopes. Classical walks are
/// normal-diffusive when the return slope is -1/2 and the MSD slope 1;
/// quantum walks are universal when the envelope slope is -1 and the MSD
/// slope 2; all within [`CLASS_TOLERANCE`].
pub fn classify_universality(spec: &RingSpec, fits: &[(SeriesKind, FitResult)]) -> Result<UniversalityReport> {
    let slope = |kind: SeriesKind| -> Result<f64> {
        fits.iter()
            .find(|(k, _)| *k == kind)
            .and_then(|(_, fit)| fit.slope())
            .ok_or(Error::MissingFit(kind))
    };
    let classical_return_slope = slope(SeriesKind::ClassicalReturn)?;
    let classical_msd_slope = slope(SeriesKind::ClassicalMsd)?;
    let quantum_envelope_slope = slope(SeriesKind::QuantumReturn)?;
    let quantum_msd_slope = slope(SeriesKind::QuantumMsd)?;

    let near = |x: f64, target: f64| (x - target).abs() <= CLASS_TOLERANCE;
    let classical = if near(classical_return_slope, -0.5) && near(classical_msd_slope, 1.0) {
        ClassicalClass::NormalDiffusive
    } else {
        ClassicalClass::Anomalous
    };
    let quantum = if near(quantum_envelope_slope, -1.0) && near(quantum_msd_slope, 2.0) {
        QuantumClass::Universal
    } else {
        QuantumClass::NonUniversal
    };
    Ok(UniversalityReport {
        spec: *spec,
        classical,
        quantum,
        classical_return_slope,
        classical_msd_slope,
        quantum_envelope_slope,
        quantum_msd_slope,
        tolerance: CLASS_TOLERANCE,
    })
}

/// Time grids behind [`standard_fits`].
pub struct StandardGrids {
    pub classical: TimeGrid,
    pub quantum_return: TimeGrid,
    pub quantum_msd: TimeGrid,
}

impl StandardGrids {
    pub fn new() -> Self {
        Self {
            classical: TimeGrid::logarithmic(10.0, 1000.0, 50).expect("valid grid"),
            quantum_return: TimeGrid::linear(5.0, 100.0, 0.01).expect("valid grid"),
            quantum_msd: TimeGrid::logarithmic(1.0, 100.0, 50).expect("valid grid"),
        }
    }
}

impl Default for StandardGrids {
    fn default() -> Self {
        Self::new()
    }
}

/// The four slopes used for classification, all with the default window:
/// classical return and MSD on `t ∈ [10, 1000]`, quantum envelope on
/// `t ∈ [5, 100]` (step 0.01), quantum MSD on `t ∈ [1, 100]`.
pub fn standard_fits(spec: &RingSpec) -> Result<Vec<(SeriesKind, FitResult)>> {
    let spectrum = full_spectrum(spec);
    let grids = StandardGrids::new();
    let cl_return = classical_return_avg(&spectrum, &grids.classical);
    let cl_msd = msd_from_spectrum(&spectrum, &grids.classical, WalkKind::Classical);
    let q_return = quantum_return_avg(&spectrum, &grids.quantum_return);
    let q_msd = msd_from_spectrum(&spectrum, &grids.quantum_msd, WalkKind::Quantum);
    Ok(vec![
        (SeriesKind::ClassicalReturn, fit_power_law(&cl_return, FitWindow::Default, false)?),
        (SeriesKind::ClassicalMsd, fit_power_law(&cl_msd, FitWindow::Default, false)?),
        (SeriesKind::QuantumReturn, fit_power_law(&q_return, FitWindow::Default, true)?),
        (SeriesKind::QuantumMsd, fit_power_law(&q_msd, FitWindow::Default, false)?),
    ])
}

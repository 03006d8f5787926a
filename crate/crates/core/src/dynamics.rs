//! Time evolution on the ring, computed from the spectrum alone.
//!
//! Bloch states diagonalize every circulant generator, so with `E_m` the
//! mode energies and start node 0:
//!
//! ```text
//! classical:  p_k(t)  = (1/N) Σ_m exp(-E_m t) cos(θ_m k)
//! quantum:    π_k(t)  = |(1/N) Σ_m exp(-i E_m t) exp(i θ_m k)|²
//! ```
//!
//! The averages over start nodes reduce to the `k = 0` entries. Site
//! profiles are evaluated with an inverse DFT; [`transition_probabilities_direct`]
//! keeps the plain `O(N²)` sum as a reference path.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::analysis::{local_maxima, log_log_regression, FitParams, FitResult, FitWindow};
use crate::error::{Error, Result};
use crate::model::{Gamma, RingSpec};
use crate::spectral::{full_spectrum, Spectrum};

/// Strictly increasing, nonnegative sample times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidGrid("no time points".into()));
        }
        if !(times[0] >= 0.0) {
            return Err(Error::InvalidGrid(format!("first time {} < 0", times[0])));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("non-finite time".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("times must strictly increase".into()));
        }
        Ok(Self { times })
    }

    /// Logarithmic grid from `t_min` to `t_max` inclusive with
    /// `points_per_decade` samples per factor of ten.
    pub fn logarithmic(t_min: f64, t_max: f64, points_per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0) || !(t_max > t_min) || points_per_decade == 0 {
            return Err(Error::InvalidGrid(format!(
                "log grid needs 0 < t_min < t_max and ppd >= 1; got [{t_min}, {t_max}], ppd {points_per_decade}"
            )));
        }
        let (lo, hi) = (t_min.log10(), t_max.log10());
        let steps = ((hi - lo) * points_per_decade as f64).round().max(1.0) as usize;
        let times = (0..=steps)
            .map(|i| {
                if i == 0 {
                    t_min
                } else if i == steps {
                    t_max
                } else {
                    10f64.powf(lo + (hi - lo) * i as f64 / steps as f64)
                }
            })
            .collect();
        Self::new(times)
    }

    /// Uniform grid from `t_min` to `t_max` inclusive with step close to `dt`.
    pub fn linear(t_min: f64, t_max: f64, dt: f64) -> Result<Self> {
        if !(t_min >= 0.0) || !(t_max > t_min) || !(dt > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "linear grid needs 0 <= t_min < t_max and dt > 0; got [{t_min}, {t_max}], dt {dt}"
            )));
        }
        let steps = ((t_max - t_min) / dt).round().max(1.0) as usize;
        let times = (0..=steps)
            .map(|i| t_min + (t_max - t_min) * i as f64 / steps as f64)
            .collect();
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    ClassicalReturn,
    QuantumReturn,
    ClassicalMsd,
    QuantumMsd,
    SpaReturn,
}

impl SeriesKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesKind::ClassicalReturn => "classical_return",
            SeriesKind::QuantumReturn => "quantum_return",
            SeriesKind::ClassicalMsd => "classical_msd",
            SeriesKind::QuantumMsd => "quantum_msd",
            SeriesKind::SpaReturn => "spa_return",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkKind {
    Classical,
    Quantum,
}

impl WalkKind {
    pub fn return_kind(self) -> SeriesKind {
        match self {
            WalkKind::Classical => SeriesKind::ClassicalReturn,
            WalkKind::Quantum => SeriesKind::QuantumReturn,
        }
    }

    pub fn msd_kind(self) -> SeriesKind {
        match self {
            WalkKind::Classical => SeriesKind::ClassicalMsd,
            WalkKind::Quantum => SeriesKind::QuantumMsd,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WalkKind::Classical => "classical",
            WalkKind::Quantum => "quantum",
        }
    }
}

impl std::str::FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" | "cl" | "ctrw" => Ok(WalkKind::Classical),
            "quantum" | "qm" | "ctqw" => Ok(WalkKind::Quantum),
            _ => Err(Error::InvalidParameters(format!("unknown walk kind {s:?}"))),
        }
    }
}

/// An observable sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    /// `None` for curves of the infinite system.
    pub spec: Option<RingSpec>,
    pub kind: SeriesKind,
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn times(&self) -> &[f64] {
        self.grid.times()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.times().iter().copied().zip(self.values.iter().copied())
    }
}

/// Probability at each node at a fixed time for a walk started at node 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityProfile {
    pub spec: RingSpec,
    pub kind: WalkKind,
    pub time: f64,
    pub probabilities: Vec<f64>,
}

impl ProbabilityProfile {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `Σ_k d(k, 0)² P_k` with minimal ring distance `d`.
    pub fn second_moment(&self) -> f64 {
        let n = self.probabilities.len();
        self.probabilities
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let d = k.min(n - k) as f64;
                d * d * p
            })
            .sum()
    }
}

/// Classical average return probability `(1/N) Σ_θ exp(-E(θ) t)`.
pub fn classical_return_avg(spectrum: &Spectrum, grid: &TimeGrid) -> TimeSeries {
    let energies = spectrum.eigenvalues();
    let inv_n = 1.0 / energies.len() as f64;
    let values = grid
        .times()
        .par_iter()
        .map(|&t| energies.iter().map(|e| (-e * t).exp()).sum::<f64>() * inv_n)
        .collect();
    TimeSeries {
        spec: Some(*spectrum.spec()),
        kind: SeriesKind::ClassicalReturn,
        grid: grid.clone(),
        values,
    }
}

/// Quantum average return probability `|(1/N) Σ_θ exp(-i E(θ) t)|²`.
pub fn quantum_return_avg(spectrum: &Spectrum, grid: &TimeGrid) -> TimeSeries {
    let energies = spectrum.eigenvalues();
    let inv_n = 1.0 / energies.len() as f64;
    let values = grid
        .times()
        .par_iter()
        .map(|&t| {
            let (mut re, mut im) = (0.0, 0.0);
            for e in energies {
                let (s, c) = (e * t).sin_cos();
                re += c;
                im -= s;
            }
            let amp = Complex64::new(re * inv_n, im * inv_n);
            amp.norm_sqr()
        })
        .collect();
    TimeSeries {
        spec: Some(*spectrum.spec()),
        kind: SeriesKind::QuantumReturn,
        grid: grid.clone(),
        values,
    }
}

/// Reusable inverse-DFT evaluator for site profiles of one spectrum.
pub struct ProfileEngine<'a> {
    spectrum: &'a Spectrum,
    fft: Arc<dyn Fft<f64>>,
}

impl<'a> ProfileEngine<'a> {
    pub fn new(spectrum: &'a Spectrum) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(spectrum.len());
        Self { spectrum, fft }
    }

    pub fn profile(&self, time: f64, kind: WalkKind) -> ProbabilityProfile {
        let energies = self.spectrum.eigenvalues();
        let n = energies.len();
        let inv_n = 1.0 / n as f64;
        let mut buffer: Vec<Complex64> = match kind {
            WalkKind::Classical => energies
                .iter()
                .map(|e| Complex64::new((-e * time).exp(), 0.0))
                .collect(),
            WalkKind::Quantum => energies
                .iter()
                .map(|e| {
                    let (s, c) = (e * time).sin_cos();
                    Complex64::new(c, -s)
                })
                .collect(),
        };
        self.fft.process(&mut buffer);
        let probabilities = buffer
            .iter()
            .map(|z| {
                let a = z * inv_n;
                match kind {
                    // Exact values are nonnegative; clear FFT rounding below zero.
                    WalkKind::Classical => a.re.max(0.0),
                    WalkKind::Quantum => a.norm_sqr(),
                }
            })
            .collect();
        ProbabilityProfile {
            spec: *self.spectrum.spec(),
            kind,
            time,
            probabilities,
        }
    }
}

/// Site profile of a walk started at node 0 after time `time`.
pub fn transition_probabilities(spec: &RingSpec, time: f64, kind: WalkKind) -> Result<ProbabilityProfile> {
    check_time(time)?;
    let spectrum = full_spectrum(spec);
    Ok(ProfileEngine::new(&spectrum).profile(time, kind))
}

/// Same as [`transition_probabilities`], by direct `O(N²)` summation in
/// ascending mode order.
pub fn transition_probabilities_direct(
    spectrum: &Spectrum,
    time: f64,
    kind: WalkKind,
) -> Result<ProbabilityProfile> {
    check_time(time)?;
    let energies = spectrum.eigenvalues();
    let n = energies.len();
    let inv_n = 1.0 / n as f64;
    let phases: Vec<(f64, f64)> = energies.iter().map(|e| (e * time).sin_cos()).collect();
    let cos_table: Vec<(f64, f64)> = (0..n).map(|j| spectrum.theta(j).sin_cos()).collect();
    let probabilities = (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (m, e) in energies.iter().enumerate() {
                let (sk, ck) = cos_table[(m * k) % n];
                match kind {
                    WalkKind::Classical => re += (-e * time).exp() * ck,
                    WalkKind::Quantum => {
                        // exp(-i E t) exp(i θ k)
                        let (se, ce) = phases[m];
                        re += ce * ck + se * sk;
                        im += ce * sk - se * ck;
                    }
                }
            }
            match kind {
                WalkKind::Classical => re * inv_n,
                WalkKind::Quantum => (re * inv_n).powi(2) + (im * inv_n).powi(2),
            }
        })
        .collect();
    Ok(ProbabilityProfile {
        spec: *spectrum.spec(),
        kind,
        time,
        probabilities,
    })
}

fn check_time(time: f64) -> Result<()> {
    if time >= 0.0 && time.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!("time {time} must be finite and >= 0")))
    }
}

/// Mean square displacement `Σ_k d(k,0)² P_k(t)` on every grid point.
pub fn msd(spec: &RingSpec, grid: &TimeGrid, kind: WalkKind) -> TimeSeries {
    msd_from_spectrum(&full_spectrum(spec), grid, kind)
}

pub fn msd_from_spectrum(spectrum: &Spectrum, grid: &TimeGrid, kind: WalkKind) -> TimeSeries {
    let engine = ProfileEngine::new(spectrum);
    let values = grid
        .times()
        .par_iter()
        .map(|&t| engine.profile(t, kind).second_moment())
        .collect();
    TimeSeries {
        spec: Some(*spectrum.spec()),
        kind: kind.msd_kind(),
        grid: grid.clone(),
        values,
    }
}

/// Log-log regression of the MSD against the inverse squared return
/// probability; the expected slope is 1.
///
/// Quantum series are reduced to the local maxima of the return
/// probability, and the MSD is sampled at those times. Classical walks
/// require `gamma > 3`.
pub fn msd_return_relation_check(
    spec: &RingSpec,
    grid: &TimeGrid,
    kind: WalkKind,
    window: FitWindow,
) -> Result<FitResult> {
    if kind == WalkKind::Classical {
        if let Gamma::Finite(g) = spec.gamma() {
            if g <= 3.0 {
                return Err(Error::RelationNotApplicable { gamma: g });
            }
        }
    }
    let spectrum = full_spectrum(spec);
    let (lo, hi) = window.resolve(grid.times());

    let (times, returns) = match kind {
        WalkKind::Classical => {
            let series = classical_return_avg(&spectrum, grid);
            series.iter().filter(|(t, _)| *t >= lo && *t <= hi).unzip::<_, _, Vec<_>, Vec<_>>()
        }
        WalkKind::Quantum => {
            let series = quantum_return_avg(&spectrum, grid);
            local_maxima(&series.values)
                .into_iter()
                .map(|i| (series.times()[i], series.values[i]))
                .filter(|(t, _)| *t >= lo && *t <= hi)
                .unzip()
        }
    };
    if times.is_empty() {
        return Err(Error::InsufficientData {
            needed: crate::analysis::MIN_FIT_POINTS,
            found: 0,
        });
    }
    let sub_grid = TimeGrid::new(times.clone())?;
    let displacement = msd_from_spectrum(&spectrum, &sub_grid, kind);

    let xs: Vec<f64> = returns.iter().map(|p| p.powi(-2)).collect();
    let (slope, intercept, residual, used) = log_log_regression(&xs, &displacement.values)?;
    Ok(FitResult {
        params: FitParams::PowerLaw { slope, intercept },
        residual,
        window: (times[0], *times.last().unwrap()),
        n_points: used,
        converged: true,
    })
}

//! Spectrum of the ring Hamiltonian and its density of states.
//!
//! The ring is circulant, so Bloch states diagonalize it and the energies
//! follow from a finite cosine sum over the couplings:
//!
//! ```text
//! E(θ) = Σ_{R=1}^{r_max} w_R [2 - 2 cos(θ R)],    θ_m = 2π m / N
//! ```
//!
//! with `w_R = R^-gamma`, halved for the antipode of an even ring. The
//! dense route ([`diagonalize_spectrum`]) exists as an oracle for the
//! analytic one.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_coupling_table, build_hamiltonian, RingSpec};
use crate::quadrature::tanh_sinh;

/// Largest ring accepted by [`diagonalize_spectrum`].
pub const DIAGONALIZATION_GUARD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    Analytic,
    Diagonalized,
}

/// Ring energies. For the analytic source, `eigenvalues[m]` belongs to the
/// Bloch mode `θ_m = 2π m / N`; diagonalized spectra are sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    spec: RingSpec,
    source: SpectrumSource,
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Wraps externally computed energies, e.g. for tests of downstream code.
    pub fn from_parts(spec: RingSpec, source: SpectrumSource, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != spec.n_nodes() {
            return Err(Error::InvalidParameters(format!(
                "{} eigenvalues for a ring of {} nodes",
                eigenvalues.len(),
                spec.n_nodes()
            )));
        }
        Ok(Self {
            spec,
            source,
            eigenvalues,
        })
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn theta(&self, m: usize) -> f64 {
        mode_theta(m, self.spec.n_nodes())
    }

    pub fn max_energy(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn mode_theta(m: usize, n: usize) -> f64 {
    2.0 * PI * m as f64 / n as f64
}

/// Bloch energy at an arbitrary quasi-momentum `theta`.
///
/// The sum runs in ascending `R`. At lattice modes this agrees with
/// [`full_spectrum`] to rounding.
pub fn bloch_eigenvalue(spec: &RingSpec, theta: f64) -> f64 {
    build_coupling_table(spec)
        .bloch_weights()
        .map(|(r, w)| w * (2.0 - 2.0 * (theta * r as f64).cos()))
        .sum()
}

/// `cos(2π j / n)` with the angle folded into `[0, π/4]` first, so quarter
/// turns give exact zeros and the table is symmetric to the last bit.
fn cos_turn_fraction(j: usize, n: usize) -> f64 {
    let k = j % n;
    let k = k.min(n - k);
    let (sign, k4) = if 4 * k > n { (-1.0, 2 * n - 4 * k) } else { (1.0, 4 * k) };
    // the angle is now π k4 / (2n) in [0, π/2]
    if k4 == n {
        return 0.0;
    }
    let value = if 2 * k4 > n {
        (PI * (n - k4) as f64 / (2 * n) as f64).sin()
    } else {
        (PI * k4 as f64 / (2 * n) as f64).cos()
    };
    sign * value
}

/// Energies at all `N` lattice modes.
///
/// The phase `θ_m R` is reduced exactly to `2π (m R mod N) / N` and read
/// from a cosine table; modes `m` and `N - m` share one evaluation, so the
/// reflection symmetry is exact.
pub fn full_spectrum(spec: &RingSpec) -> Spectrum {
    let n = spec.n_nodes();
    let weights: Vec<(usize, f64)> = build_coupling_table(spec).bloch_weights().collect();
    let cos_table: Vec<f64> = (0..n).map(|j| cos_turn_fraction(j, n)).collect();

    let half: Vec<f64> = (0..=n / 2)
        .into_par_iter()
        .map(|m| {
            if m == 0 {
                return 0.0;
            }
            weights
                .iter()
                .map(|&(r, w)| w * (2.0 - 2.0 * cos_table[(m * r) % n]))
                .sum()
        })
        .collect();

    let eigenvalues = (0..n).map(|m| half[m.min(n - m)]).collect();
    Spectrum {
        spec: *spec,
        source: SpectrumSource::Analytic,
        eigenvalues,
    }
}

/// Sorted eigenvalues of the dense Hamiltonian.
pub fn diagonalize_spectrum(spec: &RingSpec) -> Result<Spectrum> {
    if spec.n_nodes() > DIAGONALIZATION_GUARD {
        return Err(Error::GuardExceeded {
            n: spec.n_nodes(),
            limit: DIAGONALIZATION_GUARD,
            hint: "use full_spectrum for the analytic Bloch spectrum",
        });
    }
    let h = build_hamiltonian(spec).into_entries();
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum {
        spec: *spec,
        source: SpectrumSource::Diagonalized,
        eigenvalues,
    })
}

/// Binned density of states. `density` integrates to one over the bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DosEstimate {
    pub bin_edges: Vec<f64>,
    pub density: Vec<f64>,
    pub counts: Vec<usize>,
    pub n_total: usize,
}

impl DosEstimate {
    /// Builds an estimate from per-bin heights, rescaled to unit integral.
    /// Counts are the heights expressed as multiples of `1 / n_total`, rounded.
    pub fn from_density(bin_edges: Vec<f64>, density: Vec<f64>, n_total: usize) -> Result<Self> {
        if bin_edges.len() != density.len() + 1 || density.len() < 2 {
            return Err(Error::InvalidParameters(
                "need n_bins + 1 edges and n_bins >= 2 heights".into(),
            ));
        }
        if bin_edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameters("bin edges must increase".into()));
        }
        let mass: f64 = density
            .iter()
            .zip(bin_edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum();
        if !(mass > 0.0) {
            return Err(Error::InvalidParameters("density has no mass".into()));
        }
        let density: Vec<f64> = density.iter().map(|d| d / mass).collect();
        let counts = density
            .iter()
            .zip(bin_edges.windows(2))
            .map(|(d, w)| (d * (w[1] - w[0]) * n_total as f64).round() as usize)
            .collect();
        Ok(Self {
            bin_edges,
            density,
            counts,
            n_total,
        })
    }

    pub fn n_bins(&self) -> usize {
        self.density.len()
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn integral(&self) -> f64 {
        self.density
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum()
    }
}

/// Histogram of a spectrum over uniform bins spanning `[0, E_max]`.
pub fn dos_histogram(spectrum: &Spectrum, n_bins: usize) -> Result<DosEstimate> {
    if n_bins < 2 {
        return Err(Error::InvalidBins(n_bins));
    }
    let values = spectrum.eigenvalues();
    let lo = 0.0;
    let hi = spectrum.max_energy();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(hi > lo) || !(hi > min) {
        return Err(Error::DegenerateSpectrum);
    }
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    for &e in values {
        // Diagonalized zero modes may sit a rounding error below 0.
        let idx = (((e - lo) / width).floor().max(0.0) as usize).min(n_bins - 1);
        counts[idx] += 1;
    }
    let n_total = values.len();
    let bin_edges: Vec<f64> = (0..=n_bins)
        .map(|i| if i == n_bins { hi } else { lo + i as f64 * width })
        .collect();
    let density = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, w)| c as f64 / (n_total as f64 * (w[1] - w[0])))
        .collect();
    Ok(DosEstimate {
        bin_edges,
        density,
        counts,
        n_total,
    })
}

/// Exponent cases with a closed-form DOS in the `N, r_max → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DosCase {
    Gamma2,
    Gamma4,
    NearestNeighbour,
}

impl DosCase {
    pub fn e_max(self) -> f64 {
        match self {
            DosCase::Gamma2 => PI * PI / 2.0,
            DosCase::Gamma4 => PI.powi(4) / 24.0,
            DosCase::NearestNeighbour => 4.0,
        }
    }

    /// The `(alpha, beta)` of the generalized DOS that reproduce this case.
    pub fn exponents(self) -> (f64, f64) {
        match self {
            DosCase::Gamma2 => (0.0, 1.0),
            DosCase::Gamma4 => (1.0, 1.5),
            DosCase::NearestNeighbour => (1.0, 2.0),
        }
    }
}

/// Closed-form densities:
///
/// - `ρ∞(E) = 1 / (π sqrt(4E - E²))`
/// - `ρ₂(E) = 1 / (π sqrt2 sqrt(π²/2 - E))`
/// - `ρ₄(E) = 1 / (2π (2/3)^(1/4) sqrt(E π²/sqrt24 - E^(3/2)))`
pub fn analytic_dos(case: DosCase, energy: f64) -> Result<f64> {
    let e_max = case.e_max();
    if !(energy > 0.0 && energy < e_max) {
        return Err(Error::OutOfBand { energy, e_max });
    }
    let e = energy;
    let rho = match case {
        DosCase::NearestNeighbour => 1.0 / (PI * (4.0 * e - e * e).sqrt()),
        DosCase::Gamma2 => 1.0 / (PI * 2f64.sqrt() * (PI * PI / 2.0 - e).sqrt()),
        DosCase::Gamma4 => {
            let c4 = PI * PI / 24f64.sqrt();
            1.0 / (2.0 * PI * (2.0f64 / 3.0).powf(0.25) * (e * c4 - e.powf(1.5)).sqrt())
        }
    };
    Ok(rho)
}

/// Normalized interpolating DOS `ρ(E) ∝ [c E^α - E^β]^(-1/2)` with
/// `c = e_max^(β-α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedDos {
    alpha: f64,
    beta: f64,
    e_max: f64,
    norm: f64,
}

impl GeneralizedDos {
    pub fn new(alpha: f64, beta: f64, e_max: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(1.0..=2.0).contains(&beta) || !(beta > alpha) {
            return Err(Error::InvalidParameters(format!(
                "need alpha in [0,1], beta in [1,2], beta > alpha; got ({alpha}, {beta})"
            )));
        }
        if !(e_max > 0.0) || !e_max.is_finite() {
            return Err(Error::InvalidParameters(format!("e_max = {e_max}")));
        }
        // With E = e_max sin²φ both endpoint singularities are absorbed by the Jacobian:
        // ∫ dE (c E^α - E^β)^(-1/2) = ∫_0^{π/2} 2 e_max^(1-β/2) sin^(1-α)φ cosφ / sqrt(1 - sin^(2p)φ) dφ
        let p = beta - alpha;
        let integrand = |phi: f64| {
            let (sin, cos) = phi.sin_cos();
            // 1 - sin^(2p) via cos², which stays accurate near φ = π/2
            let one_minus = -(p * (-cos * cos).ln_1p()).exp_m1();
            let ratio = if one_minus > 0.0 {
                cos / one_minus.sqrt()
            } else {
                1.0 / p.sqrt()
            };
            2.0 * sin.powf(1.0 - alpha) * ratio
        };
        let integral = e_max.powf(1.0 - beta / 2.0) * tanh_sinh(integrand, 0.0, PI / 2.0, 1e-15);
        Ok(Self {
            alpha,
            beta,
            e_max,
            norm: 1.0 / integral,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn c(&self) -> f64 {
        self.e_max.powf(self.beta - self.alpha)
    }

    pub fn density(&self, energy: f64) -> Result<f64> {
        if !(energy > 0.0 && energy < self.e_max) {
            return Err(Error::OutOfBand {
                energy,
                e_max: self.e_max,
            });
        }
        let arg = self.c() * energy.powf(self.alpha) - energy.powf(self.beta);
        if !(arg > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "c E^alpha - E^beta = {arg} <= 0 at E = {energy}"
            )));
        }
        Ok(self.norm / arg.sqrt())
    }

    /// Mean of the density over `[lo, hi]`.
    pub fn bin_average(&self, lo: f64, hi: f64) -> f64 {
        let c = self.c();
        let f = |e: f64| {
            let arg = c * e.powf(self.alpha) - e.powf(self.beta);
            if arg > 0.0 {
                self.norm / arg.sqrt()
            } else {
                0.0
            }
        };
        tanh_sinh(f, lo, hi, 1e-13) / (hi - lo)
    }
}

pub fn generalized_dos(alpha: f64, beta: f64, e_max: f64, energy: f64) -> Result<f64> {
    GeneralizedDos::new(alpha, beta, e_max)?.density(energy)
}

//! Stationary phase approximation (SPA) of the quantum return probability.
//!
//! For large `t` the mode average `(1/2π) ∫ dθ exp(i E(θ) t)` is dominated
//! by the points with `E'(θ₀) = 0`. Each contributes
//! `exp(i{t E(θ₀) + (π/4) sgn E''(θ₀)}) / sqrt(2π t |E''(θ₀)|)`.
//!
//! The ring has stationary points at `θ₀ = 0` and `θ₀ = π`, except for the
//! infinite `gamma = 2` chain where `E(θ) = πθ - θ²/2` has a kink at 0 and
//! only `θ₀ = π` survives.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::{SeriesKind, TimeGrid, TimeSeries};
use crate::error::{Error, Result};
use crate::model::{build_coupling_table, Gamma, RingSpec};
use crate::special::{dirichlet_eta, riemann_zeta};
use crate::spectral::bloch_eigenvalue;

/// SPA results below this time are marked advisory.
pub const SPA_VALIDITY_FLOOR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum SpaSystem {
    Finite { n_nodes: usize, r_max: usize },
    Infinite,
}

impl SpaSystem {
    pub fn of(spec: &RingSpec) -> Self {
        SpaSystem::Finite {
            n_nodes: spec.n_nodes(),
            r_max: spec.r_max(),
        }
    }

    fn ring(self, gamma: Gamma) -> Result<Option<RingSpec>> {
        match self {
            SpaSystem::Finite { n_nodes, r_max } => RingSpec::with_cutoff(n_nodes, gamma, r_max).map(Some),
            SpaSystem::Infinite => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryPoint {
    Zero,
    Pi,
}

impl StationaryPoint {
    pub fn theta(self) -> f64 {
        match self {
            StationaryPoint::Zero => 0.0,
            StationaryPoint::Pi => PI,
        }
    }
}

/// `E''(θ₀) = 2 Σ_R cos(θ₀ R) R^(2-gamma)`.
///
/// Infinite system: `2 ζ(gamma-2)` at 0 (divergent for `gamma <= 3`) and
/// `-2 η(gamma-2)` at π, with `-1` at `gamma = 2`. Finite systems use the
/// truncated sum with the same weights as the spectrum.
pub fn second_derivative(gamma: Gamma, point: StationaryPoint, system: SpaSystem) -> Result<f64> {
    if let Some(spec) = system.ring(gamma)? {
        let sum = build_coupling_table(&spec)
            .bloch_weights()
            .map(|(r, w)| {
                let r2 = (r * r) as f64;
                let sign = match point {
                    StationaryPoint::Zero => 1.0,
                    StationaryPoint::Pi if r % 2 == 0 => 1.0,
                    StationaryPoint::Pi => -1.0,
                };
                2.0 * w * r2 * sign
            })
            .sum();
        return Ok(sum);
    }
    let g = match gamma {
        Gamma::Infinite => {
            return Ok(match point {
                StationaryPoint::Zero => 2.0,
                StationaryPoint::Pi => -2.0,
            })
        }
        Gamma::Finite(g) => g,
    };
    match point {
        StationaryPoint::Zero if g <= 3.0 => Err(Error::DivergentCurvature { gamma: g }),
        StationaryPoint::Zero => Ok(2.0 * riemann_zeta(g - 2.0)?),
        // η(0) = 1/2 by continuation, matching E_2''(π) = -1.
        StationaryPoint::Pi if g == 2.0 => Ok(-1.0),
        StationaryPoint::Pi => Ok(-2.0 * dirichlet_eta(g - 2.0)?),
    }
}

/// Top of the band, `E(π)`.
pub fn band_maximum(gamma: Gamma, system: SpaSystem) -> Result<f64> {
    if let Some(spec) = system.ring(gamma)? {
        return Ok(bloch_eigenvalue(&spec, PI));
    }
    Ok(match gamma {
        Gamma::Infinite => 4.0,
        Gamma::Finite(2.0) => PI * PI / 2.0,
        // 4 Σ_{R odd} R^-gamma
        Gamma::Finite(g) => 4.0 * (1.0 - 2f64.powf(-g)) * riemann_zeta(g)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryPointInfo {
    pub point: StationaryPoint,
    pub theta0: f64,
    pub energy: f64,
    /// `None` when the curvature diverges.
    pub curvature: Option<f64>,
    pub sign: i8,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaParams {
    pub gamma: Gamma,
    pub system: SpaSystem,
    pub stationary_points: Vec<StationaryPointInfo>,
}

impl SpaParams {
    fn point(&self, p: StationaryPoint) -> Option<&StationaryPointInfo> {
        self.stationary_points.iter().find(|s| s.point == p)
    }
}

pub fn spa_params(gamma: Gamma, system: SpaSystem) -> Result<SpaParams> {
    if let Gamma::Finite(g) = gamma {
        if !(g >= 2.0) {
            return Err(Error::InvalidParameters(format!("gamma = {g} < 2")));
        }
    }
    let single_point = system == SpaSystem::Infinite && gamma == Gamma::Finite(2.0);
    let candidates: &[StationaryPoint] = if single_point {
        &[StationaryPoint::Pi]
    } else {
        &[StationaryPoint::Zero, StationaryPoint::Pi]
    };
    let e_max = band_maximum(gamma, system)?;
    let mut stationary_points = Vec::with_capacity(2);
    for &point in candidates {
        let curvature = match second_derivative(gamma, point, system) {
            Ok(c) => Some(c),
            Err(Error::DivergentCurvature { .. }) => None,
            Err(e) => return Err(e),
        };
        let sign = match curvature {
            Some(c) if c < 0.0 => -1,
            Some(0.0) => 0,
            _ => 1,
        };
        stationary_points.push(StationaryPointInfo {
            point,
            theta0: point.theta(),
            energy: match point {
                StationaryPoint::Zero => 0.0,
                StationaryPoint::Pi => e_max,
            },
            curvature,
            sign,
            degenerate: curvature == Some(0.0),
        });
    }
    Ok(SpaParams {
        gamma,
        system,
        stationary_points,
    })
}

/// SPA curve with its parameters. `advisory[i]` marks times below
/// [`SPA_VALIDITY_FLOOR`], where the large-`t` expansion is not reliable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaCurve {
    pub series: TimeSeries,
    pub params: SpaParams,
    pub advisory: Vec<bool>,
}

/// Stationary-phase estimate of the quantum return probability.
///
/// - one stationary point: `1 / (2π t |E''(π)|)`;
/// - finite ring: `(1/2πt) [1/|E''(0)| + 1/|E''(π)| + 2 cos(t(E(0)-E(π)) + π/2) / sqrt|E''(0)E''(π)|]`;
/// - infinite chain, `gamma > 3`:
///   `(1/4πt) [1/ζ + 1/η - 2 cos(t E(π) + π/2) / sqrt(ζη)]` at argument `gamma - 2`;
/// - infinite chain, `2 < gamma <= 3`, where `ζ(gamma-2)` diverges:
///   `1 / (2π t η(gamma-2))`, which is `[2π ln2 t]^-1` at `gamma = 3` and
///   has no oscillating term.
pub fn spa_return(gamma: Gamma, system: SpaSystem, grid: &TimeGrid) -> Result<SpaCurve> {
    let params = spa_params(gamma, system)?;
    let pi_point = *params.point(StationaryPoint::Pi).expect("θ₀ = π is always stationary");
    let zero_point = params.point(StationaryPoint::Zero).copied();
    let b = pi_point.curvature.expect("E''(π) is finite").abs();
    let e_pi = pi_point.energy;

    let value = |t: f64| -> f64 {
        match (system, zero_point) {
            (_, None) => 1.0 / (2.0 * PI * t * b),
            (SpaSystem::Infinite, Some(StationaryPointInfo { curvature: None, .. })) => {
                // |E''(π)| = 2 η(gamma - 2)
                1.0 / (PI * t * b)
            }
            (SpaSystem::Infinite, Some(zp)) => {
                let zeta = zp.curvature.unwrap() / 2.0;
                let eta = b / 2.0;
                (1.0 / (4.0 * PI * t))
                    * (1.0 / zeta.abs() + 1.0 / eta.abs()
                        - 2.0 * (t * e_pi + PI / 2.0).cos() / (zeta * eta).abs().sqrt())
            }
            (SpaSystem::Finite { .. }, Some(zp)) => {
                let a = zp.curvature.unwrap().abs();
                (1.0 / (2.0 * PI * t))
                    * (1.0 / a + 1.0 / b + 2.0 * (t * (zp.energy - e_pi) + PI / 2.0).cos() / (a * b).sqrt())
            }
        }
    };

    let values: Vec<f64> = grid.times().iter().map(|&t| value(t)).collect();
    let advisory = grid.times().iter().map(|&t| t < SPA_VALIDITY_FLOOR).collect();
    let spec = system.ring(gamma)?;
    Ok(SpaCurve {
        series: TimeSeries {
            spec,
            kind: SeriesKind::SpaReturn,
            grid: grid.clone(),
            values,
        },
        params,
        advisory,
    })
}

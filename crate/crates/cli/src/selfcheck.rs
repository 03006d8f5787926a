//! Fast consistency checks on rings of at most 512 nodes.

use std::f64::consts::{LN_2, PI};

use ringwalk::analysis::{fit_dos_exponents, fit_power_law, FitWindow};
use ringwalk::asymptotics::{spa_return, SpaSystem};
use ringwalk::dynamics::{quantum_return_avg, transition_probabilities, TimeGrid, WalkKind};
use ringwalk::model::{build_hamiltonian, Gamma, RingSpec};
use ringwalk::oracle;
use ringwalk::spectral::{diagonalize_spectrum, full_spectrum, DosEstimate, GeneralizedDos, Spectrum};
use ringwalk::special::{bessel_j0, dirichlet_eta, riemann_zeta};

/// Source of Bloch spectra under test.
pub type SpectrumFn = fn(&RingSpec) -> Spectrum;

pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    run: fn(SpectrumFn) -> Result<String, String>,
}

pub struct Outcome {
    pub id: &'static str,
    pub pass: bool,
    pub detail: String,
}

const GAMMAS: [Gamma; 5] = [
    Gamma::Finite(2.0),
    Gamma::Finite(2.5),
    Gamma::Finite(3.0),
    Gamma::Finite(4.0),
    Gamma::Infinite,
];

pub const CHECKS: &[Check] = &[
    Check {
        id: "spectrum-oracle",
        description: "Bloch spectrum equals dense diagonalization, N up to 512",
        run: spectrum_oracle,
    },
    Check {
        id: "bessel-identity",
        description: "nearest-neighbour quantum return equals J0(2t)^2, N=512",
        run: bessel_identity,
    },
    Check {
        id: "quantum-envelope",
        description: "quantum return envelope decays as 1/t, N=512",
        run: quantum_envelope,
    },
    Check {
        id: "expm-oracle",
        description: "transition probabilities equal dense matrix exponential, N up to 64",
        run: expm_oracle,
    },
    Check {
        id: "normalization",
        description: "profiles sum to one and t=0 is a delta",
        run: normalization,
    },
    Check {
        id: "hamiltonian",
        description: "Hamiltonian symmetric, circulant, zero row sums",
        run: hamiltonian,
    },
    Check {
        id: "special-functions",
        description: "zeta, eta and the eta-zeta identity",
        run: special_functions,
    },
    Check {
        id: "dos-fit",
        description: "DOS exponent fit recovers synthetic exponents",
        run: dos_fit,
    },
    Check {
        id: "spa-closed-forms",
        description: "SPA reduces to 1/(2 pi t) and 1/(2 pi ln2 t)",
        run: spa_closed_forms,
    },
];

pub fn run_all(spectrum: SpectrumFn) -> Vec<Outcome> {
    CHECKS
        .iter()
        .map(|c| {
            let (pass, detail) = match (c.run)(spectrum) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Outcome { id: c.id, pass, detail }
        })
        .collect()
}

fn ring(n: usize, g: Gamma) -> RingSpec {
    RingSpec::new(n, g).expect("valid ring")
}

fn verdict(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spectrum_oracle(spectrum: SpectrumFn) -> Result<String, String> {
    let mut worst = 0.0f64;
    for n in [16, 64, 256, 512] {
        for g in GAMMAS {
            let spec = ring(n, g);
            let a = spectrum(&spec).sorted();
            let d = diagonalize_spectrum(&spec).map_err(|e| e.to_string())?.sorted();
            let dev = a.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    verdict(worst <= 1e-9, format!("max |dE| = {worst:.1e}"))
}

fn bessel_identity(spectrum: SpectrumFn) -> Result<String, String> {
    let grid = TimeGrid::linear(0.0, 100.0, 0.05).map_err(|e| e.to_string())?;
    let series = quantum_return_avg(&spectrum(&ring(512, Gamma::Infinite)), &grid);
    let worst = series
        .iter()
        .map(|(t, v)| (v - bessel_j0(2.0 * t).powi(2)).abs())
        .fold(0.0, f64::max);
    verdict(worst <= 1e-6, format!("max deviation {worst:.1e}"))
}

fn quantum_envelope(spectrum: SpectrumFn) -> Result<String, String> {
    let grid = TimeGrid::linear(5.0, 100.0, 0.01).map_err(|e| e.to_string())?;
    let series = quantum_return_avg(&spectrum(&ring(512, Gamma::Infinite)), &grid);
    let slope = fit_power_law(&series, FitWindow::Default, true)
        .map_err(|e| e.to_string())?
        .slope()
        .expect("power law");
    verdict((slope + 1.0).abs() <= 0.05, format!("slope {slope:.4}"))
}

fn expm_oracle(_: SpectrumFn) -> Result<String, String> {
    let mut worst = 0.0f64;
    for n in [5, 16, 64] {
        for g in GAMMAS {
            let spec = ring(n, g);
            let h = build_hamiltonian(&spec);
            for t in [0.5, 3.0] {
                for kind in [WalkKind::Classical, WalkKind::Quantum] {
                    let dense = oracle::propagate(&h, t, kind).map_err(|e| e.to_string())?;
                    let fast = transition_probabilities(&spec, t, kind).map_err(|e| e.to_string())?;
                    for (a, b) in dense.iter().zip(&fast.probabilities) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
    }
    verdict(worst <= 1e-9, format!("max deviation {worst:.1e}"))
}

fn normalization(_: SpectrumFn) -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut delta = true;
    for g in GAMMAS {
        let spec = ring(257, g);
        for t in [0.0, 0.7, 20.0, 300.0] {
            for kind in [WalkKind::Classical, WalkKind::Quantum] {
                let p = transition_probabilities(&spec, t, kind).map_err(|e| e.to_string())?;
                worst = worst.max((p.total() - 1.0).abs());
                if t == 0.0 {
                    delta &= (p.probabilities[0] - 1.0).abs() <= 1e-12 && p.second_moment().abs() <= 1e-9;
                }
            }
        }
    }
    verdict(worst <= 1e-9 && delta, format!("max |sum - 1| = {worst:.1e}, delta at t=0: {delta}"))
}

fn hamiltonian(_: SpectrumFn) -> Result<String, String> {
    for n in 3..=33 {
        for g in GAMMAS {
            let m = build_hamiltonian(&ring(n, g)).into_entries();
            for j in 0..n {
                if m.row(j).iter().sum::<f64>().abs() > 1e-12 {
                    return Err(format!("row {j} of N={n}, gamma={g} does not sum to 0"));
                }
                for k in 0..n {
                    if m[(j, k)] != m[(k, j)] || m[(j, k)] != m[(0, (k + n - j) % n)] {
                        return Err(format!("N={n}, gamma={g} not symmetric circulant at ({j},{k})"));
                    }
                }
            }
        }
    }
    Ok("N = 3..33".into())
}

fn special_functions(_: SpectrumFn) -> Result<String, String> {
    let z2 = riemann_zeta(2.0).map_err(|e| e.to_string())? - PI * PI / 6.0;
    let z4 = riemann_zeta(4.0).map_err(|e| e.to_string())? - PI.powi(4) / 90.0;
    let e1 = dirichlet_eta(1.0).map_err(|e| e.to_string())? - LN_2;
    let mut identity = 0.0f64;
    for i in 0..50 {
        let s = 0.5 + 9.5 * i as f64 / 49.0;
        let lhs = dirichlet_eta(s).map_err(|e| e.to_string())?;
        let rhs = (1.0 - 2f64.powf(1.0 - s)) * riemann_zeta(s).map_err(|e| e.to_string())?;
        identity = identity.max((lhs - rhs).abs());
    }
    let worst = z2.abs().max(z4.abs()).max(e1.abs()).max(identity);
    verdict(worst <= 1e-12, format!("max error {worst:.1e}"))
}

fn dos_fit(_: SpectrumFn) -> Result<String, String> {
    let mut worst = 0.0f64;
    for (alpha, beta) in [(0.0, 1.0), (1.0, 1.5), (1.0, 2.0), (0.5, 1.4)] {
        let g = GeneralizedDos::new(alpha, beta, 4.0).map_err(|e| e.to_string())?;
        let edges: Vec<f64> = (0..=200).map(|i| 4.0 * i as f64 / 200.0).collect();
        let density = edges.windows(2).map(|w| g.bin_average(w[0], w[1])).collect();
        let dos = DosEstimate::from_density(edges, density, 1).map_err(|e| e.to_string())?;
        let (a, b) = fit_dos_exponents(&dos, 4.0)
            .map_err(|e| e.to_string())?
            .exponents()
            .expect("DOS fit");
        worst = worst.max((a - alpha).abs()).max((b - beta).abs());
    }
    verdict(worst <= 0.02, format!("max exponent error {worst:.4}"))
}

fn spa_closed_forms(_: SpectrumFn) -> Result<String, String> {
    let grid = TimeGrid::linear(1.0, 100.0, 0.5).map_err(|e| e.to_string())?;
    let g2 = spa_return(Gamma::Finite(2.0), SpaSystem::Infinite, &grid).map_err(|e| e.to_string())?;
    let g3 = spa_return(Gamma::Finite(3.0), SpaSystem::Infinite, &grid).map_err(|e| e.to_string())?;
    let worst = grid
        .times()
        .iter()
        .zip(g2.series.values.iter().zip(&g3.series.values))
        .map(|(t, (a, b))| (a * 2.0 * PI * t - 1.0).abs().max((b * 2.0 * PI * LN_2 * t - 1.0).abs()))
        .fold(0.0, f64::max);
    verdict(worst <= 1e-12, format!("max relative deviation {worst:.1e}"))
}

/// The analytic spectrum, the default subject of [`run_all`].
pub fn default_spectrum(spec: &RingSpec) -> Spectrum {
    full_spectrum(spec)
}

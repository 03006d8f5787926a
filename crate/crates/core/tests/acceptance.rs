//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::{LN_2, PI};
use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use ringwalk::analysis::{fit_dos_exponents, fit_power_law, local_maxima, FitWindow};
use ringwalk::asymptotics::{spa_return, SpaSystem};
use ringwalk::dynamics::{
    classical_return_avg, msd_from_spectrum, msd_return_relation_check, quantum_return_avg,
    transition_probabilities, TimeGrid, WalkKind,
};
use ringwalk::model::{build_hamiltonian, Gamma, RingSpec};
use ringwalk::oracle;
use ringwalk::spectral::{analytic_dos, diagonalize_spectrum, dos_histogram, full_spectrum, DosCase};
use ringwalk::special::{bessel_j0, dirichlet_eta, riemann_zeta};

const N: usize = 10_000;
const INF: Gamma = Gamma::Infinite;

/// Outcome of one sub-check.
struct Check {
    label: String,
    pass: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, pass: bool, label: impl Into<String>) {
        self.0.push(Check {
            label: label.into(),
            pass,
        });
    }

    fn within(&mut self, name: &str, value: f64, target: f64, tol: f64) {
        let pass = (value - target).abs() <= tol;
        self.push(pass, format!("{name}={value:.4} (want {target}±{tol})"));
    }
}

fn ring(n: usize, gamma: Gamma) -> RingSpec {
    RingSpec::new(n, gamma).unwrap()
}

fn gammas(values: &[f64]) -> Vec<Gamma> {
    values
        .iter()
        .map(|&g| if g.is_infinite() { INF } else { Gamma::Finite(g) })
        .collect()
}

fn c01_spectrum_oracle() -> Checks {
    let mut c = Checks::default();
    for &n in &[16, 64, 256, 512] {
        let mut worst = 0.0f64;
        for g in gammas(&[2.0, 2.5, 3.0, 4.0, f64::INFINITY]) {
            let spec = ring(n, g);
            let a = full_spectrum(&spec).sorted();
            let d = diagonalize_spectrum(&spec).unwrap().sorted();
            let dev = a.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
        }
        c.push(worst <= 1e-9, format!("N={n} max|Δ|={worst:.1e}"));
    }
    c
}

fn c02_dos_closed_forms() -> Checks {
    let mut c = Checks::default();
    for (g, case) in [
        (Gamma::Finite(2.0), DosCase::Gamma2),
        (Gamma::Finite(4.0), DosCase::Gamma4),
        (INF, DosCase::NearestNeighbour),
    ] {
        let dos = dos_histogram(&full_spectrum(&ring(N, g)), 100).unwrap();
        let centers = dos.bin_centers();
        let interior = 2..dos.n_bins() - 2;
        let errors: Vec<f64> = interior
            .filter_map(|i| {
                let want = analytic_dos(case, centers[i]).ok()?;
                Some(((dos.density[i] - want) / want).abs())
            })
            .collect();
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        c.push(
            mean <= 0.05 && errors.len() == dos.n_bins() - 4,
            format!("γ={g} mean rel err={mean:.4} over {} bins", errors.len()),
        );
    }
    c
}

fn c03_dos_exponents() -> Checks {
    let mut c = Checks::default();
    let fit = |g: Gamma| {
        let spectrum = full_spectrum(&ring(N, g));
        let dos = dos_histogram(&spectrum, 200).unwrap();
        fit_dos_exponents(&dos, spectrum.max_energy()).unwrap().exponents().unwrap()
    };
    let (a, b) = fit(INF);
    c.within("γ=inf α", a, 1.0, 0.05);
    c.within("γ=inf β", b, 2.0, 0.05);
    let (a, b) = fit(Gamma::Finite(4.0));
    c.within("γ=4 α", a, 1.0, 0.05);
    c.within("γ=4 β", b, 1.5, 0.1);
    let (a, b) = fit(Gamma::Finite(2.0));
    c.within("γ=2 α", a, 0.0, 0.05);
    c.within("γ=2 β", b, 1.0, 0.05);
    for g in gammas(&[5.0, 6.0, 8.0]) {
        let (a, _) = fit(g);
        c.within(&format!("γ={g} α"), a, 1.0, 0.05);
    }
    c
}

fn c04_bessel_identity() -> Checks {
    let mut c = Checks::default();
    let grid = TimeGrid::linear(0.0, 100.0, 0.01).unwrap();
    let series = quantum_return_avg(&full_spectrum(&ring(N, INF)), &grid);
    let worst = series
        .iter()
        .map(|(t, v)| (v - bessel_j0(2.0 * t).powi(2)).abs())
        .fold(0.0, f64::max);
    c.push(worst <= 1e-6, format!("max|π̄-J0(2t)²|={worst:.1e} on t∈[0,100]"));
    c
}

fn c05_gamma2_long_time() -> Checks {
    let mut c = Checks::default();
    let grid = TimeGrid::linear(20.0, 200.0, 0.05).unwrap();
    let series = quantum_return_avg(&full_spectrum(&ring(N, Gamma::Finite(2.0))), &grid);
    let worst = series
        .iter()
        .map(|(t, v)| (v * 2.0 * PI * t - 1.0).abs())
        .fold(0.0, f64::max);
    c.push(worst <= 0.05, format!("max|2πt·π̄₂-1|={worst:.4} on t∈[20,200]"));
    c
}

fn classical_grid() -> TimeGrid {
    TimeGrid::logarithmic(10.0, 1000.0, 50).unwrap()
}

fn quantum_grid() -> TimeGrid {
    TimeGrid::linear(5.0, 100.0, 0.01).unwrap()
}

fn c06_classical_split() -> Checks {
    let mut c = Checks::default();
    for (g, target) in [(Gamma::Finite(4.0), -0.5), (INF, -0.5), (Gamma::Finite(2.0), -1.0)] {
        let series = classical_return_avg(&full_spectrum(&ring(N, g)), &classical_grid());
        let fit = fit_power_law(&series, FitWindow::Default, false).unwrap();
        c.within(&format!("γ={g} slope"), fit.slope().unwrap(), target, 0.05);
    }
    c
}

fn c07_quantum_envelope() -> Checks {
    let mut c = Checks::default();
    for g in gammas(&[2.0, 3.0, 4.0, f64::INFINITY]) {
        let series = quantum_return_avg(&full_spectrum(&ring(N, g)), &quantum_grid());
        let fit = fit_power_law(&series, FitWindow::Default, true).unwrap();
        c.within(&format!("γ={g} envelope"), fit.slope().unwrap(), -1.0, 0.05);
    }
    c
}

fn c08_msd_laws() -> Checks {
    let mut c = Checks::default();
    for g in gammas(&[4.0, f64::INFINITY]) {
        let series = msd_from_spectrum(&full_spectrum(&ring(N, g)), &classical_grid(), WalkKind::Classical);
        let fit = fit_power_law(&series, FitWindow::Default, false).unwrap();
        c.within(&format!("classical γ={g}"), fit.slope().unwrap(), 1.0, 0.1);
    }
    let grid = TimeGrid::logarithmic(1.0, 100.0, 50).unwrap();
    for g in gammas(&[2.0, 3.0, 4.0, f64::INFINITY]) {
        let series = msd_from_spectrum(&full_spectrum(&ring(N, g)), &grid, WalkKind::Quantum);
        let fit = fit_power_law(&series, FitWindow::Default, false).unwrap();
        c.within(&format!("quantum γ={g}"), fit.slope().unwrap(), 2.0, 0.1);
    }
    let early = TimeGrid::linear(0.01, 1.0, 0.01).unwrap();
    let series = msd_from_spectrum(&full_spectrum(&ring(N, Gamma::Finite(2.0))), &early, WalkKind::Classical);
    let crossing = series.iter().find(|(_, v)| *v > N as f64).map(|(t, _)| t);
    let at_one = *series.values.last().unwrap();
    c.push(
        crossing.is_some(),
        format!("classical γ=2 MSD>N by t=1: MSD(1)={at_one:.1}"),
    );
    c
}

fn c09_msd_return_relation() -> Checks {
    let mut c = Checks::default();
    for (kind, g) in [
        (WalkKind::Classical, INF),
        (WalkKind::Classical, Gamma::Finite(4.0)),
        (WalkKind::Quantum, Gamma::Finite(2.0)),
        (WalkKind::Quantum, INF),
    ] {
        let grid = match kind {
            WalkKind::Classical => classical_grid(),
            WalkKind::Quantum => quantum_grid(),
        };
        let fit = msd_return_relation_check(&ring(N, g), &grid, kind, FitWindow::Default).unwrap();
        c.within(&format!("{} γ={g}", kind.as_str()), fit.slope().unwrap(), 1.0, 0.1);
    }
    c
}

fn c10_spa_agreement() -> Checks {
    let mut c = Checks::default();
    let grid = TimeGrid::linear(20.0, 100.0, 0.005).unwrap();

    let max_error_at_peaks = |g: Gamma, system: SpaSystem| -> f64 {
        let exact = quantum_return_avg(&full_spectrum(&ring(N, g)), &grid);
        let spa = spa_return(g, system, &grid).unwrap().series;
        local_maxima(&exact.values)
            .into_iter()
            .map(|i| ((spa.values[i] - exact.values[i]) / exact.values[i]).abs())
            .fold(0.0, f64::max)
    };

    for g in gammas(&[4.0, f64::INFINITY]) {
        let err = max_error_at_peaks(g, SpaSystem::of(&ring(N, g)));
        c.push(err <= 0.05, format!("γ={g} peak rel err={err:.4}"));
    }

    let g3 = Gamma::Finite(3.0);
    let spa3 = spa_return(g3, SpaSystem::Infinite, &grid).unwrap().series;
    let form = spa3
        .iter()
        .map(|(t, v)| (v * 2.0 * PI * LN_2 * t - 1.0).abs())
        .fold(0.0, f64::max);
    c.push(form <= 1e-12, format!("γ=3 SPA vs [2π ln2 t]^-1 dev={form:.1e}"));
    let err3 = max_error_at_peaks(g3, SpaSystem::Infinite);
    c.push(err3 <= 0.05, format!("γ=3 peak rel err={err3:.4}"));

    let spa2 = spa_return(Gamma::Finite(2.0), SpaSystem::Infinite, &grid).unwrap().series;
    let form = spa2
        .iter()
        .map(|(t, v)| (v * 2.0 * PI * t - 1.0).abs())
        .fold(0.0, f64::max);
    c.push(form <= 1e-12, format!("γ=2 SPA vs (2πt)^-1 dev={form:.1e}"));
    c
}

fn c11_special_functions() -> Checks {
    let mut c = Checks::default();
    let z2 = riemann_zeta(2.0).unwrap();
    let z4 = riemann_zeta(4.0).unwrap();
    let e1 = dirichlet_eta(1.0).unwrap();
    c.push((z2 - PI * PI / 6.0).abs() <= 1e-12, format!("ζ(2) err={:.1e}", (z2 - PI * PI / 6.0).abs()));
    c.push((z4 - PI.powi(4) / 90.0).abs() <= 1e-12, format!("ζ(4) err={:.1e}", (z4 - PI.powi(4) / 90.0).abs()));
    c.push((e1 - LN_2).abs() <= 1e-12, format!("η(1) err={:.1e}", (e1 - LN_2).abs()));
    let mut worst = 0.0f64;
    for i in 0..50 {
        let s = 0.5 + 9.5 * i as f64 / 49.0;
        if s == 1.0 {
            continue;
        }
        let lhs = dirichlet_eta(s).unwrap();
        let rhs = (1.0 - 2f64.powf(1.0 - s)) * riemann_zeta(s).unwrap();
        worst = worst.max((lhs - rhs).abs());
    }
    c.push(worst <= 1e-12, format!("η=(1-2^(1-s))ζ dev={worst:.1e} on s∈[0.5,10]"));
    c
}

fn c12_property_suites() -> Checks {
    let mut c = Checks::default();
    let gs = gammas(&[2.0, 2.5, 3.0, 4.0, 6.0, f64::INFINITY]);

    let mut hamiltonian_ok = true;
    for n in 3..=40 {
        for &g in &gs {
            let h = build_hamiltonian(&ring(n, g));
            let m = h.entries();
            for j in 0..n {
                let row_sum: f64 = m.row(j).iter().sum();
                hamiltonian_ok &= row_sum.abs() <= 1e-12;
                for k in 0..n {
                    hamiltonian_ok &= m[(j, k)] == m[(k, j)];
                    hamiltonian_ok &= m[(j, k)] == m[(0, (k + n - j) % n)];
                }
            }
        }
    }
    c.push(hamiltonian_ok, "Hamiltonian symmetric, circulant, zero row sums");

    let times = [0.0, 0.1, 1.0, 7.5, 50.0, 400.0];
    let mut worst_norm = 0.0f64;
    for &n in &[16, 101, 512] {
        for &g in &gs {
            for &t in &times {
                for kind in [WalkKind::Classical, WalkKind::Quantum] {
                    let p = transition_probabilities(&ring(n, g), t, kind).unwrap();
                    worst_norm = worst_norm.max((p.total() - 1.0).abs());
                }
            }
        }
    }
    c.push(worst_norm <= 1e-9, format!("normalization dev={worst_norm:.1e}"));

    let zero = TimeGrid::new(vec![0.0]).unwrap();
    let mut t0_ok = true;
    for &g in &gs {
        let spectrum = full_spectrum(&ring(64, g));
        t0_ok &= (classical_return_avg(&spectrum, &zero).values[0] - 1.0).abs() <= 1e-12;
        t0_ok &= (quantum_return_avg(&spectrum, &zero).values[0] - 1.0).abs() <= 1e-12;
        for kind in [WalkKind::Classical, WalkKind::Quantum] {
            t0_ok &= msd_from_spectrum(&spectrum, &zero, kind).values[0].abs() <= 1e-9;
        }
    }
    c.push(t0_ok, "t=0: return=1, MSD=0");

    let mut worst_oracle = 0.0f64;
    for &n in &[3, 8, 17, 32, 64] {
        for &g in &gs {
            let spec = ring(n, g);
            let h = build_hamiltonian(&spec);
            for &t in &[0.3, 2.0, 9.0] {
                for kind in [WalkKind::Classical, WalkKind::Quantum] {
                    let dense = oracle::propagate(&h, t, kind).unwrap();
                    let fast = transition_probabilities(&spec, t, kind).unwrap();
                    for (a, b) in dense.iter().zip(&fast.probabilities) {
                        worst_oracle = worst_oracle.max((a - b).abs());
                    }
                }
            }
        }
    }
    c.push(worst_oracle <= 1e-9, format!("expm oracle dev={worst_oracle:.1e} at N≤64"));
    c
}

type Criterion = (&'static str, &'static str, fn() -> Checks);

const CRITERIA: &[Criterion] = &[
    ("C1", "spectrum oracle equivalence", c01_spectrum_oracle),
    ("C2", "DOS closed forms", c02_dos_closed_forms),
    ("C3", "DOS exponents", c03_dos_exponents),
    ("C4", "Bessel identity", c04_bessel_identity),
    ("C5", "gamma=2 long-time law", c05_gamma2_long_time),
    ("C6", "classical universality split", c06_classical_split),
    ("C7", "quantum envelope universality", c07_quantum_envelope),
    ("C8", "MSD laws", c08_msd_laws),
    ("C9", "MSD-return relation", c09_msd_return_relation),
    ("C10", "SPA agreement", c10_spa_agreement),
    ("C11", "special functions", c11_special_functions),
    ("C12", "property suites", c12_property_suites),
];

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    println!("running {} acceptance criteria", CRITERIA.len());
    for &(id, name, run) in CRITERIA {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(run);
        let elapsed = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(checks) => {
                let pass = checks.0.iter().all(|c| c.pass);
                let detail = checks
                    .0
                    .iter()
                    .map(|c| {
                        if c.pass {
                            c.label.clone()
                        } else {
                            format!("FAILED {}", c.label)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("; ");
                (pass, detail)
            }
            Err(_) => (false, "panicked".to_string()),
        };
        if !pass {
            failed += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {name} ({elapsed:.1}s): {detail}");
    }
    println!("acceptance: {failed} failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

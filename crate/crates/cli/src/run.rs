use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use ringwalk::io::{to_json_document, write_dos_csv, write_series_csv, write_spectrum_csv, Cell, Metadata};
use ringwalk::{
    classify_universality, classical_return_avg, diagonalize_spectrum, dos_histogram, fit_dos_exponents,
    full_spectrum, msd_from_spectrum, quantum_return_avg, spa_return, standard_fits, Gamma, SpaSystem,
    Spectrum, TimeSeries, WalkKind,
};

use crate::config::{ExperimentConfig, Experiment, Format};

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Guard(String),
    Failed(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) | RunError::Failed(_) => 1,
            RunError::Guard(_) => 2,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(m) => write!(f, "usage error: {m}"),
            RunError::Guard(m) => write!(f, "guard violation: {m}"),
            RunError::Failed(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<ringwalk::Error> for RunError {
    fn from(e: ringwalk::Error) -> Self {
        match e {
            ringwalk::Error::GuardExceeded { .. } => RunError::Guard(e.to_string()),
            ringwalk::Error::InvalidSpec(_)
            | ringwalk::Error::InvalidBins(_)
            | ringwalk::Error::InvalidGrid(_)
            | ringwalk::Error::InvalidParameters(_)
            | ringwalk::Error::RelationNotApplicable { .. } => RunError::Usage(e.to_string()),
            _ => RunError::Failed(e.to_string()),
        }
    }
}

impl From<crate::config::ConfigError> for RunError {
    fn from(e: crate::config::ConfigError) -> Self {
        RunError::Usage(e.0)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Failed(format!("i/o: {e}"))
    }
}

type RunResult<T> = Result<T, RunError>;

/// Writes `bytes` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Where a single-file experiment goes: `<out>.<ext>` or standard output.
struct Sink<'a> {
    config: &'a ExperimentConfig,
    written: Vec<PathBuf>,
}

impl<'a> Sink<'a> {
    fn new(config: &'a ExperimentConfig) -> Self {
        Self {
            config,
            written: Vec::new(),
        }
    }

    fn path(&self, suffix: &str, ext: &str) -> Option<PathBuf> {
        self.config.out.as_ref().map(|prefix| {
            if suffix.is_empty() {
                PathBuf::from(format!("{prefix}.{ext}"))
            } else {
                PathBuf::from(format!("{prefix}_{suffix}.{ext}"))
            }
        })
    }

    fn emit(&mut self, suffix: &str, ext: &str, bytes: Vec<u8>) -> RunResult<()> {
        match self.path(suffix, ext) {
            Some(path) => {
                write_atomic(&path, &bytes)?;
                self.written.push(path);
            }
            None => io::stdout().write_all(&bytes)?,
        }
        Ok(())
    }

    fn metadata(&self) -> Metadata {
        let mut meta = Metadata::new();
        meta.push_json("config", self.config);
        meta
    }

    fn json<R: Serialize>(&mut self, suffix: &str, result: &R) -> RunResult<()> {
        let mut doc = to_json_document(self.config, result).map_err(|e| RunError::Failed(e.to_string()))?;
        doc.push('\n');
        self.emit(suffix, "json", doc.into_bytes())
    }

    fn series(&mut self, suffix: &str, series: &TimeSeries, extra: &[(&str, String)]) -> RunResult<()> {
        let mut meta = self.metadata();
        for (k, v) in extra {
            meta.push(*k, v.clone());
        }
        let mut buf = Vec::new();
        write_series_csv(&mut buf, series, &meta)?;
        self.emit(suffix, "csv", buf)
    }
}

fn gamma_tag(g: Gamma) -> String {
    format!("g{g}")
}

fn spectrum_for(config: &ExperimentConfig) -> RunResult<Spectrum> {
    if config.diagonalize {
        Ok(diagonalize_spectrum(&config.spec)?)
    } else {
        Ok(full_spectrum(&config.spec))
    }
}

/// Runs one experiment and returns the files it wrote.
pub fn run(config: &ExperimentConfig) -> RunResult<Vec<PathBuf>> {
    config.validate()?;
    let mut sink = Sink::new(config);
    match config.experiment {
        Experiment::Spectrum => {
            let spectrum = spectrum_for(config)?;
            match config.format {
                Format::Json => sink.json("", &spectrum)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_spectrum_csv(&mut buf, &spectrum, &sink.metadata())?;
                    sink.emit("", "csv", buf)?;
                }
            }
        }
        Experiment::Dos => {
            let dos = dos_histogram(&spectrum_for(config)?, config.bins)?;
            match config.format {
                Format::Json => sink.json("", &dos)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_dos_csv(&mut buf, &dos, &sink.metadata())?;
                    sink.emit("", "csv", buf)?;
                }
            }
        }
        Experiment::DosFit => {
            let spectrum = spectrum_for(config)?;
            let dos = dos_histogram(&spectrum, config.bins)?;
            let fit = fit_dos_exponents(&dos, spectrum.max_energy())?;
            match config.format {
                Format::Json => sink.json("", &fit)?,
                Format::Csv => {
                    let (alpha, beta) = fit.exponents().expect("DOS fit");
                    let mut buf = Vec::new();
                    ringwalk::io::write_csv(
                        &mut buf,
                        &sink.metadata(),
                        &["alpha", "beta", "residual", "n_points"],
                        [[Cell::from(alpha), Cell::from(beta), Cell::from(fit.residual), Cell::from(fit.n_points)]],
                    )?;
                    sink.emit("", "csv", buf)?;
                }
            }
        }
        Experiment::Return | Experiment::Msd => {
            let spectrum = spectrum_for(config)?;
            let grid = config.grid()?;
            let series = match (config.experiment, config.kind) {
                (Experiment::Return, WalkKind::Classical) => classical_return_avg(&spectrum, &grid),
                (Experiment::Return, WalkKind::Quantum) => quantum_return_avg(&spectrum, &grid),
                (_, kind) => msd_from_spectrum(&spectrum, &grid, kind),
            };
            match config.format {
                Format::Json => sink.json("", &series)?,
                Format::Csv => sink.series("", &series, &[])?,
            }
        }
        Experiment::Spa => {
            let system = if config.infinite {
                SpaSystem::Infinite
            } else {
                SpaSystem::of(&config.spec)
            };
            let curve = spa_return(config.spec.gamma(), system, &config.grid()?)?;
            match config.format {
                Format::Json => sink.json("", &curve)?,
                Format::Csv => {
                    let floor = ringwalk::asymptotics::SPA_VALIDITY_FLOOR;
                    sink.series("", &curve.series, &[("advisory", format!("t < {floor}"))])?
                }
            }
        }
        Experiment::Classify => {
            let fits = standard_fits(&config.spec)?;
            let report = classify_universality(&config.spec, &fits)?;
            match config.format {
                Format::Json => sink.json("", &report)?,
                Format::Csv => sink.emit("", "txt", format!("{report}\n").into_bytes())?,
            }
        }
        Experiment::Figure1 => figure1(config, &mut sink)?,
        Experiment::Figure2 => figure2(config, &mut sink)?,
        Experiment::Figure3 => figure3(config, &mut sink)?,
    }
    Ok(sink.written)
}

fn figure1(config: &ExperimentConfig, sink: &mut Sink) -> RunResult<()> {
    let mut curves = Vec::new();
    for &g in &config.gammas {
        let spectrum = full_spectrum(&config.ring(g)?);
        let dos = dos_histogram(&spectrum, config.bins)?;
        let mut meta = sink.metadata();
        meta.push("gamma", g.to_string());
        let mut buf = Vec::new();
        write_dos_csv(&mut buf, &dos, &meta)?;
        let tag = format!("dos_{}", gamma_tag(g));
        sink.emit(&tag, "csv", buf)?;
        curves.push((sink.written.last().cloned().expect("figures always write files"), g));
    }
    let mut script = gnuplot_header(config, "figure1");
    script.push_str("set xlabel 'E'\nset ylabel 'rho(E)'\nset key top center\n");
    let plots: Vec<String> = curves
        .iter()
        .map(|(path, g)| format!("'{}' every ::1 using (($1+$2)/2):3 with steps title 'gamma = {g}'", file_name(path)))
        .collect();
    script.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    sink.emit("", "gp", script.into_bytes())
}

fn figure2(config: &ExperimentConfig, sink: &mut Sink) -> RunResult<()> {
    let classical_grid = config.grid()?;
    let quantum_grid = config.fine_grid(config.quantum_t_max)?;
    let specs: Vec<_> = config.gammas.iter().map(|&g| config.ring(g)).collect::<Result<_, _>>()?;
    // Each gamma is independent; outputs are collected before any file is written.
    let results: Vec<[TimeSeries; 4]> = specs
        .par_iter()
        .map(|spec| {
            let spectrum = full_spectrum(spec);
            [
                classical_return_avg(&spectrum, &classical_grid),
                msd_from_spectrum(&spectrum, &classical_grid, WalkKind::Classical),
                quantum_return_avg(&spectrum, &quantum_grid),
                msd_from_spectrum(&spectrum, &quantum_grid, WalkKind::Quantum),
            ]
        })
        .collect();

    let mut panels: [Vec<(String, Gamma)>; 4] = Default::default();
    for (&g, series) in config.gammas.iter().zip(&results) {
        for (panel, s) in panels.iter_mut().zip(series) {
            let tag = format!("{}_{}", s.kind.as_str(), gamma_tag(g));
            sink.series(&tag, s, &[("gamma", g.to_string())])?;
            panel.push((file_name(sink.written.last().expect("figures always write files")), g));
        }
    }

    let titles = [
        ("(a) classical return", "p(t)"),
        ("(b) classical MSD", "<r^2>"),
        ("(c) quantum return", "pi(t)"),
        ("(d) quantum MSD", "<r^2>"),
    ];
    let mut script = gnuplot_header(config, "figure2");
    script.push_str("set logscale xy\nset format y '10^{%L}'\nset xlabel 't'\nset multiplot layout 2,2\n");
    for ((title, ylabel), files) in titles.iter().zip(&panels) {
        script.push_str(&format!("set title '{title}'\nset ylabel '{ylabel}'\n"));
        let plots: Vec<String> = files
            .iter()
            .map(|(f, g)| format!("'{f}' every ::1 using 1:2 with lines title 'gamma = {g}'"))
            .collect();
        script.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    }
    script.push_str("unset multiplot\n");
    sink.emit("", "gp", script.into_bytes())
}

fn figure3(config: &ExperimentConfig, sink: &mut Sink) -> RunResult<()> {
    let grid = config.fine_grid(config.t_max)?;
    let mut plots = Vec::new();
    for &g in &config.gammas {
        let spec = config.ring(g)?;
        let exact = quantum_return_avg(&full_spectrum(&spec), &grid);
        let system = if config.infinite {
            SpaSystem::Infinite
        } else {
            SpaSystem::of(&spec)
        };
        let spa = spa_return(g, system, &grid)?;
        sink.series(&format!("exact_{}", gamma_tag(g)), &exact, &[("gamma", g.to_string())])?;
        let exact_file = file_name(sink.written.last().expect("figures always write files"));
        sink.series(&format!("spa_{}", gamma_tag(g)), &spa.series, &[("gamma", g.to_string())])?;
        let spa_file = file_name(sink.written.last().expect("figures always write files"));
        plots.push(format!("'{exact_file}' every ::1 using 1:2 with lines title 'exact, gamma = {g}'"));
        plots.push(format!("'{spa_file}' every ::1 using 1:2 with lines dashtype 2 title 'SPA, gamma = {g}'"));
    }
    let mut script = gnuplot_header(config, "figure3");
    script.push_str("set xlabel 't'\nset ylabel 'pi(t)'\nset logscale y\n");
    script.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    sink.emit("", "gp", script.into_bytes())
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
}

fn gnuplot_header(config: &ExperimentConfig, name: &str) -> String {
    let json = serde_json::to_string(config).unwrap_or_default();
    format!(
        "# ringwalk {} {name}\n# config: {json}\n# run from the directory holding the data files\nset datafile separator ','\nset terminal pngcairo size 1200,900\nset output '{name}.png'\n",
        ringwalk::VERSION
    )
}

//! Command implementations. Each returns the process exit status.

use std::path::{Path, PathBuf};

use floquet_pacs_core::floquet::{analyze_monodromy, FloquetDecomposition};
use floquet_pacs_core::phase_space::{negativity_scan, WavefunctionEvaluator, WignerEvaluator};
use floquet_pacs_core::states::{covariance_iom, covariance_quadrature, mean_quadratures};
use floquet_pacs_core::{build_flt, Axis, Error, PeriodicConfiguration, PhaseSpaceGrid, StateFamily, StateSpec, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{axis_name, parse_alpha, parse_excitations, parse_grid, parse_pins, parse_times, AxisRange};
use crate::config::load_configuration;
use crate::error::{CliError, CliResult, EXIT_ERROR, EXIT_OK, EXIT_UNSTABLE};
use crate::output::{complex, complex_matrix, csv, emit, fmt_real, real_matrix, reals, to_json, Complex, Real};
use crate::verify::{all_pass, render_table, run_checks, Check};

/// Default free-axis range for phase-space and position grids.
pub const DEFAULT_AXIS: (f64, f64, usize) = (-5.0, 5.0, 201);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceFrame {
    Quadrature,
    IntegralsOfMotion,
}

/// Raw state flags as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct StateFlags {
    pub family: Option<StateFamily>,
    pub alpha: Option<String>,
    pub m: Option<String>,
}

impl StateFlags {
    pub fn build(&self, n_modes: usize) -> CliResult<StateSpec> {
        let family = self.family.ok_or_else(|| CliError::usage("--state is required"))?;
        let alpha = self.alpha.as_deref().map(parse_alpha).transpose()?;
        let m = self.m.as_deref().map(parse_excitations).transpose()?;
        let spec = match family {
            StateFamily::Fock => {
                if alpha.is_some() {
                    return Err(CliError::usage("a Fock state takes --m but not --alpha"));
                }
                StateSpec::fock(m.ok_or_else(|| CliError::usage("a Fock state needs --m"))?)?
            }
            StateFamily::Coherent => {
                if m.is_some() {
                    return Err(CliError::usage("a coherent state takes --alpha but not --m"));
                }
                StateSpec::coherent(alpha.ok_or_else(|| CliError::usage("a coherent state needs --alpha"))?)?
            }
            StateFamily::Pacs => StateSpec::pacs(
                alpha.ok_or_else(|| CliError::usage("a PACS needs --alpha"))?,
                m.ok_or_else(|| CliError::usage("a PACS needs --m"))?,
            )?,
        };
        if spec.n_modes() != n_modes {
            return Err(CliError::usage(format!(
                "the state has {} mode(s) but the configuration has {n_modes}",
                spec.n_modes()
            )));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateDocument {
    pub family: &'static str,
    pub alpha: Vec<Complex>,
    pub m: Vec<u32>,
}

impl From<&StateSpec> for StateDocument {
    fn from(spec: &StateSpec) -> Self {
        Self {
            family: spec.family().name(),
            alpha: spec.alpha().iter().copied().map(complex).collect(),
            m: spec.excitations().entries().to_vec(),
        }
    }
}

fn single_time(text: Option<&str>, period: f64) -> CliResult<f64> {
    let times = parse_times(text.unwrap_or("0"), period)?;
    match times.as_slice() {
        [t] => Ok(*t),
        _ => Err(CliError::usage("this command takes a single time")),
    }
}

fn report_unstable(margin: f64) -> i32 {
    eprintln!("unstable: Floquet multiplier off the unit circle by {margin:.6e}");
    EXIT_UNSTABLE
}

/// Builds the decomposition; an unstable configuration yields `Err(exit code)`.
fn decompose(config: &PeriodicConfiguration) -> CliResult<Result<FloquetDecomposition, i32>> {
    match build_flt(config) {
        Ok(d) => Ok(Ok(d)),
        Err(Error::Unstable { margin }) => Ok(Err(report_unstable(margin))),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Serialize)]
struct Residuals {
    canonical_condition: Option<Real>,
    symplectic: Real,
    determinant: Real,
    periodicity: Real,
}

#[derive(Debug, Serialize)]
struct FltSample {
    t: Real,
    matrix: Vec<Vec<Complex>>,
}

#[derive(Debug, Serialize)]
struct FloquetReport {
    n_modes: usize,
    period: Real,
    steps_per_period: usize,
    stable: bool,
    stability_margin: Real,
    exponents: Option<Vec<Real>>,
    multipliers: Vec<Complex>,
    monodromy: Vec<Vec<Real>>,
    residuals: Option<Residuals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flt_samples: Option<Vec<FltSample>>,
}

fn floquet_csv(report: &FloquetReport) -> String {
    let header = ["kind", "index", "re", "im"].map(String::from);
    let mut rows = Vec::new();
    for (k, w) in report.exponents.iter().flatten().enumerate() {
        rows.push(vec![
            "exponent".into(),
            (k + 1).to_string(),
            fmt_real(w.0),
            fmt_real(0.0),
        ]);
    }
    for (k, z) in report.multipliers.iter().enumerate() {
        rows.push(vec![
            "multiplier".into(),
            (k + 1).to_string(),
            fmt_real(z[0].0),
            fmt_real(z[1].0),
        ]);
    }
    csv(&header, rows)
}

pub fn cmd_floquet(
    config_path: &Path,
    out: Option<&Path>,
    format: Option<OutputFormat>,
    samples: bool,
) -> CliResult<i32> {
    let config = load_configuration(config_path)?;
    let (report, code) = match build_flt(&config) {
        Ok(d) => {
            let steps = config.steps_per_period();
            let grid: Vec<f64> = (0..=steps).map(|k| k as f64 * d.period() / steps as f64).collect();
            let max = |f: &dyn Fn(f64) -> f64| grid.iter().map(|&t| f(t)).fold(0.0, f64::max);
            let residuals = Residuals {
                canonical_condition: config
                    .is_time_reversal_symmetric()
                    .then(|| Real(d.canonical_condition_residual())),
                symplectic: Real(max(&|t| d.symplectic_residual(t))),
                determinant: Real(max(&|t| d.determinant_residual(t))),
                periodicity: Real(d.periodicity_residual()),
            };
            let flt_samples = samples.then(|| {
                d.flt_samples()
                    .iter()
                    .zip(&grid)
                    .map(|(f, &t)| FltSample {
                        t: Real(t),
                        matrix: complex_matrix(f),
                    })
                    .collect()
            });
            let report = FloquetReport {
                n_modes: d.n_modes(),
                period: Real(d.period()),
                steps_per_period: steps,
                stable: true,
                stability_margin: Real(d.stability_margin()),
                exponents: Some(reals(d.exponents())),
                multipliers: d.multipliers().iter().copied().map(complex).collect(),
                monodromy: real_matrix(d.monodromy()),
                residuals: Some(residuals),
                flt_samples,
            };
            (report, EXIT_OK)
        }
        Err(Error::Unstable { .. }) => {
            let a = analyze_monodromy(&config)?;
            let report = FloquetReport {
                n_modes: config.n_modes(),
                period: Real(config.period()),
                steps_per_period: config.steps_per_period(),
                stable: false,
                stability_margin: Real(a.stability_margin),
                exponents: None,
                multipliers: a.multipliers.iter().copied().map(complex).collect(),
                monodromy: real_matrix(&a.monodromy),
                residuals: None,
                flt_samples: None,
            };
            let code = report_unstable(a.stability_margin);
            (report, code)
        }
        Err(e) => return Err(e.into()),
    };
    let text = match format.unwrap_or(OutputFormat::Structured) {
        OutputFormat::Structured => to_json(&report)?,
        OutputFormat::Csv => floquet_csv(&report),
    };
    emit(out, &text)?;
    Ok(code)
}

#[derive(Debug, Serialize)]
struct RealCovariance {
    frame: &'static str,
    n_modes: usize,
    t: Real,
    matrix: Vec<Vec<Real>>,
    determinant: Real,
    bound: Real,
    gap: Real,
    intelligent: bool,
}

#[derive(Debug, Serialize)]
struct ComplexCovariance {
    frame: &'static str,
    n_modes: usize,
    t: Option<Real>,
    matrix: Vec<Vec<Complex>>,
    determinant: Real,
    bound: Real,
    gap: Real,
    intelligent: bool,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum CovarianceEntry {
    Real(RealCovariance),
    Complex(ComplexCovariance),
}

#[derive(Debug, Serialize)]
struct CovarianceDocument {
    state: StateDocument,
    reports: Vec<CovarianceEntry>,
}

pub struct CovarianceRequest<'a> {
    pub config: &'a Path,
    pub state: &'a StateFlags,
    pub times: Option<&'a str>,
    pub frame: CovarianceFrame,
    pub out: Option<&'a Path>,
    pub format: Option<OutputFormat>,
    pub series: Option<&'a Path>,
}

pub fn cmd_covariance(req: &CovarianceRequest) -> CliResult<i32> {
    let config = load_configuration(req.config)?;
    let spec = req.state.build(config.n_modes())?;
    let d = match decompose(&config)? {
        Ok(d) => d,
        Err(code) => return Ok(code),
    };
    let times = parse_times(req.times.unwrap_or("0"), d.period())?;
    let mut series = Vec::with_capacity(times.len());
    let reports: Vec<CovarianceEntry> = match req.frame {
        CovarianceFrame::Quadrature => times
            .iter()
            .map(|&t| {
                let r = covariance_quadrature(&d, t, &spec)?;
                series.push((t, r.determinant, r.gap));
                Ok(CovarianceEntry::Real(RealCovariance {
                    frame: r.frame.name(),
                    n_modes: r.n_modes,
                    t: Real(t),
                    matrix: real_matrix(&r.sigma),
                    determinant: Real(r.determinant),
                    bound: Real(r.robertson_bound),
                    gap: Real(r.gap),
                    intelligent: r.intelligent,
                }))
            })
            .collect::<CliResult<_>>()?,
        CovarianceFrame::IntegralsOfMotion => {
            let r = covariance_iom(&spec);
            series.extend(times.iter().map(|&t| (t, r.determinant, r.gap)));
            vec![CovarianceEntry::Complex(ComplexCovariance {
                frame: r.frame.name(),
                n_modes: r.n_modes,
                t: None,
                matrix: complex_matrix(&r.sigma),
                determinant: Real(r.determinant),
                bound: Real(r.robertson_bound),
                gap: Real(r.gap),
                intelligent: r.intelligent,
            })]
        }
    };
    let series_csv = csv(
        &["t", "det", "gap"].map(String::from),
        series
            .iter()
            .map(|&(t, det, gap)| vec![fmt_real(t), fmt_real(det), fmt_real(gap)]),
    );
    let text = match req.format.unwrap_or(OutputFormat::Structured) {
        OutputFormat::Structured => to_json(&CovarianceDocument {
            state: (&spec).into(),
            reports,
        })?,
        OutputFormat::Csv => series_csv.clone(),
    };
    if let Some(path) = req.series {
        emit(Some(path), &series_csv)?;
    }
    emit(req.out, &text)?;
    Ok(EXIT_OK)
}

/// Axis layout for a slice: free axes from `--grid`, explicit pins, and the
/// remaining coordinates pinned at `defaults`.
fn slice_axes(
    grid: &[AxisRange],
    pins: &[(usize, f64)],
    defaults: &[f64],
    default_free: &[usize],
) -> CliResult<Vec<Axis>> {
    let mut axes: Vec<Option<Axis>> = vec![None; defaults.len()];
    let n = defaults.len() / 2;
    let mut set = |index: usize, axis: Axis| {
        if axes[index].is_some() {
            return Err(CliError::usage(format!(
                "axis {} is given more than once",
                axis_name(index, n)
            )));
        }
        axes[index] = Some(axis);
        Ok(())
    };
    for r in grid {
        set(
            r.index,
            Axis::Free {
                min: r.min,
                max: r.max,
                count: r.count,
            },
        )?;
    }
    for &(index, value) in pins {
        set(index, Axis::Pinned(value))?;
    }
    if grid.is_empty() {
        let (min, max, count) = DEFAULT_AXIS;
        for &index in default_free {
            if axes[index].is_none() {
                axes[index] = Some(Axis::Free { min, max, count });
            }
        }
    }
    Ok(axes
        .into_iter()
        .zip(defaults)
        .map(|(a, &v)| a.unwrap_or(Axis::Pinned(v)))
        .collect())
}

fn collect_grid(flags: &[String], n: usize) -> CliResult<Vec<AxisRange>> {
    let mut out = Vec::new();
    for f in flags {
        out.extend(parse_grid(f, n)?);
    }
    Ok(out)
}

fn collect_pins(flags: &[String], n: usize) -> CliResult<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for f in flags {
        out.extend(parse_pins(f, n)?);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum AxisDocument {
    Free {
        name: String,
        min: Real,
        max: Real,
        count: usize,
    },
    Pinned {
        name: String,
        pinned: Real,
    },
}

fn axis_documents(axes: &[Axis], n: usize) -> Vec<AxisDocument> {
    axes.iter()
        .enumerate()
        .map(|(i, a)| match *a {
            Axis::Free { min, max, count } => AxisDocument::Free {
                name: axis_name(i, n),
                min: Real(min),
                max: Real(max),
                count,
            },
            Axis::Pinned(v) => AxisDocument::Pinned {
                name: axis_name(i, n),
                pinned: Real(v),
            },
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct WignerMeta {
    state: StateDocument,
    t: Real,
    axes: Vec<AxisDocument>,
    normalization: &'static str,
    grid_integral: Option<Real>,
    min_value: Real,
    min_location: Vec<Real>,
    negative_mass: Real,
}

pub struct GridRequest<'a> {
    pub config: &'a Path,
    pub state: &'a StateFlags,
    pub time: Option<&'a str>,
    pub grid: &'a [String],
    pub pins: &'a [String],
    pub out: Option<&'a Path>,
    pub format: Option<OutputFormat>,
}

fn require_csv(format: Option<OutputFormat>, command: &str) -> CliResult<()> {
    match format {
        Some(OutputFormat::Structured) => Err(CliError::usage(format!("{command} writes CSV only"))),
        _ => Ok(()),
    }
}

pub fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn cmd_wigner(req: &GridRequest) -> CliResult<i32> {
    require_csv(req.format, "wigner")?;
    let config = load_configuration(req.config)?;
    let n = config.n_modes();
    let spec = req.state.build(n)?;
    let d = match decompose(&config)? {
        Ok(d) => d,
        Err(code) => return Ok(code),
    };
    let t = single_time(req.time, d.period())?;
    let mean = mean_quadratures(&d, t, &spec)?;
    let defaults: Vec<f64> = mean.iter().copied().collect();
    let axes = slice_axes(
        &collect_grid(req.grid, n)?,
        &collect_pins(req.pins, n)?,
        &defaults,
        &[0, n],
    )?;
    let grid = PhaseSpaceGrid::new(axes.clone())?;
    let evaluator = WignerEvaluator::new(&d, t, &spec)?;
    let samples: Vec<f64> = (0..grid.n_points())
        .into_par_iter()
        .map(|i| evaluator.evaluate(&grid.point(i)))
        .collect();
    let grid = grid.with_samples(samples)?;
    let cell = grid.cell_volume();
    let stats = negativity_scan(&grid, cell)?;

    let header: Vec<String> = (0..2 * n).map(|i| axis_name(i, n)).chain(["W".to_string()]).collect();
    let rows = grid
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &w)| grid.point(i).into_iter().chain([w]).map(fmt_real).collect::<Vec<_>>());
    let text = csv(&header, rows);

    if let Some(out) = req.out {
        let all_free = axes.iter().all(Axis::is_free);
        let norm = (2.0 * std::f64::consts::PI).powi(n as i32);
        let meta = WignerMeta {
            state: (&spec).into(),
            t: Real(t),
            axes: axis_documents(&axes, n),
            normalization: "integral of W over all phase space equals (2 pi)^N",
            grid_integral: all_free.then(|| Real(grid.samples().iter().sum::<f64>() * cell / norm)),
            min_value: Real(stats.min_value),
            min_location: reals(&stats.min_location),
            negative_mass: Real(stats.negative_mass),
        };
        emit(Some(out), &text)?;
        emit(Some(&meta_path(out)), &to_json(&meta)?)?;
    } else {
        emit(None, &text)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_wavefunction(req: &GridRequest) -> CliResult<i32> {
    require_csv(req.format, "wavefunction")?;
    let config = load_configuration(req.config)?;
    let n = config.n_modes();
    let spec = req.state.build(n)?;
    let d = match decompose(&config)? {
        Ok(d) => d,
        Err(code) => return Ok(code),
    };
    let t = single_time(req.time, d.period())?;
    let grid = collect_grid(req.grid, n)?;
    let pins = collect_pins(req.pins, n)?;
    if grid
        .iter()
        .map(|r| r.index)
        .chain(pins.iter().map(|p| p.0))
        .any(|i| i >= n)
    {
        return Err(CliError::usage("the wavefunction takes position axes q1…qN only"));
    }
    let mean = mean_quadratures(&d, t, &spec)?;
    let mut defaults: Vec<f64> = mean.iter().take(n).copied().collect();
    defaults.extend(std::iter::repeat_n(0.0, n));
    let axes: Vec<Axis> = slice_axes(&grid, &pins, &defaults, &[0])?.into_iter().take(n).collect();
    let lattice = PhaseSpaceGrid::new(
        axes.iter()
            .copied()
            .chain(std::iter::repeat_n(Axis::Pinned(0.0), n))
            .collect(),
    )?;
    let evaluator = WavefunctionEvaluator::new(&d, t, &spec)?;
    let values: Vec<(Vec<f64>, C64)> = (0..lattice.n_points())
        .into_par_iter()
        .map(|i| {
            let q: Vec<f64> = lattice.point(i).into_iter().take(n).collect();
            let psi = evaluator.evaluate(&q)?;
            Ok((q, psi))
        })
        .collect::<CliResult<_>>()?;
    let header: Vec<String> = (0..n)
        .map(|i| axis_name(i, n))
        .chain(["re".into(), "im".into()])
        .collect();
    let rows = values
        .into_iter()
        .map(|(q, psi)| q.into_iter().chain([psi.re, psi.im]).map(fmt_real).collect::<Vec<_>>());
    emit(req.out, &csv(&header, rows))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct VerifyDocument<'a> {
    all_pass: bool,
    checks: &'a [Check],
}

/// Runs the invariant suite; `scale_u` corrupts the FLT for fault injection.
pub fn verify_configuration(
    config: &PeriodicConfiguration,
    scale_u: Option<f64>,
) -> CliResult<Result<Vec<Check>, i32>> {
    let mut d = match decompose(config)? {
        Ok(d) => d,
        Err(code) => return Ok(Err(code)),
    };
    if let Some(factor) = scale_u {
        d.scale_u_block(factor);
    }
    Ok(Ok(run_checks(&d)?))
}

pub fn cmd_verify(
    config_path: &Path,
    out: Option<&Path>,
    format: Option<OutputFormat>,
    scale_u: Option<f64>,
) -> CliResult<i32> {
    let config = load_configuration(config_path)?;
    let checks = match verify_configuration(&config, scale_u)? {
        Ok(c) => c,
        Err(code) => return Ok(code),
    };
    let pass = all_pass(&checks);
    let text = match format {
        None => render_table(&checks),
        Some(OutputFormat::Structured) => to_json(&VerifyDocument {
            all_pass: pass,
            checks: &checks,
        })?,
        Some(OutputFormat::Csv) => csv(
            &["check", "residual", "tolerance", "status"].map(String::from),
            checks.iter().map(|c| {
                vec![
                    c.name.to_string(),
                    c.residual.map(|r| fmt_real(r.0)).unwrap_or_default(),
                    fmt_real(c.tolerance.0),
                    serde_json::to_value(c.status)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default(),
                ]
            }),
        ),
    };
    emit(out, &text)?;
    Ok(if pass { EXIT_OK } else { EXIT_ERROR })
}

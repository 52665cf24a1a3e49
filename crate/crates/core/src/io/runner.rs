//! Subcommand orchestration. Every run writes `manifest.toml` first and a
//! `DONE` marker last; a failed check or an error leaves the marker absent.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimates::{bilinear_monte_carlo, loglog_slope, scattering_profile, strichartz_ratio, TimeWindow};
use crate::evolve::{evolve, DiagnosticRow, SnapshotSchedule, Trajectory};
use crate::spectral::CarrierField;
use crate::symbols::{kappa_coefficients, DispersionParams, KappaCoefficients};
use crate::transforms::{cov_equivalence_gap, scale_field, scaling_commutation_gap};
use crate::airy1d::kernel_identity_error;

use super::config::RunConfig;
use super::snapshot::write_snapshot;

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const DONE_FILE: &str = "DONE";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CHECKS_FILE: &str = "checks.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Simulate,
    VerifyCov,
    VerifyScaling,
    EstimateStrichartz,
    EstimateBilinear,
    Scattering,
    Airy1d,
    Coeffs,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::Simulate,
        Subcommand::VerifyCov,
        Subcommand::VerifyScaling,
        Subcommand::EstimateStrichartz,
        Subcommand::EstimateBilinear,
        Subcommand::Scattering,
        Subcommand::Airy1d,
        Subcommand::Coeffs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Simulate => "simulate",
            Subcommand::VerifyCov => "verify-cov",
            Subcommand::VerifyScaling => "verify-scaling",
            Subcommand::EstimateStrichartz => "estimate-strichartz",
            Subcommand::EstimateBilinear => "estimate-bilinear",
            Subcommand::Scattering => "scattering",
            Subcommand::Airy1d => "airy1d",
            Subcommand::Coeffs => "coeffs",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand {s:?}")))
    }
}

/// One invariant or threshold check of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            passed: value <= bound,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub subcommand: Subcommand,
    pub dir: PathBuf,
    /// Files written, relative to `dir`, in order.
    pub artifacts: Vec<String>,
    pub checks: Vec<CheckOutcome>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    subcommand: Subcommand,
    code_version: &'static str,
    seed: u64,
    config: &'a RunConfig,
}

struct Outputs {
    dir: PathBuf,
    artifacts: Vec<String>,
    checks: Vec<CheckOutcome>,
}

impl Outputs {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> Result<()> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.artifacts.push(name.to_owned());
        Ok(())
    }

    fn snapshot(&mut self, name: &str, state: &crate::spectral::FieldState) -> Result<()> {
        write_snapshot(state, &self.path(name))?;
        self.artifacts.push(name.to_owned());
        Ok(())
    }

    fn check(&mut self, c: CheckOutcome) {
        self.checks.push(c);
    }
}

/// Runs `sub` with the artifacts under `cfg.output.dir`. A failed check is
/// reported as [`Error::CheckFailed`] after all artifacts are written.
pub fn run(sub: Subcommand, cfg: &RunConfig) -> Result<RunReport> {
    let dir = cfg.output.dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let done = dir.join(DONE_FILE);
    if done.exists() {
        fs::remove_file(&done).map_err(|e| Error::io(&done, e))?;
    }
    let manifest = Manifest {
        subcommand: sub,
        code_version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        config: cfg,
    };
    let text = toml::to_string(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    let mpath = dir.join(MANIFEST_FILE);
    fs::write(&mpath, text).map_err(|e| Error::io(&mpath, e))?;

    let mut out = Outputs {
        dir: dir.clone(),
        artifacts: vec![MANIFEST_FILE.to_owned()],
        checks: Vec::new(),
    };
    match sub {
        Subcommand::Simulate => simulate(cfg, &mut out)?,
        Subcommand::VerifyCov => verify_cov(cfg, &mut out)?,
        Subcommand::VerifyScaling => verify_scaling(cfg, &mut out)?,
        Subcommand::EstimateStrichartz => estimate_strichartz(cfg, &mut out)?,
        Subcommand::EstimateBilinear => estimate_bilinear(cfg, &mut out)?,
        Subcommand::Scattering => scattering(cfg, &mut out)?,
        Subcommand::Airy1d => airy(cfg, &mut out)?,
        Subcommand::Coeffs => coeffs(cfg, &mut out)?,
    }
    let checks = std::mem::take(&mut out.checks);
    out.csv(CHECKS_FILE, &checks)?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} = {:e} exceeds {:e}", c.name, c.value, c.bound))
        .collect();
    if !failed.is_empty() {
        return Err(Error::CheckFailed(failed.join("; ")));
    }
    fs::write(&done, b"").map_err(|e| Error::io(&done, e))?;
    out.artifacts.push(DONE_FILE.to_owned());
    Ok(RunReport {
        subcommand: sub,
        dir,
        artifacts: out.artifacts,
        checks,
    })
}

fn section<'a, T>(value: &'a Option<T>, name: &str, sub: Subcommand) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::Config(format!("subcommand {sub} needs a [{name}] section")))
}

fn write_trajectory(traj: &Trajectory, out: &mut Outputs) -> Result<()> {
    out.csv::<DiagnosticRow>(DIAGNOSTICS_FILE, &traj.diagnostics)?;
    for (k, s) in traj.snapshots.iter().enumerate() {
        out.snapshot(&format!("snapshot_{k:05}.dysnap"), s)?;
    }
    out.snapshot("final.dysnap", &traj.final_state)
}

fn simulate(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let spec = cfg.model()?;
    let traj = evolve(&cfg.initial_state()?, &spec, cfg.integrator.t_final, &cfg.controls()?)?;
    write_trajectory(&traj, out)?;
    if spec.conserves_mass() {
        out.check(CheckOutcome::at_most("mass_drift", traj.mass_drift(), cfg.checks.mass_drift));
    }
    Ok(())
}

#[derive(Serialize)]
struct CovRow {
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
    t_max: f64,
    gap: f64,
}

fn verify_cov(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let cov = section(&cfg.cov, "cov", Subcommand::VerifyCov)?;
    let spec = cfg.model()?;
    let u0 = cfg.initial_state()?;
    let t_max = cov.sample_times.iter().copied().fold(0.0, f64::max);
    let mut rows = Vec::new();
    for &[a1, a2, a3] in &cov.alphas {
        let d = DispersionParams::new(a1, a2, a3)?;
        let gap = cov_equivalence_gap(&u0, &d, spec.coefficients(), cfg.model.params(), &cov.sample_times, cfg.integrator.dt)?;
        rows.push(CovRow {
            alpha1: a1,
            alpha2: a2,
            alpha3: a3,
            t_max,
            gap,
        });
        out.check(CheckOutcome::at_most(format!("cov_gap({a1},{a2},{a3})"), gap, cfg.checks.cov_gap));
    }
    out.csv("cov.csv", &rows)
}

#[derive(Serialize)]
struct ScalingRow {
    lambda: f64,
    t: f64,
    gap: f64,
}

fn verify_scaling(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let lambda = section(&cfg.scaling, "scaling", Subcommand::VerifyScaling)?.lambda;
    let spec = cfg.model()?;
    let controls = cfg.controls()?;
    let controls = crate::evolve::Controls {
        snapshots: SnapshotSchedule::Final,
        ..controls
    };
    let t = cfg.integrator.t_final;
    let gap = scaling_commutation_gap(&cfg.initial_state()?, spec.coefficients(), cfg.model.params(), lambda, t, &controls)?;
    out.check(CheckOutcome::at_most("scaling_gap", gap, cfg.checks.scaling_gap));
    out.csv("scaling.csv", &[ScalingRow { lambda, t, gap }])
}

#[derive(Serialize)]
struct StrichartzRow {
    lambda: f64,
    nx: usize,
    ny: usize,
    half_width: f64,
    samples: usize,
    ratio: f64,
}

fn estimate_strichartz(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let s = section(&cfg.strichartz, "strichartz", Subcommand::EstimateStrichartz)?;
    let u0 = cfg.initial_state()?;
    let window = TimeWindow::new(s.half_width, s.samples)?;
    let mut rows = Vec::new();
    for &lambda in &s.lambdas {
        let data = if lambda == 1.0 { u0.clone() } else { scale_field(&u0, lambda)? };
        let w = window.scaled(lambda.powi(-3))?;
        let ratio = strichartz_ratio(&CarrierField::from(&data), &w)?;
        rows.push(StrichartzRow {
            lambda,
            nx: data.grid().nx(),
            ny: data.grid().ny(),
            half_width: w.half_width,
            samples: w.samples,
            ratio,
        });
    }
    out.csv("strichartz.csv", &rows)
}

#[derive(Serialize)]
struct BilinearDrawRow {
    n1: u64,
    n2: u64,
    draw: usize,
    product: f64,
    constant: f64,
}

#[derive(Serialize)]
struct BilinearSummaryRow {
    n1: u64,
    n2: u64,
    draws: usize,
    mean_constant: f64,
    mean_product: f64,
    spread: f64,
}

#[derive(Serialize)]
struct SlopeRow {
    quantity: &'static str,
    slope: f64,
}

fn estimate_bilinear(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let b = section(&cfg.bilinear, "bilinear", Subcommand::EstimateBilinear)?;
    let grid = cfg.grid()?;
    let mut draws = Vec::new();
    let mut summary = Vec::new();
    for &n1 in &b.n1 {
        let sample = bilinear_monte_carlo(&grid, n1, b.n2, b.width, b.draws, cfg.seed, b.samples)?;
        for (k, (&product, &constant)) in sample.products.iter().zip(&sample.constants).enumerate() {
            draws.push(BilinearDrawRow {
                n1,
                n2: b.n2,
                draw: k,
                product,
                constant,
            });
        }
        out.check(CheckOutcome::at_most(format!("bilinear_spread(N1={n1})"), sample.spread(), cfg.checks.bilinear_spread));
        summary.push(BilinearSummaryRow {
            n1,
            n2: b.n2,
            draws: b.draws,
            mean_constant: sample.mean_constant(),
            mean_product: sample.mean_product(),
            spread: sample.spread(),
        });
    }
    out.csv("bilinear_draws.csv", &draws)?;
    out.csv("bilinear.csv", &summary)?;
    if summary.len() >= 2 {
        let constant: Vec<(f64, f64)> = summary.iter().map(|r| (r.n1 as f64, r.mean_constant)).collect();
        let product: Vec<(f64, f64)> = summary.iter().map(|r| (r.n1 as f64, r.mean_product)).collect();
        out.csv(
            "bilinear_slopes.csv",
            &[
                SlopeRow {
                    quantity: "mean_constant",
                    slope: loglog_slope(&constant)?,
                },
                SlopeRow {
                    quantity: "mean_product",
                    slope: loglog_slope(&product)?,
                },
            ],
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ScatteringRow {
    t: f64,
    difference: f64,
    ratio: Option<f64>,
    edge_mass: f64,
}

fn scattering(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let s = section(&cfg.scattering, "scattering", Subcommand::Scattering)?;
    let spec = cfg.model()?;
    let t_end = s.times.iter().copied().fold(0.0, f64::max);
    let controls = cfg.controls()?.snapshots(SnapshotSchedule::Times(s.times.clone()));
    let traj = evolve(&cfg.initial_state()?, &spec, t_end, &controls)?;
    let profile = scattering_profile(&traj, &spec)?;
    let edge = |t: f64| {
        traj.snapshots
            .iter()
            .find(|u| (u.time() - t).abs() < 1e-9)
            .map(|u| DiagnosticRow::of(u).edge_mass)
            .unwrap_or(f64::NAN)
    };
    let mut rows = Vec::new();
    for (k, &(t, d)) in profile.differences.iter().enumerate() {
        rows.push(ScatteringRow {
            t,
            difference: d,
            ratio: (k > 0).then(|| d / profile.differences[k - 1].1),
            edge_mass: edge(t),
        });
    }
    let worst_edge = traj.diagnostics.iter().map(|d| d.edge_mass).fold(0.0, f64::max);
    out.check(CheckOutcome::at_most("edge_mass", worst_edge, cfg.checks.edge_mass));
    if let Some(bound) = cfg.checks.scattering_ratio {
        let worst = profile.ratios().into_iter().fold(0.0, f64::max);
        out.check(CheckOutcome::at_most("scattering_ratio", worst, bound));
    }
    out.csv(DIAGNOSTICS_FILE, &traj.diagnostics)?;
    out.csv("scattering.csv", &rows)?;
    out.snapshot("pullback.dysnap", &profile.pullback)
}

#[derive(Serialize)]
struct AiryRow {
    n: usize,
    length: f64,
    sigma: f64,
    t: f64,
    relative_error: f64,
}

fn airy(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let a = section(&cfg.airy1d, "airy1d", Subcommand::Airy1d)?;
    let params = cfg.model.params();
    let mut rows = Vec::new();
    for n in [a.n, 2 * a.n] {
        let relative_error = kernel_identity_error(n, a.length, a.sigma, a.t, &params)?;
        rows.push(AiryRow {
            n,
            length: a.length,
            sigma: a.sigma,
            t: a.t,
            relative_error,
        });
    }
    out.check(CheckOutcome::at_most("airy_error", rows[0].relative_error, cfg.checks.airy_error));
    out.csv("airy1d.csv", &rows)
}

#[derive(Serialize)]
struct CoeffRow {
    kappa: f64,
    p: f64,
    q: f64,
    r: f64,
    s: f64,
    gamma: f64,
    u: f64,
    v: f64,
    cg_factor: f64,
}

impl From<KappaCoefficients> for CoeffRow {
    fn from(k: KappaCoefficients) -> Self {
        Self {
            kappa: k.kappa,
            p: k.p,
            q: k.q,
            r: k.r,
            s: k.s,
            gamma: k.gamma,
            u: k.u,
            v: k.v,
            cg_factor: k.cg_factor,
        }
    }
}

/// The coefficient table as CSV text, one row per `kappa`.
pub fn coefficient_table(kappas: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for &k in kappas {
        w.serialize(CoeffRow::from(kappa_coefficients(k)?))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn coeffs(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let c = section(&cfg.coeffs, "coeffs", Subcommand::Coeffs)?;
    let table = coefficient_table(&c.kappas)?;
    let path = out.path("coeffs.csv");
    fs::write(&path, table).map_err(|e| Error::io(&path, e))?;
    out.artifacts.push("coeffs.csv".to_owned());
    Ok(())
}

/// True when `dir` holds a completed run.
pub fn is_complete(dir: &Path) -> bool {
    dir.join(DONE_FILE).is_file() && dir.join(MANIFEST_FILE).is_file()
}

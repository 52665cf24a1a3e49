//! Run configuration: a TOML document with the sections `model`, `grid`,
//! `integrator`, `init`, `output` and `checks`, plus one optional section per
//! estimate or verification subcommand. Unknown keys are rejected.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::random_shell_packet;
use crate::evolve::{Controls, Integrator, SnapshotSchedule};
use crate::models::{gaussian, normalize_l2, Dealiasing, ModelKind, ModelParams, ModelSpec};
use crate::spectral::{FieldState, SpectralGrid};
use crate::symbols::{kappa_coefficients, DispersionParams};

use super::snapshot::read_snapshot;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    NormalizedDysthe,
    Generalized,
    FullDysthe,
    FiniteDepth,
    GravityCapillary,
    KappaInfinity,
    Dysthe1d,
    TrulsenDysthe,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: KindName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// `[alpha1, alpha2, alpha3]` of the generalized dispersion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 3]>,
    /// Cubic coefficients as `[re, im]` pairs; the model's own when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<[[f64; 2]; 4]>,
    #[serde(default)]
    pub dealiasing: Dealiasing,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "one")]
    pub k0: f64,
}

fn one() -> f64 {
    1.0
}

impl ModelConfig {
    fn require(&self, value: Option<f64>, key: &str) -> Result<f64> {
        value.ok_or_else(|| Error::Config(format!("model.{key} is required for kind {:?}", self.kind)))
    }

    pub fn kind(&self) -> Result<ModelKind> {
        Ok(match self.kind {
            KindName::NormalizedDysthe => ModelKind::NormalizedDysthe,
            KindName::Generalized => {
                let [a1, a2, a3] = self
                    .alpha
                    .ok_or_else(|| Error::Config("model.alpha is required for kind generalized".into()))?;
                ModelKind::Generalized(DispersionParams::new(a1, a2, a3)?)
            }
            KindName::FullDysthe => ModelKind::FullDysthe,
            KindName::FiniteDepth => ModelKind::FiniteDepth {
                h: self.require(self.h, "h")?,
            },
            KindName::GravityCapillary => {
                let kappa = self.require(self.kappa, "kappa")?;
                kappa_coefficients(kappa)?;
                ModelKind::GravityCapillary { kappa }
            }
            KindName::KappaInfinity => ModelKind::KappaInfinity,
            KindName::Dysthe1d => ModelKind::Dysthe1D {
                h: self.require(self.h, "h")?,
            },
            KindName::TrulsenDysthe => ModelKind::TrulsenDysthe { h: self.h },
        })
    }

    pub fn coefficients(&self) -> Option<[Complex64; 4]> {
        self.c.map(|c| c.map(|[re, im]| Complex64::new(re, im)))
    }

    pub fn params(&self) -> ModelParams {
        ModelParams {
            c: self.coefficients(),
            dealiasing: self.dealiasing,
            omega: self.omega,
            k0: self.k0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    /// Defaults to `nx`; `1` selects a line grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    pub lx: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ly: Option<f64>,
}

impl GridConfig {
    pub fn build(&self) -> Result<SpectralGrid> {
        match self.ny.unwrap_or(self.nx) {
            1 => SpectralGrid::line(self.nx, self.lx),
            ny => SpectralGrid::new(self.nx, ny, self.lx, self.ly.unwrap_or(self.lx)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default)]
    pub scheme: Integrator,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "one")]
    pub t_final: f64,
}

fn default_dt() -> f64 {
    1e-3
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            scheme: Integrator::default(),
            dt: default_dt(),
            t_final: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitConfig {
    Gaussian {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default = "unit_pair")]
        sigma: [f64; 2],
        #[serde(default)]
        carrier: [f64; 2],
        #[serde(default)]
        center: [f64; 2],
        /// Rescales to this `L^2` norm when present.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        l2_norm: Option<f64>,
    },
    PlaneWave {
        j: i64,
        #[serde(default)]
        k: i64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    File {
        path: PathBuf,
    },
    /// Random Gaussian packet on the frequency shell `n`, drawn from `seed`.
    RandomShell {
        n: u64,
        #[serde(default = "default_width")]
        width: f64,
    },
}

fn default_amplitude() -> f64 {
    0.1
}

fn default_width() -> f64 {
    2.0
}

fn unit_pair() -> [f64; 2] {
    [1.0, 1.0]
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig::Gaussian {
            amplitude: default_amplitude(),
            phase: 0.0,
            sigma: unit_pair(),
            carrier: [0.0, 0.0],
            center: [0.0, 0.0],
            l2_norm: None,
        }
    }
}

impl InitConfig {
    pub fn build(&self, grid: &SpectralGrid, seed: u64) -> Result<FieldState> {
        match self {
            InitConfig::Gaussian {
                amplitude,
                phase,
                sigma,
                carrier,
                center,
                l2_norm,
            } => {
                let u = gaussian(
                    grid,
                    Complex64::from_polar(*amplitude, *phase),
                    (sigma[0], sigma[1]),
                    (carrier[0], carrier[1]),
                    (center[0], center[1]),
                );
                Ok(match l2_norm {
                    Some(n) => normalize_l2(u, *n),
                    None => u,
                })
            }
            InitConfig::PlaneWave { j, k, amplitude } => {
                Ok(FieldState::plane_wave(grid, *j, *k, Complex64::new(*amplitude, 0.0)))
            }
            InitConfig::File { path } => {
                let u = read_snapshot(path)?;
                if u.grid() != grid {
                    return Err(Error::Config(format!("{} does not match the configured grid", path.display())));
                }
                Ok(u)
            }
            InitConfig::RandomShell { n, width } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok(random_shell_packet(grid, *n, *width, &mut rng).to_field())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Snapshot every this many steps; `0` keeps only the final state.
    #[serde(default)]
    pub snapshot_every: usize,
    /// Explicit snapshot times; excludes `snapshot_every`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_times: Option<Vec<f64>>,
    #[serde(default = "default_diagnostic_every")]
    pub diagnostic_every: usize,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_diagnostic_every() -> usize {
    10
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            snapshot_every: 0,
            snapshot_times: None,
            diagnostic_every: default_diagnostic_every(),
        }
    }
}

impl OutputConfig {
    pub fn schedule(&self) -> Result<SnapshotSchedule> {
        match (&self.snapshot_times, self.snapshot_every) {
            (Some(_), k) if k > 0 => Err(Error::Config(
                "output.snapshot_times and output.snapshot_every are mutually exclusive".into(),
            )),
            (Some(ts), _) => Ok(SnapshotSchedule::Times(ts.clone())),
            (None, 0) => Ok(SnapshotSchedule::Final),
            (None, k) => Ok(SnapshotSchedule::Every(k)),
        }
    }
}

/// Tolerances of the invariant checks; a violated check fails the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    /// Relative mass drift allowed for mass-conserving models.
    #[serde(default = "default_tolerance")]
    pub mass_drift: f64,
    #[serde(default = "default_tolerance")]
    pub cov_gap: f64,
    #[serde(default = "default_tolerance")]
    pub scaling_gap: f64,
    #[serde(default = "default_airy_error")]
    pub airy_error: f64,
    /// Largest mass fraction outside the central window during a scattering run.
    #[serde(default = "default_tolerance")]
    pub edge_mass: f64,
    /// Largest max/min ratio of Monte-Carlo bilinear constants.
    #[serde(default = "default_spread")]
    pub bilinear_spread: f64,
    /// Largest consecutive ratio of pullback differences; unchecked when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scattering_ratio: Option<f64>,
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_airy_error() -> f64 {
    1e-4
}

fn default_spread() -> f64 {
    10.0
}

impl Default for ChecksConfig {
    fn default() -> Self {
        Self {
            mass_drift: default_tolerance(),
            cov_gap: default_tolerance(),
            scaling_gap: default_tolerance(),
            airy_error: default_airy_error(),
            edge_mass: default_tolerance(),
            bilinear_spread: default_spread(),
            scattering_ratio: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovConfig {
    /// Dispersion triples `[alpha1, alpha2, alpha3]` to test.
    pub alphas: Vec<[f64; 3]>,
    /// Normalized-equation times at which the two runs are compared.
    pub sample_times: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    #[serde(default = "two")]
    pub lambda: f64,
}

fn two() -> f64 {
    2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzConfig {
    pub half_width: f64,
    pub samples: usize,
    /// Scaling factors; the window shrinks by `lambda^3` for each.
    #[serde(default = "unit_list")]
    pub lambdas: Vec<f64>,
}

fn unit_list() -> Vec<f64> {
    vec![1.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearConfig {
    pub n2: u64,
    pub n1: Vec<u64>,
    pub draws: usize,
    #[serde(default = "default_width")]
    pub width: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringConfig {
    /// Dyadic snapshot times; the run ends at the last one.
    pub times: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AiryConfig {
    pub n: usize,
    pub length: f64,
    pub sigma: f64,
    #[serde(default = "one")]
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsConfig {
    pub kappas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub model: ModelConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub init: InitConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cov: Option<CovConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strichartz: Option<StrichartzConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bilinear: Option<BilinearConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scattering: Option<ScatteringConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub airy1d: Option<AiryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<CoeffsConfig>,
}

impl RunConfig {
    pub fn grid(&self) -> Result<SpectralGrid> {
        self.grid.build()
    }

    pub fn model(&self) -> Result<ModelSpec> {
        ModelSpec::assemble(self.model.kind()?, &self.grid()?, self.model.params())
    }

    pub fn controls(&self) -> Result<Controls> {
        Ok(Controls::new(self.integrator.dt)
            .integrator(self.integrator.scheme)
            .snapshots(self.output.schedule()?)
            .diagnostics_every(self.output.diagnostic_every))
    }

    pub fn initial_state(&self) -> Result<FieldState> {
        self.init.build(&self.grid()?, self.seed)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}

/// Parses and validates: the grid and model are assembled, and the
/// integrator and output settings are checked.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.model()?;
    if !(cfg.integrator.dt > 0.0 && cfg.integrator.dt.is_finite()) {
        return Err(Error::InvalidTimeStep(cfg.integrator.dt));
    }
    if !(cfg.integrator.t_final > 0.0 && cfg.integrator.t_final.is_finite()) {
        return Err(Error::Config(format!("integrator.t_final = {} must be positive", cfg.integrator.t_final)));
    }
    cfg.output.schedule()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[model]\nkind = \"normalized_dysthe\"\n[grid]\nnx = 32\nlx = 20.0\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.integrator.dt, 1e-3);
        assert_eq!(cfg.integrator.scheme, Integrator::Etdrk4);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.output.schedule().unwrap(), SnapshotSchedule::Final);
        let g = cfg.grid().unwrap();
        assert_eq!((g.nx(), g.ny(), g.lx(), g.ly()), (32, 32, 20.0, 20.0));
        assert_eq!(cfg.init, InitConfig::default());
    }

    #[test]
    fn unknown_keys_are_named() {
        let text = MINIMAL.replace("[grid]", "[integrator]\ndtt = 0.1\n[grid]");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("dtt"), "{err}");
        let err = parse_config(&format!("{MINIMAL}colour = 1\n")).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
        let text = format!("{MINIMAL}[init]\ntype = \"gaussian\"\nsigmax = 1.0\n");
        assert!(parse_config(&text).unwrap_err().to_string().contains("sigmax"));
    }

    #[test]
    fn missing_and_mistyped_keys() {
        assert!(parse_config("[model]\nkind = \"normalized_dysthe\"\n").is_err());
        assert!(parse_config(&MINIMAL.replace("nx = 32", "nx = \"32\"")).is_err());
        let gc = MINIMAL.replace("normalized_dysthe", "gravity_capillary");
        assert!(matches!(parse_config(&gc), Err(Error::Config(_))));
    }

    #[test]
    fn singular_kappa_is_surfaced() {
        let text = MINIMAL.replace("kind = \"normalized_dysthe\"", "kind = \"gravity_capillary\"\nkappa = 0.5");
        assert!(matches!(parse_config(&text), Err(Error::SingularKappa)));
        let ok = MINIMAL.replace("kind = \"normalized_dysthe\"", "kind = \"gravity_capillary\"\nkappa = 0.25");
        assert!(parse_config(&ok).is_ok());
    }

    #[test]
    fn line_grid_and_one_dimensional_model() {
        let text = "[model]\nkind = \"dysthe1d\"\nh = 1.5\n[grid]\nnx = 64\nny = 1\nlx = 30.0\n";
        let cfg = parse_config(text).unwrap();
        assert!(cfg.grid().unwrap().is_1d());
        assert!(parse_config(&text.replace("ny = 1\n", "")).is_err());
    }

    #[test]
    fn roundtrip_through_toml() {
        let text = format!(
            "seed = 9\n{MINIMAL}[model.c]\n[init]\ntype = \"plane_wave\"\nj = 2\n[cov]\nalphas = [[1.0, 3.0, 0.0]]\nsample_times = [0.1]\n"
        )
        .replace("[model.c]\n", "");
        let cfg = parse_config(&text).unwrap();
        let again = parse_config(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn snapshot_settings_are_exclusive() {
        let text = format!("{MINIMAL}[output]\nsnapshot_every = 5\nsnapshot_times = [0.5]\n");
        assert!(matches!(parse_config(&text), Err(Error::Config(_))));
    }

    #[test]
    fn random_initial_data_follows_the_seed() {
        let text = format!("{MINIMAL}[init]\ntype = \"random_shell\"\nn = 2\n");
        let a = parse_config(&text).unwrap();
        let b = parse_config(&format!("seed = 1\n{text}")).unwrap();
        let (ua, ua2, ub) = (a.initial_state().unwrap(), a.initial_state().unwrap(), b.initial_state().unwrap());
        assert_eq!(ua.values(), ua2.values());
        assert_ne!(ua.values(), ub.values());
    }
}

//! Run configuration: TOML schema, defaults matching the built-in
//! (HeNe)⁺ setup, and assembly into engine-ready objects.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use icec_core::engine::{ElectronTransferParams, EngineSettings};
use icec_core::morse::hene_surfaces;
use icec_core::{units, IcecError, MorseSurface, Result, SpeciesRegistry};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MassConfig {
    pub m1_amu: f64,
    pub m2_amu: f64,
    /// Direct override in electron masses; wins over the atomic masses.
    pub reduced_mass_me: Option<f64>,
}

impl Default for MassConfig {
    fn default() -> Self {
        Self {
            m1_amu: 4.002602, // He
            m2_amu: 20.1797,  // Ne
            reduced_mass_me: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub r_box_angstrom: f64,
    pub points: usize,
    pub dvr_points: usize,
    pub quad_panels: usize,
    pub quad_order: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_box_angstrom: 10.0,
            points: 3000,
            dvr_points: 3000,
            quad_panels: 256,
            quad_order: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceOverride {
    pub r_e_angstrom: f64,
    pub d_e_cm1: f64,
    pub omega_e_cm1: f64,
    pub e_min_hartree: f64,
    pub asymptote: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ElectronTransferConfig {
    /// Covalent-radius scale for the Gaussian widths.
    pub alpha: f64,
    /// Fit parameters; the defaults are uncalibrated placeholders.
    pub c_bar: f64,
    pub d_hartree: f64,
    pub ell_max: usize,
    pub term_tol: f64,
}

impl Default for ElectronTransferConfig {
    fn default() -> Self {
        Self {
            alpha: 1.6,
            c_bar: 1.0,
            d_hartree: 1.0,
            ell_max: 200,
            term_tol: 1e-8,
        }
    }
}

impl ElectronTransferConfig {
    /// True while C̄ and d sit at the uncalibrated defaults.
    pub fn calibration_required(&self) -> bool {
        self.c_bar == 1.0 && self.d_hartree == 1.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub temperatures_k: Vec<f64>,
    /// `start:stop:step` in eV; per-channel defaults apply when absent.
    pub energy_grid: Option<String>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            temperatures_k: vec![15.0, 77.0, 298.0],
            energy_grid: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub degeneracy_factor: f64,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            format: OutputFormat::Csv,
            degeneracy_factor: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub masses: MassConfig,
    pub grid: GridConfig,
    /// Optional per-label surface overrides (X, A, B).
    pub surfaces: BTreeMap<String, SurfaceOverride>,
    /// Optional species registry file; built-in He/Ne otherwise.
    pub species_registry: Option<PathBuf>,
    pub electron_transfer: ElectronTransferConfig,
    pub scan: ScanConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Load from a file, or defaults when `path` is None and the
    /// ICEC_CONFIG environment variable is unset.
    pub fn load(path: Option<&Path>) -> Result<(Self, String)> {
        let env_path = std::env::var_os("ICEC_CONFIG").map(PathBuf::from);
        let effective = path.map(Path::to_path_buf).or(env_path);
        match effective {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|source| IcecError::Io {
                    path: p.display().to_string(),
                    source,
                })?;
                let cfg: RunConfig = toml::from_str(&text)
                    .map_err(|e| IcecError::Config(format!("{}: {e}", p.display())))?;
                cfg.validate()?;
                Ok((cfg, config_hash(&text)))
            }
            None => {
                let cfg = RunConfig::default();
                Ok((cfg, config_hash("builtin-default")))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.r_box_angstrom <= 0.0 || g.points < 2 || g.quad_panels < 1 || g.quad_order < 1 {
            return Err(IcecError::Config("grid parameters must be positive".into()));
        }
        if self.output.degeneracy_factor <= 0.0 {
            return Err(IcecError::Config("degeneracy factor must be positive".into()));
        }
        for t in &self.scan.temperatures_k {
            if *t < 0.0 {
                return Err(IcecError::Config(format!("negative temperature {t} K")));
            }
        }
        Ok(())
    }

    pub fn reduced_mass_me(&self) -> f64 {
        self.masses
            .reduced_mass_me
            .unwrap_or_else(|| units::reduced_mass_me(self.masses.m1_amu, self.masses.m2_amu))
    }

    /// The three surfaces with overrides applied; errors (e.g. λ ≤ 1/2)
    /// surface before any computation.
    pub fn surfaces(&self) -> Result<Vec<MorseSurface>> {
        let mu = self.reduced_mass_me();
        let mut out = Vec::new();
        for base in hene_surfaces(mu) {
            let s = match self.surfaces.get(&base.label) {
                Some(o) => MorseSurface::new(
                    &base.label,
                    units::angstrom_to_bohr(o.r_e_angstrom),
                    units::cm1_to_hartree(o.d_e_cm1),
                    units::cm1_to_hartree(o.omega_e_cm1),
                    o.e_min_hartree,
                    mu,
                    &o.asymptote,
                )?,
                None => base,
            };
            out.push(s);
        }
        Ok(out)
    }

    pub fn registry(&self) -> Result<SpeciesRegistry> {
        match &self.species_registry {
            Some(p) => SpeciesRegistry::load(p),
            None => Ok(SpeciesRegistry::builtin()),
        }
    }

    pub fn et_params(&self, channel: &icec_core::TransitionChannel) -> Result<ElectronTransferParams> {
        let c = &self.electron_transfer;
        let mut p = ElectronTransferParams::for_channel(channel, c.alpha)?;
        p.c_bar = c.c_bar;
        p.d = c.d_hartree;
        p.ell_max = c.ell_max;
        p.term_tol = c.term_tol;
        Ok(p)
    }

    pub fn engine_settings(&self, eps_max: f64) -> EngineSettings {
        EngineSettings {
            r_box: units::angstrom_to_bohr(self.grid.r_box_angstrom),
            grid_points: self.grid.points,
            quad_panels: self.grid.quad_panels,
            quad_order: self.grid.quad_order,
            eps_max,
            degeneracy_factor: self.output.degeneracy_factor,
        }
    }
}

pub fn config_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let digest = h.finalize();
    let mut s = String::with_capacity(16);
    for b in &digest[..8] {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Parse `start:stop:step` (eV) into a strictly increasing grid.
pub fn parse_energy_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(IcecError::Config(format!(
            "energy grid `{spec}` must be start:stop:step in eV"
        )));
    }
    let mut vals = [0.0f64; 3];
    for (i, p) in parts.iter().enumerate() {
        vals[i] = p
            .trim()
            .parse()
            .map_err(|_| IcecError::Config(format!("energy grid `{spec}`: bad number `{p}`")))?;
    }
    let [start, stop, step] = vals;
    if step <= 0.0 || stop < start {
        return Err(IcecError::Config(format!(
            "energy grid `{spec}` must increase with positive step"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// Per-channel default grid: the plotted range starts at the threshold
/// side for Ne⁺-acceptor channels.
pub fn default_energy_grid(channel: &icec_core::TransitionChannel) -> &'static str {
    if channel.acceptor.name == "Ne" {
        "3:8:0.01"
    } else {
        "0:8:0.01"
    }
}

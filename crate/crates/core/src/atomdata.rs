//! Atomic species registry: ionization potentials, covalent radii,
//! tabulated photoionization cross sections with log-log interpolation,
//! and photorecombination via the Milne detailed-balance relation.

use std::path::Path;

use serde::Deserialize;

use crate::error::{IcecError, Result};
use crate::units;

/// Tabulated photoionization cross section. Stored in atomic units
/// (hartree / bohr²); ingested from eV / Mb CSV.
#[derive(Debug, Clone)]
pub struct PhotoTable {
    /// Photon energies [hartree], strictly increasing.
    energies: Vec<f64>,
    /// Cross sections [bohr²], all ≥ 0.
    sigmas: Vec<f64>,
    pub provenance: String,
}

impl PhotoTable {
    /// Parse the CSV schema: header `photon_energy_eV,sigma_Mb`, one row
    /// per sample, `#` comment lines allowed anywhere. Leading comment
    /// lines are kept as the provenance record.
    pub fn from_csv(text: &str, origin: &str) -> Result<Self> {
        let mut energies = Vec::new();
        let mut sigmas = Vec::new();
        let mut provenance = String::new();
        let mut saw_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if !saw_header {
                    if !provenance.is_empty() {
                        provenance.push(' ');
                    }
                    provenance.push_str(comment.trim());
                }
                continue;
            }
            if !saw_header {
                if line != "photon_energy_eV,sigma_Mb" {
                    return Err(IcecError::Parse {
                        path: origin.to_string(),
                        line: lineno,
                        message: "expected header `photon_energy_eV,sigma_Mb`".into(),
                    });
                }
                saw_header = true;
                continue;
            }
            let mut parts = line.split(',');
            let parse = |field: Option<&str>, what: &str| -> Result<f64> {
                field
                    .ok_or(())
                    .and_then(|s| s.trim().parse::<f64>().map_err(|_| ()))
                    .map_err(|_| IcecError::Parse {
                        path: origin.to_string(),
                        line: lineno,
                        message: format!("malformed {what}"),
                    })
            };
            let e_ev = parse(parts.next(), "photon energy")?;
            let s_mb = parse(parts.next(), "cross section")?;
            if parts.next().is_some() {
                return Err(IcecError::Parse {
                    path: origin.to_string(),
                    line: lineno,
                    message: "expected exactly two columns".into(),
                });
            }
            if s_mb < 0.0 {
                return Err(IcecError::Parse {
                    path: origin.to_string(),
                    line: lineno,
                    message: format!("negative cross section {s_mb}"),
                });
            }
            let e = units::ev_to_hartree(e_ev);
            if let Some(&last) = energies.last() {
                if e <= last {
                    return Err(IcecError::Parse {
                        path: origin.to_string(),
                        line: lineno,
                        message: format!("photon energy {e_ev} eV not strictly increasing"),
                    });
                }
            }
            energies.push(e);
            sigmas.push(units::mb_to_bohr2(s_mb));
        }
        if energies.len() < 2 {
            return Err(IcecError::Parse {
                path: origin.to_string(),
                line: text.lines().count(),
                message: "table needs at least two rows".into(),
            });
        }
        Ok(Self {
            energies,
            sigmas,
            provenance,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| IcecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_csv(&text, &path.display().to_string())
    }

    pub fn min_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn max_energy(&self) -> f64 {
        *self.energies.last().unwrap()
    }

    /// Log-log linear interpolation at `omega` [hartree]; hard error
    /// outside the tabulated range. Segments touching a zero cross
    /// section fall back to linear interpolation.
    pub fn interpolate(&self, omega: f64, species: &str) -> Result<f64> {
        if omega < self.min_energy() || omega > self.max_energy() {
            return Err(IcecError::TableRange {
                species: species.to_string(),
                omega_ev: units::hartree_to_ev(omega),
                min_ev: units::hartree_to_ev(self.min_energy()),
                max_ev: units::hartree_to_ev(self.max_energy()),
            });
        }
        let j = match self
            .energies
            .binary_search_by(|x| x.total_cmp(&omega))
        {
            Ok(i) => return Ok(self.sigmas[i]),
            Err(i) => i, // omega between energies[i-1] and energies[i]
        };
        let (e0, e1) = (self.energies[j - 1], self.energies[j]);
        let (s0, s1) = (self.sigmas[j - 1], self.sigmas[j]);
        let t = (omega.ln() - e0.ln()) / (e1.ln() - e0.ln());
        if s0 > 0.0 && s1 > 0.0 {
            Ok((s0.ln() + t * (s1.ln() - s0.ln())).exp())
        } else {
            Ok(s0 + (omega - e0) / (e1 - e0) * (s1 - s0))
        }
    }
}

/// One capture/donor partner. All quantities in atomic units.
#[derive(Debug, Clone)]
pub struct AtomicSpecies {
    pub name: String,
    /// Ionization potential of the neutral [hartree].
    pub ip: f64,
    /// Statistical weight of the neutral ground level.
    pub g_neutral: u32,
    /// Statistical weight of the ion ground level.
    pub g_ion: u32,
    /// Covalent radius [bohr].
    pub r_cov: f64,
    /// Divisor for per-orbital photoionization (3 for Ne 2p, 1 for He).
    pub orbital_degeneracy: u32,
    pub pi_table: PhotoTable,
}

impl AtomicSpecies {
    fn validate(self) -> Result<Self> {
        if self.ip <= 0.0 || self.r_cov <= 0.0 {
            return Err(IcecError::Config(format!(
                "species {}: IP and covalent radius must be positive",
                self.name
            )));
        }
        if self.g_neutral < 1 || self.g_ion < 1 || self.orbital_degeneracy < 1 {
            return Err(IcecError::Config(format!(
                "species {}: statistical weights and orbital degeneracy must be >= 1",
                self.name
            )));
        }
        if self.pi_table.min_energy() < self.ip - 1e-9 {
            return Err(IcecError::Config(format!(
                "species {}: photoionization table starts below the ionization threshold",
                self.name
            )));
        }
        Ok(self)
    }

    /// Photoionization cross section at photon energy `omega` [hartree];
    /// `per_orbital` divides the total by the orbital degeneracy.
    pub fn pi_cross_section(&self, omega: f64, per_orbital: bool) -> Result<f64> {
        if omega < self.ip {
            return Err(IcecError::BelowThreshold {
                species: self.name.clone(),
                omega_ev: units::hartree_to_ev(omega),
                ip_ev: units::hartree_to_ev(self.ip),
            });
        }
        let total = self.pi_table.interpolate(omega, &self.name)?;
        Ok(if per_orbital {
            total / self.orbital_degeneracy as f64
        } else {
            total
        })
    }

    /// Photorecombination cross section for electron capture at kinetic
    /// energy `epsilon` [hartree], from the Milne detailed-balance
    /// relation: σ_PR(ε) = (g_n/g_ion)·(ω/(c·k))²·σ_PI(ω) with
    /// ω = ε + IP and k = sqrt(2ε).
    pub fn pr_cross_section(&self, epsilon: f64) -> Result<f64> {
        if epsilon <= 0.0 {
            return Err(IcecError::Domain(format!(
                "photorecombination requires positive electron energy, got {epsilon}"
            )));
        }
        let omega = epsilon + self.ip;
        let k = (2.0 * epsilon).sqrt();
        let ratio = self.g_neutral as f64 / self.g_ion as f64;
        let factor = (omega / (units::C_AU * k)).powi(2);
        Ok(ratio * factor * self.pi_cross_section(omega, false)?)
    }

    /// Gaussian orbital width a = alpha · r_cov [bohr].
    pub fn gaussian_width(&self, alpha: f64) -> Result<f64> {
        if alpha <= 0.0 {
            return Err(IcecError::Domain(format!(
                "gaussian width scale must be positive, got {alpha}"
            )));
        }
        Ok(alpha * self.r_cov)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    species: Vec<SpeciesRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpeciesRow {
    name: String,
    #[serde(rename = "ip_eV")]
    ip_ev: f64,
    g_neutral: u32,
    g_ion: u32,
    r_cov_angstrom: f64,
    orbital_degeneracy: u32,
    pi_table_path: String,
}

/// Immutable collection of species loaded from a registry file or the
/// built-in (HeNe)⁺ defaults.
#[derive(Debug, Clone)]
pub struct SpeciesRegistry {
    species: Vec<AtomicSpecies>,
}

impl SpeciesRegistry {
    /// Load a TOML registry; PI table paths resolve relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| IcecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let parsed: RegistryFile = toml::from_str(&text)
            .map_err(|e| IcecError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut species = Vec::new();
        for row in parsed.species {
            let table = PhotoTable::load(&base.join(&row.pi_table_path))?;
            species.push(
                AtomicSpecies {
                    name: row.name,
                    ip: units::ev_to_hartree(row.ip_ev),
                    g_neutral: row.g_neutral,
                    g_ion: row.g_ion,
                    r_cov: units::angstrom_to_bohr(row.r_cov_angstrom),
                    orbital_degeneracy: row.orbital_degeneracy,
                    pi_table: table,
                }
                .validate()?,
            );
        }
        Ok(Self { species })
    }

    /// Built-in He/Ne registry with the shipped photoionization tables.
    pub fn builtin() -> Self {
        let he_csv = include_str!("../../../data/he_pi.csv");
        let ne_csv = include_str!("../../../data/ne_pi.csv");
        let he = AtomicSpecies {
            name: "He".into(),
            ip: units::ev_to_hartree(24.59),
            g_neutral: 1,
            g_ion: 2,
            r_cov: units::angstrom_to_bohr(0.28),
            orbital_degeneracy: 1,
            pi_table: PhotoTable::from_csv(he_csv, "builtin:he_pi.csv")
                .expect("builtin He table is valid"),
        };
        let ne = AtomicSpecies {
            name: "Ne".into(),
            ip: units::ev_to_hartree(21.56),
            g_neutral: 1,
            // Ne⁺ 2p⁻¹ ²P with the total-PI convention; keeps the Milne
            // roundtrip exact against the shipped total cross section.
            g_ion: 6,
            r_cov: units::angstrom_to_bohr(0.58),
            orbital_degeneracy: 3,
            pi_table: PhotoTable::from_csv(ne_csv, "builtin:ne_pi.csv")
                .expect("builtin Ne table is valid"),
        };
        Self {
            species: vec![
                he.validate().expect("builtin He is valid"),
                ne.validate().expect("builtin Ne is valid"),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Result<&AtomicSpecies> {
        self.species
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| IcecError::Config(format!("unknown species {name}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &AtomicSpecies> {
        self.species.iter()
    }
}

//! `icec` — vibrationally resolved ICEC cross sections and spectra for
//! the (HeNe)⁺ model system.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use icec_core::channels::{find_channel, transition_catalog};
use icec_core::dvr::dvr_count_below;
use icec_core::engine::ChannelEngine;
use icec_core::validate::{run_checks, ValidateOptions};
use icec_core::{units, Result};

use config::{default_energy_grid, parse_energy_grid, OutputFormat, RunConfig};
use output::{write_table, Table};

#[derive(Parser)]
#[command(
    name = "icec",
    version,
    about = "Vibrationally resolved interatomic Coulombic electron capture for (HeNe)+"
)]
struct Cli {
    /// TOML run configuration; falls back to the ICEC_CONFIG environment
    /// variable, then to built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the vibrational levels of one surface.
    States {
        /// Surface label (X, A or B).
        surface: String,
        /// Also count discretized-continuum states up to this energy
        /// above the dissociation asymptote [eV].
        #[arg(long, default_value_t = 8.0)]
        emax_ev: f64,
    },
    /// Scan the cross section over incoming electron energy.
    Xsec {
        /// Channel name (X-B, B-X, A-B, B-A).
        #[arg(long)]
        channel: String,
        /// Initial vibrational level on the initial surface.
        #[arg(long, default_value_t = 0)]
        nu_i: usize,
        /// Energy grid as start:stop:step in eV.
        #[arg(long)]
        energies: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Boltzmann-averaged cross-section scan at one or more temperatures.
    Thermal {
        #[arg(long)]
        channel: String,
        /// Comma-separated list in kelvin.
        #[arg(long, value_delimiter = ',')]
        temperatures: Option<Vec<f64>>,
        #[arg(long)]
        energies: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Outgoing-electron spectrum at a fixed incoming energy.
    Spectrum {
        #[arg(long)]
        channel: String,
        /// Incoming electron energy [eV].
        #[arg(long)]
        energy: f64,
        #[arg(long, default_value_t = 0)]
        nu_i: usize,
        /// Output prefix; writes <prefix>_sticks and <prefix>_continuum.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Run the internal oracle suite; nonzero exit on any failure.
    Validate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let (cfg, hash) = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::States { surface, emax_ev } => cmd_states(&cfg, &hash, &surface, emax_ev)?,
        Command::Xsec {
            channel,
            nu_i,
            energies,
            output,
            format,
        } => cmd_xsec(&cfg, &hash, &channel, nu_i, energies, output, format)?,
        Command::Thermal {
            channel,
            temperatures,
            energies,
            output,
            format,
        } => cmd_thermal(&cfg, &hash, &channel, temperatures, energies, output, format)?,
        Command::Spectrum {
            channel,
            energy,
            nu_i,
            output,
            format,
        } => cmd_spectrum(&cfg, &hash, &channel, energy, nu_i, output, format)?,
        Command::Validate => return cmd_validate(&cfg),
    }
    Ok(ExitCode::SUCCESS)
}

fn base_metadata(table: &mut Table, cfg: &RunConfig, hash: &str) {
    table.meta("code-version", env!("CARGO_PKG_VERSION"));
    table.meta("config-hash", hash);
    table.meta(
        "calibration-required",
        cfg.electron_transfer.calibration_required(),
    );
    table.meta("r-box-angstrom", cfg.grid.r_box_angstrom);
    table.meta("grid-points", cfg.grid.points);
    table.meta(
        "quadrature",
        format!("{} panels x order {}", cfg.grid.quad_panels, cfg.grid.quad_order),
    );
    table.meta(
        "electron-transfer",
        format!(
            "alpha={} c_bar={} d={} ell_max={}",
            cfg.electron_transfer.alpha,
            cfg.electron_transfer.c_bar,
            cfg.electron_transfer.d_hartree,
            cfg.electron_transfer.ell_max
        ),
    );
}

fn build_engine(cfg: &RunConfig, channel_name: &str, eps_max_ev: f64) -> Result<ChannelEngine> {
    let surfaces = cfg.surfaces()?;
    let registry = cfg.registry()?;
    let catalog = transition_catalog(&surfaces, &registry)?;
    let channel = find_channel(&catalog, channel_name)?.clone();
    let params = cfg.et_params(&channel)?;
    let settings = cfg.engine_settings(units::ev_to_hartree(eps_max_ev));
    ChannelEngine::new(channel, params, settings)
}

fn resolve_grid(cfg: &RunConfig, flag: Option<String>, channel_name: &str) -> Result<Vec<f64>> {
    let spec = match flag.or_else(|| cfg.scan.energy_grid.clone()) {
        Some(s) => s,
        None => {
            let surfaces = cfg.surfaces()?;
            let registry = cfg.registry()?;
            let catalog = transition_catalog(&surfaces, &registry)?;
            default_energy_grid(find_channel(&catalog, channel_name)?).to_string()
        }
    };
    parse_energy_grid(&spec)
}

fn cmd_states(cfg: &RunConfig, hash: &str, surface_label: &str, emax_ev: f64) -> Result<()> {
    let surfaces = cfg.surfaces()?;
    let s = surfaces
        .iter()
        .find(|s| s.label.eq_ignore_ascii_case(surface_label))
        .ok_or_else(|| {
            icec_core::IcecError::Config(format!("unknown surface {surface_label}; use X, A or B"))
        })?;
    let r_box = units::angstrom_to_bohr(cfg.grid.r_box_angstrom);
    let count = s.bound_state_count();
    let total_below = dvr_count_below(
        s,
        r_box,
        cfg.grid.dvr_points,
        s.d_e + units::ev_to_hartree(emax_ev),
    )?;

    let mut table = Table::new(vec![
        "n",
        "energy_above_min_eV",
        "energy_rel_asymptote_eV",
        "box_unreliable",
    ]);
    base_metadata(&mut table, cfg, hash);
    table.meta("surface", &s.label);
    table.meta("bound-count", count);
    table.meta(
        "box-states-below-emax",
        total_below.saturating_sub(count),
    );
    table.meta("emax-eV", emax_ev);
    for n in 0..count {
        let e = s.bound_energy(n)?;
        table.rows.push(vec![
            n as f64,
            units::hartree_to_ev(e),
            units::hartree_to_ev(e - s.d_e),
            if n + 1 == count { 1.0 } else { 0.0 },
        ]);
    }
    write_table(&table, cfg.output.format, None)
}

fn cmd_xsec(
    cfg: &RunConfig,
    hash: &str,
    channel: &str,
    nu_i: usize,
    energies: Option<String>,
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
) -> Result<()> {
    let grid = resolve_grid(cfg, energies, channel)?;
    let engine = build_engine(cfg, channel, *grid.last().unwrap())?;
    let mut table = Table::new(vec![
        "epsilon_eV",
        "sigma_bb_Mb",
        "sigma_bd_Mb",
        "sigma_total_Mb",
        "sigma_PR_Mb",
    ]);
    base_metadata(&mut table, cfg, hash);
    table.meta("channel", &engine.channel.name);
    table.meta("nu-i", nu_i);
    for &e_ev in &grid {
        table.rows.push(xsec_row(&engine, e_ev, nu_i)?);
    }
    write_table(&table, format.unwrap_or(cfg.output.format), output.as_deref())
}

fn xsec_row(engine: &ChannelEngine, e_ev: f64, nu_i: usize) -> Result<Vec<f64>> {
    if e_ev <= 0.0 {
        return Ok(vec![e_ev, 0.0, 0.0, 0.0, 0.0]);
    }
    let eps = units::ev_to_hartree(e_ev);
    let (bb, bd) = engine.total_cross_section(eps, nu_i)?;
    let pr = engine.pr_reference(eps)?;
    Ok(vec![
        e_ev,
        units::bohr2_to_mb(bb),
        units::bohr2_to_mb(bd),
        units::bohr2_to_mb(bb + bd),
        units::bohr2_to_mb(pr),
    ])
}

#[allow(clippy::too_many_arguments)]
fn cmd_thermal(
    cfg: &RunConfig,
    hash: &str,
    channel: &str,
    temperatures: Option<Vec<f64>>,
    energies: Option<String>,
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
) -> Result<()> {
    let temps = temperatures.unwrap_or_else(|| cfg.scan.temperatures_k.clone());
    if temps.is_empty() {
        return Err(icec_core::IcecError::Config(
            "at least one temperature is required".into(),
        ));
    }
    let grid = resolve_grid(cfg, energies, channel)?;
    let engine = build_engine(cfg, channel, *grid.last().unwrap())?;
    let mut columns = vec!["epsilon_eV".to_string()];
    for t in &temps {
        columns.push(format!("sigma_{}K_Mb", fmt_temp(*t)));
    }
    let mut table = Table::new(columns);
    base_metadata(&mut table, cfg, hash);
    table.meta("channel", &engine.channel.name);
    table.meta(
        "temperatures-K",
        temps
            .iter()
            .map(|t| fmt_temp(*t))
            .collect::<Vec<_>>()
            .join(","),
    );
    for &e_ev in &grid {
        let mut row = vec![e_ev];
        if e_ev <= 0.0 {
            row.resize(1 + temps.len(), 0.0);
        } else {
            let eps = units::ev_to_hartree(e_ev);
            for &t in &temps {
                row.push(units::bohr2_to_mb(engine.thermal_cross_section(eps, t)?));
            }
        }
        table.rows.push(row);
    }
    write_table(&table, format.unwrap_or(cfg.output.format), output.as_deref())
}

fn fmt_temp(t: f64) -> String {
    if t.fract() == 0.0 {
        format!("{t:.0}")
    } else {
        format!("{t}")
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_spectrum(
    cfg: &RunConfig,
    hash: &str,
    channel: &str,
    energy_ev: f64,
    nu_i: usize,
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
) -> Result<()> {
    if energy_ev <= 0.0 {
        return Err(icec_core::IcecError::Domain(format!(
            "incoming energy must be positive, got {energy_ev} eV"
        )));
    }
    let engine = build_engine(cfg, channel, energy_ev)?;
    let spec = engine.spectrum(units::ev_to_hartree(energy_ev), nu_i)?;
    let fmt = format.unwrap_or(cfg.output.format);

    let mut sticks = Table::new(vec!["epsilon_prime_eV", "sigma_Mb"]);
    base_metadata(&mut sticks, cfg, hash);
    sticks.meta("channel", &spec.channel);
    sticks.meta("epsilon-eV", energy_ev);
    sticks.meta("nu-i", nu_i);
    sticks.meta("closed", spec.closed);
    sticks.meta("sigma-PR-Mb", units::bohr2_to_mb(spec.pr_reference));
    sticks.meta(
        "display-threshold-Mb",
        units::bohr2_to_mb(spec.display_threshold),
    );
    sticks.meta("sigma-bb-Mb", units::bohr2_to_mb(spec.sigma_total_bb));
    sticks.meta("sigma-bd-Mb", units::bohr2_to_mb(spec.sigma_total_bd));
    let mut continuum = Table::new(vec!["epsilon_prime_eV", "dsigma_dE_Mb_per_eV"]);
    continuum.metadata = sticks.metadata.clone();

    for (ep, sigma) in &spec.sticks {
        sticks
            .rows
            .push(vec![units::hartree_to_ev(*ep), units::bohr2_to_mb(*sigma)]);
    }
    for (ep, dens) in &spec.continuum {
        continuum.rows.push(vec![
            units::hartree_to_ev(*ep),
            units::bohr2_to_mb(*dens) / units::HARTREE_EV,
        ]);
    }

    let ext = match fmt {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    match output {
        Some(prefix) => {
            let p = prefix.display();
            write_table(&sticks, fmt, Some(Path::new(&format!("{p}_sticks.{ext}"))))?;
            write_table(&continuum, fmt, Some(Path::new(&format!("{p}_continuum.{ext}"))))
        }
        None => {
            write_table(&sticks, fmt, None)?;
            write_table(&continuum, fmt, None)
        }
    }
}

fn cmd_validate(cfg: &RunConfig) -> Result<ExitCode> {
    // Surface construction itself is part of validation: a config with
    // an invalid well (e.g. too shallow to bind) must fail up front.
    let surfaces = cfg.surfaces()?;
    let registry = cfg.registry()?;
    let opts = ValidateOptions {
        r_box: units::angstrom_to_bohr(cfg.grid.r_box_angstrom),
        grid_points: cfg.grid.points,
        dvr_points: cfg.grid.dvr_points,
    };
    let results = run_checks(&surfaces, &registry, &opts)?;
    let mut failures = 0usize;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {}", r.name, r.detail);
        if !r.passed {
            failures += 1;
        }
    }
    println!("{} checks, {} failed", results.len(), failures);
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

//! Shared setup for the pipeline benchmarks.

use icec_core::channels::{find_channel, transition_catalog};
use icec_core::engine::{ChannelEngine, ElectronTransferParams, EngineSettings};
use icec_core::morse::hene_surfaces;
use icec_core::{units, SpeciesRegistry};

/// Engine for one channel at the default physics parameters; grid sizes
/// are benchmark arguments.
pub fn build_engine(channel: &str, grid_points: usize, eps_max_ev: f64) -> ChannelEngine {
    let mu = units::reduced_mass_me(4.002602, 20.1797);
    let surfaces = hene_surfaces(mu);
    let registry = SpeciesRegistry::builtin();
    let catalog = transition_catalog(&surfaces, &registry).unwrap();
    let channel = find_channel(&catalog, channel).unwrap().clone();
    let params = ElectronTransferParams::for_channel(&channel, 1.6).unwrap();
    let settings = EngineSettings::new(
        units::angstrom_to_bohr(10.0),
        grid_points,
        units::ev_to_hartree(eps_max_ev),
    );
    ChannelEngine::new(channel, params, settings).unwrap()
}

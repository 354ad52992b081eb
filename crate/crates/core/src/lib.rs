//! Vibrationally resolved interatomic Coulombic electron capture (ICEC)
//! cross sections and outgoing-electron spectra for diatomic
//! acceptor-donor systems, with (HeNe)⁺ as the built-in reference.
//!
//! The model combines a long-range energy-transfer channel (built from
//! photorecombination/photoionization cross sections) and a short-range
//! electron-transfer channel (Gaussian orbital overlap), with nuclear
//! dynamics on Morse potential curves: analytic bound states plus a
//! box-discretized dissociative continuum.

pub mod atomdata;
pub mod channels;
pub mod dvr;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod morse;
pub mod quad;
pub mod units;
pub mod validate;

pub use atomdata::{AtomicSpecies, PhotoTable, SpeciesRegistry};
pub use channels::{Mechanism, TransitionChannel};
pub use engine::{ChannelEngine, ElectronTransferParams, SpectrumResult, SurfaceBasis};
pub use error::{IcecError, Result};
pub use morse::{BoxSpec, MorseSurface, RadialGrid, StateKind, VibState};

//! Electronic-state bookkeeping: which surface pairs form ICEC channels,
//! who captures and who is ionized, and energy conservation for the
//! outgoing electron.

use crate::atomdata::{AtomicSpecies, SpeciesRegistry};
use crate::error::{IcecError, Result};
use crate::morse::MorseSurface;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mechanism {
    /// Long-range dipole-dipole channel (photorecombination ×
    /// photoionization).
    EnergyTransfer,
    /// Short-range orbital-overlap channel (Gaussian model).
    ElectronTransfer,
}

/// One ordered surface pair with role assignment. The acceptor is the
/// cation capturing the electron (charged on the initial asymptote); the
/// donor is the atom being ionized (charged on the final asymptote).
/// Species records hold neutral-atom data: the electron attachment
/// energy of the acceptor cation equals the IP of the neutral it forms.
#[derive(Debug, Clone)]
pub struct TransitionChannel {
    pub name: String,
    pub initial_surface: MorseSurface,
    pub final_surface: MorseSurface,
    pub acceptor: AtomicSpecies,
    pub donor: AtomicSpecies,
    pub mechanisms: Vec<Mechanism>,
    /// IP_{A⁻} − IP_D [hartree].
    pub delta_ip: f64,
}

impl TransitionChannel {
    pub fn has(&self, m: Mechanism) -> bool {
        self.mechanisms.contains(&m)
    }

    /// Kinetic energy of the outgoing electron,
    /// ε′ = ε + IP_{A⁻} − IP_D − (E_f − E_i), vibrational energies
    /// relative to each surface's own dissociation asymptote. ε′ ≤ 0
    /// signals a closed channel (a value, not an error).
    pub fn outgoing_energy(&self, epsilon: f64, e_i_rel_asym: f64, e_f_rel_asym: f64) -> f64 {
        epsilon + self.delta_ip - (e_f_rel_asym - e_i_rel_asym)
    }

    /// Largest dissociation energy E_f open at this ε (where ε′ = 0);
    /// negative means no dissociative final state is reachable.
    pub fn max_dissociation_energy(&self, epsilon: f64, e_i_rel_asym: f64) -> f64 {
        epsilon + self.delta_ip + e_i_rel_asym
    }
}

fn find_surface<'a>(surfaces: &'a [MorseSurface], label: &str) -> Result<&'a MorseSurface> {
    surfaces
        .iter()
        .find(|s| s.label == label)
        .ok_or_else(|| IcecError::Config(format!("surface {label} not registered")))
}

/// The four (HeNe)⁺ channels: X↔B carry both mechanisms; A↔B carry
/// energy transfer only (the A-state Ne 2p_x/y orbitals have negligible
/// overlap with He 1s).
pub fn transition_catalog(
    surfaces: &[MorseSurface],
    registry: &SpeciesRegistry,
) -> Result<Vec<TransitionChannel>> {
    let pairs = [
        ("X", "B", true),
        ("B", "X", true),
        ("A", "B", false),
        ("B", "A", false),
    ];
    let mut out = Vec::with_capacity(pairs.len());
    for (from, to, electron_transfer) in pairs {
        let initial = find_surface(surfaces, from)?.clone();
        let final_surface = find_surface(surfaces, to)?.clone();
        let acceptor = registry.get(&initial.asymptote_tag)?.clone();
        let donor = registry.get(&final_surface.asymptote_tag)?.clone();
        let mut mechanisms = vec![Mechanism::EnergyTransfer];
        if electron_transfer {
            mechanisms.push(Mechanism::ElectronTransfer);
        }
        out.push(TransitionChannel {
            name: format!("{from}-{to}"),
            delta_ip: acceptor.ip - donor.ip,
            initial_surface: initial,
            final_surface,
            acceptor,
            donor,
            mechanisms,
        });
    }
    Ok(out)
}

/// Case-insensitive channel lookup by CLI name (`X-B`, `B-X`, ...).
pub fn find_channel<'a>(
    catalog: &'a [TransitionChannel],
    name: &str,
) -> Result<&'a TransitionChannel> {
    catalog
        .iter()
        .find(|c| c.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            let known: Vec<&str> = catalog.iter().map(|c| c.name.as_str()).collect();
            IcecError::Config(format!(
                "unknown channel {name}; available: {}",
                known.join(", ")
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::hene_surfaces;
    use crate::units::{ev_to_hartree, hartree_to_ev, reduced_mass_me};

    fn catalog() -> Vec<TransitionChannel> {
        let mu = reduced_mass_me(4.002602, 20.1797);
        transition_catalog(&hene_surfaces(mu), &SpeciesRegistry::builtin()).unwrap()
    }

    #[test]
    fn exactly_four_channels_with_mechanism_rules() {
        let cat = catalog();
        assert_eq!(cat.len(), 4);
        let xb = find_channel(&cat, "x-b").unwrap();
        assert!(xb.has(Mechanism::ElectronTransfer));
        let ab = find_channel(&cat, "A-B").unwrap();
        assert_eq!(ab.mechanisms, vec![Mechanism::EnergyTransfer]);
        let ba = find_channel(&cat, "B-A").unwrap();
        assert!(!ba.has(Mechanism::ElectronTransfer));
    }

    #[test]
    fn role_assignment_follows_asymptotes() {
        let cat = catalog();
        let xb = find_channel(&cat, "X-B").unwrap();
        // charge starts on Ne in X and ends on He in B
        assert_eq!(xb.acceptor.name, "Ne");
        assert_eq!(xb.donor.name, "He");
        assert!((hartree_to_ev(xb.delta_ip) + 3.03).abs() < 1e-10);
        let bx = find_channel(&cat, "B-X").unwrap();
        assert_eq!(bx.acceptor.name, "He");
        assert_eq!(bx.donor.name, "Ne");
    }

    #[test]
    fn reverse_channel_swaps_roles_and_negates_delta() {
        let cat = catalog();
        let xb = find_channel(&cat, "X-B").unwrap();
        let bx = find_channel(&cat, "B-X").unwrap();
        assert_eq!(xb.acceptor.name, bx.donor.name);
        assert_eq!(xb.donor.name, bx.acceptor.name);
        assert!((xb.delta_ip + bx.delta_ip).abs() < 1e-15);
    }

    #[test]
    fn outgoing_energy_examples() {
        let cat = catalog();
        let bx = find_channel(&cat, "B-X").unwrap();
        let ep = bx.outgoing_energy(ev_to_hartree(1.0), 0.0, 0.0);
        assert!((hartree_to_ev(ep) - 4.03).abs() < 1e-10);
        // unit slopes
        let xb = find_channel(&cat, "X-B").unwrap();
        let base = xb.outgoing_energy(0.1, -0.02, 0.005);
        assert!((xb.outgoing_energy(0.1 + 0.03, -0.02, 0.005) - base - 0.03).abs() < 1e-15);
        assert!((xb.outgoing_energy(0.1, -0.02, 0.005 + 0.01) - base + 0.01).abs() < 1e-15);
    }

    #[test]
    fn x_to_b_ground_state_threshold() {
        let cat = catalog();
        let xb = find_channel(&cat, "X-B").unwrap();
        let e_i = xb.initial_surface.bound_energy(0).unwrap() - xb.initial_surface.d_e;
        // epsilon at which the lowest final state opens
        let threshold = -xb.delta_ip - e_i;
        let t_ev = hartree_to_ev(threshold);
        assert!((t_ev - 3.62).abs() < 0.01, "threshold = {t_ev} eV");
        assert!(
            xb.outgoing_energy(threshold, e_i, 0.0).abs() < 1e-15,
            "epsilon' vanishes at threshold"
        );
    }

    #[test]
    fn max_dissociation_energy_consistency() {
        let cat = catalog();
        let bx = find_channel(&cat, "B-X").unwrap();
        let (eps, e_i) = (ev_to_hartree(1.0), ev_to_hartree(-0.02));
        let e_max = bx.max_dissociation_energy(eps, e_i);
        assert!((hartree_to_ev(e_max) - 4.01).abs() < 1e-10);
        assert!(bx.outgoing_energy(eps, e_i, e_max).abs() < 1e-15);
        // X→B at 1 eV from the ground state is closed
        let xb = find_channel(&cat, "X-B").unwrap();
        let e_i0 = xb.initial_surface.bound_energy(0).unwrap() - xb.initial_surface.d_e;
        assert!(xb.max_dissociation_energy(ev_to_hartree(1.0), e_i0) < 0.0);
    }
}

//! The cross-section core: energy-transfer and electron-transfer vibronic
//! cross sections, totals over final states, thermal averages, spectra
//! and the reflection-principle approximation.
//!
//! A `ChannelEngine` precomputes, per (initial, final) vibrational pair,
//! the R⁻³ matrix element and the electron-transfer quadrature node
//! values, so that energy scans only pay for the ε-dependent factors.

use std::sync::Arc;

use crate::channels::{Mechanism, TransitionChannel};
use crate::error::{IcecError, Result};
use crate::morse::{
    bound_states, dissociative_states, weighted_matrix_element, BoxSpec, MorseSurface, RadialGrid,
    VibState,
};
use crate::quad::CompositeRule;
use crate::units;

/// Parameters of the Gaussian-orbital electron-transfer model.
/// C̄ and d are fit parameters not derivable here; their defaults are a
/// placeholder calibration and outputs carry a CALIBRATION-REQUIRED flag.
#[derive(Debug, Clone)]
pub struct ElectronTransferParams {
    /// Acceptor orbital Gaussian width [bohr].
    pub a_a: f64,
    /// Donor orbital Gaussian width [bohr].
    pub a_d: f64,
    /// Amplitude fit parameter [dimensionless].
    pub c_bar: f64,
    /// Energy-decay fit parameter [hartree].
    pub d: f64,
    /// Partial-wave cap.
    pub ell_max: usize,
    /// Relative truncation tolerance of the partial-wave sum.
    pub term_tol: f64,
}

impl ElectronTransferParams {
    pub fn validate(&self) -> Result<()> {
        if self.a_a <= 0.0 || self.a_d <= 0.0 || self.d <= 0.0 {
            return Err(IcecError::Config(
                "electron-transfer widths and energy decay must be positive".into(),
            ));
        }
        if self.c_bar < 0.0 {
            return Err(IcecError::Config("C̄ must be non-negative".into()));
        }
        Ok(())
    }

    /// Widths from the channel's species with the covalent-radius scale
    /// alpha (default 1.6); C̄ = 1 and d = 1 hartree remain placeholders.
    pub fn for_channel(channel: &TransitionChannel, alpha: f64) -> Result<Self> {
        Ok(Self {
            a_a: channel.acceptor.gaussian_width(alpha)?,
            a_d: channel.donor.gaussian_width(alpha)?,
            c_bar: 1.0,
            d: 1.0,
            ell_max: 200,
            term_tol: 1e-8,
        })
    }
}

/// Gaussian orbital overlap S_AD(R) of eq-style model:
/// (a_A a_D/(a_A²+a_D²))^{3/2} exp(−R²/(2(a_A²+a_D²))).
pub fn s_ad(r: f64, a_a: f64, a_d: f64) -> f64 {
    let s2 = a_a * a_a + a_d * a_d;
    (a_a * a_d / s2).powf(1.5) * (-r * r / (2.0 * s2)).exp()
}

/// |J_ℓ|, the positive root of the modeled J_ℓ²:
/// sqrt(C̄ e^{−|ε′−ε|/d} e^{−ℓ(ℓ+1)/K²}) with
/// K² = (a_A+R)²ε + (a_D+R)²ε′.
pub fn j_ell_abs(
    ell: usize,
    r: f64,
    epsilon: f64,
    epsilon_prime: f64,
    params: &ElectronTransferParams,
) -> f64 {
    let k2 = (params.a_a + r).powi(2) * epsilon + (params.a_d + r).powi(2) * epsilon_prime;
    let l = ell as f64;
    (params.c_bar * (-(epsilon_prime - epsilon).abs() / params.d).exp()
        * (-l * (l + 1.0) / k2).exp())
    .sqrt()
}

/// Energy-transfer kernel without the vibrational matrix element wiring:
/// (3c⁴/4π) σ_PR σ_PI / (ω³ ω′) · m².
pub fn energy_transfer_kernel(s_pr: f64, s_pi: f64, omega: f64, omega_p: f64, m: f64) -> f64 {
    let c4 = units::C_AU.powi(4);
    3.0 * c4 / (4.0 * std::f64::consts::PI) * s_pr * s_pi / (omega.powi(3) * omega_p) * m * m
}

/// Outcome of a single vibronic cross section; `closed` marks ε′ ≤ 0.
#[derive(Debug, Clone, Copy)]
pub struct SigmaOutcome {
    pub sigma: f64,
    pub closed: bool,
}

impl SigmaOutcome {
    fn closed() -> Self {
        Self {
            sigma: 0.0,
            closed: true,
        }
    }
    fn open(sigma: f64) -> Self {
        Self {
            sigma,
            closed: false,
        }
    }
}

fn energy_transfer_with_element(
    channel: &TransitionChannel,
    epsilon: f64,
    epsilon_prime: f64,
    m: f64,
) -> Result<f64> {
    let omega = epsilon + channel.acceptor.ip;
    let omega_p = epsilon_prime + channel.donor.ip;
    let s_pr = channel.acceptor.pr_cross_section(epsilon)?;
    // the ionized donor orbital is one specific orbital of the shell
    let s_pi = channel.donor.pi_cross_section(omega_p, true)?;
    Ok(energy_transfer_kernel(s_pr, s_pi, omega, omega_p, m))
}

/// Energy-transfer cross section for one vibronic transition (reference
/// path with on-the-fly quadrature; scans use the cached engine path).
pub fn sigma_energy_transfer(
    channel: &TransitionChannel,
    epsilon: f64,
    nu_i: &VibState,
    nu_f: &VibState,
) -> Result<SigmaOutcome> {
    let eps_p = channel.outgoing_energy(epsilon, nu_i.energy_rel_asymptote, nu_f.energy_rel_asymptote);
    if eps_p <= 0.0 {
        return Ok(SigmaOutcome::closed());
    }
    let m = weighted_matrix_element(nu_f, nu_i, |r| r.powi(-3))?;
    Ok(SigmaOutcome::open(energy_transfer_with_element(
        channel, epsilon, eps_p, m,
    )?))
}

/// Electron-transfer cross section for one vibronic transition,
/// 32π (ε³ε′)^{−1/2} Σ_ℓ (2ℓ+1)|⟨ν_f|S_AD J_ℓ R⁻¹|ν_i⟩|², with each
/// ℓ-term integrated adaptively (reference path).
pub fn sigma_electron_transfer(
    channel: &TransitionChannel,
    epsilon: f64,
    nu_i: &VibState,
    nu_f: &VibState,
    params: &ElectronTransferParams,
) -> Result<SigmaOutcome> {
    if !channel.has(Mechanism::ElectronTransfer) {
        return Ok(SigmaOutcome::open(0.0));
    }
    let eps_p = channel.outgoing_energy(epsilon, nu_i.energy_rel_asymptote, nu_f.energy_rel_asymptote);
    if eps_p <= 0.0 || epsilon <= 0.0 {
        return Ok(SigmaOutcome::closed());
    }
    let mut sum = 0.0;
    for ell in 0..=params.ell_max {
        let m = weighted_matrix_element(nu_f, nu_i, |r| {
            s_ad(r, params.a_a, params.a_d) * j_ell_abs(ell, r, epsilon, eps_p, params) / r
        })?;
        let term = (2.0 * ell as f64 + 1.0) * m * m;
        sum += term;
        if term < params.term_tol * sum {
            break;
        }
    }
    let pref = 32.0 * std::f64::consts::PI / (epsilon.powi(3) * eps_p).sqrt();
    Ok(SigmaOutcome::open(pref * sum))
}

/// All vibrational states of one surface on a shared grid: analytic bound
/// levels plus box-discretized dissociative states up to an energy cap.
#[derive(Debug, Clone)]
pub struct SurfaceBasis {
    pub surface: MorseSurface,
    pub grid: Arc<RadialGrid>,
    pub bound: Vec<VibState>,
    pub dissociative: Vec<VibState>,
}

impl SurfaceBasis {
    pub fn build(
        surface: &MorseSurface,
        r_box: f64,
        grid_points: usize,
        e_diss_max: Option<f64>,
    ) -> Result<Self> {
        let grid = RadialGrid::uniform(r_box, grid_points);
        let bound = bound_states(surface, &grid)?;
        let dissociative = match e_diss_max {
            Some(e_max) if e_max > 0.0 => {
                dissociative_states(surface, r_box, BoxSpec::MaxEnergy(e_max), &grid)?
            }
            _ => Vec::new(),
        };
        Ok(Self {
            surface: surface.clone(),
            grid,
            bound,
            dissociative,
        })
    }
}

/// Numerical knobs of an engine instance.
#[derive(Debug, Clone)]
pub struct EngineSettings {
    /// Box radius [bohr].
    pub r_box: f64,
    /// Shared radial grid points.
    pub grid_points: usize,
    /// Composite quadrature panels / order for electron transfer.
    pub quad_panels: usize,
    pub quad_order: usize,
    /// Largest incoming electron energy the engine must serve [hartree].
    pub eps_max: f64,
    /// Overall electronic degeneracy factor (Π-state weighting hook).
    pub degeneracy_factor: f64,
}

impl EngineSettings {
    pub fn new(r_box: f64, grid_points: usize, eps_max: f64) -> Self {
        Self {
            r_box,
            grid_points,
            quad_panels: 256,
            quad_order: 8,
            eps_max,
            degeneracy_factor: 1.0,
        }
    }
}

/// Cached data for one (initial, final) pair.
struct PairData {
    /// ⟨ν_f|R⁻³|ν_i⟩.
    r3: f64,
    /// w_q ψ_f(R_q) S_AD(R_q) ψ_i(R_q)/R_q on the fixed rule, or empty if
    /// electron transfer is disabled for the channel.
    et_nodes: Vec<f64>,
}

struct InitialBlock {
    /// Bound index of this initial state.
    nu_i: usize,
    state_idx: usize,
    /// Pair caches, final bound states first, then dissociative.
    pairs: Vec<PairData>,
}

/// Precomputed scan engine for one transition channel.
pub struct ChannelEngine {
    pub channel: TransitionChannel,
    pub params: ElectronTransferParams,
    pub settings: EngineSettings,
    pub initial_basis: SurfaceBasis,
    pub final_basis: SurfaceBasis,
    /// (a_A + R_q)², (a_D + R_q)² at the quadrature nodes.
    aa2: Vec<f64>,
    ad2: Vec<f64>,
    blocks: Vec<InitialBlock>,
}

impl ChannelEngine {
    pub fn new(
        channel: TransitionChannel,
        params: ElectronTransferParams,
        settings: EngineSettings,
    ) -> Result<Self> {
        params.validate()?;
        if settings.eps_max <= 0.0 || settings.r_box <= 0.0 {
            return Err(IcecError::Config(
                "engine needs positive eps_max and box radius".into(),
            ));
        }
        let initial_basis =
            SurfaceBasis::build(&channel.initial_surface, settings.r_box, settings.grid_points, None)?;
        // largest dissociation energy any scan point can reach
        let e_i_top = initial_basis
            .bound
            .iter()
            .filter(|s| !s.box_unreliable)
            .map(|s| s.energy_rel_asymptote)
            .fold(f64::NEG_INFINITY, f64::max);
        let e_diss_max = settings.eps_max + channel.delta_ip + e_i_top;
        let final_basis = SurfaceBasis::build(
            &channel.final_surface,
            settings.r_box,
            settings.grid_points,
            Some(e_diss_max),
        )?;

        let rule = CompositeRule::new(0.0, settings.r_box, settings.quad_panels, settings.quad_order);
        let aa2: Vec<f64> = rule.nodes.iter().map(|&r| (params.a_a + r).powi(2)).collect();
        let ad2: Vec<f64> = rule.nodes.iter().map(|&r| (params.a_d + r).powi(2)).collect();
        let with_et = channel.has(Mechanism::ElectronTransfer);

        let mut blocks = Vec::new();
        for (idx, nu_i) in initial_basis.bound.iter().enumerate() {
            if nu_i.box_unreliable {
                continue;
            }
            let mut pairs = Vec::new();
            for nu_f in final_basis.bound.iter().chain(&final_basis.dissociative) {
                let r3 = weighted_matrix_element(nu_f, nu_i, |r| r.powi(-3))?;
                let et_nodes = if with_et {
                    rule.nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(&r, &w)| {
                            w * nu_f.value(r) * s_ad(r, params.a_a, params.a_d) * nu_i.value(r) / r
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                pairs.push(PairData { r3, et_nodes });
            }
            blocks.push(InitialBlock {
                nu_i: idx,
                state_idx: idx,
                pairs,
            });
        }
        Ok(Self {
            channel,
            params,
            settings,
            initial_basis,
            final_basis,
            aa2,
            ad2,
            blocks,
        })
    }

    fn block(&self, nu_i: usize) -> Result<&InitialBlock> {
        if nu_i >= self.initial_basis.bound.len() {
            return Err(IcecError::Domain(format!(
                "channel {}: initial state nu_i = {nu_i} out of range ({} bound levels)",
                self.channel.name,
                self.initial_basis.bound.len()
            )));
        }
        self.blocks.iter().find(|b| b.nu_i == nu_i).ok_or_else(|| {
            IcecError::Domain(format!(
                "channel {}: nu_i = {nu_i} is the highest bound level, box-unreliable and \
                 excluded from initial-state averages",
                self.channel.name
            ))
        })
    }

    /// Fast electron-transfer evaluation from cached node values.
    fn sigma_et_cached(&self, epsilon: f64, eps_p: f64, pair: &PairData) -> f64 {
        if pair.et_nodes.is_empty() || epsilon <= 0.0 {
            return 0.0;
        }
        let n = pair.et_nodes.len();
        // t_q = exp(−1/K²_q); the ℓ factor at a node is t_q^{ℓ(ℓ+1)/2}
        let mut t = Vec::with_capacity(n);
        for q in 0..n {
            let k2 = self.aa2[q] * epsilon + self.ad2[q] * eps_p;
            t.push((-1.0 / k2).exp());
        }
        let mut z = vec![1.0f64; n]; // t^{ℓ(ℓ+1)/2}
        let mut g = t.clone(); // t^{ℓ+1}, multiplier for the next step
        let mut sum = 0.0;
        for ell in 0..=self.params.ell_max {
            let mut m = 0.0;
            for (node, zq) in pair.et_nodes.iter().zip(&z) {
                m += node * zq;
            }
            let term = (2.0 * ell as f64 + 1.0) * m * m;
            sum += term;
            if term < self.params.term_tol * sum {
                break;
            }
            for q in 0..n {
                z[q] *= g[q];
                g[q] *= t[q];
            }
        }
        let decay = (-(eps_p - epsilon).abs() / self.params.d).exp();
        32.0 * std::f64::consts::PI / (epsilon.powi(3) * eps_p).sqrt()
            * self.params.c_bar
            * decay
            * sum
    }

    /// (σ_en, σ_el) for one cached pair, 0 when closed.
    fn pair_sigma(
        &self,
        epsilon: f64,
        nu_i: &VibState,
        nu_f: &VibState,
        pair: &PairData,
    ) -> Result<(f64, f64)> {
        let eps_p =
            self.channel
                .outgoing_energy(epsilon, nu_i.energy_rel_asymptote, nu_f.energy_rel_asymptote);
        if eps_p <= 0.0 || epsilon <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let g = self.settings.degeneracy_factor;
        let s_en = energy_transfer_with_element(&self.channel, epsilon, eps_p, pair.r3)?;
        let s_el = self.sigma_et_cached(epsilon, eps_p, pair);
        Ok((g * s_en, g * s_el))
    }

    /// Index of the last open box state at ε from `state_i` (box
    /// energies ascend, so ε′ descends and the open states are a prefix).
    fn last_open_box(&self, epsilon: f64, state_i: &VibState) -> Option<usize> {
        let mut last = None;
        for (j, nu_f) in self.final_basis.dissociative.iter().enumerate() {
            let eps_p = self.channel.outgoing_energy(
                epsilon,
                state_i.energy_rel_asymptote,
                nu_f.energy_rel_asymptote,
            );
            if eps_p > 0.0 {
                last = Some(j);
            } else {
                break;
            }
        }
        last
    }

    /// Quadrature weight for the electron-transfer part of box state j.
    /// σ_el carries an integrable ε′^(−1/2) divergence at the opening of
    /// the dissociative window; integrating that factor analytically
    /// across the state's energy bin (instead of a midpoint-style plain
    /// sum) removes the √(box size) sensitivity near threshold. The bin
    /// of the last open state is extended down to ε′ = 0 so the window
    /// is covered completely.
    fn et_bin_weight(&self, eps_p: f64, j: usize, last_open: bool) -> f64 {
        let rho = match self.final_basis.dissociative[j].dos {
            Some(r) if r > 0.0 => r,
            _ => return 1.0,
        };
        let half = 0.5 / rho;
        let hi = eps_p + half;
        let lo = if last_open { 0.0 } else { (eps_p - half).max(0.0) };
        2.0 * rho * eps_p.sqrt() * (hi.sqrt() - lo.sqrt())
    }

    /// Incoherent totals (σ_bb, σ_bd) over all open final states at
    /// incoming energy ε from bound initial level nu_i. Box states enter
    /// as a plain sum (box normalization × density of states collapses),
    /// with the electron-transfer threshold singularity bin-integrated.
    pub fn total_cross_section(&self, epsilon: f64, nu_i: usize) -> Result<(f64, f64)> {
        let block = self.block(nu_i)?;
        let state_i = &self.initial_basis.bound[block.state_idx];
        let n_bound = self.final_basis.bound.len();
        let last_open = self.last_open_box(epsilon, state_i);
        let mut bb = 0.0;
        let mut bd = 0.0;
        for (k, pair) in block.pairs.iter().enumerate() {
            let nu_f = if k < n_bound {
                &self.final_basis.bound[k]
            } else {
                &self.final_basis.dissociative[k - n_bound]
            };
            let (s_en, s_el) = self.pair_sigma(epsilon, state_i, nu_f, pair)?;
            if k < n_bound {
                bb += s_en + s_el;
            } else {
                let j = k - n_bound;
                let eps_p = self.channel.outgoing_energy(
                    epsilon,
                    state_i.energy_rel_asymptote,
                    nu_f.energy_rel_asymptote,
                );
                if eps_p <= 0.0 {
                    continue;
                }
                bd += s_en + s_el * self.et_bin_weight(eps_p, j, last_open == Some(j));
            }
        }
        Ok((bb, bd))
    }

    /// Boltzmann-averaged total cross section over the usable bound
    /// initial levels; T = 0 returns the ν_i = 0 value exactly.
    pub fn thermal_cross_section(&self, epsilon: f64, temperature: f64) -> Result<f64> {
        if temperature < 0.0 {
            return Err(IcecError::Domain(format!(
                "temperature must be non-negative, got {temperature}"
            )));
        }
        if temperature == 0.0 {
            let (bb, bd) = self.total_cross_section(epsilon, 0)?;
            return Ok(bb + bd);
        }
        let kt = units::KB_HARTREE_PER_K * temperature;
        let e0 = self.initial_basis.bound[0].energy_rel_min;
        let mut norm = 0.0;
        let mut acc = 0.0;
        for block in &self.blocks {
            let e_i = self.initial_basis.bound[block.state_idx].energy_rel_min;
            let w = (-(e_i - e0) / kt).exp();
            if w < 1e-300 {
                continue;
            }
            let (bb, bd) = self.total_cross_section(epsilon, block.nu_i)?;
            norm += w;
            acc += w * (bb + bd);
        }
        Ok(acc / norm)
    }

    /// σ_PR(ε) of the isolated acceptor, the efficiency baseline.
    pub fn pr_reference(&self, epsilon: f64) -> Result<f64> {
        self.channel.acceptor.pr_cross_section(epsilon)
    }

    /// Outgoing-electron spectrum at one incoming energy: sticks for
    /// bound finals, ρ-weighted differential values for box finals.
    pub fn spectrum(&self, epsilon: f64, nu_i: usize) -> Result<SpectrumResult> {
        let block = self.block(nu_i)?;
        let state_i = &self.initial_basis.bound[block.state_idx];
        let n_bound = self.final_basis.bound.len();
        let last_open = self.last_open_box(epsilon, state_i);
        let mut sticks = Vec::new();
        let mut continuum = Vec::new();
        let mut bb = 0.0;
        let mut bd = 0.0;
        for (k, pair) in block.pairs.iter().enumerate() {
            let nu_f = if k < n_bound {
                &self.final_basis.bound[k]
            } else {
                &self.final_basis.dissociative[k - n_bound]
            };
            let eps_p = self.channel.outgoing_energy(
                epsilon,
                state_i.energy_rel_asymptote,
                nu_f.energy_rel_asymptote,
            );
            if eps_p <= 0.0 {
                continue;
            }
            let (s_en, s_el) = self.pair_sigma(epsilon, state_i, nu_f, pair)?;
            let sigma = s_en + s_el;
            if k < n_bound {
                sticks.push((eps_p, sigma));
                bb += sigma;
            } else {
                let rho = nu_f.dos.ok_or_else(|| {
                    IcecError::Numerics("dissociative state without density of states".into())
                })?;
                let j = k - n_bound;
                continuum.push((eps_p, sigma * rho));
                bd += s_en + s_el * self.et_bin_weight(eps_p, j, last_open == Some(j));
            }
        }
        sticks.sort_by(|a, b| a.0.total_cmp(&b.0));
        continuum.sort_by(|a, b| a.0.total_cmp(&b.0));
        let pr_reference = self.pr_reference(epsilon)?;
        let closed = sticks.is_empty() && continuum.is_empty();
        Ok(SpectrumResult {
            channel: self.channel.name.clone(),
            epsilon,
            nu_i,
            sticks,
            continuum,
            sigma_total_bb: bb,
            sigma_total_bd: bd,
            pr_reference,
            display_threshold: 1e-3 * pr_reference,
            closed,
        })
    }

    /// Classical reflection of |ν_i|², weighted by the electron-transfer
    /// interaction kernel e^(−R²/2(a_A²+a_D²))/R², through
    /// E_f = V_f(R) − D_e onto the ε′ axis; unit peak, qualitative node
    /// structure only.
    pub fn reflection_principle_spectrum(
        &self,
        epsilon: f64,
        nu_i: usize,
    ) -> Result<Vec<(f64, f64)>> {
        if !self.channel.has(Mechanism::ElectronTransfer) {
            return Err(IcecError::Domain(format!(
                "channel {}: reflection principle needs the electron-transfer mechanism",
                self.channel.name
            )));
        }
        let block = self.block(nu_i)?;
        let state_i = &self.initial_basis.bound[block.state_idx];
        // support of the initial state on the shared grid
        let amax = state_i
            .amplitude
            .iter()
            .fold(0.0f64, |m, &v| m.max(v.abs()));
        let cutoff = 1e-3 * amax;
        let pts = &state_i.grid.points;
        let first = state_i.amplitude.iter().position(|v| v.abs() > cutoff);
        let last = state_i.amplitude.iter().rposition(|v| v.abs() > cutoff);
        let (first, last) = match (first, last) {
            (Some(a), Some(b)) if b > a => (a, b),
            _ => return Err(IcecError::Domain("initial state has empty support".into())),
        };
        let vf = &self.channel.final_surface;
        // The classical mapping needs a monotone final potential. Trim
        // the support to the repulsive branch; a faint tail (< 5% of the
        // peak) reaching past the final-state minimum is tolerated, more
        // than that invalidates the approximation.
        let mut last = last;
        let mut mono_end = first;
        while mono_end < last && vf.potential(pts[mono_end + 1]) < vf.potential(pts[mono_end]) {
            mono_end += 1;
        }
        if mono_end < last {
            let tail_max = state_i.amplitude[mono_end + 1..=last]
                .iter()
                .fold(0.0f64, |m, &v| m.max(v.abs()));
            if tail_max > 0.05 * amax {
                return Err(IcecError::Domain(format!(
                    "final surface {} is not monotonically repulsive over the initial-state \
                     support [{:.3}, {:.3}] bohr",
                    vf.label, pts[first], pts[last]
                )));
            }
            last = mono_end;
        }
        let s2 = self.params.a_a.powi(2) + self.params.a_d.powi(2);
        let mut out = Vec::with_capacity(last - first + 1);
        for (&r, &amp) in pts[first..=last]
            .iter()
            .zip(&state_i.amplitude[first..=last])
        {
            let e_f = vf.potential(r) - vf.d_e;
            let eps_p = self
                .channel
                .outgoing_energy(epsilon, state_i.energy_rel_asymptote, e_f);
            let psi2 = amp * amp;
            let kernel = (-r * r / (2.0 * s2)).exp() / (r * r);
            out.push((eps_p, psi2 * kernel));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        let peak = out.iter().fold(0.0f64, |m, &(_, v)| m.max(v));
        if peak > 0.0 {
            for p in out.iter_mut() {
                p.1 /= peak;
            }
        }
        Ok(out)
    }
}

/// Full spectrum at one (channel, ε, ν_i).
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub channel: String,
    /// Incoming electron energy [hartree].
    pub epsilon: f64,
    pub nu_i: usize,
    /// Bound-bound lines: (ε′ [hartree], σ [bohr²]), ascending ε′.
    pub sticks: Vec<(f64, f64)>,
    /// Bound-dissociative: (ε′ [hartree], dσ/dε′ [bohr²/hartree]).
    pub continuum: Vec<(f64, f64)>,
    pub sigma_total_bb: f64,
    pub sigma_total_bd: f64,
    /// σ_PR(ε) of the isolated acceptor [bohr²].
    pub pr_reference: f64,
    /// Display cut used by plots (10⁻³ σ_PR); data are never truncated.
    pub display_threshold: f64,
    pub closed: bool,
}

impl SpectrumResult {
    /// Trapezoidal integral of the continuum with half-cell extensions at
    /// both edges, matching the discrete sum over box states.
    pub fn continuum_integral(&self) -> f64 {
        let c = &self.continuum;
        match c.len() {
            0 => 0.0,
            1 => c[0].1 * 0.0,
            _ => {
                let mut s = 0.0;
                for w in c.windows(2) {
                    s += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
                }
                // edge half-cells keep the quadrature consistent with the
                // density-of-states normalization of the endpoint sticks
                s += 0.5 * c[0].1 * (c[1].0 - c[0].0);
                let n = c.len();
                s += 0.5 * c[n - 1].1 * (c[n - 1].0 - c[n - 2].0);
                s
            }
        }
    }
}

//! Morse potential machinery: analytic bound states, box-discretized
//! dissociative states, density of states and weighted matrix elements.

use std::sync::Arc;

use crate::error::{IcecError, Result};
use crate::quad::integrate_adaptive;
use crate::units;

/// One electronic potential energy curve, V(R) = D_e (1 - e^{-a(R-R_e)})²
/// measured from the well minimum. All fields in atomic units.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseSurface {
    /// Short label (X, A, B).
    pub label: String,
    /// Equilibrium distance [bohr].
    pub r_e: f64,
    /// Dissociation energy [hartree].
    pub d_e: f64,
    /// Harmonic frequency [hartree].
    pub omega_e: f64,
    /// Electronic energy at equilibrium [hartree].
    pub e_min: f64,
    /// Reduced mass [electron masses].
    pub mu: f64,
    /// Which atom carries the charge at R -> infinity.
    pub asymptote_tag: String,
}

impl MorseSurface {
    pub fn new(
        label: &str,
        r_e: f64,
        d_e: f64,
        omega_e: f64,
        e_min: f64,
        mu: f64,
        asymptote_tag: &str,
    ) -> Result<Self> {
        if !(d_e > 0.0 && omega_e > 0.0 && r_e > 0.0 && mu > 0.0) {
            return Err(IcecError::Config(format!(
                "surface {label}: D_e, omega_e, R_e and mu must all be positive"
            )));
        }
        let lambda = 2.0 * d_e / omega_e;
        if lambda <= 0.5 {
            return Err(IcecError::Config(format!(
                "surface {label}: lambda = 2 D_e / omega_e = {lambda:.4} <= 1/2, no bound state"
            )));
        }
        Ok(Self {
            label: label.to_string(),
            r_e,
            d_e,
            omega_e,
            e_min,
            mu,
            asymptote_tag: asymptote_tag.to_string(),
        })
    }

    /// Width parameter a = omega_e sqrt(mu / 2 D_e) [1/bohr].
    pub fn a(&self) -> f64 {
        self.omega_e * (self.mu / (2.0 * self.d_e)).sqrt()
    }

    /// Anharmonicity parameter lambda = 2 D_e / omega_e = sqrt(2 mu D_e)/a.
    pub fn lambda(&self) -> f64 {
        2.0 * self.d_e / self.omega_e
    }

    /// Potential relative to the well minimum; total on R > 0.
    pub fn potential(&self, r: f64) -> f64 {
        let x = 1.0 - (-self.a() * (r - self.r_e)).exp();
        self.d_e * x * x
    }

    /// Number of bound levels, floor(lambda - 1/2) + 1.
    pub fn bound_state_count(&self) -> usize {
        (self.lambda() - 0.5).floor() as usize + 1
    }

    /// Analytic bound energy above the well minimum,
    /// E_n = omega_e (n + 1/2) - [omega_e (n + 1/2)]² / (4 D_e).
    pub fn bound_energy(&self, n: usize) -> Result<f64> {
        if n >= self.bound_state_count() {
            return Err(IcecError::Domain(format!(
                "surface {}: bound index {n} out of range (count {})",
                self.label,
                self.bound_state_count()
            )));
        }
        let x = self.omega_e * (n as f64 + 0.5);
        Ok(x - x * x / (4.0 * self.d_e))
    }
}

/// The three (HeNe)+ surfaces (equilibrium distances in Å, energies in
/// cm⁻¹ converted internally; electronic energies in hartree).
pub fn hene_surfaces(mu: f64) -> [MorseSurface; 3] {
    let s = |label: &str, re_ang: f64, de_cm: f64, we_cm: f64, e_min: f64, tag: &str| {
        MorseSurface::new(
            label,
            units::angstrom_to_bohr(re_ang),
            units::cm1_to_hartree(de_cm),
            units::cm1_to_hartree(we_cm),
            e_min,
            mu,
            tag,
        )
        .expect("builtin surface parameters are valid")
    };
    [
        s("X", 1.43, 5200.0, 911.0, -130.94349, "Ne"),
        s("A", 2.42, 283.0, 152.0, -130.92176, "Ne"),
        s("B", 2.66, 343.0, 152.0, -130.80754, "He"),
    ]
}

/// Uniform radial grid on (0, R_box]: r_i = i h, i = 1..=n, h = R_box / n.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub r_box: f64,
    pub points: Vec<f64>,
}

impl RadialGrid {
    pub fn uniform(r_box: f64, n: usize) -> Arc<Self> {
        assert!(r_box > 0.0 && n >= 2);
        let h = r_box / n as f64;
        Arc::new(Self {
            r_box,
            points: (1..=n).map(|i| i as f64 * h).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Bound level with quantum number n.
    Bound(usize),
    /// Box-discretized dissociative state with box index j.
    BoxState(usize),
}

#[derive(Debug, Clone)]
enum Evaluator {
    /// Normalized analytic Morse bound state.
    MorseBound {
        a: f64,
        lambda: f64,
        r_e: f64,
        n: usize,
        norm: f64,
    },
    /// Dense uniform samples starting at R = 0, step h; interpolated with
    /// a 6-point Lagrange stencil.
    Dense { h: f64, values: Arc<Vec<f64>> },
}

/// A bound or box-discretized vibrational state of one surface.
#[derive(Debug, Clone)]
pub struct VibState {
    pub kind: StateKind,
    /// Energy above the potential minimum [hartree].
    pub energy_rel_min: f64,
    /// energy_rel_min - D_e: negative = binding, positive = kinetic
    /// energy release.
    pub energy_rel_asymptote: f64,
    pub grid: Arc<RadialGrid>,
    /// Wavefunction samples on `grid`.
    pub amplitude: Vec<f64>,
    /// Density of states [1/hartree]; only for box-dissociative states.
    pub dos: Option<f64>,
    /// The highest bound level of a surface feels the finite box; it is
    /// excluded from initial-state averages but kept as a final state.
    pub box_unreliable: bool,
    eval: Evaluator,
}

impl VibState {
    /// Wavefunction value at arbitrary R in (0, R_box].
    pub fn value(&self, r: f64) -> f64 {
        match &self.eval {
            Evaluator::MorseBound {
                a,
                lambda,
                r_e,
                n,
                norm,
            } => norm * morse_bound_unnormalized(*a, *lambda, *r_e, *n, r),
            Evaluator::Dense { h, values } => lagrange6(values, *h, r),
        }
    }

    pub fn is_bound(&self) -> bool {
        matches!(self.kind, StateKind::Bound(_))
    }
}

/// Generalized Laguerre polynomial L_n^alpha(z) by upward recurrence.
fn laguerre(n: usize, alpha: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + alpha - z;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0 + alpha - z) * l - (kf - 1.0 + alpha) * lm1) / kf;
        lm1 = l;
        l = next;
    }
    l
}

/// Unnormalized analytic bound state: z^p e^{-z/2} L_n^{2p}(z) with
/// z = 2 lambda e^{-a(R - R_e)} and p = lambda - n - 1/2.
fn morse_bound_unnormalized(a: f64, lambda: f64, r_e: f64, n: usize, r: f64) -> f64 {
    let z = 2.0 * lambda * (-a * (r - r_e)).exp();
    let p = lambda - n as f64 - 0.5;
    let log_envelope = p * z.ln() - 0.5 * z;
    if log_envelope < -700.0 {
        return 0.0;
    }
    log_envelope.exp() * laguerre(n, 2.0 * p, z)
}

/// 6-point Lagrange interpolation on a uniform grid with values[0] at x = 0.
fn lagrange6(values: &[f64], h: f64, x: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 6);
    let fi = x / h;
    let i0 = (fi.floor() as isize - 2).clamp(0, n as isize - 6) as usize;
    let t = fi - i0 as f64;
    let mut sum = 0.0;
    for (k, &v) in values[i0..i0 + 6].iter().enumerate() {
        let mut c = 1.0;
        for m in 0..6 {
            if m != k {
                c *= (t - m as f64) / (k as f64 - m as f64);
            }
        }
        sum += c * v;
    }
    sum
}

/// Normalized analytic bound state n of `surface`, sampled on `grid`.
pub fn bound_state(surface: &MorseSurface, n: usize, grid: &Arc<RadialGrid>) -> Result<VibState> {
    let count = surface.bound_state_count();
    if n >= count {
        return Err(IcecError::Domain(format!(
            "surface {}: bound index {n} out of range (count {count})",
            surface.label
        )));
    }
    let (a, lambda, r_e) = (surface.a(), surface.lambda(), surface.r_e);
    let norm_sq = integrate_adaptive(
        |r| {
            let v = morse_bound_unnormalized(a, lambda, r_e, n, r);
            v * v
        },
        0.0,
        grid.r_box,
        8,
        64,
        1e-11,
        0.0,
        8,
    )?;
    let norm = 1.0 / norm_sq.sqrt();
    let eval = Evaluator::MorseBound {
        a,
        lambda,
        r_e,
        n,
        norm,
    };
    let energy_rel_min = surface.bound_energy(n)?;
    let amplitude = grid
        .points
        .iter()
        .map(|&r| norm * morse_bound_unnormalized(a, lambda, r_e, n, r))
        .collect();
    Ok(VibState {
        kind: StateKind::Bound(n),
        energy_rel_min,
        energy_rel_asymptote: energy_rel_min - surface.d_e,
        grid: grid.clone(),
        amplitude,
        dos: None,
        box_unreliable: n == count - 1,
        eval,
    })
}

/// All bound states of a surface on the given grid.
pub fn bound_states(surface: &MorseSurface, grid: &Arc<RadialGrid>) -> Result<Vec<VibState>> {
    (0..surface.bound_state_count())
        .map(|n| bound_state(surface, n, grid))
        .collect()
}

/// How many dissociative box states to construct.
#[derive(Debug, Clone, Copy)]
pub enum BoxSpec {
    Count(usize),
    /// Up to this energy above the dissociation asymptote [hartree].
    MaxEnergy(f64),
}

struct Shoot {
    nodes: usize,
    /// psi(R_box) / max |psi|.
    end_ratio: f64,
}

/// Numerov integration of psi'' = 2 mu (V - E) psi outward from psi(0) = 0.
/// Returns node count and the boundary ratio; `store` collects the raw
/// solution when given.
fn numerov(v: &[f64], h: f64, mu: f64, e: f64, mut store: Option<&mut Vec<f64>>) -> Shoot {
    let n = v.len() - 1; // points 0..=n
    let c = h * h / 12.0;
    // Cap the forbidden-region coefficient so 1 - h²f/12 stays positive;
    // only active where the wavefunction is exponentially negligible.
    let f_cap = 8.4 / (h * h);
    let f = |i: usize| (2.0 * mu * (v[i] - e)).min(f_cap);
    let mut psi_prev = 0.0f64;
    let mut psi = 1e-12f64;
    if let Some(out) = store.as_deref_mut() {
        out.clear();
        out.push(psi_prev);
        out.push(psi);
    }
    let mut nodes = 0usize;
    let mut max_abs: f64 = psi.abs();
    let mut fm = f(0);
    let mut f0 = f(1);
    for i in 1..n {
        let fp = f(i + 1);
        let next = ((2.0 + 10.0 * c * f0) * psi - (1.0 - c * fm) * psi_prev) / (1.0 - c * fp);
        if psi != 0.0 && next != 0.0 && (psi > 0.0) != (next > 0.0) && i < n {
            nodes += 1;
        }
        psi_prev = psi;
        psi = next;
        fm = f0;
        f0 = fp;
        max_abs = max_abs.max(psi.abs());
        if let Some(out) = store.as_deref_mut() {
            out.push(psi);
        }
        // Rescale deep in the classically forbidden region; threshold low
        // enough that psi² never overflows downstream.
        if psi.abs() > 1e100 {
            let s = 1e-100;
            psi *= s;
            psi_prev *= s;
            max_abs *= s;
            if let Some(out) = store.as_deref_mut() {
                for x in out.iter_mut() {
                    *x *= s;
                }
            }
        }
    }
    Shoot {
        nodes,
        end_ratio: psi / max_abs,
    }
}

/// Dense potential samples V(i h), i = 0..=n, for Numerov.
fn dense_potential(surface: &MorseSurface, r_box: f64, h_target: f64) -> (Vec<f64>, f64) {
    let n = (r_box / h_target).ceil() as usize;
    let n = n.max(4000);
    let h = r_box / n as f64;
    let v = (0..=n).map(|i| surface.potential(i as f64 * h)).collect();
    (v, h)
}

/// Box-discretized dissociative states found by imposing psi(R_box) = 0,
/// ordered by energy, each assigned a density of states.
pub fn dissociative_states(
    surface: &MorseSurface,
    r_box: f64,
    spec: BoxSpec,
    grid: &Arc<RadialGrid>,
) -> Result<Vec<VibState>> {
    let mu = surface.mu;
    let d_e = surface.d_e;
    let (e_stop, max_count) = match spec {
        BoxSpec::Count(c) => (f64::INFINITY, c),
        BoxSpec::MaxEnergy(e) => {
            if e <= 0.0 {
                return Ok(Vec::new());
            }
            (d_e + e, usize::MAX)
        }
    };

    // Local wavenumber at the largest energy of interest fixes the step.
    let e_top = if e_stop.is_finite() {
        e_stop
    } else {
        // rough guess for Count: box spacing formula inverted
        d_e + {
            let m = max_count as f64 + 1.0;
            (m * std::f64::consts::PI / r_box).powi(2) / (2.0 * mu)
        }
    };
    let k_top = (2.0 * mu * e_top).sqrt();
    let (v, h) = dense_potential(surface, r_box, 0.05 / k_top);

    // Number of box eigenvalues below the asymptote; dissociative state j
    // is the (n0 + j)-th eigenstate of the boxed Hamiltonian.
    let n0 = numerov(&v, h, mu, d_e, None).nodes;

    let mut states: Vec<VibState> = Vec::new();
    let mut energies: Vec<f64> = Vec::new();
    let mut lo = d_e;
    let mut last_spacing = (std::f64::consts::PI / r_box).powi(2) / (2.0 * mu);
    let mut raw = Vec::new();
    for j in 0.. {
        if states.len() >= max_count {
            break;
        }
        let target = n0 + j + 1; // want nodes(E) >= target above the eigenvalue
        // Bracket by expanding above the previous eigenvalue.
        let mut hi = lo + 2.0 * last_spacing;
        let mut step = 2.0 * last_spacing;
        let mut guard = 0;
        while numerov(&v, h, mu, hi, None).nodes < target {
            step *= 1.6;
            hi += step;
            guard += 1;
            if guard > 200 {
                return Err(IcecError::Numerics(format!(
                    "box state {j} of surface {}: bracketing failed in [{lo:.6e}, {hi:.6e}]",
                    surface.label
                )));
            }
        }
        let mut blo = lo;
        let mut bhi = hi;
        for _ in 0..200 {
            if bhi - blo < 1e-13 * bhi.max(1e-10) {
                break;
            }
            let mid = 0.5 * (blo + bhi);
            if numerov(&v, h, mu, mid, None).nodes >= target {
                bhi = mid;
            } else {
                blo = mid;
            }
        }
        // Secant polish on the boundary value to pin psi(R_box) ~ 0.
        let mut e1 = blo;
        let mut e2 = bhi;
        let mut g1 = numerov(&v, h, mu, e1, None).end_ratio;
        let mut g2 = numerov(&v, h, mu, e2, None).end_ratio;
        let mut e_root = 0.5 * (e1 + e2);
        for _ in 0..8 {
            if (g2 - g1).abs() < 1e-300 {
                break;
            }
            let e_new = e2 - g2 * (e2 - e1) / (g2 - g1);
            if !e_new.is_finite() || e_new <= d_e {
                break;
            }
            e_root = e_new;
            let g_new = numerov(&v, h, mu, e_new, None).end_ratio;
            e1 = e2;
            g1 = g2;
            e2 = e_new;
            g2 = g_new;
            if g_new.abs() < 1e-13 {
                break;
            }
        }
        let energy = e_root;
        if energy > e_stop && states.len() >= 2 {
            // one state beyond E_max improves the endpoint density of states
            if energies.last().is_some_and(|&le| le > e_stop) {
                break;
            }
        }

        numerov(&v, h, mu, energy, Some(&mut raw));
        // Normalize against the interpolating evaluator.
        let values = Arc::new(raw.clone());
        let eval_h = h;
        let vclone = values.clone();
        let norm_sq = integrate_adaptive(
            move |r| {
                let a = lagrange6(&vclone, eval_h, r);
                a * a
            },
            0.0,
            r_box,
            8,
            512,
            1e-11,
            0.0,
            6,
        )?;
        let scale = 1.0 / norm_sq.sqrt();
        let values = Arc::new(raw.iter().map(|&x| x * scale).collect::<Vec<f64>>());
        let eval = Evaluator::Dense {
            h,
            values: values.clone(),
        };
        let amplitude = grid.points.iter().map(|&r| lagrange6(&values, h, r)).collect();
        if let Some(&prev) = energies.last() {
            last_spacing = energy - prev;
        } else {
            last_spacing = energy - d_e;
        }
        energies.push(energy);
        states.push(VibState {
            kind: StateKind::BoxState(j),
            energy_rel_min: energy,
            energy_rel_asymptote: energy - d_e,
            grid: grid.clone(),
            amplitude,
            dos: None,
            box_unreliable: false,
            eval,
        });
        lo = energy + 1e-14 * energy.max(1.0);
        if energy > e_stop {
            break;
        }
    }

    // Assign the density of states from neighboring level spacings.
    if states.len() >= 3 {
        for (j, st) in states.iter_mut().enumerate() {
            st.dos = Some(density_of_states(&energies, j)?);
        }
    } else {
        for st in states.iter_mut() {
            st.dos = Some(1.0 / last_spacing);
        }
    }
    Ok(states)
}

/// rho(E_j) = 2 / |E_{j+1} - E_{j-1}| for interior j; one-sided
/// differences at the endpoints.
pub fn density_of_states(energies: &[f64], j: usize) -> Result<f64> {
    let n = energies.len();
    if n < 3 {
        return Err(IcecError::Domain(
            "density of states needs at least 3 box levels".into(),
        ));
    }
    if j >= n {
        return Err(IcecError::Domain(format!(
            "density of states index {j} out of range ({n} levels)"
        )));
    }
    let span = if j == 0 {
        energies[1] - energies[0]
    } else if j == n - 1 {
        energies[n - 1] - energies[n - 2]
    } else {
        (energies[j + 1] - energies[j - 1]) / 2.0
    };
    Ok(1.0 / span.abs())
}

/// <bra | w(R) | ket> over (0, R_box] by composite Gauss-Legendre
/// quadrature with panel doubling to relative 1e-6.
pub fn weighted_matrix_element<F: Fn(f64) -> f64>(
    bra: &VibState,
    ket: &VibState,
    weight: F,
) -> Result<f64> {
    if (bra.grid.r_box - ket.grid.r_box).abs() > 1e-12 || bra.grid.points.len() != ket.grid.points.len()
    {
        return Err(IcecError::Domain(
            "bra and ket must share the same radial grid".into(),
        ));
    }
    integrate_adaptive(
        |r| bra.value(r) * weight(r) * ket.value(r),
        0.0,
        bra.grid.r_box,
        8,
        128,
        1e-6,
        1e-13,
        8,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{angstrom_to_bohr, cm1_to_hartree, hartree_to_cm1, reduced_mass_me};

    fn mu_hene() -> f64 {
        reduced_mass_me(4.002602, 20.1797)
    }

    #[test]
    fn potential_minimum_and_asymptote() {
        let [x, _, _] = hene_surfaces(mu_hene());
        assert!(x.potential(x.r_e).abs() < 1e-18);
        let far = x.potential(1.0e4);
        assert!((far - x.d_e).abs() / x.d_e < 1e-12);
        assert!((hartree_to_cm1(x.d_e) - 5200.0).abs() < 1e-6);
    }

    #[test]
    fn width_parameter_x() {
        let [x, _, _] = hene_surfaces(mu_hene());
        // a = omega_e sqrt(mu / 2 D_e) evaluated from Table values.
        assert!((x.a() - 1.4879).abs() < 2e-3, "a = {}", x.a());
    }

    #[test]
    fn bound_counts() {
        let [x, a, b] = hene_surfaces(mu_hene());
        assert_eq!(x.bound_state_count(), 11);
        assert_eq!(a.bound_state_count(), 4);
        assert_eq!(b.bound_state_count(), 5);
    }

    #[test]
    fn rejects_shallow_surface() {
        let r = MorseSurface::new(
            "bad",
            2.0,
            cm1_to_hartree(10.0),
            cm1_to_hartree(100.0),
            0.0,
            mu_hene(),
            "He",
        );
        assert!(r.is_err());
    }

    #[test]
    fn ground_state_energies() {
        let [x, a, _] = hene_surfaces(mu_hene());
        let e0x = hartree_to_cm1(x.bound_energy(0).unwrap());
        assert!((e0x - 445.5).abs() < 0.1, "E0(X) = {e0x}");
        let e0a = hartree_to_cm1(a.bound_energy(0).unwrap());
        assert!((e0a - 70.9).abs() < 0.1, "E0(A) = {e0a}");
    }

    #[test]
    fn bound_state_norm_and_nodes() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let grid = RadialGrid::uniform(angstrom_to_bohr(10.0), 3000);
        for (n, expect_nodes) in [(0usize, 0usize), (5, 5)] {
            let st = bound_state(&x, n, &grid).unwrap();
            let norm = weighted_matrix_element(&st, &st, |_| 1.0).unwrap();
            assert!((norm - 1.0).abs() < 1e-8, "norm(n={n}) = {norm}");
            let nodes = st
                .amplitude
                .windows(2)
                .filter(|w| w[0] * w[1] < 0.0 && w[0].abs() > 1e-12 && w[1].abs() > 1e-12)
                .count();
            assert_eq!(nodes, expect_nodes, "nodes of n={n}");
        }
    }

    #[test]
    fn bound_orthogonality() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let grid = RadialGrid::uniform(angstrom_to_bohr(10.0), 3000);
        let s0 = bound_state(&x, 0, &grid).unwrap();
        let s3 = bound_state(&x, 3, &grid).unwrap();
        let ov = weighted_matrix_element(&s0, &s3, |_| 1.0).unwrap();
        assert!(ov.abs() < 1e-8, "overlap = {ov}");
    }

    #[test]
    fn ground_state_r3_moment_near_equilibrium() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let grid = RadialGrid::uniform(angstrom_to_bohr(10.0), 3000);
        let s0 = bound_state(&x, 0, &grid).unwrap();
        let m = weighted_matrix_element(&s0, &s0, |r| r.powi(-3)).unwrap();
        let re3 = x.r_e.powi(-3);
        assert!(m > 0.0);
        assert!((m - re3).abs() / re3 < 0.15, "m = {m}, Re^-3 = {re3}");
    }

    #[test]
    fn matrix_element_symmetry() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let grid = RadialGrid::uniform(angstrom_to_bohr(10.0), 3000);
        let s1 = bound_state(&x, 1, &grid).unwrap();
        let s4 = bound_state(&x, 4, &grid).unwrap();
        let m_ab = weighted_matrix_element(&s1, &s4, |r| r.powi(-3)).unwrap();
        let m_ba = weighted_matrix_element(&s4, &s1, |r| r.powi(-3)).unwrap();
        assert!((m_ab - m_ba).abs() < 1e-12);
    }

    #[test]
    fn box_states_basic_properties() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let r_box = angstrom_to_bohr(10.0);
        let grid = RadialGrid::uniform(r_box, 3000);
        let states = dissociative_states(&x, r_box, BoxSpec::Count(40), &grid).unwrap();
        assert_eq!(states.len(), 40);
        // strictly increasing energies, all above the asymptote
        for w in states.windows(2) {
            assert!(w[1].energy_rel_min > w[0].energy_rel_min);
        }
        for st in &states {
            assert!(st.energy_rel_asymptote > 0.0);
            let amax = st.amplitude.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            assert!(
                st.amplitude.last().unwrap().abs() < 1e-10 * amax,
                "edge value too large for state {:?}",
                st.kind
            );
            let norm = weighted_matrix_element(st, st, |_| 1.0).unwrap();
            assert!((norm - 1.0).abs() < 1e-8, "norm = {norm}");
        }
    }

    /// Semiclassical level spacing dE/dn = π / ∫ (μ/k) dR over the
    /// classically allowed region; the square-root turning-point
    /// singularity is removed by the substitution R = R_t + s².
    fn wkb_spacing(surface: &MorseSurface, r_box: f64, e: f64) -> f64 {
        // inner turning point V(R_t) = e, R_t < R_e
        let (mut lo, mut hi) = (1e-6, surface.r_e);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if surface.potential(mid) > e {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r_t = 0.5 * (lo + hi);
        let s_max = (r_box - r_t).sqrt();
        let integral = crate::quad::CompositeRule::new(0.0, s_max, 256, 8).integrate(|s| {
            let r = r_t + s * s;
            let k = (2.0 * surface.mu * (e - surface.potential(r)).max(0.0)).sqrt();
            if k == 0.0 {
                0.0
            } else {
                2.0 * s * surface.mu / k
            }
        });
        std::f64::consts::PI / integral
    }

    #[test]
    fn box_spacing_matches_semiclassics_and_free_limit() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let r_box = angstrom_to_bohr(10.0);
        let grid = RadialGrid::uniform(r_box, 3000);
        let states = dissociative_states(&x, r_box, BoxSpec::Count(60), &grid).unwrap();
        let n = states.len();
        for j in (n - 6)..(n - 1) {
            let de = states[j + 1].energy_rel_min - states[j].energy_rel_min;
            // particle-in-a-box limit, approached only slowly because the
            // repulsive core excludes ~2 bohr of the box
            let free = std::f64::consts::PI
                * (2.0 * states[j].energy_rel_asymptote / x.mu).sqrt()
                / r_box;
            assert!(
                (de - free).abs() / free < 0.25,
                "spacing {de:.3e} vs free {free:.3e} at j={j}"
            );
            // the semiclassical spacing accounts for the core and well
            let wkb = wkb_spacing(&x, r_box, states[j].energy_rel_min);
            assert!(
                (de - wkb).abs() / wkb < 0.01,
                "spacing {de:.3e} vs wkb {wkb:.3e} at j={j}"
            );
        }
    }

    #[test]
    fn box_energies_match_dvr_oracle() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let r_box = angstrom_to_bohr(10.0);
        let grid = RadialGrid::uniform(r_box, 3000);
        let states = dissociative_states(&x, r_box, BoxSpec::Count(6), &grid).unwrap();
        let n_dvr = 2000;
        let dense = crate::linalg::sym_eigen(
            crate::dvr::sine_dvr_hamiltonian(&x, r_box, n_dvr),
            n_dvr,
            false,
        )
        .unwrap();
        let n_bound = x.bound_state_count();
        for (j, st) in states.iter().enumerate() {
            let oracle = dense.values[n_bound + j];
            assert!(
                (st.energy_rel_min - oracle).abs() < 1e-7,
                "box state {j}: {} vs oracle {}",
                st.energy_rel_min,
                oracle
            );
        }
    }

    #[test]
    fn box_local_wavenumber_near_edge() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let r_box = angstrom_to_bohr(10.0);
        let grid = RadialGrid::uniform(r_box, 3000);
        let states = dissociative_states(&x, r_box, BoxSpec::Count(30), &grid).unwrap();
        let st = &states[25];
        let k_expected = (2.0 * x.mu * st.energy_rel_asymptote).sqrt();
        // -psi''/psi at a point near the box edge where V ~ D_e
        let r = r_box - 0.7;
        let d = 1e-3;
        let psi = st.value(r);
        let dd = (st.value(r + d) - 2.0 * psi + st.value(r - d)) / (d * d);
        let k_local = (-dd / psi).sqrt();
        assert!(
            (k_local - k_expected).abs() / k_expected < 1e-3,
            "k_local = {k_local}, expected {k_expected}"
        );
    }

    #[test]
    fn box_bound_orthogonality() {
        let [x, _, _] = hene_surfaces(mu_hene());
        let r_box = angstrom_to_bohr(10.0);
        let grid = RadialGrid::uniform(r_box, 3000);
        let b3 = bound_state(&x, 3, &grid).unwrap();
        let states = dissociative_states(&x, r_box, BoxSpec::Count(12), &grid).unwrap();
        for st in &states {
            let ov = weighted_matrix_element(&b3, st, |_| 1.0).unwrap();
            assert!(ov.abs() < 1e-6, "overlap {ov:.2e} with {:?}", st.kind);
        }
    }

    #[test]
    fn dos_definition() {
        // equally spaced energies: rho = 1/spacing
        let e: Vec<f64> = (0..10).map(|i| 0.5 + 0.01 * i as f64).collect();
        for j in 1..9 {
            assert!((density_of_states(&e, j).unwrap() - 100.0).abs() < 1e-9);
        }
        // telescoping sum over interior states covers the range
        let covered: f64 = (1..9)
            .map(|j| 1.0 / density_of_states(&e, j).unwrap())
            .sum();
        assert!((covered - (e[9] - e[1] + e[8] - e[0]) / 2.0).abs() < 1e-12);
        assert!(density_of_states(&e[..2], 0).is_err());
    }

    #[test]
    fn dos_doubles_with_box_size() {
        let [_, _, b] = hene_surfaces(mu_hene());
        let r1 = angstrom_to_bohr(10.0);
        let r2 = 2.0 * r1;
        let g1 = RadialGrid::uniform(r1, 1500);
        let g2 = RadialGrid::uniform(r2, 3000);
        let e_max = cm1_to_hartree(2000.0);
        let s1 = dissociative_states(&b, r1, BoxSpec::MaxEnergy(e_max), &g1).unwrap();
        let s2 = dissociative_states(&b, r2, BoxSpec::MaxEnergy(e_max), &g2).unwrap();
        // compare dos at a matching energy in the upper part of the range
        let pick = |states: &[VibState], e: f64| {
            states
                .iter()
                .min_by(|a, b| {
                    (a.energy_rel_asymptote - e)
                        .abs()
                        .total_cmp(&(b.energy_rel_asymptote - e).abs())
                })
                .map(|s| s.dos.unwrap())
                .unwrap()
        };
        // The ratio exceeds 2 slightly because the core-excluded region
        // (~4 bohr for B at this energy) does not scale with the box.
        let e_probe = cm1_to_hartree(1500.0);
        let ratio = pick(&s2, e_probe) / pick(&s1, e_probe);
        assert!((ratio - 2.0).abs() < 0.35, "dos ratio = {ratio}");
    }
}

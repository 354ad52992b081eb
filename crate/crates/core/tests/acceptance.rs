//! Release gate: eight numbered criteria covering oracle agreement,
//! physical thresholds, dominance orderings, temperature dependence,
//! spectral structure and numerical robustness. Each criterion prints
//! one pass/fail line; the test fails if any criterion fails.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! report for passing runs too.

use std::time::Instant;

use icec_core::channels::{find_channel, transition_catalog};
use icec_core::dvr::{box_confinement_allowance, dvr_count_below, dvr_lowest_eigenvalues};
use icec_core::engine::{ChannelEngine, ElectronTransferParams, EngineSettings, SurfaceBasis};
use icec_core::morse::hene_surfaces;
use icec_core::quad::CompositeRule;
use icec_core::{units, SpeciesRegistry};

const R_BOX_ANGSTROM: f64 = 10.0;
const GRID_POINTS: usize = 3000;
const DVR_POINTS: usize = 3000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn fail(detail: String) -> Outcome {
    Outcome { passed: false, detail }
}

fn check(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn build_engine_to(
    channel: &str,
    r_box_angstrom: f64,
    grid_points: usize,
    quad_panels: usize,
    eps_max_ev: f64,
) -> ChannelEngine {
    let mu = units::reduced_mass_me(4.002602, 20.1797);
    let surfaces = hene_surfaces(mu);
    let registry = SpeciesRegistry::builtin();
    let catalog = transition_catalog(&surfaces, &registry).unwrap();
    let ch = find_channel(&catalog, channel).unwrap().clone();
    let params = ElectronTransferParams::for_channel(&ch, 1.6).unwrap();
    let mut settings = EngineSettings::new(
        units::angstrom_to_bohr(r_box_angstrom),
        grid_points,
        units::ev_to_hartree(eps_max_ev),
    );
    settings.quad_panels = quad_panels;
    ChannelEngine::new(ch, params, settings).unwrap()
}

fn build_engine(channel: &str, r_box_angstrom: f64, grid_points: usize, quad_panels: usize) -> ChannelEngine {
    build_engine_to(channel, r_box_angstrom, grid_points, quad_panels, 8.0)
}

/// Criterion 1: analytic Morse levels vs sine-DVR, and bound counts 11/4/5.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mu = units::reduced_mass_me(4.002602, 20.1797);
    let surfaces = hene_surfaces(mu);
    let r_box = units::angstrom_to_bohr(R_BOX_ANGSTROM);

    let mut worst = 0.0f64;
    let mut counts = Vec::new();
    for s in &surfaces {
        let n = s.bound_state_count();
        let dvr = match dvr_lowest_eigenvalues(s, r_box, DVR_POINTS, n) {
            Ok(v) => v,
            Err(e) => return fail(format!("DVR failed on {}: {e}", s.label)),
        };
        for (k, e_dvr) in dvr.iter().enumerate().take(n - 1) {
            let dev = units::hartree_to_cm1((e_dvr - s.bound_energy(k).unwrap()).abs());
            worst = worst.max(dev);
        }
        // The most weakly bound level of a surface may be pushed just
        // above the asymptote by box confinement; a strict count one
        // short must be recovered within the confinement allowance.
        let strict = dvr_count_below(s, r_box, DVR_POINTS, s.d_e).unwrap();
        let effective = if strict + 1 == n {
            let relaxed = dvr_count_below(
                s,
                r_box,
                DVR_POINTS,
                s.d_e + box_confinement_allowance(s, r_box),
            )
            .unwrap();
            if relaxed >= n { n } else { strict }
        } else {
            strict
        };
        counts.push((s.label.clone(), n, effective));
    }
    let elapsed = start.elapsed().as_secs_f64();

    let expected = [("X", 11usize), ("A", 4), ("B", 5)];
    let counts_ok = expected.iter().all(|(l, n)| {
        counts
            .iter()
            .any(|(label, analytic, eff)| label == l && analytic == n && eff == n)
    });
    check(
        worst < 0.1 && counts_ok && elapsed < 10.0,
        format!(
            "max level deviation {worst:.2e} cm^-1 (< 0.1); counts analytic/dvr {:?} vs 11/4/5; {elapsed:.1} s (< 10)",
            counts
        ),
    )
}

/// Criterion 2: orthonormality of >= 200 bound + box states to 1e-6.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mu = units::reduced_mass_me(4.002602, 20.1797);
    let surfaces = hene_surfaces(mu);
    // 16 A instead of the production 10 A: B nu=3 is bound by only
    // 17 cm^-1 and its analytic tail has not fully decayed at 10 A,
    // which contaminates its overlap with box states at the 1e-5 level.
    let r_box = units::angstrom_to_bohr(16.0);

    // X carries the bulk (box states up to 2.6 eV), B adds a second
    // surface with a different well. The dense grid keeps the
    // interpolation error of the fastest-oscillating box states well
    // below the 1e-6 overlap tolerance.
    let grid_points = 12000;
    let plan = [("X", 2.6), ("B", 0.3)];
    let rule = CompositeRule::new(0.0, r_box, 1600, 8);
    let mut total_states = 0usize;
    let mut worst = 0.0f64;
    for (label, e_max_ev) in plan {
        let s = surfaces.iter().find(|s| s.label == label).unwrap();
        let basis = match SurfaceBasis::build(s, r_box, grid_points, Some(units::ev_to_hartree(e_max_ev))) {
            Ok(b) => b,
            Err(e) => return fail(format!("basis build failed on {label}: {e}")),
        };
        let states: Vec<_> = basis
            .bound
            .iter()
            .filter(|st| !st.box_unreliable)
            .chain(basis.dissociative.iter())
            .collect();
        total_states += states.len();
        let values: Vec<Vec<f64>> = states
            .iter()
            .map(|st| rule.nodes.iter().map(|&r| st.value(r)).collect())
            .collect();
        for i in 0..states.len() {
            for j in 0..=i {
                let mut ov = 0.0;
                for ((w, a), b) in rule.weights.iter().zip(&values[i]).zip(&values[j]) {
                    ov += w * a * b;
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ov - target).abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        worst < 1e-6 && total_states >= 200 && elapsed < 30.0,
        format!(
            "max |<m|n> - delta| = {worst:.2e} (< 1e-6) over {total_states} states (>= 200); {elapsed:.1} s (< 30)"
        ),
    )
}

/// Criterion 3: Milne inversion exact to 1e-12 across both tables.
fn criterion_3() -> Outcome {
    let reg = SpeciesRegistry::builtin();
    let mut worst = 0.0f64;
    for sp in reg.iter() {
        let lo = sp.pi_table.min_energy().max(sp.ip + 1e-9);
        let hi = sp.pi_table.max_energy();
        for i in 0..2000 {
            let omega = lo + (hi - lo) * (i as f64 + 0.5) / 2000.0;
            let eps = omega - sp.ip;
            let pr = sp.pr_cross_section(eps).unwrap();
            let pi = sp.pi_cross_section(omega, false).unwrap();
            let k = (2.0 * eps).sqrt();
            let back =
                pr * (sp.g_ion as f64 / sp.g_neutral as f64) * (units::C_AU * k / omega).powi(2);
            worst = worst.max((back - pi).abs() / pi);
        }
    }
    check(
        worst < 1e-12,
        format!("max relative roundtrip deviation {worst:.2e} (< 1e-12, He + Ne, 2000 energies each)"),
    )
}

/// Criterion 4: X->B threshold — zero below 3.5 eV, open by 3.8 eV;
/// thermal threshold at 298 K below the one at 15 K.
fn criterion_4(xb: &ChannelEngine) -> Outcome {
    for e_ev in [0.5, 1.5, 2.5, 3.0, 3.4, 3.5] {
        let (bb, bd) = xb.total_cross_section(units::ev_to_hartree(e_ev), 0).unwrap();
        if bb != 0.0 || bd != 0.0 {
            return fail(format!("nu_i=0 cross section nonzero at {e_ev} eV: {}", bb + bd));
        }
    }
    let (bb, bd) = xb.total_cross_section(units::ev_to_hartree(3.8), 0).unwrap();
    if bb + bd <= 0.0 {
        return fail("nu_i=0 cross section still zero at 3.8 eV".into());
    }

    // Thermal threshold: first grid energy with a numerically resolvable
    // cross section (> 1e-20 bohr^2, far above underflow, far below the
    // plotted scale). Hot initial-state population opens the channel
    // earlier.
    let threshold = |t: f64| -> f64 {
        for k in 0..=60 {
            let e_ev = 3.1 + 0.01 * k as f64;
            let sigma = xb.thermal_cross_section(units::ev_to_hartree(e_ev), t).unwrap();
            if sigma > 1e-20 {
                return e_ev;
            }
        }
        f64::INFINITY
    };
    let (t15, t298) = (threshold(15.0), threshold(298.0));
    check(
        t298 < t15 && t15.is_finite(),
        format!("zero through 3.5 eV, sigma(3.8 eV) = {:.2e} bohr^2 > 0; thermal threshold 298 K at {t298:.2} eV < 15 K at {t15:.2} eV", bb + bd),
    )
}

/// Criterion 5: dominance orderings at default calibration (order of
/// magnitude). The electron-transfer prefactors are uncalibrated
/// placeholders (CALIBRATION-REQUIRED), so these ratios carry a 10x
/// tolerance.
fn criterion_5(bx: &ChannelEngine, xb: &ChannelEngine) -> Outcome {
    let eps1 = units::ev_to_hartree(1.0);
    let (bb, bd) = bx.total_cross_section(eps1, 0).unwrap();
    let bx_ratio = bb / bd;

    let eps5 = units::ev_to_hartree(5.0);
    let (bb5, bd5) = xb.total_cross_section(eps5, 0).unwrap();
    let xb_ratio = bd5 / bb5;

    let pr = bx.pr_reference(eps1).unwrap();
    let over_pr = (bb + bd) / pr;

    check(
        (10.0..=1000.0).contains(&bx_ratio) && xb_ratio >= 1e5 && over_pr >= 1e3,
        format!(
            "B->X bb/bd = {bx_ratio:.1} (in [1e1, 1e3]); X->B bd/bb at 5 eV = {xb_ratio:.2e} (>= 1e5); dominant channel / sigma_PR = {over_pr:.2e} (>= 1e3)"
        ),
    )
}

/// Criterion 6: B->X thermal ratio sigma(15 K)/sigma(298 K) in [1.1, 1.8].
fn criterion_6(bx: &ChannelEngine) -> Outcome {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for e_ev in [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0] {
        let eps = units::ev_to_hartree(e_ev);
        let ratio = bx.thermal_cross_section(eps, 15.0).unwrap()
            / bx.thermal_cross_section(eps, 298.0).unwrap();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    check(
        lo >= 1.1 && hi <= 1.8,
        format!("sigma(15 K)/sigma(298 K) in [{lo:.3}, {hi:.3}] over 0.5-8 eV (required within [1.1, 1.8])"),
    )
}

/// Positions of interior local minima dipping below `frac` of the
/// curve's maximum; grid sampling never hits an exact node, so nodes
/// show up as deep minima. The outermost two points at each end are
/// skipped (the endpoint bins carry one-sided density-of-states
/// estimates).
fn interior_minima(curve: &[(f64, f64)], frac: f64) -> Vec<f64> {
    let max = curve.iter().fold(0.0f64, |m, &(_, v)| m.max(v));
    let mut out = Vec::new();
    for i in 2..curve.len().saturating_sub(2) {
        let w = &curve[i - 1..=i + 1];
        if w[1].1 < w[0].1 && w[1].1 <= w[2].1 && w[1].1 < frac * max {
            out.push(w[1].0);
        }
    }
    out
}

/// Peak position within each lobe delimited by the given minima.
fn lobe_peaks(curve: &[(f64, f64)], minima: &[f64]) -> Vec<f64> {
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend_from_slice(minima);
    edges.push(f64::INFINITY);
    edges
        .windows(2)
        .map(|e| {
            curve
                .iter()
                .filter(|p| p.0 > e[0] && p.0 < e[1])
                .fold((0.0, f64::NEG_INFINITY), |acc, &(x, v)| {
                    if v > acc.1 { (x, v) } else { acc }
                })
                .0
        })
        .collect()
}

/// Criterion 7: X->B spectrum structure for nu_i = 5 vs nu_i = 0, plus
/// the reflection-principle comparison. The 0.4 eV shift is read off
/// the bound-bound sticks at the figure energy (5 eV); the node count
/// uses 12 eV, where the full dissociative window spanned by the
/// nu_i = 5 support is open.
fn criterion_7(xb: &ChannelEngine) -> Outcome {
    let eps5 = units::ev_to_hartree(5.0);
    let s5 = xb.spectrum(eps5, 5).unwrap();
    let s0 = xb.spectrum(eps5, 0).unwrap();

    // Same final level, different initial level: the stick positions
    // shift by E_i(5) - E_i(0).
    let shift = match (s5.sticks.last(), s0.sticks.last()) {
        (Some(a), Some(b)) => units::hartree_to_ev(a.0 - b.0),
        _ => return fail("expected bound-bound sticks in both spectra".into()),
    };

    let xb_wide = build_engine_to("X-B", R_BOX_ANGSTROM, GRID_POINTS, 256, 12.0);
    let eps12 = units::ev_to_hartree(12.0);
    let spec = xb_wide.spectrum(eps12, 5).unwrap();
    let minima = interior_minima(&spec.continuum, 0.05);

    let refl = xb_wide.reflection_principle_spectrum(eps12, 5).unwrap();
    let refl_minima = interior_minima(&refl, 0.05);

    // Pair up the lobes between the reflection prediction and the
    // dynamical spectrum; the reflection peaks sit at higher eps'.
    let peaks_dyn = lobe_peaks(&spec.continuum, &minima);
    let peaks_refl = lobe_peaks(&refl, &refl_minima);
    let (shifted, total) = if peaks_dyn.len() == peaks_refl.len() {
        let up = peaks_dyn
            .iter()
            .zip(&peaks_refl)
            .filter(|(d, r)| r > d)
            .count();
        (up, peaks_dyn.len())
    } else {
        (0, usize::MAX)
    };

    check(
        minima.len() == 5
            && (shift - 0.4).abs() <= 0.1
            && refl_minima.len() == 5
            && total != usize::MAX
            && 2 * shifted > total,
        format!(
            "nu_i=5 continuum has {} interior minima (= 5); stick shift {shift:.3} eV (0.4 +- 0.1); reflection minima {} (= 5); {shifted}/{} reflection lobe peaks at higher eps' (majority required)",
            minima.len(),
            refl_minima.len(),
            if total == usize::MAX { 0 } else { total }
        ),
    )
}

/// Criterion 8: internal consistency and robustness, and the full-pipeline budget.
fn criterion_8(bx: &ChannelEngine, xb: &ChannelEngine) -> Outcome {
    let eps5 = units::ev_to_hartree(5.0);
    let spec = xb.spectrum(eps5, 0).unwrap();
    let (bb, bd) = xb.total_cross_section(eps5, 0).unwrap();
    let consistency = ((spec.sigma_total_bb - bb).abs() + (spec.sigma_total_bd - bd).abs())
        / (bb + bd);
    if consistency > 1e-9 {
        return fail(format!("spectrum/scan totals differ by {consistency:.2e} relative"));
    }

    let xb_wide = build_engine("X-B", 2.0 * R_BOX_ANGSTROM, 2 * GRID_POINTS, 256);
    let (_, bd_wide) = xb_wide.total_cross_section(eps5, 0).unwrap();
    let box_dev = (bd_wide - bd).abs() / bd;

    let bx_dense = build_engine("B-X", R_BOX_ANGSTROM, GRID_POINTS, 512);
    let eps1 = units::ev_to_hartree(1.0);
    let (b1, d1) = bx.total_cross_section(eps1, 0).unwrap();
    let (b2, d2) = bx_dense.total_cross_section(eps1, 0).unwrap();
    let quad_dev = ((b1 + d1) - (b2 + d2)).abs() / (b2 + d2);

    // Full default pipeline: every channel over its default grid.
    let start = Instant::now();
    let mut sink = 0.0;
    for name in ["X-B", "B-X", "A-B", "B-A"] {
        let engine = match name {
            "X-B" => None,
            "B-X" => None,
            _ => Some(build_engine(name, R_BOX_ANGSTROM, GRID_POINTS, 256)),
        };
        let engine = match (name, &engine) {
            ("X-B", _) => xb,
            ("B-X", _) => bx,
            (_, Some(e)) => e,
            _ => unreachable!(),
        };
        let start_ev = if engine.channel.acceptor.name == "Ne" { 3.0 } else { 0.01 };
        let mut e_ev = start_ev;
        while e_ev <= 8.0 + 1e-9 {
            let (a, b) = engine.total_cross_section(units::ev_to_hartree(e_ev), 0).unwrap();
            sink += a + b;
            e_ev += 0.01;
        }
    }
    let pipeline = start.elapsed().as_secs_f64();
    assert!(sink.is_finite());

    check(
        box_dev < 0.02 && quad_dev < 1e-5 && pipeline < 600.0,
        format!(
            "spectrum/scan totals agree to {consistency:.2e} (< 1e-9); doubling R_box moves X->B sigma_bd by {:.2}% (< 2%); doubling quadrature moves sigma by {quad_dev:.2e} (< 1e-5); 4-channel default pipeline in {pipeline:.0} s (< 600)",
            100.0 * box_dev
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let bx = build_engine("B-X", R_BOX_ANGSTROM, GRID_POINTS, 256);
    let xb = build_engine("X-B", R_BOX_ANGSTROM, GRID_POINTS, 256);

    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "Morse oracle agreement", criterion_1()),
        (2, "orthonormality suite", criterion_2()),
        (3, "Milne roundtrip", criterion_3()),
        (4, "X->B threshold", criterion_4(&xb)),
        (5, "dominance orderings", criterion_5(&bx, &xb)),
        (6, "temperature factor", criterion_6(&bx)),
        (7, "spectrum structure", criterion_7(&xb)),
        (8, "consistency and robustness", criterion_8(&bx, &xb)),
    ];

    let mut failures = Vec::new();
    for (n, name, outcome) in &results {
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {n} ({name}): {}", outcome.detail);
        if !outcome.passed {
            failures.push(format!("criterion {n} ({name}): {}", outcome.detail));
        }
    }
    assert!(
        failures.is_empty(),
        "{} acceptance criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

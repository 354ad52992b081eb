//! Sine discrete variable representation of the boxed vibrational
//! Hamiltonian. Serves as the brute-force oracle for the analytic Morse
//! machinery; production code paths never depend on it.

use crate::error::Result;
use crate::linalg::{sym_eigen, tridiag_eigenvalues, LdltFactor, SymEigen};
use crate::morse::MorseSurface;

/// Grid points x_i = i·Δx, i = 1..=n, Δx = L/(n+1); wavefunctions vanish
/// at 0 and L.
pub fn dvr_points(l: f64, n: usize) -> Vec<f64> {
    let dx = l / (n + 1) as f64;
    (1..=n).map(|i| i as f64 * dx).collect()
}

/// Exact sine-basis kinetic energy matrix on (0, L) with n grid points
/// (Colbert-Miller), full n×n storage.
pub fn kinetic_matrix(mu: f64, l: f64, n: usize) -> Vec<f64> {
    let m = (n + 1) as f64;
    let pref = std::f64::consts::PI.powi(2) / (4.0 * mu * l * l);
    let mut t = vec![0.0f64; n * n];
    for i in 1..=n {
        for j in 1..=i {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let val = if i == j {
                let s = (std::f64::consts::PI * i as f64 / m).sin();
                pref * ((2.0 * m * m + 1.0) / 3.0 - 1.0 / (s * s))
            } else {
                let sm = (std::f64::consts::PI * (i - j) as f64 / (2.0 * m)).sin();
                let sp = (std::f64::consts::PI * (i + j) as f64 / (2.0 * m)).sin();
                sign * pref * (1.0 / (sm * sm) - 1.0 / (sp * sp))
            };
            t[(i - 1) + (j - 1) * n] = val;
            t[(j - 1) + (i - 1) * n] = val;
        }
    }
    t
}

/// Dense DVR Hamiltonian of a surface on (0, R_box] with n points.
pub fn sine_dvr_hamiltonian(surface: &MorseSurface, r_box: f64, n: usize) -> Vec<f64> {
    let mut h = kinetic_matrix(surface.mu, r_box, n);
    for (i, &x) in dvr_points(r_box, n).iter().enumerate() {
        h[i + i * n] += surface.potential(x);
    }
    h
}

/// Full eigendecomposition of the DVR Hamiltonian (test oracle).
pub struct DvrEigen {
    pub points: Vec<f64>,
    /// Eigenvalues above the potential minimum, ascending.
    pub values: Vec<f64>,
    /// Eigenvectors, column-major; column k belongs to values[k].
    pub vectors: Vec<f64>,
}

pub fn dvr_oracle(surface: &MorseSurface, r_box: f64, n: usize) -> Result<DvrEigen> {
    assert!(n >= 500, "oracle contract requires n >= 500");
    let h = sine_dvr_hamiltonian(surface, r_box, n);
    let SymEigen { values, vectors } = sym_eigen(h, n, true)?;
    Ok(DvrEigen {
        points: dvr_points(r_box, n),
        values,
        vectors: vectors.unwrap(),
    })
}

/// Number of DVR eigenvalues strictly below `threshold` (relative to the
/// potential minimum), by Sylvester inertia of H − threshold·I.
pub fn dvr_count_below(surface: &MorseSurface, r_box: f64, n: usize, threshold: f64) -> Result<usize> {
    let mut h = sine_dvr_hamiltonian(surface, r_box, n);
    for i in 0..n {
        h[i + i * n] -= threshold;
    }
    Ok(LdltFactor::new(h, n)?.negative_count())
}

/// Energy allowance for the box-confinement shift of a threshold level:
/// a state bound by less than this in free space is pushed above the
/// dissociation limit by the wall at R_box (the exterior tail must fit a
/// quarter wave into R_box − R_e). Used when comparing DVR counts against
/// the analytic bound-state count.
pub fn box_confinement_allowance(surface: &MorseSurface, r_box: f64) -> f64 {
    let l = r_box - surface.r_e;
    (std::f64::consts::PI / l).powi(2) / (2.0 * surface.mu)
}

/// Lowest `k` DVR eigenvalues by shift-invert Lanczos with full
/// reorthogonalization; the Hamiltonian is positive definite, so a zero
/// shift maps the bottom of the spectrum to the dominant eigenvalues of
/// H⁻¹. Avoids the O(n³) full decomposition at the oracle resolution.
pub fn dvr_lowest_eigenvalues(
    surface: &MorseSurface,
    r_box: f64,
    n: usize,
    k: usize,
) -> Result<Vec<f64>> {
    assert!(k >= 1 && k < n);
    let h = sine_dvr_hamiltonian(surface, r_box, n);
    let factor = LdltFactor::new(h, n)?;

    let m = (6 * k + 40).min(n); // generous Krylov size for shift-invert
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut alpha = Vec::with_capacity(m);
    let mut beta: Vec<f64> = Vec::with_capacity(m);

    // Deterministic pseudo-random start vector with broad support.
    let mut v: Vec<f64> = (0..n)
        .map(|i| ((i as f64 + 1.0) * 12.9898).sin() * 43758.5453 % 1.0 + 0.1)
        .collect();
    normalize(&mut v);

    for j in 0..m {
        let mut w = v.clone();
        factor.solve_in_place(&mut w)?;
        let a_j = dot(&v, &w);
        alpha.push(a_j);
        // w -= a_j v + beta_{j-1} v_{j-1}
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= a_j * vi;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (wi, pi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= b * pi;
            }
        }
        basis.push(v.clone());
        // full reorthogonalization keeps the basis clean without ghosts
        for q in &basis {
            let c = dot(q, &w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
        let b_j = dot(&w, &w).sqrt();
        if b_j < 1e-14 || j == m - 1 {
            break;
        }
        beta.push(b_j);
        for wi in w.iter_mut() {
            *wi /= b_j;
        }
        v = w;
    }

    let theta = tridiag_eigenvalues(&alpha, &beta[..alpha.len() - 1])?;
    // largest theta = 1/lambda correspond to the smallest lambda
    let mut lambdas: Vec<f64> = theta
        .iter()
        .rev()
        .take(k)
        .map(|&t| 1.0 / t)
        .collect();
    lambdas.sort_by(f64::total_cmp);
    Ok(lambdas)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    for x in v.iter_mut() {
        *x /= n;
    }
}

//! Strong and very strong ellipticity constants.
//!
//! `alpha_vse` is the minimum of `L M:M` over unit symmetric matrices, i.e.
//! the smallest Mandel eigenvalue.  `alpha_se` is the minimum over unit
//! rank-one matrices `a (x) b`; for fixed `b` the minimum over `a` is the
//! smallest eigenvalue of the acoustic matrix `A[L,b]`, which makes an
//! alternating eigen-iteration natural.  For isotropic tensors both constants
//! have closed forms which the numeric paths must reproduce.

use nalgebra::Vector3;
use serde::Serialize;

use crate::tensors::{ElasticTensor, IsotropicPhase};

/// Stopping tolerance of the alternating iteration (change in objective).
pub const ALTERNATING_TOL: f64 = 1e-12;
/// Iteration cap per start of the alternating iteration.
pub const MAX_ITERATIONS: usize = 500;
/// Number of Fibonacci-sphere starting directions.
pub const MULTISTART_POINTS: usize = 32;
/// A computed `alpha_se` within this distance of zero counts as zero.
pub const ZERO_TOL: f64 = 1e-8;

/// `min(mu, 2 mu + lambda)`.
pub fn alpha_se_isotropic(p: &IsotropicPhase) -> f64 {
    p.mu.min(2.0 * p.mu + p.lambda)
}

/// `min(mu, 2 mu + 3 lambda)`.
pub fn alpha_vse_isotropic(p: &IsotropicPhase) -> f64 {
    p.mu.min(2.0 * p.mu + 3.0 * p.lambda)
}

/// Result of the rank-one minimization.
#[derive(Debug, Clone, Serialize)]
pub struct EllipticityReport {
    pub alpha_se: f64,
    pub argmin_a: [f64; 3],
    pub argmin_b: [f64; 3],
    /// Total alternating iterations across all starts.
    pub iterations: usize,
    /// False when some start hit the iteration cap before the tolerance.
    pub converged: bool,
}

impl EllipticityReport {
    pub fn argmin_a_vec(&self) -> Vector3<f64> {
        Vector3::from(self.argmin_a)
    }

    pub fn argmin_b_vec(&self) -> Vector3<f64> {
        Vector3::from(self.argmin_b)
    }
}

/// Smallest eigenvalue (and unit eigenvector) of a symmetric 3x3 matrix.
fn min_eig3(m: &nalgebra::Matrix3<f64>) -> (f64, Vector3<f64>) {
    let se = m.symmetric_eigen();
    let mut best = 0;
    for k in 1..3 {
        if se.eigenvalues[k] < se.eigenvalues[best] {
            best = k;
        }
    }
    (se.eigenvalues[best], se.eigenvectors.column(best).into())
}

/// As `acoustic_matrix` but contracting over the outer indices:
/// `B[L,a]_{jl} = L_{ijkl} a_i a_k`.  By major symmetry this equals the
/// acoustic matrix of the transposed pairing and drives the `b`-update.
fn outer_acoustic(t: &ElasticTensor, a: &Vector3<f64>) -> nalgebra::Matrix3<f64> {
    let mut m = nalgebra::Matrix3::zeros();
    for j in 0..3 {
        for l in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for k in 0..3 {
                    s += t.entry(i, j, k, l) * a[i] * a[k];
                }
            }
            m[(j, l)] = s;
        }
    }
    (m + m.transpose()) * 0.5
}

fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Global minimum of `L (a x b):(a x b)` over unit `a`, `b` by multistart
/// alternating smallest-eigenvalue iteration.
pub fn alpha_se_numeric(t: &ElasticTensor) -> EllipticityReport {
    alpha_se_numeric_with(t, ALTERNATING_TOL, MAX_ITERATIONS)
}

pub fn alpha_se_numeric_with(t: &ElasticTensor, tol: f64, max_iter: usize) -> EllipticityReport {
    let mut best: Option<(f64, Vector3<f64>, Vector3<f64>)> = None;
    let mut total_iter = 0;
    let mut converged = true;

    for b0 in fibonacci_sphere(MULTISTART_POINTS) {
        let mut b = b0;
        let (mut value, mut a) = min_eig3(&t.acoustic_matrix(&b));
        let mut settled = false;
        for _ in 0..max_iter {
            total_iter += 1;
            let (_, b_new) = min_eig3(&outer_acoustic(t, &a));
            b = b_new;
            let (v_new, a_new) = min_eig3(&t.acoustic_matrix(&b));
            a = a_new;
            let change = (value - v_new).abs();
            value = v_new;
            if change <= tol {
                settled = true;
                break;
            }
        }
        converged &= settled;
        if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
            best = Some((value, a, b));
        }
    }

    let (alpha_se, a, b) = best.expect("at least one start");
    EllipticityReport {
        alpha_se,
        argmin_a: a.into(),
        argmin_b: b.into(),
        iterations: total_iter,
        converged,
    }
}

/// Minimum of the stiffness quadratic form over nonzero symmetric matrices,
/// measured against the engineering norm (diagonal entries plus each
/// off-diagonal shear counted once).  For an isotropic phase with `mu > 0`
/// this is exactly `min{mu, 2 mu + 3 lambda}`, matching
/// [`alpha_vse_isotropic`]; the orthonormal-basis (Mandel) minimum would
/// instead report `2 mu` on the shear branch.
///
/// Concretely this solves the generalized eigenvalue problem `C v = alpha N v`
/// with `N = diag(1,1,1,2,2,2)` in Mandel coordinates, via the congruent
/// symmetric matrix `N^{-1/2} C N^{-1/2}`.
pub fn alpha_vse_numeric(t: &ElasticTensor) -> f64 {
    let inv_sqrt = std::f64::consts::FRAC_1_SQRT_2;
    let mut scaled = *t.mandel();
    for p in 0..6 {
        for q in 0..6 {
            let w = if p >= 3 { inv_sqrt } else { 1.0 } * if q >= 3 { inv_sqrt } else { 1.0 };
            scaled[(p, q)] *= w;
        }
    }
    scaled
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |a, &x| a.min(x))
}

/// Sign classification of a computed ellipticity constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Zero,
    Negative,
}

/// Sign of `alpha` with the dead band `[-tol, tol]` collapsing to zero.
pub fn sign_with_tol(alpha: f64, tol: f64) -> Sign {
    if alpha > tol {
        Sign::Positive
    } else if alpha < -tol {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

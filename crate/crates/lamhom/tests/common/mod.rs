//! Shared helpers for the integration suites.

use lamhom::tensors::ElasticTensor;
use nalgebra::Vector3;

fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

fn min_acoustic_eig(t: &ElasticTensor, b: &Vector3<f64>) -> f64 {
    t.acoustic_matrix(b).symmetric_eigenvalues().min()
}

/// Strong-ellipticity constant by brute-force grid search over the direction
/// sphere, followed by four local zoom passes.
///
/// This is a deliberately independent route from the library's alternating
/// eigenvalue iteration: the constant equals the minimum over unit `b` of the
/// smallest acoustic eigenvalue, so a dense scan in spherical coordinates plus
/// refinement pins it to well below 1e-6 for order-one tensors.
pub fn alpha_se_grid(t: &ElasticTensor) -> f64 {
    let (nt, np) = (90usize, 180usize);
    let mut best = f64::INFINITY;
    let mut at = (0.0f64, 0.0f64);
    for i in 0..=nt {
        let theta = std::f64::consts::PI * i as f64 / nt as f64;
        for j in 0..np {
            let phi = std::f64::consts::TAU * j as f64 / np as f64;
            let v = min_acoustic_eig(t, &direction(theta, phi));
            if v < best {
                best = v;
                at = (theta, phi);
            }
        }
    }

    let mut half = std::f64::consts::PI / nt as f64;
    for _ in 0..4 {
        let (ct, cp) = at;
        for i in 0..=24 {
            let theta = ct - half + 2.0 * half * i as f64 / 24.0;
            for j in 0..=24 {
                let phi = cp - half + 2.0 * half * j as f64 / 24.0;
                let v = min_acoustic_eig(t, &direction(theta, phi));
                if v < best {
                    best = v;
                    at = (theta, phi);
                }
            }
        }
        half /= 8.0;
    }
    best
}

/// Largest absolute entry difference between two tensors in the matrix
/// representation.
pub fn max_entry_diff(a: &ElasticTensor, b: &ElasticTensor) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    worst = worst.max((a.entry(i, j, k, l) - b.entry(i, j, k, l)).abs());
                }
            }
        }
    }
    worst
}

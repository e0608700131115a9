//! Translation-method certificates for weak coercivity.
//!
//! Adding the null Lagrangian `D : Cof(M)` to the energy density does not
//! change the integral over admissible fields, so if the translated density
//! `L(y) M:M + D:Cof(M)` is pointwise nonnegative for some constant matrix
//! `D`, the functional coercivity constant of `L` is nonnegative.  The
//! translated density is a quadratic form on 3x3 matrices; this module builds
//! its 9x9 matrix, checks per-layer positive semidefiniteness, computes the
//! admissible interval for scalar translations `D = d I`, and searches for a
//! feasible `D` when none is supplied.
//!
//! The search exploits concavity: the smallest eigenvalue of an affine matrix
//! function of `D` is concave in `D`, hence so is its minimum over layers, and
//! any line restriction is unimodal.

use nalgebra::{Matrix3, SMatrix, Vector3};
use serde::Serialize;

use crate::tensors::{cofactor, ElasticTensor, IsotropicPhase, LaminateProfile};

/// Basis order of the translated quadratic form:
/// `M11, M22, M33, M12, M21, M13, M31, M23, M32` (zero-based index pairs).
pub const TRANSLATED_BASIS: [(usize, usize); 9] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (0, 1),
    (1, 0),
    (0, 2),
    (2, 0),
    (1, 2),
    (2, 1),
];

/// Relative tolerance for positive-semidefiniteness verdicts.
pub const PSD_REL_TOL: f64 = 1e-10;

fn basis_matrix(p: usize) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    m[TRANSLATED_BASIS[p]] = 1.0;
    m
}

/// The translated density `L M:M + D:Cof(M)` as a symmetric 9x9 matrix in the
/// [`TRANSLATED_BASIS`] order, obtained by polarizing the quadratic form.
pub fn translated_form_matrix(t: &ElasticTensor, d: &Matrix3<f64>) -> SMatrix<f64, 9, 9> {
    let f = |m: &Matrix3<f64>| t.quadratic_form(m) + d.dot(&cofactor(m));
    let mut q = SMatrix::<f64, 9, 9>::zeros();
    let singles: Vec<f64> = (0..9).map(|p| f(&basis_matrix(p))).collect();
    for p in 0..9 {
        q[(p, p)] = singles[p];
        for r in (p + 1)..9 {
            let v = 0.5 * (f(&(basis_matrix(p) + basis_matrix(r))) - singles[p] - singles[r]);
            q[(p, r)] = v;
            q[(r, p)] = v;
        }
    }
    q
}

/// Smallest eigenvalue of the symmetric 9x9 form.
pub fn min_eigenvalue(q: &SMatrix<f64, 9, 9>) -> f64 {
    q.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |a, &x| a.min(x))
}

/// Admissible scalar translations `D = d I` for a set of isotropic phases.
///
/// Pointwise nonnegativity of the translated density holds exactly for
/// `-(2 mu_i + 3 lambda_i) <= d <= 4 mu_i` in every phase `i`; the theorem on
/// positive periodic coercivity additionally needs `d >= 0`.  Both variants
/// are reported; an interval with `lo > hi` is empty.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalarInterval {
    /// Lower end including the `d >= 0` clamp.
    pub lo: f64,
    pub hi: f64,
    /// Lower end without the clamp (pointwise condition only).
    pub signed_lo: f64,
}

impl ScalarInterval {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn signed_is_empty(&self) -> bool {
        self.signed_lo > self.hi
    }
}

pub fn scalar_interval(phases: &[IsotropicPhase]) -> ScalarInterval {
    let signed_lo = phases
        .iter()
        .map(|p| -(2.0 * p.mu + 3.0 * p.lambda))
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = phases
        .iter()
        .map(|p| 4.0 * p.mu)
        .fold(f64::INFINITY, f64::min);
    ScalarInterval {
        lo: signed_lo.max(0.0),
        hi,
        signed_lo,
    }
}

/// Outcome of a per-layer positive-semidefiniteness check of the translated form.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateOutcome {
    pub d: [[f64; 3]; 3],
    pub per_layer_min_eig: Vec<f64>,
    pub feasible: bool,
}

/// Checks `L_k M:M + D:Cof(M) >= 0` for every layer `k` of the profile, with
/// eigenvalues down to `-tol * scale` accepted as semidefinite.
pub fn certify_weak_coercivity(
    profile: &LaminateProfile,
    d: &Matrix3<f64>,
    psd_tol: f64,
) -> CertificateOutcome {
    let mut eigs = Vec::with_capacity(profile.layers().len());
    let mut feasible = true;
    for layer in profile.layers() {
        let q = translated_form_matrix(&layer.tensor, d);
        let scale = q.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let e = min_eigenvalue(&q);
        feasible &= e >= -psd_tol * scale;
        eigs.push(e);
    }
    CertificateOutcome {
        d: matrix_rows(d),
        per_layer_min_eig: eigs,
        feasible,
    }
}

fn matrix_rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    let mut rows = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            rows[i][j] = m[(i, j)];
        }
    }
    rows
}

/// Result of the feasibility search over translations.
#[derive(Debug, Clone, Serialize)]
pub struct TranslationSearch {
    /// Best translation found (diagonal, unless full refinement ran).
    pub d: [[f64; 3]; 3],
    /// `min` over layers of the smallest translated-form eigenvalue at `d`.
    pub objective: f64,
    pub feasible: bool,
    /// True when the full-matrix subgradient polish improved on the diagonal stage.
    pub refined_full: bool,
}

fn objective(profile: &LaminateProfile, d: &Matrix3<f64>) -> f64 {
    profile
        .layers()
        .iter()
        .map(|l| min_eigenvalue(&translated_form_matrix(&l.tensor, d)))
        .fold(f64::INFINITY, f64::min)
}

/// Maximizes the worst-layer smallest eigenvalue over diagonal translations
/// `D = diag(d1, d2, d3)` by cyclic ternary search per coordinate (the
/// objective is concave, so each line restriction is unimodal), then polishes
/// over full matrices with a supergradient ascent.  Feasibility is judged
/// against `psd_tol` relative to the form scale.
pub fn search_translation(profile: &LaminateProfile, psd_tol: f64) -> TranslationSearch {
    let radius = profile
        .layers()
        .iter()
        .map(|l| 4.0 * l.tensor.scale())
        .fold(0.0f64, f64::max)
        + 1.0;

    // Seed candidates: zero, and the scalar-interval data when phases are isotropic.
    let mut seeds = vec![Vector3::zeros()];
    if let Some(phases) = profile.isotropic_phases() {
        let iv = scalar_interval(&phases);
        for d in [iv.lo, iv.hi, 0.5 * (iv.lo + iv.hi), iv.signed_lo] {
            if d.is_finite() {
                seeds.push(Vector3::new(d, d, d));
            }
        }
    }

    let diag_obj = |v: &Vector3<f64>| objective(profile, &Matrix3::from_diagonal(v));

    let mut best = seeds[0];
    let mut best_val = diag_obj(&best);
    for s in &seeds[1..] {
        let v = diag_obj(s);
        if v > best_val {
            best = *s;
            best_val = v;
        }
    }

    for _pass in 0..40 {
        let before = best_val;
        for c in 0..3 {
            // ternary search on the unimodal line restriction
            let (mut lo, mut hi) = (best[c] - radius, best[c] + radius);
            for _ in 0..90 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                let mut p1 = best;
                let mut p2 = best;
                p1[c] = m1;
                p2[c] = m2;
                if diag_obj(&p1) < diag_obj(&p2) {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            let mut cand = best;
            cand[c] = 0.5 * (lo + hi);
            let v = diag_obj(&cand);
            if v > best_val {
                best = cand;
                best_val = v;
            }
        }
        if best_val - before <= 1e-13 {
            break;
        }
    }

    let scale = profile
        .layers()
        .iter()
        .map(|l| {
            translated_form_matrix(&l.tensor, &Matrix3::from_diagonal(&best))
                .iter()
                .fold(1.0f64, |a, x| a.max(x.abs()))
        })
        .fold(1.0f64, f64::max);

    let mut d_full = Matrix3::from_diagonal(&best);
    let mut refined = false;
    if best_val < psd_tol * scale {
        // supergradient ascent over all nine entries of D
        let (d_new, v_new) = supergradient_polish(profile, &d_full, best_val);
        if v_new > best_val {
            d_full = d_new;
            best_val = v_new;
            refined = true;
        }
    }

    TranslationSearch {
        d: matrix_rows(&d_full),
        objective: best_val,
        feasible: best_val >= -psd_tol * scale,
        refined_full: refined,
    }
}

/// One supergradient of the concave map `D -> min eig of the worst layer`:
/// with `v` the minimizing eigenvector, the derivative against `dD` is
/// `v^T dQ(dD) v`, and `Q` is affine in `D`.
fn supergradient_polish(
    profile: &LaminateProfile,
    start: &Matrix3<f64>,
    start_val: f64,
) -> (Matrix3<f64>, f64) {
    let mut d = *start;
    let mut val = start_val;
    let mut step = 0.25;
    for _ in 0..200 {
        // worst layer and its minimizing eigenvector
        let mut worst: Option<(f64, SMatrix<f64, 9, 9>, usize)> = None;
        for (k, layer) in profile.layers().iter().enumerate() {
            let q = translated_form_matrix(&layer.tensor, &d);
            let e = min_eigenvalue(&q);
            if worst.as_ref().is_none_or(|(w, _, _)| e < *w) {
                worst = Some((e, q, k));
            }
        }
        let (_, q, k) = worst.unwrap();
        let se = q.symmetric_eigen();
        let mut idx = 0;
        for i in 1..9 {
            if se.eigenvalues[i] < se.eigenvalues[idx] {
                idx = i;
            }
        }
        let v = se.eigenvectors.column(idx).clone_owned();
        // gradient of v^T Q(D) v in D: Q is affine, entry (a,b) weight is the
        // polarized cofactor coefficient; recover it by finite structure:
        // dQ/dD_{ab} is D-independent, evaluate via unit directions.
        let tensor = &profile.layers()[k].tensor;
        let mut grad = Matrix3::zeros();
        let q0 = translated_form_matrix(tensor, &Matrix3::zeros());
        for a in 0..3 {
            for b in 0..3 {
                let mut e = Matrix3::zeros();
                e[(a, b)] = 1.0;
                let dq = translated_form_matrix(tensor, &e) - q0;
                grad[(a, b)] = (dq * v).dot(&v);
            }
        }
        let norm = grad.norm();
        if norm < 1e-15 {
            break;
        }
        let cand = d + grad * (step / norm);
        let cand_val = objective(profile, &cand);
        if cand_val > val {
            d = cand;
            val = cand_val;
        } else {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    (d, val)
}

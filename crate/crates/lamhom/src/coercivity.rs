//! Sufficient conditions for positivity of the periodic coercivity constant,
//! and the rank-one equality certificate that detects when a translated
//! laminate bound can actually touch zero.
//!
//! For a scalar translation weight `d`, every isotropic phase carries two
//! small quadratic forms: a volumetric one on the diagonal strains,
//!
//! ```text
//! P = [ lambda + 2 mu   lambda + d/2   lambda + d/2 ]
//!     [ lambda + d/2    lambda + 2 mu  lambda + d/2 ]
//!     [ lambda + d/2    lambda + d/2   lambda + 2 mu ]
//! ```
//!
//! and a shear one on off-diagonal pairs, `Q = [[mu, mu - d/2], [mu - d/2, mu]]`.
//! Their kernels decide which phases sit on the boundary of the admissible
//! translation interval, and — together with a declared geometric arrangement
//! of the degenerate phases — whether the periodic coercivity constant is
//! strictly positive rather than merely nonnegative.

use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::tensors::{cofactor, Axis, ElasticTensor, IsotropicPhase, LaminateProfile};
use crate::translation::scalar_interval;
use crate::{Error, Result};

/// Relative tolerance for the boundary-membership tests in [`classify_phases`].
pub const CLASS_REL_TOL: f64 = 1e-12;

/// Relative eigenvalue tolerance when testing P and Q for positive
/// semidefiniteness.
pub const PSD_REL_TOL: f64 = 1e-10;

/// Where one phase sits relative to the admissible translation interval at a
/// given weight `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseClass {
    /// `d = 4 mu`: the shear form `Q` degenerates (it becomes `mu (a-b)^2`).
    QBoundary,
    /// `2 mu + 3 lambda = -d`: the volumetric form `P` degenerates on the
    /// hydrostatic direction `(1,1,1)`.
    PBoundary,
    /// Both forms are strictly positive definite.
    Interior,
}

/// Per-phase classification at a fixed translation weight.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseClassification {
    pub d: f64,
    pub classes: Vec<PhaseClass>,
}

impl PhaseClassification {
    pub fn indices_of(&self, class: PhaseClass) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == class)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains(&self, class: PhaseClass) -> bool {
        self.classes.contains(&class)
    }
}

/// Classifies each phase by exact boundary membership (relative tolerance
/// [`CLASS_REL_TOL`]); a phase touching both boundaries at once would violate
/// strong ellipticity, so shear-boundary membership is tested first.
pub fn classify_phases(phases: &[IsotropicPhase], d: f64) -> PhaseClassification {
    let classes = phases
        .iter()
        .map(|p| {
            let scale = 1.0f64
                .max(d.abs())
                .max(4.0 * p.mu.abs())
                .max((2.0 * p.mu + 3.0 * p.lambda).abs());
            if (d - 4.0 * p.mu).abs() <= CLASS_REL_TOL * scale {
                PhaseClass::QBoundary
            } else if (2.0 * p.mu + 3.0 * p.lambda + d).abs() <= CLASS_REL_TOL * scale {
                PhaseClass::PBoundary
            } else {
                PhaseClass::Interior
            }
        })
        .collect();
    PhaseClassification { d, classes }
}

/// Volumetric form on diagonal strain triples.
pub fn p_matrix(phase: &IsotropicPhase, d: f64) -> Matrix3<f64> {
    let on = phase.lambda + 2.0 * phase.mu;
    let off = phase.lambda + 0.5 * d;
    Matrix3::new(on, off, off, off, on, off, off, off, on)
}

/// Shear form on one off-diagonal strain pair.
pub fn q_matrix(phase: &IsotropicPhase, d: f64) -> Matrix2<f64> {
    let off = phase.mu - 0.5 * d;
    Matrix2::new(phase.mu, off, off, phase.mu)
}

/// Declared geometric arrangement of the degenerate phases.  This is metadata
/// supplied by the caller, not computed geometry: the sufficiency argument
/// needs to know how the volumetric-boundary regions sit inside the cell, and
/// only the caller knows the actual microstructure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeometryCase {
    /// Every volumetric-boundary region contains matching rectangles on a
    /// pair of opposite cell faces.  Laminate layers always do: each layer is
    /// a full slab through the cell.
    #[serde(rename = "case1")]
    OppositeFaces,
    /// Every volumetric-boundary region shares an interface of positive area
    /// with another phase region.
    #[serde(rename = "case2")]
    PositiveContact,
    /// No geometric information declared.
    #[serde(rename = "none")]
    None,
}

impl GeometryCase {
    /// Default used by input schemas when the field is omitted.
    pub fn default_none() -> Self {
        GeometryCase::None
    }
}

/// Verdict of the sufficiency test: either the hypotheses hold and the
/// periodic coercivity constant is provably positive, or nothing is claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoercivityVerdict {
    GuaranteedPositive,
    Inconclusive,
}

/// Full record of the sufficiency test.
#[derive(Debug, Clone, Serialize)]
pub struct PerCoercivityVerdict {
    pub d: f64,
    pub classification: Vec<PhaseClass>,
    pub p_min_eigenvalues: Vec<f64>,
    pub q_min_eigenvalues: Vec<f64>,
    pub geometry_case: GeometryCase,
    pub verdict: CoercivityVerdict,
    /// Human-readable reason when the verdict is inconclusive.
    pub detail: String,
}

/// Tests the sufficient conditions for strict positivity of the periodic
/// coercivity constant: `d >= 0` inside the signed admissible interval (so
/// all `P` and `Q` are positive semidefinite), and a declared geometry
/// whenever some phase sits on the volumetric boundary.  The function never
/// claims positivity outside these hypotheses.
pub fn lambda_per_sufficient(
    phases: &[IsotropicPhase],
    d: f64,
    geometry: GeometryCase,
) -> PerCoercivityVerdict {
    let classification = classify_phases(phases, d);
    let mut p_min = Vec::with_capacity(phases.len());
    let mut q_min = Vec::with_capacity(phases.len());
    let mut obstacles: Vec<String> = Vec::new();

    for (k, phase) in phases.iter().enumerate() {
        let p = p_matrix(phase, d);
        let q = q_matrix(phase, d);
        let pe = p.symmetric_eigenvalues().min();
        let qe = q.symmetric_eigenvalues().min();
        let p_scale = p.abs().max().max(1.0);
        let q_scale = q.abs().max().max(1.0);
        if pe < -PSD_REL_TOL * p_scale {
            obstacles.push(format!(
                "P of phase {k} is indefinite (min eigenvalue {pe:.3e})"
            ));
        }
        if qe < -PSD_REL_TOL * q_scale {
            obstacles.push(format!(
                "Q of phase {k} is indefinite (min eigenvalue {qe:.3e})"
            ));
        }
        p_min.push(pe);
        q_min.push(qe);
    }

    if d < 0.0 {
        obstacles.push(format!("translation weight d = {d} is negative"));
    }
    let interval = scalar_interval(phases);
    if d < interval.signed_lo - 1e-12 || d > interval.hi + 1e-12 {
        obstacles.push(format!(
            "d = {d} lies outside the signed admissible interval [{:.6}, {:.6}]",
            interval.signed_lo, interval.hi
        ));
    }
    if classification.contains(PhaseClass::PBoundary) && geometry == GeometryCase::None {
        obstacles
            .push("a phase sits on the volumetric boundary but no geometry is declared".into());
    }

    let verdict = if obstacles.is_empty() {
        CoercivityVerdict::GuaranteedPositive
    } else {
        CoercivityVerdict::Inconclusive
    };
    PerCoercivityVerdict {
        d,
        classification: classification.classes,
        p_min_eigenvalues: p_min,
        q_min_eigenvalues: q_min,
        geometry_case: geometry,
        verdict,
        detail: obstacles.join("; "),
    }
}

/// Frobenius rank-one defect `|Cof(M)| / |M|^2`; zero exactly when `M` has
/// rank at most one.
pub fn rank_one_defect(m: &Matrix3<f64>) -> f64 {
    cofactor(m).norm() / m.norm_squared()
}

fn require_rank_one(m: &Matrix3<f64>) -> Result<()> {
    if m.norm_squared() <= f64::MIN_POSITIVE {
        return Err(Error::InvalidInput("rank-one test matrix is zero".into()));
    }
    let defect = rank_one_defect(m);
    if defect > 1e-10 {
        return Err(Error::NotRankOne { defect });
    }
    Ok(())
}

/// Minor `det` of `l` with row `i` and column `j` removed (no sign factor).
fn minor(l: &Matrix3<f64>, i: usize, j: usize) -> f64 {
    let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
    let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
    l[(rows[0], cols[0])] * l[(rows[1], cols[1])] - l[(rows[0], cols[1])] * l[(rows[1], cols[0])]
}

fn acoustic_along_x1(t: &ElasticTensor) -> Result<(Matrix3<f64>, f64)> {
    let l = t.acoustic_matrix(&Vector3::x());
    let det = l.determinant();
    if det.abs() <= 1e-14 * l.norm().powi(3).max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidInput(
            "acoustic matrix along the layering axis is singular".into(),
        ));
    }
    Ok((l, det))
}

/// The three bracketed combinations entering the lower bound: the stress
/// components through the layering plane, shifted by the translation weight.
fn brackets(t: &ElasticTensor, d: f64, m: &Matrix3<f64>) -> [f64; 3] {
    let s = t.apply(m);
    [
        s[(0, 0)] + 0.5 * d * (m[(1, 1)] + m[(2, 2)]),
        s[(1, 0)] - 0.5 * d * m[(0, 1)],
        s[(2, 0)] - 0.5 * d * m[(0, 2)],
    ]
}

/// The pointwise lower bound `Q(M)`: the translated energy a layer must spend
/// on any gradient whose tangential part agrees with `M`.  Evaluated from the
/// minors of the acoustic matrix along axis 1.
pub fn q_of_m(t: &ElasticTensor, d: f64, m: &Matrix3<f64>) -> Result<f64> {
    let (l, det) = acoustic_along_x1(t)?;
    let [r1, r2, r3] = brackets(t, d, m);
    Ok(
        (minor(&l, 0, 0) * r1 * r1 + minor(&l, 1, 1) * r2 * r2 + minor(&l, 2, 2) * r3 * r3
            - 2.0 * minor(&l, 0, 1) * r1 * r2
            + 2.0 * minor(&l, 0, 2) * r1 * r3
            - 2.0 * minor(&l, 1, 2) * r2 * r3)
            / det,
    )
}

/// Verdict of the rank-one equality certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LossVerdict {
    /// Every pointwise and integral equality holds: the homogenized energy of
    /// this rank-one direction can reach the translated lower bound, so a
    /// loss of strong ellipticity at `M` is not excluded.
    #[serde(rename = "loss_possible")]
    LossPossible,
    /// At least one equality fails: the bound is strict at `M`.
    #[serde(rename = "no_loss_at_M")]
    NoLossAtM,
}

/// Result of checking, layer by layer, whether the translated bound is tight
/// in the rank-one direction `M`.
#[derive(Debug, Clone, Serialize)]
pub struct Rank1LossCertificate {
    pub m: [[f64; 3]; 3],
    pub d: f64,
    /// `|L M : M - Q(M)|` per layer (absolute values).
    pub layer_residuals: Vec<f64>,
    /// Residuals of the three fraction-weighted integral equalities.
    pub equation_residuals: [f64; 3],
    pub verdict: LossVerdict,
}

/// Checks the equality system characterizing rank-one directions along which
/// the homogenized tensor can lose strong ellipticity: the pointwise equality
/// `L M : M = Q(M)` in every layer, plus three integral equalities coupling
/// the layers.  All residuals are compared at relative tolerance `loss_tol`.
pub fn rank1_loss_certificate(
    profile: &LaminateProfile,
    d: f64,
    m: &Matrix3<f64>,
    loss_tol: f64,
) -> Result<Rank1LossCertificate> {
    require_rank_one(m)?;

    // the equality system is stated for layering along axis 1; other axes are
    // handled by relabeling coordinates
    let (tensors, fractions, m1): (Vec<ElasticTensor>, Vec<f64>, Matrix3<f64>) =
        match profile.axis() {
            Axis::X1 => (
                profile.layers().iter().map(|l| l.tensor).collect(),
                profile.layers().iter().map(|l| l.fraction).collect(),
                *m,
            ),
            axis => {
                let mut r = Matrix3::identity();
                let (i, j) = (0, axis.index());
                r.swap_rows(i, j);
                (
                    profile
                        .layers()
                        .iter()
                        .map(|l| l.tensor.axes_swapped(Axis::X1, axis))
                        .collect(),
                    profile.layers().iter().map(|l| l.fraction).collect(),
                    r * m * r,
                )
            }
        };

    let m_scale = m1.norm_squared();
    let mut layer_residuals = Vec::with_capacity(tensors.len());
    let mut tight = true;
    // fraction-weighted sums of the minor-weighted brackets entering the
    // integral equalities, and their absolute versions for a residual scale
    let mut lhs = [0.0f64; 3];
    let mut rhs = [0.0f64; 3];
    let mut mag = [0.0f64; 3];

    for (k, (t, fr)) in tensors.iter().zip(&fractions).enumerate() {
        let (l, det) = acoustic_along_x1(t).map_err(|_| Error::DegenerateLayer {
            index: k,
            detail: "acoustic matrix along the lamination axis is singular".into(),
        })?;
        let q = q_of_m(t, d, &m1)?;
        let lmm = t.quadratic_form(&m1);
        let residual = (lmm - q).abs();
        layer_residuals.push(residual);
        if residual > loss_tol * t.scale() * m_scale {
            tight = false;
        }

        let [r1, r2, r3] = brackets(t, d, &m1);
        let w = |i: usize, j: usize| minor(&l, i, j) / det;
        let terms = [
            (w(0, 2) * r1, w(1, 2) * r2 - w(2, 2) * r3),
            (w(0, 1) * r1, w(1, 1) * r2 - w(1, 2) * r3),
            (w(0, 0) * r1, w(0, 1) * r2 - w(0, 2) * r3),
        ];
        for (e, (a, b)) in terms.iter().enumerate() {
            lhs[e] += fr * a;
            rhs[e] += fr * b;
            mag[e] += fr * (a.abs() + b.abs());
        }
    }

    let mut equation_residuals = [0.0f64; 3];
    for e in 0..3 {
        equation_residuals[e] = (lhs[e] - rhs[e]).abs();
        let scale = mag[e].max(m1.norm());
        if equation_residuals[e] > loss_tol * scale {
            tight = false;
        }
    }

    let mut m_rows = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            m_rows[r][c] = m[(r, c)];
        }
    }
    Ok(Rank1LossCertificate {
        m: m_rows,
        d,
        layer_residuals,
        equation_residuals,
        verdict: if tight {
            LossVerdict::LossPossible
        } else {
            LossVerdict::NoLossAtM
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn phase(lambda: f64, mu: f64) -> IsotropicPhase {
        IsotropicPhase::new(lambda, mu).unwrap()
    }

    fn worked_phases() -> [IsotropicPhase; 2] {
        [phase(-1.0, 0.9), phase(2.0, 0.32)]
    }

    #[test]
    fn classification_examples() {
        let phases = worked_phases();
        let c = classify_phases(&phases, 1.2);
        assert_eq!(c.classes, vec![PhaseClass::PBoundary, PhaseClass::Interior]);
        let c = classify_phases(&phases, 1.28);
        assert_eq!(c.classes, vec![PhaseClass::Interior, PhaseClass::QBoundary]);
        let c = classify_phases(&phases, 2.0);
        assert_eq!(c.classes, vec![PhaseClass::Interior, PhaseClass::Interior]);
        assert_eq!(c.indices_of(PhaseClass::Interior), vec![0, 1]);
    }

    #[test]
    fn q_degenerates_exactly_at_the_upper_boundary() {
        let p = phase(0.7, 0.45);
        let q = q_matrix(&p, 4.0 * p.mu);
        let eigs = q.symmetric_eigenvalues();
        let (lo, hi) = (eigs.min(), eigs.max());
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 2.0 * p.mu, epsilon = 1e-12);
        // and P collapses onto the all-ones matrix times lambda + 2 mu
        let pm = p_matrix(&p, 4.0 * p.mu);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(pm[(i, j)], p.p_wave(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn p_kernel_is_hydrostatic_at_the_lower_boundary() {
        let p = phase(-1.0, 0.9);
        let d = -(2.0 * p.mu + 3.0 * p.lambda); // 1.2
        let pm = p_matrix(&p, d);
        let hydro = Vector3::new(1.0, 1.0, 1.0) / 3.0f64.sqrt();
        assert!((pm * hydro).norm() <= 1e-12);
        let mut eigs: Vec<f64> = pm.symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(eigs[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 1.2, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[2], 1.2, epsilon = 1e-12);
    }

    #[test]
    fn sufficiency_on_the_worked_profile() {
        let phases = worked_phases();
        let v = lambda_per_sufficient(&phases, 1.2, GeometryCase::OppositeFaces);
        assert_eq!(v.verdict, CoercivityVerdict::GuaranteedPositive);
        assert!(v.detail.is_empty());
        // same weight without geometry: the volumetric-boundary phase blocks it
        let v = lambda_per_sufficient(&phases, 1.2, GeometryCase::None);
        assert_eq!(v.verdict, CoercivityVerdict::Inconclusive);
        // weight outside the admissible interval
        let v = lambda_per_sufficient(&phases, 2.0, GeometryCase::OppositeFaces);
        assert_eq!(v.verdict, CoercivityVerdict::Inconclusive);
    }

    #[test]
    fn empty_interval_is_always_inconclusive() {
        let phases = [phase(-1.0, 0.9), phase(3.0, 0.25)];
        for d in [0.0, 0.5, 1.0, 1.1, 1.2, 1.5] {
            let v = lambda_per_sufficient(&phases, d, GeometryCase::OppositeFaces);
            assert_eq!(v.verdict, CoercivityVerdict::Inconclusive, "d = {d}");
        }
    }

    #[test]
    fn minors_expansion_matches_direct_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = phase(rng.gen_range(-0.5..1.5), rng.gen_range(0.3..1.5));
            let t = p.tensor();
            let d = rng.gen_range(-0.5..1.5);
            let xi = Vector3::new(rng.gen(), rng.gen(), rng.gen());
            let eta = Vector3::new(rng.gen(), rng.gen(), rng.gen());
            let m = xi * eta.transpose();
            let q = q_of_m(&t, d, &m).unwrap();
            let (l, _) = acoustic_along_x1(&t).unwrap();
            let [r1, r2, r3] = brackets(&t, d, &m);
            let r = Vector3::new(r1, r2, r3);
            let direct = r.dot(&(l.try_inverse().unwrap() * r));
            assert_abs_diff_eq!(q, direct, epsilon = 1e-10 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn isotropic_gap_has_the_closed_form() {
        // L M : M - Q(M) for isotropic phases and rank-one M = xi (x) eta:
        //   ((l+2m)^2 - (l+d/2)^2)/(l+2m) (xi2 eta2 + xi3 eta3)^2
        // + m (xi2 eta3 - xi3 eta2)^2
        // + d (m - d/4)/m xi1^2 (eta2^2 + eta3^2)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let lambda = rng.gen_range(-1.0..2.0);
            let mu = rng.gen_range(0.2..1.5);
            let p = phase(lambda, mu);
            let d = rng.gen_range(-1.0..4.0 * mu);
            let xi = Vector3::new(
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            );
            let eta = Vector3::new(
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            );
            let m = xi * eta.transpose();
            let t = p.tensor();
            let gap = t.quadratic_form(&m) - q_of_m(&t, d, &m).unwrap();
            let pw = lambda + 2.0 * mu;
            let expected = (pw * pw - (lambda + 0.5 * d).powi(2)) / pw
                * (xi[1] * eta[1] + xi[2] * eta[2]).powi(2)
                + mu * (xi[1] * eta[2] - xi[2] * eta[1]).powi(2)
                + d * (mu - 0.25 * d) / mu * xi[0] * xi[0] * (eta[1] * eta[1] + eta[2] * eta[2]);
            assert_abs_diff_eq!(gap, expected, epsilon = 1e-10 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn worked_profile_certificate_is_strict() {
        let [pa, pb] = worked_phases();
        let profile =
            LaminateProfile::two_phase(pa, pb, 20.0 / 53.0, crate::tensors::Axis::X1).unwrap();
        let m = Vector3::z() * Vector3::z().transpose();
        let cert = rank1_loss_certificate(&profile, 1.2, &m, 1e-9).unwrap();
        assert_eq!(cert.verdict, LossVerdict::NoLossAtM);
        // phase a: (lambda+2mu) - (lambda+d/2)^2/(lambda+2mu) = 0.8 - 0.16/0.8
        assert_abs_diff_eq!(cert.layer_residuals[0], 0.6, epsilon = 1e-12);
        assert!(cert.layer_residuals[1] > 0.05);
    }

    #[test]
    fn single_phase_certificate_is_strict_for_any_rank_one() {
        let p = phase(0.5, 1.0);
        let profile = LaminateProfile::two_phase(p, p, 1.0, crate::tensors::Axis::X1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let xi = Vector3::new(
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            );
            let eta = Vector3::new(
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            );
            let m = xi * eta.transpose();
            let cert = rank1_loss_certificate(&profile, 1.0, &m, 1e-9).unwrap();
            assert_eq!(cert.verdict, LossVerdict::NoLossAtM);
        }
    }

    #[test]
    fn axis_swap_reproduces_axis_one_residuals() {
        let [pa, pb] = worked_phases();
        let theta = 20.0 / 53.0;
        let p1 = LaminateProfile::two_phase(pa, pb, theta, crate::tensors::Axis::X1).unwrap();
        let p3 = LaminateProfile::two_phase(pa, pb, theta, crate::tensors::Axis::X3).unwrap();
        let m1 = Vector3::z() * Vector3::z().transpose();
        // swapping axes 1 and 3 maps the test direction accordingly
        let m3 = Vector3::x() * Vector3::x().transpose();
        let c1 = rank1_loss_certificate(&p1, 1.2, &m1, 1e-9).unwrap();
        let c3 = rank1_loss_certificate(&p3, 1.2, &m3, 1e-9).unwrap();
        for (a, b) in c1.layer_residuals.iter().zip(&c3.layer_residuals) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn rank_one_precondition_is_enforced() {
        let p = phase(0.5, 1.0);
        let profile = LaminateProfile::two_phase(p, p, 1.0, crate::tensors::Axis::X1).unwrap();
        let full = Matrix3::identity();
        assert!(matches!(
            rank1_loss_certificate(&profile, 1.0, &full, 1e-9),
            Err(Error::NotRankOne { .. })
        ));
        assert!(rank1_loss_certificate(&profile, 1.0, &Matrix3::zeros(), 1e-9).is_err());
    }
}

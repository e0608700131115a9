//! Stiffness tensors, isotropic phases, and laminate profiles.
//!
//! Fourth-order tensors with minor and major symmetries are stored as 6x6
//! matrices in the orthonormal Mandel basis: index pairs are ordered
//! `11, 22, 33, 23, 13, 12` and the shear rows/columns carry a factor
//! `sqrt(2)`, so that the 6x6 matrix represents the quadratic form
//! `M -> L M^s : M^s` isometrically.  The smallest eigenvalue of the matrix
//! is then exactly the very-strong-ellipticity constant.

use nalgebra::{Matrix3, SMatrix, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Mandel pair order: `11, 22, 33, 23, 13, 12` (zero-based indices).
pub const MANDEL_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn mandel_index(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) | (2, 1) => 3,
        (0, 2) | (2, 0) => 4,
        (0, 1) | (1, 0) => 5,
        _ => unreachable!("index out of range"),
    }
}

fn mandel_weight(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        SQRT2
    }
}

/// Encodes the symmetric part of `m` as a Mandel 6-vector.
pub fn sym_to_mandel(m: &Matrix3<f64>) -> Vector6<f64> {
    let s = (m + m.transpose()) * 0.5;
    Vector6::new(
        s[(0, 0)],
        s[(1, 1)],
        s[(2, 2)],
        SQRT2 * s[(1, 2)],
        SQRT2 * s[(0, 2)],
        SQRT2 * s[(0, 1)],
    )
}

/// Decodes a Mandel 6-vector back into a symmetric 3x3 matrix.
pub fn mandel_to_sym(v: &Vector6<f64>) -> Matrix3<f64> {
    let s = 1.0 / SQRT2;
    Matrix3::new(
        v[0],
        s * v[5],
        s * v[4],
        s * v[5],
        v[1],
        s * v[3],
        s * v[4],
        s * v[3],
        v[2],
    )
}

/// Cofactor matrix of a 3x3 matrix, `Cof(M)_{ij} = (-1)^{i+j} det(M-tilde^{ij})`,
/// so that `det(M) I = Cof(M)^T M`.
pub fn cofactor(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(1, 2, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 1, 2),
        c(0, 2, 0, 2),
        -c(0, 2, 0, 1),
        c(0, 1, 1, 2),
        -c(0, 1, 0, 2),
        c(0, 1, 0, 1),
    )
}

/// An isotropic elastic phase described by its Lame coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropicPhase {
    pub lambda: f64,
    pub mu: f64,
}

impl IsotropicPhase {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda.is_finite() && mu.is_finite()) {
            return Err(Error::NonFinite {
                context: "isotropic phase moduli",
            });
        }
        Ok(Self { lambda, mu })
    }

    /// Strong ellipticity: `mu > 0` and `lambda + 2 mu > 0`.
    pub fn is_strongly_elliptic(&self) -> bool {
        self.mu > 0.0 && self.lambda + 2.0 * self.mu > 0.0
    }

    /// `lambda + 2 mu`, the modulus governing compression along the layering axis.
    pub fn p_wave(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    pub fn tensor(&self) -> ElasticTensor {
        ElasticTensor::isotropic(self.lambda, self.mu)
    }

    /// Adding `delta I_s` to the tensor shifts the moduli to `(lambda, mu + delta/2)`.
    pub fn perturbed(&self, delta: f64) -> Self {
        Self {
            lambda: self.lambda,
            mu: self.mu + 0.5 * delta,
        }
    }
}

/// A stiffness tensor with minor and major symmetries, stored in the Mandel basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticTensor {
    c: SMatrix<f64, 6, 6>,
}

impl ElasticTensor {
    /// `L M = lambda tr(M^s) I + 2 mu M^s`.
    pub fn isotropic(lambda: f64, mu: f64) -> Self {
        let mut c = SMatrix::<f64, 6, 6>::identity() * (2.0 * mu);
        for p in 0..3 {
            for q in 0..3 {
                c[(p, q)] += lambda;
            }
        }
        Self { c }
    }

    /// Builds the tensor from an entry function `(i,j,k,l) -> L_{ijkl}`.
    /// The function is only queried at the canonical Mandel pairs; minor
    /// symmetries are implied, major symmetry is enforced by averaging.
    pub fn from_entries(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut c = SMatrix::<f64, 6, 6>::zeros();
        for (p, &(i, j)) in MANDEL_PAIRS.iter().enumerate() {
            for (q, &(k, l)) in MANDEL_PAIRS.iter().enumerate() {
                let w = mandel_weight(i, j) * mandel_weight(k, l);
                c[(p, q)] = 0.5 * w * (f(i, j, k, l) + f(k, l, i, j));
            }
        }
        Self { c }
    }

    /// Wraps a Mandel 6x6 matrix; it must be symmetric.
    pub fn from_mandel(m: SMatrix<f64, 6, 6>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "Mandel matrix",
            });
        }
        let scale = m.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        if (m - m.transpose()).abs().max() > 1e-12 * scale {
            return Err(Error::NotSymmetric {
                context: "Mandel matrix",
            });
        }
        Ok(Self {
            c: (m + m.transpose()) * 0.5,
        })
    }

    pub fn mandel(&self) -> &SMatrix<f64, 6, 6> {
        &self.c
    }

    /// Tensor entry `L_{ijkl}` (indices zero-based).
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let w = mandel_weight(i, j) * mandel_weight(k, l);
        self.c[(mandel_index(i, j), mandel_index(k, l))] / w
    }

    /// The stress `L M^s` as a symmetric 3x3 matrix.
    pub fn apply(&self, m: &Matrix3<f64>) -> Matrix3<f64> {
        mandel_to_sym(&(self.c * sym_to_mandel(m)))
    }

    /// Quadratic form `L M : M = L M^s : M^s`.
    pub fn quadratic_form(&self, m: &Matrix3<f64>) -> f64 {
        let v = sym_to_mandel(m);
        (self.c * v).dot(&v)
    }

    /// Symmetric bilinear form `L M^s : N^s`.
    pub fn bilinear_form(&self, m: &Matrix3<f64>, n: &Matrix3<f64>) -> f64 {
        (self.c * sym_to_mandel(m)).dot(&sym_to_mandel(n))
    }

    /// Acoustic matrix `A[L,n]_{ik} = L_{ijkl} n_j n_l`.
    pub fn acoustic_matrix(&self, n: &Vector3<f64>) -> Matrix3<f64> {
        let mut a = Matrix3::zeros();
        for i in 0..3 {
            for k in 0..3 {
                let mut s = 0.0;
                for j in 0..3 {
                    for l in 0..3 {
                        s += self.entry(i, j, k, l) * n[j] * n[l];
                    }
                }
                a[(i, k)] = s;
            }
        }
        (a + a.transpose()) * 0.5
    }

    /// `L + delta I_s` (identity on symmetric matrices).
    pub fn perturbed(&self, delta: f64) -> Self {
        Self {
            c: self.c + SMatrix::<f64, 6, 6>::identity() * delta,
        }
    }

    /// Orthogonal change of coordinates: `L'_{ijkl} = R_ia R_jb R_kc R_ld L_abcd`.
    pub fn rotated(&self, r: &Matrix3<f64>) -> Self {
        Self::from_entries(|i, j, k, l| {
            let mut s = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        for d in 0..3 {
                            s += r[(i, a)]
                                * r[(j, b)]
                                * r[(k, c)]
                                * r[(l, d)]
                                * self.entry(a, b, c, d);
                        }
                    }
                }
            }
            s
        })
    }

    /// Relabels coordinate axes `a <-> b` (a proper permutation of the frame).
    pub fn axes_swapped(&self, a: Axis, b: Axis) -> Self {
        let mut r = Matrix3::zeros();
        let (ia, ib) = (a.index(), b.index());
        for k in 0..3 {
            if k == ia {
                r[(k, ib)] = 1.0;
            } else if k == ib {
                r[(k, ia)] = 1.0;
            } else {
                r[(k, k)] = 1.0;
            }
        }
        self.rotated(&r)
    }

    /// Largest absolute Mandel entry; the natural scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.c.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0)
    }
}

/// Lamination axis, serialized as `1`, `2` or `3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }

    pub fn unit(self) -> Vector3<f64> {
        let mut e = Vector3::zeros();
        e[self.index()] = 1.0;
        e
    }
}

impl TryFrom<u8> for Axis {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            3 => Ok(Axis::X3),
            other => Err(format!("axis must be 1, 2 or 3, got {other}")),
        }
    }
}

impl From<Axis> for u8 {
    fn from(a: Axis) -> u8 {
        a.index() as u8 + 1
    }
}

/// One layer of a laminate: a stiffness tensor and its volume fraction.
#[derive(Debug, Clone)]
pub struct Layer {
    pub tensor: ElasticTensor,
    pub fraction: f64,
    /// Retained when the layer was given through Lame coefficients; several
    /// scalar diagnostics (translation intervals, phase classification) are
    /// only defined for isotropic layers.
    pub phase: Option<IsotropicPhase>,
}

impl Layer {
    pub fn new(tensor: ElasticTensor, fraction: f64) -> Self {
        Self {
            tensor,
            fraction,
            phase: None,
        }
    }

    pub fn isotropic(phase: IsotropicPhase, fraction: f64) -> Self {
        Self {
            tensor: phase.tensor(),
            fraction,
            phase: Some(phase),
        }
    }
}

/// A periodic laminate: finitely many homogeneous layers stacked along one axis,
/// with volume fractions summing to one.
#[derive(Debug, Clone)]
pub struct LaminateProfile {
    axis: Axis,
    layers: Vec<Layer>,
}

impl LaminateProfile {
    pub fn new(axis: Axis, layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidFractions {
                detail: "profile has no layers".into(),
            });
        }
        let mut sum = 0.0;
        for (k, layer) in layers.iter().enumerate() {
            if !layer.fraction.is_finite() || layer.fraction <= 0.0 {
                return Err(Error::InvalidFractions {
                    detail: format!("layer {k} has fraction {}", layer.fraction),
                });
            }
            sum += layer.fraction;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidFractions {
                detail: format!("fractions sum to {sum}, expected 1"),
            });
        }
        Ok(Self { axis, layers })
    }

    /// Two isotropic phases with fractions `theta` and `1 - theta`.
    pub fn two_phase(a: IsotropicPhase, b: IsotropicPhase, theta: f64, axis: Axis) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidFractions {
                detail: format!("theta = {theta} outside [0, 1]"),
            });
        }
        if theta == 0.0 {
            return Self::new(axis, vec![Layer::isotropic(b, 1.0)]);
        }
        if theta == 1.0 {
            return Self::new(axis, vec![Layer::isotropic(a, 1.0)]);
        }
        Self::new(
            axis,
            vec![Layer::isotropic(a, theta), Layer::isotropic(b, 1.0 - theta)],
        )
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Lame coefficients of every layer, when all layers are isotropic.
    pub fn isotropic_phases(&self) -> Option<Vec<IsotropicPhase>> {
        self.layers.iter().map(|l| l.phase).collect()
    }

    /// Same profile with every layer perturbed by `delta I_s`.
    pub fn perturbed(&self, delta: f64) -> Self {
        Self {
            axis: self.axis,
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    tensor: l.tensor.perturbed(delta),
                    fraction: l.fraction,
                    phase: l.phase.map(|p| p.perturbed(delta)),
                })
                .collect(),
        }
    }

    /// Volume-fraction-weighted average of a per-layer quantity.
    pub fn average(&self, mut f: impl FnMut(&Layer) -> f64) -> f64 {
        self.layers.iter().map(|l| l.fraction * f(l)).sum()
    }
}

/// JSON encoding of a stiffness tensor: either `{"iso":{"lambda":..,"mu":..}}`
/// or `{"mandel":[[..6x6..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum TensorSpec {
    Iso(IsotropicPhase),
    Mandel(Box<[[f64; 6]; 6]>),
}

impl TensorSpec {
    pub fn to_tensor(&self) -> Result<ElasticTensor> {
        match self {
            TensorSpec::Iso(p) => {
                IsotropicPhase::new(p.lambda, p.mu)?;
                Ok(p.tensor())
            }
            TensorSpec::Mandel(rows) => {
                let m = SMatrix::<f64, 6, 6>::from_fn(|i, j| rows[i][j]);
                ElasticTensor::from_mandel(m)
            }
        }
    }

    pub fn phase(&self) -> Option<IsotropicPhase> {
        match self {
            TensorSpec::Iso(p) => Some(*p),
            TensorSpec::Mandel(_) => None,
        }
    }

    pub fn of_tensor(t: &ElasticTensor) -> Self {
        let mut rows = [[0.0; 6]; 6];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = t.mandel()[(i, j)];
            }
        }
        TensorSpec::Mandel(Box::new(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix3;

    #[test]
    fn isotropic_quadratic_form_matches_lame_expression() {
        let t = ElasticTensor::isotropic(0.7, 1.3);
        let m: Matrix3<f64> = Matrix3::new(0.3, -1.2, 0.5, 0.8, 1.1, -0.4, 0.2, 0.9, -0.6);
        let s = (m + m.transpose()) * 0.5;
        let expected = 0.7 * s.trace().powi(2) + 2.0 * 1.3 * (s.transpose() * s).trace();
        assert_abs_diff_eq!(t.quadratic_form(&m), expected, epsilon = 1e-14);
    }

    #[test]
    fn isotropic_mandel_spectrum() {
        // iso(1,1): eigenvalues {3 lambda + 2 mu, 2 mu x5} = {5, 2,2,2,2,2}
        let t = ElasticTensor::isotropic(1.0, 1.0);
        let mut eigs = t.mandel().symmetric_eigenvalues().as_slice().to_vec();
        eigs.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(eigs[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[4], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[5], 5.0, epsilon = 1e-14);
    }

    #[test]
    fn mandel_round_trip_is_exact() {
        let m = Matrix3::new(1.0, 0.5, -0.25, 0.5, 2.0, 0.75, -0.25, 0.75, 3.0);
        let back = mandel_to_sym(&sym_to_mandel(&m));
        assert!((back - m).abs().max() <= 1e-15);
    }

    #[test]
    fn acoustic_matrix_isotropic_along_e1() {
        let t = ElasticTensor::isotropic(-1.0, 0.9);
        let a = t.acoustic_matrix(&Vector3::x());
        let expected = Matrix3::from_diagonal(&Vector3::new(-1.0 + 2.0 * 0.9, 0.9, 0.9));
        assert!((a - expected).abs().max() <= 1e-14);
    }

    #[test]
    fn acoustic_matrix_of_identity_translation() {
        // L = I_s has acoustic matrix (I + n n^T)/2 for unit n.
        let t = ElasticTensor::isotropic(0.0, 0.5);
        let n = Vector3::new(1.0, 2.0, -2.0).normalize();
        let a = t.acoustic_matrix(&n);
        let expected = (Matrix3::identity() + n * n.transpose()) * 0.5;
        assert!((a - expected).abs().max() <= 1e-14);
    }

    #[test]
    fn cofactor_satisfies_adjugate_identity() {
        let m = Matrix3::new(0.3, -1.2, 0.5, 0.8, 1.1, -0.4, 0.2, 0.9, -0.6);
        let id = cofactor(&m).transpose() * m;
        let det = m.determinant();
        assert!((id - Matrix3::identity() * det).abs().max() <= 1e-14);
    }

    #[test]
    fn perturbation_shifts_mu_by_half_delta() {
        let p = IsotropicPhase::new(-1.0, 0.9).unwrap();
        let delta = 0.3;
        let direct = p.tensor().perturbed(delta);
        let via_phase = p.perturbed(delta).tensor();
        assert!((direct.mandel() - via_phase.mandel()).abs().max() <= 1e-14);
        // adding delta I_s shifts the whole 6x6 spectrum by delta
        let mut before = p
            .tensor()
            .mandel()
            .symmetric_eigenvalues()
            .as_slice()
            .to_vec();
        let mut after = direct.mandel().symmetric_eigenvalues().as_slice().to_vec();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        for (b, a) in before.iter().zip(&after) {
            assert_abs_diff_eq!(a - b, delta, epsilon = 1e-12);
        }
    }

    #[test]
    fn rotation_by_permutation_relabels_entries() {
        let t = ElasticTensor::from_entries(|i, j, k, l| {
            (i + 1) as f64 * 0.1
                + (j + 1) as f64 * 0.07
                + (k + 1) as f64 * 0.031
                + (l + 1) as f64 * 0.003
        });
        let s = t.axes_swapped(Axis::X1, Axis::X2);
        assert_abs_diff_eq!(s.entry(0, 0, 0, 0), t.entry(1, 1, 1, 1), epsilon = 1e-14);
        assert_abs_diff_eq!(s.entry(2, 2, 0, 1), t.entry(2, 2, 1, 0), epsilon = 1e-14);
    }

    #[test]
    fn tensor_spec_json_round_trip() {
        let spec: TensorSpec = serde_json::from_str(r#"{"iso":{"lambda":-1.0,"mu":0.9}}"#).unwrap();
        let t = spec.to_tensor().unwrap();
        assert_abs_diff_eq!(t.entry(0, 0, 0, 0), 0.8, epsilon = 1e-15);
        assert!(serde_json::from_str::<TensorSpec>(r#"{"iso":{"lambda":1.0}}"#).is_err());
        assert!(
            serde_json::from_str::<TensorSpec>(r#"{"iso":{"lambda":1.0,"mu":1.0,"nu":0.3}}"#)
                .is_err()
        );
    }

    #[test]
    fn asymmetric_mandel_input_is_rejected() {
        let mut m = SMatrix::<f64, 6, 6>::identity();
        m[(0, 1)] = 1e-3;
        assert!(matches!(
            ElasticTensor::from_mandel(m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn profile_fraction_validation() {
        let p = IsotropicPhase::new(1.0, 1.0).unwrap();
        let bad = LaminateProfile::new(
            Axis::X1,
            vec![Layer::isotropic(p, 0.6), Layer::isotropic(p, 0.5)],
        );
        assert!(matches!(bad, Err(Error::InvalidFractions { .. })));
        let good = LaminateProfile::two_phase(p, p, 0.25, Axis::X2).unwrap();
        assert_eq!(good.layers().len(), 2);
    }
}

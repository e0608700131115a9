//! Effective tensors of periodic laminates.
//!
//! A laminate varying along the unit vector `e_n` has an explicit homogenized
//! tensor characterized by three averaged relations over the layers, with
//! `A[L]` the acoustic matrix along the lamination axis:
//!
//! 1. `inv(A[L*]) = <inv(A[L])>`
//! 2. `inv(A[L*]) s*_kl = <inv(A[L]) s_kl>`, where `(s_kl)_m = L_{n m k l}`
//! 3. `L*_{ijkl} - s*_ij . inv(A[L*]) s*_kl = <L_{ijkl} - s_ij . inv(A[L]) s_kl>`
//!
//! (Schur complements of the rows containing the axis average linearly.)
//! For a two-phase isotropic laminate the relations collapse to closed-form
//! moduli; both routes are implemented and must agree, and both are checked
//! elsewhere against a finite-element cell oracle.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::tensors::{Axis, ElasticTensor, IsotropicPhase, LaminateProfile, MANDEL_PAIRS};
use crate::{Error, Result};

/// The five moduli of a two-phase isotropic laminate stacked along axis 1.
///
/// With `theta` the fraction of phase `a` and angle brackets the layer
/// average:
/// `A = <1/(2mu+lambda)>`, `B = <lambda/(2mu+lambda)>`, `C = <mu>`,
/// `D = <mu lambda/(2mu+lambda)>`, `E = <1/mu>`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LaminateModuli {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
}

impl LaminateModuli {
    pub fn from_phases(pa: &IsotropicPhase, pb: &IsotropicPhase, theta: f64) -> Result<Self> {
        for (name, p) in [("a", pa), ("b", pb)] {
            if p.p_wave() <= 0.0 || p.mu <= 0.0 {
                return Err(Error::NotStronglyElliptic {
                    detail: format!(
                        "phase {name}: lambda = {}, mu = {} (needs mu > 0 and lambda + 2 mu > 0)",
                        p.lambda, p.mu
                    ),
                });
            }
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidFractions {
                detail: format!("theta = {theta} outside [0, 1]"),
            });
        }
        let (t, u) = (theta, 1.0 - theta);
        Ok(Self {
            a: t / pa.p_wave() + u / pb.p_wave(),
            b: t * pa.lambda / pa.p_wave() + u * pb.lambda / pb.p_wave(),
            c: t * pa.mu + u * pb.mu,
            d: t * pa.mu * pa.lambda / pa.p_wave() + u * pb.mu * pb.lambda / pb.p_wave(),
            e: t / pa.mu + u / pb.mu,
        })
    }

    /// Assembles the homogenized tensor (layering along axis 1):
    /// `L*_1111 = 1/A`, `L*_1122 = L*_1133 = B/A`, `L*_1212 = L*_1313 = 1/E`,
    /// `L*_2222 = L*_3333 = B^2/A + 2(C+D)`, `L*_2233 = B^2/A + 2D`,
    /// `L*_2323 = C`; all other independent entries vanish.
    pub fn tensor(&self) -> ElasticTensor {
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        ElasticTensor::from_entries(|i, j, k, l| {
            let key = canonical(i, j, k, l);
            match key {
                (0, 0, 0, 0) => 1.0 / a,
                (0, 0, 1, 1) | (0, 0, 2, 2) => b / a,
                (0, 1, 0, 1) | (0, 2, 0, 2) => 1.0 / e,
                (1, 1, 1, 1) | (2, 2, 2, 2) => b * b / a + 2.0 * (c + d),
                (1, 1, 2, 2) => b * b / a + 2.0 * d,
                (1, 2, 1, 2) => c,
                _ => 0.0,
            }
        })
    }
}

/// Canonical representative of an entry under minor and major symmetries.
fn canonical(i: usize, j: usize, k: usize, l: usize) -> (usize, usize, usize, usize) {
    let p = (i.min(j), i.max(j));
    let q = (k.min(l), k.max(l));
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    (p.0, p.1, q.0, q.1)
}

/// Closed-form lamination of two isotropic phases (`theta` of phase `a`),
/// stacked along `axis`.
pub fn laminate_isotropic_pair(
    pa: &IsotropicPhase,
    pb: &IsotropicPhase,
    theta: f64,
    axis: Axis,
) -> Result<(LaminateModuli, ElasticTensor)> {
    let moduli = LaminateModuli::from_phases(pa, pb, theta)?;
    let t1 = moduli.tensor();
    let t = match axis {
        Axis::X1 => t1,
        other => t1.axes_swapped(Axis::X1, other),
    };
    Ok((moduli, t))
}

/// Homogenized tensor of an arbitrary laminate through the averaged relations.
/// Fails with [`Error::DegenerateLayer`] when a layer's acoustic matrix along
/// the axis is singular (the layer would not support the cell problem).
pub fn laminate_general(profile: &LaminateProfile) -> Result<ElasticTensor> {
    let n = profile.axis().index();
    let layers = profile.layers();

    let mut inv_acoustic = Vec::with_capacity(layers.len());
    for (k, layer) in layers.iter().enumerate() {
        let a = layer.tensor.acoustic_matrix(&profile.axis().unit());
        match a.try_inverse() {
            Some(inv) if a.determinant().abs() > 1e-14 * a.norm().powi(3).max(1e-30) => {
                inv_acoustic.push(inv)
            }
            _ => {
                return Err(Error::DegenerateLayer {
                    index: k,
                    detail: format!(
                        "acoustic matrix along the lamination axis is singular (det = {:.3e})",
                        a.determinant()
                    ),
                })
            }
        }
    }

    // s_kl per layer: (s_kl)_m = L_{n m k l}
    let s_vec = |t: &ElasticTensor, k: usize, l: usize| {
        Vector3::new(
            t.entry(n, 0, k, l),
            t.entry(n, 1, k, l),
            t.entry(n, 2, k, l),
        )
    };

    // relation 1: harmonic-type mean of acoustic matrices
    let mut inv_avg = Matrix3::zeros();
    for (layer, inv) in layers.iter().zip(&inv_acoustic) {
        inv_avg += inv * layer.fraction;
    }
    let a_star = inv_avg
        .try_inverse()
        .ok_or_else(|| Error::DegenerateLayer {
            index: 0,
            detail: "averaged inverse acoustic matrix is singular".into(),
        })?;

    // relation 2: effective coupling vectors
    let mut s_star6: Vec<Vector3<f64>> = Vec::with_capacity(6);
    for &(k, l) in MANDEL_PAIRS.iter() {
        let mut acc = Vector3::zeros();
        for (layer, inv) in layers.iter().zip(&inv_acoustic) {
            acc += inv * s_vec(&layer.tensor, k, l) * layer.fraction;
        }
        s_star6.push(a_star * acc);
    }

    // relation 3: averaged Schur complements
    let mut entries = [[0.0f64; 6]; 6];
    for (p, &(i, j)) in MANDEL_PAIRS.iter().enumerate() {
        for (q, &(k, l)) in MANDEL_PAIRS.iter().enumerate().skip(p) {
            let mut avg = 0.0;
            for (layer, inv) in layers.iter().zip(&inv_acoustic) {
                let sij = s_vec(&layer.tensor, i, j);
                let skl = s_vec(&layer.tensor, k, l);
                avg += layer.fraction * (layer.tensor.entry(i, j, k, l) - sij.dot(&(inv * skl)));
            }
            let star = s_star6[p].dot(&(inv_avg * s_star6[q]));
            entries[p][q] = avg + star;
            entries[q][p] = avg + star;
        }
    }

    Ok(ElasticTensor::from_entries(|i, j, k, l| {
        let pm = |i: usize, j: usize| {
            MANDEL_PAIRS
                .iter()
                .position(|&(a, b)| (a, b) == (i.min(j), i.max(j)))
                .unwrap()
        };
        entries[pm(i, j)][pm(k, l)]
    }))
}

/// One step of a homogenized-energy sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub delta: f64,
    pub energy: f64,
}

/// Homogenized energies `L0_delta M : M` of the profile with every layer
/// perturbed by `delta I_s`, for a descending list of positive `delta`,
/// followed by the unperturbed (`delta = 0`) value.  The sequence is
/// nonincreasing in `delta` down to the homogenized energy of the original
/// profile.
pub fn delta_sweep(
    profile: &LaminateProfile,
    m: &Matrix3<f64>,
    deltas: &[f64],
) -> Result<Vec<SweepPoint>> {
    for w in deltas.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::InvalidInput(format!(
                "deltas must be strictly descending, got {} before {}",
                w[0], w[1]
            )));
        }
    }
    if let Some(&d) = deltas.last() {
        if d <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "deltas must be positive, got {d}"
            )));
        }
    }
    let mut out = Vec::with_capacity(deltas.len() + 1);
    for &delta in deltas.iter().chain(std::iter::once(&0.0)) {
        let hom = laminate_general(&profile.perturbed(delta))?;
        out.push(SweepPoint {
            delta,
            energy: hom.quadratic_form(m),
        });
    }
    Ok(out)
}

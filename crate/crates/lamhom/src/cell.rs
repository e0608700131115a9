//! Discrete cell problems for laminates, independent of the closed-form
//! lamination formulas, plus a quadrature oracle for the null-Lagrangian
//! property of cofactors.
//!
//! A laminate varies along one axis only, so its corrector problem is a
//! one-dimensional periodic system: minimize
//! `<L(x) (M + u'(x) (x) n) : (M + u'(x) (x) n)>` over periodic, mean-zero
//! `u: [0,1] -> R^3`.  Piecewise-linear elements on a mesh whose nodes include
//! every layer interface reproduce the exact minimizer (the exact corrector is
//! piecewise linear), so the discrete energy matches the homogenized energy to
//! rounding error.  This gives a genuinely independent check of the averaged
//! lamination relations.

use nalgebra::{DMatrix, DVector, Matrix3, SMatrix, Vector3};
use serde::Serialize;

use crate::tensors::{mandel_to_sym, ElasticTensor, LaminateProfile};
use crate::{Error, Result};

/// Hard cap on the element count; the solver assembles dense matrices.
pub const MAX_ELEMENTS: usize = 1024;

/// Relative eigenvalue tolerance deciding between "singular but bounded" and
/// "unbounded below" when the stiffness matrix is not positive definite.
const INDEFINITE_REL_TOL: f64 = 1e-10;

/// Interface-aligned periodic mesh of the unit cell.
#[derive(Debug, Clone)]
struct CellMesh {
    /// Node positions; node `i` and node `(i+1) % n` bound element `i`.
    nodes: Vec<f64>,
    /// Element lengths.
    h: Vec<f64>,
    /// Index of the layer each element lies in.
    layer_of_element: Vec<usize>,
}

impl CellMesh {
    fn build(profile: &LaminateProfile, target_elements: usize) -> Result<Self> {
        if target_elements == 0 || target_elements > MAX_ELEMENTS {
            return Err(Error::InvalidInput(format!(
                "element count must lie in 1..={MAX_ELEMENTS}, got {target_elements}"
            )));
        }
        let mut nodes = Vec::new();
        let mut h = Vec::new();
        let mut layer_of_element = Vec::new();
        let mut x = 0.0;
        for (k, layer) in profile.layers().iter().enumerate() {
            let count = ((layer.fraction * target_elements as f64).round() as usize).max(1);
            let he = layer.fraction / count as f64;
            for e in 0..count {
                nodes.push(x + he * e as f64);
                h.push(he);
                layer_of_element.push(k);
            }
            x += layer.fraction;
        }
        Ok(Self {
            nodes,
            h,
            layer_of_element,
        })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

enum Factorization {
    Cholesky(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    /// Positive-semidefinite fallback: spectral pseudo-inverse.
    Pseudo {
        vectors: DMatrix<f64>,
        values: DVector<f64>,
        cutoff: f64,
    },
}

impl Factorization {
    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        match self {
            Factorization::Cholesky(c) => c.solve(rhs),
            Factorization::Pseudo {
                vectors,
                values,
                cutoff,
            } => {
                let coeffs = vectors.transpose() * rhs;
                let mut scaled = coeffs;
                for (c, &lam) in scaled.iter_mut().zip(values.iter()) {
                    *c = if lam > *cutoff { *c / lam } else { 0.0 };
                }
                vectors * scaled
            }
        }
    }
}

/// Factored periodic cell operator for one laminate profile.  Assembling and
/// factoring once, then back-substituting for many mean strains, keeps the
/// 21 solves of a full homogenization cheap.
pub struct CellOperator {
    mesh: CellMesh,
    axis: Vector3<f64>,
    tensors: Vec<ElasticTensor>,
    fractions: Vec<f64>,
    factor: Factorization,
}

/// Solution of one cell problem.
#[derive(Debug, Clone, Serialize)]
pub struct CellSolution {
    /// Homogenized energy `L* M : M` carried by the mean strain `M`.
    pub energy: f64,
    /// Node positions of the mesh.
    pub nodes: Vec<f64>,
    /// Corrector displacement at each node (periodic, weighted mean zero).
    pub corrector: Vec<[f64; 3]>,
}

impl CellOperator {
    pub fn new(profile: &LaminateProfile, target_elements: usize) -> Result<Self> {
        let mesh = CellMesh::build(profile, target_elements)?;
        let n = mesh.len();
        let axis = profile.axis().unit();
        let tensors: Vec<ElasticTensor> = profile.layers().iter().map(|l| l.tensor).collect();
        let fractions: Vec<f64> = profile.layers().iter().map(|l| l.fraction).collect();

        let mut k = DMatrix::<f64>::zeros(3 * n, 3 * n);
        for e in 0..n {
            let a = tensors[mesh.layer_of_element[e]].acoustic_matrix(&axis) / mesh.h[e];
            let (i, j) = (e, (e + 1) % n);
            add_block(&mut k, i, i, &a);
            add_block(&mut k, j, j, &a);
            add_block(&mut k, i, j, &(-a));
            add_block(&mut k, j, i, &(-a));
        }

        // Pin the volume-weighted mean of each displacement component by a
        // rank-three penalty; the weights are the lumped (trapezoid) masses,
        // so the penalty vanishes exactly on admissible correctors.
        let scale = k.diagonal().amax().max(1.0);
        let mut w = vec![0.0; n];
        for e in 0..n {
            w[e] += 0.5 * mesh.h[e];
            w[(e + 1) % n] += 0.5 * mesh.h[e];
        }
        for i in 0..n {
            for j in 0..n {
                let p = scale * w[i] * w[j];
                for c in 0..3 {
                    k[(3 * i + c, 3 * j + c)] += p;
                }
            }
        }

        let factor = match k.clone().cholesky() {
            Some(c) => Factorization::Cholesky(c),
            None => {
                let eig = k.symmetric_eigen();
                let min = eig.eigenvalues.min();
                if min < -INDEFINITE_REL_TOL * scale {
                    return Err(Error::UnboundedBelow { rayleigh: min });
                }
                Factorization::Pseudo {
                    vectors: eig.eigenvectors,
                    values: eig.eigenvalues,
                    cutoff: INDEFINITE_REL_TOL * scale,
                }
            }
        };

        Ok(Self {
            mesh,
            axis,
            tensors,
            fractions,
            factor,
        })
    }

    pub fn element_count(&self) -> usize {
        self.mesh.len()
    }

    /// Solves the corrector problem for mean strain `m` and returns the
    /// homogenized energy together with the discrete corrector.
    pub fn solve(&self, m: &Matrix3<f64>) -> CellSolution {
        let n = self.mesh.len();
        let mut f = DVector::<f64>::zeros(3 * n);
        let mut mean_energy = 0.0;
        for e in 0..n {
            let t = &self.tensors[self.mesh.layer_of_element[e]];
            let b = t.apply(m) * self.axis;
            let (i, j) = (e, (e + 1) % n);
            for c in 0..3 {
                f[3 * j + c] += b[c];
                f[3 * i + c] -= b[c];
            }
            mean_energy += self.mesh.h[e] * t.quadratic_form(m);
        }
        let u = self.factor.solve(&(-&f));
        let energy = mean_energy + f.dot(&u);
        let corrector = (0..n)
            .map(|i| [u[3 * i], u[3 * i + 1], u[3 * i + 2]])
            .collect();
        CellSolution {
            energy,
            nodes: self.mesh.nodes.clone(),
            corrector,
        }
    }

    /// Volume-average energy without any corrector (the Voigt bound); used as
    /// a sanity reference by callers.
    pub fn mean_energy(&self, m: &Matrix3<f64>) -> f64 {
        self.tensors
            .iter()
            .zip(&self.fractions)
            .map(|(t, fr)| fr * t.quadratic_form(m))
            .sum()
    }

    /// Recovers the full homogenized tensor by polarization of the energy over
    /// the orthonormal basis of symmetric matrices: 6 diagonal solves and 15
    /// mixed solves against the single factorization.
    pub fn homogenize(&self) -> Result<ElasticTensor> {
        let basis: Vec<Matrix3<f64>> = (0..6)
            .map(|p| {
                let mut v = nalgebra::Vector6::zeros();
                v[p] = 1.0;
                mandel_to_sym(&v)
            })
            .collect();
        let diag: Vec<f64> = basis.iter().map(|b| self.solve(b).energy).collect();
        let mut c = SMatrix::<f64, 6, 6>::zeros();
        for p in 0..6 {
            c[(p, p)] = diag[p];
            for q in (p + 1)..6 {
                let mixed = self.solve(&(basis[p] + basis[q])).energy;
                let off = 0.5 * (mixed - diag[p] - diag[q]);
                c[(p, q)] = off;
                c[(q, p)] = off;
            }
        }
        ElasticTensor::from_mandel(c)
    }
}

fn add_block(k: &mut DMatrix<f64>, i: usize, j: usize, b: &Matrix3<f64>) {
    for r in 0..3 {
        for c in 0..3 {
            k[(3 * i + r, 3 * j + c)] += b[(r, c)];
        }
    }
}

/// Convenience wrapper: assemble, factor, and homogenize in one call.
pub fn homogenize_numeric(
    profile: &LaminateProfile,
    target_elements: usize,
) -> Result<ElasticTensor> {
    CellOperator::new(profile, target_elements)?.homogenize()
}

// ---------------------------------------------------------------------------
// Trigonometric fields and the cofactor mean-value identity.
// ---------------------------------------------------------------------------

/// Wave shape of one trigonometric term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Wave {
    Cos,
    Sin,
}

/// One term `a * trig(2 pi k . x)` of a periodic vector field on the unit cell.
#[derive(Debug, Clone, Serialize)]
pub struct TrigTerm {
    pub amplitude: [f64; 3],
    pub freq: [i32; 3],
    pub wave: Wave,
}

/// A smooth periodic vector field given as a finite trigonometric sum.
#[derive(Debug, Clone, Serialize)]
pub struct TrigField {
    pub terms: Vec<TrigTerm>,
}

impl TrigField {
    /// Gradient `(d v_i / d x_j)_{ij}` at a point.
    pub fn gradient(&self, x: &[f64; 3]) -> Matrix3<f64> {
        let mut g = Matrix3::zeros();
        for term in &self.terms {
            let phase = std::f64::consts::TAU
                * (term.freq[0] as f64 * x[0]
                    + term.freq[1] as f64 * x[1]
                    + term.freq[2] as f64 * x[2]);
            // d/dx_j trig(phase) = trig'(phase) * 2 pi k_j
            let deriv = match term.wave {
                Wave::Cos => -phase.sin(),
                Wave::Sin => phase.cos(),
            };
            for i in 0..3 {
                for j in 0..3 {
                    g[(i, j)] +=
                        term.amplitude[i] * deriv * std::f64::consts::TAU * term.freq[j] as f64;
                }
            }
        }
        g
    }

    /// Largest per-axis frequency appearing in the field.
    pub fn max_frequency(&self) -> i32 {
        self.terms
            .iter()
            .flat_map(|t| t.freq.iter())
            .map(|k| k.abs())
            .max()
            .unwrap_or(0)
    }
}

/// Result of integrating `Cof(M0 + grad v)` over the unit cell.
#[derive(Debug, Clone, Serialize)]
pub struct CofactorMean {
    /// The computed mean, row-major.
    pub mean: [[f64; 3]; 3],
    /// `max |mean - Cof(M0)|`: zero (to quadrature accuracy) because each
    /// cofactor entry of a gradient is a divergence and integrates away on the
    /// torus.
    pub residual: f64,
    /// Points per axis of the uniform tensor-product rule actually used.
    pub points_per_axis: usize,
}

/// Integrates `Cof(M0 + grad v)` with a uniform tensor-product rule sized to
/// be exact for the trigonometric degree of the integrand, and compares
/// against `Cof(M0)`.
pub fn cofactor_mean(field: &TrigField, base: &Matrix3<f64>, min_points: usize) -> CofactorMean {
    // Each cofactor entry multiplies two gradient entries, so per-axis
    // frequencies up to 2 * max_frequency occur; an m-point uniform rule on
    // the circle integrates frequencies |k| < m exactly.
    let needed = 2 * field.max_frequency() as usize + 1;
    let m = min_points.max(needed).max(1);
    let mut acc = Matrix3::zeros();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let x = [
                    i as f64 / m as f64,
                    j as f64 / m as f64,
                    k as f64 / m as f64,
                ];
                acc += crate::tensors::cofactor(&(base + field.gradient(&x)));
            }
        }
    }
    let mean = acc / (m as f64).powi(3);
    let expected = crate::tensors::cofactor(base);
    let residual = (mean - expected).abs().max();
    let mut rows = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            rows[r][c] = mean[(r, c)];
        }
    }
    CofactorMean {
        mean: rows,
        residual,
        points_per_axis: m,
    }
}

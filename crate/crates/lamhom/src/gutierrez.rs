//! The rank-two lamination that drives the strong-ellipticity constant of a
//! homogenized tensor to zero, plus a numerical audit of the printed
//! constants of that construction.
//!
//! Step one laminates two isotropic materials `a` and `b` along axis 1 with
//! the fraction chosen so the effective normal/tangential coupling `B`
//! vanishes.  Step two laminates the result with a third isotropic material
//! `c` along axis 2; the published closed forms pick the shear modulus of `c`
//! and the second fraction so that the `3333` entry of the final tensor --
//! decomposed as `I1 + G1^2/F1` -- vanishes while a translation certificate
//! keeps the energy weakly coercive.
//!
//! Recomputing `I1` directly from the lamination formulas shows the printed
//! constants do not null the entry (the printed display drops a factor), so
//! two refinements are provided: hold the second fraction and re-solve the
//! shear modulus (closed form, linear), or hold the shear modulus and
//! root-find the fraction.  The verification report runs every strategy,
//! cross-checks against the discrete cell oracle, and records certificate
//! feasibility rather than assuming it.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::cell;
use crate::ellipticity::{alpha_se_numeric, EllipticityReport};
use crate::lamination::{laminate_general, laminate_isotropic_pair, LaminateModuli};
use crate::report::Tolerances;
use crate::tensors::{Axis, ElasticTensor, IsotropicPhase, LaminateProfile, Layer};
use crate::translation::{
    certify_weak_coercivity, search_translation, CertificateOutcome, TranslationSearch,
};
use crate::{Error, Result};

/// Acceptance band for the strong-ellipticity constant of the final tensor:
/// a verified loss means `alpha_se` lands in `[-1e-8, 1e-6]` (zero up to
/// solver tolerance, never clearly negative).
pub const ALPHA_BAND: (f64, f64) = (-1e-8, 1e-6);

/// Maximum angular distance (radians) between the computed minimizer and
/// `(e3, e3)` for the loss direction to count as verified.
pub const ARGMIN_ANGLE_TOL: f64 = 1e-3;

/// Element count of the independent discrete cross-check.
const CELL_ELEMENTS: usize = 64;

/// Resolution of the bracket scan when root-finding the second fraction.
const SCAN_STEP: f64 = 1e-3;

/// Seed moduli for the construction.  Only material `a` is mandatory; free
/// parameters default deterministically to interior points of their
/// admissible windows.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedModuli {
    pub lambda_a: f64,
    pub mu_a: f64,
    #[serde(default)]
    pub mu_b: Option<f64>,
    #[serde(default)]
    pub lambda_b: Option<f64>,
    #[serde(default)]
    pub alpha_c: Option<f64>,
}

/// Validity of each structural condition the construction relies on.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConditionFlags {
    /// `mu_a > 0`, `2 mu_a + lambda_a > 0`, `2 mu_a + 3 lambda_a < 0`,
    /// `4 mu_a + 3 lambda_a > 0`.
    pub material_a: bool,
    /// `mu_b` in `[-(2 mu_a + 3 lambda_a)/4, mu_a (2 mu_a + 3 lambda_a)/(3 lambda_a))`.
    pub mu_b_window: bool,
    /// `lambda_b` above its admissibility bound.
    pub lambda_b_bound: bool,
    /// `alpha_c >= -D/(C+D)`.
    pub alpha_c_bound: bool,
    pub theta1_in_unit: bool,
    pub theta2_in_unit: bool,
    /// The first lamination decouples: `|B| <= 1e-12`.
    pub b_vanishes: bool,
    pub cd_positive: bool,
    pub c2d_negative: bool,
    pub d_negative: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.material_a
            && self.mu_b_window
            && self.lambda_b_bound
            && self.alpha_c_bound
            && self.theta1_in_unit
            && self.theta2_in_unit
            && self.b_vanishes
            && self.cd_positive
            && self.c2d_negative
            && self.d_negative
    }
}

/// How the closed-form constants were (re-)derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefinementStrategy {
    /// The printed closed forms, unchanged.
    Printed,
    /// Keep the printed second fraction (which nulls the cross term `G1`)
    /// and re-solve the third material's shear modulus so the directly
    /// computed `3333` entry vanishes; the equation is linear.
    MuCRoot,
    /// Keep the printed shear modulus (which sits inside the certificate
    /// window) and root-find the second fraction by bracketed bisection on
    /// the directly computed `3333` entry.
    Theta2Root,
}

/// All strategies, in audit order.
pub const ALL_STRATEGIES: [RefinementStrategy; 3] = [
    RefinementStrategy::Printed,
    RefinementStrategy::MuCRoot,
    RefinementStrategy::Theta2Root,
];

/// The full parameter set of the construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GutierrezParameters {
    pub lambda_a: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    pub lambda_b: f64,
    /// Fraction of material `a` in the first lamination.
    pub theta1: f64,
    /// Effective moduli `A..E` of the first lamination.
    pub moduli: LaminateModuli,
    /// Ratio `lambda_c / mu_c` of the third material.
    pub alpha_c: f64,
    pub mu_c: f64,
    pub lambda_c: f64,
    /// Fraction of the first-step laminate in the second lamination.
    pub theta2: f64,
    /// Directly computed `3333` decomposition terms.
    pub i1_direct: f64,
    pub g1: f64,
    pub f1: f64,
    pub conditions: ConditionFlags,
    pub strategy: RefinementStrategy,
}

impl GutierrezParameters {
    pub fn phase_a(&self) -> IsotropicPhase {
        IsotropicPhase {
            lambda: self.lambda_a,
            mu: self.mu_a,
        }
    }

    pub fn phase_b(&self) -> IsotropicPhase {
        IsotropicPhase {
            lambda: self.lambda_b,
            mu: self.mu_b,
        }
    }

    pub fn phase_c(&self) -> IsotropicPhase {
        IsotropicPhase {
            lambda: self.lambda_c,
            mu: self.mu_c,
        }
    }

    /// Directly computed `3333` entry of the final tensor, `I1 + G1^2/F1`.
    pub fn l2_3333_closed(&self) -> f64 {
        self.i1_direct + self.g1 * self.g1 / self.f1
    }
}

fn direct_terms(m: &LaminateModuli, mu_c: f64, alpha_c: f64, theta2: f64) -> (f64, f64, f64) {
    let cd = m.c + m.d;
    let il = 2.0 * m.c * (m.c + 2.0 * m.d) / cd;
    let ic = 4.0 * mu_c * (1.0 + alpha_c) / (2.0 + alpha_c);
    let i1 = theta2 * il + (1.0 - theta2) * ic;
    let g1 = theta2 * m.d / cd + (1.0 - theta2) * alpha_c / (2.0 + alpha_c);
    let f1 = theta2 / (2.0 * cd) + (1.0 - theta2) / (mu_c * (2.0 + alpha_c));
    (i1, g1, f1)
}

/// `(I1, G1, F1)` recomputed from the lamination formulas for the current
/// parameters.  `I1` is never taken from the printed display (which is
/// dimensionally inconsistent); it is always this direct value.
pub fn direct_i1_g1_f1(p: &GutierrezParameters) -> (f64, f64, f64) {
    direct_terms(&p.moduli, p.mu_c, p.alpha_c, p.theta2)
}

/// Derives the complete parameter set from a seed, defaulting unspecified
/// free parameters deterministically: `mu_b` to the midpoint of its window,
/// `lambda_b` to 1.2 times its bound, `alpha_c` to its bound plus 0.2.
// negated comparisons are deliberate: a NaN seed value must fail every bound
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn select_parameters(seed: &SeedModuli) -> Result<GutierrezParameters> {
    let (la, ma) = (seed.lambda_a, seed.mu_a);
    if ![la, ma].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            context: "seed moduli",
        });
    }
    if !(ma > 0.0 && 2.0 * ma + la > 0.0 && 2.0 * ma + 3.0 * la < 0.0 && 4.0 * ma + 3.0 * la > 0.0)
    {
        return Err(Error::SeedConstraint {
            name: "material_a",
            detail: format!(
                "need mu_a > 0, 2 mu_a + lambda_a > 0, 2 mu_a + 3 lambda_a < 0 and \
                 4 mu_a + 3 lambda_a > 0; got lambda_a = {la}, mu_a = {ma}"
            ),
        });
    }

    let s = 2.0 * ma + 3.0 * la; // strictly negative here
    let mu_b_lo = -s / 4.0;
    let mu_b_hi = ma * s / (3.0 * la);
    let mb = seed.mu_b.unwrap_or(0.5 * (mu_b_lo + mu_b_hi));
    if !(mb >= mu_b_lo && mb < mu_b_hi) {
        return Err(Error::SeedConstraint {
            name: "mu_b_window",
            detail: format!("mu_b = {mb} outside [{mu_b_lo}, {mu_b_hi})"),
        });
    }

    let lb_bound = 2.0 * mb * mb * la / (ma * s - 3.0 * mb * la);
    let lb = seed.lambda_b.unwrap_or(1.2 * lb_bound);
    if !(lb > lb_bound) {
        return Err(Error::SeedConstraint {
            name: "lambda_b_bound",
            detail: format!("lambda_b = {lb} must exceed {lb_bound}"),
        });
    }

    let theta1 = -lb * (2.0 * ma + la) / (2.0 * (mb * la - ma * lb));
    if !(0.0 < theta1 && theta1 < 1.0) {
        return Err(Error::InvalidInput(format!(
            "derived first fraction {theta1} falls outside (0, 1)"
        )));
    }

    let pa = IsotropicPhase::new(la, ma)?;
    let pb = IsotropicPhase::new(lb, mb)?;
    let moduli = LaminateModuli::from_phases(&pa, &pb, theta1)?;
    let cd = moduli.c + moduli.d;
    let c2d = moduli.c + 2.0 * moduli.d;

    let alpha_lo = -moduli.d / cd;
    let ac = seed.alpha_c.unwrap_or(alpha_lo + 0.2);
    if !(ac >= alpha_lo) {
        return Err(Error::SeedConstraint {
            name: "alpha_c_bound",
            detail: format!("alpha_c = {ac} must be at least {alpha_lo}"),
        });
    }

    let mu_c = moduli.c * ac * c2d / (moduli.d * (1.0 + ac));
    let lambda_c = ac * mu_c;
    let theta2 = ac * cd / (ac * cd - moduli.d * (2.0 + ac));
    let (i1, g1, f1) = direct_terms(&moduli, mu_c, ac, theta2);

    let conditions = ConditionFlags {
        material_a: true,
        mu_b_window: true,
        lambda_b_bound: true,
        alpha_c_bound: true,
        theta1_in_unit: 0.0 < theta1 && theta1 < 1.0,
        theta2_in_unit: 0.0 < theta2 && theta2 < 1.0,
        b_vanishes: moduli.b.abs() <= 1e-12,
        cd_positive: cd > 0.0,
        c2d_negative: c2d < 0.0,
        d_negative: moduli.d < 0.0,
    };

    Ok(GutierrezParameters {
        lambda_a: la,
        mu_a: ma,
        mu_b: mb,
        lambda_b: lb,
        theta1,
        moduli,
        alpha_c: ac,
        mu_c,
        lambda_c,
        theta2,
        i1_direct: i1,
        g1,
        f1,
        conditions,
        strategy: RefinementStrategy::Printed,
    })
}

/// Report emitted when the fraction-root strategy finds no sign change.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoRootReport {
    pub scan_lo: f64,
    pub scan_hi: f64,
    /// Smallest directly computed `3333` value seen during the scan.
    pub min_value: f64,
    /// Fraction at which that minimum occurred.
    pub argmin: f64,
}

/// Outcome of a refinement attempt.
#[derive(Debug, Clone)]
pub enum RefineOutcome {
    Refined(GutierrezParameters),
    /// The scanned interval contains no root; reported, not raised.
    NoRoot(NoRootReport),
}

fn with_mu_c(
    p: &GutierrezParameters,
    mu_c: f64,
    strategy: RefinementStrategy,
) -> GutierrezParameters {
    let mut out = *p;
    out.mu_c = mu_c;
    out.lambda_c = p.alpha_c * mu_c;
    let (i1, g1, f1) = direct_terms(&p.moduli, mu_c, p.alpha_c, p.theta2);
    out.i1_direct = i1;
    out.g1 = g1;
    out.f1 = f1;
    out.strategy = strategy;
    out
}

fn with_theta2(
    p: &GutierrezParameters,
    theta2: f64,
    strategy: RefinementStrategy,
) -> GutierrezParameters {
    let mut out = *p;
    out.theta2 = theta2;
    let (i1, g1, f1) = direct_terms(&p.moduli, p.mu_c, p.alpha_c, theta2);
    out.i1_direct = i1;
    out.g1 = g1;
    out.f1 = f1;
    out.conditions.theta2_in_unit = 0.0 < theta2 && theta2 < 1.0;
    out.strategy = strategy;
    out
}

/// Applies one refinement strategy to a printed parameter set.
pub fn refine(
    p: &GutierrezParameters,
    strategy: RefinementStrategy,
    bisect_tol: f64,
) -> RefineOutcome {
    match strategy {
        RefinementStrategy::Printed => {
            let mut out = *p;
            out.strategy = RefinementStrategy::Printed;
            RefineOutcome::Refined(out)
        }
        RefinementStrategy::MuCRoot => {
            // I1(mu_c) = theta2 * iL + (1 - theta2) * 4 mu_c (1+a)/(2+a) is
            // linear in mu_c; its root is explicit.
            let cd = p.moduli.c + p.moduli.d;
            let il = 2.0 * p.moduli.c * (p.moduli.c + 2.0 * p.moduli.d) / cd;
            let mu_c =
                -p.theta2 * il * (2.0 + p.alpha_c) / (4.0 * (1.0 - p.theta2) * (1.0 + p.alpha_c));
            RefineOutcome::Refined(with_mu_c(p, mu_c, RefinementStrategy::MuCRoot))
        }
        RefinementStrategy::Theta2Root => {
            let entry = |t: f64| {
                let (i1, g1, f1) = direct_terms(&p.moduli, p.mu_c, p.alpha_c, t);
                i1 + g1 * g1 / f1
            };
            let scan_lo = p.theta2;
            let scan_hi = 1.0;
            let mut prev_t = scan_lo;
            let mut prev_v = entry(prev_t);
            let mut min_value = prev_v;
            let mut argmin = prev_t;
            let mut bracket = None;
            let steps = ((scan_hi - scan_lo) / SCAN_STEP).ceil() as usize;
            for k in 1..=steps {
                let t = (scan_lo + k as f64 * SCAN_STEP).min(scan_hi);
                let v = entry(t);
                if v < min_value {
                    min_value = v;
                    argmin = t;
                }
                if prev_v.signum() != v.signum() && prev_v != 0.0 {
                    bracket = Some((prev_t, t));
                    break;
                }
                prev_t = t;
                prev_v = v;
            }
            match bracket {
                Some((mut lo, mut hi)) => {
                    let flo = entry(lo);
                    for _ in 0..200 {
                        if hi - lo <= bisect_tol {
                            break;
                        }
                        let mid = 0.5 * (lo + hi);
                        if (entry(mid) >= 0.0) == (flo >= 0.0) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    let root = 0.5 * (lo + hi);
                    RefineOutcome::Refined(with_theta2(p, root, RefinementStrategy::Theta2Root))
                }
                None => RefineOutcome::NoRoot(NoRootReport {
                    scan_lo,
                    scan_hi,
                    min_value,
                    argmin,
                }),
            }
        }
    }
}

/// Effective tensor of the first lamination (axis 1).
pub fn l1_star(p: &GutierrezParameters) -> Result<ElasticTensor> {
    Ok(laminate_isotropic_pair(&p.phase_a(), &p.phase_b(), p.theta1, Axis::X1)?.1)
}

/// The second-step profile: the first-step laminate and material `c`,
/// stacked along axis 2 with fractions `theta2` and `1 - theta2`.
pub fn build_l2_profile(p: &GutierrezParameters) -> Result<LaminateProfile> {
    let l1 = l1_star(p)?;
    LaminateProfile::new(
        Axis::X2,
        vec![
            Layer::new(l1, p.theta2),
            Layer::isotropic(p.phase_c(), 1.0 - p.theta2),
        ],
    )
}

/// Verdict of one verification pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionVerdict {
    /// The fraction root does not exist for these parameters.
    NoRoot,
    /// The `3333` entry does not vanish (or the minimizer strays): the
    /// printed claim is not reproduced.
    DiscrepancyWithPrinted,
    /// Loss of strong ellipticity verified, but no feasible translation
    /// certificate found, so weak coercivity of the layered energy remains
    /// unproven.
    LossVerified,
    /// Loss verified and a feasible certificate holds: the layered energy is
    /// weakly coercive and its coercivity constant is exactly zero.
    LambdaZeroVerified,
}

/// Numerical evidence gathered for one strategy.
#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    /// `I1 + G1^2/F1`.
    pub l2_3333_closed: f64,
    /// Entry from the averaged lamination relations.
    pub l2_3333_general: f64,
    /// Entry from the discrete cell oracle.
    pub l2_3333_cell: f64,
    pub alpha_se: EllipticityReport,
    /// Angles (radians) between the minimizing pair and `(e3, e3)`.
    pub argmin_angle_a: f64,
    pub argmin_angle_b: f64,
    /// `3333` entry within tolerance of zero, `alpha_se` inside the band,
    /// minimizer aligned with `(e3, e3)`.
    pub loss_within_band: bool,
    /// `alpha_se` clearly negative: strong ellipticity is strictly violated,
    /// beyond the marginal loss the construction claims.
    pub strict_loss: bool,
    /// Certificate at the designated translation `diag(4 mu_c, 0, 0)`.
    pub step2_certificate: CertificateOutcome,
    /// Best translation found by the diagonal search with polish.
    pub diagonal_search: TranslationSearch,
}

/// Result of one strategy within the verification report.
#[derive(Debug, Clone, Serialize)]
pub struct StrategyReport {
    pub strategy: RefinementStrategy,
    pub parameters: GutierrezParameters,
    pub no_root: Option<NoRootReport>,
    pub evaluation: Option<Evaluation>,
    pub verdict: ConstructionVerdict,
}

/// The full audit: every requested strategy, plus the overall verdict (the
/// strongest any strategy achieved).
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionReport {
    /// `|B|` of the first lamination.
    pub b_residual: f64,
    pub strategies: Vec<StrategyReport>,
    pub overall: ConstructionVerdict,
}

fn angle_to_e3(v: &[f64; 3]) -> f64 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (v[2].abs() / n).clamp(0.0, 1.0).acos()
}

fn evaluate(p: &GutierrezParameters, tol: &Tolerances) -> Result<Evaluation> {
    let profile = build_l2_profile(p)?;
    let general = laminate_general(&profile)?;
    let cell_tensor = cell::homogenize_numeric(&profile, CELL_ELEMENTS)?;
    let l2_3333_general = general.entry(2, 2, 2, 2);
    let l2_3333_cell = cell_tensor.entry(2, 2, 2, 2);

    let alpha = alpha_se_numeric(&general);
    let angle_a = angle_to_e3(&alpha.argmin_a);
    let angle_b = angle_to_e3(&alpha.argmin_b);

    let loss_within_band = l2_3333_general.abs() <= tol.loss * general.scale()
        && alpha.alpha_se >= ALPHA_BAND.0
        && alpha.alpha_se <= ALPHA_BAND.1
        && angle_a <= ARGMIN_ANGLE_TOL
        && angle_b <= ARGMIN_ANGLE_TOL;
    let strict_loss = alpha.alpha_se < -tol.zero;

    let step2_d = Matrix3::from_diagonal(&Vector3::new(4.0 * p.mu_c, 0.0, 0.0));
    let step2_certificate = certify_weak_coercivity(&profile, &step2_d, tol.psd);
    let diagonal_search = search_translation(&profile, tol.psd);

    Ok(Evaluation {
        l2_3333_closed: p.l2_3333_closed(),
        l2_3333_general,
        l2_3333_cell,
        alpha_se: alpha,
        argmin_angle_a: angle_a,
        argmin_angle_b: angle_b,
        loss_within_band,
        strict_loss,
        step2_certificate,
        diagonal_search,
    })
}

/// Runs the verification for each strategy and aggregates the verdicts.
pub fn verify_construction(
    base: &GutierrezParameters,
    strategies: &[RefinementStrategy],
    tol: &Tolerances,
) -> Result<ConstructionReport> {
    let mut reports = Vec::with_capacity(strategies.len());
    for &strategy in strategies {
        let report = match refine(base, strategy, tol.bisect) {
            RefineOutcome::Refined(p) => {
                let evaluation = evaluate(&p, tol)?;
                let certified =
                    evaluation.step2_certificate.feasible || evaluation.diagonal_search.feasible;
                let verdict = if evaluation.loss_within_band && certified {
                    ConstructionVerdict::LambdaZeroVerified
                } else if evaluation.loss_within_band {
                    ConstructionVerdict::LossVerified
                } else {
                    ConstructionVerdict::DiscrepancyWithPrinted
                };
                StrategyReport {
                    strategy,
                    parameters: p,
                    no_root: None,
                    evaluation: Some(evaluation),
                    verdict,
                }
            }
            RefineOutcome::NoRoot(info) => StrategyReport {
                strategy,
                parameters: *base,
                no_root: Some(info),
                evaluation: None,
                verdict: ConstructionVerdict::NoRoot,
            },
        };
        reports.push(report);
    }
    let overall = reports
        .iter()
        .map(|r| r.verdict)
        .max()
        .unwrap_or(ConstructionVerdict::DiscrepancyWithPrinted);
    Ok(ConstructionReport {
        b_residual: base.moduli.b.abs(),
        strategies: reports,
        overall,
    })
}

/// Sign regime of the strong-ellipticity constant of the first lamination,
/// as a function of `mu_b` (with `theta1` chosen to null `B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "alpha_se_positive")]
    Positive,
    #[serde(rename = "alpha_se_zero")]
    Zero,
    #[serde(rename = "alpha_se_nonneg")]
    Nonnegative,
    /// Some layer already violates strong ellipticity pointwise.
    #[serde(rename = "not_legendre_hadamard")]
    NotLegendreHadamard,
}

/// Classifies the regime from the bulk inequalities alone.
pub fn regime(lambda_a: f64, mu_a: f64, mu_b: f64) -> Regime {
    let t = mu_a + lambda_a;
    if t >= 0.0 {
        return Regime::Positive;
    }
    let critical = -t;
    let scale = 1.0f64.max(mu_a.abs()).max(lambda_a.abs()).max(mu_b.abs());
    if (mu_b - critical).abs() <= 1e-12 * scale {
        Regime::Zero
    } else if mu_b < critical {
        Regime::NotLegendreHadamard
    } else if mu_b > -(2.0 * mu_a + 3.0 * lambda_a) / 4.0 {
        Regime::Positive
    } else {
        Regime::Nonnegative
    }
}

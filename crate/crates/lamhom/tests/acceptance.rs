//! End-to-end acceptance checks, one test per shipped guarantee.
//!
//! Every test prints a single `[PASS]`/`[FAIL]` line carrying the measured
//! numbers before asserting, so `cargo test --test acceptance -- --nocapture`
//! doubles as a verification report.  Criteria 7 and 8 audit the rank-two
//! construction against its printed constants; see the `gutierrez` module
//! docs for what the audit finds.

mod common;

use common::{alpha_se_grid, max_entry_diff};
use lamhom::cell::{cofactor_mean, homogenize_numeric, CellOperator, TrigField, TrigTerm, Wave};
use lamhom::coercivity::{
    lambda_per_sufficient, p_matrix, q_matrix, CoercivityVerdict, GeometryCase,
};
use lamhom::ellipticity::{alpha_se_numeric, alpha_vse_numeric};
use lamhom::gutierrez::{
    build_l2_profile, direct_i1_g1_f1, regime, select_parameters, verify_construction,
    ConstructionVerdict, RefinementStrategy, Regime, SeedModuli, ALL_STRATEGIES,
};
use lamhom::lamination::{delta_sweep, laminate_general, laminate_isotropic_pair, LaminateModuli};
use lamhom::tensors::{mandel_to_sym, Axis, IsotropicPhase, LaminateProfile, Layer};
use lamhom::translation::scalar_interval;
use lamhom::Tolerances;
use nalgebra::{Matrix3, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict_line(criterion: usize, ok: bool, detail: &str) {
    let tag = if ok { "[PASS]" } else { "[FAIL]" };
    println!("{tag} criterion {criterion}: {detail}");
    assert!(ok, "criterion {criterion}: {detail}");
}

fn phase(lambda: f64, mu: f64) -> IsotropicPhase {
    IsotropicPhase::new(lambda, mu).unwrap()
}

/// Strongly elliptic phase with moduli bounded away from the degenerate set,
/// so the discrete oracles stay well conditioned.
fn random_se_phase(rng: &mut ChaCha8Rng) -> IsotropicPhase {
    let mu = rng.gen_range(0.05..1.5);
    let lambda = rng.gen_range((-2.0 * mu + 0.05)..2.0);
    phase(lambda, mu)
}

fn worked_seed() -> SeedModuli {
    SeedModuli {
        lambda_a: -1.0,
        mu_a: 0.9,
        mu_b: Some(0.32),
        lambda_b: Some(2.0),
        alpha_c: Some(1.2),
    }
}

#[test]
fn criterion_01_isotropic_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst_se = 0.0f64;
    let mut worst_vse = 0.0f64;
    let mut worst_grid = 0.0f64;
    for draw in 0..200 {
        let mu = rng.gen_range(1e-6..2.0);
        let lambda = rng.gen_range(-2.0..2.0);
        let t = phase(lambda, mu).tensor();
        let se_closed = mu.min(2.0 * mu + lambda);
        let vse_closed = mu.min(2.0 * mu + 3.0 * lambda);
        worst_se = worst_se.max((alpha_se_numeric(&t).alpha_se - se_closed).abs());
        worst_vse = worst_vse.max((alpha_vse_numeric(&t) - vse_closed).abs());
        if draw % 10 == 0 {
            // slow third route on a subsample: dense direction-sphere scan
            worst_grid = worst_grid.max((alpha_se_grid(&t) - se_closed).abs());
        }
    }
    let ok = worst_se <= 1e-8 && worst_vse <= 1e-10 && worst_grid <= 1e-6;
    verdict_line(
        1,
        ok,
        &format!(
            "200 isotropic draws: |alpha_se - min(mu, 2mu+lambda)| <= {worst_se:.3e} (tol 1e-8), \
             |alpha_vse - min(mu, 2mu+3lambda)| <= {worst_vse:.3e} (tol 1e-10), \
             grid cross-check <= {worst_grid:.3e} (tol 1e-6)"
        ),
    );
}

#[test]
fn criterion_02_identical_layers_reduce_to_the_phase() {
    let p = phase(-1.0, 0.9);
    let profile = LaminateProfile::new(
        Axis::X1,
        vec![Layer::isotropic(p, 0.4), Layer::isotropic(p, 0.6)],
    )
    .unwrap();
    let entry_diff = max_entry_diff(&laminate_general(&profile).unwrap(), &p.tensor());

    let op = CellOperator::new(&profile, 64).unwrap();
    let mut corrector_max = 0.0f64;
    for k in 0..6 {
        let mut v = Vector6::zeros();
        v[k] = 1.0;
        for node in op.solve(&mandel_to_sym(&v)).corrector {
            for x in node {
                corrector_max = corrector_max.max(x.abs());
            }
        }
    }
    let ok = entry_diff <= 1e-14 && corrector_max <= 1e-13;
    verdict_line(
        2,
        ok,
        &format!(
            "identical layers: max entry deviation from the phase {entry_diff:.3e} (tol 1e-14), \
             discrete corrector max amplitude {corrector_max:.3e} (tol 1e-13)"
        ),
    );
}

#[test]
fn criterion_03_three_routes_agree_on_random_laminates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut worst_general = 0.0f64;
    let mut worst_cell = 0.0f64;
    for _ in 0..100 {
        let pa = random_se_phase(&mut rng);
        let pb = random_se_phase(&mut rng);
        let theta = rng.gen_range(0.05..0.95);
        let (_, closed) = laminate_isotropic_pair(&pa, &pb, theta, Axis::X1).unwrap();
        let profile = LaminateProfile::two_phase(pa, pb, theta, Axis::X1).unwrap();
        let general = laminate_general(&profile).unwrap();
        let discrete = homogenize_numeric(&profile, 64).unwrap();
        worst_general = worst_general.max(max_entry_diff(&general, &closed));
        worst_cell = worst_cell.max(max_entry_diff(&discrete, &closed));
    }
    let ok = worst_general <= 1e-12 && worst_cell <= 1e-10;
    verdict_line(
        3,
        ok,
        &format!(
            "100 random pairs: averaged relations vs closed form {worst_general:.3e} (tol 1e-12), \
             interface-aligned 64-element cell vs closed form {worst_cell:.3e} (tol 1e-10)"
        ),
    );
}

#[test]
fn criterion_04_fractions_null_their_target_terms() {
    let p = select_parameters(&worked_seed()).unwrap();
    let (_, g1, _) = direct_i1_g1_f1(&p);
    let b_residual = p.moduli.b.abs();
    let theta1_gap = (p.theta1 - 0.3773585).abs();
    let theta2_gap = (p.theta2 - 0.2666585).abs();
    let ok = b_residual <= 1e-12 && g1.abs() <= 1e-10 && theta1_gap <= 1e-7 && theta2_gap <= 1e-6;
    verdict_line(
        4,
        ok,
        &format!(
            "theta1 = {:.7} (within 1e-7 of 0.3773585) gives |B| = {:.3e} (tol 1e-12); \
             theta2 = {:.7} (within 1e-6 of 0.2666585) gives |G1| = {:.3e} (tol 1e-10)",
            p.theta1,
            b_residual,
            p.theta2,
            g1.abs()
        ),
    );
}

#[test]
fn criterion_05_critical_shear_modulus_grazes_ellipticity() {
    let pa = phase(-1.0, 0.9);
    let pb = phase(1.0, 0.1);
    let (_, t) = laminate_isotropic_pair(&pa, &pb, 0.5, Axis::X1).unwrap();
    let alpha = alpha_se_numeric(&t).alpha_se;
    let grid = alpha_se_grid(&t);
    let r = regime(-1.0, 0.9, 0.1);
    let ok = alpha.abs() <= 1e-8 && grid.abs() <= 1e-6 && r == Regime::Zero;
    verdict_line(
        5,
        ok,
        &format!(
            "mu_b = -(mu_a + lambda_a): alpha_se = {alpha:+.3e} (tol 1e-8), \
             grid cross-check {grid:+.3e} (tol 1e-6), classified regime {r:?}"
        ),
    );
}

#[test]
fn criterion_06_admissible_translation_implies_elliptic_laminate() {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let mut min_alpha = f64::INFINITY;
    let mut all_guaranteed = true;
    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < 100 {
        attempts += 1;
        assert!(attempts < 100_000, "sampling admissible pairs stalled");
        let pa = random_se_phase(&mut rng);
        let pb = random_se_phase(&mut rng);
        let interval = scalar_interval(&[pa, pb]);
        if interval.is_empty() {
            continue;
        }
        produced += 1;
        let d = 0.5 * (interval.lo + interval.hi);
        let sufficiency = lambda_per_sufficient(&[pa, pb], d, GeometryCase::OppositeFaces);
        all_guaranteed &= sufficiency.verdict == CoercivityVerdict::GuaranteedPositive;
        let theta = rng.gen_range(0.05..0.95);
        let profile = LaminateProfile::two_phase(pa, pb, theta, Axis::X1).unwrap();
        let hom = laminate_general(&profile).unwrap();
        min_alpha = min_alpha.min(alpha_se_numeric(&hom).alpha_se);
    }
    let ok = all_guaranteed && min_alpha > 1e-10;
    verdict_line(
        6,
        ok,
        &format!(
            "100 laminates with nonempty translation interval and slab geometry: \
             sufficiency verdict always guaranteed-positive = {all_guaranteed}, \
             min alpha_se = {min_alpha:.3e} (must exceed 1e-10)"
        ),
    );
}

#[test]
fn criterion_07_rank_two_loss_with_certificate() {
    let p = select_parameters(&worked_seed()).unwrap();
    let report = verify_construction(&p, &ALL_STRATEGIES, &Tolerances::default()).unwrap();

    let mut lines = Vec::new();
    let mut any_loss = false;
    let mut all_recorded = true;
    for s in &report.strategies {
        match (&s.evaluation, &s.no_root) {
            (Some(e), _) => {
                let nulled = e.l2_3333_general.abs() <= 1e-9;
                let in_band = e.alpha_se.alpha_se >= -1e-8 && e.alpha_se.alpha_se <= 1e-6;
                let aligned = e.argmin_angle_a <= 1e-3 && e.argmin_angle_b <= 1e-3;
                any_loss |= nulled && in_band && aligned;
                lines.push(format!(
                    "{:?}: 3333 = {:+.4e}, alpha_se = {:+.4e}, minimizer angles ({:.2e}, {:.2e}) rad, \
                     fixed cert feasible = {}, searched cert feasible = {}, verdict {:?}",
                    s.strategy,
                    e.l2_3333_general,
                    e.alpha_se.alpha_se,
                    e.argmin_angle_a,
                    e.argmin_angle_b,
                    e.step2_certificate.feasible,
                    e.diagonal_search.feasible,
                    s.verdict
                ));
            }
            (None, Some(nr)) => lines.push(format!(
                "{:?}: no fraction root in ({:.3}, {:.3}); min 3333 = {:+.4e} at theta2 = {:.4}; verdict {:?}",
                s.strategy, nr.scan_lo, nr.scan_hi, nr.min_value, nr.argmin, s.verdict
            )),
            _ => {
                all_recorded = false;
                lines.push(format!("{:?}: no record; verdict {:?}", s.strategy, s.verdict));
            }
        }
    }

    // Independent read of the re-solved laminate: rebuild it from the refined
    // parameters and scan the direction sphere instead of trusting the
    // alternating iteration.
    if let Some(refit) = report
        .strategies
        .iter()
        .find(|s| s.strategy == RefinementStrategy::MuCRoot)
    {
        if refit.evaluation.is_some() {
            let hom = laminate_general(&build_l2_profile(&refit.parameters).unwrap()).unwrap();
            lines.push(format!(
                "grid cross-check of the re-solved laminate: alpha_se = {:+.4e}",
                alpha_se_grid(&hom)
            ));
        }
    }

    let ok = any_loss && all_recorded;
    verdict_line(
        7,
        ok,
        &format!(
            "need one strategy with |3333| <= 1e-9, alpha_se in [-1e-8, 1e-6] and minimizer within \
             1e-3 rad of (e3, e3); overall verdict {:?}; measured: {}",
            report.overall,
            lines.join(" | ")
        ),
    );
}

#[test]
fn criterion_08_positive_entry_reported_and_half_shear_refit() {
    let p = select_parameters(&worked_seed()).unwrap();
    let report = verify_construction(&p, &ALL_STRATEGIES, &Tolerances::default()).unwrap();
    let printed = report
        .strategies
        .iter()
        .find(|s| s.strategy == RefinementStrategy::Printed)
        .unwrap();
    let refit = report
        .strategies
        .iter()
        .find(|s| s.strategy == RefinementStrategy::MuCRoot)
        .unwrap();
    let ep = printed.evaluation.as_ref().unwrap();
    let er = refit.evaluation.as_ref().unwrap();

    let entry = ep.l2_3333_general;
    let quoted_gap = (entry - 0.0089931).abs();
    let cell_gap_printed = (ep.l2_3333_general - ep.l2_3333_cell).abs();
    let cell_null_refit = er.l2_3333_cell.abs();
    let half_gap = (refit.parameters.mu_c - 0.5 * printed.parameters.mu_c).abs();
    let flagged = printed.verdict == ConstructionVerdict::DiscrepancyWithPrinted
        && report.overall == ConstructionVerdict::DiscrepancyWithPrinted;

    let ok = entry > 0.0
        && quoted_gap <= 1e-5
        && cell_gap_printed <= 1e-9
        && cell_null_refit <= 1e-9
        && half_gap <= 1e-10
        && flagged;
    verdict_line(
        8,
        ok,
        &format!(
            "printed constants give 3333 = {entry:+.7e} (strictly positive, {quoted_gap:.2e} from \
             +0.0089931, tol 1e-5), cell oracle agrees to {cell_gap_printed:.2e}; re-solved shear \
             modulus sits at half the printed one to {half_gap:.2e} and its cell 3333 = \
             {cell_null_refit:.2e}; reported as discrepancy rather than corrected = {flagged}"
        ),
    );
}

#[test]
fn criterion_09_perturbation_sweep_descends_to_the_limit() {
    let pa = phase(-1.0, 0.9);
    let pb = phase(2.0, 0.32);
    let theta = 20.0 / 53.0;
    let profile = LaminateProfile::two_phase(pa, pb, theta, Axis::X1).unwrap();
    let mut m = Matrix3::zeros();
    m[(0, 0)] = 1.0;
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let points = delta_sweep(&profile, &m, &deltas).unwrap();

    let mut monotone = true;
    for w in points.windows(2) {
        monotone &= w[1].energy <= w[0].energy + 1e-13;
    }
    let limit = 1.0 / LaminateModuli::from_phases(&pa, &pb, theta).unwrap().a;
    let at_smallest = points.iter().find(|pt| pt.delta == 1e-6).unwrap().energy;
    let rel = (at_smallest - limit).abs() / limit;
    let ok = monotone && rel <= 1e-4;
    verdict_line(
        9,
        ok,
        &format!(
            "energies nonincreasing across delta = 1e-1 .. 1e-6 and 0: {monotone} (slack 1e-13); \
             relative gap to 1/A at delta = 1e-6: {rel:.3e} (tol 1e-4)"
        ),
    );
}

fn random_freq(rng: &mut ChaCha8Rng) -> [i32; 3] {
    loop {
        let f = [
            rng.gen_range(-2..=2),
            rng.gen_range(-2..=2),
            rng.gen_range(-2..=2),
        ];
        if f != [0, 0, 0] {
            return f;
        }
    }
}

#[test]
fn criterion_10_boundary_spectra_and_quasi_affinity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);

    let mut worst_q = 0.0f64;
    let mut worst_p = 0.0f64;
    let u = Vector3::new(1.0, 1.0, 1.0) / 3.0f64.sqrt();
    for _ in 0..30 {
        let p = phase(rng.gen_range(-2.0..2.0), rng.gen_range(1e-3..2.0));
        let q_eigs = q_matrix(&p, 4.0 * p.mu).symmetric_eigenvalues();
        worst_q = worst_q.max(q_eigs.iter().fold(f64::INFINITY, |a, &e| a.min(e.abs())));
        let d = -(2.0 * p.mu + 3.0 * p.lambda);
        worst_p = worst_p.max((p_matrix(&p, d) * u).amax());
    }

    let mut worst_affine = 0.0f64;
    for _ in 0..50 {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            terms.push(TrigTerm {
                amplitude: [
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                ],
                freq: random_freq(&mut rng),
                wave: if rng.gen_bool(0.5) {
                    Wave::Cos
                } else {
                    Wave::Sin
                },
            });
        }
        let field = TrigField { terms };
        let base = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        worst_affine = worst_affine.max(cofactor_mean(&field, &base, 0).residual);
    }

    let ok = worst_q <= 1e-12 && worst_p <= 1e-12 && worst_affine <= 1e-11;
    verdict_line(
        10,
        ok,
        &format!(
            "shear form at d = 4mu has an eigenvalue within {worst_q:.3e} of zero (tol 1e-12); \
             volumetric form at 2mu + 3lambda = -d annihilates (1,1,1)/sqrt(3) to {worst_p:.3e} \
             (tol 1e-12); cofactor mean residual over 50 random fields <= {worst_affine:.3e} \
             (tol 1e-11)"
        ),
    );
}

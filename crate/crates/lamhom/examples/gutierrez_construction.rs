//! Audit of the rank-two lamination that is supposed to drive the
//! strong-ellipticity constant of the homogenized tensor to exactly zero.
//!
//! The printed closed forms pick every parameter from a single seed material.
//! Recomputing the final `3333` entry directly shows it does not vanish with
//! the printed shear modulus of the third material; the audit therefore runs
//! the printed parameters plus two refinements, cross-checks each against the
//! averaged relations and the discrete cell solver, and reports certificate
//! feasibility for the second lamination step.

use lamhom::gutierrez::{select_parameters, verify_construction, SeedModuli, ALL_STRATEGIES};
use lamhom::Tolerances;

fn main() {
    let seed = SeedModuli {
        lambda_a: -1.0,
        mu_a: 0.9,
        mu_b: Some(0.32),
        lambda_b: Some(2.0),
        alpha_c: Some(1.2),
    };
    let params = select_parameters(&seed).unwrap();

    println!("derived parameters:");
    println!("  theta1 = {:.10} (first fraction, nulls B)", params.theta1);
    println!("  B      = {:+.3e}", params.moduli.b);
    println!("  mu_c   = {:.10} (printed closed form)", params.mu_c);
    println!(
        "  theta2 = {:.10} (second fraction, nulls G1)",
        params.theta2
    );
    println!("  G1     = {:+.3e}", params.g1);
    println!(
        "  I1     = {:+.10} (directly recomputed; printed value claims 0)",
        params.i1_direct
    );

    let report = verify_construction(&params, &ALL_STRATEGIES, &Tolerances::default()).unwrap();
    for strategy in &report.strategies {
        println!("\nstrategy {:?}:", strategy.strategy);
        match (&strategy.evaluation, &strategy.no_root) {
            (Some(ev), _) => {
                println!(
                    "  3333 entry: closed {:+.6e}, relations {:+.6e}, cell {:+.6e}",
                    ev.l2_3333_closed, ev.l2_3333_general, ev.l2_3333_cell
                );
                println!(
                    "  alpha_se = {:+.6e}, minimizer {:.4} / {:.4} rad from e3",
                    ev.alpha_se.alpha_se, ev.argmin_angle_a, ev.argmin_angle_b
                );
                println!(
                    "  step-2 certificate feasible: {}; diagonal search feasible: {}",
                    ev.step2_certificate.feasible, ev.diagonal_search.feasible
                );
            }
            (None, Some(info)) => {
                println!(
                    "  no root of the 3333 entry over fractions ({:.4}, {:.4});",
                    info.scan_lo, info.scan_hi
                );
                println!(
                    "  minimum {:+.6e} at fraction {:.4}",
                    info.min_value, info.argmin
                );
            }
            _ => unreachable!(),
        }
        println!("  verdict: {:?}", strategy.verdict);
    }
    println!("\noverall: {:?}", report.overall);
    println!(
        "\nThe entry can be nulled (refined mu_c is exactly half the printed value),\n\
         but the refined laminate then dips strictly below zero a few degrees off\n\
         the advertised direction, and no translation certificate exists for it."
    );
}

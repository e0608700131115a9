//! Sufficient conditions for a strictly positive periodic coercivity
//! constant of a multiphase isotropic laminate.
//!
//! With the scalar translation `d I`, each phase contributes two small
//! matrices: `P` (volumetric part, 3x3) and `Q` (shear part, 2x2).  A phase
//! is degenerate when one of them has a zero eigenvalue: `d = 4 mu` puts it
//! on the shear boundary, `2 mu + 3 lambda = -d` on the volumetric one.  The
//! volumetric case additionally needs a declared geometric arrangement of the
//! degenerate regions before positivity can be concluded.

use lamhom::coercivity::{
    classify_phases, lambda_per_sufficient, p_matrix, q_matrix, GeometryCase,
};
use lamhom::translation::scalar_interval;
use lamhom::IsotropicPhase;

fn main() {
    let phases = [
        IsotropicPhase::new(-1.0, 0.9).unwrap(), // volumetric boundary at d = 1.2
        IsotropicPhase::new(2.0, 0.3).unwrap(),  // shear boundary at d = 1.2
        IsotropicPhase::new(1.0, 1.0).unwrap(),  // interior
    ];
    let d = 1.2;

    let classes = classify_phases(&phases, d);
    println!("classification at d = {d}:");
    for (k, (phase, class)) in phases.iter().zip(&classes.classes).enumerate() {
        let p_eigs = p_matrix(phase, d).symmetric_eigenvalues();
        let q_eigs = q_matrix(phase, d).symmetric_eigenvalues();
        println!(
            "  phase {k} (lambda {:+.1}, mu {:.1}): {class:?}; P eigs {:?}, Q eigs {:?}",
            phase.lambda,
            phase.mu,
            p_eigs
                .iter()
                .map(|e| (e * 1e6).round() / 1e6)
                .collect::<Vec<_>>(),
            q_eigs
                .iter()
                .map(|e| (e * 1e6).round() / 1e6)
                .collect::<Vec<_>>(),
        );
    }

    let interval = scalar_interval(&phases);
    println!(
        "\nscalar interval for all three phases: [{:.4}, {:.4}]",
        interval.lo, interval.hi
    );

    // laminate slabs always satisfy the opposite-face arrangement
    let verdict = lambda_per_sufficient(&phases, d, GeometryCase::OppositeFaces);
    println!(
        "\nwith layered (opposite-face) geometry: {:?}",
        verdict.verdict
    );

    // without any geometric information the volumetric-boundary phase blocks
    // the conclusion
    let verdict = lambda_per_sufficient(&phases, d, GeometryCase::None);
    println!(
        "with no declared geometry:             {:?}",
        verdict.verdict
    );
    println!("  reason: {}", verdict.detail);

    // moving d off the interval breaks pointwise nonnegativity outright
    let verdict = lambda_per_sufficient(&phases, 2.5, GeometryCase::OppositeFaces);
    println!(
        "\nat d = 2.5 (outside the interval):     {:?}",
        verdict.verdict
    );
    println!("  reason: {}", verdict.detail);
}

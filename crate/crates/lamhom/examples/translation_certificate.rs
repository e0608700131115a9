//! Certifying weak coercivity of a layered energy by translation.
//!
//! Adding the null Lagrangian `D : Cof(grad u)` to the energy density changes
//! nothing under the integral, but can make the density pointwise nonnegative
//! in every layer.  Pointwise nonnegativity of `L M:M + D:Cof(M)` is a 9x9
//! positive-semidefiniteness test per layer; for isotropic layers and
//! `D = d I`, the admissible `d` form an explicit interval.

use lamhom::translation::{
    certify_weak_coercivity, scalar_interval, search_translation, translated_form_matrix,
};
use lamhom::{Axis, IsotropicPhase, LaminateProfile};
use nalgebra::Matrix3;

fn main() {
    let a = IsotropicPhase::new(-1.0, 0.9).unwrap();
    let b = IsotropicPhase::new(2.0, 0.32).unwrap();
    let profile = LaminateProfile::two_phase(a, b, 20.0 / 53.0, Axis::X1).unwrap();

    let interval = scalar_interval(&[a, b]);
    println!(
        "scalar translations d I with both layers pointwise nonnegative: [{:.6}, {:.6}]",
        interval.lo, interval.hi
    );

    let d_mid = 0.5 * (interval.lo + interval.hi);
    let outcome = certify_weak_coercivity(&profile, &(Matrix3::identity() * d_mid), 1e-10);
    println!("\ncertificate at d = {d_mid:.4}:");
    for (k, eig) in outcome.per_layer_min_eig.iter().enumerate() {
        println!("  layer {k}: min eigenvalue of the translated 9x9 form = {eig:+.6e}");
    }
    println!("  feasible: {}", outcome.feasible);

    // outside the interval the first layer's form turns indefinite
    let d_bad = interval.hi + 0.5;
    let outcome = certify_weak_coercivity(&profile, &(Matrix3::identity() * d_bad), 1e-10);
    println!("\ncertificate at d = {d_bad:.4}:");
    for (k, eig) in outcome.per_layer_min_eig.iter().enumerate() {
        println!("  layer {k}: min eigenvalue = {eig:+.6e}");
    }
    println!("  feasible: {}", outcome.feasible);

    // the search needs no interval: it optimizes the worst eigenvalue over
    // diagonal translations, then polishes with full matrices
    let search = search_translation(&profile, 1e-10);
    println!(
        "\ndiagonal search: objective {:+.6e}, feasible {}",
        search.objective, search.feasible
    );
    println!("  d = {:?}", search.d[0]);

    // a single phase that is strongly but not very strongly elliptic cannot
    // be translated at all: its scalar interval is empty
    let lone = scalar_interval(&[a]);
    println!(
        "\nsingle phase (-1, 0.9): interval [{:.4}, {:.4}] is empty = {}",
        lone.lo,
        lone.hi,
        lone.is_empty()
    );
    let q = translated_form_matrix(&a.tensor(), &Matrix3::zeros());
    let min_eig = q
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |m, &x| m.min(x));
    println!("untranslated 9x9 form of that phase: min eigenvalue {min_eig:+.4}");
}

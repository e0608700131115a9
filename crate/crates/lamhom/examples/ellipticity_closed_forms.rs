//! Strong and very strong ellipticity constants of isotropic phases:
//! closed forms against the numeric minimizers.
//!
//! For Lame coefficients (lambda, mu) the closed forms are
//! `alpha_se = min{mu, 2 mu + lambda}` (acoustic-matrix eigenvalues) and
//! `alpha_vse = min{mu, 2 mu + 3 lambda}`.  The numeric routes recompute both
//! without using isotropy: an alternating eigenvector iteration over rank-one
//! pairs for `alpha_se`, a 6x6 eigenvalue problem for `alpha_vse`.

use lamhom::ellipticity::{
    alpha_se_isotropic, alpha_se_numeric, alpha_vse_isotropic, alpha_vse_numeric,
};
use lamhom::IsotropicPhase;

fn main() {
    let phases = [
        (1.0, 1.0, "very strongly elliptic"),
        (-1.0, 0.9, "strongly elliptic only"),
        (-1.5, 0.9, "compression branch active"),
        (2.0, 0.32, "stiff in compression, soft in shear"),
    ];

    println!(
        "{:>8} {:>6} | {:>12} {:>12} | {:>12} {:>12} | note",
        "lambda", "mu", "a_se closed", "a_se numeric", "a_vse closed", "a_vse numeric"
    );
    for (lambda, mu, note) in phases {
        let p = IsotropicPhase::new(lambda, mu).unwrap();
        let t = p.tensor();
        let numeric = alpha_se_numeric(&t);
        println!(
            "{lambda:>8.3} {mu:>6.3} | {:>12.8} {:>12.8} | {:>12.8} {:>12.8} | {note}",
            alpha_se_isotropic(&p),
            numeric.alpha_se,
            alpha_vse_isotropic(&p),
            alpha_vse_numeric(&t),
        );
    }

    // The minimizing rank-one pair: orthogonal for the shear branch,
    // aligned for the compression branch.
    for (lambda, mu) in [(1.0, 1.0), (-1.5, 0.9)] {
        let p = IsotropicPhase::new(lambda, mu).unwrap();
        let rep = alpha_se_numeric(&p.tensor());
        let dot = rep.argmin_a_vec().dot(&rep.argmin_b_vec()).abs();
        println!(
            "\nphase ({lambda}, {mu}): alpha_se = {:.8} after {} iterations, |a.b| = {dot:.6}",
            rep.alpha_se, rep.iterations
        );
    }
}

//! The discrete periodic cell problem behind the homogenized tensor.
//!
//! For a laminate, the corrector varies along the layering axis only, so the
//! cell problem reduces to a periodic one-dimensional finite element system.
//! On meshes whose nodes hit the layer interfaces the piecewise-linear answer
//! is exact, which makes the solver a sharp independent check of the
//! closed-form lamination relations.

use lamhom::cell::CellOperator;
use lamhom::lamination::laminate_general;
use lamhom::{Axis, IsotropicPhase, LaminateProfile};
use nalgebra::Matrix3;

fn main() {
    let a = IsotropicPhase::new(-1.0, 0.9).unwrap();
    let b = IsotropicPhase::new(2.0, 0.32).unwrap();
    let profile = LaminateProfile::two_phase(a, b, 20.0 / 53.0, Axis::X1).unwrap();

    let op = CellOperator::new(&profile, 64).unwrap();
    println!("mesh: {} elements along axis 1", op.element_count());

    // energy of the mean strain e1 x e1, with and without the corrector
    let m = Matrix3::from_fn(|i, j| if (i, j) == (0, 0) { 1.0 } else { 0.0 });
    let plain = op.mean_energy(&m);
    let solution = op.solve(&m);
    println!("mean strain e1xe1:");
    println!("  energy without corrector  {plain:.10} (arithmetic mean of layer energies)");
    println!("  energy with corrector     {:.10}", solution.energy);
    let max_corr = solution
        .corrector
        .iter()
        .flat_map(|c| c.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    println!("  corrector amplitude       {max_corr:.6}");

    let discrete = op.homogenize().unwrap();
    let closed = laminate_general(&profile).unwrap();
    let diff = (discrete.mandel() - closed.mandel()).abs().max();
    println!("\nhomogenized tensor vs analytic relations: max entry difference {diff:.3e}");

    // identical layers: nothing to correct
    let same = LaminateProfile::two_phase(a, a, 0.37, Axis::X1).unwrap();
    let op_same = CellOperator::new(&same, 32).unwrap();
    let sol = op_same.solve(&m);
    let max_corr = sol
        .corrector
        .iter()
        .flat_map(|c| c.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    println!(
        "\nidentical layers: corrector amplitude {max_corr:.2e} (exactly zero up to rounding)"
    );

    // a layer violating strong ellipticity makes the cell energy unbounded;
    // the assembled stiffness fails its factorization and reports why
    let bad = IsotropicPhase::new(-3.0, 1.0).unwrap();
    let bad_profile = LaminateProfile::two_phase(a, bad, 0.5, Axis::X1).unwrap();
    match CellOperator::new(&bad_profile, 16) {
        Err(e) => println!("\nnon-elliptic layer rejected: {e}"),
        Ok(_) => unreachable!("lambda + 2 mu < 0 cannot factor"),
    }
}

//! Spectral and Wilson discretizations of the same chain.

use dirac_entanglement::clifford::build_gamma_rep;
use dirac_entanglement::lattice::{build_dirac_spectral, build_dirac_wilson, TorusGeometry};
use dirac_entanglement::linalg::{self, eigenvalues_hermitian};

fn main() -> dirac_entanglement::Result<()> {
    let rep = build_gamma_rep(4)?;
    let geom = TorusGeometry::new(1, 32, 1.0, 0.5)?;

    let spectral = build_dirac_spectral(&geom, &rep)?;
    let spec = eigenvalues_hermitian(&spectral.h)?;
    let mirror = spec.iter().zip(spec.iter().rev()).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
    println!(
        "spectral: dim {}, |H^2 - L| = {:.2e}, spectrum mirror defect {:.2e}",
        spectral.dim(),
        spectral.lichnerowicz_residual(),
        mirror
    );
    println!("          gap = {:.6} (mass 0.5)", spec.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min));

    for r in [0.0, 0.5, 1.0] {
        let wilson = build_dirac_wilson(&geom, &rep, r)?;
        let spec = eigenvalues_hermitian(&wilson.h)?;
        let gap = spec.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        let top = spec.iter().map(|x| x.abs()).fold(0.0, f64::max);
        // Nearest-neighbour: H(x, y) vanishes beyond one site.
        let reach = (0..wilson.dim())
            .flat_map(|i| (0..wilson.dim()).map(move |j| (i, j)))
            .filter(|&(i, j)| wilson.h[(i, j)].norm() > 0.0)
            .map(|(i, j)| {
                let (x, y) = (i / 4, j / 4);
                x.abs_diff(y).min(32 - x.abs_diff(y))
            })
            .max()
            .unwrap_or(0);
        println!(
            "wilson r={r}: gap {gap:.6}, top {top:.4}, hopping range {reach}, |H^2 - L| = {:.3}",
            linalg::distance(&(&wilson.h * &wilson.h), &wilson.l)
        );
    }
    Ok(())
}

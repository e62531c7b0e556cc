//! Appendix norm ‖(1 − χ̂) L^{−1/2} χ‖ against separation for several constant curvatures.

use dirac_entanglement::bounds::{appendix_decay_norm_eig, fit_decay_rate, least_squares, positive_eigen, FitPolicy};
use dirac_entanglement::lattice::{build_cutoffs, build_scalar_lichnerowicz, Curvature, Region, TorusGeometry};

fn main() -> dirac_entanglement::Result<()> {
    let m = 0.5;
    let ds: Vec<usize> = (6..=30).step_by(2).collect();
    println!("{:>8} {:>8} {:>10} {:>12} {:>14}", "R/m^2", "M", "raw rate", "corrected", "arccosh(1+M^2/2)");
    let mut base = None;
    for k in [0.0, 1.0, 2.0, 4.0, 12.0] {
        let geom = TorusGeometry::new(1, 256, 1.0, m)?.with_curvature(Curvature::Constant(k * m * m))?;
        let eig = positive_eigen(&build_scalar_lichnerowicz(&geom)?)?;
        let a = Region::interval(&geom, 0, 4)?;
        let mut points = Vec::new();
        for &d in &ds {
            let b = Region::interval(&geom, 3 + d, 4)?;
            let cutoffs = build_cutoffs(&geom, &a, &b, 1.0)?;
            points.push((d as f64, appendix_decay_norm_eig(&eig, &cutoffs, -0.5, 0.0)?));
        }
        let raw = -fit_decay_rate(&points, &FitPolicy::default())?.slope;
        // Remove the d^{-1/2} prefactor of the one-dimensional kernel.
        let corrected =
            -least_squares(&points.iter().map(|&(d, v)| (d, v.ln() + 0.5 * d.ln())).collect::<Vec<_>>()).slope;
        let mass = geom.effective_mass()?;
        let base_rate = *base.get_or_insert(raw);
        println!(
            "{k:>8} {mass:>8.4} {raw:>10.4} {corrected:>12.4} {:>14.4}   ratio to R=0: {:.3}",
            (1.0 + mass * mass / 2.0).acosh(),
            raw / base_rate
        );
    }
    Ok(())
}

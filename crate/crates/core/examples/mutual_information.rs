//! Mutual information of two intervals against separation, with the resolution floor made visible.

use dirac_entanglement::clifford::build_gamma_rep;
use dirac_entanglement::gaussian_ref::{mutual_information, region_entropy};
use dirac_entanglement::lattice::{build_dirac_wilson, Region, TorusGeometry};
use dirac_entanglement::quasifree::ground_symbol;

fn main() -> dirac_entanglement::Result<()> {
    let geom = TorusGeometry::new(1, 128, 1.0, 0.5)?;
    let sym = ground_symbol(&build_dirac_wilson(&geom, &build_gamma_rep(4)?, 1.0)?)?;
    let a = Region::interval(&geom, 0, 8)?;
    println!(
        "S(A) = {:.6}, S(A') = {:.6}",
        region_entropy(&sym, &a, 4)?,
        region_entropy(&sym, &a.complement(&geom), 4)?
    );
    println!("{:>4} {:>14} {:>14} {:>10}", "d", "I(A:B)", "raw", "resolved");
    for d in (2..=40).step_by(4) {
        let b = Region::interval(&geom, 7 + d, 8)?;
        let r = mutual_information(&sym, &a, &b, 4)?;
        println!("{d:>4} {:>14.6e} {:>14.6e} {:>10}", r.mutual_information, r.raw_mutual_information, r.resolved);
    }
    Ok(())
}

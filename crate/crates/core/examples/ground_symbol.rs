//! Ground-state symbol Σ₀ = H/|H|, its defining relations and a binary dump round trip.

use dirac_entanglement::clifford::build_gamma_rep;
use dirac_entanglement::lattice::{build_dirac_wilson, region_projector, Region, TorusGeometry};
use dirac_entanglement::linalg;
use dirac_entanglement::quasifree::{
    ground_symbol, read_symbol_dump, restrict_symbol, verify_majorana_relations, write_symbol_dump,
};

fn main() -> dirac_entanglement::Result<()> {
    let geom = TorusGeometry::new(1, 24, 1.0, 0.5)?;
    let dirac = build_dirac_wilson(&geom, &build_gamma_rep(4)?, 1.0)?;
    let sym = ground_symbol(&dirac)?;

    let report = verify_majorana_relations(&sym)?;
    println!(
        "|S - S*| = {:.1e}, |S^2 - 1| = {:.1e}, |G S G + S| = {:.1e}",
        report.self_adjoint,
        report.purity,
        report.majorana.unwrap_or(f64::NAN)
    );

    // Restricted to a region, the symbol is no longer an involution.
    let region = Region::interval(&geom, 0, 6)?;
    let restricted = restrict_symbol(&sym, &region_projector(&geom, &region, 4));
    let s = restricted.eigenvalues()?;
    let interior = s.iter().filter(|x| x.abs() < 1.0 - 1e-8).count();
    println!("restricted to 6 sites: {} eigenvalues, {interior} strictly inside (-1, 1)", s.len());

    let mut bytes = Vec::new();
    write_symbol_dump(&mut bytes, &sym)?;
    let (header, back) = read_symbol_dump(bytes.as_slice())?;
    println!(
        "dump: {} bytes, header {header:?}, round-trip error {:.1e}",
        bytes.len(),
        linalg::distance(&back, &sym.sigma)
    );
    Ok(())
}

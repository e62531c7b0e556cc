//! Modular spectrum of a region and the norm identities it satisfies.

use dirac_entanglement::clifford::build_gamma_rep;
use dirac_entanglement::lattice::{build_dirac_spectral, region_projector, Region, TorusGeometry};
use dirac_entanglement::linalg::{c64, CMat};
use dirac_entanglement::modular::{
    gamma_real_basis, modular_data, prop53_norm_comparison, spectral_asymmetry, verify_prop52_quadratic_form,
};
use dirac_entanglement::quasifree::{ground_symbol, restrict_symbol};

fn main() -> dirac_entanglement::Result<()> {
    let geom = TorusGeometry::new(1, 16, 1.0, 0.5)?;
    let sym = ground_symbol(&build_dirac_spectral(&geom, &build_gamma_rep(4)?)?)?;
    let region = Region::interval(&geom, 0, 5)?;
    let rsym = restrict_symbol(&sym, &region_projector(&geom, &region, 4));
    let data = modular_data(&rsym)?;
    println!(
        "region of 5 sites: {} modes, {} in the kernel of 1 - s^2, asymmetry {:.1e}",
        data.s.len(),
        data.kernel_count,
        spectral_asymmetry(&data.s)
    );

    // Quadratic-form identity on one Γ-real vector, across exponents.
    let basis = gamma_real_basis(sym.gamma.as_ref().expect("Majorana conjugation"), &region.indices(4));
    let k = CMat::from_fn(basis.nrows(), 1, |i, _| {
        (0..basis.ncols()).fold(c64::new(0.0, 0.0), |acc, j| acc + basis[(i, j)] * (1.0 / (1.0 + j as f64)))
    });
    for a in [0.05, 0.1, 0.2, 0.25, 0.5] {
        println!("a = {a:<4}: relative residual {:.2e}", verify_prop52_quadratic_form(&sym, &rsym, &k, a)?);
    }

    // Real versus complex trace norms for nested regions.
    let v_check = Region::interval(&geom, 2, 2)?;
    let v_hat = Region::interval(&geom, 0, 6)?;
    for a in [0.1, 0.25] {
        let r = prop53_norm_comparison(&sym, &geom, &v_check, &v_hat, a)?;
        println!("a = {a}: lhs {:.4} <= {:.4} = 2 c_a rhs: {}", r.lhs, r.real_factor * r.c_a * r.rhs, r.holds());
    }
    Ok(())
}

//! Charge-conjugation signs and time reversal across spacetime dimensions.

use dirac_entanglement::clifford::{build_gamma_rep, certify_no_time_reversal, gamma_table_row};

fn main() -> dirac_entanglement::Result<()> {
    println!("{:>3} {:>5} {:>4} {:>6} {:>4}  note", "D", "n", "eps", "T", "T^2");
    for d in 2..=12 {
        let row = gamma_table_row(d)?;
        let sign = |s: Option<i8>| s.map_or("-".into(), |v| format!("{v:+}"));
        println!(
            "{:>3} {:>5} {:>4} {:>6} {:>4}  {}",
            row.dimension,
            row.spinor_size,
            sign(row.epsilon),
            if row.time_reversal_exists { "yes" } else { "no" },
            sign(row.t_squared),
            row.note
        );
    }

    // The D = 3 no-go, counted two independent ways.
    let cert = certify_no_time_reversal(&build_gamma_rep(3)?);
    println!(
        "\nD = 3: solution dimension {} ({:?}), projector trace {:.3e}, smallest singular value {:.3}",
        cert.solution_dimension, cert.rank_route, cert.projector_trace, cert.smallest_singular_value
    );
    Ok(())
}

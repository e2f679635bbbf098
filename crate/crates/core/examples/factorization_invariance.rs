//! Extend-then-remove round trips with random ancilla screens.
//!
//! cargo run --example factorization_invariance

use multiscreen::random::{random_arrangement, seeded};
use multiscreen::tensor::ScreenConfiguration;
use multiscreen::transforms::verify_factorization_invariance_seeded;

fn main() -> multiscreen::Result<()> {
    let mut rng = seeded(5);
    for counts in [vec![2], vec![3, 2], vec![2, 2, 2]] {
        let ea = random_arrangement(ScreenConfiguration::new(counts)?, 3, &mut rng)?;
        for ancilla in 2..=4 {
            let r = verify_factorization_invariance_seeded(&ea, ancilla, 20, 100)?;
            println!(
                "{} + ancilla {ancilla}: round trip {:e}, marginals {:e}, passed {}",
                ea.shape(),
                r.max_roundtrip_residual,
                r.max_marginal_residual,
                r.passed
            );
        }
    }
    Ok(())
}

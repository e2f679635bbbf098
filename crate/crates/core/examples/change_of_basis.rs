//! Changing basis, including across factorizations, and checking that the
//! spectrum and all valuations survive.
//!
//! cargo run --example change_of_basis

use multiscreen::format::{parse_arrangement, parse_transformation};
use multiscreen::random::{haar_unitary, random_arrangement, seeded};
use multiscreen::tensor::ScreenConfiguration;
use multiscreen::transforms::{change_basis, refactorize, verify_basis_invariance, BasisTransformation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fig2 = parse_arrangement(include_str!("data/fig2.ea"))?;
    let hadamard = parse_transformation(include_str!("data/hadamard.bt"))?;
    let rotated = change_basis(&fig2, &hadamard)?;
    println!("diag(0.7, 0.3) in the Hadamard basis:");
    for (index, p) in rotated.potentia_table() {
        println!("  potentia{index} = {p:.6}");
    }

    // Regrouping [2,2,2] as [8] or [2,4] keeps every entry.
    let mut rng = seeded(11);
    let ea = random_arrangement(ScreenConfiguration::new(vec![2, 2, 2])?, 2, &mut rng)?;
    let flat = refactorize(&ea, ScreenConfiguration::new(vec![8])?)?;
    println!("refactorized {} -> {}", ea.shape(), flat.shape());

    // A random unitary from [2,2,2] to [2,4].
    let target = ScreenConfiguration::new(vec![2, 4])?;
    let bt = BasisTransformation::new(ea.shape().clone(), target, haar_unitary(8, &mut rng))?;
    let report = verify_basis_invariance(&ea, &bt)?;
    println!(
        "degree {} -> {}: spectrum residual {:e}, valuation residual {:e} over {} probes",
        report.source_degree, report.target_degree, report.spectrum_residual, report.valuation_residual, report.probes
    );
    Ok(())
}

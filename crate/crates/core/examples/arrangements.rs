//! Building arrangements and reading off potentia and purity.
//!
//! cargo run --example arrangements

use multiscreen::format::parse_arrangement;
use multiscreen::isa::ExperimentalArrangement;
use multiscreen::tensor::{Complex64, MultiIndex, ScreenConfiguration};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // One screen, two detectors, potentia 0.7 and 0.3.
    let fig2 = parse_arrangement(include_str!("data/fig2.ea"))?;
    report("fig2.ea", &fig2)?;

    // Six detectors, all intensity on the first.
    let fig3 = parse_arrangement(include_str!("data/fig3.ea"))?;
    report("fig3.ea", &fig3)?;

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = ExperimentalArrangement::from_state_vector(
        &[
            Complex64::new(h, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
        ],
        ScreenConfiguration::uniform(2, 2)?,
    )?;
    report("bell pair", &bell)?;

    let flat = ExperimentalArrangement::basis_state(bell.shape().clone(), &MultiIndex::new(vec![1, 2]))?;
    let mixed = ExperimentalArrangement::from_mixture(&[0.5, 0.5], &[bell, flat])?;
    report("half bell, half |12>", &mixed)?;
    Ok(())
}

fn report(name: &str, ea: &ExperimentalArrangement) -> multiscreen::Result<()> {
    println!(
        "{name}: factorization {} degree {}",
        ea.shape(),
        ea.degree_of_complexity()
    );
    for (index, p) in ea.potentia_table() {
        println!("  potentia{index} = {p}");
    }
    let abs = ea.purity_abstract();
    let op = ea.purity_operational();
    println!(
        "  Tr(a^2) = {:.6} pure = {}; max eigenvalue = {:.6} certain power = {}",
        abs.value, abs.is_pure, op.max_eigenvalue, op.certain_power_exists
    );
    Ok(())
}

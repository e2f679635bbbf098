//! Valuations of general projectors, orthogonal additivity and the graph of
//! commuting powers.
//!
//! cargo run --example powers_graph

use multiscreen::isa::{build_powers_graph, verify_additivity, GeneralProjector, GlobalIntensiveValuation};
use multiscreen::random::{random_arrangement, random_orthogonal_family, random_projector, seeded};
use multiscreen::tensor::ScreenConfiguration;

fn main() -> multiscreen::Result<()> {
    let mut rng = seeded(3);
    let ea = random_arrangement(ScreenConfiguration::new(vec![2, 2])?, 2, &mut rng)?;
    let giv = GlobalIntensiveValuation::new(&ea);
    println!("Psi(I) = {}", giv.value(&GeneralProjector::identity(4))?);

    let family = random_orthogonal_family(4, &mut rng);
    let r = verify_additivity(&giv, &family)?;
    println!(
        "{} orthogonal projectors: Psi(sum) = {:.12}, sum Psi = {:.12}",
        family.len(),
        r.value_of_sum,
        r.sum_of_values
    );

    // Two commuting families plus one generic projector.
    let mut vertices = family.clone();
    vertices.extend(family.iter().map(GeneralProjector::complement));
    vertices.push(random_projector(4, 2, &mut rng));
    let graph = build_powers_graph(vertices)?;
    for v in 0..graph.vertices().len() {
        println!("  vertex {v}: degree {}", graph.degree(v));
    }
    println!("complete: {}", graph.is_complete());
    Ok(())
}

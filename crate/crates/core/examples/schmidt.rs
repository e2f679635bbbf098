//! Schmidt coefficients, separability and rank profiles of pure states.
//!
//! cargo run --example schmidt

use multiscreen::entanglement::{is_fully_separable_pure, schmidt_decompose, schmidt_rank_profile, Bipartition};
use multiscreen::format::parse_state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in [
        ("bell", include_str!("data/bell.qs")),
        ("ghz3", include_str!("data/ghz3.qs")),
        ("product", include_str!("data/product.qs")),
    ] {
        let state = parse_state(text)?;
        let cut = Bipartition::new(&[1], state.shape.screens())?;
        let s = schmidt_decompose(&state.amplitudes, &state.shape, &cut)?;
        let sep = is_fully_separable_pure(&state.amplitudes, &state.shape)?;
        println!(
            "{name} {}: cut {cut} rank {} coefficients {:?}",
            state.shape, s.rank, s.coefficients
        );
        println!("  fully separable: {}", sep.fully_separable);
        for (cut, rank) in schmidt_rank_profile(&state.amplitudes, &state.shape)? {
            println!("  rank across {cut}: {rank}");
        }
    }
    Ok(())
}

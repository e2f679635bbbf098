//! Drawing detector outcomes from the potentia.
//!
//! cargo run --example sampling

use multiscreen::format::parse_arrangement;
use multiscreen::isa::sample_outcomes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fig2 = parse_arrangement(include_str!("data/fig2.ea"))?;
    let report = sample_outcomes(&fig2, 100_000, 42);
    println!("{} draws, seed {}, {}", report.draws, report.seed, report.algorithm);
    for (index, p) in fig2.potentia_table() {
        println!("  {index}: frequency {:.5} (potentia {p})", report.frequency(&index));
    }
    assert_eq!(report, sample_outcomes(&fig2, 100_000, 42));
    Ok(())
}

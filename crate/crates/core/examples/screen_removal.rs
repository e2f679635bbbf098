//! Removing a screen from a four-screen arrangement and adding it back.
//!
//! cargo run --example screen_removal

use multiscreen::format::{parse_arrangement, serialize_arrangement};
use multiscreen::tensor::Complex64;
use multiscreen::transforms::{extend_arrangement, remove_screen};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let four = parse_arrangement(include_str!("data/ghz4.ea"))?;
    let three = remove_screen(&four, 4)?;
    print!("{}", serialize_arrangement(&three));

    // Both powers of the original end on detector 2 of screen 4.
    let ancilla = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let back = extend_arrangement(&three, 2, Some(&ancilla))?;
    let diff = back.alpha().matrix().max_abs_diff(four.alpha().matrix())?;
    println!("extend(remove(a)) - a: max entry {diff:e}");
    Ok(())
}

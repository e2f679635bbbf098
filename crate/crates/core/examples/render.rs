//! SVG diagrams: points for one screen, segments for two, polygons beyond.
//!
//! cargo run --example render -- [output directory]

use std::path::PathBuf;

use multiscreen::format::parse_arrangement;
use multiscreen::viz::{render_arrangement_svg, RenderOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let options = RenderOptions {
        show_labels: true,
        ..RenderOptions::default()
    };
    for (name, text) in [
        ("fig2", include_str!("data/fig2.ea")),
        ("fig3", include_str!("data/fig3.ea")),
        ("ghz4", include_str!("data/ghz4.ea")),
    ] {
        let ea = parse_arrangement(text)?;
        let path = dir.join(format!("{name}.svg"));
        std::fs::write(&path, render_arrangement_svg(&ea, &options)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

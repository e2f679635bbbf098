//! SVG diagrams of arrangements.
//!
//! Screens are vertical columns of detector nodes. Each depicted power is drawn
//! through one detector per screen: a point marker for a single screen, a
//! segment for two, and a filled polygon for three or more. Opacity encodes
//! potentia with a visibility floor of 0.05; only diagonal potentia are drawn.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::isa::ExperimentalArrangement;
use crate::tensor::{MultiIndex, ScreenConfiguration};

const MARGIN: f64 = 48.0;
const OPACITY_FLOOR: f64 = 0.05;
const NODE_RADIUS: f64 = 5.0;
const POINT_RADIUS: f64 = 14.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    /// Depict only the `k` powers of largest potentia.
    pub max_powers: Option<usize>,
    /// Powers below this potentia are omitted.
    pub min_potentia: f64,
    pub width: f64,
    pub height: f64,
    pub show_labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            max_powers: None,
            min_potentia: 1e-6,
            width: 640.0,
            height: 400.0,
            show_labels: false,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_powers == Some(0) {
            return Err(Error::InvalidOptions("max_powers must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.min_potentia) {
            return Err(Error::InvalidOptions(format!(
                "min_potentia {} is outside [0, 1]",
                self.min_potentia
            )));
        }
        if !(self.width > 2.0 * MARGIN && self.height > 2.0 * MARGIN)
            || !self.width.is_finite()
            || !self.height.is_finite()
        {
            return Err(Error::InvalidOptions(format!(
                "canvas {}x{} is too small",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Node positions for one screen.
#[derive(Clone, Debug, PartialEq)]
pub struct ScreenColumn {
    pub x: f64,
    /// `y` of each detector, top to bottom in detector order.
    pub detectors: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayoutPlan {
    pub width: f64,
    pub height: f64,
    pub columns: Vec<ScreenColumn>,
}

impl LayoutPlan {
    /// Coordinates of detector `detector` (1-based) on screen `screen` (1-based).
    pub fn node(&self, screen: usize, detector: usize) -> (f64, f64) {
        let col = &self.columns[screen - 1];
        (col.x, col.detectors[detector - 1])
    }

    /// One node per screen for the given power.
    pub fn vertices(&self, index: &MultiIndex) -> Vec<(f64, f64)> {
        index
            .indices()
            .iter()
            .enumerate()
            .map(|(j, &k)| self.node(j + 1, k))
            .collect()
    }
}

/// Screens at equal horizontal intervals, detectors at equal vertical
/// intervals within each screen.
pub fn layout(shape: &ScreenConfiguration, options: &RenderOptions) -> LayoutPlan {
    let inner_w = options.width - 2.0 * MARGIN;
    let inner_h = options.height - 2.0 * MARGIN;
    let n = shape.screens() as f64;
    let columns = shape
        .detector_counts()
        .iter()
        .enumerate()
        .map(|(j, &count)| ScreenColumn {
            x: MARGIN + (j as f64 + 0.5) * inner_w / n,
            detectors: (0..count)
                .map(|k| MARGIN + (k as f64 + 0.5) * inner_h / count as f64)
                .collect(),
        })
        .collect();
    LayoutPlan {
        width: options.width,
        height: options.height,
        columns,
    }
}

/// Powers that will be drawn, in rank order: descending potentia, ties broken
/// by linear index order.
pub fn depicted_powers(ea: &ExperimentalArrangement, options: &RenderOptions) -> Vec<(MultiIndex, f64)> {
    let mut table: Vec<(MultiIndex, f64)> = ea
        .potentia_table()
        .into_iter()
        .filter(|(_, p)| *p >= options.min_potentia)
        .collect();
    table.sort_by(|a, b| b.1.total_cmp(&a.1));
    if let Some(k) = options.max_powers {
        table.truncate(k);
    }
    table
}

/// Standalone SVG 1.1 document for `ea`.
pub fn render_arrangement_svg(ea: &ExperimentalArrangement, options: &RenderOptions) -> Result<String> {
    options.validate()?;
    let shape = ea.shape();
    let plan = layout(shape, options);
    let powers = depicted_powers(ea, options);

    let mut svg = String::new();
    let w = num(options.width, 2);
    let h = num(options.height, 2);
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    let title = match ea.label() {
        Some(l) => format!("{} {}", l, shape),
        None => format!("experimental arrangement {shape}"),
    };
    writeln!(svg, "  <title>{}</title>", escape(&title)).unwrap();
    writeln!(
        svg,
        r##"  <rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##
    )
    .unwrap();

    writeln!(svg, r##"  <g class="screens" stroke="#444444" fill="#444444">"##).unwrap();
    let top = num(MARGIN * 0.5, 2);
    let bottom = num(options.height - MARGIN * 0.5, 2);
    for (j, col) in plan.columns.iter().enumerate() {
        let x = num(col.x, 2);
        writeln!(
            svg,
            r#"    <line class="screen" x1="{x}" y1="{top}" x2="{x}" y2="{bottom}" stroke-width="1"/>"#
        )
        .unwrap();
        for (k, &y) in col.detectors.iter().enumerate() {
            writeln!(
                svg,
                r#"    <circle class="detector" id="detector-{}-{}" cx="{x}" cy="{}" r="{}"/>"#,
                j + 1,
                k + 1,
                num(y, 2),
                num(NODE_RADIUS, 2)
            )
            .unwrap();
        }
        writeln!(
            svg,
            r#"    <text class="screen-label" x="{x}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" stroke="none">{}</text>"#,
            num(options.height - MARGIN * 0.15, 2),
            j + 1
        )
        .unwrap();
    }
    writeln!(svg, "  </g>").unwrap();

    writeln!(svg, r#"  <g class="powers">"#).unwrap();
    for (rank, (index, potentia)) in powers.iter().enumerate() {
        let color = PALETTE[rank % PALETTE.len()];
        let opacity = num(potentia.clamp(OPACITY_FLOOR, 1.0), 4);
        let id = format!(
            "power-{}",
            index
                .indices()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("-")
        );
        let tooltip = format!("<title>{} {}</title>", index, num(*potentia, 6));
        let vertices = plan.vertices(index);
        match vertices.as_slice() {
            [(x, y)] => writeln!(
                svg,
                r#"    <circle class="power point" id="{id}" cx="{}" cy="{}" r="{}" fill="{color}" fill-opacity="{opacity}" stroke="{color}" stroke-opacity="{opacity}">{tooltip}</circle>"#,
                num(*x, 2),
                num(*y, 2),
                num(POINT_RADIUS, 2)
            ),
            [(x1, y1), (x2, y2)] => writeln!(
                svg,
                r#"    <line class="power segment" id="{id}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="6" stroke-linecap="round" stroke-opacity="{opacity}">{tooltip}</line>"#,
                num(*x1, 2),
                num(*y1, 2),
                num(*x2, 2),
                num(*y2, 2)
            ),
            _ => {
                let points = vertices
                    .iter()
                    .map(|(x, y)| format!("{},{}", num(*x, 2), num(*y, 2)))
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(
                    svg,
                    r#"    <polygon class="power polygon" id="{id}" points="{points}" fill="{color}" fill-opacity="{opacity}" stroke="{color}" stroke-opacity="{opacity}" stroke-width="2" stroke-linejoin="round">{tooltip}</polygon>"#
                )
            }
        }
        .unwrap();
    }
    writeln!(svg, "  </g>").unwrap();

    if options.show_labels {
        writeln!(svg, r#"  <g class="labels" font-family="sans-serif" font-size="11">"#).unwrap();
        for (rank, (index, potentia)) in powers.iter().enumerate() {
            let (x, y) = plan.vertices(index)[0];
            writeln!(
                svg,
                r#"    <text class="potentia-label" x="{}" y="{}" fill="{}">{}</text>"#,
                num(x + POINT_RADIUS + 4.0, 2),
                num(y - 4.0, 2),
                PALETTE[rank % PALETTE.len()],
                num(*potentia, 6)
            )
            .unwrap();
        }
        writeln!(svg, "  </g>").unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// Fixed-precision decimal with trailing zeros removed.
fn num(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(c: &[usize]) -> ScreenConfiguration {
        ScreenConfiguration::new(c.to_vec()).unwrap()
    }

    #[test]
    fn layout_examples() {
        let o = RenderOptions::default();
        let p = layout(&shape(&[1]), &o);
        assert_eq!(p.columns.len(), 1);
        assert_eq!(p.columns[0].detectors.len(), 1);

        let p = layout(&shape(&[2, 2]), &o);
        assert_eq!(p.columns.len(), 2);
        assert!(p.columns.iter().all(|c| c.detectors.len() == 2));

        let p = layout(&shape(&[3; 7]), &o);
        assert_eq!(p.columns.len(), 7);
        assert!(p.columns.iter().all(|c| c.detectors.len() == 3));
        let gaps: Vec<f64> = p.columns.windows(2).map(|w| w[1].x - w[0].x).collect();
        assert!(gaps.iter().all(|g| (g - gaps[0]).abs() < 1e-9));
    }

    #[test]
    fn number_formatting() {
        assert_eq!(num(0.7, 4), "0.7");
        assert_eq!(num(0.30000000000000004, 4), "0.3");
        assert_eq!(num(1.0, 4), "1");
        assert_eq!(num(-0.00001, 2), "0");
        assert_eq!(num(120.0, 2), "120");
    }

    #[test]
    fn escapes_labels() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn rejects_bad_options() {
        let ea = ExperimentalArrangement::diagonal(shape(&[2]), &[0.7, 0.3]).unwrap();
        for o in [
            RenderOptions {
                max_powers: Some(0),
                ..Default::default()
            },
            RenderOptions {
                min_potentia: 1.5,
                ..Default::default()
            },
            RenderOptions {
                width: 10.0,
                ..Default::default()
            },
        ] {
            assert!(render_arrangement_svg(&ea, &o).is_err());
        }
    }

    #[test]
    fn selection_order_and_cap() {
        let ea = ExperimentalArrangement::diagonal(shape(&[4]), &[0.2, 0.4, 0.2, 0.2]).unwrap();
        let o = RenderOptions {
            max_powers: Some(3),
            ..Default::default()
        };
        let picked: Vec<_> = depicted_powers(&ea, &o).into_iter().map(|(k, _)| k.0[0]).collect();
        assert_eq!(picked, vec![2, 1, 3]);
    }
}

mod common;

use common::*;
use multiscreen::format::parse_arrangement;
use multiscreen::viz::{layout, render_arrangement_svg, RenderOptions};
use proptest::prelude::*;

struct Glyph {
    kind: String,
    vertices: Vec<(f64, f64)>,
    opacity: f64,
}

fn glyphs(svg: &str) -> Vec<Glyph> {
    let doc = roxmltree::Document::parse(svg).expect("well-formed XML");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
    assert_eq!(root.attribute("version"), Some("1.1"));
    let f = |n: &roxmltree::Node, a: &str| n.attribute(a).unwrap().parse::<f64>().unwrap();
    root.descendants()
        .filter(|n| n.attribute("class").is_some_and(|c| c.split(' ').any(|w| w == "power")))
        .map(|n| {
            let kind = n.tag_name().name().to_string();
            let (vertices, opacity) = match kind.as_str() {
                "circle" => (vec![(f(&n, "cx"), f(&n, "cy"))], f(&n, "fill-opacity")),
                "line" => (
                    vec![(f(&n, "x1"), f(&n, "y1")), (f(&n, "x2"), f(&n, "y2"))],
                    f(&n, "stroke-opacity"),
                ),
                "polygon" => {
                    let pts = n.attribute("points").unwrap().split(' ').map(|p| {
                        let (x, y) = p.split_once(',').unwrap();
                        (x.parse().unwrap(), y.parse().unwrap())
                    });
                    (pts.collect(), f(&n, "fill-opacity"))
                }
                other => panic!("unexpected glyph {other}"),
            };
            Glyph {
                kind,
                vertices,
                opacity,
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn glyphs_match_selection(c in counts(4, 4, 64), terms in 1usize..=4, seed in any::<u64>(),
                              cap in prop::option::of(1usize..10), min in 0.0f64..0.3) {
        let ea = arrangement(&c, terms, seed);
        let options = RenderOptions { max_powers: cap, min_potentia: min, ..RenderOptions::default() };
        let svg = render_arrangement_svg(&ea, &options).unwrap();
        let found = glyphs(&svg);

        let eligible = ea.potentia_table().iter().filter(|(_, p)| *p >= min).count();
        prop_assert_eq!(found.len(), cap.map_or(eligible, |k| eligible.min(k)));

        let plan = layout(ea.shape(), &options);
        for g in &found {
            prop_assert_eq!(g.vertices.len(), c.len());
            for (j, (x, y)) in g.vertices.iter().enumerate() {
                let column = &plan.columns[j];
                prop_assert!((x - column.x).abs() < 0.01);
                prop_assert_eq!(column.detectors.iter().filter(|d| (*d - y).abs() < 0.01).count(), 1);
            }
            prop_assert!((0.05..=1.0).contains(&g.opacity));
        }
        prop_assert_eq!(render_arrangement_svg(&ea, &options).unwrap(), svg);
    }
}

#[test]
fn labels_are_escaped() {
    let ea = parse_arrangement(&data("fig2.ea")).unwrap().with_label("a < b & \"c\"");
    let svg = render_arrangement_svg(
        &ea,
        &RenderOptions {
            show_labels: true,
            ..Default::default()
        },
    )
    .unwrap();
    roxmltree::Document::parse(&svg).unwrap();
    assert!(svg.contains("a &lt; b &amp; &quot;c&quot;"));
    assert_eq!(svg.matches("class=\"potentia-label\"").count(), 2);
}

#[test]
fn faint_powers_keep_a_floor() {
    let ea = multiscreen::isa::ExperimentalArrangement::diagonal(shape(&[2]), &[0.99, 0.01]).unwrap();
    let g = glyphs(&render_arrangement_svg(&ea, &RenderOptions::default()).unwrap());
    assert_eq!(g.iter().map(|g| g.opacity).collect::<Vec<_>>(), vec![0.99, 0.05]);
    assert!(g.iter().all(|g| g.kind == "circle"));
}

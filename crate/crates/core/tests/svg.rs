//! Rendered SVG is well-formed and its primitives match the combinatorics.

mod common;

use std::collections::BTreeSet;

use common::*;
use tropmat::mixsd::{embed_tope, tom_to_mixsd};
use tropmat::realize::realizable_tom;
use tropmat::svg::{project_lattice_point, render_arrangement, render_subdivision};
use tropmat::MixedSubdivision;

fn parse(svg: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(svg).unwrap_or_else(|e| panic!("{e}\n{svg}"))
}

fn elements<'a>(doc: &'a roxmltree::Document<'a>, tag: &str) -> Vec<roxmltree::Node<'a, 'a>> {
    doc.descendants().filter(|n| n.has_tag_name(tag)).collect()
}

/// Every `class` attribute names a rule in the stylesheet.
fn assert_classes_styled(doc: &roxmltree::Document) {
    let style = elements(doc, "style")[0].text().unwrap_or("");
    let defined: BTreeSet<&str> = style
        .lines()
        .filter_map(|l| l.trim().strip_prefix('.'))
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    for n in doc.descendants().filter(|n| n.is_element()) {
        if let Some(c) = n.attribute("class") {
            assert!(defined.contains(c), "class {c} has no rule");
        }
    }
}

fn coord(n: roxmltree::Node, attr: &str) -> f64 {
    n.attribute(attr).unwrap().parse().unwrap()
}

fn check_subdivision(s: &MixedSubdivision) {
    let svg = render_subdivision(s).unwrap().to_svg();
    let doc = parse(&svg);
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert_classes_styled(&doc);
    assert_eq!(elements(&doc, "polygon").len(), s.maximal_cells().len());

    let markers: Vec<(f64, f64)> = elements(&doc, "circle")
        .into_iter()
        .filter(|n| n.attribute("class") == Some("vertex"))
        .map(|n| (coord(n, "cx"), coord(n, "cy")))
        .collect();
    let topes = s.vertex_topes();
    assert_eq!(markers.len(), topes.len());
    for tope in &topes {
        let (x, y) = project_lattice_point(embed_tope(tope).unwrap().coords(), s.n());
        assert!(
            markers
                .iter()
                .any(|&(mx, my)| (mx - x).abs() < 0.006 && (my - y).abs() < 0.006),
            "no marker for {tope} at ({x:.2},{y:.2})"
        );
    }
    for p in elements(&doc, "polygon") {
        let title = p.children().find(|c| c.has_tag_name("title")).unwrap();
        assert!(title.text().unwrap().starts_with('('));
    }
}

#[test]
fn subdivisions_of_the_corpus() {
    for (_, w) in weight_corpus().into_iter().filter(|(_, w)| w.d() == 3) {
        let s = tom_to_mixsd(&realizable_tom(&w).unwrap()).unwrap();
        check_subdivision(&s);
    }
}

#[test]
fn generic_three_lines_give_six_cells() {
    let w = generic_weights(&mut rng(41), 3, 3);
    let s = tom_to_mixsd(&realizable_tom(&w).unwrap()).unwrap();
    assert_eq!(s.maximal_cells().len(), 6);
    check_subdivision(&s);
}

#[test]
fn two_generic_lines() {
    let w = generic_weights(&mut rng(42), 2, 3);
    let scene = render_arrangement(&w).unwrap();
    let svg = scene.to_svg();
    let doc = parse(&svg);
    assert_classes_styled(&doc);
    let apexes = elements(&doc, "circle")
        .into_iter()
        .filter(|n| n.attribute("class") == Some("apex"))
        .count();
    assert_eq!(apexes, 2);
    assert_eq!(elements(&doc, "polyline").len(), 6);
    let regions = realizable_tom(&w).unwrap().region_topes();
    let labels: BTreeSet<String> = elements(&doc, "text")
        .into_iter()
        .map(|n| n.text().unwrap().to_string())
        .collect();
    let expected: BTreeSet<String> = regions.iter().map(|t| t.to_string()).collect();
    assert_eq!(labels, expected);
    // every drawn point stays on the canvas
    for l in &scene.polylines {
        for &(x, y) in &l.points {
            assert!((0.0..=scene.width).contains(&x) && (0.0..=scene.height).contains(&y));
        }
    }
}

#[test]
fn other_dimensions_are_rejected() {
    let w = generic_weights(&mut rng(43), 2, 4);
    assert!(render_arrangement(&w).is_err());
    let s = tom_to_mixsd(&realizable_tom(&w).unwrap()).unwrap();
    assert!(render_subdivision(&s).is_err());
}

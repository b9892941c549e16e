//! SVG pictures for `d = 3`: a mixed subdivision of the triangle `nΔ²`, or
//! an arrangement of tropical lines in the plane `x_3 = 0`.
//!
//! This is the only place floating point is used, and only for display.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::mixsd::{cell_vertex_points, MixedSubdivision};
use crate::realize::{realizable_tom, type_witness, WeightMatrix};

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 24.0;

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    pub points: Vec<(f64, f64)>,
    pub class: String,
    pub title: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Marker {
    pub at: (f64, f64),
    pub class: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Label {
    pub at: (f64, f64),
    pub text: String,
}

/// A flat list of primitives plus the style rule for every class they use.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SvgScene {
    pub width: f64,
    pub height: f64,
    pub styles: BTreeMap<String, String>,
    pub polygons: Vec<Polygon>,
    pub polylines: Vec<Polyline>,
    pub markers: Vec<Marker>,
    pub labels: Vec<Label>,
}

fn fmt_points(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

impl SvgScene {
    fn new() -> Self {
        let mut styles = BTreeMap::new();
        styles.insert("label".into(), "font: 9px sans-serif; fill: #222".into());
        Self {
            width: CANVAS,
            height: CANVAS,
            styles,
            ..Self::default()
        }
    }

    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = self.width,
            h = self.height
        );
        out.push_str("<style>\n");
        for (class, rule) in &self.styles {
            let _ = writeln!(out, ".{class} {{ {rule} }}");
        }
        out.push_str("</style>\n");
        for p in &self.polygons {
            let _ = writeln!(
                out,
                r#"<polygon class="{}" points="{}"><title>{}</title></polygon>"#,
                p.class,
                fmt_points(&p.points),
                p.title
            );
        }
        for l in &self.polylines {
            let _ = writeln!(
                out,
                r#"<polyline class="{}" points="{}"/>"#,
                l.class,
                fmt_points(&l.points)
            );
        }
        for m in &self.markers {
            let _ = writeln!(
                out,
                r#"<circle class="{}" cx="{:.2}" cy="{:.2}" r="3"/>"#,
                m.class, m.at.0, m.at.1
            );
        }
        for l in &self.labels {
            let _ = writeln!(
                out,
                r#"<text class="label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                l.at.0, l.at.1, l.text
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Planar image of a lattice point of `nΔ²`: `e_1 ↦ (0,0)`, `e_2 ↦ (1,0)`,
/// `e_3 ↦ (1/2, √3/2)`, scaled to the canvas with the y axis pointing down.
pub fn project_lattice_point(x: &[i64], n: usize) -> (f64, f64) {
    let scale = (CANVAS - 2.0 * MARGIN) / n as f64;
    let h = 3f64.sqrt() / 2.0;
    let px = x[1] as f64 + 0.5 * x[2] as f64;
    let py = h * x[2] as f64;
    (
        MARGIN + px * scale,
        CANVAS - MARGIN - (1.0 - h) * (CANVAS - 2.0 * MARGIN) / 2.0 - py * scale,
    )
}

fn sort_by_angle(points: &mut [(f64, f64)]) {
    let k = points.len() as f64;
    let cx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let cy = points.iter().map(|p| p.1).sum::<f64>() / k;
    points.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
}

/// One polygon per maximal cell in canonical order, filled by the number of
/// triangle and segment summands; one marker per vertex tope.
pub fn render_subdivision(s: &MixedSubdivision) -> Result<SvgScene> {
    if s.d() != 3 {
        return Err(Error::UnsupportedDimension(s.d()));
    }
    let n = s.n();
    let mut scene = SvgScene::new();
    scene.styles.insert(
        "outline".into(),
        "fill: none; stroke: #000; stroke-width: 1.5".into(),
    );
    scene.styles.insert("vertex".into(), "fill: #000".into());
    for cell in s.maximal_cells() {
        let triangles = cell
            .entries()
            .iter()
            .filter(|e| e.count_ones() == 3)
            .count();
        let segments = cell
            .entries()
            .iter()
            .filter(|e| e.count_ones() == 2)
            .count();
        let class = format!("cell-t{triangles}-s{segments}");
        let colour = PALETTE[(3 * triangles + segments) % PALETTE.len()];
        scene.styles.insert(
            class.clone(),
            format!("fill: {colour}; stroke: #333; stroke-width: 1"),
        );
        let mut points: Vec<(f64, f64)> = cell_vertex_points(cell)?
            .iter()
            .map(|p| project_lattice_point(p.coords(), n))
            .collect();
        sort_by_angle(&mut points);
        scene.polygons.push(Polygon {
            points,
            class,
            title: cell.to_string(),
        });
    }
    let corners: Vec<(f64, f64)> = [
        [n as i64, 0, 0],
        [0, n as i64, 0],
        [0, 0, n as i64],
        [n as i64, 0, 0],
    ]
    .iter()
    .map(|c| project_lattice_point(c, n))
    .collect();
    scene.polylines.push(Polyline {
        points: corners,
        class: "outline".into(),
    });
    for v in s.vertex_topes() {
        let p = crate::mixsd::embed_tope(&v)?;
        scene.markers.push(Marker {
            at: project_lattice_point(p.coords(), n),
            class: "vertex".into(),
        });
    }
    Ok(scene)
}

/// Directions of the three rays of a min-plus tropical line in the chart
/// `x_3 = 0`: raising `x_1`, raising `x_2`, raising `x_3`.
pub const RAY_DIRECTIONS: [(f64, f64); 3] = [(1.0, 0.0), (0.0, 1.0), (-1.0, -1.0)];

struct View {
    min: (f64, f64),
    max: (f64, f64),
}

impl View {
    fn to_canvas(&self, p: (f64, f64)) -> (f64, f64) {
        let span = (self.max.0 - self.min.0).max(self.max.1 - self.min.1);
        let scale = (CANVAS - 2.0 * MARGIN) / span;
        (
            MARGIN + (p.0 - self.min.0) * scale,
            CANVAS - MARGIN - (p.1 - self.min.1) * scale,
        )
    }

    fn clamp(&self, p: (f64, f64)) -> (f64, f64) {
        (
            p.0.clamp(self.min.0, self.max.0),
            p.1.clamp(self.min.1, self.max.1),
        )
    }

    /// Where the ray from `p` along `dir` leaves the view.
    fn exit(&self, p: (f64, f64), dir: (f64, f64)) -> (f64, f64) {
        let mut t = f64::INFINITY;
        for (pc, dc, lo, hi) in [
            (p.0, dir.0, self.min.0, self.max.0),
            (p.1, dir.1, self.min.1, self.max.1),
        ] {
            if dc > 0.0 {
                t = t.min((hi - pc) / dc);
            } else if dc < 0.0 {
                t = t.min((lo - pc) / dc);
            }
        }
        (p.0 + t * dir.0, p.1 + t * dir.1)
    }
}

/// Apexes, the three clipped rays of every line, and a type label inside
/// every region of the arrangement.
pub fn render_arrangement(w: &WeightMatrix) -> Result<SvgScene> {
    if w.d() != 3 {
        return Err(Error::UnsupportedDimension(w.d()));
    }
    let apexes: Vec<(f64, f64)> = (0..w.n())
        .map(|i| {
            let c = w.apex(i);
            let c = c.coords();
            (c[0].to_f64().unwrap_or(0.0), c[1].to_f64().unwrap_or(0.0))
        })
        .collect();
    let (mut lo, mut hi) = (apexes[0], apexes[0]);
    for &(x, y) in &apexes {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1);
    let pad = span.max(1.0);
    let min = (lo.0 - pad, lo.1 - pad);
    let view = View {
        min,
        max: (min.0 + span + 2.0 * pad, min.1 + span + 2.0 * pad),
    };

    let mut scene = SvgScene::new();
    scene.styles.insert(
        "ray".into(),
        "fill: none; stroke: #1f4e79; stroke-width: 1.5".into(),
    );
    scene.styles.insert("apex".into(), "fill: #c00".into());
    for &a in &apexes {
        for dir in RAY_DIRECTIONS {
            scene.polylines.push(Polyline {
                points: vec![view.to_canvas(a), view.to_canvas(view.exit(a, dir))],
                class: "ray".into(),
            });
        }
        scene.markers.push(Marker {
            at: view.to_canvas(a),
            class: "apex".into(),
        });
    }
    for region in realizable_tom(w)?.region_topes() {
        if let Some(x) = type_witness(w, &region)? {
            let c = x.coords();
            let p = (c[0].to_f64().unwrap_or(0.0), c[1].to_f64().unwrap_or(0.0));
            scene.labels.push(Label {
                at: view.to_canvas(view.clamp(p)),
                text: region.to_string(),
            });
        }
    }
    Ok(scene)
}

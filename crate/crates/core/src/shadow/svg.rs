//! Deterministic SVG rendering of shadows.

use std::fmt::Write as _;

use crate::geometry::P2;
use crate::metric_graph::EmbeddedGraph;
use crate::sampling::PointCloud;

use super::medial_axis::SkeletonGraph;
use super::{ShadowComplex, VertexKind};

/// Optional layers drawn over the shadow.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overlays<'a> {
    pub graph: Option<&'a EmbeddedGraph>,
    pub cloud: Option<&'a PointCloud>,
    pub skeleton: Option<&'a SkeletonGraph>,
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn ring_path(d: &mut String, ring: &[P2]) {
    for (i, p) in ring.iter().enumerate() {
        let _ = write!(
            d,
            "{}{} {} ",
            if i == 0 { "M" } else { "L" },
            fmt(p.x),
            fmt(-p.y)
        );
    }
    d.push('Z');
}

/// Renders covered faces, arrangement edges and crossing vertices, plus the
/// requested overlays, in separate groups. The y axis points up.
pub fn render_svg(sc: &ShadowComplex, overlays: Overlays<'_>) -> String {
    let mut pts: Vec<P2> = sc.vertices().iter().map(|v| v.pos).collect();
    pts.extend_from_slice(sc.positions());
    if let Some(g) = overlays.graph {
        for e in 0..g.edges().len() {
            pts.extend(g.polyline2(e));
        }
        pts.extend(g.vertices().iter().filter_map(|v| v.pos.planar().ok()));
    }
    if let Some(c) = overlays.cloud.filter(|c| c.dim() == 2) {
        pts.extend(c.planar());
    }
    if let Some(s) = overlays.skeleton {
        pts.extend_from_slice(&s.nodes);
    }
    let (lo, hi) = if pts.is_empty() {
        (P2::new(0., 0.), P2::new(1., 1.))
    } else {
        super::bbox(&pts)
    };
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let pad = 0.05 * span;
    let stroke = span / 400.0;
    let dot = span / 250.0;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        fmt(lo.x - pad),
        fmt(-hi.y - pad),
        fmt(hi.x - lo.x + 2.0 * pad),
        fmt(hi.y - lo.y + 2.0 * pad)
    );
    let vpos = |v: usize| sc.vertices()[v].pos;

    let _ = writeln!(s, r##"<g id="faces" fill="#9ecae1" stroke="none">"##);
    for f in sc.covered_faces() {
        let outer: Vec<P2> = f.boundary.iter().map(|&v| vpos(v)).collect();
        if f.holes.is_empty() {
            let list: Vec<String> = outer
                .iter()
                .map(|p| format!("{},{}", fmt(p.x), fmt(-p.y)))
                .collect();
            let _ = writeln!(s, r#"<polygon points="{}"/>"#, list.join(" "));
        } else {
            let mut d = String::new();
            ring_path(&mut d, &outer);
            for h in &f.holes {
                d.push(' ');
                ring_path(&mut d, &h.iter().map(|&v| vpos(v)).collect::<Vec<_>>());
            }
            let _ = writeln!(s, r#"<path fill-rule="evenodd" d="{d}"/>"#);
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="edges" stroke="#08519c" stroke-width="{}" fill="none">"##,
        fmt(stroke)
    );
    for e in sc.edges() {
        let (a, b) = (vpos(e.a), vpos(e.b));
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            fmt(a.x),
            fmt(-a.y),
            fmt(b.x),
            fmt(-b.y)
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="crossings" fill="#d62728">"##);
    for v in sc.vertices() {
        if matches!(v.kind, VertexKind::Crossing { .. }) {
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                fmt(v.pos.x),
                fmt(-v.pos.y),
                fmt(dot)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="graph" stroke="#2ca02c" stroke-width="{}" fill="none">"##,
        fmt(stroke * 1.5)
    );
    if let Some(g) = overlays.graph {
        for e in 0..g.edges().len() {
            let list: Vec<String> = g
                .polyline2(e)
                .iter()
                .map(|p| format!("{},{}", fmt(p.x), fmt(-p.y)))
                .collect();
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, list.join(" "));
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="cloud" fill="#333333">"##);
    if let Some(c) = overlays.cloud.filter(|c| c.dim() == 2) {
        for p in c.planar() {
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                fmt(p.x),
                fmt(-p.y),
                fmt(dot * 0.6)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="skeleton" stroke="#ff7f0e" stroke-width="{}" fill="none">"##,
        fmt(stroke)
    );
    if let Some(sk) = overlays.skeleton {
        for &(a, b) in &sk.edges {
            let (a, b) = (sk.nodes[a], sk.nodes[b]);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fmt(a.x),
                fmt(-a.y),
                fmt(b.x),
                fmt(-b.y)
            );
        }
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FlagComplex;
    use crate::shadow::project;

    #[test]
    fn empty_complex_renders_empty_groups() {
        let k = FlagComplex::from_maximal(0, &[]).unwrap();
        let sc = project(&k, &PointCloud::new(2, vec![])).unwrap();
        let svg = render_svg(&sc, Overlays::default());
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<g id=").count(), 6);
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn filled_triangle_is_one_polygon_and_deterministic() {
        let k = FlagComplex::from_maximal(3, &[vec![0, 1, 2]]).unwrap();
        let c = PointCloud::new(2, vec![0., 0., 1., 0., 0., 1.]);
        let sc = project(&k, &c).unwrap();
        let a = render_svg(&sc, Overlays::default());
        assert_eq!(a.matches("<polygon").count(), 1);
        assert_eq!(
            a,
            render_svg(&project(&k, &c).unwrap(), Overlays::default())
        );
    }
}

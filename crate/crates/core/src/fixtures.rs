//! Reference graphs used by tests, examples and the CLI.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::geometry::Point;
use crate::metric_graph::EmbeddedGraph;

fn pts(f: impl Fn(f64) -> (f64, f64), t0: f64, t1: f64, segments: usize) -> Vec<Point> {
    (1..segments)
        .map(|k| {
            let (x, y) = f(t0 + (t1 - t0) * k as f64 / segments as f64);
            Point::xy(x, y)
        })
        .collect()
}

fn vertex(g: &mut EmbeddedGraph, id: &str, x: f64, y: f64) {
    g.add_vertex(id, Point::xy(x, y)).expect("fixture vertex");
}

fn edge(g: &mut EmbeddedGraph, id: &str, u: &str, v: &str, bends: Vec<Point>) {
    g.add_edge(id, u, v, bends).expect("fixture edge");
}

/// Regular `n`-gon inscribed in the circle of radius `r`.
pub fn polygon(n: usize, r: f64) -> EmbeddedGraph {
    let mut g = EmbeddedGraph::new(2);
    for k in 0..n {
        let a = TAU * k as f64 / n as f64;
        vertex(&mut g, &format!("p{k}"), r * a.cos(), r * a.sin());
    }
    for k in 0..n {
        edge(
            &mut g,
            &format!("s{k}"),
            &format!("p{k}"),
            &format!("p{}", (k + 1) % n),
            vec![],
        );
    }
    g
}

/// Unit-circle 24-gon.
pub fn cycle() -> EmbeddedGraph {
    polygon(24, 1.0)
}

/// Two unit semicircles and the diameter between `(-1, 0)` and `(1, 0)`.
/// The arcs carry midpoint vertices so that no two edges share both ends.
pub fn theta() -> EmbeddedGraph {
    let mut g = EmbeddedGraph::new(2);
    vertex(&mut g, "w", -1.0, 0.0);
    vertex(&mut g, "e", 1.0, 0.0);
    vertex(&mut g, "n", 0.0, 1.0);
    vertex(&mut g, "s", 0.0, -1.0);
    let arc = |t: f64| (t.cos(), t.sin());
    edge(&mut g, "ne", "e", "n", pts(arc, 0.0, FRAC_PI_2, 12));
    edge(&mut g, "nw", "n", "w", pts(arc, FRAC_PI_2, PI, 12));
    edge(&mut g, "sw", "w", "s", pts(arc, PI, 3.0 * FRAC_PI_2, 12));
    edge(&mut g, "se", "s", "e", pts(arc, 3.0 * FRAC_PI_2, TAU, 12));
    edge(&mut g, "middle", "w", "e", vec![]);
    g
}

/// Lemniscate of Bernoulli with half-width 1.5, two loops at the origin.
pub fn figure_eight() -> EmbeddedGraph {
    let a = 1.5;
    let lem = move |t: f64| {
        let s = 1.0 + t.sin() * t.sin();
        (a * t.cos() / s, a * t.sin() * t.cos() / s)
    };
    let mut g = EmbeddedGraph::new(2);
    vertex(&mut g, "o", 0.0, 0.0);
    edge(
        &mut g,
        "right",
        "o",
        "o",
        pts(lem, -FRAC_PI_2, FRAC_PI_2, 40),
    );
    edge(
        &mut g,
        "left",
        "o",
        "o",
        pts(lem, FRAC_PI_2, 3.0 * FRAC_PI_2, 40),
    );
    g
}

/// Five curled prongs from the origin. Every prong sweeps 92 degrees while
/// reaching radius 1, so its tip stops about 0.145 short of the next prong.
pub fn star5() -> EmbeddedGraph {
    let sweep = (72.0f64 + 20.0).to_radians();
    let mut g = EmbeddedGraph::new(2);
    vertex(&mut g, "c", 0.0, 0.0);
    for i in 0..5 {
        let phi = TAU * i as f64 / 5.0;
        let arm = move |t: f64| {
            let r = 1.0 - (1.0 - t) * (1.0 - t);
            let a = phi + sweep * t * t * t;
            (r * a.cos(), r * a.sin())
        };
        let (x, y) = arm(1.0);
        let tip = format!("t{i}");
        vertex(&mut g, &tip, x, y);
        edge(
            &mut g,
            &format!("prong{i}"),
            "c",
            &tip,
            pts(arm, 0.0, 1.0, 60),
        );
    }
    g
}

/// Archimedean spiral from radius 0.4 to 1.6 over one and a half turns.
pub fn spiral() -> EmbeddedGraph {
    let turns = 3.0 * PI;
    let f = move |t: f64| {
        let r = 0.4 + 1.2 * t / turns;
        (r * t.cos(), r * t.sin())
    };
    let mut g = EmbeddedGraph::new(2);
    let (x0, y0) = f(0.0);
    let (x1, y1) = f(turns);
    vertex(&mut g, "in", x0, y0);
    vertex(&mut g, "out", x1, y1);
    edge(&mut g, "arm", "in", "out", pts(f, 0.0, turns, 180));
    g
}

/// Closed three-lobed curve `r = 1 + 0.35 cos 3t`.
pub fn closed_curve() -> EmbeddedGraph {
    let f = |t: f64| {
        let r = 1.0 + 0.35 * (3.0 * t).cos();
        (r * t.cos(), r * t.sin())
    };
    let mut g = EmbeddedGraph::new(2);
    vertex(&mut g, "o", 1.35, 0.0);
    edge(&mut g, "loop", "o", "o", pts(f, 0.0, TAU, 120));
    g
}

/// U shape: two unit legs one apart joined by a half circle.
pub fn u_shape() -> EmbeddedGraph {
    let mut g = EmbeddedGraph::new(2);
    vertex(&mut g, "l", -0.5, 1.0);
    vertex(&mut g, "r", 0.5, 1.0);
    let mut bends = vec![Point::xy(-0.5, 0.0)];
    bends.extend(pts(|t: f64| (0.5 * t.cos(), 0.5 * t.sin()), PI, TAU, 24));
    bends.push(Point::xy(0.5, 0.0));
    edge(&mut g, "u", "l", "r", bends);
    g
}

/// Two unit edges meeting at a right angle.
pub fn l_shape() -> EmbeddedGraph {
    let mut g = EmbeddedGraph::new(2);
    vertex(&mut g, "top", 0.0, 1.0);
    vertex(&mut g, "corner", 0.0, 0.0);
    vertex(&mut g, "right", 1.0, 0.0);
    edge(&mut g, "up", "corner", "top", vec![]);
    edge(&mut g, "across", "corner", "right", vec![]);
    g
}

/// Straight segment of the given length along the x axis.
pub fn segment(len: f64) -> EmbeddedGraph {
    let mut g = EmbeddedGraph::new(2);
    vertex(&mut g, "a", 0.0, 0.0);
    vertex(&mut g, "b", len, 0.0);
    edge(&mut g, "ab", "a", "b", vec![]);
    g
}

/// The five reconstruction fixtures by name.
pub fn reconstruction_suite() -> Vec<(&'static str, EmbeddedGraph)> {
    vec![
        ("cycle", cycle()),
        ("theta", theta()),
        ("figure_eight", figure_eight()),
        ("star5", star5()),
        ("spiral", spiral()),
    ]
}

/// Every named fixture.
pub fn by_name(name: &str) -> Option<EmbeddedGraph> {
    Some(match name {
        "cycle" => cycle(),
        "theta" => theta(),
        "figure_eight" => figure_eight(),
        "star5" => star5(),
        "spiral" => spiral(),
        "closed_curve" => closed_curve(),
        "u_shape" => u_shape(),
        "l_shape" => l_shape(),
        "segment" => segment(1.0),
        _ => return None,
    })
}

pub const NAMES: [&str; 9] = [
    "cycle",
    "theta",
    "figure_eight",
    "star5",
    "spiral",
    "closed_curve",
    "u_shape",
    "l_shape",
    "segment",
];

//! Plot data: Newton polygon points and sampled real branches of the impasse
//! curve. This is the only place that evaluates in floating point.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::BiPoly;
use crate::newton::{polygon, support_aux, MainSegment, NewtonPolygon, Point, Weight};
use crate::system::ConstrainedSystem;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlotBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Default for PlotBox {
    fn default() -> Self {
        PlotBox { x: (-1.0, 1.0), y: (-1.0, 1.0) }
    }
}

/// Polygon summary for the `polygon` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct PolygonReport {
    pub support: Vec<Point>,
    pub vertices: Vec<Point>,
    /// Inner normals and levels of the compact edges, left to right.
    pub edges: Vec<Weight>,
    pub main: MainSegment,
    pub main_vertex: Point,
    pub height: i32,
    pub controllable: bool,
    pub newton_elementary: bool,
}

pub fn polygon_report(poly: &NewtonPolygon) -> PolygonReport {
    PolygonReport {
        support: poly.support.points().copied().collect(),
        vertices: poly.vertices.clone(),
        edges: poly.edges(),
        main: poly.main,
        main_vertex: poly.main_vertex(),
        height: poly.height(),
        controllable: poly.is_controllable(),
        newton_elementary: poly.is_newton_elementary(),
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

/// Points of `delta = 0` found on the horizontal and vertical lines of an
/// `n x n` grid: exact zeros at grid nodes and bisected sign changes.
pub fn sample_zero_set(delta: &BiPoly, area: PlotBox, n: usize) -> Vec<(f64, f64)> {
    let xs = grid(area.x.0, area.x.1, n);
    let ys = grid(area.y.0, area.y.1, n);
    let mut out = Vec::new();
    for &y in &ys {
        let f = |x: f64| delta.eval_f64(x, y);
        for w in xs.windows(2) {
            let (fa, fb) = (f(w[0]), f(w[1]));
            if fa == 0.0 {
                out.push((w[0], y));
            } else if fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
                out.push((bisect(f, w[0], w[1]), y));
            }
        }
        if f(xs[n]) == 0.0 {
            out.push((xs[n], y));
        }
    }
    for &x in &xs {
        let f = |y: f64| delta.eval_f64(x, y);
        for w in ys.windows(2) {
            let (fa, fb) = (f(w[0]), f(w[1]));
            if fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
                out.push((x, bisect(f, w[0], w[1])));
            }
        }
    }
    out
}

/// CSV with a `# polygon` section (support points, vertex flag) and an
/// `# impasse` section (samples of `delta = 0`).
pub fn plot_data(sys: &ConstrainedSystem, area: PlotBox, n: usize) -> String {
    let mut out = String::from("# polygon\nr,s,vertex\n");
    if let Ok(poly) = polygon(&support_aux(sys)) {
        for p in poly.support.points() {
            let _ = writeln!(out, "{},{},{}", p.0, p.1, poly.vertices.contains(p) as u8);
        }
    }
    out.push_str("# impasse\nx,y\n");
    for (x, y) in sample_zero_set(&sys.delta, area, n) {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

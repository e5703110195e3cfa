//! Support, Newton polygon and weights of the auxiliary field.

use std::collections::BTreeSet;

use num::integer::gcd;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::system::{auxiliary_field, AuxField, ConstrainedSystem};

pub type Point = (i32, i32);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support(pub BTreeSet<Point>);

impl Support {
    pub fn from_points<I: IntoIterator<Item = Point>>(it: I) -> Self {
        Support(it.into_iter().collect())
    }
    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.0.iter()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }
}

/// Inner normal of the main segment and the value of its line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub wx: i32,
    pub wy: i32,
    pub level: i32,
}

impl Weight {
    pub fn new(wx: i32, wy: i32, level: i32) -> Self {
        assert!(wx >= 1 && wy >= 1 && gcd(wx, wy) == 1, "weight must be positive and coprime");
        Weight { wx, wy, level }
    }
    pub fn eval(&self, p: Point) -> i32 {
        self.wx * p.0 + self.wy * p.1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MainSegment {
    Sloped(Weight),
    /// The only vertex has more support on its horizontal ray.
    Horizontal,
    SinglePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub support: Support,
    /// Hull vertices, left to right.
    pub vertices: Vec<Point>,
    pub main: MainSegment,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("polygon has no sloped main segment")]
    NoMainSegment,
    #[error("empty support")]
    EmptySupport,
}

impl NewtonPolygon {
    pub fn main_vertex(&self) -> Point {
        self.vertices[0]
    }
    pub fn height(&self) -> i32 {
        self.vertices[0].1
    }
    pub fn is_controllable(&self) -> bool {
        is_controllable(self)
    }
    pub fn is_newton_elementary(&self) -> bool {
        is_newton_elementary(self)
    }
    /// `(wx, wy, level)` for each hull edge, left to right.
    pub fn edges(&self) -> Vec<Weight> {
        self.vertices.windows(2).map(|w| edge_weight(w[0], w[1])).collect()
    }
    /// Slope `-wx/wy` of the main segment as a rational pair; `None` when flat.
    pub fn main_slope(&self) -> Option<(i32, i32)> {
        match self.main {
            MainSegment::Sloped(w) => Some((w.wx, w.wy)),
            _ => None,
        }
    }
}

fn edge_weight(a: Point, b: Point) -> Weight {
    let (dr, ds) = (b.0 - a.0, a.1 - b.1);
    let g = gcd(dr, ds);
    let (wx, wy) = (ds / g, dr / g);
    Weight::new(wx, wy, wx * a.0 + wy * a.1)
}

pub fn support_aux(sys: &ConstrainedSystem) -> Support {
    Support(auxiliary_field(sys).support())
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) as i64 * (b.1 - o.1) as i64 - (a.1 - o.1) as i64 * (b.0 - o.0) as i64
}

/// Lower-left boundary of `sup + R^2_+`.
pub fn polygon(sup: &Support) -> Result<NewtonPolygon, NewtonError> {
    if sup.is_empty() {
        return Err(NewtonError::EmptySupport);
    }
    // lowest point of each column, then keep strictly descending ones
    let mut stair: Vec<Point> = Vec::new();
    let mut last_col = None;
    for &(r, s) in sup.points() {
        if last_col == Some(r) {
            continue;
        }
        last_col = Some(r);
        if stair.last().is_none_or(|&(_, ls)| s < ls) {
            stair.push((r, s));
        }
    }
    let mut hull: Vec<Point> = Vec::new();
    for p in stair {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let v0 = hull[0];
    let main = if hull.len() >= 2 {
        MainSegment::Sloped(edge_weight(hull[0], hull[1]))
    } else if sup.points().any(|&(r, s)| s == v0.1 && r > v0.0) {
        MainSegment::Horizontal
    } else {
        MainSegment::SinglePoint
    };
    Ok(NewtonPolygon { support: sup.clone(), vertices: hull, main })
}

pub fn weight_of(poly: &NewtonPolygon) -> Result<Weight, NewtonError> {
    match poly.main {
        MainSegment::Sloped(w) => Ok(w),
        _ => Err(NewtonError::NoMainSegment),
    }
}

/// Terms of both components lying on `wx r + wy s = d`.
pub fn graduation_level(aux: &AuxField, w: Weight, d: i32) -> AuxField {
    AuxField { a: aux.a.level((w.wx, w.wy), d), b: aux.b.level((w.wx, w.wy), d) }
}

pub fn is_controllable(poly: &NewtonPolygon) -> bool {
    matches!(poly.main_vertex().0, -1 | 0)
}

pub fn is_newton_elementary(poly: &NewtonPolygon) -> bool {
    let v = poly.main_vertex();
    if matches!(v, (0, 0) | (0, -1) | (-1, 0)) {
        return true;
    }
    match poly.main {
        MainSegment::Sloped(_) => false,
        // a lone vertex with nothing to its lower right is a flat main segment
        MainSegment::Horizontal | MainSegment::SinglePoint => is_controllable(poly),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BiPoly;

    fn sup(p: &[Point]) -> Support {
        Support::from_points(p.iter().copied())
    }

    #[test]
    fn cusp_fold_polygon() {
        let s = ConstrainedSystem::new(BiPoly::from_ints(&[(1, 1, 1)]), &BiPoly::y(), &BiPoly::from_ints(&[(1, 2, 0)]));
        let q = support_aux(&s);
        assert_eq!(q, sup(&[(0, 2), (3, 0)]));
        let poly = polygon(&q).unwrap();
        assert_eq!(poly.vertices, vec![(0, 2), (3, 0)]);
        assert_eq!(weight_of(&poly).unwrap(), Weight::new(2, 3, 6));
        assert_eq!(poly.height(), 2);
        assert!(poly.is_controllable());
        assert!(!poly.is_newton_elementary());
    }

    #[test]
    fn separatrix_example() {
        let s = ConstrainedSystem::new(BiPoly::y(), &BiPoly::from_ints(&[(2, 1, 0)]), &BiPoly::from_ints(&[(-1, 0, 1)]));
        let poly = polygon(&support_aux(&s)).unwrap();
        assert_eq!(poly.support, sup(&[(0, 1)]));
        assert_eq!(poly.main, MainSegment::SinglePoint);
        assert_eq!(poly.height(), 1);
        assert!(poly.is_newton_elementary());
    }

    #[test]
    fn cancellation_free_union() {
        let a = BiPoly::from_ints(&[(1, 0, 0), (-1, 0, 1)]);
        let b = BiPoly::from_ints(&[(1, 0, 1)]);
        let s = ConstrainedSystem {
            delta: BiPoly::y(),
            field: crate::system::LogVectorField::new(a, b),
            divisor: crate::system::DivisorFlag::None,
            coeff_field: None,
            trace: vec![],
        };
        assert_eq!(support_aux(&s), sup(&[(0, 1), (0, 2)]));
    }

    #[test]
    fn interior_point_ignored() {
        let poly = polygon(&sup(&[(0, 2), (2, 1), (3, 0)])).unwrap();
        assert_eq!(poly.vertices, vec![(0, 2), (3, 0)]);
        assert_eq!(Weight::new(2, 3, 6).eval((2, 1)), 7);
    }

    #[test]
    fn weights() {
        let poly = polygon(&sup(&[(0, 1), (1, 0)])).unwrap();
        assert_eq!(weight_of(&poly).unwrap(), Weight::new(1, 1, 1));
        let poly = polygon(&sup(&[(2, 2)])).unwrap();
        assert_eq!(weight_of(&poly), Err(NewtonError::NoMainSegment));
    }

    #[test]
    fn controllability() {
        assert!(polygon(&sup(&[(0, 2), (4, 0)])).unwrap().is_controllable());
        let p = polygon(&sup(&[(2, 1), (1, 2)])).unwrap();
        assert_eq!(p.main_vertex(), (1, 2));
        assert!(!p.is_controllable());
        assert!(polygon(&sup(&[(-1, 0)])).unwrap().is_controllable());
    }

    #[test]
    fn elementary_vertices() {
        assert!(polygon(&sup(&[(0, -1), (3, -1)])).unwrap().is_newton_elementary());
        assert!(polygon(&sup(&[(-1, 0), (0, -1)])).unwrap().is_newton_elementary());
        assert!(!polygon(&sup(&[(-1, 2), (0, 0)])).unwrap().is_newton_elementary());
        let h = polygon(&sup(&[(-1, 1), (2, 1)])).unwrap();
        assert_eq!(h.main, MainSegment::Horizontal);
        assert!(h.is_newton_elementary());
    }

    #[test]
    fn vertical_tie_takes_lower_point() {
        let p = polygon(&sup(&[(0, 3), (0, 1), (2, 0)])).unwrap();
        assert_eq!(p.main_vertex(), (0, 1));
    }

    #[test]
    fn graduation_filters_by_level() {
        let aux = AuxField {
            a: BiPoly::from_ints(&[(1, 0, 2), (5, 2, 2)]),
            b: BiPoly::from_ints(&[(1, 3, 0)]),
        };
        let w = Weight::new(2, 3, 6);
        let top = graduation_level(&aux, w, 6);
        assert_eq!(top.a, BiPoly::from_ints(&[(1, 0, 2)]));
        assert_eq!(top.b, aux.b);
        assert!(graduation_level(&aux, w, 5).a.is_zero());
    }
}

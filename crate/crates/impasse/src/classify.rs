//! Point classification, divisor candidates and the persistent point.

use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::field::{adjoin_root, field_real_roots, FieldRoot};
use crate::algebra::{gcd_bipoly, sign_of, BiPoly, Coef, Num, NumberField, Poly, Rational};
use crate::newton::{polygon, support_aux, NewtonPolygon, Point, Weight};
use crate::system::{ConstrainedSystem, DivisorFlag, LogVectorField};
use crate::transform::{blowup, choose_shear, shear, Axis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    NonSingular,
    SemiHyperbolicOffDelta,
    SeparatrixCoincidesDelta,
    HorizontalSegment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Elementary(Reason),
    NotElementary { height: i32 },
}

impl Verdict {
    pub fn is_elementary(&self) -> bool {
        matches!(self, Verdict::Elementary(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Elementary(r) => write!(f, "elementary ({r:?})"),
            Verdict::NotElementary { height } => write!(f, "not elementary (height {height})"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFlags {
    pub on_impasse: bool,
    pub impasse_non_smooth: bool,
    pub equilibrium: bool,
    pub tangency: bool,
}

/// Which frame produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    /// The chart's own coordinates (after a controlling shear if one was needed).
    Chart,
    /// A linear frame adapted to the linear part of the field or to the
    /// tangent of the impasse curve.
    Adapted,
    /// The chart with `x` and `y` exchanged, so that a divisor on the `x`
    /// axis is read like one on the `y` axis.
    Swapped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointClass {
    pub flags: PointFlags,
    pub divisor: DivisorFlag,
    pub verdict: Verdict,
    pub frame: Frame,
    pub polygon: NewtonPolygon,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassifyError {
    #[error("impasse curve contains the divisor axis")]
    DegenerateRestriction,
    #[error("no divisor axis along which to look for points")]
    NoDivisor,
}

fn origin(p: &BiPoly) -> Num {
    p.coeff((0, 0))
}

pub fn point_flags(sys: &ConstrainedSystem) -> PointFlags {
    let on_impasse = origin(&sys.delta).is_zero();
    let non_smooth = on_impasse && sys.delta.coeff((1, 0)).is_zero() && sys.delta.coeff((0, 1)).is_zero();
    let equilibrium = origin(&sys.p()).is_zero() && origin(&sys.q()).is_zero();
    let tangency = on_impasse && origin(&sys.x_delta()).is_zero();
    PointFlags { on_impasse, impasse_non_smooth: non_smooth, equilibrium, tangency }
}

fn local_polygon(sys: &ConstrainedSystem) -> NewtonPolygon {
    polygon(&support_aux(sys)).expect("nonzero auxiliary field")
}

/// Reason attached to a Newton-elementary polygon.
fn reason_for(poly: &NewtonPolygon, flags: &PointFlags) -> Reason {
    match poly.main_vertex() {
        (0, -1) | (-1, 0) => Reason::NonSingular,
        (0, 0) if !flags.on_impasse && flags.equilibrium => Reason::SemiHyperbolicOffDelta,
        (0, 0) => Reason::NonSingular,
        _ if flags.equilibrium => Reason::SeparatrixCoincidesDelta,
        _ => Reason::HorizontalSegment,
    }
}

/// Classify the origin of a chart.
pub fn classify_origin(sys: &ConstrainedSystem) -> PointClass {
    let flags = point_flags(sys);
    if sys.divisor == DivisorFlag::Exy {
        return corner_rule(sys);
    }
    let mut work = sys.clone();
    if sys.divisor == DivisorFlag::None && !local_polygon(sys).is_controllable() {
        let lam = choose_shear(sys);
        work = shear(sys, &lam).expect("interior chart").0;
    }
    let poly = local_polygon(&work);
    let make = |verdict, frame, polygon| PointClass { flags, divisor: sys.divisor, verdict, frame, polygon };
    let not_elem = Verdict::NotElementary { height: poly.height() };
    if flags.impasse_non_smooth {
        // a singular point of the impasse curve is never elementary
        return make(not_elem, Frame::Chart, poly);
    }
    if poly.is_newton_elementary() {
        return make(Verdict::Elementary(reason_for(&poly, &flags)), Frame::Chart, poly);
    }
    if sys.divisor == DivisorFlag::Ey {
        let swapped = local_polygon(&sys.swap());
        if swapped.is_newton_elementary() {
            return make(Verdict::Elementary(reason_for(&swapped, &flags)), Frame::Swapped, swapped);
        }
    }
    if sys.divisor == DivisorFlag::None {
        if let Some((reason, adapted)) = adapted_verdict(sys, &flags) {
            return make(Verdict::Elementary(reason), Frame::Adapted, adapted);
        }
    }
    make(not_elem, Frame::Chart, poly)
}

/// `[[P_x, P_y], [Q_x, Q_y]]` at the origin.
pub fn linear_part(sys: &ConstrainedSystem) -> [[Num; 2]; 2] {
    let (p, q) = (sys.p(), sys.q());
    [[p.coeff((1, 0)), p.coeff((0, 1))], [q.coeff((1, 0)), q.coeff((0, 1))]]
}

fn det2(m: &[[Num; 2]; 2]) -> Num {
    m[0][0].times(&m[1][1]).minus(&m[0][1].times(&m[1][0]))
}

/// `x = T x'`: impasse `delta o T`, field `T^{-1} X o T`.
pub fn linear_change(sys: &ConstrainedSystem, t: &[[Num; 2]; 2]) -> ConstrainedSystem {
    let sx = BiPoly::monomial(t[0][0].clone(), (1, 0)).add(&BiPoly::monomial(t[0][1].clone(), (0, 1)));
    let sy = BiPoly::monomial(t[1][0].clone(), (1, 0)).add(&BiPoly::monomial(t[1][1].clone(), (0, 1)));
    let d = det2(t).inv();
    let (p, q) = (sys.p().substitute(&sx, &sy), sys.q().substitute(&sx, &sy));
    let np = p.scale(&t[1][1]).sub(&q.scale(&t[0][1])).scale(&d);
    let nq = q.scale(&t[0][0]).sub(&p.scale(&t[1][0])).scale(&d);
    ConstrainedSystem {
        delta: sys.delta.substitute(&sx, &sy),
        field: LogVectorField::from_pq(&np, &nq),
        divisor: sys.divisor,
        coeff_field: sys.coeff_field.clone(),
        trace: sys.trace.clone(),
    }
}

/// Adjoin `sqrt(d)` (for `d > 0`) to the system's field; returns the lifted
/// system and the root.
fn with_sqrt(sys: &ConstrainedSystem, d: &Num) -> (ConstrainedSystem, Num) {
    let poly = Poly::new(vec![d.negate(), Num::zero(), Num::one()]);
    let root = field_real_roots(&poly)
        .into_iter()
        .map(|(r, _)| r)
        .find(|r: &FieldRoot| r.lo >= Rational::zero())
        .expect("positive square root");
    let ext = adjoin_root(sys.coeff_field.as_ref(), &root);
    let lift = |p: &BiPoly| p.map_coeffs(|c| ext.lift(c));
    let lifted = ConstrainedSystem {
        delta: lift(&sys.delta),
        field: LogVectorField::from_pq(&lift(&sys.p()), &lift(&sys.q())),
        divisor: sys.divisor,
        coeff_field: ext.field.clone(),
        trace: sys.trace.clone(),
    };
    (lifted, ext.xi)
}

/// Frame in which the linear part of an equilibrium is in real Jordan form.
fn jordan_frame(sys: &ConstrainedSystem) -> ConstrainedSystem {
    let j = linear_part(sys);
    let tr = j[0][0].plus(&j[1][1]);
    let disc = tr.times(&tr).minus(&det2(&j).times(&Num::int(4)));
    let half = Num::frac(1, 2);
    let (p, q, r, s) = (&j[0][0], &j[0][1], &j[1][0], &j[1][1]);
    if q.is_zero() && r.is_zero() {
        return sys.clone();
    }
    match sign_of(&disc) {
        1 => {
            let (lifted, root) = with_sqrt(sys, &disc);
            let j = linear_part(&lifted);
            let (p, q, r, s) = (&j[0][0], &j[0][1], &j[1][0], &j[1][1]);
            let tr = p.plus(s);
            let eig = |sg: i64| tr.plus(&root.times(&Num::int(sg))).times(&half);
            let vec_for = |l: Num| if !q.is_zero() { [q.clone(), l.minus(p)] } else { [l.minus(s), r.clone()] };
            let (v1, v2) = (vec_for(eig(1)), vec_for(eig(-1)));
            linear_change(&lifted, &[[v1[0].clone(), v2[0].clone()], [v1[1].clone(), v2[1].clone()]])
        }
        0 => {
            let lam = tr.times(&half);
            // (J - lam) w = v with w a basis vector not in the kernel
            let m = [[p.minus(&lam), q.clone()], [r.clone(), s.minus(&lam)]];
            let w = if !m[0][0].is_zero() || !m[1][0].is_zero() { [Num::one(), Num::zero()] } else { [Num::zero(), Num::one()] };
            let v = [m[0][0].times(&w[0]).plus(&m[0][1].times(&w[1])), m[1][0].times(&w[0]).plus(&m[1][1].times(&w[1]))];
            linear_change(sys, &[[v[0].clone(), w[0].clone()], [v[1].clone(), w[1].clone()]])
        }
        _ => {
            let (lifted, root) = with_sqrt(sys, &disc.negate());
            let j = linear_part(&lifted);
            let (p, q, s) = (&j[0][0], &j[0][1], &j[1][1]);
            let alpha = p.plus(s).times(&half);
            let omega = root.times(&half);
            // real and imaginary parts of the eigenvector (q, lambda - p)
            linear_change(&lifted, &[[q.clone(), Num::zero()], [alpha.minus(p), omega]])
        }
    }
}

/// Frame whose `y` axis is normal to the impasse curve at the origin.
fn impasse_frame(sys: &ConstrainedSystem) -> ConstrainedSystem {
    let (c10, c01) = (sys.delta.coeff((1, 0)), sys.delta.coeff((0, 1)));
    if c01.is_zero() {
        return linear_change(sys, &[[Num::zero(), Num::one()], [Num::one(), Num::zero()]]);
    }
    linear_change(sys, &[[Num::one(), Num::zero()], [c10.div(&c01).negate(), Num::one()]])
}

/// Is `pt` on the lower-left boundary of the polygon (vertex or edge point)?
pub fn on_boundary(poly: &NewtonPolygon, pt: Point) -> bool {
    if !poly.support.contains(pt) {
        return false;
    }
    let v = &poly.vertices;
    if v.contains(&pt) {
        return true;
    }
    let first = v[0];
    let last = *v.last().unwrap();
    if pt.0 == first.0 && pt.1 >= first.1 || pt.1 == last.1 && pt.0 >= last.0 {
        return true;
    }
    poly.edges().iter().any(|w| w.eval(pt) == w.level)
}

/// Is the branch of the impasse curve through the origin invariant?
pub fn impasse_branch_invariant(sys: &ConstrainedSystem) -> bool {
    let g = gcd_bipoly(&sys.delta, &sys.x_delta());
    !g.is_constant() && origin(&g).is_zero()
}

/// Verdict in coordinates adapted to the point: a Jordan frame for
/// equilibria, a frame aligned with the impasse curve on it, and a frame with
/// `P(0) != 0` at regular points. The boundary of the polygon in that frame
/// decides, and on a smooth impasse curve an invariant branch straightens to
/// a horizontal main segment.
fn adapted_verdict(sys: &ConstrainedSystem, flags: &PointFlags) -> Option<(Reason, NewtonPolygon)> {
    if !flags.on_impasse {
        if !flags.equilibrium {
            let f = if origin(&sys.p()).is_zero() { sys.swap() } else { sys.clone() };
            let poly = local_polygon(&f);
            return poly.is_newton_elementary().then_some((Reason::NonSingular, poly));
        }
        let poly = local_polygon(&jordan_frame(sys));
        return on_boundary(&poly, (0, 0)).then_some((Reason::SemiHyperbolicOffDelta, poly));
    }
    let framed = impasse_frame(sys);
    let poly = local_polygon(&framed);
    if !flags.equilibrium {
        if on_boundary(&poly, (0, 0)) {
            return Some((Reason::NonSingular, poly));
        }
        return impasse_branch_invariant(sys).then_some((Reason::HorizontalSegment, poly));
    }
    let semi = poly.support.contains((0, 1)) && on_boundary(&poly, (0, 1));
    (semi && impasse_branch_invariant(sys)).then_some((Reason::SeparatrixCoincidesDelta, poly))
}

/// Classification at a corner of the divisor.
pub fn corner_rule(sys: &ConstrainedSystem) -> PointClass {
    let flags = point_flags(sys);
    let poly = local_polygon(sys);
    let swapped = local_polygon(&sys.swap());
    let (verdict, frame, poly) = if flags.on_impasse {
        (Verdict::NotElementary { height: poly.height() }, Frame::Chart, poly)
    } else if poly.is_newton_elementary() {
        (Verdict::Elementary(reason_for(&poly, &flags)), Frame::Chart, poly)
    } else if swapped.is_newton_elementary() {
        (Verdict::Elementary(reason_for(&swapped, &flags)), Frame::Swapped, swapped)
    } else {
        (Verdict::NotElementary { height: poly.height() }, Frame::Chart, poly)
    };
    PointClass { flags, divisor: sys.divisor, verdict, frame, polygon: poly }
}

/// Nonzero real roots of `f`, separated and ascending.
fn nonzero_roots(f: &Poly<Num>) -> Vec<FieldRoot> {
    let k = f.order();
    let g = Poly::new(f.coeffs()[k..].to_vec());
    let g = g.squarefree_part();
    field_real_roots(&g).into_iter().map(|(r, _)| r).collect()
}

/// Candidate non-elementary points on the divisor axis (other than the
/// origin): zeros of the impasse curve and of the field along the axis.
pub fn divisor_candidates(sys: &ConstrainedSystem, axis: Axis) -> Result<Vec<FieldRoot>, ClassifyError> {
    let s = match axis {
        Axis::Y if sys.divisor.has_x() => sys.clone(),
        Axis::X if sys.divisor.has_y() => sys.swap(),
        _ => return Err(ClassifyError::NoDivisor),
    };
    let c0 = s.delta.x_slice(0);
    if c0.is_zero() {
        return Err(ClassifyError::DegenerateRestriction);
    }
    let along = s.q().x_slice(0);
    let along = if along.is_zero() { s.field.a().x_slice(0) } else { along };
    Ok(nonzero_roots(&c0.mul(&along)))
}

/// Largest `m` with `(t - xi)^m | f`; `None` for the zero polynomial.
fn multiplicity_at(f: &Poly<Num>, xi: &Num) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    let lin = Poly::new(vec![xi.negate(), Num::one()]);
    let mut g = f.clone();
    let mut m = 0;
    while !g.is_zero() && g.deg() > 0 && lin.divides(&g) {
        g = g.exact_div(&lin);
        m += 1;
    }
    Some(m)
}

/// The unique root of `f = c (t - xi)^deg`, if `f` has that form.
fn single_root(f: &Poly<Num>) -> Option<Num> {
    let d = f.deg();
    if d == 0 {
        return None;
    }
    let xi = f.coeff(d - 1).div(&f.coeff(d)).times(&Num::frac(-1, d as i64));
    (multiplicity_at(f, &xi) == Some(d)).then_some(xi)
}

/// Point on the positive x-chart divisor where the height would not drop.
///
/// With `C0 = delta~(0, y)`, `A0 = a~(0, y)` and `B = Q~(0, y)` after the
/// blow-up, it is a common `xi != 0` that is a root of multiplicity `deg C0`
/// of `C0`, `r2` of `A0` and `r2 + 1` of `B`, where
/// `r2 = max(deg A0, deg B - 1)`.
pub fn persistent_point(parent: &ConstrainedSystem, w: Weight) -> Option<Num> {
    let (child, _) = blowup(parent, w, Axis::X, 1).ok()?;
    let c0 = child.delta.x_slice(0);
    let a0 = child.field.a().x_slice(0);
    let b = child.q().x_slice(0);
    let r1 = c0.degree()?;
    let r2 = a0.degree().unwrap_or(0).max(b.degree().map(|d| d.saturating_sub(1)).unwrap_or(0));
    if r1 == 0 {
        return None;
    }
    let xi = [&c0, &a0, &b].into_iter().find(|f| f.degree().unwrap_or(0) >= 1).and_then(single_root)?;
    if xi.is_zero() {
        return None;
    }
    let ok = |f: &Poly<Num>, need: usize| multiplicity_at(f, &xi).is_none_or(|m| m >= need);
    if !(ok(&c0, r1) && ok(&a0, r2) && ok(&b, r2 + 1)) {
        return None;
    }
    if w.wx != 1 {
        log::warn!("persistent point with non-integral weight ratio {}/{}", w.wy, w.wx);
        return None;
    }
    Some(xi)
}

/// Elementarity decided from first principles (values, gradients, Jacobian
/// trace and determinant, invariance by a gcd), without any polygon.
pub fn semantic_elementary(sys: &ConstrainedSystem) -> Option<bool> {
    let at0 = |p: &BiPoly| p.eval(&Num::zero(), &Num::zero());
    let (p, q, d) = (sys.p(), sys.q(), &sys.delta);
    let (p0, q0) = (at0(&p), at0(&q));
    let regular = !(p0.is_zero() && q0.is_zero());
    let (px, py, qx, qy) = (at0(&p.dx()), at0(&p.dy()), at0(&q.dx()), at0(&q.dy()));
    let tr = px.plus(&qy);
    let det = px.times(&qy).minus(&py.times(&qx));
    let semi_hyperbolic = !tr.is_zero() || sign_of(&det) < 0;
    if !at0(d).is_zero() {
        return Some(regular || semi_hyperbolic);
    }
    let (dx, dy) = (at0(&d.dx()), at0(&d.dy()));
    if dx.is_zero() && dy.is_zero() {
        return Some(false);
    }
    let xd = p.mul(&d.dx()).add(&q.mul(&d.dy()));
    let invariant = || xd.is_zero() || d.divides(&xd) || at0(&gcd_bipoly(d, &xd)).is_zero() && gcd_bipoly(d, &xd).total_degree() > 0;
    if regular {
        let transversal = !p0.times(&dx).plus(&q0.times(&dy)).is_zero();
        return Some(transversal || invariant());
    }
    Some(semi_hyperbolic && invariant())
}

/// Field of a classification's polygon frame (for reports).
pub fn frame_field(sys: &ConstrainedSystem) -> Option<Arc<NumberField>> {
    sys.coeff_field.clone()
}

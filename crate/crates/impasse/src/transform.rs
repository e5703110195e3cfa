//! Coordinate changes of the algorithm: shear, weighted directional blow-up,
//! admissible change and translation along a divisor.

use std::fmt;
use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::field::{adjoin_root, Extension, FieldRoot};
use crate::algebra::{AlgebraicReal, BiPoly, Exp, Num, NumberField};
use crate::newton::{polygon, support_aux, NewtonPolygon, Weight};
use crate::system::{ConstrainedSystem, DivisorFlag, LogVectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// A point moved to the origin: its exact value and its image in the child's
/// coefficient field.
#[derive(Clone, Debug)]
pub struct TranslationPoint {
    pub value: AlgebraicReal,
    /// The point as an element of the child field.
    pub xi: Num,
    /// Image of the parent field's generator in the child field.
    pub parent_gen: Option<Num>,
}

#[derive(Clone, Debug)]
pub enum Transform {
    Shear { lambda: Num },
    BlowUp { axis: Axis, sign: i8, weight: Weight },
    Admissible { alpha: Num, beta: u32 },
    Translate { point: TranslationPoint, axis: Axis },
}

impl Transform {
    pub fn kind(&self) -> &'static str {
        match self {
            Transform::Shear { .. } => "shear",
            Transform::BlowUp { .. } => "blowup",
            Transform::Admissible { .. } => "admissible",
            Transform::Translate { .. } => "translate",
        }
    }
}

/// One edge of the resolution tree. The child satisfies
/// `delta_parent o phi = x^i y^j delta_child` with `(i, j) = delta_div` and
/// `X_parent o phi = x^k y^l DPhi X_child` with `(k, l) = field_div`.
#[derive(Clone, Debug)]
pub struct TransformRecord {
    pub transform: Transform,
    pub delta_div: Exp,
    pub field_div: Exp,
}

impl TransformRecord {
    fn plain(transform: Transform) -> Self {
        TransformRecord { transform, delta_div: (0, 0), field_div: (0, 0) }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Serialize, Deserialize)]
pub enum TransformError {
    #[error("shear applied on a divisor")]
    ShearOnDivisor,
    #[error("polygon is not controllable")]
    NotControllable,
    #[error("no sloped main segment")]
    NoMainSegment,
    #[error("monomial division was not exact")]
    InexactDivision,
    #[error("height changed from {0} to {1}")]
    HeightChanged(i32, i32),
    #[error("translation along {0} needs that axis flagged")]
    TranslateOffDivisor(Axis),
    #[error("field became identically zero")]
    ZeroField,
}

fn local_polygon(sys: &ConstrainedSystem) -> NewtonPolygon {
    polygon(&support_aux(sys)).expect("nonzero auxiliary field")
}

/// `x^e.0 y^e.1` with unit coefficient.
pub fn monomial(e: Exp) -> BiPoly {
    BiPoly::monomial(Num::int(1), e)
}

fn child(parent: &ConstrainedSystem, delta: BiPoly, field: LogVectorField, divisor: DivisorFlag, tag: String) -> ConstrainedSystem {
    let mut trace = parent.trace.clone();
    trace.push(tag);
    ConstrainedSystem { delta, field, divisor, coeff_field: parent.coeff_field.clone(), trace }
}

/// Divide the log components by their common monomial on flagged axes.
/// Returns the system and the removed exponent.
pub fn cleanup(mut sys: ConstrainedSystem) -> (ConstrainedSystem, Exp) {
    let (a, b) = (sys.field.a(), sys.field.b());
    let mins: Vec<Exp> = [a.min_exps(), b.min_exps()].into_iter().flatten().collect();
    let mx = mins.iter().map(|m| m.0).min().unwrap_or(0);
    let my = mins.iter().map(|m| m.1).min().unwrap_or(0);
    let e = (
        if sys.divisor.has_x() { mx.max(0) } else { 0 },
        if sys.divisor.has_y() { my.max(0) } else { 0 },
    );
    if e != (0, 0) {
        let na = a.div_monomial(e).expect("common monomial");
        let nb = b.div_monomial(e).expect("common monomial");
        sys.field = LogVectorField::new(na, nb);
    }
    (sys, e)
}

fn add_exp(a: Exp, b: Exp) -> Exp {
    (a.0 + b.0, a.1 + b.1)
}

/// `x = x' + lambda y'` on an interior chart.
pub fn shear(sys: &ConstrainedSystem, lambda: &Num) -> Result<(ConstrainedSystem, TransformRecord), TransformError> {
    if sys.divisor != DivisorFlag::None {
        return Err(TransformError::ShearOnDivisor);
    }
    let sx = BiPoly::x().add(&BiPoly::y().scale(lambda));
    let sy = BiPoly::y();
    let (p, q) = (sys.p(), sys.q());
    let delta = sys.delta.substitute(&sx, &sy);
    let np = p.sub(&q.scale(lambda)).substitute(&sx, &sy);
    let nq = q.substitute(&sx, &sy);
    let c = child(sys, delta, LogVectorField::from_pq(&np, &nq), DivisorFlag::None, format!("shear({lambda:?})"));
    Ok((c, TransformRecord::plain(Transform::Shear { lambda: lambda.clone() })))
}

/// Smallest `lambda` in `1, -1, 2, -2, ...` giving a controllable polygon
/// whose main vertex sits on the lowest diagonal; `0` if none is needed.
///
/// The diagonal condition is polynomial in `lambda` of degree at most
/// `lowest + 2`, so scanning `lowest + 3` magnitudes decides it. When it
/// fails identically (a radial lowest part, say) the first controllable
/// shear is returned.
pub fn choose_shear(sys: &ConstrainedSystem) -> Num {
    if local_polygon(sys).is_controllable() || sys.divisor != DivisorFlag::None {
        return Num::zero();
    }
    let lowest = lowest_log_degree(sys);
    let bound = (lowest + 3).max(1) as i64;
    let mut fallback = None;
    for k in 1..=bound {
        for lam in [k, -k] {
            let lam = Num::int(lam);
            let (c, _) = shear(sys, &lam).expect("interior");
            let poly = local_polygon(&c);
            let v = poly.main_vertex();
            if poly.is_controllable() {
                if v.0 + v.1 == lowest {
                    return lam;
                }
                fallback.get_or_insert(lam);
            }
        }
    }
    match fallback {
        Some(lam) => {
            log::debug!("no shear reaches the lowest diagonal; using {lam:?}");
            lam
        }
        None => panic!("no controlling shear within |lambda| <= {bound}"),
    }
}

/// Minimum of `r + s` over the auxiliary support.
pub fn lowest_log_degree(sys: &ConstrainedSystem) -> i32 {
    support_aux(sys).points().map(|p| p.0 + p.1).min().expect("nonempty")
}

/// Directional weighted blow-up of the origin.
pub fn blowup(sys: &ConstrainedSystem, w: Weight, axis: Axis, sign: i8) -> Result<(ConstrainedSystem, TransformRecord), TransformError> {
    assert!(sign == 1 || sign == -1);
    let poly = local_polygon(sys);
    if !poly.is_controllable() {
        return Err(TransformError::NotControllable);
    }
    match axis {
        Axis::X => blowup_x(sys, w, sign),
        Axis::Y => {
            // the y-direction is the x-direction with the roles exchanged
            let swapped = sys.swap();
            let ws = Weight { wx: w.wy, wy: w.wx, level: w.level };
            let (c, rec) = blowup_x(&swapped, ws, sign)?;
            let mut c = c.swap();
            c.trace = sys.trace.clone();
            c.trace.push(format!("blowup(y,{},{},{})", sign, w.wx, w.wy));
            let rec = TransformRecord {
                transform: Transform::BlowUp { axis: Axis::Y, sign, weight: w },
                delta_div: (rec.delta_div.1, rec.delta_div.0),
                field_div: (rec.field_div.1, rec.field_div.0),
            };
            Ok((c, rec))
        }
    }
}

fn blowup_x(sys: &ConstrainedSystem, w: Weight, sign: i8) -> Result<(ConstrainedSystem, TransformRecord), TransformError> {
    let (w1, w2) = (w.wx, w.wy);
    let sgn = |m: i32| if sign < 0 && m.rem_euclid(2) == 1 { Num::int(-1) } else { Num::int(1) };
    let map = |e: Exp| (sgn(e.0), (w1 * e.0 + w2 * e.1, e.1));
    let dphi = sys.delta.monomial_map(map);
    let a = sys.field.a().monomial_map(map);
    let b = sys.field.b().monomial_map(map);
    let na = a.scale(&Num::frac(1, w1 as i64));
    let nb = b.sub(&a.scale(&Num::frac(w2 as i64, w1 as i64)));
    let d1 = dphi.min_exps().map(|m| m.0).unwrap_or(0);
    let d2 = [na.min_exps(), nb.min_exps()].into_iter().flatten().map(|m| m.0).min().ok_or(TransformError::ZeroField)?;
    if d1 + d2 != w.level {
        return Err(TransformError::InexactDivision);
    }
    let delta = dphi.div_monomial((d1, 0)).ok_or(TransformError::InexactDivision)?;
    let na = na.div_monomial((d2, 0)).ok_or(TransformError::InexactDivision)?;
    let nb = nb.div_monomial((d2, 0)).ok_or(TransformError::InexactDivision)?;
    let divisor = DivisorFlag::from_axes(true, sys.divisor.has_y());
    let c = child(sys, delta, LogVectorField::new(na, nb), divisor, format!("blowup(x,{},{},{})", sign, w1, w2));
    let (c, extra) = cleanup(c);
    let rec = TransformRecord {
        transform: Transform::BlowUp { axis: Axis::X, sign, weight: w },
        delta_div: (d1, 0),
        field_div: add_exp((d2, 0), extra),
    };
    Ok((c, rec))
}

/// `y = y' + alpha x'^beta`.
pub fn admissible(sys: &ConstrainedSystem, alpha: &Num, beta: u32) -> Result<(ConstrainedSystem, TransformRecord), TransformError> {
    assert!(beta >= 1);
    let before = local_polygon(sys);
    let sx = BiPoly::x();
    let sy = BiPoly::y().add(&BiPoly::monomial(alpha.clone(), (beta as i32, 0)));
    let p = sys.p().substitute(&sx, &sy);
    let q = sys.q().substitute(&sx, &sy);
    let corr = BiPoly::monomial(Coef::times(alpha, &Num::int(beta as i64)), (beta as i32 - 1, 0));
    let nq = q.sub(&corr.mul(&p));
    let delta = sys.delta.substitute(&sx, &sy);
    let divisor = DivisorFlag::from_axes(sys.divisor.has_x(), false);
    let c = child(sys, delta, LogVectorField::from_pq(&p, &nq), divisor, format!("admissible({alpha:?},{beta})"));
    let (c, extra) = cleanup(c);
    let after = local_polygon(&c);
    if before.is_controllable() && before.height() != after.height() {
        return Err(TransformError::HeightChanged(before.height(), after.height()));
    }
    let rec = TransformRecord {
        transform: Transform::Admissible { alpha: alpha.clone(), beta },
        delta_div: (0, 0),
        field_div: extra,
    };
    Ok((c, rec))
}

use crate::algebra::Coef;

/// Move the divisor point with coordinate `root` (a real root of a
/// polynomial over the current field) to the origin, along `axis`.
pub fn translate(sys: &ConstrainedSystem, root: &FieldRoot, axis: Axis) -> Result<(ConstrainedSystem, TransformRecord), TransformError> {
    let needed = match axis {
        Axis::Y => sys.divisor.has_x(),
        Axis::X => sys.divisor.has_y(),
    };
    if !needed {
        return Err(TransformError::TranslateOffDivisor(axis));
    }
    let ext = adjoin_root(sys.coeff_field.as_ref(), root);
    let point = TranslationPoint { value: root.over_rationals(), xi: ext.xi.clone(), parent_gen: ext.old_gen.clone() };
    translate_with(sys, &ext, point, axis)
}

/// Translation by a value already in the current field.
pub fn translate_by(sys: &ConstrainedSystem, xi: &Num, value: AlgebraicReal, axis: Axis) -> Result<(ConstrainedSystem, TransformRecord), TransformError> {
    let ext = Extension { field: sys.coeff_field.clone(), old_gen: sys.coeff_field.as_ref().map(|k| k.gen()), xi: xi.clone() };
    let point = TranslationPoint { value, xi: xi.clone(), parent_gen: ext.old_gen.clone() };
    translate_with(sys, &ext, point, axis)
}

fn translate_with(sys: &ConstrainedSystem, ext: &Extension, point: TranslationPoint, axis: Axis) -> Result<(ConstrainedSystem, TransformRecord), TransformError> {
    let lift = |p: &BiPoly| p.map_coeffs(|c| ext.lift(c));
    let (sx, sy) = translation_map(&point.xi, axis);
    let delta = lift(&sys.delta).substitute(&sx, &sy);
    let p = lift(&sys.p()).substitute(&sx, &sy);
    let q = lift(&sys.q()).substitute(&sx, &sy);
    let divisor = match axis {
        Axis::Y => DivisorFlag::from_axes(true, sys.divisor.has_y() && point.xi.is_zero()),
        Axis::X => DivisorFlag::from_axes(sys.divisor.has_x() && point.xi.is_zero(), true),
    };
    let mut c = child(sys, delta, LogVectorField::from_pq(&p, &q), divisor, format!("translate({axis},{:.6})", point.value.to_f64()));
    c.coeff_field = ext.field.clone();
    let (c, extra) = cleanup(c);
    let rec = TransformRecord { transform: Transform::Translate { point, axis }, delta_div: (0, 0), field_div: extra };
    Ok((c, rec))
}

fn translation_map(xi: &Num, axis: Axis) -> (BiPoly, BiPoly) {
    match axis {
        Axis::Y => (BiPoly::x(), BiPoly::y().add(&BiPoly::constant(xi.clone()))),
        Axis::X => (BiPoly::x().add(&BiPoly::constant(xi.clone())), BiPoly::y()),
    }
}

/// The map `phi` of a record (in child coordinates), its Jacobian, and a
/// lifting of parent coefficients into the child field.
pub struct PullbackData {
    pub map: (BiPoly, BiPoly),
    pub jacobian: [[BiPoly; 2]; 2],
    pub parent_gen: Option<Num>,
}

pub fn pullback_data(rec: &TransformRecord) -> PullbackData {
    let (x, y) = (BiPoly::x(), BiPoly::y());
    let one = BiPoly::one();
    let zero = BiPoly::zero();
    match &rec.transform {
        Transform::Shear { lambda } => PullbackData {
            map: (x.add(&y.scale(lambda)), y),
            jacobian: [[one.clone(), BiPoly::constant(lambda.clone())], [zero, one]],
            parent_gen: None,
        },
        Transform::BlowUp { axis: Axis::X, sign, weight } => {
            let (w1, w2) = (weight.wx, weight.wy);
            let s = Num::int(*sign as i64);
            PullbackData {
                map: (BiPoly::monomial(s.clone(), (w1, 0)), BiPoly::monomial(Num::int(1), (w2, 1))),
                jacobian: [
                    [BiPoly::monomial(Coef::times(&s, &Num::int(w1 as i64)), (w1 - 1, 0)), zero],
                    [BiPoly::monomial(Num::int(w2 as i64), (w2 - 1, 1)), BiPoly::monomial(Num::int(1), (w2, 0))],
                ],
                parent_gen: None,
            }
        }
        Transform::BlowUp { axis: Axis::Y, sign, weight } => {
            let (w1, w2) = (weight.wx, weight.wy);
            let s = Num::int(*sign as i64);
            PullbackData {
                map: (BiPoly::monomial(Num::int(1), (1, w1)), BiPoly::monomial(s.clone(), (0, w2))),
                jacobian: [
                    [BiPoly::monomial(Num::int(1), (0, w1)), BiPoly::monomial(Num::int(w1 as i64), (1, w1 - 1))],
                    [zero, BiPoly::monomial(Coef::times(&s, &Num::int(w2 as i64)), (0, w2 - 1))],
                ],
                parent_gen: None,
            }
        }
        Transform::Admissible { alpha, beta } => {
            let b = *beta as i32;
            PullbackData {
                map: (x, y.add(&BiPoly::monomial(alpha.clone(), (b, 0)))),
                jacobian: [[one.clone(), zero], [BiPoly::monomial(Coef::times(alpha, &Num::int(b as i64)), (b - 1, 0)), one]],
                parent_gen: None,
            }
        }
        Transform::Translate { point, axis } => PullbackData {
            map: translation_map(&point.xi, *axis),
            jacobian: [[one.clone(), zero.clone()], [zero, one]],
            parent_gen: point.parent_gen.clone(),
        },
    }
}

/// Lift a parent polynomial into the child's field for a record.
pub fn lift_parent(p: &BiPoly, data: &PullbackData) -> BiPoly {
    match &data.parent_gen {
        Some(g) => p.map_coeffs(|c| match c {
            Num::Alg(..) => c.embed(g),
            _ => c.clone(),
        }),
        None => p.clone(),
    }
}

/// Which identity of a pullback failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PullbackFailure {
    Impasse,
    FirstComponent,
    SecondComponent,
}

/// Exact check of `delta_p o phi = m1 delta_c` and
/// `X_p o phi = m2 DPhi X_c`.
pub fn verify_pullback(parent: &ConstrainedSystem, child: &ConstrainedSystem, rec: &TransformRecord) -> Result<(), PullbackFailure> {
    let data = pullback_data(rec);
    let (sx, sy) = &data.map;
    let dp = lift_parent(&parent.delta, &data).substitute(sx, sy);
    if dp != monomial(rec.delta_div).mul(&child.delta) {
        return Err(PullbackFailure::Impasse);
    }
    let pp = lift_parent(&parent.p(), &data).substitute(sx, sy);
    let qp = lift_parent(&parent.q(), &data).substitute(sx, sy);
    let m2 = monomial(rec.field_div);
    let (pc, qc) = (child.p(), child.q());
    let j = &data.jacobian;
    let rp = j[0][0].mul(&pc).add(&j[0][1].mul(&qc)).mul(&m2);
    let rq = j[1][0].mul(&pc).add(&j[1][1].mul(&qc)).mul(&m2);
    if pp != rp {
        return Err(PullbackFailure::FirstComponent);
    }
    if qp != rq {
        return Err(PullbackFailure::SecondComponent);
    }
    Ok(())
}

/// Field of a system, for callers that only need to know whether it is `Q`.
pub fn field_degree(k: &Option<Arc<NumberField>>) -> usize {
    k.as_ref().map(|k| k.degree()).unwrap_or(1)
}

//! Brute-force and numeric cross-checks, plus seeded random systems.
//!
//! Nothing here calls into `newton` or `transform`; the checks are meant to
//! catch mistakes in those modules.

use std::collections::BTreeMap;

use num::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BiPoly, Coef, Exp, Num, Rational};
use crate::newton::Point;
use crate::system::{ConstrainedSystem, DivisorFlag};
use crate::transform::{Axis, Transform, TransformRecord};

/// Vertices of the lower-left boundary of `S + R^2_+` by testing every line
/// through two points (or a point and an axis direction).
pub fn hull_bruteforce(points: &[Point]) -> Vec<Point> {
    assert!(!points.is_empty());
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    // a point is a vertex iff some weight (u, v) > 0 makes it the unique minimiser
    let mut out = Vec::new();
    for &p in &pts {
        let mut is_vertex = false;
        // candidate weights: normals of segments through p, perturbed both ways, and the axes
        let mut dirs: Vec<(i64, i64)> = vec![(1, 1000), (1000, 1)];
        for &q in &pts {
            if q == p {
                continue;
            }
            let (dr, ds) = ((q.0 - p.0) as i64, (q.1 - p.1) as i64);
            // normal (u, v) with u dr + v ds = 0
            let (u, v) = (ds.abs(), dr.abs());
            if u > 0 && v > 0 {
                dirs.push((1000 * u + 1, 1000 * v));
                dirs.push((1000 * u, 1000 * v + 1));
            }
        }
        for (u, v) in dirs {
            let val = |q: &Point| u * q.0 as i64 + v * q.1 as i64;
            let mine = val(&p);
            if pts.iter().all(|q| *q == p || val(q) > mine) {
                is_vertex = true;
                break;
            }
        }
        if is_vertex {
            out.push(p);
        }
    }
    out.sort();
    out
}

type Dense = BTreeMap<Exp, Num>;

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = (ea.0 + eb.0, ea.1 + eb.1);
            let c = out.remove(&e).unwrap_or_else(Num::zero).plus(&ca.times(cb));
            if !c.is_zero() {
                out.insert(e, c);
            }
        }
    }
    out
}

fn dense(p: &BiPoly) -> Dense {
    p.terms().map(|(e, c)| (*e, c.clone())).collect()
}

/// Plain expansion of `p(sx, sy)`, term by term with repeated multiplication.
pub fn substitute_bruteforce(p: &BiPoly, sx: &BiPoly, sy: &BiPoly) -> BiPoly {
    assert!(p.is_polynomial(), "polynomial input");
    let (dx, dy) = (dense(sx), dense(sy));
    let mut acc = Dense::new();
    for (e, c) in p.terms() {
        let mut t: Dense = [((0, 0), c.clone())].into_iter().collect();
        for _ in 0..e.0 {
            t = dense_mul(&t, &dx);
        }
        for _ in 0..e.1 {
            t = dense_mul(&t, &dy);
        }
        for (k, v) in t {
            let s = acc.remove(&k).unwrap_or_else(Num::zero).plus(&v);
            if !s.is_zero() {
                acc.insert(k, s);
            }
        }
    }
    BiPoly::from_terms(acc.into_iter().map(|(e, c)| (c, e.0, e.1)))
}

/// Double-double number `hi + lo`, roughly 32 significant digits.
///
/// Children of deep translations have degree-60 components with large
/// coefficients; plain `f64` evaluation loses most digits to cancellation.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn from_rational(q: &Rational) -> Dd {
        let hi = q.to_f64().unwrap_or(f64::NAN);
        let lo = Rational::from_float(hi).map_or(0.0, |h| (q - h).to_f64().unwrap_or(0.0));
        quick_two_sum(hi, lo)
    }

    fn from_num(c: &Num) -> Dd {
        match c {
            Num::Rat(q) => Dd::from_rational(q),
            Num::Alg(p, k) => {
                let (hi, lo) = k.approx_pair();
                let t = Dd { hi, lo };
                p.coeffs().iter().rev().fold(Dd::ZERO, |acc, c| acc * t + Dd::from_rational(c))
            }
        }
    }

    fn powi(self, n: i32) -> Dd {
        debug_assert!(n >= 0);
        let (mut base, mut n, mut acc) = (self, n, Dd::ONE);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

fn eval_dd(p: &BiPoly, x: Dd, y: Dd) -> Dd {
    p.terms().fold(Dd::ZERO, |acc, (e, c)| acc + Dd::from_num(c) * x.powi(e.0) * y.powi(e.1))
}

/// Map of an edge and its Jacobian at a child point. `xi` is the
/// translation offset, ignored by other edges.
fn edge_map(t: &Transform, xi: Dd, u: Dd, v: Dd) -> ((Dd, Dd), [[Dd; 2]; 2]) {
    let (zero, one) = (Dd::ZERO, Dd::ONE);
    let int = |n: i32| Dd::from_f64(n as f64);
    match t {
        Transform::Shear { lambda } => {
            let l = Dd::from_num(lambda);
            ((u + l * v, v), [[one, l], [zero, one]])
        }
        Transform::BlowUp { axis, sign, weight } => {
            let (w1, w2, s) = (weight.wx, weight.wy, int(*sign as i32));
            match axis {
                Axis::X => (
                    (s * u.powi(w1), u.powi(w2) * v),
                    [[s * int(w1) * u.powi(w1 - 1), zero], [int(w2) * u.powi(w2 - 1) * v, u.powi(w2)]],
                ),
                Axis::Y => (
                    (v.powi(w1) * u, s * v.powi(w2)),
                    [[v.powi(w1), int(w1) * v.powi(w1 - 1) * u], [zero, s * int(w2) * v.powi(w2 - 1)]],
                ),
            }
        }
        Transform::Admissible { alpha, beta } => {
            let (a, b) = (Dd::from_num(alpha), *beta as i32);
            ((u, v + a * u.powi(b)), [[one, zero], [a * int(b) * u.powi(b - 1), one]])
        }
        Transform::Translate { axis, .. } => {
            match axis {
                Axis::Y => ((u, v + xi), [[one, zero], [zero, one]]),
                Axis::X => ((u + xi, v), [[one, zero], [zero, one]]),
            }
        }
    }
}

/// Outcome of a numeric check: pass flag and the worst relative residual.
#[derive(Clone, Copy, Debug)]
pub struct NumericCheck {
    pub ok: bool,
    pub worst: f64,
}

/// At `n` random child points in `[0.1, 1]^2`, `DPhi X_child` must be a
/// positive multiple of `X_parent o Phi`. Sample points are doubles; the
/// evaluation runs in double-double and the residual is compared in `f64`.
pub fn numeric_pullback_check(parent: &ConstrainedSystem, child: &ConstrainedSystem, rec: &TransformRecord, n: usize, tol: f64, seed: u64) -> NumericCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pp, qp, pc, qc) = (parent.p(), parent.q(), child.p(), child.q());
    let xi = match &rec.transform {
        Transform::Translate { point, .. } => {
            let (hi, lo) = point.value.to_f64_pair();
            Dd { hi, lo }
        }
        _ => Dd::ZERO,
    };
    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..n {
        let (u, v) = (Dd::from_f64(rng.gen_range(0.1..=1.0)), Dd::from_f64(rng.gen_range(0.1..=1.0)));
        let ((x, y), j) = edge_map(&rec.transform, xi, u, v);
        let pv = (eval_dd(&pp, x, y), eval_dd(&qp, x, y));
        let (cu, cv) = (eval_dd(&pc, u, v), eval_dd(&qc, u, v));
        let cw = (j[0][0] * cu + j[0][1] * cv, j[1][0] * cu + j[1][1] * cv);
        let na = pv.0.to_f64().hypot(pv.1.to_f64());
        let nb = cw.0.to_f64().hypot(cw.1.to_f64());
        if na == 0.0 && nb == 0.0 {
            continue;
        }
        let cross = (pv.0 * cw.1 - pv.1 * cw.0).to_f64();
        let dot = (pv.0 * cw.0 + pv.1 * cw.1).to_f64();
        let r = cross.abs() / (na * nb).max(f64::MIN_POSITIVE);
        worst = worst.max(r);
        if r > tol || dot < 0.0 || (na == 0.0) != (nb == 0.0) {
            ok = false;
        }
    }
    NumericCheck { ok, worst }
}

/// Parameters of the random system generator.
#[derive(Clone, Debug)]
pub struct RandomSystemSpec {
    pub max_degree: i32,
    pub coeff_range: i64,
    /// Probability that a monomial is present.
    pub density: f64,
    /// Probability of forcing the impasse curve through the origin.
    pub on_impasse: f64,
    /// Probability of forcing an equilibrium at the origin.
    pub equilibrium: f64,
    /// Probability of dropping the linear part of the field.
    pub degenerate: f64,
    /// Relative weights of `None`, `Ex`, `Ey`, `Exy`.
    pub divisor_weights: [u32; 4],
    pub seed: u64,
}

impl Default for RandomSystemSpec {
    fn default() -> Self {
        RandomSystemSpec {
            max_degree: 4,
            coeff_range: 3,
            density: 0.35,
            on_impasse: 0.6,
            equilibrium: 0.6,
            degenerate: 0.3,
            divisor_weights: [1, 0, 0, 0],
            seed: 0,
        }
    }
}

pub struct SystemGenerator {
    spec: RandomSystemSpec,
    rng: ChaCha8Rng,
}

impl SystemGenerator {
    pub fn new(spec: RandomSystemSpec) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(spec.seed);
        SystemGenerator { spec, rng }
    }

    fn coeff(&mut self) -> Num {
        let r = self.spec.coeff_range;
        loop {
            let c = self.rng.gen_range(-r..=r);
            if c != 0 {
                return Num::int(c);
            }
        }
    }

    fn poly(&mut self, min_total: i32) -> BiPoly {
        let d = self.spec.max_degree;
        let mut terms = Vec::new();
        for t in min_total..=d {
            for i in 0..=t {
                if self.rng.gen_bool(self.spec.density) {
                    terms.push((self.coeff(), i, t - i));
                }
            }
        }
        BiPoly::from_terms(terms)
    }

    fn divisor(&mut self) -> DivisorFlag {
        let w = self.spec.divisor_weights;
        let total: u32 = w.iter().sum();
        let mut k = self.rng.gen_range(0..total.max(1));
        for (i, wi) in w.iter().enumerate() {
            if k < *wi {
                return [DivisorFlag::None, DivisorFlag::Ex, DivisorFlag::Ey, DivisorFlag::Exy][i];
            }
            k -= wi;
        }
        DivisorFlag::None
    }

    /// One system; regenerated until it validates.
    pub fn next_system(&mut self) -> ConstrainedSystem {
        loop {
            let delta_min = if self.rng.gen_bool(self.spec.on_impasse) { 1 } else { 0 };
            let eq = self.rng.gen_bool(self.spec.equilibrium);
            let field_min = if !eq { 0 } else if self.rng.gen_bool(self.spec.degenerate) { 2 } else { 1 };
            let delta = self.poly(delta_min);
            let div = self.divisor();
            let mut p = self.poly(field_min);
            let mut q = self.poly(field_min);
            if div.has_x() {
                p = p.mul(&BiPoly::x());
            }
            if div.has_y() {
                q = q.mul(&BiPoly::y());
            }
            if delta.is_zero() || p.is_zero() && q.is_zero() {
                continue;
            }
            let s = ConstrainedSystem::new(delta, &p, &q).with_divisor(div);
            if s.validate().is_empty() {
                return s;
            }
        }
    }

    /// A system satisfying `keep`, drawing at most `tries` candidates.
    pub fn next_where(&mut self, tries: usize, keep: impl Fn(&ConstrainedSystem) -> bool) -> Option<ConstrainedSystem> {
        (0..tries).map(|_| self.next_system()).find(|s| keep(s))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

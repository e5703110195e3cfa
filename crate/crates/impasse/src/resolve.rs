//! Local resolution driver, singular point search and termination bookkeeping.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::field::{adjoin_root, field_real_roots};
use crate::algebra::{gcd_bipoly, AlgebraicReal, BiPoly, Num, NumberField, Poly, Rational};
use crate::classify::{classify_origin, divisor_candidates, persistent_point, ClassifyError, PointClass};
use crate::newton::{polygon, support_aux, MainSegment, NewtonPolygon, Weight};
use crate::system::{ConstrainedSystem, DivisorFlag, LogVectorField};
use crate::transform::{admissible, blowup, choose_shear, field_degree, shear, translate, Axis, Transform, TransformError, TransformRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_depth: usize,
    pub max_field_degree: usize,
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_depth: 25, max_field_degree: 16, max_nodes: 20_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetKind {
    Depth,
    FieldDegree,
    AdmissibleIterations,
    Nodes,
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetKind::Depth => "depth",
            BudgetKind::FieldDegree => "field degree",
            BudgetKind::AdmissibleIterations => "admissible iterations",
            BudgetKind::Nodes => "node count",
        })
    }
}

/// Why a branch was left unfinished.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Stop {
    Budget(BudgetKind),
    Transform(TransformError),
    Classify(ClassifyError),
}

/// The step taken at a node's own origin, for the descent certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Shear,
    BlowUp,
    Admissible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub height: i32,
    /// Weight of the main segment; `None` for a flat one.
    pub weight: Option<(i32, i32)>,
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub id: usize,
    pub system: ConstrainedSystem,
    pub incoming: Option<TransformRecord>,
    pub class: PointClass,
    pub height: i32,
    pub step: Option<Step>,
    pub children: Vec<TreeNode>,
    pub stop: Option<Stop>,
    /// Non-elementary points of a `y`-chart divisor; each is also a point of
    /// an `x`-chart divisor and is resolved there.
    pub deferred: Vec<AlgebraicReal>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a TreeNode, usize)) {
        fn go<'a>(n: &'a TreeNode, d: usize, f: &mut impl FnMut(&'a TreeNode, usize)) {
            f(n, d);
            for c in &n.children {
                go(c, d + 1, f);
            }
        }
        go(self, 0, f)
    }

    /// `(parent, child)` pairs of every edge.
    pub fn edges(&self) -> Vec<(&TreeNode, &TreeNode)> {
        let mut out = Vec::new();
        self.walk(&mut |n, _| out.extend(n.children.iter().map(|c| (n, c))));
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub blowups: usize,
    pub admissible: usize,
    pub shears: usize,
    pub translations: usize,
    pub max_depth: usize,
    /// Blow-up edges on the longest root-to-leaf path.
    pub blowup_levels: usize,
    pub max_field_degree: usize,
    pub fields: BTreeSet<String>,
}

#[derive(Clone, Debug)]
pub struct ResolutionTree {
    pub root: TreeNode,
    pub stats: TreeStats,
}

impl ResolutionTree {
    pub fn leaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.root.walk(&mut |n, _| {
            if n.is_leaf() {
                out.push(n)
            }
        });
        out
    }

    pub fn all_leaves_elementary(&self) -> bool {
        self.leaves().iter().all(|n| n.class.verdict.is_elementary())
    }
}

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("{kind} budget exceeded")]
    BudgetExceeded { kind: BudgetKind, partial: Box<ResolutionTree> },
    #[error("resolution stuck: {reason:?}")]
    Stuck { reason: Stop, partial: Box<ResolutionTree> },
}

impl ResolveError {
    pub fn partial(&self) -> &ResolutionTree {
        match self {
            ResolveError::BudgetExceeded { partial, .. } | ResolveError::Stuck { partial, .. } => partial,
        }
    }
}

fn local_polygon(sys: &ConstrainedSystem) -> NewtonPolygon {
    polygon(&support_aux(sys)).expect("nonzero auxiliary field")
}

struct Driver {
    budget: Budget,
    next_id: usize,
    first_stop: Option<Stop>,
}

impl Driver {
    fn stop(&mut self, s: Stop) -> Option<Stop> {
        self.first_stop.get_or_insert(s.clone());
        Some(s)
    }

    fn leafish(&mut self, sys: ConstrainedSystem, incoming: Option<TransformRecord>) -> TreeNode {
        let class = classify_origin(&sys);
        let id = self.next_id;
        self.next_id += 1;
        let height = local_polygon(&sys).height();
        TreeNode { id, system: sys, incoming, class, height, step: None, children: vec![], stop: None, deferred: vec![] }
    }

    fn node(&mut self, sys: ConstrainedSystem, incoming: Option<TransformRecord>, depth: usize, adm: usize) -> TreeNode {
        let mut node = self.leafish(sys, incoming);
        if self.next_id > self.budget.max_nodes {
            node.stop = self.stop(Stop::Budget(BudgetKind::Nodes));
            return node;
        }
        if field_degree(&node.system.coeff_field) > self.budget.max_field_degree {
            node.stop = self.stop(Stop::Budget(BudgetKind::FieldDegree));
            return node;
        }
        let scan_axis = match node.incoming.as_ref().map(|r| &r.transform) {
            Some(Transform::BlowUp { axis: Axis::X, .. }) => Some(Axis::Y),
            Some(Transform::BlowUp { axis: Axis::Y, .. }) => Some(Axis::X),
            _ => None,
        };
        if !node.class.verdict.is_elementary() {
            if depth >= self.budget.max_depth {
                node.stop = self.stop(Stop::Budget(BudgetKind::Depth));
            } else {
                self.origin_step(&mut node, depth, adm);
            }
        }
        if let Some(axis) = scan_axis {
            self.scan_divisor(&mut node, axis, depth);
        }
        node
    }

    fn origin_step(&mut self, node: &mut TreeNode, depth: usize, adm: usize) {
        let sys = node.system.clone();
        let poly = local_polygon(&sys);
        if sys.divisor == DivisorFlag::None && !poly.is_controllable() {
            let lam = choose_shear(&sys);
            match shear(&sys, &lam) {
                Ok((c, rec)) => {
                    node.step = Some(Step { kind: StepKind::Shear, height: poly.height(), weight: None });
                    let child = self.node(c, Some(rec), depth + 1, adm);
                    node.children.push(child);
                }
                Err(e) => node.stop = self.stop(Stop::Transform(e)),
            }
            return;
        }
        let w = match poly.main {
            MainSegment::Sloped(w) => w,
            // a flat polygon that still fails: blow up with the plain weight
            _ => {
                let level = poly.support.points().map(|p| p.0 + p.1).min().unwrap();
                Weight::new(1, 1, level)
            }
        };
        let weight = matches!(poly.main, MainSegment::Sloped(_)).then_some((w.wx, w.wy));
        if matches!(poly.main, MainSegment::Sloped(_)) {
            if let Some(xi) = persistent_point(&sys, w) {
                let cap = (sys.delta.total_degree() + sys.degree() + 1) as usize;
                if adm >= cap {
                    node.stop = self.stop(Stop::Budget(BudgetKind::AdmissibleIterations));
                    return;
                }
                match admissible(&sys, &xi, (w.wy / w.wx) as u32) {
                    Ok((c, rec)) => {
                        node.step = Some(Step { kind: StepKind::Admissible, height: poly.height(), weight });
                        let child = self.node(c, Some(rec), depth + 1, adm + 1);
                        node.children.push(child);
                    }
                    Err(e) => node.stop = self.stop(Stop::Transform(e)),
                }
                return;
            }
        }
        node.step = Some(Step { kind: StepKind::BlowUp, height: poly.height(), weight });
        let mut charts = vec![(Axis::Y, 1i8)];
        if w.wy % 2 == 0 {
            charts.push((Axis::Y, -1));
        }
        charts.push((Axis::X, 1));
        if w.wx % 2 == 0 {
            charts.push((Axis::X, -1));
        }
        for (axis, sign) in charts {
            match blowup(&sys, w, axis, sign) {
                Ok((c, rec)) => {
                    let child = self.node(c, Some(rec), depth + 1, 0);
                    node.children.push(child);
                }
                Err(e) => {
                    node.stop = self.stop(Stop::Transform(e));
                    return;
                }
            }
        }
    }

    fn scan_divisor(&mut self, node: &mut TreeNode, axis: Axis, depth: usize) {
        let roots = match divisor_candidates(&node.system, axis) {
            Ok(r) => r,
            Err(e) => {
                node.stop = self.stop(Stop::Classify(e));
                return;
            }
        };
        for r in roots {
            if depth + 1 > self.budget.max_depth {
                node.stop = self.stop(Stop::Budget(BudgetKind::Depth));
                return;
            }
            match translate(&node.system, &r, axis) {
                Ok((c, rec)) if axis == Axis::X => {
                    let child = self.leafish(c, Some(rec));
                    if child.class.verdict.is_elementary() {
                        node.children.push(child);
                    } else {
                        self.next_id -= 1;
                        node.deferred.push(r.over_rationals());
                    }
                }
                Ok((c, rec)) => {
                    let child = self.node(c, Some(rec), depth + 1, 0);
                    node.children.push(child);
                }
                Err(e) => {
                    node.stop = self.stop(Stop::Transform(e));
                    return;
                }
            }
        }
    }
}

pub(crate) fn stats_of(root: &TreeNode) -> TreeStats {
    let mut s = TreeStats::default();
    root.walk(&mut |n, d| {
        s.nodes += 1;
        s.max_depth = s.max_depth.max(d);
        if n.is_leaf() {
            s.leaves += 1;
        }
        if let Some(k) = &n.system.coeff_field {
            s.fields.insert(k.minpoly().to_string());
        }
        s.max_field_degree = s.max_field_degree.max(field_degree(&n.system.coeff_field));
        match n.incoming.as_ref().map(|r| &r.transform) {
            Some(Transform::BlowUp { .. }) => s.blowups += 1,
            Some(Transform::Admissible { .. }) => s.admissible += 1,
            Some(Transform::Shear { .. }) => s.shears += 1,
            Some(Transform::Translate { .. }) => s.translations += 1,
            None => {}
        }
    });
    fn levels(n: &TreeNode) -> usize {
        let here = matches!(n.incoming.as_ref().map(|r| &r.transform), Some(Transform::BlowUp { .. })) as usize;
        here + n.children.iter().map(levels).max().unwrap_or(0)
    }
    s.blowup_levels = levels(root);
    s
}

/// Resolve the singularity at the origin of `sys`.
pub fn resolve_local(sys: &ConstrainedSystem, budget: Budget) -> Result<ResolutionTree, ResolveError> {
    let mut d = Driver { budget, next_id: 0, first_stop: None };
    let root = d.node(sys.clone(), None, 0, 0);
    let tree = ResolutionTree { stats: stats_of(&root), root };
    match d.first_stop {
        None => Ok(tree),
        Some(Stop::Budget(kind)) => Err(ResolveError::BudgetExceeded { kind, partial: Box::new(tree) }),
        Some(reason) => Err(ResolveError::Stuck { reason, partial: Box::new(tree) }),
    }
}

/// A point of the plane with algebraic coordinates in a common field.
#[derive(Clone, Debug)]
pub struct PlanePoint {
    pub x: AlgebraicReal,
    pub y: AlgebraicReal,
    pub field: Option<Arc<NumberField>>,
    pub x_num: Num,
    pub y_num: Num,
    /// Image of the system field's generator in `field`.
    pub base_gen: Option<Num>,
}

impl PlanePoint {
    pub fn origin() -> Self {
        let z = AlgebraicReal::from_rational(Rational::zero());
        PlanePoint { x: z.clone(), y: z, field: None, x_num: Num::zero(), y_num: Num::zero(), base_gen: None }
    }

    pub fn same_as(&self, o: &PlanePoint) -> bool {
        self.x.equals(&o.x) && self.y.equals(&o.y)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6})", self.x.to_f64(), self.y.to_f64())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("the {0} locus contains a curve")]
    PositiveDimensionalLocus(&'static str),
    #[error("coordinates need a field of degree {0}, above the cap")]
    FieldTooLarge(usize),
}

/// Closed box `[x0, x1] x [y0, y1]`; `None` bounds are unbounded.
#[derive(Clone, Debug, Default)]
pub struct SearchBox {
    pub x: (Option<Rational>, Option<Rational>),
    pub y: (Option<Rational>, Option<Rational>),
}

impl SearchBox {
    fn contains(&self, p: &PlanePoint) -> bool {
        let inside = |v: &AlgebraicReal, (lo, hi): &(Option<Rational>, Option<Rational>)| {
            let above = lo.as_ref().is_none_or(|l| v.cmp_value(&AlgebraicReal::from_rational(l.clone())).is_ge());
            let below = hi.as_ref().is_none_or(|h| v.cmp_value(&AlgebraicReal::from_rational(h.clone())).is_le());
            above && below
        };
        inside(&p.x, &self.x) && inside(&p.y, &self.y)
    }
}

/// `res_y(f, g)` as a polynomial in `x`, by fraction-free elimination on the
/// Sylvester matrix.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> Poly<Num> {
    let (m, n) = (f.deg_y().max(0) as usize, g.deg_y().max(0) as usize);
    if m == 0 && n == 0 {
        return Poly::one();
    }
    let fc: Vec<Poly<Num>> = (0..=m).map(|k| f.y_slice(k as i32)).collect();
    let gc: Vec<Poly<Num>> = (0..=n).map(|k| g.y_slice(k as i32)).collect();
    let size = m + n;
    let mut a = vec![vec![Poly::<Num>::zero(); size]; size];
    for i in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            a[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            a[n + i][i + k] = c.clone();
        }
    }
    // Bareiss
    let mut sign = Poly::one();
    let mut prev = Poly::one();
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = sign.neg();
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.exact_div(&prev);
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    a[size - 1][size - 1].mul(&sign)
}

/// Common real zeros of two coprime polynomials.
fn common_zeros(f: &BiPoly, g: &BiPoly, base: Option<&Arc<NumberField>>, cap: usize) -> Result<Vec<PlanePoint>, SearchError> {
    let r = resultant_y(f, g);
    if r.is_zero() {
        return Err(SearchError::PositiveDimensionalLocus("common"));
    }
    let mut out = Vec::new();
    for (xr, _) in field_real_roots(&r) {
        let e1 = adjoin_root(base, &xr);
        let deg1 = field_degree(&e1.field);
        if deg1 > cap {
            return Err(SearchError::FieldTooLarge(deg1));
        }
        let at_x = |p: &BiPoly| {
            p.map_coeffs(|c| e1.lift(c)).substitute(&BiPoly::constant(e1.xi.clone()), &BiPoly::y()).x_slice(0)
        };
        let h = at_x(f).gcd(&at_x(g));
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (yr, _) in field_real_roots(&h) {
            let e2 = adjoin_root(e1.field.as_ref(), &yr);
            let deg2 = field_degree(&e2.field);
            if deg2 > cap {
                return Err(SearchError::FieldTooLarge(deg2));
            }
            let base_gen = base.map(|k| e2.lift(&e1.lift(&k.gen())));
            out.push(PlanePoint { x: xr.over_rationals(), y: yr.over_rationals(), field: e2.field.clone(), x_num: e2.lift(&e1.xi), y_num: e2.xi.clone(), base_gen });
        }
    }
    Ok(out)
}

/// Candidate non-elementary points: equilibria, singular points of the
/// impasse curve and tangencies with it.
pub fn find_singular_points(sys: &ConstrainedSystem, area: &SearchBox, max_field_degree: usize) -> Result<Vec<PlanePoint>, SearchError> {
    let (p, q, d) = (sys.p(), sys.q(), &sys.delta);
    let k = sys.coeff_field.as_ref();
    let mut found: Vec<PlanePoint> = Vec::new();
    let mut add = |pts: Vec<PlanePoint>| {
        for pt in pts {
            if !found.iter().any(|o| o.same_as(&pt)) {
                found.push(pt);
            }
        }
    };
    if !gcd_bipoly(&p, &q).is_constant() {
        return Err(SearchError::PositiveDimensionalLocus("equilibrium"));
    }
    add(common_zeros(&p, &q, k, max_field_degree)?);
    if !d.is_constant() {
        let (dx, dy) = (d.dx(), d.dy());
        // a combination of the partials sharing no factor with the curve
        let probe = (0..=d.total_degree() as i64 + 1)
            .map(|c| dx.add(&dy.scale(&Num::int(c))))
            .find(|g| !g.is_zero() && gcd_bipoly(d, g).is_constant())
            .ok_or(SearchError::PositiveDimensionalLocus("singular impasse"))?;
        let sing: Vec<PlanePoint> = if probe.is_constant() {
            vec![]
        } else {
            common_zeros(d, &probe, k, max_field_degree)?
                .into_iter()
                .filter(|pt| at_point(&dx, pt).is_zero() && at_point(&dy, pt).is_zero())
                .collect()
        };
        add(sing);
        // along invariant components every point is a tangency; only the
        // remaining part of the curve can meet the field tangentially
        let xd = sys.x_delta();
        let inv = gcd_bipoly(d, &xd);
        let rest = if inv.is_constant() { d.clone() } else { d.div_exact(&inv).expect("gcd divides") };
        if !rest.is_constant() && !xd.is_zero() {
            let xd_rest = if inv.is_constant() { xd.clone() } else { xd.div_exact(&inv).unwrap_or(xd.clone()) };
            let g = gcd_bipoly(&rest, &xd_rest);
            if !g.is_constant() {
                return Err(SearchError::PositiveDimensionalLocus("tangency"));
            }
            add(common_zeros(&rest, &xd_rest, k, max_field_degree)?);
        }
    }
    found.retain(|pt| area.contains(pt));
    found.sort_by(|a, b| a.x.cmp_value(&b.x).then(a.y.cmp_value(&b.y)));
    Ok(found)
}

fn lift_coeff(c: &Num, pt: &PlanePoint) -> Num {
    match (c, &pt.base_gen) {
        (Num::Alg(..), Some(g)) => c.embed(g),
        _ => c.clone(),
    }
}

fn at_point(f: &BiPoly, pt: &PlanePoint) -> Num {
    f.map_coeffs(|c| lift_coeff(c, pt)).eval(&pt.x_num, &pt.y_num)
}

/// Move `pt` to the origin of an interior chart.
pub fn recenter(sys: &ConstrainedSystem, pt: &PlanePoint) -> ConstrainedSystem {
    let sx = BiPoly::x().add(&BiPoly::constant(pt.x_num.clone()));
    let sy = BiPoly::y().add(&BiPoly::constant(pt.y_num.clone()));
    let lift = |f: &BiPoly| f.map_coeffs(|c| lift_coeff(c, pt)).substitute(&sx, &sy);
    let (p, q) = (lift(&sys.p()), lift(&sys.q()));
    let mut trace = sys.trace.clone();
    trace.push(format!("recenter{pt}"));
    ConstrainedSystem {
        delta: lift(&sys.delta),
        field: LogVectorField::from_pq(&p, &q),
        divisor: DivisorFlag::None,
        coeff_field: pt.field.clone().or_else(|| sys.coeff_field.clone()),
        trace,
    }
}

/// One tree per listed point, each resolved independently.
pub fn resolve_global(items: &[(ConstrainedSystem, Vec<PlanePoint>)], budget: Budget) -> Vec<(PlanePoint, Result<ResolutionTree, ResolveError>)> {
    let mut out = Vec::new();
    for (sys, pts) in items {
        for pt in pts {
            out.push((pt.clone(), resolve_local(&recenter(sys, pt), budget)));
        }
    }
    out
}

/// A system and all its singular points, resolved.
pub fn resolve_all(sys: &ConstrainedSystem, area: &SearchBox, budget: Budget) -> Result<Vec<(PlanePoint, Result<ResolutionTree, ResolveError>)>, SearchError> {
    let pts = find_singular_points(sys, area, budget.max_field_degree)?;
    Ok(resolve_global(&[(sys.clone(), pts)], budget))
}

/// One resolution step along a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentEntry {
    pub node: usize,
    pub kind: StepKind,
    pub height: i32,
    pub weight: Option<(i32, i32)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Steps along each root-to-leaf path, leaf id last.
    pub paths: Vec<(usize, Vec<DescentEntry>)>,
    pub admissible_steps: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertificateFailure {
    #[error("leaf {0} is not elementary")]
    LeafNotElementary(usize),
    #[error("no descent from node {from} to node {to}")]
    NoDescent { from: usize, to: usize },
    #[error("admissible step at node {0} did not keep the height and raise the slope")]
    BadAdmissible(usize),
}

/// `wx / wy` as a comparable key; a flat segment counts as zero.
fn steepness(w: Option<(i32, i32)>) -> Rational {
    w.map_or_else(Rational::zero, |(a, b)| Rational::new(a.into(), b.into()))
}

/// Check that `(height, -slope)` strictly decreases along every path, with
/// admissible steps keeping the height.
pub fn termination_certificate(tree: &ResolutionTree) -> Result<Certificate, CertificateFailure> {
    let mut cert = Certificate::default();
    fn go(n: &TreeNode, path: &mut Vec<DescentEntry>, cert: &mut Certificate) -> Result<(), CertificateFailure> {
        let pushed = match n.step {
            Some(s) if s.kind != StepKind::Shear => {
                let e = DescentEntry { node: n.id, kind: s.kind, height: s.height, weight: s.weight };
                if let Some(prev) = path.last() {
                    let (h0, k0) = (prev.height, steepness(prev.weight));
                    let (h1, k1) = (e.height, steepness(e.weight));
                    if prev.kind == StepKind::Admissible {
                        if h1 != h0 || k1 >= k0 {
                            return Err(CertificateFailure::BadAdmissible(prev.node));
                        }
                    } else if !(h1 < h0 || h1 == h0 && k1 < k0) {
                        return Err(CertificateFailure::NoDescent { from: prev.node, to: n.id });
                    }
                }
                if s.kind == StepKind::Admissible {
                    cert.admissible_steps += 1;
                }
                path.push(e);
                true
            }
            _ => false,
        };
        if n.is_leaf() {
            if !n.class.verdict.is_elementary() {
                return Err(CertificateFailure::LeafNotElementary(n.id));
            }
            cert.paths.push((n.id, path.clone()));
        }
        for c in &n.children {
            go(c, path, cert)?;
        }
        if pushed {
            path.pop();
        }
        Ok(())
    }
    go(&tree.root, &mut Vec::new(), &mut cert)?;
    Ok(cert)
}

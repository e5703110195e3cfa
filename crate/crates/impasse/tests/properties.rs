//! Property tests for the invariants of each module.

use num::Zero;
use proptest::prelude::*;

use impasse::algebra::factor::factor_squarefree;
use impasse::algebra::poly::sturm_count;
use impasse::algebra::{field_join, gcd_bipoly, isolate_real_roots, sign_of, AlgebraicReal, BiPoly, Num, Rational, UPoly};
use impasse::classify::{classify_origin, divisor_candidates, persistent_point, Reason, Verdict};
use impasse::io::export::{export_tree, import_tree, Format};
use impasse::io::parse::{parse_system, print_source, SystemSource};
use impasse::newton::{graduation_level, polygon, support_aux, weight_of, MainSegment, Point, Support};
use impasse::oracle::{hull_bruteforce, substitute_bruteforce, RandomSystemSpec, SystemGenerator};
use impasse::resolve::{resolve_local, Budget};
use impasse::system::{auxiliary_field, from_matrix, to_log_basis, ConstrainedSystem, Diagnostic, DivisorFlag};
use impasse::transform::{admissible, blowup, translate, translate_by, verify_pullback, Axis};

fn bipoly(max_deg: i32, max_terms: usize) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((-4i64..=4, 0..=max_deg, 0..=max_deg), 0..=max_terms).prop_map(|t| BiPoly::from_ints(&t))
}

fn nonzero_bipoly(max_deg: i32, max_terms: usize) -> impl Strategy<Value = BiPoly> {
    bipoly(max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn upoly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-5i64..=5, 1..=max_deg + 1).prop_map(|c| UPoly::from_ints(&c)).prop_filter("nonconstant", |p| p.deg() >= 1)
}

fn system(seed: u64) -> ConstrainedSystem {
    SystemGenerator::new(RandomSystemSpec { seed, ..Default::default() }).next_system()
}

/// A controllable system with a sloped main segment.
fn sloped_system(seed: u64) -> (ConstrainedSystem, impasse::newton::Weight) {
    let mut g = SystemGenerator::new(RandomSystemSpec { seed, ..Default::default() });
    loop {
        let s = g.next_system();
        let p = polygon(&support_aux(&s)).unwrap();
        if let (true, MainSegment::Sloped(w)) = (p.is_controllable(), p.main) {
            return (s, w);
        }
    }
}

fn height(s: &ConstrainedSystem) -> i32 {
    polygon(&support_aux(s)).unwrap().height()
}

fn on_or_above(p: Point, a: Point, b: Point) -> bool {
    // left of the directed edge a -> b, or on it
    (b.0 - a.0) as i64 * (p.1 - a.1) as i64 - (b.1 - a.1) as i64 * (p.0 - a.0) as i64 >= 0
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn gcd_divides_and_cofactors_are_coprime(u in nonzero_bipoly(4, 5), v in nonzero_bipoly(4, 5), w in nonzero_bipoly(2, 3)) {
        let (u, v) = (u.mul(&w), v.mul(&w));
        let g = gcd_bipoly(&u, &v);
        let (cu, cv) = (u.div_exact(&g), v.div_exact(&g));
        prop_assert!(cu.is_some() && cv.is_some());
        prop_assert!(gcd_bipoly(&cu.unwrap(), &cv.unwrap()).is_constant());
        prop_assert!(w.divides(&g));
    }

    #[test]
    fn root_count_is_consistent(f in upoly(6)) {
        let roots = isolate_real_roots(&f);
        let with_mult: usize = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert!(with_mult <= f.deg());
        // complex roots come in conjugate pairs
        prop_assert_eq!((f.deg() - with_mult) % 2, 0);
        let sf = f.squarefree_part();
        let b = sf.root_bound();
        prop_assert_eq!(sturm_count(&sf.sturm_chain(), &-b.clone(), &b), roots.len());
        for w in roots.windows(2) {
            prop_assert!(w[0].value.to_f64() < w[1].value.to_f64());
        }
    }

    #[test]
    fn sign_is_zero_exactly_for_zero(f in upoly(4), g in upoly(3)) {
        let roots = isolate_real_roots(&f.squarefree_part());
        prop_assume!(!roots.is_empty());
        let theta = &roots[0].value;
        if let Some(k) = impasse::algebra::NumberField::generated_by(theta) {
            let e = Num::from_poly(g.clone(), &k);
            let approx = e.to_f64();
            let s = sign_of(&e);
            prop_assert_eq!(s == 0, e.is_zero());
            if approx.abs() > 1e-6 {
                prop_assert_eq!(s as f64, approx.signum());
            }
            // p(theta) = 0 for the defining polynomial
            prop_assert!(Num::from_poly(k.minpoly().clone(), &k).is_zero());
        }
    }

    #[test]
    fn join_embeds_both_generators(f in upoly(4), g in upoly(3), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let rf = isolate_real_roots(&f.squarefree_part());
        let rg = isolate_real_roots(&g.squarefree_part());
        prop_assume!(!rf.is_empty() && !rg.is_empty());
        let (t1, t2) = (&rf[i.index(rf.len())].value, &rg[j.index(rg.len())].value);
        let jn = field_join(t1, t2);
        prop_assert!((jn.theta1.to_f64() - t1.to_f64()).abs() < 1e-9);
        prop_assert!((jn.theta2.to_f64() - t2.to_f64()).abs() < 1e-9);
        // exact: the images satisfy their defining equations
        let eval = |p: &UPoly, x: &Num| p.coeffs().iter().rev().fold(Num::zero(), |acc, c| acc * x.clone() + Num::Rat(c.clone()));
        prop_assert!(eval(&f, &jn.theta1).is_zero());
        prop_assert!(eval(&g, &jn.theta2).is_zero());
    }

    #[test]
    fn factors_multiply_back(parts in prop::collection::vec(upoly(3), 1..=3)) {
        let f = parts.iter().fold(UPoly::from_ints(&[1]), |a, b| a.mul(b)).squarefree_part();
        let fs = factor_squarefree(&f);
        prop_assert_eq!(fs.iter().fold(UPoly::from_ints(&[1]), |a, b| a.mul(b)), f.monic());
        for h in &fs {
            // low-degree factors are irreducible iff they have no rational root
            if (2..=3).contains(&h.deg()) {
                prop_assert!(h.rational_roots().is_empty());
            }
        }
    }

    #[test]
    fn log_basis_round_trip(a in bipoly(3, 5), b in bipoly(3, 5)) {
        let f = to_log_basis(&a.shift((1, 0)), &b.shift((0, 1)));
        prop_assert_eq!(f.a(), &a);
        prop_assert_eq!(f.b(), &b);
    }

    #[test]
    fn adjugate_identity(m in prop::collection::vec(bipoly(2, 3), 6)) {
        let a = [[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()]];
        let f = [m[4].clone(), m[5].clone()];
        let det = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
        let Ok((sys, _)) = from_matrix(&a, &f) else { return Ok(()) };
        let (p, q) = (sys.p(), sys.q());
        prop_assert_eq!(a[0][0].mul(&p).add(&a[0][1].mul(&q)), det.mul(&f[0]));
        prop_assert_eq!(a[1][0].mul(&p).add(&a[1][1].mul(&q)), det.mul(&f[1]));
    }

    #[test]
    fn auxiliary_field_vanishes_on_impasse(h in nonzero_bipoly(2, 3), p in bipoly(3, 4), q in bipoly(3, 4), n in -5i64..=5, d in 1i64..=3) {
        // delta vanishes on the line y = x + 1, away from both axes
        let line = BiPoly::y().sub(&BiPoly::x()).sub(&BiPoly::one());
        let sys = ConstrainedSystem::new(h.mul(&line), &p, &q);
        let aux = auxiliary_field(&sys);
        let x = Num::frac(n, d);
        let y = x.clone() + Num::int(1);
        prop_assume!(!x.is_zero() && !y.is_zero());
        prop_assert!(aux.a.eval(&x, &y).is_zero());
        prop_assert!(aux.b.eval(&x, &y).is_zero());
    }

    #[test]
    fn divisor_invariance_matches_exponent_bounds(seed in any::<u64>(), keep in any::<bool>()) {
        let s = system(seed);
        let p = if keep { s.p().mul(&BiPoly::x()) } else { s.p().add(&BiPoly::one()) };
        let sys = ConstrainedSystem::new(s.delta.clone(), &p, &s.q()).with_divisor(DivisorFlag::Ex);
        let structural = sys.field.a().respects((0, 0));
        let reported = sys.validate().contains(&Diagnostic::DivisorNotInvariant(DivisorFlag::Ex));
        prop_assert_eq!(structural, !reported);
    }

    #[test]
    fn support_within_minkowski_sum(seed in any::<u64>()) {
        let s = system(seed);
        let field: Vec<Point> = s.field.a().support().into_iter().chain(s.field.b().support()).collect();
        for pt in support_aux(&s).points() {
            let found = s.delta.support().iter().any(|d| field.iter().any(|f| (d.0 + f.0, d.1 + f.1) == *pt));
            prop_assert!(found);
        }
    }

    #[test]
    fn hull_properties(pts in prop::collection::btree_set((-1i32..=6, -1i32..=6), 1..=12)) {
        let sup = Support(pts.clone());
        let poly = polygon(&sup).unwrap();
        prop_assert_eq!(&poly.vertices, &hull_bruteforce(&pts.iter().copied().collect::<Vec<_>>()));
        for v in &poly.vertices {
            prop_assert!(pts.contains(v));
        }
        for w in poly.vertices.windows(2) {
            for p in &pts {
                prop_assert!(on_or_above(*p, w[0], w[1]));
            }
        }
        if let Ok(w) = weight_of(&poly) {
            prop_assert!(w.wx >= 1 && w.wy >= 1 && num::integer::gcd(w.wx, w.wy) == 1);
            prop_assert_eq!(w.level, pts.iter().map(|p| w.eval(*p)).min().unwrap());
        }
    }

    #[test]
    fn graduation_levels_partition(seed in any::<u64>(), wx in 1i32..=4, wy in 1i32..=4) {
        prop_assume!(num::integer::gcd(wx, wy) == 1);
        let s = system(seed);
        let aux = auxiliary_field(&s);
        let w = impasse::newton::Weight::new(wx, wy, 0);
        let levels: Vec<i32> = aux.support().iter().map(|p| w.eval(*p)).collect();
        let (lo, hi) = (*levels.iter().min().unwrap(), *levels.iter().max().unwrap());
        let (mut a, mut b) = (BiPoly::zero(), BiPoly::zero());
        for d in lo..=hi {
            let part = graduation_level(&aux, w, d);
            a = a.add(&part.a);
            b = b.add(&part.b);
        }
        prop_assert_eq!(a, aux.a);
        prop_assert_eq!(b, aux.b);
    }

    #[test]
    fn source_round_trip(m in prop::collection::vec(bipoly(3, 4), 6), matrix in any::<bool>(), den in 1i64..=4) {
        let scale = |p: &BiPoly| p.scale(&Num::frac(1, den));
        let src = if matrix {
            SystemSource::Matrix { a: [[scale(&m[0]), m[1].clone()], [m[2].clone(), m[3].clone()]], f: [m[4].clone(), scale(&m[5])] }
        } else {
            SystemSource::Diagonalized { delta: m[0].clone(), p: scale(&m[1]), q: m[2].clone() }
        };
        prop_assert_eq!(parse_system(&print_source(&src)).unwrap(), src);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn substitution_agrees_with_bruteforce(p in bipoly(3, 5), sx in bipoly(2, 3), sy in bipoly(2, 3)) {
        prop_assert_eq!(p.substitute(&sx, &sy), substitute_bruteforce(&p, &sx, &sy));
    }

    #[test]
    fn taylor_coefficients_differentiate(f in bipoly(4, 5)) {
        // f(y + xi) with xi as the second variable: C_i(xi) is the coefficient of y^i
        let g = f.x_slice(0);
        let g = BiPoly::from_terms(g.coeffs().iter().enumerate().map(|(i, c)| (c.clone(), i as i32, 0)));
        let shifted = g.substitute(&BiPoly::x().add(&BiPoly::y()), &BiPoly::zero());
        let deg = shifted.deg_x().max(0);
        for i in 0..deg {
            let next = shifted.x_slice(i + 1).scale(&Num::int(i as i64 + 1));
            prop_assert_eq!(shifted.x_slice(i).derivative(), next);
        }
    }

    #[test]
    fn blowup_lemmas(seed in any::<u64>()) {
        let (s, w) = sloped_system(seed);
        let (xc, xr) = blowup(&s, w, Axis::X, 1).unwrap();
        let (yc, yr) = blowup(&s, w, Axis::Y, 1).unwrap();
        prop_assert!(height(&xc) < height(&s));
        prop_assert!(polygon(&support_aux(&yc)).unwrap().is_newton_elementary());
        prop_assert!(verify_pullback(&s, &xc, &xr).is_ok());
        prop_assert!(verify_pullback(&s, &yc, &yr).is_ok());
    }

    #[test]
    fn translations_do_not_raise_height(seed in any::<u64>()) {
        let (s, w) = sloped_system(seed);
        let (xc, _) = blowup(&s, w, Axis::X, 1).unwrap();
        for r in divisor_candidates(&xc, Axis::Y).unwrap() {
            let (t, rec) = translate(&xc, &r, Axis::Y).unwrap();
            prop_assert!(height(&t) <= height(&s));
            prop_assert!(verify_pullback(&xc, &t, &rec).is_ok());
        }
    }

    #[test]
    fn non_candidates_are_regular(seed in any::<u64>()) {
        let (s, w) = sloped_system(seed);
        let (xc, _) = blowup(&s, w, Axis::X, 1).unwrap();
        let mut marks: Vec<f64> = divisor_candidates(&xc, Axis::Y).unwrap().iter().map(|r| r.over_rationals().to_f64()).collect();
        marks.push(0.0);
        marks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut samples = vec![marks[0] - 1.0, marks[marks.len() - 1] + 1.0];
        samples.extend(marks.windows(2).map(|m| 0.5 * (m[0] + m[1])));
        for y in samples {
            // a nearby rational strictly inside the gap
            let k = (y * 4096.0).round() as i64;
            let q = Rational::new(k.into(), 4096.into());
            let yq = k as f64 / 4096.0;
            prop_assume!(marks.iter().all(|m| (m - yq).abs() > 1e-6));
            let (t, _) = translate_by(&xc, &Num::Rat(q.clone()), AlgebraicReal::from_rational(q), Axis::Y).unwrap();
            prop_assert_eq!(classify_origin(&t).verdict, Verdict::Elementary(Reason::NonSingular));
        }
    }

    #[test]
    fn admissible_keeps_height_and_steepens(seed in any::<u64>(), alpha in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        let (base, wb) = sloped_system(seed);
        let beta = (wb.wy - 1) / wb.wx;
        prop_assume!(beta >= 1);
        let Ok((s, _)) = admissible(&base, &Num::int(-alpha), beta as u32) else { return Ok(()) };
        let ps = polygon(&support_aux(&s)).unwrap();
        let MainSegment::Sloped(ws) = ps.main else { return Ok(()) };
        prop_assume!(persistent_point(&s, ws) == Some(Num::int(alpha)));
        let (c, rec) = admissible(&s, &Num::int(alpha), beta as u32).unwrap();
        let pc = polygon(&support_aux(&c)).unwrap();
        prop_assert_eq!(pc.height(), ps.height());
        prop_assert_eq!(pc.main_vertex().0, ps.main_vertex().0);
        if let MainSegment::Sloped(wc) = pc.main {
            prop_assert!(wc.wy * ws.wx > ws.wy * wc.wx);
        }
        prop_assert!(verify_pullback(&s, &c, &rec).is_ok());
        // the other divisor points after the blow-up lose height
        let (xc, _) = blowup(&s, ws, Axis::X, 1).unwrap();
        for r in divisor_candidates(&xc, Axis::Y).unwrap() {
            let v = r.over_rationals();
            if v.as_rational() == Some(Rational::from_integer(alpha.into())) {
                continue;
            }
            let (t, _) = translate(&xc, &r, Axis::Y).unwrap();
            prop_assert!(height(&t) < ps.height());
        }
    }

    #[test]
    fn resolution_invariants(seed in any::<u64>()) {
        let (s, _) = sloped_system(seed);
        let tree = resolve_local(&s, Budget::default()).unwrap();
        prop_assert!(tree.all_leaves_elementary());
        for (p, c) in tree.root.edges() {
            prop_assert!(verify_pullback(&p.system, &c.system, c.incoming.as_ref().unwrap()).is_ok());
        }
        tree.root.walk(&mut |n, _| {
            let a0 = n.system.field.a().coeff((0, 0));
            let b0 = n.system.field.b().coeff((0, 0));
            if n.system.divisor == DivisorFlag::Exy && !n.system.delta.coeff((0, 0)).is_zero() && n.is_leaf() {
                assert!(!a0.is_zero() || !b0.is_zero(), "corner without a nonzero axis eigenvalue");
            }
        });
        let back = import_tree(&export_tree(&tree, Format::Json)).unwrap();
        prop_assert!(back.mismatches().is_empty());
    }
}

#[test]
fn worked_examples_fit_a_small_depth() {
    let small = Budget { max_depth: 10, ..Budget::default() };
    for text in [
        "delta = x*y; P = y; Q = x^2;",
        "delta = y; P = 2*x; Q = -y;",
        "delta = y - x^2; P = (y - x^2)*x; Q = -2*(y - x^2)^2 + 2*y*(y - x^2) + y^3;",
    ] {
        let (s, _) = parse_system(text).unwrap().to_system().unwrap();
        assert!(resolve_local(&s, small).is_ok(), "{text}");
    }
}

#[test]
fn generator_is_seed_deterministic() {
    for seed in 0..5 {
        let a = system(seed);
        let b = system(seed);
        assert_eq!((a.delta.clone(), a.p(), a.q()), (b.delta.clone(), b.p(), b.q()));
        assert!(a.validate().is_empty());
    }
}

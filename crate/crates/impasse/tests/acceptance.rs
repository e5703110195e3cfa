//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The lines bypass the test harness capture, so a plain `cargo test` shows them.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use impasse::algebra::{BiPoly, Num, Rational, UPoly};
use impasse::classify::{classify_origin, divisor_candidates, persistent_point, semantic_elementary, Reason, Verdict};
use impasse::io::export::{export_tree, import_tree, Format};
use impasse::io::parse::{parse_system, print_source, SystemSource};
use impasse::newton::{polygon, support_aux, MainSegment, NewtonPolygon, Support, Weight};
use impasse::oracle::{numeric_pullback_check, RandomSystemSpec, SystemGenerator};
use impasse::resolve::{resolve_local, termination_certificate, Budget, ResolutionTree, ResolveError, StepKind};
use impasse::system::ConstrainedSystem;
use impasse::transform::{admissible, blowup, choose_shear, shear, translate, verify_pullback, Axis, TransformRecord};

const CUSP_FOLD_BUDGET: Duration = Duration::from_secs(1);
const FINAL_EXAMPLE_BUDGET: Duration = Duration::from_millis(100);
const HEIGHT_EXAMPLE_BUDGET: Duration = Duration::from_secs(2);
const CROSS_CHECK_SYSTEMS: usize = 300;
const LEMMA_SYSTEMS: usize = 200;
const NUMERIC_TOL: f64 = 1e-9;
const NUMERIC_POINTS_EXAMPLE: usize = 100;
const NUMERIC_POINTS_RANDOM: usize = 20;
const ROUND_TRIPS: usize = 500;

const SEED_CROSS_CHECK: u64 = 4;
const SEED_LEMMA: u64 = 5;
const SEED_SHEAR: u64 = 6;
const SEED_ADMISSIBLE: u64 = 7;
const SEED_SOURCES: u64 = 8;

struct Edge {
    parent: ConstrainedSystem,
    child: ConstrainedSystem,
    rec: TransformRecord,
    points: usize,
}

#[derive(Default)]
struct Collected {
    edges: Vec<Edge>,
    trees: Vec<ResolutionTree>,
}

impl Collected {
    fn tree(&mut self, t: &ResolutionTree, points: usize) {
        for (p, c) in t.root.edges() {
            self.edge(&p.system, &c.system, c.incoming.as_ref().unwrap(), points);
        }
        self.trees.push(t.clone());
    }
    fn edge(&mut self, parent: &ConstrainedSystem, child: &ConstrainedSystem, rec: &TransformRecord, points: usize) {
        self.edges.push(Edge { parent: parent.clone(), child: child.clone(), rec: rec.clone(), points });
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sys(text: &str) -> ConstrainedSystem {
    parse_system(text).unwrap().to_system().unwrap().0
}

fn poly_of(s: &ConstrainedSystem) -> NewtonPolygon {
    polygon(&support_aux(s)).unwrap()
}

fn bp(text: &str) -> BiPoly {
    match parse_system(&format!("delta = {text}; P = 0; Q = 1;")).unwrap() {
        SystemSource::Diagonalized { delta, .. } => delta,
        SystemSource::Matrix { .. } => unreachable!(),
    }
}

fn same(s: &ConstrainedSystem, delta: &str, p: &str, q: &str) -> bool {
    s.delta == bp(delta) && s.p() == bp(p) && s.q() == bp(q)
}

/// Minimal polynomials of the candidates, primitive over the integers, with
/// the sign of each root.
fn candidate_summary(s: &ConstrainedSystem, axis: Axis) -> Vec<(UPoly, bool)> {
    let mut out: Vec<(UPoly, bool)> = divisor_candidates(s, axis)
        .unwrap()
        .iter()
        .map(|r| {
            let v = r.over_rationals();
            (v.poly().primitive_integer(), v.to_f64() > 0.0)
        })
        .collect();
    out.sort_by_key(|(_, pos)| *pos);
    out
}

fn criterion_1(c: &mut Collected) -> Outcome {
    let s = sys("delta = x*y; P = y; Q = x^2;");
    let start = Instant::now();
    let tree = resolve_local(&s, Budget::default());
    let elapsed = start.elapsed();
    let Ok(tree) = tree else { return outcome(false, "resolution failed") };
    c.tree(&tree, NUMERIC_POINTS_EXAMPLE);

    let poly = poly_of(&s);
    let support_ok = poly.support == Support::from_points([(0, 2), (3, 0)]);
    let weight = Weight::new(2, 3, 6);
    let weight_ok = poly.main == MainSegment::Sloped(weight);
    let (xc, _) = blowup(&s, weight, Axis::X, 1).unwrap();
    let (yc, _) = blowup(&s, weight, Axis::Y, 1).unwrap();
    let x_chart_ok = same(&xc, "y", "1/2*x*y", "1 - 3/2*y^2");
    let y_chart_ok = same(&yc, "x", "1 - 2/3*x^3", "1/3*x^2*y");
    let two_thirds = UPoly::from_ints(&[-2, 0, 3]);
    let x_cands_ok = candidate_summary(&xc, Axis::Y) == vec![(two_thirds.clone(), false), (two_thirds, true)];
    let y_cands_ok = candidate_summary(&yc, Axis::X) == vec![(UPoly::from_ints(&[-3, 0, 0, 2]), true)];
    let leaves_ok = tree.all_leaves_elementary();
    let levels_ok = tree.stats.blowup_levels == 1;
    let time_ok = elapsed < CUSP_FOLD_BUDGET;
    let pass = support_ok && weight_ok && x_chart_ok && y_chart_ok && x_cands_ok && y_cands_ok && leaves_ok && levels_ok && time_ok;
    outcome(
        pass,
        format!(
            "support {support_ok}, line 2r+3s=6 {weight_ok}, x-chart {x_chart_ok}, y-chart {y_chart_ok}, \
             candidates x {x_cands_ok} y {y_cands_ok}, leaves elementary {leaves_ok}, one blow-up level {levels_ok}, {elapsed:.2?}"
        ),
    )
}

fn criterion_2(c: &mut Collected) -> Outcome {
    let s = sys("delta = y; P = 2*x; Q = -y;");
    let start = Instant::now();
    let tree = resolve_local(&s, Budget::default());
    let elapsed = start.elapsed();
    let Ok(tree) = tree else { return outcome(false, "resolution failed") };
    c.tree(&tree, NUMERIC_POINTS_EXAMPLE);
    let verdict = classify_origin(&s).verdict;
    let verdict_ok = verdict == Verdict::Elementary(Reason::SeparatrixCoincidesDelta);
    let support_ok = poly_of(&s).support == Support::from_points([(0, 1)]);
    let blowups_ok = tree.stats.blowups == 0;
    let time_ok = elapsed < FINAL_EXAMPLE_BUDGET;
    outcome(
        verdict_ok && support_ok && blowups_ok && time_ok,
        format!("verdict {verdict}, support {{(0,1)}} {support_ok}, blow-ups {}, {elapsed:.2?}", tree.stats.blowups),
    )
}

/// Instance s = 2, r = 1, k = 2 of the persistent point family.
fn height_example() -> ConstrainedSystem {
    sys("delta = y - x^2; P = (y - x^2)*x; Q = -2*(y - x^2)^2 + 2*y*(y - x^2) + y^3;")
}

fn criterion_3(c: &mut Collected) -> Outcome {
    let s = height_example();
    let start = Instant::now();
    let tree = resolve_local(&s, Budget::default());
    let elapsed = start.elapsed();
    let Ok(tree) = tree else { return outcome(false, "resolution failed") };
    c.tree(&tree, NUMERIC_POINTS_EXAMPLE);

    let MainSegment::Sloped(w) = poly_of(&s).main else { return outcome(false, "no sloped main segment") };
    let xi = persistent_point(&s, w);
    let xi_ok = xi == Some(Num::int(1));
    let (child, _) = admissible(&s, &Num::int(1), 2).unwrap();
    // displayed form y^(r+1) x d/dx + y (y + x^s)^(k+1) d/dy with delta = y
    let field_ok = same(&child, "y", "x*y", "(y + x^2)^3");
    let cert = termination_certificate(&tree);
    let descent_ok = match &cert {
        Ok(cert) => {
            cert.admissible_steps == 1
                && cert.paths.iter().all(|(_, path)| {
                    let after = path.iter().position(|e| e.kind == StepKind::BlowUp).map_or(0, |i| i + 1);
                    path[..after].iter().all(|e| e.height == 2) && path[after..].iter().all(|e| e.height < 2)
                })
        }
        Err(_) => false,
    };
    let time_ok = elapsed < HEIGHT_EXAMPLE_BUDGET;
    outcome(
        xi_ok && field_ok && descent_ok && tree.all_leaves_elementary() && time_ok,
        format!("xi0 = 1 {xi_ok}, admissible(1, 2) field (exponent k+1) {field_ok}, descent after admissible {descent_ok}, {elapsed:.2?}"),
    )
}

fn criterion_4() -> Outcome {
    let mut g = SystemGenerator::new(RandomSystemSpec { seed: SEED_CROSS_CHECK, ..Default::default() });
    let (mut decidable, mut agree) = (0, 0);
    for _ in 0..CROSS_CHECK_SYSTEMS {
        let s = g.next_system();
        if let Some(sem) = semantic_elementary(&s) {
            decidable += 1;
            agree += (sem == classify_origin(&s).verdict.is_elementary()) as usize;
        }
    }
    outcome(decidable > 0 && agree == decidable, format!("{agree}/{decidable} decidable agree ({CROSS_CHECK_SYSTEMS} systems, seed {SEED_CROSS_CHECK})"))
}

/// Controllable systems with a sloped main segment.
fn lemma_corpus() -> Vec<(ConstrainedSystem, Weight)> {
    let mut g = SystemGenerator::new(RandomSystemSpec { seed: SEED_LEMMA, ..Default::default() });
    let mut out = Vec::new();
    while out.len() < LEMMA_SYSTEMS {
        let s = g.next_system();
        let p = poly_of(&s);
        if let (true, MainSegment::Sloped(w)) = (p.is_controllable(), p.main) {
            out.push((s, w));
        }
    }
    out
}

/// Height read with the divisor as the vertical axis.
fn divisor_height(s: &ConstrainedSystem, axis: Axis) -> i32 {
    match axis {
        Axis::X => poly_of(&s.swap()).height(),
        Axis::Y => poly_of(s).height(),
    }
}

fn steeper(after: &NewtonPolygon, before: Weight) -> bool {
    match after.main {
        MainSegment::Sloped(w) => w.wy * before.wx > before.wy * w.wx,
        _ => true,
    }
}

fn criterion_5(c: &mut Collected, corpus: &[(ConstrainedSystem, Weight)]) -> Outcome {
    let mut fails = [0usize; 5];
    let mut counts = [0usize; 5];
    for (s, w) in corpus {
        let h = poly_of(s).height();
        let (xc, xr) = blowup(s, *w, Axis::X, 1).unwrap();
        let (yc, yr) = blowup(s, *w, Axis::Y, 1).unwrap();
        c.edge(s, &xc, &xr, NUMERIC_POINTS_RANDOM);
        c.edge(s, &yc, &yr, NUMERIC_POINTS_RANDOM);
        counts[0] += 1;
        fails[0] += (poly_of(&xc).height() >= h) as usize;
        counts[1] += 1;
        fails[1] += !poly_of(&yc).is_newton_elementary() as usize;
        for (child, axis) in [(&xc, Axis::Y), (&yc, Axis::X)] {
            for r in divisor_candidates(child, axis).unwrap() {
                let (t, tr) = translate(child, &r, axis).unwrap();
                c.edge(child, &t, &tr, NUMERIC_POINTS_RANDOM);
                counts[3] += 1;
                fails[3] += (divisor_height(&t, axis) > h) as usize;
            }
        }
    }

    // admissible: systems built with a known persistent point
    let mut g = SystemGenerator::new(RandomSystemSpec { seed: SEED_ADMISSIBLE, ..Default::default() });
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_ADMISSIBLE);
    while counts[2] < LEMMA_SYSTEMS {
        let base = g.next_system();
        let p = poly_of(&base);
        let MainSegment::Sloped(wb) = p.main else { continue };
        let beta = (wb.wy - 1) / wb.wx;
        if !p.is_controllable() || beta < 1 {
            continue;
        }
        let alpha = Num::int([-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)]);
        let Ok((s, _)) = admissible(&base, &(-alpha.clone()), beta as u32) else { continue };
        let ps = poly_of(&s);
        let MainSegment::Sloped(ws) = ps.main else { continue };
        if persistent_point(&s, ws) != Some(alpha.clone()) {
            continue;
        }
        counts[2] += 1;
        match admissible(&s, &alpha, beta as u32) {
            Ok((child, rec)) => {
                let pc = poly_of(&child);
                fails[2] += !(pc.height() == ps.height() && steeper(&pc, ws)) as usize;
                c.edge(&s, &child, &rec, NUMERIC_POINTS_RANDOM);
            }
            Err(_) => fails[2] += 1,
        }
    }

    let mut g = SystemGenerator::new(RandomSystemSpec { seed: SEED_SHEAR, ..Default::default() });
    while counts[4] < LEMMA_SYSTEMS {
        let s = g.next_system();
        if poly_of(&s).is_controllable() {
            continue;
        }
        counts[4] += 1;
        match shear(&s, &choose_shear(&s)) {
            Ok((child, rec)) => {
                fails[4] += !poly_of(&child).is_controllable() as usize;
                c.edge(&s, &child, &rec, NUMERIC_POINTS_RANDOM);
            }
            Err(_) => fails[4] += 1,
        }
    }
    let labels = ["a", "b", "c", "d", "e"];
    let detail = labels.iter().zip(counts.iter().zip(&fails)).map(|(l, (n, f))| format!("({l}) {f}/{n} failures")).collect::<Vec<_>>().join(", ");
    outcome(fails.iter().sum::<usize>() == 0, detail)
}

fn criterion_6(c: &Collected) -> Outcome {
    let (mut exact_bad, mut numeric_bad, mut worst) = (0, 0, 0.0f64);
    for (i, e) in c.edges.iter().enumerate() {
        exact_bad += verify_pullback(&e.parent, &e.child, &e.rec).is_err() as usize;
        let check = numeric_pullback_check(&e.parent, &e.child, &e.rec, e.points, NUMERIC_TOL, i as u64);
        numeric_bad += !check.ok as usize;
        worst = worst.max(check.worst);
    }
    outcome(
        exact_bad == 0 && numeric_bad == 0,
        format!("{} edges, exact failures {exact_bad}, numeric failures {numeric_bad} (tol {NUMERIC_TOL:e}, worst {worst:.1e})", c.edges.len()),
    )
}

fn criterion_7(c: &mut Collected, corpus: &[(ConstrainedSystem, Weight)]) -> Outcome {
    let (mut resolved, mut budget, mut stuck, mut cert_bad, mut with_admissible) = (0, 0, 0, 0, 0);
    for (s, _) in corpus {
        match resolve_local(s, Budget::default()) {
            Ok(t) => {
                resolved += 1;
                match termination_certificate(&t) {
                    Ok(cert) => with_admissible += (cert.admissible_steps > 0) as usize,
                    Err(_) => cert_bad += 1,
                }
                c.tree(&t, NUMERIC_POINTS_RANDOM);
            }
            Err(ResolveError::BudgetExceeded { .. }) => budget += 1,
            Err(ResolveError::Stuck { .. }) => stuck += 1,
        }
    }
    outcome(
        budget == 0 && stuck == 0 && cert_bad == 0,
        format!(
            "{resolved}/{} resolved, certificate failures {cert_bad}, budget exceeded {budget}, stuck {stuck}, {with_admissible} with admissible steps",
            corpus.len()
        ),
    )
}

fn random_poly(rng: &mut ChaCha8Rng) -> BiPoly {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(0..5) {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=4);
        terms.push((Num::Rat(Rational::new(n.into(), d.into())), rng.gen_range(0..4), rng.gen_range(0..4)));
    }
    BiPoly::from_terms(terms)
}

fn random_source(rng: &mut ChaCha8Rng) -> SystemSource {
    if rng.gen_bool(0.7) {
        SystemSource::Diagonalized { delta: random_poly(rng), p: random_poly(rng), q: random_poly(rng) }
    } else {
        let a = [[random_poly(rng), random_poly(rng)], [random_poly(rng), random_poly(rng)]];
        SystemSource::Matrix { a, f: [random_poly(rng), random_poly(rng)] }
    }
}

fn criterion_8(c: &Collected) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_SOURCES);
    let mut text_bad = 0;
    for _ in 0..ROUND_TRIPS {
        let src = random_source(&mut rng);
        if parse_system(&print_source(&src)).ok() != Some(src) {
            text_bad += 1;
        }
    }
    let (mut json_bad, mut nodes) = (0, 0);
    for t in &c.trees {
        nodes += t.stats.nodes;
        match import_tree(&export_tree(t, Format::Json)) {
            Ok(back) => json_bad += back.mismatches().len() + (back.tree.stats != t.stats) as usize,
            Err(_) => json_bad += 1,
        }
    }
    outcome(
        text_bad == 0 && json_bad == 0,
        format!("{text_bad}/{ROUND_TRIPS} source round trips failed, {json_bad} reclassification mismatches over {} trees ({nodes} nodes)", c.trees.len()),
    )
}

fn report(n: usize, name: &str, started: Instant, o: &Outcome) {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {n} {verdict}: {name}: {} [{:.1?}]\n", o.detail, started.elapsed());
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

#[test]
fn acceptance() {
    let mut c = Collected::default();
    let corpus = lemma_corpus();
    let mut passed = Vec::new();
    let mut run = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        report(n, name, t, &o);
        passed.push((n, o.pass));
    };
    run(1, "cusp-fold regression", &mut || criterion_1(&mut c));
    run(2, "finality of the separatrix example", &mut || criterion_2(&mut c));
    run(3, "persistent point example", &mut || criterion_3(&mut c));
    run(4, "polygon vs semantic elementarity", &mut criterion_4);
    run(5, "lemma suite", &mut || criterion_5(&mut c, &corpus));
    // the trees resolved for criterion 7 also feed the pullback check
    let t7 = Instant::now();
    let seventh = criterion_7(&mut c, &corpus);
    let t7 = t7.elapsed();
    run(6, "pullback soundness", &mut || criterion_6(&c));
    run(7, "termination bookkeeping", &mut || Outcome { pass: seventh.pass, detail: format!("{} [resolution {t7:.1?}]", seventh.detail) });
    run(8, "round trips", &mut || criterion_8(&c));
    let failed: Vec<usize> = passed.iter().filter(|p| !p.1).map(|p| p.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! Simple real extensions `Q(theta)` and their elements.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use super::poly::{interpolate, sturm_count, split_point, Coef, Poly, UPoly};
use super::factor::factor_squarefree;
use super::real::AlgebraicReal;
use super::Rational;

/// `Q[t]/(minpoly)` evaluated at one chosen real root `theta`, with an
/// irreducible minimal polynomial.
#[derive(Debug)]
pub struct NumberField {
    minpoly: UPoly,
    root: AlgebraicReal,
    approx: f64,
    approx_pair: OnceLock<(f64, f64)>,
}

impl NumberField {
    /// Field generated by a real algebraic number; `None` when it is rational.
    pub fn generated_by(theta: &AlgebraicReal) -> Option<Arc<NumberField>> {
        let theta = theta.minimal();
        if theta.degree() <= 1 {
            return None;
        }
        let minpoly = theta.poly().monic();
        let approx = theta.to_f64();
        Some(Arc::new(NumberField { minpoly, root: theta, approx, approx_pair: OnceLock::new() }))
    }

    pub fn minpoly(&self) -> &UPoly {
        &self.minpoly
    }
    pub fn root(&self) -> &AlgebraicReal {
        &self.root
    }
    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    /// `theta` as an unevaluated sum `hi + lo` of two doubles, computed on
    /// first use.
    pub fn approx_pair(&self) -> (f64, f64) {
        *self.approx_pair.get_or_init(|| self.root.to_f64_pair())
    }

    /// The generator as a field element.
    pub fn gen(self: &Arc<Self>) -> Num {
        Num::from_poly(UPoly::var(), self)
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || (a.minpoly == b.minpoly && a.root.equals(&b.root))
    }
}

/// A coefficient: a rational, or an element of some `Q(theta)`.
///
/// Rationals mix freely with field elements; two field elements must come
/// from the same field.
#[derive(Clone)]
pub enum Num {
    Rat(Rational),
    Alg(UPoly, Arc<NumberField>),
}

impl Num {
    pub fn int(n: i64) -> Num {
        Num::Rat(Rational::from_integer(BigInt::from(n)))
    }
    pub fn frac(n: i64, d: i64) -> Num {
        Num::Rat(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Element `p(theta)`, normalized.
    pub fn from_poly(p: UPoly, k: &Arc<NumberField>) -> Num {
        let r = p.rem(&k.minpoly);
        if r.deg() == 0 {
            return Num::Rat(r.coeff(0));
        }
        Num::Alg(r, k.clone())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            Num::Rat(_) => None,
            Num::Alg(_, k) => Some(k),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Num::Rat(q) => Some(q),
            Num::Alg(..) => None,
        }
    }

    /// Representative polynomial in the generator.
    pub fn as_poly(&self) -> UPoly {
        match self {
            Num::Rat(q) => UPoly::constant(q.clone()),
            Num::Alg(p, _) => p.clone(),
        }
    }

    fn combine(
        &self,
        o: &Self,
        fr: impl Fn(&Rational, &Rational) -> Rational,
        fp: impl Fn(&UPoly, &UPoly) -> UPoly,
    ) -> Num {
        match (self, o) {
            (Num::Rat(a), Num::Rat(b)) => Num::Rat(fr(a, b)),
            (Num::Alg(p, k), Num::Rat(b)) => Num::from_poly(fp(p, &UPoly::constant(b.clone())), k),
            (Num::Rat(a), Num::Alg(p, k)) => Num::from_poly(fp(&UPoly::constant(a.clone()), p), k),
            (Num::Alg(p, k), Num::Alg(q, l)) => {
                assert!(NumberField::same(k, l), "arithmetic across different number fields");
                Num::from_poly(fp(p, q), k)
            }
        }
    }

    /// Image under `theta -> img`, where `img` lives in the target field.
    pub fn embed(&self, img: &Num) -> Num {
        match self {
            Num::Rat(q) => Num::Rat(q.clone()),
            Num::Alg(p, _) => {
                let mut acc = Num::zero();
                for c in p.coeffs().iter().rev() {
                    acc = Coef::plus(&Coef::times(&acc, img), &Num::Rat(c.clone()));
                }
                acc
            }
        }
    }

    /// Floating-point approximation.
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Rat(q) => q.to_f64().unwrap_or(f64::NAN),
            Num::Alg(p, k) => {
                let t = k.approx;
                p.coeffs().iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
            }
        }
    }
}

impl Zero for Num {
    fn zero() -> Self {
        Num::Rat(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Num::Rat(q) if q.is_zero())
    }
}

impl One for Num {
    fn one() -> Self {
        Num::Rat(Rational::one())
    }
}

impl std::ops::Add for Num {
    type Output = Num;
    fn add(self, o: Num) -> Num {
        Coef::plus(&self, &o)
    }
}

impl std::ops::Sub for Num {
    type Output = Num;
    fn sub(self, o: Num) -> Num {
        Coef::minus(&self, &o)
    }
}

impl std::ops::Mul for Num {
    type Output = Num;
    fn mul(self, o: Num) -> Num {
        Coef::times(&self, &o)
    }
}

impl std::ops::Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        Coef::negate(&self)
    }
}

impl Coef for Num {
    fn from_rational(q: Rational) -> Self {
        Num::Rat(q)
    }
    fn plus(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a + b, |a, b| a.add(b))
    }
    fn minus(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a - b, |a, b| a.sub(b))
    }
    fn times(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a * b, |a, b| a.mul(b))
    }
    fn negate(&self) -> Self {
        match self {
            Num::Rat(q) => Num::Rat(-q),
            Num::Alg(p, k) => Num::Alg(p.neg(), k.clone()),
        }
    }
    fn inv(&self) -> Self {
        match self {
            Num::Rat(q) => {
                assert!(!q.is_zero(), "inverse of zero");
                Num::Rat(q.recip())
            }
            Num::Alg(p, k) => {
                let (g, s, _) = p.xgcd(&k.minpoly);
                if g.deg() == 0 {
                    return Num::from_poly(s, k);
                }
                // p is a zero divisor that does not vanish at theta: invert
                // modulo the cofactor that carries theta.
                let m2 = k.minpoly.exact_div(&g);
                let (g2, s2, _) = p.xgcd(&m2);
                assert!(g2.deg() == 0, "inverse of zero");
                Num::from_poly(s2, k)
            }
        }
    }
    fn sign(&self) -> i8 {
        sign_of(self)
    }
    fn abs_bound(&self) -> Rational {
        match self {
            Num::Rat(q) => q.abs(),
            Num::Alg(p, k) => {
                let (lo, hi) = k.root.interval();
                let b = if lo.abs() > hi.abs() { lo.abs() } else { hi.abs() };
                let mut acc = Rational::zero();
                for c in p.coeffs().iter().rev() {
                    acc = acc * &b + c.abs();
                }
                acc
            }
        }
    }
}

impl PartialEq for Num {
    fn eq(&self, o: &Self) -> bool {
        Coef::minus(self, o).is_zero()
    }
}

impl fmt::Debug for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Rat(q) => write!(f, "{q}"),
            Num::Alg(p, _) => write!(f, "{:?}", p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        }
    }
}

impl From<Rational> for Num {
    fn from(q: Rational) -> Self {
        Num::Rat(q)
    }
}

/// Exact sign of a field element at its chosen real generator.
pub fn sign_of(e: &Num) -> i8 {
    match e {
        Num::Rat(q) => Coef::sign(q),
        Num::Alg(p, k) => k.root.sign_at(p),
    }
}

/// A real root of a polynomial with coefficients in some `Q(theta)`,
/// isolated by `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct FieldRoot {
    pub poly: Poly<Num>,
    pub lo: Rational,
    pub hi: Rational,
}

impl FieldRoot {
    pub fn bisect(&mut self) {
        let m = split_point(&self.poly, &self.lo, &self.hi);
        // The root is simple, so a sign change finds it unless `lo` is a root.
        let at_lo = self.poly.eval_q(&self.lo).sign();
        let inside = if at_lo != 0 {
            at_lo != self.poly.eval_q(&m).sign()
        } else {
            sturm_count(&self.poly.sturm_chain(), &self.lo, &m) == 1
        };
        if inside {
            self.hi = m;
        } else {
            self.lo = m;
        }
    }

    /// The same number as a root of a squarefree rational polynomial (the
    /// norm down to `Q`), simplified.
    pub fn over_rationals(&self) -> AlgebraicReal {
        let n = norm(&self.poly).squarefree_part();
        let chain = n.sturm_chain();
        let mut me = self.clone();
        loop {
            let ok = !n.eval(&me.lo).is_zero() && !n.eval(&me.hi).is_zero();
            if ok && sturm_count(&chain, &me.lo, &me.hi) == 1 {
                return AlgebraicReal::new_unchecked(n, me.lo, me.hi).simplified();
            }
            me.bisect();
        }
    }
}

fn coeff_field(p: &Poly<Num>) -> Option<Arc<NumberField>> {
    p.coeffs().iter().find_map(|c| c.field().cloned())
}

/// Bivariate lift `G(theta, y)` of a polynomial over `Q(theta)`; entry `j`
/// is the coefficient of `y^j` as a polynomial in `theta`.
fn lift(p: &Poly<Num>) -> Vec<UPoly> {
    p.coeffs().iter().map(|c| c.as_poly()).collect()
}

/// `prod G(theta_i, y)` over the conjugates of `theta`: a rational polynomial
/// whose roots contain those of `p`.
pub fn norm(p: &Poly<Num>) -> UPoly {
    match coeff_field(p) {
        None => p.map(|c| c.as_rational().cloned().unwrap_or_else(Rational::zero)),
        Some(k) => shifted_norm(&lift(p), &k.minpoly, &Rational::zero()),
    }
}

/// `Res_theta(m(theta), G(theta, t - shift*theta))` as a polynomial in `t`,
/// by evaluation at enough points and interpolation.
fn shifted_norm(g: &[UPoly], m: &UPoly, shift: &Rational) -> UPoly {
    let e = g.len().saturating_sub(1);
    let d = m.deg();
    let gdeg = g.iter().map(|c| c.deg()).max().unwrap_or(0);
    let npts = d * (e + gdeg) + 1;
    let th = UPoly::var();
    let mut pts = Vec::with_capacity(npts);
    for i in 0..npts {
        let t0 = Rational::from_integer(BigInt::from(i as i64));
        // H(theta) = sum_j g_j(theta) (t0 - shift*theta)^j
        let lin = UPoly::new(vec![t0.clone(), -shift.clone()]);
        let mut h = UPoly::zero();
        let mut pw = UPoly::one();
        for gj in g {
            h = h.add(&gj.mul(&pw));
            pw = pw.mul(&lin);
        }
        let _ = &th;
        pts.push((t0, m.resultant(&h.rem(m))));
    }
    interpolate(&pts)
}

/// Result of adjoining a root `xi` to a field `K`.
#[derive(Clone, Debug)]
pub struct Extension {
    /// The new field, `None` when everything stays rational.
    pub field: Option<Arc<NumberField>>,
    /// Image of the old generator (absent when `K = Q`).
    pub old_gen: Option<Num>,
    /// `xi` as an element of the new field.
    pub xi: Num,
}

impl Extension {
    /// Move an element of the old field into the new one.
    pub fn lift(&self, c: &Num) -> Num {
        match (&self.old_gen, c) {
            (_, Num::Rat(q)) => Num::Rat(q.clone()),
            (Some(g), Num::Alg(..)) => c.embed(g),
            (None, Num::Alg(..)) => c.clone(),
        }
    }
}

/// Adjoin a real root of `p` (coefficients in `K` or `Q`) to `K`.
///
/// `k` is the field of the coefficients (`None` for `Q`). Uses the primitive
/// element `xi + c*theta` for the smallest `c = 1, 2, ...` whose norm is
/// squarefree of full degree.
pub fn adjoin_root(k: Option<&Arc<NumberField>>, root: &FieldRoot) -> Extension {
    let g = root.poly.monic();
    let e = g.deg();
    if e == 1 {
        let xi = g.coeff(0).negate();
        return Extension { field: k.cloned(), old_gen: k.map(|k| k.gen()), xi };
    }
    let over_q = root.over_rationals();
    if let Some(q) = over_q.as_rational() {
        return Extension { field: k.cloned(), old_gen: k.map(|k| k.gen()), xi: Num::Rat(q) };
    }
    let k = match k {
        None => {
            let f = NumberField::generated_by(&over_q).expect("irrational root");
            let xi = f.gen();
            return Extension { field: Some(f), old_gen: None, xi };
        }
        Some(k) => k.clone(),
    };
    if over_q.equals(&k.root) {
        return Extension { field: Some(k.clone()), old_gen: Some(k.gen()), xi: k.gen() };
    }
    let gl = lift(&g);
    let d = k.degree();
    let dim = d * e;
    for c in 1..=64i64 {
        let cq = Rational::from_integer(BigInt::from(c));
        let r = shifted_norm(&gl, &k.minpoly, &cq);
        if r.deg() != dim || !r.is_squarefree() {
            continue;
        }
        // Coordinates in the basis theta^i y^j, index i + d*j.
        let Some((img_theta, img_y)) = solve_embeddings(&gl, &k.minpoly, &cq, dim) else {
            continue;
        };
        // Isolate theta_new = xi + c*theta among the roots of the irreducible
        // factors of r, doubling the refinement between Sturm tests.
        let factors: Vec<(UPoly, Vec<UPoly>)> = factor_squarefree(&r).into_iter().map(|f| {
            let chain = f.sturm_chain();
            (f, chain)
        }).collect();
        let mut th = k.root.clone();
        let mut xr = root.clone();
        let mut steps = 1;
        let (f, lo, hi) = loop {
            let (tlo, thi) = th.interval();
            let lo = &xr.lo + &cq * tlo;
            let hi = &xr.hi + &cq * thi;
            if !r.eval(&lo).is_zero() && !r.eval(&hi).is_zero() {
                let counts: Vec<usize> = factors.iter().map(|(_, ch)| sturm_count(ch, &lo, &hi)).collect();
                if counts.iter().sum::<usize>() == 1 {
                    let i = counts.iter().position(|&n| n == 1).expect("one root");
                    break (factors[i].0.clone(), lo, hi);
                }
            }
            for _ in 0..steps {
                th.bisect();
                xr.bisect();
            }
            steps *= 2;
        };
        let new_root = AlgebraicReal::new_unchecked(f, lo, hi).simplified();
        match NumberField::generated_by(&new_root) {
            None => {
                // xi + c*theta is rational: xi already lies in K.
                let q = new_root.as_rational().expect("rational generator");
                let xi = Coef::minus(&Num::Rat(q), &Coef::times(&Num::Rat(cq), &k.gen()));
                return Extension { field: Some(k.clone()), old_gen: Some(k.gen()), xi };
            }
            Some(f) => {
                log::debug!("adjoined a degree {e} root to a degree {d} field: degree {}", f.degree());
                let old_gen = Num::from_poly(img_theta, &f);
                let xi = Num::from_poly(img_y, &f);
                return Extension { field: Some(f), old_gen: Some(old_gen), xi };
            }
        }
    }
    panic!("no primitive element found for field extension");
}

/// Express `theta` and `y` as polynomials in `t = y + c*theta` inside
/// `Q[theta, y]/(m(theta), g(theta, y))`.
fn solve_embeddings(g: &[UPoly], m: &UPoly, c: &Rational, dim: usize) -> Option<(UPoly, UPoly)> {
    let d = m.deg();
    let e = g.len() - 1;
    // Element: e coefficient polys in theta (each reduced mod m).
    let to_vec = |el: &[UPoly]| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        for (j, p) in el.iter().enumerate() {
            for (i, a) in p.coeffs().iter().enumerate() {
                v[i + d * j] = a.clone();
            }
        }
        v
    };
    let mul_theta = |el: &[UPoly]| -> Vec<UPoly> { el.iter().map(|p| p.shift(1).rem(m)).collect() };
    let mul_y = |el: &[UPoly]| -> Vec<UPoly> {
        let top = el[e - 1].clone();
        let mut out = vec![UPoly::zero(); e];
        for j in (1..e).rev() {
            out[j] = el[j - 1].clone();
        }
        // y^e = -sum_{j<e} g_j y^j (g monic)
        for j in 0..e {
            out[j] = out[j].sub(&top.mul(&g[j]).rem(m));
        }
        out
    };
    let mut cur: Vec<UPoly> = vec![UPoly::zero(); e];
    cur[0] = UPoly::one();
    let mut cols = Vec::with_capacity(dim);
    for _ in 0..dim {
        cols.push(to_vec(&cur));
        let a = mul_y(&cur);
        let b = mul_theta(&cur);
        cur = a.iter().zip(&b).map(|(x, y)| x.add(&y.scale(c))).collect();
    }
    let mut theta_el = vec![UPoly::zero(); e];
    theta_el[0] = UPoly::var().rem(m);
    let mut y_el = vec![UPoly::zero(); e];
    y_el[1] = UPoly::one();
    let sol = solve_linear(&cols, &[to_vec(&theta_el), to_vec(&y_el)])?;
    Some((UPoly::new(sol[0].clone()), UPoly::new(sol[1].clone())))
}

/// Solve `sum_i x_i cols[i] = rhs` for each right-hand side; `None` when the
/// columns are dependent.
pub fn solve_linear(cols: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = cols.len();
    let nr = rhs.len();
    // Row-major augmented matrix.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.extend(rhs.iter().map(|b| b[r].clone()));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * p;
                }
            }
        }
    }
    Some((0..nr).map(|k| (0..n).map(|r| a[r][n + k].clone()).collect()).collect())
}

/// Primitive element of `Q(theta1, theta2)` with representations of both.
#[derive(Clone, Debug)]
pub struct Join {
    pub field: Option<Arc<NumberField>>,
    pub theta1: Num,
    pub theta2: Num,
}

/// Join two real algebraic numbers into one simple extension.
pub fn field_join(t1: &AlgebraicReal, t2: &AlgebraicReal) -> Join {
    let t1 = t1.simplified();
    let t2 = t2.simplified();
    let k = NumberField::generated_by(&t1);
    let as_elem = |t: &AlgebraicReal| t.as_rational().map(Num::Rat);
    let Some(k) = k else {
        let f = NumberField::generated_by(&t2);
        let th2 = as_elem(&t2).unwrap_or_else(|| f.as_ref().unwrap().gen());
        return Join { field: f, theta1: as_elem(&t1).unwrap(), theta2: th2 };
    };
    let (lo, hi) = t2.interval();
    let root = FieldRoot {
        poly: t2.poly().map(|c| Num::Rat(c.clone())),
        lo: lo.clone(),
        hi: hi.clone(),
    };
    let ext = adjoin_root(Some(&k), &root);
    Join { field: ext.field.clone(), theta1: ext.old_gen.clone().unwrap(), theta2: ext.xi }
}

/// Real roots of a polynomial over `Q(theta)` with multiplicities, ascending.
pub fn field_real_roots(p: &Poly<Num>) -> Vec<(FieldRoot, usize)> {
    let mut out: Vec<(FieldRoot, usize)> = p
        .real_root_intervals()
        .into_iter()
        .map(|(g, lo, hi, m)| (FieldRoot { poly: g, lo, hi }, m))
        .collect();
    // Separate overlapping intervals, then sort.
    loop {
        let mut clash = None;
        'o: for i in 0..out.len() {
            for j in i + 1..out.len() {
                if out[i].0.lo < out[j].0.hi && out[j].0.lo < out[i].0.hi {
                    clash = Some((i, j));
                    break 'o;
                }
            }
        }
        match clash {
            None => break,
            Some((i, j)) => {
                out[i].0.bisect();
                out[j].0.bisect();
            }
        }
    }
    out.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
    out
}

/// Rational roots among the isolated ones are reported exactly.
pub fn rational_value(r: &FieldRoot) -> Option<Rational> {
    if r.poly.deg() == 1 {
        if let Some(q) = r.poly.coeff(0).div(&r.poly.coeff(1)).as_rational() {
            return Some(-q);
        }
    }
    r.over_rationals().as_rational()
}

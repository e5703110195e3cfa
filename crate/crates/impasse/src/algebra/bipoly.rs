//! Sparse bivariate polynomials with bounded negative exponents.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use super::field::Num;
use super::poly::{Coef, Poly};
use super::Rational;

pub type Exp = (i32, i32);

/// Polynomial in `x, y` over [`Num`], allowing exponents down to `lower`.
#[derive(Clone)]
pub struct BiPoly {
    terms: BTreeMap<Exp, Num>,
    lower: Exp,
}

impl PartialEq for BiPoly {
    /// Equal as polynomials; the declared bounds do not matter.
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

/// Graded lexicographic comparison with `x > y`.
pub fn grlex(a: &Exp, b: &Exp) -> Ordering {
    (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new(), lower: (0, 0) }
    }
    pub fn one() -> Self {
        Self::constant(Num::int(1))
    }
    pub fn constant(c: Num) -> Self {
        Self::monomial(c, (0, 0))
    }
    pub fn x() -> Self {
        Self::monomial(Num::int(1), (1, 0))
    }
    pub fn y() -> Self {
        Self::monomial(Num::int(1), (0, 1))
    }

    pub fn monomial(c: Num, e: Exp) -> Self {
        let mut p = BiPoly { terms: BTreeMap::new(), lower: (e.0.min(0), e.1.min(0)) };
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Build from `(coefficient, x exponent, y exponent)` triples, summing
    /// repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (Num, i32, i32)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for (c, i, j) in it {
            p.add_term((i, j), c);
        }
        p
    }

    /// Integer-coefficient shorthand.
    pub fn from_ints(t: &[(i64, i32, i32)]) -> Self {
        Self::from_terms(t.iter().map(|&(c, i, j)| (Num::int(c), i, j)))
    }

    pub fn add_term(&mut self, e: Exp, c: Num) {
        if c.is_zero() {
            return;
        }
        self.lower = (self.lower.0.min(e.0), self.lower.1.min(e.1));
        match self.terms.get(&e) {
            Some(old) => {
                let s = Coef::plus(old, &c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Declared lower exponent bounds.
    pub fn lower(&self) -> Exp {
        self.lower
    }

    /// Same polynomial with declared bounds; panics if a term falls below.
    pub fn with_lower(mut self, lower: Exp) -> Self {
        assert!(self.respects(lower), "exponent below declared bound {lower:?}");
        self.lower = lower;
        self
    }

    pub fn respects(&self, lower: Exp) -> bool {
        self.terms.keys().all(|e| e.0 >= lower.0 && e.1 >= lower.1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Num)> {
        self.terms.iter()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, e: Exp) -> Num {
        self.terms.get(&e).cloned().unwrap_or_else(Num::zero)
    }
    pub fn support(&self) -> Vec<Exp> {
        self.terms.keys().copied().collect()
    }

    /// Is every exponent non-negative?
    pub fn is_polynomial(&self) -> bool {
        self.respects((0, 0))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == (0, 0))
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(|e| e.0 + e.1).max().unwrap_or(0)
    }
    pub fn deg_x(&self) -> i32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }
    pub fn deg_y(&self) -> i32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }
    /// Smallest exponent of `x` and of `y` among the terms.
    pub fn min_exps(&self) -> Option<Exp> {
        let mx = self.terms.keys().map(|e| e.0).min()?;
        let my = self.terms.keys().map(|e| e.1).min()?;
        Some((mx, my))
    }
    /// Lowest total degree of a term.
    pub fn order(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.0 + e.1).min()
    }

    /// Leading term in graded lex order.
    pub fn leading(&self) -> Option<(Exp, Num)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0)).map(|(e, c)| (*e, c.clone()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r.lower = (self.lower.0.min(o.lower.0), self.lower.1.min(o.lower.1));
        r
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, Coef::negate(c))).collect(),
            lower: self.lower,
        }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = BiPoly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                r.add_term((e.0 + f.0, e.1 + f.1), Coef::times(c, d));
            }
        }
        r.lower = (
            (self.lower.0 + o.lower.0).max(r.lower.0),
            (self.lower.1 + o.lower.1).max(r.lower.1),
        );
        r
    }
    pub fn scale(&self, a: &Num) -> Self {
        let mut r = BiPoly { terms: BTreeMap::new(), lower: self.lower };
        for (e, c) in &self.terms {
            r.add_term(*e, Coef::times(c, a));
        }
        r
    }
    pub fn pow(&self, k: u32) -> Self {
        let mut r = BiPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Multiply by `x^i y^j` (negative shifts allowed).
    pub fn shift(&self, s: Exp) -> Self {
        let mut r = BiPoly {
            terms: self.terms.iter().map(|(e, c)| ((e.0 + s.0, e.1 + s.1), c.clone())).collect(),
            lower: (0, 0),
        };
        r.lower = r.min_exps().map(|m| (m.0.min(0), m.1.min(0))).unwrap_or((0, 0));
        r
    }

    /// Apply a map on coefficients.
    pub fn map_coeffs(&self, f: impl Fn(&Num) -> Num) -> Self {
        let mut r = BiPoly { terms: BTreeMap::new(), lower: self.lower };
        for (e, c) in &self.terms {
            r.add_term(*e, f(c));
        }
        r
    }

    /// Image under a monomial map: `x^m y^n -> factor(m, n) * x^e1 y^e2`.
    pub fn monomial_map(&self, f: impl Fn(Exp) -> (Num, Exp)) -> Self {
        let mut r = BiPoly::zero();
        for (e, c) in &self.terms {
            let (k, ne) = f(*e);
            r.add_term(ne, Coef::times(c, &k));
        }
        r
    }

    pub fn eval(&self, x: &Num, y: &Num) -> Num {
        let mut acc = Num::zero();
        for (e, c) in &self.terms {
            let t = Coef::times(&Coef::times(c, &pow_num(x, e.0)), &pow_num(y, e.1));
            acc = Coef::plus(&acc, &t);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|(e, c)| c.to_f64() * x.powi(e.0) * y.powi(e.1)).sum()
    }

    pub fn dx(&self) -> Self {
        let mut r = BiPoly::zero();
        for (e, c) in &self.terms {
            if e.0 != 0 {
                r.add_term((e.0 - 1, e.1), Coef::times(c, &Num::int(e.0 as i64)));
            }
        }
        r
    }
    pub fn dy(&self) -> Self {
        let mut r = BiPoly::zero();
        for (e, c) in &self.terms {
            if e.1 != 0 {
                r.add_term((e.0, e.1 - 1), Coef::times(c, &Num::int(e.1 as i64)));
            }
        }
        r
    }

    /// Substitute polynomials for `x` and `y`; requires non-negative exponents.
    pub fn substitute(&self, sx: &BiPoly, sy: &BiPoly) -> Self {
        assert!(self.is_polynomial(), "substitution into a Laurent polynomial");
        let mut px = vec![BiPoly::one()];
        let mut py = vec![BiPoly::one()];
        for _ in 0..self.deg_x() {
            let n = px.last().unwrap().mul(sx);
            px.push(n);
        }
        for _ in 0..self.deg_y() {
            let n = py.last().unwrap().mul(sy);
            py.push(n);
        }
        let mut r = BiPoly::zero();
        for (e, c) in &self.terms {
            r = r.add(&px[e.0 as usize].mul(&py[e.1 as usize]).scale(c));
        }
        r
    }

    /// Coefficient of `x^k` as a polynomial in `y` (exponents of `y` must be
    /// non-negative).
    pub fn x_slice(&self, k: i32) -> Poly<Num> {
        let mut c: Vec<Num> = Vec::new();
        for (e, v) in &self.terms {
            if e.0 == k {
                assert!(e.1 >= 0, "negative y exponent in slice");
                let j = e.1 as usize;
                if c.len() <= j {
                    c.resize(j + 1, Num::zero());
                }
                c[j] = v.clone();
            }
        }
        Poly::new(c)
    }
    /// Coefficient of `y^k` as a polynomial in `x`.
    pub fn y_slice(&self, k: i32) -> Poly<Num> {
        self.swap().x_slice(k)
    }

    /// Exchange `x` and `y`.
    pub fn swap(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(e, c)| ((e.1, e.0), c.clone())).collect(),
            lower: (self.lower.1, self.lower.0),
        }
    }

    /// Divide by `x^i y^j`, which must divide exactly.
    pub fn div_monomial(&self, s: Exp) -> Option<Self> {
        let r = self.shift((-s.0, -s.1));
        if r.respects((self.lower.0, self.lower.1)) {
            Some(BiPoly { lower: self.lower, ..r })
        } else {
            None
        }
    }

    /// Terms with `w.0 * i + w.1 * j == level`.
    pub fn level(&self, w: (i32, i32), level: i32) -> Self {
        let mut r = BiPoly { terms: BTreeMap::new(), lower: self.lower };
        for (e, c) in &self.terms {
            if w.0 * e.0 + w.1 * e.1 == level {
                r.terms.insert(*e, c.clone());
            }
        }
        r
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let (le, lc) = d.leading()?;
        let lci = lc.inv();
        let mut rem = self.clone();
        let mut q = BiPoly::zero();
        while let Some((e, c)) = rem.leading() {
            let s = (e.0 - le.0, e.1 - le.1);
            if s.0 < 0 || s.1 < 0 {
                return None;
            }
            let t = BiPoly::monomial(Coef::times(&c, &lci), s);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn divides(&self, f: &BiPoly) -> bool {
        if self.is_zero() {
            return f.is_zero();
        }
        f.div_exact(self).is_some()
    }

    /// Scale so the graded-lex leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Coefficients as `Q` values when none is irrational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    /// Rational coefficient lookup (panics on irrational data).
    pub fn rational_coeff(&self, e: Exp) -> Rational {
        self.coeff(e).as_rational().cloned().expect("rational coefficient")
    }

    /// As a polynomial in `x` whose coefficients are polynomials in `y`.
    fn to_x_poly(&self) -> Vec<Poly<Num>> {
        assert!(self.is_polynomial());
        (0..=self.deg_x()).map(|k| self.x_slice(k)).collect()
    }

    fn from_x_poly(c: &[Poly<Num>]) -> Self {
        let mut r = BiPoly::zero();
        for (i, p) in c.iter().enumerate() {
            for (j, v) in p.coeffs().iter().enumerate() {
                r.add_term((i as i32, j as i32), v.clone());
            }
        }
        r
    }
}

fn pow_num(x: &Num, e: i32) -> Num {
    let b = if e < 0 { x.inv() } else { x.clone() };
    let mut r = Num::int(1);
    for _ in 0..e.unsigned_abs() {
        r = Coef::times(&r, &b);
    }
    r
}

fn trim(v: &mut Vec<Poly<Num>>) {
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
}

fn content(u: &[Poly<Num>]) -> Poly<Num> {
    u.iter().fold(Poly::zero(), |g, c| g.gcd(c))
}

fn primitive(u: &[Poly<Num>]) -> Vec<Poly<Num>> {
    let c = content(u);
    if c.is_zero() {
        return u.to_vec();
    }
    u.iter().map(|p| p.exact_div(&c)).collect()
}

/// Pseudo-remainder of `u` by `v` in `K[y][x]`.
fn prem(u: &[Poly<Num>], v: &[Poly<Num>]) -> Vec<Poly<Num>> {
    let mut r = u.to_vec();
    let dv = v.len() - 1;
    let lv = v[dv].clone();
    while r.len() > dv {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let k = dr - dv;
        for p in r.iter_mut() {
            *p = p.mul(&lv);
        }
        for (i, vi) in v.iter().enumerate() {
            r[i + k] = r[i + k].sub(&vi.mul(&lr));
        }
        trim(&mut r);
    }
    r
}

/// Greatest common divisor, monic in graded lex order; `gcd(0, v) = v`.
///
/// Laurent inputs are cleared of negative exponents first.
pub fn gcd_bipoly(u: &BiPoly, v: &BiPoly) -> BiPoly {
    if u.is_zero() {
        return v.monic();
    }
    if v.is_zero() {
        return u.monic();
    }
    let to_poly = |p: &BiPoly| {
        let m = p.min_exps().unwrap();
        p.shift((-m.0.min(0), -m.1.min(0)))
    };
    let (u, v) = (to_poly(u), to_poly(v));
    let mut a = u.to_x_poly();
    let mut b = v.to_x_poly();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let cont = content(&a).gcd(&content(&b));
    let mut a = primitive(&a);
    let mut b = primitive(&b);
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive(&r) };
    }
    let g: Vec<Poly<Num>> = primitive(&a).iter().map(|p| p.mul(&cont)).collect();
    BiPoly::from_x_poly(&g).monic()
}

/// Product of the distinct irreducible factors.
pub fn squarefree_part(f: &BiPoly) -> BiPoly {
    let g = gcd_bipoly(f, &gcd_bipoly(&f.dx(), &f.dy()));
    if g.is_zero() || g.is_constant() {
        return f.clone();
    }
    f.div_exact(&g).expect("gcd divides")
}

pub fn is_squarefree(f: &BiPoly) -> bool {
    let g = gcd_bipoly(f, &gcd_bipoly(&f.dx(), &f.dy()));
    g.is_constant()
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c:?}*x^{}*y^{}", e.0, e.1)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

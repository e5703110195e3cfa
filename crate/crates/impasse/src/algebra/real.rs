//! Real algebraic numbers given by a squarefree rational polynomial and an
//! isolating interval.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use super::poly::{isolate, split_point, sturm_count, Coef, Poly, UPoly};
use super::factor::factor_squarefree;
use super::Rational;

/// A real root of `poly`, the only one in the open interval `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: UPoly,
    lo: Rational,
    hi: Rational,
}

/// A distinct real root with its multiplicity in the original polynomial.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub value: AlgebraicReal,
    pub multiplicity: usize,
}

impl AlgebraicReal {
    /// Caller guarantees `poly` squarefree with exactly one root in `(lo, hi)`
    /// and no root at either endpoint.
    pub fn new_unchecked(poly: UPoly, lo: Rational, hi: Rational) -> Self {
        AlgebraicReal { poly: poly.monic(), lo, hi }
    }

    /// Checked constructor.
    pub fn new(poly: UPoly, lo: Rational, hi: Rational) -> Option<Self> {
        if poly.deg() == 0 || !poly.is_squarefree() || lo >= hi {
            return None;
        }
        if poly.eval(&lo).is_zero() || poly.eval(&hi).is_zero() {
            return None;
        }
        if sturm_count(&poly.sturm_chain(), &lo, &hi) != 1 {
            return None;
        }
        Some(Self::new_unchecked(poly, lo, hi))
    }

    pub fn from_rational(q: Rational) -> Self {
        let one = Rational::one();
        AlgebraicReal {
            poly: UPoly::new(vec![-q.clone(), one.clone()]),
            lo: &q - &one,
            hi: &q + &one,
        }
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }
    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }
    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.poly.deg() == 1 {
            let c = self.poly.coeffs();
            Some(-&c[0] / &c[1])
        } else {
            None
        }
    }

    /// Halve the isolating interval.
    pub fn bisect(&mut self) {
        if let Some(q) = self.as_rational() {
            let w = (&self.hi - &self.lo) / Rational::from_integer(BigInt::from(4));
            self.lo = &q - &w;
            self.hi = &q + &w;
            return;
        }
        // The root is simple and alone in the interval, so a sign change
        // locates it.
        let m = split_point(&self.poly, &self.lo, &self.hi);
        if self.poly.eval(&self.lo).sign() != self.poly.eval(&m).sign() {
            self.hi = m;
        } else {
            self.lo = m;
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while &self.hi - &self.lo > *width {
            self.bisect();
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn to_f64(&self) -> f64 {
        let mut r = self.clone();
        r.refine_to(&Rational::new(BigInt::one(), BigInt::from(1u64 << 52)));
        ((&r.lo + &r.hi) / Rational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }

    /// Midpoint of an interval of width `2^-120`, split as `hi + lo`.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let mut r = self.clone();
        r.refine_to(&Rational::new(BigInt::one(), BigInt::one() << 120u32));
        let mid = (&r.lo + &r.hi) / Rational::from_integer(BigInt::from(2));
        let hi = mid.to_f64().unwrap_or(f64::NAN);
        let lo = Rational::from_float(hi).map_or(0.0, |h| (mid - h).to_f64().unwrap_or(0.0));
        (hi, lo)
    }

    /// Exact sign of `p` at this number.
    pub fn sign_at(&self, p: &UPoly) -> i8 {
        if p.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return p.eval(&q).sign();
        }
        let g = p.gcd(&self.poly);
        if g.deg() > 0 && sturm_count(&g.sturm_chain(), &self.lo, &self.hi) == 1 {
            return 0;
        }
        // p has no root at this number; shrink until p has none in the interval.
        let ps = p.squarefree_part();
        let chain = ps.sturm_chain();
        let mut me = self.clone();
        loop {
            let ends_ok = !ps.eval(&me.lo).is_zero() && !ps.eval(&me.hi).is_zero();
            if ends_ok && sturm_count(&chain, &me.lo, &me.hi) == 0 {
                return p.eval(&me.lo).sign();
            }
            me.bisect();
        }
    }

    /// Decimal-grid isolating interval `[k/10^j, (k+1)/10^j]` with the
    /// smallest `j >= 1`; used for stable serialization.
    pub fn canonical_interval(&self) -> (Rational, Rational) {
        if let Some(q) = self.as_rational() {
            let step = Rational::new(BigInt::one(), BigInt::from(10));
            return (&q - &step, &q + &step);
        }
        let chain = self.poly.sturm_chain();
        let mut me = self.clone();
        let mut j = 1u32;
        loop {
            let scale = Rational::from_integer(BigInt::from(10u32).pow(j));
            let step = Rational::one() / &scale;
            me.refine_to(&(&step / Rational::from_integer(BigInt::from(4))));
            let k = (&me.lo * &scale).floor();
            let lo = &k / &scale;
            let hi = &lo + &step;
            if hi >= me.hi
                && !self.poly.eval(&lo).is_zero()
                && !self.poly.eval(&hi).is_zero()
                && sturm_count(&chain, &lo, &hi) == 1
            {
                return (lo, hi);
            }
            j += 1;
        }
    }

    /// Same number, re-expressed by a smaller defining polynomial when a
    /// rational root or a coprime piece of the polynomial can be split off.
    pub fn simplified(&self) -> Self {
        if self.poly.deg() <= 1 {
            return self.clone();
        }
        for r in self.poly.rational_roots() {
            if r > self.lo && r < self.hi {
                return AlgebraicReal::from_rational(r);
            }
        }
        let mut p = self.poly.clone();
        for r in self.poly.rational_roots() {
            p = p.exact_div(&UPoly::new(vec![-r, Rational::one()]));
        }
        AlgebraicReal { poly: p.monic(), lo: self.lo.clone(), hi: self.hi.clone() }
    }

    /// Restrict to a factor `g` of the defining polynomial when `g` carries
    /// the root.
    /// The same number with its minimal polynomial over `Q`.
    pub fn minimal(&self) -> Self {
        let s = self.simplified();
        if s.poly.deg() <= 1 {
            return s;
        }
        let lo_sign = |f: &UPoly| f.eval(&s.lo).sign();
        let hi_sign = |f: &UPoly| f.eval(&s.hi).sign();
        // Exactly one factor has its (simple) root inside the interval.
        let f = factor_squarefree(&s.poly)
            .into_iter()
            .find(|f| lo_sign(f) != hi_sign(f))
            .expect("one factor changes sign");
        AlgebraicReal { poly: f, lo: s.lo, hi: s.hi }
    }

    pub fn restrict(&self, g: &UPoly) -> Option<Self> {
        if g.deg() == 0 || !g.divides(&self.poly) {
            return None;
        }
        if sturm_count(&g.sturm_chain(), &self.lo, &self.hi) == 1 {
            Some(AlgebraicReal { poly: g.monic(), lo: self.lo.clone(), hi: self.hi.clone() })
        } else {
            None
        }
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        if self.equals(o) {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            a.bisect();
            b.bisect();
        }
    }

    pub fn equals(&self, o: &Self) -> bool {
        let g = self.poly.gcd(&o.poly);
        if g.deg() == 0 {
            return false;
        }
        let lo = if self.lo > o.lo { &self.lo } else { &o.lo };
        let hi = if self.hi < o.hi { &self.hi } else { &o.hi };
        // Endpoints come from the two intervals, so they are not roots of g.
        // A root of g in the overlap is each number's unique root.
        lo < hi && sturm_count(&g.sturm_chain(), lo, hi) >= 1
    }

    pub fn is_positive(&self) -> bool {
        self.sign_at(&UPoly::var()) > 0
    }
    pub fn is_zero(&self) -> bool {
        self.sign_at(&UPoly::var()) == 0
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let (lo, hi) = self.canonical_interval();
        write!(f, "root of {} in [{lo}, {hi}]", self.poly)
    }
}

/// Distinct real roots of a nonzero polynomial with multiplicities, sorted
/// ascending with pairwise disjoint intervals.
pub fn isolate_real_roots(f: &UPoly) -> Vec<RealRoot> {
    let mut out: Vec<RealRoot> = Vec::new();
    for (g, m) in f.squarefree_decomposition() {
        for (lo, hi) in isolate(&g) {
            let v = AlgebraicReal::new_unchecked(g.clone(), lo, hi).simplified();
            out.push(RealRoot { value: v, multiplicity: m });
        }
    }
    separate(&mut out);
    out.sort_by(|a, b| a.value.cmp_value(&b.value));
    out
}

/// Refine until no two isolating intervals overlap.
fn separate(v: &mut [RealRoot]) {
    loop {
        let mut clash = None;
        'outer: for i in 0..v.len() {
            for j in i + 1..v.len() {
                let (a, b) = (&v[i].value, &v[j].value);
                if a.lo < b.hi && b.lo < a.hi {
                    clash = Some((i, j));
                    break 'outer;
                }
            }
        }
        match clash {
            None => return,
            Some((i, j)) => {
                v[i].value.bisect();
                v[j].value.bisect();
            }
        }
    }
}

/// Sign of the rational number `q` (convenience for callers working with
/// plain rationals).
pub fn sign_q(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl<C: Coef> Poly<C> {
    /// Isolating intervals of the distinct real roots, with multiplicities.
    pub fn real_root_intervals(&self) -> Vec<(Poly<C>, Rational, Rational, usize)> {
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            for (lo, hi) in isolate(&g) {
                out.push((g.clone(), lo, hi, m));
            }
        }
        out
    }
}

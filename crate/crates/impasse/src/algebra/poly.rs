//! Dense univariate polynomials over an exact coefficient type.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::Rational;

/// Exact coefficient arithmetic needed by the univariate tools.
///
/// `sign` must be exact; `abs_bound` only needs to be a valid upper bound.
pub trait Coef: Clone + fmt::Debug + PartialEq + Zero + One {
    fn from_rational(q: Rational) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
    fn sign(&self) -> i8;
    fn abs_bound(&self) -> Rational;

    fn div(&self, o: &Self) -> Self {
        self.times(&o.inv())
    }
    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }
}

impl Coef for BigRational {
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn abs_bound(&self) -> Rational {
        self.abs()
    }
}

/// Polynomial `c[0] + c[1] t + ...`, never storing trailing zeros.
#[derive(Clone, Debug)]
pub struct Poly<C: Coef> {
    c: Vec<C>,
}

pub type UPoly = Poly<Rational>;

impl<C: Coef> PartialEq for Poly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.c.len() == o.c.len() && self.c.iter().zip(&o.c).all(|(a, b)| a == b)
    }
}

impl<C: Coef> Poly<C> {
    pub fn new(mut c: Vec<C>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }
    pub fn zero() -> Self {
        Poly { c: vec![] }
    }
    pub fn one() -> Self {
        Poly::constant(C::one())
    }
    pub fn constant(a: C) -> Self {
        Poly::new(vec![a])
    }
    /// The indeterminate `t`.
    pub fn var() -> Self {
        Poly::new(vec![C::zero(), C::one()])
    }
    pub fn monomial(a: C, d: usize) -> Self {
        let mut c = vec![C::zero(); d + 1];
        c[d] = a;
        Poly::new(c)
    }
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&n| C::from_int(n)).collect())
    }
    pub fn coeffs(&self) -> &[C] {
        &self.c
    }
    pub fn into_coeffs(self) -> Vec<C> {
        self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    pub fn coeff(&self, i: usize) -> C {
        self.c.get(i).cloned().unwrap_or_else(C::zero)
    }
    pub fn lead(&self) -> C {
        self.c.last().cloned().unwrap_or_else(C::zero)
    }
    /// Lowest power of `t` dividing the polynomial.
    pub fn order(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect())
    }
    pub fn neg(&self) -> Self {
        Poly { c: self.c.iter().map(|x| x.negate()).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![C::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].plus(&a.times(b));
            }
        }
        Poly::new(c)
    }
    pub fn scale(&self, a: &C) -> Self {
        Poly::new(self.c.iter().map(|x| x.times(a)).collect())
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![C::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead().inv();
        self.scale(&l)
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let li = d.lead().inv();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![C::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = r[i + dd].times(&li);
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[i + j] = r[i + j].minus(&f.times(b));
            }
            // Force exact cancellation of the eliminated term.
            r[i + dd] = C::zero();
            q[i] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }
    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }
    /// Exact quotient; panics on a nonzero remainder.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
    pub fn divides(&self, f: &Self) -> bool {
        f.rem(self).is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lead().inv();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.times(&C::from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for a in self.c.iter().rev() {
            acc = acc.times(x).plus(a);
        }
        acc
    }
    pub fn eval_q(&self, x: &Rational) -> C {
        self.eval(&C::from_rational(x.clone()))
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(a.clone()));
        }
        acc
    }

    /// `self(t + a)`.
    pub fn taylor_shift(&self, a: &C) -> Self {
        self.compose(&Poly::new(vec![a.clone(), C::one()]))
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Yun's algorithm: `self = lead * prod f_i^i` with squarefree, pairwise
    /// coprime monic `f_i`. Returns `(f_i, i)` for the non-constant factors.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let mut a = f.gcd(&d);
        let mut b = f.exact_div(&a);
        let mut c = d.exact_div(&a);
        let mut i = 1;
        loop {
            let db = b.derivative();
            let e = c.sub(&db);
            if e.is_zero() {
                if b.deg() > 0 {
                    out.push((b.monic(), i));
                }
                break;
            }
            a = b.gcd(&e);
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            c = e.exact_div(&a);
            i += 1;
            if b.deg() == 0 {
                break;
            }
        }
        out
    }

    /// Multiplicity of `x` as a root (0 when not a root; `None` for the zero
    /// polynomial).
    pub fn root_multiplicity(&self, x: &C) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.eval(x).is_zero() {
            m += 1;
            p = p.derivative();
        }
        Some(m)
    }

    /// Resultant by the Euclidean recurrence.
    pub fn resultant(&self, o: &Self) -> C {
        if self.is_zero() || o.is_zero() {
            return C::zero();
        }
        let (da, db) = (self.deg(), o.deg());
        if db == 0 {
            return pow_c(&o.lead(), da);
        }
        if da == 0 {
            return pow_c(&self.lead(), db);
        }
        let r = self.rem(o);
        if r.is_zero() {
            return C::zero();
        }
        let dr = r.deg();
        let mut res = pow_c(&o.lead(), da - dr).times(&o.resultant(&r));
        if da % 2 == 1 && db % 2 == 1 {
            res = res.negate();
        }
        res
    }

    /// Sturm chain of a squarefree polynomial.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        chain
    }

    /// Upper bound on the absolute value of every complex root.
    pub fn root_bound(&self) -> Rational {
        let n = self.deg();
        let l = self.lead();
        let mut m = Rational::zero();
        for a in &self.c[..n] {
            let b = a.div(&l).abs_bound();
            if b > m {
                m = b;
            }
        }
        m + Rational::one()
    }

    pub fn map<D: Coef>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.c.iter().map(f).collect())
    }
}

fn pow_c<C: Coef>(a: &C, e: usize) -> C {
    let mut r = C::one();
    for _ in 0..e {
        r = r.times(a);
    }
    r
}

/// Sign variations of a Sturm chain evaluated at a rational point.
fn variations<C: Coef>(chain: &[Poly<C>], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in chain {
        let s = p.eval_q(x).sign();
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Number of distinct real roots of a squarefree `p` in `(lo, hi]`, given its
/// Sturm chain.
pub fn sturm_count<C: Coef>(chain: &[Poly<C>], lo: &Rational, hi: &Rational) -> usize {
    let a = variations(chain, lo);
    let b = variations(chain, hi);
    a.saturating_sub(b)
}

/// Isolating intervals `(lo, hi)` for the real roots of a squarefree `p`,
/// sorted ascending. Endpoints are never roots and each open interval holds
/// exactly one root.
pub fn isolate<C: Coef>(p: &Poly<C>) -> Vec<(Rational, Rational)> {
    if p.deg() == 0 {
        return vec![];
    }
    let chain = p.sturm_chain();
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm_count(&chain, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = split_point(p, &lo, &hi);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// A rational strictly inside `(lo, hi)`, near the midpoint, that is not a
/// root of `p`.
pub fn split_point<C: Coef>(p: &Poly<C>, lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    let mut k = 0i64;
    loop {
        // Try 1/2, 1/2 + 1/64, 1/2 - 1/64, 1/2 + 2/64, ...
        let off = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        let f = Rational::new(BigInt::from(32 + off), BigInt::from(64));
        let m = lo + &w * f;
        if !p.eval_q(&m).is_zero() {
            return m;
        }
        k += 1;
    }
}

/// Newton interpolation through `(x_i, y_i)` with distinct `x_i`.
pub fn interpolate(pts: &[(Rational, Rational)]) -> UPoly {
    let n = pts.len();
    let xs: Vec<Rational> = pts.iter().map(|p| p.0.clone()).collect();
    let mut dd: Vec<Rational> = pts.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UPoly::zero();
    for i in (0..n).rev() {
        acc = acc
            .mul(&UPoly::new(vec![-xs[i].clone(), Rational::one()]))
            .add(&UPoly::constant(dd[i].clone()));
    }
    acc
}

impl UPoly {
    /// Scale to a primitive integer polynomial with positive leading term.
    pub fn primitive_integer(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut l = BigInt::one();
        for a in &self.c {
            l = num::integer::lcm(l, a.denom().clone());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for a in &ints {
            g = num::integer::gcd(g, a.clone());
        }
        if self.lead().is_negative() {
            g = -g;
        }
        UPoly::new(ints.into_iter().map(|a| Rational::from_integer(a / &g)).collect())
    }

    /// Rational roots, found from the integer form: a root `p/q` has `q`
    /// dividing the leading coefficient, so `lead * root` is an integer.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let f = self.squarefree_part();
        if f.deg() == 0 {
            return vec![];
        }
        let z = f.primitive_integer();
        if f.deg() > 1 && !z.c[0].is_zero() && !roots_mod_small_primes(&z) {
            return vec![];
        }
        let lead = z.lead();
        let chain = f.sturm_chain();
        let mut out = Vec::new();
        for (mut lo, mut hi) in isolate(&f) {
            while (&hi - &lo) * &lead > Rational::one() {
                let m = split_point(&f, &lo, &hi);
                if sturm_count(&chain, &lo, &m) == 1 {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            // At most one multiple of 1/lead fits strictly inside.
            let n = (&lo * &lead).floor() + Rational::one();
            let cand = n / &lead;
            if cand > lo && cand < hi && f.eval(&cand).is_zero() {
                out.push(cand);
            }
        }
        out
    }
}

const SMALL_PRIMES: [u64; 30] = [
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227,
    229, 233, 239, 241, 251, 257,
];

/// False when some small prime not dividing the leading coefficient leaves
/// the integer polynomial `z` without roots mod p; then `z` has no rational
/// root. A rational root `a/b` has `b | lead`, so it reduces to a root mod p.
fn roots_mod_small_primes(z: &UPoly) -> bool {
    let ints: Vec<BigInt> = z.c.iter().map(|a| a.to_integer()).collect();
    for &p in &SMALL_PRIMES {
        let big = BigInt::from(p);
        let residues: Vec<u64> = ints
            .iter()
            .map(|a| {
                let r = a % &big;
                let r = if r.is_negative() { r + &big } else { r };
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect();
        if residues.last() == Some(&0) {
            continue;
        }
        let has_root = (0..p).any(|x| residues.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0);
        if !has_root {
            return false;
        }
    }
    true
}

impl fmt::Display for UPoly {
    /// Integer-normalized form in `t`, e.g. `3*t^2-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.primitive_integer();
        if z.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..z.c.len()).rev() {
            let a = z.c[i].to_integer();
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let m = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{m}")?,
                _ => {
                    if !m.is_one() {
                        write!(f, "{m}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn squarefree_part_drops_repeated_factor() {
        // (t-1)^2 (t+2)
        let f = UPoly::from_ints(&[-1, 1]).pow(2).mul(&UPoly::from_ints(&[2, 1]));
        let expected = UPoly::from_ints(&[-1, 1]).mul(&UPoly::from_ints(&[2, 1]));
        assert_eq!(f.squarefree_part(), expected);
    }

    #[test]
    fn yun_reports_multiplicities() {
        let f = UPoly::var().pow(3).mul(&UPoly::from_ints(&[1, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(UPoly::from_ints(&[1, 1]), 1), (UPoly::var(), 3)]);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(t-1, t-3) = 1 - 3 up to sign convention: Res(a,b) = prod b(roots of a)
        let a = UPoly::from_ints(&[-1, 1]);
        let b = UPoly::from_ints(&[-3, 1]);
        assert_eq!(a.resultant(&b), q(-2, 1));
        assert_eq!(a.resultant(&a), q(0, 1));
    }

    #[test]
    fn isolation_of_two_thirds() {
        let f = UPoly::new(vec![q(-2, 3), q(0, 1), q(1, 1)]);
        let iv = isolate(&f);
        assert_eq!(iv.len(), 2);
        assert!(iv[0].1 <= q(0, 1) && iv[1].0 >= q(0, 1));
    }

    #[test]
    fn rational_roots_found() {
        let f = UPoly::from_ints(&[-3, 2]).mul(&UPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(f.rational_roots(), vec![q(3, 2)]);
    }

    #[test]
    fn modular_filter() {
        // x^4 - 3x + 1 has no rational root; a root 7/101 survives even
        // though 101 divides its denominator
        assert!(!roots_mod_small_primes(&UPoly::from_ints(&[1, -3, 0, 0, 1])));
        let f = UPoly::from_ints(&[-7, 101]).mul(&UPoly::from_ints(&[1, -3, 0, 0, 1]));
        assert!(roots_mod_small_primes(&f));
        assert_eq!(f.rational_roots(), vec![q(7, 101)]);
        // (x^2 - 2)(x^2 - 3)(x^2 - 6) has a root mod every odd prime
        let g = UPoly::from_ints(&[-2, 0, 1]).mul(&UPoly::from_ints(&[-3, 0, 1])).mul(&UPoly::from_ints(&[-6, 0, 1]));
        assert!(roots_mod_small_primes(&g));
        assert!(g.rational_roots().is_empty());
    }

    #[test]
    fn display_integer_form() {
        let f = UPoly::new(vec![q(-2, 3), q(0, 1), q(1, 1)]);
        assert_eq!(f.to_string(), "3*t^2-2");
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = UPoly::from_ints(&[1, -2, 0, 5]);
        let pts: Vec<_> = (0..4).map(|i| (q(i, 1), f.eval(&q(i, 1)))).collect();
        assert_eq!(interpolate(&pts), f);
    }
}

//! Factorization of squarefree rational polynomials into irreducibles.
//!
//! Zassenhaus: factor mod a small prime, Hensel-lift to a power of it past
//! the Mignotte bound, then recombine lifted factors by trial division.

use num::{BigInt, Integer, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::UPoly;
use super::Rational;

/// Polynomial over `Z/p`, low degree first, no trailing zeros.
type Zp = Vec<u64>;

#[derive(Clone, Copy)]
struct ModP(u64);

impl ModP {
    fn trim(mut a: Zp) -> Zp {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn deg(a: &Zp) -> usize {
        a.len().saturating_sub(1)
    }

    fn reduce(self, a: &[BigInt]) -> Zp {
        let p = BigInt::from(self.0);
        Self::trim(a.iter().map(|c| c.mod_floor(&p).try_into().expect("residue fits")).collect())
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        a %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.0;
            }
            a = a * a % self.0;
            e >>= 1;
        }
        r
    }

    fn sub(self, a: &Zp, b: &Zp) -> Zp {
        let n = a.len().max(b.len());
        let get = |v: &Zp, i: usize| v.get(i).copied().unwrap_or(0);
        Self::trim((0..n).map(|i| (get(a, i) + self.0 - get(b, i)) % self.0).collect())
    }

    fn add(self, a: &Zp, b: &Zp) -> Zp {
        let n = a.len().max(b.len());
        let get = |v: &Zp, i: usize| v.get(i).copied().unwrap_or(0);
        Self::trim((0..n).map(|i| (get(a, i) + get(b, i)) % self.0).collect())
    }

    fn mul(self, a: &Zp, b: &Zp) -> Zp {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % self.0;
            }
        }
        Self::trim(r)
    }

    fn divrem(self, a: &Zp, b: &Zp) -> (Zp, Zp) {
        let mut r = a.clone();
        if r.len() < b.len() {
            return (vec![], r);
        }
        let li = self.inv(*b.last().expect("nonzero divisor"));
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for i in (0..q.len()).rev() {
            let c = r[i + b.len() - 1] * li % self.0;
            q[i] = c;
            for (j, y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + self.0 - c * y % self.0) % self.0;
            }
        }
        (Self::trim(q), Self::trim(r))
    }

    fn rem(self, a: &Zp, b: &Zp) -> Zp {
        self.divrem(a, b).1
    }

    fn monic(self, a: &Zp) -> Zp {
        let li = self.inv(*a.last().expect("nonzero"));
        a.iter().map(|c| c * li % self.0).collect()
    }

    fn gcd(self, a: &Zp, b: &Zp) -> Zp {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    /// `(s, t)` with `s a + t b = 1`, for coprime `a`, `b`.
    fn bezout(self, a: &Zp, b: &Zp) -> (Zp, Zp) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1], vec![]);
        let (mut t0, mut t1) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            (r0, r1, s0, s1, t0, t1) = (r1, r, s1, s2, t1, t2);
        }
        debug_assert_eq!(r0.len(), 1, "not coprime");
        let li = self.inv(r0[0]);
        let scale = |v: &Zp| -> Zp { v.iter().map(|c| c * li % self.0).collect() };
        (scale(&s0), scale(&t0))
    }

    /// `base^e mod m`, with `e` given as a big integer.
    fn powmod(self, base: &Zp, e: &BigInt, m: &Zp) -> Zp {
        let mut r: Zp = vec![1];
        let mut b = self.rem(base, m);
        for i in 0..e.bits() {
            if e.bit(i) {
                r = self.rem(&self.mul(&r, &b), m);
            }
            b = self.rem(&self.mul(&b, &b), m);
        }
        r
    }

    fn derivative(self, a: &Zp) -> Zp {
        Self::trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % self.0) * c % self.0).collect())
    }

    /// Distinct-degree factorization of a monic squarefree `f`.
    fn ddf(self, f: &Zp) -> Vec<(usize, Zp)> {
        let x: Zp = vec![0, 1];
        let mut out = Vec::new();
        let mut f = f.clone();
        let mut h = x.clone();
        let mut d = 1;
        while Self::deg(&f) >= 2 * d {
            h = self.powmod(&h, &BigInt::from(self.0), &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            if Self::deg(&g) > 0 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((d, g));
            }
            d += 1;
        }
        if Self::deg(&f) > 0 {
            out.push((Self::deg(&f), f));
        }
        out
    }

    /// Cantor-Zassenhaus split of a product of degree-`d` irreducibles.
    fn edf(self, g: &Zp, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Zp>) {
        let n = Self::deg(g);
        if n == d {
            out.push(g.clone());
            return;
        }
        let e = (BigInt::from(self.0).pow(d as u32) - 1) / 2;
        loop {
            let a: Zp = Self::trim((0..n).map(|_| rng.gen_range(0..self.0)).collect());
            if Self::deg(&a) == 0 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, g), &vec![1]);
            let c = self.gcd(g, &b);
            if Self::deg(&c) > 0 && Self::deg(&c) < n {
                self.edf(&c, d, rng, out);
                self.edf(&self.divrem(g, &c).0, d, rng, out);
                return;
            }
        }
    }

    fn factor(self, f: &Zp) -> Vec<Zp> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        let mut out = Vec::new();
        for (d, g) in self.ddf(f) {
            self.edf(&g, d, &mut rng, &mut out);
        }
        out
    }
}

const PRIMES: [u64; 24] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn big(a: &Zp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn mod_z(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

/// Lift a monic `g` with `f = g h (mod p)` to `f = G H (mod p^k)`, where `f`
/// is monic over `Z` and `pk = p^k`; returns `G`.
fn hensel_lift(f: &[BigInt], g: &Zp, h: &Zp, m: ModP, pk: &BigInt) -> Vec<BigInt> {
    let (s, t) = m.bezout(g, h);
    let p = BigInt::from(m.0);
    let (mut gz, mut hz) = (big(g), big(h));
    let mut q = p.clone();
    while &q < pk {
        let gh = mul_z(&gz, &hz);
        let e: Vec<BigInt> = (0..f.len()).map(|i| (&f[i] - gh.get(i).cloned().unwrap_or_default()) / &q).collect();
        let e = m.reduce(&e);
        let (quo, dg) = m.divrem(&m.mul(&t, &e), g);
        let dh = m.add(&m.mul(&s, &e), &m.mul(&quo, h));
        for (i, c) in dg.iter().enumerate() {
            gz[i] += &q * c;
        }
        for (i, c) in dh.iter().enumerate() {
            if i < hz.len() {
                hz[i] += &q * c;
            }
        }
        q *= &p;
    }
    mod_z(&gz, pk)
}

/// Exact quotient of integer polynomials with monic divisor, if any.
fn div_monic(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = r[i + b.len() - 1].clone();
        for (j, y) in b.iter().enumerate() {
            r[i + j] -= &c * y;
        }
        q[i] = c;
    }
    r.iter().all(Zero::is_zero).then_some(q)
}

/// Irreducible factors over `Z` of a monic squarefree integer polynomial.
fn factor_monic(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Prime with the fewest modular factors among the first few good ones.
    let mut best: Option<(ModP, Vec<Zp>)> = None;
    let mut tried = 0;
    for &p in &PRIMES {
        let m = ModP(p);
        let fp = m.reduce(f);
        if m.gcd(&fp, &m.derivative(&fp)).len() != 1 {
            continue;
        }
        let count: usize = m.ddf(&fp).iter().map(|(d, g)| ModP::deg(g) / d).sum();
        if count == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, fs)| count < fs.len()) {
            best = Some((m, m.factor(&fp)));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (m, modular) = best.expect("some prime keeps the polynomial squarefree");
    // Mignotte: factor coefficients are below 2^n |f|_2.
    let norm = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b).sqrt() + 1;
    let bound = (norm << n) * 2;
    let p = BigInt::from(m.0);
    let mut pk = p.clone();
    while pk <= bound {
        pk *= &p;
    }
    let fp = m.reduce(f);
    let mut lifted: Vec<Vec<BigInt>> = modular
        .iter()
        .map(|g| {
            let h = m.divrem(&fp, g).0;
            hensel_lift(f, g, &h, m, &pk)
        })
        .collect();
    let half = &pk / 2;
    let symmetric = |a: Vec<BigInt>| -> Vec<BigInt> { a.into_iter().map(|c| if c > half { c - &pk } else { c }).collect() };
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let r = lifted.len();
        for mask in 0u64..(1u64 << r) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let chosen = (0..r).filter(|i| mask >> i & 1 == 1);
            let g = symmetric(chosen.fold(vec![BigInt::one()], |acc, i| mod_z(&mul_z(&acc, &lifted[i]), &pk)));
            if !g[0].is_zero() && !rest[0].is_multiple_of(&g[0]) {
                continue;
            }
            if let Some(q) = div_monic(&rest, &g) {
                out.push(g);
                rest = q;
                lifted = (0..r).filter(|i| mask >> i & 1 == 0).map(|i| lifted[i].clone()).collect();
                continue 'outer;
            }
        }
        size += 1;
    }
    out.push(rest);
    out
}

/// Monic irreducible factors over `Q` of a squarefree polynomial.
pub fn factor_squarefree(f: &UPoly) -> Vec<UPoly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let z = f.primitive_integer();
    let c: Vec<BigInt> = z.coeffs().iter().map(|q| q.to_integer()).collect();
    let n = c.len() - 1;
    let lead = c[n].clone();
    // F(x) = lead^(n-1) f(x / lead) is monic with integer coefficients.
    let mut mono = vec![BigInt::zero(); n + 1];
    let mut scale = BigInt::one();
    for i in (0..n).rev() {
        mono[i] = &c[i] * &scale;
        scale *= &lead;
    }
    mono[n] = BigInt::one();
    factor_monic(&mono)
        .into_iter()
        .map(|g| {
            // Back to f: G(lead x), made monic over Q.
            let mut s = BigInt::one();
            let coeffs: Vec<Rational> = g
                .iter()
                .map(|a| {
                    let v = Rational::from_integer(a * &s);
                    s *= &lead;
                    v
                })
                .collect();
            UPoly::new(coeffs).monic()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prod(fs: &[UPoly]) -> UPoly {
        fs.iter().fold(UPoly::from_ints(&[1]), |a, b| a.mul(b))
    }

    #[test]
    fn splits_into_known_factors() {
        let parts = [UPoly::from_ints(&[-2, 0, 1]), UPoly::from_ints(&[-3, 0, 1]), UPoly::from_ints(&[-6, 0, 1])];
        let mut fs = factor_squarefree(&prod(&parts));
        fs.sort_by_key(|f| f.coeff(0));
        assert_eq!(fs, vec![parts[2].clone(), parts[1].clone(), parts[0].clone()]);
    }

    #[test]
    fn irreducible_but_split_mod_every_prime() {
        // x^4 + 1 and x^4 - 10 x^2 + 1 factor mod every prime
        assert_eq!(factor_squarefree(&UPoly::from_ints(&[1, 0, 0, 0, 1])).len(), 1);
        assert_eq!(factor_squarefree(&UPoly::from_ints(&[1, 0, -10, 0, 1])).len(), 1);
    }

    #[test]
    fn non_monic_input() {
        let a = UPoly::from_ints(&[-7, 0, 3]);
        let b = UPoly::from_ints(&[1, -5, 0, 2]);
        let fs = factor_squarefree(&a.mul(&b));
        assert_eq!(fs.len(), 2);
        assert_eq!(prod(&fs), a.mul(&b).monic());
        assert!(fs.contains(&a.monic()) && fs.contains(&b.monic()));
    }

    #[test]
    fn norm_from_a_fold() {
        let f = UPoly::from_ints(&[-1, 0, -3, 0, -1, 0, 1]);
        let fs = factor_squarefree(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&UPoly::from_ints(&[1, 0, 1])));
        assert!(fs.contains(&UPoly::from_ints(&[-1, 0, -2, 0, 1])));
    }
}

//! Canonical text form of polynomials and systems.

use num::{One, Signed, Zero};

use crate::algebra::{BiPoly, Exp, Num, Rational, UPoly};
use crate::system::ConstrainedSystem;

fn monomial_text(e: Exp) -> String {
    let mut parts = Vec::new();
    for (v, k) in [("x", e.0), ("y", e.1)] {
        match k {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

fn rational_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A field element as a polynomial in the generator `t`.
pub fn upoly_text(p: &UPoly, var: &str) -> String {
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&rational_text(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", rational_text(&a), mono));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Sign and magnitude text of a coefficient. Algebraic coefficients are
/// printed as `(...)` in `t` and treated as positive.
fn coef_parts(c: &Num) -> (bool, String, bool) {
    match c.as_rational() {
        Some(q) => {
            let a = q.abs();
            (q.is_negative(), rational_text(&a), a.is_one())
        }
        None => (false, format!("({})", upoly_text(&c.as_poly(), "t")), false),
    }
}

/// Terms by increasing total degree, higher `x` power first within a degree.
pub fn poly_to_string(p: &BiPoly) -> String {
    let mut terms: Vec<(Exp, Num)> = p.terms().map(|(e, c)| (*e, c.clone())).collect();
    terms.sort_by_key(|a| (a.0 .0 + a.0 .1, -a.0 .0));
    let mut out = String::new();
    for (e, c) in terms {
        let (neg, mag, unit) = coef_parts(&c);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = monomial_text(e);
        if mono.is_empty() {
            out.push_str(&mag);
        } else if unit {
            out.push_str(&mono);
        } else if mag.contains('/') && !mag.starts_with('(') {
            out.push_str(&format!("({mag})*{mono}"));
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_system(sys: &ConstrainedSystem) -> String {
    format!(
        "delta = {}; P = {}; Q = {};",
        poly_to_string(&sys.delta),
        poly_to_string(&sys.p()),
        poly_to_string(&sys.q())
    )
}

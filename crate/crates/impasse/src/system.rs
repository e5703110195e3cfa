//! One chart of a constrained system: impasse polynomial, adjoint field in the
//! logarithmic basis, and divisor bookkeeping.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{gcd_bipoly, is_squarefree, squarefree_part, BiPoly, Num, NumberField};

/// Which coordinate axes are components of the exceptional divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DivisorFlag {
    None,
    Ex,
    Ey,
    Exy,
}

impl DivisorFlag {
    pub fn from_axes(x: bool, y: bool) -> Self {
        match (x, y) {
            (false, false) => DivisorFlag::None,
            (true, false) => DivisorFlag::Ex,
            (false, true) => DivisorFlag::Ey,
            (true, true) => DivisorFlag::Exy,
        }
    }
    /// Is `{x = 0}` part of the divisor?
    pub fn has_x(self) -> bool {
        matches!(self, DivisorFlag::Ex | DivisorFlag::Exy)
    }
    /// Is `{y = 0}` part of the divisor?
    pub fn has_y(self) -> bool {
        matches!(self, DivisorFlag::Ey | DivisorFlag::Exy)
    }
    pub fn swap(self) -> Self {
        DivisorFlag::from_axes(self.has_y(), self.has_x())
    }
}

impl fmt::Display for DivisorFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DivisorFlag::None => "none",
            DivisorFlag::Ex => "Ex",
            DivisorFlag::Ey => "Ey",
            DivisorFlag::Exy => "Exy",
        };
        f.write_str(s)
    }
}

/// `X = a x d/dx + b y d/dy` with `a` allowed an `x^-1` and `b` a `y^-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogVectorField {
    a: BiPoly,
    b: BiPoly,
}

impl LogVectorField {
    /// Logarithmic form of the polynomial field `P d/dx + Q d/dy`.
    pub fn from_pq(p: &BiPoly, q: &BiPoly) -> Self {
        LogVectorField {
            a: p.shift((-1, 0)).with_lower((-1, 0)),
            b: q.shift((0, -1)).with_lower((0, -1)),
        }
    }

    /// Build from log components; panics if the exponent bounds are violated.
    pub fn new(a: BiPoly, b: BiPoly) -> Self {
        LogVectorField { a: a.with_lower((-1, 0)), b: b.with_lower((0, -1)) }
    }

    pub fn a(&self) -> &BiPoly {
        &self.a
    }
    pub fn b(&self) -> &BiPoly {
        &self.b
    }
    /// `P = a x`.
    pub fn p(&self) -> BiPoly {
        self.a.shift((1, 0))
    }
    /// `Q = b y`.
    pub fn q(&self) -> BiPoly {
        self.b.shift((0, 1))
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    pub fn swap(&self) -> Self {
        LogVectorField::new(self.b.swap(), self.a.swap())
    }
    pub fn map_coeffs(&self, f: impl Fn(&Num) -> Num) -> Self {
        LogVectorField::new(self.a.map_coeffs(&f), self.b.map_coeffs(&f))
    }
}

/// `a` and `b` of the log field (equivalent to `(P, Q)`).
pub fn to_log_basis(p: &BiPoly, q: &BiPoly) -> LogVectorField {
    LogVectorField::from_pq(p, q)
}

/// `delta * X` in logarithmic components.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxField {
    pub a: BiPoly,
    pub b: BiPoly,
}

impl AuxField {
    /// Union of the exponent sets of both components.
    pub fn support(&self) -> std::collections::BTreeSet<(i32, i32)> {
        self.a.support().into_iter().chain(self.b.support()).collect()
    }
}

/// One chart of the triple (manifold, foliation, impasse ideal).
#[derive(Clone, Debug)]
pub struct ConstrainedSystem {
    pub delta: BiPoly,
    pub field: LogVectorField,
    pub divisor: DivisorFlag,
    pub coeff_field: Option<Arc<NumberField>>,
    pub trace: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("the matrix determinant is identically zero")]
    ZeroDeterminant,
    #[error("the vector field is identically zero")]
    ZeroField,
}

/// Problems with the standing hypotheses.
#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    NonSquarefreeImpasse,
    /// Non-monomial (or off-divisor) common factor of `P` and `Q`.
    CommonFactor(BiPoly),
    /// The flagged axis is not invariant.
    DivisorNotInvariant(DivisorFlag),
    ZeroField,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NonSquarefreeImpasse => write!(f, "impasse polynomial is not squarefree"),
            Diagnostic::CommonFactor(g) => write!(f, "P and Q share the factor {}", crate::io::print::poly_to_string(g)),
            Diagnostic::DivisorNotInvariant(d) => write!(f, "divisor axis {d} is not invariant"),
            Diagnostic::ZeroField => write!(f, "vector field is identically zero"),
        }
    }
}

/// Warnings raised while building a system from matrix data.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixWarning {
    /// `det A` had repeated factors; they were dropped.
    RepeatedFactorsDropped(BiPoly),
    /// `det A` never vanishes: this is an ordinary differential equation.
    NoImpasse,
}

impl ConstrainedSystem {
    /// System `delta * (x', y') = (P, Q)` over the rationals, no divisor.
    pub fn new(delta: BiPoly, p: &BiPoly, q: &BiPoly) -> Self {
        let coeff_field = [&delta, p, q]
            .iter()
            .flat_map(|b| b.terms().filter_map(|(_, c)| c.field().cloned()).collect::<Vec<_>>())
            .next();
        ConstrainedSystem {
            delta,
            field: LogVectorField::from_pq(p, q),
            divisor: DivisorFlag::None,
            coeff_field,
            trace: Vec::new(),
        }
    }

    pub fn with_divisor(mut self, d: DivisorFlag) -> Self {
        self.divisor = d;
        self
    }

    pub fn p(&self) -> BiPoly {
        self.field.p()
    }
    pub fn q(&self) -> BiPoly {
        self.field.q()
    }

    /// Exchange the roles of `x` and `y`.
    pub fn swap(&self) -> Self {
        ConstrainedSystem {
            delta: self.delta.swap(),
            field: self.field.swap(),
            divisor: self.divisor.swap(),
            coeff_field: self.coeff_field.clone(),
            trace: self.trace.clone(),
        }
    }

    /// `X delta = P d(delta)/dx + Q d(delta)/dy`.
    pub fn x_delta(&self) -> BiPoly {
        self.p().mul(&self.delta.dx()).add(&self.q().mul(&self.delta.dy()))
    }

    pub fn degree(&self) -> i32 {
        self.delta.total_degree() + self.p().total_degree().max(self.q().total_degree())
    }

    /// Check the standing hypotheses.
    pub fn validate(&self) -> Vec<Diagnostic> {
        validate(self)
    }
}

/// Adjoint (adjugate) system of `A (x', y') = F`.
pub fn from_matrix(
    a: &[[BiPoly; 2]; 2],
    f: &[BiPoly; 2],
) -> Result<(ConstrainedSystem, Vec<MatrixWarning>), SystemError> {
    let det = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
    if det.is_zero() {
        return Err(SystemError::ZeroDeterminant);
    }
    let p = a[1][1].mul(&f[0]).sub(&a[0][1].mul(&f[1]));
    let q = a[0][0].mul(&f[1]).sub(&a[1][0].mul(&f[0]));
    if p.is_zero() && q.is_zero() {
        return Err(SystemError::ZeroField);
    }
    let mut warnings = Vec::new();
    let delta = if det.is_constant() {
        warnings.push(MatrixWarning::NoImpasse);
        det
    } else {
        let s = squarefree_part(&det);
        if s.total_degree() < det.total_degree() {
            warnings.push(MatrixWarning::RepeatedFactorsDropped(det.div_exact(&s).expect("divides")));
        }
        s
    };
    Ok((ConstrainedSystem::new(delta, &p, &q), warnings))
}

/// `delta * a`, `delta * b`.
pub fn auxiliary_field(sys: &ConstrainedSystem) -> AuxField {
    AuxField { a: sys.delta.mul(sys.field.a()), b: sys.delta.mul(sys.field.b()) }
}

/// Remove powers of the flagged axis variables.
pub fn strip_flagged_monomials(g: &BiPoly, d: DivisorFlag) -> BiPoly {
    let Some((mx, my)) = g.min_exps() else {
        return g.clone();
    };
    let sx = if d.has_x() { mx.max(0) } else { 0 };
    let sy = if d.has_y() { my.max(0) } else { 0 };
    g.div_monomial((sx, sy)).expect("monomial divides")
}

pub fn validate(sys: &ConstrainedSystem) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if !sys.delta.is_constant() && !is_squarefree(&sys.delta) {
        out.push(Diagnostic::NonSquarefreeImpasse);
    }
    if sys.field.is_zero() {
        out.push(Diagnostic::ZeroField);
        return out;
    }
    let g = gcd_bipoly(&sys.p(), &sys.q());
    let rest = strip_flagged_monomials(&g, sys.divisor);
    if !rest.is_constant() {
        out.push(Diagnostic::CommonFactor(g));
    }
    let ax = sys.divisor.has_x() && !sys.field.a().respects((0, 0));
    let by = sys.divisor.has_y() && !sys.field.b().respects((0, 0));
    if ax || by {
        out.push(Diagnostic::DivisorNotInvariant(DivisorFlag::from_axes(ax, by)));
    }
    out
}

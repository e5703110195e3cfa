//! Resolution trees as JSON (exact, re-importable) and as DOT graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraicReal, BiPoly, Num, NumberField, Rational, UPoly};
use crate::classify::{classify_origin, Verdict};
use crate::io::parse::{parse_upoly, ParseError};
use crate::io::print::{print_system, upoly_text};
use crate::newton::Weight;
use crate::resolve::{stats_of, ResolutionTree, Step, Stop, TreeNode};
use crate::system::{ConstrainedSystem, DivisorFlag, LogVectorField};
use crate::transform::{Axis, Transform, TransformRecord, TranslationPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

/// A real algebraic number as its primitive integer minimal polynomial in
/// `t` and a decimal isolating interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicJson {
    pub minpoly: String,
    pub interval: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: [i32; 2],
    /// Coefficient as a polynomial in the field generator `t`.
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemJson {
    pub field: Option<AlgebraicJson>,
    pub delta: Vec<TermJson>,
    /// Logarithmic components: `P = a x`, `Q = b y`.
    pub a: Vec<TermJson>,
    pub b: Vec<TermJson>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub system: String,
    pub divisor: DivisorFlag,
    pub height: i32,
    pub verdict: Verdict,
    pub step: Option<Step>,
    pub stop: Option<Stop>,
    pub deferred: Vec<AlgebraicJson>,
    pub data: SystemJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum EdgeParams {
    Shear { lambda: String },
    #[serde(rename = "blowup")]
    BlowUp { axis: Axis, sign: i8, omega: [i32; 2], level: i32 },
    Admissible { alpha: String, beta: u32 },
    Translate {
        axis: Axis,
        xi: AlgebraicJson,
        /// The point in the child's field.
        xi_child: String,
        parent_gen: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub parent: usize,
    pub child: usize,
    #[serde(flatten)]
    pub params: EdgeParams,
    pub delta_div: [i32; 2],
    pub field_div: [i32; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub root: usize,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad polynomial text: {0}")]
    Poly(#[from] ParseError),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("{0:?} is not a single isolated root")]
    NotIsolated(AlgebraicJson),
    #[error("node {0} referenced but missing, or reached twice")]
    BadNode(usize),
}

pub fn algebraic_json(v: &AlgebraicReal) -> AlgebraicJson {
    let minpoly = upoly_text(&v.poly().primitive_integer(), "t").replace(' ', "");
    let (lo, hi) = v.canonical_interval();
    AlgebraicJson { minpoly, interval: [lo.to_string(), hi.to_string()] }
}

fn num_text(c: &Num) -> String {
    upoly_text(&c.as_poly(), "t").replace(' ', "")
}

fn terms_json(p: &BiPoly) -> Vec<TermJson> {
    p.terms().map(|(e, c)| TermJson { exp: [e.0, e.1], coeff: num_text(c) }).collect()
}

fn node_json(n: &TreeNode) -> NodeJson {
    let s = &n.system;
    NodeJson {
        id: n.id,
        system: print_system(s),
        divisor: s.divisor,
        height: n.height,
        verdict: n.class.verdict,
        step: n.step,
        stop: n.stop.clone(),
        deferred: n.deferred.iter().map(algebraic_json).collect(),
        data: SystemJson {
            field: s.coeff_field.as_ref().map(|k| algebraic_json(k.root())),
            delta: terms_json(&s.delta),
            a: terms_json(s.field.a()),
            b: terms_json(s.field.b()),
            trace: s.trace.clone(),
        },
    }
}

fn edge_params(t: &Transform) -> EdgeParams {
    match t {
        Transform::Shear { lambda } => EdgeParams::Shear { lambda: num_text(lambda) },
        Transform::BlowUp { axis, sign, weight } => {
            EdgeParams::BlowUp { axis: *axis, sign: *sign, omega: [weight.wx, weight.wy], level: weight.level }
        }
        Transform::Admissible { alpha, beta } => EdgeParams::Admissible { alpha: num_text(alpha), beta: *beta },
        Transform::Translate { point, axis } => EdgeParams::Translate {
            axis: *axis,
            xi: algebraic_json(&point.value),
            xi_child: num_text(&point.xi),
            parent_gen: point.parent_gen.as_ref().map(num_text),
        },
    }
}

pub fn tree_json(tree: &ResolutionTree) -> TreeJson {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    tree.root.walk(&mut |n, _| {
        nodes.push(node_json(n));
        for c in &n.children {
            let rec = c.incoming.as_ref().expect("child has an incoming edge");
            edges.push(EdgeJson {
                parent: n.id,
                child: c.id,
                params: edge_params(&rec.transform),
                delta_div: [rec.delta_div.0, rec.delta_div.1],
                field_div: [rec.field_div.0, rec.field_div.1],
            });
        }
    });
    TreeJson { root: tree.root.id, nodes, edges }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn edge_label(t: &Transform) -> String {
    match t {
        Transform::Shear { lambda } => format!("shear {}", num_text(lambda)),
        Transform::BlowUp { axis, sign, weight } => {
            format!("blowup {axis}{} ({},{})", if *sign > 0 { '+' } else { '-' }, weight.wx, weight.wy)
        }
        Transform::Admissible { alpha, beta } => format!("admissible {} ^{beta}", num_text(alpha)),
        Transform::Translate { point, axis } => format!("translate {axis} {:.6}", point.value.to_f64()),
    }
}

/// Node and edge statements of a tree, node names prefixed by `prefix`.
pub fn dot_statements(tree: &ResolutionTree, prefix: &str) -> String {
    let mut out = String::new();
    tree.root.walk(&mut |n, _| {
        let _ = writeln!(out, "  {prefix}n{} [label=\"{}: {}\"];", n.id, n.id, dot_escape(&n.class.verdict.to_string()));
    });
    for (p, c) in tree.root.edges() {
        let rec = c.incoming.as_ref().expect("child has an incoming edge");
        let _ = writeln!(out, "  {prefix}n{} -> {prefix}n{} [label=\"{}\"];", p.id, c.id, dot_escape(&edge_label(&rec.transform)));
    }
    out
}

pub fn tree_dot(tree: &ResolutionTree) -> String {
    format!("digraph resolution {{\n{}}}\n", dot_statements(tree, ""))
}

pub fn export_tree(tree: &ResolutionTree, format: Format) -> Vec<u8> {
    match format {
        Format::Json => serde_json::to_vec_pretty(&tree_json(tree)).expect("tree serializes"),
        Format::Dot => tree_dot(tree).into_bytes(),
    }
}

/// A re-imported tree. Every node is classified afresh; `recorded` keeps the
/// verdicts found in the file.
#[derive(Clone, Debug)]
pub struct ImportedTree {
    pub tree: ResolutionTree,
    pub recorded: BTreeMap<usize, Verdict>,
}

impl ImportedTree {
    /// Ids of nodes whose fresh verdict differs from the recorded one.
    pub fn mismatches(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.tree.root.walk(&mut |n, _| {
            if self.recorded.get(&n.id) != Some(&n.class.verdict) {
                out.push(n.id)
            }
        });
        out
    }
}

fn rational(s: &str) -> Result<Rational, ImportError> {
    s.parse().map_err(|_| ImportError::Rational(s.to_string()))
}

fn algebraic(j: &AlgebraicJson) -> Result<AlgebraicReal, ImportError> {
    let p = parse_upoly(&j.minpoly, "t")?;
    AlgebraicReal::new(p, rational(&j.interval[0])?, rational(&j.interval[1])?).ok_or_else(|| ImportError::NotIsolated(j.clone()))
}

/// Number fields shared between nodes, keyed by their serialized generator.
#[derive(Default)]
struct Fields(BTreeMap<(String, [String; 2]), Arc<NumberField>>);

impl Fields {
    fn get(&mut self, j: &Option<AlgebraicJson>) -> Result<Option<Arc<NumberField>>, ImportError> {
        let Some(j) = j else { return Ok(None) };
        let key = (j.minpoly.clone(), j.interval.clone());
        if let Some(k) = self.0.get(&key) {
            return Ok(Some(k.clone()));
        }
        let k = NumberField::generated_by(&algebraic(j)?).ok_or_else(|| ImportError::NotIsolated(j.clone()))?;
        self.0.insert(key, k.clone());
        Ok(Some(k))
    }
}

fn num(text: &str, k: &Option<Arc<NumberField>>) -> Result<Num, ImportError> {
    let p: UPoly = parse_upoly(text, "t")?;
    Ok(match k {
        Some(k) => Num::from_poly(p, k),
        None => Num::Rat(p.coeff(0)),
    })
}

fn poly(terms: &[TermJson], k: &Option<Arc<NumberField>>) -> Result<BiPoly, ImportError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        out.push((num(&t.coeff, k)?, t.exp[0], t.exp[1]));
    }
    Ok(BiPoly::from_terms(out))
}

fn system(n: &NodeJson, fields: &mut Fields) -> Result<ConstrainedSystem, ImportError> {
    let k = fields.get(&n.data.field)?;
    let delta = poly(&n.data.delta, &k)?;
    let field = LogVectorField::new(poly(&n.data.a, &k)?, poly(&n.data.b, &k)?);
    Ok(ConstrainedSystem { delta, field, divisor: n.divisor, coeff_field: k, trace: n.data.trace.clone() })
}

fn record(e: &EdgeJson, parent: &ConstrainedSystem, child: &ConstrainedSystem) -> Result<TransformRecord, ImportError> {
    let transform = match &e.params {
        EdgeParams::Shear { lambda } => Transform::Shear { lambda: num(lambda, &parent.coeff_field)? },
        EdgeParams::BlowUp { axis, sign, omega, level } => {
            Transform::BlowUp { axis: *axis, sign: *sign, weight: Weight { wx: omega[0], wy: omega[1], level: *level } }
        }
        EdgeParams::Admissible { alpha, beta } => Transform::Admissible { alpha: num(alpha, &parent.coeff_field)?, beta: *beta },
        EdgeParams::Translate { axis, xi, xi_child, parent_gen } => {
            let k = &child.coeff_field;
            let point = TranslationPoint {
                value: algebraic(xi)?,
                xi: num(xi_child, k)?,
                parent_gen: parent_gen.as_deref().map(|g| num(g, k)).transpose()?,
            };
            Transform::Translate { point, axis: *axis }
        }
    };
    Ok(TransformRecord { transform, delta_div: (e.delta_div[0], e.delta_div[1]), field_div: (e.field_div[0], e.field_div[1]) })
}

pub fn tree_from_json(j: &TreeJson) -> Result<ImportedTree, ImportError> {
    let mut fields = Fields::default();
    let mut systems = BTreeMap::new();
    let mut by_id = BTreeMap::new();
    for n in &j.nodes {
        systems.insert(n.id, system(n, &mut fields)?);
        by_id.insert(n.id, n);
    }
    let mut children: BTreeMap<usize, Vec<&EdgeJson>> = BTreeMap::new();
    for e in &j.edges {
        children.entry(e.parent).or_default().push(e);
    }
    let mut recorded = BTreeMap::new();

    fn build(
        id: usize,
        incoming: Option<TransformRecord>,
        by_id: &mut BTreeMap<usize, &NodeJson>,
        systems: &BTreeMap<usize, ConstrainedSystem>,
        children: &BTreeMap<usize, Vec<&EdgeJson>>,
        recorded: &mut BTreeMap<usize, Verdict>,
    ) -> Result<TreeNode, ImportError> {
        let n = by_id.remove(&id).ok_or(ImportError::BadNode(id))?;
        let sys = systems[&id].clone();
        recorded.insert(id, n.verdict);
        let mut kids = Vec::new();
        for e in children.get(&id).into_iter().flatten() {
            let child_sys = systems.get(&e.child).ok_or(ImportError::BadNode(e.child))?;
            let rec = record(e, &sys, child_sys)?;
            kids.push(build(e.child, Some(rec), by_id, systems, children, recorded)?);
        }
        let deferred = n.deferred.iter().map(algebraic).collect::<Result<_, _>>()?;
        Ok(TreeNode {
            id,
            class: classify_origin(&sys),
            system: sys,
            incoming,
            height: n.height,
            step: n.step,
            children: kids,
            stop: n.stop.clone(),
            deferred,
        })
    }

    let root = build(j.root, None, &mut by_id, &systems, &children, &mut recorded)?;
    Ok(ImportedTree { tree: ResolutionTree { stats: stats_of(&root), root }, recorded })
}

pub fn import_tree(bytes: &[u8]) -> Result<ImportedTree, ImportError> {
    tree_from_json(&serde_json::from_slice(bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::parse_system;
    use crate::resolve::{resolve_local, Budget};
    use crate::transform::verify_pullback;

    fn cusp_fold_tree() -> ResolutionTree {
        let (sys, _) = parse_system("delta = x*y; P = y; Q = x^2;").unwrap().to_system().unwrap();
        resolve_local(&sys, Budget::default()).unwrap()
    }

    #[test]
    fn cusp_fold_json() {
        let tree = cusp_fold_tree();
        let j = tree_json(&tree);
        let blowups: Vec<_> = j.edges.iter().filter_map(|e| match &e.params {
            EdgeParams::BlowUp { omega, .. } => Some(*omega),
            _ => None,
        }).collect();
        assert!(!blowups.is_empty());
        assert!(blowups.iter().all(|w| *w == [2, 3]));
        assert!(j.nodes.iter().filter(|n| !j.edges.iter().any(|e| e.parent == n.id)).all(|n| matches!(n.verdict, Verdict::Elementary(_))));
        let xis: Vec<_> = j.edges.iter().filter_map(|e| match &e.params {
            EdgeParams::Translate { xi, .. } => Some(xi.clone()),
            _ => None,
        }).collect();
        let sqrt_two_thirds = AlgebraicJson { minpoly: "3*t^2-2".into(), interval: ["4/5".into(), "9/10".into()] };
        assert!(xis.contains(&sqrt_two_thirds), "{xis:?}");
    }

    #[test]
    fn cusp_fold_round_trip() {
        let tree = cusp_fold_tree();
        let bytes = export_tree(&tree, Format::Json);
        let back = import_tree(&bytes).unwrap();
        assert!(back.mismatches().is_empty());
        assert_eq!(back.tree.stats, tree.stats);
        for (p, c) in back.tree.root.edges() {
            verify_pullback(&p.system, &c.system, c.incoming.as_ref().unwrap()).unwrap();
        }
        assert_eq!(export_tree(&back.tree, Format::Json), bytes);
    }

    #[test]
    fn single_leaf_dot() {
        let (sys, _) = parse_system("delta = y; P = 2*x; Q = -y;").unwrap().to_system().unwrap();
        let tree = resolve_local(&sys, Budget::default()).unwrap();
        let dot = tree_dot(&tree);
        assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 1);
        assert!(!dot.contains("->"));
    }
}

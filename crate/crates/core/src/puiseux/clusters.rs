//! Analytic cluster decomposition of a denominator `g(x, y)`.
//!
//! The Weierstrass factor of `g` is expanded branch-group by branch-group:
//! at each node the polygon of `C(w + s)` is read, integer-order edges are
//! split over ℚ(i) and the shift `s` is extended by the found terms. A
//! group stops as soon as its shift turns non-real, leaves the slope-one
//! regime, or becomes fractional.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{gaussian_linear_roots, GaussianRational, Rational, SparsePoly, TruncSeries, UPoly, Var};
use crate::error::{Error, Result};

use super::hensel::{split_along_edge, weierstrass};
use super::polygon::{series_polygon, Edge};
use super::seriespoly::SeriesPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Weierstrass { degree: usize },
    Shift { order: u32, coefficient: String },
    Split { order: u32, part: String },
    Remainder,
}

/// Why a cluster was not expanded further.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stop {
    /// The last shift term is non-real; this is where the branch data lives.
    NonRealShift,
    /// Branches of order other than one at the first level.
    BranchOrder(Rational),
    /// A real slope coefficient that is not negative.
    NonNegativeSlope,
    /// Only fractional-order edges remain.
    Fractional(Vec<Rational>),
    /// `C(w + s) ≡ w^r` through the working precision.
    Exhausted,
    /// Characteristic polynomial with no further linear factors over ℚ(i).
    Unsplittable { char_poly: UPoly, order: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCluster {
    /// Monic in `y`.
    pub approximant: SeriesPoly,
    pub y_degree: usize,
    pub x_precision: usize,
    pub provenance: Vec<Step>,
    /// Common initial part of every branch: `y = shift(x) + ...`.
    pub shift: SparsePoly,
    /// Order of the branches at the first level, when known.
    pub leading_order: Option<Rational>,
    pub stop: Stop,
    /// The exact polynomial factor, when the cluster is the whole of `g / x^k`.
    pub exact: Option<SparsePoly>,
    pub multiplicity: u32,
}

impl FactorCluster {
    pub fn is_unsplittable(&self) -> bool {
        matches!(self.stop, Stop::Unsplittable { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let stop = match &self.stop {
            Stop::NonRealShift => serde_json::json!({"kind": "non_real_shift"}),
            Stop::BranchOrder(o) => serde_json::json!({"kind": "branch_order", "order": o.to_string()}),
            Stop::NonNegativeSlope => serde_json::json!({"kind": "non_negative_slope"}),
            Stop::Fractional(os) => serde_json::json!({
                "kind": "fractional",
                "orders": os.iter().map(|o| o.to_string()).collect::<Vec<_>>()
            }),
            Stop::Exhausted => serde_json::json!({"kind": "exhausted"}),
            Stop::Unsplittable { char_poly, order } => serde_json::json!({
                "kind": "unsplittable", "char_poly": char_poly.to_string(), "order": order.to_string()
            }),
        };
        serde_json::json!({
            "approximant": self.approximant.to_sparse().to_string(),
            "y_degree": self.y_degree,
            "x_precision": self.x_precision,
            "shift": self.shift.to_string(),
            "multiplicity": self.multiplicity,
            "stop": stop,
            "provenance": self.provenance,
        })
    }
}

/// The part of `g` outside the clusters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitInfo {
    /// `u(x, y)` with `g = x^k · u · Π clusters`.
    pub unit: SeriesPoly,
    pub y_degree: usize,
    pub constant: GaussianRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterTree {
    pub x_multiplicity: u32,
    pub unit: UnitInfo,
    pub clusters: Vec<FactorCluster>,
}

impl ClusterTree {
    pub fn unsplittable(&self) -> impl Iterator<Item = &FactorCluster> {
        self.clusters.iter().filter(|c| c.is_unsplittable())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x_multiplicity": self.x_multiplicity,
            "unit_y_degree": self.unit.y_degree,
            "unit_constant": self.unit.constant.to_string(),
            "clusters": self.clusters.iter().map(FactorCluster::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClusterOutcome {
    Clusters(ClusterTree),
    /// Some characteristic polynomial could not be split over ℚ(i).
    Inconclusive { char_poly: UPoly, tree: ClusterTree },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClusterOptions {
    pub depth_cap: usize,
    pub x_precision: usize,
}

impl ClusterOptions {
    pub fn for_poly(g: &SparsePoly) -> Self {
        ClusterOptions { depth_cap: 32, x_precision: default_precision(g) }
    }
}

/// `4 · deg g + 8`.
pub fn default_precision(g: &SparsePoly) -> usize {
    4 * g.total_degree().unwrap_or(0) as usize + 8
}

struct Node {
    approximant: SeriesPoly,
    shift: TruncSeries,
    level: usize,
    leading_order: Option<Rational>,
    provenance: Vec<Step>,
    exact: Option<SparsePoly>,
}

/// Full cluster tree, keeping unsplittable groups as leaves.
pub fn cluster_tree(g: &SparsePoly, opts: ClusterOptions) -> Result<ClusterTree> {
    g.require_vars(&[Var::X, Var::Y])?;
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = g.order_in(Var::X).unwrap_or(0);
    let gp = g.div_monomial(&[k, 0, 0]).expect("x^k divides g");
    let cap = opts.x_precision;
    let ws = weierstrass(&gp, cap)?;
    let full = SeriesPoly::from_sparse(&gp, cap);
    let unit = full.div_rem_monic(&ws.poly).0;
    let constant = unit.coeff(0).coeff(0);
    let unit = UnitInfo { unit, y_degree: ws.unit_y_degree, constant };

    let mut clusters = Vec::new();
    if ws.degree > 0 {
        let exact = (ws.unit_y_degree == 0).then(|| gp.clone());
        let root = Node {
            approximant: ws.poly,
            shift: TruncSeries::zero(cap),
            level: 0,
            leading_order: None,
            provenance: vec![Step::Weierstrass { degree: ws.degree }],
            exact,
        };
        expand(root, opts, &mut clusters)?;
    }
    Ok(ClusterTree { x_multiplicity: k, unit, clusters: merge(clusters) })
}

/// Cluster decomposition; `Inconclusive` when an unsplittable group remains.
pub fn analytic_clusters(g: &SparsePoly, depth_cap: usize, x_precision: usize) -> Result<ClusterOutcome> {
    let tree = cluster_tree(g, ClusterOptions { depth_cap, x_precision })?;
    let first = tree.unsplittable().next().map(|c| match &c.stop {
        Stop::Unsplittable { char_poly, .. } => char_poly.clone(),
        _ => unreachable!(),
    });
    if let Some(char_poly) = first {
        return Ok(ClusterOutcome::Inconclusive { char_poly, tree });
    }
    Ok(ClusterOutcome::Clusters(tree))
}

fn leaf(node: Node, stop: Stop) -> FactorCluster {
    FactorCluster {
        y_degree: node.approximant.degree(),
        x_precision: node.approximant.cap(),
        approximant: node.approximant,
        provenance: node.provenance,
        shift: node.shift.to_poly(),
        leading_order: node.leading_order,
        stop,
        exact: node.exact,
        multiplicity: 1,
    }
}

fn expand(node: Node, opts: ClusterOptions, out: &mut Vec<FactorCluster>) -> Result<()> {
    if node.level > opts.depth_cap {
        return Err(Error::CapExceeded(format!(
            "depth cap {} reached with shift {}",
            opts.depth_cap,
            node.shift.to_poly()
        )));
    }
    let w = node.approximant.taylor_shift(&node.shift);
    let Some(np) = series_polygon(&w, false) else {
        return Err(Error::CapExceeded("cluster vanishes through the working precision".into()));
    };
    if np.edges.is_empty() {
        out.push(leaf(node, Stop::Exhausted));
        return Ok(());
    }
    if !np.certain {
        return Err(Error::CapExceeded(format!(
            "x-precision {} does not determine the polygon at shift {}",
            w.cap(),
            node.shift.to_poly()
        )));
    }

    let integral: Vec<&Edge> = np.edges.iter().filter(|e| e.integer_mu().is_some()).collect();
    let fractional: Vec<Rational> = np.edges.iter().filter(|e| e.integer_mu().is_none()).map(Edge::mu).collect();
    let r = w.degree() as u32;

    if integral.is_empty() {
        if node.level == 0 {
            let order = fractional[0].clone();
            out.push(leaf(Node { leading_order: Some(order.clone()), ..node }, Stop::BranchOrder(order)));
        } else {
            out.push(leaf(node, Stop::Fractional(fractional)));
        }
        return Ok(());
    }

    // A single edge whose char poly is a pure power of one ℚ(i)-linear
    // factor: extend the shift without splitting.
    if np.edges.len() == 1 && np.y_order == 0 && np.edges[0].top.1 == r {
        let edge = &np.edges[0];
        let split = gaussian_linear_roots(&edge.char_poly)?;
        if split.roots.len() == 1 && split.cofactor.degree() == 0 {
            let (c, _) = &split.roots[0];
            let mu = edge.integer_mu().unwrap();
            let mut provenance = node.provenance.clone();
            provenance.push(Step::Shift { order: mu, coefficient: c.to_string() });
            let child = Node {
                shift: add_term(&node.shift, mu, c),
                level: node.level + 1,
                leading_order: node.leading_order.clone().or_else(|| Some(edge.mu())),
                provenance,
                ..node
            };
            return classify(child, opts, out);
        }
        if split.roots.is_empty() {
            let stop = Stop::Unsplittable { char_poly: edge.char_poly.monic(), order: edge.mu() };
            let order = node.leading_order.clone().or_else(|| Some(edge.mu()));
            out.push(leaf(Node { leading_order: order, ..node }, stop));
            return Ok(());
        }
    }

    let neg_shift = -&node.shift;
    let mut factors: Vec<SeriesPoly> = Vec::new();
    let mut children: Vec<(Node, Option<Stop>)> = Vec::new();
    for edge in integral {
        let mu = edge.integer_mu().unwrap();
        let split = gaussian_linear_roots(&edge.char_poly)?;
        let mut parts: Vec<(UPoly, Option<GaussianRational>)> = split
            .roots
            .iter()
            .map(|(c, k)| (UPoly::linear(c).pow(*k), Some(c.clone())))
            .collect();
        if split.cofactor.degree() > 0 {
            parts.push((split.cofactor.monic(), None));
        }
        let only: Vec<UPoly> = parts.iter().map(|(p, _)| p.clone()).collect();
        let es = split_along_edge(&w, edge, &only)?;
        for ((part, root), f) in parts.into_iter().zip(es.factors) {
            factors.push(f.clone());
            let mut provenance = node.provenance.clone();
            provenance.push(Step::Split { order: mu, part: part.to_string() });
            let approximant = f.taylor_shift(&neg_shift.truncate(f.cap()));
            let leading_order = node.leading_order.clone().or_else(|| Some(edge.mu()));
            match root {
                Some(c) => {
                    provenance.push(Step::Shift { order: mu, coefficient: c.to_string() });
                    let shift = add_term(&node.shift.truncate(approximant.cap()), mu, &c);
                    children.push((
                        Node { approximant, shift, level: node.level + 1, leading_order, provenance, exact: None },
                        None,
                    ));
                }
                None => {
                    let shift = node.shift.truncate(approximant.cap());
                    let stop = Stop::Unsplittable { char_poly: part, order: edge.mu() };
                    children.push((
                        Node { approximant, shift, level: node.level, leading_order, provenance, exact: None },
                        Some(stop),
                    ));
                }
            }
        }
    }

    let degree: usize = factors.iter().map(SeriesPoly::degree).sum();
    if degree < w.degree() {
        let prec = factors.iter().map(SeriesPoly::cap).min().unwrap_or(w.cap());
        let prod = factors.iter().fold(SeriesPoly::one(prec), |acc, f| acc.mul(f));
        let rem = w.truncate(prec).div_rem_monic(&prod).0;
        let approximant = rem.taylor_shift(&neg_shift.truncate(prec));
        let mut provenance = node.provenance.clone();
        provenance.push(Step::Remainder);
        let shift = node.shift.truncate(prec);
        let rem_node = Node {
            approximant,
            shift,
            level: node.level,
            leading_order: node.leading_order.clone().or_else(|| fractional.first().cloned()),
            provenance,
            exact: None,
        };
        let stop = if node.level == 0 && !fractional.is_empty() {
            Stop::BranchOrder(fractional[0].clone())
        } else if fractional.is_empty() {
            Stop::Exhausted
        } else {
            Stop::Fractional(fractional.clone())
        };
        children.push((rem_node, Some(stop)));
    }

    for (child, stop) in children {
        match stop {
            Some(stop) => out.push(leaf(child, stop)),
            None => classify(child, opts, out)?,
        }
    }
    Ok(())
}

/// Decides whether a freshly shifted group is worth expanding further.
fn classify(node: Node, opts: ClusterOptions, out: &mut Vec<FactorCluster>) -> Result<()> {
    if !node.shift.is_real() {
        out.push(leaf(node, Stop::NonRealShift));
        return Ok(());
    }
    if let Some(order) = &node.leading_order {
        if !order.is_one() {
            let order = order.clone();
            out.push(leaf(node, Stop::BranchOrder(order)));
            return Ok(());
        }
    }
    let slope = node.shift.coeff(1);
    if slope.re >= Rational::zero() {
        out.push(leaf(node, Stop::NonNegativeSlope));
        return Ok(());
    }
    expand(node, opts, out)
}

fn add_term(s: &TruncSeries, order: u32, c: &GaussianRational) -> TruncSeries {
    let mut coeffs = s.coeffs().to_vec();
    if (order as usize) < coeffs.len() {
        coeffs[order as usize] = &coeffs[order as usize] + c;
    }
    TruncSeries::new(coeffs, s.cap())
}

/// Identical clusters are recorded once with multiplicity.
fn merge(clusters: Vec<FactorCluster>) -> Vec<FactorCluster> {
    let mut out: Vec<FactorCluster> = Vec::new();
    for c in clusters {
        match out.iter_mut().find(|o| o.approximant == c.approximant && o.stop == c.stop) {
            Some(o) => o.multiplicity += c.multiplicity,
            None => out.push(c),
        }
    }
    out
}

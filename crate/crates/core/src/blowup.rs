//! Point blow-ups of the plane until an ideal pulls back to a principal
//! monomial ideal, with divisorial orders, the valuative membership test
//! and transversal arcs.
//!
//! Every chart has coordinates `(s, t)`, stored as the variables `x, y` of
//! [`SparsePoly`]. A chart of type `A` is responsible for all points of its
//! exceptional line `s = 0`; the base chart and charts of type `B` only for
//! their origin. Inside these regions every exceptional divisor is a
//! coordinate axis.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{gaussian_linear_roots, GaussianRational, SparsePoly, UPoly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChartKind {
    Base,
    /// `a = a0 + s`, `b = b0 + s·t`; exceptional divisor `s = 0`.
    A,
    /// `a = a0 + s·t`, `b = b0 + t`; exceptional divisor `t = 0`.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    S,
    T,
}

impl Axis {
    fn var(self) -> Var {
        match self {
            Axis::S => Var::X,
            Axis::T => Var::Y,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub id: usize,
    pub kind: ChartKind,
    /// Parent chart and the blown-up point in its coordinates.
    pub parent: Option<(usize, (GaussianRational, GaussianRational))>,
    /// Base coordinates `(x, y)` as polynomials in `(s, t)`.
    pub map: (SparsePoly, SparsePoly),
    /// Exceptional divisors visible in the responsible region.
    pub divisors: Vec<(usize, Axis)>,
    /// Pullbacks of the generators.
    pub pulled: Vec<SparsePoly>,
    /// Points of this chart that were blown up.
    pub centers: Vec<(GaussianRational, GaussianRational)>,
}

impl Chart {
    fn pull(&self, f: &SparsePoly) -> SparsePoly {
        f.compose([Some(&self.map.0), Some(&self.map.1), None])
    }

    /// Local monomial exponents and residual generators.
    pub fn pulled_ideal(&self) -> PulledIdeal {
        let mut exps = [0u32; 2];
        for (_, axis) in &self.divisors {
            let v = axis.var();
            exps[v.index()] = self.pulled.iter().filter_map(|g| g.order_in(v)).min().unwrap_or(0);
        }
        let residuals = self
            .pulled
            .iter()
            .map(|g| g.div_monomial(&[exps[0], exps[1], 0]).expect("monomial divides every generator"))
            .collect();
        PulledIdeal { chart: self.id, monomial: exps, residuals }
    }
}

/// `J = s^e_s t^e_t · (residuals)` in one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct PulledIdeal {
    pub chart: usize,
    pub monomial: [u32; 2],
    pub residuals: Vec<SparsePoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divisor {
    pub id: usize,
    /// The type-`A` chart created with it, where it is `s = 0`.
    pub home: usize,
    /// The type-`B` sibling, where it is `t = 0`.
    pub sibling: usize,
    /// Chart in which its center was blown up.
    pub parent_chart: usize,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlowupTree {
    pub generators: Vec<SparsePoly>,
    pub charts: Vec<Chart>,
    pub divisors: Vec<Divisor>,
}

/// One row of the order table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRow {
    pub divisor: usize,
    pub generators: Vec<u32>,
    pub ideal: u32,
}

impl BlowupTree {
    pub fn new(generators: Vec<SparsePoly>) -> Result<Self> {
        for g in &generators {
            g.require_vars(&[Var::X, Var::Y])?;
            if g.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
        }
        let base = Chart {
            id: 0,
            kind: ChartKind::Base,
            parent: None,
            map: (SparsePoly::x(), SparsePoly::y()),
            divisors: Vec::new(),
            pulled: generators.clone(),
            centers: Vec::new(),
        };
        Ok(BlowupTree { generators, charts: vec![base], divisors: Vec::new() })
    }

    pub fn steps(&self) -> usize {
        self.divisors.len()
    }

    pub fn order_table(&self) -> Vec<OrderRow> {
        self.divisors
            .iter()
            .map(|d| {
                let generators: Vec<u32> =
                    self.generators.iter().map(|g| ord_divisor(g, self, d.id).unwrap_or(u32::MAX)).collect();
                let ideal = generators.iter().copied().min().unwrap_or(0);
                OrderRow { divisor: d.id, generators, ideal }
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let charts: Vec<serde_json::Value> = self
            .charts
            .iter()
            .map(|c| {
                let pi = c.pulled_ideal();
                serde_json::json!({
                    "id": c.id,
                    "kind": c.kind,
                    "parent": c.parent.as_ref().map(|(p, (a, b))| serde_json::json!({
                        "chart": p, "center": [a.to_string(), b.to_string()]
                    })),
                    "map": [c.map.0.to_string(), c.map.1.to_string()],
                    "divisors": c.divisors.iter().map(|(d, a)| serde_json::json!({"divisor": d, "axis": a})).collect::<Vec<_>>(),
                    "monomial": pi.monomial,
                    "residuals": pi.residuals.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let orders: Vec<serde_json::Value> = self
            .order_table()
            .iter()
            .map(|r| serde_json::json!({"divisor": r.divisor, "generators": r.generators, "ideal": r.ideal}))
            .collect();
        serde_json::json!({
            "generators": self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "charts": charts,
            "divisors": self.divisors,
            "order_table": orders,
            "real_centers": real_points_check(self),
        })
    }
}

/// Blows up `point` of `chart`, adding the two new charts and one divisor.
pub fn blow_up(tree: &mut BlowupTree, chart: usize, point: (GaussianRational, GaussianRational)) -> usize {
    let (a0, b0) = point.clone();
    let parent = tree.charts[chart].clone();
    let (s, t) = (SparsePoly::x(), SparsePoly::y());
    let st = &s * &t;
    let subs_a = (&SparsePoly::constant(a0.clone()) + &s, &SparsePoly::constant(b0.clone()) + &st);
    let subs_b = (&SparsePoly::constant(a0.clone()) + &st, &SparsePoly::constant(b0.clone()) + &t);
    let divisor = tree.divisors.len();
    let (ida, idb) = (tree.charts.len(), tree.charts.len() + 1);

    let mut div_a = vec![(divisor, Axis::S)];
    let mut div_b = vec![(divisor, Axis::T)];
    for (d, axis) in &parent.divisors {
        match axis {
            Axis::S if a0.is_zero() => div_b.push((*d, Axis::S)),
            Axis::T if b0.is_zero() => div_a.push((*d, Axis::T)),
            _ => {}
        }
    }
    let make = |id, kind, subs: &(SparsePoly, SparsePoly), divisors| {
        let c = |p: &SparsePoly| p.compose([Some(&subs.0), Some(&subs.1), None]);
        Chart {
            id,
            kind,
            parent: Some((chart, point.clone())),
            map: (c(&parent.map.0), c(&parent.map.1)),
            divisors,
            pulled: parent.pulled.iter().map(c).collect(),
            centers: Vec::new(),
        }
    };
    let ca = make(ida, ChartKind::A, &subs_a, div_a);
    let cb = make(idb, ChartKind::B, &subs_b, div_b);
    tree.charts.push(ca);
    tree.charts.push(cb);
    tree.charts[chart].centers.push(point);
    tree.divisors.push(Divisor { id: divisor, home: ida, sibling: idb, parent_chart: chart, step: divisor + 1 });
    divisor
}

/// Points of the chart's responsible region where the pulled ideal is not
/// principal monomial, sorted by `(re, im)` of the `t` coordinate.
pub fn bad_points(chart: &Chart) -> Result<Vec<(GaussianRational, GaussianRational)>> {
    let pi = chart.pulled_ideal();
    let origin = [&GaussianRational::zero(), &GaussianRational::zero(), &GaussianRational::zero()];
    match chart.kind {
        ChartKind::Base | ChartKind::B => {
            if pi.residuals.iter().all(|r| r.eval(origin).is_zero()) {
                Ok(vec![(GaussianRational::zero(), GaussianRational::zero())])
            } else {
                Ok(Vec::new())
            }
        }
        ChartKind::A => {
            let mut g = UPoly::zero();
            for r in &pi.residuals {
                let on_e = r.substitute(Var::X, &SparsePoly::zero()).to_upoly(Var::Y)?;
                g = g.gcd(&on_e);
                if g.degree() == 0 && !g.is_zero() {
                    return Ok(Vec::new());
                }
            }
            if g.is_zero() {
                return Err(Error::InvalidInput("pulled ideal vanishes along an exceptional divisor".into()));
            }
            let split = gaussian_linear_roots(&g)?;
            if split.cofactor.degree() > 0 {
                return Err(Error::NonRationalCenter(format!(
                    "centers on divisor in chart {} are roots of {}",
                    chart.id, split.cofactor
                )));
            }
            Ok(split.roots.into_iter().map(|(c, _)| (GaussianRational::zero(), c)).collect())
        }
    }
}

/// Blows up until every chart is principal monomial on its responsible region.
pub fn monomialize(generators: &[SparsePoly], max_steps: usize) -> Result<BlowupTree> {
    let mut tree = BlowupTree::new(dedupe_nonzero(generators))?;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        for p in bad_points(&tree.charts[id])? {
            if tree.steps() >= max_steps {
                return Err(Error::CapExceeded(format!(
                    "monomialization needs more than {max_steps} blow-ups ({} charts built)",
                    tree.charts.len()
                )));
            }
            let d = blow_up(&mut tree, id, p);
            queue.push_back(tree.divisors[d].home);
            queue.push_back(tree.divisors[d].sibling);
        }
    }
    Ok(tree)
}

/// Default cap: `16 · Σ m`, with the generator degree standing in for `Σ m`.
pub fn default_step_cap(generators: &[SparsePoly]) -> usize {
    16 * generators.iter().filter_map(SparsePoly::total_degree).max().unwrap_or(1).max(1) as usize
}

fn dedupe_nonzero(gens: &[SparsePoly]) -> Vec<SparsePoly> {
    let mut out: Vec<SparsePoly> = Vec::new();
    for g in gens {
        if !out.contains(g) {
            out.push(g.clone());
        }
    }
    out
}

/// Order of vanishing of `f` along a divisor, read in its home chart.
/// `None` for `f = 0`.
pub fn ord_divisor(f: &SparsePoly, tree: &BlowupTree, divisor: usize) -> Option<u32> {
    let home = &tree.charts[tree.divisors[divisor].home];
    tree.charts[home.id].pull(f).order_in(Var::X)
}

/// The same order read in any chart where the divisor is an axis.
pub fn ord_divisor_in(f: &SparsePoly, tree: &BlowupTree, divisor: usize, chart: usize) -> Option<u32> {
    let c = &tree.charts[chart];
    let (_, axis) = c.divisors.iter().find(|(d, _)| *d == divisor)?;
    c.pull(f).order_in(axis.var())
}

/// Integral dependence of `f` on the generators of the tree.
pub fn valuative_member(f: &SparsePoly, tree: &BlowupTree) -> bool {
    tree.order_table()
        .iter()
        .all(|row| ord_divisor(f, tree, row.divisor).is_none_or(|o| o >= row.ideal))
}

/// `t ↦ (x(t), y(t))` meeting one divisor transversally at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub divisor: usize,
    pub constant: GaussianRational,
    /// Polynomials in the variable `x`, standing for `t`.
    pub x: SparsePoly,
    pub y: SparsePoly,
}

impl Arc {
    /// Order in `t` of `f` along the arc.
    pub fn order_of(&self, f: &SparsePoly) -> Option<u32> {
        f.compose([Some(&self.x), Some(&self.y), None]).order_in(Var::X)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "divisor": self.divisor,
            "constant": self.constant.to_string(),
            "x": self.x.to_string().replace('x', "t"),
            "y": self.y.to_string().replace('x', "t"),
        })
    }
}

pub fn transversal_arc(tree: &BlowupTree, divisor: usize) -> Arc {
    transversal_arc_for(tree, divisor, &[])
}

/// Transversal arc whose foot also avoids the strict transforms of `avoid`.
pub fn transversal_arc_for(tree: &BlowupTree, divisor: usize, avoid: &[SparsePoly]) -> Arc {
    let home = &tree.charts[tree.divisors[divisor].home];
    let t_axis = home.divisors.iter().any(|(_, a)| *a == Axis::T);
    let feet: Vec<SparsePoly> = avoid
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| {
            let p = home.pull(f);
            let k = p.order_in(Var::X).unwrap_or(0);
            p.div_monomial(&[k, 0, 0]).unwrap().substitute(Var::X, &SparsePoly::zero())
        })
        .collect();
    let zero = GaussianRational::zero();
    let mut c = 1i64;
    loop {
        let cg = GaussianRational::from_int(c);
        let hits_center = home.centers.iter().any(|(_, t)| *t == cg);
        let hits_axis = t_axis && c == 0;
        let hits_avoid = feet.iter().any(|p| p.eval([&zero, &cg, &zero]).is_zero());
        if !hits_center && !hits_axis && !hits_avoid {
            let line = (SparsePoly::x(), SparsePoly::constant(cg.clone()));
            let sub = |p: &SparsePoly| p.compose([Some(&line.0), Some(&line.1), None]);
            return Arc { divisor, constant: cg, x: sub(&home.map.0), y: sub(&home.map.1) };
        }
        c += 1;
    }
}

/// True iff every blown-up center has real coordinates.
pub fn real_points_check(tree: &BlowupTree) -> bool {
    tree.charts.iter().all(|c| c.centers.iter().all(|(a, b)| a.is_real() && b.is_real()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (SparsePoly, SparsePoly) {
        (SparsePoly::x(), SparsePoly::y())
    }

    #[test]
    fn single_step_pullbacks() {
        let (x, y) = xy();
        let mut tree = BlowupTree::new(vec![y.clone(), x.pow(2)]).unwrap();
        blow_up(&mut tree, 0, (GaussianRational::zero(), GaussianRational::zero()));
        assert_eq!(tree.charts[1].pulled[0], &x * &y);
        assert_eq!(tree.charts[2].pulled[0], y.clone());
        assert_eq!(tree.charts[1].pulled[1], x.pow(2));
    }

    #[test]
    fn y_x_squared_tree() {
        let (x, y) = xy();
        let tree = monomialize(&[y.clone(), x.pow(2)], 32).unwrap();
        assert_eq!(tree.steps(), 2);
        let table = tree.order_table();
        assert_eq!(table[0], OrderRow { divisor: 0, generators: vec![1, 2], ideal: 1 });
        assert_eq!(table[1], OrderRow { divisor: 1, generators: vec![2, 2], ideal: 2 });
        assert_eq!(ord_divisor(&x, &tree, 1), Some(1));
        assert_eq!(ord_divisor(&SparsePoly::one(), &tree, 1), Some(0));
        assert!(!valuative_member(&x, &tree));
        assert!(valuative_member(&(&x * &y), &tree));
        let arc = transversal_arc(&tree, 1);
        assert_eq!((arc.x.clone(), arc.y.clone()), (x.clone(), x.pow(2)));
        let arc = transversal_arc(&tree, 0);
        assert_eq!((arc.x, arc.y), (x.clone(), x.clone()));
        assert!(real_points_check(&tree));
    }

    #[test]
    fn squared_shifted_ideal() {
        let (x, y) = xy();
        let l = &y + &x;
        let tree = monomialize(&[l.pow(2), &l * &x.pow(2), x.pow(4)], 64).unwrap();
        assert_eq!(tree.steps(), 2);
        assert_eq!(tree.order_table()[1].ideal, 4);
        assert!(!valuative_member(&x.pow(3), &tree));
    }

    #[test]
    fn maximal_ideal_and_non_real_centers() {
        let (x, y) = xy();
        let tree = monomialize(&[y.clone(), x.clone()], 8).unwrap();
        assert_eq!(tree.steps(), 1);
        assert_eq!(tree.order_table()[0].ideal, 1);
        let tree = monomialize(&[&y.pow(2) + &x.pow(2), x.pow(3)], 64).unwrap();
        assert!(!real_points_check(&tree));
    }

    #[test]
    fn chart_independence() {
        let (x, y) = xy();
        let tree = monomialize(&[y.pow(2), &x * &y, x.pow(3)], 64).unwrap();
        let f = &(&x.pow(2) * &y) + &y.pow(3);
        for d in 0..tree.steps() {
            let home = ord_divisor(&f, &tree, d);
            for c in 0..tree.charts.len() {
                if let Some(o) = ord_divisor_in(&f, &tree, d, c) {
                    assert_eq!(Some(o), home, "divisor {d} chart {c}");
                }
            }
        }
    }
}

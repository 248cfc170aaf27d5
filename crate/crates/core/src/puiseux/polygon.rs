//! Newton polygons in the `(x-exponent, y-exponent)` plane.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{GaussianRational, Rational, SparsePoly, UPoly, Var};
use crate::error::{Error, Result};

use super::seriespoly::SeriesPoly;

/// One edge of the lower-left hull, running from `top = (i_a, j_a)` down to
/// `bottom = (i_b, j_b)` with `j_b < j_a` and `i_b > i_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub top: (u32, u32),
    pub bottom: (u32, u32),
    /// `Σ a_ij T^(j - j_b)` over support points on the edge. A root `c`
    /// stands for branches `y ≈ c·x^μ`.
    pub char_poly: UPoly,
}

impl Edge {
    /// Order of the branches attached to this edge, `Δi / Δj`.
    pub fn mu(&self) -> Rational {
        Rational::new(
            ((self.bottom.0 - self.top.0) as i64).into(),
            ((self.top.1 - self.bottom.1) as i64).into(),
        )
    }

    /// Slope `Δj / Δi` in the plane; always negative.
    pub fn slope(&self) -> Rational {
        -self.mu().recip()
    }

    pub fn height(&self) -> u32 {
        self.top.1 - self.bottom.1
    }

    /// Integer order, when the edge carries one.
    pub fn integer_mu(&self) -> Option<u32> {
        let mu = self.mu();
        mu.is_integer().then(|| mu.to_integer().try_into().unwrap())
    }

    /// Constant `e` of the supporting line `i + μ j = e`.
    pub fn line_constant(&self) -> Rational {
        Rational::from_integer((self.bottom.0 as i64).into())
            + self.mu() * Rational::from_integer((self.bottom.1 as i64).into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Lowest x-exponent for each y-exponent in the support.
    pub support: Vec<(u32, u32)>,
    pub vertices: Vec<(u32, u32)>,
    pub edges: Vec<Edge>,
    /// Largest power of `y` dividing the input (to the known precision).
    pub y_order: u32,
    /// False when unknown high-order coefficients could still lower the hull.
    pub certain: bool,
}

#[derive(Serialize)]
struct EdgeJson {
    top: (u32, u32),
    bottom: (u32, u32),
    mu: String,
    slope: String,
    char_poly: String,
}

impl NewtonPolygon {
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<EdgeJson> = self
            .edges
            .iter()
            .map(|e| EdgeJson {
                top: e.top,
                bottom: e.bottom,
                mu: e.mu().to_string(),
                slope: e.slope().to_string(),
                char_poly: e.char_poly.to_string(),
            })
            .collect();
        serde_json::json!({ "vertices": self.vertices, "edges": edges, "y_order": self.y_order })
    }

    pub fn has_single_edge(&self) -> bool {
        self.edges.len() == 1
    }
}

/// Builds the polygon from support points. `start_j` is the y-exponent of the
/// starting vertex `(0, start_j)`; points with larger `j` are ignored.
/// `cap` marks where unknown coefficients begin (`None` for exact input).
fn build(points: &[(u32, u32, GaussianRational)], start_j: u32, cap: Option<u32>) -> NewtonPolygon {
    let mut lowest: BTreeMap<u32, u32> = BTreeMap::new();
    let mut coeff: BTreeMap<(u32, u32), GaussianRational> = BTreeMap::new();
    for (i, j, a) in points {
        if *j > start_j || a.is_zero() {
            continue;
        }
        coeff.insert((*i, *j), a.clone());
        let e = lowest.entry(*j).or_insert(*i);
        *e = (*e).min(*i);
    }
    let support: Vec<(u32, u32)> = lowest.iter().rev().map(|(&j, &i)| (i, j)).collect();
    let y_order = *lowest.keys().next().unwrap_or(&start_j);

    let mut vertices = vec![(0u32, start_j)];
    let mut cur = (0u32, start_j);
    while cur.1 > y_order {
        // Next vertex: smallest μ, ties broken toward the lowest j.
        let mut best: Option<((u32, u32), Rational)> = None;
        for &(i, j) in &support {
            if j >= cur.1 {
                continue;
            }
            let mu = Rational::new(((i as i64) - (cur.0 as i64)).into(), ((cur.1 - j) as i64).into());
            match &best {
                Some((_, m)) if mu > *m => {}
                Some((p, m)) if mu == *m && j > p.1 => {}
                _ => best = Some(((i, j), mu)),
            }
        }
        let Some((next, _)) = best else { break };
        vertices.push(next);
        cur = next;
    }

    let mut edges = Vec::new();
    for w in vertices.windows(2) {
        let (top, bottom) = (w[0], w[1]);
        let (di, dj) = ((bottom.0 - top.0) as i64, (top.1 - bottom.1) as i64);
        let mut c = vec![GaussianRational::zero(); (dj + 1) as usize];
        for ((i, j), a) in &coeff {
            if *j < bottom.1 || *j > top.1 {
                continue;
            }
            if (*i as i64 - top.0 as i64) * dj == (top.1 as i64 - *j as i64) * di {
                c[(*j - bottom.1) as usize] = a.clone();
            }
        }
        edges.push(Edge { top, bottom, char_poly: UPoly::new(c) });
    }

    // Hidden points (cap, j) must lie strictly above every supporting line.
    let certain = match cap {
        None => true,
        Some(cap) => (0..start_j).filter(|j| !lowest.contains_key(j)).all(|j| {
            edges.iter().all(|e| {
                Rational::from_integer((cap as i64).into()) + e.mu() * Rational::from_integer((j as i64).into())
                    > e.line_constant()
            })
        }),
    };

    NewtonPolygon { support, vertices, edges, y_order, certain }
}

/// Newton polygon of `p(x, y)` starting at `(0, k)` with `k = ord_y p(0, y)`.
pub fn newton_polygon(p: &SparsePoly) -> Result<NewtonPolygon> {
    p.require_vars(&[Var::X, Var::Y])?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mult = p.order_in(Var::X).unwrap_or(0);
    if mult > 0 {
        return Err(Error::XFactor { multiplicity: mult });
    }
    let points: Vec<(u32, u32, GaussianRational)> =
        p.terms().map(|(m, a)| (m[0], m[1], a.clone())).collect();
    let k = points.iter().filter(|(i, _, _)| *i == 0).map(|(_, j, _)| *j).min().unwrap();
    Ok(build(&points, k, None))
}

/// Polygon of a series polynomial, starting from `(0, k)` where `k` is the
/// lowest y-exponent with a nonzero constant coefficient.
pub fn series_polygon(p: &SeriesPoly, exact: bool) -> Option<NewtonPolygon> {
    let points = p.support();
    let k = points.iter().filter(|(i, _, _)| *i == 0).map(|(_, j, _)| *j).min()?;
    let cap = (!exact).then_some(p.cap() as u32);
    Some(build(&points, k, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p_main() -> SparsePoly {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let ix2 = SparsePoly::constant(GaussianRational::i()).mul_monomial(&[2, 0, 0]);
        &(&(&y + &x) + &ix2).pow(2) - &x.pow(5)
    }

    #[test]
    fn single_edge_main_example() {
        let np = newton_polygon(&p_main()).unwrap();
        assert_eq!(np.vertices, vec![(0, 2), (2, 0)]);
        assert_eq!(np.edges.len(), 1);
        assert_eq!(np.edges[0].char_poly, UPoly::from_ints(&[1, 2, 1]));
        assert_eq!(np.edges[0].mu(), rat(1, 1));
    }

    #[test]
    fn cubic_order_branch() {
        let p = &SparsePoly::y() + &SparsePoly::x().pow(3);
        let np = newton_polygon(&p).unwrap();
        assert_eq!(np.edges[0].slope(), rat(-1, 3));
        assert_eq!(np.edges[0].char_poly, UPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn x_factor_rejected() {
        let p = &SparsePoly::x() * &SparsePoly::y();
        assert_eq!(newton_polygon(&p), Err(Error::XFactor { multiplicity: 1 }));
    }

    #[test]
    fn two_edges() {
        // (y^2 + x^3)(y + x): an integral edge and a fractional one.
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let p = &(&y.pow(2) + &x.pow(3)) * &(&y + &x);
        let np = newton_polygon(&p).unwrap();
        assert_eq!(np.vertices, vec![(0, 3), (1, 2), (4, 0)]);
        assert_eq!(np.edges[0].mu(), rat(1, 1));
        assert_eq!(np.edges[1].mu(), rat(3, 2));
        assert_eq!(np.edges[1].char_poly, UPoly::from_ints(&[1, 0, 1]));
    }
}

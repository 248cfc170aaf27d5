//! Hensel lifting of coprime factorizations modulo `x`.

use num_traits::Zero;

use crate::arith::{SparsePoly, UPoly, Var};
use crate::error::{Error, Result};

use super::polygon::{newton_polygon, Edge, NewtonPolygon};
use super::seriespoly::SeriesPoly;

/// Given `q` in x-major form with `q(0, v) = a0·b0`, `a0` monic and coprime
/// to `b0`, returns `(A, B)` with `A` monic in `v`, `A(0, v) = a0`,
/// `B(0, v) = b0` and `q ≡ A·B` modulo `x^q.len()`.
pub(crate) fn lift_pair(q: &[UPoly], a0: &UPoly, b0: &UPoly) -> Result<(Vec<UPoly>, Vec<UPoly>)> {
    let (g, s, _t) = b0.ext_gcd(a0);
    if g.degree() > 0 || g.is_zero() {
        return Err(Error::NotCoprime);
    }
    // s·b0 + t·a0 = 1, so α = (s·e) mod a0 solves a0·β + b0·α = e.
    let n = q.len();
    let mut a = vec![a0.clone()];
    let mut b = vec![b0.clone()];
    for k in 1..n {
        let mut e = q[k].clone();
        for i in 0..=k {
            let j = k - i;
            if i == k || j == k {
                continue;
            }
            e = &e - &(&a[i] * &b[j]);
        }
        let alpha = (&s * &e).div_rem(a0).1;
        let beta = (&e - &(&alpha * b0)).exact_div(a0).expect("Bezout correction divides");
        a.push(alpha);
        b.push(beta);
    }
    Ok((a, b))
}

/// Monic Weierstrass factor of `p` and the y-degree of the unit cofactor.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    pub poly: SeriesPoly,
    pub degree: usize,
    pub unit_y_degree: usize,
}

/// Weierstrass preparation of `p` (not divisible by `x`) to precision `cap`.
pub fn weierstrass(p: &SparsePoly, cap: usize) -> Result<Weierstrass> {
    let sp = SeriesPoly::from_sparse(p, cap);
    let at0 = sp.at_x_zero();
    if at0.is_zero() {
        return Err(Error::XFactor { multiplicity: p.order_in(Var::X).unwrap_or(0) });
    }
    let d = at0.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let total = sp.degree();
    if d == total {
        let poly = sp.monic_normalized().expect("leading coefficient is a unit");
        return Ok(Weierstrass { poly, degree: d, unit_y_degree: 0 });
    }
    let a0 = UPoly::new(
        (0..=d).map(|k| if k == d { 1.into() } else { 0.into() }).collect(),
    );
    let b0 = at0.exact_div(&a0).expect("y^d divides p(0, y)");
    let (a, _) = lift_pair(&sp.x_major(), &a0, &b0)?;
    Ok(Weierstrass { poly: SeriesPoly::from_x_major(&a, cap), degree: d, unit_y_degree: total - d })
}

/// Result of splitting along one integer-order edge.
#[derive(Clone, Debug)]
pub struct EdgeSplit {
    /// Monic factors of the input, one per requested part.
    pub factors: Vec<SeriesPoly>,
    /// `input / Π factors`; `None` when the factors exhaust the degree.
    pub remainder: Option<SeriesPoly>,
    pub precision: usize,
}

/// Splits `w` (monic in `y`) along `edge`, whose order must be an integer,
/// into factors whose rescaled reductions are the given monic `parts` of
/// the characteristic polynomial.
pub fn split_along_edge(w: &SeriesPoly, edge: &Edge, parts: &[UPoly]) -> Result<EdgeSplit> {
    let mu = edge
        .integer_mu()
        .ok_or_else(|| Error::InvalidInput(format!("edge of order {} is not integral", edge.mu())))?
        as usize;
    let e: usize = edge.line_constant().to_integer().try_into().unwrap();
    let cap = w.cap();
    if e >= cap {
        return Err(Error::CapExceeded(format!("x-precision {cap} too small for a split at order {mu}")));
    }
    let prec = cap - e;

    // Q(x, v) = x^(-e) · w(x, x^μ v).
    let q: Vec<UPoly> = (0..prec)
        .map(|k| {
            UPoly::new(
                w.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| match (k + e).checked_sub(mu * j) {
                        Some(i) if i < c.cap() => c.coeff(i),
                        _ => 0.into(),
                    })
                    .collect(),
            )
        })
        .collect();

    let mut rest = q[0].clone();
    for part in parts {
        if part.degree() == 0 || part.lead() != 1.into() {
            return Err(Error::InvalidInput(format!("part {part} is not a monic non-constant polynomial")));
        }
        rest = rest.exact_div(part).ok_or(Error::NotCoprime)?;
    }

    let mut current = q;
    let mut factors = Vec::new();
    for part in parts {
        let b0 = current[0].exact_div(part).ok_or(Error::NotCoprime)?;
        let (a, b) = lift_pair(&current, part, &b0)?;
        factors.push(unscale(&a, mu, prec));
        current = b;
    }

    let degree: usize = factors.iter().map(SeriesPoly::degree).sum();
    let remainder = (degree < w.degree()).then(|| {
        let prod = factors.iter().fold(SeriesPoly::one(prec), |acc, f| acc.mul(f));
        w.truncate(prec).div_rem_monic(&prod).0
    });
    Ok(EdgeSplit { factors, remainder, precision: prec })
}

/// `x^(μa) · A(x, w / x^μ)` for `A` monic of degree `a` in `v`.
fn unscale(a: &[UPoly], mu: usize, prec: usize) -> SeriesPoly {
    let deg = a[0].degree();
    let mut rows = vec![UPoly::zero(); prec];
    for (k, row) in a.iter().enumerate() {
        for (l, c) in row.coeffs().iter().enumerate() {
            let shift = k + mu * (deg - l);
            if shift < prec && !c.is_zero() {
                let mut cs = rows[shift].coeffs().to_vec();
                cs.resize(cs.len().max(l + 1), 0.into());
                cs[l] = &cs[l] + c;
                rows[shift] = UPoly::new(cs);
            }
        }
    }
    SeriesPoly::from_x_major(&rows, prec)
}

/// Factors of an exact polynomial `p` along the integer-order edge whose
/// characteristic polynomial is, up to a scalar, the product of `parts`.
/// The returned factors and remainder multiply back to `p` modulo
/// `x^x_precision`.
pub fn hensel_split(p: &SparsePoly, parts: &[UPoly], x_precision: usize) -> Result<EdgeSplit> {
    let np: NewtonPolygon = newton_polygon(p)?;
    let product = parts.iter().fold(UPoly::one(), |acc, f| &acc * f);
    let edge = np
        .edges
        .iter()
        .find(|e| e.char_poly.monic() == product.monic() || e.char_poly.monic().exact_div(&product).is_some())
        .ok_or_else(|| Error::InvalidInput("no edge has these parts in its characteristic polynomial".into()))?;
    let e: usize = edge.line_constant().ceil().to_integer().try_into().unwrap();
    let work = x_precision + e;
    let ws = weierstrass(p, work)?;
    let split = split_along_edge(&ws.poly, edge, parts)?;
    let factors: Vec<SeriesPoly> = split.factors.iter().map(|f| f.truncate(x_precision)).collect();
    let prod = factors.iter().fold(SeriesPoly::one(x_precision), |acc, f| acc.mul(f));
    let (rem, _) = SeriesPoly::from_sparse(p, x_precision).div_rem_monic(&prod);
    let remainder = (!rem.is_one()).then_some(rem);
    Ok(EdgeSplit { factors, remainder, precision: x_precision })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{series_solve, TruncSeries};

    #[test]
    fn split_two_linear_branches() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let p = &(&(&y.pow(2) + &(&SparsePoly::int(3) * &(&x * &y))) + &(&SparsePoly::int(2) * &x.pow(2)))
            + &x.pow(3);
        let parts = [UPoly::from_ints(&[1, 1]), UPoly::from_ints(&[2, 1])];
        let split = hensel_split(&p, &parts, 6).unwrap();
        assert_eq!(split.factors.len(), 2);
        assert!(split.remainder.is_none());
        let prod = split.factors[0].mul(&split.factors[1]);
        assert_eq!(prod, SeriesPoly::from_sparse(&p, 6));
        // Oracle: each factor is y - s(x) for a root s of p, and the root
        // solves p(x, x·t) / x^2 = 0 near t = -1 or t = -2.
        for (f, c) in split.factors.iter().zip([-1i64, -2]) {
            assert_eq!(f.degree(), 1);
            let root = -&f.coeff(0);
            let t = SparsePoly::y();
            let shifted = p
                .compose([None, Some(&(&x * &(&t + &SparsePoly::int(c)))), None])
                .div_monomial(&[2, 0, 0])
                .unwrap();
            let u = series_solve(&shifted, 5).unwrap();
            let expect = &TruncSeries::constant(c.into(), 5) + &u;
            assert_eq!(root.truncate(6), expect.mul_xpow(1).truncate(6));
        }
    }

    #[test]
    fn weierstrass_strips_unit() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        // (y - x)(1 + y)
        let p = &(&y - &x) * &(&SparsePoly::one() + &y);
        let w = weierstrass(&p, 6).unwrap();
        assert_eq!(w.degree, 1);
        assert_eq!(w.unit_y_degree, 1);
        assert_eq!(w.poly, SeriesPoly::from_sparse(&(&y - &x), 6));
    }

    #[test]
    fn non_coprime_parts_rejected() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let p = &(&y + &x).pow(2) + &x.pow(3);
        let parts = [UPoly::from_ints(&[1, 1]), UPoly::from_ints(&[1, 1])];
        assert!(hensel_split(&p, &parts, 6).is_err());
    }
}

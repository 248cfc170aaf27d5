//! Polynomials in `y` whose coefficients are truncated series in `x`.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{GaussianRational, SparsePoly, TruncSeries, UPoly, Var};

/// `Σ_j coeffs[j] y^j`; all coefficient series share one cap.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesPoly {
    coeffs: Vec<TruncSeries>,
    cap: usize,
}

impl SeriesPoly {
    pub fn new(mut coeffs: Vec<TruncSeries>, cap: usize) -> Self {
        for c in coeffs.iter_mut() {
            *c = TruncSeries::new(c.coeffs()[..c.cap().min(cap)].to_vec(), cap);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) && coeffs.len() > 1 {
            coeffs.pop();
        }
        SeriesPoly { coeffs, cap }
    }

    pub fn from_sparse(p: &SparsePoly, cap: usize) -> Self {
        Self::new(crate::arith::series::y_coefficient_series(p, cap), cap)
    }

    /// Polynomial obtained by reading every coefficient through the cap.
    pub fn to_sparse(&self) -> SparsePoly {
        let cs: Vec<SparsePoly> = self.coeffs.iter().map(TruncSeries::to_poly).collect();
        SparsePoly::from_coeffs_in(Var::Y, &cs)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[TruncSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> TruncSeries {
        self.coeffs.get(j).cloned().unwrap_or_else(|| TruncSeries::zero(self.cap))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == TruncSeries::one(self.cap))
    }

    pub fn truncate(&self, cap: usize) -> Self {
        Self::new(self.coeffs.clone(), cap.min(self.cap))
    }

    pub fn mul(&self, o: &SeriesPoly) -> SeriesPoly {
        let cap = self.cap.min(o.cap);
        let mut c = vec![TruncSeries::zero(cap); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        SeriesPoly::new(c, cap)
    }

    pub fn sub(&self, o: &SeriesPoly) -> SeriesPoly {
        let cap = self.cap.min(o.cap);
        let n = self.coeffs.len().max(o.coeffs.len());
        SeriesPoly::new((0..n).map(|k| &self.coeff(k).truncate(cap) - &o.coeff(k).truncate(cap)).collect(), cap)
    }

    pub fn scale(&self, s: &TruncSeries) -> SeriesPoly {
        let cap = self.cap.min(s.cap());
        SeriesPoly::new(self.coeffs.iter().map(|c| c * s).collect(), cap)
    }

    /// Division by a monic divisor: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, d: &SeriesPoly) -> (SeriesPoly, SeriesPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let cap = self.cap.min(d.cap);
        let dd = d.degree();
        let mut r: Vec<TruncSeries> = self.coeffs.iter().map(|c| c.truncate(cap)).collect();
        if r.len() <= dd {
            return (SeriesPoly::new(vec![TruncSeries::zero(cap)], cap), SeriesPoly::new(r, cap));
        }
        let mut q = vec![TruncSeries::zero(cap); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let a = r[k].clone();
            if a.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = &r[k - dd + j] - &(&a * b);
            }
            q[k - dd] = a;
        }
        r.truncate(dd.max(1));
        (SeriesPoly::new(q, cap), SeriesPoly::new(r, cap))
    }

    /// `p(y + s)`.
    pub fn taylor_shift(&self, s: &TruncSeries) -> SeriesPoly {
        let cap = self.cap.min(s.cap());
        let s = s.truncate(cap);
        let mut acc: Vec<TruncSeries> = vec![TruncSeries::zero(cap)];
        for c in self.coeffs.iter().rev() {
            // acc · (y + s) + c
            let mut next = vec![TruncSeries::zero(cap); acc.len() + 1];
            for (j, a) in acc.iter().enumerate() {
                next[j + 1] = &next[j + 1] + a;
                next[j] = &next[j] + &(a * &s);
            }
            next[0] = &next[0] + &c.truncate(cap);
            acc = next;
        }
        SeriesPoly::new(acc, cap)
    }

    pub fn derivative_y(&self) -> SeriesPoly {
        if self.coeffs.len() <= 1 {
            return SeriesPoly::new(vec![TruncSeries::zero(self.cap)], self.cap);
        }
        SeriesPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.scale(&(j as i64).into())).collect(),
            self.cap,
        )
    }

    /// The polynomial `p(0, y)`.
    pub fn at_x_zero(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| if c.cap() > 0 { c.coeff(0) } else { GaussianRational::zero() }).collect())
    }

    /// x-major view: entry `k` is the coefficient of `x^k` as a polynomial in `y`.
    pub fn x_major(&self) -> Vec<UPoly> {
        (0..self.cap)
            .map(|k| UPoly::new(self.coeffs.iter().map(|c| c.coeff(k)).collect()))
            .collect()
    }

    pub fn from_x_major(rows: &[UPoly], cap: usize) -> SeriesPoly {
        let deg = rows.iter().map(|r| if r.is_zero() { 0 } else { r.degree() }).max().unwrap_or(0);
        let coeffs = (0..=deg)
            .map(|j| TruncSeries::new((0..cap).map(|k| rows.get(k).map(|r| r.coeff(j)).unwrap_or_default()).collect(), cap))
            .collect();
        SeriesPoly::new(coeffs, cap)
    }

    pub fn monic_normalized(&self) -> Option<SeriesPoly> {
        let inv = self.coeffs.last()?.inverse()?;
        Some(self.scale(&inv))
    }

    pub fn one(cap: usize) -> SeriesPoly {
        SeriesPoly::new(vec![TruncSeries::one(cap)], cap)
    }

    /// Support points `(x-exponent, y-exponent, coefficient)` known below the cap.
    pub fn support(&self) -> Vec<(u32, u32, GaussianRational)> {
        let mut out = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    out.push((i as u32, j as u32, a.clone()));
                }
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].coeffs().first().is_some_and(|c| c.is_one())
            && self.coeffs[0].coeffs().iter().skip(1).all(|c| c.is_zero())
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(x^{})", self.to_sparse(), self.cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_back() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let p = SeriesPoly::from_sparse(&(&y.pow(2) + &(&x * &y)), 8);
        let s = TruncSeries::from_poly(&(&x + &x.pow(3)), 8);
        let back = p.taylor_shift(&s).taylor_shift(&-&s);
        assert_eq!(back, p);
    }

    #[test]
    fn monic_division() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let a = SeriesPoly::from_sparse(&(&y + &x), 6);
        let b = SeriesPoly::from_sparse(&(&y - &x.pow(2)), 6);
        let (q, r) = a.mul(&b).div_rem_monic(&a);
        assert_eq!(q, b);
        assert!(r.coeffs().iter().all(TruncSeries::is_zero));
    }
}

//! Power-series solutions of `F(x, y) = 0` through the origin.

use num_traits::Zero;

use super::poly::{SparsePoly, Var};
use super::series::{y_coefficient_series, TruncSeries};
use crate::error::{Error, Result};

/// Evaluates `Σ_j coeffs[j]·s^j` by Horner's rule.
pub fn eval_at_series(coeffs: &[TruncSeries], s: &TruncSeries) -> TruncSeries {
    let mut acc = TruncSeries::zero(s.cap());
    for c in coeffs.iter().rev() {
        acc = &(&acc * s) + c;
    }
    acc
}

/// The unique series `s` with `s(0) = 0` and `F(x, s(x)) ≡ 0 mod x^cap`.
///
/// Newton iteration; each pass doubles the number of correct coefficients.
pub fn series_solve(f: &SparsePoly, cap: usize) -> Result<TruncSeries> {
    f.require_vars(&[Var::X, Var::Y])?;
    if cap == 0 {
        return Ok(TruncSeries::zero(0));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::NotSolvable);
    }
    let coeffs = y_coefficient_series(f, cap);
    let deriv: Vec<TruncSeries> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.scale(&(j as i64).into()))
        .collect();
    if deriv.first().is_none_or(|d| d.coeff(0).is_zero()) {
        return Err(Error::NotSolvable);
    }

    let mut s = TruncSeries::zero(cap);
    let mut prec = 1;
    while prec < cap {
        prec = (2 * prec).min(cap);
        let local: Vec<TruncSeries> = coeffs.iter().map(|c| c.truncate(prec)).collect();
        let dlocal: Vec<TruncSeries> = deriv.iter().map(|c| c.truncate(prec)).collect();
        let st = s.truncate(prec);
        let val = eval_at_series(&local, &st);
        let dval = eval_at_series(&dlocal, &st).inverse().ok_or(Error::NotSolvable)?;
        let next = &st - &(&val * &dval);
        s = TruncSeries::new(next.coeffs().to_vec(), cap);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gaussian::{rat, GaussianRational};

    fn c(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn linear_in_y() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let f = &(&y + &x) + &SparsePoly::constant(GaussianRational::i()).mul_monomial(&[2, 0, 0]);
        let s = series_solve(&f, 5).unwrap();
        assert_eq!(s, TruncSeries::new(vec![c(0, 0), c(-1, 0), c(0, -1)], 5));
    }

    #[test]
    fn scaled_linear() {
        let f = &SparsePoly::int(2) * &SparsePoly::y() + &SparsePoly::x().pow(2);
        let s = series_solve(&f, 4).unwrap();
        assert_eq!(s.coeff(2), GaussianRational::from_rational(rat(-1, 2)));
        assert_eq!(s.valuation(), Some(2));
    }

    #[test]
    fn catalan_like_fixed_point() {
        // y = x - y^2, solved by hand via fixed-point iteration.
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let f = &(&y - &x) + &y.pow(2);
        let s = series_solve(&f, 5).unwrap();
        assert_eq!(s, TruncSeries::new(vec![c(0, 0), c(1, 0), c(-1, 0), c(2, 0), c(-5, 0)], 5));
    }

    #[test]
    fn degenerate_linear_part() {
        let f = &SparsePoly::y().pow(2) - &SparsePoly::x();
        assert_eq!(series_solve(&f, 4), Err(Error::NotSolvable));
    }
}

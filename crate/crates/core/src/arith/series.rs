//! Truncated power series in `x` with Gaussian-rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::poly::{SparsePoly, Var};

/// `Σ_{k < cap} coeffs[k] x^k`. Coefficients at or beyond `cap` are unknown
/// and never read.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncSeries {
    coeffs: Vec<GaussianRational>,
    cap: usize,
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<GaussianRational>, cap: usize) -> Self {
        coeffs.resize(cap, GaussianRational::zero());
        TruncSeries { coeffs, cap }
    }

    pub fn zero(cap: usize) -> Self {
        Self::new(Vec::new(), cap)
    }

    pub fn one(cap: usize) -> Self {
        Self::constant(GaussianRational::one(), cap)
    }

    pub fn constant(c: GaussianRational, cap: usize) -> Self {
        Self::new(vec![c], cap)
    }

    /// Truncation of a polynomial in `x`; other variables are rejected by the caller.
    pub fn from_poly(p: &SparsePoly, cap: usize) -> Self {
        let mut c = vec![GaussianRational::zero(); cap];
        for (m, a) in p.terms() {
            debug_assert!(m[1] == 0 && m[2] == 0, "series from a non-univariate polynomial");
            if (m[0] as usize) < cap {
                c[m[0] as usize] += a;
            }
        }
        TruncSeries { coeffs: c, cap }
    }

    pub fn to_poly(&self) -> SparsePoly {
        SparsePoly::from_terms(
            self.coeffs.iter().enumerate().map(|(k, c)| ([k as u32, 0, 0], c.clone())),
        )
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        assert!(k < self.cap, "coefficient {k} read beyond cap {}", self.cap);
        self.coeffs[k].clone()
    }

    /// Index of the first nonzero coefficient, `None` if zero through the cap.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, cap: usize) -> Self {
        let cap = cap.min(self.cap);
        TruncSeries { coeffs: self.coeffs[..cap].to_vec(), cap }
    }

    pub fn scale(&self, a: &GaussianRational) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c * a).collect(), cap: self.cap }
    }

    /// Multiplication by `x^k`; the cap grows by `k` since the low
    /// coefficients are known zeros.
    pub fn mul_xpow(&self, k: usize) -> Self {
        let mut c = vec![GaussianRational::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        TruncSeries { coeffs: c, cap: self.cap + k }
    }

    /// Division by `x^k`; requires the low coefficients to vanish. The cap shrinks by `k`.
    pub fn div_xpow(&self, k: usize) -> Option<Self> {
        if k > self.cap || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(TruncSeries { coeffs: self.coeffs[k..].to_vec(), cap: self.cap - k })
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs.first()?.inv()?;
        let n = self.cap;
        let mut out = vec![GaussianRational::zero(); n];
        out[0] = c0.clone();
        for k in 1..n {
            let mut acc = GaussianRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out[k] = -(&acc * &c0);
        }
        Some(TruncSeries { coeffs: out, cap: n })
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    /// Index of the first non-real coefficient.
    pub fn first_nonreal(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_real())
    }

    pub fn conj(&self) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.conj()).collect(), cap: self.cap }
    }

    /// Composition `self(c·x^k)` for `k >= 1`.
    pub fn rescale_arg(&self, c: &GaussianRational) -> Self {
        let mut pw = GaussianRational::one();
        let mut out = Vec::with_capacity(self.cap);
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        TruncSeries { coeffs: out, cap: self.cap }
    }
}

impl<'a> Add<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn add(self, o: &TruncSeries) -> TruncSeries {
        let cap = self.cap.min(o.cap);
        TruncSeries { coeffs: (0..cap).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect(), cap }
    }
}

impl<'a> Sub<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn sub(self, o: &TruncSeries) -> TruncSeries {
        let cap = self.cap.min(o.cap);
        TruncSeries { coeffs: (0..cap).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect(), cap }
    }
}

impl<'a> Mul<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn mul(self, o: &TruncSeries) -> TruncSeries {
        let cap = self.cap.min(o.cap);
        let mut c = vec![GaussianRational::zero(); cap];
        for i in 0..cap {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..cap - i {
                if !o.coeffs[j].is_zero() {
                    c[i + j] += &(&self.coeffs[i] * &o.coeffs[j]);
                }
            }
        }
        TruncSeries { coeffs: c, cap }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), cap: self.cap }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(x^{})", self.to_poly(), self.cap)
    }
}

/// Splits a polynomial in `x, y` into its `y`-coefficients as series in `x`.
pub fn y_coefficient_series(p: &SparsePoly, cap: usize) -> Vec<TruncSeries> {
    p.coeffs_in(Var::Y).iter().map(|c| TruncSeries::from_poly(c, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_is_min_of_inputs() {
        let a = TruncSeries::one(5);
        let b = TruncSeries::one(3);
        assert_eq!((&a * &b).cap(), 3);
        assert_eq!((&a + &b).cap(), 3);
    }

    #[test]
    fn inverse_of_one_minus_x() {
        let s = TruncSeries::new(vec![1.into(), (-1).into()], 6);
        let inv = s.inverse().unwrap();
        assert!(inv.coeffs().iter().all(|c| c.is_one()));
        assert_eq!(&s * &inv, TruncSeries::one(6));
    }
}

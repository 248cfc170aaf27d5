//! Dense univariate polynomials over ℚ(i), used for characteristic
//! polynomials and root computations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gaussian::{rat_int, GaussianRational};

/// Coefficients in increasing degree; trailing zeros are trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UPoly {
    c: Vec<GaussianRational>,
}

impl UPoly {
    pub fn new(mut c: Vec<GaussianRational>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&a| GaussianRational::from_int(a)).collect())
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(a: GaussianRational) -> Self {
        Self::new(vec![a])
    }

    /// `T - root`.
    pub fn linear(root: &GaussianRational) -> Self {
        UPoly { c: vec![-root, GaussianRational::one()] }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.c.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> GaussianRational {
        self.c.last().cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_real(&self) -> bool {
        self.c.iter().all(GaussianRational::is_real)
    }

    pub fn scale(&self, a: &GaussianRational) -> Self {
        Self::new(self.c.iter().map(|b| b * a).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    pub fn eval(&self, t: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * t) + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.scale(&rat_int(k as i64)))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dl = d.lead().inv().unwrap();
        let dd = d.degree();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![GaussianRational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let a = &r[k] * &dl;
            if a.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                let t = &a * b;
                r[k - dd + j] -= &t;
            }
            q[k - dd] = a;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Quotient when `d` divides exactly.
    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let inv = r0.lead().inv().unwrap_or_else(GaussianRational::one);
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Yun's square-free decomposition: monic `(factor, multiplicity)` pairs,
    /// factors pairwise coprime, product equals the monic input.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).unwrap();
        let mut c = df.exact_div(&a0).unwrap_or_else(|| df.div_rem(&a0).0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).unwrap();
            c = d.exact_div(&a).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self::new(self.c.iter().map(|a| a.conj()).collect())
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![GaussianRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::new(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.c.iter().map(|a| -a).collect())
    }
}

/// Written in the variable `T`, highest degree first.
impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = super::poly::SparsePoly::from_upoly(self, super::poly::Var::X);
        write!(f, "{}", sp.to_string().replace('x', "T"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let a = UPoly::from_ints(&[1, 2, 1]); // (T+1)^2
        let b = UPoly::from_ints(&[-1, 0, 1]); // (T-1)(T+1)
        assert_eq!(a.gcd(&b), UPoly::from_ints(&[1, 1]));
        let (q, r) = a.div_rem(&UPoly::from_ints(&[1, 1]));
        assert_eq!(q, UPoly::from_ints(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = UPoly::from_ints(&[2, 3, 1]);
        let b = UPoly::from_ints(&[3, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn squarefree() {
        // (T+1)^2 (T-2)
        let p = &UPoly::from_ints(&[1, 2, 1]) * &UPoly::from_ints(&[-2, 1]);
        let sf = p.squarefree_decomposition();
        assert_eq!(sf, vec![(UPoly::from_ints(&[-2, 1]), 1), (UPoly::from_ints(&[1, 1]), 2)]);
    }

    #[test]
    fn display_uses_t() {
        assert_eq!(UPoly::from_ints(&[1, 2, 1]).to_string(), "T^2 + 2*T + 1");
    }
}

//! Sparse polynomials in up to three variables `x`, `y`, `z` over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gaussian::{GaussianRational, Rational};
use super::upoly::UPoly;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector `[deg_x, deg_y, deg_z]`.
pub type Monomial = [u32; 3];

pub fn total_degree(m: &Monomial) -> u32 {
    m[0] + m[1] + m[2]
}

/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; 3];
        m[v.index()] = 1;
        Self::monomial(GaussianRational::one(), m)
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }

    pub fn y() -> Self {
        Self::var(Var::Y)
    }

    pub fn z() -> Self {
        Self::var(Var::Z)
    }

    pub fn monomial(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { terms }
    }

    /// `x^a y^b z^c` with coefficient one.
    pub fn mono(a: u32, b: u32, c: u32) -> Self {
        Self::monomial(GaussianRational::one(), [a, b, c])
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&[0, 0, 0])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| total_degree(m) == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).max()
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).min()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m[v.index()]).max()
    }

    /// Largest `k` with `v^k` dividing the polynomial.
    pub fn order_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m[v.index()]).min()
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m[v.index()] > 0))
            .collect()
    }

    /// Errors when a variable outside `allowed` occurs.
    pub fn require_vars(&self, allowed: &[Var]) -> Result<()> {
        for v in self.vars() {
            if !allowed.contains(&v) {
                return Err(Error::VariableMismatch {
                    var: v,
                    allowed: allowed.iter().map(|v| v.name()).collect::<Vec<_>>().join(","),
                });
            }
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn conj(&self) -> Self {
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::from_rational(r.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| ([k[0] + m[0], k[1] + m[1], k[2] + m[2]], c.clone()))
                .collect(),
        }
    }

    /// Exact division by a monomial; `None` when some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            if k[0] < m[0] || k[1] < m[1] || k[2] < m[2] {
                return None;
            }
            out.insert([k[0] - m[0], k[1] - m[1], k[2] - m[2]], c.clone());
        }
        Some(SparsePoly { terms: out })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut k = *m;
            k[i] -= 1;
            out.add_term(k, &c.scale(&super::gaussian::rat_int(m[i] as i64)));
        }
        out
    }

    /// Drops every term of total degree `>= n`.
    pub fn truncate_total(&self, n: u32) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| total_degree(m) < n)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drops every term whose `v`-degree is `>= n`.
    pub fn truncate_in(&self, v: Var, n: u32) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[v.index()] < n)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Replaces `v` by `replacement`.
    pub fn substitute(&self, v: Var, replacement: &SparsePoly) -> Self {
        let mut subs: [Option<&SparsePoly>; 3] = [None, None, None];
        subs[v.index()] = Some(replacement);
        self.compose(subs)
    }

    /// Simultaneous substitution; `None` leaves a variable untouched.
    pub fn compose(&self, subs: [Option<&SparsePoly>; 3]) -> Self {
        let mut cache: [Vec<SparsePoly>; 3] = [vec![Self::one()], vec![Self::one()], vec![Self::one()]];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut term = Self::monomial(c.clone(), [0, 0, 0]);
            let mut keep = [0u32; 3];
            for i in 0..3 {
                match subs[i] {
                    Some(s) => {
                        let powers = &mut cache[i];
                        while powers.len() <= m[i] as usize {
                            let next = powers.last().unwrap() * s;
                            powers.push(next);
                        }
                        term = &term * &powers[m[i] as usize];
                    }
                    None => keep[i] = m[i],
                }
            }
            out = &out + &term.mul_monomial(&keep);
        }
        out
    }

    /// Swaps the roles of `a` and `b`.
    pub fn swap_vars(&self, a: Var, b: Var) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut k = *m;
                    k.swap(a.index(), b.index());
                    (k, c.clone())
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: [&GaussianRational; 3]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                if m[i] > 0 {
                    t = &t * &point[i].pow(m[i]);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval_c64(&self, point: [Complex64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for i in 0..3 {
                if m[i] > 0 {
                    t *= point[i].powu(m[i]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients with respect to `v`: entry `k` is the coefficient of `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<SparsePoly> {
        let i = v.index();
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let mut k = *m;
            let e = k[i] as usize;
            k[i] = 0;
            out[e].add_term(k, c);
        }
        out
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[SparsePoly]) -> Self {
        let mut m = [0; 3];
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            m[v.index()] = k as u32;
            out = &out + &c.mul_monomial(&m);
        }
        out
    }

    /// Dense univariate view in `v`; errors if another variable occurs.
    pub fn to_upoly(&self, v: Var) -> Result<UPoly> {
        let others: Vec<Var> = self.vars().into_iter().filter(|w| *w != v).collect();
        if !others.is_empty() {
            return Err(Error::NotUnivariate(
                others.iter().map(|w| w.name()).collect::<Vec<_>>().join(","),
            ));
        }
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut c = vec![GaussianRational::zero(); deg + 1];
        for (m, a) in &self.terms {
            c[m[v.index()] as usize] = a.clone();
        }
        Ok(UPoly::new(c))
    }

    pub fn from_upoly(u: &UPoly, v: Var) -> Self {
        let mut m = [0; 3];
        let mut out = Self::zero();
        for (k, c) in u.coeffs().iter().enumerate() {
            m[v.index()] = k as u32;
            out.add_term(m, c);
        }
        out
    }

    /// Leading coefficient with respect to a scalar multiple normalisation:
    /// the coefficient of the largest monomial in map order.
    pub fn last_coeff(&self) -> Option<&GaussianRational> {
        self.terms.values().next_back()
    }
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, o: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, o: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, o: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term([m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]], &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, o: SparsePoly) -> SparsePoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, o: &SparsePoly) -> SparsePoly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match m[v.index()] {
            0 => {}
            1 => parts.push(v.name().to_string()),
            e => parts.push(format!("{}^{}", v.name(), e)),
        }
    }
    parts.join("*")
}

/// Parseable text form, highest total degree first.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| total_degree(b.0).cmp(&total_degree(a.0)).then_with(|| b.0.cmp(a.0)));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            // Pull a leading minus out of real and purely imaginary coefficients.
            let negative = (c.im.is_zero() && c.re < Rational::zero())
                || (c.re.is_zero() && c.im < Rational::zero());
            let mag = if negative { -c } else { c.clone() };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mono = fmt_monomial(m);
            let coeff = if !mag.re.is_zero() && !mag.im.is_zero() {
                format!("({})", mag)
            } else {
                mag.to_string()
            };
            if mono.is_empty() {
                write!(f, "{}", coeff)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", coeff, mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gaussian::rat;

    fn i() -> SparsePoly {
        SparsePoly::constant(GaussianRational::i())
    }

    #[test]
    fn square_minus_x5_expansion() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let base = &(&y + &x) + &(&i() * &x.pow(2));
        let p = &base.pow(2) - &x.pow(5);
        let two_i = SparsePoly::constant(GaussianRational::from_ints(0, 2));
        let expected = y.pow(2)
            + SparsePoly::int(2) * &x * &y
            + &two_i * &x.pow(2) * &y
            + x.pow(2)
            + &two_i * &x.pow(3)
            - x.pow(4)
            - x.pow(5);
        assert_eq!(p, expected);
    }

    #[test]
    fn derivative_and_substitution() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let p = &y.pow(2) + &(SparsePoly::int(2) * &x * &y);
        assert_eq!(p.derivative(Var::Y), SparsePoly::int(2) * &y + SparsePoly::int(2) * &x);
        let q = &y + &x;
        assert_eq!(q.substitute(Var::Y, &(&y - &x)), y);
    }

    #[test]
    fn variable_check() {
        let p = SparsePoly::z() + SparsePoly::x();
        assert!(p.require_vars(&[Var::X, Var::Y]).is_err());
        assert!(p.require_vars(&Var::ALL).is_ok());
    }

    #[test]
    fn display() {
        let p = SparsePoly::from_terms([
            ([1, 1, 0], GaussianRational::from_ints(0, 2)),
            ([0, 0, 0], GaussianRational::new(rat(-1, 2), rat(0, 1))),
            ([2, 0, 0], GaussianRational::from_ints(1, 1)),
        ]);
        assert_eq!(p.to_string(), "(1+i)*x^2 + 2*i*x*y - 1/2");
    }
}

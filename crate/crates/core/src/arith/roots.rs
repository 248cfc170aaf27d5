//! Root computations for univariate polynomials: Sturm-sequence isolation of
//! real roots and extraction of the roots lying in ℚ(i).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::gaussian::{rat, rat_int, GaussianRational, Rational};
use super::upoly::UPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lower: Rational,
    pub upper: Rational,
    pub multiplicity: u32,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lower <= r && r <= &self.upper
    }
}

/// Complete isolation of the real roots of a real polynomial. Intervals are
/// closed, pairwise disjoint and sorted; a degenerate interval is an exact root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRootIsolation {
    pub polynomial: UPoly,
    pub intervals: Vec<RootInterval>,
    pub nonreal_count: usize,
}

impl RealRootIsolation {
    pub fn real_count(&self) -> usize {
        self.intervals.iter().map(|r| r.multiplicity as usize).sum()
    }
}

fn eval_real(p: &UPoly, t: &Rational) -> Rational {
    p.eval(&GaussianRational::from_rational(t.clone())).re
}

struct Sturm {
    chain: Vec<UPoly>,
}

impl Sturm {
    fn new(p: &UPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        Sturm { chain }
    }

    fn variations(&self, t: &Rational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = eval_real(p, t);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if last.is_some_and(|l| l != pos) {
                count += 1;
            }
            last = Some(pos);
        }
        count
    }

    /// Distinct roots in the open interval `(a, b)`; `a`, `b` must not be roots.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Power of two strictly exceeding every root modulus (Cauchy bound).
fn root_bound(p: &UPoly) -> Rational {
    let lead = p.lead().re.abs();
    let m = p.coeffs()[..p.degree()]
        .iter()
        .map(|c| c.re.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let bound = m + Rational::one();
    let mut b = Rational::one();
    while b <= bound {
        b *= rat_int(2);
    }
    b
}

/// A splitting point inside `(lo, hi)` that is not a root of `p`.
fn split_point(p: &UPoly, lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    let mid = lo + &width * rat(1, 2);
    if !eval_real(p, &mid).is_zero() {
        return mid;
    }
    let mut k = 3u32;
    loop {
        let off = &width / Rational::from_integer(BigInt::from(1u64) << k);
        let cand = &mid + &off;
        if !eval_real(p, &cand).is_zero() {
            return cand;
        }
        k += 1;
    }
}

struct Pending {
    lo: Rational,
    hi: Rational,
    mult: u32,
    factor: usize,
}

/// Isolates the real roots of `u` with multiplicities via square-free
/// decomposition and Sturm sequences.
pub fn isolate_real_roots(u: &UPoly) -> Result<RealRootIsolation> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(c) = u.coeffs().iter().find(|c| !c.is_real()) {
        return Err(Error::NonRealCoefficient(c.to_string()));
    }
    let parts = u.squarefree_decomposition();
    let mut exact = Vec::new();
    let mut pending = Vec::new();
    let mut chains = Vec::new();
    for (idx, (h, mult)) in parts.iter().enumerate() {
        let sturm = Sturm::new(h);
        if h.degree() == 1 {
            let r = -(h.coeff(0).re / h.coeff(1).re);
            exact.push(RootInterval { lower: r.clone(), upper: r, multiplicity: *mult });
            chains.push(sturm);
            continue;
        }
        let b = root_bound(h);
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            match sturm.count(&lo, &hi) {
                0 => {}
                1 => pending.push(Pending { lo, hi, mult: *mult, factor: idx }),
                _ => {
                    let mid = split_point(h, &lo, &hi);
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        chains.push(sturm);
    }

    let refine = |p: &mut Pending| {
        let h = &parts[p.factor].0;
        let mid = split_point(h, &p.lo, &p.hi);
        if chains[p.factor].count(&p.lo, &mid) == 1 {
            p.hi = mid;
        } else {
            p.lo = mid;
        }
    };
    for p in pending.iter_mut() {
        while &p.hi - &p.lo > Rational::one() {
            refine(p);
        }
    }
    // Refine until no closed interval meets another one.
    loop {
        let mut clash = None;
        'outer: for (i, p) in pending.iter().enumerate() {
            for q in pending.iter().skip(i + 1) {
                if p.lo <= q.hi && q.lo <= p.hi {
                    clash = Some(i);
                    break 'outer;
                }
            }
            for e in &exact {
                if p.lo <= e.lower && e.lower <= p.hi {
                    clash = Some(i);
                    break 'outer;
                }
            }
        }
        match clash {
            Some(i) => {
                refine(&mut pending[i]);
                // Refine every other interval too so that pairs shrink together.
                for j in 0..pending.len() {
                    if j != i {
                        let (lo, hi) = (pending[j].lo.clone(), pending[j].hi.clone());
                        if pending[i].lo <= hi && lo <= pending[i].hi {
                            refine(&mut pending[j]);
                        }
                    }
                }
            }
            None => break,
        }
    }

    let mut intervals: Vec<RootInterval> = exact;
    intervals.extend(
        pending.into_iter().map(|p| RootInterval { lower: p.lo, upper: p.hi, multiplicity: p.mult }),
    );
    intervals.sort_by(|a, b| a.lower.cmp(&b.lower));
    let real: usize = intervals.iter().map(|r| r.multiplicity as usize).sum();
    Ok(RealRootIsolation { polynomial: u.clone(), intervals, nonreal_count: u.degree() - real })
}

/// Roots of `u` lying in ℚ(i), with multiplicities, and the cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSplit {
    pub roots: Vec<(GaussianRational, u32)>,
    pub cofactor: UPoly,
}

impl LinearSplit {
    /// `cofactor · Π (T - r)^k`.
    pub fn reconstruct(&self) -> UPoly {
        self.roots
            .iter()
            .fold(self.cofactor.clone(), |acc, (r, k)| &acc * &UPoly::linear(r).pow(*k))
    }
}

/// All complex roots of a polynomial by the Aberth–Ehrlich iteration.
fn approximate_roots(p: &UPoly) -> Vec<Complex64> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let c: Vec<Complex64> = p.coeffs().iter().map(|a| a.to_c64()).collect();
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, ang)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn round_gaussian(z: Complex64) -> Option<(BigInt, BigInt)> {
    if !z.re.is_finite() || !z.im.is_finite() || z.re.abs() > 9.0e15 || z.im.abs() > 9.0e15 {
        return None;
    }
    Some((BigInt::from(z.re.round() as i64), BigInt::from(z.im.round() as i64)))
}

/// Roots in ℚ(i) of a square-free monic polynomial.
fn squarefree_linear_roots(h: &UPoly) -> Vec<GaussianRational> {
    // A root r of D·h ∈ ℤ[i][T] satisfies D·r ∈ ℤ[i].
    let d = h
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, &c.denom_lcm()));
    let df = d.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    let dr = Rational::from_integer(d);
    let mut found: Vec<GaussianRational> = Vec::new();
    for z in approximate_roots(h) {
        let Some((re, im)) = round_gaussian(z * df) else { continue };
        let cand = GaussianRational::new(
            Rational::from_integer(re) / &dr,
            Rational::from_integer(im) / &dr,
        );
        if !found.contains(&cand) && h.eval(&cand).is_zero() {
            found.push(cand);
        }
    }
    found
}

/// Splits off every linear factor over ℚ(i). Roots come sorted
/// lexicographically by `(re, im)`.
pub fn gaussian_linear_roots(u: &UPoly) -> Result<LinearSplit> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let mut cofactor = UPoly::constant(u.lead());
    for (h, mult) in u.squarefree_decomposition() {
        let mut rest = h.clone();
        for r in squarefree_linear_roots(&h) {
            roots.push((r.clone(), mult));
            rest = rest.exact_div(&UPoly::linear(&r)).expect("verified root divides");
        }
        cofactor = &cofactor * &rest.pow(mult);
    }
    roots.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(LinearSplit { roots, cofactor })
}

/// Convenience: is every real root of `u` strictly negative, and are all roots real?
pub fn all_roots_real_negative(u: &UPoly) -> Result<bool> {
    let iso = isolate_real_roots(u)?;
    Ok(iso.nonreal_count == 0 && iso.intervals.iter().all(|r| r.upper.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_root() {
        let iso = isolate_real_roots(&UPoly::from_ints(&[1, 2, 1])).unwrap();
        assert_eq!(iso.intervals, vec![RootInterval { lower: rat_int(-1), upper: rat_int(-1), multiplicity: 2 }]);
        assert_eq!(iso.nonreal_count, 0);
    }

    #[test]
    fn sqrt_two() {
        let iso = isolate_real_roots(&UPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(iso.intervals.len(), 2);
        assert_eq!((iso.intervals[0].lower.clone(), iso.intervals[0].upper.clone()), (rat_int(-2), rat_int(-1)));
        assert_eq!((iso.intervals[1].lower.clone(), iso.intervals[1].upper.clone()), (rat_int(1), rat_int(2)));
    }

    #[test]
    fn no_real_roots() {
        let iso = isolate_real_roots(&UPoly::from_ints(&[1, 0, 1])).unwrap();
        assert!(iso.intervals.is_empty());
        assert_eq!(iso.nonreal_count, 2);
    }

    #[test]
    fn rejects_complex_coefficients() {
        let u = UPoly::new(vec![GaussianRational::i(), 1.into()]);
        assert!(matches!(isolate_real_roots(&u), Err(Error::NonRealCoefficient(_))));
    }

    #[test]
    fn close_roots_from_different_factors_are_separated() {
        // (T - 1)(T^2 - 2)(T^2 - 3)^2
        let p = &(&UPoly::from_ints(&[-1, 1]) * &UPoly::from_ints(&[-2, 0, 1])) * &UPoly::from_ints(&[-3, 0, 1]).pow(2);
        let iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.real_count(), 7);
        for w in iso.intervals.windows(2) {
            assert!(w[0].upper < w[1].lower);
        }
    }

    #[test]
    fn gaussian_roots() {
        let s = gaussian_linear_roots(&UPoly::from_ints(&[1, 2, 1])).unwrap();
        assert_eq!(s.roots, vec![(GaussianRational::from_int(-1), 2)]);
        assert_eq!(s.cofactor, UPoly::one());

        let p = &UPoly::linear(&GaussianRational::i()) * &UPoly::from_ints(&[-2, 0, 1]);
        let s = gaussian_linear_roots(&p).unwrap();
        assert_eq!(s.roots, vec![(GaussianRational::i(), 1)]);
        assert_eq!(s.cofactor, UPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(s.reconstruct(), p);

        let p = UPoly::from_ints(&[1, 1, 1]);
        let s = gaussian_linear_roots(&p).unwrap();
        assert!(s.roots.is_empty());
        assert_eq!(s.cofactor, p);
    }

    #[test]
    fn rational_gaussian_roots() {
        let r1 = GaussianRational::new(rat(1, 3), rat(-2, 5));
        let r2 = GaussianRational::new(rat(-7, 2), rat(0, 1));
        let p = (&UPoly::linear(&r1) * &UPoly::linear(&r2).pow(3)).scale(&GaussianRational::from_ints(3, 1));
        let s = gaussian_linear_roots(&p).unwrap();
        assert_eq!(s.roots, vec![(r2, 3), (r1, 1)]);
        assert_eq!(s.reconstruct(), p);
    }
}

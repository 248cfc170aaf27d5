//! Product ideals `Π (y + q_i(x), x^m_i)`, exact membership by truncated
//! linear algebra, and integral-dependence certificates.

pub mod linalg;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::admissibility::FactorForm;
use crate::arith::{series_solve, GaussianRational, Monomial, SparsePoly, TruncSeries, Var};
use crate::error::{Error, Result};

use linalg::{solve, Matrix};

/// Largest number of factors expanded into `2^k` products.
pub const MAX_FACTORS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductIdeal {
    /// `(q, m)` per factor, repeated for multiplicity; `q` is reduced mod `x^m`.
    pub factors: Vec<(SparsePoly, u32)>,
    pub nvars: usize,
    /// Explicit generators for ideals not of product shape.
    pub extra_generators: Option<Vec<SparsePoly>>,
}

impl ProductIdeal {
    /// Product ideal from `(q, m)` pairs.
    pub fn product(factors: Vec<(SparsePoly, u32)>) -> Result<Self> {
        let mut out = Vec::with_capacity(factors.len());
        for (q, m) in factors {
            q.require_vars(&[Var::X])?;
            if m == 0 {
                return Err(Error::InvalidInput("factor with m = 0".into()));
            }
            if !q.constant_term().is_zero() {
                return Err(Error::InvalidInput(format!("q = {q} has a constant term")));
            }
            out.push((q.truncate_in(Var::X, m), m));
        }
        Ok(ProductIdeal { factors: out, nvars: 2, extra_generators: None })
    }

    pub fn explicit(generators: Vec<SparsePoly>) -> Self {
        let nvars = if generators.iter().any(|g| g.degree_in(Var::Z).unwrap_or(0) > 0) { 3 } else { 2 };
        ProductIdeal { factors: Vec::new(), nvars, extra_generators: Some(generators) }
    }

    /// `M = Σ m_i`; the ideal contains `(x, y)^M`.
    pub fn truncation_bound(&self) -> u32 {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.extra_generators.is_none() && self.factors.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factors": self.factors.iter().map(|(q, m)| serde_json::json!({"q": q.to_string(), "m": m})).collect::<Vec<_>>(),
            "nvars": self.nvars,
            "bound": self.truncation_bound(),
            "generators": expand_generators(self).iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// The ideal of a list of admissible forms: each form contributes `r × multiplicity` copies.
pub fn build_ideal(forms: &[(FactorForm, u32)]) -> ProductIdeal {
    let mut factors = Vec::new();
    for (form, k) in forms {
        let q = form.q_poly().truncate_in(Var::X, form.m);
        for _ in 0..form.r * *k as usize {
            factors.push((q.clone(), form.m));
        }
    }
    ProductIdeal { factors, nvars: 2, extra_generators: None }
}

/// All choice products, fewest `x^m` choices first, duplicates and scalar
/// multiples removed.
pub fn expand_generators(ideal: &ProductIdeal) -> Vec<SparsePoly> {
    if let Some(gens) = &ideal.extra_generators {
        return dedupe(gens.clone());
    }
    let k = ideal.factors.len();
    assert!(k <= MAX_FACTORS, "too many factors to expand");
    let lin: Vec<SparsePoly> = ideal.factors.iter().map(|(q, _)| &SparsePoly::y() + q).collect();
    let mut masks: Vec<u32> = (0..1u32 << k).collect();
    masks.sort_by_key(|&mask| (mask.count_ones(), std::cmp::Reverse(mask)));
    let mut gens = Vec::with_capacity(masks.len());
    for mask in masks {
        let mut p = SparsePoly::one();
        let mut xpow = 0;
        for (i, (_, m)) in ideal.factors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                xpow += m;
            } else {
                p = &p * &lin[i];
            }
        }
        gens.push(p.mul_monomial(&[xpow, 0, 0]));
    }
    dedupe(gens)
}

fn normalize(p: &SparsePoly) -> SparsePoly {
    match p.last_coeff().and_then(|c| c.inv()) {
        Some(inv) => p.scale(&inv),
        None => p.clone(),
    }
}

fn dedupe(gens: Vec<SparsePoly>) -> Vec<SparsePoly> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let n = normalize(&g);
        if !seen.contains(&n) {
            seen.push(n);
            out.push(g);
        }
    }
    out
}

fn monomials_below(vars: &[Var], n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..n {
        let mut stack = vec![([0u32; 3], 0usize, d)];
        while let Some((m, idx, left)) = stack.pop() {
            if idx + 1 == vars.len() {
                let mut m = m;
                m[vars[idx].index()] = left;
                out.push(m);
                continue;
            }
            for e in (0..=left).rev() {
                let mut m2 = m;
                m2[vars[idx].index()] = e;
                stack.push((m2, idx + 1, left - e));
            }
        }
    }
    out.sort();
    out
}

/// `f ≡ Σ coeff_k · gens[k] + residual` with `ord(residual) ≥ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub combination: Vec<(SparsePoly, usize)>,
    pub residual: SparsePoly,
    pub bound: u32,
}

impl MembershipCertificate {
    /// Re-expands the combination and checks it against `f`.
    pub fn replay(&self, f: &SparsePoly, gens: &[SparsePoly]) -> bool {
        let mut sum = self.residual.clone();
        for (c, k) in &self.combination {
            match gens.get(*k) {
                Some(g) => sum = &sum + &(c * g),
                None => return false,
            }
        }
        sum == *f && self.residual.order().is_none_or(|o| o >= self.bound)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "combination": self.combination.iter().map(|(c, k)| serde_json::json!({"coeff": c.to_string(), "generator": k})).collect::<Vec<_>>(),
            "residual": self.residual.to_string(),
            "bound": self.bound,
        })
    }
}

/// A linear functional on polynomials of degree `< truncation` that kills
/// every generator multiple but not `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationCertificate {
    pub truncation: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub functional: BTreeMap<Monomial, GaussianRational>,
}

impl RefutationCertificate {
    pub fn apply(&self, p: &SparsePoly) -> GaussianRational {
        self.functional
            .iter()
            .fold(GaussianRational::zero(), |acc, (m, l)| &acc + &(l * &p.coeff(m)))
    }

    /// Checks the functional against `f` and all truncated generator multiples.
    pub fn replay(&self, f: &SparsePoly, gens: &[SparsePoly], vars: &[Var]) -> bool {
        if self.apply(f).is_zero() {
            return false;
        }
        let monos = monomials_below(vars, self.truncation);
        gens.iter().all(|g| {
            let o = g.order().unwrap_or(u32::MAX);
            monos
                .iter()
                .filter(|m| crate::arith::poly::total_degree(m).saturating_add(o) < self.truncation)
                .all(|m| self.apply(&g.mul_monomial(m)).is_zero())
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "truncation": self.truncation,
            "unknowns": self.unknowns,
            "equations": self.equations,
            "rank": self.rank,
            "functional": self.functional.iter().map(|(m, c)| serde_json::json!({"monomial": m, "value": c.to_string()})).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(MembershipCertificate),
    NotMember(RefutationCertificate),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Solves `f ≡ Σ c_k·g_k mod m^n` over monomials in `vars`.
fn truncated_system(f: &SparsePoly, gens: &[SparsePoly], vars: &[Var], n: u32) -> Membership {
    let rows = monomials_below(vars, n);
    let index: BTreeMap<Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut columns: Vec<(usize, Monomial)> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let o = g.order().unwrap_or(u32::MAX);
        for m in &rows {
            if crate::arith::poly::total_degree(m).saturating_add(o) < n {
                columns.push((k, *m));
            }
        }
    }
    let mut a = Matrix::zeros(rows.len(), columns.len());
    for (c, (k, m)) in columns.iter().enumerate() {
        for (mono, coef) in gens[*k].mul_monomial(m).truncate_total(n).terms() {
            a.rows[index[mono]][c] = coef.clone();
        }
    }
    let b: Vec<GaussianRational> = rows.iter().map(|m| f.coeff(m)).collect();
    let sol = solve(&a, &b);
    match sol.solution {
        Some(u) => {
            let mut combo: BTreeMap<usize, SparsePoly> = BTreeMap::new();
            for ((k, m), c) in columns.iter().zip(&u) {
                if !c.is_zero() {
                    combo.entry(*k).or_insert_with(SparsePoly::zero).add_term(*m, c);
                }
            }
            let combination: Vec<(SparsePoly, usize)> = combo.into_iter().map(|(k, c)| (c, k)).collect();
            let mut residual = f.clone();
            for (c, k) in &combination {
                residual = &residual - &(c * &gens[*k]);
            }
            Membership::Member(MembershipCertificate { combination, residual, bound: n })
        }
        None => {
            // Dual system: λ·A = 0, λ·b = 1.
            let mut dual = a.transpose();
            dual.rows.push(b.clone());
            let mut rhs = vec![GaussianRational::zero(); columns.len()];
            rhs.push(GaussianRational::one());
            let lambda = solve(&dual, &rhs).solution.expect("inconsistent system has a dual witness");
            let functional = rows
                .iter()
                .zip(lambda)
                .filter(|(_, l)| !l.is_zero())
                .map(|(m, l)| (*m, l))
                .collect();
            Membership::NotMember(RefutationCertificate {
                truncation: n,
                unknowns: columns.len(),
                equations: rows.len(),
                rank: sol.rank,
                functional,
            })
        }
    }
}

/// Exact membership in a two-variable product ideal.
pub fn member(f: &SparsePoly, ideal: &ProductIdeal) -> Result<Membership> {
    f.require_vars(&[Var::X, Var::Y])?;
    if ideal.nvars != 2 || ideal.extra_generators.is_some() {
        return Err(Error::InvalidInput("exact membership needs a two-variable product ideal".into()));
    }
    debug_assert!(ideal.factors.iter().all(|(q, _)| q.constant_term().is_zero()));
    let n = ideal.truncation_bound();
    let gens = expand_generators(ideal);
    Ok(truncated_system(f, &gens, &[Var::X, Var::Y], n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TruncatedOutcome {
    NotMember(RefutationCertificate),
    Unknown,
}

/// Refutation-only membership test modulo `m^n`, in any number of variables.
pub fn member_refute_truncated(f: &SparsePoly, generators: &[SparsePoly], n: u32) -> Result<TruncatedOutcome> {
    let max_deg = generators.iter().filter_map(SparsePoly::total_degree).max().unwrap_or(0);
    if n < max_deg + 1 {
        return Err(Error::InvalidInput(format!("truncation {n} must exceed the generator degree {max_deg}")));
    }
    let mut vars = f.vars();
    for g in generators {
        for v in g.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    vars.sort();
    if vars.is_empty() {
        vars.push(Var::X);
    }
    Ok(match truncated_system(f, generators, &vars, n) {
        Membership::NotMember(c) => TruncatedOutcome::NotMember(c),
        Membership::Member(_) => TruncatedOutcome::Unknown,
    })
}

/// One summand of `a_j`: `coeff · Σ_{p ∈ products} Π_{k ∈ p} gens[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTerm {
    pub j: usize,
    pub products: Vec<Vec<usize>>,
    pub coeff: SparsePoly,
}

/// `f^n + Σ_j a_j f^(n-j) = 0` with each `a_j ∈ I^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralCertificate {
    pub equation_degree: usize,
    pub terms: Vec<CertificateTerm>,
}

/// Expands the monic equation and checks that it vanishes identically.
pub fn verify_integral_equation(f: &SparsePoly, gens: &[SparsePoly], cert: &IntegralCertificate) -> Result<bool> {
    let n = cert.equation_degree;
    if n == 0 {
        return Err(Error::MalformedCertificate("equation degree must be positive".into()));
    }
    let mut a: Vec<SparsePoly> = vec![SparsePoly::zero(); n + 1];
    for (t, term) in cert.terms.iter().enumerate() {
        if term.j == 0 || term.j > n {
            return Err(Error::MalformedCertificate(format!("term {t}: j = {} outside 1..={n}", term.j)));
        }
        let mut sum = SparsePoly::zero();
        for p in &term.products {
            if p.len() != term.j {
                return Err(Error::MalformedCertificate(format!(
                    "term {t}: product of {} generators in a_{}",
                    p.len(),
                    term.j
                )));
            }
            let mut prod = SparsePoly::one();
            for &k in p {
                let g = gens
                    .get(k)
                    .ok_or_else(|| Error::MalformedCertificate(format!("term {t}: generator index {k} out of range")))?;
                prod = &prod * g;
            }
            sum = &sum + &prod;
        }
        a[term.j] = &a[term.j] + &(&term.coeff * &sum);
    }
    let mut total = f.pow(n as u32);
    for (j, aj) in a.iter().enumerate().skip(1) {
        total = &total + &(aj * &f.pow((n - j) as u32));
    }
    Ok(total.is_zero())
}

/// The same single-factor ideal written as `(y + q₂(x), x^m)` after
/// exchanging `x` and `y`; requires `q'(0) ≠ 0`.
pub fn swap_factor(q: &SparsePoly, m: u32) -> Result<SparsePoly> {
    // Solve y + q(x) = 0 for x = s(y), computed with the roles of x and y exchanged.
    let f = &SparsePoly::x() + &q.swap_vars(Var::X, Var::Y);
    let s: TruncSeries = series_solve(&f, m as usize)?;
    Ok((-&s).to_poly())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (SparsePoly, SparsePoly) {
        (SparsePoly::x(), SparsePoly::y())
    }

    fn two(n: i64) -> SparsePoly {
        SparsePoly::int(n)
    }

    #[test]
    fn generators_of_squared_factor() {
        let (x, y) = xy();
        let ideal = ProductIdeal::product(vec![(x.clone(), 2), (x.clone(), 2)]).unwrap();
        let gens = expand_generators(&ideal);
        assert_eq!(gens, vec![(&y + &x).pow(2), &(&y + &x) * &x.pow(2), x.pow(4)]);
    }

    #[test]
    fn generators_of_distinct_factors() {
        let (x, y) = xy();
        let ideal = ProductIdeal::product(vec![(x.clone(), 2), (&two(2) * &x, 3)]).unwrap();
        let gens = expand_generators(&ideal);
        let (a, b) = (&y + &x, &y + &(&two(2) * &x));
        assert_eq!(gens, vec![&a * &b, &a * &x.pow(3), &b * &x.pow(2), x.pow(5)]);
    }

    #[test]
    fn membership_examples() {
        let (x, y) = xy();
        let ideal = ProductIdeal::product(vec![(x.clone(), 2), (x.clone(), 2)]).unwrap();
        let gens = expand_generators(&ideal);
        let f = &(&y + &x) * &x.pow(2);
        let Membership::Member(cert) = member(&f, &ideal).unwrap() else { panic!() };
        assert!(cert.replay(&f, &gens));
        let f = x.pow(3);
        let Membership::NotMember(refute) = member(&f, &ideal).unwrap() else { panic!() };
        assert!(refute.replay(&f, &gens, &[Var::X, Var::Y]));
        assert!(member(&y.pow(4), &ideal).unwrap().is_member());
    }

    #[test]
    fn unit_ideal_contains_everything() {
        let ideal = build_ideal(&[]);
        assert!(member(&SparsePoly::one(), &ideal).unwrap().is_member());
    }

    fn remark_generators() -> (SparsePoly, Vec<SparsePoly>) {
        let (x, y, z) = (SparsePoly::x(), SparsePoly::y(), SparsePoly::z());
        let u = &(&z + &x) + &y;
        let a = &x.pow(2) + &y.pow(2);
        let b = &x.pow(2) + &(&two(2) * &y.pow(2));
        let gens = vec![u.pow(2), &u * &a, &u * &b, &a * &b];
        (u, gens)
    }

    #[test]
    fn three_variable_refutation() {
        let (x, y) = xy();
        let (u, gens) = remark_generators();
        let f = &(&u * &x) * &y;
        let TruncatedOutcome::NotMember(cert) = member_refute_truncated(&f, &gens, 5).unwrap() else { panic!() };
        assert!(cert.replay(&f, &gens, &[Var::X, Var::Y, Var::Z]));
        assert_eq!(member_refute_truncated(&u.pow(2), &gens, 5).unwrap(), TruncatedOutcome::Unknown);
        let f = SparsePoly::z().pow(5).mul_monomial(&[1, 0, 0]);
        assert_eq!(member_refute_truncated(&f, &gens, 5).unwrap(), TruncatedOutcome::Unknown);
    }

    #[test]
    fn integral_equation_examples() {
        let (x, y) = xy();
        let (u, gens) = remark_generators();
        let f = &(&u * &x) * &y;
        // a_2 = 2(uA)^2 - 3(uA)(uB) + (uB)^2 with uA = gens[1], uB = gens[2].
        let cert = IntegralCertificate {
            equation_degree: 2,
            terms: vec![
                CertificateTerm { j: 2, products: vec![vec![1, 1]], coeff: two(2) },
                CertificateTerm { j: 2, products: vec![vec![1, 2]], coeff: two(-3) },
                CertificateTerm { j: 2, products: vec![vec![2, 2]], coeff: two(1) },
            ],
        };
        assert_eq!(verify_integral_equation(&f, &gens, &cert), Ok(true));

        let small = vec![y.clone(), x.pow(2)];
        let bad = IntegralCertificate {
            equation_degree: 2,
            terms: vec![CertificateTerm { j: 2, products: vec![vec![1]], coeff: two(-1) }],
        };
        assert!(matches!(verify_integral_equation(&x, &small, &bad), Err(Error::MalformedCertificate(_))));

        let linear = IntegralCertificate {
            equation_degree: 1,
            terms: vec![CertificateTerm { j: 1, products: vec![vec![0]], coeff: -&x }],
        };
        assert_eq!(verify_integral_equation(&(&x * &y), &small, &linear), Ok(true));
    }

    #[test]
    fn swapped_presentation() {
        let (x, y) = xy();
        let q = &x + &x.pow(2);
        let q2 = swap_factor(&q, 3).unwrap();
        let i1 = ProductIdeal::product(vec![(q.clone(), 3)]).unwrap();
        let i2 = ProductIdeal::product(vec![(q2, 3)]).unwrap();
        for f in [&y + &x, x.pow(3), &x * &y, &(&y + &x) + &(&two(-1) * &y.pow(2)), y.pow(2)] {
            assert_eq!(
                member(&f, &i1).unwrap().is_member(),
                member(&f.swap_vars(Var::X, Var::Y), &i2).unwrap().is_member(),
                "{f}"
            );
        }
    }
}

//! Decides whether `g` vanishes on the closed local half-plane product only
//! at the origin, one analytic cluster at a time.

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{series_solve, GaussianRational, Rational, SparsePoly, TruncSeries, Var};
use crate::error::{Error, Result};
use crate::puiseux::{cluster_tree, ClusterOptions, FactorCluster, SeriesPoly, Stop};

/// Data `(q, m, ψ(0), r)` of an admissible factor `y + q(x) + x^m ψ(x^(1/r))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorForm {
    /// Real, no constant term, recorded below degree `m`.
    pub q: TruncSeries,
    pub m: u32,
    pub psi0: GaussianRational,
    pub r: usize,
    /// Order of the first term past `x^m` in the shifted polygon.
    pub ramification_hint: Option<Rational>,
}

impl FactorForm {
    pub fn q_poly(&self) -> SparsePoly {
        self.q.to_poly()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q_poly().to_string(),
            "m": self.m,
            "psi0": self.psi0.to_string(),
            "r": self.r,
            "ramification_hint": self.ramification_hint.as_ref().map(|h| h.to_string()),
        })
    }
}

/// The clause that broke.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    XFactor { multiplicity: u32 },
    NonRealLeading { coefficient: GaussianRational },
    NonPositiveSlope { coefficient: GaussianRational },
    AllReal,
    OddM { m: u32 },
    NonPositiveImPsi { psi0: GaussianRational },
    ShiftedPolygonViolation { w_exponent: u32, x_exponent: u32, m: u32, r: usize },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::XFactor { .. } => "XFactor",
            Witness::NonRealLeading { .. } => "NonRealLeading",
            Witness::NonPositiveSlope { .. } => "NonPositiveSlope",
            Witness::AllReal => "AllReal",
            Witness::OddM { .. } => "OddM",
            Witness::NonPositiveImPsi { .. } => "NonPositiveImPsi",
            Witness::ShiftedPolygonViolation { .. } => "ShiftedPolygonViolation",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let detail = match self {
            Witness::XFactor { multiplicity } => serde_json::json!({ "multiplicity": multiplicity }),
            Witness::NonRealLeading { coefficient } | Witness::NonPositiveSlope { coefficient } => {
                serde_json::json!({ "coefficient": coefficient.to_string() })
            }
            Witness::AllReal => serde_json::json!({}),
            Witness::OddM { m } => serde_json::json!({ "m": m }),
            Witness::NonPositiveImPsi { psi0 } => serde_json::json!({ "psi0": psi0.to_string() }),
            Witness::ShiftedPolygonViolation { w_exponent, x_exponent, m, r } => serde_json::json!({
                "term": [w_exponent, x_exponent], "m": m, "r": r
            }),
        };
        serde_json::json!({ "kind": self.kind(), "detail": detail })
    }
}

/// Machine-readable cause of an undecided check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    Unsplittable { char_poly: String },
    CapExceeded { message: String },
    Precision { needed: usize, available: usize },
    UncertifiedReal { x_precision: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds(Vec<(FactorForm, u32)>),
    Fails(Vec<Witness>),
    Inconclusive(Vec<Reason>),
}

impl Verdict {
    pub fn outcome(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "Holds",
            Verdict::Fails(_) => "Fails",
            Verdict::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn forms(&self) -> &[(FactorForm, u32)] {
        match self {
            Verdict::Holds(f) => f,
            _ => &[],
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Verdict::Inconclusive(rs) if rs.iter().any(|r| matches!(r, Reason::CapExceeded { .. })))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Holds(forms) => serde_json::json!({
                "outcome": "Holds",
                "forms": forms.iter().map(|(f, k)| serde_json::json!({"form": f.to_json(), "multiplicity": k})).collect::<Vec<_>>(),
            }),
            Verdict::Fails(ws) => serde_json::json!({
                "outcome": "Fails",
                "witnesses": ws.iter().map(Witness::to_json).collect::<Vec<_>>(),
            }),
            Verdict::Inconclusive(rs) => serde_json::json!({ "outcome": "Inconclusive", "reasons": rs }),
        }
    }

    /// Combines verdicts of independent factors: any failure wins, then any
    /// undecided factor.
    pub fn combine(verdicts: Vec<Verdict>) -> Verdict {
        let mut forms = Vec::new();
        let mut witnesses = Vec::new();
        let mut reasons = Vec::new();
        for v in verdicts {
            match v {
                Verdict::Holds(f) => forms.extend(f),
                Verdict::Fails(w) => witnesses.extend(w),
                Verdict::Inconclusive(r) => reasons.extend(r),
            }
        }
        if !witnesses.is_empty() {
            Verdict::Fails(witnesses)
        } else if !reasons.is_empty() {
            Verdict::Inconclusive(reasons)
        } else {
            Verdict::Holds(merge_forms(forms))
        }
    }
}

fn merge_forms(forms: Vec<(FactorForm, u32)>) -> Vec<(FactorForm, u32)> {
    let mut out: Vec<(FactorForm, u32)> = Vec::new();
    for (f, k) in forms {
        match out.iter_mut().find(|(g, _)| *g == f) {
            Some((_, n)) => *n += k,
            None => out.push((f, k)),
        }
    }
    out
}

/// Result of checking one cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorCheck {
    Holds(FactorForm),
    Fails(Witness),
    Inconclusive(Reason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QmDetection {
    Found { q: TruncSeries, m: u32, psi0: GaussianRational },
    AllRealCertified,
    Inconclusive,
}

/// A cluster made of one exact polynomial factor `p` (any leading unit).
pub fn exact_cluster(p: &SparsePoly, x_precision: usize) -> Result<FactorCluster> {
    p.require_vars(&[Var::X, Var::Y])?;
    let sp = SeriesPoly::from_sparse(p, x_precision);
    let approximant = sp
        .monic_normalized()
        .ok_or_else(|| Error::InvalidInput(format!("leading y-coefficient of {p} vanishes at the origin")))?;
    Ok(FactorCluster {
        y_degree: approximant.degree(),
        x_precision,
        approximant,
        provenance: Vec::new(),
        shift: SparsePoly::zero(),
        leading_order: None,
        stop: Stop::Exhausted,
        exact: Some(p.clone()),
        multiplicity: 1,
    })
}

/// The series `h` with `(1/r!) ∂^(r-1) p / ∂y^(r-1) (x, -h(x)) ≡ 0`.
pub fn extract_h(p: &FactorCluster, cap: usize) -> Result<TruncSeries> {
    let r = p.y_degree;
    if let Some(exact) = &p.exact {
        let mut d = exact.clone();
        for _ in 1..r {
            d = d.derivative(Var::Y);
        }
        return Ok(-&series_solve(&d, cap)?);
    }
    let cap = cap.min(p.approximant.cap());
    let a = p.approximant.coeff(r - 1).truncate(cap);
    Ok(a.scale(&GaussianRational::from_int(r as i64).inv().unwrap()))
}

/// Splits `h` at its first non-real coefficient.
pub fn detect_qm(h: &TruncSeries, p: &FactorCluster) -> QmDetection {
    if let Some(m) = h.first_nonreal() {
        return QmDetection::Found { q: h.truncate(m), m: m as u32, psi0: h.coeff(m) };
    }
    match &p.exact {
        Some(exact) => {
            let cs = exact.coeffs_in(Var::Y);
            let r = cs.len() - 1;
            let (ar, ar1) = (&cs[r], &cs[r - 1]);
            if (ar1 * &ar.conj()) == (&ar1.conj() * ar) {
                QmDetection::AllRealCertified
            } else {
                QmDetection::Inconclusive
            }
        }
        None => QmDetection::Inconclusive,
    }
}

/// `p(w - h_{≤m})` together with the precision below which its terms are exact.
pub fn shifted_form(p: &FactorCluster, h_m: &SparsePoly) -> (SparsePoly, Option<usize>) {
    let (poly, prec) = match &p.exact {
        Some(e) => (e.clone(), None),
        None => (p.approximant.to_sparse(), Some(p.approximant.cap())),
    };
    let sub = &SparsePoly::y() - h_m;
    (poly.compose([None, Some(&sub), None]), prec)
}

/// Checks a single cluster against the factor-form criterion.
pub fn check_factor(p: &FactorCluster) -> Result<FactorCheck> {
    let undecided = |fallback: Reason| match &p.stop {
        Stop::Unsplittable { char_poly, .. } => Reason::Unsplittable { char_poly: char_poly.to_string() },
        _ => fallback,
    };
    let cap = p.x_precision.max(2);
    let h = extract_h(p, cap)?;
    if h.cap() < 2 {
        return Ok(FactorCheck::Inconclusive(undecided(Reason::Precision { needed: 2, available: h.cap() })));
    }
    let h1 = h.coeff(1);
    if !h1.is_real() {
        return Ok(FactorCheck::Fails(Witness::NonRealLeading { coefficient: h1 }));
    }
    if !h1.re.is_positive() {
        return Ok(FactorCheck::Fails(Witness::NonPositiveSlope { coefficient: h1 }));
    }
    let (q, m, psi0) = match detect_qm(&h, p) {
        QmDetection::Found { q, m, psi0 } => (q, m, psi0),
        QmDetection::AllRealCertified => return Ok(FactorCheck::Fails(Witness::AllReal)),
        QmDetection::Inconclusive => {
            return Ok(FactorCheck::Inconclusive(undecided(Reason::UncertifiedReal { x_precision: h.cap() })))
        }
    };
    if m % 2 == 1 {
        return Ok(FactorCheck::Fails(Witness::OddM { m }));
    }
    if !psi0.im.is_positive() {
        return Ok(FactorCheck::Fails(Witness::NonPositiveImPsi { psi0 }));
    }

    let r = p.y_degree;
    let h_m = h.truncate(m as usize + 1).to_poly();
    let (shifted, prec) = shifted_form(p, &h_m);
    let bound = Rational::from_integer((r as i64).into());
    let mut hint: Option<Rational> = None;
    for (mono, _) in shifted.terms() {
        let (i, j) = (mono[1], mono[0]);
        if prec.is_some_and(|n| j as usize >= n) || (i as usize == r && j == 0) {
            continue;
        }
        let lhs = Rational::from_integer((i as i64).into()) + Rational::new((j as i64).into(), (m as i64).into());
        if lhs <= bound {
            return Ok(FactorCheck::Fails(Witness::ShiftedPolygonViolation { w_exponent: i, x_exponent: j, m, r }));
        }
        if (i as usize) < r {
            let order = Rational::new((j as i64).into(), ((r - i as usize) as i64).into());
            if hint.as_ref().is_none_or(|h| order < *h) {
                hint = Some(order);
            }
        }
    }
    if let Some(n) = prec {
        if n <= m as usize * r {
            return Ok(FactorCheck::Inconclusive(undecided(Reason::Precision { needed: m as usize * r + 1, available: n })));
        }
    }
    Ok(FactorCheck::Holds(FactorForm { q, m, psi0, r, ramification_hint: hint }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissibleOptions {
    pub depth_cap: usize,
    /// `None` selects the default precision for the input.
    pub x_precision: Option<usize>,
}

impl Default for AdmissibleOptions {
    fn default() -> Self {
        AdmissibleOptions { depth_cap: 32, x_precision: None }
    }
}

pub fn admissible(g: &SparsePoly) -> Result<Verdict> {
    admissible_with(g, AdmissibleOptions::default())
}

pub fn admissible_with(g: &SparsePoly, opts: AdmissibleOptions) -> Result<Verdict> {
    g.require_vars(&[Var::X, Var::Y])?;
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = g.order_in(Var::X).unwrap_or(0);
    if k > 0 {
        return Ok(Verdict::Fails(vec![Witness::XFactor { multiplicity: k }]));
    }
    let mut copts = ClusterOptions::for_poly(g);
    copts.depth_cap = opts.depth_cap;
    if let Some(n) = opts.x_precision {
        copts.x_precision = n;
    }
    let tree = match cluster_tree(g, copts) {
        Ok(t) => t,
        Err(Error::CapExceeded(message)) => return Ok(Verdict::Inconclusive(vec![Reason::CapExceeded { message }])),
        Err(e) => return Err(e),
    };
    let checks: Vec<(FactorCheck, u32)> = tree
        .clusters
        .par_iter()
        .map(|c| check_factor(c).map(|v| (v, c.multiplicity)))
        .collect::<Result<_>>()?;
    Ok(Verdict::combine(
        checks
            .into_iter()
            .map(|(c, k)| match c {
                FactorCheck::Holds(f) => Verdict::Holds(vec![(f, k)]),
                FactorCheck::Fails(w) => Verdict::Fails(vec![w]),
                FactorCheck::Inconclusive(r) => Verdict::Inconclusive(vec![r]),
            })
            .collect(),
    ))
}

/// Admissibility of an explicitly factored `g = Π factors`.
pub fn admissible_factored(factors: &[SparsePoly], opts: AdmissibleOptions) -> Result<Verdict> {
    let vs = factors.iter().map(|f| admissible_with(f, opts)).collect::<Result<Vec<_>>>()?;
    Ok(Verdict::combine(vs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn xy() -> (SparsePoly, SparsePoly) {
        (SparsePoly::x(), SparsePoly::y())
    }

    fn ix(k: u32) -> SparsePoly {
        SparsePoly::constant(GaussianRational::i()).mul_monomial(&[k, 0, 0])
    }

    fn main_example(dev: u32) -> SparsePoly {
        let (x, y) = xy();
        &(&(&y + &x) + &ix(2)).pow(2) - &x.pow(dev)
    }

    #[test]
    fn extract_h_examples() {
        let (x, y) = xy();
        let h = extract_h(&exact_cluster(&main_example(5), 6).unwrap(), 6).unwrap();
        assert_eq!(h, TruncSeries::from_poly(&(&x + &ix(2)), 6));
        let p = &(&y + &x).pow(2) - &x.pow(5);
        assert_eq!(extract_h(&exact_cluster(&p, 6).unwrap(), 6).unwrap(), TruncSeries::from_poly(&x, 6));
        let p = &(&y + &(&SparsePoly::int(3) * &x)) + &x.pow(2);
        let h = extract_h(&exact_cluster(&p, 6).unwrap(), 6).unwrap();
        assert_eq!(h, TruncSeries::from_poly(&(&(&SparsePoly::int(3) * &x) + &x.pow(2)), 6));
    }

    #[test]
    fn detect_qm_examples() {
        let (x, _) = xy();
        let p = exact_cluster(&main_example(5), 8).unwrap();
        let h = TruncSeries::from_poly(&(&x + &ix(2)), 8);
        assert_eq!(
            detect_qm(&h, &p),
            QmDetection::Found { q: TruncSeries::from_poly(&x, 2), m: 2, psi0: GaussianRational::i() }
        );
        let h = TruncSeries::from_poly(
            &(&(&x + &x.pow(3)) + &SparsePoly::constant(GaussianRational::from_ints(2, 1)).mul_monomial(&[4, 0, 0])),
            8,
        );
        let QmDetection::Found { q, m, psi0 } = detect_qm(&h, &p) else { panic!() };
        assert_eq!((q.to_poly(), m, psi0), (&x + &x.pow(3), 4, GaussianRational::from_ints(2, 1)));
        let (x, y) = xy();
        let real = exact_cluster(&(&(&y + &x).pow(2) - &x.pow(5)), 8).unwrap();
        assert_eq!(detect_qm(&TruncSeries::from_poly(&x, 8), &real), QmDetection::AllRealCertified);
    }

    #[test]
    fn check_factor_main_example() {
        let p = exact_cluster(&main_example(5), 12).unwrap();
        let FactorCheck::Holds(form) = check_factor(&p).unwrap() else { panic!() };
        assert_eq!((form.m, form.r, form.psi0.clone()), (2, 2, GaussianRational::i()));
        assert_eq!(form.q.to_poly(), SparsePoly::x());
        assert_eq!(form.ramification_hint, Some(rat(5, 2)));
    }

    #[test]
    fn check_factor_failures() {
        let (x, y) = xy();
        let real = exact_cluster(&(&(&y + &x).pow(2) - &x.pow(5)), 12).unwrap();
        assert_eq!(check_factor(&real).unwrap(), FactorCheck::Fails(Witness::AllReal));
        let v = admissible(&(&y.pow(2) + &x.pow(2))).unwrap();
        let Verdict::Fails(ws) = v else { panic!("{v:?}") };
        assert!(ws.iter().all(|w| w.kind() == "NonRealLeading"));
    }

    #[test]
    fn admissible_examples() {
        let (x, y) = xy();
        let v = admissible(&main_example(5)).unwrap();
        assert!(v.holds(), "{v:?}");
        assert_eq!(v.forms().len(), 1);
        assert_eq!(v.forms()[0].1, 1);
        assert!(matches!(admissible(&(&y + &x)).unwrap(), Verdict::Fails(_)));
        let g = &x * &(&(&y + &x) + &ix(2));
        assert_eq!(admissible(&g).unwrap(), Verdict::Fails(vec![Witness::XFactor { multiplicity: 1 }]));
    }

    #[test]
    fn odd_m_fixture() {
        let (x, y) = xy();
        let g = &(&y + &x).pow(2) + &x.pow(6);
        let Verdict::Fails(ws) = admissible(&g).unwrap() else { panic!() };
        assert!(ws.contains(&Witness::OddM { m: 3 }));
    }

    #[test]
    fn shifted_polygon_violation() {
        let (x, y) = xy();
        let g = &(&(&y + &x) + &ix(2)).pow(2) - &x.pow(3);
        let Verdict::Fails(ws) = admissible(&g).unwrap() else { panic!() };
        assert_eq!(ws[0].kind(), "ShiftedPolygonViolation");
    }
}

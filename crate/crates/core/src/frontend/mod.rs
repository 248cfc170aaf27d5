//! Input parsing and the commands behind the `hpb` binary.

pub mod json;
pub mod parser;

use std::fmt::Write as _;

use serde_json::{json, Value};

pub use json::{envelope, parse_certificate, parse_ideal_spec, SCHEMA};
pub use parser::{parse_expr, parse_poly, Expr, ExprKind, Span};

use crate::admissibility::{admissible_with, AdmissibleOptions, Verdict};
use crate::arith::{SparsePoly, Var};
use crate::blowup::{default_step_cap, monomialize, ord_divisor, real_points_check, transversal_arc_for, valuative_member, Arc, BlowupTree};
use crate::error::{Error, Result};
use crate::ideal::{build_ideal, expand_generators, member, member_refute_truncated, verify_integral_equation, IntegralCertificate, Membership, ProductIdeal, TruncatedOutcome};
use crate::oracle::{arc_ratio, equivalence_report, ratio_scan, sequence_hint, Region, SamplePlan};

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub depth_cap: Option<usize>,
    pub x_precision: Option<usize>,
    pub max_blowups: Option<usize>,
    pub trunc: Option<u32>,
}

impl Options {
    fn admissible(&self) -> AdmissibleOptions {
        let d = AdmissibleOptions::default();
        AdmissibleOptions { depth_cap: self.depth_cap.unwrap_or(d.depth_cap), x_precision: self.x_precision }
    }
}

/// Three-valued result carried by the exit code under `--exit-verdict`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn exit_code(self) -> i32 {
        match self {
            Tri::Yes => 0,
            Tri::No => 1,
            Tri::Unknown => 2,
        }
    }
}

/// What a command prints.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub verdict: Tri,
}

/// Input errors exit with 3, exhausted caps with 4.
pub fn error_exit_code(e: &Error) -> i32 {
    if e.is_cap() {
        4
    } else {
        3
    }
}

fn poly_strings(ps: &[SparsePoly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn list(ps: &[SparsePoly]) -> String {
    format!("({})", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
}

/// Admissibility, analysing each supplied factor separately when `g` is
/// written as an explicit product.
pub fn admissibility(g: &Expr, opts: &Options) -> Result<Verdict> {
    let o = opts.admissible();
    let Some(factors) = g.product_factors() else {
        return admissible_with(&g.expand(), o);
    };
    let mut verdicts = Vec::new();
    for (e, k) in factors {
        let p = e.expand();
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if p.is_constant() {
            continue;
        }
        verdicts.push(match admissible_with(&p, o)? {
            Verdict::Holds(forms) => Verdict::Holds(forms.into_iter().map(|(f, m)| (f, m * k)).collect()),
            other => other,
        });
    }
    Ok(Verdict::combine(verdicts))
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = format!("admissibility: {}\n", v.outcome());
    match v {
        Verdict::Holds(forms) => {
            for (f, k) in forms {
                let hint = f.ramification_hint.as_ref().map(|h| format!(", deviation order {h}")).unwrap_or_default();
                let _ = writeln!(s, "  factor q = {}, m = {}, psi(0) = {}, r = {} (x{k}){hint}", f.q_poly(), f.m, f.psi0, f.r);
            }
        }
        Verdict::Fails(ws) => {
            for w in ws {
                let _ = writeln!(s, "  witness {}: {}", w.kind(), w.to_json());
            }
        }
        Verdict::Inconclusive(rs) => {
            for r in rs {
                let _ = writeln!(s, "  reason: {}", serde_json::to_string(r).unwrap_or_default());
            }
        }
    }
    s
}

pub fn cmd_admissible(g: &str, opts: &Options) -> Result<Outcome> {
    let v = admissibility(&parse_expr(g)?, opts)?;
    let verdict = match &v {
        Verdict::Holds(_) => Tri::Yes,
        Verdict::Fails(_) => Tri::No,
        Verdict::Inconclusive(_) => Tri::Unknown,
    };
    Ok(Outcome { json: envelope("admissible", json!({"g": parse_poly(g)?.to_string(), "verdict": v.to_json()})), text: verdict_text(&v), verdict })
}

/// `I(g)` when `g` is admissible.
pub fn ideal_of(g: &Expr, opts: &Options) -> Result<(Verdict, Option<ProductIdeal>)> {
    let v = admissibility(g, opts)?;
    let ideal = v.holds().then(|| build_ideal(v.forms()));
    Ok((v, ideal))
}

fn generators_of(ideal: &ProductIdeal) -> Vec<SparsePoly> {
    if ideal.is_unit() {
        vec![SparsePoly::one()]
    } else {
        expand_generators(ideal)
    }
}

pub fn cmd_ideal(g: &str, opts: &Options) -> Result<Outcome> {
    let (v, ideal) = ideal_of(&parse_expr(g)?, opts)?;
    let mut text = verdict_text(&v);
    let body = match &ideal {
        Some(i) => {
            let gens = generators_of(i);
            let _ = writeln!(text, "I(g) = {}", list(&gens));
            json!({"verdict": v.to_json(), "ideal": i.to_json()})
        }
        None => {
            text.push_str("I(g) is not defined: g is not admissible\n");
            json!({"verdict": v.to_json(), "ideal": Value::Null})
        }
    };
    let verdict = if ideal.is_some() { Tri::Yes } else if v.is_cap() { Tri::Unknown } else { Tri::No };
    Ok(Outcome { json: envelope("ideal", body), text, verdict })
}

fn combination_text(m: &Membership, gens: &[SparsePoly]) -> String {
    match m {
        Membership::Member(c) => {
            if c.residual.is_zero() && c.combination.len() == 1 && c.combination[0].0.is_constant() {
                let (coef, k) = &c.combination[0];
                let scale = if num_traits::One::is_one(&coef.constant_term()) { String::new() } else { format!("{} * ", coef) };
                return format!("certificate: f = {scale}generator #{} of {}\n", k + 1, list(gens));
            }
            let mut s = format!("certificate: f = sum of multiples of {}\n", list(gens));
            for (coef, k) in &c.combination {
                let _ = writeln!(s, "  + ({coef}) * generator #{}", k + 1);
            }
            if !c.residual.is_zero() {
                let _ = writeln!(s, "  + {} (order >= {})", c.residual, c.bound);
            }
            s
        }
        Membership::NotMember(r) => format!(
            "refutation: truncated system mod (x, y)^{} infeasible ({} equations, {} unknowns, rank {}); functional with {} nonzero values\n",
            r.truncation,
            r.equations,
            r.unknowns,
            r.rank,
            r.functional.len()
        ),
    }
}

fn membership_json(m: &Membership) -> Value {
    match m {
        Membership::Member(c) => json!({"member": true, "certificate": c.to_json()}),
        Membership::NotMember(r) => json!({"member": false, "refutation": r.to_json()}),
    }
}

/// A divisor on which `f` vanishes to lower order than the ideal, with an
/// arc through it along which `|f| / Σ|g_i|` blows up.
#[derive(Clone, Debug)]
pub struct DivergentArc {
    pub arc: Arc,
    pub f_order: u32,
    pub ideal_order: u32,
    pub ratios: Vec<(f64, f64)>,
}

impl DivergentArc {
    pub fn to_json(&self) -> Value {
        json!({
            "arc": self.arc.to_json(),
            "f_order": self.f_order,
            "ideal_order": self.ideal_order,
            "ratios": self.ratios.iter().map(|(t, r)| json!([t, r])).collect::<Vec<_>>(),
            "hint": sequence_hint(&self.ratios),
        })
    }
}

pub fn divergent_arc(f: &SparsePoly, gens: &[SparsePoly], max_blowups: Option<usize>) -> Result<Option<DivergentArc>> {
    let tree = monomialize(gens, max_blowups.unwrap_or_else(|| default_step_cap(gens)))?;
    for row in tree.order_table() {
        let fo = ord_divisor(f, &tree, row.divisor).unwrap_or(u32::MAX);
        if fo < row.ideal {
            let mut avoid = vec![f.clone()];
            avoid.extend(gens.iter().cloned());
            let arc = transversal_arc_for(&tree, row.divisor, &avoid);
            let ratios = arc_ratio(f, gens, &arc, 1..=12);
            return Ok(Some(DivergentArc { arc, f_order: fo, ideal_order: row.ideal, ratios }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundedness {
    Bounded,
    NotBounded,
    Inconclusive,
}

impl Boundedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundedness::Bounded => "Bounded",
            Boundedness::NotBounded => "NotBounded",
            Boundedness::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub verdict: Boundedness,
    pub admissibility: Verdict,
    pub ideal: Option<ProductIdeal>,
    pub generators: Vec<SparsePoly>,
    pub membership: Option<Membership>,
    pub arc: Option<DivergentArc>,
}

/// Decides whether `f/g` is bounded near the origin on the product of upper half-planes.
pub fn check(f: &SparsePoly, g: &Expr, opts: &Options) -> Result<CheckReport> {
    f.require_vars(&[Var::X, Var::Y])?;
    let (v, ideal) = ideal_of(g, opts)?;
    let Some(ideal) = ideal else {
        let verdict = if matches!(v, Verdict::Fails(_)) { Boundedness::NotBounded } else { Boundedness::Inconclusive };
        return Ok(CheckReport { verdict, admissibility: v, ideal: None, generators: Vec::new(), membership: None, arc: None });
    };
    let m = member(f, &ideal)?;
    let generators = generators_of(&ideal);
    let arc = if m.is_member() {
        None
    } else {
        match divergent_arc(f, &generators, opts.max_blowups) {
            Ok(a) => a,
            Err(e) if e.is_cap() || matches!(e, Error::NonRationalCenter(_)) => None,
            Err(e) => return Err(e),
        }
    };
    let verdict = if m.is_member() { Boundedness::Bounded } else { Boundedness::NotBounded };
    Ok(CheckReport { verdict, admissibility: v, ideal: Some(ideal), generators, membership: Some(m), arc })
}

impl CheckReport {
    pub fn to_json(&self, f: &SparsePoly) -> Value {
        json!({
            "f": f.to_string(),
            "verdict": self.verdict.as_str(),
            "admissibility": self.admissibility.to_json(),
            "ideal": self.ideal.as_ref().map(ProductIdeal::to_json),
            "membership": self.membership.as_ref().map(membership_json),
            "witness_arc": self.arc.as_ref().map(DivergentArc::to_json),
        })
    }

    pub fn text(&self) -> String {
        let mut s = format!("{}\n", self.verdict.as_str());
        s.push_str(&verdict_text(&self.admissibility));
        if self.ideal.is_some() {
            let _ = writeln!(s, "I(g) = {}", list(&self.generators));
        }
        if let Some(m) = &self.membership {
            s.push_str(&combination_text(m, &self.generators));
        }
        if let Some(a) = &self.arc {
            let _ = writeln!(
                s,
                "witness arc: x = {}, y = {}; ord_t f = {} < ord_t I = {}; ratio {}",
                a.arc.x.to_string().replace('x', "t"),
                a.arc.y.to_string().replace('x', "t"),
                a.f_order,
                a.ideal_order,
                serde_json::to_string(&sequence_hint(&a.ratios)).unwrap_or_default().trim_matches('"'),
            );
        }
        s
    }
}

pub fn cmd_check(f: &str, g: &str, opts: &Options) -> Result<Outcome> {
    let fp = parse_poly(f)?;
    let r = check(&fp, &parse_expr(g)?, opts)?;
    let verdict = match r.verdict {
        Boundedness::Bounded => Tri::Yes,
        Boundedness::NotBounded => Tri::No,
        Boundedness::Inconclusive => Tri::Unknown,
    };
    Ok(Outcome { json: envelope("check", r.to_json(&fp)), text: r.text(), verdict })
}

/// Either a JSON ideal spec (a path ending in `.json`, or inline `{...}`) or a polynomial `g`.
pub enum IdealSource {
    Spec(ProductIdeal),
    Denominator(Expr),
}

pub fn ideal_source(arg: &str) -> Result<IdealSource> {
    let t = arg.trim_start();
    if t.starts_with('{') {
        return Ok(IdealSource::Spec(parse_ideal_spec(t)?));
    }
    if arg.ends_with(".json") {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))?;
        return Ok(IdealSource::Spec(parse_ideal_spec(&text)?));
    }
    Ok(IdealSource::Denominator(parse_expr(arg)?))
}

fn resolve_ideal(src: IdealSource, opts: &Options) -> Result<ProductIdeal> {
    match src {
        IdealSource::Spec(i) => Ok(i),
        IdealSource::Denominator(g) => match ideal_of(&g, opts)? {
            (_, Some(i)) => Ok(i),
            (v, None) if v.is_cap() => Err(Error::CapExceeded("admissibility of g is inconclusive".into())),
            (v, None) => Err(Error::InvalidInput(format!("g is not admissible ({})", v.outcome()))),
        },
    }
}

pub fn cmd_member(f: &str, ideal: &str, opts: &Options) -> Result<Outcome> {
    let fp = parse_poly(f)?;
    let ideal = resolve_ideal(ideal_source(ideal)?, opts)?;
    let gens = generators_of(&ideal);
    if ideal.extra_generators.is_none() {
        let m = member(&fp, &ideal)?;
        let verdict = if m.is_member() { Tri::Yes } else { Tri::No };
        let text = format!("{}\n{}", if m.is_member() { "member" } else { "not a member" }, combination_text(&m, &gens));
        let body = json!({"f": fp.to_string(), "generators": poly_strings(&gens), "membership": membership_json(&m)});
        return Ok(Outcome { json: envelope("member", body), text, verdict });
    }
    let n = opts
        .trunc
        .ok_or_else(|| Error::InvalidInput("explicit generators need --trunc N for a truncated refutation".into()))?;
    let out = member_refute_truncated(&fp, &gens, n)?;
    let (text, body, verdict) = match &out {
        TruncatedOutcome::NotMember(r) => (
            format!("not a member (refuted mod degree {n})\n{}", combination_text(&Membership::NotMember(r.clone()), &gens)),
            json!({"member": false, "refutation": r.to_json()}),
            Tri::No,
        ),
        TruncatedOutcome::Unknown => (
            format!("unknown: f lies in the ideal modulo degree {n}\n"),
            json!({"member": Value::Null, "truncation": n}),
            Tri::Unknown,
        ),
    };
    let mut body = body;
    body["f"] = json!(fp.to_string());
    body["generators"] = json!(poly_strings(&gens));
    Ok(Outcome { json: envelope("member", body), text, verdict })
}

fn tree_for(ideal: &str, opts: &Options) -> Result<BlowupTree> {
    let ideal = resolve_ideal(ideal_source(ideal)?, opts)?;
    let gens = generators_of(&ideal);
    monomialize(&gens, opts.max_blowups.unwrap_or_else(|| default_step_cap(&gens)))
}

fn order_table_text(tree: &BlowupTree) -> String {
    let mut s = String::new();
    for row in tree.order_table() {
        let _ = writeln!(s, "  E{}: ord(I) = {}, generator orders {:?}", row.divisor + 1, row.ideal, row.generators);
    }
    s
}

pub fn cmd_monomialize(ideal: &str, opts: &Options) -> Result<Outcome> {
    let tree = tree_for(ideal, opts)?;
    let mut text = format!("{} blow-ups, {} charts\n", tree.steps(), tree.charts.len());
    text.push_str(&order_table_text(&tree));
    let real = real_points_check(&tree);
    let _ = writeln!(text, "real centers: {real}");
    let verdict = if real { Tri::Yes } else { Tri::No };
    Ok(Outcome { json: envelope("monomialize", tree.to_json()), text, verdict })
}

pub fn cmd_valmember(f: &str, ideal: &str, opts: &Options) -> Result<Outcome> {
    let fp = parse_poly(f)?;
    let tree = tree_for(ideal, opts)?;
    let ok = valuative_member(&fp, &tree);
    let orders: Vec<Value> = tree
        .order_table()
        .iter()
        .map(|r| json!({"divisor": r.divisor, "f": ord_divisor(&fp, &tree, r.divisor), "ideal": r.ideal}))
        .collect();
    let mut text = format!("{}\n", if ok { "integral over the ideal" } else { "not integral over the ideal" });
    for o in &orders {
        let _ = writeln!(text, "  E{}: ord(f) = {}, ord(I) = {}", o["divisor"].as_u64().unwrap_or(0) + 1, o["f"], o["ideal"]);
    }
    let body = json!({"f": fp.to_string(), "member": ok, "orders": orders, "generators": poly_strings(&tree.generators)});
    Ok(Outcome { json: envelope("valmember", body), text, verdict: if ok { Tri::Yes } else { Tri::No } })
}

#[derive(Clone, Debug)]
pub struct OracleArgs {
    pub region: Option<Region>,
    pub levels: u32,
    pub samples: usize,
    pub seed: u64,
}

/// With a region: `|f|/|g|` there. Without: the full equivalence report.
pub fn cmd_oracle(f: &str, g: &str, args: &OracleArgs, opts: &Options) -> Result<Outcome> {
    let fp = parse_poly(f)?;
    let ge = parse_expr(g)?;
    let gp = ge.expand();
    match &args.region {
        Some(region) => {
            let curves = match ideal_of(&ge, opts) {
                Ok((_, Some(i))) => i.factors.iter().map(|(q, _)| q.clone()).collect(),
                _ => Vec::new(),
            };
            let plan = SamplePlan::new(region.clone(), args.levels, args.samples, args.seed).with_critical(curves);
            let r = ratio_scan(&fp, std::slice::from_ref(&gp), &plan)?;
            let mut text = format!("|f|/|g| on {region:?}: {:?}\n", r.hint);
            for (t, s) in r.levels.iter().zip(&r.sups) {
                let _ = writeln!(text, "  t = {t:e}: sup = {s:e}");
            }
            Ok(Outcome { json: envelope("oracle", json!({"region": region, "report": r.to_json()})), text, verdict: Tri::Unknown })
        }
        None => {
            let r = equivalence_report(&fp, &gp, args.levels, args.samples, args.seed)?;
            let mut text = format!("exact membership: {}\n", r.member);
            for c in r.conditions.iter().chain(&r.mutual) {
                let _ = writeln!(text, "  {}: {:?}", c.name, c.report.hint);
            }
            for d in &r.disagreements {
                let _ = writeln!(text, "  disagreement: {d}");
            }
            let verdict = if r.consistent() { Tri::Yes } else { Tri::No };
            Ok(Outcome { json: envelope("oracle", r.to_json()), text, verdict })
        }
    }
}

pub fn certify(f: &SparsePoly, ideal: &ProductIdeal, cert: &IntegralCertificate) -> Result<bool> {
    verify_integral_equation(f, &generators_of(ideal), cert)
}

pub fn cmd_certify(f: &str, ideal: &str, equation: &str, opts: &Options) -> Result<Outcome> {
    let fp = parse_poly(f)?;
    let ideal = resolve_ideal(ideal_source(ideal)?, opts)?;
    let text = if equation.trim_start().starts_with('{') {
        equation.to_string()
    } else {
        std::fs::read_to_string(equation).map_err(|e| Error::InvalidInput(format!("{equation}: {e}")))?
    };
    let cert = parse_certificate(&text)?;
    let ok = certify(&fp, &ideal, &cert)?;
    let body = json!({"f": fp.to_string(), "generators": poly_strings(&generators_of(&ideal)), "valid": ok});
    let text = if ok { "equation verified: f is integral over the ideal\n" } else { "equation does not vanish\n" };
    Ok(Outcome { json: envelope("certify", body), text: text.into(), verdict: if ok { Tri::Yes } else { Tri::No } })
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: &str = "(y+x+i*x^2)^2 - x^5";

    #[test]
    fn check_bounded_member_is_second_generator() {
        let o = cmd_check("(y+x)*x^2", G, &Options::default()).unwrap();
        assert_eq!(o.verdict, Tri::Yes);
        assert!(o.text.starts_with("Bounded\n"));
        assert!(o.text.contains("generator #2 of (x^2 + 2*x*y + y^2, x^3 + x^2*y, x^4)"), "{}", o.text);
    }

    #[test]
    fn check_cube_not_bounded_with_arc() {
        let o = cmd_check("x^3", G, &Options::default()).unwrap();
        assert_eq!(o.verdict, Tri::No);
        assert_eq!(o.json["membership"]["member"], false);
        assert_eq!(o.json["witness_arc"]["hint"], "DivergentLooking");
    }

    #[test]
    fn check_fails_on_real_branches() {
        let o = cmd_check("1", "y^2 + x^2", &Options::default()).unwrap();
        assert_eq!(o.verdict, Tri::No);
        assert_eq!(o.json["verdict"], "NotBounded");
        let a = cmd_admissible("y^2 + x^2", &Options::default()).unwrap();
        assert!(a.text.contains("NonRealLeading"), "{}", a.text);
    }

    #[test]
    fn factored_input_multiplies_multiplicities() {
        let e = parse_expr("((y+x+i*x^2)^2 - x^5)^2").unwrap();
        let v = admissibility(&e, &Options::default()).unwrap();
        assert_eq!(v.forms().len(), 1);
        assert_eq!(v.forms()[0].1, 2);
        let (_, i) = ideal_of(&e, &Options::default()).unwrap();
        assert_eq!(i.unwrap().factors.len(), 4);
    }

    #[test]
    fn member_with_spec_and_truncation() {
        let o = cmd_member("x^4", r#"{"factors": [{"q": "x", "m": 2}, {"q": "x", "m": 2}]}"#, &Options::default()).unwrap();
        assert_eq!(o.verdict, Tri::Yes);
        let spec = r#"{"generators": ["(z+x+y)^2", "(z+x+y)*(x^2+y^2)", "(z+x+y)*(x^2+2*y^2)", "(x^2+y^2)*(x^2+2*y^2)"]}"#;
        assert!(cmd_member("(z+x+y)*x*y", spec, &Options::default()).is_err());
        let o = cmd_member("(z+x+y)*x*y", spec, &Options { trunc: Some(5), ..Default::default() }).unwrap();
        assert_eq!(o.verdict, Tri::No);
    }

    #[test]
    fn monomialize_and_valmember() {
        let o = cmd_monomialize(r#"{"generators": ["y", "x^2"]}"#, &Options::default()).unwrap();
        assert!(o.text.starts_with("2 blow-ups"), "{}", o.text);
        let v = cmd_valmember("x*y", r#"{"generators": ["y", "x^2"]}"#, &Options::default()).unwrap();
        assert_eq!(v.verdict, Tri::Yes);
        let v = cmd_valmember("x", r#"{"generators": ["y", "x^2"]}"#, &Options::default()).unwrap();
        assert_eq!(v.verdict, Tri::No);
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let e = cmd_check("(y+x", G, &Options::default()).unwrap_err();
        assert_eq!(error_exit_code(&e), 3);
        assert_eq!(error_exit_code(&Error::CapExceeded("x".into())), 4);
    }
}

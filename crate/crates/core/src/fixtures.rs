//! The bundled fixture corpus and its runner.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility::Verdict;
use crate::arith::{Monomial, Rational, SparsePoly, Var};
use crate::blowup::{default_step_cap, monomialize, real_points_check, valuative_member};
use crate::error::{Error, Result};
use crate::frontend::{admissibility, check, ideal_of, parse_expr, parse_poly, Options};
use crate::ideal::{expand_generators, member, member_refute_truncated, verify_integral_equation, ProductIdeal, TruncatedOutcome};

/// Fixture files compiled into the crate, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("worked.json", include_str!("../fixtures/worked.json")),
    ("failures.json", include_str!("../fixtures/failures.json")),
    ("closure_gap.json", include_str!("../fixtures/closure_gap.json")),
    ("blowup.json", include_str!("../fixtures/blowup.json")),
    ("zariski.json", include_str!("../fixtures/zariski.json")),
];

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Origin {
    /// `published`, `derived` or `trivial`.
    pub kind: String,
    pub oracle: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ExpectedForm {
    pub q: String,
    pub m: u32,
    pub psi0: String,
    pub r: usize,
    pub multiplicity: u32,
    #[serde(default)]
    pub deviation: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct FactorSpec {
    pub q: String,
    pub m: u32,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CorpusIdeal {
    pub seed: Option<u64>,
    pub factors: Vec<FactorSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    Admissible {
        g: String,
        outcome: String,
        #[serde(default)]
        forms: Vec<ExpectedForm>,
        #[serde(default)]
        witnesses: Vec<String>,
    },
    Ideal {
        g: String,
        generators: Vec<String>,
    },
    Member {
        f: String,
        g: String,
        member: bool,
    },
    Check {
        f: String,
        g: String,
        verdict: String,
    },
    Refute {
        f: String,
        generators: Vec<String>,
        trunc: u32,
        outcome: String,
    },
    Integral {
        f: String,
        generators: Vec<String>,
        equation: serde_json::Value,
        valid: bool,
    },
    Monomialize {
        generators: Vec<String>,
        #[serde(default)]
        steps: Option<usize>,
        #[serde(default)]
        orders: Option<Vec<u32>>,
        real_centers: bool,
    },
    Zariski {
        ideals: Vec<CorpusIdeal>,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Fixture {
    pub name: String,
    #[serde(flatten)]
    pub check: Check,
    pub origin: Origin,
}

#[derive(Deserialize)]
struct FixtureFile {
    schema: u32,
    fixtures: Vec<Fixture>,
}

pub fn parse_fixture_file(text: &str) -> Result<Vec<Fixture>> {
    let f: FixtureFile = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("fixture file: {e}")))?;
    if f.schema != crate::frontend::SCHEMA {
        return Err(Error::InvalidInput(format!("unsupported fixture schema {}", f.schema)));
    }
    Ok(f.fixtures)
}

pub fn bundled() -> Vec<Fixture> {
    BUNDLED
        .iter()
        .flat_map(|(name, text)| parse_fixture_file(text).unwrap_or_else(|e| panic!("{name}: {e}")))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub results: Vec<FixtureResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&FixtureResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }
}

/// Runs every bundled fixture whose name contains `filter`.
pub fn run_fixture_suite(filter: &str) -> SuiteReport {
    run_fixtures(&bundled(), filter)
}

pub fn run_fixtures(fixtures: &[Fixture], filter: &str) -> SuiteReport {
    let results = fixtures
        .par_iter()
        .filter(|f| f.name.contains(filter))
        .map(|f| {
            let start = Instant::now();
            let (passed, detail) = match run_one(&f.check) {
                Ok(()) => (true, String::new()),
                Err(e) => (false, e),
            };
            FixtureResult { name: f.name.clone(), passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect();
    SuiteReport { results }
}

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn polys(texts: &[String]) -> std::result::Result<Vec<SparsePoly>, String> {
    texts.iter().map(|t| parse_poly(t).map_err(|e| format!("{t}: {e}"))).collect()
}

fn run_one(c: &Check) -> Outcome {
    let opts = Options::default();
    let err = |e: Error| e.to_string();
    match c {
        Check::Admissible { g, outcome, forms, witnesses } => {
            let v = admissibility(&parse_expr(g).map_err(err)?, &opts).map_err(err)?;
            ensure(v.outcome() == outcome, || format!("outcome {} != {outcome}", v.outcome()))?;
            match &v {
                Verdict::Holds(got) => {
                    ensure(got.len() == forms.len(), || format!("{} forms, expected {}", got.len(), forms.len()))?;
                    for ((f, k), e) in got.iter().zip(forms) {
                        let q = parse_poly(&e.q).map_err(err)?;
                        ensure(f.q_poly() == q, || format!("q = {} != {}", f.q_poly(), q))?;
                        ensure(f.m == e.m && f.r == e.r && *k == e.multiplicity, || format!("m, r, multiplicity = {}, {}, {k}", f.m, f.r))?;
                        ensure(f.psi0.to_string() == e.psi0, || format!("psi0 = {}", f.psi0))?;
                        if let Some(d) = &e.deviation {
                            let want: Rational = d.parse().map_err(|_| format!("bad rational {d}"))?;
                            ensure(f.ramification_hint.as_ref() == Some(&want), || format!("deviation {:?}", f.ramification_hint))?;
                        }
                    }
                }
                Verdict::Fails(ws) => {
                    let got: Vec<&str> = ws.iter().map(|w| w.kind()).collect();
                    ensure(got == *witnesses, || format!("witnesses {got:?}"))?;
                }
                Verdict::Inconclusive(_) => {}
            }
            Ok(())
        }
        Check::Ideal { g, generators } => {
            let (_, ideal) = ideal_of(&parse_expr(g).map_err(err)?, &opts).map_err(err)?;
            let ideal = ideal.ok_or("g is not admissible")?;
            let got = expand_generators(&ideal);
            let want = polys(generators)?;
            ensure(got == want, || format!("generators {:?}", got.iter().map(|p| p.to_string()).collect::<Vec<_>>()))
        }
        Check::Member { f, g, member: want } => {
            let fp = parse_poly(f).map_err(err)?;
            let (_, ideal) = ideal_of(&parse_expr(g).map_err(err)?, &opts).map_err(err)?;
            let ideal = ideal.ok_or("g is not admissible")?;
            let gens = expand_generators(&ideal);
            let m = member(&fp, &ideal).map_err(err)?;
            ensure(m.is_member() == *want, || format!("member = {}", m.is_member()))?;
            let replayed = match &m {
                crate::ideal::Membership::Member(c) => c.replay(&fp, &gens),
                crate::ideal::Membership::NotMember(r) => r.replay(&fp, &gens, &[Var::X, Var::Y]),
            };
            ensure(replayed, || "certificate does not replay".into())
        }
        Check::Check { f, g, verdict } => {
            let r = check(&parse_poly(f).map_err(err)?, &parse_expr(g).map_err(err)?, &opts).map_err(err)?;
            ensure(r.verdict.as_str() == verdict, || format!("verdict {}", r.verdict.as_str()))
        }
        Check::Refute { f, generators, trunc, outcome } => {
            let fp = parse_poly(f).map_err(err)?;
            let gens = polys(generators)?;
            let got = match member_refute_truncated(&fp, &gens, *trunc).map_err(err)? {
                TruncatedOutcome::NotMember(r) => {
                    let mut vars = vec![Var::X, Var::Y, Var::Z];
                    vars.retain(|v| fp.vars().contains(v) || gens.iter().any(|g| g.vars().contains(v)));
                    ensure(r.replay(&fp, &gens, &vars), || "refutation does not replay".into())?;
                    "not_member"
                }
                TruncatedOutcome::Unknown => "unknown",
            };
            ensure(got == outcome, || format!("outcome {got}"))
        }
        Check::Integral { f, generators, equation, valid } => {
            let cert = crate::frontend::parse_certificate(&equation.to_string()).map_err(err)?;
            let ok = verify_integral_equation(&parse_poly(f).map_err(err)?, &polys(generators)?, &cert).map_err(err)?;
            ensure(ok == *valid, || format!("valid = {ok}"))
        }
        Check::Monomialize { generators, steps, orders, real_centers } => {
            let gens = polys(generators)?;
            let tree = monomialize(&gens, default_step_cap(&gens)).map_err(err)?;
            if let Some(s) = steps {
                ensure(tree.steps() == *s, || format!("{} blow-ups", tree.steps()))?;
            }
            if let Some(o) = orders {
                let got: Vec<u32> = tree.order_table().iter().map(|r| r.ideal).collect();
                ensure(got == *o, || format!("orders {got:?}"))?;
            }
            let real = real_points_check(&tree);
            ensure(real == *real_centers, || format!("real centres {real}"))
        }
        Check::Zariski { ideals } => {
            for (k, spec) in ideals.iter().enumerate() {
                let factors = spec
                    .factors
                    .iter()
                    .map(|f| Ok((parse_poly(&f.q)?, f.m)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(err)?;
                zariski_agreement(&ProductIdeal::product(factors).map_err(err)?).map_err(|e| format!("ideal {k}: {e}"))?;
            }
            Ok(())
        }
    }
}

/// Monomials of total degree at most `n` in `x, y`.
pub fn monomials_up_to(n: u32) -> Vec<Monomial> {
    (0..=n).flat_map(|d| (0..=d).map(move |a| [a, d - a, 0])).collect()
}

/// `member == valuative_member` for every monomial of degree `≤ Σ m`.
pub fn zariski_agreement(ideal: &ProductIdeal) -> std::result::Result<usize, String> {
    let gens = expand_generators(ideal);
    let tree = monomialize(&gens, default_step_cap(&gens)).map_err(|e| e.to_string())?;
    let monos = monomials_up_to(ideal.truncation_bound());
    let bad: Vec<String> = monos
        .par_iter()
        .filter_map(|m| {
            let f = SparsePoly::mono(m[0], m[1], 0);
            let exact = member(&f, ideal).map(|r| r.is_member());
            let val = valuative_member(&f, &tree);
            match exact {
                Ok(e) if e == val => None,
                Ok(e) => Some(format!("{f}: member {e}, valuative {val}")),
                Err(e) => Some(format!("{f}: {e}")),
            }
        })
        .collect();
    if bad.is_empty() {
        Ok(monos.len())
    } else {
        Err(bad.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_parse() {
        let all = bundled();
        assert!(all.len() >= 20);
        let mut names: Vec<&str> = all.iter().map(|f| f.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
        assert!(all.iter().all(|f| ["published", "derived", "trivial"].contains(&f.origin.kind.as_str())));
    }

    #[test]
    fn filter_selects_by_name() {
        let r = run_fixture_suite("worked_m1");
        assert_eq!(r.results.len(), 5);
        assert!(r.all_passed(), "{:?}", r.failures());
    }
}

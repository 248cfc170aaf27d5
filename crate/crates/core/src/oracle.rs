//! Floating-point sampling of `|f| / Σ|g_i|` and `|f| / |g|` near the
//! origin. Only a cross-check: nothing here feeds back into exact verdicts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::admissibility::{admissible, Verdict};
use crate::arith::{SparsePoly, Var};
use crate::blowup::Arc;
use crate::error::{Error, Result};
use crate::ideal::{build_ideal, expand_generators, member};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `Im x > 0`, `Im y > 0`.
    H2,
    R2,
    C2,
}

impl std::str::FromStr for Region {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "H2" => Ok(Region::H2),
            "R2" => Ok(Region::R2),
            "C2" => Ok(Region::C2),
            _ => Err(Error::InvalidInput(format!("unknown region {s}; expected H2, R2 or C2"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    pub region: Region,
    /// Level `k` samples at scale `2^-k`, `k = 1..=levels`.
    pub levels: u32,
    pub samples_per_level: usize,
    pub seed: u64,
    /// Real curves `y = -q(x)` sampled on and near, in addition to the uniform points.
    pub critical: Vec<SparsePoly>,
}

impl SamplePlan {
    pub fn new(region: Region, levels: u32, samples_per_level: usize, seed: u64) -> Self {
        SamplePlan { region, levels, samples_per_level, seed, critical: Vec::new() }
    }

    pub fn with_critical(mut self, curves: Vec<SparsePoly>) -> Self {
        self.critical = curves;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Hint {
    BoundedLooking,
    DivergentLooking,
    Equivocal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub levels: Vec<f64>,
    pub sups: Vec<f64>,
    pub means: Vec<f64>,
    pub argmax: Vec<[(f64, f64); 3]>,
    pub growth: Vec<f64>,
    pub hint: Hint,
    pub skipped: usize,
}

impl RatioReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "levels": self.levels, "sups": self.sups, "growth": self.growth, "hint": self.hint })
    }
}

/// Divergent when the last three growth factors exceed 1.5, bounded when
/// none of them exceeds 1.1.
pub fn hint_from_growth(growth: &[f64]) -> Hint {
    if growth.len() < 3 {
        return Hint::Equivocal;
    }
    let tail = &growth[growth.len() - 3..];
    if tail.iter().all(|g| *g > 1.5) {
        Hint::DivergentLooking
    } else if tail.iter().all(|g| g.is_finite() && *g <= 1.1) {
        Hint::BoundedLooking
    } else {
        Hint::Equivocal
    }
}

fn growth_of(sups: &[f64]) -> Vec<f64> {
    sups.windows(2)
        .map(|w| if w[0] == 0.0 { if w[1] == 0.0 { 1.0 } else { f64::INFINITY } } else { w[1] / w[0] })
        .collect()
}

/// A polynomial with its coefficients converted once.
struct Compiled {
    terms: Vec<([u32; 3], Complex64)>,
}

impl Compiled {
    fn new(p: &SparsePoly) -> Self {
        Compiled { terms: p.terms().map(|(m, c)| (*m, c.to_c64())).collect() }
    }

    fn eval(&self, p: &[Complex64; 3]) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (m, c)| {
            let mut t = *c;
            for i in 0..3 {
                if m[i] > 0 {
                    t *= p[i].powu(m[i]);
                }
            }
            acc + t
        })
    }
}

/// Unscaled sample pattern, drawn once per plan.
#[derive(Clone, Copy)]
struct Draw {
    u: [f64; 3],
    angle: [f64; 3],
    sign: [f64; 3],
    v: f64,
    curve: Option<usize>,
}

fn draws(plan: &SamplePlan) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let n = plan.samples_per_level.max(1);
    let ncrit = if plan.critical.is_empty() { 0 } else { n / 2 };
    (0..n)
        .map(|i| Draw {
            u: [rng.gen_range(0.5..1.0), rng.gen_range(0.5..1.0), rng.gen_range(0.5..1.0)],
            angle: [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()],
            sign: [
                if rng.gen::<bool>() { 1.0 } else { -1.0 },
                if rng.gen::<bool>() { 1.0 } else { -1.0 },
                if rng.gen::<bool>() { 1.0 } else { -1.0 },
            ],
            v: rng.gen_range(-1.0..1.0),
            curve: (i < ncrit).then(|| i % plan.critical.len()),
        })
        .collect()
}

/// Smallest power of `t` used to push near-critical points off a curve.
fn perturbation_power(curves: &[SparsePoly]) -> i32 {
    2 + curves.iter().filter_map(SparsePoly::total_degree).max().unwrap_or(1) as i32 * 2
}

/// A sample point, plus its coordinates `(x, w = y + q(x), z)` when it was
/// placed next to the critical curve `y = -q(x)`.
struct Sample {
    at: [Complex64; 3],
    local: Option<(usize, [Complex64; 3])>,
}

fn point(region: &Region, d: &Draw, t: f64, curves: &[Compiled], pert: i32) -> Sample {
    use std::f64::consts::PI;
    let free = |k: usize| -> Complex64 {
        let r = t * d.u[k];
        match region {
            Region::H2 => Complex64::from_polar(r, PI * (0.02 + 0.96 * d.angle[k])),
            Region::R2 => Complex64::new(d.sign[k] * r, 0.0),
            Region::C2 => Complex64::from_polar(r, 2.0 * PI * d.angle[k]),
        }
    };
    let zero = Complex64::new(0.0, 0.0);
    let z = free(2);
    let Some(c) = d.curve else { return Sample { at: [free(0), free(1), z], local: None } };
    let eps = t.powi(pert);
    let (x, w, z) = match region {
        Region::R2 => (Complex64::new(d.sign[0] * t * d.u[0], 0.0), Complex64::new(d.v * eps, 0.0), z),
        Region::C2 => (free(0), Complex64::new(d.v * eps, 0.0), z),
        Region::H2 => {
            // Just inside the region above a point of the real curve.
            let x = Complex64::new(d.sign[0] * t * d.u[0], eps * d.u[1]);
            let on = -curves[c].eval(&[x, zero, z]);
            let w = Complex64::new(0.0, on.im.abs() - on.im + eps * (1.0 + d.v.abs()));
            (x, w, Complex64::new(z.re, z.im.abs()))
        }
    };
    let y = w - curves[c].eval(&[x, zero, z]);
    Sample { at: [x, y, z], local: Some((c, [x, w, z])) }
}

/// Sums of `|num|` over sums of `|den|`. Points near a critical curve are
/// evaluated in shifted coordinates so that `y + q(x)` loses no precision.
fn scan(num: &[SparsePoly], den: &[SparsePoly], plan: &SamplePlan) -> RatioReport {
    let pattern = draws(plan);
    let curves: Vec<Compiled> = plan.critical.iter().map(Compiled::new).collect();
    let compile = |ps: &[SparsePoly]| -> Vec<Compiled> { ps.iter().map(Compiled::new).collect() };
    let shifted = |ps: &[SparsePoly]| -> Vec<Vec<Compiled>> {
        plan.critical
            .iter()
            .map(|q| {
                let y = &SparsePoly::y() - q;
                ps.iter().map(|p| Compiled::new(&p.compose([None, Some(&y), None]))).collect()
            })
            .collect()
    };
    let (num_c, den_c) = (compile(num), compile(den));
    let (num_s, den_s) = (shifted(num), shifted(den));
    let pert = perturbation_power(&plan.critical);
    let mut levels = Vec::new();
    let mut sups = Vec::new();
    let mut means = Vec::new();
    let mut argmax = Vec::new();
    let mut skipped = 0;
    for k in 1..=plan.levels {
        let t = 0.5f64.powi(k as i32);
        let vals: Vec<Option<(f64, [Complex64; 3])>> = pattern
            .par_iter()
            .map(|d| {
                let s = point(&plan.region, d, t, &curves, pert);
                let (nums, dens, p) = match &s.local {
                    Some((c, local)) => (&num_s[*c], &den_s[*c], local),
                    None => (&num_c, &den_c, &s.at),
                };
                let denom: f64 = dens.iter().map(|g| g.eval(p).norm()).sum();
                let n: f64 = nums.iter().map(|f| f.eval(p).norm()).sum();
                if denom == 0.0 {
                    return if n == 0.0 { Some((0.0, s.at)) } else { None };
                }
                Some((n / denom, s.at))
            })
            .collect();
        let (mut sup, mut sum, mut count) = (0.0f64, 0.0, 0usize);
        let mut at = [Complex64::new(0.0, 0.0); 3];
        for v in vals {
            match v {
                Some((r, p)) => {
                    if r > sup || count == 0 {
                        sup = sup.max(r);
                        at = p;
                    }
                    sum += r;
                    count += 1;
                }
                None => skipped += 1,
            }
        }
        levels.push(t);
        sups.push(sup);
        means.push(if count > 0 { sum / count as f64 } else { 0.0 });
        argmax.push([(at[0].re, at[0].im), (at[1].re, at[1].im), (at[2].re, at[2].im)]);
    }
    let growth = growth_of(&sups);
    let hint = if sups.iter().all(|s| *s == 0.0) { Hint::BoundedLooking } else { hint_from_growth(&growth) };
    RatioReport { levels, sups, means, argmax, growth, hint, skipped }
}

/// `|f| / Σ|g_i|` over the plan's sample points.
pub fn ratio_scan(f: &SparsePoly, gens: &[SparsePoly], plan: &SamplePlan) -> Result<RatioReport> {
    if gens.is_empty() || gens.iter().all(SparsePoly::is_zero) {
        return Err(Error::InvalidInput("ratio scan needs a nonzero generator".into()));
    }
    Ok(scan(std::slice::from_ref(f), gens, plan))
}

/// `(t, |f(γ(t))| / Σ|g_i(γ(t))|)` for `t = 2^-k`.
pub fn arc_ratio(f: &SparsePoly, gens: &[SparsePoly], arc: &Arc, ks: std::ops::RangeInclusive<u32>) -> Vec<(f64, f64)> {
    let (fx, fy) = (Compiled::new(&arc.x), Compiled::new(&arc.y));
    let num = Compiled::new(f);
    let den: Vec<Compiled> = gens.iter().map(Compiled::new).collect();
    ks.map(|k| {
        let t = 0.5f64.powi(k as i32);
        let tp = [Complex64::new(t, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let p = [fx.eval(&tp), fy.eval(&tp), Complex64::new(0.0, 0.0)];
        let d: f64 = den.iter().map(|g| g.eval(&p).norm()).sum();
        (t, num.eval(&p).norm() / d)
    })
    .collect()
}

/// Hint for a sequence of ratios at decreasing `t`.
pub fn sequence_hint(seq: &[(f64, f64)]) -> Hint {
    let vals: Vec<f64> = seq.iter().map(|(_, r)| *r).collect();
    hint_from_growth(&growth_of(&vals))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub report: RatioReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub member: bool,
    pub conditions: Vec<Condition>,
    /// `|g| / Σ|gens|` and `Σ|gens| / |g|` on `H2`.
    pub mutual: Vec<Condition>,
    pub disagreements: Vec<String>,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = |cs: &[Condition]| -> Vec<serde_json::Value> {
            cs.iter().map(|c| serde_json::json!({"name": c.name, "report": c.report.to_json()})).collect()
        };
        serde_json::json!({
            "member": self.member,
            "conditions": c(&self.conditions),
            "mutual": c(&self.mutual),
            "disagreements": self.disagreements,
        })
    }
}

/// Runs the four boundedness conditions and the mutual bound, and compares
/// them with exact membership of `f` in `I(g)`.
pub fn equivalence_report(f: &SparsePoly, g: &SparsePoly, levels: u32, samples: usize, seed: u64) -> Result<EquivalenceReport> {
    f.require_vars(&[Var::X, Var::Y])?;
    let forms = match admissible(g)? {
        Verdict::Holds(forms) => forms,
        other => return Err(Error::InvalidInput(format!("g is not admissible ({})", other.outcome()))),
    };
    let ideal = build_ideal(&forms);
    let is_member = member(f, &ideal)?.is_member();
    let gens = if ideal.is_unit() { vec![SparsePoly::one()] } else { expand_generators(&ideal) };
    let curves: Vec<SparsePoly> = ideal.factors.iter().map(|(q, _)| q.clone()).collect();
    let plan = |region| SamplePlan::new(region, levels, samples, seed).with_critical(curves.clone());

    let conditions = vec![
        Condition { name: "f/g on H2".into(), report: ratio_scan(f, std::slice::from_ref(g), &plan(Region::H2))? },
        Condition { name: "f/gens on H2".into(), report: ratio_scan(f, &gens, &plan(Region::H2))? },
        Condition { name: "f/gens on R2".into(), report: ratio_scan(f, &gens, &plan(Region::R2))? },
        Condition { name: "f/gens on C2".into(), report: ratio_scan(f, &gens, &plan(Region::C2))? },
    ];
    let h2 = plan(Region::H2);
    let gs = std::slice::from_ref(g);
    let g_over = scan(gs, &gens, &h2);
    let over_g = scan(&gens, gs, &h2);
    let mutual = vec![
        Condition { name: "g/gens on H2".into(), report: g_over },
        Condition { name: "gens/g on H2".into(), report: over_g },
    ];

    let mut disagreements = Vec::new();
    for c in &conditions {
        match (is_member, c.report.hint) {
            (true, Hint::DivergentLooking) => disagreements.push(format!("{}: divergent for a member", c.name)),
            (false, Hint::BoundedLooking) => disagreements.push(format!("{}: bounded for a non-member", c.name)),
            _ => {}
        }
    }
    for c in &mutual {
        if c.report.hint == Hint::DivergentLooking {
            disagreements.push(format!("{}: mutual bound looks divergent", c.name));
        }
    }
    Ok(EquivalenceReport { member: is_member, conditions, mutual, disagreements })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> Vec<SparsePoly> {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let l = &y + &x;
        vec![l.pow(2), &l * &x.pow(2), x.pow(4)]
    }

    #[test]
    fn generator_ratio_is_bounded_by_one() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let f = (&y + &x).pow(2);
        let plan = SamplePlan::new(Region::C2, 8, 64, 7).with_critical(vec![x.clone()]);
        let r = ratio_scan(&f, &gens(), &plan).unwrap();
        assert!(r.sups.iter().all(|s| *s <= 1.0));
        assert_eq!(r.hint, Hint::BoundedLooking);
    }

    #[test]
    fn cube_diverges_on_real_curve() {
        let x = SparsePoly::x();
        let plan = SamplePlan::new(Region::R2, 8, 64, 7).with_critical(vec![x.clone()]);
        let r = ratio_scan(&x.pow(3), &gens(), &plan).unwrap();
        assert_eq!(r.hint, Hint::DivergentLooking);
        for g in &r.growth[r.growth.len() - 3..] {
            assert!((g - 2.0).abs() < 0.2, "{g}");
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let x = SparsePoly::x();
        let plan = SamplePlan::new(Region::H2, 6, 32, 11).with_critical(vec![x.clone()]);
        let a = ratio_scan(&x.pow(3), &gens(), &plan).unwrap();
        let b = ratio_scan(&x.pow(3), &gens(), &plan).unwrap();
        assert_eq!(serde_json::to_string(&a.to_json()).unwrap(), serde_json::to_string(&b.to_json()).unwrap());
    }

    #[test]
    fn equivalence_agrees_with_membership() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let ix2 = SparsePoly::constant(crate::arith::GaussianRational::i()).mul_monomial(&[2, 0, 0]);
        let g = &(&(&y + &x) + &ix2).pow(2) - &x.pow(5);
        let inside = equivalence_report(&(&(&y + &x) * &x.pow(2)), &g, 10, 64, 3).unwrap();
        assert!(inside.member);
        assert!(inside.consistent(), "{:?}", inside.disagreements);
        let outside = equivalence_report(&x.pow(3), &g, 10, 64, 3).unwrap();
        assert!(!outside.member);
        assert!(outside.consistent(), "{:?}", outside.disagreements);
        assert_eq!(outside.conditions[2].report.hint, Hint::DivergentLooking);
    }

    #[test]
    fn arc_ratios() {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        let gens = vec![y.clone(), x.pow(2)];
        let arc = Arc { divisor: 0, constant: crate::arith::GaussianRational::from_int(1), x: x.clone(), y: x.pow(2) };
        assert_eq!(sequence_hint(&arc_ratio(&x, &gens, &arc, 1..=12)), Hint::DivergentLooking);
        assert_eq!(sequence_hint(&arc_ratio(&(&x * &y), &gens, &arc, 1..=12)), Hint::BoundedLooking);
    }
}

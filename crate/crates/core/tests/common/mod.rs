//! Randomized properties shared by the property suite and the acceptance run.

#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestError, TestRunner};

use halfplane_bounds::arith::{rat, series_solve, GaussianRational, SparsePoly, Var};
use halfplane_bounds::blowup::{default_step_cap, monomialize, ord_divisor, BlowupTree};
use halfplane_bounds::frontend::{cmd_check, parse_poly, Options};
use halfplane_bounds::ideal::{expand_generators, member, ProductIdeal};
use halfplane_bounds::oracle::{ratio_scan, Region, SamplePlan};
use halfplane_bounds::puiseux::{cluster_tree, ClusterOptions, SeriesPoly};

pub const CASES: u32 = 256;

pub const PROPERTIES: &[&str] = &[
    "series_solve_residual",
    "cluster_product",
    "q_truncation",
    "ideal_closure",
    "valuation_additivity",
    "parser_round_trip",
    "json_determinism",
];

fn gauss() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(n, d, im)| GaussianRational::new(rat(n, d), rat(im, 1)))
}

/// Polynomial in `x, y` with total degree at most `deg`.
fn poly_xy(deg: u32, max_terms: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0..=deg), (0..=deg), gauss()), 0..=max_terms).prop_map(move |ts| {
        SparsePoly::from_terms(ts.into_iter().filter(|(a, b, _)| a + b <= deg).map(|(a, b, c)| ([a, b, 0], c)))
    })
}

fn poly_xyz(deg: u32) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0..=deg), (0..=deg), (0..=deg), gauss()), 0..=6)
        .prop_map(|ts| SparsePoly::from_terms(ts.into_iter().map(|(a, b, c, k)| ([a, b, c], k))))
}

fn real_q(m: u32) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(-3i64..=3, m as usize).prop_map(|cs| {
        SparsePoly::from_terms(cs.into_iter().enumerate().map(|(k, c)| ([k as u32 + 1, 0, 0], GaussianRational::from_int(c))))
    })
}

fn product_ideal() -> impl Strategy<Value = ProductIdeal> {
    prop::collection::vec((1u32..=3).prop_flat_map(|m| (real_q(m), Just(m))), 1..=2)
        .prop_map(|fs| ProductIdeal::product(fs).unwrap())
}

fn trees() -> &'static [BlowupTree] {
    static TREES: std::sync::OnceLock<Vec<BlowupTree>> = std::sync::OnceLock::new();
    TREES.get_or_init(|| {
        ["y; x^2", "(y+x)^2; (y+x)*x^2; x^4", "y^2 - x^3; x^4", "y^2; x*y; x^3"]
            .iter()
            .map(|s| {
                let gens: Vec<SparsePoly> = s.split(';').map(|g| parse_poly(g).unwrap()).collect();
                monomialize(&gens, default_step_cap(&gens)).unwrap()
            })
            .collect()
    })
}

/// Runs one named property for `cases` cases; `Err` carries the minimal failure.
pub fn run_property(name: &str, cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    let out = match name {
        "series_solve_residual" => flat(runner.run(&(poly_xy(3, 6), gauss(), 1usize..10), |(rest, lin, cap)| {
            prop_assume!(!lin.is_zero());
            // Drop the constant and y-linear terms, then put back a nonzero y coefficient.
            let mut f = SparsePoly::from_terms(
                rest.terms().filter(|(m, _)| **m != [0, 0, 0] && **m != [0, 1, 0]).map(|(m, c)| (*m, c.clone())),
            );
            f.add_term([0, 1, 0], &lin);
            let s = series_solve(&f, cap).unwrap();
            let r = f.compose([None, Some(&s.to_poly()), None]).truncate_in(Var::X, cap as u32);
            prop_assert!(r.is_zero(), "f = {f}, s = {}, residual {r}", s.to_poly());
            Ok(())
        })),
        "cluster_product" => flat(runner.run(
            &(prop::collection::vec(prop::collection::vec(gauss(), 1..=3), 1..=3), 0u32..=2, gauss()),
            |(hs, k, unit)| {
                prop_assume!(!unit.is_zero());
                let (x, y) = (SparsePoly::x(), SparsePoly::y());
                let mut g = SparsePoly::constant(unit).mul_monomial(&[k, 0, 0]);
                for h in &hs {
                    let hp = SparsePoly::from_terms(h.iter().enumerate().map(|(j, c)| ([j as u32 + 1, 0, 0], c.clone())));
                    g = &g * &(&y + &hp);
                }
                g = &g * &(&SparsePoly::one() + &x);
                let tree = cluster_tree(&g, ClusterOptions::for_poly(&g));
                prop_assert!(tree.is_ok(), "{:?}", tree.as_ref().err());
                let tree = tree.unwrap();
                prop_assert_eq!(tree.x_multiplicity, k);
                let mut prod = tree.unit.unit.clone();
                for c in &tree.clusters {
                    for _ in 0..c.multiplicity {
                        prod = prod.mul(&c.approximant);
                    }
                }
                let stripped = g.div_monomial(&[k, 0, 0]).unwrap();
                prop_assert_eq!(prod.to_sparse(), SeriesPoly::from_sparse(&stripped, prod.cap()).to_sparse());
                let degree: usize = tree.clusters.iter().map(|c| c.y_degree * c.multiplicity as usize).sum();
                prop_assert_eq!(degree, hs.len());
                Ok(())
            },
        )),
        "q_truncation" => flat(runner.run(&(real_q(3), real_q(3), 1u32..=3, poly_xy(4, 5)), |(q, tail, m, f)| {
            let long = &q + &tail.mul_monomial(&[m, 0, 0]);
            let a = ProductIdeal::product(vec![(q.clone(), m), (q, m)]).unwrap();
            let b = ProductIdeal::product(vec![(long.clone(), m), (long, m)]).unwrap();
            prop_assert_eq!(expand_generators(&a), expand_generators(&b));
            prop_assert_eq!(member(&f, &a).unwrap().is_member(), member(&f, &b).unwrap().is_member());
            Ok(())
        })),
        "ideal_closure" => flat(runner.run(
            &(product_ideal(), prop::collection::vec(poly_xy(2, 3), 8), poly_xy(2, 4)),
            |(ideal, cs, h)| {
                let gens = expand_generators(&ideal);
                let mut f = SparsePoly::zero();
                for (g, c) in gens.iter().zip(&cs) {
                    f = &f + &(c * g);
                }
                prop_assert!(member(&f, &ideal).unwrap().is_member());
                prop_assert!(member(&(&f * &h), &ideal).unwrap().is_member());
                prop_assert!(member(&(&f + &(&gens[0] * &h)), &ideal).unwrap().is_member());
                Ok(())
            },
        )),
        "valuation_additivity" => flat(runner.run(&(0usize..4, poly_xy(4, 5), poly_xy(4, 5)), |(ix, f, g)| {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let tree = &trees()[ix];
            let fg = &f * &g;
            for d in 0..tree.divisors.len() {
                let (a, b) = (ord_divisor(&f, tree, d).unwrap(), ord_divisor(&g, tree, d).unwrap());
                prop_assert_eq!(ord_divisor(&fg, tree, d).unwrap(), a + b, "divisor {}", d);
            }
            Ok(())
        })),
        "parser_round_trip" => flat(runner.run(&poly_xyz(4), |p| {
            let text = p.to_string();
            prop_assert_eq!(parse_poly(&text).unwrap(), p, "{}", text);
            Ok(())
        })),
        "json_determinism" => flat(runner.run(&(any::<u64>(), poly_xy(4, 4)), |(seed, f)| {
            let gens = vec![SparsePoly::y().pow(2), SparsePoly::x().pow(3)];
            let plan = SamplePlan::new(Region::H2, 4, 8, seed).with_critical(vec![SparsePoly::x()]);
            let a = ratio_scan(&f, &gens, &plan).unwrap().to_json();
            let b = ratio_scan(&f, &gens, &plan).unwrap().to_json();
            prop_assert_eq!(a.to_string(), b.to_string());
            let g = "(y+x+i*x^2)^2 - x^5";
            let c1 = cmd_check(&f.to_string(), g, &Options::default()).unwrap();
            let c2 = cmd_check(&f.to_string(), g, &Options::default()).unwrap();
            prop_assert_eq!(c1.json.to_string(), c2.json.to_string());
            Ok(())
        })),
        other => return Err(format!("unknown property {other}")),
    };
    out
}

fn flat<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| match e {
        TestError::Fail(why, value) => format!("{why} for {value:?}"),
        TestError::Abort(why) => format!("aborted: {why}"),
    })
}

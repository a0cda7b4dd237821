//! Property suites shared by the proptest target and the acceptance runner.
//! Every suite draws from a fixed-seed generator, so failures reproduce.

#![allow(dead_code, clippy::needless_range_loop)]

use std::sync::OnceLock;

use betatile::betamap::config::TransformConfig;
use betatile::betamap::{compute_v, preset, BetaTransform, Expansion, Preset, PresetParams};
use betatile::sofic::{build_automaton, build_transducer, cylinder, DiffTransducer, ShiftAutomaton};
use betatile::tiling::{clouds, GifsGraph};
use betatile::{HPoint, PisotField, QBeta};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

pub const GOLDEN_GREEDY: &str = r#"{"preset":"greedy","field":[1,1]}"#;
pub const GOLDEN_SYM: &str = r#"{"preset":"symmetric","field":[1,1],"restrict":true}"#;
pub const SIGNED_PAIR: &str = r#"{"field":[1,1],"digits":[[-1,0],[1,0]],"parts":[[{"lo":[-1,0],"hi":[0,0]}],[{"lo":[0,0],"hi":[1,0]}]]}"#;
pub const TRIB_SYM: &str = r#"{"preset":"symmetric","field":[1,1,1],"restrict":true}"#;
pub const SMALLEST_SYM: &str = r#"{"preset":"symmetric","field":[0,1,1],"restrict":true}"#;
pub const CUBIC_A: &str = r#"{"preset":"symmetric","field":[2,-1,1],"restrict":true}"#;
pub const CUBIC_B: &str = r#"{"preset":"symmetric","field":[1,0,1],"restrict":true}"#;

pub fn build(s: &str) -> BetaTransform {
    TransformConfig::from_json(s).unwrap().build().unwrap()
}

pub fn graph(t: &BetaTransform) -> GifsGraph {
    GifsGraph::build(t, &compute_v(t, 100_000).unwrap()).unwrap()
}

pub fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, max_global_rejects: 50 * cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn golden_minimal_weight() -> BetaTransform {
    // α = (β + β⁻⁴)/(β² + 1)
    let f = PisotField::new(&[1, 1]).unwrap();
    let alpha = f.div(&(&f.beta() + &f.beta_pow(-4)), &(&f.beta_pow(2) + &f.one())).unwrap();
    preset(&f, Preset::MinimalWeight, &PresetParams { alpha: Some(alpha), digits: None }).unwrap()
}

/// Transforms of the acceptance examples.
pub fn acceptance_transforms() -> &'static [BetaTransform] {
    static T: OnceLock<Vec<BetaTransform>> = OnceLock::new();
    T.get_or_init(|| {
        let mut v: Vec<BetaTransform> =
            [GOLDEN_GREEDY, SIGNED_PAIR, GOLDEN_SYM, TRIB_SYM, SMALLEST_SYM, CUBIC_A, CUBIC_B].iter().map(|s| build(s)).collect();
        v.push(golden_minimal_weight());
        v
    })
}

/// Preset family used for the expansion suite.
pub fn preset_transforms() -> &'static [(&'static str, BetaTransform)] {
    static T: OnceLock<Vec<(&'static str, BetaTransform)>> = OnceLock::new();
    T.get_or_init(|| {
        let g = PisotField::new(&[1, 1]).unwrap();
        let trib = PisotField::new(&[1, 1, 1]).unwrap();
        let none = PresetParams::default();
        vec![
            ("golden greedy", preset(&g, Preset::Greedy, &none).unwrap()),
            ("golden lazy", preset(&g, Preset::Lazy, &none).unwrap()),
            ("golden symmetric", preset(&g, Preset::Symmetric, &none).unwrap()),
            ("golden minimal weight", golden_minimal_weight()),
            (
                "golden linear mod 1",
                preset(&g, Preset::LinearMod1, &PresetParams { alpha: Some(g.ratio(1, 3)), digits: None }).unwrap(),
            ),
            (
                "golden pedicini",
                preset(&g, Preset::Pedicini, &PresetParams { alpha: None, digits: Some(vec![g.int(0), g.int(1), g.int(2)]) })
                    .unwrap(),
            ),
            ("tribonacci greedy", preset(&trib, Preset::Greedy, &none).unwrap()),
            ("tribonacci symmetric", build(TRIB_SYM)),
            ("smallest symmetric", build(SMALLEST_SYM)),
        ]
    })
}

fn fields() -> &'static [PisotField] {
    static F: OnceLock<Vec<PisotField>> = OnceLock::new();
    F.get_or_init(|| [&[1, 1][..], &[1, 1, 1], &[0, 1, 1], &[2, -1, 1], &[1, 0, 1]].iter().map(|c| PisotField::new(c).unwrap()).collect())
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn element(f: &PisotField, nums: &[i64], den: i64) -> QBeta {
    f.from_coords(nums[..f.degree()].iter().map(|&n| rational(n, den)).collect()).unwrap()
}

pub type Suite = Result<(), String>;

fn report<V: std::fmt::Debug>(r: Result<(), TestError<V>>) -> Suite {
    r.map_err(|e| e.to_string())
}

/// (a) π₁(Ψ(x)) = x.
pub fn suite_roundtrip(cases: u32) -> Suite {
    let strat = (0..5usize, proptest::collection::vec(-1000i64..1000, 3), 1i64..50);
    report(runner(cases).run(&strat, |(fi, nums, den)| {
        let f = &fields()[fi];
        let x = element(f, &nums, den);
        let back = f.pi1(&f.psi(&x)).unwrap();
        prop_assert_eq!(back, x);
        Ok(())
    }))
}

/// (b) expansions of random points of X ∩ Q(β) are admissible and sum to the point.
pub fn suite_admissible(cases_per_transform: u32) -> Suite {
    for (name, t) in preset_transforms() {
        let f = t.field();
        let lo = f.approx(t.x_min());
        let strat = (proptest::collection::vec(-30i64..30, 3), 1i64..6);
        report(runner(cases_per_transform).run(&strat, |(nums, den)| {
            let x = element(f, &nums, den);
            let shift = (f.approx(&x) - lo).floor() as i64;
            let y = &x - &f.int(shift);
            prop_assume!(t.contains(&y));
            let e = t.expand(&y, 1_000_000).unwrap();
            prop_assert!(t.is_admissible(&e).unwrap(), "{}: {} expands to an inadmissible word", name, y);
            prop_assert_eq!(t.value(&e), y);
            Ok(())
        }))
        .map_err(|e| format!("{}: {}", name, e))?;
    }
    Ok(())
}

/// (c) depth-6 clouds are the GIFS image of the depth-5 clouds.
pub fn suite_refinement() -> Suite {
    for t in acceptance_transforms() {
        let g = graph(t);
        let f = g.field();
        let c5 = clouds(&g, 5);
        let c6 = clouds(&g, 6);
        for x in 0..g.len() {
            let mut image: Vec<Vec<f64>> = Vec::new();
            for &(y, a) in g.out_edges(x) {
                let s = g.phi_digit(a);
                for p in c5[y].points() {
                    let m = f.h_apply(&HPoint { coords: p.to_vec(), rad: 0.0 });
                    image.push(m.coords.iter().zip(&s.coords).map(|(u, v)| u + v).collect());
                }
            }
            let tol = 8.0 * c6[x].rad + 1e-9;
            let close = |p: &[f64], q: &[f64]| p.iter().zip(q).all(|(a, b)| (a - b).abs() <= tol);
            for p in c6[x].points() {
                if !image.iter().any(|q| close(p, q)) {
                    return Err(format!("vertex {} has a depth-6 point off the image: {:?}", x, p));
                }
            }
            for q in &image {
                if !c6[x].points().any(|p| close(p, q)) {
                    return Err(format!("vertex {} lost the image point {:?}", x, q));
                }
            }
        }
    }
    Ok(())
}

pub fn automata() -> &'static [(BetaTransform, ShiftAutomaton)] {
    static A: OnceLock<Vec<(BetaTransform, ShiftAutomaton)>> = OnceLock::new();
    A.get_or_init(|| {
        [GOLDEN_GREEDY, GOLDEN_SYM, SIGNED_PAIR, TRIB_SYM, SMALLEST_SYM]
            .iter()
            .map(|s| {
                let t = build(s);
                let a = build_automaton(&t, 100_000).unwrap();
                (t, a)
            })
            .collect()
    })
}

/// (d) the automaton accepts exactly the words whose cylinder is nonempty,
/// and every admissible periodic word has all its factors accepted.
pub fn suite_automaton(cases: u32) -> Suite {
    let strat = (0..5usize, proptest::collection::vec(0usize..8, 1..14));
    report(runner(cases).run(&strat, |(i, raw)| {
        let (t, a) = &automata()[i];
        let w: Vec<usize> = raw.iter().map(|&d| d % t.digits().len()).collect();
        prop_assert_eq!(a.accepts(&w), !cylinder(t, &w).is_empty(), "word {:?}", w);
        let e = Expansion::new(vec![], w.clone());
        if t.is_admissible(&e).unwrap() {
            let rep: Vec<usize> = w.iter().cycle().take(3 * w.len()).copied().collect();
            prop_assert!(a.accepts(&rep), "admissible {:?} rejected", w);
        }
        Ok(())
    }))
}

/// A transducer with its outgoing edge lists.
pub type TransducerCase = (BetaTransform, DiffTransducer, Vec<Vec<usize>>);

pub fn transducers() -> &'static [TransducerCase] {
    static D: OnceLock<Vec<TransducerCase>> = OnceLock::new();
    D.get_or_init(|| {
        [GOLDEN_SYM, TRIB_SYM, SMALLEST_SYM]
            .iter()
            .map(|s| {
                let t = build(s);
                let g = graph(&t);
                let f = t.field().clone();
                let deltas: Vec<QBeta> = [f.beta_pow(-2), f.beta_pow(-1), f.one(), -&f.beta_pow(-3)].to_vec();
                let d = build_transducer(&t, &g, &deltas, 1_000_000).unwrap();
                let mut out = vec![Vec::new(); d.states.len()];
                for (k, &(i, _, _, _)) in d.edges.iter().enumerate() {
                    out[i].push(k);
                }
                (t, d, out)
            })
            .collect()
    })
}

/// (e) along a path δ_0 → … → δ_n with labels a_k|a′_k, the reversed words
/// u, u′ satisfy .u − .u′ = δ_n − β^{−n} δ_0.
pub fn suite_transducer(cases: u32) -> Suite {
    let strat = (0..3usize, any::<u32>(), proptest::collection::vec(any::<u32>(), 1..16));
    report(runner(cases).run(&strat, |(i, start, steps)| {
        let (t, d, out) = &transducers()[i];
        let f = t.field();
        let s0 = d.initial[start as usize % d.initial.len()];
        let mut s = s0;
        let (mut u, mut v) = (Vec::new(), Vec::new());
        for r in steps {
            if out[s].is_empty() {
                break;
            }
            let (_, to, a, b) = d.edges[out[s][r as usize % out[s].len()]];
            u.push(a);
            v.push(b);
            s = to;
        }
        let n = u.len() as i64;
        u.reverse();
        v.reverse();
        let lhs = &t.finite_value(&u) - &t.finite_value(&v);
        let rhs = &d.states[s].delta - &f.mul(&f.beta_pow(-n), &d.states[s0].delta);
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

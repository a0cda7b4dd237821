//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::Instant;

use betatile::betamap::{compute_v, BetaTransform};
use betatile::sofic::{build_automaton, decide_tiling, Verdict};
use betatile::tiling::*;
use betatile::{HPoint, PisotField, QBeta};
use common::*;

type Outcome = Result<String, String>;
type Criterion = (u32, f64, fn() -> Outcome);
type Words = (Vec<i64>, Vec<i64>);
type SuiteRun = (&'static str, Box<dyn Fn() -> Suite>);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn show(xs: &[QBeta]) -> String {
    format!("{{{}}}", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn sorted(f: &PisotField, mut v: Vec<QBeta>) -> Vec<QBeta> {
    v.sort_by(|a, b| f.cmp(a, b));
    v
}

/// Φ(z) lies within err of T_owner = Φ(owner) + D_owner.
fn near_tile(g: &GifsGraph, cs: &[TileCloud], owner: &QBeta, z: &QBeta) -> bool {
    let f = g.field();
    let Some(v) = g.vdata.locate(f, owner) else { return false };
    let d = f.phi(&(z - owner));
    cs[v].points().any(|p| f.h_dist(&HPoint { coords: p.to_vec(), rad: 0.0 }, &d) <= cs[v].err + 1e-9)
}

fn timed(limit: f64, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = body();
    let s = start.elapsed().as_secs_f64();
    match r {
        Ok(d) if s <= limit => Ok(format!("{}; {:.2} s", d, s)),
        Ok(d) => Err(format!("{}; {:.2} s exceeds {} s", d, s, limit)),
        Err(e) => Err(format!("{}; {:.2} s", e, s)),
    }
}

fn criterion_1() -> Outcome {
    let t = build(GOLDEN_GREEDY);
    let f = t.field().clone();
    let vd = compute_v(&t, 10_000).map_err(|e| e.to_string())?;
    check(vd.v == vec![f.zero(), f.beta_pow(-1)], format!("V = {}", show(&vd.v)))?;
    let p = purely_periodic_points(&t, 10_000).map_err(|e| e.to_string())?;
    check(p.points == vec![f.zero()], format!("P = {}", show(&p.points)))?;
    check(check_f(&p), "(F) fails")?;
    let g = graph(&t);
    let d = decide_tiling(&t, &g, 100_000).map_err(|e| e.to_string())?;
    check(d.verdict == Verdict::Tiling, "not a tiling")?;
    let depth = g.depth_for(1e-3);
    check(g.err_bound(depth) < 1e-3, "depth")?;
    let ne = natext_domain(&t, &vd, &g, depth);
    check((ne.area - 1.0).abs() <= 0.02, format!("area {}", ne.area))?;
    Ok(format!("V = {{0, 1/β}}, P = {{0}}, (F), tiling, area {:.4} at depth {}", ne.area, depth))
}

fn criterion_2() -> Outcome {
    let t = golden_minimal_weight();
    let f = t.field().clone();
    let vd = compute_v(&t, 10_000).map_err(|e| e.to_string())?;
    check(vd.v.len() == 15, format!("|V| = {}", vd.v.len()))?;
    let alpha = t.parts()[2][0].lo.clone();
    let na = -&alpha;
    let left = t.twin();
    let word = |e: betatile::betamap::Expansion| -> Words {
        let c = e.canonical();
        let v = |w: &[usize]| w.iter().map(|&a| f.approx(&t.digits()[a]).round() as i64).collect();
        (v(&c.preperiod), v(&c.period))
    };
    let cases: [(&BetaTransform, &QBeta, Words, &str); 4] = [
        (&t, &alpha, (vec![1, 0, 0, -1, 0], vec![0, 0, 0, 1]), "b(α)"),
        (&left, &alpha, (vec![0, 1], vec![0, 0, 1, 0]), "b̃(α)"),
        (&t, &na, (vec![0, -1], vec![0, 0, -1, 0]), "b(−α)"),
        (&left, &na, (vec![-1, 0, 0, 1, 0], vec![0, 0, 0, -1]), "b̃(−α)"),
    ];
    for (map, x, want, name) in cases {
        let got = word(map.expand(x, 10_000).map_err(|e| e.to_string())?);
        check(got == want, format!("{} = {:?}", name, got))?;
    }
    Ok("|V| = 15, four endpoint words match".into())
}

fn criterion_3() -> Outcome {
    let t = build(SIGNED_PAIR);
    let f = t.field().clone();
    let g = graph(&t);
    check(g.vdata.v == vec![f.int(-1), -&f.beta_pow(-1), f.beta_pow(-1)], "V")?;
    let b = f.beta_f64();
    let want = [(-1.0 / b, b * b), (-b * b, b * b), (-b * b, 1.0 / b)];
    let cs = clouds(&g, 20);
    for (c, (lo, hi)) in cs.iter().zip(want) {
        let (l, h) = c.bbox();
        check((l[0] - lo).abs() <= c.err && (h[0] - hi).abs() <= c.err, format!("cloud of {}: [{}, {}]", c.owner, l[0], h[0]))?;
    }
    let p = purely_periodic_points(&t, 10_000).map_err(|e| e.to_string())?;
    let r = tiles_containing(&t, &p, &f.int(1), 500).map_err(|e| e.to_string())?;
    check(r.count == 4, format!("tiles_containing(1) count {}", r.count))?;
    let samples = vec![f.int(1), f.beta(), f.int(2), &f.one() + &f.beta(), f.int(3)];
    let (min, _) = covering_degree_estimate(&t, &p, &samples, 500).map_err(|e| e.to_string())?;
    check(min == 4, format!("covering min {}", min))?;
    Ok(format!("depth-20 clouds within err {:.1e}, count 4, covering min 4", cs[0].err))
}

fn criterion_4() -> Outcome {
    let t = build(GOLDEN_SYM);
    let f = t.field().clone();
    let bp = |k: i64| f.beta_pow(k);
    let p = purely_periodic_points(&t, 10_000).map_err(|e| e.to_string())?;
    check(p.points == vec![-&bp(-2), bp(-2)], format!("P = {}", show(&p.points)))?;
    let WCheck::Holds { x, eps, witnesses } = check_w(&t, &p, 300).map_err(|e| e.to_string())? else {
        return Err("(W) not found".into());
    };
    check(x == bp(-2), format!("x = {}", x))?;
    check(eps == f.div(&bp(-3), &f.int(2)).unwrap(), format!("ε = {}", eps))?;
    for w in &witnesses {
        check(w.z == bp(-5) && w.k == 3, format!("witness z = {}, k = {}", w.z, w.k))?;
    }
    let chains = [
        (bp(-2), vec![f.mul(&f.int(2), &bp(-3)), -&bp(-3), -&bp(-2), bp(-2)]),
        (-&bp(-2), vec![f.mul(&f.int(-2), &bp(-4)), f.mul(&f.int(-2), &bp(-3)), bp(-3), bp(-2)]),
    ];
    for (y, chain) in chains {
        let mut cur = &y + &bp(-5);
        for want in &chain {
            check(&cur == want, format!("orbit of {} + z reaches {} instead of {}", y, cur, want))?;
            if want != chain.last().unwrap() {
                cur = t.step(&cur).map_err(|e| e.to_string())?.1;
            }
        }
    }
    let d = decide_tiling(&t, &graph(&t), 100_000).map_err(|e| e.to_string())?;
    check(d.verdict == Verdict::Tiling, "not a tiling")?;
    Ok("P = {±1/β²}, z = 1/β⁵, k = 3, both orbit chains exact, tiling".into())
}

fn criterion_5() -> Outcome {
    let t = build(TRIB_SYM);
    let f = t.field().clone();
    let ix = |d: i64| t.digit_index(&f.int(d)).unwrap();
    let w = |ds: &[i64]| ds.iter().map(|&d| ix(d)).collect::<Vec<usize>>();
    let a = build_automaton(&t, 100_000).map_err(|e| e.to_string())?;
    let got = a.forbidden_words().ok_or("automaton is not of finite type")?;
    let listed: Vec<Vec<i64>> = vec![
        vec![1, 1],
        vec![1, 0, 1],
        vec![1, 0, 0, 0],
        vec![1, 0, 0, 1],
        vec![-1, -1],
        vec![-1, 0, -1],
        vec![-1, 0, 0, 0],
        vec![-1, 0, 0, -1],
        vec![0, 0, 0],
    ];
    let listed: Vec<Vec<usize>> = listed.iter().map(|d| w(d)).collect();
    for l in &listed {
        check(!a.accepts(l), format!("listed word {:?} is accepted", l))?;
    }
    // minimal elements of the listed set: drop words with another listed word as a proper factor
    let has_factor = |u: &[usize], v: &[usize]| v.len() < u.len() && u.windows(v.len()).any(|s| s == v);
    let mut minimal: Vec<Vec<usize>> = listed.iter().filter(|u| !listed.iter().any(|v| has_factor(u, v))).cloned().collect();
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    check(got == minimal, format!("minimal forbidden words {:?}", got))?;

    let p = purely_periodic_points(&t, 10_000).map_err(|e| e.to_string())?;
    let r = tiles_containing(&t, &p, &f.int(4), 500).map_err(|e| e.to_string())?;
    let b2 = f.beta_pow(2);
    let listed_owners = sorted(&f, vec![&f.int(3) - &b2, &f.int(4) - &f.mul(&f.int(2), &b2)]);
    let g = graph(&t);
    let d = decide_tiling(&t, &g, 2_000_000).map_err(|e| e.to_string())?;
    check(d.verdict == Verdict::Multiple, "decide_tiling says tiling")?;
    check(d.deltas(&f).contains(&f.beta_pow(-2)), "no pair at difference 1/β²")?;
    let mut samples = Vec::new();
    for m in 0..=5 {
        for n in 0..10 {
            if n + m > 0 {
                samples.push(&f.int(n) + &f.mul(&f.int(m), &f.beta()));
            }
        }
    }
    let (min, _) = covering_degree_estimate(&t, &p, &samples, 500).map_err(|e| e.to_string())?;
    check(min == 2, format!("covering min {} over {} samples", min, samples.len()))?;
    if r.owners != listed_owners {
        let outside: Vec<String> = listed_owners.iter().filter(|x| !t.contains(x)).map(|x| x.to_string()).collect();
        let cs = clouds(&g, 22);
        let oracle: Vec<bool> = r.owners.iter().map(|o| near_tile(&g, &cs, o, &f.int(4))).collect();
        return Err(format!(
            "tiles_containing(4) = {} but {} expected; {} not in X′; cloud oracle on computed owners {:?}; \
             forbidden words, multiple at 1/β², covering min 2 all hold",
            show(&r.owners),
            show(&listed_owners),
            outside.join(", "),
            oracle
        ));
    }
    Ok("forbidden words, owners of Φ(4), multiple at 1/β², covering min 2".into())
}

fn criterion_6() -> Outcome {
    let t = build(SMALLEST_SYM);
    let f = t.field().clone();
    let p = purely_periodic_points(&t, 10_000).map_err(|e| e.to_string())?;
    let x = f.from_ints(&[3, -2, 0]);
    let i = p.index_of(&x).ok_or("3 − 2β is not purely periodic")?;
    check(p.len() == 8, format!("|P| = {}", p.len()))?;
    let orbit = t.orbit(&x, 100).map_err(|e| e.to_string())?.0;
    check(sorted(&f, orbit) == p.points, "P is not the orbit of 3 − 2β")?;
    let word: Vec<i64> = p.words[i].iter().map(|&a| f.approx(&t.digits()[a]).round() as i64).collect();
    check(word == vec![0, 1, -1, 1, 0, -1, 1, -1], format!("period word {:?}", word))?;
    let r = tiles_containing(&t, &p, &f.int(2), 500).map_err(|e| e.to_string())?;
    let want = sorted(&f, vec![x.clone(), f.from_ints(&[0, -3, 2])]);
    check(r.owners == want, format!("tiles_containing(2) = {}", show(&r.owners)))?;
    let d = decide_tiling(&t, &graph(&t), 2_000_000).map_err(|e| e.to_string())?;
    check(d.verdict == Verdict::Multiple, "decide_tiling says tiling")?;
    Ok("8-point orbit of 3 − 2β, word 0 1 −1 1 0 −1 1 −1, owners {3 − 2β, 2β² − 3β}, multiple".into())
}

fn criterion_7() -> Outcome {
    let t = build(CUBIC_A);
    let f = t.field().clone();
    let p = purely_periodic_points(&t, 10_000).map_err(|e| e.to_string())?;
    let r = tiles_containing(&t, &p, &f.int(4), 500).map_err(|e| e.to_string())?;
    check(r.owners == vec![f.from_ints(&[3, 2, -2])], format!("β³ = 2β² − β + 1: owners {}", show(&r.owners)))?;

    let t = build(CUBIC_B);
    let f = t.field().clone();
    let p = purely_periodic_points(&t, 10_000).map_err(|e| e.to_string())?;
    let want = sorted(&f, vec![f.beta_pow(-2), f.beta_pow(-3), -&f.beta_pow(-2), -&f.beta_pow(-3)]);
    check(p.points == want, format!("β³ = β² + 1: P = {}", show(&p.points)))?;
    let r = tiles_containing(&t, &p, &f.int(4), 500).map_err(|e| e.to_string())?;
    check(r.owners == vec![f.from_ints(&[4, -1, -1])], format!("β³ = β² + 1: owners {}", show(&r.owners)))?;
    Ok("single owners 3 + 2β − 2β² and 4 − β − β²".into())
}

fn criterion_8() -> Outcome {
    let suites: [SuiteRun; 5] = [
        ("(a) round trip", Box::new(|| suite_roundtrip(1000))),
        ("(b) admissibility", Box::new(|| suite_admissible(1000))),
        ("(c) refinement", Box::new(suite_refinement)),
        ("(d) automaton", Box::new(|| suite_automaton(10_000))),
        ("(e) transducer", Box::new(|| suite_transducer(1000))),
    ];
    for (name, s) in suites {
        s().map_err(|e| format!("{}: {}", name, e))?;
    }
    Ok("suites (a) to (e) without failures".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, 5.0, criterion_1),
        (2, 5.0, criterion_2),
        (3, 30.0, criterion_3),
        (4, 10.0, criterion_4),
        (5, 120.0, criterion_5),
        (6, 120.0, criterion_6),
        (7, 60.0, criterion_7),
        (8, 600.0, criterion_8),
    ];
    let mut failed = Vec::new();
    for (n, limit, run) in criteria {
        match timed(limit, run) {
            Ok(d) => println!("criterion {}: PASS ({})", n, d),
            Err(e) => {
                println!("criterion {}: FAIL ({})", n, e);
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {:?}", failed);
        std::process::exit(1);
    }
}

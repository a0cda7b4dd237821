use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::charpoly::divides_charpoly;
use super::SoficError;
use crate::betamap::{invariant_density, BetaTransform, IntervalQB};
use crate::numfield::{lattice, PisotField, QBeta};
use crate::tiling::{clouds, CellSet, GifsGraph};

/// Pair of tiles T_x, T_{x′} with x − x′ = delta, x ∈ J_p, x′ ∈ J_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffState {
    pub delta: QBeta,
    pub p: usize,
    pub q: usize,
}

/// Product of the GIFS with itself along differences: a transition a|a′
/// from (δ, p, q) to ((δ + a − a′)/β, p′, q′) pairs the edges (p, p′, a) and
/// (q, q′, a′).
#[derive(Clone, Debug)]
pub struct DiffTransducer {
    pub states: Vec<DiffState>,
    /// (from, to, a, a′)
    pub edges: Vec<(usize, usize, usize, usize)>,
    pub initial: Vec<usize>,
}

fn overlap(f: &PisotField, jp: &IntervalQB, jq: &IntervalQB, delta: &QBeta) -> bool {
    let lo = f.max(&jp.lo, &(&jq.lo + delta)).clone();
    let hi = f.min(&jp.hi, &(&jq.hi + delta)).clone();
    f.lt(&lo, &hi)
}

/// Conjugate bounds 2·max_a |Γ_j(a)| / (1 − |β_j|) on tile differences.
fn diff_bounds(t: &BetaTransform) -> Vec<f64> {
    crate::tiling::conj_bounds(t.field(), t.digits(), 2.0)
}

fn within(f: &PisotField, x: &QBeta, bounds: &[f64]) -> bool {
    bounds.iter().enumerate().all(|(i, &b)| f.gamma(x, i + 2).abs_lower() <= b)
}

/// Nonzero z ∈ Z[β] ∩ (X − X) within the difference bounds.
fn lattice_differences(t: &BetaTransform) -> Vec<QBeta> {
    let f = t.field();
    let diam = f.approx(&(t.x_max() - t.x_min()));
    let mut zs = lattice::box_points(f, -diam, diam, &diff_bounds(t));
    zs.sort_by(|a, b| f.cmp(a, b));
    zs
}

pub fn build_transducer(t: &BetaTransform, g: &GifsGraph, deltas: &[QBeta], max_states: usize) -> Result<DiffTransducer, SoficError> {
    let f = t.field();
    let bounds = diff_bounds(t);
    let j = &g.vdata.j;
    let n = g.len();
    let mut index: HashMap<DiffState, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::new();
    for d in deltas {
        for p in 0..n {
            for q in 0..n {
                if overlap(f, &j[p], &j[q], d) {
                    let s = DiffState { delta: d.clone(), p, q };
                    if !index.contains_key(&s) {
                        index.insert(s.clone(), states.len());
                        initial.push(states.len());
                        queue.push_back(states.len());
                        states.push(s);
                    }
                }
            }
        }
    }
    let digits = t.digits();
    let mut edges = Vec::new();
    while let Some(i) = queue.pop_front() {
        let s = states[i].clone();
        for &(p2, a) in g.out_edges(s.p) {
            for &(q2, b) in g.out_edges(s.q) {
                let nd = f.div_beta(&(&(&s.delta + &digits[a]) - &digits[b]));
                if !within(f, &nd, &bounds) || !overlap(f, &j[p2], &j[q2], &nd) {
                    continue;
                }
                let ns = DiffState { delta: nd, p: p2, q: q2 };
                let id = match index.get(&ns) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= max_states {
                            return Err(SoficError::BudgetExceeded(format!("more than {} transducer states", max_states)));
                        }
                        let id = states.len();
                        index.insert(ns.clone(), id);
                        states.push(ns);
                        queue.push_back(id);
                        id
                    }
                };
                edges.push((i, id, a, b));
            }
        }
    }
    Ok(DiffTransducer { states, edges, initial })
}

impl DiffTransducer {
    pub fn to_json(&self, t: &BetaTransform) -> Value {
        json!({
            "states": self.states.iter().map(|s| json!({"delta": s.delta.to_string(), "p": s.p, "q": s.q})).collect::<Vec<_>>(),
            "initial": self.initial,
            "transitions": self.edges.iter().map(|&(i, k, a, b)| json!({"from": i, "to": k, "in": t.digits()[a].to_string(), "out": t.digits()[b].to_string()})).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self, t: &BetaTransform) -> String {
        let mut s = String::from("digraph transducer {\n");
        for (i, st) in self.states.iter().enumerate() {
            s.push_str(&format!("  s{} [label=\"{}; {}, {}\"];\n", i, st.delta, st.p, st.q));
        }
        for &(i, k, a, b) in &self.edges {
            s.push_str(&format!("  s{} -> s{} [label=\"{}|{}\"];\n", i, k, t.digits()[a], t.digits()[b]));
        }
        s.push_str("}\n");
        s
    }
}

/// How an SCC was classified.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    /// contains a pair of equal points of positive density
    Diagonal,
    /// positive vector v with A v ≤ c v, c < β
    CollatzWielandt,
    /// exact divisibility of the characteristic polynomial by the minimal polynomial
    Charpoly,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SccReport {
    pub size: usize,
    pub beta_eigenvalue: bool,
    pub method: EigenMethod,
    /// numeric estimate of the spectral radius
    pub radius: f64,
    /// certified β − c when the Collatz–Wielandt bound c applies
    pub gap: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Tiling,
    Multiple,
}

#[derive(Clone, Debug)]
pub struct TilingDecision {
    pub verdict: Verdict,
    /// initial tile pairs whose intersection has positive measure
    pub pairs: Vec<DiffState>,
    pub transducer: DiffTransducer,
    pub sccs: Vec<SccReport>,
}

impl TilingDecision {
    /// Distinct differences among the positive-measure pairs.
    pub fn deltas(&self, f: &PisotField) -> Vec<QBeta> {
        let mut v: Vec<QBeta> = self.pairs.iter().map(|s| s.delta.clone()).collect();
        v.sort_by(|a, b| f.cmp(a, b));
        v.dedup();
        v
    }
}

/// Power iteration on A + I; returns (positive eigenvector estimate, radius estimate).
fn perron(a: &[Vec<i64>]) -> (Vec<f64>, f64) {
    let n = a.len();
    let mut v = vec![1.0; n];
    let mut lam = 0.0;
    for _ in 0..2000 {
        let w: Vec<f64> = (0..n).map(|i| v[i] + (0..n).map(|k| a[i][k] as f64 * v[k]).sum::<f64>()).collect();
        let s = w.iter().cloned().fold(0.0, f64::max);
        let nv: Vec<f64> = w.iter().map(|x| x / s).collect();
        let diff = nv.iter().zip(&v).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        v = nv;
        lam = s - 1.0;
        if diff < 1e-14 {
            break;
        }
    }
    (v, lam)
}

/// Exact upper bound max_i (A v)_i / v_i for a positive rational v.
fn collatz_wielandt(a: &[Vec<i64>], v: &[f64]) -> Option<BigRational> {
    // round to 40 fractional bits; entries stay positive
    let den = BigInt::from(1u64 << 40);
    let vq: Vec<BigRational> = v
        .iter()
        .map(|&x| BigRational::new(BigInt::from(((x * (1u64 << 40) as f64).round() as i64).max(1)), den.clone()))
        .collect();
    let mut best: Option<BigRational> = None;
    for (i, row) in a.iter().enumerate() {
        let s: BigRational = row.iter().zip(&vq).filter(|(c, _)| **c != 0).map(|(&c, x)| x * BigRational::from_integer(BigInt::from(c))).fold(BigRational::zero(), |acc, x| acc + x);
        let r = s / &vq[i];
        if best.as_ref().is_none_or(|b| &r > b) {
            best = Some(r);
        }
    }
    best
}

fn classify(f: &PisotField, a: &[Vec<i64>]) -> SccReport {
    let (v, radius) = perron(a);
    let size = a.len();
    if v.iter().all(|&x| x > 1e-200) {
        if let Some(c) = collatz_wielandt(a, &v) {
            let cq = f.from_rational(c.clone());
            if f.cmp(&cq, &f.beta()) == Ordering::Less {
                let gap = f.beta_f64() - c.to_f64().unwrap_or(f64::INFINITY);
                return SccReport { size, beta_eigenvalue: false, method: EigenMethod::CollatzWielandt, radius, gap: Some(gap) };
            }
        }
    }
    let hit = divides_charpoly(a, f.min_poly());
    SccReport { size, beta_eigenvalue: hit, method: EigenMethod::Charpoly, radius, gap: None }
}

/// Decides the tiling property: T is a tiling iff no pair of distinct tiles
/// T_x, T_{x′} (x, x′ ∈ Z[β] ∩ X) reaches an SCC of spectral radius β in
/// the difference transducer.
pub fn decide_tiling(t: &BetaTransform, g: &GifsGraph, max_states: usize) -> Result<TilingDecision, SoficError> {
    let f = t.field();
    let deltas: Vec<QBeta> = lattice_differences(t).into_iter().filter(|z| !z.is_zero()).collect();
    let tr = build_transducer(t, g, &deltas, max_states)?;
    let density = invariant_density(t, &g.vdata)?;
    let n = tr.states.len();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, tr.edges.len());
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for &(i, k, _, _) in &tr.edges {
        graph.add_edge(nodes[i], nodes[k], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&graph).into_iter().map(|c| c.into_iter().map(|x| x.index()).collect()).collect();
    for c in comps.iter_mut() {
        c.sort_unstable();
    }
    comps.sort();
    let mut self_loop = vec![false; n];
    for &(i, k, _, _) in &tr.edges {
        if i == k {
            self_loop[i] = true;
        }
    }
    let nontrivial: Vec<Vec<usize>> = comps.into_iter().filter(|c| c.len() > 1 || self_loop[c[0]]).collect();
    let reports: Vec<SccReport> = nontrivial
        .par_iter()
        .map(|c| {
            let diag = c.iter().any(|&s| {
                let st = &tr.states[s];
                st.delta.is_zero() && st.p == st.q && density.positive(f, st.p)
            });
            if diag {
                return SccReport { size: c.len(), beta_eigenvalue: true, method: EigenMethod::Diagonal, radius: f.beta_f64(), gap: None };
            }
            let pos: HashMap<usize, usize> = c.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let mut a = vec![vec![0i64; c.len()]; c.len()];
            for &(i, k, _, _) in &tr.edges {
                if let (Some(&x), Some(&y)) = (pos.get(&i), pos.get(&k)) {
                    a[x][y] += 1;
                }
            }
            classify(f, &a)
        })
        .collect();
    // states that reach a β-SCC
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, k, _, _) in &tr.edges {
        rev[k].push(i);
    }
    let mut reach: HashSet<usize> = HashSet::new();
    let mut stack: Vec<usize> = nontrivial.iter().zip(&reports).filter(|(_, r)| r.beta_eigenvalue).flat_map(|(c, _)| c.iter().copied()).collect();
    while let Some(s) = stack.pop() {
        if reach.insert(s) {
            stack.extend(rev[s].iter().copied());
        }
    }
    let pairs: Vec<DiffState> = tr.initial.iter().filter(|s| reach.contains(s)).map(|&s| tr.states[s].clone()).collect();
    let verdict = if pairs.is_empty() { Verdict::Tiling } else { Verdict::Multiple };
    Ok(TilingDecision { verdict, pairs, transducer: tr, sccs: reports })
}

/// Differences y − x of tiles that may intersect: z ∈ Z[β] ∩ (X − X) inside
/// the conjugate bounds whose depth-k clouds come within two error radii
/// for some pair of J intervals. Always contains 0.
pub fn difference_candidates(t: &BetaTransform, g: &GifsGraph, depth: usize) -> Vec<QBeta> {
    let f = t.field();
    let cs = clouds(g, depth);
    let err = cs.first().map_or(0.0, |c| c.err);
    let cell = 2.0 * crate::tiling::coord_err(f, err).max(1e-12);
    let sets: Vec<CellSet> = cs.iter().map(|c| CellSet::of(c, cell)).collect();
    let j = &g.vdata.j;
    let n = g.len();
    let mut out: Vec<QBeta> = lattice_differences(t)
        .into_par_iter()
        .filter(|z| {
            if z.is_zero() {
                return true;
            }
            let shift = f.phi(z);
            // T_{x+z} = Φ(x) + Φ(z) + D_q meets T_x = Φ(x) + D_p
            (0..n).any(|p| {
                (0..n).any(|q| {
                    overlap(f, &j[q], &j[p], z)
                        && cs[q].points().any(|pt| {
                            let moved: Vec<f64> = pt.iter().zip(&shift.coords).map(|(a, b)| a + b).collect();
                            sets[p].near(&moved)
                        })
                })
            })
        })
        .collect();
    if !out.iter().any(|z| z.is_zero()) {
        out.push(f.zero());
    }
    out.sort_by(|a, b| f.cmp(a, b));
    out
}

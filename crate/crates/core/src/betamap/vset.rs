use std::cmp::Ordering;
use std::collections::HashSet;

use num_integer::Integer;

use super::{interval, BetaTransform, IntervalQB, TransformError};
use crate::numfield::{PisotField, QBeta};

/// Boundary-orbit set with its partition of X.
#[derive(Clone, Debug)]
pub struct VData {
    /// sorted representatives
    pub v: Vec<QBeta>,
    /// J_x = [x, next boundary)
    pub j: Vec<IntervalQB>,
    /// discontinuities with their merge times (None: the orbits never merge)
    pub m: Vec<(QBeta, Option<usize>)>,
}

impl VData {
    /// Index of the J interval containing y (right-continuous convention).
    pub fn locate(&self, f: &PisotField, y: &QBeta) -> Option<usize> {
        let i = self.v.partition_point(|v| f.le(v, y));
        if i == 0 {
            return None;
        }
        f.lt(y, &self.j[i - 1].hi).then_some(i - 1)
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}

/// Points where T and T̃ differ inside X, i.e. shared endpoints of adjacent intervals.
fn discontinuities(t: &BetaTransform) -> Vec<QBeta> {
    t.pieces().windows(2).filter(|w| w[0].0.hi == w[1].0.lo).map(|w| w[1].0.lo.clone()).collect()
}

fn orbit_at(pts: &[QBeta], cs: usize, k: usize) -> &QBeta {
    if k < pts.len() {
        &pts[k]
    } else {
        let p = pts.len() - cs;
        &pts[cs + (k - cs) % p]
    }
}

/// V = (X∖X̃) ∪ {T^k x, T̃^k x : 1 ≤ k < m_x} ∩ X over the discontinuities x.
/// When the two orbits of a discontinuity never merge, both (finite,
/// eventually periodic) orbits are added in full.
pub fn compute_v(t: &BetaTransform, budget: usize) -> Result<VData, TransformError> {
    let f = t.field();
    let r = t.right();
    let l = r.twin();
    let mut set: HashSet<QBeta> = HashSet::new();
    let mut v: Vec<QBeta> = Vec::new();
    let mut add = |x: &QBeta, v: &mut Vec<QBeta>| {
        if set.insert(x.clone()) {
            v.push(x.clone());
        }
    };
    for c in r.components() {
        add(&c.lo, &mut v);
    }
    let mut m = Vec::new();
    for x in discontinuities(&r) {
        let (pr, _, cr) = r.orbit(&x, budget)?;
        let (pl, _, cl) = l.orbit(&x, budget)?;
        let per = (pr.len() - cr).lcm(&(pl.len() - cl));
        let horizon = pr.len().max(pl.len()) + per + 1;
        let mx = (1..horizon).find(|&k| orbit_at(&pr, cr, k) == orbit_at(&pl, cl, k));
        let upto = mx.unwrap_or(horizon);
        for k in 1..upto {
            add(orbit_at(&pr, cr, k), &mut v);
            let y = orbit_at(&pl, cl, k);
            if r.contains(y) {
                add(y, &mut v);
            }
        }
        m.push((x, mx));
    }
    v.sort_by(|a, b| f.cmp(a, b));
    let mut bounds: Vec<QBeta> = v.clone();
    bounds.extend(r.components().iter().map(|c| c.hi.clone()));
    bounds.sort_by(|a, b| f.cmp(a, b));
    bounds.dedup();
    let j = v
        .iter()
        .map(|x| {
            let i = bounds.partition_point(|b| f.le(b, x));
            IntervalQB::new(x.clone(), bounds[i].clone())
        })
        .collect();
    Ok(VData { v, j, m })
}

/// Edges (x, x′, a) with (x + a)/β ∈ J_{x′} ∩ X_a, as index triples.
pub fn gifs_edges(t: &BetaTransform, vd: &VData) -> Vec<(usize, usize, usize)> {
    let f = t.field();
    let r = t.right();
    let mut out = Vec::new();
    for (i, x) in vd.v.iter().enumerate() {
        for (a, d) in r.digits().iter().enumerate() {
            let y = f.div_beta(&(x + d));
            if !r.in_part(a, &y) {
                continue;
            }
            if let Some(j) = vd.locate(f, &y) {
                out.push((i, j, a));
            }
        }
    }
    out
}

/// Weights h_x on the J intervals with β·h = A·h (A the edge-count matrix),
/// normalized to Σ h_x λ(J_x) = 1.
#[derive(Clone, Debug)]
pub struct Density {
    /// exact eigenvector when the β-eigenspace of A is one-dimensional
    pub exact: Option<Vec<QBeta>>,
    pub weights: Vec<f64>,
}

impl Density {
    pub fn positive(&self, f: &PisotField, i: usize) -> bool {
        match &self.exact {
            Some(h) => f.sign(&h[i]) == Ordering::Greater,
            None => self.weights[i] > 1e-9 * self.weights.iter().cloned().fold(0.0, f64::max),
        }
    }
}

pub fn edge_matrix(n: usize, edges: &[(usize, usize, usize)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for &(i, j, _) in edges {
        a[i][j] += 1;
    }
    a
}

/// Nullspace basis of a square matrix over Q(β).
fn nullspace(f: &PisotField, mut a: Vec<Vec<QBeta>>) -> Vec<Vec<QBeta>> {
    let n = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = f.inv(&a[row][col]).expect("nonzero pivot");
        for k in 0..n {
            a[row][k] = f.mul(&a[row][k], &inv);
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for k in 0..n {
                    let t = f.mul(&factor, &a[row][k]);
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[r][fc];
            }
            v
        })
        .collect()
}

pub fn invariant_density(t: &BetaTransform, vd: &VData) -> Result<Density, TransformError> {
    let f = t.field();
    let n = vd.len();
    let a = edge_matrix(n, &gifs_edges(t, vd));
    let beta = f.beta();
    let lens: Vec<QBeta> = vd.j.iter().map(|j| j.length()).collect();
    let mat: Vec<Vec<QBeta>> = (0..n)
        .map(|i| (0..n).map(|k| if i == k { &f.int(a[i][k]) - &beta } else { f.int(a[i][k]) }).collect())
        .collect();
    let ns = nullspace(f, mat);
    if ns.len() == 1 {
        let mut h = ns.into_iter().next().unwrap();
        let signs: Vec<Ordering> = h.iter().map(|x| f.sign(x)).collect();
        let has_pos = signs.contains(&Ordering::Greater);
        let has_neg = signs.contains(&Ordering::Less);
        if !(has_pos && has_neg) {
            if has_neg {
                h = h.iter().map(|x| -x).collect();
            }
            let total = h.iter().zip(&lens).fold(f.zero(), |acc, (x, l)| &acc + &f.mul(x, l));
            let inv = f.inv(&total).map_err(|_| TransformError::NoFixedPoint)?;
            let h: Vec<QBeta> = h.iter().map(|x| f.mul(x, &inv)).collect();
            let weights = h.iter().map(|x| f.approx(x)).collect();
            return Ok(Density { exact: Some(h), weights });
        }
    }
    // Cesàro average of (A/β)^k·1
    let b = f.beta_f64();
    let lf: Vec<f64> = lens.iter().map(|l| f.approx(l)).collect();
    let mut cur = vec![1.0; n];
    let mut acc = vec![0.0; n];
    let iters = 4000;
    for _ in 0..iters {
        for i in 0..n {
            acc[i] += cur[i];
        }
        cur = (0..n).map(|i| (0..n).map(|k| a[i][k] as f64 * cur[k]).sum::<f64>() / b).collect();
    }
    let total: f64 = acc.iter().zip(&lf).map(|(x, l)| x * l).sum();
    if total.is_nan() || total <= 0.0 {
        return Err(TransformError::NoFixedPoint);
    }
    Ok(Density { exact: None, weights: acc.iter().map(|x| x / total).collect() })
}

/// T restricted to the union of the J intervals carrying positive weight.
pub fn restrict_to_support(t: &BetaTransform, vd: &VData, dens: &Density) -> Result<BetaTransform, TransformError> {
    let f = t.field();
    let support: Vec<IntervalQB> = (0..vd.len()).filter(|&i| dens.positive(f, i)).map(|i| vd.j[i].clone()).collect();
    t.restrict(&interval::normalize(f, support))
}

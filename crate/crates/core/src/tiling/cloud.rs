use std::collections::HashMap;

use rayon::prelude::*;

use super::{GifsGraph, TilingError};
use crate::numfield::{HPoint, QBeta};

/// Depth-k approximation of D_owner: points φ of the admissible pasts of
/// length k, with Hausdorff distance at most `err` to D_owner.
#[derive(Clone, Debug)]
pub struct TileCloud {
    pub owner: QBeta,
    pub vertex: usize,
    pub depth: usize,
    /// dimension of H
    pub dim: usize,
    /// flat coordinates, `dim` per point
    pub coords: Vec<f64>,
    /// numeric radius shared by all points (conjugate max-norm)
    pub rad: f64,
    /// C·ρ^k + rad
    pub err: f64,
}

impl TileCloud {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim.max(1))
    }

    pub fn hpoints(&self) -> Vec<HPoint> {
        self.points().map(|p| HPoint { coords: p.to_vec(), rad: self.rad }).collect()
    }

    /// Coordinate-wise (min, max).
    pub fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        (lo, hi)
    }
}

/// Removes points closer than `tol` (max-norm on coordinates) to an earlier point.
pub(crate) fn dedup(dim: usize, coords: Vec<f64>, tol: f64) -> Vec<f64> {
    let cell = tol.max(1e-300);
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut out: Vec<f64> = Vec::with_capacity(coords.len());
    let offsets = neighbour_offsets(dim);
    for p in coords.chunks(dim) {
        let key: Vec<i64> = p.iter().map(|c| (c / cell).floor() as i64).collect();
        let dup = offsets.iter().any(|off| {
            let k: Vec<i64> = key.iter().zip(off).map(|(a, b)| a + b).collect();
            grid.get(&k).is_some_and(|ids| {
                ids.iter().any(|&i| out[i * dim..(i + 1) * dim].iter().zip(p).all(|(a, b)| (a - b).abs() <= tol))
            })
        });
        if !dup {
            grid.entry(key).or_default().push(out.len() / dim);
            out.extend_from_slice(p);
        }
    }
    out
}

pub(crate) fn neighbour_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut offs = vec![vec![]];
    for _ in 0..dim {
        offs = offs
            .into_iter()
            .flat_map(|o: Vec<i64>| {
                (-1..=1).map(move |d| {
                    let mut n = o.clone();
                    n.push(d);
                    n
                })
            })
            .collect();
    }
    offs
}

/// Depth-k clouds of every vertex, by k-fold backward iteration from the origin.
pub fn clouds(g: &GifsGraph, depth: usize) -> Vec<TileCloud> {
    let f = g.field();
    let dim = f.degree() - 1;
    let n = g.len();
    let mut level: Vec<Vec<f64>> = vec![vec![0.0; dim]; n];
    let mut rad = 0.0f64;
    let max_phi_rad = g.edges.iter().map(|&(_, _, a)| g.phi_digit(a).rad).fold(0.0, f64::max);
    for _ in 0..depth {
        let prev = &level;
        let scale = prev
            .iter()
            .flat_map(|c| c.chunks(dim).map(|p| f.h_norm(&HPoint { coords: p.to_vec(), rad: 0.0 })))
            .fold(0.0, f64::max);
        rad = rad * f.rho() + max_phi_rad + 16.0 * f64::EPSILON * (scale + g.c_const()) + conj_slack(g) * scale;
        let tol = (4.0 * rad).max(1e-12);
        level = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut pts = Vec::new();
                for &(y, a) in g.out_edges(x) {
                    let shift = g.phi_digit(a);
                    for p in prev[y].chunks(dim) {
                        let m = f.h_apply(&HPoint { coords: p.to_vec(), rad: 0.0 });
                        pts.extend(m.coords.iter().zip(&shift.coords).map(|(u, v)| u + v));
                    }
                }
                dedup(dim, pts, tol)
            })
            .collect();
    }
    let err = g.err_bound(depth) + rad;
    level
        .into_iter()
        .enumerate()
        .map(|(x, coords)| TileCloud { owner: g.vdata.v[x].clone(), vertex: x, depth, dim, coords, rad, err })
        .collect()
}

fn conj_slack(g: &GifsGraph) -> f64 {
    g.field().conjugates()[1..].iter().map(|c| c.rad).fold(0.0, f64::max)
}

/// Depth-k cloud of a single vertex.
pub fn tile_cloud(g: &GifsGraph, owner: &QBeta, depth: usize) -> Result<TileCloud, TilingError> {
    let x = g.vertex(owner).ok_or_else(|| TilingError::NotVertex(owner.to_string()))?;
    Ok(clouds(g, depth).swap_remove(x))
}

use std::collections::{HashMap, HashSet};

use super::cloud::neighbour_offsets;
use super::{clouds, GifsGraph, TileCloud, TilingError};
use crate::betamap::{BetaTransform, IntervalQB, VData};
use crate::numfield::{lattice, HPoint, PisotField, QBeta, Slot};

/// Coordinate-wise error of an H point whose conjugate max-norm error is `err`.
pub(crate) fn coord_err(f: &PisotField, err: f64) -> f64 {
    if f.slots().iter().any(|s| matches!(s, Slot::Complex(_))) {
        2.0 * err
    } else {
        err
    }
}

/// Occupied cells of side `cell` in H coordinates.
#[derive(Clone, Debug)]
pub struct CellSet {
    pub cell: f64,
    pub dim: usize,
    pub cells: HashSet<Vec<i64>>,
}

impl CellSet {
    pub fn of(cloud: &TileCloud, cell: f64) -> Self {
        let cells = cloud.points().map(|p| key(p, cell)).collect();
        CellSet { cell, dim: cloud.dim, cells }
    }

    /// Measure of the occupied cells.
    pub fn measure(&self) -> f64 {
        self.cells.len() as f64 * self.cell.powi(self.dim as i32)
    }

    /// Measure of the occupied cells and their neighbours; bounds the measure
    /// of any set within one cell of the cloud.
    pub fn measure_upper(&self) -> f64 {
        let offs = neighbour_offsets(self.dim);
        let mut dil: HashSet<Vec<i64>> = HashSet::new();
        for c in &self.cells {
            for o in &offs {
                dil.insert(c.iter().zip(o).map(|(a, b)| a + b).collect());
            }
        }
        dil.len() as f64 * self.cell.powi(self.dim as i32)
    }

    /// Whether p lies in an occupied cell or a neighbour of one.
    pub fn near(&self, p: &[f64]) -> bool {
        let k = key(p, self.cell);
        neighbour_offsets(self.dim)
            .iter()
            .any(|o| self.cells.contains(&k.iter().zip(o).map(|(a, b)| a + b).collect::<Vec<i64>>()))
    }
}

fn key(p: &[f64], cell: f64) -> Vec<i64> {
    p.iter().map(|c| (c / cell).floor() as i64).collect()
}

#[derive(Clone, Debug)]
pub struct NatExtPiece {
    pub j: IntervalQB,
    pub cloud: TileCloud,
    /// box-counting measure of D_x in H coordinates
    pub measure: f64,
    pub measure_upper: f64,
}

/// X̂ = ∪_x (J_x v_1 − D_x) with its volume estimated by box counting.
#[derive(Clone, Debug)]
pub struct NatExt {
    pub depth: usize,
    pub err: f64,
    /// box side in H coordinates
    pub cell: f64,
    pub pieces: Vec<NatExtPiece>,
    pub area: f64,
    pub area_upper: f64,
}

pub fn natext_domain(t: &BetaTransform, vd: &VData, g: &GifsGraph, depth: usize) -> NatExt {
    let f = t.field();
    let cs = clouds(g, depth);
    let err = cs.first().map_or(0.0, |c| c.err);
    let cell = 2.0 * coord_err(f, err).max(1e-12);
    let mut area = 0.0;
    let mut area_upper = 0.0;
    let pieces: Vec<NatExtPiece> = cs
        .into_iter()
        .enumerate()
        .map(|(i, cloud)| {
            let set = CellSet::of(&cloud, cell);
            let (m, mu) = (set.measure(), set.measure_upper());
            let len = f.approx(&vd.j[i].length());
            area += len * m;
            area_upper += len * mu;
            NatExtPiece { j: vd.j[i].clone(), cloud, measure: m, measure_upper: mu }
        })
        .collect();
    let vf = f.vol_factor();
    NatExt { depth, err, cell, pieces, area: area * vf, area_upper: area_upper * vf }
}

/// A tile T_x = Φ(x) + D_v with v the V-representative of x.
#[derive(Clone, Debug)]
pub struct PatchTile {
    pub x: QBeta,
    pub vertex: usize,
    pub offset: HPoint,
}

/// Tiles T_x for x ∈ Z[β] ∩ X with |Γ_j(x)| ≤ radius for j ≥ 2.
pub fn tile_patch(t: &BetaTransform, vd: &VData, radius: f64) -> Result<Vec<PatchTile>, TilingError> {
    if !t.digits_integral() {
        return Err(TilingError::DigitsNotIntegral);
    }
    let f = t.field();
    let bounds = vec![radius; f.degree() - 1];
    let mut xs = lattice::box_points(f, f.approx(t.x_min()) - 1e-9, f.approx(t.x_max()) + 1e-9, &bounds);
    xs.retain(|x| t.contains(x));
    xs.sort_by(|a, b| f.cmp(a, b));
    Ok(xs
        .into_iter()
        .filter_map(|x| {
            let vertex = vd.locate(f, &x)?;
            let offset = f.phi(&x);
            Some(PatchTile { x, vertex, offset })
        })
        .collect())
}

/// X̂ and its translates by scale·{0,1}^d, with the coverage histogram of
/// the fundamental domain [0, scale)^d.
#[derive(Clone, Debug)]
pub struct TranslateScene {
    pub d: usize,
    pub scale: i64,
    pub translates: Vec<Vec<i64>>,
    /// (vertex, endpoints in R^d) of the segments J_x v_1 − p, p in the cloud
    pub segments: Vec<(usize, Vec<f64>, Vec<f64>)>,
    /// histogram[c] = number of samples covered exactly c times
    pub histogram: Vec<usize>,
    pub samples: usize,
    pub err: f64,
}

impl TranslateScene {
    pub fn fraction(&self, c: usize) -> f64 {
        self.histogram.get(c).copied().unwrap_or(0) as f64 / self.samples.max(1) as f64
    }
}

/// Low-discrepancy points of [0, 1)^d (additive recurrence on √primes).
fn kronecker(d: usize, n: usize) -> Vec<Vec<f64>> {
    const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
    (1..=n)
        .map(|i| (0..d).map(|k| (i as f64 * PRIMES[k % 8].sqrt()).fract()).collect())
        .collect()
}

pub fn torus_translates(
    t: &BetaTransform,
    vd: &VData,
    g: &GifsGraph,
    depth: usize,
    scale: i64,
    samples: usize,
) -> Result<TranslateScene, TilingError> {
    if scale < 1 {
        return Err(TilingError::Invalid("lattice scale must be positive".into()));
    }
    let f = t.field();
    let d = f.degree();
    let cs = clouds(g, depth);
    let err = cs.first().map_or(0.0, |c| c.err);
    let cell = 2.0 * coord_err(f, err).max(1e-12);
    let sets: Vec<CellSet> = cs.iter().map(|c| CellSet::of(c, cell)).collect();
    let js: Vec<(f64, f64)> = vd.j.iter().map(|j| (f.approx(&j.lo), f.approx(&j.hi))).collect();
    let mut segments = Vec::new();
    for (x, c) in cs.iter().enumerate() {
        for p in c.points() {
            let h = HPoint { coords: p.iter().map(|v| -v).collect(), rad: 0.0 };
            segments.push((x, f.to_rd(js[x].0, &h), f.to_rd(js[x].1, &h)));
        }
    }
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for (_, a, b) in &segments {
        for i in 0..d {
            lo[i] = lo[i].min(a[i]).min(b[i]);
            hi[i] = hi[i].max(a[i]).max(b[i]);
        }
    }
    let margin = 2.0 * cell * d as f64;
    let member = |w: &[f64]| -> bool {
        let (tc, h) = f.from_rd(w);
        let neg: Vec<f64> = h.iter().map(|v| -v).collect();
        js.iter().enumerate().any(|(x, &(a, b))| tc >= a && tc < b && sets[x].near(&neg))
    };
    let sc = scale as f64;
    let mut histogram = vec![0usize; 1];
    for u in kronecker(d, samples) {
        let u: Vec<f64> = u.iter().map(|v| v * sc).collect();
        let ranges: Vec<(i64, i64)> = (0..d)
            .map(|i| (((u[i] - hi[i] - margin) / sc).ceil() as i64, ((u[i] - lo[i] + margin) / sc).floor() as i64))
            .collect();
        let mut count = 0;
        let mut n: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            let w: Vec<f64> = (0..d).map(|i| u[i] - n[i] as f64 * sc).collect();
            if member(&w) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break 'outer;
                }
                if n[i] < ranges[i].1 {
                    n[i] += 1;
                    break;
                }
                n[i] = ranges[i].0;
                i += 1;
            }
        }
        if histogram.len() <= count {
            histogram.resize(count + 1, 0);
        }
        histogram[count] += 1;
    }
    let translates = (0..1usize << d)
        .map(|m| (0..d).map(|i| if m >> i & 1 == 1 { scale } else { 0 }).collect())
        .collect();
    Ok(TranslateScene { d, scale, translates, segments, histogram, samples, err })
}

/// Per-vertex box-count measures, keyed by vertex index.
pub fn cloud_measures(cs: &[TileCloud], f: &PisotField) -> HashMap<usize, f64> {
    let err = cs.first().map_or(0.0, |c| c.err);
    let cell = 2.0 * coord_err(f, err).max(1e-12);
    cs.iter().map(|c| (c.vertex, CellSet::of(c, cell).measure())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betamap::{compute_v, preset, Preset, PresetParams};

    #[test]
    fn golden_greedy_area_is_one() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::Greedy, &PresetParams::default()).unwrap();
        let vd = compute_v(&t, 1000).unwrap();
        let g = GifsGraph::build(&t, &vd).unwrap();
        let k = g.depth_for(1e-3);
        let ne = natext_domain(&t, &vd, &g, k);
        assert!((ne.area - 1.0).abs() < 0.02, "area {}", ne.area);
        assert!(ne.area_upper >= ne.area);
    }

    #[test]
    fn kronecker_in_unit_cube() {
        for p in kronecker(3, 100) {
            assert!(p.iter().all(|&c| (0.0..1.0).contains(&c)));
        }
    }
}

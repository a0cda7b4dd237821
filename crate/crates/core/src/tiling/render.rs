//! SVG 1.1 output. Colours are picked from a fixed palette by a hash of the
//! owner's coordinates, so the same input gives byte-identical files.

use std::fmt::Write;

use super::natext::{NatExt, PatchTile, TranslateScene};
use super::{TileCloud, TilingError};
use crate::numfield::{PisotField, QBeta};

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#637939",
];

/// FNV-1a over the canonical coordinate strings.
fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

pub fn color(owner: &QBeta) -> &'static str {
    PALETTE[(fnv(&owner.to_strings().join(",")) % PALETTE.len() as u64) as usize]
}

struct Frame {
    lo: [f64; 2],
    hi: [f64; 2],
    size: f64,
}

impl Frame {
    fn new(pts: impl Iterator<Item = [f64; 2]>, size: f64) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in pts {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        if !lo[0].is_finite() {
            lo = [0.0; 2];
            hi = [1.0; 2];
        }
        let pad = 0.02 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        Frame { lo: [lo[0] - pad, lo[1] - pad], hi: [hi[0] + pad, hi[1] + pad], size }
    }

    fn scale(&self) -> f64 {
        self.size / (self.hi[0] - self.lo[0]).max(self.hi[1] - self.lo[1])
    }

    /// y axis points up
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let s = self.scale();
        ((p[0] - self.lo[0]) * s, (self.hi[1] - p[1]) * s)
    }

    fn header(&self) -> String {
        let s = self.scale();
        let w = (self.hi[0] - self.lo[0]) * s;
        let h = (self.hi[1] - self.lo[1]) * s;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.2} {:.2}\">\n",
            w.ceil(), h.ceil(), w, h
        )
    }
}

fn project(v: &[f64]) -> [f64; 2] {
    match v.len() {
        1 => [v[0], 0.0],
        2 => [v[0], v[1]],
        // oblique view of R^3
        _ => [v[0] + 0.5 * v[2], v[1] + 0.35 * v[2]],
    }
}

/// Tiles Φ(x) + D_x of a patch; H must have dimension 1 or 2.
pub fn tiles_svg(f: &PisotField, patch: &[PatchTile], clouds: &[TileCloud]) -> Result<String, TilingError> {
    let dim = f.degree() - 1;
    if dim > 2 {
        return Err(TilingError::UnrenderableDimension(dim));
    }
    let pts = |t: &PatchTile| -> Vec<[f64; 2]> {
        let c = &clouds[t.vertex];
        c.points().map(|p| project(&p.iter().zip(&t.offset.coords).map(|(a, b)| a + b).collect::<Vec<_>>())).collect()
    };
    let all: Vec<Vec<[f64; 2]>> = patch.iter().map(pts).collect();
    let fr = Frame::new(all.iter().flatten().copied(), 800.0);
    let r = (0.6 * clouds.first().map_or(0.0, |c| c.err) * fr.scale()).clamp(0.4, 3.0);
    let mut s = fr.header();
    for (i, (t, ps)) in patch.iter().zip(&all).enumerate() {
        let y_off = if dim == 1 { (i % 8) as f64 * 6.0 + 4.0 } else { 0.0 };
        let _ = writeln!(s, "<g id=\"tile-{}\" fill=\"{}\" data-owner=\"{}\">", i, color(&t.x), t.x);
        for p in ps {
            let (x, y) = fr.map(*p);
            let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\"/>", x, y + y_off, r);
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn segments_svg(
    f: &PisotField,
    owners: &[QBeta],
    layers: &[(String, Vec<f64>)],
    segs: &[(usize, Vec<f64>, Vec<f64>)],
) -> Result<String, TilingError> {
    let d = f.degree();
    if d > 3 {
        return Err(TilingError::UnrenderableDimension(d - 1));
    }
    let shifted = |off: &[f64], v: &[f64]| -> [f64; 2] { project(&v.iter().zip(off).map(|(a, b)| a + b).collect::<Vec<_>>()) };
    let fr = Frame::new(
        layers.iter().flat_map(|(_, off)| segs.iter().flat_map(move |(_, a, b)| [shifted(off, a), shifted(off, b)])),
        800.0,
    );
    let mut s = fr.header();
    for (name, off) in layers {
        let _ = writeln!(s, "<g id=\"{}\" stroke-width=\"0.6\" stroke-opacity=\"0.7\">", name);
        for (x, a, b) in segs {
            let (x1, y1) = fr.map(shifted(off, a));
            let (x2, y2) = fr.map(shifted(off, b));
            let _ = writeln!(
                s,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\"/>",
                x1, y1, x2, y2, color(&owners[*x])
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn natext_segments(f: &PisotField, ne: &NatExt) -> Vec<(usize, Vec<f64>, Vec<f64>)> {
    let mut segs = Vec::new();
    for (x, piece) in ne.pieces.iter().enumerate() {
        let (a, b) = (f.approx(&piece.j.lo), f.approx(&piece.j.hi));
        for p in piece.cloud.hpoints() {
            let neg = crate::numfield::HPoint { coords: p.coords.iter().map(|v| -v).collect(), rad: 0.0 };
            segs.push((x, f.to_rd(a, &neg), f.to_rd(b, &neg)));
        }
    }
    segs
}

/// X̂ in R^d, one colour per J_x; d must be 2 or 3.
pub fn natext_svg(f: &PisotField, ne: &NatExt) -> Result<String, TilingError> {
    let owners: Vec<QBeta> = ne.pieces.iter().map(|p| p.cloud.owner.clone()).collect();
    segments_svg(f, &owners, &[("natext".into(), vec![0.0; f.degree()])], &natext_segments(f, ne))
}

/// X̂ and its lattice translates, one layer per translate.
pub fn translates_svg(f: &PisotField, owners: &[QBeta], scene: &TranslateScene) -> Result<String, TilingError> {
    let layers: Vec<(String, Vec<f64>)> = scene
        .translates
        .iter()
        .map(|n| {
            let name = format!("translate-{}", n.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("_"));
            (name, n.iter().map(|&c| c as f64).collect())
        })
        .collect();
    segments_svg(f, owners, &layers, &scene.segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colours_are_deterministic() {
        let f = PisotField::new(&[1, 1]).unwrap();
        assert_eq!(color(&f.beta()), color(&f.beta()));
        assert_eq!(fnv(""), 0xcbf29ce484222325);
    }
}

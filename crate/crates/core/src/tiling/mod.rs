//! Natural extension domains, the GIFS for the sets D_x, tiles T_x = Φ(x) + D_x,
//! purely periodic points and covering degrees.

mod cloud;
mod membership;
mod natext;
mod periodic;
pub mod render;

use thiserror::Error;

use crate::betamap::{gifs_edges, BetaTransform, TransformError, VData};
use crate::numfield::{FieldError, HPoint, PisotField, QBeta};

pub use cloud::{clouds, tile_cloud, TileCloud};
pub use membership::{check_w, covering_degree_estimate, tiles_containing, MembershipReport, WCheck, Witness};
pub use natext::{cloud_measures, natext_domain, tile_patch, torus_translates, CellSet, NatExt, NatExtPiece, PatchTile, TranslateScene};
pub use periodic::{check_f, purely_periodic_points, PeriodicSet};
pub(crate) use natext::coord_err;
pub(crate) use periodic::conj_bounds;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("digits must lie in Z[β]")]
    DigitsNotIntegral,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("H has dimension {0}; only 1 and 2 can be drawn")]
    UnrenderableDimension(usize),
    #[error("{0} is not a vertex of the graph")]
    NotVertex(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Graph-directed IFS D_x = ∪_{(x,x′,a)} (M_β D_{x′} + Φ(a)) on the V-representatives.
#[derive(Clone, Debug)]
pub struct GifsGraph {
    field: PisotField,
    pub vdata: VData,
    /// (x, x′, a) as indices into V and the digit list
    pub edges: Vec<(usize, usize, usize)>,
    out: Vec<Vec<(usize, usize)>>,
    phi_digits: Vec<HPoint>,
    c_const: f64,
}

impl GifsGraph {
    pub fn build(t: &BetaTransform, vdata: &VData) -> Result<Self, TilingError> {
        if !t.digits_integral() {
            return Err(TilingError::DigitsNotIntegral);
        }
        let f = t.field().clone();
        let edges = gifs_edges(t, vdata);
        let mut out = vec![Vec::new(); vdata.len()];
        for &(x, y, a) in &edges {
            out[x].push((y, a));
        }
        let phi_digits: Vec<HPoint> = t.digits().iter().map(|a| f.phi(a)).collect();
        let maxphi = phi_digits.iter().map(|p| f.h_norm(p) + p.rad).fold(0.0, f64::max);
        let c_const = maxphi / (1.0 - f.rho());
        Ok(GifsGraph { field: f, vdata: vdata.clone(), edges, out, phi_digits, c_const })
    }

    pub fn field(&self) -> &PisotField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.vdata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vdata.is_empty()
    }

    pub fn vertex(&self, x: &QBeta) -> Option<usize> {
        self.vdata.v.iter().position(|v| v == x)
    }

    /// (x′, a) for every edge leaving x.
    pub fn out_edges(&self, x: usize) -> &[(usize, usize)] {
        &self.out[x]
    }

    pub fn phi_digit(&self, a: usize) -> &HPoint {
        &self.phi_digits[a]
    }

    /// C = max_a ‖Φ(a)‖ / (1 − ρ).
    pub fn c_const(&self) -> f64 {
        self.c_const
    }

    /// Certified Hausdorff bound C·ρ^k of the depth-k clouds (before rounding radius).
    pub fn err_bound(&self, depth: usize) -> f64 {
        self.c_const * self.field.rho().powi(depth as i32)
    }

    /// Smallest depth with C·ρ^k ≤ target.
    pub fn depth_for(&self, target: f64) -> usize {
        let mut k = 0;
        while self.err_bound(k) > target && k < 10_000 {
            k += 1;
        }
        k
    }

    /// Integer edge-count matrix.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        crate::betamap::edge_matrix(self.len(), &self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betamap::{compute_v, preset, Preset, PresetParams};

    #[test]
    fn golden_greedy_graph() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::Greedy, &PresetParams::default()).unwrap();
        let vd = compute_v(&t, 1000).unwrap();
        let g = GifsGraph::build(&t, &vd).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.out_edges(0), &[(0, 0), (1, 1)]);
        assert_eq!(g.out_edges(1), &[(0, 0)]);
        // ‖Φ(1)‖ = 1, ρ = 1/β, so C = β²
        assert!((g.c_const() - f.beta_f64().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn non_integral_digits_rejected() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::LinearMod1, &PresetParams { alpha: Some(f.ratio(1, 2)), digits: None }).unwrap();
        let vd = compute_v(&t, 1000).unwrap();
        assert_eq!(GifsGraph::build(&t, &vd).unwrap_err(), TilingError::DigitsNotIntegral);
    }
}

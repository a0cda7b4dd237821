//! Python bindings. Elements of Q(β) cross the boundary as lists of
//! power-basis coordinates, each an int or a "p/q" string.

use betatile::betamap::config::{parse_qbeta_value, TransformConfig};
use betatile::betamap::{compute_v, BetaTransform};
use betatile::sofic::{build_automaton, decide_tiling, Verdict};
use betatile::tiling::{check_f, check_w, natext_domain, purely_periodic_points, tiles_containing, GifsGraph};
use betatile::QBeta;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn coords(x: &QBeta) -> Vec<String> {
    x.to_strings()
}

#[pyclass(name = "Transform", frozen)]
struct PyTransform {
    t: BetaTransform,
}

impl PyTransform {
    fn parse(&self, x: Vec<String>) -> PyResult<QBeta> {
        let v = serde_json::Value::Array(x.into_iter().map(serde_json::Value::String).collect());
        parse_qbeta_value(self.t.field(), &v).map_err(err)
    }

    fn graph(&self) -> PyResult<GifsGraph> {
        let vd = compute_v(&self.t, 100_000).map_err(err)?;
        GifsGraph::build(&self.t, &vd).map_err(err)
    }
}

#[pymethods]
impl PyTransform {
    /// Builds a transformation from its JSON config.
    #[new]
    fn new(config: &str) -> PyResult<Self> {
        let t = TransformConfig::from_json(config).and_then(|c| c.build()).map_err(err)?;
        Ok(PyTransform { t })
    }

    /// Coefficients c with β^d = c_1 β^{d−1} + … + c_d.
    fn field(&self) -> Vec<i64> {
        self.t.field().coeffs().to_vec()
    }

    fn beta(&self) -> f64 {
        self.t.field().beta_f64()
    }

    fn digits(&self) -> Vec<Vec<String>> {
        self.t.digits().iter().map(coords).collect()
    }

    /// Eventually periodic expansion of x as (preperiod, period) digit indices.
    #[pyo3(signature = (x, budget = 100_000))]
    fn expand(&self, x: Vec<String>, budget: usize) -> PyResult<(Vec<usize>, Vec<usize>)> {
        let e = self.t.expand(&self.parse(x)?, budget).map_err(err)?;
        Ok((e.preperiod, e.period))
    }

    /// Boundary orbit set V, sorted.
    fn v_set(&self) -> PyResult<Vec<Vec<String>>> {
        Ok(compute_v(&self.t, 100_000).map_err(err)?.v.iter().map(coords).collect())
    }

    fn periodic_points(&self) -> PyResult<Vec<Vec<String>>> {
        Ok(purely_periodic_points(&self.t, 100_000).map_err(err)?.points.iter().map(coords).collect())
    }

    fn check_f(&self) -> PyResult<bool> {
        Ok(check_f(&purely_periodic_points(&self.t, 100_000).map_err(err)?))
    }

    /// True when witnesses are found within `budget` candidates.
    #[pyo3(signature = (budget = 300))]
    fn check_w(&self, budget: usize) -> PyResult<bool> {
        let p = purely_periodic_points(&self.t, 100_000).map_err(err)?;
        Ok(check_w(&self.t, &p, budget).map_err(err)?.holds())
    }

    /// Owners x of the tiles T_x that contain Φ(z).
    #[pyo3(signature = (z, max_k = 500))]
    fn tiles_containing(&self, z: Vec<String>, max_k: usize) -> PyResult<Vec<Vec<String>>> {
        let p = purely_periodic_points(&self.t, 100_000).map_err(err)?;
        let r = tiles_containing(&self.t, &p, &self.parse(z)?, max_k).map_err(err)?;
        Ok(r.owners.iter().map(coords).collect())
    }

    /// Box-counting volume estimate of the natural extension domain.
    fn natext_area(&self, depth: usize) -> PyResult<f64> {
        let vd = compute_v(&self.t, 100_000).map_err(err)?;
        let g = GifsGraph::build(&self.t, &vd).map_err(err)?;
        Ok(natext_domain(&self.t, &vd, &g, depth).area)
    }

    /// Minimal forbidden words as digit indices, or None when not of finite type.
    fn forbidden_words(&self) -> PyResult<Option<Vec<Vec<usize>>>> {
        Ok(build_automaton(&self.t, 100_000).map_err(err)?.forbidden_words())
    }

    /// "tiling" or "multiple".
    fn decide_tiling(&self) -> PyResult<&'static str> {
        let d = decide_tiling(&self.t, &self.graph()?, 2_000_000).map_err(err)?;
        Ok(match d.verdict {
            Verdict::Tiling => "tiling",
            Verdict::Multiple => "multiple",
        })
    }
}

#[pymodule]
fn betatile_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTransform>()?;
    Ok(())
}

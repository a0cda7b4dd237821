use std::collections::{HashMap, HashSet};

use super::TilingError;
use crate::betamap::BetaTransform;
use crate::numfield::{lattice, PisotField, QBeta};

/// Purely periodic points of Z[β] ∩ X, sorted by value.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSet {
    pub points: Vec<QBeta>,
    /// minimal period of each point
    pub periods: Vec<usize>,
    /// digit indices of one period
    pub words: Vec<Vec<usize>>,
}

impl PeriodicSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, x: &QBeta) -> Option<usize> {
        self.points.iter().position(|p| p == x)
    }

    /// lcm of all periods.
    pub fn period_lcm(&self) -> usize {
        use num_integer::Integer;
        self.periods.iter().fold(1usize, |a, &p| a.lcm(&p))
    }
}

/// Per-conjugate bounds max_a |Γ_j(a)| / (1 − |β_j|) for j = 2..d.
pub(crate) fn conj_bounds(f: &PisotField, digits: &[QBeta], factor: f64) -> Vec<f64> {
    (2..=f.degree())
        .map(|j| {
            let bj = f.conjugates()[j - 1];
            let denom = 1.0 - (bj.abs_upper());
            let m = digits.iter().map(|a| f.gamma(a, j).abs_upper()).fold(0.0, f64::max);
            factor * m / denom * (1.0 + 1e-9) + 1e-12
        })
        .collect()
}

/// Enumerates x ∈ Z[β] ∩ X inside the conjugate box that contains every
/// purely periodic point and keeps those whose orbit returns to x.
pub fn purely_periodic_points(t: &BetaTransform, budget: usize) -> Result<PeriodicSet, TilingError> {
    if !t.digits_integral() {
        return Err(TilingError::DigitsNotIntegral);
    }
    let f = t.field();
    let bounds = conj_bounds(f, t.digits(), 1.0);
    let (lo, hi) = (f.approx(t.x_min()), f.approx(t.x_max()));
    let cands = lattice::box_points(f, lo - 1e-9, hi + 1e-9, &bounds);
    let mut known: HashMap<QBeta, bool> = HashMap::new();
    let mut found: HashSet<QBeta> = HashSet::new();
    for x in cands {
        if !t.contains(&x) || known.contains_key(&x) {
            continue;
        }
        let (pts, _, cs) = t.orbit(&x, budget)?;
        // every visited point is decided: exactly the cycle is purely periodic
        for (i, p) in pts.iter().enumerate() {
            known.insert(p.clone(), i >= cs);
            if i >= cs {
                found.insert(p.clone());
            }
        }
    }
    let mut points: Vec<QBeta> = found.into_iter().collect();
    points.sort_by(|a, b| f.cmp(a, b));
    let mut periods = Vec::with_capacity(points.len());
    let mut words = Vec::with_capacity(points.len());
    for x in &points {
        let (_, digs, _) = t.orbit(x, budget)?;
        periods.push(digs.len());
        words.push(digs);
    }
    Ok(PeriodicSet { points, periods, words })
}

/// (F): P is a single point.
pub fn check_f(p: &PeriodicSet) -> bool {
    p.len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betamap::{preset, Preset, PresetParams};

    #[test]
    fn golden_greedy_p_is_origin() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::Greedy, &PresetParams::default()).unwrap();
        let p = purely_periodic_points(&t, 1000).unwrap();
        assert_eq!(p.points, vec![f.zero()]);
        assert_eq!(p.periods, vec![1]);
        assert!(check_f(&p));
    }

    #[test]
    fn silver_symmetric_has_f() {
        let f = PisotField::new(&[2, 1]).unwrap();
        let t = preset(&f, Preset::Symmetric, &PresetParams::default()).unwrap();
        let p = purely_periodic_points(&t, 1000).unwrap();
        assert!(check_f(&p), "{:?}", p.points);
    }
}

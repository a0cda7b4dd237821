use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{PeriodicSet, TilingError};
use crate::betamap::{interval, BetaTransform, IntervalQB};
use crate::numfield::QBeta;

/// Tiles T_x containing Φ(z), found via the purely periodic points.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipReport {
    pub z: QBeta,
    /// smallest k meeting the conditions for every y ∈ P
    pub k: usize,
    /// T^k(y + β^{−k} z) over y ∈ P, deduplicated and sorted
    pub owners: Vec<QBeta>,
    pub count: usize,
    /// owners agree when k grows by the lcm of the periods
    pub stable: bool,
}

/// Merged component of X_{b_1(y)} containing y, for each y ∈ P.
fn digit_components(t: &BetaTransform, p: &PeriodicSet) -> Result<Vec<IntervalQB>, TilingError> {
    let f = t.field();
    p.points
        .iter()
        .map(|y| {
            let a = t.digit_of(y).ok_or_else(|| TilingError::Invalid(format!("{} is not in X", y)))?;
            interval::normalize(f, t.parts()[a].clone())
                .into_iter()
                .find(|c| c.contains(f, y, t.side()))
                .ok_or_else(|| TilingError::Invalid(format!("{} is not in X", y)))
        })
        .collect()
}

fn check_z(t: &BetaTransform, z: &QBeta) -> Result<(), TilingError> {
    if !t.digits_integral() {
        return Err(TilingError::DigitsNotIntegral);
    }
    if !z.is_integral() || t.field().sign(z) == Ordering::Less {
        return Err(TilingError::Invalid(format!("{} is not in Z[β] ∩ [0, ∞)", z)));
    }
    Ok(())
}

fn owners_at(t: &BetaTransform, p: &PeriodicSet, s: &QBeta, k: usize) -> Result<Vec<QBeta>, TilingError> {
    let f = t.field();
    let mut out = Vec::with_capacity(p.len());
    for y in &p.points {
        out.push(t.iterate(&(y + s), k)?);
    }
    out.sort_by(|a, b| f.cmp(a, b));
    out.dedup();
    Ok(out)
}

/// Owners of the tiles containing Φ(z): with the smallest k such that
/// y + β^{−k}z ∈ X and [y, y + β^{−k−1}z] ⊂ X_{b_1(y)} for all y ∈ P,
/// they are T^k(y + β^{−k}z).
pub fn tiles_containing(t: &BetaTransform, p: &PeriodicSet, z: &QBeta, max_k: usize) -> Result<MembershipReport, TilingError> {
    check_z(t, z)?;
    let f = t.field();
    let comps = digit_components(t, p)?;
    let ok = |s: &QBeta| -> bool {
        let s1 = f.div_beta(s);
        p.points.iter().zip(&comps).all(|(y, c)| t.contains(&(y + s)) && c.contains(f, &(y + &s1), t.side()))
    };
    let mut s = z.clone();
    let mut k = 0;
    while !ok(&s) {
        k += 1;
        if k > max_k {
            return Err(TilingError::BudgetExceeded(format!("no valid k ≤ {} for z = {}", max_k, z)));
        }
        s = f.div_beta(&s);
    }
    let owners = owners_at(t, p, &s, k)?;
    let l = p.period_lcm();
    let s2 = (0..l).fold(s.clone(), |acc, _| f.div_beta(&acc));
    let again = owners_at(t, p, &s2, k + l)?;
    let count = owners.len();
    Ok(MembershipReport { z: z.clone(), k, stable: again == owners, owners, count })
}

/// Minimum and histogram of the membership counts over the samples.
/// Every count is at least the covering degree.
pub fn covering_degree_estimate(
    t: &BetaTransform,
    p: &PeriodicSet,
    samples: &[QBeta],
    max_k: usize,
) -> Result<(usize, BTreeMap<usize, usize>), TilingError> {
    let reports: Vec<MembershipReport> =
        samples.par_iter().map(|z| tiles_containing(t, p, z, max_k)).collect::<Result<_, _>>()?;
    let mut hist = BTreeMap::new();
    for r in &reports {
        *hist.entry(r.count).or_insert(0) += 1;
    }
    let min = reports.iter().map(|r| r.count).min().unwrap_or(0);
    Ok((min, hist))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub y: QBeta,
    pub z: QBeta,
    /// T^k(y + z) = T^k(x + z) = x
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum WCheck {
    Holds { x: QBeta, eps: QBeta, witnesses: Vec<Witness> },
    FailsByBudget { eps: QBeta, examined: usize },
}

impl WCheck {
    pub fn holds(&self) -> bool {
        matches!(self, WCheck::Holds { .. })
    }
}

/// Visit times of each point of P along the orbit of `start`.
fn hits(t: &BetaTransform, p: &PeriodicSet, start: &QBeta, budget: usize) -> Vec<Option<usize>> {
    if !t.contains(start) {
        return vec![None; p.len()];
    }
    match t.orbit(start, budget) {
        Ok((pts, _, _)) => p.points.iter().map(|x| pts.iter().position(|q| q == x)).collect(),
        Err(_) => vec![None; p.len()],
    }
}

/// Smallest k with T^k(y + z) = T^k(x + z) = x given the first visit times
/// iy, ix of x; x has period `period`.
fn merge_time(iy: Option<usize>, ix: Option<usize>, period: usize) -> Option<usize> {
    let (iy, ix) = (iy?, ix?);
    (iy.abs_diff(ix) % period == 0).then(|| iy.max(ix))
}

/// Integer vectors of max-norm exactly h.
fn shell(d: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-h; d];
    loop {
        if v.iter().any(|c| c.abs() == h) {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            if v[i] < h {
                v[i] += 1;
                break;
            }
            v[i] = -h;
            i += 1;
        }
    }
}

/// Searches witnesses of the weak finiteness property: some x ∈ P such that
/// every y ∈ P has z ∈ Z[β] ∩ [0, ε) and k with T^k(y + z) = T^k(x + z) = x.
/// Candidates z are visited by increasing height of Ψ(z); a witness shared by
/// all y is preferred. `budget` bounds the number of candidates tested.
pub fn check_w(t: &BetaTransform, p: &PeriodicSet, budget: usize) -> Result<WCheck, TilingError> {
    if !t.digits_integral() {
        return Err(TilingError::DigitsNotIntegral);
    }
    let f = t.field();
    let comps = digit_components(t, p)?;
    let eps = p
        .points
        .iter()
        .zip(&comps)
        .map(|(y, c)| f.mul_beta(&(&c.hi - y)))
        .min_by(|a, b| f.cmp(a, b))
        .ok_or_else(|| TilingError::Invalid("P is empty".into()))?;
    if p.len() == 1 {
        let x = p.points[0].clone();
        let witnesses = vec![Witness { y: x.clone(), z: f.zero(), k: 0 }];
        return Ok(WCheck::Holds { x, eps, witnesses });
    }
    let orbit_budget = 10_000;
    let eps_f = f.approx(&eps);
    let d = f.degree();
    let mut examined = 0;
    // per x: first witness of each y
    let mut table: Vec<Vec<Option<Witness>>> = vec![vec![None; p.len()]; p.len()];
    let mut h = 1i64;
    while examined < budget {
        let mut level: Vec<QBeta> = shell(d, h)
            .into_iter()
            .filter_map(|v| {
                let q: Vec<BigRational> = v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
                let z = f.pi1(&q).ok()?;
                let a = f.approx(&z);
                (a > -1e-9 && a < eps_f + 1e-9).then_some(z)
            })
            .filter(|z| f.sign(z) != Ordering::Less && f.lt(z, &eps))
            .collect();
        level.sort_by(|a, b| f.cmp(a, b));
        for z in &level {
            examined += 1;
            // hit[yi][xi]: first time the orbit of y + z visits x
            let hit: Vec<Vec<Option<usize>>> =
                p.points.par_iter().map(|y| hits(t, p, &(y + z), orbit_budget)).collect();
            let mut best: Option<(usize, Vec<usize>)> = None;
            for (xi, row) in table.iter_mut().enumerate() {
                let times: Vec<Option<usize>> =
                    (0..p.len()).map(|yi| merge_time(hit[yi][xi], hit[xi][xi], p.periods[xi])).collect();
                if let Some(ks) = times.iter().copied().collect::<Option<Vec<usize>>>() {
                    let m = ks.iter().copied().max().unwrap_or(0);
                    if best.as_ref().is_none_or(|(_, bk)| m < bk.iter().copied().max().unwrap_or(0)) {
                        best = Some((xi, ks));
                    }
                }
                for (yi, k) in times.into_iter().enumerate() {
                    if let (Some(k), None) = (k, &row[yi]) {
                        row[yi] = Some(Witness { y: p.points[yi].clone(), z: z.clone(), k });
                    }
                }
            }
            if let Some((xi, ks)) = best {
                let witnesses =
                    p.points.iter().zip(ks).map(|(y, k)| Witness { y: y.clone(), z: z.clone(), k }).collect();
                return Ok(WCheck::Holds { x: p.points[xi].clone(), eps, witnesses });
            }
            if examined >= budget {
                break;
            }
        }
        // no shared witness at this height: accept separate ones
        for (xi, row) in table.iter().enumerate() {
            if row.iter().all(Option::is_some) {
                let witnesses = row.iter().flatten().cloned().collect();
                return Ok(WCheck::Holds { x: p.points[xi].clone(), eps, witnesses });
            }
        }
        h += 1;
    }
    Ok(WCheck::FailsByBudget { eps, examined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betamap::{preset, Preset, PresetParams};
    use crate::numfield::PisotField;
    use crate::tiling::purely_periodic_points;

    #[test]
    fn shell_sizes() {
        assert_eq!(shell(2, 0).len(), 1);
        assert_eq!(shell(2, 1).len(), 8);
        assert_eq!(shell(3, 2).len(), 125 - 27);
    }

    #[test]
    fn golden_greedy_single_owner() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::Greedy, &PresetParams::default()).unwrap();
        let p = purely_periodic_points(&t, 1000).unwrap();
        for n in 1..=10 {
            let r = tiles_containing(&t, &p, &f.int(n), 200).unwrap();
            assert_eq!(r.count, 1);
            assert!(r.stable);
        }
        assert!(check_w(&t, &p, 10).unwrap().holds());
    }

    #[test]
    fn negative_z_rejected() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::Greedy, &PresetParams::default()).unwrap();
        let p = purely_periodic_points(&t, 1000).unwrap();
        assert!(matches!(tiles_containing(&t, &p, &f.int(-1), 10), Err(TilingError::Invalid(_))));
    }
}

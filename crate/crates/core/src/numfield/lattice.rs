//! Enumeration of Z[β] points inside a box given by a real range and
//! bounds on the moduli of the other conjugates.

use num_complex::Complex64;

use super::{PisotField, QBeta};

/// Integer coordinate vectors (q_0..q_{d−1}) of every x ∈ Z[β] with
/// `lo ≤ x ≤ hi` and `|Γ_j(x)| ≤ bounds[j−2]` for j = 2..d, up to a small
/// outward slack; callers re-check exactly where it matters.
pub fn enumerate_box(f: &PisotField, lo: f64, hi: f64, bounds: &[f64]) -> Vec<Vec<i64>> {
    let d = f.degree();
    assert_eq!(bounds.len(), d - 1);
    let slack = |b: f64| b * (1.0 + 1e-9) + 1e-9;
    let mut full = vec![lo.abs().max(hi.abs())];
    full.extend(bounds.iter().copied());
    let winv = f.winv();
    let kmax: Vec<i64> = (0..d)
        .map(|k| slack((0..d).map(|j| winv[k][j].norm() * full[j]).sum::<f64>()).floor() as i64)
        .collect();
    let beta = f.beta_f64();
    let conj: Vec<Complex64> = f.conjugates()[1..].iter().map(|b| b.mid).collect();
    let mut out = Vec::new();
    let mut q = vec![0i64; d];
    for (k, qk) in q.iter_mut().enumerate().skip(1) {
        *qk = -kmax[k];
    }
    loop {
        let rest: f64 = (1..d).map(|k| q[k] as f64 * beta.powi(k as i32)).sum();
        let tol = 1e-9 * (1.0 + rest.abs());
        let a = (lo - rest - tol).ceil() as i64;
        let b = (hi - rest + tol).floor() as i64;
        for q0 in a..=b {
            q[0] = q0;
            let ok = conj.iter().zip(bounds).all(|(z, &bd)| {
                let g: Complex64 = (0..d).rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * z + q[k] as f64);
                g.norm() <= slack(bd)
            });
            if ok {
                out.push(q.clone());
            }
        }
        // odometer over q_1..q_{d−1}
        let mut k = 1;
        loop {
            if k == d {
                return out;
            }
            if q[k] < kmax[k] {
                q[k] += 1;
                break;
            }
            q[k] = -kmax[k];
            k += 1;
        }
    }
}

pub fn box_points(f: &PisotField, lo: f64, hi: f64, bounds: &[f64]) -> Vec<QBeta> {
    enumerate_box(f, lo, hi, bounds).iter().map(|c| f.from_ints(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_box_matches_brute_force() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let got = enumerate_box(&f, -2.0, 3.0, &[1.5]);
        let b = f.beta_f64();
        let c = 1.0 - b;
        let mut want = Vec::new();
        for q1 in -20i64..=20 {
            for q0 in -20i64..=20 {
                let x = q0 as f64 + q1 as f64 * b;
                let y = q0 as f64 + q1 as f64 * c;
                if (-2.0..=3.0).contains(&x) && y.abs() <= 1.5 {
                    want.push(vec![q0, q1]);
                }
            }
        }
        let mut g = got.clone();
        g.sort();
        want.sort();
        assert_eq!(g, want);
    }
}

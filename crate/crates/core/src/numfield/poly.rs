//! Integer polynomial helpers: root isolation, factor search, exact evaluation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::CBall;

/// Coefficients of x^d − c_1 x^{d−1} − ⋯ − c_d, highest degree first (leading 1).
pub fn monic_from_recurrence(c: &[i64]) -> Vec<i64> {
    let mut p = Vec::with_capacity(c.len() + 1);
    p.push(1);
    p.extend(c.iter().map(|&x| -x));
    p
}

pub fn eval_c(p: &[i64], z: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a as f64)
}

fn deriv(p: &[i64]) -> Vec<i64> {
    let d = p.len() - 1;
    p[..d].iter().enumerate().map(|(i, &a)| a * (d - i) as i64).collect()
}

pub fn eval_ball(p: &[i64], z: &CBall) -> CBall {
    p.iter().fold(CBall::zero(), |acc, &a| acc.mul(z).add(&CBall::real(a as f64, 0.0)))
}

/// Sign-exact evaluation at a rational point.
pub fn eval_q(p: &[i64], x: &BigRational) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, &a| acc * x + BigRational::from_integer(BigInt::from(a)))
}

/// Simultaneous Aberth–Ehrlich iteration followed by Newton polishing.
pub fn approx_roots(p: &[i64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    let dp = deriv(p);
    let bound = 1.0 + p[1..].iter().map(|&a| (a as f64).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(bound * 0.7, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let pv = eval_c(p, z[i]);
            let dv = eval_c(&dp, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let step = eval_c(p, *zi) / eval_c(&dp, *zi);
            if step.is_finite() {
                *zi -= step;
            }
        }
    }
    z
}

/// Weierstrass inclusion disks; each returned disk holds exactly one root when
/// the disks are pairwise disjoint (checked by the caller).
pub fn certify_roots(p: &[i64], z: &[Complex64]) -> Vec<CBall> {
    let d = z.len();
    (0..d)
        .map(|i| {
            let zi = CBall::exact(z[i]);
            let num = eval_ball(p, &zi);
            let mut den = CBall::real(1.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    den = den.mul(&zi.sub(&CBall::exact(*zj)));
                }
            }
            let r = match den.inv() {
                Some(inv) => num.mul(&inv).abs_upper() * d as f64,
                None => f64::INFINITY,
            };
            CBall::new(z[i], r * (1.0 + 1e-12) + 1e-300)
        })
        .collect()
}

pub fn disjoint(balls: &[CBall]) -> bool {
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            if balls[i].overlaps(&balls[j]) {
                return false;
            }
        }
    }
    balls.iter().all(|b| b.rad.is_finite())
}

/// Exact polynomial division over Z; `None` if the remainder is nonzero.
pub fn div_exact(p: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let lead = g[0].clone();
    let mut r = p.to_vec();
    if g.len() > r.len() {
        return None;
    }
    let qlen = r.len() - g.len() + 1;
    let mut q = vec![BigInt::zero(); qlen];
    for i in 0..qlen {
        if !(&r[i] % &lead).is_zero() {
            return None;
        }
        let c = &r[i] / &lead;
        for (k, gk) in g.iter().enumerate() {
            r[i + k] -= &c * gk;
        }
        q[i] = c;
    }
    if r.iter().all(|x| x.is_zero()) {
        Some(q)
    } else {
        None
    }
}

/// Searches for a monic integer factor of degree 1..=d/2 among products of
/// approximate roots; every hit is confirmed by exact division.
pub fn has_integer_factor(p: &[i64], roots: &[Complex64]) -> bool {
    let d = roots.len();
    let pb: Vec<BigInt> = p.iter().map(|&a| BigInt::from(a)).collect();
    for k in 1..=d / 2 {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut g = vec![Complex64::new(1.0, 0.0)];
            for &i in &idx {
                let mut ng = vec![Complex64::new(0.0, 0.0); g.len() + 1];
                for (t, c) in g.iter().enumerate() {
                    ng[t] += c;
                    ng[t + 1] -= c * roots[i];
                }
                g = ng;
            }
            let near_int = g.iter().all(|c| c.im.abs() < 1e-6 && (c.re - c.re.round()).abs() < 1e-6);
            if near_int {
                let gi: Vec<BigInt> = g.iter().map(|c| BigInt::from(c.re.round() as i64)).collect();
                if div_exact(&pb, &gi).is_some() {
                    return true;
                }
            }
            if !next_combination(&mut idx, d) {
                break;
            }
        }
    }
    false
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for t in (0..k).rev() {
        if idx[t] < n - k + t {
            idx[t] += 1;
            for u in t + 1..k {
                idx[u] = idx[u - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Rational enclosure [lo, hi] of the unique root of `p` above `guess`,
/// assuming `p` is monic with a simple root there and no other root nearby.
pub fn isolate_real_root(p: &[i64], guess: f64) -> (BigRational, BigRational) {
    let mut w = 1e-12f64.max(guess.abs() * 1e-12);
    loop {
        let lo = BigRational::from_float(guess - w).expect("finite");
        let hi = BigRational::from_float(guess + w).expect("finite");
        let slo = eval_q(p, &lo);
        let shi = eval_q(p, &hi);
        if slo.is_negative() && shi.is_positive() {
            return refine_root(p, lo, hi, 120);
        }
        w *= 16.0;
    }
}

/// Bisects until the enclosure has width at most 2^-bits.
pub fn refine_root(p: &[i64], mut lo: BigRational, mut hi: BigRational, bits: u32) -> (BigRational, BigRational) {
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let s = eval_q(p, &mid);
        if s.is_zero() {
            return (mid.clone(), mid);
        }
        if s.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_roots_are_isolated() {
        let p = monic_from_recurrence(&[1, 1]);
        let z = approx_roots(&p);
        let balls = certify_roots(&p, &z);
        assert!(disjoint(&balls));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(balls.iter().any(|b| b.contains(Complex64::new(phi, 0.0))));
        assert!(balls.iter().any(|b| b.contains(Complex64::new(1.0 - phi, 0.0))));
    }

    #[test]
    fn factor_search_finds_reducible() {
        // x^3 - 2x^2 - x + 2 = (x-1)(x+1)(x-2)
        let p = monic_from_recurrence(&[2, 1, -2]);
        let z = approx_roots(&p);
        assert!(has_integer_factor(&p, &z));
        let q = monic_from_recurrence(&[1, 1, 1]);
        let zq = approx_roots(&q);
        assert!(!has_integer_factor(&q, &zq));
    }

    #[test]
    fn exact_division() {
        let p: Vec<BigInt> = [1, 0, -1].iter().map(|&a| BigInt::from(a)).collect();
        let g: Vec<BigInt> = [1, -1].iter().map(|&a| BigInt::from(a)).collect();
        let q = div_exact(&p, &g).unwrap();
        assert_eq!(q, vec![BigInt::from(1), BigInt::from(1)]);
    }
}

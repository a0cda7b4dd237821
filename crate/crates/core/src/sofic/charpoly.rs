//! Exact characteristic polynomials of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// det(xI − A), highest degree first, by Berkowitz's division-free algorithm.
pub fn berkowitz(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    // characteristic vector of the leading r×r block, highest first
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        // A_r = leading r×r block, R = row r (cols < r), S = col r (rows < r), a = m[r][r]
        let s: Vec<BigInt> = (0..r).map(|i| m[i][r].clone()).collect();
        let row: Vec<BigInt> = (0..r).map(|j| m[r][j].clone()).collect();
        // Toeplitz column: 1, −a, −R S, −R A S, −R A² S, …
        let mut t = vec![BigInt::one(), -m[r][r].clone()];
        let mut v = s.clone();
        for _ in 0..r {
            let rv: BigInt = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            t.push(-rv);
            v = (0..r).map(|i| (0..r).map(|j| &m[i][j] * &v[j]).sum()).collect();
        }
        // new c = T · c with T lower-triangular Toeplitz of size (r+2)×(r+1)
        let mut nc = vec![BigInt::zero(); r + 2];
        for (i, slot) in nc.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot += &t[i - j] * cj;
                }
            }
        }
        c = nc;
    }
    c
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &BASES {
        let mut x = powmod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// det(xI − A) mod p, highest first, via reduction to Hessenberg form.
fn charpoly_mod(a: &[Vec<i64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let red = |v: i64| v.rem_euclid(p as i64) as u64;
    let mut h: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&v| red(v)).collect()).collect();
    let sub = |x: u64, y: u64| if x >= y { x - y } else { x + p - y };
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let inv = powmod(h[j + 1][j], p - 2, p);
        for k in j + 2..n {
            if h[k][j] == 0 {
                continue;
            }
            let u = mulmod(h[k][j], inv, p);
            for c in 0..n {
                let t = mulmod(u, h[j + 1][c], p);
                h[k][c] = sub(h[k][c], t);
            }
            for row in h.iter_mut() {
                let t = mulmod(u, row[k], p);
                row[j + 1] = (row[j + 1] + t) % p;
            }
        }
    }
    // polys stored lowest first
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        // (x − h_mm) p_m
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = sub(next[k], mulmod(h[m][m], c, p));
        }
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = mulmod(prod, h[i + 1][i], p);
            let coef = mulmod(prod, h[i][m], p);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = sub(next[k], mulmod(coef, c, p));
            }
        }
        polys.push(next);
    }
    let mut out = polys.pop().unwrap();
    out.reverse();
    out
}

/// det(xI − A), highest degree first: Hessenberg reduction modulo word-size
/// primes and Chinese remaindering up to the bound (1 + r)^n on the
/// coefficients, r the largest absolute row sum.
pub fn charpoly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let r = a.iter().map(|row| row.iter().map(|v| v.unsigned_abs()).sum::<u64>()).max().unwrap_or(0);
    let bits = (n as f64) * ((1 + r) as f64).log2() + 2.0;
    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); n + 1];
    let mut p = (1u64 << 62) - 1;
    let mut have = 0.0;
    while have < bits {
        while !is_prime(p) {
            p -= 2;
        }
        let res = charpoly_mod(a, p);
        let pb = BigInt::from(p);
        // combine x ≡ acc (mod modulus), x ≡ res (mod p)
        let minv = BigInt::from(powmod((&modulus % &pb).try_into().unwrap(), p - 2, p));
        for (c, &rv) in acc.iter_mut().zip(&res) {
            let diff = (BigInt::from(rv) - &*c).mod_floor(&pb);
            let k = (diff * &minv).mod_floor(&pb);
            *c += k * &modulus;
        }
        modulus *= &pb;
        have += 61.9;
        p -= 2;
    }
    let half = &modulus >> 1;
    acc.into_iter().map(|c| if c > half { c - &modulus } else { c }).collect()
}

/// Whether the integer polynomial g (highest first) divides det(xI − A).
pub fn divides_charpoly(a: &[Vec<i64>], g: &[i64]) -> bool {
    let cp = charpoly(a);
    let g: Vec<BigInt> = g.iter().map(|&v| BigInt::from(v)).collect();
    crate::numfield::poly::div_exact(&cp, &g).is_some()
}

/// Largest coefficient size in bits, for reporting.
pub fn height_bits(p: &[BigInt]) -> u64 {
    p.iter().map(|c| c.abs().bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_of_golden() {
        let a = vec![vec![1, 1], vec![1, 0]];
        let want: Vec<BigInt> = [1, -1, -1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(berkowitz(&a), want);
        assert_eq!(charpoly(&a), want);
        assert!(divides_charpoly(&a, &[1, -1, -1]));
    }

    #[test]
    fn modular_agrees_with_berkowitz() {
        let a = vec![vec![0, 2, 1, 0], vec![1, 0, 0, 3], vec![0, 1, 1, 1], vec![5, 0, 0, 2]];
        assert_eq!(charpoly(&a), berkowitz(&a));
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(1u64 << 40));
    }
}

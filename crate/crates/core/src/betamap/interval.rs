use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::numfield::{PisotField, QBeta};

/// Which endpoint a half-open interval contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// [lo, hi)
    Right,
    /// (lo, hi]
    Left,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalQB {
    pub lo: QBeta,
    pub hi: QBeta,
}

impl IntervalQB {
    pub fn new(lo: QBeta, hi: QBeta) -> Self {
        IntervalQB { lo, hi }
    }

    pub fn contains(&self, f: &PisotField, x: &QBeta, side: Side) -> bool {
        match side {
            Side::Right => f.le(&self.lo, x) && f.lt(x, &self.hi),
            Side::Left => f.lt(&self.lo, x) && f.le(x, &self.hi),
        }
    }

    pub fn length(&self) -> QBeta {
        &self.hi - &self.lo
    }

    /// Image under x ↦ βx − a.
    pub fn affine(&self, f: &PisotField, a: &QBeta) -> IntervalQB {
        IntervalQB { lo: &f.mul_beta(&self.lo) - a, hi: &f.mul_beta(&self.hi) - a }
    }

    pub fn shift(&self, t: &QBeta) -> IntervalQB {
        IntervalQB { lo: &self.lo + t, hi: &self.hi + t }
    }
}

/// Sorted, merged union. Touching intervals are merged, empty ones dropped.
pub fn normalize(f: &PisotField, mut v: Vec<IntervalQB>) -> Vec<IntervalQB> {
    v.retain(|iv| f.lt(&iv.lo, &iv.hi));
    v.sort_by(|a, b| f.cmp(&a.lo, &b.lo));
    let mut out: Vec<IntervalQB> = Vec::with_capacity(v.len());
    for iv in v {
        if let Some(last) = out.last_mut() {
            if f.cmp(&iv.lo, &last.hi) != Ordering::Greater {
                if f.lt(&last.hi, &iv.hi) {
                    last.hi = iv.hi;
                }
                continue;
            }
        }
        out.push(iv);
    }
    out
}

/// Intersection of two normalized unions.
pub fn intersect(f: &PisotField, a: &[IntervalQB], b: &[IntervalQB]) -> Vec<IntervalQB> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = f.max(&a[i].lo, &b[j].lo).clone();
        let hi = f.min(&a[i].hi, &b[j].hi).clone();
        if f.lt(&lo, &hi) {
            out.push(IntervalQB { lo, hi });
        }
        if f.lt(&a[i].hi, &b[j].hi) {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

pub fn set_contains(f: &PisotField, s: &[IntervalQB], x: &QBeta, side: Side) -> bool {
    s.iter().any(|iv| iv.contains(f, x, side))
}

pub fn total_length(s: &[IntervalQB]) -> Option<QBeta> {
    let mut it = s.iter();
    let first = it.next()?.length();
    Some(it.fold(first, |acc, iv| &acc + &iv.length()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_merges_touching() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let iv = |a: i64, b: i64| IntervalQB::new(f.int(a), f.int(b));
        let n = normalize(&f, vec![iv(3, 4), iv(0, 1), iv(1, 2), iv(5, 5)]);
        assert_eq!(n, vec![iv(0, 2), iv(3, 4)]);
        let m = intersect(&f, &n, &[iv(1, 3)]);
        assert_eq!(m, vec![iv(1, 2)]);
    }

    #[test]
    fn half_open_membership() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let iv = IntervalQB::new(f.zero(), f.one());
        assert!(iv.contains(&f, &f.zero(), Side::Right));
        assert!(!iv.contains(&f, &f.one(), Side::Right));
        assert!(!iv.contains(&f, &f.zero(), Side::Left));
        assert!(iv.contains(&f, &f.one(), Side::Left));
    }
}

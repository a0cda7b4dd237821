use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{BetaTransform, IntervalQB, Side, TransformError};
use crate::numfield::{PisotField, QBeta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Greedy,
    Lazy,
    Pedicini,
    LinearMod1,
    MinimalWeight,
    Symmetric,
}

#[derive(Clone, Debug, Default)]
pub struct PresetParams {
    pub alpha: Option<QBeta>,
    pub digits: Option<Vec<QBeta>>,
}

fn to_i64(n: BigInt) -> Result<i64, TransformError> {
    n.to_i64().ok_or_else(|| TransformError::InvalidDigits("digit range too large".into()))
}

pub fn preset(f: &PisotField, kind: Preset, params: &PresetParams) -> Result<BetaTransform, TransformError> {
    let beta = f.beta();
    let ib = f.beta_pow(-1);
    let over_beta = |x: &QBeta| f.div_beta(x);
    let iv = |lo: QBeta, hi: QBeta| vec![IntervalQB::new(lo, hi)];
    match kind {
        Preset::Greedy => {
            let n = to_i64(f.ceil(&beta))?;
            let mut digits = Vec::new();
            let mut parts = Vec::new();
            for a in 0..n {
                let hi = if a == n - 1 { f.one() } else { over_beta(&f.int(a + 1)) };
                digits.push(f.int(a));
                parts.push(iv(over_beta(&f.int(a)), hi));
            }
            BetaTransform::new(f, digits, parts, Side::Right)
        }
        Preset::Lazy => {
            let m = to_i64(f.ceil(&beta))? - 1;
            let l = f.div(&f.int(m), &(&beta - &f.one()))?;
            let mut digits = Vec::new();
            let mut parts = Vec::new();
            let mut lo = f.zero();
            for a in 0..=m {
                let hi = if a == m { l.clone() } else { over_beta(&(&l + &f.int(a))) };
                digits.push(f.int(a));
                parts.push(iv(lo.clone(), hi.clone()));
                lo = hi;
            }
            BetaTransform::new(f, digits, parts, Side::Left)
        }
        Preset::Pedicini => {
            let ds = params.digits.clone().ok_or_else(|| TransformError::InvalidDigits("pedicini needs a digit list".into()))?;
            if ds.is_empty() || !ds[0].is_zero() {
                return Err(TransformError::InvalidDigits("digits must start with 0".into()));
            }
            if ds.windows(2).any(|w| !f.lt(&w[0], &w[1])) {
                return Err(TransformError::InvalidDigits("digits must be strictly increasing".into()));
            }
            let m = ds.len() - 1;
            if m == 0 {
                return Err(TransformError::InvalidDigits("need at least two digits".into()));
            }
            let am = &ds[m];
            let bound = f.div(am, &(&beta - &f.one()))?;
            if ds.windows(2).any(|w| f.lt(&bound, &(&w[1] - &w[0]))) {
                return Err(TransformError::PediciniGapViolated);
            }
            let mut parts = Vec::new();
            for i in 0..m {
                parts.push(iv(over_beta(&ds[i]), over_beta(&ds[i + 1])));
            }
            parts.push(iv(over_beta(am), bound));
            BetaTransform::new(f, ds, parts, Side::Right)
        }
        Preset::LinearMod1 => {
            let alpha = params.alpha.clone().ok_or_else(|| TransformError::BadAlpha("alpha required".into()))?;
            if f.lt(&alpha, &f.zero()) || !f.lt(&alpha, &f.one()) {
                return Err(TransformError::BadAlpha("need 0 <= alpha < 1".into()));
            }
            let n = to_i64(f.ceil(&(&beta + &alpha)))?;
            let mut digits = Vec::new();
            let mut parts = Vec::new();
            for i in 0..n {
                let d = &f.int(i) - &alpha;
                let lo = if i == 0 { f.zero() } else { over_beta(&d) };
                let hi = if i == n - 1 { f.one() } else { over_beta(&(&f.int(i + 1) - &alpha)) };
                digits.push(d);
                parts.push(iv(lo, hi));
            }
            BetaTransform::new(f, digits, parts, Side::Right)
        }
        Preset::MinimalWeight => {
            let alpha = params.alpha.clone().ok_or_else(|| TransformError::BadAlpha("alpha required".into()))?;
            let lo = over_beta(&f.ratio(1, 2));
            let hi = f.inv(&(&f.mul(&beta, &beta) - &beta))?;
            if f.lt(&alpha, &lo) || f.lt(&hi, &alpha) {
                return Err(TransformError::BadAlpha("need 1/(2β) <= alpha <= 1/(β²−β)".into()));
            }
            let ba = f.mul(&beta, &alpha);
            BetaTransform::new(
                f,
                vec![f.int(-1), f.zero(), f.one()],
                vec![iv(-&ba, -&alpha), iv(-&alpha, alpha.clone()), iv(alpha, ba)],
                Side::Right,
            )
        }
        Preset::Symmetric => {
            let half = f.ratio(1, 2);
            let r2 = BigRational::new(1.into(), 2.into());
            let lo_d = to_i64(f.floor(&(&f.one() - &beta).scale(&r2)))?;
            let hi_d = to_i64(f.ceil(&(&beta - &f.one()).scale(&r2)))?;
            let h2b = f.mul(&half, &ib);
            let mut digits = Vec::new();
            let mut parts = Vec::new();
            for i in lo_d..=hi_d {
                let c = over_beta(&f.int(i));
                let lo = if i == lo_d { -&half } else { &c - &h2b };
                let hi = if i == hi_d { half.clone() } else { &c + &h2b };
                digits.push(f.int(i));
                parts.push(iv(lo, hi));
            }
            BetaTransform::new(f, digits, parts, Side::Right)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_symmetric_parts() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::Symmetric, &PresetParams::default()).unwrap();
        assert_eq!(t.digits(), &[f.int(-1), f.zero(), f.one()]);
        let h = f.mul(&f.ratio(1, 2), &f.beta_pow(-1));
        assert_eq!(t.parts()[1], vec![IntervalQB::new(-&h, h)]);
    }

    #[test]
    fn greedy_digits_follow_ceiling() {
        let f = PisotField::new(&[2, 1]).unwrap();
        let t = preset(&f, Preset::Greedy, &PresetParams::default()).unwrap();
        assert_eq!(t.digits().len(), 3);
    }

    #[test]
    fn lazy_is_left_continuous() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let t = preset(&f, Preset::Lazy, &PresetParams::default()).unwrap();
        assert_eq!(t.side(), Side::Left);
        // X = (0, 1/(β−1)] = (0, β]
        assert_eq!(t.x_max(), &f.beta());
    }

    #[test]
    fn pedicini_example_and_gap() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let ds = vec![f.zero(), f.from_ints(&[0, 2]), f.int(5)];
        assert!(preset(&f, Preset::Pedicini, &PresetParams { alpha: None, digits: Some(ds) }).is_ok());
        let g = PisotField::new(&[2, 1]).unwrap();
        let bad = vec![g.zero(), g.int(10), g.int(11)];
        assert_eq!(
            preset(&g, Preset::Pedicini, &PresetParams { alpha: None, digits: Some(bad) }).unwrap_err(),
            TransformError::PediciniGapViolated
        );
    }

    #[test]
    fn minimal_weight_alpha_range() {
        let f = PisotField::new(&[1, 1, 1]).unwrap();
        let alpha = f.inv(&(&f.beta() + &f.one())).unwrap();
        assert!(preset(&f, Preset::MinimalWeight, &PresetParams { alpha: Some(alpha), digits: None }).is_ok());
        let bad = f.ratio(1, 10);
        assert!(matches!(
            preset(&f, Preset::MinimalWeight, &PresetParams { alpha: Some(bad), digits: None }),
            Err(TransformError::BadAlpha(_))
        ));
    }

    #[test]
    fn linear_mod1_reduces_to_greedy() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let a = preset(&f, Preset::LinearMod1, &PresetParams { alpha: Some(f.zero()), digits: None }).unwrap();
        let g = preset(&f, Preset::Greedy, &PresetParams::default()).unwrap();
        assert_eq!(a.parts(), g.parts());
        let b = preset(&f, Preset::LinearMod1, &PresetParams { alpha: Some(f.ratio(1, 3)), digits: None }).unwrap();
        assert_eq!(b.digits().len(), 2);
    }
}

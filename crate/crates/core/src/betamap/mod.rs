//! Piecewise-affine maps T x = βx − a on finite unions of half-open intervals.

pub mod config;
pub mod interval;
mod presets;
mod vset;

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::numfield::{FieldError, PisotField, QBeta};
pub use interval::{IntervalQB, Side};
pub use presets::{preset, Preset, PresetParams};
pub use vset::{compute_v, edge_matrix, gifs_edges, invariant_density, restrict_to_support, Density, VData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("digit set is empty")]
    NoDigits,
    #[error("digit {0} has no interval")]
    EmptyPart(usize),
    #[error("interval with lo >= hi")]
    EmptyInterval,
    #[error("duplicate digit {0}")]
    DuplicateDigit(String),
    #[error("intervals of the domain overlap")]
    Overlap,
    #[error("the images of the branches do not cover the domain exactly")]
    NotSurjective,
    #[error("bad parameter: {0}")]
    BadAlpha(String),
    #[error("digit gaps exceed a_m/(β−1)")]
    PediciniGapViolated,
    #[error("invalid digit list: {0}")]
    InvalidDigits(String),
    #[error("point {0} is outside the domain")]
    OutOfDomain(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unknown digit {0}")]
    UnknownDigit(String),
    #[error("no invariant density found")]
    NoFixedPoint,
    #[error("config: {0}")]
    Config(String),
}

/// Validated transformation T on X = ∪ X_a.
#[derive(Clone, Debug)]
pub struct BetaTransform {
    field: PisotField,
    digits: Vec<QBeta>,
    parts: Vec<Vec<IntervalQB>>,
    side: Side,
    /// all intervals sorted by position, with their digit index
    pieces: Vec<(IntervalQB, usize)>,
    /// connected components of X
    components: Vec<IntervalQB>,
    /// rank of each digit by real value
    value_rank: Vec<usize>,
}

/// An eventually periodic digit-index word `preperiod (period)^ω`; with an
/// empty period it stands for a truncated prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expansion {
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
    pub exact: bool,
}

impl Expansion {
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Self {
        let exact = !period.is_empty();
        Expansion { preperiod, period, exact }
    }

    pub fn at(&self, k: usize) -> usize {
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    /// σ^k of the word.
    pub fn shift(&self, k: usize) -> Expansion {
        if k <= self.preperiod.len() {
            return Expansion { preperiod: self.preperiod[k..].to_vec(), period: self.period.clone(), exact: self.exact };
        }
        let r = (k - self.preperiod.len()) % self.period.len();
        let mut per = self.period[r..].to_vec();
        per.extend_from_slice(&self.period[..r]);
        Expansion { preperiod: vec![], period: per, exact: self.exact }
    }

    /// Shortest equivalent presentation (minimal period, then minimal preperiod).
    pub fn canonical(&self) -> Expansion {
        let mut per = self.period.clone();
        let n = per.len();
        for p in 1..=n {
            if n.is_multiple_of(p) && (0..n).all(|i| per[i] == per[i % p]) {
                per.truncate(p);
                break;
            }
        }
        let mut pre = self.preperiod.clone();
        while let Some(&last) = pre.last() {
            if per.is_empty() || last != *per.last().unwrap() {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Expansion { preperiod: pre, period: per, exact: self.exact }
    }
}

impl BetaTransform {
    /// Validates disjointness and the exact covering identity ∪(βX_a − a) = X.
    pub fn new(field: &PisotField, digits: Vec<QBeta>, parts: Vec<Vec<IntervalQB>>, side: Side) -> Result<Self, TransformError> {
        if digits.is_empty() {
            return Err(TransformError::NoDigits);
        }
        if parts.len() != digits.len() {
            return Err(TransformError::EmptyPart(parts.len().min(digits.len())));
        }
        for d in &digits {
            field.check(d)?;
        }
        for i in 0..digits.len() {
            for j in i + 1..digits.len() {
                if digits[i] == digits[j] {
                    return Err(TransformError::DuplicateDigit(digits[i].to_string()));
                }
            }
        }
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(TransformError::EmptyPart(i));
            }
            for iv in p {
                field.check(&iv.lo)?;
                field.check(&iv.hi)?;
                if !field.lt(&iv.lo, &iv.hi) {
                    return Err(TransformError::EmptyInterval);
                }
            }
        }
        // order digits by the position of their lowest interval
        let mut order: Vec<usize> = (0..digits.len()).collect();
        let lowest = |i: usize| parts[i].iter().fold(&parts[i][0].lo, |m, iv| field.min(m, &iv.lo)).clone();
        let lows: Vec<QBeta> = (0..digits.len()).map(lowest).collect();
        order.sort_by(|&a, &b| field.cmp(&lows[a], &lows[b]));
        let digits: Vec<QBeta> = order.iter().map(|&i| digits[i].clone()).collect();
        let parts: Vec<Vec<IntervalQB>> = order
            .iter()
            .map(|&i| {
                let mut p = parts[i].clone();
                p.sort_by(|a, b| field.cmp(&a.lo, &b.lo));
                p
            })
            .collect();

        let mut pieces: Vec<(IntervalQB, usize)> =
            parts.iter().enumerate().flat_map(|(a, p)| p.iter().map(move |iv| (iv.clone(), a))).collect();
        pieces.sort_by(|x, y| field.cmp(&x.0.lo, &y.0.lo));
        for w in pieces.windows(2) {
            if field.lt(&w[1].0.lo, &w[0].0.hi) {
                return Err(TransformError::Overlap);
            }
        }
        let components = interval::normalize(field, pieces.iter().map(|p| p.0.clone()).collect());
        let images: Vec<IntervalQB> = pieces.iter().map(|(iv, a)| iv.affine(field, &digits[*a])).collect();
        if interval::normalize(field, images) != components {
            return Err(TransformError::NotSurjective);
        }
        let mut by_value: Vec<usize> = (0..digits.len()).collect();
        by_value.sort_by(|&a, &b| field.cmp(&digits[a], &digits[b]));
        let mut value_rank = vec![0; digits.len()];
        for (r, &i) in by_value.iter().enumerate() {
            value_rank[i] = r;
        }
        Ok(BetaTransform { field: field.clone(), digits, parts, side, pieces, components, value_rank })
    }

    pub fn field(&self) -> &PisotField {
        &self.field
    }

    pub fn digits(&self) -> &[QBeta] {
        &self.digits
    }

    pub fn parts(&self) -> &[Vec<IntervalQB>] {
        &self.parts
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn pieces(&self) -> &[(IntervalQB, usize)] {
        &self.pieces
    }

    /// Connected components of X, sorted.
    pub fn components(&self) -> &[IntervalQB] {
        &self.components
    }

    pub fn x_min(&self) -> &QBeta {
        &self.components[0].lo
    }

    pub fn x_max(&self) -> &QBeta {
        &self.components[self.components.len() - 1].hi
    }

    pub fn digit_index(&self, a: &QBeta) -> Result<usize, TransformError> {
        self.digits.iter().position(|d| d == a).ok_or_else(|| TransformError::UnknownDigit(a.to_string()))
    }

    pub fn digits_integral(&self) -> bool {
        self.digits.iter().all(|a| a.is_integral())
    }

    /// Index into `pieces` of the interval containing x.
    pub fn piece_of(&self, x: &QBeta) -> Option<usize> {
        let f = &self.field;
        match self.side {
            Side::Right => {
                let i = self.pieces.partition_point(|p| f.le(&p.0.lo, x));
                if i == 0 {
                    return None;
                }
                f.lt(x, &self.pieces[i - 1].0.hi).then_some(i - 1)
            }
            Side::Left => {
                let i = self.pieces.partition_point(|p| f.lt(&p.0.hi, x));
                if i == self.pieces.len() {
                    return None;
                }
                f.lt(&self.pieces[i].0.lo, x).then_some(i)
            }
        }
    }

    pub fn contains(&self, x: &QBeta) -> bool {
        self.piece_of(x).is_some()
    }

    pub fn digit_of(&self, x: &QBeta) -> Option<usize> {
        self.piece_of(x).map(|i| self.pieces[i].1)
    }

    /// x ∈ X_a for digit index a.
    pub fn in_part(&self, a: usize, x: &QBeta) -> bool {
        self.parts[a].iter().any(|iv| iv.contains(&self.field, x, self.side))
    }

    /// (digit index, βx − a).
    pub fn step(&self, x: &QBeta) -> Result<(usize, QBeta), TransformError> {
        self.field.check(x)?;
        let a = self.digit_of(x).ok_or_else(|| TransformError::OutOfDomain(x.to_string()))?;
        Ok((a, &self.field.mul_beta(x) - &self.digits[a]))
    }

    /// Orbit x, Tx, T²x, … until the first repeat. Returns the visited points,
    /// the digits read, and the index where the cycle starts.
    pub fn orbit(&self, x: &QBeta, max_steps: usize) -> Result<(Vec<QBeta>, Vec<usize>, usize), TransformError> {
        let mut seen: HashMap<QBeta, usize> = HashMap::new();
        let mut pts = Vec::new();
        let mut digs = Vec::new();
        let mut cur = x.clone();
        loop {
            if let Some(&i) = seen.get(&cur) {
                return Ok((pts, digs, i));
            }
            if pts.len() >= max_steps {
                return Err(TransformError::BudgetExceeded(format!(
                    "orbit of {} not closed after {} steps",
                    x, max_steps
                )));
            }
            let (a, next) = self.step(&cur)?;
            seen.insert(cur.clone(), pts.len());
            pts.push(cur);
            digs.push(a);
            cur = next;
        }
    }

    /// T-expansion, exact for x ∈ Q(β) ∩ X.
    pub fn expand(&self, x: &QBeta, max_steps: usize) -> Result<Expansion, TransformError> {
        let (_, digs, cs) = self.orbit(x, max_steps)?;
        Ok(Expansion { preperiod: digs[..cs].to_vec(), period: digs[cs..].to_vec(), exact: true })
    }

    /// First n digits without cycle detection.
    pub fn prefix(&self, x: &QBeta, n: usize) -> Result<Vec<usize>, TransformError> {
        let mut cur = x.clone();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let (a, next) = self.step(&cur)?;
            out.push(a);
            cur = next;
        }
        Ok(out)
    }

    /// T^n x.
    pub fn iterate(&self, x: &QBeta, n: usize) -> Result<QBeta, TransformError> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.step(&cur)?.1;
        }
        Ok(cur)
    }

    pub fn twin(&self) -> BetaTransform {
        let mut t = self.clone();
        t.side = self.side.flip();
        t
    }

    /// The right-continuous member of the pair {T, T̃}.
    pub fn right(&self) -> BetaTransform {
        match self.side {
            Side::Right => self.clone(),
            Side::Left => self.twin(),
        }
    }

    /// Σ a_k β^{−k} for a finite digit-index word.
    pub fn finite_value(&self, w: &[usize]) -> QBeta {
        let f = &self.field;
        let mut acc = f.zero();
        for &a in w.iter().rev() {
            acc = f.div_beta(&(&acc + &self.digits[a]));
        }
        acc
    }

    /// Exact value .u_1 u_2 ⋯ of an eventually periodic word.
    pub fn value(&self, w: &Expansion) -> QBeta {
        let f = &self.field;
        let pre = self.finite_value(&w.preperiod);
        if w.period.is_empty() {
            return pre;
        }
        let p = w.period.len() as i64;
        let per = self.finite_value(&w.period);
        // per / (1 − β^{−p}) shifted by β^{−|pre|}
        let denom = &f.one() - &f.beta_pow(-p);
        let cyc = f.div(&per, &denom).expect("1 − β^-p is nonzero");
        &pre + &f.mul(&cyc, &f.beta_pow(-(w.preperiod.len() as i64)))
    }

    /// Lexicographic comparison of eventually periodic words by digit value.
    pub fn lex_cmp(&self, a: &Expansion, b: &Expansion) -> Ordering {
        let pa = a.period.len().max(1);
        let pb = b.period.len().max(1);
        let n = a.preperiod.len().max(b.preperiod.len()) + pa * pb;
        for k in 0..n {
            let x = if k < a.preperiod.len() || !a.period.is_empty() { Some(a.at(k)) } else { None };
            let y = if k < b.preperiod.len() || !b.period.is_empty() { Some(b.at(k)) } else { None };
            match (x, y) {
                (Some(x), Some(y)) => match self.value_rank[x].cmp(&self.value_rank[y]) {
                    Ordering::Equal => continue,
                    o => return o,
                },
                (None, None) => return Ordering::Equal,
                (None, _) => return Ordering::Less,
                (_, None) => return Ordering::Greater,
            }
        }
        Ordering::Equal
    }

    /// Each X_a a single interval and interval order agreeing with digit order.
    pub fn is_ordered_single(&self) -> bool {
        self.parts.iter().all(|p| p.len() == 1)
            && self.pieces.windows(2).all(|w| self.value_rank[w[0].1] < self.value_rank[w[1].1])
    }

    /// Whether `w` is the T-expansion of its value.
    pub fn is_admissible(&self, w: &Expansion) -> Result<bool, TransformError> {
        for &a in w.preperiod.iter().chain(&w.period) {
            if a >= self.digits.len() {
                return Err(TransformError::UnknownDigit(format!("index {}", a)));
            }
        }
        if w.period.is_empty() {
            return Err(TransformError::InvalidDigits("word must be eventually periodic".into()));
        }
        if self.is_ordered_single() {
            self.admissible_lex(w)
        } else {
            Ok(self.admissible_by_value(w))
        }
    }

    /// Value route: every tail value lies in the part of its first digit.
    pub fn admissible_by_value(&self, w: &Expansion) -> bool {
        let n = w.preperiod.len() + w.period.len();
        (0..n).all(|k| {
            let tail = w.shift(k);
            let v = self.value(&tail);
            self.in_part(tail.at(0), &v)
        })
    }

    /// Lexicographic route, valid for ordered single-interval transforms.
    pub fn admissible_lex(&self, w: &Expansion) -> Result<bool, TransformError> {
        let right = self.right();
        let left = right.twin();
        let budget = 100_000;
        let mut lower = Vec::with_capacity(self.digits.len());
        let mut upper = Vec::with_capacity(self.digits.len());
        for p in &self.parts {
            lower.push(right.expand(&p[0].lo, budget)?);
            upper.push(left.expand(&p[0].hi, budget)?);
        }
        let n = w.preperiod.len() + w.period.len();
        for k in 0..n {
            let tail = w.shift(k);
            let a = tail.at(0);
            let lo = self.lex_cmp(&lower[a], &tail);
            let hi = self.lex_cmp(&tail, &upper[a]);
            let ok = match self.side {
                Side::Right => lo != Ordering::Greater && hi == Ordering::Less,
                Side::Left => lo == Ordering::Less && hi != Ordering::Greater,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction of every X_a to the given union of intervals; digits whose
    /// part becomes empty are dropped.
    pub fn restrict(&self, support: &[IntervalQB]) -> Result<BetaTransform, TransformError> {
        let f = &self.field;
        let support = interval::normalize(f, support.to_vec());
        let mut digits = Vec::new();
        let mut parts = Vec::new();
        for (a, p) in self.parts.iter().enumerate() {
            let np = interval::intersect(f, &interval::normalize(f, p.clone()), &support);
            if !np.is_empty() {
                digits.push(self.digits[a].clone());
                parts.push(np);
            }
        }
        BetaTransform::new(f, digits, parts, self.side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_greedy() -> BetaTransform {
        let f = PisotField::new(&[1, 1]).unwrap();
        preset(&f, Preset::Greedy, &PresetParams::default()).unwrap()
    }

    #[test]
    fn greedy_steps() {
        let t = golden_greedy();
        let f = t.field().clone();
        let ib = f.beta_pow(-1);
        let (a, nx) = t.step(&ib).unwrap();
        assert_eq!(t.digits()[a], f.one());
        assert!(nx.is_zero());
        assert_eq!(t.step(&f.zero()).unwrap(), (0, f.zero()));
        assert!(matches!(t.step(&f.one()), Err(TransformError::OutOfDomain(_))));
    }

    #[test]
    fn twin_of_greedy() {
        let t = golden_greedy();
        let f = t.field().clone();
        let tt = t.twin();
        assert_eq!(tt.step(&f.one()).unwrap().1, f.beta_pow(-1));
        assert_eq!(tt.twin().side(), t.side());
        assert!(tt.step(&f.zero()).is_err());
    }

    #[test]
    fn expansion_of_inverse_beta() {
        let t = golden_greedy();
        let f = t.field().clone();
        let e = t.expand(&f.beta_pow(-1), 100).unwrap();
        assert_eq!(e.preperiod, vec![1]);
        assert_eq!(e.period, vec![0]);
        assert_eq!(t.value(&e), f.beta_pow(-1));
    }

    #[test]
    fn not_surjective_detected() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let ib = f.beta_pow(-1);
        let r = BetaTransform::new(
            &f,
            vec![f.zero(), f.one()],
            vec![vec![IntervalQB::new(f.zero(), ib.clone())], vec![IntervalQB::new(ib, f.int(2))]],
            Side::Right,
        );
        assert_eq!(r.unwrap_err(), TransformError::NotSurjective);
    }

    #[test]
    fn overlap_detected() {
        let f = PisotField::new(&[1, 1]).unwrap();
        let r = BetaTransform::new(
            &f,
            vec![f.zero(), f.one()],
            vec![vec![IntervalQB::new(f.zero(), f.one())], vec![IntervalQB::new(f.ratio(1, 2), f.one())]],
            Side::Right,
        );
        assert_eq!(r.unwrap_err(), TransformError::Overlap);
    }

    #[test]
    fn greedy_forbids_11() {
        let t = golden_greedy();
        let w = Expansion::new(vec![1, 1], vec![0]);
        assert!(!t.is_admissible(&w).unwrap());
        assert!(!t.admissible_by_value(&w));
        let ok = Expansion::new(vec![1, 0, 1], vec![0]);
        assert!(t.is_admissible(&ok).unwrap());
        assert!(matches!(t.is_admissible(&Expansion::new(vec![7], vec![0])), Err(TransformError::UnknownDigit(_))));
    }

    #[test]
    fn canonical_form() {
        let e = Expansion::new(vec![1, 0, 1, 0], vec![1, 0, 1, 0]);
        let c = e.canonical();
        assert!(c.preperiod.is_empty());
        assert_eq!(c.period, vec![1, 0]);
    }
}

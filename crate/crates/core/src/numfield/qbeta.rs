use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Element Σ q_k β^k of Q(β), k = 0..d-1, tagged with its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QBeta {
    pub(crate) tag: u64,
    pub(crate) c: Vec<BigRational>,
}

impl QBeta {
    pub fn coords(&self) -> &[BigRational] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len()
    }

    pub fn tag(&self) -> u64 {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|q| q.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|q| q.is_integer())
    }

    /// Largest absolute numerator/denominator, used to order lattice searches.
    pub fn height(&self) -> BigInt {
        self.c
            .iter()
            .flat_map(|q| [q.numer().abs(), q.denom().clone()])
            .max()
            .unwrap_or_else(BigInt::one)
    }

    pub fn same_field(&self, o: &QBeta) -> bool {
        self.tag == o.tag && self.c.len() == o.c.len()
    }

    pub fn scale(&self, s: &BigRational) -> QBeta {
        QBeta { tag: self.tag, c: self.c.iter().map(|q| q * s).collect() }
    }

    /// Coordinates as "p/q" strings (integers without denominator).
    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(|q| q.to_string()).collect()
    }

    fn zip(&self, o: &QBeta, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> QBeta {
        assert!(self.same_field(o), "QBeta values from different fields");
        QBeta { tag: self.tag, c: self.c.iter().zip(&o.c).map(|(a, b)| f(a, b)).collect() }
    }
}

impl<'a> Add<&'a QBeta> for &'a QBeta {
    type Output = QBeta;
    fn add(self, o: &QBeta) -> QBeta {
        self.zip(o, |a, b| a + b)
    }
}

impl<'a> Sub<&'a QBeta> for &'a QBeta {
    type Output = QBeta;
    fn sub(self, o: &QBeta) -> QBeta {
        self.zip(o, |a, b| a - b)
    }
}

impl Add for QBeta {
    type Output = QBeta;
    fn add(self, o: QBeta) -> QBeta {
        &self + &o
    }
}

impl Sub for QBeta {
    type Output = QBeta;
    fn sub(self, o: QBeta) -> QBeta {
        &self - &o
    }
}

impl Neg for &QBeta {
    type Output = QBeta;
    fn neg(self) -> QBeta {
        QBeta { tag: self.tag, c: self.c.iter().map(|q| -q).collect() }
    }
}

impl Neg for QBeta {
    type Output = QBeta;
    fn neg(self) -> QBeta {
        -&self
    }
}

impl fmt::Debug for QBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coef = k == 0 || !a.is_one();
            if show_coef {
                if a.is_integer() {
                    write!(f, "{}", a)?;
                } else {
                    write!(f, "({})", a)?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "{}b", if show_coef { "*" } else { "" })?,
                _ => write!(f, "{}b^{}", if show_coef { "*" } else { "" }, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

//! Exact arithmetic in Q(β) for a Pisot unit β, with certified conjugate data.

mod ball;
pub mod lattice;
pub mod poly;
mod qbeta;

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use ball::CBall;
pub use qbeta::QBeta;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("polynomial degree must be at least 2")]
    DegreeTooSmall,
    #[error("constant coefficient {0} is not a unit")]
    NotUnit(i64),
    #[error("minimal polynomial is reducible over Z")]
    NotIrreducible,
    #[error("not a Pisot number: {0}")]
    NotPisot(String),
    #[error("value belongs to a different field")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("could not isolate the conjugates")]
    RootIsolation,
}

/// One coordinate block of the contracting hyperplane H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// real conjugate β_j, one coordinate Γ_j
    Real(usize),
    /// complex pair (β_j, conj β_j) with Im β_j > 0, coordinates (2 Re Γ_j, −2 Im Γ_j)
    Complex(usize),
}

/// A point of H in `hbasis` coordinates with a radius bounding the error in
/// the conjugate max-norm max_j |Γ_j|.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoint {
    pub coords: Vec<f64>,
    pub rad: f64,
}

impl HPoint {
    pub fn origin(n: usize) -> Self {
        HPoint { coords: vec![0.0; n], rad: 0.0 }
    }
}

#[derive(Debug)]
struct Inner {
    coeffs: Vec<i64>,
    poly: Vec<i64>,
    tag: u64,
    beta_lo: BigRational,
    beta_hi: BigRational,
    beta_f: f64,
    conj: Vec<CBall>,
    slots: Vec<Slot>,
    eig: Vec<Vec<CBall>>,
    hbasis: Vec<Vec<f64>>,
    v1: Vec<f64>,
    rho: f64,
    vol_factor: f64,
    companion: Vec<Vec<i64>>,
    psi_cols: Vec<Vec<BigInt>>,
    winv: Vec<Vec<Complex64>>,
    frame_inv: Vec<Vec<f64>>,
}

/// Q(β) for a Pisot unit β with minimal polynomial x^d − c_1 x^{d−1} − ⋯ − c_d.
/// Cheap to clone; immutable.
#[derive(Clone, Debug)]
pub struct PisotField(Arc<Inner>);

fn fnv(coeffs: &[i64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for c in coeffs {
        for b in c.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Gauss–Jordan inverse of a small complex matrix.
fn cinv(m: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())).unwrap();
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Complex64::new(0.0, 0.0) {
                    for k in 0..2 * n {
                        let t = a[col][k];
                        a[r][k] -= f * t;
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
        }
    }
    det
}

impl PisotField {
    /// Validates (degree, unit, irreducible, Pisot) and precomputes the conjugate data.
    pub fn new(coeffs: &[i64]) -> Result<Self, FieldError> {
        let d = coeffs.len();
        if d < 2 {
            return Err(FieldError::DegreeTooSmall);
        }
        if coeffs[d - 1].abs() != 1 {
            return Err(FieldError::NotUnit(coeffs[d - 1]));
        }
        let p = poly::monic_from_recurrence(coeffs);
        let approx = poly::approx_roots(&p);
        if poly::has_integer_factor(&p, &approx) {
            return Err(FieldError::NotIrreducible);
        }
        let balls = poly::certify_roots(&p, &approx);
        if !poly::disjoint(&balls) {
            return Err(FieldError::RootIsolation);
        }
        // snap disks straddling the real axis onto it: a lone root in a
        // conjugation-symmetric disk is real
        let balls: Vec<CBall> = balls
            .into_iter()
            .map(|b| if b.mid.im.abs() <= b.rad { CBall::new(Complex64::new(b.mid.re, 0.0), b.rad + b.mid.im.abs()) } else { b })
            .collect();
        let (bi, bball) = balls
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.mid.re.total_cmp(&b.1.mid.re))
            .map(|(i, b)| (i, *b))
            .unwrap();
        if bball.mid.im != 0.0 || bball.mid.re - bball.rad <= 1.0 {
            return Err(FieldError::NotPisot("no real root above 1".into()));
        }
        let mut others: Vec<CBall> = balls.iter().enumerate().filter(|(i, _)| *i != bi).map(|(_, b)| *b).collect();
        for b in &others {
            if b.abs_upper() >= 1.0 {
                return Err(FieldError::NotPisot(format!("conjugate {} has modulus >= 1", b.mid)));
            }
        }
        let (beta_lo, beta_hi) = poly::isolate_real_root(&p, bball.mid.re);
        let beta_f = to_f64(&((&beta_lo + &beta_hi) / q(2)));
        let beta_ball = CBall::real(beta_f, 2.0 * f64::EPSILON * beta_f);

        // order: β, real conjugates ascending, then complex pairs (Im > 0 first)
        others.sort_by(|a, b| {
            let ka = (a.mid.im != 0.0, a.mid.re, -a.mid.im.abs(), a.mid.im < 0.0);
            let kb = (b.mid.im != 0.0, b.mid.re, -b.mid.im.abs(), b.mid.im < 0.0);
            ka.partial_cmp(&kb).unwrap_or(Ordering::Equal)
        });
        let mut conj = vec![beta_ball];
        let mut slots = Vec::new();
        let mut rest = others;
        let reals: Vec<CBall> = rest.iter().filter(|b| b.mid.im == 0.0).copied().collect();
        rest.retain(|b| b.mid.im != 0.0);
        for r in reals {
            slots.push(Slot::Real(conj.len()));
            conj.push(r);
        }
        let mut upper: Vec<CBall> = rest.iter().filter(|b| b.mid.im > 0.0).copied().collect();
        upper.sort_by(|a, b| a.mid.re.total_cmp(&b.mid.re));
        for u in upper {
            slots.push(Slot::Complex(conj.len()));
            conj.push(u);
            conj.push(u.conj());
        }
        if conj.len() != d {
            return Err(FieldError::RootIsolation);
        }

        // v_j = (β_j^{d-1}, …, 1) / p'(β_j), which sums to e_1
        let dp: Vec<i64> = p[..d].iter().enumerate().map(|(i, &a)| a * (d - i) as i64).collect();
        let mut eig = Vec::with_capacity(d);
        for z in &conj {
            let nu = poly::eval_ball(&dp, z).inv().ok_or(FieldError::RootIsolation)?;
            let mut v = vec![CBall::zero(); d];
            let mut pw = nu;
            for k in (0..d).rev() {
                v[k] = pw;
                pw = pw.mul(z);
            }
            eig.push(v);
        }

        let mut hbasis: Vec<Vec<f64>> = Vec::new();
        for s in &slots {
            match *s {
                Slot::Real(j) => hbasis.push(eig[j].iter().map(|c| c.mid.re).collect()),
                Slot::Complex(j) => {
                    hbasis.push(eig[j].iter().map(|c| c.mid.re).collect());
                    hbasis.push(eig[j].iter().map(|c| c.mid.im).collect());
                }
            }
        }
        let v1: Vec<f64> = eig[0].iter().map(|c| c.mid.re).collect();
        let mut frame: Vec<Vec<f64>> = vec![vec![0.0; d]; d];
        for i in 0..d {
            frame[i][0] = v1[i];
            for (k, h) in hbasis.iter().enumerate() {
                frame[i][k + 1] = h[i];
            }
        }
        let vol_factor = det_f64(&frame).abs();
        let frame_c: Vec<Vec<Complex64>> = frame.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        let frame_inv: Vec<Vec<f64>> = cinv(&frame_c).into_iter().map(|r| r.into_iter().map(|z| z.re).collect()).collect();
        let rho = conj[1..].iter().map(|b| b.abs_upper()).fold(0.0, f64::max);

        let mut companion = vec![vec![0i64; d]; d];
        companion[0].copy_from_slice(coeffs);
        for i in 1..d {
            companion[i][i - 1] = 1;
        }
        // Ψ(β^k) = M^k e_1
        let mut psi_cols = Vec::with_capacity(d);
        let mut col: Vec<BigInt> = (0..d).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect();
        for _ in 0..d {
            psi_cols.push(col.clone());
            col = (0..d).map(|i| (0..d).map(|k| BigInt::from(companion[i][k]) * &col[k]).sum()).collect();
        }
        let w: Vec<Vec<Complex64>> = conj.iter().map(|z| (0..d).map(|k| z.mid.powi(k as i32)).collect()).collect();
        let winv = cinv(&w);

        Ok(PisotField(Arc::new(Inner {
            coeffs: coeffs.to_vec(),
            poly: p,
            tag: fnv(coeffs),
            beta_lo,
            beta_hi,
            beta_f,
            conj,
            slots,
            eig,
            hbasis,
            v1,
            rho,
            vol_factor,
            companion,
            psi_cols,
            winv,
            frame_inv,
        })))
    }

    pub fn degree(&self) -> usize {
        self.0.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0.coeffs
    }

    /// Minimal polynomial, highest degree first.
    pub fn min_poly(&self) -> &[i64] {
        &self.0.poly
    }

    pub fn tag(&self) -> u64 {
        self.0.tag
    }

    pub fn beta_f64(&self) -> f64 {
        self.0.beta_f
    }

    pub fn beta_enclosure(&self) -> (&BigRational, &BigRational) {
        (&self.0.beta_lo, &self.0.beta_hi)
    }

    /// β_1 = β, β_2, …, β_d (real conjugates first, then complex pairs).
    pub fn conjugates(&self) -> &[CBall] {
        &self.0.conj
    }

    pub fn slots(&self) -> &[Slot] {
        &self.0.slots
    }

    /// v_j for j = 1..d (index 0 is v_1).
    pub fn eigvecs(&self) -> &[Vec<CBall>] {
        &self.0.eig
    }

    pub fn hbasis(&self) -> &[Vec<f64>] {
        &self.0.hbasis
    }

    pub fn v1(&self) -> &[f64] {
        &self.0.v1
    }

    pub fn rho(&self) -> f64 {
        self.0.rho
    }

    /// |det[v_1, hbasis]|: Lebesgue volume of a unit box in (v_1, hbasis) coordinates.
    pub fn vol_factor(&self) -> f64 {
        self.0.vol_factor
    }

    pub fn companion(&self) -> &[Vec<i64>] {
        &self.0.companion
    }

    pub(crate) fn winv(&self) -> &[Vec<Complex64>] {
        &self.0.winv
    }

    pub fn same(&self, o: &PisotField) -> bool {
        self.0.coeffs == o.0.coeffs
    }

    // ---- constructors ----

    pub fn from_coords(&self, c: Vec<BigRational>) -> Result<QBeta, FieldError> {
        if c.len() != self.degree() {
            return Err(FieldError::FieldMismatch);
        }
        Ok(QBeta { tag: self.0.tag, c })
    }

    pub fn from_ints(&self, c: &[i64]) -> QBeta {
        let mut v: Vec<BigRational> = c.iter().map(|&x| q(x)).collect();
        v.resize(self.degree(), BigRational::zero());
        QBeta { tag: self.0.tag, c: v }
    }

    pub fn from_rational(&self, r: BigRational) -> QBeta {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = r;
        QBeta { tag: self.0.tag, c: v }
    }

    pub fn int(&self, n: i64) -> QBeta {
        self.from_rational(q(n))
    }

    pub fn ratio(&self, p: i64, d: i64) -> QBeta {
        self.from_rational(BigRational::new(BigInt::from(p), BigInt::from(d)))
    }

    pub fn zero(&self) -> QBeta {
        self.int(0)
    }

    pub fn one(&self) -> QBeta {
        self.int(1)
    }

    pub fn beta(&self) -> QBeta {
        self.from_ints(&[0, 1])
    }

    /// β^k for any integer k.
    pub fn beta_pow(&self, k: i64) -> QBeta {
        let mut x = self.one();
        if k >= 0 {
            for _ in 0..k {
                x = self.mul_beta(&x);
            }
        } else {
            for _ in 0..(-k) {
                x = self.div_beta(&x);
            }
        }
        x
    }

    pub fn check(&self, x: &QBeta) -> Result<(), FieldError> {
        if x.tag == self.0.tag && x.c.len() == self.degree() {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    // ---- arithmetic ----

    pub fn add(&self, x: &QBeta, y: &QBeta) -> Result<QBeta, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x + y)
    }

    pub fn sub(&self, x: &QBeta, y: &QBeta) -> Result<QBeta, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x - y)
    }

    fn reduce(&self, mut t: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        let c = &self.0.coeffs;
        for k in (d..t.len()).rev() {
            let top = std::mem::replace(&mut t[k], BigRational::zero());
            if top.is_zero() {
                continue;
            }
            for i in 1..=d {
                if c[i - 1] != 0 {
                    t[k - i] += &top * q(c[i - 1]);
                }
            }
        }
        t.truncate(d);
        t
    }

    pub fn mul(&self, x: &QBeta, y: &QBeta) -> QBeta {
        assert!(x.same_field(y) && x.tag == self.0.tag, "QBeta values from different fields");
        let d = self.degree();
        let mut t = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in x.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.c.iter().enumerate() {
                if !b.is_zero() {
                    t[i + j] += a * b;
                }
            }
        }
        QBeta { tag: x.tag, c: self.reduce(t) }
    }

    pub fn mul_checked(&self, x: &QBeta, y: &QBeta) -> Result<QBeta, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn mul_beta(&self, x: &QBeta) -> QBeta {
        let mut t = Vec::with_capacity(x.c.len() + 1);
        t.push(BigRational::zero());
        t.extend(x.c.iter().cloned());
        QBeta { tag: x.tag, c: self.reduce(t) }
    }

    /// x/β using 1/β = c_d (β^{d−1} − c_1 β^{d−2} − ⋯ − c_{d−1}).
    pub fn div_beta(&self, x: &QBeta) -> QBeta {
        let d = self.degree();
        let c = &self.0.coeffs;
        let cd = c[d - 1];
        let mut out: Vec<BigRational> = x.c[1..].to_vec();
        out.push(BigRational::zero());
        let q0 = &x.c[0];
        if !q0.is_zero() {
            let s = q0 * q(cd);
            out[d - 1] += &s;
            for k in 0..d - 1 {
                // coefficient of β^k in 1/β is −c_{d−1−k}·c_d
                let ck = c[d - 2 - k];
                if ck != 0 {
                    out[k] -= &s * q(ck);
                }
            }
        }
        QBeta { tag: x.tag, c: out }
    }

    /// Exact inverse by solving the multiplication-matrix system.
    pub fn inv(&self, x: &QBeta) -> Result<QBeta, FieldError> {
        self.check(x)?;
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = x.clone();
        for _ in 0..d {
            cols.push(cur.c.clone());
            cur = self.mul_beta(&cur);
        }
        // augmented matrix A y = e_0 where A[i][k] = cols[k][i]
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut r: Vec<BigRational> = (0..d).map(|k| cols[k][i].clone()).collect();
                r.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                r
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !a[r][col].is_zero()).ok_or(FieldError::DivisionByZero)?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for v in a[col].iter_mut() {
                *v = &*v / &p;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for k in col..=d {
                        let t = &f * &a[col][k];
                        a[r][k] -= t;
                    }
                }
            }
        }
        Ok(QBeta { tag: x.tag, c: a.into_iter().map(|r| r[d].clone()).collect() })
    }

    pub fn div(&self, x: &QBeta, y: &QBeta) -> Result<QBeta, FieldError> {
        let yi = self.inv(y)?;
        self.check(x)?;
        Ok(self.mul(x, &yi))
    }

    // ---- order ----

    /// f64 value of x with a rigorous error bound.
    pub fn approx_with_err(&self, x: &QBeta) -> (f64, f64) {
        let b = self.0.beta_f;
        let d = x.c.len();
        let mut val = 0.0;
        let mut s = 0.0;
        let mut ds = 0.0;
        for k in (0..d).rev() {
            let qk = to_f64(&x.c[k]);
            val = val * b + qk;
            s = s * b + qk.abs();
            ds = ds * b + s;
        }
        // ds over-approximates Σ k|q_k| β^{k−1}; β is known to ~2^-120, its f64 to 2u
        let err = s * (3.0 * d as f64 + 4.0) * f64::EPSILON + ds * 4.0 * f64::EPSILON * b;
        if !val.is_finite() || !err.is_finite() {
            return (f64::NAN, f64::INFINITY);
        }
        (val, err)
    }

    pub fn approx(&self, x: &QBeta) -> f64 {
        self.approx_with_err(x).0
    }

    /// Sign of x; exact.
    pub fn sign(&self, x: &QBeta) -> Ordering {
        if x.is_zero() {
            return Ordering::Equal;
        }
        let (v, e) = self.approx_with_err(x);
        if v.is_finite() && v.abs() > e {
            return if v > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        let mut lo = self.0.beta_lo.clone();
        let mut hi = self.0.beta_hi.clone();
        let mut bits = 240;
        loop {
            let (l, h) = interval_eval(&x.c, &lo, &hi);
            if l.is_positive() {
                return Ordering::Greater;
            }
            if h.is_negative() {
                return Ordering::Less;
            }
            let r = poly::refine_root(&self.0.poly, lo, hi, bits);
            lo = r.0;
            hi = r.1;
            bits *= 2;
        }
    }

    pub fn cmp(&self, x: &QBeta, y: &QBeta) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        self.sign(&(x - y))
    }

    pub fn compare(&self, x: &QBeta, y: &QBeta) -> Result<Ordering, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.cmp(x, y))
    }

    pub fn lt(&self, x: &QBeta, y: &QBeta) -> bool {
        self.cmp(x, y) == Ordering::Less
    }

    pub fn le(&self, x: &QBeta, y: &QBeta) -> bool {
        self.cmp(x, y) != Ordering::Greater
    }

    pub fn min<'a>(&self, x: &'a QBeta, y: &'a QBeta) -> &'a QBeta {
        if self.le(x, y) {
            x
        } else {
            y
        }
    }

    pub fn max<'a>(&self, x: &'a QBeta, y: &'a QBeta) -> &'a QBeta {
        if self.le(x, y) {
            y
        } else {
            x
        }
    }

    pub fn abs(&self, x: &QBeta) -> QBeta {
        if self.sign(x) == Ordering::Less {
            -x
        } else {
            x.clone()
        }
    }

    /// ⌊x⌋ as an integer.
    pub fn floor(&self, x: &QBeta) -> BigInt {
        let a = self.approx(x).floor();
        let mut n = BigInt::from(a as i64);
        loop {
            let nq = self.from_rational(BigRational::from_integer(n.clone()));
            if self.lt(x, &nq) {
                n -= 1;
                continue;
            }
            let n1 = self.from_rational(BigRational::from_integer(&n + 1));
            if !self.lt(x, &n1) {
                n += 1;
                continue;
            }
            return n;
        }
    }

    pub fn ceil(&self, x: &QBeta) -> BigInt {
        -self.floor(&-x)
    }

    // ---- conjugates and embeddings ----

    /// Γ_j(x) = Σ q_k β_j^k for j = 1..d (1-based, j = 1 is β itself).
    /// Enclosures are f64 balls; radii are typically ~1e-15 relative.
    pub fn gamma(&self, x: &QBeta, j: usize) -> CBall {
        assert!(j >= 1 && j <= self.degree(), "conjugate index out of range");
        let z = &self.0.conj[j - 1];
        let mut acc = CBall::zero();
        for k in (0..x.c.len()).rev() {
            let qk = to_f64(&x.c[k]);
            acc = acc.mul(z).add(&CBall::real(qk, 2.0 * f64::EPSILON * qk.abs()));
        }
        acc
    }

    /// Certified enclosure of Γ_j(x) whose radius is at most 2^-bits when that
    /// is achievable in double precision; otherwise the tightest available.
    pub fn gamma_prec(&self, x: &QBeta, j: usize, bits: u32) -> CBall {
        let g = self.gamma(x, j);
        if j == 1 && g.rad > (2f64).powi(-(bits.min(1000) as i32)) {
            // real embedding: use the rational enclosure of β
            let (mut lo, mut hi) = (self.0.beta_lo.clone(), self.0.beta_hi.clone());
            let mut b = 240;
            loop {
                let (l, h) = interval_eval(&x.c, &lo, &hi);
                let w = to_f64(&(&h - &l));
                let mid = to_f64(&((&l + &h) / q(2)));
                let rad = w / 2.0 + f64::EPSILON * mid.abs();
                if rad <= g.rad || b > 4000 {
                    return CBall::real(mid, rad);
                }
                let r = poly::refine_root(&self.0.poly, lo, hi, b);
                lo = r.0;
                hi = r.1;
                b *= 2;
            }
        }
        g
    }

    /// Φ(x) = Ψ(x) − x·v_1 ∈ H.
    pub fn phi(&self, x: &QBeta) -> HPoint {
        let mut coords = Vec::with_capacity(self.degree() - 1);
        let mut rad: f64 = 0.0;
        for s in &self.0.slots {
            match *s {
                Slot::Real(j) => {
                    let g = self.gamma(x, j + 1);
                    coords.push(g.mid.re);
                    rad = rad.max(g.rad);
                }
                Slot::Complex(j) => {
                    let g = self.gamma(x, j + 1);
                    coords.push(2.0 * g.mid.re);
                    coords.push(-2.0 * g.mid.im);
                    rad = rad.max(g.rad);
                }
            }
        }
        HPoint { coords, rad }
    }

    /// Ψ(x) = Σ q_k M^k e_1; exact.
    pub fn psi(&self, x: &QBeta) -> Vec<BigRational> {
        let d = self.degree();
        let mut out = vec![BigRational::zero(); d];
        for (k, qk) in x.c.iter().enumerate() {
            if qk.is_zero() {
                continue;
            }
            for i in 0..d {
                let c = &self.0.psi_cols[k][i];
                if !c.is_zero() {
                    out[i] += qk * BigRational::from_integer(c.clone());
                }
            }
        }
        out
    }

    /// Inverse of Ψ on Q^d (columns of Ψ are unit upper triangular).
    pub fn pi1(&self, v: &[BigRational]) -> Result<QBeta, FieldError> {
        let d = self.degree();
        if v.len() != d {
            return Err(FieldError::FieldMismatch);
        }
        let mut r = v.to_vec();
        let mut out = vec![BigRational::zero(); d];
        for k in (0..d).rev() {
            let z = r[k].clone();
            if !z.is_zero() {
                for i in 0..d {
                    let c = &self.0.psi_cols[k][i];
                    if !c.is_zero() {
                        r[i] -= &z * BigRational::from_integer(c.clone());
                    }
                }
            }
            out[k] = z;
        }
        Ok(QBeta { tag: self.0.tag, c: out })
    }

    /// Conjugate max-norm max_j |Γ_j| of an H point (ignores its radius).
    pub fn h_norm(&self, p: &HPoint) -> f64 {
        let mut i = 0;
        let mut m: f64 = 0.0;
        for s in &self.0.slots {
            match s {
                Slot::Real(_) => {
                    m = m.max(p.coords[i].abs());
                    i += 1;
                }
                Slot::Complex(_) => {
                    m = m.max(p.coords[i].hypot(p.coords[i + 1]) / 2.0);
                    i += 2;
                }
            }
        }
        m
    }

    pub fn h_dist(&self, a: &HPoint, b: &HPoint) -> f64 {
        let diff = HPoint { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(), rad: 0.0 };
        self.h_norm(&diff)
    }

    /// M_β restricted to H, in hbasis coordinates.
    pub fn h_apply(&self, p: &HPoint) -> HPoint {
        let mut coords = p.coords.clone();
        let mut i = 0;
        for s in &self.0.slots {
            match *s {
                Slot::Real(j) => {
                    coords[i] = p.coords[i] * self.0.conj[j].mid.re;
                    i += 1;
                }
                Slot::Complex(j) => {
                    let g = Complex64::new(p.coords[i], -p.coords[i + 1]) * self.0.conj[j].mid;
                    coords[i] = g.re;
                    coords[i + 1] = -g.im;
                    i += 2;
                }
            }
        }
        let scale = self.h_norm(p);
        let rad = p.rad * self.0.rho + scale * 8.0 * f64::EPSILON + self.0.conj[1..].iter().map(|c| c.rad).fold(0.0, f64::max) * scale;
        HPoint { coords, rad }
    }

    pub fn h_add(&self, a: &HPoint, b: &HPoint) -> HPoint {
        let coords: Vec<f64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        let rad = a.rad + b.rad + 4.0 * f64::EPSILON * self.h_norm(&HPoint { coords: coords.clone(), rad: 0.0 });
        HPoint { coords, rad }
    }

    /// Point of R^d from a v_1-coordinate t and an H point.
    pub fn to_rd(&self, t: f64, p: &HPoint) -> Vec<f64> {
        let d = self.degree();
        (0..d)
            .map(|i| t * self.0.v1[i] + self.0.hbasis.iter().zip(&p.coords).map(|(h, c)| h[i] * c).sum::<f64>())
            .collect()
    }

    /// Inverse of [`to_rd`](Self::to_rd).
    pub fn from_rd(&self, v: &[f64]) -> (f64, Vec<f64>) {
        let d = self.degree();
        let c: Vec<f64> = (0..d).map(|i| (0..d).map(|k| self.0.frame_inv[i][k] * v[k]).sum()).collect();
        (c[0], c[1..].to_vec())
    }
}

/// Rational enclosure of Σ q_k β^k for β ∈ [lo, hi] with lo > 0.
fn interval_eval(c: &[BigRational], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut l = BigRational::zero();
    let mut h = BigRational::zero();
    let mut pl = BigRational::one();
    let mut ph = BigRational::one();
    for qk in c {
        if qk.is_positive() {
            l += qk * &pl;
            h += qk * &ph;
        } else if qk.is_negative() {
            l += qk * &ph;
            h += qk * &pl;
        }
        pl = &pl * lo;
        ph = &ph * hi;
    }
    (l, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> PisotField {
        PisotField::new(&[1, 1]).unwrap()
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert_eq!(PisotField::new(&[0, 2]).unwrap_err(), FieldError::NotUnit(2));
        assert_eq!(PisotField::new(&[3]).unwrap_err(), FieldError::DegreeTooSmall);
        // (x^2 - x - 1)(x + 1)
        assert_eq!(PisotField::new(&[0, 2, 1]).unwrap_err(), FieldError::NotIrreducible);
        // x^2 - x + 1 has no real root above 1
        assert!(matches!(PisotField::new(&[1, -1]), Err(FieldError::NotPisot(_))));
        // x^4 - x^3 - x^2 - x + 1 is a Salem polynomial
        assert!(matches!(PisotField::new(&[1, 1, 1, -1]), Err(FieldError::NotPisot(_))));
    }

    #[test]
    fn golden_identities() {
        let f = golden();
        let b = f.beta();
        let bb = f.mul(&b, &b);
        assert_eq!(bb, f.from_ints(&[1, 1]));
        assert_eq!(f.div_beta(&f.one()), f.from_ints(&[-1, 1]));
        assert_eq!(f.inv(&b).unwrap(), f.from_ints(&[-1, 1]));
        assert_eq!(f.beta_pow(-2), f.from_ints(&[2, -1]));
        assert!((f.beta_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn tribonacci_inverse_of_beta() {
        let f = PisotField::new(&[1, 1, 1]).unwrap();
        assert_eq!(f.inv(&f.beta()).unwrap(), f.from_ints(&[-1, -1, 1]));
        assert_eq!(f.slots(), &[Slot::Complex(1)]);
    }

    #[test]
    fn signs_near_zero_fall_back_to_exact() {
        let f = PisotField::new(&[0, 1, 1]).unwrap();
        assert_eq!(f.sign(&f.from_ints(&[3, -2])), Ordering::Greater);
        // β^-60 is tiny but positive
        let t = f.beta_pow(-60);
        assert_eq!(f.sign(&t), Ordering::Greater);
        let u = &t - &f.beta_pow(-61);
        assert_eq!(f.sign(&u), Ordering::Greater);
        assert_eq!(f.sign(&(&f.zero() - &u)), Ordering::Less);
    }

    #[test]
    fn floor_matches_float() {
        let f = golden();
        assert_eq!(f.floor(&f.from_ints(&[0, 3])), BigInt::from(4));
        assert_eq!(f.floor(&f.from_ints(&[0, -1])), BigInt::from(-2));
        assert_eq!(f.ceil(&f.from_ints(&[0, -1])), BigInt::from(-1));
        assert_eq!(f.floor(&f.int(3)), BigInt::from(3));
    }

    #[test]
    fn golden_eigenvector_closed_form() {
        let f = golden();
        let s5 = 5f64.sqrt();
        let b = f.beta_f64();
        let v1 = f.v1();
        assert!((v1[0] - b / s5).abs() < 1e-14);
        assert!((v1[1] - 1.0 / s5).abs() < 1e-14);
        let sum: Vec<f64> = (0..2).map(|i| f.eigvecs().iter().map(|v| v[i].mid.re).sum()).collect();
        assert!((sum[0] - 1.0).abs() < 1e-14 && sum[1].abs() < 1e-14);
    }

    #[test]
    fn psi_pi1_roundtrip() {
        let f = PisotField::new(&[1, 1, 1]).unwrap();
        let x = f.from_coords(vec![BigRational::new(3.into(), 7.into()), q(-2), q(5)]).unwrap();
        assert_eq!(f.pi1(&f.psi(&x)).unwrap(), x);
    }

    #[test]
    fn field_mismatch_detected() {
        let f = golden();
        let g = PisotField::new(&[1, 1, 1]).unwrap();
        assert_eq!(f.add(&f.one(), &g.one()), Err(FieldError::FieldMismatch));
    }
}

//! Exact Gaussian-rational arithmetic and linear algebra.
//!
//! All rank, kernel, and determinant computations that feed integer-valued
//! invariants (Hom/Ext dimensions, stabilizers, splitting types) run over
//! `Q(i)` so that no tolerance ever decides an integer. Scalars are pairs of
//! arbitrary-precision rationals; matrices are dense row-major.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, re-exported for downstream signatures.
pub type Rat = BigRational;

/// Error for text forms of exact scalars ("p/q", "p/q+r/s i").
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseExactError {
    #[error("empty scalar literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
    #[error("malformed complex literal `{0}`")]
    BadComplex(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parse a rational written as `p`, `p/q`, or a plain decimal like `-3.25`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseExactError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseExactError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let p = BigInt::from_str(num.trim())
            .map_err(|_| ParseExactError::BadRational(s.to_string()))?;
        let q = BigInt::from_str(den.trim())
            .map_err(|_| ParseExactError::BadRational(s.to_string()))?;
        if q.is_zero() {
            return Err(ParseExactError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.trim();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseExactError::BadRational(s.to_string()));
        }
        let scale = BigInt::from(10u8).pow(digits.len() as u32);
        let int = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|_| ParseExactError::BadRational(s.to_string()))?
        };
        let frac = BigInt::from_str(digits).map_err(|_| ParseExactError::BadRational(s.to_string()))?;
        let negative = s.starts_with('-');
        let whole = int.magnitude().clone() * scale.magnitude().clone() + frac.magnitude().clone();
        let mut r = Rat::new(BigInt::from(whole), scale);
        if negative {
            r = -r;
        }
        return Ok(r);
    }
    let p = BigInt::from_str(s).map_err(|_| ParseExactError::BadRational(s.to_string()))?;
    Ok(Rat::from_integer(p))
}

/// Render a rational as `p` (denominator one) or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A Gaussian rational: exact complex scalar with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat {
            re: Rat::from_integer(BigInt::from(re)),
            im: Rat::from_integer(BigInt::from(im)),
        }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `re² + im²` (a nonnegative rational).
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; panics on zero (callers pivot on nonzero entries).
    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero Gaussian rational");
        GaussRat { re: &self.re / &n, im: -(&self.im / &n) }
    }

    /// Approximate as a complex double (for reporting only, never for decisions).
    pub fn to_f64_pair(&self) -> (f64, f64) {
        fn approx(r: &Rat) -> f64 {
            let n = r.numer();
            let d = r.denom();
            // Good enough for display-scale magnitudes used in this crate.
            let nf: f64 = n.to_string().parse().unwrap_or(f64::NAN);
            let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
            nf / df
        }
        (approx(&self.re), approx(&self.im))
    }
}

impl fmt::Display for GaussRat {
    /// Canonical text form: `p/q` for real values, `p/q+r/s i` or `p/q-r/s i` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{} i", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
    }
}

impl FromStr for GaussRat {
    type Err = ParseExactError;

    /// Accepts `p/q`, `p/q+r/s i`, and `p/q-r/s i` (whitespace tolerated).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseExactError::Empty);
        }
        match t.strip_suffix('i') {
            None => Ok(GaussRat::from_rat(parse_rat(t)?)),
            Some(head) => {
                let head = head.trim_end();
                // Split at the sign separating real and imaginary parts; skip
                // index 0 so leading minus signs stay with the real part.
                let mut split = None;
                for (idx, ch) in head.char_indices().skip(1) {
                    if (ch == '+' || ch == '-') && !matches!(&head[idx - 1..idx], "/" | "e" | "E") {
                        split = Some((idx, ch));
                    }
                }
                let (idx, sign) = split.ok_or_else(|| ParseExactError::BadComplex(s.to_string()))?;
                let re = parse_rat(&head[..idx])?;
                let im_abs = parse_rat(&head[idx + 1..])?;
                let im = if sign == '-' { -im_abs } else { im_abs };
                Ok(GaussRat { re, im })
            }
        }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &GaussRat) -> GaussRat {
        self * &rhs.inv()
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

/// Dense matrix over the Gaussian rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<GaussRat>,
}

impl ExactMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMat { rows, cols, data: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussRat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussRat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ExactMat { rows, cols, data }
    }

    /// Build from row slices of integer pairs `(re, im)`, mostly for tests.
    pub fn from_int_rows(rows: &[Vec<(i64, i64)>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| {
            let (re, im) = rows[i][j];
            GaussRat::from_ints(re, im)
        })
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn mul(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!(self.cols, rhs.rows, "exact matrix product shape mismatch");
        let mut out = ExactMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let term = a * &rhs[(k, j)];
                    out[(i, j)] += &term;
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRat::is_zero)
    }

    /// Direct sum (block diagonal) of two matrices.
    pub fn block_diag(&self, rhs: &ExactMat) -> ExactMat {
        let mut out = ExactMat::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out[(self.rows + i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    /// Rank by exact Gaussian elimination (destructive on a working copy).
    pub fn rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            // Pivot: first nonzero entry in this column at or below `rank`.
            let pivot = (rank..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            let inv = m[(rank, col)].inv();
            for c in col..m.cols {
                let v = &m[(rank, c)] * &inv;
                m[(rank, c)] = v;
            }
            for r in 0..m.rows {
                if r != rank && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let t = &factor * &m[(rank, c)];
                        let v = &m[(r, c)] - &t;
                        m[(r, c)] = v;
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Kernel dimension (`cols − rank`).
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Exact determinant by elimination with row-swap sign tracking.
    pub fn det(&self) -> GaussRat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return GaussRat::one();
        }
        let mut m = self.clone();
        let mut det = GaussRat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else { return GaussRat::zero() };
            if p != col {
                m.swap_rows(col, p);
                det = (&det).neg();
            }
            let d = m[(col, col)].clone();
            det = &det * &d;
            let inv = d.inv();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for c in col..n {
                    let t = &factor * &m[(col, c)];
                    let v = &m[(r, c)] - &t;
                    m[(r, c)] = v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMat {
    type Output = GaussRat;
    fn index(&self, (r, c): (usize, usize)) -> &GaussRat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GaussRat {
        &mut self.data[r * self.cols + c]
    }
}

/// Univariate polynomial over the Gaussian rationals, coefficients by ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPoly(pub Vec<GaussRat>);

impl ExactPoly {
    pub fn zero() -> Self {
        ExactPoly(Vec::new())
    }

    pub fn normalize(mut self) -> Self {
        while self.0.last().is_some_and(GaussRat::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    /// Make the leading coefficient one (no-op on the zero polynomial).
    pub fn monic(mut self) -> Self {
        if let Some(lead) = self.0.last().cloned() {
            let inv = lead.inv();
            for c in &mut self.0 {
                *c = &*c * &inv;
            }
        }
        self
    }

    /// Remainder of `self` modulo `rhs` (rhs nonzero).
    pub fn rem(&self, rhs: &ExactPoly) -> ExactPoly {
        assert!(!rhs.is_zero(), "polynomial remainder by zero");
        let mut r = self.clone().normalize();
        let d = rhs.degree().unwrap();
        let lead_inv = rhs.0[d].inv();
        while let Some(rd) = r.degree() {
            if rd < d {
                break;
            }
            let shift = rd - d;
            let factor = &r.0[rd] * &lead_inv;
            for k in 0..=d {
                let t = &factor * &rhs.0[k];
                let v = &r.0[shift + k] - &t;
                r.0[shift + k] = v;
            }
            r = r.normalize();
        }
        r
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, rhs: &ExactPoly) -> ExactPoly {
        let mut a = self.clone().normalize();
        let mut b = rhs.clone().normalize();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn add(&self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(GaussRat::zero);
            let b = rhs.0.get(k).cloned().unwrap_or_else(GaussRat::zero);
            out.push(&a + &b);
        }
        ExactPoly(out).normalize()
    }

    pub fn mul(&self, rhs: &ExactPoly) -> ExactPoly {
        if self.is_zero() || rhs.is_zero() {
            return ExactPoly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                let t = a * b;
                out[i + j] = &out[i + j] + &t;
            }
        }
        ExactPoly(out).normalize()
    }

    pub fn scale(&self, c: &GaussRat) -> ExactPoly {
        ExactPoly(self.0.iter().map(|a| a * c).collect()).normalize()
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

/// Unique polynomial of degree < `points.len()` through the given
/// (node, value) pairs; nodes must be pairwise distinct.
pub fn interpolate(points: &[(GaussRat, GaussRat)]) -> ExactPoly {
    let mut acc = ExactPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = ExactPoly(vec![GaussRat::one()]);
        let mut denom = GaussRat::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&ExactPoly(vec![-xj, GaussRat::one()]));
            denom = &denom * &(xi - xj);
        }
        acc = acc.add(&basis.scale(&(yi * &denom.inv())));
    }
    acc
}

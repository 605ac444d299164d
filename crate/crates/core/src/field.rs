//! Scalar backends.
//!
//! Every quantum object in this crate is generic over a real scalar type `R`
//! implementing [`Real`]; complex amplitudes are `Complex<R>`. Two backends
//! exist:
//!
//! - `f64` for quadrature over the sphere, with tolerance `1e-9`;
//! - [`QSqrt3`], the field ℚ(√3) with arbitrary-precision rational parts, for
//!   proof-grade computations. All comparisons are exact (tolerance zero).
//!
//! ℚ(√3)(i) contains every amplitude needed for the Pauli eigenstates (up to
//! normalization, which is divided out exactly) and for the 120° trine of real
//! qubit rays.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use serde::Serialize;

use crate::qstate::{spectral, Operator, Ray};

/// Default float tolerance shared by hermiticity, normalization, trace,
/// positivity and POVM-sum checks.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A real scalar backend.
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and tolerances are zero.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    fn from_qsqrt3(x: &QSqrt3) -> Self;

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> Self;

    /// Square root when it stays in the field. Always `Some` for floats.
    fn try_sqrt(&self) -> Option<Self>;

    fn tolerance() -> Self;

    fn quantity(&self) -> Quantity;

    /// `None` if the hermitian operator is positive semidefinite within `tol`,
    /// otherwise the offending magnitude (the most negative eigenvalue for
    /// floats, the most negative principal minor for exact backends).
    fn psd_defect(op: &Operator<Self>, tol: &Self) -> Option<Self>;

    /// A ray whose projector best separates two states with difference `delta`.
    fn distinguishing_ray(delta: &Operator<Self>) -> Option<Ray<Self>>;
}

/// A number as it appears in reports: always a float value, plus the exact
/// string form for exact backends.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(s) => f.write_str(s),
            // shortest round-trip digits either way; exponent form below 1e-4
            None if self.value != 0.0 && self.value.abs() < 1e-4 => write!(f, "{:e}", self.value),
            None => write!(f, "{}", self.value),
        }
    }
}

pub(crate) fn max_of<R: Real>(values: impl IntoIterator<Item = R>) -> R {
    values
        .into_iter()
        .fold(R::zero(), |acc, v| if v > acc { v } else { acc })
}

pub(crate) fn complex_deviation<R: Real>(a: &Complex<R>, b: &Complex<R>) -> R {
    let re = (a.re.clone() - b.re.clone()).magnitude();
    let im = (a.im.clone() - b.im.clone()).magnitude();
    if re > im {
        re
    } else {
        im
    }
}

impl Real for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }

    fn from_qsqrt3(x: &QSqrt3) -> Self {
        x.to_f64()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn try_sqrt(&self) -> Option<Self> {
        Some(self.sqrt())
    }

    fn tolerance() -> Self {
        FLOAT_TOLERANCE
    }

    fn quantity(&self) -> Quantity {
        Quantity {
            value: *self,
            exact: None,
        }
    }

    fn psd_defect(op: &Operator<Self>, tol: &Self) -> Option<Self> {
        let min = spectral::min_eigenvalue(op);
        (min < -*tol).then_some(min)
    }

    fn distinguishing_ray(delta: &Operator<Self>) -> Option<Ray<Self>> {
        spectral::dominant_eigenray(delta)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// An element `a + b·√3` of the field ℚ(√3).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    a: BigRational,
    b: BigRational,
}

impl QSqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn sqrt3() -> Self {
        Self {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt3_part(&self) -> &BigRational {
        &self.b
    }

    /// The value as a plain rational, if the √3 part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Galois conjugate `a − b√3`.
    pub fn galois(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 3b²`; zero only for zero.
    fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(3.into()) * &self.b * &self.b
    }

    fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² with 3b²
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(3.into()) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 3f64.sqrt()
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sqrt3_term(b: &BigRational) -> String {
            if b.is_one() {
                "sqrt3".to_string()
            } else if (-b).is_one() {
                "-sqrt3".to_string()
            } else {
                format!("{b}*sqrt3")
            }
        }
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => f.write_str(&sqrt3_term(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}", self.a, sqrt3_term(&-self.b.clone()))
                } else {
                    write!(f, "{} + {}", self.a, sqrt3_term(&self.b))
                }
            }
        }
    }
}

impl PartialOrd for QSqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let three = BigRational::from_integer(3.into());
        Self {
            a: &self.a * &rhs.a + three * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Div for QSqrt3 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt3)");
        let num = self * rhs.galois();
        Self {
            a: num.a / n.clone(),
            b: num.b / n,
        }
    }
}

impl Rem for QSqrt3 {
    type Output = Self;
    /// Field remainder: always zero for a nonzero divisor.
    fn rem(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "remainder by zero in Q(sqrt3)");
        Self::zero()
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Q(sqrt3) literal: {0}")]
pub struct ParseScalarError(pub String);

impl Num for QSqrt3 {
    type FromStrRadixErr = ParseScalarError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseScalarError(s.to_string()));
        }
        s.parse()
    }
}

impl FromStr for QSqrt3 {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let c = parse_complex(s)?;
        if !c.im.is_zero() {
            return Err(ParseScalarError(s.to_string()));
        }
        Ok(c.re)
    }
}

/// Parses an element of ℚ(√3)(i).
///
/// Grammar: a sum of terms separated by `+` or `-`; each term is an optional
/// rational coefficient (`3`, `-1/2`) followed by any of the factors `sqrt3`
/// and `i`, optionally joined with `*`. Examples: `1/2`, `1/2*sqrt3`,
/// `-1/2 i`, `1/2 + 1/2*sqrt3*i`. Division applies only to the coefficient.
pub fn parse_complex(s: &str) -> Result<Complex<QSqrt3>, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err());
    }
    let mut re = QSqrt3::zero();
    let mut im = QSqrt3::zero();
    let bytes = compact.as_bytes();
    let mut start = 0;
    let mut terms = Vec::new();
    for idx in 1..=bytes.len() {
        if idx == bytes.len() || bytes[idx] == b'+' || bytes[idx] == b'-' {
            terms.push(&compact[start..idx]);
            start = idx;
        }
    }
    for term in terms {
        let (negative, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(err());
        }
        let mut coeff = BigRational::one();
        let mut has_sqrt3 = false;
        let mut has_i = false;
        let mut saw_coeff = false;
        for factor in body.split('*') {
            let mut rest = factor;
            if !saw_coeff {
                let digits = rest
                    .find(|c: char| !(c.is_ascii_digit() || c == '/'))
                    .unwrap_or(rest.len());
                if digits > 0 {
                    coeff = parse_rational(&rest[..digits]).ok_or_else(err)?;
                    rest = &rest[digits..];
                }
                saw_coeff = true;
            }
            while !rest.is_empty() {
                if let Some(r) = rest.strip_prefix("sqrt3") {
                    if has_sqrt3 {
                        return Err(err());
                    }
                    has_sqrt3 = true;
                    rest = r;
                } else if let Some(r) = rest.strip_prefix('i') {
                    if has_i {
                        return Err(err());
                    }
                    has_i = true;
                    rest = r;
                } else {
                    return Err(err());
                }
            }
        }
        if negative {
            coeff = -coeff;
        }
        let value = if has_sqrt3 {
            QSqrt3::new(BigRational::zero(), coeff)
        } else {
            QSqrt3::rational(coeff)
        };
        if has_i {
            im = im + value;
        } else {
            re = re + value;
        }
    }
    Ok(Complex::new(re, im))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Formats an exact complex amplitude in the grammar accepted by [`parse_complex`].
pub fn format_complex(c: &Complex<QSqrt3>) -> String {
    let mut terms: Vec<(BigRational, &str)> = Vec::new();
    for (coeff, suffix) in [
        (&c.re.a, ""),
        (&c.re.b, "*sqrt3"),
        (&c.im.a, "*i"),
        (&c.im.b, "*sqrt3*i"),
    ] {
        if !coeff.is_zero() {
            terms.push((coeff.clone(), suffix));
        }
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (coeff, suffix)) in terms.iter().enumerate() {
        if k > 0 {
            out.push_str(if coeff.is_negative() { " - " } else { " + " });
            out.push_str(&format!("{}{suffix}", coeff.abs()));
        } else {
            out.push_str(&format!("{coeff}{suffix}"));
        }
    }
    out
}

impl Real for QSqrt3 {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        QSqrt3::ratio(num, den)
    }

    fn from_rational(r: &BigRational) -> Self {
        QSqrt3::rational(r.clone())
    }

    fn from_qsqrt3(x: &QSqrt3) -> Self {
        x.clone()
    }

    fn to_f64(&self) -> f64 {
        QSqrt3::to_f64(self)
    }

    fn magnitude(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn try_sqrt(&self) -> Option<Self> {
        None
    }

    fn tolerance() -> Self {
        QSqrt3::zero()
    }

    fn quantity(&self) -> Quantity {
        Quantity {
            value: self.to_f64(),
            exact: Some(self.to_string()),
        }
    }

    fn psd_defect(op: &Operator<Self>, tol: &Self) -> Option<Self> {
        let worst = spectral::min_principal_minor(op);
        (worst < -tol.clone()).then_some(worst)
    }

    fn distinguishing_ray(delta: &Operator<Self>) -> Option<Ray<Self>> {
        spectral::best_pauli_like_ray(delta)
    }
}

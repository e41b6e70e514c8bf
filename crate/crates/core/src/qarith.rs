//! Exact arithmetic in the cyclotomic field Q(ω), ω a primitive 4(p+1)-th
//! root of unity, together with q-numbers and q-factorials for q = ω^(4n).
//!
//! Working with the 4(p+1)-th root rather than the (p+1)-th one puts q^(1/2)
//! and q^(1/4) in the same field as q, so every scalar the algebra produces
//! stays exact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cyclotomic, QPoly};

/// The field Q(ω) for a fixed order of parastatistics `p` and a choice of
/// primitive (p+1)-th root q.
#[derive(Debug)]
pub struct CycloContext {
    p: usize,
    root_index: usize,
    order: usize,
    modulus: QPoly,
    /// ω^k reduced modulo the cyclotomic polynomial, for 0 <= k < order.
    powers: Vec<Vec<BigRational>>,
    /// Principal complex embedding of ω^k.
    embedded_powers: Vec<Complex64>,
}

impl CycloContext {
    /// Context with the principal root q = exp(2πi/(p+1)).
    pub fn new(p: usize) -> Result<Arc<Self>> {
        Self::with_root(p, 1)
    }

    /// Context with q = exp(2πi n/(p+1)); `n` must be coprime to p+1.
    pub fn with_root(p: usize, root_index: usize) -> Result<Arc<Self>> {
        if p == 0 {
            return Err(Error::InvalidParameter("p must be at least 1".into()));
        }
        if root_index == 0 || root_index.gcd(&(p + 1)) != 1 {
            return Err(Error::InvalidParameter(format!(
                "root index {root_index} is not coprime to p+1 = {}",
                p + 1
            )));
        }
        let order = 4 * (p + 1);
        let modulus = cyclotomic(order);
        let degree = modulus.degree().expect("cyclotomic polynomial is nonzero");

        let mut powers = Vec::with_capacity(order);
        let mut current = vec![BigRational::zero(); degree];
        current[0] = BigRational::one();
        // Multiplication by ω: shift up, then fold the x^degree term back.
        let lower: Vec<BigRational> = modulus.coeffs()[..degree].iter().map(|c| -c).collect();
        for _ in 0..order {
            powers.push(current.clone());
            let top = current[degree - 1].clone();
            let mut next = vec![BigRational::zero(); degree];
            next[1..degree].clone_from_slice(&current[..degree - 1]);
            if !top.is_zero() {
                for j in 0..degree {
                    next[j] += &top * &lower[j];
                }
            }
            current = next;
        }

        let embedded_powers = (0..order)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / order as f64))
            .collect();

        Ok(Arc::new(CycloContext {
            p,
            root_index,
            order,
            modulus,
            powers,
            embedded_powers,
        }))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn is_principal(&self) -> bool {
        self.root_index == 1
    }

    /// 4(p+1), the multiplicative order of ω.
    pub fn order(&self) -> usize {
        self.order
    }

    /// deg Φ_{4(p+1)}, the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }
}

/// Operations that need the shared context handle.
pub trait Field {
    fn zero(&self) -> CycloElement;
    fn one(&self) -> CycloElement;
    fn int(&self, n: i64) -> CycloElement;
    fn rational(&self, r: BigRational) -> CycloElement;
    /// ω^e for any integer e.
    fn omega_pow(&self, e: i64) -> CycloElement;
    /// q^k.
    fn q_pow(&self, k: i64) -> CycloElement;
    /// q^(k/2) = ω^(2kn).
    fn q_half_power(&self, k: i64) -> CycloElement;
    /// q^(k/4) = ω^(kn).
    fn q_quarter_power(&self, k: i64) -> CycloElement;
    fn q(&self) -> CycloElement;
    /// (n)_q = 1 + q + ... + q^(n-1).
    fn q_number(&self, n: usize) -> CycloElement;
    /// (n)_q! = (1)_q (2)_q ... (n)_q.
    fn q_factorial(&self, n: usize) -> CycloElement;
    /// The symmetric quantum number q^(-(n-1)/2) (n)_q, real for the
    /// principal root.
    fn symmetric_q_number(&self, n: usize) -> CycloElement;
    fn embed(&self, z: &CycloElement) -> Complex64;
    fn attach(&self, z: CycloElement) -> CycloElement;
}

impl Field for Arc<CycloContext> {
    fn zero(&self) -> CycloElement {
        CycloElement::zero()
    }

    fn one(&self) -> CycloElement {
        CycloElement::one().with_field(self.clone())
    }

    fn int(&self, n: i64) -> CycloElement {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn rational(&self, r: BigRational) -> CycloElement {
        CycloElement::from_rational(r).with_field(self.clone())
    }

    fn omega_pow(&self, e: i64) -> CycloElement {
        let k = e.rem_euclid(self.order as i64) as usize;
        CycloElement::from_reduced(self.powers[k].clone(), self.clone())
    }

    fn q_pow(&self, k: i64) -> CycloElement {
        self.omega_pow(4 * self.root_index as i64 * k)
    }

    fn q_half_power(&self, k: i64) -> CycloElement {
        self.omega_pow(2 * self.root_index as i64 * k)
    }

    fn q_quarter_power(&self, k: i64) -> CycloElement {
        self.omega_pow(self.root_index as i64 * k)
    }

    fn q(&self) -> CycloElement {
        self.q_pow(1)
    }

    fn q_number(&self, n: usize) -> CycloElement {
        (0..n).fold(self.zero(), |acc, k| acc + self.q_pow(k as i64))
    }

    fn q_factorial(&self, n: usize) -> CycloElement {
        (1..=n).fold(self.one(), |acc, k| acc * self.q_number(k))
    }

    fn symmetric_q_number(&self, n: usize) -> CycloElement {
        if n == 0 {
            return self.zero();
        }
        self.q_half_power(-(n as i64 - 1)) * self.q_number(n)
    }

    fn embed(&self, z: &CycloElement) -> Complex64 {
        z.coeffs
            .iter()
            .zip(&self.embedded_powers)
            .map(|(c, w)| w * rational_to_f64(c))
            .sum()
    }

    fn attach(&self, z: CycloElement) -> CycloElement {
        z.with_field(self.clone())
    }
}

/// (n)_q in the context's field.
pub fn q_number(ctx: &Arc<CycloContext>, n: usize) -> CycloElement {
    ctx.q_number(n)
}

/// (n)_q!; zero once n exceeds p.
pub fn q_factorial(ctx: &Arc<CycloContext>, n: usize) -> CycloElement {
    ctx.q_factorial(n)
}

/// q^(k/2).
pub fn q_half_power(ctx: &Arc<CycloContext>, k: i64) -> CycloElement {
    ctx.q_half_power(k)
}

/// Evaluate at ω = exp(2πi / 4(p+1)).
pub fn embed(ctx: &Arc<CycloContext>, z: &CycloElement) -> Complex64 {
    ctx.embed(z)
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

/// An element of Q(ω) in the power basis 1, ω, ..., ω^(d-1).
///
/// Elements built from plain rationals carry no context; they combine with any
/// field element. Coefficient vectors are reduced and trimmed, so equality is
/// coefficientwise.
#[derive(Clone)]
pub struct CycloElement {
    coeffs: Vec<BigRational>,
    field: Option<Arc<CycloContext>>,
}

impl CycloElement {
    pub fn from_rational(r: BigRational) -> Self {
        let coeffs = if r.is_zero() { Vec::new() } else { vec![r] };
        CycloElement { coeffs, field: None }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn from_reduced(mut coeffs: Vec<BigRational>, field: Arc<CycloContext>) -> Self {
        trim(&mut coeffs);
        CycloElement {
            coeffs,
            field: Some(field),
        }
    }

    /// Builds an element from power-basis coefficients of arbitrary length,
    /// reducing modulo the cyclotomic polynomial.
    pub fn from_coeffs(field: &Arc<CycloContext>, coeffs: Vec<BigRational>) -> Self {
        let mut acc = vec![BigRational::zero(); field.degree()];
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &field.powers[k % field.order];
            for (a, r) in acc.iter_mut().zip(row) {
                if !r.is_zero() {
                    *a += &c * r;
                }
            }
        }
        Self::from_reduced(acc, field.clone())
    }

    fn with_field(mut self, field: Arc<CycloContext>) -> Self {
        self.field = Some(field);
        self
    }

    /// Reduced power-basis coefficients, trimmed of trailing zeros.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn field(&self) -> Option<&Arc<CycloContext>> {
        self.field.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn merged_field(&self, other: &Self) -> Option<Arc<CycloContext>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                debug_assert!(
                    Arc::ptr_eq(a, b) || (a.order == b.order && a.root_index == b.root_index),
                    "mixing elements of different cyclotomic fields"
                );
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        }
    }

    fn scaled(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return CycloElement {
                coeffs: Vec::new(),
                field: self.field.clone(),
            };
        }
        CycloElement {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            field: self.field.clone(),
        }
    }

    /// Complex conjugation, ω ↦ ω^(-1).
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let field = self.field.as_ref().expect("non-rational element has a field");
        let mut acc = vec![BigRational::zero(); field.degree()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &field.powers[(field.order - k) % field.order];
            for (a, r) in acc.iter_mut().zip(row) {
                if !r.is_zero() {
                    *a += c * r;
                }
            }
        }
        Self::from_reduced(acc, field.clone())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.coeffs.is_empty(), "inverse of zero in the cyclotomic field");
        if self.is_rational() {
            return CycloElement {
                coeffs: vec![BigRational::one() / &self.coeffs[0]],
                field: self.field.clone(),
            };
        }
        let field = self.field.as_ref().expect("non-rational element has a field");
        let a = QPoly::new(self.coeffs.clone());
        let (g, s, _) = a.ext_gcd(&field.modulus);
        assert_eq!(g, QPoly::one(), "cyclotomic modulus is irreducible");
        let (_, r) = s.div_rem(&field.modulus);
        Self::from_reduced(r.into_coeffs(), field.clone())
    }

    pub fn pow_i(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = CycloElement {
            coeffs: vec![BigRational::one()],
            field: self.field.clone(),
        };
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }

    /// Numeric value at the principal embedding; rational elements need no
    /// context.
    pub fn to_complex(&self) -> Complex64 {
        match &self.field {
            Some(f) => f.embed(self),
            None => Complex64::new(self.coeffs.first().map(rational_to_f64).unwrap_or(0.0), 0.0),
        }
    }
}

fn trim(coeffs: &mut Vec<BigRational>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for CycloElement {}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "w")?;
                    } else {
                        write!(f, "w^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Zero for CycloElement {
    fn zero() -> Self {
        CycloElement {
            coeffs: Vec::new(),
            field: None,
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for CycloElement {
    fn one() -> Self {
        CycloElement {
            coeffs: vec![BigRational::one()],
            field: None,
        }
    }
}

impl Add for CycloElement {
    type Output = CycloElement;

    fn add(self, rhs: Self) -> Self {
        let field = self.merged_field(&rhs);
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        trim(&mut long);
        CycloElement {
            coeffs: long,
            field,
        }
    }
}

impl AddAssign for CycloElement {
    fn add_assign(&mut self, rhs: Self) {
        let lhs = std::mem::replace(self, CycloElement::zero());
        *self = lhs + rhs;
    }
}

impl Neg for CycloElement {
    type Output = CycloElement;

    fn neg(self) -> Self {
        CycloElement {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            field: self.field,
        }
    }
}

impl Sub for CycloElement {
    type Output = CycloElement;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for CycloElement {
    type Output = CycloElement;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;

    fn mul(self, rhs: &CycloElement) -> CycloElement {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return CycloElement {
                coeffs: Vec::new(),
                field: self.merged_field(rhs),
            };
        }
        if self.is_rational() {
            let mut out = rhs.scaled(&self.coeffs[0]);
            out.field = self.merged_field(rhs);
            return out;
        }
        if rhs.is_rational() {
            let mut out = self.scaled(&rhs.coeffs[0]);
            out.field = self.merged_field(rhs);
            return out;
        }
        let field = self.merged_field(rhs).expect("non-rational elements have a field");
        let d = field.degree();
        let mut prod = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out = vec![BigRational::zero(); d];
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < d {
                out[k] += c;
            } else {
                for (o, r) in out.iter_mut().zip(&field.powers[k]) {
                    if !r.is_zero() {
                        *o += &c * r;
                    }
                }
            }
        }
        CycloElement::from_reduced(out, field)
    }
}

impl Div for CycloElement {
    type Output = CycloElement;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        &self * &rhs.inv()
    }
}

/// JSON form of a field element: `{"order": 4(p+1), "coeffs": ["n/d", ...]}`
/// with exactly deg Φ coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloJson {
    pub order: usize,
    pub coeffs: Vec<String>,
}

/// JSON form of an embedded value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

/// Always `numer/denom`, including integers.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl CycloContext {
    pub fn to_json(&self, z: &CycloElement) -> CycloJson {
        let mut coeffs: Vec<String> = z.coeffs.iter().map(rational_string).collect();
        coeffs.resize(self.degree(), "0/1".to_string());
        CycloJson {
            order: self.order,
            coeffs,
        }
    }
}

pub fn from_json(ctx: &Arc<CycloContext>, json: &CycloJson) -> Result<CycloElement> {
    if json.order != ctx.order() {
        return Err(Error::InvalidParameter(format!(
            "element of order {} does not belong to the field of order {}",
            json.order,
            ctx.order()
        )));
    }
    if json.coeffs.len() > ctx.degree() {
        return Err(Error::InvalidParameter("too many coefficients".into()));
    }
    let coeffs = json
        .coeffs
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(CycloElement::from_reduced(coeffs, ctx.clone()))
}

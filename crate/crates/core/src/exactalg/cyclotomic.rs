//! Elements of cyclotomic fields `Q(ζ_N)` in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}`, reduced modulo the cyclotomic polynomial `Φ_N`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::Rational;

fn poly_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n > 0, "conductor must be positive");
    if let Some(p) = poly_cache().read().expect("poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = divide_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    let p = Arc::new(p);
    poly_cache().write().expect("poisoned").insert(n, p.clone());
    p
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// A root of unity `exp(2πi·r)` with `r ∈ [0, 1)` rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootOfUnity(Rational);

impl RootOfUnity {
    pub fn new(r: Rational) -> Self {
        let frac = r - r.floor();
        Self(frac)
    }

    pub fn one() -> Self {
        Self(Rational::zero())
    }

    /// `exp(2πi·k/n)`.
    pub fn from_fraction(k: i64, n: i64) -> Self {
        Self::new(Rational::new(k, n))
    }

    pub fn exponent(&self) -> Rational {
        self.0
    }

    pub fn order(&self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.0 + other.0)
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.0)
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::new(self.0 * Rational::from_integer(e))
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let n = self.order();
        Cyclotomic::root_of_unity(n, *self.0.numer())
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = *self.0.denom();
        let k = *self.0.numer();
        match (n, k) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (_, 1) => write!(f, "ζ{n}"),
            _ => write!(f, "ζ{n}^{k}"),
        }
    }
}

/// An element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self { conductor: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(x: i64) -> Self {
        Self { conductor: 1, coeffs: vec![BigRational::from_integer(BigInt::from(x))] }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `ζ_n^k` with `ζ_n = exp(2πi/n)`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        Self::from_poly(n, poly)
    }

    /// Element of `Q(ζ_n)` from an arbitrary-degree polynomial in `ζ_n`.
    pub fn from_poly(n: u64, poly: Vec<BigRational>) -> Self {
        let coeffs = reduce(poly, &cyclotomic_polynomial(n));
        let mut out = Self { conductor: n, coeffs };
        out.normalize();
        out
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn normalize(&mut self) {
        if self.conductor != 1 && self.is_rational() {
            self.coeffs.truncate(1);
            self.conductor = 1;
        }
    }

    /// The same number viewed in `Q(ζ_m)`; requires `N | m`.
    pub fn embed(&self, m: u64) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(self.conductor) {
            return Err(Error::ConductorMismatch { from: self.conductor, to: m });
        }
        Ok(self.embed_unchecked(m))
    }

    fn embed_unchecked(&self, m: u64) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        // embedding may not stay in normal form when the value is rational
        let coeffs = reduce(poly, &cyclotomic_polynomial(m));
        Self { conductor: m, coeffs }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.conductor.lcm(&other.conductor);
        (self.embed_unchecked(m), other.embed_unchecked(m))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() };
        out.normalize();
        out
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[(n - j) % n] += c;
        }
        Self::from_poly(self.conductor, poly)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let modulus: Vec<BigRational> =
            cyclotomic_polynomial(self.conductor).iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let inverse = poly_inverse_mod(&self.coeffs, &modulus).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_poly(self.conductor, inverse))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Numerical value at `ζ = exp(2πi/N)` as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let x = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
            re += x * angle.cos();
            im += x * angle.sin();
        }
        (re, im)
    }

    /// The same value in the smallest field `Q(ζ_m)` containing it.
    pub fn minimal_form(&self) -> Self {
        if self.conductor <= 2 {
            return self.clone();
        }
        let n = self.conductor;
        for m in (1..n).filter(|m| n.is_multiple_of(*m)) {
            let phi = totient(m) as usize;
            let basis: Vec<Self> = (0..phi).map(|j| Self::root_of_unity(m, j as i64).embed_unchecked(n)).collect();
            if let Some(coeffs) = express_in_basis(&basis, self) {
                return Self::from_poly(m, coeffs);
            }
        }
        self.clone()
    }

    /// `Some((sign, k))` when the value is `sign · ζ_N^k`.
    fn as_signed_root(&self) -> Option<(bool, i64)> {
        let n = self.conductor;
        if n <= 2 {
            return None;
        }
        let neg = -self;
        (0..n as i64).find_map(|k| {
            let z = Self::root_of_unity(n, k);
            if z == *self {
                Some((false, k))
            } else if z == neg {
                Some((true, k))
            } else {
                None
            }
        })
    }
}

/// Coefficients `c` with `Σ c_j basis_j = target`, all living in one field.
fn express_in_basis(basis: &[Cyclotomic], target: &Cyclotomic) -> Option<Vec<BigRational>> {
    let rows = target.coeffs.len();
    let cols = basis.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            basis
                .iter()
                .map(|b| b.coeffs.get(r).cloned().unwrap_or_else(BigRational::zero))
                .chain(std::iter::once(target.coeffs[r].clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in &mut m[row] {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pr = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][cols].clone();
    }
    Some(out)
}

/// Remainder of `poly` modulo the monic integer polynomial `modulus`.
fn reduce(mut poly: Vec<BigRational>, modulus: &[i64]) -> Vec<BigRational> {
    let d = modulus.len() - 1;
    if poly.len() > d {
        for k in (d..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[k], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (i, &m) in modulus.iter().take(d).enumerate() {
                if m != 0 {
                    poly[k - d + i] -= &c * BigRational::from_integer(m.into());
                }
            }
        }
    }
    poly.resize(d.max(1), BigRational::zero());
    poly
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = degree(b).expect("nonzero divisor");
    let mut r = a.to_vec();
    let mut q = vec![BigRational::zero(); a.len().max(1)];
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (i, bi) in b.iter().enumerate().take(db + 1) {
            r[shift + i] -= &c * bi;
        }
        q[shift] += c;
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero) - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut t0, mut t1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while degree(&r1).is_some() {
        let (q, r) = poly_divrem(&r0, &r1);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is the gcd, a nonzero constant when a is invertible
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].clone();
    Some(t0.into_iter().map(|x| x / &c).collect())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        let mut out = Cyclotomic {
            conductor: a.conductor,
            coeffs: a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect(),
        };
        out.normalize();
        out
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let (a, b) = self.common(rhs);
        Cyclotomic::from_poly(a.conductor, poly_mul(&a.coeffs, &b.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyclotomic {
    /// Canonical rendering: minimal conductor, then either a rational, a
    /// signed root of unity `±ζN^k`, or the power-basis sum.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.minimal_form();
        if let Some(q) = x.as_rational() {
            return write!(f, "{}", fmt_rational(&q));
        }
        let n = x.conductor;
        if let Some((neg, k)) = x.as_signed_root() {
            let sign = if neg { "-" } else { "" };
            return if k == 1 { write!(f, "{sign}ζ{n}") } else { write!(f, "{sign}ζ{n}^{k}") };
        }
        let mut first = true;
        for (j, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            first = false;
            let power = match j {
                0 => String::new(),
                1 => format!("ζ{n}"),
                _ => format!("ζ{n}^{j}"),
            };
            match (j, abs.is_one()) {
                (0, _) => write!(f, "{}", fmt_rational(&abs))?,
                (_, true) => write!(f, "{power}")?,
                (_, false) => write!(f, "{}*{power}", fmt_rational(&abs))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn primitive_cube_roots_sum_to_minus_one() {
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_int(-1));
    }

    #[test]
    fn i_squared() {
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_int(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta3() {
        let a = &Cyclotomic::one() + &z(3, 1);
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, Cyclotomic::one());
        assert_eq!(inv, -z(3, 1));
        assert_eq!(Cyclotomic::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn embedding_preserves_value() {
        let a = &z(3, 1) + &Cyclotomic::from_int(2);
        let b = a.embed(12).unwrap();
        assert_eq!(b.conductor(), 12);
        assert_eq!(a, b);
        assert_eq!(a.embed(10).unwrap_err(), Error::ConductorMismatch { from: 3, to: 10 });
        // ζ_12^4 = ζ_3
        assert_eq!(z(12, 4), z(3, 1));
        assert_eq!(z(6, 3), Cyclotomic::from_int(-1));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(5, 2).conj(), z(5, 3));
        let x = &z(8, 1) + &Cyclotomic::from_int(3);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn rendering() {
        assert_eq!(z(3, 1).to_string(), "ζ3");
        assert_eq!(z(3, 2).to_string(), "ζ3^2");
        assert_eq!(z(6, 1).to_string(), "-ζ3^2");
        assert_eq!(z(12, 4).to_string(), "ζ3");
        assert_eq!((&z(3, 1) + &z(3, 2)).to_string(), "-1");
        assert_eq!(Cyclotomic::from_ratio(1, 2).to_string(), "1/2");
        assert_eq!((&z(5, 1) + &Cyclotomic::from_int(2)).to_string(), "2 + ζ5");
        assert_eq!(RootOfUnity::from_fraction(2, 3).to_string(), "ζ3^2");
        assert_eq!(RootOfUnity::from_fraction(1, 2).to_string(), "-1");
    }

    #[test]
    fn root_of_unity_arithmetic() {
        let a = RootOfUnity::from_fraction(1, 3);
        let b = RootOfUnity::from_fraction(2, 3);
        assert!(a.mul(&b).is_one());
        assert_eq!(a.inv(), b);
        assert_eq!(a.pow(4), a);
        assert_eq!(a.to_cyclotomic(), z(3, 1));
    }

    #[test]
    fn powers() {
        assert_eq!(z(7, 1).pow(7).unwrap(), Cyclotomic::one());
        assert_eq!(z(7, 1).pow(-1).unwrap(), z(7, 6));
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use super::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::intmat::IVec;

/// Sparse Laurent polynomial in `k` variables with cyclotomic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<IVec, Cyclotomic>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Cyclotomic::one())
    }

    pub fn constant(nvars: usize, c: Cyclotomic) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponent: IVec, c: Cyclotomic) -> Self {
        let mut out = Self::zero(exponent.len());
        if !c.is_zero() {
            out.terms.insert(exponent, c);
        }
        out
    }

    /// The variable `t_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Cyclotomic::one())
    }

    /// Builds from `(exponent, coefficient)` pairs, collecting equal exponents.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (IVec, Cyclotomic)>) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: IVec, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&IVec, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i64]) -> Cyclotomic {
        self.terms.get(e).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn constant_term(&self) -> Cyclotomic {
        self.coeff(&vec![0; self.nvars])
    }

    /// Largest `ℓ¹`-norm of an exponent; `0` for constants and zero.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|x| x.unsigned_abs() as u32).sum()).max().unwrap_or(0)
    }

    /// Term with the greatest exponent.
    pub fn leading(&self) -> Option<(&IVec, &Cyclotomic)> {
        self.terms.iter().next_back()
    }

    /// Scaled so that the leading coefficient is `1`; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero coefficient")),
        }
    }

    /// Smallest `N` with every coefficient in `Q(ζ_N)`.
    pub fn conductor(&self) -> u64 {
        self.terms.values().fold(1, |acc, c| acc.lcm(&c.conductor()))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::VariableMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: IVec = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂t_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e[i] != 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[i] -= 1;
            (e2, c * &Cyclotomic::from_int(e[i]))
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Value at a point with nonzero coordinates.
    pub fn evaluate(&self, point: &[Cyclotomic]) -> Result<Cyclotomic> {
        if point.len() != self.nvars {
            return Err(Error::VariableMismatch(self.nvars, point.len()));
        }
        let mut total = Cyclotomic::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    term = &term * &x.pow(k)?;
                }
            }
            total = &total + &term;
        }
        Ok(total)
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Per-variable minimum exponent over all terms.
    pub fn min_exponents(&self) -> IVec {
        (0..self.nvars).map(|i| self.terms.keys().map(|e| e[i]).min().unwrap_or(0)).collect()
    }

    pub fn variable_name(nvars: usize, i: usize) -> String {
        if nvars == 1 {
            "t".to_string()
        } else {
            format!("t{}", i + 1)
        }
    }

    pub(crate) fn monomial_string(e: &[i64]) -> String {
        let names: Vec<String> = (0..e.len()).map(|i| Self::variable_name(e.len(), i)).collect();
        Self::named_monomial(e, &names)
    }

    fn named_monomial(e: &[i64], names: &[String]) -> String {
        e.iter()
            .zip(names)
            .filter(|(&k, _)| k != 0)
            .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Rendering with custom variable names, e.g. `g1^2 - 2*g2`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let mono = Self::named_monomial(e, names);
            let s = c.to_string();
            let (negative, body) = match (c.is_rational() || !s.contains(' '), s.strip_prefix('-')) {
                (true, Some(rest)) => (true, rest.to_string()),
                (true, None) => (false, s),
                (false, _) => (false, format!("({s})")),
            };
            let term = match (mono.is_empty(), body.as_str()) {
                (true, _) => body.clone(),
                (false, "1") => mono,
                (false, _) => format!("{body}*{mono}"),
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push_str(&format!("-{term}")),
                (true, false) => out.push_str(&term),
                (false, true) => out.push_str(&format!(" - {term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Terms in descending exponent order, e.g. `t^2 + 2*t + 2 + 2*t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| Self::variable_name(self.nvars, i)).collect();
        write!(f, "{}", self.to_string_with(&names))
    }
}

impl<'a> Add<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_add(rhs).expect("variable counts agree")
    }
}

impl<'a> Sub<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_sub(rhs).expect("variable counts agree")
    }
}

impl<'a> Mul<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_mul(rhs).expect("variable counts agree")
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

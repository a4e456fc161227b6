use std::fmt;

use super::cyclotomic::{Cyclotomic, RootOfUnity};
use super::laurent::LaurentPolynomial;
use crate::error::{Error, Result};
use crate::intmat::{self, IMat, IVec};

/// A map of the parameter torus `t_i ↦ c_i · ∏_j t_j^{m_ij}` with `c_i`
/// roots of unity and `(m_ij)` invertible over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialAffineMap {
    shifts: Vec<RootOfUnity>,
    exponents: IMat,
}

impl MonomialAffineMap {
    pub fn new(shifts: Vec<RootOfUnity>, exponents: IMat) -> Result<Self> {
        let k = shifts.len();
        if exponents.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: exponents.len() });
        }
        if let Some(row) = exponents.iter().find(|r| r.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, got: row.len() });
        }
        if k > 0 && intmat::det(&exponents).abs() != 1 {
            return Err(Error::InvalidLattice("exponent matrix is not unimodular".into()));
        }
        Ok(Self { shifts, exponents })
    }

    pub fn identity(k: usize) -> Self {
        Self { shifts: vec![RootOfUnity::one(); k], exponents: intmat::identity(k) }
    }

    pub fn nvars(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[RootOfUnity] {
        &self.shifts
    }

    pub fn exponents(&self) -> &IMat {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nvars())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let k = self.nvars();
        let exponents = intmat::mat_mul(&self.exponents, &other.exponents);
        let shifts = (0..k)
            .map(|i| (0..k).fold(self.shifts[i], |acc, j| acc.mul(&other.shifts[j].pow(self.exponents[i][j]))))
            .collect();
        Self { shifts, exponents }
    }

    pub fn inverse(&self) -> Self {
        let inv = intmat::integer_inverse(&self.exponents).expect("unimodular");
        let k = self.nvars();
        // t = c · s^M  ⇒  s = (c^{-1} t)^{M^{-1}}
        let shifts = (0..k)
            .map(|i| (0..k).fold(RootOfUnity::one(), |acc, j| acc.mul(&self.shifts[j].inv().pow(inv[i][j]))))
            .collect();
        Self { shifts, exponents: inv }
    }

    /// Image of a point with nonzero cyclotomic coordinates.
    pub fn apply(&self, point: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
        if point.len() != self.nvars() {
            return Err(Error::VariableMismatch(self.nvars(), point.len()));
        }
        self.exponents
            .iter()
            .zip(&self.shifts)
            .map(|(row, c)| row.iter().zip(point).try_fold(c.to_cyclotomic(), |acc, (&m, x)| Ok(&acc * &x.pow(m)?)))
            .collect()
    }

    /// Number of fixed points on the torus, `|det(M − I)|`; `None` when the
    /// fixed locus is positive-dimensional or empty.
    pub fn fixed_point_count(&self) -> Option<u64> {
        let k = self.nvars();
        let m: IMat = (0..k).map(|i| (0..k).map(|j| self.exponents[i][j] - i64::from(i == j)).collect()).collect();
        let d = intmat::det(&m);
        (d != 0).then_some(d.unsigned_abs())
    }

    /// Images of the coordinate functions, e.g. `t ↦ -t^-1`.
    pub fn images(&self) -> Vec<LaurentPolynomial> {
        self.exponents
            .iter()
            .zip(&self.shifts)
            .map(|(row, c)| LaurentPolynomial::monomial(row.clone(), c.to_cyclotomic()))
            .collect()
    }
}

impl fmt::Display for MonomialAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.nvars();
        let parts: Vec<String> = self
            .images()
            .iter()
            .enumerate()
            .map(|(i, img)| format!("{} ↦ {}", LaurentPolynomial::variable_name(k, i), img))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// `p ∘ φ`, the pull-back of `p` along `φ`.
pub fn substitute(p: &LaurentPolynomial, map: &MonomialAffineMap) -> Result<LaurentPolynomial> {
    let k = map.nvars();
    if p.nvars() != k {
        return Err(Error::VariableMismatch(p.nvars(), k));
    }
    let terms = p.terms().map(|(e, c)| {
        let exp: IVec = intmat::vec_mat(e, &map.exponents);
        let unit = e.iter().zip(&map.shifts).fold(RootOfUnity::one(), |acc, (&ei, s)| acc.mul(&s.pow(ei)));
        let coeff = if unit.is_one() { c.clone() } else { c * &unit.to_cyclotomic() };
        (exp, coeff)
    });
    Ok(LaurentPolynomial::from_terms(k, terms))
}

/// Average of `p` over a finite group of maps.
pub fn reynolds(p: &LaurentPolynomial, group: &[MonomialAffineMap]) -> Result<LaurentPolynomial> {
    check_group(group)?;
    let mut sum = LaurentPolynomial::zero(p.nvars());
    for g in group {
        sum = sum.try_add(&substitute(p, g)?)?;
    }
    Ok(sum.scale(&Cyclotomic::from_ratio(1, group.len() as i64)))
}

fn check_group(group: &[MonomialAffineMap]) -> Result<()> {
    if group.is_empty() || !group.iter().any(MonomialAffineMap::is_identity) {
        return Err(Error::NotAGroup);
    }
    for a in group {
        for b in group {
            if !group.contains(&a.compose(b)) {
                return Err(Error::NotAGroup);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> LaurentPolynomial {
        &LaurentPolynomial::var(1, 0) + &LaurentPolynomial::monomial(vec![-1], Cyclotomic::one())
    }

    fn inversion(shift: RootOfUnity) -> MonomialAffineMap {
        MonomialAffineMap::new(vec![shift], vec![vec![-1]]).unwrap()
    }

    #[test]
    fn identity_substitution() {
        assert_eq!(substitute(&y(), &MonomialAffineMap::identity(1)).unwrap(), y());
    }

    #[test]
    fn inversion_fixes_y() {
        assert_eq!(substitute(&y(), &inversion(RootOfUnity::one())).unwrap(), y());
    }

    #[test]
    fn twisted_inversion_negates_y() {
        let minus = RootOfUnity::from_fraction(1, 2);
        assert_eq!(substitute(&y(), &inversion(minus)).unwrap(), -&y());
        assert_eq!(inversion(minus).to_string(), "t ↦ -t^-1");
    }

    #[test]
    fn reynolds_examples() {
        let t = LaurentPolynomial::var(1, 0);
        let group = [MonomialAffineMap::identity(1), inversion(RootOfUnity::one())];
        let avg = reynolds(&t, &group).unwrap();
        assert_eq!(avg, y().scale(&Cyclotomic::from_ratio(1, 2)));
        assert_eq!(reynolds(&y(), &group).unwrap(), y());
        assert_eq!(reynolds(&t, &[MonomialAffineMap::identity(1)]).unwrap(), t);
        let rotation = MonomialAffineMap::new(vec![RootOfUnity::from_fraction(1, 3)], vec![vec![1]]).unwrap();
        let not_closed = [MonomialAffineMap::identity(1), rotation];
        assert_eq!(reynolds(&t, &not_closed).unwrap_err(), Error::NotAGroup);
    }

    #[test]
    fn composition_and_inverse() {
        let a = MonomialAffineMap::new(
            vec![RootOfUnity::from_fraction(1, 3), RootOfUnity::from_fraction(1, 2)],
            vec![vec![1, 1], vec![0, 1]],
        )
        .unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(a.inverse().compose(&a).is_identity());
        assert!(MonomialAffineMap::new(vec![RootOfUnity::one()], vec![vec![2]]).is_err());
    }

    #[test]
    fn fixed_points() {
        assert_eq!(inversion(RootOfUnity::one()).fixed_point_count(), Some(2));
        assert_eq!(MonomialAffineMap::identity(1).fixed_point_count(), None);
    }
}

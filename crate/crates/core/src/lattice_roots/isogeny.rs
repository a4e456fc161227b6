use std::fmt;

use num_traits::Zero;

use super::root_system::{RootSystem, TypeLabel};
use crate::error::{Error, Result};
use crate::intmat::{self, IMat, IVec, Rational};
use crate::pseudolevi::TorusPoint;

/// Which of the named lattices a character lattice is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeForm {
    SimplyConnected,
    Adjoint,
    /// `ZΦ + Zω_1` in type D.
    SpecialOrthogonal,
    /// `ZΦ + Zω_ℓ` (or `ω_{ℓ-1}`) in type `D_ℓ`, `ℓ` even.
    HalfSpin,
    Intermediate,
}

/// The character lattice `X` of the torus, `ZΦ ⊆ X ⊆ Λ`.
///
/// Characters are written in the basis of `X` (the rows of [`basis`]),
/// cocharacters in the dual basis of `Y = Hom(X, Z)`; the pairing is then the
/// plain dot product.
///
/// [`basis`]: IsogenyDescriptor::basis
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyDescriptor {
    label: TypeLabel,
    rank: usize,
    basis: IMat,
    basis_inv: Vec<Vec<Rational>>,
    form: LatticeForm,
}

fn simple_root_weights(rs: &RootSystem) -> IMat {
    let r = rs.rank();
    (0..r).map(|i| (0..r).map(|j| rs.cartan()[j][i]).collect()).collect()
}

fn fundamental(rank: usize, i: usize) -> IVec {
    let mut e = vec![0; rank];
    e[i] = 1;
    e
}

impl IsogenyDescriptor {
    /// Lattice generated by `generators`, given in fundamental-weight
    /// coordinates. The lattice must contain every simple root.
    pub fn new(rs: &RootSystem, generators: &IMat) -> Result<Self> {
        let r = rs.rank();
        if let Some(g) = generators.iter().find(|g| g.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, got: g.len() });
        }
        let basis = intmat::hermite_rows(generators, r);
        if basis.len() != r {
            return Err(Error::InvalidLattice(format!(
                "generators span a lattice of rank {} instead of {r}",
                basis.len()
            )));
        }
        let basis_inv = intmat::rational_inverse(&basis).expect("full rank");
        let mut out = Self { label: rs.type_label(), rank: r, basis, basis_inv, form: LatticeForm::Intermediate };
        for (i, w) in simple_root_weights(rs).iter().enumerate() {
            if out.char_coords(w).is_none() {
                return Err(Error::InvalidLattice(format!("simple root α{} is not in the lattice", i + 1)));
            }
        }
        out.form = out.classify(rs);
        Ok(out)
    }

    pub fn simply_connected(rs: &RootSystem) -> Self {
        Self::new(rs, &intmat::identity(rs.rank())).expect("weight lattice is valid")
    }

    pub fn adjoint(rs: &RootSystem) -> Self {
        Self::new(rs, &simple_root_weights(rs)).expect("root lattice is valid")
    }

    /// Named forms: `sc`, `adjoint`, `SO`, `HSpin`, `PSp`, `PSO`.
    pub fn named(rs: &RootSystem, name: &str) -> Result<Self> {
        let r = rs.rank();
        let unknown = || Error::UnknownIsogeny { name: name.to_string(), type_label: rs.name() };
        let with = |extra: IVec| {
            let mut gens = simple_root_weights(rs);
            gens.push(extra);
            Self::new(rs, &gens)
        };
        match (name, rs.type_label()) {
            ("sc", _) => Ok(Self::simply_connected(rs)),
            ("adjoint", _) => Ok(Self::adjoint(rs)),
            ("SO", TypeLabel::B) | ("PSp", TypeLabel::C) | ("PSO", TypeLabel::D) => Ok(Self::adjoint(rs)),
            ("SO", TypeLabel::D) => with(fundamental(r, 0)),
            ("HSpin", TypeLabel::D) if r.is_multiple_of(2) => with(fundamental(r, r - 1)),
            _ => Err(unknown()),
        }
    }

    fn classify(&self, rs: &RootSystem) -> LatticeForm {
        let r = self.rank;
        let same = |gens: IMat| intmat::hermite_rows(&gens, r) == self.basis;
        if same(intmat::identity(r)) {
            return LatticeForm::SimplyConnected;
        }
        if same(simple_root_weights(rs)) {
            return LatticeForm::Adjoint;
        }
        if self.label == TypeLabel::D {
            let plus = |i: usize| {
                let mut g = simple_root_weights(rs);
                g.push(fundamental(r, i));
                g
            };
            if same(plus(0)) {
                return LatticeForm::SpecialOrthogonal;
            }
            if r.is_multiple_of(2) && (same(plus(r - 1)) || same(plus(r - 2))) {
                return LatticeForm::HalfSpin;
            }
        }
        LatticeForm::Intermediate
    }

    pub fn type_label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Rows of the Hermite basis of `X`, in fundamental-weight coordinates.
    pub fn basis(&self) -> &IMat {
        &self.basis
    }

    pub fn form(&self) -> LatticeForm {
        self.form
    }

    pub fn is_simply_connected(&self) -> bool {
        self.form == LatticeForm::SimplyConnected
    }

    pub fn is_adjoint(&self) -> bool {
        self.form == LatticeForm::Adjoint
    }

    /// One of `PSp_{2ℓ}`, `HSpin_{2ℓ}`, `PSO_{2ℓ}`.
    pub fn is_symplectic_or_orthogonal_quotient(&self) -> bool {
        matches!(
            (self.label, self.form),
            (TypeLabel::C, LatticeForm::Adjoint)
                | (TypeLabel::D, LatticeForm::Adjoint)
                | (TypeLabel::D, LatticeForm::HalfSpin)
        )
    }

    /// Classical name of the group, e.g. `PSp10` or `HSpin8`.
    pub fn group_name(&self) -> String {
        let r = self.rank;
        if matches!((self.label, r), (TypeLabel::G, 2) | (TypeLabel::F, 4) | (TypeLabel::E, 8)) {
            return format!("{}{r}", self.label);
        }
        let (prefix, n) = match (self.label, self.form) {
            (TypeLabel::A, LatticeForm::SimplyConnected) => ("SL", r + 1),
            (TypeLabel::A, LatticeForm::Adjoint) => ("PGL", r + 1),
            (TypeLabel::B, LatticeForm::SimplyConnected) => ("Spin", 2 * r + 1),
            (TypeLabel::B, LatticeForm::Adjoint) => ("SO", 2 * r + 1),
            (TypeLabel::C, LatticeForm::SimplyConnected) => ("Sp", 2 * r),
            (TypeLabel::C, LatticeForm::Adjoint) => ("PSp", 2 * r),
            (TypeLabel::D, LatticeForm::SimplyConnected) => ("Spin", 2 * r),
            (TypeLabel::D, LatticeForm::Adjoint) => ("PSO", 2 * r),
            (TypeLabel::D, LatticeForm::SpecialOrthogonal) => ("SO", 2 * r),
            (TypeLabel::D, LatticeForm::HalfSpin) => ("HSpin", 2 * r),
            (l, LatticeForm::SimplyConnected) => return format!("{l}{r}_sc"),
            (l, LatticeForm::Adjoint) => return format!("{l}{r}_ad"),
            (l, _) => return format!("{l}{r}_X{}", self.index()),
        };
        format!("{prefix}{n}")
    }

    /// `[Λ : X]`.
    pub fn index(&self) -> u64 {
        intmat::det(&self.basis).unsigned_abs()
    }

    /// Coordinates in the basis of `X` of a weight, if it lies in `X`.
    pub fn char_coords(&self, weight: &[i64]) -> Option<IVec> {
        let r = self.rank;
        (0..r)
            .map(|j| {
                let x: Rational = (0..r).map(|i| Rational::from_integer(weight[i]) * self.basis_inv[i][j]).sum();
                x.is_integer().then(|| x.to_integer())
            })
            .collect()
    }

    pub fn contains(&self, weight: &[i64]) -> bool {
        self.char_coords(weight).is_some()
    }

    /// Fundamental-weight coordinates of a character given in `X`-coordinates.
    pub fn weight_of(&self, chi: &[i64]) -> IVec {
        intmat::vec_mat(chi, &self.basis)
    }

    /// `X`-coordinates of every root, in the order of `rs.roots()`.
    pub fn root_chars(&self, rs: &RootSystem) -> Vec<IVec> {
        rs.roots().iter().map(|v| self.char_coords(&rs.to_weight_coords(v)).expect("roots lie in X")).collect()
    }

    /// `Y`-coordinates of every coroot, in the order of `rs.roots()`.
    pub fn coroot_cochars(&self, rs: &RootSystem) -> Vec<IVec> {
        (0..rs.roots().len()).map(|i| intmat::mat_vec(&self.basis, &rs.coroot(i))).collect()
    }

    /// Rational simple-coroot coordinates of a cocharacter in `Y`-coordinates.
    pub fn coroot_coords(&self, y: &[Rational]) -> Vec<Rational> {
        intmat::rat_mat_vec(&self.basis_inv, y)
    }
}

impl fmt::Display for IsogenyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group_name())
    }
}

/// Kernel of `T_sc → T_X`: all finite-order points of the simply connected
/// torus, in simple-coroot coordinates, on which every character of `X` is
/// trivial. Sorted by coordinates; the identity comes first.
pub fn isogeny_kernel(rs: &RootSystem, x: &IsogenyDescriptor) -> Vec<TorusPoint> {
    let r = rs.rank();
    let s = intmat::smith(x.basis(), r);
    let mut points = vec![vec![Rational::zero(); r]];
    for (i, &d) in s.diag.iter().enumerate() {
        if d.abs() <= 1 {
            continue;
        }
        let d = d.abs();
        let col: Vec<i64> = (0..r).map(|row| s.v[row][i]).collect();
        points = points
            .into_iter()
            .flat_map(|p| {
                let col = col.clone();
                (0..d).map(move |c| p.iter().zip(&col).map(|(a, &v)| *a + Rational::new(c * v, d)).collect::<Vec<_>>())
            })
            .collect();
    }
    let mut out: Vec<TorusPoint> = points.into_iter().map(TorusPoint::finite).collect();
    out.sort();
    out.dedup();
    out
}

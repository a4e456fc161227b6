//! Pseudo-Levi subgroups `G_Π` for `Π` a proper subset of the extended
//! diagram, their centers `Z(G_Π)`, and finite-order representatives for the
//! regular components `Z(G_Π)°s`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::exactalg::{LaurentPolynomial, RootOfUnity};
use crate::intmat::{self, IMat, IVec, Rational};
use crate::lattice_roots::{closed_subsystem, IsogenyDescriptor, RootSystem, Subsystem};
use crate::weyl::{Subgroup, WeylGroup};

fn frac(x: Rational) -> Rational {
    x - x.floor()
}

/// A point of the torus, written in the basis of `Y`: coordinate `i` is
/// `exp(2πi·q_i) · ∏_j t_j^{e_ij}` in free parameters `t_1, …, t_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint {
    finite: Vec<Rational>,
    exponents: Vec<IVec>,
    params: usize,
}

impl TorusPoint {
    /// Finite-order point, `q` taken modulo `1`.
    pub fn finite(q: Vec<Rational>) -> Self {
        let n = q.len();
        Self { finite: q.into_iter().map(frac).collect(), exponents: vec![Vec::new(); n], params: 0 }
    }

    /// `exp(2πi q) · ∏_j y_j(t_j)` for cocharacters `y_j` given as rows.
    pub fn generic(q: Vec<Rational>, cocharacters: &IMat) -> Self {
        let n = q.len();
        let k = cocharacters.len();
        let exponents = (0..n).map(|i| cocharacters.iter().map(|y| y[i]).collect()).collect();
        Self { finite: q.into_iter().map(frac).collect(), exponents, params: k }
    }

    pub fn dim(&self) -> usize {
        self.finite.len()
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn finite_part(&self) -> &[Rational] {
        &self.finite
    }

    /// Exponent of `t_j` in coordinate `i`.
    pub fn exponent(&self, i: usize, j: usize) -> i64 {
        self.exponents[i].get(j).copied().unwrap_or(0)
    }

    /// `χ(t)` for `χ` in `X`-coordinates: a root of unity times `t^m`.
    pub fn eval(&self, chi: &[i64]) -> (RootOfUnity, IVec) {
        let phase: Rational = chi.iter().zip(&self.finite).map(|(&a, q)| Rational::from_integer(a) * q).sum();
        let m = (0..self.params).map(|j| chi.iter().enumerate().map(|(i, &a)| a * self.exponent(i, j)).sum()).collect();
        (RootOfUnity::new(phase), m)
    }

    /// `χ(t)` as a one-term Laurent polynomial in the parameters.
    pub fn eval_laurent(&self, chi: &[i64]) -> LaurentPolynomial {
        let (c, m) = self.eval(chi);
        LaurentPolynomial::monomial(m, c.to_cyclotomic())
    }

    /// The order, when the point has no free parameters.
    pub fn order(&self) -> Option<u64> {
        let constant = self.exponents.iter().all(|e| e.iter().all(|&x| x == 0));
        constant.then(|| self.finite.iter().fold(1u64, |acc, q| acc.lcm(&(*q.denom() as u64))))
    }

    pub fn is_identity(&self) -> bool {
        self.order() == Some(1)
    }

    /// Image under a matrix acting on `Y`-coordinates.
    pub fn transform(&self, m: &IMat) -> Self {
        let n = self.dim();
        let finite =
            (0..n).map(|i| frac((0..n).map(|j| Rational::from_integer(m[i][j]) * self.finite[j]).sum())).collect();
        let exponents = (0..n)
            .map(|i| (0..self.params).map(|p| (0..n).map(|j| m[i][j] * self.exponent(j, p)).sum()).collect())
            .collect();
        Self { finite, exponents, params: self.params }
    }

    /// Specializes the parameters to roots of unity.
    pub fn specialize(&self, values: &[RootOfUnity]) -> Self {
        let q = (0..self.dim())
            .map(|i| (0..self.params).fold(self.finite[i], |acc, j| acc + values[j].exponent() * self.exponent(i, j)))
            .collect();
        Self::finite(q)
    }
}

/// Renders a finite-order point in simple-coroot coordinates, as
/// `α1^∨(ζ3^2)·α2^∨(1)`.
pub fn render_coroot_product(x: &IsogenyDescriptor, point: &TorusPoint) -> String {
    let c = x.coroot_coords(point.finite_part());
    c.iter().enumerate().map(|(i, &q)| format!("α{}^∨({})", i + 1, RootOfUnity::new(q))).collect::<Vec<_>>().join("·")
}

/// `{t : t^exponent = value}`, one hypersurface of non-regular parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExcludedLocus {
    pub exponent: IVec,
    pub value: RootOfUnity,
}

impl fmt::Display for ExcludedLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", LaurentPolynomial::monomial_string(&self.exponent), self.value)
    }
}

/// The weight-lattice bookkeeping shared by all the computations for one
/// group: the Weyl group, the character lattice, roots and coroots in its
/// coordinates, and the Weyl action on `Y`.
#[derive(Debug, Clone)]
pub struct Frame<'a> {
    pub weyl: &'a WeylGroup,
    pub lattice: &'a IsogenyDescriptor,
    pub root_chars: Vec<IVec>,
    pub coroot_cochars: Vec<IVec>,
    y_action: Vec<IMat>,
}

impl<'a> Frame<'a> {
    pub fn new(weyl: &'a WeylGroup, lattice: &'a IsogenyDescriptor) -> Self {
        let rs = weyl.root_system();
        let root_chars = lattice.root_chars(rs);
        let coroot_cochars = lattice.coroot_cochars(rs);
        let r = rs.rank();
        let gens: Vec<IMat> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|a| (0..r).map(|b| i64::from(a == b) - coroot_cochars[i][a] * root_chars[i][b]).collect())
                    .collect()
            })
            .collect();
        let y_action = weyl.represent(&gens);
        Self { weyl, lattice, root_chars, coroot_cochars, y_action }
    }

    pub fn root_system(&self) -> &RootSystem {
        self.weyl.root_system()
    }

    pub fn rank(&self) -> usize {
        self.root_system().rank()
    }

    /// Matrix of `w` on `Y`-coordinates.
    pub fn y_matrix(&self, w: usize) -> &IMat {
        &self.y_action[w]
    }

    /// Matrix of `w` on `X`-coordinates, the contragredient of the action on `Y`.
    pub fn x_matrix(&self, w: usize) -> IMat {
        intmat::transpose(&self.y_action[self.weyl.inverse(w)], self.rank())
    }
}

/// The center of `G_Π`: component group and identity component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterStructure {
    /// Nontrivial invariant factors of the torsion of `X / ZΠ`.
    pub invariant_factors: Vec<i64>,
    /// Basis of `Y(Z°)`, rows in `Y`-coordinates, Hermite normalized.
    pub y_zero: IMat,
    /// All `|Π|` diagonal entries of the Smith form.
    diag: Vec<i64>,
    /// Unimodular change of basis of `Y` whose last columns are `y_zero`.
    v: IMat,
    v_inv: IMat,
}

impl CenterStructure {
    pub fn dim(&self) -> usize {
        self.y_zero.len()
    }

    pub fn component_group_order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    fn rank_pi(&self) -> usize {
        self.diag.len()
    }

    /// All component labels `c` with `0 ≤ c_i < d_i`, ascending.
    pub fn components(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.diag {
            out = out.into_iter().flat_map(|c| (0..d).map(move |x| [c.clone(), vec![x]].concat())).collect();
        }
        out
    }

    /// Finite point of `Z(G_Π)` in the component `c`.
    pub fn component_point(&self, c: &[i64]) -> Vec<Rational> {
        let n = self.v.len();
        let mut qp = vec![Rational::zero(); n];
        for (i, (&ci, &d)) in c.iter().zip(&self.diag).enumerate() {
            qp[i] = Rational::new(ci, d);
        }
        (0..n).map(|i| frac((0..n).map(|j| Rational::from_integer(self.v[i][j]) * qp[j]).sum())).collect()
    }

    fn smith_coords(&self, q: &[Rational]) -> Vec<Rational> {
        let n = self.v_inv.len();
        (0..n).map(|i| (0..n).map(|j| Rational::from_integer(self.v_inv[i][j]) * q[j]).sum()).collect()
    }

    /// Component containing a finite point of `Z(G_Π)`.
    pub fn component_of(&self, q: &[Rational]) -> Vec<i64> {
        let qp = self.smith_coords(q);
        self.diag
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let x = qp[i] * Rational::from_integer(d);
                debug_assert!(x.is_integer(), "point outside the center");
                x.to_integer().rem_euclid(d)
            })
            .collect()
    }

    /// Whether a finite point of `T` lies in `Z°`.
    pub fn in_identity_component(&self, q: &[Rational]) -> bool {
        self.smith_coords(q).iter().take(self.rank_pi()).all(Rational::is_integer)
    }

    /// Coordinates of `q ∈ Y(Z°) ⊗ Q` in the basis `y_zero`.
    pub fn identity_component_coords(&self, q: &[Rational]) -> Vec<Rational> {
        self.smith_coords(q)[self.rank_pi()..].to_vec()
    }

    /// Coordinates of a cocharacter of `Z°` in the basis `y_zero`; `None`
    /// when it is not in `Y(Z°)`.
    pub fn cocharacter_coords(&self, y: &[i64]) -> Option<IVec> {
        let c = intmat::mat_vec(&self.v_inv, y);
        c[..self.rank_pi()].iter().all(|&x| x == 0).then(|| c[self.rank_pi()..].to_vec())
    }
}

/// Component group and identity component of `Z(G_Π)`.
pub fn center_structure(frame: &Frame<'_>, nodes: &[usize]) -> CenterStructure {
    let rs = frame.root_system();
    let ext = rs.extended_diagram();
    let r = rs.rank();
    let rows: IMat = nodes.iter().map(|&n| frame.root_chars[ext.node_roots[n]].clone()).collect();
    let (diag, mut v) = if rows.is_empty() {
        (Vec::new(), intmat::identity(r))
    } else {
        let s = intmat::smith(&rows, r);
        (s.diag[..s.rank].iter().map(|d| d.abs()).collect::<Vec<_>>(), s.v)
    };
    let rank = diag.len();
    let raw: IMat = (rank..r).map(|j| (0..r).map(|i| v[i][j]).collect()).collect();
    let y_zero = intmat::hermite_rows(&raw, r);
    for (k, y) in y_zero.iter().enumerate() {
        for i in 0..r {
            v[i][rank + k] = y[i];
        }
    }
    let v_inv = intmat::integer_inverse(&v).expect("unimodular");
    CenterStructure { invariant_factors: diag.iter().copied().filter(|&d| d > 1).collect(), y_zero, diag, v, v_inv }
}

/// `Z(G_Π)°s` for one component of the center, with a finite-order
/// representative `s` and the generic point in `k = dim Z°` parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedTorus {
    pub nodes: Vec<usize>,
    pub center: CenterStructure,
    /// Component label of the coset.
    pub component: Vec<i64>,
    /// Components of `Z(G_Π)` conjugate to this one under `W^Π`.
    pub orbit: Vec<Vec<i64>>,
    pub representative: TorusPoint,
    pub generic: TorusPoint,
    pub excluded: Vec<ExcludedLocus>,
}

impl ShiftedTorus {
    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn y_zero(&self) -> &IMat {
        &self.center.y_zero
    }

    /// Common conductor of the representative's values.
    pub fn conductor(&self) -> u64 {
        self.representative.order().unwrap_or(1)
    }

    /// For one parameter: the finitely many excluded values of `t`.
    pub fn excluded_values(&self) -> Option<Vec<RootOfUnity>> {
        if self.dim() != 1 {
            return None;
        }
        let mut out = BTreeSet::new();
        for locus in &self.excluded {
            let m = locus.exponent[0];
            for j in 0..m {
                out.insert(RootOfUnity::new((locus.value.exponent() + Rational::from_integer(j)) / m));
            }
        }
        Some(out.into_iter().collect())
    }

    /// Point of the coset at parameter values given as roots of unity.
    pub fn point_at(&self, values: &[RootOfUnity]) -> TorusPoint {
        self.generic.specialize(values)
    }

    /// Roots that are identically `1` on the coset.
    pub fn vanishing_roots(&self, frame: &Frame<'_>) -> Vec<usize> {
        (0..frame.root_chars.len())
            .filter(|&g| {
                let (c, m) = self.generic.eval(&frame.root_chars[g]);
                c.is_one() && m.iter().all(|&x| x == 0)
            })
            .collect()
    }
}

/// A pseudo-Levi subgroup `G_Π` up to `W`-conjugacy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoLevi {
    pub nodes: Vec<usize>,
    pub subsystem: Subsystem,
    pub center: CenterStructure,
    pub cosets: Vec<ShiftedTorus>,
    pub is_isolated: bool,
    pub is_levi: bool,
}

impl PseudoLevi {
    /// `{α1}`, `{α0, α2}`, `∅`.
    pub fn node_string(&self) -> String {
        node_string(&self.nodes)
    }
}

pub fn node_string(nodes: &[usize]) -> String {
    if nodes.is_empty() {
        return "∅".into();
    }
    format!("{{{}}}", nodes.iter().map(|n| format!("α{n}")).collect::<Vec<_>>().join(", "))
}

/// One representative `Π` per `W`-conjugacy class of the subsystems `ZΠ ∩ Φ`
/// of proper subsets of the extended diagram. Within a class the
/// representative avoids `α_0` when possible and is otherwise
/// lexicographically least; classes are sorted by size, then nodes.
pub fn enumerate_pseudo_levis(frame: &Frame<'_>) -> Vec<PseudoLevi> {
    let rs = frame.root_system();
    let n = rs.rank() + 1;
    let mut subsets: Vec<Vec<usize>> =
        (0u32..(1 << n) - 1).map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect()).collect();
    subsets.sort_by(|a, b| (a.first() == Some(&0)).cmp(&(b.first() == Some(&0))).then_with(|| a.cmp(b)));

    let w = frame.weyl;
    let mut orbits: Vec<HashSet<Vec<u16>>> = Vec::new();
    let mut reps: Vec<(Vec<usize>, Subsystem)> = Vec::new();
    for nodes in subsets {
        let sub = closed_subsystem(rs, &nodes);
        let key: Vec<u16> = sub.roots().iter().map(|&g| g as u16).collect();
        if orbits.iter().any(|o| o.contains(&key)) {
            continue;
        }
        let orbit: HashSet<Vec<u16>> = (0..w.order())
            .map(|x| {
                let perm = w.root_permutation(x);
                let mut img: Vec<u16> = key.iter().map(|&g| perm[g as usize]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        orbits.push(orbit);
        reps.push((nodes, sub));
    }
    reps.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    reps.into_iter().map(|(nodes, sub)| build_pseudo_levi(frame, nodes, sub)).collect()
}

/// The pseudo-Levi data of a single node subset.
pub fn pseudo_levi(frame: &Frame<'_>, nodes: &[usize]) -> PseudoLevi {
    let mut nodes = nodes.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let sub = closed_subsystem(frame.root_system(), &nodes);
    build_pseudo_levi(frame, nodes, sub)
}

fn build_pseudo_levi(frame: &Frame<'_>, nodes: Vec<usize>, subsystem: Subsystem) -> PseudoLevi {
    let center = center_structure(frame, &nodes);
    let cosets = coset_representatives(frame, &nodes, &center, &subsystem);
    PseudoLevi { is_isolated: center.dim() == 0, is_levi: !nodes.contains(&0), nodes, subsystem, center, cosets }
}

/// One shifted torus per `W^Π`-orbit of regular components of `Z(G_Π)`.
pub fn coset_representatives(
    frame: &Frame<'_>,
    nodes: &[usize],
    center: &CenterStructure,
    subsystem: &Subsystem,
) -> Vec<ShiftedTorus> {
    let stab = frame.weyl.setwise_stabilizer_of_basis(nodes);
    let regular: Vec<Vec<i64>> = center
        .components()
        .into_iter()
        .filter(|c| {
            let q = center.component_point(c);
            let point = TorusPoint::generic(q, &center.y_zero);
            vanishing(frame, &point) == subsystem.roots()
        })
        .collect();

    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    for c in &regular {
        if seen.contains(c) {
            continue;
        }
        let q = center.component_point(c);
        let mut orbit: Vec<Vec<i64>> = stab
            .elements()
            .iter()
            .map(|&w| {
                let img = TorusPoint::finite(q.clone()).transform(frame.y_matrix(w));
                center.component_of(img.finite_part())
            })
            .collect();
        orbit.sort();
        orbit.dedup();
        seen.extend(orbit.iter().cloned());
        let (component, representative) = choose_representative(center, &orbit);
        let generic = TorusPoint::generic(representative.finite_part().to_vec(), &center.y_zero);
        let excluded = excluded_loci(frame, &generic, subsystem);
        out.push(ShiftedTorus {
            nodes: nodes.to_vec(),
            center: center.clone(),
            component,
            orbit,
            representative,
            generic,
            excluded,
        });
    }
    out
}

fn vanishing(frame: &Frame<'_>, point: &TorusPoint) -> Vec<usize> {
    (0..frame.root_chars.len())
        .filter(|&g| {
            let (c, m) = point.eval(&frame.root_chars[g]);
            c.is_one() && m.iter().all(|&x| x == 0)
        })
        .collect()
}

const REPRESENTATIVE_SEARCH_CAP: u64 = 1 << 20;

/// Point of least order in the union of the cosets, ties broken by the
/// lexicographically least vector `N·q mod N`.
fn choose_representative(center: &CenterStructure, orbit: &[Vec<i64>]) -> (Vec<i64>, TorusPoint) {
    let k = center.dim();
    let base_order = center.diag.iter().fold(1i64, |acc, &d| acc.lcm(&d));
    for n in 1..=base_order {
        let step = n.lcm(&base_order);
        let count = (step as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
        let mut best: Option<(IVec, Vec<i64>, Vec<Rational>)> = None;
        for c in orbit {
            let q = center.component_point(c);
            let grid = if count <= REPRESENTATIVE_SEARCH_CAP { step } else { 1 };
            let mut x = vec![0i64; k];
            loop {
                let point: Vec<Rational> = (0..q.len())
                    .map(|i| {
                        frac(q[i] + (0..k).map(|j| Rational::new(x[j] * center.y_zero[j][i], grid)).sum::<Rational>())
                    })
                    .collect();
                let scaled: Option<IVec> = point
                    .iter()
                    .map(|p| {
                        let s = *p * Rational::from_integer(n);
                        s.is_integer().then(|| s.to_integer())
                    })
                    .collect();
                if let Some(e) = scaled {
                    if best.as_ref().is_none_or(|b| e < b.0) {
                        best = Some((e, c.clone(), point));
                    }
                }
                // odometer over the grid
                let mut i = 0;
                while i < k {
                    x[i] += 1;
                    if x[i] < grid {
                        break;
                    }
                    x[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
        }
        if let Some((_, c, point)) = best {
            return (c, TorusPoint::finite(point));
        }
    }
    let c = orbit[0].clone();
    let q = center.component_point(&c);
    (c, TorusPoint::finite(q))
}

fn excluded_loci(frame: &Frame<'_>, generic: &TorusPoint, subsystem: &Subsystem) -> Vec<ExcludedLocus> {
    let mut out = BTreeSet::new();
    for (g, chi) in frame.root_chars.iter().enumerate() {
        if subsystem.contains_root(g) {
            continue;
        }
        let (c, mut m) = generic.eval(chi);
        let Some(&lead) = m.iter().find(|&&x| x != 0) else { continue };
        // χ(zs) = 1  ⇔  t^m = c^{-1}
        let mut value = c.inv();
        if lead < 0 {
            m.iter_mut().for_each(|x| *x = -*x);
            value = value.inv();
        }
        out.insert(ExcludedLocus { exponent: m, value });
    }
    out.into_iter().collect()
}

/// Whether `w` maps the coset `Z°s` onto itself: it must stabilize `Y(Z°)`
/// and send `s` into `Z°s`.
pub fn stabilizes_coset(frame: &Frame<'_>, coset: &ShiftedTorus, w: usize) -> bool {
    let m = frame.y_matrix(w);
    let stable = coset.y_zero().iter().all(|y| coset.center.cocharacter_coords(&intmat::mat_vec(m, y)).is_some());
    stable && coset_shift(frame, coset, w).is_some()
}

/// `w(s)s^{-1}` when it lies in `Z°`, as a finite point.
pub(crate) fn coset_shift(frame: &Frame<'_>, coset: &ShiftedTorus, w: usize) -> Option<Vec<Rational>> {
    let q = coset.representative.finite_part();
    let wq = coset.representative.transform(frame.y_matrix(w));
    let d: Vec<Rational> = wq.finite_part().iter().zip(q).map(|(a, b)| *a - *b).collect();
    coset.center.in_identity_component(&d).then_some(d)
}

/// Sanity form of the identity-component test through characters: every
/// character of `X` vanishing on `Y(Z°)` is trivial on the point.
pub fn in_identity_component_by_characters(frame: &Frame<'_>, center: &CenterStructure, q: &[Rational]) -> bool {
    let r = frame.rank();
    let saturation = intmat::kernel_basis(&center.y_zero, r);
    saturation.iter().all(|chi| {
        let phase: Rational = chi.iter().zip(q).map(|(&a, b)| Rational::from_integer(a) * b).sum();
        phase.is_integer()
    })
}

/// Whether every element of `group` fixes `Y(Z°)` pointwise.
pub fn acts_trivially_on_center(frame: &Frame<'_>, center: &CenterStructure, group: &Subgroup) -> bool {
    group.elements().iter().all(|&w| {
        let m = frame.y_matrix(w);
        center.y_zero.iter().all(|y| &intmat::mat_vec(m, y) == y)
    })
}

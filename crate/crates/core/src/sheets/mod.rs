//! Sheets as triples (pseudo-Levi, coset of the center, rigid unipotent
//! labels), the groups `W(S)` and `W(S)^u`, and the orbit space `Z°s/W(S)`.

mod rigid;

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::Result;
use crate::exactalg::{MonomialAffineMap, RootOfUnity};
use crate::intmat::{self, IMat};
use crate::lattice_roots::IsogenyDescriptor;
use crate::pseudolevi::{
    coset_shift, enumerate_pseudo_levis, render_coroot_product, stabilizes_coset, ExcludedLocus, Frame, PseudoLevi,
    ShiftedTorus, TorusPoint,
};
use crate::weyl::{Subgroup, WeylGroup};

pub use rigid::{RigidTable, TRIVIAL_LABEL};

/// One sheet: a pseudo-Levi class, a coset of its center and a rigid label
/// on each irreducible component of its root subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheetDescriptor {
    /// `class.coset.labels`, each part an index into the enumeration.
    pub id: String,
    pub pseudo_levi: PseudoLevi,
    pub coset_index: usize,
    pub coset: ShiftedTorus,
    /// Label per component, in the order of `pseudo_levi.subsystem.components()`.
    pub labels: Vec<String>,
}

impl SheetDescriptor {
    /// All labels trivial.
    pub fn is_dixmier(&self) -> bool {
        self.labels.iter().all(|l| l == TRIVIAL_LABEL)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.pseudo_levi.nodes
    }

    pub fn label_string(&self) -> String {
        if self.labels.is_empty() {
            return TRIVIAL_LABEL.to_string();
        }
        self.labels.join(" ⊗ ")
    }
}

/// All sheets for the group with character lattice `x`.
pub fn enumerate_sheets(w: &WeylGroup, x: &IsogenyDescriptor, table: &RigidTable) -> Result<Vec<SheetDescriptor>> {
    enumerate_sheets_in(&Frame::new(w, x), table)
}

/// The Dixmier sheets only; needs no rigid data.
pub fn enumerate_dixmier_sheets(w: &WeylGroup, x: &IsogenyDescriptor) -> Vec<SheetDescriptor> {
    enumerate_sheets_in(&Frame::new(w, x), &RigidTable::trivial_only()).expect("trivial table is complete")
}

pub fn enumerate_sheets_in(frame: &Frame<'_>, table: &RigidTable) -> Result<Vec<SheetDescriptor>> {
    let mut out = Vec::new();
    for (i, pl) in enumerate_pseudo_levis(frame).into_iter().enumerate() {
        let per_component: Vec<Vec<String>> =
            pl.subsystem.components().iter().map(|c| table.labels(&c.kind)).collect::<Result<_>>()?;
        for (j, coset) in pl.cosets.iter().enumerate() {
            let perms: Vec<Vec<usize>> = coset_stabilizer(frame, coset)
                .elements()
                .iter()
                .map(|&w| frame.weyl.induced_component_permutation(w, &pl.subsystem).expect("W^Π stabilizes Φ_Π"))
                .collect();
            for (k, assignment) in label_assignments(&per_component, &perms).into_iter().enumerate() {
                out.push(SheetDescriptor {
                    id: format!("{i}.{j}.{k}"),
                    pseudo_levi: pl.clone(),
                    coset_index: j,
                    coset: coset.clone(),
                    labels: assignment.iter().enumerate().map(|(c, &l)| per_component[c][l].clone()).collect(),
                });
            }
        }
    }
    Ok(out)
}

/// Label index vectors, one per orbit under the component permutations,
/// each the least of its orbit, ascending.
fn label_assignments(per_component: &[Vec<String>], perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    for labels in per_component {
        all = all
            .into_iter()
            .flat_map(|a: Vec<usize>| (0..labels.len()).map(move |l| [a.clone(), vec![l]].concat()))
            .collect();
    }
    let mut reps = BTreeSet::new();
    for a in all {
        let canonical = perms
            .iter()
            .map(|p| {
                // component c moves to p[c] and carries its label along
                let mut b = vec![0; a.len()];
                for (c, &l) in a.iter().enumerate() {
                    b[p[c]] = l;
                }
                b
            })
            .min()
            .unwrap_or_else(|| a.clone());
        reps.insert(canonical);
    }
    reps.into_iter().collect()
}

/// `(W^Π)_{Z°s}`, the elements of `W^Π` mapping the coset onto itself.
pub fn coset_stabilizer(frame: &Frame<'_>, coset: &ShiftedTorus) -> Subgroup {
    let upper = frame.weyl.setwise_stabilizer_of_basis(&coset.nodes);
    Subgroup::from_elements(upper.elements().iter().copied().filter(|&w| stabilizes_coset(frame, coset, w)).collect())
}

/// The Weyl-group data attached to a sheet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheetWeylData {
    pub w_pi: Subgroup,
    pub w_upper_pi: Subgroup,
    /// `(W^Π)_{Z°s}`.
    pub coset_stabilizer: Subgroup,
    pub ws: Subgroup,
    /// `(w, w₁, w₂)` with `w = w₁w₂`, `w₁ ∈ W_Π`, `w₂ ∈ (W^Π)_{Z°s}`, one per
    /// element of `W(S)`.
    pub factorization: Vec<(usize, usize, usize)>,
    /// Every element of `W(S)` has exactly one such factorization.
    pub factorization_unique: bool,
    pub ws_u: Subgroup,
    /// `W(S)^u = W(S)` was taken from the structural criterion rather than
    /// by filtering.
    pub ws_u_unfiltered: bool,
    /// Generators of `W(S)`, each not in the subgroup generated by the earlier ones.
    pub generators: Vec<usize>,
}

pub fn weyl_of_sheet(frame: &Frame<'_>, sheet: &SheetDescriptor) -> SheetWeylData {
    let w = frame.weyl;
    let nodes = sheet.nodes();
    let w_pi = w.parabolic_subgroup(nodes);
    let w_upper_pi = w.setwise_stabilizer_of_basis(nodes);
    let coset_stabilizer = Subgroup::from_elements(
        w_upper_pi.elements().iter().copied().filter(|&x| stabilizes_coset(frame, &sheet.coset, x)).collect(),
    );

    let mut pairs: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for &a in w_pi.elements() {
        for &b in coset_stabilizer.elements() {
            pairs.entry(w.mul(a, b)).or_default().push((a, b));
        }
    }
    let ws = Subgroup::from_elements(pairs.keys().copied().collect());
    let factorization_unique = pairs.values().all(|v| v.len() == 1);
    let factorization = ws.elements().iter().map(|&x| (x, pairs[&x][0].0, pairs[&x][0].1)).collect();

    let (ws_u, ws_u_unfiltered) = ws_u(frame, sheet, &ws);
    let generators = greedy_generators(w, ws.elements());
    SheetWeylData {
        w_pi,
        w_upper_pi,
        coset_stabilizer,
        ws,
        factorization,
        factorization_unique,
        ws_u,
        ws_u_unfiltered,
        generators,
    }
}

/// `{w ∈ group : w permutes components without changing their labels}`.
pub fn label_preserving(w: &WeylGroup, sheet: &SheetDescriptor, group: &Subgroup) -> Subgroup {
    let sub = &sheet.pseudo_levi.subsystem;
    Subgroup::from_elements(
        group
            .elements()
            .iter()
            .copied()
            .filter(|&x| match w.induced_component_permutation(x, sub) {
                Ok(p) => p.iter().enumerate().all(|(c, &d)| sheet.labels[c] == sheet.labels[d]),
                Err(_) => false,
            })
            .collect(),
    )
}

/// `W(S)^u`, and whether it was taken equal to `W(S)` without filtering
/// because the exceptional configuration does not occur.
pub fn ws_u(frame: &Frame<'_>, sheet: &SheetDescriptor, ws: &Subgroup) -> (Subgroup, bool) {
    if exceptional_case_predicate(frame.lattice, sheet) {
        (label_preserving(frame.weyl, sheet, ws), false)
    } else {
        (ws.clone(), true)
    }
}

/// The only situation where `W(S)^u` can be smaller than `W(S)`: the group
/// is `PSp`, `PSO` or `HSpin`, two isomorphic components not of type `A`
/// exist, and they carry different labels.
pub fn exceptional_case_predicate(x: &IsogenyDescriptor, sheet: &SheetDescriptor) -> bool {
    if !x.is_symplectic_or_orthogonal_quotient() {
        return false;
    }
    let comps = sheet.pseudo_levi.subsystem.components();
    (0..comps.len()).any(|a| {
        (a + 1..comps.len())
            .any(|b| comps[a].kind == comps[b].kind && !comps[a].kind.is_type_a() && sheet.labels[a] != sheet.labels[b])
    })
}

fn greedy_generators(w: &WeylGroup, elements: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: HashSet<usize> = HashSet::from([w.identity()]);
    for &x in elements {
        if !span.contains(&x) {
            gens.push(x);
            span = w.closure(&gens).elements().iter().copied().collect();
        }
    }
    gens
}

/// The action `z ↦ (w·zs)s⁻¹` on `Z°`, in the coordinates of the basis
/// `y_zero` of `Y(Z°)`. `None` when `w` does not map `Z°s` onto itself.
pub fn bullet_map(frame: &Frame<'_>, coset: &ShiftedTorus, w: usize) -> Option<MonomialAffineMap> {
    if !stabilizes_coset(frame, coset, w) {
        return None;
    }
    let k = coset.dim();
    let m = frame.y_matrix(w);
    let images: Vec<Vec<i64>> = coset
        .y_zero()
        .iter()
        .map(|y| coset.center.cocharacter_coords(&intmat::mat_vec(m, y)).expect("Y(Z°) is stable"))
        .collect();
    let exponents: IMat = (0..k).map(|i| (0..k).map(|j| images[j][i]).collect()).collect();
    let d = coset_shift(frame, coset, w).expect("stabilizes");
    let shifts = coset.center.identity_component_coords(&d).into_iter().map(RootOfUnity::new).collect();
    Some(MonomialAffineMap::new(shifts, exponents).expect("Weyl action is invertible"))
}

/// `Z°s/W(S)`: the coset with its representative, the bullet action of
/// `W(S)` and the excluded non-regular parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSpace {
    pub dim: usize,
    pub representative: TorusPoint,
    pub representative_text: String,
    /// Weyl elements whose bullet maps generate the action.
    pub generator_elements: Vec<usize>,
    pub generators: Vec<MonomialAffineMap>,
    /// The image of `W(S)`, sorted.
    pub group: Vec<MonomialAffineMap>,
    /// The image is closed under composition and equals the closure of the generators.
    pub group_law_verified: bool,
    pub excluded: Vec<ExcludedLocus>,
    pub excluded_values: Option<Vec<RootOfUnity>>,
    /// Set when the parametrization of the sheet by the orbit space may
    /// fail to be injective.
    pub caveat: Option<String>,
}

pub fn orbit_space(frame: &Frame<'_>, sheet: &SheetDescriptor, data: &SheetWeylData) -> OrbitSpace {
    let coset = &sheet.coset;
    let k = coset.dim();
    let identity = MonomialAffineMap::identity(k);
    let mut image: BTreeSet<MonomialAffineMap> = BTreeSet::new();
    let mut generator_elements = Vec::new();
    let mut generators: Vec<MonomialAffineMap> = Vec::new();
    let mut span: BTreeSet<MonomialAffineMap> = BTreeSet::from([identity.clone()]);
    for &w in data.ws.elements() {
        let map = bullet_map(frame, coset, w).expect("W(S) stabilizes the coset");
        if !span.contains(&map) {
            generators.push(map.clone());
            generator_elements.push(w);
            span = map_closure(&generators, k);
        }
        image.insert(map);
    }
    let closed = image.iter().all(|a| image.iter().all(|b| image.contains(&a.compose(b))));
    let group_law_verified = closed && image == span;
    OrbitSpace {
        dim: k,
        representative: coset.representative.clone(),
        representative_text: render_coroot_product(frame.lattice, &coset.representative),
        generator_elements,
        generators,
        group: image.into_iter().collect(),
        group_law_verified,
        excluded: coset.excluded.clone(),
        excluded_values: coset.excluded_values(),
        caveat: caveat(frame.lattice, data),
    }
}

/// Group generated by a set of maps.
pub fn map_closure(generators: &[MonomialAffineMap], k: usize) -> BTreeSet<MonomialAffineMap> {
    let mut seen = BTreeSet::from([MonomialAffineMap::identity(k)]);
    let mut frontier = vec![MonomialAffineMap::identity(k)];
    while let Some(cur) = frontier.pop() {
        for g in generators {
            let next = g.compose(&cur);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen
}

fn caveat(x: &IsogenyDescriptor, data: &SheetWeylData) -> Option<String> {
    if data.ws_u != data.ws {
        return Some("bijection not guaranteed: W(S)^u is a proper subgroup of W(S)".into());
    }
    if x.is_symplectic_or_orthogonal_quotient() && x.rank() >= 5 {
        return Some(format!(
            "bijection not guaranteed: {} belongs to the PSp/PSO/HSpin family of rank ≥ 5",
            x.group_name()
        ));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_roots::{RootSystem, TypeLabel};

    fn setup(l: TypeLabel, r: usize, form: &str) -> (WeylGroup, IsogenyDescriptor) {
        let rs = RootSystem::new(l, r).unwrap();
        (WeylGroup::generate(&rs).unwrap(), IsogenyDescriptor::named(&rs, form).unwrap())
    }

    fn find<'a>(sheets: &'a [SheetDescriptor], id: &str) -> &'a SheetDescriptor {
        sheets.iter().find(|s| s.id == id).unwrap()
    }

    #[test]
    fn g2_census() {
        let (w, x) = setup(TypeLabel::G, 2, "adjoint");
        let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).unwrap();
        let ids: Vec<&str> = sheets.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["0.0.0", "1.0.0", "2.0.0", "3.0.0", "4.0.0", "5.0.0", "5.0.1", "5.0.2"]);
        assert_eq!(sheets.iter().filter(|s| s.is_dixmier()).count(), 6);
        assert_eq!(find(&sheets, "5.0.2").labels, ["x_beta(1)"]);
        assert_eq!(enumerate_dixmier_sheets(&w, &x).len(), 6);
    }

    #[test]
    fn a1_sheets() {
        let (w, x) = setup(TypeLabel::A, 1, "adjoint");
        assert_eq!(enumerate_sheets(&w, &x, &RigidTable::builtin()).unwrap().len(), 2);
        // the central classes {1} and {-1} of SL2 are sheets of their own
        let (w, x) = setup(TypeLabel::A, 1, "sc");
        let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).unwrap();
        assert_eq!(sheets.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(), ["0.0.0", "1.0.0", "1.1.0"]);
    }

    #[test]
    fn incomplete_table_names_type() {
        let (w, x) = setup(TypeLabel::B, 2, "adjoint");
        let err = enumerate_sheets(&w, &x, &RigidTable::builtin()).unwrap_err();
        assert!(matches!(err, crate::Error::RigidTableIncomplete(ref t) if t == "B2"));
    }

    #[test]
    fn g2_subregular_weyl_groups() {
        let (w, x) = setup(TypeLabel::G, 2, "adjoint");
        let frame = Frame::new(&w, &x);
        let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).unwrap();
        let rs = w.root_system();
        let refl = |v: &[i64]| w.reflection(rs.root_index(v).unwrap());
        let s1 = weyl_of_sheet(&frame, find(&sheets, "1.0.0"));
        assert_eq!(s1.ws, w.closure(&[refl(&[1, 0]), refl(&[3, 2])]));
        assert_eq!(s1.ws.order(), 4);
        assert!(s1.factorization_unique && s1.ws_u_unfiltered);
        let s2 = weyl_of_sheet(&frame, find(&sheets, "2.0.0"));
        assert_eq!(s2.ws, w.closure(&[refl(&[0, 1]), refl(&[2, 1])]));
        let regular = weyl_of_sheet(&frame, find(&sheets, "0.0.0"));
        assert_eq!(regular.ws.order(), 12);
    }

    #[test]
    fn g2_orbit_spaces() {
        let (w, x) = setup(TypeLabel::G, 2, "adjoint");
        let frame = Frame::new(&w, &x);
        let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).unwrap();
        for (id, k, gens) in [("0.0.0", 2, 2), ("1.0.0", 1, 1), ("2.0.0", 1, 1)] {
            let s = find(&sheets, id);
            let os = orbit_space(&frame, s, &weyl_of_sheet(&frame, s));
            assert_eq!((os.dim, os.generators.len()), (k, gens), "{id}");
            assert!(os.group_law_verified);
            assert!(os.caveat.is_none());
        }
        let s1 = find(&sheets, "1.0.0");
        let os = orbit_space(&frame, s1, &weyl_of_sheet(&frame, s1));
        assert_eq!(os.generators[0].to_string(), "t ↦ t^-1");
        assert_eq!(os.generators[0].fixed_point_count(), Some(2));
        assert_eq!(os.group.len(), 2);
    }

    #[test]
    fn bullet_maps_compose() {
        let (w, x) = setup(TypeLabel::G, 2, "adjoint");
        let frame = Frame::new(&w, &x);
        for s in enumerate_dixmier_sheets(&w, &x) {
            let data = weyl_of_sheet(&frame, &s);
            for &a in data.ws.elements() {
                for &b in data.ws.elements() {
                    let ab = bullet_map(&frame, &s.coset, w.mul(a, b)).unwrap();
                    let composed =
                        bullet_map(&frame, &s.coset, a).unwrap().compose(&bullet_map(&frame, &s.coset, b).unwrap());
                    assert_eq!(ab, composed);
                }
            }
        }
    }

    #[test]
    fn isolated_g2_cosets_have_trivial_action() {
        let (w, x) = setup(TypeLabel::G, 2, "adjoint");
        let frame = Frame::new(&w, &x);
        let sheets = enumerate_dixmier_sheets(&w, &x);
        let a2 = sheets.iter().find(|s| s.nodes() == [0, 2]).unwrap();
        let data = weyl_of_sheet(&frame, a2);
        let os = orbit_space(&frame, a2, &data);
        assert_eq!(os.dim, 0);
        assert!(os.generators.is_empty());
        assert_eq!(data.ws, data.w_pi);
    }

    #[test]
    fn c5_component_swap_and_labels() {
        let table = RigidTable::builtin_with("C 2 1 (2,1,1)").unwrap();
        for (form, expected_sheets) in [("sc", 4), ("adjoint", 3)] {
            let (w, x) = setup(TypeLabel::C, 5, form);
            let frame = Frame::new(&w, &x);
            let pls = enumerate_pseudo_levis(&frame);
            let pl = pls.iter().find(|p| p.nodes == [0, 1, 4, 5]).unwrap().clone();
            assert_eq!(pl.cosets.len(), 1);
            let coset = pl.cosets[0].clone();
            let perms: Vec<Vec<usize>> = coset_stabilizer(&frame, &coset)
                .elements()
                .iter()
                .map(|&e| w.induced_component_permutation(e, &pl.subsystem).unwrap())
                .collect();
            let labels = vec![table.labels(&pl.subsystem.components()[0].kind).unwrap(); 2];
            let assignments = label_assignments(&labels, &perms);
            assert_eq!(assignments.len(), expected_sheets, "{form}");

            let sheet = SheetDescriptor {
                id: "x".into(),
                pseudo_levi: pl.clone(),
                coset_index: 0,
                coset,
                labels: vec!["1".into(), "(2,1,1)".into()],
            };
            let data = weyl_of_sheet(&frame, &sheet);
            assert_eq!(data.w_pi.order(), 64);
            assert!(data.factorization_unique);
            if form == "adjoint" {
                assert!(exceptional_case_predicate(&x, &sheet));
                assert_eq!(data.ws.order(), 256);
                assert_eq!(data.ws_u.order(), 128);
                assert!(orbit_space(&frame, &sheet, &data).caveat.is_some());
            } else {
                assert!(!exceptional_case_predicate(&x, &sheet));
                assert_eq!(data.ws.order(), 128);
                assert_eq!(data.ws_u, data.ws);
                assert_eq!(label_preserving(&w, &sheet, &data.ws), data.ws);
            }
        }
    }
}

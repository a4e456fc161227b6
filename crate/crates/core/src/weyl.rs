//! Weyl groups enumerated as explicit integer matrices on the root lattice,
//! with root permutations and reduced words kept for every element.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::intmat::{self, IMat, IVec};
use crate::lattice_roots::{RootSystem, Subsystem, TypeLabel};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Matrix of a Weyl group element acting on simple-root coordinates
/// (column vectors), together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: IMat,
    pub inverse: IMat,
}

impl WeylElement {
    pub fn apply(&self, v: &[i64]) -> IVec {
        intmat::mat_vec(&self.matrix, v)
    }
}

/// Reflection `s_γ` in simple-root coordinates.
pub fn reflection_matrix(rs: &RootSystem, root: &[i64]) -> Result<IMat> {
    let r = rs.rank();
    if root.len() != r {
        return Err(Error::DimensionMismatch { expected: r, got: root.len() });
    }
    let g = rs.root_index(root).ok_or_else(|| Error::NotARoot(root.to_vec()))?;
    let len = rs.root_lengths()[g];
    Ok((0..r)
        .map(|row| {
            (0..r)
                .map(|c| {
                    let mut e = vec![0; r];
                    e[c] = 1;
                    i64::from(row == c) - root[row] * 2 * rs.inner(&e, root) / len
                })
                .collect()
        })
        .collect())
}

/// Order of the Weyl group of an irreducible type.
pub fn weyl_order(label: TypeLabel, rank: usize) -> u128 {
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    match label {
        TypeLabel::A => fact(rank + 1),
        TypeLabel::B | TypeLabel::C => (1u128 << rank) * fact(rank),
        TypeLabel::D => (1u128 << (rank - 1)) * fact(rank),
        TypeLabel::E => match rank {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        TypeLabel::F => 1152,
        TypeLabel::G => 12,
    }
}

/// A subgroup stored as the ascending list of its element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn from_elements(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, w: usize) -> bool {
        self.elements.binary_search(&w).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&w| other.contains(w))
    }
}

/// The Weyl group of a root system, fully enumerated.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rs: RootSystem,
    matrices: Vec<IMat>,
    index: HashMap<IMat, usize>,
    /// `element = s_gen · parent`
    parent: Vec<Option<(usize, usize)>>,
    perms: Vec<Vec<u16>>,
    inverse: Vec<usize>,
    reflections: HashMap<usize, usize>,
}

impl WeylGroup {
    pub fn generate(rs: &RootSystem) -> Result<Self> {
        Self::generate_with_budget(rs, DEFAULT_BUDGET)
    }

    /// Breadth-first enumeration from the identity. Refuses up front when
    /// the group has more than `budget` elements.
    pub fn generate_with_budget(rs: &RootSystem, budget: usize) -> Result<Self> {
        if weyl_order(rs.type_label(), rs.rank()) > budget as u128 || rs.roots().len() > u16::MAX as usize {
            return Err(Error::BudgetExceeded { budget });
        }
        let r = rs.rank();
        let nroots = rs.roots().len();
        let simple_perms: Vec<Vec<u16>> = (0..r)
            .map(|i| {
                (0..nroots)
                    .map(|g| {
                        let v = rs.root(g);
                        let p: i64 = (0..r).map(|k| rs.cartan()[i][k] * v[k]).sum();
                        let mut w = v.clone();
                        w[i] -= p;
                        rs.root_index(&w).expect("reflection permutes roots") as u16
                    })
                    .collect()
            })
            .collect();

        let id = intmat::identity(r);
        let mut matrices = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut parent = vec![None];
        let mut perms = vec![(0..nroots as u16).collect::<Vec<u16>>()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for g in 0..r {
                let mut m = matrices[cur].clone();
                let new_row: IVec = (0..r)
                    .map(|c| m[g][c] - (0..r).map(|k| rs.cartan()[g][k] * matrices[cur][k][c]).sum::<i64>())
                    .collect();
                m[g] = new_row;
                if index.contains_key(&m) {
                    continue;
                }
                if matrices.len() >= budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                let idx = matrices.len();
                let perm = perms[cur].iter().map(|&p| simple_perms[g][p as usize]).collect();
                index.insert(m.clone(), idx);
                matrices.push(m);
                parent.push(Some((cur, g)));
                perms.push(perm);
                queue.push_back(idx);
            }
        }

        let mut group =
            Self { rs: rs.clone(), matrices, index, parent, perms, inverse: Vec::new(), reflections: HashMap::new() };
        let n = group.matrices.len();
        let mut inverse = vec![0; n];
        for i in 1..n {
            let (p, g) = group.parent[i].expect("non-identity has a parent");
            // (s_g · p)^{-1} = p^{-1} · s_g
            inverse[i] = group.mul(inverse[p], group.simple_reflection(g));
        }
        group.inverse = inverse;
        for g in 0..rs.num_positive() {
            let m = reflection_matrix(rs, rs.root(g)).expect("root");
            let w = group.index[&m];
            group.reflections.insert(w, g);
        }
        Ok(group)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn matrix(&self, w: usize) -> &IMat {
        &self.matrices[w]
    }

    pub fn element(&self, w: usize) -> WeylElement {
        WeylElement { matrix: self.matrices[w].clone(), inverse: self.matrices[self.inverse[w]].clone() }
    }

    pub fn index_of(&self, matrix: &IMat) -> Option<usize> {
        self.index.get(matrix).copied()
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&intmat::mat_mul(&self.matrices[a], &self.matrices[b])]
    }

    pub fn simple_reflection(&self, i: usize) -> usize {
        (1..=self.rs.rank().min(self.matrices.len() - 1))
            .find(|&w| self.parent[w] == Some((0, i)))
            .expect("simple reflections follow the identity")
    }

    /// Index of `s_γ` for a root index `γ`.
    pub fn reflection(&self, root: usize) -> usize {
        let g = root % self.rs.num_positive();
        *self.reflections.iter().find(|(_, &r)| r == g).expect("reflection present").0
    }

    /// Positive root `γ` with `w = s_γ`, if `w` is a reflection.
    pub fn reflection_root(&self, w: usize) -> Option<usize> {
        self.reflections.get(&w).copied()
    }

    /// Image of a root index.
    pub fn act_on_root(&self, w: usize, root: usize) -> usize {
        self.perms[w][root] as usize
    }

    pub fn root_permutation(&self, w: usize) -> &[u16] {
        &self.perms[w]
    }

    /// A reduced word `[i_1, …, i_n]` (0-based) with `w = s_{i_1} ⋯ s_{i_n}`.
    pub fn word(&self, w: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = w;
        while let Some((p, g)) = self.parent[cur] {
            out.push(g);
            cur = p;
        }
        out
    }

    /// The image of every element in the representation determined by the
    /// given matrices of the simple reflections.
    pub fn represent(&self, generators: &[IMat]) -> Vec<IMat> {
        let n = generators.first().map_or(0, Vec::len);
        let mut out = vec![intmat::identity(n); self.order()];
        for w in 1..self.order() {
            let (p, g) = self.parent[w].expect("parent");
            out[w] = intmat::mat_mul(&generators[g], &out[p]);
        }
        out
    }

    /// Subgroup generated by a set of elements.
    pub fn closure(&self, generators: &[usize]) -> Subgroup {
        let mut seen: HashSet<usize> = HashSet::from([0]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for &g in generators {
                let next = self.mul(cur, g);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Subgroup::from_elements(seen.into_iter().collect())
    }

    /// `{ab : a ∈ A, b ∈ B}`.
    pub fn product_set(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup::from_elements(
            a.elements().iter().flat_map(|&x| b.elements().iter().map(move |&y| self.mul(x, y))).collect(),
        )
    }

    /// `W_Π`, generated by the reflections in the node roots of `Π`.
    pub fn parabolic_subgroup(&self, nodes: &[usize]) -> Subgroup {
        let ext = self.rs.extended_diagram();
        let gens: Vec<usize> = nodes.iter().map(|&n| self.reflection(ext.node_roots[n])).collect();
        self.closure(&gens)
    }

    /// `W^Π = {w : wΠ = Π}` as a set of roots.
    pub fn setwise_stabilizer_of_basis(&self, nodes: &[usize]) -> Subgroup {
        let ext = self.rs.extended_diagram();
        let roots: Vec<usize> = nodes.iter().map(|&n| ext.node_roots[n]).collect();
        self.setwise_stabilizer(&roots)
    }

    /// Elements mapping the given set of root indices onto itself.
    pub fn setwise_stabilizer(&self, roots: &[usize]) -> Subgroup {
        let set: HashSet<usize> = roots.iter().copied().collect();
        Subgroup::from_elements(
            (0..self.order()).filter(|&w| roots.iter().all(|&g| set.contains(&self.act_on_root(w, g)))).collect(),
        )
    }

    /// Permutation `σ` of the components with `w(component i) = component σ(i)`.
    pub fn induced_component_permutation(&self, w: usize, subsystem: &Subsystem) -> Result<Vec<usize>> {
        subsystem
            .components()
            .iter()
            .map(|c| {
                let image = self.act_on_root(w, c.roots[0]);
                let target = subsystem.component_of(image).ok_or(Error::NotStabilizing)?;
                let whole = c
                    .roots
                    .iter()
                    .all(|&g| subsystem.components()[target].roots.binary_search(&self.act_on_root(w, g)).is_ok());
                if whole {
                    Ok(target)
                } else {
                    Err(Error::NotStabilizing)
                }
            })
            .collect()
    }

    /// Orbit of a root index, ascending.
    pub fn root_orbit(&self, root: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.order()).map(|w| self.act_on_root(w, root)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn root_stabilizer(&self, root: usize) -> Subgroup {
        Subgroup::from_elements((0..self.order()).filter(|&w| self.act_on_root(w, root) == root).collect())
    }

    /// `s1 s2 s1`, or `1` for the identity.
    pub fn word_string(&self, w: usize) -> String {
        let word = self.word(w);
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter().map(|g| format!("s{}", g + 1)).collect::<Vec<_>>().join(" ")
    }
}

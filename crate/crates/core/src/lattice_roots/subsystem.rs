use std::fmt;

use super::root_system::{RootSystem, TypeLabel};
use crate::intmat::{self, IMat};

/// Isomorphism type of an irreducible component. `short` marks a
/// simply-laced component made of short roots of a non-simply-laced system,
/// written with a tilde (`~A1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentType {
    pub family: TypeLabel,
    pub rank: usize,
    pub short: bool,
}

impl ComponentType {
    pub fn is_type_a(&self) -> bool {
        self.family == TypeLabel::A
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.short {
            write!(f, "~")?;
        }
        write!(f, "{}{}", self.family, self.rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Extended-diagram nodes lying in this component.
    pub nodes: Vec<usize>,
    /// Root indices of a base of the component.
    pub simple_roots: Vec<usize>,
    /// Root indices of all roots of the component, ascending.
    pub roots: Vec<usize>,
    /// `cartan[i][j] = ⟨β_j, β_i^∨⟩` for the base `β`.
    pub cartan: IMat,
    pub kind: ComponentType,
}

/// All roots in the integral span of a set of extended-diagram nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    nodes: Vec<usize>,
    roots: Vec<usize>,
    components: Vec<Component>,
}

impl Subsystem {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Root indices, ascending.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn contains_root(&self, idx: usize) -> bool {
        self.roots.binary_search(&idx).is_ok()
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.kind.rank).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Component of a root of the subsystem.
    pub fn component_of(&self, idx: usize) -> Option<usize> {
        self.components.iter().position(|c| c.roots.binary_search(&idx).is_ok())
    }

    /// `A2`, `~A1×A1`, or `∅` for the empty subsystem.
    pub fn type_string(&self) -> String {
        if self.components.is_empty() {
            return "∅".to_string();
        }
        self.components.iter().map(|c| c.kind.to_string()).collect::<Vec<_>>().join("×")
    }
}

/// The roots of `Φ ∩ ZΠ` for a node subset `Π` of the extended diagram
/// (`0` is `α_0`, `i` is `α_i`), split into irreducible components.
pub fn closed_subsystem(rs: &RootSystem, nodes: &[usize]) -> Subsystem {
    let ext = rs.extended_diagram();
    let mut nodes = nodes.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let r = rs.rank();
    let span = intmat::hermite_rows(&nodes.iter().map(|&n| ext.nodes[n].clone()).collect(), r);
    let roots: Vec<usize> =
        (0..rs.roots().len()).filter(|&i| intmat::solve_integer(&span, rs.root(i)).is_some()).collect();

    let positive: Vec<usize> = roots.iter().copied().filter(|&i| i < rs.num_positive()).collect();
    let simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            !positive.iter().any(|&j| {
                let diff: Vec<i64> = rs.root(i).iter().zip(rs.root(j)).map(|(a, b)| a - b).collect();
                rs.root_index(&diff).is_some_and(|k| positive.contains(&k))
            })
        })
        .collect();

    let pair = |a: usize, b: usize| 2 * rs.inner(rs.root(a), rs.root(b)) / rs.root_lengths()[b];
    // union-find over the base
    let mut parent: Vec<usize> = (0..simple.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for a in 0..simple.len() {
        for b in a + 1..simple.len() {
            if pair(simple[a], simple[b]) != 0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; simple.len()];
    for (a, &s) in simple.iter().enumerate() {
        let root = find(&mut parent, a);
        if group_of[root] == usize::MAX {
            group_of[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[root]].push(s);
    }

    let mut components: Vec<Component> = groups
        .into_iter()
        .map(|base| {
            let comp_roots: Vec<usize> = roots
                .iter()
                .copied()
                .filter(|&g| base.iter().any(|&b| rs.inner(rs.root(g), rs.root(b)) != 0))
                .collect();
            let cartan: IMat = base.iter().map(|&bi| base.iter().map(|&bj| pair(bj, bi)).collect()).collect();
            let lengths: Vec<i64> = base.iter().map(|&b| rs.root_lengths()[b]).collect();
            let kind = identify(&cartan, &lengths, rs);
            let comp_nodes =
                nodes.iter().copied().filter(|&n| comp_roots.binary_search(&ext.node_roots[n]).is_ok()).collect();
            Component { nodes: comp_nodes, simple_roots: base, roots: comp_roots, cartan, kind }
        })
        .collect();
    components.sort_by(|a, b| a.nodes.cmp(&b.nodes).then_with(|| a.roots.cmp(&b.roots)));
    Subsystem { nodes, roots, components }
}

fn identify(cartan: &IMat, lengths: &[i64], rs: &RootSystem) -> ComponentType {
    let n = cartan.len();
    let bond = |i: usize, j: usize| cartan[i][j] * cartan[j][i];
    let edges: Vec<(usize, usize, i64)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, bond(i, j)))
        .filter(|e| e.2 != 0)
        .collect();
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let max_len = *lengths.iter().max().expect("nonempty component");
    let kind = |family, short| ComponentType { family, rank: n, short };

    if edges.iter().any(|e| e.2 == 3) {
        return kind(TypeLabel::G, false);
    }
    if let Some(&(a, b, _)) = edges.iter().find(|e| e.2 == 2) {
        if n == 2 {
            let family = if rs.type_label() == TypeLabel::B { TypeLabel::B } else { TypeLabel::C };
            return kind(family, false);
        }
        if n == 4 && degree(a) == 2 && degree(b) == 2 {
            return kind(TypeLabel::F, false);
        }
        let long = lengths.iter().filter(|&&l| l == max_len).count();
        return kind(if long == 1 { TypeLabel::C } else { TypeLabel::B }, false);
    }

    let short = !rs.is_simply_laced() && max_len < rs.long_length();
    let Some(branch) = (0..n).find(|&v| degree(v) == 3) else {
        return kind(TypeLabel::A, short);
    };
    // leg lengths from the branch node
    let mut legs: Vec<usize> = edges
        .iter()
        .filter(|e| e.0 == branch || e.1 == branch)
        .map(|e| {
            let (mut prev, mut cur) = (branch, if e.0 == branch { e.1 } else { e.0 });
            let mut len = 1;
            loop {
                let next = edges.iter().find_map(|f| {
                    let other = if f.0 == cur {
                        f.1
                    } else if f.1 == cur {
                        f.0
                    } else {
                        return None;
                    };
                    (other != prev).then_some(other)
                });
                match next {
                    Some(nx) => {
                        prev = cur;
                        cur = nx;
                        len += 1;
                    }
                    None => break len,
                }
            }
        })
        .collect();
    legs.sort_unstable();
    let family = match legs.as_slice() {
        [1, 1, _] => TypeLabel::D,
        _ => TypeLabel::E,
    };
    kind(family, short)
}

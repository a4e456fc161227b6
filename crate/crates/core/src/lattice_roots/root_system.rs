use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::intmat::{self, IMat, IVec};

/// Cartan–Killing type letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLabel {
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Self::A,
            'B' => Self::B,
            'C' => Self::C,
            'D' => Self::D,
            'E' => Self::E,
            'F' => Self::F,
            'G' => Self::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
            Self::F => 'F',
            Self::G => 'G',
        }
    }

    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            Self::A => rank >= 1,
            Self::B | Self::C => rank >= 2,
            Self::D => rank >= 4,
            Self::E => (6..=8).contains(&rank),
            Self::F => rank == 4,
            Self::G => rank == 2,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Cartan matrix in Bourbaki numbering with `cartan[i][j] = ⟨α_j, α_i^∨⟩`.
pub fn cartan_matrix(label: TypeLabel, rank: usize) -> Result<IMat> {
    if !label.is_valid_rank(rank) {
        return Err(Error::InvalidType(label.as_char(), rank));
    }
    let n = rank;
    let mut c = intmat::identity(n);
    for row in c.iter_mut() {
        for x in row.iter_mut() {
            *x *= 2;
        }
    }
    let mut bond = |i: usize, j: usize, ij: i64, ji: i64| {
        c[i][j] = ij;
        c[j][i] = ji;
    };
    match label {
        TypeLabel::A => (0..n - 1).for_each(|i| bond(i, i + 1, -1, -1)),
        TypeLabel::B => {
            (0..n - 2).for_each(|i| bond(i, i + 1, -1, -1));
            // α_n short
            bond(n - 2, n - 1, -1, -2);
        }
        TypeLabel::C => {
            (0..n - 2).for_each(|i| bond(i, i + 1, -1, -1));
            // α_n long
            bond(n - 2, n - 1, -2, -1);
        }
        TypeLabel::D => {
            (0..n - 2).for_each(|i| bond(i, i + 1, -1, -1));
            bond(n - 3, n - 1, -1, -1);
        }
        TypeLabel::E => {
            bond(0, 2, -1, -1);
            bond(1, 3, -1, -1);
            (2..n - 1).for_each(|i| bond(i, i + 1, -1, -1));
        }
        TypeLabel::F => {
            bond(0, 1, -1, -1);
            bond(1, 2, -1, -2);
            bond(2, 3, -1, -1);
        }
        TypeLabel::G => bond(0, 1, -3, -1),
    }
    Ok(c)
}

/// Squared lengths of the simple roots, normalized so that short roots have
/// length 2. Requires a connected diagram.
pub fn simple_root_lengths(cartan: &IMat) -> Vec<i64> {
    let n = cartan.len();
    // d_i * c[i][j] = d_j * c[j][i]; propagate rational ratios along the tree
    let mut num = vec![0i64; n];
    let mut den = vec![1i64; n];
    if n == 0 {
        return Vec::new();
    }
    num[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && num[j] == 0 {
                // d_j = d_i * c[i][j] / c[j][i]
                num[j] = num[i] * cartan[i][j];
                den[j] = den[i] * cartan[j][i];
                let g = num_integer::gcd(num[j], den[j]);
                num[j] /= g;
                den[j] /= g;
                if den[j] < 0 {
                    num[j] = -num[j];
                    den[j] = -den[j];
                }
                queue.push_back(j);
            }
        }
    }
    let common = den.iter().fold(1i64, |acc, &d| num_integer::lcm(acc, d));
    let raw: Vec<i64> = (0..n).map(|i| num[i] * (common / den[i])).collect();
    let min = *raw.iter().min().expect("nonempty");
    raw.iter().map(|&x| 2 * x / min).collect()
}

/// An irreducible reduced root system with roots stored in simple-root
/// coordinates.
#[derive(Debug, Clone)]
pub struct RootSystem {
    label: TypeLabel,
    rank: usize,
    cartan: IMat,
    simple_lengths: Vec<i64>,
    gram: IMat,
    roots: Vec<IVec>,
    n_positive: usize,
    index: HashMap<IVec, usize>,
    root_lengths: Vec<i64>,
    highest: usize,
}

impl RootSystem {
    pub fn new(label: TypeLabel, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(label, rank)?;
        let simple_lengths = simple_root_lengths(&cartan);
        let gram: IMat = (0..rank).map(|i| (0..rank).map(|j| simple_lengths[i] * cartan[i][j] / 2).collect()).collect();

        let mut seen: HashMap<IVec, ()> = HashMap::new();
        let mut queue: VecDeque<IVec> = VecDeque::new();
        for i in 0..rank {
            let mut e = vec![0; rank];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(v) = queue.pop_front() {
            for i in 0..rank {
                let p: i64 = (0..rank).map(|k| v[k] * cartan[i][k]).sum();
                let mut w = v.clone();
                w[i] -= p;
                if !seen.contains_key(&w) {
                    seen.insert(w.clone(), ());
                    queue.push_back(w);
                }
            }
        }
        let mut positive: Vec<IVec> = seen.into_keys().filter(|v| v.iter().all(|&x| x >= 0)).collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let n_positive = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|v| v.iter().map(|x| -x).collect::<IVec>()));
        let index: HashMap<IVec, usize> = roots.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let root_lengths = roots.iter().map(|v| form(&gram, v, v)).collect();
        let highest = n_positive - 1;
        Ok(Self { label, rank, cartan, simple_lengths, gram, roots, n_positive, index, root_lengths, highest })
    }

    pub fn type_label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.label, self.rank)
    }

    pub fn cartan(&self) -> &IMat {
        &self.cartan
    }

    pub fn gram(&self) -> &IMat {
        &self.gram
    }

    pub fn simple_lengths(&self) -> &[i64] {
        &self.simple_lengths
    }

    /// All roots: positive roots by increasing height, then their negatives
    /// in the same order.
    pub fn roots(&self) -> &[IVec] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[IVec] {
        &self.roots[..self.n_positive]
    }

    pub fn num_positive(&self) -> usize {
        self.n_positive
    }

    pub fn root(&self, i: usize) -> &IVec {
        &self.roots[i]
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn negative_index(&self, i: usize) -> usize {
        (i + self.n_positive) % (2 * self.n_positive)
    }

    pub fn highest_root(&self) -> &IVec {
        &self.roots[self.highest]
    }

    /// Squared length of every root (short roots have length 2).
    pub fn root_lengths(&self) -> &[i64] {
        &self.root_lengths
    }

    pub fn is_simply_laced(&self) -> bool {
        self.simple_lengths.iter().all(|&d| d == self.simple_lengths[0])
    }

    pub fn long_length(&self) -> i64 {
        *self.simple_lengths.iter().max().expect("nonempty")
    }

    /// The symmetric form `(u, v)` on simple-root coordinates.
    pub fn inner(&self, u: &[i64], v: &[i64]) -> i64 {
        form(&self.gram, u, v)
    }

    /// `⟨χ, γ^∨⟩` with `χ` in simple-root coordinates and `γ` a root.
    pub fn pairing(&self, chi: &[i64], gamma: &[i64]) -> Result<i64> {
        if chi.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: chi.len() });
        }
        if gamma.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: gamma.len() });
        }
        let Some(g) = self.root_index(gamma) else {
            return Err(Error::NotARoot(gamma.to_vec()));
        };
        Ok(2 * self.inner(chi, gamma) / self.root_lengths[g])
    }

    /// Coordinates of `γ^∨` in the basis of simple coroots.
    pub fn coroot(&self, gamma_index: usize) -> IVec {
        let gamma = &self.roots[gamma_index];
        let len = self.root_lengths[gamma_index];
        gamma.iter().zip(&self.simple_lengths).map(|(&c, &d)| c * d / len).collect()
    }

    /// Fundamental-weight coordinates of a vector given in simple-root
    /// coordinates.
    pub fn to_weight_coords(&self, v: &[i64]) -> IVec {
        (0..self.rank).map(|j| (0..self.rank).map(|i| v[i] * self.cartan[j][i]).sum()).collect()
    }

    /// `⟨λ, γ^∨⟩` with `λ` in fundamental-weight coordinates.
    pub fn weight_pairing(&self, lambda: &[i64], gamma_index: usize) -> i64 {
        intmat::dot(lambda, &self.coroot(gamma_index))
    }

    /// Order of the fundamental group `Λ / ZΦ`.
    pub fn fundamental_group_order(&self) -> i64 {
        intmat::det(&self.cartan)
    }

    pub fn extended_diagram(&self) -> ExtendedDiagram {
        let mut nodes = vec![self.highest_root().iter().map(|x| -x).collect::<IVec>()];
        for i in 0..self.rank {
            let mut e = vec![0; self.rank];
            e[i] = 1;
            nodes.push(e);
        }
        let node_index: Vec<usize> = nodes.iter().map(|v| self.root_index(v).expect("nodes are roots")).collect();
        let cartan = nodes
            .iter()
            .zip(&node_index)
            .map(|(_, &i)| nodes.iter().map(|v| 2 * self.inner(v, &self.roots[i]) / self.root_lengths[i]).collect())
            .collect();
        ExtendedDiagram { nodes, node_roots: node_index, cartan }
    }
}

fn form(gram: &IMat, u: &[i64], v: &[i64]) -> i64 {
    u.iter().enumerate().map(|(i, &a)| a * v.iter().enumerate().map(|(j, &b)| gram[i][j] * b).sum::<i64>()).sum()
}

/// Nodes `α_0, α_1, …, α_ℓ` of the extended Dynkin diagram, `α_0` being the
/// negative of the highest root.
#[derive(Debug, Clone)]
pub struct ExtendedDiagram {
    /// Simple-root coordinates of each node.
    pub nodes: Vec<IVec>,
    /// Index of each node in `RootSystem::roots`.
    pub node_roots: Vec<usize>,
    /// `cartan[i][j] = ⟨node_j, node_i^∨⟩`.
    pub cartan: IMat,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(label: TypeLabel, rank: usize) -> usize {
        RootSystem::new(label, rank).unwrap().roots().len()
    }

    #[test]
    fn smallest_system() {
        let rs = RootSystem::new(TypeLabel::A, 1).unwrap();
        assert_eq!(rs.roots(), &[vec![1], vec![-1]]);
    }

    #[test]
    fn g2_roots() {
        let rs = RootSystem::new(TypeLabel::G, 2).unwrap();
        assert_eq!(rs.roots().len(), 12);
        assert_eq!(rs.highest_root(), &vec![3, 2]);
        assert_eq!(rs.simple_lengths(), &[2, 6]);
    }

    #[test]
    fn c5_roots() {
        assert_eq!(count(TypeLabel::C, 5), 50);
    }

    #[test]
    fn rejects_invalid_pairs() {
        assert_eq!(RootSystem::new(TypeLabel::D, 2).unwrap_err(), Error::InvalidType('D', 2));
        assert!(RootSystem::new(TypeLabel::D, 3).is_err());
        assert!(RootSystem::new(TypeLabel::E, 5).is_err());
        assert!(RootSystem::new(TypeLabel::G, 3).is_err());
        assert!(RootSystem::new(TypeLabel::A, 0).is_err());
    }

    #[test]
    fn g2_pairings() {
        let rs = RootSystem::new(TypeLabel::G, 2).unwrap();
        assert_eq!(rs.pairing(&[1, 0], &[3, 2]).unwrap(), 0);
        assert_eq!(rs.pairing(&[2, 1], &[2, 1]).unwrap(), 2);
        assert_eq!(rs.pairing(&[3, 1], &[2, 1]).unwrap(), 3);
        assert_eq!(rs.pairing(&[1], &[2, 1]).unwrap_err(), Error::DimensionMismatch { expected: 2, got: 1 });
        assert_eq!(rs.pairing(&[1, 0], &[2, 2]).unwrap_err(), Error::NotARoot(vec![2, 2]));
    }

    #[test]
    fn pairing_matches_cartan() {
        for (l, r) in [(TypeLabel::B, 3), (TypeLabel::C, 4), (TypeLabel::G, 2), (TypeLabel::F, 4)] {
            let rs = RootSystem::new(l, r).unwrap();
            for i in 0..r {
                for j in 0..r {
                    let mut ei = vec![0; r];
                    ei[i] = 1;
                    let mut ej = vec![0; r];
                    ej[j] = 1;
                    assert_eq!(rs.pairing(&ei, &ej).unwrap(), rs.cartan()[j][i]);
                }
            }
        }
    }

    #[test]
    fn extended_node_pairing() {
        let rs = RootSystem::new(TypeLabel::G, 2).unwrap();
        let ext = rs.extended_diagram();
        assert_eq!(ext.nodes[0], vec![-3, -2]);
        // ⟨α_i, α_0^∨⟩ row and ⟨α_0, α_i^∨⟩ column
        for i in 1..3 {
            let expected = rs.pairing(&ext.nodes[0], &ext.nodes[i]).unwrap();
            assert_eq!(ext.cartan[i][0], expected);
        }
        assert_eq!(ext.cartan[0][0], 2);
    }

    #[test]
    fn fundamental_groups() {
        assert_eq!(RootSystem::new(TypeLabel::A, 3).unwrap().fundamental_group_order(), 4);
        assert_eq!(RootSystem::new(TypeLabel::C, 5).unwrap().fundamental_group_order(), 2);
        assert_eq!(RootSystem::new(TypeLabel::D, 4).unwrap().fundamental_group_order(), 4);
        assert_eq!(RootSystem::new(TypeLabel::E, 8).unwrap().fundamental_group_order(), 1);
        assert_eq!(RootSystem::new(TypeLabel::G, 2).unwrap().fundamental_group_order(), 1);
    }
}

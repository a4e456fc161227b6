//! Small dense integer matrices: Smith and Hermite normal forms, integer
//! kernels and exact solves. Everything here works on row-major `Vec<Vec<i64>>`
//! because the lattices in this crate have rank at most eight.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type IVec = Vec<i64>;
pub type IMat = Vec<Vec<i64>>;
pub type Rational = Ratio<i64>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn zeros(rows: usize, cols: usize) -> IMat {
    vec![vec![0; cols]; rows]
}

pub fn transpose(a: &IMat, cols: usize) -> IMat {
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()
        })
        .collect()
}

/// `a · v` for a column vector `v`.
pub fn mat_vec(a: &IMat, v: &[i64]) -> IVec {
    a.iter().map(|row| dot(row, v)).collect()
}

/// `vᵀ · a` for a row vector `v`.
pub fn vec_mat(v: &[i64], a: &IMat) -> IVec {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| v.iter().zip(a).map(|(x, row)| x * row[j]).sum()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(a: &IMat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Smith normal form `u · a · v = diag(d_1, …, d_rank, 0, …)` with
/// unimodular `u`, `v` and `d_i | d_{i+1}`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IMat,
    pub v: IMat,
    pub diag: Vec<i64>,
    pub rank: usize,
}

pub fn smith(a: &IMat, cols: usize) -> Smith {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows && t < cols {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in d.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t] != 0 {
                    let q = d[i][t] / d[t][t];
                    add_row(&mut d, i, t, -q);
                    add_row(&mut u, i, t, -q);
                    if d[i][t] != 0 {
                        d.swap(t, i);
                        u.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if d[t][j] != 0 {
                    let q = d[t][j] / d[t][t];
                    add_col(&mut d, j, t, -q);
                    add_col(&mut v, j, t, -q);
                    if d[t][j] != 0 {
                        swap_cols(&mut d, t, j);
                        swap_cols(&mut v, t, j);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let pivot = d[t][t];
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % pivot != 0));
            match offender {
                Some(i) => {
                    add_row(&mut d, t, i, 1);
                    add_row(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in &mut d[t] {
                *x = -*x;
            }
            for x in &mut u[t] {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diag = (0..t).map(|i| d[i][i]).collect();
    Smith { u, v, diag, rank: t }
}

fn swap_cols(m: &mut IMat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row[dst] += factor * row[src]
fn add_row(m: &mut IMat, dst: usize, src: usize, factor: i64) {
    if factor == 0 {
        return;
    }
    let src_row = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(src_row) {
        *x += factor * y;
    }
}

/// col[dst] += factor * col[src]
fn add_col(m: &mut IMat, dst: usize, src: usize, factor: i64) {
    if factor == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[dst] += factor * row[src];
    }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `a`.
/// Zero rows are dropped; pivots are positive and entries above a pivot are
/// reduced into `[0, pivot)`.
pub fn hermite_rows(a: &IMat, cols: usize) -> IMat {
    let mut m: IMat = a.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut out_row = 0;
    for col in 0..cols {
        if out_row >= m.len() {
            break;
        }
        loop {
            let candidates: Vec<usize> = (out_row..m.len()).filter(|&i| m[i][col] != 0).collect();
            if candidates.is_empty() {
                break;
            }
            let &best = candidates.iter().min_by_key(|&&i| m[i][col].abs()).expect("nonempty");
            m.swap(out_row, best);
            let mut reduced = true;
            for i in out_row + 1..m.len() {
                if m[i][col] != 0 {
                    let q = m[i][col] / m[out_row][col];
                    add_row(&mut m, i, out_row, -q);
                    if m[i][col] != 0 {
                        reduced = false;
                    }
                }
            }
            if reduced {
                break;
            }
        }
        if m[out_row][col] == 0 {
            continue;
        }
        if m[out_row][col] < 0 {
            for x in &mut m[out_row] {
                *x = -*x;
            }
        }
        let pivot = m[out_row][col];
        for i in 0..out_row {
            let q = m[i][col].div_euclid(pivot);
            add_row(&mut m, i, out_row, -q);
        }
        out_row += 1;
    }
    m.truncate(out_row);
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Basis (as rows, in Hermite form) of the integer vectors `x` with `a·x = 0`.
/// The result spans a saturated sublattice of `Z^cols`.
pub fn kernel_basis(a: &IMat, cols: usize) -> IMat {
    if a.is_empty() {
        return identity(cols);
    }
    let s = smith(a, cols);
    let vt = transpose(&s.v, cols);
    let raw: IMat = vt[s.rank..].to_vec();
    hermite_rows(&raw, cols)
}

/// Integer solution `c` of `c · rows = target`, if one exists.
pub fn solve_integer(rows: &IMat, target: &[i64]) -> Option<IVec> {
    let n = target.len();
    let r = rows.len();
    if r == 0 {
        return target.iter().all(|&x| x == 0).then(Vec::new);
    }
    // rowsᵀ c = target
    let at = transpose(rows, n);
    let s = smith(&at, r);
    let ut = mat_vec(&s.u, target);
    let mut cprime = vec![0; r];
    for i in 0..n {
        if i < s.rank {
            if ut[i] % s.diag[i] != 0 {
                return None;
            }
            cprime[i] = ut[i] / s.diag[i];
        } else if ut[i] != 0 {
            return None;
        }
    }
    Some(mat_vec(&s.v, &cprime))
}

/// Exact inverse over the rationals, `None` when singular.
pub fn rational_inverse(a: &IMat) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&x| Rational::from_integer(x))
                .chain((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in &mut m[col] {
            *x *= inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Inverse of an integer matrix whose inverse is integral (e.g. unimodular).
pub fn integer_inverse(a: &IMat) -> Option<IMat> {
    let inv = rational_inverse(a)?;
    inv.into_iter()
        .map(|row| row.into_iter().map(|x| x.is_integer().then(|| x.to_integer())).collect::<Option<IVec>>())
        .collect()
}

/// `a · v` with a rational matrix.
pub fn rat_mat_vec(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

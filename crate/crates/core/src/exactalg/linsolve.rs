use std::collections::BTreeMap;

use super::cyclotomic::Cyclotomic;
use super::laurent::LaurentPolynomial;
use crate::intmat::IVec;

/// Coefficients `c` with `Σ c_i · columns[i] = target`, or `None` when the
/// target is outside the span. Free coefficients are set to zero.
pub fn solve_in_span(columns: &[LaurentPolynomial], target: &LaurentPolynomial) -> Option<Vec<Cyclotomic>> {
    let mut index: BTreeMap<&IVec, usize> = BTreeMap::new();
    for p in columns.iter().chain(std::iter::once(target)) {
        for (e, _) in p.terms() {
            let n = index.len();
            index.entry(e).or_insert(n);
        }
    }
    let rows = index.len();
    let cols = columns.len();
    let mut m = vec![vec![Cyclotomic::zero(); cols + 1]; rows];
    for (j, p) in columns.iter().chain(std::iter::once(target)).enumerate() {
        for (e, c) in p.terms() {
            m[index[e]][j] = c.clone();
        }
    }

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("nonzero pivot");
        for x in m[row].iter_mut().skip(col) {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for (x, y) in line.iter_mut().zip(&pivot_row).skip(col) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut out = vec![Cyclotomic::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][cols].clone();
    }
    Some(out)
}

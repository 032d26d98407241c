//! Hermite and Smith normal forms over the integers.
//!
//! Both algorithms are deterministic: pivots are chosen as the entry of least
//! absolute value, ties broken by the first position in row-major order.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::arith::Int;

/// Row-style Hermite normal form `H = T * A`.
///
/// `H` is in row echelon form with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, and zero rows at the bottom. `T` is unimodular.
pub struct Hermite {
    pub h: IntMatrix,
    pub t: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite(a: &IntMatrix) -> Hermite {
    let mut h = a.clone();
    let mut t = IntMatrix::identity(a.rows());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..h.cols() {
        if row == h.rows() {
            break;
        }
        loop {
            let best = (row..h.rows())
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&i, &j| h.get(i, col).abs().cmp(&h.get(j, col).abs()));
            let Some(p) = best else { break };
            h.swap_rows(row, p);
            t.swap_rows(row, p);
            let mut clean = true;
            for i in row + 1..h.rows() {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(h.get(row, col));
                let f = -q;
                h.add_row_multiple(i, row, &f);
                t.add_row_multiple(i, row, &f);
                if !h.get(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(row, col).is_zero() {
            continue;
        }
        if h.get(row, col).is_negative() {
            h.negate_row(row);
            t.negate_row(row);
        }
        for i in 0..row {
            let q = h.get(i, col).div_floor(h.get(row, col));
            if !q.is_zero() {
                let f = -q;
                h.add_row_multiple(i, row, &f);
                t.add_row_multiple(i, row, &f);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Hermite {
        h,
        t,
        rank: row,
        pivots,
    }
}

/// Canonical basis (nonzero HNF rows) of the lattice spanned by `rows`.
pub fn hnf_basis(rows: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(rows, cols).expect("uniform row length");
    let hf = hermite(&m);
    (0..hf.rank).map(|i| hf.h.row(i).to_vec()).collect()
}

/// Basis of `{y : y^T A = 0}`, the saturated left kernel, in HNF.
pub fn left_kernel(a: &IntMatrix) -> Vec<Vec<Int>> {
    let hf = hermite(a);
    let rows: Vec<Vec<Int>> = (hf.rank..a.rows()).map(|i| hf.t.row(i).to_vec()).collect();
    hnf_basis(&rows, a.rows())
}

/// Smith normal form `U * A * V = S`.
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let mut pivot = None;
        for i in t..m {
            for j in t..n {
                let x = s.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match pivot {
                    Some((_, _, ref best)) if x.abs() >= *best => {}
                    _ => pivot = Some((i, j, x.abs())),
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let f = -(s.get(i, t) / s.get(t, t));
                s.add_row_multiple(i, t, &f);
                u.add_row_multiple(i, t, &f);
                if !s.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let f = -(s.get(t, j) / s.get(t, t));
                s.add_col_multiple(j, t, &f);
                v.add_col_multiple(j, t, &f);
                if !s.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t, s.get(t, t).abs());
                for i in t + 1..m {
                    let x = s.get(i, t);
                    if !x.is_zero() && x.abs() < best.2 {
                        best = (i, t, x.abs());
                    }
                }
                for j in t + 1..n {
                    let x = s.get(t, j);
                    if !x.is_zero() && x.abs() < best.2 {
                        best = (t, j, x.abs());
                    }
                }
                s.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                s.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            // divisibility: fold an offending row into row t and repeat
            let d = s.get(t, t).clone();
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !s.get(i, j).is_multiple_of(&d)));
            match offender {
                Some(i) => {
                    let one = Int::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { u, s, v, rank: t }
}

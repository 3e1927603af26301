//! Smith and Hermite normal forms over the integers.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{abs, Int, IntMatrix};

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d[(i, i)]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivoting always picks the nonzero entry of minimal absolute value in the
/// active block, ties broken by lowest (row, col), so the output is a pure
/// function of the input.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = min_pivot(&a, t) else {
                return Smith { u, d: a, v };
            };
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);
            if a[(t, t)].is_negative() {
                negate_row(&mut a, t);
                negate_row(&mut u, t);
            }
            let p = a[(t, t)].clone();

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&p);
                add_row_multiple(&mut a, i, t, &-&q);
                add_row_multiple(&mut u, i, t, &-&q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&p);
                add_col_multiple(&mut a, j, t, &-&q);
                add_col_multiple(&mut v, j, t, &-&q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // divisibility: fold an offending row into the pivot row and retry
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offending {
                Some(i) => {
                    add_row_multiple(&mut a, t, i, &Int::one());
                    add_row_multiple(&mut u, t, i, &Int::one());
                }
                None => break,
            }
        }
    }
    Smith { u, d: a, v }
}

fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let x = &a[(r, c)];
            if x.is_zero() {
                continue;
            }
            let ax = abs(x);
            if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                best = Some((ax, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

fn negate_row(a: &mut IntMatrix, r: usize) {
    for c in 0..a.cols() {
        let v = -&a[(r, c)];
        a[(r, c)] = v;
    }
}

/// row[dst] += k * row[src]
fn add_row_multiple(a: &mut IntMatrix, dst: usize, src: usize, k: &Int) {
    for c in 0..a.cols() {
        if a[(src, c)].is_zero() {
            continue;
        }
        let v = &a[(dst, c)] + k * &a[(src, c)];
        a[(dst, c)] = v;
    }
}

/// col[dst] += k * col[src]
fn add_col_multiple(a: &mut IntMatrix, dst: usize, src: usize, k: &Int) {
    for r in 0..a.rows() {
        if a[(r, src)].is_zero() {
            continue;
        }
        let v = &a[(r, dst)] + k * &a[(r, src)];
        a[(r, dst)] = v;
    }
}

/// Row-style Hermite normal form of the row lattice of `m`.
///
/// Returns only the nonzero rows: pivots strictly move right, are positive,
/// and entries above each pivot are reduced into `[0, pivot)`. The result
/// depends only on the Z-span of the rows.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let rows = a.rows();
    let cols = a.cols();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let mut best: Option<(Int, usize)> = None;
            for r in pivot_row..rows {
                if !a[(r, col)].is_zero() {
                    let ax = abs(&a[(r, col)]);
                    if best.as_ref().is_none_or(|(b, _)| ax < *b) {
                        best = Some((ax, r));
                    }
                }
            }
            let Some((_, r)) = best else { break };
            a.swap_rows(pivot_row, r);
            let p = a[(pivot_row, col)].clone();
            let mut done = true;
            for r in pivot_row + 1..rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let q = a[(r, col)].div_floor(&p);
                add_row_multiple(&mut a, r, pivot_row, &-&q);
                if !a[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(pivot_row, col)].is_zero() {
            continue;
        }
        if a[(pivot_row, col)].is_negative() {
            negate_row(&mut a, pivot_row);
        }
        let p = a[(pivot_row, col)].clone();
        for r in 0..pivot_row {
            let q = a[(r, col)].div_floor(&p);
            if !q.is_zero() {
                add_row_multiple(&mut a, r, pivot_row, &-&q);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    let keep: Vec<usize> = (0..pivot_row).collect();
    a.select_rows(&keep)
}

/// Basis (as columns) of `{x in Z^n : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let idx: Vec<usize> = (rank..m.cols()).collect();
    snf.v.select_columns(&idx)
}

//! Shared test oracles, kept independent of the library's solver paths.
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use ksc_core::rational::Rat;
use ksc_core::scenario::Scenario;

/// Exact vertex enumeration of the normalization polytope
/// `{p >= 0, sum_{w in f} p_w = 1 for all f}` by basis enumeration: for
/// every independent column subset of size rank(A), solve the restricted
/// system and keep nonnegative consistent solutions. Uses its own Gaussian
/// elimination, not the library simplex.
pub fn polytope_vertices(h: &Scenario) -> Vec<Vec<Rat>> {
    let rows: Vec<Vec<Rat>> = h
        .hyperedges
        .iter()
        .map(|f| {
            let mut row = vec![Rat::zero(); h.num_nodes];
            for &w in f {
                row[w] = Rat::one();
            }
            row
        })
        .collect();
    let rank = matrix_rank(&rows);
    let n = h.num_nodes;
    let mut vertices: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut subset: Vec<usize> = Vec::new();
    enumerate_bases(&rows, n, rank, 0, &mut subset, &mut vertices);
    vertices.into_iter().collect()
}

fn matrix_rank(rows: &[Vec<Rat>]) -> usize {
    let mut mat: Vec<Vec<Rat>> = rows.to_vec();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..mat.len()).find(|&r| !mat[r][c].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot);
        let inv = mat[rank][c].clone();
        for x in &mut mat[rank] {
            *x = &*x / &inv;
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][c].is_zero() {
                let f = mat[r][c].clone();
                for j in 0..cols {
                    let delta = &f * &mat[rank][j];
                    mat[r][j] = &mat[r][j] - delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn enumerate_bases(
    rows: &[Vec<Rat>],
    n: usize,
    rank: usize,
    start: usize,
    subset: &mut Vec<usize>,
    out: &mut BTreeSet<Vec<Rat>>,
) {
    if subset.len() == rank {
        if let Some(solution) = solve_basis(rows, n, subset) {
            out.insert(solution);
        }
        return;
    }
    let remaining = rank - subset.len();
    for c in start..=(n - remaining) {
        subset.push(c);
        enumerate_bases(rows, n, rank, c + 1, subset, out);
        subset.pop();
    }
}

/// Solves `A_S x_S = 1` with zeros elsewhere; returns the full vector when
/// the restricted columns are independent, the system is consistent, and
/// the solution is nonnegative.
fn solve_basis(rows: &[Vec<Rat>], n: usize, cols: &[usize]) -> Option<Vec<Rat>> {
    let k = cols.len();
    let mut mat: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| {
            let mut r: Vec<Rat> = cols.iter().map(|&c| row[c].clone()).collect();
            r.push(Rat::one());
            r
        })
        .collect();
    let mut pivot_row_of = vec![usize::MAX; k];
    let mut rank = 0;
    for c in 0..k {
        let Some(pivot) = (rank..mat.len()).find(|&r| !mat[r][c].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot);
        let inv = mat[rank][c].clone();
        for x in &mut mat[rank] {
            *x = &*x / &inv;
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][c].is_zero() {
                let f = mat[r][c].clone();
                for j in 0..=k {
                    let delta = &f * &mat[rank][j];
                    mat[r][j] = &mat[r][j] - delta;
                }
            }
        }
        pivot_row_of[c] = rank;
        rank += 1;
    }
    if rank < k {
        return None; // dependent columns: not a basis
    }
    for row in mat.iter().skip(rank) {
        if !row[k].is_zero() {
            return None; // inconsistent
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &c) in cols.iter().enumerate() {
        let v = mat[pivot_row_of[i]][k].clone();
        if v.is_negative() {
            return None;
        }
        x[c] = v;
    }
    Some(x)
}

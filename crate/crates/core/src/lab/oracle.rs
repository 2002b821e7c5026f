//! Brute-force check that distances on a cover pin down one tree.
//!
//! For every binary topology on the taxa, the cord distances give one
//! linear equation per cord in the edge lengths. The oracle keeps the
//! topologies where those equations have a solution with every length
//! strictly positive.

use num::{Signed, Zero};

use super::generate::enumerate_binary_trees;
use crate::cover::TripletCover;
use crate::error::{Error, Result};
use crate::rational::Length;
use crate::reconstruction::PartialDistances;
use crate::tree::PhyloTree;

/// Largest taxon count the oracle will sweep.
pub const ORACLE_CAP: usize = 7;

/// A topology on which the distances are realizable with positive lengths.
#[derive(Debug, Clone)]
pub struct Realization {
    /// The realizing tree; when `dimension > 0` its lengths are one
    /// positive point of the solution set.
    pub tree: PhyloTree,
    /// Dimension of the solution space of the length equations.
    pub dimension: usize,
}

/// Every binary topology with a strictly positive length assignment
/// matching `dist` on every cord.
pub fn uniqueness_oracle(cover: &TripletCover, dist: &PartialDistances) -> Result<Vec<Realization>> {
    let n = cover.taxa().len();
    if n > ORACLE_CAP {
        return Err(Error::Capacity {
            what: "uniqueness oracle taxon count",
            limit: ORACLE_CAP,
            actual: n,
        });
    }
    if cover.taxa() != dist.taxa() || cover.len() != dist.len() {
        return Err(Error::TaxonMismatch);
    }
    let mut out = Vec::new();
    for topology in enumerate_binary_trees(cover.taxa())? {
        let m = topology.edges().len();
        let mut rows = Vec::with_capacity(cover.len());
        let mut rhs = Vec::with_capacity(cover.len());
        for c in cover.cords() {
            let mut row = vec![Length::zero(); m];
            for e in topology.leaf_path_edges(c.lo(), c.hi())? {
                row[e] = Length::from_integer(1.into());
            }
            rows.push(row);
            rhs.push(
                dist.get(c.lo(), c.hi())
                    .ok_or_else(|| Error::invalid("distances missing on a cord"))?
                    .clone(),
            );
        }
        if let Some((lengths, dimension)) = positive_solution(rows, rhs) {
            out.push(Realization {
                tree: topology.with_lengths(lengths)?,
                dimension,
            });
        }
    }
    Ok(out)
}

/// A strictly positive solution of `A x = b` and the dimension of the
/// solution space, or `None`.
pub fn positive_solution(a: Vec<Vec<Length>>, b: Vec<Length>) -> Option<(Vec<Length>, usize)> {
    let m = a.first().map_or(0, Vec::len);
    let (pivots, reduced) = row_reduce(a.clone(), b.clone())?;
    let dimension = m - pivots.len();
    if dimension == 0 {
        let mut x = vec![Length::zero(); m];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = reduced[r][m].clone();
        }
        return x.iter().all(|v| v.is_positive()).then_some((x, 0));
    }
    // maximize t subject to A s + (A 1) t = b, t + u = 1, s, t, u >= 0;
    // a positive solution exists iff the optimum has t > 0
    let one = Length::from_integer(1.into());
    let mut rows: Vec<Vec<Length>> = a
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.push(row.iter().sum());
            r.push(Length::zero());
            r
        })
        .collect();
    let mut rhs = b;
    let mut cap = vec![Length::zero(); m + 2];
    cap[m] = one.clone();
    cap[m + 1] = one.clone();
    rows.push(cap);
    rhs.push(one.clone());
    let mut objective = vec![Length::zero(); m + 2];
    objective[m] = one;
    let (value, x) = simplex_max(&rows, &rhs, &objective)?;
    if !value.is_positive() {
        return None;
    }
    let lengths = x[..m].iter().map(|s| s + &x[m]).collect();
    Some((lengths, dimension))
}

/// Reduced row echelon form of `[A | b]`. Returns the pivot columns and
/// the reduced rows, or `None` if the system is inconsistent.
fn row_reduce(mut a: Vec<Vec<Length>>, b: Vec<Length>) -> Option<(Vec<usize>, Vec<Vec<Length>>)> {
    let m = a.first().map_or(0, Vec::len);
    for (row, v) in a.iter_mut().zip(b) {
        row.push(v);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=m {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    a.truncate(r);
    Some((pivots, a))
}

/// Exact two-phase simplex with Bland's rule: maximize `c x` subject to
/// `A x = b`, `x >= 0`. `None` when infeasible; the objective must be bounded.
fn simplex_max(a: &[Vec<Length>], b: &[Length], c: &[Length]) -> Option<(Length, Vec<Length>)> {
    let rows = a.len();
    let vars = c.len();
    // columns: original variables, then one artificial per row, then rhs
    let width = vars + rows + 1;
    let mut t: Vec<Vec<Length>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row = vec![Length::zero(); width];
        for j in 0..vars {
            row[j] = if flip { -&a[i][j] } else { a[i][j].clone() };
        }
        row[vars + i] = Length::from_integer(1.into());
        row[width - 1] = if flip { -&b[i] } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (vars..vars + rows).collect();

    // phase 1: maximize minus the sum of the artificials
    let mut cost = vec![Length::zero(); vars + rows];
    for j in vars..vars + rows {
        cost[j] = Length::from_integer((-1).into());
    }
    run_simplex(&mut t, &mut basis, &cost, vars + rows)?;
    if t.iter().zip(&basis).any(|(row, &bv)| bv >= vars && !row[width - 1].is_zero()) {
        return None;
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= vars {
            match (0..vars).find(|&j| !t[i][j].is_zero()) {
                Some(j) => pivot(&mut t, &mut basis, i, j),
                None => {
                    t.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2 on the original columns only
    let mut cost2 = c.to_vec();
    cost2.resize(vars + rows, Length::zero());
    run_simplex(&mut t, &mut basis, &cost2, vars)?;
    let mut x = vec![Length::zero(); vars];
    for (row, &bv) in t.iter().zip(&basis) {
        x[bv] = row[width - 1].clone();
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Some((value, x))
}

fn pivot(t: &mut [Vec<Length>], basis: &mut [usize], r: usize, col: usize) {
    let inv = t[r][col].recip();
    for v in t[r].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[col].is_zero() {
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
    }
    basis[r] = col;
}

/// Pivots until no column below `allowed` has positive reduced cost.
/// `None` if unbounded.
fn run_simplex(t: &mut [Vec<Length>], basis: &mut [usize], cost: &[Length], allowed: usize) -> Option<()> {
    let width = t.first().map_or(0, Vec::len);
    loop {
        let reduced = |j: usize| -> Length {
            let mut r = cost[j].clone();
            for (row, &bv) in t.iter().zip(basis.iter()) {
                r -= &cost[bv] * &row[j];
            }
            r
        };
        let Some(col) = (0..allowed).find(|&j| !basis.contains(&j) && reduced(j).is_positive()) else {
            return Some(());
        };
        let mut best: Option<(usize, Length)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col].is_positive() {
                let ratio = &row[width - 1] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let (r, _) = best?;
        pivot(t, basis, r, col);
    }
}

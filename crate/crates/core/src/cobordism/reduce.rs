//! Gaussian elimination of unit entries in a Khovanov differential.
//!
//! Cancelling an entry `phi = D[d][b]` (a unit) leaves the differential
//! `D[y][x] - D[y][b] phi^-1 D[d][x]` on the other generators, with the
//! inclusion `x -> x - phi^-1 D[d][x] b` and the projection
//! `d -> -phi^-1 sum_y D[y][b] y`, `b -> 0`. Both are homotopy equivalences.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::khcomplex::KhComplex;
use crate::sparse::{add_entry, SparseVec};

type Entries = BTreeMap<usize, BigInt>;

/// A complex after cancelling pivot pairs; indices refer to the original
/// generators.
pub(crate) struct Reduced {
    pub remaining: Vec<usize>,
    /// `cols[x][y]` is the reduced differential entry from `x` to `y`.
    pub cols: HashMap<usize, Entries>,
    /// Inclusion of each remaining generator into the original complex.
    pub incl: HashMap<usize, SparseVec>,
    /// For each remaining generator, the row of the projection over the
    /// original generators.
    pub proj: HashMap<usize, SparseVec>,
}

pub(crate) fn reduce(c: &KhComplex, pairs: &[(usize, usize)]) -> Result<Reduced, String> {
    let n = c.len();
    let mut cols: HashMap<usize, Entries> = HashMap::new();
    let mut rows: HashMap<usize, Entries> = HashMap::new();
    for (x, col) in c.differential_sparse().columns().iter().enumerate() {
        for (&y, v) in col {
            cols.entry(x).or_default().insert(y, v.clone());
            rows.entry(y).or_default().insert(x, v.clone());
        }
    }
    let unit = |k: usize| SparseVec::from([(k, BigInt::one())]);
    let mut incl: HashMap<usize, SparseVec> = (0..n).map(|k| (k, unit(k))).collect();
    let mut proj: HashMap<usize, SparseVec> = (0..n).map(|k| (k, unit(k))).collect();
    let mut gone = BTreeSet::new();

    for &(b, d) in pairs {
        if gone.contains(&b) || gone.contains(&d) {
            return Err(format!("generator used by two pivots ({b}, {d})"));
        }
        let phi = cols.get(&b).and_then(|col| col.get(&d)).cloned().unwrap_or_default();
        if phi.abs() != BigInt::one() {
            return Err(format!("pivot ({b}, {d}) has non-unit entry {phi}"));
        }
        // phi^-1 == phi for a unit
        let row_d: Vec<(usize, BigInt)> = rows
            .get(&d)
            .map(|r| r.iter().filter(|&(&x, _)| x != b).map(|(&x, v)| (x, v.clone())).collect())
            .unwrap_or_default();
        let col_b: Vec<(usize, BigInt)> = cols
            .get(&b)
            .map(|r| r.iter().filter(|&(&y, _)| y != d).map(|(&y, v)| (y, v.clone())).collect())
            .unwrap_or_default();
        for (y, dyb) in &col_b {
            for (x, ddx) in &row_d {
                let delta = -(dyb * &phi * ddx);
                bump(&mut cols, &mut rows, *x, *y, delta);
            }
        }
        let inc_b = incl[&b].clone();
        for (x, ddx) in &row_d {
            let k = -(&phi * ddx);
            let v = incl.get_mut(x).unwrap();
            for (&i, a) in &inc_b {
                add_entry(v, i, &k * a);
            }
        }
        let proj_d = proj[&d].clone();
        for (y, dyb) in &col_b {
            let k = -(&phi * dyb);
            let v = proj.get_mut(y).unwrap();
            for (&i, a) in &proj_d {
                add_entry(v, i, &k * a);
            }
        }
        for g in [b, d] {
            if let Some(col) = cols.remove(&g) {
                for y in col.keys() {
                    if let Some(r) = rows.get_mut(y) {
                        r.remove(&g);
                    }
                }
            }
            if let Some(row) = rows.remove(&g) {
                for x in row.keys() {
                    if let Some(col) = cols.get_mut(x) {
                        col.remove(&g);
                    }
                }
            }
            incl.remove(&g);
            proj.remove(&g);
            gone.insert(g);
        }
    }
    let remaining: Vec<usize> = (0..n).filter(|k| !gone.contains(k)).collect();
    Ok(Reduced { remaining, cols, incl, proj })
}

fn bump(cols: &mut HashMap<usize, Entries>, rows: &mut HashMap<usize, Entries>, x: usize, y: usize, delta: BigInt) {
    if delta.is_zero() {
        return;
    }
    let col = cols.entry(x).or_default();
    let v = col.entry(y).or_default();
    *v += &delta;
    let zero = v.is_zero();
    if zero {
        col.remove(&y);
    }
    let row = rows.entry(y).or_default();
    if zero {
        row.remove(&x);
    } else {
        row.insert(x, col[&y].clone());
    }
}

/// Finds signs `eps` on the remaining generators with
/// `eps[y] eps[x] red[y][x] == target[perm y][perm x]` for all entries.
pub(crate) fn solve_signs(
    red: &Reduced,
    perm: &HashMap<usize, usize>,
    target_cols: impl Fn(usize) -> Entries,
) -> Result<HashMap<usize, i32>, String> {
    // adjacency on remaining generators with the required sign relation
    let mut adj: HashMap<usize, Vec<(usize, i32)>> = HashMap::new();
    for &x in &red.remaining {
        let empty = Entries::new();
        let col = red.cols.get(&x).unwrap_or(&empty);
        let tcol = target_cols(perm[&x]);
        if col.len() != tcol.len() {
            return Err(format!("generator {x}: reduced column has {} entries, target has {}", col.len(), tcol.len()));
        }
        for (y, v) in col {
            let Some(w) = tcol.get(&perm[y]) else {
                return Err(format!("entry {x} -> {y} has no counterpart"));
            };
            if v.abs() != w.abs() {
                return Err(format!("entry {x} -> {y} is {v}, counterpart is {w}"));
            }
            let rel = if v == w { 1 } else { -1 };
            adj.entry(x).or_default().push((*y, rel));
            adj.entry(*y).or_default().push((x, rel));
        }
    }
    let mut eps: HashMap<usize, i32> = HashMap::new();
    for &start in &red.remaining {
        if eps.contains_key(&start) {
            continue;
        }
        eps.insert(start, 1);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(w, rel) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                let want = eps[&u] * rel;
                match eps.get(&w) {
                    Some(&s) if s != want => return Err(format!("no consistent sign at generator {w}")),
                    Some(_) => {}
                    None => {
                        eps.insert(w, want);
                        stack.push(w);
                    }
                }
            }
        }
    }
    Ok(eps)
}

//! Chain maps for Reidemeister events.
//!
//! The larger complex is reduced by cancelling every generator whose state
//! contains the small circle inside the local disc against a neighbour along
//! a local crossing. What remains is matched generator by generator with the
//! other side and the signs are solved so the match is a chain isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;

use super::reduce::{reduce, solve_signs, Reduced};
use crate::khcomplex::{Bidegree, KhComplex, Label};
use crate::movie::{find_triangle, LocalChange, MovieEvent};
use crate::pdcode::{Crossing, EdgeId, Slot};
use crate::sparse::{add_entry, SparseMatrix, SparseVec};

pub(crate) fn reidemeister_map(e: &MovieEvent, src: &KhComplex, tgt: &KhComplex) -> Result<SparseMatrix, String> {
    if let MovieEvent::R3 { crossings } = *e {
        return r3_map(crossings, src, tgt);
    }
    let lc = e.local_change(src.diagram()).ok_or("not a Reidemeister event")?;
    let (big, small) = if lc.grows { (tgt, src) } else { (src, tgt) };
    let pairs = internal_pivots(big, &lc.internal, &lc.local_crossings)?;
    let red = reduce(big, &pairs)?;
    let mut perm = HashMap::new();
    let mut hit = vec![false; small.len()];
    for &r in &red.remaining {
        let s = ancestor(big, small, &lc, r)?;
        if std::mem::replace(&mut hit[s], true) {
            return Err(format!("two generators reduce onto small generator {s}"));
        }
        perm.insert(r, s);
    }
    if hit.iter().any(|h| !h) {
        return Err("reduced complex misses generators of the smaller diagram".into());
    }
    let diff = small.differential_sparse();
    let eps = solve_signs(&red, &perm, |s| diff.column(s).clone())?;
    let sign = |r: usize| BigInt::from(eps[&r]);
    if lc.grows {
        let mut cols = vec![SparseVec::new(); small.len()];
        for &r in &red.remaining {
            cols[perm[&r]] = red.incl[&r].iter().map(|(&i, a)| (i, a * sign(r))).collect();
        }
        Ok(SparseMatrix::from_columns(big.len(), cols))
    } else {
        let mut cols = vec![SparseVec::new(); big.len()];
        for &r in &red.remaining {
            for (&z, a) in &red.proj[&r] {
                add_entry(&mut cols[z], perm[&r], a * sign(r));
            }
        }
        Ok(SparseMatrix::from_columns(small.len(), cols))
    }
}

/// Pivot pairs `(b, d)` with `D[d][b] = +-1` cancelling every generator whose
/// smoothing contains a circle made only of `internal` edges.
fn internal_pivots(c: &KhComplex, internal: &BTreeSet<EdgeId>, local: &[usize]) -> Result<Vec<(usize, usize)>, String> {
    let xs = c.diagram().crossings();
    let diff = c.differential_sparse();
    let rows = diff.transpose();
    let mut pairs = Vec::new();
    for (g, gen) in c.generators().iter().enumerate() {
        let sm = c.smoothing(gen.state);
        let Some(ci) = sm.circles().iter().position(|circ| circ.iter().all(|e| internal.contains(e))) else {
            continue;
        };
        // flipping crossing k from 0 to 1 merges when its a- and c-slots are on different circles
        let touches = |k: usize, p: usize, q: usize| {
            let (cp, cq) = (sm.circle_of(xs[k].slots[p]).unwrap(), sm.circle_of(xs[k].slots[q]).unwrap());
            cp != cq && (cp == ci || cq == ci)
        };
        match gen.label(ci) {
            Label::One => {
                let Some(k) = local.iter().copied().find(|&k| gen.state >> k & 1 == 0 && touches(k, 0, 2)) else {
                    continue;
                };
                let t = gen.state | 1 << k;
                let d = unique(diff.column(g).keys().copied().filter(|&y| c.generator(y).state == t), g)?;
                pairs.push((g, d));
            }
            Label::X => {
                let Some(k) = local.iter().copied().find(|&k| gen.state >> k & 1 == 1 && touches(k, 0, 1)) else {
                    continue;
                };
                let s0 = gen.state & !(1 << k);
                let b = unique(rows.column(g).keys().copied().filter(|&z| c.generator(z).state == s0), g)?;
                pairs.push((b, g));
            }
        }
    }
    Ok(pairs)
}

fn unique(mut it: impl Iterator<Item = usize>, g: usize) -> Result<usize, String> {
    match (it.next(), it.next()) {
        (Some(x), None) => Ok(x),
        _ => Err(format!("generator {g} has no unique cancelling partner")),
    }
}

/// The generator of the smaller diagram that a surviving generator of the
/// larger one corresponds to.
fn ancestor(big: &KhComplex, small: &KhComplex, lc: &LocalChange, r: usize) -> Result<usize, String> {
    let g = big.generator(r);
    let mut state = 0u64;
    let mut bit = 0;
    for k in 0..big.diagram().crossing_count() {
        if lc.local_crossings.contains(&k) {
            continue;
        }
        state |= (g.state >> k & 1) << bit;
        bit += 1;
    }
    let target = small.smoothing(state);
    let mut labels = 0u64;
    let mut seen = BTreeSet::new();
    for (ci, circ) in big.smoothing(g.state).circles().iter().enumerate() {
        let mut image = None;
        for e in circ.iter().filter(|e| !lc.internal.contains(e)) {
            let t = target.circle_of(*lc.ancestry.get(e).unwrap_or(e)).ok_or(format!("edge {e} has no ancestor"))?;
            if *image.get_or_insert(t) != t {
                return Err(format!("circle {ci} of generator {r} splits in the smaller diagram"));
            }
        }
        let Some(t) = image else { continue };
        if !seen.insert(t) {
            return Err(format!("two circles of generator {r} merge in the smaller diagram"));
        }
        if g.label(ci).bit() {
            labels |= 1 << t;
        }
    }
    if seen.len() != target.count() {
        return Err(format!("generator {r} misses circles of the smaller diagram"));
    }
    small.index_of(&crate::khcomplex::KhGen { state, labels }).ok_or(format!("generator {r} has no counterpart"))
}

/// An R3 move reduces both sides and matches the survivors by how the
/// smoothing connects the six external ends of the triangle.
fn r3_map(crossings: [usize; 3], src: &KhComplex, tgt: &KhComplex) -> Result<SparseMatrix, String> {
    let tl = find_triangle(src.diagram(), crossings).map_err(|e| e.0)?;
    let tr = find_triangle(tgt.diagram(), crossings).map_err(|e| e.0)?;
    let internal: BTreeSet<EdgeId> = tl.internal.iter().copied().collect();
    if internal != tr.internal.iter().copied().collect() {
        return Err("the triangle edges differ across the move".into());
    }
    let red_l = reduce(src, &internal_pivots(src, &internal, &tl.top)?)?;
    let red_r = reduce(tgt, &internal_pivots(tgt, &internal, &tr.top)?)?;
    let sig_l = signatures(src, &red_l, &internal, &crossings)?;
    let sig_r = signatures(tgt, &red_r, &internal, &crossings)?;
    if sig_l.len() != sig_r.len() {
        return Err(format!("{} survivors before the move, {} after", sig_l.len(), sig_r.len()));
    }
    let perm: HashMap<usize, usize> = sig_l
        .iter()
        .map(|(s, &x)| sig_r.get(s).map(|&y| (x, y)).ok_or(format!("survivor {x} has no counterpart")))
        .collect::<Result<_, _>>()?;
    let eps = solve_signs(&red_l, &perm, |y| red_r.cols.get(&y).cloned().unwrap_or_default())?;
    let mut cols = vec![SparseVec::new(); src.len()];
    for &x in &red_l.remaining {
        let inc = &red_r.incl[&perm[&x]];
        for (&z, a) in &red_l.proj[&x] {
            let k = a * BigInt::from(eps[&x]);
            for (&y, b) in inc {
                add_entry(&mut cols[z], y, &k * b);
            }
        }
    }
    Ok(SparseMatrix::from_columns(tgt.len(), cols))
}

type End = (EdgeId, bool);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    degree: Bidegree,
    outside: u64,
    pairing: BTreeSet<(End, End)>,
    labels: BTreeMap<EdgeId, bool>,
    inner: Option<bool>,
}

fn signatures(
    c: &KhComplex,
    red: &Reduced,
    internal: &BTreeSet<EdgeId>,
    crossings: &[usize; 3],
) -> Result<BTreeMap<Signature, usize>, String> {
    let d = c.diagram();
    let xs = d.crossings();
    let local_mask = crossings.iter().fold(0u64, |m, &k| m | 1 << k);
    let partner = |state: u64, (x, s): Slot| -> Slot {
        let pairs = Crossing::smoothing_pairs(state >> x & 1 == 1);
        let (p, q) = *pairs.iter().find(|&&(p, q)| p == s || q == s).unwrap();
        (x, if p == s { q } else { p })
    };
    let mut out = BTreeMap::new();
    for &r in &red.remaining {
        let g = c.generator(r);
        let mut pairing = BTreeSet::new();
        for &x in crossings {
            for s in 0..4 {
                let e = xs[x].slots[s];
                if internal.contains(&e) {
                    continue;
                }
                let mut cur = partner(g.state, (x, s));
                while internal.contains(&xs[cur.0].slots[cur.1]) {
                    let [p, q] = d.occurrences(xs[cur.0].slots[cur.1]).unwrap();
                    cur = partner(g.state, if p == cur { q } else { p });
                }
                let a = (e, xs[x].is_incoming(s));
                let b = (xs[cur.0].slots[cur.1], xs[cur.0].is_incoming(cur.1));
                pairing.insert((a.min(b), a.max(b)));
            }
        }
        let mut labels = BTreeMap::new();
        let mut inner = None;
        for (ci, circ) in c.smoothing(g.state).circles().iter().enumerate() {
            match circ.iter().filter(|e| !internal.contains(e)).min() {
                Some(&e) => {
                    labels.insert(e, g.label(ci).bit());
                }
                None => inner = Some(g.label(ci).bit()),
            }
        }
        let sig = Signature { degree: c.bidegree_of(r), outside: g.state & !local_mask, pairing, labels, inner };
        if out.insert(sig, r).is_some() {
            return Err(format!("two survivors share the signature of generator {r}"));
        }
    }
    Ok(out)
}

//! Maps of births, deaths, saddles and relabelings. These leave the crossings
//! in place, so each state maps to the same state and only circles change.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::khcomplex::{comultiply, counit, multiply, KhComplex, KhGen, Label};
use crate::movie::MovieEvent;
use crate::pdcode::{EdgeId, Smoothing};
use crate::sparse::{add_entry, SparseMatrix, SparseVec};

/// How the circles of one state correspond across the event.
struct StateCorrespondence {
    fixed: Vec<(usize, usize)>,
    src_changed: Vec<usize>,
    tgt_changed: Vec<usize>,
}

fn correspondence(e: &MovieEvent, src: &KhComplex, tgt: &KhComplex, state: u64) -> StateCorrespondence {
    let rename = |x: EdgeId| match e {
        MovieEvent::Relabel(map) => *map.get(&x).unwrap_or(&x),
        _ => x,
    };
    let key = |c: &[EdgeId], f: &dyn Fn(EdgeId) -> EdgeId| {
        let mut v: Vec<EdgeId> = c.iter().map(|&x| f(x)).collect();
        v.sort_unstable();
        v
    };
    let touched: Vec<EdgeId> = match *e {
        MovieEvent::Birth(k) | MovieEvent::Death(k) => vec![k],
        MovieEvent::SaddleMerge(a, b) | MovieEvent::SaddleSplit(a, b) => vec![a, b],
        _ => vec![],
    };
    let changed = |sm: &Smoothing| -> BTreeSet<usize> { touched.iter().filter_map(|&x| sm.circle_of(x)).collect() };
    let (ss, ts) = (src.smoothing(state), tgt.smoothing(state));
    let (src_set, tgt_set) = (changed(ss), changed(ts));
    let tgt_keys: HashMap<Vec<EdgeId>, usize> = ts
        .circles()
        .iter()
        .enumerate()
        .filter(|(i, _)| !tgt_set.contains(i))
        .map(|(i, c)| (key(c, &|x| x), i))
        .collect();
    let mut fixed = Vec::new();
    let mut src_changed: Vec<usize> = src_set.iter().copied().collect();
    for (i, c) in ss.circles().iter().enumerate().filter(|(i, _)| !src_set.contains(i)) {
        match tgt_keys.get(&key(c, &rename)) {
            Some(&t) => fixed.push((i, t)),
            None => src_changed.push(i),
        }
    }
    let tgt_changed = tgt_set.into_iter().collect();
    StateCorrespondence { fixed, src_changed, tgt_changed }
}

pub(crate) fn planar_map(e: &MovieEvent, src: &KhComplex, tgt: &KhComplex) -> Result<SparseMatrix, String> {
    let mut cache: BTreeMap<u64, StateCorrespondence> = BTreeMap::new();
    let mut cols = Vec::with_capacity(src.len());
    for &g in src.generators() {
        let corr = cache.entry(g.state).or_insert_with(|| correspondence(e, src, tgt, g.state));
        let mut base = 0u64;
        for &(i, t) in &corr.fixed {
            if g.label(i).bit() {
                base |= 1 << t;
            }
        }
        let emit = |extra: &[(usize, Label)]| {
            let mut labels = base;
            for &(t, l) in extra {
                if l.bit() {
                    labels |= 1 << t;
                }
            }
            KhGen { state: g.state, labels }
        };
        let mut terms: Vec<(KhGen, i64)> = Vec::new();
        match (corr.src_changed.as_slice(), corr.tgt_changed.as_slice()) {
            ([], []) => terms.push((emit(&[]), 1)),
            ([], [t]) => terms.push((emit(&[(*t, Label::One)]), 1)),
            ([s], []) => terms.push((emit(&[]), counit(g.label(*s)))),
            ([s1, s2], [t]) => {
                if let Some(l) = multiply(g.label(*s1), g.label(*s2)) {
                    terms.push((emit(&[(*t, l)]), 1));
                }
            }
            ([s], [t1, t2]) => {
                for (l1, l2) in comultiply(g.label(*s)) {
                    terms.push((emit(&[(*t1, l1), (*t2, l2)]), 1));
                }
            }
            (a, b) => return Err(format!("state {}: {} circles become {}", g.state, a.len(), b.len())),
        }
        let mut col = SparseVec::new();
        for (h, c) in terms {
            if c == 0 {
                continue;
            }
            let k = tgt.index_of(&h).ok_or_else(|| format!("image generator {h:?} missing from target"))?;
            add_entry(&mut col, k, BigInt::from(c));
        }
        cols.push(col);
    }
    Ok(SparseMatrix::from_columns(tgt.len(), cols))
}

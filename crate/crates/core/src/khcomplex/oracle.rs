//! Kauffman-bracket state sum for the unnormalized Jones polynomial.
//!
//! Kept separate from the complex construction: circles are counted here by
//! walking slot endpoints directly rather than through diagram smoothings.

use std::collections::HashMap;

use super::poly::LaurentPoly;
use super::KhError;
use crate::pdcode::{Crossing, LinkDiagram, Sign};

/// `(-1)^n- q^(n+ - 2n-) * sum_s (-q)^|s| (q + q^-1)^circles(s)`.
pub fn kauffman_oracle(d: &LinkDiagram, max_crossings: usize) -> Result<LaurentPoly, KhError> {
    let n = d.crossings().len();
    if n > max_crossings {
        return Err(KhError::ResourceLimit { crossings: n, budget: max_crossings });
    }
    let n_minus = d.crossings().iter().filter(|x| x.sign == Sign::Neg).count() as i64;
    let n_plus = n as i64 - n_minus;

    // partner[p] = the other end of the edge at slot endpoint p = 4*x + s
    let mut first: HashMap<u32, usize> = HashMap::new();
    let mut partner = vec![0usize; 4 * n];
    for (x, c) in d.crossings().iter().enumerate() {
        for (s, &e) in c.slots.iter().enumerate() {
            let p = 4 * x + s;
            if let Some(q) = first.remove(&e) {
                partner[p] = q;
                partner[q] = p;
            } else {
                first.insert(e, p);
            }
        }
    }

    let q_circle = LaurentPoly::from_terms(&[(1, 1), (-1, 1)]);
    let mut by_count: HashMap<(usize, usize), i64> = HashMap::new();
    for state in 0u64..(1u64 << n) {
        let circles = count_circles(&partner, n, state) + d.loops().len();
        *by_count.entry((state.count_ones() as usize, circles)).or_default() += 1;
    }
    let mut body = LaurentPoly::zero();
    for ((ones, circles), mult) in by_count {
        let sign = if ones % 2 == 0 { mult } else { -mult };
        let term = &LaurentPoly::monomial(sign, ones as i64) * &q_circle.pow(circles as u32);
        body = &body + &term;
    }
    let sign = if n_minus % 2 == 0 { 1 } else { -1 };
    Ok(&LaurentPoly::monomial(sign, n_plus - 2 * n_minus) * &body)
}

fn count_circles(partner: &[usize], n: usize, state: u64) -> usize {
    let mut seen = vec![false; 4 * n];
    let mut circles = 0;
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        circles += 1;
        let mut p = start;
        loop {
            seen[p] = true;
            // cross the crossing through the smoothing, then run along the edge
            let (x, s) = (p / 4, p % 4);
            let [(a, b), (c, e)] = Crossing::smoothing_pairs(state >> x & 1 == 1);
            let t = if s == a {
                b
            } else if s == b {
                a
            } else if s == c {
                e
            } else {
                c
            };
            let q = 4 * x + t;
            seen[q] = true;
            p = partner[q];
            if p == start {
                break;
            }
        }
    }
    circles
}

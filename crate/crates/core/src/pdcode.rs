//! Planar-diagram (PD) codes for oriented link diagrams.
//!
//! A crossing `X[a,b,c,d]` lists its four incident edges counterclockwise,
//! starting from the incoming under-strand, so the under-strand runs `a -> c`.
//! The over-strand runs `d -> b` on a positive crossing and `b -> d` on a
//! negative one. Crossing-free circles are written `O` (auto-numbered) or
//! `O[k]` (explicit edge id).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type EdgeId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("edge {edge} occurs {count} times (expected 2)")]
    EdgeMultiplicity { edge: EdgeId, count: usize },
    #[error("no consistent strand orientation through edge {0}")]
    OrientationInconsistent(EdgeId),
    #[error("state has {got} bits but the diagram has {expected} crossings")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub slots: [EdgeId; 4],
    pub sign: Sign,
}

impl Crossing {
    pub fn new(slots: [EdgeId; 4], sign: Sign) -> Self {
        Crossing { slots, sign }
    }

    /// Whether the strand through `slot` enters the crossing there.
    pub fn is_incoming(&self, slot: usize) -> bool {
        match slot {
            0 => true,
            2 => false,
            1 => self.sign == Sign::Neg,
            3 => self.sign == Sign::Pos,
            _ => unreachable!("slot index out of range"),
        }
    }

    /// Slot pairs joined by the 0- or 1-smoothing.
    pub fn smoothing_pairs(bit: bool) -> [(usize, usize); 2] {
        if bit {
            [(0, 3), (1, 2)]
        } else {
            [(0, 1), (2, 3)]
        }
    }

    /// The same crossing with the over and under strands exchanged.
    pub fn mirrored(&self) -> Crossing {
        let [a, b, c, d] = self.slots;
        match self.sign {
            // over d -> b becomes the under-strand, entering at d
            Sign::Pos => Crossing::new([d, a, b, c], Sign::Neg),
            // over b -> d becomes the under-strand, entering at b
            Sign::Neg => Crossing::new([b, c, d, a], Sign::Pos),
        }
    }
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.slots;
        write!(f, "X[{a},{b},{c},{d}]")
    }
}

/// A crossing slot: `(crossing index, slot index)`.
pub type Slot = (usize, usize);

/// A validated, oriented link diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    loops: Vec<EdgeId>,
}

impl LinkDiagram {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn unknot() -> Self {
        LinkDiagram { crossings: vec![], loops: vec![1] }
    }

    /// Builds a diagram from crossings whose signs are already known.
    pub fn new(crossings: Vec<Crossing>, mut loops: Vec<EdgeId>) -> Result<Self, PdError> {
        loops.sort_unstable();
        let d = LinkDiagram { crossings, loops };
        d.check_multiplicity()?;
        d.check_orientation()?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn loops(&self) -> &[EdgeId] {
        &self.loops
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty() && self.loops.is_empty()
    }

    pub fn edges(&self) -> BTreeSet<EdgeId> {
        let mut s: BTreeSet<EdgeId> = self.crossings.iter().flat_map(|x| x.slots).collect();
        s.extend(self.loops.iter().copied());
        s
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.loops.contains(&e) || self.crossings.iter().any(|x| x.slots.contains(&e))
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.loops.binary_search(&e).is_ok()
    }

    pub fn max_edge(&self) -> Option<EdgeId> {
        self.edges().into_iter().next_back()
    }

    /// Smallest id strictly above every id in use.
    pub fn fresh_edge(&self) -> EdgeId {
        self.max_edge().map_or(1, |m| m + 1)
    }

    pub fn writhe_counts(&self) -> (usize, usize) {
        let p = self.crossings.iter().filter(|x| x.sign == Sign::Pos).count();
        (p, self.crossings.len() - p)
    }

    pub fn n_plus(&self) -> usize {
        self.writhe_counts().0
    }

    pub fn n_minus(&self) -> usize {
        self.writhe_counts().1
    }

    pub fn writhe(&self) -> i64 {
        let (p, n) = self.writhe_counts();
        p as i64 - n as i64
    }

    /// Both crossing slots occupied by `e`; `None` for loops or unknown edges.
    pub fn occurrences(&self, e: EdgeId) -> Option<[Slot; 2]> {
        let mut found = Vec::with_capacity(2);
        for (i, x) in self.crossings.iter().enumerate() {
            for (s, &f) in x.slots.iter().enumerate() {
                if f == e {
                    found.push((i, s));
                }
            }
        }
        (found.len() == 2).then(|| [found[0], found[1]])
    }

    /// `(tail, head)` slots of a crossing edge along the orientation.
    pub fn endpoints(&self, e: EdgeId) -> Option<(Slot, Slot)> {
        let [p, q] = self.occurrences(e)?;
        if self.crossings[p.0].is_incoming(p.1) {
            Some((q, p))
        } else {
            Some((p, q))
        }
    }

    /// The edge leaving through the opposite slot, i.e. the strand continuation.
    pub fn next_edge(&self, e: EdgeId) -> Option<EdgeId> {
        let (_, (x, s)) = self.endpoints(e)?;
        Some(self.crossings[x].slots[(s + 2) % 4])
    }

    /// Edges of the link component through `e`, in orientation order from `e`.
    pub fn component_of(&self, e: EdgeId) -> Vec<EdgeId> {
        if self.is_loop(e) {
            return vec![e];
        }
        let mut out = vec![e];
        let mut cur = e;
        while let Some(n) = self.next_edge(cur) {
            if n == e {
                break;
            }
            out.push(n);
            cur = n;
        }
        out
    }

    /// Link components, each as an edge list starting from its smallest edge.
    pub fn components(&self) -> Vec<Vec<EdgeId>> {
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for e in self.edges() {
            if seen.contains(&e) {
                continue;
            }
            let c = self.component_of(e);
            seen.extend(c.iter().copied());
            comps.push(c);
        }
        comps
    }

    /// Circles of the smoothing selected by `state` (bit k = crossing k).
    pub fn smooth_state(&self, state: &[bool]) -> Result<Smoothing, PdError> {
        if state.len() != self.crossings.len() {
            return Err(PdError::LengthMismatch { expected: self.crossings.len(), got: state.len() });
        }
        let bits = state.iter().enumerate().fold(0u64, |acc, (k, &b)| acc | ((b as u64) << k));
        Ok(self.smooth(bits))
    }

    pub(crate) fn smooth(&self, bits: u64) -> Smoothing {
        let edges: Vec<EdgeId> =
            self.crossings.iter().flat_map(|x| x.slots).collect::<BTreeSet<_>>().into_iter().collect();
        let idx: HashMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut uf = UnionFind::new(edges.len());
        for (k, x) in self.crossings.iter().enumerate() {
            for (p, q) in Crossing::smoothing_pairs(bits >> k & 1 == 1) {
                uf.union(idx[&x.slots[p]], idx[&x.slots[q]]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
        for (i, &e) in edges.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(e);
        }
        let mut circles: Vec<Vec<EdgeId>> = groups.into_values().collect();
        circles.extend(self.loops.iter().map(|&l| vec![l]));
        circles.sort_by_key(|c| c[0]);
        Smoothing::new(circles)
    }

    /// Rotation-system faces; each face is a cycle of crossing slots.
    pub fn faces(&self) -> Vec<Vec<Slot>> {
        let mut used = BTreeSet::new();
        let mut faces = Vec::new();
        for x in 0..self.crossings.len() {
            for s in 0..4 {
                if used.contains(&(x, s)) {
                    continue;
                }
                let mut face = Vec::new();
                let mut cur = (x, s);
                while used.insert(cur) {
                    face.push(cur);
                    let e = self.crossings[cur.0].slots[cur.1];
                    let [p, q] = self.occurrences(e).expect("validated diagram");
                    let arrive = if p == cur { q } else { p };
                    cur = (arrive.0, (arrive.1 + 1) % 4);
                }
                faces.push(face);
            }
        }
        faces
    }

    /// The faces on the left and right of every crossing edge, as indices
    /// into `faces()`.
    pub fn edge_faces(&self) -> (Vec<Vec<Slot>>, HashMap<EdgeId, [usize; 2]>) {
        let faces = self.faces();
        let mut sides: HashMap<EdgeId, [usize; 2]> = HashMap::new();
        for (f, face) in faces.iter().enumerate() {
            for &(x, s) in face {
                let c = &self.crossings[x];
                // faces are traced turning right, so they lie right of travel
                let along = !c.is_incoming(s);
                let entry = sides.entry(c.slots[s]).or_insert([usize::MAX; 2]);
                entry[if along { 1 } else { 0 }] = f;
            }
        }
        (faces, sides)
    }

    /// Index of the connected piece of the crossing graph holding each
    /// crossing.
    pub fn crossing_pieces(&self) -> Vec<usize> {
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        for e in self.edges() {
            if let Some([p, q]) = self.occurrences(e) {
                uf.union(p.0, q.0);
            }
        }
        (0..n).map(|i| uf.find(i)).collect()
    }

    /// Euler-characteristic test on every connected piece of the crossing graph.
    pub fn is_planar(&self) -> bool {
        let n = self.crossings.len();
        if n == 0 {
            return true;
        }
        let roots = self.crossing_pieces();
        let pieces = (0..n).filter(|&i| roots[i] == i).count();
        // V - E + F = 2 per piece, with E = 2V
        self.faces().len() == n + 2 * pieces
    }

    /// Closure of a braid word on `strands` strands. Generator `i` (1-based)
    /// crosses positions `i` and `i + 1`; a negative entry is its inverse.
    pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram, PdError> {
        let bad = |g: i32| PdError::MalformedToken(format!("sigma{g}"));
        let mut pos: Vec<EdgeId> = (1..=strands as EdgeId).collect();
        let mut next = strands as EdgeId + 1;
        let mut crossings = Vec::with_capacity(word.len());
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if i == 0 || i >= strands {
                return Err(bad(g));
            }
            let (left, right) = (pos[i - 1], pos[i]);
            let (f, h) = (next, next + 1);
            next += 2;
            crossings.push(if g > 0 {
                Crossing::new([right, h, f, left], Sign::Pos)
            } else {
                Crossing::new([left, right, h, f], Sign::Neg)
            });
            pos[i - 1] = f;
            pos[i] = h;
        }
        let close: HashMap<EdgeId, EdgeId> = pos.iter().enumerate().map(|(p, &e)| (e, p as EdgeId + 1)).collect();
        for x in &mut crossings {
            for e in &mut x.slots {
                if let Some(&c) = close.get(e) {
                    *e = c;
                }
            }
        }
        let loops = pos.iter().enumerate().filter(|&(p, &e)| e == p as EdgeId + 1).map(|(_, &e)| e).collect();
        LinkDiagram::new(crossings, loops)
    }

    /// Mirror image: every crossing has over and under exchanged.
    pub fn mirror(&self) -> LinkDiagram {
        LinkDiagram { crossings: self.crossings.iter().map(Crossing::mirrored).collect(), loops: self.loops.clone() }
    }

    pub(crate) fn from_parts_unchecked(crossings: Vec<Crossing>, mut loops: Vec<EdgeId>) -> Self {
        loops.sort_unstable();
        LinkDiagram { crossings, loops }
    }

    fn check_multiplicity(&self) -> Result<(), PdError> {
        let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for x in &self.crossings {
            for &e in &x.slots {
                *count.entry(e).or_default() += 1;
            }
        }
        for &l in &self.loops {
            // a loop edge counts as both of its ends
            *count.entry(l).or_default() += 2;
        }
        match count.into_iter().find(|&(_, c)| c != 2) {
            Some((edge, c)) => Err(PdError::EdgeMultiplicity { edge, count: c }),
            None => Ok(()),
        }
    }

    fn check_orientation(&self) -> Result<(), PdError> {
        for e in self.crossings.iter().flat_map(|x| x.slots) {
            let [p, q] = self.occurrences(e).expect("multiplicity checked");
            let pin = self.crossings[p.0].is_incoming(p.1);
            let qin = self.crossings[q.0].is_incoming(q.1);
            if pin == qin {
                return Err(PdError::OrientationInconsistent(e));
            }
        }
        Ok(())
    }

    /// Infers crossing signs by tracing strands; under-strands fix the direction.
    fn orient(slots: Vec<[EdgeId; 4]>, loops: Vec<EdgeId>) -> Result<Self, PdError> {
        let mut occ: BTreeMap<EdgeId, Vec<Slot>> = BTreeMap::new();
        for (i, s) in slots.iter().enumerate() {
            for (k, &e) in s.iter().enumerate() {
                occ.entry(e).or_default().push((i, k));
            }
        }
        let mut seen_loops = BTreeSet::new();
        for &l in &loops {
            if occ.contains_key(&l) || !seen_loops.insert(l) {
                let count = occ.get(&l).map_or(0, Vec::len) + 4;
                return Err(PdError::EdgeMultiplicity { edge: l, count });
            }
        }
        if let Some((&edge, v)) = occ.iter().find(|(_, v)| v.len() != 2) {
            return Err(PdError::EdgeMultiplicity { edge, count: v.len() });
        }
        let other = |e: EdgeId, at: Slot| -> Slot {
            let v = &occ[&e];
            if v[0] == at {
                v[1]
            } else {
                v[0]
            }
        };
        let mut signs: Vec<Option<Sign>> = vec![None; slots.len()];
        let mut visited: BTreeSet<EdgeId> = BTreeSet::new();
        for (&start, v) in &occ {
            if visited.contains(&start) {
                continue;
            }
            // walk with the convention that we arrive at v[0] first
            let mut arrivals = Vec::new();
            let mut edges = Vec::new();
            let mut at = v[0];
            let mut e = start;
            loop {
                edges.push(e);
                arrivals.push(at);
                let out = (at.0, (at.1 + 2) % 4);
                e = slots[out.0][out.1];
                at = other(e, out);
                if e == start && at == v[0] {
                    break;
                }
            }
            let forward_ok = arrivals.iter().all(|&(_, s)| s != 2);
            let backward_ok = arrivals.iter().all(|&(_, s)| s != 0);
            let forward = if forward_ok {
                true
            } else if backward_ok {
                false
            } else {
                return Err(PdError::OrientationInconsistent(start));
            };
            for &(x, s) in &arrivals {
                let arrive = if forward { s } else { (s + 2) % 4 };
                let sign = match arrive {
                    3 => Some(Sign::Pos),
                    1 => Some(Sign::Neg),
                    _ => None,
                };
                if let Some(sg) = sign {
                    signs[x] = Some(sg);
                }
            }
            visited.extend(edges);
        }
        let crossings = slots
            .into_iter()
            .zip(signs)
            .map(|(s, sg)| Crossing::new(s, sg.expect("every over-strand is traced once")))
            .collect();
        LinkDiagram::new(crossings, loops)
    }
}

impl FromStr for LinkDiagram {
    type Err = PdError;

    fn from_str(text: &str) -> Result<Self, PdError> {
        parse_pd(text)
    }
}

/// Parses a whitespace-separated list of `X[a,b,c,d]`, `O` and `O[k]` tokens.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, PdError> {
    let mut slots = Vec::new();
    let mut explicit = Vec::new();
    let mut anonymous = 0usize;
    for tok in text.split_whitespace() {
        if tok == "O" {
            anonymous += 1;
        } else if let Some(body) = bracketed(tok, 'O') {
            explicit.push(body.parse::<EdgeId>().map_err(|_| PdError::MalformedToken(tok.to_string()))?);
        } else if let Some(body) = bracketed(tok, 'X') {
            let ids: Vec<EdgeId> = body
                .split(',')
                .map(|s| s.parse::<EdgeId>())
                .collect::<Result<_, _>>()
                .map_err(|_| PdError::MalformedToken(tok.to_string()))?;
            let ids: [EdgeId; 4] = ids.try_into().map_err(|_| PdError::MalformedToken(tok.to_string()))?;
            slots.push(ids);
        } else {
            return Err(PdError::MalformedToken(tok.to_string()));
        }
    }
    let next = slots.iter().flatten().chain(explicit.iter()).max().map_or(1, |m| m + 1);
    let mut loops = explicit;
    loops.extend((next..).take(anonymous));
    LinkDiagram::orient(slots, loops)
}

fn bracketed(tok: &str, head: char) -> Option<&str> {
    tok.strip_prefix(head)?.strip_prefix('[')?.strip_suffix(']')
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.crossings {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        for l in &self.loops {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "O[{l}]")?;
        }
        Ok(())
    }
}

/// The circles of one complete smoothing, ordered by smallest member edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothing {
    circles: Vec<Vec<EdgeId>>,
    circle_of: HashMap<EdgeId, usize>,
}

impl Smoothing {
    fn new(circles: Vec<Vec<EdgeId>>) -> Self {
        let circle_of = circles.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&e| (e, i))).collect();
        Smoothing { circles, circle_of }
    }

    pub fn count(&self) -> usize {
        self.circles.len()
    }

    pub fn circles(&self) -> &[Vec<EdgeId>] {
        &self.circles
    }

    pub fn circle_of(&self, e: EdgeId) -> Option<usize> {
        self.circle_of.get(&e).copied()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so results stay deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

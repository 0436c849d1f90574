//! Elementary movie events and their action on PD codes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::pdcode::{Crossing, EdgeId, LinkDiagram, Sign, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Passage {
    Over,
    Under,
}

impl Passage {
    pub fn flip(self) -> Passage {
        match self {
            Passage::Over => Passage::Under,
            Passage::Under => Passage::Over,
        }
    }
}

/// Side of an oriented strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Sign of the new crossing and whether the strand first runs under it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KinkKind {
    pub sign: Sign,
    pub under_first: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MovieEvent {
    Birth(EdgeId),
    Death(EdgeId),
    /// Saddle joining two different link components.
    SaddleMerge(EdgeId, EdgeId),
    /// Saddle cutting one component in two; if the second id is not in the
    /// frame, a new loop with that id is pinched off the first edge.
    SaddleSplit(EdgeId, EdgeId),
    /// Adds a kink on `edge`. The strand continues as `loop_edge` and then
    /// `out_edge` (equal to `edge` when `edge` is a free loop).
    R1Plus {
        edge: EdgeId,
        kind: KinkKind,
        loop_edge: EdgeId,
        out_edge: EdgeId,
    },
    /// Removes the kink whose loop is `loop_edge`.
    R1Minus {
        loop_edge: EdgeId,
    },
    /// Pushes a finger of strand `a` across strand `b`. `b` lies on side
    /// `a_side` of `a` and `a` lies on side `b_side` of `b`. `new` holds the
    /// ids `[a_mid, a_out, b_mid, b_out]`.
    R2Intro {
        a: EdgeId,
        b: EdgeId,
        passage: Passage,
        a_side: Side,
        b_side: Side,
        new: [EdgeId; 4],
    },
    /// Removes the bigon bounded by `a_mid` and `b_mid`.
    R2Elim {
        a_mid: EdgeId,
        b_mid: EdgeId,
    },
    /// Slides a strand across the opposite crossing of a triangular face.
    R3 {
        crossings: [usize; 3],
    },
    /// Renames edges (planar isotopy); unlisted ids are fixed.
    Relabel(BTreeMap<EdgeId, EdgeId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inapplicable(pub String);

fn fail<T>(msg: impl Into<String>) -> Result<T, Inapplicable> {
    Err(Inapplicable(msg.into()))
}

/// How a Reidemeister event relates the larger diagram to the smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalChange {
    /// Edges of the larger diagram that lie inside the local disc.
    pub internal: BTreeSet<EdgeId>,
    /// Edges of the larger diagram renamed in the smaller; others keep their id.
    pub ancestry: BTreeMap<EdgeId, EdgeId>,
    /// Indices of the crossings present only in the larger diagram.
    pub local_crossings: Vec<usize>,
    /// Whether the larger diagram is the frame after the event.
    pub grows: bool,
}

/// A triangular face ready for a third Reidemeister move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub crossings: [usize; 3],
    pub internal: [EdgeId; 3],
    /// The crossing not on the strand that is over at both of its crossings.
    pub opposite: usize,
    /// The two crossings of that top strand.
    pub top: [usize; 2],
}

impl MovieEvent {
    /// A kink on `edge` using the next free ids of `d`.
    pub fn kink(d: &LinkDiagram, edge: EdgeId, kind: KinkKind) -> MovieEvent {
        let l = d.fresh_edge();
        let out_edge = if d.is_loop(edge) { edge } else { l + 1 };
        MovieEvent::R1Plus { edge, kind, loop_edge: l, out_edge }
    }

    /// A finger move of `a` across `b` using the next free ids of `d`.
    pub fn finger(d: &LinkDiagram, a: EdgeId, b: EdgeId, passage: Passage, a_side: Side, b_side: Side) -> MovieEvent {
        let mut next = d.fresh_edge();
        let mut take = || {
            next += 1;
            next - 1
        };
        let a_mid = take();
        let a_out = if d.is_loop(a) { a } else { take() };
        let b_mid = take();
        let b_out = if d.is_loop(b) { b } else { take() };
        MovieEvent::R2Intro { a, b, passage, a_side, b_side, new: [a_mid, a_out, b_mid, b_out] }
    }

    /// The same event on the mirrored frames.
    pub fn mirrored(&self) -> MovieEvent {
        match self.clone() {
            MovieEvent::R1Plus { edge, kind, loop_edge, out_edge } => MovieEvent::R1Plus {
                edge,
                kind: KinkKind { sign: kind.sign.flip(), under_first: !kind.under_first },
                loop_edge,
                out_edge,
            },
            MovieEvent::R2Intro { a, b, passage, a_side, b_side, new } => {
                MovieEvent::R2Intro { a, b, passage: passage.flip(), a_side, b_side, new }
            }
            other => other,
        }
    }

    pub fn is_saddle(&self) -> bool {
        matches!(self, MovieEvent::SaddleMerge(..) | MovieEvent::SaddleSplit(..))
    }

    /// Contribution to the Euler characteristic of the presented surface.
    pub fn euler_contribution(&self) -> i64 {
        match self {
            MovieEvent::Birth(_) | MovieEvent::Death(_) => 1,
            MovieEvent::SaddleMerge(..) | MovieEvent::SaddleSplit(..) => -1,
            _ => 0,
        }
    }

    pub fn apply(&self, d: &LinkDiagram) -> Result<LinkDiagram, Inapplicable> {
        let mut xs: Vec<Crossing> = d.crossings().to_vec();
        let mut loops: Vec<EdgeId> = d.loops().to_vec();
        match *self {
            MovieEvent::Birth(k) => {
                if d.has_edge(k) {
                    return fail(format!("edge {k} already exists"));
                }
                loops.push(k);
            }
            MovieEvent::Death(k) => {
                if !d.is_loop(k) {
                    return fail(format!("{k} is not a crossing-free loop"));
                }
                loops.retain(|&l| l != k);
            }
            MovieEvent::SaddleMerge(a, b) => {
                require_edges(d, &[a, b])?;
                if a == b || same_component(d, a, b) {
                    return fail(format!("edges {a} and {b} lie on one component"));
                }
                match (d.is_loop(a), d.is_loop(b)) {
                    (true, true) | (false, true) => loops.retain(|&l| l != b),
                    (true, false) => loops.retain(|&l| l != a),
                    (false, false) => {
                        if !saddle_site(d, a, b) {
                            return fail(format!("edges {a} and {b} do not face each other"));
                        }
                        swap_heads(d, &mut xs, a, b)
                    }
                }
            }
            MovieEvent::SaddleSplit(a, b) => {
                require_edges(d, &[a])?;
                if !d.has_edge(b) {
                    loops.push(b);
                } else {
                    if a == b || !same_component(d, a, b) {
                        return fail(format!("edges {a} and {b} lie on different components"));
                    }
                    if !saddle_site(d, a, b) {
                        return fail(format!("edges {a} and {b} do not face each other"));
                    }
                    swap_heads(d, &mut xs, a, b);
                }
            }
            MovieEvent::R1Plus { edge, kind, loop_edge, out_edge } => {
                require_edges(d, &[edge])?;
                let is_loop = d.is_loop(edge);
                if d.has_edge(loop_edge)
                    || (is_loop && out_edge != edge)
                    || (!is_loop && (d.has_edge(out_edge) || out_edge == loop_edge))
                {
                    return fail("kink ids must be fresh");
                }
                if is_loop {
                    loops.retain(|&l| l != edge);
                } else {
                    let (_, head) = d.endpoints(edge).unwrap();
                    xs[head.0].slots[head.1] = out_edge;
                }
                let (e, l, o) = (edge, loop_edge, out_edge);
                let slots = match (kind.sign, kind.under_first) {
                    (Sign::Pos, true) => [e, o, l, l],
                    (Sign::Neg, true) => [e, l, l, o],
                    (Sign::Pos, false) => [l, l, o, e],
                    (Sign::Neg, false) => [l, e, o, l],
                };
                xs.push(Crossing::new(slots, kind.sign));
            }
            MovieEvent::R1Minus { loop_edge } => {
                let (x, e_in, e_out) = kink_at(d, loop_edge)?;
                xs.remove(x);
                if e_in == e_out {
                    loops.push(e_in);
                } else {
                    let (_, out_head) = d.endpoints(e_out).unwrap();
                    let (ox, os) = out_head;
                    let ox = if ox > x { ox - 1 } else { ox };
                    xs[ox].slots[os] = e_in;
                }
            }
            MovieEvent::R2Intro { a, b, passage, a_side, b_side, new } => {
                return r2_intro(d, a, b, passage, a_side, b_side, new);
            }
            MovieEvent::R2Elim { a_mid, b_mid } => {
                return r2_elim(d, a_mid, b_mid).map(|(f, _)| f);
            }
            MovieEvent::R3 { crossings } => {
                let t = find_triangle(d, crossings)?;
                return Ok(r3_rewrite(d, &t));
            }
            MovieEvent::Relabel(ref map) => {
                let edges = d.edges();
                let image: BTreeSet<EdgeId> = edges.iter().map(|e| *map.get(e).unwrap_or(e)).collect();
                if image.len() != edges.len() {
                    return fail("relabeling is not injective on the frame");
                }
                let f = |e: EdgeId| *map.get(&e).unwrap_or(&e);
                for x in &mut xs {
                    x.slots = x.slots.map(f);
                }
                loops = loops.into_iter().map(f).collect();
            }
        }
        LinkDiagram::new(xs, loops).map_err(|e| Inapplicable(e.to_string()))
    }

    /// The event undoing `self`, given the frame it was applied to.
    pub fn inverse(&self, before: &LinkDiagram) -> Result<MovieEvent, Inapplicable> {
        Ok(match *self {
            MovieEvent::Birth(k) => MovieEvent::Death(k),
            MovieEvent::Death(k) => MovieEvent::Birth(k),
            MovieEvent::SaddleMerge(a, b) => match (before.is_loop(a), before.is_loop(b)) {
                (true, false) => MovieEvent::SaddleSplit(b, a),
                _ => MovieEvent::SaddleSplit(a, b),
            },
            MovieEvent::SaddleSplit(a, b) => MovieEvent::SaddleMerge(a, b),
            MovieEvent::R1Plus { loop_edge, .. } => MovieEvent::R1Minus { loop_edge },
            MovieEvent::R1Minus { loop_edge } => {
                let (x, e_in, e_out) = kink_at(before, loop_edge)?;
                let c = &before.crossings()[x];
                let under_first = c.slots[0] == e_in;
                MovieEvent::R1Plus {
                    edge: e_in,
                    kind: KinkKind { sign: c.sign, under_first },
                    loop_edge,
                    out_edge: e_out,
                }
            }
            MovieEvent::R2Intro { new, .. } => MovieEvent::R2Elim { a_mid: new[0], b_mid: new[2] },
            MovieEvent::R2Elim { a_mid, b_mid } => {
                let (_, bigon) = r2_elim(before, a_mid, b_mid)?;
                if bigon.joined {
                    return fail("bigon strands are joined outside the bigon");
                }
                MovieEvent::R2Intro {
                    a: bigon.a_in,
                    b: bigon.b_in,
                    passage: bigon.passage,
                    a_side: bigon.a_side,
                    b_side: bigon.b_side,
                    new: [a_mid, bigon.a_out, b_mid, bigon.b_out],
                }
            }
            MovieEvent::R3 { crossings } => MovieEvent::R3 { crossings },
            MovieEvent::Relabel(ref map) => MovieEvent::Relabel(map.iter().map(|(&k, &v)| (v, k)).collect()),
        })
    }

    /// The local disc of a Reidemeister event, or `None` for other events.
    pub fn local_change(&self, before: &LinkDiagram) -> Option<LocalChange> {
        match *self {
            MovieEvent::R1Plus { edge, loop_edge, out_edge, .. } => Some(LocalChange {
                internal: BTreeSet::from([loop_edge]),
                ancestry: BTreeMap::from([(out_edge, edge)]),
                local_crossings: vec![before.crossing_count()],
                grows: true,
            }),
            MovieEvent::R1Minus { loop_edge } => {
                let (x, e_in, e_out) = kink_at(before, loop_edge).ok()?;
                Some(LocalChange {
                    internal: BTreeSet::from([loop_edge]),
                    ancestry: BTreeMap::from([(e_out, e_in)]),
                    local_crossings: vec![x],
                    grows: false,
                })
            }
            MovieEvent::R2Intro { a, b, new, .. } => {
                let n = before.crossing_count();
                Some(LocalChange {
                    internal: BTreeSet::from([new[0], new[2]]),
                    ancestry: BTreeMap::from([(new[1], a), (new[3], b)]),
                    local_crossings: vec![n, n + 1],
                    grows: true,
                })
            }
            MovieEvent::R2Elim { a_mid, b_mid } => {
                let (_, bigon) = r2_elim(before, a_mid, b_mid).ok()?;
                let mut ancestry = BTreeMap::new();
                for (from, to) in [(bigon.a_out, bigon.a_in), (bigon.b_out, bigon.b_in)] {
                    if from != to {
                        ancestry.insert(from, bigon.survivor(to));
                    }
                }
                for e in [bigon.a_in, bigon.b_in] {
                    if bigon.survivor(e) != e {
                        ancestry.insert(e, bigon.survivor(e));
                    }
                }
                let mut local = bigon.crossings.to_vec();
                local.sort_unstable();
                Some(LocalChange {
                    internal: BTreeSet::from([a_mid, b_mid]),
                    ancestry,
                    local_crossings: local,
                    grows: false,
                })
            }
            _ => None,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            MovieEvent::Birth(_) => "birth",
            MovieEvent::Death(_) => "death",
            MovieEvent::SaddleMerge(..) => "merge",
            MovieEvent::SaddleSplit(..) => "split",
            MovieEvent::R1Plus { .. } => "r1+",
            MovieEvent::R1Minus { .. } => "r1-",
            MovieEvent::R2Intro { .. } => "r2+",
            MovieEvent::R2Elim { .. } => "r2-",
            MovieEvent::R3 { .. } => "r3",
            MovieEvent::Relabel(_) => "relabel",
        }
    }
}

fn side_str(s: Side) -> char {
    match s {
        Side::Left => 'L',
        Side::Right => 'R',
    }
}

impl fmt::Display for MovieEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = self.keyword();
        match self {
            MovieEvent::Birth(k) | MovieEvent::Death(k) => write!(f, "{kw} {k}"),
            MovieEvent::SaddleMerge(a, b) | MovieEvent::SaddleSplit(a, b) => write!(f, "{kw} {a} {b}"),
            MovieEvent::R1Plus { edge, kind, loop_edge, out_edge } => {
                let s = if kind.sign == Sign::Pos { '+' } else { '-' };
                let u = if kind.under_first { 'u' } else { 'o' };
                write!(f, "{kw} {edge} {s}{u} {loop_edge} {out_edge}")
            }
            MovieEvent::R1Minus { loop_edge } => write!(f, "{kw} {loop_edge}"),
            MovieEvent::R2Intro { a, b, passage, a_side, b_side, new } => {
                let p = if *passage == Passage::Over { "over" } else { "under" };
                write!(
                    f,
                    "{kw} {a} {b} {p} {}{} {} {} {} {}",
                    side_str(*a_side),
                    side_str(*b_side),
                    new[0],
                    new[1],
                    new[2],
                    new[3]
                )
            }
            MovieEvent::R2Elim { a_mid, b_mid } => write!(f, "{kw} {a_mid} {b_mid}"),
            MovieEvent::R3 { crossings: [x, y, z] } => write!(f, "{kw} {x} {y} {z}"),
            MovieEvent::Relabel(map) => {
                f.write_str(kw)?;
                for (a, b) in map {
                    write!(f, " {a}:{b}")?;
                }
                Ok(())
            }
        }
    }
}

fn require_edges(d: &LinkDiagram, es: &[EdgeId]) -> Result<(), Inapplicable> {
    match es.iter().find(|&&e| !d.has_edge(e)) {
        Some(e) => fail(format!("edge {e} is not in the frame")),
        None => Ok(()),
    }
}

fn same_component(d: &LinkDiagram, a: EdgeId, b: EdgeId) -> bool {
    d.component_of(a).contains(&b)
}

/// Whether `a` and `b` can meet inside a face lying on side `sa` of `a`
/// and side `sb` of `b`. Loops and edges in different pieces can always be
/// brought together.
pub fn shares_face(d: &LinkDiagram, a: EdgeId, sa: Side, b: EdgeId, sb: Side) -> bool {
    let (Some(pa), Some(pb)) = (d.occurrences(a), d.occurrences(b)) else {
        return true;
    };
    let pieces = d.crossing_pieces();
    if pieces[pa[0].0] != pieces[pb[0].0] {
        return true;
    }
    let (_, sides) = d.edge_faces();
    let idx = |s: Side| if s == Side::Left { 0 } else { 1 };
    sides[&a][idx(sa)] == sides[&b][idx(sb)]
}

/// An oriented saddle needs a face on the same side of both edges.
fn saddle_site(d: &LinkDiagram, a: EdgeId, b: EdgeId) -> bool {
    [Side::Left, Side::Right].into_iter().any(|s| shares_face(d, a, s, b, s))
}

/// Exchanges the head ends of two crossing edges (an oriented saddle).
fn swap_heads(d: &LinkDiagram, xs: &mut [Crossing], a: EdgeId, b: EdgeId) {
    let (_, ha) = d.endpoints(a).unwrap();
    let (_, hb) = d.endpoints(b).unwrap();
    xs[ha.0].slots[ha.1] = b;
    xs[hb.0].slots[hb.1] = a;
}

/// `(crossing, incoming edge, outgoing edge)` of the kink with loop `l`.
fn kink_at(d: &LinkDiagram, l: EdgeId) -> Result<(usize, EdgeId, EdgeId), Inapplicable> {
    let Some([p, q]) = d.occurrences(l) else {
        return fail(format!("edge {l} is not a crossing edge"));
    };
    if p.0 != q.0 || (p.1 + 2) % 4 == q.1 {
        return fail(format!("edge {l} is not a kink loop"));
    }
    let x = &d.crossings()[p.0];
    let others: Vec<usize> = (0..4).filter(|&s| s != p.1 && s != q.1).collect();
    let (s_in, s_out) = if x.is_incoming(others[0]) { (others[0], others[1]) } else { (others[1], others[0]) };
    Ok((p.0, x.slots[s_in], x.slots[s_out]))
}

// Compass directions in counterclockwise order.
const E: usize = 0;
const N: usize = 1;
const W: usize = 2;
const S: usize = 3;

fn r2_intro(
    d: &LinkDiagram,
    a: EdgeId,
    b: EdgeId,
    passage: Passage,
    a_side: Side,
    b_side: Side,
    new: [EdgeId; 4],
) -> Result<LinkDiagram, Inapplicable> {
    require_edges(d, &[a, b])?;
    if a == b {
        return fail("a strand cannot pass across itself along one edge");
    }
    let [a_mid, a_out, b_mid, b_out] = new;
    let a_loop = d.is_loop(a);
    let b_loop = d.is_loop(b);
    let mut fresh = vec![a_mid, b_mid];
    if a_loop {
        if a_out != a {
            return fail("a loop keeps its id as the outgoing edge");
        }
    } else {
        fresh.push(a_out);
    }
    if b_loop {
        if b_out != b {
            return fail("a loop keeps its id as the outgoing edge");
        }
    } else {
        fresh.push(b_out);
    }
    let distinct: BTreeSet<_> = fresh.iter().collect();
    if distinct.len() != fresh.len() || fresh.iter().any(|&e| d.has_edge(e)) {
        return fail("R2 ids must be fresh and distinct");
    }

    if !shares_face(d, a, a_side, b, b_side) {
        return fail(format!("edges {a} and {b} share no face on the requested sides"));
    }

    let mut xs: Vec<Crossing> = d.crossings().to_vec();
    let mut loops: Vec<EdgeId> = d.loops().to_vec();
    for (e, out, is_loop) in [(a, a_out, a_loop), (b, b_out, b_loop)] {
        if is_loop {
            loops.retain(|&l| l != e);
        } else {
            let (_, head) = d.endpoints(e).unwrap();
            xs[head.0].slots[head.1] = out;
        }
    }

    // Local picture: `a` runs east, the finger dips toward `b`.
    let (a1_in, a1_out, a2_in, a2_out) = match a_side {
        Side::Right => (N, S, S, N),
        Side::Left => (S, N, N, S),
    };
    let b_east = a_side != b_side;
    // (b_in dir, b_out dir, edge in, edge out) at each of the two crossings
    let (b1, b2) =
        if b_east { ((W, E, b, b_mid), (W, E, b_mid, b_out)) } else { ((E, W, b_mid, b_out), (E, W, b, b_mid)) };
    let mk = |a_in: usize, a_out_dir: usize, a_ids: (EdgeId, EdgeId), bdir: (usize, usize, EdgeId, EdgeId)| {
        let mut at = [0 as EdgeId; 4];
        at[a_in] = a_ids.0;
        at[a_out_dir] = a_ids.1;
        at[bdir.0] = bdir.2;
        at[bdir.1] = bdir.3;
        let (under_in, over_in) = match passage {
            Passage::Over => (bdir.0, a_in),
            Passage::Under => (a_in, bdir.0),
        };
        let slots = [at[under_in], at[(under_in + 1) % 4], at[(under_in + 2) % 4], at[(under_in + 3) % 4]];
        // over strand entering at slot d (three steps ccw) is positive
        let sign = if (over_in + 4 - under_in) % 4 == 3 { Sign::Pos } else { Sign::Neg };
        Crossing::new(slots, sign)
    };
    xs.push(mk(a1_in, a1_out, (a, a_mid), b1));
    xs.push(mk(a2_in, a2_out, (a_mid, a_out), b2));
    LinkDiagram::new(xs, loops).map_err(|e| Inapplicable(e.to_string()))
}

/// The bigon removed by an `R2Elim`, described in terms of the frame before.
#[derive(Clone, Debug)]
pub(crate) struct Bigon {
    pub crossings: [usize; 2],
    pub a_in: EdgeId,
    pub a_out: EdgeId,
    pub b_in: EdgeId,
    pub b_out: EdgeId,
    pub passage: Passage,
    pub a_side: Side,
    pub b_side: Side,
    /// The two strands are connected to each other outside the bigon.
    pub joined: bool,
}

impl Bigon {
    fn survivor(&self, e: EdgeId) -> EdgeId {
        if self.joined && (e == self.b_in || e == self.b_out || e == self.a_out) {
            self.a_in
        } else {
            e
        }
    }
}

fn r2_elim(d: &LinkDiagram, a_mid: EdgeId, b_mid: EdgeId) -> Result<(LinkDiagram, Bigon), Inapplicable> {
    let (Some((ta, ha)), Some((tb, hb))) = (d.endpoints(a_mid), d.endpoints(b_mid)) else {
        return fail("bigon edges must be crossing edges");
    };
    if ta.0 == ha.0 || tb.0 == hb.0 {
        return fail("bigon edges must join two distinct crossings");
    }
    let pair_a = BTreeSet::from([ta.0, ha.0]);
    let pair_b = BTreeSet::from([tb.0, hb.0]);
    if pair_a != pair_b || a_mid == b_mid {
        return fail(format!("edges {a_mid} and {b_mid} do not bound a bigon"));
    }
    let xs = d.crossings();
    let mids = BTreeSet::from([a_mid, b_mid]);
    let is_face = d
        .faces()
        .iter()
        .any(|f| f.len() == 2 && f.iter().map(|&(x, s)| xs[x].slots[s]).collect::<BTreeSet<_>>() == mids);
    if !is_face {
        return fail(format!("edges {a_mid} and {b_mid} do not bound a bigon face"));
    }
    let over_at = |s: Slot| s.1 % 2 == 1;
    if over_at(ta) != over_at(ha) {
        return fail("one strand must be on top at both bigon crossings");
    }
    let a_in = xs[ta.0].slots[(ta.1 + 2) % 4];
    let a_out = xs[ha.0].slots[(ha.1 + 2) % 4];
    let b_in = xs[tb.0].slots[(tb.1 + 2) % 4];
    let b_out = xs[hb.0].slots[(hb.1 + 2) % 4];
    let passage = if over_at(ta) { Passage::Over } else { Passage::Under };

    // recover the finger geometry at the first crossing of `a`
    let y = ta.0;
    let a_in_slot = (ta.1 + 2) % 4;
    let b_in_slot = (0..4).find(|&s| s % 2 != a_in_slot % 2 && xs[y].is_incoming(s)).unwrap();
    let r = (b_in_slot + 4 - a_in_slot) % 4;
    let b_first_here = tb.0 == y;
    let (a_side, b_side) = match (r, b_first_here) {
        (1, true) => (Side::Right, Side::Left),
        (3, false) => (Side::Right, Side::Right),
        (3, true) => (Side::Left, Side::Right),
        _ => (Side::Left, Side::Left),
    };

    let joined = [a_in, a_out].iter().any(|e| [b_in, b_out].contains(e));
    let bigon = Bigon { crossings: [ta.0, ha.0], a_in, a_out, b_in, b_out, passage, a_side, b_side, joined };

    // rebuild: drop both crossings, then glue each strand's outer edges
    let gone = [ta.0, ha.0];
    let mut rename: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for e in [a_out, b_in, b_out, a_in] {
        let s = bigon.survivor(e);
        if e != s {
            rename.insert(e, s);
        }
    }
    if a_out != a_in && !bigon.joined {
        rename.insert(a_out, a_in);
    }
    if b_out != b_in && !bigon.joined {
        rename.insert(b_out, b_in);
    }
    let mut new_xs = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        if gone.contains(&i) {
            continue;
        }
        let mut x = x.clone();
        x.slots = x.slots.map(|e| *rename.get(&e).unwrap_or(&e));
        new_xs.push(x);
    }
    let mut loops: Vec<EdgeId> = d.loops().to_vec();
    let survivors: BTreeSet<EdgeId> = [a_in, b_in].iter().map(|&e| bigon.survivor(e)).collect();
    for s in survivors {
        if !new_xs.iter().any(|x| x.slots.contains(&s)) {
            loops.push(s);
        }
    }
    let f = LinkDiagram::new(new_xs, loops).map_err(|e| Inapplicable(e.to_string()))?;
    Ok((f, bigon))
}

/// Checks that three crossings bound a triangular face with one strand on
/// top at both of its crossings and one at the bottom at both.
pub fn find_triangle(d: &LinkDiagram, crossings: [usize; 3]) -> Result<Triangle, Inapplicable> {
    let n = d.crossing_count();
    let set: BTreeSet<usize> = crossings.iter().copied().collect();
    if set.len() != 3 || crossings.iter().any(|&c| c >= n) {
        return fail("R3 needs three distinct crossing indices");
    }
    let xs = d.crossings();
    let face = d.faces().into_iter().find(|f| f.len() == 3 && f.iter().map(|s| s.0).collect::<BTreeSet<_>>() == set);
    let Some(face) = face else {
        return fail("the three crossings do not bound a triangular face");
    };
    let internal: Vec<EdgeId> = face.iter().map(|&(x, s)| xs[x].slots[s]).collect();
    let mut top = None;
    let mut bottom = false;
    for &e in &internal {
        let [p, q] = d.occurrences(e).unwrap();
        match (p.1 % 2 == 1, q.1 % 2 == 1) {
            (true, true) => top = Some((e, [p.0, q.0])),
            (false, false) => bottom = true,
            _ => {}
        }
    }
    let Some((_, top_xs)) = top else {
        return fail("no strand is on top at both of its triangle crossings");
    };
    if !bottom {
        return fail("no strand is at the bottom at both of its triangle crossings");
    }
    let opposite = *crossings.iter().find(|c| !top_xs.contains(c)).unwrap();
    let mut top_sorted = top_xs;
    top_sorted.sort_unstable();
    Ok(Triangle { crossings, internal: [internal[0], internal[1], internal[2]], opposite, top: top_sorted })
}

fn r3_rewrite(d: &LinkDiagram, t: &Triangle) -> LinkDiagram {
    let old = d.crossings();
    let mut xs = old.to_vec();
    for &e in &t.internal {
        let (tail, head) = d.endpoints(e).unwrap();
        let f_in = old[tail.0].slots[(tail.1 + 2) % 4];
        let f_out = old[head.0].slots[(head.1 + 2) % 4];
        xs[tail.0].slots[(tail.1 + 2) % 4] = e;
        xs[tail.0].slots[tail.1] = f_out;
        xs[head.0].slots[head.1] = f_in;
        xs[head.0].slots[(head.1 + 2) % 4] = e;
    }
    LinkDiagram::from_parts_unchecked(xs, d.loops().to_vec())
}

//! Movie generators and rewrites.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::event::{shares_face, Passage, Side};
use super::{Movie, MovieError, MovieEvent};
use crate::pdcode::{EdgeId, LinkDiagram, UnionFind};

/// Closed movie of an unknotted genus-`g` surface: a birth, `g` split/merge
/// pairs on the standing circle, then a death.
pub fn trivial_surface_movie(genus: usize) -> Movie {
    let mut events = vec![MovieEvent::Birth(1)];
    for _ in 0..genus {
        events.push(MovieEvent::SaddleSplit(1, 2));
        events.push(MovieEvent::SaddleMerge(1, 2));
    }
    events.push(MovieEvent::Death(1));
    Movie::new(LinkDiagram::empty(), events).expect("trivial surface movie is valid")
}

/// A band from loop `from` to loop `to`. Its finger crosses the listed loops
/// in order before it is merged into `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonBand {
    pub from: EdgeId,
    pub to: EdgeId,
    pub word: Vec<(EdgeId, Passage)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonPresentation {
    pub loops: Vec<EdgeId>,
    pub bands: Vec<RibbonBand>,
}

impl RibbonPresentation {
    /// Two loops joined by one band that runs over and then under loop 1,
    /// over its own loop 2, and attaches to loop 1. The middle frame is the
    /// square knot.
    pub fn spun_trefoil() -> Self {
        RibbonPresentation {
            loops: vec![1, 2],
            bands: vec![RibbonBand {
                from: 2,
                to: 1,
                word: vec![(1, Passage::Over), (1, Passage::Under), (2, Passage::Over)],
            }],
        }
    }

    /// The spun-trefoil band with one more passage under loop 1. The middle
    /// frame has the Jones polynomial of the stevedore knot 6_1.
    pub fn stevedore() -> Self {
        RibbonPresentation {
            loops: vec![1, 2],
            bands: vec![RibbonBand {
                from: 2,
                to: 1,
                word: vec![(1, Passage::Over), (1, Passage::Under), (2, Passage::Over), (1, Passage::Under)],
            }],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Origin {
    Loop(EdgeId),
    Finger(usize),
}

const SIDE_ORDER: [(Side, Side); 4] =
    [(Side::Right, Side::Right), (Side::Left, Side::Left), (Side::Right, Side::Left), (Side::Left, Side::Right)];

/// Symmetric closed movie of a ribbon 2-knot: births, finger moves and a
/// merge per band, then the inverse of everything in reverse order.
pub fn ribbon_2knot_movie(p: &RibbonPresentation) -> Result<Movie, MovieError> {
    let loops: BTreeSet<EdgeId> = p.loops.iter().copied().collect();
    if loops.is_empty() || loops.len() != p.loops.len() || p.bands.len() + 1 != loops.len() {
        return Err(MovieError::NotATree);
    }
    let index: HashMap<EdgeId, usize> = p.loops.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut uf = UnionFind::new(loops.len());
    for band in &p.bands {
        let (Some(&i), Some(&j)) = (index.get(&band.from), index.get(&band.to)) else {
            return Err(MovieError::NotATree);
        };
        if uf.find(i) == uf.find(j) {
            return Err(MovieError::NotATree);
        }
        uf.union(i, j);
        if let Some((l, _)) = band.word.iter().find(|(l, _)| !loops.contains(l)) {
            return Err(MovieError::BadCrossingWord(format!("loop {l} is not in the presentation")));
        }
    }

    let mut frame = LinkDiagram::empty();
    let mut events = Vec::new();
    let mut origin: BTreeMap<EdgeId, Origin> = BTreeMap::new();
    for &l in &p.loops {
        let e = MovieEvent::Birth(l);
        frame = e.apply(&frame).expect("loop ids are distinct");
        events.push(e);
        origin.insert(l, Origin::Loop(l));
    }

    for (k, band) in p.bands.iter().enumerate() {
        // the side the finger leaves from decides whether the final saddle
        // is orientable, so retry with later first-step choices
        let mut last_err = None;
        let mut built = None;
        for skip in 0..8 {
            match build_band(&frame, &origin, band, k, skip) {
                Ok(b) => {
                    built = Some(b);
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        let Some((evs, f, o)) = built else {
            return Err(last_err.unwrap());
        };
        events.extend(evs);
        frame = f;
        origin = o;
    }

    let half = Movie::new(LinkDiagram::empty(), events.clone())?;
    for (t, e) in half.events().iter().enumerate().rev() {
        events.push(e.inverse(&half.frames()[t]).map_err(|r| MovieError::BadCrossingWord(r.0))?);
    }
    let movie = Movie::new(LinkDiagram::empty(), events)?;
    if let Some(t) = movie.frames().iter().position(|f| !f.is_planar()) {
        return Err(MovieError::BadCrossingWord(format!("frame {t} is not planar")));
    }
    Ok(movie)
}

type BandResult = (Vec<MovieEvent>, LinkDiagram, BTreeMap<EdgeId, Origin>);

/// Finger moves and the closing merge of one band. The first finger move
/// uses the `skip`-th admissible site.
fn build_band(
    frame: &LinkDiagram,
    origin: &BTreeMap<EdgeId, Origin>,
    band: &RibbonBand,
    k: usize,
    skip: usize,
) -> Result<BandResult, MovieError> {
    let mut frame = frame.clone();
    let mut origin = origin.clone();
    let mut events = Vec::new();
    let mut tip: Option<EdgeId> = None;
    let mut crossed: Option<EdgeId> = None;
    for &(target, passage) in &band.word {
        let tips: Vec<EdgeId> = match tip {
            Some(t) => vec![t],
            None => edges_from(&origin, Origin::Loop(band.from)),
        };
        let mut sites = tips.iter().flat_map(|&a| {
            let frame = &frame;
            edges_from(&origin, Origin::Loop(target)).into_iter().flat_map(move |b| {
                SIDE_ORDER
                    .iter()
                    .filter(move |&&(sa, sb)| a != b && open_face(frame, a, sa, b, sb, crossed))
                    .map(move |&(sa, sb)| MovieEvent::finger(frame, a, b, passage, sa, sb))
            })
        });
        let found = if tip.is_none() { sites.nth(skip) } else { sites.next() };
        let Some(e) = found else {
            return Err(MovieError::BadCrossingWord(format!("band {k} cannot reach loop {target}")));
        };
        let MovieEvent::R2Intro { a, b, new, .. } = e else { unreachable!() };
        let a_origin = if tip.is_some() { Origin::Finger(k) } else { origin[&a] };
        origin.insert(a, a_origin);
        origin.insert(new[0], Origin::Finger(k));
        origin.insert(new[1], a_origin);
        origin.insert(new[2], origin[&b]);
        origin.insert(new[3], origin[&b]);
        tip = Some(new[0]);
        crossed = Some(new[2]);
        frame = e.apply(&frame).map_err(|r| MovieError::BadCrossingWord(r.0))?;
        events.push(e);
    }
    let tips: Vec<EdgeId> = match tip {
        Some(t) => vec![t],
        None => edges_from(&origin, Origin::Loop(band.from)),
    };
    let merge = tips.iter().find_map(|&a| {
        edges_from(&origin, Origin::Loop(band.to)).into_iter().find_map(|b| {
            let e = MovieEvent::SaddleMerge(a, b);
            let faces_ok = [Side::Left, Side::Right].iter().any(|&s| open_face(&frame, a, s, b, s, crossed));
            (faces_ok && e.apply(&frame).is_ok()).then_some(e)
        })
    });
    let Some(e) = merge else {
        return Err(MovieError::BadCrossingWord(format!("band {k} cannot be attached to loop {}", band.to)));
    };
    frame = e.apply(&frame).expect("checked above");
    events.push(e);
    Ok((events, frame, origin))
}

fn edges_from(origin: &BTreeMap<EdgeId, Origin>, o: Origin) -> Vec<EdgeId> {
    origin.iter().filter(|&(_, &v)| v == o).map(|(&e, _)| e).collect()
}

/// A shared face away from the bigon the finger has just made, so it does
/// not simply re-cross the strand it has passed.
fn open_face(d: &LinkDiagram, a: EdgeId, sa: Side, b: EdgeId, sb: Side, avoid: Option<EdgeId>) -> bool {
    if !shares_face(d, a, sa, b, sb) {
        return false;
    }
    let (Some(pa), Some(pb)) = (d.occurrences(a), d.occurrences(b)) else {
        return true;
    };
    let pieces = d.crossing_pieces();
    if pieces[pa[0].0] != pieces[pb[0].0] {
        return true;
    }
    let (faces, sides) = d.edge_faces();
    let f = sides[&a][if sa == Side::Left { 0 } else { 1 }];
    let xs = d.crossings();
    avoid.is_none_or(|m| faces[f].iter().all(|&(x, s)| xs[x].slots[s] != m))
}

/// Inserts a split and an immediate re-merge of a small circle at edge
/// `site` of frame `frame_index`, adding a trivial 1-handle.
pub fn attach_handle(m: &Movie, frame_index: usize, site: EdgeId) -> Result<Movie, MovieError> {
    let Some(frame) = m.frames().get(frame_index) else {
        return Err(MovieError::BadSite(format!("movie has no frame {frame_index}")));
    };
    if !frame.has_edge(site) {
        return Err(MovieError::BadSite(format!("edge {site} is not in frame {frame_index}")));
    }
    let k = frame.fresh_edge();
    let mut events = m.events().to_vec();
    events.splice(frame_index..frame_index, [MovieEvent::SaddleSplit(site, k), MovieEvent::SaddleMerge(site, k)]);
    Movie::new(m.first().clone(), events)
}

/// Pairs `(i, j)` where event `i` introduces a bigon and event `j` removes
/// that same bigon.
pub fn matching_windows(m: &Movie) -> Vec<(usize, usize)> {
    let ev = m.events();
    let mut out = Vec::new();
    for (i, e) in ev.iter().enumerate() {
        if let MovieEvent::R2Intro { new, .. } = e {
            let target = MovieEvent::R2Elim { a_mid: new[0], b_mid: new[2] };
            if let Some(j) = (i + 1..ev.len()).find(|&j| ev[j] == target) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Flips the passage of the finger move opening `window` and replays the
/// movie; the closing bigon removal is unchanged.
pub fn ribbon_move_rewrite(m: &Movie, window: (usize, usize)) -> Result<Movie, MovieError> {
    let (i, j) = window;
    if !matching_windows(m).contains(&window) {
        return Err(MovieError::TemplateMismatch(format!(
            "events {i}..{j} are not a bigon introduction and its removal"
        )));
    }
    let mut events = m.events().to_vec();
    if let MovieEvent::R2Intro { passage, .. } = &mut events[i] {
        *passage = passage.flip();
    }
    Movie::new(m.first().clone(), events).map_err(|e| MovieError::TemplateMismatch(e.to_string()))
}

/// A movie from `d` to itself made of relabelings that rotate the diagram
/// through a symmetry of its PD code and compose to the identity.
pub fn rotation_movie(d: &LinkDiagram) -> Movie {
    if d.edges().is_empty() {
        return Movie::new(d.clone(), vec![]).unwrap();
    }
    let events = match best_symmetry(d) {
        Some((sigma, order)) => vec![MovieEvent::Relabel(sigma); order],
        None => vec![MovieEvent::Relabel(BTreeMap::new())],
    };
    let m = Movie::new(d.clone(), events).expect("symmetries relabel bijectively");
    debug_assert_eq!(m.last(), d);
    m
}

/// The nontrivial edge permutation of largest order that maps the set of
/// crossings to itself, listing only moved edges.
fn best_symmetry(d: &LinkDiagram) -> Option<(BTreeMap<EdgeId, EdgeId>, usize)> {
    let xs = d.crossings();
    if xs.is_empty() || !d.crossing_pieces().iter().all(|&p| p == 0) {
        return None;
    }
    let mut best: Option<(BTreeMap<EdgeId, EdgeId>, usize)> = None;
    for target in 1..xs.len() {
        let Some(sigma) = symmetry_sending(d, target) else { continue };
        let order = permutation_order(&sigma);
        if best.as_ref().is_none_or(|(_, o)| order > *o) {
            best = Some((sigma, order));
        }
    }
    best.map(|(s, o)| (s.into_iter().filter(|(a, b)| a != b).collect(), o))
}

/// The automorphism taking crossing 0 to crossing `target`, if any.
fn symmetry_sending(d: &LinkDiagram, target: usize) -> Option<BTreeMap<EdgeId, EdgeId>> {
    let xs = d.crossings();
    let mut cmap: Vec<Option<usize>> = vec![None; xs.len()];
    let mut used = vec![false; xs.len()];
    let mut sigma: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut queue = VecDeque::from([(0usize, target)]);
    while let Some((x, y)) = queue.pop_front() {
        match cmap[x] {
            Some(z) if z == y => continue,
            Some(_) => return None,
            None if used[y] || xs[x].sign != xs[y].sign => return None,
            None => {}
        }
        cmap[x] = Some(y);
        used[y] = true;
        for s in 0..4 {
            let (e, f) = (xs[x].slots[s], xs[y].slots[s]);
            match sigma.get(&e) {
                Some(&g) if g != f => return None,
                Some(_) => continue,
                None => {
                    sigma.insert(e, f);
                }
            }
            let [p, q] = d.occurrences(e)?;
            let other = if p == (x, s) { q } else { p };
            let [p2, q2] = d.occurrences(f)?;
            let other2 = if p2 == (y, s) { q2 } else { p2 };
            if other.1 != other2.1 {
                return None;
            }
            queue.push_back((other.0, other2.0));
        }
    }
    if cmap.iter().any(Option::is_none) {
        return None;
    }
    for &l in d.loops() {
        sigma.insert(l, l);
    }
    Some(sigma)
}

fn permutation_order(sigma: &BTreeMap<EdgeId, EdgeId>) -> usize {
    let mut order = 1usize;
    let mut seen = BTreeSet::new();
    for &start in sigma.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        loop {
            seen.insert(cur);
            len += 1;
            cur = sigma[&cur];
            if cur == start {
                break;
            }
        }
        order = num_integer::lcm(order, len);
    }
    order
}

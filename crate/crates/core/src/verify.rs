//! Named invariant suites. Each runs a list of checks and reports every one,
//! so a failure names the offending diagram, window or event.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cobordism::{
    compose_movie_with, event_chain_map, homology_maps_equal, homology_maps_equal_up_to_sign, kj_number_with, ChainMap,
    CobordismError,
};
use crate::fixtures::named_diagram;
use crate::khcomplex::{kauffman_oracle, KhComplex};
use crate::movie::{
    find_triangle, matching_windows, ribbon_move_rewrite, rotation_movie, KinkKind, Movie, MovieEvent, Passage, Side,
};
use crate::pdcode::{LinkDiagram, Sign};

pub const SUITES: [&str; 5] = ["ribbon-invariance", "figure4", "rotation", "reidemeister", "euler-jones"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_result(name: impl Into<String>, r: Result<(bool, String), CobordismError>) -> Check {
        let (passed, detail) = r.unwrap_or_else(|e| (false, e.to_string()));
        Check { name: name.into(), passed, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        writeln!(f, "{}: {}/{} checks passed", self.suite, ok, self.checks.len())
    }
}

fn complex(d: &LinkDiagram, max: usize) -> Result<Arc<KhComplex>, CobordismError> {
    Ok(Arc::new(KhComplex::build(d, max)?))
}

/// The KJ number of `m` and of its rewrite at every matching window.
pub fn ribbon_invariance(m: &Movie, max: usize) -> Report {
    let mut checks = Vec::new();
    let base = kj_number_with(m, max);
    checks.push(Check::from_result("original", base.clone().map(|k| (true, k.to_string()))));
    let windows = matching_windows(m);
    if windows.is_empty() {
        checks.push(Check { name: "windows".into(), passed: false, detail: "movie has no matching window".into() });
    }
    for w in windows {
        let r = ribbon_move_rewrite(m, w).map_err(CobordismError::from).and_then(|r| kj_number_with(&r, max));
        let outcome = match (&base, r) {
            (Ok(b), Ok(k)) => Ok((b.value == k.value && b.shift == k.shift, k.to_string())),
            (_, Err(e)) => Err(e),
            (Err(_), Ok(k)) => Ok((false, format!("{k}, original failed"))),
        };
        checks.push(Check::from_result(format!("window {}..{}", w.0, w.1), outcome));
    }
    Report { suite: "ribbon-invariance".into(), checks }
}

/// A small circle beside edge `arc` of `ctx` that passes over (or under) the
/// arc to its other side: a finger move, the removal of the opposite bigon
/// and a relabel restoring the circle's id.
pub fn figure4_movie(ctx: &LinkDiagram, passage: Passage) -> Result<Movie, CobordismError> {
    let arc = ctx.edges().into_iter().next().ok_or(CobordismError::ShapeMismatch("empty context".into()))?;
    let k = ctx.fresh_edge();
    let mut loops = ctx.loops().to_vec();
    loops.push(k);
    let start = LinkDiagram::new(ctx.crossings().to_vec(), loops).expect("adding a free loop keeps the diagram valid");
    let e = MovieEvent::finger(&start, k, arc, passage, Side::Right, Side::Right);
    let MovieEvent::R2Intro { new, .. } = e else { unreachable!() };
    let events = vec![
        e,
        MovieEvent::R2Elim { a_mid: new[1], b_mid: new[2] },
        MovieEvent::Relabel(BTreeMap::from([(new[0], k)])),
    ];
    let m = Movie::new(start, events)?;
    debug_assert_eq!(m.first(), m.last());
    Ok(m)
}

/// The diagrams closing the arc with 0, 1 and 3 crossings.
pub fn figure4_contexts() -> Vec<(String, LinkDiagram)> {
    ["unknot", "unknot-kink", "trefoil"].iter().map(|&n| (n.to_string(), named_diagram(n).unwrap())).collect()
}

/// The over- and under-passage movies agree on homology up to sign.
pub fn figure4(contexts: &[(String, LinkDiagram)], max: usize) -> Report {
    let checks = contexts
        .iter()
        .map(|(name, d)| {
            let r = (|| {
                let over = compose_movie_with(&figure4_movie(d, Passage::Over)?, max)?;
                let under = compose_movie_with(&figure4_movie(d, Passage::Under)?, max)?;
                let same = homology_maps_equal_up_to_sign(&over, &under)?;
                Ok((same, format!("{} generators", over.source().len())))
            })();
            Check::from_result(name.clone(), r)
        })
        .collect();
    Report { suite: "figure4".into(), checks }
}

/// A full turn through the symmetries of each diagram induces the identity.
pub fn rotation(diagrams: &[(String, LinkDiagram)], max: usize) -> Report {
    let checks = diagrams
        .iter()
        .map(|(name, d)| {
            let r = (|| {
                let m = rotation_movie(d);
                let f = compose_movie_with(&m, max)?;
                let id = ChainMap::identity(complex(d, max)?);
                Ok((homology_maps_equal(&f, &id)?, format!("{} relabel steps", m.len())))
            })();
            Check::from_result(name.clone(), r)
        })
        .collect();
    Report { suite: "rotation".into(), checks }
}

pub fn rotation_diagrams() -> Vec<(String, LinkDiagram)> {
    ["trefoil", "figure-eight"].iter().map(|&n| (n.to_string(), named_diagram(n).unwrap())).collect()
}

/// Kinks of every kind, a finger move with each passage, and a third move
/// where a triangle exists, each with its inverse.
pub fn reidemeister_events(d: &LinkDiagram) -> Vec<(MovieEvent, LinkDiagram)> {
    let mut out = Vec::new();
    let mut push = |e: MovieEvent, before: &LinkDiagram| {
        if let Ok(after) = e.apply(before) {
            let inv = e.inverse(before);
            out.push((e, before.clone()));
            if let Ok(inv) = inv {
                out.push((inv, after));
            }
        }
    };
    let edges: Vec<_> = d.edges().into_iter().collect();
    let Some(&first) = edges.first() else { return out };
    for sign in [Sign::Pos, Sign::Neg] {
        for under_first in [true, false] {
            push(MovieEvent::kink(d, first, KinkKind { sign, under_first }), d);
        }
    }
    let sides =
        [(Side::Right, Side::Right), (Side::Left, Side::Left), (Side::Right, Side::Left), (Side::Left, Side::Right)];
    'fingers: for &b in edges.iter().skip(1) {
        for &(sa, sb) in &sides {
            let es = [Passage::Over, Passage::Under].map(|p| MovieEvent::finger(d, first, b, p, sa, sb));
            if es.iter().all(|e| e.apply(d).is_ok()) {
                for e in es {
                    push(e, d);
                }
                break 'fingers;
            }
        }
    }
    let n = d.crossing_count();
    'triangles: for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if find_triangle(d, [x, y, z]).is_ok() {
                    push(MovieEvent::R3 { crossings: [x, y, z] }, d);
                    break 'triangles;
                }
            }
        }
    }
    out
}

/// Diagrams for the Reidemeister suite; the braid closures carry triangles.
pub fn reidemeister_diagrams() -> Vec<(String, LinkDiagram)> {
    let mut ds: Vec<(String, LinkDiagram)> = ["unknot", "unknot-kink", "hopf", "trefoil", "figure-eight"]
        .iter()
        .map(|&n| (n.to_string(), named_diagram(n).unwrap()))
        .collect();
    for word in [[1, 2, 1], [-1, -2, -1], [1, -2, 1]] {
        let name = format!("braid{word:?}");
        ds.push((name, LinkDiagram::braid_closure(3, &word).unwrap()));
    }
    ds
}

/// Every event map is a chain map inducing an isomorphism in every bidegree.
pub fn reidemeister(diagrams: &[(String, LinkDiagram)], max: usize) -> Report {
    let mut checks = Vec::new();
    for (name, d) in diagrams {
        for (e, before) in reidemeister_events(d) {
            let r = (|| {
                let after =
                    e.apply(&before).map_err(|r| CobordismError::Construction { event: e.to_string(), reason: r.0 })?;
                let f = event_chain_map(&e, complex(&before, max)?, complex(&after, max)?)?;
                Ok((f.induces_isomorphism()?, format!("{} -> {} generators", f.source().len(), f.target().len())))
            })();
            checks.push(Check::from_result(format!("{name} {e}"), r));
        }
    }
    Report { suite: "reidemeister".into(), checks }
}

/// The graded Euler characteristic of the complex equals the state sum.
pub fn euler_jones(diagrams: &[(String, LinkDiagram)], max: usize) -> Report {
    let checks = diagrams
        .iter()
        .map(|(name, d)| {
            let r = (|| {
                let chi = KhComplex::build(d, max)?.graded_euler_characteristic();
                let oracle = kauffman_oracle(d, max)?;
                Ok((chi == oracle, chi.to_string()))
            })();
            Check::from_result(name.clone(), r)
        })
        .collect();
    Report { suite: "euler-jones".into(), checks }
}

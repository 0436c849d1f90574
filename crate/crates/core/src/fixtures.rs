//! Bundled link diagrams and the named surface movies built from them.

use crate::movie::{attach_handle, ribbon_2knot_movie, trivial_surface_movie, Movie, MovieError, RibbonPresentation};
use crate::pdcode::{parse_pd, LinkDiagram};

const KNOTS: &str = include_str!("../../../fixtures/knots.pd");

/// Every named diagram of the bundled table, in file order.
pub fn knot_table() -> Vec<(String, LinkDiagram)> {
    KNOTS
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (name, pd) = l.split_once(char::is_whitespace).expect("table line has a name and a PD code");
            (name.to_string(), parse_pd(pd).unwrap_or_else(|e| panic!("bundled diagram {name}: {e}")))
        })
        .collect()
}

pub fn named_diagram(name: &str) -> Option<LinkDiagram> {
    knot_table().into_iter().find(|(n, _)| n == name).map(|(_, d)| d)
}

/// Names accepted by [`fixture_movie`], besides `genus-<g>`.
pub const MOVIE_FIXTURES: [&str; 7] =
    ["sphere", "trivial-torus", "genus-2", "spun-trefoil", "spun-trefoil-handle", "stevedore", "stevedore-handle"];

pub fn fixture_movie(name: &str) -> Result<Movie, MovieError> {
    let unknown = || MovieError::MalformedDocument { line: 0, reason: format!("no fixture named `{name}`") };
    Ok(match name {
        "sphere" => trivial_surface_movie(0),
        "trivial-torus" => trivial_surface_movie(1),
        "spun-trefoil" => ribbon_2knot_movie(&RibbonPresentation::spun_trefoil())?,
        "spun-trefoil-handle" => with_middle_handle(&ribbon_2knot_movie(&RibbonPresentation::spun_trefoil())?)?,
        "stevedore" => ribbon_2knot_movie(&RibbonPresentation::stevedore())?,
        "stevedore-handle" => with_middle_handle(&ribbon_2knot_movie(&RibbonPresentation::stevedore())?)?,
        _ => {
            let g = name.strip_prefix("genus-").and_then(|g| g.parse().ok()).ok_or_else(unknown)?;
            trivial_surface_movie(g)
        }
    })
}

/// A trivial handle attached at the smallest edge of the middle frame.
pub fn with_middle_handle(m: &Movie) -> Result<Movie, MovieError> {
    let mid = m.len() / 2;
    let site = m.frames()[mid].edges().into_iter().next().ok_or(MovieError::BadSite("middle frame is empty".into()))?;
    attach_handle(m, mid, site)
}

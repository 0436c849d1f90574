//! Movies: sequences of link diagrams joined by elementary events.
//!
//! Document format, one item per line, `#` starting a comment:
//!
//! ```text
//! start <pd code>            frame 0 (may be empty)
//! birth <k>                  death <k>
//! merge <a> <b>              split <a> <b>
//! r1+ <e> <+u|+o|-u|-o> [<loop> <out>]
//! r1- <loop>
//! r2+ <a> <b> <over|under> <LL|LR|RL|RR> [<a_mid> <a_out> <b_mid> <b_out>]
//! r2- <a_mid> <b_mid>
//! r3 <x> <y> <z>
//! relabel <a>:<b> ...
//! frame <pd code>            asserts the current frame
//! ```
//!
//! Omitted ids in `r1+` and `r2+` are taken fresh from the current frame.

mod event;
mod generate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use event::{find_triangle, shares_face, Inapplicable, KinkKind, LocalChange, MovieEvent, Passage, Side, Triangle};
pub use generate::{
    attach_handle, matching_windows, ribbon_2knot_movie, ribbon_move_rewrite, rotation_movie, trivial_surface_movie,
    RibbonBand, RibbonPresentation,
};

use crate::pdcode::{parse_pd, EdgeId, LinkDiagram, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MovieError {
    #[error("event {index} ({event}) cannot be applied: {reason}")]
    EventInapplicable { index: usize, event: String, reason: String },
    #[error("listed frame {index} differs from the computed frame")]
    FrameMismatch { index: usize },
    #[error("line {line}: {reason}")]
    MalformedDocument { line: usize, reason: String },
    #[error("bands do not form a tree over the loops")]
    NotATree,
    #[error("bad crossing word: {0}")]
    BadCrossingWord(String),
    #[error("bad handle site: {0}")]
    BadSite(String),
    #[error("window does not match the ribbon template: {0}")]
    TemplateMismatch(String),
}

/// A validated movie: `frames[t + 1] == events[t].apply(&frames[t])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Movie {
    frames: Vec<LinkDiagram>,
    events: Vec<MovieEvent>,
}

impl Movie {
    pub fn new(start: LinkDiagram, events: Vec<MovieEvent>) -> Result<Movie, MovieError> {
        let mut frames = Vec::with_capacity(events.len() + 1);
        frames.push(start);
        for (index, e) in events.iter().enumerate() {
            let next = e.apply(&frames[index]).map_err(|Inapplicable(reason)| MovieError::EventInapplicable {
                index,
                event: e.to_string(),
                reason,
            })?;
            frames.push(next);
        }
        Ok(Movie { frames, events })
    }

    pub fn frames(&self) -> &[LinkDiagram] {
        &self.frames
    }

    pub fn events(&self) -> &[MovieEvent] {
        &self.events
    }

    pub fn first(&self) -> &LinkDiagram {
        &self.frames[0]
    }

    pub fn last(&self) -> &LinkDiagram {
        self.frames.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// `#Birth + #Death - #Saddle`.
    pub fn euler_characteristic(&self) -> i64 {
        self.events.iter().map(MovieEvent::euler_contribution).sum()
    }

    /// Both end frames are empty.
    pub fn is_closed(&self) -> bool {
        self.first().is_empty() && self.last().is_empty()
    }

    /// The movie played backwards.
    pub fn reversed(&self) -> Result<Movie, MovieError> {
        let mut events = Vec::with_capacity(self.events.len());
        for (t, e) in self.events.iter().enumerate().rev() {
            let inv = e.inverse(&self.frames[t]).map_err(|Inapplicable(reason)| MovieError::EventInapplicable {
                index: t,
                event: e.to_string(),
                reason,
            })?;
            events.push(inv);
        }
        Movie::new(self.last().clone(), events)
    }

    /// Every frame replaced by its mirror image.
    pub fn mirrored(&self) -> Result<Movie, MovieError> {
        Movie::new(self.first().mirror(), self.events.iter().map(MovieEvent::mirrored).collect())
    }

    pub fn largest_frame(&self) -> usize {
        self.frames.iter().map(LinkDiagram::crossing_count).max().unwrap_or(0)
    }
}

impl fmt::Display for Movie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.first().is_empty() {
            writeln!(f, "start")?;
        } else {
            writeln!(f, "start {}", self.first())?;
        }
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for Movie {
    type Err = MovieError;

    fn from_str(s: &str) -> Result<Movie, MovieError> {
        parse_movie(s)
    }
}

pub fn parse_movie(text: &str) -> Result<Movie, MovieError> {
    let mut start: Option<LinkDiagram> = None;
    let mut current = LinkDiagram::empty();
    let mut events = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: String| MovieError::MalformedDocument { line: line_no, reason };
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if start.is_none() {
            if kw != "start" {
                return Err(bad("document must begin with a `start` line".into()));
            }
            let d = parse_pd(rest).map_err(|e| bad(e.to_string()))?;
            current = d.clone();
            start = Some(d);
            continue;
        }
        if kw == "frame" {
            let d = parse_pd(rest).map_err(|e| bad(e.to_string()))?;
            if d != current {
                return Err(MovieError::FrameMismatch { index: events.len() });
            }
            continue;
        }
        let args: Vec<&str> = rest.split_whitespace().collect();
        let event = parse_event(kw, &args, &current).map_err(bad)?;
        current = event.apply(&current).map_err(|Inapplicable(reason)| MovieError::EventInapplicable {
            index: events.len(),
            event: event.to_string(),
            reason,
        })?;
        events.push(event);
    }
    let start = start.ok_or(MovieError::MalformedDocument { line: 0, reason: "missing `start` line".into() })?;
    Movie::new(start, events)
}

fn parse_event(kw: &str, args: &[&str], frame: &LinkDiagram) -> Result<MovieEvent, String> {
    let id = |s: &str| s.parse::<EdgeId>().map_err(|_| format!("`{s}` is not an edge id"));
    let arity = |lens: &[usize]| {
        if lens.contains(&args.len()) {
            Ok(())
        } else {
            Err(format!("`{kw}` takes {lens:?} arguments, got {}", args.len()))
        }
    };
    Ok(match kw {
        "birth" | "death" | "r1-" => {
            arity(&[1])?;
            let k = id(args[0])?;
            match kw {
                "birth" => MovieEvent::Birth(k),
                "death" => MovieEvent::Death(k),
                _ => MovieEvent::R1Minus { loop_edge: k },
            }
        }
        "merge" | "split" | "r2-" => {
            arity(&[2])?;
            let (a, b) = (id(args[0])?, id(args[1])?);
            match kw {
                "merge" => MovieEvent::SaddleMerge(a, b),
                "split" => MovieEvent::SaddleSplit(a, b),
                _ => MovieEvent::R2Elim { a_mid: a, b_mid: b },
            }
        }
        "r1+" => {
            arity(&[2, 4])?;
            let edge = id(args[0])?;
            let kind = match args[1] {
                "+u" => KinkKind { sign: Sign::Pos, under_first: true },
                "+o" => KinkKind { sign: Sign::Pos, under_first: false },
                "-u" => KinkKind { sign: Sign::Neg, under_first: true },
                "-o" => KinkKind { sign: Sign::Neg, under_first: false },
                other => return Err(format!("unknown kink kind `{other}`")),
            };
            if args.len() == 4 {
                MovieEvent::R1Plus { edge, kind, loop_edge: id(args[2])?, out_edge: id(args[3])? }
            } else {
                MovieEvent::kink(frame, edge, kind)
            }
        }
        "r2+" => {
            arity(&[4, 8])?;
            let (a, b) = (id(args[0])?, id(args[1])?);
            let passage = match args[2] {
                "over" => Passage::Over,
                "under" => Passage::Under,
                other => return Err(format!("unknown passage `{other}`")),
            };
            let side = |c: char| match c {
                'L' => Ok(Side::Left),
                'R' => Ok(Side::Right),
                _ => Err(format!("bad sides `{}`", args[3])),
            };
            let cs: Vec<char> = args[3].chars().collect();
            if cs.len() != 2 {
                return Err(format!("bad sides `{}`", args[3]));
            }
            let (a_side, b_side) = (side(cs[0])?, side(cs[1])?);
            if args.len() == 8 {
                let new = [id(args[4])?, id(args[5])?, id(args[6])?, id(args[7])?];
                MovieEvent::R2Intro { a, b, passage, a_side, b_side, new }
            } else {
                MovieEvent::finger(frame, a, b, passage, a_side, b_side)
            }
        }
        "r3" => {
            arity(&[3])?;
            let idx = |s: &str| s.parse::<usize>().map_err(|_| format!("`{s}` is not a crossing index"));
            MovieEvent::R3 { crossings: [idx(args[0])?, idx(args[1])?, idx(args[2])?] }
        }
        "relabel" => {
            let mut map = BTreeMap::new();
            for a in args {
                let (x, y) = a.split_once(':').ok_or(format!("bad relabel pair `{a}`"))?;
                map.insert(id(x)?, id(y)?);
            }
            MovieEvent::Relabel(map)
        }
        other => return Err(format!("unknown event `{other}`")),
    })
}

#[cfg(test)]
mod tests;

//! Chain maps induced by movie events, their composites along a movie, and
//! the Khovanov-Jacobsson number of a closed surface.

mod planar;
mod reduce;
mod reidemeister;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::intlinalg::{homology_at, in_image, kernel_basis, smith_with_transforms, IntMatrix, LinAlgError};
use crate::khcomplex::{Bidegree, KhComplex, KhError, DEFAULT_MAX_CROSSINGS};
use crate::movie::{Movie, MovieError, MovieEvent};
use crate::sparse::SparseMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobordismError {
    #[error("complexes do not flank event {event}")]
    FrameMismatch { event: String },
    #[error("movie does not start and end with the empty diagram")]
    NotClosed,
    #[error("maps are not comparable: {0}")]
    ShapeMismatch(String),
    #[error("map does not commute with the differentials at source bidegree {bidegree:?}")]
    NotAChainMap { bidegree: Bidegree },
    #[error("map sends bidegree {from:?} to {to:?}, expected a quantum shift of {shift}")]
    WrongDegree { from: Bidegree, to: Bidegree, shift: i64 },
    #[error("event {event}: {reason}")]
    Construction { event: String, reason: String },
    #[error(transparent)]
    Complex(#[from] KhError),
    #[error(transparent)]
    Movie(#[from] MovieError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// A map of Khovanov complexes raising the quantum grading by `shift`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<KhComplex>,
    target: Arc<KhComplex>,
    /// `target.len() x source.len()` on the global generator bases.
    matrix: SparseMatrix,
    shift: i64,
}

impl ChainMap {
    /// Checks the shape, the grading and the chain-map condition.
    pub fn new(
        source: Arc<KhComplex>,
        target: Arc<KhComplex>,
        matrix: SparseMatrix,
        shift: i64,
    ) -> Result<Self, CobordismError> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(CobordismError::ShapeMismatch(format!(
                "{}x{} matrix between complexes of rank {} and {}",
                matrix.rows(),
                matrix.cols(),
                source.len(),
                target.len()
            )));
        }
        let f = ChainMap { source, target, matrix, shift };
        f.check()?;
        Ok(f)
    }

    pub fn identity(c: Arc<KhComplex>) -> Self {
        let matrix = SparseMatrix::identity(c.len());
        ChainMap { source: c.clone(), target: c, matrix, shift: 0 }
    }

    pub fn source(&self) -> &KhComplex {
        &self.source
    }

    pub fn target(&self) -> &KhComplex {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn negated(&self) -> ChainMap {
        ChainMap { matrix: self.matrix.scaled(&BigInt::from(-1)), ..self.clone() }
    }

    /// The block from source group `(i, j)` to target group `(i, j + shift)`.
    pub fn block(&self, (i, j): Bidegree) -> IntMatrix {
        self.matrix.block(self.target.group_range((i, j + self.shift)), self.source.group_range((i, j)))
    }

    fn check(&self) -> Result<(), CobordismError> {
        for (x, col) in self.matrix.columns().iter().enumerate() {
            let (i, j) = self.source.bidegree_of(x);
            for &y in col.keys() {
                let to = self.target.bidegree_of(y);
                if to != (i, j + self.shift) {
                    return Err(CobordismError::WrongDegree { from: (i, j), to, shift: self.shift });
                }
            }
        }
        let lhs = self.target.differential_sparse().compose(&self.matrix);
        let rhs = self.matrix.compose(self.source.differential_sparse());
        let diff = lhs.sub(&rhs);
        if let Some(x) = diff.columns().iter().position(|c| !c.is_empty()) {
            return Err(CobordismError::NotAChainMap { bidegree: self.source.bidegree_of(x) });
        }
        Ok(())
    }

    /// `next o self`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap, CobordismError> {
        if self.target.diagram() != next.source.diagram() {
            return Err(CobordismError::ShapeMismatch("composed maps do not meet at a common complex".into()));
        }
        Ok(ChainMap {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix: next.matrix.compose(&self.matrix),
            shift: self.shift + next.shift,
        })
    }

    /// Whether the map is a quasi-isomorphism, tested by the acyclicity of
    /// its mapping cone.
    pub fn induces_isomorphism(&self) -> Result<bool, CobordismError> {
        let (src, tgt, sh) = (&*self.source, &*self.target, self.shift);
        let mut degrees: Vec<Bidegree> = tgt.groups().keys().copied().collect();
        degrees.extend(src.groups().keys().map(|&(i, j)| (i - 1, j + sh)));
        degrees.sort_unstable();
        degrees.dedup();
        for (i, j) in degrees {
            let d_in = self.cone_differential((i - 1, j));
            let d_out = self.cone_differential((i, j));
            if !homology_at(&d_in, &d_out)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cone differential from `src(i+1, j-shift) + tgt(i, j)` to
    /// `src(i+2, j-shift) + tgt(i+1, j)`, sending `(a, b)` to `(-d a, f a + d b)`.
    fn cone_differential(&self, (i, j): Bidegree) -> IntMatrix {
        let (src, tgt) = (&*self.source, &*self.target);
        let js = j - self.shift;
        let (a0, a1) = (src.rank((i + 1, js)), src.rank((i + 2, js)));
        let (b0, b1) = (tgt.rank((i, j)), tgt.rank((i + 1, j)));
        let ds = src.differential((i + 1, js));
        let dt = tgt.differential((i, j));
        let f = self.block((i + 1, js));
        let mut m = IntMatrix::zeros(a1 + b1, a0 + b0);
        for r in 0..a1 {
            for c in 0..a0 {
                m.set(r, c, -ds.get(r, c));
            }
        }
        for r in 0..b1 {
            for c in 0..a0 {
                m.set(a1 + r, c, f.get(r, c).clone());
            }
            for c in 0..b0 {
                m.set(a1 + r, a0 + c, dt.get(r, c).clone());
            }
        }
        m
    }
}

fn event_shift(e: &MovieEvent) -> i64 {
    match e {
        MovieEvent::Birth(_) | MovieEvent::Death(_) => 1,
        MovieEvent::SaddleMerge(..) | MovieEvent::SaddleSplit(..) => -1,
        _ => 0,
    }
}

/// The chain map of a single event between the complexes of its flanking frames.
pub fn event_chain_map(e: &MovieEvent, src: Arc<KhComplex>, tgt: Arc<KhComplex>) -> Result<ChainMap, CobordismError> {
    let mismatch = || CobordismError::FrameMismatch { event: e.to_string() };
    match e.apply(src.diagram()) {
        Ok(d) if d == *tgt.diagram() => {}
        _ => return Err(mismatch()),
    }
    let built = match e {
        MovieEvent::R1Plus { .. }
        | MovieEvent::R1Minus { .. }
        | MovieEvent::R2Intro { .. }
        | MovieEvent::R2Elim { .. }
        | MovieEvent::R3 { .. } => reidemeister::reidemeister_map(e, &src, &tgt),
        _ => planar::planar_map(e, &src, &tgt),
    };
    let matrix = built.map_err(|reason| CobordismError::Construction { event: e.to_string(), reason })?;
    let f = ChainMap::new(src, tgt, matrix, event_shift(e))?;
    if matches!(e, MovieEvent::R3 { .. }) && !f.induces_isomorphism()? {
        return Err(CobordismError::Construction {
            event: e.to_string(),
            reason: "map is not a quasi-isomorphism".into(),
        });
    }
    Ok(f)
}

pub fn compose_movie(m: &Movie) -> Result<ChainMap, CobordismError> {
    compose_movie_with(m, DEFAULT_MAX_CROSSINGS)
}

/// Composes the event maps in order, building each frame complex once.
pub fn compose_movie_with(m: &Movie, max_crossings: usize) -> Result<ChainMap, CobordismError> {
    let complexes: Vec<Arc<KhComplex>> =
        m.frames().iter().map(|d| KhComplex::build(d, max_crossings).map(Arc::new)).collect::<Result<_, _>>()?;
    let mut acc = ChainMap::identity(complexes[0].clone());
    for (t, e) in m.events().iter().enumerate() {
        let f = event_chain_map(e, complexes[t].clone(), complexes[t + 1].clone())?;
        acc = acc.then(&f)?;
    }
    Ok(acc)
}

/// `|n|` for a closed surface inducing `x n` on `Z`, with the quantum shift
/// (the Euler characteristic) of the composite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KJNumber {
    pub value: BigInt,
    pub shift: i64,
}

impl fmt::Display for KJNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KJ = {} (quantum shift {})", self.value, self.shift)
    }
}

pub fn kj_number(m: &Movie) -> Result<KJNumber, CobordismError> {
    kj_number_with(m, DEFAULT_MAX_CROSSINGS)
}

pub fn kj_number_with(m: &Movie, max_crossings: usize) -> Result<KJNumber, CobordismError> {
    if !m.is_closed() {
        return Err(CobordismError::NotClosed);
    }
    let f = compose_movie_with(m, max_crossings)?;
    Ok(KJNumber { value: f.matrix().get(0, 0).abs(), shift: f.shift() })
}

/// Whether `f` and `g` agree on homology up to sign, one sign per bidegree.
pub fn homology_maps_equal_up_to_sign(f: &ChainMap, g: &ChainMap) -> Result<bool, CobordismError> {
    compare_on_homology(f, g, &[1, -1])
}

/// Whether `f` and `g` induce the same map on homology.
pub fn homology_maps_equal(f: &ChainMap, g: &ChainMap) -> Result<bool, CobordismError> {
    compare_on_homology(f, g, &[1])
}

fn compare_on_homology(f: &ChainMap, g: &ChainMap, signs: &[i64]) -> Result<bool, CobordismError> {
    if f.source.diagram() != g.source.diagram() || f.target.diagram() != g.target.diagram() {
        return Err(CobordismError::ShapeMismatch("maps have different source or target".into()));
    }
    if f.shift != g.shift {
        return Err(CobordismError::ShapeMismatch(format!("quantum shifts {} and {}", f.shift, g.shift)));
    }
    let (src, tgt) = (&*f.source, &*f.target);
    for &(i, j) in src.groups().keys() {
        let cycles = kernel_basis(&src.differential((i, j)));
        if cycles.is_empty() {
            continue;
        }
        let (fb, gb) = (f.block((i, j)), g.block((i, j)));
        let boundaries = smith_with_transforms(&tgt.differential((i - 1, j + f.shift)));
        let agrees = |s: i64| {
            cycles.iter().all(|z| {
                let v: Vec<BigInt> =
                    fb.mul_vec(z).into_iter().zip(gb.mul_vec(z)).map(|(a, b)| a - b * BigInt::from(s)).collect();
                v.iter().all(Zero::is_zero) || in_image(&boundaries, &v)
            })
        };
        if !signs.iter().any(|&s| agrees(s)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;

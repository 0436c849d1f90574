use super::*;
use crate::khcomplex::{KhGen, Label};
use crate::movie::{trivial_surface_movie, KinkKind, Passage, Side};
use crate::pdcode::{parse_pd, LinkDiagram, Sign};

fn cx(text: &str) -> Arc<KhComplex> {
    Arc::new(KhComplex::build(&parse_pd(text).unwrap(), DEFAULT_MAX_CROSSINGS).unwrap())
}

fn map_of(e: &MovieEvent, d: &LinkDiagram) -> ChainMap {
    let after = e.apply(d).unwrap();
    let src = Arc::new(KhComplex::build(d, DEFAULT_MAX_CROSSINGS).unwrap());
    let tgt = Arc::new(KhComplex::build(&after, DEFAULT_MAX_CROSSINGS).unwrap());
    event_chain_map(e, src, tgt).unwrap_or_else(|err| panic!("{e} on {d}: {err}"))
}

fn image(f: &ChainMap, g: KhGen) -> Vec<(KhGen, BigInt)> {
    let k = f.source().index_of(&g).unwrap();
    f.matrix().column(k).iter().map(|(&y, v)| (f.target().generator(y), v.clone())).collect()
}

#[test]
fn birth_is_the_unit() {
    let f = map_of(&MovieEvent::Birth(1), &LinkDiagram::empty());
    assert_eq!(f.shift(), 1);
    assert_eq!(image(&f, KhGen { state: 0, labels: 0 }), vec![(KhGen { state: 0, labels: 0 }, BigInt::from(1))]);
}

#[test]
fn death_is_the_counit() {
    let f = map_of(&MovieEvent::Death(1), &LinkDiagram::unknot());
    let empty = KhGen { state: 0, labels: 0 };
    assert!(image(&f, KhGen { state: 0, labels: 0 }).is_empty());
    assert_eq!(image(&f, KhGen { state: 0, labels: 1 }), vec![(empty, BigInt::from(1))]);
}

#[test]
fn merge_multiplies() {
    let d = parse_pd("O[1] O[2]").unwrap();
    let f = map_of(&MovieEvent::SaddleMerge(1, 2), &d);
    let g = KhGen { state: 0, labels: 0b10 }.with_label(0, Label::One);
    let img = image(&f, g);
    assert_eq!(img.len(), 1);
    assert_eq!(img[0].0.label(0), Label::X);
    assert!(image(&f, KhGen { state: 0, labels: 0b11 }).is_empty());
}

#[test]
fn split_comultiplies() {
    let f = map_of(&MovieEvent::SaddleSplit(1, 2), &LinkDiagram::unknot());
    assert_eq!(image(&f, KhGen { state: 0, labels: 0 }).len(), 2);
    assert_eq!(image(&f, KhGen { state: 0, labels: 1 }), vec![(KhGen { state: 0, labels: 0b11 }, BigInt::from(1))]);
}

#[test]
fn saddles_between_crossing_edges_commute() {
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    for e in [MovieEvent::SaddleSplit(1, 7), MovieEvent::SaddleMerge(1, 4)] {
        if e.apply(&trefoil).is_ok() {
            map_of(&e, &trefoil);
        }
    }
}

#[test]
fn kinks_are_quasi_isomorphisms() {
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    for d in [LinkDiagram::unknot(), trefoil] {
        let edge = *d.edges().iter().next().unwrap();
        for sign in [Sign::Pos, Sign::Neg] {
            for under_first in [true, false] {
                let e = MovieEvent::kink(&d, edge, KinkKind { sign, under_first });
                let f = map_of(&e, &d);
                assert!(f.induces_isomorphism().unwrap(), "{e}");
                let after = e.apply(&d).unwrap();
                let back = map_of(&e.inverse(&d).unwrap(), &after);
                assert!(back.induces_isomorphism().unwrap(), "inverse of {e}");
            }
        }
    }
}

#[test]
fn fingers_are_quasi_isomorphisms() {
    let two = parse_pd("O[1] O[2]").unwrap();
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    let mut tried = 0;
    for (d, a, b) in [(two, 1, 2), (trefoil, 1, 3)] {
        for passage in [Passage::Over, Passage::Under] {
            for (sa, sb) in [(Side::Left, Side::Left), (Side::Right, Side::Left)] {
                let e = MovieEvent::finger(&d, a, b, passage, sa, sb);
                let Ok(after) = e.apply(&d) else { continue };
                tried += 1;
                assert!(map_of(&e, &d).induces_isomorphism().unwrap(), "{e}");
                assert!(map_of(&e.inverse(&d).unwrap(), &after).induces_isomorphism().unwrap());
            }
        }
    }
    assert!(tried >= 4);
}

#[test]
fn third_move_is_a_quasi_isomorphism() {
    for word in [[1, 2, 1], [-1, -2, -1]] {
        let d = LinkDiagram::braid_closure(3, &word).unwrap();
        let e = MovieEvent::R3 { crossings: [0, 1, 2] };
        let f = map_of(&e, &d);
        assert!(f.induces_isomorphism().unwrap());
    }
}

#[test]
fn closed_trivial_surfaces() {
    let kj = |g| kj_number(&trivial_surface_movie(g)).unwrap();
    assert_eq!(kj(0), KJNumber { value: BigInt::from(0), shift: 2 });
    assert_eq!(kj(1), KJNumber { value: BigInt::from(2), shift: 0 });
    assert_eq!(kj(2), KJNumber { value: BigInt::from(0), shift: -2 });
    assert_eq!(kj(1).to_string(), "KJ = 2 (quantum shift 0)");
}

#[test]
fn empty_movie_is_the_identity() {
    let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    let f = compose_movie(&Movie::new(d, vec![]).unwrap()).unwrap();
    assert_eq!(*f.matrix(), SparseMatrix::identity(f.source().len()));
}

#[test]
fn open_movies_have_no_kj_number() {
    let m = Movie::new(LinkDiagram::empty(), vec![MovieEvent::Birth(1)]).unwrap();
    assert_eq!(kj_number(&m), Err(CobordismError::NotClosed));
}

#[test]
fn mismatched_frames_are_rejected() {
    let err = event_chain_map(&MovieEvent::Birth(1), cx("O[1]"), cx("O[1] O[2]")).unwrap_err();
    assert!(matches!(err, CobordismError::FrameMismatch { .. }));
}

#[test]
fn homology_comparison() {
    let id = ChainMap::identity(cx("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"));
    assert!(homology_maps_equal_up_to_sign(&id, &id).unwrap());
    assert!(homology_maps_equal_up_to_sign(&id, &id.negated()).unwrap());
    let torus = compose_movie(&trivial_surface_movie(1)).unwrap();
    let sphere = compose_movie(&trivial_surface_movie(0)).unwrap();
    assert!(matches!(homology_maps_equal_up_to_sign(&torus, &sphere), Err(CobordismError::ShapeMismatch(_))));
    let unknot = ChainMap::identity(cx("O[1]"));
    let zero = ChainMap::new(unknot.source.clone(), unknot.target.clone(), SparseMatrix::zeros(2, 2), 0).unwrap();
    assert!(!homology_maps_equal_up_to_sign(&unknot, &zero).unwrap());
    assert!(unknot.induces_isomorphism().unwrap());
    assert!(!zero.induces_isomorphism().unwrap());
}

use super::*;
use crate::pdcode::parse_pd;

fn ev(kind: &str, d: &LinkDiagram) -> MovieEvent {
    let mut parts = kind.split_whitespace();
    let kw = parts.next().unwrap();
    let args: Vec<&str> = parts.collect();
    parse_event(kw, &args, d).unwrap()
}

#[test]
fn sphere_document() {
    let m = parse_movie("start\nbirth 1\ndeath 1\n").unwrap();
    assert_eq!(m.frames().len(), 3);
    assert_eq!(m.euler_characteristic(), 2);
    assert!(m.is_closed());
}

#[test]
fn death_of_missing_loop() {
    let err = parse_movie("start\nbirth 1\ndeath 2\n").unwrap_err();
    assert!(matches!(err, MovieError::EventInapplicable { index: 1, .. }), "{err}");
}

#[test]
fn trivial_torus_document() {
    let text = "# unknotted torus\nstart\nbirth 1\nsplit 1 2\nframe O[1] O[2]\nmerge 1 2\ndeath 1\n";
    let m = parse_movie(text).unwrap();
    assert_eq!(m.frames().len(), 5);
    assert_eq!(m.euler_characteristic(), 0);
    assert_eq!(m, trivial_surface_movie(1));
}

#[test]
fn listed_frame_is_checked() {
    let err = parse_movie("start\nbirth 1\nframe O[2]\n").unwrap_err();
    assert_eq!(err, MovieError::FrameMismatch { index: 1 });
}

#[test]
fn malformed_documents() {
    for text in ["birth 1", "start\nfly 1", "start\nbirth x", "start\nr2+ 1 2 over LX", "start X[1,2"] {
        assert!(matches!(parse_movie(text), Err(MovieError::MalformedDocument { .. })), "{text}");
    }
}

#[test]
fn trivial_surfaces() {
    for g in 0..4 {
        let m = trivial_surface_movie(g);
        assert_eq!(m.len(), 2 + 2 * g);
        assert_eq!(m.euler_characteristic(), 2 - 2 * g as i64);
        assert!(m.is_closed());
    }
}

#[test]
fn saddles_on_crossing_edges() {
    // a Hopf link cannot be merged through edges that do not face each other
    let hopf = parse_pd("X[4,1,3,2] X[2,3,1,4]").unwrap();
    let (_, sides) = hopf.edge_faces();
    for a in [1, 4] {
        for b in [2, 3] {
            let e = MovieEvent::SaddleMerge(a, b);
            let ok = [0, 1].iter().any(|&s| sides[&a][s] == sides[&b][s]);
            assert_eq!(e.apply(&hopf).is_ok(), ok, "{e}");
        }
    }
}

#[test]
fn kinks_round_trip() {
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    for d in [LinkDiagram::unknot(), trefoil] {
        for kind in ["+u", "+o", "-u", "-o"] {
            let e = ev(&format!("r1+ 1 {kind}"), &d);
            let after = e.apply(&d).unwrap();
            assert!(after.is_planar());
            assert_eq!(after.crossing_count(), d.crossing_count() + 1);
            let sign = if kind.starts_with('+') { 1 } else { -1 };
            assert_eq!(after.writhe(), d.writhe() + sign);
            let back = e.inverse(&d).unwrap();
            assert_eq!(back.apply(&after).unwrap(), d);
            assert_eq!(back.inverse(&after).unwrap(), e);
        }
    }
}

#[test]
fn fingers_round_trip() {
    let two = parse_pd("O[1] O[2]").unwrap();
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    let mut tried = 0;
    for (d, a, b) in [(two.clone(), 1, 2), (trefoil.clone(), 1, 3), (trefoil, 2, 5)] {
        for p in ["over", "under"] {
            for s in ["LL", "LR", "RL", "RR"] {
                let e = ev(&format!("r2+ {a} {b} {p} {s}"), &d);
                let Ok(after) = e.apply(&d) else { continue };
                tried += 1;
                assert!(after.is_planar(), "{e} on {d}");
                assert_eq!(after.crossing_count(), d.crossing_count() + 2);
                assert_eq!(after.writhe(), d.writhe());
                let back = e.inverse(&d).unwrap();
                assert_eq!(back.apply(&after).unwrap(), d, "{e}");
                assert_eq!(back.inverse(&after).unwrap(), e);
            }
        }
    }
    assert!(tried >= 12);
}

#[test]
fn parallel_and_antiparallel_fingers() {
    // same sides give opposite strand directions, so the crossings differ in sign
    let two = parse_pd("O[1] O[2]").unwrap();
    let anti = ev("r2+ 1 2 over RR", &two).apply(&two).unwrap();
    let para = ev("r2+ 1 2 over RL", &two).apply(&two).unwrap();
    let signs = |d: &LinkDiagram| d.writhe_counts();
    assert_eq!(signs(&anti), (1, 1));
    assert_eq!(signs(&para), (1, 1));
    assert!(anti.is_planar() && para.is_planar());
    assert_ne!(anti, para);
}

#[test]
fn third_move_on_braids() {
    let a = LinkDiagram::braid_closure(3, &[1, 2, 1]).unwrap();
    let e = MovieEvent::R3 { crossings: [0, 1, 2] };
    let b = e.apply(&a).unwrap();
    assert!(b.is_planar());
    assert_eq!(b.writhe_counts(), a.writhe_counts());
    assert_eq!(e.apply(&b).unwrap(), a);
    let t = find_triangle(&a, [0, 1, 2]).unwrap();
    assert_eq!(t.top.len(), 2);
    assert!(!t.top.contains(&t.opposite));
    // crossings 0 and 2 of sigma1 sigma2 sigma1 share two edges, not a triangle
    let c = LinkDiagram::braid_closure(2, &[1, 1, 1]).unwrap();
    assert!(find_triangle(&c, [0, 1, 2]).is_err());
}

#[test]
fn relabel_must_be_injective() {
    let d = parse_pd("O[1] O[2]").unwrap();
    assert!(MovieEvent::Relabel(BTreeMap::from([(1, 2)])).apply(&d).is_err());
    let swapped = MovieEvent::Relabel(BTreeMap::from([(1, 5)])).apply(&d).unwrap();
    assert_eq!(swapped, parse_pd("O[2] O[5]").unwrap());
}

#[test]
fn spun_trefoil_movie() {
    let m = ribbon_2knot_movie(&RibbonPresentation::spun_trefoil()).unwrap();
    assert!(m.is_closed());
    assert_eq!(m.euler_characteristic(), 2);
    let r2 = m.events().iter().filter(|e| matches!(e, MovieEvent::R2Intro { .. } | MovieEvent::R2Elim { .. })).count();
    assert_eq!(r2, 6);
    let middle = &m.frames()[m.len() / 2];
    assert_eq!(middle.crossing_count(), 6);
    assert_eq!(middle.components().len(), 1);
    let square = LinkDiagram::braid_closure(3, &[1, 1, 1, -2, -2, -2]).unwrap();
    let jones = |d: &LinkDiagram| crate::khcomplex::kauffman_oracle(d, 14).unwrap();
    assert_eq!(jones(middle), jones(&square));
    assert!(m.frames().iter().all(LinkDiagram::is_planar));
    // palindrome of inverses
    let n = m.len();
    for t in 0..n / 2 {
        assert_eq!(m.events()[n - 1 - t], m.events()[t].inverse(&m.frames()[t]).unwrap());
    }
}

#[test]
fn band_graphs_must_be_trees() {
    let band = |from, to| RibbonBand { from, to, word: vec![] };
    let cyclic = RibbonPresentation { loops: vec![1, 2, 3], bands: vec![band(1, 2), band(2, 3), band(3, 1)] };
    assert_eq!(ribbon_2knot_movie(&cyclic), Err(MovieError::NotATree));
    let disconnected = RibbonPresentation { loops: vec![1, 2, 3], bands: vec![band(1, 2), band(2, 1)] };
    assert_eq!(ribbon_2knot_movie(&disconnected), Err(MovieError::NotATree));
    let trivial = RibbonPresentation { loops: vec![1, 2], bands: vec![band(2, 1)] };
    let m = ribbon_2knot_movie(&trivial).unwrap();
    assert_eq!(m.len(), 6);
    assert_eq!(m.euler_characteristic(), 2);
    let stray = RibbonPresentation {
        loops: vec![1, 2],
        bands: vec![RibbonBand { from: 1, to: 2, word: vec![(9, Passage::Over)] }],
    };
    assert!(matches!(ribbon_2knot_movie(&stray), Err(MovieError::BadCrossingWord(_))));
}

#[test]
fn handles() {
    let sphere = trivial_surface_movie(0);
    assert_eq!(attach_handle(&sphere, 1, 1).unwrap(), trivial_surface_movie(1));
    let torus = trivial_surface_movie(1);
    let g2 = attach_handle(&torus, 1, 1).unwrap();
    assert_eq!(g2.euler_characteristic(), -2);
    assert!(matches!(attach_handle(&sphere, 0, 1), Err(MovieError::BadSite(_))));
    assert!(matches!(attach_handle(&sphere, 5, 1), Err(MovieError::BadSite(_))));

    let spun = ribbon_2knot_movie(&RibbonPresentation::spun_trefoil()).unwrap();
    let mid = spun.len() / 2;
    let site = *spun.frames()[mid].edges().iter().next().unwrap();
    let with = attach_handle(&spun, mid, site).unwrap();
    assert_eq!(with.euler_characteristic(), 0);
    // commutes with reversal
    let rev_then = attach_handle(&spun.reversed().unwrap(), spun.len() - mid, site).unwrap();
    assert_eq!(rev_then, with.reversed().unwrap());
}

#[test]
fn ribbon_rewrite() {
    let spun = ribbon_2knot_movie(&RibbonPresentation::spun_trefoil()).unwrap();
    let windows = matching_windows(&spun);
    assert_eq!(windows.len(), 3);
    for &w in &windows {
        let r = ribbon_move_rewrite(&spun, w).unwrap();
        assert_ne!(r, spun);
        assert_eq!(r.euler_characteristic(), spun.euler_characteristic());
        assert_eq!(ribbon_move_rewrite(&r, w).unwrap(), spun);
        let MovieEvent::R2Intro { passage, .. } = r.events()[w.0] else { panic!() };
        let MovieEvent::R2Intro { passage: old, .. } = spun.events()[w.0] else { panic!() };
        assert_eq!(passage, old.flip());
    }
    assert!(matches!(ribbon_move_rewrite(&spun, (0, 1)), Err(MovieError::TemplateMismatch(_))));
}

#[test]
fn rotations() {
    assert!(rotation_movie(&LinkDiagram::empty()).is_empty());
    let u = rotation_movie(&LinkDiagram::unknot());
    assert_eq!(u.events(), &[MovieEvent::Relabel(BTreeMap::new())]);
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    let m = rotation_movie(&trefoil);
    assert_eq!(m.len(), 3);
    let MovieEvent::Relabel(sigma) = &m.events()[0] else { panic!() };
    assert_eq!(sigma[&1], 3);
    assert_eq!(sigma[&6], 2);
    assert_eq!(m.last(), &trefoil);
}

#[test]
fn documents_round_trip() {
    let spun = ribbon_2knot_movie(&RibbonPresentation::spun_trefoil()).unwrap();
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    let movies = [
        trivial_surface_movie(2),
        spun.clone(),
        spun.reversed().unwrap(),
        spun.mirrored().unwrap(),
        rotation_movie(&trefoil),
    ];
    for m in movies {
        let text = m.to_string();
        assert_eq!(parse_movie(&text).unwrap(), m, "{text}");
    }
}

#[test]
fn reversal_and_mirror() {
    let spun = ribbon_2knot_movie(&RibbonPresentation::spun_trefoil()).unwrap();
    let r = spun.reversed().unwrap();
    let mut frames = spun.frames().to_vec();
    frames.reverse();
    assert_eq!(r.frames(), frames.as_slice());
    assert_eq!(r.reversed().unwrap(), spun);
    let mir = spun.mirrored().unwrap();
    for (a, b) in mir.frames().iter().zip(spun.frames()) {
        assert_eq!(a, &b.mirror());
    }
}

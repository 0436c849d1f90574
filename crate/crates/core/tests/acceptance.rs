//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails or overruns its time budget.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use khmovie::cobordism::kj_number;
use khmovie::fixtures::{fixture_movie, knot_table, named_diagram, with_middle_handle};
use khmovie::intlinalg::AbelianGroup;
use khmovie::khcomplex::{kauffman_oracle, KhComplex, DEFAULT_MAX_CROSSINGS};
use khmovie::movie::{attach_handle, parse_movie, ribbon_2knot_movie, Movie, RibbonPresentation};
use khmovie::pdcode::LinkDiagram;
use khmovie::verify;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn fixture(name: &str) -> Movie {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    parse_movie(&text).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(r: verify::Report) -> Outcome {
    let failed: Vec<String> =
        r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(r.passed(), failed.join("; "))?;
    Ok(format!("{} checks", r.checks.len()))
}

fn unknot_homology() -> Outcome {
    let h = KhComplex::build(&LinkDiagram::unknot(), DEFAULT_MAX_CROSSINGS)
        .map_err(|e| e.to_string())?
        .homology()
        .map_err(|e| e.to_string())?;
    let want = [((0, -1), AbelianGroup::free(1)), ((0, 1), AbelianGroup::free(1))];
    ensure(h.0 == want.into_iter().collect(), format!("{:?}", h.0))?;
    Ok("Z at (0,-1) and (0,1)".into())
}

fn euler_jones() -> Outcome {
    let ds: Vec<_> = knot_table().into_iter().filter(|(_, d)| d.crossing_count() <= 7).collect();
    suite(verify::euler_jones(&ds, DEFAULT_MAX_CROSSINGS))
}

fn random_complexes() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut max_n = 0;
    for t in 0..100 {
        let strands = rng.random_range(2..=4);
        let len = rng.random_range(1..=6);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.random_range(1..strands as i32);
                if rng.random_bool(0.5) {
                    -g
                } else {
                    g
                }
            })
            .collect();
        let d = LinkDiagram::braid_closure(strands, &word).map_err(|e| e.to_string())?;
        max_n = max_n.max(d.crossing_count());
        let c = KhComplex::build(&d, DEFAULT_MAX_CROSSINGS).map_err(|e| e.to_string())?;
        c.check_invariants().map_err(|e| format!("diagram {t} ({word:?}): {e}"))?;
        ensure(
            c.graded_euler_characteristic() == kauffman_oracle(&d, DEFAULT_MAX_CROSSINGS).unwrap(),
            format!("diagram {t}: Euler characteristic differs from the state sum"),
        )?;
    }
    Ok(format!("100 braid closures, up to {max_n} crossings"))
}

fn trivial_surfaces() -> Outcome {
    let mut parts = Vec::new();
    for (name, want) in [("sphere", 0), ("trivial-torus", 2), ("genus-2", 0)] {
        let k = kj_number(&fixture(&format!("{name}.movie"))).map_err(|e| e.to_string())?;
        ensure(k.value == BigInt::from(want), format!("{name}: {k}"))?;
        parts.push(format!("{name} {}", k.value));
    }
    Ok(parts.join(", "))
}

fn ribbon_movies() -> Result<Vec<(String, Movie)>, String> {
    let spun = ribbon_2knot_movie(&RibbonPresentation::spun_trefoil()).map_err(|e| e.to_string())?;
    let site = spun.frames()[2].edges().into_iter().next().unwrap();
    let early = attach_handle(&spun, 2, site).map_err(|e| e.to_string())?;
    let turned = with_middle_handle(&spun).and_then(|m| m.reversed()?.mirrored()).map_err(|e| e.to_string())?;
    Ok(vec![
        ("spun-trefoil-handle".into(), fixture("spun-trefoil-handle.movie")),
        ("stevedore-handle".into(), fixture("stevedore-handle.movie")),
        ("spun-trefoil, handle at frame 2".into(), early),
        ("spun-trefoil-handle reversed and mirrored".into(), turned),
        ("spun-trefoil without handle".into(), fixture("spun-trefoil.movie")),
    ])
}

fn ribbon_invariance() -> Outcome {
    let mut windows = 0;
    let movies = ribbon_movies()?;
    for (name, m) in &movies {
        let r = verify::ribbon_invariance(m, DEFAULT_MAX_CROSSINGS);
        suite(r.clone()).map_err(|e| format!("{name}: {e}"))?;
        windows += r.checks.len() - 1;
    }
    Ok(format!("{} movies, {windows} windows", movies.len()))
}

fn trivial_ribbon_tori() -> Outcome {
    let mut parts = Vec::new();
    for name in ["spun-trefoil-handle", "stevedore-handle"] {
        let m = fixture(&format!("{name}.movie"));
        ensure(m == fixture_movie(name).map_err(|e| e.to_string())?, format!("{name}: fixture file is stale"))?;
        let k = kj_number(&m).map_err(|e| e.to_string())?;
        ensure(k.value == BigInt::from(2) && k.shift == 0, format!("{name}: {k}"))?;
        parts.push(format!("{name} {}", k.value));
    }
    Ok(parts.join(", "))
}

fn figure4() -> Outcome {
    let contexts = verify::figure4_contexts();
    let sizes: Vec<usize> = contexts.iter().map(|(_, d)| d.crossing_count()).collect();
    ensure(sizes == [0, 1, 3], format!("closures have {sizes:?} crossings"))?;
    suite(verify::figure4(&contexts, DEFAULT_MAX_CROSSINGS))
}

fn rotation() -> Outcome {
    let ds: Vec<_> = ["trefoil", "figure-eight"].iter().map(|&n| (n.to_string(), named_diagram(n).unwrap())).collect();
    suite(verify::rotation(&ds, DEFAULT_MAX_CROSSINGS))
}

fn reidemeister() -> Outcome {
    let r = verify::reidemeister(&verify::reidemeister_diagrams(), DEFAULT_MAX_CROSSINGS);
    for kw in ["r1+", "r1-", "r2+", "r2-", "r3"] {
        ensure(r.checks.iter().any(|c| c.name.contains(&format!(" {kw} "))), format!("no {kw} event checked"))?;
    }
    suite(r)
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 unknot homology", unknot_homology, Duration::from_secs(1)),
        ("2 Euler characteristic equals the state sum", euler_jones, Duration::from_secs(300)),
        ("3 d o d = 0 on random diagrams", random_complexes, Duration::from_secs(120)),
        ("4 KJ of trivial surfaces", trivial_surfaces, Duration::from_secs(10)),
        ("5 ribbon-move invariance", ribbon_invariance, Duration::from_secs(300)),
        ("6 ribbon 2-knots plus a handle", trivial_ribbon_tori, Duration::from_secs(300)),
        ("7 circle passing over or under an arc", figure4, Duration::from_secs(300)),
        ("8 rotation identity", rotation, Duration::from_secs(120)),
        ("9 Reidemeister maps", reidemeister, Duration::from_secs(300)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let t = Instant::now();
        let outcome = run();
        let took = t.elapsed();
        let outcome = outcome.and_then(|d| {
            ensure(took <= budget, format!("took {took:.2?}, budget {budget:?}"))?;
            Ok(d)
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({took:.2?})"),
            Err(reason) => {
                failures += 1;
                println!("FAIL {name}: {reason} ({took:.2?})");
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}

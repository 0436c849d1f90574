use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn khmovie(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_khmovie"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kj_of_the_torus_fixture() {
    let o = khmovie(&["kj", &fixture("trivial-torus.movie")], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "KJ = 2 (quantum shift 0)\n");
    let o = khmovie(&["kj", "-", "--format", "machine"], "start\nbirth 1\ndeath 1\n");
    assert_eq!(stdout(&o), "0\t2\n");
}

#[test]
fn jones_from_stdin() {
    let o = khmovie(&["jones", "-"], "O");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "q^-1 + q\n");
}

#[test]
fn homology_of_the_unknot() {
    let o = khmovie(&["homology", "O", "--format", "machine"], "");
    assert_eq!(stdout(&o), "0\t-1\t1\t\n0\t1\t1\t\n");
}

#[test]
fn ribbon_invariance_suite_passes() {
    let o = khmovie(&["verify", "ribbon-invariance", &fixture("spun-trefoil-handle.movie")], "");
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    assert!(!out.contains("FAIL"));
}

#[test]
fn failed_verification_exits_one() {
    // no finger moves, so no window to rewrite
    let o = khmovie(&["verify", "ribbon-invariance", &fixture("trivial-torus.movie")], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(khmovie(&["bogus"], "").status.code(), Some(2));
    assert_eq!(khmovie(&["verify", "no-such-suite"], "").status.code(), Some(2));
    assert_eq!(khmovie(&["jones", "X[1,2"], "").status.code(), Some(2));
    assert_eq!(khmovie(&["kj", "-"], "start\nbirth 1\n").status.code(), Some(2));
}

#[test]
fn make_reproduces_the_bundled_fixtures() {
    for name in ["sphere", "trivial-torus", "genus-2", "spun-trefoil-handle", "stevedore-handle"] {
        let o = khmovie(&["make", name], "");
        assert!(o.status.success());
        assert_eq!(stdout(&o), std::fs::read_to_string(fixture(&format!("{name}.movie"))).unwrap(), "{name}");
    }
    let o = khmovie(&["make", "genus", "--genus", "2"], "");
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("genus-2.movie")).unwrap());
}

#[test]
fn rewrite_keeps_the_kj_number() {
    let o = khmovie(&["rewrite", &fixture("spun-trefoil-handle.movie"), "--open", "3"], "");
    assert!(o.status.success());
    let rewritten = stdout(&o);
    assert!(rewritten.contains("r2+ 3 1 over"));
    let o = khmovie(&["kj", "-"], &rewritten);
    assert_eq!(stdout(&o), "KJ = 2 (quantum shift 0)\n");
}

#[test]
fn other_suites_pass() {
    for suite in ["figure4", "rotation", "euler-jones"] {
        let o = khmovie(&["verify", suite], "");
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
    }
    let o = khmovie(&["verify", "reidemeister", "trefoil"], "");
    assert!(o.status.success());
}

#[test]
fn help_lists_every_subcommand() {
    let o = khmovie(&["--help"], "");
    let help = stdout(&o);
    for sub in ["homology", "jones", "kj", "make", "rewrite", "verify"] {
        assert!(help.contains(sub), "{sub}");
        assert!(khmovie(&[sub, "--help"], "").status.success());
    }
}

use std::path::Path;
use std::process::{Command, Output};

use densitylab::formats::{GoodSetFile, SetFile};
use densitylab_core::exact::rat;
use densitylab_core::interval::IntervalSet;
use densitylab_core::periodic::PeriodicSet;
use densitylab_core::Rational;
use proptest::prelude::*;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_densitylab"));
    c.env_remove("DENSITYLAB_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn roots_table_lists_every_constant() {
    let o = run(&["roots"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for want in ["0.268486884048", "0.268700788513", "0.270690632574", "0.280776406404", "0.271069167986"] {
        assert!(text.contains(want), "missing {want} in\n{text}");
    }
}

#[test]
fn roots_tolerance_from_environment() {
    let o = bin().arg("roots").env("DENSITYLAB_TOL", "1e-4").output().unwrap();
    assert!(o.status.success());
    let coarse = stdout(&o);
    assert!(coarse.contains("0.2685") && !coarse.contains("0.268486884048"), "{coarse}");
    let flag = run(&["roots", "--tol", "1e-4"]);
    assert_eq!(stdout(&flag), coarse);
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c18.json");
    let o = run(&["construct", "kurka", "--delta", "27/100", "--n", "18", "--out", path(&file)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = SetFile::parse(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert!(parsed.halfline);

    let ok = run(&["verify", "--config", path(&file), "--delta", "27/100"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("\"passed\": true"));

    let bad = run(&["verify", "--config", path(&file), "--delta", "0.2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"halfline": false, "intervals": [["0", "3/0"]]}"#).unwrap();
    let o = run(&["verify", "--config", path(&file), "--delta", "1/4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let missing = run(&["verify", "--config", path(&dir.path().join("nope.json")), "--delta", "1/4"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn profile_includes_the_mirror_point() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c3.json");
    assert!(run(&["construct", "kurka", "--delta", "27/100", "--n", "3", "--out", path(&file)]).status.success());
    let m = "729/5254";
    let o = run(&["profile", "--config", path(&file), "--point", m]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["omega", "density", "omega_exact", "density_exact"]);
    let omegas: Vec<Rational> = rdr.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
    let one_minus_m = Rational::from_integer(1.into()) - rat(729, 5254);
    assert!(omegas.contains(&one_minus_m), "1 - m missing from the profile");
    assert!(omegas.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn goodset_example_passes() {
    let o = run(&["goodset", "verify", "--example", "--delta", "27/100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["measure"], "5621/9050");
    assert_eq!(v["passed"], true);
}

#[test]
fn goodset_example_file_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    assert!(run(&["goodset", "example", "--delta", "27/100", "--out", path(&file)]).status.success());
    let o = run(&["goodset", "verify", "--generator", path(&file), "--delta", "27/100"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn goodset_random_cuts_are_seeded() {
    let args = ["goodset", "verify", "--example", "--delta", "27/100", "--random-cuts", "50", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_symmetric_generator() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    std::fs::write(&file, r#"{"generator": [["0", "1/3"], ["1/2", "1"]]}"#).unwrap();
    let o = run(&["goodset", "verify", "--generator", path(&file), "--delta", "27/100"]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["measure"], "5/6");

    std::fs::write(&file, r#"{"generator": [["0", "1/3"], ["1/2", "2/3"]]}"#).unwrap();
    assert_eq!(run(&["goodset", "verify", "--generator", path(&file), "--delta", "27/100"]).status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--from", "0.2685", "--to", "0.2695", "--steps", "4", "--n-max", "60", "--jobs", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next().unwrap(), "delta,delta_decimal,minimal_n,verdict");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn sweep_far_from_the_boundary() {
    let above = stdout(&run(&["sweep", "--from", "0.273", "--to", "0.28", "--steps", "3"]));
    assert!(above.lines().skip(1).all(|l| l.ends_with(",found")), "{above}");
    let below = stdout(&run(&["sweep", "--from", "0.25", "--to", "0.259", "--steps", "2", "--n-max", "30"]));
    assert!(below.lines().skip(1).all(|l| l.ends_with(",not-found")), "{below}");
}

#[test]
fn lemmaxy_oracle_on_the_example() {
    let o = run(&["oracle", "lemmaxy", "--example", "--p", "0", "--q", "5", "--delta", "27/100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["outcome"], "holds");
}

fn arb_rationals() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set((-50i64..50, 1i64..12), 2..12).prop_map(|pts| {
        let mut v: Vec<Rational> = pts.into_iter().map(|(n, d)| rat(n, d)).collect();
        v.sort();
        v.dedup();
        if v.len() % 2 == 1 {
            v.pop();
        }
        v
    })
}

proptest! {
    #[test]
    fn set_files_round_trip(pts in arb_rationals()) {
        prop_assume!(pts.len() >= 2);
        let pairs: Vec<(Rational, Rational)> = pts.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
        let set = IntervalSet::from_pairs(pairs).unwrap();
        let text = SetFile::from_set(&set).to_json();
        let back = SetFile::parse(&text).unwrap();
        prop_assert_eq!(back.finite().unwrap(), set);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn generator_files_round_trip(cuts in prop::collection::btree_set(1i64..60, 3..10)) {
        let mut cuts: Vec<Rational> = cuts.into_iter().map(|c| rat(c, 61)).collect();
        if cuts.len() % 2 == 1 {
            cuts.pop();
        }
        let h = PeriodicSet::new(cuts).unwrap();
        let text = GoodSetFile::from_periodic(&h).to_json();
        let back = GoodSetFile::parse(&text).unwrap();
        let again = back.periodic().unwrap();
        prop_assert_eq!(again.generator(), h.generator());
        prop_assert_eq!(back.to_json(), text);
    }
}

use std::time::Instant;

use densitylab_core::bounds::{condition_c_witness, lemmaxy_oracle, periodic_centers, recheck_witness, ConditionC, UpperAtlas};
use densitylab_core::constructions::{good_set_bound, good_set_example};
use densitylab_core::density::{density_at, triangle_check, Side};
use densitylab_core::exact::{int, rat};
use densitylab_core::periodic::{
    check_good_i, check_good_ii_bounded, cover_period, default_cut_grid, find_between_interval, find_upper_interval, Direction,
};
use densitylab_core::{FindingStatus, Rational, Region};

fn d27() -> Rational {
    rat(27, 100)
}

#[test]
fn measure_of_the_example() {
    let h = good_set_example(&d27()).unwrap();
    assert_eq!(h.measure(), &rat(5621, 9050));
    assert_eq!(h.periodic_measure(&int(0), &int(1)), rat(5621, 9050));
    assert_eq!(h.periodic_measure(&int(0), &int(5)), int(5) * good_set_bound(&d27()));
    assert!(h.is_mirror_symmetric());
}

#[test]
fn condition_i_at_the_example() {
    let t = Instant::now();
    let h = good_set_example(&d27()).unwrap();
    let r = check_good_i(&h, &d27()).unwrap();
    assert!(r.passed(), "{r:?}");
    for f in &r.findings {
        let (Some(p), Some(w)) = (&f.point, &f.radius) else { continue };
        let d = density_at(&h, p, w).unwrap();
        match f.status {
            FindingStatus::Witness(Side::B) => assert!(d >= rat(73, 100)),
            FindingStatus::Witness(Side::W) => assert!(d <= d27()),
            _ => panic!("unexpected {f:?}"),
        }
    }
    eprintln!("good (i): {:?}", t.elapsed());
}

#[test]
fn condition_ii_on_the_grid() {
    let t = Instant::now();
    let h = good_set_example(&d27()).unwrap();
    let cuts = default_cut_grid(&h);
    assert!(cuts.len() >= 1000, "{}", cuts.len());
    let r = check_good_ii_bounded(&h, &d27(), &cuts).unwrap();
    let bad: Vec<_> = r.findings.iter().filter(|f| f.status != FindingStatus::Pass).take(5).collect();
    assert!(bad.is_empty(), "{bad:?}");
    eprintln!("good (ii): {} cuts in {:?}", cuts.len(), t.elapsed());
}

#[test]
fn witness_searches_reverify() {
    let d = d27();
    let h = good_set_example(&d).unwrap();
    let nu1 = h.endpoints_mod1()[0].clone();
    let w = find_upper_interval(&h, &nu1, &d, Direction::Left).unwrap();
    assert!(triangle_check(&h, &w.center, &w.radius, &d).unwrap());
    assert!(w.interval().contains(&nu1));
    for p in h.endpoints_mod1() {
        let iv = find_between_interval(&h, p, p, &d).unwrap();
        assert_eq!(&iv.center, p);
    }
    let cover = cover_period(&h, &d).unwrap();
    assert!(cover.len() <= 2 * h.endpoints_mod1().len());
    for iv in &cover {
        assert!(h.measure_within(iv.left(), iv.right()) / iv.length() >= rat(73, 100));
    }
}

#[test]
fn condition_c_on_a_gap() {
    let d = d27();
    let h = good_set_example(&d).unwrap();
    let e = h.endpoints_mod1();
    let (w, v) = (e[0].clone(), e[1].clone());
    let mut atlas = UpperAtlas::new(&h, periodic_centers(&h, &w, &v, &d).unwrap(), &d);
    match condition_c_witness(&mut atlas, &w, &v, None).unwrap() {
        ConditionC::Witness(wit) => assert!(recheck_witness(&h, &w, &v, &wit, &d).unwrap()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn lemmaxy_on_truncated_example() {
    let t = Instant::now();
    let d = d27();
    let h = good_set_example(&d).unwrap();
    let cert = h.certificate(&d).unwrap();
    let r = cert.horizon.clone();
    let trunc = h.truncate(&(-int(2) * &r), &(int(5) + int(2) * &r));
    let out = lemmaxy_oracle(&trunc, &int(0), &int(5), &d).unwrap();
    eprintln!("{:?} {:?}", out.report.notes, out.report.findings.iter().take(5).collect::<Vec<_>>());
    assert!(out.report.passed());
    assert_eq!(out.interior_measure, out.bound);
    eprintln!("lemmaxy: {} windows in {:?}, R = {}", out.windows_checked, t.elapsed(), r);
}

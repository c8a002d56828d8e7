//! Counterexample verification, the quantities `v_B`, `v_W`, `ρ`, and the
//! checkable conditions of the structural lemmas about minimal
//! counterexamples.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::density::{analyze, density_at, profile_extrema, BadRadii, Side};
use crate::error::{Error, Result};
use crate::exact::{ensure_delta, format_rational, int, min_r, rat, Rational};
use crate::interval::{Configuration, Interval, IntervalSet};
use crate::report::{Finding, FindingStatus, VerificationReport};

/// Decides whether `config` is a counterexample at `delta`: every endpoint
/// must have a radius with density outside `(δ, 1 − δ)`. Each endpoint gets
/// a finding: its greatest bad radius `ω(p)` with the side and density, or a
/// violation carrying the density extrema.
pub fn is_counterexample(config: &Configuration, delta: &Rational) -> Result<VerificationReport> {
    ensure_delta(delta)?;
    let mut report = VerificationReport::new("counterexample");
    for p in config.endpoints() {
        let (profile, bad) = analyze(config, &p, delta)?;
        match bad.greatest()? {
            Some((omega, side)) => {
                let f = density_at(config, &p, &omega)?;
                report.push(Finding::new("endpoint", FindingStatus::Witness(side)).at(&p).radius(&omega).value("density", f));
            }
            None => {
                let e = profile_extrema(&profile);
                report.push(
                    Finding::new("endpoint", FindingStatus::Violation)
                        .at(&p)
                        .value("inf", e.inf.value)
                        .value("sup", e.sup.value),
                );
            }
        }
    }
    Ok(report)
}

/// Per-endpoint `(p, ω(p), side)` and the derived quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SzenesQuantities {
    pub v_b: Rational,
    pub v_w: Rational,
    pub rho: Rational,
    pub table: Vec<(Rational, Rational, Side)>,
}

impl SzenesQuantities {
    /// The three inequalities `1 − ρ <= 2δ(1 − v_B)`, `ρ <= 2δ v_W` and
    /// `v_W − v_B >= 1/(2δ) − 1`, each with both sides.
    pub fn inequalities(&self, delta: &Rational) -> [(bool, Rational, Rational); 3] {
        let two_d = int(2) * delta;
        let one = Rational::one();
        let l1 = &one - &self.rho;
        let r1 = &two_d * (&one - &self.v_b);
        let r2 = &two_d * &self.v_w;
        let l3 = &self.v_w - &self.v_b;
        let r3 = one / &two_d - int(1);
        [(l1 <= r1, l1, r1), (self.rho <= r2, self.rho.clone(), r2), (l3 >= r3, l3, r3)]
    }
}

/// `v_B`, `v_W` and `ρ` for a counterexample normalized so that its last
/// endpoint is 1.
pub fn szenes_quantities(config: &Configuration, delta: &Rational) -> Result<SzenesQuantities> {
    ensure_delta(delta)?;
    let last = config.last_endpoint();
    if !last.is_one() {
        return Err(Error::NotNormalized(last));
    }
    let half = rat(1, 2);
    let mut table = Vec::new();
    let mut v_b: Option<Rational> = None;
    let mut v_w: Option<Rational> = None;
    for p in config.endpoints() {
        let (_, bad) = analyze(config, &p, delta)?;
        let (omega, side) = bad.greatest()?.ok_or_else(|| Error::NoBadRadius(p.clone()))?;
        match side {
            Side::B if p <= half && omega >= p => {
                if v_b.as_ref().is_none_or(|v| &p > v) {
                    v_b = Some(p.clone());
                }
            }
            Side::W if p >= half && omega >= Rational::one() - &p => {
                if v_w.as_ref().is_none_or(|v| &p < v) {
                    v_w = Some(p.clone());
                }
            }
            _ => {}
        }
        table.push((p, omega, side));
    }
    Ok(SzenesQuantities {
        v_b: v_b.ok_or(Error::EmptyRange("v_B"))?,
        v_w: v_w.ok_or(Error::EmptyRange("v_W"))?,
        rho: config.body().measure_within(&Rational::zero(), &Rational::one()),
        table,
    })
}

/// A named input to a property bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleObject {
    Scalar(Rational),
    Set(IntervalSet),
}

pub type BundleObjects = BTreeMap<String, BundleObject>;

/// The condition bundles that can be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bundle {
    /// Set `D` in `(0, 1]` with window `a < b`: conditions (a), (b), (c).
    LemmaAbc,
    /// `D`, `a`, `b`, `a_prime`, `b_prime`, `eps_a`, `eps_b`: (i)–(vii).
    LemmaBiVii,
    /// Same objects: (viii), (ix).
    LemmaBwlogViiiIx,
    /// Set `F`: (I)–(IV).
    LemmaDiIv,
}

impl Bundle {
    pub const ALL: [Bundle; 4] = [Bundle::LemmaAbc, Bundle::LemmaBiVii, Bundle::LemmaBwlogViiiIx, Bundle::LemmaDiIv];

    pub fn id(self) -> &'static str {
        match self {
            Bundle::LemmaAbc => "lemmaa-abc",
            Bundle::LemmaBiVii => "lemmab-i-vii",
            Bundle::LemmaBwlogViiiIx => "lemmabwlog-viii-ix",
            Bundle::LemmaDiIv => "lemmad-I-IV",
        }
    }

    pub fn parse(id: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|b| b.id() == id).ok_or_else(|| Error::UnknownBundle(id.to_string()))
    }
}

fn scalar<'a>(objects: &'a BundleObjects, name: &str) -> Result<&'a Rational> {
    match objects.get(name) {
        Some(BundleObject::Scalar(x)) => Ok(x),
        _ => Err(Error::MissingSymbol(name.to_string())),
    }
}

fn set<'a>(objects: &'a BundleObjects, name: &str) -> Result<&'a IntervalSet> {
    match objects.get(name) {
        Some(BundleObject::Set(s)) if !s.is_empty() => Ok(s),
        _ => Err(Error::MissingSymbol(name.to_string())),
    }
}

fn verdict(ok: bool) -> FindingStatus {
    if ok { FindingStatus::Pass } else { FindingStatus::Violation }
}

fn bounds_of(s: &IntervalSet) -> (Rational, Rational) {
    let ivs = s.intervals();
    (ivs[0].left().clone(), ivs[ivs.len() - 1].right().clone())
}

/// For every endpoint `p` of `s` with `lo < p < hi`, some radius `μ` with
/// `I_μ(p) ⊂ (wl, wr)` has density outside `(δ, 1 − δ)`.
fn windowed_existence(
    report: &mut VerificationReport,
    label: &str,
    s: &IntervalSet,
    (lo, hi): (&Rational, &Rational),
    (wl, wr): (&Rational, &Rational),
    delta: &Rational,
) -> Result<()> {
    let mut all = true;
    for p in s.endpoints().into_iter().filter(|p| p > lo && p < hi) {
        let max = min_r(&(&p - wl), &(wr - &p));
        let found = if max > Rational::zero() {
            let (_, bad): (_, BadRadii) = analyze(s, &p, delta)?;
            bad.witness_upto(&max)
        } else {
            None
        };
        match found {
            Some((mu, side)) => {
                let f = density_at(s, &p, &mu)?;
                report.push(Finding::new(label, FindingStatus::Witness(side)).at(&p).radius(&mu).value("density", f));
            }
            None => {
                all = false;
                report.push(Finding::new(label, FindingStatus::Violation).at(&p).value("max_radius", max));
            }
        }
    }
    if all {
        report.push(Finding::new(label, FindingStatus::Pass));
    }
    Ok(())
}

fn quota(delta: &Rational) -> Rational {
    int(4) * delta * delta / (Rational::one() - int(2) * delta)
}

fn minimality_unchecked(report: &mut VerificationReport, label: &str) {
    report.push(Finding::new(label, FindingStatus::Unchecked));
    report.note(format!("{label}: interval-count minimality over all counterexamples is not decidable here"));
}

/// Evaluates every condition of `bundle` on `objects`, exactly.
pub fn check_property_bundle(bundle: Bundle, objects: &BundleObjects, delta: &Rational) -> Result<VerificationReport> {
    ensure_delta(delta)?;
    let mut report = VerificationReport::new(bundle.id());
    let k = quota(delta);
    match bundle {
        Bundle::LemmaAbc => {
            let d = set(objects, "D")?;
            let a = scalar(objects, "a")?;
            let b = scalar(objects, "b")?;
            let (zero, one) = (Rational::zero(), Rational::one());
            windowed_existence(&mut report, "(a)", d, (a, b), (&zero, &one), delta)?;
            minimality_unchecked(&mut report, "(b)");
            let bound = &k * (b - a);
            let ld = d.total_measure();
            let lc = d.complement_within(&zero, &one).total_measure();
            report.push(Finding::new("(c) measure", verdict(ld <= bound)).value("measure", ld).value("bound", bound.clone()));
            report.push(Finding::new("(c) complement", verdict(lc <= bound)).value("measure", lc).value("bound", bound));
        }
        Bundle::LemmaBiVii => {
            let d = set(objects, "D")?;
            let a = scalar(objects, "a")?;
            let b = scalar(objects, "b")?;
            let ap = scalar(objects, "a_prime")?;
            let bp = scalar(objects, "b_prime")?;
            let ea = scalar(objects, "eps_a")?;
            let eb = scalar(objects, "eps_b")?;
            let (r1, sn) = bounds_of(d);
            let i_ok = &r1 <= a
                && a < b
                && b <= &sn
                && d.is_endpoint(ap)
                && d.is_endpoint(bp)
                && a < ap
                && ap < b
                && a < bp
                && bp < b;
            report.push(Finding::new("(i)", verdict(i_ok)));
            minimality_unchecked(&mut report, "(ii)");
            windowed_existence(&mut report, "(iii)", d, (a, b), (&r1, &sn), delta)?;
            for (name, c, e) in [("(iv) a'", ap, ea), ("(iv) b'", bp, eb)] {
                let ok = e > &Rational::zero() && &(c - e) >= &r1 && &(c + e) <= &sn;
                report.push(Finding::new(name, verdict(ok)).at(c).radius(e));
            }
            for (name, c, e) in [("(v) a'", ap, ea), ("(v) b'", bp, eb)] {
                let ok = e > &Rational::zero() && {
                    let prof = crate::density::density_profile(d, c);
                    let f = prof.density(e).unwrap_or_default();
                    let sup = prof.max_density_upto(e).unwrap_or_default();
                    f >= Rational::one() - delta && sup <= f
                };
                report.push(Finding::new(name, verdict(ok)).at(c).radius(e));
            }
            let first = &d.intervals()[0];
            let last = &d.intervals()[d.len() - 1];
            let meets = |c: &Rational, e: &Rational, iv: &Interval| c - e < *iv.right() && c + e > *iv.left();
            let vi = ea > &Rational::zero() && eb > &Rational::zero() && meets(ap, ea, first) && meets(bp, eb, last);
            report.push(Finding::new("(vi)", verdict(vi)));
            let bound = &k * (b - a);
            let ld = d.total_measure();
            report.push(Finding::new("(vii)", verdict(ld <= bound)).value("measure", ld).value("bound", bound));
        }
        Bundle::LemmaBwlogViiiIx => {
            let a = scalar(objects, "a")?;
            let b = scalar(objects, "b")?;
            let ap = scalar(objects, "a_prime")?;
            let bp = scalar(objects, "b_prime")?;
            let ea = scalar(objects, "eps_a")?;
            let eb = scalar(objects, "eps_b")?;
            let coef = (int(4) * delta - int(1)) / (Rational::one() - int(2) * delta);
            let l8 = ap - a;
            let r8 = &coef * ea;
            report.push(Finding::new("(viii)", verdict(l8 > r8)).value("lhs", l8).value("rhs", r8));
            let l9 = b - bp;
            let r9 = &coef * eb;
            report.push(Finding::new("(ix)", verdict(l9 > r9)).value("lhs", l9).value("rhs", r9));
        }
        Bundle::LemmaDiIv => {
            let f = set(objects, "F")?;
            let first = &f.intervals()[0];
            let last = &f.intervals()[f.len() - 1];
            let c1 = first.center();
            let cm = last.center();
            let ok = c1.is_zero() && cm.is_one();
            report.push(Finding::new("(I)", verdict(ok)).value("first_center", c1).value("last_center", cm));
            minimality_unchecked(&mut report, "(II)");
            let (u1, vm) = bounds_of(f);
            windowed_existence(&mut report, "(III)", f, (&u1, &vm), (&u1, &vm), delta)?;
            let m = f.measure_within(&Rational::zero(), &Rational::one());
            report.push(Finding::new("(IV)", verdict(m <= k)).value("measure", m).value("bound", k));
        }
    }
    Ok(report)
}

/// Human-readable one-line summary of a finding.
pub fn describe(f: &Finding) -> String {
    let mut s = format!("{} {}", f.label, f.status.as_str());
    if let Some(p) = &f.point {
        s += &format!(" at {}", format_rational(p));
    }
    if let Some(r) = &f.radius {
        s += &format!(" radius {}", format_rational(r));
    }
    for (k, v) in &f.values {
        s += &format!(" {k}={}", format_rational(v));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(pairs: &[(i64, i64, i64, i64)]) -> IntervalSet {
        IntervalSet::from_pairs(pairs.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d)))).unwrap()
    }

    #[test]
    fn single_interval_is_not_a_counterexample_at_small_delta() {
        let c = Configuration::new(body(&[(1, 1, 2, 1)])).unwrap();
        let r = is_counterexample(&c, &rat(1, 5)).unwrap();
        assert!(!r.passed());
        assert!(r.violations().any(|f| f.point == Some(Rational::zero())));
    }

    #[test]
    fn szenes_requires_normalization() {
        let c = Configuration::new(body(&[(1, 1, 2, 1)])).unwrap();
        assert_eq!(szenes_quantities(&c, &rat(1, 4)), Err(Error::NotNormalized(int(2))));
    }

    #[test]
    fn szenes_reports_missing_radius() {
        let c = Configuration::new(body(&[(1, 2, 1, 1)])).unwrap();
        match szenes_quantities(&c, &rat(1, 5)) {
            Err(Error::NoBadRadius(_)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bundle_symbols_are_required() {
        let objs = BundleObjects::new();
        assert_eq!(
            check_property_bundle(Bundle::LemmaAbc, &objs, &rat(1, 4)),
            Err(Error::MissingSymbol("D".into()))
        );
        assert!(Bundle::parse("lemmax").is_err());
        for b in Bundle::ALL {
            assert_eq!(Bundle::parse(b.id()).unwrap(), b);
        }
    }

    #[test]
    fn lemmaa_measure_bound_fails_for_full_window() {
        let mut objs = BundleObjects::new();
        objs.insert("D".into(), BundleObject::Set(body(&[(1, 4, 1, 1)])));
        objs.insert("a".into(), BundleObject::Scalar(rat(1, 4)));
        objs.insert("b".into(), BundleObject::Scalar(rat(1, 1)));
        // λD = b − a and 4δ²/(1 − 2δ) < 1 at δ = 1/4.
        let r = check_property_bundle(Bundle::LemmaAbc, &objs, &rat(1, 4)).unwrap();
        assert!(r.findings.iter().any(|f| f.label == "(c) measure" && f.is_violation()));
    }

    #[test]
    fn bwlog_inequalities() {
        let mut objs = BundleObjects::new();
        for (k, v) in [("a", rat(0, 1)), ("b", rat(1, 1)), ("a_prime", rat(1, 10)), ("b_prime", rat(9, 10))] {
            objs.insert(k.into(), BundleObject::Scalar(v));
        }
        objs.insert("eps_a".into(), BundleObject::Scalar(rat(1, 2)));
        objs.insert("eps_b".into(), BundleObject::Scalar(rat(1, 100)));
        // δ = 3/10: coefficient (1/5)/(2/5) = 1/2.
        let r = check_property_bundle(Bundle::LemmaBwlogViiiIx, &objs, &rat(3, 10)).unwrap();
        let st: Vec<_> = r.findings.iter().map(|f| f.status).collect();
        assert_eq!(st, [FindingStatus::Violation, FindingStatus::Pass]);
    }
}

//! The optimal configuration family `C_N`, the earlier schematic families,
//! and the explicit periodic good set.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::density::density_at;
use crate::error::{Error, Result};
use crate::exact::{ensure_delta, format_rational, int, Rational};
use crate::interval::{Configuration, Interval, IntervalSet};
use crate::periodic::PeriodicSet;
use crate::report::{Finding, FindingStatus, VerificationReport};
use crate::verifier::is_counterexample;
use crate::zeta::{at_least_conjugate_quarter, at_most_golden_quarter};

/// Parameters of the family at a given `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KurkaParams {
    pub delta: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub phi: Rational,
    pub psi: Rational,
    pub m: Rational,
    /// `delta > zeta_1`.
    pub above_zeta1: bool,
    /// `4δ² + 2δ − 1 <= 0`, which gives `β/(2α) <= δ`.
    pub golden_window: bool,
    /// `4δ² − 6δ + 1 <= 0`, which gives `ψ <= φ <= ψ + α`.
    pub conjugate_window: bool,
}

impl KurkaParams {
    pub fn new(delta: &Rational) -> Result<Self> {
        ensure_delta(delta)?;
        let d = delta.clone();
        let one = Rational::one();
        let d2 = &d * &d;
        let t = &one + int(3) * &d;
        Ok(Self {
            alpha: (&one + int(2) * &d - int(4) * &d2) / (int(4) * &t),
            beta: int(2) * &d2 / &t,
            phi: &one / (int(2) * &t),
            psi: &d / &t,
            m: int(4) * &d2 / (&t + int(4) * &d2),
            above_zeta1: crate::zeta::zeta_polynomial(1)?.sign_at(&d) == core::cmp::Ordering::Greater,
            golden_window: at_most_golden_quarter(&d),
            conjugate_window: at_least_conjugate_quarter(&d),
            delta: d,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.above_zeta1 && self.golden_window && self.conjugate_window
    }

    /// `(k_i, l_i)` for `i = 1, 2, 3` within one period.
    pub fn period_intervals(&self) -> [(Rational, Rational); 3] {
        let k1 = Rational::zero();
        let l1 = self.phi.clone();
        let k2 = &self.phi + &self.psi;
        let l2 = &k2 + &self.alpha;
        let k3 = &l2 + &self.beta;
        let l3 = &k3 + &self.alpha;
        [(k1, l1), (k2, l2), (k3, l3)]
    }

    /// `φ + 2ψ + 2α + β`, identically 1.
    pub fn period(&self) -> Rational {
        &self.phi + int(2) * &self.psi + int(2) * &self.alpha + &self.beta
    }

    /// `λ S_N = N(φ + 2α) + φ`.
    pub fn sn_measure(&self, n: u32) -> Rational {
        int(n as i64) * (&self.phi + int(2) * &self.alpha) + &self.phi
    }

    /// Scale and shift of `u_N`, which maps `0 ↦ m` and `N + φ ↦ 1`.
    pub fn u_n(&self, n: u32) -> (Rational, Rational) {
        ((Rational::one() - &self.m) / (int(n as i64) + &self.phi), self.m.clone())
    }

    /// `λ(u_N(S_N))`.
    pub fn cn_body_measure(&self, n: u32) -> Rational {
        self.u_n(n).0 * self.sn_measure(n)
    }

    /// The cheap necessary test `λ(u_N(S_N)) <= 2δ` for the radius 1 at the
    /// endpoint 1.
    pub fn lambda_gate(&self, n: u32) -> bool {
        self.cn_body_measure(n) <= int(2) * &self.delta
    }
}

pub fn kurka_params(delta: &Rational) -> Result<KurkaParams> {
    KurkaParams::new(delta)
}

fn require_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Infeasible("N must be at least 1".into()));
    }
    Ok(())
}

/// `S_N`: `N` shifted copies of the three-interval period plus a final
/// `(N + k_1, N + l_1)`.
pub fn kurka_sn(delta: &Rational, n: u32) -> Result<IntervalSet> {
    require_n(n)?;
    let p = KurkaParams::new(delta)?;
    let [i1, i2, i3] = p.period_intervals();
    let mut out = Vec::with_capacity(3 * n as usize + 1);
    for k in 0..n {
        let s = int(k as i64);
        for (a, b) in [&i1, &i2, &i3] {
            out.push(Interval::new(a + &s, b + &s)?);
        }
    }
    let s = int(n as i64);
    out.push(Interval::new(&i1.0 + &s, &i1.1 + &s)?);
    IntervalSet::from_ordered(out)
}

/// `C_N = (−∞, 0) ∪ u_N(S_N)`.
pub fn kurka_cn(delta: &Rational, n: u32) -> Result<Configuration> {
    let p = KurkaParams::new(delta)?;
    let (scale, shift) = p.u_n(n);
    Configuration::new(kurka_sn(delta, n)?.affine(&scale, &shift)?)
}

/// Checks the radius claims for `S_N` at every interior endpoint and the
/// boundary radii of `C_N`: `1 − m` at `0` and `m`, `1` at `1`.
pub fn verify_claim_radii(delta: &Rational, n: u32) -> Result<VerificationReport> {
    let p = KurkaParams::new(delta)?;
    let sn = kurka_sn(delta, n)?;
    let mut report = VerificationReport::new(format!("claim-radii N={n}"));
    if !p.is_valid() {
        report.note(format!("parameters outside the validity window at delta = {}", format_rational(delta)));
    }
    let upper = Rational::one() - delta;
    let [(_, l1), (k2, l2), (k3, l3)] = p.period_intervals();
    let top = int(n as i64) + &p.phi;
    for e in sn.endpoints() {
        if e.is_zero() || e == top {
            continue;
        }
        let frac = &e - Rational::from_integer(crate::exact::floor(&e));
        let (case, eps, exact) = if frac == l1 || frac.is_zero() {
            ("I", p.phi.clone(), true)
        } else if frac == l2 || frac == k3 {
            ("II", p.alpha.clone(), false)
        } else if frac == l3 || frac == k2 {
            ("III", &p.psi + &p.phi, true)
        } else {
            return Err(Error::Postcondition(format!("unexpected endpoint {}", format_rational(&e))));
        };
        let f = density_at(&sn, &e, &eps)?;
        let ok = if exact { f == upper } else { f >= upper };
        let status = if ok { FindingStatus::Witness(crate::density::Side::B) } else { FindingStatus::Violation };
        report.push(Finding::new(format!("case {case}"), status).at(&e).radius(&eps).value("density", f));
    }
    let cn = kurka_cn(delta, n)?;
    let one_m = Rational::one() - &p.m;
    for c in [Rational::zero(), p.m.clone()] {
        let f = density_at(&cn, &c, &one_m)?;
        let status = if f >= upper { FindingStatus::Witness(crate::density::Side::B) } else { FindingStatus::Violation };
        report.push(Finding::new("boundary", status).at(&c).radius(&one_m).value("density", f));
    }
    let f = density_at(&cn, &Rational::one(), &Rational::one())?;
    let status = if &f <= delta { FindingStatus::Witness(crate::density::Side::W) } else { FindingStatus::Violation };
    report.push(Finding::new("boundary", status).at(&Rational::one()).radius(&Rational::one()).value("density", f));
    Ok(report)
}

/// Least `N <= n_max` for which `C_N` is a counterexample. Candidates
/// failing the `λ` gate are skipped; the rest are verified at every
/// endpoint.
pub fn minimal_counterexample_n(delta: &Rational, n_max: u32) -> Result<Option<u32>> {
    let p = KurkaParams::new(delta)?;
    for n in 1..=n_max {
        if !p.lambda_gate(n) {
            continue;
        }
        if is_counterexample(&kurka_cn(delta, n)?, delta)?.passed() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Least `N` passing the `λ` gate, from the closed form: the body measure
/// decreases towards `(1 − m)(φ + 2α)` as `N` grows.
pub fn lambda_threshold_n(delta: &Rational, n_max: u32) -> Result<Option<u32>> {
    let p = KurkaParams::new(delta)?;
    Ok((1..=n_max).find(|&n| p.lambda_gate(n)))
}

fn uniform_layout(m: &Rational, k: u32, fill: &Rational) -> Result<Vec<(Rational, Rational)>> {
    if !(m.is_positive() && m < &Rational::one()) {
        return Err(Error::Infeasible(format!("m = {} must lie in (0, 1)", format_rational(m))));
    }
    if k == 0 {
        return Err(Error::Infeasible("at least one interval is required".into()));
    }
    if !(fill.is_positive() && fill <= &Rational::one()) {
        return Err(Error::Infeasible(format!("fill = {} must lie in (0, 1]", format_rational(fill))));
    }
    let span = Rational::one() - m;
    let kk = int(k as i64);
    let len = fill * &span / &kk;
    if k == 1 {
        return Ok(alloc::vec![(Rational::one() - &len, Rational::one())]);
    }
    if fill.is_one() {
        return Err(Error::Infeasible("fill = 1 leaves no gaps between intervals".into()));
    }
    let gap = (Rational::one() - fill) * &span / (&kk - int(1));
    Ok((0..k)
        .map(|i| {
            let a = m + int(i as i64) * (&len + &gap);
            let b = &a + &len;
            (a, b)
        })
        .collect())
}

/// `k` equal intervals covering the fraction `fill` of `(m, 1)`, evenly
/// spaced, the first starting at `m` and the last ending at 1.
pub fn szenes_config(m: &Rational, k: u32, fill: &Rational) -> Result<Configuration> {
    cgo_config(m, k, fill, &Rational::zero())
}

/// The Szenes layout with each interval split by a centered gap of
/// relative width `gap`; `gap = 0` gives the unsplit layout.
pub fn cgo_config(m: &Rational, k: u32, fill: &Rational, gap: &Rational) -> Result<Configuration> {
    if gap.is_negative() || gap >= &Rational::one() {
        return Err(Error::Infeasible(format!("gap = {} must lie in [0, 1)", format_rational(gap))));
    }
    let mut pairs = Vec::new();
    for (a, b) in uniform_layout(m, k, fill)? {
        if gap.is_zero() {
            pairs.push((a, b));
        } else {
            let len = &b - &a;
            let half = &len * (Rational::one() - gap) / int(2);
            pairs.push((a.clone(), &a + &half));
            pairs.push((&b - &half, b));
        }
    }
    let ivs: Result<Vec<Interval>> = pairs.into_iter().map(|(a, b)| Interval::new(a, b)).collect();
    Configuration::new(IntervalSet::from_ordered(ivs?)?)
}

/// `G = [0, φ/2) ∪ (φ/2+ψ, φ/2+ψ+α) ∪ (1−φ/2−ψ−α, 1−φ/2−ψ) ∪ (1−φ/2, 1]`,
/// one period of `S_1` recentred at `φ/2`.
pub fn good_set_example(delta: &Rational) -> Result<PeriodicSet> {
    let p = KurkaParams::new(delta)?;
    let h = &p.phi / int(2);
    let one = Rational::one();
    let mu2 = &h + &p.psi;
    let nu2 = &mu2 + &p.alpha;
    let nu3 = &one - &h - &p.psi;
    let mu3 = &nu3 - &p.alpha;
    let mu4 = &one - &h;
    PeriodicSet::new(alloc::vec![h, mu2, nu2, mu3, nu3, mu4])
}

/// `(−φ, φ) ∪ (φ + 2ψ, φ + 2ψ + 2α)`: doubling the left half of the good
/// set with its first interval mirrored about 0.
pub fn good_set_preimage(delta: &Rational) -> Result<IntervalSet> {
    let p = KurkaParams::new(delta)?;
    let a = &p.phi + int(2) * &p.psi;
    IntervalSet::from_pairs([(-p.phi.clone(), p.phi.clone()), (a.clone(), a + int(2) * &p.alpha)])
}

/// `(1 − δ)(1 + 2δ)/(1 + 3δ)`, the least possible measure of a good set.
pub fn good_set_bound(delta: &Rational) -> Rational {
    let one = Rational::one();
    (&one - delta) * (&one + int(2) * delta) / (&one + int(3) * delta)
}

/// `4δ²/(1 − 2δ)`.
pub fn good_set_quota(delta: &Rational) -> Rational {
    int(4) * delta * delta / (Rational::one() - int(2) * delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn params_at_27_percent() {
        let p = KurkaParams::new(&rat(27, 100)).unwrap();
        assert_eq!(p.phi, rat(50, 181));
        assert_eq!(p.psi, rat(27, 181));
        assert_eq!(p.alpha, rat(3121, 18100));
        assert_eq!(p.beta, rat(729, 9050));
        assert_eq!(p.m, rat(729, 5254));
        assert_eq!(p.period(), int(1));
        assert!(p.is_valid());
    }

    #[test]
    fn validity_flags() {
        assert!(!KurkaParams::new(&rat(26, 100)).unwrap().above_zeta1);
        assert!(KurkaParams::new(&rat(30, 100)).unwrap().is_valid());
        assert!(!KurkaParams::new(&rat(31, 100)).unwrap().golden_window);
    }

    #[test]
    fn sn_shape() {
        let d = rat(27, 100);
        let s1 = kurka_sn(&d, 1).unwrap();
        assert_eq!(s1.len(), 4);
        assert_eq!(s1.total_measure(), rat(11242, 18100) + rat(5000, 18100));
        let s3 = kurka_sn(&d, 3).unwrap();
        assert_eq!(s3.len(), 10);
        let p = KurkaParams::new(&d).unwrap();
        assert_eq!(s3.endpoints().last().unwrap(), &(int(3) + &p.phi));
        assert!(kurka_sn(&d, 0).is_err());
    }

    #[test]
    fn cn_is_normalized() {
        let d = rat(27, 100);
        let c = kurka_cn(&d, 3).unwrap();
        assert_eq!(c.body().endpoints()[0], rat(729, 5254));
        assert_eq!(c.last_endpoint(), int(1));
    }

    #[test]
    fn layouts() {
        let c = szenes_config(&rat(1, 4), 4, &rat(1, 2)).unwrap();
        assert_eq!(c.body().len(), 4);
        assert_eq!(c.body().endpoints()[0], rat(1, 4));
        assert_eq!(c.last_endpoint(), int(1));
        assert_eq!(c.body().total_measure(), rat(3, 8));
        assert_eq!(cgo_config(&rat(1, 4), 4, &rat(1, 2), &Rational::zero()).unwrap(), c);
        let g = cgo_config(&rat(1, 4), 4, &rat(1, 2), &rat(1, 5)).unwrap();
        assert_eq!(g.body().len(), 8);
        assert_eq!(g.body().total_measure(), rat(3, 8) * rat(4, 5));
        assert!(szenes_config(&rat(1, 4), 2, &int(1)).is_err());
        assert!(szenes_config(&int(1), 2, &rat(1, 2)).is_err());
        assert_eq!(szenes_config(&rat(1, 2), 1, &rat(1, 2)).unwrap().body().endpoints(), [rat(3, 4), int(1)]);
    }
}

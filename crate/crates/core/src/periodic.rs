//! One-periodic sets `H = G + ℤ`, the sets obtained by cutting them, and
//! the checks and witness searches for good sets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::density::{analyze, certify_envelope, certified_profile, density_at, BadRadii, DensityProfile, Side, TailCertificate};
use crate::error::{Error, Result};
use crate::exact::{ensure_delta, floor, format_rational, int, max_r, min_r, rat, Rational};
use crate::interval::{Interval, IntervalSet};
use crate::region::{Region, Tail};
use crate::report::{Finding, FindingStatus, VerificationReport};

/// `G = [0, ν_1) ∪ (μ_2, ν_2) ∪ … ∪ (μ_r, 1]` and its periodization.
/// Integer points are interior to `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSet {
    /// `ν_1, μ_2, ν_2, …, μ_r`, strictly increasing in `(0, 1)`.
    cuts: Vec<Rational>,
    /// `G` as open intervals inside `(0, 1)`.
    period: IntervalSet,
    measure: Rational,
    d_min: Rational,
    d_max: Rational,
}

impl PeriodicSet {
    /// From the endpoints mod 1, `ν_1, μ_2, ν_2, …, μ_r`.
    pub fn new(cuts: Vec<Rational>) -> Result<Self> {
        if cuts.len() < 2 || cuts.len() % 2 != 0 {
            return Err(Error::InvalidGenerator(format!("expected an even number (>= 2) of endpoints, got {}", cuts.len())));
        }
        if !cuts[0].is_positive() || cuts[cuts.len() - 1] >= Rational::one() {
            return Err(Error::InvalidGenerator("endpoints must lie strictly inside (0, 1)".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGenerator("endpoints must be strictly increasing".into()));
        }
        let mut pairs = Vec::with_capacity(cuts.len() / 2 + 1);
        pairs.push(Interval::new(Rational::zero(), cuts[0].clone())?);
        for k in (1..cuts.len() - 1).step_by(2) {
            pairs.push(Interval::new(cuts[k].clone(), cuts[k + 1].clone())?);
        }
        pairs.push(Interval::new(cuts[cuts.len() - 1].clone(), Rational::one())?);
        let period = IntervalSet::from_ordered(pairs)?;
        let measure = period.total_measure();
        let (mut d_min, mut d_max) = (Rational::zero(), Rational::zero());
        for e in &cuts {
            let d = period.measure_within(&Rational::zero(), e) - e * &measure;
            d_min = min_r(&d_min, &d);
            d_max = max_r(&d_max, &d);
        }
        Ok(Self { cuts, period, measure, d_min, d_max })
    }

    /// From the generator intervals `[0, ν_1), …, (μ_r, 1]`.
    pub fn from_generator(generator: &IntervalSet) -> Result<Self> {
        let ivs = generator.intervals();
        if ivs.len() < 2 {
            return Err(Error::InvalidGenerator("at least two generator intervals are required".into()));
        }
        if !ivs[0].left().is_zero() || !ivs[ivs.len() - 1].right().is_one() {
            return Err(Error::InvalidGenerator("generator must start at 0 and end at 1".into()));
        }
        let mut cuts = Vec::new();
        for (k, iv) in ivs.iter().enumerate() {
            if k > 0 {
                cuts.push(iv.left().clone());
            }
            if k + 1 < ivs.len() {
                cuts.push(iv.right().clone());
            }
        }
        Self::new(cuts)
    }

    /// Endpoints of `H` in `[0, 1)`.
    pub fn endpoints_mod1(&self) -> &[Rational] {
        &self.cuts
    }

    /// `G` as open intervals `(0, ν_1), …, (μ_r, 1)`.
    pub fn generator(&self) -> &IntervalSet {
        &self.period
    }

    /// `λG`.
    pub fn measure(&self) -> &Rational {
        &self.measure
    }

    /// `M = max |F(x) − x·λG|` over one period.
    pub fn envelope_constant(&self) -> Rational {
        max_r(&self.d_min.abs(), &self.d_max.abs())
    }

    /// `max D − min D` for `D(x) = F(x) − x·λG`.
    pub fn oscillation(&self) -> Rational {
        &self.d_max - &self.d_min
    }

    fn split(x: &Rational) -> (Rational, Rational) {
        let k = Rational::from_integer(floor(x));
        let t = x - &k;
        (k, t)
    }

    /// `λ(H ∩ (0, x))` for `x >= 0`, extended to all `x` additively.
    pub fn cumulative(&self, x: &Rational) -> Rational {
        let (k, t) = Self::split(x);
        k * &self.measure + self.period.measure_within(&Rational::zero(), &t)
    }

    /// `D(x) = cumulative(x) − x·λG`, 1-periodic.
    pub fn discrepancy(&self, x: &Rational) -> Rational {
        self.cumulative(x) - x * &self.measure
    }

    /// `λ(H ∩ (x, y))`.
    pub fn periodic_measure(&self, x: &Rational, y: &Rational) -> Rational {
        if x >= y {
            return Rational::zero();
        }
        self.cumulative(y) - self.cumulative(x)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let (_, t) = Self::split(x);
        t.is_zero() || self.period.contains(&t)
    }

    pub fn has_left_germ(&self, x: &Rational) -> bool {
        let (_, t) = Self::split(x);
        t.is_zero() || self.period.has_left_germ(&t)
    }

    pub fn has_right_germ(&self, x: &Rational) -> bool {
        let (_, t) = Self::split(x);
        t.is_zero() || self.period.has_right_germ(&t)
    }

    /// `G = 1 − G`.
    pub fn is_mirror_symmetric(&self) -> bool {
        let n = self.cuts.len();
        (0..n).all(|i| self.cuts[i] == Rational::one() - &self.cuts[n - 1 - i])
    }

    /// `1 − G`.
    pub fn mirrored(&self) -> Self {
        Self::new(self.cuts.iter().rev().map(|e| Rational::one() - e).collect()).expect("mirror of a valid generator")
    }

    /// `H ∩ (x, y)` as a finite interval set.
    pub fn truncate(&self, x: &Rational, y: &Rational) -> IntervalSet {
        if x >= y {
            return IntervalSet::empty();
        }
        let mut out = Vec::new();
        let mut k = floor(x);
        let end = floor(y);
        while k <= end {
            let shift = Rational::from_integer(k.clone());
            for iv in self.period.intervals() {
                let l = max_r(&(iv.left() + &shift), x);
                let r = min_r(&(iv.right() + &shift), y);
                if l < r {
                    out.push(Interval::new(l, r).expect("ordered"));
                }
            }
            k += 1;
        }
        // Integer points are interior, so the copies of (μ_r, 1) and (0, ν_1) join.
        IntervalSet::normalize(out).merged_closure()
    }

    /// Envelope horizon of `H` at `delta`.
    pub fn certificate(&self, delta: &Rational) -> Result<TailCertificate> {
        certify_envelope(&Rational::zero(), &self.measure, &(self.oscillation() / int(2)), delta)
    }

    /// Search window `2W + 2` used by the witness searches.
    pub fn search_span(&self, delta: &Rational) -> Result<Rational> {
        Ok(int(2) * self.certificate(delta)?.horizon + int(2))
    }
}

impl Region for PeriodicSet {
    fn measure_within(&self, x: &Rational, y: &Rational) -> Rational {
        self.periodic_measure(x, y)
    }

    fn endpoints_within(&self, x: &Rational, y: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        if x > y {
            return out;
        }
        let mut k = floor(x);
        let end = floor(y);
        while k <= end {
            let shift = Rational::from_integer(k.clone());
            for e in &self.cuts {
                let p = e + &shift;
                if &p >= x && &p <= y {
                    out.push(p);
                }
            }
            k += 1;
        }
        out
    }

    fn is_endpoint(&self, x: &Rational) -> bool {
        let (_, t) = Self::split(x);
        self.cuts.binary_search(&t).is_ok()
    }

    fn tail(&self, _center: &Rational) -> Tail {
        Tail::Envelope { from: Rational::zero(), limit: self.measure.clone(), spread: self.oscillation() / int(2) }
    }
}

/// Exact profile on `(0, W]` and the certificate for `ω > W`.
pub fn periodic_density_profile(h: &PeriodicSet, c: &Rational, delta: &Rational) -> Result<(DensityProfile, TailCertificate)> {
    let (profile, cert) = certified_profile(h, c, delta)?;
    Ok((profile, cert.expect("periodic sets have envelope tails")))
}

/// How a cut set treats the line beyond one of its cut points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Edge {
    /// `H` continues unchanged.
    Open,
    /// Everything beyond the point belongs to the set.
    Fill(Rational),
    /// Nothing beyond the point (the point included) belongs to the set.
    Cut(Rational),
}

impl Edge {
    fn point(&self) -> Option<&Rational> {
        match self {
            Edge::Open => None,
            Edge::Fill(p) | Edge::Cut(p) => Some(p),
        }
    }
}

/// The four families of sets in the second good-set condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CutShape {
    /// `((−∞, a) ∪ H) ∖ [b, ∞)`
    FillLeft,
    /// `(H ∪ (b, ∞)) ∖ (−∞, a]`
    FillRight,
    /// `H ∖ [b, ∞)`
    CutRight,
    /// `H ∖ (−∞, a]`
    CutLeft,
}

impl CutShape {
    pub const ALL: [CutShape; 4] = [CutShape::FillLeft, CutShape::FillRight, CutShape::CutRight, CutShape::CutLeft];

    pub fn name(self) -> &'static str {
        match self {
            CutShape::FillLeft => "((-inf,a) u H) \\ [b,inf)",
            CutShape::FillRight => "(H u (b,inf)) \\ (-inf,a]",
            CutShape::CutRight => "H \\ [b,inf)",
            CutShape::CutLeft => "H \\ (-inf,a]",
        }
    }
}

/// `H` modified to the left of a point and to the right of another.
#[derive(Clone, Debug)]
pub struct CutSet<'a> {
    h: &'a PeriodicSet,
    left: Edge,
    right: Edge,
}

impl<'a> CutSet<'a> {
    pub fn new(h: &'a PeriodicSet, left: Edge, right: Edge) -> Result<Self> {
        if let (Some(a), Some(b)) = (left.point(), right.point()) {
            if a >= b {
                return Err(Error::InvalidInterval { left: a.clone(), right: b.clone() });
            }
        }
        Ok(Self { h, left, right })
    }

    /// The set of the given shape; `a = None` stands for `−∞` and is only
    /// meaningful for `FillLeft` (where it gives `CutRight`) and `CutRight`.
    pub fn shape(h: &'a PeriodicSet, shape: CutShape, a: Option<&Rational>, b: &Rational) -> Result<Self> {
        let need_a = || a.cloned().ok_or_else(|| Error::Infeasible("shape needs a finite left cut".into()));
        match shape {
            CutShape::FillLeft => match a {
                Some(a) => Self::new(h, Edge::Fill(a.clone()), Edge::Cut(b.clone())),
                None => Self::new(h, Edge::Open, Edge::Cut(b.clone())),
            },
            CutShape::FillRight => Self::new(h, Edge::Cut(need_a()?), Edge::Fill(b.clone())),
            CutShape::CutRight => Self::new(h, Edge::Open, Edge::Cut(b.clone())),
            CutShape::CutLeft => Self::new(h, Edge::Cut(need_a()?), Edge::Open),
        }
    }

    fn left_is_boundary(&self) -> bool {
        match &self.left {
            Edge::Open => false,
            Edge::Fill(a) => !self.h.contains(a),
            Edge::Cut(a) => self.h.has_right_germ(a),
        }
    }

    fn right_is_boundary(&self) -> bool {
        match &self.right {
            Edge::Open => false,
            Edge::Fill(b) => !self.h.contains(b),
            Edge::Cut(b) => self.h.has_left_germ(b),
        }
    }

    /// `(slope, constant)` of the left part of `λ(C ∩ I_ω(c))`, plus whether
    /// a `−D(c − ω)` term remains.
    fn left_part(&self, c: &Rational) -> (Rational, Rational, bool) {
        let lg = self.h.measure();
        match &self.left {
            Edge::Open => (lg.clone(), -(c * lg), true),
            Edge::Fill(a) => (Rational::one(), a - c - self.h.cumulative(a), false),
            Edge::Cut(a) => (Rational::zero(), -self.h.cumulative(a), false),
        }
    }

    fn right_part(&self, c: &Rational) -> (Rational, Rational, bool) {
        let lg = self.h.measure();
        match &self.right {
            Edge::Open => (lg.clone(), c * lg, true),
            Edge::Fill(b) => (Rational::one(), self.h.cumulative(b) + c - b, false),
            Edge::Cut(b) => (Rational::zero(), self.h.cumulative(b), false),
        }
    }
}

impl Region for CutSet<'_> {
    fn measure_within(&self, x: &Rational, y: &Rational) -> Rational {
        if x >= y {
            return Rational::zero();
        }
        let mut lo = x.clone();
        let mut hi = y.clone();
        let mut m = Rational::zero();
        if let Some(a) = self.left.point() {
            if let Edge::Fill(_) = self.left {
                let part = min_r(y, a) - x;
                if part.is_positive() {
                    m += part;
                }
            }
            lo = max_r(&lo, a);
        }
        if let Some(b) = self.right.point() {
            if let Edge::Fill(_) = self.right {
                let part = y - max_r(x, b);
                if part.is_positive() {
                    m += part;
                }
            }
            hi = min_r(&hi, b);
        }
        m + self.h.periodic_measure(&lo, &hi)
    }

    fn endpoints_within(&self, x: &Rational, y: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        if x > y {
            return out;
        }
        let a = self.left.point();
        let b = self.right.point();
        if let Some(a) = a {
            if a >= x && a <= y && self.left_is_boundary() {
                out.push(a.clone());
            }
        }
        let lo = a.map_or(x.clone(), |a| max_r(a, x));
        let hi = b.map_or(y.clone(), |b| min_r(b, y));
        out.extend(
            self.h
                .endpoints_within(&lo, &hi)
                .into_iter()
                .filter(|e| a.is_none_or(|a| e > a) && b.is_none_or(|b| e < b)),
        );
        if let Some(b) = b {
            if b >= x && b <= y && self.right_is_boundary() {
                out.push(b.clone());
            }
        }
        out
    }

    fn tail(&self, c: &Rational) -> Tail {
        let (sl, kl, dl) = self.left_part(c);
        let (sr, kr, dr) = self.right_part(c);
        let from = [self.left.point(), self.right.point()]
            .into_iter()
            .flatten()
            .map(|p| (p - c).abs())
            .fold(Rational::zero(), |acc, d| max_r(&acc, &d));
        let slope = sl + sr;
        let constant = kl + kr;
        let (lo, hi) = (&self.h.d_min, &self.h.d_max);
        match (dl, dr) {
            (false, false) => Tail::Exact { from, piece: crate::density::AffinePiece { offset: constant, slope } },
            (true, true) => Tail::Envelope { from, limit: slope / int(2), spread: self.h.oscillation() / int(2) },
            (left_open, _) => {
                // Remaining term is −D(c − ω) or +D(c + ω), D ∈ [lo, hi].
                let (e1, e2) = if left_open { (&constant - hi, &constant - lo) } else { (&constant + lo, &constant + hi) };
                let spread = max_r(&e1.abs(), &e2.abs()) / int(2);
                Tail::Envelope { from, limit: slope / int(2), spread }
            }
        }
    }
}

fn side_of(f: &Rational, delta: &Rational) -> Option<Side> {
    if f >= &(Rational::one() - delta) {
        Some(Side::B)
    } else if f <= delta {
        Some(Side::W)
    } else {
        None
    }
}

/// First good-set condition: every endpoint of `H` has a radius with density
/// outside `(δ, 1 − δ)`. Witnesses are the least such radii.
pub fn check_good_i(h: &PeriodicSet, delta: &Rational) -> Result<VerificationReport> {
    ensure_delta(delta)?;
    let cert = h.certificate(delta)?;
    let mut report = VerificationReport::new("good-set (i)");
    report.note(format!(
        "tail certified beyond radius {} (limit {}, spread {})",
        format_rational(&cert.horizon),
        format_rational(&cert.limit),
        format_rational(&cert.spread)
    ));
    for p in h.endpoints_mod1() {
        let (_, bad) = analyze(h, p, delta)?;
        match least_witness(&bad, &cert.horizon) {
            Some((omega, side)) => {
                let f = density_at(h, p, &omega)?;
                report.push(Finding::new("endpoint", FindingStatus::Witness(side)).at(p).radius(&omega).value("density", f));
            }
            None => report.push(Finding::new("endpoint", FindingStatus::Violation).at(p)),
        }
    }
    Ok(report)
}

fn least_witness(bad: &BadRadii, horizon: &Rational) -> Option<(Rational, Side)> {
    bad.least().or_else(|| bad.witness_upto(&(horizon + int(1))))
}

/// A cut `(a, b)` of the line; `a = None` means `a = −∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cut {
    pub a: Option<Rational>,
    pub b: Rational,
}

/// Structured grid of cuts: all pairs from the endpoints of `H` in `[0, 3)`
/// shifted by `0`, `±1/7` and `±1/3`, plus `a = −∞` for every point.
pub fn default_cut_grid(h: &PeriodicSet) -> Vec<Cut> {
    let mut base = h.endpoints_within(&Rational::zero(), &int(3));
    base.retain(|e| e < &int(3));
    let offsets = [Rational::zero(), rat(1, 7), rat(-1, 7), rat(1, 3), rat(-1, 3)];
    let mut pts: Vec<Rational> = base.iter().flat_map(|e| offsets.iter().map(move |o| e + o)).collect();
    pts.sort();
    pts.dedup();
    let mut cuts = Vec::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            cuts.push(Cut { a: Some(a.clone()), b: b.clone() });
        }
    }
    for b in &pts {
        cuts.push(Cut { a: None, b: b.clone() });
    }
    cuts
}

enum ShapeVerdict {
    Qualifies(Rational),
    NoneQualifies(usize),
    Undecided(String),
}

fn shape_verdict(c: &CutSet<'_>, shape: CutShape, a: Option<&Rational>, b: &Rational, span: &Rational, delta: &Rational) -> ShapeVerdict {
    let mut pts = match (shape, a) {
        (CutShape::CutLeft, Some(a)) => c.endpoints_within(a, &(a + span)),
        (CutShape::FillLeft | CutShape::CutRight, None) | (CutShape::CutRight, _) => c.endpoints_within(&(b - span), b),
        (_, Some(a)) => c.endpoints_within(a, b),
        (_, None) => c.endpoints_within(&(b - span), b),
    };
    // Nearest the active cut first.
    if matches!(shape, CutShape::FillLeft | CutShape::CutRight) {
        pts.reverse();
    }
    let n = pts.len();
    for p in pts {
        match analyze(c, &p, delta) {
            Ok((_, bad)) if bad.is_empty() => return ShapeVerdict::Qualifies(p),
            Ok(_) => {}
            Err(e) => return ShapeVerdict::Undecided(format!("{e}")),
        }
    }
    ShapeVerdict::NoneQualifies(n)
}

/// Bounded falsifier for the second good-set condition: for every cut and
/// each cut-set shape, some endpoint must keep its density inside
/// `(δ, 1 − δ)` at every radius. Half-infinite shapes are searched within
/// `2W + 2` of the cut.
pub fn check_good_ii_bounded(h: &PeriodicSet, delta: &Rational, cuts: &[Cut]) -> Result<VerificationReport> {
    ensure_delta(delta)?;
    let span = h.search_span(delta)?;
    let mut report = VerificationReport::new("good-set (ii), bounded");
    report.note(format!("{} cuts, half-infinite search span {}", cuts.len(), format_rational(&span)));
    report.note("no violation found is bounded evidence, not a proof");
    let mut one_sided: BTreeMap<(CutShape, Rational), bool> = BTreeMap::new();
    let mut checked = 0usize;
    for cut in cuts {
        if let Some(a) = &cut.a {
            if a >= &cut.b {
                return Err(Error::InvalidInterval { left: a.clone(), right: cut.b.clone() });
            }
        }
        let shapes: &[CutShape] = if cut.a.is_some() { &CutShape::ALL } else { &[CutShape::CutRight] };
        for &shape in shapes {
            let key = match shape {
                CutShape::CutRight => Some((shape, cut.b.clone())),
                CutShape::CutLeft => cut.a.clone().map(|a| (shape, a)),
                _ => None,
            };
            if let Some(k) = &key {
                if one_sided.contains_key(k) {
                    continue;
                }
            }
            let set = CutSet::shape(h, shape, cut.a.as_ref(), &cut.b)?;
            checked += 1;
            let verdict = shape_verdict(&set, shape, cut.a.as_ref(), &cut.b, &span, delta);
            let mut finding = match &verdict {
                ShapeVerdict::Qualifies(p) => Finding::new(shape.name(), FindingStatus::Pass).at(p),
                ShapeVerdict::NoneQualifies(n) => {
                    Finding::new(shape.name(), FindingStatus::Violation).value("endpoints_tried", int(*n as i64))
                }
                ShapeVerdict::Undecided(why) => {
                    report.note(format!("cut left undecided: {why}"));
                    Finding::new(shape.name(), FindingStatus::Unchecked)
                }
            };
            if let Some(a) = &cut.a {
                finding = finding.value("a", a.clone());
            }
            finding = finding.value("b", cut.b.clone());
            if let Some(k) = key {
                one_sided.insert(k, true);
            }
            // Passing cuts are summarized; only failures are itemized.
            if !matches!(verdict, ShapeVerdict::Qualifies(_)) {
                report.push(finding);
            }
        }
    }
    report.push(Finding::new("cut sets checked", FindingStatus::Pass).value("count", int(checked as i64)));
    Ok(report)
}

/// `I_α(a)` together with the side reached at radius `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenteredInterval {
    pub center: Rational,
    pub radius: Rational,
    pub side: Side,
}

impl CenteredInterval {
    pub fn interval(&self) -> Interval {
        Interval::centered(&self.center, &self.radius).expect("positive radius")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Center at or left of the query point.
    Left,
    /// Center at or right of the query point.
    Right,
}

/// Least radius with density `>= 1 − δ` at each endpoint of `h` in a
/// window, computed once and reused by the searches.
pub struct UpperRadii<'a, R: Region + ?Sized> {
    set: &'a R,
    delta: Rational,
    cache: BTreeMap<Rational, Option<Rational>>,
}

impl<'a, R: Region + ?Sized> UpperRadii<'a, R> {
    pub fn new(set: &'a R, delta: &Rational) -> Self {
        Self { set, delta: delta.clone(), cache: BTreeMap::new() }
    }

    /// `γ` with `λ(S | I_γ(a)) ⊵ 1 − δ`, if any.
    pub fn at(&mut self, a: &Rational) -> Result<Option<Rational>> {
        if let Some(v) = self.cache.get(a) {
            return Ok(v.clone());
        }
        let v = analyze(self.set, a, &self.delta)?.1.least_of(Side::B);
        self.cache.insert(a.clone(), v.clone());
        Ok(v)
    }
}

/// An interval `I_α(a)` with `λ(H | I_α(a)) ⊵ 1 − δ` and `s ∈ I_α(a)`,
/// centered at an endpoint `a <= s` (or `a >= s` for `Direction::Right`).
pub fn find_upper_interval(h: &PeriodicSet, s: &Rational, delta: &Rational, dir: Direction) -> Result<CenteredInterval> {
    ensure_delta(delta)?;
    if h.contains(s) && !h.is_endpoint(s) {
        return Err(Error::InteriorPoint(s.clone()));
    }
    let mut radii = UpperRadii::new(h, delta);
    let span = h.search_span(delta)?;
    for window in [span.clone(), int(2) * &span] {
        let mut centers = match dir {
            Direction::Left => h.endpoints_within(&(s - &window), s),
            Direction::Right => h.endpoints_within(s, &(s + &window)),
        };
        if dir == Direction::Left {
            centers.reverse();
        }
        for a in centers {
            if let Some(alpha) = radii.at(&a)? {
                if (s - &a).abs() < alpha {
                    return Ok(CenteredInterval { center: a, radius: alpha, side: Side::B });
                }
            }
        }
    }
    Err(Error::NotFound(format!("no upper interval reaches {}", format_rational(s))))
}

/// Lemma-style interval between two endpoints `p <= q`: all smaller radii
/// keep the density inside `(δ, 1 − δ)`, and either the density reaches
/// `1 − δ` with `p` inside, or drops to `δ` with `q` inside.
pub fn find_between_interval(h: &PeriodicSet, p: &Rational, q: &Rational, delta: &Rational) -> Result<CenteredInterval> {
    ensure_delta(delta)?;
    for x in [p, q] {
        if !h.is_endpoint(x) {
            return Err(Error::NotAnEndpoint(x.clone()));
        }
    }
    if p > q {
        return Err(Error::InvalidInterval { left: p.clone(), right: q.clone() });
    }
    for a in h.endpoints_within(p, q) {
        let (_, bad) = analyze(h, &a, delta)?;
        let Some((alpha, side)) = bad.least() else { continue };
        let hit = match side {
            Side::B => (p - &a).abs() < alpha,
            Side::W => (q - &a).abs() < alpha,
        };
        if hit {
            return Ok(CenteredInterval { center: a, radius: alpha, side });
        }
    }
    Err(Error::NotFound(format!("no interval between {} and {}", format_rational(p), format_rational(q))))
}

/// `[lo, hi]` lies in the union of the open intervals.
pub fn covers_closed(intervals: &[Interval], lo: &Rational, hi: &Rational) -> bool {
    let mut reach = lo.clone();
    loop {
        let best = intervals
            .iter()
            .filter(|iv| iv.left() < &reach && iv.right() > &reach)
            .map(|iv| iv.right().clone())
            .max();
        match best {
            None => return false,
            Some(r) if &r > hi => return true,
            Some(r) => reach = r,
        }
    }
}

/// Intervals of density `>= 1 − δ` covering `[0, 1]`: one upper interval
/// per gap of `H`, and the components of `H` themselves.
pub fn cover_period(h: &PeriodicSet, delta: &Rational) -> Result<Vec<Interval>> {
    ensure_delta(delta)?;
    let cuts = h.endpoints_mod1();
    let n = cuts.len();
    let mut out = Vec::new();
    out.push(Interval::new(&cuts[n - 1] - int(1), cuts[0].clone())?);
    for k in (1..n - 1).step_by(2) {
        out.push(Interval::new(cuts[k].clone(), cuts[k + 1].clone())?);
    }
    out.push(Interval::new(cuts[n - 1].clone(), &cuts[0] + int(1))?);
    for k in (0..n).step_by(2) {
        let (x, s) = (&cuts[k], &cuts[k + 1]);
        let w = find_upper_interval(h, s, delta, Direction::Left)?;
        let iv = w.interval();
        if !iv.contains(x) {
            return Err(Error::NotFound(format!("gap ({}, {}) is not covered", format_rational(x), format_rational(s))));
        }
        out.push(iv);
    }
    let upper = Rational::one() - delta;
    for iv in &out {
        if h.periodic_measure(iv.left(), iv.right()) / iv.length() < upper {
            return Err(Error::Postcondition("cover interval below 1 - delta".into()));
        }
    }
    if !covers_closed(&out, &Rational::zero(), &Rational::one()) {
        return Err(Error::Postcondition("cover misses part of [0, 1]".into()));
    }
    Ok(out)
}

/// Classifies a density value against the thresholds.
pub fn classify(f: &Rational, delta: &Rational) -> Option<Side> {
    side_of(f, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter_set() -> PeriodicSet {
        // G = [0, 1/4) ∪ (3/4, 1]
        PeriodicSet::new(alloc::vec![rat(1, 4), rat(3, 4)]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PeriodicSet::new(alloc::vec![rat(1, 4)]).is_err());
        assert!(PeriodicSet::new(alloc::vec![rat(3, 4), rat(1, 4)]).is_err());
        assert!(PeriodicSet::new(alloc::vec![Rational::zero(), rat(1, 4)]).is_err());
        let g = IntervalSet::from_pairs([(Rational::zero(), Rational::one())]).unwrap();
        assert!(PeriodicSet::from_generator(&g).is_err());
    }

    #[test]
    fn measures() {
        let h = quarter_set();
        assert_eq!(h.measure(), &rat(1, 2));
        assert_eq!(h.periodic_measure(&Rational::zero(), &int(2)), int(1));
        assert_eq!(h.periodic_measure(&rat(-1, 8), &rat(1, 8)), rat(1, 4));
        assert_eq!(h.periodic_measure(&rat(1, 8), &rat(7, 8)), rat(1, 4));
        assert!(h.contains(&int(-3)));
        assert!(h.is_mirror_symmetric());
        assert_eq!(h.envelope_constant(), rat(1, 8));
    }

    #[test]
    fn generator_round_trip() {
        let h = quarter_set();
        let again = PeriodicSet::from_generator(h.generator()).unwrap();
        assert_eq!(again, h);
    }

    #[test]
    fn truncation_joins_across_integers() {
        let h = quarter_set();
        let t = h.truncate(&rat(-1, 2), &rat(3, 2));
        assert_eq!(t, IntervalSet::from_pairs([(rat(-1, 4), rat(1, 4)), (rat(3, 4), rat(5, 4))]).unwrap());
    }

    #[test]
    fn cut_set_boundaries() {
        let h = quarter_set();
        // Fill left of 1/2 (a gap point): 1/2 is an edge of the filled part.
        let c = CutSet::new(&h, Edge::Fill(rat(1, 2)), Edge::Cut(int(2))).unwrap();
        let e = c.endpoints_within(&int(-1), &int(3));
        assert_eq!(e, [rat(1, 2), rat(3, 4), rat(5, 4), rat(7, 4), int(2)]);
        // Cutting at 2 (interior of H) leaves 2 as an endpoint.
        let c = CutSet::new(&h, Edge::Cut(rat(1, 2)), Edge::Cut(int(2))).unwrap();
        assert_eq!(c.endpoints_within(&int(-1), &int(3)), [rat(3, 4), rat(5, 4), rat(7, 4), int(2)]);
        assert_eq!(c.measure_within(&int(-5), &int(5)), rat(3, 4));
    }

    #[test]
    fn cut_set_tails_are_sound() {
        let h = PeriodicSet::new(alloc::vec![rat(1, 5), rat(1, 3), rat(1, 2), rat(4, 5)]).unwrap();
        for (left, right) in [
            (Edge::Open, Edge::Cut(rat(7, 3))),
            (Edge::Cut(rat(-2, 3)), Edge::Open),
            (Edge::Fill(rat(1, 4)), Edge::Cut(int(2))),
            (Edge::Cut(rat(1, 4)), Edge::Fill(int(2))),
        ] {
            let c = CutSet::new(&h, left, right).unwrap();
            for center in [rat(1, 5), rat(3, 2), int(-1)] {
                let tail = c.tail(&center);
                let from = tail.from().clone();
                for k in 1..40 {
                    let omega = &from + rat(k, 7);
                    let f = density_at(&c, &center, &omega).unwrap();
                    match &tail {
                        Tail::Exact { piece, .. } => assert_eq!(piece.density(&omega), f),
                        Tail::Envelope { limit, spread, .. } => assert!((f - limit).abs() <= spread / &omega),
                    }
                }
            }
        }
    }

    #[test]
    fn covering_sweep() {
        let ivs = [Interval::new(rat(-1, 2), rat(1, 2)).unwrap(), Interval::new(rat(1, 2), rat(3, 2)).unwrap()];
        assert!(!covers_closed(&ivs, &Rational::zero(), &Rational::one()));
        let ivs = [Interval::new(rat(-1, 2), rat(1, 2)).unwrap(), Interval::new(rat(1, 3), rat(3, 2)).unwrap()];
        assert!(covers_closed(&ivs, &Rational::zero(), &Rational::one()));
    }
}

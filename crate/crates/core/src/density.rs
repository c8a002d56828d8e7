//! Exact analysis of `f(ω) = λ(S ∩ I_ω(c)) / 2ω`.
//!
//! Between consecutive critical radii the numerator is affine in `ω`, so
//! `f` is monotone there and every threshold question reduces to a linear
//! inequality per piece.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ensure_delta, ensure_positive, int, max_r, min_r, Rational};
use crate::region::{Region, Tail};

/// Numerator `offset + slope·ω` of the density on one piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePiece {
    pub offset: Rational,
    pub slope: Rational,
}

impl AffinePiece {
    pub fn numerator(&self, omega: &Rational) -> Rational {
        &self.offset + &self.slope * omega
    }

    pub fn density(&self, omega: &Rational) -> Rational {
        self.numerator(omega) / (int(2) * omega)
    }

    /// Direction of `f` on the piece: the sign of `-offset`.
    pub fn trend(&self) -> Ordering {
        Rational::zero().cmp(&self.offset)
    }
}

/// Which threshold a radius violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Density `>= 1 − δ`.
    B,
    /// Density `<= δ`.
    W,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::B => "B",
            Side::W => "W",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileTail {
    /// Valid on `[horizon, ∞)`.
    Exact(AffinePiece),
    /// Only the envelope `|f − limit| <= spread/ω` is known past the horizon.
    Envelope { limit: Rational, spread: Rational },
}

/// Piecewise description of the density at a fixed center.
///
/// Piece `k` covers `(breakpoints[k-1], breakpoints[k]]` with
/// `breakpoints[-1] = 0`; the tail covers everything past the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityProfile {
    center: Rational,
    breakpoints: Vec<Rational>,
    pieces: Vec<AffinePiece>,
    tail: ProfileTail,
}

impl DensityProfile {
    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn tail(&self) -> &ProfileTail {
        &self.tail
    }

    /// Largest radius covered by the explicit pieces.
    pub fn horizon(&self) -> Rational {
        self.breakpoints.last().cloned().unwrap_or_default()
    }

    fn piece_at(&self, omega: &Rational) -> Option<&AffinePiece> {
        let k = self.breakpoints.partition_point(|b| b < omega);
        match self.pieces.get(k) {
            Some(p) => Some(p),
            None => match &self.tail {
                ProfileTail::Exact(p) => Some(p),
                ProfileTail::Envelope { .. } => None,
            },
        }
    }

    /// `λ(S ∩ I_ω(c))`, or `None` past the horizon of an envelope tail.
    pub fn numerator(&self, omega: &Rational) -> Option<Rational> {
        self.piece_at(omega).map(|p| p.numerator(omega))
    }

    pub fn density(&self, omega: &Rational) -> Option<Rational> {
        self.piece_at(omega).map(|p| p.density(omega))
    }

    /// Density as `ω → 0+`.
    pub fn limit_at_zero(&self) -> Rational {
        let p = self.pieces.first().or(match &self.tail {
            ProfileTail::Exact(p) => Some(p),
            ProfileTail::Envelope { .. } => None,
        });
        p.map(|p| &p.slope / int(2)).unwrap_or_default()
    }

    /// Density as `ω → ∞`: `λ(body)`-free `slope/2` for exact tails, the
    /// envelope limit otherwise.
    pub fn limit_at_infinity(&self) -> Rational {
        match &self.tail {
            ProfileTail::Exact(p) => &p.slope / int(2),
            ProfileTail::Envelope { limit, .. } => limit.clone(),
        }
    }

    /// Each explicit piece with its radius range `(lo, hi]`.
    fn spans(&self) -> impl Iterator<Item = (Rational, Rational, &AffinePiece)> + '_ {
        self.pieces.iter().enumerate().map(move |(k, p)| {
            let lo = if k == 0 { Rational::zero() } else { self.breakpoints[k - 1].clone() };
            (lo, self.breakpoints[k].clone(), p)
        })
    }

    /// `sup f` over `(0, gamma]`; `gamma` must not exceed the horizon of an
    /// envelope profile.
    pub fn max_density_upto(&self, gamma: &Rational) -> Option<Rational> {
        let mut best = self.density(gamma)?;
        if let Some(p) = self.pieces.first().or(match &self.tail {
            ProfileTail::Exact(p) => Some(p),
            ProfileTail::Envelope { .. } => None,
        }) {
            best = max_r(&best, &(&p.slope / int(2)));
        }
        for b in self.breakpoints.iter().take_while(|b| *b < gamma) {
            best = max_r(&best, &self.density(b)?);
        }
        Some(best)
    }

    /// `inf f` over `(0, gamma]`.
    pub fn min_density_upto(&self, gamma: &Rational) -> Option<Rational> {
        let mut best = self.density(gamma)?;
        if let Some(p) = self.pieces.first().or(match &self.tail {
            ProfileTail::Exact(p) => Some(p),
            ProfileTail::Envelope { .. } => None,
        }) {
            best = min_r(&best, &(&p.slope / int(2)));
        }
        for b in self.breakpoints.iter().take_while(|b| *b < gamma) {
            best = min_r(&best, &self.density(b)?);
        }
        Some(best)
    }
}

/// `λ(S | I_ω(c))` computed directly.
pub fn density_at<R: Region + ?Sized>(set: &R, c: &Rational, omega: &Rational) -> Result<Rational> {
    ensure_positive("radius", omega)?;
    Ok(set.measure_within(&(c - omega), &(c + omega)) / (int(2) * omega))
}

/// Exact profile up to the set's own tail radius. For sets whose tail is
/// only an envelope, pieces reach the tail radius and nothing more; see
/// [`density_profile_to`] and [`certified_profile`].
pub fn density_profile<R: Region + ?Sized>(set: &R, c: &Rational) -> DensityProfile {
    density_profile_to(set, c, &Rational::zero())
}

/// Exact profile whose explicit pieces reach at least `horizon`.
pub fn density_profile_to<R: Region + ?Sized>(set: &R, c: &Rational, horizon: &Rational) -> DensityProfile {
    let tail = set.tail(c);
    let (reach, profile_tail) = match &tail {
        Tail::Exact { from, piece } => (max_r(from, horizon), ProfileTail::Exact(piece.clone())),
        Tail::Envelope { from, limit, spread } => (
            max_r(from, horizon),
            ProfileTail::Envelope { limit: limit.clone(), spread: spread.clone() },
        ),
    };
    let mut radii: Vec<Rational> = set
        .endpoints_within(&(c - &reach), &(c + &reach))
        .into_iter()
        .map(|e| (e - c).abs())
        .filter(|r| r.is_positive())
        .collect();
    if reach.is_positive() {
        radii.push(reach.clone());
    }
    radii.sort();
    radii.dedup();
    let mut pieces = Vec::with_capacity(radii.len());
    let (mut prev_r, mut prev_n) = (Rational::zero(), Rational::zero());
    for r in &radii {
        let n = set.measure_within(&(c - r), &(c + r));
        let slope = (&n - &prev_n) / (r - &prev_r);
        let offset = &n - &slope * r;
        pieces.push(AffinePiece { offset, slope });
        prev_r = r.clone();
        prev_n = n;
    }
    DensityProfile { center: c.clone(), breakpoints: radii, pieces, tail: profile_tail }
}

/// Where the density settles for large radii, relative to `(δ, 1 − δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailVerdict {
    Inside,
    Outside(Side),
}

/// Radius past which an envelope tail provably stays on one side, and that
/// side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCertificate {
    pub horizon: Rational,
    pub limit: Rational,
    pub spread: Rational,
    pub verdict: TailVerdict,
}

/// Certifies an envelope tail: for `ω > horizon`, `|f − limit| <= spread/ω`
/// is strictly smaller than the distance from `limit` to the nearer
/// threshold.
pub fn certify_envelope(from: &Rational, limit: &Rational, spread: &Rational, delta: &Rational) -> Result<TailCertificate> {
    ensure_delta(delta)?;
    let upper = Rational::one() - delta;
    let (gap, verdict) = if limit > delta && limit < &upper {
        (min_r(&(limit - delta), &(&upper - limit)), TailVerdict::Inside)
    } else if limit > &upper {
        (limit - &upper, TailVerdict::Outside(Side::B))
    } else if limit < delta {
        (delta - limit, TailVerdict::Outside(Side::W))
    } else {
        return Err(Error::UndecidableTail(limit.clone()));
    };
    let horizon = max_r(&max_r(from, &(spread / gap)), &Rational::one());
    Ok(TailCertificate { horizon, limit: limit.clone(), spread: spread.clone(), verdict })
}

/// Profile long enough for every threshold question at `delta` to be
/// decided, plus the tail certificate when the tail is an envelope.
pub fn certified_profile<R: Region + ?Sized>(
    set: &R,
    c: &Rational,
    delta: &Rational,
) -> Result<(DensityProfile, Option<TailCertificate>)> {
    ensure_delta(delta)?;
    match set.tail(c) {
        Tail::Exact { .. } => Ok((density_profile(set, c), None)),
        Tail::Envelope { from, limit, spread } => {
            let cert = certify_envelope(&from, &limit, &spread, delta)?;
            Ok((density_profile_to(set, c, &cert.horizon), Some(cert)))
        }
    }
}

/// A maximal run of radii on which the density is outside `(δ, 1 − δ)`.
/// Runs are closed except possibly at 0 (never a radius).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadRun {
    pub lo: Rational,
    pub lo_open: bool,
    /// `None` when the run is unbounded.
    pub hi: Option<Rational>,
    pub side: Side,
}

impl BadRun {
    pub fn contains(&self, omega: &Rational) -> bool {
        let above = if self.lo_open { omega > &self.lo } else { omega >= &self.lo };
        above && self.hi.as_ref().is_none_or(|h| omega <= h)
    }
}

/// All radii `ω > 0` with `f(ω) ∉ (δ, 1 − δ)`, as disjoint ordered runs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BadRadii {
    runs: Vec<BadRun>,
}

impl BadRadii {
    pub fn runs(&self) -> &[BadRun] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// `ω(c)`: the greatest bad radius, with its side.
    pub fn greatest(&self) -> Result<Option<(Rational, Side)>> {
        match self.runs.last() {
            None => Ok(None),
            Some(BadRun { hi: None, .. }) => Err(Error::UnboundedBadRadii),
            Some(BadRun { hi: Some(h), side, .. }) => Ok(Some((h.clone(), *side))),
        }
    }

    /// The least bad radius, if the bad set has a minimum.
    pub fn least(&self) -> Option<(Rational, Side)> {
        let r = self.runs.first()?;
        (!r.lo_open).then(|| (r.lo.clone(), r.side))
    }

    /// The least radius with density `>= 1 − δ` (for `Side::B`) or `<= δ`.
    pub fn least_of(&self, side: Side) -> Option<Rational> {
        let r = self.runs.iter().find(|r| r.side == side)?;
        (!r.lo_open).then(|| r.lo.clone())
    }

    pub fn side_at(&self, omega: &Rational) -> Option<Side> {
        self.runs.iter().find(|r| r.contains(omega)).map(|r| r.side)
    }

    /// Some bad radius in `(0, max]`, preferring the smallest attained one.
    pub fn witness_upto(&self, max: &Rational) -> Option<(Rational, Side)> {
        let r = self.runs.first()?;
        if !r.lo_open {
            return (r.lo <= *max).then(|| (r.lo.clone(), r.side));
        }
        let top = match &r.hi {
            Some(h) => min_r(h, max),
            None => max.clone(),
        };
        top.is_positive().then_some((top, r.side))
    }

    fn push(&mut self, run: BadRun) {
        if let Some(last) = self.runs.last_mut() {
            if last.side == run.side && last.hi.as_ref() == Some(&run.lo) {
                last.hi = run.hi;
                return;
            }
        }
        self.runs.push(run);
    }
}

/// `{ω ∈ [lo, hi] : a >= k·ω}` as `(lo', hi')`, `hi = None` meaning `∞`.
fn solve_ge(a: &Rational, k: &Rational, lo: &Rational, hi: Option<&Rational>) -> Option<(Rational, Option<Rational>)> {
    let (l, h) = match k.cmp(&Rational::zero()) {
        Ordering::Greater => {
            let t = a / k;
            (lo.clone(), Some(hi.map_or(t.clone(), |h| min_r(h, &t))))
        }
        Ordering::Less => (max_r(lo, &(a / k)), hi.cloned()),
        Ordering::Equal => {
            if a.is_negative() {
                return None;
            }
            (lo.clone(), hi.cloned())
        }
    };
    match &h {
        Some(h) if *h < l => None,
        Some(h) if *h == l && l.is_zero() => None,
        _ => Some((l, h)),
    }
}

fn piece_runs(p: &AffinePiece, lo: &Rational, hi: Option<&Rational>, delta: &Rational, out: &mut Vec<BadRun>) {
    let two = int(2);
    // B: a + bω >= 2(1−δ)ω  ⇔  a >= (2(1−δ) − b)ω
    let kb = &two * (Rational::one() - delta) - &p.slope;
    // W: a + bω <= 2δω  ⇔  −a >= (b − 2δ)ω
    let kw = &p.slope - &two * delta;
    let mut found: Vec<BadRun> = Vec::new();
    for (side, a, k) in [(Side::B, p.offset.clone(), kb), (Side::W, -p.offset.clone(), kw)] {
        if let Some((l, h)) = solve_ge(&a, &k, lo, hi) {
            found.push(BadRun { lo_open: l.is_zero(), lo: l, hi: h, side });
        }
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    out.extend(found);
}

/// Every bad radius of a profile. Envelope tails are decided by their
/// certificate, which requires the profile to reach the certified horizon.
pub fn bad_radii(profile: &DensityProfile, delta: &Rational) -> Result<BadRadii> {
    ensure_delta(delta)?;
    let mut raw = Vec::new();
    for (lo, hi, p) in profile.spans() {
        piece_runs(p, &lo, Some(&hi), delta, &mut raw);
    }
    let horizon = profile.horizon();
    let mut tail_run = None;
    match &profile.tail {
        ProfileTail::Exact(p) => piece_runs(p, &horizon, None, delta, &mut raw),
        ProfileTail::Envelope { limit, spread } => {
            let cert = certify_envelope(&Rational::zero(), limit, spread, delta)?;
            if cert.horizon > horizon {
                return Err(Error::ShortHorizon(horizon));
            }
            if let TailVerdict::Outside(side) = cert.verdict {
                tail_run = Some(BadRun { lo: horizon.clone(), lo_open: true, hi: None, side });
            }
        }
    }
    let mut out = BadRadii::default();
    for r in raw.into_iter().chain(tail_run) {
        out.push(r);
    }
    Ok(out)
}

/// Bad radii restricted to the explicit pieces within `(0, upto]`.
fn bad_radii_upto(profile: &DensityProfile, delta: &Rational, upto: &Rational) -> BadRadii {
    let mut raw = Vec::new();
    for (lo, hi, p) in profile.spans() {
        if &lo >= upto {
            break;
        }
        piece_runs(p, &lo, Some(&min_r(&hi, upto)), delta, &mut raw);
    }
    if let ProfileTail::Exact(p) = &profile.tail {
        let h = profile.horizon();
        if &h < upto {
            piece_runs(p, &h, Some(upto), delta, &mut raw);
        }
    }
    let mut out = BadRadii::default();
    for r in raw {
        out.push(r);
    }
    out
}

/// Profile and bad radii at `c`, with the tail certified when needed.
pub fn analyze<R: Region + ?Sized>(set: &R, c: &Rational, delta: &Rational) -> Result<(DensityProfile, BadRadii)> {
    let (profile, _) = certified_profile(set, c, delta)?;
    let bad = bad_radii(&profile, delta)?;
    Ok((profile, bad))
}

/// Greatest radius with density outside `(δ, 1 − δ)` at the endpoint `c`.
pub fn greatest_bad_radius<R: Region + ?Sized>(set: &R, c: &Rational, delta: &Rational) -> Result<Option<(Rational, Side)>> {
    if !set.is_endpoint(c) {
        return Err(Error::NotAnEndpoint(c.clone()));
    }
    analyze(set, c, delta)?.1.greatest()
}

/// `ω(c)` for a configuration.
pub fn max_bad_radius(
    config: &crate::interval::Configuration,
    c: &Rational,
    delta: &Rational,
) -> Result<Option<(Rational, Side)>> {
    greatest_bad_radius(config, c, delta)
}

/// Least radius with density `>= 1 − δ`, if one exists.
pub fn least_upper_radius<R: Region + ?Sized>(set: &R, c: &Rational, delta: &Rational) -> Result<Option<Rational>> {
    Ok(analyze(set, c, delta)?.1.least_of(Side::B))
}

/// `λ(S | I_γ(c)) ⊵ 1 − δ`: density at least `1 − δ` at `γ` and below it
/// at every smaller radius.
pub fn triangle_check<R: Region + ?Sized>(set: &R, c: &Rational, gamma: &Rational, delta: &Rational) -> Result<bool> {
    ensure_positive("gamma", gamma)?;
    ensure_delta(delta)?;
    let profile = density_profile_to(set, c, gamma);
    let bad = bad_radii_upto(&profile, delta, gamma);
    Ok(bad.least_of(Side::B).as_ref() == Some(gamma))
}

/// Where an extremum is reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attainment {
    /// Constant on the first piece, so attained at every small radius.
    NearZero,
    At(Rational),
    /// Approached as `ω → ∞`, never attained.
    Limit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremum {
    pub value: Rational,
    pub at: Attainment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extrema {
    pub inf: Extremum,
    pub sup: Extremum,
    /// Set when the profile has an envelope tail: extrema cover `(0, h]` only.
    pub truncated_at: Option<Rational>,
}

impl Extrema {
    /// Both extrema strictly inside `(δ, 1 − δ)`.
    pub fn strictly_inside(&self, delta: &Rational) -> bool {
        self.inf.value > *delta && self.sup.value < Rational::one() - delta
    }
}

/// Infimum and supremum of `f` from the breakpoint values and the limits.
pub fn profile_extrema(profile: &DensityProfile) -> Extrema {
    let mut cands: Vec<(Rational, Attainment)> = Vec::new();
    cands.push((profile.limit_at_zero(), Attainment::NearZero));
    for b in &profile.breakpoints {
        cands.push((profile.density(b).expect("breakpoint inside profile"), Attainment::At(b.clone())));
    }
    let truncated_at = match &profile.tail {
        ProfileTail::Exact(p) => {
            if !p.offset.is_zero() {
                cands.push((&p.slope / int(2), Attainment::Limit));
            }
            None
        }
        ProfileTail::Envelope { .. } => Some(profile.horizon()),
    };
    let pick = |better: fn(&Rational, &Rational) -> bool| {
        let mut best = cands[0].clone();
        for c in &cands[1..] {
            if better(&c.0, &best.0) {
                best = c.clone();
            }
        }
        Extremum { value: best.0, at: best.1 }
    };
    Extrema { sup: pick(|a, b| a > b), inf: pick(|a, b| a < b), truncated_at }
}

/// Extrema of `f` over all radii (over `(0, horizon]` for envelope tails).
pub fn density_extrema<R: Region + ?Sized>(set: &R, c: &Rational) -> Extrema {
    profile_extrema(&density_profile(set, c))
}

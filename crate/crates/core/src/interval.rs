//! Finite unions of open intervals and configurations.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ensure_positive, max_r, min_r, Rational};

/// The open interval `{x : left < x < right}`; empty when `left == right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    left: Rational,
    right: Rational,
}

impl Interval {
    pub fn new(left: Rational, right: Rational) -> Result<Self> {
        if left > right {
            return Err(Error::InvalidInterval { left, right });
        }
        Ok(Self { left, right })
    }

    /// `I_radius(center) = (center - radius, center + radius)`.
    pub fn centered(center: &Rational, radius: &Rational) -> Result<Self> {
        ensure_positive("radius", radius)?;
        Ok(Self { left: center - radius, right: center + radius })
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn is_empty(&self) -> bool {
        self.left == self.right
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.left < x && x < &self.right
    }

    /// Closed-interval containment `[x, y] ⊂ (left, right)`.
    pub fn contains_closed(&self, x: &Rational, y: &Rational) -> bool {
        &self.left < x && y < &self.right
    }

    /// Open-interval containment `(x, y) ⊂ (left, right)`.
    pub fn contains_open(&self, x: &Rational, y: &Rational) -> bool {
        &self.left <= x && y <= &self.right
    }

    pub fn center(&self) -> Rational {
        (&self.left + &self.right) / Rational::from_integer(2.into())
    }

    pub fn radius(&self) -> Rational {
        self.length() / Rational::from_integer(2.into())
    }

    pub fn affine(&self, scale: &Rational, shift: &Rational) -> Self {
        Self { left: scale * &self.left + shift, right: scale * &self.right + shift }
    }
}

/// Finite union of nonempty open intervals in increasing order with
/// `right_i <= left_{i+1}`. Abutting intervals stay separate so the shared
/// point remains an endpoint (an isolated point of the complement).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
    /// `prefix[i]` is the total length of `intervals[..i]`.
    prefix: Vec<Rational>,
}

impl Default for IntervalSet {
    fn default() -> Self {
        Self::empty()
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self { intervals: Vec::new(), prefix: alloc::vec![Rational::zero()] }
    }

    /// Drops empty intervals, sorts, and merges intervals that overlap.
    /// Intervals that merely touch are kept apart.
    pub fn normalize(raw: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = raw.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                Some(last) if iv.left < last.right => {
                    if iv.right > last.right {
                        last.right = iv.right;
                    }
                }
                _ => out.push(iv),
            }
        }
        Self::from_ordered_unchecked(out)
    }

    /// Accepts intervals already in canonical order, rejecting anything else.
    pub fn from_ordered(intervals: Vec<Interval>) -> Result<Self> {
        for (k, iv) in intervals.iter().enumerate() {
            if iv.is_empty() {
                return Err(Error::InvalidConfiguration(format!("interval {k} is empty")));
            }
            if k > 0 && intervals[k - 1].right > iv.left {
                return Err(Error::InvalidConfiguration(format!("interval {k} overlaps or precedes interval {}", k - 1)));
            }
        }
        Ok(Self::from_ordered_unchecked(intervals))
    }

    /// Convenience constructor from `(left, right)` pairs, normalized.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let ivs: Result<Vec<Interval>> = pairs.into_iter().map(|(l, r)| Interval::new(l, r)).collect();
        Ok(Self::normalize(ivs?))
    }

    fn from_ordered_unchecked(intervals: Vec<Interval>) -> Self {
        let mut prefix = Vec::with_capacity(intervals.len() + 1);
        let mut acc = Rational::zero();
        prefix.push(acc.clone());
        for iv in &intervals {
            acc += iv.length();
            prefix.push(acc.clone());
        }
        Self { intervals, prefix }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_measure(&self) -> Rational {
        self.prefix.last().cloned().unwrap_or_default()
    }

    /// `λ(S ∩ (x, y))`; zero when `x >= y`.
    pub fn measure_within(&self, x: &Rational, y: &Rational) -> Rational {
        if x >= y || self.intervals.is_empty() {
            return Rational::zero();
        }
        let i0 = self.intervals.partition_point(|iv| &iv.right <= x);
        let i1 = self.intervals.partition_point(|iv| &iv.left < y);
        if i0 >= i1 {
            return Rational::zero();
        }
        let mut m = &self.prefix[i1] - &self.prefix[i0];
        let first = &self.intervals[i0];
        if &first.left < x {
            m -= x - &first.left;
        }
        let last = &self.intervals[i1 - 1];
        if &last.right > y {
            m -= &last.right - y;
        }
        m
    }

    /// `λ(S | I) = λ(S ∩ I) / λ(I)`.
    pub fn relative_measure(&self, window: &Interval) -> Result<Rational> {
        if window.is_empty() {
            return Err(Error::EmptyInterval);
        }
        Ok(self.measure_within(window.left(), window.right()) / window.length())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let i = self.intervals.partition_point(|iv| &iv.right <= x);
        self.intervals.get(i).is_some_and(|iv| iv.contains(x))
    }

    /// Some `(x, x + eps)` lies in the set.
    pub fn has_right_germ(&self, x: &Rational) -> bool {
        let i = self.intervals.partition_point(|iv| &iv.right <= x);
        self.intervals.get(i).is_some_and(|iv| &iv.left <= x)
    }

    /// Some `(x - eps, x)` lies in the set.
    pub fn has_left_germ(&self, x: &Rational) -> bool {
        let i = self.intervals.partition_point(|iv| &iv.right < x);
        self.intervals.get(i).is_some_and(|iv| &iv.left < x)
    }

    /// All interval ends, ascending and without repeats.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(2 * self.intervals.len());
        for iv in &self.intervals {
            if out.last() != Some(&iv.left) {
                out.push(iv.left.clone());
            }
            out.push(iv.right.clone());
        }
        out
    }

    /// Endpoints in the closed window `[x, y]`.
    pub fn endpoints_within(&self, x: &Rational, y: &Rational) -> Vec<Rational> {
        if x > y {
            return Vec::new();
        }
        let i0 = self.intervals.partition_point(|iv| &iv.right < x);
        let mut out: Vec<Rational> = Vec::new();
        for iv in &self.intervals[i0..] {
            if &iv.left > y {
                break;
            }
            for e in [&iv.left, &iv.right] {
                if e >= x && e <= y && out.last() != Some(e) {
                    out.push(e.clone());
                }
            }
        }
        out
    }

    pub fn is_endpoint(&self, x: &Rational) -> bool {
        !self.endpoints_within(x, x).is_empty()
    }

    pub fn affine(&self, scale: &Rational, shift: &Rational) -> Result<Self> {
        ensure_positive("scale", scale)?;
        Ok(Self::from_ordered_unchecked(self.intervals.iter().map(|iv| iv.affine(scale, shift)).collect()))
    }

    pub fn translate(&self, shift: &Rational) -> Self {
        Self::from_ordered_unchecked(
            self.intervals
                .iter()
                .map(|iv| Interval { left: &iv.left + shift, right: &iv.right + shift })
                .collect(),
        )
    }

    /// Image under `x ↦ 2·center − x`.
    pub fn reflect(&self, center: &Rational) -> Self {
        let c2 = center * Rational::from_integer(2.into());
        Self::from_ordered_unchecked(
            self.intervals
                .iter()
                .rev()
                .map(|iv| Interval { left: &c2 - &iv.right, right: &c2 - &iv.left })
                .collect(),
        )
    }

    /// `S ∩ (x, y)`.
    pub fn clip(&self, x: &Rational, y: &Rational) -> Self {
        if x >= y {
            return Self::empty();
        }
        let out = self
            .intervals
            .iter()
            .filter(|iv| &iv.right > x && &iv.left < y)
            .map(|iv| Interval { left: max_r(&iv.left, x), right: min_r(&iv.right, y) })
            .collect();
        Self::from_ordered_unchecked(out)
    }

    /// Open complement of `S` inside `(x, y)` with the endpoints of `S`
    /// removed.
    pub fn complement_within(&self, x: &Rational, y: &Rational) -> Self {
        if x >= y {
            return Self::empty();
        }
        let mut out = Vec::new();
        let mut cursor = x.clone();
        for iv in &self.intervals {
            if &iv.right <= x {
                continue;
            }
            if &iv.left >= y {
                break;
            }
            if iv.left > cursor {
                out.push(Interval { left: cursor.clone(), right: iv.left.clone() });
            }
            if iv.right > cursor {
                cursor = iv.right.clone();
            }
        }
        if &cursor < y {
            out.push(Interval { left: cursor, right: y.clone() });
        }
        Self::from_ordered_unchecked(out)
    }

    /// Topological-closure style merge: touching intervals are joined.
    pub fn merged_closure(&self) -> Self {
        let mut out: Vec<Interval> = Vec::with_capacity(self.intervals.len());
        for iv in &self.intervals {
            match out.last_mut() {
                Some(last) if last.right == iv.left => last.right = iv.right.clone(),
                _ => out.push(iv.clone()),
            }
        }
        Self::from_ordered_unchecked(out)
    }

    /// Union, normalized (overlaps merged, touching kept apart).
    pub fn union(&self, other: &Self) -> Self {
        Self::normalize(self.intervals.iter().chain(other.intervals.iter()).cloned())
    }
}

/// `(-∞, 0) ∪ body` with `0 < a_1 < b_1 < ... < a_r < b_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    body: IntervalSet,
}

impl Configuration {
    pub fn new(body: IntervalSet) -> Result<Self> {
        let ivs = body.intervals();
        let Some(first) = ivs.first() else {
            return Err(Error::InvalidConfiguration("body has no intervals".into()));
        };
        if !first.left().is_positive() {
            return Err(Error::InvalidConfiguration(format!("first endpoint {} is not positive", first.left())));
        }
        for w in ivs.windows(2) {
            if w[0].right() >= w[1].left() {
                return Err(Error::InvalidConfiguration(format!(
                    "intervals ending at {} and starting at {} are not separated",
                    w[0].right(),
                    w[1].left()
                )));
            }
        }
        Ok(Self { body })
    }

    pub fn body(&self) -> &IntervalSet {
        &self.body
    }

    /// `{0, a_1, b_1, ..., a_r, b_r}`.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut v = alloc::vec![Rational::zero()];
        v.extend(self.body.endpoints());
        v
    }

    pub fn last_endpoint(&self) -> Rational {
        self.body.intervals().last().map(|iv| iv.right().clone()).unwrap_or_default()
    }

    pub fn is_endpoint(&self, x: &Rational) -> bool {
        x.is_zero() || self.body.is_endpoint(x)
    }

    /// `λ(C ∩ (x, y))` including the half-line part `max(0, min(y,0) − x)`.
    pub fn measure_within(&self, x: &Rational, y: &Rational) -> Rational {
        if x >= y {
            return Rational::zero();
        }
        let half = min_r(y, &Rational::zero()) - x;
        let half = if half.is_positive() { half } else { Rational::zero() };
        half + self.body.measure_within(x, y)
    }

    pub fn relative_measure(&self, window: &Interval) -> Result<Rational> {
        if window.is_empty() {
            return Err(Error::EmptyInterval);
        }
        Ok(self.measure_within(window.left(), window.right()) / window.length())
    }

    /// Applies `x ↦ scale·x` to the body (the half-line is fixed only by
    /// maps fixing 0).
    pub fn scale(&self, scale: &Rational) -> Result<Self> {
        Self::new(self.body.affine(scale, &Rational::zero())?)
    }
}

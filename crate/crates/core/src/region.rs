//! The common interface of every set whose density the engine can analyse.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::density::AffinePiece;
use crate::exact::{max_r, Rational};
use crate::interval::{Configuration, IntervalSet};

/// Behaviour of `ω ↦ λ(S ∩ I_ω(c))` past the last critical radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// For `ω >= from` the measure is exactly `piece.offset + piece.slope·ω`.
    Exact { from: Rational, piece: AffinePiece },
    /// For `ω >= from` the density is within `spread/ω` of `limit`.
    Envelope { from: Rational, limit: Rational, spread: Rational },
}

impl Tail {
    pub fn from(&self) -> &Rational {
        match self {
            Tail::Exact { from, .. } | Tail::Envelope { from, .. } => from,
        }
    }
}

/// An open subset of the line given by a finite description.
pub trait Region {
    /// `λ(S ∩ (x, y))`, zero for `x >= y`.
    fn measure_within(&self, x: &Rational, y: &Rational) -> Rational;

    /// Boundary points of `S` in the closed window `[x, y]`, ascending.
    fn endpoints_within(&self, x: &Rational, y: &Rational) -> Vec<Rational>;

    fn is_endpoint(&self, x: &Rational) -> bool {
        !self.endpoints_within(x, x).is_empty()
    }

    fn tail(&self, center: &Rational) -> Tail;
}

impl Region for IntervalSet {
    fn measure_within(&self, x: &Rational, y: &Rational) -> Rational {
        IntervalSet::measure_within(self, x, y)
    }

    fn endpoints_within(&self, x: &Rational, y: &Rational) -> Vec<Rational> {
        IntervalSet::endpoints_within(self, x, y)
    }

    fn tail(&self, center: &Rational) -> Tail {
        let from = match (self.intervals().first(), self.intervals().last()) {
            (Some(f), Some(l)) => {
                let d1 = center - f.left();
                let d2 = l.right() - center;
                max_r(&max_r(&d1, &d2), &Rational::zero())
            }
            _ => Rational::zero(),
        };
        Tail::Exact { from, piece: AffinePiece { offset: self.total_measure(), slope: Rational::zero() } }
    }
}

impl Region for Configuration {
    fn measure_within(&self, x: &Rational, y: &Rational) -> Rational {
        Configuration::measure_within(self, x, y)
    }

    fn endpoints_within(&self, x: &Rational, y: &Rational) -> Vec<Rational> {
        let mut v = Vec::new();
        let zero = Rational::zero();
        if x <= &zero && &zero <= y {
            v.push(zero);
        }
        v.extend(self.body().endpoints_within(x, y));
        v
    }

    fn is_endpoint(&self, x: &Rational) -> bool {
        Configuration::is_endpoint(self, x)
    }

    fn tail(&self, center: &Rational) -> Tail {
        // Once the window covers 0 and the last endpoint, the half-line
        // contributes ω − c and the body its full measure.
        let from = max_r(&center.abs(), &(self.last_endpoint() - center).abs());
        Tail::Exact {
            from,
            piece: AffinePiece { offset: self.body().total_measure() - center, slope: Rational::from_integer(1.into()) },
        }
    }
}

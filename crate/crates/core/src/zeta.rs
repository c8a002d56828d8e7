//! The table of threshold constants `zeta_1 < ... < zeta_7`, each the root
//! in `(0, 1/2)` of a row polynomial, together with the inequalities that
//! hold for every `delta` below it.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ensure_delta, ensure_positive, int, rat, Rational};
use crate::poly::{isolate_roots_in, refine_root, IntPolynomial, RootBracket};

/// Row polynomials, lowest degree first.
const ROWS: [&[i64]; 7] = [
    &[-1, 1, 8, 8],  // 8x^3 + 8x^2 + x - 1
    &[1, 0, -16, 8], // 8x^3 - 16x^2 + 1
    &[-3, 10, 4],    // 4x^2 + 10x - 3
    &[-1, 5, -6, 4], // 4x^3 - 6x^2 + 5x - 1
    &[3, -12, 4],    // 4x^2 - 12x + 3
    &[1, -2, -8, 8], // 8x^3 - 8x^2 - 2x + 1
    &[-1, 3, 2],     // 2x^2 + 3x - 1
];

/// Earlier bounds on the same constant, each the unique root in `(0, 1/2)`
/// of its polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PriorBound {
    /// `4x^3 + 2x^2 + 3x - 1`, the older lower bound.
    SzenesLower,
    /// `8x^3 + 4x^2 + 2x - 1`, the older upper bound.
    SzenesUpper,
    /// `2x^3 + 2x^2 + 3x - 1`, the improved upper bound.
    Cgo,
    /// `2x^2 + 3x - 1`, root `(sqrt 17 - 3)/4`.
    Kolyada,
}

impl PriorBound {
    pub const ALL: [PriorBound; 4] =
        [PriorBound::SzenesLower, PriorBound::SzenesUpper, PriorBound::Cgo, PriorBound::Kolyada];

    pub fn polynomial(self) -> IntPolynomial {
        IntPolynomial::from_i64(match self {
            PriorBound::SzenesLower => &[-1, 3, 2, 4],
            PriorBound::SzenesUpper => &[-1, 2, 4, 8],
            PriorBound::Cgo => &[-1, 3, 2, 2],
            PriorBound::Kolyada => &[-1, 3, 2],
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            PriorBound::SzenesLower => "szenes-lower",
            PriorBound::SzenesUpper => "szenes-upper",
            PriorBound::Cgo => "cgo-upper",
            PriorBound::Kolyada => "kolyada",
        }
    }

    pub fn bracket(self) -> Result<RootBracket> {
        unique_root_below_half(&self.polynomial(), 0)
    }

    pub fn value(self, tol: &Rational) -> Result<Rational> {
        refine_root(&self.bracket()?, tol)
    }
}

fn check_index(i: usize) -> Result<()> {
    if (1..=7).contains(&i) {
        Ok(())
    } else {
        Err(Error::ZetaIndex(i))
    }
}

pub fn zeta_polynomial(i: usize) -> Result<IntPolynomial> {
    check_index(i)?;
    Ok(IntPolynomial::from_i64(ROWS[i - 1]))
}

fn unique_root_below_half(p: &IntPolynomial, row: usize) -> Result<RootBracket> {
    let roots = isolate_roots_in(p, &Rational::zero(), &rat(1, 2)).map_err(|_| Error::NoRootInRange { row })?;
    match <[RootBracket; 1]>::try_from(roots) {
        Ok([b]) => Ok(b),
        Err(_) => Err(Error::NoRootInRange { row }),
    }
}

/// Isolating bracket of `zeta_i` inside `(0, 1/2)`.
pub fn zeta_bracket(i: usize) -> Result<RootBracket> {
    unique_root_below_half(&zeta_polynomial(i)?, i)
}

/// `zeta_i` refined to within `tol`.
pub fn zeta(i: usize, tol: &Rational) -> Result<Rational> {
    ensure_positive("tolerance", tol)?;
    refine_root(&zeta_bracket(i)?, tol)
}

/// All seven constants at a common tolerance.
pub fn zeta_table(tol: &Rational) -> Result<Vec<Rational>> {
    (1..=7).map(|i| zeta(i, tol)).collect()
}

/// Exact test of `delta < zeta_i` for `0 < delta < 1/2`: the row polynomial
/// has a single sign change on `(0, 1/2)`, so `delta` lies below the root
/// exactly when the polynomial still has its sign at 0.
pub fn below_zeta(i: usize, delta: &Rational) -> Result<bool> {
    ensure_delta(delta)?;
    zeta_bracket(i)?;
    let p = zeta_polynomial(i)?;
    let at0 = p.sign_at(&Rational::zero());
    Ok(p.sign_at(delta) == at0)
}

/// `lhs < rhs` where either side may be a quotient with a vanishing
/// denominator; such comparisons are false.
fn lt(lhs: Option<Rational>, rhs: Option<Rational>) -> bool {
    matches!((lhs, rhs), (Some(l), Some(r)) if l < r)
}

fn div(n: Rational, d: Rational) -> Option<Rational> {
    (!d.is_zero()).then(|| n / d)
}

/// Evaluates every inequality of row `i` exactly at `delta`.
pub fn check_zeta_row(i: usize, delta: &Rational) -> Result<bool> {
    check_index(i)?;
    ensure_delta(delta)?;
    let d = delta.clone();
    let one = Rational::one();
    let two = int(2);
    let d2 = &d * &d;
    let ok = match i {
        1 => lt(
            div(int(4) * &d2, &one - &two * &d),
            div((&one - &d) * (&one + &two * &d), &one + int(3) * &d),
        ),
        2 => {
            let a = div(two.clone(), &one - &two * &d);
            let b = div((&one - &two * &d).pow(2), &one - int(3) * &d - &two * &d2);
            matches!((&a, &b), (Some(a), Some(b)) if (a - b).is_positive())
        }
        3 => {
            let first = lt(Some(one.clone()), div((&one - &two * &d) * (&one - int(4) * &d / int(3)), int(4) * &d2));
            let lhs = (-int(4) * &d2 + int(6) * &d - &one) * (&one - &d);
            let rhs = int(8) * &d2 * &d + int(4) * &d - &one;
            first && lhs >= rhs
        }
        4 => int(4) * &d2 * &d < (&one - &two * &d) * (&one - int(3) * &d),
        5 => (int(4) * &d2 - int(12) * &d + int(3)).is_positive(),
        6 => {
            let rhs = div(&two * &d, &one - &two * &d)
                .zip(div(one.clone(), &two * (&one - &d)))
                .map(|(x, y)| x - y);
            matches!(rhs, Some(r) if &two * &d >= r)
        }
        7 => {
            let c1 = (&one - int(3) * &d - &two * &d2).is_positive();
            let c2 = lt(Some(d.clone()), div(&one - &two * &d, &one + &two * &d));
            let c3 = lt(Some(&two * &d), div((&one - &d) * (&one - &two * &d), &two * &d));
            let c4 = -int(14) * &d2 + int(15) * &d - int(3) <= &two * (int(4) * &d - &one) * (&one - &two * &d);
            c1 && c2 && c3 && c4
        }
        _ => unreachable!(),
    };
    Ok(ok)
}

/// `delta <= (sqrt 5 - 1)/4`, decided as `4 delta^2 + 2 delta - 1 <= 0`.
pub fn at_most_golden_quarter(delta: &Rational) -> bool {
    (int(4) * delta * delta + int(2) * delta - Rational::one()).cmp(&Rational::zero()) != Ordering::Greater
}

/// `delta >= (3 - sqrt 5)/4`, decided as `4 delta^2 - 6 delta + 1 <= 0`.
pub fn at_least_conjugate_quarter(delta: &Rational) -> bool {
    (int(4) * delta * delta - int(6) * delta + Rational::one()).cmp(&Rational::zero()) != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ten_pow_neg;

    #[test]
    fn index_is_validated() {
        assert_eq!(zeta(0, &ten_pow_neg(6)), Err(Error::ZetaIndex(0)));
        assert_eq!(check_zeta_row(8, &rat(1, 4)), Err(Error::ZetaIndex(8)));
    }

    #[test]
    fn rows_hold_below_and_fail_above() {
        assert!(check_zeta_row(1, &rat(26, 100)).unwrap());
        assert!(!check_zeta_row(1, &rat(28, 100)).unwrap());
        assert!(check_zeta_row(7, &rat(1, 4)).unwrap());
    }

    #[test]
    fn exact_comparison_agrees_with_refined_value() {
        let z1 = zeta(1, &ten_pow_neg(12)).unwrap();
        assert!(below_zeta(1, &(&z1 - ten_pow_neg(9))).unwrap());
        assert!(!below_zeta(1, &(&z1 + ten_pow_neg(9))).unwrap());
        assert!(below_zeta(6, &rat(27, 100)).unwrap());
        assert!(!below_zeta(6, &rat(28, 100)).unwrap());
    }

    #[test]
    fn window_conditions() {
        assert!(at_most_golden_quarter(&rat(30, 100)));
        assert!(!at_most_golden_quarter(&rat(31, 100)));
        assert!(at_least_conjugate_quarter(&rat(20, 100)));
        assert!(!at_least_conjugate_quarter(&rat(19, 100)));
    }
}

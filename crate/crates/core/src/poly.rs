//! Integer polynomials and exact real-root isolation.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ensure_positive, Rational};

/// Polynomial with integer coefficients, lowest degree first. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exact value at `x`. For `x = n/d` the sum `Σ a_i n^i d^(k-i)` is
    /// accumulated in integers and divided once.
    pub fn eval(&self, x: &Rational) -> Rational {
        let Some(k) = self.degree() else {
            return Rational::zero();
        };
        let (num, den) = (x.numer(), x.denom());
        Rational::new(self.homogeneous(num, den), num_traits::pow(den.clone(), k))
    }

    /// Sign of the value at `x`, without forming the fraction.
    pub fn sign_at(&self, x: &Rational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        // The denominator power is positive, so the numerator carries the sign.
        self.homogeneous(x.numer(), x.denom()).cmp(&BigInt::zero())
    }

    fn homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        // Horner in the homogenized form: acc = acc*num + a_i*den^(k-i).
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        let k = self.coeffs.len() - 1;
        let mut powers = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            powers.push(den_pow.clone());
            den_pow *= den;
        }
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + a * &powers[k - i];
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    /// `p / gcd(p, p')`, scaled to primitive integer form with positive
    /// leading coefficient. Same real roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let p = RatPoly::from_int(self);
        let g = p.gcd(&RatPoly::from_int(&self.derivative()));
        p.div_exact(&g).to_primitive()
    }

    /// Power of two strictly exceeding every root's absolute value.
    fn root_bound(&self) -> Rational {
        let lead = self.coeffs.last().expect("nonzero polynomial").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        // Cauchy: |root| < 1 + max/lead.
        let cauchy = Rational::one() + Rational::new(max, lead);
        let mut b = Rational::one();
        while b <= cauchy {
            b *= Rational::from_integer(BigInt::from(2));
        }
        b
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            match (show_mag, i) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}x")?,
                (false, 1) => f.write_str("x")?,
                (true, _) => write!(f, "{mag}x^{i}")?,
                (false, _) => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// An isolating interval: `polynomial` (square-free) has exactly one real
/// root in `(low, high)` and is nonzero at both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket {
    pub low: Rational,
    pub high: Rational,
    pub polynomial: IntPolynomial,
}

impl RootBracket {
    pub fn width(&self) -> Rational {
        &self.high - &self.low
    }

    /// Bisects until the bracket is at most `tol` wide. Returns a degenerate
    /// bracket `low == high` if a bisection point hits the root exactly.
    pub fn narrowed(&self, tol: &Rational) -> RootBracket {
        let p = &self.polynomial;
        let (mut lo, mut hi) = (self.low.clone(), self.high.clone());
        let lo_sign = p.sign_at(&lo);
        while &(&hi - &lo) > tol {
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            match p.sign_at(&mid) {
                Ordering::Equal => {
                    return RootBracket { low: mid.clone(), high: mid, polynomial: p.clone() }
                }
                s if s == lo_sign => lo = mid,
                _ => hi = mid,
            }
        }
        RootBracket { low: lo, high: hi, polynomial: p.clone() }
    }
}

/// One bracket per distinct real root, in increasing order.
pub fn isolate_roots(p: &IntPolynomial) -> Vec<RootBracket> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sq = p.squarefree_part();
    let b = sq.root_bound();
    isolate_squarefree(&sq, &-b.clone(), &b)
}

/// Brackets for the roots of `p` strictly inside `(lo, hi)`. Fails if `p`
/// vanishes at `lo` or `hi`.
pub fn isolate_roots_in(p: &IntPolynomial, lo: &Rational, hi: &Rational) -> Result<Vec<RootBracket>> {
    if p.degree().unwrap_or(0) == 0 || lo >= hi {
        return Ok(Vec::new());
    }
    for x in [lo, hi] {
        if p.sign_at(x) == Ordering::Equal {
            return Err(Error::RootAtEndpoint(x.clone()));
        }
    }
    Ok(isolate_squarefree(&p.squarefree_part(), lo, hi))
}

fn isolate_squarefree(sq: &IntPolynomial, lo: &Rational, hi: &Rational) -> Vec<RootBracket> {
    let chain = sturm_chain(sq);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = Rational::from_integer(BigInt::from(2));
    while let Some((a, b)) = stack.pop() {
        let count = variations(&chain, &a) - variations(&chain, &b);
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(RootBracket { low: a, high: b, polynomial: sq.clone() });
            continue;
        }
        let mid = (&a + &b) / &two;
        if sq.sign_at(&mid) == Ordering::Equal {
            // Shrink a bracket around the root at `mid` until it is isolated.
            let mut h = (&b - &a) / Rational::from_integer(BigInt::from(4));
            loop {
                let (l, r) = (&mid - &h, &mid + &h);
                if sq.sign_at(&l) != Ordering::Equal
                    && sq.sign_at(&r) != Ordering::Equal
                    && variations(&chain, &l) - variations(&chain, &r) == 1
                {
                    out.push(RootBracket { low: l.clone(), high: r.clone(), polynomial: sq.clone() });
                    stack.push((a, l));
                    stack.push((r, b));
                    break;
                }
                h /= &two;
            }
        } else {
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
    }
    out.sort_by(|x, y| x.low.cmp(&y.low));
    out
}

/// Midpoint of a bracket bisected to width at most `tol`; exact when a
/// bracket end or bisection point is the root itself.
pub fn refine_root(bracket: &RootBracket, tol: &Rational) -> Result<Rational> {
    ensure_positive("tolerance", tol)?;
    let p = &bracket.polynomial;
    for x in [&bracket.low, &bracket.high] {
        if p.sign_at(x) == Ordering::Equal {
            return Ok(x.clone());
        }
    }
    let b = bracket.narrowed(tol);
    Ok((b.low + b.high) / Rational::from_integer(BigInt::from(2)))
}

fn sturm_chain(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let r = RatPoly::from_int(&chain[n - 2]).rem(&RatPoly::from_int(&chain[n - 1]));
        if r.is_zero() {
            break;
        }
        // Scaling by a positive constant preserves signs.
        chain.push(r.neg().to_primitive_keep_sign());
    }
    chain
}

fn variations(chain: &[IntPolynomial], x: &Rational) -> i64 {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for q in chain {
        let s = q.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Rational-coefficient polynomial used for division and gcd.
#[derive(Clone, Debug)]
struct RatPoly(Vec<Rational>);

impl RatPoly {
    fn from_int(p: &IntPolynomial) -> Self {
        RatPoly(p.coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn neg(&self) -> Self {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead = d.0.last().expect("division by zero polynomial").clone();
        if r.len() < dl {
            return (RatPoly(Vec::new()), RatPoly(r).trimmed());
        }
        let mut q = vec![Rational::zero(); r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dl - 1] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dl - 1);
        (RatPoly(q).trimmed(), RatPoly(r).trimmed())
    }

    fn rem(&self, d: &RatPoly) -> RatPoly {
        self.div_rem(d).1
    }

    fn div_exact(&self, d: &RatPoly) -> RatPoly {
        self.div_rem(d).0
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Clears denominators and content; leading coefficient made positive.
    fn to_primitive(&self) -> IntPolynomial {
        let p = self.to_primitive_keep_sign();
        if p.coeffs.last().is_some_and(Signed::is_negative) {
            IntPolynomial::new(p.coeffs.into_iter().map(|c| -c).collect())
        } else {
            p
        }
    }

    /// Clears denominators and content with a positive multiplier.
    fn to_primitive_keep_sign(&self) -> IntPolynomial {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return IntPolynomial::new(ints);
        }
        IntPolynomial::new(ints.into_iter().map(|c| c / &g).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ten_pow_neg};
    use alloc::string::ToString;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn eval_matches_hand_values() {
        let z1 = p(&[-1, 1, 8, 8]);
        assert_eq!(z1.eval(&Rational::zero()), rat(-1, 1));
        // 8*19683/10^6 + 8*729/10^4 + 27/100 - 1 = 157464/10^6 + 583200/10^6 + 270000/10^6 - 1
        assert_eq!(z1.eval(&rat(27, 100)), rat(10664, 1000000));
        assert_eq!(p(&[-1, 2]).eval(&rat(1, 2)), rat(0, 1));
    }

    #[test]
    fn trims_and_reports_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn displays_in_descending_order() {
        assert_eq!(p(&[-1, 1, 8, 8]).to_string(), "8x^3 + 8x^2 + x - 1");
        assert_eq!(p(&[3, -12, 4]).to_string(), "4x^2 - 12x + 3");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn squarefree_part_removes_multiplicity() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let sq = p(&[2, -3, 0, 1]).squarefree_part();
        assert_eq!(sq, p(&[-2, 1, 1]));
    }

    #[test]
    fn isolates_simple_and_repeated_roots() {
        assert!(isolate_roots(&p(&[1, 0, 1])).is_empty());
        let r = isolate_roots(&p(&[2, -3, 0, 1]));
        assert_eq!(r.len(), 2);
        let r = isolate_roots(&p(&[0, -1, 0, 1]));
        assert_eq!(r.len(), 3);
        for b in &r {
            assert!(b.low < b.high);
        }
        for (b, want) in r.iter().zip([-1, 0, 1]) {
            let x = refine_root(b, &ten_pow_neg(9)).unwrap();
            assert!((x - rat(want, 1)).abs() <= ten_pow_neg(9));
        }
    }

    #[test]
    fn dyadic_root_is_found_exactly() {
        let r = isolate_roots(&p(&[-1, 2]));
        assert_eq!(r.len(), 1);
        assert_eq!(refine_root(&r[0], &ten_pow_neg(9)).unwrap(), rat(1, 2));
    }

    #[test]
    fn restricted_isolation_rejects_roots_on_the_ends() {
        let q = p(&[-1, 2]);
        assert!(isolate_roots_in(&q, &rat(1, 2), &rat(1, 1)).is_err());
        assert_eq!(isolate_roots_in(&q, &rat(0, 1), &rat(1, 1)).unwrap().len(), 1);
        assert!(isolate_roots_in(&q, &rat(3, 4), &rat(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn refine_rejects_nonpositive_tolerance() {
        let r = isolate_roots(&p(&[-1, 2]));
        assert!(refine_root(&r[0], &Rational::zero()).is_err());
    }
}

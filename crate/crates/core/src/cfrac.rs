//! Hirzebruch–Jung continued fractions
//! `P/Q = a_1 - 1/(a_2 - 1/(... - 1/a_r))`.
//!
//! For a singular cone `cone{(1,0), (P,Q)}` with `0 < P < Q` the expansion
//! always starts with `a_1 = 1` and has every later term at least 2. The
//! convergent vectors `v_i = (p_i, q_i)` are the Hilbert basis of the cone.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{det2, Vector};
use crate::scalar::Scalar;

/// A continued fraction `[1, a_2, ..., a_r]` with `r >= 2` and `a_i >= 2`
/// for `i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContinuedFraction<T> {
    terms: Vec<T>,
}

impl<T: Scalar> ContinuedFraction<T> {
    pub fn new(terms: Vec<T>) -> Result<Self> {
        if terms.len() < 2 {
            return Err(Error::InvalidContinuedFraction(format!(
                "need at least two terms, got {}",
                terms.len()
            )));
        }
        if !terms[0].is_one() {
            return Err(Error::InvalidContinuedFraction(format!(
                "first term must be 1, got {}",
                terms[0]
            )));
        }
        let two = T::one() + T::one();
        if let Some((i, a)) = terms.iter().enumerate().skip(1).find(|(_, a)| **a < two) {
            return Err(Error::InvalidContinuedFraction(format!(
                "term a_{} = {} must be at least 2",
                i + 1,
                a
            )));
        }
        Ok(ContinuedFraction { terms })
    }

    pub fn from_i64(terms: &[i64]) -> Result<Self> {
        Self::new(terms.iter().map(|&a| T::from_i64_exact(a)).collect())
    }

    pub fn terms(&self) -> &[T] {
        &self.terms
    }

    /// Length `r`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// One-based access: `a(1) == 1`.
    pub fn a(&self, i: usize) -> &T {
        &self.terms[i - 1]
    }
}

impl<T: fmt::Display> fmt::Display for ContinuedFraction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// The sequences `p_{-1}, ..., p_r` and `q_0, ..., q_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentTable<T> {
    /// `p[k]` holds `p_{k-1}`.
    p: Vec<T>,
    q: Vec<T>,
}

impl<T: Scalar> ConvergentTable<T> {
    pub fn r(&self) -> usize {
        self.q.len() - 1
    }

    /// `p_i` for `0 <= i <= r`.
    pub fn p(&self, i: usize) -> &T {
        &self.p[i + 1]
    }

    pub fn q(&self, i: usize) -> &T {
        &self.q[i]
    }

    /// `p_{-1}, p_0, ..., p_r`.
    pub fn p_with_minus_one(&self) -> &[T] {
        &self.p
    }

    pub fn q_all(&self) -> &[T] {
        &self.q
    }

    /// `v_i = (p_i, q_i)`.
    pub fn vector(&self, i: usize) -> Vector<T> {
        Vector::new(self.p(i).clone(), self.q(i).clone())
    }

    pub fn vectors(&self) -> Vec<Vector<T>> {
        (0..=self.r()).map(|i| self.vector(i)).collect()
    }
}

/// Expands `p/q` with `0 < p < q` coprime.
pub fn hj_expand<T: Scalar>(p: &T, q: &T) -> Result<ContinuedFraction<T>> {
    check_normal_range(p, q)?;
    if p.is_zero() || q.is_one() {
        return Err(Error::Smooth);
    }
    let (mut num, mut den) = (p.clone(), q.clone());
    let mut terms = Vec::new();
    loop {
        let a = num.div_ceil(&den);
        let rem = a.clone() * den.clone() - num;
        terms.push(a);
        if rem.is_zero() {
            break;
        }
        num = den;
        den = rem;
    }
    ContinuedFraction::new(terms)
}

fn check_normal_range<T: Scalar>(p: &T, q: &T) -> Result<()> {
    if p.is_negative() || p >= q {
        return Err(Error::OutOfRange);
    }
    if !p.gcd(q).is_one() {
        return Err(Error::NotLowestTerms);
    }
    Ok(())
}

pub fn convergents<T: Scalar>(cf: &ContinuedFraction<T>) -> ConvergentTable<T> {
    let r = cf.len();
    let mut p = Vec::with_capacity(r + 2);
    p.push(T::zero());
    p.push(T::one());
    let mut q = Vec::with_capacity(r + 1);
    q.push(T::zero());
    q.push(T::one());
    for i in 1..=r {
        let a = cf.a(i).clone();
        let next = a.clone() * p[i].clone() - p[i - 1].clone();
        p.push(next);
        if i >= 2 {
            let next = a * q[i - 1].clone() - q[i - 2].clone();
            q.push(next);
        }
    }
    ConvergentTable { p, q }
}

/// `(P, Q) = (p_r, q_r)`.
pub fn evaluate<T: Scalar>(cf: &ContinuedFraction<T>) -> (T, T) {
    let table = convergents(cf);
    let r = table.r();
    (table.p(r).clone(), table.q(r).clone())
}

/// `[v_0, ..., v_r]`.
pub fn hilbert_basis<T: Scalar>(cf: &ContinuedFraction<T>) -> Vec<Vector<T>> {
    convergents(cf).vectors()
}

/// Irreducible lattice points of `cone{(1,0), (p,q)}`, found by enumerating
/// the box `[0,q]^2`.
///
/// Points are visited in increasing `x + y`, which is positive on the cone.
/// A point is reducible exactly when subtracting one of the irreducible
/// points already found leaves a nonzero cone point, since any
/// decomposition `t = s + (t - s)` can be refined until `s` is irreducible.
pub fn hilbert_basis_bruteforce<T: Scalar>(p: &T, q: &T) -> Result<BTreeSet<Vector<T>>> {
    check_normal_range(p, q)?;
    let in_cone = |w: &Vector<T>| {
        !w.y.is_negative() && !(w.x.clone() * q.clone() - w.y.clone() * p.clone()).is_negative()
    };
    let mut points = Vec::new();
    let mut x = T::zero();
    while x <= *q {
        let mut y = T::zero();
        while y <= *q {
            let w = Vector::new(x.clone(), y.clone());
            if !w.is_zero() && in_cone(&w) {
                points.push(w);
            }
            y = y + T::one();
        }
        x = x + T::one();
    }
    points.sort_by(|a, b| {
        (a.x.clone() + a.y.clone())
            .cmp(&(b.x.clone() + b.y.clone()))
            .then(a.cmp(b))
    });
    let mut irreducible: Vec<Vector<T>> = Vec::new();
    for t in points {
        let reducible = irreducible.iter().any(|s| {
            let rest = &t - s;
            !rest.is_zero() && in_cone(&rest)
        });
        if !reducible {
            irreducible.push(t);
        }
    }
    Ok(irreducible.into_iter().collect())
}

/// `p_i q_j - p_j q_i`: the lowest-terms denominator of the segment
/// `[a_{i+1}, ..., a_j]`.
pub fn segment_denominator<T: Scalar>(cf: &ContinuedFraction<T>, i: usize, j: usize) -> Result<T> {
    if i >= j || j > cf.len() {
        return Err(Error::IndexOutOfRange(format!(
            "segment ({i}, {j}) needs 0 <= i < j <= {}",
            cf.len()
        )));
    }
    let table = convergents(cf);
    Ok(det2(&table.vector(i), &table.vector(j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Cf = ContinuedFraction<i64>;

    fn cf(terms: &[i64]) -> Cf {
        Cf::from_i64(terms).unwrap()
    }

    /// Nested evaluation from the innermost term outward.
    fn nested_value(terms: &[i64]) -> Ratio<i64> {
        let mut acc = Ratio::from_integer(*terms.last().unwrap());
        for &a in terms.iter().rev().skip(1) {
            acc = Ratio::from_integer(a) - acc.recip();
        }
        acc
    }

    #[test]
    fn validation() {
        assert!(Cf::from_i64(&[1]).is_err());
        assert!(Cf::from_i64(&[2, 2]).is_err());
        assert!(Cf::from_i64(&[1, 1]).is_err());
        assert!(Cf::from_i64(&[1, 2, 1, 2]).is_err());
        assert!(Cf::from_i64(&[1, 2, 7]).is_ok());
    }

    #[test]
    fn expand_examples() {
        assert_eq!(hj_expand(&5i64, &12).unwrap(), cf(&[1, 2, 4, 2]));
        assert_eq!(hj_expand(&1i64, &2).unwrap(), cf(&[1, 2]));
        assert_eq!(nested_value(&[1, 2, 2]), Ratio::new(1, 3));
        assert_eq!(hj_expand(&1i64, &3).unwrap(), cf(&[1, 2, 2]));
    }

    #[test]
    fn expand_errors() {
        assert_eq!(hj_expand(&0i64, &1), Err(Error::Smooth));
        assert_eq!(hj_expand(&2i64, &4), Err(Error::NotLowestTerms));
        assert_eq!(hj_expand(&5i64, &5), Err(Error::OutOfRange));
        assert_eq!(hj_expand(&7i64, &5), Err(Error::OutOfRange));
        assert_eq!(hj_expand(&-1i64, &5), Err(Error::OutOfRange));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&cf(&[1, 2, 4, 2])), (5, 12));
        assert_eq!(evaluate(&cf(&[1, 2])), (1, 2));
        assert_eq!(nested_value(&[1, 2, 2, 2]), Ratio::new(1, 4));
        assert_eq!(evaluate(&cf(&[1, 2, 2, 2])), (1, 4));
    }

    #[test]
    fn convergent_table_example() {
        let t = convergents(&cf(&[1, 2, 4, 2]));
        assert_eq!(t.p_with_minus_one(), &[0, 1, 1, 1, 3, 5]);
        assert_eq!(t.q_all(), &[0, 1, 2, 7, 12]);
        let t = convergents(&cf(&[1, 2]));
        assert_eq!(
            t.vectors(),
            vec![Vector::new(1, 0), Vector::new(1, 1), Vector::new(1, 2)]
        );
    }

    #[test]
    fn hilbert_basis_examples() {
        let v = |x, y| Vector::new(x, y);
        assert_eq!(
            hilbert_basis(&cf(&[1, 2, 4, 2])),
            vec![v(1, 0), v(1, 1), v(1, 2), v(3, 7), v(5, 12)]
        );
        assert_eq!(
            hilbert_basis(&cf(&[1, 2, 2])),
            vec![v(1, 0), v(1, 1), v(1, 2), v(1, 3)]
        );
        let brute: Vec<_> = hilbert_basis_bruteforce(&1i64, &2)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(brute, vec![v(1, 0), v(1, 1), v(1, 2)]);
        let smooth: Vec<_> = hilbert_basis_bruteforce(&0i64, &1)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(smooth, vec![v(0, 1), v(1, 0)]);
        let expected: BTreeSet<_> = [v(1, 0), v(1, 1), v(1, 2), v(3, 7), v(5, 12)]
            .into_iter()
            .collect();
        assert_eq!(hilbert_basis_bruteforce(&5i64, &12).unwrap(), expected);
        assert_eq!(
            hilbert_basis_bruteforce(&2i64, &4),
            Err(Error::NotLowestTerms)
        );
    }

    #[test]
    fn segment_denominator_example_and_convention() {
        let c = cf(&[1, 2, 4, 2]);
        assert_eq!(segment_denominator(&c, 1, 3).unwrap(), 4);
        // [a_2, a_3] = [2, 4] = 7/4, while the shifted segment [a_1, a_2] = 1/2.
        assert_eq!(*nested_value(&[2, 4]).denom(), 4);
        assert_eq!(*nested_value(&[1, 2]).denom(), 2);
        assert!(segment_denominator(&c, 3, 3).is_err());
        assert!(segment_denominator(&c, 2, 5).is_err());
    }

    #[test]
    fn short_segments() {
        let c = cf(&[1, 3, 5, 2, 7]);
        for i in 0..c.len() {
            assert_eq!(segment_denominator(&c, i, i + 1).unwrap(), 1);
        }
        for i in 0..c.len() - 1 {
            assert_eq!(segment_denominator(&c, i, i + 2).unwrap(), *c.a(i + 2));
        }
    }
}

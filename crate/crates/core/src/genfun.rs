//! Sparse integer polynomials and factored rational generating functions.
//!
//! Denominators are kept as multisets of strides e, each standing for a
//! factor (1 - x^e); they are never expanded unless a cross-multiplication
//! needs them. Series expansion divides by one factor at a time, which is a
//! prefix sum with stride e.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::basis::{gcd_structure, Basis};
use crate::error::{Error, Result};

/// A sparse polynomial over Z: strictly increasing exponents, no stored
/// zero coefficients. The zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: Vec<(u64, BigInt)>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exponent: u64, coefficient: impl Into<BigInt>) -> Self {
        let c = coefficient.into();
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: vec![(exponent, c)],
        }
    }

    /// Build from arbitrary (exponent, coefficient) pairs: duplicates are
    /// summed, zeros dropped, exponents sorted.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, BigInt)>) -> Self {
        let mut map: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        SparsePoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(u64, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponent: u64) -> BigInt {
        match self.terms.binary_search_by_key(&exponent, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Multiply by x^offset.
    pub fn shifted(&self, offset: u64) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.checked_add(offset).expect("exponent overflow"), c.clone()))
                .collect(),
        }
    }

    /// 1 + x^stride + ... + x^((count-1)*stride); `count = 0` gives zero.
    pub fn geometric(stride: u64, count: u64) -> Self {
        SparsePoly {
            terms: (0..count)
                .map(|i| (i.checked_mul(stride).expect("exponent overflow"), BigInt::one()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Value at x = 1.
    pub fn coeff_sum(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Derivative at x = 1, i.e. sum of e * c over all terms.
    pub fn weighted_coeff_sum(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| BigInt::from(*e) * c)
            .sum()
    }

    /// Dense coefficients for degrees 0..=limit (higher terms truncated).
    pub fn dense(&self, limit: u64) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); limit as usize + 1];
        for (e, c) in &self.terms {
            if *e <= limit {
                out[*e as usize] = c.clone();
            }
        }
        out
    }

    fn leading(&self) -> Option<&(u64, BigInt)> {
        self.terms.last()
    }
}

impl std::ops::Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        SparsePoly::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain(rhs.terms.iter().cloned()),
        )
    }
}

impl std::ops::Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        SparsePoly::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain(rhs.terms.iter().map(|(e, c)| (*e, -c))),
        )
    }
}

impl std::ops::Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl std::ops::Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut map: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.checked_add(*eb).expect("exponent overflow");
                let entry = map.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        SparsePoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// Exact product.
pub fn poly_mul(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    a * b
}

/// Exact quotient q with q * den = num. Fails with the degree at which the
/// division first leaves a remainder. Panics if `den` is zero.
pub fn poly_exact_div(num: &SparsePoly, den: &SparsePoly) -> Result<SparsePoly> {
    assert!(!den.is_zero(), "division by the zero polynomial");
    let (dexp, dcoef) = den.leading().expect("den is nonzero").clone();
    let mut rem = num.clone();
    let mut quotient = Vec::new();
    while let Some((rexp, rcoef)) = rem.leading().cloned() {
        if rexp < dexp {
            return Err(Error::NotDivisible { degree: rexp });
        }
        let (q, r) = rcoef.div_rem(&dcoef);
        if !r.is_zero() {
            return Err(Error::NotDivisible { degree: rexp });
        }
        let qterm = SparsePoly::monomial(rexp - dexp, q.clone());
        rem = &rem - &(&qterm * den);
        quotient.push((rexp - dexp, q));
    }
    Ok(SparsePoly::from_terms(quotient))
}

/// numerator / prod_e (1 - x^e); the denominator is a factor multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGF {
    numerator: SparsePoly,
    denominator_factors: Vec<u64>,
}

impl RationalGF {
    pub fn new(numerator: SparsePoly, mut denominator_factors: Vec<u64>) -> Self {
        assert!(
            denominator_factors.iter().all(|&e| e > 0),
            "denominator strides must be positive"
        );
        denominator_factors.sort_unstable();
        RationalGF {
            numerator,
            denominator_factors,
        }
    }

    pub fn from_poly(numerator: SparsePoly) -> Self {
        Self::new(numerator, Vec::new())
    }

    pub fn numerator(&self) -> &SparsePoly {
        &self.numerator
    }

    pub fn denominator_factors(&self) -> &[u64] {
        &self.denominator_factors
    }

    /// The denominator expanded to an explicit polynomial.
    pub fn denominator_poly(&self) -> SparsePoly {
        let mut acc = SparsePoly::one();
        for &e in &self.denominator_factors {
            let factor = &SparsePoly::one() - &SparsePoly::monomial(e, 1);
            acc = &acc * &factor;
        }
        acc
    }

    /// Exact power-series coefficients for degrees 0..=limit. Dividing by
    /// (1 - x^e) is a running sum with stride e.
    pub fn series(&self, limit: u64) -> Vec<BigInt> {
        let mut coeffs = self.numerator.dense(limit);
        for &e in &self.denominator_factors {
            let e = e as usize;
            for t in e..coeffs.len() {
                let (lo, hi) = coeffs.split_at_mut(t);
                hi[0] += &lo[t - e];
            }
        }
        coeffs
    }

    /// Equality as rational functions, decided by cross-multiplication.
    pub fn equivalent(&self, other: &RationalGF) -> bool {
        let lhs = &self.numerator * &other.denominator_poly();
        let rhs = &other.numerator * &self.denominator_poly();
        lhs == rhs
    }
}

/// Series expansion of `gf` to the requested degree.
pub fn series_expand(gf: &RationalGF, limit: u64) -> Vec<BigInt> {
    gf.series(limit)
}

/// F_{=f(sp)} in closed polynomial form:
/// x^(sp) * prod_i (1 + x^(a_i) + ... + x^((d_i - 1) a_i)).
///
/// The expansion has exactly p terms, all with coefficient 1, and degree
/// sp + sum (d_i - 1) a_i. The formula describes the true level set only
/// for s at or above the certified threshold.
pub fn f_eq_genfun(basis: &Basis, s: u64) -> SparsePoly {
    let st = gcd_structure(basis);
    let mut acc = SparsePoly::one();
    for (&a, &d) in basis.generators().iter().zip(&st.d) {
        acc = &acc * &SparsePoly::geometric(a, d);
    }
    let sp = u64::try_from(s as u128 * st.p as u128).expect("s*p exceeds u64");
    acc.shifted(sp)
}

/// F_{>=f(sp)}: the F_{=f(sp)} numerator over one extra factor (1 - x^p).
pub fn f_ge_genfun(basis: &Basis, s: u64) -> RationalGF {
    let st = gcd_structure(basis);
    RationalGF::new(f_eq_genfun(basis, s), vec![st.p])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u64, i64)]) -> SparsePoly {
        SparsePoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn product_of_coset_factors() {
        // (1 + x^3)(1 + x^4 + x^8) enumerates the offsets {0,3,4,7,8,11}
        let prod = poly_mul(&poly(&[(0, 1), (3, 1)]), &poly(&[(0, 1), (4, 1), (8, 1)]));
        assert_eq!(
            prod,
            poly(&[(0, 1), (3, 1), (4, 1), (7, 1), (8, 1), (11, 1)])
        );
    }

    #[test]
    fn multiplication_by_zero() {
        let p = poly(&[(0, 1), (5, -2)]);
        assert!(poly_mul(&p, &SparsePoly::zero()).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let prod = poly_mul(&poly(&[(0, 1), (6, -1)]), &poly(&[(0, 1), (6, 1)]));
        assert_eq!(prod, poly(&[(0, 1), (12, -1)]));
    }

    #[test]
    fn geometric_quotients() {
        let q = poly_exact_div(&poly(&[(0, 1), (6, -1)]), &poly(&[(0, 1), (3, -1)])).unwrap();
        assert_eq!(q, poly(&[(0, 1), (3, 1)]));
        let q = poly_exact_div(&poly(&[(0, 1), (12, -1)]), &poly(&[(0, 1), (4, -1)])).unwrap();
        assert_eq!(q, poly(&[(0, 1), (4, 1), (8, 1)]));
    }

    #[test]
    fn odd_even_mismatch_is_not_divisible() {
        let err = poly_exact_div(&poly(&[(0, 1), (5, -1)]), &poly(&[(0, 1), (2, -1)]));
        assert_eq!(err, Err(Error::NotDivisible { degree: 1 }));
    }

    #[test]
    fn f_eq_for_346_at_s2() {
        let basis = Basis::new(vec![3, 4, 6]).unwrap();
        let f_eq = f_eq_genfun(&basis, 2);
        let expected = poly(&[(0, 1), (3, 1), (4, 1), (7, 1), (8, 1), (11, 1)]).shifted(12);
        assert_eq!(f_eq, expected);
        assert_eq!(f_eq.num_terms(), 6); // p terms
        assert_eq!(f_eq.degree(), Some(23)); // sp + sum (d_i - 1) a_i
        assert!(f_eq.terms().iter().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn geometric_series_expansion() {
        // 1/(1-x) to degree 5
        let gf = RationalGF::new(SparsePoly::one(), vec![1]);
        let series = series_expand(&gf, 5);
        assert!(series.iter().all(|c| c.is_one()));
        assert_eq!(series.len(), 6);
    }

    #[test]
    fn cross_multiplied_equality() {
        // (1 - x^6)/((1-x^2)(1-x^3)) == (1 + x^3)/(1 - x^2) as rational functions
        let lhs = RationalGF::new(poly(&[(0, 1), (6, -1)]), vec![2, 3]);
        let rhs = RationalGF::new(poly(&[(0, 1), (3, 1)]), vec![2]);
        assert!(lhs.equivalent(&rhs));
        let wrong = RationalGF::new(poly(&[(0, 1), (3, 1)]), vec![3]);
        assert!(!lhs.equivalent(&wrong));
    }
}

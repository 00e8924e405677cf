//! Exact quasi-polynomial constituents of f, recovered by interpolation.
//!
//! f agrees with a quasi-polynomial of period m = lcm(a) on all of t >= 0
//! (its generating function 1/prod(1 - x^(a_i)) is a proper rational
//! function, so there is no transient). Each constituent has degree exactly
//! n - 1, so n sample points per residue pin it down; n further points are
//! checked afterwards to catch indexing bugs loudly.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::basis::{gcd_structure, residue_offset, Basis};
use crate::counting::count_table;
use crate::error::{Error, Result};

/// A polynomial with exact rational coefficients, stored dense from the
/// constant term up, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialQ {
    coeffs: Vec<BigRational>,
}

impl PolynomialQ {
    pub fn zero() -> Self {
        PolynomialQ { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolynomialQ { coeffs }
    }

    /// Coefficients from the constant term up.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact evaluation by Horner's rule.
    pub fn evaluate(&self, t: &BigInt) -> BigRational {
        let t = BigRational::from_integer(t.clone());
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &t + c;
        }
        acc
    }

    /// The polynomial p(scale * x + shift).
    pub fn compose_affine(&self, scale: &BigRational, shift: &BigRational) -> PolynomialQ {
        let mut acc: Vec<BigRational> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // acc = acc * (scale x + shift) + c
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (i, ai) in acc.iter().enumerate() {
                next[i + 1] += ai * scale;
                next[i] += ai * shift;
            }
            if next.is_empty() {
                next.push(c.clone());
            } else {
                next[0] += c;
            }
            acc = next;
        }
        PolynomialQ::from_coeffs(acc)
    }
}

impl std::ops::Sub for &PolynomialQ {
    type Output = PolynomialQ;
    fn sub(self, rhs: &PolynomialQ) -> PolynomialQ {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        PolynomialQ::from_coeffs(coeffs)
    }
}

/// Lagrange interpolation through distinct points.
fn lagrange(points: &[(BigInt, BigRational)]) -> PolynomialQ {
    let mut acc = vec![BigRational::zero(); points.len()];
    for (j, (xj, yj)) in points.iter().enumerate() {
        // numerator prod_{l != j} (x - x_l), denominator prod_{l != j} (x_j - x_l)
        let mut num = vec![BigRational::one()];
        let mut den = BigRational::one();
        for (l, (xl, _)) in points.iter().enumerate() {
            if l == j {
                continue;
            }
            let xl = BigRational::from_integer(xl.clone());
            let mut next = vec![BigRational::zero(); num.len() + 1];
            for (i, c) in num.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &xl;
            }
            num = next;
            den *= BigRational::from_integer(xj.clone()) - xl;
        }
        let weight = yj / den;
        for (i, c) in num.into_iter().enumerate() {
            acc[i] += c * &weight;
        }
    }
    PolynomialQ::from_coeffs(acc)
}

/// The full quasi-polynomial: period m and one constituent per residue,
/// indexed by t mod m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    period: u64,
    constituents: Vec<PolynomialQ>,
}

impl QuasiPolynomial {
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn constituents(&self) -> &[PolynomialQ] {
        &self.constituents
    }

    pub fn constituent(&self, residue: u64) -> &PolynomialQ {
        &self.constituents[(residue % self.period) as usize]
    }

    /// Exact value at t; the constituent must produce a nonnegative integer,
    /// anything else is an internal bug surfaced as `ValidationFailure`.
    pub fn evaluate(&self, t: u64) -> Result<BigUint> {
        let value = self.constituent(t % self.period).evaluate(&BigInt::from(t));
        if !value.is_integer() {
            return Err(Error::ValidationFailure {
                detail: format!("constituent value at t = {t} is non-integral: {value}"),
            });
        }
        let value = value.to_integer();
        if value.is_negative() {
            return Err(Error::ValidationFailure {
                detail: format!("constituent value at t = {t} is negative: {value}"),
            });
        }
        Ok(value.to_biguint().expect("checked nonnegative"))
    }
}

/// Recover all m constituents by exact interpolation: fit degree n - 1
/// through t = r + m*j for j = 0..n-1, then validate at j = n..2n-1.
pub fn interpolate_quasipoly(basis: &Basis) -> Result<QuasiPolynomial> {
    let st = gcd_structure(basis);
    let n = basis.len() as u64;
    let m = st.m;
    let limit = u64::try_from(2 * n as u128 * m as u128 - 1).expect("2nm exceeds u64");
    let table = count_table(basis, limit)?;

    let mut constituents = Vec::with_capacity(m as usize);
    for r in 0..m {
        let points: Vec<(BigInt, BigRational)> = (0..n)
            .map(|j| {
                let t = r + m * j;
                let f = BigInt::from(table.get(t).clone());
                (BigInt::from(t), BigRational::from_integer(f))
            })
            .collect();
        let poly = lagrange(&points);
        for j in n..2 * n {
            let t = r + m * j;
            let predicted = poly.evaluate(&BigInt::from(t));
            let actual = BigRational::from_integer(BigInt::from(table.get(t).clone()));
            if predicted != actual {
                return Err(Error::ValidationFailure {
                    detail: format!(
                        "constituent for residue {r} predicts {predicted} at t = {t}, table has {actual}"
                    ),
                });
            }
        }
        constituents.push(poly);
    }

    Ok(QuasiPolynomial {
        period: m,
        constituents,
    })
}

/// Exact value f(t) through the quasi-polynomial.
pub fn qp_evaluate(qp: &QuasiPolynomial, t: u64) -> Result<BigUint> {
    qp.evaluate(t)
}

/// The two leading coefficients every constituent in a residue class mod p
/// must carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTerms {
    /// Coefficient of t^(n-1): always 1/((n-1)! a_1 ... a_n).
    pub leading: BigRational,
    /// Coefficient of t^(n-2); `None` for n = 2, where that slot is the
    /// constant term and is not pinned by the leading-term analysis.
    pub second: Option<BigRational>,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Expected leading coefficients for constituents of the residue class
/// `residue` mod p.
///
/// When every d_i = 1 the second coefficient is sigma/(2 (n-2)! a_1...a_n),
/// independent of the residue. Otherwise write t = s*p + R with R the coset
/// offset of the class; substituting s = (t - R)/p into the two leading
/// terms of f(a'; s) gives the class-dependent second coefficient
/// (sigma' p / 2 - R) / ((n-2)! a'_1...a'_n p^(n-1)).
pub fn expected_leading_terms(basis: &Basis, residue: u64) -> LeadingTerms {
    let st = gcd_structure(basis);
    let n = basis.len() as u64;
    let prod_a: BigInt = basis.generators().iter().map(|&x| BigInt::from(x)).product();

    let leading = BigRational::new(BigInt::one(), factorial(n - 1) * &prod_a);
    if n == 2 {
        return LeadingTerms {
            leading,
            second: None,
        };
    }

    let offset = residue_offset(basis, &st, residue % st.p);
    let prod_reduced: BigInt = st.a_reduced.iter().map(|&x| BigInt::from(x)).product();
    let sigma_reduced: BigInt = st.a_reduced.iter().map(|&x| BigInt::from(x)).sum();
    let p = BigInt::from(st.p);

    let numer = BigRational::new(sigma_reduced * &p, BigInt::from(2))
        - BigRational::from_integer(BigInt::from(offset));
    let denom = BigRational::from_integer(factorial(n - 2) * prod_reduced * p.pow(n as u32 - 1));
    let second = numer / denom;

    LeadingTerms {
        leading,
        second: Some(second),
    }
}

/// A certified index s0 from which f((s+1)p) > f(sp) holds forever.
///
/// `bound` is the coefficient root bound used: every difference constituent
/// is provably positive from `bound` on, and all s < bound were checked
/// explicitly. `violations` lists the failing s below `bound`; s0 is one
/// past the last of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub s0: u64,
    pub bound: u64,
    pub violations: Vec<u64>,
}

/// Certify the eventual strict growth of s -> f(sp).
///
/// Since f(sp) = f(a'; s), the difference q(s) = f(a'; s+1) - f(a'; s) is a
/// quasi-polynomial whose constituents all have positive leading coefficient
/// 1/((n-2)! a'_1...a'_n); the Cauchy bound 1 + max |c_i| / lead then caps
/// every real root, and an explicit scan below the bound makes s0 minimal.
pub fn eventual_positivity_bound(basis: &Basis) -> Result<PositivityCertificate> {
    let st = gcd_structure(basis);
    let reduced = Basis::new(st.a_reduced.clone()).expect("reduced basis is valid");
    let qp = interpolate_quasipoly(&reduced)?;
    let period = qp.period();

    let one = BigRational::one();
    let mut bound = 0u64;
    for rho in 0..period {
        let next = qp.constituent((rho + 1) % period);
        let shifted = next.compose_affine(&one, &one); // C_{rho+1}(s + 1)
        let diff = &shifted - qp.constituent(rho);
        let Some(deg) = diff.degree() else {
            return Err(Error::DegenerateLeading { residue: rho });
        };
        let lead = diff.coeff(deg);
        if !lead.is_positive() {
            return Err(Error::DegenerateLeading { residue: rho });
        }
        if deg == 0 {
            continue; // a positive constant needs no root bound
        }
        let mut max_ratio = BigRational::zero();
        for i in 0..deg {
            let ratio = diff.coeff(i).abs() / &lead;
            if ratio > max_ratio {
                max_ratio = ratio;
            }
        }
        let rho_bound = (BigRational::one() + max_ratio).ceil().to_integer();
        let rho_bound = rho_bound.to_u64().expect("root bound fits u64");
        bound = bound.max(rho_bound);
    }

    let mut violations = Vec::new();
    for s in 0..bound {
        let here = qp.evaluate(s)?;
        let next = qp.evaluate(s + 1)?;
        if next <= here {
            violations.push(s);
        }
    }
    let s0 = violations.last().map_or(0, |&s| s + 1);

    Ok(PositivityCertificate {
        s0,
        bound,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(a: &[u64]) -> Basis {
        Basis::new(a.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn constituent_346_residue_0() {
        let qp = interpolate_quasipoly(&basis(&[3, 4, 6])).unwrap();
        assert_eq!(qp.period(), 12);
        // t^2/144 + t/6 + 1
        assert_eq!(
            qp.constituent(0).coeffs(),
            &[rat(1, 1), rat(1, 6), rat(1, 144)]
        );
    }

    #[test]
    fn constituent_of_all_ones() {
        let qp = interpolate_quasipoly(&basis(&[1, 1, 1])).unwrap();
        assert_eq!(qp.period(), 1);
        // (t + 2)(t + 1)/2
        assert_eq!(
            qp.constituent(0).coeffs(),
            &[rat(1, 1), rat(3, 2), rat(1, 2)]
        );
    }

    #[test]
    fn constituent_23_residue_0() {
        let qp = interpolate_quasipoly(&basis(&[2, 3])).unwrap();
        assert_eq!(qp.constituent(0).coeffs(), &[rat(1, 1), rat(1, 6)]);
    }

    #[test]
    fn evaluation_matches_reference_values() {
        let qp = interpolate_quasipoly(&basis(&[3, 4, 6])).unwrap();
        assert_eq!(qp.evaluate(12).unwrap(), BigUint::from(4u32));
        assert_eq!(qp.evaluate(0).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn leading_terms_all_d_one() {
        // (8,3,5): lead 1/240, second 16/240 = 1/15 regardless of residue
        let lt = expected_leading_terms(&basis(&[8, 3, 5]), 0);
        assert_eq!(lt.leading, rat(1, 240));
        assert_eq!(lt.second, Some(rat(1, 15)));
    }

    #[test]
    fn leading_terms_346() {
        let lt = expected_leading_terms(&basis(&[3, 4, 6]), 0);
        assert_eq!(lt.leading, rat(1, 144));
        assert_eq!(lt.second, Some(rat(1, 6)));
        // residue 1 mod 6 has coset offset 7: (sigma' p/2 - 7)/(1! * 2 * 36)
        let lt = expected_leading_terms(&basis(&[3, 4, 6]), 1);
        assert_eq!(lt.second, Some(rat(5, 72)));
    }

    #[test]
    fn leading_terms_pair_has_no_second() {
        let lt = expected_leading_terms(&basis(&[2, 3]), 0);
        assert_eq!(lt.leading, rat(1, 6));
        assert_eq!(lt.second, None);
    }

    #[test]
    fn positivity_346_is_everywhere_increasing() {
        let cert = eventual_positivity_bound(&basis(&[3, 4, 6])).unwrap();
        assert_eq!(cert.s0, 0);
        assert!(cert.violations.is_empty());
    }

    #[test]
    fn positivity_all_ones() {
        let cert = eventual_positivity_bound(&basis(&[1, 1, 1, 1])).unwrap();
        assert_eq!(cert.s0, 0);
    }

    #[test]
    fn positivity_pair_is_constant_difference() {
        let cert = eventual_positivity_bound(&basis(&[5, 8])).unwrap();
        assert_eq!(cert.s0, 0);
        assert_eq!(cert.bound, 0);
    }
}

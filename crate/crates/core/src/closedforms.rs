//! Closed-form level-set bundles, the certified threshold where they become
//! exact, and the n = 2 / extremal-family / asymptotic suites.
//!
//! For s past a threshold, the set {t : f(t) = f(sp)} is exactly the coset
//! {sp + sum a_i b_i : 0 <= b_i < d_i}, and every level-set statistic has a
//! closed form. The threshold s* certified here is sound:
//!
//! - s* >= s_incr, the index from which s -> f(sp) increases strictly
//!   forever (so equal values cannot come from two different s >= s_incr);
//! - f(s*p) exceeds both the largest value of f below t0 (so every t with
//!   f(t) = f(sp) decomposes with s' >= 0) and the largest f(s'p) with
//!   s' < s_incr (so equal values cannot come from the pre-monotone range).
//!
//! It is certified-sound but not proven minimal; the certificate also
//! records the empirically minimal s from which all checks pass.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::basis::{gcd_structure, Basis, GcdStructure};
use crate::counting::{count_table, representation_counts, CountTable};
use crate::error::{Error, Result};
use crate::genfun::{f_eq_genfun, f_ge_genfun, poly_exact_div, RationalGF, SparsePoly};
use crate::levelsets::{
    cumulative_from_table, horizon_in_table, indicator_poly, level_set_from_table,
};
use crate::quasipoly::eventual_positivity_bound;

fn fit64(x: u128, what: &str) -> u64 {
    u64::try_from(x).unwrap_or_else(|_| panic!("{what} exceeds u64"))
}

/// All eight closed-form quantities attached to one s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusBundle {
    pub s: u64,
    /// k = f(sp), computed through the reduced basis.
    pub k: BigUint,
    /// g_{=k} = g_{<=k} = sp + sum (d_i - 1) a_i
    pub g_eq_le: u64,
    /// h_{=k} = h_{>=k} = sp
    pub h_eq_ge: u64,
    /// c_{=k} = p
    pub c_eq: u64,
    /// c_{<=k} = sp + C1
    pub c_le: BigInt,
    /// s_{=k} = s p^2 + sum p a_i (d_i - 1) / 2
    pub s_eq: BigUint,
    /// s_{<=k} = (sp)^2/2 + ((p + sum a_i (d_i - 1))/2) sp + C2
    pub s_le: BigInt,
    pub f_eq: SparsePoly,
    pub f_ge: RationalGF,
}

/// The certified threshold and the constants C1, C2 extracted at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdCertificate {
    /// Index from which s -> f(sp) is strictly increasing forever.
    pub s_incr: u64,
    /// max f on [0, t0).
    pub f_small_max: BigUint,
    /// max f(s'p) over s' < s_incr.
    pub pre_incr_max: BigUint,
    /// The certified threshold: all eight closed forms are exact for
    /// every s >= s_star.
    pub s_star: u64,
    /// Smallest s from which all checks happen to pass (not certified
    /// below s_star, recorded for transparency).
    pub s_min_empirical: u64,
    pub c1: BigInt,
    pub c2: BigRational,
    /// Number of indices past s_star that were re-verified against the
    /// oracle.
    pub window: u64,
}

fn s_eq_formula(st: &GcdStructure, basis: &Basis, s: u64) -> BigUint {
    let p = BigUint::from(st.p);
    let mut total = BigUint::from(s) * &p * &p;
    for (&a, &d) in basis.generators().iter().zip(&st.d) {
        // p * a * (d - 1) is even: p contains d and d(d-1) is even
        let term = &p * BigUint::from(a) * BigUint::from(d - 1);
        total += term / BigUint::from(2u32);
    }
    total
}

fn s_le_formula(st: &GcdStructure, s: u64, c2: &BigRational) -> BigInt {
    let sp = BigInt::from(s) * BigInt::from(st.p);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let value = &half * BigRational::from_integer(&sp * &sp)
        + &half
            * BigRational::from_integer(BigInt::from(st.p) + BigInt::from(st.t0))
            * BigRational::from_integer(sp)
        + c2;
    debug_assert!(value.is_integer(), "s_le formula must be integral");
    value.to_integer()
}

fn bundle_from_parts(
    basis: &Basis,
    st: &GcdStructure,
    s: u64,
    k: BigUint,
    c1: &BigInt,
    c2: &BigRational,
) -> FrobeniusBundle {
    let sp = fit64(s as u128 * st.p as u128, "s*p");
    FrobeniusBundle {
        s,
        k,
        g_eq_le: fit64(sp as u128 + st.t0 as u128, "g"),
        h_eq_ge: sp,
        c_eq: st.p,
        c_le: BigInt::from(sp) + c1,
        s_eq: s_eq_formula(st, basis, s),
        s_le: s_le_formula(st, s, c2),
        f_eq: f_eq_genfun(basis, s),
        f_ge: f_ge_genfun(basis, s),
    }
}

/// Evaluate all eight closed forms at s without threshold gating.
///
/// Below `cert.s_star` the outputs are formula arithmetic only and need not
/// match the true level-set statistics; [`theoremg_bundle`] is the gated
/// entry point.
pub fn theoremg_formulas(basis: &Basis, s: u64, cert: &ThresholdCertificate) -> FrobeniusBundle {
    let st = gcd_structure(basis);
    let k = f_of_sp(&st, s);
    bundle_from_parts(basis, &st, s, k, &cert.c1, &cert.c2)
}

/// The closed-form bundle for s, guaranteed to equal the oracle.
///
/// Fails with `BelowThreshold` for s below the certificate's s*; callers
/// must use the level-set oracle there instead.
pub fn theoremg_bundle(
    basis: &Basis,
    s: u64,
    cert: &ThresholdCertificate,
) -> Result<FrobeniusBundle> {
    if s < cert.s_star {
        return Err(Error::BelowThreshold {
            s,
            s_star: cert.s_star,
        });
    }
    Ok(theoremg_formulas(basis, s, cert))
}

/// f(sp) through the reduction f(a; sp) = f(a'; s).
fn f_of_sp(st: &GcdStructure, s: u64) -> BigUint {
    let counts = representation_counts(&st.a_reduced, s).expect("reduced table within cap");
    counts[s as usize].clone()
}

/// Compare the eight closed forms at s against level-set truth read from
/// `table`. Returns a description of the first mismatch.
fn check_bundle_against_table(
    basis: &Basis,
    st: &GcdStructure,
    table: &CountTable,
    s: u64,
    k: &BigUint,
    c1: &BigInt,
    c2: &BigRational,
) -> std::result::Result<(), String> {
    let bundle = bundle_from_parts(basis, st, s, k.clone(), c1, c2);
    let ls = level_set_from_table(table, k)
        .ok_or_else(|| format!("table too short for the level set of s = {s}"))?;
    let cum = cumulative_from_table(table, k)
        .ok_or_else(|| format!("table too short for cumulative stats of s = {s}"))?;

    if ls.g_eq != Some(bundle.g_eq_le) || cum.g_le != Some(bundle.g_eq_le) {
        return Err(format!(
            "s = {s}: g mismatch (formula {}, oracle g_eq {:?}, g_le {:?})",
            bundle.g_eq_le, ls.g_eq, cum.g_le
        ));
    }
    if ls.h_eq != Some(bundle.h_eq_ge) || cum.h_ge != bundle.h_eq_ge {
        return Err(format!(
            "s = {s}: h mismatch (formula {}, oracle h_eq {:?}, h_ge {})",
            bundle.h_eq_ge, ls.h_eq, cum.h_ge
        ));
    }
    if ls.c_eq != bundle.c_eq {
        return Err(format!(
            "s = {s}: c_eq mismatch (formula {}, oracle {})",
            bundle.c_eq, ls.c_eq
        ));
    }
    if BigInt::from(cum.c_le) != bundle.c_le {
        return Err(format!(
            "s = {s}: c_le mismatch (formula {}, oracle {})",
            bundle.c_le, cum.c_le
        ));
    }
    if ls.s_eq != bundle.s_eq {
        return Err(format!(
            "s = {s}: s_eq mismatch (formula {}, oracle {})",
            bundle.s_eq, ls.s_eq
        ));
    }
    if BigInt::from(cum.s_le.clone()) != bundle.s_le {
        return Err(format!(
            "s = {s}: s_le mismatch (formula {}, oracle {})",
            bundle.s_le, cum.s_le
        ));
    }
    if bundle.f_eq != indicator_poly(&ls) {
        return Err(format!("s = {s}: F_eq does not equal the level-set indicator"));
    }
    let horizon = horizon_in_table(table, k).expect("checked above");
    let series = bundle.f_ge.series(horizon);
    for (t, coeff) in series.iter().enumerate() {
        let member = table.counts()[t] >= *k;
        let expected = if member { BigInt::one() } else { BigInt::zero() };
        if *coeff != expected {
            return Err(format!(
                "s = {s}: F_ge series disagrees with membership at t = {t}"
            ));
        }
    }
    Ok(())
}

/// Detect the certified threshold s*, extract C1 and C2 at it, and verify
/// oracle-vs-formula equality of all eight quantities for every s in
/// [s*, s* + window]. `window` defaults to max(1, 2m/p).
pub fn detect_threshold(basis: &Basis, window: Option<u64>) -> Result<ThresholdCertificate> {
    let st = gcd_structure(basis);
    let window = window.unwrap_or_else(|| (2 * st.m / st.p).max(1));

    let positivity = eventual_positivity_bound(basis)?;
    let s_incr = positivity.s0;

    let f_small_max = if st.t0 == 0 {
        BigUint::zero()
    } else {
        representation_counts(basis.generators(), st.t0 - 1)?
            .into_iter()
            .max()
            .expect("nonempty table")
    };

    // values f(sp) = f(a'; s), grown on demand
    let mut red_limit = (s_incr + window + 16).max(64);
    let mut red = representation_counts(&st.a_reduced, red_limit)?;

    let pre_incr_max = red[..s_incr as usize]
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(BigUint::zero);
    let gate = f_small_max.clone().max(pre_incr_max.clone());

    let mut s_star = s_incr;
    while red[s_star as usize] <= gate {
        s_star += 1;
        if s_star == red_limit {
            red_limit *= 2;
            red = representation_counts(&st.a_reduced, red_limit)?;
        }
    }

    let needed = s_star + window;
    if needed >= red_limit {
        red = representation_counts(&st.a_reduced, needed)?;
    }

    // one oracle table covering the largest verified k
    let k_max = red[needed as usize].clone();
    let horizon = crate::levelsets::certified_horizon(basis, &k_max)?;
    let table = count_table(basis, horizon)?;

    // constants at s_star
    let k_star = &red[s_star as usize];
    let sp_star = BigInt::from(s_star) * BigInt::from(st.p);
    let cum = cumulative_from_table(&table, k_star)
        .ok_or_else(|| Error::VerificationFailure {
            detail: "oracle table too short at s_star".into(),
        })?;
    let c1 = BigInt::from(cum.c_le) - &sp_star;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c2 = BigRational::from_integer(BigInt::from(cum.s_le))
        - &half * BigRational::from_integer(&sp_star * &sp_star)
        - &half
            * BigRational::from_integer(BigInt::from(st.p) + BigInt::from(st.t0))
            * BigRational::from_integer(sp_star);

    for s in s_star..=s_star + window {
        check_bundle_against_table(basis, &st, &table, s, &red[s as usize], &c1, &c2)
            .map_err(|detail| Error::VerificationFailure { detail })?;
    }

    let mut s_min_empirical = s_star;
    while s_min_empirical > 0 {
        let s = s_min_empirical - 1;
        if check_bundle_against_table(basis, &st, &table, s, &red[s as usize], &c1, &c2).is_err() {
            break;
        }
        s_min_empirical = s;
    }

    Ok(ThresholdCertificate {
        s_incr,
        f_small_max,
        pre_incr_max,
        s_star,
        s_min_empirical,
        c1,
        c2,
        window,
    })
}

/// Locate k in the spectrum: the s with f(sp) <= k < f((s+1)p), and whether
/// k is attained exactly. Trivial k (not of the form f(sp)) inherit their
/// <=-statistics from that s; the first t with f(t) >= k is then (s+1)p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDispatch {
    pub k: BigUint,
    pub s: u64,
    /// true iff k = f(sp) exactly; false means k is trivial.
    pub exact: bool,
}

/// Resolve a k >= f(s* p) to its spectrum position. Smaller k are not
/// certified and route to the level-set oracle instead (`BelowThreshold`,
/// with the `s` field carrying s*).
pub fn resolve_k(basis: &Basis, k: &BigUint, cert: &ThresholdCertificate) -> Result<KDispatch> {
    let st = gcd_structure(basis);
    let mut limit = (cert.s_star + 64).max(64);
    let mut red = representation_counts(&st.a_reduced, limit)?;
    if *k < red[cert.s_star as usize] {
        return Err(Error::BelowThreshold {
            s: cert.s_star,
            s_star: cert.s_star,
        });
    }
    let mut s = cert.s_star;
    loop {
        if s + 1 >= limit {
            limit *= 2;
            red = representation_counts(&st.a_reduced, limit)?;
        }
        if red[(s + 1) as usize] > *k {
            return Ok(KDispatch {
                k: k.clone(),
                s,
                exact: red[s as usize] == *k,
            });
        }
        s += 1;
    }
}

/// The n = 2 closed-form suite for coprime (a1, a2).
///
/// `g_eq_le` and `h_eq` are `None` exactly when they are undefined: k = 0
/// with 1 among the generators leaves no non-representable t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropTwoBundle {
    pub a1: u64,
    pub a2: u64,
    pub k: u64,
    pub g_eq_le: Option<u64>,
    pub h_eq: Option<u64>,
    pub h_ge: u64,
    pub c_eq: BigUint,
    pub c_le: BigUint,
    pub s_eq: BigUint,
    pub s_le: BigUint,
    pub f_eq: SparsePoly,
    pub f_ge: RationalGF,
}

fn one_minus_x_pow(e: u64) -> SparsePoly {
    &SparsePoly::one() - &SparsePoly::monomial(e, 1)
}

/// Evaluate the exact n = 2 formulas: Sylvester's g, the k-th level-set
/// statistics, Brown-Shiue's s_{=0}, and the generating functions.
pub fn prop_two(a1: u64, a2: u64, k: u64) -> Result<PropTwoBundle> {
    use num_integer::Integer;
    if a1 == 0 {
        return Err(Error::NonPositiveEntry { index: 0, value: 0 });
    }
    if a2 == 0 {
        return Err(Error::NonPositiveEntry { index: 1, value: 0 });
    }
    let gcd = a1.gcd(&a2);
    if gcd != 1 {
        return Err(Error::NotCoprime {
            a: vec![a1, a2],
            gcd,
        });
    }

    let prod = BigInt::from(a1) * BigInt::from(a2);
    let sigma = BigInt::from(a1) + BigInt::from(a2);
    let c_eq0: BigInt = (BigInt::from(a1) - 1) * (BigInt::from(a2) - 1) / 2;
    let s_eq0: BigInt = (BigInt::from(a1) - 1)
        * (BigInt::from(a2) - 1)
        * (BigInt::from(2) * &prod - &sigma - 1)
        / 12;
    let prod_u64 = fit64(a1 as u128 * a2 as u128, "a1*a2");

    let to_biguint = |x: BigInt, what: &str| -> BigUint {
        x.to_biguint().unwrap_or_else(|| panic!("{what} is negative"))
    };

    if k == 0 {
        let g = &prod - &sigma;
        let g_eq_le = g.to_u64(); // negative (no gaps) maps to None
        let degenerate = a1 == 1 || a2 == 1;
        // F_{=0} = 1/(1-x) - (1 - x^P)/((1-x^{a1})(1-x^{a2})), brought over
        // the common denominator and divided out exactly.
        let den = &(&one_minus_x_pow(1) * &one_minus_x_pow(a1)) * &one_minus_x_pow(a2);
        let num = &(&one_minus_x_pow(a1) * &one_minus_x_pow(a2))
            - &(&one_minus_x_pow(1) * &one_minus_x_pow(prod_u64));
        let f_eq = poly_exact_div(&num, &den).expect("gap polynomial divides exactly");
        return Ok(PropTwoBundle {
            a1,
            a2,
            k,
            g_eq_le,
            h_eq: if degenerate { None } else { Some(1) },
            h_ge: 0,
            c_eq: to_biguint(c_eq0.clone(), "c_eq0"),
            c_le: to_biguint(c_eq0, "c_le"),
            s_eq: to_biguint(s_eq0.clone(), "s_eq0"),
            s_le: to_biguint(s_eq0, "s_le"),
            f_eq,
            f_ge: RationalGF::new(SparsePoly::one(), vec![1]),
        });
    }

    let kb = BigInt::from(k);
    let g: BigInt = (&kb + BigInt::one()) * &prod - &sigma;
    let h: BigInt = (&kb - BigInt::one()) * &prod;
    let c_le = &kb * &prod + &c_eq0;
    let s_eq = &prod * (BigInt::from(2) * &prod * &kb - &sigma) / 2;
    let s_le = {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let v = &half * BigRational::from_integer(&prod * &prod * &kb * &kb)
            + &half * BigRational::from_integer(&prod * (&prod - &sigma) * &kb)
            + BigRational::from_integer(s_eq0);
        debug_assert!(v.is_integer(), "s_le must be integral");
        v.to_integer()
    };

    let shift = fit64((k - 1) as u128 * prod_u64 as u128, "(k-1)*a1*a2");
    let num = &one_minus_x_pow(prod_u64) * &one_minus_x_pow(prod_u64);
    let den = &one_minus_x_pow(a1) * &one_minus_x_pow(a2);
    let f_eq = poly_exact_div(&num, &den)
        .expect("(1-x^P)^2 divides exactly")
        .shifted(shift);
    let f_ge_num = &SparsePoly::monomial(shift, 1)
        - &SparsePoly::monomial(fit64(k as u128 * prod_u64 as u128, "k*a1*a2"), 1);

    let g = g.to_u64().expect("g fits u64 for k >= 1");
    let h = h.to_u64().expect("h fits u64 for k >= 1");
    Ok(PropTwoBundle {
        a1,
        a2,
        k,
        g_eq_le: Some(g),
        h_eq: Some(h),
        h_ge: h,
        c_eq: BigUint::from(prod_u64),
        c_le: to_biguint(c_le, "c_le"),
        s_eq: to_biguint(s_eq, "s_eq"),
        s_le: to_biguint(s_le, "s_le"),
        f_eq,
        f_ge: RationalGF::new(f_ge_num, vec![a1, a2]),
    })
}

/// The extremal-family suite: pairwise coprime d_1..d_n with
/// a_i = prod_{j != i} d_j. The only nontrivial k beyond 0 are the
/// binomials C(s + n - 1, n - 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalBundle {
    pub d: Vec<u64>,
    /// The constructed basis a_i = prod_{j != i} d_j.
    pub basis: Basis,
    pub s: u64,
    /// k = C(s + n - 1, n - 1) = f(sp).
    pub k: BigUint,
    /// (s + n) p - sigma
    pub g_eq_le: u64,
    pub h_eq_ge: u64,
    pub c_eq: u64,
    /// (s + 1) p + ((n-1)p - sigma + 1)/2
    pub c_le: BigUint,
    /// p ((2s + n) p - sigma) / 2
    pub s_eq: BigUint,
    pub f_eq: SparsePoly,
    pub f_ge: RationalGF,
    /// Frobenius number (n-1)p - sigma; `None` when every integer is
    /// representable.
    pub g_eq0: Option<u64>,
    /// Gap count ((n-1)p - sigma + 1)/2.
    pub c_eq0: BigUint,
}

fn binomial(n: u64, k: u64) -> BigUint {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Evaluate the extremal-family formulas for the given d vector and s.
pub fn extremal_bundle(d: &[u64], s: u64) -> Result<ExtremalBundle> {
    use num_integer::Integer;
    if d.len() < 2 {
        return Err(Error::TooFewElements { count: d.len() });
    }
    if let Some(index) = d.iter().position(|&x| x == 0) {
        return Err(Error::NonPositiveEntry { index, value: 0 });
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i].gcd(&d[j]) != 1 {
                return Err(Error::NotPairwiseCoprime { d: d.to_vec() });
            }
        }
    }

    let n = d.len() as u64;
    let a: Vec<u64> = (0..d.len())
        .map(|i| {
            fit64(
                d.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &x)| x as u128)
                    .product(),
                "a_i",
            )
        })
        .collect();
    let basis = Basis::new(a.clone()).expect("pairwise coprime d gives a valid basis");
    debug_assert_eq!(gcd_structure(&basis).d, d, "constructed basis must have d as its gcd skeleton");

    let p = fit64(d.iter().map(|&x| x as u128).product(), "p");
    let sigma = fit64(a.iter().map(|&x| x as u128).sum(), "sigma");
    let sp = fit64(s as u128 * p as u128, "s*p");

    let gaps_end = (n - 1) as i128 * p as i128 - sigma as i128; // Tripathi's g_{=0}, -1 when gapless
    debug_assert!(gaps_end >= -1);
    let c_eq0 = BigUint::from(((gaps_end + 1) / 2) as u128);

    let c_le = BigUint::from(s + 1) * BigUint::from(p) + &c_eq0;
    let s_eq = {
        let v: BigInt = BigInt::from(p) * ((BigInt::from(2) * s + n) * p - sigma);
        debug_assert!((&v % BigInt::from(2)).is_zero());
        (v / BigInt::from(2))
            .to_biguint()
            .expect("s_eq is nonnegative")
    };

    Ok(ExtremalBundle {
        d: d.to_vec(),
        s,
        k: binomial(s + n - 1, n - 1),
        g_eq_le: fit64((s + n) as u128 * p as u128 - sigma as u128, "g"),
        h_eq_ge: sp,
        c_eq: p,
        c_le,
        s_eq,
        f_eq: f_eq_genfun(&basis, s),
        f_ge: f_ge_genfun(&basis, s),
        g_eq0: u64::try_from(gaps_end).ok(),
        c_eq0,
        basis,
    })
}

/// Which quantity an asymptotic estimate is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticQuantity {
    GEq,
    GLe,
    /// h_{=k} and h_{>=k} share one asymptotic.
    H,
    CEq,
    CLe,
    SEq,
    SLe,
}

/// Floating-point asymptotics in k, advisory only. The base quantity is
/// ((n-1)! a_1...a_n k)^(1/(n-1)); c_{=k} tends to p instead, s_{=k} to
/// p times the base, and s_{<=k} to half the base squared.
pub fn asymptotic_estimate(basis: &Basis, k: &BigUint, quantity: AsymptoticQuantity) -> f64 {
    let n = basis.len() as u64;
    let mut arg = k.to_f64().unwrap_or(f64::INFINITY);
    for &a in basis.generators() {
        arg *= a as f64;
    }
    for i in 2..n {
        arg *= i as f64;
    }
    let base = arg.powf(1.0 / (n as f64 - 1.0));
    let p = gcd_structure(basis).p as f64;
    match quantity {
        AsymptoticQuantity::GEq
        | AsymptoticQuantity::GLe
        | AsymptoticQuantity::H
        | AsymptoticQuantity::CLe => base,
        AsymptoticQuantity::CEq => p,
        AsymptoticQuantity::SEq => p * base,
        AsymptoticQuantity::SLe => 0.5 * base * base,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(a: &[u64]) -> Basis {
        Basis::new(a.to_vec()).unwrap()
    }

    #[test]
    fn threshold_of_346() {
        let cert = detect_threshold(&basis(&[3, 4, 6]), None).unwrap();
        assert_eq!(cert.s_incr, 0);
        assert_eq!(cert.f_small_max, BigUint::from(2u32));
        assert_eq!(cert.s_star, 2);
        assert_eq!(cert.c1, BigInt::from(9));
        assert_eq!(cert.c2, BigRational::from_integer(BigInt::from(41)));
    }

    #[test]
    fn threshold_of_23_is_conservative() {
        let cert = detect_threshold(&basis(&[2, 3]), None).unwrap();
        assert_eq!(cert.s_star, 2);
        // the formulas happen to hold from s = 0 already
        assert_eq!(cert.s_min_empirical, 0);
    }

    #[test]
    fn bundle_346_at_s2() {
        let b = basis(&[3, 4, 6]);
        let cert = detect_threshold(&b, None).unwrap();
        let bundle = theoremg_bundle(&b, 2, &cert).unwrap();
        assert_eq!(bundle.k, BigUint::from(4u32));
        assert_eq!(bundle.g_eq_le, 23);
        assert_eq!(bundle.h_eq_ge, 12);
        assert_eq!(bundle.c_eq, 6);
        assert_eq!(bundle.c_le, BigInt::from(21));
        assert_eq!(bundle.s_eq, BigUint::from(105u32));
        assert_eq!(bundle.s_le, BigInt::from(215));
    }

    #[test]
    fn below_threshold_is_gated() {
        let b = basis(&[3, 4, 6]);
        let cert = detect_threshold(&b, None).unwrap();
        assert_eq!(
            theoremg_bundle(&b, 1, &cert),
            Err(Error::BelowThreshold { s: 1, s_star: 2 })
        );
    }

    #[test]
    fn resolve_trivial_k() {
        let b = basis(&[3, 4, 6]);
        let cert = detect_threshold(&b, None).unwrap();
        // f(12) = 4 <= 5 < f(18) = 6, and 5 is trivial
        let dispatch = resolve_k(&b, &BigUint::from(5u32), &cert).unwrap();
        assert_eq!(dispatch.s, 2);
        assert!(!dispatch.exact);
        let dispatch = resolve_k(&b, &BigUint::from(6u32), &cert).unwrap();
        assert_eq!(dispatch.s, 3);
        assert!(dispatch.exact);
    }

    #[test]
    fn prop_two_3_5() {
        let bundle = prop_two(3, 5, 1).unwrap();
        assert_eq!(bundle.g_eq_le, Some(22));
        assert_eq!(bundle.h_eq, Some(0));
        assert_eq!(bundle.h_ge, 0);
        assert_eq!(bundle.c_eq, BigUint::from(15u32));
        assert_eq!(bundle.s_eq, BigUint::from(165u32));

        let zero = prop_two(3, 5, 0).unwrap();
        assert_eq!(zero.g_eq_le, Some(7));
        assert_eq!(zero.c_eq, BigUint::from(4u32));
        assert_eq!(zero.s_eq, BigUint::from(14u32));
        assert_eq!(zero.h_eq, Some(1));
    }

    #[test]
    fn prop_two_with_unit_generator() {
        let bundle = prop_two(1, 7, 0).unwrap();
        assert_eq!(bundle.h_eq, None);
        assert_eq!(bundle.g_eq_le, None);
        assert_eq!(bundle.c_eq, BigUint::zero());
        assert!(bundle.f_eq.is_zero());
    }

    #[test]
    fn prop_two_rejects_common_factor() {
        assert!(matches!(
            prop_two(4, 6, 1),
            Err(Error::NotCoprime { gcd: 2, .. })
        ));
    }

    #[test]
    fn extremal_2_3_5_at_s1() {
        let bundle = extremal_bundle(&[2, 3, 5], 1).unwrap();
        assert_eq!(bundle.basis.generators(), &[15, 10, 6]);
        assert_eq!(bundle.k, BigUint::from(3u32));
        assert_eq!(bundle.g_eq_le, 89);
        assert_eq!(bundle.h_eq_ge, 30);
        assert_eq!(bundle.c_eq, 30);
        assert_eq!(bundle.s_eq, BigUint::from(1785u32));
        assert_eq!(bundle.g_eq0, Some(29));
        assert_eq!(bundle.c_eq0, BigUint::from(15u32));
    }

    #[test]
    fn extremal_pair_reduces_to_prop_two() {
        // n = 2 with d = (a2, a1) and k = s + 1
        let s = 3u64;
        let ext = extremal_bundle(&[5, 3], s).unwrap();
        let two = prop_two(3, 5, s + 1).unwrap();
        assert_eq!(Some(ext.g_eq_le), two.g_eq_le);
        assert_eq!(Some(ext.h_eq_ge), two.h_eq);
        assert_eq!(BigUint::from(ext.c_eq), two.c_eq);
        assert_eq!(ext.s_eq, two.s_eq);
        assert!(ext.f_ge.equivalent(&two.f_ge));
        assert_eq!(ext.k, BigUint::from(s + 1));
    }

    #[test]
    fn extremal_rejects_common_factor() {
        assert!(matches!(
            extremal_bundle(&[2, 4], 0),
            Err(Error::NotPairwiseCoprime { .. })
        ));
    }

    #[test]
    fn asymptotics_346() {
        let b = basis(&[3, 4, 6]);
        let k = BigUint::from(4u32);
        let g = asymptotic_estimate(&b, &k, AsymptoticQuantity::GLe);
        assert!((g - 24.0).abs() < 1e-9);
        let c = asymptotic_estimate(&b, &k, AsymptoticQuantity::CEq);
        assert!((c - 6.0).abs() < 1e-9);
        let sle = asymptotic_estimate(&b, &k, AsymptoticQuantity::SLe);
        assert!((sle - 288.0).abs() < 1e-9);
    }
}

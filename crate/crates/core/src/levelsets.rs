//! Exact level-set statistics with certified finite enumeration horizons.
//!
//! The recursion f(t) - f(t - a_i) = f(a_{-i}; t) >= 0 makes f nondecreasing
//! along every residue class mod a_i. So once f exceeds k on w = min(a_i)
//! consecutive points, it exceeds k everywhere beyond that window: every
//! later t sits above the window element in its own residue class. That
//! turns "sufficiently large" into a finite, checkable scan bound.

use num_bigint::{BigInt, BigUint};

use crate::basis::{gcd_structure, Basis};
use crate::counting::{cell_cap, count_table_capped, CountTable};
use crate::error::{Error, Result};
use crate::genfun::SparsePoly;

/// The set {t : f(t) = k} together with its max/min/size/sum. The optional
/// fields are absent exactly when the set is empty (k is "trivial").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    pub k: BigUint,
    pub members: Vec<u64>,
    pub g_eq: Option<u64>,
    pub h_eq: Option<u64>,
    pub c_eq: u64,
    pub s_eq: BigUint,
}

/// Aggregates over {t : f(t) <= k} and the first-hit threshold of k.
///
/// `g_le` is `None` only when no t satisfies f(t) <= k, which happens
/// exactly for k = 0 on a basis containing 1 (then f is never zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeStats {
    pub k: BigUint,
    pub g_le: Option<u64>,
    pub h_ge: u64,
    pub c_le: u64,
    pub s_le: BigUint,
}

/// Smallest T in the table with f(t) > k on the whole window
/// [T - w + 1, T], w = min generator; `None` if the table is too short.
pub fn horizon_in_table(table: &CountTable, k: &BigUint) -> Option<u64> {
    let w = table.basis().min_generator();
    let mut run = 0u64;
    for (t, c) in table.counts().iter().enumerate() {
        if c > k {
            run += 1;
            if run == w {
                return Some(t as u64);
            }
        } else {
            run = 0;
        }
    }
    None
}

fn initial_guess(basis: &Basis, k: &BigUint) -> u64 {
    use num_traits::ToPrimitive;
    let n = basis.len() as u64;
    let mut arg = 1f64;
    for &a in basis.generators() {
        arg *= a as f64;
    }
    for i in 2..n {
        arg *= i as f64;
    }
    arg *= k.to_f64().unwrap_or(f64::MAX) + 1.0;
    let base = arg.powf(1.0 / (n as f64 - 1.0));
    let guess = if base.is_finite() { 2.0 * base } else { f64::MAX };
    (guess as u64)
        .saturating_add(4 * basis.max_generator())
        .saturating_add(64)
}

/// Build a table just large enough to certify the horizon for k.
fn grown_table(basis: &Basis, k: &BigUint) -> Result<(CountTable, u64)> {
    let cap = cell_cap();
    let max_limit = cap - 1;
    let mut limit = initial_guess(basis, k).min(max_limit);
    loop {
        let table = count_table_capped(basis, limit, cap)?;
        if let Some(horizon) = horizon_in_table(&table, k) {
            return Ok((table, horizon));
        }
        if limit == max_limit {
            return Err(Error::ResourceLimit { cells: cap, cap });
        }
        limit = limit.saturating_mul(2).min(max_limit);
    }
}

/// The smallest T such that f(t) > k on the window of min(a_i) consecutive
/// values ending at T; f(t') > k is then guaranteed for every t' > T - w.
pub fn certified_horizon(basis: &Basis, k: &BigUint) -> Result<u64> {
    grown_table(basis, k).map(|(_, horizon)| horizon)
}

fn scan_level_set(table: &CountTable, k: &BigUint, horizon: u64) -> LevelSet {
    let mut members = Vec::new();
    let mut sum = 0u128;
    for (t, c) in table.counts().iter().enumerate().take(horizon as usize + 1) {
        if c == k {
            members.push(t as u64);
            sum += t as u128;
        }
    }
    LevelSet {
        k: k.clone(),
        g_eq: members.last().copied(),
        h_eq: members.first().copied(),
        c_eq: members.len() as u64,
        s_eq: BigUint::from(sum),
        members,
    }
}

fn scan_cumulative(table: &CountTable, k: &BigUint, horizon: u64) -> CumulativeStats {
    let mut g_le = None;
    let mut h_ge = None;
    let mut c_le = 0u64;
    let mut s_le = 0u128;
    for (t, c) in table.counts().iter().enumerate().take(horizon as usize + 1) {
        if c <= k {
            g_le = Some(t as u64);
            c_le += 1;
            s_le += t as u128;
        }
        if h_ge.is_none() && c >= k {
            h_ge = Some(t as u64);
        }
    }
    CumulativeStats {
        k: k.clone(),
        g_le,
        h_ge: h_ge.expect("f exceeds k inside the certified window"),
        c_le,
        s_le: BigUint::from(s_le),
    }
}

/// Enumerate {t : f(t) = k} over the certified horizon. An empty result is
/// a value, not an error: such k are attained by no t at all.
pub fn level_set(basis: &Basis, k: &BigUint) -> Result<LevelSet> {
    let (table, horizon) = grown_table(basis, k)?;
    Ok(scan_level_set(&table, k, horizon))
}

/// [`level_set`] against an existing table; `None` if the table is too
/// short to certify the horizon for this k.
pub fn level_set_from_table(table: &CountTable, k: &BigUint) -> Option<LevelSet> {
    horizon_in_table(table, k).map(|h| scan_level_set(table, k, h))
}

/// Aggregate statistics of {t : f(t) <= k}, plus the first t with f(t) >= k.
pub fn cumulative_stats(basis: &Basis, k: &BigUint) -> Result<CumulativeStats> {
    let (table, horizon) = grown_table(basis, k)?;
    Ok(scan_cumulative(&table, k, horizon))
}

/// [`cumulative_stats`] against an existing table.
pub fn cumulative_from_table(table: &CountTable, k: &BigUint) -> Option<CumulativeStats> {
    horizon_in_table(table, k).map(|h| scan_cumulative(table, k, h))
}

/// The indicator polynomial sum_{t in members} x^t.
pub fn indicator_poly(level_set: &LevelSet) -> SparsePoly {
    SparsePoly::from_terms(level_set.members.iter().map(|&t| (t, BigInt::from(1))))
}

/// The values f(sp) for s = 0..=s_max, i.e. the nontrivial part of the
/// eventual spectrum of f.
pub fn spectrum(basis: &Basis, s_max: u64) -> Result<Vec<(u64, BigUint)>> {
    let st = gcd_structure(basis);
    let limit = u64::try_from(s_max as u128 * st.p as u128).expect("s_max * p exceeds u64");
    let table = count_table_capped(basis, limit, cell_cap())?;
    Ok((0..=s_max)
        .map(|s| (s, table.get(s * st.p).clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(a: &[u64]) -> Basis {
        Basis::new(a.to_vec()).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn horizon_for_346_k2() {
        // f(18), f(19), f(20) = 6, 4, 4 all exceed 2; no earlier window of 3.
        assert_eq!(certified_horizon(&basis(&[3, 4, 6]), &big(2)).unwrap(), 20);
    }

    #[test]
    fn horizon_for_23_k0() {
        assert_eq!(certified_horizon(&basis(&[2, 3]), &big(0)).unwrap(), 3);
    }

    #[test]
    fn level_set_346_k2() {
        let ls = level_set(&basis(&[3, 4, 6]), &big(2)).unwrap();
        assert_eq!(ls.members, vec![6, 9, 10, 13, 14, 17]);
        assert_eq!(ls.g_eq, Some(17));
        assert_eq!(ls.h_eq, Some(6));
        assert_eq!(ls.c_eq, 6);
        assert_eq!(ls.s_eq, big(69));
    }

    #[test]
    fn trivial_k_gives_empty_level_set() {
        let ls = level_set(&basis(&[3, 4, 6]), &big(3)).unwrap();
        assert!(ls.members.is_empty());
        assert_eq!(ls.g_eq, None);
        assert_eq!(ls.h_eq, None);
        assert_eq!(ls.c_eq, 0);
        assert_eq!(ls.s_eq, big(0));
    }

    #[test]
    fn shallit_stankewicz_values() {
        let b = basis(&[8, 9, 15]);
        let ls = level_set(&b, &big(15)).unwrap();
        assert_eq!(ls.g_eq, Some(169));
        let cum = cumulative_stats(&b, &big(15)).unwrap();
        assert_eq!(cum.g_le, Some(172));
    }

    #[test]
    fn cumulative_346_k0() {
        let cum = cumulative_stats(&basis(&[3, 4, 6]), &big(0)).unwrap();
        assert_eq!(cum.g_le, Some(5));
        assert_eq!(cum.c_le, 3);
        assert_eq!(cum.s_le, big(8));
        assert_eq!(cum.h_ge, 0);
    }

    #[test]
    fn cumulative_346_k4() {
        let cum = cumulative_stats(&basis(&[3, 4, 6]), &big(4)).unwrap();
        assert_eq!(cum.c_le, 21);
        assert_eq!(cum.s_le, big(215));
    }

    #[test]
    fn g_le_absent_when_one_is_a_generator_and_k_zero() {
        let cum = cumulative_stats(&basis(&[1, 2]), &big(0)).unwrap();
        assert_eq!(cum.g_le, None);
        assert_eq!(cum.c_le, 0);
        assert_eq!(cum.h_ge, 0);
    }

    #[test]
    fn indicator_of_346_k2() {
        let ls = level_set(&basis(&[3, 4, 6]), &big(2)).unwrap();
        let poly = indicator_poly(&ls);
        let exps: Vec<u64> = poly.terms().iter().map(|(e, _)| *e).collect();
        assert_eq!(exps, vec![6, 9, 10, 13, 14, 17]);
    }

    #[test]
    fn indicator_of_empty_set_is_zero() {
        let ls = level_set(&basis(&[3, 4, 6]), &big(3)).unwrap();
        assert!(indicator_poly(&ls).is_zero());
    }

    #[test]
    fn indicator_of_23_k0() {
        // only t = 1 is non-representable for (2, 3)
        let ls = level_set(&basis(&[2, 3]), &big(0)).unwrap();
        assert_eq!(ls.members, vec![1]);
    }

    #[test]
    fn spectrum_346() {
        let spec = spectrum(&basis(&[3, 4, 6]), 3).unwrap();
        let expected: Vec<(u64, BigUint)> =
            vec![(0, big(1)), (1, big(2)), (2, big(4)), (3, big(6))];
        assert_eq!(spec, expected);
    }

    #[test]
    fn spectrum_extremal_is_binomial() {
        let spec = spectrum(&basis(&[6, 10, 15]), 2).unwrap();
        let expected: Vec<(u64, BigUint)> = vec![(0, big(1)), (1, big(3)), (2, big(6))];
        assert_eq!(spec, expected);
    }

    #[test]
    fn horizon_is_monotone_in_k() {
        let b = basis(&[3, 4, 6]);
        let mut last = 0;
        for k in 0..12u64 {
            let h = certified_horizon(&b, &big(k)).unwrap();
            assert!(h >= last, "horizon({k}) = {h} < horizon({}) = {last}", k - 1);
            last = h;
        }
    }
}

//! The cross-module invariant suite behind the `verify` command.
//!
//! Every check pits one computation path against an independent one over a
//! caller-chosen horizon: the recursion identity against rebuilt subtables,
//! the table against the expanded generating function, the quasi-polynomial
//! against the table, the closed forms against the level-set oracle.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::basis::{coset_offsets, decompose_with, gcd_structure, Basis};
use crate::closedforms::{detect_threshold, theoremg_bundle};
use crate::counting::{count_table, verify_recursion_table};
use crate::error::Result;
use crate::genfun::{RationalGF, SparsePoly};
use crate::levelsets::{cumulative_from_table, level_set_from_table};
use crate::quasipoly::{eventual_positivity_bound, interpolate_quasipoly};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Results of the full suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfCheckReport {
    pub basis: Vec<u64>,
    pub horizon: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn outcome(name: &'static str, result: std::result::Result<(), String>) -> CheckOutcome {
    match result {
        Ok(()) => CheckOutcome {
            name,
            passed: true,
            detail: String::new(),
        },
        Err(detail) => CheckOutcome {
            name,
            passed: false,
            detail,
        },
    }
}

/// Run every invariant check at the given horizon.
pub fn run(basis: &Basis, horizon: u64) -> Result<SelfCheckReport> {
    let st = gcd_structure(basis);
    let table = count_table(basis, horizon)?;
    let mut checks = Vec::new();

    checks.push(outcome("recursion-identity", {
        let report = verify_recursion_table(&table)?;
        if report.passed() {
            Ok(())
        } else {
            Err(format!("{} violations", report.violations.len()))
        }
    }));

    checks.push(outcome("residue-monotonicity", {
        let mut result = Ok(());
        'outer: for &a in basis.generators() {
            for t in a as usize..table.counts().len() {
                if table.counts()[t] < table.counts()[t - a as usize] {
                    result = Err(format!("f({t}) < f({})", t - a as usize));
                    break 'outer;
                }
            }
        }
        result
    }));

    checks.push(outcome("series-matches-table", {
        let gf = RationalGF::new(SparsePoly::one(), basis.generators().to_vec());
        let series = gf.series(horizon);
        let mut result = Ok(());
        for (t, c) in series.iter().enumerate() {
            if *c != BigInt::from(table.counts()[t].clone()) {
                result = Err(format!("series coefficient {t} disagrees with the table"));
                break;
            }
        }
        result
    }));

    checks.push(outcome("truncated-product-is-one", {
        // (sum f(t) x^t) * prod (1 - x^{a_i}) = 1 up to horizon - max(a)
        let f_poly = SparsePoly::from_terms(
            table
                .counts()
                .iter()
                .enumerate()
                .map(|(t, c)| (t as u64, BigInt::from(c.clone()))),
        );
        let mut den = SparsePoly::one();
        for &a in basis.generators() {
            den = &den * &(&SparsePoly::one() - &SparsePoly::monomial(a, 1));
        }
        let product = &f_poly * &den;
        let cutoff = horizon.saturating_sub(basis.max_generator());
        let mut result = Ok(());
        for (e, c) in product.terms() {
            if *e > cutoff {
                break;
            }
            if *e == 0 && c.is_one() {
                continue;
            }
            result = Err(format!("unexpected term of degree {e}"));
            break;
        }
        result
    }));

    checks.push(outcome("decompose-round-trip", {
        let hi = st.t0.saturating_add(10 * st.p).min(horizon);
        let mut result = Ok(());
        for t in st.t0..=hi {
            match decompose_with(basis, &st, t) {
                Ok(dec) => {
                    let rebuilt: u128 = dec.s as u128 * st.p as u128
                        + basis
                            .generators()
                            .iter()
                            .zip(&dec.b)
                            .map(|(&a, &b)| a as u128 * b as u128)
                            .sum::<u128>();
                    if rebuilt != t as u128 {
                        result = Err(format!("recomposition of {t} gives {rebuilt}"));
                        break;
                    }
                }
                Err(e) => {
                    result = Err(format!("decompose({t}) failed: {e}"));
                    break;
                }
            }
        }
        result
    }));

    checks.push(outcome("quasipolynomial-matches-table", {
        match interpolate_quasipoly(basis) {
            Ok(qp) => {
                let probe = horizon.min(3 * st.m * basis.len() as u64);
                let mut result = Ok(());
                for t in 0..=probe {
                    match qp.evaluate(t) {
                        Ok(v) => {
                            if &v != table.get(t) {
                                result = Err(format!("qp({t}) = {v} but table has {}", table.get(t)));
                                break;
                            }
                        }
                        Err(e) => {
                            result = Err(format!("qp({t}): {e}"));
                            break;
                        }
                    }
                }
                result
            }
            Err(e) => Err(format!("interpolation failed: {e}")),
        }
    }));

    checks.push(outcome("coset-constancy", {
        let offsets = coset_offsets(basis, &st);
        let mut result = Ok(());
        's_loop: for s in 0.. {
            let base = s as u128 * st.p as u128;
            if base + *offsets.last().unwrap_or(&0) as u128 > horizon as u128 {
                break;
            }
            let reference = table.get((base as u64) + offsets[0]);
            for &c in &offsets {
                if table.get(base as u64 + c) != reference {
                    result = Err(format!("f({}) differs within the coset of s = {s}", base as u64 + c));
                    break 's_loop;
                }
            }
        }
        result
    }));

    checks.push(outcome("positivity-certificate", {
        match eventual_positivity_bound(basis) {
            Ok(cert) => {
                let qp = interpolate_quasipoly(
                    &Basis::new(st.a_reduced.clone()).expect("reduced basis is valid"),
                )?;
                let mut result = Ok(());
                for s in cert.s0..cert.s0 + 20 {
                    let here = qp.evaluate(s)?;
                    let next = qp.evaluate(s + 1)?;
                    if next <= here {
                        result = Err(format!("f((s+1)p) <= f(sp) at certified s = {s}"));
                        break;
                    }
                }
                if result.is_ok() && cert.s0 > 0 {
                    let s = cert.s0 - 1;
                    if qp.evaluate(s + 1)? > qp.evaluate(s)? {
                        result = Err(format!("no witnessed violation at s0 - 1 = {s}"));
                    }
                }
                result
            }
            Err(e) => Err(format!("{e}")),
        }
    }));

    checks.push(outcome("level-set-partition", {
        // distinct values on a prefix partition it; each group must agree
        // with the standalone level-set oracle (which grows its own table)
        let w = basis.min_generator();
        let prefix_end = horizon.min(300).saturating_sub(w);
        let mut seen: Vec<(BigUint, Vec<u64>)> = Vec::new();
        for t in 0..=prefix_end {
            let v = table.get(t);
            match seen.iter_mut().find(|(k, _)| k == v) {
                Some((_, members)) => members.push(t),
                None => seen.push((v.clone(), vec![t])),
            }
        }
        let covered: u64 = seen.iter().map(|(_, m)| m.len() as u64).sum();
        let mut result = if covered == prefix_end + 1 {
            Ok(())
        } else {
            Err("groups do not cover the prefix".to_string())
        };
        if result.is_ok() {
            for (k, members) in &seen {
                let ls = crate::levelsets::level_set(basis, k)?;
                let truncated: Vec<u64> = ls
                    .members
                    .iter()
                    .copied()
                    .filter(|&t| t <= prefix_end)
                    .collect();
                if &truncated != members {
                    result = Err(format!("level set of {k} disagrees on the prefix"));
                    break;
                }
            }
        }
        result
    }));

    checks.push(outcome("closed-forms-match-oracle", {
        match detect_threshold(basis, None) {
            Ok(cert) => {
                let mut result = Ok(());
                for s in cert.s_star..=cert.s_star + cert.window.min(4) {
                    let bundle = theoremg_bundle(basis, s, &cert).expect("s >= s_star");
                    let k = bundle.k.clone();
                    let (ls, cum) = match (
                        level_set_from_table(&table, &k),
                        cumulative_from_table(&table, &k),
                    ) {
                        (Some(ls), Some(cum)) => (ls, cum),
                        _ => {
                            // fall back to fresh tables when the verify horizon
                            // is shorter than the certificate needs
                            (
                                crate::levelsets::level_set(basis, &k)?,
                                crate::levelsets::cumulative_stats(basis, &k)?,
                            )
                        }
                    };
                    if ls.g_eq != Some(bundle.g_eq_le)
                        || cum.g_le != Some(bundle.g_eq_le)
                        || ls.h_eq != Some(bundle.h_eq_ge)
                        || ls.c_eq != bundle.c_eq
                        || BigInt::from(cum.c_le) != bundle.c_le
                        || ls.s_eq != bundle.s_eq
                        || BigInt::from(cum.s_le.clone()) != bundle.s_le
                    {
                        result = Err(format!("bundle at s = {s} disagrees with the oracle"));
                        break;
                    }
                }
                result
            }
            Err(e) => Err(format!("{e}")),
        }
    }));

    Ok(SelfCheckReport {
        basis: basis.generators().to_vec(),
        horizon,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_346() {
        let basis = Basis::new(vec![3, 4, 6]).unwrap();
        let report = run(&basis, 200).unwrap();
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn suite_passes_on_pair() {
        let basis = Basis::new(vec![2, 3]).unwrap();
        let report = run(&basis, 120).unwrap();
        assert!(report.passed());
    }
}

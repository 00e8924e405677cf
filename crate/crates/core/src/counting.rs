//! Dense exact tables of the restricted partition function.
//!
//! Counts are arbitrary-precision: f(t) grows like t^(n-1) and silently
//! overflowing a fixed-width integer would poison every downstream
//! certificate. The table folds in one generator at a time, so after
//! processing a prefix of the generators the cells hold the counts for that
//! prefix; this is exactly the recursion
//! `f(a; t) = f(a; t - a_i) + f(a_{-i}; t)` run in bulk.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::basis::Basis;
use crate::error::{Error, Result};

/// An exact representation count.
pub type Count = BigUint;

/// Default cap on the number of table cells a single operation allocates.
pub const DEFAULT_CELL_CAP: u64 = 100_000_000;

static CELL_CAP: AtomicU64 = AtomicU64::new(DEFAULT_CELL_CAP);

/// The process-wide cell cap.
pub fn cell_cap() -> u64 {
    CELL_CAP.load(Ordering::Relaxed)
}

/// Override the process-wide cell cap (e.g. from a RESOURCE_CAP setting).
pub fn set_cell_cap(cap: u64) {
    CELL_CAP.store(cap.max(1), Ordering::Relaxed);
}

fn ensure_cells(limit: u64, cap: u64) -> Result<usize> {
    let cells = limit
        .checked_add(1)
        .ok_or(Error::ResourceLimit { cells: u64::MAX, cap })?;
    if cells > cap {
        return Err(Error::ResourceLimit { cells, cap });
    }
    Ok(cells as usize)
}

/// Representation counts for an arbitrary generator list (coprimality not
/// required), for every t in [0, limit]. An empty list counts only t = 0.
pub fn representation_counts(gens: &[u64], limit: u64) -> Result<Vec<BigUint>> {
    representation_counts_capped(gens, limit, cell_cap())
}

/// [`representation_counts`] with an explicit cell cap.
pub fn representation_counts_capped(gens: &[u64], limit: u64, cap: u64) -> Result<Vec<BigUint>> {
    let cells = ensure_cells(limit, cap)?;
    let mut counts = vec![BigUint::zero(); cells];
    counts[0] = BigUint::one();
    for &a in gens {
        debug_assert!(a > 0, "generators must be positive");
        let a = a as usize;
        for t in a..cells {
            let (lo, hi) = counts.split_at_mut(t);
            hi[0] += &lo[t - a];
        }
    }
    Ok(counts)
}

/// A dense table of f(a; t) for t in [0, limit].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    basis: Basis,
    counts: Vec<BigUint>,
}

impl CountTable {
    /// Wrap an externally produced table, e.g. to check it with
    /// [`verify_recursion_table`].
    pub fn from_parts(basis: Basis, counts: Vec<BigUint>) -> Self {
        assert!(!counts.is_empty(), "a table holds at least f(0)");
        CountTable { basis, counts }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Largest tabulated t.
    pub fn limit(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// f(t); panics if t exceeds the table limit.
    pub fn get(&self, t: u64) -> &BigUint {
        &self.counts[usize::try_from(t).expect("t fits usize")]
    }
}

/// Tabulate f(basis; t) for t in [0, limit].
pub fn count_table(basis: &Basis, limit: u64) -> Result<CountTable> {
    count_table_capped(basis, limit, cell_cap())
}

/// [`count_table`] with an explicit cell cap.
pub fn count_table_capped(basis: &Basis, limit: u64, cap: u64) -> Result<CountTable> {
    let counts = representation_counts_capped(basis.generators(), limit, cap)?;
    Ok(CountTable {
        basis: basis.clone(),
        counts,
    })
}

/// A single value f(basis; t).
pub fn count(basis: &Basis, t: u64) -> Result<Count> {
    let table = count_table(basis, t)?;
    Ok(table.counts[table.counts.len() - 1].clone())
}

/// One failed instance of the recursion identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionViolation {
    pub generator_index: usize,
    pub t: u64,
    /// f(t - a_i) + f(a_{-i}; t)
    pub expected: BigUint,
    /// the table's f(t)
    pub actual: BigUint,
}

/// Outcome of checking `f(t) = f(t - a_i) + f(a_{-i}; t)` over a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionReport {
    pub limit: u64,
    pub identities_checked: u64,
    pub violations: Vec<RecursionViolation>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Build a fresh table up to `limit` and verify the recursion identity for
/// every generator and every t in [a_i, limit], against independently built
/// tables for each a_{-i}.
pub fn verify_recursion(basis: &Basis, limit: u64) -> Result<RecursionReport> {
    let table = count_table(basis, limit)?;
    verify_recursion_table(&table)
}

/// Verify the recursion identity against a given table. The sub-tables for
/// each a_{-i} are rebuilt here, so a corrupted cell in `table` is caught.
pub fn verify_recursion_table(table: &CountTable) -> Result<RecursionReport> {
    let gens = table.basis().generators();
    let limit = table.limit();
    let mut identities_checked = 0u64;
    let mut violations = Vec::new();

    for (i, &a) in gens.iter().enumerate() {
        let others: Vec<u64> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        let sub = representation_counts(&others, limit)?;
        for t in a as usize..=limit as usize {
            let expected = &table.counts()[t - a as usize] + &sub[t];
            identities_checked += 1;
            if expected != table.counts()[t] {
                violations.push(RecursionViolation {
                    generator_index: i,
                    t: t as u64,
                    expected,
                    actual: table.counts()[t].clone(),
                });
            }
        }
    }

    Ok(RecursionReport {
        limit,
        identities_checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Basis;

    fn basis(a: &[u64]) -> Basis {
        Basis::new(a.to_vec()).unwrap()
    }

    const TABLE_346: [u32; 24] = [
        1, 0, 0, 1, 1, 0, 2, 1, 1, 2, 2, 1, 4, 2, 2, 4, 4, 2, 6, 4, 4, 6, 6, 4,
    ];

    #[test]
    fn table_346_matches_reference_values() {
        let table = count_table(&basis(&[3, 4, 6]), 23).unwrap();
        let expected: Vec<BigUint> = TABLE_346.iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(table.counts(), &expected[..]);
    }

    #[test]
    fn count_of_zero_is_one() {
        for a in [vec![3, 4, 6], vec![2, 3], vec![8, 9, 15]] {
            assert_eq!(count(&basis(&a), 0).unwrap(), BigUint::one());
        }
    }

    #[test]
    fn count_below_generators_is_zero() {
        assert_eq!(count(&basis(&[2, 3]), 1).unwrap(), BigUint::zero());
    }

    #[test]
    fn all_ones_basis_counts_are_binomials() {
        // f((1,...,1); t) = C(t + n - 1, n - 1)
        let n = 5usize;
        let b = basis(&vec![1; n]);
        let table = count_table(&b, 30).unwrap();
        for t in 0..=30u64 {
            let mut binom = BigUint::one();
            for i in 0..(n as u64 - 1) {
                binom = binom * BigUint::from(t + n as u64 - 1 - i) / BigUint::from(i + 1);
            }
            assert_eq!(table.get(t), &binom, "t = {t}");
        }
    }

    #[test]
    fn resource_limit_is_reported() {
        let err = count_table_capped(&basis(&[2, 3]), 1000, 100).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                cells: 1001,
                cap: 100
            }
        );
    }

    #[test]
    fn recursion_holds_on_346() {
        let report = verify_recursion(&basis(&[3, 4, 6]), 23).unwrap();
        assert!(report.passed());
        // e.g. f(12) = f(9) + f((4,6); 12) = 2 + 2
        assert_eq!(report.identities_checked, (23 - 2) + (23 - 3) + (23 - 5));
    }

    #[test]
    fn recursion_holds_on_pair() {
        assert!(verify_recursion(&basis(&[2, 3]), 50).unwrap().passed());
    }

    #[test]
    fn corrupted_cell_is_caught_with_its_index() {
        let table = count_table(&basis(&[3, 4, 6]), 23).unwrap();
        let mut counts = table.counts().to_vec();
        counts[17] += 1u32;
        let bad = CountTable::from_parts(basis(&[3, 4, 6]), counts);
        let report = verify_recursion_table(&bad).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.t == 17));
    }
}

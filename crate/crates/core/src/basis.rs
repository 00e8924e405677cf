//! Problem instances (generator vectors) and their gcd/coset structure.
//!
//! For a basis a = (a_1, ..., a_n), `d_i = gcd(a with a_i removed)` and
//! `p = d_1 * ... * d_n`. Every sufficiently large t decomposes uniquely as
//! `t = s*p + sum_i a_i b_i` with `0 <= b_i < d_i`, and the count function
//! is constant on each such coset. This module computes that skeleton.

use num_integer::Integer;

use crate::error::{Error, Result};

/// A validated generator vector: at least two positive integers with
/// overall gcd 1. Order is preserved and duplicates are allowed; every
/// index-addressed output (`d`, `b`, `a_reduced`) follows the caller's
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis {
    a: Vec<u64>,
}

impl Basis {
    /// Validate a generator vector.
    pub fn new(a: Vec<u64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::TooFewElements { count: a.len() });
        }
        if let Some(index) = a.iter().position(|&x| x == 0) {
            return Err(Error::NonPositiveEntry { index, value: 0 });
        }
        let gcd = gcd_all(&a);
        if gcd != 1 {
            return Err(Error::NotCoprime { a, gcd });
        }
        Ok(Basis { a })
    }

    /// Validate possibly-signed input, e.g. parsed from a command line.
    ///
    /// Entries must fit in `u64`; the sign check happens first so that a
    /// negative entry reports `NonPositiveEntry` rather than a cast failure.
    pub fn from_signed(a: &[i128]) -> Result<Self> {
        if let Some(index) = a.iter().position(|&x| x <= 0) {
            return Err(Error::NonPositiveEntry {
                index,
                value: a[index],
            });
        }
        let a = a
            .iter()
            .map(|&x| u64::try_from(x).expect("generator exceeds u64"))
            .collect();
        Self::new(a)
    }

    pub fn generators(&self) -> &[u64] {
        &self.a
    }

    /// Number of generators, n >= 2.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn min_generator(&self) -> u64 {
        *self.a.iter().min().expect("basis is nonempty")
    }

    pub fn max_generator(&self) -> u64 {
        *self.a.iter().max().expect("basis is nonempty")
    }
}

/// gcd of a slice; the gcd of a single element is that element.
fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0u64, |g, x| g.gcd(x))
}

fn fit64(x: u128, what: &str) -> u64 {
    u64::try_from(x).unwrap_or_else(|_| panic!("{what} exceeds u64"))
}

/// The gcd skeleton of a basis.
///
/// `d[i]` is the gcd of the vector with the i-th entry removed; the `d[i]`
/// are pairwise coprime and their product `p` divides `m = lcm(a)`.
/// `a_reduced[i] = a[i] / prod_{j != i} d[j]` is always an exact division,
/// and `t0 = sum_j a_j (d_j - 1)` bounds the decomposition range: every
/// `t >= t0` decomposes with `s >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdStructure {
    pub d: Vec<u64>,
    pub p: u64,
    pub m: u64,
    pub sigma: u64,
    pub a_reduced: Vec<u64>,
    pub t0: u64,
}

/// Compute the full gcd skeleton of a basis.
pub fn gcd_structure(basis: &Basis) -> GcdStructure {
    let a = basis.generators();
    let n = a.len();

    let d: Vec<u64> = (0..n)
        .map(|i| {
            a.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0u64, |g, (_, x)| g.gcd(x))
        })
        .collect();

    let p = fit64(d.iter().map(|&x| x as u128).product(), "p = prod d_i");
    let m = fit64(
        a.iter().fold(1u128, |acc, &x| acc.lcm(&(x as u128))),
        "m = lcm(a)",
    );
    let sigma = fit64(a.iter().map(|&x| x as u128).sum(), "sigma = sum a_i");

    let a_reduced: Vec<u64> = (0..n)
        .map(|i| {
            let divisor: u128 = d
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x as u128)
                .product();
            let ai = a[i] as u128;
            debug_assert_eq!(ai % divisor, 0, "a_i must be divisible by prod_{{j!=i}} d_j");
            fit64(ai / divisor, "reduced generator")
        })
        .collect();

    let t0 = fit64(
        a.iter()
            .zip(&d)
            .map(|(&ai, &di)| ai as u128 * (di - 1) as u128)
            .sum(),
        "t0",
    );

    GcdStructure {
        d,
        p,
        m,
        sigma,
        a_reduced,
        t0,
    }
}

/// The unique decomposition `t = s*p + sum_i a_i b_i` with `0 <= b_i < d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub s: u64,
    pub b: Vec<u64>,
}

/// Multiplicative inverse of `a` modulo `modulus >= 1`, requiring
/// `gcd(a, modulus) = 1`.
fn mod_inverse(a: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    // extended Euclid on (a mod modulus, modulus)
    let (mut r0, mut r1) = ((a % modulus) as i128, modulus as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse requires coprime arguments");
    s0.rem_euclid(modulus as i128) as u64
}

/// The digits `b_i = a_i^{-1} t mod d_i` of the coset containing `t`.
fn residue_digits(basis: &Basis, structure: &GcdStructure, t: u64) -> Vec<u64> {
    basis
        .generators()
        .iter()
        .zip(&structure.d)
        .map(|(&ai, &di)| {
            if di == 1 {
                0
            } else {
                (mod_inverse(ai, di) as u128 * (t % di) as u128 % di as u128) as u64
            }
        })
        .collect()
}

/// The coset offset `sum_i a_i b_i` for the class of `t` modulo `p`.
pub(crate) fn residue_offset(basis: &Basis, structure: &GcdStructure, t: u64) -> u64 {
    let b = residue_digits(basis, structure, t);
    fit64(
        basis
            .generators()
            .iter()
            .zip(&b)
            .map(|(&ai, &bi)| ai as u128 * bi as u128)
            .sum(),
        "coset offset",
    )
}

/// Decompose `t` as `s*p + sum_i a_i b_i` with `0 <= b_i < d_i` and `s >= 0`.
///
/// The digits are forced by `b_i = a_i^{-1} t mod d_i`; since the `d_i` are
/// pairwise coprime, `sum a_i b_i = t (mod p)` and `s` is determined. Fails
/// with `BelowRange` when the forced `s` is negative, which can happen only
/// for `t < t0`.
pub fn decompose(basis: &Basis, t: u64) -> Result<Decomposition> {
    let structure = gcd_structure(basis);
    decompose_with(basis, &structure, t)
}

/// [`decompose`] against a precomputed structure.
pub fn decompose_with(basis: &Basis, structure: &GcdStructure, t: u64) -> Result<Decomposition> {
    let b = residue_digits(basis, structure, t);
    let offset: u128 = basis
        .generators()
        .iter()
        .zip(&b)
        .map(|(&ai, &bi)| ai as u128 * bi as u128)
        .sum();
    let diff = t as i128 - offset as i128;
    debug_assert_eq!(
        diff.rem_euclid(structure.p as i128),
        0,
        "t - offset must be a multiple of p"
    );
    let s = diff / structure.p as i128;
    if s < 0 {
        return Err(Error::BelowRange { t, s });
    }
    Ok(Decomposition { s: s as u64, b })
}

/// All `p` coset offsets `{ sum_i a_i b_i : 0 <= b_i < d_i }`, sorted.
///
/// There is one per residue class mod `p`; cost is O(p * n).
pub fn coset_offsets(basis: &Basis, structure: &GcdStructure) -> Vec<u64> {
    let mut offsets: Vec<u64> = (0..structure.p)
        .map(|r| residue_offset(basis, structure, r))
        .collect();
    offsets.sort_unstable();
    offsets
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(a: &[u64]) -> Basis {
        Basis::new(a.to_vec()).unwrap()
    }

    #[test]
    fn accepts_paper_example() {
        let b = basis(&[3, 4, 6]);
        assert_eq!(b.generators(), &[3, 4, 6]);
    }

    #[test]
    fn rejects_non_coprime() {
        assert_eq!(
            Basis::new(vec![2, 4, 6]),
            Err(Error::NotCoprime {
                a: vec![2, 4, 6],
                gcd: 2
            })
        );
    }

    #[test]
    fn rejects_single_element() {
        assert_eq!(Basis::new(vec![7]), Err(Error::TooFewElements { count: 1 }));
    }

    #[test]
    fn rejects_zero_and_negative_entries() {
        assert_eq!(
            Basis::new(vec![3, 0, 5]),
            Err(Error::NonPositiveEntry { index: 1, value: 0 })
        );
        assert_eq!(
            Basis::from_signed(&[3, -4, 5]),
            Err(Error::NonPositiveEntry {
                index: 1,
                value: -4
            })
        );
    }

    #[test]
    fn preserves_order_and_duplicates() {
        let b = basis(&[6, 4, 6, 3]);
        assert_eq!(b.generators(), &[6, 4, 6, 3]);
    }

    #[test]
    fn structure_of_346() {
        let st = gcd_structure(&basis(&[3, 4, 6]));
        assert_eq!(st.d, vec![2, 3, 1]);
        assert_eq!(st.p, 6);
        assert_eq!(st.m, 12);
        assert_eq!(st.sigma, 13);
        assert_eq!(st.a_reduced, vec![1, 2, 1]);
        assert_eq!(st.t0, 11);
    }

    #[test]
    fn structure_of_8_9_15() {
        let st = gcd_structure(&basis(&[8, 9, 15]));
        assert_eq!(st.d, vec![3, 1, 1]);
        assert_eq!(st.p, 3);
        assert_eq!(st.a_reduced, vec![8, 3, 5]);
        assert_eq!(st.t0, 16);
    }

    #[test]
    fn structure_of_coprime_pair() {
        // For coprime (a1, a2): d = (a2, a1), p = a1*a2, a' = (1, 1).
        let st = gcd_structure(&basis(&[5, 8]));
        assert_eq!(st.d, vec![8, 5]);
        assert_eq!(st.p, 40);
        assert_eq!(st.a_reduced, vec![1, 1]);
        assert_eq!(st.t0, 2 * 40 - 5 - 8);
    }

    #[test]
    fn d_entries_are_pairwise_coprime() {
        for a in [
            vec![3, 4, 6],
            vec![8, 9, 15],
            vec![6, 10, 15],
            vec![4, 6, 9, 10],
        ] {
            let st = gcd_structure(&basis(&a));
            for i in 0..st.d.len() {
                for j in i + 1..st.d.len() {
                    assert_eq!(st.d[i].gcd(&st.d[j]), 1, "d_{i}, d_{j} in {a:?}");
                }
            }
            assert_eq!(st.m % st.p, 0, "p must divide m for {a:?}");
        }
    }

    #[test]
    fn decompose_17_over_346() {
        let dec = decompose(&basis(&[3, 4, 6]), 17).unwrap();
        assert_eq!(dec.s, 1);
        assert_eq!(dec.b, vec![1, 2, 0]);
    }

    #[test]
    fn decompose_zero_is_trivial() {
        let dec = decompose(&basis(&[8, 9, 15]), 0).unwrap();
        assert_eq!(dec.s, 0);
        assert_eq!(dec.b, vec![0, 0, 0]);
    }

    #[test]
    fn decompose_below_range_reports_forced_s() {
        assert_eq!(
            decompose(&basis(&[3, 4, 6]), 5),
            Err(Error::BelowRange { t: 5, s: -1 })
        );
    }

    #[test]
    fn reduced_basis_is_fully_reduced() {
        for a in [vec![3, 4, 6], vec![8, 9, 15], vec![6, 10, 15]] {
            let st = gcd_structure(&basis(&a));
            let reduced = Basis::new(st.a_reduced.clone()).expect("a' has gcd 1");
            let st2 = gcd_structure(&reduced);
            assert!(st2.d.iter().all(|&d| d == 1), "a' of {a:?} must have d = 1");
        }
    }

    #[test]
    fn offsets_of_346() {
        let b = basis(&[3, 4, 6]);
        let st = gcd_structure(&b);
        assert_eq!(coset_offsets(&b, &st), vec![0, 3, 4, 7, 8, 11]);
    }
}

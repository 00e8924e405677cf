//! Shared test oracle: exhaustive enumeration of representations,
//! independent of the library's dynamic-programming path.

use num_bigint::BigUint;

/// Count solutions of gens . x = t over nonnegative integers by direct
/// enumeration.
pub fn enumerate_count(gens: &[u64], t: u64) -> BigUint {
    fn rec(gens: &[u64], t: u64) -> u64 {
        match gens.split_first() {
            None => u64::from(t == 0),
            Some((&a, rest)) => {
                let mut total = 0;
                let mut used = 0;
                while used <= t {
                    total += rec(rest, t - used);
                    used += a;
                }
                total
            }
        }
    }
    BigUint::from(rec(gens, t))
}

#[allow(dead_code)]
pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

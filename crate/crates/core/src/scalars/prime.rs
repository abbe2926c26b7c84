use serde::{Deserialize, Serialize};

use super::ScalarError;

/// A prime residue-field cardinality.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduce an arbitrary integer into `0..p`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    /// Multiplicative inverse of a nonzero residue (Fermat).
    pub fn inv(self, x: u32) -> u32 {
        debug_assert!(x % self.0 != 0, "inverse of zero mod {}", self.0);
        pow_mod(x, self.0 - 2, self.0)
    }
}

impl TryFrom<u32> for Prime {
    type Error = ScalarError;
    fn try_from(p: u32) -> Result<Self, ScalarError> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u32, mut exp: u32, m: u32) -> u32 {
    let m = m as u64;
    let mut acc = 1u64 % m;
    let mut b = base as u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u32;
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u32> = (0..30).filter(|&p| Prime::new(p).is_ok()).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(matches!(Prime::new(4), Err(ScalarError::NotPrime(4))));
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 13] {
            let pr = Prime::new(p).unwrap();
            for x in 1..p {
                assert_eq!(x as u64 * pr.inv(x) as u64 % p as u64, 1);
            }
        }
    }
}

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numerics::RngStream;

/// Smallest prime `>= n` (and `>= 2`).
pub fn smallest_prime_at_least(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Degree-1 polynomial `x -> (a*x + b) mod prime` over a prime field. With `a`
/// drawn from `1..prime` and `b` from `0..prime` this is a pairwise
/// independent family on `[prime]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineHash {
    pub a: u64,
    pub b: u64,
    pub prime: u64,
}

impl AffineHash {
    pub fn random(prime: u64, rng: &mut RngStream) -> Self {
        debug_assert!(prime >= 2);
        Self {
            a: rng.random_range(1..prime),
            b: rng.random_range(0..prime),
            prime,
        }
    }

    #[inline]
    pub fn field(&self, x: u64) -> u64 {
        ((u128::from(self.a) * u128::from(x) + u128::from(self.b)) % u128::from(self.prime)) as u64
    }

    #[inline]
    pub fn bucket(&self, x: u64, range: usize) -> usize {
        (self.field(x) % range as u64) as usize
    }

    /// `+1` for even field values, `-1` for odd.
    #[inline]
    pub fn sign(&self, x: u64) -> f64 {
        if self.field(x) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(smallest_prime_at_least(0), 2);
        assert_eq!(smallest_prime_at_least(2), 2);
        assert_eq!(smallest_prime_at_least(100), 101);
        assert_eq!(smallest_prime_at_least(101), 101);
        assert_eq!(smallest_prime_at_least(5000), 5003);
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    #[test]
    fn affine_map_is_a_bijection_of_the_field() {
        let mut rng = RngStream::new(3, 0);
        let h = AffineHash::random(13, &mut rng);
        let mut seen = [false; 13];
        for x in 0..13 {
            seen[h.field(x) as usize] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn full_family_is_pairwise_uniform() {
        // distinct points never collide in the field
        let p = 11u64;
        let (x, y) = (2u64, 7u64);
        let mut collisions = 0;
        let mut total = 0;
        for a in 1..p {
            for b in 0..p {
                let h = AffineHash { a, b, prime: p };
                total += 1;
                if h.field(x) == h.field(y) {
                    collisions += 1;
                }
            }
        }
        assert_eq!(collisions, 0);
        assert_eq!(total, 110);
        // and every ordered value pair (u, v), u != v, is hit exactly once
        let mut hits = std::collections::HashMap::new();
        for a in 1..p {
            for b in 0..p {
                let h = AffineHash { a, b, prime: p };
                *hits.entry((h.field(x), h.field(y))).or_insert(0) += 1;
            }
        }
        assert_eq!(hits.len(), 110);
        assert!(hits.values().all(|c| *c == 1));
    }
}

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest `C(d, k)` an exhaustive search will visit.
pub const SUPPORT_GUARD: u128 = 1_000_000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn check_support_guard(d: usize, k: usize) -> Result<u128> {
    let count = binomial(d, k);
    if count > SUPPORT_GUARD {
        return Err(Error::TooLarge {
            d,
            k,
            count,
            limit: SUPPORT_GUARD,
        });
    }
    Ok(count)
}

/// The `rank`-th `k`-subset of `0..d` in lexicographic order.
pub fn unrank_support(mut rank: u128, d: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            // subsets whose next element is `next`
            let block = binomial(d - next - 1, remaining);
            if rank < block {
                out.push(next);
                next += 1;
                break;
            }
            rank -= block;
            next += 1;
        }
    }
    out
}

/// Best `(cost, rank, payload)` over all `k`-subsets, in parallel, with ties
/// going to the lexicographically smallest support. Supports whose evaluation
/// returns `None` are skipped.
pub(crate) fn best_support<T, F>(d: usize, k: usize, eval: F) -> Result<Option<(f64, Vec<usize>, T)>>
where
    T: Send,
    F: Fn(&[usize]) -> Result<Option<(f64, T)>> + Sync,
{
    let count = check_support_guard(d, k)?;
    let best = (0..count as u64)
        .into_par_iter()
        .map(|rank| {
            let support = unrank_support(u128::from(rank), d, k);
            let found = eval(&support)?.map(|(cost, payload)| (cost, rank, support, payload));
            Ok::<_, Error>(found)
        })
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (None, other) | (other, None) => other,
                    (Some(a), Some(b)) => {
                        let a_wins = a.0 < b.0 || (a.0 == b.0 && a.1 < b.1);
                        Some(if a_wins { a } else { b })
                    }
                })
            },
        )?;
    Ok(best.map(|(cost, _, support, payload)| (cost, support, payload)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unranking_is_lexicographic() {
        let all: Vec<Vec<usize>> = (0..binomial(5, 3)).map(|r| unrank_support(r, 5, 3)).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(unrank_support(0, 4, 0), Vec::<usize>::new());
    }

    #[test]
    fn guard_trips_above_a_million() {
        assert_eq!(check_support_guard(40, 3).unwrap(), 9880);
        assert!(matches!(check_support_guard(100, 5), Err(Error::TooLarge { .. })));
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn ties_go_to_smallest_support() {
        let best = best_support(6, 2, |s| Ok(Some(((s[1] % 2) as f64, ())))).unwrap().unwrap();
        assert_eq!(best.1, vec![0, 2]);
    }
}

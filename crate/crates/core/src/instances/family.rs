//! Balanced, correctable families of supports.
//!
//! Labels are 1-based. Label 1 is shared by every member; labels `2..=d` are
//! identified with the field elements `0..q` (label = element + 2), where
//! `q = d - 1` is prime. A family is the union of orbits of random base
//! `k`-sets under the full affine group `x -> a*x + b` (`a != 0`) over
//! `GF(q)`.

use std::collections::{HashMap, HashSet};

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::RngStream;
use crate::sketches::smallest_prime_at_least;

const MAX_REDRAWS: usize = 1000;
/// Candidate images (t * q * (q - 1)) allowed before refusing to build.
const MAX_CANDIDATES: u128 = 20_000_000;
/// Subset-table entries `verify_family` spends on exact max-overlap search.
const OVERLAP_SEARCH_BUDGET: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportFamily {
    /// Ambient dimension after adjusting `d - 1` up to a prime.
    pub d: usize,
    pub requested_d: usize,
    pub k: usize,
    /// Members as sorted label lists, each starting with label 1.
    pub members: Vec<Vec<usize>>,
}

impl SupportFamily {
    /// Wraps explicit members, sorting each one.
    pub fn from_members(d: usize, k: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        let members: Vec<Vec<usize>> = members
            .into_iter()
            .map(|mut m| {
                m.sort_unstable();
                m
            })
            .collect();
        if let Some(bad) = members.iter().flatten().find(|&&l| l == 0 || l > d) {
            return Err(invalid!("label {bad} outside 1..={d}"));
        }
        Ok(Self {
            d,
            requested_d: d,
            k,
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member `idx` without label 1, as column indices of `A` (label - 2).
    pub fn member_columns(&self, idx: usize) -> Vec<usize> {
        self.members[idx]
            .iter()
            .filter(|&&l| l >= 2)
            .map(|l| l - 2)
            .collect()
    }
}

fn images(base: &[u64], q: u64) -> impl Iterator<Item = Vec<u64>> + '_ {
    (1..q).flat_map(move |a| {
        (0..q).map(move |b| {
            let mut img: Vec<u64> = base
                .iter()
                .map(|&x| ((u128::from(a) * u128::from(x) + u128::from(b)) % u128::from(q)) as u64)
                .collect();
            img.sort_unstable();
            img
        })
    })
}

fn for_each_subset<T: Copy>(set: &[T], size: usize, mut f: impl FnMut(&[T]) -> bool) -> bool {
    fn rec<T: Copy>(set: &[T], size: usize, start: usize, buf: &mut Vec<T>, f: &mut dyn FnMut(&[T]) -> bool) -> bool {
        if buf.len() == size {
            return f(buf);
        }
        let need = size - buf.len();
        for i in start..=set.len() - need {
            buf.push(set[i]);
            let go = rec(set, size, i + 1, buf, f);
            buf.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if size > set.len() {
        return true;
    }
    rec(set, size, 0, &mut Vec::with_capacity(size), &mut f)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Builds the union of affine orbits of `t` random base `k`-sets, redrawing
/// any base set whose images would make two distinct members share at least
/// `c_overlap * k` labels (label 1 excluded). Identical images are kept once.
pub fn build_support_family(
    d: usize,
    k: usize,
    t: usize,
    c_overlap: f64,
    rng: &mut RngStream,
) -> Result<SupportFamily> {
    if d < 3 {
        return Err(invalid!("support family needs d >= 3, got {d}"));
    }
    if k == 0 || t == 0 {
        return Err(invalid!("support family needs k, t >= 1"));
    }
    if !(c_overlap > 0.0 && c_overlap <= 1.0) {
        return Err(invalid!("overlap constant must lie in (0, 1], got {c_overlap}"));
    }
    let q = smallest_prime_at_least((d - 1) as u64);
    if k as u64 > q {
        return Err(invalid!("k = {k} exceeds the field size {q}"));
    }
    let candidates = t as u128 * u128::from(q) * u128::from(q - 1);
    if candidates > MAX_CANDIDATES {
        return Err(invalid!(
            "{candidates} candidate members exceed the limit of {MAX_CANDIDATES}; shrink t or d"
        ));
    }
    // overlaps of this size or more are forbidden
    let forbidden = (c_overlap * k as f64 - 1e-9).ceil().max(1.0) as usize;

    let mut members: Vec<Vec<u64>> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut owner: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut redraws = 0;
    let mut accepted = 0;
    while accepted < t {
        let base: Vec<u64> = sample(rng, q as usize, k).into_iter().map(|x| x as u64).collect();
        let mut new_members: Vec<Vec<u64>> = Vec::new();
        let mut new_seen: HashSet<Vec<u64>> = HashSet::new();
        let mut new_owner: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut ok = true;
        for img in images(&base, q) {
            if seen.contains(&img) || !new_seen.insert(img.clone()) {
                continue;
            }
            let id = members.len() + new_members.len();
            ok = forbidden > k
                || for_each_subset(&img, forbidden, |sub| {
                    if owner.contains_key(sub) {
                        return false;
                    }
                    match new_owner.get(sub) {
                        Some(_) => false,
                        None => {
                            new_owner.insert(sub.to_vec(), id);
                            true
                        }
                    }
                });
            if !ok {
                break;
            }
            new_members.push(img);
        }
        if ok {
            owner.extend(new_owner);
            seen.extend(new_seen);
            members.extend(new_members);
            accepted += 1;
        } else {
            redraws += 1;
            if redraws > MAX_REDRAWS {
                return Err(Error::ConstructionFailed(format!(
                    "no admissible base set after {MAX_REDRAWS} redraws (k = {k}, t = {t}, q = {q})"
                )));
            }
        }
    }

    let members = members
        .into_iter()
        .map(|m| std::iter::once(1).chain(m.into_iter().map(|x| x as usize + 2)).collect())
        .collect();
    Ok(SupportFamily {
        d: q as usize + 1,
        requested_d: d,
        k,
        members,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    /// Every member has `k + 1` distinct labels including label 1.
    pub shape_ok: bool,
    pub balanced_points: bool,
    /// `((label, c_label), (label, c_label))` for the max and min counts.
    pub point_witness: Option<((usize, usize), (usize, usize))>,
    pub balanced_pairs: bool,
    pub pair_witness: Option<(((usize, usize), usize), ((usize, usize), usize))>,
    /// Distinct members share at most `9k/10` labels besides label 1.
    pub correctable: bool,
    /// Two member indices sharing more than `9k/10` labels.
    pub overlap_witness: Option<(usize, usize)>,
    /// Largest overlap (label 1 excluded) between distinct members, when the
    /// exact search fits the budget.
    pub max_overlap: Option<usize>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.shape_ok && self.balanced_points && self.balanced_pairs && self.correctable
    }
}

/// Exhaustive check of member shape, point and pair balance over labels
/// `2..=d`, and the overlap bound.
pub fn verify_family(f: &SupportFamily) -> FamilyReport {
    let d = f.d;
    let k = f.k;
    let shape_ok = f.members.iter().all(|m| {
        m.len() == k + 1 && m.first() == Some(&1) && m.windows(2).all(|w| w[0] < w[1]) && m.iter().all(|&l| l <= d)
    });
    let parts: Vec<Vec<usize>> = f
        .members
        .iter()
        .map(|m| m.iter().copied().filter(|&l| l >= 2 && l <= d).collect())
        .collect();

    let labels = d.saturating_sub(1);
    let mut point = vec![0usize; labels];
    let mut pair = vec![0usize; labels * labels];
    for p in &parts {
        for (a, &i) in p.iter().enumerate() {
            point[i - 2] += 1;
            for &j in &p[a + 1..] {
                pair[(i - 2) * labels + (j - 2)] += 1;
            }
        }
    }
    let extremes = |items: &mut dyn Iterator<Item = (usize, usize)>| {
        let mut max: Option<(usize, usize)> = None;
        let mut min: Option<(usize, usize)> = None;
        for (key, c) in items {
            if max.is_none_or(|m| c > m.1) {
                max = Some((key, c));
            }
            if min.is_none_or(|m| c < m.1) {
                min = Some((key, c));
            }
        }
        (max, min)
    };
    let (pmax, pmin) = extremes(&mut point.iter().enumerate().map(|(i, &c)| (i + 2, c)));
    let balanced_points = pmax.map(|m| m.1) == pmin.map(|m| m.1);
    let point_witness = if balanced_points { None } else { Some((pmax.unwrap(), pmin.unwrap())) };

    let pair_iter = (0..labels).flat_map(|i| ((i + 1)..labels).map(move |j| (i, j)));
    let (qmax, qmin) = extremes(&mut pair_iter.clone().map(|(i, j)| (i * labels + j, pair[i * labels + j])));
    let balanced_pairs = qmax.map(|m| m.1) == qmin.map(|m| m.1);
    let unflat = |(key, c): (usize, usize)| (((key / labels) + 2, (key % labels) + 2), c);
    let pair_witness = if balanced_pairs {
        None
    } else {
        Some((unflat(qmax.unwrap()), unflat(qmin.unwrap())))
    };

    // overlap > 9k/10 <=> some (floor(9k/10) + 1)-subset is shared
    let threshold = (9 * k) / 10 + 1;
    let mut overlap_witness = None;
    if threshold <= k {
        let mut owner: HashMap<Vec<usize>, usize> = HashMap::new();
        'outer: for (id, p) in parts.iter().enumerate() {
            let mut hit = None;
            for_each_subset(p, threshold, |sub| match owner.get(sub) {
                Some(&other) if parts[other] != *p => {
                    hit = Some(other);
                    false
                }
                Some(_) => true,
                None => {
                    owner.insert(sub.to_vec(), id);
                    true
                }
            });
            if let Some(other) = hit {
                overlap_witness = Some((other, id));
                break 'outer;
            }
        }
    }
    let correctable = overlap_witness.is_none();

    FamilyReport {
        shape_ok,
        balanced_points,
        point_witness,
        balanced_pairs,
        pair_witness,
        correctable,
        overlap_witness,
        max_overlap: max_overlap(&parts, k),
    }
}

fn max_overlap(parts: &[Vec<usize>], k: usize) -> Option<usize> {
    if parts.len() < 2 {
        return Some(0);
    }
    let mut spent = 0u128;
    for s in (1..=k).rev() {
        spent += parts.len() as u128 * binomial(k, s);
        if spent > OVERLAP_SEARCH_BUDGET {
            return None;
        }
        let mut owner: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut found = false;
        for (id, p) in parts.iter().enumerate() {
            for_each_subset(p, s, |sub| match owner.get(sub) {
                Some(&other) if parts[other] != *p => {
                    found = true;
                    false
                }
                Some(_) => true,
                None => {
                    owner.insert(sub.to_vec(), id);
                    true
                }
            });
            if found {
                return Some(s);
            }
        }
    }
    Some(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_max_overlap(parts: &[Vec<usize>]) -> usize {
        let mut best = 0;
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                if parts[i] == parts[j] {
                    continue;
                }
                let c = parts[i].iter().filter(|x| parts[j].contains(x)).count();
                best = best.max(c);
            }
        }
        best
    }

    #[test]
    fn single_orbit_is_balanced() {
        let f = build_support_family(12, 5, 1, 0.9, &mut RngStream::new(1, 0)).unwrap();
        assert_eq!(f.d, 12);
        // 5 points in GF(11) have trivial affine stabilizer unless the set is a coset pattern
        let r = verify_family(&f);
        assert!(r.passed(), "{r:?}");
        assert!(f.len() <= 11 * 10);
        assert_eq!((11 * 10) % f.len(), 0);
    }

    #[test]
    fn orbit_size_is_group_order_for_generic_sets() {
        for seed in 0..5 {
            let f = build_support_family(14, 3, 1, 1.0, &mut RngStream::new(seed, 0)).unwrap();
            // orbit-stabilizer: the orbit size divides |AGL(1, 13)| = 156
            assert_eq!(156 % f.len(), 0, "{}", f.len());
            assert!(verify_family(&f).balanced_pairs);
        }
    }

    #[test]
    fn k_one_members() {
        let f = build_support_family(8, 1, 2, 0.9, &mut RngStream::new(2, 0)).unwrap();
        assert_eq!(f.d, 8);
        assert_eq!(f.len(), 7);
        assert!(f.members.iter().all(|m| m.len() == 2 && m[0] == 1));
        assert!(verify_family(&f).passed());
    }

    #[test]
    fn dimension_is_adjusted_to_prime_plus_one() {
        let f = build_support_family(10, 2, 1, 1.0, &mut RngStream::new(3, 0)).unwrap();
        assert_eq!(f.requested_d, 10);
        assert_eq!(f.d, 12);
    }

    #[test]
    fn unbalanced_witness() {
        let f = SupportFamily::from_members(5, 2, vec![vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        let r = verify_family(&f);
        assert!(!r.balanced_points);
        assert_eq!(r.point_witness, Some(((2, 2), (5, 0))));
        assert!(!r.passed());
    }

    #[test]
    fn single_member_passes() {
        let f = SupportFamily::from_members(6, 3, vec![vec![1, 2, 3, 4]]).unwrap();
        let r = verify_family(&f);
        assert!(r.correctable);
        assert_eq!(r.max_overlap, Some(0));
    }

    #[test]
    fn overlap_detection_matches_naive() {
        // k = 4: sharing 3 labels is within 9k/10 = 3.6
        let f = SupportFamily::from_members(
            12,
            4,
            vec![vec![1, 2, 3, 4, 5], vec![1, 2, 3, 4, 6], vec![1, 7, 8, 9, 10]],
        )
        .unwrap();
        let r = verify_family(&f);
        assert!(r.passed() || !r.balanced_points);
        assert!(r.correctable);
        let parts: Vec<Vec<usize>> = f.members.iter().map(|m| m[1..].to_vec()).collect();
        assert_eq!(r.max_overlap, Some(naive_max_overlap(&parts)));
        assert_eq!(r.max_overlap, Some(3));
    }

    #[test]
    fn overlap_beyond_nine_tenths_is_flagged() {
        // k = 20: 19 shared labels exceed 18
        let a: Vec<usize> = (1..=21).collect();
        let mut b: Vec<usize> = (1..=20).collect();
        b.push(30);
        let c: Vec<usize> = std::iter::once(1).chain(40..60).collect();
        let f = SupportFamily::from_members(60, 20, vec![a, c, b]).unwrap();
        let r = verify_family(&f);
        assert!(!r.correctable);
        assert_eq!(r.overlap_witness, Some((0, 2)));
        assert_eq!(r.max_overlap, Some(19));
    }

    #[test]
    fn generated_overlaps_agree_with_naive() {
        let f = build_support_family(14, 4, 2, 0.9, &mut RngStream::new(9, 0)).unwrap();
        let parts: Vec<Vec<usize>> = f.members.iter().map(|m| m[1..].to_vec()).collect();
        let r = verify_family(&f);
        assert_eq!(r.max_overlap, Some(naive_max_overlap(&parts)));
        assert!(r.max_overlap.unwrap() < 4);
    }

    #[test]
    fn infeasible_requests_fail() {
        // any two 3-sets in GF(5) share at least one point, and 1 >= 0.3 * 3
        let err = build_support_family(6, 3, 1, 0.3, &mut RngStream::new(0, 0));
        assert!(matches!(err, Err(Error::ConstructionFailed(_))));
        assert!(build_support_family(2, 1, 1, 0.9, &mut RngStream::new(0, 0)).is_err());
        assert!(build_support_family(6, 7, 1, 0.9, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn subset_enumeration_counts() {
        let mut n = 0;
        for_each_subset(&[1, 2, 3, 4, 5, 6], 3, |_| {
            n += 1;
            true
        });
        assert_eq!(n as u128, binomial(6, 3));
    }
}

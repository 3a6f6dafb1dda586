//! Balanced complexes and families, exhaustively or at random.
//!
//! A `(m, k)`-balanced complex is `skeleton(m, k)` plus any subset of the
//! `(k + 1)`-subsets of `[m]`; it is identified by the mask of the
//! `(k + 1)`-sets it *misses*, indexed in increasing bitmask order.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{subsets_of_size, Complex, VertexSet};
use crate::error::{param, Result};
use crate::joins::Family;

/// The `(k + 1)`-subsets of `[m]` in mask-bit order.
pub fn top_sets(m: usize, k: usize) -> Vec<VertexSet> {
    subsets_of_size(m, k + 1).collect()
}

/// The balanced complex missing exactly the given `(k + 1)`-sets.
pub fn balanced_missing(m: usize, k: usize, missing: &[VertexSet]) -> Result<Complex> {
    if k >= m {
        return param(format!("balance parameter k = {k} needs k < m = {m}"));
    }
    let mut facets: Vec<VertexSet> = subsets_of_size(m, k).collect();
    facets.extend(top_sets(m, k).into_iter().filter(|s| !missing.contains(s)));
    Complex::from_facets(m, &facets)
}

/// The balanced complex whose missing sets are the set bits of `mask`.
pub fn balanced_from_mask(m: usize, k: usize, mask: u128) -> Result<Complex> {
    let missing: Vec<VertexSet> = top_sets(m, k)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i < 128 && mask & (1u128 << i) != 0)
        .map(|(_, s)| s)
        .collect();
    balanced_missing(m, k, &missing)
}

/// A random balanced complex: the number of missing sets is uniform in
/// `0..=max_missing` (capped at the number of `(k + 1)`-sets) and the sets
/// themselves are a uniform choice of that size.
pub fn random_balanced<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    max_missing: Option<usize>,
    rng: &mut R,
) -> Result<Complex> {
    let tops = top_sets(m, k);
    let cap = max_missing.unwrap_or(tops.len()).min(tops.len());
    let t = rng.gen_range(0..=cap);
    let missing: Vec<VertexSet> = tops.choose_multiple(rng, t).copied().collect();
    balanced_missing(m, k, &missing)
}

/// Every `(m, k)`-balanced family of length `r`, when there are at most
/// `limit` of them.
pub fn all_balanced_families(m: usize, k: usize, r: usize, limit: u64) -> Option<Vec<Family>> {
    let n = subsets_of_size(m, k + 1).count();
    let bits = n.checked_mul(r)?;
    if bits >= 63 || (1u64 << bits) > limit {
        return None;
    }
    let complexes: Vec<Complex> = (0..(1u128 << n))
        .map(|mask| balanced_from_mask(m, k, mask).expect("valid parameters"))
        .collect();
    let total = 1usize << bits;
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let members = (0..r)
            .map(|_| {
                let idx = c & ((1 << n) - 1);
                c >>= n;
                complexes[idx].clone()
            })
            .collect();
        out.push(Family::new(members).expect("equal grounds"));
    }
    Some(out)
}

/// `count` random balanced families of length `r`.
pub fn random_balanced_families<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    r: usize,
    count: usize,
    max_missing: Option<usize>,
    rng: &mut R,
) -> Result<Vec<Family>> {
    (0..count)
        .map(|_| {
            let members = (0..r)
                .map(|_| random_balanced(m, k, max_missing, rng))
                .collect::<Result<Vec<_>>>()?;
            Family::new(members)
        })
        .collect()
}

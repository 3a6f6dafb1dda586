//! Collective unavoidability of ordered families.
//!
//! `⟨K_1, ..., K_r⟩` is collectively unavoidable when every ordered tuple of
//! pairwise disjoint sets `(A_1, ..., A_r)` has some `A_i ∈ K_i`. Because the
//! `K_i` are downward closed it is enough to look at tuples covering `[m]`: any
//! violating tuple stays violating after its leftover elements are added to `A_1`.
//!
//! For `(m, k)`-balanced families the question reduces to the deficiency
//! `d = r(k + 2) - m` and, when `1 < d <= r`, to the absence of a `d`-clique in
//! the `r`-partite Kneser graph of the missing `(k + 1)`-sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{binomial, Complex, VertexSet};
use crate::error::{param, Error, Result};
use crate::joins::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Deficiency,
    Clique,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Deficiency => "deficiency",
            Method::Clique => "clique",
        })
    }
}

/// Evidence against unavoidability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Blocks `(A_1, ..., A_r)` covering `[m]` with `A_i ∉ K_i` for all `i`.
    Partition(Vec<VertexSet>),
    /// Pairwise disjoint missing sets from distinct parts, as `(part, set)`.
    Clique(Vec<(usize, VertexSet)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: bool,
    pub method: Method,
    pub witness: Option<Witness>,
}

impl Certificate {
    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            verdict: self.verdict,
            method: self.method,
            witness: self.witness.as_ref().map(|w| match w {
                Witness::Partition(blocks) => {
                    WitnessFile::Partition(blocks.iter().map(|b| b.to_vec()).collect())
                }
                Witness::Clique(members) => WitnessFile::Clique(
                    members
                        .iter()
                        .map(|&(part, set)| CliqueMember {
                            part: part + 1,
                            set: set.to_vec(),
                        })
                        .collect(),
                ),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("certificate serializes")
    }
}

/// `{"verdict": bool, "method": "brute|deficiency|clique", "witness": ... | null}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub verdict: bool,
    pub method: Method,
    pub witness: Option<WitnessFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessFile {
    Partition(Vec<Vec<usize>>),
    Clique(Vec<CliqueMember>),
}

/// Clique vertex with a 1-based part index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueMember {
    pub part: usize,
    pub set: Vec<usize>,
}

/// True iff `blocks` is a violating tuple: `A_i ∉ K_i` for every `i`.
pub fn is_violating(blocks: &[VertexSet], fam: &Family) -> bool {
    blocks.len() == fam.r()
        && blocks
            .iter()
            .zip(fam.complexes())
            .all(|(a, k)| !k.contains(*a))
}

/// Exhaustive search over the `r^m` covering assignments.
pub fn is_collectively_unavoidable_bruteforce(fam: &Family) -> Certificate {
    let m = fam.ground();
    let mut blocks = vec![VertexSet::EMPTY; fam.r()];
    // `inside` counts blocks whose current prefix is still a face; each of them
    // needs one more element to escape, so more of them than elements left
    // means no violation below this node
    fn go(v: usize, m: usize, blocks: &mut Vec<VertexSet>, fam: &Family) -> bool {
        let inside = blocks
            .iter()
            .zip(fam.complexes())
            .filter(|(a, k)| k.contains(**a))
            .count();
        if inside > m + 1 - v {
            return false;
        }
        if v > m {
            return true;
        }
        for i in 0..blocks.len() {
            let old = blocks[i];
            blocks[i] = old.with(v);
            if go(v + 1, m, blocks, fam) {
                return true;
            }
            blocks[i] = old;
        }
        false
    }
    let found = go(1, m, &mut blocks, fam);
    Certificate {
        verdict: !found,
        method: Method::Brute,
        witness: found.then_some(Witness::Partition(blocks)),
    }
}

/// The `r`-partite Kneser graph on missing `(k + 1)`-sets.
#[derive(Clone, Debug)]
pub struct KneserGraph {
    parts: Vec<Vec<VertexSet>>,
    /// flat vertex list `(part, set)`, parts in order
    vertices: Vec<(usize, VertexSet)>,
    adjacency: Vec<Vec<u64>>,
}

impl KneserGraph {
    /// Builds the graph directly from missing-set lists.
    pub fn from_parts(parts: Vec<Vec<VertexSet>>) -> Self {
        let vertices: Vec<(usize, VertexSet)> = parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |&s| (i, s)))
            .collect();
        let n = vertices.len();
        let words = n.div_ceil(64);
        let mut adjacency = vec![vec![0u64; words]; n];
        for x in 0..n {
            for y in 0..n {
                let (px, sx) = vertices[x];
                let (py, sy) = vertices[y];
                if px != py && sx.is_disjoint(sy) {
                    adjacency[x][y / 64] |= 1 << (y % 64);
                }
            }
        }
        KneserGraph {
            parts,
            vertices,
            adjacency,
        }
    }

    pub fn parts(&self) -> &[Vec<VertexSet>] {
        &self.parts
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[(usize, VertexSet)] {
        &self.vertices
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacency[x][y / 64] & (1 << (y % 64)) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency
            .iter()
            .map(|row| row.iter().map(|w| w.count_ones() as usize).sum::<usize>())
            .sum::<usize>()
            / 2
    }
}

/// Part `i` lists the `(k + 1)`-subsets of `[m]` missing from `K_i`.
pub fn build_kneser_graph(fam: &Family, k: usize) -> Result<KneserGraph> {
    if !fam.is_balanced(k) {
        return Err(Error::NotBalanced {
            m: fam.ground(),
            k,
        });
    }
    Ok(KneserGraph::from_parts(
        fam.complexes().iter().map(|c| c.missing_sets(k + 1)).collect(),
    ))
}

/// Searches for `d` pairwise adjacent vertices; they necessarily lie in `d`
/// distinct parts. Parts are tried smallest first and candidate sets are kept
/// as adjacency bit rows.
pub fn has_d_clique(g: &KneserGraph, d: usize) -> Option<Vec<(usize, VertexSet)>> {
    if d == 0 {
        return Some(Vec::new());
    }
    let n = g.vertex_count();
    let words = n.div_ceil(64);
    // vertex ids ordered by ascending part size
    let mut part_order: Vec<usize> = (0..g.parts.len()).collect();
    part_order.sort_by_key(|&p| (g.parts[p].len(), p));
    let mut rank = vec![0usize; g.parts.len()];
    for (pos, &p) in part_order.iter().enumerate() {
        rank[p] = pos;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (rank[g.vertices[x].0], x));

    let mut all = vec![0u64; words];
    for x in 0..n {
        all[x / 64] |= 1 << (x % 64);
    }

    fn extend(
        g: &KneserGraph,
        order: &[usize],
        start: usize,
        candidates: &[u64],
        chosen: &mut Vec<usize>,
        d: usize,
    ) -> bool {
        if chosen.len() == d {
            return true;
        }
        for pos in start..order.len() {
            if order.len() - pos < d - chosen.len() {
                break;
            }
            let x = order[pos];
            if candidates[x / 64] & (1 << (x % 64)) == 0 {
                continue;
            }
            let next: Vec<u64> = candidates
                .iter()
                .zip(&g.adjacency[x])
                .map(|(a, b)| a & b)
                .collect();
            chosen.push(x);
            if extend(g, order, pos + 1, &next, chosen, d) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::with_capacity(d);
    extend(g, &order, 0, &all, &mut chosen, d).then(|| {
        let mut members: Vec<(usize, VertexSet)> = chosen.iter().map(|&x| g.vertices[x]).collect();
        members.sort();
        members
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeficiencyCase {
    /// `d > r`
    Always,
    /// `d < 1`
    Never,
    /// `d = 1`: only the full `(k + 1)`-skeleta work.
    FullSkeletaOnly,
    /// `1 < d <= r`
    CliqueTest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeficiencyClass {
    pub d: i64,
    pub case: DeficiencyCase,
    /// For `FullSkeletaOnly`: whether every `K_i` equals `skeleton(m, k + 1)`.
    pub all_full: Option<bool>,
}

pub fn deficiency(m: usize, r: usize, k: usize) -> i64 {
    r as i64 * (k as i64 + 2) - m as i64
}

/// Classifies a balanced family by `d = r(k + 2) - m`.
pub fn classify_deficiency(fam: &Family, k: usize) -> DeficiencyClass {
    let r = fam.r();
    let d = deficiency(fam.ground(), r, k);
    let case = if d > r as i64 {
        DeficiencyCase::Always
    } else if d < 1 {
        DeficiencyCase::Never
    } else if d == 1 {
        DeficiencyCase::FullSkeletaOnly
    } else {
        DeficiencyCase::CliqueTest
    };
    let all_full = (case == DeficiencyCase::FullSkeletaOnly).then(|| {
        fam.complexes()
            .iter()
            .all(|c| c.missing_sets(k + 1).is_empty() && c.is_balanced(k))
    });
    DeficiencyClass { d, case, all_full }
}

/// Fills the positions not in `fixed` with consecutive runs from `rest`, the
/// last run taking whatever is left.
fn fill_partition(
    r: usize,
    fixed: &[(usize, VertexSet)],
    rest: VertexSet,
    run: usize,
) -> Vec<VertexSet> {
    let mut blocks = vec![VertexSet::EMPTY; r];
    for &(i, s) in fixed {
        blocks[i] = s;
    }
    let free: Vec<usize> = (0..r).filter(|i| !fixed.iter().any(|(j, _)| j == i)).collect();
    let mut elems = rest.iter();
    for (n, &i) in free.iter().enumerate() {
        let take = if n + 1 == free.len() { usize::MAX } else { run };
        for v in elems.by_ref().take(take) {
            blocks[i] = blocks[i].with(v);
        }
    }
    blocks
}

/// Decides unavoidability; balanced families (for this `k`) go through the
/// deficiency classification, everything else through exhaustive search.
pub fn is_collectively_unavoidable(fam: &Family, k: usize) -> Certificate {
    if !fam.is_balanced(k) {
        return is_collectively_unavoidable_bruteforce(fam);
    }
    let m = fam.ground();
    let r = fam.r();
    let full = VertexSet::full(m);
    let class = classify_deficiency(fam, k);
    match class.case {
        DeficiencyCase::Always => Certificate {
            verdict: true,
            method: Method::Deficiency,
            witness: None,
        },
        DeficiencyCase::Never => Certificate {
            verdict: false,
            method: Method::Deficiency,
            // m > r(k + 2): blocks of k + 2 or more elements are faces of nothing
            witness: Some(Witness::Partition(fill_partition(r, &[], full, k + 2))),
        },
        DeficiencyCase::FullSkeletaOnly => {
            let missing = fam
                .complexes()
                .iter()
                .enumerate()
                .find_map(|(i, c)| c.missing_sets(k + 1).first().map(|&a| (i, a)));
            match missing {
                None => Certificate {
                    verdict: true,
                    method: Method::Deficiency,
                    witness: None,
                },
                Some((i, a)) => Certificate {
                    verdict: false,
                    method: Method::Deficiency,
                    witness: Some(Witness::Partition(fill_partition(
                        r,
                        &[(i, a)],
                        full.difference(a),
                        k + 2,
                    ))),
                },
            }
        }
        DeficiencyCase::CliqueTest => {
            let g = build_kneser_graph(fam, k).expect("balance checked above");
            let clique = has_d_clique(&g, class.d as usize);
            Certificate {
                verdict: clique.is_none(),
                method: Method::Clique,
                witness: clique.map(Witness::Clique),
            }
        }
    }
}

/// Turns a clique witness into a violating partition: clique sets in their
/// parts, the rest of `[m]` in runs of `k + 2`.
pub fn clique_to_partition(fam: &Family, k: usize, clique: &[(usize, VertexSet)]) -> Vec<VertexSet> {
    let used = clique
        .iter()
        .fold(VertexSet::EMPTY, |acc, (_, s)| acc.union(*s));
    fill_partition(fam.r(), clique, VertexSet::full(fam.ground()).difference(used), k + 2)
}

/// A family of skeleta together with the sufficiency condition
/// `m = Σ m_i + r - 1`.
#[derive(Clone, Debug)]
pub struct SkeletaFamily {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub condition_holds: bool,
}

pub fn skeleta_family(m: usize, sizes: &[usize]) -> Result<SkeletaFamily> {
    if sizes.is_empty() {
        return param("at least one skeleton size is required");
    }
    let complexes = sizes
        .iter()
        .map(|&c| Complex::skeleton(m, c))
        .collect::<Result<Vec<_>>>()?;
    let condition_holds = sizes.iter().sum::<usize>() + sizes.len() - 1 == m;
    Ok(SkeletaFamily {
        family: Family::new(complexes)?,
        sizes: sizes.to_vec(),
        condition_holds,
    })
}

/// Arithmetic side of the balanced Van Kampen-Flores setting with `r` parts,
/// target dimension `d`, skeleton parameter `k` and `s` parts of the larger size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VkfParameters {
    pub r: u64,
    pub d: i64,
    pub k: i64,
    pub s: i64,
    pub r_is_prime_power: bool,
    pub s_in_range: bool,
    /// `m = s(k + 2) + (r - s)(k + 1) + r - 1`
    pub m: i64,
    /// `N = m - 1`
    pub n: i64,
    /// `rk + s >= (r - 1)d`
    pub dimension_condition: bool,
    /// `N >= (r - 1)(d + 2)`
    pub size_condition: bool,
    /// `rk + s = (r - 1)d`
    pub tight_dimension: bool,
    /// `N = (r - 1)(d + 2)`
    pub tight_size: bool,
    /// `m - r - 1 >= (r - 1)(d + 1) - 1`
    pub connectivity_suffices: bool,
    /// `m - r - 1 >= (r - 1)(d + 1) - 1` agrees with the size condition.
    pub connectivity_matches_size: bool,
}

impl VkfParameters {
    /// `tight_dimension ⟺ tight_size`, which holds identically for this `m`.
    pub fn equivalence_holds(&self) -> bool {
        self.tight_dimension == self.tight_size
    }
}

pub fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|p| n.is_multiple_of(*p)).expect("n >= 2 has a divisor");
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    rest == 1
}

pub fn vkf_parameters(r: u64, d: i64, k: i64, s: i64) -> VkfParameters {
    let ri = r as i64;
    let m = s * (k + 2) + (ri - s) * (k + 1) + ri - 1;
    let n = m - 1;
    let size_condition = n >= (ri - 1) * (d + 2);
    let connectivity_suffices = m - ri > (ri - 1) * (d + 1) - 1;
    VkfParameters {
        r,
        d,
        k,
        s,
        r_is_prime_power: is_prime_power(r),
        s_in_range: 0 <= s && s < ri,
        m,
        n,
        dimension_condition: ri * k + s >= (ri - 1) * d,
        size_condition,
        tight_dimension: ri * k + s == (ri - 1) * d,
        tight_size: n == (ri - 1) * (d + 2),
        connectivity_suffices,
        connectivity_matches_size: connectivity_suffices == size_condition,
    }
}

/// Number of balanced complexes for given `(m, k)`: one per subset of the
/// `(k + 1)`-sets.
pub fn balanced_complex_count(m: usize, k: usize) -> Option<u128> {
    let n = binomial(m, k + 1);
    (n < 128).then(|| 1u128 << n)
}

//! Exact reduced integral homology.
//!
//! Chain groups are spanned by the cells of a complex in their stored order; the
//! boundary of a cell with vertex sequence `v_0, ..., v_n` is
//! `Σ (-1)^t [v_0, ..., v̂_t, ..., v_n]`, and vertices map to the empty simplex
//! so that the homology computed is the reduced one. Ranks and torsion come from
//! a Smith normal form: unit pivots are eliminated sparsely in `i64` and whatever
//! is left is finished densely over arbitrary-precision integers.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{param, Error, Result};
use crate::joins::JoinComplex;

/// A column-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from dense rows.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.columns[j].push((i, v));
                }
            }
        }
        m
    }

    pub(crate) fn from_columns(rows: usize, mut columns: Vec<Vec<(usize, i64)>>) -> Self {
        for c in &mut columns {
            c.sort_unstable();
        }
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j]
            .iter()
            .find(|&&(r, _)| r == i)
            .map_or(0, |&(_, v)| v)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols()]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                out[i][j] = v;
            }
        }
        out
    }

    /// `self * other`, or `None` if an entry overflows.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let mut columns = Vec::with_capacity(other.cols());
        for col in &other.columns {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    let e = acc.entry(i).or_insert(0);
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            let mut c: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
            c.sort_unstable();
            columns.push(c);
        }
        Some(SparseMatrix {
            rows: self.rows,
            columns,
        })
    }

    /// One `row col value` line per nonzero entry (0-based), after a
    /// `# rows cols` header.
    pub fn to_triplets(&self) -> String {
        let mut s = format!("# {} {}\n", self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                writeln!(s, "{i} {j} {v}").expect("writing to a string");
            }
        }
        s
    }
}

/// Nonzero invariant factors of `m`, in divisibility order. Their number is
/// the rank.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigUint> {
    let mut cols = m.columns.clone();
    let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); m.rows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, _) in col {
            row_cols[i].push(j);
        }
    }
    let mut unit_pivots = 0usize;
    let mut overflowed = false;
    let mut progress = true;
    while progress && !overflowed {
        progress = false;
        for c in 0..cols.len() {
            // prefer the unit whose row touches the fewest columns
            let Some(&(r, u)) = cols[c]
                .iter()
                .filter(|&&(_, v)| v == 1 || v == -1)
                .min_by_key(|&&(i, _)| row_cols[i].len())
            else {
                continue;
            };
            let pivot = std::mem::take(&mut cols[c]);
            let others: Vec<usize> = row_cols[r].iter().copied().filter(|&x| x != c).collect();
            for c2 in others {
                let f = cols[c2]
                    .iter()
                    .find(|&&(i, _)| i == r)
                    .map(|&(_, v)| v * u)
                    .expect("row index is consistent");
                match axpy(&cols[c2], &pivot, f) {
                    Some(new) => {
                        update_rows(&mut row_cols, c2, &cols[c2], &new);
                        cols[c2] = new;
                    }
                    None => {
                        overflowed = true;
                        break;
                    }
                }
            }
            if overflowed {
                cols[c] = pivot;
                break;
            }
            for &(i, _) in &pivot {
                row_cols[i].retain(|&x| x != c);
            }
            unit_pivots += 1;
            progress = true;
        }
    }

    let live_cols: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    let mut live_rows: Vec<usize> = live_cols
        .iter()
        .flat_map(|&j| cols[j].iter().map(|&(i, _)| i))
        .collect();
    live_rows.sort_unstable();
    live_rows.dedup();
    let mut factors = vec![BigUint::one(); unit_pivots];
    if !live_cols.is_empty() {
        let row_pos: HashMap<usize, usize> =
            live_rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (q, &j) in live_cols.iter().enumerate() {
            for &(i, v) in &cols[j] {
                dense[row_pos[&i]][q] = BigInt::from(v);
            }
        }
        factors.extend(dense_smith_diagonal(dense));
    }
    factors
}

/// `a - f * b` for sorted sparse columns.
fn axpy(a: &[(usize, i64)], b: &[(usize, i64)], f: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let take_a = y == b.len() || (x < a.len() && a[x].0 < b[y].0);
        let take_b = x == a.len() || (y < b.len() && b[y].0 < a[x].0);
        if take_a {
            out.push(a[x]);
            x += 1;
        } else if take_b {
            out.push((b[y].0, f.checked_mul(b[y].1)?.checked_neg()?));
            y += 1;
        } else {
            let v = a[x].1.checked_sub(f.checked_mul(b[y].1)?)?;
            if v != 0 {
                out.push((a[x].0, v));
            }
            x += 1;
            y += 1;
        }
    }
    Some(out)
}

fn update_rows(
    row_cols: &mut [Vec<usize>],
    c: usize,
    old: &[(usize, i64)],
    new: &[(usize, i64)],
) {
    for &(i, _) in old {
        if new.binary_search_by_key(&i, |&(r, _)| r).is_err() {
            row_cols[i].retain(|&x| x != c);
        }
    }
    for &(i, _) in new {
        if old.binary_search_by_key(&i, |&(r, _)| r).is_err() {
            row_cols[i].push(c);
        }
    }
}

/// Diagonal of the Smith normal form of a dense matrix, nonzero entries only.
#[allow(clippy::needless_range_loop)]
pub fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..rows {
                        let d = &q * &a[i][t];
                        a[i][j] -= d;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // a smaller remainder appeared in row or column t; make it the pivot
                let (pi, pj) = min_abs_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs().to_biguint().expect("absolute value"));
    }
    diag
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |x: &BigInt, b: &BigInt| !x.is_zero() && (b.is_zero() || x.abs() < b.abs());
    for i in t..a.len() {
        if better(&a[i][t], &a[best.0][best.1]) {
            best = (i, t);
        }
    }
    for j in t..a[t].len() {
        if better(&a[t][j], &a[best.0][best.1]) {
            best = (t, j);
        }
    }
    best
}

/// The augmented cellular chain complex of a simplicial or join complex.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// 1 when the empty simplex is present, else 0
    minus_one: usize,
    void: bool,
    counts: Vec<usize>,
    /// `boundaries[p]` maps `C_p` to `C_{p-1}`; `boundaries[0]` is the augmentation
    boundaries: Vec<SparseMatrix>,
}

/// Anything with an ordered cell basis and simplicial boundaries.
pub trait HasChains {
    fn chain_complex(&self) -> ChainComplex;
}

impl HasChains for JoinComplex {
    fn chain_complex(&self) -> ChainComplex {
        ChainComplex::from_join(self, self.has_empty_simplex())
    }
}

impl HasChains for Complex {
    fn chain_complex(&self) -> ChainComplex {
        ChainComplex::from_join(&JoinComplex::from_complex(self), !self.is_void())
    }
}

impl ChainComplex {
    fn from_join(j: &JoinComplex, empty_simplex: bool) -> Self {
        let counts = j.counts();
        let minus_one = usize::from(empty_simplex);
        let mut boundaries = Vec::with_capacity(counts.len());
        for (p, &n) in counts.iter().enumerate() {
            let range = j.dim_range(p);
            let mut columns = Vec::with_capacity(n);
            if p == 0 {
                for _ in range {
                    columns.push(if empty_simplex { vec![(0, 1)] } else { Vec::new() });
                }
                boundaries.push(SparseMatrix::from_columns(minus_one, columns));
                continue;
            }
            let below = j.dim_range(p - 1).start;
            for id in range {
                let cell = j.cell(id);
                let col = cell
                    .vertex_sequence()
                    .into_iter()
                    .enumerate()
                    .map(|(t, (block, v))| {
                        let face = cell.lower(v, block).expect("vertex lies in its block");
                        let fid = j.id_of(&face).expect("join complexes are face closed");
                        (fid - below, if t % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                columns.push(col);
            }
            boundaries.push(SparseMatrix::from_columns(counts[p - 1], columns));
        }
        ChainComplex {
            minus_one,
            void: !empty_simplex && counts.is_empty(),
            counts,
            boundaries,
        }
    }

    /// Number of cells in each dimension `0..=top`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn has_empty_simplex(&self) -> bool {
        self.minus_one == 1
    }

    pub fn is_void(&self) -> bool {
        self.void
    }

    /// `∂_p : C_p → C_{p-1}`, with `p = 0` the augmentation; `None` above the top.
    pub fn boundary(&self, p: usize) -> Option<&SparseMatrix> {
        self.boundaries.get(p)
    }

    /// Checks `∂_{p-1} ∂_p = 0` for every `p`.
    pub fn check_boundary_squared(&self) -> Result<()> {
        for p in 1..self.boundaries.len() {
            let prod = self.boundaries[p - 1].mul(&self.boundaries[p]);
            if !prod.is_some_and(|m| m.is_zero()) {
                return Err(Error::NotChainComplex(format!(
                    "boundary of boundary is nonzero in degree {p}"
                )));
            }
        }
        Ok(())
    }

    /// Reduced homology in dimensions `0..=max_dim` (all of them by default).
    pub fn homology(&self, max_dim: Option<usize>) -> Result<HomologyProfile> {
        self.check_boundary_squared()?;
        let top = self.counts.len();
        let upto = max_dim.map_or(top, |d| (d + 1).min(top));
        // factors[p] are the invariant factors of ∂_p, computed as needed
        let mut factors: Vec<Vec<BigUint>> = Vec::new();
        for p in 0..=upto {
            factors.push(match self.boundaries.get(p) {
                Some(b) => invariant_factors(b),
                None => Vec::new(),
            });
        }
        let rank = |p: usize| factors.get(p).map_or(0, Vec::len);
        let mut betti = Vec::new();
        let mut torsion = Vec::new();
        for p in 0..upto {
            betti.push(self.counts[p] - rank(p) - rank(p + 1));
            torsion.push(
                factors
                    .get(p + 1)
                    .map(|f| f.iter().filter(|x| !x.is_one()).cloned().collect())
                    .unwrap_or_default(),
            );
        }
        Ok(HomologyProfile {
            void: self.void,
            minus_one: self.minus_one - rank(0),
            betti,
            torsion,
        })
    }
}

/// Reduced homology `H̃_p` for `p = 0..betti.len()`, plus `H̃_{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    /// the complex has no simplices at all, not even the empty one
    pub void: bool,
    /// rank of `H̃_{-1}`: 1 exactly for the complex `{∅}`
    pub minus_one: usize,
    pub betti: Vec<usize>,
    /// torsion coefficients of `H̃_p` greater than one
    pub torsion: Vec<Vec<BigUint>>,
}

impl HomologyProfile {
    pub fn betti(&self, p: usize) -> usize {
        self.betti.get(p).copied().unwrap_or(0)
    }

    pub fn torsion(&self, p: usize) -> &[BigUint] {
        self.torsion.get(p).map_or(&[], Vec::as_slice)
    }

    /// True iff `H̃_p` vanishes for all `p` in `-1..=c`.
    pub fn vanishes_through(&self, c: i64) -> bool {
        if c < -1 {
            return true;
        }
        !self.void
            && self.minus_one == 0
            && (0..(c + 1) as usize).all(|p| self.betti(p) == 0 && self.torsion(p).is_empty())
    }

    /// True iff the reduced homology is that of `S^n`.
    pub fn is_homology_sphere(&self, n: i64) -> bool {
        let expected = |p: i64| usize::from(p == n);
        self.minus_one == expected(-1)
            && self.torsion.iter().all(Vec::is_empty)
            && (0..self.betti.len()).all(|p| self.betti[p] == expected(p as i64))
            && (n < 0 || (n as usize) < self.betti.len())
    }

    /// `Σ (-1)^p rank H̃_p`, which equals the reduced Euler characteristic.
    pub fn reduced_euler(&self) -> i64 {
        let mut e = -(self.minus_one as i64);
        for (p, &b) in self.betti.iter().enumerate() {
            e += if p % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        e
    }

    pub fn to_file(&self) -> HomologyFile {
        HomologyFile {
            betti: self.betti.clone(),
            torsion: self
                .torsion
                .iter()
                .map(|t| t.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("profile serializes")
    }
}

/// `{"betti": [...], "torsion": [[...], ...]}`; torsion coefficients are
/// decimal strings so that large ones survive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyFile {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<String>>,
}

/// Reduced homology of anything with chains.
pub fn reduced_homology<X: HasChains + ?Sized>(
    x: &X,
    max_dim: Option<usize>,
) -> Result<HomologyProfile> {
    x.chain_complex().homology(max_dim)
}

/// Exact check that `H̃_p(x) = 0` for `p <= c`; with `c >= 1` this is
/// homological, not homotopical, connectivity.
pub fn verify_connectivity_homology<X: HasChains + ?Sized>(x: &X, c: i64) -> Result<bool> {
    if c < -1 {
        return param(format!("connectivity level {c} is below -1"));
    }
    let profile = reduced_homology(x, Some(c.max(0) as usize))?;
    Ok(profile.vanishes_through(c))
}

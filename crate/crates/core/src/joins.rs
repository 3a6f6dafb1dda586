//! Deleted joins and symmetrized deleted joins.
//!
//! A cell is an ordered partition `(A_1, ..., A_r; B)` of `[m]` with at least one
//! nonempty block; its dimension is `m - |B| - 1`. Block indices in this API are
//! 0-based (`block(0)` is `A_1`).

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, ComplexFile, VertexSet};
use crate::error::{param, Error, Result};

/// An ordered `r`-tuple of complexes on a common ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    ground: usize,
    complexes: Vec<Complex>,
}

impl Family {
    pub fn new(complexes: Vec<Complex>) -> Result<Self> {
        let Some(first) = complexes.first() else {
            return param("a family needs at least one complex");
        };
        let ground = first.ground();
        if let Some(bad) = complexes.iter().find(|k| k.ground() != ground) {
            return Err(Error::GroundMismatch {
                expected: ground,
                found: bad.ground(),
            });
        }
        Ok(Family { ground, complexes })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn r(&self) -> usize {
        self.complexes.len()
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn complex(&self, i: usize) -> &Complex {
        &self.complexes[i]
    }

    /// `⟨K_{perm[0]}, ..., K_{perm[r-1]}⟩`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.r())?;
        Family::new(perm.iter().map(|&i| self.complexes[i].clone()).collect())
    }

    /// True iff every member is `(m, k)`-balanced.
    pub fn is_balanced(&self, k: usize) -> bool {
        self.complexes.iter().all(|c| c.is_balanced(k))
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            m: self.ground,
            complexes: self.complexes.iter().map(Complex::to_file).collect(),
        }
    }

    pub fn from_file(file: &FamilyFile) -> Result<Self> {
        let complexes = file
            .complexes
            .iter()
            .map(Complex::from_file)
            .collect::<Result<Vec<_>>>()?;
        let fam = Family::new(complexes)?;
        if fam.ground != file.m {
            return Err(Error::GroundMismatch {
                expected: file.m,
                found: fam.ground,
            });
        }
        Ok(fam)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub m: usize,
    pub complexes: Vec<ComplexFile>,
}

fn check_permutation(perm: &[usize], r: usize) -> Result<()> {
    let mut seen = vec![false; r];
    if perm.len() != r {
        return param(format!("permutation of length {} for r = {r}", perm.len()));
    }
    for &p in perm {
        if p >= r || seen[p] {
            return param(format!("{perm:?} is not a permutation of 0..{r}"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// An ordered partition `(A_1, ..., A_r; B)` of `[m]`, not all `A_i` empty.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JoinCell {
    blocks: Vec<VertexSet>,
    remainder: VertexSet,
}

impl JoinCell {
    /// Builds the cell with the given blocks; `B` is whatever of `[m]` is left.
    pub fn new(m: usize, blocks: Vec<VertexSet>) -> Result<Self> {
        let full = VertexSet::full(m);
        let mut used = VertexSet::EMPTY;
        for b in &blocks {
            if !b.is_subset(full) {
                return param(format!("block {b} not contained in [1, {m}]"));
            }
            if !b.is_disjoint(used) {
                return param("blocks of a join cell must be pairwise disjoint");
            }
            used = used.union(*b);
        }
        if blocks.is_empty() || used.is_empty() {
            return param("a join cell needs a nonempty block");
        }
        Ok(JoinCell {
            blocks,
            remainder: full.difference(used),
        })
    }

    /// Parses 1-based vertex lists for the blocks.
    pub fn from_lists(m: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let sets = blocks
            .iter()
            .map(|b| VertexSet::new(m, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, sets)
    }

    /// Skips validation; callers guarantee the partition invariants.
    pub(crate) fn from_parts(blocks: Vec<VertexSet>, remainder: VertexSet) -> Self {
        JoinCell { blocks, remainder }
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> VertexSet {
        self.blocks[i]
    }

    pub fn remainder(&self) -> VertexSet {
        self.remainder
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum::<usize>() + self.remainder.len()
    }

    /// `m - |B| - 1`.
    pub fn dimension(&self) -> usize {
        self.ground() - self.remainder.len() - 1
    }

    /// `Σ|A_i| - 1`; always equal to [`JoinCell::dimension`].
    pub fn dimension_from_blocks(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum::<usize>() - 1
    }

    /// `|B| <= r - 1`.
    pub fn is_large(&self) -> bool {
        self.remainder.len() < self.r()
    }

    /// Moves `v` from `B` into block `i`; `None` if `v` is not in `B`.
    pub fn raise(&self, v: usize, i: usize) -> Option<JoinCell> {
        if !self.remainder.contains(v) {
            return None;
        }
        let mut blocks = self.blocks.clone();
        blocks[i] = blocks[i].with(v);
        Some(JoinCell {
            blocks,
            remainder: self.remainder.without(v),
        })
    }

    /// Moves `v` from block `i` into `B`; `None` if `v` is not in block `i` or
    /// the result would be the empty cell.
    pub fn lower(&self, v: usize, i: usize) -> Option<JoinCell> {
        if !self.blocks[i].contains(v) || self.dimension_from_blocks() == 0 {
            return None;
        }
        let mut blocks = self.blocks.clone();
        blocks[i] = blocks[i].without(v);
        Some(JoinCell {
            blocks,
            remainder: self.remainder.with(v),
        })
    }

    /// All facets: one element moved from some `A_i` to `B`.
    pub fn faces(&self) -> Vec<JoinCell> {
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for v in b.iter() {
                if let Some(f) = self.lower(v, i) {
                    out.push(f);
                }
            }
        }
        out
    }

    /// Vertex sequence `A_1 (ascending), ..., A_r (ascending)` as `(block, vertex)`.
    pub fn vertex_sequence(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |v| (i, v)))
            .collect()
    }

    /// The cell with block `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<JoinCell> {
        check_permutation(perm, self.r())?;
        let mut blocks = vec![VertexSet::EMPTY; self.r()];
        for (i, &p) in perm.iter().enumerate() {
            blocks[p] = self.blocks[i];
        }
        Ok(JoinCell {
            blocks,
            remainder: self.remainder,
        })
    }

    pub fn to_file(&self) -> JoinCellFile {
        JoinCellFile {
            a: self.blocks.iter().map(|b| b.to_vec()).collect(),
            b: self.remainder.to_vec(),
        }
    }

    pub fn from_file(m: usize, file: &JoinCellFile) -> Result<Self> {
        let cell = Self::from_lists(m, &file.a)?;
        if cell.remainder.to_vec() != file.b {
            return Err(Error::Format(format!(
                "remainder {:?} does not complete the blocks to [1, {m}]",
                file.b
            )));
        }
        Ok(cell)
    }
}

impl fmt::Display for JoinCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ";{})", self.remainder)
    }
}

impl fmt::Debug for JoinCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{"A": [[...], ...], "B": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinCellFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<usize>>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
}

fn check_cell(cell: &JoinCell, fam: &Family) -> Result<()> {
    if cell.ground() != fam.ground() {
        return Err(Error::GroundMismatch {
            expected: fam.ground(),
            found: cell.ground(),
        });
    }
    if cell.r() != fam.r() {
        return param(format!("cell has {} blocks, family has r = {}", cell.r(), fam.r()));
    }
    Ok(())
}

/// True iff `A_i ∈ K_i` for every `i`.
pub fn in_deleted_join(cell: &JoinCell, fam: &Family) -> Result<bool> {
    check_cell(cell, fam)?;
    Ok(blocks_in_order(&cell.blocks, fam))
}

fn blocks_in_order(blocks: &[VertexSet], fam: &Family) -> bool {
    blocks
        .iter()
        .zip(fam.complexes())
        .all(|(a, k)| k.contains(*a))
}

/// Is there a bijection `φ` with `blocks[i] ∈ K_{φ(i)}`?
fn blocks_matchable(blocks: &[VertexSet], fam: &Family) -> bool {
    fn go(i: usize, used: u64, blocks: &[VertexSet], fam: &Family) -> bool {
        if i == blocks.len() {
            return true;
        }
        (0..fam.r()).any(|j| {
            used & (1 << j) == 0
                && fam.complex(j).contains(blocks[i])
                && go(i + 1, used | (1 << j), blocks, fam)
        })
    }
    go(0, 0, blocks, fam)
}

/// True iff the cell lies in the symmetrized deleted join.
pub fn in_symmetrized_join(cell: &JoinCell, fam: &Family) -> Result<bool> {
    check_cell(cell, fam)?;
    Ok(blocks_matchable(&cell.blocks, fam))
}

/// All permutations `φ` (as `phi[i]` = 0-based index of the complex receiving
/// block `i`) with `A_i ∈ K_{φ(i)}` for every `i`, in lexicographic order.
pub fn phi_set(cell: &JoinCell, fam: &Family) -> Result<Vec<Vec<usize>>> {
    check_cell(cell, fam)?;
    let r = fam.r();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn go(
        cell: &JoinCell,
        fam: &Family,
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = current.len();
        if i == fam.r() {
            out.push(current.clone());
            return;
        }
        for j in 0..fam.r() {
            if !used[j] && fam.complex(j).contains(cell.block(i)) {
                used[j] = true;
                current.push(j);
                go(cell, fam, used, current, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    go(cell, fam, &mut vec![false; r], &mut current, &mut out);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JoinKind {
    Deleted,
    Symmetrized,
}

impl JoinKind {
    fn admits(self, blocks: &[VertexSet], fam: &Family) -> bool {
        match self {
            JoinKind::Deleted => blocks_in_order(blocks, fam),
            JoinKind::Symmetrized => blocks_matchable(blocks, fam),
        }
    }
}

/// Upper bound `(r + 1)^m - 1` on the number of cells, saturating.
pub fn estimate_cells(m: usize, r: usize) -> u64 {
    (r as u64 + 1).checked_pow(m as u32).map_or(u64::MAX, |n| n - 1)
}

/// A materialized (symmetrized) deleted join.
///
/// Cells are sorted by dimension and then by the tuple of blocks; a cell's
/// position in [`JoinComplex::cells`] is its id.
#[derive(Clone, Debug)]
pub struct JoinComplex {
    family: Family,
    kind: JoinKind,
    cells: Vec<JoinCell>,
    dim_start: Vec<usize>,
    index: HashMap<JoinCell, usize>,
}

impl JoinComplex {
    pub fn build(family: &Family, kind: JoinKind) -> Self {
        let m = family.ground();
        let r = family.r();
        let mut cells = Vec::new();
        let mut blocks = vec![VertexSet::EMPTY; r];
        // elements are placed in increasing order; every prefix of a member
        // is a member, so infeasible prefixes are cut immediately
        fn place(
            v: usize,
            m: usize,
            remainder: VertexSet,
            blocks: &mut Vec<VertexSet>,
            fam: &Family,
            kind: JoinKind,
            cells: &mut Vec<JoinCell>,
        ) {
            if v > m {
                if remainder.len() < m {
                    cells.push(JoinCell::from_parts(blocks.clone(), remainder));
                }
                return;
            }
            place(v + 1, m, remainder.with(v), blocks, fam, kind, cells);
            for i in 0..blocks.len() {
                let old = blocks[i];
                blocks[i] = old.with(v);
                if kind.admits(blocks, fam) {
                    place(v + 1, m, remainder, blocks, fam, kind, cells);
                }
                blocks[i] = old;
            }
        }
        place(1, m, VertexSet::EMPTY, &mut blocks, family, kind, &mut cells);
        Self::from_cells(family.clone(), kind, cells)
    }

    /// Like [`JoinComplex::build`] but refuses when `(r + 1)^m - 1` exceeds `max_cells`.
    pub fn build_capped(family: &Family, kind: JoinKind, max_cells: u64) -> Result<Self> {
        let estimate = estimate_cells(family.ground(), family.r());
        if estimate > max_cells {
            return Err(Error::CapExceeded {
                estimate,
                cap: max_cells,
            });
        }
        Ok(Self::build(family, kind))
    }

    pub fn symmetrized(family: &Family) -> Self {
        Self::build(family, JoinKind::Symmetrized)
    }

    pub fn deleted(family: &Family) -> Self {
        Self::build(family, JoinKind::Deleted)
    }

    /// A simplicial complex viewed as a one-fold join: cells `(A; [m] ∖ A)`.
    pub fn from_complex(k: &Complex) -> Self {
        let fam = Family::new(vec![k.clone()]).expect("single complex is a family");
        Self::deleted(&fam)
    }

    fn from_cells(family: Family, kind: JoinKind, mut cells: Vec<JoinCell>) -> Self {
        cells.sort_unstable_by(|a, b| a.dimension().cmp(&b.dimension()).then_with(|| a.cmp(b)));
        let top = cells.last().map_or(0, |c| c.dimension() + 1);
        let mut dim_start = vec![0; top + 1];
        for c in &cells {
            dim_start[c.dimension() + 1] += 1;
        }
        for p in 1..dim_start.len() {
            dim_start[p] += dim_start[p - 1];
        }
        let index = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        JoinComplex {
            family,
            kind,
            cells,
            dim_start,
            index,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> JoinKind {
        self.kind
    }

    pub fn ground(&self) -> usize {
        self.family.ground()
    }

    pub fn r(&self) -> usize {
        self.family.r()
    }

    pub fn cells(&self) -> &[JoinCell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &JoinCell {
        &self.cells[id]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Top dimension, `None` when there are no cells.
    pub fn dimension(&self) -> Option<usize> {
        self.cells.last().map(JoinCell::dimension)
    }

    /// Ids of the `p`-cells.
    pub fn dim_range(&self, p: usize) -> std::ops::Range<usize> {
        if p + 1 >= self.dim_start.len() {
            return self.cells.len()..self.cells.len();
        }
        self.dim_start[p]..self.dim_start[p + 1]
    }

    pub fn cells_of_dim(&self, p: usize) -> &[JoinCell] {
        &self.cells[self.dim_range(p)]
    }

    /// Number of cells in each dimension `0..=top`.
    pub fn counts(&self) -> Vec<usize> {
        (0..self.dim_start.len() - 1)
            .map(|p| self.dim_range(p).len())
            .collect()
    }

    pub fn id_of(&self, cell: &JoinCell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn contains(&self, cell: &JoinCell) -> bool {
        self.index.contains_key(cell)
    }

    /// Ids of the facets of cell `id` (all of them are cells by face closure).
    pub fn facet_ids(&self, id: usize) -> Vec<usize> {
        self.cells[id]
            .faces()
            .iter()
            .map(|f| self.index[f])
            .collect()
    }

    /// Whether the empty simplex `(∅, ..., ∅; [m])` belongs to the join; it is
    /// never listed as a cell but matters for reduced homology.
    pub fn has_empty_simplex(&self) -> bool {
        self.kind
            .admits(&vec![VertexSet::EMPTY; self.r()], &self.family)
    }

    /// True iff every facet of every cell is a cell.
    pub fn is_face_closed(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.faces().iter().all(|f| self.contains(f)))
    }

    pub fn to_file(&self) -> JoinComplexFile {
        let top = self.dimension().map_or(0, |d| d + 1);
        JoinComplexFile {
            kind: self.kind,
            family: self.family.to_file(),
            cells: (0..top)
                .map(|p| self.cells_of_dim(p).iter().map(JoinCell::to_file).collect())
                .collect(),
        }
    }

    /// Rebuilds from a file, checking the listed cells against the family.
    pub fn from_file(file: &JoinComplexFile) -> Result<Self> {
        let family = Family::from_file(&file.family)?;
        let rebuilt = Self::build(&family, file.kind);
        let listed = file
            .cells
            .iter()
            .flatten()
            .map(|c| JoinCell::from_file(family.ground(), c))
            .collect::<Result<Vec<_>>>()?;
        if listed.len() != rebuilt.len() || listed.iter().any(|c| !rebuilt.contains(c)) {
            return Err(Error::Format(
                "listed cells disagree with the family's join".into(),
            ));
        }
        Ok(rebuilt)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("join file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: JoinComplexFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Family plus per-dimension cell arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinComplexFile {
    pub kind: JoinKind,
    pub family: FamilyFile,
    pub cells: Vec<Vec<JoinCellFile>>,
}

//! The stepwise pivot matching on join complexes and its certificates.
//!
//! For a cell `(A_1, ..., A_r; B)` the passport is `(a_1, ..., a_r)` with
//! `a_i = min((A_i ∪ B) ∖ [1, a_{i-1}])`, `a_0 = 0`, and `a_i = ∞` once the set is
//! empty. Step `k` of the matching pairs each still-unmatched cell with the cell
//! obtained by toggling `a_k` between `B` and `A_k`, provided both are cells and
//! neither was matched at an earlier step.
//!
//! Steps are reported 1-based, matching the block names `A_1..A_r`.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::complex::VertexSet;
use crate::error::{Error, Result};
use crate::joins::{JoinCell, JoinComplex};

/// Default cap on inspected gradient-path segments.
pub const DEFAULT_PATH_BUDGET: usize = 1_000_000;

/// One passport coordinate; `Infinite` sorts above every vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PassportEntry {
    Finite(usize),
    Infinite,
}

impl fmt::Display for PassportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PassportEntry::Finite(a) => write!(f, "{a}"),
            PassportEntry::Infinite => write!(f, "∞"),
        }
    }
}

/// `(a_1, ..., a_r)`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Passport(pub Vec<PassportEntry>);

impl Passport {
    pub fn entries(&self) -> &[PassportEntry] {
        &self.0
    }

    /// Finite entries strictly increase and nothing finite follows an `∞`.
    pub fn is_well_formed(&self) -> bool {
        self.0.windows(2).all(|w| match (w[0], w[1]) {
            (PassportEntry::Finite(a), PassportEntry::Finite(b)) => a < b,
            (PassportEntry::Finite(_), PassportEntry::Infinite) => true,
            (PassportEntry::Infinite, e) => e == PassportEntry::Infinite,
        })
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// First `len` passport entries.
fn passport_prefix(cell: &JoinCell, len: usize) -> Vec<PassportEntry> {
    let b = cell.remainder();
    let mut floor = VertexSet::EMPTY;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        if out.last() == Some(&PassportEntry::Infinite) {
            out.push(PassportEntry::Infinite);
            continue;
        }
        match cell.block(i).union(b).difference(floor).min() {
            Some(a) => {
                out.push(PassportEntry::Finite(a));
                floor = VertexSet::up_to(a);
            }
            None => out.push(PassportEntry::Infinite),
        }
    }
    out
}

pub fn passport(cell: &JoinCell) -> Passport {
    Passport(passport_prefix(cell, cell.r()))
}

/// One matched pair: `upper` is `lower` with `pivot` moved from `B` to `A_step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientPair {
    pub lower: JoinCell,
    pub upper: JoinCell,
    pub step: usize,
    pub pivot: usize,
}

/// A discrete vector field on a join complex.
#[derive(Clone, Debug, Default)]
pub struct GradientField {
    pub pairs: Vec<GradientPair>,
    pub unmatched: Vec<JoinCell>,
}

impl GradientField {
    /// A field from explicit pairs; every cell of `j` not in a pair is unmatched.
    /// `step` and `pivot` are filled in from block position and moved vertex.
    pub fn from_pairs(j: &JoinComplex, pairs: Vec<(JoinCell, JoinCell)>) -> Self {
        let mut touched = vec![false; j.len()];
        let pairs: Vec<GradientPair> = pairs
            .into_iter()
            .map(|(lower, upper)| {
                for c in [&lower, &upper] {
                    if let Some(id) = j.id_of(c) {
                        touched[id] = true;
                    }
                }
                let (step, pivot) = lower
                    .blocks()
                    .iter()
                    .zip(upper.blocks())
                    .enumerate()
                    .find_map(|(i, (a, b))| b.difference(*a).min().map(|v| (i + 1, v)))
                    .unwrap_or((0, 0));
                GradientPair {
                    lower,
                    upper,
                    step,
                    pivot,
                }
            })
            .collect();
        let unmatched = (0..j.len())
            .filter(|&id| !touched[id])
            .map(|id| j.cell(id).clone())
            .collect();
        GradientField { pairs, unmatched }
    }

    pub fn pairs_at_step(&self, step: usize) -> impl Iterator<Item = &GradientPair> {
        self.pairs.iter().filter(move |p| p.step == step)
    }

    /// Number of unmatched cells per dimension.
    pub fn critical_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for c in &self.unmatched {
            let d = c.dimension();
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    /// `up[id]` is the id of the cell `id` is matched upward to.
    fn up_map(&self, j: &JoinComplex) -> Vec<Option<usize>> {
        let mut up = vec![None; j.len()];
        for p in &self.pairs {
            if let (Some(l), Some(u)) = (j.id_of(&p.lower), j.id_of(&p.upper)) {
                up[l] = Some(u);
            }
        }
        up
    }
}

/// Runs the matching with cells visited in id order.
pub fn build_matching(j: &JoinComplex) -> Result<GradientField> {
    let order: Vec<usize> = (0..j.len()).collect();
    build_matching_ordered(j, &order)
}

/// Runs the matching visiting cells in `order` within each step. The result
/// does not depend on `order`; the parameter exists so that can be checked.
pub fn build_matching_ordered(j: &JoinComplex, order: &[usize]) -> Result<GradientField> {
    if order.len() != j.len() {
        return Err(Error::Parameter(format!(
            "visit order has {} entries for {} cells",
            order.len(),
            j.len()
        )));
    }
    let r = j.r();
    let mut matched = vec![false; j.len()];
    let mut pairs = Vec::new();
    for step in 1..=r {
        let k = step - 1;
        let mut found: Vec<(usize, usize, usize)> = Vec::new();
        for &id in order {
            if matched[id] {
                continue;
            }
            let cell = j.cell(id);
            let prefix = passport_prefix(cell, step);
            let PassportEntry::Finite(pivot) = prefix[k] else {
                continue;
            };
            // pairs are discovered from their lower cell
            let Some(upper) = cell.raise(pivot, k) else {
                continue;
            };
            let Some(uid) = j.id_of(&upper) else {
                continue;
            };
            if matched[uid] {
                continue;
            }
            if passport_prefix(&upper, step) != prefix {
                return Err(Error::Consistency(format!(
                    "step {step}: {cell} and {upper} disagree on the pivot prefix"
                )));
            }
            found.push((id, uid, pivot));
        }
        for &(l, u, pivot) in &found {
            if matched[l] || matched[u] {
                return Err(Error::Consistency(format!(
                    "step {step}: cell matched twice within one step"
                )));
            }
            matched[l] = true;
            matched[u] = true;
            pairs.push((step, l, u, pivot));
        }
    }
    pairs.sort_unstable();
    Ok(GradientField {
        pairs: pairs
            .into_iter()
            .map(|(step, l, u, pivot)| GradientPair {
                lower: j.cell(l).clone(),
                upper: j.cell(u).clone(),
                step,
                pivot,
            })
            .collect(),
        unmatched: (0..j.len())
            .filter(|&id| !matched[id])
            .map(|id| j.cell(id).clone())
            .collect(),
    })
}

/// Each cell is matched at most once, each pair is a facet/cofacet pair of
/// cells of `j`, and pairs together with `unmatched` cover `j` exactly.
pub fn verify_matching(j: &JoinComplex, g: &GradientField) -> bool {
    let mut seen = vec![false; j.len()];
    let mut mark = |cell: &JoinCell| match j.id_of(cell) {
        Some(id) if !seen[id] => {
            seen[id] = true;
            true
        }
        _ => false,
    };
    for p in &g.pairs {
        if !mark(&p.lower) || !mark(&p.upper) {
            return false;
        }
        if !p.upper.faces().contains(&p.lower) {
            return false;
        }
    }
    if !g.unmatched.iter().all(&mut mark) {
        return false;
    }
    seen.into_iter().all(|s| s)
}

/// True iff no closed gradient path exists.
///
/// In each dimension the arcs are `α → α'` for `α` matched up to `β` and `α' ≠ α`
/// a facet of `β`; a closed path is exactly a directed cycle of this graph.
/// Meant for fields that pass [`verify_matching`].
pub fn verify_acyclicity(j: &JoinComplex, g: &GradientField) -> bool {
    find_closed_path(j, g).is_none()
}

/// A closed gradient path (its `α` cells, in order) if one exists.
pub fn find_closed_path(j: &JoinComplex, g: &GradientField) -> Option<Vec<JoinCell>> {
    let up = g.up_map(j);
    let successors = |a: usize| -> Vec<usize> {
        match up[a] {
            Some(b) => j.facet_ids(b).into_iter().filter(|&x| x != a).collect(),
            None => Vec::new(),
        }
    };
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; j.len()];
    for start in 0..j.len() {
        if color[start] != 0 || up[start].is_none() {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(start, successors(start), 0)];
        color[start] = 1;
        while let Some((node, succ, pos)) = stack.last_mut() {
            if *pos == succ.len() {
                color[*node] = 2;
                stack.pop();
                continue;
            }
            let next = succ[*pos];
            *pos += 1;
            match color[next] {
                0 => {
                    color[next] = 1;
                    let s = successors(next);
                    stack.push((next, s, 0));
                }
                1 => {
                    let from = stack.iter().position(|(n, _, _)| *n == next).unwrap();
                    return Some(stack[from..].iter().map(|(n, _, _)| j.cell(*n).clone()).collect());
                }
                _ => {}
            }
        }
    }
    None
}

/// Outcome of checking that passports never increase along gradient paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCheck {
    pub holds: bool,
    /// Path segments `α ↗ β ↘ α'` inspected.
    pub segments: usize,
    /// False when the budget ran out before every segment was seen.
    pub complete: bool,
    pub counterexample: Option<(JoinCell, JoinCell)>,
}

/// Checks `passport(α') <= passport(α)` on gradient-path segments `α ↗ β ↘ α'`.
///
/// Every gradient path is a concatenation of such segments and the order is
/// transitive, so checking all segments covers every path; `budget` caps the
/// number inspected.
pub fn passport_monotone_check(j: &JoinComplex, g: &GradientField, budget: usize) -> MonotoneCheck {
    let mut segments = 0;
    for p in &g.pairs {
        let before = passport(&p.lower);
        for next in p.upper.faces() {
            if next == p.lower {
                continue;
            }
            if segments == budget {
                return MonotoneCheck {
                    holds: true,
                    segments,
                    complete: false,
                    counterexample: None,
                };
            }
            segments += 1;
            debug_assert!(j.contains(&next));
            if passport(&next).cmp(&before) == Ordering::Greater {
                return MonotoneCheck {
                    holds: false,
                    segments,
                    complete: false,
                    counterexample: Some((p.lower.clone(), next)),
                };
            }
        }
    }
    MonotoneCheck {
        holds: true,
        segments,
        complete: true,
        counterexample: None,
    }
}

/// How an unmatched cell looked at one step of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepType {
    /// `a_k ∈ B`: the cell would have been the lower end of its pair.
    Lower,
    /// `a_k ∈ A_k`: the cell would have been the upper end.
    Upper,
    /// `a_k = ∞`.
    Exhausted,
}

/// Per-step bookkeeping for a cell.
pub fn step_types(cell: &JoinCell) -> Vec<StepType> {
    passport(cell)
        .0
        .iter()
        .map(|e| match e {
            PassportEntry::Infinite => StepType::Exhausted,
            PassportEntry::Finite(a) if cell.remainder().contains(*a) => StepType::Lower,
            PassportEntry::Finite(_) => StepType::Upper,
        })
        .collect()
}

/// The cell `({1}, ∅, ..., ∅; [m] ∖ {1})`.
pub fn base_cell(m: usize, r: usize) -> JoinCell {
    let mut blocks = vec![VertexSet::EMPTY; r];
    blocks[0] = VertexSet::singleton(1);
    JoinCell::new(m, blocks).expect("base cell is a valid partition")
}

/// Unmatched cells split into the base vertex, large cells (`|B| <= r - 1`) and
/// everything else.
///
/// The base is `({1}, ∅, ..., ∅; [m] ∖ {1})`. When vertex 1 lies in no `K_i` that
/// cell does not exist, and the least critical 0-cell takes its place: any single
/// critical vertex anchors the connectivity argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalReport {
    pub m: usize,
    pub r: usize,
    pub base: Option<JoinCell>,
    pub large: Vec<JoinCell>,
    pub violations: Vec<JoinCell>,
}

impl CriticalReport {
    /// Only the base vertex and large cells are critical.
    pub fn theorem_holds(&self) -> bool {
        self.violations.is_empty() && self.base.is_some()
    }

    pub fn critical_count(&self) -> usize {
        self.base.iter().count() + self.large.len() + self.violations.len()
    }
}

pub fn critical_report(j: &JoinComplex, g: &GradientField) -> CriticalReport {
    let (m, r) = (j.ground(), j.r());
    let base_expected = base_cell(m, r);
    let mut report = CriticalReport {
        m,
        r,
        base: None,
        large: Vec::new(),
        violations: Vec::new(),
    };
    let anchor = if j.contains(&base_expected) {
        Some(base_expected)
    } else {
        g.unmatched
            .iter()
            .filter(|c| c.dimension() == 0)
            .min_by_key(|c| (c.is_large(), j.id_of(c)))
            .cloned()
    };
    for c in &g.unmatched {
        if Some(c) == anchor.as_ref() {
            report.base = Some(c.clone());
        } else if c.is_large() {
            report.large.push(c.clone());
        } else {
            report.violations.push(c.clone());
        }
    }
    report
}

/// Connectivity implied by a critical-cell report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// `c`-connected with `c = (least dimension of a non-base critical cell) - 1`.
    AtLeast(i64),
    /// Only the base vertex is critical.
    Contractible,
}

impl Connectivity {
    /// Does this certify `c`-connectivity?
    pub fn covers(self, c: i64) -> bool {
        match self {
            Connectivity::AtLeast(n) => n >= c,
            Connectivity::Contractible => true,
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectivity::AtLeast(n) => write!(f, "{n}-connected"),
            Connectivity::Contractible => write!(f, "contractible"),
        }
    }
}

/// One critical vertex plus critical cells of dimension `>= n` give an
/// `(n - 1)`-connected complex.
pub fn connectivity_lower_bound(report: &CriticalReport) -> Result<Connectivity> {
    if !report.violations.is_empty() {
        return Err(Error::NoCertificate(format!(
            "{} critical cells are neither the base vertex nor large",
            report.violations.len()
        )));
    }
    if report.base.is_none() {
        return Err(Error::NoCertificate("the base vertex is not critical".into()));
    }
    Ok(report
        .large
        .iter()
        .map(|c| c.dimension() as i64 - 1)
        .min()
        .map_or(Connectivity::Contractible, Connectivity::AtLeast))
}

/// The modified Hasse diagram: matched facet arcs point up, all other facet
/// arcs point down, critical cells are filled.
pub fn to_dot(j: &JoinComplex, g: &GradientField) -> String {
    let up = g.up_map(j);
    let mut critical = vec![false; j.len()];
    for c in &g.unmatched {
        if let Some(id) = j.id_of(c) {
            critical[id] = true;
        }
    }
    let mut out = String::new();
    out.push_str("digraph gradient {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    for p in 0..=j.dimension().unwrap_or(0) {
        let range = j.dim_range(p);
        if range.is_empty() {
            continue;
        }
        let _ = writeln!(out, "  subgraph dim{p} {{\n    rank=same;");
        for id in range {
            let style = if critical[id] {
                ", style=filled, fillcolor=gold"
            } else {
                ""
            };
            let _ = writeln!(out, "    c{id} [label=\"{}\"{style}];", j.cell(id));
        }
        out.push_str("  }\n");
    }
    for upper in 0..j.len() {
        for lower in j.facet_ids(upper) {
            if up[lower] == Some(upper) {
                let _ = writeln!(out, "  c{lower} -> c{upper} [color=red, penwidth=2];");
            } else {
                let _ = writeln!(out, "  c{upper} -> c{lower};");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Complex;
    use crate::joins::Family;
    use PassportEntry::{Finite, Infinite};

    fn cell(m: usize, blocks: &[&[usize]]) -> JoinCell {
        JoinCell::from_lists(m, &blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn points2() -> JoinComplex {
        let k = Complex::from_facet_lists(2, &[vec![1], vec![2]]).unwrap();
        JoinComplex::symmetrized(&Family::new(vec![k.clone(), k]).unwrap())
    }

    #[test]
    fn passports_by_hand() {
        assert_eq!(
            passport(&cell(4, &[&[1], &[], &[]])).0,
            vec![Finite(1), Finite(2), Finite(3)]
        );
        assert_eq!(passport(&cell(4, &[&[1, 2], &[3, 4]])).0, vec![Finite(1), Finite(3)]);
        assert_eq!(passport(&cell(2, &[&[2], &[1]])).0, vec![Finite(2), Infinite]);
        assert!(Passport(vec![Infinite, Finite(3)]) > Passport(vec![Finite(9), Infinite]));
        assert!(!Passport(vec![Infinite, Finite(3)]).is_well_formed());
    }

    #[test]
    fn two_point_matching_by_hand() {
        let j = points2();
        let g = build_matching(&j).unwrap();
        assert_eq!(
            g.pairs,
            vec![
                GradientPair {
                    lower: cell(2, &[&[], &[1]]),
                    upper: cell(2, &[&[2], &[1]]),
                    step: 1,
                    pivot: 2,
                },
                GradientPair {
                    lower: cell(2, &[&[], &[2]]),
                    upper: cell(2, &[&[1], &[2]]),
                    step: 1,
                    pivot: 1,
                },
            ]
        );
        assert_eq!(g.unmatched, vec![cell(2, &[&[1], &[]]), cell(2, &[&[2], &[]])]);
        assert!(verify_matching(&j, &g));
        assert!(verify_acyclicity(&j, &g));

        let report = critical_report(&j, &g);
        assert_eq!(report.base, Some(cell(2, &[&[1], &[]])));
        assert_eq!(report.large, vec![cell(2, &[&[2], &[]])]);
        assert!(report.violations.is_empty());
        assert!(report.theorem_holds());
        assert_eq!(connectivity_lower_bound(&report).unwrap(), Connectivity::AtLeast(-1));
        assert_eq!(
            step_types(&cell(2, &[&[2], &[]])),
            vec![StepType::Lower, StepType::Exhausted]
        );
    }

    #[test]
    fn broken_fields_are_rejected() {
        let j = points2();
        let a = cell(2, &[&[], &[2]]);
        let b = cell(2, &[&[1], &[2]]);
        let c = cell(2, &[&[1], &[]]);
        // one cell in two pairs
        let g = GradientField::from_pairs(&j, vec![(a.clone(), b.clone()), (c.clone(), b.clone())]);
        assert!(!verify_matching(&j, &g));
        // not incident
        let d = cell(2, &[&[2], &[1]]);
        let g = GradientField::from_pairs(&j, vec![(a.clone(), d)]);
        assert!(!verify_matching(&j, &g));
        // coverage broken by dropping an unmatched cell
        let mut g = build_matching(&j).unwrap();
        g.unmatched.pop();
        assert!(!verify_matching(&j, &g));
    }

    #[test]
    fn cyclic_field_on_triangle_boundary() {
        let boundary = Complex::skeleton(3, 2).unwrap();
        let j = JoinComplex::from_complex(&boundary);
        let v = |x: &[usize]| cell(3, &[x]);
        let g = GradientField::from_pairs(
            &j,
            vec![
                (v(&[1]), v(&[1, 2])),
                (v(&[2]), v(&[2, 3])),
                (v(&[3]), v(&[1, 3])),
            ],
        );
        assert!(verify_matching(&j, &g));
        assert!(!verify_acyclicity(&j, &g));
        assert_eq!(find_closed_path(&j, &g).unwrap().len(), 3);
    }

    #[test]
    fn violations_block_the_certificate() {
        let report = CriticalReport {
            m: 4,
            r: 2,
            base: Some(base_cell(4, 2)),
            large: vec![],
            violations: vec![cell(4, &[&[2], &[]])],
        };
        assert!(matches!(connectivity_lower_bound(&report), Err(Error::NoCertificate(_))));
        let contractible = CriticalReport {
            violations: vec![],
            ..report
        };
        assert_eq!(
            connectivity_lower_bound(&contractible).unwrap(),
            Connectivity::Contractible
        );
    }

    #[test]
    fn missing_first_vertex_uses_another_anchor() {
        // vertex 1 is in neither complex, so ({1},∅;{2}) is not a cell
        let k = Complex::from_facet_lists(2, &[vec![2]]).unwrap();
        let j = JoinComplex::symmetrized(&Family::new(vec![k.clone(), k]).unwrap());
        assert_eq!(j.len(), 2);
        let g = build_matching(&j).unwrap();
        let report = critical_report(&j, &g);
        assert_eq!(report.base, Some(cell(2, &[&[], &[2]])));
        assert!(report.theorem_holds());
        assert_eq!(
            connectivity_lower_bound(&report).unwrap(),
            Connectivity::AtLeast(-1)
        );
    }

    #[test]
    fn dot_marks_matched_arcs_and_criticals() {
        let j = points2();
        let g = build_matching(&j).unwrap();
        let dot = to_dot(&j, &g);
        assert_eq!(dot.matches("color=red").count(), 2);
        assert_eq!(dot.matches("fillcolor=gold").count(), 2);
    }

    #[test]
    fn path_check_on_two_points() {
        let j = points2();
        let g = build_matching(&j).unwrap();
        let check = passport_monotone_check(&j, &g, DEFAULT_PATH_BUDGET);
        assert!(check.holds && check.complete);
        assert_eq!(check.segments, 2);
    }
}

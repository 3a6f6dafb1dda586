//! Simplicial complexes on the ground set `[m] = {1, ..., m}`.
//!
//! Faces are stored as bitmasks (`m <= 30`), so disjointness, union and
//! inclusion are single word operations. Throughout the crate sizes are
//! *cardinalities*: `skeleton(m, c)` is every subset with at most `c` elements,
//! i.e. faces of dimension at most `c - 1`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 30;

/// Ground sets up to this size get a dense membership bitmap.
const DENSE_INDEX_LIMIT: usize = 20;

/// A subset of `[m]`, bit `v - 1` standing for vertex `v`.
///
/// The order is by cardinality first and then lexicographic on the ascending
/// vertex lists, which is the canonical face order used everywhere.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// Builds a set from 1-based vertices, rejecting anything outside `[1, m]`
    /// and repeated vertices.
    pub fn new(m: usize, vertices: &[usize]) -> Result<Self> {
        if m > MAX_GROUND {
            return param(format!("ground set size {m} exceeds {MAX_GROUND}"));
        }
        let mut bits = 0u32;
        for &v in vertices {
            if v == 0 || v > m {
                return param(format!("vertex {v} outside [1, {m}]"));
            }
            let b = 1u32 << (v - 1);
            if bits & b != 0 {
                return param(format!("vertex {v} repeated"));
            }
            bits |= b;
        }
        Ok(VertexSet(bits))
    }

    pub const fn from_bits(bits: u32) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The whole ground set `[m]`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_GROUND);
        VertexSet((1u32 << m) - 1)
    }

    /// The integer interval `[1, a]`; `[1, 0]` is empty.
    pub fn up_to(a: usize) -> Self {
        Self::full(a.min(MAX_GROUND))
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&v));
        VertexSet(1 << (v - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=32).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | Self::singleton(v).0)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !Self::singleton(v).0)
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn complement(self, m: usize) -> Self {
        Self::full(m).difference(self)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest vertex, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize + 1;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut sub = Some(full);
        std::iter::from_fn(move || {
            let cur = sub?;
            sub = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(VertexSet(cur))
        })
    }

    /// The sets obtained by deleting one vertex.
    pub fn facets(self) -> impl Iterator<Item = VertexSet> {
        self.iter().map(move |v| self.without(v))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Iterates all `c`-element subsets of `[m]` in increasing bitmask order.
pub fn subsets_of_size(m: usize, c: usize) -> impl Iterator<Item = VertexSet> {
    let limit: u64 = 1u64 << m;
    let mut next: Option<u64> = if c > m {
        None
    } else {
        Some((1u64 << c) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            Some((((ripple ^ cur) >> 2) / low) | ripple)
        };
        Some(VertexSet(cur as u32))
    })
}

#[derive(Clone)]
enum FaceIndex {
    Dense(Vec<u64>),
    Sparse(HashSet<u32>),
}

impl FaceIndex {
    fn build(m: usize, faces: &[VertexSet]) -> Self {
        if m <= DENSE_INDEX_LIMIT {
            let mut words = vec![0u64; (1usize << m).div_ceil(64)];
            for f in faces {
                let b = f.0 as usize;
                words[b / 64] |= 1 << (b % 64);
            }
            FaceIndex::Dense(words)
        } else {
            FaceIndex::Sparse(faces.iter().map(|f| f.0).collect())
        }
    }

    fn contains(&self, face: VertexSet) -> bool {
        match self {
            FaceIndex::Dense(words) => {
                let b = face.0 as usize;
                words.get(b / 64).is_some_and(|w| w & (1 << (b % 64)) != 0)
            }
            FaceIndex::Sparse(set) => set.contains(&face.0),
        }
    }
}

/// A downward-closed family of subsets of `[m]`.
///
/// A complex with no faces at all (the void complex) is distinct from `{∅}`.
#[derive(Clone)]
pub struct Complex {
    ground: usize,
    faces: Vec<VertexSet>,
    index: FaceIndex,
}

impl Complex {
    fn from_sorted_faces(ground: usize, mut faces: Vec<VertexSet>) -> Self {
        faces.sort_unstable();
        faces.dedup();
        let index = FaceIndex::build(ground, &faces);
        Complex {
            ground,
            faces,
            index,
        }
    }

    fn check_ground(m: usize) -> Result<()> {
        if m == 0 || m > MAX_GROUND {
            return param(format!("ground set size must lie in [1, {MAX_GROUND}], got {m}"));
        }
        Ok(())
    }

    /// The void complex on `[m]`.
    pub fn void(m: usize) -> Result<Self> {
        Self::check_ground(m)?;
        Ok(Self::from_sorted_faces(m, Vec::new()))
    }

    /// All subsets of `[m]` with at most `c` elements.
    pub fn skeleton(m: usize, c: usize) -> Result<Self> {
        Self::check_ground(m)?;
        if c > m {
            return param(format!("skeleton cardinality {c} exceeds m = {m}"));
        }
        let faces = (0..=c).flat_map(|s| subsets_of_size(m, s)).collect();
        Ok(Self::from_sorted_faces(m, faces))
    }

    /// Downward closure of `facets`. An empty facet list gives the void complex.
    pub fn from_facets(m: usize, facets: &[VertexSet]) -> Result<Self> {
        Self::check_ground(m)?;
        let full = VertexSet::full(m);
        let mut seen = HashSet::new();
        for f in facets {
            if !f.is_subset(full) {
                return param(format!("facet {f} not contained in [1, {m}]"));
            }
            if seen.contains(&f.0) {
                continue;
            }
            seen.extend(f.subsets().map(|s| s.0));
        }
        let faces = seen.into_iter().map(VertexSet).collect();
        Ok(Self::from_sorted_faces(m, faces))
    }

    /// Same as [`Complex::from_facets`] with facets given as 1-based vertex lists.
    pub fn from_facet_lists(m: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let sets = facets
            .iter()
            .map(|f| VertexSet::new(m, f))
            .collect::<Result<Vec<_>>>()?;
        Self::from_facets(m, &sets)
    }

    /// Builds `{A ⊆ [m] : keep(A)}`; `keep` must describe a downward-closed family.
    pub fn from_predicate(m: usize, keep: impl Fn(VertexSet) -> bool) -> Result<Self> {
        Self::check_ground(m)?;
        let faces = (0..(1u64 << m))
            .map(|b| VertexSet(b as u32))
            .filter(|&f| keep(f))
            .collect();
        let k = Self::from_sorted_faces(m, faces);
        if !k.is_downward_closed() {
            return param("predicate does not describe a downward-closed family");
        }
        Ok(k)
    }

    /// The minimal six-vertex triangulation of the real projective plane,
    /// obtained as the antipodal quotient of the regular icosahedron.
    pub fn rp2_minimal() -> Self {
        let triangles = icosahedral_rp2_triangles();
        Self::from_facets(6, &triangles).expect("projective plane fits on six vertices")
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Faces in canonical order (cardinality, then lexicographic).
    pub fn faces(&self) -> &[VertexSet] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    /// True for the void complex, which has no faces at all.
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, face: VertexSet) -> bool {
        self.index.contains(face)
    }

    /// Largest face dimension; `None` for the void complex, `Some(-1)` for `{∅}`.
    pub fn dimension(&self) -> Option<isize> {
        self.faces.last().map(|f| f.len() as isize - 1)
    }

    /// Number of faces of each cardinality `0..=max`.
    pub fn cardinality_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for f in &self.faces {
            let c = f.len();
            if counts.len() <= c {
                counts.resize(c + 1, 0);
            }
            counts[c] += 1;
        }
        counts
    }

    /// Euler characteristic of the nonempty faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| if f.len() % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    /// Inclusion-maximal faces, sorted lexicographically by vertex list.
    pub fn facets(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self
            .faces
            .iter()
            .copied()
            .filter(|&f| {
                VertexSet::full(self.ground)
                    .difference(f)
                    .iter()
                    .all(|v| !self.contains(f.with(v)))
            })
            .collect();
        out.sort_by_key(|a| a.to_vec());
        out
    }

    pub fn is_downward_closed(&self) -> bool {
        self.faces
            .iter()
            .all(|f| f.facets().all(|g| self.contains(g)))
    }

    /// True iff `skeleton(m, k) ⊆ self ⊆ skeleton(m, k + 1)`.
    pub fn is_balanced(&self, k: usize) -> bool {
        if k >= self.ground {
            return false;
        }
        let upper_ok = self.faces.iter().all(|f| f.len() <= k + 1);
        let lower_count: usize = (0..=k).map(|c| binomial(self.ground, c)).sum();
        let present = self.faces.iter().filter(|f| f.len() <= k).count();
        upper_ok && present == lower_count
    }

    /// `K° = {A ⊆ [m] : [m] ∖ A ∉ K}`. The dual of the full simplex is void.
    pub fn alexander_dual(&self) -> Self {
        let m = self.ground;
        let full = VertexSet::full(m);
        let faces = (0..(1u64 << m))
            .map(|b| VertexSet(b as u32))
            .filter(|&a| !self.contains(full.difference(a)))
            .collect();
        Self::from_sorted_faces(m, faces)
    }

    /// Removes `face` and every face containing it; the result stays closed.
    pub fn without_face(&self, face: VertexSet) -> Self {
        let faces = self
            .faces
            .iter()
            .copied()
            .filter(|f| !face.is_subset(*f))
            .collect();
        Self::from_sorted_faces(self.ground, faces)
    }

    /// Adds `face` together with all its subsets.
    pub fn with_face(&self, face: VertexSet) -> Result<Self> {
        if !face.is_subset(VertexSet::full(self.ground)) {
            return param(format!("face {face} not contained in [1, {}]", self.ground));
        }
        let mut faces = self.faces.clone();
        faces.extend(face.subsets());
        Ok(Self::from_sorted_faces(self.ground, faces))
    }

    /// The `c`-subsets of `[m]` that are not faces, in increasing bitmask order.
    pub fn missing_sets(&self, c: usize) -> Vec<VertexSet> {
        subsets_of_size(self.ground, c)
            .filter(|&s| !self.contains(s))
            .collect()
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            m: self.ground,
            facets: self.facets().into_iter().map(VertexSet::to_vec).collect(),
        }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        Self::from_facet_lists(file.m, &file.facets)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("complex file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.faces == other.faces
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("m", &self.ground)
            .field("facets", &self.facets())
            .finish()
    }
}

/// On-disk complex: `{"m": 6, "facets": [[1,2,3], ...]}` with 1-based vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub m: usize,
    pub facets: Vec<Vec<usize>>,
}

impl TryFrom<ComplexFile> for Complex {
    type Error = Error;

    fn try_from(file: ComplexFile) -> Result<Self> {
        Complex::from_file(&file)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Elements `a + b·φ` of `Z[φ]`, `φ² = φ + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct GoldenInt(i64, i64);

impl Add for GoldenInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GoldenInt(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for GoldenInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GoldenInt(self.0 - o.0, self.1 - o.1)
    }
}

impl Neg for GoldenInt {
    type Output = Self;
    fn neg(self) -> Self {
        GoldenInt(-self.0, -self.1)
    }
}

impl Mul for GoldenInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (a + bφ)(c + dφ) = ac + (ad + bc)φ + bd(φ + 1)
        GoldenInt(
            self.0 * o.0 + self.1 * o.1,
            self.0 * o.1 + self.1 * o.0 + self.1 * o.1,
        )
    }
}

/// Triangles of the antipodal quotient of the icosahedron on vertices `1..=6`.
///
/// Icosahedron vertices are the cyclic permutations of `(0, ±1, ±φ)`; two
/// vertices are adjacent iff their squared distance is 4. Each antipodal pair
/// `{v, -v}` becomes one vertex of the quotient.
fn icosahedral_rp2_triangles() -> Vec<VertexSet> {
    let zero = GoldenInt(0, 0);
    let one = GoldenInt(1, 0);
    let phi = GoldenInt(0, 1);
    let mut points: Vec<[GoldenInt; 3]> = Vec::with_capacity(12);
    for s1 in [one, -one] {
        for s2 in [phi, -phi] {
            points.push([zero, s1, s2]);
            points.push([s1, s2, zero]);
            points.push([s2, zero, s1]);
        }
    }
    let dist2 = |p: &[GoldenInt; 3], q: &[GoldenInt; 3]| {
        (0..3).fold(zero, |acc, i| {
            let d = p[i] - q[i];
            acc + d * d
        })
    };
    let adjacent = |i: usize, j: usize| dist2(&points[i], &points[j]) == GoldenInt(4, 0);

    // label antipodal classes 1..=6 in order of first appearance
    let mut class = vec![0usize; points.len()];
    let mut next = 1;
    for i in 0..points.len() {
        if class[i] != 0 {
            continue;
        }
        let anti = [-points[i][0], -points[i][1], -points[i][2]];
        let j = points.iter().position(|p| *p == anti).expect("antipode exists");
        class[i] = next;
        class[j] = next;
        next += 1;
    }

    let mut triangles = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if adjacent(a, b) && adjacent(b, c) && adjacent(a, c) {
                    let t = VertexSet::singleton(class[a])
                        .with(class[b])
                        .with(class[c]);
                    if !triangles.contains(&t) {
                        triangles.push(t);
                    }
                }
            }
        }
    }
    triangles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(30, v).unwrap()
    }

    #[test]
    fn vertex_set_rejects_bad_input() {
        assert!(VertexSet::new(3, &[4]).is_err());
        assert!(VertexSet::new(3, &[0]).is_err());
        assert!(VertexSet::new(3, &[1, 1]).is_err());
        assert!(VertexSet::new(3, &[]).unwrap().is_empty());
    }

    #[test]
    fn vertex_set_order_is_cardinality_then_lex() {
        let mut v = vec![set(&[2, 3]), set(&[1]), set(&[1, 3]), set(&[]), set(&[1, 2])];
        v.sort();
        assert_eq!(
            v,
            vec![set(&[]), set(&[1]), set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]
        );
        assert!(set(&[1, 9]) < set(&[2, 3]));
    }

    #[test]
    fn gosper_enumerates_binomials() {
        for m in 0..=8 {
            for c in 0..=m + 1 {
                assert_eq!(subsets_of_size(m, c).count(), binomial(m, c), "m={m} c={c}");
            }
        }
    }

    #[test]
    fn skeleton_counts() {
        assert_eq!(Complex::skeleton(4, 2).unwrap().len(), 11);
        let k = Complex::skeleton(3, 0).unwrap();
        assert_eq!(k.faces(), &[VertexSet::EMPTY]);
        assert_eq!(Complex::skeleton(3, 3).unwrap().len(), 8);
        assert!(Complex::skeleton(3, 4).is_err());
    }

    #[test]
    fn balanced_predicate() {
        let s2 = Complex::skeleton(4, 2).unwrap();
        let s1 = Complex::skeleton(4, 1).unwrap();
        assert!(s2.is_balanced(1));
        assert!(s1.is_balanced(1));
        let holed = s1.without_face(set(&[1]));
        assert!(!holed.is_balanced(1));
        assert!(holed.is_downward_closed());
    }

    #[test]
    fn duals_of_small_complexes() {
        let s = Complex::skeleton(5, 2).unwrap();
        assert_eq!(s.alexander_dual(), Complex::skeleton(5, 2).unwrap());
        let k = Complex::skeleton(4, 1).unwrap();
        assert_eq!(k.alexander_dual().alexander_dual(), k);

        let k = Complex::skeleton(4, 2).unwrap().without_face(set(&[3, 4]));
        let expected =
            Complex::from_facet_lists(4, &[vec![1, 2], vec![3], vec![4]]).unwrap();
        assert_eq!(k.alexander_dual(), expected);
        // dual of the full simplex is void
        assert!(Complex::skeleton(3, 3).unwrap().alexander_dual().is_void());
    }

    #[test]
    fn closure_of_facets() {
        let k = Complex::from_facet_lists(3, &[vec![1, 2]]).unwrap();
        assert_eq!(k.faces(), &[set(&[]), set(&[1]), set(&[2]), set(&[1, 2])]);
        assert!(Complex::from_facet_lists(3, &[]).unwrap().is_void());
        assert!(Complex::from_facet_lists(3, &[vec![4]]).is_err());
    }

    #[test]
    fn rp2_fixture_properties() {
        let rp2 = Complex::rp2_minimal();
        assert_eq!(rp2.cardinality_counts(), vec![1, 6, 15, 10]);
        assert_eq!(rp2.euler_characteristic(), 1);
        for t in subsets_of_size(6, 3) {
            assert!(rp2.contains(t) ^ rp2.contains(t.complement(6)), "{t}");
        }
        assert_eq!(rp2.alexander_dual(), rp2);
        assert!(rp2.is_balanced(2));
    }

    #[test]
    fn json_writer_emits_sorted_facets() {
        let k = Complex::from_facet_lists(4, &[vec![3, 4], vec![1, 2, 3]]).unwrap();
        assert_eq!(k.to_json(), r#"{"m":4,"facets":[[1,2,3],[3,4]]}"#);
        assert_eq!(Complex::from_json(&k.to_json()).unwrap(), k);
    }

    #[test]
    fn sparse_index_above_dense_limit() {
        let k = Complex::skeleton(22, 1).unwrap();
        assert!(k.contains(VertexSet::singleton(22)));
        assert!(!k.contains(VertexSet::singleton(21).with(22)));
    }
}

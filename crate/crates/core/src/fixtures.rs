//! Named families used by the examples, tests and the `repro` command.

use crate::complex::{subsets_of_size, Complex, VertexSet};
use crate::joins::{Family, JoinCell};

/// `K_1 = K_2 = {∅, {1}, {2}}` on `m = 2`.
pub fn two_points() -> Family {
    let k = Complex::from_facet_lists(2, &[vec![1], vec![2]]).expect("valid facets");
    Family::new(vec![k.clone(), k]).expect("equal grounds")
}

/// All subsets of `[9]` with at most three elements except `{7, 8, 9}`.
pub fn missing_789() -> Complex {
    Complex::skeleton(9, 3)
        .expect("valid skeleton")
        .without_face(VertexSet::new(9, &[7, 8, 9]).expect("in range"))
}

/// All pairs of `[9]` plus the triangles of the six-vertex projective plane.
pub fn pairs_plus_rp2() -> Complex {
    let rp2 = Complex::rp2_minimal();
    let triangles: Vec<VertexSet> = subsets_of_size(6, 3).filter(|&t| rp2.contains(t)).collect();
    let mut facets: Vec<VertexSet> = subsets_of_size(9, 2).collect();
    facets.extend(triangles);
    Complex::from_facets(9, &facets).expect("facets lie in [9]")
}

/// The triple `(missing_789, pairs_plus_rp2, pairs_plus_rp2)` on `m = 9`.
pub fn rp2_triple() -> Family {
    let k2 = pairs_plus_rp2();
    Family::new(vec![missing_789(), k2.clone(), k2]).expect("equal grounds")
}

/// The skeleta triple `(≤3, ≤2, ≤2)` on `m = 9`.
pub fn skeleta_triple() -> Family {
    Family::new(vec![
        Complex::skeleton(9, 3).expect("valid"),
        Complex::skeleton(9, 2).expect("valid"),
        Complex::skeleton(9, 2).expect("valid"),
    ])
    .expect("equal grounds")
}

/// The cell `(789, 34, 12; 56)`.
pub fn cell_789_34_12() -> JoinCell {
    JoinCell::from_lists(9, &[vec![7, 8, 9], vec![3, 4], vec![1, 2]]).expect("valid cell")
}

/// `K = skeleton(4, 2) ∖ {3, 4}` and its Alexander dual.
pub fn bier_pair_m4() -> (Complex, Complex) {
    let k = Complex::skeleton(4, 2)
        .expect("valid")
        .without_face(VertexSet::new(4, &[3, 4]).expect("in range"));
    let dual = k.alexander_dual();
    (k, dual)
}

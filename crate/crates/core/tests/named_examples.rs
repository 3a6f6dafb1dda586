use symjoin::fixtures;
use symjoin::joins::{in_symmetrized_join, JoinComplex};
use symjoin::morse::{
    build_matching, connectivity_lower_bound, critical_report, verify_acyclicity,
    verify_matching, Connectivity,
};
use symjoin::unavoidability::{
    is_collectively_unavoidable, is_collectively_unavoidable_bruteforce, Method,
};

#[test]
fn both_triples_are_unavoidable() {
    for fam in [fixtures::rp2_triple(), fixtures::skeleta_triple()] {
        assert!(fam.is_balanced(2));
        let fast = is_collectively_unavoidable(&fam, 2);
        assert!(fast.verdict);
        assert_eq!(fast.method, Method::Clique);
        assert!(is_collectively_unavoidable_bruteforce(&fam).verdict);
    }
}

#[test]
fn separating_cell() {
    let cell = fixtures::cell_789_34_12();
    assert_eq!(cell.to_string(), "({7,8,9},{3,4},{1,2};{5,6})");
    assert!(in_symmetrized_join(&cell, &fixtures::skeleta_triple()).unwrap());
    assert!(!in_symmetrized_join(&cell, &fixtures::rp2_triple()).unwrap());
}

#[test]
fn rp2_triple_join_is_five_connected() {
    let j = JoinComplex::symmetrized(&fixtures::rp2_triple());
    let g = build_matching(&j).unwrap();
    assert!(verify_matching(&j, &g));
    assert!(verify_acyclicity(&j, &g));
    let report = critical_report(&j, &g);
    assert!(report.theorem_holds());
    assert_eq!(
        connectivity_lower_bound(&report).unwrap(),
        Connectivity::AtLeast(5)
    );
}

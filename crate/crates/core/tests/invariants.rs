mod common;

#[test]
fn automorphism_groups_are_closed() {
    common::group_closure().unwrap();
}

#[test]
fn dual_of_dual_is_the_map() {
    common::duality_involution().unwrap();
}

#[test]
fn canonical_code_ignores_labels() {
    common::canonical_relabeling().unwrap();
}

#[test]
fn solver_solutions_resubstitute() {
    common::solver_resubstitution().unwrap();
}

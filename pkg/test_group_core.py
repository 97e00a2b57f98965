#!/usr/bin/env python3
"""Tests for group tables, subgroups, abelianization and products"""

import os
import random
import sys

sys.path.insert(0, os.path.dirname(__file__))

from group_core import (abelianization, action_from_generator_images, center, class_closure, compose,
                        conjugacy_classes, conjugacy_partition, cyclic_group, cyclic_quotient_generators,
                        direct_product, element_order, group_from_permutations, group_from_table, is_abelian,
                        is_normal, make_subset, normal_subgroups, parse_permutation, permutation_label,
                        power_automorphism, quaternion_group, relabel_group, semidirect_product, subgroup_generated,
                        symmetric_group)
from hurwitz_errors import BudgetExceeded, InvalidPermutation, NotAGroup, NotClosedUnderConjugation
from suite_runner import resolve_seed, run_suite

SEED = resolve_seed()


def order_census(G):
    return sorted(G.element_orders)


def test_permutations():
    """Cycle notation parsing and left-to-right composition"""
    print("🔁 Testing permutations...")
    a = parse_permutation("(1 2)", 3)
    b = parse_permutation("(1 3)", 3)
    assert a == (1, 0, 2)
    # (1 2) then (1 3): 1 -> 2 -> 2, 2 -> 1 -> 3, 3 -> 3 -> 1
    assert permutation_label(compose(a, b)) == "(1 2 3)"
    assert parse_permutation([2, 3, 1], 3) == parse_permutation("(1 2 3)", 3)
    assert parse_permutation("(1, 2)(3, 4)", 4) == (1, 0, 3, 2)
    print("   ✓ (1 2) then (1 3) = (1 2 3)")

    for bad in ("(1 4)", "(1 1)", "1 2"):
        try:
            parse_permutation(bad, 3)
            raise AssertionError(f"{bad} should be rejected")
        except InvalidPermutation:
            pass
    print("   ✓ Malformed permutations rejected")
    return True


def test_named_groups():
    print("\n🧮 Testing named groups...")
    S3 = symmetric_group(3)
    assert S3.order == 6
    assert S3.id_index == 0 and S3.label(0) == "()"
    assert order_census(S3) == [1, 2, 2, 2, 3, 3]
    assert symmetric_group(4).order == 24
    assert cyclic_group(6).order == 6 and is_abelian(cyclic_group(6))
    Q8 = quaternion_group()
    assert order_census(Q8) == [1, 2, 4, 4, 4, 4, 4, 4]
    print(f"   ✓ S3 labels: {S3.element_labels}")

    again = symmetric_group(3)
    assert again.element_labels == S3.element_labels
    assert again.mul_rows == S3.mul_rows
    print("   ✓ Breadth-first element order is reproducible")
    return True


def test_group_from_table_axioms():
    print("\n🧱 Testing Cayley table validation...")
    try:
        group_from_table([[0, 1, 2], [1, 0, 0], [2, 0, 0]])
        raise AssertionError("non-associative table accepted")
    except NotAGroup as exc:
        assert exc.axiom == "associativity"
        print(f"   ✓ Associativity failure witness: {exc.witness}")

    try:
        group_from_table([[0, 0], [0, 0]])
        raise AssertionError("table without identity accepted")
    except NotAGroup as exc:
        assert exc.axiom == "identity"
        print("   ✓ Missing identity detected")

    Z3 = group_from_table([[0, 1, 2], [1, 2, 0], [2, 0, 1]], name="Z3")
    assert Z3.inverse(1) == 2 and Z3.id_index == 0
    print("   ✓ Valid table accepted")

    try:
        group_from_permutations(5, ["(1 2)", "(1 2 3 4 5)"], budget=50)
        raise AssertionError("budget ignored")
    except BudgetExceeded as exc:
        assert exc.witness["budget"] == 50
        print("   ✓ Group budget enforced")
    return True


def test_subgroups_and_classes():
    print("\n🔍 Testing subgroups and conjugacy...")
    S3 = symmetric_group(3)
    t12, t13 = S3.index_of("(1 2)"), S3.index_of("(1 3)")
    r = S3.index_of("(1 2 3)")
    assert subgroup_generated(S3, []).members == (S3.id_index,)
    assert len(subgroup_generated(S3, [r])) == 3
    assert len(subgroup_generated(S3, [t12, t13])) == 6
    assert element_order(S3, r) == 3
    print("   ✓ Closures: {} -> 1, <(1 2 3)> -> 3, <(1 2),(1 3)> -> 6")

    assert center(S3).members == (S3.id_index,)
    Q8 = quaternion_group()
    assert sorted(center(Q8).labels()) == ["-1", "1"]
    print("   ✓ Centers of S3 and Q8")

    classes = conjugacy_classes(S3)
    assert sorted(classes.block_sizes()) == [1, 2, 3]
    transpositions = class_closure(S3, [t12])
    assert len(transpositions) == 3
    try:
        conjugacy_partition(make_subset(S3, [t12]), S3)
        raise AssertionError("non-closed subset accepted")
    except NotClosedUnderConjugation as exc:
        assert exc.witness["x"] == "(1 2)"
    print("   ✓ Class partition and closure check")

    sizes = [len(N) for N in normal_subgroups(S3)]
    assert sizes == [1, 3, 6]
    A3 = subgroup_generated(S3, [r])
    assert is_normal(S3, A3)
    assert cyclic_quotient_generators(S3, A3)
    assert not is_normal(S3, subgroup_generated(S3, [t12]))
    print("   ✓ Normal subgroups of S3: 1, A3, S3")
    return True


def test_abelianization():
    print("\n➗ Testing abelianization...")
    S3 = symmetric_group(3)
    ab = abelianization(S3)
    assert ab.invariant_factors == (2,)
    assert ab.order_of(S3.index_of("(1 2)")) == 2
    assert ab.order_of(S3.index_of("(1 2 3)")) == 1
    assert abelianization(cyclic_group(6)).invariant_factors == (6,)
    assert abelianization(quaternion_group()).invariant_factors == (2, 2)
    V = direct_product(cyclic_group(2), cyclic_group(4))
    assert abelianization(V).invariant_factors == (2, 4)
    print("   ✓ S3 -> Z/2, Z/6 -> Z/6, Q8 -> Z/2 x Z/2, Z/2 x Z/4 -> (2, 4)")
    return True


def test_semidirect_products():
    print("\n✖️  Testing semidirect products...")
    H, Gamma = cyclic_group(3), cyclic_group(2)
    inversion = [tuple(H.elements()), tuple(H.inverse(h) for h in H.elements())]
    G = semidirect_product(H, Gamma, inversion)
    assert G.order == 6 and not is_abelian(G)
    assert order_census(G) == [1, 2, 2, 2, 3, 3]
    print(f"   ✓ Z/3 x| Z/2 (inversion) has S3 order statistics, labels {G.element_labels[:3]}...")

    trivial = [tuple(H.elements())] * 2
    P = semidirect_product(H, Gamma, trivial)
    assert is_abelian(P) and abelianization(P).invariant_factors == (6,)
    print("   ✓ Trivial action gives the direct product")

    H5, Z4 = cyclic_group(5), cyclic_group(4)
    action = action_from_generator_images(H5, Z4, {Z4.index_of("1"): power_automorphism(H5, 2)})
    F20 = semidirect_product(H5, Z4, action)
    assert F20.order == 20
    assert center(F20).members == (F20.id_index,)
    print("   ✓ Z/5 x| Z/4 with h -> h^2: order 20, trivial center")
    return True


def test_relabel_invariance():
    """Random relabelings keep every derived invariant"""
    print(f"\n🎲 Testing relabel invariance (seed {SEED})...")
    rng = random.Random(SEED)
    for G in (symmetric_group(3), quaternion_group(), symmetric_group(4)):
        perm = list(range(G.order))
        rng.shuffle(perm)
        R = relabel_group(G, perm)
        assert order_census(R) == order_census(G)
        assert abelianization(R).invariant_factors == abelianization(G).invariant_factors
        assert len(center(R)) == len(center(G))
        assert sorted(conjugacy_classes(R).block_sizes()) == sorted(conjugacy_classes(G).block_sizes())
        print(f"   ✓ {G.name} relabeled")
    return True


def run_all_tests():
    return run_suite("Group Core", [
        ("Permutations", test_permutations),
        ("Named Groups", test_named_groups),
        ("Cayley Table Axioms", test_group_from_table_axioms),
        ("Subgroups and Classes", test_subgroups_and_classes),
        ("Abelianization", test_abelianization),
        ("Semidirect Products", test_semidirect_products),
        ("Relabel Invariance", test_relabel_invariance),
    ])


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)

#!/usr/bin/env python3
"""Tests for racks: axioms, components, structure groups and U(c)"""

import os
import random
import sys

sys.path.insert(0, os.path.dirname(__file__))

from group_core import (class_closure, conjugacy_classes, cyclic_group, dihedral_group, make_subset,
                        quaternion_group, subgroup_generated, symmetric_group)
from hurwitz_errors import NotConjugationClosed
from rack_core import (conjugation_image_signature, conjugation_rack, inner_image_signature, is_quandle,
                       normalizer, operator_order, presentation_abelianization, quotient_rack, rack_components,
                       rack_from_table, reduced_structure_group, structure_group_presentation,
                       subrack_generated, trivial_rack, validate_rack)
from suite_runner import resolve_seed, run_suite

SEED = resolve_seed()


def s3_transposition_rack():
    S3 = symmetric_group(3)
    return conjugation_rack(S3, class_closure(S3, [S3.index_of("(1 2)")]))


def test_conjugation_rack():
    print("🔗 Testing conjugation racks...")
    R = s3_transposition_rack()
    assert R.size == 3 and is_quandle(R)
    G = R.group
    x, y = R.index_of("(1 2)"), R.index_of("(1 3)")
    # (1 2) |> (1 3) = (1 2)(1 3)(1 2) = (2 3)
    assert R.label(R.act[x][y]) == "(2 3)"
    assert R.inverse_act[x][R.act[x][y]] == y
    assert G.label(R.group_element(x)) == "(1 2)"
    print(f"   ✓ {R.name}: (1 2) |> (1 3) = (2 3)")

    S3 = symmetric_group(3)
    try:
        conjugation_rack(S3, make_subset(S3, [S3.index_of("(1 2)"), S3.index_of("(1 3)")]))
        raise AssertionError("non-closed subset accepted")
    except NotConjugationClosed as exc:
        print(f"   ✓ Non-closed subset rejected: {exc.witness}")
    return True


def test_validate_rack():
    print("\n✅ Testing rack validation...")
    assert validate_rack(trivial_rack(5)).valid
    bad = rack_from_table([[0, 0, 2], [0, 1, 2], [0, 1, 2]], name="bad")
    report = validate_rack(bad)
    assert not report.valid and report.bijective_failures
    assert report.characterizations_agree
    print(f"   ✓ Non-bijective row witness: {report.bijective_failures[0]}")

    # bijective rows that break self-distributivity
    swap = rack_from_table([[1, 0, 2], [0, 1, 2], [0, 1, 2]], name="swap")
    report = validate_rack(swap)
    assert not report.valid and report.distributivity_failures
    assert not report.braid_valid
    print("   ✓ Distributivity failure agrees with braid relations")

    rng = random.Random(SEED)
    groups = [symmetric_group(3), symmetric_group(4), dihedral_group(4), dihedral_group(5), quaternion_group()]
    for _ in range(200):
        G = rng.choice(groups)
        classes = conjugacy_classes(G).blocks
        picked = [b[0] for b in rng.sample(list(classes), rng.randint(1, len(classes)))]
        R = conjugation_rack(G, class_closure(G, picked))
        # the braid sweep is quartic in the rack size
        report = validate_rack(R, check_braid=R.size <= 8)
        assert report.valid and report.braid_valid, f"{G.name} {R.labels}"
    print(f"   ✓ 200 random conjugation racks valid (seed {SEED})")
    return True


def axioms_hold(act):
    """Bijective rows and x |> (y |> z) = (x |> y) |> (x |> z), checked directly"""
    n = len(act)
    if any(sorted(row) != list(range(n)) for row in act):
        return False
    return all(act[x][act[y][z]] == act[act[x][y]][act[x][z]]
               for x in range(n) for y in range(n) for z in range(n))


def random_valid_table(rng, n):
    kind = rng.choice(["trivial", "permutation", "dihedral"])
    if kind == "trivial":
        return [list(range(n)) for _ in range(n)]
    if kind == "permutation":
        # x |> y = s(y) for a fixed permutation s
        s = list(range(n))
        rng.shuffle(s)
        return [list(s) for _ in range(n)]
    return [[(2 * x - y) % n for y in range(n)] for x in range(n)]


def test_random_tables():
    print(f"\n🎲 Testing 1000 random tables (seed {SEED})...")
    rng = random.Random(SEED)
    verdicts = {True: 0, False: 0}
    for i in range(1000):
        n = rng.randint(1, 4)
        if i % 3 == 2:
            act = [[rng.randrange(n) for _ in range(n)] for _ in range(n)]
        else:
            act = random_valid_table(rng, n)
            if i % 3 == 1:
                act[rng.randrange(n)][rng.randrange(n)] = rng.randrange(n)
        report = validate_rack(rack_from_table(act, name=f"random{i}"))
        expected = axioms_hold(act)
        assert report.valid == expected, act
        assert report.characterizations_agree, act
        verdicts[expected] += 1
    assert verdicts[True] > 0 and verdicts[False] > 0
    print(f"   ✓ {verdicts[True]} valid and {verdicts[False]} invalid tables classified correctly")
    return True


def test_structure_group():
    print("\n🏛️  Testing reduced structure groups...")
    assert reduced_structure_group(trivial_rack(4)).group.order == 1
    R = s3_transposition_rack()
    structure = reduced_structure_group(R)
    assert structure.group.order == 6 and structure.group.degree == 3
    Z3 = cyclic_group(3)
    assert reduced_structure_group(conjugation_rack(Z3, make_subset(Z3, [1, 2]))).group.order == 1
    print("   ✓ trivial -> 1, S3 transpositions -> order 6 on 3 points, Z/3 -> 1")

    for G, rep in ((symmetric_group(4), "(1 2)"), (symmetric_group(4), "(1 2 3)"), (dihedral_group(5), "(1 2 3 4 5)")):
        c = class_closure(G, [G.index_of(rep)])
        R = conjugation_rack(G, c)
        assert inner_image_signature(R) == conjugation_image_signature(G, c)
    print("   ✓ Inner group agrees with conjugation computed in G")
    return True


def test_components():
    print("\n🧩 Testing rack components...")
    assert len(rack_components(s3_transposition_rack())) == 1
    assert len(rack_components(trivial_rack(3))) == 3

    Q8 = quaternion_group()
    c = make_subset(Q8, (Q8.index_of(x) for x in ("i", "-i", "j", "-j", "k", "-k")))
    partition = rack_components(conjugation_rack(Q8, c))
    blocks = sorted(sorted(Q8.labels(c.members[x] for x in b)) for b in partition.blocks)
    assert blocks == [["-i", "i"], ["-j", "j"], ["-k", "k"]]
    print(f"   ✓ Q8 components: {blocks}")

    R = s3_transposition_rack()
    Q = quotient_rack(R)
    assert Q.size == 1 and validate_rack(Q).valid
    S4 = symmetric_group(4)
    mixed = conjugation_rack(S4, class_closure(S4, [S4.index_of("(1 2)"), S4.index_of("(1 2)(3 4)")]))
    Qm = quotient_rack(mixed)
    assert all(Qm.act[a][b] == b for a in range(Qm.size) for b in range(Qm.size))
    print("   ✓ Quotient racks are trivial")
    return True


def test_rack_operations():
    print("\n⚙️  Testing rack operations...")
    R = s3_transposition_rack()
    x = R.index_of("(1 2)")
    assert operator_order(R, x) == 2
    assert normalizer(R, range(R.size)) == tuple(range(R.size))
    assert subrack_generated(R, [x]) == (x,)
    assert len(subrack_generated(R, [x, R.index_of("(1 3)")])) == 3
    D5 = dihedral_group(5)
    rotations = conjugation_rack(D5, class_closure(D5, [D5.index_of("(1 2 3 4 5)")]))
    assert all(operator_order(rotations, y) == 1 for y in range(rotations.size))
    print("   ✓ Operator orders, normalizer and generated subracks")
    return True


def test_presentation():
    print("\n📜 Testing U(c) presentations...")
    P = structure_group_presentation(trivial_rack(1))
    assert len(P.generators) == 1 and len(P.relations) == 1
    assert presentation_abelianization(P) == (1, ())

    P = structure_group_presentation(s3_transposition_rack())
    assert len(P.generators) == 3 and len(P.relations) == 9
    assert presentation_abelianization(P) == (1, ())
    print("   ✓ S3 transpositions: 3 generators, 9 relations, U^ab = Z")

    assert presentation_abelianization(structure_group_presentation(trivial_rack(4))) == (4, ())
    Q8 = quaternion_group()
    c = make_subset(Q8, (Q8.index_of(x) for x in ("i", "-i", "j", "-j", "k", "-k")))
    assert presentation_abelianization(structure_group_presentation(conjugation_rack(Q8, c))) == (3, ())
    print("   ✓ Trivial rack of size 4 gives Z^4; Q8 rack gives Z^3")

    S4 = symmetric_group(4)
    c = class_closure(S4, [S4.index_of("(1 2)")])
    assert len(subgroup_generated(S4, c.members)) == 24
    assert presentation_abelianization(structure_group_presentation(conjugation_rack(S4, c)))[0] == 1
    print("   ✓ Free rank of U^ab equals the number of rack components")
    return True


def run_all_tests():
    return run_suite("Rack Core", [
        ("Conjugation Rack", test_conjugation_rack),
        ("Validation", test_validate_rack),
        ("Random Tables", test_random_tables),
        ("Structure Group", test_structure_group),
        ("Components", test_components),
        ("Operations", test_rack_operations),
        ("Presentation", test_presentation),
    ])


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)

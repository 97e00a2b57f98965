#!/usr/bin/env python3
"""Tests for counting invariants, Malle exponents, coefficient series and Picard predictions"""

import math
import os
import random
import sys

sys.path.insert(0, os.path.dirname(__file__))

from group_core import (class_closure, cyclic_group, make_subset, nonidentity, subgroup_generated, symmetric_group,
                        whole_group)
from hurwitz_errors import (BudgetExceeded, NotGenerator, NotInSubgroup, NotNormal, NotSingleClass,
                            SpecFormatError, ValidationFailure)
from malle import (OrbitDecomposition, a_constant, b_M_constant, b_T_constant, custom_invariant,
                   discriminant_invariant, malle_exponents, malle_prediction, normalized_partial_sums,
                   partial_sums, pole_order, rdisc_invariant, regular_discriminant_invariant, rho_orbits,
                   stable_picard_prediction, tuple_count_coefficients)
from suite_runner import resolve_seed, run_suite

SEED = resolve_seed()


def s3_classes():
    S3 = symmetric_group(3)
    transpositions = class_closure(S3, [S3.index_of("(1 2)")])
    three_cycles = class_closure(S3, [S3.index_of("(1 2 3)")])
    return S3, transpositions, three_cycles


def test_invariants():
    print("📏 Testing counting invariants...")
    S3, transpositions, three_cycles = s3_classes()
    disc = discriminant_invariant(S3)
    assert all(disc(x) == 1 for x in transpositions.members)
    assert all(disc(x) == 2 for x in three_cycles.members)
    assert disc.provenance == "discriminant-degree-d"
    print("   ✓ S3 degree discriminant: transpositions 1, 3-cycles 2")

    Z2 = cyclic_group(2)
    assert regular_discriminant_invariant(Z2)(Z2.index_of("1")) == 1
    regular = regular_discriminant_invariant(S3)
    assert regular(S3.index_of("(1 2)")) == 3 and regular(S3.index_of("(1 2 3)")) == 4
    assert rdisc_invariant(S3).class_values() == {"(1 2)": 1, "(1 2 3)": 1}
    print("   ✓ Regular discriminant and rdisc")

    custom = custom_invariant(S3, {"(1 2)": 3, "(1 2 3)": 1})
    assert custom(S3.index_of("(2 3)")) == 3 and custom.provenance == "custom"
    for bad in ({"(1 2)": 1, "(1 3)": 2}, {"(1 2)": 0}):
        try:
            custom_invariant(S3, bad)
            raise AssertionError(f"{bad} accepted")
        except ValidationFailure:
            pass
    Z5 = cyclic_group(5)
    try:
        custom_invariant(Z5, {"1": 1, "2": 2, "3": 1, "4": 1})
        raise AssertionError("power-variant invariant accepted")
    except ValidationFailure as exc:
        print(f"   ✓ Invalid custom invariants rejected: {exc.message}")
    return True


def test_exponents():
    print("\n🔣 Testing Malle exponents...")
    S3, transpositions, three_cycles = s3_classes()
    disc = discriminant_invariant(S3)
    a, c_inv = a_constant(nonidentity(S3), disc)
    assert a == 1 and c_inv.members == transpositions.members
    exps = malle_exponents(S3, nonidentity(S3), disc, 7)
    assert exps.a == 1 and exps.b_M.value == 1 and exps.b_T.value >= exps.b_M.value
    payload = exps.to_dict()
    assert payload["b_M"]["b_M"] == 1 and payload["a"] == 1
    print(f"   ✓ S3, disc, q = 7: a = 1, c_inv = {c_inv.labels()}, b_M = 1")

    Z3 = cyclic_group(3)
    c = make_subset(Z3, [Z3.index_of("1"), Z3.index_of("2")])
    assert malle_exponents(Z3, c, rdisc_invariant(Z3), 2).b_M.value == 1
    four = malle_exponents(Z3, c, rdisc_invariant(Z3), 4)
    assert four.a == 1 and four.b_M.value == 2 and four.b_T.value == 2
    print("   ✓ Z/3, rdisc: b = 1 at q = 2, b = 2 at q = 4")

    A3 = subgroup_generated(S3, [S3.index_of("(1 2 3)")])
    assert b_M_constant(S3, A3, three_cycles, 5).value == 2
    result = b_M_constant(S3, A3, three_cycles, 7)
    assert result.value == 1 and S3.label(result.witness) == "(1 2)"
    bt = b_T_constant(S3, three_cycles, 7, disc)
    assert bt.value == 1
    print("   ✓ S3 over A3 twisted by a transposition: b_M = 2 at q = 5, 1 at q = 7")

    prediction = malle_prediction(S3, nonidentity(S3), disc, 7)
    assert prediction.a == 1 and prediction.b == 1
    assert prediction.to_dict()["prediction"] == "Θ(X^{1/1} (log X)^{0})"
    print(f"   ✓ Prediction: {prediction.rendered}")
    return True


def test_rho_validation():
    print("\n🚧 Testing twisted powering inputs...")
    S3, transpositions, three_cycles = s3_classes()
    A3 = subgroup_generated(S3, [S3.index_of("(1 2 3)")])
    cases = [
        (subgroup_generated(S3, [S3.index_of("(1 2)")]), transpositions, S3.index_of("(1 3)"), NotNormal),
        (A3, transpositions, S3.index_of("(1 2)"), NotInSubgroup),
        (A3, three_cycles, S3.id_index, NotGenerator),
    ]
    for N, c, h, error in cases:
        try:
            rho_orbits(S3, N, c, h, 5)
            raise AssertionError(f"{error.__name__} expected")
        except error:
            print(f"   ✓ {error.__name__} raised")
    return True


def test_coefficients():
    print("\n🧮 Testing tuple-count coefficients...")
    even = tuple_count_coefficients(OrbitDecomposition.from_sizes([(2, 1)]), None, 5, 40)
    assert all(even[d] == 0 for d in range(1, 41, 2))
    assert all(even[2 * k] == 25 ** k for k in range(21))
    single = tuple_count_coefficients(OrbitDecomposition.from_sizes([(1, 1)]), None, 3, 30)
    assert single == [3 ** d for d in range(31)]
    print("   ✓ One orbit of size 2: odd coefficients vanish; one orbit of size 1: a_d = q^d")

    S3, _, _ = s3_classes()
    disc = discriminant_invariant(S3)
    dec = rho_orbits(S3, whole_group(S3), nonidentity(S3), S3.id_index, 7, disc)
    assert sorted(dec.shape()) == [(1, 1), (1, 2)]
    coeffs = tuple_count_coefficients(dec, disc, 7, 10)
    assert coeffs[:3] == [1, 7, 56]
    _, c_inv = a_constant(nonidentity(S3), disc)
    assert pole_order(dec, disc, 7) == b_M_constant(S3, whole_group(S3), c_inv, 7).value == 1
    print(f"   ✓ S3, disc, q = 7: a_0..a_2 = {coeffs[:3]}, pole order 1")

    rng = random.Random(SEED)
    for _ in range(12):
        shape = [(rng.randint(1, 3), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
        q = rng.choice([2, 3, 4, 5, 7])
        coeffs = tuple_count_coefficients(OrbitDecomposition.from_sizes(shape), None, q, 60)
        assert coeffs[0] == 1 and all(v >= 0 for v in coeffs)
        a = min(v for _, v in shape)
        assert pole_order(OrbitDecomposition.from_sizes(shape), None, q) == sum(1 for _, v in shape if v == a)
    print(f"   ✓ Recurrence matches the series product on random shapes (seed {SEED})")

    try:
        tuple_count_coefficients(OrbitDecomposition.from_sizes([(1, 1)]), None, 2, 100, budget=50)
        raise AssertionError("budget ignored")
    except BudgetExceeded:
        print("   ✓ Coefficient budget enforced")
    return True


def test_normalized_sums():
    print("\n📉 Testing normalized partial sums...")
    coeffs = tuple_count_coefficients(OrbitDecomposition.from_sizes([(1, 1), (1, 1), (2, 3)]), None, 3, 60)
    assert partial_sums([1, 2, 3]) == [1, 3, 6]
    values = [v for _, v in normalized_partial_sums(coeffs, 3, 1, 2, range(20, 61))]
    assert min(values) > 0 and max(values) / min(values) < 10
    print(f"   ✓ Normalized sums stay in [{min(values):.3f}, {max(values):.3f}] for 20 <= n <= 60")

    # the normalized sums settle into a bounded pattern of period W, so a window of
    # 3W values late in the series has the same extremes as one much later
    rng = random.Random(SEED)
    for _ in range(10):
        shape = [(rng.randint(1, 3), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
        q = rng.choice([2, 3, 4, 5, 7])
        a = min(v for _, v in shape)
        minimal = [s * v for s, v in shape if v == a]
        period = 1
        for w in minimal:
            period = period * w // math.gcd(period, w)
        early, late = range(90, 90 + 3 * period), range(210, 210 + 3 * period)
        coeffs = tuple_count_coefficients(OrbitDecomposition.from_sizes(shape), None, q, late.stop)
        first = [v for _, v in normalized_partial_sums(coeffs, q, a, len(minimal), early)]
        second = [v for _, v in normalized_partial_sums(coeffs, q, a, len(minimal), late)]
        assert min(first) > 0 and min(second) > 0, shape
        assert 0.5 < max(second) / max(first) < 2, (shape, q)
        assert 0.5 < min(second) / min(first) < 2, (shape, q)
    print(f"   ✓ Growth q^(n/a) n^(b-1) holds on 10 random decompositions (seed {SEED})")

    for bad in (0, 61):
        try:
            normalized_partial_sums(coeffs, 3, 1, 2, [bad])
            raise AssertionError(f"n = {bad} accepted")
        except SpecFormatError:
            pass
    print("   ✓ Out-of-range n rejected")
    return True


def test_picard():
    print("\n🧾 Testing stable Picard predictions...")
    S3, transpositions, _ = s3_classes()
    fourteen = stable_picard_prediction(S3, transpositions, 14)
    assert not fourteen.empty and fourteen.order == 13 and fourteen.exponent_full == 1
    assert fourteen.rendered == "(Z/13)^1"
    assert stable_picard_prediction(S3, transpositions, 5).empty
    assert stable_picard_prediction(S3, transpositions, 4).rendered == "trivial"
    print("   ✓ S3 transpositions: n = 14 -> Z/13, odd n empty, n = 4 trivial")

    try:
        stable_picard_prediction(S3, nonidentity(S3), 6)
        raise AssertionError("two classes accepted")
    except NotSingleClass:
        print("   ✓ NotSingleClass for a union of classes")
    return True


def run_all_tests():
    return run_suite("Malle", [
        ("Invariants", test_invariants),
        ("Exponents", test_exponents),
        ("Rho Validation", test_rho_validation),
        ("Coefficients", test_coefficients),
        ("Normalized Sums", test_normalized_sums),
        ("Picard", test_picard),
    ])


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)

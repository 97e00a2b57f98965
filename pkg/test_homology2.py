#!/usr/bin/env python3
"""Tests for Smith normal form and second homology of finite groups"""

import os
import random
import sys

sys.path.insert(0, os.path.dirname(__file__))

from group_core import (class_closure, cyclic_group, dihedral_group, direct_product, klein_four_group, make_subset,
                        nonidentity, quaternion_group, relabel_group, symmetric_group)
from homology2 import bar_boundary_matrices, bar_complex, format_factors, h2_gc, h2_group
from hurwitz_errors import BudgetExceeded
from integer_matrix import IntegerMatrix, smith_normal_form, smith_normal_form_dense
from suite_runner import resolve_seed, run_suite

SEED = resolve_seed()


def test_smith_normal_form():
    print("🧮 Testing Smith normal form...")
    snf = smith_normal_form(IntegerMatrix.from_dense([[2, 0], [0, 3]]))
    assert snf.diagonal == (1, 6) and snf.invariant_factors == (6,)
    zero = smith_normal_form(IntegerMatrix.from_dense([[0, 0], [0, 0]]))
    assert zero.diagonal == (0, 0) and zero.rank == 0
    ident = smith_normal_form(IntegerMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert ident.diagonal == (1, 1, 1)
    print("   ✓ diag(2, 3) -> (1, 6); zero -> rank 0; identity -> (1, 1, 1)")

    rng = random.Random(SEED)
    for _ in range(25):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        dense = [[rng.choice([0, 0, 1, -1, 2, 3, -4, 6]) for _ in range(cols)] for _ in range(rows)]
        M = IntegerMatrix.from_dense(dense)
        fast = smith_normal_form(M)
        slow = smith_normal_form_dense(M)
        assert fast.diagonal == slow.diagonal, f"{dense}: {fast.diagonal} vs {slow.diagonal}"
    print(f"   ✓ Fast path matches the dense oracle on 25 random matrices (seed {SEED})")
    return True


def test_torsion_generators():
    print("\n🧷 Testing cokernel generators...")
    M = IntegerMatrix.from_dense([[2, 0], [0, 3], [0, 0]])
    snf = smith_normal_form(M, with_generators=True)
    assert snf.invariant_factors == (6,) and snf.cokernel_free_rank == 1
    assert len(snf.torsion_generators) == 1
    vector = snf.torsion_generators[0]
    assert vector and all(0 <= r < 3 for r in vector)
    print(f"   ✓ Z/6 summand generated by {vector}")
    return True


def test_bar_complex():
    print("\n🧱 Testing the normalized bar complex...")
    trivial = bar_complex(cyclic_group(1))
    assert trivial.m == 0 and trivial.d2.rows == 0
    assert h2_group(cyclic_group(1)).is_trivial

    Z2 = bar_complex(cyclic_group(2))
    # d[x|x] = [x] - [xx] + [x], and [xx] = [id] vanishes
    assert Z2.d2.to_dense().tolist() == [[2]]
    print("   ✓ Z/2: d2[x|x] = 2[x]")

    for G in (symmetric_group(3), quaternion_group(), dihedral_group(4)):
        d2, d3 = bar_boundary_matrices(G)
        assert d2.matmul(d3).is_zero()
        assert d3.rows == (G.order - 1) ** 2 and d3.cols == (G.order - 1) ** 3
    print("   ✓ d2 o d3 = 0 for S3, Q8, D4")

    try:
        bar_complex(symmetric_group(4), budget=1000)
        raise AssertionError("budget ignored")
    except BudgetExceeded as exc:
        assert exc.witness["triples"] == 23 ** 3
        print("   ✓ Bar complex budget enforced")
    return True


def test_schur_multipliers():
    print("\n🏛️  Testing H2(G)...")
    for n in range(1, 13):
        assert h2_group(cyclic_group(n)).is_trivial, f"Z/{n}"
    print("   ✓ H2(Z/n) = 0 for n <= 12")

    assert h2_group(symmetric_group(3)).invariant_factors == ()
    assert h2_group(klein_four_group()).invariant_factors == (2,)
    assert h2_group(quaternion_group()).invariant_factors == ()
    assert h2_group(dihedral_group(4)).invariant_factors == (2,)
    assert h2_group(direct_product(cyclic_group(2), cyclic_group(4))).invariant_factors == (2,)
    assert h2_group(direct_product(cyclic_group(3), cyclic_group(3))).invariant_factors == (3,)
    print("   ✓ S3 -> 0, V4 -> Z/2, Q8 -> 0, D4 -> Z/2, Z/2 x Z/4 -> Z/2, Z/3 x Z/3 -> Z/3")

    result = h2_group(klein_four_group())
    assert result.free_rank == 0 and result.order == 2
    assert format_factors(result) == "Z/2"
    assert len(result.basis_cycles) == 1
    payload = result.to_dict(with_cycles=True)
    assert payload["basis_cycles"] and payload["order"] == 2
    print(f"   ✓ V4 basis cycle: {payload['basis_cycles'][0]}")
    return True


def test_relative_h2():
    print("\n🌀 Testing H2(G, c)...")
    V4 = klein_four_group()
    assert h2_gc(V4, nonidentity(V4)).is_trivial
    single = make_subset(V4, [V4.index_of("(1 2)(3 4)")])
    assert h2_gc(V4, single).invariant_factors == (2,)
    print("   ✓ V4: all involutions kill Z/2, a single involution does not")

    S3 = symmetric_group(3)
    assert h2_gc(S3, class_closure(S3, [S3.index_of("(1 2)")])).is_trivial
    D4 = dihedral_group(4)
    rotations = class_closure(D4, [D4.index_of("(1 2 3 4)")])
    assert h2_gc(D4, rotations).invariant_factors == (2,)
    assert h2_gc(D4, nonidentity(D4)).is_trivial
    print("   ✓ S3 transpositions -> 0; D4 rotations keep Z/2; all of D4 kills it")
    return True


def test_relabel_invariance():
    print(f"\n🎲 Testing relabel invariance (seed {SEED})...")
    rng = random.Random(SEED)
    for G in (klein_four_group(), quaternion_group(), dihedral_group(4), symmetric_group(3)):
        perm = list(range(G.order))
        rng.shuffle(perm)
        R = relabel_group(G, perm)
        assert h2_group(R).invariant_factors == h2_group(G).invariant_factors
        print(f"   ✓ {G.name}: {format_factors(h2_group(R))}")
    return True


def run_all_tests():
    return run_suite("Homology", [
        ("Smith Normal Form", test_smith_normal_form),
        ("Torsion Generators", test_torsion_generators),
        ("Bar Complex", test_bar_complex),
        ("Schur Multipliers", test_schur_multipliers),
        ("Relative H2", test_relative_h2),
        ("Relabel Invariance", test_relabel_invariance),
    ])


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)

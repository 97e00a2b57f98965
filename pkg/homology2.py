#!/usr/bin/env python3
"""Second integer homology of finite groups from the normalized bar complex.

Chains in degree k are indexed by k-tuples of non-identity elements. With
m = |G| - 1 and ``nid`` the non-identity elements in index order, the pair
[a|b] sits at position ``pos(a) * m + pos(b)`` and the triple [a|b|c] at
``(pos(a) * m + pos(b)) * m + pos(c)``.

H2(G) is the torsion of coker d3 (the remaining free part is the image of
d2). H2(G, c) further kills the torus classes [x|y] - [y|x] of commuting
pairs in c.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from group_core import GroupTable, SubsetOfGroup
from hurwitz_config import DEFAULT_STATE_BUDGET
from hurwitz_errors import BudgetExceeded, InternalMismatch
from integer_matrix import IntegerMatrix, smith_normal_form

logger = logging.getLogger(__name__)

Chain = Dict[Tuple[str, str], int]


@dataclass(frozen=True)
class H2Result:
    invariant_factors: Tuple[int, ...]
    free_rank: int = 0
    basis_cycles: Tuple[Chain, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        total = 1
        for d in self.invariant_factors:
            total *= d
        return total

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def to_dict(self, with_cycles: bool = False) -> Dict:
        data = {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank,
                "order": self.order}
        if with_cycles:
            data["basis_cycles"] = [
                [{"pair": list(pair), "coefficient": coeff} for pair, coeff in sorted(chain.items())]
                for chain in self.basis_cycles
            ]
        return data


@dataclass(frozen=True)
class BarComplex:
    group: GroupTable
    nid: Tuple[int, ...]
    d2: IntegerMatrix
    d3: IntegerMatrix

    @property
    def m(self) -> int:
        return len(self.nid)

    def pair(self, position: int) -> Tuple[int, int]:
        a, b = divmod(position, self.m)
        return self.nid[a], self.nid[b]

    def pair_position(self, a: int, b: int) -> Optional[int]:
        """Position of [a|b], or None when the chain is degenerate"""
        G = self.group
        if a == G.id_index or b == G.id_index:
            return None
        index = self._positions
        return index[a] * self.m + index[b]

    @cached_property
    def _positions(self) -> Dict[int, int]:
        return {g: i for i, g in enumerate(self.nid)}


def _check_bar_budget(G: GroupTable, budget: int) -> None:
    cells = (G.order - 1) ** 3
    if cells > budget:
        raise BudgetExceeded("Bar complex exceeds the budget", {"group": G.name, "triples": cells,
                                                                "budget": budget})


def bar_complex(G: GroupTable, budget: int = DEFAULT_STATE_BUDGET) -> BarComplex:
    _check_bar_budget(G, budget)
    rows = G.mul_rows
    e = G.id_index
    nid = tuple(g for g in G.elements() if g != e)
    m = len(nid)
    pos = {g: i for i, g in enumerate(nid)}

    d2_entries: List[Tuple[int, int, int]] = []
    for ia, a in enumerate(nid):
        for ib, b in enumerate(nid):
            col = ia * m + ib
            # d[a|b] = [b] - [ab] + [a]
            for g, sign in ((b, 1), (rows[a][b], -1), (a, 1)):
                if g != e:
                    d2_entries.append((pos[g], col, sign))

    d3_entries: List[Tuple[int, int, int]] = []
    for ia, a in enumerate(nid):
        for ib, b in enumerate(nid):
            ab = rows[a][b]
            for ic, c in enumerate(nid):
                col = (ia * m + ib) * m + ic
                bc = rows[b][c]
                # d[a|b|c] = [b|c] - [ab|c] + [a|bc] - [a|b]
                for x, y, sign in ((b, c, 1), (ab, c, -1), (a, bc, 1), (a, b, -1)):
                    if x != e and y != e:
                        d3_entries.append((pos[x] * m + pos[y], col, sign))

    d2 = IntegerMatrix.from_entries(m, m * m, d2_entries)
    d3 = IntegerMatrix.from_entries(m * m, m ** 3, d3_entries)
    return BarComplex(group=G, nid=nid, d2=d2, d3=d3)


def bar_boundary_matrices(G: GroupTable, budget: int = DEFAULT_STATE_BUDGET,
                          verify: bool = True) -> Tuple[IntegerMatrix, IntegerMatrix]:
    """Boundary maps d2 (pairs -> singletons) and d3 (triples -> pairs)"""
    complex_ = bar_complex(G, budget)
    if verify and not complex_.d2.matmul(complex_.d3).is_zero():
        raise InternalMismatch("d2 o d3 is not zero", {"group": G.name})
    return complex_.d2, complex_.d3


def _chain_labels(complex_: BarComplex, vector: Dict[int, int]) -> Chain:
    G = complex_.group
    chain: Chain = {}
    for position, coeff in vector.items():
        a, b = complex_.pair(position)
        chain[(G.label(a), G.label(b))] = coeff
    return chain


def _second_homology(complex_: BarComplex, extra: List[Dict[int, int]]) -> H2Result:
    G = complex_.group
    if complex_.m == 0:
        return H2Result(invariant_factors=())
    relations = complex_.d3
    if extra:
        relations = relations.hstack(IntegerMatrix.from_columns(complex_.m ** 2, extra))
    snf = smith_normal_form(relations, with_generators=True)
    rank_d2 = smith_normal_form(complex_.d2).rank
    free_rank = (complex_.d2.cols - rank_d2) - snf.rank

    cycles = []
    for vector in snf.torsion_generators or ():
        if complex_.d2.apply(vector):
            raise InternalMismatch("Torsion generator is not a cycle", {"group": G.name})
        cycles.append(_chain_labels(complex_, vector))
    logger.debug(f"H2 for {G.name}: factors={snf.invariant_factors} free_rank={free_rank}")
    return H2Result(invariant_factors=snf.invariant_factors, free_rank=free_rank, basis_cycles=tuple(cycles))


def h2_group(G: GroupTable, budget: int = DEFAULT_STATE_BUDGET) -> H2Result:
    """Schur multiplier H2(G; Z)"""
    complex_ = bar_complex(G, budget)
    result = _second_homology(complex_, [])
    logger.info(f"H2({G.name}) = {format_factors(result)}")
    return result


def torus_cycle(complex_: BarComplex, x: int, y: int) -> Dict[int, int]:
    """[x|y] - [y|x], dropping degenerate terms"""
    vector: Dict[int, int] = {}
    for a, b, sign in ((x, y, 1), (y, x, -1)):
        p = complex_.pair_position(a, b)
        if p is not None:
            vector[p] = vector.get(p, 0) + sign
    return {p: v for p, v in vector.items() if v}


def h2_gc(G: GroupTable, c: SubsetOfGroup, budget: int = DEFAULT_STATE_BUDGET) -> H2Result:
    """H2(G; Z) modulo the torus classes of commuting pairs in c"""
    complex_ = bar_complex(G, budget)
    rows = G.mul_rows
    extra = []
    for x in c.members:
        for y in c.members:
            if rows[x][y] == rows[y][x]:
                cycle = torus_cycle(complex_, x, y)
                if cycle:
                    extra.append(cycle)
    result = _second_homology(complex_, extra)
    logger.info(f"H2({G.name}, c) with |c|={len(c)} = {format_factors(result)}")
    return result


def format_factors(result: H2Result) -> str:
    parts = [f"Z/{d}" for d in result.invariant_factors] + ["Z"] * result.free_rank
    return " + ".join(parts) if parts else "0"

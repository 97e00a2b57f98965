#!/usr/bin/env python3
"""Finite racks: action tables x |> y, validation, components and U(c) data.

A rack is stored as ``act[x][y] = x |> y``. Conjugation racks remember the
group and subset they came from; everything else works on bare indices.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from group_core import (GroupTable, SubsetOfGroup, group_from_permutations, make_subset,
                        subgroup_generated)
from hurwitz_config import DEFAULT_GROUP_BUDGET
from hurwitz_errors import NotConjugationClosed, SpecFormatError
from integer_matrix import IntegerMatrix, smith_normal_form

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Rack:
    act: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...]
    group_origin: Optional[Tuple[GroupTable, SubsetOfGroup]] = None
    name: str = "rack"

    @property
    def size(self) -> int:
        return len(self.act)

    @cached_property
    def inverse_act(self) -> Tuple[Tuple[int, ...], ...]:
        """inverse_act[x][z] = y with x |> y = z"""
        inverse = []
        for row in self.act:
            inv_row = [0] * len(row)
            for y, z in enumerate(row):
                inv_row[z] = y
            inverse.append(tuple(inv_row))
        return tuple(inverse)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.act, dtype=np.int64).reshape(self.size, self.size)
        arr.flags.writeable = False
        return arr

    @property
    def group(self) -> Optional[GroupTable]:
        return self.group_origin[0] if self.group_origin else None

    @property
    def subset(self) -> Optional[SubsetOfGroup]:
        return self.group_origin[1] if self.group_origin else None

    def group_element(self, x: int) -> int:
        return self.group_origin[1].members[x]

    def label(self, x: int) -> str:
        return self.labels[x]

    def index_of(self, ref) -> int:
        if isinstance(ref, int) and 0 <= ref < self.size:
            return ref
        if isinstance(ref, str) and ref in self.labels:
            return self.labels.index(ref)
        if self.group_origin is not None:
            g = self.group.index_of(ref)
            members = self.subset.members
            if g in self.subset:
                return members.index(g)
        raise SpecFormatError(f"Unknown rack element '{ref}'", {"element": str(ref)})


@dataclass(frozen=True)
class RackReport:
    valid: bool
    bijective_failures: List[Dict] = field(default_factory=list)
    distributivity_failures: List[Dict] = field(default_factory=list)
    braid_valid: bool = True
    braid_failures: List[Dict] = field(default_factory=list)

    @property
    def characterizations_agree(self) -> bool:
        return self.valid == self.braid_valid

    def to_dict(self) -> Dict:
        return {
            "valid": self.valid,
            "braid_valid": self.braid_valid,
            "bijective_failures": self.bijective_failures,
            "distributivity_failures": self.distributivity_failures,
            "braid_failures": self.braid_failures,
        }


@dataclass(frozen=True)
class RackComponentPartition:
    rack: Rack
    blocks: Tuple[Tuple[int, ...], ...]
    component_of: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class StructureGroupPresentation:
    """Generators [x] for x in the rack; relation (x, y) reads [x]^-1 [y] [x] [x |> y]^-1"""
    generators: Tuple[str, ...]
    relations: Tuple[Tuple[Tuple[int, int], ...], ...]
    pairs: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class StructureGroup:
    group: GroupTable
    row_elements: Tuple[int, ...]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def rack_from_table(act: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                    name: str = "rack") -> Rack:
    rows = tuple(tuple(int(v) for v in row) for row in act)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise SpecFormatError("Rack table must be a non-empty square", {"rows": n})
    if any(not 0 <= v < n for row in rows for v in row):
        raise SpecFormatError("Rack table entry outside the element set")
    if labels is None:
        labels = [str(i) for i in range(n)]
    if len(labels) != n or len(set(labels)) != n:
        raise SpecFormatError("Rack labels must be distinct, one per element", {"labels": list(labels)})
    return Rack(act=rows, labels=tuple(labels), name=name)


def trivial_rack(n: int) -> Rack:
    return rack_from_table([list(range(n)) for _ in range(n)], name=f"trivial{n}")


def conjugation_rack(G: GroupTable, c: SubsetOfGroup, name: Optional[str] = None) -> Rack:
    """Rack on c with x |> y = x^-1 y x"""
    position = {g: i for i, g in enumerate(c.members)}
    act = []
    for x in c.members:
        row = []
        for y in c.members:
            z = G.conjugate(y, x)
            if z not in position:
                raise NotConjugationClosed("Subset is not closed under conjugation by its own elements",
                                           {"x": G.label(x), "y": G.label(y), "image": G.label(z)})
            row.append(position[z])
        act.append(tuple(row))
    return Rack(act=tuple(act), labels=tuple(c.labels()), group_origin=(G, c),
                name=name or f"conj({G.name})")


def is_quandle(R: Rack) -> bool:
    return all(R.act[x][x] == x for x in range(R.size))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _braid_move(act, t: Tuple[int, ...], i: int) -> Tuple[int, ...]:
    x, y = t[i], t[i + 1]
    return t[:i] + (y, act[y][x]) + t[i + 2:]


def _check_braid_relations(R: Rack, max_failures: int) -> List[Dict]:
    act = R.act
    n = R.size
    failures: List[Dict] = []

    pairs = list(product(range(n), repeat=2))
    images = {_braid_move(act, t, 0) for t in pairs}
    if len(images) != len(pairs):
        failures.append({"relation": "sigma bijective on c^2", "images": len(images), "tuples": len(pairs)})
        return failures

    for t in product(range(n), repeat=3):
        lhs = _braid_move(act, _braid_move(act, _braid_move(act, t, 0), 1), 0)
        rhs = _braid_move(act, _braid_move(act, _braid_move(act, t, 1), 0), 1)
        if lhs != rhs:
            failures.append({"relation": "s1 s2 s1 = s2 s1 s2", "tuple": list(t),
                             "lhs": list(lhs), "rhs": list(rhs)})
            if len(failures) >= max_failures:
                return failures

    for t in product(range(n), repeat=4):
        lhs = _braid_move(act, _braid_move(act, t, 0), 2)
        rhs = _braid_move(act, _braid_move(act, t, 2), 0)
        if lhs != rhs:
            failures.append({"relation": "s1 s3 = s3 s1", "tuple": list(t)})
            if len(failures) >= max_failures:
                return failures
    return failures


def validate_rack(R: Rack, max_failures: int = 10, check_braid: bool = True) -> RackReport:
    """Check row bijectivity and self-distributivity, then the braid relations independently"""
    A = R.array
    n = R.size
    ar = np.arange(n)

    bijective_failures = []
    for x in range(n):
        if not np.array_equal(np.sort(A[x]), ar):
            values, counts = np.unique(A[x], return_counts=True)
            repeated = int(values[counts > 1][0])
            ys = [int(y) for y in np.nonzero(A[x] == repeated)[0][:2]]
            bijective_failures.append({"x": R.label(x), "y1": R.label(ys[0]), "y2": R.label(ys[1]),
                                       "image": R.label(repeated)})
            if len(bijective_failures) >= max_failures:
                break

    # x |> (y |> z) against (x |> y) |> (x |> z) over all (x, y, z)
    lhs = A[:, A]                                   # [x, y, z] -> A[x, A[y, z]]
    rhs = A[A[:, :, None], A[:, None, :]]           # [x, y, z] -> A[A[x, y], A[x, z]]
    distributivity_failures = [
        {"x": R.label(int(x)), "y": R.label(int(y)), "z": R.label(int(z))}
        for x, y, z in np.argwhere(lhs != rhs)[:max_failures]
    ]

    valid = not bijective_failures and not distributivity_failures
    braid_failures: List[Dict] = []
    braid_valid = valid
    if check_braid:
        braid_failures = _check_braid_relations(R, max_failures)
        braid_valid = not braid_failures
        if braid_valid != valid:
            logger.error(f"Rack characterizations disagree on {R.name}: axioms={valid} braid={braid_valid}")
    return RackReport(valid=valid, bijective_failures=bijective_failures,
                      distributivity_failures=distributivity_failures,
                      braid_valid=braid_valid, braid_failures=braid_failures)


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

def reduced_structure_group(R: Rack, budget: int = DEFAULT_GROUP_BUDGET) -> StructureGroup:
    """Permutation group generated by the row maps y -> x |> y"""
    rows = [[v + 1 for v in R.act[x]] for x in range(R.size)]
    group = group_from_permutations(R.size, rows, name=f"G0({R.name})", budget=budget)
    row_elements = tuple(group.index_of([v + 1 for v in R.act[x]]) for x in range(R.size))
    return StructureGroup(group=group, row_elements=row_elements)


def _orbits(n: int, maps: Sequence[Sequence[int]]) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
    component_of = [-1] * n
    blocks: List[Tuple[int, ...]] = []
    for start in range(n):
        if component_of[start] >= 0:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            y = queue.popleft()
            for row in maps:
                z = row[y]
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        for y in orbit:
            component_of[y] = len(blocks)
        blocks.append(tuple(sorted(orbit)))
    return tuple(blocks), tuple(component_of)


def rack_components(R: Rack) -> RackComponentPartition:
    blocks, component_of = _orbits(R.size, R.act)
    return RackComponentPartition(rack=R, blocks=blocks, component_of=component_of)


def quotient_rack(R: Rack, partition: Optional[RackComponentPartition] = None) -> Rack:
    partition = partition or rack_components(R)
    k = len(partition.blocks)
    act = []
    for a in range(k):
        x = partition.blocks[a][0]
        act.append(tuple(partition.component_of[R.act[x][partition.blocks[b][0]]] for b in range(k)))
    labels = ["{" + ",".join(R.label(x) for x in block) + "}" for block in partition.blocks]
    return Rack(act=tuple(act), labels=tuple(labels), name=f"{R.name}/components")


def subrack_generated(R: Rack, S: Sequence[int]) -> Tuple[int, ...]:
    """Closure of S under x |> y, y |> x and the inverse row maps"""
    members = set(int(s) for s in S)
    changed = True
    while changed:
        changed = False
        current = sorted(members)
        for x in current:
            for y in current:
                for z in (R.act[x][y], R.act[y][x], R.inverse_act[x][y], R.inverse_act[y][x]):
                    if z not in members:
                        members.add(z)
                        changed = True
    return tuple(sorted(members))


def normalizer(R: Rack, S: Sequence[int]) -> Tuple[int, ...]:
    """{x in R : x |> y in S for all y in S}"""
    target = set(S)
    return tuple(x for x in range(R.size) if all(R.act[x][y] in target for y in target))


def operator_order(R: Rack, x: int) -> int:
    """Order of the permutation y -> x |> y"""
    row = R.act[x]
    seen = set()
    lengths = []
    for start in range(R.size):
        if start in seen:
            continue
        length = 0
        y = start
        while y not in seen:
            seen.add(y)
            y = row[y]
            length += 1
        lengths.append(length)
    return reduce(math.lcm, lengths, 1)


def structure_group_presentation(R: Rack) -> StructureGroupPresentation:
    pairs = tuple((x, y) for x in range(R.size) for y in range(R.size))
    relations = tuple(((x, -1), (y, 1), (x, 1), (R.act[x][y], -1)) for x, y in pairs)
    return StructureGroupPresentation(generators=tuple(f"[{label}]" for label in R.labels),
                                      relations=relations, pairs=pairs)


def presentation_abelianization(P: StructureGroupPresentation) -> Tuple[int, Tuple[int, ...]]:
    """Free rank and torsion of U(c)^ab from the exponent-sum relation matrix"""
    n = len(P.generators)
    columns = []
    for word in P.relations:
        col: Dict[int, int] = {}
        for g, e in word:
            col[g] = col.get(g, 0) + e
        columns.append({g: e for g, e in col.items() if e})
    snf = smith_normal_form(IntegerMatrix.from_columns(n, columns))
    return snf.cokernel_free_rank, snf.invariant_factors


def inner_image_signature(R: Rack) -> Tuple[int, Tuple[int, ...]]:
    """Order and sorted orbit sizes of the group generated by the row maps"""
    structure = reduced_structure_group(R)
    blocks, _ = _orbits(R.size, R.act)
    return structure.group.order, tuple(sorted(len(b) for b in blocks))


def conjugation_image_signature(G: GroupTable, c: SubsetOfGroup) -> Tuple[int, Tuple[int, ...]]:
    """Order and orbit sizes of <c> acting on c by conjugation, computed in G"""
    H = subgroup_generated(G, c.members)
    position = {g: i for i, g in enumerate(c.members)}
    maps = [[position[G.conjugate(y, h)] for y in c.members] for h in H.members]
    images = {tuple(m) for m in maps}
    blocks, _ = _orbits(len(c), maps)
    return len(images), tuple(sorted(len(b) for b in blocks))


def subset_in_rack(R: Rack, labels: Sequence[str]) -> Tuple[int, ...]:
    return tuple(sorted(R.index_of(label) for label in labels))


def rack_subset_as_group_subset(R: Rack, elements: Sequence[int]) -> SubsetOfGroup:
    return make_subset(R.group, (R.group_element(x) for x in elements))

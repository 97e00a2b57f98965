#!/usr/bin/env python3
"""Braid-group orbits on rack tuples: the components of Hurwitz spaces.

Tuples over a rack of size k are packed into base-k integers, most
significant digit first, so numeric order is lexicographic order and the
canonical representative of an orbit is simply its smallest code.

Full enumeration splits the sorted admissible codes into static shards.
Each shard runs a local union-find over sigma moves that stay inside it
and reports the moves that leave it; the parent process merges shards with
a union-find whose root is always the smallest code, so the result does
not depend on the shard layout or worker count.
"""

import logging
import math
import time
from bisect import bisect_left
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import pandas as pd

from group_core import (GroupTable, SubsetOfGroup, abelianization, conjugacy_partition,
                        generators_of, group_from_permutations, is_subgroup, subgroup_generated,
                        whole_group)
from hurwitz_config import DEFAULT_PARALLEL_THRESHOLD, DEFAULT_STATE_BUDGET
from hurwitz_errors import (BudgetExceeded, IndexOutOfRange, InternalMismatch, KDoesNotNormalize,
                            NotGenerating, NotGroupOrigin, NotSingleClass, SpecFormatError,
                            TupleLeftCatalog)
from rack_core import Rack, conjugation_rack, rack_components, reduced_structure_group

logger = logging.getLogger(__name__)

Codes = Union[range, List[int]]


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TupleSpaceSpec:
    rack: Rack
    n: int
    multidegree_filter: Optional[Tuple[int, ...]] = None
    generating_only: bool = False
    target_subgroup: Optional[SubsetOfGroup] = None
    monodromy_filter: Optional[int] = None
    budget: int = DEFAULT_STATE_BUDGET
    check_invariants: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise SpecFormatError("Tuple length must be at least 1", {"n": self.n})
        if self.multidegree_filter is not None:
            blocks = rack_components(self.rack).blocks
            if len(self.multidegree_filter) != len(blocks) or sum(self.multidegree_filter) != self.n \
                    or any(m < 0 for m in self.multidegree_filter):
                raise SpecFormatError("Multidegree must have one non-negative entry per rack component summing to n",
                                      {"multidegree": list(self.multidegree_filter),
                                       "components": len(blocks), "n": self.n})
        if (self.target_subgroup is not None or self.monodromy_filter is not None) \
                and self.rack.group_origin is None:
            raise NotGroupOrigin("Subgroup and monodromy filters need a conjugation rack",
                                 {"rack": self.rack.name})


@dataclass(frozen=True)
class ComponentRecord:
    canonical_rep: Tuple[int, ...]
    orbit_size: int
    multidegree: Tuple[int, ...]
    boundary_monodromy: Optional[int] = None
    generated_subgroup: Optional[Tuple[int, ...]] = None
    monodromy_orbit: Optional[Tuple[int, ...]] = None
    merged_reps: Tuple[Tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class CatalogTotals:
    states_visited: int
    admissible_tuples: int
    mode: str = "full"
    complete: bool = True
    wall_time: float = field(default=0.0, compare=False)


@dataclass(frozen=True, eq=False)
class ComponentCatalog:
    spec: TupleSpaceSpec
    records: Tuple[ComponentRecord, ...]
    totals: CatalogTotals
    quotient_group: Optional[SubsetOfGroup] = None
    # in-process membership: admissible codes, their union-find roots, root -> record
    _codes: Optional[Codes] = field(default=None, repr=False)
    _roots: Optional[List[int]] = field(default=None, repr=False)
    _record_of_root: Optional[Dict[int, int]] = field(default=None, repr=False)
    _remap: Optional[Tuple[int, ...]] = field(default=None, repr=False)

    @property
    def rack(self) -> Rack:
        return self.spec.rack

    def __len__(self) -> int:
        return len(self.records)

    def _canonical_index(self) -> Dict[Tuple[int, ...], int]:
        cached = self.__dict__.get("_canonical_cache")
        if cached is None:
            cached = {}
            for i, rec in enumerate(self.records):
                cached[rec.canonical_rep] = i
                for rep in rec.merged_reps:
                    cached[rep] = i
            self.__dict__["_canonical_cache"] = cached
        return cached

    def locate(self, t: Sequence[int]) -> int:
        """Index of the record containing tuple t"""
        t = tuple(t)
        if self._codes is not None:
            codec = TupleCodec(self.rack.size, self.spec.n)
            pos = _position(self._codes, codec.encode(t))
            if pos is None:
                raise TupleLeftCatalog("Tuple is not admissible for this catalog",
                                       {"tuple": self.rack_labels(t)})
            idx = self._record_of_root.get(self._roots[pos])
            if idx is None:
                raise TupleLeftCatalog("Tuple lies in a component removed by the generation filter",
                                       {"tuple": self.rack_labels(t)})
            return self._remap[idx] if self._remap is not None else idx
        rep = orbit_minimum(self.rack, t, self.spec.budget)
        idx = self._canonical_index().get(rep)
        if idx is None:
            raise TupleLeftCatalog("Tuple has no component in the catalog", {"tuple": self.rack_labels(t)})
        return idx

    def rack_labels(self, t: Sequence[int]) -> List[str]:
        return [self.rack.label(x) for x in t]


# ---------------------------------------------------------------------------
# Codec and moves
# ---------------------------------------------------------------------------

class TupleCodec:
    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n
        self.weights = tuple(k ** (n - 1 - j) for j in range(n))
        self.total = k ** n

    def encode(self, t: Sequence[int]) -> int:
        code = 0
        for x in t:
            code = code * self.k + x
        return code

    def decode(self, code: int) -> Tuple[int, ...]:
        digits = [0] * self.n
        for j in range(self.n - 1, -1, -1):
            code, digits[j] = divmod(code, self.k)
        return tuple(digits)


def sigma(R: Rack, t: Sequence[int], i: int, inverse: bool = False) -> Tuple[int, ...]:
    """sigma_i (1-based): (.., x_i, x_{i+1}, ..) -> (.., x_{i+1}, x_{i+1} |> x_i, ..)"""
    t = tuple(t)
    if not 1 <= i <= len(t) - 1:
        raise IndexOutOfRange(f"sigma index {i} outside 1..{len(t) - 1}", {"i": i, "n": len(t)})
    a, b = t[i - 1], t[i]
    if inverse:
        pair = (R.inverse_act[a][b], a)
    else:
        pair = (b, R.act[b][a])
    return t[:i - 1] + pair + t[i + 1:]


def _move(act, weights, k: int, code: int, i: int) -> int:
    wi, wj = weights[i], weights[i + 1]
    x = (code // wi) % k
    y = (code // wj) % k
    return code + (y - x) * wi + (act[y][x] - y) * wj


def _position(codes: Codes, code: int) -> Optional[int]:
    if isinstance(codes, range):
        return code - codes.start if codes.start <= code < codes.stop else None
    pos = bisect_left(codes, code)
    if pos < len(codes) and codes[pos] == code:
        return pos
    return None


class MinRootUnionFind:
    """Union-find over positions 0..size-1 whose root is always the smallest member"""

    def __init__(self, parent: List[int]):
        self.parent = parent

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb


def _explore_shard(task) -> Tuple[List[int], List[Tuple[int, int]], int]:
    """Local union-find on one shard; returns global roots, outgoing edges, invariant violations"""
    act, pair_ok, k, n, start, codes = task
    weights = tuple(k ** (n - 1 - j) for j in range(n))
    size = len(codes)
    uf = MinRootUnionFind(list(range(size)))
    lo, hi = codes[0], codes[-1]
    cross: List[Tuple[int, int]] = []
    violations = 0
    for local in range(size):
        code = codes[local]
        for i in range(n - 1):
            if pair_ok is not None:
                x = (code // weights[i]) % k
                y = (code // weights[i + 1]) % k
                if not pair_ok[y][x]:
                    violations += 1
            target = _move(act, weights, k, code, i)
            if lo <= target <= hi:
                other = _position(codes, target)
                if other is None:
                    cross.append((start + local, target))
                else:
                    uf.union(local, other)
            else:
                cross.append((start + local, target))
    roots = [uf.find(i) + start for i in range(size)]
    return roots, cross, violations


# ---------------------------------------------------------------------------
# Admissible sets
# ---------------------------------------------------------------------------

def _rack_group_data(R: Rack):
    G = R.group
    elements = R.subset.members
    return G, elements, G.mul_rows


def tuple_multidegree(R: Rack, t: Sequence[int], component_of: Sequence[int], blocks: int) -> Tuple[int, ...]:
    counts = [0] * blocks
    for x in t:
        counts[component_of[x]] += 1
    return tuple(counts)


def boundary_monodromy(R: Rack, t: Sequence[int]) -> int:
    G = R.group
    return G.product(R.group_element(x) for x in t)


def _filtered_codes(spec: TupleSpaceSpec, limit: int) -> Iterator[int]:
    """Admissible codes in increasing order, depth-first over prefixes"""
    R = spec.rack
    k, n = R.size, spec.n
    partition = rack_components(R)
    comp = partition.component_of
    target = spec.multidegree_filter
    counts = [0] * len(partition.blocks)

    mono = spec.monodromy_filter
    if mono is not None:
        G, elements, rows = _rack_group_data(R)
        position = {g: i for i, g in enumerate(elements)}
        inv = G.inv
    emitted = 0

    def walk(depth: int, code: int, prod: int) -> Iterator[int]:
        nonlocal emitted
        if depth == n - 1 and mono is not None:
            x = position.get(rows[inv[prod]][mono])
            if x is None:
                return
            if target is not None and counts[comp[x]] >= target[comp[x]]:
                return
            emitted += 1
            if emitted > limit:
                raise _LimitReached()
            yield code * k + x
            return
        for x in range(k):
            if target is not None:
                b = comp[x]
                if counts[b] >= target[b]:
                    continue
                counts[b] += 1
            nxt = code * k + x
            nprod = rows[prod][elements[x]] if mono is not None else 0
            if depth == n - 1:
                emitted += 1
                if emitted > limit:
                    raise _LimitReached()
                yield nxt
            else:
                yield from walk(depth + 1, nxt, nprod)
            if target is not None:
                counts[comp[x]] -= 1

    start_prod = R.group.id_index if mono is not None else 0
    yield from walk(0, 0, start_prod)


class _LimitReached(Exception):
    pass


def count_admissible_upper_bound(spec: TupleSpaceSpec) -> int:
    R = spec.rack
    if spec.multidegree_filter is None:
        return R.size ** spec.n
    blocks = rack_components(R).blocks
    total = math.factorial(spec.n)
    for m, block in zip(spec.multidegree_filter, blocks):
        total = total // math.factorial(m) * len(block) ** m
    return total


def admissible_codes(spec: TupleSpaceSpec) -> Optional[Codes]:
    """Sorted admissible codes, or None when more than spec.budget"""
    if spec.multidegree_filter is None and spec.monodromy_filter is None:
        total = spec.rack.size ** spec.n
        return range(total) if total <= spec.budget else None
    if spec.monodromy_filter is None and count_admissible_upper_bound(spec) > spec.budget:
        return None
    try:
        return list(_filtered_codes(spec, spec.budget))
    except _LimitReached:
        return None


def is_admissible(spec: TupleSpaceSpec, t: Sequence[int]) -> bool:
    R = spec.rack
    if len(t) != spec.n or any(not 0 <= x < R.size for x in t):
        return False
    if spec.multidegree_filter is not None:
        partition = rack_components(R)
        if tuple_multidegree(R, t, partition.component_of, len(partition.blocks)) != spec.multidegree_filter:
            return False
    if spec.monodromy_filter is not None and boundary_monodromy(R, t) != spec.monodromy_filter:
        return False
    return True


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

class _RecordFactory:
    """Derives record fields from a representative, memoizing subgroup closures"""

    def __init__(self, spec: TupleSpaceSpec):
        self.spec = spec
        self.rack = spec.rack
        partition = rack_components(self.rack)
        self.component_of = partition.component_of
        self.blocks = len(partition.blocks)
        self._subgroups: Dict[frozenset, Tuple[int, ...]] = {}
        self._rack_generation: Dict[frozenset, bool] = {}
        self._structure_order: Optional[int] = None

    def generated(self, t: Sequence[int]) -> Optional[Tuple[int, ...]]:
        if self.rack.group_origin is None:
            return None
        key = frozenset(t)
        if key not in self._subgroups:
            G = self.rack.group
            self._subgroups[key] = subgroup_generated(G, (self.rack.group_element(x) for x in key)).members
        return self._subgroups[key]

    def generates_structure_group(self, t: Sequence[int]) -> bool:
        key = frozenset(t)
        if key not in self._rack_generation:
            if self._structure_order is None:
                self._structure_order = reduced_structure_group(self.rack).group.order
            rows = [[v + 1 for v in self.rack.act[x]] for x in sorted(key)]
            order = group_from_permutations(self.rack.size, rows).order
            self._rack_generation[key] = order == self._structure_order
        return self._rack_generation[key]

    def keep(self, t: Sequence[int]) -> bool:
        if self.spec.target_subgroup is not None:
            if self.generated(t) != self.spec.target_subgroup.members:
                return False
        if self.spec.generating_only and not self.generates_structure_group(t):
            return False
        return True

    def record(self, rep: Tuple[int, ...], size: int) -> ComponentRecord:
        mono = boundary_monodromy(self.rack, rep) if self.rack.group_origin is not None else None
        return ComponentRecord(
            canonical_rep=rep,
            orbit_size=size,
            multidegree=tuple_multidegree(self.rack, rep, self.component_of, self.blocks),
            boundary_monodromy=mono,
            generated_subgroup=self.generated(rep),
        )


def _pair_table(R: Rack) -> List[List[bool]]:
    """pair_ok[y][x]: swapping (x, y) to (y, y |> x) keeps component counts and the product"""
    comp = rack_components(R).component_of
    table = []
    for y in range(R.size):
        row = []
        for x in range(R.size):
            ok = comp[R.act[y][x]] == comp[x]
            if ok and R.group_origin is not None:
                G = R.group
                gx, gy, gz = R.group_element(x), R.group_element(y), R.group_element(R.act[y][x])
                ok = G.multiply(gx, gy) == G.multiply(gy, gz)
            row.append(ok)
        table.append(row)
    return table


def orbit_closure(R: Rack, t: Sequence[int], budget: int = DEFAULT_STATE_BUDGET) -> List[Tuple[int, ...]]:
    codec = TupleCodec(R.size, len(t))
    start = codec.encode(t)
    seen = {start}
    queue = deque([start])
    act, weights, k = R.act, codec.weights, R.size
    while queue:
        code = queue.popleft()
        for i in range(codec.n - 1):
            target = _move(act, weights, k, code, i)
            if target not in seen:
                if len(seen) >= budget:
                    raise BudgetExceeded("Orbit closure exceeds the state budget",
                                         {"budget": budget, "states_visited": len(seen)})
                seen.add(target)
                queue.append(target)
    return [codec.decode(c) for c in sorted(seen)]


def orbit_minimum(R: Rack, t: Sequence[int], budget: int = DEFAULT_STATE_BUDGET) -> Tuple[int, ...]:
    return orbit_closure(R, t, budget)[0]


def component_of(R: Rack, t: Sequence[int], budget: int = DEFAULT_STATE_BUDGET) -> ComponentRecord:
    """Record of the braid orbit through t, by breadth-first closure"""
    t = tuple(t)
    if any(not 0 <= x < R.size for x in t):
        raise IndexOutOfRange("Tuple entry outside the rack", {"tuple": list(t), "size": R.size})
    orbit = orbit_closure(R, t, budget)
    factory = _RecordFactory(TupleSpaceSpec(rack=R, n=len(t), budget=budget))
    return factory.record(orbit[0], len(orbit))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _run_shards(spec: TupleSpaceSpec, codes: Codes, workers: int,
                parallel_threshold: int) -> Tuple[List[int], int]:
    R = spec.rack
    k, n = R.size, spec.n
    pair_ok = _pair_table(R) if spec.check_invariants else None
    total = len(codes)
    use_pool = workers > 1 and total >= parallel_threshold
    shard_count = workers if use_pool else 1
    bounds = [total * s // shard_count for s in range(shard_count + 1)]
    tasks = [(R.act, pair_ok, k, n, bounds[s], codes[bounds[s]:bounds[s + 1]])
             for s in range(shard_count) if bounds[s] < bounds[s + 1]]
    logger.info(f"Exploring {total} admissible tuples in {len(tasks)} shard(s)"
                f"{' with ' + str(workers) + ' workers' if use_pool else ''}")

    if use_pool:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_explore_shard, tasks))
    else:
        results = [_explore_shard(task) for task in tasks]

    parent: List[int] = []
    for roots, _, _ in results:
        parent.extend(roots)
    uf = MinRootUnionFind(parent)
    violations = 0
    for _, cross, bad in results:
        violations += bad
        for pos, target in cross:
            other = _position(codes, target)
            if other is None:
                raise InternalMismatch("Sigma move left the admissible set",
                                       {"code": codes[pos], "target": target})
            uf.union(pos, other)
    roots = [uf.find(p) for p in range(total)]
    return roots, violations


def enumerate_components(spec: TupleSpaceSpec, seeds: Optional[Iterable[Sequence[int]]] = None,
                         workers: int = 1,
                         parallel_threshold: int = DEFAULT_PARALLEL_THRESHOLD) -> ComponentCatalog:
    """Orbit partition of the admissible tuples of spec"""
    started = time.perf_counter()
    R = spec.rack
    codec = TupleCodec(R.size, spec.n)
    codes = admissible_codes(spec)
    if codes is None:
        if seeds is None:
            raise BudgetExceeded("Admissible tuple set exceeds the state budget",
                                 {"budget": spec.budget, "n": spec.n, "rack_size": R.size,
                                  "upper_bound": count_admissible_upper_bound(spec)})
        return _enumerate_seeded(spec, seeds, started)

    roots, violations = _run_shards(spec, codes, workers, parallel_threshold)
    if violations:
        raise InternalMismatch("Multidegree or monodromy changed along a sigma move",
                               {"violations": violations})

    sizes = Counter(roots)
    factory = _RecordFactory(spec)
    records: List[ComponentRecord] = []
    record_of_root: Dict[int, int] = {}
    for root in sorted(sizes):
        rep = codec.decode(codes[root])
        if not factory.keep(rep):
            continue
        record_of_root[root] = len(records)
        records.append(factory.record(rep, sizes[root]))

    admissible = sum(r.orbit_size for r in records)
    elapsed = time.perf_counter() - started
    logger.info(f"Found {len(records)} components over {admissible} tuples (n={spec.n}) in {elapsed:.2f}s")
    return ComponentCatalog(spec=spec, records=tuple(records),
                            totals=CatalogTotals(states_visited=len(codes), admissible_tuples=admissible,
                                                 mode="full", complete=True, wall_time=elapsed),
                            _codes=codes, _roots=roots, _record_of_root=record_of_root)


def _enumerate_seeded(spec: TupleSpaceSpec, seeds: Iterable[Sequence[int]], started: float) -> ComponentCatalog:
    R = spec.rack
    factory = _RecordFactory(spec)
    visited = 0
    found: Dict[Tuple[int, ...], ComponentRecord] = {}
    covered = set()
    codec = TupleCodec(R.size, spec.n)
    for seed in seeds:
        seed = tuple(seed)
        if not is_admissible(spec, seed):
            raise SpecFormatError("Seed tuple is not admissible", {"seed": [R.label(x) for x in seed]})
        if codec.encode(seed) in covered:
            continue
        try:
            orbit = orbit_closure(R, seed, spec.budget - visited)
        except BudgetExceeded as exc:
            raise BudgetExceeded("Seeded closure exceeds the state budget",
                                 {"budget": spec.budget, "states_visited": visited + exc.witness["states_visited"],
                                  "components_found": len(found)}) from exc
        visited += len(orbit)
        covered.update(codec.encode(t) for t in orbit)
        if factory.keep(orbit[0]):
            found[orbit[0]] = factory.record(orbit[0], len(orbit))
    records = tuple(found[rep] for rep in sorted(found))
    logger.warning(f"Seeded enumeration: {len(records)} provisional components from {visited} states")
    return ComponentCatalog(spec=spec, records=records,
                            totals=CatalogTotals(states_visited=visited,
                                                 admissible_tuples=sum(r.orbit_size for r in records),
                                                 mode="seeded", complete=False,
                                                 wall_time=time.perf_counter() - started))


# ---------------------------------------------------------------------------
# K-conjugation quotient
# ---------------------------------------------------------------------------

def quotient_by_conjugation(catalog: ComponentCatalog, K: SubsetOfGroup) -> ComponentCatalog:
    """Merge records whose representatives are braid-equivalent after simultaneous K-conjugation"""
    R = catalog.rack
    if R.group_origin is None:
        raise NotGroupOrigin("Conjugation quotient needs a conjugation rack", {"rack": R.name})
    G, c = R.group, R.subset
    if K.parent is not G or not is_subgroup(G, K):
        raise KDoesNotNormalize("K must be a subgroup of the rack's group", {"K": K.labels()})
    position = {g: i for i, g in enumerate(c.members)}
    for k in K.members:
        for x in c.members:
            if G.conjugate(x, k) not in position:
                raise KDoesNotNormalize("K does not normalize c", {"k": G.label(k), "x": G.label(x)})

    gens = generators_of(G, K.members)
    count = len(catalog.records)
    uf = MinRootUnionFind(list(range(count)))
    for idx, rec in enumerate(catalog.records):
        for k in gens:
            image = tuple(position[G.conjugate(R.group_element(x), k)] for x in rec.canonical_rep)
            try:
                other = catalog.locate(image)
            except TupleLeftCatalog as exc:
                raise TupleLeftCatalog("K-conjugate of a component leaves the catalog (filter not K-stable)",
                                       dict(exc.witness, k=G.label(k))) from exc
            uf.union(idx, other)

    groups: Dict[int, List[int]] = {}
    for idx in range(count):
        groups.setdefault(uf.find(idx), []).append(idx)

    merged: List[ComponentRecord] = []
    remap = [0] * count
    for root in sorted(groups):
        members = groups[root]
        base = catalog.records[root]
        orbit = None
        if base.boundary_monodromy is not None:
            orbit = tuple(sorted({G.conjugate(base.boundary_monodromy, k) for k in K.members}))
        for idx in members:
            remap[idx] = len(merged)
        merged.append(replace(base,
                              orbit_size=sum(catalog.records[i].orbit_size for i in members),
                              monodromy_orbit=orbit,
                              merged_reps=tuple(catalog.records[i].canonical_rep for i in members[1:])))

    if catalog._remap is not None:
        composed = tuple(remap[i] for i in catalog._remap)
    else:
        composed = tuple(remap)
    logger.info(f"K-quotient (|K|={len(K)}): {count} -> {len(merged)} components")
    return ComponentCatalog(spec=catalog.spec, records=tuple(merged), totals=catalog.totals,
                            quotient_group=K, _codes=catalog._codes, _roots=catalog._roots,
                            _record_of_root=catalog._record_of_root, _remap=composed)


# ---------------------------------------------------------------------------
# Stable counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StableScanRow:
    n: int
    count: Optional[int]
    predicted_zero: bool
    states_visited: int = 0


@dataclass(frozen=True)
class StableScanReport:
    group: GroupTable
    classes: SubsetOfGroup
    monodromy: int
    rows: Tuple[StableScanRow, ...]
    stable_window: Optional[Tuple[int, int]]
    stable_value: Optional[int]
    obstruction_consistent: bool

    def to_dict(self) -> Dict:
        G = self.group
        return {
            "group": G.name,
            "classes": self.classes.labels(),
            "monodromy": G.label(self.monodromy),
            "rows": [{"n": r.n, "count": r.count, "predicted_zero": r.predicted_zero,
                      "states_visited": r.states_visited} for r in self.rows],
            "stable_window": list(self.stable_window) if self.stable_window else None,
            "stable_value": self.stable_value,
            "obstruction_consistent": self.obstruction_consistent,
        }


def require_single_generating_class(G: GroupTable, c: SubsetOfGroup) -> None:
    partition = conjugacy_partition(c, G)
    if len(partition.blocks) != 1:
        raise NotSingleClass("c must be a single conjugacy class",
                             {"classes": [G.labels(b) for b in partition.blocks]})
    if len(subgroup_generated(G, c.members)) != G.order:
        raise NotGenerating("c must generate G", {"classes": c.labels(), "order": G.order})


def stable_count_scan(G: GroupTable, c: SubsetOfGroup, monodromy: int, n_values: Iterable[int],
                      budget: int = DEFAULT_STATE_BUDGET, workers: int = 1,
                      parallel_threshold: int = DEFAULT_PARALLEL_THRESHOLD) -> StableScanReport:
    """Connected-component counts with fixed boundary monodromy over a range of n"""
    require_single_generating_class(G, c)
    R = conjugation_rack(G, c)
    ab = abelianization(G)
    x_image = ab.image(c.members[0])
    g_image = ab.image(monodromy)
    everything = whole_group(G)

    rows: List[StableScanRow] = []
    for n in n_values:
        predicted_zero = tuple((n * a) % d for a, d in zip(x_image, ab.invariant_factors)) != g_image
        spec = TupleSpaceSpec(rack=R, n=n, target_subgroup=everything, monodromy_filter=monodromy, budget=budget)
        try:
            catalog = enumerate_components(spec, workers=workers, parallel_threshold=parallel_threshold)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"Stable scan infeasible at n={n}",
                                 dict(exc.witness, n=n, rows=[[r.n, r.count] for r in rows])) from exc
        rows.append(StableScanRow(n=n, count=len(catalog.records), predicted_zero=predicted_zero,
                                  states_visited=catalog.totals.states_visited))

    consistent = all(r.count == 0 for r in rows if r.predicted_zero)
    live = [r for r in rows if not r.predicted_zero]
    window, value = None, None
    if live:
        value = live[-1].count
        start = len(live) - 1
        while start > 0 and live[start - 1].count == value:
            start -= 1
        window = (live[start].n, live[-1].n)
    return StableScanReport(group=G, classes=c, monodromy=monodromy, rows=tuple(rows),
                            stable_window=window, stable_value=value, obstruction_consistent=consistent)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

CATALOG_CSV_COLUMNS = ["index", "canonical_rep", "orbit_size", "multidegree", "monodromy", "generated_order"]


def catalog_summary_frame(catalog: ComponentCatalog) -> pd.DataFrame:
    R = catalog.rack
    G = R.group
    rows = []
    for i, rec in enumerate(catalog.records):
        rows.append({
            "index": i,
            "canonical_rep": " ".join(R.label(x) for x in rec.canonical_rep),
            "orbit_size": rec.orbit_size,
            "multidegree": ",".join(str(m) for m in rec.multidegree),
            "monodromy": G.label(rec.boundary_monodromy) if rec.boundary_monodromy is not None else "",
            "generated_order": len(rec.generated_subgroup) if rec.generated_subgroup is not None else "",
        })
    return pd.DataFrame(rows, columns=CATALOG_CSV_COLUMNS)

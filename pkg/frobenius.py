#!/usr/bin/env python3
"""q-powering on conjugation racks and its action on Hurwitz components.

Over F_q, Frobenius sends the component indexed by [g1]...[gn] to the one
indexed by [g1^(1/q)]...[gn^(1/q)], where 1/q-powering is the inverse of
the bijection x -> x^q on c. A component descends to a geometrically
irreducible one when this image agrees with a simultaneous K-conjugate.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from braid_orbits import ComponentCatalog, TupleSpaceSpec, enumerate_components, orbit_closure
from group_core import (ConjClassPartition, GroupTable, SubsetOfGroup, conjugacy_partition, is_subgroup,
                        subgroup_generated, whole_group)
from hurwitz_config import DEFAULT_PARALLEL_THRESHOLD, DEFAULT_STATE_BUDGET
from hurwitz_errors import (GcdViolation, IncompatiblePartition, InternalMismatch, KDoesNotNormalize,
                            NotClosedUnderPowering, NotGroupOrigin, SpecFormatError, TupleLeftCatalog)
from rack_core import conjugation_rack

logger = logging.getLogger(__name__)


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


@dataclass(frozen=True)
class PoweringMap:
    group: GroupTable
    subset: SubsetOfGroup
    q: int
    forward: Tuple[int, ...]
    backward: Tuple[int, ...]

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.forward))

    def backward_element(self, g: int) -> int:
        members = self.subset.members
        return members[self.backward[members.index(g)]]

    def forward_element(self, g: int) -> int:
        members = self.subset.members
        return members[self.forward[members.index(g)]]


def q_powering(G: GroupTable, c: SubsetOfGroup, q: int) -> PoweringMap:
    """x -> x^q on c and its inverse, as permutations of the positions of c"""
    if math.gcd(q, G.order) != 1:
        raise GcdViolation("q must be coprime to |G|", {"q": q, "order": G.order})
    if not is_prime_power(q):
        logger.warning(f"q={q} is not a prime power; powering is still well defined")
    position = {g: i for i, g in enumerate(c.members)}
    forward = []
    for x in c.members:
        y = G.power(x, q)
        if y not in position:
            raise NotClosedUnderPowering("c is not closed under q-th powering",
                                         {"x": G.label(x), "power": G.label(y), "q": q})
        forward.append(position[y])
    if len(set(forward)) != len(forward):
        raise InternalMismatch("q-th powering is not injective on c", {"q": q})
    backward = [0] * len(forward)
    for i, j in enumerate(forward):
        backward[j] = i

    for x in c.members:
        fx = G.power(x, q)
        for g in G.elements():
            if G.power(G.conjugate(x, g), q) != G.conjugate(fx, g):
                raise InternalMismatch("Powering does not commute with conjugation",
                                       {"x": G.label(x), "g": G.label(g)})
    return PoweringMap(group=G, subset=c, q=q, forward=tuple(forward), backward=tuple(backward))


def _require_matching_rack(catalog: ComponentCatalog, pm: PoweringMap) -> None:
    R = catalog.rack
    if R.group_origin is None or R.group is not pm.group or R.subset.members != pm.subset.members:
        raise NotGroupOrigin("Catalog rack is not the conjugation rack of the powering map",
                             {"rack": R.name, "group": pm.group.name})


def powered_tuple(pm: PoweringMap, t: Sequence[int]) -> Tuple[int, ...]:
    """Entrywise 1/q-powering of a rack tuple"""
    return tuple(pm.backward[x] for x in t)


def powering_action_on_components(catalog: ComponentCatalog, pm: PoweringMap) -> Tuple[int, ...]:
    """Record permutation induced by 1/q-powering of canonical representatives"""
    _require_matching_rack(catalog, pm)
    images = []
    for rec in catalog.records:
        try:
            images.append(catalog.locate(powered_tuple(pm, rec.canonical_rep)))
        except TupleLeftCatalog as exc:
            raise TupleLeftCatalog("Powered representative left the catalog",
                                   dict(exc.witness, q=pm.q)) from exc
    if len(set(images)) != len(images):
        raise InternalMismatch("Powering action on components is not a bijection", {"images": images})
    for i, j in enumerate(images):
        if catalog.records[i].orbit_size != catalog.records[j].orbit_size:
            raise InternalMismatch("Powering action changed an orbit size", {"record": i, "image": j})
    return tuple(images)


def require_normalizing(G: GroupTable, c: SubsetOfGroup, K: SubsetOfGroup) -> None:
    if K.parent is not G or not is_subgroup(G, K):
        raise KDoesNotNormalize("K must be a subgroup of the rack's group", {"K": K.labels()})
    for k in K.members:
        for x in c.members:
            if G.conjugate(x, k) not in c.member_set:
                raise KDoesNotNormalize("K does not normalize c", {"k": G.label(k), "x": G.label(x)})


def _conjugate_tuple(catalog: ComponentCatalog, t: Sequence[int], h: int) -> Tuple[int, ...]:
    R = catalog.rack
    G = R.group
    position = {g: i for i, g in enumerate(R.subset.members)}
    return tuple(position[G.conjugate(R.group_element(x), h)] for x in t)


def _descends(record: int, catalog: ComponentCatalog, pm: PoweringMap, K: SubsetOfGroup) -> bool:
    rep = catalog.records[record].canonical_rep
    # the powered tuple may have another multidegree, so its orbit is taken on the whole rack
    powered = set(orbit_closure(catalog.rack, powered_tuple(pm, rep), catalog.spec.budget))
    return any(_conjugate_tuple(catalog, rep, h) in powered for h in K.members)


def is_geometrically_irreducible(record: int, catalog: ComponentCatalog, pm: PoweringMap,
                                 K: SubsetOfGroup) -> bool:
    """Some h in K makes the 1/q-powered representative braid-equivalent to its h-conjugate"""
    _require_matching_rack(catalog, pm)
    require_normalizing(pm.group, pm.subset, K)
    return _descends(record, catalog, pm, K)


def fixed_record_flags(catalog: ComponentCatalog, pm: PoweringMap, K: SubsetOfGroup) -> List[bool]:
    _require_matching_rack(catalog, pm)
    require_normalizing(pm.group, pm.subset, K)
    return [_descends(i, catalog, pm, K) for i in range(len(catalog.records))]


def rack_class_partition(G: GroupTable, c: SubsetOfGroup) -> ConjClassPartition:
    """Classes of c under conjugation by <c>: the components of the conjugation rack"""
    return conjugacy_partition(c, subgroup_generated(G, c.members))


def _block_image(partition: ConjClassPartition, pm: PoweringMap, h: int, block: Sequence[int]) -> int:
    G = pm.group
    h_inv = G.inverse(h)
    targets = set()
    for x in block:
        # h x^(1/q) h^-1
        y = G.conjugate(pm.backward_element(x), h_inv)
        if y not in partition.class_of:
            raise IncompatiblePartition("Conjugate of a powered element leaves c",
                                        {"x": G.label(x), "h": G.label(h), "image": G.label(y)})
        targets.add(partition.class_of[y])
    if len(targets) != 1:
        raise IncompatiblePartition("Powering and conjugation do not map blocks to blocks",
                                    {"block": G.labels(block), "h": G.label(h)})
    return targets.pop()


def multidegree_necessary_condition(multidegree: Sequence[int], partition: ConjClassPartition,
                                    pm: PoweringMap, K: SubsetOfGroup) -> bool:
    """Some h in K leaves the formal class sum of the multidegree unchanged"""
    if len(multidegree) != len(partition.blocks):
        raise SpecFormatError("Multidegree length differs from the number of classes",
                              {"multidegree": list(multidegree), "classes": len(partition.blocks)})
    wanted = tuple(multidegree)
    for h in K.members:
        moved = [0] * len(wanted)
        for i, block in enumerate(partition.blocks):
            moved[_block_image(partition, pm, h, block)] += wanted[i]
        if tuple(moved) == wanted:
            return True
    return False


def d_constant(G: GroupTable, c: SubsetOfGroup, q: int) -> int:
    """Number of orbits of q-th powering on the G-conjugacy classes in c"""
    pm = q_powering(G, c, q)
    classes = conjugacy_partition(c, G)
    image = [classes.class_of[pm.forward_element(block[0])] for block in classes.blocks]
    seen = set()
    cycles = 0
    for start in range(len(image)):
        if start in seen:
            continue
        cycles += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = image[x]
    return cycles


# ---------------------------------------------------------------------------
# Periodicity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicityRow:
    n: int
    multidegree: Tuple[int, ...]
    residues: Tuple[int, ...]
    necessary: bool
    components: Optional[int]
    fixed: int


@dataclass(frozen=True)
class PeriodicityReport:
    q: int
    modulus: int
    rows: Tuple[PeriodicityRow, ...]
    threshold: Optional[int]
    periodic: bool
    counts_by_residue: Dict[Tuple[int, ...], Tuple[int, ...]]

    def to_dict(self) -> Dict:
        return {
            "q": self.q,
            "modulus": self.modulus,
            "threshold": self.threshold,
            "periodic": self.periodic,
            "rows": [{"n": r.n, "multidegree": list(r.multidegree), "residues": list(r.residues),
                      "necessary": r.necessary, "components": r.components, "fixed": r.fixed}
                     for r in self.rows],
            "counts_by_residue": {",".join(str(v) for v in key): list(values)
                                  for key, values in sorted(self.counts_by_residue.items())},
        }


def _compositions(n: int, parts: int) -> Iterable[Tuple[int, ...]]:
    """Non-negative vectors of the given length summing to n, in lexicographic order"""
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def periodicity_scan(G: GroupTable, c: SubsetOfGroup, q: int, K: SubsetOfGroup,
                     n_values: Iterable[int], residues: Optional[Sequence[int]] = None,
                     modulus: str = "G", generating: bool = False, monodromy: Optional[int] = None,
                     budget: int = DEFAULT_STATE_BUDGET, workers: int = 1,
                     parallel_threshold: int = DEFAULT_PARALLEL_THRESHOLD) -> PeriodicityReport:
    """Frobenius-fixed component counts over multidegrees, grouped by residue class"""
    if modulus not in ("G", "G2"):
        raise SpecFormatError("Modulus must be 'G' or 'G2'", {"modulus": modulus})
    M = G.order if modulus == "G" else G.order ** 2
    R = conjugation_rack(G, c)
    pm = q_powering(G, c, q)
    require_normalizing(G, c, K)
    partition = rack_class_partition(G, c)
    parts = len(partition.blocks)
    if residues is not None and len(residues) != parts:
        raise SpecFormatError("Residue vector length differs from the number of rack components",
                              {"residues": list(residues), "components": parts})
    everything = whole_group(G) if generating else None

    rows: List[PeriodicityRow] = []
    for n in n_values:
        for degree in _compositions(n, parts):
            key = tuple(m % M for m in degree)
            if residues is not None and key != tuple(r % M for r in residues):
                continue
            if not multidegree_necessary_condition(degree, partition, pm, K):
                rows.append(PeriodicityRow(n, degree, key, False, None, 0))
                continue
            spec = TupleSpaceSpec(rack=R, n=n, multidegree_filter=degree, target_subgroup=everything,
                                  monodromy_filter=monodromy, budget=budget)
            catalog = enumerate_components(spec, workers=workers, parallel_threshold=parallel_threshold)
            fixed = sum(fixed_record_flags(catalog, pm, K))
            rows.append(PeriodicityRow(n, degree, key, True, len(catalog.records), fixed))
            logger.debug(f"n={n} multidegree={degree}: {len(catalog.records)} components, {fixed} fixed")

    live = [r for r in rows if r.necessary]
    by_residue: Dict[Tuple[int, ...], List[PeriodicityRow]] = {}
    for r in live:
        by_residue.setdefault(r.residues, []).append(r)

    # smallest n from which every residue class shows a single fixed count
    threshold = None
    for start in sorted({r.n for r in live}):
        if all(len({r.fixed for r in group if r.n >= start}) <= 1 for group in by_residue.values()):
            threshold = start
            break
    ns = sorted({r.n for r in live})
    periodic = threshold is not None and (len(ns) < 2 or threshold < ns[-1])
    counts = {key: tuple(r.fixed for r in group) for key, group in by_residue.items()}
    logger.info(f"Periodicity scan q={q} mod {M}: {len(rows)} rows, threshold={threshold}, periodic={periodic}")
    return PeriodicityReport(q=q, modulus=M, rows=tuple(rows), threshold=threshold,
                             periodic=periodic, counts_by_residue=counts)

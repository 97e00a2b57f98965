#!/usr/bin/env python3
"""Finite group arithmetic on multiplication tables.

Groups are indexed element sets with an ``order x order`` multiplication
table. The product ``mul[a, b]`` is "a, then b": for permutation groups
``b`` is applied after ``a``. Conjugation is ``x ^ g = g^-1 x g``.

Subgroups and subsets are sorted member lists of their parent table.
"""

import logging
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from hurwitz_config import DEFAULT_GROUP_BUDGET
from hurwitz_errors import (BudgetExceeded, InvalidPermutation, NotAGroup, NotAnAction,
                            NotClosedUnderConjugation, NotInSubgroup, SpecFormatError)
from integer_matrix import dense_smith_form

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Permutations (0-based image tuples internally, 1-based cycle notation outside)
# ---------------------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p, then q"""
    return tuple(q[i] for i in p)


def permutation_label(images: Permutation) -> str:
    seen = set()
    parts = []
    for start in range(len(images)):
        if start in seen or images[start] == start:
            continue
        cycle = []
        x = start
        while x not in seen:
            seen.add(x)
            cycle.append(str(x + 1))
            x = images[x]
        parts.append("(" + " ".join(cycle) + ")")
    return "".join(parts) or "()"


def parse_permutation(spec: Union[str, Sequence[int]], degree: int) -> Permutation:
    """Cycle notation "(1 2)(3 4)" (commas allowed) or a 1-based image list"""
    if isinstance(spec, str):
        text = spec.strip()
        if _CYCLE_RE.sub("", text).strip():
            raise InvalidPermutation(f"Cannot parse permutation '{spec}'", {"permutation": spec})
        result = tuple(range(degree))
        for body in _CYCLE_RE.findall(text):
            points = [p for p in re.split(r"[\s,]+", body.strip()) if p]
            try:
                cycle = [int(p) - 1 for p in points]
            except ValueError as exc:
                raise InvalidPermutation(f"Non-integer point in '{spec}'", {"permutation": spec}) from exc
            if len(set(cycle)) != len(cycle) or any(not 0 <= x < degree for x in cycle):
                raise InvalidPermutation(f"Invalid cycle in '{spec}' for degree {degree}",
                                         {"permutation": spec, "degree": degree})
            images = list(range(degree))
            for i, x in enumerate(cycle):
                images[x] = cycle[(i + 1) % len(cycle)]
            result = compose(result, tuple(images))
        return result

    images = tuple(int(x) - 1 for x in spec)
    if len(images) != degree or sorted(images) != list(range(degree)):
        raise InvalidPermutation(f"Image list {list(spec)} is not a permutation of 1..{degree}",
                                 {"permutation": list(spec), "degree": degree})
    return images


# ---------------------------------------------------------------------------
# Core types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupTable:
    name: str
    mul: np.ndarray
    inv: Tuple[int, ...]
    id_index: int
    element_labels: Tuple[str, ...]
    perm_images: Optional[Tuple[Permutation, ...]] = None
    degree: Optional[int] = None

    @property
    def order(self) -> int:
        return len(self.inv)

    @cached_property
    def mul_rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.mul)

    @cached_property
    def element_orders(self) -> Tuple[int, ...]:
        rows = self.mul_rows
        orders = []
        for x in range(self.order):
            k, y = 1, x
            while y != self.id_index:
                y = rows[y][x]
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.element_labels)}

    @cached_property
    def _perm_index(self) -> Dict[Permutation, int]:
        return {p: i for i, p in enumerate(self.perm_images or ())}

    def elements(self) -> range:
        return range(self.order)

    def multiply(self, a: int, b: int) -> int:
        return self.mul_rows[a][b]

    def product(self, items: Iterable[int]) -> int:
        rows = self.mul_rows
        return reduce(lambda a, b: rows[a][b], items, self.id_index)

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def conjugate(self, x: int, g: int) -> int:
        """g^-1 x g"""
        rows = self.mul_rows
        return rows[rows[self.inv[g]][x]][g]

    def commutator(self, a: int, b: int) -> int:
        return self.product((self.inv[a], self.inv[b], a, b))

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv[x], -k
        k %= self.element_orders[x]
        result = self.id_index
        rows = self.mul_rows
        for _ in range(k):
            result = rows[result][x]
        return result

    def label(self, x: int) -> str:
        return self.element_labels[x]

    def labels(self, items: Iterable[int]) -> List[str]:
        return [self.element_labels[x] for x in items]

    def index_of(self, ref: Union[str, int, Sequence[int]]) -> int:
        """Element index from a label, a cycle-notation string or a 1-based image list"""
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if not 0 <= int(ref) < self.order:
                raise SpecFormatError(f"Element index {ref} out of range for {self.name}", {"index": int(ref)})
            return int(ref)
        if isinstance(ref, str) and ref in self._label_index:
            return self._label_index[ref]
        if self.perm_images is not None:
            try:
                perm = parse_permutation(ref, self.degree)
            except InvalidPermutation:
                perm = None
            if perm is not None and perm in self._perm_index:
                return self._perm_index[perm]
        raise SpecFormatError(f"Unknown element '{ref}' in group {self.name}", {"element": str(ref)})


@dataclass(frozen=True)
class SubsetOfGroup:
    parent: GroupTable
    members: Tuple[int, ...]

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def labels(self) -> List[str]:
        return self.parent.labels(self.members)


@dataclass(frozen=True)
class ConjClassPartition:
    acting_group: GroupTable
    acting_members: Tuple[int, ...]
    subset: SubsetOfGroup
    blocks: Tuple[Tuple[int, ...], ...]
    class_of: Dict[int, int] = field(hash=False)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> List[int]:
        return [len(b) for b in self.blocks]


def make_subset(G: GroupTable, members: Iterable[int]) -> SubsetOfGroup:
    items = sorted(set(int(m) for m in members))
    if items and not (0 <= items[0] and items[-1] < G.order):
        raise SpecFormatError(f"Subset indices out of range for {G.name}", {"members": items})
    return SubsetOfGroup(G, tuple(items))


def subset_from_labels(G: GroupTable, labels: Iterable) -> SubsetOfGroup:
    return make_subset(G, (G.index_of(label) for label in labels))


def whole_group(G: GroupTable) -> SubsetOfGroup:
    return SubsetOfGroup(G, tuple(G.elements()))


def nonidentity(G: GroupTable) -> SubsetOfGroup:
    return SubsetOfGroup(G, tuple(x for x in G.elements() if x != G.id_index))


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _compose_table(elements: List[Permutation], degree: int) -> np.ndarray:
    n = len(elements)
    P = np.array(elements, dtype=np.int64).reshape(n, degree)
    mul = np.empty((n, n), dtype=np.int64)
    if degree == 0 or n == 1:
        mul.fill(0)
        return mul
    if degree ** degree < 2 ** 62:
        weights = degree ** np.arange(degree, dtype=np.int64)
        codes = P @ weights
        order = np.argsort(codes)
        sorted_codes = codes[order]
        for a in range(n):
            composed = P[:, P[a]]  # row b: p_a, then p_b
            composed_codes = composed @ weights
            # mul[a, b] = p_a then p_b
            mul[a] = order[np.searchsorted(sorted_codes, composed_codes)]
        return mul
    index = {p: i for i, p in enumerate(elements)}
    for a, p in enumerate(elements):
        for b, q in enumerate(elements):
            mul[a, b] = index[compose(p, q)]
    return mul


def _inverse_table(mul: np.ndarray, identity: int) -> Tuple[int, ...]:
    return tuple(int(i) for i in np.argmax(mul == identity, axis=1))


def group_from_permutations(degree: int, generators: Sequence, name: Optional[str] = None,
                            budget: int = DEFAULT_GROUP_BUDGET) -> GroupTable:
    """Closure of permutation generators, elements in breadth-first discovery order"""
    if degree < 0:
        raise InvalidPermutation("Degree must be non-negative", {"degree": degree})
    identity = tuple(range(degree))
    gens: List[Permutation] = []
    for g in generators:
        p = parse_permutation(g, degree)
        if p != identity and p not in gens:
            gens.append(p)

    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for g in gens:
            r = compose(p, g)
            if r not in index:
                if len(elements) >= budget:
                    raise BudgetExceeded(f"Permutation closure exceeds group budget {budget}",
                                         {"budget": budget, "elements_found": len(elements)})
                index[r] = len(elements)
                elements.append(r)
                queue.append(r)

    mul = _compose_table(elements, degree)
    mul.flags.writeable = False
    labels = tuple(permutation_label(p) for p in elements)
    if name is None:
        name = f"<{', '.join(permutation_label(g) for g in gens)}>" if gens else "1"
    logger.debug(f"Permutation group {name}: order {len(elements)} on {degree} points")
    return GroupTable(name=name, mul=mul, inv=_inverse_table(mul, 0), id_index=0,
                      element_labels=labels, perm_images=tuple(elements), degree=degree)


def group_from_table(mul, labels: Optional[Sequence[str]] = None, name: str = "G",
                     perm_images: Optional[Sequence[Permutation]] = None,
                     degree: Optional[int] = None) -> GroupTable:
    """Validate a Cayley table and locate identity and inverses"""
    M = np.asarray(mul, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise NotAGroup("shape", "Multiplication table must be a non-empty square", {"shape": list(M.shape)})
    n = M.shape[0]
    if M.min() < 0 or M.max() >= n:
        bad = np.argwhere((M < 0) | (M >= n))[0]
        raise NotAGroup("closure", "Table entry outside the element set",
                        {"row": int(bad[0]), "col": int(bad[1]), "value": int(M[bad[0], bad[1]])})

    ar = np.arange(n)
    identity = None
    for e in range(n):
        if (M[e] == ar).all() and (M[:, e] == ar).all():
            identity = e
            break
    if identity is None:
        raise NotAGroup("identity", "No two-sided identity element")

    for x in range(n):
        lhs = M[M[x], :]   # (x*y)*z over (y, z)
        rhs = M[x][M]      # x*(y*z) over (y, z)
        if not np.array_equal(lhs, rhs):
            y, z = (int(v) for v in np.argwhere(lhs != rhs)[0])
            raise NotAGroup("associativity", "Table is not associative", {"triple": [x, y, z]})

    inv = []
    for x in range(n):
        candidates = np.nonzero((M[x] == identity) & (M[:, x] == identity))[0]
        if len(candidates) == 0:
            raise NotAGroup("inverse", f"Element {x} has no inverse", {"element": x})
        inv.append(int(candidates[0]))

    if labels is None:
        labels = [str(i) for i in range(n)]
    if len(labels) != n or len(set(labels)) != n:
        raise SpecFormatError("Labels must be distinct, one per element", {"labels": list(labels)})
    M = M.copy()
    M.flags.writeable = False
    return GroupTable(name=name, mul=M, inv=tuple(inv), id_index=identity,
                      element_labels=tuple(labels),
                      perm_images=tuple(tuple(p) for p in perm_images) if perm_images is not None else None,
                      degree=degree)


def relabel_group(G: GroupTable, permutation: Sequence[int], name: Optional[str] = None) -> GroupTable:
    """Same group with element i moved to index permutation[i]"""
    n = G.order
    perm = np.asarray(permutation, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(n)):
        raise SpecFormatError("Relabeling must be a permutation of the element indices")
    new_mul = np.empty_like(G.mul)
    new_mul[np.ix_(perm, perm)] = perm[G.mul]
    labels = [""] * n
    images = [None] * n if G.perm_images is not None else None
    for old, new in enumerate(perm.tolist()):
        labels[new] = G.element_labels[old]
        if images is not None:
            images[new] = G.perm_images[old]
    return group_from_table(new_mul, labels=labels, name=name or G.name,
                            perm_images=images, degree=G.degree)


# ---------------------------------------------------------------------------
# Subgroups, conjugacy, normality
# ---------------------------------------------------------------------------

def subgroup_generated(G: GroupTable, S: Iterable[int]) -> SubsetOfGroup:
    gens = sorted(set(int(s) for s in S) - {G.id_index})
    rows = G.mul_rows
    seen = {G.id_index}
    queue = deque([G.id_index])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = rows[x][s]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return make_subset(G, seen)


def generators_of(G: GroupTable, members: Optional[Iterable[int]] = None) -> Tuple[int, ...]:
    """Greedy generating set: scan members in index order, keep those not yet generated"""
    pool = sorted(members) if members is not None else list(G.elements())
    gens: List[int] = []
    current = {G.id_index}
    for x in pool:
        if x in current:
            continue
        gens.append(x)
        current = set(subgroup_generated(G, gens).members)
    return tuple(gens)


def _acting_members(acting: Union[GroupTable, SubsetOfGroup, None], G: GroupTable) -> Tuple[int, ...]:
    if acting is None or acting is G:
        return tuple(G.elements())
    if isinstance(acting, SubsetOfGroup):
        if acting.parent is not G:
            raise NotInSubgroup("Acting subgroup lives in a different group",
                                {"acting": acting.parent.name, "group": G.name})
        return acting.members
    if isinstance(acting, GroupTable):
        raise NotInSubgroup("Acting group must be the subset's parent or one of its subgroups",
                            {"acting": acting.name, "group": G.name})
    raise TypeError(f"Unsupported acting object {type(acting)!r}")


def conjugacy_partition(subset: SubsetOfGroup,
                        acting: Union[GroupTable, SubsetOfGroup, None] = None) -> ConjClassPartition:
    """Orbits of subset under conjugation by the acting group (the parent or a subgroup)"""
    G = subset.parent
    acting_members = _acting_members(acting, G)
    gens = generators_of(G, acting_members)
    members = subset.member_set

    for x in subset.members:
        for g in gens:
            if G.conjugate(x, g) not in members:
                raise NotClosedUnderConjugation(
                    "Subset is not closed under conjugation",
                    {"x": G.label(x), "g": G.label(g), "image": G.label(G.conjugate(x, g))})

    class_of: Dict[int, int] = {}
    blocks: List[Tuple[int, ...]] = []
    for x in subset.members:
        if x in class_of:
            continue
        orbit = {x}
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in gens:
                z = G.conjugate(y, g)
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        for y in orbit:
            class_of[y] = len(blocks)
        blocks.append(tuple(sorted(orbit)))

    return ConjClassPartition(acting_group=G, acting_members=tuple(acting_members), subset=subset,
                              blocks=tuple(blocks), class_of=class_of)


def conjugacy_classes(G: GroupTable) -> ConjClassPartition:
    return conjugacy_partition(whole_group(G), G)


def class_closure(G: GroupTable, elements: Iterable[int]) -> SubsetOfGroup:
    """Union of the G-conjugacy classes of the given elements"""
    classes = conjugacy_classes(G)
    members = set()
    for x in elements:
        members.update(classes.blocks[classes.class_of[x]])
    return make_subset(G, members)


def is_normal(G: GroupTable, H: SubsetOfGroup) -> bool:
    gens = generators_of(G)
    return all(G.conjugate(h, g) in H for h in H.members for g in gens)


def is_subgroup(G: GroupTable, H: SubsetOfGroup) -> bool:
    if G.id_index not in H:
        return False
    rows = G.mul_rows
    return all(rows[a][b] in H for a in H.members for b in H.members)


def center(G: GroupTable) -> SubsetOfGroup:
    rows = G.mul_rows
    return make_subset(G, (z for z in G.elements()
                           if all(rows[z][x] == rows[x][z] for x in G.elements())))


def element_order(G: GroupTable, x: int) -> int:
    return G.element_orders[x]


def exponent(G: GroupTable) -> int:
    return reduce(math.lcm, G.element_orders, 1)


def is_abelian(G: GroupTable) -> bool:
    return bool(np.array_equal(G.mul, G.mul.T))


def cosets(G: GroupTable, N: SubsetOfGroup) -> Tuple[List[Tuple[int, ...]], List[int]]:
    """Right cosets N g in order of least member, plus element -> coset index"""
    rows = G.mul_rows
    coset_of = [-1] * G.order
    blocks: List[Tuple[int, ...]] = []
    for g in G.elements():
        if coset_of[g] >= 0:
            continue
        block = tuple(sorted(set(rows[n][g] for n in N.members)))
        for x in block:
            coset_of[x] = len(blocks)
        blocks.append(block)
    return blocks, coset_of


def cyclic_quotient_generators(G: GroupTable, N: SubsetOfGroup) -> List[int]:
    """Least representatives of the cosets hN whose images generate G/N (empty if G/N is not cyclic)"""
    blocks, _ = cosets(G, N)
    target = G.order
    found = []
    for block in blocks:
        h = block[0]
        if len(subgroup_generated(G, list(N.members) + [h])) == target:
            found.append(h)
    return found


def is_cyclic_quotient(G: GroupTable, N: SubsetOfGroup) -> bool:
    return bool(cyclic_quotient_generators(G, N))


def normal_subgroups(G: GroupTable, budget: int = 1 << 20) -> List[SubsetOfGroup]:
    """All normal subgroups as class unions closed under multiplication"""
    classes = conjugacy_classes(G)
    others = [b for b in classes.blocks if G.id_index not in b]
    if (1 << len(others)) > budget:
        raise BudgetExceeded("Too many class unions to enumerate normal subgroups",
                             {"classes": len(classes.blocks), "budget": budget})
    found = []
    for mask in range(1 << len(others)):
        members = {G.id_index}
        for i, block in enumerate(others):
            if mask >> i & 1:
                members.update(block)
        if G.order % len(members):
            continue
        H = make_subset(G, members)
        if is_subgroup(G, H):
            found.append(H)
    found.sort(key=lambda H: (len(H), H.members))
    return found


def commutator_subgroup(G: GroupTable) -> SubsetOfGroup:
    comms = {G.commutator(a, b) for a in G.elements() for b in G.elements()}
    return subgroup_generated(G, comms)


# ---------------------------------------------------------------------------
# Abelianization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Abelianization:
    group: GroupTable
    invariant_factors: Tuple[int, ...]
    projection: Tuple[Tuple[int, ...], ...]
    commutator: SubsetOfGroup

    def image(self, x: int) -> Tuple[int, ...]:
        return self.projection[x]

    def order_of(self, x: int) -> int:
        return reduce(math.lcm, (d // math.gcd(d, y) for d, y in zip(self.invariant_factors, self.projection[x])), 1)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)


def abelianization(G: GroupTable) -> Abelianization:
    """G/[G,G] via Smith normal form of the relation lattice of the coset Cayley graph"""
    D = commutator_subgroup(G)
    blocks, coset_of = cosets(G, D)
    rows = G.mul_rows
    id_coset = coset_of[G.id_index]

    gens: List[int] = []
    for g in generators_of(G):
        c = coset_of[g]
        if c != id_coset and c not in gens:
            gens.append(c)
    k = len(gens)
    if k == 0:
        return Abelianization(G, (), tuple(() for _ in G.elements()), D)

    reps = [b[0] for b in blocks]

    def step(c: int, j: int) -> int:
        return coset_of[rows[reps[c]][reps[gens[j]]]]

    vec: Dict[int, Tuple[int, ...]] = {id_coset: (0,) * k}
    queue = deque([id_coset])
    while queue:
        c = queue.popleft()
        for j in range(k):
            d = step(c, j)
            if d not in vec:
                v = list(vec[c])
                v[j] += 1
                vec[d] = tuple(v)
                queue.append(d)

    relations = []
    for c in range(len(blocks)):
        for j in range(k):
            r = [a - b for a, b in zip(vec[c], vec[step(c, j)])]
            r[j] += 1
            if any(r):
                relations.append(r)

    A = np.array(relations, dtype=object).T if relations else np.zeros((k, 0), dtype=object)
    diag, _, Sinv = dense_smith_form(A, track_left=True)
    diag = diag + [0] * (k - len(diag))
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = tuple(int(diag[i]) for i in keep)
    if any(d == 0 for d in factors):
        raise NotAGroup("finiteness", "Abelianization relation lattice is not of full rank")

    projection = []
    for g in G.elements():
        x = np.array(vec[coset_of[g]], dtype=object)
        y = Sinv @ x
        projection.append(tuple(int(y[i]) % int(diag[i]) for i in keep))
    return Abelianization(G, factors, tuple(projection), D)


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

Automorphism = Tuple[int, ...]


def _check_automorphism(H: GroupTable, images: Sequence[int], witness_key: str) -> Automorphism:
    auto = tuple(int(x) for x in images)
    if len(auto) != H.order or sorted(auto) != list(range(H.order)):
        raise NotAnAction("Image is not a bijection of H", {"gamma": witness_key})
    rows = H.mul_rows
    for a in H.elements():
        for b in H.elements():
            if auto[rows[a][b]] != rows[auto[a]][auto[b]]:
                raise NotAnAction("Image is not a homomorphism of H",
                                  {"gamma": witness_key, "pair": [H.label(a), H.label(b)]})
    return auto


def power_automorphism(H: GroupTable, k: int) -> Automorphism:
    """h -> h^k, an automorphism of abelian H when gcd(k, exponent(H)) = 1"""
    return _check_automorphism(H, [H.power(h, k) for h in H.elements()], f"power {k}")


def action_from_generator_images(H: GroupTable, Gamma: GroupTable,
                                 images: Dict[int, Sequence[int]]) -> Tuple[Automorphism, ...]:
    """Extend generator images to a homomorphism Gamma -> Aut(H), verified on every edge"""
    gens = sorted(images)
    autos = {g: _check_automorphism(H, images[g], Gamma.label(g)) for g in gens}
    identity = tuple(H.elements())
    table: Dict[int, Automorphism] = {Gamma.id_index: identity}
    queue = deque([Gamma.id_index])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = Gamma.multiply(x, g)
            # gamma_y = gamma_x o gamma_g
            composed = tuple(table[x][autos[g][h]] for h in H.elements())
            if y not in table:
                table[y] = composed
                queue.append(y)
            elif table[y] != composed:
                raise NotAnAction("Generator images do not define a homomorphism",
                                  {"gamma": Gamma.label(y)})
    if len(table) != Gamma.order:
        raise NotAnAction("Generator images do not generate Gamma", {"reached": len(table)})
    return tuple(table[x] for x in Gamma.elements())


def semidirect_product(H: GroupTable, Gamma: GroupTable, action: Sequence[Sequence[int]],
                       name: Optional[str] = None) -> GroupTable:
    """H x| Gamma with (h1, g1)(h2, g2) = (h1 g1(h2), g1 g2); element (h, g) has index h*|Gamma| + g"""
    if len(action) != Gamma.order:
        raise NotAnAction("Action must give an automorphism for every element of Gamma",
                          {"given": len(action), "expected": Gamma.order})
    autos = [_check_automorphism(H, action[g], Gamma.label(g)) for g in Gamma.elements()]
    if autos[Gamma.id_index] != tuple(H.elements()):
        raise NotAnAction("Identity of Gamma must act trivially", {"gamma": Gamma.label(Gamma.id_index)})
    for a in Gamma.elements():
        for b in Gamma.elements():
            ab = Gamma.multiply(a, b)
            if any(autos[ab][h] != autos[a][autos[b][h]] for h in H.elements()):
                raise NotAnAction("Action is not a homomorphism",
                                  {"pair": [Gamma.label(a), Gamma.label(b)]})

    nh, ng = H.order, Gamma.order
    hrows, grows = H.mul_rows, Gamma.mul_rows
    mul = np.empty((nh * ng, nh * ng), dtype=np.int64)
    for h1 in range(nh):
        for g1 in range(ng):
            row = mul[h1 * ng + g1]
            twist = autos[g1]
            for h2 in range(nh):
                h = hrows[h1][twist[h2]]
                for g2 in range(ng):
                    row[h2 * ng + g2] = h * ng + grows[g1][g2]
    labels = [f"({H.label(h)},{Gamma.label(g)})" for h in range(nh) for g in range(ng)]
    return group_from_table(mul, labels=labels, name=name or f"{H.name}:{Gamma.name}")


def direct_product(A: GroupTable, B: GroupTable, name: Optional[str] = None) -> GroupTable:
    na, nb = A.order, B.order
    mul = np.empty((na * nb, na * nb), dtype=np.int64)
    am, bm = A.mul, B.mul
    for a in range(na):
        for b in range(nb):
            mul[a * nb + b] = (am[a][:, None] * nb + bm[b][None, :]).reshape(-1)
    labels = [f"({A.label(a)},{B.label(b)})" for a in range(na) for b in range(nb)]
    images, degree = None, None
    if A.perm_images is not None and B.perm_images is not None:
        da = A.degree
        degree = da + B.degree
        images = [tuple(A.perm_images[a]) + tuple(da + x for x in B.perm_images[b])
                  for a in range(na) for b in range(nb)]
    return group_from_table(mul, labels=labels, name=name or f"{A.name}x{B.name}",
                            perm_images=images, degree=degree)


# ---------------------------------------------------------------------------
# Named groups
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise SpecFormatError("Cyclic group order must be positive", {"n": n})
    ar = np.arange(n)
    mul = (ar[:, None] + ar[None, :]) % n
    images = [tuple(int(x) for x in (ar + a) % n) for a in range(n)]
    return group_from_table(mul, labels=[str(i) for i in range(n)], name=f"Z/{n}",
                            perm_images=images, degree=n)


def symmetric_group(d: int) -> GroupTable:
    if d < 1:
        raise SpecFormatError("Symmetric group degree must be positive", {"d": d})
    gens = []
    if d >= 2:
        gens.append("(1 2)")
    if d >= 3:
        gens.append("(" + " ".join(str(i) for i in range(1, d + 1)) + ")")
    return group_from_permutations(d, gens, name=f"S{d}")


def dihedral_group(m: int) -> GroupTable:
    """Symmetries of the m-gon, order 2m"""
    if m < 3:
        raise SpecFormatError("Dihedral groups need m >= 3", {"m": m})
    rotation = "(" + " ".join(str(i) for i in range(1, m + 1)) + ")"
    reflection = [m - i for i in range(m)]
    return group_from_permutations(m, [rotation, reflection], name=f"D{m}")


def klein_four_group() -> GroupTable:
    return group_from_permutations(4, ["(1 2)(3 4)", "(1 3)(2 4)"], name="V4")


_QUATERNION_UNITS = ("1", "i", "j", "k")
# unit products: (sign, unit) for units[a] * units[b]
_QUATERNION_PRODUCTS = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion_group() -> GroupTable:
    elements = [(s, u) for u in _QUATERNION_UNITS for s in (1, -1)]
    index = {e: i for i, e in enumerate(elements)}
    mul = np.empty((8, 8), dtype=np.int64)
    for a, (sa, ua) in enumerate(elements):
        for b, (sb, ub) in enumerate(elements):
            s, u = _QUATERNION_PRODUCTS[(ua, ub)]
            mul[a, b] = index[(sa * sb * s, u)]
    labels = [u if s == 1 else f"-{u}" for s, u in elements]
    return group_from_table(mul, labels=labels, name="Q8")

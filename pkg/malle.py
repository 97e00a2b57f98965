#!/usr/bin/env python3
"""Counting invariants and Malle exponents over F_q(t).

An invariant assigns a positive integer to each non-identity element; it
must be constant on conjugacy classes and unchanged by prime-to-order
powers. The exponent a is its minimum on c; b counts orbits of the twisted
powering relation x ~ h x^(1/q) h^-1 on the N-classes of the minimal part.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from frobenius import q_powering
from group_core import (ConjClassPartition, GroupTable, SubsetOfGroup, abelianization, conjugacy_partition,
                        cosets, cyclic_quotient_generators, is_normal, make_subset, normal_subgroups,
                        subgroup_generated)
from homology2 import h2_gc
from hurwitz_config import DEFAULT_STATE_BUDGET
from hurwitz_errors import (BudgetExceeded, EmptySubset, InternalMismatch, NotGenerator, NotInSubgroup,
                            NotNormal, NotSingleClass, SpecFormatError, ValidationFailure)

logger = logging.getLogger(__name__)

PROVENANCES = ("discriminant-regular", "discriminant-degree-d", "rdisc", "custom")


# ---------------------------------------------------------------------------
# Counting invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountingInvariant:
    group: GroupTable
    values: Mapping[int, int] = field(hash=False)
    provenance: str = "custom"

    def __call__(self, g: int) -> int:
        if g not in self.values:
            raise ValidationFailure("Invariant is undefined on element", {"element": self.group.label(g)})
        return self.values[g]

    def class_values(self) -> Dict[str, int]:
        """Value per conjugacy class, keyed by the class's least label"""
        G = self.group
        classes = conjugacy_partition(make_subset(G, self.values), G)
        return {G.label(block[0]): self.values[block[0]] for block in classes.blocks}


def validate_invariant(inv: CountingInvariant) -> CountingInvariant:
    """Exhaustive class-constancy, power-invariance and positivity check"""
    G = inv.group
    values = inv.values
    if inv.provenance not in PROVENANCES:
        raise ValidationFailure(f"Unknown provenance '{inv.provenance}'", {"provenance": inv.provenance})
    for g, v in values.items():
        if g == G.id_index:
            raise ValidationFailure("Invariants are defined on non-identity elements only",
                                    {"element": G.label(g)})
        if v <= 0:
            raise ValidationFailure("Invariant values must be positive", {"element": G.label(g), "value": v})
        for x in G.elements():
            y = G.conjugate(g, x)
            if values.get(y) != v:
                raise ValidationFailure("Invariant is not constant on a conjugacy class",
                                        {"element": G.label(g), "conjugate": G.label(y),
                                         "values": [v, values.get(y)]})
        order = G.element_orders[g]
        for j in range(2, order):
            if math.gcd(j, order) == 1 and values.get(G.power(g, j)) != v:
                raise ValidationFailure("Invariant changes under a prime-to-order power",
                                        {"element": G.label(g), "j": j})
    return inv


def _orbit_count(images: Sequence[int], order: int) -> int:
    """Orbits of <p> on points, for a permutation p given by its images"""
    seen = set()
    count = 0
    for start in range(len(images)):
        if start in seen:
            continue
        count += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = images[x]
    return count


def discriminant_invariant(G: GroupTable) -> CountingInvariant:
    """d - r(g), r(g) the number of orbits of <g> on the d permuted points"""
    if G.perm_images is None:
        raise SpecFormatError("Degree discriminant needs a permutation representation", {"group": G.name})
    d = G.degree
    values = {g: d - _orbit_count(G.perm_images[g], d) for g in G.elements() if g != G.id_index}
    return validate_invariant(CountingInvariant(G, values, "discriminant-degree-d"))


def regular_discriminant_invariant(G: GroupTable) -> CountingInvariant:
    """|G| - |G|/ord(g): the regular representation's discriminant exponent"""
    n = G.order
    values = {g: n - n // G.element_orders[g] for g in G.elements() if g != G.id_index}
    return validate_invariant(CountingInvariant(G, values, "discriminant-regular"))


def rdisc_invariant(G: GroupTable) -> CountingInvariant:
    values = {g: 1 for g in G.elements() if g != G.id_index}
    return validate_invariant(CountingInvariant(G, values, "rdisc"))


def custom_invariant(G: GroupTable, mapping: Mapping[str, int]) -> CountingInvariant:
    """Invariant from label -> value; each value spreads over the element's class"""
    classes = conjugacy_partition(make_subset(G, G.elements()), G)
    values: Dict[int, int] = {}
    for label, value in mapping.items():
        g = G.index_of(label)
        for x in classes.blocks[classes.class_of[g]]:
            if x in values and values[x] != int(value):
                raise ValidationFailure("Conflicting values on one conjugacy class",
                                        {"element": G.label(x), "values": [values[x], int(value)]})
            values[x] = int(value)
    return validate_invariant(CountingInvariant(G, values, "custom"))


def a_constant(c: SubsetOfGroup, inv: CountingInvariant) -> Tuple[int, SubsetOfGroup]:
    """Minimum of inv on c and the subset attaining it"""
    if not len(c):
        raise EmptySubset("a(c, inv) needs a non-empty c")
    a = min(inv(x) for x in c.members)
    return a, SubsetOfGroup(c.parent, tuple(x for x in c.members if inv(x) == a))


# ---------------------------------------------------------------------------
# Twisted powering orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    classes: Tuple[int, ...]
    invariant: int

    @property
    def size(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class RhoContext:
    group: GroupTable
    normal: SubsetOfGroup
    h: int
    q: int
    subset: SubsetOfGroup


@dataclass(frozen=True)
class OrbitDecomposition:
    orbits: Tuple[Orbit, ...]
    partition: Optional[ConjClassPartition] = None
    context: Optional[RhoContext] = None

    def __len__(self) -> int:
        return len(self.orbits)

    @classmethod
    def from_sizes(cls, shape: Iterable[Tuple[int, int]]) -> "OrbitDecomposition":
        """Abstract decomposition from (orbit size, invariant) pairs"""
        orbits, start = [], 0
        for size, invariant in shape:
            if size < 1 or invariant < 1:
                raise SpecFormatError("Orbit sizes and invariants must be positive",
                                      {"size": size, "invariant": invariant})
            orbits.append(Orbit(tuple(range(start, start + size)), invariant))
            start += size
        return cls(orbits=tuple(orbits))

    def shape(self) -> List[Tuple[int, int]]:
        return [(o.size, o.invariant) for o in self.orbits]


def _check_rho_inputs(G: GroupTable, N: SubsetOfGroup, c: SubsetOfGroup, h: int) -> None:
    if not is_normal(G, N):
        raise NotNormal("N is not a normal subgroup", {"N": N.labels()})
    outside = [x for x in c.members if x not in N]
    if outside:
        raise NotInSubgroup("c must lie in N", {"element": G.label(outside[0]), "N": N.labels()})
    if len(subgroup_generated(G, list(N.members) + [h])) != G.order:
        raise NotGenerator("The coset of h does not generate G/N", {"h": G.label(h), "N": N.labels()})


def rho_orbits(G: GroupTable, N: SubsetOfGroup, c: SubsetOfGroup, h: int, q: int,
               inv: Optional[CountingInvariant] = None) -> OrbitDecomposition:
    """Orbits on the N-classes of c under x ~ h x^(1/q) h^-1"""
    _check_rho_inputs(G, N, c, h)
    conjugacy_partition(c, G)
    pm = q_powering(G, c, q)
    partition = conjugacy_partition(c, N)
    _, coset_of = cosets(G, N)
    lifts = [g for g in G.elements() if coset_of[g] == coset_of[h]]

    image: List[int] = []
    for block in partition.blocks:
        targets = set()
        for x in block:
            root = pm.backward_element(x)
            for lift in lifts:
                targets.add(partition.class_of[G.conjugate(root, G.inverse(lift))])
        if len(targets) != 1:
            raise InternalMismatch("Twisted powering class depends on the lift or representative",
                                   {"class": G.labels(block), "h": G.label(h), "targets": sorted(targets)})
        image.append(targets.pop())

    orbits: List[Orbit] = []
    seen = set()
    for start in range(len(image)):
        if start in seen:
            continue
        members = []
        x = start
        while x not in seen:
            seen.add(x)
            members.append(x)
            x = image[x]
        value = 0
        if inv is not None:
            found = {inv(partition.blocks[i][0]) for i in members}
            if len(found) != 1:
                raise ValidationFailure("Invariant differs within a powering orbit",
                                        {"classes": [G.labels(partition.blocks[i]) for i in members]})
            value = found.pop()
        orbits.append(Orbit(tuple(sorted(members)), value))
    return OrbitDecomposition(orbits=tuple(orbits), partition=partition,
                              context=RhoContext(group=G, normal=N, h=h, q=q, subset=c))


@dataclass(frozen=True)
class BMResult:
    value: int
    witness: int
    table: Tuple[Tuple[int, int], ...]

    def to_dict(self, G: GroupTable) -> Dict:
        return {"b_M": self.value, "witness_h": G.label(self.witness),
                "table": [{"h": G.label(h), "orbits": count} for h, count in self.table]}


def b_M_constant(G: GroupTable, N: SubsetOfGroup, c: SubsetOfGroup, q: int) -> BMResult:
    """Max of |rho| over least coset representatives generating G/N; ties keep the smallest h"""
    gens = cyclic_quotient_generators(G, N)
    if not gens:
        raise NotGenerator("G/N is not cyclic", {"N": N.labels()})
    table = [(h, len(rho_orbits(G, N, c, h, q))) for h in gens]
    best_h, best = table[0]
    for h, count in table[1:]:
        if count > best:
            best_h, best = h, count
    return BMResult(value=best, witness=best_h, table=tuple(table))


@dataclass(frozen=True)
class BTResult:
    value: int
    normal: SubsetOfGroup
    field_power: int
    b_M: BMResult

    def to_dict(self) -> Dict:
        G = self.normal.parent
        return {"b_T": self.value, "N": self.normal.labels(), "K_prime": f"F_q^{self.field_power}(t)",
                "witness_h": G.label(self.b_M.witness)}


def b_T_constant(G: GroupTable, c: SubsetOfGroup, q: int, inv: CountingInvariant,
                 budget: int = 1 << 20) -> BTResult:
    """Max of b_M over normal N with cyclic quotient and a(c cap N) = a(c), base-changed to q^|G/N|"""
    a, _ = a_constant(c, inv)
    best: Optional[BTResult] = None
    for N in normal_subgroups(G, budget):
        part = SubsetOfGroup(G, tuple(x for x in c.members if x in N))
        if not len(part) or not cyclic_quotient_generators(G, N):
            continue
        a_part, part_inv = a_constant(part, inv)
        if a_part != a:
            continue
        power = G.order // len(N)
        bm = b_M_constant(G, N, part_inv, q ** power)
        logger.debug(f"b_T candidate |N|={len(N)}: b_M={bm.value} over F_q^{power}")
        if best is None or bm.value > best.value:
            best = BTResult(value=bm.value, normal=N, field_power=power, b_M=bm)
    if best is None:
        raise EmptySubset("No normal subgroup with cyclic quotient meets c at the minimal invariant")
    return best


@dataclass(frozen=True)
class MalleExponents:
    a: int
    c_inv: SubsetOfGroup
    b_M: BMResult
    b_T: BTResult

    def to_dict(self) -> Dict:
        G = self.c_inv.parent
        return {"a": self.a, "c_inv": self.c_inv.labels(), "b_M": self.b_M.to_dict(G), "b_T": self.b_T.to_dict()}


def malle_exponents(G: GroupTable, c: SubsetOfGroup, inv: CountingInvariant, q: int,
                    N: Optional[SubsetOfGroup] = None) -> MalleExponents:
    N = N if N is not None else SubsetOfGroup(G, tuple(G.elements()))
    a, c_inv = a_constant(c, inv)
    bm = b_M_constant(G, N, c_inv, q)
    bt = b_T_constant(G, c, q, inv)
    if bt.value < b_M_constant(G, SubsetOfGroup(G, tuple(G.elements())), c_inv, q).value:
        raise InternalMismatch("b_T fell below b_M for N = G", {"b_T": bt.value})
    logger.info(f"Malle exponents for {G.name}: a={a}, b_M={bm.value}, b_T={bt.value}")
    return MalleExponents(a=a, c_inv=c_inv, b_M=bm, b_T=bt)


# ---------------------------------------------------------------------------
# Tuple-count generating function
# ---------------------------------------------------------------------------

def _series_product(left: List[int], right: List[int], length: int) -> List[int]:
    out = [0] * length
    for i, a in enumerate(left[:length]):
        if a:
            for j, b in enumerate(right[:length - i]):
                if b:
                    out[i + j] += a * b
    return out


def _orbit_series(size: int, invariant: int, q: int, length: int) -> List[int]:
    """1 / (1 - q^size t^(size * invariant)) truncated to the given length"""
    series = [0] * length
    step = size * invariant
    weight = q ** size
    for k, delta in enumerate(range(0, length, step)):
        series[delta] = weight ** k
    return series


def tuple_count_coefficients(dec: OrbitDecomposition, inv: Optional[CountingInvariant], q: int,
                             delta_max: int, budget: int = DEFAULT_STATE_BUDGET) -> List[int]:
    """Coefficients a_0..a_delta_max of prod_i 1/(1 - q^|O_i| t^(|O_i| inv(O_i)))"""
    if delta_max < 0:
        raise SpecFormatError("delta_max must be non-negative", {"delta_max": delta_max})
    if (delta_max + 1) * max(1, len(dec.orbits)) > budget:
        raise BudgetExceeded("Coefficient table exceeds the budget",
                             {"delta_max": delta_max, "orbits": len(dec.orbits), "budget": budget})
    shape = []
    for orbit in dec.orbits:
        value = orbit.invariant
        if inv is not None and dec.partition is not None:
            value = inv(dec.partition.blocks[orbit.classes[0]][0])
            if orbit.invariant and orbit.invariant != value:
                raise ValidationFailure("Orbit invariant disagrees with the counting invariant",
                                        {"orbit": list(orbit.classes)})
        if value < 1:
            raise ValidationFailure("Orbit invariant must be positive", {"orbit": list(orbit.classes)})
        shape.append((orbit.size, value))

    length = delta_max + 1
    dp = [1] + [0] * delta_max
    for size, value in shape:
        step, weight = size * value, q ** size
        for delta in range(step, length):
            dp[delta] += weight * dp[delta - step]

    product = [1] + [0] * delta_max
    for size, value in shape:
        product = _series_product(product, _orbit_series(size, value, q, length), length)

    if dp != product:
        first = next(i for i in range(length) if dp[i] != product[i])
        raise InternalMismatch("Recurrence and series product disagree", {"delta": first})
    return dp


def pole_order(dec: OrbitDecomposition, inv: Optional[CountingInvariant], q: int) -> int:
    """Orbits at the minimal invariant; cross-checked against rho on c_inv when context is known"""
    values = [o.invariant for o in dec.orbits]
    if inv is not None and dec.partition is not None:
        values = [inv(dec.partition.blocks[o.classes[0]][0]) for o in dec.orbits]
    if not values:
        return 0
    a = min(values)
    count = sum(1 for v in values if v == a)
    ctx = dec.context
    if ctx is not None and inv is not None:
        _, c_inv = a_constant(ctx.subset, inv)
        check = len(rho_orbits(ctx.group, ctx.normal, c_inv, ctx.h, ctx.q))
        if check != count:
            raise InternalMismatch("Pole order disagrees with rho on c_inv", {"pole_order": count, "rho": check})
    return count


def partial_sums(coeffs: Sequence[int]) -> List[int]:
    sums, total = [], 0
    for value in coeffs:
        total += value
        sums.append(total)
    return sums


def normalized_partial_sums(coeffs: Sequence[int], q: int, a: int, b: int,
                            n_values: Iterable[int]) -> List[Tuple[int, float]]:
    """(n, sum_{delta <= n} a_delta / (q^(n/a) n^(b-1))) for each n"""
    sums = partial_sums(coeffs)
    out = []
    for n in n_values:
        if not 1 <= n < len(sums):
            raise SpecFormatError("n outside the computed coefficient range", {"n": n, "delta_max": len(sums) - 1})
        total = sums[n]
        if total == 0:
            out.append((n, 0.0))
            continue
        log_value = math.log(total) - (n / a) * math.log(q) - (b - 1) * math.log(n)
        out.append((n, math.exp(log_value)))
    return out


# ---------------------------------------------------------------------------
# Predictions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MallePrediction:
    a: int
    b: int
    normal: SubsetOfGroup
    regime: str = "upper/lower bounds with distinct constants"

    @property
    def rendered(self) -> str:
        return f"Θ(X^{{1/{self.a}}} (log X)^{{{self.b - 1}}})"

    def to_dict(self) -> Dict:
        return {"a": self.a, "b": self.b, "N": self.normal.labels(), "regime": self.regime,
                "prediction": self.rendered}


def malle_prediction(G: GroupTable, c: SubsetOfGroup, inv: CountingInvariant, q: int,
                     N: Optional[SubsetOfGroup] = None) -> MallePrediction:
    """Growth shape X^(1/a) (log X)^(b-1) with a = a(c cap N) and b = b_M over F_q^|G/N|"""
    N = N if N is not None else SubsetOfGroup(G, tuple(G.elements()))
    if not is_normal(G, N):
        raise NotNormal("N is not a normal subgroup", {"N": N.labels()})
    if not cyclic_quotient_generators(G, N):
        raise NotGenerator("G/N is not cyclic", {"N": N.labels()})
    part = SubsetOfGroup(G, tuple(x for x in c.members if x in N))
    a, part_inv = a_constant(part, inv)
    b = b_M_constant(G, N, part_inv, q ** (G.order // len(N))).value
    return MallePrediction(a=a, b=b, normal=N)


@dataclass(frozen=True)
class PicardPrediction:
    n: int
    empty: bool
    order: int = 1
    exponent_full: int = 0
    exponent_component: int = 0
    caveat: str = "for n sufficiently large"

    @property
    def rendered(self) -> str:
        if self.empty:
            return "empty"
        if self.order == 1:
            return "trivial"
        return f"(Z/{self.order})^{self.exponent_full}"

    def to_dict(self) -> Dict:
        return {"n": self.n, "empty": self.empty, "order": self.order, "exponent_full": self.exponent_full,
                "exponent_component": self.exponent_component, "caveat": self.caveat,
                "prediction": self.rendered}


def _prime_factors(n: int) -> List[int]:
    factors, p = [], 2
    while p * p <= n:
        if n % p == 0:
            factors.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        factors.append(n)
    return factors


def stable_picard_prediction(G: GroupTable, c: SubsetOfGroup, n: int,
                             budget: int = DEFAULT_STATE_BUDGET) -> PicardPrediction:
    """Predicted stable Picard group: (Z/(2n-2) localized away from 2|G|)^|H2(G,c)|"""
    if n < 2:
        raise SpecFormatError("n must be at least 2", {"n": n})
    if len(conjugacy_partition(c, G).blocks) != 1:
        raise NotSingleClass("c must be a single conjugacy class", {"classes": c.labels()})
    ord_ab = abelianization(G).order_of(c.members[0])
    if n % ord_ab:
        return PicardPrediction(n=n, empty=True)
    order = 2 * n - 2
    for p in _prime_factors(2 * G.order):
        while order % p == 0:
            order //= p
    h2 = h2_gc(G, c, budget)
    return PicardPrediction(n=n, empty=False, order=order, exponent_full=h2.order, exponent_component=1)

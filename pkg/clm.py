#!/usr/bin/env python3
"""Component comparison behind the Cohen-Lenstra-Martinet moments.

For an admissible Gamma-group H, the extension problem for G = H x| Gamma
with inertia c1 is compared against Gamma itself with inertia c2 = Gamma - id
by counting Frobenius-fixed components on both sides.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from braid_orbits import TupleSpaceSpec, enumerate_components
from frobenius import d_constant, fixed_record_flags, q_powering
from group_core import (GroupTable, SubsetOfGroup, conjugacy_partition, make_subset, nonidentity,
                        semidirect_product, subgroup_generated, whole_group)
from hurwitz_config import DEFAULT_PARALLEL_THRESHOLD, DEFAULT_STATE_BUDGET
from hurwitz_errors import BudgetExceeded, ClassCountMismatch, GcdViolation, NotAdmissible
from rack_core import conjugation_rack

logger = logging.getLogger(__name__)

COMPARISON_COLUMNS = ["n", "pi_G", "pi_Gamma", "diff", "d_G", "d_Gamma", "status"]


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    coprime: bool
    generated_order: int
    generators: Tuple[str, ...]
    reason: str = ""

    def to_dict(self) -> Dict:
        return {"admissible": self.admissible, "coprime": self.coprime, "generated_order": self.generated_order,
                "generators": list(self.generators), "reason": self.reason}


def is_admissible(H: GroupTable, Gamma: GroupTable, action: Sequence[Sequence[int]]) -> AdmissibilityReport:
    """gcd(|H|, |Gamma|) = 1 and H generated by the elements h^-1 gamma(h)"""
    coprime = math.gcd(H.order, Gamma.order) == 1
    twisted = sorted({H.multiply(H.inverse(h), action[g][h]) for g in Gamma.elements() for h in H.elements()})
    generated = len(subgroup_generated(H, twisted))
    generators = tuple(H.labels(x for x in twisted if x != H.id_index))
    if not coprime:
        reason = f"gcd(|H|, |Gamma|) = {math.gcd(H.order, Gamma.order)}"
    elif generated != H.order:
        reason = f"elements h^-1 gamma(h) generate a subgroup of order {generated}"
    else:
        reason = ""
    return AdmissibilityReport(admissible=coprime and generated == H.order, coprime=coprime,
                               generated_order=generated, generators=generators, reason=reason)


@dataclass(frozen=True)
class ClmInstance:
    Gamma: GroupTable
    H: GroupTable
    action: Tuple[Tuple[int, ...], ...]
    G: GroupTable
    c1: SubsetOfGroup
    c2: SubsetOfGroup
    q: int

    def project(self, g: int) -> int:
        """Image in Gamma of the element (h, gamma) of G"""
        return g % self.Gamma.order


def build_instance(H: GroupTable, Gamma: GroupTable, action: Sequence[Sequence[int]], q: int) -> ClmInstance:
    report = is_admissible(H, Gamma, action)
    if not report.admissible:
        raise NotAdmissible(f"H is not an admissible Gamma-group: {report.reason}", report.to_dict())
    if math.gcd(q, H.order * Gamma.order) != 1:
        raise GcdViolation("q must be coprime to |H||Gamma|", {"q": q, "order": H.order * Gamma.order})

    G = semidirect_product(H, Gamma, action)
    ng = Gamma.order
    c1 = make_subset(G, (g for g in G.elements()
                         if g % ng != Gamma.id_index
                         and G.element_orders[g] == Gamma.element_orders[g % ng]))
    c2 = nonidentity(Gamma)

    if {g % ng for g in c1.members} != set(c2.members):
        raise ClassCountMismatch("c1 does not project onto Gamma - id", {"c1": c1.labels()})
    classes1 = len(conjugacy_partition(c1, G).blocks)
    classes2 = len(conjugacy_partition(c2, Gamma).blocks)
    if classes1 != classes2:
        raise ClassCountMismatch("c1 and c2 have different numbers of conjugacy classes",
                                 {"c1_classes": classes1, "c2_classes": classes2})
    q_powering(G, c1, q)
    q_powering(Gamma, c2, q)
    logger.info(f"CLM instance {G.name}: |c1|={len(c1)} in {classes1} classes, q={q}")
    return ClmInstance(Gamma=Gamma, H=H, action=tuple(tuple(a) for a in action), G=G, c1=c1, c2=c2, q=q)


def fixed_subgroup(instance: ClmInstance) -> SubsetOfGroup:
    H = instance.H
    return make_subset(H, (h for h in H.elements() if all(auto[h] == h for auto in instance.action)))


def predicted_moment(instance: ClmInstance) -> Fraction:
    """1 / [H : H^Gamma]"""
    return Fraction(len(fixed_subgroup(instance)), instance.H.order)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    pi_G: Optional[int]
    pi_Gamma: Optional[int]
    d_G: int
    d_Gamma: int
    status: str = "ok"

    @property
    def diff(self) -> Optional[int]:
        if self.pi_G is None or self.pi_Gamma is None:
            return None
        return self.pi_G - self.pi_Gamma


@dataclass(frozen=True)
class ComparisonTable:
    instance: ClmInstance
    rows: Tuple[ComparisonRow, ...]
    moment: Fraction
    trivial_monodromy: bool = True

    def header(self) -> Dict:
        inst = self.instance
        return {"G": inst.G.name, "H": inst.H.name, "Gamma": inst.Gamma.name, "q": inst.q,
                "predicted_moment": f"{self.moment.numerator}/{self.moment.denominator}",
                "boundary": "trivial monodromy" if self.trivial_monodromy else "unrestricted"}


def _fixed_count(G: GroupTable, c: SubsetOfGroup, q: int, n: int, trivial_monodromy: bool,
                 budget: int, workers: int, parallel_threshold: int) -> int:
    R = conjugation_rack(G, c)
    spec = TupleSpaceSpec(rack=R, n=n, target_subgroup=whole_group(G),
                          monodromy_filter=G.id_index if trivial_monodromy else None, budget=budget)
    catalog = enumerate_components(spec, workers=workers, parallel_threshold=parallel_threshold)
    pm = q_powering(G, c, q)
    trivial = SubsetOfGroup(G, (G.id_index,))
    return sum(fixed_record_flags(catalog, pm, trivial))


def component_comparison(instance: ClmInstance, n_values: Iterable[int], budget: int = DEFAULT_STATE_BUDGET,
                         trivial_monodromy: bool = True, workers: int = 1,
                         parallel_threshold: int = DEFAULT_PARALLEL_THRESHOLD) -> ComparisonTable:
    """pi_{G,c1}(q, n) against pi_{Gamma,c2}(q, n) with the d constants of both sides"""
    d_G = d_constant(instance.G, instance.c1, instance.q)
    d_Gamma = d_constant(instance.Gamma, instance.c2, instance.q)
    if d_G != d_Gamma:
        logger.warning(f"d constants differ: d_G={d_G}, d_Gamma={d_Gamma}")

    rows: List[ComparisonRow] = []
    for n in n_values:
        try:
            pi_gamma = _fixed_count(instance.Gamma, instance.c2, instance.q, n, trivial_monodromy,
                                    budget, workers, parallel_threshold)
            pi_g = _fixed_count(instance.G, instance.c1, instance.q, n, trivial_monodromy,
                                budget, workers, parallel_threshold)
        except BudgetExceeded as exc:
            logger.warning(f"n={n}: {exc.message}")
            rows.append(ComparisonRow(n=n, pi_G=None, pi_Gamma=None, d_G=d_G, d_Gamma=d_Gamma, status="budget"))
            continue
        rows.append(ComparisonRow(n=n, pi_G=pi_g, pi_Gamma=pi_gamma, d_G=d_G, d_Gamma=d_Gamma))
        logger.debug(f"n={n}: pi_G={pi_g} pi_Gamma={pi_gamma}")
    return ComparisonTable(instance=instance, rows=tuple(rows), moment=predicted_moment(instance),
                           trivial_monodromy=trivial_monodromy)


def comparison_frame(table: ComparisonTable) -> pd.DataFrame:
    records = [{"n": r.n, "pi_G": r.pi_G, "pi_Gamma": r.pi_Gamma, "diff": r.diff,
                "d_G": r.d_G, "d_Gamma": r.d_Gamma, "status": r.status} for r in table.rows]
    frame = pd.DataFrame(records, columns=COMPARISON_COLUMNS)
    for column in ("pi_G", "pi_Gamma", "diff"):
        frame[column] = frame[column].astype("Int64")
    return frame

#!/usr/bin/env python3
"""JSON input formats: groups, racks, actions, invariants and catalogs.

Group specs
    {"kind": "permutation", "degree": 3, "generators": ["(1 2)", "(1 2 3)"]}
    {"kind": "table", "labels": [...], "table": [[...]]}     entries: indices or labels
    {"kind": "named", "family": "cyclic|symmetric|dihedral|quaternion|klein", "n": 5}
    {"kind": "semidirect", "H": {...}, "Gamma": {...}, "action": {...}}
    {"kind": "direct_product", "factors": [{...}, {...}]}
A bare string such as "S3", "Z/5", "D4", "Q8" or "V4" names a group directly.

Rack specs
    {"kind": "table", "labels": [...], "table": [[...]]}      table[x][y] = x |> y
    {"kind": "conjugation", "group": {...}, "classes": ["(1 2)"]}   or "elements": [...]
    {"kind": "trivial", "size": 3}

Action specs (Gamma acting on H, keyed by Gamma generator labels)
    {"kind": "power", "images": {"1": 2}}                    h -> h^2
    {"kind": "map", "images": {"1": {"1": "2", "2": "1"}}}
    {"kind": "inversion"} / {"kind": "trivial"}
"""

import json
import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from braid_orbits import CatalogTotals, ComponentCatalog, ComponentRecord, TupleSpaceSpec
from group_core import (GroupTable, SubsetOfGroup, action_from_generator_images, center, class_closure,
                        cyclic_group, dihedral_group, direct_product, generators_of, group_from_permutations,
                        group_from_table, klein_four_group, make_subset, power_automorphism, quaternion_group,
                        semidirect_product, subgroup_generated, subset_from_labels, symmetric_group)
from hurwitz_config import DEFAULT_GROUP_BUDGET, DEFAULT_STATE_BUDGET
from hurwitz_errors import HurwitzError, SpecFormatError
from malle import CountingInvariant, custom_invariant
from rack_core import Rack, conjugation_rack, rack_from_table, trivial_rack

logger = logging.getLogger(__name__)

CATALOG_FORMAT = "hurwitz-catalog/1"

_SHORTHAND = [
    (re.compile(r"^(?:Z/|C)(\d+)$"), lambda n: cyclic_group(n)),
    (re.compile(r"^S(\d+)$"), lambda n: symmetric_group(n)),
    (re.compile(r"^D(\d+)$"), lambda n: dihedral_group(n)),
]

Spec = Union[str, Dict[str, Any]]


def load_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as exc:
        raise SpecFormatError(f"File not found: {path}", {"path": str(path)}) from exc
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"Invalid JSON in {path}: {exc.msg}", {"path": str(path), "line": exc.lineno}) from exc
    except OSError as exc:
        raise SpecFormatError(f"Cannot read {path}: {exc}", {"path": str(path)}) from exc


def _require(spec: Dict[str, Any], key: str, where: str) -> Any:
    if key not in spec:
        raise SpecFormatError(f"Missing key '{key}' in {where}", {"key": key, "where": where})
    return spec[key]


def resolve_spec(ref: Spec) -> Spec:
    """Inline spec, JSON text, path to a JSON file, or a shorthand group name"""
    if isinstance(ref, str) and ref.lstrip().startswith("{"):
        try:
            return json.loads(ref)
        except json.JSONDecodeError as exc:
            raise SpecFormatError(f"Invalid inline JSON: {exc.msg}", {"position": exc.pos}) from exc
    if isinstance(ref, str) and os.path.exists(ref):
        return load_json(ref)
    return ref


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------

def group_from_shorthand(name: str) -> GroupTable:
    text = name.strip()
    if text == "Q8":
        return quaternion_group()
    if text == "V4":
        return klein_four_group()
    for pattern, build in _SHORTHAND:
        m = pattern.match(text)
        if m:
            return build(int(m.group(1)))
    raise SpecFormatError(f"Unknown group name '{name}'", {"group": name})


def _table_entries(table: Sequence[Sequence[Any]], labels: Sequence[str], where: str) -> List[List[int]]:
    index = {label: i for i, label in enumerate(labels)}
    rows = []
    for row in table:
        out = []
        for v in row:
            if isinstance(v, int):
                out.append(v)
            elif isinstance(v, str) and v in index:
                out.append(index[v])
            else:
                raise SpecFormatError(f"Unknown table entry {v!r} in {where}", {"entry": str(v), "where": where})
        rows.append(out)
    return rows


def load_group(ref: Spec, budget: int = DEFAULT_GROUP_BUDGET) -> GroupTable:
    spec = resolve_spec(ref)
    if isinstance(spec, str):
        return group_from_shorthand(spec)
    if not isinstance(spec, dict):
        raise SpecFormatError("Group spec must be an object or a group name", {"spec": str(spec)})
    kind = _require(spec, "kind", "group spec")
    name = spec.get("name")

    if kind == "permutation":
        degree = int(_require(spec, "degree", "permutation group"))
        return group_from_permutations(degree, _require(spec, "generators", "permutation group"),
                                       name=name, budget=budget)
    if kind == "table":
        labels = _require(spec, "labels", "table group")
        rows = _table_entries(_require(spec, "table", "table group"), labels, "table group")
        return group_from_table(rows, labels=labels, name=name or "G")
    if kind == "named":
        family = _require(spec, "family", "named group")
        n = int(spec.get("n", 0))
        builders = {"cyclic": lambda: cyclic_group(n), "symmetric": lambda: symmetric_group(n),
                    "dihedral": lambda: dihedral_group(n), "quaternion": quaternion_group,
                    "klein": klein_four_group}
        if family not in builders:
            raise SpecFormatError(f"Unknown group family '{family}'", {"family": family})
        return builders[family]()
    if kind == "semidirect":
        H = load_group(_require(spec, "H", "semidirect group"), budget)
        Gamma = load_group(_require(spec, "Gamma", "semidirect group"), budget)
        action = load_action(H, Gamma, _require(spec, "action", "semidirect group"))
        return semidirect_product(H, Gamma, action, name=name)
    if kind == "direct_product":
        factors = [load_group(f, budget) for f in _require(spec, "factors", "direct product")]
        if len(factors) < 2:
            raise SpecFormatError("Direct product needs at least two factors", {"factors": len(factors)})
        G = factors[0]
        for F in factors[1:]:
            G = direct_product(G, F)
        return G
    raise SpecFormatError(f"Unknown group kind '{kind}'", {"kind": kind})


def load_action(H: GroupTable, Gamma: GroupTable, ref: Spec) -> Tuple[Tuple[int, ...], ...]:
    """Homomorphism Gamma -> Aut(H) as one image tuple per element of Gamma"""
    spec = resolve_spec(ref)
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = _require(spec, "kind", "action spec")
    gens = generators_of(Gamma)

    if kind == "trivial":
        images = {g: tuple(H.elements()) for g in gens}
    elif kind == "inversion":
        images = {g: tuple(H.inverse(h) for h in H.elements()) for g in gens}
    elif kind == "power":
        images = {Gamma.index_of(label): power_automorphism(H, int(k))
                  for label, k in _require(spec, "images", "power action").items()}
    elif kind == "map":
        images = {}
        for label, mapping in _require(spec, "images", "map action").items():
            auto = list(H.elements())
            for src, dst in mapping.items():
                auto[H.index_of(src)] = H.index_of(dst)
            images[Gamma.index_of(label)] = tuple(auto)
    else:
        raise SpecFormatError(f"Unknown action kind '{kind}'", {"kind": kind})
    return action_from_generator_images(H, Gamma, images)


def parse_subset(G: GroupTable, labels: Sequence[str], closure: bool = False) -> SubsetOfGroup:
    """Subset from element references, optionally closed to full G-classes"""
    subset = subset_from_labels(G, labels)
    return class_closure(G, subset.members) if closure else subset


def parse_k(G: GroupTable, ref: Optional[Union[str, Sequence[str]]]) -> SubsetOfGroup:
    """K from "trivial", "all", "center" or element labels (closed to the generated subgroup)"""
    if ref is None or ref == "trivial":
        return SubsetOfGroup(G, (G.id_index,))
    if ref == "all":
        return SubsetOfGroup(G, tuple(G.elements()))
    if ref == "center":
        return center(G)
    items = ref.split(";") if isinstance(ref, str) else ref
    return subgroup_generated(G, (G.index_of(x.strip()) for x in items))


# ---------------------------------------------------------------------------
# Racks
# ---------------------------------------------------------------------------

def load_rack(ref: Spec, budget: int = DEFAULT_GROUP_BUDGET) -> Rack:
    spec = resolve_spec(ref)
    if not isinstance(spec, dict):
        raise SpecFormatError("Rack spec must be a JSON object", {"spec": str(spec)})
    kind = _require(spec, "kind", "rack spec")
    if kind == "table":
        table = _require(spec, "table", "table rack")
        labels = spec.get("labels") or [str(i) for i in range(len(table))]
        return rack_from_table(_table_entries(table, labels, "table rack"), labels=labels,
                               name=spec.get("name", "rack"))
    if kind == "trivial":
        return trivial_rack(int(_require(spec, "size", "trivial rack")))
    if kind == "conjugation":
        G = load_group(_require(spec, "group", "conjugation rack"), budget)
        if "classes" in spec:
            c = parse_subset(G, spec["classes"], closure=True)
        else:
            c = parse_subset(G, _require(spec, "elements", "conjugation rack"))
        return conjugation_rack(G, c, name=spec.get("name"))
    raise SpecFormatError(f"Unknown rack kind '{kind}'", {"kind": kind})


def load_invariant(G: GroupTable, ref: Spec) -> CountingInvariant:
    spec = resolve_spec(ref)
    if not isinstance(spec, dict):
        raise SpecFormatError("Invariant spec must be a JSON object", {"spec": str(spec)})
    values = spec.get("values", spec)
    return custom_invariant(G, {str(k): int(v) for k, v in values.items() if k != "kind"})


# ---------------------------------------------------------------------------
# Catalogs
# ---------------------------------------------------------------------------

def _labels(G: Optional[GroupTable], items) -> Optional[List[str]]:
    return None if items is None or G is None else G.labels(items)


def catalog_to_dict(catalog: ComponentCatalog) -> Dict[str, Any]:
    R = catalog.rack
    G = R.group
    spec = catalog.spec
    data: Dict[str, Any] = {
        "format": CATALOG_FORMAT,
        "rack": {"name": R.name, "labels": list(R.labels), "table": [list(row) for row in R.act]},
        "group": None,
        "subset": None,
        "spec": {
            "n": spec.n,
            "multidegree_filter": list(spec.multidegree_filter) if spec.multidegree_filter else None,
            "generating_only": spec.generating_only,
            "target_subgroup": _labels(G, spec.target_subgroup.members if spec.target_subgroup else None),
            "monodromy_filter": G.label(spec.monodromy_filter) if spec.monodromy_filter is not None else None,
        },
        "quotient_group": catalog.quotient_group.labels() if catalog.quotient_group is not None else None,
        "records": [],
        "totals": {"states_visited": catalog.totals.states_visited,
                   "admissible_tuples": catalog.totals.admissible_tuples,
                   "mode": catalog.totals.mode, "complete": catalog.totals.complete},
    }
    if G is not None:
        data["group"] = {
            "name": G.name,
            "labels": list(G.element_labels),
            "table": [list(row) for row in G.mul_rows],
            "degree": G.degree,
            "perm_images": [[v + 1 for v in p] for p in G.perm_images] if G.perm_images is not None else None,
        }
        data["subset"] = R.subset.labels()
    for rec in catalog.records:
        data["records"].append({
            "canonical_rep": [R.label(x) for x in rec.canonical_rep],
            "orbit_size": rec.orbit_size,
            "multidegree": list(rec.multidegree),
            "boundary_monodromy": G.label(rec.boundary_monodromy) if rec.boundary_monodromy is not None else None,
            "generated_subgroup": _labels(G, rec.generated_subgroup),
            "monodromy_orbit": _labels(G, rec.monodromy_orbit),
            "merged_reps": [[R.label(x) for x in rep] for rep in rec.merged_reps],
        })
    return data


def catalog_from_dict(data: Dict[str, Any], budget: int = DEFAULT_STATE_BUDGET) -> ComponentCatalog:
    if data.get("format") != CATALOG_FORMAT:
        raise SpecFormatError(f"Not a {CATALOG_FORMAT} document", {"format": data.get("format")})
    rack_data = _require(data, "rack", "catalog")
    G = None
    group_data = data.get("group")
    if group_data is not None:
        images = group_data.get("perm_images")
        G = group_from_table(_require(group_data, "table", "catalog group"),
                             labels=_require(group_data, "labels", "catalog group"),
                             name=group_data.get("name", "G"),
                             perm_images=[tuple(v - 1 for v in p) for p in images] if images else None,
                             degree=group_data.get("degree"))
        c = subset_from_labels(G, _require(data, "subset", "catalog"))
        R = conjugation_rack(G, c, name=rack_data.get("name"))
        if [list(row) for row in R.act] != rack_data.get("table"):
            raise SpecFormatError("Catalog rack table does not match its group and subset", {"rack": R.name})
    else:
        R = rack_from_table(_require(rack_data, "table", "catalog rack"), labels=rack_data.get("labels"),
                            name=rack_data.get("name", "rack"))

    s = _require(data, "spec", "catalog")
    target = s.get("target_subgroup")
    spec = TupleSpaceSpec(
        rack=R, n=int(_require(s, "n", "catalog spec")),
        multidegree_filter=tuple(s["multidegree_filter"]) if s.get("multidegree_filter") else None,
        generating_only=bool(s.get("generating_only", False)),
        target_subgroup=subset_from_labels(G, target) if target is not None else None,
        monodromy_filter=G.index_of(s["monodromy_filter"]) if s.get("monodromy_filter") is not None else None,
        budget=budget,
    )

    def group_items(labels):
        return None if labels is None else tuple(make_subset(G, (G.index_of(x) for x in labels)).members)

    records = []
    for r in _require(data, "records", "catalog"):
        records.append(ComponentRecord(
            canonical_rep=tuple(R.index_of(x) for x in r["canonical_rep"]),
            orbit_size=int(r["orbit_size"]),
            multidegree=tuple(r["multidegree"]),
            boundary_monodromy=G.index_of(r["boundary_monodromy"]) if r.get("boundary_monodromy") is not None else None,
            generated_subgroup=group_items(r.get("generated_subgroup")),
            monodromy_orbit=group_items(r.get("monodromy_orbit")),
            merged_reps=tuple(tuple(R.index_of(x) for x in rep) for rep in r.get("merged_reps", [])),
        ))
    t = _require(data, "totals", "catalog")
    totals = CatalogTotals(states_visited=int(t["states_visited"]), admissible_tuples=int(t["admissible_tuples"]),
                           mode=t.get("mode", "full"), complete=bool(t.get("complete", True)))
    quotient = data.get("quotient_group")
    return ComponentCatalog(spec=spec, records=tuple(records), totals=totals,
                            quotient_group=subset_from_labels(G, quotient) if quotient is not None else None)


def load_catalog(path: Union[str, Path], budget: int = DEFAULT_STATE_BUDGET) -> ComponentCatalog:
    data = load_json(path)
    try:
        return catalog_from_dict(data, budget)
    except HurwitzError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"Malformed catalog {path}: {exc}", {"path": str(path)}) from exc

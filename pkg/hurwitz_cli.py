#!/usr/bin/env python3
"""
Hurwitz components command line.

Subcommands:
    group info         order, classes, abelianization of a group
    rack check|info    rack axioms; components, structure group, U(c)^ab
    components         enumerate braid orbits on tuples; stable count scans
    h2                 H2(G) and H2(G, c)
    frobenius          fixed components, d constant, periodicity scans
    malle              exponents a, b_M, b_T; coefficient series; stable Picard
    clm                admissibility and component comparison for H x| Gamma

CSV columns:
    components enumerate   index,canonical_rep,orbit_size,multidegree,monodromy,generated_order
    components scan        n,count,predicted_zero,states_visited
    frobenius fixed        index,canonical_rep,orbit_size,multidegree,fixed
    frobenius scan         n,multidegree,residues,necessary,components,fixed
    malle series           delta,a_delta,partial_sum,normalized
    clm compare            n,pi_G,pi_Gamma,diff,d_G,d_Gamma,status

Exit codes: 0 success, 1 domain error (see --error-json), 2 usage error.
No command uses randomness; reruns give byte-identical reports.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

try:
    from rich.console import Console
    from rich.table import Table
    RICH_AVAILABLE = True
except ImportError:  # pragma: no cover
    Console = None
    Table = None
    RICH_AVAILABLE = False

from braid_orbits import (TupleSpaceSpec, catalog_summary_frame, enumerate_components, quotient_by_conjugation,
                          stable_count_scan)
from clm import build_instance, comparison_frame, component_comparison, is_admissible
from frobenius import d_constant, fixed_record_flags, periodicity_scan, q_powering
from group_core import (GroupTable, SubsetOfGroup, abelianization, center, conjugacy_classes,
                        cyclic_quotient_generators, exponent, is_abelian, nonidentity, subgroup_generated,
                        whole_group)
from homology2 import format_factors, h2_gc, h2_group
from hurwitz_config import RunConfig, load_run_config
from hurwitz_errors import HurwitzError, SpecFormatError, ValidationFailure
from malle import (a_constant, discriminant_invariant, malle_exponents, malle_prediction,
                   normalized_partial_sums, partial_sums, pole_order, rdisc_invariant,
                   regular_discriminant_invariant, rho_orbits, stable_picard_prediction,
                   tuple_count_coefficients)
from rack_core import (is_quandle, presentation_abelianization, rack_components, reduced_structure_group,
                       structure_group_presentation, validate_rack)
from reports import emit_report, render_json, write_text
from specs_io import (catalog_to_dict, load_action, load_catalog, load_group,
                      load_invariant, load_rack, parse_k, parse_subset)

logger = logging.getLogger("hurwitz_cli")

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


class SimpleConsole:
    def __init__(self):
        self.is_terminal = sys.stdout.isatty()

    def print(self, *values, **kwargs):
        print(*values, **kwargs)


console = Console() if RICH_AVAILABLE else SimpleConsole()


def configure_logging(verbosity: int) -> None:
    logging.basicConfig(
        level=VERBOSITY_LEVELS.get(verbosity, logging.DEBUG),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def show_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    if RICH_AVAILABLE:
        table = Table(title=title)
        for i, column in enumerate(columns):
            table.add_column(column, style="cyan" if i == 0 else None)
        for row in rows:
            table.add_row(*(str(v) for v in row))
        console.print(table)
    else:
        console.print(title)
        console.print("  ".join(columns))
        for row in rows:
            console.print("  ".join(str(v) for v in row))


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def parse_n_range(text: str) -> List[int]:
    """'a..b' inclusive, 'a..b:step', or a single integer"""
    try:
        if ".." not in text:
            return [int(text)]
        span, _, step = text.partition(":")
        lo, hi = span.split("..")
        return list(range(int(lo), int(hi) + 1, int(step) if step else 1))
    except ValueError as exc:
        raise SpecFormatError(f"Invalid n range '{text}'", {"range": text}) from exc


def parse_int_list(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise SpecFormatError(f"Invalid integer list '{text}'", {"value": text}) from exc


def classes_arg(G: GroupTable, reps: Optional[List[str]], default_all: bool = False) -> SubsetOfGroup:
    if not reps:
        if default_all:
            return nonidentity(G)
        raise SpecFormatError("--classes is required", {})
    return parse_subset(G, reps, closure=True)


def invariant_arg(G: GroupTable, name: str):
    if name == "disc":
        return discriminant_invariant(G)
    if name == "regular":
        return regular_discriminant_invariant(G)
    if name == "rdisc":
        return rdisc_invariant(G)
    return load_invariant(G, name)


def normal_arg(G: GroupTable, labels: Optional[List[str]]) -> SubsetOfGroup:
    if not labels:
        return whole_group(G)
    return subgroup_generated(G, (G.index_of(x) for x in labels))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_group_info(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    classes = conjugacy_classes(G)
    ab = abelianization(G)
    payload = {
        "name": G.name,
        "order": G.order,
        "exponent": exponent(G),
        "abelian": is_abelian(G),
        "center_order": len(center(G)),
        "abelianization": list(ab.invariant_factors),
        "classes": [{"representative": G.label(b[0]), "size": len(b), "order": G.element_orders[b[0]]}
                    for b in classes.blocks],
    }
    if config.output_path:
        emit_report(payload, config)
        return 0
    show_table(f"{G.name}: order {G.order}, exponent {payload['exponent']}, G^ab = "
               f"{' x '.join(f'Z/{d}' for d in ab.invariant_factors) or '1'}",
               ["Representative", "Size", "Order"],
               [(c["representative"], c["size"], c["order"]) for c in payload["classes"]])
    return 0


def cmd_rack_check(args, config: RunConfig) -> int:
    R = load_rack(args.rack, config.group_budget)
    report = validate_rack(R)
    if not report.valid:
        raise ValidationFailure(f"Rack {R.name} fails the rack axioms", report.to_dict())
    console.print("valid")
    if config.output_path:
        emit_report(report.to_dict(), config)
    return 0


def cmd_rack_info(args, config: RunConfig) -> int:
    R = load_rack(args.rack, config.group_budget)
    partition = rack_components(R)
    structure = reduced_structure_group(R, config.group_budget)
    free_rank, torsion = presentation_abelianization(structure_group_presentation(R))
    payload = {
        "name": R.name,
        "size": R.size,
        "quandle": is_quandle(R),
        "components": [[R.label(x) for x in block] for block in partition.blocks],
        "inner_group_order": structure.group.order,
        "structure_group_abelianization": {"free_rank": free_rank, "torsion": list(torsion)},
    }
    if config.output_path:
        emit_report(payload, config)
        return 0
    show_table(f"{R.name}: {R.size} elements, quandle={payload['quandle']}, |G0|={structure.group.order}, "
               f"U^ab = Z^{free_rank}",
               ["Component", "Size", "Elements"],
               [(i, len(block), " ".join(block)) for i, block in enumerate(payload["components"])])
    return 0


def cmd_components_enumerate(args, config: RunConfig) -> int:
    R = load_rack(args.rack, config.group_budget)
    target = None
    monodromy = None
    if args.target is not None or args.monodromy is not None:
        if R.group_origin is None:
            raise SpecFormatError("--target and --monodromy need a conjugation rack", {"rack": R.name})
        G = R.group
        if args.target is not None:
            target = whole_group(G) if args.target == "all" else normal_or_generated(G, args.target)
        if args.monodromy is not None:
            monodromy = G.index_of(args.monodromy)
    multidegree = parse_int_list(args.multidegree)
    spec = TupleSpaceSpec(rack=R, n=args.n, multidegree_filter=tuple(multidegree) if multidegree else None,
                          generating_only=args.generating, target_subgroup=target, monodromy_filter=monodromy,
                          budget=config.state_budget)
    seeds = [tuple(R.index_of(x.strip()) for x in seed.split(",")) for seed in args.seed_tuple] \
        if args.seed_tuple else None
    catalog = enumerate_components(spec, seeds=seeds, workers=config.worker_count,
                                   parallel_threshold=config.parallel_threshold)
    if args.quotient_by is not None:
        if R.group_origin is None:
            raise SpecFormatError("--quotient-by needs a conjugation rack", {"rack": R.name})
        catalog = quotient_by_conjugation(catalog, parse_k(R.group, args.quotient_by))
    emit_report(catalog_to_dict(catalog), config, frame=catalog_summary_frame(catalog))
    return 0


def normal_or_generated(G: GroupTable, text: str) -> SubsetOfGroup:
    return subgroup_generated(G, (G.index_of(x.strip()) for x in text.split(";")))


def cmd_components_scan(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    c = classes_arg(G, args.classes)
    monodromy = G.index_of(args.monodromy) if args.monodromy else G.id_index
    report = stable_count_scan(G, c, monodromy, parse_n_range(args.n_range), budget=config.state_budget,
                               workers=config.worker_count, parallel_threshold=config.parallel_threshold)
    payload = report.to_dict()
    frame = pd.DataFrame(payload["rows"], columns=["n", "count", "predicted_zero", "states_visited"])
    emit_report(payload, config, frame=frame)
    return 0


def cmd_h2(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    full = h2_group(G, config.state_budget)
    payload: Dict[str, Any] = {"group": G.name, "h2": full.to_dict(with_cycles=bool(args.emit_cycles))}
    rows = [("H2(G)", format_factors(full), full.order)]
    if args.classes:
        c = classes_arg(G, args.classes)
        relative = h2_gc(G, c, config.state_budget)
        payload["classes"] = c.labels()
        payload["h2_gc"] = relative.to_dict(with_cycles=bool(args.emit_cycles))
        rows.append(("H2(G,c)", format_factors(relative), relative.order))
    if args.emit_cycles:
        write_text(render_json(payload), args.emit_cycles)
    if config.output_path:
        emit_report(payload, config)
        return 0
    show_table(f"Second homology of {G.name}", ["Group", "Invariant factors", "Order"], rows)
    return 0


def cmd_frobenius_fixed(args, config: RunConfig) -> int:
    catalog = load_catalog(args.catalog, config.state_budget)
    R = catalog.rack
    if R.group_origin is None:
        raise SpecFormatError("Frobenius needs a catalog over a conjugation rack", {"rack": R.name})
    G, c = R.group, R.subset
    pm = q_powering(G, c, args.q)
    K = parse_k(G, args.K)
    flags = fixed_record_flags(catalog, pm, K)
    frame = catalog_summary_frame(catalog)[["index", "canonical_rep", "orbit_size", "multidegree"]].copy()
    frame["fixed"] = flags
    payload = {"q": args.q, "K": K.labels(), "fixed": sum(flags), "records": len(flags),
               "flags": [{"canonical_rep": [R.label(x) for x in rec.canonical_rep], "fixed": flag}
                         for rec, flag in zip(catalog.records, flags)]}
    emit_report(payload, config, frame=frame)
    return 0


def cmd_frobenius_d(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    c = classes_arg(G, args.classes)
    emit_report({"group": G.name, "classes": c.labels(), "q": args.q, "d": d_constant(G, c, args.q)}, config)
    return 0


def cmd_frobenius_scan(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    c = classes_arg(G, args.classes)
    report = periodicity_scan(G, c, args.q, parse_k(G, args.K), parse_n_range(args.n_range),
                              residues=parse_int_list(args.residues), modulus=args.modulus,
                              generating=args.generating,
                              monodromy=G.index_of(args.monodromy) if args.monodromy else None,
                              budget=config.state_budget, workers=config.worker_count,
                              parallel_threshold=config.parallel_threshold)
    payload = report.to_dict()
    frame = pd.DataFrame([{"n": r["n"], "multidegree": ",".join(str(v) for v in r["multidegree"]),
                           "residues": ",".join(str(v) for v in r["residues"]), "necessary": r["necessary"],
                           "components": r["components"], "fixed": r["fixed"]} for r in payload["rows"]],
                         columns=["n", "multidegree", "residues", "necessary", "components", "fixed"])
    frame["components"] = frame["components"].astype("Int64")
    emit_report(payload, config, frame=frame)
    return 0


def cmd_malle_exponents(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    c = classes_arg(G, args.classes, default_all=True)
    inv = invariant_arg(G, args.inv)
    N = normal_arg(G, args.N)
    exps = malle_exponents(G, c, inv, args.q, N)
    prediction = malle_prediction(G, c, inv, args.q, N)
    payload = exps.to_dict()
    payload.update({"group": G.name, "q": args.q, "invariant": inv.provenance,
                    "prediction": prediction.to_dict()})
    emit_report(payload, config)
    return 0


def cmd_malle_series(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    c = classes_arg(G, args.classes, default_all=True)
    inv = invariant_arg(G, args.inv)
    N = normal_arg(G, args.N)
    part = SubsetOfGroup(G, tuple(x for x in c.members if x in N))
    h = G.index_of(args.h) if args.h else None
    if h is None:
        gens = cyclic_quotient_generators(G, N)
        h = gens[0] if gens else G.id_index
    q_eff = args.q ** (G.order // len(N))
    dec = rho_orbits(G, N, part, h, q_eff, inv)
    coeffs = tuple_count_coefficients(dec, inv, q_eff, args.delta_max, config.state_budget)
    a, _ = a_constant(part, inv)
    b = pole_order(dec, inv, q_eff)
    sums = partial_sums(coeffs)
    normalized = dict(normalized_partial_sums(coeffs, q_eff, a, b, range(1, len(coeffs))))
    frame = pd.DataFrame({"delta": list(range(len(coeffs))), "a_delta": coeffs, "partial_sum": sums,
                          "normalized": [normalized.get(d) for d in range(len(coeffs))]})
    payload = {"group": G.name, "q": args.q, "a": a, "b": b, "h": G.label(h), "N": N.labels(),
               "orbits": [{"size": size, "invariant": value} for size, value in dec.shape()],
               "coefficients": coeffs, "normalized": [normalized.get(d) for d in range(1, len(coeffs))]}
    emit_report(payload, config, frame=frame)
    return 0


def cmd_malle_picard(args, config: RunConfig) -> int:
    G = load_group(args.group, config.group_budget)
    c = classes_arg(G, args.classes)
    prediction = stable_picard_prediction(G, c, args.n, config.state_budget)
    payload = prediction.to_dict()
    payload.update({"group": G.name, "classes": c.labels()})
    emit_report(payload, config)
    return 0


def _clm_inputs(args, config: RunConfig):
    H = load_group(args.H, config.group_budget)
    Gamma = load_group(args.Gamma, config.group_budget)
    return H, Gamma, load_action(H, Gamma, args.action)


def cmd_clm_check(args, config: RunConfig) -> int:
    H, Gamma, action = _clm_inputs(args, config)
    payload = is_admissible(H, Gamma, action).to_dict()
    payload.update({"H": H.name, "Gamma": Gamma.name})
    emit_report(payload, config)
    return 0


def cmd_clm_compare(args, config: RunConfig) -> int:
    H, Gamma, action = _clm_inputs(args, config)
    instance = build_instance(H, Gamma, action, args.q)
    table = component_comparison(instance, parse_n_range(args.n_range), budget=config.state_budget,
                                 trivial_monodromy=not args.unrestricted, workers=config.worker_count,
                                 parallel_threshold=config.parallel_threshold)
    frame = comparison_frame(table)
    payload = {"header": table.header(),
               "rows": json.loads(frame.to_json(orient="records"))}
    emit_report(payload, config, frame=frame)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--budget', type=int, default=argparse.SUPPRESS, help='State budget for enumerations')
    common.add_argument('--group-budget', type=int, default=argparse.SUPPRESS, help='Element budget for groups')
    common.add_argument('--workers', type=int, default=argparse.SUPPRESS, help='Worker processes')
    common.add_argument('--format', choices=['json', 'csv'], default=argparse.SUPPRESS, help='Report format')
    common.add_argument('--out', default=argparse.SUPPRESS, help='Write the report to this path')
    common.add_argument('--verbosity', type=int, choices=[0, 1, 2], default=argparse.SUPPRESS)
    common.add_argument('--error-json', action='store_true', default=argparse.SUPPRESS,
                        help='Print domain errors as JSON on stdout')

    parser = argparse.ArgumentParser(
        prog="hurwitz_cli.py",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True)

    group = commands.add_parser("group", parents=[common]).add_subparsers(dest="subcommand", required=True)
    p = group.add_parser("info", parents=[common], help="Order, classes and abelianization")
    p.add_argument("group")
    p.set_defaults(handler=cmd_group_info)

    rack = commands.add_parser("rack", parents=[common]).add_subparsers(dest="subcommand", required=True)
    p = rack.add_parser("check", parents=[common], help="Validate the rack axioms")
    p.add_argument("rack")
    p.set_defaults(handler=cmd_rack_check)
    p = rack.add_parser("info", parents=[common], help="Components and structure group data")
    p.add_argument("rack")
    p.set_defaults(handler=cmd_rack_info)

    components = commands.add_parser("components", parents=[common]).add_subparsers(dest="subcommand",
                                                                                    required=True)
    p = components.add_parser("enumerate", parents=[common], help="Braid orbits on rack tuples")
    p.add_argument("rack")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--multidegree", help="Comma-separated counts per rack component")
    p.add_argument("--generating", action="store_true", help="Keep tuples generating the inner group")
    p.add_argument("--target", help="'all' or ';'-separated generators of the subgroup to generate")
    p.add_argument("--monodromy", help="Boundary monodromy element")
    p.add_argument("--quotient-by", help="K: trivial, all, center or ';'-separated generators")
    p.add_argument("--seed-tuple", action="append", help="Seed tuple for budget-limited closure")
    p.set_defaults(handler=cmd_components_enumerate)
    p = components.add_parser("scan", parents=[common], help="Stable component counts over n")
    p.add_argument("--group", required=True)
    p.add_argument("--classes", action="append", required=True)
    p.add_argument("--monodromy")
    p.add_argument("--n-range", required=True)
    p.set_defaults(handler=cmd_components_scan)

    p = commands.add_parser("h2", parents=[common], help="H2(G) and H2(G, c)")
    p.add_argument("group")
    p.add_argument("--classes", action="append")
    p.add_argument("--emit-cycles", help="Write basis cycles as JSON to this path")
    p.set_defaults(handler=cmd_h2)

    frob = commands.add_parser("frobenius", parents=[common]).add_subparsers(dest="subcommand", required=True)
    p = frob.add_parser("fixed", parents=[common], help="Geometrically irreducible records of a catalog")
    p.add_argument("catalog")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--K")
    p.set_defaults(handler=cmd_frobenius_fixed)
    p = frob.add_parser("d", parents=[common], help="Orbits of q-powering on classes of c")
    p.add_argument("--group", required=True)
    p.add_argument("--classes", action="append", required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(handler=cmd_frobenius_d)
    p = frob.add_parser("scan", parents=[common], help="Fixed counts by residue class")
    p.add_argument("--group", required=True)
    p.add_argument("--classes", action="append", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--K")
    p.add_argument("--n-range", required=True)
    p.add_argument("--residues")
    p.add_argument("--modulus", choices=["G", "G2"], default="G")
    p.add_argument("--generating", action="store_true")
    p.add_argument("--monodromy")
    p.set_defaults(handler=cmd_frobenius_scan)

    malle = commands.add_parser("malle", parents=[common]).add_subparsers(dest="subcommand", required=True)
    for name, handler, help_text in (("exponents", cmd_malle_exponents, "a, c_inv, b_M, b_T"),
                                     ("series", cmd_malle_series, "Tuple-count coefficients")):
        p = malle.add_parser(name, parents=[common], help=help_text)
        p.add_argument("group")
        p.add_argument("--classes", action="append")
        p.add_argument("--inv", default="disc", help="disc, regular, rdisc or a custom invariant JSON")
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--N", action="append", help="Generators of the normal subgroup")
        if name == "series":
            p.add_argument("--delta-max", type=int, required=True)
            p.add_argument("--coset-generator", dest="h", help="Element whose coset generates G/N")
        p.set_defaults(handler=handler)
    p = malle.add_parser("picard", parents=[common], help="Predicted stable Picard group")
    p.add_argument("group")
    p.add_argument("--classes", action="append", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_malle_picard)

    clm = commands.add_parser("clm", parents=[common]).add_subparsers(dest="subcommand", required=True)
    for name, handler in (("check", cmd_clm_check), ("compare", cmd_clm_compare)):
        p = clm.add_parser(name, parents=[common])
        p.add_argument("--H", required=True)
        p.add_argument("--Gamma", required=True)
        p.add_argument("--action", required=True)
        if name == "compare":
            p.add_argument("--q", type=int, required=True)
            p.add_argument("--n-range", required=True)
            p.add_argument("--unrestricted", action="store_true",
                           help="Count without the trivial boundary monodromy condition")
        p.set_defaults(handler=handler)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return load_run_config({
        "state_budget": getattr(args, "budget", None),
        "group_budget": getattr(args, "group_budget", None),
        "worker_count": getattr(args, "workers", None),
        "output_format": getattr(args, "format", None),
        "output_path": getattr(args, "out", None),
        "verbosity": getattr(args, "verbosity", None),
    })


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    error_json = getattr(args, "error_json", False)
    try:
        config = config_from_args(args)
        configure_logging(config.verbosity)
        return args.handler(args, config)
    except HurwitzError as exc:
        logger.error(str(exc))
        if error_json:
            print(json.dumps(exc.to_dict(), sort_keys=True, default=str))
        return 1


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line surface: tower / structures / maps / ss / gauge subcommands.

Every command builds one plain report dict; --json prints it sorted and
indented, the default prints an aligned text rendering of the same numbers.
Output is deterministic: identical inputs give byte-identical reports.

Exit codes: 0 success, 2 manifold parse error, 3 manifold validation error,
4 unknown group spec, 5 theorem-precondition failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import catalog, gauge, serre, structures, sullivan
from .catalog import CatalogError, GroupSpec, parse_groupspec, format_groupspec
from .manifold import (ManifoldFile, ManifoldParseError, ManifoldValidationError,
                       parse_manifold, resolve_manifold)
from .serre import PresentationError
from .structures import StructureError

ENV_MAX_DEGREE = "QTOWER_MAX_DEGREE"

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_GROUPSPEC = 4
EXIT_PRECONDITION = 5


def default_max_degree() -> int:
    raw = os.environ.get(ENV_MAX_DEGREE)
    if raw:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
        print(f"ignoring bad {ENV_MAX_DEGREE}={raw!r}", file=sys.stderr)
    return 24


def _em_report(em: catalog.EMProduct) -> dict:
    return {str(d): m for d, m in sorted(em.factors.items())}


def _load(args) -> ManifoldFile:
    return parse_manifold(resolve_manifold(args.manifold))


def _query_from_manifold(mf: ManifoldFile, level: int) -> structures.StructureQuery:
    return structures.StructureQuery(
        level=level, betti=mf.betti, bundle_level=0,
        obstruction_status=dict(mf.class_status),
    )


# ---------------------------------------------------------------- tower

def cmd_tower_type(args):
    g = parse_groupspec(args.groupspec)
    md = args.max_degree
    em = catalog.rational_type(g, md)
    report = {
        "command": "tower type",
        "groupspec": format_groupspec(g),
        "max_degree": md,
        "factors": _em_report(em),
        "display": em.text(),
    }
    text = f"tower type {report['groupspec']}  (max degree {md})\n{em.text()}"
    return report, text


def cmd_tower_model(args):
    g = parse_groupspec(args.groupspec)
    md = args.max_degree
    gens = catalog.bcohomology_generators(g, md)
    model = sullivan.relative_model_of_cover(gens, args.kill)
    dims = sullivan.cohomology_dims(model.total, md)
    quotient = gca_free([(x.name, x.degree) for x in gens if x.name != args.kill])
    expected = quotient_dims(quotient, md)
    sy = [x for x in model.total.alg.generators if x.name not in {g2.name for g2 in gens}][0]
    report = {
        "command": "tower model",
        "groupspec": format_groupspec(g),
        "max_degree": md,
        "killed": args.kill,
        "base_generators": {x.name: x.degree for x in gens},
        "adjoined": {sy.name: sy.degree},
        "differential": {sy.name: args.kill},
        "fiber": {x.name: x.degree for x in model.fiber.alg.generators},
        "total_cohomology": {str(d): n for d, n in dims.as_dict().items()},
        "expected_quotient": {str(d): n for d, n in expected.as_dict().items()},
        "quasi_isomorphic": dims == expected,
    }
    lines = [
        f"tower model {report['groupspec']} --kill {args.kill}  (max degree {md})",
        "base:  " + ", ".join(f"{x.name}:{x.degree}" for x in gens),
        f"total: base + {sy.name}:{sy.degree} with d({sy.name}) = {args.kill}",
        f"fiber: {sy.name}:{sy.degree}",
        "H(total) = " + _dims_text(dims),
        "expected  " + _dims_text(expected),
        f"quasi-isomorphic: {'yes' if report['quasi_isomorphic'] else 'NO'}",
    ]
    return report, "\n".join(lines)


def gca_free(pairs):
    from .gca import FreeGCA
    return FreeGCA.on(pairs)


def quotient_dims(alg, md):
    from .gca import poincare_dims
    return poincare_dims(alg, md)


def _dims_text(dims) -> str:
    items = dims.as_dict()
    if not items:
        return "0"
    return " ".join(f"{d}:{n}" for d, n in items.items())


def cmd_tower_trivial(args):
    g = parse_groupspec(args.groupspec)
    trivial = catalog.is_rationally_trivial(g)
    k = g.effective_cover
    spec = g.group()
    if spec.family == "spinpq":
        thr = max(catalog.triviality_threshold(spec.signature[0]),
                  catalog.triviality_threshold(spec.signature[1]))
    else:
        thr = catalog.triviality_threshold(spec.rank)
    verdict = (f"trivial (k={k} >= {thr})" if trivial
               else f"nontrivial (k={k} < {thr})")
    report = {
        "command": "tower trivial",
        "groupspec": format_groupspec(g),
        "cover": k,
        "threshold": thr,
        "trivial": trivial,
        "display": verdict,
    }
    return report, f"tower trivial {report['groupspec']}\n{verdict}"


def cmd_tower_split(args):
    md = args.max_degree
    split = catalog.split_indefinite(args.p, args.q, args.cover, md)
    report = {
        "command": "tower split",
        "p": args.p, "q": args.q, "cover": args.cover,
        "max_degree": md,
        "factor_p": _em_report(split.factor_p),
        "factor_q": _em_report(split.factor_q),
        "p_trivial": split.p_trivial,
        "q_trivial": split.q_trivial,
        "product_form_stated": split.product_form_stated,
    }
    lines = [
        f"tower split spinpq:{args.p},{args.q}<{args.cover}>  (max degree {md})",
        f"factor spin:{args.p}<{args.cover}>: "
        + ("trivial" if split.p_trivial else f"nontrivial  {split.factor_p.text()}"),
        f"factor spin:{args.q}<{args.cover}>: "
        + ("trivial" if split.q_trivial else f"nontrivial  {split.factor_q.text()}"),
        "product form stated below factorwise threshold: "
        + ("yes" if split.product_form_stated else "no"),
    ]
    return report, "\n".join(lines)


# ---------------------------------------------------------------- structures

def _summands_report(summands) -> list[dict]:
    return [
        {"label": s.label, "s": s.bidegree[0], "t": s.bidegree[1], "dim": s.dim}
        for s in summands
    ]


def _summands_lines(title, summands) -> list[str]:
    lines = [title]
    for s in summands:
        spot = f"({s.bidegree[0]},{s.bidegree[1]})"
        lines.append(f"  {s.label:<10} {spot:<7} {s.dim}")
    return lines


def cmd_structures_report(args):
    mf = _load(args)
    q = _query_from_manifold(mf, args.level)
    survey = structures.obstruction_survey(q)
    if survey != "yes":
        raise StructureError(
            f"level-{args.level} structures on {mf.name}: obstruction survey is "
            f"{survey!r} (requires {', '.join(q.required_classes())} declared zero)"
        )
    if args.level in (4, 8, 12):
        rep = structures.decomposition(q)
        report = {
            "command": "structures report",
            "manifold": mf.name,
            "level": args.level,
            "level_name": catalog.level_name(args.level),
            "obstruction": catalog.obstruction_display(args.level),
            "exists": rep.exists,
            "torsor_dim": rep.torsor_dim,
            "bundle_summands": _summands_report(rep.bundle_summands),
            "lifted_summands": _summands_report(rep.lifted_summands),
            "kernel": _summands_report(rep.kernel),
            "kernel_dim": rep.kernel_total(),
            "surjective": rep.surjective,
        }
        lines = [
            f"structures report level {args.level} ({catalog.level_name(args.level)}) "
            f"on {mf.name}  (obstruction {report['obstruction']})",
            f"exists: yes    torsor: H^{args.level - 1} dim {rep.torsor_dim}",
        ]
        lines += _summands_lines("underlying-bundle summands:", rep.bundle_summands)
        lines += _summands_lines("covered-bundle summands:", rep.lifted_summands)
        if rep.kernel:
            lines += _summands_lines("kernel of the comparison map:", rep.kernel)
        lines.append(f"surjective: {'yes' if rep.surjective else 'no'}")
        return report, "\n".join(lines)
    torsor = structures.torsor_dim(q)
    report = {
        "command": "structures report",
        "manifold": mf.name,
        "level": args.level,
        "level_name": catalog.level_name(args.level),
        "obstruction": catalog.obstruction_display(args.level),
        "exists": "yes",
        "torsor_dim": torsor,
    }
    text = (f"structures report level {args.level} on {mf.name}  "
            f"(obstruction {report['obstruction']})\n"
            f"exists: yes    torsor: H^{args.level - 1} dim {torsor}\n"
            f"(no closed-form summand decomposition tabulated at this level)")
    return report, text


def cmd_maps_decompose(args):
    mf = _load(args)
    dec = structures.mapping_space_decompose(args.level, mf.betti,
                                             group_level=args.group_level)
    report = {
        "command": "maps decompose",
        "manifold": mf.name,
        "level": args.level,
        "variant": "group" if args.group_level else "classifying",
        "window": dec.window,
        "factors": [{"i": f.loop_degree, "dim": f.dim} for f in dec.factors],
        "pi0_dim": dec.pi0_dim,
        "display": dec.text(),
    }
    text = (f"maps decompose level {args.level} on {mf.name}  "
            f"({report['variant']} variant, window {dec.window})\n"
            f"{dec.text()}\n"
            f"pi_0 dim: {dec.pi0_dim}")
    return report, text


# ---------------------------------------------------------------- ss

def cmd_ss_run(args):
    mf = _load(args)
    names = [n.strip() for n in args.fiber.split(",") if n.strip()]
    fiber = serre.standard_fiber(names)
    bound = args.max_total
    ss = serre.e2_page(mf.presentation, fiber, bound,
                       verify_algebra=args.verify_algebra)
    ss = serre.run_to_einfty(ss)
    totals = {n: serre.total_space_cohomology(ss, n) for n in range(bound + 1)}
    transgressions = []
    for g in fiber.generators:
        status = "zero" if mf.presentation.class_is_zero(g.target) else "nonzero"
        transgressions.append({"generator": g.name, "target": g.target,
                               "status": status})
    report = {
        "command": "ss run",
        "manifold": mf.name,
        "fiber": names,
        "max_total": bound,
        "transgressions": transgressions,
        "einf": {f"{s},{t}": dim for (s, t), dim in sorted(ss.einf.items())},
        "einf_labels": {f"{s},{t}": list(ss.einf_labels[(s, t)])
                        for (s, t) in sorted(ss.einf_labels)},
        "differential_ranks": {f"d{r} ({s},{t})": rank
                               for (r, s, t), rank in sorted(ss.differential_ranks.items())},
        "totals": {str(n): totals[n].dim for n in totals if totals[n].dim},
    }
    lines = [
        f"ss run on {mf.name}, fiber {', '.join(names)}  (total degree <= {bound})",
        "transgressions: " + "; ".join(
            f"{t['generator']} -> {t['target']} ({t['status']})" for t in transgressions),
        "E_inf (nonzero bidegrees):",
    ]
    for (s, t) in sorted(ss.einf):
        labels = ", ".join(ss.einf_labels[(s, t)])
        lines.append(f"  ({s},{t})  dim {ss.einf[(s, t)]}  [{labels}]")
    if ss.differential_ranks:
        lines.append("differential ranks:")
        for (r, s, t), rank in sorted(ss.differential_ranks.items()):
            lines.append(f"  d{r} out of ({s},{t}): rank {rank}")
    else:
        lines.append("differential ranks: all zero")
    lines.append("H^n(total): " + (" ".join(
        f"{n}:{totals[n].dim}" for n in totals if totals[n].dim) or "0"))
    return report, "\n".join(lines)


# ---------------------------------------------------------------- gauge

_QRANGE = re.compile(r"^(\d+)\.\.(\d+)$")


def _parse_qrange(text: str) -> tuple[int, int]:
    m = _QRANGE.match(text)
    if not m:
        raise ManifoldValidationError(f"bad --q range {text!r}, expected A..B")
    lo, hi = int(m.group(1)), int(m.group(2))
    if hi < lo:
        raise ManifoldValidationError(f"bad --q range {text!r}: {hi} < {lo}")
    return lo, hi


def _group_type(spec_text: str, depth: int) -> tuple[GroupSpec, catalog.EMProduct]:
    g = parse_groupspec(spec_text)
    if g.classifying:
        raise CatalogError("gauge groups take a group spec, not a classifying space")
    return g, catalog.rational_type(g, depth)


def cmd_gauge_pi(args):
    mf = _load(args)
    lo, hi = _parse_qrange(args.q)
    g, em = _group_type(args.group, mf.betti.top() + hi + 1)
    query = gauge.GaugeQuery(group=em, betti=mf.betti, based=args.based,
                             q_range=(lo, hi))
    dims = gauge.gauge_pi(query)
    report = {
        "command": "gauge pi",
        "manifold": mf.name,
        "group": format_groupspec(g),
        "based": args.based,
        "q_range": [lo, hi],
        "group_depth": mf.betti.top() + hi + 1,
        "pi": {str(q): dims[q] for q in sorted(dims)},
    }
    kind = "based gauge group" if args.based else "gauge group"
    lines = [
        f"gauge pi, {kind} of a {report['group']} bundle on {mf.name}  "
        f"(q in {lo}..{hi})",
        "  q   dim pi_q",
    ]
    for q in sorted(dims):
        lines.append(f"  {q:<3} {dims[q]}")
    return report, "\n".join(lines)


def cmd_gauge_connectivity(args):
    mf = _load(args)
    hi = args.max_q
    g, em = _group_type(args.group, mf.betti.top() + hi + 1)
    query = gauge.GaugeQuery(group=em, betti=mf.betti, based=args.based,
                             q_range=(0, hi))
    conn = gauge.connectivity(query)
    group_conn = em.connectivity()
    dim = args.dim if args.dim is not None else mf.dimension
    guaranteed = None if group_conn is None else group_conn - dim
    report = {
        "command": "gauge connectivity",
        "manifold": mf.name,
        "group": format_groupspec(g),
        "based": args.based,
        "max_q": hi,
        "connectivity": conn,
        "group_connectivity": group_conn,
        "base_dimension": dim,
        "guaranteed_at_least": guaranteed,
    }
    kind = "based gauge group" if args.based else "gauge group"
    lines = [
        f"gauge connectivity, {kind} of a {report['group']} bundle on {mf.name}  "
        f"(scanned q <= {hi})",
        f"connectivity: {conn}" + ("" if conn < hi else f" (vanishing through the scan bound)"),
    ]
    if guaranteed is not None:
        lines.append(
            f"group is {group_conn}-connected, base dimension {dim}: "
            f"guaranteed >= {guaranteed}")
    return report, "\n".join(lines)


def cmd_gauge_periodicity(args):
    mf = _load(args)
    hi = args.max_q
    g, em = _group_type(args.group, mf.betti.top() + hi + 5)
    k = args.from_level if args.from_level is not None else g.effective_cover
    query = gauge.GaugeQuery(group=em, betti=mf.betti, based=args.based,
                             q_range=(0, hi))
    ok = gauge.periodicity_check(query, k)
    report = {
        "command": "gauge periodicity",
        "manifold": mf.name,
        "group": format_groupspec(g),
        "based": args.based,
        "from": k,
        "max_q": hi,
        "periodic": ok,
    }
    text = (f"gauge periodicity for a {report['group']} bundle on {mf.name}\n"
            f"pi_q = pi_(q+4) for q in [{k}, {hi - 4}]: {'yes' if ok else 'NO'}")
    return report, text


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    md = default_max_degree()
    parser = argparse.ArgumentParser(
        prog="qtower",
        description="Exact rational homotopy of the orthogonal Whitehead tower.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(group_parser, name, handler, **kwargs):
        p = group_parser.add_parser(name, **kwargs)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(handler=handler)
        return p

    tower = parser_group(sub, "tower", "catalog and minimal-model queries")
    p = leaf(tower, "type", cmd_tower_type, help="rational type of a group spec")
    p.add_argument("groupspec")
    p.add_argument("--max-degree", type=int, default=md)

    p = leaf(tower, "model", cmd_tower_model,
             help="relative model of the cover killing one generator")
    p.add_argument("groupspec", help="classifying-space spec, e.g. bstring:7")
    p.add_argument("--kill", required=True)
    p.add_argument("--max-degree", type=int, default=md)

    p = leaf(tower, "trivial", cmd_tower_trivial,
             help="is the cover rationally a point?")
    p.add_argument("groupspec")

    p = leaf(tower, "split", cmd_tower_split,
             help="indefinite-signature factorization")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--cover", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=md)

    structures_g = parser_group(sub, "structures", "structure-set reports")
    p = leaf(structures_g, "report", cmd_structures_report,
             help="obstructions, torsor, and summand decomposition")
    p.add_argument("--level", type=int, required=True, choices=(4, 8, 12, 16))
    p.add_argument("--manifold", required=True)

    maps = parser_group(sub, "maps", "mapping-space decompositions")
    p = leaf(maps, "decompose", cmd_maps_decompose,
             help="EM factors of the space of lifts")
    p.add_argument("--level", type=int, required=True, choices=(4, 8, 12, 16))
    p.add_argument("--manifold", required=True)
    p.add_argument("--group-level", action="store_true",
                   help="gauge-transformation variant (window k-2)")

    ss = parser_group(sub, "ss", "spectral-sequence engine")
    p = leaf(ss, "run", cmd_ss_run, help="run the transgressive sequence")
    p.add_argument("--manifold", required=True)
    p.add_argument("--fiber", required=True, help="comma list, e.g. a3,a7,a11")
    p.add_argument("--max-total", type=int, default=md)
    p.add_argument("--verify-algebra", action="store_true",
                   help="full associativity check of the product table")

    gauge_g = parser_group(sub, "gauge", "gauge-group homotopy")
    p = leaf(gauge_g, "pi", cmd_gauge_pi, help="dim pi_q over a q range")
    p.add_argument("--group", required=True)
    p.add_argument("--manifold", required=True)
    p.add_argument("--q", required=True, help="inclusive range A..B")
    p.add_argument("--based", action="store_true")

    p = leaf(gauge_g, "connectivity", cmd_gauge_connectivity,
             help="largest c with pi vanishing through c")
    p.add_argument("--group", required=True)
    p.add_argument("--manifold", required=True)
    p.add_argument("--based", action="store_true")
    p.add_argument("--max-q", type=int, default=md)
    p.add_argument("--dim", type=int, default=None,
                   help="override the base dimension")

    p = leaf(gauge_g, "periodicity", cmd_gauge_periodicity,
             help="check pi_q = pi_(q+4) from the cover level up")
    p.add_argument("--group", required=True)
    p.add_argument("--manifold", required=True)
    p.add_argument("--based", action="store_true")
    p.add_argument("--from", dest="from_level", type=int, default=None)
    p.add_argument("--max-q", type=int, default=md)

    return parser


def parser_group(sub, name, help_text):
    p = sub.add_parser(name, help=help_text)
    inner = p.add_subparsers(dest="subcommand", required=True)
    return inner


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, text = args.handler(args)
    except ManifoldParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ManifoldValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except CatalogError as e:
        print(f"error: {e}", file=sys.stderr)
        print(catalog.catalog_listing(), file=sys.stderr)
        return EXIT_GROUPSPEC
    except (StructureError, PresentationError) as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(text)
    return 0


def console_main():
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()

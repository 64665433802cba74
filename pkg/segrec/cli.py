"""
Command line interface.

Every subcommand reads JSON documents (``-`` is standard input), writes its
result to ``-o`` (default standard output) and reports through its exit code:
0 success, 1 a failed verification or check, 2 a usage or parse error, 3 an
exhausted refinement or search budget.
"""

import argparse
import logging
import os
import sys
from typing import Callable, Dict, List, Optional

from segrec.arrangement import (
    catalog,
    catalog_names,
    equivalent,
    random_arrangement,
    squeeze,
    validate_wiring,
    wiring_from_lines,
)
from segrec.encoder import emit_json, emit_smtlib, encode_polyline, encode_stretchability, encode_unit
from segrec.formats import (
    artifact_from_dict,
    artifact_to_dict,
    graph_from_dict,
    is_artifact,
    lines_from_dict,
    lines_to_dict,
    load_json,
    realization_from_dict,
    realization_to_dict,
    wiring_from_dict,
    wiring_to_dict,
)
from segrec.frame import realize_polyline
from segrec.graphs import graphs_equal, intersection_graph
from segrec.realizer import RealizerParams, RefinementExhausted, realize_unit
from segrec.reduction import build_polyline_reduction, build_unit_reduction
from segrec.render import draw
from segrec.search import NotFound, SearchConfig, certify, search_unit
from segrec.structure import DegenerateRealization, check_lemmas
from segrec.utilities import dump_json, to_rational

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

LOG_LEVELS = {"off": None, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(ValueError):
    """Raised for invalid command line input found after argument parsing."""


def configure_logging(environ: Optional[Dict[str, str]] = None) -> None:
    """Set the package log level from ``SEGREC_LOG``."""
    environ = os.environ if environ is None else environ
    value = environ.get("SEGREC_LOG", "off").strip().lower()
    if value not in LOG_LEVELS:
        raise UsageError(
            "SEGREC_LOG must be one of {}, got {!r}.".format(", ".join(LOG_LEVELS), value)
        )
    root = logging.getLogger("segrec")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    level = LOG_LEVELS[value]
    if level is None:
        root.addHandler(logging.NullHandler())
        root.setLevel(logging.CRITICAL + 1)
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _check_paths(args: argparse.Namespace) -> None:
    inputs = [getattr(args, name, None) for name in ("wiring", "lines", "graph", "realization", "other")]
    if sum(1 for p in inputs if p == "-") > 1:
        raise UsageError("At most one input can be read from standard input.")
    for path in inputs:
        if path not in (None, "-") and not os.path.isfile(path):
            raise UsageError("Input file {!r} does not exist.".format(path))
    out = getattr(args, "output", "-")
    parent = os.path.dirname(os.path.abspath(out)) if out != "-" else None
    if parent and not os.path.isdir(parent):
        raise UsageError("Output directory {!r} does not exist.".format(parent))


def _params(args: argparse.Namespace) -> RealizerParams:
    return RealizerParams(
        a=to_rational(args.a), rho=to_rational(args.rho), eta=to_rational(args.eta), max_refine=args.max_refine
    )


# arr


def cmd_arr_validate(args) -> int:
    violations = validate_wiring(wiring_from_dict(load_json(_read(args.wiring))))
    for v in violations:
        print(v, file=sys.stderr)
    _write(args.output, dump_json({"valid": not violations, "violations": violations}))
    return EXIT_CHECK_FAILED if violations else EXIT_OK


def cmd_arr_from_lines(args) -> int:
    w = wiring_from_lines(lines_from_dict(load_json(_read(args.lines))))
    _write(args.output, dump_json(wiring_to_dict(w)))
    return EXIT_OK


def cmd_arr_catalog(args) -> int:
    if args.name is None:
        _write(args.output, "\n".join(catalog_names()) + "\n")
    else:
        _write(args.output, dump_json(lines_to_dict(catalog(args.name))))
    return EXIT_OK


def cmd_arr_squeeze(args) -> int:
    squeezed = squeeze(lines_from_dict(load_json(_read(args.lines))), to_rational(args.a))
    _write(args.output, dump_json(lines_to_dict(squeezed)))
    return EXIT_OK


def cmd_arr_equiv(args) -> int:
    w1 = wiring_from_dict(load_json(_read(args.wiring)))
    w2 = wiring_from_dict(load_json(_read(args.other)))
    same = equivalent(w1, w2, allow_reflection=args.reflection)
    _write(args.output, dump_json({"equivalent": same}))
    return EXIT_OK if same else EXIT_CHECK_FAILED


def cmd_arr_random(args) -> int:
    _write(args.output, dump_json(lines_to_dict(random_arrangement(args.n, seed=args.seed))))
    return EXIT_OK


# reduce / realize


def cmd_reduce(args) -> int:
    w = wiring_from_dict(load_json(_read(args.wiring)))
    art = build_unit_reduction(w) if args.variant == "unit" else build_polyline_reduction(w, args.k)
    logger.info("Built %s reduction with %d vertices and %d edges.", art.kind, len(art.graph), art.graph.number_of_edges())
    _write(args.output, dump_json(artifact_to_dict(art)))
    return EXIT_OK


def cmd_realize(args) -> int:
    lines = lines_from_dict(load_json(_read(args.lines)))
    w = wiring_from_dict(load_json(_read(args.wiring))) if args.wiring else wiring_from_lines(lines)
    params = _params(args)
    if args.variant == "unit":
        realization = realize_unit(lines, build_unit_reduction(w), params)
    else:
        realization = realize_polyline(lines, build_polyline_reduction(w, args.k), args.k, params)
    _write(args.output, dump_json(realization_to_dict(realization)))
    return EXIT_OK


# verify / check


def cmd_verify(args) -> int:
    data = load_json(_read(args.graph))
    graph = artifact_from_dict(data).graph if is_artifact(data) else graph_from_dict(data)
    realization = realization_from_dict(load_json(_read(args.realization)))
    ok, diff = graphs_equal(graph, intersection_graph(realization.objects))
    if not ok:
        print(diff.report(), file=sys.stderr)
    _write(args.output, dump_json({"equal": ok, "diff": diff.to_dict()}))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_check_lemmas(args) -> int:
    data = load_json(_read(args.graph))
    if not is_artifact(data):
        raise UsageError("check lemmas needs a reduction document with roles and cycleOrder.")
    artifact = artifact_from_dict(data)
    realization = realization_from_dict(load_json(_read(args.realization)))
    report = check_lemmas(artifact, realization.objects)
    for line in report.details:
        print(line, file=sys.stderr)
    _write(args.output, dump_json(report.to_dict()))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# encode / search / render


def cmd_encode(args) -> int:
    if args.variant == "stretch":
        system = encode_stretchability(wiring_from_dict(load_json(_read(args.wiring))))
    else:
        data = load_json(_read(args.graph))
        graph = artifact_from_dict(data).graph if is_artifact(data) else graph_from_dict(data)
        system = encode_unit(graph) if args.variant == "unit" else encode_polyline(graph, args.k)
    _write(args.output, emit_smtlib(system) if args.format == "smtlib" else emit_json(system))
    return EXIT_OK


def cmd_search(args) -> int:
    data = load_json(_read(args.graph))
    graph = artifact_from_dict(data).graph if is_artifact(data) else graph_from_dict(data)
    cfg = SearchConfig(restarts=args.restarts, iterations=args.iters, margin=args.margin, seed=args.seed)
    verdict = certify(graph, search_unit(graph, cfg))
    _write(args.output, dump_json(realization_to_dict(verdict.realization)))
    return EXIT_OK


def cmd_render(args) -> int:
    realization = realization_from_dict(load_json(_read(args.realization)))
    _write(args.output, draw(realization, scale=args.scale, title=args.title).render())
    return EXIT_OK


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", default="-", help="Output path, '-' for standard output.")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", default="1/20", help="Squeeze bound, at most 1/20.")
    p.add_argument("--rho", default="1/1000", help="Probe tube spacing.")
    p.add_argument("--eta", default="1/100", help="Connector clearance.")
    p.add_argument("--max-refine", type=int, default=12, help="Place-and-verify rounds.")


def _variant(sub, name: str, func: Callable, help: str, polyline: bool = False) -> argparse.ArgumentParser:
    p = sub.add_parser(name, help=help)
    p.set_defaults(func=func, variant=name)
    if polyline:
        p.add_argument("-k", type=int, required=True, help="Bends per polyline.")
    _add_output(p)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segrec",
        description="Reductions, realizations and encodings for segment intersection graphs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    arr = commands.add_parser("arr", help="Pseudoline arrangements.").add_subparsers(dest="action", required=True)
    p = _variant(arr, "validate", cmd_arr_validate, "Check that a wiring diagram is simple.")
    p.add_argument("--wiring", default="-")
    p = _variant(arr, "from-lines", cmd_arr_from_lines, "Wiring diagram of a line arrangement.")
    p.add_argument("--lines", default="-")
    p = _variant(arr, "catalog", cmd_arr_catalog, "Catalog arrangements; lists names without an argument.")
    p.add_argument("name", nargs="?")
    p = _variant(arr, "squeeze", cmd_arr_squeeze, "Squeeze a line arrangement into (-a, a)^2.")
    p.add_argument("--lines", default="-")
    p.add_argument("--a", default="1/20")
    p = _variant(arr, "equiv", cmd_arr_equiv, "Compare crossing orders of two wiring diagrams.")
    p.add_argument("wiring")
    p.add_argument("other")
    p.add_argument("--reflection", action="store_true", help="Also accept the reflected diagram.")
    p = _variant(arr, "random", cmd_arr_random, "Random simple line arrangement.")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=42)

    reduce_ = commands.add_parser("reduce", help="Reduction graphs.").add_subparsers(dest="variant", required=True)
    for name, polyline in (("unit", False), ("polyline", True)):
        p = _variant(reduce_, name, cmd_reduce, "Build the {} reduction.".format(name), polyline)
        p.add_argument("--wiring", default="-")

    realize = commands.add_parser("realize", help="Constructive realizations.").add_subparsers(
        dest="variant", required=True
    )
    for name, polyline in (("unit", False), ("polyline", True)):
        p = _variant(realize, name, cmd_realize, "Realize the {} reduction.".format(name), polyline)
        p.add_argument("--lines", default="-")
        p.add_argument("--wiring", default=None, help="Defaults to the wiring of --lines.")
        _add_params(p)

    p = commands.add_parser("verify", help="Compare a realization with a graph exactly.")
    p.set_defaults(func=cmd_verify)
    p.add_argument("--graph", required=True)
    p.add_argument("--realization", default="-")
    _add_output(p)

    check = commands.add_parser("check", help="Structure checks.").add_subparsers(dest="action", required=True)
    p = _variant(check, "lemmas", cmd_check_lemmas, "Order lemma, trace partition and cell containment.")
    p.add_argument("--graph", required=True)
    p.add_argument("--realization", default="-")

    encode = commands.add_parser("encode", help="Polynomial systems.").add_subparsers(dest="variant", required=True)
    for name, polyline in (("unit", False), ("polyline", True)):
        p = _variant(encode, name, cmd_encode, "Encode {} recognition.".format(name), polyline)
        p.add_argument("--graph", default="-")
        p.add_argument("--format", choices=("smtlib", "json"), default="smtlib")
    p = _variant(encode, "stretch", cmd_encode, "Encode stretchability.")
    p.add_argument("--wiring", default="-")
    p.add_argument("--format", choices=("smtlib", "json"), default="smtlib")

    search = commands.add_parser("search", help="Numerical search.").add_subparsers(dest="variant", required=True)
    p = _variant(search, "unit", cmd_search, "Search a unit segment realization.")
    p.add_argument("--graph", default="-")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--iters", type=int, default=5000)
    p.add_argument("--margin", type=float, default=1e-2)

    p = commands.add_parser("render", help="Draw a realization as SVG.")
    p.set_defaults(func=cmd_render)
    p.add_argument("--realization", default="-")
    p.add_argument("--scale", type=int, default=400)
    p.add_argument("--title", default=None)
    _add_output(p)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging()
        _check_paths(args)
        return args.func(args)
    except (RefinementExhausted, DegenerateRealization, NotFound) as e:
        print("segrec: {}".format(e), file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, TypeError, OSError) as e:
        print("segrec: {}".format(e), file=sys.stderr)
        return EXIT_USAGE

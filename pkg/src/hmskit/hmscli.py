"""Command line front end.

Subcommands: grade, generators, verify, transpose, gmax, mutate.  Reports are
deterministic JSON on stdout; timings and cache notes go to stderr so that the
same input always produces byte-identical report text.
"""

import argparse
import json
import re
import sys
import time

from . import __version__
from .cache import TableCache, request_key, resolve_cache_dir
from .exactmat import Poly
from .grading import GradingError, m_grading
from .matfac import (
    MFError,
    ResourceLimitError,
    element_to_json,
    ext_table,
    ext_table_to_json,
    generator_collection,
    koszul_mf,
    mf_from_pair,
    mf_to_json,
    shift_mf,
    translate_mf,
)
from .polyforms import PolyFormError, build, parse_model
from .polyforms import transpose as transpose_model
from .quivercat import (
    QuiverError,
    coxeter_polynomial,
    dynkin_quiver,
    euler_matrix,
    mutate_collection,
    tensor_model,
)
from .symmetry import (
    SymmetryError,
    format_element,
    gmax,
    is_sl,
    j_element,
    krawitz_transpose,
    parse_group_string,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_RESOURCE = 4

# stated in every verification report: what a "match" does and does not claim
LIMITATIONS = (
    "tables compare hom dimensions over a finite shift window between fixed "
    "generator collections; a match is a dimension-level witness, not a proof "
    "of the underlying equivalence, and collections are compared without "
    "passing to idempotent completion"
)

_EXPR_RE = re.compile(r"^[AD]\d+t?(\+[AD]\d+t?)*$")


class CLIError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _parse_matrix(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CLIError(EXIT_PARSE, f"cannot parse matrix: {exc}") from None
    if (
        not isinstance(data, list)
        or not data
        or not all(isinstance(row, list) for row in data)
    ):
        raise CLIError(EXIT_PARSE, "matrix must be a JSON list of rows")
    out = []
    for row in data:
        for entry in row:
            if not isinstance(entry, int) or isinstance(entry, bool):
                raise CLIError(EXIT_PARSE, "matrix entries must be integers")
        out.append([int(e) for e in row])
    return out


def _build_model(text):
    """Atom expression like 'A2+D4t', or a JSON exponent matrix."""
    text = text.strip()
    if text.startswith("["):
        a = _parse_matrix(text)
        try:
            return build(a), {"matrix": a}
        except PolyFormError as exc:
            # well-formed JSON but not a usable model (singular, wrong shape)
            raise CLIError(EXIT_UNSUPPORTED, str(exc)) from None
    expr = re.sub(r"\s+", "", text)
    if not _EXPR_RE.match(expr):
        raise CLIError(EXIT_PARSE, f"cannot parse model expression: {text!r}")
    try:
        return parse_model(expr), {"model": expr}
    except PolyFormError as exc:
        raise CLIError(EXIT_UNSUPPORTED, str(exc)) from None


def _emit(report, json_path):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _diag(args, message):
    if not getattr(args, "quiet", False):
        print(f"hmskit: {message}", file=sys.stderr)


def _grading_json(ctx):
    return {
        "rank": ctx.free_rank,
        "torsion": list(ctx.torsion),
        "deg": [element_to_json(d) for d in ctx.deg_x],
        "degc": element_to_json(ctx.deg_c),
    }


# ----------------------------------------------------------------- grade


def cmd_grade(args):
    p, desc = _build_model(args.input)
    report = {"schema": 1, "version": __version__, "input": desc}
    report.update(_grading_json(p.ctx))
    _emit(report, args.json)
    return EXIT_OK


# ------------------------------------------------------------ generators


def cmd_generators(args):
    p, desc = _build_model(args.input)
    col = generator_collection(p)
    report = {
        "schema": 1,
        "version": __version__,
        "input": desc,
        "count": len(col),
        "objects": [{"label": label, **mf_to_json(k)} for label, k in col],
    }
    _emit(report, args.json)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _quotient_graded_collection(matrix, group_text):
    """Generator collection of a two-variable model in a quotient grading.

    The intrinsic route refuses the orientation x^{n-1} + x*y^2; this route
    exists to grade it by the characters of an explicit symmetry group
    instead, using the same recipe: the two rank-one cuts plus translated
    residue-field objects.
    """
    n = len(matrix)
    try:
        group = parse_group_string(group_text, n)
    except SymmetryError as exc:
        raise CLIError(EXIT_PARSE, str(exc)) from None
    p = build(matrix)
    if len(p.atoms) != 1 or p.atoms[0].kind != "D" or n != 2:
        raise CLIError(
            EXIT_UNSUPPORTED,
            "matrix-mode verification supports a single two-variable model "
            "of the form x^(n-1) + x*y^2",
        )
    rank = p.atoms[0].param
    ctx = m_grading(matrix, group)
    w = p.poly
    x = Poly.variable(2, 0)
    cof = Poly.monomial(2, (rank - 2, 0)) + Poly.monomial(2, (0, 2))
    x1 = mf_from_pair(ctx, w, x, cof)
    x2 = mf_from_pair(ctx, w, cof, x)
    cof_label = cof.format().replace(" ", "")
    stab = translate_mf(koszul_mf(p, ctx=ctx))
    col = [("R/(x)", x1), (f"R/({cof_label})", x2)]
    for t in range(rank - 2):
        col.append((f"R/m({-t})", shift_mf(stab, ctx.element(-t, (0,) * len(ctx.torsion)))))
    desc = {
        "matrix": matrix,
        "group": [format_element(g) for g in group.elements],
    }
    return col, desc, [dynkin_quiver(f"D{rank}")]


def cmd_verify(args):
    if (args.input is None) == (args.matrix is None):
        raise CLIError(EXIT_PARSE, "verify needs a model expression or --matrix, not both")
    if args.window < 0:
        raise CLIError(EXIT_PARSE, "--window must be non-negative")
    window = (-args.window, args.window)
    threads = max(1, args.threads)

    if args.matrix is not None:
        if args.group is None:
            raise CLIError(EXIT_PARSE, "verify --matrix also needs --group")
        col, desc, quivers = _quotient_graded_collection(
            _parse_matrix(args.matrix), args.group
        )
    else:
        p, desc = _build_model(args.input)
        col = generator_collection(p)
        quivers = [dynkin_quiver(atom) for atom in p.atoms]

    model = tensor_model(quivers).restrict_window(args.window)
    aside_objects = ["|".join(obj) for obj in model.objects]
    if len(aside_objects) != len(col):
        raise CLIError(EXIT_UNSUPPORTED, "generator and vertex counts disagree")
    aside = {
        "objects": aside_objects,
        "window": list(window),
        "entries": [list(e) for e in model.entries()],
    }

    request = {
        "command": "ext_table",
        "version": __version__,
        "input": desc,
        "window": list(window),
    }
    key = request_key(request)
    cache = TableCache(resolve_cache_dir(args.cache_dir))
    started = time.perf_counter()
    payload = cache.load(key)
    if payload is None:
        tab = ext_table(col, window, threads=threads)
        payload = ext_table_to_json(tab)
        cache.store(key, payload)
        _diag(args, f"b-side table computed in {time.perf_counter() - started:.2f}s (key {key[:12]})")
    else:
        _diag(args, f"b-side table from cache (key {key[:12]})")

    bdims = {(i, j, k): d for i, j, k, d in payload["entries"]}
    adims = {(i, j, k): d for i, j, k, d in model.entries()}
    first = None
    for i in range(len(col)):
        for j in range(len(col)):
            for k in range(window[0], window[1] + 1):
                b = bdims.get((i, j, k), 0)
                a = adims.get((i, j, k), 0)
                if b != a:
                    first = [i, j, k, b, a]
                    break
            if first:
                break
        if first:
            break

    report = {
        "schema": 1,
        "version": __version__,
        "input": desc,
        "window": list(window),
        "bside": payload,
        "aside": aside,
        "object_assignment": {
            label: aside_objects[idx] for idx, (label, _) in enumerate(col)
        },
        "verdict": "match" if first is None else "mismatch",
        "first_difference": first,
        "limitations": LIMITATIONS,
    }
    _emit(report, args.json)
    return EXIT_OK if first is None else EXIT_MISMATCH


# ------------------------------------------------------------- transpose


def cmd_transpose(args):
    a = _parse_matrix(args.matrix)
    n = len(a)
    try:
        group = parse_group_string(args.group, n)
    except SymmetryError as exc:
        raise CLIError(EXIT_PARSE, str(exc)) from None
    p = build(a)
    gstar = krawitz_transpose(a, group)
    pt = transpose_model(p)
    try:
        grading = _grading_json(m_grading(pt.matrix, gstar))
    except GradingError:
        # the transposed pair only carries this grading when the input
        # group lies in the special linear part
        grading = None
    report = {
        "schema": 1,
        "version": __version__,
        "input": {
            "matrix": a,
            "poly": p.poly.format(),
            "group": [format_element(g) for g in group.elements],
            "group_order": len(group),
            "is_sl": is_sl(group.elements),
        },
        "transpose": {
            "matrix": pt.matrix,
            "poly": pt.poly.format(),
            "group": [format_element(g) for g in gstar.elements],
            "group_order": len(gstar),
        },
        "m_grading": grading,
    }
    _emit(report, args.json)
    return EXIT_OK


# ------------------------------------------------------------------ gmax


def cmd_gmax(args):
    p, desc = _build_model(args.input)
    g = gmax(p.matrix)
    _, _, j = j_element(p.matrix)
    report = {
        "schema": 1,
        "version": __version__,
        "input": desc,
        "order": len(g),
        "elements": [format_element(e) for e in g.elements],
        "j": format_element(j),
        "is_sl": is_sl(g.elements),
    }
    _emit(report, args.json)
    return EXIT_OK


# ---------------------------------------------------------------- mutate


def cmd_mutate(args):
    p, desc = _build_model(args.input)
    if len(p.atoms) != 1:
        raise CLIError(EXIT_UNSUPPORTED, "mutations act on a single atom's collection")
    q = dynkin_quiver(p.atoms[0])
    before = euler_matrix(q)
    after = before
    for pos in args.positions:
        after = mutate_collection(after, pos, args.direction)
    cox_before = coxeter_polynomial(before)
    cox_after = coxeter_polynomial(after)
    report = {
        "schema": 1,
        "version": __version__,
        "input": {**desc, "positions": list(args.positions), "direction": args.direction},
        "euler_before": before,
        "euler_after": after,
        "coxeter_before": cox_before,
        "coxeter_after": cox_after,
        "coxeter_invariant": cox_before == cox_after,
    }
    _emit(report, args.json)
    return EXIT_OK


# ------------------------------------------------------------------ main


def _add_common(sp):
    sp.add_argument("--json", metavar="PATH", default=None, help="also write the report to PATH")
    sp.add_argument("--quiet", action="store_true", help="suppress stderr diagnostics")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="hmskit",
        description="Exact verification of hom-dimension tables for graded "
        "matrix factorizations against quiver models.",
    )
    ap.add_argument("--version", action="version", version=f"hmskit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("grade", help="grading group of a model")
    g.add_argument("input", help="atom expression (e.g. D4t, A2+A2) or JSON exponent matrix")
    _add_common(g)
    g.set_defaults(func=cmd_grade)

    gen = sub.add_parser("generators", help="serialized generator collection")
    gen.add_argument("input", help="atom expression or JSON exponent matrix")
    _add_common(gen)
    gen.set_defaults(func=cmd_generators)

    v = sub.add_parser("verify", help="compare both hom tables over a shift window")
    v.add_argument("input", nargs="?", default=None, help="atom expression")
    v.add_argument("--matrix", metavar="JSON", default=None, help="exponent matrix (with --group)")
    v.add_argument("--group", metavar="GENS", default=None, help="symmetry group generators, e.g. '1/3,1/3'")
    v.add_argument("--window", type=int, default=4, help="compare |k| <= WINDOW (default 4)")
    v.add_argument("--threads", type=int, default=1, help="parallel hom computations")
    v.add_argument("--cache-dir", metavar="DIR", default=None, help="table cache directory")
    _add_common(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("transpose", help="transposed polynomial and dual group")
    t.add_argument("matrix", help="JSON exponent matrix")
    t.add_argument("--group", metavar="GENS", required=True, help="symmetry group generators")
    _add_common(t)
    t.set_defaults(func=cmd_transpose)

    gm = sub.add_parser("gmax", help="full diagonal symmetry group")
    gm.add_argument("input", help="atom expression or JSON exponent matrix")
    _add_common(gm)
    gm.set_defaults(func=cmd_gmax)

    m = sub.add_parser("mutate", help="braid mutations of an Euler matrix")
    m.add_argument("input", help="single-atom expression, e.g. A5 or D5")
    m.add_argument("positions", nargs="+", type=int, help="1-based adjacent slot positions")
    m.add_argument("--direction", choices=("left", "right"), default="right")
    _add_common(m)
    m.set_defaults(func=cmd_mutate)

    return ap


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"hmskit: error: {exc}", file=sys.stderr)
        return exc.code
    except ResourceLimitError as exc:
        print(f"hmskit: error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MFError, GradingError, QuiverError, SymmetryError, PolyFormError) as exc:
        print(f"hmskit: error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())

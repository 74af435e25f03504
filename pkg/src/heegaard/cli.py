"""Command-line interface: diagram files, dispatch, machine-readable reports.

Diagram text format::

    # comments run to end of line
    genus 2
    minus: 1 0 0 0 ; 0 1 0 0
    plus:  0 0 1 0 ; 0 0 0 1

Line 1 is ``genus <g>``; then ``minus:`` followed by g rows of 2g integers
separated by ``;``, then ``plus:`` with the same shape.  Whitespace and
newlines between tokens are free.

Exit codes: 0 on a successful computation (whatever the verdict), 1 on
input or usage errors, 2 when the hyperbolicity search bound is exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import diagram as diagrams
from .diagram import HeegaardDiagramH1
from .exactalg import IntMatrix
from .homology import first_homology, intersection_matrix
from .linkform import (BoundExceededError, diagonalize, hdu_verdict,
                       linking_form)
from .qsearch import question_q_search, ub0_scan
from .symplectic import Lagrangian, SymplecticMap

DEFAULT_BOUND = 10000


class DiagramTextError(ValueError):
    """Malformed diagram text; carries the offending line and column."""

    def __init__(self, message, line, column):
        super().__init__("line %d, column %d: %s" % (line, column, message))
        self.line = line
        self.column = column


_TOKEN = re.compile(r"[-+]?\d+|[A-Za-z][A-Za-z-]*:?|;|\S")


def _tokenize(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for m in _TOKEN.finditer(line):
            tokens.append((m.group(), lineno, m.start() + 1))
    return tokens


class _TokenCursor:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, description):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else ("", 1, 1)
            raise DiagramTextError("expected %s, found end of input" % description,
                                   last[1], last[2])
        self.pos += 1
        return tok

    def expect_word(self, word):
        tok = self.take("'%s'" % word)
        if tok[0] != word:
            raise DiagramTextError("expected '%s', found '%s'" % (word, tok[0]),
                                   tok[1], tok[2])

    def expect_int(self, description):
        tok = self.take(description)
        try:
            return int(tok[0])
        except ValueError:
            raise DiagramTextError("expected %s, found '%s'" % (description, tok[0]),
                                   tok[1], tok[2]) from None


def _parse_rows(cursor, side, genus):
    rows = []
    for r in range(genus):
        if r > 0:
            tok = cursor.take("';' between %s rows" % side)
            if tok[0] != ";":
                raise DiagramTextError(
                    "expected ';' between %s rows, found '%s'" % (side, tok[0]),
                    tok[1], tok[2])
        row = tuple(cursor.expect_int("integer entry of %s row %d" % (side, r + 1))
                    for _ in range(2 * genus))
        rows.append(row)
    return tuple(rows)


def parse_diagram(text: str) -> HeegaardDiagramH1:
    """Parse and fully validate diagram text.

    Syntax problems raise DiagramTextError with position information;
    rows that fail a Lagrangian invariant raise ValueError naming the
    side, the failed invariant, and the row pair involved.
    """
    cursor = _TokenCursor(text)
    cursor.expect_word("genus")
    genus = cursor.expect_int("genus value")
    if genus < 0:
        raise ValueError("genus must be nonnegative, got %d" % genus)
    cursor.expect_word("minus:")
    minus_rows = _parse_rows(cursor, "minus", genus)
    cursor.expect_word("plus:")
    plus_rows = _parse_rows(cursor, "plus", genus)
    extra = cursor.peek()
    if extra is not None:
        raise DiagramTextError("unexpected trailing token '%s'" % extra[0],
                               extra[1], extra[2])
    try:
        minus = Lagrangian(genus, minus_rows)
    except ValueError as e:
        raise ValueError("minus system: %s" % e) from None
    try:
        plus = Lagrangian(genus, plus_rows)
    except ValueError as e:
        raise ValueError("plus system: %s" % e) from None
    return HeegaardDiagramH1(genus, minus, plus)


def serialize_diagram(d: HeegaardDiagramH1) -> str:
    """Canonical diagram text; parse_diagram(serialize_diagram(d)) == d."""
    def side(rows):
        return " ; ".join(" ".join(str(v) for v in row) for row in rows)

    return "genus %d\nminus: %s\nplus: %s\n" % (
        d.genus, side(d.minus.rows), side(d.plus.rows))


# ---------------------------------------------------------------------------
# report assembly


def _frac(x: Fraction) -> str:
    return "%d/%d" % (x.numerator, x.denominator)


def _split_payload(split, want_classes=True):
    if split is None:
        return None

    def side(coeffs, orders, classes):
        out = []
        for i in range(len(coeffs)):
            entry = {
                "coefficients": list(coeffs[i]),
                "order": orders[i],
            }
            if want_classes and classes is not None:
                entry["representative"] = list(classes[i].representative)
            out.append(entry)
        return out

    return {
        "half_order": split.half_order,
        "a": side(split.a_coefficients, split.a_orders, split.generators_a),
        "b": side(split.b_coefficients, split.b_orders, split.generators_b),
    }


def obstruction_report(d: HeegaardDiagramH1, description: str,
                       bound: int = DEFAULT_BOUND, threads: int = 1) -> dict:
    """The consolidated verdict record, with a stable key order."""
    verdict = hdu_verdict(d, bound=bound, threads=threads)
    lf = verdict.form
    return {
        "input": description,
        "genus": d.genus,
        "homology": {
            "free_rank": verdict.homology.free_rank,
            "invariant_factors": list(verdict.homology.invariant_factors),
            "group": str(verdict.homology),
        },
        "torsion_order": verdict.torsion_order,
        "torsion_square": verdict.square_torsion,
        "linking_form": {
            "orders": list(lf.orders),
            "gram": [[_frac(x) for x in row] for row in lf.gram],
        },
        "z2_homology_sphere": verdict.is_z2_homology_sphere,
        "hyperbolic": verdict.hyperbolic,
        "split": _split_payload(verdict.split),
        "hdu_diagram_exists": verdict.hdu_diagram_exists,
        "verdict": "PASSES_HANTZSCHE" if verdict.hyperbolic else "OBSTRUCTED",
    }


def _render_text(payload, indent=0):
    lines = []
    pad = "  " * indent
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)) and value:
                lines.append("%s%s:" % (pad, key))
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, key, _scalar(value)))
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append("%s-" % pad)
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append("%s- %s" % (pad, _scalar(value)))
    else:
        lines.append("%s%s" % (pad, _scalar(payload)))
    return lines


def _scalar(value):
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, list):
        return "[]"
    if isinstance(value, dict):
        return "{}"
    return str(value)


def _emit(payload, fmt):
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(_render_text(payload)))


# ---------------------------------------------------------------------------
# argument plumbing


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def _read_source(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _add_diagram_arguments(sub):
    sub.add_argument("path", nargs="?",
                     help="diagram file ('-' for standard input)")
    sub.add_argument("--lens", nargs=2, type=int, metavar=("P", "Q"),
                     help="use the lens-space diagram L(P, Q)")
    sub.add_argument("--fixture-b", action="store_true",
                     help="use the genus-3 torus-bundle fixture")
    sub.add_argument("--connect-mirror", action="store_true",
                     help="replace the diagram by its sum with its mirror")


def _load_diagram(args):
    sources = [args.path is not None, args.lens is not None, args.fixture_b]
    if sum(sources) != 1:
        raise CliUsageError(
            "provide exactly one diagram source: a file path, --lens, or --fixture-b")
    if args.lens is not None:
        p, q = args.lens
        d = diagrams.lens(p, q)
        description = "lens(%d,%d)" % (p, q)
    elif args.fixture_b:
        d = diagrams.b_fixture()
        description = "fixture-b"
    else:
        d = parse_diagram(_read_source(args.path))
        description = "stdin" if args.path == "-" else args.path
    if args.connect_mirror:
        d = diagrams.connected_sum(d, diagrams.mirror(d))
        description = "%s # mirror(%s)" % (description, description)
    return d, description


_NAMED_MAPS = {
    "identity": lambda: SymplecticMap.identity(1),
    "rotation": SymplecticMap.rotation,
    "shear": SymplecticMap.shear,
}


def _parse_theta(spec: str, genus) -> SymplecticMap:
    if spec in _NAMED_MAPS:
        f = _NAMED_MAPS[spec]()
    else:
        try:
            rows = json.loads(spec)
            f = SymplecticMap(len(rows) // 2, IntMatrix(rows))
        except (ValueError, TypeError) as e:
            raise CliUsageError(
                "--theta expects one of %s or a JSON matrix: %s"
                % (sorted(_NAMED_MAPS), e)) from None
    if genus is not None:
        if genus < f.genus:
            raise CliUsageError("--genus %d is below the map's genus %d"
                                % (genus, f.genus))
        f = f.embed(genus)
    return f


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(args):
    d, description = _load_diagram(args)
    print("ok: %s is a valid genus-%d diagram" % (description, d.genus))
    return 0


def _cmd_homology(args):
    d, description = _load_diagram(args)
    group = first_homology(d)
    payload = {
        "input": description,
        "genus": d.genus,
        "intersection_matrix": [list(r) for r in intersection_matrix(d).entries]
        if d.genus else [],
        "homology": {
            "free_rank": group.free_rank,
            "invariant_factors": list(group.invariant_factors),
            "group": str(group),
        },
        "torsion_order": group.torsion_order,
    }
    _emit(payload, args.format)
    return 0


def _cmd_linkform(args):
    d, description = _load_diagram(args)
    lf = linking_form(d)
    payload = {
        "input": description,
        "orders": list(lf.orders),
        "gram": [[_frac(x) for x in row] for row in lf.gram],
        "generators": [
            {"representative": list(g.representative), "order": g.order}
            for g in lf.generators
        ],
    }
    _emit(payload, args.format)
    return 0


def _cmd_diagonalize(args):
    d, description = _load_diagram(args)
    pres = diagonalize(d)
    payload = {
        "input": description,
        "boundary_divisors": list(pres.divisors),
        "pairs": [{"p": p, "q": q} for p, q in pres.pairs],
        "diagonal": pres.is_diagonal,
        "residual": {
            "orders": list(pres.residual_orders),
            "gram": [[_frac(x) for x in row] for row in pres.residual_gram],
        } if pres.residual_orders else None,
    }
    _emit(payload, args.format)
    return 0


def _cmd_report(args):
    d, description = _load_diagram(args)
    payload = obstruction_report(d, description, bound=args.bound,
                                 threads=args.threads)
    _emit(payload, args.format)
    return 0


def _cmd_lens(args):
    sys.stdout.write(serialize_diagram(diagrams.lens(args.p, args.q)))
    return 0


def _cmd_fixture_b(args):
    sys.stdout.write(serialize_diagram(diagrams.b_fixture()))
    return 0


def _cmd_mirror(args):
    d, _ = _load_diagram(args)
    sys.stdout.write(serialize_diagram(diagrams.mirror(d)))
    return 0


def _cmd_stabilize(args):
    d, _ = _load_diagram(args)
    if args.bar is not None:
        d = diagrams.bar_stabilize(d, args.bar)
    else:
        d = diagrams.hat_stabilize(d, args.hat)
    sys.stdout.write(serialize_diagram(d))
    return 0


def _cmd_consum(args):
    if args.first == "-" and args.second == "-":
        raise CliUsageError("at most one summand may come from standard input")
    d1 = parse_diagram(_read_source(args.first))
    d2 = parse_diagram(_read_source(args.second))
    sys.stdout.write(serialize_diagram(diagrams.connected_sum(d1, d2)))
    return 0


def _cmd_search_q(args):
    if args.entries is not None and args.bound is not None:
        raise CliUsageError("give the entry bound once: --entries or --bound")
    entries = args.entries if args.entries is not None else args.bound
    if entries is None:
        raise CliUsageError("search-q needs an entry bound (--entries N)")
    theta = _parse_theta(args.theta, args.genus)
    result = question_q_search(theta, entries, threads=args.threads)
    payload = {
        "theta": [list(r) for r in theta.matrix.entries],
        "genus": theta.genus,
        "entry_bound": entries,
        "status": result.status,
        "witness": [list(r) for r in result.witness.rows]
        if result.witness else None,
        "torsion": result.torsion,
        "examined": result.examined,
    }
    _emit(payload, args.format)
    return 0


def _cmd_ub0(args):
    theta = _parse_theta(args.theta, args.genus)
    scan = ub0_scan(theta, args.bound if args.bound is not None else 50)
    payload = {
        "theta": [list(r) for r in theta.matrix.entries],
        "bound": scan.bound,
        "square_torsion": [{"a": a, "b": b, "torsion": t}
                           for a, b, t in scan.squares],
        "zero_torsion": [{"a": a, "b": b} for a, b in scan.zero_torsion],
        "examined": scan.examined,
    }
    _emit(payload, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heegaard",
                     description="Homological invariants and embedding "
                                 "obstructions of Heegaard diagrams.")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    def computing(sub):
        sub.add_argument("--format", choices=("json", "text"), default="json")

    sub = subs.add_parser("validate", help="parse and check a diagram")
    _add_diagram_arguments(sub)
    sub.set_defaults(func=_cmd_validate)

    sub = subs.add_parser("homology", help="first homology of the manifold")
    _add_diagram_arguments(sub)
    computing(sub)
    sub.set_defaults(func=_cmd_homology)

    sub = subs.add_parser("linkform", help="torsion linking form")
    _add_diagram_arguments(sub)
    computing(sub)
    sub.set_defaults(func=_cmd_linkform)

    sub = subs.add_parser("diagonalize", help="diagonal presentation of the form")
    _add_diagram_arguments(sub)
    computing(sub)
    sub.set_defaults(func=_cmd_diagonalize)

    sub = subs.add_parser("report", help="full embedding-obstruction report")
    _add_diagram_arguments(sub)
    computing(sub)
    sub.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                     help="torsion-order limit for the hyperbolicity search")
    sub.add_argument("--threads", type=int, default=1)
    sub.set_defaults(func=_cmd_report)

    sub = subs.add_parser("lens", help="emit the lens-space diagram L(p, q)")
    sub.add_argument("p", type=int)
    sub.add_argument("q", type=int)
    sub.set_defaults(func=_cmd_lens)

    sub = subs.add_parser("fixture-b", help="emit the torus-bundle fixture")
    sub.set_defaults(func=_cmd_fixture_b)

    sub = subs.add_parser("mirror", help="emit the mirror diagram")
    _add_diagram_arguments(sub)
    sub.set_defaults(func=_cmd_mirror)

    sub = subs.add_parser("stabilize", help="emit a stabilized diagram")
    _add_diagram_arguments(sub)
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--bar", type=int, metavar="K",
                       help="bar-stabilize: same manifold, genus + K")
    group.add_argument("--hat", type=int, metavar="K",
                       help="hat-stabilize: add K S^1 x S^2 summands")
    sub.set_defaults(func=_cmd_stabilize)

    sub = subs.add_parser("consum", help="emit the connected sum of two diagrams")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.set_defaults(func=_cmd_consum)

    sub = subs.add_parser("search-q",
                          help="search for a Lagrangian with non-square torsion")
    sub.add_argument("--theta", required=True,
                     help="identity | rotation | shear | JSON matrix")
    sub.add_argument("--genus", type=int, default=None,
                     help="embed the map at this genus (identity padding)")
    sub.add_argument("--entries", type=int, default=None,
                     help="Lagrangian entry bound N")
    sub.add_argument("--bound", type=int, default=None,
                     help="alias for --entries")
    sub.add_argument("--threads", type=int, default=1)
    computing(sub)
    sub.set_defaults(func=_cmd_search_q)

    sub = subs.add_parser("ub0", help="genus-1 square-torsion scan")
    sub.add_argument("--theta", required=True)
    sub.add_argument("--genus", type=int, default=None)
    sub.add_argument("--bound", type=int, default=None,
                     help="scan bound on |a|, |b| (default 50)")
    computing(sub)
    sub.set_defaults(func=_cmd_ub0)

    return parser


def main(argv=None) -> int:
    """Entry point: dispatch a command, mapping failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliUsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except BoundExceededError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

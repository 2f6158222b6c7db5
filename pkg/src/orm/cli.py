"""Command-line front end: ``orm <subcommand> ...``.

Exit codes: 0 success, 1 input error or failed selftest, 2 when the
answer is UNKNOWN or NOT-CERTIFIED within the configured budgets.
"""

from __future__ import annotations

import argparse
import json
import sys
from enum import Enum
from pathlib import Path

from . import __version__, corpus
from .pieces import check_conditions, structure_report
from .inverses import InternalError, PreconditionError, compute_basis, compute_X, n_bicyclic_view
from .monoid import Monoid, NotInDeltaStar
from .solver import reduced_ball, solve
from .units import Triviality, parse_group_word, positive, render_group_word
from .welc import CompileError, Status, compile_welc, parse_eq_system, parse_welc
from .words import ParseError, parse_presentation

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    if path.startswith("bundled:"):
        name = path.split(":", 1)[1]
        try:
            return corpus.read(name)
        except (FileNotFoundError, IsADirectoryError):
            raise CliError("E_IO", f"no bundled file named {name!r}") from None
    p = Path(path)
    if not p.is_file():
        raise CliError("E_IO", f"no such file: {path}")
    try:
        return p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError("E_IO", f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError:
        raise CliError("E_IO", f"{path} is not UTF-8 text") from None


def _monoid(args) -> Monoid:
    text = _read(args.presentation)
    try:
        p = parse_presentation(text)
    except ParseError as exc:
        raise CliError("E_PARSE", f"{args.presentation}:{exc}") from None
    return Monoid(p, budget=args.budget)


def _word(m: Monoid, text: str):
    try:
        return m.parse(text)
    except ValueError as exc:
        raise CliError("E_PARSE", f"bad word {text!r}: {exc}") from None


def _positive_int(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _non_negative_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


# -- subcommands ---------------------------------------------------------------

def cmd_analyze(args):
    m = _monoid(args)
    d = m.pieces
    r = check_conditions(d)
    s = structure_report(m.presentation, d)
    cert = m.certify_pieces()
    out = {
        "presentation": m.presentation.render(),
        "pieces": [m.render(x) for x in d.pieces],
        "delta": [m.render(x) for x in d.delta],
        "phi": {m.render(x): b for x, b in d.phi.items()},
        "units": m.units.render(),
        "conditions": {
            "c1": r.c1, "c2": r.c2, "c3": r.c3,
            "c2_witnesses": [[a, m.render(g), m.render(h)] for a, g, h in r.c2_witnesses],
            "c3_by_letter": r.c3_by_witness,
            "a": r.chosen_a, "m": r.m,
        },
        "structure": {
            "torsion_exponent": s.torsion_exponent,
            "torsion_root": m.render(s.torsion_root),
            "all_letters_invertible": s.all_letters_invertible,
            "free_product_complement": list(s.free_product_complement),
            "hyperbolic_units_flag": s.hyperbolic_units_flag,
        },
        "pieces_status": cert.status,
    }
    return out, EXIT_OK if cert.certified else EXIT_UNKNOWN


def cmd_units(args):
    m = _monoid(args)
    try:
        w = parse_group_word(args.word, m.units.alphabet)
        source = "units"
    except ValueError:
        # fall back to a word over the monoid letters lying in Delta*
        try:
            w = positive(m.phi(m.parse(args.word)))
        except (ValueError, NotInDeltaStar) as exc:
            raise CliError("E_PARSE", f"{args.word!r} is neither a word over {list(m.units.alphabet)} "
                                      f"nor a product of pieces: {exc}") from None
        source = "pieces"
    v = m.oracle.is_trivial(w)
    out = {
        "units": m.units.render(),
        "word": render_group_word(w),
        "parsed_as": source,
        "verdict": v.value.value,
        "method": v.method.value if v.method else None,
        "certificate": _plain(v.certificate),
    }
    return out, EXIT_OK if v.value is not Triviality.UNKNOWN else EXIT_UNKNOWN


def cmd_reduce(args):
    m = _monoid(args)
    w = _word(m, args.word)
    r = m.reduce(w)
    out = {
        "word": m.render(w),
        "reduced": m.render(r.word),
        "status": "CERTIFIED" if r.certified else "NOT-CERTIFIED",
        "trace": [{"position": i, "lhs": m.render(lhs), "rhs": m.render(rhs)} for i, lhs, rhs in r.trace],
    }
    return out, EXIT_OK if r.certified else EXIT_UNKNOWN


def cmd_ball(args):
    m = _monoid(args)
    b = reduced_ball(m, args.radius)
    out = {
        "radius": b.radius,
        "size": len(b.words),
        "words": [m.render(w) for w in b.words],
        "degraded": b.degraded,
        "flagged": [m.render(w) for w in b.flagged],
    }
    return out, EXIT_UNKNOWN if b.degraded else EXIT_OK


def _table(m: Monoid, a):
    try:
        table = compute_X(m, a)
    except PreconditionError as exc:
        raise CliError("E_PRECONDITION", str(exc)) from None
    if table.certified:
        try:
            compute_basis(table, m)
        except InternalError as exc:
            table.notes.append(str(exc))
    return table


def cmd_inverses(args):
    m = _monoid(args)
    table = _table(m, args.a)
    out = {
        "a": table.a,
        "m": table.m,
        "entries": [{"j": e.j, "piece": m.render(e.piece), "beta": m.render(e.beta), "eta": m.render(e.eta),
                     "x": m.render(e.x_word), "certified": e.certified} for e in table.entries],
        "basis": [m.render(b) for b in table.basis],
        "weights": {m.render(b): w for b, w in table.weights.items()},
        "sigma_a": [m.render(x) for x in table.sigma_a],
        "certified": table.certified and bool(table.basis),
        "notes": table.notes,
    }
    return out, EXIT_OK if out["certified"] else EXIT_UNKNOWN


def cmd_embed(args):
    m = _monoid(args)
    table = _table(m, args.a)
    try:
        rep = n_bicyclic_view(table, m, args.radius)
    except PreconditionError as exc:
        raise CliError("E_PRECONDITION", str(exc)) from None
    out = {
        "a": rep.a,
        "radius": rep.radius,
        "generators": {d: m.render(w) for d, w in rep.generators.items()},
        "confluence": rep.confluence.value,
        "normal_forms": rep.normal_forms,
        "products": rep.products,
        "counterexamples": [str(c) for c in rep.counterexamples],
        "ok": rep.ok,
    }
    return out, EXIT_OK if rep.ok else EXIT_UNKNOWN


def cmd_compile_welc(args):
    m = _monoid(args)
    try:
        system = parse_welc(_read(args.welc))
    except ParseError as exc:
        raise CliError("E_PARSE", f"{args.welc}:{exc}") from None
    table = _table(m, args.a)
    if not table.basis:
        raise CliError("E_PRECONDITION", "no certified basis of right inverses; cannot compile")
    try:
        compiled, record = compile_welc(system, table.signature(), m.presentation)
    except CompileError as exc:
        raise CliError("E_COMPILE", str(exc)) from None
    rendered = compiled.render()
    if args.record:
        Path(args.record).write_text(record.dumps(m.render) + "\n", encoding="utf-8")
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
    out = {"system": rendered.splitlines(), "record": record.to_json(m.render)}
    return out, EXIT_OK


def cmd_solve(args):
    m = _monoid(args)
    try:
        system = parse_eq_system(_read(args.system), m.presentation)
    except ParseError as exc:
        raise CliError("E_PARSE", f"{args.system}:{exc}") from None
    res = solve(system, m, args.radius, strategy=args.strategy, jobs=args.jobs,
                max_oracle_calls=args.max_oracle_calls)
    out = res.to_json(m.render)
    return out, EXIT_UNKNOWN if res.status is Status.UNKNOWN else EXIT_OK


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(set(args.only) if args.only else None)
    out = {"passed": all(r.passed for r in results),
           "checks": [{"number": r.number, "title": r.title, "passed": r.passed,
                       "seconds": round(r.seconds, 3), "details": [str(d) for d in r.details]}
                      for r in results]}
    if args.format == "text":
        # one line per check reads better than the generic flattening
        for r in results:
            print(r.line())
            if args.verbose or not r.passed:
                for d in r.details:
                    print(f"      {d}")
        out = None
    if not all(r.passed for r in results):
        print("orm: E_SELFTEST: some checks failed", file=sys.stderr)
        return out, EXIT_INPUT
    return out, EXIT_OK


# -- output --------------------------------------------------------------------

def _plain(obj):
    """Make certificates JSON-friendly."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(_plain(k)): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orm", description="Special one-relator monoids and WELC reductions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--budget", type=_positive_int, default=None,
                        help="oracle budget (default: $ORM_ORACLE_BUDGET or 100000)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, presentation=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if presentation:
            p.add_argument("presentation", help="presentation file, or bundled:NAME for a shipped one")
        p.set_defaults(fn=fn)
        return p

    add("analyze", cmd_analyze, "pieces, conditions and structure")
    p = add("units", cmd_units, "decide whether a word is trivial in the group of units")
    p.add_argument("--word", required=True)
    p = add("reduce", cmd_reduce, "normal form of a word in M")
    p.add_argument("--word", required=True)
    p = add("ball", cmd_ball, "reduced words of all elements up to a length")
    p.add_argument("--radius", type=_non_negative_int, required=True)
    p = add("inverses", cmd_inverses, "right inverses of powers of a, and their basis")
    p.add_argument("--a", default=None, help="letter to use (default: first that starts two pieces)")
    p = add("embed", cmd_embed, "check the bicyclic-type embedding on normal forms")
    p.add_argument("--radius", type=_non_negative_int, default=4)
    p.add_argument("--a", default=None)
    p = add("compile-welc", cmd_compile_welc, "compile a WELC system into equations over M")
    p.add_argument("welc", help="WELC system file")
    p.add_argument("--a", default=None)
    p.add_argument("--output", help="also write the compiled eq: lines here")
    p.add_argument("--record", help="also write the compilation record (JSON) here")
    p = add("solve", cmd_solve, "bounded search for solutions of equations over M")
    p.add_argument("--system", required=True, help="file of vars:/eq: lines")
    p.add_argument("--radius", type=_non_negative_int, required=True)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--strategy", choices=("prune", "naive"), default="prune")
    p.add_argument("--max-oracle-calls", type=_positive_int, default=None)
    p = add("selftest", cmd_selftest, "run the acceptance checks", presentation=False)
    p.add_argument("--only", type=int, nargs="+", metavar="N", help="run only these checks")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.fn(args)
    except CliError as exc:
        print(f"orm: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        # bad budgets from the environment and similar
        print(f"orm: E_INPUT: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if out is not None:
        if args.format == "json":
            json.dump(out, sys.stdout, indent=2)
            sys.stdout.write("\n")
        else:
            print(render_text(out))
    return code


if __name__ == "__main__":
    sys.exit(main())

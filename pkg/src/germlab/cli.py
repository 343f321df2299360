"""``germlab`` command-line front end.

Exit codes: 0 success, 2 invalid input (bad document, violated normal form,
usage error), 1 internal failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .blowup import (
    DlousskySequence,
    DualGraph,
    InvalidSequence,
    det_check,
    dloussky_sequence,
    dual_graph,
    integer_det,
    intersection_matrix,
    parse_dls,
)
from .documents import (
    DocumentError,
    dumps_canonical,
    fg_to_dict,
    germ_to_dict,
    load_document,
)
from .fgroup import (
    FG2,
    FGNormalForm,
    canonical_tau,
    fg_to_germ,
    fg_type,
    germ_to_fg,
    n_prime_of_support,
    tau_d,
)
from .germ import (
    ContractingGerm,
    NotPurifiable,
    canonical_form,
    compose,
    decompose,
    germ_type,
    has_vector_field,
    purify,
    surface_index,
)
from .moduli import (
    action_flags,
    conjugacy_test,
    enumerate_types,
    group_act,
    orbit,
    parameter_space,
    stabilizer_order,
)
from .orbitlab import FG4Numeric, divergence_probe, escape_arc_solver

__all__ = ["main", "run_command", "emit_dot", "UsageError"]


class UsageError(Exception):
    """Bad invocation detected after argument parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------

def emit_dot(gph: DualGraph) -> str:
    if gph is None or gph.b2 == 0:
        raise UsageError("emit_dot needs a non-empty graph")
    order = " -> ".join(f"n{i}" for i in gph.cyclic_order)
    lines = [
        f"// cyclic order: {order} -> n{gph.cyclic_order[0]}",
        f"// b2 = {gph.b2}",
        "graph dual {",
    ]
    for i, w in enumerate(gph.labels):
        lines.append(f'  n{i} [label="{w}"];')
    for a, b in sorted(gph.edges):
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graph_json(gph: DualGraph) -> dict:
    return {
        "labels": list(gph.labels),
        "edges": [list(e) for e in sorted(gph.edges)],
        "cyclic_order": list(gph.cyclic_order),
        "b2": gph.b2,
        "det": integer_det(intersection_matrix(gph)),
    }


def _dls_json(d: DlousskySequence) -> dict:
    return {
        "dls": list(d.entries),
        "segments": [list(s) for s in d.segments],
        "b2": d.b2,
        "det": integer_det(intersection_matrix(dual_graph(d))),
    }


def _type_json(g: ContractingGerm) -> dict:
    t = germ_type(g)
    return {"kind": "germ", "k": g.k, "s": g.s, "type": list(t.exponents), "gcds": list(t.gcds)}


def _moduli_json(g: ContractingGerm) -> dict:
    t = germ_type(g)
    spaces = parameter_space(g.k, g.s, t)
    return {
        "k": g.k,
        "s": g.s,
        "type": list(t.exponents),
        "spaces": [
            {
                "case": d.case,
                "dimension": d.dimension,
                "delta": d.delta,
                "family_dimension": d.family_dimension,
                **{
                    key: getattr(action_flags(g.k, g.s, t, d.case), key)
                    for key in ("effective", "free", "fine", "trivial")
                },
            }
            for d in spaces
        ],
        "stabilizer_order": stabilizer_order(g),
        "orbit_size": (g.k - 1) // stabilizer_order(g),
    }


def _invariants_json(g: ContractingGerm) -> dict:
    d = dloussky_sequence(g)
    gph = dual_graph(d)
    return {
        "input": germ_to_dict(g),
        "invariants": {
            "type": list(germ_type(g).exponents),
            "index": surface_index(g),
            "has_vector_field": has_vector_field(g),
            "b2": d.b2,
            "dls": list(d.entries),
            "segments": [list(s) for s in d.segments],
            "det": integer_det(intersection_matrix(gph)),
            "det_check": det_check(gph, g.k),
        },
        "moduli": _moduli_json(g),
    }


def _write(out, obj, as_json, text=None):
    if as_json or text is None:
        out.write(dumps_canonical(obj) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


# --------------------------------------------------------------------------
# loading
# --------------------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load(path: str | None, flag: str = "-f"):
    if path is None:
        raise UsageError(f"{flag} FILE is required")
    return load_document(_read(path))


def _germ(path, flag="-f") -> ContractingGerm:
    doc = _load(path, flag)
    if isinstance(doc, FGNormalForm):
        if doc.variant != FG2:
            raise UsageError(f"{flag}: expected a germ or an FG2 document, got {doc.variant}")
        return fg_to_germ(doc)
    return doc


def _fg(path) -> FGNormalForm:
    doc = _load(path)
    if isinstance(doc, ContractingGerm):
        return germ_to_fg(doc)
    return doc


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_type(a, out):
    doc = _load(a.file)
    if isinstance(doc, FGNormalForm):
        t = fg_type(doc)
        obj = {"kind": "fg", "k": doc.k, "type": list(t.exponents), "gcds": list(t.gcds)}
    else:
        obj = _type_json(doc)
    _write(out, obj, a.json, "(" + ",".join(map(str, obj["type"])) + ")")


def cmd_invariants(a, out):
    g = _germ(a.file)
    obj = _invariants_json(g)
    if a.dot:
        obj["graph"] = emit_dot(dual_graph(dloussky_sequence(g)))
    inv = obj["invariants"]
    text = "\n".join(
        [
            f"type: ({','.join(map(str, inv['type']))})",
            f"index: {inv['index']}",
            f"vector field: {'yes' if inv['has_vector_field'] else 'no'}",
            f"b2: {inv['b2']}",
            f"dls: [{','.join(map(str, inv['dls']))}]",
            f"det: {inv['det']} (check {'ok' if inv['det_check'] else 'FAILED'})",
            f"orbit size: {obj['moduli']['orbit_size']}",
        ]
    )
    if a.dot:
        text += "\n" + obj["graph"]
    _write(out, obj, a.json, text)


def _sequence(a) -> DlousskySequence:
    if a.seq is not None:
        try:
            entries = [int(x) for x in a.seq.replace("[", "").replace("]", "").split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"--seq expects comma-separated integers, got {a.seq!r}") from None
        if not entries:
            raise UsageError("--seq is empty")
        segs = parse_dls(entries)
        bounds, n = [], 0
        for s in segs:
            n += len(s.entries)
            bounds.append(n)
        return DlousskySequence(tuple(entries), tuple(bounds))
    return dloussky_sequence(_germ(a.file))


def cmd_dls(a, out):
    d = _sequence(a)
    _write(out, _dls_json(d), a.json, str(d))


def cmd_graph(a, out):
    gph = dual_graph(_sequence(a))
    if a.dot:
        dot = emit_dot(gph)
        if a.out:
            Path(a.out).write_text(dot, encoding="utf-8")
        else:
            out.write(dot)
        return
    obj = _graph_json(gph)
    text = "\n".join(f"{gph.labels[x]} -- {gph.labels[y]}  (n{x}, n{y})" for x, y in sorted(gph.edges))
    _write(out, obj, a.json, text)


def cmd_decompose(a, out):
    factors = decompose(_germ(a.file))
    obj = {"factors": [germ_to_dict(f) for f in factors]}
    text = "\n".join(str(f) for f in factors)
    _write(out, obj, a.json, text)


def cmd_compose(a, out):
    g = compose(_germ(a.file), _germ(a.g, "-g"))
    _write(out, germ_to_dict(g), True)


def cmd_purify(a, out):
    g = _germ(a.file)
    try:
        p = purify(g)
    except NotPurifiable as exc:
        obj = {"purifiable": False, "germ": None, "reason": str(exc)}
        _write(out, obj, a.json, f"not purifiable: {exc}")
        return
    obj = {"purifiable": True, "germ": germ_to_dict(p), "reason": None}
    _write(out, obj, a.json, dumps_canonical(germ_to_dict(p)))


def cmd_fg2germ(a, out):
    doc = _load(a.file)
    if not isinstance(doc, FGNormalForm):
        raise UsageError("fg2germ expects an FG document")
    _write(out, germ_to_dict(fg_to_germ(doc)), True)


def cmd_germ2fg(a, out):
    g = _germ(a.file)
    _write(out, fg_to_dict(germ_to_fg(g)), True)


def cmd_tau(a, out):
    f = _fg(a.file)
    res = canonical_tau(f) if a.d is None else tau_d(f, a.d)
    _write(out, fg_to_dict(res), True)


def cmd_moduli(a, out):
    g = _germ(a.file)
    obj = _moduli_json(g)
    lines = [f"(k, s, type) = ({g.k}, {g.s}, ({','.join(map(str, obj['type']))}))"]
    for sp in obj["spaces"]:
        lines.append(
            f"{sp['case']}: dim {sp['dimension']}, family dim {sp['family_dimension']}, "
            f"effective={sp['effective']}, free={sp['free']}, fine={sp['fine']}"
        )
    lines.append(f"stabilizer order {obj['stabilizer_order']}, orbit size {obj['orbit_size']}")
    _write(out, obj, a.json, "\n".join(lines))


def cmd_orbit(a, out):
    g = _germ(a.file)
    if a.e is not None:
        h = group_act(g, a.e)
        obj = {"k": g.k, "e": a.e % (g.k - 1), "orbit": [germ_to_dict(h)]}
    else:
        obj = {"k": g.k, "e": None, "orbit": [germ_to_dict(h) for h in orbit(g)]}
    text = "\n".join(dumps_canonical(x) for x in obj["orbit"])
    _write(out, obj, a.json, text)


def cmd_conjugate(a, out):
    g1, g2 = _germ(a.file), _germ(a.g, "-g")
    e = conjugacy_test(g1, g2)
    purified = canonical_form(g1) != g1 or canonical_form(g2) != g2
    obj = {"conjugate": e is not None, "e": e, "purified": purified}
    if e is None:
        text = "not conjugate"
    else:
        text = f"conjugate via e={e}" + (" (after purification)" if purified else "")
    _write(out, obj, a.json, text)


def cmd_enumerate(a, out):
    if a.b2 is None:
        raise UsageError("enumerate needs --b2 N")
    if a.b2 < 2:
        raise UsageError("--b2 must be at least 2")
    lines = "".join(dumps_canonical(r) + "\n" for r in enumerate_types(a.b2))
    if a.out:
        Path(a.out).write_text(lines, encoding="utf-8")
    else:
        out.write(lines)


def _fg4(a) -> FG4Numeric:
    doc = _load(a.file)
    if isinstance(doc, ContractingGerm):
        doc = germ_to_fg(doc)
    return FG4Numeric.from_fg(doc)


def _parse_w(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"--w expects a complex number, got {text!r}") from None


def _default_d(p: FG4Numeric) -> int:
    # the largest proper divisor whose n'_d exists
    for d in sorted((d for d in range(1, p.k) if p.k % d == 0), reverse=True):
        try:
            n_prime_of_support(p.k, p.b, d)
            return d
        except ValueError:
            continue
    return 1


def cmd_probe(a, out):
    p = _fg4(a)
    d = a.d if a.d is not None else _default_d(p)
    rep = divergence_probe(p, d, _parse_w(a.w), a.m_max)
    obj = rep.to_json()
    text = "\n".join(
        [f"k={p.k} d={d} n'={rep.n_prime} verdict {rep.verdict}"]
        + [f"m={s['m']}: log10 {s['log10']}" for s in obj["steps"]]
    )
    _write(out, obj, a.json, text)


def cmd_escape(a, out):
    p = _fg4(a)
    d = a.d if a.d is not None else _default_d(p)
    npr = n_prime_of_support(p.k, p.b, d)
    steps = escape_arc_solver(p, d, a.nu_max, n_prime=npr, truncate=a.truncate, w=_parse_w(a.w))
    obj = {
        "k": p.k,
        "d": d,
        "n_prime": npr,
        "truncated": a.truncate,
        "steps": [s.to_json() for s in steps],
    }
    text = "\n".join(
        f"nu={s['nu']}: log10|b|={s['log10_b']} residual={s['residual']}" for s in obj["steps"]
    )
    _write(out, obj, a.json, text)


COMMANDS = {
    "type": (cmd_type, "type of a germ or FG form"),
    "invariants": (cmd_invariants, "full invariant and moduli report"),
    "dls": (cmd_dls, "Dloussky sequence"),
    "graph": (cmd_graph, "dual graph (text, --json or --dot)"),
    "decompose": (cmd_decompose, "canonical decomposition into simple factors"),
    "compose": (cmd_compose, "composition of -f and -g"),
    "purify": (cmd_purify, "pure normal form of a modified germ"),
    "fg2germ": (cmd_fg2germ, "FG2 form to germ"),
    "germ2fg": (cmd_germ2fg, "index-one germ to FG2 form"),
    "tau": (cmd_tau, "tau_d renormalisation (default d = k/j1)"),
    "moduli": (cmd_moduli, "parameter spaces, action flags, stabilizer"),
    "orbit": (cmd_orbit, "orbit under Z/(k-1), or one image with --e"),
    "conjugate": (cmd_conjugate, "conjugacy test for -f and -g"),
    "enumerate": (cmd_enumerate, "catalog of logarithmic types up to --b2"),
    "probe": (cmd_probe, "divergence probe of g_{d,m} displacements"),
    "escape": (cmd_escape, "escape-arc solve for b_{n'_d}"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="germlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"germlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("-f", "--file", help="input document ('-' for stdin)")
        p.add_argument("-g", help="second input document")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--dot", action="store_true", help="emit the dual graph in DOT")
        p.add_argument("--seq", help="comma-separated Dloussky sequence instead of a document")
        p.add_argument("--b2", type=int, help="maximal b2 for enumerate")
        p.add_argument("--d", type=int, help="divisor of k")
        p.add_argument("--e", type=int, help="action element of Z/(k-1)")
        p.add_argument("--q", type=int, help="index divisor")
        p.add_argument("--out", help="output path")
        p.add_argument("--m-max", type=int, default=10, dest="m_max")
        p.add_argument("--nu-max", type=int, default=12, dest="nu_max")
        p.add_argument("--w", default="-1", help="base point w with Re w < 0")
        p.add_argument("--truncate", action="store_true", help="escape: shortened numerator")
    return parser


def run_command(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        COMMANDS[args.command][0](args, stdout)
        return 0
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else 0
    except UsageError as exc:
        stderr.write(f"germlab: usage error: {exc}\n")
        return 2
    except DocumentError as exc:
        for v in exc.violations:
            stderr.write(f"germlab: invalid document: {v}\n")
        return 2
    except (ValueError, InvalidSequence, NotPurifiable) as exc:
        stderr.write(f"germlab: invalid input: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"germlab: I/O error: {exc}\n")
        return 1
    except Exception as exc:  # noqa: BLE001 - the exit-code contract needs a catch-all
        stderr.write(f"germlab: internal error: {type(exc).__name__}: {exc}\n")
        return 1


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

"""JSON documents for germs and (FG2)/(FG4) forms.

Documents declare one ``cyclotomic_order``; nested numbers may omit their
``order`` (it defaults to the document's) or give a divisor of it.
Serialisation is canonical: sorted keys, lowest-terms rationals, every
number written at the document order without a nested ``order``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .cyclotomic import CyclotomicNumber, parse_rational, promote
from .fgroup import FG2, FG4, FGNormalForm, validate_fg
from .germ import ContractingGerm, validate_germ

__all__ = [
    "DocumentError",
    "Violation",
    "parse_germ_document",
    "parse_fg_document",
    "germ_from_dict",
    "fg_from_dict",
    "germ_to_dict",
    "fg_to_dict",
    "dumps_canonical",
    "load_document",
]


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.message}"


class DocumentError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def _load(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    if isinstance(text, str):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError([Violation("$", f"malformed JSON: {exc}")]) from None
    return text


def _int_field(doc, key, errors, required=True, minimum=None):
    if key not in doc:
        if required:
            errors.append(Violation(f"$.{key}", "missing required integer"))
        return None
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        errors.append(Violation(f"$.{key}", f"expected an integer, got {v!r}"))
        return None
    if minimum is not None and v < minimum:
        errors.append(Violation(f"$.{key}", f"must be >= {minimum}, got {v}"))
        return None
    return v


def _number(doc, path, order, errors):
    if not isinstance(doc, dict) or "coords" not in doc:
        errors.append(Violation(path, "expected an object with 'coords'"))
        return None
    unknown = set(doc) - {"coords", "order"}
    if unknown:
        errors.append(Violation(path, f"unknown keys {sorted(unknown)}"))
    inner = doc.get("order", order)
    if not isinstance(inner, int) or isinstance(inner, bool) or inner < 1:
        errors.append(Violation(f"{path}.order", f"invalid order {inner!r}"))
        return None
    if order % inner:
        errors.append(
            Violation(f"{path}.order", f"order {inner} does not divide cyclotomic_order {order}")
        )
        return None
    coords = doc["coords"]
    if not isinstance(coords, list):
        errors.append(Violation(f"{path}.coords", "expected a list of rational strings"))
        return None
    values = []
    for i, c in enumerate(coords):
        try:
            values.append(parse_rational(c))
        except ValueError as exc:
            errors.append(Violation(f"{path}.coords[{i}]", str(exc)))
            return None
    try:
        x = CyclotomicNumber(inner, values)
    except ValueError as exc:
        errors.append(Violation(f"{path}.coords", str(exc)))
        return None
    return promote(x, order)


def _exponent_map(doc, key, order, errors, required=True):
    path = f"$.{key}"
    if key not in doc:
        if required:
            errors.append(Violation(path, "missing required object"))
        return {}
    raw = doc[key]
    if not isinstance(raw, dict):
        errors.append(Violation(path, "expected an object keyed by exponent"))
        return {}
    out = {}
    for m, v in raw.items():
        try:
            e = int(m)
            if str(e) != m or e < 0:
                raise ValueError
        except ValueError:
            errors.append(Violation(f"{path}.{m}", "exponent keys must be non-negative integers"))
            continue
        c = _number(v, f"{path}.{m}", order, errors)
        if c is not None:
            out[e] = c
    return out


def _semantic_path(message: str, j: int | None) -> str:
    routes = [
        ("c_j=1", f"$.coeffs.{j}" if j is not None else "$.coeffs"),
        ("b_sigma=1", "$.b"),
        ("extra", "$.extra"),
        ("lambda", "$.lambda"),
        ("k >= 2", "$.k"),
        ("j <= s", "$.s"),
    ]
    for needle, path in routes:
        if needle in message:
            return path
    return "$.coeffs" if "gcd" in message or "exponent" in message else "$"


def _order(doc, errors):
    order = doc.get("cyclotomic_order", 1)
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        errors.append(Violation("$.cyclotomic_order", f"invalid order {order!r}"))
        return None
    return order


def germ_from_dict(doc) -> ContractingGerm:
    if not isinstance(doc, dict):
        raise DocumentError([Violation("$", "germ document must be a JSON object")])
    errors = []
    allowed = {"k", "s", "cyclotomic_order", "lambda", "coeffs", "extra", "label"}
    for key in sorted(set(doc) - allowed):
        errors.append(Violation(f"$.{key}", "unknown key"))
    order = _order(doc, errors)
    k = _int_field(doc, "k", errors, minimum=2)
    s = _int_field(doc, "s", errors, minimum=1)
    if order is None:
        raise DocumentError(errors)
    lam = _number(doc["lambda"], "$.lambda", order, errors) if "lambda" in doc else None
    if "lambda" not in doc:
        errors.append(Violation("$.lambda", "missing required number"))
    coeffs = _exponent_map(doc, "coeffs", order, errors)
    extra = None
    raw = doc.get("extra")
    if raw is not None:
        if not isinstance(raw, dict) or set(raw) != {"n", "c"}:
            errors.append(Violation("$.extra", "expected {\"n\": int, \"c\": number} or null"))
        elif not isinstance(raw["n"], int) or isinstance(raw["n"], bool):
            errors.append(Violation("$.extra.n", f"expected an integer, got {raw['n']!r}"))
        else:
            c = _number(raw["c"], "$.extra.c", order, errors)
            if c is not None:
                extra = (raw["n"], c)
    if errors:
        raise DocumentError(errors)
    g = ContractingGerm(k=k, s=s, lam=lam, coeffs=coeffs, extra=extra, order=order)
    j = min(g.coeffs) if g.coeffs else None
    problems = validate_germ(g)
    if problems:
        raise DocumentError([Violation(_semantic_path(p, j), p) for p in problems])
    return g


def fg_from_dict(doc) -> FGNormalForm:
    if not isinstance(doc, dict):
        raise DocumentError([Violation("$", "FG document must be a JSON object")])
    errors = []
    allowed = {"k", "variant", "l", "cyclotomic_order", "lambda", "a0", "b", "label"}
    for key in sorted(set(doc) - allowed):
        errors.append(Violation(f"$.{key}", "unknown key"))
    order = _order(doc, errors)
    k = _int_field(doc, "k", errors, minimum=2)
    variant = doc.get("variant", FG2)
    if variant not in (FG2, FG4):
        errors.append(Violation("$.variant", f"expected 'FG2' or 'FG4', got {variant!r}"))
    level = _int_field(doc, "l", errors, required=variant == FG4, minimum=1)
    if order is None:
        raise DocumentError(errors)
    lam = _number(doc["lambda"], "$.lambda", order, errors) if "lambda" in doc else None
    if "lambda" not in doc:
        errors.append(Violation("$.lambda", "missing required number"))
    a0 = _number(doc["a0"], "$.a0", order, errors) if "a0" in doc else CyclotomicNumber(order)
    b = _exponent_map(doc, "b", order, errors)
    if errors:
        raise DocumentError(errors)
    f = FGNormalForm(k=k, lam=lam, a0=a0, b=b, variant=variant, l=level, order=order)
    if variant == FG2 and level is not None and level != f.l:
        raise DocumentError([Violation("$.l", f"declared l={level} but sigma gives l={f.l}")])
    problems = validate_fg(f)
    if problems:
        raise DocumentError([Violation(_semantic_path(p, None), p) for p in problems])
    return f


def parse_germ_document(text) -> ContractingGerm:
    return germ_from_dict(_load(text))


def parse_fg_document(text) -> FGNormalForm:
    return fg_from_dict(_load(text))


def _num(x: CyclotomicNumber, order: int) -> dict:
    return promote(x, order).to_json(include_order=False)


def germ_to_dict(g: ContractingGerm, label: str | None = None) -> dict:
    order = g.order
    doc = {
        "k": g.k,
        "s": g.s,
        "cyclotomic_order": order,
        "lambda": _num(g.lam, order),
        "coeffs": {str(m): _num(c, order) for m, c in sorted(g.coeffs.items())},
        "extra": None if g.extra is None else {"n": g.extra[0], "c": _num(g.extra[1], order)},
    }
    if label is not None:
        doc["label"] = label
    return doc


def fg_to_dict(f: FGNormalForm, label: str | None = None) -> dict:
    order = f.order
    doc = {
        "k": f.k,
        "variant": f.variant,
        "l": f.l,
        "cyclotomic_order": order,
        "lambda": _num(f.lam, order),
        "a0": _num(f.a0, order),
        "b": {str(m): _num(c, order) for m, c in sorted(f.b.items())},
    }
    if label is not None:
        doc["label"] = label
    return doc


def dumps_canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def load_document(text):
    """Parse either kind, deciding by the presence of a 'variant' or 'b' key."""
    doc = _load(text)
    if isinstance(doc, dict) and ("variant" in doc or "b" in doc):
        return fg_from_dict(doc)
    return germ_from_dict(doc)

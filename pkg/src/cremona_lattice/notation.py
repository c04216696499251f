"""Text and JSON forms of classes and numbers.

Two text syntaxes are accepted for classes:

* the vector form ``(7|4,1,2,2,2,2,2,2,2)`` meaning ``7H - 4E_1 - E_2 - ...``;
* the symbolic form ``3H-2U1-E4-...-E9`` or ``3H'+E0'-E1'-...-E9'``.
  An ellipsis between two ``E`` terms with the same coefficient fills in the
  indices between them.  If ``E0`` occurs, indices are read zero-based, so
  ``E0`` is the first exceptional generator.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Optional

from .errors import ParseError
from .lattice import CP2_BLOWUP, MBASIS, SXS, Basis, HomologyClass, Number, _coerce

_VECTOR = re.compile(r"^\((?P<a>[^|()]*)\|(?P<b>[^|()]*)\)$")
_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?\*?(H|A|B|U[1-3]|E\d+)")
_ELLIPSIS = re.compile(r"([+-]?)\.\.\.")


def parse_number(text: str) -> Number:
    text = text.strip()
    try:
        return _coerce(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact rational: {text!r}") from exc


def format_number(x: Number) -> str:
    return str(x)


def parse_sizes(text: str) -> list[Number]:
    """``"1/3x8,1/2"`` -> eight copies of 1/3 followed by 1/2."""
    sizes: list[Number] = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        value, _, count = chunk.partition("x")
        n = int(count) if count else 1
        if n < 0:
            raise ParseError(f"negative repeat count in {chunk!r}")
        sizes.extend([parse_number(value)] * n)
    return sizes


def _normalize(text: str) -> str:
    for old, new in (("−", "-"), ("⋯", "..."), ("…", "..."), ("'", ""), ("′", "")):
        text = text.replace(old, new)
    return "".join(text.split())


def parse_class(text: str, basis: Optional[Basis] = None) -> HomologyClass:
    """Parse either text syntax; infer the basis when none is given."""
    s = _normalize(text)
    m = _VECTOR.match(s)
    if m:
        try:
            a = parse_number(m["a"])
            b = [parse_number(x) for x in m["b"].split(",")] if m["b"] else []
        except ParseError as exc:
            raise ParseError(f"bad vector {text!r}: {exc}") from exc
        if basis is None:
            basis = Basis.cp2(len(b))
        if basis.kind == SXS:
            raise ParseError("SxS classes use the symbolic form xA+yB")
        if len(b) != basis.k:
            raise ParseError(f"{text!r} has {len(b)} entries, {basis} needs {basis.k}")
        return HomologyClass(basis, (a, *b))
    return _parse_symbolic(s, basis, text)


def _parse_symbolic(s: str, basis: Optional[Basis], original: str) -> HomologyClass:
    if s in ("0", ""):
        if basis is None:
            raise ParseError("the zero class needs an explicit basis")
        return HomologyClass(basis, (0,) * basis.rank)

    tokens: list[tuple[str, Optional[Number]]] = []
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m and m.end() > pos:
            sign = -1 if m[1] == "-" else 1
            if m[1] == "" and tokens:
                raise ParseError(f"missing sign before {m[0]!r} in {original!r}")
            coef = parse_number(m[2]) if m[2] else 1
            tokens.append((m[3], sign * coef))
            pos = m.end()
            continue
        m = _ELLIPSIS.match(s, pos)
        if m:
            tokens.append(("...", None))
            pos = m.end()
            continue
        raise ParseError(f"cannot parse {original!r} at {s[pos:]!r}")

    zero_based = any(name == "E0" for name, _ in tokens)
    offset = 1 if zero_based else 0

    terms: list[tuple[str, Number]] = []
    for i, (name, coef) in enumerate(tokens):
        if name != "...":
            terms.append((name, coef))
            continue
        if i == 0 or i + 1 >= len(tokens):
            raise ParseError(f"dangling ellipsis in {original!r}")
        (left, lc), (right, rc) = tokens[i - 1], tokens[i + 1]
        if not (left.startswith("E") and right.startswith("E")) or lc != rc:
            raise ParseError(f"ellipsis must sit between E terms with equal coefficients in {original!r}")
        lo, hi = int(left[1:]), int(right[1:])
        if hi <= lo:
            raise ParseError(f"ellipsis range E{lo}..E{hi} is empty in {original!r}")
        terms.extend((f"E{j}", lc) for j in range(lo + 1, hi))

    names = {name for name, _ in terms}
    if basis is None:
        if names & {"A", "B"}:
            basis = Basis.sxs()
        else:
            top = max((int(n[1:]) + offset for n in names if n.startswith("E")), default=0)
            if any(n.startswith("U") for n in names):
                basis = Basis.mbasis(max(3, top))
            else:
                basis = Basis.cp2(top)

    coeffs: list[Number] = [0] * basis.rank
    for name, coef in terms:
        coeffs[_position(name, basis, offset, original)] += _storage_sign(name, basis) * coef
    return HomologyClass(basis, tuple(coeffs))


def _position(name: str, basis: Basis, offset: int, original: str) -> int:
    if basis.kind == SXS:
        if name in ("A", "B"):
            return 0 if name == "A" else 1
    elif name == "H":
        return 0
    elif name.startswith("U") and basis.kind == MBASIS:
        return int(name[1:])
    elif name.startswith("E"):
        p = int(name[1:]) + offset
        lowest = 4 if basis.kind == MBASIS else 1
        if lowest <= p <= basis.k:
            return p
    raise ParseError(f"{name} is not a generator of {basis} (in {original!r})")


def _storage_sign(name: str, basis: Basis) -> int:
    # exceptional generators are stored with the opposite sign
    return 1 if basis.kind == SXS or name == "H" else -1


def format_class(c: HomologyClass) -> str:
    """Vector form for diagonal bases, symbolic for ``SxS``."""
    if c.basis.kind == SXS:
        return symbolic(c)
    return f"({c.coeffs[0]}|{','.join(str(x) for x in c.coeffs[1:])})"


def symbolic(c: HomologyClass, zero_based: bool = False) -> str:
    """``3H-2U1-E4-E5`` style; ``zero_based`` labels exceptional generators from ``E0``."""
    basis = c.basis
    labels = list(basis.labels())
    if zero_based and basis.kind == CP2_BLOWUP:
        labels = ["H"] + [f"E{i}" for i in range(basis.k)]
    out = []
    for pos, (lab, x) in enumerate(zip(labels, c.coeffs)):
        v = x if basis.kind == SXS or pos == 0 else -x
        if v == 0:
            continue
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        out.append(f"{sign}{'' if mag == 1 else mag}{lab}")
    if not out:
        return "0"
    text = "".join(out)
    return text[1:] if text.startswith("+") else text


# -- JSON ----------------------------------------------------------------------


def number_to_json(x: Number) -> Any:
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    return x


def number_from_json(obj: Any) -> Number:
    if isinstance(obj, bool):
        raise ParseError("booleans are not numbers")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        return parse_number(obj)
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        num, den = obj["num"], obj["den"]
        if not (isinstance(num, int) and isinstance(den, int)) or den <= 0:
            raise ParseError(f"bad rational {obj!r}")
        q = Fraction(num, den)
        if (q.numerator, q.denominator) != (num, den):
            raise ParseError(f"rational {obj!r} is not in lowest terms")
        return _coerce(q)
    raise ParseError(f"not an exact number: {obj!r}")


def basis_to_json(basis: Basis) -> dict:
    if basis.kind == SXS:
        return {"kind": SXS}
    return {"kind": basis.kind, "k": basis.k}


def basis_from_json(obj: Any) -> Basis:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(f"bad basis {obj!r}")
    kind = obj["kind"]
    if kind == SXS:
        return Basis.sxs()
    if kind not in (CP2_BLOWUP, MBASIS) or not isinstance(obj.get("k"), int):
        raise ParseError(f"bad basis {obj!r}")
    return Basis(kind, obj["k"])


def class_to_json(c: HomologyClass) -> dict:
    out = {"basis": basis_to_json(c.basis), "coeffs": [number_to_json(x) for x in c.coeffs]}
    if c.basis.kind == MBASIS:
        out["t"] = [number_to_json(x) for x in c.coeffs[1:4]]
    return out


def class_from_json(obj: Any, basis: Optional[Basis] = None) -> HomologyClass:
    """Accepts the JSON object form or a text string."""
    if isinstance(obj, str):
        return parse_class(obj, basis)
    if not isinstance(obj, dict) or "basis" not in obj or "coeffs" not in obj:
        raise ParseError(f"bad class object {obj!r}")
    b = basis_from_json(obj["basis"])
    if basis is not None and b != basis:
        raise ParseError(f"class is on {b}, expected {basis}")
    if not isinstance(obj["coeffs"], list):
        raise ParseError("coeffs must be a list")
    c = HomologyClass(b, tuple(number_from_json(x) for x in obj["coeffs"]))
    if "t" in obj and [number_from_json(x) for x in obj["t"]] != list(c.coeffs[1:4]):
        raise ParseError("'t' disagrees with coeffs")
    return c

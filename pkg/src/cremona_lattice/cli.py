"""Command-line frontend: one verb per invocation, JSON on stdout.

Exit codes: 0 success, 1 a ``--verify`` replay that does not reach the
target, 2 invalid input, 3 an inconclusive answer under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from . import cremona, enumeration, lattice, packing, surgery
from .errors import LatticeError, ParseError
from .lattice import HomologyClass
from .notation import (
    class_from_json,
    class_to_json,
    format_class,
    number_to_json,
    parse_class,
    parse_number,
    parse_sizes,
)

SCHEMA = "v1"
EXIT_OK, EXIT_VERIFY_FAILED, EXIT_BAD_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(LatticeError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would print and exit(2)
        raise UsageError(message)


def _class_arg(text: str) -> HomologyClass:
    text = text.strip()
    if text.startswith("{"):
        try:
            return class_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON class: {exc}") from exc
    return parse_class(text)


def _classes_arg(text: str) -> list[HomologyClass]:
    text = text.strip()
    if text.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON class list: {exc}") from exc
        if not isinstance(items, list):
            raise ParseError("expected a JSON array of classes")
        return [class_from_json(x) for x in items]
    return [parse_class(t) for t in text.split(";") if t.strip()]


def _cls(c: HomologyClass) -> dict:
    return {**class_to_json(c), "text": format_class(c)}


def _cert(seq) -> list:
    return cremona.certificate_to_json(seq)


def _system(s: enumeration.ExceptionalSystem) -> list:
    return [format_class(c) for c in s.classes]


def _same_basis(a: HomologyClass, b: HomologyClass) -> tuple[HomologyClass, HomologyClass]:
    """Let ``H`` and similar short inputs meet a class on a larger blow-up."""
    if a.basis == b.basis:
        return a, b
    if a.basis.kind == b.basis.kind == lattice.CP2_BLOWUP:
        k = max(a.basis.k, b.basis.k)
        return lattice.embed(a, k), lattice.embed(b, k)
    return a, b


# -- verbs -----------------------------------------------------------------------------


def cmd_pair(ns) -> tuple[dict, bool]:
    a, b = _same_basis(_class_arg(ns.a), _class_arg(ns.b))
    return {"pair": number_to_json(lattice.pair(a, b))}, False


def cmd_genus(ns):
    c = _class_arg(ns.cls)
    return {
        "class": _cls(c),
        "genus": lattice.adjunction_genus(c),
        "square": number_to_json(lattice.square(c)),
        "k0_pairing": number_to_json(lattice.pair(lattice.canonical_class(c.basis), c)),
    }, False


def cmd_reduce(ns):
    c = _class_arg(ns.cls)
    red, cert = cremona.reduce(c)
    return {
        "input": _cls(c),
        "reduced": _cls(red),
        "is_reduced": cremona.is_reduced(red),
        "certificate": _cert(cert),
    }, False


def cmd_equivalent(ns):
    a, b = _same_basis(_class_arg(ns.a), _class_arg(ns.b))
    if ns.verify is not None:
        try:
            cert = cremona.certificate_from_json(json.loads(ns.verify))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad certificate JSON: {exc}") from exc
        reached = cremona.replay(a, cert)
        out = {"verified": reached == b, "reached": _cls(reached), "target": _cls(b)}
        if reached != b:
            raise _VerifyFailed(out)
        return out, False
    bound = ns.bound if ns.bound is not None else 2 * max(map(abs, a.coeffs + b.coeffs)) + 4
    res = cremona.equivalent(a, b, bound)
    out = {
        "status": res.status.value,
        "bound": bound,
        "explored": res.explored,
        "certificate": None if res.certificate is None else _cert(res.certificate),
    }
    return out, res.status is cremona.Equivalence.INCONCLUSIVE


def cmd_enumerate_exceptional(ns):
    if ns.max_degree is None:
        classes = enumeration.enumerate_exceptional(ns.k)
        complete = True
    else:
        res = enumeration.enumerate_exceptional_bounded(ns.k, ns.max_degree)
        classes, complete = res.classes, res.complete
    return {
        "k": ns.k,
        "count": len(classes),
        "complete": complete,
        "classes": [format_class(c) for c in classes],
    }, not complete


def _constraint(ns, k: int):
    mode = enumeration.Mode(ns.mode)
    if ns.constraint is None:
        if mode is enumeration.Mode.Z2_ORTHOGONAL:
            return enumeration.h_constraint(k), mode
        raise UsageError("ZOrthogonal systems need --constraint")
    c = _class_arg(ns.constraint)
    if c.basis.kind == lattice.CP2_BLOWUP and c.basis.k < k:
        c = lattice.embed(c, k)
    return (lattice.z2_reduce(c) if mode is enumeration.Mode.Z2_ORTHOGONAL else c), mode


def cmd_systems(ns):
    constraint, mode = _constraint(ns, ns.k)
    size = ns.size if ns.size is not None else ns.k
    systems = enumeration.enumerate_systems(ns.k, constraint, mode, size)
    return {
        "k": ns.k,
        "mode": mode.value,
        "constraint": str(constraint) if mode is enumeration.Mode.Z2_ORTHOGONAL else format_class(constraint),
        "size": size,
        "count": len(systems),
        "systems": [_system(s) for s in systems],
    }, False


def cmd_normalize_system(ns):
    classes = _classes_arg(ns.classes)
    if not classes:
        raise UsageError("normalize-system needs at least one class")
    sys_ = enumeration.ExceptionalSystem(classes[0].basis, tuple(classes))
    cert = enumeration.normalize_system(sys_)
    return {"system": _system(sys_), "certificate": _cert(cert)}, False


def cmd_iota(ns):
    c = _class_arg(ns.cls)
    img = surgery.iota(c)
    from .notation import symbolic

    return {"input": _cls(c), "image": _cls(img), "image_primed": symbolic(img, zero_based=True)}, False


def cmd_iota_inverse(ns):
    c = _class_arg(ns.cls)
    pre = surgery.iota_inverse(c)
    from .notation import symbolic

    return {"input": _cls(c), "preimage": _cls(pre), "preimage_symbolic": symbolic(pre)}, False


def cmd_classify_minus4(ns):
    c = _class_arg(ns.cls)
    res = surgery.classify_minus4(c, ns.bound)
    return {
        "class": _cls(c),
        "kind": res.kind.value,
        "certificate": None if res.certificate is None else _cert(res.certificate),
        "target": None if res.target is None else _cls(res.target),
    }, res.kind is surgery.Minus4Kind.INCONCLUSIVE


def cmd_cut_betti(ns):
    p = surgery.CutProfile(surgery.Lagrangian(ns.lagrangian), ns.b2plus, ns.b2minus)
    plus, minus = surgery.cut_betti(p)
    return {"lagrangian": p.lagrangian.value, "b2plus": plus, "b2minus": minus}, False


def cmd_km(ns):
    c = _class_arg(ns.cls)
    res = lattice.km_obstruction(c)
    return {
        "class": _cls(c),
        "result": res.value,
        "square_minus_signature": number_to_json(lattice.square(c) - lattice.signature(c.basis)),
    }, False


def _packing_out(p: packing.PackingProblem, res: packing.SymplecticTest) -> tuple[dict, bool]:
    v = packing.blowup_class(p)
    out = {
        "feasible": res.verdict.value,
        "blowup_class": _cls(v),
        "certificate": _cert(res.certificate),
        "reduced": None if res.reduced is None else _cls(res.reduced),
        "reason": res.reason,
    }
    return out, res.verdict is packing.Verdict.INCONCLUSIVE


def cmd_pack(ns):
    sizes = parse_sizes(ns.sizes)
    if ns.ambient == "cp2":
        if ns.area is None:
            raise UsageError("--ambient cp2 needs --area")
        p = packing.PackingProblem.cp2(parse_number(ns.area), sizes)
    else:
        if ns.alpha is None or ns.beta is None:
            raise UsageError("--ambient sxs needs --alpha and --beta")
        p = packing.PackingProblem.sxs(parse_number(ns.alpha), parse_number(ns.beta), sizes)
    return _packing_out(p, packing.packing_feasible(p))


def cmd_pack_rp2(ns):
    sizes = parse_sizes(ns.sizes)
    p = packing.PackingProblem.cp2_minus_rp2(1, sizes)
    return _packing_out(p, packing.rp2_complement_packing(sizes))


def cmd_census(ns):
    rows = enumeration.census(range(1, ns.k_max + 1))
    return {
        "counts_z2": [r.counts[0] for r in rows],
        "counts_z": [r.counts[1] for r in rows],
        "rows": [
            {
                "k": r.k,
                "z2_count": r.counts[0],
                "z_count": r.counts[1],
                "z_constraint": format_class(r.z_constraint),
                "z2_systems": [_system(s) for s in r.z2_systems],
                "z_systems": [_system(s) for s in r.z_systems],
            }
            for r in rows
        ],
    }, False


class _VerifyFailed(Exception):
    def __init__(self, payload: dict):
        super().__init__("certificate does not reach the target")
        self.payload = payload


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cremona-lattice", description=__doc__)
    p.add_argument("--strict", action="store_true", help="exit 3 on inconclusive answers")
    p.add_argument("--stdin", action="store_true", help="read verb arguments as a JSON object on stdin")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name: str, fn, help_: str):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("pair", cmd_pair, "intersection pairing of two classes")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = verb("genus", cmd_genus, "adjunction genus")
    sp.add_argument("--class", dest="cls", required=True)

    sp = verb("reduce", cmd_reduce, "sort-and-reflect reduction with certificate")
    sp.add_argument("--class", dest="cls", required=True)

    sp = verb("equivalent", cmd_equivalent, "bounded Cremona equivalence search")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--verify", help="JSON certificate to replay from --a to --b")

    sp = verb("enumerate-exceptional", cmd_enumerate_exceptional, "exceptional classes of CP2Blowup(k)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--max-degree", type=int)

    sp = verb("systems", cmd_systems, "orthogonal systems of exceptional classes")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", choices=[m.value for m in enumeration.Mode], default="Z2Orthogonal")
    sp.add_argument("--constraint")
    sp.add_argument("--size", type=int)

    sp = verb("normalize-system", cmd_normalize_system, "moves carrying a full system to {E_i}")
    sp.add_argument("--classes", required=True, help="';'-separated classes or a JSON array")

    sp = verb("iota", cmd_iota, "embed an MBasis class into CP2Blowup(k+1)")
    sp.add_argument("--class", dest="cls", required=True)

    sp = verb("iota-inverse", cmd_iota_inverse, "inverse of iota on its image")
    sp.add_argument("--class", dest="cls", required=True)

    sp = verb("classify-minus4", cmd_classify_minus4, "classify a (-4)-sphere class")
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--bound", type=int, default=12)

    sp = verb("cut-betti", cmd_cut_betti, "Betti numbers after a symplectic cut")
    sp.add_argument("--lagrangian", choices=[x.value for x in surgery.Lagrangian], required=True)
    sp.add_argument("--b2plus", type=int, required=True)
    sp.add_argument("--b2minus", type=int, required=True)

    sp = verb("km", cmd_km, "Kervaire-Milnor test for characteristic classes")
    sp.add_argument("--class", dest="cls", required=True)

    sp = verb("pack", cmd_pack, "class-level ball packing feasibility")
    sp.add_argument("--ambient", choices=["cp2", "sxs"], required=True)
    sp.add_argument("--area")
    sp.add_argument("--alpha")
    sp.add_argument("--beta")
    sp.add_argument("--sizes", default="")

    sp = verb("pack-rp2", cmd_pack_rp2, "ball packing of CP2 minus RP2")
    sp.add_argument("--sizes", default="")

    sp = verb("census", cmd_census, "system counts for k = 1..k-max in both modes")
    sp.add_argument("--k-max", type=int, default=8)
    return p


def _stdin_argv(verb: str, data: Any) -> list[str]:
    if not isinstance(data, dict):
        raise ParseError("stdin must hold a JSON object of arguments")
    argv = [verb]
    for key, val in data.items():
        flag = "--" + str(key).replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
            continue
        # "=" keeps values such as "-H+2E1-E2" from reading as flags
        argv.append(f"{flag}={val if isinstance(val, str) else json.dumps(val)}")
    return argv


def _merge_stdin(parser: argparse.ArgumentParser, argv: list[str], stdin) -> list[str]:
    """Splice a JSON object of verb arguments from stdin in after the verb."""
    verbs = parser._subparsers._group_actions[0].choices  # noqa: SLF001
    pos = next((i for i, a in enumerate(argv) if a in verbs), None)
    if pos is None:
        raise UsageError("--stdin needs a verb")
    try:
        data = json.loads(stdin.read() or "{}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON on stdin: {exc}") from exc
    return argv[:pos] + _stdin_argv(argv[pos], data) + argv[pos + 1 :]


def _emit(obj: dict, stream) -> None:
    stream.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def main(argv: Optional[Sequence[str]] = None, stdin=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    verb = None
    try:
        if "--stdin" in argv:
            argv = _merge_stdin(parser, argv, stdin)
        ns = parser.parse_args(argv)
        verb = ns.verb
        payload, inconclusive = ns.fn(ns)
    except _VerifyFailed as exc:
        _emit({"schema": SCHEMA, "verb": verb, **exc.payload}, stdout)
        return EXIT_VERIFY_FAILED
    except LatticeError as exc:
        _emit({"schema": SCHEMA, "verb": verb, "error": {"code": exc.code, "message": str(exc)}}, stdout)
        return EXIT_BAD_INPUT
    _emit({"schema": SCHEMA, "verb": verb, **payload}, stdout)
    return EXIT_INCONCLUSIVE if inconclusive and ns.strict else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

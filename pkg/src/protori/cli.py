"""Command line front end: ``protori run script.pr`` plus one subcommand per verb.

Every command produces a verdict ``{command, status, payload, certificate,
bound_used}`` with status ok, inconclusive (bound-relative searches that
found nothing) or error.  JSON output uses sorted keys, rationals as
lowest-terms strings and the literal "inf", so identical inputs give
byte-identical output.  Exit code: 0 all ok, 3 any error, 4 any
inconclusive and no error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import adic, findual
from .arith import INF, format_rat
from .decomp import main as dm
from .decomp.search import find_rank1_idempotent
from .decomp.strands import StrandGroup
from .dsl import Command, Ref, Script, format_group, format_value, parse, pretty
from .errors import ProtoriError
from .solenoid import (
    TORUS,
    CanonicalASeq,
    ExplicitASeq,
    canonical_aseq,
    heights_of_aseq,
    solenoid_iso,
    solenoid_iso_by_homs,
    solenoid_of,
    terms,
)
from .typesys import (
    HeightSequence,
    TypeClass,
    canonical_type,
    format_heights,
    format_type,
    type_join,
    type_le,
    type_meet,
)

DEFAULTS = {"bound": 6, "prec": 8, "trials": 3, "seed": 0, "budget": 2000}
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 3, 4


class UsageError(ProtoriError, ValueError):
    code = "usage"


# --- JSON normal form -----------------------------------------------------------


def jsonable(x):
    if x is INF:
        return "inf"
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return format_rat(x)
    if isinstance(x, HeightSequence):
        return format_heights(x)
    if isinstance(x, TypeClass):
        return format_type(x)
    if isinstance(x, StrandGroup):
        return format_group(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False)


# --- execution ------------------------------------------------------------------


class _Ctx:
    def __init__(self, script: Script, defaults: dict):
        self.env = script.env()
        self.defaults = dict(DEFAULTS)
        self.defaults.update({k: v for k, v in defaults.items() if v is not None})

    def resolve(self, v):
        while isinstance(v, Ref):
            v = self.env[v.name].value
        return v

    def flag(self, cmd: Command, name):
        v = self.resolve(cmd.flag(name, self.defaults.get(name)))
        return v

    def int_flag(self, cmd, name) -> int:
        v = self.flag(cmd, name)
        if not isinstance(v, (int, Fraction)) or Fraction(v).denominator != 1:
            raise UsageError(f"--{name} needs an integer")
        return int(v)

    def args(self, cmd: Command, kinds):
        """Resolve positional arguments, checking each against a tuple of accepted types."""
        if len(cmd.args) != len(kinds):
            raise UsageError(f"{cmd.verb} takes {len(kinds)} argument(s), got {len(cmd.args)}")
        out = []
        for a, k in zip(cmd.args, kinds):
            v = self.resolve(a)
            if not isinstance(v, k):
                names = "/".join(t.__name__ for t in k) if isinstance(k, tuple) else k.__name__
                raise UsageError(f"{cmd.verb}: expected {names}, got {format_value(a)}")
            out.append(v)
        return out


ASEQ = (ExplicitASeq, CanonicalASeq)


def _verdict(cmd, payload, status="ok", certificate=None, bound_used=None):
    return {
        "command": pretty(Script([], [cmd])).strip(),
        "status": status,
        "payload": payload,
        "certificate": certificate,
        "bound_used": bound_used,
    }


def _heights_or_type(v) -> TypeClass:
    if isinstance(v, HeightSequence):
        return canonical_type(v)
    return solenoid_of(v).type


def _ints(v, what):
    if isinstance(v, (int, Fraction)):
        v = (v,)
    out = []
    for t in v:
        if Fraction(t).denominator != 1:
            raise UsageError(f"{what} must be integers")
        out.append(int(t))
    return out


def _digits(ctx, cmd, v, a, prec):
    ds = _ints(v, "digits")
    if len(ds) > prec:
        raise UsageError(f"{len(ds)} digits exceed precision {prec}")
    return adic.AdicInt(a, tuple(ds) + (0,) * (prec - len(ds)))


def _group_of(v):
    return v.dual if isinstance(v, dm.ProtorusDesc) else v


# verb implementations: (ctx, cmd) -> verdict or list of verdicts


def v_solenoid_type(ctx, cmd):
    (x,) = ctx.args(cmd, [ASEQ + (HeightSequence,)])
    h = x if isinstance(x, HeightSequence) else heights_of_aseq(x)
    t = canonical_type(h)
    return _verdict(cmd, {"type": t, "heights": h, "torus": t == canonical_type(HeightSequence(0))})


def v_solenoid_iso(ctx, cmd):
    x, y = ctx.args(cmd, [ASEQ + (HeightSequence,)] * 2)
    tx, ty = _heights_or_type(x), _heights_or_type(y)
    sx, sy = solenoid_of(canonical_aseq(tx.representative())), solenoid_of(
        canonical_aseq(ty.representative())
    )
    return _verdict(cmd, {"iso": solenoid_iso(sx, sy), "iso_by_homs": solenoid_iso_by_homs(sx, sy),
                          "type_a": tx, "type_b": ty})


def v_solenoid_canonical(ctx, cmd):
    (h,) = ctx.args(cmd, [HeightSequence])
    a = canonical_aseq(h)
    n = ctx.int_flag(cmd, "prec")
    if a is TORUS:
        return _verdict(cmd, {"torus": True, "aseq": None, "terms": None})
    return _verdict(cmd, {"torus": False, "aseq": str(a), "terms": terms(a, n)})


def v_type_le(ctx, cmd):
    x, y = ctx.args(cmd, [ASEQ + (HeightSequence,)] * 2)
    return _verdict(cmd, {"le": type_le(_heights_or_type(x), _heights_or_type(y))})


def v_type_join(ctx, cmd):
    x, y = ctx.args(cmd, [ASEQ + (HeightSequence,)] * 2)
    return _verdict(cmd, {"type": type_join(_heights_or_type(x), _heights_or_type(y))})


def v_type_meet(ctx, cmd):
    x, y = ctx.args(cmd, [ASEQ + (HeightSequence,)] * 2)
    return _verdict(cmd, {"type": type_meet(_heights_or_type(x), _heights_or_type(y))})


def _aseq_flag(ctx, cmd):
    a = ctx.flag(cmd, "aseq")
    if not isinstance(a, ASEQ):
        raise UsageError(f"{cmd.verb} needs --aseq")
    return a


def v_adic_add(ctx, cmd):
    a, n = _aseq_flag(ctx, cmd), ctx.int_flag(cmd, "prec")
    x, y = ctx.args(cmd, [(tuple, int, Fraction)] * 2)
    s = adic.adic_add(_digits(ctx, cmd, x, a, n), _digits(ctx, cmd, y, a, n))
    return _verdict(cmd, {"digits": list(s.digits), "prec": n})


def v_adic_neg(ctx, cmd):
    a, n = _aseq_flag(ctx, cmd), ctx.int_flag(cmd, "prec")
    (x,) = ctx.args(cmd, [(tuple, int, Fraction)])
    s = adic.adic_neg(_digits(ctx, cmd, x, a, n))
    return _verdict(cmd, {"digits": list(s.digits), "prec": n})


def v_adic_from_int(ctx, cmd):
    a, n = _aseq_flag(ctx, cmd), ctx.int_flag(cmd, "prec")
    (z,) = ctx.args(cmd, [(int, Fraction)])
    (z,) = _ints(z, "the integer")
    s = adic.adic_from_int(a, z, n)
    return _verdict(cmd, {"digits": list(s.digits), "prec": n})


def v_pair(ctx, cmd):
    a, n = _aseq_flag(ctx, cmd), ctx.int_flag(cmd, "prec")
    ctx.args(cmd, [])
    q, x, r = (ctx.flag(cmd, k) for k in ("q", "x", "r"))
    if q is None or x is None:
        raise UsageError("pair needs --q and --x")
    r = Fraction(0) if r is None else Fraction(r)
    x = _digits(ctx, cmd, x, a, max(n, len(_ints(x, "digits"))))
    pt = adic.point_canonicalize(x, r)
    angle = adic.pair(Fraction(q), pt)
    m, k = adic.dual_level(a, q, x.precision)
    return _verdict(cmd, {"angle": angle.value, "level": k, "numerator": m})


def v_member(ctx, cmd):
    g, x = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc), tuple])
    return _verdict(cmd, {"member": _group_of(g).member(x)})


def v_heights(ctx, cmd):
    g, x = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc), tuple])
    h = _group_of(g).element_heights(x)
    return _verdict(cmd, {"heights": h, "type": canonical_type(h)})


def _idem(e):
    return {"v": list(e.v), "f": list(e.f)}


def v_decompose(ctx, cmd):
    (g,) = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc)])
    bound = ctx.int_flag(cmd, "bound")
    a = _group_of(g)
    d = dm.main_decompose(a, bound)
    payload = {
        "torus_types": d.torus_types,
        "remainder_rank": d.remainder.rank,
        "remainder": d.remainder,
        "complete": d.complete,
        "certified_completely_decomposable": d.certified,
    }
    if isinstance(g, dm.ProtorusDesc):
        payload["factors"] = [dm.solenoid_label(t) for t in d.torus_types]
        payload["max_torus_rank"] = sum(1 for t in d.torus_types if t == canonical_type(HeightSequence(0)))
        payload["clipped_torus_free"] = dm.is_torus_free(d.remainder)
        payload["clipped_no_Q_quotient"] = not dm.has_Q_summand(d.remainder)
        payload["dimension"] = a.rank
    status = "ok" if d.certified else "inconclusive"
    return _verdict(cmd, payload, status, {"idempotents": [_idem(e) for e in d.idempotents]}, bound)


def v_clipped(ctx, cmd):
    (g,) = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc)])
    bound = ctx.int_flag(cmd, "bound")
    a = _group_of(g)
    if a.rank == 0:
        return _verdict(cmd, {"clipped": True, "rank": 0}, "ok", None, bound)
    e = find_rank1_idempotent(a, bound)
    if e is not None:
        return _verdict(cmd, {"clipped": False, "rank": a.rank}, "ok", {"idempotent": _idem(e)}, bound)
    return _verdict(cmd, {"clipped": None, "no_idempotent_at_bound": True, "rank": a.rank},
                    "inconclusive", None, bound)


def v_neariso(ctx, cmd):
    g, h = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc)] * 2)
    bound, budget = ctx.int_flag(cmd, "bound"), ctx.int_flag(cmd, "budget")
    res = dm.near_iso(_group_of(g), _group_of(h), bound, budget)
    payload = {
        "verdict": res.verdict,
        "multipliers": sorted(res.multipliers),
        "searched": res.searched,
        "exhausted": res.exhausted,
        "reason": res.reason,
    }
    cert = [{"n": w["n"], "phi": w["phi"], "psi": w["psi"]} for w in res.witnesses]
    status = "inconclusive" if res.verdict == "inconclusive" else "ok"
    return _verdict(cmd, payload, status, {"witnesses": cert}, bound)


def v_dual(ctx, cmd):
    (g,) = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc)])
    if isinstance(g, dm.ProtorusDesc):
        return _verdict(cmd, {"kind": "group", "rank": g.dual.rank, "value": format_group(g.dual)})
    p = dm.ProtorusDesc(g)
    return _verdict(cmd, {"kind": "protorus", "dimension": dm.protorus_dim(p),
                          "value": format_value(p)})


def v_dim(ctx, cmd):
    (g,) = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc)])
    p = g if isinstance(g, dm.ProtorusDesc) else dm.ProtorusDesc(g)
    d = dm.protorus_dim(p)
    return _verdict(cmd, {"dim": d, "totally_disconnected": d == 0})


def v_check_uniqueness(ctx, cmd):
    (g,) = ctx.args(cmd, [(StrandGroup, dm.ProtorusDesc)])
    bound, trials = ctx.int_flag(cmd, "bound"), ctx.int_flag(cmd, "trials")
    seed, budget = ctx.int_flag(cmd, "seed"), ctx.int_flag(cmd, "budget")
    rep = dm.uniqueness_check(_group_of(g), trials, bound, seed, budget)
    runs = [
        {
            "strand_order": r["strand_order"],
            "coord_order": r["coord_order"],
            "torus_types": r["decomposition"].torus_types,
            "remainder_rank": r["decomposition"].remainder.rank,
        }
        for r in rep["runs"]
    ]
    pairs = [{"runs": list(p["runs"]), "verdict": p["verdict"], "multipliers": p["multipliers"]}
             for p in rep["pairs"]]
    status = "inconclusive" if any(p["verdict"] == "inconclusive" for p in pairs) else "ok"
    return _verdict(cmd, {"consistent": rep["ok"], "types_equal": rep["types_equal"],
                          "runs": runs, "pairs": pairs, "seed": seed}, status, None, bound)


def v_findual_check(ctx, cmd):
    ctx.args(cmd, [])
    path = ctx.flag(cmd, "seq")
    if not isinstance(path, str):
        raise UsageError('findual-check needs --seq "<file>"')
    with open(path, encoding="utf-8") as fh:
        blocks = findual.parse_sequences(fh.read())
    out = []
    for b in blocks:
        try:
            out.append(_verdict(cmd, findual.check_sequence(b)))
        except (ProtoriError, ValueError) as e:
            out.append(_error(cmd, e, extra={"name": b["name"]}))
    return out


VERBS = {
    "solenoid-type": v_solenoid_type,
    "solenoid-iso": v_solenoid_iso,
    "solenoid-canonical": v_solenoid_canonical,
    "type-le": v_type_le,
    "type-join": v_type_join,
    "type-meet": v_type_meet,
    "adic-add": v_adic_add,
    "adic-neg": v_adic_neg,
    "adic-from-int": v_adic_from_int,
    "pair": v_pair,
    "member": v_member,
    "heights": v_heights,
    "decompose": v_decompose,
    "clipped": v_clipped,
    "neariso": v_neariso,
    "dual": v_dual,
    "dim": v_dim,
    "check-uniqueness": v_check_uniqueness,
    "findual-check": v_findual_check,
}


def _error(cmd, exc, extra=None):
    code = getattr(exc, "code", None) or ("invalid_argument" if isinstance(exc, ValueError) else "internal")
    payload = {"error": code, "message": str(exc)}
    payload.update(extra or {})
    return _verdict(cmd, payload, "error")


def run(script: Script, **defaults) -> list:
    """Execute every command of a parsed script, in order."""
    ctx = _Ctx(script, defaults)
    out = []
    for cmd in script.commands:
        fn = VERBS.get(cmd.verb)
        try:
            if fn is None:
                raise UsageError(f"unknown verb {cmd.verb!r}")
            res = fn(ctx, cmd)
        except (ProtoriError, ValueError, ArithmeticError, OSError) as e:
            res = _error(cmd, e)
        except Exception as e:  # noqa: BLE001 - a verdict, never a crash
            res = _error(cmd, e, {"exception": type(e).__name__})
        out.extend(res if isinstance(res, list) else [res])
    return out


def exit_code(verdicts) -> int:
    statuses = {v["status"] for v in verdicts}
    if "error" in statuses:
        return EXIT_ERROR
    if "inconclusive" in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def format_text(verdicts) -> str:
    lines = []
    for v in verdicts:
        head = f"[{v['status']}] {v['command']}"
        if v["bound_used"] is not None:
            head += f"  (bound {v['bound_used']})"
        lines.append(head)
        for k, val in sorted(jsonable(v["payload"]).items()):
            lines.append(f"  {k}: {json.dumps(val, ensure_ascii=False)}")
    return "\n".join(lines) + ("\n" if lines else "")


# --- argparse front end -----------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--bound", type=int, help="search bound (default 6)")
    p.add_argument("--prec", type=int, help="adic precision (default 8)")
    p.add_argument("--trials", type=int, help="uniqueness trials (default 3)")
    p.add_argument("--seed", type=int, help="permutation seed (default 0)")
    p.add_argument("--budget", type=int, help="near-isomorphism matrix budget (default 2000)")
    p.add_argument("--defs", help="script file whose bindings the arguments may name")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="protori", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", parents=[common], help="run a script (file or stdin)")
    p.add_argument("file", nargs="?", help="script file; standard input when omitted or '-'")

    sol = sub.add_parser("solenoid", help="solenoid classification").add_subparsers(dest="sub", required=True)
    sol.add_parser("type", parents=[common]).add_argument("x")
    p = sol.add_parser("iso", parents=[common])
    p.add_argument("x")
    p.add_argument("y")
    sol.add_parser("canonical", parents=[common]).add_argument("x")

    ty = sub.add_parser("type", help="type lattice").add_subparsers(dest="sub", required=True)
    for name in ("le", "join", "meet"):
        p = ty.add_parser(name, parents=[common])
        p.add_argument("x")
        p.add_argument("y")

    ad = sub.add_parser("adic", help="truncated adic integers").add_subparsers(dest="sub", required=True)
    for name, n in (("add", 2), ("neg", 1), ("from-int", 1)):
        p = ad.add_parser(name, parents=[common])
        p.add_argument("--aseq", required=True)
        p.add_argument("operands", nargs=n)

    p = sub.add_parser("pair", parents=[common], help="character pairing <q, (x, r)>")
    p.add_argument("--aseq", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--x", required=True, help="digits [d0,d1,...] (little-endian)")
    p.add_argument("--r", default="0")

    fd = sub.add_parser("findual", help="finite duality").add_subparsers(dest="sub", required=True)
    fd.add_parser("check", parents=[common]).add_argument("--seq", required=True)

    for name, n in (("member", 2), ("heights", 2), ("decompose", 1), ("clipped", 1),
                    ("neariso", 2), ("dual", 1), ("dim", 1), ("check-uniqueness", 1)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("operands", nargs=n)
    return ap


def _flag_text(ns) -> str:
    parts = []
    for k in ("bound", "prec", "trials", "seed", "budget"):
        v = getattr(ns, k, None)
        if v is not None:
            parts.append(f"--{k} {v}")
    return " ".join(parts)


def _command_source(ns) -> str:
    """Translate a subcommand invocation into one script command line."""
    if ns.cmd in ("solenoid", "type"):
        verb = f"{ns.cmd}-{ns.sub}"
        ops = [ns.x] + ([ns.y] if getattr(ns, "y", None) else [])
        return f"{verb} {' '.join(ops)}"
    if ns.cmd == "adic":
        return f"adic-{ns.sub} {' '.join(ns.operands)} --aseq {ns.aseq}"
    if ns.cmd == "pair":
        return f"pair --aseq {ns.aseq} --q {ns.q} --x {ns.x} --r {ns.r}"
    if ns.cmd == "findual":
        return f"findual-check --seq {json.dumps(ns.seq)}"
    return f"{ns.cmd} {' '.join(ns.operands)}"


def _emit(verdicts, fmt, single=False):
    if fmt == "text":
        sys.stdout.write(format_text(verdicts))
    else:
        sys.stdout.write(dumps(verdicts[0] if single and len(verdicts) == 1 else verdicts) + "\n")


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    defaults = {k: getattr(ns, k, None) for k in ("bound", "prec", "trials", "seed", "budget")}
    try:
        if ns.cmd == "run":
            if ns.file in (None, "-"):
                src = sys.stdin.read()
            else:
                with open(ns.file, encoding="utf-8") as fh:
                    src = fh.read()
            script = parse(src)
            single = False
        else:
            defs = ""
            if ns.defs:
                with open(ns.defs, encoding="utf-8") as fh:
                    defs = fh.read()
                defs_script = parse(defs)
                defs = pretty(Script(defs_script.bindings, []))
            script = parse(defs + _command_source(ns) + "\n")
            single = ns.cmd != "findual"
    except (ProtoriError, OSError) as e:
        verdict = _error(Command("parse"), e)
        if getattr(e, "line", None) is not None:
            verdict["payload"]["line"] = e.line
            verdict["payload"]["column"] = e.column
        _emit([verdict], ns.format, single=True)
        return EXIT_ERROR
    verdicts = run(script, **defaults)
    _emit(verdicts, ns.format, single)
    return exit_code(verdicts)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

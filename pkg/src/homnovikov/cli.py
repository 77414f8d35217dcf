"""Command-line front end: ``homnovikov {check,construct,analyze,demo,enumerate}``.

Exit codes: 0 when every check holds, 1 when at least one check produced a
witness, 2 when the input could not be processed (nothing was checked).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import constructions as cons
from . import quadratic as quad
from . import specfile
from .core import LinearOperator, StructureBundle
from .errors import HomNovikovError, PreconditionError
from .families import FamilySpec, SparseElement, embed_window, window_validate, window_verify
from .fields import parse_field, parse_rational
from .identities import CATALOG, KINDS, Identity, Report, ReportEntry, Verdict, check_identity, random_sanity, validate

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization


def _value(field, v):
    if isinstance(v, SparseElement):
        return {k.name(field): str(c) for k, c in v.items()}
    if isinstance(v, list):
        return [_value(field, x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if v is None:
        return None
    return str(v)


def _witness(w, variant=None):
    if w is None:
        return None
    tup = w.tuple
    if tup is not None:
        tup = [g.name(variant) if hasattr(g, "name") and variant else int(g) for g in tup]
    out = {"tuple": tup, "lhs": _value(variant, w.lhs), "rhs": _value(variant, w.rhs)}
    if w.args is not None:
        out["args"] = _value(variant, w.args)
    return out


def _entry(e: ReportEntry, variant=None, **extra) -> dict:
    d = {"identity": e.check, "role": e.role, "holds": e.verdict.holds}
    if not e.verdict.holds:
        d["witness"] = _witness(e.verdict.witness, variant)
    d.update(extra)
    return d


def _report_entries(report: Report, variant=None, **extra) -> list[dict]:
    return [_entry(e, variant, **extra) for e in report.entries]


def _emit(args, doc: dict, text: str, code: int) -> int:
    doc["verdict"] = {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_ERROR: "error"}[code]
    doc["provenance"] = {
        "argv": list(args.argv),
        "input_digest": getattr(args, "_digest", None),
        "seed": args.seed,
    }
    rendered = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    out = getattr(args, "out", None)
    if out and args.command != "construct":
        Path(out).write_text(rendered, encoding="utf-8")
    if args.json:
        sys.stdout.write(rendered)
    elif code == EXIT_ERROR:
        sys.stderr.write(text.rstrip() + "\n")
    else:
        sys.stdout.write(text.rstrip() + "\n")
    return code


def _code(checks: list[dict]) -> int:
    return EXIT_PASS if all(c["holds"] for c in checks) else EXIT_FAIL


def _checks_text(title: str, checks: list[dict]) -> str:
    lines = [title]
    for c in checks:
        tag = c["identity"] if c.get("role") in (None, "product") else f"{c['identity']}[{c['role']}]"
        if c.get("suite"):
            tag = f"{c['suite']}: {tag}"
        if c["holds"]:
            lines.append(f"  {tag}: ok")
        else:
            w = c.get("witness") or {}
            lines.append(f"  {tag}: FAILS at {tuple(w.get('tuple') or ())} lhs={w.get('lhs')} rhs={w.get('rhs')}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# loading


def _load(args, path=None):
    path = path or args.file
    raw = specfile.read_bytes(path)
    if path == args.file:
        args._digest = specfile.digest(raw)
    field = parse_field(args.field) if args.field else None
    return specfile.loads(raw, field)


def _bindings(args) -> dict:
    return {"dot": args.dot, "star": args.star, "alpha": args.alpha, "partial": args.del_, "form": args.form}


def _bundle(args, need=frozenset(), path=None) -> StructureBundle:
    return specfile.bind(_load(args, path), _bindings(args), need)


_KIND_NEEDS = {
    "hom-associative-commutative": {"alpha"}, "hom-lie": {"alpha"}, "hom-novikov": {"alpha"},
    "hom-novikov-poisson": {"alpha"}, "quadratic-novikov": {"form"},
    "quadratic-hom-novikov": {"alpha", "form"}, "quadratic-hom-lie": {"alpha", "form"},
}


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    idents = [Identity(i) for i in args.identity or []]
    if not args.kind and not idents:
        raise InputError("give --kind or at least one --identity")
    if args.kind and args.kind not in KINDS:
        raise InputError(f"unknown kind {args.kind!r}; choose from {', '.join(sorted(KINDS))}")
    need = set(_KIND_NEEDS.get(args.kind, set()))
    for i in idents:
        need |= CATALOG[i].roles
    bundle = _bundle(args, need)
    checks = []
    if args.kind:
        checks += _report_entries(validate(bundle, args.kind, require_morphism=not args.no_morphism))
    for i in idents:
        checks.append(_entry(ReportEntry(i.value, None, check_identity(bundle, i))))
    if args.random_trials:
        for i in idents or [e for e, _ in KINDS[args.kind] if isinstance(e, Identity)]:
            v = random_sanity(bundle, i, trials=args.random_trials, seed=args.seed)
            checks.append(_entry(ReportEntry(i.value, None, v), method="random"))
    title = f"check {args.kind or ','.join(i.value for i in idents)} over {bundle.field.name} (dim {bundle.dim})"
    code = _code(checks)
    return _emit(args, {"command": "check", "kind": args.kind, "checks": checks}, _checks_text(title, checks), code)


# ---------------------------------------------------------------------------
# construct


def _scalar_arg(field, text):
    return field(parse_rational(text))


def _identity_like(bundle):
    return bundle.with_(alpha=LinearOperator.identity(bundle.field, bundle.dim))


def _construct(args):
    """Return (output SpecDocument, bundle to validate, predicted kind or identity)."""
    name = args.construction
    F = specfile.from_bundle
    if name == "yau-twist":
        b = _bundle(args, {"alpha"})
        out = cons.yau_twist(b.product, b.get("alpha"))
        return F(out), out, "hom-novikov"
    if name == "power-twist":
        b = _bundle(args, {"alpha"})
        out = cons.power_twist(b.product, b.get("alpha"), args.n)
        return F(out), out, "hom-novikov"
    if name == "commutator":
        b = _bundle(args)
        out = cons.commutator_bracket(b.product, b.alpha)
        return F(out), out if out.alpha is not None else _identity_like(out), "hom-lie"
    if name == "involutive-untwist":
        A = cons.involutive_untwist(_bundle(args, {"alpha"}))
        return specfile.from_algebra(A), StructureBundle(star=A), "novikov"
    if name == "alpha-inverse-bracket":
        A = cons.alpha_inverse_bracket(_bundle(args, {"alpha"}))
        return specfile.from_algebra(A), _identity_like(StructureBundle(star=A)), "hom-lie"
    if name == "gd-lambda":
        b = _bundle(args, {"partial"})
        lam = _scalar_arg(b.field, args.lam)
        A = cons.gd_lambda_product(b.get("dot") if b.dot is not None else b.product, b.get("partial"), lam)
        return specfile.from_algebra(A), StructureBundle(star=A), "novikov"
    if name == "partial-star":
        out = cons.partial_star_product(_bundle(args, {"partial"}))
        return F(out), out, "hom-novikov"
    if name == "derivation-np":
        out = cons.derivation_np_product(_bundle(args, {"partial"}))
        return F(out), out, "hom-novikov-poisson"
    if name == "np-yau-twist":
        b = _bundle(args, {"alpha"})
        out = cons.np_yau_twist(b, b.get("alpha"))
        return F(out), out, "hom-novikov-poisson"
    if name == "tensor-np":
        if not args.with_:
            raise InputError("tensor-np needs --with OTHER_FILE")
        b1 = _bundle(args)
        b2 = _bundle(args, path=args.with_)
        out = cons.tensor_np(b1, b2)
        return F(out), out, "hom-novikov-poisson" if out.alpha is not None else "novikov-poisson"
    if name == "unity-derivation":
        b = _bundle(args)
        d = cons.unity_derivation(b)
        out = StructureBundle(dot=b.get("dot"), star=b.get("star"), partial=d)
        return F(out), out, Identity.DERIVATION
    if name == "twist-form":
        b = _bundle(args, {"alpha", "form"})
        out = b.with_(form=quad.twist_form(b.get("form"), b.get("alpha"), args.n))
        return F(out), None, None
    if name == "quadratic-homlie":
        out = quad.derive_quadratic_homlie(_bundle(args, {"alpha", "form"}), args.mode)
        return F(out), out, "quadratic-hom-lie"
    if name == "quadratic-untwist":
        out = quad.quadratic_novikov_from_involutive(_bundle(args, {"alpha", "form"}))
        return F(out), out, "quadratic-novikov"
    if name == "quadratic-power-twist":
        out = quad.quadratic_power_twist(_bundle(args, {"alpha", "form"}), args.n)
        return F(out), out, "quadratic-hom-novikov"
    raise InputError(f"unknown construction {name!r}")


CONSTRUCTIONS = (
    "yau-twist", "power-twist", "commutator", "involutive-untwist", "alpha-inverse-bracket", "gd-lambda",
    "partial-star", "derivation-np", "np-yau-twist", "tensor-np", "unity-derivation", "twist-form",
    "quadratic-homlie", "quadratic-untwist", "quadratic-power-twist",
)


def cmd_construct(args) -> int:
    doc, bundle, predicted = _construct(args)
    checks = []
    if isinstance(predicted, Identity):
        checks.append(_entry(ReportEntry(predicted.value, "dot", check_identity(bundle, predicted, "dot"))))
    elif predicted:
        checks = _report_entries(validate(bundle, predicted))
    rendered = specfile.dumps(doc)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    text = _checks_text(f"{args.construction}: output dim {doc.dim}, predicted {predicted or '-'}", checks)
    if not args.out:
        text += "\n" + rendered
    report = {
        "command": "construct",
        "construction": args.construction,
        "predicted": str(predicted) if predicted else None,
        "checks": checks,
        "construction_output": specfile.to_dict(doc),
    }
    return _emit(args, report, text, _code(checks))


# ---------------------------------------------------------------------------
# analyze


def _subspace(field, sub) -> list:
    return [[field.format(x) for x in row] for row in sub.basis]


def cmd_analyze(args) -> int:
    if args.what == "center":
        b = _bundle(args)
        A = b.product
        z = quad.center(A)
        analysis = {"center": {"dim": z.dim, "basis": _subspace(A.field, z)}}
        text = f"center of {A.label or 'product'}: dim {z.dim}\n" + "\n".join(f"  {r}" for r in _subspace(A.field, z))
        return _emit(args, {"command": "analyze", "analysis": analysis, "checks": []}, text, EXIT_PASS)
    if args.what == "lcs":
        b = _bundle(args)
        L = b.product
        if args.commutator:
            L = cons.commutator_bracket(L).star
        series = quad.lower_central_series(L, args.max_steps)
        dims = [s.dim for s in series]
        analysis = {"lcs_dims": dims, "series": [_subspace(L.field, s) for s in series]}
        return _emit(args, {"command": "analyze", "analysis": analysis, "checks": []}, f"lcs dims {dims}", EXIT_PASS)
    b = _bundle(args, {"alpha", "form"})
    rep = quad.nilpotency_report(b, require_alpha_compat=not args.weak)
    analysis = {
        "derived_in_center": rep.derived_in_center,
        "two_step": rep.two_step,
        "lcs_dims": rep.lcs_dims,
        "alpha_compat": rep.alpha_compat,
        "counterexample?": rep.counterexample,
        "field": b.field.name,
        "scope": "exact over Q" if b.field.p is None else "finite-field evidence only",
    }
    checks = [
        {"identity": "derived-in-center", "role": None, "holds": rep.derived_in_center},
        {"identity": "two-step-nilpotent", "role": None, "holds": rep.two_step},
    ]
    text = (
        f"derived_in_center={rep.derived_in_center} two_step={rep.two_step} lcs={rep.lcs_dims}"
        + ("  counterexample?" if rep.counterexample else "")
    )
    return _emit(args, {"command": "analyze", "analysis": analysis, "checks": checks}, text, _code(checks))


# ---------------------------------------------------------------------------
# demo

LAURENT_SUITES = {
    "novikov-star1": ("novikov", {"star": "star1"}, (-6, 6)),
    "hom-novikov-star2": ("hom-novikov", {"star": "star2", "alpha": "alpha"}, (0, 6)),
    "gd2": (Identity.GD2, {"dot": "dot", "del": "del"}, (-6, 6)),
    "hom-assoc-bullet": ("hom-associative-commutative", {"dot": "bullet", "alpha": "alpha", "del": "del"}, (0, 6)),
    "del-derivation": (Identity.DERIVATION, {"dot": "dot", "del": "del"}, (1, 6)),
}
LAURENT_DEFAULT = ("novikov-star1", "hom-novikov-star2", "gd2", "hom-assoc-bullet")

INDEXED_SUITES = {
    "np": ("novikov-poisson", {"dot": "dot56", "star": "star"}, (-5, 5)),
    "hom-np": ("hom-novikov-poisson", {"dot": "bullet", "star": "hstar", "alpha": "alpha"}, (-5, 5)),
    "del2": (Identity.DERIVATION, {"dot": "dot56", "del": "del2"}, (-5, 5)),
    "unity": (None, {"dot": "dot56", "star": "star", "del": "del"}, None),
}
INDEXED_DEFAULT = ("np", "hom-np", "unity")


def _parse_window(text):
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise InputError(f"window must look like LO..HI, got {text!r}") from None


def _unity_check(spec: FamilySpec, roles, window):
    """Embed a closed quotient window containing the unit and compare the
    unit-derived derivation with ``del``."""
    bundle = embed_window(spec, roles, window, quotient=True)
    d = cons.unity_derivation(bundle.with_(partial=None))
    holds = d.m.tolist() == bundle.partial.m.tolist()
    w = None
    if not holds:
        from .identities import Witness

        j = next(j for j in range(bundle.dim) if list(d.m[:, j]) != list(bundle.partial.m[:, j]))
        w = Witness("unity-derivation", (j,), list(d.m[:, j]), list(bundle.partial.m[:, j]))
    return Verdict(holds, w), bundle


def cmd_demo(args) -> int:
    if args.family == "laurent":
        spec = FamilySpec("laurent", c=parse_rational(args.c))
        suites, default = LAURENT_SUITES, LAURENT_DEFAULT
    else:
        spec = FamilySpec("indexed", q=args.q, s=parse_rational(args.s), beta=parse_rational(args.beta))
        suites, default = INDEXED_SUITES, INDEXED_DEFAULT
    chosen = args.suite or list(default)
    for s in chosen:
        if s not in suites:
            raise InputError(f"unknown suite {s!r} for {args.family}; choose from {', '.join(suites)}")
    override = _parse_window(args.window) if args.window else None
    checks = []
    for s in chosen:
        what, roles, window = suites[s]
        if s == "unity":
            lo = override[0] if override else -spec.q
            win = override or (lo, lo + 4)
            v, _ = _unity_check(spec, roles, win)
            checks.append(_entry(ReportEntry("unity-derivation", None, v), args.family, suite=s, window=list(win)))
            continue
        win = override or window
        if isinstance(what, Identity):
            v = window_verify(spec, what, roles, win)
            role = "dot" if "product" in CATALOG[what].roles else None
            checks.append(_entry(ReportEntry(what.value, role, v), args.family, suite=s, window=list(win)))
        else:
            rep = window_validate(spec, what, roles, win)
            checks += _report_entries(rep, args.family, suite=s, window=list(win))
    params = {"c": str(spec.c)} if args.family == "laurent" else {"q": spec.q, "s": str(spec.s), "beta": str(spec.beta)}
    title = f"demo {args.family} " + " ".join(f"{k}={v}" for k, v in params.items())
    doc = {"command": "demo", "family": args.family, "parameters": params, "checks": checks}
    return _emit(args, doc, _checks_text(title, checks), _code(checks))


# ---------------------------------------------------------------------------
# enumerate


def cmd_enumerate(args) -> int:
    b = _bundle(args)
    A = b.product
    found = cons.enumerate_endomorphisms(A)
    mats = [[[A.field.format(x) for x in row] for row in op.m] for op in found]
    analysis = {"what": "endomorphisms", "count": len(found), "matrices": mats}
    text = f"{len(found)} endomorphisms of {A.label or 'product'} over {A.field.name}"
    return _emit(args, {"command": "enumerate", "analysis": analysis, "checks": []}, text, EXIT_PASS)


# ---------------------------------------------------------------------------
# parser


def _common(p):
    p.add_argument("--field", help="override the file's field: Q or GF:p")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--out", help="write the report (construct: the output spec) to PATH")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of text")


def _roles(p):
    p.add_argument("--dot", help="product bound to the commutative role")
    p.add_argument("--star", help="product bound to the Novikov role")
    p.add_argument("--alpha", help="map bound to the twist")
    p.add_argument("--del", dest="del_", help="map bound to the derivation role")
    p.add_argument("--form", help="bilinear form")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homnovikov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate an algebra spec against an axiom suite")
    p.add_argument("file")
    p.add_argument("--kind", help=f"one of: {', '.join(KINDS)}")
    p.add_argument("--identity", action="append", help="single cataloged identity (repeatable)")
    p.add_argument("--no-morphism", action="store_true", help="skip the twist-is-a-homomorphism checks")
    p.add_argument("--random-trials", type=int, default=0, help="also run N seeded random-vector checks")
    _roles(p)
    _common(p)

    p = sub.add_parser("construct", help="apply a construction and emit the resulting spec")
    p.add_argument("file")
    p.add_argument("construction", choices=CONSTRUCTIONS)
    p.add_argument("--n", type=int, default=1, help="exponent for power twists")
    p.add_argument("--lambda", dest="lam", default="0", help="scalar for gd-lambda")
    p.add_argument("--mode", default="from-hom-novikov", choices=["from-hom-novikov", "from-novikov-with-automorphism"])
    p.add_argument("--with", dest="with_", help="second spec file for tensor-np")
    _roles(p)
    _common(p)

    p = sub.add_parser("analyze", help="center, lower central series, nilpotency")
    p.add_argument("file")
    p.add_argument("what", choices=["center", "lcs", "nilpotency"])
    p.add_argument("--commutator", action="store_true", help="lcs of the commutator of the product")
    p.add_argument("--max-steps", type=int, default=64)
    p.add_argument("--weak", action="store_true", help="nilpotency without requiring B(ax,y)=B(x,ay)")
    _roles(p)
    _common(p)

    p = sub.add_parser("demo", help="windowed checks on the infinite example families")
    p.add_argument("family", choices=["laurent", "indexed"])
    p.add_argument("--c", default="0")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--s", default="1")
    p.add_argument("--beta", default="2")
    p.add_argument("--window", help="grade range LO..HI (overrides each suite's default)")
    p.add_argument("--suite", action="append", help="suite name (repeatable)")
    _common(p)

    p = sub.add_parser("enumerate", help="exhaustive search over GF(p)")
    p.add_argument("file")
    p.add_argument("what", nargs="?", default="endomorphisms", choices=["endomorphisms"])
    _roles(p)
    _common(p)
    return parser


def _merge_negative_values(argv: list[str]) -> list[str]:
    """``--window -5..5`` -> ``--window=-5..5`` so argparse does not read an option."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--window", "--c", "--s", "--beta", "--lambda", "--q") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


COMMANDS = {"check": cmd_check, "construct": cmd_construct, "analyze": cmd_analyze, "demo": cmd_demo, "enumerate": cmd_enumerate}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_negative_values(argv))
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_PASS
    args.argv = argv
    try:
        return COMMANDS[args.command](args)
    except (HomNovikovError, InputError, ValueError, KeyError, ZeroDivisionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        doc = {"command": args.command, "checks": [], "error": f"{type(exc).__name__}: {msg}"}
        if isinstance(exc, PreconditionError) and exc.witness is not None:
            w = exc.witness
            doc["witness"] = _witness(w) if hasattr(w, "lhs") else list(w)
        return _emit(args, doc, f"error: {msg}", EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())

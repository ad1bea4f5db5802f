"""Command-line front end.

Exit codes: 0 success, 1 a mathematically negative answer (not represented,
excluded, verification failed), 2 usage or input error, 3 internal or
search failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Sequence

from . import forms, obstruction, witness
from .fixtures import WORKED_EXAMPLES
from .modarith import DEFAULT_SEARCH_CAP, SearchExhausted

OK, NEGATIVE, USAGE, FAILURE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(witness._json_safe(payload), sort_keys=True))
    else:
        print(text)


def _range(spec: str) -> range:
    try:
        lo, hi = (int(x) for x in spec.split(".."))
    except ValueError:
        raise UsageError(f"--range expects lo..hi, got {spec!r}") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad range {spec!r}")
    return range(lo, hi + 1)


def _targets(args) -> list[int]:
    if args.range:
        if args.m is not None:
            raise UsageError("give either m or --range, not both")
        return list(_range(args.range))
    if args.m is None:
        raise UsageError("m is required")
    if args.m < 1:
        raise UsageError("m must be positive")
    return [args.m]


def _form(text: str) -> forms.TernaryForm:
    try:
        Q = forms.TernaryForm.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not forms.is_positive_definite(Q):
        raise UsageError(f"{Q} is not positive definite")
    return Q


def _theorem(n: int) -> obstruction.Theorem:
    try:
        return obstruction.theorem(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --- commands -------------------------------------------------------------------

def cmd_decide(args) -> int:
    t = _theorem(args.theorem)
    results, lines = [], []
    for m in _targets(args):
        hit = t.pattern.match(m)
        if hit is None:
            results.append({"theorem": t.number, "m": m, "represented": True})
            lines.append(f"{m}: REPRESENTED" if args.range else "REPRESENTED")
        else:
            k, l = hit
            results.append({"theorem": t.number, "m": m, "represented": False, "k": k, "l": l})
            text = f"EXCLUDED {t.pattern.describe(m)}"
            lines.append(f"{m}: {text}" if args.range else text)
    _emit(args, results if args.range else results[0], "\n".join(lines))
    if args.range:
        return OK
    return OK if results[0]["represented"] else NEGATIVE


def cmd_represent(args) -> int:
    Q = _form(args.form)
    if args.m < 0:
        raise UsageError("m must be non-negative")
    reps = forms.enumerate_representations(Q, args.m)
    vecs = reps if args.all else reps[:1]
    payload = {"form": list(Q.coefficients), "m": args.m, "count": len(reps),
               "vectors": [list(v) for v in vecs]}
    text = "NONE" if not reps else "\n".join(f"({v.x},{v.y},{v.z})" for v in vecs)
    _emit(args, payload, text)
    return OK if reps else NEGATIVE


def _summary(c: witness.Certificate) -> str:
    ap = f" (a' = {c.a_prime})" if c.a_prime is not None else ""
    n = c.eliminating_residue
    return (f"theorem {c.theorem_id}, m = {c.m}, case {c.case_id}: a = {c.a}{ap}, b = {c.b}, "
            f"h = {c.h}, A = {c.A}, B = {c.B}\n"
            f"  Q' = {c.form} = {c.form.polynomial()}\n"
            f"  Q'{tuple(c.eval_vector)} = {c.eval_value} = {c.prime}*{n}, "
            f"({n}/{c.prime}) = -1")


def cmd_certify(args) -> int:
    _theorem(args.theorem)
    certs, lines, status = [], [], OK
    for m in _targets(args):
        try:
            cert = witness.generate(args.theorem, m, args.cap)
        except witness.UnsupportedInput as exc:
            if not obstruction.decide(args.theorem, m):
                code = NEGATIVE
            elif "squarefree" in str(exc):
                code = USAGE
            else:
                code = FAILURE
            if not args.range:
                print(f"error: {exc}", file=sys.stderr)
                return code
            lines.append(f"{m}: skipped ({exc})")
            continue
        except (SearchExhausted, witness.CertificateError) as exc:
            print(f"error: m = {m}: {exc}", file=sys.stderr)
            if not args.range:
                return FAILURE
            status = FAILURE
            continue
        certs.append(cert)
        lines.append(_summary(cert))
    data = [c.to_dict() for c in certs]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data if args.range else data[0], fh, indent=2)
            fh.write("\n")
    _emit(args, data if args.range else data[0], "\n".join(lines))
    return status


def cmd_verify(args) -> int:
    try:
        with open(args.file) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.file}: invalid JSON ({exc})") from None
    items = raw if isinstance(raw, list) else [raw]
    try:
        certs = [witness.Certificate.from_dict(d) for d in items]
    except (witness.CertificateFormatError, TypeError, AttributeError) as exc:
        raise UsageError(str(exc)) from None
    reports = [witness.verify(c) for c in certs]
    payload = [{"m": c.m, "theorem_id": c.theorem_id, "ok": r.ok, "check": r.check,
                "message": r.message} for c, r in zip(certs, reports)]
    text = "\n".join(str(r) if len(certs) == 1 else f"m = {c.m}: {r}"
                     for c, r in zip(certs, reports))
    _emit(args, payload if isinstance(raw, list) else payload[0], text)
    return OK if all(reports) else NEGATIVE


def cmd_classes(args) -> int:
    if args.D < 1:
        raise UsageError("D must be positive")
    cl = forms.enumerate_classes(args.D, primitive=not args.all_classes)
    payload = {"determinant": cl.determinant,
               "classes": [list(R.coefficients) for R in cl]}
    lines = [f"{len(cl)} classes of determinant {cl.determinant}"]
    lines += [f"  {R}  {R.polynomial()}" for R in cl]
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_obstruction(args) -> int:
    Q = _form(args.form)
    try:
        table = obstruction.obstruction_table(Q, args.p)
    except obstruction.StructureMismatch as exc:
        excluded = sorted(obstruction.excluded_multiples(Q, args.p))
        _emit(args, {"form": list(Q.coefficients), "prime": args.p, "rows": None,
                     "excluded_n": excluded, "error": str(exc)},
              f"{exc}\nexcluded n mod {args.p}: {excluded}")
        return OK
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.csv and not args.json:
        sys.stdout.write(table.to_csv())
    else:
        _emit(args, table.as_dict(), table.render())
    return OK


def cmd_examples(args) -> int:
    results, lines = [], []
    for name, cert in WORKED_EXAMPLES.items():
        if args.corrupt:
            cert = dataclasses.replace(cert, h=-cert.h)
        report = witness.verify(cert)
        results.append({"name": name, "theorem_id": cert.theorem_id, "m": cert.m,
                        "ok": report.ok, "check": report.check,
                        "eval_value": cert.eval_value})
        lines.append(f"{name} (theorem {cert.theorem_id}, m = {cert.m}): {report}")
    passed = sum(r["ok"] for r in results)
    lines.append(f"{passed}/{len(results)} PASS")
    _emit(args, {"results": results, "passed": passed, "total": len(results)}, "\n".join(lines))
    return OK if passed == len(results) else NEGATIVE


# --- wiring ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(
        prog="ternaryrep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", parents=[common], help="apply a theorem's criterion")
    p.add_argument("theorem", type=int)
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("--range", metavar="LO..HI")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("represent", parents=[common], help="search for v with Q(v) = m")
    p.add_argument("form", help="[c11,c12,c13,c22,c23,c33]")
    p.add_argument("m", type=int)
    p.add_argument("--all", action="store_true", help="list every representation")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("certify", parents=[common], help="build a representation certificate")
    p.add_argument("theorem", type=int)
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP, help="prime search cap")
    p.add_argument("--range", metavar="LO..HI")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="check a certificate file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classes", parents=[common], help="classes of forms of determinant D")
    p.add_argument("D", type=int)
    p.add_argument("--all-classes", action="store_true", help="include imprimitive forms")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("obstruction", parents=[common], help="residue table of Q mod p")
    p.add_argument("form")
    p.add_argument("p", type=int)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("examples", parents=[common], help="re-verify the worked examples")
    p.add_argument("--corrupt", action="store_true", help="flip h in each fixture (self-test)")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        print(f"internal error: {exc}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end.

Exit status: 0 when everything checks out, 1 when a computed value disagrees
with its expected value, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .numeric import NumericContext, as_scalar, default_tol, format_scalar, parse_scalar

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _emit(obj, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _scalar(text: str):
    text = text.strip()
    try:
        return parse_scalar(text)
    except ValueError:
        try:
            return float(text)
        except ValueError as exc:
            raise InputError(f"not a number: {text!r}") from exc


def cmd_classify(args) -> int:
    from .grassmann import DegeneratePlaneError, Plane, classify_plane
    try:
        with open(args.input, encoding="utf-8") as fh:
            obj = json.load(fh)
        plane = Plane.from_json(obj)
    except (OSError, json.JSONDecodeError, ValueError, TypeError, DegeneratePlaneError) as exc:
        raise InputError(str(exc)) from exc
    if plane.dim != 7 or plane.rank not in (3, 4):
        raise InputError("classify expects a 3- or 4-plane in R^7")
    _emit(classify_plane(plane, ctx=NumericContext(default_tol())).to_json())
    return EXIT_OK


def cmd_cartan_test(args) -> int:
    from . import cartan
    from .suites import EXPECTED_C, EXPECTED_Z
    flag = cartan.standard_flag() if args.flag == "standard" else cartan.adapted_flag([1, 1, 0], [0, 0, 1])
    report = cartan.polar_extension_report(flag, seed=args.seed)
    js = report.to_json()
    _emit(js)
    ok = js["c"] == EXPECTED_C and js["r4"] == 32 and js["zdims"] == EXPECTED_Z
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify(args) -> int:
    from .suites import run_suite
    results = run_suite(args.suite, args.seed)
    passed = all(r.passed for r in results)
    _emit({"suite": args.suite, "seed": args.seed, "passed": passed,
           "results": [r.to_json() for r in results]})
    return EXIT_OK if passed else EXIT_MISMATCH


def cmd_homogeneous_orbit(args) -> int:
    from . import spin7
    parts = [p for p in args.point.split(",")]
    if len(parts) != 3:
        raise InputError("--point expects x0,x1,x6")
    x0, x1, x6 = (_scalar(p) for p in parts)
    ctx = NumericContext(default_tol())
    try:
        tag = spin7.classify_orbit_point(x0, x1, x6, ctx)
        zero = x0 * 0
        point = [x0, x1, zero, zero, zero, zero, x6, zero]
        sample = spin7.orbit_sample(point, args.samples, args.seed)
    except (spin7.NotUnit, spin7.DegenerateTangentFrame) as exc:
        raise InputError(str(exc)) from exc
    res = sample.to_json()
    _emit({"point": [format_scalar(as_scalar(c)) for c in point],
           "obstruction": format_scalar(tag.value),
           "class": tag.kind,
           "branch": list(tag.branches),
           "maxResiduals": res})
    bad = res["sphere"] > ctx.tol or any(
        v > ctx.tol for key in ("quadrics", "linear") for v in (res[key] or []))
    return EXIT_MISMATCH if bad else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _emit({"error": message}, sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES
    p = _Parser(prog="phiplanes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="orbit type of a 3- or 4-plane given as JSON")
    c.add_argument("--input", required=True)
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("cartan-test", help="codimensions, polar spaces and extension ranks")
    t.add_argument("--flag", choices=("standard", "generic"), default="standard")
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(func=cmd_cartan_test)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=sorted(SUITES), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("homogeneous-orbit", help="sample an orbit of the cohomogeneity-two action on S^7")
    h.add_argument("--samples", type=int, default=200)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--point", default="0,1,0", help="x0,x1,x6 of (x0,x1,0,0,0,0,x6,0)")
    h.set_defaults(func=cmd_homogeneous_orbit)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        default_tol()
        return args.func(args)
    except InputError as exc:
        _emit({"error": str(exc)}, sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        if "G2_TOL" in str(exc):
            _emit({"error": str(exc)}, sys.stderr)
            return EXIT_INPUT
        raise


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

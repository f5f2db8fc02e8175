"""Command line front end.  Every subcommand prints one JSON report on stdout.

Exit codes: 0 success, 1 a mathematical check came out false, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .curve import (CurveError, PlacePoint, count_points, enumerate_points, from_spec, on_curve,
                    ree_genus_report, smoothness_check)
from .gf import FieldError
from .semigroup import SemigroupError

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    """Carries a finished result whose verdict is negative."""

    def __init__(self, results):
        super().__init__("check failed")
        self.results = results


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# -- curve arguments -------------------------------------------------------------

def _add_curve_args(sp: argparse.ArgumentParser) -> None:
    g = sp.add_argument_group("curve")
    g.add_argument("--spec", help="curve spec as JSON text or a path to a JSON file")
    g.add_argument("--family", help="artin_schreier, hermitian, hyperelliptic_example, suzuki, ree, generic_plane")
    g.add_argument("--q", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--p", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--poly", help="JSON list of [i, j, coefficient index] terms (generic_plane)")


def _curve_spec(args) -> dict:
    if args.spec:
        text = args.spec
        if os.path.exists(text):
            with open(text) as fh:
                text = fh.read()
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"curve spec is not valid JSON: {exc}") from None
        if not isinstance(spec, dict):
            raise UsageError("curve spec must be a JSON object")
        return spec
    if not args.family:
        raise UsageError("give --family or --spec")
    spec = {"family": args.family}
    for key in ("q", "m", "p", "k", "s"):
        v = getattr(args, key)
        if v is not None:
            spec[key] = v
    if args.poly:
        try:
            spec["poly"] = json.loads(args.poly)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--poly is not valid JSON: {exc}") from None
    return spec


def _curve(args):
    return from_spec(_curve_spec(args))


def _point(c, text: str | None, ext: int) -> PlacePoint:
    if text is None or text == "inf":
        return PlacePoint(c.p, c.k, None, 0)
    coords = tuple(_ints(text))
    if len(coords) != c.nvars:
        raise UsageError(f"point needs {c.nvars} coordinates")
    F = c.ext_field(ext)
    if any(not 0 <= v < F.order for v in coords):
        raise UsageError(f"coordinates must be indices below {F.order}")
    P = PlacePoint(c.p, F.k, coords)
    if not on_curve(c, P):
        raise UsageError(f"{list(coords)} is not on the curve over F_{F.order}")
    return P


# -- subcommands -----------------------------------------------------------------

def cmd_count_points(args):
    c = _curve(args)
    if c.family == "ree" and args.ext == c.maximal_target()[0]:
        out = ree_genus_report(c)
    else:
        out = {"count": count_points(c, args.ext, args.method)}
    F = c.ext_field(args.ext)
    out.update({"ext": args.ext, "field": F.describe()})
    if args.points:
        _, pts = enumerate_points(c, args.ext, args.threads)
        out["points"] = [P.to_dict() for P in pts]
    if args.smoothness:
        out["singular_points"] = [P.to_dict() for P in smoothness_check(c, args.ext)]
    return out


def cmd_certify_maximal(args):
    from .zeta import certify_maximal
    c = _curve(args)
    if c.family == "ree":
        return ree_genus_report(c)
    cert = certify_maximal(c).to_dict()
    if not cert["maximal"]:
        raise CheckFailed(cert)
    return cert


def cmd_lpoly(args):
    from .zeta import curve_lpoly, lpoly_from_counts, maximal_lpoly
    if args.counts:
        if args.ell is None or args.genus is None:
            raise UsageError("--counts needs --ell and --genus")
        L = lpoly_from_counts(args.counts, args.ell, args.genus)
        out = L.to_dict()
    else:
        c = _curve(args)
        L = curve_lpoly(c, args.ext)
        out = L.to_dict()
    out["functional_equation"] = L.functional_equation_holds()
    if args.target_q:
        qq = args.target_q * args.target_q
        ell, i = L.ell, 1
        while ell ** i < qq:
            i += 1
        if ell ** i != qq:
            raise UsageError(f"q^2 = {qq} is not a power of {ell}")
        M = L.base_change(i)
        out["over_target"] = M.to_dict()
        out["maximal_over_target"] = M.coeffs == maximal_lpoly(args.target_q, L.genus).coeffs
    return out


def cmd_bounds(args):
    from .zeta import bounds_report, scholium_predicate
    out = bounds_report(args.q, args.g, args.n, args.m1).to_dict()
    if args.g is not None:
        out["scholium"] = scholium_predicate(args.q, args.g)
    return out


def cmd_semigroup(args):
    from .classify import lemma32_report, lemma33_report
    from .semigroup import from_generators, is_symmetric
    out = {}
    if args.gens:
        H = from_generators(args.gens)
        out.update(H.to_dict())
        if args.upto is not None:
            out["nongaps_upto"] = H.nongaps_upto(args.upto)
        if args.check == "symmetric" and not is_symmetric(H):
            raise CheckFailed(out)
    if args.lemma32 is not None:
        out["lemma32"] = lemma32_report(args.lemma32)
    if args.lemma33 is not None:
        out["lemma33"] = lemma33_report(args.lemma33)
    if not out:
        raise UsageError("give --gens, --lemma32 or --lemma33")
    return out


def cmd_orders(args):
    from .linsys import generic_orders, orders_at, riemann_roch_basis
    c = _curve(args)
    _, q = c.maximal_target()
    d = args.d if args.d is not None else q + 1
    out = {"basis": riemann_roch_basis(c, d).to_dict()}
    if args.generic or args.point is None:
        out["generic"] = generic_orders(c, d).to_dict()
    if args.point is not None:
        out["at_point"] = orders_at(c, d, _point(c, args.point, args.ext)).to_dict()
    return out


def cmd_sv_divisors(args):
    from .linsys import sv_divisors
    c = _curve(args)
    rep, _ = sv_divisors(c, args.d, args.search_degree, args.threads)
    out = rep.to_dict()
    if not rep.complete and args.search_degree >= 2:
        raise CheckFailed(out)
    return out


def cmd_verify_cor12(args):
    from .linsys import corollary12_report, verify_frobenius_equivalence
    c = _curve(args)
    if args.point is not None:
        out = verify_frobenius_equivalence(c, _point(c, args.point, args.ext))
    else:
        out = corollary12_report(c, total=args.total, seed=args.seed)
    if not out["holds"]:
        raise CheckFailed(out)
    return out


def cmd_classify_points(args):
    from .classify import check_star_star, classify_rational_points
    c = _curve(args)
    return {"types": classify_rational_points(c, args.scan_degree, args.threads).to_dict(),
            "star_star": check_star_star(c)}


def cmd_normal_form(args):
    from .classify import congruence_star, normalize_linearized
    out = normalize_linearized(args.a1, args.aq, args.m, args.q).to_dict()
    n = (args.q + 1) // args.m
    f = [0, args.a1] + [0] * (args.q - 2) + [args.aq]
    out["congruence_holds"] = congruence_star(f, n, args.q)
    return out


def cmd_theorem31(args):
    from .classify import theorem31_pipeline
    out = theorem31_pipeline(args.q, args.threads, point_checks=not args.combinatorics_only)
    if not out["all_hold"]:
        raise CheckFailed(out)
    return out


def cmd_example16(args):
    from .linsys import example16_report
    return example16_report(args.threads)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxcurve", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                    help="internal parallelism (output does not depend on it)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, curve=False, help=None):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        if curve:
            _add_curve_args(sp)
        return sp

    sp = add("count-points", cmd_count_points, True, "count points over an extension")
    sp.add_argument("--ext", type=int, default=1)
    sp.add_argument("--method", choices=("auto", "trace", "list", "naive"), default="auto")
    sp.add_argument("--points", action="store_true", help="include the point list")
    sp.add_argument("--smoothness", action="store_true", help="also run the Jacobian check")

    add("certify-maximal", cmd_certify_maximal, True, "compare the count with q^2+1+2gq")

    sp = add("lpoly", cmd_lpoly, True, "L-polynomial from counts")
    sp.add_argument("--ext", type=int, default=1)
    sp.add_argument("--counts", type=_ints)
    sp.add_argument("--ell", type=int)
    sp.add_argument("--genus", type=int)
    sp.add_argument("--target-q", type=int, help="also base-change to F_{q^2} and test maximality")

    sp = add("bounds", cmd_bounds, help="genus bounds and the genus-window predicate")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--g", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m1", type=int)

    sp = add("semigroup", cmd_semigroup, help="numerical semigroup data")
    sp.add_argument("--gens", type=_ints)
    sp.add_argument("--check", choices=("symmetric",))
    sp.add_argument("--upto", type=int)
    sp.add_argument("--lemma32", type=int, metavar="Q")
    sp.add_argument("--lemma33", type=int, metavar="Q")

    sp = add("orders", cmd_orders, True, "order sequences of |dP0|")
    sp.add_argument("--d", type=int)
    sp.add_argument("--point", help="comma-separated coordinate indices, or 'inf'")
    sp.add_argument("--ext", type=int, default=1)
    sp.add_argument("--generic", action="store_true")

    sp = add("sv-divisors", cmd_sv_divisors, True, "degrees of R and S")
    sp.add_argument("--d", type=int)
    sp.add_argument("--search-degree", type=int, default=2)

    sp = add("verify-cor12", cmd_verify_cor12, True, "check qP + Fr(P) ~ (q+1)P0")
    sp.add_argument("--point")
    sp.add_argument("--ext", type=int, default=1)
    sp.add_argument("--total", type=int, default=21)
    sp.add_argument("--seed", type=int, default=20260901)

    sp = add("classify-points", cmd_classify_points, True, "Type 1 / Type 2 split on y^q+y=x^m")
    sp.add_argument("--scan-degree", type=int, default=1)

    sp = add("normal-form", cmd_normal_form, help="normalize v^m = a1 y + aq y^q")
    for name in ("a1", "aq", "m", "q"):
        sp.add_argument(f"--{name}", type=int, required=True)

    sp = add("theorem31", cmd_theorem31, help="genus (q-1)^2/4 pipeline")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--combinatorics-only", action="store_true")

    add("example16", cmd_example16, help="x^2 + y^5 = 1 over F_81")
    return ap


def run(argv=None) -> tuple[int, dict | None]:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), None
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE, None
    spec = None
    if getattr(args, "family", None) or getattr(args, "spec", None):
        try:
            spec = _curve(args).spec()
        except (UsageError, CurveError, FieldError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE, None
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        results = args.func(args)
    except CheckFailed as exc:
        results, code = exc.results, EXIT_FALSE
    except AssertionError as exc:
        # theorem-instance failures and path mismatches
        results = {"error": str(exc), "diff": getattr(exc, "diff", None)}
        code = EXIT_FALSE
    except (UsageError, CurveError, FieldError, SemigroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    argv_echo = list(sys.argv[1:] if argv is None else argv)
    report = {"command": {"name": args.command, "argv": argv_echo}, "curve": spec,
              "results": results, "timing": {"seconds": round(time.perf_counter() - t0, 3)},
              "version": __version__}
    return code, report


def main(argv=None) -> int:
    code, report = run(argv)
    if report is not None:
        print(json.dumps(report, default=_default, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""kronewton command line: JSON in, JSON out.

Exit codes: 0 success, 1 mathematical rejection (certificate refused, no
reconstruction found), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import flint

from . import galois, kronecker, lattice, newton, witness
from .exact_arith import (
    DEFAULT_PRECISION,
    Place,
    format_gaussian,
    parse_exact,
    working_precision,
)
from .polysys import PolySystem, Slp


class UsageError(Exception):
    pass


class Rejection(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("reason", "rejected"))
        self.payload = payload


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def load_system(path: str) -> PolySystem:
    try:
        return PolySystem.from_jsonl(_read(path))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad system file {path}: {exc}") from exc


def load_point(path: str) -> list:
    try:
        data = json.loads(_read(path))
        if isinstance(data, dict):
            data = data["point"]
        return [parse_exact(str(x)) for x in data]
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad point file {path}: {exc}") from exc


def parse_place(text: str) -> Place:
    try:
        return Place.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def parse_decimal_ball(text: str) -> flint.acb:
    """A decimal (or a/b) as a ball covering half a unit in its last digit."""
    text = text.strip()
    try:
        value = Fraction(text)
    except ValueError as exc:
        raise UsageError(f"not a number: {text!r}") from exc
    if "/" in text or "." not in text:
        return flint.acb(flint.fmpq(value.numerator, value.denominator))
    digits = len(text.split(".")[1].rstrip("eE0123456789")) or len(text.split(".")[1])
    rad = Fraction(1, 2 * 10**digits)
    return flint.acb(flint.arb(flint.fmpq(value.numerator, value.denominator), flint.arb(flint.fmpq(rad.numerator, rad.denominator))))


def parse_poly(text: str) -> list[int]:
    """Univariate integer polynomial in X (e.g. "X^3-2") as little-endian coefficients."""
    import sympy

    X = sympy.Symbol("X")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"X": X, "x": X})
        poly = sympy.Poly(expr, X)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise UsageError(f"cannot parse polynomial {text!r}") from exc
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    if any(Fraction(c) != c for c in poly.all_coeffs()):
        raise UsageError("polynomial must have integer coefficients")
    return coeffs


def parse_int_list(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> dict:
    F = load_system(args.system)
    try:
        S = kronecker.solve_geometric(F, parse_int_list(args.lam), args.seed, args.degree_bound)
    except (kronecker.NotZeroDimensional, kronecker.DegreeBoundExceeded, kronecker.PrimitiveElementExhausted) as exc:
        raise Rejection({"verdict": "failed", "reason": str(exc)}) from exc
    return {"solution": S.to_json(), "verify": kronecker.verify_geometric(F, S).to_json()["verdict"]}


def _enclose_and_certify(F, z, place, prec) -> newton.ApproxZero:
    last = None
    for _ in range(4):
        with working_precision(prec):
            enc = newton.enclose_zero(F, z, prec)
            try:
                return newton.certify(F, z, enc, place, prec)
            except newton.Inconclusive as exc:
                last = exc
        prec *= 2
    raise last


def cmd_certify(args) -> dict:
    F = load_system(args.system)
    z = load_point(args.point)
    if len(z) != F.n:
        raise UsageError(f"point has {len(z)} coordinates, system has {F.n} variables")
    place = parse_place(args.place)
    if place.is_archimedean:
        try:
            az = _enclose_and_certify(F, z, place, args.precision_bits)
        except newton.CertificationRejected as exc:
            raise Rejection({"verdict": "rejected", "product_lower": float(exc.product), "place": str(place)}) from exc
        except (newton.Inconclusive, newton.EnclosureFailed) as exc:
            raise Rejection({"verdict": "inconclusive", "reason": str(exc), "place": str(place)}) from exc
        return az.to_json()
    try:
        verdict = newton.hensel_certify(F, z, place.p, args.padic_digits)
    except newton.NonIntegralPoint as exc:
        raise UsageError(str(exc)) from exc
    out = {
        "verdict": "accepted" if verdict.accepted else "rejected",
        "place": str(place),
        "reason": verdict.reason,
        "prelift_steps": verdict.prelift_steps,
        "point": [format_gaussian(x) for x in z],
    }
    if not verdict.accepted:
        raise Rejection(out)
    out["zeta_mod"] = {"modulus": f"{place.p}^{verdict.precision}", "residues": [str(r) for r in verdict.zeta_mod]}
    g = newton.gamma(F, verdict.zeta_padic(), place)
    out["gamma"] = f"{place.p}^{g.exponent}" if g.exponent is not None else "0"
    return out


def cmd_from_newton(args) -> dict:
    F = load_system(args.system)
    z = load_point(args.point)
    try:
        comp = kronecker.approx_to_kronecker(
            F, z, parse_int_list(args.lam), args.seed, args.degree_bound, args.height_bits
        )
    except (kronecker.ReconstructionFailed, newton.EnclosureFailed) as exc:
        raise Rejection({"verdict": "not-found", "reason": str(exc)}) from exc
    return {"solution": comp.solution.to_json(), "degree": comp.degree, "irreducible": comp.irreducible}


def cmd_to_newton(args) -> dict:
    F = load_system(args.system)
    try:
        data = json.loads(_read(args.solution))
        S = kronecker.GeometricSolution.from_json(data.get("solution", data))
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise UsageError(f"bad solution file: {exc}") from exc
    verdict = kronecker.verify_geometric(F, S)
    if not verdict:
        raise Rejection({"verdict": "invalid-solution", **verdict.to_json()})
    zeros = kronecker.kronecker_to_approx(S, F, args.height, args.target_bits, args.precision_bits)
    return {"zeros": [z.to_json() for z in zeros]}


def cmd_witness(args) -> dict:
    try:
        data = json.loads(_read(args.slp))
        slp = Slp.from_json(data)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad SLP file: {exc}") from exc
    res = witness.is_zero_slp(slp, mode=args.mode, trials=args.trials, seed=args.seed)
    return {"verdict": res.verdict, "mode": res.mode, "evidence": _jsonable(res.evidence)}


def cmd_minpoly(args) -> dict:
    x = parse_decimal_ball(args.value)
    try:
        res = lattice.min_poly_from_approx(x, args.deg, args.height_bits)
    except lattice.NotFound as exc:
        raise Rejection({"verdict": "not-found", "reason": exc.reason}) from exc
    return {
        "polynomial": [str(c) for c in res.polynomial],
        "degree": res.degree,
        "height_bits": max(abs(c) for c in res.polynomial).bit_length(),
        "irreducible": res.irreducible,
    }


def cmd_bounds(args) -> dict:
    F = load_system(args.system)
    zeta = load_point(args.point) if args.point else None
    place = parse_place(args.place)
    try:
        rep = newton.bounds_report(
            F,
            ht_zeta=args.ht_zeta,
            degree_K=args.degree_K,
            degree_L=args.degree_L,
            disc_L=args.disc_L,
            gamma_value=args.gamma,
            zeta=zeta,
            place=place,
            prec=args.precision_bits,
        )
    except newton.MissingInput as exc:
        raise UsageError(str(exc)) from exc
    return rep.to_json()


def cmd_resolvent(args) -> dict:
    f = parse_poly(args.poly)
    try:
        res = galois.lagrange_resolvent(f, parse_int_list(args.lam), args.seed, splitting_field=not args.no_splitting_field)
    except galois.ReducibleInput as exc:
        raise Rejection({"verdict": "reducible", "reason": str(exc)}) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return res.to_json()


def cmd_examples(args) -> dict | str:
    if args.name == "mignotte":
        return newton.mignotte_system(args.n).to_jsonl()
    if args.name == "deform":
        return newton.deform_system(load_system(args.system)).to_jsonl()
    if args.name == "universal":
        return galois.universal_system(parse_poly(args.poly)).to_jsonl()
    raise UsageError(f"unknown example {args.name!r}")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--place", default="inf", help="inf or p:<prime>")
    common.add_argument("--threads", type=int, default=1, help="accepted for scripting; work is sequential")

    p = _Parser(prog="kronewton", description="Approximate zeros and Kronecker solutions of polynomial systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="Kronecker solution of a zero-dimensional system")
    s.add_argument("--system", required=True)
    s.add_argument("--lambda", dest="lam")
    s.add_argument("--degree-bound", type=int, default=kronecker.DEFAULT_DEGREE_BOUND)
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("certify", parents=[common], help="gamma-Theorem certificate (Hensel test p-adically)")
    s.add_argument("--system", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--padic-digits", type=int, default=8)
    s.set_defaults(fn=cmd_certify)

    s = sub.add_parser("from-newton", parents=[common], help="approximate zero -> Kronecker solution of its component")
    s.add_argument("--system", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--lambda", dest="lam")
    s.add_argument("--degree-bound", type=int, default=16)
    s.add_argument("--height-bits", type=int)
    s.set_defaults(fn=cmd_from_newton)

    s = sub.add_parser("to-newton", parents=[common], help="Kronecker solution -> certified approximate zeros")
    s.add_argument("--system", required=True)
    s.add_argument("--solution", required=True)
    s.add_argument("--height", type=float, default=None, help="natural-log height bound for exact rational zeros")
    s.add_argument("--target-bits", type=int)
    s.set_defaults(fn=cmd_to_newton)

    s = sub.add_parser("witness", parents=[common], help="zero test for a straight-line program")
    s.add_argument("--slp", required=True)
    s.add_argument("--mode", choices=["witness", "sz"], default="witness")
    s.add_argument("--trials", type=int, default=5)
    s.set_defaults(fn=cmd_witness)

    s = sub.add_parser("minpoly", parents=[common], help="integer minimal polynomial of a decimal approximation")
    s.add_argument("--value", required=True)
    s.add_argument("--deg", type=int, required=True)
    s.add_argument("--height-bits", type=int, required=True)
    s.set_defaults(fn=cmd_minpoly)

    s = sub.add_parser("bounds", parents=[common], help="bit-length lower and upper bounds")
    s.add_argument("--system", required=True)
    s.add_argument("--point", help="exact zero; supplies ht(zeta) and gamma")
    s.add_argument("--ht-zeta", type=float)
    s.add_argument("--degree-K", type=int, default=1)
    s.add_argument("--degree-L", type=int)
    s.add_argument("--disc-L", type=int)
    s.add_argument("--gamma", type=float)
    s.set_defaults(fn=cmd_bounds)

    s = sub.add_parser("resolvent", parents=[common], help="Lagrange resolvent and Galois group order")
    s.add_argument("--poly", required=True)
    s.add_argument("--lambda", dest="lam")
    s.add_argument("--no-splitting-field", action="store_true")
    s.set_defaults(fn=cmd_resolvent)

    s = sub.add_parser("examples", parents=[common], help="emit example systems (JSON lines)")
    s.add_argument("name", choices=["mignotte", "deform", "universal"])
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--system")
    s.add_argument("--poly")
    s.set_defaults(fn=cmd_examples)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        if args.precision_bits < 16:
            raise UsageError("--precision-bits must be at least 16")
        result = args.fn(args)
    except UsageError as exc:
        print(f"kronewton: error: {exc}", file=sys.stderr)
        return 2
    except Rejection as exc:
        payload = dict(exc.payload)
        payload["seed"] = args.seed
        print(json.dumps(payload, sort_keys=True))
        return 1
    if isinstance(result, str):
        sys.stdout.write(result if result.endswith("\n") else result + "\n")
        return 0
    result["seed"] = args.seed
    print(json.dumps(result, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())

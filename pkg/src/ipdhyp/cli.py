"""Command-line front end: transform / eval / charpoly / verify.

Complex numbers are accepted as decimal strings like "0.5-0.25i" or as
[re, im] pairs (both components decimal strings or numbers); outputs render
complex values as [re, im] decimal-string pairs at the full working
precision.  Exit codes: 0 success / all identities pass, 1 verification
failure, 2 usage or configuration error.

The environment variable IPDHYP_DIGITS overrides the default precision.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Sequence

import mpmath as mp

from . import verify as verify_mod
from .charpoly import build_L, build_P, build_Phat, build_Q, build_Qhat, build_T, find_roots, w_poly
from .coeffs import IpdSpec
from .errors import IpdHypError
from .hypeval import HypFunction, eval_pfq
from .kernel import IntVector, ParamVector, cplx, set_precision
from .transforms import (
    HypExpression,
    apply_degenerate_p,
    apply_degenerate_single,
    apply_degenerate_vector,
    apply_mp1,
    apply_mp2,
    apply_two_free,
    expand_to_gauss,
)

_NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def _parse_real(text: str) -> mp.mpf:
    if not _NUMBER_RE.match(text):
        raise ValueError(f"cannot parse number {text!r}")
    return mp.mpf(text)


def parse_complex(text) -> mp.mpc:
    """Parse "re+imi" decimal strings, bare reals, or [re, im] pairs."""
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise ValueError(f"complex pair must have two entries: {text!r}")
        return cplx(_parse_real(str(text[0]).strip()), _parse_real(str(text[1]).strip()))
    if isinstance(text, (int, float)):
        return cplx(text)
    text = str(text).strip().replace(" ", "")
    if not text:
        raise ValueError("empty complex literal")
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"complex pair must have two entries: {text!r}")
        return cplx(_parse_real(parts[0]), _parse_real(parts[1]))
    if text[-1] not in "iIjJ":
        return cplx(_parse_real(text))
    body = text[:-1]
    # split real|imag at the last sign that is neither leading nor an
    # exponent sign
    split_at = None
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            split_at = k
            break
    if split_at is None:
        re_text, im_text = "", body
    else:
        re_text, im_text = body[:split_at], body[split_at:]
    if im_text in ("", "+"):
        imag = mp.mpf(1)
    elif im_text == "-":
        imag = mp.mpf(-1)
    else:
        imag = _parse_real(im_text)
    real = _parse_real(re_text) if re_text else mp.mpf(0)
    return cplx(real, imag)


def format_complex(z) -> list:
    z = cplx(z)
    return [mp.nstr(z.real, mp.mp.dps), mp.nstr(z.imag, mp.mp.dps)]


def _load_params(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict):
        raise ValueError("params file must hold a JSON object")
    return doc


def _get_complex(doc: dict, key: str, required: bool = True):
    if key not in doc:
        if required:
            raise ValueError(f"params file is missing {key!r}")
        return None
    return parse_complex(doc[key])


def _get_vector(doc: dict, key: str) -> ParamVector:
    if key not in doc or not isinstance(doc[key], list):
        raise ValueError(f"params file needs a list under {key!r}")
    return ParamVector([parse_complex(v) for v in doc[key]])


def _get_mults(doc: dict, key: str = "m") -> IntVector:
    if key not in doc or not isinstance(doc[key], list):
        raise ValueError(f"params file needs a list under {key!r}")
    return IntVector(int(v) for v in doc[key])


def _expression_doc(expr: HypExpression) -> dict:
    terms = []
    for term in expr.terms:
        entry = {
            "coeff": format_complex(term.coeff),
            "x_power": term.x_power,
            "prefactor_exponent": format_complex(term.prefactor_exponent),
            "arg_map": term.arg_map,
            "fun": None,
        }
        if term.fun is not None:
            entry["fun"] = {
                "num": [format_complex(u) for u in term.fun.num],
                "den": [format_complex(v) for v in term.fun.den],
            }
        terms.append(entry)
    return {"terms": terms}


_THEOREMS = (
    "MP1",
    "MP2",
    "COR1",
    "THM3_EQ19",
    "THM3_EQ20",
    "THM4_EQ29",
    "THM4_EQ31",
    "VEC_EQ27",
    "VEC_EQ28",
    "THM5_FIRST",
    "THM5_SECOND",
)


def _build_expression(theorem: str, doc: dict) -> HypExpression:
    f = _get_vector(doc, "f")
    m = _get_mults(doc)
    a = _get_complex(doc, "a")
    if theorem in ("MP1", "MP2", "COR1"):
        spec = IpdSpec(
            b=_get_complex(doc, "b"), f=f, m=m, a=a, c=_get_complex(doc, "c")
        )
        if theorem == "MP1":
            return apply_mp1(spec, route=doc.get("route", "paperQ"))
        if theorem == "MP2":
            return apply_mp2(spec, route=doc.get("route", "paperQhat"))
        return expand_to_gauss(spec)
    if theorem in ("THM3_EQ19", "THM3_EQ20"):
        spec = IpdSpec(b=_get_complex(doc, "b"), f=f, m=m, a=a)
        return apply_degenerate_single(
            spec, variant="eq19" if theorem.endswith("19") else "eq20"
        )
    if theorem in ("THM4_EQ29", "THM4_EQ31"):
        spec = IpdSpec(b=_get_complex(doc, "b"), f=f, m=m, a=a)
        p = int(doc.get("p", 1))
        return apply_degenerate_p(
            spec, p, variant="eq29" if theorem.endswith("29") else "eq31"
        )
    if theorem in ("VEC_EQ27", "VEC_EQ28"):
        bvec = _get_vector(doc, "b")
        pvec = _get_mults(doc, "p")
        return apply_degenerate_vector(
            bvec, pvec, a, f, m,
            variant="eq27" if theorem.endswith("27") else "eq28",
        )
    if theorem in ("THM5_FIRST", "THM5_SECOND"):
        return apply_two_free(
            a,
            _get_complex(doc, "d"),
            _get_complex(doc, "e"),
            _get_complex(doc, "b"),
            f,
            m,
            variant="first" if theorem.endswith("FIRST") else "second",
        )
    raise ValueError(f"unknown theorem {theorem!r}")


def _cmd_transform(args) -> int:
    doc = _load_params(args.params)
    expr = _build_expression(args.theorem, doc)
    out = {"theorem": args.theorem, "expression": _expression_doc(expr)}
    if args.x is not None:
        x = parse_complex(args.x)
        out["x"] = format_complex(x)
        out["value"] = format_complex(expr.evaluate(x))
    print(json.dumps(out, indent=2))
    return 0


def _cmd_eval(args) -> int:
    num = [parse_complex(v) for v in args.num.split(",")] if args.num else []
    den = [parse_complex(v) for v in args.den.split(",")] if args.den else []
    x = parse_complex(args.x)
    tol = mp.mpf(args.tol) if args.tol else None
    result = eval_pfq(HypFunction(ParamVector(num), ParamVector(den)), x, tol)
    print(
        json.dumps(
            {
                "value": format_complex(result.value),
                "terms_used": result.terms_used,
                "tail_bound": mp.nstr(result.tail_bound, 8),
            },
            indent=2,
        )
    )
    return 0


_POLY_BUILDERS = ("Q", "P", "Qhat", "Phat", "W", "T", "Tstar", "L", "Lhat")


def _cmd_charpoly(args) -> int:
    doc = _load_params(args.params)
    which = args.which
    f = _get_vector(doc, "f")
    m = _get_mults(doc)
    b = _get_complex(doc, "b")
    if which == "Q":
        poly = build_Q(b, _get_complex(doc, "c"), f, m, route=doc.get("route", "eq5"))
    elif which == "P":
        poly = build_P(b, _get_complex(doc, "c"), f, m)
    elif which == "Qhat":
        poly = build_Qhat(_get_complex(doc, "a"), b, _get_complex(doc, "c"), f, m)
    elif which == "Phat":
        poly = build_Phat(_get_complex(doc, "a"), b, _get_complex(doc, "c"), f, m)
    elif which == "W":
        poly = w_poly(b, f, m)
    elif which in ("T", "Tstar"):
        poly = build_T(
            b,
            int(doc.get("p", 1)),
            f,
            m,
            variant=which,
            a=_get_complex(doc, "a", required=which == "Tstar"),
        )
    else:  # L, Lhat
        poly = build_L(
            _get_complex(doc, "a"),
            _get_complex(doc, "d"),
            _get_complex(doc, "e"),
            b,
            f,
            m,
            variant=which,
        )
    out = {
        "which": which,
        "degree": poly.degree,
        "coeffs": [format_complex(c) for c in poly.coeffs],
    }
    if poly.degree > 0:
        roots = find_roots(poly)
        out["roots"] = [format_complex(r) for r in roots.roots]
        out["root_residual"] = mp.nstr(roots.residual, 8)
    else:
        out["roots"] = []
        out["root_residual"] = "0.0"
    print(json.dumps(out, indent=2))
    return 0


def _cmd_verify(args) -> int:
    ids = None
    if args.only is not None:
        ids = [tok for tok in (s.strip() for s in args.only.split(",")) if tok]
    tol = mp.mpf(args.tol) if args.tol else None
    report = verify_mod.run_suite(
        ids=ids, seed=args.seed, count=args.count, tol=tol
    )
    rendered = verify_mod.report_to_json(report)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(rendered + "\n")
    print(rendered)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ipdhyp",
        description=(
            "Transformations of IPD generalized hypergeometric functions, "
            "with numerical verification against direct series evaluation."
        ),
    )
    parser.add_argument(
        "--digits",
        type=int,
        default=None,
        help="working precision in decimal digits (default 40, env IPDHYP_DIGITS)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_transform = sub.add_parser("transform", help="emit a transformed expression as JSON")
    p_transform.add_argument("--theorem", required=True, choices=_THEOREMS)
    p_transform.add_argument("--params", required=True, help="JSON parameter file")
    p_transform.add_argument("--x", default=None, help="optional evaluation point")
    p_transform.set_defaults(func=_cmd_transform)

    p_eval = sub.add_parser("eval", help="evaluate pFq(num; den; x) by direct series")
    p_eval.add_argument("--num", default="", help="comma-separated top parameters")
    p_eval.add_argument("--den", default="", help="comma-separated bottom parameters")
    p_eval.add_argument("--x", required=True, help="argument")
    p_eval.add_argument("--tol", default=None, help="series tolerance")
    p_eval.set_defaults(func=_cmd_eval)

    p_charpoly = sub.add_parser("charpoly", help="print characteristic polynomial and roots")
    p_charpoly.add_argument("--which", required=True, choices=_POLY_BUILDERS)
    p_charpoly.add_argument("--params", required=True, help="JSON parameter file")
    p_charpoly.set_defaults(func=_cmd_charpoly)

    p_verify = sub.add_parser("verify", help="run the identity verification suite")
    p_verify.add_argument("--only", default=None, help="comma-separated identity ids")
    p_verify.add_argument("--seed", type=int, default=1)
    p_verify.add_argument("--count", type=int, default=20)
    p_verify.add_argument("--digits", type=int, default=None, dest="digits_sub",
                          help=argparse.SUPPRESS)
    p_verify.add_argument("--tol", default=None, help="relative residual tolerance")
    p_verify.add_argument("--json", default=None, help="also write the report here")
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def cli_dispatch(argv: Sequence[str]) -> int:
    """Parse argv and run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    digits = args.digits
    if digits is None and getattr(args, "digits_sub", None) is not None:
        digits = args.digits_sub
    if digits is None:
        env = os.environ.get("IPDHYP_DIGITS")
        digits = int(env) if env else None
    try:
        if digits is not None:
            set_precision(digits)
        return args.func(args)
    except (IpdHypError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

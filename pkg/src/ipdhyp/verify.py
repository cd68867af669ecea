"""Batch verification harness for the full identity catalog.

For every identity in the catalog a sampler draws random admissible
parameter tuples (rejection-resampled until the identity's preconditions
hold with margin) and a checker evaluates both sides numerically, the right
side through the transformation engine and the left side through the
independent series oracle.  Residuals are relative:

    |LHS(x) - RHS(x)| / max(1, |LHS(x)|).

Coefficient-level identities (the P = (f)_m Q and Q-hat = P-hat
cross-checks) compare coefficient vectors normwise instead; the root-level
corollaries compare closed-form shifted parameters against the general
root extraction.

The whole harness is deterministic: parameter and sample draws derive from
SHA-256 of (seed, identity id, case index), never from process-dependent
hashing, so a fixed seed reproduces a byte-identical report (modulo the
wall-time field).
"""

from __future__ import annotations

import hashlib
import json
import random
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath as mp

from .charpoly import build_L, build_P, build_Phat, build_Q, build_Qhat, build_T, find_roots
from .coeffs import IpdSpec
from .errors import IpdHypError, RejectionExhaustedError, RootWarning
from .hypeval import HypFunction, eval_pfq
from .kernel import (
    ComplexValue,
    IntVector,
    ParamVector,
    cplx,
    gamma,
    pochhammer,
    pochhammer_vec,
    terminating_pfq,
)
from .transforms import (
    apply_degenerate_p,
    apply_degenerate_single,
    apply_degenerate_vector,
    apply_mp1,
    apply_mp2,
    apply_two_free,
    expand_to_gauss,
    ipd_function,
    meijer_norlund_ipd,
    two_free_function,
    vector_function,
)

#: Identity catalog, in report order.
IDENTITY_IDS = (
    "MP1",
    "MP2",
    "THM3_EQ19",
    "THM3_EQ20",
    "THM4_EQ29",
    "THM4_EQ31",
    "VEC_EQ27",
    "VEC_EQ28",
    "THM5_FIRST",
    "THM5_SECOND",
    "LEMMA1",
    "COR1",
    "LEMMA2",
    "COR2",
    "LEMMA3",
    "LEMMA4",
    "MINTON",
    "KARLSSON",
    "COR3",
    "COR4",
    "COR5",
)

#: Pochhammer non-vanishing margin used by the rejection sampler.
MARGIN = mp.mpf("1e-3")

#: Multiplicity vectors drawn by the sampler.
M_POOL = ((1,), (2,), (3,), (1, 1), (2, 1), (1, 1, 1))

MAX_REJECTIONS = 10**4


@dataclass
class IdentityCase:
    """One sampled parameter tuple plus argument samples for an identity."""

    identity_id: str
    params: dict
    x_samples: list


@dataclass
class CaseResult:
    identity_id: str
    index: int
    status: str  # "pass" | "fail" | "skipped"
    max_residual: Optional[mp.mpf]
    samples: int
    skip_reason: Optional[str] = None


@dataclass
class VerificationReport:
    seed: int
    digits: int
    count: int
    tolerance: mp.mpf
    cases: list = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def n_failed(self) -> int:
        return sum(1 for c in self.cases if c.status == "fail")

    @property
    def n_skipped(self) -> int:
        return sum(1 for c in self.cases if c.status == "skipped")

    @property
    def exit_code(self) -> int:
        return 1 if self.n_failed else 0

    def identity_summary(self) -> dict:
        """Per-identity aggregation: worst residual and combined status."""
        out: dict = {}
        for c in self.cases:
            slot = out.setdefault(
                c.identity_id,
                {"cases": 0, "samples": 0, "max_residual": None, "status": "pass",
                 "skip_reasons": []},
            )
            slot["cases"] += 1
            slot["samples"] += c.samples
            if c.max_residual is not None:
                if slot["max_residual"] is None or c.max_residual > slot["max_residual"]:
                    slot["max_residual"] = c.max_residual
            if c.status == "fail":
                slot["status"] = "fail"
            elif c.status == "skipped" and slot["status"] != "fail":
                slot["status"] = "skipped"
                slot["skip_reasons"].append(c.skip_reason)
        return out


class _Reject(Exception):
    """Internal: parameter draw violated a precondition; redraw."""


def _case_rng(seed: int, identity_id: str, index: int) -> random.Random:
    digest = hashlib.sha256(f"{seed}/{identity_id}/{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _draw_complex(rng: random.Random) -> ComplexValue:
    return cplx(mp.mpf(rng.uniform(-2, 3)), mp.mpf(rng.uniform(-1, 1)))


def _draw_m(rng: random.Random) -> IntVector:
    return IntVector(rng.choice(M_POOL))


def _draw_f(rng: random.Random, m: IntVector) -> ParamVector:
    return ParamVector([_draw_complex(rng) for _ in m])


def _default_x_samples(rng: random.Random, n: int = 8) -> list:
    """x = 0 plus points in the disk |x| <= 0.45 (so Re(x) < 1/2)."""
    xs = [mp.mpc(0)]
    while len(xs) < n:
        r = mp.mpf("0.05") + mp.mpf(rng.random()) * mp.mpf("0.4")
        theta = 2 * mp.pi * mp.mpf(rng.random())
        xs.append(r * mp.exp(mp.mpc(0, theta)))
    return xs


def _require(condition: bool, why: str) -> None:
    if not condition:
        raise _Reject(why)


def _poch_margin(z: ComplexValue, n: int) -> None:
    """Require every factor of (z)_n to clear the margin."""
    for j in range(n):
        _require(abs(z + j) >= MARGIN, f"|({mp.nstr(z, 6)})_{n}| factor below margin")


def _clear_of_nonpositive_integers(z: ComplexValue, why: str) -> None:
    if abs(z.imag) >= MARGIN:
        return
    nearest = mp.floor(z.real + mp.mpf("0.5"))
    if nearest <= 0:
        _require(abs(z.real - nearest) >= MARGIN, why)


def _bottom_params_ok(fun: HypFunction) -> None:
    for v in fun.den:
        _clear_of_nonpositive_integers(v, "bottom parameter near a pole")


def _roots_usable(roots) -> None:
    for r in roots:
        _require(abs(r) <= mp.mpf("1e4"), "oversized characteristic root")
        _clear_of_nonpositive_integers(r, "characteristic root near a series pole")


def _roots_usable_negated(roots) -> None:
    for r in roots:
        _require(abs(r) <= mp.mpf("1e4"), "oversized characteristic root")
        _clear_of_nonpositive_integers(-r, "characteristic root near a series pole")


def _relative(lhs: ComplexValue, rhs: ComplexValue) -> mp.mpf:
    return abs(lhs - rhs) / max(1, abs(lhs))


def _coeff_deviation(p1, p2) -> mp.mpf:
    """Normwise relative deviation between two coefficient vectors."""
    n = max(len(p1.coeffs), len(p2.coeffs))
    a = p1.coeffs + [mp.mpc(0)] * (n - len(p1.coeffs))
    b = p2.coeffs + [mp.mpc(0)] * (n - len(p2.coeffs))
    scale = max(max(abs(c) for c in a), max(abs(c) for c in b), mp.mpf(1))
    return max(abs(x - y) for x, y in zip(a, b)) / scale


def _series_tol() -> mp.mpf:
    return mp.mpf(10) ** (-(mp.mp.dps - 6))


# --------------------------------------------------------------------------
# samplers
# --------------------------------------------------------------------------


def _sample_mp1(rng: random.Random, index: int) -> dict:
    a, b, c = _draw_complex(rng), _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _poch_margin(c - b - mt, mt)
    _clear_of_nonpositive_integers(c, "c near a pole")
    for fi, mi in zip(f, m):
        _poch_margin(fi, mt + 1)
        _poch_margin(1 - fi + b - mi, mt)
    poly = build_Q(b, c, f, m)
    roots = find_roots(poly)
    _roots_usable(roots)
    return {"a": a, "b": b, "c": c, "f": f, "m": m, "route": "paperQ" if index % 2 == 0 else "newP"}


def _check_mp1(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    spec = IpdSpec(b=p["b"], f=p["f"], m=p["m"], a=p["a"], c=p["c"])
    expr = apply_mp1(spec, route=p["route"])
    lhs_fun = ipd_function(spec)
    stol = _series_tol()
    worst = mp.mpf(0)
    for x in case.x_samples:
        lhs = eval_pfq(lhs_fun, x, stol).value
        rhs = expr.evaluate(x, stol)
        worst = max(worst, _relative(lhs, rhs))
    return worst, len(case.x_samples)


def _sample_mp2(rng: random.Random, index: int) -> dict:
    a, b, c = _draw_complex(rng), _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _poch_margin(c - a - mt, mt)
    _poch_margin(c - b - mt, mt)
    _poch_margin(1 + a + b - c, mt)
    _clear_of_nonpositive_integers(c, "c near a pole")
    for fi in f:
        _poch_margin(fi, mt + 1)
    # margins for the terminating sums inside the hatted polynomials
    _poch_margin(b + 1, mt + 1)
    roots = find_roots(build_Qhat(a, b, c, f, m))
    _roots_usable(roots)
    return {"a": a, "b": b, "c": c, "f": f, "m": m,
            "route": "paperQhat" if index % 2 == 0 else "newPhat"}


def _check_mp2(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    spec = IpdSpec(b=p["b"], f=p["f"], m=p["m"], a=p["a"], c=p["c"])
    expr = apply_mp2(spec, route=p["route"])
    lhs_fun = ipd_function(spec)
    stol = _series_tol()
    worst = mp.mpf(0)
    for x in case.x_samples:
        lhs = eval_pfq(lhs_fun, x, stol).value
        rhs = expr.evaluate(x, stol)
        worst = max(worst, _relative(lhs, rhs))
    return worst, len(case.x_samples)


def _sample_thm3(rng: random.Random, index: int) -> dict:
    a, b = _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _require(abs(b) >= MARGIN, "b too close to 0")
    _clear_of_nonpositive_integers(b + 1, "b+1 near a pole")
    _poch_margin(b + 1, mt)
    for fi in f:
        _poch_margin(fi, mt + 1)
    return {"a": a, "b": b, "f": f, "m": m}


def _make_check_thm3(variant: str) -> Callable:
    def _check(case: IdentityCase, tol: mp.mpf) -> tuple:
        p = case.params
        spec = IpdSpec(b=p["b"], f=p["f"], m=p["m"], a=p["a"])
        expr = apply_degenerate_single(spec, variant=variant)
        lhs_fun = ipd_function(spec, c=p["b"] + 1)
        stol = _series_tol()
        worst = mp.mpf(0)
        for x in case.x_samples:
            lhs = eval_pfq(lhs_fun, x, stol).value
            rhs = expr.evaluate(x, stol)
            worst = max(worst, _relative(lhs, rhs))
        return worst, len(case.x_samples)

    return _check


def _sample_thm4(rng: random.Random, index: int) -> dict:
    p_shift = index % 4 + 1
    a, b = _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    for q in range(1, p_shift + 1):
        _clear_of_nonpositive_integers(b + q - 1, "gamma pole in T")
        _clear_of_nonpositive_integers(b + q - cplx(a), "gamma pole in Tstar")
        _require(abs(b + q - 1) >= MARGIN, "beta_q too close to 0")
    _clear_of_nonpositive_integers(b + p_shift, "bottom parameter near a pole")
    _poch_margin(b + 1, mt + p_shift)
    for fi in f:
        _poch_margin(fi, mt + 1)
    if p_shift > 1:
        _roots_usable_negated(find_roots(build_T(b, p_shift, f, m, variant="T")))
        _roots_usable_negated(
            find_roots(build_T(b, p_shift, f, m, variant="Tstar", a=a))
        )
    return {"a": a, "b": b, "f": f, "m": m, "p": p_shift}


def _make_check_thm4(variant: str) -> Callable:
    def _check(case: IdentityCase, tol: mp.mpf) -> tuple:
        p = case.params
        spec = IpdSpec(b=p["b"], f=p["f"], m=p["m"], a=p["a"])
        expr = apply_degenerate_p(spec, p["p"], variant=variant)
        lhs_fun = ipd_function(spec, c=p["b"] + p["p"])
        stol = _series_tol()
        worst = mp.mpf(0)
        for x in case.x_samples:
            lhs = eval_pfq(lhs_fun, x, stol).value
            rhs = expr.evaluate(x, stol)
            worst = max(worst, _relative(lhs, rhs))
        return worst, len(case.x_samples)

    return _check


_P_POOL = ((1, 1), (2, 1), (1, 2), (2, 2))


def _sample_vec(rng: random.Random, index: int) -> dict:
    pvec = IntVector(rng.choice(_P_POOL))
    bvec = ParamVector([_draw_complex(rng) for _ in pvec])
    a = _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    beta = []
    for bj, pj in zip(bvec, pvec):
        beta.extend(bj + i for i in range(pj))
    for i in range(len(beta)):
        _require(abs(beta[i]) >= MARGIN, "beta too close to 0")
        _clear_of_nonpositive_integers(beta[i] + 1, "beta+1 near a pole")
        _poch_margin(beta[i] + 1, mt)
        for j in range(i + 1, len(beta)):
            _require(abs(beta[i] - beta[j]) >= MARGIN, "beta grid not distinct")
    for bj, pj in zip(bvec, pvec):
        _clear_of_nonpositive_integers(bj + pj, "bottom parameter near a pole")
    for fi in f:
        _poch_margin(fi, mt + 1)
    return {"a": a, "b": bvec, "p": pvec, "f": f, "m": m}


def _make_check_vec(variant: str) -> Callable:
    def _check(case: IdentityCase, tol: mp.mpf) -> tuple:
        p = case.params
        expr = apply_degenerate_vector(
            p["b"], p["p"], p["a"], p["f"], p["m"], variant=variant
        )
        lhs_fun = vector_function(p["a"], p["b"], p["p"], p["f"], p["m"])
        stol = _series_tol()
        worst = mp.mpf(0)
        for x in case.x_samples:
            lhs = eval_pfq(lhs_fun, x, stol).value
            rhs = expr.evaluate(x, stol)
            worst = max(worst, _relative(lhs, rhs))
        return worst, len(case.x_samples)

    return _check


def _sample_thm5(rng: random.Random, index: int) -> dict:
    a, d, e, b = (_draw_complex(rng) for _ in range(4))
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _require(abs(b) >= MARGIN, "b too close to 0")
    _poch_margin(e - d - mt + 1, mt - 1)
    _poch_margin(e - a - mt + 1, mt - 1)
    _poch_margin(1 + a + d - e, mt - 1)
    _clear_of_nonpositive_integers(e, "e near a pole")
    _clear_of_nonpositive_integers(b + 1, "b+1 near a pole")
    _poch_margin(b + 1, mt)
    for fi in f:
        _poch_margin(fi, mt + 1)
    if mt > 1:
        _roots_usable(find_roots(build_L(a, d, e, b, f, m, variant="L")))
        _roots_usable(find_roots(build_L(a, d, e, b, f, m, variant="Lhat")))
    return {"a": a, "d": d, "e": e, "b": b, "f": f, "m": m}


def _make_check_thm5(variant: str) -> Callable:
    def _check(case: IdentityCase, tol: mp.mpf) -> tuple:
        p = case.params
        expr = apply_two_free(
            p["a"], p["d"], p["e"], p["b"], p["f"], p["m"], variant=variant
        )
        lhs_fun = two_free_function(p["a"], p["d"], p["e"], p["b"], p["f"], p["m"])
        stol = _series_tol()
        worst = mp.mpf(0)
        for x in case.x_samples:
            lhs = eval_pfq(lhs_fun, x, stol).value
            rhs = expr.evaluate(x, stol)
            worst = max(worst, _relative(lhs, rhs))
        return worst, len(case.x_samples)

    return _check


def _sample_lemma1(rng: random.Random, index: int) -> dict:
    b, c = _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _clear_of_nonpositive_integers(c - b, "gamma pole at c-b")
    for i, fi in enumerate(f):
        diff = fi - c
        _require(
            abs(diff.imag) >= MARGIN
            or abs(diff.real - mp.floor(diff.real + mp.mpf("0.5"))) >= MARGIN,
            "f_i - c nearly integral",
        )
        for j, fj in enumerate(f):
            if i != j:
                diff = fi - fj
                _require(
                    abs(diff.imag) >= MARGIN
                    or abs(diff.real - mp.floor(diff.real + mp.mpf("0.5"))) >= MARGIN,
                    "f_i - f_j nearly integral",
                )
        _clear_of_nonpositive_integers(1 - fi - m[i] + b, "series bottom near a pole")
        _poch_margin(fi, mt + 1)
    return {"b": b, "c": c, "f": f, "m": m}


def _lemma1_t_samples(rng: random.Random, n: int = 8) -> list:
    return [mp.mpf("0.05") + mp.mpf(rng.random()) * mp.mpf("0.9") for _ in range(n)]


def _check_lemma1(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    stol = _series_tol()
    worst = mp.mpf(0)
    for t in case.x_samples:
        closed = meijer_norlund_ipd(t, p["b"], p["c"], p["f"], p["m"], route="closed")
        series = meijer_norlund_ipd(
            t, p["b"], p["c"], p["f"], p["m"], route="series", tol=stol
        )
        worst = max(worst, _relative(closed, series))
    return worst, len(case.x_samples)


def _sample_cor1(rng: random.Random, index: int) -> dict:
    a, b, c = _draw_complex(rng), _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _clear_of_nonpositive_integers(c, "c near a pole")
    for fi, mi in zip(f, m):
        _poch_margin(fi, mt + 1)
        _poch_margin(1 - fi + b - mi, mt)
    return {"a": a, "b": b, "c": c, "f": f, "m": m}


def _check_cor1(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    spec = IpdSpec(b=p["b"], f=p["f"], m=p["m"], a=p["a"], c=p["c"])
    expr = expand_to_gauss(spec)
    lhs_fun = ipd_function(spec)
    stol = _series_tol()
    worst = mp.mpf(0)
    for x in case.x_samples:
        lhs = eval_pfq(lhs_fun, x, stol).value
        rhs = expr.evaluate(x, stol)
        worst = max(worst, _relative(lhs, rhs))
    return worst, len(case.x_samples)


def _sample_lemma2(rng: random.Random, index: int) -> dict:
    b, c = _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _poch_margin(c - b - mt, mt)
    for fi, mi in zip(f, m):
        _poch_margin(fi, mt + 1)
        _poch_margin(1 - fi + b - mi, mt)
    return {"b": b, "c": c, "f": f, "m": m}


def _check_lemma2(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    q_poly = build_Q(p["b"], p["c"], p["f"], p["m"])
    p_poly = build_P(p["b"], p["c"], p["f"], p["m"])
    fm = pochhammer_vec(p["f"], p["m"])
    return _coeff_deviation(p_poly, fm * q_poly), 1


def _sample_cor2(rng: random.Random, index: int) -> dict:
    a, b, c = _draw_complex(rng), _draw_complex(rng), _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    _poch_margin(c - a - mt, mt)
    _poch_margin(c - b - mt, mt)
    _poch_margin(b + 1, mt + 1)
    for fi in f:
        _poch_margin(fi, mt + 1)
    return {"a": a, "b": b, "c": c, "f": f, "m": m}


def _check_cor2(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    qhat = build_Qhat(p["a"], p["b"], p["c"], p["f"], p["m"])
    phat = build_Phat(p["a"], p["b"], p["c"], p["f"], p["m"])
    return _coeff_deviation(qhat, phat), 1


def _sample_lemma3(rng: random.Random, index: int) -> dict:
    alpha = _draw_complex(rng)
    m_max = 6
    for j in range(m_max):
        _require(abs(alpha - m_max + j) >= MARGIN, "(alpha-m)_m factor below margin")
    return {"alpha": alpha, "m_max": m_max}


def _check_lemma3(case: IdentityCase, tol: mp.mpf) -> tuple:
    alpha = case.params["alpha"]
    m_max = case.params["m_max"]
    worst = mp.mpf(0)
    n_checked = 0
    for mt in range(m_max + 1):
        for k in range(mt + 1):
            for i in range(k + 1):
                lhs = mp.mpc(0)
                for j in range(i, k + 1):
                    lhs += (
                        pochhammer(-k, j)
                        * pochhammer(alpha - mt + j, mt - i)
                        * pochhammer(-j, i)
                        / mp.factorial(j)
                    )
                rhs = (
                    (-1) ** i
                    * pochhammer(-k, i)
                    * pochhammer(-mt, k)
                    * pochhammer(alpha - mt, mt)
                    / (pochhammer(-mt, i) * pochhammer(alpha - mt, k))
                )
                worst = max(worst, abs(lhs - rhs) / max(1, abs(rhs)))
                n_checked += 1
    return worst, n_checked


_LEMMA4_M_POOL = ((1,), (2,), (3,), (1, 1), (2, 1), (1, 1, 1), (2, 2), (3, 1),
                  (2, 1, 1), (1, 1, 1, 1), (4,), (5,), (3, 2), (4, 1))


def _sample_lemma4(rng: random.Random, index: int) -> dict:
    b = _draw_complex(rng)
    fs = {}
    for pool_m in _LEMMA4_M_POOL:
        m = IntVector(pool_m)
        f = _draw_f(rng, m)
        for fi in f:
            _poch_margin(fi, m.total + 1)
        _poch_margin(b + 1, 2 * m.total + 1)
        fs[pool_m] = f
    return {"b": b, "f_by_m": fs}


def _check_lemma4(case: IdentityCase, tol: mp.mpf) -> tuple:
    b = case.params["b"]
    worst = mp.mpf(0)
    n_checked = 0
    for pool_m, f in case.params["f_by_m"].items():
        m = IntVector(pool_m)
        mt = m.total
        if mt > 5:
            continue
        f_shift = list(f.shifted_by(m))
        for k in range(mt + 1):
            lhs = mp.mpc(0)
            for i in range(k + 1):
                inner = terminating_pfq(f_shift + [mp.mpc(-i)], list(f), i)
                lhs += (
                    pochhammer(-k, i)
                    * pochhammer(b, i)
                    / (pochhammer(-mt, i) * mp.factorial(i))
                    * inner
                )
            outer = terminating_pfq(
                [mp.mpc(-k), b] + f_shift, [b + mt - k + 1] + list(f), k
            )
            rhs = pochhammer(-b - mt, k) / pochhammer(-mt, k) * outer
            worst = max(worst, abs(lhs - rhs) / max(1, abs(rhs)))
            n_checked += 1
    return worst, n_checked


def _sample_minton(rng: random.Random, index: int) -> dict:
    b = _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    k = mt + rng.randint(0, 4)
    _poch_margin(b + 1, k)
    for fi in f:
        _poch_margin(fi, max(mt, k) + 1)
        _poch_margin(fi - b, mt)
    return {"b": b, "f": f, "m": m, "k": k}


def _check_minton(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    b, f, m, k = p["b"], p["f"], p["m"], p["k"]
    fun = HypFunction(
        ParamVector([mp.mpc(-k), b] + list(f.shifted_by(m))),
        ParamVector([b + 1] + list(f)),
    )
    lhs = eval_pfq(fun, 1, _series_tol()).value
    rhs = (
        mp.factorial(k)
        / pochhammer(b + 1, k)
        * pochhammer_vec(f - b, m)
        / pochhammer_vec(f, m)
    )
    return _relative(lhs, rhs), 1


def _sample_karlsson(rng: random.Random, index: int) -> dict:
    b = _draw_complex(rng)
    m = _draw_m(rng)
    f = _draw_f(rng, m)
    mt = m.total
    a = _draw_complex(rng)
    _require((1 - a - mt).real >= mp.mpf("0.05"), "Re(1-a-m) margin")
    _clear_of_nonpositive_integers(b + 1, "b+1 near a pole")
    _clear_of_nonpositive_integers(1 - a, "gamma pole at 1-a")
    _clear_of_nonpositive_integers(b + 1 - a, "gamma pole at b+1-a")
    for fi in f:
        _poch_margin(fi, mt + 1)
        _clear_of_nonpositive_integers(fi, "bottom parameter near a pole")
        _poch_margin(fi - b, mt)
    return {"a": a, "b": b, "f": f, "m": m}


def _check_karlsson(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    a, b, f, m = p["a"], p["b"], p["f"], p["m"]
    fun = HypFunction(
        ParamVector([a, b] + list(f.shifted_by(m))),
        ParamVector([b + 1] + list(f)),
    )
    lhs = eval_pfq(fun, 1, _series_tol()).value
    rhs = (
        gamma(b + 1)
        * gamma(1 - a)
        / gamma(b + 1 - a)
        * pochhammer_vec(f - b, m)
        / pochhammer_vec(f, m)
    )
    return _relative(lhs, rhs), 1


def _sample_cor3(rng: random.Random, index: int) -> dict:
    a, b = _draw_complex(rng), _draw_complex(rng)
    m = IntVector(rng.choice(((1,), (2,), (3,))))
    f = _draw_f(rng, m)
    mt = m.total
    for q in (1, 2):
        _clear_of_nonpositive_integers(b + q - 1, "gamma pole in Tstar")
        _clear_of_nonpositive_integers(b + q - a, "gamma pole in Tstar")
    fb = pochhammer_vec(f - b, m)
    fb1 = pochhammer_vec(f - b - 1, m)
    _require(abs((b - a + 1) * fb - b * fb1) >= MARGIN, "lambda* denominator margin")
    for fi in f:
        _poch_margin(fi, mt + 1)
    return {"a": a, "b": b, "f": f, "m": m}


def _check_cor3(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    a, b, f, m = p["a"], p["b"], p["f"], p["m"]
    fb = pochhammer_vec(f - b, m)
    fb1 = pochhammer_vec(f - b - 1, m)
    lam_star = (b - a + 1) * ((b + 1) * fb - b * fb1) / ((b - a + 1) * fb - b * fb1)
    poly = build_T(b, 2, f, m, variant="Tstar", a=a)
    root = find_roots(poly).roots[0]
    return abs(lam_star + root) / max(1, abs(lam_star)), 1


def _sample_cor4(rng: random.Random, index: int) -> dict:
    a, d, e, b = (_draw_complex(rng) for _ in range(4))
    m = IntVector((2,))
    f = _draw_f(rng, m)
    f0 = f[0]
    _require(abs(b) >= MARGIN, "b too close to 0")
    _require(abs(e - d - 1) >= MARGIN, "(e-d-1) margin")
    _require(abs(e - a - 1) >= MARGIN, "(e-a-1) margin")
    _require(abs(2 * f0 - b - d + 1) >= MARGIN, "lambda denominator margin")
    _require(
        abs(a * d + (2 * f0 - b + 1) * (e - a - d - 1)) >= MARGIN,
        "lambda* denominator margin",
    )
    _poch_margin(b + 1, 2)
    _poch_margin(f0, 3)
    return {"a": a, "d": d, "e": e, "b": b, "f": f, "m": m}


def _check_cor4(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    a, d, e, b, f, m = p["a"], p["d"], p["e"], p["b"], p["f"], p["m"]
    f0 = f[0]
    lam = (2 * f0 - b + 1) * (e - d - 1) / (2 * f0 - b - d + 1)
    lam_star = (
        (2 * f0 - b + 1)
        * (e - a - 1)
        * (e - d - 1)
        / (a * d + (2 * f0 - b + 1) * (e - a - d - 1))
    )
    root = find_roots(build_L(a, d, e, b, f, m, variant="L")).roots[0]
    root_star = find_roots(build_L(a, d, e, b, f, m, variant="Lhat")).roots[0]
    res = max(
        abs(lam - root) / max(1, abs(lam)),
        abs(lam_star - root_star) / max(1, abs(lam_star)),
    )
    return res, 2


def _sample_cor5(rng: random.Random, index: int) -> dict:
    a, d, e, b = (_draw_complex(rng) for _ in range(4))
    m = IntVector((1, 1))
    f = _draw_f(rng, m)
    s = f[0] + f[1] - b
    _require(abs(b) >= MARGIN, "b too close to 0")
    _require(abs(e - d - 1) >= MARGIN, "(e-d-1) margin")
    _require(abs(e - a - 1) >= MARGIN, "(e-a-1) margin")
    _require(abs(s - d) >= MARGIN, "lambda denominator margin")
    _require(abs(a * d + s * (e - a - d - 1)) >= MARGIN, "lambda* denominator margin")
    _poch_margin(b + 1, 2)
    for fi in f:
        _poch_margin(fi, 2)
    return {"a": a, "d": d, "e": e, "b": b, "f": f, "m": m}


def _check_cor5(case: IdentityCase, tol: mp.mpf) -> tuple:
    p = case.params
    a, d, e, b, f, m = p["a"], p["d"], p["e"], p["b"], p["f"], p["m"]
    s = f[0] + f[1] - b
    lam = s * (e - d - 1) / (s - d)
    lam_star = s * (e - a - 1) * (e - d - 1) / (a * d + s * (e - a - d - 1))
    root = find_roots(build_L(a, d, e, b, f, m, variant="L")).roots[0]
    root_star = find_roots(build_L(a, d, e, b, f, m, variant="Lhat")).roots[0]
    res = max(
        abs(lam - root) / max(1, abs(lam)),
        abs(lam_star - root_star) / max(1, abs(lam_star)),
    )
    return res, 2


@dataclass(frozen=True)
class _Identity:
    sample: Callable
    check: Callable
    x_kind: str = "disk"  # "disk" | "unit" | "t" | "none"


_REGISTRY = {
    "MP1": _Identity(_sample_mp1, _check_mp1),
    "MP2": _Identity(_sample_mp2, _check_mp2),
    "THM3_EQ19": _Identity(_sample_thm3, _make_check_thm3("eq19")),
    "THM3_EQ20": _Identity(_sample_thm3, _make_check_thm3("eq20")),
    "THM4_EQ29": _Identity(_sample_thm4, _make_check_thm4("eq29")),
    "THM4_EQ31": _Identity(_sample_thm4, _make_check_thm4("eq31")),
    "VEC_EQ27": _Identity(_sample_vec, _make_check_vec("eq27")),
    "VEC_EQ28": _Identity(_sample_vec, _make_check_vec("eq28")),
    "THM5_FIRST": _Identity(_sample_thm5, _make_check_thm5("first")),
    "THM5_SECOND": _Identity(_sample_thm5, _make_check_thm5("second")),
    "LEMMA1": _Identity(_sample_lemma1, _check_lemma1, x_kind="t"),
    "COR1": _Identity(_sample_cor1, _check_cor1),
    "LEMMA2": _Identity(_sample_lemma2, _check_lemma2, x_kind="none"),
    "COR2": _Identity(_sample_cor2, _check_cor2, x_kind="none"),
    "LEMMA3": _Identity(_sample_lemma3, _check_lemma3, x_kind="none"),
    "LEMMA4": _Identity(_sample_lemma4, _check_lemma4, x_kind="none"),
    "MINTON": _Identity(_sample_minton, _check_minton, x_kind="unit"),
    "KARLSSON": _Identity(_sample_karlsson, _check_karlsson, x_kind="unit"),
    "COR3": _Identity(_sample_cor3, _check_cor3, x_kind="none"),
    "COR4": _Identity(_sample_cor4, _check_cor4, x_kind="none"),
    "COR5": _Identity(_sample_cor5, _check_cor5, x_kind="none"),
}


def sample_params(identity_id: str, seed: int, count: int) -> list:
    """Draw ``count`` admissible cases for one identity, deterministically.

    Parameters come from the box Re in [-2, 3], Im in [-1, 1] and are
    rejection-resampled until the identity's preconditions hold with margin
    1e-3 (Pochhammer non-vanishing, distinctness, pole clearance, usable
    characteristic roots).  Raises RejectionExhaustedError after 10^4
    failed draws for a single case.
    """
    if identity_id not in _REGISTRY:
        raise KeyError(f"unknown identity id {identity_id!r}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    entry = _REGISTRY[identity_id]
    cases = []
    for index in range(count):
        rng = _case_rng(seed, identity_id, index)
        params = None
        for _attempt in range(MAX_REJECTIONS):
            try:
                params = entry.sample(rng, index)
                break
            except (_Reject, IpdHypError):
                continue
        if params is None:
            raise RejectionExhaustedError(
                f"{identity_id}: no admissible draw in {MAX_REJECTIONS} attempts"
            )
        if entry.x_kind == "disk":
            xs = _default_x_samples(rng)
        elif entry.x_kind == "unit":
            xs = [mp.mpf(1)]
        elif entry.x_kind == "t":
            xs = _lemma1_t_samples(rng)
        else:
            xs = []
        cases.append(IdentityCase(identity_id, params, xs))
    return cases


def evaluate_case(case: IdentityCase, tol: mp.mpf, index: int = 0) -> CaseResult:
    """Run one case; evaluation errors become a skipped status, never an abort."""
    entry = _REGISTRY[case.identity_id]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RootWarning)
            residual, samples = entry.check(case, tol)
    except (IpdHypError, ZeroDivisionError, ValueError) as exc:
        return CaseResult(
            case.identity_id, index, "skipped", None, 0,
            f"{type(exc).__name__}: {exc}",
        )
    status = "pass" if residual <= tol else "fail"
    return CaseResult(case.identity_id, index, status, residual, samples)


def run_suite(
    ids: Optional[Sequence[str]] = None,
    seed: int = 1,
    count: int = 20,
    tol: mp.mpf | None = None,
) -> VerificationReport:
    """Verify the identity catalog; returns the aggregated report.

    Default tolerance is 10^-(P-12) relative at P context digits (1e-28 at
    the default 40 digits), sized so that root-solver and series-truncation
    error dominate cancellation noise.
    """
    if ids is None:
        ids = IDENTITY_IDS
    for identity_id in ids:
        if identity_id not in _REGISTRY:
            raise KeyError(f"unknown identity id {identity_id!r}")
    if tol is None:
        tol = mp.mpf(10) ** (-(mp.mp.dps - 12))
    else:
        tol = mp.mpf(tol)
    started = time.time()
    report = VerificationReport(
        seed=seed, digits=mp.mp.dps, count=count, tolerance=tol
    )
    for identity_id in ids:
        cases = sample_params(identity_id, seed, count)
        for index, case in enumerate(cases):
            report.cases.append(evaluate_case(case, tol, index))
    report.wall_time_s = time.time() - started
    return report


def report_to_json(report: VerificationReport) -> str:
    """Deterministic JSON rendering (wall time is the only varying field)."""
    summary = report.identity_summary()
    doc = {
        "seed": report.seed,
        "digits": report.digits,
        "count": report.count,
        "tolerance": mp.nstr(report.tolerance, 8),
        "identities": [
            {
                "id": identity_id,
                "cases": data["cases"],
                "samples": data["samples"],
                "max_residual": (
                    mp.nstr(data["max_residual"], 12)
                    if data["max_residual"] is not None
                    else None
                ),
                "status": data["status"],
                "skip_reasons": data["skip_reasons"],
            }
            for identity_id, data in summary.items()
        ],
        "failed": report.n_failed,
        "skipped": report.n_skipped,
        "exit_code": report.exit_code,
        "wall_time_s": round(report.wall_time_s, 3),
    }
    return json.dumps(doc, indent=2)

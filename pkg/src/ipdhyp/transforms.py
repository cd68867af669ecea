"""Transformation engine for IPD hypergeometric functions.

Every transformation maps the input function

    F(x) = r+2_F_r+1(a, b, f+m; c, f | x)

(or its variants with extra parameters) to a finite sum of closed-form
terms, each of the shape

    coeff * x^j * (1-x)^mu * pFq(num; den; arg(x)),

with arg either the identity or the Moebius map x/(x-1).  The uniform
:class:`HypTerm` / :class:`HypExpression` representation gives every
theorem the same evaluation and serialization path.  All expressions
returned here equal the *plain* input function F(x): prefactors appearing
on the left side of the published identities are folded into the term
exponents, which makes cross-checks between different transformations a
direct value comparison.

Available transformations (all with two-sided numerical verification in the
test-suite and harness):

* ``apply_mp1`` / ``apply_mp2``: the general first and second
  transformations, valid while the relevant Pochhammer conditions hold.
* ``expand_to_gauss``: expansion into m+1 Gauss functions.
* ``apply_degenerate_single`` (c = b+1), ``apply_degenerate_p``
  (c = b+p, any positive integer p), ``apply_degenerate_vector``
  (several shifted denominator parameters): the degenerate family, which
  covers exactly the region where the general transformations fail.
* ``apply_two_free``: adds a free top/bottom parameter pair (d; e).
* ``meijer_norlund_ipd``: closed evaluation of the associated
  Meijer-Norlund kernel (beta density times a rational function), with an
  independent series route.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import mpmath as mp

from .charpoly import RootSet, build_L, build_Q, build_P, build_Qhat, build_Phat, build_T, find_roots
from .coeffs import IpdSpec, coeff_D, coeff_Y
from .errors import (
    DegenerateCaseError,
    DistinctnessViolationError,
    IntegerDifferenceError,
    RootWarning,
    TrivialSplitError,
    ZeroDenominatorError,
)
from .hypeval import HypFunction, eval_pfq, eval_prefactor, mobius_arg
from .kernel import (
    ComplexLike,
    ComplexValue,
    IntVector,
    ParamVector,
    cplx,
    gamma,
    pochhammer,
    pochhammer_vec,
)

ARG_IDENTITY = "identity"
ARG_MOBIUS = "mobius"


@dataclass(frozen=True)
class HypTerm:
    """One closed-form term: coeff * x^j * (1-x)^mu * pFq(...; arg(x))."""

    coeff: ComplexValue
    x_power: int = 0
    prefactor_exponent: ComplexValue = mp.mpc(0)
    arg_map: str = ARG_IDENTITY
    fun: Optional[HypFunction] = None

    def __post_init__(self):
        object.__setattr__(self, "coeff", cplx(self.coeff))
        object.__setattr__(self, "prefactor_exponent", cplx(self.prefactor_exponent))
        if self.arg_map not in (ARG_IDENTITY, ARG_MOBIUS):
            raise ValueError(f"unknown arg_map {self.arg_map!r}")

    def evaluate(self, x: ComplexLike, tol=None) -> ComplexValue:
        x = cplx(x)
        value = self.coeff
        if value == 0:
            return mp.mpc(0)
        if self.x_power:
            value *= x**self.x_power
        if self.prefactor_exponent != 0:
            value *= eval_prefactor(x, self.prefactor_exponent)
        if self.fun is not None:
            arg = mobius_arg(x) if self.arg_map == ARG_MOBIUS else x
            value *= eval_pfq(self.fun, arg, tol).value
        return value


@dataclass(frozen=True)
class HypExpression:
    """Finite sum of :class:`HypTerm`; evaluation is the sum of the terms."""

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def evaluate(self, x: ComplexLike, tol=None) -> ComplexValue:
        x = cplx(x)
        return sum((t.evaluate(x, tol) for t in self.terms), mp.mpc(0))

    def __len__(self) -> int:
        return len(self.terms)


def ipd_function(spec: IpdSpec, c: ComplexLike | None = None) -> HypFunction:
    """The input function r+2_F_r+1(a, b, f+m; c, f) as a HypFunction."""
    cc = cplx(c) if c is not None else spec.c
    if cc is None:
        raise ValueError("spec carries no bottom parameter c")
    if spec.a is None:
        raise ValueError("spec carries no top parameter a")
    num = [spec.a, spec.b] + list(spec.f.shifted_by(spec.m))
    den = [cc] + list(spec.f)
    return HypFunction(ParamVector(num), ParamVector(den))


def _warn_pole_risk(roots: RootSet, what: str) -> None:
    if any(roots.pole_risk):
        bad = [
            mp.nstr(r, 8)
            for r, flag in zip(roots.roots, roots.pole_risk)
            if flag
        ]
        warnings.warn(
            f"{what} has shifted parameters at nonpositive integers: {bad}; "
            "evaluation fails only if the series reaches the pole",
            RootWarning,
            stacklevel=3,
        )


def _root_pair_params(roots: RootSet, negate: bool = False):
    """Top/bottom parameter lists (rho+1; rho), optionally with rho = -root."""
    vals = [-r for r in roots.roots] if negate else list(roots.roots)
    return [v + 1 for v in vals], vals


def apply_mp1(spec: IpdSpec, route: str = "paperQ", root_seed: int = 0) -> HypExpression:
    """First transformation: F = (1-x)^-a * m+2_F_m+1(...; x/(x-1)).

    The transformed function carries a, c-b-m and the pairs (zeta+1; zeta)
    over the bottom parameter c, where zeta are the roots of the
    characteristic polynomial (route "paperQ" builds Q, route "newP" builds
    the equivalent P).  Requires (c-b-m)_m != 0.
    """
    a, b, c = spec.a, spec.b, spec.c
    if a is None or c is None:
        raise ValueError("apply_mp1 needs both a and c set on the IpdSpec")
    mt = spec.m_total
    if route == "paperQ":
        poly = build_Q(b, c, spec.f, spec.m)
    elif route == "newP":
        poly = build_P(b, c, spec.f, spec.m)
    else:
        raise ValueError(f"unknown route {route!r}")
    roots = find_roots(poly, seed=root_seed)
    _warn_pole_risk(roots, "first transformation")
    top, bottom = _root_pair_params(roots)
    fun = HypFunction(
        ParamVector([a, c - b - mt] + top), ParamVector([c] + bottom)
    )
    return HypExpression(
        [HypTerm(mp.mpc(1), 0, -a, ARG_MOBIUS, fun)]
    )


def apply_mp2(spec: IpdSpec, route: str = "paperQhat", root_seed: int = 0) -> HypExpression:
    """Second transformation: F = (1-x)^(c-a-b-m) * m+2_F_m+1(...; x).

    Parameters c-a-m, c-b-m and pairs (eta+1; eta) over c, eta the roots of
    the hatted characteristic polynomial (routes "paperQhat" / "newPhat").
    Requires (c-a-m)_m, (c-b-m)_m and (1+a+b-c)_m all nonzero.
    """
    a, b, c = spec.a, spec.b, spec.c
    if a is None or c is None:
        raise ValueError("apply_mp2 needs both a and c set on the IpdSpec")
    mt = spec.m_total
    if pochhammer(1 + a + b - c, mt) == 0:
        raise DegenerateCaseError("(1+a+b-c)_m = 0")
    if route == "paperQhat":
        poly = build_Qhat(a, b, c, spec.f, spec.m)
    elif route == "newPhat":
        poly = build_Phat(a, b, c, spec.f, spec.m)
    else:
        raise ValueError(f"unknown route {route!r}")
    roots = find_roots(poly, seed=root_seed)
    _warn_pole_risk(roots, "second transformation")
    top, bottom = _root_pair_params(roots)
    fun = HypFunction(
        ParamVector([c - a - mt, c - b - mt] + top), ParamVector([c] + bottom)
    )
    return HypExpression(
        [HypTerm(mp.mpc(1), 0, c - a - b - mt, ARG_IDENTITY, fun)]
    )


def expand_to_gauss(spec: IpdSpec) -> HypExpression:
    """Expansion F = (1/(f)_m) sum_k (-1)^k D_k (b)_k 2F1(a, b+k; c | x)."""
    a, b, c = spec.a, spec.b, spec.c
    if a is None or c is None:
        raise ValueError("expand_to_gauss needs both a and c set on the IpdSpec")
    fm = pochhammer_vec(spec.f, spec.m)
    if fm == 0:
        raise ZeroDenominatorError("(f)_m = 0")
    terms = []
    for k in range(spec.m_total + 1):
        weight = (-1) ** k * coeff_D(k, spec.f, spec.m, b) * pochhammer(b, k) / fm
        fun = HypFunction(ParamVector([a, b + k]), ParamVector([c]))
        terms.append(HypTerm(weight, 0, mp.mpc(0), ARG_IDENTITY, fun))
    return HypExpression(terms)


def _algebraic_tail(a: ComplexValue, b: ComplexValue, f, m, scale: ComplexValue):
    """Terms scale * Y_l(b, f, m) (a)_l x^l (1-x)^(-a-l), l = 0..m-1."""
    mt = m.total if isinstance(m, IntVector) else IntVector(m).total
    out = []
    for l in range(mt):
        coeff = scale * coeff_Y(l, b, f, m) * pochhammer(a, l)
        out.append(HypTerm(coeff, l, -a - l, ARG_IDENTITY, None))
    return out


def apply_degenerate_single(spec: IpdSpec, variant: str = "eq19") -> HypExpression:
    """Transformation for c = b+1 (implied structurally, never inferred).

    Both variants return F itself: one Gauss term

        eq19: (f-b)_m/(f)_m * (1-x)^(-a)  * 2F1(1, a; b+1 | x/(x-1))
        eq20: (f-b)_m/(f)_m * (1-x)^(1-a) * 2F1(1, b+1-a; b+1 | x)

    plus the m algebraic terms Y_l (a)_l x^l (1-x)^(-a-l).  The |x| < 1
    intermediate form ("eq26") keeps the plain-argument Gauss function
    2F1(a, b; b+1 | x) with no prefactor.
    """
    a, b = spec.a, spec.b
    if a is None:
        raise ValueError("degenerate transformation needs a set on the IpdSpec")
    if spec.c is not None and spec.c != b + 1:
        raise ValueError("spec.c must be exactly b+1 (or omitted) here")
    fm = pochhammer_vec(spec.f, spec.m)
    if fm == 0:
        raise ZeroDenominatorError("(f)_m = 0")
    fbm = pochhammer_vec(spec.f - b, spec.m)
    if variant == "eq19":
        gauss = HypTerm(
            fbm / fm,
            0,
            -a,
            ARG_MOBIUS,
            HypFunction(ParamVector([mp.mpc(1), a]), ParamVector([b + 1])),
        )
    elif variant == "eq20":
        gauss = HypTerm(
            fbm / fm,
            0,
            1 - a,
            ARG_IDENTITY,
            HypFunction(ParamVector([mp.mpc(1), b + 1 - a]), ParamVector([b + 1])),
        )
    elif variant == "eq26":
        gauss = HypTerm(
            fbm / fm,
            0,
            mp.mpc(0),
            ARG_IDENTITY,
            HypFunction(ParamVector([a, b]), ParamVector([b + 1])),
        )
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return HypExpression([gauss] + _algebraic_tail(a, b, spec.f, spec.m, mp.mpc(1)))


def apply_degenerate_p(
    spec: IpdSpec,
    p: int,
    variant: str = "eq29",
    root_seed: int = 0,
) -> HypExpression:
    """Transformation for c = b+p with any positive integer p.

    The Gauss parts of the p shifted single-difference transformations
    collapse into one (p+1)_F_p with parameter pairs (-lambda+1; -lambda),
    lambda the roots of the degree-(p-1) polynomial (variant "eq29" uses T
    with the Moebius argument, "eq31" uses T* at the plain argument).  The
    algebraic part is the double sum over q = 1..p and l = 0..m-1.
    """
    a, b = spec.a, spec.b
    if a is None:
        raise ValueError("degenerate transformation needs a set on the IpdSpec")
    p = int(p)
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    if spec.c is not None and spec.c != b + p:
        raise ValueError("spec.c must be exactly b+p (or omitted) here")
    fm = pochhammer_vec(spec.f, spec.m)
    if fm == 0:
        raise ZeroDenominatorError("(f)_m = 0")
    if variant == "eq29":
        poly = build_T(b, p, spec.f, spec.m, variant="T")
        head_coeff = poly(0) / (gamma(b) * fm)
        head_num = [a, mp.mpc(1)]
        arg = ARG_MOBIUS
        mu = -a
    elif variant == "eq31":
        poly = build_T(b, p, spec.f, spec.m, variant="Tstar", a=a)
        head_coeff = gamma(b - a + 1) * poly(0) / (gamma(b) * fm)
        head_num = [mp.mpc(1), b + 1 - a]
        arg = ARG_IDENTITY
        mu = 1 - a
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if p > 1:
        roots = find_roots(poly, seed=root_seed)
        _warn_pole_risk_negated(roots, "degenerate transformation")
        top, bottom = _root_pair_params(roots, negate=True)
    else:
        top, bottom = [], []
    fun = HypFunction(ParamVector(head_num + top), ParamVector([b + p] + bottom))
    terms = [HypTerm(head_coeff, 0, mu, arg, fun)]
    bp = pochhammer(b, p)
    for q in range(1, p + 1):
        beta_q = b + q - 1
        if beta_q == 0:
            raise DegenerateCaseError("b + q - 1 = 0 in the algebraic part")
        weight = (
            (-1) ** (q - 1)
            * bp
            / (beta_q * mp.factorial(q - 1) * mp.factorial(p - q))
        )
        terms.extend(_algebraic_tail(a, beta_q, spec.f, spec.m, weight))
    return HypExpression(terms)


def _warn_pole_risk_negated(roots: RootSet, what: str) -> None:
    """Pole risk for parameter sets built from the negated roots."""
    suspect = [
        mp.nstr(r, 8)
        for r in roots.roots
        if abs(r.imag) < mp.mpf("1e-6")
        and abs(r.real - mp.floor(r.real + mp.mpf("0.5"))) < mp.mpf("1e-6")
        and mp.floor(r.real + mp.mpf("0.5")) >= 0
    ]
    if suspect:
        warnings.warn(
            f"{what} has shifted parameters at nonpositive integers: {suspect}; "
            "evaluation fails only if the series reaches the pole",
            RootWarning,
            stacklevel=4,
        )


def apply_degenerate_vector(
    b: ParamVector,
    p: IntVector,
    a: ComplexLike,
    f: ParamVector,
    m: IntVector,
    variant: str = "eq27",
) -> HypExpression:
    """Several negative integral differences: bottom parameters b_j + p_j.

    Partial fractions split the function over the grid
    beta = (b_1, ..., b_1+p_1-1, ..., b_l, ..., b_l+p_l-1), which must be
    pairwise distinct; each grid point contributes a weighted c = beta_q + 1
    transformation (variant "eq27" via the Moebius-argument form, "eq28"
    via the plain-argument form).
    """
    if not isinstance(b, ParamVector):
        b = ParamVector(b)
    if not isinstance(p, IntVector):
        p = IntVector(p)
    if len(b) != len(p):
        raise DistinctnessViolationError("b and p must have matching lengths")
    a = cplx(a)
    beta = []
    for bj, pj in zip(b, p):
        beta.extend(bj + i for i in range(pj))
    ptot = p.total
    coincidence_tol = mp.mpf(10) ** (-(mp.mp.dps - 8))
    for i in range(ptot):
        for j in range(i + 1, ptot):
            if abs(beta[i] - beta[j]) <= coincidence_tol * (1 + abs(beta[i])):
                raise DistinctnessViolationError(
                    f"coincident shifted parameters beta = {mp.nstr(beta[i], 10)}"
                )
    single_variant = "eq19" if variant == "eq27" else "eq20" if variant == "eq28" else None
    if single_variant is None:
        raise ValueError(f"unknown variant {variant!r}")
    bp = pochhammer_vec(b, p)
    terms = []
    for q in range(ptot):
        B_q = mp.mpc(1)
        for v in range(ptot):
            if v != q:
                B_q *= beta[v] - beta[q]
        if beta[q] == 0:
            raise DegenerateCaseError("a shifted parameter beta_q vanishes")
        weight = bp / (beta[q] * B_q)
        sub = apply_degenerate_single(
            IpdSpec(b=beta[q], f=f, m=m, a=a), variant=single_variant
        )
        for t in sub.terms:
            terms.append(
                HypTerm(weight * t.coeff, t.x_power, t.prefactor_exponent, t.arg_map, t.fun)
            )
    return HypExpression(terms)


def apply_two_free(
    a: ComplexLike,
    d: ComplexLike,
    e: ComplexLike,
    b: ComplexLike,
    f: ParamVector,
    m: IntVector,
    variant: str = "first",
    root_seed: int = 0,
) -> HypExpression:
    """Free parameter pair (d; e) on top of the c = b+1 structure.

    Splits r+3_F_r+2(a, d, b, f+m; e, b+1, f) into a 3F2 with weight
    (f-b)_m/(f)_m plus, with the complementary weight, a first- (variant
    "first") or second- (variant "second") transformed m+1_F_m whose
    parameter pairs come from the roots of L or L-hat.
    """
    a, d, e, b = cplx(a), cplx(d), cplx(e), cplx(b)
    if not isinstance(f, ParamVector):
        f = ParamVector(f)
    if not isinstance(m, IntVector):
        m = IntVector(m)
    if b == 0:
        raise TrivialSplitError("b = 0 makes the weight polynomial vanish")
    mt = m.total
    fm = pochhammer_vec(f, m)
    if fm == 0:
        raise ZeroDenominatorError("(f)_m = 0")
    fbm = pochhammer_vec(f - b, m)
    head = HypTerm(
        fbm / fm,
        0,
        mp.mpc(0),
        ARG_IDENTITY,
        HypFunction(ParamVector([a, d, b]), ParamVector([e, b + 1])),
    )
    weight = (fm - fbm) / fm
    if variant == "first":
        if mt > 1:
            poly = build_L(a, d, e, b, f, m, variant="L")
            roots = find_roots(poly, seed=root_seed)
            _warn_pole_risk(roots, "two-free-parameter transformation")
            top, bottom = _root_pair_params(roots)
        else:
            top, bottom = [], []
        fun = HypFunction(
            ParamVector([a, e - d - mt + 1] + top), ParamVector([e] + bottom)
        )
        tail = HypTerm(weight, 0, -a, ARG_MOBIUS, fun)
    elif variant == "second":
        if pochhammer(1 + a + d - e, mt - 1) == 0:
            raise DegenerateCaseError("(1+a+d-e)_{m-1} = 0")
        if mt > 1:
            poly = build_L(a, d, e, b, f, m, variant="Lhat")
            roots = find_roots(poly, seed=root_seed)
            _warn_pole_risk(roots, "two-free-parameter transformation")
            top, bottom = _root_pair_params(roots)
        else:
            top, bottom = [], []
        fun = HypFunction(
            ParamVector([e - a - mt + 1, e - d - mt + 1] + top),
            ParamVector([e] + bottom),
        )
        tail = HypTerm(weight, 0, e - a - d - mt + 1, ARG_IDENTITY, fun)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return HypExpression([head, tail])


def two_free_function(a, d, e, b, f, m) -> HypFunction:
    """Left side of the two-free-parameter identity as a HypFunction."""
    a, d, e, b = cplx(a), cplx(d), cplx(e), cplx(b)
    if not isinstance(f, ParamVector):
        f = ParamVector(f)
    if not isinstance(m, IntVector):
        m = IntVector(m)
    num = [a, d, b] + list(f.shifted_by(m))
    den = [e, b + 1] + list(f)
    return HypFunction(ParamVector(num), ParamVector(den))


def vector_function(a, b: ParamVector, p: IntVector, f, m) -> HypFunction:
    """Left side of the vector-difference identity as a HypFunction."""
    if not isinstance(b, ParamVector):
        b = ParamVector(b)
    if not isinstance(p, IntVector):
        p = IntVector(p)
    if not isinstance(f, ParamVector):
        f = ParamVector(f)
    if not isinstance(m, IntVector):
        m = IntVector(m)
    num = [cplx(a)] + list(b) + list(f.shifted_by(m))
    den = [bj + pj for bj, pj in zip(b, p)] + list(f)
    return HypFunction(ParamVector(num), ParamVector(den))


def meijer_norlund_ipd(
    t: ComplexLike,
    b: ComplexLike,
    c: ComplexLike,
    f,
    m,
    route: str = "closed",
    tol=None,
) -> ComplexValue:
    """IPD instance of the Meijer-Norlund kernel on (0, 1).

    route "closed": t^b (1-t)^(c-b-1) / Gamma(c-b) *
                    sum_k D_k (c-b-k)_k t^k/(t-1)^k  (always valid).
    route "series": t^b (f-b)_m / Gamma(c-b) *
                    (r+1)F_r(1-c+b, 1-f+b; 1-f-m+b | t), which requires the
                    genericity conditions f_i - f_j and f_i - c not integral
                    (otherwise raises IntegerDifferenceError).
    """
    t = cplx(t)
    if not (t.imag == 0 and 0 < t.real < 1):
        raise ValueError("t must be real in (0, 1)")
    b, c = cplx(b), cplx(c)
    if not isinstance(f, ParamVector):
        f = ParamVector(f)
    if not isinstance(m, IntVector):
        m = IntVector(m)
    mt = m.total
    if route == "closed":
        acc = mp.mpc(0)
        for k in range(mt + 1):
            acc += (
                coeff_D(k, f, m, b)
                * pochhammer(c - b - k, k)
                * t**k
                / (t - 1) ** k
            )
        return t**b * (1 - t) ** (c - b - 1) / gamma(c - b) * acc
    if route == "series":
        def _integral(z: ComplexValue) -> bool:
            return z.imag == 0 and z.real == mp.floor(z.real)

        for i, fi in enumerate(f):
            if _integral(fi - c):
                raise IntegerDifferenceError(f"f[{i}] - c is an integer")
            for j, fj in enumerate(f):
                if i != j and _integral(fi - fj):
                    raise IntegerDifferenceError(f"f[{i}] - f[{j}] is an integer")
        fbm = pochhammer_vec(f - b, m)
        fun = HypFunction(
            ParamVector([1 - c + b] + [1 - fi + b for fi in f]),
            ParamVector([1 - fi - mi + b for fi, mi in zip(f, m)]),
        )
        return t**b * fbm / gamma(c - b) * eval_pfq(fun, t, tol).value
    raise ValueError(f"unknown route {route!r}")

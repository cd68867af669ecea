"""Characteristic polynomials and root extraction.

Each transformation of an IPD hypergeometric function trades the r pairs of
integral-difference parameters for the roots of a characteristic polynomial:
the transformed function carries parameter pairs (root+1; root) downstairs
and upstairs.  This module builds every such polynomial in dense coefficient
form:

* ``build_Q`` / ``build_P``:   degree-m polynomials of the first
  transformation (two independently published forms; P = (f)_m * Q).
* ``build_Qhat`` / ``build_Phat``: degree-m polynomials of the second
  transformation (coefficientwise equal, which is itself a nontrivial
  hypergeometric identity verified by the test-suite).
* ``build_T`` (variants T, T*): degree-(p-1) polynomials of the
  one-negative-integral-difference extensions.
* ``build_L`` (variants L, L-hat): degree-(m-1) polynomials of the
  two-free-parameter extensions, assembled from the Y coefficients.
* ``w_poly``: the degree-(m-1) weight polynomial behind the Y family.

``find_roots`` extracts all roots simultaneously (Ehrlich-Aberth iteration
with seeded random-circle initialization).  Root multiplicity is not
classified: repeated roots come back as near-coincident values, which is
harmless downstream because (root+1, root) parameter pairs cancel formally
in series term ratios.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import mpmath as mp

from .coeffs import coeff_C, coeff_D, coeff_Y, w_poly_coeffs
from .errors import (
    DegenerateCaseError,
    GammaPoleError,
    NonConvergenceError,
    ZeroPolynomialError,
)
from .kernel import (
    ComplexLike,
    ComplexValue,
    IntVector,
    ParamVector,
    cplx,
    gamma,
    is_nonpositive_integer,
    pochhammer,
    pochhammer_vec,
    terminating_pfq,
)

#: Relative magnitude below which a leading coefficient is trimmed.
TRIM_GUARD_DIGITS = 6


class CPoly:
    """Dense univariate polynomial, ascending complex coefficients.

    Trailing (highest-degree) coefficients smaller than
    10^-(dps-6) relative to the largest coefficient are trimmed at
    construction, so ``degree`` is meaningful.  The zero polynomial is
    explicitly representable (``is_zero``).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim: bool = True):
        cs = [cplx(c) for c in coeffs]
        if not cs:
            cs = [mp.mpc(0)]
        if trim:
            top = max(abs(c) for c in cs)
            if top == 0:
                cs = [mp.mpc(0)]
            else:
                tol = mp.mpf(10) ** (-(mp.mp.dps - TRIM_GUARD_DIGITS)) * top
                while len(cs) > 1 and abs(cs[-1]) <= tol:
                    cs.pop()
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> ComplexValue:
        return self.coeffs[-1]

    def __call__(self, z: ComplexLike) -> ComplexValue:
        z = cplx(z)
        acc = mp.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "CPoly") -> "CPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [mp.mpc(0)] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(other.coeffs):
            out[i] += c
        return CPoly(out)

    def __mul__(self, other) -> "CPoly":
        if isinstance(other, CPoly):
            out = [mp.mpc(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return CPoly(out)
        s = cplx(other)
        return CPoly([c * s for c in self.coeffs], trim=False)

    __rmul__ = __mul__

    def monic(self) -> "CPoly":
        lead = self.leading
        if lead == 0:
            raise ZeroPolynomialError("cannot normalize the zero polynomial")
        return CPoly([c / lead for c in self.coeffs], trim=False)

    def derivative(self) -> "CPoly":
        if len(self.coeffs) == 1:
            return CPoly([mp.mpc(0)], trim=False)
        return CPoly(
            [i * c for i, c in enumerate(self.coeffs) if i > 0], trim=False
        )

    @classmethod
    def from_roots(cls, roots, lead: ComplexLike = 1) -> "CPoly":
        poly = cls([cplx(lead)], trim=False)
        for r in roots:
            poly = poly * cls([-cplx(r), mp.mpc(1)], trim=False)
        return poly

    def __repr__(self) -> str:
        return f"CPoly(degree={self.degree})"


def rising_basis(k: int) -> CPoly:
    """(t)_k = t(t+1)...(t+k-1) as a polynomial in t."""
    poly = CPoly([mp.mpc(1)], trim=False)
    for j in range(k):
        poly = poly * CPoly([mp.mpc(j), mp.mpc(1)], trim=False)
    return poly


def shifted_reversed_basis(c0: ComplexLike, n: int) -> CPoly:
    """(c0 - t)_n = (c0-t)(c0-t+1)...(c0-t+n-1) as a polynomial in t."""
    c0 = cplx(c0)
    poly = CPoly([mp.mpc(1)], trim=False)
    for j in range(n):
        poly = poly * CPoly([c0 + j, mp.mpc(-1)], trim=False)
    return poly


@dataclass
class RootSet:
    """Roots of a characteristic polynomial plus a quality certificate.

    ``residual`` is max |poly(root)| over the roots, scaled by the leading
    coefficient.  ``pole_risk`` marks roots lying at (or within 1e-6 of) a
    nonpositive integer; used as a bottom parameter such a root makes the
    transformed series ill-defined unless it terminates first.
    """

    roots: ParamVector
    residual: mp.mpf
    pole_risk: tuple = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def _near_nonpositive_integer(z: ComplexValue, tol=None) -> bool:
    if tol is None:
        tol = mp.mpf("1e-6")
    if abs(z.imag) > tol:
        return False
    nearest = mp.floor(z.real + mp.mpf("0.5"))
    return nearest <= 0 and abs(z.real - nearest) <= tol


def find_roots(
    poly: CPoly,
    seed: int = 0,
    max_iterations: int = 200,
    target: mp.mpf | None = None,
) -> RootSet:
    """All complex roots of ``poly`` by simultaneous Ehrlich-Aberth iteration.

    Initial guesses sit on a circle of Cauchy-bound radius at seeded random
    angles, so the result is deterministic for a given seed.  Iteration runs
    at 15 guard digits and stops when the scaled residual
    max|p(root)| / |lead| falls below ``target`` (default 10^-(dps-10));
    raises NonConvergenceError after ``max_iterations`` sweeps.
    """
    if poly.is_zero:
        raise ZeroPolynomialError("zero polynomial has no well-defined roots")
    if target is None:
        target = mp.mpf(10) ** (-(mp.mp.dps - 10))
    n = poly.degree
    if n == 0:
        return RootSet(ParamVector([]), mp.mpf(0), ())
    rng = random.Random(seed)
    with mp.extradps(15):
        monic = poly.monic()
        if n == 1:
            roots = [-monic.coeffs[0]]
            res = abs(poly(roots[0])) / abs(poly.leading)
            return RootSet(
                ParamVector(roots), res, (_near_nonpositive_integer(roots[0]),)
            )
        deriv = monic.derivative()
        radius = 1 + max(abs(c) for c in monic.coeffs[:-1])
        z = [
            radius
            * mp.exp(mp.mpc(0, 2 * mp.pi * (k + mp.mpf(rng.random()) / 2) / n + mp.mpf("0.35")))
            for k in range(n)
        ]
        lead_mag = abs(poly.leading)
        converged = False
        residual = mp.inf
        for _ in range(max_iterations):
            for i in range(n):
                pv = monic(z[i])
                dv = deriv(z[i])
                if dv == 0:
                    z[i] = z[i] * (1 + mp.mpf("1e-8")) + mp.mpf("1e-12")
                    dv = deriv(z[i])
                    pv = monic(z[i])
                newton = pv / dv
                shifts = mp.mpc(0)
                for j in range(n):
                    if j == i:
                        continue
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = mp.mpf(10) ** (-mp.mp.dps)
                    shifts += 1 / diff
                denom = 1 - newton * shifts
                if denom == 0:
                    step = newton
                else:
                    step = newton / denom
                z[i] = z[i] - step
            residual = max(abs(poly(zi)) for zi in z) / lead_mag
            if residual <= target:
                converged = True
                break
        if not converged:
            raise NonConvergenceError(
                f"root iteration failed to reach residual {mp.nstr(target, 5)} "
                f"within {max_iterations} sweeps (got {mp.nstr(residual, 5)})"
            )
    roots = [mp.mpc(zi) for zi in z]
    flags = tuple(_near_nonpositive_integer(zi) for zi in roots)
    return RootSet(ParamVector(roots), residual, flags)


def _vec(f) -> ParamVector:
    return f if isinstance(f, ParamVector) else ParamVector(f)


def _mul(m) -> IntVector:
    return m if isinstance(m, IntVector) else IntVector(m)


def build_Q(b: ComplexLike, c: ComplexLike, f, m, route: str = "eq5") -> CPoly:
    """First-transformation characteristic polynomial Q, degree m, Q(0) = 1.

    route "eq5" assembles sum_k (b)_k C_k (t)_k (c-b-m-t)_{m-k} directly in
    coefficient form; route "eq7" evaluates the equivalent rearrangement
    with terminating-hypergeometric weights at m+1 points and interpolates.
    Requires (c-b-m)_m != 0 (otherwise the transformation degenerates).
    """
    b, c = cplx(b), cplx(c)
    f, m = _vec(f), _mul(m)
    mt = m.total
    norm = pochhammer(c - b - mt, mt)
    if norm == 0:
        raise DegenerateCaseError("(c-b-m)_m = 0: degenerate regime")
    if route == "eq5":
        out = CPoly([mp.mpc(0)], trim=False)
        for k in range(mt + 1):
            weight = pochhammer(b, k) * coeff_C(k, f, m) / norm
            out = out + weight * (rising_basis(k) * shifted_reversed_basis(c - b - mt, mt - k))
        return CPoly(out.coeffs)
    if route == "eq7":
        fmvals = [
            terminating_pfq(list(f.shifted_by(m)) + [mp.mpc(-k)], list(f), k)
            for k in range(mt + 1)
        ]

        def q_at(t: ComplexValue) -> ComplexValue:
            head = pochhammer(c - b - t - mt, mt) / norm
            tot = mp.mpc(0)
            term_tk = mp.mpc(1)
            for k in range(mt + 1):
                tot += (
                    fmvals[k]
                    * term_tk
                    * pochhammer(b, k)
                    / (pochhammer(1 + t + b - c, k) * mp.factorial(k))
                )
                term_tk *= t + k
            return head * tot

        # interpolation nodes, offset off the real axis and checked against
        # the poles of (1+t+b-c)_k at t = c-b-1-j
        poles = [c - b - 1 - j for j in range(mt)]
        for offset in ("0.5", "-0.7", "1.3", "0.23", "-1.42"):
            nodes = [mp.mpc(j, mp.mpf(offset)) for j in range(mt + 1)]
            clearance = min(
                (abs(t - pole) for t in nodes for pole in poles), default=mp.mpf(1)
            )
            if clearance > mp.mpf("0.05"):
                return _interpolate(nodes, [q_at(t) for t in nodes])
        raise DegenerateCaseError("no pole-free interpolation nodes found")
    raise ValueError(f"unknown route {route!r}")


def _interpolate(nodes, values) -> CPoly:
    """Lagrange interpolation through (node, value) pairs."""
    total = CPoly([mp.mpc(0)], trim=False)
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        basis = CPoly([yi], trim=False)
        for j, xj in enumerate(nodes):
            if j == i:
                continue
            basis = basis * CPoly([-xj, mp.mpc(1)], trim=False)
            basis = basis * (1 / (xi - xj))
        total = total + basis
    return CPoly(total.coeffs)


def build_P(b: ComplexLike, c: ComplexLike, f, m) -> CPoly:
    """Alternative first-transformation polynomial P, degree m, P(0) = (f)_m.

    Assembled from the D coefficients:
    P(x) = (1/(c-b-m)_m) sum_k (b)_k (1-c+b)_k D_k (c-b-m-x)_{m-k}.
    Coefficientwise P = (f)_m * Q, so both share the same roots.
    """
    b, c = cplx(b), cplx(c)
    f, m = _vec(f), _mul(m)
    mt = m.total
    norm = pochhammer(c - b - mt, mt)
    if norm == 0:
        raise DegenerateCaseError("(c-b-m)_m = 0: degenerate regime")
    out = CPoly([mp.mpc(0)], trim=False)
    for k in range(mt + 1):
        weight = (
            pochhammer(b, k) * pochhammer(1 - c + b, k) * coeff_D(k, f, m, b) / norm
        )
        out = out + weight * shifted_reversed_basis(c - b - mt, mt - k)
    return CPoly(out.coeffs)


def build_Qhat(a: ComplexLike, b: ComplexLike, c: ComplexLike, f, m) -> CPoly:
    """Second-transformation polynomial Q-hat, degree m, Q-hat(0) = 1.

    Each summand couples (t)_k with a terminating 3F2 whose second top
    parameter is t+k; expanding in the rising-factorial basis (t)_{k+s} and
    converting to monomials keeps everything exact.
    Requires (c-a-m)_m != 0 and (c-b-m)_m != 0.
    """
    a, b, c = cplx(a), cplx(b), cplx(c)
    f, m = _vec(f), _mul(m)
    mt = m.total
    if pochhammer(c - a - mt, mt) == 0 or pochhammer(c - b - mt, mt) == 0:
        raise DegenerateCaseError("(c-a-m)_m or (c-b-m)_m vanishes")
    rise = [mp.mpc(0)] * (mt + 1)
    for k in range(mt + 1):
        weight = (
            (-1) ** k
            * coeff_C(k, f, m)
            * pochhammer(a, k)
            * pochhammer(b, k)
            / (pochhammer(c - a - mt, k) * pochhammer(c - b - mt, k))
        )
        rise[k] += weight
        term = mp.mpc(1)
        for s in range(mt - k):
            term *= ((-mt + k + s) * (c - a - b - mt + s)) / (
                (c - a - mt + k + s) * (c - b - mt + k + s) * (s + 1)
            )
            rise[k + s + 1] += weight * term
    out = CPoly([mp.mpc(0)], trim=False)
    for n, cn in enumerate(rise):
        out = out + cn * rising_basis(n)
    return CPoly(out.coeffs)


def build_Phat(a: ComplexLike, b: ComplexLike, c: ComplexLike, f, m) -> CPoly:
    """Alternative second-transformation polynomial P-hat, degree m.

    P-hat(0) = 1 and P-hat coincides with Q-hat coefficientwise; the two
    builds follow genuinely different summation formulas, so their equality
    is a strong cross-check.
    """
    a, b, c = cplx(a), cplx(b), cplx(c)
    f, m = _vec(f), _mul(m)
    mt = m.total
    norm = pochhammer(c - a - mt, mt)
    if norm == 0 or pochhammer(c - b - mt, mt) == 0:
        raise DegenerateCaseError("(c-a-m)_m or (c-b-m)_m vanishes")
    out = CPoly([mp.mpc(0)], trim=False)
    fm_shift = list(f.shifted_by(m))
    for k in range(mt + 1):
        hyp = terminating_pfq(
            [mp.mpc(-k), b] + fm_shift, [b + mt - k + 1] + list(f), k
        )
        weight = (
            (-1) ** k
            * pochhammer(a, k)
            * pochhammer(-b - mt, k)
            * hyp
            / (norm * pochhammer(c - b - mt, k) * mp.factorial(k))
        )
        out = out + weight * (
            rising_basis(k) * shifted_reversed_basis(c - a - mt, mt - k)
        )
    return CPoly(out.coeffs)


def _gamma_or_pole(z: ComplexValue, context: str) -> ComplexValue:
    if is_nonpositive_integer(z):
        raise GammaPoleError(f"gamma argument {z} is a nonpositive integer in {context}")
    return gamma(z)


def build_T(
    b: ComplexLike,
    p: int,
    f,
    m,
    variant: str = "T",
    a: ComplexLike | None = None,
) -> CPoly:
    """Degree-(p-1) polynomial of the c = b+p extensions (variants T, Tstar).

    T(z)  = sum_q (-1)^{q-1} (f-b-q+1)_m Gamma(b+q-1)
            / ((q-1)!(p-q)!) * (b+q+z)_{p-q}
    T*(z) adds the factor (b+1-a+z)_{q-1} / Gamma(b+q-a) per summand.
    """
    b = cplx(b)
    f, m = _vec(f), _mul(m)
    p = int(p)
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    if variant not in ("T", "Tstar"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "Tstar":
        if a is None:
            raise ValueError("variant Tstar requires the parameter a")
        a = cplx(a)
    out = CPoly([mp.mpc(0)], trim=False)
    for q in range(1, p + 1):
        weight = (
            (-1) ** (q - 1)
            * pochhammer_vec(f - (b + q - 1), m)
            * _gamma_or_pole(b + q - 1, "T build")
            / (mp.factorial(q - 1) * mp.factorial(p - q))
        )
        term = CPoly([mp.mpc(1)], trim=False)
        for j in range(p - q):
            term = term * CPoly([b + q + j, mp.mpc(1)], trim=False)
        if variant == "Tstar":
            weight /= _gamma_or_pole(b + q - a, "Tstar build")
            for j in range(q - 1):
                term = term * CPoly([b + 1 - a + j, mp.mpc(1)], trim=False)
        out = out + weight * term
    result = CPoly(out.coeffs)
    if result.is_zero:
        raise DegenerateCaseError("characteristic polynomial is identically zero")
    return result


def build_L(
    a: ComplexLike,
    d: ComplexLike,
    e: ComplexLike,
    b: ComplexLike,
    f,
    m,
    variant: str = "L",
) -> CPoly:
    """Degree-(m-1) polynomial of the two-free-parameter extensions.

    L(t)     = sum_k (d)_k Y_k(b, f, m) (t)_k (e-d-m+1-t)_{m-1-k};
    L-hat(t) couples (t)_k with a terminating 3F2, expanded in the
    rising-factorial basis exactly as for Q-hat.
    Requires (e-d-m+1)_{m-1} != 0, and for L-hat also
    (e-a-m+1)_{m-1} != 0.
    """
    a, d, e, b = cplx(a), cplx(d), cplx(e), cplx(b)
    f, m = _vec(f), _mul(m)
    mt = m.total
    if mt < 1:
        raise ValueError("need m_total >= 1")
    if pochhammer(e - d - mt + 1, mt - 1) == 0:
        raise DegenerateCaseError("(e-d-m+1)_{m-1} = 0")
    yk = [coeff_Y(k, b, f, m) for k in range(mt)]
    if variant == "L":
        out = CPoly([mp.mpc(0)], trim=False)
        for k in range(mt):
            weight = pochhammer(d, k) * yk[k]
            out = out + weight * (
                rising_basis(k) * shifted_reversed_basis(e - d - mt + 1, mt - 1 - k)
            )
        result = CPoly(out.coeffs)
    elif variant == "Lhat":
        if pochhammer(e - a - mt + 1, mt - 1) == 0:
            raise DegenerateCaseError("(e-a-m+1)_{m-1} = 0")
        rise = [mp.mpc(0)] * mt
        for k in range(mt):
            weight = (
                (-1) ** k
                * yk[k]
                * pochhammer(a, k)
                * pochhammer(d, k)
                / (pochhammer(e - a - mt + 1, k) * pochhammer(e - d - mt + 1, k))
            )
            rise[k] += weight
            term = mp.mpc(1)
            for s in range(mt - 1 - k):
                term *= ((-mt + 1 + k + s) * (e - a - d - mt + 1 + s)) / (
                    (e - a - mt + 1 + k + s) * (e - d - mt + 1 + k + s) * (s + 1)
                )
                rise[k + s + 1] += weight * term
        out = CPoly([mp.mpc(0)], trim=False)
        for n, cn in enumerate(rise):
            out = out + cn * rising_basis(n)
        result = CPoly(out.coeffs)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if result.is_zero:
        raise DegenerateCaseError("characteristic polynomial is identically zero")
    return result


def w_poly(b: ComplexLike, f, m) -> CPoly:
    """Weight polynomial W of degree m-1 (see coeffs.w_poly_coeffs)."""
    return CPoly(w_poly_coeffs(b, f, m))

import random

import mpmath as mp
import pytest

from ipdhyp.charpoly import (
    CPoly,
    build_L,
    build_P,
    build_Phat,
    build_Q,
    build_Qhat,
    build_T,
    find_roots,
    w_poly,
)
from ipdhyp.errors import (
    DegenerateCaseError,
    GammaPoleError,
    NonConvergenceError,
    ZeroPolynomialError,
)
from ipdhyp.kernel import (
    IntVector,
    ParamVector,
    cplx,
    gamma,
    pochhammer,
    pochhammer_vec,
)

M_SHAPES = [(1,), (2,), (3,), (1, 1), (2, 1), (1, 1, 1)]


def _rng(seed=211):
    return random.Random(seed)


def _rc(rng):
    return cplx(mp.mpf(rng.uniform(-2, 3)), mp.mpf(rng.uniform(-1, 1)))


def _sample(rng, shape):
    return ParamVector([_rc(rng) for _ in shape]), IntVector(shape)


def _coeff_dev(p1, p2):
    n = max(len(p1.coeffs), len(p2.coeffs))
    a = p1.coeffs + [mp.mpc(0)] * (n - len(p1.coeffs))
    b = p2.coeffs + [mp.mpc(0)] * (n - len(p2.coeffs))
    scale = max(max(abs(c) for c in a), max(abs(c) for c in b), mp.mpf(1))
    return max(abs(x - y) for x, y in zip(a, b)) / scale


class TestCPoly:
    def test_trims_tiny_leading_coefficients(self):
        poly = CPoly([1, 2, mp.mpf("1e-39")])
        assert poly.degree == 1

    def test_zero_polynomial_flag(self):
        assert CPoly([0]).is_zero
        assert not CPoly([0, 1]).is_zero

    def test_from_roots_and_eval(self):
        poly = CPoly.from_roots([2, -1], lead=3)
        assert poly.degree == 2
        assert abs(poly(2)) < mp.mpf("1e-37")
        assert abs(poly(0) - (3 * (0 - 2) * (0 + 1))) < mp.mpf("1e-37")

    def test_monic_of_zero_raises(self):
        with pytest.raises(ZeroPolynomialError):
            CPoly([0]).monic()


class TestFindRoots:
    def test_quadratic(self):
        roots = find_roots(CPoly([-1, 0, 1]))  # t^2 - 1
        got = sorted(roots.roots, key=lambda z: z.real)
        assert abs(got[0] + 1) < mp.mpf("1e-30")
        assert abs(got[1] - 1) < mp.mpf("1e-30")

    def test_double_root_cluster(self):
        # (t-2)^2 (t+1)
        poly = CPoly.from_roots([2, 2, -1])
        roots = find_roots(poly)
        assert roots.residual <= mp.mpf(10) ** (-(mp.mp.dps - 10))
        near_two = sum(1 for r in roots.roots if abs(r - 2) < mp.mpf("1e-10"))
        near_neg1 = sum(1 for r in roots.roots if abs(r + 1) < mp.mpf("1e-25"))
        assert near_two == 2 and near_neg1 == 1

    def test_deterministic_for_seed(self):
        poly = CPoly.from_roots([cplx(1.3, 0.4), cplx(-0.7, 1.1), 2.5])
        first = find_roots(poly, seed=5)
        second = find_roots(poly, seed=5)
        assert all(a == b for a, b in zip(first.roots, second.roots))

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ZeroPolynomialError):
            find_roots(CPoly([0]))

    def test_nonconvergence_budget(self):
        poly = CPoly.from_roots([1, 2, 3, 4])
        with pytest.raises(NonConvergenceError):
            find_roots(poly, max_iterations=1)

    def test_reconstruction_from_roots(self):
        rng = _rng(223)
        for _ in range(6):
            degree = rng.randint(1, 5)
            roots_in = [_rc(rng) for _ in range(degree)]
            lead = _rc(rng)
            poly = CPoly.from_roots(roots_in, lead=lead)
            roots = find_roots(poly)
            rebuilt = CPoly.from_roots(list(roots.roots), lead=1)
            assert _coeff_dev(rebuilt, poly.monic()) <= mp.mpf("1e-28")

    def test_pole_risk_flags(self):
        poly = CPoly.from_roots([-3, cplx(1.5, 0.2)])
        roots = find_roots(poly)
        flagged = [r for r, flag in zip(roots.roots, roots.pole_risk) if flag]
        assert len(flagged) == 1
        assert abs(flagged[0] + 3) < mp.mpf("1e-20")


class TestBuildQ:
    def test_value_at_zero_is_one(self):
        rng = _rng(227)
        for shape in M_SHAPES:
            f, m = _sample(rng, shape)
            b, c = _rc(rng), _rc(rng)
            poly = build_Q(b, c, f, m)
            assert poly.degree == m.total
            assert abs(poly(0) - 1) < mp.mpf("1e-32")

    def test_single_pair_closed_root(self):
        f1, b, c = cplx(1.5, 0.3), cplx(0.4, 0.15), cplx(2.3, -0.2)
        poly = build_Q(b, c, [f1], [1])
        root = find_roots(poly).roots[0]
        expect = f1 * (c - b - 1) / (f1 - b)
        assert abs(root - expect) < mp.mpf("1e-30")

    def test_route_agreement(self):
        rng = _rng(229)
        for _ in range(6):
            f, m = _sample(rng, (2, 1))
            b, c = _rc(rng), _rc(rng)
            eq5 = build_Q(b, c, f, m, route="eq5")
            eq7 = build_Q(b, c, f, m, route="eq7")
            assert _coeff_dev(eq5, eq7) <= mp.mpf("1e-30")

    def test_degenerate_case_detected(self):
        b = cplx(0.4, 0.15)
        m = IntVector([2])
        with pytest.raises(DegenerateCaseError):
            build_Q(b, b + m.total, [cplx(1.5, 0.3)], m)


class TestBuildP:
    def test_value_at_zero(self):
        rng = _rng(233)
        f, m = _sample(rng, (2, 1))
        b, c = _rc(rng), _rc(rng)
        poly = build_P(b, c, f, m)
        fm = pochhammer_vec(f, m)
        assert abs(poly(0) - fm) <= mp.mpf("1e-32") * max(1, abs(fm))

    def test_constant_multiple_of_q(self):
        rng = _rng(239)
        for _ in range(8):
            shape = rng.choice(M_SHAPES)
            f, m = _sample(rng, shape)
            b, c = _rc(rng), _rc(rng)
            q_poly = build_Q(b, c, f, m)
            p_poly = build_P(b, c, f, m)
            assert p_poly.degree == q_poly.degree == m.total
            fm = pochhammer_vec(f, m)
            assert _coeff_dev(p_poly, fm * q_poly) <= mp.mpf("1e-30")

    def test_same_root_as_q_for_single_pair(self):
        f1, b, c = cplx(1.9, -0.4), cplx(0.2, 0.6), cplx(2.7, 0.3)
        root_q = find_roots(build_Q(b, c, [f1], [1])).roots[0]
        root_p = find_roots(build_P(b, c, [f1], [1])).roots[0]
        assert abs(root_q - root_p) < mp.mpf("1e-28")


class TestBuildQhatPhat:
    def test_values_at_zero_are_one(self):
        rng = _rng(241)
        f, m = _sample(rng, (2, 1))
        a, b, c = _rc(rng), _rc(rng), _rc(rng)
        qhat = build_Qhat(a, b, c, f, m)
        phat = build_Phat(a, b, c, f, m)
        assert abs(qhat(0) - 1) < mp.mpf("1e-30")
        assert abs(phat(0) - 1) < mp.mpf("1e-30")

    def test_coefficientwise_identity(self):
        rng = _rng(251)
        for _ in range(8):
            shape = rng.choice(M_SHAPES)
            f, m = _sample(rng, shape)
            a, b, c = _rc(rng), _rc(rng), _rc(rng)
            qhat = build_Qhat(a, b, c, f, m)
            phat = build_Phat(a, b, c, f, m)
            assert qhat.degree == phat.degree == m.total
            assert _coeff_dev(qhat, phat) <= mp.mpf("1e-30")

    def test_single_pair_roots_match(self):
        f, m = ParamVector([cplx(1.7, 0.2)]), IntVector([1])
        a, b, c = cplx(0.3, 0.5), cplx(0.8, -0.3), cplx(2.4, 0.4)
        root_q = find_roots(build_Qhat(a, b, c, f, m)).roots[0]
        root_p = find_roots(build_Phat(a, b, c, f, m)).roots[0]
        assert abs(root_q - root_p) < mp.mpf("1e-28")

    def test_degenerate_case(self):
        a, b = cplx(0.3, 0.5), cplx(0.8, -0.3)
        with pytest.raises(DegenerateCaseError):
            build_Qhat(a, b, a + 1, [cplx(1.5)], [1])


class TestBuildT:
    def test_p1_constant(self):
        rng = _rng(257)
        f, m = _sample(rng, (2,))
        b = _rc(rng)
        poly = build_T(b, 1, f, m, variant="T")
        assert poly.degree == 0
        expect = pochhammer_vec([fi - b for fi in f], m) * gamma(b)
        assert abs(poly.coeffs[0] - expect) <= mp.mpf("1e-30") * max(1, abs(expect))

    def test_matches_defining_sum(self):
        # independent re-evaluation of the alternating q-sum at sample points
        rng = _rng(263)
        f, m = _sample(rng, (2, 1))
        b, a = _rc(rng), _rc(rng)
        p = 3
        for variant in ("T", "Tstar"):
            poly = build_T(b, p, f, m, variant=variant, a=a)
            assert poly.degree == p - 1
            for z in (cplx(0.3, 0.7), cplx(-1.2, 0.1), cplx(2.0, -0.5)):
                direct = mp.mpc(0)
                for q in range(1, p + 1):
                    term = (
                        (-1) ** (q - 1)
                        * pochhammer_vec([fi - b - q + 1 for fi in f], m)
                        * gamma(b + q - 1)
                        / (mp.factorial(q - 1) * mp.factorial(p - q))
                        * pochhammer(b + q + z, p - q)
                    )
                    if variant == "Tstar":
                        term *= pochhammer(b + 1 - a + z, q - 1) / gamma(b + q - a)
                    direct += term
                assert abs(poly(z) - direct) <= mp.mpf("1e-30") * max(1, abs(direct))

    def test_tstar_p2_root_matches_closed_form(self):
        rng = _rng(269)
        f, m = _sample(rng, (2,))
        a, b = _rc(rng), _rc(rng)
        poly = build_T(b, 2, f, m, variant="Tstar", a=a)
        root = find_roots(poly).roots[0]
        fb = pochhammer_vec([fi - b for fi in f], m)
        fb1 = pochhammer_vec([fi - b - 1 for fi in f], m)
        lam_star = (b - a + 1) * ((b + 1) * fb - b * fb1) / ((b - a + 1) * fb - b * fb1)
        assert abs(lam_star + root) <= mp.mpf("1e-28") * max(1, abs(lam_star))

    def test_gamma_pole_rejected(self):
        with pytest.raises(GammaPoleError):
            build_T(cplx(-1), 2, [cplx(1.5)], [1], variant="T")


class TestBuildL:
    def test_cor4_closed_roots(self):
        a, d, e, b = cplx(0.3, 0.1), cplx(0.6, -0.2), cplx(2.1, 0.3), cplx(0.45, 0.2)
        f0 = cplx(1.4, -0.1)
        f, m = ParamVector([f0]), IntVector([2])
        lam = (2 * f0 - b + 1) * (e - d - 1) / (2 * f0 - b - d + 1)
        root = find_roots(build_L(a, d, e, b, f, m, variant="L")).roots[0]
        assert abs(lam - root) <= mp.mpf("1e-28") * max(1, abs(lam))
        lam_star = (
            (2 * f0 - b + 1)
            * (e - a - 1)
            * (e - d - 1)
            / (a * d + (2 * f0 - b + 1) * (e - a - d - 1))
        )
        root_star = find_roots(build_L(a, d, e, b, f, m, variant="Lhat")).roots[0]
        assert abs(lam_star - root_star) <= mp.mpf("1e-28") * max(1, abs(lam_star))

    def test_cor5_closed_roots(self):
        a, d, e, b = cplx(0.2, -0.3), cplx(0.7, 0.4), cplx(2.5, -0.1), cplx(0.6, 0.1)
        f = ParamVector([cplx(1.3, 0.1), cplx(2.0, -0.3)])
        m = IntVector([1, 1])
        s = f[0] + f[1] - b
        lam = s * (e - d - 1) / (s - d)
        root = find_roots(build_L(a, d, e, b, f, m, variant="L")).roots[0]
        assert abs(lam - root) <= mp.mpf("1e-28") * max(1, abs(lam))
        lam_star = s * (e - a - 1) * (e - d - 1) / (a * d + s * (e - a - d - 1))
        root_star = find_roots(build_L(a, d, e, b, f, m, variant="Lhat")).roots[0]
        assert abs(lam_star - root_star) <= mp.mpf("1e-28") * max(1, abs(lam_star))

    def test_degenerate_condition(self):
        a, d, b = cplx(0.3), cplx(0.6), cplx(0.45)
        m = IntVector([2])
        with pytest.raises(DegenerateCaseError):
            build_L(a, d, d + m.total - 1, b, [cplx(1.4)], m, variant="L")


class TestDegreeContracts:
    def test_all_degrees(self):
        rng = _rng(271)
        f, m = _sample(rng, (2, 1))
        a, b, c, d, e = (_rc(rng) for _ in range(5))
        mt = m.total
        assert build_Q(b, c, f, m).degree == mt
        assert build_P(b, c, f, m).degree == mt
        assert build_Qhat(a, b, c, f, m).degree == mt
        assert build_Phat(a, b, c, f, m).degree == mt
        for p in (1, 2, 3):
            assert build_T(b, p, f, m, variant="T").degree == p - 1
            assert build_T(b, p, f, m, variant="Tstar", a=a).degree == p - 1
        assert build_L(a, d, e, b, f, m, variant="L").degree == mt - 1
        assert build_L(a, d, e, b, f, m, variant="Lhat").degree == mt - 1
        assert w_poly(b, f, m).degree == mt - 1

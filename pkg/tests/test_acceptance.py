"""Acceptance suite: every criterion prints one PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines as they
complete.  Tolerances are fixed here, at the default 40-digit context.
"""

import random

import mpmath as mp

from ipdhyp.coeffs import IpdSpec, NorlundArgs, norlund_g
from ipdhyp.hypeval import HypFunction, eval_pfq
from ipdhyp.kernel import ParamVector, cplx
from ipdhyp.transforms import apply_degenerate_p, apply_mp1
from ipdhyp.verify import (
    evaluate_case,
    run_suite,
    report_to_json,
    sample_params,
)
from test_verify_cli import _strip_wall_time

SEED = 20260810


def _report(number: int, description: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"ACCEPTANCE {number:02d} {status}: {description}{suffix}")
    return ok


def _worst_case_residual(identity_id: str, count: int, tol) -> tuple:
    """Max residual over sampled cases plus total per-case sample count."""
    worst = mp.mpf(0)
    samples = 0
    for index, case in enumerate(sample_params(identity_id, SEED, count)):
        result = evaluate_case(case, tol, index)
        assert result.status != "skipped", (identity_id, result.skip_reason)
        worst = max(worst, result.max_residual)
        samples += result.samples
    return worst, samples


class TestAcceptance:
    def test_01_first_polynomial_constant_multiple(self):
        tol = mp.mpf("1e-28")
        worst, _ = _worst_case_residual("LEMMA2", 50, tol)
        ok = _report(
            1,
            "P equals (f)_m * Q coefficientwise over 50 samples",
            worst <= tol,
            f"max dev {mp.nstr(worst, 4)}",
        )
        assert ok

    def test_02_hatted_polynomials_coincide(self):
        tol = mp.mpf("1e-28")
        worst, _ = _worst_case_residual("COR2", 50, tol)
        ok = _report(
            2,
            "Q-hat equals P-hat coefficientwise over 50 samples",
            worst <= tol,
            f"max dev {mp.nstr(worst, 4)}",
        )
        assert ok

    def test_03_two_sided_residuals_for_all_transformations(self):
        tol = mp.mpf("1e-28")
        ids = [
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
        ]
        report = run_suite(ids=ids, seed=SEED, count=20, tol=tol)
        summary = report.identity_summary()
        ok = report.exit_code == 0 and report.n_skipped == 0
        for identity_id in ids:
            ok = ok and summary[identity_id]["samples"] >= 160
        # the shifted-difference family must cover p = 1..4 including p > m
        p_seen = set()
        p_gt_m = False
        for case in sample_params("THM4_EQ29", SEED, 20):
            p_seen.add(case.params["p"])
            p_gt_m = p_gt_m or case.params["p"] > case.params["m"].total
        ok = ok and p_seen == {1, 2, 3, 4} and p_gt_m
        worst = max(
            summary[i]["max_residual"] for i in ids if summary[i]["max_residual"]
        )
        ok = _report(
            3,
            "two-sided residuals <= 1e-28 for all ten transformations, "
            "20 cases x 8 points each",
            ok,
            f"worst {mp.nstr(worst, 4)}",
        )
        assert ok

    def test_04_unit_argument_summations(self):
        tol = mp.mpf("1e-28")
        worst_m, _ = _worst_case_residual("MINTON", 20, tol)
        worst_k, _ = _worst_case_residual("KARLSSON", 20, tol)
        instance = eval_pfq(
            HypFunction(ParamVector([-2, "0.5", 3]), ParamVector(["1.5", 2])), 1
        ).value
        instance_ok = abs(instance - mp.mpf("0.4")) <= tol
        ok = _report(
            4,
            "unit-argument summations match gamma closed forms (20 cases each; "
            "terminating instance = 0.4)",
            worst_m <= tol and worst_k <= tol and instance_ok,
            f"worst {mp.nstr(max(worst_m, worst_k), 4)}",
        )
        assert ok

    def test_05_finite_sum_lemmas_exhaustive(self):
        tol = mp.mpf("1e-28")
        worst3, n3 = _worst_case_residual("LEMMA3", 5, tol)
        worst4, n4 = _worst_case_residual("LEMMA4", 5, tol)
        # all pairs 0 <= i <= k <= m <= 6: 84 per case; all k <= m <= 5: 63
        ok = worst3 <= tol and worst4 <= tol and n3 == 5 * 84 and n4 == 5 * 63
        ok = _report(
            5,
            "index-sum lemmas hold exhaustively (m <= 6 and m <= 5)",
            ok,
            f"max dev {mp.nstr(max(worst3, worst4), 4)}",
        )
        assert ok

    def test_06_closed_form_roots(self):
        tol = mp.mpf("1e-25")
        worst = mp.mpf(0)
        for identity_id in ("COR3", "COR4", "COR5"):
            got, _ = _worst_case_residual(identity_id, 20, tol)
            worst = max(worst, got)
        ok = _report(
            6,
            "closed-form shifted parameters match root extraction "
            "(20 samples each)",
            worst <= tol,
            f"max dev {mp.nstr(worst, 4)}",
        )
        assert ok

    def test_07_inverse_factorial_coefficients(self):
        tol = mp.mpf("1e-30")
        rng = random.Random(SEED)

        def draw():
            return cplx(mp.mpf(rng.uniform(-2, 3)), mp.mpf(rng.uniform(-1, 1)))

        worst = mp.mpf(0)
        for p in (2, 3, 4):
            args = NorlundArgs(
                ParamVector([draw() for _ in range(p - 1)]),
                ParamVector([draw() for _ in range(p)]),
            )
            alpha = draw()
            perm = list(range(p))
            rng.shuffle(perm)
            permuted = NorlundArgs(args.a, ParamVector([args.b[i] for i in perm]))
            for n in range(9):
                routes = [
                    norlund_g(n, args, route=r)
                    for r in ("recurrence", "explicit", "closed")
                ]
                scale = max(1, abs(routes[0]))
                worst = max(worst, abs(routes[0] - routes[1]) / scale)
                worst = max(worst, abs(routes[0] - routes[2]) / scale)
                shifted = norlund_g(n, args.shifted(alpha), route="recurrence")
                worst = max(worst, abs(shifted - routes[0]) / scale)
                sym = norlund_g(n, permuted, route="explicit")
                worst = max(worst, abs(sym - routes[0]) / scale)
        ok = _report(
            7,
            "inverse-factorial coefficient routes agree (p <= 4, n <= 8, "
            "shift + permutation invariance)",
            worst <= tol,
            f"max dev {mp.nstr(worst, 4)}",
        )
        assert ok

    def test_08_kernel_routes_and_gauss_expansion(self):
        tol = mp.mpf("1e-28")
        worst1, n1 = _worst_case_residual("LEMMA1", 3, tol)
        worst2, n2 = _worst_case_residual("COR1", 3, tol)
        ok = worst1 <= tol and worst2 <= tol and n1 >= 20 and n2 >= 20
        ok = _report(
            8,
            "kernel closed form vs series and the Gauss expansion "
            "(>= 20 samples each)",
            ok,
            f"max dev {mp.nstr(max(worst1, worst2), 4)}",
        )
        assert ok

    def test_09_degenerate_general_overlap(self):
        tol = mp.mpf("1e-26")
        rng = random.Random(SEED + 9)

        def draw():
            return cplx(mp.mpf(rng.uniform(-2, 3)), mp.mpf(rng.uniform(-1, 1)))

        worst = mp.mpf(0)
        checked = 0
        for m_shape, p in (((1,), 2), ((1,), 3), ((1,), 4), ((2,), 3), ((2,), 4)):
            spec = None
            while spec is None:
                b = draw()
                cand = IpdSpec(
                    b=b,
                    f=ParamVector([draw() for _ in m_shape]),
                    m=m_shape,
                    a=draw(),
                    c=b + p,
                )
                try:
                    general = apply_mp1(cand)
                    degenerate = apply_degenerate_p(
                        IpdSpec(b=cand.b, f=cand.f, m=cand.m, a=cand.a),
                        p,
                        variant="eq29",
                    )
                    spec = cand
                except Exception:
                    continue
            for _ in range(4):
                x = cplx(mp.mpf(rng.uniform(-0.3, 0.3)), mp.mpf(rng.uniform(-0.3, 0.3)))
                one = general.evaluate(x, mp.mpf("1e-34"))
                two = degenerate.evaluate(x, mp.mpf("1e-34"))
                worst = max(worst, abs(one - two) / max(1, abs(one)))
                checked += 1
        ok = _report(
            9,
            "general and shifted-difference transformations agree on their "
            "overlap (c = b+p, p > m)",
            worst <= tol and checked == 20,
            f"max dev {mp.nstr(worst, 4)}",
        )
        assert ok

    def test_10_report_determinism(self):
        one = report_to_json(run_suite(seed=SEED, count=2))
        two = report_to_json(run_suite(seed=SEED, count=2))
        ok = _strip_wall_time(one) == _strip_wall_time(two)
        ok = _report(10, "verification reports are byte-identical for a fixed seed", ok)
        assert ok

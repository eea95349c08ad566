"""The complete critical list end to end, with an independent
enumerative oracle for the convex cases.

For a generic complete intersection of degrees (l_1..l_P) cut out in
P^n by a critical convex sum, the degree-1 number counts its lines.
That count has a classical closed form on the Grassmannian of lines:
expand prod_a prod_{m=0}^{l_a} (m x1 + (l_a - m) x2) against Schur
polynomials in the two Chern roots and take the coefficient of the top
class, i.e. the coefficient of x1^n x2^(n-1) after multiplying by
(x1 - x2).  This shares no code with the pipeline.
"""

from fractions import Fraction

from mirrorcalc.bundles import CRITICAL_BUNDLES
from mirrorcalc.pipeline import PipelineCase, classify, run_pipeline


def line_count(st):
    # dense bivariate polynomial as {(e1, e2): coeff}
    poly = {(0, 0): 1}
    for l in st.convex:
        for m in range(l + 1):
            new = {}
            for (e1, e2), c in poly.items():
                if m:
                    new[(e1 + 1, e2)] = new.get((e1 + 1, e2), 0) + c * m
                if l - m:
                    new[(e1, e2 + 1)] = new.get((e1, e2 + 1), 0) + c * (l - m)
            poly = new
    n = st.n
    return poly.get((n - 1, n - 1), 0) - poly.get((n, n - 2), 0)


def test_line_counts_match_degree_one():
    for st in CRITICAL_BUNDLES:
        if classify(st) is not PipelineCase.CASE1:
            continue
        result = run_pipeline(st, 2)
        d, value, integral = result.instanton[0]
        assert (d, integral) == (1, True)
        assert value == line_count(st), st


def test_quintic_line_count_is_classical():
    assert line_count(CRITICAL_BUNDLES[3]) == 2875


def test_whole_critical_list_runs_clean():
    for st in CRITICAL_BUNDLES:
        result = run_pipeline(st, 4)
        assert all(result.checks.values()), (st, result.checks)
        assert all(flag for _, _, flag in result.instanton), st
        assert all(isinstance(k, Fraction) for k in result.K)
